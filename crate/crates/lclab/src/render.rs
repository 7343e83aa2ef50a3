//! Text and PBM renderings of the first rows of an automaton.

use std::fmt::Write as _;

use lclab_core::automaton::AutomatonSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pad {
    /// Each line stops at its last nonzero cell.
    None,
    /// Lines are filled with `0` to the full width.
    Zero,
    /// Lines are filled with spaces to the full width.
    Blank,
}

/// rows·n + deg I + 1 cells, which covers every rendered row.
pub fn width(spec: &AutomatonSpec, rows: usize) -> usize {
    rows * spec.degree() + spec.initial().degree().unwrap_or(0) + 1
}

fn cells(spec: &AutomatonSpec, rows: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    spec.rows().take(rows).map(|row| (0..row.coeffs.len()).map(|i| row.coeffs.coeff(i)).collect())
}

/// One line per row, left-aligned at exponent 0. Symbols are digits, or
/// comma-separated residues for p > 10.
pub fn text(spec: &AutomatonSpec, rows: usize, pad: Pad) -> String {
    let w = width(spec, rows);
    let wide = spec.modulus().get() > 10;
    let mut out = String::new();
    for row in cells(spec, rows) {
        let mut line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        match pad {
            Pad::None => {}
            Pad::Zero => line.resize(w, "0".into()),
            Pad::Blank => line.resize(w, " ".into()),
        }
        out.push_str(&line.join(if wide { "," } else { "" }));
        out.push('\n');
    }
    out
}

/// Plain PBM (P1): nonzero cells are black.
pub fn pbm(spec: &AutomatonSpec, rows: usize) -> String {
    let w = width(spec, rows);
    let mut out = format!("P1\n{w} {rows}\n");
    for row in cells(spec, rows) {
        for (i, chunk) in (0..w).collect::<Vec<_>>().chunks(35).enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for (j, &x) in chunk.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                let bit = row.get(x).is_some_and(|&c| c != 0);
                write!(out, "{}", bit as u8).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_rows() {
        let spec = AutomatonSpec::parse(2, "11", "1").unwrap();
        assert_eq!(text(&spec, 4, Pad::None), "1\n11\n101\n1111\n");
        assert_eq!(text(&spec, 2, Pad::Zero), "100\n110\n");
        assert_eq!(text(&spec, 1, Pad::Blank), "1 \n");
        assert_eq!(pbm(&spec, 2), "P1\n3 2\n1 0 0\n1 1 0\n");
    }

    #[test]
    fn first_row_of_a_wide_rule() {
        let spec = AutomatonSpec::parse(2, "101011", "1").unwrap();
        assert_eq!(text(&spec, 2, Pad::None), "1\n101011\n");
    }

    #[test]
    fn residues_above_one_are_black() {
        let spec = AutomatonSpec::parse(3, "12", "1").unwrap();
        assert_eq!(text(&spec, 3, Pad::None), "1\n12\n111\n");
        assert!(pbm(&spec, 3).ends_with("1 1 1 0\n"));
    }
}
