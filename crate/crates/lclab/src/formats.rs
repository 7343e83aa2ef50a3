//! JSON and CSV encodings of the core domain types.
//!
//! Every JSON writer has a matching reader that rebuilds the value exactly.
//! Rationals travel as `"n"` or `"n/d"` strings, polynomials as `"1+x+x^3"`.

use std::fmt::Write as _;

use lclab_core::asymptotics::{ConvergenceReport, ExtremaReport, OctaveError, Piece, PiecewiseQuadratic};
use lclab_core::complexity::ComplexitySeq;
use lclab_core::genfun::{FrameworkInstance, RationalPoly, RuleOrigin};
use lclab_core::rational::to_f64;
use lclab_core::recursion::{Flavor, RecursionSpec};
use lclab_core::structure::{
    BlockMapKind, IntersectionTable, PartVerdict, SuspicionReport, TheoremPart, Verdict,
};
use lclab_core::{GfpPoly, PrimeModulus, Rational};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn bad(what: impl Into<String>) -> FormatError {
    FormatError(what.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, FormatError> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str, FormatError> {
    field(v, key)?.as_str().ok_or_else(|| bad(format!("`{key}` must be a string")))
}

fn u64_field(v: &Value, key: &str) -> Result<u64, FormatError> {
    field(v, key)?.as_u64().ok_or_else(|| bad(format!("`{key}` must be a nonnegative integer")))
}

fn i64_field(v: &Value, key: &str) -> Result<i64, FormatError> {
    field(v, key)?.as_i64().ok_or_else(|| bad(format!("`{key}` must be an integer")))
}

fn bool_field(v: &Value, key: &str) -> Result<bool, FormatError> {
    field(v, key)?.as_bool().ok_or_else(|| bad(format!("`{key}` must be a boolean")))
}

fn array_field<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>, FormatError> {
    field(v, key)?.as_array().ok_or_else(|| bad(format!("`{key}` must be an array")))
}

fn rational(v: &Value) -> Result<Rational, FormatError> {
    let s = v.as_str().ok_or_else(|| bad("rationals are encoded as strings"))?;
    s.parse().map_err(|_| bad(format!("not a rational: {s:?}")))
}

fn rational_field(v: &Value, key: &str) -> Result<Rational, FormatError> {
    rational(field(v, key)?)
}

/// `1+x+x^3` style rendering; coefficients other than 1 are written in front.
pub fn algebraic(t: &GfpPoly) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for i in 0..t.len() {
        let c = t.coeff(i);
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        match (c, i) {
            (_, 0) => write!(out, "{c}").unwrap(),
            (1, 1) => out.push('x'),
            (1, _) => write!(out, "x^{i}").unwrap(),
            (_, 1) => write!(out, "{c}x").unwrap(),
            _ => write!(out, "{c}x^{i}").unwrap(),
        }
    }
    out
}

/// Inverse of [`algebraic`]; repeated powers add up.
pub fn parse_algebraic(m: PrimeModulus, s: &str) -> Result<GfpPoly, FormatError> {
    let p = m.get() as u64;
    let mut coeffs: Vec<u64> = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        let (c, e) = match term.find('x') {
            None => (term, 0usize),
            Some(at) => {
                let e = match &term[at + 1..] {
                    "" => 1,
                    rest => rest
                        .strip_prefix('^')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| bad(format!("bad exponent in {term:?}")))?,
                };
                (&term[..at], e)
            }
        };
        let c: u64 = match c {
            "" if e > 0 => 1,
            _ => c.parse().map_err(|_| bad(format!("bad coefficient in {term:?}")))?,
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] = (coeffs[e] + c) % p;
    }
    let coeffs: Vec<u32> = coeffs.into_iter().map(|c| c as u32).collect();
    Ok(GfpPoly::from_coeffs(m, &coeffs))
}

pub fn complexity_csv(seq: &ComplexitySeq) -> String {
    let mut out = String::from("k,a_k,exact\n");
    for (k, (a, exact)) in seq.values().iter().zip(seq.exact_flags()).enumerate() {
        writeln!(out, "{k},{a},{exact}").unwrap();
    }
    out
}

pub fn complexity_json(seq: &ComplexitySeq) -> Value {
    let rec = seq.record();
    json!({
        "p": seq.spec().modulus().get(),
        "rule": seq.spec().rule().to_text(),
        "initial": seq.spec().initial().to_text(),
        "values": seq.values(),
        "exact": seq.exact_flags(),
        "rows_scanned": rec.rows_scanned,
    })
}

fn kind_from(s: &str) -> Result<BlockMapKind, FormatError> {
    BlockMapKind::ALL.into_iter().find(|k| k.to_string() == s).ok_or_else(|| bad(format!("unknown map {s:?}")))
}

fn part_from(s: &str) -> Result<TheoremPart, FormatError> {
    [TheoremPart::I, TheoremPart::II, TheoremPart::III, TheoremPart::IV]
        .into_iter()
        .find(|p| p.to_string() == s)
        .ok_or_else(|| bad(format!("unknown theorem part {s:?}")))
}

pub fn suspicion_json(r: &SuspicionReport) -> Value {
    let parts: Vec<Value> = r
        .parts
        .iter()
        .map(|v| json!({"map": v.kind.to_string(), "part": v.part.to_string(), "injective": v.injective}))
        .collect();
    json!({
        "rule": algebraic(&r.rule),
        "o": algebraic(&r.o),
        "e": algebraic(&r.e),
        "gcd": algebraic(&r.gcd),
        "gcd_reduced": algebraic(&r.gcd_reduced),
        "c0_nonzero": r.c0_nonzero,
        "verdict": match r.verdict {
            Verdict::Suspicious => "suspicious",
            Verdict::Nonsuspicious => "nonsuspicious",
        },
        "parts": parts,
    })
}

pub fn suspicion_from_json(v: &Value) -> Result<SuspicionReport, FormatError> {
    let m = PrimeModulus::TWO;
    let poly = |key: &str| parse_algebraic(m, str_field(v, key)?);
    let verdict = match str_field(v, "verdict")? {
        "suspicious" => Verdict::Suspicious,
        "nonsuspicious" => Verdict::Nonsuspicious,
        other => return Err(bad(format!("unknown verdict {other:?}"))),
    };
    let parts = array_field(v, "parts")?
        .iter()
        .map(|p| {
            Ok(PartVerdict {
                kind: kind_from(str_field(p, "map")?)?,
                part: part_from(str_field(p, "part")?)?,
                injective: bool_field(p, "injective")?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let parts: [PartVerdict; 2] = parts.try_into().map_err(|_| bad("`parts` must have two entries"))?;
    Ok(SuspicionReport {
        rule: poly("rule")?,
        o: poly("o")?,
        e: poly("e")?,
        gcd: poly("gcd")?,
        gcd_reduced: poly("gcd_reduced")?,
        c0_nonzero: bool_field(v, "c0_nonzero")?,
        verdict,
        parts,
    })
}

pub const INTERSECTION_HEADER: &str =
    "k,a1,a2,b1,b2,a1a2,a1b1,a1b2,a2b1,a2b2,b1b2,a1a2b1,a1a2b2,a1b1b2,a2b1b2,a1a2b1b2,union,c_cap";

pub fn intersection_row(t: &IntersectionTable) -> String {
    let cols = [
        t.k, t.a1, t.a2, t.b1, t.b2, t.a1a2, t.a1b1, t.a1b2, t.a2b1, t.a2b2, t.b1b2, t.a1a2b1, t.a1a2b2,
        t.a1b1b2, t.a2b1b2, t.a1a2b1b2, t.union,
    ];
    let mut out = cols.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    write!(out, ",{}", t.c_cap).unwrap();
    out
}

pub fn recursion_json(r: &RecursionSpec) -> Value {
    json!({
        "p": r.p,
        "order": r.order,
        "constant": r.constant,
        "threshold": r.threshold,
        "verified_range": [r.threshold, r.verified_to],
        "flavor": match r.flavor {
            Flavor::TheoremMainEvenOdd => "main",
            Flavor::GeneralOrder => "general",
        },
    })
}

pub fn recursion_from_json(v: &Value) -> Result<RecursionSpec, FormatError> {
    let range = array_field(v, "verified_range")?;
    let [lo, hi] = range.as_slice() else { return Err(bad("`verified_range` must have two entries")) };
    let (lo, hi) = (lo.as_u64(), hi.as_u64());
    let (Some(lo), Some(hi)) = (lo, hi) else { return Err(bad("`verified_range` entries must be integers")) };
    let threshold = u64_field(v, "threshold")?;
    if lo != threshold {
        return Err(bad("`verified_range` must start at the threshold"));
    }
    let flavor = match v.get("flavor").and_then(Value::as_str).unwrap_or("main") {
        "main" => Flavor::TheoremMainEvenOdd,
        "general" => Flavor::GeneralOrder,
        other => return Err(bad(format!("unknown flavor {other:?}"))),
    };
    Ok(RecursionSpec {
        p: u64_field(v, "p")? as u32,
        order: u64_field(v, "order")? as usize,
        constant: i64_field(v, "constant")?,
        threshold: threshold as usize,
        verified_to: hi as usize,
        flavor,
    })
}

fn dense(q: &RationalPoly) -> Vec<Value> {
    let top = q.degree().unwrap_or(0).max(0);
    (0..=top).map(|e| Value::String(q.coeff(e).to_string())).collect()
}

pub fn framework_json(fw: &FrameworkInstance) -> Result<Value, FormatError> {
    let origin = fw.origin.as_ref().ok_or_else(|| bad("only rule-derived frameworks have a JSON form"))?;
    let lambda = fw.lambda.integer_coeffs().ok_or_else(|| bad("lambda is not an integer polynomial"))?;
    Ok(json!({
        "p": fw.p,
        "n": origin.n,
        "lambda": lambda,
        "R": dense(&fw.r),
        "C": fw.c.to_string(),
        "N": origin.threshold,
        "C_cap": origin.c_cap,
    }))
}

pub fn framework_from_json(v: &Value) -> Result<FrameworkInstance, FormatError> {
    let r = array_field(v, "R")?.iter().map(rational).collect::<Result<Vec<_>, _>>()?;
    let origin = RuleOrigin {
        n: u64_field(v, "n")? as usize,
        threshold: u64_field(v, "N")? as usize,
        c_cap: i64_field(v, "C_cap")?,
    };
    let fw = FrameworkInstance::from_rule_parts(RationalPoly::from_coeffs(0, r), origin)
        .map_err(|e| bad(e.to_string()))?;
    let lambda: Vec<i64> = array_field(v, "lambda")?
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| bad("`lambda` entries must be integers")))
        .collect::<Result<_, _>>()?;
    if fw.p as u64 != u64_field(v, "p")?
        || fw.lambda != RationalPoly::from_ints(&lambda)
        || fw.c != rational_field(v, "C")?
    {
        return Err(bad("p, lambda or C disagree with n"));
    }
    Ok(fw)
}

pub fn piecewise_json(f: &PiecewiseQuadratic) -> Value {
    let pieces: Vec<Value> = f
        .pieces
        .iter()
        .map(|q| {
            json!({
                "lo": q.lo.to_string(),
                "hi": q.hi.to_string(),
                "a": q.a.to_string(),
                "b": q.b.to_string(),
                "c": q.c.to_string(),
            })
        })
        .collect();
    json!({"p": f.p, "pieces": pieces})
}

pub fn piecewise_from_json(v: &Value) -> Result<PiecewiseQuadratic, FormatError> {
    let pieces = array_field(v, "pieces")?
        .iter()
        .map(|q| {
            Ok(Piece {
                lo: rational_field(q, "lo")?,
                hi: rational_field(q, "hi")?,
                a: rational_field(q, "a")?,
                b: rational_field(q, "b")?,
                c: rational_field(q, "c")?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let f = PiecewiseQuadratic { p: u64_field(v, "p")? as u32, pieces };
    f.validate().map_err(|e| bad(e.to_string()))?;
    Ok(f)
}

pub fn extrema_json(e: &ExtremaReport) -> Value {
    json!({
        "sup": e.sup.to_string(),
        "argmax": e.argmax.to_string(),
        "inf": e.inf.to_string(),
        "argmin": e.argmin.to_string(),
    })
}

pub fn extrema_from_json(v: &Value) -> Result<ExtremaReport, FormatError> {
    Ok(ExtremaReport {
        sup: rational_field(v, "sup")?,
        argmax: rational_field(v, "argmax")?,
        inf: rational_field(v, "inf")?,
        argmin: rational_field(v, "argmin")?,
    })
}

pub const CONVERGENCE_HEADER: &str = "logp_y,f_at_x,alpha_ratio,a_ratio";

/// Plot-ready rows; the exact values are in [`convergence_json`].
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in &report.rows {
        writeln!(
            out,
            "{:.9},{:.12},{:.12},{:.12}",
            r.logp_y,
            to_f64(&r.f_at_x),
            to_f64(&r.alpha_ratio),
            to_f64(&r.a_ratio)
        )
        .unwrap();
    }
    out
}

fn octave_json(o: &OctaveError) -> Value {
    json!({
        "octave": o.octave,
        "k_lo": o.k_lo,
        "k_hi": o.k_hi,
        "max_error": o.max_error.to_string(),
        "max_error_f64": to_f64(&o.max_error),
        "argmax": o.argmax,
    })
}

pub fn convergence_json(report: &ConvergenceReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "logp_y": r.logp_y,
                "k": r.k,
                "f_at_x": r.f_at_x.to_string(),
                "alpha_ratio": r.alpha_ratio.to_string(),
                "a_ratio": r.a_ratio.to_string(),
            })
        })
        .collect();
    let octaves: Vec<Value> = report.octaves.iter().map(octave_json).collect();
    json!({"rows": rows, "octaves": octaves})
}

/// One line per octave: `octave k_lo..=k_hi max_error (at k)`.
pub fn octave_summary(octaves: &[OctaveError]) -> String {
    let mut out = String::new();
    for o in octaves {
        writeln!(out, "octave {} k {}..={} max_error {:.6e} at k = {}", o.octave, o.k_lo, o.k_hi, to_f64(&o.max_error), o.argmax)
            .unwrap();
    }
    out
}

pub fn error_json(kind: &str, message: &str) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), kind.into());
    m.insert("message".into(), message.into());
    json!({ "error": m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(p: u64) -> Result<PrimeModulus, lclab_core::modulus::ModulusError> {
        PrimeModulus::new(p)
    }

    #[test]
    fn algebraic_round_trip() {
        let m3 = modulus(3).unwrap();
        for (p, s) in [(2, "11011"), (2, "1"), (3, "0201"), (3, "12")] {
            let m = modulus(p).unwrap();
            let t = GfpPoly::parse(m, s).unwrap();
            assert_eq!(parse_algebraic(m, &algebraic(&t)).unwrap(), t);
        }
        assert_eq!(algebraic(&GfpPoly::parse(m3, "0201").unwrap()), "2x+x^3");
        assert_eq!(algebraic(&GfpPoly::parse(PrimeModulus::TWO, "11").unwrap()), "1+x");
        assert!(parse_algebraic(m3, "x^").is_err());
    }

    proptest::proptest! {
        #[test]
        fn algebraic_form_parses_back(p in proptest::sample::select(vec![2u64, 3, 5, 7, 13]), c in proptest::collection::vec(0u32..13, 1..12)) {
            let m = PrimeModulus::new(p).unwrap();
            let c: Vec<u32> = c.into_iter().map(|x| x % p as u32).collect();
            let t = GfpPoly::from_coeffs(m, &c);
            proptest::prop_assert_eq!(parse_algebraic(m, &algebraic(&t)).unwrap(), t);
        }
    }
}
