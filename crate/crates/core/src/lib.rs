//! Additive cellular automata over ℤ/p and their line complexity.
//!
//! The crate covers the whole pipeline from polynomial arithmetic to exact
//! asymptotics:
//!
//! * [`poly`]: polynomials over ℤ/p, bit-packed for p = 2.
//! * [`automaton`]: rows `I·T^r` of the automaton and zero-padded windows.
//! * [`complexity`]: accessible blocks and the line-complexity sequence a(k).
//! * [`structure`]: the block maps `T_A`, `T_B`, their GF(2) matrices,
//!   suspiciousness and intersection tables.
//! * [`recursion`]: fitting and verifying recursions for a(k).
//! * [`genfun`]: exact generating-function layer (P, R, λ, γ).
//! * [`asymptotics`]: the piecewise quadratic limit of a(k)/k².
//!
//! ```
//! use lclab_core::{automaton::AutomatonSpec, complexity::{line_complexity, ScanPolicy}};
//!
//! let spec = AutomatonSpec::parse(2, "11", "1").unwrap();
//! let seq = line_complexity(&spec, 3, &ScanPolicy::default());
//! assert_eq!(seq.values(), &[1, 2, 4, 8]);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod automaton;
pub mod block;
pub mod complexity;
pub mod genfun;
pub mod gf2matrix;
pub mod modulus;
pub mod poly;
pub mod rational;
pub mod recursion;
pub mod structure;

pub use block::Block;
pub use modulus::PrimeModulus;
pub use poly::GfpPoly;
pub use rational::Rational;
