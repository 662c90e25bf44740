//! Exact computation of the invariants of rank-one p-adic differential
//! equations `y' = L(T) y` with polynomial coefficient.
//!
//! The pipeline works in the ring of integers of `Q_p(zeta)`, `zeta` a
//! primitive `p^(d+1)`-th root of unity, at a fixed absolute precision:
//!
//! 1. [`series::tilde_transform`] divides `a_i` by the uniformizer `pi_{d_i}`;
//! 2. [`series::prepare`] rescales `T` so the result is integral and minimal;
//! 3. [`series::truncated_exp`] runs the factorial-scaled exponential recurrence;
//! 4. [`invariants`] reads solubility, the residue series `ê(T)`, and the index.
//!
//! [`witt`] recomputes the index from Artin-Hasse coordinates and [`oracle`]
//! re-derives everything with exact rationals.

pub mod cli;
pub mod corpus;
mod error;
pub mod invariants;
pub mod numbertheory;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod series;
pub mod witt;

pub use error::{Error, Result};
pub use numbertheory::{CycElem, CycInt, CycRing, Params, Valuation, DEFAULT_MARGIN};
pub use poly::{InputPoly, Poly, SymCoeff, SymPoly};
