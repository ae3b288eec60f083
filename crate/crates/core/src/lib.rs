//! Exact arithmetic for generalized hypergeometric series.
//!
//! * [`exact_arith`]: factorials, binomials, Pochhammer symbols over big rationals.
//! * [`hyper_series`]: `pFq` classification and exact or floating evaluation.
//! * [`term_recognize`]: term ratio `P(n)/Q(n)` to `prefactor * pFq`.
//! * [`whipple`]: Whipple's second `4F3(-1)` summation, exact and via log-Gamma.
//! * [`sesma_identity`]: a binomial sum identity certified by all of the above.
//! * [`cli`]: the `hypercert` command-line front end.

pub mod cli;
pub mod exact_arith;
pub mod hyper_series;
pub mod sesma_identity;
pub mod term_recognize;
pub mod whipple;

mod double_double;

pub use exact_arith::Rational;
pub use hyper_series::{Classification, HypSeries};
pub use sesma_identity::IdentityReport;
pub use term_recognize::{IntPolynomial, PrefactoredSeries, TermRatio};
pub use whipple::WhippleMatch;
