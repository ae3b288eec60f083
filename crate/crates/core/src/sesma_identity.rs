//! The binomial identity
//!
//! ```text
//! sum_{n=0}^{m} C(m,n) C(k+n,m) / C(k+m+n, m+n) * (2n+k+1)/(m+n+k+1) = 1,   k >= m >= 0
//! ```
//!
//! certified three ways: by direct exact summation, as a prefactor times an
//! exactly summed `4F3(-1)`, and as the same prefactor times the Whipple
//! closed form of that `4F3` at `a = k+1, b = -m, c = m+1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact_arith::{binomial_u64, factorial_u64, int, product_range, rat, Rational};
use crate::hyper_series::{eval_exact, HypSeries, SeriesError};
use crate::term_recognize::{IntPolynomial, PrefactoredSeries, TermRatio};
use crate::whipple::{match_whipple, rhs_exact_terminating, WhippleError, WhippleMatch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("identity requires k >= m, got k = {k}, m = {m}")]
    KBelowM { k: u64, m: u64 },
    #[error("summation index n = {n} exceeds m = {m}")]
    IndexAboveM { n: u64, m: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub k: u64,
    pub m: u64,
    pub direct: Rational,
    pub via_series: Rational,
    pub via_whipple: Rational,
    pub all_equal_one: bool,
}

/// The pathway that failed inside [`verify`].
#[derive(Debug, Clone, PartialEq)]
pub enum PathwayFailure {
    Series(SeriesError),
    NoWhippleMatch,
    WrongWhippleMatch(WhippleMatch),
    Whipple(WhippleError),
}

impl fmt::Display for PathwayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathwayFailure::Series(e) => write!(f, "series pathway: {e}"),
            PathwayFailure::NoWhippleMatch => f.write_str("whipple pathway: series has no Whipple shape"),
            PathwayFailure::WrongWhippleMatch(w) => write!(
                f,
                "whipple pathway: matched a = {}, b = {}, c = {} instead of (k+1, -m, m+1)",
                w.a, w.b, w.c
            ),
            PathwayFailure::Whipple(e) => write!(f, "whipple pathway: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Precondition(#[from] IdentityError),
    #[error("(k = {k}, m = {m}): {}", join_failures(.failures))]
    Pathways { k: u64, m: u64, failures: Vec<PathwayFailure> },
}

fn join_failures(failures: &[PathwayFailure]) -> String {
    failures.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn require_k_ge_m(k: u64, m: u64) -> Result<(), IdentityError> {
    if k < m {
        Err(IdentityError::KBelowM { k, m })
    } else {
        Ok(())
    }
}

/// `C(m,n) C(k+n,m) / C(k+m+n, m+n) * (2n+k+1)/(m+n+k+1)`.
pub fn lhs_term(k: u64, m: u64, n: u64) -> Result<Rational, IdentityError> {
    require_k_ge_m(k, m)?;
    if n > m {
        return Err(IdentityError::IndexAboveM { n, m });
    }
    let num = binomial_u64(m, n as i64) * binomial_u64(k + n, m as i64) * BigInt::from(2 * n + k + 1);
    let den = binomial_u64(k + m + n, (m + n) as i64) * BigInt::from(m + n + k + 1);
    Ok(Rational::new(num, den))
}

/// Left-hand side of the identity, summed exactly.
pub fn lhs_sum(k: u64, m: u64) -> Result<Rational, IdentityError> {
    require_k_ge_m(k, m)?;
    Ok(sum_terms(k, m))
}

/// Exact left-hand side for any `k, m >= 0`, including `k < m` where no
/// value is claimed. Out-of-range binomials contribute 0.
pub fn explore_sum(k: u64, m: u64) -> Rational {
    sum_terms(k, m)
}

fn sum_terms(k: u64, m: u64) -> Rational {
    // C(k+m+n, m+n) (k+m+n+1) = (k+m+n+1)! / ((m+n)! k!), so every term has
    // denominator dividing (k+2m+1)!/k!. Summing integer numerators over that
    // common denominator needs a single reduction at the end.
    let common = product_range(k + 1, k + 2 * m + 1);
    let mut total = BigInt::from(0);
    for n in 0..=m {
        let mut numerator = binomial_u64(m, n as i64);
        numerator *= binomial_u64(k + n, m as i64);
        if numerator == BigInt::from(0) {
            continue;
        }
        numerator *= 2 * n + k + 1;
        numerator *= factorial_u64(m + n);
        numerator *= product_range(k + m + n + 2, k + 2 * m + 1);
        total += numerator;
    }
    Rational::new(total, common)
}

/// Consecutive-term ratio of the identity's summand, derived from the binomials.
pub fn sesma_ratio(k: u64, m: u64) -> Result<TermRatio, IdentityError> {
    require_k_ge_m(k, m)?;
    let (k, m) = (k as i64, m as i64);
    let lin = |c0: i64, c1: i64| IntPolynomial::from_i64(&[c0, c1]);
    let num = lin(m, -1)
        .mul(&lin(k + 1, 1))
        .mul(&lin(m + 1, 1))
        .mul(&lin(k + 3, 2));
    let den = lin(1, 1)
        .mul(&lin(k - m + 1, 1))
        .mul(&lin(k + 1, 2))
        .mul(&lin(m + k + 2, 1));
    Ok(TermRatio { num, den, t0: lhs_term(k as u64, m as u64, 0)? })
}

/// `(k+1)! k! / ((k-m)! (k+m+1)!)`.
pub fn prefactor(k: u64, m: u64) -> Result<Rational, IdentityError> {
    require_k_ge_m(k, m)?;
    Ok(Rational::new(
        factorial_u64(k + 1) * factorial_u64(k),
        factorial_u64(k - m) * factorial_u64(k + m + 1),
    ))
}

/// Prefactor times `4F3(k+1, 1+(k+1)/2, -m, m+1; (k+1)/2, k+m+2, k-m+1; -1)`.
pub fn rewrite(k: u64, m: u64) -> Result<PrefactoredSeries, IdentityError> {
    let prefactor = prefactor(k, m)?;
    let (ki, mi) = (k as i64, m as i64);
    let series = HypSeries::new(
        vec![int(ki + 1), rat(ki + 3, 2), int(-mi), int(mi + 1)],
        vec![rat(ki + 1, 2), int(ki + mi + 2), int(ki - mi + 1)],
        int(-1),
    )
    .canonical();
    Ok(PrefactoredSeries { prefactor, series })
}

/// Runs all three pathways and compares them with 1.
pub fn verify(k: u64, m: u64) -> Result<IdentityReport, VerifyError> {
    let direct = lhs_sum(k, m)?;
    let PrefactoredSeries { prefactor, series } = rewrite(k, m)?;
    let mut failures = Vec::new();

    let via_series = match eval_exact(&series) {
        Ok(v) => Some(&prefactor * v),
        Err(e) => {
            failures.push(PathwayFailure::Series(e));
            None
        }
    };

    let expected = WhippleMatch::new(int(k as i64 + 1), int(-(m as i64)), int(m as i64 + 1));
    let via_whipple = match match_whipple(&series) {
        None => {
            failures.push(PathwayFailure::NoWhippleMatch);
            None
        }
        Some(w) if w != expected => {
            failures.push(PathwayFailure::WrongWhippleMatch(w));
            None
        }
        Some(w) => match rhs_exact_terminating(&w) {
            Ok(v) => Some(&prefactor * v),
            Err(e) => {
                failures.push(PathwayFailure::Whipple(e));
                None
            }
        },
    };

    match (via_series, via_whipple) {
        (Some(via_series), Some(via_whipple)) => {
            let one = Rational::one();
            let all_equal_one = direct == one && via_series == one && via_whipple == one;
            Ok(IdentityReport { k, m, direct, via_series, via_whipple, all_equal_one })
        }
        _ => Err(VerifyError::Pathways { k, m, failures }),
    }
}

/// Reports for every `0 <= m <= k <= k_max` in lexicographic `(k, m)` order.
///
/// `jobs` bounds the worker threads; `None` uses rayon's global pool. The
/// output does not depend on the thread count.
pub fn sweep(k_max: u64, jobs: Option<usize>) -> Result<Vec<IdentityReport>, VerifyError> {
    let pairs: Vec<(u64, u64)> = (0..=k_max)
        .flat_map(|k| (0..=k).map(move |m| (k, m)))
        .collect();
    let run = || -> Vec<Result<IdentityReport, VerifyError>> {
        pairs.par_iter().map(|&(k, m)| verify(k, m)).collect()
    };
    let results = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    results.into_iter().collect()
}
