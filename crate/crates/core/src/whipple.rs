//! Whipple's second summation for the well-poised `4F3` at `z = -1`:
//!
//! ```text
//! 4F3(a, 1 + a/2, b, c; a/2, a - b + 1, a - c + 1; -1)
//!     = Γ(a-b+1) Γ(a-c+1) / (Γ(a+1) Γ(a-b-c+1))
//! ```
//!
//! The right-hand side is produced exactly when `b` (or `c`) is a nonpositive
//! integer, and in floating point through [`log_gamma`] when all four Gamma
//! arguments are positive.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{int, nonpositive_integer, pochhammer, to_f64, Rational};
use crate::hyper_series::HypSeries;

/// Parameters `(a, b, c)` of a Whipple-shaped series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhippleMatch {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WhippleError {
    #[error("neither b nor c is a nonpositive integer")]
    NotTerminating,
    #[error("closed form has a pole: ({0})_{1} vanishes")]
    PoleInClosedForm(Rational, u64),
    #[error("log-gamma argument {0} is not positive")]
    Domain(f64),
}

impl WhippleMatch {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        WhippleMatch { a, b, c }
    }

    /// The series `4F3(a, 1+a/2, b, c; a/2, a-b+1, a-c+1; -1)`.
    pub fn series(&self) -> HypSeries {
        let half = &self.a / int(2);
        HypSeries::new(
            vec![self.a.clone(), &half + int(1), self.b.clone(), self.c.clone()],
            vec![half, &self.a - &self.b + int(1), &self.a - &self.c + int(1)],
            int(-1),
        )
    }

    /// `[a - b + 1, a - c + 1, a + 1, a - b - c + 1]`.
    pub fn gamma_arguments(&self) -> [Rational; 4] {
        let one = Rational::one();
        [
            &self.a - &self.b + &one,
            &self.a - &self.c + &one,
            &self.a + &one,
            &self.a - &self.b - &self.c + &one,
        ]
    }
}

fn remove_one(values: &mut Vec<Rational>, target: &Rational) -> bool {
    match values.iter().position(|v| v == target) {
        Some(pos) => {
            values.remove(pos);
            true
        }
        None => false,
    }
}

fn same_multiset(x: &[Rational], y: &[Rational]) -> bool {
    let mut x = x.to_vec();
    let mut y = y.to_vec();
    x.sort();
    y.sort();
    x == y
}

/// Finds `(a, b, c)` such that `s` is the Whipple-shaped series. Prefers the
/// largest `a`, then the smallest `b`.
pub fn match_whipple(s: &HypSeries) -> Option<WhippleMatch> {
    if s.p() != 4 || s.q() != 3 || s.argument != int(-1) {
        return None;
    }
    let mut best: Option<WhippleMatch> = None;
    for (i, a) in s.upper.iter().enumerate() {
        let half = a / int(2);
        let companion = &half + int(1);
        let mut upper: Vec<Rational> = s.upper.clone();
        upper.remove(i);
        let mut lower = s.lower.clone();
        if !remove_one(&mut upper, &companion) || !remove_one(&mut lower, &half) {
            continue;
        }
        let (b, c) = if upper[0] <= upper[1] {
            (upper[0].clone(), upper[1].clone())
        } else {
            (upper[1].clone(), upper[0].clone())
        };
        let expected = [a - &b + int(1), a - &c + int(1)];
        if !same_multiset(&expected, &lower) {
            continue;
        }
        let candidate = WhippleMatch::new(a.clone(), b, c);
        let better = match &best {
            None => true,
            Some(cur) => candidate.a > cur.a || (candidate.a == cur.a && candidate.b < cur.b),
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}

/// Exact right-hand side `(a+1)_M / (a-c+1)_M` for `b = -M` (or `c = -M`).
pub fn rhs_exact_terminating(m: &WhippleMatch) -> Result<Rational, WhippleError> {
    let (shift, other) = if let Some(n) = nonpositive_integer(&m.b) {
        (n, &m.c)
    } else if let Some(n) = nonpositive_integer(&m.c) {
        (n, &m.b)
    } else {
        return Err(WhippleError::NotTerminating);
    };
    let one = Rational::one();
    let base = &m.a - other + &one;
    let den = pochhammer(&base, shift);
    if den.is_zero() {
        return Err(WhippleError::PoleInClosedForm(base, shift));
    }
    Ok(pochhammer(&(&m.a + &one), shift) / den)
}

/// Lanczos coefficients for g = 7, nine terms (Godfrey's set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFICIENTS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64, WhippleError> {
    if x.is_nan() || x <= 0.0 {
        return Err(WhippleError::Domain(x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        return Ok(log_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFICIENTS[0];
    for (i, c) in LANCZOS_COEFFICIENTS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln())
}

/// `Γ(a-b+1) Γ(a-c+1) / (Γ(a+1) Γ(a-b-c+1))` through [`log_gamma`].
pub fn rhs_numeric(m: &WhippleMatch) -> Result<f64, WhippleError> {
    let args = m.gamma_arguments().map(|x| to_f64(&x));
    let mut lg = [0.0f64; 4];
    for (out, &x) in lg.iter_mut().zip(args.iter()) {
        *out = log_gamma(x)?;
    }
    Ok((lg[0] + lg[1] - lg[2] - lg[3]).exp())
}
