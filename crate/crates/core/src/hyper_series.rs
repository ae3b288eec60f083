//! Generalized hypergeometric series `pFq(a_1..a_p; b_1..b_q; z)`.
//!
//! Terminating series are summed exactly in [`Rational`]; convergent
//! nonterminating ones can be approximated in `f64` with [`eval_numeric`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::double_double::DoubleDouble;
use crate::exact_arith::{format_rational, int, nonpositive_integer, Rational};

/// Term budget for [`eval_numeric`] on nonterminating series.
pub const DEFAULT_MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypSeries {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Every term past index `N` vanishes.
    Terminating(u64),
    NonterminatingConvergent,
    NonterminatingDivergent,
    /// A lower parameter equals `-M` before any termination.
    IllPosed(u64),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Terminating(n) => write!(f, "Terminating({n})"),
            Classification::NonterminatingConvergent => f.write_str("NonterminatingConvergent"),
            Classification::NonterminatingDivergent => f.write_str("NonterminatingDivergent"),
            Classification::IllPosed(m) => write!(f, "IllPosed({m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series does not terminate ({0})")]
    NotTerminating(Classification),
    #[error("lower parameter -{0} produces a pole before termination")]
    PoleEncountered(u64),
    #[error("series diverges")]
    Divergent,
    #[error("no convergence within {0} terms")]
    NonConvergedWithinBudget(usize),
    #[error("floating-point evaluation left double range")]
    NotRepresentable,
    #[error("cancelling nonpositive integer parameter {0} would hide a 0/0 factor")]
    AmbiguousCancellation(Rational),
}

impl HypSeries {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, argument: Rational) -> Self {
        HypSeries { upper, lower, argument }
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Copy with both parameter lists sorted ascending.
    pub fn canonical(&self) -> HypSeries {
        let mut upper = self.upper.clone();
        let mut lower = self.lower.clone();
        upper.sort();
        lower.sort();
        HypSeries { upper, lower, argument: self.argument.clone() }
    }

    /// Ratio `t_{n+1} / t_n` of the normalized terms, `None` if a lower factor vanishes.
    pub fn term_ratio(&self, n: u64) -> Option<Rational> {
        let shift = int(n as i64);
        let mut num = self.argument.clone();
        for a in &self.upper {
            num *= a + &shift;
        }
        let mut den = int(n as i64 + 1);
        for b in &self.lower {
            den *= b + &shift;
        }
        if den.is_zero() {
            None
        } else {
            Some(num / den)
        }
    }
}

impl fmt::Display for HypSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "{}F{}([{}]; [{}]; {})",
            c.p(),
            c.q(),
            join(&c.upper),
            join(&c.lower),
            format_rational(&c.argument)
        )
    }
}

fn min_nonpositive(params: &[Rational]) -> Option<u64> {
    params.iter().filter_map(nonpositive_integer).min()
}

pub fn classify(s: &HypSeries) -> Classification {
    let termination = min_nonpositive(&s.upper);
    let pole = min_nonpositive(&s.lower);
    match (termination, pole) {
        (Some(n), Some(m)) if m < n => return Classification::IllPosed(m),
        (Some(n), _) => return Classification::Terminating(n),
        (None, Some(m)) => return Classification::IllPosed(m),
        (None, None) => {}
    }

    let (p, q) = (s.p(), s.q());
    let z = &s.argument;
    let convergent = if p <= q || z.is_zero() {
        true
    } else if p > q + 1 {
        false
    } else {
        match z.abs().cmp(&Rational::one()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let excess = parametric_excess(s);
                if z.is_positive() {
                    excess.is_positive()
                } else {
                    excess > int(-1)
                }
            }
        }
    };
    if convergent {
        Classification::NonterminatingConvergent
    } else {
        Classification::NonterminatingDivergent
    }
}

/// `sum(lower) - sum(upper)`.
pub fn parametric_excess(s: &HypSeries) -> Rational {
    let lower: Rational = s.lower.iter().sum();
    let upper: Rational = s.upper.iter().sum();
    lower - upper
}

/// Exact sum of a terminating series.
pub fn eval_exact(s: &HypSeries) -> Result<Rational, SeriesError> {
    let n_max = match classify(s) {
        Classification::Terminating(n) => n,
        Classification::IllPosed(m) => return Err(SeriesError::PoleEncountered(m)),
        other => return Err(SeriesError::NotTerminating(other)),
    };
    // Nested evaluation 1 + r_0 (1 + r_1 (1 + ... (1 + r_{N-1}))) over an
    // unreduced integer fraction; one reduction at the end.
    let ratio = IntegerRatio::new(s);
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for n in (0..n_max).rev() {
        let (rn, rd) = ratio.at(n);
        if rd.is_zero() {
            return Err(SeriesError::PoleEncountered(n));
        }
        numer *= &rn;
        denom *= &rd;
        numer += &denom;
    }
    Ok(Rational::new(numer, denom))
}

/// `t_{n+1}/t_n` as a pair of integers, parameters `p/q` entering as `(p + n q)/q`.
struct IntegerRatio {
    upper: Vec<(BigInt, BigInt)>,
    lower: Vec<(BigInt, BigInt)>,
    // z and the parameter denominators, folded: numerator side and denominator side.
    scale_num: BigInt,
    scale_den: BigInt,
}

impl IntegerRatio {
    fn new(s: &HypSeries) -> Self {
        let split = |x: &Rational| (x.numer().clone(), x.denom().clone());
        let upper: Vec<_> = s.upper.iter().map(split).collect();
        let lower: Vec<_> = s.lower.iter().map(split).collect();
        let mut scale_num = s.argument.numer().clone();
        let mut scale_den = s.argument.denom().clone();
        for (_, q) in &lower {
            scale_num *= q;
        }
        for (_, q) in &upper {
            scale_den *= q;
        }
        let g = scale_num.gcd(&scale_den);
        if !g.is_zero() {
            scale_num /= &g;
            scale_den /= &g;
        }
        IntegerRatio { upper, lower, scale_num, scale_den }
    }

    fn at(&self, n: u64) -> (BigInt, BigInt) {
        let n = BigInt::from(n);
        let mut num = self.scale_num.clone();
        for (p, q) in &self.upper {
            num *= p + q * &n;
        }
        let mut den = &self.scale_den * (&n + 1u32);
        for (p, q) in &self.lower {
            den *= p + q * &n;
        }
        let g = num.gcd(&den);
        if g.is_zero() || g.is_one() {
            (num, den)
        } else {
            (num / &g, den / &g)
        }
    }
}

/// Floating-point evaluation with the default term budget.
pub fn eval_numeric(s: &HypSeries, tol: f64) -> Result<f64, SeriesError> {
    eval_numeric_with_budget(s, tol, DEFAULT_MAX_TERMS)
}

/// Floating-point evaluation.
///
/// Terminating series sum all their terms in compensated arithmetic. Nonterminating convergent series
/// stop once three consecutive terms fall below `tol * max(1, |partial sum|)`.
pub fn eval_numeric_with_budget(s: &HypSeries, tol: f64, max_terms: usize) -> Result<f64, SeriesError> {
    let limit = match classify(s) {
        Classification::Terminating(n) => Some(n),
        Classification::NonterminatingConvergent => None,
        Classification::NonterminatingDivergent => return Err(SeriesError::Divergent),
        Classification::IllPosed(m) => return Err(SeriesError::PoleEncountered(m)),
    };
    let upper: Vec<DoubleDouble> = s.upper.iter().map(DoubleDouble::from_rational).collect();
    let lower: Vec<DoubleDouble> = s.lower.iter().map(DoubleDouble::from_rational).collect();
    let z = DoubleDouble::from_rational(&s.argument);

    // Terms and the running sum are carried in double-double so that the
    // alternating cancellation typical of z = -1 stays below double rounding.
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut small_run = 0;
    let mut n: u64 = 0;
    loop {
        if let Some(last) = limit {
            if n >= last {
                break;
            }
        } else if n as usize >= max_terms {
            return Err(SeriesError::NonConvergedWithinBudget(max_terms));
        }
        let shift = DoubleDouble::from_f64(n as f64);
        let num = upper.iter().fold(z, |acc, &a| acc * (a + shift));
        let den = lower
            .iter()
            .fold(shift + DoubleDouble::ONE, |acc, &b| acc * (b + shift));
        term = term * (num / den);
        sum = sum + term;
        n += 1;
        if !term.is_finite() || !sum.is_finite() {
            return Err(SeriesError::NotRepresentable);
        }
        if limit.is_none() {
            if term.abs().hi < tol * sum.abs().hi.max(1.0) {
                small_run += 1;
                if small_run == 3 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
    }
    Ok(sum.to_f64())
}

/// Removes parameters shared by both lists, one for one.
pub fn normalize(s: &HypSeries) -> Result<(HypSeries, Vec<Rational>), SeriesError> {
    let mut lower = s.lower.clone();
    let mut upper = Vec::with_capacity(s.upper.len());
    let mut cancelled = Vec::new();
    for a in &s.upper {
        if let Some(pos) = lower.iter().position(|b| b == a) {
            if nonpositive_integer(a).is_some() {
                return Err(SeriesError::AmbiguousCancellation(a.clone()));
            }
            lower.swap_remove(pos);
            cancelled.push(a.clone());
        } else {
            upper.push(a.clone());
        }
    }
    upper.sort();
    lower.sort();
    cancelled.sort();
    Ok((HypSeries { upper, lower, argument: s.argument.clone() }, cancelled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{pochhammer, rat, to_f64};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn identity_k2_m1() -> HypSeries {
        HypSeries::new(
            vec![int(3), rat(5, 2), int(-1), int(2)],
            vec![rat(3, 2), int(5), int(2)],
            int(-1),
        )
    }

    #[test]
    fn classify_examples() {
        let s = HypSeries::new(ints(&[-3, 2]), ints(&[5]), int(-1));
        assert_eq!(classify(&s), Classification::Terminating(3));
        let s = HypSeries::new(ints(&[-5, 2]), ints(&[-2]), int(-1));
        assert_eq!(classify(&s), Classification::IllPosed(2));
        let s = HypSeries::new(ints(&[1, 2]), ints(&[3]), rat(1, 2));
        assert_eq!(classify(&s), Classification::NonterminatingConvergent);
    }

    #[test]
    fn classify_edge_rules() {
        // Pole at the termination index is never reached.
        let s = HypSeries::new(ints(&[-2]), ints(&[-2]), int(1));
        assert_eq!(classify(&s), Classification::Terminating(2));
        // Minimal terminating parameter wins.
        let s = HypSeries::new(ints(&[-4, 0]), ints(&[-1]), int(1));
        assert_eq!(classify(&s), Classification::Terminating(0));
        let s = HypSeries::new(ints(&[1]), ints(&[0]), rat(1, 2));
        assert_eq!(classify(&s), Classification::IllPosed(0));
        // 2F1(1,1;2;1) has excess 0: divergent; at z = -1 it converges.
        let s = HypSeries::new(ints(&[1, 1]), ints(&[2]), int(1));
        assert_eq!(classify(&s), Classification::NonterminatingDivergent);
        let s = HypSeries::new(ints(&[1, 1]), ints(&[2]), int(-1));
        assert_eq!(classify(&s), Classification::NonterminatingConvergent);
        let s = HypSeries::new(ints(&[1, 1]), ints(&[2]), int(2));
        assert_eq!(classify(&s), Classification::NonterminatingDivergent);
        let s = HypSeries::new(ints(&[1, 1, 1]), ints(&[]), rat(1, 100));
        assert_eq!(classify(&s), Classification::NonterminatingDivergent);
        let s = HypSeries::new(ints(&[1, 1, 1]), ints(&[]), int(0));
        assert_eq!(classify(&s), Classification::NonterminatingConvergent);
        let s = HypSeries::new(ints(&[]), ints(&[1]), int(50));
        assert_eq!(classify(&s), Classification::NonterminatingConvergent);
    }

    #[test]
    fn excess_examples() {
        let s = HypSeries::new(ints(&[1, 2]), ints(&[3]), int(1));
        assert_eq!(parametric_excess(&s), int(0));
        // (3/2 + 5 + 2) - (3 + 5/2 - 1 + 2)
        assert_eq!(parametric_excess(&identity_k2_m1()), int(2));
        assert_eq!(parametric_excess(&HypSeries::new(vec![], vec![], int(1))), int(0));
    }

    #[test]
    fn eval_exact_examples() {
        let s = HypSeries::new(ints(&[-2]), vec![], int(-1));
        assert_eq!(eval_exact(&s).unwrap(), int(4));
        assert_eq!(eval_exact(&identity_k2_m1()).unwrap(), int(2));
        let s = HypSeries::new(ints(&[6, 4, -1, 2]), ints(&[3, 5, 8]), int(-1));
        assert_eq!(eval_exact(&s).unwrap(), rat(7, 5));
    }

    #[test]
    fn eval_exact_errors() {
        let s = HypSeries::new(ints(&[1, 2]), ints(&[3]), rat(1, 2));
        assert!(matches!(eval_exact(&s), Err(SeriesError::NotTerminating(_))));
        let s = HypSeries::new(ints(&[-5, 2]), ints(&[-2]), int(-1));
        assert_eq!(eval_exact(&s), Err(SeriesError::PoleEncountered(2)));
    }

    #[test]
    fn eval_numeric_examples() {
        let v = eval_numeric(&identity_k2_m1(), 1e-12).unwrap();
        assert!((v - 2.0).abs() <= 1e-12);
        let v = eval_numeric(&HypSeries::new(ints(&[-2]), vec![], int(-1)), 1e-12).unwrap();
        assert!((v - 4.0).abs() <= 1e-12);
        let s = HypSeries::new(ints(&[1, 1]), ints(&[2]), rat(1, 2));
        let v = eval_numeric(&s, 1e-10).unwrap();
        // Truncated-series oracle for -ln(1 - z)/z = sum z^n/(n+1) at z = 1/2.
        let oracle: f64 = (0..200).map(|n| 0.5f64.powi(n) / (n as f64 + 1.0)).sum();
        assert!((oracle - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
        assert!((v - oracle).abs() <= 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn eval_numeric_errors() {
        let s = HypSeries::new(ints(&[1, 1]), ints(&[2]), int(1));
        assert_eq!(eval_numeric(&s, 1e-12), Err(SeriesError::Divergent));
        let s = HypSeries::new(ints(&[-5, 2]), ints(&[-2]), int(-1));
        assert_eq!(eval_numeric(&s, 1e-12), Err(SeriesError::PoleEncountered(2)));
        // 2F1(1,1;2;-1) = ln 2 converges too slowly for a 50-term budget.
        let s = HypSeries::new(ints(&[1, 1]), ints(&[2]), int(-1));
        assert_eq!(
            eval_numeric_with_budget(&s, 1e-12, 50),
            Err(SeriesError::NonConvergedWithinBudget(50))
        );
    }

    #[test]
    fn normalize_examples() {
        let s = HypSeries::new(ints(&[3, 2]), ints(&[2]), int(1));
        let (r, c) = normalize(&s).unwrap();
        assert_eq!(r.upper, ints(&[3]));
        assert!(r.lower.is_empty());
        assert_eq!(c, ints(&[2]));

        let (r, c) = normalize(&identity_k2_m1()).unwrap();
        assert_eq!(r.upper, vec![int(-1), rat(5, 2), int(3)]);
        assert_eq!(r.lower, vec![rat(3, 2), int(5)]);
        assert_eq!(c, ints(&[2]));
        assert_eq!(eval_exact(&r).unwrap(), int(2));

        let s = HypSeries::new(ints(&[-1]), ints(&[-1]), int(1));
        assert_eq!(normalize(&s), Err(SeriesError::AmbiguousCancellation(int(-1))));
    }

    #[test]
    fn display_sorts() {
        assert_eq!(identity_k2_m1().to_string(), "4F3([-1, 2, 5/2, 3]; [3/2, 2, 5]; -1)");
    }

    fn param() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn terminating_series() -> impl Strategy<Value = HypSeries> {
        (
            0i64..=12,
            prop::collection::vec(param(), 0..=3),
            prop::collection::vec(param(), 0..=3),
            param(),
        )
            .prop_map(|(n, mut upper, lower, z)| {
                upper.push(int(-n));
                HypSeries::new(upper, lower, z)
            })
            .prop_filter("well posed", |s| matches!(classify(s), Classification::Terminating(_)))
    }

    fn pochhammer_oracle(s: &HypSeries, n_max: u64) -> Rational {
        let mut total = Rational::zero();
        let mut fact = Rational::one();
        let mut zpow = Rational::one();
        for n in 0..=n_max {
            if n > 0 {
                fact *= int(n as i64);
                zpow *= &s.argument;
            }
            let num: Rational = s.upper.iter().map(|a| pochhammer(a, n)).product();
            let den: Rational = s.lower.iter().map(|b| pochhammer(b, n)).product();
            total += num / den * &zpow / &fact;
        }
        total
    }

    proptest! {
        #[test]
        fn exact_matches_pochhammer_oracle(s in terminating_series()) {
            let Classification::Terminating(n) = classify(&s) else { unreachable!() };
            prop_assert_eq!(eval_exact(&s).unwrap(), pochhammer_oracle(&s, n));
        }

        #[test]
        fn exact_is_permutation_invariant(s in terminating_series(), seed in any::<u64>()) {
            let mut t = s.clone();
            let r = seed as usize;
            if !t.upper.is_empty() { let len = t.upper.len(); t.upper.rotate_left(r % len); t.upper.reverse(); }
            if !t.lower.is_empty() { let len = t.lower.len(); t.lower.rotate_left(r % len); }
            prop_assert_eq!(eval_exact(&s).unwrap(), eval_exact(&t).unwrap());
        }

        #[test]
        fn numeric_tracks_exact(s in terminating_series()) {
            let exact = eval_exact(&s).unwrap();
            let e = to_f64(&exact);
            if let Ok(v) = eval_numeric(&s, 1e-12) {
                prop_assert!((v - e).abs() <= 1e-10 * e.abs().max(1.0), "{} vs {}", v, e);
            }
        }

        #[test]
        fn normalize_preserves_value(s in terminating_series()) {
            if let Ok((reduced, _)) = normalize(&s) {
                if let Ok(v) = eval_exact(&reduced) {
                    prop_assert_eq!(v, eval_exact(&s).unwrap());
                }
            }
        }
    }
}
