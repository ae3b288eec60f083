//! Recognition of hypergeometric terms from their consecutive-term ratio.
//!
//! A term sequence with `t(n+1)/t(n) = P(n)/Q(n)` for integer polynomials
//! `P`, `Q` is rewritten as `t0 * pFq(upper; lower; z)`: the ratio is reduced to
//! lowest terms, both sides are split into rational linear factors, and each
//! factor `(n + c)` becomes the Pochhammer parameter `c`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_arith::{int, Rational};
use crate::hyper_series::HypSeries;

/// Integer-coefficient polynomial in `n`, coefficient of `n^i` at index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coefficients: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `scale * (n - r_1)(n - r_2)...` for integer roots.
    pub fn from_roots(scale: i64, roots: &[i64]) -> Self {
        roots.iter().fold(Self::from_i64(&[scale]), |acc, &r| {
            acc.mul(&Self::from_i64(&[-r, 1]))
        })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coefficients.iter().map(|x| x * c).collect())
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coefficients.iter().map(|x| x / &c).collect())
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.coefficients
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    /// Integer polynomial proportional to a rational one.
    fn from_rational_primitive(coefficients: &[Rational]) -> Self {
        let lcm = coefficients
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::new(
            coefficients
                .iter()
                .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    /// Exact division by `q n - p`, where `p/q` (lowest terms) is a root.
    fn deflate(&self, root: &Rational) -> Self {
        let p = root.numer();
        let q = root.denom();
        let a = &self.coefficients;
        let d = a.len() - 1;
        let mut b = vec![BigInt::zero(); d];
        b[d - 1] = &a[d] / q;
        for i in (1..d).rev() {
            b[i - 1] = (&a[i] + p * &b[i]) / q;
        }
        debug_assert_eq!(a[0], -(p * &b[0]));
        Self::new(b)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coefficients.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Hypergeometric term given by `t(n+1)/t(n) = num(n)/den(n)` and `t(0) = t0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermRatio {
    pub num: IntPolynomial,
    pub den: IntPolynomial,
    pub t0: Rational,
}

/// `prefactor * series`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefactoredSeries {
    pub prefactor: Rational,
    pub series: HypSeries,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("denominator polynomial is zero")]
    ZeroDenominator,
    #[error("cofactor {0} has no rational linear factors")]
    NotRationallyFactorable(IntPolynomial),
    #[error("denominator vanishes at n = {0} before termination")]
    PoleOnPath(u64),
}

/// Rational roots with multiplicities, ascending.
pub fn rational_roots(p: &IntPolynomial) -> Result<Vec<(Rational, u32)>, RecognizeError> {
    let (roots, _) = split_rational_roots(p)?;
    Ok(roots)
}

/// Rational roots plus the primitive cofactor left after deflating them all.
fn split_rational_roots(
    p: &IntPolynomial,
) -> Result<(Vec<(Rational, u32)>, IntPolynomial), RecognizeError> {
    if p.is_zero() {
        return Err(RecognizeError::ZeroPolynomial);
    }
    let mut rest = p.primitive_part();
    let mut roots: Vec<(Rational, u32)> = Vec::new();
    let mut push = |r: Rational| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some((_, mult)) => *mult += 1,
        None => roots.push((r, 1)),
    };
    while rest.degree().unwrap_or(0) > 0 {
        let root = if rest.coefficients[0].is_zero() {
            Some(Rational::zero())
        } else {
            find_root(&rest)
        };
        match root {
            Some(r) => {
                rest = rest.deflate(&r);
                push(r);
            }
            None => break,
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((roots, rest))
}

/// First candidate `±d/e` (d | constant term, e | leading coefficient) that is a root.
fn find_root(p: &IntPolynomial) -> Option<Rational> {
    let constant = p.coefficients[0].magnitude();
    let leading = p.leading()?.magnitude();
    let numerators = divisors(constant);
    let denominators = divisors(leading);
    for e in &denominators {
        for d in &numerators {
            if !d.gcd(e).is_one() {
                continue;
            }
            for sign in [1i32, -1] {
                let candidate = Rational::new(
                    BigInt::from(d.clone()) * sign,
                    BigInt::from(e.clone()),
                );
                if p.eval(&candidate).is_zero() {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// Positive divisors by trial division up to the square root.
fn divisors(x: &BigUint) -> Vec<BigUint> {
    if let Some(small) = x.to_u128() {
        let mut small_divs = Vec::new();
        let mut large = Vec::new();
        let mut i: u128 = 1;
        while i * i <= small {
            if small % i == 0 {
                small_divs.push(i);
                if i * i != small {
                    large.push(small / i);
                }
            }
            i += 1;
        }
        small_divs.extend(large.into_iter().rev());
        return small_divs.into_iter().map(BigUint::from).collect();
    }
    let mut small_divs = Vec::new();
    let mut large = Vec::new();
    let mut i = BigUint::one();
    while &i * &i <= *x {
        if (x % &i).is_zero() {
            let other = x / &i;
            if other != i {
                large.push(other);
            }
            small_divs.push(i.clone());
        }
        i += 1u32;
    }
    small_divs.extend(large.into_iter().rev());
    small_divs
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let coef = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &coef * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn poly_div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![Rational::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() && !r.is_empty() {
        let coef = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &coef * c;
        }
        q[shift] = coef;
        r.pop();
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

/// Primitive gcd of two nonzero polynomials over the rationals.
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let mut x = a.to_rational();
    let mut y = b.to_rational();
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    IntPolynomial::from_rational_primitive(&x)
}

/// Reduces `num/den` to lowest terms, keeping the value of the quotient.
pub fn reduce_ratio(num: &IntPolynomial, den: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
    let g = poly_gcd(num, den);
    if g.degree() == Some(0) {
        return (num.clone(), den.clone());
    }
    let gr = g.to_rational();
    let divide = |p: &IntPolynomial| {
        let q = poly_div_exact(&p.to_rational(), &gr);
        IntPolynomial::new(q.iter().map(|c| c.to_integer()).collect())
    };
    (divide(num), divide(den))
}

fn expand_roots(roots: &[(Rational, u32)]) -> Vec<Rational> {
    roots
        .iter()
        .flat_map(|(r, mult)| std::iter::repeat_n(-r, *mult as usize))
        .collect()
}

fn nonnegative_integer_roots(roots: &[(Rational, u32)]) -> impl Iterator<Item = u64> + '_ {
    roots
        .iter()
        .filter(|(r, _)| r.is_integer() && !r.is_negative())
        .filter_map(|(r, _)| r.to_integer().to_u64())
}

/// Rewrites the term as `t0 * pFq`.
pub fn recognize(r: &TermRatio) -> Result<PrefactoredSeries, RecognizeError> {
    if r.den.is_zero() {
        return Err(RecognizeError::ZeroDenominator);
    }
    if r.num.is_zero() {
        return Err(RecognizeError::ZeroPolynomial);
    }
    let (num, den) = reduce_ratio(&r.num, &r.den);
    let (num_roots, num_rest) = split_rational_roots(&num)?;
    if num_rest.degree() != Some(0) {
        return Err(RecognizeError::NotRationallyFactorable(num_rest));
    }
    let (mut den_roots, den_rest) = split_rational_roots(&den)?;
    if den_rest.degree() != Some(0) {
        return Err(RecognizeError::NotRationallyFactorable(den_rest));
    }

    let termination = nonnegative_integer_roots(&num_roots).min();
    if let Some(pole) = nonnegative_integer_roots(&den_roots)
        .filter(|&j| termination.is_none_or(|t| j < t))
        .min()
    {
        return Err(RecognizeError::PoleOnPath(pole));
    }

    let z = Rational::new(
        num.leading().unwrap().clone(),
        den.leading().unwrap().clone(),
    );
    let mut upper = expand_roots(&num_roots);
    // The factor (n + 1) supplies the n! of the normal form; install it on
    // both sides when the denominator lacks it.
    let minus_one = int(-1);
    match den_roots.iter_mut().find(|(x, _)| *x == minus_one) {
        Some(entry) => entry.1 -= 1,
        None => upper.push(int(1)),
    }
    let mut lower = expand_roots(&den_roots);
    upper.sort();
    lower.sort();
    Ok(PrefactoredSeries {
        prefactor: r.t0.clone(),
        series: HypSeries::new(upper, lower, z),
    })
}

/// `t0 * prod_{j<n} P(j)/Q(j)`.
pub fn term_at(r: &TermRatio, n: u64) -> Result<Rational, RecognizeError> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..n {
        let x = BigInt::from(j);
        let q = r.den.eval_int(&x);
        if q.is_zero() {
            return Err(RecognizeError::PoleOnPath(j));
        }
        num *= r.num.eval_int(&x);
        den *= q;
    }
    Ok(&r.t0 * Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{pochhammer, rat};
    use proptest::prelude::*;

    fn roots_of(p: &IntPolynomial) -> Vec<(Rational, u32)> {
        rational_roots(p).unwrap()
    }

    /// k = 5, m = 1 instance of the binomial identity's term ratio.
    fn k5_m1() -> TermRatio {
        // 2(1 - n)(n + 6)(n + 2)(n + 4) and 2(n + 1)(n + 5)(n + 3)(n + 8)
        let num = IntPolynomial::from_roots(-2, &[1, -6, -2, -4]);
        let den = IntPolynomial::from_roots(2, &[-1, -5, -3, -8]);
        TermRatio { num, den, t0: rat(5, 7) }
    }

    /// Term of the recognized series by Pochhammer products.
    fn series_term(ps: &PrefactoredSeries, n: u64) -> Rational {
        let s = &ps.series;
        let mut fact = Rational::one();
        let mut zpow = Rational::one();
        for i in 1..=n {
            fact *= int(i as i64);
            zpow *= &s.argument;
        }
        let up: Rational = s.upper.iter().map(|a| pochhammer(a, n)).product();
        let lo: Rational = s.lower.iter().map(|b| pochhammer(b, n)).product();
        &ps.prefactor * up / lo * zpow / fact
    }

    #[test]
    fn roots_examples() {
        // expand-and-check: (n + 2)(n - 1) = n^2 + n - 2
        let p = IntPolynomial::from_roots(1, &[-2, 1]);
        assert_eq!(p, IntPolynomial::from_i64(&[-2, 1, 1]));
        assert_eq!(roots_of(&p), vec![(int(-2), 1), (int(1), 1)]);
        for (r, _) in roots_of(&p) {
            assert!(p.eval(&r).is_zero());
        }
        assert!(roots_of(&IntPolynomial::from_i64(&[1, 0, 1])).is_empty());
        assert_eq!(roots_of(&IntPolynomial::from_i64(&[3, 2])), vec![(rat(-3, 2), 1)]);
    }

    #[test]
    fn roots_multiplicity_and_zero() {
        // n^2 (2n - 1)^3 (n + 4)
        let p = IntPolynomial::from_i64(&[0, 0, -1, 6, -12, 8])
            .mul(&IntPolynomial::from_i64(&[4, 1]));
        assert_eq!(roots_of(&p), vec![(int(-4), 1), (int(0), 2), (rat(1, 2), 3)]);
        assert_eq!(rational_roots(&IntPolynomial::zero()), Err(RecognizeError::ZeroPolynomial));
        assert!(roots_of(&IntPolynomial::from_i64(&[7])).is_empty());
    }

    #[test]
    fn gcd_and_reduction() {
        let a = IntPolynomial::from_roots(3, &[1, 2, 2]);
        let b = IntPolynomial::from_roots(-5, &[2, 4]);
        assert_eq!(poly_gcd(&a, &b), IntPolynomial::from_roots(1, &[2]));
        let (ra, rb) = reduce_ratio(&a, &b);
        assert_eq!(ra, IntPolynomial::from_roots(3, &[1, 2]));
        assert_eq!(rb, IntPolynomial::from_roots(-5, &[4]));
    }

    #[test]
    fn recognize_k5_m1() {
        let ps = recognize(&k5_m1()).unwrap();
        assert_eq!(ps.prefactor, rat(5, 7));
        assert_eq!(ps.series.upper, vec![int(-1), int(2), int(4), int(6)]);
        assert_eq!(ps.series.lower, vec![int(3), int(5), int(8)]);
        assert_eq!(ps.series.argument, int(-1));
    }

    #[test]
    fn recognize_single_factor() {
        // -(n - 2) / (n + 1)
        let r = TermRatio {
            num: IntPolynomial::from_i64(&[2, -1]),
            den: IntPolynomial::from_i64(&[1, 1]),
            t0: int(1),
        };
        let ps = recognize(&r).unwrap();
        assert_eq!(ps.prefactor, int(1));
        assert_eq!(ps.series, HypSeries::new(vec![int(-2)], vec![], int(-1)));
    }

    #[test]
    fn recognize_installs_factorial() {
        // (n+1)^2 / ((n+2)(n+1)): t_n = 1/(n+1)
        let r = TermRatio {
            num: IntPolynomial::from_roots(1, &[-1, -1]),
            den: IntPolynomial::from_roots(1, &[-2, -1]),
            t0: int(1),
        };
        let ps = recognize(&r).unwrap();
        assert_eq!(ps.series, HypSeries::new(vec![int(1), int(1)], vec![int(2)], int(1)));
        for n in 0..10u64 {
            assert_eq!(term_at(&r, n).unwrap(), rat(1, n as i64 + 1));
            assert_eq!(series_term(&ps, n), rat(1, n as i64 + 1));
        }
    }

    #[test]
    fn recognize_errors() {
        let r = TermRatio {
            num: IntPolynomial::from_i64(&[1, 0, 1]),
            den: IntPolynomial::from_i64(&[1, 1]),
            t0: int(1),
        };
        assert_eq!(
            recognize(&r),
            Err(RecognizeError::NotRationallyFactorable(IntPolynomial::from_i64(&[1, 0, 1])))
        );
        // Q(3) = 0 while P never vanishes on the nonnegative integers.
        let r = TermRatio {
            num: IntPolynomial::from_i64(&[1, 1]),
            den: IntPolynomial::from_roots(1, &[-1, 3]),
            t0: int(1),
        };
        assert_eq!(recognize(&r), Err(RecognizeError::PoleOnPath(3)));
        // Terminates at n = 2 before the pole at n = 3.
        let r = TermRatio {
            num: IntPolynomial::from_roots(-1, &[2]),
            den: IntPolynomial::from_roots(1, &[-1, 3]),
            t0: int(1),
        };
        assert!(recognize(&r).is_ok());
        let r = TermRatio { num: IntPolynomial::from_i64(&[1]), den: IntPolynomial::zero(), t0: int(1) };
        assert_eq!(recognize(&r), Err(RecognizeError::ZeroDenominator));
    }

    #[test]
    fn term_at_examples() {
        let r = k5_m1();
        assert_eq!(term_at(&r, 0).unwrap(), rat(5, 7));
        assert_eq!(term_at(&r, 1).unwrap(), rat(2, 7));
        assert_eq!(term_at(&r, 2).unwrap(), int(0));
        let pole = TermRatio {
            num: IntPolynomial::from_i64(&[1]),
            den: IntPolynomial::from_roots(1, &[1]),
            t0: int(1),
        };
        assert_eq!(term_at(&pole, 1).unwrap(), int(-1));
        assert_eq!(term_at(&pole, 2), Err(RecognizeError::PoleOnPath(1)));
    }

    fn linear_factor() -> impl Strategy<Value = (i64, i64)> {
        // (q n + p) with q > 0
        (-9i64..=9, 1i64..=3)
    }

    fn factored(factors: &[(i64, i64)], scale: i64) -> IntPolynomial {
        factors.iter().fold(IntPolynomial::from_i64(&[scale]), |acc, &(p, q)| {
            acc.mul(&IntPolynomial::from_i64(&[p, q]))
        })
    }

    fn ratio_strategy() -> impl Strategy<Value = TermRatio> {
        (
            prop::collection::vec(linear_factor(), 1..=4),
            prop::collection::vec(linear_factor(), 0..=3),
            prop::sample::select(vec![-3i64, -2, -1, 1, 2, 5]),
            1i64..=4,
            (-9i64..=9, 1i64..=9),
        )
            .prop_map(|(nf, df, sn, sd, (tp, tq))| TermRatio {
                num: factored(&nf, sn),
                den: factored(&df, sd).mul(&IntPolynomial::from_i64(&[1, 1])),
                t0: rat(tp, tq),
            })
    }

    proptest! {
        #[test]
        fn roots_of_products_are_found(factors in prop::collection::vec(linear_factor(), 1..=5), scale in 1i64..=6) {
            let p = factored(&factors, scale);
            let roots = roots_of(&p);
            let total: u32 = roots.iter().map(|(_, m)| m).sum();
            prop_assert_eq!(total as usize, factors.len());
            for (p_, q) in factors {
                let r = rat(-p_, q);
                prop_assert!(roots.iter().any(|(x, _)| *x == r));
            }
        }

        #[test]
        fn round_trip_terms(r in ratio_strategy()) {
            if let Ok(ps) = recognize(&r) {
                let (num, _) = reduce_ratio(&r.num, &r.den);
                let termination = nonnegative_integer_roots(&roots_of(&num)).min().unwrap_or(8).min(8);
                for n in 0..=termination + 1 {
                    if let Ok(t) = term_at(&r, n) {
                        prop_assert_eq!(series_term(&ps, n), t, "n = {}", n);
                    }
                }
            }
        }

        #[test]
        fn scale_invariant(r in ratio_strategy(), c in prop::sample::select(vec![-7i64, -2, 3, 11])) {
            let c = BigInt::from(c);
            let scaled = TermRatio { num: r.num.scale(&c), den: r.den.scale(&c), t0: r.t0.clone() };
            prop_assert_eq!(recognize(&r), recognize(&scaled));
        }

        #[test]
        fn parameter_counts(r in ratio_strategy()) {
            let (num, den) = reduce_ratio(&r.num, &r.den);
            if let Ok(ps) = recognize(&r) {
                if !den.eval(&int(-1)).is_zero() {
                    return Ok(());
                }
                prop_assert_eq!(ps.series.p(), num.degree().unwrap());
                prop_assert_eq!(ps.series.q(), den.degree().unwrap() - 1);
            }
        }
    }
}
