//! Exact integer and rational kernel: factorials, binomials, Pochhammer symbols.
//!
//! Every exact pathway in the crate works over [`Rational`], which is
//! `num_rational::BigRational`. Its constructors and arithmetic keep the value
//! reduced with a positive denominator, so equality is structural.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision exact rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{op} is undefined for negative argument {value}")]
    NegativeArgument { op: &'static str, value: i64 },
}

/// `n!` by iterated product.
pub fn factorial(n: i64) -> Result<BigInt, ArithError> {
    if n < 0 {
        return Err(ArithError::NegativeArgument { op: "factorial", value: n });
    }
    Ok(factorial_u64(n as u64))
}

pub(crate) fn factorial_u64(n: u64) -> BigInt {
    product_range(2, n)
}

/// Binomial coefficient `C(n, k)`. Out-of-range `k` (negative or above `n`) gives 0.
pub fn binomial(n: i64, k: i64) -> Result<BigInt, ArithError> {
    if n < 0 {
        return Err(ArithError::NegativeArgument { op: "binomial", value: n });
    }
    Ok(binomial_u64(n as u64, k))
}

pub(crate) fn binomial_u64(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = k as u64;
    let k = k.min(n - k);
    // (n-k+1)...(n) / k!, with factors batched into machine words.
    product_range(n - k + 1, n) / product_range(1, k)
}

/// Product of the integers in `lo..=hi` (1 when empty).
pub(crate) fn product_range(lo: u64, hi: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut word: u64 = 1;
    for i in lo..=hi {
        match word.checked_mul(i) {
            Some(w) => word = w,
            None => {
                acc *= word;
                word = i;
            }
        }
    }
    acc * word
}

/// Rising factorial `x (x+1) ... (x+n-1)`; equal to 1 for `n = 0`.
pub fn pochhammer(x: &Rational, n: u64) -> Rational {
    // x = p/q: the product is prod (p + i q) / q^n.
    let (p, q) = (x.numer(), x.denom());
    let mut numer = BigInt::one();
    let mut factor = p.clone();
    for _ in 0..n {
        if factor.is_zero() {
            return Rational::zero();
        }
        numer *= &factor;
        factor += q;
    }
    Rational::new(numer, q.pow(n as u32))
}

/// Convenience constructor for `num / den`.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact integer constructor.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// If `x` is an integer `<= 0`, returns `-x`.
pub fn nonpositive_integer(x: &Rational) -> Option<u64> {
    if x.is_integer() && !x.is_positive() {
        (-x.to_integer()).to_u64()
    } else {
        None
    }
}

/// Nearest `f64` to `x`, or infinity when `x` is outside double range.
pub fn to_f64(x: &Rational) -> f64 {
    // Ratio<BigInt>::to_f64 scales numerator and denominator before dividing.
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `p/q` for non-integers, `p` for integers.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product_oracle(n: u64) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0).unwrap(), BigInt::one());
        assert_eq!(factorial(5).unwrap(), product_oracle(5));
        assert_eq!(factorial(5).unwrap(), BigInt::from(120));
        assert_eq!(
            factorial(20).unwrap(),
            "2432902008176640000".parse::<BigInt>().unwrap()
        );
        assert_eq!(factorial(20).unwrap(), product_oracle(20));
    }

    #[test]
    fn factorial_rejects_negative() {
        assert!(matches!(
            factorial(-1),
            Err(ArithError::NegativeArgument { value: -1, .. })
        ));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2).unwrap(), pascal_row(5)[2]);
        assert_eq!(binomial(5, 2).unwrap(), BigInt::from(10));
        assert_eq!(binomial(7, 0).unwrap(), BigInt::one());
        assert_eq!(binomial(3, 5).unwrap(), BigInt::zero());
        assert_eq!(binomial(3, -1).unwrap(), BigInt::zero());
        assert!(binomial(-2, 1).is_err());
    }

    #[test]
    fn binomial_matches_pascal_rows() {
        for n in 0..40usize {
            let row = pascal_row(n);
            for (k, expected) in row.iter().enumerate() {
                assert_eq!(&binomial(n as i64, k as i64).unwrap(), expected, "C({n},{k})");
            }
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(&int(1), 4), int(24));
        assert_eq!(pochhammer(&rat(3, 2), 3), rat(3, 2) * rat(5, 2) * rat(7, 2));
        assert_eq!(pochhammer(&rat(3, 2), 3), rat(105, 8));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
        assert_eq!(pochhammer(&int(-2), 2), int(2));
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert_eq!(nonpositive_integer(&int(0)), Some(0));
        assert_eq!(nonpositive_integer(&int(-7)), Some(7));
        assert_eq!(nonpositive_integer(&int(3)), None);
        assert_eq!(nonpositive_integer(&rat(-1, 2)), None);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(4, -2)), "-2");
        assert_eq!(format_rational(&rat(-3, -9)), "1/3");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..12).prop_map(|(p, q)| rat(p, q))
    }

    fn big_rational() -> impl Strategy<Value = Rational> {
        (any::<i128>(), 1u128..u128::MAX, any::<u64>()).prop_map(|(p, q, s)| {
            Rational::new(BigInt::from(p) * BigInt::from(s), BigInt::from(q))
        })
    }

    proptest! {
        #[test]
        fn pochhammer_one_is_factorial(n in 0u64..60) {
            prop_assert_eq!(pochhammer(&int(1), n), Rational::from_integer(factorial_u64(n)));
        }

        #[test]
        fn pochhammer_splits(x in small_rational(), m in 0u64..10, n in 0u64..10) {
            let lhs = pochhammer(&x, m + n);
            let rhs = pochhammer(&x, m) * pochhammer(&(&x + int(m as i64)), n);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn binomial_symmetry_and_pascal(n in 1i64..120, k in 0i64..120) {
            prop_assume!(k <= n);
            let c = binomial(n, k).unwrap();
            prop_assert_eq!(&c, &binomial(n, n - k).unwrap());
            prop_assert_eq!(c, binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap());
        }

        #[test]
        fn rational_add_sub_exact(a in big_rational(), c in big_rational()) {
            let back = (&a + &c) - &c;
            prop_assert_eq!(back.numer(), a.numer());
            prop_assert_eq!(back.denom(), a.denom());
            prop_assert!(back.denom().is_positive());
            prop_assert!(num_integer::Integer::gcd(back.numer(), back.denom()).is_one()
                || back.numer().is_zero());
        }
    }
}
