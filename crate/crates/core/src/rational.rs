//! Scalar helpers: the rational field plus the integer combinatorics used
//! throughout (factorials, binomials, signed powers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `p / q` in lowest terms. Panics when `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Row `n` of Pascal's triangle, `C(n, 0) ..= C(n, n)`.
pub fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..n {
        c = c * (n - i) / (i + 1);
        row.push(c.clone());
    }
    row
}

/// `(-1)^e` as a rational.
pub fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `base^exp` for any integer exponent. `base` must be nonzero when `exp < 0`.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `1 / m^k` for a positive integer `m` and any integer `k`; for `k <= 0`
/// this is the integer `m^|k|`.
pub fn inv_pow(m: u64, k: i64) -> Rational {
    pow(&int(m as i64), -k)
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a canonical rational.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_match_pascal() {
        for n in 0..15 {
            let row = binomial_row(n);
            for (k, c) in row.iter().enumerate() {
                assert_eq!(*c, binomial(n, k));
            }
        }
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn signed_powers() {
        assert_eq!(inv_pow(2, 3), frac(1, 8));
        assert_eq!(inv_pow(3, -2), int(9));
        assert_eq!(inv_pow(7, 0), int(1));
        assert_eq!(pow(&frac(-1, 2), 3), frac(-1, 8));
    }

    #[test]
    fn parse_canonicalises() {
        assert_eq!(parse("6/-4"), Some(frac(-3, 2)));
        assert_eq!(parse(" -7 "), Some(int(-7)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
        assert_eq!(frac(-1, 30).to_string(), "-1/30");
        assert_eq!(int(5).to_string(), "5");
    }
}
