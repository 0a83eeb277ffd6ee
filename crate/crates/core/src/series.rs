//! Truncated formal power series in exponential-generating-function form.
//!
//! A [`Series`] with truncation order `N` stores `a_0, ..., a_N` for
//! `f(t) = sum_k a_k t^k / k!`. With this normalisation `a_n` is exactly the
//! value of `f` as a linear functional on `x^n`, so the pairing with a
//! polynomial needs no factorial bookkeeping.
//!
//! Binary operations require equal truncation orders. Use
//! [`Series::truncate`] to bring two series to a common order explicitly.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::families::FamilyTag;
use crate::rational::{big, binomial_row, factorial, int, inv_pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

/// Order of a series: index of the first nonzero coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesOrder {
    Finite(usize),
    /// The zero series (up to its truncation order).
    Infinite,
}

impl SeriesOrder {
    pub fn value(self) -> Option<usize> {
        match self {
            SeriesOrder::Finite(k) => Some(k),
            SeriesOrder::Infinite => None,
        }
    }
}

impl Series {
    /// Builds a series from EGF coefficients, zero-padding or truncating to
    /// `cap + 1` entries.
    pub fn from_egf(cap: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut coeffs: Vec<Rational> = coeffs.into_iter().take(cap + 1).collect();
        coeffs.resize(cap + 1, Rational::zero());
        Series { coeffs }
    }

    /// Builds a series from ordinary coefficients `c_k` of `t^k`.
    pub fn from_ordinary(cap: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut fact = Rational::one();
        let egf = coeffs.into_iter().take(cap + 1).enumerate().map(|(k, c)| {
            if k > 0 {
                fact *= int(k as i64);
            }
            c * &fact
        });
        Series::from_egf(cap, egf.collect::<Vec<_>>())
    }

    pub fn zero(cap: usize) -> Self {
        Series::from_egf(cap, [])
    }

    pub fn one(cap: usize) -> Self {
        Series::constant(Rational::one(), cap)
    }

    pub fn constant(c: Rational, cap: usize) -> Self {
        Series::from_egf(cap, [c])
    }

    /// `t^k`, whose EGF coefficient at `k` is `k!`.
    pub fn monomial(k: usize, cap: usize) -> Self {
        let mut s = Series::zero(cap);
        if k <= cap {
            s.coeffs[k] = big(factorial(k));
        }
        s
    }

    /// The series `t` itself.
    pub fn t(cap: usize) -> Self {
        Series::monomial(1, cap)
    }

    /// `e^{y t}`, with `a_k = y^k`.
    pub fn exp(y: &Rational, cap: usize) -> Self {
        let mut acc = Rational::one();
        let mut coeffs = Vec::with_capacity(cap + 1);
        for _ in 0..=cap {
            coeffs.push(acc.clone());
            acc *= y;
        }
        Series { coeffs }
    }

    /// `1 - e^{-t}`, the inner delta series of the poly-Bernoulli generating
    /// function.
    pub fn one_minus_exp_neg(cap: usize) -> Self {
        let coeffs = (0..=cap).map(|n| match n {
            0 => Rational::zero(),
            n if n % 2 == 1 => Rational::one(),
            _ => -Rational::one(),
        });
        Series::from_egf(cap, coeffs.collect::<Vec<_>>())
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// EGF coefficient `a_k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn order(&self) -> SeriesOrder {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(SeriesOrder::Infinite, SeriesOrder::Finite)
    }

    pub fn is_invertible(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_delta(&self) -> bool {
        self.order() == SeriesOrder::Finite(1)
    }

    /// Drops every coefficient above `cap`.
    pub fn truncate(&self, cap: usize) -> Result<Series> {
        if cap > self.cap() {
            return Err(Error::CapTooSmall { needed: cap, cap: self.cap() });
        }
        Ok(Series { coeffs: self.coeffs[..=cap].to_vec() })
    }

    fn same_cap(&self, other: &Series) -> Result<()> {
        if self.cap() != other.cap() {
            return Err(Error::CapMismatch { left: self.cap(), right: other.cap() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.same_cap(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Series { coeffs })
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.same_cap(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Series { coeffs })
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product in EGF form: `c_n = sum_j C(n, j) a_j b_{n-j}`.
    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.same_cap(other)?;
        let coeffs = (0..=self.cap())
            .map(|n| {
                binomial_row(n)
                    .into_iter()
                    .enumerate()
                    .filter(|(j, _)| !self.coeffs[*j].is_zero() && !other.coeffs[n - j].is_zero())
                    .map(|(j, c)| big(c) * &self.coeffs[j] * &other.coeffs[n - j])
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect();
        Ok(Series { coeffs })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Series> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.cap() {
            let row = binomial_row(n);
            let mut acc = Rational::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc += big(row[j].clone()) * &self.coeffs[j] * &out[n - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    pub fn pow(&self, mut e: u32) -> Series {
        let mut base = self.clone();
        let mut acc = Series::one(self.cap());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("equal caps");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).expect("equal caps");
            }
        }
        acc
    }

    /// `f(g(t))`, evaluated by Horner's rule over truncated powers of `g`.
    ///
    /// `g` must have zero constant term; the zero series is accepted and
    /// yields the constant term of `f`.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        self.same_cap(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NotDelta);
        }
        let cap = self.cap();
        let ordinary: Vec<Rational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a / big(factorial(k)))
            .collect();
        let mut acc = Series::constant(ordinary[cap].clone(), cap);
        for c in ordinary[..cap].iter().rev() {
            acc = acc.checked_mul(inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Formal `d/dt`. In EGF form this is a left shift; the result has
    /// truncation order one less (and order 0 stays 0).
    pub fn derivative(&self) -> Series {
        if self.cap() == 0 {
            return Series::zero(0);
        }
        Series { coeffs: self.coeffs[1..].to_vec() }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a}) t")?,
                _ => write!(f, "({a}) t^{k}/{k}!")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.cap() + 1)
    }
}

pub fn series_add(f: &Series, g: &Series) -> Result<Series> {
    f.checked_add(g)
}

pub fn series_mul(f: &Series, g: &Series) -> Result<Series> {
    f.checked_mul(g)
}

pub fn series_inverse(f: &Series) -> Result<Series> {
    f.inverse()
}

pub fn series_compose(f: &Series, g: &Series) -> Result<Series> {
    f.compose(g)
}

/// `Li_k(z) = sum_{m >= 1} z^m / m^k` as a series in `z`, truncated at `cap`.
pub fn polylog_series(k: i64, cap: usize) -> Series {
    let coeffs = (0..=cap).map(|m| {
        if m == 0 {
            Rational::zero()
        } else {
            big(factorial(m)) * inv_pow(m as u64, k)
        }
    });
    Series::from_egf(cap, coeffs.collect::<Vec<_>>())
}

/// `Li_k(1 - e^{-t})`, a delta series for every integer `k`.
pub fn polylog_delta_series(k: i64, cap: usize) -> Series {
    polylog_series(k, cap)
        .compose(&Series::one_minus_exp_neg(cap))
        .expect("1 - e^{-t} is a delta series of matching cap")
}

/// `Li_k(1 - e^{-t}) / (1 - e^{-t})`, whose EGF coefficients are the
/// poly-Bernoulli numbers of index `k`.
///
/// Computed as the composition of `Li_k(z)/z = sum_{m >= 0} z^m / (m+1)^k`
/// with `1 - e^{-t}`, so no division by a delta series is needed.
pub fn gf_poly_bernoulli(k: i64, cap: usize) -> Series {
    let outer = (0..=cap).map(|m| big(factorial(m)) * inv_pow(m as u64 + 1, k));
    Series::from_egf(cap, outer.collect::<Vec<_>>())
        .compose(&Series::one_minus_exp_neg(cap))
        .expect("1 - e^{-t} is a delta series of matching cap")
}

/// `(e^t - 1) / t`, with `a_n = 1 / (n + 1)`.
pub(crate) fn exp_minus_one_over_t(cap: usize) -> Series {
    Series::from_egf(cap, (0..=cap).map(|n| Rational::one() / int(n as i64 + 1)).collect::<Vec<_>>())
}

/// `(e^t - lambda) / (1 - lambda)`; `lambda = -1` gives `(e^t + 1) / 2`.
pub(crate) fn exp_minus_lambda_normalised(lambda: &Rational, cap: usize) -> Result<Series> {
    let denom = Rational::one() - lambda;
    if denom.is_zero() {
        return Err(Error::InvalidLambda(lambda.clone()));
    }
    let tail = denom.recip();
    let coeffs = (0..=cap).map(|n| if n == 0 { Rational::one() } else { tail.clone() });
    Ok(Series::from_egf(cap, coeffs.collect::<Vec<_>>()))
}

/// The x-free generating factor of an Appell family: the series multiplying
/// `e^{xt}` in its generating function.
pub fn gf_family(tag: &FamilyTag, cap: usize) -> Result<Series> {
    tag.validate()?;
    Ok(match tag {
        FamilyTag::PolyBernoulli { k } => gf_poly_bernoulli(*k, cap),
        FamilyTag::HigherBernoulli { r } => exp_minus_one_over_t(cap).inverse()?.pow(*r),
        FamilyTag::Euler { r } => exp_minus_lambda_normalised(&int(-1), cap)?.inverse()?.pow(*r),
        FamilyTag::FrobeniusEuler { r, lambda } => {
            exp_minus_lambda_normalised(lambda, cap)?.inverse()?.pow(*r)
        }
    })
}
