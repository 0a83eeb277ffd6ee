//! Concrete number and polynomial families: Stirling numbers of the second
//! kind, Bernoulli numbers, and the four Appell families used by the
//! identity checks.
//!
//! Poly-Bernoulli polynomials are produced from the Stirling-number closed
//! form. The finite-difference form, the operator form and the binomial
//! expansion from the numbers are exposed as independent routes so callers
//! can cross-check them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, big, binomial, binomial_row, factorial, int, inv_pow, sign, Rational};
use crate::series::{self, gf_poly_bernoulli, Series};
use crate::umbral::{self, AppellFamily, Polynomial};

/// One of the Appell families handled by the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    /// `B_n^{(k)}(x)`, generating factor `Li_k(1 - e^{-t}) / (1 - e^{-t})`.
    PolyBernoulli { k: i64 },
    /// Bernoulli polynomials of order `r`, factor `(t / (e^t - 1))^r`.
    HigherBernoulli { r: u32 },
    /// Euler polynomials of order `r`, factor `(2 / (e^t + 1))^r`.
    Euler { r: u32 },
    /// Frobenius-Euler polynomials, factor `((1 - lambda) / (e^t - lambda))^r`.
    FrobeniusEuler { r: u32, lambda: Rational },
}

impl FamilyTag {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyTag::FrobeniusEuler { lambda, .. } if lambda.is_one() => {
                Err(Error::InvalidLambda(lambda.clone()))
            }
            _ => Ok(()),
        }
    }

    /// The invertible series `g(t)` with `s_n(x) = g(t)^{-1} x^n`.
    pub fn appell_g(&self, cap: usize) -> Result<Series> {
        self.validate()?;
        Ok(match self {
            FamilyTag::PolyBernoulli { k } => gf_poly_bernoulli(*k, cap).inverse()?,
            FamilyTag::HigherBernoulli { r } => series::exp_minus_one_over_t(cap).pow(*r),
            FamilyTag::Euler { r } => series::exp_minus_lambda_normalised(&int(-1), cap)?.pow(*r),
            FamilyTag::FrobeniusEuler { r, lambda } => {
                series::exp_minus_lambda_normalised(lambda, cap)?.pow(*r)
            }
        })
    }

    pub fn appell_family(&self, cap: usize) -> Result<AppellFamily> {
        AppellFamily::new(self.to_string(), self.appell_g(cap)?)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::PolyBernoulli { k } => write!(f, "poly-bernoulli:k={k}"),
            FamilyTag::HigherBernoulli { r } => write!(f, "higher-bernoulli:r={r}"),
            FamilyTag::Euler { r } => write!(f, "euler:r={r}"),
            FamilyTag::FrobeniusEuler { r, lambda } => {
                write!(f, "frobenius-euler:r={r},lambda={lambda}")
            }
        }
    }
}

/// Parses the `Display` form, e.g. `poly-bernoulli:k=-2`, `euler:r=1` or
/// `frobenius-euler:r=2,lambda=1/2`. Omitted `k`/`r` default to 1, an
/// omitted `lambda` is an error.
impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("{msg} in family spec {s:?}"));
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut k = None;
        let mut r = None;
        let mut lambda = None;
        for kv in rest.split(',').filter(|kv| !kv.is_empty()) {
            let (key, val) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "k" => k = Some(val.trim().parse::<i64>().map_err(|_| bad("bad k"))?),
                "r" => r = Some(val.trim().parse::<u32>().map_err(|_| bad("bad r"))?),
                "lambda" => lambda = Some(rational::parse(val).ok_or_else(|| bad("bad lambda"))?),
                _ => return Err(bad("unknown key")),
            }
        }
        let tag = match name.trim() {
            "poly-bernoulli" => FamilyTag::PolyBernoulli { k: k.unwrap_or(1) },
            "higher-bernoulli" => FamilyTag::HigherBernoulli { r: r.unwrap_or(1) },
            "euler" => FamilyTag::Euler { r: r.unwrap_or(1) },
            "frobenius-euler" => FamilyTag::FrobeniusEuler {
                r: r.unwrap_or(1),
                lambda: lambda.ok_or_else(|| bad("missing lambda"))?,
            },
            _ => return Err(bad("unknown family")),
        };
        tag.validate()?;
        Ok(tag)
    }
}

/// Triangle `S2(n, m)` for `0 <= m <= n <= n_max`, filled by
/// `S2(n, m) = m S2(n-1, m) + S2(n-1, m-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stirling2Table {
    rows: Vec<Vec<BigInt>>,
}

impl Stirling2Table {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let row = (0..=n)
                .map(|m| {
                    let stay = prev.get(m).map_or_else(BigInt::zero, |s| s * m);
                    let join = if m == 0 { BigInt::zero() } else { prev[m - 1].clone() };
                    stay + join
                })
                .collect();
            rows.push(row);
        }
        Stirling2Table { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S2(n, m)`; zero for `m > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, m: usize) -> BigInt {
        self.rows[n].get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    fn get_q(&self, n: usize, m: usize) -> Rational {
        big(self.get(n, m))
    }
}

pub fn stirling2(n: usize, m: usize) -> BigInt {
    if m > n {
        return BigInt::zero();
    }
    Stirling2Table::new(n).get(n, m)
}

/// `B_0, ..., B_{n_max}`, the EGF coefficients of `t / (e^t - 1)`.
pub fn bernoulli_numbers(n_max: usize) -> Vec<Rational> {
    series::exp_minus_one_over_t(n_max)
        .inverse()
        .expect("constant term is 1")
        .coeffs()
        .to_vec()
}

pub fn bernoulli_number(n: usize) -> Rational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// `(a)_n = a (a - 1) ... (a - n + 1)`.
pub fn falling_factorial(a: &Rational, n: usize) -> Rational {
    (0..n).fold(Rational::one(), |acc, i| acc * (a - int(i as i64)))
}

/// `B_n^{(k)}(x)` from its Stirling-number closed form: the coefficient of
/// `x^l` is `C(n, l) sum_{m=0}^{n-l} (-1)^{n-m-l} m! S2(n-l, m) / (m+1)^k`.
pub fn poly_bernoulli_polynomial(n: usize, k: i64) -> Polynomial {
    poly_bernoulli_with(&Stirling2Table::new(n), n, k)
}

fn poly_bernoulli_with(table: &Stirling2Table, n: usize, k: i64) -> Polynomial {
    let row = binomial_row(n);
    let coeffs = (0..=n)
        .map(|l| {
            let inner = (0..=n - l)
                .map(|m| {
                    sign(n - m - l)
                        * big(factorial(m))
                        * table.get_q(n - l, m)
                        * inv_pow(m as u64 + 1, k)
                })
                .fold(Rational::zero(), |acc, x| acc + x);
            big(row[l].clone()) * inner
        })
        .collect();
    Polynomial::new(coeffs)
}

/// `B_0^{(k)}(x), ..., B_{n_max}^{(k)}(x)` sharing one Stirling table.
pub fn poly_bernoulli_polynomials(n_max: usize, k: i64) -> Vec<Polynomial> {
    let table = Stirling2Table::new(n_max);
    (0..=n_max).map(|n| poly_bernoulli_with(&table, n, k)).collect()
}

/// `B_n^{(k)} = sum_{m=0}^{n} (-1)^{n-m} m! S2(n, m) / (m+1)^k`.
pub fn poly_bernoulli_number(n: usize, k: i64) -> Rational {
    let table = Stirling2Table::new(n);
    (0..=n)
        .map(|m| sign(n - m) * big(factorial(m)) * table.get_q(n, m) * inv_pow(m as u64 + 1, k))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Finite-difference route:
/// `B_n^{(k)}(x) = sum_{m=0}^{n} (m+1)^{-k} sum_{j=0}^{m} (-1)^j C(m, j) (x - j)^n`.
pub fn poly_bernoulli_by_differences(n: usize, k: i64) -> Polynomial {
    let powers: Vec<Polynomial> = (0..=n)
        .map(|j| {
            let base = Polynomial::linear(int(-(j as i64)));
            (0..n).fold(Polynomial::one(), |acc, _| &acc * &base)
        })
        .collect();
    (0..=n).fold(Polynomial::zero(), |acc, m| {
        let diff = (0..=m).fold(Polynomial::zero(), |d, j| {
            &d + &powers[j].scale(&(sign(j) * big(binomial(m, j))))
        });
        &acc + &diff.scale(&inv_pow(m as u64 + 1, k))
    })
}

/// Operator route: the generating factor applied to `x^n`.
pub fn poly_bernoulli_by_operator(n: usize, k: i64) -> Polynomial {
    umbral::apply(&gf_poly_bernoulli(k, n), &Polynomial::monomial(n))
        .expect("cap equals degree")
}

/// Binomial route: `sum_l C(n, l) B_{n-l}^{(k)} x^l` from the numbers.
pub fn poly_bernoulli_by_binomial(n: usize, k: i64) -> Polynomial {
    let row = binomial_row(n);
    Polynomial::new(
        (0..=n)
            .map(|l| big(row[l].clone()) * poly_bernoulli_number(n - l, k))
            .collect(),
    )
}

/// Degree-`n` polynomial of the tagged family, through its Appell series.
pub fn family_polynomial(tag: &FamilyTag, n: usize) -> Result<Polynomial> {
    umbral::appell_polynomial(&tag.appell_family(n)?, n)
}

/// `s_0, ..., s_{n_max}` for the tagged family.
pub fn family_polynomials(tag: &FamilyTag, n_max: usize) -> Result<Vec<Polynomial>> {
    umbral::appell_sequence(&tag.appell_family(n_max)?, n_max)
}
