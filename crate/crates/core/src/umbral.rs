//! Series acting on polynomials: the pairing `<f(t) | p(x)>`, the operator
//! action `f(t) p(x)`, Appell sequences, and connection coefficients between
//! two Appell families.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::identities::{CheckReport, IdentityId, ParamValue, Value};
use crate::rational::{big, binomial, binomial_row, factorial, int, Rational};
use crate::series::Series;

/// Polynomial in `x` over the rationals, stored in ascending powers with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        Polynomial { coeffs }
    }

    /// `x + c`.
    pub fn linear(c: Rational) -> Self {
        Polynomial::new(vec![c, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x`.
    pub fn shift_up(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, a)| a * int(j as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    /// `p(x + y)`, by direct binomial expansion.
    pub fn translate(&self, y: &Rational) -> Polynomial {
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (j, a) in self.coeffs.iter().enumerate() {
            let row = binomial_row(j);
            let mut ypow = Rational::one();
            for i in (0..=j).rev() {
                out[i] += a * big(row[i].clone()) * &ypow;
                ypow *= y;
            }
        }
        Polynomial::new(out)
    }

    /// `c_0 p_0 + c_1 p_1 + ...`.
    pub fn linear_combination<'a>(
        terms: impl IntoIterator<Item = (&'a Rational, &'a Polynomial)>,
    ) -> Polynomial {
        terms
            .into_iter()
            .fold(Polynomial::zero(), |acc, (c, p)| &acc + &p.scale(c))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "({a})x")?,
                _ if a.is_one() => write!(f, "x^{j}")?,
                _ => write!(f, "({a})x^{j}")?,
            }
        }
        Ok(())
    }
}

fn check_degree(f: &Series, p: &Polynomial) -> Result<()> {
    match p.degree() {
        Some(d) if d > f.cap() => Err(Error::CapTooSmall { needed: d, cap: f.cap() }),
        _ => Ok(()),
    }
}

/// `<f(t) | p(x)> = sum_j p_j a_j` with `a_j` the EGF coefficients of `f`.
pub fn pair(f: &Series, p: &Polynomial) -> Result<Rational> {
    check_degree(f, p)?;
    Ok(p.coeffs
        .iter()
        .zip(f.coeffs())
        .map(|(c, a)| c * a)
        .fold(Rational::zero(), |acc, x| acc + x))
}

/// `f(t) p(x) = sum_k a_k / k! * p^{(k)}(x)`.
///
/// Coefficient `i` of the result is `sum_{j >= i} C(j, i) a_{j-i} p_j`.
pub fn apply(f: &Series, p: &Polynomial) -> Result<Polynomial> {
    check_degree(f, p)?;
    let a = f.coeffs();
    let out = (0..p.coeffs.len())
        .map(|i| {
            (i..p.coeffs.len())
                .filter(|&j| !p.coeffs[j].is_zero() && !a[j - i].is_zero())
                .map(|j| big(binomial(j, i)) * &a[j - i] * &p.coeffs[j])
                .fold(Rational::zero(), |acc, x| acc + x)
        })
        .collect();
    Ok(Polynomial::new(out))
}

/// Appell sequence attached to an invertible series `g`: the sequence
/// `s_n(x) = g(t)^{-1} x^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppellFamily {
    name: String,
    g: Series,
}

impl AppellFamily {
    pub fn new(name: impl Into<String>, g: Series) -> Result<Self> {
        if !g.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(AppellFamily { name: name.into(), g })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self) -> &Series {
        &self.g
    }

    pub fn cap(&self) -> usize {
        self.g.cap()
    }
}

fn need_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapTooSmall { needed: n, cap });
    }
    Ok(())
}

pub fn appell_polynomial(fam: &AppellFamily, n: usize) -> Result<Polynomial> {
    need_cap(n, fam.cap())?;
    apply(&fam.g.inverse()?, &Polynomial::monomial(n))
}

/// `s_0, ..., s_{n_max}` with a single series inversion.
pub fn appell_sequence(fam: &AppellFamily, n_max: usize) -> Result<Vec<Polynomial>> {
    need_cap(n_max, fam.cap())?;
    let inv = fam.g.inverse()?;
    (0..=n_max).map(|n| apply(&inv, &Polynomial::monomial(n))).collect()
}

/// One step of the Appell recurrence `s_{n+1} = (x - g'(t)/g(t)) s_n`.
pub fn appell_step(fam: &AppellFamily, s_n: &Polynomial) -> Result<Polynomial> {
    let n = s_n.degree().unwrap_or(0);
    if n >= fam.cap() {
        return Err(Error::CapTooSmall { needed: n + 1, cap: fam.cap() });
    }
    let g = &fam.g;
    let g_prime = g.derivative();
    let log_deriv = g_prime.checked_mul(&g.truncate(g_prime.cap())?.inverse()?)?;
    Ok(&s_n.shift_up() - &apply(&log_deriv, s_n)?)
}

/// Lower-triangular matrix of connection coefficients `c_{n,m}`, stored by
/// rows (`rows[n]` has `n + 1` entries).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMatrix {
    rows: Vec<Vec<Rational>>,
}

impl ConnectionMatrix {
    pub fn identity(n: usize) -> Self {
        let rows = (0..=n)
            .map(|i| {
                let mut row = vec![Rational::zero(); i + 1];
                row[i] = Rational::one();
                row
            })
            .collect();
        ConnectionMatrix { rows }
    }

    /// Largest row index.
    pub fn n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, m: usize) -> Rational {
        self.rows
            .get(n)
            .and_then(|row| row.get(m))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Square `(n+1) x (n+1)` form with explicit zeros above the diagonal.
    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let size = self.rows.len();
        (0..size).map(|i| (0..size).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul(&self, other: &ConnectionMatrix) -> Result<ConnectionMatrix> {
        if self.n() != other.n() {
            return Err(Error::InvalidParameter(format!(
                "connection matrices of different sizes ({} vs {})",
                self.n(),
                other.n()
            )));
        }
        let rows = (0..=self.n())
            .map(|i| {
                (0..=i)
                    .map(|j| {
                        (j..=i)
                            .map(|l| self.get(i, l) * other.get(l, j))
                            .fold(Rational::zero(), |acc, x| acc + x)
                    })
                    .collect()
            })
            .collect();
        Ok(ConnectionMatrix { rows })
    }

    pub fn is_identity(&self) -> bool {
        *self == ConnectionMatrix::identity(self.n())
    }
}

/// Coefficients `c_{N,m}` with `s_N(x) = sum_m c_{N,m} r_m(x)` for
/// `N <= n`, where `s` is the Appell sequence of `source` and `r` that of
/// `target`.
///
/// With `g` the source series and `h` the target series, `c_{N,m} =
/// C(N, m) b_{N-m}` where `b` are the EGF coefficients of `h(t) / g(t)`.
pub fn connection_appell(
    source: &AppellFamily,
    target: &AppellFamily,
    n: usize,
) -> Result<ConnectionMatrix> {
    need_cap(n, source.cap())?;
    need_cap(n, target.cap())?;
    let ratio = target.g.truncate(n)?.checked_mul(&source.g.truncate(n)?.inverse()?)?;
    let b = ratio.coeffs();
    let rows = (0..=n)
        .map(|big_n| {
            binomial_row(big_n)
                .into_iter()
                .enumerate()
                .map(|(m, c)| big(c) * &b[big_n - m])
                .collect()
        })
        .collect();
    Ok(ConnectionMatrix { rows })
}

/// Verifies `<g(t) t^k | s_n(x)> = n! delta_{n,k}` for `0 <= n, k <= n_max`.
///
/// `lhs` holds the computed pairings (row `n`, column `k`), `rhs` the
/// expected values; [`CheckReport::mismatches`] lists any failing `(n, k)`.
pub fn sheffer_orthogonality_check(fam: &AppellFamily, n_max: usize) -> Result<CheckReport> {
    let seq = appell_sequence(fam, n_max)?;
    let g = fam.g.truncate(n_max)?;
    let functionals = (0..=n_max)
        .map(|k| g.checked_mul(&Series::monomial(k, n_max)))
        .collect::<Result<Vec<_>>>()?;
    let mut lhs = Vec::with_capacity(n_max + 1);
    let mut rhs = Vec::with_capacity(n_max + 1);
    for (n, s_n) in seq.iter().enumerate() {
        lhs.push(functionals.iter().map(|f| pair(f, s_n)).collect::<Result<Vec<_>>>()?);
        rhs.push(
            (0..=n_max)
                .map(|k| if k == n { big(factorial(n)) } else { Rational::zero() })
                .collect(),
        );
    }
    Ok(CheckReport::new(
        IdentityId::ShefferOrthogonality,
        vec![
            ("family", ParamValue::Text(fam.name.clone())),
            ("n_max", ParamValue::Int(n_max as i64)),
        ],
        Value::Rows(lhs),
        Value::Rows(rhs),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyTag;
    use crate::rational::frac;

    fn poly(v: &[Rational]) -> Polynomial {
        Polynomial::new(v.to_vec())
    }

    #[test]
    fn canonical_form() {
        let p = poly(&[int(1), int(0), int(0)]);
        assert_eq!(p.coeffs(), &[int(1)]);
        assert_eq!(poly(&[int(0)]), Polynomial::zero());
        assert_eq!(Polynomial::zero().degree(), None);
        let q = &Polynomial::linear(int(-1)) * &Polynomial::linear(int(1));
        assert_eq!(q, poly(&[int(-1), int(0), int(1)]));
        assert_eq!(q.to_string(), "x^2 + -1");
    }

    #[test]
    fn pair_examples() {
        for k in 0..6 {
            for n in 0..6 {
                let v = pair(&Series::monomial(k, 6), &Polynomial::monomial(n)).unwrap();
                let expect = if n == k { big(factorial(n)) } else { Rational::zero() };
                assert_eq!(v, expect);
            }
        }
        let p = poly(&[int(-1), int(0), int(1)]);
        assert_eq!(pair(&Series::one(4), &p).unwrap(), int(-1));
        assert_eq!(pair(&Series::exp(&int(3), 4), &p).unwrap(), int(8));
        let err = pair(&Series::one(1), &p).unwrap_err();
        assert_eq!(err, Error::CapTooSmall { needed: 2, cap: 1 });
    }

    #[test]
    fn apply_examples() {
        for n in 1..6 {
            let d = apply(&Series::t(6), &Polynomial::monomial(n)).unwrap();
            assert_eq!(d, Polynomial::monomial(n - 1).scale(&int(n as i64)));
        }
        let p = poly(&[frac(2, 3), int(-5), int(1), int(7)]);
        assert_eq!(apply(&Series::one(3), &p).unwrap(), p);
        let shifted = apply(&Series::exp(&int(1), 2), &Polynomial::monomial(2)).unwrap();
        assert_eq!(shifted, poly(&[int(1), int(2), int(1)]));
        assert!(apply(&Series::one(2), &p).is_err());
    }

    #[test]
    fn appell_polynomial_examples() {
        let trivial = AppellFamily::new("one", Series::one(6)).unwrap();
        assert_eq!(appell_polynomial(&trivial, 5).unwrap(), Polynomial::monomial(5));
        let pb2 = FamilyTag::PolyBernoulli { k: 2 }.appell_family(4).unwrap();
        assert_eq!(appell_polynomial(&pb2, 1).unwrap(), Polynomial::linear(frac(1, 4)));
        let hb1 = FamilyTag::HigherBernoulli { r: 1 }.appell_family(4).unwrap();
        assert_eq!(appell_polynomial(&hb1, 2).unwrap(), poly(&[frac(1, 6), int(-1), int(1)]));
        assert!(appell_polynomial(&hb1, 5).is_err());
        assert_eq!(AppellFamily::new("t", Series::t(3)).unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn appell_step_examples() {
        let trivial = AppellFamily::new("one", Series::one(6)).unwrap();
        assert_eq!(appell_step(&trivial, &Polynomial::monomial(3)).unwrap(), Polynomial::monomial(4));
        let pb2 = FamilyTag::PolyBernoulli { k: 2 }.appell_family(4).unwrap();
        assert_eq!(appell_step(&pb2, &Polynomial::one()).unwrap(), Polynomial::linear(frac(1, 4)));
        let hb1 = FamilyTag::HigherBernoulli { r: 1 }.appell_family(4).unwrap();
        let b2 = poly(&[frac(1, 6), int(-1), int(1)]);
        let b3 = appell_step(&hb1, &b2).unwrap();
        assert_eq!(b3, poly(&[int(0), frac(1, 2), frac(-3, 2), int(1)]));
        assert_eq!(b3, appell_polynomial(&hb1, 3).unwrap());
        assert!(appell_step(&hb1, &Polynomial::monomial(4)).is_err());
    }

    #[test]
    fn connection_identity_and_inverse() {
        let pb = FamilyTag::PolyBernoulli { k: -1 }.appell_family(6).unwrap();
        assert!(connection_appell(&pb, &pb, 6).unwrap().is_identity());
        let eu = FamilyTag::Euler { r: 2 }.appell_family(6).unwrap();
        let there = connection_appell(&pb, &eu, 6).unwrap();
        let back = connection_appell(&eu, &pb, 6).unwrap();
        assert!(there.mul(&back).unwrap().is_identity());
        assert!(connection_appell(&pb, &eu, 7).is_err());
        let dense = there.to_dense();
        assert_eq!(dense.len(), 7);
        assert!(dense[0][1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn sheffer_orthogonality_examples() {
        let trivial = AppellFamily::new("one", Series::one(5)).unwrap();
        assert!(sheffer_orthogonality_check(&trivial, 5).unwrap().pass);
        let pb = FamilyTag::PolyBernoulli { k: -2 }.appell_family(8).unwrap();
        assert!(sheffer_orthogonality_check(&pb, 8).unwrap().pass);
        let fe = FamilyTag::FrobeniusEuler { r: 2, lambda: int(3) }.appell_family(8).unwrap();
        let report = sheffer_orthogonality_check(&fe, 8).unwrap();
        assert!(report.pass);
        assert!(report.mismatches().is_empty());
    }
}
