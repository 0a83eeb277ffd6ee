//! Exact verification of the poly-Bernoulli recurrences, the two-way
//! evaluation identity and the connection formulas toward higher-order
//! Bernoulli, Euler and Frobenius-Euler polynomials.
//!
//! Every check builds both sides independently and compares canonical
//! coefficient lists. Nothing is sampled at evaluation points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{
    bernoulli_numbers, falling_factorial, poly_bernoulli_polynomials, FamilyTag, Stirling2Table,
};
use crate::rational::{big, binomial, binomial_row, factorial, frac, int, inv_pow, pow, sign, Rational};
use crate::series::Series;
use crate::umbral::{self, appell_sequence, connection_appell, ConnectionMatrix, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// Three-term recurrence raising the degree.
    RaisingRecurrence,
    /// The raising recurrence with `t` applied to both sides.
    LoweredRecurrence,
    /// Recurrence in the shifted basis `(x - 1)^l`.
    ShiftedBasisRecurrence,
    /// Two-way evaluation of `<Li_k(1 - e^{-t}) | x^{n+1}>`.
    TwoWayEvaluation,
    /// Expansion in higher-order Bernoulli polynomials.
    HigherBernoulliExpansion,
    /// Expansion in Euler polynomials of order `r`.
    EulerExpansion,
    /// Expansion in Frobenius-Euler polynomials.
    FrobeniusEulerExpansion,
    /// Binomial expansion, Appell addition formula and derivative rule.
    AppellBasics,
    /// `<g(t) t^k | s_n(x)> = n! delta_{n,k}` for one family.
    ShefferOrthogonality,
}

impl IdentityId {
    /// Identities swept by [`run_grid`], in report order.
    pub const GRID: [IdentityId; 8] = [
        IdentityId::RaisingRecurrence,
        IdentityId::LoweredRecurrence,
        IdentityId::ShiftedBasisRecurrence,
        IdentityId::TwoWayEvaluation,
        IdentityId::HigherBernoulliExpansion,
        IdentityId::EulerExpansion,
        IdentityId::FrobeniusEulerExpansion,
        IdentityId::AppellBasics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::RaisingRecurrence => "thm1",
            IdentityId::LoweredRecurrence => "cor2",
            IdentityId::ShiftedBasisRecurrence => "thm3",
            IdentityId::TwoWayEvaluation => "eq42",
            IdentityId::HigherBernoulliExpansion => "thm4",
            IdentityId::EulerExpansion => "thm5",
            IdentityId::FrobeniusEulerExpansion => "thm6",
            IdentityId::AppellBasics => "appell",
            IdentityId::ShefferOrthogonality => "sheffer",
        }
    }

    /// Smallest `n` for which the identity is stated.
    pub fn n_min(self) -> usize {
        match self {
            IdentityId::LoweredRecurrence | IdentityId::ShiftedBasisRecurrence | IdentityId::AppellBasics => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::GRID
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamValue {
    Int(i64),
    Rat(Rational),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Rat(v) => write!(f, "{v}"),
            ParamValue::Text(v) => f.write_str(v),
        }
    }
}

/// One side of a checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Scalar(Rational),
    Poly(Polynomial),
    /// Several coefficient lists: a bundle of polynomials or a matrix.
    Rows(Vec<Vec<Rational>>),
}

impl Value {
    fn polys(ps: &[Polynomial]) -> Value {
        Value::Rows(ps.iter().map(|p| p.coeffs().to_vec()).collect())
    }

    /// Adds one to the leading stored coefficient (the constant term for
    /// polynomials).
    fn corrupt(&mut self) {
        match self {
            Value::Scalar(v) => *v += Rational::one(),
            Value::Poly(p) => {
                let mut c = p.coeffs().to_vec();
                if c.is_empty() {
                    c.push(Rational::zero());
                }
                c[0] += Rational::one();
                *p = Polynomial::new(c);
            }
            Value::Rows(rows) => match rows.first_mut().and_then(|r| r.first_mut()) {
                Some(v) => *v += Rational::one(),
                None => rows.insert(0, vec![Rational::one()]),
            },
        }
    }
}

/// Outcome of one identity check at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub identity: IdentityId,
    pub params: Vec<(&'static str, ParamValue)>,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
    /// Set when a secondary cross-check failed although `lhs == rhs`.
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(
        identity: IdentityId,
        params: Vec<(&'static str, ParamValue)>,
        lhs: Value,
        rhs: Value,
    ) -> Self {
        let pass = lhs == rhs;
        CheckReport { identity, params, lhs, rhs, pass, note: None }
    }

    pub fn param(&self, name: &str) -> Option<&ParamValue> {
        self.params.iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    /// Positions `(row, column)` where `Rows` sides disagree; for scalar and
    /// polynomial sides, `(0, 0)` if they differ.
    pub fn mismatches(&self) -> Vec<(usize, usize)> {
        match (&self.lhs, &self.rhs) {
            (Value::Rows(a), Value::Rows(b)) => {
                let rows = a.len().max(b.len());
                let mut out = Vec::new();
                for i in 0..rows {
                    let (ra, rb) = (a.get(i), b.get(i));
                    let cols = ra.map_or(0, Vec::len).max(rb.map_or(0, Vec::len));
                    for j in 0..cols {
                        if ra.and_then(|r| r.get(j)) != rb.and_then(|r| r.get(j)) {
                            out.push((i, j));
                        }
                    }
                }
                out
            }
            (a, b) if a != b => vec![(0, 0)],
            _ => Vec::new(),
        }
    }

    fn with_cross_check(mut self, what: &str, ok: bool) -> Self {
        if !ok {
            self.pass = false;
            self.note = Some(format!("{what} differ from the generic connection coefficients"));
        }
        self
    }

    fn sort_key(&self) -> (IdentityId, Vec<&ParamValue>) {
        (self.identity, self.params.iter().map(|(_, v)| v).collect())
    }
}

fn n_k(n: usize, k: i64) -> Vec<(&'static str, ParamValue)> {
    vec![("n", ParamValue::Int(n as i64)), ("k", ParamValue::Int(k))]
}

fn n_k_r(n: usize, k: i64, r: u32) -> Vec<(&'static str, ParamValue)> {
    let mut p = n_k(n, k);
    p.push(("r", ParamValue::Int(i64::from(r))));
    p
}

fn require_n(id: IdentityId, n: usize) -> Result<()> {
    if n < id.n_min() {
        return Err(Error::InvalidParameter(format!("{id} needs n >= {}", id.n_min())));
    }
    Ok(())
}

fn sum_polys(terms: impl Iterator<Item = Polynomial>) -> Polynomial {
    terms.fold(Polynomial::zero(), |acc, p| &acc + &p)
}

fn sum_q(terms: impl Iterator<Item = Rational>) -> Rational {
    terms.fold(Rational::zero(), |acc, x| acc + x)
}

/// Precomputed inputs shared by many checks: Bernoulli numbers,
/// poly-Bernoulli polynomials for each needed `k` (and `k - 1`), basis
/// families and generic connection matrices, all up to degree `n_max`.
///
/// Row `N` of a connection matrix does not depend on the matrix size, so
/// one matrix at `n_max` serves every `n <= n_max`.
struct Tables {
    bernoulli: Vec<Rational>,
    poly_bernoulli: BTreeMap<i64, Vec<Polynomial>>,
    bases: BTreeMap<FamilyTag, Vec<Polynomial>>,
    connections: BTreeMap<(i64, FamilyTag), ConnectionMatrix>,
}

impl Tables {
    fn new(n_max: usize, ks: &[i64], targets: &[FamilyTag]) -> Result<Self> {
        let mut poly_bernoulli = BTreeMap::new();
        for &k in ks {
            for kk in [k, k - 1] {
                poly_bernoulli.entry(kk).or_insert_with(|| poly_bernoulli_polynomials(n_max, kk));
            }
        }
        let mut bases = BTreeMap::new();
        let mut connections = BTreeMap::new();
        for target in targets {
            let fam = target.appell_family(n_max)?;
            bases.insert(target.clone(), appell_sequence(&fam, n_max)?);
            for &k in ks {
                let source = FamilyTag::PolyBernoulli { k }.appell_family(n_max)?;
                connections.insert((k, target.clone()), connection_appell(&source, &fam, n_max)?);
            }
        }
        Ok(Tables { bernoulli: bernoulli_numbers(n_max), poly_bernoulli, bases, connections })
    }

    fn pb(&self, k: i64) -> &[Polynomial] {
        &self.poly_bernoulli[&k]
    }

    fn pb_numbers(&self, k: i64, n: usize) -> Vec<Rational> {
        self.pb(k)[..=n].iter().map(|p| p.coeff(0)).collect()
    }

    fn raising_recurrence(&self, n: usize, k: i64) -> CheckReport {
        let (pk, pk1, bern) = (self.pb(k), self.pb(k - 1), &self.bernoulli);
        let row = binomial_row(n + 1);
        let correction = sum_polys((0..=n + 1).map(|l| {
            let diff = &pk[n + 1 - l] - &pk1[n + 1 - l];
            diff.scale(&(big(row[l].clone()) * &bern[l]))
        }));
        let rhs = &pk[n].shift_up() - &correction.scale(&frac(1, n as i64 + 1));
        CheckReport::new(IdentityId::RaisingRecurrence, n_k(n, k), Value::Poly(pk[n + 1].clone()), Value::Poly(rhs))
    }

    fn lowered_recurrence(&self, n: usize, k: i64) -> CheckReport {
        let (pk, pk1, bern) = (self.pb(k), self.pb(k - 1), &self.bernoulli);
        let row = binomial_row(n);
        let ni = int(n as i64);
        let head = &pk[n].scale(&(&ni + Rational::one()))
            - &(&Polynomial::linear(frac(1, 2)) * &pk[n - 1]).scale(&ni);
        // Empty for n = 1.
        let tail = sum_polys(
            (0..n.saturating_sub(1)).map(|l| pk[l].scale(&(big(row[l].clone()) * &bern[n - l]))),
        );
        let lhs = &head + &tail;
        let rhs = sum_polys((0..=n).map(|l| pk1[l].scale(&(big(row[l].clone()) * &bern[n - l]))));
        CheckReport::new(IdentityId::LoweredRecurrence, n_k(n, k), Value::Poly(lhs), Value::Poly(rhs))
    }

    fn shifted_basis_recurrence(&self, n: usize, k: i64) -> CheckReport {
        let pk = self.pb(k);
        let table = Stirling2Table::new(n - 1);
        let row = binomial_row(n - 1);
        let x_minus_1 = Polynomial::linear(int(-1));
        let mut basis = Polynomial::one();
        let mut sum = Polynomial::zero();
        // The inner m-sum keeps its full range 0..n; terms with m > n-1-l
        // vanish because S2(n-1-l, m) = 0.
        for (l, c) in row.iter().enumerate() {
            let inner = sum_q((0..n).map(|m| {
                sign(m) * big(factorial(m + 1)) * big(table.get(n - 1 - l, m)) * inv_pow(m as u64 + 2, k)
            }));
            let coeff = sign(n - 1 - l) * big(c.clone()) * inner;
            sum = &sum + &basis.scale(&coeff);
            basis = &basis * &x_minus_1;
        }
        let rhs = &pk[n - 1].shift_up() + &sum;
        CheckReport::new(IdentityId::ShiftedBasisRecurrence, n_k(n, k), Value::Poly(pk[n].clone()), Value::Poly(rhs))
    }

    fn two_way_evaluation(&self, n: usize, k: i64) -> CheckReport {
        let bk = self.pb_numbers(k, n);
        let bk1 = self.pb_numbers(k - 1, n);
        let lhs = sum_q((0..=n).map(|m| sign(n - m) * big(binomial(n, m)) * &bk1[m]));
        let rhs = sum_q((0..=n).map(|m| sign(n - m) * big(binomial(n + 1, m)) * &bk[m]));
        CheckReport::new(IdentityId::TwoWayEvaluation, n_k(n, k), Value::Scalar(lhs), Value::Scalar(rhs))
    }

    /// Verifies `B_n^{(k)}(x) = sum_m coeffs[m] s_m(x)` in the target basis
    /// and that `coeffs` equals row `n` of the generic connection matrix.
    fn expansion(
        &self,
        id: IdentityId,
        params: Vec<(&'static str, ParamValue)>,
        n: usize,
        k: i64,
        target: &FamilyTag,
        coeffs: &[Rational],
    ) -> CheckReport {
        let basis = &self.bases[target];
        let rhs = Polynomial::linear_combination(coeffs.iter().zip(basis));
        let agree = self.connections[&(k, target.clone())].row(n) == coeffs;
        CheckReport::new(id, params, Value::Poly(self.pb(k)[n].clone()), Value::Poly(rhs))
            .with_cross_check("closed-form coefficients", agree)
    }

    fn higher_bernoulli_expansion(&self, n: usize, k: i64, r: u32) -> CheckReport {
        let coeffs = higher_bernoulli_coefficients_from(&self.pb_numbers(k, n), r);
        self.expansion(IdentityId::HigherBernoulliExpansion, n_k_r(n, k, r), n, k, &FamilyTag::HigherBernoulli { r }, &coeffs)
    }

    fn euler_expansion(&self, n: usize, k: i64, r: u32) -> CheckReport {
        let coeffs = euler_coefficients_from(&self.pb(k)[..=n], r);
        self.expansion(IdentityId::EulerExpansion, n_k_r(n, k, r), n, k, &FamilyTag::Euler { r }, &coeffs)
    }

    fn frobenius_euler_expansion(&self, n: usize, k: i64, r: u32, lambda: &Rational) -> CheckReport {
        let coeffs = frobenius_euler_coefficients_from(&self.pb(k)[..=n], r, lambda);
        let target = FamilyTag::FrobeniusEuler { r, lambda: lambda.clone() };
        let mut params = n_k_r(n, k, r);
        params.push(("lambda", ParamValue::Rat(lambda.clone())));
        self.expansion(IdentityId::FrobeniusEulerExpansion, params, n, k, &target, &coeffs)
    }

    fn appell_basics(&self, n: usize, k: i64) -> Result<CheckReport> {
        let pk = self.pb(k);
        let p = &pk[n];
        let row = binomial_row(n);
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();

        lhs.push(p.clone());
        rhs.push(Polynomial::new((0..=n).map(|l| big(row[l].clone()) * pk[n - l].coeff(0)).collect()));

        for (num, den) in APPELL_SHIFTS {
            let y = frac(num, den);
            lhs.push(umbral::apply(&Series::exp(&y, n), p)?);
            rhs.push(Polynomial::new(
                (0..=n).map(|i| big(row[i].clone()) * pk[n - i].eval(&y)).collect(),
            ));
        }

        let lowered = pk[n - 1].scale(&int(n as i64));
        lhs.push(p.derivative());
        rhs.push(lowered.clone());
        lhs.push(umbral::apply(&Series::t(n), p)?);
        rhs.push(lowered);

        Ok(CheckReport::new(IdentityId::AppellBasics, n_k(n, k), Value::polys(&lhs), Value::polys(&rhs)))
    }
}

/// `B_{n+1}^{(k)}(x) = x B_n^{(k)}(x)
///   - 1/(n+1) sum_{l=0}^{n+1} C(n+1, l) B_l [B_{n+1-l}^{(k)}(x) - B_{n+1-l}^{(k-1)}(x)]`.
pub fn check_theorem1(n: usize, k: i64) -> Result<CheckReport> {
    Ok(Tables::new(n + 1, &[k], &[])?.raising_recurrence(n, k))
}

/// `(n+1) B_n^{(k)}(x) - n (x + 1/2) B_{n-1}^{(k)}(x) + sum_{l=0}^{n-2} C(n, l) B_{n-l} B_l^{(k)}(x)
///   = sum_{l=0}^{n} C(n, l) B_{n-l} B_l^{(k-1)}(x)`, for `n >= 1`.
pub fn check_corollary2(n: usize, k: i64) -> Result<CheckReport> {
    require_n(IdentityId::LoweredRecurrence, n)?;
    Ok(Tables::new(n, &[k], &[])?.lowered_recurrence(n, k))
}

/// `B_n^{(k)}(x) = x B_{n-1}^{(k)}(x) + sum_{l=0}^{n-1} (-1)^{n-1-l} C(n-1, l)
///   [sum_{m=0}^{n-1} (-1)^m (m+1)! S2(n-1-l, m) / (m+2)^k] (x-1)^l`, for `n >= 1`.
pub fn check_theorem3(n: usize, k: i64) -> Result<CheckReport> {
    require_n(IdentityId::ShiftedBasisRecurrence, n)?;
    Ok(Tables::new(n, &[k], &[])?.shifted_basis_recurrence(n, k))
}

/// `sum_{m=0}^{n} (-1)^{n-m} C(n, m) B_m^{(k-1)} = sum_{m=0}^{n} C(n+1, m) (-1)^{n-m} B_m^{(k)}`.
pub fn check_eq42(n: usize, k: i64) -> Result<CheckReport> {
    Ok(Tables::new(n, &[k], &[])?.two_way_evaluation(n, k))
}

fn higher_bernoulli_coefficients_from(numbers: &[Rational], r: u32) -> Vec<Rational> {
    let n = numbers.len() - 1;
    let r = r as usize;
    let table = Stirling2Table::new(n + r);
    let r_fact = big(factorial(r));
    (0..=n)
        .map(|m| {
            let span = int((n - m) as i64);
            let inner = sum_q((0..=n - m).map(|l| {
                &r_fact * falling_factorial(&span, l) / big(factorial(l + r))
                    * big(table.get(l + r, r))
                    * &numbers[n - m - l]
            }));
            big(binomial(n, m)) * inner
        })
        .collect()
}

/// Closed-form coefficients of `B_n^{(k)}(x)` in the basis `𝔹_m^{(r)}(x)`:
/// `C(n, m) sum_{l=0}^{n-m} r! (n-m)_l / (l+r)! S2(l+r, r) B_{n-m-l}^{(k)}`.
pub fn higher_bernoulli_coefficients(n: usize, k: i64, r: u32) -> Vec<Rational> {
    let numbers: Vec<Rational> = poly_bernoulli_polynomials(n, k).iter().map(|p| p.coeff(0)).collect();
    higher_bernoulli_coefficients_from(&numbers, r)
}

/// Reads the basis factor as `𝔹_m^{(r)}(x)`, with `m` the summation index.
pub fn check_theorem4(n: usize, k: i64, r: u32) -> Result<CheckReport> {
    Ok(Tables::new(n, &[k], &[FamilyTag::HigherBernoulli { r }])?.higher_bernoulli_expansion(n, k, r))
}

/// `sum_j w_j B_{n-m}^{(k)}(j)` scaled by `C(n, m)`, for each `m`.
fn weighted_evaluations(pk: &[Polynomial], weights: &[Rational], prefactor: &Rational) -> Vec<Rational> {
    let n = pk.len() - 1;
    (0..=n)
        .map(|m| {
            let inner = sum_q(weights.iter().enumerate().map(|(j, w)| w * pk[n - m].eval(&int(j as i64))));
            prefactor * big(binomial(n, m)) * inner
        })
        .collect()
}

fn euler_coefficients_from(pk: &[Polynomial], r: u32) -> Vec<Rational> {
    let r = r as usize;
    let weights: Vec<Rational> = (0..=r).map(|j| big(binomial(r, j))).collect();
    weighted_evaluations(pk, &weights, &pow(&int(2), -(r as i64)))
}

fn frobenius_euler_coefficients_from(pk: &[Polynomial], r: u32, lambda: &Rational) -> Vec<Rational> {
    let r = r as usize;
    let neg_lambda = -lambda;
    let weights: Vec<Rational> = (0..=r)
        .map(|j| big(binomial(r, j)) * pow(&neg_lambda, (r - j) as i64))
        .collect();
    weighted_evaluations(pk, &weights, &pow(&(Rational::one() - lambda), -(r as i64)))
}

/// `C(n, m) / 2^r sum_{j=0}^{r} C(r, j) B_{n-m}^{(k)}(j)`.
pub fn euler_coefficients(n: usize, k: i64, r: u32) -> Vec<Rational> {
    euler_coefficients_from(&poly_bernoulli_polynomials(n, k), r)
}

/// `C(n, m) / (1 - lambda)^r sum_{j=0}^{r} C(r, j) (-lambda)^{r-j} B_{n-m}^{(k)}(j)`.
///
/// `lambda = -1` gives the Euler-polynomial coefficients.
pub fn frobenius_euler_coefficients(n: usize, k: i64, r: u32, lambda: &Rational) -> Result<Vec<Rational>> {
    if lambda.is_one() {
        return Err(Error::InvalidLambda(lambda.clone()));
    }
    Ok(frobenius_euler_coefficients_from(&poly_bernoulli_polynomials(n, k), r, lambda))
}

/// Reads the basis factor as `E_m^{(r)}(x)`, with `m` the summation index.
pub fn check_theorem5(n: usize, k: i64, r: u32) -> Result<CheckReport> {
    Ok(Tables::new(n, &[k], &[FamilyTag::Euler { r }])?.euler_expansion(n, k, r))
}

pub fn check_theorem6(n: usize, k: i64, r: u32, lambda: &Rational) -> Result<CheckReport> {
    let target = FamilyTag::FrobeniusEuler { r, lambda: lambda.clone() };
    Ok(Tables::new(n, &[k], &[target])?.frobenius_euler_expansion(n, k, r, lambda))
}

const APPELL_SHIFTS: [(i64, i64); 3] = [(1, 1), (-2, 1), (1, 3)];

/// Bundles, for `n >= 1`:
/// - `B_n^{(k)}(x) = sum_l C(n, l) B_{n-l}^{(k)} x^l`;
/// - `B_n^{(k)}(x + y) = sum_j C(n, j) B_j^{(k)}(y) x^{n-j}` for `y` in `{1, -2, 1/3}`,
///   with the left side computed as `e^{yt} B_n^{(k)}(x)`;
/// - `d/dx B_n^{(k)}(x) = t B_n^{(k)}(x) = n B_{n-1}^{(k)}(x)`.
///
/// `lhs` and `rhs` list the six polynomial pairs in that order.
pub fn check_appell_basics(n: usize, k: i64) -> Result<CheckReport> {
    require_n(IdentityId::AppellBasics, n)?;
    Tables::new(n, &[k], &[])?.appell_basics(n, k)
}

/// Parameter grid for [`run_grid`]. Ranges are inclusive; an identity only
/// runs at points inside its stated domain (for example `n >= 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub k_min: i64,
    pub k_max: i64,
    pub r_min: u32,
    pub r_max: u32,
    pub lambdas: Vec<Rational>,
    pub identities: Vec<IdentityId>,
}

impl Default for GridSpec {
    /// `n <= 12`, `k in [-4, 4]`, `r <= 4`, `lambda in {-1, 1/2, 2, 3}`.
    fn default() -> Self {
        GridSpec {
            n_min: 0,
            n_max: 12,
            k_min: -4,
            k_max: 4,
            r_min: 0,
            r_max: 4,
            lambdas: vec![int(-1), frac(1, 2), int(2), int(3)],
            identities: IdentityId::GRID.to_vec(),
        }
    }
}

impl GridSpec {
    pub fn point(n: usize, k: i64, r: u32, lambda: Rational) -> Self {
        GridSpec {
            n_min: n,
            n_max: n,
            k_min: k,
            k_max: k,
            r_min: r,
            r_max: r,
            lambdas: vec![lambda],
            identities: IdentityId::GRID.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambdas.iter().find(|l| l.is_one()) {
            return Err(Error::InvalidLambda(l.clone()));
        }
        if let Some(id) = self.identities.iter().find(|id| !IdentityId::GRID.contains(id)) {
            return Err(Error::InvalidParameter(format!("{id} is not a grid identity")));
        }
        Ok(())
    }

    fn jobs(&self) -> Vec<Job> {
        let mut lambdas = self.lambdas.clone();
        lambdas.sort();
        lambdas.dedup();
        let mut ids = self.identities.clone();
        ids.sort();
        ids.dedup();
        let mut jobs = Vec::new();
        for id in ids {
            for n in self.n_min.max(id.n_min())..=self.n_max {
                for k in self.k_min..=self.k_max {
                    match id {
                        IdentityId::HigherBernoulliExpansion | IdentityId::EulerExpansion => {
                            for r in self.r_min..=self.r_max {
                                jobs.push(Job { id, n, k, r, lambda: None });
                            }
                        }
                        IdentityId::FrobeniusEulerExpansion => {
                            for r in self.r_min..=self.r_max {
                                for l in &lambdas {
                                    jobs.push(Job { id, n, k, r, lambda: Some(l.clone()) });
                                }
                            }
                        }
                        _ => jobs.push(Job { id, n, k, r: 0, lambda: None }),
                    }
                }
            }
        }
        jobs
    }

    fn tables(&self) -> Result<Tables> {
        let ks: Vec<i64> = (self.k_min..=self.k_max).collect();
        let mut targets = Vec::new();
        for r in self.r_min..=self.r_max {
            if self.identities.contains(&IdentityId::HigherBernoulliExpansion) {
                targets.push(FamilyTag::HigherBernoulli { r });
            }
            if self.identities.contains(&IdentityId::EulerExpansion) {
                targets.push(FamilyTag::Euler { r });
            }
            if self.identities.contains(&IdentityId::FrobeniusEulerExpansion) {
                for lambda in &self.lambdas {
                    targets.push(FamilyTag::FrobeniusEuler { r, lambda: lambda.clone() });
                }
            }
        }
        targets.sort();
        targets.dedup();
        // The raising recurrence at n reaches degree n + 1.
        Tables::new(self.n_max + 1, &ks, &targets)
    }
}

struct Job {
    id: IdentityId,
    n: usize,
    k: i64,
    r: u32,
    lambda: Option<Rational>,
}

impl Job {
    fn run(&self, tables: &Tables) -> Result<CheckReport> {
        let (n, k, r) = (self.n, self.k, self.r);
        Ok(match self.id {
            IdentityId::RaisingRecurrence => tables.raising_recurrence(n, k),
            IdentityId::LoweredRecurrence => tables.lowered_recurrence(n, k),
            IdentityId::ShiftedBasisRecurrence => tables.shifted_basis_recurrence(n, k),
            IdentityId::TwoWayEvaluation => tables.two_way_evaluation(n, k),
            IdentityId::HigherBernoulliExpansion => tables.higher_bernoulli_expansion(n, k, r),
            IdentityId::EulerExpansion => tables.euler_expansion(n, k, r),
            IdentityId::FrobeniusEulerExpansion => tables.frobenius_euler_expansion(n, k, r, self.lambda.as_ref().expect("lambda set")),
            IdentityId::AppellBasics => tables.appell_basics(n, k)?,
            IdentityId::ShefferOrthogonality => unreachable!("not a grid identity"),
        })
    }
}

/// Deliberate corruption of one grid point: the first coefficient of the
/// right-hand side at `(identity, n, k)` is increased by one before the
/// comparison, for every `r` and `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub identity: IdentityId,
    pub n: usize,
    pub k: i64,
}

impl FromStr for Mutation {
    type Err = Error;

    /// `IDENTITY:N:K`, e.g. `thm1:3:-2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("mutation {s:?} is not IDENTITY:N:K"));
        let mut parts = s.split(':');
        let (Some(id), Some(n), Some(k), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        Ok(Mutation {
            identity: id.parse()?,
            n: n.parse().map_err(|_| bad())?,
            k: k.parse().map_err(|_| bad())?,
        })
    }
}

/// Runs every selected identity over the grid, in parallel, and returns the
/// reports ordered by identity and then by parameters.
pub fn run_grid(spec: &GridSpec) -> Result<Vec<CheckReport>> {
    run_grid_mutated(spec, None)
}

pub fn run_grid_mutated(spec: &GridSpec, mutation: Option<&Mutation>) -> Result<Vec<CheckReport>> {
    spec.validate()?;
    let jobs = spec.jobs();
    if jobs.is_empty() {
        return Ok(Vec::new());
    }
    let tables = spec.tables()?;
    let mut reports = jobs
        .par_iter()
        .map(|job| {
            let mut report = job.run(&tables)?;
            if mutation.is_some_and(|m| m.identity == job.id && m.n == job.n && m.k == job.k) {
                report.rhs.corrupt();
                report.pass = report.note.is_none() && report.lhs == report.rhs;
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passes(r: Result<CheckReport>) {
        let r = r.unwrap();
        assert!(r.pass, "{} {:?}: {:?} vs {:?} {:?}", r.identity, r.params, r.lhs, r.rhs, r.note);
    }

    #[test]
    fn raising_recurrence_examples() {
        passes(check_theorem1(0, 1));
        passes(check_theorem1(3, 2));
        passes(check_theorem1(4, -2));
    }

    #[test]
    fn lowered_recurrence_examples() {
        passes(check_corollary2(1, 1));
        passes(check_corollary2(5, 3));
        passes(check_corollary2(6, -3));
        assert!(check_corollary2(0, 1).is_err());
    }

    #[test]
    fn shifted_basis_examples() {
        passes(check_theorem3(1, 0));
        passes(check_theorem3(4, 2));
        passes(check_theorem3(5, -1));
        assert!(check_theorem3(0, 2).is_err());
    }

    #[test]
    fn two_way_evaluation_examples() {
        for k in -4..=4 {
            let r = check_eq42(0, k).unwrap();
            assert_eq!(r.lhs, Value::Scalar(int(1)));
            assert!(r.pass);
        }
        passes(check_eq42(4, 3));
        passes(check_eq42(7, -2));
    }

    #[test]
    fn higher_bernoulli_expansion_examples() {
        for n in 0..6 {
            // r = 0: the binomial expansion coefficients C(n, m) B_{n-m}^{(k)}.
            let c = higher_bernoulli_coefficients(n, 2, 0);
            let expect: Vec<Rational> = (0..=n)
                .map(|m| big(binomial(n, m)) * crate::families::poly_bernoulli_number(n - m, 2))
                .collect();
            assert_eq!(c, expect);
            passes(check_theorem4(n, 2, 0));
        }
        passes(check_theorem4(3, 2, 1));
        passes(check_theorem4(5, -2, 3));
    }

    #[test]
    fn euler_expansion_examples() {
        passes(check_theorem5(4, 3, 0));
        passes(check_theorem5(4, 1, 2));
        passes(check_theorem5(6, -1, 1));
    }

    #[test]
    fn frobenius_euler_expansion_examples() {
        for r in 0..=3 {
            assert_eq!(
                frobenius_euler_coefficients(5, 2, r, &int(-1)).unwrap(),
                euler_coefficients(5, 2, r)
            );
        }
        passes(check_theorem6(3, 2, 2, &int(3)));
        passes(check_theorem6(5, -3, 1, &frac(1, 2)));
        assert_eq!(check_theorem6(3, 1, 1, &int(1)).unwrap_err(), Error::InvalidLambda(int(1)));
    }

    #[test]
    fn appell_basics_examples() {
        for k in -4..=4 {
            passes(check_appell_basics(1, k));
        }
        passes(check_appell_basics(6, 2));
        passes(check_appell_basics(6, -2));
        assert!(check_appell_basics(0, 1).is_err());
    }

    #[test]
    fn grid_single_point() {
        let reports = run_grid(&GridSpec::point(3, 2, 1, int(2))).unwrap();
        assert_eq!(reports.len(), 8);
        assert!(reports.iter().all(|r| r.pass));
        let ids: Vec<_> = reports.iter().map(|r| r.identity).collect();
        assert_eq!(ids, IdentityId::GRID);
    }

    #[test]
    fn grid_empty_intersection() {
        let spec = GridSpec {
            n_max: 0,
            identities: vec![IdentityId::LoweredRecurrence, IdentityId::ShiftedBasisRecurrence],
            ..GridSpec::point(0, 1, 0, int(2))
        };
        assert!(run_grid(&spec).unwrap().is_empty());
        let none = GridSpec { identities: vec![], ..GridSpec::default() };
        assert!(run_grid(&none).unwrap().is_empty());
    }

    #[test]
    fn grid_rejects_lambda_one() {
        let spec = GridSpec { lambdas: vec![int(1)], ..GridSpec::point(2, 1, 1, int(2)) };
        assert_eq!(run_grid(&spec).unwrap_err(), Error::InvalidLambda(int(1)));
    }

    #[test]
    fn grid_is_ordered_and_deterministic() {
        let spec = GridSpec { n_max: 4, k_min: -1, k_max: 1, r_max: 1, ..GridSpec::default() };
        let a = run_grid(&spec).unwrap();
        let b = run_grid(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].sort_key() <= w[1].sort_key()));
        assert!(a.iter().all(|r| r.pass));
    }

    #[test]
    fn mutation_flags_exactly_one_point() {
        let spec = GridSpec {
            n_max: 3,
            k_min: 1,
            k_max: 2,
            identities: vec![IdentityId::RaisingRecurrence],
            ..GridSpec::default()
        };
        let m: Mutation = "thm1:2:1".parse().unwrap();
        let reports = run_grid_mutated(&spec, Some(&m)).unwrap();
        let failing: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].param("n"), Some(&ParamValue::Int(2)));
        assert_eq!(failing[0].param("k"), Some(&ParamValue::Int(1)));
        assert_eq!(failing[0].mismatches(), vec![(0, 0)]);
        assert!("thm1:2".parse::<Mutation>().is_err());
        assert!("nosuch:1:1".parse::<Mutation>().is_err());
    }

    #[test]
    fn mismatches_on_rows() {
        let report = CheckReport::new(
            IdentityId::ShefferOrthogonality,
            vec![],
            Value::Rows(vec![vec![int(1), int(0)], vec![int(0), int(2)]]),
            Value::Rows(vec![vec![int(1), int(0)], vec![int(0), int(1)]]),
        );
        assert!(!report.pass);
        assert_eq!(report.mismatches(), vec![(1, 1)]);
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::GRID {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("nosuch".parse::<IdentityId>().is_err());
        assert!("sheffer".parse::<IdentityId>().is_err());
    }
}
