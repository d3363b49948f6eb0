//! Semiclassical limit of a quantum affine space.
//!
//! Each parameter `λ_k` is interpolated by a polynomial `f_k(z)` with
//! `f_k(1) = 1`, `f_k(q) = λ_k` and `f_k'(1) = μ_k`. The deformed commutation
//! scalars are `q̃_ij(z) = Π_k f_k(z)^{2 L_k[i][j]}`, and the Poisson bracket of
//! the limit is `{x^s, x^t} = u(s,t) x^s x^t` with `u(s,t) = Σ_k 2 ℓ_k(s,t) μ_k`.
//!
//! [`verify_limit`] checks that `σ̃(s,t)` has value one and derivative
//! `u(s,t)` at `z = 1`, entirely in exact symbolic arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::PoissonElement;
use crate::bichar::Bicharacter;
use crate::error::{Error, Result};
use crate::poly::{Poly, SymbolicScalar, Var};

/// How `f_k` is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FChoice {
    /// The unique quadratic through the three interpolation conditions.
    Quadratic,
    /// `f_k = 1 + μ_k (z − 1)`, so that `λ_k = 1 + μ_k (q − 1)`.
    Linear,
    /// `f_k = z^p`, so that `λ_k = q^p` and `μ_k = p`.
    Power(u32),
}

/// Polynomial in `z` with symbolic coefficients, lowest degree first.
#[derive(Clone, Debug)]
pub struct FPolynomial {
    coeffs: Vec<SymbolicScalar>,
}

impl FPolynomial {
    pub fn new(coeffs: Vec<SymbolicScalar>) -> Self {
        FPolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[SymbolicScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation at a symbolic point.
    pub fn eval(&self, z0: &SymbolicScalar) -> SymbolicScalar {
        let mut acc = SymbolicScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z0).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> FPolynomial {
        FPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c.mul(&SymbolicScalar::int(d as i64)))
                .collect(),
        }
    }

    /// The polynomial as a scalar in the variable `z`.
    pub fn as_scalar(&self) -> SymbolicScalar {
        self.eval(&SymbolicScalar::var(Var::Z))
    }
}

/// Determinant of a 3×3 symbolic matrix by cofactor expansion.
fn det3(m: &[[SymbolicScalar; 3]; 3]) -> SymbolicScalar {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}

/// Solves `f(1) = 1, f(q) = λ, f'(1) = μ` for `f = a z² + b z + c` by Cramer's rule.
///
/// The system matrix has determinant `(q − 1)²`, which never vanishes since `q ≠ 1`.
pub fn solve_f_coefficients(
    lambda: &SymbolicScalar,
    mu: &SymbolicScalar,
) -> (SymbolicScalar, SymbolicScalar, SymbolicScalar) {
    let q = SymbolicScalar::var(Var::Q);
    let one = SymbolicScalar::one();
    let matrix = [
        [one.clone(), one.clone(), one.clone()],
        [q.mul(&q), q.clone(), one.clone()],
        [SymbolicScalar::int(2), one.clone(), SymbolicScalar::zero()],
    ];
    let rhs = [one, lambda.clone(), mu.clone()];
    let det = det3(&matrix);
    let solve_col = |col: usize| {
        let mut mm = matrix.clone();
        for row in 0..3 {
            mm[row][col] = rhs[row].clone();
        }
        det3(&mm).div(&det).expect("determinant (q-1)^2 is nonzero")
    };
    (solve_col(0), solve_col(1), solve_col(2))
}

/// Choice of `μ_k` and of the interpolating polynomials `f_k`.
#[derive(Clone, Debug)]
pub struct Deformation {
    mu: Vec<Poly>,
    choices: Vec<FChoice>,
}

impl Deformation {
    /// Quadratic `f_k` with `μ_k` left as indeterminates.
    pub fn symbolic(m: usize) -> Self {
        Deformation {
            mu: (0..m).map(|k| Poly::var(Var::Mu(k))).collect(),
            choices: vec![FChoice::Quadratic; m],
        }
    }

    /// Explicit `μ_k` values; for [`FChoice::Power`] the value must equal the power.
    pub fn new(mu: Vec<Poly>, choices: Vec<FChoice>) -> Result<Self> {
        if mu.len() != choices.len() {
            return Err(Error::DimensionMismatch {
                expected: choices.len(),
                got: mu.len(),
            });
        }
        let mu = mu
            .into_iter()
            .zip(&choices)
            .map(|(m, c)| match c {
                FChoice::Power(p) => Poly::int(*p as i64),
                _ => m,
            })
            .collect();
        Ok(Deformation { mu, choices })
    }

    /// Single parameter playing the role of `q` with `f_1 = z` and `μ_1 = 1`.
    pub fn uniparameter() -> Self {
        Deformation {
            mu: vec![Poly::one()],
            choices: vec![FChoice::Linear],
        }
    }

    /// Single parameter `q^g` with `f_1 = z^g` and `μ_1 = g`.
    pub fn uniparameter_power(g: u32) -> Self {
        Deformation {
            mu: vec![Poly::int(g as i64)],
            choices: vec![FChoice::Power(g)],
        }
    }

    pub fn m(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self, k: usize) -> &Poly {
        &self.mu[k]
    }

    pub fn mus(&self) -> &[Poly] {
        &self.mu
    }

    pub fn choice(&self, k: usize) -> &FChoice {
        &self.choices[k]
    }

    /// The value `f_k(q)` is required to take.
    pub fn lambda(&self, k: usize) -> SymbolicScalar {
        let q = Poly::var(Var::Q);
        match &self.choices[k] {
            FChoice::Quadratic => SymbolicScalar::var(Var::Lambda(k)),
            FChoice::Linear => SymbolicScalar::from_poly(
                Poly::one().add(&self.mu[k].mul(&q.sub(&Poly::one()))),
            ),
            FChoice::Power(p) => SymbolicScalar::from_poly(q.pow(*p)),
        }
    }

    pub fn f_polynomial(&self, k: usize) -> FPolynomial {
        let mu = SymbolicScalar::from_poly(self.mu[k].clone());
        match &self.choices[k] {
            FChoice::Quadratic => {
                let (a, b, c) = solve_f_coefficients(&self.lambda(k), &mu);
                FPolynomial::new(vec![c, b, a])
            }
            FChoice::Linear => FPolynomial::new(vec![SymbolicScalar::one().sub(&mu), mu]),
            FChoice::Power(p) => {
                let mut coeffs = vec![SymbolicScalar::zero(); *p as usize + 1];
                coeffs[*p as usize] = SymbolicScalar::one();
                FPolynomial::new(coeffs)
            }
        }
    }

    fn check_m(&self, b: &Bicharacter) -> Result<()> {
        if b.m() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: b.m(),
                got: self.m(),
            });
        }
        Ok(())
    }
}

/// Value and first derivative at `z = 1`, i.e. the class modulo `(z − 1)²`.
#[derive(Clone, Debug)]
pub struct Jet {
    pub value: SymbolicScalar,
    pub deriv: SymbolicScalar,
}

impl Jet {
    pub fn one() -> Self {
        Jet {
            value: SymbolicScalar::one(),
            deriv: SymbolicScalar::zero(),
        }
    }

    pub fn at_one(f: &FPolynomial) -> Self {
        let one = SymbolicScalar::one();
        Jet {
            value: f.eval(&one),
            deriv: f.derivative().eval(&one),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        Jet {
            value: self.value.mul(&o.value),
            deriv: self.deriv.mul(&o.value).add(&self.value.mul(&o.deriv)),
        }
    }

    /// `(v, d)^e = (v^e, e v^{e−1} d)`; `None` if a negative power of zero is requested.
    pub fn pow(&self, e: i64) -> Option<Jet> {
        if e == 0 {
            return Some(Jet::one());
        }
        let value = self.value.pow(e)?;
        let deriv = self
            .value
            .pow(e - 1)?
            .mul(&self.deriv)
            .mul(&SymbolicScalar::int(e));
        Some(Jet { value, deriv })
    }
}

/// `Π f_k^{e_k}` as a map from parameter index to nonzero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FactoredKUnit {
    factors: BTreeMap<usize, i64>,
}

impl FactoredKUnit {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, i64)>>(pairs: I) -> Self {
        let mut out = Self::default();
        for (k, e) in pairs {
            out.push(k, e);
        }
        out
    }

    /// `c̃(s,t)` from the exponent vector `ℓ(s,t)`.
    pub fn from_exponents(e: &[i64]) -> Self {
        Self::from_pairs(e.iter().copied().enumerate())
    }

    fn push(&mut self, k: usize, e: i64) {
        let v = self.factors.entry(k).or_insert(0);
        *v += e;
        if *v == 0 {
            self.factors.remove(&k);
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.factors.iter().map(|(k, e)| (*k, *e))
    }

    pub fn mul(&self, o: &FactoredKUnit) -> FactoredKUnit {
        let mut out = self.clone();
        for (k, e) in o.factors() {
            out.push(k, e);
        }
        out
    }

    pub fn pow(&self, e: i64) -> FactoredKUnit {
        Self::from_pairs(self.factors().map(|(k, x)| (k, x * e)))
    }
}

/// `γ_1(f)`, `γ_q(f)` and `ψ(f) = f'(1)`.
#[derive(Clone, Debug)]
pub struct EvaluationMaps {
    pub at_one: SymbolicScalar,
    pub at_q: SymbolicScalar,
    pub log_deriv_at_one: SymbolicScalar,
}

pub fn evaluation_maps(def: &Deformation, f: &FactoredKUnit) -> Result<EvaluationMaps> {
    let q = SymbolicScalar::var(Var::Q);
    let mut jet = Jet::one();
    let mut at_q = SymbolicScalar::one();
    for (k, e) in f.factors() {
        if k >= def.m() {
            return Err(Error::IndexOutOfRange { index: k, n: def.m() });
        }
        let fk = def.f_polynomial(k);
        jet = jet.mul(&Jet::at_one(&fk).pow(e).ok_or(Error::DenominatorVanishes { k: k + 1 })?);
        at_q = at_q.mul(&fk.eval(&q).pow(e).ok_or(Error::DenominatorVanishes { k: k + 1 })?);
    }
    Ok(EvaluationMaps {
        at_one: jet.value,
        at_q,
        log_deriv_at_one: jet.deriv,
    })
}

/// The antisymmetric matrix `U[i][j] = Σ_k 2 L_k[i][j] μ_k`.
#[derive(Clone, PartialEq)]
pub struct PoissonMatrix {
    n: usize,
    entries: Vec<Vec<Poly>>,
}

impl PoissonMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    /// `u(s,t) = sᵀ U t`.
    pub fn u(&self, s: &[i64], t: &[i64]) -> Poly {
        let mut acc = Poly::zero();
        for (i, &si) in s.iter().enumerate() {
            if si == 0 {
                continue;
            }
            for (j, &tj) in t.iter().enumerate() {
                if tj == 0 || self.entries[i][j].is_zero() {
                    continue;
                }
                acc = acc.add(&self.entries[i][j].scale(&crate::poly::rational(si * tj)));
            }
        }
        acc
    }

    pub fn substitute(&self, v: &Var, value: &Poly) -> PoissonMatrix {
        PoissonMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|p| p.substitute(v, value)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for PoissonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PoissonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PoissonMatrix({self})")
    }
}

pub fn poisson_matrix(b: &Bicharacter, mu: &[Poly]) -> Result<PoissonMatrix> {
    if mu.len() != b.m() {
        return Err(Error::DimensionMismatch {
            expected: b.m(),
            got: mu.len(),
        });
    }
    let n = b.n();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    mu.iter().enumerate().fold(Poly::zero(), |acc, (k, m)| {
                        acc.add(&m.scale(&crate::poly::rational(2 * b.entry(k, i, j))))
                    })
                })
                .collect()
        })
        .collect();
    Ok(PoissonMatrix { n, entries })
}

/// `{a, b}` for the log-canonical bracket `{x^s, x^t} = u(s,t) x^{s+t}`.
pub fn poisson_bracket(u: &PoissonMatrix, a: &PoissonElement, b: &PoissonElement) -> Result<PoissonElement> {
    if a.n() != u.n() {
        return Err(Error::DimensionMismatch {
            expected: u.n(),
            got: a.n(),
        });
    }
    a.weighted_product(b, |s, t| Ok(u.u(s, t)))
}

/// Above this total `z`-degree the full expansion of `σ̃` is skipped and
/// only the jet computation runs.
pub const EXPANSION_DEGREE_LIMIT: usize = 8;

/// Outcome of one successful [`verify_limit`] call.
#[derive(Clone, Debug)]
pub struct LimitReport {
    pub s: Vec<i64>,
    pub t: Vec<i64>,
    /// `ℓ_k(s,t)` for each parameter.
    pub exponents: Vec<i64>,
    /// `σ̃(s,t)` at `z = 1`.
    pub value_at_one: SymbolicScalar,
    /// `σ̃'(s,t)` at `z = 1`.
    pub derivative_at_one: SymbolicScalar,
    /// `Σ_k 2 ℓ_k(s,t) μ_k`.
    pub expected: Poly,
    /// Whether the full rational function in `z` was also expanded and differentiated.
    pub expanded: bool,
}

fn mismatch(s: &[i64], t: &[i64], detail: String) -> Error {
    Error::LimitMismatch {
        s: s.to_vec(),
        t: t.to_vec(),
        detail,
    }
}

#[derive(Clone)]
struct CheckedExponents {
    value: SymbolicScalar,
    deriv: SymbolicScalar,
    expected: Poly,
    expanded: bool,
}

/// Reusable checker for the limit formula on one bicharacter.
///
/// The check depends on `(s, t)` only through `ℓ(s,t)`, so outcomes are
/// cached per exponent vector.
pub struct LimitVerifier<'a> {
    b: &'a Bicharacter,
    def: &'a Deformation,
    fs: Vec<FPolynomial>,
    jets: Vec<Jet>,
    cache: HashMap<Vec<i64>, std::result::Result<CheckedExponents, String>>,
}

impl<'a> LimitVerifier<'a> {
    pub fn new(b: &'a Bicharacter, def: &'a Deformation) -> Result<Self> {
        def.check_m(b)?;
        let fs: Vec<FPolynomial> = (0..def.m()).map(|k| def.f_polynomial(k)).collect();
        let jets = fs.iter().map(Jet::at_one).collect();
        Ok(LimitVerifier {
            b,
            def,
            fs,
            jets,
            cache: HashMap::new(),
        })
    }

    /// Checks `σ̃(s,t)(1) = 1` and `σ̃(s,t)'(1) = u(s,t)`.
    pub fn verify(&mut self, s: &[i64], t: &[i64]) -> Result<LimitReport> {
        if s.iter().chain(t).any(|&x| x < 0) {
            return Err(Error::NegativeExponent);
        }
        let exponents = self.b.eval_c(s, t)?.0;
        if !self.cache.contains_key(&exponents) {
            let outcome = self.check_exponents(&exponents);
            self.cache.insert(exponents.clone(), outcome);
        }
        match &self.cache[&exponents] {
            Ok(c) => Ok(LimitReport {
                s: s.to_vec(),
                t: t.to_vec(),
                exponents,
                value_at_one: c.value.clone(),
                derivative_at_one: c.deriv.clone(),
                expected: c.expected.clone(),
                expanded: c.expanded,
            }),
            Err(detail) => Err(mismatch(s, t, detail.clone())),
        }
    }

    /// Same check as [`LimitVerifier::verify`] without assembling a report.
    pub fn check(&mut self, s: &[i64], t: &[i64]) -> Result<()> {
        if s.iter().chain(t).any(|&x| x < 0) {
            return Err(Error::NegativeExponent);
        }
        let exponents = self.b.eval_c(s, t)?.0;
        let outcome = match self.cache.get(&exponents) {
            Some(o) => o,
            None => {
                let o = self.check_exponents(&exponents);
                self.cache.entry(exponents).or_insert(o)
            }
        };
        match outcome {
            Ok(_) => Ok(()),
            Err(detail) => Err(mismatch(s, t, detail.clone())),
        }
    }

    fn check_exponents(&self, exponents: &[i64]) -> std::result::Result<CheckedExponents, String> {
        let expected = exponents
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (k, &e)| {
                acc.add(&self.def.mu(k).scale(&crate::poly::rational(2 * e)))
            });
        let expected_scalar = SymbolicScalar::from_poly(expected.clone());

        let mut jet = Jet::one();
        for (k, &e) in exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = self.jets[k]
                .pow(2 * e)
                .ok_or_else(|| format!("f_{} vanishes at z = 1", k + 1))?;
            jet = jet.mul(&factor);
        }
        if !jet.value.equals(&SymbolicScalar::one()) {
            return Err(format!("value at z = 1 is {}", jet.value));
        }
        if !jet.deriv.equals(&expected_scalar) {
            return Err(format!(
                "derivative {} differs from u(s,t) = {}",
                jet.deriv, expected
            ));
        }

        let total_degree: usize = exponents
            .iter()
            .enumerate()
            .map(|(k, e)| 2 * e.unsigned_abs() as usize * self.fs[k].degree())
            .sum();
        let expanded = total_degree <= EXPANSION_DEGREE_LIMIT;
        if expanded {
            self.check_expanded(exponents, &expected_scalar)?;
        }
        Ok(CheckedExponents {
            value: jet.value,
            deriv: jet.deriv,
            expected,
            expanded,
        })
    }

    /// `σ̃ = P/Q` expanded in `z`, then `(P'Q − PQ')/Q²` at `z = 1`.
    fn check_expanded(
        &self,
        exponents: &[i64],
        expected: &SymbolicScalar,
    ) -> std::result::Result<(), String> {
        let mut p = SymbolicScalar::one();
        let mut q = SymbolicScalar::one();
        for (k, &e) in exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let power = self.fs[k].as_scalar().pow(2 * e.abs()).expect("nonnegative power");
            if e > 0 {
                p = p.mul(&power);
            } else {
                q = q.mul(&power);
            }
        }
        let one = SymbolicScalar::one();
        let at_one = |x: &SymbolicScalar| {
            x.substitute(&Var::Z, &one)
                .ok_or_else(|| "denominator vanishes at z = 1".to_string())
        };
        let (p1, q1) = (at_one(&p)?, at_one(&q)?);
        let (dp1, dq1) = (at_one(&p.derivative(&Var::Z))?, at_one(&q.derivative(&Var::Z))?);
        if !p1.equals(&q1) {
            return Err(format!("expanded P(1) = {p1} but Q(1) = {q1}"));
        }
        let lhs = dp1.mul(&q1).sub(&p1.mul(&dq1));
        let rhs = expected.mul(&q1).mul(&q1);
        if !lhs.equals(&rhs) {
            return Err(format!("expanded P'Q - PQ' = {lhs} but u(s,t)·Q(1)^2 = {rhs}"));
        }
        Ok(())
    }
}

/// Checks `σ̃(s,t)(1) = 1` and `σ̃(s,t)'(1) = u(s,t)` exactly.
///
/// The jet of each `f_k` modulo `(z − 1)²` is always used. When the total
/// degree of `σ̃` is at most [`EXPANSION_DEGREE_LIMIT`], the fraction
/// `P(z)/Q(z)` is also expanded and `(P'Q − PQ')/Q²` is evaluated at one.
pub fn verify_limit(b: &Bicharacter, def: &Deformation, s: &[i64], t: &[i64]) -> Result<LimitReport> {
    LimitVerifier::new(b, def)?.verify(s, t)
}

/// `q̃_ij(z0) = Π_k f_k(z0)^{2 L_k[i][j]}` (0-based `i`, `j`).
pub fn specialize_commutation(
    b: &Bicharacter,
    def: &Deformation,
    i: usize,
    j: usize,
    z0: &SymbolicScalar,
) -> Result<SymbolicScalar> {
    def.check_m(b)?;
    for idx in [i, j] {
        if idx >= b.n() {
            return Err(Error::IndexOutOfRange { index: idx, n: b.n() });
        }
    }
    let mut acc = SymbolicScalar::one();
    for k in 0..b.m() {
        let e = 2 * b.entry(k, i, j);
        if e == 0 {
            continue;
        }
        let value = def.f_polynomial(k).eval(z0);
        acc = acc.mul(&value.pow(e).ok_or(Error::DenominatorVanishes { k: k + 1 })?);
    }
    Ok(acc)
}
