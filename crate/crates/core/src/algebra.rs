//! The twisted monoid algebra `k^c Γ⁺` on the monomial basis `{x^s}`.
//!
//! Quantum-side elements carry Laurent coefficients in the parameters
//! `λ_1..λ_m`; Poisson-side elements carry polynomial coefficients (usually
//! in the `μ_k`). Both share [`AlgebraElement`] through [`Coefficient`].

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bichar::{Bicharacter, ExponentValue};
use crate::error::{Error, Result};
use crate::poly::{format_rational, rational, Poly};

/// The operations an algebra coefficient ring has to provide.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coefficient for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
}

/// Element of the group ring `Q[λ_1^{±1}, …, λ_m^{±1}]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentCoefficient {
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentCoefficient {
    /// The group element `Π λ_k^{e_k}` with coefficient one.
    pub fn monomial(e: &ExponentValue) -> Self {
        Self::term(BigRational::one(), e.exponents().to_vec())
    }

    pub fn term(c: BigRational, exponents: Vec<i64>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(canonical_exponents(exponents), c);
        }
        LaurentCoefficient { terms }
    }

    pub fn rational(c: BigRational) -> Self {
        // exponent vectors are stored with trailing zeros trimmed
        Self::term(c, Vec::new())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Names used when printing; defaults to `lambda_k`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        LaurentDisplay { c: self, names }
    }
}

fn add_exponents(a: &[i64], b: &[i64]) -> Vec<i64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

fn canonical_exponents(mut e: Vec<i64>) -> Vec<i64> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Coefficient for LaurentCoefficient {
    fn zero() -> Self {
        LaurentCoefficient::default()
    }
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentCoefficient::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(canonical_exponents(add_exponents(ea, eb)), ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        LaurentCoefficient {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl LaurentCoefficient {
    fn canonical(self) -> Self {
        let mut out = LaurentCoefficient::default();
        for (e, c) in self.terms {
            out.add_term(canonical_exponents(e), c);
        }
        out
    }
}

struct LaurentDisplay<'a> {
    c: &'a LaurentCoefficient,
    names: &'a [String],
}

impl fmt::Display for LaurentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.c.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(i, x)| {
                    let name = self
                        .names
                        .get(i)
                        .cloned()
                        .unwrap_or_else(|| format!("lambda_{}", i + 1));
                    if *x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Debug for LaurentCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// Finite sum `Σ coeff_s · x^s` over `s ∈ Γ⁺`; lexicographic order on exponents.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<C: Coefficient> {
    n: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

pub type QuantumElement = AlgebraElement<LaurentCoefficient>;
pub type PoissonElement = AlgebraElement<Poly>;

impl<C: Coefficient> AlgebraElement<C> {
    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial_with(vec![0; n], C::one()).expect("zero exponent is nonnegative")
    }

    /// `coeff · x^s`; rejects negative exponents.
    pub fn monomial_with(s: Vec<i64>, coeff: C) -> Result<Self> {
        if s.iter().any(|&e| e < 0) {
            return Err(Error::NegativeExponent);
        }
        let mut out = Self::zero(s.len());
        out.add_term(s, coeff);
        Ok(out)
    }

    pub fn monomial(s: Vec<i64>) -> Result<Self> {
        Self::monomial_with(s, C::one())
    }

    /// The generator `x_i` (0-based).
    pub fn generator(n: usize, i: usize) -> Self {
        Self::monomial(crate::bichar::unit(n, i)).expect("unit vectors are nonnegative")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &[i64]) -> Option<&C> {
        self.terms.get(s)
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    fn add_term(&mut self, s: Vec<i64>, c: C) {
        if c.is_zero() {
            return;
        }
        let next = match self.terms.get(&s) {
            Some(old) => old.add(&c),
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, next);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            n: self.n,
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c.mul(k));
        }
        out
    }

    /// Product in which `x^s · x^t = weight(s,t) · x^{s+t}`.
    pub fn weighted_product<F>(&self, other: &Self, mut weight: F) -> Result<Self>
    where
        F: FnMut(&[i64], &[i64]) -> Result<C>,
    {
        self.check_same(other)?;
        let mut out = Self::zero(self.n);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let w = weight(s, t)?;
                let sum: Vec<i64> = s.iter().zip(t).map(|(x, y)| x + y).collect();
                out.add_term(sum, a.mul(b).mul(&w));
            }
        }
        Ok(out)
    }

    /// The untwisted (commutative) product.
    pub fn commutative_product(&self, other: &Self) -> Result<Self> {
        self.weighted_product(other, |_, _| Ok(C::one()))
    }
}

impl<C: Coefficient> fmt::Display for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", format_monomial(s))?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `x1*x2^2`, or `1` for the empty monomial.
pub fn format_monomial(s: &[i64]) -> String {
    let parts: Vec<String> = s
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| {
            if *e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{e}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn check_dim(b: &Bicharacter, u: &QuantumElement) -> Result<()> {
    if u.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            got: u.n(),
        });
    }
    Ok(())
}

/// Twisted product `x^s * x^t = c(s,t) x^{s+t}`, extended bilinearly.
pub fn multiply(b: &Bicharacter, u: &QuantumElement, v: &QuantumElement) -> Result<QuantumElement> {
    check_dim(b, u)?;
    check_dim(b, v)?;
    let out = u.weighted_product(v, |s, t| Ok(LaurentCoefficient::monomial(&b.eval_c(s, t)?)))?;
    Ok(AlgebraElement {
        n: out.n,
        terms: out.terms.into_iter().map(|(s, c)| (s, c.canonical())).collect(),
    })
}

/// `uv − vu`.
pub fn commutator(b: &Bicharacter, u: &QuantumElement, v: &QuantumElement) -> Result<QuantumElement> {
    multiply(b, u, v)?.sub(&multiply(b, v, u)?)
}

/// Rational scalar as a Laurent coefficient.
pub fn laurent_scalar(n: i64) -> LaurentCoefficient {
    LaurentCoefficient::rational(rational(n))
}
