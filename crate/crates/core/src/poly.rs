//! Sparse multivariate polynomials over `Q` and unreduced fractions of them.
//!
//! Variables are the deformation variable `z`, the parameter `q`, the
//! parameters `λ_k`, the derivative symbols `μ_k`, and free named symbols.
//! Fractions are compared by cross-multiplication; the only simplification
//! performed is exact division of numerator by denominator when it succeeds.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial indeterminate. The derived order is the lex variable order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    Z,
    Q,
    /// 0-based parameter index.
    Lambda(usize),
    /// 0-based parameter index.
    Mu(usize),
    Named(Arc<str>),
}

impl Var {
    pub fn named(name: &str) -> Var {
        Var::Named(Arc::from(name))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => write!(f, "z"),
            Var::Q => write!(f, "q"),
            Var::Lambda(k) => write!(f, "lambda_{}", k + 1),
            Var::Mu(k) => write!(f, "mu_{}", k + 1),
            Var::Named(s) => write!(f, "{s}"),
        }
    }
}

/// Power product, sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Pure lexicographic comparison with `Z > Q > λ > μ > named`.
    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }

    /// Removes `v`, returning its exponent and the remaining monomial.
    fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut e = 0;
        for (w, k) in &self.0 {
            if w == v {
                e = *k;
            } else {
                rest.push((w.clone(), *k));
            }
        }
        (e, Monomial(rest))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with rational coefficients; zero terms are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rational(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(BigRational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == 0 {
                continue;
            }
            let mono = rest.mul(&Monomial::var(v.clone(), e - 1));
            out.add_term(mono, c * rational(e as i64));
        }
        out
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, v: &Var, value: &Poly) -> Poly {
        let mut by_power: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            by_power.entry(e).or_default().add_term(rest, c.clone());
        }
        let mut out = Poly::zero();
        let mut cache: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, coeff) in by_power {
            let power = cache.entry(e).or_insert_with(|| value.pow(e)).clone();
            out = out.add(&coeff.mul(&power));
        }
        out
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (lm_d, lc_d) = d.leading()?;
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((lm, lc)) = rem.leading() {
            let mono = lm.div(&lm_d)?;
            let coeff = lc / &lc_d;
            let t = Poly::term(coeff.clone(), mono.clone());
            rem = rem.sub(&t.mul(d));
            quot.add_term(mono, coeff);
        }
        Some(quot)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending lex order reads naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// `num / den` with `den ≠ 0`, kept unreduced except for exact division.
#[derive(Clone)]
pub struct SymbolicScalar {
    num: Poly,
    den: Poly,
}

impl SymbolicScalar {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        SymbolicScalar { num, den }.normalized()
    }

    pub fn from_poly(p: Poly) -> Self {
        SymbolicScalar {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Poly::int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, when the denominator has been divided out.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    fn normalized(self) -> Self {
        if self.num.is_zero() {
            return SymbolicScalar::zero();
        }
        if let Some(c) = self.den.as_constant() {
            let inv = BigRational::one() / c;
            return SymbolicScalar {
                num: self.num.scale(&inv),
                den: Poly::one(),
            };
        }
        if let Some(q) = self.num.exact_div(&self.den) {
            return SymbolicScalar::from_poly(q);
        }
        self
    }

    pub fn add(&self, o: &SymbolicScalar) -> SymbolicScalar {
        if self.den == o.den {
            return SymbolicScalar::new(self.num.add(&o.num), self.den.clone());
        }
        SymbolicScalar::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> SymbolicScalar {
        SymbolicScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &SymbolicScalar) -> SymbolicScalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SymbolicScalar) -> SymbolicScalar {
        SymbolicScalar::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// `None` on division by zero.
    pub fn div(&self, o: &SymbolicScalar) -> Option<SymbolicScalar> {
        if o.is_zero() {
            return None;
        }
        Some(SymbolicScalar::new(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn pow(&self, e: i64) -> Option<SymbolicScalar> {
        let base = if e < 0 {
            SymbolicScalar::one().div(self)?
        } else {
            self.clone()
        };
        let k = e.unsigned_abs() as u32;
        Some(SymbolicScalar::new(base.num.pow(k), base.den.pow(k)))
    }

    /// Equality of fractions by cross-multiplication.
    pub fn equals(&self, o: &SymbolicScalar) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn substitute(&self, v: &Var, value: &SymbolicScalar) -> Option<SymbolicScalar> {
        // clear the value's denominator through homogenization by degree
        let deg = self.num.degree_in(v).max(self.den.degree_in(v));
        let num = substitute_fraction(&self.num, v, value, deg);
        let den = substitute_fraction(&self.den, v, value, deg);
        if den.is_zero() {
            return None;
        }
        Some(SymbolicScalar::new(num, den))
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, v: &Var) -> SymbolicScalar {
        let num = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        SymbolicScalar::new(num, self.den.mul(&self.den))
    }
}

/// `p(v = a/b) · b^deg` for `value = a/b`.
fn substitute_fraction(p: &Poly, v: &Var, value: &SymbolicScalar, deg: u32) -> Poly {
    let mut by_power: BTreeMap<u32, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let (e, rest) = m.split_off(v);
        by_power.entry(e).or_default().add_term(rest, c.clone());
    }
    let mut out = Poly::zero();
    for (e, coeff) in by_power {
        let term = coeff.mul(&value.num.pow(e)).mul(&value.den.pow(deg - e));
        out = out.add(&term);
    }
    out
}

impl PartialEq for SymbolicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl From<Poly> for SymbolicScalar {
    fn from(p: Poly) -> Self {
        SymbolicScalar::from_poly(p)
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolicScalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Poly {
        Poly::var(Var::Z)
    }
    fn q() -> Poly {
        Poly::var(Var::Q)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = z().add(&Poly::int(-1)).pow(2);
        assert_eq!(p.to_string(), "z^2 - 2*z + 1");
        assert_eq!(p.derivative(&Var::Z).to_string(), "2*z - 2");
        assert!(p.substitute(&Var::Z, &Poly::one()).is_zero());
        let mixed = z().mul(&q()).add(&Poly::var(Var::named("alpha")).scale(&rational(3)));
        assert_eq!(mixed.to_string(), "z*q + 3*alpha");
    }

    #[test]
    fn exact_division() {
        let a = z().sub(&q());
        let b = z().add(&q()).add(&Poly::int(2));
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(b.exact_div(&a), None);
        assert_eq!(Poly::zero().exact_div(&a), Some(Poly::zero()));
    }

    #[test]
    fn fractions() {
        let qm1 = q().sub(&Poly::one());
        let x = SymbolicScalar::new(qm1.pow(2), qm1.clone());
        assert_eq!(x.as_poly(), Some(qm1.clone()));
        let inv = SymbolicScalar::one().div(&SymbolicScalar::from(qm1.clone())).unwrap();
        assert!(inv.mul(&SymbolicScalar::from(qm1.clone())).equals(&SymbolicScalar::one()));
        assert!(SymbolicScalar::zero().pow(-1).is_none());
        // d/dq 1/(q-1) = -1/(q-1)^2
        let d = inv.derivative(&Var::Q);
        let expected = SymbolicScalar::new(Poly::int(-1), qm1.pow(2));
        assert_eq!(d, expected);
        // substitute q = 1/2 into 1/(q-1)
        let half = SymbolicScalar::new(Poly::int(1), Poly::int(2));
        assert_eq!(inv.substitute(&Var::Q, &half).unwrap(), SymbolicScalar::int(-2));
        assert!(inv.substitute(&Var::Q, &SymbolicScalar::one()).is_none());
    }
}
