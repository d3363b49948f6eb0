//! Cocycle twists of graded commutative algebras.
//!
//! A commutative algebra `R` generated by homogeneous `r_1..r_n` of degrees
//! `δ_i ∈ G = Z^d` is twisted by a bicharacter `c` on `G` into `A`, with
//! `r′s′ = c(α,β)(rs)′`. Pulling `c` back along `ε_i ↦ δ_i` gives the quantum
//! affine space `Â` mapping onto `A`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{multiply, Coefficient, LaurentCoefficient, QuantumElement};
use crate::bichar::Bicharacter;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Grading group `Z^d`, generator degrees, and a bicharacter on `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingData {
    d: usize,
    /// `d×n`; column `i` is `δ_i`.
    degrees: Vec<Vec<i64>>,
    c: Bicharacter,
}

impl GradingData {
    pub fn new(degrees: Vec<Vec<i64>>, c: Bicharacter) -> Result<Self> {
        let d = c.n();
        if degrees.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: degrees.len(),
            });
        }
        let n = degrees.first().map_or(0, Vec::len);
        if let Some(row) = degrees.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        Ok(GradingData { d, degrees, c })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of generators `r_i`.
    pub fn n(&self) -> usize {
        self.degrees.first().map_or(0, Vec::len)
    }

    pub fn degrees(&self) -> &[Vec<i64>] {
        &self.degrees
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.c
    }

    /// `δ_i`.
    pub fn degree(&self, i: usize) -> Vec<i64> {
        self.degrees.iter().map(|row| row[i]).collect()
    }

    /// `ρ(s) = Σ s_i δ_i`.
    pub fn rho(&self, s: &[i64]) -> Vec<i64> {
        self.degrees
            .iter()
            .map(|row| row.iter().zip(s).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `ĉ = c∘(ρ×ρ)`, with exponent matrices `DᵀL_kD`.
pub fn pullback(g: &GradingData) -> Result<Bicharacter> {
    let n = g.n();
    let d = g.d;
    let mats = g
        .c
        .matrices()
        .iter()
        .map(|l| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc: i128 = 0;
                            for a in 0..d {
                                for b in 0..d {
                                    acc += g.degrees[a][i] as i128 * l[a][b] as i128 * g.degrees[b][j] as i128;
                                }
                            }
                            i64::try_from(acc).map_err(|_| Error::ExponentOverflow)
                        })
                        .collect::<Result<Vec<i64>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Bicharacter::with_names(mats, n, g.c.parameter_names().to_vec())
}

/// Finite sum of homogeneous pieces, keyed by degree `α ∈ Z^d`.
#[derive(Clone, PartialEq)]
pub struct GradedElement<C: Coefficient> {
    d: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> GradedElement<C> {
    pub fn zero(d: usize) -> Self {
        GradedElement {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: usize) -> Self {
        Self::homogeneous(vec![0; d], C::one())
    }

    pub fn homogeneous(alpha: Vec<i64>, coeff: C) -> Self {
        let mut out = Self::zero(alpha.len());
        out.add_term(alpha, coeff);
        out
    }

    /// The generator `r_i` (0-based), coefficient one.
    pub fn generator(g: &GradingData, i: usize) -> Self {
        Self::homogeneous(g.degree(i), C::one())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn component(&self, alpha: &[i64]) -> Option<&C> {
        self.terms.get(alpha)
    }

    fn add_term(&mut self, alpha: Vec<i64>, c: C) {
        if c.is_zero() {
            return;
        }
        let next = match self.terms.get(&alpha) {
            Some(old) => old.add(&c),
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, next);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.d);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c.mul(k));
        }
        out
    }

    fn weighted<F>(&self, o: &Self, mut weight: F) -> Result<Self>
    where
        F: FnMut(&[i64], &[i64]) -> Result<C>,
    {
        if self.d != o.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: o.d,
            });
        }
        let mut out = Self::zero(self.d);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let w = weight(a, b)?;
                let sum = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(sum, x.mul(y).mul(&w));
            }
        }
        Ok(out)
    }

    /// Product in `R`.
    pub fn untwisted_multiply(&self, o: &Self) -> Result<Self> {
        self.weighted(o, |_, _| Ok(C::one()))
    }
}

impl<C: Coefficient> fmt::Display for GradedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(a, c)| format!("({c})@{a:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coefficient> fmt::Debug for GradedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `u′v′ = Σ c(α,β) (u_α v_β)′`.
pub fn twisted_multiply(
    g: &GradingData,
    u: &GradedElement<LaurentCoefficient>,
    v: &GradedElement<LaurentCoefficient>,
) -> Result<GradedElement<LaurentCoefficient>> {
    check_graded(g, u.d)?;
    check_graded(g, v.d)?;
    u.weighted(v, |a, b| Ok(LaurentCoefficient::monomial(&g.c.eval_c(a, b)?)))
}

/// `{u, v} = Σ φc(α,β) u_α v_β` with `φc(α,β) = Σ_k 2 ℓ_k(α,β) μ_k`.
pub fn graded_poisson_bracket(
    g: &GradingData,
    mu: &[Poly],
    u: &GradedElement<Poly>,
    v: &GradedElement<Poly>,
) -> Result<GradedElement<Poly>> {
    check_graded(g, u.d)?;
    check_graded(g, v.d)?;
    if mu.len() != g.c.m() {
        return Err(Error::DimensionMismatch {
            expected: g.c.m(),
            got: mu.len(),
        });
    }
    u.weighted(v, |a, b| phi_c(g, mu, a, b))
}

/// `φc(α,β)`.
pub fn phi_c(g: &GradingData, mu: &[Poly], a: &[i64], b: &[i64]) -> Result<Poly> {
    let mut acc = Poly::zero();
    for (k, m) in mu.iter().enumerate() {
        let l = g.c.pairing(k, a, b)?;
        acc = acc.add(&m.scale(&BigRational::from_integer((2 * l).into())));
    }
    Ok(acc)
}

fn check_graded(g: &GradingData, d: usize) -> Result<()> {
    if d != g.d {
        return Err(Error::DimensionMismatch { expected: g.d, got: d });
    }
    Ok(())
}

/// Both sides of the commuting square on `x^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramReport {
    pub s: Vec<i64>,
    /// `κ` with `x_1^{s_1} ⋯ x_n^{s_n} = κ x^s` in `Â`.
    pub kappa: LaurentCoefficient,
    /// `Φ π_R(x^s)`.
    pub via_r: GradedElement<LaurentCoefficient>,
    /// `π_A Φ̂(x^s) = κ⁻¹ Π (r′_i)^{s_i}`.
    pub via_a: GradedElement<LaurentCoefficient>,
}

/// Default bound on the total degree of `s`.
pub const DIAGRAM_DEGREE_LIMIT: i64 = 12;

/// Checks `Φ π_R = π_A Φ̂` on the monomial `x^s`.
pub fn diagram_commute_check(g: &GradingData, s: &[i64]) -> Result<DiagramReport> {
    let n = g.n();
    if s.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: s.len() });
    }
    if s.iter().any(|&e| e < 0) {
        return Err(Error::NegativeExponent);
    }
    let total: i64 = s.iter().sum();
    if total > DIAGRAM_DEGREE_LIMIT {
        return Err(Error::BoundExceeded {
            n: total as usize,
            bound: DIAGRAM_DEGREE_LIMIT as usize,
        });
    }
    let hat = pullback(g)?;

    // κ from the ordered product of generators in Â
    let mut ordered = QuantumElement::one(n);
    for (i, &e) in s.iter().enumerate() {
        for _ in 0..e {
            ordered = multiply(&hat, &ordered, &QuantumElement::generator(n, i))?;
        }
    }
    let mut support = ordered.terms();
    let kappa = match (support.next(), support.next()) {
        (Some((t, k)), None) if t.as_slice() == s => k.clone(),
        _ => {
            return Err(Error::DiagramMismatch {
                s: s.to_vec(),
                detail: format!("ordered product in the quantum affine space is {ordered}"),
            })
        }
    };
    let kappa_inv = invert_unit(&kappa).ok_or_else(|| Error::DiagramMismatch {
        s: s.to_vec(),
        detail: format!("ordered-product coefficient {kappa} is not a unit monomial"),
    })?;

    let mut twisted = GradedElement::<LaurentCoefficient>::one(g.d);
    let mut plain = GradedElement::<LaurentCoefficient>::one(g.d);
    for (i, &e) in s.iter().enumerate() {
        let r = GradedElement::generator(g, i);
        for _ in 0..e {
            twisted = twisted_multiply(g, &twisted, &r)?;
            plain = plain.untwisted_multiply(&r)?;
        }
    }
    let via_a = twisted.scale(&kappa_inv);
    debug_assert!(plain.component(&g.rho(s)).is_some());
    if via_a != plain {
        return Err(Error::DiagramMismatch {
            s: s.to_vec(),
            detail: format!("{via_a} vs {plain}"),
        });
    }
    Ok(DiagramReport {
        s: s.to_vec(),
        kappa,
        via_r: plain,
        via_a,
    })
}

fn invert_unit(c: &LaurentCoefficient) -> Option<LaurentCoefficient> {
    let mut it = c.terms();
    match (it.next(), it.next()) {
        (Some((e, r)), None) => Some(LaurentCoefficient::term(
            r.recip(),
            e.iter().map(|x| -x).collect(),
        )),
        _ => None,
    }
}

/// Image of `x_i` under `π_A`.
pub fn generator_image(g: &GradingData, i: usize) -> Result<GradedElement<LaurentCoefficient>> {
    if i >= g.n() {
        return Err(Error::IndexOutOfRange { index: i, n: g.n() });
    }
    Ok(GradedElement::homogeneous(g.degree(i), LaurentCoefficient::one()))
}

impl GradedElement<LaurentCoefficient> {
    /// Coefficient `1` at degree `α`.
    pub fn unit_at(alpha: Vec<i64>) -> Self {
        Self::homogeneous(alpha, LaurentCoefficient::rational(BigRational::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grading(degrees: Vec<Vec<i64>>, l: Vec<Vec<Vec<i64>>>) -> GradingData {
        let d = degrees.len();
        GradingData::new(degrees, Bicharacter::validate(l, d).unwrap()).unwrap()
    }

    fn rank_two() -> GradingData {
        grading(
            vec![vec![1, 0, 1], vec![0, 1, 1]],
            vec![vec![vec![0, 1], vec![-1, 0]]],
        )
    }

    #[test]
    fn pullback_examples() {
        let g = rank_two();
        // entry (i,j) is ℓ(δ_i, δ_j) = δ_i[0]δ_j[1] − δ_i[1]δ_j[0]
        let delta = [[1, 0], [0, 1], [1, 1]];
        let oracle: Vec<Vec<i64>> = delta
            .iter()
            .map(|a| delta.iter().map(|b| a[0] * b[1] - a[1] * b[0]).collect())
            .collect();
        assert_eq!(oracle, vec![vec![0, 1, 1], vec![-1, 0, -1], vec![-1, 1, 0]]);
        assert_eq!(pullback(&g).unwrap().matrices()[0], oracle);
        let id = grading(vec![vec![1, 0], vec![0, 1]], vec![vec![vec![0, 3], vec![-3, 0]]]);
        assert_eq!(pullback(&id).unwrap().matrices(), id.bicharacter().matrices());
        let line = grading(vec![vec![1, 1, 1]], vec![vec![vec![0]]]);
        assert!(pullback(&line).unwrap().matrices()[0].iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn twisted_products() {
        let g = rank_two();
        let r1 = GradedElement::generator(&g, 0);
        let r2 = GradedElement::generator(&g, 1);
        let one = GradedElement::<LaurentCoefficient>::one(2);
        assert_eq!(twisted_multiply(&g, &one, &r1).unwrap(), r1);
        let p = twisted_multiply(&g, &r1, &r2).unwrap();
        let lam = LaurentCoefficient::term(BigRational::one(), vec![1]);
        assert_eq!(p.component(&[1, 1]), Some(&lam));
        let q = twisted_multiply(&g, &r2, &r1).unwrap();
        let inv = LaurentCoefficient::term(BigRational::one(), vec![-1]);
        assert_eq!(q.component(&[1, 1]), Some(&inv));
    }

    #[test]
    fn poisson_bracket_on_generators() {
        let g = rank_two();
        let mu = vec![Poly::var(crate::poly::Var::Mu(0))];
        let r1 = GradedElement::<Poly>::generator(&g, 0);
        let r3 = GradedElement::<Poly>::generator(&g, 2);
        let br = graded_poisson_bracket(&g, &mu, &r1, &r3).unwrap();
        assert_eq!(br.component(&[2, 1]), Some(&mu[0].scale(&BigRational::from_integer(2.into()))));
        assert!(graded_poisson_bracket(&g, &mu, &r3, &r3).unwrap().is_zero());
    }

    #[test]
    fn diagram_on_small_monomials() {
        let g = rank_two();
        let rep = diagram_commute_check(&g, &[1, 0, 0]).unwrap();
        assert_eq!(rep.via_a, GradedElement::unit_at(vec![1, 0]));
        let rep = diagram_commute_check(&g, &[1, 1, 0]).unwrap();
        assert_eq!(rep.kappa, LaurentCoefficient::term(BigRational::one(), vec![1]));
        diagram_commute_check(&g, &[2, 1, 3]).unwrap();
    }
}
