//! Stratified primitive and Poisson-primitive spectra.
//!
//! For `w ⊆ {1..n}` the stratum of ideals containing exactly the `x_i`,
//! `i ∈ w`, is parametrized by characters of the radical lattice `S_w`. A
//! point of the stratum is an [`IdealLabel`] `(w, χ)` naming the ideal
//!
//! ```text
//! ⟨x_i : i ∈ w⟩ + ⟨x^{a⁺} − χ(a) x^{a⁻} : a in the basis of S_w⟩
//! ```
//!
//! The same generator lists describe the quantum primitive ideals and the
//! Poisson primitive ideals of the semiclassical limit; [`phi_transport`]
//! moves a label between the two sides.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::format_monomial;
use crate::bichar::{Bicharacter, Subset};
use crate::error::{Error, Result};
use crate::lattice::{solve_membership, Lattice};
use crate::poly::format_rational;

/// Default bound on `n` for whole-spectrum enumeration.
pub const DEFAULT_STRATUM_BOUND: usize = 16;

/// Three-valued answer for comparisons involving free symbols.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Indeterminate,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Indeterminate,
        }
    }

    /// Whether some assignment of the symbols makes the statement true.
    pub fn is_possible(self) -> bool {
        self != Truth::False
    }
}

/// Nonzero character value: a rational times a Laurent monomial in free symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharValue {
    coeff: BigRational,
    symbols: BTreeMap<String, i64>,
}

impl CharValue {
    pub fn rational(r: BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        Ok(CharValue {
            coeff: r,
            symbols: BTreeMap::new(),
        })
    }

    pub fn int(n: i64) -> Result<Self> {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn symbol(name: &str) -> Self {
        CharValue {
            coeff: BigRational::one(),
            symbols: BTreeMap::from([(name.to_string(), 1)]),
        }
    }

    pub fn one() -> Self {
        CharValue {
            coeff: BigRational::one(),
            symbols: BTreeMap::new(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.coeff)
    }

    pub fn mul(&self, o: &CharValue) -> CharValue {
        let mut symbols = self.symbols.clone();
        for (s, e) in &o.symbols {
            let v = symbols.entry(s.clone()).or_insert(0);
            *v += e;
            if *v == 0 {
                symbols.remove(s);
            }
        }
        CharValue {
            coeff: &self.coeff * &o.coeff,
            symbols,
        }
    }

    pub fn pow(&self, e: i64) -> CharValue {
        let base = if e < 0 { self.coeff.recip() } else { self.coeff.clone() };
        let k = i32::try_from(e.unsigned_abs()).expect("character exponent too large");
        CharValue {
            coeff: num_traits::pow::Pow::pow(&base, k as u32),
            symbols: if e == 0 {
                BTreeMap::new()
            } else {
                self.symbols.iter().map(|(s, x)| (s.clone(), x * e)).collect()
            },
        }
    }

    /// Equal, distinct, or undetermined by the data (free symbols are nonzero
    /// and otherwise unconstrained).
    pub fn compare(&self, o: &CharValue) -> Truth {
        if self.symbols == o.symbols {
            if self.coeff == o.coeff {
                Truth::True
            } else {
                Truth::False
            }
        } else {
            Truth::Indeterminate
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coeff.is_one() || self.symbols.is_empty() {
            let c = format_rational(&self.coeff);
            parts.push(if self.coeff.is_negative() && !self.symbols.is_empty() {
                format!("({c})")
            } else {
                c
            });
        }
        for (s, e) in &self.symbols {
            parts.push(if *e == 1 { s.clone() } else { format!("{s}^{e}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for CharValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which algebra a label's generators are read in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The Poisson algebra of the semiclassical limit.
    Poisson,
    /// The quantum affine space.
    Quantum,
}

/// One generator of a labeled ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Generator {
    Variable(usize),
    /// `x^{plus} − chi · x^{minus}`.
    Binomial {
        plus: Vec<i64>,
        minus: Vec<i64>,
        chi: CharValue,
    },
}

impl Generator {
    pub fn binomial(a: &[i64], chi: CharValue) -> Generator {
        Generator::Binomial {
            plus: a.iter().map(|&x| x.max(0)).collect(),
            minus: a.iter().map(|&x| (-x).max(0)).collect(),
            chi,
        }
    }

    /// Value at a rational point (rational characters only).
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        match self {
            Generator::Variable(i) => Some(point[*i].clone()),
            Generator::Binomial { plus, minus, chi } => {
                let chi = chi.as_rational()?;
                Some(monomial_value(plus, point) - chi * monomial_value(minus, point))
            }
        }
    }
}

fn monomial_value(e: &[i64], point: &[BigRational]) -> BigRational {
    e.iter()
        .zip(point)
        .filter(|(k, _)| **k != 0)
        .fold(BigRational::one(), |acc, (k, p)| {
            acc * num_traits::pow::Pow::pow(p, *k as u32)
        })
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Variable(i) => write!(f, "x{}", i + 1),
            Generator::Binomial { plus, minus, chi } => {
                let m = format_monomial(minus);
                let rhs = if m == "1" {
                    chi.to_string()
                } else if *chi == CharValue::one() {
                    m
                } else {
                    format!("{chi}*{m}")
                };
                write!(f, "{} - {}", format_monomial(plus), rhs)
            }
        }
    }
}

/// `(w, χ)`: a point of the stratum `w`, with `χ` given on the HNF basis of `S_w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealLabel {
    n: usize,
    w: Subset,
    basis: Vec<Vec<i64>>,
    chi: Vec<CharValue>,
    side: Side,
}

impl IdealLabel {
    pub fn new(b: &Bicharacter, w: Subset, chi: Vec<CharValue>, side: Side) -> Result<Self> {
        if !w.is_subset_of(Subset::full(b.n())) {
            return Err(Error::InvalidLabel(format!("{w} is not a subset of 1..{}", b.n())));
        }
        let basis = b.radical(w).basis_i64();
        if basis.len() != chi.len() {
            return Err(Error::InvalidLabel(format!(
                "S_w has rank {} but {} character values were given",
                basis.len(),
                chi.len()
            )));
        }
        Ok(IdealLabel {
            n: b.n(),
            w,
            basis,
            chi,
            side,
        })
    }

    /// A member of the stratum with one fresh symbol `{prefix}{j}` per basis vector.
    pub fn generic(b: &Bicharacter, w: Subset, prefix: &str, side: Side) -> Self {
        let rank = b.radical(w).rank();
        let chi = (1..=rank).map(|j| CharValue::symbol(&format!("{prefix}{j}"))).collect();
        Self::new(b, w, chi, side).expect("rank matches by construction")
    }

    pub fn w(&self) -> Subset {
        self.w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn chi(&self) -> &[CharValue] {
        &self.chi
    }

    /// Generators ordered by their leading variable.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self
            .w
            .iter()
            .map(Generator::Variable)
            .chain(
                self.basis
                    .iter()
                    .zip(&self.chi)
                    .map(|(a, c)| Generator::binomial(a, c.clone())),
            )
            .collect();
        gens.sort_by_key(|g| match g {
            Generator::Variable(i) => *i,
            Generator::Binomial { plus, .. } => plus.iter().position(|&e| e > 0).unwrap_or(usize::MAX),
        });
        gens
    }
}

impl fmt::Display for IdealLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        if gens.is_empty() {
            write!(f, "<0>")
        } else {
            write!(f, "<{}>", gens.join(", "))
        }
    }
}

/// The data describing `Prim_w`.
#[derive(Clone, Debug)]
pub struct StratumReport {
    pub w: Subset,
    pub lattice: Lattice,
    pub rank: usize,
    /// Exponents `a` of the monomials `x^a` spanning the center of the localized stratum.
    pub center_monomials: Vec<Vec<i64>>,
    /// Dimension of the family `Prim_w` (equal to `rank`).
    pub family_dimension: usize,
    /// `Prim_w` is the single ideal `⟨x_i : i ∈ w⟩`.
    pub is_singleton: bool,
    /// Generic member, with parameters named after the stratum.
    pub family: String,
}

pub fn stratum_report(b: &Bicharacter, w: Subset) -> StratumReport {
    let lattice = b.radical(w);
    let rank = lattice.rank();
    let generic = IdealLabel::generic(b, w, "a", Side::Quantum);
    let family = if rank == 0 {
        generic.to_string()
    } else {
        let params: Vec<String> = (1..=rank).map(|j| format!("a{j}")).collect();
        format!("{generic}, {} in k^x", params.join(", "))
    };
    StratumReport {
        w,
        center_monomials: lattice.basis_i64(),
        lattice,
        rank,
        family_dimension: rank,
        is_singleton: rank == 0,
        family,
    }
}

/// All `2^n` strata, ordered by size of `w` and then lexicographically.
pub fn full_spectrum(b: &Bicharacter, bound: usize) -> Result<Vec<StratumReport>> {
    if b.n() > bound {
        return Err(Error::BoundExceeded { n: b.n(), bound });
    }
    Ok(Subset::all(b.n()).into_iter().map(|w| stratum_report(b, w)).collect())
}

fn check_point(b: &Bicharacter, point: &[BigRational]) -> Result<()> {
    if point.len() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            got: point.len(),
        });
    }
    Ok(())
}

fn point_character(point: &[BigRational], a: &[i64]) -> CharValue {
    let mut v = BigRational::one();
    for (p, &e) in point.iter().zip(a) {
        if e == 0 {
            continue;
        }
        let base = if e < 0 { p.recip() } else { p.clone() };
        v *= num_traits::pow::Pow::pow(&base, e.unsigned_abs() as u32);
    }
    CharValue::rational(v).expect("nonzero coordinates give a nonzero character")
}

/// The Poisson core `𝒫(𝔪_p)` of the maximal ideal at a rational point.
pub fn poisson_core(b: &Bicharacter, point: &[BigRational]) -> Result<IdealLabel> {
    check_point(b, point)?;
    let w = Subset::from_indices(point.iter().enumerate().filter(|(_, p)| p.is_zero()).map(|(i, _)| i));
    let basis = b.radical(w).basis_i64();
    let chi = basis.iter().map(|a| point_character(point, a)).collect();
    IdealLabel::new(b, w, chi, Side::Poisson)
}

/// Coarse shape of a symplectic core.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreKind {
    Point,
    /// The whole torus orbit `{x_i = 0 ⇔ i ∈ w}`.
    OpenStratum,
    /// A proper binomial subvariety of the stratum.
    Subvariety,
}

/// The symplectic core through a point: `x_i = 0` exactly for `i ∈ w`, and
/// `x^a = χ(a)` for each basis vector `a` of `S_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDescriptor {
    pub n: usize,
    pub w: Subset,
    pub equations: Vec<(Vec<i64>, CharValue)>,
}

impl CoreDescriptor {
    pub fn dimension(&self) -> usize {
        self.n - self.w.len() - self.equations.len()
    }

    pub fn kind(&self) -> CoreKind {
        if self.dimension() == 0 {
            CoreKind::Point
        } else if self.equations.is_empty() {
            CoreKind::OpenStratum
        } else {
            CoreKind::Subvariety
        }
    }

    pub fn contains_point(&self, p: &[BigRational]) -> bool {
        if p.len() != self.n {
            return false;
        }
        let pattern_ok = (0..self.n).all(|i| self.w.contains(i) == p[i].is_zero());
        pattern_ok
            && self.equations.iter().all(|(a, chi)| {
                chi.as_rational()
                    .is_some_and(|c| point_character(p, a).as_rational() == Some(c))
            })
    }

    pub fn description(&self) -> String {
        let free: Vec<usize> = self.w.complement(self.n).iter().collect();
        let coords: String = free.iter().map(|i| format!("x{}", i + 1)).collect();
        match self.kind() {
            CoreKind::Point => "single point".to_string(),
            CoreKind::OpenStratum if free.len() == self.n => format!(
                "k^{} with the coordinate hyperplanes removed",
                self.n
            ),
            CoreKind::OpenStratum => {
                format!("{coords}-coordinate subspace with its coordinate hyperplanes removed")
            }
            CoreKind::Subvariety => {
                let eqs: Vec<String> = self
                    .equations
                    .iter()
                    .map(|(a, c)| format!("{} = {c}", format_laurent_monomial(a)))
                    .collect();
                format!(
                    "{}-dimensional subvariety of the {coords}-torus cut out by {}",
                    self.dimension(),
                    eqs.join(", ")
                )
            }
        }
    }
}

fn format_laurent_monomial(a: &[i64]) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    parts.join("*")
}

pub fn symplectic_core(b: &Bicharacter, point: &[BigRational]) -> Result<CoreDescriptor> {
    let label = poisson_core(b, point)?;
    Ok(CoreDescriptor {
        n: b.n(),
        w: label.w,
        equations: label.basis.iter().cloned().zip(label.chi.iter().cloned()).collect(),
    })
}

/// Direction of the correspondence between Poisson and quantum ideals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    PoissonToQuantum,
    QuantumToPoisson,
}

impl Direction {
    pub fn from_side(side: Side) -> Direction {
        match side {
            Side::Poisson => Direction::PoissonToQuantum,
            Side::Quantum => Direction::QuantumToPoisson,
        }
    }
}

/// `P ↦ Φ^{-1}(P)` and its inverse. `Φ` fixes every monomial, so the
/// generator list is unchanged and only the side flag moves.
pub fn phi_transport(label: &IdealLabel, direction: Direction) -> IdealLabel {
    let mut out = label.clone();
    out.side = match direction {
        Direction::PoissonToQuantum => Side::Quantum,
        Direction::QuantumToPoisson => Side::Poisson,
    };
    out
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("coordinate exceeds i64")).collect()
}

fn check_label(b: &Bicharacter, l: &IdealLabel) -> Result<()> {
    if l.n != b.n() {
        return Err(Error::InvalidLabel(format!("label has n = {}, bicharacter n = {}", l.n, b.n())));
    }
    if l.basis != b.radical(l.w).basis_i64() {
        return Err(Error::InvalidLabel(format!("basis for {} does not match S_w", l.w)));
    }
    Ok(())
}

/// Decides `P ⊆ Q` for labeled ideals.
///
/// Rule: `w_P ⊆ w_Q`, and for each basis vector `a` of `S_{w_P}`:
/// * `a` avoids `w_Q`: need `a ∈ S_{w_Q}` and `χ_Q(a) = χ_P(a)`;
/// * exactly one of `a⁺`, `a⁻` meets `w_Q`: the binomial is a unit modulo `Q`, so no;
/// * both meet `w_Q`: the binomial already lies in `I_{w_Q}`.
pub fn contains(b: &Bicharacter, p: &IdealLabel, q: &IdealLabel) -> Result<Truth> {
    check_label(b, p)?;
    check_label(b, q)?;
    if p.side != q.side {
        return Err(Error::SideMismatch);
    }
    if !p.w.is_subset_of(q.w) {
        return Ok(Truth::False);
    }
    let sq = b.radical(q.w);
    let mut verdict = Truth::True;
    for (a, chi_p) in p.basis.iter().zip(&p.chi) {
        let plus = Subset::support(&a.iter().map(|&x| x.max(0)).collect::<Vec<_>>());
        let minus = Subset::support(&a.iter().map(|&x| (-x).max(0)).collect::<Vec<_>>());
        match (plus.intersects(q.w), minus.intersects(q.w)) {
            (false, false) => {
                let big: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
                let Some(coords) = solve_membership(&sq, &big) else {
                    return Ok(Truth::False);
                };
                let chi_q = to_i64(&coords)
                    .iter()
                    .zip(&q.chi)
                    .fold(CharValue::one(), |acc, (&c, v)| acc.mul(&v.pow(c)));
                verdict = verdict.and(chi_q.compare(chi_p));
            }
            (true, false) | (false, true) => return Ok(Truth::False),
            (true, true) => {}
        }
        if verdict == Truth::False {
            return Ok(Truth::False);
        }
    }
    Ok(verdict)
}

/// What the nodes of a Hasse diagram stand for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Granularity {
    /// Strata `Prim_w`, with `w → w'` when some member of `Prim_w` lies in
    /// some member of `Prim_{w'}`.
    Primitive,
    /// The torus-invariant primes `⟨x_i : i ∈ w⟩`, ordered by inclusion.
    TorusInvariant,
}

/// The (not necessarily transitive) order relation between strata.
pub fn stratum_relation(b: &Bicharacter, granularity: Granularity, bound: usize) -> Result<Vec<(Subset, Subset)>> {
    if b.n() > bound {
        return Err(Error::BoundExceeded { n: b.n(), bound });
    }
    let strata = Subset::all(b.n());
    let mut rel = Vec::new();
    for &w in &strata {
        for &w2 in &strata {
            if w == w2 {
                continue;
            }
            let related = match granularity {
                Granularity::TorusInvariant => w.is_subset_of(w2),
                Granularity::Primitive => {
                    let p = IdealLabel::generic(b, w, "p", Side::Poisson);
                    let q = IdealLabel::generic(b, w2, "q", Side::Poisson);
                    contains(b, &p, &q)?.is_possible()
                }
            };
            if related {
                rel.push((w, w2));
            }
        }
    }
    Ok(rel)
}

/// Cover relations of [`stratum_relation`].
pub fn hasse_edges(b: &Bicharacter, granularity: Granularity, bound: usize) -> Result<Vec<(Subset, Subset)>> {
    let rel = stratum_relation(b, granularity, bound)?;
    let related = |a: Subset, c: Subset| rel.contains(&(a, c));
    let strata = Subset::all(b.n());
    Ok(rel
        .iter()
        .copied()
        .filter(|&(a, c)| {
            !strata
                .iter()
                .any(|&m| m != a && m != c && related(a, m) && related(m, c))
        })
        .collect())
}

/// Graphviz rendering of [`hasse_edges`]; nodes are named `w_{bitstring}`.
pub fn hasse_diagram(b: &Bicharacter, granularity: Granularity) -> Result<String> {
    let edges = hasse_edges(b, granularity, DEFAULT_STRATUM_BOUND)?;
    let n = b.n();
    let mut out = String::new();
    let title = match granularity {
        Granularity::Primitive => "prim",
        Granularity::TorusInvariant => "torus_invariant",
    };
    out.push_str(&format!("digraph {title} {{\n"));
    if granularity == Granularity::Primitive {
        out.push_str("  // order: binomial-label containment rule on generic members of each stratum\n");
    }
    out.push_str("  rankdir=BT;\n  node [shape=box];\n");
    for w in Subset::all(n) {
        let label = match granularity {
            Granularity::Primitive => {
                let r = stratum_report(b, w);
                format!("w = {w}\\ndim = {}\\n{}", r.rank, r.family)
            }
            Granularity::TorusInvariant => {
                format!("w = {w}\\n{}", torus_invariant_ideal(w))
            }
        };
        out.push_str(&format!("  w_{} [label=\"{}\"];\n", w.bitstring(n), label));
    }
    for (a, c) in edges {
        out.push_str(&format!("  w_{} -> w_{};\n", a.bitstring(n), c.bitstring(n)));
    }
    out.push_str("}\n");
    Ok(out)
}

fn torus_invariant_ideal(w: Subset) -> String {
    if w.is_empty() {
        "<0>".to_string()
    } else {
        let gens: Vec<String> = w.iter().map(|i| format!("x{}", i + 1)).collect();
        format!("<{}>", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example3() -> Bicharacter {
        Bicharacter::validate(
            vec![
                vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
                vec![vec![0, 0, 1], vec![0, 0, 0], vec![-1, 0, 0]],
            ],
            3,
        )
        .unwrap()
    }

    fn pt(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn w(ix: &[usize]) -> Subset {
        Subset::from_one_based(ix)
    }

    #[test]
    fn stratum_examples() {
        let b = example3();
        let r = stratum_report(&b, w(&[2, 3]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.center_monomials, vec![vec![1, 0, 0]]);
        assert_eq!(r.family, "<x1 - a1, x2, x3>, a1 in k^x");
        assert!(stratum_report(&b, Subset::EMPTY).is_singleton);
        let r1 = stratum_report(&b, w(&[1]));
        assert_eq!(r1.rank, 2);
        assert_eq!(r1.family, "<x1, x2 - a1, x3 - a2>, a1, a2 in k^x");
    }

    #[test]
    fn full_spectrum_small_cases() {
        let line = Bicharacter::validate(vec![], 1).unwrap();
        let ranks: Vec<usize> = full_spectrum(&line, 16).unwrap().iter().map(|r| r.rank).collect();
        assert_eq!(ranks, vec![1, 0]);
        let plane = Bicharacter::from_uniparameter(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let ranks: Vec<usize> = full_spectrum(&plane, 16).unwrap().iter().map(|r| r.rank).collect();
        assert_eq!(ranks, vec![0, 1, 1, 0]);
        assert!(matches!(full_spectrum(&example3(), 2), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn cores_and_labels() {
        let b = example3();
        let l = poisson_core(&b, &pt(&[0, 2, 3])).unwrap();
        assert_eq!(l.to_string(), "<x1, x2 - 2, x3 - 3>");
        assert_eq!(poisson_core(&b, &pt(&[1, 2, 3])).unwrap().to_string(), "<0>");
        assert_eq!(poisson_core(&b, &pt(&[0, 0, 0])).unwrap().to_string(), "<x1, x2, x3>");

        let c = symplectic_core(&b, &pt(&[5, 0, 0])).unwrap();
        assert_eq!(c.kind(), CoreKind::Point);
        let c = symplectic_core(&b, &pt(&[2, 3, 0])).unwrap();
        assert_eq!(c.kind(), CoreKind::OpenStratum);
        assert_eq!(c.description(), "x1x2-coordinate subspace with its coordinate hyperplanes removed");
        let c = symplectic_core(&b, &pt(&[1, 2, 3])).unwrap();
        assert_eq!(c.description(), "k^3 with the coordinate hyperplanes removed");
        assert!(c.contains_point(&pt(&[7, -1, 2])));
        assert!(!c.contains_point(&pt(&[7, 0, 2])));
    }

    #[test]
    fn generic_label_text() {
        let b = example3();
        let l = IdealLabel::generic(&b, w(&[1, 2]), "c", Side::Quantum);
        assert_eq!(l.to_string(), "<x1, x2, x3 - c1>");
    }

    #[test]
    fn containment_examples() {
        let b = example3();
        let x2 = IdealLabel::new(&b, w(&[2]), vec![], Side::Poisson).unwrap();
        let x3 = IdealLabel::new(&b, w(&[3]), vec![], Side::Poisson).unwrap();
        let top = IdealLabel::generic(&b, w(&[1, 2]), "c", Side::Poisson);
        assert_eq!(contains(&b, &x2, &top).unwrap(), Truth::True);
        assert_eq!(contains(&b, &x3, &top).unwrap(), Truth::False);
        assert_eq!(contains(&b, &top, &top).unwrap(), Truth::True);

        let other = IdealLabel::generic(&b, w(&[1, 2]), "d", Side::Poisson);
        assert_eq!(contains(&b, &top, &other).unwrap(), Truth::Indeterminate);
        let fixed = IdealLabel::new(&b, w(&[1, 2]), vec![CharValue::int(3).unwrap()], Side::Poisson).unwrap();
        let fixed2 = IdealLabel::new(&b, w(&[1, 2]), vec![CharValue::int(4).unwrap()], Side::Poisson).unwrap();
        assert_eq!(contains(&b, &fixed, &fixed2).unwrap(), Truth::False);

        let quantum = phi_transport(&x2, Direction::PoissonToQuantum);
        assert_eq!(contains(&b, &quantum, &top), Err(Error::SideMismatch));
    }

    #[test]
    fn label_validation() {
        let b = example3();
        assert!(matches!(
            IdealLabel::new(&b, w(&[1]), vec![CharValue::int(1).unwrap()], Side::Poisson),
            Err(Error::InvalidLabel(_))
        ));
        assert!(CharValue::int(0).is_err());
    }

    #[test]
    fn char_value_algebra() {
        let b = CharValue::symbol("b");
        let v = b.pow(2).mul(&CharValue::int(3).unwrap()).mul(&CharValue::symbol("c").pow(-1));
        assert_eq!(v.to_string(), "3*b^2*c^-1");
        assert_eq!(b.mul(&b.pow(-1)), CharValue::one());
        assert_eq!(CharValue::int(2).unwrap().pow(-2).to_string(), "1/4");
    }

    #[test]
    fn torus_invariant_granularity_is_boolean() {
        let b = example3();
        let edges = hasse_edges(&b, Granularity::TorusInvariant, 16).unwrap();
        assert_eq!(edges.len(), 12);
        assert!(edges.iter().all(|(a, c)| a.is_subset_of(*c) && c.len() == a.len() + 1));
    }
}
