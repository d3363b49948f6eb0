//! Alternating bicharacters on `Z^n` in exponent form.
//!
//! A bicharacter `c` with values in the free abelian group on parameters
//! `λ_1..λ_m` is stored as `m` antisymmetric integer matrices `L_k`, so that
//! `c(s,t) = Π_k λ_k^{sᵀ L_k t}`. The commutation scalars are `σ = c²`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, IntMatrix, Lattice};

/// Largest supported number of generators (subsets are `u64` bitmasks).
pub const MAX_GENERATORS: usize = 64;

/// A subset of the generator indices `{0..n-1}` (displayed 1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    /// From 0-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    /// From 1-based indices, as written in the mathematical notation.
    pub fn from_one_based(indices: &[usize]) -> Self {
        Self::from_indices(indices.iter().map(|i| i - 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn complement(self, n: usize) -> Subset {
        Subset(Subset::full(n).0 & !self.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1u64 << i) != 0)
    }

    /// `n` characters, position `i` is `1` iff `i ∈ w`.
    pub fn bitstring(self, n: usize) -> String {
        (0..n).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }

    /// All subsets of `{0..n-1}`, ordered by size and then lexicographically.
    pub fn all(n: usize) -> Vec<Subset> {
        assert!(n < 64);
        let mut v: Vec<Subset> = (0..1u64 << n).map(Subset).collect();
        v.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
        v
    }

    /// Support of an integer vector.
    pub fn support(v: &[i64]) -> Subset {
        Subset::from_indices(v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, _)| i))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|i| i + 1))
    }
}

/// The value `Π λ_k^{e_k}` of a bicharacter, as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ExponentValue(pub Vec<i64>);

impl ExponentValue {
    pub fn identity(m: usize) -> Self {
        ExponentValue(vec![0; m])
    }

    /// Torsionfreeness of the parameter group makes this the identity test.
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn squared(&self) -> Self {
        ExponentValue(self.0.iter().map(|e| 2 * e).collect())
    }

    pub fn inverse(&self) -> Self {
        ExponentValue(self.0.iter().map(|e| -e).collect())
    }

    pub fn product(&self, other: &ExponentValue) -> Self {
        ExponentValue(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Alternating bicharacter `c` on `Z^n`, one exponent matrix per parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bicharacter {
    n: usize,
    names: Vec<String>,
    mats: Vec<Vec<Vec<i64>>>,
}

pub fn default_parameter_names(m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("lambda_{k}")).collect()
}

fn check_alternating(k: usize, n: usize, mat: &[Vec<i64>]) -> Result<()> {
    if mat.len() != n {
        return Err(Error::NotSquare {
            k: k + 1,
            rows: mat.len(),
            cols: mat.first().map_or(0, Vec::len),
            n,
        });
    }
    for row in mat {
        if row.len() != n {
            return Err(Error::NotSquare {
                k: k + 1,
                rows: mat.len(),
                cols: row.len(),
                n,
            });
        }
    }
    for i in 0..n {
        if mat[i][i] != 0 {
            return Err(Error::NonzeroDiagonal {
                k: k + 1,
                i: i + 1,
                value: mat[i][i],
            });
        }
        for j in i + 1..n {
            if mat[i][j].checked_neg() != Some(mat[j][i]) {
                return Err(Error::NotAntisymmetric {
                    k: k + 1,
                    i: i + 1,
                    j: j + 1,
                    a: mat[i][j],
                    b: mat[j][i],
                });
            }
        }
    }
    Ok(())
}

impl Bicharacter {
    /// Checks that every `L_k` is an antisymmetric `n×n` matrix with zero diagonal.
    pub fn validate(mats: Vec<Vec<Vec<i64>>>, n: usize) -> Result<Self> {
        let names = default_parameter_names(mats.len());
        Self::with_names(mats, n, names)
    }

    pub fn with_names(mats: Vec<Vec<Vec<i64>>>, n: usize, names: Vec<String>) -> Result<Self> {
        if n > MAX_GENERATORS {
            return Err(Error::TooManyGenerators {
                n,
                max: MAX_GENERATORS,
            });
        }
        if names.len() != mats.len() {
            return Err(Error::DimensionMismatch {
                expected: mats.len(),
                got: names.len(),
            });
        }
        for (k, mat) in mats.iter().enumerate() {
            check_alternating(k, n, mat)?;
        }
        Ok(Bicharacter { n, names, mats })
    }

    /// `q_ij = q^{2 r_ij}`, `c(ε_i, ε_j) = q^{r_ij}`: one parameter playing the role of `q`.
    pub fn from_uniparameter(r: Vec<Vec<i64>>) -> Result<Self> {
        let n = r.len();
        check_alternating(0, n, &r)?;
        if r.iter().flatten().all(|&x| x == 0) {
            return Err(Error::ZeroUniparameter);
        }
        Self::with_names(vec![r], n, vec!["q".to_string()])
    }

    /// Uniparameter data with the gcd `g` of the entries of `r` pulled out:
    /// the single basis parameter is `q^g` and `L_1 = r / g`.
    pub fn from_uniparameter_reduced(r: Vec<Vec<i64>>) -> Result<(Self, i64)> {
        let b = Self::from_uniparameter(r)?;
        let g = b.mats[0].iter().flatten().fold(0i64, |acc, &x| acc.gcd(&x));
        let reduced = b.mats[0]
            .iter()
            .map(|row| row.iter().map(|x| x / g).collect())
            .collect();
        let name = if g == 1 { "q".to_string() } else { format!("q^{g}") };
        Ok((Self::with_names(vec![reduced], b.n, vec![name])?, g))
    }

    /// Builds `c` from exponent matrices of `σ = c²`.
    ///
    /// Parameters whose matrix has only even entries are halved in place. A
    /// parameter with an odd entry is replaced by a formal square root
    /// `rho_k` (`rho_k² = λ_k`), keeping the exponents integral.
    pub fn from_sigma_exponents(mats: Vec<Vec<Vec<i64>>>, n: usize, names: Vec<String>) -> Result<Self> {
        let mut out_mats = Vec::with_capacity(mats.len());
        let mut out_names = Vec::with_capacity(names.len());
        if names.len() != mats.len() {
            return Err(Error::DimensionMismatch {
                expected: mats.len(),
                got: names.len(),
            });
        }
        for (k, (mat, name)) in mats.into_iter().zip(names).enumerate() {
            check_alternating(k, n, &mat)?;
            if mat.iter().flatten().all(|x| x % 2 == 0) {
                out_mats.push(mat.iter().map(|r| r.iter().map(|x| x / 2).collect()).collect());
                out_names.push(name);
            } else {
                out_mats.push(mat);
                out_names.push(format!("rho_{}", k + 1));
            }
        }
        Self::with_names(out_mats, n, out_names)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn parameter_names(&self) -> &[String] {
        &self.names
    }

    pub fn matrices(&self) -> &[Vec<Vec<i64>>] {
        &self.mats
    }

    /// `L_k[i][j]`, 0-based.
    pub fn entry(&self, k: usize, i: usize, j: usize) -> i64 {
        self.mats[k][i][j]
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `ℓ_k(s,t) = sᵀ L_k t` for one parameter.
    pub fn pairing(&self, k: usize, s: &[i64], t: &[i64]) -> Result<i64> {
        self.check_len(s)?;
        self.check_len(t)?;
        let mut acc: i128 = 0;
        for (i, &si) in s.iter().enumerate() {
            if si == 0 {
                continue;
            }
            for (j, &tj) in t.iter().enumerate() {
                acc += si as i128 * self.mats[k][i][j] as i128 * tj as i128;
            }
        }
        i64::try_from(acc).map_err(|_| Error::ExponentOverflow)
    }

    pub fn eval_c(&self, s: &[i64], t: &[i64]) -> Result<ExponentValue> {
        (0..self.m())
            .map(|k| self.pairing(k, s, t))
            .collect::<Result<Vec<_>>>()
            .map(ExponentValue)
    }

    pub fn eval_sigma(&self, s: &[i64], t: &[i64]) -> Result<ExponentValue> {
        Ok(self.eval_c(s, t)?.squared())
    }

    /// The radical `S_w` of `c` restricted to `Γ_w = ⊕_{j∉w} Z ε_j`,
    /// embedded in `Z^n` with zeros on `w`.
    pub fn radical(&self, w: Subset) -> Lattice {
        let free: Vec<usize> = w.complement(self.n).iter().collect();
        if free.is_empty() {
            return Lattice::trivial(self.n);
        }
        // one equation Σ_i s_i L_k[i][j] = 0 per (k, j ∉ w)
        let mut rows = Vec::with_capacity(self.m() * free.len());
        for mat in &self.mats {
            for &j in &free {
                rows.push(free.iter().map(|&i| mat[i][j]).collect::<Vec<i64>>());
            }
        }
        let kernel = integer_kernel(&IntMatrix::from_i64_rows(free.len(), &rows));
        let embedded: Vec<Vec<BigInt>> = kernel
            .basis_vectors()
            .into_iter()
            .map(|v| {
                let mut full = vec![BigInt::from(0); self.n];
                for (x, &i) in v.into_iter().zip(&free) {
                    full[i] = x;
                }
                full
            })
            .collect();
        if embedded.is_empty() {
            return Lattice::trivial(self.n);
        }
        Lattice::from_generators(&IntMatrix::from_rows(self.n, embedded))
    }

    /// Relabels generators: new index `i` is old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mats = self
            .mats
            .iter()
            .map(|mat| {
                perm.iter()
                    .map(|&pi| perm.iter().map(|&pj| mat[pi][pj]).collect())
                    .collect()
            })
            .collect();
        Self::with_names(mats, self.n, self.names.clone())
    }
}

/// Unit vector `ε_i` (0-based) in `Z^n`.
pub fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example3() -> Bicharacter {
        Bicharacter::validate(
            vec![
                vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
                vec![vec![0, 0, 1], vec![0, 0, 0], vec![-1, 0, 0]],
            ],
            3,
        )
        .unwrap()
    }

    #[test]
    fn validate_accepts_and_rejects() {
        assert!(Bicharacter::validate(vec![vec![vec![0, 1], vec![-1, 0]]], 2).is_ok());
        let err = Bicharacter::validate(vec![vec![vec![1, 1], vec![-1, 0]]], 2).unwrap_err();
        assert!(err.to_string().contains("diagonal must vanish"), "{err}");
        assert!(matches!(err, Error::NonzeroDiagonal { k: 1, i: 1, .. }));
        let err = Bicharacter::validate(vec![vec![vec![0, 1], vec![1, 0]]], 2).unwrap_err();
        assert!(matches!(err, Error::NotAntisymmetric { k: 1, i: 1, j: 2, .. }));
        let err = Bicharacter::validate(vec![vec![vec![0, 1, 0], vec![-1, 0, 0]]], 3).unwrap_err();
        assert!(matches!(err, Error::NotSquare { .. }));
        example3();
    }

    #[test]
    fn eval_on_example() {
        let b = example3();
        assert_eq!(b.eval_c(&unit(3, 0), &unit(3, 1)).unwrap().0, vec![1, 0]);
        assert_eq!(b.eval_c(&[1, 1, 0], &unit(3, 2)).unwrap().0, vec![0, 1]);
        assert!(b.eval_c(&[2, 1, 3], &[2, 1, 3]).unwrap().is_identity());
        assert_eq!(b.eval_sigma(&unit(3, 0), &unit(3, 1)).unwrap().0, vec![2, 0]);
        assert!(matches!(b.eval_c(&[1, 0], &[0, 1, 0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn radicals_on_example() {
        let b = example3();
        let s1 = b.radical(Subset::from_one_based(&[1]));
        assert_eq!(s1.basis_i64(), vec![vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(b.radical(Subset::full(3)).rank(), 0);
        assert_eq!(b.radical(Subset::from_one_based(&[3])).rank(), 0);
        assert_eq!(b.radical(Subset::EMPTY).rank(), 0);
        assert_eq!(
            b.radical(Subset::from_one_based(&[2, 3])).basis_i64(),
            vec![vec![1, 0, 0]]
        );
    }

    #[test]
    fn uniparameter() {
        let b = Bicharacter::from_uniparameter(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(b.m(), 1);
        assert_eq!(b.matrices()[0], vec![vec![0, 1], vec![-1, 0]]);
        let err = Bicharacter::from_uniparameter(vec![vec![0, 0], vec![0, 0]]).unwrap_err();
        assert_eq!(err.to_string(), "nonzero matrix required");
        let r = vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]];
        assert_eq!(Bicharacter::from_uniparameter(r.clone()).unwrap().matrices()[0], r);

        let (red, g) =
            Bicharacter::from_uniparameter_reduced(vec![vec![0, 4, -2], vec![-4, 0, 6], vec![2, -6, 0]])
                .unwrap();
        assert_eq!(g, 2);
        assert_eq!(red.matrices()[0], vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]]);
    }

    #[test]
    fn sigma_rebasing() {
        let even = vec![vec![0, 2], vec![-2, 0]];
        let odd = vec![vec![0, 1], vec![-1, 0]];
        let b = Bicharacter::from_sigma_exponents(
            vec![even, odd.clone()],
            2,
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert_eq!(b.matrices()[0], vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(b.matrices()[1], odd);
        assert_eq!(b.parameter_names(), &["a".to_string(), "rho_2".to_string()]);
    }

    #[test]
    fn subset_order_and_display() {
        let all = Subset::all(3);
        let shown: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{}", "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"]);
        assert_eq!(Subset::from_one_based(&[1, 3]).bitstring(3), "101");
        assert_eq!(Subset::from_one_based(&[2]).complement(3), Subset::from_one_based(&[1, 3]));
    }
}
