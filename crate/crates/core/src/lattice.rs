//! Exact integer matrices, Hermite and Smith normal forms, and sublattices of `Z^n`.
//!
//! Every radical and center computation in the crate bottoms out here. All
//! arithmetic is on [`BigInt`]; unimodular reductions are naive pivoting
//! (the matrices involved are at most a few dozen rows).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of `i64`. All rows must share a length;
    /// `cols` is needed to describe a matrix with no rows.
    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            data.extend(row);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(self.cols, rows.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(cols: usize, parts: &[IntMatrix]) -> IntMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            rows += p.rows;
            data.extend(p.data.iter().cloned());
        }
        IntMatrix { rows, cols, data }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vectors();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (h, _) = hermite_normal_form(self);
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Replaces rows (a, b) by (x·a + y·b, u·a + v·b).
    fn combine_rows(&mut self, a: usize, b: usize, coeffs: &[BigInt; 4]) {
        let [x, y, u, v] = coeffs;
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x * &ra + y * &rb;
            self[(b, j)] = u * &ra + v * &rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, coeffs: &[BigInt; 4]) {
        let [x, y, u, v] = coeffs;
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Returns `(g, x, y)` with `x·a + y·b = g = gcd(a, b) ≥ 0`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Unimodular 2×2 block `[[x, y], [-b/g, a/g]]` sending `(a, b)` to `(g, 0)`.
fn gcd_block(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    // plain elimination when a | b, so the pivot line is only ever negated;
    // otherwise row and column sweeps in the Smith loop can undo each other
    if !a.is_zero() && b.is_multiple_of(a) {
        let g = a.abs();
        return [a.signum(), BigInt::zero(), -(b / &g), a / &g];
    }
    let (g, x, y) = extended_gcd(a, b);
    [x, y, -(b / &g), a / &g]
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U·M = H`. Pivots of `H` are
/// positive, entries above a pivot lie in `[0, pivot)`, and zero rows sit at
/// the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pr = 0;
    for col in 0..m.cols {
        if pr == m.rows {
            break;
        }
        for i in pr + 1..m.rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let block = gcd_block(&h[(pr, col)], &h[(i, col)]);
            h.combine_rows(pr, i, &block);
            u.combine_rows(pr, i, &block);
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let pivot = h[(pr, col)].clone();
        for i in 0..pr {
            let q = h[(i, col)].div_floor(&pivot);
            let k = -q;
            h.add_row_multiple(i, pr, &k);
            u.add_row_multiple(i, pr, &k);
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(D, U, V)` with `U·M·V = D`, `U` and `V`
/// unimodular, `D` diagonal with `d_1 | d_2 | …` and every `d_i ≥ 0`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => d[(i, j)].abs() < d[(bi, bj)].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let block = gcd_block(&d[(t, t)], &d[(i, t)]);
                d.combine_rows(t, i, &block);
                u.combine_rows(t, i, &block);
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let block = gcd_block(&d[(t, t)], &d[(t, j)]);
                d.combine_cols(t, j, &block);
                v.combine_cols(t, j, &block);
                clean = false;
            }
            if !clean && (t + 1..rows).any(|i| !d[(i, t)].is_zero()) {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = bad_row {
                d.add_row_multiple(t, i, &BigInt::one());
                u.add_row_multiple(t, i, &BigInt::one());
                continue;
            }
            if pivot.is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    (d, u, v)
}

/// A sublattice of `Z^ambient`, stored by its Hermite-normal-form basis.
///
/// Two lattices are equal exactly when their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn trivial(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    /// Lattice spanned by the rows of `generators` (which need not be independent).
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let ambient = generators.cols();
        let (h, _) = hermite_normal_form(generators);
        let keep: Vec<usize> = (0..h.rows())
            .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .collect();
        Lattice {
            ambient,
            basis: h.select_rows(&keep),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.row_vectors()
    }

    /// Basis vectors as `i64`; panics if an entry does not fit.
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis
            .row_vectors()
            .into_iter()
            .map(|row| {
                row.iter()
                    .map(|x| i64::try_from(x).expect("lattice entry exceeds i64"))
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_membership(self, v).is_some()
    }
}

/// `{v ∈ Z^cols : M·v = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Lattice {
    let cols = m.cols();
    if m.rows() == 0 {
        return Lattice::full(cols);
    }
    // U·Mᵀ = H; rows of U against zero rows of H span the integer left kernel of Mᵀ.
    let (h, u) = hermite_normal_form(&m.transpose());
    let zero_rows: Vec<usize> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .collect();
    Lattice::from_generators(&u.select_rows(&zero_rows))
}

/// `{v ∈ S : v_j = 0 for every j ∈ coords}` (coordinates are 0-based).
pub fn coordinate_section(s: &Lattice, coords: &[usize]) -> Lattice {
    if s.rank() == 0 || coords.is_empty() {
        return s.clone();
    }
    // integer combinations c of the basis rows with (cᵀB)_J = 0
    let restricted = s.basis.select_columns(coords).transpose();
    let coeffs = integer_kernel(&restricted);
    if coeffs.rank() == 0 {
        return Lattice::trivial(s.ambient);
    }
    Lattice::from_generators(&coeffs.basis.mul(&s.basis))
}

/// Coordinates `c` with `cᵀ·basis = v`, or `None` when `v ∉ S`.
pub fn solve_membership(s: &Lattice, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(v.len(), s.ambient, "vector outside the ambient space");
    let mut residual = v.to_vec();
    let mut coords = Vec::with_capacity(s.rank());
    let mut start = 0;
    for i in 0..s.rank() {
        let row = s.basis.row(i);
        let pivot_col = (start..s.ambient).find(|&j| !row[j].is_zero())?;
        // columns before the pivot must already be cleared
        if residual[start..pivot_col].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = residual[pivot_col].div_rem(&row[pivot_col]);
        if !r.is_zero() {
            return None;
        }
        for (res, b) in residual.iter_mut().zip(row) {
            *res -= &q * b;
        }
        coords.push(q);
        start = pivot_col + 1;
    }
    if residual.iter().all(Zero::is_zero) {
        Some(coords)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_of_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);

        let z = m(1, &[&[0]]);
        let (h, u) = hermite_normal_form(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(1));
    }

    #[test]
    fn hnf_small_example() {
        let a = m(2, &[&[2, 4], &[6, 8]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(h, m(2, &[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.determinant().abs(), BigInt::one());
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert!(d.is_zero());

        let (d, _, _) = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));

        let a = m(2, &[&[2, 4], &[6, 8]]);
        let (d, u, v) = smith_normal_form(&a);
        assert_eq!(d, m(2, &[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&a).mul(&v), d);
    }

    #[test]
    fn snf_divisibility_fixup() {
        // diag(2, 3) is diagonal but not in Smith form
        let a = m(2, &[&[2, 0], &[0, 3]]);
        let (d, u, v) = smith_normal_form(&a);
        assert_eq!(d, m(2, &[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&a).mul(&v), d);
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(2, &[&[2, 4], &[6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(
            m(3, &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]).determinant(),
            BigInt::from(-3)
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn kernels() {
        assert_eq!(integer_kernel(&IntMatrix::identity(2)).rank(), 0);
        assert_eq!(integer_kernel(&IntMatrix::zeros(2, 2)), Lattice::full(2));
        let k = integer_kernel(&m(3, &[&[1, 1, 0]]));
        assert_eq!(k.basis_i64(), vec![vec![1, -1, 0], vec![0, 0, 1]]);
        // saturation: 2x + 4y = 0 has kernel (2, -1), not (4, -2)
        let k = integer_kernel(&m(2, &[&[2, 4]]));
        assert_eq!(k.basis_i64(), vec![vec![2, -1]]);
    }

    #[test]
    fn sections() {
        let s = coordinate_section(&Lattice::full(2), &[0]);
        assert_eq!(s.basis_i64(), vec![vec![0, 1]]);

        let diag = Lattice::from_generators(&m(2, &[&[1, 1]]));
        assert_eq!(coordinate_section(&diag, &[1]).rank(), 0);

        let s1 = Lattice::from_generators(&m(3, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(coordinate_section(&s1, &[1]).basis_i64(), vec![vec![0, 0, 1]]);
    }

    #[test]
    fn membership() {
        let s = Lattice::from_generators(&m(2, &[&[2, 0]]));
        assert_eq!(solve_membership(&s, &big(&[4, 0])), Some(big(&[2])));
        assert_eq!(solve_membership(&s, &big(&[3, 0])), None);
        assert_eq!(solve_membership(&s, &big(&[0, 0])), Some(big(&[0])));
        assert_eq!(solve_membership(&Lattice::trivial(2), &big(&[0, 0])), Some(vec![]));
        assert_eq!(solve_membership(&Lattice::trivial(2), &big(&[0, 1])), None);
    }
}
