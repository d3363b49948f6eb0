use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use quantum_affine::algebra::{multiply, AlgebraElement, LaurentCoefficient, PoissonElement, QuantumElement};
use quantum_affine::lattice::{
    hermite_normal_form, integer_kernel, smith_normal_form, solve_membership, IntMatrix,
};
use quantum_affine::limit::{evaluation_maps, poisson_bracket, poisson_matrix, Deformation, FactoredKUnit};
use quantum_affine::poly::{Poly, SymbolicScalar};
use quantum_affine::spectrum::{
    contains, full_spectrum, phi_transport, poisson_core, symplectic_core, Direction, Truth,
    DEFAULT_STRATUM_BOUND,
};
use quantum_affine::toric::{pullback, twisted_multiply, GradedElement, GradingData};
use quantum_affine::{Bicharacter, Subset};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
}

fn antisymmetric(n: usize, upper: &[i64]) -> Vec<Vec<i64>> {
    let mut l = vec![vec![0; n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *it.next().unwrap();
            l[i][j] = v;
            l[j][i] = -v;
        }
    }
    l
}

/// Bicharacters with `n ≤ max_n`, `m ≤ 2` and exponents in `[-2, 2]`.
fn bichar(max_n: usize) -> impl Strategy<Value = Bicharacter> {
    (1..=max_n, 0..=2usize).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, n * (n - 1) / 2), m).prop_map(move |uppers| {
            let mats = uppers.iter().map(|u| antisymmetric(n, u)).collect();
            Bicharacter::validate(mats, n).unwrap()
        })
    })
}

fn with_vectors(max_n: usize, count: usize, lo: i64, hi: i64) -> impl Strategy<Value = (Bicharacter, Vec<Vec<i64>>)> {
    bichar(max_n).prop_flat_map(move |b| {
        let n = b.n();
        (Just(b), prop::collection::vec(prop::collection::vec(lo..=hi, n), count))
    })
}

fn big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.row_vectors()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn hnf_is_unimodular_and_idempotent(rows in matrix(3, 4, 5)) {
        let m = IntMatrix::from_i64_rows(4, &rows);
        let (h, u) = hermite_normal_form(&m);
        prop_assert_eq!(u.determinant().abs(), BigInt::one());
        prop_assert_eq!(u.mul(&m), h.clone());
        let (h2, _) = hermite_normal_form(&h);
        prop_assert_eq!(h2, h);
    }

    #[test]
    fn snf_is_a_divisibility_chain(rows in matrix(3, 3, 5)) {
        let m = IntMatrix::from_i64_rows(3, &rows);
        let (d, u, v) = smith_normal_form(&m);
        prop_assert_eq!(u.determinant().abs(), BigInt::one());
        prop_assert_eq!(v.determinant().abs(), BigInt::one());
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        let d = big(&d);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!(d[i][j].is_zero());
                }
            }
            prop_assert!(!d[i][i].is_negative());
        }
        for i in 0..2 {
            let (a, b) = (&d[i][i], &d[i + 1][i + 1]);
            let divides = if a.is_zero() { b.is_zero() } else { (b % a).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn kernel_contains_every_small_solution(rows in matrix(3, 3, 4)) {
        let m = IntMatrix::from_i64_rows(3, &rows);
        let k = integer_kernel(&m);
        prop_assert_eq!(k.rank() + m.rank(), 3);
        for v in k.basis_vectors() {
            prop_assert!(m.apply(&v).iter().all(Zero::is_zero));
        }
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    if rows.iter().all(|r| r[0] * a + r[1] * b + r[2] * c == 0) {
                        let v: Vec<BigInt> = vec![a.into(), b.into(), c.into()];
                        prop_assert!(solve_membership(&k, &v).is_some(), "{:?} missing", (a, b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn bicharacter_is_alternating_and_biadditive((b, v) in with_vectors(4, 3, -4, 4)) {
        let (s, t, u) = (&v[0], &v[1], &v[2]);
        let st = b.eval_c(s, t).unwrap();
        let ts = b.eval_c(t, s).unwrap();
        prop_assert_eq!(st.exponents().iter().map(|e| -e).collect::<Vec<_>>(), ts.exponents().to_vec());
        let tu: Vec<i64> = t.iter().zip(u).map(|(a, b)| a + b).collect();
        let lhs = b.eval_c(s, &tu).unwrap();
        let rhs = st.product(&b.eval_c(s, u).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(b.eval_c(s, s).unwrap().is_identity());
    }

    #[test]
    fn radical_is_the_kernel_off_w(b in bichar(4), bits in 0u64..16) {
        let n = b.n();
        let w = Subset::from_bits(bits & ((1 << n) - 1));
        let s = b.radical(w);
        for v in s.basis_i64() {
            for i in w.iter() {
                prop_assert_eq!(v[i], 0);
            }
            for j in (0..n).filter(|&j| !w.contains(j)) {
                let e = quantum_affine::bichar::unit(n, j);
                prop_assert!(b.eval_c(&v, &e).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn twisted_product_is_associative((b, v) in with_vectors(4, 3, 0, 3)) {
        let x: Vec<QuantumElement> = v.iter().map(|s| AlgebraElement::monomial(s.clone()).unwrap()).collect();
        let left = multiply(&b, &multiply(&b, &x[0], &x[1]).unwrap(), &x[2]).unwrap();
        let right = multiply(&b, &x[0], &multiply(&b, &x[1], &x[2]).unwrap()).unwrap();
        prop_assert!(left == right);
    }

    #[test]
    fn commutation_law((b, v) in with_vectors(4, 2, 0, 3)) {
        let (s, t) = (&v[0], &v[1]);
        let xs: QuantumElement = AlgebraElement::monomial(s.clone()).unwrap();
        let xt: QuantumElement = AlgebraElement::monomial(t.clone()).unwrap();
        let sigma = LaurentCoefficient::monomial(&b.eval_sigma(s, t).unwrap());
        let lhs = multiply(&b, &xs, &xt).unwrap();
        let rhs = multiply(&b, &xt, &xs).unwrap().scale(&sigma);
        prop_assert!(lhs == rhs);
        let sum: Vec<i64> = s.iter().zip(t).map(|(a, b)| a + b).collect();
        prop_assert!(lhs.support().all(|e| *e == sum));
    }

    #[test]
    fn evaluation_maps_are_additive(
        m in 1usize..=3,
        e in prop::collection::vec(-3i64..=3, 3),
        f in prop::collection::vec(-3i64..=3, 3),
    ) {
        let def = Deformation::symbolic(m);
        let a = FactoredKUnit::from_exponents(&e[..m]);
        let b = FactoredKUnit::from_exponents(&f[..m]);
        let ea = evaluation_maps(&def, &a).unwrap();
        let eb = evaluation_maps(&def, &b).unwrap();
        let eab = evaluation_maps(&def, &a.mul(&b)).unwrap();
        prop_assert!(ea.at_one == SymbolicScalar::one());
        prop_assert!(eab.at_one == SymbolicScalar::one());
        prop_assert!(eab.log_deriv_at_one == ea.log_deriv_at_one.add(&eb.log_deriv_at_one));
    }

    #[test]
    fn poisson_matrix_is_antisymmetric((b, v) in with_vectors(4, 1, -3, 3)) {
        let def = Deformation::symbolic(b.m());
        let u = poisson_matrix(&b, def.mus()).unwrap();
        for i in 0..b.n() {
            for j in 0..b.n() {
                prop_assert_eq!(u.entry(i, j).clone(), u.entry(j, i).neg());
            }
        }
        prop_assert!(u.u(&v[0], &v[0]).is_zero());
    }

    #[test]
    fn jacobi_on_monomials((b, v) in with_vectors(4, 3, 0, 3)) {
        let def = Deformation::symbolic(b.m());
        let u = poisson_matrix(&b, def.mus()).unwrap();
        let x: Vec<PoissonElement> = v.iter().map(|s| AlgebraElement::monomial(s.clone()).unwrap()).collect();
        let br = |p: &PoissonElement, q: &PoissonElement| poisson_bracket(&u, p, q).unwrap();
        let total = br(&x[0], &br(&x[1], &x[2]))
            .add(&br(&x[1], &br(&x[2], &x[0])))
            .unwrap()
            .add(&br(&x[2], &br(&x[0], &x[1])))
            .unwrap();
        prop_assert!(total.is_zero());
    }

    #[test]
    fn poisson_core_is_constant_on_orbits(
        (b, v) in with_vectors(4, 2, 0, 3),
        t in 2i64..=4,
    ) {
        let n = b.n();
        // coordinates of v[0] give the point, v[1] only decides which are zero
        let p: Vec<BigRational> = (0..n)
            .map(|i| if v[1][i] == 0 { BigRational::zero() } else { rat(v[0][i] + 1) })
            .collect();
        let w = Subset::from_indices((0..n).filter(|&i| p[i].is_zero()));
        let s = b.radical(w).basis_i64();
        let perp = integer_kernel(&IntMatrix::from_i64_rows(n, &s)).basis_i64();
        let mut q = p.clone();
        let scale = rat(t);
        for dir in &perp {
            for i in 0..n {
                let f = num_traits::pow::Pow::pow(&scale, dir[i] as i32);
                q[i] = &q[i] * f;
            }
        }
        prop_assert_eq!(poisson_core(&b, &p).unwrap(), poisson_core(&b, &q).unwrap());
    }

    #[test]
    fn labels_contain_themselves_and_transport_back((b, v) in with_vectors(4, 1, 0, 3)) {
        let p: Vec<BigRational> = v[0].iter().map(|&x| rat(x)).collect();
        let label = poisson_core(&b, &p).unwrap();
        prop_assert_eq!(contains(&b, &label, &label).unwrap(), Truth::True);
        let there = phi_transport(&label, Direction::PoissonToQuantum);
        prop_assert_eq!(phi_transport(&there, Direction::QuantumToPoisson), label.clone());
        prop_assert_eq!(contains(&b, &there, &there).unwrap(), Truth::True);
    }

    #[test]
    fn containment_is_transitive((b, v) in with_vectors(3, 3, 0, 2)) {
        let labels: Vec<_> = v
            .iter()
            .map(|x| poisson_core(&b, &x.iter().map(|&c| rat(c)).collect::<Vec<_>>()).unwrap())
            .collect();
        let le = |i: usize, j: usize| contains(&b, &labels[i], &labels[j]).unwrap() == Truth::True;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    if le(i, j) && le(j, k) {
                        prop_assert!(le(i, k));
                    }
                }
                if i != j && labels[i].w() == labels[j].w() && labels[i] != labels[j] {
                    prop_assert!(!(le(i, j) && le(j, i)));
                }
            }
        }
    }

    #[test]
    fn symplectic_core_contains_its_point((b, v) in with_vectors(4, 1, -2, 2)) {
        let p: Vec<BigRational> = v[0].iter().map(|&x| rat(x)).collect();
        prop_assert!(symplectic_core(&b, &p).unwrap().contains_point(&p));
    }

    #[test]
    fn rank_vector_is_permutation_invariant(b in bichar(4), seed in any::<u64>()) {
        let n = b.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let pb = b.permuted(&perm).unwrap();
        let ranks = |b: &Bicharacter| -> std::collections::HashMap<u64, usize> {
            full_spectrum(b, DEFAULT_STRATUM_BOUND).unwrap().iter().map(|r| (r.w.bits(), r.rank)).collect()
        };
        let (old, new) = (ranks(&b), ranks(&pb));
        for (bits, rank) in new {
            let moved = Subset::from_indices(Subset::from_bits(bits).iter().map(|i| perm[i]));
            prop_assert_eq!(old[&moved.bits()], rank);
        }
    }
}

/// Grading data with `d ≤ 3`, `n ≤ 4`, `m ≤ 2` and entries in `[-2, 2]`.
fn grading() -> impl Strategy<Value = GradingData> {
    (1..=3usize, 1..=4usize, 0..=2usize).prop_flat_map(|(d, n, m)| {
        (
            matrix(d, n, 2),
            prop::collection::vec(prop::collection::vec(-2i64..=2, d * (d - 1) / 2), m),
        )
            .prop_map(move |(deg, uppers)| {
                let c = Bicharacter::validate(uppers.iter().map(|u| antisymmetric(d, u)).collect(), d).unwrap();
                GradingData::new(deg, c).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn pullback_is_alternating_and_consistent(g in grading(), bits in 0u64..16) {
        let hat = pullback(&g).unwrap();
        let n = g.n();
        for l in hat.matrices() {
            for i in 0..n {
                prop_assert_eq!(l[i][i], 0);
                for j in 0..n {
                    prop_assert_eq!(l[i][j], -l[j][i]);
                }
            }
        }
        let rebuilt = Bicharacter::validate(hat.matrices().to_vec(), n).unwrap();
        let w = Subset::from_bits(bits & ((1 << n) - 1));
        prop_assert_eq!(hat.radical(w), rebuilt.radical(w));
    }

    #[test]
    fn graded_twisted_product_is_associative(
        g in grading(),
        degs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3),
    ) {
        let d = g.d();
        let x: Vec<GradedElement<LaurentCoefficient>> = degs
            .iter()
            .map(|a| GradedElement::unit_at(a[..d].to_vec()))
            .collect();
        let left = twisted_multiply(&g, &twisted_multiply(&g, &x[0], &x[1]).unwrap(), &x[2]).unwrap();
        let right = twisted_multiply(&g, &x[0], &twisted_multiply(&g, &x[1], &x[2]).unwrap()).unwrap();
        prop_assert!(left == right);
    }
}

#[test]
fn jacobi_holds_with_poly_coefficients_on_sums() {
    // small non-monomial elements over the three-generator example
    let mats = vec![
        vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
        vec![vec![0, 0, 1], vec![0, 0, 0], vec![-1, 0, 0]],
    ];
    let b = Bicharacter::validate(mats, 3).unwrap();
    let def = Deformation::symbolic(2);
    let u = poisson_matrix(&b, def.mus()).unwrap();
    let el = |terms: &[(i64, [i64; 3])]| -> PoissonElement {
        terms.iter().fold(AlgebraElement::zero(3), |acc, (c, s)| {
            acc.add(&AlgebraElement::monomial_with(s.to_vec(), Poly::int(*c)).unwrap()).unwrap()
        })
    };
    let a = el(&[(1, [1, 0, 0]), (2, [0, 1, 1])]);
    let bb = el(&[(3, [0, 2, 0]), (-1, [1, 0, 1])]);
    let c = el(&[(1, [0, 0, 2]), (1, [1, 1, 0])]);
    let br = |p: &PoissonElement, q: &PoissonElement| poisson_bracket(&u, p, q).unwrap();
    let jac = br(&a, &br(&bb, &c)).add(&br(&bb, &br(&c, &a))).unwrap().add(&br(&c, &br(&a, &bb))).unwrap();
    assert!(jac.is_zero());
    // Leibniz in the second slot
    let lhs = br(&a, &bb.commutative_product(&c).unwrap());
    let rhs = br(&a, &bb)
        .commutative_product(&c)
        .unwrap()
        .add(&bb.commutative_product(&br(&a, &c)).unwrap())
        .unwrap();
    assert!(lhs == rhs);
}
