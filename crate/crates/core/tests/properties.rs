use harmonic4::contractions::bilinear_b;
use harmonic4::poly::symbolic_invariants;
use harmonic4::rotations::relative_gap;
use harmonic4::witnesses::j8::max_odd_abs;
use harmonic4::witnesses::j8_family;
use harmonic4::{
    invariants, invariants_oracle, j4_from_mixed, rotate, Field, Harmonic4, Invariant, Monomial,
    Orthogonal3, Rational, Ring, SparsePoly,
};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=9).prop_map(|(p, q)| Rational::from_ratio(p, q))
}

fn tensor() -> impl Strategy<Value = Harmonic4<Rational>> {
    proptest::array::uniform9(rational()).prop_map(Harmonic4::from_independent)
}

fn float_tensor() -> impl Strategy<Value = Harmonic4<f64>> {
    proptest::array::uniform9(-2.0f64..2.0).prop_map(Harmonic4::from_independent)
}

/// Signed permutation matrices: exact orthogonal matrices over the rationals.
fn signed_permutation() -> impl Strategy<Value = Orthogonal3<Rational>> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    (
        0usize..6,
        proptest::array::uniform3(prop_oneof![Just(1i64), Just(-1i64)]),
    )
        .prop_map(move |(p, signs)| {
            let perm = Orthogonal3::<Rational>::permutation(perms[p]).unwrap();
            Orthogonal3::reflection(signs).unwrap().compose(&perm)
        })
}

/// Degree at most 9, so triple products stay under the degree guard.
fn small_poly() -> impl Strategy<Value = SparsePoly> {
    proptest::collection::vec(
        (proptest::array::uniform9(0u32..2), -5i64..=5, 1i64..=4),
        0..6,
    )
    .prop_map(|terms| {
        terms
            .into_iter()
            .fold(SparsePoly::zero(), |acc, (e, p, q)| {
                acc.add(&SparsePoly::monomial(
                    Monomial::from_exponents(e).unwrap(),
                    Rational::from_ratio(p, q),
                ))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn optimized_matches_oracle(d in tensor()) {
        prop_assert_eq!(invariants(&d), invariants_oracle(&d));
    }

    #[test]
    fn homogeneity(d in tensor(), c in rational()) {
        let a = invariants(&d);
        let b = invariants(&d.scale(&c));
        for f in Invariant::ALL {
            prop_assert_eq!(b.get(f), &a.get(f).mul(&Ring::pow(&c, f.degree())), "{}", f);
        }
    }

    #[test]
    fn parity_under_negation(d in tensor()) {
        let a = invariants(&d);
        let b = invariants(&d.negate());
        for f in Invariant::ALL {
            let want = if f.is_odd() { a.get(f).neg() } else { a.get(f).clone() };
            prop_assert_eq!(b.get(f), &want, "{}", f);
        }
    }

    #[test]
    fn k6_identity_holds_pointwise(d in tensor()) {
        let v = invariants(&d);
        let rhs = v.j2.pow(3).mul(&Rational::from_ratio(-13, 80))
            .add(&v.j2.mul(&v.j4).mul(&Rational::from_ratio(33, 40)))
            .add(&v.j3.mul(&v.j3).mul(&Rational::from_ratio(-1, 24)))
            .add(&v.j6.mul(&Rational::from_ratio(9, 16)));
        prop_assert_eq!(v.k6, rhs);
    }

    #[test]
    fn j4_reconstruction(d in tensor()) {
        let v = invariants(&d);
        prop_assume!(!v.j2.is_zero());
        prop_assert_eq!(j4_from_mixed(&v.j2, &v.j3, &v.j6, &v.k6), v.j4);
    }

    #[test]
    fn trace_of_b_and_norm_are_j2(d in tensor()) {
        let j2 = invariants(&d).j2;
        prop_assert_eq!(bilinear_b(&d).trace(), j2.clone());
        prop_assert_eq!(d.frobenius_norm_sq(), j2);
    }

    #[test]
    fn completion_is_traceless_and_symmetric(d in tensor(), i in 1usize..=3, j in 1usize..=3, k in 1usize..=3, l in 1usize..=3) {
        prop_assert!(d.check_traceless().is_zero());
        let v = d.component(i, j, k, l).unwrap();
        for p in [(j, i, k, l), (k, j, i, l), (l, k, j, i), (i, k, l, j), (j, k, l, i)] {
            prop_assert_eq!(&d.component(p.0, p.1, p.2, p.3).unwrap(), &v);
        }
    }

    #[test]
    fn signed_permutations_fix_invariants_exactly(d in tensor(), q in signed_permutation()) {
        prop_assert_eq!(invariants(&rotate(&d, &q)), invariants(&d));
    }

    #[test]
    fn action_composes(d in tensor(), q1 in signed_permutation(), q2 in signed_permutation()) {
        prop_assert_eq!(rotate(&rotate(&d, &q1), &q2), rotate(&d, &q2.compose(&q1)));
    }

    #[test]
    fn float_rotation_invariance(d in float_tensor(), seed in any::<u64>()) {
        let q = harmonic4::random_rotation(seed);
        let (a, b) = (invariants(&d), invariants(&rotate(&d, &q)));
        let norm = a.j2.sqrt();
        for f in Invariant::ALL {
            let tol = if f.degree() <= 6 { 1e-8 } else { 1e-7 };
            prop_assert!(relative_gap(*a.get(f), *b.get(f), norm, f.degree()) <= tol, "{}", f);
        }
    }

    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.pow(0), SparsePoly::one());
    }

    #[test]
    fn poly_text_round_trip(a in small_poly()) {
        prop_assert_eq!(a.to_text().parse::<SparsePoly>().unwrap(), a);
    }

    #[test]
    fn j8_family_odd_invariants_vanish(t in 0.01f64..0.49) {
        prop_assume!((t - 0.25).abs() > 1e-3);
        if let Ok(pair) = j8_family(t) {
            prop_assert!(max_odd_abs(&pair) <= 1e-10);
            let report = pair.evaluate(1e-9, 0.0);
            for f in [Invariant::J2, Invariant::J4, Invariant::J6] {
                prop_assert!(report.comparison(f).scaled_gap <= 1e-9, "{} at t = {}", f, t);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symbolic_matches_oracle(d in tensor()) {
        let symbolic = symbolic_invariants();
        let oracle = invariants_oracle(&d);
        for f in Invariant::ALL {
            prop_assert_eq!(&symbolic.get(f).evaluate(d.independent()), oracle.get(f), "{}", f);
        }
    }

    #[test]
    fn symbolic_float_evaluation_tracks_exact(d in tensor()) {
        let symbolic = symbolic_invariants();
        let exact = invariants(&d);
        let point = d.to_f64();
        let norm = exact.j2.to_f64().sqrt();
        for f in [Invariant::J2, Invariant::J6, Invariant::J10] {
            let approx = symbolic.get(f).evaluate_f64(point.independent());
            prop_assert!(relative_gap(approx, exact.get(f).to_f64(), norm, f.degree()) <= 1e-9);
        }
    }
}
