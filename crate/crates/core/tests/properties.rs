use kinvariant::cohomology::{IntegralClass, ModPClass};
use kinvariant::construction::{lens_product, lens_product_class, RotationData};
use kinvariant::equivalence::{
    brute_force_equivalent, canonical_form, decide_equivalent, LeftGroup, RightGroup,
};
use kinvariant::forms::product_of_linear_forms;
use kinvariant::restrictions::{
    satisfies_all_twists, satisfies_literal_quotient, satisfies_right_twists, satisfies_top_bottom,
    TransgressionPair,
};
use kinvariant::{
    BinaryForm, EquivalenceMode, FieldContext, FormPair, Limits, Matrix2, TransformWitness,
};
use proptest::prelude::*;
use proptest::sample::select;

const SMALL: &[u64] = &[5, 7];
const MEDIUM: &[u64] = &[5, 7, 11, 13, 17, 19, 23, 29, 31];

fn field(p: u64) -> FieldContext {
    FieldContext::new(p).unwrap()
}

fn form_in(p: u64, degree: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(0..p as i64, degree + 1)
        .prop_map(move |c| BinaryForm::new(field(p), &c).unwrap())
}

fn pair_in(p: u64, degree: usize) -> impl Strategy<Value = FormPair> {
    (form_in(p, degree), form_in(p, degree)).prop_map(|(a, b)| FormPair::new(a, b).unwrap())
}

fn realizable_in(p: u64) -> impl Strategy<Value = FormPair> {
    pair_in(p, 2).prop_filter("realizable", |pr| pr.is_realizable())
}

fn gl2_in(p: u64) -> impl Strategy<Value = Matrix2> {
    prop::array::uniform4(0..p as i64)
        .prop_map(move |e| Matrix2::new(field(p), [[e[0], e[1]], [e[2], e[3]]]))
        .prop_filter("invertible", |m| m.is_invertible())
}

/// `[[a, b], [c, (±1 + bc)/a]]` with `a != 0`.
fn slpm2_in(p: u64) -> impl Strategy<Value = Matrix2> {
    (1..p as i64, 0..p as i64, 0..p as i64, any::<bool>()).prop_map(move |(a, b, c, neg)| {
        let f = field(p);
        let det = if neg { p as i64 - 1 } else { 1 };
        let d = f.div(f.reduce(det + b * c), a as u32).unwrap();
        Matrix2::new(f, [[a, b], [c, d as i64]])
    })
}

fn group_element(p: u64) -> impl Strategy<Value = TransformWitness> {
    (slpm2_in(p), gl2_in(p)).prop_map(|(left, right)| TransformWitness { left, right })
}

fn with_prime<S: Strategy, F: Fn(u64) -> S>(
    primes: &'static [u64],
    f: F,
) -> impl Strategy<Value = (u64, S::Value)> {
    select(primes).prop_flat_map(move |p| (Just(p), f(p)))
}

/// A random homogeneous mod-p class of degree `k`.
fn modp_class(p: u64, k: usize) -> impl Strategy<Value = ModPClass> {
    let basis = ModPClass::basis_of_degree(field(p), k);
    prop::collection::vec(0..p as u32, basis.len()).prop_map(move |coeffs| {
        basis
            .iter()
            .zip(coeffs)
            .fold(ModPClass::zero(field(p)), |acc, (b, c)| {
                acc.add(&b.scale(c)).unwrap()
            })
    })
}

fn integral_class(p: u64) -> impl Strategy<Value = IntegralClass> {
    let f = field(p);
    (
        -3i64..4,
        prop::collection::vec((0u32..4, 0u32..4, 0..p as u32), 0..4),
        prop::collection::vec((0u32..3, 0u32..3, 0..p as u32), 0..3),
    )
        .prop_map(move |(n, poly, cpart)| {
            let mut acc = IntegralClass::integer(f, n);
            for (i, j, c) in poly {
                let m = kinvariant::cohomology::Monomial {
                    a: i,
                    b: j,
                    c: false,
                };
                acc = acc
                    .add(&IntegralClass::from_monomial(f, m, c as i64))
                    .unwrap();
            }
            for (i, j, c) in cpart {
                let m = kinvariant::cohomology::Monomial {
                    a: i,
                    b: j,
                    c: true,
                };
                acc = acc
                    .add(&IntegralClass::from_monomial(f, m, c as i64))
                    .unwrap();
            }
            acc
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(p in select(vec![5u64, 13, 65_537, 2_147_483_647]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(p);
        let (a, b, c) = (a % f.p(), b % f.p(), c % f.p());
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn legendre_and_sqrt(p in select(vec![5u64, 7, 13, 31, 65_537, 2_147_483_647]), x in 1u32.., y in 1u32..) {
        let f = field(p);
        let (x, y) = (x % f.p(), y % f.p());
        prop_assume!(x != 0 && y != 0);
        prop_assert_eq!(f.legendre(f.mul(x, y)), f.legendre(x) * f.legendre(y));
        match f.sqrt(x) {
            Some(r) => {
                prop_assert_eq!(f.mul(r, r), x);
                prop_assert!(f.legendre(x) >= 0);
            }
            None => prop_assert_eq!(f.legendre(x), -1),
        }
    }

    #[test]
    fn fourth_power_class_is_coset((p, (x, t)) in with_prime(MEDIUM, |p| (1..p as u32, 1..p as u32))) {
        let f = field(p);
        let moved = f.mul(x, f.pow(t, 4));
        prop_assert_eq!(f.fourth_power_class(moved).unwrap(), f.fourth_power_class(x).unwrap());
    }

    #[test]
    fn substitution_is_a_right_action((_, (g, m, n)) in with_prime(MEDIUM, |p| (form_in(p, 3), gl2_in(p), gl2_in(p)))) {
        prop_assert_eq!(g.substitute(&m.mul(&n)).unwrap(), g.substitute(&m).unwrap().substitute(&n).unwrap());
        prop_assert_eq!(g.substitute(&m).unwrap().degree(), g.degree());
    }

    #[test]
    fn substitution_matches_evaluation((_, (g, m, s, t)) in with_prime(MEDIUM, |p| (form_in(p, 4), gl2_in(p), 0..p as u32, 0..p as u32))) {
        let (ms, mt) = m.apply(s, t);
        prop_assert_eq!(g.substitute(&m).unwrap().evaluate(s, t), g.evaluate(ms, mt));
    }

    #[test]
    fn linear_products_evaluate_factorwise(
        (p, (factors, s, t)) in with_prime(MEDIUM, |p| (prop::collection::vec((0..p as i64, 0..p as i64), 1..5), 0..p as u32, 0..p as u32))
    ) {
        let f = field(p);
        let elems: Vec<_> = factors.iter().map(|&(r, q)| (f.elem(r), f.elem(q))).collect();
        let prod = product_of_linear_forms(f, &elems).unwrap();
        let expected = factors.iter().fold(1u32, |acc, &(r, q)| {
            f.mul(acc, f.add(f.mul(f.reduce(r), s), f.mul(f.reduce(q), t)))
        });
        prop_assert_eq!(prod.evaluate(s, t).value(), expected);
        prop_assert_eq!(prod.degree(), factors.len());
    }

    #[test]
    fn actions_compose_and_commute((_, (pr, s1, s2, r1, r2)) in with_prime(MEDIUM, |p| (pair_in(p, 2), slpm2_in(p), slpm2_in(p), gl2_in(p), gl2_in(p)))) {
        prop_assert_eq!(pr.left_act(&s2).unwrap().left_act(&s1).unwrap(), pr.left_act(&s1.mul(&s2)).unwrap());
        prop_assert_eq!(pr.right_act(&r1).unwrap().right_act(&r2).unwrap(), pr.right_act(&r1.mul(&r2)).unwrap());
        prop_assert_eq!(
            pr.left_act(&s1).unwrap().right_act(&r1).unwrap(),
            pr.right_act(&r1).unwrap().left_act(&s1).unwrap()
        );
    }

    #[test]
    fn realizability_is_invariant((_, (pr, g)) in with_prime(MEDIUM, |p| (pair_in(p, 2), group_element(p)))) {
        prop_assert_eq!(g.apply(&pr).unwrap().is_realizable(), pr.is_realizable());
    }

    #[test]
    fn canonical_form_is_orbit_invariant((_, (pr, g)) in with_prime(MEDIUM, |p| (realizable_in(p), group_element(p)))) {
        let moved = g.apply(&pr).unwrap();
        prop_assert_eq!(canonical_form(&moved).unwrap().0, canonical_form(&pr).unwrap().0);
    }

    #[test]
    fn decide_finds_sound_witness((_, (pr, g)) in with_prime(MEDIUM, |p| (realizable_in(p), group_element(p)))) {
        let moved = g.apply(&pr).unwrap();
        let w = decide_equivalent(&pr, &moved, EquivalenceMode::FULL, &Limits::default()).unwrap();
        let w = w.expect("pairs in one orbit are equivalent");
        prop_assert!(w.verifies(&pr, &moved));
        prop_assert!(EquivalenceMode::FULL.admits(&w));
    }

    #[test]
    fn canonical_witness_is_sound((p, pr) in with_prime(MEDIUM, realizable_in)) {
        let f = field(p);
        let (nf, w) = canonical_form(&pr).unwrap();
        let kinvariant::NormalForm::StandardClass(c) = nf else { panic!("realizable input") };
        prop_assert!(w.unwrap().verifies(&pr, &FormPair::standard(f, c.value())));
        prop_assert_eq!(c.value(), f.class_representatives()[c.fourth_power_class().unwrap().0].value());
    }

    #[test]
    fn small_prime_decisions_match_brute_force((_, (a, b)) in with_prime(SMALL, |p| (realizable_in(p), realizable_in(p)))) {
        let fast = decide_equivalent(&a, &b, EquivalenceMode::FULL, &Limits::default()).unwrap();
        prop_assert_eq!(fast.is_some(), brute_force_equivalent(&a, &b, EquivalenceMode::FULL, &Limits::default()).unwrap());
    }

    #[test]
    fn freeness_matches_restriction(
        (p, (n, r, q)) in select(vec![7u64, 11, 13]).prop_flat_map(|p| {
            (1usize..4).prop_flat_map(move |n| (Just(p), (Just(n), prop::collection::vec(0..p as i64, 2 * n), prop::collection::vec(0..p as i64, 2 * n))))
        })
    ) {
        let Ok(rot) = RotationData::new(field(p), n, &r, &q) else { return Ok(()) };
        let k = rot.k_invariant().unwrap();
        let nonzero = !k.q1().is_zero() && !k.q2().is_zero();
        prop_assert_eq!(rot.is_free(), nonzero && k.is_realizable());
        prop_assert_eq!(rot.is_free(), nonzero && k.q1().common_rational_root(k.q2()).unwrap().is_none());
    }

    #[test]
    fn lens_class_is_scale_invariant((p, (x, y, l)) in with_prime(&[5, 7, 11, 13, 17], |p| (1..p as i64, 1..p as i64, 1..p as i64))) {
        let f = field(p);
        prop_assert_eq!(
            lens_product_class(f.elem(x * l), f.elem(y * l)).unwrap(),
            lens_product_class(f.elem(x), f.elem(y)).unwrap()
        );
    }

    #[test]
    fn twist_predicates((_, pr) in with_prime(MEDIUM, |p| pair_in(p, 2))) {
        let tp = TransgressionPair::new(3, pr.clone()).unwrap();
        if satisfies_all_twists(&tp) {
            prop_assert!(satisfies_right_twists(&tp));
            prop_assert!(satisfies_literal_quotient(&tp));
        }
        if satisfies_right_twists(&tp) {
            prop_assert!(satisfies_top_bottom(&tp));
        }
        prop_assert_eq!(satisfies_all_twists(&tp), pr.is_realizable());
    }

    #[test]
    fn twist_predicates_are_right_invariant((_, (pr, m)) in with_prime(&[3, 5, 7], |p| (pair_in(p, 3), gl2_in(p)))) {
        let a = TransgressionPair::new(5, pr.clone()).unwrap();
        let b = TransgressionPair::new(5, pr.right_act(&m).unwrap()).unwrap();
        prop_assert_eq!(satisfies_right_twists(&a), satisfies_right_twists(&b));
        prop_assert_eq!(satisfies_all_twists(&a), satisfies_all_twists(&b));
        if satisfies_all_twists(&a) {
            prop_assert!(satisfies_top_bottom(&a));
        }
    }

    #[test]
    fn bockstein_triangle_commutes((_, (_, s)) in select(vec![5u64, 7]).prop_flat_map(|p| (0usize..11).prop_flat_map(move |k| (Just(p), (Just(k), modp_class(p, k)))))) {
        prop_assert_eq!(s.bockstein_integral().reduce_mod_p(), s.bockstein_modp());
        prop_assert!(s.bockstein_modp().bockstein_modp().is_zero());
    }

    #[test]
    fn integral_bockstein_kills_reductions((_, x) in with_prime(SMALL, integral_class)) {
        prop_assert!(x.reduce_mod_p().bockstein_integral().is_zero());
    }

    #[test]
    fn modp_product_is_graded_commutative(
        (p, (i, j, _, x, y, z)) in select(vec![5u64, 7]).prop_flat_map(|p| (0usize..5, 0usize..5, 0usize..5).prop_flat_map(move |(i, j, k)| {
            (Just(p), (Just(i), Just(j), Just(k), modp_class(p, i), modp_class(p, j), modp_class(p, k)))
        }))
    ) {
        let f = field(p);
        let xy = x.multiply(&y).unwrap();
        let yx = y.multiply(&x).unwrap();
        let sign = if i % 2 == 1 && j % 2 == 1 { f.neg(1) } else { 1 };
        prop_assert_eq!(&xy, &yx.scale(sign));
        prop_assert_eq!(xy.multiply(&z).unwrap(), x.multiply(&y.multiply(&z).unwrap()).unwrap());
    }

    #[test]
    fn integral_product_is_associative_and_commutative((_, (x, y, z)) in with_prime(SMALL, |p| (integral_class(p), integral_class(p), integral_class(p)))) {
        prop_assert_eq!(x.multiply(&y).unwrap().multiply(&z).unwrap(), x.multiply(&y.multiply(&z).unwrap()).unwrap());
        // Odd-degree parts square to zero, so the ring is commutative on the nose.
        prop_assert_eq!(x.multiply(&y).unwrap(), y.multiply(&x).unwrap());
        prop_assert_eq!(x.multiply(&y).unwrap().reduce_mod_p(), x.reduce_mod_p().multiply(&y.reduce_mod_p()).unwrap());
    }
}

#[test]
fn conic_counts_match_enumeration() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let f = field(p);
        for d in 1..p as u32 {
            for w in 1..p as u32 {
                let target = f.inv(f.pow(w, 3)).unwrap();
                let mut count = 0;
                for r1 in 0..p as u32 {
                    for r2 in 0..p as u32 {
                        if f.sub(f.mul(d, f.mul(r1, r1)), f.mul(r2, r2)) == target {
                            count += 1;
                        }
                    }
                }
                assert_eq!(
                    count,
                    f.count_conic_solutions(d).unwrap(),
                    "p={p} delta={d} w={w}"
                );
                let (r1, r2) = f.solve_conic(d, w).unwrap();
                assert_eq!(f.sub(f.mul(d, f.mul(r1, r1)), f.mul(r2, r2)), target);
            }
        }
    }
}

#[test]
fn actions_are_invariant_under_generators() {
    // Exhaustive over generators for a grid of pairs at p = 5.
    let f = field(5);
    let gens: Vec<TransformWitness> = LeftGroup::SlPm2
        .generators(f)
        .into_iter()
        .map(TransformWitness::left_only)
        .chain(
            RightGroup::Gl2
                .generators(f)
                .into_iter()
                .map(TransformWitness::right_only),
        )
        .collect();
    for code in (0..5u32.pow(6)).step_by(7) {
        let c: Vec<i64> = (0..6).map(|i| ((code / 5u32.pow(i)) % 5) as i64).collect();
        let pr = FormPair::from_coeffs(f, &c[..3], &c[3..]).unwrap();
        for g in &gens {
            let moved = g.apply(&pr).unwrap();
            assert_eq!(moved.is_realizable(), pr.is_realizable());
            if pr.is_realizable() {
                assert_eq!(
                    canonical_form(&moved).unwrap().0,
                    canonical_form(&pr).unwrap().0
                );
            }
            let (a, b) = (
                TransgressionPair::new(3, pr.clone()).unwrap(),
                TransgressionPair::new(3, moved).unwrap(),
            );
            assert_eq!(satisfies_all_twists(&a), satisfies_all_twists(&b));
        }
    }
}

#[test]
fn lens_invariants_exhaustive() {
    for p in [5u64, 7, 11, 13] {
        let f = field(p);
        for x in 1..p as i64 {
            for y in 1..p as i64 {
                let k = lens_product(f.elem(x), f.elem(y))
                    .unwrap()
                    .k_invariant()
                    .unwrap();
                assert_eq!(k, FormPair::from_coeffs(f, &[x, 0, 0], &[0, 0, y]).unwrap());
            }
        }
        let diag: std::collections::BTreeSet<_> = (1..p as i64)
            .map(|r| lens_product_class(f.elem(r), f.elem(r)).unwrap())
            .collect();
        assert_eq!(diag.len(), 1);
    }
}

#[test]
fn integral_basis_sizes() {
    for k in 1..=20 {
        assert_eq!(
            kinvariant::cohomology::basis_of_degree(k).len(),
            kinvariant::cohomology::dim_cohomology(k).p_rank
        );
    }
}
