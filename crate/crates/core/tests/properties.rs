use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pgroup_witness::arith::{padic_exp, padic_log, unit_power_valuation, vp, PadicInt, Valuation};
use pgroup_witness::dpoly::{
    nilpotent_independence_check, rank_mod_p, FpLinearMap, GroupRingElem, IntPoly,
};
use pgroup_witness::groups::Group;
use pgroup_witness::metacyclic::{
    kummer_action, mc_inverse, mc_mul, mc_power, MetacyclicElement, MetacyclicGroup,
    MetacyclicParams,
};
use pgroup_witness::obstruction::GridSpec;
use pgroup_witness::unipotent::UnipotentGroup;
use pgroup_witness::words::{evaluate, parse_word, render_word, Alphabet, Atom, Term, Word};

const NAMES: [&str; 4] = ["x", "y1", "y2", "y3"];

fn word() -> impl Strategy<Value = Word> {
    let leaf =
        (0..NAMES.len(), exponent()).prop_map(|(i, e)| Word::gen_power(NAMES[i], e).unwrap());
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop::collection::vec(
            prop_oneof![
                (0..NAMES.len(), exponent()).prop_map(|(i, exp)| Term {
                    atom: Atom::Gen(NAMES[i].into()),
                    exp
                }),
                (inner.clone(), inner, exponent()).prop_map(|(a, b, exp)| Term {
                    atom: Atom::Comm(Box::new(a), Box::new(b)),
                    exp
                }),
            ],
            1..4,
        )
        .prop_map(|terms| Word::from_terms(terms).unwrap())
    })
}

fn exponent() -> impl Strategy<Value = i64> {
    prop_oneof![
        (-30i64..=30).prop_filter("nonzero", |e| *e != 0),
        Just(1i64)
    ]
}

fn metacyclic() -> impl Strategy<Value = MetacyclicGroup> {
    prop_oneof![
        Just((3u64, 1u32, 2u32)),
        Just((3, 1, 3)),
        Just((3, 2, 4)),
        Just((5, 1, 2)),
        Just((5, 2, 3)),
        Just((2, 2, 4)),
    ]
    .prop_map(|(p, k, m)| MetacyclicGroup::new(MetacyclicParams::new(p, k, m).unwrap()))
}

fn element(g: &MetacyclicGroup, a: i128, b: i128) -> MetacyclicElement {
    g.element(a, b)
}

fn assignment(g: &MetacyclicGroup, exps: &[(i128, i128)]) -> BTreeMap<String, MetacyclicElement> {
    NAMES
        .iter()
        .zip(exps)
        .map(|(n, (a, b))| (n.to_string(), element(g, *a, *b)))
        .collect()
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(w in word()) {
        let alphabet = Alphabet::standard(3);
        let text = render_word(&w);
        prop_assert_eq!(parse_word(&text, &alphabet).unwrap(), w);
    }

    #[test]
    fn parsers_never_panic(text in "[xy123\\[\\], ^+\\-;=.a-z0-9]{0,40}") {
        let _ = parse_word(&text, &Alphabet::standard(3));
        let _ = GridSpec::parse(&text);
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        g in metacyclic(),
        a in word(),
        b in word(),
        exps in prop::collection::vec((0i128..1000, 0i128..1000), 4),
    ) {
        let asg = assignment(&g, &exps);
        let ea = evaluate(&a, &asg, &g).unwrap();
        let eb = evaluate(&b, &asg, &g).unwrap();
        prop_assert_eq!(evaluate(&a.concat(&b), &asg, &g).unwrap(), g.mul(&ea, &eb));
        let comm = Word::commutator(a, b);
        prop_assert_eq!(evaluate(&comm, &asg, &g).unwrap(), g.commutator(&ea, &eb));
    }

    #[test]
    fn metacyclic_multiplication_is_a_group_law(
        g in metacyclic(),
        e in prop::collection::vec((-500i128..500, -500i128..500), 3),
    ) {
        let [x, y, z] = [0, 1, 2].map(|i| element(&g, e[i].0, e[i].1));
        let xy_z = mc_mul(&mc_mul(&x, &y).unwrap(), &z).unwrap();
        let x_yz = mc_mul(&x, &mc_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert!(mc_mul(&x, &mc_inverse(&x)).unwrap().is_identity());
    }

    #[test]
    fn powers_add_exponents(g in metacyclic(), a in 0i128..500, b in 0i128..500, e1 in -2000i64..2000, e2 in -2000i64..2000) {
        let x = element(&g, a, b);
        let lhs = mc_power(&x, &BigInt::from(e1 + e2));
        let rhs = mc_mul(&mc_power(&x, &BigInt::from(e1)), &mc_power(&x, &BigInt::from(e2))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kummer_action_is_multiplicative(g in metacyclic(), e in prop::collection::vec((0i128..500, 0i128..500), 2)) {
        let x = element(&g, e[0].0, e[0].1);
        let y = element(&g, e[1].0, e[1].1);
        let n = g.params().tau_order();
        let composed = kummer_action(&x).compose(&kummer_action(&y), n);
        prop_assert_eq!(kummer_action(&mc_mul(&x, &y).unwrap()), composed);
    }

    #[test]
    fn valuation_is_additive(p in prop::sample::select(vec![2u64, 3, 5, 7]), a in 1i64..1_000_000, b in 1i64..1_000_000) {
        let (va, vb) = (vp(&BigInt::from(a), p).unwrap(), vp(&BigInt::from(b), p).unwrap());
        let vab = vp(&(BigInt::from(a) * b), p).unwrap();
        match (va, vb, vab) {
            (Valuation::Finite(x), Valuation::Finite(y), Valuation::Finite(z)) => prop_assert_eq!(x + y, z),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn unit_power_valuation_formula(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        s in 0u32..3,
        unit in 1i64..200,
        n in 1i64..300,
    ) {
        prop_assume!(unit % p as i64 != 0);
        let floor = if p == 2 { 2 } else { 1 };
        let alpha = BigInt::from(p).pow(floor + s) * unit;
        let expected = (floor + s) as u64 + vp(&BigInt::from(n), p).unwrap().finite().unwrap();
        prop_assert_eq!(unit_power_valuation(p, &alpha, &BigInt::from(n)).unwrap(), expected);
    }

    #[test]
    fn log_and_exp_are_inverse(p in prop::sample::select(vec![3u64, 5, 7]), precision in 2u32..16, t in 0u64..1_000_000) {
        let x = PadicInt::new(p, precision, BigInt::from(p) * t).unwrap();
        let one_plus = PadicInt::new(p, precision, BigInt::from(p) * t + 1).unwrap();
        prop_assert_eq!(padic_log(&padic_exp(&x).unwrap()).unwrap(), x);
        prop_assert_eq!(padic_exp(&padic_log(&one_plus).unwrap()).unwrap(), one_plus);
    }

    #[test]
    fn log_turns_products_into_sums(p in prop::sample::select(vec![3u64, 5]), s in 0u64..100_000, t in 0u64..100_000) {
        let n = 10;
        let a = PadicInt::new(p, n, BigInt::from(p) * s + 1).unwrap();
        let b = PadicInt::new(p, n, BigInt::from(p) * t + 1).unwrap();
        let lhs = padic_log(&a.mul(&b).unwrap()).unwrap();
        let rhs = padic_log(&a).unwrap().add(&padic_log(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_ring_is_a_commutative_ring(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        c in prop::collection::vec(prop::collection::vec(-50i64..50, 7), 3),
    ) {
        let e: Vec<GroupRingElem> = c
            .iter()
            .map(|v| GroupRingElem::new(p, v[..p as usize].iter().map(|x| BigInt::from(*x)).collect()))
            .collect();
        prop_assert_eq!(e[0].mul(&e[1]).mul(&e[2]), e[0].mul(&e[1].mul(&e[2])));
        prop_assert_eq!(e[0].mul(&e[1]), e[1].mul(&e[0]));
        prop_assert_eq!(e[0].mul(&e[1].add(&e[2])), e[0].mul(&e[1]).add(&e[0].mul(&e[2])));
        prop_assert_eq!(e[0].mul(&GroupRingElem::one(p)), e[0].clone());
    }

    #[test]
    fn evaluation_at_sigma_is_a_ring_map(
        p in prop::sample::select(vec![3u64, 5, 7]),
        f in prop::collection::vec(-20i64..20, 1..12),
        g in prop::collection::vec(-20i64..20, 1..12),
    ) {
        let (f, g) = (IntPoly::from_i64(&f), IntPoly::from_i64(&g));
        prop_assert_eq!(f.mul(&g).eval_at_sigma(p), f.eval_at_sigma(p).mul(&g.eval_at_sigma(p)));
        prop_assert_eq!(f.add(&g).eval_at_sigma(p), f.eval_at_sigma(p).add(&g.eval_at_sigma(p)));
    }

    #[test]
    fn unipotent_inverse_and_levels(n in 2usize..7, p in prop::sample::select(vec![2u64, 3, 5]), seed: u64) {
        let g = UnipotentGroup::new(n, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = g.random_element(&mut rng);
        let b = g.random_element(&mut rng);
        prop_assert!(a.mul(&a.inverse()).is_identity());
        let comm = a.mul(&b).mul(&a.inverse()).mul(&b.inverse());
        prop_assert!(comm.level() >= (a.level() + b.level()).min(n));
    }

    #[test]
    fn orbit_independence_matches_rank(p in prop::sample::select(vec![3u64, 5]), d in 1usize..10, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = FpLinearMap::random_nilpotent(p, d, &mut rng).unwrap();
        let v: Vec<u64> = (0..d).map(|i| (seed >> (i % 60)) % p).collect();
        prop_assume!(v.iter().any(|x| *x != 0));
        let mut orbit = vec![v.clone()];
        while let Some(next) = Some(n.apply(orbit.last().unwrap())).filter(|w| w.iter().any(|x| *x != 0)) {
            orbit.push(next);
        }
        let k = orbit.len() - 1;
        prop_assert!(nilpotent_independence_check(&n, &v, k).unwrap());
        prop_assert_eq!(rank_mod_p(&orbit, p), k + 1);
    }
}
