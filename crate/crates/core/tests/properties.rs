mod common;

use clustersync::arith::{indexed_names, all_permutations, LaurentPoly, Permutation, RationalFn};
use clustersync::explore::word_text;
use clustersync::fgc::FgcSeed;
use clustersync::gca::{DegreeR, GcaSeed};
use clustersync::run::{parse_word, reduce_word};
use clustersync::seed::{CoeffKind, ExchangeMatrix, Seed};
use clustersync::semifield::{SemifieldKind, SfElem};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-2i64..3, -2i64..3), -3i64..4), 0..4).prop_map(|terms| {
        LaurentPoly::from_terms(2, terms.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c))))
    })
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn tropical() -> impl Strategy<Value = SfElem> {
    prop::collection::vec(-3i64..4, 2).prop_map(SfElem::Tropical)
}

/// Universal elements built from generators and positive constants.
fn universal() -> impl Strategy<Value = SfElem> {
    let k = SemifieldKind::Universal(2);
    (0usize..2, 1i64..4, -2i64..3, 1u32..3).prop_map(move |(g, c, e, steps)| {
        let mut v = k.gen(g).pow(e);
        for _ in 0..steps {
            v = v.oplus(&k.positive_integer(&BigInt::from(c))).unwrap();
        }
        v
    })
}

fn exchange_matrix() -> impl Strategy<Value = ExchangeMatrix> {
    (2usize..=4, any::<u64>()).prop_map(|(n, seed)| {
        let rows = common::random_skew_symmetrizable(&mut ChaCha8Rng::seed_from_u64(seed), n);
        ExchangeMatrix::from_rows(&rows).unwrap()
    })
}

fn reduced(word: Vec<usize>, n: usize) -> Vec<usize> {
    reduce_word(&word.into_iter().map(|k| k % n).collect::<Vec<_>>())
}

fn perm(n: usize, i: usize) -> Permutation {
    let all = all_permutations(n);
    all[i % all.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(2), a.clone());
    }

    #[test]
    fn rational_field_axioms(a in poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (a, b, c) = (RationalFn::from_poly(&a), RationalFn::from_poly(&b), RationalFn::from_poly(&c));
        let q = a.div(&b).unwrap();
        prop_assert!(q.mul(&b).equals(&a));
        prop_assert!(a.add(&q).equals(&q.add(&a)));
        let lhs = q.mul(&c.add(&b));
        let rhs = q.mul(&c).add(&q.mul(&b));
        prop_assert!(lhs.equals(&rhs));
        prop_assert!(b.inv().unwrap().mul(&b).equals(&RationalFn::one(2)));
    }

    #[test]
    fn text_round_trips(a in poly(), b in nonzero_poly()) {
        let names = indexed_names("x", 2);
        prop_assert_eq!(LaurentPoly::parse(&a.to_text(&names), &names).unwrap(), a.clone());
        let r = RationalFn::from_parts(&a, &b).unwrap();
        prop_assert!(RationalFn::parse(&r.to_text(&names), &names).unwrap().equals(&r));
    }

    #[test]
    fn tropical_semifield_axioms(a in tropical(), b in tropical(), c in tropical()) {
        prop_assert_eq!(a.oplus(&b).unwrap(), b.oplus(&a).unwrap());
        prop_assert_eq!(a.oplus(&b).unwrap().oplus(&c).unwrap(), a.oplus(&b.oplus(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let lhs = a.mul(&b.oplus(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().oplus(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.mul(&a.inv()).unwrap().is_one());
    }

    #[test]
    fn universal_semifield_axioms(a in universal(), b in universal(), c in universal()) {
        prop_assert_eq!(a.oplus(&b).unwrap(), b.oplus(&a).unwrap());
        let lhs = a.mul(&b.oplus(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().oplus(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.div(&a).unwrap().is_one());
        let trop = SemifieldKind::Tropical(2);
        // The universal property: a homomorphism to the tropical semifield
        // respects both operations.
        let images = [trop.gen(0), trop.gen(1)];
        let h = |x: &SfElem| x.hom(trop, &images).unwrap();
        prop_assert_eq!(h(&a.oplus(&b).unwrap()), h(&a).oplus(&h(&b)).unwrap());
        prop_assert_eq!(h(&a.mul(&b).unwrap()), h(&a).mul(&h(&b)).unwrap());
    }

    #[test]
    fn permutations_act_as_a_group(i in 0usize..24, j in 0usize..24) {
        let (a, b) = (perm(4, i), perm(4, j));
        let v = vec![10, 20, 30, 40];
        prop_assert_eq!(a.compose(&b).act(&v), a.act(&b.act(&v)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn words_reduce_and_parse(word in prop::collection::vec(0usize..3, 0..10)) {
        let r = reduce_word(&word);
        prop_assert_eq!(reduce_word(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != p[1]));
        prop_assert_eq!(parse_word(&word_text(&r), 3).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn seed_mutation_is_an_involution(
        b in exchange_matrix(),
        coeff in prop::sample::select(vec![CoeffKind::Trivial, CoeffKind::Principal, CoeffKind::YPrincipal]),
        word in prop::collection::vec(0usize..4, 0..4),
        k in 0usize..4,
    ) {
        let n = b.n();
        let s = reduced(word, n).into_iter().fold(Seed::initial(b, coeff), |s, k| s.mutate(k).unwrap());
        let k = k % n;
        prop_assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s.clone());
        let y = s.yseed();
        prop_assert_eq!(y.mutate(k).unwrap().mutate(k).unwrap(), y);
    }

    #[test]
    fn seed_mutation_commutes_with_relabeling(
        b in exchange_matrix(),
        word in prop::collection::vec(0usize..4, 0..4),
        k in 0usize..4,
        p in 0usize..24,
    ) {
        let n = b.n();
        let s = reduced(word, n).into_iter().fold(Seed::initial(b, CoeffKind::Principal), |s, k| s.mutate(k).unwrap());
        let (k, sigma) = (k % n, perm(n, p));
        prop_assert_eq!(s.permute(&sigma).mutate(sigma.apply(k)).unwrap(), s.mutate(k).unwrap().permute(&sigma));
        let y = s.yseed();
        prop_assert_eq!(y.permute(&sigma).mutate(sigma.apply(k)).unwrap(), y.mutate(k).unwrap().permute(&sigma));
    }

    #[test]
    fn fgc_mutation_is_an_involution_and_commutes_with_relabeling(
        b in exchange_matrix(),
        word in prop::collection::vec(0usize..4, 0..5),
        k in 0usize..4,
        p in 0usize..24,
    ) {
        let n = b.n();
        let g = FgcSeed::along(b.b(), &reduced(word, n)).unwrap();
        let (k, sigma) = (k % n, perm(n, p));
        prop_assert_eq!(g.mutate(k).unwrap().mutate(k).unwrap(), g.clone());
        prop_assert_eq!(g.permute(&sigma).mutate(sigma.apply(k)).unwrap(), g.mutate(k).unwrap().permute(&sigma));
    }

    #[test]
    fn gca_mutation_is_an_involution_and_commutes_with_relabeling(
        b in exchange_matrix(),
        r in prop::collection::vec(1usize..3, 4),
        coeff in prop::sample::select(vec![CoeffKind::Trivial, CoeffKind::Principal, CoeffKind::YPrincipal]),
        word in prop::collection::vec(0usize..4, 0..3),
        k in 0usize..4,
        p in 0usize..24,
    ) {
        let n = b.n();
        let r = DegreeR::new(r[..n].to_vec()).unwrap();
        let s0 = GcaSeed::initial(b, r, coeff, None).unwrap();
        let s = reduced(word, n).into_iter().fold(s0, |s, k| s.mutate(k).unwrap());
        let (k, sigma) = (k % n, perm(n, p));
        prop_assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s.clone());
        prop_assert_eq!(s.permute(&sigma).mutate(sigma.apply(k)).unwrap(), s.mutate(k).unwrap().permute(&sigma));
    }
}
