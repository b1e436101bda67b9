use equilog::gradedrep::{check_strong_elc, check_strong_elc_quadruples, graded_tensor, GradedRep};
use equilog::linalg::Arithmetic;
use equilog::presentations::{build_ring, QuotientEngine, RingId};
use equilog::stability::{instantiate, lambda_set, pattern_tensor, unpad, StablePattern};
use equilog::symcore::{decompose, dimension, murnaghan_nakayama, partitions, IrrDecomposition, Partition};
use proptest::prelude::*;

fn partition_of(n: usize) -> impl Strategy<Value = Partition> {
    let ps = partitions(n);
    (0..ps.len()).prop_map(move |i| ps[i].clone())
}

fn decomposition(n: usize, max_mult: u64) -> impl Strategy<Value = IrrDecomposition> {
    let ps = partitions(n);
    proptest::collection::vec(0..=max_mult, ps.len())
        .prop_map(move |m| IrrDecomposition::from_pairs(n, ps.iter().cloned().zip(m)).unwrap())
}

fn pattern(d: usize) -> impl Strategy<Value = StablePattern> {
    let ls = lambda_set(d);
    proptest::collection::vec(0..3u64, ls.len())
        .prop_map(move |m| StablePattern::new(d, ls.iter().cloned().zip(m).collect()).unwrap())
}

/// V^0 trivial, V^1 and V^2 arbitrary: strongly log-concave in every degree
/// exactly when V^2 ⊂ V^1 ⊗ V^1.
fn short_rep(n: usize) -> impl Strategy<Value = GradedRep> {
    (decomposition(n, 2), decomposition(n, 1)).prop_map(move |(v1, v2)| {
        GradedRep::from_pieces(n, [(0, IrrDecomposition::trivial(n)), (1, v1), (2, v2)]).unwrap()
    })
}

fn elc_through(v: &GradedRep, m: usize) -> bool {
    (0..=m).all(|k| check_strong_elc(v, k).holds())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimension_two_ways((n, l) in (1..=10usize).prop_flat_map(|n| (Just(n), partition_of(n)))) {
        let identity = Partition::new(vec![1; n]);
        prop_assert_eq!(murnaghan_nakayama(&l, &identity).unwrap(), dimension(&l) as i64);
    }

    #[test]
    fn character_round_trip(dec in (1..=7usize).prop_flat_map(|n| decomposition(n, 4))) {
        prop_assert_eq!(decompose(&dec.character()).unwrap(), dec);
    }

    #[test]
    fn kronecker_is_commutative_with_unit(
        (a, b) in (1..=6usize).prop_flat_map(|n| (decomposition(n, 2), decomposition(n, 2)))
    ) {
        let ab = a.kronecker(&b).unwrap();
        prop_assert_eq!(&ab, &b.kronecker(&a).unwrap());
        prop_assert_eq!(ab.dimension(), a.dimension() * b.dimension());
        prop_assert_eq!(a.kronecker(&IrrDecomposition::trivial(a.n())).unwrap(), a);
    }

    #[test]
    fn restriction_keeps_dimension(dec in (2..=8usize).prop_flat_map(|n| decomposition(n, 3))) {
        prop_assert_eq!(dec.restrict().unwrap().dimension(), dec.dimension());
    }

    #[test]
    fn unpad_inverts_instantiate((p, extra) in (0..=5usize).prop_flat_map(|d| (pattern(d), 0..3usize))) {
        let n = p.d.max(1) + extra;
        prop_assert_eq!(unpad(&instantiate(&p, n).unwrap(), p.d).unwrap(), p);
    }

    #[test]
    fn pattern_tensor_matches_kronecker(
        (p, q, extra) in (0..=3usize, 0..=3usize).prop_flat_map(|(d, e)| (pattern(d), pattern(e), 0..2usize))
    ) {
        let pq = pattern_tensor(&p, &q).unwrap();
        let n = (p.d + q.d).max(1) + extra;
        let direct = instantiate(&p, n).unwrap().kronecker(&instantiate(&q, n).unwrap()).unwrap();
        prop_assert_eq!(instantiate(&pq, n).unwrap(), direct);
    }

    #[test]
    fn tensor_preserves_strong_elc((v, w) in (2..=4usize).prop_flat_map(|n| (short_rep(n), short_rep(n)))) {
        prop_assume!(elc_through(&v, 4) && elc_through(&w, 4));
        let vw = graded_tensor(&v, &w).unwrap();
        for m in 0..=8 {
            prop_assert!(check_strong_elc(&vw, m).holds(), "m = {}", m);
        }
    }

    #[test]
    fn adjacent_links_imply_all_pairs((v, w) in (2..=4usize).prop_flat_map(|n| (short_rep(n), short_rep(n)))) {
        let vw = graded_tensor(&v, &w).unwrap();
        for m in 0..=8 {
            if check_strong_elc(&vw, m).holds() {
                prop_assert!(check_strong_elc_quadruples(&vw, m).holds(), "m = {}", m);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn arithmetics_agree(
        ring in prop::sample::select(vec![RingId::A, RingId::B, RingId::C, RingId::D, RingId::OT, RingId::M, RingId::R]),
        n in 2..=5usize,
    ) {
        let run = |arith| {
            let mut engine = QuotientEngine::new(build_ring(ring, n, None).unwrap(), arith).unwrap();
            engine.graded_character(4).unwrap()
        };
        prop_assert_eq!(run(Arithmetic::Rational), run(Arithmetic::Multimodular));
    }
}
