use std::collections::HashSet;

use fca_core::contrast::{contrast_reduce, coverage};
use fca_core::generate::random_context;
use fca_core::lattice::meets_support;
use fca_core::{
    brute_force_concepts, enumerate_concepts, enumerate_concepts_with, iceberg, join, meet,
    order_leq, parse_cxt, write_cxt, AttributeSet, ConceptLattice, FormalContext, MiningOptions,
    ObjectSet,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn small_context() -> impl Strategy<Value = FormalContext> {
    (0usize..=20, 0usize..=12, 0.1f64..0.9, any::<u64>())
        .prop_map(|(n, m, d, seed)| random_context(n, m, d, seed))
}

fn subset_of(dim: usize) -> impl Strategy<Value = Vec<usize>> {
    subsequence((0..dim).collect::<Vec<_>>(), 0..=dim)
}

fn context_with_subsets() -> impl Strategy<Value = (FormalContext, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>)> {
    small_context().prop_flat_map(|ctx| {
        let (n, m) = (ctx.object_count(), ctx.attribute_count());
        (Just(ctx), subset_of(n), subset_of(n), subset_of(m), subset_of(m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_operators_are_closures((ctx, a1, a2, b1, b2) in context_with_subsets()) {
        let a1 = ctx.object_set(a1);
        let a12 = a1.union(&ctx.object_set(a2));
        let b1 = ctx.attribute_set(b1);
        let b12 = b1.union(&ctx.attribute_set(b2));

        let ca = ctx.close_objects(&a1).unwrap();
        prop_assert!(a1.is_subset(&ca));
        prop_assert!(ca.is_subset(&ctx.close_objects(&a12).unwrap()));
        prop_assert_eq!(ctx.close_objects(&ca).unwrap(), ca.clone());

        let cb = ctx.close_attributes(&b1).unwrap();
        prop_assert!(b1.is_subset(&cb));
        prop_assert!(cb.is_subset(&ctx.close_attributes(&b12).unwrap()));
        prop_assert_eq!(ctx.close_attributes(&cb).unwrap(), cb.clone());
    }

    #[test]
    fn derivations_form_a_galois_connection((ctx, a1, a2, b1, b2) in context_with_subsets()) {
        let a1 = ctx.object_set(a1);
        let a12 = a1.union(&ctx.object_set(a2));
        let b1 = ctx.attribute_set(b1);
        let b12 = b1.union(&ctx.attribute_set(b2));

        prop_assert!(ctx.derive_extent(&a12).unwrap().is_subset(&ctx.derive_extent(&a1).unwrap()));
        prop_assert!(ctx.derive_intent(&b12).unwrap().is_subset(&ctx.derive_intent(&b1).unwrap()));

        let a_star = ctx.derive_extent(&a1).unwrap();
        let a_3 = ctx.derive_extent(&ctx.derive_intent(&a_star).unwrap()).unwrap();
        prop_assert_eq!(a_star, a_3);
        let b_star = ctx.derive_intent(&b1).unwrap();
        let b_3 = ctx.derive_intent(&ctx.derive_extent(&b_star).unwrap()).unwrap();
        prop_assert_eq!(b_star, b_3);
    }

    #[test]
    fn enumeration_matches_brute_force(ctx in small_context()) {
        let fast = enumerate_concepts(&ctx);
        prop_assert_eq!(&fast, &brute_force_concepts(&ctx).unwrap());
        for c in &fast {
            prop_assert!(c.is_valid_in(&ctx));
        }
        let intents: HashSet<&AttributeSet> = fast.iter().map(|c| c.intent()).collect();
        let extents: HashSet<&ObjectSet> = fast.iter().map(|c| c.extent()).collect();
        prop_assert_eq!(intents.len(), fast.len());
        prop_assert_eq!(extents.len(), fast.len());
    }

    #[test]
    fn enumeration_is_independent_of_thread_count(ctx in small_context()) {
        let one = enumerate_concepts_with(&ctx, &MiningOptions { threads: Some(1), max_concepts: None }).unwrap();
        let four = enumerate_concepts_with(&ctx, &MiningOptions { threads: Some(4), max_concepts: None }).unwrap();
        prop_assert_eq!(one, four);
    }

    #[test]
    fn cxt_round_trip(ctx in small_context()) {
        prop_assert_eq!(parse_cxt(&write_cxt(&ctx)).unwrap(), ctx);
    }

    #[test]
    fn lattice_laws(ctx in (0usize..=10, 0usize..=8, 0.1f64..0.9, any::<u64>())
        .prop_map(|(n, m, d, s)| random_context(n, m, d, s)))
    {
        let concepts = enumerate_concepts(&ctx);
        let members: HashSet<_> = concepts.iter().cloned().collect();
        for c1 in &concepts {
            for c2 in &concepts {
                let pair = [c1.clone(), c2.clone()];
                let m = meet(&ctx, &pair).unwrap();
                let j = join(&ctx, &pair).unwrap();
                prop_assert!(members.contains(&m));
                prop_assert!(members.contains(&j));
                prop_assert!(order_leq(&m, c1).unwrap() && order_leq(&m, c2).unwrap());
                prop_assert!(order_leq(c1, &j).unwrap() && order_leq(c2, &j).unwrap());
                prop_assert_eq!(&m, &meet(&ctx, &[c2.clone(), c1.clone()]).unwrap());
                prop_assert_eq!(&j, &join(&ctx, &[c2.clone(), c1.clone()]).unwrap());
                prop_assert_eq!(join(&ctx, &[c1.clone(), m.clone()]).unwrap(), c1.clone());
                prop_assert_eq!(meet(&ctx, &[c1.clone(), j.clone()]).unwrap(), c1.clone());
                if order_leq(c1, c2).unwrap() {
                    prop_assert!(c1.support_percent() <= c2.support_percent());
                }
            }
        }
        // Associativity on a sample of triples.
        for (i, a) in concepts.iter().enumerate().take(6) {
            for b in concepts.iter().skip(i).take(6) {
                for c in concepts.iter().rev().take(6) {
                    let left = meet(&ctx, &[meet(&ctx, &[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
                    let right = meet(&ctx, &[a.clone(), meet(&ctx, &[b.clone(), c.clone()]).unwrap()]).unwrap();
                    prop_assert_eq!(left, right);
                    let left = join(&ctx, &[join(&ctx, &[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
                    let right = join(&ctx, &[a.clone(), join(&ctx, &[b.clone(), c.clone()]).unwrap()]).unwrap();
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn covers_reduce_the_order(ctx in (0usize..=12, 0usize..=8, 0.1f64..0.9, any::<u64>())
        .prop_map(|(n, m, d, s)| random_context(n, m, d, s)))
    {
        let lattice = ConceptLattice::build(&ctx, enumerate_concepts(&ctx)).unwrap();
        let cs = lattice.concepts();
        let diagram = lattice.diagram();
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                prop_assert_eq!(diagram.reaches(i, j), order_leq(&cs[i], &cs[j]).unwrap());
            }
        }
        // No cover is implied by a two-step path.
        for &(lo, hi) in lattice.covers() {
            prop_assert!(lo != hi);
            for &mid in diagram.upper_covers(lo) {
                if mid != hi {
                    prop_assert!(!diagram.reaches(mid, hi));
                }
            }
        }
        prop_assert!(lattice.top().extent().is_full());
        for c in cs {
            prop_assert!(lattice.bottom().intent().is_superset(c.intent()));
        }
    }

    #[test]
    fn iceberg_is_upward_closed(ctx in small_context(), min in 0.0f64..=100.0) {
        let concepts = enumerate_concepts(&ctx);
        let kept = iceberg(&concepts, min);
        let kept_set: HashSet<_> = kept.iter().collect();
        for c in &concepts {
            prop_assert_eq!(kept_set.contains(c), meets_support(c, min));
        }
        for c in &kept {
            for d in &concepts {
                if order_leq(c, d).unwrap() {
                    prop_assert!(kept_set.contains(d));
                }
            }
        }
    }

    #[test]
    fn contrast_reduction_is_a_sound_filter(
        n_pos in 1usize..12, n_neg in 1usize..12, m in 1usize..8, d in 0.1f64..0.9, seed in any::<u64>(),
    ) {
        let pos = enumerate_concepts(&random_context(n_pos, m, d, seed));
        let neg = enumerate_concepts(&random_context(n_neg, m, d, seed ^ 0x9e37_79b9));
        let reduced = contrast_reduce(&pos, &neg).unwrap();
        let neg_intents: HashSet<_> = neg.iter().map(|c| c.intent()).collect();
        let mut cursor = pos.iter();
        for c in &reduced {
            prop_assert!(!neg_intents.contains(c.intent()));
            prop_assert!(cursor.any(|p| p == c), "reduced set is not an ordered subsequence");
        }
    }

    #[test]
    fn coverage_is_monotone(ctx in small_context().prop_filter("objects", |c| c.object_count() > 0), k in 0usize..6) {
        let concepts = enumerate_concepts(&ctx);
        let mut last = 0.0;
        for end in 0..=concepts.len().min(k + 1) {
            let cov = coverage(&concepts[..end], &ctx).unwrap();
            prop_assert!(cov >= last && (0.0..=100.0).contains(&cov));
            last = cov;
        }
    }
}
