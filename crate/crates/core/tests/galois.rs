mod common;

use common::{arb_context, arb_context_and_items};
use gdpm_core::context::{binarize, BinarizationConfig, ColumnRule, ManyValuedTable, ValueList};
use gdpm_core::{oracle, ItemSet, ObjectSet};
use proptest::prelude::*;

proptest! {
    #[test]
    fn closure_is_extensive_and_idempotent((ctx, b) in arb_context_and_items(10, 10)) {
        let c = ctx.closure(&b).unwrap();
        prop_assert!(b.is_subset(&c));
        prop_assert_eq!(ctx.closure(&c).unwrap(), c.clone());
        prop_assert!(oracle::is_closed(&ctx, &c));
    }

    #[test]
    fn derivations_are_antitone((ctx, b) in arb_context_and_items(10, 10)) {
        let ext = ctx.extent(&b).unwrap();
        for m in 0..ctx.n_attributes() as u32 {
            let bigger = b.with(m);
            let smaller_ext = ctx.extent(&bigger).unwrap();
            prop_assert!(smaller_ext.is_subset(&ext));
        }
        let int = ctx.intent(&ext).unwrap();
        for g in ext.iter() {
            let fewer = ext.without(g);
            prop_assert!(int.is_subset(&ctx.intent(&fewer).unwrap()));
        }
    }

    #[test]
    fn closure_is_monotone((ctx, b) in arb_context_and_items(8, 8)) {
        let c = ctx.closure(&b).unwrap();
        for m in 0..ctx.n_attributes() as u32 {
            prop_assert!(c.is_subset(&ctx.closure(&b.with(m)).unwrap()));
        }
    }

    #[test]
    fn extent_matches_cellwise_definition((ctx, b) in arb_context_and_items(10, 10)) {
        let expected: ObjectSet = (0..ctx.n_objects() as u32)
            .filter(|&g| b.iter().all(|m| ctx.has(g, m)))
            .collect();
        prop_assert_eq!(ctx.extent(&b).unwrap(), expected);
    }

    #[test]
    fn intent_of_empty_set_is_everything(ctx in arb_context(6, 6)) {
        prop_assert_eq!(
            ctx.intent(&ObjectSet::empty()).unwrap(),
            ItemSet::full(ctx.n_attributes())
        );
    }

    #[test]
    fn permutation_preserves_closed_count(ctx in arb_context(8, 8)) {
        let (sorted, perm) = ctx.sorted_by_frequency_desc();
        prop_assert_eq!(
            oracle::all_closed(&sorted).unwrap().len(),
            oracle::all_closed(&ctx).unwrap().len()
        );
        let supports = sorted.attribute_supports();
        prop_assert!(supports.windows(2).all(|w| w[0] >= w[1]));
        let mut p = perm.clone();
        p.sort_unstable();
        prop_assert_eq!(p, (0..ctx.n_attributes() as u32).collect::<Vec<_>>());
    }

    /// Binarizing a categorical column with `values: auto` sets exactly one bit per row.
    #[test]
    fn categorical_binarization_is_one_hot(values in prop::collection::vec(0u8..4, 1..12)) {
        let table = ManyValuedTable {
            object_names: (0..values.len()).map(|g| g.to_string()).collect(),
            columns: vec!["x".into()],
            rows: values.iter().map(|v| vec![format!("v{v}")]).collect(),
        };
        let cfg = BinarizationConfig::new(
            [("x".to_string(), ColumnRule::Values(ValueList::Auto))].into(),
        );
        let ctx = binarize(&table, &cfg).unwrap();
        let mut distinct = values.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(ctx.n_attributes(), distinct.len());
        for g in 0..ctx.n_objects() as u32 {
            prop_assert_eq!(ctx.row_items(g).len(), 1);
        }
    }

    /// Interval binarization agrees with a direct membership test.
    #[test]
    fn interval_binarization_agrees(xs in prop::collection::vec(0.0f64..10.0, 1..12)) {
        let edges = [0.0, 2.5, 5.0, 10.0];
        let table = ManyValuedTable {
            object_names: (0..xs.len()).map(|g| g.to_string()).collect(),
            columns: vec!["x".into()],
            rows: xs.iter().map(|x| vec![x.to_string()]).collect(),
        };
        let rule = ColumnRule::Intervals(edges.windows(2).map(|w| [w[0], w[1]]).collect());
        let cfg = BinarizationConfig::new([("x".to_string(), rule)].into());
        let ctx = binarize(&table, &cfg).unwrap();
        for (g, x) in xs.iter().enumerate() {
            let expected = edges.windows(2).position(|w| w[0] <= *x && *x < w[1]).unwrap() as u32;
            prop_assert_eq!(ctx.row_items(g as u32).into_vec(), vec![expected]);
        }
    }
}
