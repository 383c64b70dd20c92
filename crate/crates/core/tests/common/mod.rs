#![allow(dead_code)]

use gdpm_core::{FormalContext, ItemSet, ObjectSet};
use proptest::prelude::*;
use rand::Rng;

/// Six objects over attributes a..f.
pub fn running_example() -> FormalContext {
    let rows: [&[u32]; 6] = [
        &[0, 1, 2],
        &[0, 2, 3],
        &[0, 3, 4],
        &[2, 3],
        &[1, 3, 4, 5],
        &[1, 4, 5],
    ];
    FormalContext::from_rows(
        (1..=6).map(|g| format!("g{g}")).collect(),
        "abcdef".chars().map(String::from).collect(),
        rows,
    )
    .unwrap()
}

/// `"bdef"` -> `{1, 3, 4, 5}`.
pub fn items(s: &str) -> ItemSet {
    ItemSet::from_unsorted(s.bytes().map(|c| u32::from(c - b'a')))
}

pub fn objects(ids: &[u32]) -> ObjectSet {
    ObjectSet::from_unsorted(ids.iter().copied())
}

/// A context with a random shape and a per-context density.
pub fn random_context<R: Rng>(
    rng: &mut R,
    max_objects: usize,
    max_attributes: usize,
) -> FormalContext {
    let n_g = rng.gen_range(0..=max_objects);
    let n_m = rng.gen_range(0..=max_attributes);
    let density: f64 = rng.gen_range(0.05..0.95);
    let rows: Vec<Vec<u32>> = (0..n_g)
        .map(|_| (0..n_m as u32).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    FormalContext::from_unnamed_rows(n_m, rows).unwrap()
}

/// Proptest strategy for small contexts.
pub fn arb_context(
    max_objects: usize,
    max_attributes: usize,
) -> impl Strategy<Value = FormalContext> {
    (0..=max_attributes, 0..=max_objects).prop_flat_map(|(n_m, n_g)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n_m), n_g).prop_map(
            move |rows| {
                let rows: Vec<Vec<u32>> = rows
                    .iter()
                    .map(|r| (0..n_m as u32).filter(|&m| r[m as usize]).collect())
                    .collect();
                FormalContext::from_unnamed_rows(n_m, rows).unwrap()
            },
        )
    })
}

/// A context plus an item subset of it.
pub fn arb_context_and_items(
    max_objects: usize,
    max_attributes: usize,
) -> impl Strategy<Value = (FormalContext, ItemSet)> {
    arb_context(max_objects, max_attributes).prop_flat_map(|ctx| {
        let n = ctx.n_attributes();
        (Just(ctx), prop::collection::vec(any::<bool>(), n)).prop_map(|(ctx, mask)| {
            let b = ItemSet::from_unsorted((0..mask.len() as u32).filter(|&m| mask[m as usize]));
            (ctx, b)
        })
    })
}
