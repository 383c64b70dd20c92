//! Workloads shared by the benchmarks in `benches/`.

use gdpm_core::FormalContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `objects x attributes` context with independent cells set with probability `density`.
pub fn random_context(seed: u64, objects: usize, attributes: usize, density: f64) -> FormalContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<u32>> = (0..objects)
        .map(|_| {
            (0..attributes as u32)
                .filter(|_| rng.gen_bool(density))
                .collect()
        })
        .collect();
    FormalContext::from_unnamed_rows(attributes, rows).expect("rows are in range")
}

/// Rows drawn from a few overlapping templates, closer to binarized data than uniform noise.
pub fn clustered_context(seed: u64, objects: usize, attributes: usize) -> FormalContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let templates: Vec<Vec<bool>> = (0..6)
        .map(|_| (0..attributes).map(|_| rng.gen_bool(0.4)).collect())
        .collect();
    let rows: Vec<Vec<u32>> = (0..objects)
        .map(|_| {
            let t = &templates[rng.gen_range(0..templates.len())];
            (0..attributes as u32)
                .filter(|&m| t[m as usize] != rng.gen_bool(0.08))
                .collect()
        })
        .collect();
    FormalContext::from_unnamed_rows(attributes, rows).expect("rows are in range")
}
