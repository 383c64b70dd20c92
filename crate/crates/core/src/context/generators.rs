use fixedbitset::FixedBitSet;

use super::FormalContext;
use crate::error::{Error, Result};

/// The contranominal scale `(S, S, ≠)` of size `n`: every cross except the diagonal.
///
/// Its lattice is the full powerset of the `n` attributes and every
/// equivalence class is trivial.
pub fn contranominal(n: usize) -> Result<FormalContext> {
    if n == 0 {
        return Err(Error::invalid("contranominal scale needs n >= 1"));
    }
    let rows = (0..n)
        .map(|g| {
            let mut bits = FixedBitSet::with_capacity(n);
            bits.insert_range(..);
            bits.set(g, false);
            bits
        })
        .collect();
    Ok(FormalContext::from_row_bits(
        (0..n).map(|g| format!("g{g}")).collect(),
        (0..n).map(|m| format!("m{m}")).collect(),
        rows,
    ))
}

/// Context with one passkey but exponentially many keys for the top itemset `M`.
///
/// Objects `g0..=gn`, attributes `m0..=m(2n)`; `g0' = M` and
/// `gi' = M ∖ {m0, mi, m(n+i)}` for `i ≥ 1`.
pub fn prop7_context(n: usize) -> Result<FormalContext> {
    if n == 0 {
        return Err(Error::invalid("prop7 context needs n >= 1"));
    }
    let width = 2 * n + 1;
    let mut rows = Vec::with_capacity(n + 1);
    let mut full = FixedBitSet::with_capacity(width);
    full.insert_range(..);
    rows.push(full.clone());
    for i in 1..=n {
        let mut row = full.clone();
        row.set(0, false);
        row.set(i, false);
        row.set(n + i, false);
        rows.push(row);
    }
    Ok(FormalContext::from_row_bits(
        (0..=n).map(|g| format!("g{g}")).collect(),
        (0..width).map(|m| format!("m{m}")).collect(),
        rows,
    ))
}
