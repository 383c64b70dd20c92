//! Brute-force ground truth for small contexts.
//!
//! Everything here is computed by plain subset enumeration over bit masks,
//! reading the incidence relation one cell at a time. None of it shares code
//! with the miner's bitset derivations. Inputs beyond the size guards are
//! refused outright instead of being approximated.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::context::{prop7_context, FormalContext};
use crate::error::{Error, Result};
use crate::sets::{ItemSet, ObjectSet};

/// Largest attribute set whose powerset [`all_closed`] will enumerate.
pub const MAX_ATTRIBUTES: usize = 20;
/// Largest closed itemset whose subsets the class scans will enumerate.
pub const MAX_CLASS_SIZE: usize = 24;

/// Rows restricted to a list of attributes, as bit masks over positions in that list.
fn row_masks(ctx: &FormalContext, attrs: &[u32]) -> Vec<u32> {
    (0..ctx.n_objects() as u32)
        .map(|g| {
            attrs
                .iter()
                .enumerate()
                .filter(|&(_, &m)| ctx.has(g, m))
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect()
}

/// Extent of `mask` as a bit vector over objects.
fn extent_of(rows: &[u32], mask: u32) -> Vec<bool> {
    rows.iter().map(|&r| r & mask == mask).collect()
}

fn mask_to_items(attrs: &[u32], mask: u32) -> ItemSet {
    ItemSet::from_unsorted(
        attrs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &m)| m),
    )
}

/// All masks over `n` bits with exactly `k` bits set, ascending.
fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit: u64 = 1 << n;
    let mut next: Option<u64> = if k > n { None } else { Some((1u64 << k) - 1) };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as u32)
    })
}

fn guard(size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::OracleLimit { size, limit })
    } else {
        Ok(())
    }
}

/// Every closed itemset `B''`, `B ⊆ M`.
pub fn all_closed(ctx: &FormalContext) -> Result<BTreeSet<ItemSet>> {
    let n = ctx.n_attributes();
    guard(n, MAX_ATTRIBUTES)?;
    let attrs: Vec<u32> = (0..n as u32).collect();
    let rows = row_masks(ctx, &attrs);
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut closed = BTreeSet::new();
    for mask in 0..=full {
        let int = rows
            .iter()
            .filter(|&&r| r & mask == mask)
            .fold(full, |acc, &r| acc & r);
        closed.insert(mask_to_items(&attrs, int));
        if mask == full {
            break;
        }
    }
    Ok(closed)
}

/// Is `b` equal to its closure? Checked cell by cell.
pub fn is_closed(ctx: &FormalContext, b: &ItemSet) -> bool {
    let objects: Vec<u32> = (0..ctx.n_objects() as u32)
        .filter(|&g| b.iter().all(|m| ctx.has(g, m)))
        .collect();
    (0..ctx.n_attributes() as u32)
        .filter(|m| !b.contains(*m))
        .all(|m| objects.iter().any(|&g| !ctx.has(g, m)))
}

/// Members, keys and passkeys of the equivalence class of a closed itemset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceClassReport {
    pub closed: ItemSet,
    /// Every subset of `closed` with the same extent, ascending by size then lexicographically.
    pub members: Vec<ItemSet>,
    /// Inclusion-minimal members.
    pub keys: Vec<ItemSet>,
    /// Minimum-size keys.
    pub passkeys: Vec<ItemSet>,
    pub extent: ObjectSet,
}

impl EquivalenceClassReport {
    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

struct ClassScan {
    attrs: Vec<u32>,
    rows: Vec<u32>,
    target: Vec<bool>,
}

impl ClassScan {
    fn new(ctx: &FormalContext, closed: &ItemSet) -> Result<Self> {
        if closed
            .max_id()
            .is_some_and(|m| m as usize >= ctx.n_attributes())
        {
            return Err(Error::invalid("attribute id out of range"));
        }
        guard(closed.len(), MAX_CLASS_SIZE)?;
        if !is_closed(ctx, closed) {
            return Err(Error::invalid(format!(
                "{} is not a closed itemset",
                closed.display(ctx.attribute_names())
            )));
        }
        let attrs = closed.as_slice().to_vec();
        let rows = row_masks(ctx, &attrs);
        let full = if attrs.is_empty() {
            0
        } else {
            u32::MAX >> (32 - attrs.len())
        };
        let target = extent_of(&rows, full);
        Ok(Self {
            attrs,
            rows,
            target,
        })
    }

    fn generates(&self, mask: u32) -> bool {
        self.rows
            .iter()
            .zip(&self.target)
            .all(|(&r, &t)| (r & mask == mask) == t)
    }

    fn is_key(&self, mask: u32) -> bool {
        let mut bits = mask;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if self.generates(mask & !low) {
                return false;
            }
            bits &= !low;
        }
        true
    }

    fn sorted(&self, masks: impl Iterator<Item = u32>) -> Vec<ItemSet> {
        let mut v: Vec<ItemSet> = masks.map(|m| mask_to_items(&self.attrs, m)).collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }
}

/// Full report on `Equiv(closed)` by scanning every subset of `closed`.
pub fn equiv_class(ctx: &FormalContext, closed: &ItemSet) -> Result<EquivalenceClassReport> {
    let scan = ClassScan::new(ctx, closed)?;
    let n = scan.attrs.len();
    let member_masks: Vec<u32> = (0..=n)
        .flat_map(|k| masks_of_size(n, k))
        .filter(|&m| scan.generates(m))
        .collect();
    let key_masks: Vec<u32> = member_masks
        .iter()
        .copied()
        .filter(|&m| scan.is_key(m))
        .collect();
    let min = key_masks.iter().map(|m| m.count_ones()).min().unwrap_or(0);
    let extent = ObjectSet::from_unsorted(
        scan.target
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(g, _)| g as u32),
    );
    Ok(EquivalenceClassReport {
        closed: closed.clone(),
        members: scan.sorted(member_masks.iter().copied()),
        passkeys: scan.sorted(key_masks.iter().copied().filter(|m| m.count_ones() == min)),
        keys: scan.sorted(key_masks.into_iter()),
        extent,
    })
}

/// Size of the passkeys of `closed`, i.e. its closure level.
pub fn passkey_size(ctx: &FormalContext, closed: &ItemSet) -> Result<usize> {
    let scan = ClassScan::new(ctx, closed)?;
    let n = scan.attrs.len();
    for k in 0..=n {
        if masks_of_size(n, k).any(|m| scan.generates(m)) {
            return Ok(k);
        }
    }
    unreachable!("a closed itemset generates itself")
}

/// The lexicographically smallest passkey of `closed`.
pub fn lex_smallest_passkey(ctx: &FormalContext, closed: &ItemSet) -> Result<ItemSet> {
    let report = equiv_class(ctx, closed)?;
    Ok(report
        .passkeys
        .into_iter()
        .min()
        .expect("at least one passkey"))
}

/// Closure level of every closed itemset, from brute force.
pub fn closure_levels(ctx: &FormalContext) -> Result<BTreeMap<ItemSet, usize>> {
    all_closed(ctx)?
        .into_iter()
        .map(|b| passkey_size(ctx, &b).map(|k| (b, k)))
        .collect()
}

/// `(|Key(M)|, |pKey(M)|)` on the one-passkey context of size `n`.
pub fn count_keys_prop7(n: usize) -> Result<(usize, usize)> {
    guard(n, 10)?;
    let ctx = prop7_context(n)?;
    let report = equiv_class(&ctx, &ItemSet::full(ctx.n_attributes()))?;
    Ok((report.keys.len(), report.passkeys.len()))
}
