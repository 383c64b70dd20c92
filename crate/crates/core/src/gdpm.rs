//! Level-wise computation of the closure structure.
//!
//! Level `k` holds every closed itemset whose passkeys (minimum-size
//! generators) have `k` items. Level `k` is derived from level `k - 1` by
//! extending each closed itemset `B` with every attribute `m ∉ B` and
//! closing the result; a set trie rejects closures already produced at a
//! lower or the current level. The trie stores intents for [`Variant::Int`]
//! and extents for [`Variant::Ext`]; the latter skips the intent computation
//! for rejected candidates.
//!
//! Parents are visited in ascending lexicographic order of their recorded
//! passkeys and attributes in ascending id order. The passkey recorded for a
//! new closed itemset is its parent's passkey plus the extending attribute.

use std::fmt;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::FormalContext;
use crate::sets::{ItemSet, ObjectSet};
use crate::settrie::SetTrie;

/// Which set the duplicate test is run on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Trie over intents; every candidate is closed before the test.
    #[default]
    Int,
    /// Trie over extents; intents are computed only for new extents.
    Ext,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Int => "int",
            Variant::Ext => "ext",
        })
    }
}

/// One closed itemset of a closure level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub closed: ItemSet,
    pub passkey: ItemSet,
    pub extent: ObjectSet,
    pub support: usize,
}

/// Per-level instrumentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub entries: usize,
    /// Closures (INT) or extents (EXT) computed for the level.
    pub candidates: usize,
    /// Trie size after the level was inserted.
    pub trie_nodes: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MineOptions {
    /// Last level to compute; `None` runs until a level comes out empty.
    pub k_max: Option<usize>,
    pub variant: Variant,
    /// Compute candidate closures of a level on the rayon pool. Trie
    /// insertion stays sequential, so the output is identical.
    pub parallel: bool,
}

impl MineOptions {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }

    pub fn k_max(mut self, k_max: Option<usize>) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

/// The closed itemsets of a context partitioned into closure levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureStructure {
    /// `levels[k]` is closure level `k`; trailing empty levels are not stored.
    pub levels: Vec<Vec<LevelEntry>>,
    pub variant: Variant,
    pub k_max: Option<usize>,
    /// Mining stopped at `k_max` before an empty level was observed.
    pub truncated: bool,
    pub stats: Vec<LevelStats>,
}

/// The closure index, possibly only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureIndex {
    pub value: usize,
    /// Set when mining was truncated: the true index is `>= value`.
    pub lower_bound_only: bool,
}

impl fmt::Display for ClosureIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower_bound_only {
            write!(f, ">={}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// `2^exponent`, printed exactly while it fits in 128 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerOfTwo(pub u32);

impl PowerOfTwo {
    pub fn exact(self) -> Option<u128> {
        1u128.checked_shl(self.0)
    }

    pub fn as_f64(self) -> f64 {
        2f64.powi(self.0 as i32)
    }

    /// Is `self <= n`?
    pub fn le_count(self, n: usize) -> bool {
        self.exact().is_some_and(|p| p <= n as u128)
    }

    /// Is `n <= self`?
    pub fn ge_count(self, n: usize) -> bool {
        self.exact().is_none_or(|p| n as u128 <= p)
    }
}

impl fmt::Display for PowerOfTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(p) if self.0 <= 64 => write!(f, "{p}"),
            _ => f.write_str(&sci(self.as_f64())),
        }
    }
}

/// `6.4e+1` style scientific notation with one decimal.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.1e}");
    match s.split_once('e') {
        Some((mant, exp)) if !exp.starts_with('-') => format!("{mant}e+{exp}"),
        _ => s,
    }
}

/// `2^CI <= |C| <= 2^min(|G|, |M|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeBounds {
    pub lower: PowerOfTwo,
    pub upper: PowerOfTwo,
    pub actual: usize,
    /// Inherited from a truncated structure: `actual` and `lower` only cover
    /// the computed levels.
    pub lower_bound_only: bool,
}

impl SizeBounds {
    pub fn holds(&self) -> bool {
        self.lower.le_count(self.actual) && self.upper.ge_count(self.actual)
    }

    /// `6.4e+1 <= 3.6e+2 <= 1.6e+4`.
    pub fn scientific(&self) -> String {
        format!(
            "{} <= {} <= {}",
            sci(self.lower.as_f64()),
            sci(self.actual as f64),
            sci(self.upper.as_f64())
        )
    }
}

impl fmt::Display for SizeBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {} <= {}", self.lower, self.actual, self.upper)
    }
}

impl ClosureStructure {
    /// Highest non-empty level index.
    pub fn ci(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn closure_index(&self) -> ClosureIndex {
        ClosureIndex {
            value: self.ci(),
            lower_bound_only: self.truncated,
        }
    }

    pub fn size_bounds(&self, ctx: &FormalContext) -> SizeBounds {
        SizeBounds {
            lower: PowerOfTwo(self.ci() as u32),
            upper: PowerOfTwo(ctx.n_objects().min(ctx.n_attributes()) as u32),
            actual: self.len(),
            lower_bound_only: self.truncated,
        }
    }

    /// Number of closed itemsets over all levels, including level 0.
    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, k: usize) -> &[LevelEntry] {
        self.levels.get(k).map_or(&[], Vec::as_slice)
    }

    /// `(level, entry)` pairs in level order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &LevelEntry)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(k, l)| l.iter().map(move |e| (k, e)))
    }

    pub fn total_elapsed(&self) -> Duration {
        self.stats.iter().map(|s| s.elapsed).sum()
    }

    /// Trie size at the end of the run.
    pub fn trie_nodes(&self) -> usize {
        self.stats.last().map_or(0, |s| s.trie_nodes)
    }
}

/// Outcome of a streaming run.
#[derive(Clone, Debug, PartialEq)]
pub struct MineSummary {
    pub variant: Variant,
    pub k_max: Option<usize>,
    pub truncated: bool,
    pub stats: Vec<LevelStats>,
}

impl MineSummary {
    pub fn ci(&self) -> usize {
        self.stats.len().saturating_sub(1)
    }

    pub fn closed_count(&self) -> usize {
        self.stats.iter().map(|s| s.entries).sum()
    }
}

/// A closed itemset of the current frontier in bitset form.
struct Node {
    closed: FixedBitSet,
    extent: FixedBitSet,
    passkey: ItemSet,
}

impl Node {
    fn from_entry(ctx: &FormalContext, e: &LevelEntry) -> Self {
        Node {
            closed: e.closed.to_bits(ctx.n_attributes()),
            extent: e.extent.to_bits(ctx.n_objects()),
            passkey: e.passkey.clone(),
        }
    }

    fn to_entry(&self) -> LevelEntry {
        let extent = ObjectSet::from_bits(&self.extent);
        LevelEntry {
            closed: ItemSet::from_bits(&self.closed),
            passkey: self.passkey.clone(),
            support: extent.len(),
            extent,
        }
    }
}

fn candidate_extent(ctx: &FormalContext, parent: &Node, m: usize) -> FixedBitSet {
    let mut ext = parent.extent.clone();
    ext.intersect_with(ctx.col(m as u32));
    ext
}

fn missing_items<'a>(
    ctx: &'a FormalContext,
    closed: &FixedBitSet,
) -> impl Iterator<Item = usize> + 'a {
    let mut missing = closed.clone();
    missing.toggle_range(..);
    (0..ctx.n_attributes()).filter(move |&m| missing.contains(m))
}

struct StepOutput {
    nodes: Vec<Node>,
    candidates: usize,
}

fn step_nodes(
    ctx: &FormalContext,
    prev: &[Node],
    trie: &mut SetTrie,
    variant: Variant,
    parallel: bool,
) -> StepOutput {
    let mut nodes = Vec::new();
    let mut candidates = 0usize;

    match (variant, parallel) {
        (Variant::Int, false) => {
            for parent in prev {
                for m in missing_items(ctx, &parent.closed) {
                    candidates += 1;
                    let extent = candidate_extent(ctx, parent, m);
                    let closed = ctx.intent_bits(&extent);
                    if trie.insert_sorted(closed.ones().map(|i| i as u32)) {
                        nodes.push(Node {
                            closed,
                            extent,
                            passkey: parent.passkey.with(m as u32),
                        });
                    }
                }
            }
        }
        (Variant::Ext, false) => {
            for parent in prev {
                for m in missing_items(ctx, &parent.closed) {
                    candidates += 1;
                    let extent = candidate_extent(ctx, parent, m);
                    if trie.insert_sorted(extent.ones().map(|i| i as u32)) {
                        nodes.push(Node {
                            closed: ctx.intent_bits(&extent),
                            extent,
                            passkey: parent.passkey.with(m as u32),
                        });
                    }
                }
            }
        }
        (Variant::Int, true) => {
            let per_parent: Vec<Vec<(usize, FixedBitSet, FixedBitSet)>> = prev
                .par_iter()
                .map(|parent| {
                    missing_items(ctx, &parent.closed)
                        .map(|m| {
                            let extent = candidate_extent(ctx, parent, m);
                            let closed = ctx.intent_bits(&extent);
                            (m, extent, closed)
                        })
                        .collect()
                })
                .collect();
            for (parent, cands) in prev.iter().zip(per_parent) {
                for (m, extent, closed) in cands {
                    candidates += 1;
                    if trie.insert_sorted(closed.ones().map(|i| i as u32)) {
                        nodes.push(Node {
                            closed,
                            extent,
                            passkey: parent.passkey.with(m as u32),
                        });
                    }
                }
            }
        }
        (Variant::Ext, true) => {
            let per_parent: Vec<Vec<(usize, FixedBitSet)>> = prev
                .par_iter()
                .map(|parent| {
                    missing_items(ctx, &parent.closed)
                        .map(|m| (m, candidate_extent(ctx, parent, m)))
                        .collect()
                })
                .collect();
            let mut accepted = Vec::new();
            for (parent, cands) in prev.iter().zip(per_parent) {
                for (m, extent) in cands {
                    candidates += 1;
                    if trie.insert_sorted(extent.ones().map(|i| i as u32)) {
                        accepted.push((parent.passkey.with(m as u32), extent));
                    }
                }
            }
            nodes = accepted
                .into_par_iter()
                .map(|(passkey, extent)| Node {
                    closed: ctx.intent_bits(&extent),
                    extent,
                    passkey,
                })
                .collect();
        }
    }

    nodes.sort_by(|a, b| a.passkey.cmp(&b.passkey));
    StepOutput { nodes, candidates }
}

fn trie_key(variant: Variant, e: &LevelEntry) -> &[u32] {
    match variant {
        Variant::Int => e.closed.as_slice(),
        Variant::Ext => e.extent.as_slice(),
    }
}

/// Level 0: the closure of the empty set, generated by the empty passkey.
pub fn level_zero(ctx: &FormalContext) -> LevelEntry {
    let extent = ObjectSet::full(ctx.n_objects());
    let closed = ItemSet::from_bits(&ctx.intent_bits(&extent.to_bits(ctx.n_objects())));
    LevelEntry {
        closed,
        passkey: ItemSet::empty(),
        support: extent.len(),
        extent,
    }
}

/// Computes level `k` from level `k - 1` with the intent trie.
///
/// `trie` must hold the intents of every level below `k`; the new intents
/// are added to it.
pub fn step_int(prev: &[LevelEntry], trie: &mut SetTrie, ctx: &FormalContext) -> Vec<LevelEntry> {
    step_entries(prev, trie, ctx, Variant::Int)
}

/// Computes level `k` from level `k - 1` with the extent trie.
///
/// `trie` must hold the extents of every level below `k`.
pub fn step_ext(prev: &[LevelEntry], trie: &mut SetTrie, ctx: &FormalContext) -> Vec<LevelEntry> {
    step_entries(prev, trie, ctx, Variant::Ext)
}

fn step_entries(
    prev: &[LevelEntry],
    trie: &mut SetTrie,
    ctx: &FormalContext,
    variant: Variant,
) -> Vec<LevelEntry> {
    let mut nodes: Vec<Node> = prev.iter().map(|e| Node::from_entry(ctx, e)).collect();
    nodes.sort_by(|a, b| a.passkey.cmp(&b.passkey));
    step_nodes(ctx, &nodes, trie, variant, false)
        .nodes
        .iter()
        .map(Node::to_entry)
        .collect()
}

/// Runs the level-wise miner, handing each completed level to `sink`.
///
/// Only the previous level, the current level and the trie are held in
/// memory.
pub fn mine_streaming<F>(ctx: &FormalContext, opts: &MineOptions, mut sink: F) -> MineSummary
where
    F: FnMut(usize, Vec<LevelEntry>, &LevelStats),
{
    let mut trie = SetTrie::new();
    let mut stats = Vec::new();

    let start = Instant::now();
    let root = level_zero(ctx);
    trie.insert_sorted(trie_key(opts.variant, &root).iter().copied());
    let mut prev = vec![Node::from_entry(ctx, &root)];
    let s0 = LevelStats {
        level: 0,
        entries: 1,
        candidates: 1,
        trie_nodes: trie.node_count(),
        elapsed: start.elapsed(),
    };
    sink(0, vec![root], &s0);
    stats.push(s0);

    let mut k = 0;
    let mut truncated = false;
    loop {
        if opts.k_max.is_some_and(|km| k >= km) {
            truncated = true;
            break;
        }
        k += 1;
        let start = Instant::now();
        let out = step_nodes(ctx, &prev, &mut trie, opts.variant, opts.parallel);
        if out.nodes.is_empty() {
            break;
        }
        let entries: Vec<LevelEntry> = out.nodes.iter().map(Node::to_entry).collect();
        let st = LevelStats {
            level: k,
            entries: entries.len(),
            candidates: out.candidates,
            trie_nodes: trie.node_count(),
            elapsed: start.elapsed(),
        };
        sink(k, entries, &st);
        stats.push(st);
        prev = out.nodes;
    }

    MineSummary {
        variant: opts.variant,
        k_max: opts.k_max,
        truncated,
        stats,
    }
}

/// Computes the closure structure up to `opts.k_max`.
pub fn mine(ctx: &FormalContext, opts: &MineOptions) -> ClosureStructure {
    let mut levels = Vec::new();
    let summary = mine_streaming(ctx, opts, |_, entries, _| levels.push(entries));
    ClosureStructure {
        levels,
        variant: summary.variant,
        k_max: summary.k_max,
        truncated: summary.truncated,
        stats: summary.stats,
    }
}
