//! Analytics over a mined closure structure.
//!
//! Level 0 (the closure of the empty set) is left out of the per-level
//! frequency histogram and the F1 table; level shares are relative to the
//! full closed-itemset count including level 0.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::gdpm::{ClosureStructure, LevelEntry};
use crate::sets::{ItemSet, ObjectSet};

pub const DEFAULT_BIN_EDGES: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

/// Frequency bin boundaries `e0 < e1 < ... < en` with `e0 <= 0` and `en >= 1`.
///
/// Bin `i` is `[e_i, e_(i+1))`; the last bin is closed on the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BinEdges(Vec<f64>);

impl BinEdges {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::invalid("at least two bin edges are needed"));
        }
        if edges
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(Error::invalid(format!(
                "bin edges must be strictly increasing, got {edges:?}"
            )));
        }
        if edges[0] > 0.0 || edges[edges.len() - 1] < 1.0 {
            return Err(Error::invalid(format!(
                "bin edges must span [0, 1], got {edges:?}"
            )));
        }
        Ok(Self(edges))
    }

    pub fn edges(&self) -> &[f64] {
        &self.0
    }

    pub fn bins(&self) -> usize {
        self.0.len() - 1
    }

    pub fn bin_of(&self, freq: f64) -> usize {
        let last = self.bins() - 1;
        (0..last).find(|&i| freq < self.0[i + 1]).unwrap_or(last)
    }

    pub fn label(&self, bin: usize) -> String {
        let close = if bin + 1 == self.bins() { ']' } else { ')' };
        format!("[{},{}{close}", self.0[bin], self.0[bin + 1])
    }
}

impl Default for BinEdges {
    fn default() -> Self {
        Self(DEFAULT_BIN_EDGES.to_vec())
    }
}

impl TryFrom<Vec<f64>> for BinEdges {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BinEdges> for Vec<f64> {
    fn from(b: BinEdges) -> Self {
        b.0
    }
}

/// `support / |G|`, zero on an object-free context.
pub fn relative_frequency(support: usize, n_objects: usize) -> f64 {
    if n_objects == 0 {
        0.0
    } else {
        support as f64 / n_objects as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub level: usize,
    /// `|C_k|`.
    pub itemsets: usize,
    /// `|C_k| / |C|`.
    pub share: f64,
    pub counts: Vec<usize>,
    /// Percentages of `|C_k|` per bin.
    pub percentages: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyHistogram {
    pub edges: BinEdges,
    pub rows: Vec<HistogramRow>,
}

/// Distribution of closed-itemset frequencies over bins, per level `k >= 1`.
pub fn frequency_bins(
    s: &ClosureStructure,
    ctx: &FormalContext,
    edges: &BinEdges,
) -> Result<FrequencyHistogram> {
    if s.levels.is_empty() {
        return Err(Error::invalid("closure structure has no levels"));
    }
    let total = s.len();
    let rows = s
        .levels
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, level)| {
            let mut counts = vec![0usize; edges.bins()];
            for e in level {
                counts[edges.bin_of(relative_frequency(e.support, ctx.n_objects()))] += 1;
            }
            let percentages = counts
                .iter()
                .map(|&c| 100.0 * c as f64 / level.len() as f64)
                .collect();
            HistogramRow {
                level: k,
                itemsets: level.len(),
                share: level.len() as f64 / total as f64,
                counts,
                percentages,
            }
        })
        .collect();
    Ok(FrequencyHistogram {
        edges: edges.clone(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeFrequency {
    pub attribute: u32,
    pub name: String,
    pub support: usize,
    pub frequency: f64,
}

/// Attribute frequencies in ascending order; ties keep attribute order.
pub fn attribute_frequencies(ctx: &FormalContext) -> Vec<AttributeFrequency> {
    let mut out: Vec<AttributeFrequency> = ctx
        .attribute_supports()
        .into_iter()
        .enumerate()
        .map(|(m, support)| AttributeFrequency {
            attribute: m as u32,
            name: ctx.attribute_names()[m].clone(),
            support,
            frequency: relative_frequency(support, ctx.n_objects()),
        })
        .collect();
    out.sort_by_key(|a| a.support);
    out
}

/// How much of the incidence relation a set of concepts covers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub covered_cells: usize,
    pub incidences: usize,
    /// `covered_cells / incidences`.
    pub coverage: f64,
    /// Mean number of concepts covering a covered cell; `None` if nothing is covered.
    pub overlap_mean: Option<f64>,
    /// Population standard deviation of the same.
    pub overlap_std: Option<f64>,
}

/// Coverage of the crosses of `ctx` by the concepts `(extent, closed)` of `entries`.
///
/// A cell `(g, m)` is covered by an entry when `g` is in its extent and `m`
/// in its closed itemset.
pub fn coverage<'a, I>(entries: I, ctx: &FormalContext) -> Result<CoverageRow>
where
    I: IntoIterator<Item = &'a LevelEntry>,
{
    let incidences = ctx.incidence_count();
    if incidences == 0 {
        return Err(Error::UndefinedCoverage);
    }
    let width = ctx.n_attributes();
    let mut hits = vec![0u32; ctx.n_objects() * width];
    for e in entries {
        for g in e.extent.iter() {
            let row = g as usize * width;
            for m in e.closed.iter() {
                hits[row + m as usize] += 1;
            }
        }
    }
    let covered: Vec<f64> = hits.iter().filter(|&&h| h > 0).map(|&h| h as f64).collect();
    let (overlap_mean, overlap_std) = if covered.is_empty() {
        (None, None)
    } else {
        let (mean, std) = mean_std(&covered);
        (Some(mean), Some(std))
    };
    Ok(CoverageRow {
        covered_cells: covered.len(),
        incidences,
        coverage: covered.len() as f64 / incidences as f64,
        overlap_mean,
        overlap_std,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCoverage {
    pub level: usize,
    #[serde(flatten)]
    pub row: CoverageRow,
}

/// Coverage row for every level of `s`, level 0 included.
pub fn coverage_by_level(s: &ClosureStructure, ctx: &FormalContext) -> Result<Vec<LevelCoverage>> {
    s.levels
        .iter()
        .enumerate()
        .map(|(level, entries)| {
            Ok(LevelCoverage {
                level,
                row: coverage(entries, ctx)?,
            })
        })
        .collect()
}

/// Population mean and standard deviation.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Class labels mapped to dense ids in sorted order of their names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabels {
    pub names: Vec<String>,
    pub ids: Vec<u32>,
}

impl ClassLabels {
    pub fn from_strings<S: AsRef<str>>(labels: &[S]) -> Self {
        let mut names: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        names.dedup();
        let ids = labels
            .iter()
            .map(|s| {
                names
                    .binary_search_by(|n| n.as_str().cmp(s.as_ref()))
                    .unwrap() as u32
            })
            .collect();
        Self { names, ids }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Confusion counts of a concept against its majority class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F1Score {
    /// Majority class of the extent; `None` for an empty extent.
    pub class: Option<u32>,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl F1Score {
    /// `2tp / (2tp + fp + fn)`, zero when undefined.
    pub fn value(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            0.0
        } else {
            (2 * self.tp) as f64 / denom as f64
        }
    }
}

/// F1 of the concept with extent `extent`, labeled by majority vote.
///
/// Ties go to the smallest class id.
pub fn entry_f1(extent: &ObjectSet, labels: &[u32]) -> F1Score {
    let n_classes = labels.iter().max().map_or(0, |&c| c as usize + 1);
    let mut inside = vec![0usize; n_classes];
    for g in extent.iter() {
        inside[labels[g as usize] as usize] += 1;
    }
    let Some(class) = (0..n_classes)
        .filter(|&c| inside[c] > 0)
        .max_by(|&a, &b| inside[a].cmp(&inside[b]).then(b.cmp(&a)))
    else {
        return F1Score {
            class: None,
            tp: 0,
            fp: 0,
            fn_: 0,
        };
    };
    let tp = inside[class];
    let class_total = labels.iter().filter(|&&l| l as usize == class).count();
    F1Score {
        class: Some(class as u32),
        tp,
        fp: extent.len() - tp,
        fn_: class_total - tp,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct F1Cell {
    pub level: usize,
    pub bin: usize,
    pub itemsets: usize,
    pub mean_f1: f64,
}

/// Mean F1 per (level, frequency bin) for levels `k >= 1`; empty cells are omitted.
pub fn f1_by_level(
    s: &ClosureStructure,
    ctx: &FormalContext,
    labels: &[u32],
    edges: &BinEdges,
) -> Result<Vec<F1Cell>> {
    if labels.len() != ctx.n_objects() {
        return Err(Error::invalid(format!(
            "{} labels for {} objects",
            labels.len(),
            ctx.n_objects()
        )));
    }
    let mut cells: BTreeMap<(usize, usize), (usize, f64)> = BTreeMap::new();
    for (k, e) in s.entries().filter(|(k, _)| *k >= 1) {
        let bin = edges.bin_of(relative_frequency(e.support, ctx.n_objects()));
        let cell = cells.entry((k, bin)).or_default();
        cell.0 += 1;
        cell.1 += entry_f1(&e.extent, labels).value();
    }
    Ok(cells
        .into_iter()
        .map(|((level, bin), (n, sum))| F1Cell {
            level,
            bin,
            itemsets: n,
            mean_f1: sum / n as f64,
        })
        .collect())
}

/// An implication `passkey => closed \ passkey` (confidence 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub level: usize,
    pub antecedent: ItemSet,
    pub consequent: ItemSet,
    pub support: usize,
    /// `|consequent'|`.
    pub consequent_support: usize,
    pub confidence: f64,
    /// `confidence / freq(consequent) = |G| / |consequent'|`.
    pub lift: f64,
}

impl Rule {
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Rule, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "{} => {}",
                    self.0.antecedent.display(self.1),
                    self.0.consequent.display(self.1)
                )
            }
        }
        D(self, names)
    }
}

/// One implication per closed itemset with a non-empty consequent and
/// `support >= min_support`, sorted by lift (descending), then support
/// (descending), then antecedent.
pub fn implications(
    s: &ClosureStructure,
    ctx: &FormalContext,
    min_support: usize,
) -> Result<Vec<Rule>> {
    if min_support < 1 {
        return Err(Error::invalid("min_support must be at least 1"));
    }
    let n = ctx.n_objects();
    let mut rules: Vec<Rule> = s
        .entries()
        .filter(|(_, e)| e.support >= min_support && e.passkey.len() < e.closed.len())
        .map(|(level, e)| {
            let consequent = e.closed.difference(&e.passkey);
            let consequent_support = ctx.extent_bits(consequent.as_slice()).count_ones(..);
            Rule {
                level,
                antecedent: e.passkey.clone(),
                consequent,
                support: e.support,
                consequent_support,
                confidence: 1.0,
                lift: n as f64 / consequent_support as f64,
            }
        })
        .collect();
    // Lift is |G| / |Y'| for every rule, so ordering by |Y'| is exact.
    rules.sort_by(|a, b| {
        a.consequent_support
            .cmp(&b.consequent_support)
            .then(b.support.cmp(&a.support))
            .then_with(|| a.antecedent.cmp(&b.antecedent))
    });
    Ok(rules)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub level: usize,
    pub size: usize,
    pub count: usize,
    pub mean_support: f64,
    /// Population standard deviation.
    pub std_support: f64,
}

/// Counts and support statistics per (level, closed-itemset size).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub cells: Vec<SummaryCell>,
    pub level_sizes: Vec<usize>,
}

impl LevelSummary {
    pub fn cell(&self, level: usize, size: usize) -> Option<&SummaryCell> {
        self.cells
            .iter()
            .find(|c| c.level == level && c.size == size)
    }

    pub fn row(&self, level: usize) -> impl Iterator<Item = &SummaryCell> {
        self.cells.iter().filter(move |c| c.level == level)
    }

    pub fn max_size(&self) -> usize {
        self.cells.iter().map(|c| c.size).max().unwrap_or(0)
    }
}

pub fn level_summary(s: &ClosureStructure) -> LevelSummary {
    let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for (k, e) in s.entries() {
        groups
            .entry((k, e.closed.len()))
            .or_default()
            .push(e.support as f64);
    }
    let cells = groups
        .into_iter()
        .map(|((level, size), sup)| {
            let (mean, std) = mean_std(&sup);
            SummaryCell {
                level,
                size,
                count: sup.len(),
                mean_support: mean,
                std_support: std,
            }
        })
        .collect();
    LevelSummary {
        cells,
        level_sizes: s.levels.iter().map(Vec::len).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::contranominal;
    use crate::context::tests::running_example;
    use crate::gdpm::{mine, MineOptions};

    fn items(s: &str) -> ItemSet {
        ItemSet::from_unsorted(s.bytes().map(|c| (c - b'a') as u32))
    }

    fn mined() -> (FormalContext, ClosureStructure) {
        let ctx = running_example();
        let s = mine(&ctx, &MineOptions::default());
        (ctx, s)
    }

    #[test]
    fn edges_validation() {
        assert!(BinEdges::new(vec![0.0, 0.5, 0.4, 1.0]).is_err());
        assert!(BinEdges::new(vec![0.0]).is_err());
        assert!(BinEdges::new(vec![0.1, 1.0]).is_err());
        let e = BinEdges::default();
        assert_eq!(e.bin_of(0.0), 0);
        assert_eq!(e.bin_of(0.2), 1);
        assert_eq!(e.bin_of(0.8), 4);
        assert_eq!(e.bin_of(1.0), 4);
        assert_eq!(e.label(4), "[0.8,1]");
    }

    #[test]
    fn level_one_histogram() {
        let (ctx, s) = mined();
        let h = frequency_bins(&s, &ctx, &BinEdges::default()).unwrap();
        let l1 = &h.rows[0];
        assert_eq!(l1.level, 1);
        assert_eq!(l1.counts, vec![0, 1, 4, 1, 0]);
        assert!((l1.percentages[2] - 400.0 / 6.0).abs() < 1e-12);
        assert!((l1.share - 6.0 / 16.0).abs() < 1e-12);
        for row in &h.rows {
            assert_eq!(row.counts.iter().sum::<usize>(), row.itemsets);
            assert!((row.percentages.iter().sum::<f64>() - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn single_bin() {
        let (ctx, s) = mined();
        let h = frequency_bins(&s, &ctx, &BinEdges::new(vec![0.0, 1.0]).unwrap()).unwrap();
        assert!(h.rows.iter().all(|r| r.percentages == vec![100.0]));
    }

    #[test]
    fn attribute_frequency_order() {
        let ctx = running_example();
        let f = attribute_frequencies(&ctx);
        let names: Vec<&str> = f.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["f", "a", "b", "c", "e", "d"]);
        assert_eq!(f[0].support, 2);
        assert_eq!(f[5].support, 4);

        let empty = FormalContext::from_unnamed_rows(0, Vec::<Vec<u32>>::new()).unwrap();
        assert!(attribute_frequencies(&empty).is_empty());
        let c = contranominal(5).unwrap();
        assert!(attribute_frequencies(&c).iter().all(|a| a.frequency == 0.8));
    }

    #[test]
    fn coverage_examples() {
        let (ctx, s) = mined();
        let l1 = coverage(s.level(1), &ctx).unwrap();
        assert_eq!((l1.covered_cells, l1.incidences), (18, 18));
        assert_eq!(l1.coverage, 1.0);
        let l3 = coverage(s.level(3), &ctx).unwrap();
        assert_eq!(l3.covered_cells, 3);
        assert_eq!(l3.coverage, 3.0 / 18.0);
        assert_eq!(l3.overlap_mean, Some(1.0));
        let all = coverage(s.entries().map(|(_, e)| e), &ctx).unwrap();
        assert_eq!(all.coverage, 1.0);
    }

    #[test]
    fn overlap_counts_covering_concepts() {
        // (g5, b) lies in b' x {b} and in bef' x bef at level 1; every other
        // level-1 cell: a,c,d,e cover their own column, bef adds to b,e,f of g5,g6.
        let (ctx, s) = mined();
        let l1 = coverage(s.level(1), &ctx).unwrap();
        // 18 cells; g5 and g6 each have b, e covered twice.
        let expect_mean = (14.0 + 4.0 * 2.0) / 18.0;
        assert!((l1.overlap_mean.unwrap() - expect_mean).abs() < 1e-12);
    }

    #[test]
    fn coverage_needs_incidences() {
        let ctx = contranominal(1).unwrap();
        let s = mine(&ctx, &MineOptions::default());
        assert!(matches!(
            coverage(s.level(0), &ctx),
            Err(Error::UndefinedCoverage)
        ));
    }

    #[test]
    fn f1_examples() {
        let ade = ObjectSet::new(vec![2]).unwrap();
        let score = entry_f1(&ade, &[0, 0, 0, 1, 1, 1]);
        assert_eq!((score.tp, score.fp, score.fn_), (1, 0, 2));
        assert_eq!(score.value(), 0.5);

        let all = ObjectSet::full(6);
        let score = entry_f1(&all, &[0, 1, 1, 0, 1, 2]);
        assert_eq!(score.class, Some(1));
        assert_eq!(score.value(), 2.0 * 3.0 / (3.0 + 6.0));

        let tie = entry_f1(&ObjectSet::new(vec![0, 3]).unwrap(), &[1, 0, 0, 0]);
        assert_eq!(
            tie,
            F1Score {
                class: Some(0),
                tp: 1,
                fp: 1,
                fn_: 2
            }
        );

        assert_eq!(entry_f1(&ObjectSet::empty(), &[0, 1]).value(), 0.0);
    }

    #[test]
    fn f1_table_rejects_wrong_label_count() {
        let (ctx, s) = mined();
        assert!(f1_by_level(&s, &ctx, &[0, 1], &BinEdges::default()).is_err());
        let cells = f1_by_level(&s, &ctx, &[0; 6], &BinEdges::default()).unwrap();
        assert_eq!(cells.iter().map(|c| c.itemsets).sum::<usize>(), 15);
    }

    #[test]
    fn rules_on_running_example() {
        let (ctx, s) = mined();
        let rules = implications(&s, &ctx, 1).unwrap();
        let ae = rules.iter().find(|r| r.antecedent == items("ae")).unwrap();
        assert_eq!(ae.consequent, items("d"));
        assert_eq!((ae.support, ae.lift), (1, 1.5));
        let f = rules.iter().find(|r| r.antecedent == items("f")).unwrap();
        assert_eq!(f.consequent, items("be"));
        assert_eq!((f.support, f.confidence, f.lift), (2, 1.0, 3.0));
        assert!(rules.iter().all(|r| r.antecedent != items("ac")));
        assert!(rules.windows(2).all(|w| w[0].lift >= w[1].lift));

        let frequent = implications(&s, &ctx, 2).unwrap();
        assert!(frequent.iter().all(|r| r.support >= 2));
        assert!(implications(&s, &ctx, 0).is_err());
    }

    #[test]
    fn summary_of_running_example() {
        let (_, s) = mined();
        let sum = level_summary(&s);
        let c = sum.cell(1, 1).unwrap();
        assert_eq!(c.count, 5);
        assert!((c.mean_support - 3.2).abs() < 1e-12);
        let c = sum.cell(1, 3).unwrap();
        assert_eq!((c.count, c.mean_support, c.std_support), (1, 2.0, 0.0));
        for (k, &n) in sum.level_sizes.iter().enumerate() {
            assert_eq!(sum.row(k).map(|c| c.count).sum::<usize>(), n);
        }
        assert_eq!(sum.max_size(), 6);
    }
}
