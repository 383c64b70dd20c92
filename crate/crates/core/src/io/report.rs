use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table_path;
use crate::analysis::{
    AttributeFrequency, F1Cell, FrequencyHistogram, LevelCoverage, LevelSummary, Rule,
};
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::gdpm::{ClosureIndex, ClosureStructure, LevelStats, SizeBounds, Variant};
use crate::sets::{ItemSet, ObjectSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    /// One JSON document.
    Structured,
    /// A directory of tab-separated tables, one per section.
    Tabular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub name: Option<String>,
    pub objects: usize,
    pub attributes: usize,
    pub incidences: usize,
    pub density: f64,
    pub attribute_names: Vec<String>,
}

impl DatasetDescriptor {
    pub fn of(ctx: &FormalContext, name: Option<String>) -> Self {
        Self {
            name,
            objects: ctx.n_objects(),
            attributes: ctx.n_attributes(),
            incidences: ctx.incidence_count(),
            density: ctx.density(),
            attribute_names: ctx.attribute_names().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiningMetadata {
    pub variant: Variant,
    pub k_max: Option<usize>,
    pub truncated: bool,
    pub closure_index: ClosureIndex,
    pub closed_itemsets: usize,
    pub trie_nodes: usize,
    pub levels: Vec<LevelStats>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub closed: ItemSet,
    pub passkey: ItemSet,
    pub support: usize,
    /// Omitted when the support exceeds the report's extent limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<ObjectSet>,
}

/// The closure structure itself; independent of the mining variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSection {
    pub extent_limit: Option<usize>,
    pub levels: Vec<Vec<ReportEntry>>,
}

impl StructureSection {
    pub fn of(s: &ClosureStructure, extent_limit: Option<usize>) -> Self {
        let levels = s
            .levels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|e| ReportEntry {
                        closed: e.closed.clone(),
                        passkey: e.passkey.clone(),
                        support: e.support,
                        extent: match extent_limit {
                            Some(limit) if e.support > limit => None,
                            _ => Some(e.extent.clone()),
                        },
                    })
                    .collect()
            })
            .collect();
        Self {
            extent_limit,
            levels,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute_frequencies: Option<Vec<AttributeFrequency>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<FrequencyHistogram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Vec<LevelCoverage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<Vec<F1Cell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<Rule>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_summary: Option<LevelSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub dataset: DatasetDescriptor,
    pub mining: MiningMetadata,
    pub bounds: SizeBounds,
    pub structure: StructureSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

impl Report {
    pub fn new(
        ctx: &FormalContext,
        name: Option<String>,
        s: &ClosureStructure,
        extent_limit: Option<usize>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dataset: DatasetDescriptor::of(ctx, name),
            mining: MiningMetadata {
                variant: s.variant,
                k_max: s.k_max,
                truncated: s.truncated,
                closure_index: s.closure_index(),
                closed_itemsets: s.len(),
                trie_nodes: s.trie_nodes(),
                levels: s.stats.clone(),
            },
            bounds: s.size_bounds(ctx),
            structure: StructureSection::of(s, extent_limit),
            analysis: AnalysisSection::default(),
        }
    }
}

/// Writes `r` as one JSON file (`Structured`) or as a directory of TSV files (`Tabular`).
pub fn write_report(r: &Report, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    match format {
        ReportFormat::Structured => {
            let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, r).map_err(|source| Error::Json {
                path: path.to_path_buf(),
                source,
            })?;
            w.write_all(b"\n")
                .and_then(|_| w.flush())
                .map_err(|e| Error::io(path, e))
        }
        ReportFormat::Tabular => write_tables(r, path),
    }
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Report> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: Report = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(Error::invalid(format!(
            "{}: unsupported schema_version {}",
            path.display(),
            report.schema_version
        )));
    }
    Ok(report)
}

fn names(set: &ItemSet, all: &[String]) -> String {
    set.iter()
        .map(|m| {
            all.get(m as usize)
                .map_or_else(|| m.to_string(), Clone::clone)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_table(dir: &Path, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let path = table_path(dir, name);
    let mut w = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn write_tables(r: &Report, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let attr = &r.dataset.attribute_names;

    write_table(
        dir,
        "levels",
        &["level", "closed", "passkey", "support"],
        r.structure
            .levels
            .iter()
            .enumerate()
            .flat_map(|(k, level)| {
                level.iter().map(move |e| {
                    vec![
                        k.to_string(),
                        names(&e.closed, attr),
                        names(&e.passkey, attr),
                        e.support.to_string(),
                    ]
                })
            })
            .collect(),
    )?;

    write_table(
        dir,
        "level_stats",
        &["level", "itemsets", "candidates", "trie_nodes", "seconds"],
        r.mining
            .levels
            .iter()
            .map(|s| {
                vec![
                    s.level.to_string(),
                    s.entries.to_string(),
                    s.candidates.to_string(),
                    s.trie_nodes.to_string(),
                    s.elapsed.as_secs_f64().to_string(),
                ]
            })
            .collect(),
    )?;

    let a = &r.analysis;
    if let Some(h) = &a.histogram {
        let mut header = vec!["level".to_string(), "itemsets".into(), "share".into()];
        header.extend((0..h.edges.bins()).map(|b| h.edges.label(b)));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        write_table(
            dir,
            "histogram",
            &header,
            h.rows
                .iter()
                .map(|row| {
                    let mut v = vec![
                        row.level.to_string(),
                        row.itemsets.to_string(),
                        row.share.to_string(),
                    ];
                    v.extend(row.percentages.iter().map(|p| p.to_string()));
                    v
                })
                .collect(),
        )?;
    }
    if let Some(cov) = &a.coverage {
        write_table(
            dir,
            "coverage",
            &["level", "coverage", "overlap_mean", "overlap_std"],
            cov.iter()
                .map(|c| {
                    vec![
                        c.level.to_string(),
                        c.row.coverage.to_string(),
                        opt(c.row.overlap_mean),
                        opt(c.row.overlap_std),
                    ]
                })
                .collect(),
        )?;
    }
    if let Some(f1) = &a.f1 {
        write_table(
            dir,
            "f1",
            &["level", "bin", "itemsets", "mean_f1"],
            f1.iter()
                .map(|c| {
                    vec![
                        c.level.to_string(),
                        c.bin.to_string(),
                        c.itemsets.to_string(),
                        c.mean_f1.to_string(),
                    ]
                })
                .collect(),
        )?;
    }
    if let Some(sum) = &a.level_summary {
        let sizes: Vec<String> = (1..=sum.max_size()).map(|s| s.to_string()).collect();
        let mut header = vec!["level", ""];
        header.extend(sizes.iter().map(String::as_str));
        let mut rows = Vec::new();
        for level in 0..sum.level_sizes.len() {
            let mut count = vec![level.to_string(), "count".into()];
            let mut sup = vec![level.to_string(), "sup.".into()];
            for size in 1..=sum.max_size() {
                match sum.cell(level, size) {
                    Some(c) => {
                        count.push(c.count.to_string());
                        sup.push(format!("{:.1}+{:.1}", c.mean_support, c.std_support));
                    }
                    None => {
                        count.push(String::new());
                        sup.push(String::new());
                    }
                }
            }
            rows.push(count);
            rows.push(sup);
        }
        write_table(dir, "level_summary", &header, rows)?;
    }
    if let Some(rules) = &a.rules {
        write_table(
            dir,
            "rules",
            &["antecedents", "consequents", "support", "conf", "lift"],
            rules
                .iter()
                .map(|rule| {
                    vec![
                        names(&rule.antecedent, attr),
                        names(&rule.consequent, attr),
                        rule.support.to_string(),
                        rule.confidence.to_string(),
                        rule.lift.to_string(),
                    ]
                })
                .collect(),
        )?;
    }
    if let Some(freqs) = &a.attribute_frequencies {
        write_table(
            dir,
            "attribute_frequencies",
            &["attribute", "support", "frequency"],
            freqs
                .iter()
                .map(|f| {
                    vec![
                        f.name.clone(),
                        f.support.to_string(),
                        f.frequency.to_string(),
                    ]
                })
                .collect(),
        )?;
    }
    Ok(())
}
