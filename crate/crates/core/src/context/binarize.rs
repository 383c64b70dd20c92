//! Interval and value scaling of many-valued tables into binary contexts.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize};

use super::FormalContext;
use crate::error::{Error, Result};

/// A many-valued table: named columns of raw string cells.
#[derive(Clone, Debug, PartialEq)]
pub struct ManyValuedTable {
    pub object_names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// How one source column becomes binary attributes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ColumnRule {
    /// Half-open numeric intervals `[lo, hi)`, disjoint and ascending.
    Intervals(Vec<[f64; 2]>),
    /// One attribute per categorical value.
    Values(ValueList),
    /// `k` equal-width intervals between the column minimum and maximum;
    /// the last interval is closed at the maximum.
    EqualWidth(usize),
}

/// Either every distinct value of the column (`"auto"`) or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ValueList {
    #[serde(serialize_with = "ser_auto")]
    Auto,
    List(Vec<String>),
}

fn ser_auto<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("auto")
}

impl<'de> Deserialize<'de> for ValueList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<serde_json::Value>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "auto" => Ok(ValueList::Auto),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "expected \"auto\" or a list of values, got {w:?}"
            ))),
            Raw::List(vs) => vs
                .into_iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => Ok(s),
                    serde_json::Value::Number(n) => Ok(n.to_string()),
                    other => Err(serde::de::Error::custom(format!(
                        "categorical values must be strings or numbers, got {other}"
                    ))),
                })
                .collect::<std::result::Result<_, _>>()
                .map(ValueList::List),
        }
    }
}

pub const DEFAULT_NAME_TEMPLATE: &str = "{column}={label}";

/// Scaling rules per source column plus the generated-attribute naming template.
///
/// Accepts either `{"columns": {...}, "name_template": "..."}` or a bare
/// `{column: rule}` map.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinarizationConfig {
    pub columns: BTreeMap<String, ColumnRule>,
    /// `{column}` and `{label}` are substituted.
    pub name_template: String,
}

impl<'de> Deserialize<'de> for BinarizationConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Full {
                columns: BTreeMap<String, ColumnRule>,
                name_template: Option<String>,
            },
            Bare(BTreeMap<String, ColumnRule>),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Full {
                columns,
                name_template,
            } => BinarizationConfig {
                columns,
                name_template: name_template.unwrap_or_else(|| DEFAULT_NAME_TEMPLATE.into()),
            },
            Raw::Bare(columns) => BinarizationConfig {
                columns,
                name_template: DEFAULT_NAME_TEMPLATE.into(),
            },
        })
    }
}

impl BinarizationConfig {
    pub fn new(columns: BTreeMap<String, ColumnRule>) -> Self {
        Self {
            columns,
            name_template: DEFAULT_NAME_TEMPLATE.into(),
        }
    }

    pub fn with_template(mut self, template: impl Into<String>) -> Self {
        self.name_template = template.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Interval {
    lo: f64,
    hi: f64,
    closed: bool,
}

impl Interval {
    fn contains(&self, x: f64) -> bool {
        x >= self.lo && (x < self.hi || (self.closed && x == self.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.closed { ']' } else { ')' };
        write!(f, "[{},{}{close}", self.lo, self.hi)
    }
}

enum Resolved {
    Intervals(Vec<Interval>),
    Values(Vec<String>),
}

impl Resolved {
    fn labels(&self) -> Vec<String> {
        match self {
            Resolved::Intervals(iv) => iv.iter().map(|i| i.to_string()).collect(),
            Resolved::Values(vs) => vs.clone(),
        }
    }

    fn width(&self) -> usize {
        match self {
            Resolved::Intervals(iv) => iv.len(),
            Resolved::Values(vs) => vs.len(),
        }
    }
}

fn parse_number(table: &ManyValuedTable, row: usize, col: usize) -> Result<f64> {
    let raw = table.rows[row][col].trim();
    raw.parse::<f64>().map_err(|_| {
        Error::invalid(format!(
            "row {row}, column {:?}: {raw:?} is not a number",
            table.columns[col]
        ))
    })
}

fn resolve(table: &ManyValuedTable, col: usize, rule: &ColumnRule) -> Result<Resolved> {
    let name = &table.columns[col];
    match rule {
        ColumnRule::Intervals(bounds) => {
            if bounds.is_empty() {
                return Err(Error::invalid(format!("column {name:?}: no intervals")));
            }
            for (i, [lo, hi]) in bounds.iter().enumerate() {
                if lo.partial_cmp(hi) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::invalid(format!(
                        "column {name:?}: interval [{lo},{hi}) is empty or NaN"
                    )));
                }
                if i > 0 && bounds[i - 1][1] > *lo {
                    return Err(Error::invalid(format!(
                        "column {name:?}: intervals overlap or are out of order at [{lo},{hi})"
                    )));
                }
            }
            Ok(Resolved::Intervals(
                bounds
                    .iter()
                    .map(|&[lo, hi]| Interval {
                        lo,
                        hi,
                        closed: false,
                    })
                    .collect(),
            ))
        }
        ColumnRule::EqualWidth(k) => {
            if *k == 0 {
                return Err(Error::invalid(format!(
                    "column {name:?}: equal_width needs at least one interval"
                )));
            }
            let values = (0..table.rows.len())
                .map(|r| parse_number(table, r, col))
                .collect::<Result<Vec<_>>>()?;
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if values.is_empty() || lo == hi {
                let (lo, hi) = if values.is_empty() {
                    (0.0, 0.0)
                } else {
                    (lo, hi)
                };
                return Ok(Resolved::Intervals(vec![Interval {
                    lo,
                    hi,
                    closed: true,
                }]));
            }
            let width = (hi - lo) / *k as f64;
            let edges: Vec<f64> = (0..=*k)
                .map(|i| if i == *k { hi } else { lo + width * i as f64 })
                .collect();
            Ok(Resolved::Intervals(
                edges
                    .windows(2)
                    .enumerate()
                    .map(|(i, w)| Interval {
                        lo: w[0],
                        hi: w[1],
                        closed: i + 1 == *k,
                    })
                    .collect(),
            ))
        }
        ColumnRule::Values(ValueList::List(values)) => {
            let mut seen = std::collections::HashSet::new();
            for v in values {
                if !seen.insert(v.trim()) {
                    return Err(Error::invalid(format!(
                        "column {name:?}: value {v:?} listed twice"
                    )));
                }
            }
            Ok(Resolved::Values(
                values.iter().map(|v| v.trim().to_string()).collect(),
            ))
        }
        ColumnRule::Values(ValueList::Auto) => {
            let mut values: Vec<String> = table
                .rows
                .iter()
                .map(|r| r[col].trim().to_string())
                .collect();
            values.sort();
            values.dedup();
            // Numeric columns sort by value, not lexicographically.
            let numeric: Option<Vec<f64>> = values.iter().map(|v| v.parse().ok()).collect();
            if let Some(nums) = numeric {
                let mut paired: Vec<(f64, String)> = nums.into_iter().zip(values).collect();
                paired.sort_by(|a, b| a.0.total_cmp(&b.0));
                values = paired.into_iter().map(|(_, v)| v).collect();
            }
            Ok(Resolved::Values(values))
        }
    }
}

/// Scales a many-valued table into a binary context.
///
/// Generated attributes follow the table's column order and, within a
/// column, interval or value order. Every object gets exactly one cross per
/// source column.
pub fn binarize(table: &ManyValuedTable, cfg: &BinarizationConfig) -> Result<FormalContext> {
    for (r, row) in table.rows.iter().enumerate() {
        if row.len() != table.columns.len() {
            return Err(Error::invalid(format!(
                "row {r} has {} cells, expected {}",
                row.len(),
                table.columns.len()
            )));
        }
    }
    if table.object_names.len() != table.rows.len() {
        return Err(Error::invalid("object name count differs from row count"));
    }
    for key in cfg.columns.keys() {
        if !table.columns.contains(key) {
            return Err(Error::invalid(format!(
                "binarization config names unknown column {key:?}"
            )));
        }
    }

    let mut resolved = Vec::with_capacity(table.columns.len());
    let mut attribute_names = Vec::new();
    for (c, name) in table.columns.iter().enumerate() {
        let rule = cfg
            .columns
            .get(name)
            .ok_or_else(|| Error::invalid(format!("no binarization rule for column {name:?}")))?;
        let res = resolve(table, c, rule)?;
        for label in res.labels() {
            attribute_names.push(
                cfg.name_template
                    .replace("{column}", name)
                    .replace("{label}", &label),
            );
        }
        resolved.push(res);
    }

    let n_attrs = attribute_names.len();
    let mut rows = Vec::with_capacity(table.rows.len());
    for r in 0..table.rows.len() {
        let mut bits = FixedBitSet::with_capacity(n_attrs);
        let mut offset = 0;
        for (c, res) in resolved.iter().enumerate() {
            let hit = match res {
                Resolved::Intervals(iv) => {
                    let x = parse_number(table, r, c)?;
                    iv.iter().position(|i| i.contains(x))
                }
                Resolved::Values(vs) => {
                    let cell = table.rows[r][c].trim();
                    vs.iter().position(|v| v == cell)
                }
            };
            let Some(pos) = hit else {
                return Err(Error::UncoveredValue {
                    row: r,
                    column: table.columns[c].clone(),
                    value: table.rows[r][c].clone(),
                });
            };
            bits.insert(offset + pos);
            offset += res.width();
        }
        rows.push(bits);
    }
    Ok(FormalContext::from_row_bits(
        table.object_names.clone(),
        attribute_names,
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(columns: &[&str], rows: &[&[&str]]) -> ManyValuedTable {
        ManyValuedTable {
            object_names: (1..=rows.len()).map(|g| format!("g{g}")).collect(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: rows
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
        }
    }

    /// The three-column many-valued example with its interval scaling.
    fn scaling_example() -> (ManyValuedTable, BinarizationConfig) {
        let t = table(
            &["s1", "s2", "s3"],
            &[
                &["1.3", "6", "4"],
                &["2.1", "2", "4"],
                &["2.5", "5", "5"],
                &["1.8", "1", "5"],
                &["3.3", "3", "5"],
                &["1.6", "4", "4"],
            ],
        );
        let cfg: BinarizationConfig = serde_json::from_str(
            r#"{
                "s1": {"intervals": [[1, 2], [2, 3], [3, 4]]},
                "s2": {"intervals": [[1, 3], [3, 5], [5, 7]]},
                "s3": {"values": "auto"}
            }"#,
        )
        .unwrap();
        (t, cfg)
    }

    #[test]
    fn scaling_example_rows() {
        let (t, cfg) = scaling_example();
        let ctx = binarize(&t, &cfg).unwrap();
        assert_eq!(ctx.n_attributes(), 8);
        // a..g, i  ->  0..7
        let expect: [&[u32]; 6] = [
            &[0, 5, 6],
            &[1, 3, 6],
            &[1, 5, 7],
            &[0, 3, 7],
            &[2, 4, 7],
            &[0, 4, 6],
        ];
        for (g, row) in expect.iter().enumerate() {
            assert_eq!(ctx.row_items(g as u32).as_slice(), *row, "row g{}", g + 1);
        }
        assert_eq!(ctx.attribute_names()[0], "s1=[1,2)");
        assert_eq!(ctx.attribute_names()[7], "s3=5");
    }

    #[test]
    fn one_cross_per_source_column() {
        let (t, cfg) = scaling_example();
        let ctx = binarize(&t, &cfg).unwrap();
        for g in 0..ctx.n_objects() as u32 {
            assert_eq!(ctx.row(g).count_ones(..), 3);
        }
    }

    #[test]
    fn single_covering_interval() {
        let t = table(&["x"], &[&["0.5"], &["7"], &["-3"]]);
        let cfg: BinarizationConfig =
            serde_json::from_str(r#"{"x": {"intervals": [[-10, 10]]}}"#).unwrap();
        let ctx = binarize(&t, &cfg).unwrap();
        assert_eq!(ctx.n_attributes(), 1);
        assert_eq!(ctx.col(0).count_ones(..), 3);
    }

    #[test]
    fn uncovered_value_names_row_and_column() {
        let (mut t, cfg) = scaling_example();
        t.rows[3][1] = "9".into();
        match binarize(&t, &cfg) {
            Err(Error::UncoveredValue { row, column, value }) => {
                assert_eq!((row, column.as_str(), value.as_str()), (3, "s2", "9"));
            }
            other => panic!("expected uncovered value, got {other:?}"),
        }
    }

    #[test]
    fn overlapping_intervals_rejected() {
        let t = table(&["x"], &[&["1"]]);
        let cfg: BinarizationConfig =
            serde_json::from_str(r#"{"x": {"intervals": [[0, 2], [1, 3]]}}"#).unwrap();
        assert!(matches!(binarize(&t, &cfg), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn categorical_values() {
        let t = table(&["color"], &[&["red"], &["blue"], &["red"], &["green"]]);
        let cfg: BinarizationConfig = serde_json::from_str(
            r#"{"columns": {"color": {"values": "auto"}}, "name_template": "{label}"}"#,
        )
        .unwrap();
        let ctx = binarize(&t, &cfg).unwrap();
        assert_eq!(ctx.attribute_names(), &["blue", "green", "red"]);
        assert_eq!(ctx.row_items(0).as_slice(), &[2]);

        let listed: BinarizationConfig =
            serde_json::from_str(r#"{"color": {"values": ["red", "green"]}}"#).unwrap();
        assert!(matches!(
            binarize(&t, &listed),
            Err(Error::UncoveredValue { row: 1, .. })
        ));
    }

    #[test]
    fn equal_width_hand_binned() {
        // min 1, max 7, width 2: [1,3) [3,5) [5,7]
        let t = table(&["v"], &[&["1"], &["2"], &["3"], &["4"], &["7"]]);
        let cfg: BinarizationConfig = serde_json::from_str(r#"{"v": {"equal_width": 3}}"#).unwrap();
        let ctx = binarize(&t, &cfg).unwrap();
        assert_eq!(ctx.attribute_names(), &["v=[1,3)", "v=[3,5)", "v=[5,7]"]);
        let got: Vec<u32> = (0..5).map(|g| ctx.row_items(g).as_slice()[0]).collect();
        assert_eq!(got, vec![0, 0, 1, 1, 2]);
    }

    #[test]
    fn missing_rule_is_an_error() {
        let t = table(&["x", "y"], &[&["1", "2"]]);
        let cfg: BinarizationConfig = serde_json::from_str(r#"{"x": {"values": "auto"}}"#).unwrap();
        assert!(binarize(&t, &cfg).is_err());
    }
}
