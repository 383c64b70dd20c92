//! Dataset loaders and report serialization.
//!
//! Transaction files hold one object per non-empty line, each a
//! whitespace-separated list of non-negative integer attribute ids. The
//! attribute count is `max id + 1` unless a names sidecar (one attribute
//! name per line) is given.

mod report;

pub use report::{
    read_report, write_report, AnalysisSection, DatasetDescriptor, MiningMetadata, Report,
    ReportEntry, ReportFormat, StructureSection, SCHEMA_VERSION,
};

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use crate::context::{binarize, BinarizationConfig, FormalContext, ManyValuedTable};
use crate::error::{Error, Result};

/// A loaded context plus non-fatal findings about the input.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub context: FormalContext,
    pub warnings: Vec<String>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Reads a transaction file.
pub fn load_transactions(path: impl AsRef<Path>) -> Result<Loaded> {
    let path = path.as_ref();
    parse_transactions(open(path)?, path, None)
}

/// Reads a transaction file with attribute names from `names`.
pub fn load_transactions_with_names(
    path: impl AsRef<Path>,
    names: impl AsRef<Path>,
) -> Result<Loaded> {
    let path = path.as_ref();
    let names = read_lines(names.as_ref())?;
    parse_transactions(open(path)?, path, Some(names))
}

/// Parses transactions from any reader; `source` is only used in messages.
pub fn parse_transactions<R: Read>(
    reader: R,
    source: &Path,
    attribute_names: Option<Vec<String>>,
) -> Result<Loaded> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let id: u32 = tok.parse().map_err(|_| Error::Parse {
                path: source.to_path_buf(),
                line: line_no,
                message: format!("{tok:?} is not a non-negative integer item id"),
            })?;
            row.push(id);
        }
        let before = row.len();
        row.sort_unstable();
        row.dedup();
        if row.len() != before {
            warnings.push(format!(
                "{}:{line_no}: duplicate item ids removed",
                source.display()
            ));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        warnings.push(format!(
            "{}: no transactions, context is empty",
            source.display()
        ));
    }
    let max_id = rows.iter().filter_map(|r| r.last()).max().copied();
    let needed = max_id.map_or(0, |m| m as usize + 1);
    let attribute_names = match attribute_names {
        Some(names) if names.len() < needed => {
            return Err(Error::invalid(format!(
                "{}: item id {} but only {} attribute names",
                source.display(),
                needed - 1,
                names.len()
            )))
        }
        Some(names) => names,
        None => (0..needed).map(|m| m.to_string()).collect(),
    };
    let object_names = (0..rows.len()).map(|g| g.to_string()).collect();
    Ok(Loaded {
        context: FormalContext::from_rows(object_names, attribute_names, rows)?,
        warnings,
    })
}

/// Non-empty trimmed lines of a text file.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in open(path)?.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        if !t.is_empty() {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

pub fn read_binarization_config(path: impl AsRef<Path>) -> Result<BinarizationConfig> {
    let path = path.as_ref();
    serde_json::from_reader(open(path)?).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// A binarized CSV file, with the optional label column split off.
#[derive(Clone, Debug)]
pub struct CsvLoaded {
    pub context: FormalContext,
    pub labels: Option<Vec<String>>,
}

/// Reads a CSV file with a header row into a many-valued table.
///
/// `label_column`, if given, is removed from the table and returned as the
/// per-row label list.
pub fn read_csv_table(
    path: impl AsRef<Path>,
    label_column: Option<&str>,
) -> Result<(ManyValuedTable, Option<Vec<String>>)> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(open(path)?);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let label_idx = match label_column {
        Some(name) => Some(headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::invalid(format!("{}: no column named {name:?}", path.display()))
        })?),
        None => None,
    };
    let columns = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    let mut rows = Vec::new();
    let mut labels = label_idx.map(|_| Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let mut row = Vec::with_capacity(headers.len());
        for (i, cell) in rec.iter().enumerate() {
            if Some(i) == label_idx {
                labels.as_mut().unwrap().push(cell.trim().to_string());
            } else {
                row.push(cell.to_string());
            }
        }
        rows.push(row);
    }
    let table = ManyValuedTable {
        object_names: (0..rows.len()).map(|g| g.to_string()).collect(),
        columns,
        rows,
    };
    Ok((table, labels))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}

/// Reads and binarizes a CSV file.
pub fn load_csv(
    path: impl AsRef<Path>,
    cfg: &BinarizationConfig,
    label_column: Option<&str>,
) -> Result<CsvLoaded> {
    let (table, labels) = read_csv_table(path, label_column)?;
    Ok(CsvLoaded {
        context: binarize(&table, cfg)?,
        labels,
    })
}

/// Path helper for the tabular report files.
pub(crate) fn table_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.tsv"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::ItemSet;

    fn parse(text: &str) -> Result<Loaded> {
        parse_transactions(text.as_bytes(), Path::new("test.dat"), None)
    }

    #[test]
    fn running_example_file() {
        let loaded = parse("0 1 2\n0 2 3\n0 3 4\n2 3\n1 3 4 5\n1 4 5\n").unwrap();
        let ctx = loaded.context;
        assert!(loaded.warnings.is_empty());
        assert_eq!((ctx.n_objects(), ctx.n_attributes()), (6, 6));
        assert_eq!(ctx.row_items(4), ItemSet::new(vec![1, 3, 4, 5]).unwrap());
        assert_eq!(ctx.incidence_count(), 18);
    }

    #[test]
    fn single_item() {
        let ctx = parse("0\n").unwrap().context;
        assert_eq!((ctx.n_objects(), ctx.n_attributes()), (1, 1));
    }

    #[test]
    fn duplicates_are_warned_about() {
        let loaded = parse("0 0 1\n").unwrap();
        assert_eq!(loaded.context.row_items(0).as_slice(), &[0, 1]);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn bad_token_reports_line() {
        match parse("0 1\n\n2 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse("-1\n").is_err());
    }

    #[test]
    fn empty_file_warns() {
        let loaded = parse("").unwrap();
        assert_eq!(loaded.context.n_objects(), 0);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn names_must_cover_ids() {
        let names = vec!["x".to_string()];
        assert!(parse_transactions("0 1\n".as_bytes(), Path::new("t"), Some(names)).is_err());
        let names = vec!["x".into(), "y".into(), "z".into()];
        let ctx = parse_transactions("0 1\n".as_bytes(), Path::new("t"), Some(names))
            .unwrap()
            .context;
        assert_eq!(ctx.n_attributes(), 3);
    }

    #[test]
    fn deterministic() {
        let text = "3 1\n0 2\n";
        assert_eq!(parse(text).unwrap().context, parse(text).unwrap().context);
    }
}
