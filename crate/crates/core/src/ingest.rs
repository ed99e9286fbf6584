//! Text loaders for benchmark tables and centroid files, and the matching
//! writers.
//!
//! Numbers are written in Rust's shortest round-trip decimal form, so a
//! written file loads back bit-for-bit.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Delimiter {
    Comma,
    Whitespace,
    Tab,
    Semicolon,
}

impl Delimiter {
    fn split<'a>(&self, line: &'a str) -> Vec<&'a str> {
        match self {
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Tab => line.split('\t').map(str::trim).collect(),
            Delimiter::Semicolon => line.split(';').map(str::trim).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub delimiter: Delimiter,
    /// 0-based columns to ignore.
    pub drop_columns: Vec<usize>,
    /// 0-based column holding class labels; excluded from the features.
    pub label_column: Option<usize>,
    /// z-score every feature (population variance).
    pub standardize: bool,
    pub has_header: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            delimiter: Delimiter::Comma,
            drop_columns: Vec::new(),
            label_column: None,
            standardize: false,
            has_header: false,
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.label_column {
            if self.drop_columns.contains(&l) {
                return Err(Error::InvalidParameter(format!(
                    "column {l} is both dropped and used as the label"
                )));
            }
        }
        Ok(())
    }
}

/// Known benchmark layouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub k: usize,
    pub config: IngestConfig,
}

/// Layout and cluster count for a known benchmark table. Files are
/// user-supplied; these presets assume the usual UCI/clustering-benchmark
/// layouts and fail loudly on anything else.
pub fn registry(name: &str) -> Option<RegistryEntry> {
    let comma = |drop: Vec<usize>, label: Option<usize>| IngestConfig {
        delimiter: Delimiter::Comma,
        drop_columns: drop,
        label_column: label,
        ..IngestConfig::default()
    };
    let points = IngestConfig {
        delimiter: Delimiter::Whitespace,
        ..IngestConfig::default()
    };
    let wine_quality = IngestConfig {
        delimiter: Delimiter::Semicolon,
        drop_columns: vec![11],
        has_header: true,
        ..IngestConfig::default()
    };
    let (name, k, config) = match name.to_ascii_lowercase().as_str() {
        "iris" => ("iris", 3, comma(vec![], Some(4))),
        "wine" => ("wine", 3, comma(vec![], Some(0))),
        "glass" => ("glass", 6, comma(vec![0], Some(10))),
        "winequality-red" | "red-wine" => ("winequality-red", 3, wine_quality),
        "winequality-white" | "white-wine" => ("winequality-white", 3, wine_quality),
        "a1" => ("a1", 20, points),
        "a2" => ("a2", 35, points),
        "a3" => ("a3", 50, points),
        "s1" => ("s1", 15, points),
        "s2" => ("s2", 15, points),
        "s3" => ("s3", 15, points),
        "s4" => ("s4", 15, points),
        _ => return None,
    };
    Some(RegistryEntry { name, k, config })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

fn parse_number(path: &Path, line: usize, column: usize, cell: &str) -> Result<f64> {
    let v: f64 = cell
        .parse()
        .map_err(|_| parse_error(path, line, column, format!("`{cell}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(path, line, column, "non-finite value"));
    }
    Ok(v)
}

/// Parses table text. `origin` only labels error messages.
pub fn parse_points(text: &str, config: &IngestConfig, origin: &Path) -> Result<Dataset> {
    config.validate()?;
    let mut width = None;
    let mut values = Vec::new();
    let mut raw_labels = Vec::new();
    let mut rows = 0;
    let mut feature_cols = 0;
    let body = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .skip(usize::from(config.has_header));
    for (idx, line) in body {
        let lineno = idx + 1;
        let cells = config.delimiter.split(line.trim());
        match width {
            None => {
                if let Some(&c) = config
                    .drop_columns
                    .iter()
                    .chain(config.label_column.iter())
                    .find(|&&c| c >= cells.len())
                {
                    return Err(parse_error(
                        origin,
                        lineno,
                        c + 1,
                        format!("column {c} does not exist in a row of {} cells", cells.len()),
                    ));
                }
                width = Some(cells.len());
            }
            Some(w) if w != cells.len() => {
                return Err(parse_error(
                    origin,
                    lineno,
                    cells.len().min(w) + 1,
                    format!("expected {w} cells, found {}", cells.len()),
                ));
            }
            Some(_) => {}
        }
        feature_cols = 0;
        for (c, cell) in cells.iter().enumerate() {
            if config.label_column == Some(c) {
                raw_labels.push(cell.to_string());
            } else if !config.drop_columns.contains(&c) {
                values.push(parse_number(origin, lineno, c + 1, cell)?);
                feature_cols += 1;
            }
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::InvalidDataset(format!("{}: no data rows", origin.display())));
    }
    let mut points = Matrix::from_vec(rows, feature_cols, values)?;
    if config.standardize {
        standardize(&mut points);
    }
    let name = origin
        .file_stem()
        .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    let dataset = Dataset::new(name, points)?;
    if config.label_column.is_some() {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let labels = raw_labels
            .into_iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        dataset.with_truth_labels(labels)
    } else {
        Ok(dataset)
    }
}

/// z-scores each column in place; constant columns are only centered.
pub fn standardize(points: &mut Matrix) {
    let (n, p) = points.shape();
    for j in 0..p {
        let mean = (0..n).map(|i| points.get(i, j)).sum::<f64>() / n as f64;
        let var = (0..n).map(|i| (points.get(i, j) - mean).powi(2)).sum::<f64>() / n as f64;
        let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
        for i in 0..n {
            points.set(i, j, (points.get(i, j) - mean) / sd);
        }
    }
}

pub fn load_points(path: impl AsRef<Path>, config: &IngestConfig) -> Result<Dataset> {
    let path = path.as_ref();
    parse_points(&read(path)?, config, path)
}

/// Loads one centroid per row; cells may be separated by commas or
/// whitespace. K is the number of rows.
pub fn load_centroids(path: impl AsRef<Path>, p: usize) -> Result<Matrix> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut values = Vec::new();
    let mut rows = 0;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|c| !c.is_empty())
            .collect();
        if cells.len() != p {
            return Err(parse_error(
                path,
                idx + 1,
                cells.len().min(p) + 1,
                format!("expected {p} values, found {}", cells.len()),
            ));
        }
        for (c, cell) in cells.iter().enumerate() {
            values.push(parse_number(path, idx + 1, c + 1, cell)?);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyCentroids);
    }
    Matrix::from_vec(rows, p, values)
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn push_row(out: &mut String, row: &[f64]) {
    for (j, v) in row.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        write!(out, "{v:?}").expect("writing to a String");
    }
}

/// Comma-separated matrix text, one row per line.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for row in m.iter_rows() {
        push_row(&mut out, row);
        out.push('\n');
    }
    out
}

pub fn write_centroids(path: impl AsRef<Path>, centroids: &Matrix) -> Result<()> {
    write(path.as_ref(), &format_matrix(centroids))
}

/// Writes a dataset as comma-separated text. Truth labels, when present, go
/// in a trailing `label` column (0-based), so the file reloads with
/// `label_column = Some(p)`.
pub fn write_points(path: impl AsRef<Path>, data: &Dataset, header: bool) -> Result<()> {
    let mut out = String::new();
    let labels = data.truth_labels();
    if header {
        let mut names: Vec<String> = (0..data.p()).map(|j| format!("x{}", j + 1)).collect();
        if labels.is_some() {
            names.push("label".into());
        }
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for i in 0..data.n() {
        push_row(&mut out, data.point(i));
        if let Some(l) = labels {
            write!(out, ",{}", l[i]).expect("writing to a String");
        }
        out.push('\n');
    }
    write(path.as_ref(), &out)
}

/// One label per line (1-based, matching the usual class numbering).
pub fn format_labels(labels: &[usize]) -> String {
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels {
        writeln!(out, "{}", l + 1).expect("writing to a String");
    }
    out
}

pub fn write_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    write(path.as_ref(), &format_labels(labels))
}

pub(crate) fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    write(path.as_ref(), text)
}
