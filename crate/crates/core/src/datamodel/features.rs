use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use super::key::{parse_key, InstanceKey};
use super::{format_value, KEY_COLUMNS};
use crate::error::{Error, Result};

/// Instance-keyed matrix of landscape feature values.
///
/// Rows are aligned to `keys`, columns to `feature_names`. Every entry is
/// finite and keys are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    keys: Vec<InstanceKey>,
    feature_names: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn new(
        keys: Vec<InstanceKey>,
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if keys.len() != rows.len() {
            return Err(Error::Integrity(format!(
                "{} keys but {} rows",
                keys.len(),
                rows.len()
            )));
        }
        let mut seen = HashSet::with_capacity(keys.len());
        for key in &keys {
            if !seen.insert(key) {
                return Err(Error::Integrity(format!("duplicate instance key {key}")));
            }
        }
        let mut names = HashSet::with_capacity(feature_names.len());
        for name in &feature_names {
            if !names.insert(name.as_str()) {
                return Err(Error::Integrity(format!("duplicate feature column `{name}`")));
            }
        }
        for (key, row) in keys.iter().zip(&rows) {
            if row.len() != feature_names.len() {
                return Err(Error::Integrity(format!(
                    "row {key} has {} values, expected {}",
                    row.len(),
                    feature_names.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Integrity(format!(
                    "non-finite value in row {key}, column `{}`",
                    feature_names[j]
                )));
            }
        }
        Ok(Self {
            keys,
            feature_names,
            rows,
        })
    }

    pub fn keys(&self) -> &[InstanceKey] {
        &self.keys
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn row_index(&self, key: &InstanceKey) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Removes the named columns. Every name must exist.
    pub fn drop_columns<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let mut drop = vec![false; self.feature_names.len()];
        for name in names {
            let j = self.column_index(name.as_ref()).ok_or_else(|| {
                Error::Integrity(format!("cannot drop absent column `{}`", name.as_ref()))
            })?;
            drop[j] = true;
        }
        let keep: Vec<usize> = (0..drop.len()).filter(|&j| !drop[j]).collect();
        Ok(Self {
            keys: self.keys.clone(),
            feature_names: keep.iter().map(|&j| self.feature_names[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| keep.iter().map(|&j| r[j]).collect())
                .collect(),
        })
    }

    /// Sub-table with the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            keys: indices.iter().map(|&i| self.keys[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Per-column min-max rescale to `[0, 1]`; constant columns map to 0.
    pub fn min_max_scaled(&self) -> Self {
        let mut rows = self.rows.clone();
        for j in 0..self.n_features() {
            let (lo, hi) = self
                .rows
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r[j]), hi.max(r[j]))
                });
            let span = hi - lo;
            for r in rows.iter_mut() {
                r[j] = if span > 0.0 { (r[j] - lo) / span } else { 0.0 };
            }
        }
        Self {
            keys: self.keys.clone(),
            feature_names: self.feature_names.clone(),
            rows,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let header = KEY_COLUMNS
            .iter()
            .map(|s| s.to_string())
            .chain(self.feature_names.iter().cloned());
        w.write_record(header).map_err(csv_error)?;
        for (key, row) in self.keys.iter().zip(&self.rows) {
            let record = [
                key.suite.clone(),
                key.problem_id.to_string(),
                key.instance_id.to_string(),
                key.dimension.to_string(),
            ]
            .into_iter()
            .chain(row.iter().map(|&v| format_value(v)));
            w.write_record(record).map_err(csv_error)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Integrity(format!("csv: {e}"))
}

/// Loads `features.csv`, removing `drop_columns` before any value is parsed.
pub fn load_feature_table<S: AsRef<str>>(
    path: impl AsRef<Path>,
    drop_columns: &[S],
) -> Result<FeatureTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_feature_table(file, drop_columns, path)
}

pub fn read_feature_table<R: Read, S: AsRef<str>>(
    reader: R,
    drop_columns: &[S],
    source: impl AsRef<Path>,
) -> Result<FeatureTable> {
    let source = source.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(csv_error)?,
        None => {
            return Err(Error::Format {
                path: source.to_path_buf(),
                msg: "missing header row".into(),
            })
        }
    };
    let header: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
    if header.len() < KEY_COLUMNS.len()
        || header.iter().zip(KEY_COLUMNS).any(|(h, k)| h != k)
    {
        return Err(Error::Format {
            path: source.to_path_buf(),
            msg: format!(
                "header must start with {}, found `{}`",
                KEY_COLUMNS.join(","),
                header.join(",")
            ),
        });
    }
    let feature_header = &header[KEY_COLUMNS.len()..];
    let mut position: HashMap<&str, usize> = HashMap::new();
    for (j, name) in feature_header.iter().enumerate() {
        if position.insert(name.as_str(), j).is_some() {
            return Err(Error::Format {
                path: source.to_path_buf(),
                msg: format!("duplicate column `{name}`"),
            });
        }
    }
    let mut keep = vec![true; feature_header.len()];
    for name in drop_columns {
        let name = name.as_ref();
        let j = position.get(name).ok_or_else(|| Error::Format {
            path: source.to_path_buf(),
            msg: format!("column `{name}` requested for dropping is not in the header"),
        })?;
        keep[*j] = false;
    }
    let feature_names: Vec<String> = feature_header
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(n, _)| n.clone())
        .collect();

    let mut keys = Vec::new();
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in records.enumerate() {
        let row_no = i + 1;
        let record = record.map_err(csv_error)?;
        if record.len() != header.len() {
            return Err(Error::Parse {
                row: row_no,
                column: "*".into(),
                msg: format!("expected {} cells, found {}", header.len(), record.len()),
            });
        }
        let cells: Vec<&str> = record.iter().collect();
        let key = parse_key(&cells[..4], row_no)?;
        if !seen.insert(key.clone()) {
            return Err(Error::Integrity(format!(
                "duplicate instance key {key} (suite={}, dimension={}) at row {row_no}",
                key.suite, key.dimension
            )));
        }
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, cell) in cells[4..].iter().enumerate() {
            if !keep[j] {
                continue;
            }
            let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                row: row_no,
                column: feature_header[j].clone(),
                msg: format!("non-numeric value `{cell}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row: row_no,
                    column: feature_header[j].clone(),
                    msg: format!("non-finite value `{cell}`; drop the column explicitly"),
                });
            }
            row.push(v);
        }
        keys.push(key);
        rows.push(row);
    }
    FeatureTable::new(keys, feature_names, rows)
}

/// Cell-wise median over repeated feature tables.
///
/// Even counts average the two central values. All tables must share keys and
/// columns in identical order.
pub fn median_aggregate(tables: &[FeatureTable]) -> Result<FeatureTable> {
    let first = tables
        .first()
        .ok_or_else(|| Error::Alignment("no tables to aggregate".into()))?;
    for (t, other) in tables.iter().enumerate().skip(1) {
        if other.keys != first.keys {
            return Err(Error::Alignment(format!("table {t} has different instance keys")));
        }
        if other.feature_names != first.feature_names {
            return Err(Error::Alignment(format!("table {t} has different feature columns")));
        }
    }
    let mut buf = vec![0.0; tables.len()];
    let rows = (0..first.n_rows())
        .map(|i| {
            (0..first.n_features())
                .map(|j| {
                    for (slot, t) in buf.iter_mut().zip(tables) {
                        *slot = t.rows[i][j];
                    }
                    median_in_place(&mut buf)
                })
                .collect()
        })
        .collect();
    Ok(FeatureTable {
        keys: first.keys.clone(),
        feature_names: first.feature_names.clone(),
        rows,
    })
}

pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
