use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use super::features::csv_error;
use super::key::{parse_key, InstanceKey};
use super::{format_value, KEY_COLUMNS};
use crate::error::{Error, Result};

const PERF_COLUMNS: [&str; 7] = [
    "suite",
    "problem_id",
    "instance_id",
    "dimension",
    "algorithm",
    "run",
    "value",
];

/// One fixed-budget run outcome: best target precision reached (lower is better).
#[derive(Debug, Clone, PartialEq)]
pub struct PerfRecord {
    pub key: InstanceKey,
    pub algorithm: String,
    pub run_index: usize,
    pub value: f64,
}

/// Raw run distributions per (instance, algorithm).
///
/// For every pair present the run indices form `0..R` without gaps or
/// duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceTable {
    records: Vec<PerfRecord>,
    algorithms: Vec<String>,
    keys: Vec<InstanceKey>,
    runs: HashMap<InstanceKey, HashMap<String, Vec<f64>>>,
}

impl PerformanceTable {
    pub fn new(records: Vec<PerfRecord>) -> Result<Self> {
        let mut algorithms: Vec<String> = Vec::new();
        let mut keys: Vec<InstanceKey> = Vec::new();
        let mut grouped: HashMap<InstanceKey, HashMap<String, BTreeMap<usize, f64>>> =
            HashMap::new();
        for rec in &records {
            if !rec.value.is_finite() || rec.value < 0.0 {
                return Err(Error::Integrity(format!(
                    "{} / {} run {}: target precision must be finite and non-negative, got {}",
                    rec.key, rec.algorithm, rec.run_index, rec.value
                )));
            }
            if !algorithms.contains(&rec.algorithm) {
                algorithms.push(rec.algorithm.clone());
            }
            let per_key = grouped.entry(rec.key.clone()).or_insert_with(|| {
                keys.push(rec.key.clone());
                HashMap::new()
            });
            let per_alg = per_key.entry(rec.algorithm.clone()).or_default();
            if per_alg.insert(rec.run_index, rec.value).is_some() {
                return Err(Error::Integrity(format!(
                    "{} / {}: duplicate run index {}",
                    rec.key, rec.algorithm, rec.run_index
                )));
            }
        }
        let mut runs = HashMap::with_capacity(grouped.len());
        for (key, per_key) in grouped {
            let mut out = HashMap::with_capacity(per_key.len());
            for (alg, by_run) in per_key {
                let r = by_run.len();
                if let Some((&last, _)) = by_run.iter().next_back() {
                    if last + 1 != r {
                        let present: Vec<String> =
                            by_run.keys().map(|i| i.to_string()).collect();
                        return Err(Error::Integrity(format!(
                            "{key} / {alg}: run indices {{{}}} are not 0..{}",
                            present.join(","),
                            r
                        )));
                    }
                }
                out.insert(alg, by_run.into_values().collect());
            }
            runs.insert(key, out);
        }
        Ok(Self {
            records,
            algorithms,
            keys,
            runs,
        })
    }

    pub fn records(&self) -> &[PerfRecord] {
        &self.records
    }

    /// Algorithm names in order of first appearance.
    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    /// Instance keys in order of first appearance.
    pub fn keys(&self) -> &[InstanceKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Run values ordered by run index.
    pub fn runs(&self, key: &InstanceKey, algorithm: &str) -> Option<&[f64]> {
        self.runs.get(key)?.get(algorithm).map(Vec::as_slice)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(PERF_COLUMNS).map_err(csv_error)?;
        for rec in &self.records {
            w.write_record([
                rec.key.suite.clone(),
                rec.key.problem_id.to_string(),
                rec.key.instance_id.to_string(),
                rec.key.dimension.to_string(),
                rec.algorithm.clone(),
                rec.run_index.to_string(),
                format_value(rec.value),
            ])
            .map_err(csv_error)?;
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

pub fn load_performance_table(path: impl AsRef<Path>) -> Result<PerformanceTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_performance_table(file, path)
}

pub fn read_performance_table<R: Read>(
    reader: R,
    source: impl AsRef<Path>,
) -> Result<PerformanceTable> {
    let source = source.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut it = rdr.records();
    let header = match it.next() {
        Some(r) => r.map_err(csv_error)?,
        None => {
            return Err(Error::Format {
                path: source.to_path_buf(),
                msg: "missing header row".into(),
            })
        }
    };
    let header: Vec<&str> = header.iter().map(str::trim).collect();
    if header != PERF_COLUMNS {
        return Err(Error::Format {
            path: source.to_path_buf(),
            msg: format!(
                "expected header {}, found `{}`",
                PERF_COLUMNS.join(","),
                header.join(",")
            ),
        });
    }
    let mut records = Vec::new();
    for (i, rec) in it.enumerate() {
        let row = i + 1;
        let rec = rec.map_err(csv_error)?;
        if rec.len() != PERF_COLUMNS.len() {
            return Err(Error::Parse {
                row,
                column: "*".into(),
                msg: format!("expected 7 cells, found {}", rec.len()),
            });
        }
        let cells: Vec<&str> = rec.iter().collect();
        let key = parse_key(&cells[..KEY_COLUMNS.len()], row)?;
        let algorithm = cells[4].trim();
        if algorithm.is_empty() {
            return Err(Error::Parse {
                row,
                column: "algorithm".into(),
                msg: "empty algorithm name".into(),
            });
        }
        let run_index = cells[5].trim().parse::<i64>().map_err(|_| Error::Parse {
            row,
            column: "run".into(),
            msg: format!("expected an integer, got `{}`", cells[5]),
        })?;
        if run_index < 0 {
            return Err(Error::Parse {
                row,
                column: "run".into(),
                msg: format!("negative run index {run_index}"),
            });
        }
        let value: f64 = cells[6].trim().parse().map_err(|_| Error::Parse {
            row,
            column: "value".into(),
            msg: format!("non-numeric value `{}`", cells[6]),
        })?;
        records.push(PerfRecord {
            key,
            algorithm: algorithm.to_string(),
            run_index: run_index as usize,
            value,
        });
    }
    PerformanceTable::new(records)
}
