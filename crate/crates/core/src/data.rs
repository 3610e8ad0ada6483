//! Record types, dataset containers and flat-file ingestion.
//!
//! The interchange format is CSV with a required header:
//! `id,p[,label][,group][,time,event],f0..f{d-1}` (event encoded 1/0, missing
//! optional fields as empty cells). JSON-lines files with the same field
//! names are accepted as an alternate. Column names are remappable through
//! [`CsvSchema`].
//!
//! Datasets are immutable after load. A dataset loaded or constructed with
//! the `Wild` role never carries labels: ground truth for wild data lives in
//! a separate sidecar file keyed by record id ([`SidecarLabels`]) that only
//! oracle-side code consumes.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One data point: features, the inference model's positive-class
/// probability when available, and optional label/group/survival fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub features: Vec<f64>,
    /// Positive-class probability assigned by the inference model. Absent on
    /// source splits that no model has scored yet.
    pub p: Option<f64>,
    pub label: Option<usize>,
    pub group: Option<String>,
    pub survival_time: Option<f64>,
    pub event: Option<bool>,
}

impl PredictionRecord {
    pub fn new(id: impl Into<String>, features: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            features,
            p: None,
            label: None,
            group: None,
            survival_time: None,
            event: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidRecord {
                    id: self.id.clone(),
                    message: format!("p={p} outside [0, 1]"),
                });
            }
        }
        if self.survival_time.is_some() != self.event.is_some() {
            return Err(Error::InvalidRecord {
                id: self.id.clone(),
                message: "survival time and event flag must be present together".into(),
            });
        }
        if let Some(t) = self.survival_time {
            if t < 0.0 || !t.is_finite() {
                return Err(Error::InvalidRecord {
                    id: self.id.clone(),
                    message: format!("survival time {t} is negative or non-finite"),
                });
            }
        }
        Ok(())
    }
}

/// Which split a dataset plays in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetRole {
    Train,
    HeldOut,
    Wild,
}

impl DatasetRole {
    pub fn requires_labels(self) -> bool {
        matches!(self, DatasetRole::Train | DatasetRole::HeldOut)
    }
}

impl fmt::Display for DatasetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetRole::Train => write!(f, "train"),
            DatasetRole::HeldOut => write!(f, "held_out"),
            DatasetRole::Wild => write!(f, "wild"),
        }
    }
}

/// An ordered, immutable collection of records with a fixed role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    role: DatasetRole,
    records: Vec<PredictionRecord>,
}

impl Dataset {
    /// Validates role requirements, probability bounds, id uniqueness and
    /// dimension consistency, then freezes the records.
    pub fn new(records: Vec<PredictionRecord>, role: DatasetRole) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let dim = records[0].features.len();
        let mut seen = HashSet::with_capacity(records.len());
        for record in &records {
            record.validate()?;
            if !seen.insert(record.id.as_str()) {
                return Err(Error::DuplicateId {
                    id: record.id.clone(),
                });
            }
            if record.features.len() != dim {
                return Err(Error::InvalidRecord {
                    id: record.id.clone(),
                    message: format!(
                        "feature dimension {} differs from first record's {dim}",
                        record.features.len()
                    ),
                });
            }
            if role.requires_labels() && record.label.is_none() {
                return Err(Error::InvalidRecord {
                    id: record.id.clone(),
                    message: format!("role {role} requires a label on every record"),
                });
            }
            if role == DatasetRole::Wild && record.label.is_some() {
                return Err(Error::InvalidRecord {
                    id: record.id.clone(),
                    message: "wild records must not carry labels; use a sidecar file".into(),
                });
            }
        }
        Ok(Self { role, records })
    }

    pub fn role(&self) -> DatasetRole {
        self.role
    }

    pub fn records(&self) -> &[PredictionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Feature dimension shared by every record.
    pub fn dimension(&self) -> usize {
        self.records[0].features.len()
    }

    /// Labels of every record. Refused for wild datasets: wild ground truth
    /// is only reachable through the oracle sidecar.
    pub fn labels(&self) -> Result<Vec<usize>> {
        if self.role == DatasetRole::Wild {
            return Err(Error::WildLabelsInaccessible);
        }
        Ok(self
            .records
            .iter()
            .map(|r| r.label.expect("labelled role"))
            .collect())
    }

    /// Probability of every record; errors on the first record missing one.
    pub fn probabilities(&self) -> Result<Vec<f64>> {
        self.records
            .iter()
            .map(|r| {
                r.p.ok_or_else(|| Error::MissingProbability {
                    id: r.id.clone(),
                    role: self.role.to_string(),
                })
            })
            .collect()
    }

    /// Distinct class indices present, ascending.
    pub fn classes(&self) -> Result<Vec<usize>> {
        let mut classes: Vec<usize> = self
            .labels()?
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        classes.sort_unstable();
        Ok(classes)
    }

    /// Returns a copy with probabilities replaced record-by-record.
    pub fn with_probabilities(&self, p: &[f64]) -> Result<Dataset> {
        if p.len() != self.records.len() {
            return Err(Error::LengthMismatch {
                left: self.records.len(),
                right: p.len(),
            });
        }
        let records = self
            .records
            .iter()
            .zip(p)
            .map(|(r, &p)| {
                let mut r = r.clone();
                r.p = Some(p);
                r
            })
            .collect();
        Dataset::new(records, self.role)
    }
}

/// Splits labels off a record batch: returns the stripped records plus a
/// sidecar map of the labels that were removed. Used when manufacturing wild
/// datasets from labelled material.
pub fn split_hidden_labels(
    records: Vec<PredictionRecord>,
) -> (Vec<PredictionRecord>, SidecarLabels) {
    let mut sidecar = SidecarLabels::default();
    let stripped = records
        .into_iter()
        .map(|mut r| {
            if let Some(label) = r.label.take() {
                sidecar.insert(r.id.clone(), label);
            }
            r
        })
        .collect();
    (stripped, sidecar)
}

/// Hidden ground-truth labels for wild records, keyed by record id.
/// Only oracle-side validation reads these.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidecarLabels {
    map: BTreeMap<String, usize>,
}

impl SidecarLabels {
    pub fn insert(&mut self, id: String, label: usize) {
        self.map.insert(id, label);
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.map.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.map.iter().map(|(id, &label)| (id.as_str(), label))
    }

    /// Largest class index present plus one.
    pub fn class_count(&self) -> usize {
        self.map.values().max().map_or(0, |&c| c + 1)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv_reader(path)?;
        let mut map = BTreeMap::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| csv_err(path, e))?;
            let id = row
                .get(0)
                .ok_or_else(|| malformed(path, i + 2, "missing id column"))?;
            let label: usize = row
                .get(1)
                .ok_or_else(|| malformed(path, i + 2, "missing label column"))?
                .trim()
                .parse()
                .map_err(|_| malformed(path, i + 2, "label is not a class index"))?;
            map.insert(id.to_string(), label);
        }
        Ok(Self { map })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::from("id,label\n");
        for (id, label) in &self.map {
            out.push_str(id);
            out.push(',');
            out.push_str(&label.to_string());
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| io_err(path, e))
    }
}

/// Column mapping for flat files. `None` feature columns means every column
/// not claimed by another field is a feature, in header order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsvSchema {
    pub id: String,
    pub p: String,
    pub label: String,
    pub group: String,
    pub time: String,
    pub event: String,
    pub feature_cols: Option<Vec<String>>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            id: "id".into(),
            p: "p".into(),
            label: "label".into(),
            group: "group".into(),
            time: "time".into(),
            event: "event".into(),
            feature_cols: None,
        }
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| csv_err(path, e))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source: e,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.display().to_string(),
        source: e,
    }
}

fn malformed(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::MalformedRow {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Loads a dataset from CSV (default) or JSON-lines (`.jsonl` / `.ndjson`).
///
/// Row order is preserved. Train and held-out roles must carry a label on
/// every row; a label column in a wild file is ignored (the values never
/// reach the dataset). All floats are parsed as plain decimal.
pub fn load_dataset(
    path: impl AsRef<Path>,
    schema: &CsvSchema,
    role: DatasetRole,
) -> Result<Dataset> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") | Some("ndjson") => load_jsonl(path, schema, role),
        _ => load_csv(path, schema, role),
    }
}

fn parse_float(path: &Path, line: usize, field: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| malformed(path, line, format!("{field}={raw:?} is not a number")))
}

fn load_csv(path: &Path, schema: &CsvSchema, role: DatasetRole) -> Result<Dataset> {
    let mut reader = csv_reader(path)?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let find = |name: &str| headers.iter().position(|h| h == name);
    let id_col = find(&schema.id).ok_or_else(|| malformed(path, 1, "missing id column"))?;
    let p_col = find(&schema.p);
    let label_col = find(&schema.label);
    let group_col = find(&schema.group);
    let time_col = find(&schema.time);
    let event_col = find(&schema.event);

    let feature_cols: Vec<usize> = match &schema.feature_cols {
        Some(names) => names
            .iter()
            .map(|n| {
                find(n).ok_or_else(|| malformed(path, 1, format!("missing feature column {n:?}")))
            })
            .collect::<Result<_>>()?,
        None => {
            let claimed: HashSet<usize> = [
                Some(id_col),
                p_col,
                label_col,
                group_col,
                time_col,
                event_col,
            ]
            .into_iter()
            .flatten()
            .collect();
            (0..headers.len())
                .filter(|i| !claimed.contains(i))
                .collect()
        }
    };

    let mut records = Vec::new();
    let mut dim: Option<usize> = None;
    for (i, row) in reader.records().enumerate() {
        let line = i + 2; // 1-based, after the header
        let row = row.map_err(|e| csv_err(path, e))?;
        let get = |col: usize| row.get(col).unwrap_or("").trim();

        let id = get(id_col).to_string();
        if id.is_empty() {
            return Err(malformed(path, line, "empty id"));
        }

        let p = match p_col {
            Some(col) if !get(col).is_empty() => {
                let value = parse_float(path, line, &schema.p, get(col))?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::ProbabilityOutOfRange {
                        path: path.display().to_string(),
                        line,
                        value,
                    });
                }
                Some(value)
            }
            _ => None,
        };

        let label = match label_col {
            Some(col) if !get(col).is_empty() => Some(get(col).parse::<usize>().map_err(|_| {
                malformed(
                    path,
                    line,
                    format!("label {:?} is not a class index", get(col)),
                )
            })?),
            _ => None,
        };
        if role.requires_labels() && label.is_none() {
            return Err(Error::MissingLabel {
                path: path.display().to_string(),
                line,
                role: role.to_string(),
            });
        }

        let group = match group_col {
            Some(col) if !get(col).is_empty() => Some(get(col).to_string()),
            _ => None,
        };

        let survival_time = match time_col {
            Some(col) if !get(col).is_empty() => {
                Some(parse_float(path, line, &schema.time, get(col))?)
            }
            _ => None,
        };
        let event = match event_col {
            Some(col) if !get(col).is_empty() => Some(match get(col) {
                "1" => true,
                "0" => false,
                other => {
                    return Err(malformed(
                        path,
                        line,
                        format!("event {other:?} must be 1 or 0"),
                    ))
                }
            }),
            _ => None,
        };

        let mut features = Vec::with_capacity(feature_cols.len());
        for &col in &feature_cols {
            features.push(parse_float(path, line, &headers[col], get(col))?);
        }
        match dim {
            None => dim = Some(features.len()),
            Some(d) if d != features.len() => {
                return Err(Error::InconsistentDimension {
                    path: path.display().to_string(),
                    line,
                    expected: d,
                    found: features.len(),
                })
            }
            _ => {}
        }

        records.push(PredictionRecord {
            id,
            features,
            p,
            // Wild ground truth never enters the dataset.
            label: if role == DatasetRole::Wild {
                None
            } else {
                label
            },
            group,
            survival_time,
            event,
        });
    }

    Dataset::new(records, role).map_err(|e| match e {
        Error::EmptyDataset => malformed(path, 2, "file contains no data rows"),
        other => other,
    })
}

fn load_jsonl(path: &Path, schema: &CsvSchema, role: DatasetRole) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut records = Vec::new();
    let mut dim: Option<usize> = None;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line)
            .map_err(|e| malformed(path, line_no, format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| malformed(path, line_no, "line is not a JSON object"))?;

        let id = obj
            .get(&schema.id)
            .and_then(|v| v.as_str())
            .ok_or_else(|| malformed(path, line_no, "missing string id"))?
            .to_string();
        let p = match obj.get(&schema.p) {
            Some(v) if !v.is_null() => {
                let value = v
                    .as_f64()
                    .ok_or_else(|| malformed(path, line_no, "p is not a number"))?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::ProbabilityOutOfRange {
                        path: path.display().to_string(),
                        line: line_no,
                        value,
                    });
                }
                Some(value)
            }
            _ => None,
        };
        let label = match obj.get(&schema.label) {
            Some(v) if !v.is_null() => Some(
                v.as_u64()
                    .ok_or_else(|| malformed(path, line_no, "label is not a class index"))?
                    as usize,
            ),
            _ => None,
        };
        if role.requires_labels() && label.is_none() {
            return Err(Error::MissingLabel {
                path: path.display().to_string(),
                line: line_no,
                role: role.to_string(),
            });
        }
        let group = match obj.get(&schema.group) {
            Some(v) if !v.is_null() => Some(
                v.as_str()
                    .ok_or_else(|| malformed(path, line_no, "group is not a string"))?
                    .to_string(),
            ),
            _ => None,
        };
        let survival_time = match obj.get(&schema.time) {
            Some(v) if !v.is_null() => Some(
                v.as_f64()
                    .ok_or_else(|| malformed(path, line_no, "time is not a number"))?,
            ),
            _ => None,
        };
        let event = match obj.get(&schema.event) {
            Some(v) if !v.is_null() => Some(match (v.as_bool(), v.as_u64()) {
                (Some(b), _) => b,
                (_, Some(1)) => true,
                (_, Some(0)) => false,
                _ => return Err(malformed(path, line_no, "event must be boolean or 1/0")),
            }),
            _ => None,
        };

        // Feature keys f0..f{d-1}, gathered in index order.
        let mut features = Vec::new();
        while let Some(v) = obj.get(&format!("f{}", features.len())) {
            features.push(
                v.as_f64()
                    .ok_or_else(|| malformed(path, line_no, "feature is not a number"))?,
            );
        }
        match dim {
            None => dim = Some(features.len()),
            Some(d) if d != features.len() => {
                return Err(Error::InconsistentDimension {
                    path: path.display().to_string(),
                    line: line_no,
                    expected: d,
                    found: features.len(),
                })
            }
            _ => {}
        }

        records.push(PredictionRecord {
            id,
            features,
            p,
            label: if role == DatasetRole::Wild {
                None
            } else {
                label
            },
            group,
            survival_time,
            event,
        });
    }
    Dataset::new(records, role)
}

fn format_float(x: f64) -> String {
    format!("{x}")
}

/// Writes the canonical CSV form: optional columns appear when any record
/// populates them, floats use the shortest round-trip decimal form. Loading
/// a canonical file and writing it back reproduces it byte-for-byte.
pub fn write_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let records = dataset.records();
    let has_p = records.iter().any(|r| r.p.is_some());
    let has_label = records.iter().any(|r| r.label.is_some());
    let has_group = records.iter().any(|r| r.group.is_some());
    let has_survival = records.iter().any(|r| r.survival_time.is_some());
    let dim = dataset.dimension();

    let mut out = String::new();
    out.push_str("id");
    if has_p {
        out.push_str(",p");
    }
    if has_label {
        out.push_str(",label");
    }
    if has_group {
        out.push_str(",group");
    }
    if has_survival {
        out.push_str(",time,event");
    }
    for i in 0..dim {
        out.push_str(&format!(",f{i}"));
    }
    out.push('\n');

    for r in records {
        out.push_str(&r.id);
        if has_p {
            out.push(',');
            if let Some(p) = r.p {
                out.push_str(&format_float(p));
            }
        }
        if has_label {
            out.push(',');
            if let Some(label) = r.label {
                out.push_str(&label.to_string());
            }
        }
        if has_group {
            out.push(',');
            if let Some(group) = &r.group {
                out.push_str(group);
            }
        }
        if has_survival {
            out.push(',');
            if let Some(t) = r.survival_time {
                out.push_str(&format_float(t));
            }
            out.push(',');
            if let Some(event) = r.event {
                out.push(if event { '1' } else { '0' });
            }
        }
        for x in &r.features {
            out.push(',');
            out.push_str(&format_float(*x));
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Canonical JSON-lines form, same field names as the CSV columns.
pub fn write_dataset_jsonl(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    for r in dataset.records() {
        let mut obj = serde_json::Map::new();
        obj.insert("id".into(), r.id.clone().into());
        if let Some(p) = r.p {
            obj.insert("p".into(), p.into());
        }
        if let Some(label) = r.label {
            obj.insert("label".into(), label.into());
        }
        if let Some(group) = &r.group {
            obj.insert("group".into(), group.clone().into());
        }
        if let Some(t) = r.survival_time {
            obj.insert("time".into(), t.into());
            obj.insert("event".into(), u64::from(r.event.unwrap_or(false)).into());
        }
        for (i, x) in r.features.iter().enumerate() {
            obj.insert(format!("f{i}"), (*x).into());
        }
        serde_json::to_writer(&mut w, &serde_json::Value::Object(obj))
            .map_err(|e| malformed(path, 0, e.to_string()))?;
        w.write_all(b"\n").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}
