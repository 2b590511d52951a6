//! Loading, validation and joining of the three input artifacts: the item
//! bank, the candidate answer distributions and the model predictions.
//!
//! Items and distributions are read either as a JSON array of records or as
//! line-delimited JSON (one record per line). Predictions are a single JSON
//! object `{"variant": "QOC"|"QO", "entries": {item_id: [p, ...]}}`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Finding, Result};
use crate::numeric::{floor_probabilities, renormalize, SUM_TOLERANCE};

/// Pretest convention: an item's statistics are trusted once at least this
/// many candidates answered it.
pub const MIN_CANDIDATES: u32 = 100;

/// Default proficiency levels.
pub const DEFAULT_LEVELS: [&str; 4] = ["B1", "B2", "C1", "C2"];

/// One multiple-choice item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub item_id: String,
    pub context_id: String,
    pub context: String,
    pub question: String,
    pub options: Vec<String>,
    pub answer_index: usize,
    pub level: String,
    /// Option-level discrimination values, carried through untouched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrimination: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate_count: Option<u32>,
}

impl Item {
    pub fn option_count(&self) -> usize {
        self.options.len()
    }
}

/// Fraction of candidates selecting each option of one item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateDistribution {
    pub item_id: String,
    pub fractions: Vec<f64>,
}

impl CandidateDistribution {
    /// Validates and renormalizes `fractions` to an exact unit sum.
    ///
    /// Negative or non-finite entries, and sums further than 1e-6 from one,
    /// are rejected.
    pub fn new(item_id: impl Into<String>, fractions: Vec<f64>) -> Result<Self> {
        let item_id = item_id.into();
        let fractions = checked_unit_vector(&fractions).map_err(|msg| {
            Error::Validation(vec![Finding::new("distributions", item_id.clone(), msg)])
        })?;
        Ok(Self { item_id, fractions })
    }
}

/// Input assembly used to produce a prediction file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Question, options and context.
    #[serde(rename = "QOC")]
    Qoc,
    /// Question and options only; the context is withheld.
    #[serde(rename = "QO")]
    Qo,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Qoc => "QOC",
            Variant::Qo => "QO",
        })
    }
}

/// Model option probabilities for a set of items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub variant: Variant,
    pub entries: BTreeMap<String, Vec<f64>>,
    /// Free-form producer metadata (model name, truncation policy, ...).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl PredictionSet {
    /// Validates every entry, then renormalizes and floors it at
    /// [`crate::numeric::PROB_FLOOR`].
    pub fn normalized(self) -> Result<Self> {
        let mut findings = Vec::new();
        let mut entries = BTreeMap::new();
        for (id, p) in self.entries {
            match checked_unit_vector(&p) {
                Ok(q) => {
                    entries.insert(id, floor_probabilities(q));
                }
                Err(msg) => findings.push(Finding::new("predictions", id, msg)),
            }
        }
        if !findings.is_empty() {
            return Err(Error::Validation(findings));
        }
        Ok(Self {
            variant: self.variant,
            entries,
            metadata: self.metadata,
        })
    }
}

/// The set of accepted level labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet(BTreeSet<String>);

impl Default for LevelSet {
    fn default() -> Self {
        Self(DEFAULT_LEVELS.iter().map(|s| s.to_string()).collect())
    }
}

impl LevelSet {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(labels.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, level: &str) -> bool {
        self.0.contains(level)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

/// A validated item bank plus any non-fatal warnings raised while loading.
#[derive(Debug, Clone, Default)]
pub struct ItemBank {
    pub items: Vec<Item>,
    pub warnings: Vec<Finding>,
}

impl ItemBank {
    /// Validates in-memory items.
    pub fn from_items(items: Vec<Item>, levels: &LevelSet) -> Result<Self> {
        let (errors, warnings) = validate_items(&items, levels);
        if !errors.is_empty() {
            return Err(Error::Validation(errors));
        }
        Ok(Self { items, warnings })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of distinct `context_id` values.
    pub fn context_count(&self) -> usize {
        self.items
            .iter()
            .map(|i| i.context_id.as_str())
            .collect::<HashSet<_>>()
            .len()
    }

    pub fn level_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for item in &self.items {
            *counts.entry(item.level.clone()).or_insert(0) += 1;
        }
        counts
    }
}

/// Returns `(errors, warnings)` for a list of items.
pub fn validate_items(items: &[Item], levels: &LevelSet) -> (Vec<Finding>, Vec<Finding>) {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    for (idx, item) in items.iter().enumerate() {
        let loc = if item.item_id.is_empty() {
            format!("record {idx}")
        } else {
            item.item_id.clone()
        };
        let mut err = |msg: String| errors.push(Finding::new("items", loc.clone(), msg));
        if item.item_id.is_empty() {
            err("item_id is empty".into());
        } else if !seen.insert(item.item_id.as_str()) {
            err(format!("duplicate item_id {:?}", item.item_id));
        }
        let k = item.options.len();
        if k < 2 {
            err(format!("needs at least 2 options, has {k}"));
        }
        for (j, opt) in item.options.iter().enumerate() {
            if opt.trim().is_empty() {
                err(format!("option {j} is empty"));
            }
        }
        if item.answer_index >= k {
            err(format!(
                "answer_index {} out of range for {k} options",
                item.answer_index
            ));
        }
        if !levels.contains(&item.level) {
            err(format!(
                "level {:?} not in accepted set {{{}}}",
                item.level,
                levels.labels().collect::<Vec<_>>().join(",")
            ));
        }
        if let Some(d) = &item.discrimination {
            if d.len() != k {
                err(format!(
                    "discrimination has {} values for {k} options",
                    d.len()
                ));
            }
        }
        match item.candidate_count {
            Some(0) => err("candidate_count must be positive".into()),
            Some(n) if n < MIN_CANDIDATES => warnings.push(Finding::new(
                "items",
                loc.clone(),
                format!("only {n} candidates (fewer than {MIN_CANDIDATES}); statistics may be noisy"),
            )),
            _ => {}
        }
    }
    (errors, warnings)
}

/// Checks a probability-like vector and renormalizes it to unit sum.
fn checked_unit_vector(values: &[f64]) -> std::result::Result<Vec<f64>, String> {
    if values.is_empty() {
        return Err("empty probability vector".into());
    }
    if let Some((j, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(format!("entry {j} is {v}; must be finite and nonnegative"));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(format!("entries sum to {total}, not 1 (tolerance {SUM_TOLERANCE:e})"));
    }
    Ok(renormalize(values.to_vec()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn line_of(text: &str, byte_offset: usize) -> usize {
    text[..byte_offset.min(text.len())]
        .bytes()
        .filter(|b| *b == b'\n')
        .count()
        + 1
}

/// Parses either a JSON array of records or a stream of JSON records (one
/// per line). Each record is paired with a human-readable locator.
fn parse_records<T: DeserializeOwned>(path: &Path, text: &str) -> Result<Vec<(String, T)>> {
    let parse_err = |locator: String, message: String| Error::Parse {
        path: path.to_path_buf(),
        locator,
        message,
    };
    if text.trim_start().starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| {
            parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let loc = format!("record {i}");
                serde_json::from_value(v)
                    .map(|r| (loc.clone(), r))
                    .map_err(|e| parse_err(loc, e.to_string()))
            })
            .collect()
    } else {
        let mut out = Vec::new();
        let mut stream = serde_json::Deserializer::from_str(text).into_iter::<serde_json::Value>();
        loop {
            let start = stream.byte_offset();
            match stream.next() {
                None => break,
                Some(Err(e)) => {
                    return Err(parse_err(
                        format!("line {}, column {}", e.line(), e.column()),
                        e.to_string(),
                    ))
                }
                Some(Ok(v)) => {
                    let skipped_ws = text[start..]
                        .len()
                        .saturating_sub(text[start..].trim_start().len());
                    let loc = format!("line {}", line_of(text, start + skipped_ws));
                    let record = serde_json::from_value(v).map_err(|e| parse_err(loc.clone(), e.to_string()))?;
                    out.push((loc, record));
                }
            }
        }
        Ok(out)
    }
}

/// Loads and validates an item bank against the default CEFR level set.
pub fn load_item_bank(path: impl AsRef<Path>) -> Result<ItemBank> {
    load_item_bank_with(path, &LevelSet::default())
}

pub fn load_item_bank_with(path: impl AsRef<Path>, levels: &LevelSet) -> Result<ItemBank> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let items = parse_records::<Item>(path, &text)?
        .into_iter()
        .map(|(_, item)| item)
        .collect();
    ItemBank::from_items(items, levels)
}

/// Loads candidate distributions, renormalizing each to an exact unit sum.
pub fn load_candidate_distributions(path: impl AsRef<Path>) -> Result<Vec<CandidateDistribution>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let records = parse_records::<CandidateDistribution>(path, &text)?;
    let mut findings = Vec::new();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(records.len());
    for (loc, rec) in records {
        if !seen.insert(rec.item_id.clone()) {
            findings.push(Finding::new(
                "distributions",
                rec.item_id.clone(),
                format!("duplicate item_id ({loc})"),
            ));
            continue;
        }
        match CandidateDistribution::new(rec.item_id, rec.fractions) {
            Ok(d) => out.push(d),
            Err(e) => findings.extend(e.findings()),
        }
    }
    if !findings.is_empty() {
        return Err(Error::Validation(findings));
    }
    Ok(out)
}

/// Loads a prediction file; entries are validated, renormalized and floored.
pub fn load_predictions(path: impl AsRef<Path>) -> Result<PredictionSet> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let set: PredictionSet = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        locator: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    set.normalized()
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents).map_err(|e| Error::io(path, e))
}

fn to_json_lines<T: Serialize>(records: &[T]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r).map_err(|e| Error::Output(e.to_string()))?;
        buf.push(b'\n');
    }
    Ok(buf)
}

/// Writes items as line-delimited JSON.
pub fn write_item_bank(path: impl AsRef<Path>, items: &[Item]) -> Result<()> {
    write_file(path.as_ref(), &to_json_lines(items)?)
}

/// Writes candidate distributions as line-delimited JSON.
pub fn write_candidate_distributions(
    path: impl AsRef<Path>,
    dists: &[CandidateDistribution],
) -> Result<()> {
    write_file(path.as_ref(), &to_json_lines(dists)?)
}

pub fn write_predictions(path: impl AsRef<Path>, predictions: &PredictionSet) -> Result<()> {
    let mut buf =
        serde_json::to_vec_pretty(predictions).map_err(|e| Error::Output(e.to_string()))?;
    buf.push(b'\n');
    write_file(path.as_ref(), &buf)
}

/// An item aligned with its candidate distribution and model probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedItem {
    pub item: Item,
    pub candidate: Vec<f64>,
    pub model: Vec<f64>,
}

impl JoinedItem {
    pub fn answer(&self) -> usize {
        self.item.answer_index
    }
}

/// What the join left out.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct JoinReport {
    /// Items with no candidate distribution.
    pub missing_distribution: Vec<String>,
    /// Items with no prediction entry.
    pub missing_prediction: Vec<String>,
    /// Distribution records whose item_id is not in the bank.
    pub unknown_distribution: Vec<String>,
    /// Prediction entries whose item_id is not in the bank.
    pub unknown_prediction: Vec<String>,
    pub level_counts: BTreeMap<String, usize>,
}

impl JoinReport {
    pub fn is_total(&self) -> bool {
        self.missing_distribution.is_empty()
            && self.missing_prediction.is_empty()
            && self.unknown_distribution.is_empty()
            && self.unknown_prediction.is_empty()
    }

    fn findings(&self) -> Vec<Finding> {
        let groups = [
            ("missing candidate distribution", &self.missing_distribution),
            ("missing prediction", &self.missing_prediction),
            ("distribution references unknown item", &self.unknown_distribution),
            ("prediction references unknown item", &self.unknown_prediction),
        ];
        groups
            .iter()
            .flat_map(|(msg, ids)| ids.iter().map(move |id| Finding::new("join", id.clone(), *msg)))
            .collect()
    }
}

/// Items grouped by level, each aligned with its candidate and model
/// distributions. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct JoinedBank {
    levels: BTreeMap<String, Vec<JoinedItem>>,
    report: JoinReport,
}

impl JoinedBank {
    pub fn levels(&self) -> impl Iterator<Item = (&str, &[JoinedItem])> {
        self.levels.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn level(&self, level: &str) -> Result<&[JoinedItem]> {
        self.levels
            .get(level)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownLevel {
                level: level.to_string(),
                available: self.level_names(),
            })
    }

    pub fn level_names(&self) -> Vec<String> {
        self.levels.keys().cloned().collect()
    }

    pub fn report(&self) -> &JoinReport {
        &self.report
    }

    pub fn len(&self) -> usize {
        self.levels.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All joined items across levels, in level order.
    pub fn all(&self) -> impl Iterator<Item = &JoinedItem> {
        self.levels.values().flatten()
    }

    /// Builds a bank from already-aligned triples.
    pub fn from_joined(items: Vec<JoinedItem>) -> Self {
        let mut levels: BTreeMap<String, Vec<JoinedItem>> = BTreeMap::new();
        for j in items {
            levels.entry(j.item.level.clone()).or_default().push(j);
        }
        let report = JoinReport {
            level_counts: levels.iter().map(|(k, v)| (k.clone(), v.len())).collect(),
            ..JoinReport::default()
        };
        Self { levels, report }
    }
}

/// Aligns items, candidate distributions and predictions by `item_id`.
///
/// In strict mode any missing or unknown id is an error. Otherwise items
/// lacking a member are dropped and listed in the [`JoinReport`]. A vector
/// whose length differs from the item's option count is always an error.
pub fn join(
    items: &[Item],
    distributions: &[CandidateDistribution],
    predictions: &PredictionSet,
    strict: bool,
) -> Result<JoinedBank> {
    let dist_by_id: BTreeMap<&str, &CandidateDistribution> = distributions
        .iter()
        .map(|d| (d.item_id.as_str(), d))
        .collect();
    let item_ids: HashSet<&str> = items.iter().map(|i| i.item_id.as_str()).collect();

    let mut report = JoinReport::default();
    let mut mismatches = Vec::new();
    let mut joined = Vec::new();

    for item in items {
        let dist = dist_by_id.get(item.item_id.as_str());
        let pred = predictions.entries.get(&item.item_id);
        if dist.is_none() {
            report.missing_distribution.push(item.item_id.clone());
        }
        if pred.is_none() {
            report.missing_prediction.push(item.item_id.clone());
        }
        let (Some(dist), Some(pred)) = (dist, pred) else {
            continue;
        };
        let k = item.option_count();
        let mut shape_ok = true;
        for (what, len) in [("candidate distribution", dist.fractions.len()), ("prediction", pred.len())] {
            if len != k {
                shape_ok = false;
                mismatches.push(Finding::new(
                    "join",
                    item.item_id.clone(),
                    format!("{what} has {len} entries but the item has {k} options"),
                ));
            }
        }
        if shape_ok {
            joined.push(JoinedItem {
                item: item.clone(),
                candidate: dist.fractions.clone(),
                model: pred.clone(),
            });
        }
    }
    report.unknown_distribution = distributions
        .iter()
        .filter(|d| !item_ids.contains(d.item_id.as_str()))
        .map(|d| d.item_id.clone())
        .collect();
    report.unknown_prediction = predictions
        .entries
        .keys()
        .filter(|id| !item_ids.contains(id.as_str()))
        .cloned()
        .collect();

    if !mismatches.is_empty() {
        return Err(Error::Validation(mismatches));
    }
    if strict && !report.is_total() {
        return Err(Error::Validation(report.findings()));
    }

    let mut bank = JoinedBank::from_joined(joined);
    let counts = std::mem::take(&mut bank.report.level_counts);
    report.level_counts = counts;
    bank.report = report;
    Ok(bank)
}
