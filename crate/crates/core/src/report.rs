//! Evaluation report assembly and CSV/JSON output.
//!
//! A report has four blocks: per-level accuracy and true-class probability
//! for candidates and model; raw versus reshaped divergences; distractor
//! detection; and readability. Plot data (PR curves, CDFs) and the flagged
//! distractor list go to separate CSV files referenced from `report.json`
//! by relative path. Nothing time- or host-dependent is recorded, so the same
//! inputs always produce byte-identical output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::detection::{
    detect, flagged_distractors, random_baseline, DetectionScope, DistractorRecord, PrPoint,
    ScoreSource,
};
use crate::divergence::{aggregate_divergences, empirical_cdf, pooled_probabilities, CdfPoint};
use crate::error::{Error, Result};
use crate::item_bank::{
    join, load_candidate_distributions, load_item_bank_with, load_predictions, CandidateDistribution,
    ItemBank, JoinReport, JoinedBank, LevelSet, PredictionSet, Variant,
};
use crate::readability::{readability_table, ComplexityProbs, ReadabilityTable, TextUnit, WordLists};
use crate::reshape::{level_stats, params_for, ReshapeParams, Source};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of a file's bytes.
pub fn file_digest(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Loaded and joined input files, with their digests.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub bank: ItemBank,
    pub distributions: Vec<CandidateDistribution>,
    pub predictions: PredictionSet,
    pub joined: JoinedBank,
    /// File name to SHA-256, keyed by role (`items`, `distributions`, `predictions`).
    pub digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn load(
        items: &Path,
        distributions: &Path,
        predictions: &Path,
        levels: &LevelSet,
        strict: bool,
    ) -> Result<Self> {
        let bank = load_item_bank_with(items, levels)?;
        let distributions_v = load_candidate_distributions(distributions)?;
        let predictions_v = load_predictions(predictions)?;
        let joined = join(&bank.items, &distributions_v, &predictions_v, strict)?;
        let mut digests = BTreeMap::new();
        digests.insert("items".to_string(), file_digest(items)?);
        digests.insert("distributions".to_string(), file_digest(distributions)?);
        digests.insert("predictions".to_string(), file_digest(predictions)?);
        Ok(Self {
            bank,
            distributions: distributions_v,
            predictions: predictions_v,
            joined,
            digests,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3Row {
    pub level: String,
    pub n_items: usize,
    pub candidate_accuracy: f64,
    pub model_accuracy: f64,
    pub candidate_tcp: f64,
    pub model_tcp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table4Row {
    pub level: String,
    /// `raw` or `reshaped`.
    pub kind: String,
    pub tau: f64,
    pub alpha: f64,
    pub accuracy: f64,
    pub tcp: f64,
    pub kl: f64,
    pub hellinger: f64,
    pub total_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionCurveSummary {
    /// `all` for the global ranking, otherwise a level label.
    pub label: String,
    pub average_precision: f64,
    pub prevalence: f64,
    pub random_baseline: f64,
    pub n_records: usize,
    pub n_positive: usize,
    pub points_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionBlock {
    pub score_source: ScoreSource,
    pub scope: DetectionScope,
    pub curves: Vec<DetectionCurveSummary>,
    pub flagged_file: String,
    /// Why detection could not be scored, e.g. no poor distractors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub toolkit_version: String,
    pub input_digests: BTreeMap<String, String>,
    pub prediction_variant: Variant,
    pub options: ReportOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportOptions {
    pub level: Option<String>,
    pub score_source: ScoreSource,
    pub scope: DetectionScope,
    pub text_unit: TextUnit,
    pub flag_max_score: Option<f64>,
    pub params_supplied: bool,
    pub complexity_supplied: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            level: None,
            score_source: ScoreSource::Raw,
            scope: DetectionScope::Global,
            text_unit: TextUnit::FullItem,
            flag_max_score: None,
            params_supplied: false,
            complexity_supplied: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub provenance: Provenance,
    pub join: JoinReport,
    pub table3: Vec<Table3Row>,
    pub table4: Vec<Table4Row>,
    pub params: Vec<ReshapeParams>,
    pub detection: DetectionBlock,
    pub readability: ReadabilityTable,
    /// Output file names, relative to the report directory.
    pub files: BTreeMap<String, String>,
}

/// A report plus the plot-point data written beside it.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub report: EvaluationReport,
    pub pr_points: Vec<(String, Vec<PrPoint>)>,
    pub cdf_points: Vec<(String, String, Vec<CdfPoint>)>,
    pub flagged: Vec<DistractorRecord>,
}

fn pr_file_name(label: &str) -> String {
    if label == "all" {
        "pr_points.csv".to_string()
    } else {
        format!("pr_points_{label}.csv")
    }
}

/// Selected levels of `joined`; an explicit level must exist.
pub fn selected_levels(joined: &JoinedBank, level: Option<&str>) -> Result<Vec<String>> {
    match level {
        Some(l) => {
            joined.level(l)?;
            Ok(vec![l.to_string()])
        }
        None => Ok(joined.level_names()),
    }
}

pub fn table3(joined: &JoinedBank, levels: &[String]) -> Result<Vec<Table3Row>> {
    levels
        .iter()
        .map(|level| {
            let items = joined.level(level)?;
            let cand = level_stats(items, Source::Candidate)?;
            let model = level_stats(items, Source::Model)?;
            Ok(Table3Row {
                level: level.clone(),
                n_items: items.len(),
                candidate_accuracy: cand.mode_accuracy,
                model_accuracy: model.mode_accuracy,
                candidate_tcp: cand.true_class_prob,
                model_tcp: model.true_class_prob,
            })
        })
        .collect()
}

/// Raw rows for every level, followed by a reshaped row for every level
/// that has parameters.
pub fn table4(joined: &JoinedBank, levels: &[String], params: &[ReshapeParams]) -> Result<Vec<Table4Row>> {
    let mut rows = Vec::new();
    for level in levels {
        let items = joined.level(level)?;
        let mut sources = vec![("raw", 1.0, 0.0, Source::Model)];
        if let Ok(p) = params_for(params, level) {
            sources.push(("reshaped", p.tau, p.alpha, p.source()));
        }
        for (kind, tau, alpha, source) in sources {
            let stats = level_stats(items, source)?;
            let div = aggregate_divergences(level, items, source)?;
            rows.push(Table4Row {
                level: level.clone(),
                kind: kind.to_string(),
                tau,
                alpha,
                accuracy: stats.mode_accuracy,
                tcp: stats.true_class_prob,
                kl: div.kl,
                hellinger: div.hellinger,
                total_variation: div.total_variation,
            });
        }
    }
    Ok(rows)
}

/// Pooled probability CDFs per level for candidates, model and (when
/// fitted) reshaped model.
pub fn cdf_points(
    joined: &JoinedBank,
    levels: &[String],
    params: &[ReshapeParams],
) -> Result<Vec<(String, String, Vec<CdfPoint>)>> {
    let mut out = Vec::new();
    for level in levels {
        let items = joined.level(level)?;
        let mut sources = vec![Source::Candidate, Source::Model];
        if let Ok(p) = params_for(params, level) {
            sources.push(p.source());
        }
        for source in sources {
            let values = pooled_probabilities(items, source)?;
            out.push((level.clone(), source.name().to_string(), empirical_cdf(&values)?));
        }
    }
    Ok(out)
}

/// Restricts a joined bank to the given levels.
fn restrict(joined: &JoinedBank, levels: &[String]) -> Result<JoinedBank> {
    let mut items = Vec::new();
    for level in levels {
        items.extend_from_slice(joined.level(level)?);
    }
    Ok(JoinedBank::from_joined(items))
}

/// Builds the full report. `params` may be empty for a raw-only report.
pub fn build_report(
    inputs: &Inputs,
    params: &[ReshapeParams],
    complexity: Option<&BTreeMap<String, ComplexityProbs>>,
    lists: &WordLists,
    options: ReportOptions,
) -> Result<ReportBundle> {
    let levels = selected_levels(&inputs.joined, options.level.as_deref())?;
    let scoped = restrict(&inputs.joined, &levels)?;
    if options.score_source == ScoreSource::Reshaped {
        for level in &levels {
            params_for(params, level)?;
        }
    }
    let used_params: Vec<ReshapeParams> = params
        .iter()
        .filter(|p| levels.contains(&p.level))
        .cloned()
        .collect();

    let (detection, pr_points, flagged) =
        detection_block(&scoped, params, options.score_source, options.scope, options.flag_max_score)?;

    let items: Vec<_> = inputs
        .bank
        .items
        .iter()
        .filter(|i| levels.contains(&i.level))
        .cloned()
        .collect();
    let readability = readability_table(&items, options.text_unit, lists, complexity)?;

    let mut files = BTreeMap::new();
    for (key, name) in [
        ("report", "report.json"),
        ("table3", "table3.csv"),
        ("table4", "table4.csv"),
        ("table6", "table6.csv"),
        ("cdf_points", "cdf_points.csv"),
        ("flagged_distractors", "flagged_distractors.csv"),
    ] {
        files.insert(key.to_string(), name.to_string());
    }
    for (label, _) in &pr_points {
        files.insert(format!("pr_points:{label}"), pr_file_name(label));
    }

    let report = EvaluationReport {
        provenance: Provenance {
            toolkit_version: TOOLKIT_VERSION.to_string(),
            input_digests: inputs.digests.clone(),
            prediction_variant: inputs.predictions.variant,
            options: ReportOptions {
                params_supplied: !params.is_empty(),
                complexity_supplied: complexity.is_some(),
                ..options
            },
        },
        join: inputs.joined.report().clone(),
        table3: table3(&inputs.joined, &levels)?,
        table4: table4(&inputs.joined, &levels, params)?,
        params: used_params,
        detection,
        readability,
        files,
    };
    Ok(ReportBundle {
        report,
        pr_points,
        cdf_points: cdf_points(&inputs.joined, &levels, params)?,
        flagged,
    })
}

type DetectionParts = (DetectionBlock, Vec<(String, Vec<PrPoint>)>, Vec<DistractorRecord>);

/// Detection block plus curve points and the flagged list. Missing positives
/// are recorded in `skipped` rather than failing the report.
pub fn detection_block(
    joined: &JoinedBank,
    params: &[ReshapeParams],
    score_source: ScoreSource,
    scope: DetectionScope,
    flag_max_score: Option<f64>,
) -> Result<DetectionParts> {
    let mut block = DetectionBlock {
        score_source,
        scope,
        curves: Vec::new(),
        flagged_file: "flagged_distractors.csv".to_string(),
        skipped: None,
    };
    let mut points = Vec::new();
    let records = crate::detection::extract_distractors(joined, score_source, params)?;
    let flagged = flagged_distractors(&records, flag_max_score);

    let mut scopes = vec![DetectionScope::Global];
    if scope == DetectionScope::PerLevel {
        scopes.push(DetectionScope::PerLevel);
    }
    for s in scopes {
        match detect(joined, score_source, params, s) {
            Ok(results) => {
                for (label, recs, curve) in results {
                    block.curves.push(DetectionCurveSummary {
                        points_file: pr_file_name(&label),
                        label: label.clone(),
                        average_precision: curve.average_precision,
                        prevalence: curve.prevalence,
                        random_baseline: random_baseline(&recs)?,
                        n_records: curve.n_records,
                        n_positive: curve.n_positive,
                    });
                    points.push((label, curve.points));
                }
            }
            Err(e @ (Error::UndefinedRecall(_) | Error::Empty(_))) => {
                block.skipped.get_or_insert_with(|| e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok((block, points, flagged))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Output(format!("{other:?}")),
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Output(format!("{}: {e}", path.display()))
}

/// Writes rows of displayable cells to a CSV file.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_table3(path: &Path, rows: &[Table3Row]) -> Result<()> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.level.clone(),
                r.n_items.to_string(),
                r.candidate_accuracy.to_string(),
                r.model_accuracy.to_string(),
                r.candidate_tcp.to_string(),
                r.model_tcp.to_string(),
            ]
        })
        .collect();
    write_csv(
        path,
        &["level", "n_items", "candidate_accuracy", "model_accuracy", "candidate_tcp", "model_tcp"],
        &body,
    )
}

pub fn write_table4(path: &Path, rows: &[Table4Row]) -> Result<()> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.level.clone(),
                r.kind.clone(),
                r.tau.to_string(),
                r.alpha.to_string(),
                r.accuracy.to_string(),
                r.tcp.to_string(),
                r.kl.to_string(),
                r.hellinger.to_string(),
                r.total_variation.to_string(),
            ]
        })
        .collect();
    write_csv(
        path,
        &["level", "kind", "tau", "alpha", "acc", "tcp", "kl", "hellinger", "total_variation"],
        &body,
    )
}

/// Metrics as rows; a `<level>_mean` and `<level>_std` column per level.
pub fn write_table6(path: &Path, table: &ReadabilityTable) -> Result<()> {
    let mut header = vec!["metric".to_string()];
    for l in &table.levels {
        header.push(format!("{l}_mean"));
        header.push(format!("{l}_std"));
    }
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|(metric, cells)| {
            let mut row = vec![metric.clone()];
            for l in &table.levels {
                match cells.get(l) {
                    Some(c) => {
                        row.push(c.mean.to_string());
                        row.push(c.std.to_string());
                    }
                    None => row.extend([String::new(), String::new()]),
                }
            }
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(path, &header, &body)
}

pub fn write_pr_points(path: &Path, points: &[PrPoint]) -> Result<()> {
    let body: Vec<Vec<String>> = points
        .iter()
        .map(|p| vec![p.recall.to_string(), p.precision.to_string()])
        .collect();
    write_csv(path, &["recall", "precision"], &body)
}

pub fn write_cdf_points(path: &Path, cdfs: &[(String, String, Vec<CdfPoint>)]) -> Result<()> {
    let body: Vec<Vec<String>> = cdfs
        .iter()
        .flat_map(|(level, source, pts)| {
            pts.iter().map(move |p| {
                vec![
                    level.clone(),
                    source.clone(),
                    p.threshold.to_string(),
                    p.cumulative.to_string(),
                ]
            })
        })
        .collect();
    write_csv(path, &["level", "source", "threshold", "cumulative_fraction"], &body)
}

pub fn write_flagged(path: &Path, flagged: &[DistractorRecord]) -> Result<()> {
    let body: Vec<Vec<String>> = flagged
        .iter()
        .map(|r| {
            vec![
                r.item_id.clone(),
                r.level.clone(),
                r.option_index.to_string(),
                r.model_probability.to_string(),
                r.candidate_fraction.to_string(),
                r.is_poor.to_string(),
            ]
        })
        .collect();
    write_csv(
        path,
        &["item_id", "level", "option_index", "score", "candidate_fraction", "is_poor"],
        &body,
    )
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| Error::Output(e.to_string()))?;
    buf.push(b'\n');
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes every report file into `dir`. Returns the paths written.
pub fn write_bundle(dir: &Path, bundle: &ReportBundle) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let r = &bundle.report;
    let path = |name: &str| dir.join(name);
    write_json(&path("report.json"), r)?;
    write_table3(&path("table3.csv"), &r.table3)?;
    write_table4(&path("table4.csv"), &r.table4)?;
    write_table6(&path("table6.csv"), &r.readability)?;
    write_cdf_points(&path("cdf_points.csv"), &bundle.cdf_points)?;
    write_flagged(&path("flagged_distractors.csv"), &bundle.flagged)?;
    let mut written: Vec<PathBuf> = r.files.values().map(|f| path(f)).collect();
    for (label, points) in &bundle.pr_points {
        write_pr_points(&path(&pr_file_name(label)), points)?;
    }
    written.sort();
    written.dedup();
    Ok(written)
}
