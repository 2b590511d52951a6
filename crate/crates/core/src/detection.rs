//! Underperforming distractor detection.
//!
//! A distractor is labelled poor when fewer than 10% of candidates chose it.
//! The detector ranks distractors by model probability, lowest first, and is
//! scored with a precision-recall curve and average precision.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item_bank::{JoinedBank, JoinedItem};
use crate::reshape::{distribution, params_for, ReshapeParams, Source};

/// Candidate-fraction threshold below which a distractor counts as poor.
pub const POOR_THRESHOLD: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistractorRecord {
    pub item_id: String,
    pub level: String,
    pub option_index: usize,
    pub candidate_fraction: f64,
    /// Detector score: model probability of this option.
    pub model_probability: f64,
    pub is_poor: bool,
}

/// Which model probabilities score the distractors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScoreSource {
    #[default]
    Raw,
    Reshaped,
}

/// Whether distractors are ranked across the whole bank or within levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionScope {
    #[default]
    Global,
    PerLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    /// Score at the end of this tie block; records scoring at or below it are flagged.
    pub threshold: f64,
    pub recall: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
    pub average_precision: f64,
    pub prevalence: f64,
    pub n_records: usize,
    pub n_positive: usize,
}

/// One record per non-answer option of each item, scored by `source`.
pub fn extract_level_distractors(
    level: &str,
    items: &[JoinedItem],
    source: Source,
) -> Result<Vec<DistractorRecord>> {
    let mut out = Vec::new();
    for item in items {
        let scores = distribution(item, source)?;
        for (j, &fraction) in item.candidate.iter().enumerate() {
            if j == item.answer() {
                continue;
            }
            out.push(DistractorRecord {
                item_id: item.item.item_id.clone(),
                level: level.to_string(),
                option_index: j,
                candidate_fraction: fraction,
                model_probability: scores[j],
                is_poor: fraction < POOR_THRESHOLD,
            });
        }
    }
    Ok(out)
}

/// Distractor records for every level of `bank`. Reshaped scoring looks up
/// each level's parameters in `params`.
pub fn extract_distractors(
    bank: &JoinedBank,
    score_source: ScoreSource,
    params: &[ReshapeParams],
) -> Result<Vec<DistractorRecord>> {
    let mut out = Vec::new();
    for (level, items) in bank.levels() {
        let source = match score_source {
            ScoreSource::Raw => Source::Model,
            ScoreSource::Reshaped => params_for(params, level)?.source(),
        };
        out.extend(extract_level_distractors(level, items, source)?);
    }
    Ok(out)
}

fn by_score(a: &DistractorRecord, b: &DistractorRecord) -> Ordering {
    a.model_probability.total_cmp(&b.model_probability)
}

/// Precision-recall curve over the ascending-score ranking.
///
/// Records with equal scores form one block and are flagged together, so the
/// curve only has points at block boundaries and does not depend on the
/// input order. Average precision is the mean, over positives, of the
/// precision at the block containing that positive.
pub fn pr_curve(records: &[DistractorRecord]) -> Result<PrCurve> {
    if records.is_empty() {
        return Err(Error::Empty("precision-recall needs at least one record"));
    }
    let positives = records.iter().filter(|r| r.is_poor).count();
    if positives == 0 {
        return Err(Error::UndefinedRecall(records.len()));
    }
    let mut ranked: Vec<&DistractorRecord> = records.iter().collect();
    ranked.sort_by(|a, b| by_score(a, b));

    let mut points = Vec::new();
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut ap_sum = 0.0;
    let mut i = 0;
    while i < ranked.len() {
        let score = ranked[i].model_probability;
        let mut block_tp = 0;
        while i < ranked.len() && ranked[i].model_probability.total_cmp(&score) == Ordering::Equal {
            block_tp += usize::from(ranked[i].is_poor);
            seen += 1;
            i += 1;
        }
        tp += block_tp;
        let precision = tp as f64 / seen as f64;
        ap_sum += block_tp as f64 * precision;
        points.push(PrPoint {
            threshold: score,
            recall: tp as f64 / positives as f64,
            precision,
        });
    }
    Ok(PrCurve {
        points,
        average_precision: ap_sum / positives as f64,
        prevalence: positives as f64 / records.len() as f64,
        n_records: records.len(),
        n_positive: positives,
    })
}

/// Expected precision of a uniformly random ranking: the prevalence of poor
/// distractors.
pub fn random_baseline(records: &[DistractorRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Empty("random baseline needs at least one record"));
    }
    let poor = records.iter().filter(|r| r.is_poor).count();
    Ok(poor as f64 / records.len() as f64)
}

/// Detection results for the requested scope, labelled `"all"` for the
/// global ranking or by level.
pub fn detect(
    bank: &JoinedBank,
    score_source: ScoreSource,
    params: &[ReshapeParams],
    scope: DetectionScope,
) -> Result<Vec<(String, Vec<DistractorRecord>, PrCurve)>> {
    let records = extract_distractors(bank, score_source, params)?;
    match scope {
        DetectionScope::Global => {
            let curve = pr_curve(&records)?;
            Ok(vec![("all".to_string(), records, curve)])
        }
        DetectionScope::PerLevel => bank
            .level_names()
            .into_iter()
            .map(|level| {
                let subset: Vec<_> = records.iter().filter(|r| r.level == level).cloned().collect();
                let curve = pr_curve(&subset)?;
                Ok((level, subset, curve))
            })
            .collect(),
    }
}

/// Distractors ranked most-suspect first. With `max_score`, only those
/// scoring at or below it are kept.
pub fn flagged_distractors(records: &[DistractorRecord], max_score: Option<f64>) -> Vec<DistractorRecord> {
    let mut out: Vec<_> = records
        .iter()
        .filter(|r| max_score.is_none_or(|m| r.model_probability <= m))
        .cloned()
        .collect();
    out.sort_by(|a, b| {
        by_score(a, b)
            .then_with(|| a.item_id.cmp(&b.item_id))
            .then_with(|| a.option_index.cmp(&b.option_index))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rec(score: f64, poor: bool) -> DistractorRecord {
        DistractorRecord {
            item_id: format!("i{score}"),
            level: "B1".into(),
            option_index: 1,
            candidate_fraction: if poor { 0.05 } else { 0.3 },
            model_probability: score,
            is_poor: poor,
        }
    }

    fn joined(candidate: Vec<f64>, answer: usize) -> JoinedItem {
        let k = candidate.len();
        JoinedItem {
            item: crate::item_bank::Item {
                item_id: "q".into(),
                context_id: "c".into(),
                context: String::new(),
                question: String::new(),
                options: (0..k).map(|j| j.to_string()).collect(),
                answer_index: answer,
                level: "B1".into(),
                discrimination: None,
                candidate_count: None,
            },
            model: vec![1.0 / k as f64; k],
            candidate,
        }
    }

    #[test]
    fn extraction_labels_by_strict_threshold() {
        let recs = extract_level_distractors("B1", &[joined(vec![0.6, 0.25, 0.08, 0.07], 0)], Source::Model).unwrap();
        assert_eq!(recs.len(), 3);
        let poor: Vec<usize> = recs.iter().filter(|r| r.is_poor).map(|r| r.option_index).collect();
        assert_eq!(poor, vec![2, 3]);

        let recs = extract_level_distractors("B1", &[joined(vec![0.4, 0.3, 0.3], 0)], Source::Model).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(|r| !r.is_poor));

        let recs = extract_level_distractors("B1", &[joined(vec![0.5, 0.4, 0.10], 0)], Source::Model).unwrap();
        assert!(!recs[1].is_poor, "exactly 10% is not poor");
        assert!(recs.iter().all(|r| r.option_index != 0));
    }

    #[test]
    fn reshaped_scores_need_params() {
        let bank = JoinedBank::from_joined(vec![joined(vec![0.6, 0.3, 0.1], 0)]);
        let err = extract_distractors(&bank, ScoreSource::Reshaped, &[]).unwrap_err();
        assert!(matches!(err, Error::MissingParams(_)));
        assert_eq!(extract_distractors(&bank, ScoreSource::Raw, &[]).unwrap().len(), 2);
    }

    #[test]
    fn perfect_ranking_has_unit_ap() {
        let recs = [rec(0.01, true), rec(0.02, true), rec(0.3, false), rec(0.4, false)];
        assert_eq!(pr_curve(&recs).unwrap().average_precision, 1.0);
        let all = [rec(0.3, true), rec(0.1, true)];
        let c = pr_curve(&all).unwrap();
        assert_eq!(c.average_precision, 1.0);
        assert!(c.points.iter().all(|p| p.precision == 1.0));
    }

    #[test]
    fn hand_enumerated_ap() {
        let recs = [rec(0.01, true), rec(0.05, false), rec(0.2, true), rec(0.4, false)];
        let c = pr_curve(&recs).unwrap();
        assert!((c.average_precision - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert_eq!(c.prevalence, 0.5);
        assert_eq!(random_baseline(&recs).unwrap(), 0.5);
        let recalls: Vec<f64> = c.points.iter().map(|p| p.recall).collect();
        assert_eq!(recalls, vec![0.5, 0.5, 1.0, 1.0]);
    }

    #[test]
    fn ties_form_one_block() {
        let a = [rec(0.1, false), rec(0.1, true), rec(0.5, false)];
        let b = [rec(0.1, true), rec(0.1, false), rec(0.5, false)];
        let (ca, cb) = (pr_curve(&a).unwrap(), pr_curve(&b).unwrap());
        assert_eq!(ca, cb);
        assert_eq!(ca.points.len(), 2);
        assert_eq!(ca.average_precision, 0.5);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(pr_curve(&[]), Err(Error::Empty(_))));
        assert!(matches!(pr_curve(&[rec(0.1, false)]), Err(Error::UndefinedRecall(1))));
        assert!(random_baseline(&[]).is_err());
        let mut ten: Vec<_> = (0..8).map(|i| rec(i as f64, false)).collect();
        ten.push(rec(9.0, true));
        ten.push(rec(10.0, true));
        assert_eq!(random_baseline(&ten).unwrap(), 0.2);
    }

    #[test]
    fn flagged_list_is_sorted_and_filtered() {
        let recs = [rec(0.4, false), rec(0.01, true), rec(0.2, true)];
        let all = flagged_distractors(&recs, None);
        let scores: Vec<f64> = all.iter().map(|r| r.model_probability).collect();
        assert_eq!(scores, vec![0.01, 0.2, 0.4]);
        assert_eq!(flagged_distractors(&recs, Some(0.2)).len(), 2);
    }
}
