//! Seeded synthetic item banks with known relationships between candidate
//! and model distributions.
//!
//! The population model is a test harness, not a claim about real candidate
//! behaviour. For every item a flat Dirichlet draw (uniform spacings of
//! sorted uniforms, so no logarithms in the sampling path) is tilted toward
//! the keyed answer by `ability`; the model side is then derived from it by
//! the configured [`Distortion`].
//!
//! The random stream is ChaCha8 seeded from the 64-bit seed, which is
//! portable across platforms.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item_bank::{
    join, write_candidate_distributions, write_item_bank, write_predictions, CandidateDistribution,
    Item, JoinedBank, PredictionSet, Variant,
};
use crate::numeric::{floor_probabilities, renormalize};
use crate::reshape::{mass_redistribute, reshape, temperature_anneal, Shaping};

/// How model predictions relate to candidate distributions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Distortion {
    /// Predictions equal the candidate distributions.
    #[default]
    None,
    /// Predictions are sharpened or flattened so that annealing them at
    /// `tau` gives back the candidate distributions. `tau > 1` means an
    /// overconfident model.
    Temperature { tau: f64 },
    /// Candidates are the predictions with `alpha` of the mass moved onto
    /// the answer.
    Redistribution { alpha: f64 },
    /// Candidates are the predictions reshaped with `(alpha, tau)`.
    Reshape { alpha: f64, tau: f64 },
    /// Predictions are the candidates with multiplicative uniform noise of
    /// relative size `sigma`, renormalized.
    Noise { sigma: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_items: usize,
    pub options_per_item: usize,
    /// Share of each candidate distribution moved onto the answer.
    pub ability: f64,
    pub distortion: Distortion,
    /// Level labels, assigned to items round-robin.
    pub levels: Vec<String>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_items: 100,
            options_per_item: 4,
            ability: 0.5,
            distortion: Distortion::None,
            levels: vec!["B1".to_string()],
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if self.n_items == 0 {
            return bad("n_items must be positive".into());
        }
        if self.options_per_item < 2 {
            return bad(format!("options_per_item must be at least 2, got {}", self.options_per_item));
        }
        if !(0.0..=1.0).contains(&self.ability) {
            return bad(format!("ability must lie in [0, 1], got {}", self.ability));
        }
        if self.levels.is_empty() || self.levels.iter().any(String::is_empty) {
            return bad("at least one non-empty level label is required".into());
        }
        match self.distortion {
            Distortion::None => {}
            Distortion::Temperature { tau } => {
                Shaping::new(0.0, tau)?;
            }
            Distortion::Redistribution { alpha } => {
                Shaping::new(alpha, 1.0)?;
            }
            Distortion::Reshape { alpha, tau } => {
                Shaping::new(alpha, tau)?;
            }
            Distortion::Noise { sigma } => {
                if !(0.0..1.0).contains(&sigma) {
                    return bad(format!("noise sigma must lie in [0, 1), got {sigma}"));
                }
            }
        }
        Ok(())
    }
}

/// A generated bank in the same shape as the loaded input files.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBank {
    pub items: Vec<Item>,
    pub distributions: Vec<CandidateDistribution>,
    pub predictions: PredictionSet,
}

impl SyntheticBank {
    /// Strict join of the three parts.
    pub fn joined(&self) -> Result<JoinedBank> {
        join(&self.items, &self.distributions, &self.predictions, true)
    }

    /// Writes `items.jsonl`, `distributions.jsonl` and `predictions.json`
    /// into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_item_bank(dir.join("items.jsonl"), &self.items)?;
        write_candidate_distributions(dir.join("distributions.jsonl"), &self.distributions)?;
        write_predictions(dir.join("predictions.json"), &self.predictions)
    }
}

const VOCAB: &[&str] = &[
    "river", "market", "teacher", "journey", "village", "letter", "morning", "garden",
    "history", "museum", "festival", "engineer", "climate", "library", "concert", "harbour",
    "decision", "neighbour", "evidence", "tradition", "experiment", "community", "ancient",
    "remarkable", "quiet", "busy", "careful", "famous", "walked", "discovered", "explained",
    "believed", "the", "a", "of", "and", "to", "was", "with", "in",
];

fn sentence(rng: &mut ChaCha8Rng, words: usize, end: char) -> String {
    let mut out: Vec<&str> = (0..words)
        .map(|_| VOCAB[rng.random_range(0..VOCAB.len())])
        .collect();
    let first = out.remove(0);
    let mut s = String::new();
    let mut chars = first.chars();
    if let Some(c) = chars.next() {
        s.extend(c.to_uppercase());
        s.push_str(chars.as_str());
    }
    for w in out {
        s.push(' ');
        s.push_str(w);
    }
    s.push(end);
    s
}

fn synth_item(rng: &mut ChaCha8Rng, config: &SynthConfig, index: usize, answer: usize) -> Item {
    let k = config.options_per_item;
    let sentences = 2 + rng.random_range(0..4);
    let context = (0..sentences)
        .map(|_| {
            let n = 5 + rng.random_range(0..12);
            sentence(rng, n, '.')
        })
        .collect::<Vec<_>>()
        .join(" ");
    let question = sentence(rng, 6, '?');
    let options = (0..k)
        .map(|_| {
            let n = 2 + rng.random_range(0..4);
            sentence(rng, n, '.')
        })
        .collect();
    Item {
        item_id: format!("syn-{index:05}"),
        context_id: format!("ctx-{:04}", index / 4),
        context,
        question,
        options,
        answer_index: answer,
        level: config.levels[index % config.levels.len()].clone(),
        discrimination: None,
        candidate_count: Some(100 + rng.random_range(0..900)),
    }
}

/// Flat Dirichlet sample of dimension `k` via uniform spacings.
fn flat_dirichlet(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(k);
    let mut prev = 0.0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

/// Returns `(candidate, prediction)` for one item.
fn apply_distortion(
    rng: &mut ChaCha8Rng,
    base: Vec<f64>,
    answer: usize,
    distortion: Distortion,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (candidate, prediction) = match distortion {
        Distortion::None => (base.clone(), base),
        Distortion::Temperature { tau } => {
            let pred = temperature_anneal(&base, 1.0 / tau)?;
            (base, pred)
        }
        Distortion::Redistribution { alpha } => {
            let cand = mass_redistribute(&base, answer, alpha)?;
            (cand, base)
        }
        Distortion::Reshape { alpha, tau } => {
            let pred = floor_probabilities(base);
            let cand = reshape(&pred, answer, Shaping { alpha, tau })?;
            (cand, pred)
        }
        Distortion::Noise { sigma } => {
            let noisy: Vec<f64> = base
                .iter()
                .map(|p| p * (1.0 + sigma * (2.0 * rng.random::<f64>() - 1.0)))
                .collect();
            (base, renormalize(noisy))
        }
    };
    Ok((candidate, floor_probabilities(prediction)))
}

/// Undoes `mass_redistribute(., answer, alpha)`, if the candidate could have
/// come from it.
fn unredistribute(cand: &[f64], answer: usize, alpha: f64) -> Result<Vec<f64>> {
    let rest: f64 = cand.iter().enumerate().filter(|(j, _)| *j != answer).map(|(_, v)| v).sum();
    if alpha >= 1.0 || rest > 1.0 - alpha {
        return Err(Error::Infeasible(format!(
            "distractor mass {rest:.4} cannot come from redistribution with alpha {alpha}"
        )));
    }
    let mut out: Vec<f64> = cand.iter().map(|v| v / (1.0 - alpha)).collect();
    out[answer] = 1.0 - (rest / (1.0 - alpha));
    Ok(out)
}

/// Returns `(candidate, prediction)` with the candidate held fixed: the
/// prediction is whatever the distortion maps onto it.
fn predict_for(
    rng: &mut ChaCha8Rng,
    cand: Vec<f64>,
    answer: usize,
    distortion: Distortion,
) -> Result<(Vec<f64>, Vec<f64>)> {
    match distortion {
        Distortion::Redistribution { alpha } => {
            let pred = unredistribute(&cand, answer, alpha)?;
            Ok((cand, floor_probabilities(pred)))
        }
        Distortion::Reshape { alpha, tau } => {
            let pred = unredistribute(&temperature_anneal(&cand, 1.0 / tau)?, answer, alpha)?;
            Ok((cand, floor_probabilities(pred)))
        }
        other => apply_distortion(rng, cand, answer, other),
    }
}

fn assemble(
    items: Vec<Item>,
    pairs: Vec<(Vec<f64>, Vec<f64>)>,
) -> Result<SyntheticBank> {
    let mut distributions = Vec::with_capacity(items.len());
    let mut entries = std::collections::BTreeMap::new();
    for (item, (cand, pred)) in items.iter().zip(pairs) {
        distributions.push(CandidateDistribution::new(item.item_id.clone(), cand)?);
        entries.insert(item.item_id.clone(), pred);
    }
    let predictions = PredictionSet {
        variant: Variant::Qoc,
        entries,
        metadata: Some(serde_json::json!({ "generator": "synthetic" })),
    }
    .normalized()?;
    Ok(SyntheticBank {
        items,
        distributions,
        predictions,
    })
}

/// Generates items, candidate distributions and predictions.
pub fn gen_bank(config: &SynthConfig) -> Result<SyntheticBank> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let k = config.options_per_item;
    let mut items = Vec::with_capacity(config.n_items);
    let mut pairs = Vec::with_capacity(config.n_items);
    for i in 0..config.n_items {
        let answer = rng.random_range(0..k);
        let item = synth_item(&mut rng, config, i, answer);
        let base = mass_redistribute(&flat_dirichlet(&mut rng, k), answer, config.ability)?;
        pairs.push(apply_distortion(&mut rng, base, answer, config.distortion)?);
        items.push(item);
    }
    assemble(items, pairs)
}

const POOR_MIN: f64 = 0.01;
const POOR_SPAN: f64 = 0.08;
const FAIR_MIN: f64 = 0.12;

/// Generates a bank in which exactly `round(poor_rate * D)` of the `D`
/// distractors are chosen by fewer than 10% of candidates.
///
/// Poor distractors get a fraction in `[0.01, 0.09)`, the others at least
/// 0.12, and the answer takes the remaining mass. Shapes where the
/// non-poor distractors cannot all reach 0.12 are rejected. The candidate
/// fractions are kept as planted; for redistribution-type distortions the
/// predictions are obtained by inverting the map, which fails if the
/// answer share is too small for `alpha`.
pub fn gen_poor_distractors(config: &SynthConfig, poor_rate: f64) -> Result<SyntheticBank> {
    config.validate()?;
    if !(0.0..=1.0).contains(&poor_rate) {
        return Err(Error::Domain(format!("poor_rate must lie in [0, 1], got {poor_rate}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let k = config.options_per_item;
    let per_item = k - 1;
    let total = config.n_items * per_item;
    let n_poor = (poor_rate * total as f64).round() as usize;
    let mut slots: Vec<bool> = (0..total).map(|i| i < n_poor).collect();
    slots.shuffle(&mut rng);

    let mut items = Vec::with_capacity(config.n_items);
    let mut pairs = Vec::with_capacity(config.n_items);
    for i in 0..config.n_items {
        let answer = rng.random_range(0..k);
        let item = synth_item(&mut rng, config, i, answer);
        let poor = &slots[i * per_item..(i + 1) * per_item];
        let n_fair = poor.iter().filter(|p| !**p).count();
        let n_bad = per_item - n_fair;
        if FAIR_MIN * n_fair as f64 + (POOR_MIN + POOR_SPAN) * n_bad as f64 > 1.0 {
            return Err(Error::Infeasible(format!(
                "item {i}: {n_fair} non-poor distractors at >= {FAIR_MIN} and {n_bad} poor ones do not fit in unit mass"
            )));
        }
        let poor_fracs: Vec<f64> = poor
            .iter()
            .map(|p| if *p { POOR_MIN + POOR_SPAN * rng.random::<f64>() } else { 0.0 })
            .collect();
        let spare = 1.0 - poor_fracs.iter().sum::<f64>() - FAIR_MIN * n_fair as f64;
        let shares = flat_dirichlet(&mut rng, n_fair + 1);
        let keep = 1.0 - config.ability;
        let mut cand = vec![0.0; k];
        let mut fair_seen = 0;
        for (slot, option) in (0..k).filter(|j| *j != answer).enumerate() {
            cand[option] = if poor[slot] {
                poor_fracs[slot]
            } else {
                fair_seen += 1;
                FAIR_MIN + spare * keep * shares[fair_seen - 1]
            };
        }
        cand[answer] = 1.0 - cand.iter().sum::<f64>();
        pairs.push(predict_for(&mut rng, cand, answer, config.distortion)?);
        items.push(item);
    }
    assemble(items, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{extract_distractors, pr_curve, random_baseline, ScoreSource};
    use crate::reshape::{fit_params, level_stats, Source};

    fn config(seed: u64) -> SynthConfig {
        SynthConfig {
            seed,
            n_items: 40,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn same_seed_same_bank() {
        let a = gen_bank(&config(7)).unwrap();
        let b = gen_bank(&config(7)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_bank(&config(8)).unwrap());
    }

    #[test]
    fn full_ability_gives_delta_candidates() {
        let cfg = SynthConfig { ability: 1.0, ..config(3) };
        let bank = gen_bank(&cfg).unwrap();
        for (item, d) in bank.items.iter().zip(&bank.distributions) {
            for (j, f) in d.fractions.iter().enumerate() {
                assert_eq!(*f, if j == item.answer_index { 1.0 } else { 0.0 });
            }
        }
        let joined = bank.joined().unwrap();
        let stats = level_stats(joined.level("B1").unwrap(), Source::Candidate).unwrap();
        assert_eq!(stats.true_class_prob, 1.0);
    }

    #[test]
    fn distributions_are_unit_sum() {
        for distortion in [
            Distortion::None,
            Distortion::Temperature { tau: 3.0 },
            Distortion::Redistribution { alpha: 0.2 },
            Distortion::Reshape { alpha: 0.3, tau: 2.0 },
            Distortion::Noise { sigma: 0.5 },
        ] {
            let bank = gen_bank(&SynthConfig { distortion, ..config(11) }).unwrap();
            for d in &bank.distributions {
                assert!((d.fractions.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                assert!(d.fractions.iter().all(|f| *f >= 0.0));
            }
            for p in bank.predictions.entries.values() {
                assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                assert!(p.iter().all(|f| *f > 0.0));
            }
        }
    }

    #[test]
    fn temperature_distortion_is_recovered() {
        let cfg = SynthConfig {
            n_items: 200,
            ability: 0.4,
            distortion: Distortion::Temperature { tau: 2.0 },
            ..config(5)
        };
        let joined = gen_bank(&cfg).unwrap().joined().unwrap();
        let p = fit_params("B1", joined.level("B1").unwrap()).unwrap();
        assert!((p.tau - 2.0).abs() < 2e-2, "{p:?}");
        assert!(p.alpha < 1e-2, "{p:?}");
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(gen_bank(&SynthConfig { options_per_item: 1, ..config(1) }).is_err());
        assert!(gen_bank(&SynthConfig { ability: 1.5, ..config(1) }).is_err());
        assert!(gen_bank(&SynthConfig { n_items: 0, ..config(1) }).is_err());
        assert!(gen_bank(&SynthConfig { levels: vec![], ..config(1) }).is_err());
        let bad_tau = SynthConfig { distortion: Distortion::Temperature { tau: 0.0 }, ..config(1) };
        assert!(gen_bank(&bad_tau).is_err());
    }

    #[test]
    fn poor_rate_is_exact() {
        let cfg = SynthConfig { n_items: 25, options_per_item: 5, ..config(9) };
        let bank = gen_poor_distractors(&cfg, 0.25).unwrap();
        let joined = bank.joined().unwrap();
        let recs = extract_distractors(&joined, ScoreSource::Raw, &[]).unwrap();
        assert_eq!(recs.len(), 100);
        assert_eq!(recs.iter().filter(|r| r.is_poor).count(), 25);
    }

    #[test]
    fn poor_rate_survives_candidate_side_distortions() {
        for distortion in [Distortion::Redistribution { alpha: 0.1 }, Distortion::Reshape { alpha: 0.1, tau: 3.0 }] {
            let cfg = SynthConfig { n_items: 60, distortion, ..config(5) };
            let joined = gen_poor_distractors(&cfg, 0.25).unwrap().joined().unwrap();
            let recs = extract_distractors(&joined, ScoreSource::Raw, &[]).unwrap();
            assert_eq!(recs.iter().filter(|r| r.is_poor).count(), 45, "{distortion:?}");
            let p = crate::reshape::fit_params("B1", joined.level("B1").unwrap()).unwrap();
            let d = crate::divergence::aggregate_divergences("B1", joined.level("B1").unwrap(), p.source()).unwrap();
            assert!(d.kl < 1e-3, "{distortion:?}: {d:?}");
        }
        let greedy = SynthConfig { distortion: Distortion::Redistribution { alpha: 0.99 }, ..config(5) };
        assert!(matches!(gen_poor_distractors(&greedy, 0.25), Err(Error::Infeasible(_))));
    }

    #[test]
    fn poor_rate_extremes() {
        let none = gen_poor_distractors(&config(2), 0.0).unwrap().joined().unwrap();
        let recs = extract_distractors(&none, ScoreSource::Raw, &[]).unwrap();
        assert_eq!(random_baseline(&recs).unwrap(), 0.0);
        assert!(matches!(pr_curve(&recs), Err(Error::UndefinedRecall(_))));

        let noisy = SynthConfig { distortion: Distortion::Noise { sigma: 0.9 }, ..config(2) };
        let all = gen_poor_distractors(&noisy, 1.0).unwrap().joined().unwrap();
        let recs = extract_distractors(&all, ScoreSource::Raw, &[]).unwrap();
        assert_eq!(pr_curve(&recs).unwrap().average_precision, 1.0);

        assert!(gen_poor_distractors(&config(2), 1.5).is_err());
    }

    #[test]
    fn infeasible_shape_is_an_error() {
        let wide = SynthConfig { options_per_item: 12, ..config(4) };
        assert!(matches!(gen_poor_distractors(&wide, 0.0), Err(Error::Infeasible(_))));
        assert!(gen_poor_distractors(&wide, 1.0).is_ok());
    }
}
