//! Rank distractors by model probability to find the ones almost no
//! candidate chooses, and compare average precision with chance.
//!
//! cargo run --example distractor_detection

use mcq_pretest::detection::{detect, flagged_distractors, DetectionScope, ScoreSource};
use mcq_pretest::reshape::fit_all;
use mcq_pretest::synthetic::{gen_poor_distractors, Distortion, SynthConfig};

fn main() -> mcq_pretest::Result<()> {
    let config = SynthConfig {
        seed: 21,
        n_items: 200,
        distortion: Distortion::Noise { sigma: 0.5 },
        levels: vec!["B1".into(), "C1".into()],
        ..SynthConfig::default()
    };
    let bank = gen_poor_distractors(&config, 0.3)?.joined()?;
    let params = fit_all(&bank)?;

    for source in [ScoreSource::Raw, ScoreSource::Reshaped] {
        for (label, _, curve) in detect(&bank, source, &params, DetectionScope::PerLevel)? {
            println!(
                "{source:?} {label}: AP {:.3} (chance {:.3}), {} of {} distractors are poor",
                curve.average_precision, curve.prevalence, curve.n_positive, curve.n_records
            );
        }
    }

    let (_, records, _) = detect(&bank, ScoreSource::Raw, &params, DetectionScope::Global)?.remove(0);
    println!("\nfive most suspect distractors:");
    for r in flagged_distractors(&records, None).iter().take(5) {
        println!(
            "  {} option {}  model {:.3}  candidates {:.3}  poor={}",
            r.item_id, r.option_index, r.model_probability, r.candidate_fraction, r.is_poor
        );
    }
    Ok(())
}
