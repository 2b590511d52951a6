//! The whole pipeline through the library: load files, fit, and write the
//! report directory the `report` subcommand produces.
//!
//! cargo run --example end_to_end_report [out-dir]

use std::path::PathBuf;

use mcq_pretest::detection::{DetectionScope, ScoreSource};
use mcq_pretest::item_bank::LevelSet;
use mcq_pretest::readability::WordLists;
use mcq_pretest::report::{build_report, write_bundle, Inputs, ReportOptions};
use mcq_pretest::reshape::fit_all;
use mcq_pretest::synthetic::{gen_poor_distractors, Distortion, SynthConfig};

fn main() -> mcq_pretest::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mcq-pretest-report"));
    let data = root.join("data");
    let config = SynthConfig {
        seed: 5,
        n_items: 240,
        ability: 0.6,
        distortion: Distortion::Reshape { alpha: 0.1, tau: 3.0 },
        levels: vec!["B1".into(), "B2".into(), "C1".into(), "C2".into()],
        ..SynthConfig::default()
    };
    gen_poor_distractors(&config, 0.25)?.write(&data)?;

    let inputs = Inputs::load(
        &data.join("items.jsonl"),
        &data.join("distributions.jsonl"),
        &data.join("predictions.json"),
        &LevelSet::default(),
        true,
    )?;
    let params = fit_all(&inputs.joined)?;
    let options = ReportOptions {
        score_source: ScoreSource::Reshaped,
        scope: DetectionScope::PerLevel,
        ..ReportOptions::default()
    };
    let bundle = build_report(&inputs, &params, None, &WordLists::default(), options)?;
    for row in &bundle.report.table4 {
        println!(
            "{} {:<8} tau {:.2} alpha {:.3} acc {:.3} KL {:.4}",
            row.level, row.kind, row.tau, row.alpha, row.accuracy, row.kl
        );
    }
    for path in write_bundle(&root.join("report"), &bundle)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
