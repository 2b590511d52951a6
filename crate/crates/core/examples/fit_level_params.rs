//! Fit (alpha, tau) for each level of a synthetic bank whose model is
//! overconfident and underestimates how often candidates pick the answer.
//!
//! cargo run --example fit_level_params

use mcq_pretest::reshape::{fit_all, level_stats, Source};
use mcq_pretest::synthetic::{gen_bank, Distortion, SynthConfig};

fn main() -> mcq_pretest::Result<()> {
    let config = SynthConfig {
        seed: 11,
        n_items: 400,
        ability: 0.2,
        distortion: Distortion::Reshape { alpha: 0.25, tau: 2.5 },
        levels: vec!["B1".into(), "B2".into(), "C1".into(), "C2".into()],
        ..SynthConfig::default()
    };
    let bank = gen_bank(&config)?.joined()?;
    println!("generated with alpha=0.25 tau=2.5\n");
    println!("level  alpha   tau     cand_acc model_acc reshaped_acc  cand_tcp reshaped_tcp");
    for p in fit_all(&bank)? {
        let items = bank.level(&p.level)?;
        let cand = level_stats(items, Source::Candidate)?;
        let model = level_stats(items, Source::Model)?;
        let shaped = level_stats(items, p.source())?;
        println!(
            "{:<6} {:.3}  {:<7.3} {:.3}    {:.3}     {:.3}         {:.3}     {:.3}",
            p.level, p.alpha, p.tau, cand.mode_accuracy, model.mode_accuracy, shaped.mode_accuracy,
            cand.true_class_prob, shaped.true_class_prob
        );
    }
    Ok(())
}
