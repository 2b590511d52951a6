//! Compare a model that reads the passage (QOC) with one that sees only the
//! question and options (QO) on the same items.
//!
//! cargo run --example context_free_comparison

use mcq_pretest::divergence::aggregate_divergences;
use mcq_pretest::item_bank::{join, Variant};
use mcq_pretest::reshape::{fit_params, level_stats, Source};
use mcq_pretest::synthetic::{gen_bank, Distortion, SynthConfig};

fn main() -> mcq_pretest::Result<()> {
    let base = SynthConfig { seed: 99, n_items: 300, ..SynthConfig::default() };
    let with_context = gen_bank(&SynthConfig { distortion: Distortion::Noise { sigma: 0.2 }, ..base.clone() })?;
    let mut without = gen_bank(&SynthConfig { distortion: Distortion::Noise { sigma: 0.9 }, ..base })?;
    without.predictions.variant = Variant::Qo;

    for bank in [&with_context, &without] {
        let joined = join(&bank.items, &bank.distributions, &bank.predictions, true)?;
        let items = joined.level("B1")?;
        let params = fit_params("B1", items)?;
        let stats = level_stats(items, Source::Model)?;
        let raw = aggregate_divergences("B1", items, Source::Model)?;
        let shaped = aggregate_divergences("B1", items, params.source())?;
        println!(
            "{:<3} model acc {:.3}  KL raw {:.4} reshaped {:.4}  (alpha {:.3}, tau {:.2})",
            bank.predictions.variant, stats.mode_accuracy, raw.kl, shaped.kl, params.alpha, params.tau
        );
    }
    Ok(())
}
