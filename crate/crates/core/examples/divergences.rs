//! Pointwise divergences, level averages before and after reshaping, and an
//! empirical CDF of pooled option probabilities.
//!
//! cargo run --example divergences

use mcq_pretest::divergence::{
    aggregate_divergences, empirical_cdf, hellinger, kl_divergence, pooled_probabilities, total_variation,
};
use mcq_pretest::reshape::{fit_params, Source};
use mcq_pretest::synthetic::{gen_bank, Distortion, SynthConfig};

fn main() -> mcq_pretest::Result<()> {
    let (p, q) = ([0.5, 0.5], [0.25, 0.75]);
    println!("KL(p||q) = {:.4}", kl_divergence(&p, &q)?);
    println!("KL(q||p) = {:.4}  (not symmetric)", kl_divergence(&q, &p)?);
    println!("H = {:.4}, TV = {:.4}\n", hellinger(&p, &q)?, total_variation(&p, &q)?);

    let config = SynthConfig {
        seed: 3,
        n_items: 300,
        distortion: Distortion::Temperature { tau: 4.0 },
        ..SynthConfig::default()
    };
    let bank = gen_bank(&config)?.joined()?;
    let items = bank.level("B1")?;
    let params = fit_params("B1", items)?;
    for (name, source) in [("raw", Source::Model), ("reshaped", params.source())] {
        let row = aggregate_divergences("B1", items, source)?;
        println!("{name:<9} KL {:.4}  H {:.4}  TV {:.4}", row.kl, row.hellinger, row.total_variation);
    }

    println!("\nCDF of pooled probabilities (threshold:fraction at six points)");
    for (name, source) in [("candidate", Source::Candidate), ("model", Source::Model)] {
        let cdf = empirical_cdf(&pooled_probabilities(items, source)?)?;
        let line: Vec<String> = cdf
            .iter()
            .step_by((cdf.len() / 6).max(1))
            .map(|c| format!("{:.2}:{:.2}", c.threshold, c.cumulative))
            .collect();
        println!("{name:<9} {}", line.join("  "));
    }
    Ok(())
}
