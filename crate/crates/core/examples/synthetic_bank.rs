//! Generate a seeded synthetic bank, write it in the on-disk input formats
//! and load it back.
//!
//! cargo run --example synthetic_bank [out-dir]

use mcq_pretest::item_bank::{join, load_candidate_distributions, load_item_bank, load_predictions};
use mcq_pretest::synthetic::{gen_bank, Distortion, SynthConfig};

fn main() -> mcq_pretest::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mcq-pretest-synthetic"));
    let config = SynthConfig {
        seed: 2024,
        n_items: 40,
        options_per_item: 5,
        distortion: Distortion::Redistribution { alpha: 0.2 },
        levels: vec!["B2".into(), "C2".into()],
        ..SynthConfig::default()
    };
    let bank = gen_bank(&config)?;
    bank.write(&dir)?;
    println!("wrote {} items to {}", bank.items.len(), dir.display());

    let items = load_item_bank(dir.join("items.jsonl"))?;
    let dists = load_candidate_distributions(dir.join("distributions.jsonl"))?;
    let preds = load_predictions(dir.join("predictions.json"))?;
    let joined = join(&items.items, &dists, &preds, true)?;
    println!("reloaded and joined: {:?}", joined.report().level_counts);

    let again = gen_bank(&config)?;
    println!("same seed reproduces the bank: {}", again == bank);
    let first = &bank.items[0];
    println!("{}: answer {} candidates {:?}", first.item_id, first.answer_index, bank.distributions[0].fractions);
    Ok(())
}
