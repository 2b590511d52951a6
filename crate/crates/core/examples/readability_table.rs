//! Readability indices for a single passage, then a per-level table with a
//! classifier complexity row.
//!
//! cargo run --example readability_table

use std::collections::BTreeMap;

use mcq_pretest::item_bank::Item;
use mcq_pretest::readability::{
    complexity_score, readability_indices, readability_table, text_stats, ComplexityProbs, TextUnit, WordLists,
};

fn item(id: &str, level: &str, context: &str) -> Item {
    Item {
        item_id: id.into(),
        context_id: id.into(),
        context: context.into(),
        question: "What is the main idea?".into(),
        options: vec!["The weather".into(), "A journey".into(), "A meal".into(), "A game".into()],
        answer_index: 1,
        level: level.into(),
        discrimination: None,
        candidate_count: None,
    }
}

fn main() -> mcq_pretest::Result<()> {
    let passage = "The cat sat. It was warm by the fire, and the house was quiet.";
    let stats = text_stats(passage);
    println!("{stats:?}");
    for (name, value) in readability_indices(&stats)?.named() {
        println!("  {name:<9} {value:7.2}");
    }

    let items = vec![
        item("b1-1", "B1", "Tom went to the shop. He bought some bread and milk."),
        item("b1-2", "B1", "We walked to the park. The sun was hot, so we sat under a tree."),
        item("c1-1", "C1", "Notwithstanding considerable institutional resistance, the committee ultimately endorsed the controversial proposal."),
        item("c1-2", "C1", "Contemporary epidemiological evidence substantially complicates conventional assumptions regarding nutritional causality."),
    ];
    let complexity: BTreeMap<String, ComplexityProbs> = [
        ("b1-1", [0.8, 0.15, 0.05]),
        ("b1-2", [0.7, 0.2, 0.1]),
        ("c1-1", [0.1, 0.3, 0.6]),
        ("c1-2", [0.05, 0.25, 0.7]),
    ]
    .into_iter()
    .map(|(id, p)| Ok((id.to_string(), ComplexityProbs::try_from(p)?)))
    .collect::<mcq_pretest::Result<_>>()?;
    println!("\ncomplexity score of c1-2: {:.1}", complexity_score(&complexity["c1-2"]));

    let table = readability_table(&items, TextUnit::ContextOnly, &WordLists::default(), Some(&complexity))?;
    println!("\n{:<9} {}", "metric", table.levels.iter().map(|l| format!("{l:>13}")).collect::<String>());
    for (metric, cells) in &table.rows {
        let cols: String = table
            .levels
            .iter()
            .map(|l| format!("{:>7.1} ± {:<3.1}", cells[l].mean, cells[l].std))
            .collect();
        println!("{metric:<9} {cols}");
    }
    Ok(())
}
