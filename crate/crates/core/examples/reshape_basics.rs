//! Mass redistribution, temperature annealing and the combined reshape on a
//! single option distribution.
//!
//! cargo run --example reshape_basics

use mcq_pretest::reshape::{mass_redistribute, reshape, temperature_anneal, Shaping};

fn show(label: &str, p: &[f64]) {
    let cells: Vec<String> = p.iter().map(|v| format!("{v:.4}")).collect();
    println!("{label:<28} [{}]", cells.join(", "));
}

fn main() -> mcq_pretest::Result<()> {
    let model = [0.10, 0.40, 0.30, 0.20];
    let answer = 2;
    show("model", &model);
    show("redistribute alpha=0.3", &mass_redistribute(&model, answer, 0.3)?);
    show("anneal tau=0.5 (sharper)", &temperature_anneal(&model, 0.5)?);
    show("anneal tau=3 (flatter)", &temperature_anneal(&model, 3.0)?);
    let shaped = reshape(&model, answer, Shaping::new(0.3, 2.0)?)?;
    show("reshape alpha=0.3 tau=2", &shaped);
    println!("answer is now the mode: {}", shaped[answer] == shaped.iter().cloned().fold(0.0, f64::max));
    Ok(())
}
