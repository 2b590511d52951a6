//! Command-line surface. The `mcq-pretest` binary only parses arguments and
//! calls [`run`]; every subcommand is a thin wrapper over library calls.
//!
//! Exit codes: 0 success, 1 validation or domain failure, 2 I/O, usage or
//! environment failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::detection::{DetectionScope, ScoreSource};
use crate::error::{Error, Finding, Result};
use crate::item_bank::{
    join, load_candidate_distributions, load_item_bank_with, load_predictions, LevelSet,
    DEFAULT_LEVELS,
};
use crate::readability::{load_complexity_probs, readability_table, TextUnit, WordLists};
use crate::report::{
    build_report, detection_block, selected_levels, table3, table4, write_bundle, write_flagged,
    write_json, write_pr_points, write_table3, write_table4, write_table6, Inputs, ReportOptions,
};
use crate::reshape::{fit_params, load_params, write_params, ReshapeParams};
use crate::synthetic::{gen_bank, gen_poor_distractors, Distortion, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "mcq-pretest", version, about = "Pretest analytics for multiple-choice items")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the three input files and their join.
    Validate,
    /// Fit reshaping parameters per level.
    Fit,
    /// Accuracy, true-class probability and divergence tables.
    Evaluate,
    /// Poor distractor detection: PR curve and flagged list.
    Detect,
    /// Readability and complexity table.
    Readability,
    /// Generate a seeded synthetic bank.
    Simulate,
    /// Everything above, written to one directory.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DistortionKind {
    None,
    Temperature,
    Redistribution,
    Reshape,
    Noise,
}

/// Flags shared by all subcommands. Each may also be set in the `--config`
/// TOML file under the same (kebab-case) name; flags take precedence.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// TOML file with defaults for any of these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Item bank, JSON array or JSONL.
    #[arg(long, global = true)]
    pub items: Option<PathBuf>,
    /// Candidate answer distributions, JSON array or JSONL.
    #[arg(long, global = true)]
    pub distributions: Option<PathBuf>,
    /// Model predictions `{variant, entries: {item_id: [p...]}}`.
    #[arg(long, global = true)]
    pub predictions: Option<PathBuf>,
    /// Fitted parameters: output of `fit`, input elsewhere.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    /// Complexity classifier probabilities `{item_id: [easy, medium, hard]}`.
    #[arg(long, global = true)]
    pub complexity: Option<PathBuf>,
    /// Restrict to one level.
    #[arg(long, global = true)]
    pub level: Option<String>,
    /// Accepted level labels (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub levels: Option<Vec<String>>,
    /// Distractor score: raw or reshaped model probability [default: raw].
    #[arg(long, global = true, value_enum)]
    pub score_source: Option<ScoreSource>,
    /// One ranking over all levels, or one per level too [default: global].
    #[arg(long, global = true, value_enum)]
    pub scope: Option<DetectionScope>,
    /// Text scored for readability [default: full-item].
    #[arg(long, global = true, value_enum)]
    pub text_unit: Option<TextUnit>,
    /// Dale-Chall familiar word list, one word per line.
    #[arg(long, global = true)]
    pub dale_list: Option<PathBuf>,
    /// Spache familiar word list, one word per line.
    #[arg(long, global = true)]
    pub spache_list: Option<PathBuf>,
    /// Only list distractors scoring at or below this value.
    #[arg(long, global = true)]
    pub flag_max_score: Option<f64>,
    /// Output directory [default: .].
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Fail on any item missing a distribution or prediction.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Fit parameters in-process when `--params` is not given.
    #[arg(long, global = true)]
    pub fit: bool,
    /// RNG seed for `simulate` (required).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of synthetic items [default: 100].
    #[arg(long, global = true)]
    pub n_items: Option<usize>,
    /// Options per synthetic item [default: 4].
    #[arg(long, global = true)]
    pub options: Option<usize>,
    /// Candidate ability in [0, 1]: share of mass tilted to the answer [default: 0.5].
    #[arg(long, global = true)]
    pub ability: Option<f64>,
    /// How synthetic predictions differ from candidates [default: none].
    #[arg(long, global = true, value_enum)]
    pub distortion: Option<DistortionKind>,
    /// Temperature for the temperature and reshape distortions.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Redistribution weight for the redistribution and reshape distortions.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Relative noise size for the noise distortion.
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Generate a bank with this fraction of poor distractors.
    #[arg(long, global = true)]
    pub poor_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    items: Option<PathBuf>,
    distributions: Option<PathBuf>,
    predictions: Option<PathBuf>,
    params: Option<PathBuf>,
    complexity: Option<PathBuf>,
    level: Option<String>,
    levels: Option<Vec<String>>,
    score_source: Option<ScoreSource>,
    scope: Option<DetectionScope>,
    text_unit: Option<TextUnit>,
    dale_list: Option<PathBuf>,
    spache_list: Option<PathBuf>,
    flag_max_score: Option<f64>,
    out_dir: Option<PathBuf>,
    strict: Option<bool>,
    fit: Option<bool>,
    seed: Option<u64>,
    n_items: Option<usize>,
    options: Option<usize>,
    ability: Option<f64>,
    distortion: Option<DistortionKind>,
    tau: Option<f64>,
    alpha: Option<f64>,
    sigma: Option<f64>,
    poor_rate: Option<f64>,
}

impl Settings {
    /// Fills unset flags from the config file, if any.
    pub fn resolve(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let file: FileConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            locator: e
                .span()
                .map(|s| format!("byte {}", s.start))
                .unwrap_or_else(|| "-".into()),
            message: e.message().to_string(),
        })?;
        macro_rules! fill {
            ($($field:ident),*) => {
                $( if self.$field.is_none() { self.$field = file.$field; } )*
            };
        }
        fill!(
            items, distributions, predictions, params, complexity, level, levels, score_source,
            scope, text_unit, dale_list, spache_list, flag_max_score, out_dir, seed, n_items,
            options, ability, distortion, tau, alpha, sigma, poor_rate
        );
        self.strict |= file.strict.unwrap_or(false);
        self.fit |= file.fit.unwrap_or(false);
        Ok(self)
    }

    fn required<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
        value
            .as_deref()
            .ok_or_else(|| Error::Usage(format!("--{flag} is required")))
    }

    fn level_set(&self) -> LevelSet {
        match &self.levels {
            Some(l) => LevelSet::new(l.iter().cloned()),
            None => LevelSet::new(DEFAULT_LEVELS),
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    fn word_lists(&self) -> Result<WordLists> {
        match (&self.dale_list, &self.spache_list) {
            (None, None) => Ok(WordLists::default()),
            (Some(d), Some(s)) => WordLists::from_files(d, s),
            _ => Err(Error::Usage("--dale-list and --spache-list must be given together".into())),
        }
    }

    fn inputs(&self, strict: bool) -> Result<Inputs> {
        Inputs::load(
            self.required(&self.items, "items")?,
            self.required(&self.distributions, "distributions")?,
            self.required(&self.predictions, "predictions")?,
            &self.level_set(),
            strict,
        )
    }

    /// Parameters from `--params`, or fitted in-process with `--fit`, or none.
    fn params_for(&self, inputs: &Inputs, levels: &[String]) -> Result<Vec<ReshapeParams>> {
        if let Some(path) = &self.params {
            return load_params(path);
        }
        if self.fit {
            return fit_levels(inputs, levels);
        }
        Ok(Vec::new())
    }

    fn synth_config(&self) -> Result<SynthConfig> {
        let seed = self
            .seed
            .ok_or_else(|| Error::Usage("--seed is required for simulation".into()))?;
        let tau = self.tau.unwrap_or(1.0);
        let alpha = self.alpha.unwrap_or(0.0);
        let distortion = match self.distortion.unwrap_or(DistortionKind::None) {
            DistortionKind::None => Distortion::None,
            DistortionKind::Temperature => Distortion::Temperature { tau },
            DistortionKind::Redistribution => Distortion::Redistribution { alpha },
            DistortionKind::Reshape => Distortion::Reshape { alpha, tau },
            DistortionKind::Noise => Distortion::Noise {
                sigma: self.sigma.unwrap_or(0.0),
            },
        };
        let defaults = SynthConfig::default();
        let config = SynthConfig {
            seed,
            n_items: self.n_items.unwrap_or(defaults.n_items),
            options_per_item: self.options.unwrap_or(defaults.options_per_item),
            ability: self.ability.unwrap_or(defaults.ability),
            distortion,
            levels: self
                .levels
                .clone()
                .unwrap_or_else(|| DEFAULT_LEVELS.iter().map(|s| s.to_string()).collect()),
        };
        config.validate()?;
        Ok(config)
    }
}

fn fit_levels(inputs: &Inputs, levels: &[String]) -> Result<Vec<ReshapeParams>> {
    levels
        .iter()
        .map(|l| fit_params(l, inputs.joined.level(l)?))
        .collect()
}

/// Parses nothing; runs an already-parsed command. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = cli
        .settings
        .resolve()
        .and_then(|settings| dispatch(cli.command, &settings, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, s: &Settings, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate => cmd_validate(s, out),
        Command::Fit => cmd_fit(s, out).map(|_| 0),
        Command::Evaluate => cmd_evaluate(s, out).map(|_| 0),
        Command::Detect => cmd_detect(s, out).map(|_| 0),
        Command::Readability => cmd_readability(s, out).map(|_| 0),
        Command::Simulate => cmd_simulate(s, out).map(|_| 0),
        Command::Report => cmd_report(s, out).map(|_| 0),
    }
}

fn emit(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::Output(e.to_string()))
}

/// Loads every file independently so all problems are listed, then joins
/// strictly. I/O failures take precedence (exit 2) over findings (exit 1).
pub fn cmd_validate(s: &Settings, out: &mut dyn Write) -> Result<i32> {
    let items_path = s.required(&s.items, "items")?;
    let dists_path = s.required(&s.distributions, "distributions")?;
    let preds_path = s.required(&s.predictions, "predictions")?;

    let mut findings: Vec<Finding> = Vec::new();
    let mut io_failure = None;
    let mut absorb = |e: Error| match e {
        Error::Io { .. } => {
            io_failure.get_or_insert(e);
        }
        other => findings.extend(other.findings()),
    };

    let bank = load_item_bank_with(items_path, &s.level_set()).map_err(&mut absorb).ok();
    let dists = load_candidate_distributions(dists_path).map_err(&mut absorb).ok();
    let preds = load_predictions(preds_path).map_err(&mut absorb).ok();
    if let (Some(bank), Some(dists), Some(preds)) = (&bank, &dists, &preds) {
        if let Err(e) = join(&bank.items, dists, preds, true) {
            absorb(e);
        }
    }
    if let Some(e) = io_failure {
        return Err(e);
    }
    if let Some(bank) = &bank {
        for w in &bank.warnings {
            emit(out, format!("warning {w}"))?;
        }
    }
    for f in &findings {
        emit(out, f)?;
    }
    if findings.is_empty() {
        let n = bank.map(|b| b.len()).unwrap_or(0);
        emit(out, format!("ok: {n} items, join total"))?;
        Ok(0)
    } else {
        emit(out, format!("{} finding(s)", findings.len()))?;
        Ok(1)
    }
}

fn params_line(p: &ReshapeParams) -> String {
    let d = &p.diagnostics;
    format!(
        "{}\ttau={}\talpha={}\tacc={}\ttcp={}\ttarget_acc={}\ttarget_tcp={}{}",
        p.level,
        p.tau,
        p.alpha,
        d.achieved_accuracy,
        d.achieved_tcp,
        d.target_accuracy,
        d.target_tcp,
        if d.tau_at_boundary { "\t(tau at search boundary)" } else { "" }
    )
}

/// Fits one parameter record per selected level and writes them to
/// `--params` (default `<out-dir>/params.json`).
pub fn cmd_fit(s: &Settings, out: &mut dyn Write) -> Result<Vec<ReshapeParams>> {
    let inputs = s.inputs(s.strict)?;
    let levels = selected_levels(&inputs.joined, s.level.as_deref())?;
    let params = fit_levels(&inputs, &levels)?;
    let path = match &s.params {
        Some(p) => p.clone(),
        None => {
            let dir = s.out_dir();
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            dir.join("params.json")
        }
    };
    write_params(&path, &params)?;
    for p in &params {
        emit(out, params_line(p))?;
    }
    Ok(params)
}

pub fn cmd_evaluate(s: &Settings, out: &mut dyn Write) -> Result<()> {
    let inputs = s.inputs(s.strict)?;
    let levels = selected_levels(&inputs.joined, s.level.as_deref())?;
    let params = s.params_for(&inputs, &levels)?;
    let t3 = table3(&inputs.joined, &levels)?;
    let t4 = table4(&inputs.joined, &levels, &params)?;
    let dir = s.out_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_table3(&dir.join("table3.csv"), &t3)?;
    write_table4(&dir.join("table4.csv"), &t4)?;
    emit(out, "level\tn\tcand_acc\tmodel_acc\tcand_tcp\tmodel_tcp")?;
    for r in &t3 {
        emit(
            out,
            format!(
                "{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}",
                r.level, r.n_items, r.candidate_accuracy, r.model_accuracy, r.candidate_tcp, r.model_tcp
            ),
        )?;
    }
    emit(out, "level\tkind\ttau\talpha\tacc\ttcp\tkl\th\tv")?;
    for r in &t4 {
        emit(
            out,
            format!(
                "{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}",
                r.level, r.kind, r.tau, r.alpha, r.accuracy, r.tcp, r.kl, r.hellinger, r.total_variation
            ),
        )?;
    }
    Ok(())
}

pub fn cmd_detect(s: &Settings, out: &mut dyn Write) -> Result<()> {
    let inputs = s.inputs(s.strict)?;
    let levels = selected_levels(&inputs.joined, s.level.as_deref())?;
    let mut params = s.params_for(&inputs, &levels)?;
    let source = s.score_source.unwrap_or_default();
    if source == ScoreSource::Reshaped && params.is_empty() {
        params = fit_levels(&inputs, &levels)?;
    }
    let mut scoped = Vec::new();
    for l in &levels {
        scoped.extend_from_slice(inputs.joined.level(l)?);
    }
    let bank = crate::item_bank::JoinedBank::from_joined(scoped);
    let (block, points, flagged) =
        detection_block(&bank, &params, source, s.scope.unwrap_or_default(), s.flag_max_score)?;
    if let Some(reason) = &block.skipped {
        return Err(Error::Domain(reason.clone()));
    }
    let dir = s.out_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for ((_, pts), summary) in points.iter().zip(&block.curves) {
        write_pr_points(&dir.join(&summary.points_file), pts)?;
    }
    write_flagged(&dir.join(&block.flagged_file), &flagged)?;
    for c in &block.curves {
        emit(
            out,
            format!(
                "{}\tAP={:.4}\trandom={:.4}\tpositives={}/{}",
                c.label, c.average_precision, c.random_baseline, c.n_positive, c.n_records
            ),
        )?;
    }
    Ok(())
}

pub fn cmd_readability(s: &Settings, out: &mut dyn Write) -> Result<()> {
    let bank = load_item_bank_with(s.required(&s.items, "items")?, &s.level_set())?;
    let items: Vec<_> = match &s.level {
        Some(l) => {
            let subset: Vec<_> = bank.items.iter().filter(|i| &i.level == l).cloned().collect();
            if subset.is_empty() {
                return Err(Error::UnknownLevel {
                    level: l.clone(),
                    available: bank.level_counts().into_keys().collect(),
                });
            }
            subset
        }
        None => bank.items,
    };
    let complexity = s.complexity.as_ref().map(load_complexity_probs).transpose()?;
    let table = readability_table(
        &items,
        s.text_unit.unwrap_or_default(),
        &s.word_lists()?,
        complexity.as_ref(),
    )?;
    let dir = s.out_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_table6(&dir.join("table6.csv"), &table)?;
    emit(out, format!("metric\t{}", table.levels.join("\t")))?;
    for (metric, cells) in &table.rows {
        let cols: Vec<String> = table
            .levels
            .iter()
            .map(|l| cells.get(l).map(|c| format!("{:.1}±{:.1}", c.mean, c.std)).unwrap_or_default())
            .collect();
        emit(out, format!("{metric}\t{}", cols.join("\t")))?;
    }
    Ok(())
}

pub fn cmd_simulate(s: &Settings, out: &mut dyn Write) -> Result<()> {
    let config = s.synth_config()?;
    let bank = match s.poor_rate {
        Some(rate) => gen_poor_distractors(&config, rate)?,
        None => gen_bank(&config)?,
    };
    let dir = s.out_dir();
    bank.write(&dir)?;
    #[derive(serde::Serialize)]
    struct Recorded<'a> {
        config: &'a SynthConfig,
        poor_rate: Option<f64>,
    }
    write_json(
        &dir.join("synth_config.json"),
        &Recorded {
            config: &config,
            poor_rate: s.poor_rate,
        },
    )?;
    emit(
        out,
        format!("wrote {} items to {}", bank.items.len(), dir.display()),
    )?;
    Ok(())
}

pub fn cmd_report(s: &Settings, out: &mut dyn Write) -> Result<()> {
    let inputs = s.inputs(s.strict)?;
    let levels = selected_levels(&inputs.joined, s.level.as_deref())?;
    let params = s.params_for(&inputs, &levels)?;
    let complexity = s.complexity.as_ref().map(load_complexity_probs).transpose()?;
    let options = ReportOptions {
        level: s.level.clone(),
        score_source: s.score_source.unwrap_or_default(),
        scope: s.scope.unwrap_or_default(),
        text_unit: s.text_unit.unwrap_or_default(),
        flag_max_score: s.flag_max_score,
        ..ReportOptions::default()
    };
    let bundle = build_report(&inputs, &params, complexity.as_ref(), &s.word_lists()?, options)?;
    let dir = s.out_dir();
    let written = write_bundle(&dir, &bundle)?;
    for p in written {
        emit(out, format!("wrote {}", p.display()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn config_file_fills_unset_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "seed = 9\nn-items = 12\nstrict = true\nscore-source = \"reshaped\"\nitems = \"from-file.jsonl\"\n").unwrap();
        let cli = Cli::try_parse_from(["mcq-pretest", "simulate", "--config", cfg.to_str().unwrap(), "--items", "flag.jsonl"]).unwrap();
        let s = cli.settings.resolve().unwrap();
        assert_eq!(s.seed, Some(9));
        assert_eq!(s.n_items, Some(12));
        assert!(s.strict);
        assert_eq!(s.score_source, Some(ScoreSource::Reshaped));
        assert_eq!(s.items, Some(PathBuf::from("flag.jsonl")));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "sede = 9\n").unwrap();
        let cli = Cli::try_parse_from(["mcq-pretest", "simulate", "--config", cfg.to_str().unwrap()]).unwrap();
        assert!(matches!(cli.settings.resolve(), Err(Error::Parse { .. })));
    }

    #[test]
    fn simulate_requires_seed() {
        let cli = Cli::try_parse_from(["mcq-pretest", "simulate"]).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(cli, &mut out, &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("--seed"));
    }
}
