//! Text complexity analytics: classic readability indices over item text,
//! the classifier-based complexity score, and per-level mean ± std tables.
//!
//! Tokenization is deliberately simple and fully specified so that fixture
//! values can be computed by hand:
//!
//! * words are whitespace-separated tokens with leading and trailing
//!   non-alphanumeric characters stripped (empty tokens are dropped);
//! * a sentence ends at a token whose last character is `.`, `!` or `?`
//!   (that is, a terminator followed by whitespace or end of text); trailing
//!   words without a terminator form a final sentence;
//! * characters are the alphanumeric characters of the words;
//! * syllables are runs of the vowels `aeiouy`, minus one for a silent
//!   trailing `e` (not after a vowel, and not in a consonant + `le` ending),
//!   with a minimum of one per word.

mod words;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item_bank::Item;
use crate::numeric::{mean, sample_std, SUM_TOLERANCE};

/// Syllable count at which a word is "complex" (Gunning Fog) or "hard"
/// (Linsear Write).
pub const COMPLEX_SYLLABLES: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TextStats {
    pub sentences: usize,
    pub words: usize,
    /// Letters and digits.
    pub characters: usize,
    pub syllables: usize,
    /// Words with at least three syllables.
    pub complex_words: usize,
    /// Words missing from the Dale-Chall familiar list.
    pub difficult_words_dale: usize,
    /// Words missing from the Spache familiar list.
    pub difficult_words_spache: usize,
    /// Words with at least three syllables, as counted by Linsear Write.
    pub long_words_linsear: usize,
}

/// Familiar-word lists used by Dale-Chall and Spache.
#[derive(Debug, Clone)]
pub struct WordLists {
    dale_chall: HashSet<String>,
    spache: HashSet<String>,
}

impl Default for WordLists {
    /// The embedded subsets.
    fn default() -> Self {
        Self {
            dale_chall: words::DALE_CHALL_SUBSET.iter().map(|w| w.to_string()).collect(),
            spache: words::SPACHE_SUBSET.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl WordLists {
    pub fn new<I, J, S, T>(dale_chall: I, spache: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        Self {
            dale_chall: dale_chall.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
            spache: spache.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    /// Reads newline-delimited UTF-8 word lists. Blank lines are ignored.
    pub fn from_files(dale_chall: impl AsRef<Path>, spache: impl AsRef<Path>) -> Result<Self> {
        let read = |p: &Path| -> Result<Vec<String>> {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Ok(text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_string)
                .collect())
        };
        Ok(Self::new(read(dale_chall.as_ref())?, read(spache.as_ref())?))
    }

    fn dale_familiar(&self, word: &str) -> bool {
        self.dale_chall.contains(word)
    }

    fn spache_familiar(&self, word: &str) -> bool {
        self.spache.contains(word)
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable estimate for a single word.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return 1;
    }
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    let silent_e = n >= 2
        && letters[n - 1] == 'e'
        && !is_vowel(letters[n - 2])
        && !(n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]));
    if silent_e && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}

fn strip_token(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Word tokens of `text` under the fixed tokenizer.
pub fn words(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .map(strip_token)
        .filter(|w| !w.is_empty())
        .collect()
}

fn count_sentences(text: &str) -> usize {
    let mut sentences = 0;
    let mut open = false;
    for token in text.split_whitespace() {
        if !strip_token(token).is_empty() {
            open = true;
        }
        if token.ends_with(['.', '!', '?']) {
            if open {
                sentences += 1;
            }
            open = false;
        }
    }
    sentences + usize::from(open)
}

/// Counts under the default embedded word lists.
pub fn text_stats(text: &str) -> TextStats {
    text_stats_with(text, &WordLists::default())
}

pub fn text_stats_with(text: &str, lists: &WordLists) -> TextStats {
    let mut stats = TextStats {
        sentences: count_sentences(text),
        ..TextStats::default()
    };
    for word in words(text) {
        let syllables = count_syllables(word);
        let lower = word.to_lowercase();
        let has_letter = word.chars().any(char::is_alphabetic);
        stats.words += 1;
        stats.characters += word.chars().filter(|c| c.is_alphanumeric()).count();
        stats.syllables += syllables;
        if syllables >= COMPLEX_SYLLABLES {
            stats.complex_words += 1;
            stats.long_words_linsear += 1;
        }
        if has_letter && !lists.dale_familiar(&lower) {
            stats.difficult_words_dale += 1;
        }
        if has_letter && !lists.spache_familiar(&lower) {
            stats.difficult_words_spache += 1;
        }
    }
    stats
}

/// The seven readability indices. Higher means harder to read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityIndices {
    pub flesch_kincaid: f64,
    pub dale_chall: f64,
    pub ari: f64,
    pub coleman_liau: f64,
    pub gunning_fog: f64,
    pub spache: f64,
    pub linsear_write: f64,
}

impl ReadabilityIndices {
    /// Metric labels in table order, paired with their values.
    pub fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("Flesch-K", self.flesch_kincaid),
            ("Dale", self.dale_chall),
            ("ARI", self.ari),
            ("Coleman", self.coleman_liau),
            ("Gunning", self.gunning_fog),
            ("Spache", self.spache),
            ("Linsear", self.linsear_write),
        ]
    }
}

/// Computes all indices from `stats`.
///
/// * Flesch-Kincaid grade: `0.39 W/S + 11.8 Syl/W - 15.59`
/// * ARI: `4.71 C/W + 0.5 W/S - 21.43`
/// * Coleman-Liau: `0.0588 L - 0.296 S100 - 15.8`, with letters and
///   sentences per 100 words
/// * Gunning Fog: `0.4 (W/S + 100 complex/W)`
/// * Dale-Chall: `0.1579 pdw + 0.0496 W/S`, plus `3.6365` when the
///   percentage of difficult words `pdw` exceeds 5
/// * Spache: `0.121 W/S + 0.082 pdw_spache + 0.659`
/// * Linsear Write: `r = (easy + 3 hard) / S`; `r / 2` if `r > 20`, else
///   `(r - 2) / 2`
pub fn readability_indices(stats: &TextStats) -> Result<ReadabilityIndices> {
    if stats.words == 0 || stats.sentences == 0 {
        return Err(Error::Domain(format!(
            "readability undefined for {} words in {} sentences",
            stats.words, stats.sentences
        )));
    }
    let w = stats.words as f64;
    let s = stats.sentences as f64;
    let wps = w / s;
    let pct = |count: usize| 100.0 * count as f64 / w;

    let dale_pct = pct(stats.difficult_words_dale);
    let mut dale_chall = 0.1579 * dale_pct + 0.0496 * wps;
    if dale_pct > 5.0 {
        dale_chall += 3.6365;
    }

    let hard = stats.long_words_linsear as f64;
    let provisional = ((w - hard) + 3.0 * hard) / s;
    let linsear_write = if provisional > 20.0 {
        provisional / 2.0
    } else {
        (provisional - 2.0) / 2.0
    };

    Ok(ReadabilityIndices {
        flesch_kincaid: 0.39 * wps + 11.8 * (stats.syllables as f64 / w) - 15.59,
        dale_chall,
        ari: 4.71 * (stats.characters as f64 / w) + 0.5 * wps - 21.43,
        coleman_liau: 0.0588 * pct(stats.characters) - 0.296 * (100.0 * s / w) - 15.8,
        gunning_fog: 0.4 * (wps + pct(stats.complex_words)),
        spache: 0.121 * wps + 0.082 * pct(stats.difficult_words_spache) + 0.659,
        linsear_write,
    })
}

/// Easy/medium/hard probabilities from an external complexity classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityProbs {
    pub p_easy: f64,
    pub p_medium: f64,
    pub p_hard: f64,
}

impl ComplexityProbs {
    pub fn new(p_easy: f64, p_medium: f64, p_hard: f64) -> Result<Self> {
        let all = [p_easy, p_medium, p_hard];
        if all.iter().any(|p| !p.is_finite() || !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain(format!(
                "complexity probabilities must lie in [0, 1], got {all:?}"
            )));
        }
        let total: f64 = all.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "complexity probabilities must sum to 1, got {total}"
            )));
        }
        Ok(Self {
            p_easy,
            p_medium,
            p_hard,
        })
    }
}

impl TryFrom<[f64; 3]> for ComplexityProbs {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

/// `0 * p_easy + 50 * p_medium + 100 * p_hard`.
pub fn complexity_score(probs: &ComplexityProbs) -> f64 {
    50.0 * probs.p_medium + 100.0 * probs.p_hard
}

/// Reads `{item_id: [p_easy, p_medium, p_hard]}`.
pub fn load_complexity_probs(path: impl AsRef<Path>) -> Result<BTreeMap<String, ComplexityProbs>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: BTreeMap<String, [f64; 3]> = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        locator: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let mut findings = Vec::new();
    let mut out = BTreeMap::new();
    for (id, v) in raw {
        match ComplexityProbs::try_from(v) {
            Ok(p) => {
                out.insert(id, p);
            }
            Err(e) => findings.push(crate::error::Finding::new("complexity", id, e.to_string())),
        }
    }
    if !findings.is_empty() {
        return Err(Error::Validation(findings));
    }
    Ok(out)
}

/// Which parts of an item make up the text that is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TextUnit {
    /// Context, question and every option.
    #[default]
    FullItem,
    ContextOnly,
}

/// Text of `item` under `unit`; parts are joined by newlines.
pub fn item_text(item: &Item, unit: TextUnit) -> String {
    match unit {
        TextUnit::ContextOnly => item.context.clone(),
        TextUnit::FullItem => {
            let mut parts = vec![item.context.as_str(), item.question.as_str()];
            parts.extend(item.options.iter().map(String::as_str));
            parts.join("\n")
        }
    }
}

/// Mean and sample standard deviation of one metric at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
    /// Only one value was available; `std` is reported as 0.
    pub single_item: bool,
}

/// Per-level mean ± sample standard deviation.
pub fn level_summary(groups: &BTreeMap<String, Vec<f64>>) -> Result<BTreeMap<String, SummaryCell>> {
    groups
        .iter()
        .map(|(level, values)| {
            let m = mean(values, "level summary needs at least one value per level")?;
            Ok((
                level.clone(),
                SummaryCell {
                    mean: m,
                    std: sample_std(values),
                    n: values.len(),
                    single_item: values.len() == 1,
                },
            ))
        })
        .collect()
}

/// Metrics as rows, levels as columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadabilityTable {
    pub levels: Vec<String>,
    pub rows: Vec<(String, BTreeMap<String, SummaryCell>)>,
}

/// Scores every item and summarizes per level. A `Deep` row is added first
/// when classifier probabilities are supplied for every item.
pub fn readability_table(
    items: &[Item],
    unit: TextUnit,
    lists: &WordLists,
    complexity: Option<&BTreeMap<String, ComplexityProbs>>,
) -> Result<ReadabilityTable> {
    if items.is_empty() {
        return Err(Error::Empty("readability table needs at least one item"));
    }
    let mut per_metric: BTreeMap<&'static str, BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    let mut order: Vec<&'static str> = Vec::new();
    let mut push = |metric: &'static str, level: &str, v: f64| {
        if !per_metric.contains_key(metric) {
            order.push(metric);
        }
        per_metric
            .entry(metric)
            .or_default()
            .entry(level.to_string())
            .or_default()
            .push(v);
    };
    for item in items {
        if let Some(probs) = complexity {
            let p = probs.get(&item.item_id).ok_or_else(|| {
                Error::Validation(vec![crate::error::Finding::new(
                    "complexity",
                    item.item_id.clone(),
                    "no complexity probabilities for item",
                )])
            })?;
            push("Deep", &item.level, complexity_score(p));
        }
        let stats = text_stats_with(&item_text(item, unit), lists);
        let indices = readability_indices(&stats).map_err(|e| {
            Error::Domain(format!("item {}: {e}", item.item_id))
        })?;
        for (name, v) in indices.named() {
            push(name, &item.level, v);
        }
    }
    let levels: Vec<String> = items
        .iter()
        .map(|i| i.level.clone())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows = order
        .into_iter()
        .map(|metric| Ok((metric.to_string(), level_summary(&per_metric[metric])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReadabilityTable { levels, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_all_zero() {
        assert_eq!(text_stats(""), TextStats::default());
        assert_eq!(text_stats("  \n ... "), TextStats::default());
        assert!(readability_indices(&TextStats::default()).is_err());
    }

    #[test]
    fn cat_sat_counts_and_indices() {
        let s = text_stats("The cat sat.");
        assert_eq!((s.sentences, s.words, s.syllables, s.characters), (1, 3, 3, 9));
        let r = readability_indices(&s).unwrap();
        assert!((r.flesch_kincaid - -2.62).abs() < 1e-12, "{}", r.flesch_kincaid);
        assert!((r.ari - -5.80).abs() < 1e-12, "{}", r.ari);
    }

    #[test]
    fn complex_word_fixture() {
        let s = text_stats("Bananas are extraordinarily tasty. I agree.");
        assert_eq!((s.sentences, s.words, s.complex_words), (2, 6, 2));
        assert_eq!(count_syllables("Bananas"), 3);
        assert_eq!(count_syllables("extraordinarily"), 6);
    }

    #[test]
    fn syllable_heuristic_cases() {
        for (w, n) in [
            ("the", 1),
            ("make", 1),
            ("agree", 2),
            ("table", 2),
            ("whale", 1),
            ("rhythm", 1),
            ("queue", 1),
            ("beautiful", 3),
            ("2024", 1),
            ("Hello", 2),
        ] {
            assert_eq!(count_syllables(w), n, "{w}");
        }
    }

    #[test]
    fn sentence_splitting_rules() {
        assert_eq!(text_stats("Pi is 3.14 exactly. Really?").sentences, 2);
        assert_eq!(text_stats("No terminator here").sentences, 1);
        assert_eq!(text_stats("Wait... what! Yes").sentences, 3);
        assert_eq!(text_stats("\"Quoted.\" Next one.").sentences, 1);
    }

    #[test]
    fn custom_word_lists() {
        let lists = WordLists::new(["Zebra"], Vec::<&str>::new());
        let s = text_stats_with("zebra cat", &lists);
        assert_eq!(s.difficult_words_dale, 1);
        assert_eq!(s.difficult_words_spache, 2);
    }

    #[test]
    fn complexity_mapping() {
        let score = |a, b, c| complexity_score(&ComplexityProbs::new(a, b, c).unwrap());
        assert_eq!(score(1.0, 0.0, 0.0), 0.0);
        assert_eq!(score(0.0, 0.0, 1.0), 100.0);
        assert!((score(0.2, 0.5, 0.3) - 55.0).abs() < 1e-12);
        assert_eq!(score(0.0, 1.0, 0.0), 50.0);
        assert!(ComplexityProbs::new(0.5, 0.5, 0.5).is_err());
        assert!(ComplexityProbs::new(-0.1, 0.6, 0.5).is_err());
    }

    #[test]
    fn level_summary_cases() {
        let mut groups = BTreeMap::new();
        groups.insert("B1".to_string(), vec![10.0, 10.0]);
        groups.insert("B2".to_string(), vec![8.0, 12.0]);
        groups.insert("C1".to_string(), vec![7.0]);
        let s = level_summary(&groups).unwrap();
        assert_eq!((s["B1"].mean, s["B1"].std), (10.0, 0.0));
        assert_eq!(s["B2"].mean, 10.0);
        assert!((s["B2"].std - 2.83).abs() < 5e-3);
        assert!(s["C1"].single_item && s["C1"].std == 0.0);

        groups.insert("C2".to_string(), vec![]);
        assert!(level_summary(&groups).is_err());
    }

    #[test]
    fn table_has_deep_row_first_when_probs_given() {
        let item = Item {
            item_id: "q".into(),
            context_id: "c".into(),
            context: "The cat sat.".into(),
            question: "Who sat?".into(),
            options: vec!["The cat.".into(), "The dog.".into()],
            answer_index: 0,
            level: "B1".into(),
            discrimination: None,
            candidate_count: None,
        };
        let mut probs = BTreeMap::new();
        probs.insert("q".to_string(), ComplexityProbs::new(0.0, 1.0, 0.0).unwrap());
        let t = readability_table(std::slice::from_ref(&item), TextUnit::FullItem, &WordLists::default(), Some(&probs)).unwrap();
        assert_eq!(t.rows[0].0, "Deep");
        assert_eq!(t.rows[0].1["B1"].mean, 50.0);
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.levels, vec!["B1".to_string()]);

        let ctx = readability_table(&[item], TextUnit::ContextOnly, &WordLists::default(), None).unwrap();
        assert_eq!(ctx.rows[0].0, "Flesch-K");
        assert!((ctx.rows[0].1["B1"].mean - -2.62).abs() < 1e-12);
    }
}
