//! Exact-match scoring of model responses and the error taxonomy.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{OutputContract, PromptStrategy, RenderedPrompt, Variant};
use crate::codec::{chinese, from_script, NumeralString};
use crate::decimal::ExactDecimal;
use crate::format::{self, FormatId, ParseMode};
use crate::script::{script_of_codepoint, ScriptId, CHINESE};

const MARKER: &str = "answer:";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelResponse {
    pub case_id: u64,
    pub variant: Variant,
    pub strategy: PromptStrategy,
    pub model_id: String,
    pub raw_text: String,
    #[serde(default)]
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Correct,
    InstructionError,
    ArithmeticError,
    FormattingError,
    NoOutput,
}

impl Outcome {
    pub const ALL: [Outcome; 5] = [
        Outcome::Correct,
        Outcome::InstructionError,
        Outcome::ArithmeticError,
        Outcome::FormattingError,
        Outcome::NoOutput,
    ];
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub case_id: u64,
    pub variant: Variant,
    pub strategy: PromptStrategy,
    pub model_id: String,
    pub outcome: Outcome,
    pub extracted_text: Option<String>,
    pub value_correct_format_wrong: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("response for case {case_id} / {variant} / {strategy} has no prompt in the suite")]
    SuiteMismatch {
        case_id: u64,
        variant: Variant,
        strategy: PromptStrategy,
    },
}

/// Text after the last `Answer:` marker (any letter case) up to the end of
/// that line, trimmed. `None` if the marker is absent or nothing follows it.
pub fn extract_answer(raw_text: &str) -> Option<String> {
    let bytes = raw_text.as_bytes();
    let start = (0..bytes.len().saturating_sub(MARKER.len() - 1))
        .rev()
        .find(|&i| bytes[i..i + MARKER.len()].eq_ignore_ascii_case(MARKER.as_bytes()))?
        + MARKER.len();
    let rest = &raw_text[start..];
    let line = rest.split(['\n', '\r']).next().unwrap_or("");
    let text = line.trim();
    (!text.is_empty()).then(|| text.to_string())
}

fn strip_wrappers(mut t: &str) -> &str {
    const WRAPPERS: [&str; 5] = ["**", "__", "`", "*", "_"];
    loop {
        let before = t;
        for w in WRAPPERS {
            if t.len() > 2 * w.len() && t.starts_with(w) && t.ends_with(w) {
                t = t[w.len()..t.len() - w.len()].trim();
            }
        }
        if t == before {
            return t;
        }
    }
}

/// Removes markdown emphasis and one trailing period.
fn clean(text: &str) -> &str {
    let t = strip_wrappers(text.trim());
    match t.strip_suffix('.') {
        Some(rest) if !rest.is_empty() => strip_wrappers(rest.trim()),
        _ => t,
    }
}

fn parse_in_script(text: &str, script: ScriptId) -> Option<ExactDecimal> {
    from_script(&NumeralString::new(text, script)).ok()
}

/// Every value `text` denotes under the contract.
fn contract_values(text: &str, contract: OutputContract) -> Vec<ExactDecimal> {
    match contract {
        OutputContract::SameScript(s) => parse_in_script(text, s).into_iter().collect(),
        OutputContract::ScriptOrHinduArabic(s) => parse_in_script(text, s)
            .or_else(|| parse_in_script(text, ScriptId::HinduArabic))
            .into_iter()
            .collect(),
        OutputContract::SameFormat(f) => format::parse(text, f).ok().into_iter().collect(),
        OutputContract::AnyFormat => {
            let mut values: Vec<ExactDecimal> = text.parse().ok().into_iter().collect();
            values.extend(FormatId::ALL.into_iter().filter_map(|f| format::parse(text, f).ok()));
            values
        }
    }
}

/// Every value `text` could plausibly denote in any script or format,
/// tolerating stray spaces and alternate separator code points.
fn lenient_values(text: &str) -> Vec<ExactDecimal> {
    let (negative, body) = match text.strip_prefix(['-', '\u{2212}']) {
        Some(rest) => (true, rest.trim_start()),
        None => match text.strip_prefix(CHINESE.minus) {
            Some(rest) => (true, rest),
            None => (false, text),
        },
    };
    let mut values = Vec::new();
    if let Ok(v) = chinese::parse(body) {
        values.push(v);
    }
    let ascii: String = body
        .chars()
        .map(|c| match script_of_codepoint(c) {
            Some((s, d)) if s.is_positional() => char::from(b'0' + d),
            _ => c,
        })
        .collect();
    let squeezed: String = ascii.chars().filter(|&c| c != ' ').collect();
    for candidate in [ascii.as_str(), squeezed.as_str()] {
        if let Ok(v) = candidate.parse::<ExactDecimal>() {
            values.push(v);
        }
        for f in FormatId::ALL {
            if let Ok(v) = format::parse_with(candidate, f, ParseMode::Lenient) {
                values.push(v);
            }
        }
    }
    if negative {
        for v in &mut values {
            *v = v.neg();
        }
    }
    values
}

fn record(response: &ModelResponse, outcome: Outcome, extracted: Option<String>) -> ScoreRecord {
    ScoreRecord {
        case_id: response.case_id,
        variant: response.variant,
        strategy: response.strategy,
        model_id: response.model_id.clone(),
        outcome,
        extracted_text: extracted,
        value_correct_format_wrong: outcome == Outcome::FormattingError,
    }
}

/// Scores one response against its prompt.
///
/// The required precision is the scale of the expected value: 0 for the
/// integer directive, 3 for three decimal places.
pub fn score(response: &ModelResponse, prompt: &RenderedPrompt) -> Result<ScoreRecord, ScoreError> {
    if (response.case_id, response.variant, response.strategy) != (prompt.case_id, prompt.variant, prompt.strategy) {
        return Err(ScoreError::SuiteMismatch {
            case_id: response.case_id,
            variant: response.variant,
            strategy: response.strategy,
        });
    }
    let Some(extracted) = extract_answer(&response.raw_text) else {
        return Ok(record(response, Outcome::NoOutput, None));
    };
    let text = clean(&extracted);
    let expected = &prompt.expected_answer_value;
    let scale = expected.scale();
    let exact = |v: &ExactDecimal| v.scale() == scale && v.value_eq(expected);

    let strict = contract_values(text, prompt.contract());
    let outcome = if strict.iter().any(exact) {
        Outcome::Correct
    } else if !strict.is_empty() {
        if strict.iter().any(|v| v.scale() == scale) {
            Outcome::ArithmeticError
        } else {
            Outcome::InstructionError
        }
    } else {
        let loose = lenient_values(text);
        if loose.iter().any(exact) {
            Outcome::FormattingError
        } else if loose.iter().any(|v| v.scale() == scale) {
            Outcome::ArithmeticError
        } else {
            Outcome::InstructionError
        }
    };
    Ok(record(response, outcome, Some(extracted)))
}

/// Scores every response, joining on (case id, variant, strategy).
pub fn score_all(responses: &[ModelResponse], suite: &[RenderedPrompt]) -> Result<Vec<ScoreRecord>, ScoreError> {
    let index: HashMap<(u64, Variant, PromptStrategy), &RenderedPrompt> =
        suite.iter().map(|p| ((p.case_id, p.variant, p.strategy), p)).collect();
    responses
        .iter()
        .map(|r| {
            let prompt = index
                .get(&(r.case_id, r.variant, r.strategy))
                .ok_or(ScoreError::SuiteMismatch {
                    case_id: r.case_id,
                    variant: r.variant,
                    strategy: r.strategy,
                })?;
            score(r, prompt)
        })
        .collect()
}

/// Script identification answers: the script's name or the language used
/// for it, in any letter case.
pub fn identification_matches(answer: &str, script: ScriptId) -> bool {
    clean(answer).parse::<ScriptId>().is_ok_and(|s| s == script)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub model_id: String,
    pub variant: Variant,
    pub strategy: PromptStrategy,
    pub n: usize,
    pub accuracy: f64,
    /// Population standard deviation of per-case correctness.
    pub std_dev: f64,
    pub outcome_shares: BTreeMap<Outcome, f64>,
}

/// Accuracy over the non-reference variants of one (model, strategy).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub model_id: String,
    pub strategy: PromptStrategy,
    pub variants: usize,
    pub mean_accuracy: f64,
    pub std_dev: f64,
    pub max_accuracy: f64,
    pub best_variant: Option<Variant>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AccuracyTable {
    pub groups: Vec<GroupSummary>,
    pub strategies: Vec<StrategySummary>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn aggregate(records: &[ScoreRecord]) -> AccuracyTable {
    let mut grouped: BTreeMap<(String, PromptStrategy, Variant), Vec<Outcome>> = BTreeMap::new();
    for r in records {
        grouped
            .entry((r.model_id.clone(), r.strategy, r.variant))
            .or_default()
            .push(r.outcome);
    }
    let mut table = AccuracyTable::default();
    for ((model_id, strategy, variant), outcomes) in &grouped {
        let hits: Vec<f64> = outcomes
            .iter()
            .map(|&o| if o == Outcome::Correct { 1.0 } else { 0.0 })
            .collect();
        let (accuracy, std_dev) = mean_std(&hits);
        let n = outcomes.len();
        let outcome_shares = Outcome::ALL
            .into_iter()
            .map(|o| (o, outcomes.iter().filter(|&&x| x == o).count() as f64 / n as f64))
            .collect();
        table.groups.push(GroupSummary {
            model_id: model_id.clone(),
            variant: *variant,
            strategy: *strategy,
            n,
            accuracy,
            std_dev,
            outcome_shares,
        });
    }

    let mut per_strategy: BTreeMap<(String, PromptStrategy), Vec<(Variant, f64)>> = BTreeMap::new();
    for g in table.groups.iter().filter(|g| !g.variant.is_reference()) {
        per_strategy
            .entry((g.model_id.clone(), g.strategy))
            .or_default()
            .push((g.variant, g.accuracy));
    }
    for ((model_id, strategy), accs) in per_strategy {
        let values: Vec<f64> = accs.iter().map(|(_, a)| *a).collect();
        let (mean_accuracy, std_dev) = mean_std(&values);
        let best = accs
            .iter()
            .fold(None::<(Variant, f64)>, |best, &(v, a)| match best {
                Some((_, b)) if b >= a => best,
                _ => Some((v, a)),
            });
        table.strategies.push(StrategySummary {
            model_id,
            strategy,
            variants: accs.len(),
            mean_accuracy,
            std_dev,
            max_accuracy: best.map_or(0.0, |(_, a)| a),
            best_variant: best.map(|(v, _)| v),
        });
    }
    table
}

impl AccuracyTable {
    /// Aligned plain-text rendering of the group rows.
    pub fn to_text(&self) -> String {
        let mut rows = vec![vec![
            "model".to_string(),
            "variant".into(),
            "strategy".into(),
            "n".into(),
            "accuracy".into(),
            "std".into(),
            "instr".into(),
            "arith".into(),
            "format".into(),
            "none".into(),
        ]];
        for g in &self.groups {
            let share = |o| format!("{:.3}", g.outcome_shares.get(&o).copied().unwrap_or(0.0));
            rows.push(vec![
                g.model_id.clone(),
                g.variant.to_string(),
                g.strategy.to_string(),
                g.n.to_string(),
                format!("{:.3}", g.accuracy),
                format!("{:.3}", g.std_dev),
                share(Outcome::InstructionError),
                share(Outcome::ArithmeticError),
                share(Outcome::FormattingError),
                share(Outcome::NoOutput),
            ]);
        }
        if !self.strategies.is_empty() {
            rows.push(Vec::new());
            rows.push(vec![
                "model".into(),
                "strategy".into(),
                "variants".into(),
                "mean".into(),
                "std".into(),
                "max".into(),
                "best".into(),
            ]);
            for s in &self.strategies {
                rows.push(vec![
                    s.model_id.clone(),
                    s.strategy.to_string(),
                    s.variants.to_string(),
                    format!("{:.3}", s.mean_accuracy),
                    format!("{:.3}", s.std_dev),
                    format!("{:.3}", s.max_accuracy),
                    s.best_variant.map_or("-".to_string(), |v| v.to_string()),
                ]);
            }
        }
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in rows {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}
