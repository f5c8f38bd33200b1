//! Benchmark suites: expression generation and prompt rendering for the
//! script track and the format track.

mod catalog;
mod generate;
mod prompt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arithmetic::{ArithmeticError, Operation};
use crate::codec::CodecError;
use crate::decimal::ExactDecimal;
use crate::format::FormatId;
use crate::script::ScriptId;

pub use catalog::{PromptCatalog, Slot};
pub use generate::{generate_cases, GenerationConfig, MIN_GROUPED_INTEGER_DIGITS};
pub use prompt::{fewshot_pool, mapping_block, render_format_suite, render_script_suite, FEWSHOT_IDS};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid generation config: {0}")]
    Config(String),
    #[error("catalog has no {slot} entry for {script} / {strategy}")]
    MissingCatalogEntry {
        script: ScriptId,
        strategy: PromptStrategy,
        slot: Slot,
    },
    #[error("catalog line {line}: {reason}")]
    Catalog { line: usize, reason: String },
    #[error("{strategy} does not belong to the {track} track")]
    WrongTrack { strategy: PromptStrategy, track: Track },
    #[error("case id {0} is reserved for few-shot examples")]
    ReservedCaseId(u64),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Track {
    Script,
    Format,
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::Script => "script",
            Track::Format => "format",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PromptStrategy {
    DigitsOnlyNative,
    ExprOnlyNative,
    ExprPromptNative,
    ExprPromptNativeMapping,
    EnglishOperator,
    AnyOutput,
    FormattedOutput,
    FormattedOutputHint,
    FormattedOutputFewshot,
}

impl PromptStrategy {
    pub const ALL: [PromptStrategy; 9] = [
        PromptStrategy::DigitsOnlyNative,
        PromptStrategy::ExprOnlyNative,
        PromptStrategy::ExprPromptNative,
        PromptStrategy::ExprPromptNativeMapping,
        PromptStrategy::EnglishOperator,
        PromptStrategy::AnyOutput,
        PromptStrategy::FormattedOutput,
        PromptStrategy::FormattedOutputHint,
        PromptStrategy::FormattedOutputFewshot,
    ];

    pub const SCRIPT_TRACK: [PromptStrategy; 5] = [
        PromptStrategy::EnglishOperator,
        PromptStrategy::DigitsOnlyNative,
        PromptStrategy::ExprOnlyNative,
        PromptStrategy::ExprPromptNative,
        PromptStrategy::ExprPromptNativeMapping,
    ];

    pub const FORMAT_TRACK: [PromptStrategy; 4] = [
        PromptStrategy::AnyOutput,
        PromptStrategy::FormattedOutput,
        PromptStrategy::FormattedOutputHint,
        PromptStrategy::FormattedOutputFewshot,
    ];

    pub fn track(self) -> Track {
        match self {
            PromptStrategy::AnyOutput
            | PromptStrategy::FormattedOutput
            | PromptStrategy::FormattedOutputHint
            | PromptStrategy::FormattedOutputFewshot => Track::Format,
            _ => Track::Script,
        }
    }

    /// The reference level of the strategy's track.
    pub fn is_reference(self) -> bool {
        matches!(self, PromptStrategy::EnglishOperator | PromptStrategy::AnyOutput)
    }

    pub fn id(self) -> &'static str {
        match self {
            PromptStrategy::DigitsOnlyNative => "DigitsOnlyNative",
            PromptStrategy::ExprOnlyNative => "ExprOnlyNative",
            PromptStrategy::ExprPromptNative => "ExprPromptNative",
            PromptStrategy::ExprPromptNativeMapping => "ExprPromptNativeMapping",
            PromptStrategy::EnglishOperator => "EnglishOperator",
            PromptStrategy::AnyOutput => "AnyOutput",
            PromptStrategy::FormattedOutput => "FormattedOutput",
            PromptStrategy::FormattedOutputHint => "FormattedOutputHint",
            PromptStrategy::FormattedOutputFewshot => "FormattedOutputFewshot",
        }
    }

    /// What an answer must look like to count as correct.
    pub fn contract(self, variant: Variant) -> OutputContract {
        match (self, variant) {
            (PromptStrategy::AnyOutput, _) => OutputContract::AnyFormat,
            (PromptStrategy::EnglishOperator, Variant::Script(s)) => OutputContract::ScriptOrHinduArabic(s),
            (_, Variant::Script(s)) => OutputContract::SameScript(s),
            (_, Variant::Format(f)) => OutputContract::SameFormat(f),
        }
    }
}

impl fmt::Display for PromptStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PromptStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptStrategy::ALL
            .into_iter()
            .find(|p| p.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

/// A script (script track) or a locale format (format track).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Variant {
    Script(ScriptId),
    Format(FormatId),
}

impl Variant {
    /// Hindu–Arabic digits and F1 formatting.
    pub fn is_reference(self) -> bool {
        matches!(self, Variant::Script(ScriptId::HinduArabic) | Variant::Format(FormatId::F1))
    }

    pub fn id(self) -> &'static str {
        match self {
            Variant::Script(s) => s.id(),
            Variant::Format(f) => f.id(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(f) = s.parse::<FormatId>() {
            return Ok(Variant::Format(f));
        }
        s.parse::<ScriptId>()
            .map(Variant::Script)
            .map_err(|_| format!("{s:?} is neither a script nor a format"))
    }
}

/// Output requirement attached to a (variant, strategy) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputContract {
    SameScript(ScriptId),
    /// English-operator prompts never ask for a script, so plain
    /// Hindu–Arabic digits are accepted as well.
    ScriptOrHinduArabic(ScriptId),
    SameFormat(FormatId),
    /// Plain digits or any of the six formats.
    AnyFormat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedPrompt {
    pub case_id: u64,
    pub variant: Variant,
    pub strategy: PromptStrategy,
    #[serde(rename = "system")]
    pub system_text: String,
    #[serde(rename = "user")]
    pub user_text: String,
    #[serde(rename = "expected_text")]
    pub expected_answer_text: String,
    #[serde(rename = "expected_value")]
    pub expected_answer_value: ExactDecimal,
    pub op: Operation,
    pub total_digits: usize,
    /// The rendered `lhs op rhs` line alone, used for tokenization features.
    pub expression: String,
}

impl RenderedPrompt {
    pub fn contract(&self) -> OutputContract {
        self.strategy.contract(self.variant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_tracks() {
        assert_eq!(PromptStrategy::ALL.len(), 9);
        for s in PromptStrategy::SCRIPT_TRACK {
            assert_eq!(s.track(), Track::Script);
        }
        for s in PromptStrategy::FORMAT_TRACK {
            assert_eq!(s.track(), Track::Format);
        }
        assert_eq!("formattedoutputhint".parse::<PromptStrategy>(), Ok(PromptStrategy::FormattedOutputHint));
    }

    #[test]
    fn variant_names() {
        assert_eq!("F6".parse::<Variant>(), Ok(Variant::Format(FormatId::F6)));
        assert_eq!("Devanagari".parse::<Variant>(), Ok(Variant::Script(ScriptId::Devanagari)));
        assert_eq!(serde_json::to_string(&Variant::Format(FormatId::F3)).unwrap(), "\"F3\"");
        let v: Variant = serde_json::from_str("\"OlChiki\"").unwrap();
        assert_eq!(v, Variant::Script(ScriptId::OlChiki));
        let v: Variant = serde_json::from_str("\"F2\"").unwrap();
        assert_eq!(v, Variant::Format(FormatId::F2));
    }
}
