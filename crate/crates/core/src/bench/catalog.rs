//! Prompt wording per (script, strategy): operator words, rounding
//! sentences and the joiner placed around operator words.
//!
//! File format: UTF-8, tab separated, header `script strategy slot text`.
//! `*` in the strategy column applies to every strategy. Lines starting
//! with `#` are comments. In `text`, `\t`, `\n`, `\s` (a space) and `\\` are
//! escapes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{BenchError, PromptStrategy};
use crate::arithmetic::{Operation, RoundingDirective};
use crate::script::ScriptId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Operator(Operation),
    Round(RoundingDirective),
    Joiner,
}

impl Slot {
    fn id(self) -> &'static str {
        match self {
            Slot::Operator(Operation::Add) => "add",
            Slot::Operator(Operation::Sub) => "sub",
            Slot::Operator(Operation::Mul) => "mul",
            Slot::Operator(Operation::Div) => "div",
            Slot::Round(RoundingDirective::ToInteger) => "round_integer",
            Slot::Round(RoundingDirective::ToDecimalPlaces(_)) => "round_3dp",
            Slot::Joiner => "joiner",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Slot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "add" => Slot::Operator(Operation::Add),
            "sub" => Slot::Operator(Operation::Sub),
            "mul" => Slot::Operator(Operation::Mul),
            "div" => Slot::Operator(Operation::Div),
            "round_integer" => Slot::Round(RoundingDirective::ToInteger),
            "round_3dp" => Slot::Round(RoundingDirective::THREE_PLACES),
            "joiner" => Slot::Joiner,
            other => return Err(format!("unknown slot {other:?}")),
        })
    }
}

// (PromptStrategy) None is the `*` wildcard.
type Key = (ScriptId, Option<PromptStrategy>, Slot);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptCatalog {
    entries: BTreeMap<Key, String>,
}

const ENGLISH: [(&str, &str); 6] = [
    ("add", "plus"),
    ("sub", "minus"),
    ("mul", "multiplied by"),
    ("div", "divided by"),
    ("round_integer", "Round the answer to an integer."),
    ("round_3dp", "Round the answer to three decimal places."),
];

const MANDARIN: [(&str, &str); 7] = [
    ("add", "加"),
    ("sub", "减"),
    ("mul", "乘以"),
    ("div", "除以"),
    ("round_integer", "将答案四舍五入到整数。"),
    ("round_3dp", "将答案四舍五入到小数点后三位。"),
    ("joiner", ""),
];

impl Default for PromptCatalog {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PromptCatalog {
    pub fn empty() -> Self {
        PromptCatalog {
            entries: BTreeMap::new(),
        }
    }

    /// English (for Hindu–Arabic) and Mandarin wording.
    pub fn builtin() -> Self {
        let mut catalog = Self::empty();
        for (script, table) in [
            (ScriptId::HinduArabic, &ENGLISH[..]),
            (ScriptId::ChineseSimplified, &MANDARIN[..]),
        ] {
            for (slot, text) in table {
                catalog.insert(script, None, slot.parse().unwrap(), text.to_string());
            }
        }
        catalog
    }

    pub fn insert(&mut self, script: ScriptId, strategy: Option<PromptStrategy>, slot: Slot, text: String) {
        self.entries.insert((script, strategy, slot), text);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads a catalog file; its entries override the built-in ones.
    pub fn with_file(mut self, text: &str) -> Result<Self, BenchError> {
        for (index, line) in text.lines().enumerate() {
            let line_no = index + 1;
            let bad = |reason: String| BenchError::Catalog { line: line_no, reason };
            if line.trim().is_empty() || line.starts_with('#') || (index == 0 && line.starts_with("script\t")) {
                continue;
            }
            let fields: Vec<&str> = line.splitn(4, '\t').collect();
            let [script, strategy, slot, raw] = fields[..] else {
                return Err(bad(format!("expected 4 tab-separated fields, got {}", fields.len())));
            };
            let script: ScriptId = script.parse().map_err(|e| bad(format!("{e}")))?;
            let strategy = match strategy {
                "*" => None,
                s => Some(s.parse::<PromptStrategy>().map_err(bad)?),
            };
            let slot: Slot = slot.parse().map_err(bad)?;
            self.insert(script, strategy, slot, unescape(raw).map_err(bad)?);
        }
        Ok(self)
    }

    /// Serializes every entry in the file format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("script\tstrategy\tslot\ttext\n");
        for ((script, strategy, slot), text) in &self.entries {
            let strategy = strategy.map_or("*".to_string(), |s| s.to_string());
            out.push_str(&format!("{}\t{strategy}\t{slot}\t{}\n", script.id(), escape(text)));
        }
        out
    }

    pub fn get(&self, script: ScriptId, strategy: PromptStrategy, slot: Slot) -> Option<&str> {
        self.entries
            .get(&(script, Some(strategy), slot))
            .or_else(|| self.entries.get(&(script, None, slot)))
            .map(String::as_str)
    }

    /// Like `get`, but missing entries are an error. The joiner defaults to
    /// a single space.
    pub fn require(&self, script: ScriptId, strategy: PromptStrategy, slot: Slot) -> Result<&str, BenchError> {
        match (self.get(script, strategy, slot), slot) {
            (Some(text), _) => Ok(text),
            (None, Slot::Joiner) => Ok(" "),
            (None, _) => Err(BenchError::MissingCatalogEntry { script, strategy, slot }),
        }
    }

    pub fn english(&self, slot: Slot) -> &str {
        self.get(ScriptId::HinduArabic, PromptStrategy::EnglishOperator, slot)
            .or_else(|| ENGLISH.iter().find(|(s, _)| *s == slot.id()).map(|(_, t)| *t))
            .unwrap_or(" ")
    }
}

fn escape(text: &str) -> String {
    let mut out = String::new();
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            ' ' if text.trim().is_empty() => out.push_str("\\s"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(raw: &str) -> Result<String, String> {
    let mut out = String::new();
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('s') => out.push(' '),
            Some('\\') => out.push('\\'),
            other => return Err(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}
