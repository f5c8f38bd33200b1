//! Tokens-per-digit under simple tokenization schemes.

use std::collections::BTreeMap;
use std::fmt;

use super::RegressionError;
use crate::script::script_of_codepoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenizationScheme {
    /// Greedy left-to-right runs of at most three digits.
    Chunk3,
    /// One token per digit.
    Digit1,
    /// Token counts for whole digit runs, e.g. exported from a real
    /// tokenizer.
    External { name: String, table: BTreeMap<String, usize> },
}

impl TokenizationScheme {
    pub fn name(&self) -> &str {
        match self {
            TokenizationScheme::Chunk3 => "chunk3",
            TokenizationScheme::Digit1 => "digit1",
            TokenizationScheme::External { name, .. } => name,
        }
    }

    /// Parses `run<TAB>count` lines; `#` starts a comment line.
    pub fn external_from_tsv(name: &str, text: &str) -> Result<Self, RegressionError> {
        let mut table = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || RegressionError::TokenTable {
                line: i + 1,
                reason: format!("expected `run<TAB>count`, got {line:?}"),
            };
            let (run, count) = line.split_once('\t').ok_or_else(bad)?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(bad());
            }
            table.insert(run.to_string(), count);
        }
        Ok(TokenizationScheme::External {
            name: name.to_string(),
            table,
        })
    }
}

impl fmt::Display for TokenizationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Digit-bearing tokens over digits, kept as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokensPerDigit {
    pub digit_tokens: usize,
    pub digits: usize,
}

impl TokensPerDigit {
    pub fn value(self) -> f64 {
        self.digit_tokens as f64 / self.digits as f64
    }
}

fn is_digit(c: char) -> bool {
    script_of_codepoint(c).is_some()
}

/// Maximal runs of registered digit glyphs.
fn digit_runs(text: &str) -> Vec<&str> {
    text.split(|c: char| !is_digit(c)).filter(|r| !r.is_empty()).collect()
}

pub fn tokens_per_digit(expression: &str, scheme: &TokenizationScheme) -> Result<TokensPerDigit, RegressionError> {
    let runs = digit_runs(expression);
    let digits: usize = runs.iter().map(|r| r.chars().count()).sum();
    if digits == 0 {
        return Err(RegressionError::NoDigits(expression.to_string()));
    }
    let mut digit_tokens = 0;
    for run in runs {
        let n = run.chars().count();
        digit_tokens += match scheme {
            TokenizationScheme::Chunk3 => n.div_ceil(3),
            TokenizationScheme::Digit1 => n,
            TokenizationScheme::External { name, table } => *table.get(run).ok_or_else(|| {
                RegressionError::UnmappedRun {
                    scheme: name.clone(),
                    run: run.to_string(),
                }
            })?,
        };
    }
    Ok(TokensPerDigit { digit_tokens, digits })
}
