//! The six decimal-marker / digit-grouping conventions F1–F6.
//!
//! | id | decimal | grouping | pattern | example        |
//! |----|---------|----------|---------|----------------|
//! | F1 | `.`     | `,`      | 3-3-3   | `922,436.38`   |
//! | F2 | `,`     | `.`      | 3-3-3   | `922.436,38`   |
//! | F3 | `,`     | U+2009   | 3-3-3   | `922 436,38`   |
//! | F4 | `.`     | U+2009   | 3-3-3   | `922 436.38`   |
//! | F5 | `,`     | `'`      | 3-3-3   | `922'436,38`   |
//! | F6 | `.`     | `,`      | 3-2-2   | `9,22,436.38`  |
//!
//! Parsing is strict: separators must sit exactly where [`render`] would
//! put them. Integers written without any separator are accepted by every
//! format, so `classify("4359")` returns all six.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::ExactDecimal;

pub const THIN_SPACE: char = '\u{2009}';
pub const APOSTROPHE: char = '\'';

/// Code points accepted for the thin-space separator in lenient mode.
const THIN_SPACE_VARIANTS: [char; 3] = [THIN_SPACE, '\u{202F}', '\u{00A0}'];
const APOSTROPHE_VARIANTS: [char; 2] = [APOSTROPHE, '\u{2019}'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormatId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupingPattern {
    Uniform3,
    Indian3_2_2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormatSpec {
    pub format: FormatId,
    pub decimal_marker: char,
    pub grouping_separator: char,
    pub grouping_pattern: GroupingPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    /// Also accepts U+202F / U+00A0 for the thin space and U+2019 for the
    /// apostrophe.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{text:?} is malformed for {format}: {reason}")]
    MalformedForFormat {
        text: String,
        format: FormatId,
        reason: String,
    },
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
}

impl FormatId {
    pub const ALL: [FormatId; 6] = [
        FormatId::F1,
        FormatId::F2,
        FormatId::F3,
        FormatId::F4,
        FormatId::F5,
        FormatId::F6,
    ];

    pub fn spec(self) -> FormatSpec {
        use GroupingPattern::*;
        let (decimal_marker, grouping_separator, grouping_pattern) = match self {
            FormatId::F1 => ('.', ',', Uniform3),
            FormatId::F2 => (',', '.', Uniform3),
            FormatId::F3 => (',', THIN_SPACE, Uniform3),
            FormatId::F4 => ('.', THIN_SPACE, Uniform3),
            FormatId::F5 => (',', APOSTROPHE, Uniform3),
            FormatId::F6 => ('.', ',', Indian3_2_2),
        };
        FormatSpec {
            format: self,
            decimal_marker,
            grouping_separator,
            grouping_pattern,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            FormatId::F1 => "F1",
            FormatId::F2 => "F2",
            FormatId::F3 => "F3",
            FormatId::F4 => "F4",
            FormatId::F5 => "F5",
            FormatId::F6 => "F6",
        }
    }
}

impl fmt::Display for FormatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FormatId {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormatId::ALL
            .into_iter()
            .find(|f| f.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FormatError::UnknownFormat(s.to_string()))
    }
}

/// Renders the integer digits grouped per `pattern` from the right.
fn group_integer(int: &str, separator: char, pattern: GroupingPattern) -> String {
    let bytes = int.as_bytes();
    let mut groups: Vec<&[u8]> = Vec::new();
    let mut end = bytes.len();
    let mut size = 3;
    while end > 0 {
        let start = end.saturating_sub(size);
        groups.push(&bytes[start..end]);
        end = start;
        if pattern == GroupingPattern::Indian3_2_2 {
            size = 2;
        }
    }
    let mut out = String::with_capacity(int.len() + groups.len() * 3);
    for (i, group) in groups.iter().rev().enumerate() {
        if i > 0 {
            out.push(separator);
        }
        out.push_str(std::str::from_utf8(group).expect("ascii digits"));
    }
    out
}

pub fn render(value: &ExactDecimal, format: FormatId) -> String {
    let spec = format.spec();
    let (int, frac) = value.split_digits();
    let mut out = String::new();
    if value.is_negative() {
        out.push('-');
    }
    out.push_str(&group_integer(&int, spec.grouping_separator, spec.grouping_pattern));
    if !frac.is_empty() {
        out.push(spec.decimal_marker);
        out.push_str(&frac);
    }
    out
}

pub fn parse(text: &str, format: FormatId) -> Result<ExactDecimal, FormatError> {
    parse_with(text, format, ParseMode::Strict)
}

pub fn parse_with(text: &str, format: FormatId, mode: ParseMode) -> Result<ExactDecimal, FormatError> {
    let spec = format.spec();
    let fail = |reason: &str| FormatError::MalformedForFormat {
        text: text.to_string(),
        format,
        reason: reason.to_string(),
    };
    if text.is_empty() {
        return Err(fail("empty"));
    }
    let canonical = |c: char| -> char {
        if mode == ParseMode::Lenient {
            if spec.grouping_separator == THIN_SPACE && THIN_SPACE_VARIANTS.contains(&c) {
                return THIN_SPACE;
            }
            if spec.grouping_separator == APOSTROPHE && APOSTROPHE_VARIANTS.contains(&c) {
                return APOSTROPHE;
            }
        }
        c
    };
    let normalized: String = text.chars().map(canonical).collect();
    if let Some(bad) = normalized
        .chars()
        .find(|&c| !c.is_ascii_digit() && c != spec.decimal_marker && c != spec.grouping_separator)
    {
        return Err(fail(&format!("unexpected character {bad:?}")));
    }

    let mut halves = normalized.split(spec.decimal_marker);
    let int_part = halves.next().unwrap_or_default();
    let frac_part = halves.next();
    if halves.next().is_some() {
        return Err(fail("more than one decimal marker"));
    }
    if int_part.is_empty() {
        return Err(fail("missing integer part"));
    }
    if let Some(frac) = frac_part {
        if frac.is_empty() {
            return Err(fail("missing fraction digits"));
        }
        if frac.contains(spec.grouping_separator) {
            return Err(fail("grouping separator in fraction"));
        }
    }

    let groups: Vec<&str> = int_part.split(spec.grouping_separator).collect();
    if groups.len() > 1 {
        check_groups(&groups, spec.grouping_pattern).map_err(&fail)?;
    }
    let int_digits: String = groups.concat();
    let frac_digits = frac_part.unwrap_or("");
    ExactDecimal::from_digits(
        false,
        &format!("{int_digits}{frac_digits}"),
        frac_digits.len() as u32,
    )
    .map_err(|e| fail(&e.to_string()))
}

fn check_groups(groups: &[&str], pattern: GroupingPattern) -> Result<(), &'static str> {
    let (first, rest) = groups.split_first().expect("at least two groups");
    let (last, middle) = rest.split_last().expect("at least two groups");
    let lead_max = match pattern {
        GroupingPattern::Uniform3 => 3,
        GroupingPattern::Indian3_2_2 => 2,
    };
    let middle_len = match pattern {
        GroupingPattern::Uniform3 => 3,
        GroupingPattern::Indian3_2_2 => 2,
    };
    if first.is_empty() || first.len() > lead_max {
        return Err("leading group has the wrong size");
    }
    if first.starts_with('0') {
        return Err("leading zero in grouped number");
    }
    if middle.iter().any(|g| g.len() != middle_len) || last.len() != 3 {
        return Err("group size does not match the grouping pattern");
    }
    Ok(())
}

/// Every format under which `text` parses strictly.
pub fn classify(text: &str) -> BTreeSet<FormatId> {
    FormatId::ALL
        .into_iter()
        .filter(|&f| parse(text, f).is_ok())
        .collect()
}
