//! Conversion between Hindu–Arabic values and the other numeral scripts,
//! plus script identification of numeral strings.

pub mod chinese;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::decimal::ExactDecimal;
use crate::script::{digit_map, script_of_codepoint, ScriptId, CHINESE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("unsupported value: {0}")]
    UnsupportedValue(String),
    #[error("malformed numeral {text:?}: {reason}")]
    MalformedNumeral { text: String, reason: String },
    #[error("digits from more than one script ({first} and {second})")]
    MixedScript { first: ScriptId, second: ScriptId },
    #[error("no numeral digits found")]
    NoDigits,
}

/// Numeral text together with the script it claims to be written in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeralString {
    pub text: String,
    pub script: ScriptId,
}

impl NumeralString {
    pub fn new(text: impl Into<String>, script: ScriptId) -> Self {
        NumeralString {
            text: text.into(),
            script,
        }
    }
}

/// Renders `value` in `target`. Positional scripts substitute glyphs digit
/// by digit and keep `.` and a leading ASCII `-`; Chinese uses the myriad
/// form with 点 for fractions.
pub fn to_script(value: &ExactDecimal, target: ScriptId) -> Result<NumeralString, CodecError> {
    let text = if target.is_positional() {
        let map = digit_map(target);
        value
            .to_string()
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) => map.glyph(d as u8),
                None => c,
            })
            .collect()
    } else {
        chinese::render(value)?
    };
    Ok(NumeralString::new(text, target))
}

pub fn from_script(numeral: &NumeralString) -> Result<ExactDecimal, CodecError> {
    let text = numeral.text.as_str();
    if text.is_empty() {
        return Err(CodecError::MalformedNumeral {
            text: String::new(),
            reason: "empty".into(),
        });
    }
    if !numeral.script.is_positional() {
        return chinese::parse(text);
    }
    let map = digit_map(numeral.script);
    let malformed = |reason: &str| CodecError::MalformedNumeral {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let mut digits = String::with_capacity(body.len());
    let mut scale: Option<u32> = None;
    for c in body.chars() {
        if let Some(d) = map.value_of(c) {
            digits.push((b'0' + d) as char);
            if let Some(s) = scale.as_mut() {
                *s += 1;
            }
        } else if c == '.' {
            if scale.is_some() || digits.is_empty() {
                return Err(malformed("misplaced decimal marker"));
            }
            scale = Some(0);
        } else if let Some((other, _)) = owning_script(c) {
            return Err(CodecError::MixedScript {
                first: numeral.script,
                second: other,
            });
        } else {
            return Err(malformed(&format!("unexpected character {c:?}")));
        }
    }
    match scale {
        Some(0) => Err(malformed("missing fraction digits")),
        _ if digits.is_empty() => Err(malformed("no digits")),
        _ => ExactDecimal::from_digits(negative, &digits, scale.unwrap_or(0))
            .map_err(|e| malformed(&e.to_string())),
    }
}

/// Parses numeral text whose script is not known in advance.
pub fn from_any_script(text: &str) -> Result<ExactDecimal, CodecError> {
    let script = identify_script(text)?;
    from_script(&NumeralString::new(text, script))
}

/// Script membership used for identification: registered digit glyphs plus
/// the Chinese multipliers, which only ever occur in Chinese numerals.
fn owning_script(c: char) -> Option<(ScriptId, u8)> {
    script_of_codepoint(c).or_else(|| {
        CHINESE
            .multiplier_exponent(c)
            .map(|_| (ScriptId::ChineseSimplified, 0))
    })
}

/// The unique script whose digits appear in `text`. Everything that is not
/// a numeral glyph (operators, spaces, words) is ignored.
pub fn identify_script(text: &str) -> Result<ScriptId, CodecError> {
    let found: BTreeSet<ScriptId> = text.chars().filter_map(owning_script).map(|(s, _)| s).collect();
    let mut it = found.into_iter();
    match (it.next(), it.next()) {
        (None, _) => Err(CodecError::NoDigits),
        (Some(only), None) => Ok(only),
        (Some(first), Some(second)) => Err(CodecError::MixedScript { first, second }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ScriptId::*;

    fn d(s: &str) -> ExactDecimal {
        s.parse().unwrap()
    }

    #[test]
    fn kannada_translation_example() {
        assert_eq!(to_script(&d("89428"), Kannada).unwrap().text, "೮೯೪೨೮");
        assert_eq!(from_script(&NumeralString::new("೮೯೪೨೮", Kannada)).unwrap(), d("89428"));
    }

    #[test]
    fn chinese_examples() {
        assert_eq!(
            to_script(&d("3826995"), ChineseSimplified).unwrap().text,
            "三百八十二万六千九百九十五"
        );
        assert_eq!(
            from_script(&NumeralString::new("五十四万九千二百零七", ChineseSimplified)).unwrap(),
            d("549207")
        );
    }

    #[test]
    fn zero_in_every_positional_script() {
        for s in ScriptId::ALL.into_iter().filter(|s| s.is_positional()) {
            let text = to_script(&d("0"), s).unwrap().text;
            assert_eq!(text, digit_map(s).glyph(0).to_string());
        }
    }

    #[test]
    fn decimals_keep_ascii_point() {
        let n = to_script(&d("-922436.38"), Devanagari).unwrap();
        assert_eq!(n.text, "-९२२४३६.३८");
        assert_eq!(from_script(&n).unwrap(), d("-922436.38"));
    }

    #[test]
    fn identify_examples() {
        assert_eq!(identify_script("९१३७५३० - ३६५१८").unwrap(), Devanagari);
        assert_eq!(identify_script("0 + 0").unwrap(), HinduArabic);
        assert_eq!(
            identify_script("१2"),
            Err(CodecError::MixedScript {
                first: HinduArabic,
                second: Devanagari
            })
        );
        assert_eq!(identify_script("plus"), Err(CodecError::NoDigits));
        assert_eq!(identify_script("十").unwrap(), ChineseSimplified);
    }

    #[test]
    fn parse_errors() {
        let mixed = from_script(&NumeralString::new("१2", Devanagari));
        assert!(matches!(mixed, Err(CodecError::MixedScript { .. })));
        for bad in ["", ".१", "१.", "१.२.३", "१x"] {
            let r = from_script(&NumeralString::new(bad, Devanagari));
            assert!(matches!(r, Err(CodecError::MalformedNumeral { .. })), "{bad}");
        }
    }

    #[test]
    fn unclaimed_parse_fails_when_identification_fails() {
        for text in ["", "abc", "१2", "٣"] {
            assert!(identify_script(text).is_err());
            assert!(from_any_script(text).is_err());
        }
        assert_eq!(from_any_script("๑๒.๕").unwrap(), d("12.5"));
    }
}
