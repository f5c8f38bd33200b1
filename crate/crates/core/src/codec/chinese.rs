//! Compositional (myriad) Simplified Chinese numerals.
//!
//! Integers are split into 万-sections of four digits. Inside a section each
//! nonzero digit is followed by its multiplier (千, 百, 十); sections are
//! closed by 亿 or 万. A single 零 marks a run of skipped magnitudes. The
//! parser accepts both 零 and 〇 as that marker and the bare 十 opening
//! (十五 = 15), and rejects forms whose magnitude would be ambiguous
//! (一千二 could mean 1200 or 1002).

use super::CodecError;
use crate::decimal::{pow10, ExactDecimal};
use crate::script::{script_of_codepoint, ScriptId, CHINESE};

const SECTION_UNITS: [(u64, Option<char>); 3] = [
    (100_000_000, Some('亿')),
    (10_000, Some('万')),
    (1, None),
];

/// Exclusive upper bound on magnitudes the renderer supports.
pub const LIMIT: u64 = 1_000_000_000_000;

pub(crate) fn render(value: &ExactDecimal) -> Result<String, CodecError> {
    let (int, frac) = value.split_digits();
    let int: u64 = int
        .parse()
        .ok()
        .filter(|n| *n < LIMIT)
        .ok_or_else(|| CodecError::UnsupportedValue(format!("{value} is outside the Chinese range")))?;
    let mut out = String::new();
    if value.is_negative() {
        out.push(CHINESE.minus);
    }
    out.push_str(&render_integer(int));
    if !frac.is_empty() {
        out.push(CHINESE.decimal_point);
        out.extend(frac.bytes().map(|b| CHINESE.digits[(b - b'0') as usize]));
    }
    Ok(out)
}

pub fn render_integer(n: u64) -> String {
    assert!(n < LIMIT, "{n} exceeds the myriad renderer's range");
    if n == 0 {
        return CHINESE.digits[0].to_string();
    }
    let mut out = String::new();
    let mut emitted = false;
    let mut skipped_section = false;
    let mut rest = n;
    for (size, unit) in SECTION_UNITS {
        let section = rest / size;
        rest %= size;
        if section == 0 {
            skipped_section |= emitted;
            continue;
        }
        if emitted && (skipped_section || section < 1000) {
            out.push(CHINESE.zero_alt);
        }
        render_section(section as u16, !emitted, &mut out);
        out.extend(unit);
        emitted = true;
        skipped_section = false;
    }
    out
}

fn render_section(section: u16, leading: bool, out: &mut String) {
    const SMALL_UNITS: [Option<char>; 4] = [Some('千'), Some('百'), Some('十'), None];
    let digits = [section / 1000, section / 100 % 10, section / 10 % 10, section % 10];
    let mut started = false;
    let mut gap = false;
    for (d, unit) in digits.into_iter().zip(SMALL_UNITS) {
        if d == 0 {
            gap |= started;
            continue;
        }
        if gap {
            out.push(CHINESE.zero_alt);
            gap = false;
        }
        let bare_ten = d == 1 && unit == Some('十') && leading && !started;
        if !bare_ten {
            out.push(CHINESE.digits[d as usize]);
        }
        out.extend(unit);
        started = true;
    }
}

fn malformed(text: &str, reason: impl Into<String>) -> CodecError {
    CodecError::MalformedNumeral {
        text: text.to_string(),
        reason: reason.into(),
    }
}

fn foreign(text: &str, c: char) -> CodecError {
    match script_of_codepoint(c) {
        Some((other, _)) => CodecError::MixedScript {
            first: ScriptId::ChineseSimplified,
            second: other,
        },
        None => malformed(text, format!("unexpected character {c:?}")),
    }
}

pub fn parse(text: &str) -> Result<ExactDecimal, CodecError> {
    let (negative, body) = match text.strip_prefix(CHINESE.minus) {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_text, frac_text) = match body.split_once(CHINESE.decimal_point) {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    if int_text.is_empty() {
        return Err(malformed(text, "missing integer part"));
    }
    let int = parse_integer(text, int_text)?;
    let mut digits = int.to_string();
    let mut scale = 0;
    if let Some(frac) = frac_text {
        if frac.is_empty() {
            return Err(malformed(text, "empty fraction after 点"));
        }
        for c in frac.chars() {
            let d = CHINESE.digit_value(c).ok_or_else(|| foreign(text, c))?;
            digits.push((b'0' + d) as char);
            scale += 1;
        }
    }
    ExactDecimal::from_digits(negative, &digits, scale)
        .map_err(|e| malformed(text, e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Item {
    Zero,
    Term { digit: u64, exp: u32 },
}

/// Parses the integer part of a compositional numeral.
pub fn parse_integer(full: &str, text: &str) -> Result<u64, CodecError> {
    if text.chars().count() == 1 {
        if let Some(0) = CHINESE.digit_value(text.chars().next().unwrap()) {
            return Ok(0);
        }
    }

    // Split into sections closed by 亿 / 万; the tail section has exponent 0.
    let mut sections: Vec<(Vec<char>, u32)> = Vec::new();
    let mut current = Vec::new();
    for c in text.chars() {
        match CHINESE.multiplier_exponent(c) {
            Some(exp @ (4 | 8)) => {
                if let Some(&(_, prev)) = sections.last() {
                    if exp >= prev {
                        return Err(malformed(full, format!("{c} out of order")));
                    }
                }
                if current.is_empty() {
                    return Err(malformed(full, format!("empty group before {c}")));
                }
                sections.push((std::mem::take(&mut current), exp));
            }
            _ => current.push(c),
        }
    }
    if !current.is_empty() {
        sections.push((current, 0));
    }

    let mut items: Vec<(Item, bool)> = Vec::new(); // (item, opens a section)
    for (index, (chars, big_exp)) in sections.iter().enumerate() {
        let first_section = index == 0;
        let mut pending: Option<u64> = None;
        let mut section_items: Vec<Item> = Vec::new();
        for &c in chars {
            if let Some(d) = CHINESE.digit_value(c) {
                if d == 0 {
                    if pending.is_some() {
                        return Err(malformed(full, "零 directly after a digit"));
                    }
                    if matches!(section_items.last(), Some(Item::Zero)) {
                        return Err(malformed(full, "repeated 零"));
                    }
                    section_items.push(Item::Zero);
                } else {
                    if pending.is_some() {
                        return Err(malformed(full, "adjacent digits without a multiplier"));
                    }
                    pending = Some(d as u64);
                }
            } else if let Some(exp) = CHINESE.multiplier_exponent(c) {
                let digit = match pending.take() {
                    Some(d) => d,
                    None if exp == 1 && first_section && section_items.is_empty() => 1,
                    None => return Err(malformed(full, format!("{c} without a digit"))),
                };
                section_items.push(Item::Term { digit, exp: exp + big_exp });
            } else {
                return Err(foreign(full, c));
            }
        }
        if let Some(digit) = pending {
            section_items.push(Item::Term { digit, exp: *big_exp });
        }
        match section_items.last() {
            None => return Err(malformed(full, "empty group")),
            Some(Item::Zero) => return Err(malformed(full, "trailing 零")),
            Some(_) => {}
        }
        for (i, item) in section_items.into_iter().enumerate() {
            items.push((item, i == 0));
        }
    }

    let mut value: u64 = 0;
    let mut last_exp: Option<u32> = None;
    let mut zero_between = false;
    let mut term_opens_section = false;
    for (item, opens) in items {
        match item {
            Item::Zero => {
                if last_exp.is_none() {
                    return Err(malformed(full, "leading 零"));
                }
                zero_between = true;
                term_opens_section = opens;
            }
            Item::Term { digit, exp } => {
                let opens_section = opens || (zero_between && term_opens_section);
                if let Some(prev) = last_exp {
                    if exp >= prev {
                        return Err(malformed(full, "multipliers out of order"));
                    }
                    let gap = prev - exp;
                    if zero_between && gap == 1 {
                        return Err(malformed(full, "零 without a skipped magnitude"));
                    }
                    // 一千万一千 leaves the empty magnitudes implicit; any other
                    // gap needs 零 or the reading is ambiguous.
                    let implicit_ok = opens_section && exp % 4 == 3;
                    if !zero_between && gap > 1 && !implicit_ok {
                        return Err(malformed(full, "skipped magnitude without 零"));
                    }
                }
                value += digit * pow10(exp).expect("exponent below 12") as u64;
                last_exp = Some(exp);
                zero_between = false;
                term_opens_section = false;
            }
        }
    }
    Ok(value)
}
