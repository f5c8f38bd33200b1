//! Reference implementations kept apart from the library code paths they
//! check. Nothing here calls into the modules under test.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const DIGITS: [&str; 10] = ["〇", "一", "二", "三", "四", "五", "六", "七", "八", "九"];

/// Recursive myriad renderer: split off the largest unit, recurse on the
/// quotient, and emit 零 when the remainder does not reach the next lower
/// magnitude.
pub fn chinese_oracle(n: u64) -> String {
    if n == 0 {
        return "〇".to_string();
    }
    rec(n, true)
}

fn rec(n: u64, leading: bool) -> String {
    const UNITS: [(u64, &str); 5] = [
        (100_000_000, "亿"),
        (10_000, "万"),
        (1_000, "千"),
        (100, "百"),
        (10, "十"),
    ];
    for (unit, glyph) in UNITS {
        if n >= unit {
            let (hi, lo) = (n / unit, n % unit);
            let mut s = if unit == 10 && hi == 1 && leading {
                String::new()
            } else {
                rec(hi, leading)
            };
            s.push_str(glyph);
            if lo > 0 {
                if lo < unit / 10 {
                    s.push('零');
                }
                s.push_str(&rec(lo, false));
            }
            return s;
        }
    }
    DIGITS[n as usize].to_string()
}

pub fn rational(text: &str) -> BigRational {
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let num: BigInt = format!("{int}{frac}").parse().unwrap();
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let r = BigRational::new(num, den);
    if neg { -r } else { r }
}

/// Rounds half away from zero and prints with exactly `scale` fraction digits.
pub fn round_rational(value: &BigRational, scale: u32) -> String {
    let factor = BigRational::from_integer(BigInt::from(10u32).pow(scale));
    let scaled = value.abs() * factor;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rounded = (scaled + half).floor().to_integer();
    let mut digits = rounded.to_string();
    if digits.len() <= scale as usize {
        digits = format!("{}{}", "0".repeat(scale as usize + 1 - digits.len()), digits);
    }
    let cut = digits.len() - scale as usize;
    let body = if scale == 0 {
        digits
    } else {
        format!("{}.{}", &digits[..cut], &digits[cut..])
    };
    if value.is_negative() && !rounded.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

/// Random decimal text with `4..=8` digits in total and `0..=3` of them
/// after the point, never with a leading zero.
pub fn random_operand<R: rand::Rng>(rng: &mut R) -> String {
    let total = rng.random_range(4..=8usize);
    let frac = rng.random_range(0..=3usize.min(total - 1));
    let mut s = String::new();
    for i in 0..total {
        if i == total - frac {
            s.push('.');
        }
        let lo = if i == 0 { 1 } else { 0 };
        s.push(char::from(b'0' + rng.random_range(lo..=9u8)));
    }
    s
}
