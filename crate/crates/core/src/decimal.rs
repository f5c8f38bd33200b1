//! Lossless decimal values.
//!
//! [`ExactDecimal`] is the interchange type between every other module: a
//! signed integer coefficient paired with a count of fraction digits. The
//! written scale is preserved, so `26795.450` and `26795.45` are distinct
//! values structurally while comparing equal numerically (see
//! [`ExactDecimal::value_eq`]).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest number of digits an [`ExactDecimal`] can hold.
pub const MAX_DIGITS: usize = 38;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("empty numeral")]
    Empty,
    #[error("invalid character {0:?} in decimal literal")]
    InvalidChar(char),
    #[error("misplaced decimal point")]
    MisplacedPoint,
    #[error("value exceeds {MAX_DIGITS} digits")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
}

/// A signed decimal number `coefficient / 10^scale`.
///
/// Zero is never negative. The integer part carries no leading zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactDecimal {
    coeff: i128,
    scale: u32,
}

const POW10: [i128; 39] = {
    let mut table = [1i128; 39];
    let mut i = 1;
    while i < 39 {
        table[i] = table[i - 1] * 10;
        i += 1;
    }
    table
};

pub(crate) fn pow10(exp: u32) -> Option<i128> {
    POW10.get(exp as usize).copied()
}

impl ExactDecimal {
    pub const ZERO: ExactDecimal = ExactDecimal { coeff: 0, scale: 0 };

    pub fn new(coeff: i128, scale: u32) -> Result<Self, DecimalError> {
        if scale as usize > MAX_DIGITS || coeff.unsigned_abs() >= POW10[MAX_DIGITS] as u128 {
            return Err(DecimalError::Overflow);
        }
        Ok(ExactDecimal { coeff, scale })
    }

    pub fn from_int(value: i64) -> Self {
        ExactDecimal {
            coeff: value as i128,
            scale: 0,
        }
    }

    /// Builds a value from a sign flag and its unsigned digit string, e.g.
    /// (`false`, `"92243638"`, 2) for 922436.38.
    pub fn from_digits(negative: bool, digits: &str, scale: u32) -> Result<Self, DecimalError> {
        if digits.is_empty() {
            return Err(DecimalError::Empty);
        }
        let mut coeff: i128 = 0;
        let mut significant = 0usize;
        for c in digits.chars() {
            let d = c.to_digit(10).ok_or(DecimalError::InvalidChar(c))?;
            if significant > 0 || d != 0 {
                significant += 1;
            }
            if significant > MAX_DIGITS {
                return Err(DecimalError::Overflow);
            }
            coeff = coeff * 10 + d as i128;
        }
        if scale as usize > MAX_DIGITS {
            return Err(DecimalError::Overflow);
        }
        Ok(ExactDecimal {
            coeff: if negative { -coeff } else { coeff },
            scale,
        })
    }

    pub fn coefficient(&self) -> i128 {
        self.coeff
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    pub fn is_negative(&self) -> bool {
        self.coeff < 0
    }

    pub fn abs(&self) -> Self {
        ExactDecimal {
            coeff: self.coeff.abs(),
            scale: self.scale,
        }
    }

    /// The absolute value's digits: integer part (no leading zeros, "0" when
    /// empty) followed by exactly `scale` fraction digits.
    pub fn digits(&self) -> String {
        let raw = self.coeff.unsigned_abs().to_string();
        let width = self.scale as usize + 1;
        if raw.len() < width {
            format!("{}{}", "0".repeat(width - raw.len()), raw)
        } else {
            raw
        }
    }

    /// Integer and fraction digit strings of the absolute value.
    pub fn split_digits(&self) -> (String, String) {
        let digits = self.digits();
        let cut = digits.len() - self.scale as usize;
        (digits[..cut].to_string(), digits[cut..].to_string())
    }

    pub fn integer_digit_count(&self) -> usize {
        self.digits().len() - self.scale as usize
    }

    /// Drops trailing fraction zeros.
    pub fn normalized(&self) -> Self {
        let mut out = *self;
        while out.scale > 0 && out.coeff % 10 == 0 {
            out.coeff /= 10;
            out.scale -= 1;
        }
        out
    }

    /// Re-expresses the value with a larger scale. Fails on overflow or when
    /// `scale` is smaller than the current one.
    pub fn with_scale(&self, scale: u32) -> Result<Self, DecimalError> {
        if scale < self.scale {
            return Err(DecimalError::Overflow);
        }
        let factor = pow10(scale - self.scale).ok_or(DecimalError::Overflow)?;
        let coeff = self.coeff.checked_mul(factor).ok_or(DecimalError::Overflow)?;
        ExactDecimal::new(coeff, scale)
    }

    /// Rounds half away from zero to `scale` fraction digits. Values with
    /// fewer fraction digits are padded, so the result always has exactly
    /// `scale` digits after the point.
    pub fn round_to(&self, scale: u32) -> Result<Self, DecimalError> {
        if scale >= self.scale {
            return self.with_scale(scale);
        }
        let factor = POW10[(self.scale - scale) as usize];
        let quotient = self.coeff / factor;
        let remainder = (self.coeff % factor).abs();
        let bump = if remainder * 2 >= factor { self.coeff.signum() } else { 0 };
        ExactDecimal::new(quotient + bump, scale)
    }

    pub fn neg(&self) -> Self {
        ExactDecimal {
            coeff: -self.coeff,
            scale: self.scale,
        }
    }

    fn aligned(&self, other: &Self) -> Result<(i128, i128, u32), DecimalError> {
        let scale = self.scale.max(other.scale);
        Ok((
            self.with_scale(scale)?.coeff,
            other.with_scale(scale)?.coeff,
            scale,
        ))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, DecimalError> {
        let (a, b, scale) = self.aligned(other)?;
        ExactDecimal::new(a.checked_add(b).ok_or(DecimalError::Overflow)?, scale)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, DecimalError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, DecimalError> {
        let coeff = self
            .coeff
            .checked_mul(other.coeff)
            .ok_or(DecimalError::Overflow)?;
        ExactDecimal::new(coeff, self.scale + other.scale)
    }

    /// Quotient truncated toward zero to `scale` fraction digits.
    pub fn checked_div_truncated(&self, other: &Self, scale: u32) -> Result<Self, DecimalError> {
        if other.is_zero() {
            return Err(DecimalError::DivisionByZero);
        }
        // self/other = (a / 10^sa) / (b / 10^sb); scaled by 10^scale:
        // a * 10^(scale + sb) / (b * 10^sa)
        let num_exp = scale + other.scale;
        let den_exp = self.scale;
        let shared = num_exp.min(den_exp);
        let num = self
            .coeff
            .checked_mul(pow10(num_exp - shared).ok_or(DecimalError::Overflow)?)
            .ok_or(DecimalError::Overflow)?;
        let den = other
            .coeff
            .checked_mul(pow10(den_exp - shared).ok_or(DecimalError::Overflow)?)
            .ok_or(DecimalError::Overflow)?;
        ExactDecimal::new(num / den, scale)
    }

    /// Numeric equality ignoring the written scale.
    pub fn value_eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.aligned(other) {
            Ok((a, b, _)) => a.cmp(&b),
            // only reachable near the i128 limit; compare normalized forms
            Err(_) => {
                let (a, b) = (self.normalized(), other.normalized());
                let (a, b, _) = a.aligned(&b).expect("normalized values align");
                a.cmp(&b)
            }
        }
    }
}

impl fmt::Display for ExactDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (int, frac) = self.split_digits();
        if self.is_negative() {
            f.write_str("-")?;
        }
        f.write_str(&int)?;
        if !frac.is_empty() {
            write!(f, ".{frac}")?;
        }
        Ok(())
    }
}

impl FromStr for ExactDecimal {
    type Err = DecimalError;

    /// Parses plain ASCII decimal notation: optional `-`, digits, optional
    /// `.` followed by at least one digit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if body.is_empty() {
            return Err(DecimalError::Empty);
        }
        let (int, frac) = match body.split_once('.') {
            Some((int, frac)) => {
                if int.is_empty() || frac.is_empty() || frac.contains('.') {
                    return Err(DecimalError::MisplacedPoint);
                }
                (int, frac)
            }
            None => (body, ""),
        };
        let digits = format!("{int}{frac}");
        ExactDecimal::from_digits(negative, &digits, frac.len() as u32)
    }
}

impl Serialize for ExactDecimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactDecimal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
