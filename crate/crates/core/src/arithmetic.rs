//! Ground-truth evaluation of single binary arithmetic expressions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::{DecimalError, ExactDecimal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operation {
    Add,
    Sub,
    Mul,
    Div,
}

impl Operation {
    pub const ALL: [Operation; 4] = [Operation::Add, Operation::Sub, Operation::Mul, Operation::Div];

    pub fn english_word(self) -> &'static str {
        match self {
            Operation::Add => "plus",
            Operation::Sub => "minus",
            Operation::Mul => "multiplied by",
            Operation::Div => "divided by",
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Operation::Add => "Add",
            Operation::Sub => "Sub",
            Operation::Mul => "Mul",
            Operation::Div => "Div",
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Operation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operation::ALL
            .into_iter()
            .find(|op| op.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown operation {s:?}"))
    }
}

/// How the answer of an expression is rounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoundingDirective {
    ToInteger,
    /// Always three places; the field exists so the precision is visible in
    /// serialized cases.
    ToDecimalPlaces(u32),
}

impl RoundingDirective {
    pub const THREE_PLACES: RoundingDirective = RoundingDirective::ToDecimalPlaces(3);

    pub fn scale(self) -> u32 {
        match self {
            RoundingDirective::ToInteger => 0,
            RoundingDirective::ToDecimalPlaces(places) => places,
        }
    }

    /// The directive whose answers carry `scale` fraction digits.
    pub fn from_scale(scale: u32) -> Option<Self> {
        match scale {
            0 => Some(RoundingDirective::ToInteger),
            3 => Some(RoundingDirective::THREE_PLACES),
            _ => None,
        }
    }

    pub fn english_sentence(self) -> &'static str {
        match self {
            RoundingDirective::ToInteger => "Round the answer to an integer.",
            RoundingDirective::ToDecimalPlaces(_) => "Round the answer to three decimal places.",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported rounding precision {0}")]
    UnsupportedPrecision(u32),
    #[error("intermediate result out of range")]
    Overflow,
}

impl From<DecimalError> for ArithmeticError {
    fn from(err: DecimalError) -> Self {
        match err {
            DecimalError::DivisionByZero => ArithmeticError::DivisionByZero,
            _ => ArithmeticError::Overflow,
        }
    }
}

/// Unrounded result of Add, Sub or Mul. Division has no finite exact form in
/// general and returns `None`.
pub fn exact(lhs: &ExactDecimal, op: Operation, rhs: &ExactDecimal) -> Result<Option<ExactDecimal>, ArithmeticError> {
    Ok(match op {
        Operation::Add => Some(lhs.checked_add(rhs)?),
        Operation::Sub => Some(lhs.checked_sub(rhs)?),
        Operation::Mul => Some(lhs.checked_mul(rhs)?),
        Operation::Div => None,
    })
}

/// Evaluates `lhs op rhs` and rounds half away from zero per `directive`.
///
/// The result always carries exactly `directive.scale()` fraction digits.
pub fn evaluate(
    lhs: &ExactDecimal,
    op: Operation,
    rhs: &ExactDecimal,
    directive: RoundingDirective,
) -> Result<ExactDecimal, ArithmeticError> {
    let scale = directive.scale();
    if scale != 0 && scale != 3 {
        return Err(ArithmeticError::UnsupportedPrecision(scale));
    }
    match exact(lhs, op, rhs)? {
        Some(value) => Ok(value.round_to(scale)?),
        None => {
            // one guard digit decides the half-away-from-zero rounding exactly
            let guarded = lhs.checked_div_truncated(rhs, scale + 1)?;
            Ok(guarded.round_to(scale)?)
        }
    }
}

/// One benchmark expression with its ground-truth answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressionCase {
    pub id: u64,
    pub lhs: ExactDecimal,
    pub op: Operation,
    pub rhs: ExactDecimal,
    pub directive: RoundingDirective,
    pub answer: ExactDecimal,
}

impl ExpressionCase {
    pub fn new(
        id: u64,
        lhs: ExactDecimal,
        op: Operation,
        rhs: ExactDecimal,
        directive: RoundingDirective,
    ) -> Result<Self, ArithmeticError> {
        let answer = evaluate(&lhs, op, &rhs, directive)?;
        Ok(ExpressionCase {
            id,
            lhs,
            op,
            rhs,
            directive,
            answer,
        })
    }

    /// Recomputes the answer; `false` means the stored one is stale.
    pub fn is_consistent(&self) -> bool {
        evaluate(&self.lhs, self.op, &self.rhs, self.directive).is_ok_and(|a| a == self.answer)
    }
}

/// Digit characters in both operands, ignoring markers and signs.
pub fn total_operand_digits(case: &ExpressionCase) -> usize {
    case.lhs.digits().len() + case.rhs.digits().len()
}
