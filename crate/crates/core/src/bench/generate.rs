//! Seeded expression generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::arithmetic::{self, ExpressionCase, Operation, RoundingDirective};
use crate::decimal::ExactDecimal;

/// Operands below this many integer digits render without a grouping
/// separator, which makes their format unidentifiable.
pub const MIN_GROUPED_INTEGER_DIGITS: u32 = 4;

const MAX_ATTEMPTS_PER_CASE: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationConfig {
    pub seed: u64,
    pub cases_per_op: usize,
    pub min_digits: u32,
    pub max_digits: u32,
    pub decimal_operand_probability: f64,
    pub max_result_digits: u32,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            seed: 1,
            cases_per_op: 84,
            min_digits: 4,
            max_digits: 8,
            decimal_operand_probability: 0.5,
            max_result_digits: 12,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.cases_per_op == 0 {
            return fail("cases_per_op must be at least 1".into());
        }
        if self.min_digits < 1 || self.max_digits > 12 || self.min_digits > self.max_digits {
            return fail(format!(
                "digit range [{}, {}] must lie within [1, 12]",
                self.min_digits, self.max_digits
            ));
        }
        if !(0.0..=1.0).contains(&self.decimal_operand_probability) {
            return fail(format!(
                "decimal_operand_probability {} is not a probability",
                self.decimal_operand_probability
            ));
        }
        if self.max_result_digits == 0 {
            return fail("max_result_digits must be at least 1".into());
        }
        Ok(())
    }
}

/// Draws an operand with `min_digits..=max_digits` digits in total. Decimal
/// operands keep at least four integer digits and up to three fraction
/// digits, the last of which is nonzero.
fn draw_operand(rng: &mut ChaCha8Rng, cfg: &GenerationConfig) -> ExactDecimal {
    let total = rng.random_range(cfg.min_digits..=cfg.max_digits);
    let room = total.saturating_sub(MIN_GROUPED_INTEGER_DIGITS).min(3);
    let frac = if room > 0 && rng.random_bool(cfg.decimal_operand_probability) {
        rng.random_range(1..=room)
    } else {
        0
    };
    let mut digits = String::with_capacity(total as usize);
    for i in 0..total {
        let first = i == 0 && total - frac > 1;
        let last = frac > 0 && i == total - 1;
        let lo = if first || last { 1 } else { 0 };
        digits.push(char::from(b'0' + rng.random_range(lo..=9u8)));
    }
    ExactDecimal::from_digits(false, &digits, frac).expect("at most 12 digits")
}

fn result_digits(case: &ExpressionCase) -> Result<usize, BenchError> {
    let value = match arithmetic::exact(&case.lhs, case.op, &case.rhs)? {
        Some(v) => v,
        None => case.answer,
    };
    Ok(value.normalized().digits().len())
}

/// Generates `cases_per_op` cases for each operation in Add, Sub, Mul, Div
/// order. Ids run from 1. Identical configs give identical output.
pub fn generate_cases(cfg: &GenerationConfig) -> Result<Vec<ExpressionCase>, BenchError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::with_capacity(cfg.cases_per_op * 4);
    let mut next_id = 1;
    for op in Operation::ALL {
        for _ in 0..cfg.cases_per_op {
            let case = draw_case(&mut rng, cfg, op, next_id)?;
            cases.push(case);
            next_id += 1;
        }
    }
    Ok(cases)
}

fn draw_case(rng: &mut ChaCha8Rng, cfg: &GenerationConfig, op: Operation, id: u64) -> Result<ExpressionCase, BenchError> {
    for _ in 0..MAX_ATTEMPTS_PER_CASE {
        let mut lhs = draw_operand(rng, cfg);
        let mut rhs = draw_operand(rng, cfg);
        if op == Operation::Sub && lhs.cmp_value(&rhs).is_lt() {
            std::mem::swap(&mut lhs, &mut rhs);
        }
        let decimal = lhs.scale() > 0 || rhs.scale() > 0;
        let directive = match op {
            Operation::Div if !decimal && rng.random_bool(0.5) => RoundingDirective::ToInteger,
            Operation::Div => RoundingDirective::THREE_PLACES,
            _ if decimal => RoundingDirective::THREE_PLACES,
            _ => RoundingDirective::ToInteger,
        };
        let case = ExpressionCase::new(id, lhs, op, rhs, directive)?;
        if result_digits(&case)? <= cfg.max_result_digits as usize {
            return Ok(case);
        }
    }
    Err(BenchError::Config(format!(
        "no {op} case within {} result digits after {MAX_ATTEMPTS_PER_CASE} draws",
        cfg.max_result_digits
    )))
}
