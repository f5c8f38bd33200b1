//! Fixed-effects logistic regression of correctness on digits, operation,
//! variant, tokens per digit and prompt strategy.

mod fit;
mod tokens;

use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arithmetic::Operation;
use crate::bench::{PromptStrategy, RenderedPrompt, Variant};
use crate::scoring::{Outcome, ScoreRecord};

pub use fit::{fit, gradient, log_likelihood, Coefficient, FitResult, MAX_ITERATIONS, SEPARATION_BOUND, STEP_TOLERANCE};
pub use tokens::{tokens_per_digit, TokenizationScheme, TokensPerDigit};

pub const INTERCEPT: &str = "(Intercept)";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressionError {
    #[error("design matrix has rank {rank} but {columns} columns")]
    SingularDesign { rank: usize, columns: usize },
    #[error("coefficient {column} diverges: the data are separated")]
    SeparationDetected { column: String },
    #[error("the response has a single class")]
    DegenerateResponse,
    #[error("score record for case {case_id} / {variant} / {strategy} has no prompt")]
    JoinFailure {
        case_id: u64,
        variant: Variant,
        strategy: PromptStrategy,
    },
    #[error("no digits in {0:?}")]
    NoDigits(String),
    #[error("tokenizer {scheme} has no entry for digit run {run:?}")]
    UnmappedRun { scheme: String, run: String },
    #[error("token table line {line}: {reason}")]
    TokenTable { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRow {
    pub response: u8,
    pub total_digits: usize,
    pub operation: Operation,
    pub variant: Variant,
    pub tokens_per_digit: f64,
    pub strategy: PromptStrategy,
    pub model_id: String,
    pub case_id: u64,
}

/// Which covariates enter the model. The intercept, total digits and the
/// operation, variant and strategy factors are always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSelection {
    pub tokens_per_digit: bool,
    /// Fixed dummies per model, the alphabetically first model being the
    /// reference.
    pub model_dummies: bool,
}

impl Default for FeatureSelection {
    fn default() -> Self {
        FeatureSelection {
            tokens_per_digit: true,
            model_dummies: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub columns: Vec<String>,
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    /// (model id, case id) of each row.
    pub row_keys: Vec<(String, u64)>,
}

/// One observation per score record. Records whose variant is in
/// `excluded` are dropped.
pub fn build_design(
    records: &[ScoreRecord],
    suite: &[RenderedPrompt],
    scheme: &TokenizationScheme,
    excluded: &BTreeSet<Variant>,
) -> Result<Vec<ObservationRow>, RegressionError> {
    let index: HashMap<(u64, Variant, PromptStrategy), &RenderedPrompt> =
        suite.iter().map(|p| ((p.case_id, p.variant, p.strategy), p)).collect();
    let mut rows = Vec::with_capacity(records.len());
    for r in records.iter().filter(|r| !excluded.contains(&r.variant)) {
        let prompt = index
            .get(&(r.case_id, r.variant, r.strategy))
            .ok_or(RegressionError::JoinFailure {
                case_id: r.case_id,
                variant: r.variant,
                strategy: r.strategy,
            })?;
        rows.push(ObservationRow {
            response: u8::from(r.outcome == Outcome::Correct),
            total_digits: prompt.total_digits,
            operation: prompt.op,
            variant: r.variant,
            tokens_per_digit: tokens_per_digit(&prompt.expression, scheme)?.value(),
            strategy: r.strategy,
            model_id: r.model_id.clone(),
            case_id: r.case_id,
        });
    }
    Ok(rows)
}

fn operation_column(op: Operation) -> String {
    format!("operation[{}]", op.id())
}

fn variant_column(v: Variant) -> String {
    match v {
        Variant::Script(_) => format!("script[{v}]"),
        Variant::Format(_) => format!("format[{v}]"),
    }
}

fn strategy_column(s: PromptStrategy) -> String {
    format!("prompt[{s}]")
}

fn model_column(m: &str) -> String {
    format!("model[{m}]")
}

/// Dummy-codes the rows. Factor levels are those present in the data, minus
/// the reference levels (Add, HinduArabic or F1, EnglishOperator or
/// AnyOutput, and the first model).
pub fn design_matrix(rows: &[ObservationRow], features: &FeatureSelection) -> DesignMatrix {
    let ops: BTreeSet<Operation> = rows.iter().map(|r| r.operation).filter(|&o| o != Operation::Add).collect();
    let variants: BTreeSet<Variant> = rows.iter().map(|r| r.variant).filter(|v| !v.is_reference()).collect();
    let strategies: BTreeSet<PromptStrategy> =
        rows.iter().map(|r| r.strategy).filter(|s| !s.is_reference()).collect();
    let models: BTreeSet<&str> = rows.iter().map(|r| r.model_id.as_str()).collect();
    let models: Vec<&str> = if features.model_dummies {
        models.into_iter().skip(1).collect()
    } else {
        Vec::new()
    };

    let mut columns = vec![INTERCEPT.to_string(), "total_digits".to_string()];
    columns.extend(ops.iter().map(|&o| operation_column(o)));
    columns.extend(variants.iter().map(|&v| variant_column(v)));
    if features.tokens_per_digit {
        columns.push("tokens_per_digit".into());
    }
    columns.extend(strategies.iter().map(|&s| strategy_column(s)));
    columns.extend(models.iter().map(|m| model_column(m)));

    let mut x = DMatrix::zeros(rows.len(), columns.len());
    for (i, r) in rows.iter().enumerate() {
        let mut j = 0;
        let mut put = |value: f64| {
            x[(i, j)] = value;
            j += 1;
        };
        put(1.0);
        put(r.total_digits as f64);
        ops.iter().for_each(|&o| put(f64::from(u8::from(o == r.operation))));
        variants.iter().for_each(|&v| put(f64::from(u8::from(v == r.variant))));
        if features.tokens_per_digit {
            put(r.tokens_per_digit);
        }
        strategies.iter().for_each(|&s| put(f64::from(u8::from(s == r.strategy))));
        models.iter().for_each(|&m| put(f64::from(u8::from(m == r.model_id))));
    }
    DesignMatrix {
        columns,
        x,
        y: DVector::from_iterator(rows.len(), rows.iter().map(|r| f64::from(r.response))),
        row_keys: rows.iter().map(|r| (r.model_id.clone(), r.case_id)).collect(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl DesignMatrix {
    /// Comma-separated export: `response,model_id,case_id` followed by every
    /// column except the intercept.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("response,model_id,case_id");
        for c in self.columns.iter().filter(|c| *c != INTERCEPT) {
            out.push(',');
            out.push_str(&csv_field(c));
        }
        out.push('\n');
        for i in 0..self.x.nrows() {
            let (model, case) = &self.row_keys[i];
            out.push_str(&format!("{},{},{}", self.y[i], csv_field(model), case));
            for (j, c) in self.columns.iter().enumerate() {
                if c != INTERCEPT {
                    out.push_str(&format!(",{}", self.x[(i, j)]));
                }
            }
            out.push('\n');
        }
        out
    }
}
