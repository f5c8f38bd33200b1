//! Numeral-representation toolkit: numeral scripts, locale number formats,
//! exact arithmetic, benchmark generation, corpus measurement, response
//! scoring and logistic-regression analysis.

pub mod arithmetic;
pub mod bench;
pub mod codec;
pub mod corpus;
pub mod decimal;
pub mod format;
pub mod records;
pub mod regression;
pub mod script;
pub mod scoring;

pub use codec::{from_any_script, from_script, identify_script, to_script, CodecError, NumeralString};
pub use arithmetic::{evaluate, total_operand_digits, ArithmeticError, ExpressionCase, Operation, RoundingDirective};
pub use decimal::{DecimalError, ExactDecimal};
pub use script::{digit_map, language_for, script_of_codepoint, DigitMap, ScriptId};
pub use format::{classify, FormatError, FormatId, FormatSpec, GroupingPattern, ParseMode};
