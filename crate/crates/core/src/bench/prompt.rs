//! Prompt templates for both tracks.

use std::collections::BTreeSet;

use super::{BenchError, PromptCatalog, PromptStrategy, RenderedPrompt, Slot, Track, Variant};
use crate::arithmetic::{total_operand_digits, ExpressionCase, Operation, RoundingDirective};
use crate::codec::to_script;
use crate::decimal::ExactDecimal;
use crate::format::{self, FormatId};
use crate::script::{digit_map, ScriptId, CHINESE};

const BASE_SYSTEM: &str = "Compute and respond ONLY with the answer. The output should be of the form: \
\"Answer: $ANSWER\" (without quotes) where $ANSWER is the answer to the problem.";
const SAME_SCRIPT: &str = " Ensure the answer is in the same script as the numbers in the question.";
const SAME_SCRIPT_MAPPING: &str = " Ensure the answer is in the same script as the numbers in the question, \
with the mapping between the script\u{2019}s numerals and Latin numerals provided as reference.";
const SAME_FORMAT: &str = " Ensure the answer has the same formatting as the numbers in the question.";
const SAME_FORMAT_HINT: &str = " Ensure the answer has the same formatting as the numbers in the question \
with decimal markers and grouping separators as mentioned.";

/// Case ids of the few-shot examples. Generated ids start at 1 and never
/// reach these.
pub const FEWSHOT_IDS: [u64; 2] = [u64::MAX - 1, u64::MAX];

/// The two worked examples shown before a few-shot query.
pub fn fewshot_pool() -> [ExpressionCase; 2] {
    let d = |s: &str| s.parse::<ExactDecimal>().expect("literal");
    let three = RoundingDirective::THREE_PLACES;
    [
        ExpressionCase::new(FEWSHOT_IDS[0], d("4958.155"), Operation::Mul, d("93.2"), three).expect("literal"),
        ExpressionCase::new(FEWSHOT_IDS[1], d("9628240"), Operation::Div, d("4847"), three).expect("literal"),
    ]
}

/// `[glyph:value, ...]` for the script's digits, plus the multipliers for
/// Chinese.
pub fn mapping_block(script: ScriptId) -> String {
    let map = digit_map(script);
    let mut pairs: Vec<String> = (0..10u8).map(|v| format!("{}:{v}", map.glyph(v))).collect();
    if script == ScriptId::ChineseSimplified {
        for (glyph, exp) in CHINESE.multipliers {
            pairs.push(format!("{glyph}:1{}", "0".repeat(exp as usize)));
        }
    }
    format!("[{}]", pairs.join(", "))
}

fn check_track(strategies: &[PromptStrategy], track: Track) -> Result<(), BenchError> {
    match strategies.iter().find(|s| s.track() != track) {
        Some(&strategy) => Err(BenchError::WrongTrack { strategy, track }),
        None => Ok(()),
    }
}

fn check_ids(cases: &[ExpressionCase]) -> Result<(), BenchError> {
    match cases.iter().find(|c| FEWSHOT_IDS.contains(&c.id)) {
        Some(c) => Err(BenchError::ReservedCaseId(c.id)),
        None => Ok(()),
    }
}

/// One prompt per (case, script, strategy), in case order, then script
/// order, then strategy order as given.
pub fn render_script_suite(
    cases: &[ExpressionCase],
    scripts: &BTreeSet<ScriptId>,
    strategies: &[PromptStrategy],
    catalog: &PromptCatalog,
) -> Result<Vec<RenderedPrompt>, BenchError> {
    check_track(strategies, Track::Script)?;
    check_ids(cases)?;
    let mut out = Vec::with_capacity(cases.len() * scripts.len() * strategies.len());
    for case in cases {
        for &script in scripts {
            for &strategy in strategies {
                out.push(render_script_prompt(case, script, strategy, catalog)?);
            }
        }
    }
    Ok(out)
}

fn render_script_prompt(
    case: &ExpressionCase,
    script: ScriptId,
    strategy: PromptStrategy,
    catalog: &PromptCatalog,
) -> Result<RenderedPrompt, BenchError> {
    let lhs = to_script(&case.lhs, script)?.text;
    let rhs = to_script(&case.rhs, script)?.text;
    let native = |slot| catalog.require(script, strategy, slot);
    let english_op = catalog.english(Slot::Operator(case.op));
    let english_round = catalog.english(Slot::Round(case.directive));

    let (system_suffix, expression, directive) = match strategy {
        PromptStrategy::EnglishOperator => ("", format!("{lhs} {english_op} {rhs}"), english_round.to_string()),
        PromptStrategy::DigitsOnlyNative => (SAME_SCRIPT, format!("{lhs} {english_op} {rhs}"), english_round.to_string()),
        PromptStrategy::ExprOnlyNative | PromptStrategy::ExprPromptNative | PromptStrategy::ExprPromptNativeMapping => {
            let joiner = native(Slot::Joiner)?;
            let word = native(Slot::Operator(case.op))?;
            let expression = format!("{lhs}{joiner}{word}{joiner}{rhs}");
            let directive = if strategy == PromptStrategy::ExprOnlyNative {
                english_round.to_string()
            } else {
                native(Slot::Round(case.directive))?.to_string()
            };
            let suffix = if strategy == PromptStrategy::ExprPromptNativeMapping {
                SAME_SCRIPT_MAPPING
            } else {
                SAME_SCRIPT
            };
            (suffix, expression, directive)
        }
        other => unreachable!("{other} checked against the script track"),
    };
    let mut user = String::new();
    if strategy == PromptStrategy::ExprPromptNativeMapping {
        user.push_str(&mapping_block(script));
        user.push('\n');
    }
    user.push_str(&directive);
    user.push('\n');
    user.push_str(&expression);

    Ok(RenderedPrompt {
        case_id: case.id,
        variant: Variant::Script(script),
        strategy,
        system_text: format!("{BASE_SYSTEM}{system_suffix}"),
        user_text: user,
        expected_answer_text: to_script(&case.answer, script)?.text,
        expected_answer_value: case.answer,
        op: case.op,
        total_digits: total_operand_digits(case),
        expression,
    })
}

/// One prompt per (case, format, strategy), in case order, then format
/// order, then strategy order as given.
pub fn render_format_suite(
    cases: &[ExpressionCase],
    formats: &BTreeSet<FormatId>,
    strategies: &[PromptStrategy],
    catalog: &PromptCatalog,
) -> Result<Vec<RenderedPrompt>, BenchError> {
    check_track(strategies, Track::Format)?;
    check_ids(cases)?;
    let mut out = Vec::with_capacity(cases.len() * formats.len() * strategies.len());
    for case in cases {
        for &fmt in formats {
            for &strategy in strategies {
                out.push(render_format_prompt(case, fmt, strategy, catalog));
            }
        }
    }
    Ok(out)
}

fn format_expression(case: &ExpressionCase, fmt: FormatId, catalog: &PromptCatalog) -> String {
    format!(
        "{} {} {}",
        format::render(&case.lhs, fmt),
        catalog.english(Slot::Operator(case.op)),
        format::render(&case.rhs, fmt)
    )
}

fn render_format_prompt(
    case: &ExpressionCase,
    fmt: FormatId,
    strategy: PromptStrategy,
    catalog: &PromptCatalog,
) -> RenderedPrompt {
    let expression = format_expression(case, fmt, catalog);
    let directive = catalog.english(Slot::Round(case.directive));
    let query = format!("{directive}\n{expression}");
    let spec = fmt.spec();
    let (suffix, user) = match strategy {
        PromptStrategy::AnyOutput => ("", query),
        PromptStrategy::FormattedOutput => (SAME_FORMAT, query),
        PromptStrategy::FormattedOutputHint => (
            SAME_FORMAT_HINT,
            format!(
                "The decimal marker used is '{}' and the grouping separator is '{}'.\n\n{query}",
                spec.decimal_marker, spec.grouping_separator
            ),
        ),
        PromptStrategy::FormattedOutputFewshot => {
            let mut user = String::from("Here are some examples:\n");
            for (i, example) in fewshot_pool().iter().enumerate() {
                user.push_str(&format!(
                    "Example {}:\n{}\n{}\nAnswer: {}\n\n",
                    i + 1,
                    catalog.english(Slot::Round(example.directive)),
                    format_expression(example, fmt, catalog),
                    format::render(&example.answer, fmt)
                ));
            }
            user.push_str(&query);
            (SAME_FORMAT, user)
        }
        other => unreachable!("{other} checked against the format track"),
    };
    let expected = if strategy == PromptStrategy::AnyOutput {
        case.answer.to_string()
    } else {
        format::render(&case.answer, fmt)
    };
    RenderedPrompt {
        case_id: case.id,
        variant: Variant::Format(fmt),
        strategy,
        system_text: format!("{BASE_SYSTEM}{suffix}"),
        user_text: user,
        expected_answer_text: expected,
        expected_answer_value: case.answer,
        op: case.op,
        total_digits: total_operand_digits(case),
        expression,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> ExactDecimal {
        s.parse().unwrap()
    }

    fn chinese_case() -> ExpressionCase {
        ExpressionCase::new(1, d("3826995"), Operation::Div, d("549207"), RoundingDirective::ToInteger).unwrap()
    }

    fn f3_case() -> ExpressionCase {
        ExpressionCase::new(2, d("22436.447"), Operation::Add, d("4359"), RoundingDirective::THREE_PLACES).unwrap()
    }

    fn one<T: Ord>(x: T) -> BTreeSet<T> {
        BTreeSet::from([x])
    }

    #[test]
    fn chinese_prompts() {
        let catalog = PromptCatalog::builtin();
        let suite = render_script_suite(
            &[chinese_case()],
            &one(ScriptId::ChineseSimplified),
            &PromptStrategy::SCRIPT_TRACK,
            &catalog,
        )
        .unwrap();
        let by = |s: PromptStrategy| suite.iter().find(|p| p.strategy == s).unwrap();

        let digits_only = by(PromptStrategy::DigitsOnlyNative);
        assert_eq!(
            digits_only.user_text,
            "Round the answer to an integer.\n三百八十二万六千九百九十五 divided by 五十四万九千二百零七"
        );
        assert!(digits_only.system_text.ends_with("same script as the numbers in the question."));
        assert_eq!(digits_only.expected_answer_text, "七");

        assert_eq!(
            by(PromptStrategy::ExprOnlyNative).user_text,
            "Round the answer to an integer.\n三百八十二万六千九百九十五除以五十四万九千二百零七"
        );
        assert_eq!(
            by(PromptStrategy::ExprPromptNative).user_text,
            "将答案四舍五入到整数。\n三百八十二万六千九百九十五除以五十四万九千二百零七"
        );
        let mapping = by(PromptStrategy::ExprPromptNativeMapping);
        assert_eq!(
            mapping.user_text,
            "[〇:0, 一:1, 二:2, 三:3, 四:4, 五:5, 六:6, 七:7, 八:8, 九:9, 十:10, 百:100, 千:1000, 万:10000, 亿:100000000]\n\
             将答案四舍五入到整数。\n三百八十二万六千九百九十五除以五十四万九千二百零七"
        );
        assert!(mapping.system_text.contains("Latin numerals provided as reference."));
        for p in &suite {
            assert!(p.system_text.contains("\"Answer: $ANSWER\""));
        }
        assert_eq!(by(PromptStrategy::EnglishOperator).system_text, BASE_SYSTEM);
    }

    #[test]
    fn hindu_arabic_english_operator() {
        let suite = render_script_suite(
            &[f3_case()],
            &one(ScriptId::HinduArabic),
            &[PromptStrategy::EnglishOperator],
            &PromptCatalog::builtin(),
        )
        .unwrap();
        assert_eq!(suite[0].user_text, "Round the answer to three decimal places.\n22436.447 plus 4359");
        assert_eq!(suite[0].expected_answer_text, "26795.447");
    }

    #[test]
    fn missing_native_wording_is_an_error() {
        let r = render_script_suite(
            &[f3_case()],
            &one(ScriptId::Thai),
            &[PromptStrategy::ExprOnlyNative],
            &PromptCatalog::builtin(),
        );
        assert!(matches!(r, Err(BenchError::MissingCatalogEntry { script: ScriptId::Thai, .. })));
        let ok = render_script_suite(
            &[f3_case()],
            &one(ScriptId::Thai),
            &[PromptStrategy::DigitsOnlyNative],
            &PromptCatalog::builtin(),
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn f3_prompts() {
        let catalog = PromptCatalog::builtin();
        let suite = render_format_suite(&[f3_case()], &one(FormatId::F3), &PromptStrategy::FORMAT_TRACK, &catalog).unwrap();
        let by = |s: PromptStrategy| suite.iter().find(|p| p.strategy == s).unwrap();
        let query = "Round the answer to three decimal places.\n22\u{2009}436,447 plus 4\u{2009}359";

        let any = by(PromptStrategy::AnyOutput);
        assert_eq!(any.user_text, query);
        assert_eq!(any.expected_answer_text, "26795.447");
        assert_eq!(any.system_text, BASE_SYSTEM);

        let formatted = by(PromptStrategy::FormattedOutput);
        assert_eq!(formatted.expected_answer_text, "26\u{2009}795,447");
        assert!(formatted.system_text.ends_with("same formatting as the numbers in the question."));

        let hint = by(PromptStrategy::FormattedOutputHint);
        assert_eq!(
            hint.user_text,
            format!("The decimal marker used is ',' and the grouping separator is '\u{2009}'.\n\n{query}")
        );

        let fewshot = by(PromptStrategy::FormattedOutputFewshot);
        assert_eq!(
            fewshot.user_text,
            format!(
                "Here are some examples:\n\
                 Example 1:\nRound the answer to three decimal places.\n4\u{2009}958,155 multiplied by 93,2\nAnswer: 462\u{2009}100,046\n\n\
                 Example 2:\nRound the answer to three decimal places.\n9\u{2009}628\u{2009}240 divided by 4\u{2009}847\nAnswer: 1\u{2009}986,433\n\n\
                 {query}"
            )
        );
        assert_eq!(fewshot.user_text.matches("Answer:").count(), 2);
    }

    #[test]
    fn track_and_reserved_id_checks() {
        let catalog = PromptCatalog::builtin();
        assert!(matches!(
            render_format_suite(&[f3_case()], &one(FormatId::F1), &[PromptStrategy::EnglishOperator], &catalog),
            Err(BenchError::WrongTrack { .. })
        ));
        let mut reserved = f3_case();
        reserved.id = FEWSHOT_IDS[0];
        assert!(matches!(
            render_format_suite(&[reserved], &one(FormatId::F1), &[PromptStrategy::AnyOutput], &catalog),
            Err(BenchError::ReservedCaseId(_))
        ));
    }

    #[test]
    fn positional_mapping_block() {
        assert_eq!(mapping_block(ScriptId::Devanagari), "[०:0, १:1, २:2, ३:3, ४:4, ५:5, ६:6, ७:7, ८:8, ९:9]");
    }
}
