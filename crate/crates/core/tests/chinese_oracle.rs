mod common;

use common::chinese_oracle;
use numeral_core::codec::chinese;
use numeral_core::{from_script, to_script, ExactDecimal, NumeralString, ScriptId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn oracle_reproduces_reference_strings() {
    assert_eq!(chinese_oracle(3_826_995), "三百八十二万六千九百九十五");
    assert_eq!(chinese_oracle(549_207), "五十四万九千二百零七");
}

#[test]
fn codec_matches_oracle_below_100000() {
    for n in 0..100_000u64 {
        let expected = chinese_oracle(n);
        let value = ExactDecimal::from_int(n as i64);
        let text = to_script(&value, ScriptId::ChineseSimplified).unwrap().text;
        assert_eq!(text, expected, "render {n}");
        let back = from_script(&NumeralString::new(expected, ScriptId::ChineseSimplified)).unwrap();
        assert_eq!(back, value, "parse {n}");
    }
}

#[test]
fn codec_matches_oracle_on_random_large_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1_000 {
        let n = rng.random_range(0..1_000_000_000u64);
        assert_eq!(chinese::render_integer(n), chinese_oracle(n));
        let parsed = chinese::parse_integer("", &chinese_oracle(n)).unwrap();
        assert_eq!(parsed, n);
    }
    for _ in 0..1_000 {
        let n = rng.random_range(0..chinese::LIMIT);
        assert_eq!(chinese::render_integer(n), chinese_oracle(n));
    }
}
