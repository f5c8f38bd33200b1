mod common;

use common::random_operand;
use numeral_core::{from_any_script, from_script, identify_script, to_script, ExactDecimal, ScriptId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn positional_round_trip_and_identification() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let values: Vec<ExactDecimal> = (0..10_000).map(|_| random_operand(&mut rng).parse().unwrap()).collect();
    for script in ScriptId::ALL.into_iter().filter(|s| s.is_positional()) {
        for x in &values {
            let n = to_script(x, script).unwrap();
            assert_eq!(from_script(&n).unwrap(), *x, "{script} {x}");
            assert_eq!(identify_script(&n.text).unwrap(), script);
        }
    }
}

#[test]
fn chinese_identification() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..1_000 {
        let x = ExactDecimal::from_int(rng.random_range(0..1_000_000_000));
        let n = to_script(&x, ScriptId::ChineseSimplified).unwrap();
        assert_eq!(identify_script(&n.text).unwrap(), ScriptId::ChineseSimplified);
        assert_eq!(from_any_script(&n.text).unwrap(), x);
    }
}

#[test]
fn identification_failure_implies_unclaimed_parse_failure() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let pool: Vec<char> = ScriptId::ALL
        .into_iter()
        .flat_map(|s| numeral_core::digit_map(s).glyphs)
        .chain(['.', '-', ' ', 'x', '十', '万'])
        .collect();
    for _ in 0..5_000 {
        let len = rng.random_range(0..6);
        let text: String = (0..len).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        if identify_script(&text).is_err() {
            assert!(from_any_script(&text).is_err(), "{text:?}");
        }
    }
}
