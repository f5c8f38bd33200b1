//! Registry of the 21 numeral scripts.
//!
//! Every script except Simplified Chinese is positional: the glyph for
//! value `k` is `base + k` inside a single Unicode block. Chinese carries its
//! own table of digit and multiplier glyphs in [`CHINESE`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScriptId {
    HinduArabic,
    PersoArabic,
    Devanagari,
    Bengali,
    Khmer,
    Gujarati,
    Odia,
    Malayalam,
    Myanmar,
    Telugu,
    Thai,
    ChineseSimplified,
    Kannada,
    Nko,
    Tamil,
    Lao,
    OlChiki,
    Adlam,
    Balinese,
    Javanese,
    Osmanya,
}

/// Metadata row for one script.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScriptMeta {
    pub script: ScriptId,
    pub display_name: &'static str,
    pub language_name: &'static str,
    /// Share of digit occurrences in web-scale corpora, as a fraction.
    /// Informational only.
    pub corpus_share: f64,
    /// Code point of the glyph for 0 (positional scripts only).
    zero: Option<char>,
}

const fn meta(
    script: ScriptId,
    display_name: &'static str,
    language_name: &'static str,
    corpus_share: f64,
    zero: Option<char>,
) -> ScriptMeta {
    ScriptMeta {
        script,
        display_name,
        language_name,
        corpus_share,
        zero,
    }
}

use ScriptId::*;

static REGISTRY: [ScriptMeta; 21] = [
    meta(HinduArabic, "Hindu-Arabic", "English", 0.724, Some('\u{0030}')),
    meta(PersoArabic, "Perso-Arabic", "Persian", 0.122, Some('\u{06F0}')),
    meta(Devanagari, "Devanagari", "Hindi", 0.091, Some('\u{0966}')),
    meta(Bengali, "Bengali", "Bengali", 0.014, Some('\u{09E6}')),
    meta(Khmer, "Khmer", "Khmer", 0.007, Some('\u{17E0}')),
    meta(Gujarati, "Gujarati", "Gujarati", 0.005, Some('\u{0AE6}')),
    meta(Odia, "Odia", "Odiya", 0.005, Some('\u{0B66}')),
    meta(Malayalam, "Malayalam", "Malayalam", 0.004, Some('\u{0D66}')),
    meta(Myanmar, "Myanmar", "Burmese", 0.004, Some('\u{1040}')),
    meta(Telugu, "Telugu", "Telugu", 0.004, Some('\u{0C66}')),
    meta(Thai, "Thai", "Thai", 0.004, Some('\u{0E50}')),
    meta(ChineseSimplified, "Chinese", "Mandarin", 0.003, None),
    meta(Kannada, "Kannada", "Kannada", 0.002, Some('\u{0CE6}')),
    meta(Nko, "N'Ko", "Maninka", 0.001, Some('\u{07C0}')),
    meta(Tamil, "Tamil", "Tamil", 0.001, Some('\u{0BE6}')),
    meta(Lao, "Lao", "Lao", 2e-5, Some('\u{0ED0}')),
    meta(OlChiki, "Ol Chiki", "Santali", 6e-6, Some('\u{1C50}')),
    meta(Adlam, "Adlam", "Fulani", 1e-6, Some('\u{1E950}')),
    meta(Balinese, "Balinese", "Balinese", 0.0, Some('\u{1B50}')),
    meta(Javanese, "Javanese", "Javanese", 0.0, Some('\u{A9D0}')),
    meta(Osmanya, "Osmanya", "Somali", 0.0, Some('\u{104A0}')),
];

/// Simplified Chinese numeral glyphs.
pub struct ChineseNumeralTable {
    /// Glyphs for 0–9; index 0 is the canonical standalone zero 〇.
    pub digits: [char; 10],
    /// Alternate zero used inside compositional numerals.
    pub zero_alt: char,
    /// Multipliers with their decimal exponents, ascending.
    pub multipliers: [(char, u32); 5],
    pub decimal_point: char,
    pub minus: char,
}

pub static CHINESE: ChineseNumeralTable = ChineseNumeralTable {
    digits: ['〇', '一', '二', '三', '四', '五', '六', '七', '八', '九'],
    zero_alt: '零',
    multipliers: [('十', 1), ('百', 2), ('千', 3), ('万', 4), ('亿', 8)],
    decimal_point: '点',
    minus: '负',
};

impl ChineseNumeralTable {
    pub fn multiplier_exponent(&self, c: char) -> Option<u32> {
        self.multipliers
            .iter()
            .find(|(glyph, _)| *glyph == c)
            .map(|(_, exp)| *exp)
    }

    pub fn digit_value(&self, c: char) -> Option<u8> {
        if c == self.zero_alt {
            return Some(0);
        }
        self.digits.iter().position(|&g| g == c).map(|v| v as u8)
    }
}

/// The ten digit glyphs of one script.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitMap {
    pub script: ScriptId,
    pub glyphs: [char; 10],
}

impl DigitMap {
    pub fn glyph(&self, value: u8) -> char {
        self.glyphs[value as usize]
    }

    pub fn value_of(&self, c: char) -> Option<u8> {
        self.glyphs.iter().position(|&g| g == c).map(|v| v as u8)
    }

    pub fn as_string(&self) -> String {
        self.glyphs.iter().collect()
    }
}

impl ScriptId {
    pub const ALL: [ScriptId; 21] = [
        HinduArabic,
        PersoArabic,
        Devanagari,
        Bengali,
        Khmer,
        Gujarati,
        Odia,
        Malayalam,
        Myanmar,
        Telugu,
        Thai,
        ChineseSimplified,
        Kannada,
        Nko,
        Tamil,
        Lao,
        OlChiki,
        Adlam,
        Balinese,
        Javanese,
        Osmanya,
    ];

    pub fn meta(self) -> &'static ScriptMeta {
        &REGISTRY[self as usize]
    }

    pub fn display_name(self) -> &'static str {
        self.meta().display_name
    }

    pub fn is_positional(self) -> bool {
        self != ChineseSimplified
    }

    /// Stable identifier used in files and on the command line.
    pub fn id(self) -> &'static str {
        match self {
            HinduArabic => "HinduArabic",
            PersoArabic => "PersoArabic",
            Devanagari => "Devanagari",
            Bengali => "Bengali",
            Khmer => "Khmer",
            Gujarati => "Gujarati",
            Odia => "Odia",
            Malayalam => "Malayalam",
            Myanmar => "Myanmar",
            Telugu => "Telugu",
            Thai => "Thai",
            ChineseSimplified => "ChineseSimplified",
            Kannada => "Kannada",
            Nko => "Nko",
            Tamil => "Tamil",
            Lao => "Lao",
            OlChiki => "OlChiki",
            Adlam => "Adlam",
            Balinese => "Balinese",
            Javanese => "Javanese",
            Osmanya => "Osmanya",
        }
    }
}

impl fmt::Display for ScriptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown script {0:?}")]
pub struct UnknownScript(pub String);

fn squash(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

impl FromStr for ScriptId {
    type Err = UnknownScript;

    /// Accepts the identifier, the display name, or the prompt language,
    /// ignoring case and punctuation ("perso-arabic", "N'Ko", "Hindi").
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = squash(s);
        let alias = match key.as_str() {
            "ha" | "latin" | "western" => Some(HinduArabic),
            "chinese" | "mandarin" | "zh" => Some(ChineseSimplified),
            "oriya" | "odiya" => Some(Odia),
            _ => None,
        };
        if let Some(script) = alias {
            return Ok(script);
        }
        ScriptId::ALL
            .into_iter()
            .find(|script| {
                let m = script.meta();
                squash(script.id()) == key
                    || squash(m.display_name) == key
                    || squash(m.language_name) == key
            })
            .ok_or_else(|| UnknownScript(s.to_string()))
    }
}

/// Digit glyphs for `script`. Chinese returns 〇…九; its multipliers live in
/// [`CHINESE`].
pub fn digit_map(script: ScriptId) -> DigitMap {
    let glyphs = match script.meta().zero {
        Some(zero) => std::array::from_fn(|k| {
            char::from_u32(zero as u32 + k as u32).expect("digit blocks are valid scalar values")
        }),
        None => CHINESE.digits,
    };
    DigitMap { script, glyphs }
}

/// Owning script and value of a digit glyph. 零 resolves to Chinese zero.
pub fn script_of_codepoint(cp: char) -> Option<(ScriptId, u8)> {
    if let Some(v) = CHINESE.digit_value(cp) {
        return Some((ChineseSimplified, v));
    }
    let code = cp as u32;
    REGISTRY.iter().find_map(|m| {
        let zero = m.zero? as u32;
        (zero..zero + 10)
            .contains(&code)
            .then(|| (m.script, (code - zero) as u8))
    })
}

pub fn language_for(script: ScriptId) -> &'static str {
    script.meta().language_name
}

/// Tab-separated audit table: one row per script with its id, ten glyphs,
/// code point of the zero glyph, prompt language and corpus share.
pub fn registry_table() -> String {
    let mut out = String::from("script\tglyphs\tfirst_codepoint\tlanguage\tcorpus_share\n");
    for script in ScriptId::ALL {
        let m = script.meta();
        let map = digit_map(script);
        out.push_str(&format!(
            "{}\t{}\tU+{:04X}\t{}\t{}\n",
            script.id(),
            map.as_string(),
            map.glyphs[0] as u32,
            m.language_name,
            m.corpus_share
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn table_glyphs() {
        assert_eq!(digit_map(Devanagari).glyphs[9], '९');
        assert_eq!(digit_map(Kannada).glyphs[8], '೮');
        assert_eq!(digit_map(HinduArabic).as_string(), "0123456789");
        assert_eq!(digit_map(Thai).as_string(), "๐๑๒๓๔๕๖๗๘๙");
        assert_eq!(digit_map(Bengali).as_string(), "০১২৩৪৫৬৭৮৯");
        assert_eq!(digit_map(Javanese).as_string(), "꧐꧑꧒꧓꧔꧕꧖꧗꧘꧙");
        assert_eq!(digit_map(OlChiki).as_string(), "᱐᱑᱒᱓᱔᱕᱖᱗᱘᱙");
        assert_eq!(digit_map(ChineseSimplified).as_string(), "〇一二三四五六七八九");
        assert_eq!(digit_map(Osmanya).glyphs[9] as u32, 0x104A9);
        assert_eq!(digit_map(Adlam).glyphs[0] as u32, 0x1E950);
    }

    #[test]
    fn codepoint_lookup() {
        assert_eq!(script_of_codepoint('७'), Some((Devanagari, 7)));
        assert_eq!(script_of_codepoint('x'), None);
        assert_eq!(script_of_codepoint('۳'), Some((PersoArabic, 3)));
        assert_eq!(script_of_codepoint('零'), Some((ChineseSimplified, 0)));
        assert_eq!(script_of_codepoint('十'), None);
        // Arabic-Indic (U+0660) is a different block from Perso-Arabic.
        assert_eq!(script_of_codepoint('\u{0663}'), None);
    }

    #[test]
    fn languages() {
        assert_eq!(language_for(ChineseSimplified), "Mandarin");
        assert_eq!(language_for(Osmanya), "Somali");
        assert_eq!(language_for(HinduArabic), "English");
        assert_eq!(language_for(Devanagari), "Hindi");
        assert_eq!(language_for(Nko), "Maninka");
    }

    #[test]
    fn every_glyph_maps_back_to_its_script() {
        let mut seen = HashSet::new();
        for script in ScriptId::ALL {
            for (v, glyph) in digit_map(script).glyphs.into_iter().enumerate() {
                assert_eq!(script_of_codepoint(glyph), Some((script, v as u8)));
                assert!(seen.insert(glyph), "{glyph} registered twice");
            }
        }
        assert_eq!(seen.len(), 210);
    }

    #[test]
    fn positional_runs_are_contiguous() {
        for script in ScriptId::ALL.into_iter().filter(|s| s.is_positional()) {
            let g = digit_map(script).glyphs;
            for k in 0..10 {
                assert_eq!(g[k] as u32, g[0] as u32 + k as u32);
            }
        }
    }

    #[test]
    fn registry_is_complete() {
        assert_eq!(ScriptId::ALL.len(), 21);
        let names: HashSet<_> = ScriptId::ALL.iter().map(|s| s.id()).collect();
        assert_eq!(names.len(), 21);
        for (i, script) in ScriptId::ALL.into_iter().enumerate() {
            assert_eq!(script as usize, i);
            assert_eq!(script.meta().script, script);
            assert!((0.0..=1.0).contains(&script.meta().corpus_share));
        }
    }

    #[test]
    fn chinese_multipliers_increase() {
        let exps: Vec<u32> = CHINESE.multipliers.iter().map(|m| m.1).collect();
        assert_eq!(exps, vec![1, 2, 3, 4, 8]);
    }

    #[test]
    fn names_parse() {
        assert_eq!("perso-arabic".parse::<ScriptId>().unwrap(), PersoArabic);
        assert_eq!("N'Ko".parse::<ScriptId>().unwrap(), Nko);
        assert_eq!("Hindi".parse::<ScriptId>().unwrap(), Devanagari);
        assert_eq!("Oriya".parse::<ScriptId>().unwrap(), Odia);
        assert!("Osage".parse::<ScriptId>().is_err());
        for s in ScriptId::ALL {
            assert_eq!(s.id().parse::<ScriptId>().unwrap(), s);
        }
    }

    #[test]
    fn audit_table_has_one_row_per_script() {
        let table = registry_table();
        assert_eq!(table.lines().count(), 22);
        assert!(table.contains("Devanagari\t०१२३४५६७८९\tU+0966\tHindi\t0.091"));
    }
}
