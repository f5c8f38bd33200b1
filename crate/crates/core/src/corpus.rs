//! Digit-script and number-format frequencies over a document sample.
//!
//! Documents are reservoir-sampled, split into fixed-size chunks and the
//! chunks are counted on worker threads. Chunk results are merged in chunk
//! order, so reports do not depend on the number of workers.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::format::{classify, FormatId, APOSTROPHE, THIN_SPACE};
use crate::script::{script_of_codepoint, ScriptId};

const CHUNK_SIZE: usize = 256;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("the corpus contains no documents")]
    EmptyCorpus,
    #[error("sample size must be at least 1")]
    InvalidSampleSize,
    #[error("{path}:{line}: {reason}")]
    Decode { path: PathBuf, line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Uniform fixed-size sample of a stream of unknown length.
#[derive(Debug)]
pub struct Reservoir<T> {
    capacity: usize,
    seen: u64,
    rng: ChaCha8Rng,
    items: Vec<(u64, T)>,
}

impl<T> Reservoir<T> {
    pub fn new(capacity: usize, seed: u64) -> Self {
        Reservoir {
            capacity,
            seen: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            items: Vec::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn push(&mut self, item: T) {
        let index = self.seen;
        self.seen += 1;
        if self.items.len() < self.capacity {
            self.items.push((index, item));
        } else {
            let j = self.rng.random_range(0..self.seen);
            if (j as usize) < self.capacity {
                self.items[j as usize] = (index, item);
            }
        }
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    /// The sample, in stream order.
    pub fn into_items(mut self) -> Vec<T> {
        self.items.sort_by_key(|(i, _)| *i);
        self.items.into_iter().map(|(_, item)| item).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    pub sample_size: usize,
    pub seed: u64,
    pub workers: usize,
    /// Average per-document proportions instead of pooling counts.
    pub per_document: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            sample_size: 500_000,
            seed: 0,
            workers: 1,
            per_document: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusReport {
    pub documents_scanned: u64,
    pub per_document: bool,
    pub script_digit_counts: BTreeMap<ScriptId, u64>,
    pub other_digit_count: u64,
    pub script_shares: BTreeMap<ScriptId, f64>,
    pub other_script_share: f64,
    pub candidates: u64,
    pub format_counts: BTreeMap<FormatId, u64>,
    pub format_shares: BTreeMap<FormatId, f64>,
    pub ambiguous_discarded: u64,
    pub unmatched: u64,
}

#[derive(Debug, Clone, Default)]
struct ScriptTally {
    docs: u64,
    counts: BTreeMap<ScriptId, u64>,
    other: u64,
    // per-document proportion sums and the number of documents with digits
    share_sums: BTreeMap<ScriptId, f64>,
    other_share_sum: f64,
    docs_with_digits: u64,
}

impl ScriptTally {
    fn add_document(&mut self, text: &str) {
        let mut counts: BTreeMap<ScriptId, u64> = BTreeMap::new();
        let mut other = 0u64;
        for c in text.chars() {
            match script_of_codepoint(c) {
                Some((script, _)) => *counts.entry(script).or_default() += 1,
                None if get_general_category(c) == GeneralCategory::DecimalNumber => other += 1,
                None => {}
            }
        }
        self.docs += 1;
        let total: u64 = counts.values().sum::<u64>() + other;
        if total > 0 {
            self.docs_with_digits += 1;
            for (&s, &n) in &counts {
                *self.share_sums.entry(s).or_default() += n as f64 / total as f64;
            }
            self.other_share_sum += other as f64 / total as f64;
        }
        for (s, n) in counts {
            *self.counts.entry(s).or_default() += n;
        }
        self.other += other;
    }

    fn merge(&mut self, other: ScriptTally) {
        self.docs += other.docs;
        for (s, n) in other.counts {
            *self.counts.entry(s).or_default() += n;
        }
        self.other += other.other;
        for (s, x) in other.share_sums {
            *self.share_sums.entry(s).or_default() += x;
        }
        self.other_share_sum += other.other_share_sum;
        self.docs_with_digits += other.docs_with_digits;
    }
}

#[derive(Debug, Clone, Default)]
struct FormatTally {
    docs: u64,
    candidates: u64,
    counts: BTreeMap<FormatId, u64>,
    ambiguous: u64,
    unmatched: u64,
    share_sums: BTreeMap<FormatId, f64>,
    docs_with_formats: u64,
}

fn is_candidate_char(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '.' | ',' | APOSTROPHE | THIN_SPACE)
}

/// Maximal runs of ASCII digits and the marker/separator code points, with
/// leading and trailing non-digits removed. Runs without digits are dropped.
pub fn extract_candidates(text: &str) -> Vec<&str> {
    text.split(|c: char| !is_candidate_char(c))
        .map(|run| run.trim_matches(|c: char| !c.is_ascii_digit()))
        .filter(|run| !run.is_empty())
        .collect()
}

impl FormatTally {
    fn add_document(&mut self, text: &str) {
        let mut counts: BTreeMap<FormatId, u64> = BTreeMap::new();
        for candidate in extract_candidates(text) {
            self.candidates += 1;
            let formats = classify(candidate);
            match formats.len() {
                0 => self.unmatched += 1,
                1 => *counts.entry(*formats.first().unwrap()).or_default() += 1,
                _ => self.ambiguous += 1,
            }
        }
        self.docs += 1;
        let total: u64 = counts.values().sum();
        if total > 0 {
            self.docs_with_formats += 1;
            for (&f, &n) in &counts {
                *self.share_sums.entry(f).or_default() += n as f64 / total as f64;
            }
        }
        for (f, n) in counts {
            *self.counts.entry(f).or_default() += n;
        }
    }

    fn merge(&mut self, other: FormatTally) {
        self.docs += other.docs;
        self.candidates += other.candidates;
        for (f, n) in other.counts {
            *self.counts.entry(f).or_default() += n;
        }
        self.ambiguous += other.ambiguous;
        self.unmatched += other.unmatched;
        for (f, x) in other.share_sums {
            *self.share_sums.entry(f).or_default() += x;
        }
        self.docs_with_formats += other.docs_with_formats;
    }
}

fn sample<I: IntoIterator<Item = String>>(docs: I, opts: &ScanOptions) -> Result<Vec<String>, CorpusError> {
    if opts.sample_size == 0 {
        return Err(CorpusError::InvalidSampleSize);
    }
    let mut reservoir = Reservoir::new(opts.sample_size, opts.seed);
    for doc in docs {
        reservoir.push(doc);
    }
    if reservoir.seen() == 0 {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(reservoir.into_items())
}

/// Counts each fixed-size chunk on a pool of `workers` threads and merges
/// the chunk results in chunk order.
fn tally_chunks<T, F, M>(docs: &[String], workers: usize, count: F, merge: M) -> T
where
    T: Default + Send,
    F: Fn(&[String]) -> T + Sync,
    M: Fn(&mut T, T),
{
    let chunks: Vec<&[String]> = docs.chunks(CHUNK_SIZE).collect();
    let workers = workers.clamp(1, chunks.len().max(1));
    let mut results: Vec<Option<T>> = (0..chunks.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let chunks = &chunks;
                let count = &count;
                scope.spawn(move || {
                    (w..chunks.len())
                        .step_by(workers)
                        .map(|i| (i, count(chunks[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, t) in handle.join().expect("scan worker panicked") {
                results[i] = Some(t);
            }
        }
    });
    let mut total = T::default();
    for t in results.into_iter().flatten() {
        merge(&mut total, t);
    }
    total
}

fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub fn scan_scripts<I: IntoIterator<Item = String>>(docs: I, opts: &ScanOptions) -> Result<CorpusReport, CorpusError> {
    let docs = sample(docs, opts)?;
    let tally = tally_chunks(
        &docs,
        opts.workers,
        |chunk| {
            let mut t = ScriptTally::default();
            for d in chunk {
                t.add_document(d);
            }
            t
        },
        ScriptTally::merge,
    );
    let total = tally.counts.values().sum::<u64>() + tally.other;
    let (script_shares, other_script_share) = if opts.per_document {
        let n = tally.docs_with_digits;
        let shares = ScriptId::ALL
            .into_iter()
            .map(|s| (s, tally.share_sums.get(&s).map_or(0.0, |x| if n == 0 { 0.0 } else { x / n as f64 })))
            .collect();
        (shares, if n == 0 { 0.0 } else { tally.other_share_sum / n as f64 })
    } else {
        let shares = ScriptId::ALL
            .into_iter()
            .map(|s| (s, ratio(tally.counts.get(&s).copied().unwrap_or(0), total)))
            .collect();
        (shares, ratio(tally.other, total))
    };
    Ok(CorpusReport {
        documents_scanned: tally.docs,
        per_document: opts.per_document,
        script_digit_counts: ScriptId::ALL
            .into_iter()
            .map(|s| (s, tally.counts.get(&s).copied().unwrap_or(0)))
            .collect(),
        other_digit_count: tally.other,
        script_shares,
        other_script_share,
        ..CorpusReport::default()
    })
}

pub fn scan_formats<I: IntoIterator<Item = String>>(docs: I, opts: &ScanOptions) -> Result<CorpusReport, CorpusError> {
    let docs = sample(docs, opts)?;
    let tally = tally_chunks(
        &docs,
        opts.workers,
        |chunk| {
            let mut t = FormatTally::default();
            for d in chunk {
                t.add_document(d);
            }
            t
        },
        FormatTally::merge,
    );
    let counted: u64 = tally.counts.values().sum();
    let format_shares = FormatId::ALL
        .into_iter()
        .map(|f| {
            let share = if opts.per_document {
                let n = tally.docs_with_formats;
                tally.share_sums.get(&f).map_or(0.0, |x| if n == 0 { 0.0 } else { x / n as f64 })
            } else {
                ratio(tally.counts.get(&f).copied().unwrap_or(0), counted)
            };
            (f, share)
        })
        .collect();
    Ok(CorpusReport {
        documents_scanned: tally.docs,
        per_document: opts.per_document,
        candidates: tally.candidates,
        format_counts: FormatId::ALL
            .into_iter()
            .map(|f| (f, tally.counts.get(&f).copied().unwrap_or(0)))
            .collect(),
        format_shares,
        ambiguous_discarded: tally.ambiguous,
        unmatched: tally.unmatched,
        ..CorpusReport::default()
    })
}

impl CorpusReport {
    /// Tab-separated lines `section name count percent`, percentages with
    /// four decimals.
    pub fn to_text(&self) -> String {
        let mut out = format!("documents_scanned\t{}\n", self.documents_scanned);
        if !self.script_digit_counts.is_empty() {
            for (s, n) in &self.script_digit_counts {
                out.push_str(&format!("script\t{}\t{n}\t{:.4}\n", s.id(), 100.0 * self.script_shares[s]));
            }
            out.push_str(&format!(
                "script\tother\t{}\t{:.4}\n",
                self.other_digit_count,
                100.0 * self.other_script_share
            ));
        }
        if !self.format_counts.is_empty() {
            for (f, n) in &self.format_counts {
                out.push_str(&format!("format\t{f}\t{n}\t{:.4}\n", 100.0 * self.format_shares[f]));
            }
            out.push_str(&format!("candidates\t{}\n", self.candidates));
            out.push_str(&format!("ambiguous_discarded\t{}\n", self.ambiguous_discarded));
            out.push_str(&format!("unmatched\t{}\n", self.unmatched));
        }
        out
    }
}

/// Files under `path` (or `path` itself), sorted by path.
fn corpus_files(path: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let io = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    let mut stack = vec![path.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).map_err(io)? {
            let p = entry.map_err(io)?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push(p);
            }
        }
    }
    files.sort();
    Ok(files)
}

fn is_record_file(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("jsonl" | "ndjson"))
}

/// Visits every document under `path`: each plain file is one document;
/// `.jsonl` / `.ndjson` files hold one record per line with a `text` field.
pub fn for_each_document<F: FnMut(String)>(path: &Path, mut visit: F) -> Result<(), CorpusError> {
    #[derive(Deserialize)]
    struct Record {
        text: String,
    }
    for file in corpus_files(path)? {
        let io = |source| CorpusError::Io {
            path: file.clone(),
            source,
        };
        if is_record_file(&file) {
            let reader = BufReader::new(fs::File::open(&file).map_err(io)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: Record = serde_json::from_str(&line).map_err(|e| CorpusError::Decode {
                    path: file.clone(),
                    line: i + 1,
                    reason: e.to_string(),
                })?;
                visit(record.text);
            }
        } else {
            let bytes = fs::read(&file).map_err(io)?;
            visit(String::from_utf8_lossy(&bytes).into_owned());
        }
    }
    Ok(())
}

/// Reads all documents under `path` and samples them while streaming.
pub fn sample_path(path: &Path, opts: &ScanOptions) -> Result<Vec<String>, CorpusError> {
    if opts.sample_size == 0 {
        return Err(CorpusError::InvalidSampleSize);
    }
    let mut reservoir = Reservoir::new(opts.sample_size, opts.seed);
    for_each_document(path, |doc| reservoir.push(doc))?;
    if reservoir.seen() == 0 {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(reservoir.into_items())
}
