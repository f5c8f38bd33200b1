mod collect;
mod error;
mod files;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use numeral_core::bench::{
    generate_cases, render_format_suite, render_script_suite, GenerationConfig, PromptCatalog, PromptStrategy,
    RenderedPrompt, Variant,
};
use numeral_core::corpus::{sample_path, scan_formats, scan_scripts, CorpusError, CorpusReport, ScanOptions};
use numeral_core::format::{self, ParseMode};
use numeral_core::regression::{build_design, design_matrix, fit, FeatureSelection, TokenizationScheme};
use numeral_core::scoring::{aggregate, score_all, ModelResponse, ScoreRecord};
use numeral_core::script::registry_table;
use numeral_core::{
    classify, from_script, identify_script, language_for, to_script, ExactDecimal, ExpressionCase, FormatId,
    NumeralString, ScriptId,
};

use crate::collect::{collect, RunConfig, API_KEY_VAR};
use crate::error::{CliError, EXIT_USAGE};
use crate::files::{emit, emit_records, read_all_records, read_records, read_text};

/// Numeral scripts, locale number formats and the arithmetic benchmark
/// pipeline.
#[derive(Debug, Parser)]
#[command(name = "numerals", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a numeral from one script to another.
    Translit {
        #[arg(long)]
        from: ScriptId,
        #[arg(long)]
        to: ScriptId,
        text: String,
    },
    /// Name the script of a numeral, with the language used for it.
    Identify { text: String },
    /// Render a plain decimal value in a locale format.
    Fmt {
        #[arg(long)]
        format: FormatId,
        value: ExactDecimal,
    },
    /// Parse formatted text into a plain decimal value.
    Parse {
        #[arg(long)]
        format: FormatId,
        /// Tolerate missing grouping separators and surrounding space.
        #[arg(long)]
        lenient: bool,
        text: String,
    },
    /// List every format under which the text parses.
    Classify { text: String },
    /// Print the script registry as a tab-separated table.
    Scripts,
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Score collected responses against a suite.
    Score {
        #[arg(long, required = true)]
        suite: Vec<PathBuf>,
        #[arg(long, required = true)]
        responses: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Accuracy tables from score records.
    Report {
        #[arg(long, required = true)]
        scores: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Corpus(CorpusCommand),
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Debug, Subcommand)]
enum BenchCommand {
    /// Generate arithmetic cases.
    Generate {
        /// TOML file with generation settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases_per_op: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the numeral-script suite.
    RenderScripts {
        #[command(flatten)]
        common: RenderArgs,
        /// Defaults to all 21 scripts.
        #[arg(long, value_delimiter = ',')]
        scripts: Vec<ScriptId>,
    },
    /// Render the number-format suite.
    RenderFormats {
        #[command(flatten)]
        common: RenderArgs,
        /// Defaults to F1 through F6.
        #[arg(long, value_delimiter = ',')]
        formats: Vec<FormatId>,
    },
    /// Send every prompt of a suite to a chat endpoint.
    Collect {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        /// Existing responses here are kept and not requested again.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long)]
    cases: PathBuf,
    /// Defaults to every strategy of the track.
    #[arg(long, value_delimiter = ',')]
    strategies: Vec<PromptStrategy>,
    /// TSV of operator and rounding phrases layered over the built-in ones.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CorpusCommand {
    /// Share of digit occurrences per numeral script.
    ScanScripts(ScanArgs),
    /// Share of unambiguous numerals per locale format.
    ScanFormats(ScanArgs),
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// A file or a directory; `.jsonl` files hold one `{"text": ...}` per line.
    path: PathBuf,
    #[arg(long, default_value_t = 500_000)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Average per-document shares instead of pooling counts.
    #[arg(long)]
    per_document: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum AnalyzeCommand {
    /// Fit the logistic model of correctness.
    Fit {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the design matrix as CSV.
    ExportDesign {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DesignArgs {
    #[arg(long, required = true)]
    scores: Vec<PathBuf>,
    #[arg(long, required = true)]
    suite: Vec<PathBuf>,
    /// `chunk3`, `digit1`, or a TSV of `run<TAB>tokens` lines.
    #[arg(long, default_value = "chunk3")]
    tokenizer: String,
    /// Variants to drop, e.g. `HinduArabic,F1`.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<Variant>,
    #[arg(long)]
    model_dummies: bool,
    #[arg(long)]
    no_tokens_per_digit: bool,
}

fn line(s: impl AsRef<str>) -> Vec<u8> {
    let mut s = s.as_ref().to_string();
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.into_bytes()
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    line(serde_json::to_string_pretty(value).expect("serializable"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Translit { from, to, text } => {
            let value = from_script(&NumeralString::new(text, from))?;
            emit(None, &line(to_script(&value, to)?.text))
        }
        Command::Identify { text } => {
            let script = identify_script(&text)?;
            emit(None, &line(format!("{} ({})", script.display_name(), language_for(script))))
        }
        Command::Fmt { format, value } => emit(None, &line(format::render(&value, format))),
        Command::Parse { format, lenient, text } => {
            let mode = if lenient { ParseMode::Lenient } else { ParseMode::Strict };
            emit(None, &line(format::parse_with(&text, format, mode)?.to_string()))
        }
        Command::Classify { text } => emit(None, &line(classification(&text))),
        Command::Scripts => emit(None, registry_table().as_bytes()),
        Command::Bench(cmd) => bench(cmd),
        Command::Score { suite, responses, out } => {
            let suite: Vec<RenderedPrompt> = read_all_records(&suite)?;
            let responses: Vec<ModelResponse> = read_all_records(&responses)?;
            emit_records(out.as_deref(), &score_all(&responses, &suite)?)
        }
        Command::Report { scores, json, out } => {
            let records: Vec<ScoreRecord> = read_all_records(&scores)?;
            let table = aggregate(&records);
            let bytes = if json { json_bytes(&table) } else { table.to_text().into_bytes() };
            emit(out.as_deref(), &bytes)
        }
        Command::Corpus(cmd) => corpus(cmd),
        Command::Analyze(cmd) => analyze(cmd),
    }
}

fn classification(text: &str) -> String {
    let set = classify(text);
    let ids: Vec<&str> = set.iter().map(|f| f.id()).collect();
    match ids.len() {
        0 => "none".to_string(),
        1 => ids[0].to_string(),
        _ => format!("{} (ambiguous)", ids.join(" ")),
    }
}

fn bench(cmd: BenchCommand) -> Result<(), CliError> {
    match cmd {
        BenchCommand::Generate {
            config,
            seed,
            cases_per_op,
            out,
        } => {
            let mut cfg = match &config {
                Some(p) => toml::from_str::<GenerationConfig>(&read_text(p)?).map_err(|e| CliError::Config {
                    path: p.clone(),
                    reason: e.to_string(),
                })?,
                None => GenerationConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = cases_per_op {
                cfg.cases_per_op = n;
            }
            emit_records(out.as_deref(), &generate_cases(&cfg)?)
        }
        BenchCommand::RenderScripts { common, scripts } => {
            let scripts: BTreeSet<ScriptId> = if scripts.is_empty() {
                ScriptId::ALL.into_iter().collect()
            } else {
                scripts.into_iter().collect()
            };
            let strategies = strategies_or(&common.strategies, &PromptStrategy::SCRIPT_TRACK);
            let (cases, catalog) = render_inputs(&common)?;
            let suite = render_script_suite(&cases, &scripts, &strategies, &catalog)?;
            emit_records(common.out.as_deref(), &suite)
        }
        BenchCommand::RenderFormats { common, formats } => {
            let formats: BTreeSet<FormatId> = if formats.is_empty() {
                FormatId::ALL.into_iter().collect()
            } else {
                formats.into_iter().collect()
            };
            let strategies = strategies_or(&common.strategies, &PromptStrategy::FORMAT_TRACK);
            let (cases, catalog) = render_inputs(&common)?;
            let suite = render_format_suite(&cases, &formats, &strategies, &catalog)?;
            emit_records(common.out.as_deref(), &suite)
        }
        BenchCommand::Collect { config, suite, out } => {
            let cfg = RunConfig::load(&config)?;
            let suite: Vec<RenderedPrompt> = read_records(&suite)?;
            let api_key = std::env::var(API_KEY_VAR).ok().filter(|k| !k.is_empty());
            let summary = collect(&cfg, &suite, &out, api_key)?;
            eprintln!(
                "{} existing responses kept, {} requested",
                summary.existing, summary.requested
            );
            Ok(())
        }
    }
}

fn strategies_or(given: &[PromptStrategy], default: &[PromptStrategy]) -> Vec<PromptStrategy> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

fn render_inputs(args: &RenderArgs) -> Result<(Vec<ExpressionCase>, PromptCatalog), CliError> {
    let cases = read_records(&args.cases)?;
    let catalog = match &args.catalog {
        Some(p) => PromptCatalog::builtin().with_file(&read_text(p)?)?,
        None => PromptCatalog::builtin(),
    };
    Ok((cases, catalog))
}

type ScanFn = fn(Vec<String>, &ScanOptions) -> Result<CorpusReport, CorpusError>;

fn corpus(cmd: CorpusCommand) -> Result<(), CliError> {
    let (args, scan): (ScanArgs, ScanFn) = match cmd {
        CorpusCommand::ScanScripts(a) => (a, scan_scripts::<Vec<String>>),
        CorpusCommand::ScanFormats(a) => (a, scan_formats::<Vec<String>>),
    };
    if args.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let opts = ScanOptions {
        sample_size: args.sample,
        seed: args.seed,
        workers: args.workers,
        per_document: args.per_document,
    };
    let docs = sample_path(&args.path, &opts)?;
    let report = scan(docs, &opts)?;
    let bytes = if args.json {
        json_bytes(&report)
    } else {
        report.to_text().into_bytes()
    };
    emit(None, &bytes)
}

fn tokenizer(spec: &str) -> Result<TokenizationScheme, CliError> {
    match spec {
        "chunk3" => Ok(TokenizationScheme::Chunk3),
        "digit1" => Ok(TokenizationScheme::Digit1),
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(CliError::Usage(format!(
                    "tokenizer {path:?} is neither chunk3, digit1 nor an existing file"
                )));
            }
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(TokenizationScheme::external_from_tsv(&name, &read_text(p)?)?)
        }
    }
}

fn design(args: &DesignArgs) -> Result<numeral_core::regression::DesignMatrix, CliError> {
    let scheme = tokenizer(&args.tokenizer)?;
    let records: Vec<ScoreRecord> = read_all_records(&args.scores)?;
    let suite: Vec<RenderedPrompt> = read_all_records(&args.suite)?;
    let excluded: BTreeSet<Variant> = args.exclude.iter().copied().collect();
    let rows = build_design(&records, &suite, &scheme, &excluded)?;
    let features = FeatureSelection {
        tokens_per_digit: !args.no_tokens_per_digit,
        model_dummies: args.model_dummies,
    };
    Ok(design_matrix(&rows, &features))
}

fn analyze(cmd: AnalyzeCommand) -> Result<(), CliError> {
    match cmd {
        AnalyzeCommand::Fit { design: args, json, out } => {
            let result = fit(&design(&args)?)?;
            let bytes = if json { json_bytes(&result) } else { result.to_text().into_bytes() };
            emit(out.as_deref(), &bytes)
        }
        AnalyzeCommand::ExportDesign { design: args, out } => emit(out.as_deref(), design(&args)?.to_csv().as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
