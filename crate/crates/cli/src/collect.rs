//! Posting rendered prompts to a chat-completions endpoint.
//!
//! Request body: `{"model", "messages": [{"role": "system", ...}, {"role":
//! "user", ...}], "temperature", "max_tokens"}`. The reply text is
//! `choices[0].message.content`; a `finish_reason` of `"length"` marks the
//! response as truncated. The credential, if set, is sent as a bearer token
//! from [`API_KEY_VAR`].

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use numeral_core::bench::{PromptStrategy, RenderedPrompt, Track, Variant};
use numeral_core::scoring::ModelResponse;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::files::{atomic_write, jsonl_bytes, read_records};

pub const API_KEY_VAR: &str = "NUMERAL_API_KEY";
const CHECKPOINT_EVERY: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub endpoint: String,
    pub model: String,
    /// Defaults to 0.7 for script suites and 0.3 for format suites.
    #[serde(default)]
    pub temperature: Option<f64>,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default = "default_concurrency")]
    pub concurrency: usize,
    /// First retry delay; doubles on each further attempt.
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

fn default_max_tokens() -> u32 {
    1024
}
fn default_timeout() -> f64 {
    60.0
}
fn default_retries() -> u32 {
    3
}
fn default_concurrency() -> usize {
    4
}
fn default_backoff() -> u64 {
    500
}

pub fn default_temperature(track: Track) -> f64 {
    match track {
        Track::Script => 0.7,
        Track::Format => 0.3,
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = crate::files::read_text(path)?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        cfg.validate().map_err(|reason| CliError::Config {
            path: path.to_path_buf(),
            reason,
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(t) = self.temperature {
            if !(0.0..=2.0).contains(&t) {
                return Err(format!("temperature {t} is outside [0, 2]"));
            }
        }
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err("timeout_secs must be positive".into());
        }
        if self.concurrency == 0 {
            return Err("concurrency must be at least 1".into());
        }
        if self.max_tokens == 0 {
            return Err("max_tokens must be at least 1".into());
        }
        if !self.endpoint.starts_with("http://") && !self.endpoint.starts_with("https://") {
            return Err(format!("endpoint {:?} is not an http(s) URL", self.endpoint));
        }
        Ok(())
    }
}

type Key = (u64, Variant, PromptStrategy, String);

fn key_of(r: &ModelResponse) -> Key {
    (r.case_id, r.variant, r.strategy, r.model_id.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectSummary {
    pub existing: usize,
    pub requested: usize,
}

struct Client {
    agent: ureq::Agent,
    endpoint: String,
    api_key: Option<String>,
    retries: u32,
    backoff: Duration,
}

enum Attempt {
    Done(Value),
    Retry(String),
    Fatal(String),
}

impl Client {
    fn new(cfg: &RunConfig, api_key: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(cfg.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        Client {
            agent,
            endpoint: cfg.endpoint.clone(),
            api_key,
            retries: cfg.retries,
            backoff: Duration::from_millis(cfg.backoff_ms),
        }
    }

    fn attempt(&self, body: &Value) -> Attempt {
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = match req.send_json(body) {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status().as_u16();
        match status {
            200..=299 => match resp.body_mut().read_json::<Value>() {
                Ok(v) => Attempt::Done(v),
                Err(e) => Attempt::Fatal(format!("unreadable response body: {e}")),
            },
            408 | 429 | 500..=599 => Attempt::Retry(format!("HTTP {status}")),
            _ => {
                let text = resp.body_mut().read_to_string().unwrap_or_default();
                Attempt::Fatal(format!("HTTP {status}: {}", text.trim()))
            }
        }
    }

    fn complete(&self, body: &Value) -> Result<Value, String> {
        let mut delay = self.backoff;
        let mut tries = 0;
        loop {
            match self.attempt(body) {
                Attempt::Done(v) => return Ok(v),
                Attempt::Fatal(e) => return Err(e),
                Attempt::Retry(e) if tries >= self.retries => return Err(e),
                Attempt::Retry(_) => {
                    tries += 1;
                    thread::sleep(delay);
                    delay = delay.saturating_mul(2);
                }
            }
        }
    }
}

fn request_body(cfg: &RunConfig, temperature: f64, prompt: &RenderedPrompt) -> Value {
    json!({
        "model": cfg.model,
        "messages": [
            {"role": "system", "content": prompt.system_text},
            {"role": "user", "content": prompt.user_text},
        ],
        "temperature": temperature,
        "max_tokens": cfg.max_tokens,
    })
}

/// Reads the first choice. A missing or null `content` is an empty reply.
pub fn parse_completion(v: &Value) -> Result<(String, bool), String> {
    let choice = v
        .get("choices")
        .and_then(|c| c.get(0))
        .ok_or_else(|| "response has no choices[0]".to_string())?;
    let text = choice
        .get("message")
        .and_then(|m| m.get("content"))
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    let truncated = choice.get("finish_reason").and_then(Value::as_str) == Some("length");
    Ok((text, truncated))
}

/// Suite order of each (case, variant, strategy); output sorts by case id
/// and then by this rank.
fn sort_responses(responses: &mut [ModelResponse], suite: &[RenderedPrompt]) {
    let rank: HashMap<(u64, Variant, PromptStrategy), usize> = suite
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.case_id, p.variant, p.strategy), i))
        .collect();
    responses.sort_by(|a, b| {
        let ra = rank.get(&(a.case_id, a.variant, a.strategy)).copied().unwrap_or(usize::MAX);
        let rb = rank.get(&(b.case_id, b.variant, b.strategy)).copied().unwrap_or(usize::MAX);
        (a.case_id, ra, &a.model_id).cmp(&(b.case_id, rb, &b.model_id))
    });
}

fn save(out: &Path, responses: &mut [ModelResponse], suite: &[RenderedPrompt]) -> Result<(), CliError> {
    sort_responses(responses, suite);
    atomic_write(out, &jsonl_bytes(responses))
}

/// Collects a response for every prompt of `suite` not already answered by
/// `cfg.model` in `out`. Progress is checkpointed to `out` as results arrive.
pub fn collect(
    cfg: &RunConfig,
    suite: &[RenderedPrompt],
    out: &Path,
    api_key: Option<String>,
) -> Result<CollectSummary, CliError> {
    let mut responses: Vec<ModelResponse> = if out.exists() {
        read_records(out)?
    } else {
        Vec::new()
    };
    let existing = responses.len();
    let done: HashSet<Key> = responses.iter().map(key_of).collect();
    let pending: Vec<&RenderedPrompt> = suite
        .iter()
        .filter(|p| !done.contains(&(p.case_id, p.variant, p.strategy, cfg.model.clone())))
        .collect();
    if pending.is_empty() {
        return Ok(CollectSummary {
            existing,
            requested: 0,
        });
    }
    let temperature = cfg
        .temperature
        .unwrap_or_else(|| default_temperature(pending[0].strategy.track()));
    let client = Client::new(cfg, api_key);
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<Result<ModelResponse, String>>();

    let mut failures: Vec<String> = Vec::new();
    let mut since_checkpoint = 0;
    let mut write_error = None;
    thread::scope(|s| {
        for _ in 0..cfg.concurrency.min(pending.len()) {
            let tx = tx.clone();
            let (client, next, pending) = (&client, &next, &pending);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(prompt) = pending.get(i) else { break };
                let result = client
                    .complete(&request_body(cfg, temperature, prompt))
                    .and_then(|v| parse_completion(&v))
                    .map(|(raw_text, truncated)| ModelResponse {
                        case_id: prompt.case_id,
                        variant: prompt.variant,
                        strategy: prompt.strategy,
                        model_id: cfg.model.clone(),
                        raw_text,
                        truncated,
                    })
                    .map_err(|e| format!("case {} / {} / {}: {e}", prompt.case_id, prompt.variant, prompt.strategy));
                if tx.send(result).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for result in rx {
            match result {
                Ok(r) => {
                    responses.push(r);
                    since_checkpoint += 1;
                    if since_checkpoint >= CHECKPOINT_EVERY && write_error.is_none() {
                        since_checkpoint = 0;
                        if let Err(e) = save(out, &mut responses, suite) {
                            write_error = Some(e);
                        }
                    }
                }
                Err(e) => failures.push(e),
            }
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }
    save(out, &mut responses, suite)?;
    if !failures.is_empty() {
        return Err(CliError::Network {
            failed: failures.len(),
            attempted: pending.len(),
            first: failures.swap_remove(0),
        });
    }
    Ok(CollectSummary {
        existing,
        requested: pending.len(),
    })
}
