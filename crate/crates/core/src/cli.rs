//! Command-line frontend. Every invocation prints one JSON [`Report`].
//!
//! Formats: words and parabolic subsets are comma-separated 0-based indices
//! (an empty string or `-` is the empty set); polynomials use the text form
//! `c*x^[a1,...,ar] + ...`; a Bott-Samelson sequence lists its parabolics
//! separated by `|`, e.g. `-|0|-|1|-`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bimodule::{BSBimodule, BSSequence};
use crate::laurent::{self, LaurentPoly};
use crate::polymat::PolyMatrix;
use crate::rootdata::{DiagramAutomorphism, Parabolic, RawDatum, RootDatum};
use crate::schur::{self, CosetCombination};
use crate::steinberg::{self, BasisOptions};
use crate::verify::{self, Suite, VerifyOptions};
use crate::weyl::{self, WeylElement};

const AFTER_HELP: &str = "\
Formats:
  word / parabolic   comma-separated 0-based simple-root indices, '-' or '' for none
  polynomial         terms 'c*x^[a1,...,ar]' joined by ' + ', e.g. '1*x^[1] + 1*x^[-1]'
  sequence           parabolics P(0)|Q(0)|P(1)|...|P(n+1), e.g. '-|0|-|1|-'
  datum              --config FILE (JSON: rank, simple_roots, simple_coroots, labels,
                     optional automorphisms) or --type NAME (A<n>, B<n>, C<n>, D<n>,
                     G2, A1xA1, affineA1)

Exit codes: 0 ok/verified, 1 failed, 2 usage error.";

#[derive(Parser, Debug)]
#[command(name = "kmsoergel", version, about = "Exact Kac-Moody Weyl group, Demazure and Bott-Samelson bimodule computations", after_help = AFTER_HELP)]
pub struct Cli {
    /// Root-datum JSON file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Built-in root datum, used when no config file is given.
    #[arg(long = "type", global = true)]
    pub datum_type: Option<String>,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Length bound for enumerations in possibly infinite groups.
    #[arg(long, global = true, default_value_t = 10)]
    pub max_len: usize,
    /// Worker threads (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Validate the root datum and print its Cartan matrix.
    Validate,
    /// Reduced word, length and action of an element, or an enumeration.
    Weyl(WeylArgs),
    /// Minimal double coset representatives of W_J \ W / W_K.
    Cosets(CosetArgs),
    /// Apply the Demazure operator of a word to a polynomial.
    Demazure(DemazureArgs),
    /// Weyl character of a dominant weight.
    Character(CharacterArgs),
    /// Verified basis of R^{W_J} over R^{W_J'}.
    Steinberg(SteinbergArgs),
    /// Bott-Samelson bimodule: rank, basis and right actions.
    Bsbim(BsbimArgs),
    /// Convolution of double-coset indicators at q = 1.
    Schur(SchurArgs),
    /// Run self-check suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct WeylArgs {
    /// Word to reduce.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Enumerate W_J up to --max-len instead.
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub parabolic: String,
}

#[derive(Args, Debug, Serialize)]
pub struct CosetArgs {
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub left: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub right: String,
    /// Report the minimal representative of this word's double coset.
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct DemazureArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Args, Debug, Serialize)]
pub struct CharacterArgs {
    /// Highest weight, comma-separated lattice coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: String,
    /// Levi to take the character of; defaults to all simple roots.
    #[arg(long, allow_hyphen_values = true)]
    pub parabolic: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SteinbergArgs {
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub sub: String,
    #[arg(long, allow_hyphen_values = true)]
    pub sup: Option<String>,
    /// Expand this W_J-invariant polynomial in the basis.
    #[arg(long, allow_hyphen_values = true)]
    pub coordinates: Option<String>,
    #[arg(long, default_value_t = 20_000)]
    pub search_budget: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct BsbimArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub seq: String,
    /// One twist name per step ('id' or a config automorphism g0, g1, ...).
    #[arg(long, allow_hyphen_values = true)]
    pub twists: Option<String>,
    /// Right-ring elements to act by; defaults to orbit sums of ±e_k.
    #[arg(long = "act", allow_hyphen_values = true)]
    pub act: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SchurArgs {
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub left: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub middle: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub right: String,
    /// Word of the (left, middle) double coset.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub first: String,
    /// Word of the (middle, right) double coset.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub second: String,
    /// Report the rank oracle of a sequence instead.
    #[arg(long, allow_hyphen_values = true)]
    pub seq: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// pittie, demazure, characters, cosets, bimodule, schur, kacmoody or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Comma-separated built-in data; defaults to the configured datum.
    #[arg(long)]
    pub types: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 2)]
    pub max_steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Verified,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Value,
    pub inputs_digest: String,
    pub result: Value,
    pub status: Status,
    pub timing_ms: u64,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok | Status::Verified => 0,
            Status::Failed => 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Validation { .. } => "validation",
            CliError::Compute(_) => "compute",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    labels: Vec<String>,
    #[serde(default)]
    automorphisms: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub max_len: usize,
    pub search_budget: usize,
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_len: 10, search_budget: 20_000, threads: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub datum: RootDatum,
    /// Named `g0, g1, …` in file order.
    pub automorphisms: BTreeMap<String, DiagramAutomorphism>,
    pub limits: Limits,
}

impl Config {
    pub fn from_datum(datum: RootDatum) -> Self {
        Config { datum, automorphisms: BTreeMap::new(), limits: Limits::default() }
    }

    pub fn twist(&self, name: &str) -> Result<DiagramAutomorphism, CliError> {
        if name == "id" {
            return Ok(DiagramAutomorphism::identity(&self.datum));
        }
        self.automorphisms.get(name).cloned().ok_or_else(|| CliError::Usage(format!("unknown twist {name:?}")))
    }
}

pub fn parse_config_str(text: &str, path: &str) -> Result<Config, CliError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        CliError::Parse {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    })?;
    let datum = RootDatum::validate(RawDatum {
        rank: file.rank,
        simple_roots: file.simple_roots,
        simple_coroots: file.simple_coroots,
        labels: file.labels,
    })
    .map_err(|e| CliError::Validation { path: path.to_string(), message: e.to_string() })?;
    let mut automorphisms = BTreeMap::new();
    for (i, m) in file.automorphisms.iter().enumerate() {
        let g = datum
            .validate_automorphism(m)
            .map_err(|e| CliError::Validation { path: path.to_string(), message: format!("automorphism {i}: {e}") })?;
        automorphisms.insert(format!("g{i}"), g);
    }
    Ok(Config { datum, automorphisms, limits: Limits::default() })
}

pub fn parse_config(path: &Path) -> Result<Config, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation { path: shown.clone(), message: e.to_string() })?;
    parse_config_str(&text, &shown)
}

pub fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    let t = text.trim();
    if t.is_empty() || t == "-" {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad index {x:?} in {text:?}"))))
        .collect()
}

pub fn parse_parabolic(d: &RootDatum, text: &str) -> Result<Parabolic, CliError> {
    let j = Parabolic::new(parse_indices(text)?);
    d.check_indices(&j).map_err(usage)?;
    Ok(j)
}

fn parse_word(d: &RootDatum, text: &str) -> Result<WeylElement, CliError> {
    WeylElement::from_word(d, &parse_indices(text)?).map_err(usage)
}

fn parse_poly(d: &RootDatum, text: &str) -> Result<LaurentPoly, CliError> {
    LaurentPoly::parse(text, d.rank()).map_err(usage)
}

pub fn parse_sequence(config: &Config, seq: &str, twists: Option<&str>) -> Result<BSSequence, CliError> {
    let d = &config.datum;
    let parabolics = seq.split('|').map(|p| parse_parabolic(d, p)).collect::<Result<Vec<_>, _>>()?;
    let steps = parabolics.len() / 2;
    let twists = match twists {
        None => vec![DiagramAutomorphism::identity(d); steps],
        Some(t) => t.split(',').map(|n| config.twist(n.trim())).collect::<Result<Vec<_>, _>>()?,
    };
    BSSequence::new(d, parabolics, twists).map_err(|e| match e {
        crate::bimodule::BimoduleError::Malformed(m) => CliError::Usage(m),
        other => compute(other),
    })
}

fn element_json(w: &WeylElement) -> Value {
    json!({ "word": w.word(), "display": w.to_string(), "length": w.length() })
}

fn matrix_json(m: &PolyMatrix) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_text())).collect())).collect())
}

fn polys_json(v: &[LaurentPoly]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_text())).collect())
}

fn datum_json(d: &RootDatum) -> Value {
    json!({
        "rank": d.rank(),
        "labels": d.labels(),
        "cartan": d.cartan(),
        "finite_type": d.is_finite_type(&d.full()),
    })
}

/// Parses arguments and runs one command, returning stdout text and the
/// exit code. Help and version text are returned verbatim.
pub fn run_args<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => return (e.to_string(), 0),
        Err(e) => {
            let err = CliError::Usage(e.kind().to_string());
            let mut v = err.to_json();
            v["error"]["detail"] = Value::String(e.to_string());
            return (format!("{v}\n"), 2);
        }
    };
    if cli.threads > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let report = run(&cli);
    let text = if cli.pretty { render_pretty(&report) } else { serde_json::to_string(&report).expect("reports serialize") };
    (format!("{text}\n"), exit_code_of(&report))
}

/// Plain-text rendering: nested keys indented, matrices as aligned rows.
pub fn render_pretty(report: &Report) -> String {
    let mut out = String::new();
    let status = serde_json::to_value(report.status).expect("serializable");
    out.push_str(&format!("status: {}\n", status.as_str().unwrap_or_default()));
    out.push_str(&format!("digest: {}\n", report.inputs_digest));
    out.push_str(&format!("time:   {} ms\n", report.timing_ms));
    render_value(&mut out, "command", &report.command, 0);
    render_value(&mut out, "result", &report.result, 0);
    out.trim_end().to_string()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        _ => None,
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(|r| r.as_array().is_some_and(|r| r.iter().all(|x| scalar(x).is_some()))) => {
            let rows: Vec<Vec<String>> = items.iter().map(|r| r.as_array().unwrap().iter().filter_map(scalar).collect()).collect();
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            let width: Vec<usize> = (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0)).collect();
            out.push_str(&format!("{pad}{key}:\n"));
            for r in rows {
                let cells: Vec<String> = r.iter().enumerate().map(|(c, x)| format!("{x:>w$}", w = width[c])).collect();
                out.push_str(&format!("{pad}  | {} |\n", cells.join(" | ")));
            }
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                render_value(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in map {
                render_value(out, k, x, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}

fn load(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match (&cli.config, &cli.datum_type) {
        (Some(path), _) => parse_config(path)?,
        (None, Some(name)) => {
            Config::from_datum(RootDatum::standard(name).ok_or_else(|| CliError::Usage(format!("unknown built-in datum {name:?}")))?)
        }
        (None, None) => return Err(CliError::Usage("one of --config or --type is required".into())),
    };
    config.limits.max_len = cli.max_len;
    config.limits.threads = cli.threads;
    Ok(config)
}

fn digest(command: &Value, config: Option<&Config>, cli: &Cli) -> String {
    let mut h = Sha256::new();
    h.update(command.to_string());
    if let Some(c) = config {
        h.update(serde_json::to_string(&c.datum.raw()).expect("serializable"));
        for (name, g) in &c.automorphisms {
            h.update(format!("{name}:{:?}", g.matrix()));
        }
    }
    h.update(format!("max_len={};seed={}", cli.max_len, cli.seed));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Report {
    let start = Instant::now();
    let command = serde_json::to_value(&cli.command).expect("serializable");
    let needs_datum = !matches!(&cli.command, Command::Verify(v) if v.types.is_some());
    let config = if needs_datum { Some(load(cli)) } else { None };
    let inputs_digest = digest(&command, config.as_ref().and_then(|c| c.as_ref().ok()), cli);
    let outcome = match config {
        Some(Err(e)) => Err(e),
        Some(Ok(c)) => dispatch(cli, Some(&c)),
        None => dispatch(cli, None),
    };
    let (result, status) = match outcome {
        Ok(pair) => pair,
        Err(e) => (e.to_json(), Status::Failed),
    };
    Report { command, inputs_digest, result, status, timing_ms: start.elapsed().as_millis() as u64 }
}

/// Exit code for a report, distinguishing usage errors.
pub fn exit_code_of(report: &Report) -> i32 {
    if report.result.pointer("/error/kind") == Some(&json!("usage")) {
        2
    } else {
        report.exit_code()
    }
}

fn dispatch(cli: &Cli, config: Option<&Config>) -> Result<(Value, Status), CliError> {
    let need = || config.ok_or_else(|| CliError::Usage("a datum is required".into()));
    match &cli.command {
        Command::Validate => Ok((datum_json(&need()?.datum), Status::Ok)),
        Command::Weyl(a) => weyl_cmd(need()?, a),
        Command::Cosets(a) => cosets_cmd(need()?, a),
        Command::Demazure(a) => {
            let d = &need()?.datum;
            let word = parse_indices(&a.word)?;
            if let Some(&i) = word.iter().find(|&&i| i >= d.num_simple()) {
                return Err(CliError::Usage(format!("index {i} out of range")));
            }
            let f = parse_poly(d, &a.poly)?;
            let out = laurent::demazure_word(d, &word, &f).map_err(compute)?;
            Ok((json!({ "result": out.to_text() }), Status::Ok))
        }
        Command::Character(a) => {
            let d = &need()?.datum;
            let lambda: Vec<i64> = a
                .weight
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad weight {:?}", a.weight))))
                .collect::<Result<_, _>>()?;
            let j = match &a.parabolic {
                Some(p) => parse_parabolic(d, p)?,
                None => d.full(),
            };
            let ch = laurent::weyl_character(d, &j, &lambda).map_err(compute)?;
            Ok((json!({ "character": ch.to_text(), "dimension": ch.evaluate_at_one().to_string() }), Status::Ok))
        }
        Command::Steinberg(a) => steinberg_cmd(need()?, a),
        Command::Bsbim(a) => bsbim_cmd(need()?, a),
        Command::Schur(a) => schur_cmd(need()?, a),
        Command::Verify(a) => verify_cmd(cli, config, a),
    }
}

fn weyl_cmd(config: &Config, a: &WeylArgs) -> Result<(Value, Status), CliError> {
    let d = &config.datum;
    if a.enumerate {
        let j = parse_parabolic(d, &a.parabolic)?;
        let en = weyl::enumerate(d, &j, config.limits.max_len);
        let mut per_length: BTreeMap<usize, usize> = BTreeMap::new();
        for w in &en.elements {
            *per_length.entry(w.length()).or_insert(0) += 1;
        }
        return Ok((
            json!({
                "elements": en.elements.iter().map(element_json).collect::<Vec<_>>(),
                "per_length": per_length.values().collect::<Vec<_>>(),
                "complete": en.complete,
            }),
            Status::Ok,
        ));
    }
    let word = a.word.as_deref().ok_or_else(|| CliError::Usage("weyl needs --word or --enumerate".into()))?;
    let w = parse_word(d, word)?;
    let descents = |right: bool| -> Vec<usize> {
        (0..d.num_simple()).filter(|&i| if right { w.is_right_descent(d, i) } else { w.is_left_descent(d, i) }).collect()
    };
    Ok((
        json!({
            "element": element_json(&w),
            "action": w.action().rows(),
            "left_descents": descents(false),
            "right_descents": descents(true),
        }),
        Status::Ok,
    ))
}

fn cosets_cmd(config: &Config, a: &CosetArgs) -> Result<(Value, Status), CliError> {
    let d = &config.datum;
    let (j, k) = (parse_parabolic(d, &a.left)?, parse_parabolic(d, &a.right)?);
    if let Some(word) = &a.element {
        let w = parse_word(d, word)?;
        let rep = weyl::min_double_coset_rep(d, &w, &j, &k);
        return Ok((json!({ "element": element_json(&w), "representative": element_json(&rep) }), Status::Ok));
    }
    let table = weyl::double_coset_table(d, &j, &k, config.limits.max_len).map_err(compute)?;
    let mut reps = Vec::new();
    for r in &table.reps {
        let mut entry = element_json(r);
        if d.is_finite_type(&j) && d.is_finite_type(&k) {
            let (s, ok) = weyl::stabilizer_simples(d, &j, &k, r).map_err(compute)?;
            entry["stabilizer"] = json!(s.indices());
            entry["stabilizer_verified"] = json!(ok);
        }
        reps.push(entry);
    }
    Ok((json!({ "reps": reps, "complete": table.complete }), Status::Ok))
}

fn steinberg_cmd(config: &Config, a: &SteinbergArgs) -> Result<(Value, Status), CliError> {
    let d = &config.datum;
    let sub = parse_parabolic(d, &a.sub)?;
    let sup = match &a.sup {
        Some(s) => parse_parabolic(d, s)?,
        None => d.full(),
    };
    let opts = BasisOptions { search_budget: a.search_budget, ..BasisOptions::default() };
    let rb = steinberg::steinberg_basis_with(d, &sub, &sup, &opts).map_err(compute)?;
    let verified = steinberg::verify_basis(d, &rb);
    let mut result = json!({
        "reps": rb.reps.iter().map(element_json).collect::<Vec<_>>(),
        "basis": polys_json(&rb.basis),
        "gram": matrix_json(&rb.gram),
        "dual": polys_json(&rb.dual),
        "unit": { "sign": rb.unit.sign, "exponent": rb.unit.exponent },
        "strategy": rb.strategy,
        "verified": verified.is_ok(),
    });
    if let Some(text) = &a.coordinates {
        let f = parse_poly(d, text)?;
        let c = steinberg::coordinates(d, &rb, &f).map_err(compute)?;
        result["coordinates"] = polys_json(&c);
    }
    let status = if verified.is_ok() { Status::Verified } else { Status::Failed };
    Ok((result, status))
}

fn bsbim_cmd(config: &Config, a: &BsbimArgs) -> Result<(Value, Status), CliError> {
    let d = &config.datum;
    let seq = parse_sequence(config, &a.seq, a.twists.as_deref())?;
    let m = BSBimodule::build(d, &seq).map_err(compute)?;
    let elements = if a.act.is_empty() {
        m.sample_right_elements().map_err(compute)?
    } else {
        a.act.iter().map(|t| parse_poly(d, t)).collect::<Result<Vec<_>, _>>()?
    };
    let mut actions = Vec::new();
    for f in &elements {
        let mat = m.right_act(f).map_err(compute)?;
        actions.push(json!({ "element": f.to_text(), "matrix": matrix_json(&mat) }));
    }
    let total = m.total_twist();
    Ok((
        json!({
            "sequence": seq.to_string(),
            "rank": m.rank(),
            "expected_rank": seq.expected_rank(d).map_err(compute)?,
            "labels": m.basis_labels(),
            "factors": m.factors().map(|f| polys_json(&f.basis.basis)).collect::<Vec<_>>(),
            "total_twist": total.matrix().rows(),
            "actions": actions,
        }),
        Status::Ok,
    ))
}

fn schur_cmd(config: &Config, a: &SchurArgs) -> Result<(Value, Status), CliError> {
    let d = &config.datum;
    if let Some(s) = &a.seq {
        let seq = parse_sequence(config, s, None)?;
        let r = schur::rank_oracle(d, &seq).map_err(compute)?;
        return Ok((json!({ "sequence": seq.to_string(), "rank": r }), Status::Ok));
    }
    let (j, k, l) = (parse_parabolic(d, &a.left)?, parse_parabolic(d, &a.middle)?, parse_parabolic(d, &a.right)?);
    let x = CosetCombination::basis(d, &j, &k, &parse_word(d, &a.first)?);
    let y = CosetCombination::basis(d, &k, &l, &parse_word(d, &a.second)?);
    let z = schur::convolve(d, &x, &y).map_err(compute)?;
    let combo = |c: &CosetCombination| -> Value {
        Value::Array(c.coeffs().iter().map(|(w, n)| json!({ "rep": element_json(w), "coeff": n })).collect())
    };
    let expanded = z.expand(d).map_err(compute)?;
    Ok((
        json!({
            "first": combo(&x),
            "second": combo(&y),
            "product": combo(&z),
            "expanded": expanded.iter().map(|(w, n)| json!({ "element": w.to_string(), "coeff": n })).collect::<Vec<_>>(),
        }),
        Status::Ok,
    ))
}

fn verify_cmd(cli: &Cli, config: Option<&Config>, a: &VerifyArgs) -> Result<(Value, Status), CliError> {
    let suites = Suite::parse(&a.suite).ok_or_else(|| CliError::Usage(format!("unknown suite {:?}", a.suite)))?;
    let data: Vec<(String, RootDatum)> = match &a.types {
        Some(t) => t
            .split(',')
            .map(|n| {
                let n = n.trim();
                RootDatum::standard(n)
                    .map(|d| (n.to_string(), d))
                    .ok_or_else(|| CliError::Usage(format!("unknown built-in datum {n:?}")))
            })
            .collect::<Result<_, _>>()?,
        None => {
            let c = config.ok_or_else(|| CliError::Usage("verify needs --types or a datum".into()))?;
            vec![(cli.config.as_ref().map_or_else(|| cli.datum_type.clone().unwrap_or_default(), |p| p.display().to_string()), c.datum.clone())]
        }
    };
    let opts = VerifyOptions { seed: cli.seed, samples: a.samples, max_steps: a.max_steps, max_len: cli.max_len };
    let jobs: Vec<(Suite, &str, &RootDatum)> = suites
        .iter()
        .flat_map(|&s| data.iter().map(move |(n, d)| (s, n.as_str(), d)))
        .collect();
    use rayon::prelude::*;
    let reports: Vec<verify::SuiteReport> = jobs.par_iter().map(|&(s, n, d)| verify::run_suite(s, d, n, &opts)).collect();
    let ok = reports.iter().all(|r| r.passed());
    Ok((json!({ "suites": reports }), if ok { Status::Verified } else { Status::Failed }))
}
