//! Command-line front end for `nonplanarity-core`.
//!
//! Every subcommand produces one JSON report. Reports echo their inputs and
//! budgets and carry no wall-clock data unless `--timings` is given, so the
//! same invocation always prints the same bytes.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use nonplanarity_core::exactlinalg::Rat;
use nonplanarity_core::exponents::{
    baker_experiment_with, estimate_omega_with, estimate_omega_x_with, EstimateConfig,
    ExponentEstimate, RealMatrix,
};
use nonplanarity_core::groebner::GroebnerConfig;
use nonplanarity_core::paths::{path_sum_entry, verify_lemma_with, DEFAULT_LEMMA_BUDGET};
use nonplanarity_core::plucker::{enumerate_minors, MinorIndex};
use nonplanarity_core::polyring::{parse_poly, Poly, PolyMatrix};
use nonplanarity_core::strongcheck::{check_strong_with, StrongConfig};
use nonplanarity_core::weakcheck::{
    check_weak_complex_with, Parameterization, WeakConfig, WeakStatus,
};
use nonplanarity_core::words::{self, WordSystem};
use nonplanarity_core::Error;

pub const SCHEMA: &str = "nonplanarity-lab/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nonplanarity-lab",
    version,
    about = "Exact checks for matrix-monomial manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide strong nonplanarity by the exact Plücker rank test.
    StrongCheck(StrongArgs),
    /// Decide weak nonplanarity over the complex numbers.
    WeakCheck(WeakArgs),
    /// Check the path-collection ordering lemma by exhaustive search.
    LemmaVerify(LemmaArgs),
    /// Compare path sums with matrix products of generic generators.
    PathsOracle(SystemArgs),
    /// Estimate irrationality exponents of a real matrix.
    Exponents(ExponentArgs),
    /// Monte-Carlo multiplicative exponents of X ⊕ X² ⊕ ⋯ ⊕ Xⁿ.
    BakerExperiment(BakerArgs),
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    /// Matrix size.
    #[arg(short, long)]
    pub m: usize,
    /// Number of generators; defaults to the largest index used.
    #[arg(short, long)]
    pub r: Option<usize>,
    /// Word list such as "x1; x1^2" or "x1*x2; x2*x1".
    pub words: String,
}

#[derive(Args, Debug)]
pub struct StrongArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = StrongConfig::default().max_m)]
    pub max_m: usize,
    /// Cap on the total number of Plücker coordinate terms.
    #[arg(long, default_value_t = StrongConfig::default().max_terms)]
    pub max_terms: u64,
}

#[derive(Args, Debug)]
pub struct WeakArgs {
    /// JSON file {"k","m","n","entries"} with entries as polynomials in x1..xk.
    #[arg(long, conflicts_with = "inline")]
    pub param: Option<PathBuf>,
    /// The same JSON given inline.
    #[arg(long)]
    pub inline: Option<String>,
    #[arg(long, default_value_t = WeakConfig::default().max_n)]
    pub max_n: usize,
    /// Cap on S-polynomial reductions per Gröbner basis.
    #[arg(long, default_value_t = GroebnerConfig::default().max_pairs)]
    pub max_pairs: u64,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Row set of a single minor, e.g. "1,2". Requires --cols.
    #[arg(long, requires = "cols")]
    pub rows: Option<String>,
    /// Column set of a single minor, e.g. "1,4".
    #[arg(long, requires = "rows")]
    pub cols: Option<String>,
    /// Without --rows/--cols, check every minor up to this size.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Search nodes allowed per minor.
    #[arg(long, default_value_t = DEFAULT_LEMMA_BUDGET)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExponentKind {
    Omega,
    OmegaX,
    Both,
}

#[derive(Args, Debug)]
pub struct ExponentArgs {
    #[arg(short, long)]
    pub m: usize,
    #[arg(short, long)]
    pub n: usize,
    /// Rows separated by ';', entries by ','. Decimals and fractions are
    /// read exactly unless --approx is given.
    #[arg(long)]
    pub matrix: String,
    /// Search bound Q on ‖q‖∞.
    #[arg(short = 'Q', long = "q-max")]
    pub q_max: u64,
    /// Inner radius of the scanned shell; defaults to ⌈√Q⌉.
    #[arg(long)]
    pub q_min: Option<u64>,
    /// Treat entries as floating-point values only.
    #[arg(long)]
    pub approx: bool,
    /// Lower bound on Π (|q_j| ∨ 1) for scanned q.
    #[arg(long)]
    pub min_height: Option<u64>,
    #[arg(long, value_enum, default_value_t = ExponentKind::Both)]
    pub kind: ExponentKind,
    #[arg(long, default_value_t = EstimateConfig::default().tolerance)]
    pub tolerance: f64,
    #[arg(long, default_value_t = EstimateConfig::default().max_candidates)]
    pub max_candidates: u64,
}

#[derive(Args, Debug)]
pub struct BakerArgs {
    #[arg(short, long)]
    pub m: usize,
    /// Number of powers X, X², …, Xⁿ.
    #[arg(short, long)]
    pub n: usize,
    #[arg(short = 'Q', long = "q-max")]
    pub q_max: u64,
    #[arg(long)]
    pub q_min: Option<u64>,
    #[arg(long)]
    pub min_height: Option<u64>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// A sample used before the random ones, row-major and comma separated.
    /// May be repeated.
    #[arg(long)]
    pub force: Vec<String>,
    #[arg(long, default_value_t = EstimateConfig::default().max_candidates)]
    pub max_candidates: u64,
}

/// A finished run: the report and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::StrongCheck(_) => "strong-check",
            Command::WeakCheck(_) => "weak-check",
            Command::LemmaVerify(_) => "lemma-verify",
            Command::PathsOracle(_) => "paths-oracle",
            Command::Exponents(_) => "exponents",
            Command::BakerExperiment(_) => "baker-experiment",
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let body = match &cli.command {
        Command::StrongCheck(a) => strong_check(a),
        Command::WeakCheck(a) => weak_check(a),
        Command::LemmaVerify(a) => lemma_verify(a),
        Command::PathsOracle(a) => paths_oracle(a),
        Command::Exponents(a) => exponents(a),
        Command::BakerExperiment(a) => baker(a),
    };
    let (mut report, code) = match body {
        Ok(v) => (v, EXIT_OK),
        Err(CliError::Input(msg)) => (
            json!({ "error": { "kind": "input", "message": msg } }),
            EXIT_INPUT,
        ),
        Err(CliError::Budget(msg)) => (
            json!({ "error": { "kind": "budget", "message": msg } }),
            EXIT_BUDGET,
        ),
    };
    let obj = report.as_object_mut().expect("reports are objects");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("subcommand".into(), json!(cli.command.name()));
    if cli.timings {
        obj.insert(
            "timings".into(),
            json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 }),
        );
    }
    Outcome { report, code }
}

/// Parses a word list for matrix size `m`.
pub fn parse_words(text: &str, m: usize, r: Option<usize>) -> CliResult<WordSystem> {
    Ok(words::parse_words(text, m, r)?)
}

fn system(a: &SystemArgs) -> CliResult<WordSystem> {
    parse_words(&a.words, a.m, a.r)
}

fn system_inputs(ws: &WordSystem) -> Value {
    json!({ "m": ws.m(), "r": ws.r(), "n": ws.n(), "words": ws.to_string() })
}

fn rat_json(x: &Rat) -> Value {
    json!(x.to_string())
}

fn strong_check(a: &StrongArgs) -> CliResult<Value> {
    let ws = system(&a.system)?;
    let cfg = StrongConfig {
        max_m: a.max_m,
        max_terms: a.max_terms,
    };
    let v = check_strong_with(&ws, &cfg)?;
    let witness = v.witness.as_ref().map(|_| {
        v.witness_terms()
            .into_iter()
            .map(|(d, c)| json!({ "minor": d.to_string(), "coefficient": rat_json(c) }))
            .collect::<Vec<_>>()
    });
    Ok(json!({
        "inputs": system_inputs(&ws),
        "budgets": { "max_m": cfg.max_m, "max_terms": cfg.max_terms },
        "verdict": if v.is_strongly_nonplanar { "strongly_nonplanar" } else { "not_strongly_nonplanar" },
        "rank": v.rank,
        "c": v.c,
        "monomials": v.monomials,
        "kernel_dim": v.kernel_dim,
        "distinct_abelianizations": ws.distinct_abelianizations(),
        "witness": witness,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    k: usize,
    m: usize,
    n: usize,
    entries: Vec<Vec<String>>,
}

/// Parses `{"k", "m", "n", "entries"}` with entries as polynomials in `x1..xk`.
pub fn parse_parameterization(text: &str) -> CliResult<Parameterization> {
    let raw: ParamFile = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("parameterisation: {e}")))?;
    if raw.entries.len() != raw.m || raw.entries.iter().any(|r| r.len() != raw.n) {
        return Err(CliError::Input(format!(
            "entries must form a {}x{} array",
            raw.m, raw.n
        )));
    }
    let rows = raw
        .entries
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_poly(s))
                .collect::<Result<Vec<Poly>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Parameterization::new(raw.k, PolyMatrix::from_rows(rows)?)?)
}

pub fn load_parameterization(path: &Path) -> CliResult<Parameterization> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_parameterization(&text)
}

fn weak_check(a: &WeakArgs) -> CliResult<Value> {
    let f = match (&a.param, &a.inline) {
        (Some(p), _) => load_parameterization(p)?,
        (None, Some(t)) => parse_parameterization(t)?,
        (None, None) => return Err(CliError::Input("give --param FILE or --inline JSON".into())),
    };
    let cfg = WeakConfig {
        max_n: a.max_n,
        groebner: GroebnerConfig {
            max_pairs: a.max_pairs,
        },
    };
    let v = check_weak_complex_with(&f, &cfg)?;
    let entries: Vec<Vec<String>> = (0..f.m())
        .map(|i| {
            (0..f.n())
                .map(|j| f.entries().get(i, j).to_string())
                .collect()
        })
        .collect();
    let (status, note) = match v.status {
        WeakStatus::WeaklyNonplanarComplex => (
            "weakly_nonplanar_complex",
            "no nonzero complex (A, B) exists",
        ),
        WeakStatus::ComplexSolutionExists => (
            "complex_solution_exists",
            "a nonzero complex (A, B) exists; inconclusive for real (A, B)",
        ),
    };
    Ok(json!({
        "inputs": { "k": f.k(), "m": f.m(), "n": f.n(), "entries": entries },
        "budgets": { "max_n": cfg.max_n, "max_pairs": cfg.groebner.max_pairs },
        "status": status,
        "note": note,
        "free_variable": v.free_variable.map(|x| x.to_string()),
        "ideal": v.ideal.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "tested": v.tested.iter().map(|(x, ok)| json!({ "variable": x.to_string(), "in_radical": ok })).collect::<Vec<_>>(),
    }))
}

fn index_list(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("bad index list {text:?}")))
        })
        .collect()
}

fn lemma_verify(a: &LemmaArgs) -> CliResult<Value> {
    let ws = system(&a.system)?;
    let minors = match (&a.rows, &a.cols) {
        (Some(r), Some(c)) => vec![MinorIndex::new(index_list(r)?, index_list(c)?)?],
        _ => {
            let cap = a.max_size.unwrap_or(usize::MAX);
            enumerate_minors(ws.m(), ws.width())
                .into_iter()
                .filter(|d| d.size() <= cap)
                .collect()
        }
    };
    let mut results = Vec::with_capacity(minors.len());
    let mut all = true;
    for d in &minors {
        let c = verify_lemma_with(&ws, d, a.budget)?;
        all &= c.holds;
        results.push(json!({
            "minor": d.to_string(),
            "f_value": c.f_value,
            "holds": c.holds,
            "witness": c.witness.to_string(),
            "collections": c.collections,
            "counterexample": c.counterexample.map(|p| p.to_string()),
        }));
    }
    Ok(json!({
        "inputs": system_inputs(&ws),
        "budgets": { "search_nodes_per_minor": a.budget, "max_size": a.max_size },
        "all_hold": all,
        "results": results,
    }))
}

fn paths_oracle(a: &SystemArgs) -> CliResult<Value> {
    let ws = system(a)?;
    let gens = ws.generic_generators()?;
    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    for label in 1..=ws.n() {
        let p = ws.word(label).evaluate(&gens)?;
        for i in 1..=ws.m() {
            for t in 1..=ws.m() {
                checked += 1;
                if &path_sum_entry(&ws, i, t, label)? != p.get(i - 1, t - 1) {
                    mismatches.push(json!({ "label": label, "row": i, "col": t }));
                }
            }
        }
    }
    Ok(json!({
        "inputs": system_inputs(&ws),
        "entries_checked": checked,
        "all_equal": mismatches.is_empty(),
        "mismatches": mismatches,
    }))
}

/// Parses "a, b; c, d" into an `rows×cols` matrix. Entries may be integers,
/// decimals, fractions or constant expressions; without `approx` the exact
/// rational values are kept for zero-residual rechecks.
pub fn parse_real_matrix(
    text: &str,
    rows: usize,
    cols: usize,
    approx: bool,
) -> CliResult<RealMatrix> {
    let mut vals = Vec::new();
    let lines: Vec<&str> = text.split(';').collect();
    if lines.len() != rows {
        return Err(CliError::Input(format!(
            "expected {rows} rows, found {}",
            lines.len()
        )));
    }
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != cols {
            return Err(CliError::Input(format!(
                "expected {cols} entries in row {line:?}"
            )));
        }
        for cell in cells {
            let p = parse_poly(cell)?;
            if !p.vars().is_empty() {
                return Err(CliError::Input(format!(
                    "matrix entry {cell:?} is not a constant"
                )));
            }
            vals.push(p.constant_term());
        }
    }
    let m = RealMatrix::from_rationals(rows, cols, vals)?;
    if approx {
        Ok(RealMatrix::new(rows, cols, m.values().to_vec())?)
    } else {
        Ok(m)
    }
}

fn estimate_json(e: &ExponentEstimate) -> Value {
    json!({
        "value": if e.infinite { Value::Null } else { json!(e.value) },
        "infinite": e.infinite,
        "best_q": e.best_q,
        "best_p": e.best_p,
        "q_min": e.q_min,
        "q_max": e.q_max,
        "candidates": e.candidates,
    })
}

fn exponents(a: &ExponentArgs) -> CliResult<Value> {
    let mat = parse_real_matrix(&a.matrix, a.m, a.n, a.approx)?;
    let cfg = EstimateConfig {
        q_min: a.q_min,
        tolerance: a.tolerance,
        max_candidates: a.max_candidates,
        min_height: a.min_height,
    };
    let omega = match a.kind {
        ExponentKind::OmegaX => Value::Null,
        _ => estimate_json(&estimate_omega_with(&mat, a.q_max, &cfg)?),
    };
    let omega_x = match a.kind {
        ExponentKind::Omega => Value::Null,
        _ => estimate_json(&estimate_omega_x_with(&mat, a.q_max, &cfg)?),
    };
    Ok(json!({
        "inputs": { "m": a.m, "n": a.n, "matrix": a.matrix, "q_max": a.q_max, "q_min": a.q_min, "min_height": a.min_height, "approx": a.approx },
        "budgets": { "max_candidates": cfg.max_candidates, "tolerance": cfg.tolerance },
        "omega": omega,
        "omega_x": omega_x,
    }))
}

fn baker(a: &BakerArgs) -> CliResult<Value> {
    let forced = a
        .force
        .iter()
        .map(|s| {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Input(format!("bad sample {s:?}")))
                })
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let cfg = EstimateConfig {
        q_min: a.q_min,
        max_candidates: a.max_candidates,
        min_height: a.min_height,
        ..EstimateConfig::default()
    };
    let r = baker_experiment_with(a.m, a.n, a.q_max, a.trials, a.seed, &forced, &cfg)?;
    let trials: Vec<Value> = r
        .trials
        .iter()
        .map(|t| json!({ "sample": t.sample, "estimate": estimate_json(&t.estimate) }))
        .collect();
    Ok(json!({
        "inputs": { "m": a.m, "n": a.n, "q_max": a.q_max, "q_min": r.q_min, "min_height": a.min_height, "trials": a.trials, "seed": a.seed, "forced": forced },
        "budgets": { "max_candidates": cfg.max_candidates },
        "median": r.median,
        "max": r.max,
        "infinite_count": r.infinite_count,
        "trials": trials,
    }))
}
