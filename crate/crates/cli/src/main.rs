use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssg_core::engine;
use ssg_core::format;
use ssg_core::game::{infer_q, Player, Ssg, VertexId, VertexKind};
use ssg_core::generate::{self, GenSpec, SinkSet};
use ssg_core::graph;
use ssg_core::harness::{self, BenchOptions};
use ssg_core::oracle;
use ssg_core::rational;
use ssg_core::rules::{self, ArcSpec};
use ssg_core::sim::{self, ConcatStrategy, PlayStrategy};
use ssg_core::strategy::Strategy;
use ssg_core::transform;
use ssg_core::values;
use ssg_core::{Error, VERSION};

#[derive(Parser)]
#[command(name = "ssg", version, about = "Exact solvers for simple stochastic games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated game.
    Generate(GenerateArgs),
    /// Solve a game, or evaluate a given pair or best response.
    Solve(SolveArgs),
    /// Run several algorithms on one game and compare their values.
    Compare(CompareArgs),
    /// Check whether a strategy pair is optimal.
    Verify(VerifyArgs),
    /// Structural report: validation, q, zero and absorbing sets.
    Analyze(AnalyzeArgs),
    /// Build G[A,σ] or G[A,v] and write it as a game.
    Transform(TransformArgs),
    /// Optimal values by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Check that value denominators stay within q^r.
    AuditDenominators(AuditArgs),
    /// Monte-Carlo estimate of a vertex value.
    Simulate(SimulateArgs),
    /// Run a benchmark suite and check the iteration bounds.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Chain,
    Cycle,
    Coin,
    Fig1,
    Fig2,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "random")]
    family: Family,
    #[arg(long, default_value_t = 3)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(short, long, default_value_t = 2)]
    r: usize,
    #[arg(short, long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    outdeg_min: usize,
    #[arg(long, default_value_t = 3)]
    outdeg_max: usize,
    /// Comma-separated sink values such as `0,1/2,1`; {0,1} by default.
    #[arg(long)]
    sinks: Option<String>,
    /// Make every vertex reach a sink.
    #[arg(long)]
    stopping: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    /// hk-all, hk-bland, hk-random, gh, cfb, opt:<arcs>, fas, fas:<arcs>,
    /// ijma, hybrid.
    #[arg(long, default_value = "hk-all")]
    algorithm: String,
    /// Value of the pair given by --sigma and --tau.
    #[arg(long, requires_all = ["sigma", "tau"])]
    pair: bool,
    /// Values of --sigma against a best response.
    #[arg(long, requires = "sigma", conflicts_with = "pair")]
    best_response: bool,
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long)]
    tau: Option<PathBuf>,
    /// Include the iteration trace.
    #[arg(long)]
    trace: bool,
    /// Initial strategy: `default` or `dai-ge:<k>`.
    #[arg(long, default_value = "default")]
    init: String,
    /// q for ijma and hybrid; inferred when absent.
    #[arg(short, long)]
    q: Option<u64>,
    #[arg(long, default_value_t = harness::DEFAULT_PERIOD)]
    period: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    game: PathBuf,
    /// Comma-separated; all algorithms when absent.
    #[arg(long)]
    algorithms: Option<String>,
    #[arg(short, long)]
    q: Option<u64>,
    #[arg(long, default_value_t = harness::DEFAULT_PERIOD)]
    period: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    sigma: PathBuf,
    #[arg(long)]
    tau: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long, requires = "sigma")]
    tau: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    game: PathBuf,
    /// `R`, `minin`, `cover`, `dfs`, `all` or an arc file.
    #[arg(long)]
    arcs: String,
    /// A-sinks take the values of this max strategy.
    #[arg(long, conflicts_with = "values")]
    sigma: Option<PathBuf>,
    /// A-sinks take values from this JSON array of rationals.
    #[arg(long)]
    values: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
    cap: u128,
    /// Also run the pair-enumeration cross-check.
    #[arg(long)]
    cross_check: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(short, long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    game: PathBuf,
    /// Max strategy; first successors when absent.
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long)]
    tau: Option<PathBuf>,
    /// With --arcs: max plays this strategy until an arc of A is crossed.
    #[arg(long, requires = "arcs")]
    outer_sigma: Option<PathBuf>,
    #[arg(long, requires = "arcs")]
    outer_tau: Option<PathBuf>,
    #[arg(long)]
    arcs: Option<String>,
    /// Crossings before switching to the inner strategies.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long)]
    start: usize,
    #[arg(long, default_value_t = 10_000)]
    plays: usize,
    /// Steps per play; 64 |V| when absent.
    #[arg(long)]
    cutoff: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct BenchArgs {
    /// default, small, random, chains or cycles.
    #[arg(long, default_value = "default")]
    suite: String,
    #[arg(long)]
    algorithms: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    #[arg(long, default_value_t = harness::DEFAULT_PERIOD)]
    period: usize,
    /// Skip the oracle comparison.
    #[arg(long)]
    no_oracle: bool,
    #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
    cap: u128,
    #[command(flatten)]
    common: Common,
}

/// Result of a command: the report and whether its checks held.
struct Report {
    body: String,
    ok: bool,
}

impl Report {
    fn json(value: Value, ok: bool) -> Self {
        let mut body = serde_json::to_string_pretty(&value).expect("serializable");
        body.push('\n');
        Report { body, ok }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_game(path: &Path) -> anyhow::Result<Ssg> {
    Ok(format::parse(&read(path)?).with_context(|| path.display().to_string())?)
}

fn load_strategy(path: &Path, game: &Ssg, owner: Player) -> anyhow::Result<Strategy> {
    let s = format::parse_strategy(&read(path)?, game).with_context(|| path.display().to_string())?;
    if s.owner() != owner {
        return Err(Error::InvalidStrategy(format!("{} holds a {:?} strategy, expected {owner:?}", path.display(), s.owner())).into());
    }
    Ok(s)
}

fn header(command: &str, game: Option<&Ssg>, algorithm: Option<&str>, seed: u64) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(VERSION));
    m.insert("seed".into(), json!(seed));
    m.insert("game_hash".into(), json!(game.map(format::game_hash)));
    m.insert("algorithm".into(), json!(algorithm));
    m
}

fn with(mut m: serde_json::Map<String, Value>, rest: Value) -> Value {
    if let Value::Object(r) = rest {
        m.extend(r);
    }
    Value::Object(m)
}

fn game_q(game: &Ssg, q: Option<u64>) -> anyhow::Result<u64> {
    Ok(match q {
        Some(q) => q,
        None => infer_q(game)?.q.max(1),
    })
}

fn generate(a: GenerateArgs) -> anyhow::Result<Report> {
    let game = match a.family {
        Family::Random => {
            let sinks = match &a.sinks {
                None => SinkSet::Binary,
                Some(text) => SinkSet::General(
                    text.split(',').map(|t| rational::parse(t.trim())).collect::<Result<Vec<_>, _>>()?,
                ),
            };
            generate::gen_random(&GenSpec {
                outdegree: (a.outdeg_min, a.outdeg_max),
                sinks,
                allow_non_stopping: !a.stopping,
                ..GenSpec::new(a.n_max, a.n_min, a.r, a.q, a.common.seed)
            })?
        }
        Family::Chain => generate::gen_chain(a.q, a.r)?,
        Family::Cycle => generate::gen_random_cycle(a.r, a.q)?,
        Family::Coin => generate::coin(),
        Family::Fig1 => generate::fig1(),
        Family::Fig2 => generate::fig2(),
    };
    let text = format::serialize(&game);
    match &a.common.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            let meta = with(
                header("generate", Some(&game), None, a.common.seed),
                json!({ "path": path.display().to_string(), "vertices": game.len(), "n": game.n(), "r": game.r() }),
            );
            Ok(Report::json(meta, true))
        }
        None => {
            let meta = header("generate", Some(&game), None, a.common.seed);
            eprintln!("{}", Value::Object(meta));
            Ok(Report { body: text, ok: true })
        }
    }
}

fn solve(a: SolveArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let seed = a.common.seed;
    if a.pair || a.best_response {
        let sigma = load_strategy(a.sigma.as_ref().expect("required"), &game, Player::Max)?;
        let (label, tau, v) = if a.pair {
            let tau = load_strategy(a.tau.as_ref().expect("required"), &game, Player::Min)?;
            let v = values::value_of_pair(&game, &sigma, &tau)?;
            ("pair", tau, v)
        } else {
            let (tau, v) = values::best_response_min(&game, &sigma)?;
            ("best-response", tau, v)
        };
        let cert = values::certify(&game, &sigma, &tau, v.clone());
        return Ok(Report::json(
            with(
                header("solve", Some(&game), Some(label), seed),
                json!({ "values": v, "sigma": sigma, "tau": tau, "optimal": cert.optimal }),
            ),
            true,
        ));
    }
    let q = game_q(&game, a.q)?;
    let run = if a.init == "default" || matches!(a.algorithm.as_str(), "ijma" | "hybrid") {
        harness::run_algorithm(&game, q, &a.algorithm, seed, a.period)?
    } else {
        let k: usize = a
            .init
            .strip_prefix("dai-ge:")
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown --init {:?}", a.init)))?;
        let init = engine::dai_ge_init(&game, k, seed)?;
        let mut rule = rules::rule_by_name(&a.algorithm, seed)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {:?}", a.algorithm)))?;
        let out = engine::run(&game, rule.as_mut(), init)?;
        harness::AlgorithmRun {
            algorithm: a.algorithm.clone(),
            iterations: out.trace.iterations,
            values: out.values,
            sigma: out.sigma,
            tau: out.tau,
            k_fixed_arcs: None,
            trace: Some(out.trace),
            ijma: None,
            wall_ms: 0.0,
        }
    };
    let mut body = json!({
        "values": run.values,
        "iterations": run.iterations,
        "sigma": run.sigma,
        "tau": run.tau,
        "wall_ms": run.wall_ms,
    });
    if a.trace {
        body["trace"] = match (&run.trace, &run.ijma) {
            (Some(t), _) => serde_json::to_value(t)?,
            (None, Some(o)) => json!({
                "steps": o.steps,
                "iterates": o.iterates.iter().map(|v| v.iter().map(|(x, r)| (x.0.to_string(), Value::String(rational::format(r)))).collect::<serde_json::Map<_, _>>()).collect::<Vec<_>>(),
            }),
            _ => Value::Null,
        };
    }
    Ok(Report::json(with(header("solve", Some(&game), Some(&run.algorithm), seed), body), true))
}

fn algorithm_list(list: &Option<String>) -> Vec<String> {
    match list {
        Some(text) => text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => harness::ALGORITHMS.iter().map(|s| s.to_string()).collect(),
    }
}

fn compare(a: CompareArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let q = game_q(&game, a.q)?;
    let mut rows = Vec::new();
    let mut reference = None;
    let mut agree = true;
    for alg in algorithm_list(&a.algorithms) {
        let run = harness::run_algorithm(&game, q, &alg, a.common.seed, a.period)?;
        let same = reference.get_or_insert_with(|| run.values.clone()) == &run.values;
        agree &= same;
        rows.push(json!({
            "algorithm": alg,
            "iterations": run.iterations,
            "values_hash": harness::values_hash(&run.values),
            "agrees": same,
            "wall_ms": run.wall_ms,
        }));
    }
    Ok(Report::json(
        with(
            header("compare", Some(&game), None, a.common.seed),
            json!({ "values": reference, "agree": agree, "runs": rows }),
        ),
        agree,
    ))
}

fn verify(a: VerifyArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let sigma = load_strategy(&a.sigma, &game, Player::Max)?;
    let tau = load_strategy(&a.tau, &game, Player::Min)?;
    let cert = values::check_optimal(&game, &sigma, &tau)?;
    let names = ["sinks", "random_average", "min_minimises", "max_maximises", "zero_set"];
    let conditions: serde_json::Map<String, Value> =
        names.iter().zip(cert.conditions).map(|(n, b)| (n.to_string(), json!(b))).collect();
    let ok = cert.optimal;
    Ok(Report::json(
        with(
            header("verify", Some(&game), None, a.common.seed),
            json!({ "optimal": ok, "conditions": conditions, "values": cert.values }),
        ),
        ok,
    ))
}

fn analyze(a: AnalyzeArgs) -> anyhow::Result<Report> {
    let text = read(&a.game)?;
    let game = format::parse_unchecked(&text)?;
    let report = game.validate();
    let mut body = json!({
        "valid": report.is_ok(),
        "violations": report.to_string(),
        "vertices": game.len(),
        "n": game.n(),
        "n_min": game.min_vertices().len(),
        "r": game.r(),
    });
    if report.is_ok() {
        let info = infer_q(&game)?;
        body["q"] = json!(info.q);
        body["q_ssg"] = json!(info.q_ssg);
        body["max_strategies"] = json!(Strategy::count(&game, Player::Max).to_string());
        body["min_strategies"] = json!(Strategy::count(&game, Player::Min).to_string());
        body["zero_set"] = json!(graph::zero_set_optimal(&game).members);
        body["feedback_arcs"] = json!(graph::dfs_back_arcs(&game).to_pairs());
        if let Some(path) = &a.sigma {
            let sigma = load_strategy(path, &game, Player::Max)?;
            body["absorbing_max"] = json!(graph::max_absorbing(&game, &sigma).members);
            body["zero_set_max"] = json!(graph::zero_set_max(&game, &sigma).members);
            if let Some(path) = &a.tau {
                let tau = load_strategy(path, &game, Player::Min)?;
                body["absorbing_pair"] = json!(graph::absorbing_union(&game, &sigma, &tau).members);
                body["zero_set_pair"] = json!(graph::zero_set_pair(&game, &sigma, &tau).members);
            }
        }
    }
    let valid = report.is_ok();
    Ok(Report::json(
        with(header("analyze", valid.then_some(&game), None, a.common.seed), body),
        valid,
    ))
}

fn transform_cmd(a: TransformArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let arcs = ArcSpec::parse(&a.arcs).resolve(&game)?;
    let tg = match (&a.sigma, &a.values) {
        (Some(path), _) => transform::from_strategy(&game, &arcs, &load_strategy(path, &game, Player::Max)?)?,
        (None, Some(path)) => {
            let texts: Vec<String> = serde_json::from_str(&read(path)?)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if texts.len() != game.len() {
                bail!(Error::InvalidArgument(format!("{} values for {} vertices", texts.len(), game.len())));
            }
            let v = ssg_core::ValueVector(texts.iter().map(|t| rational::parse(t)).collect::<Result<_, _>>()?);
            transform::from_values(&game, &arcs, &v)?
        }
        (None, None) => {
            transform::from_strategy(&game, &arcs, &engine::default_init(&game))?
        }
    };
    let text = format::serialize(&tg.derived);
    let mut body = json!({ "arc_sinks": tg.arc_sink_report(), "derived_hash": format::game_hash(&tg.derived) });
    match &a.common.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            body["path"] = json!(path.display().to_string());
        }
        None => body["derived"] = serde_json::from_str(&text)?,
    }
    let report = Report::json(with(header("transform", Some(&game), None, a.common.seed), body), true);
    Ok(report)
}

fn oracle_cmd(a: OracleArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let out = oracle::oracle_optimal(&game, a.cap)?;
    let mut body = json!({
        "values": out.values,
        "sigma": out.sigma,
        "tau": out.tau,
        "strategies": out.strategies.to_string(),
    });
    let mut ok = out.certificate.optimal;
    if a.cross_check {
        let double = oracle::oracle_double(&game, a.cap)?;
        ok &= double == out.values;
        body["cross_check_agrees"] = json!(double == out.values);
    }
    Ok(Report::json(with(header("oracle", Some(&game), Some("oracle"), a.common.seed), body), ok))
}

fn audit(a: AuditArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let q = game_q(&game, a.q)?;
    let rep = oracle::denominator_audit(&game, q, a.samples, a.common.seed)?;
    Ok(Report::json(
        with(header("audit-denominators", Some(&game), None, a.common.seed), serde_json::to_value(&rep)?),
        true,
    ))
}

fn simulate(a: SimulateArgs) -> anyhow::Result<Report> {
    let game = load_game(&a.game)?;
    let strategy = |path: &Option<PathBuf>, owner| match path {
        Some(p) => load_strategy(p, &game, owner),
        None => Ok(Strategy::first_successor(&game, owner)),
    };
    let sigma = strategy(&a.sigma, Player::Max)?;
    let tau = strategy(&a.tau, Player::Min)?;
    let (max, min) = match &a.arcs {
        Some(spec) => {
            let arcs = ArcSpec::parse(spec).resolve(&game)?;
            let concat = |outer: Strategy, inner: Strategy| {
                PlayStrategy::Concat(ConcatStrategy {
                    outer,
                    inner,
                    arcs: arcs.clone(),
                    depth: Some(a.depth),
                })
            };
            (
                concat(strategy(&a.outer_sigma, Player::Max)?, sigma),
                concat(strategy(&a.outer_tau, Player::Min)?, tau),
            )
        }
        None => (PlayStrategy::Positional(sigma), PlayStrategy::Positional(tau)),
    };
    if a.start >= game.len() {
        bail!(Error::InvalidArgument(format!("--start {} out of range", a.start)));
    }
    let cutoff = a.cutoff.unwrap_or_else(|| sim::default_cutoff(&game));
    let rep = sim::simulate(&game, &max, &min, VertexId(a.start), a.plays, cutoff, a.common.seed)?;
    let sample = sim::sample_play(&game, &max, &min, VertexId(a.start), cutoff, a.common.seed)?;
    let mut body = serde_json::to_value(&rep)?;
    body["start"] = json!(a.start);
    body["sample_play"] = serde_json::to_value(&sample)?;
    if game.kind(VertexId(a.start)) == VertexKind::Sink {
        body["note"] = json!("start is a sink");
    }
    Ok(Report::json(with(header("simulate", Some(&game), None, a.common.seed), body), true))
}

fn bench(a: BenchArgs) -> anyhow::Result<Report> {
    let instances = harness::suite(&a.suite, a.common.seed)?;
    let opts = BenchOptions {
        algorithms: algorithm_list(&a.algorithms),
        period: a.period,
        oracle: !a.no_oracle,
        oracle_cap: a.cap,
    };
    let report = harness::bench(&instances, &opts)?;
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    let ok = report.violations.is_empty();
    Ok(match a.format {
        OutFormat::Csv => Report { body: report.to_csv()?, ok },
        OutFormat::Json => Report::json(
            with(
                header("bench", None, None, a.common.seed),
                json!({ "suite": a.suite, "rows": report.rows, "violations": report.violations }),
            ),
            ok,
        ),
    })
}

fn dispatch(command: Command) -> anyhow::Result<(Report, Option<PathBuf>)> {
    Ok(match command {
        Command::Generate(a) => (generate(a)?, None),
        Command::Solve(a) => {
            let out = a.common.out.clone();
            (solve(a)?, out)
        }
        Command::Compare(a) => {
            let out = a.common.out.clone();
            (compare(a)?, out)
        }
        Command::Verify(a) => {
            let out = a.common.out.clone();
            (verify(a)?, out)
        }
        Command::Analyze(a) => {
            let out = a.common.out.clone();
            (analyze(a)?, out)
        }
        Command::Transform(a) => (transform_cmd(a)?, None),
        Command::Oracle(a) => {
            let out = a.common.out.clone();
            (oracle_cmd(a)?, out)
        }
        Command::AuditDenominators(a) => {
            let out = a.common.out.clone();
            (audit(a)?, out)
        }
        Command::Simulate(a) => {
            let out = a.common.out.clone();
            (simulate(a)?, out)
        }
        Command::Bench(a) => {
            let out = a.common.out.clone();
            (bench(a)?, out)
        }
    })
}

/// 2 for bad input, 1 for failed checks and internal errors.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::Parse(_)
            | Error::InvalidGame(_)
            | Error::InvalidStrategy(_)
            | Error::IncompatibleQ { .. }
            | Error::UnknownArc(..)
            | Error::SinkValueOutOfRange(..)
            | Error::NotFeedbackArcSet(_)
            | Error::CoverageUnmet(_)
            | Error::NotDeterministic(_)
            | Error::InvalidOrder(_)
            | Error::CapExceeded { .. }
            | Error::NotQSsg(_)
            | Error::InvalidArgument(_),
        ) => 2,
        Some(_) => 1,
        None if err.chain().any(|e| e.is::<std::io::Error>() || e.is::<serde_json::Error>()) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok((report, out)) => {
            let written = match out {
                Some(path) => fs::write(&path, &report.body).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", report.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
