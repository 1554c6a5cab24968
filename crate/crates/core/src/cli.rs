//! The `dirac-ham` command line.
//!
//! Results go to stdout (or `--out`) as JSON or CSV, diagnostics to stderr.
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{classify, ClassifierParams, SearchMode};
use crate::error::Error;
use crate::expander::{
    check_bipartite_expander, check_expander, check_half_expander, CheckMode, ExpanderParams, DEFAULT_SAMPLES,
};
use crate::frame::{build_matched_frame, find_proper_hamilton_cycle, SpecialFrame};
use crate::game::engines::{build_breaker, build_maker, hamilton_family, Engine};
use crate::game::{play, Bias, Board, HamiltonGoal, PlayConfig, Player};
use crate::generators;
use crate::graph::{verify_hamilton_cycle, verify_hamilton_path, Graph, VertexSet};
use crate::lab::{hamiltonicity_sweep, p_from_clogn};
use crate::oracle;
use crate::rotation::{find_hamilton_cycle, find_path_between, Budget};
use crate::service::{self, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "dirac-ham", version, about = "Hamiltonicity tools for Dirac graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a Dirac graph into one of the three structural cases.
    Classify(ClassifyArgs),
    /// Search for a Hamilton cycle, or a Hamilton path with `--path`.
    Ham(HamArgs),
    /// Search for a proper Hamilton cycle in a special frame.
    HamBip(HamBipArgs),
    /// Check expansion properties.
    Expcheck(ExpcheckArgs),
    /// Hamiltonicity of random subgraphs over a grid of edge probabilities.
    Sweep(SweepArgs),
    /// Play one Maker-Breaker Hamiltonicity game.
    Play(PlayArgs),
    /// Run the local game service.
    Serve(ServeArgs),
    /// Exact Hamiltonicity by backtracking (n <= 20).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph file (text edge list or JSON), or a family name such as K12, K5,5, 2K6M, 2K5B, C7.
    #[arg(long)]
    graph: String,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Restarts of the randomized search.
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    /// Rotation steps per restart.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            restarts: self.restarts,
            max_steps: self.budget,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Local,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, default_value_t = 1.0 / 320.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Local)]
    mode: ModeArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the admissible-range checks on alpha and gamma.
    #[arg(long)]
    unchecked: bool,
}

#[derive(Debug, Args)]
struct HamArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Endpoints of a Hamilton path.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    path: Option<Vec<usize>>,
    /// Decide exactly with the backtracking oracle instead.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct FrameArgs {
    /// File listing the ids of V1; every other vertex is in V2.
    #[arg(long)]
    part: Option<PathBuf>,
    /// Special edges inside V1, as "u1-w1,u2-w2".
    #[arg(long, default_value = "")]
    special: String,
}

#[derive(Debug, Args)]
struct HamBipArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[command(flatten)]
    frame: FrameArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Half,
    Plain,
    Bip,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckArg {
    Exact,
    Sampled,
}

#[derive(Debug, Args)]
struct ExpcheckArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    r: f64,
    #[command(flatten)]
    frame: FrameArgs,
    #[arg(long, value_enum, default_value_t = CheckArg::Exact)]
    mode: CheckArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PUnit {
    Clogn,
    Raw,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Comma separated grid values.
    #[arg(long)]
    pgrid: String,
    #[arg(long, value_enum, default_value_t = PUnit::Raw)]
    pgrid_unit: PUnit,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Debug, Args)]
struct PlayArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Breaker's bias `b`, or `a:b`.
    #[arg(long)]
    bias: String,
    #[arg(long, default_value = "dirac")]
    maker: String,
    #[arg(long, default_value = "greedy-block")]
    breaker: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Scales Maker's stage switch.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value = "maker")]
    first: String,
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Directory for append-only session logs.
    #[arg(long)]
    persist: Option<PathBuf>,
    #[arg(long, default_value_t = service::DEFAULT_STEP_BUDGET)]
    step_budget: usize,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    path: Option<Vec<usize>>,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn json(&mut self, v: &Value) -> CliResult<()> {
        let text = serde_json::to_string_pretty(v).expect("json");
        writeln!(self.out, "{text}").map_err(Error::from)?;
        Ok(())
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "{msg}");
    }

    fn seed(&mut self, seed: Option<u64>) -> u64 {
        seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            self.note(&format!("seed: {s}"));
            s
        })
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            io.note(&format!("usage error: {msg}"));
            2
        }
        Err(Failure::Domain(e)) => {
            let detail = match &e {
                Error::ClassificationFailed { diagnostics, .. } => Some(json!({ "diagnostics": diagnostics })),
                Error::HallViolation { violator } => Some(json!({ "violator": violator })),
                _ => None,
            };
            if let Some(mut d) = detail {
                d["error"] = json!(e.to_string());
                d["code"] = json!(e.code());
                let _ = io.json(&d);
            }
            io.note(&format!("error: {e}"));
            1
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> CliResult<()> {
    match cmd {
        Command::Classify(a) => cmd_classify(a, io),
        Command::Ham(a) => cmd_ham(a, io),
        Command::HamBip(a) => cmd_ham_bip(a, io),
        Command::Expcheck(a) => cmd_expcheck(a, io),
        Command::Sweep(a) => cmd_sweep(a, io),
        Command::Play(a) => cmd_play(a, io),
        Command::Serve(a) => cmd_serve(a, io),
        Command::Oracle(a) => cmd_oracle(a, io),
    }
}

fn load_graph(source: &str) -> CliResult<Graph> {
    let path = Path::new(source);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(Error::from)?;
        return Ok(Graph::parse(&text)?);
    }
    generators::by_name(source)
        .ok_or_else(|| Failure::Usage(format!("`{source}` is neither a file nor a known graph family")))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::Usage(format!("bad {what} `{t}`"))))
        .collect()
}

fn parse_special(text: &str) -> CliResult<Vec<(usize, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (u, w) = t
                .split_once('-')
                .ok_or_else(|| Failure::Usage(format!("special edge `{t}` is not of the form u-w")))?;
            let p = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("bad vertex in `{t}`")))
            };
            Ok((p(u)?, p(w)?))
        })
        .collect()
}

/// `(V1, V2, special edges)`.
type FrameParts = (VertexSet, VertexSet, Vec<(usize, usize)>);

fn load_frame(g: &Graph, f: &FrameArgs) -> CliResult<FrameParts> {
    let part = f
        .part
        .as_ref()
        .ok_or_else(|| Failure::Usage("--part is required".into()))?;
    let text = fs::read_to_string(part).map_err(Error::from)?;
    let v1 = VertexSet::new(parse_list(&text, "vertex id")?)?;
    v1.validate(g.n())?;
    let v2 = v1.complement(g.n());
    Ok((v1, v2, parse_special(&f.special)?))
}

fn cmd_classify(a: ClassifyArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let params = if a.unchecked {
        ClassifierParams::unchecked(a.alpha, a.gamma)
    } else {
        ClassifierParams::new(a.alpha, a.gamma)?
    };
    let mode = match a.mode {
        ModeArg::Exact => SearchMode::Exact,
        ModeArg::Local => SearchMode::Local,
    };
    let seed = match mode {
        SearchMode::Exact => a.seed.unwrap_or(0),
        SearchMode::Local => io.seed(a.seed),
    };
    let cls = classify(&g, params, mode, seed)?;
    io.json(&json!({ "seed": seed, "classification": cls }))
}

fn cmd_ham(a: HamArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let ends = a.path.as_ref().map(|p| (p[0], p[1]));
    if a.oracle {
        let cert = match ends {
            Some((u, v)) => oracle::hamilton_path_between(&g, u, v)?,
            None => oracle::hamilton_cycle(&g)?,
        };
        return io.json(&json!({ "found": cert.is_some(), "certificate": cert, "method": "oracle" }));
    }
    let seed = io.seed(a.seed);
    let budget = a.budget.budget();
    let (cert, restarts, steps, note) = match ends {
        Some((u, v)) => {
            let r = find_path_between(&g, u, v, budget, seed)?;
            let c = r.found.map(|c| c.seq);
            debug_assert!(c.as_ref().is_none_or(|s| verify_hamilton_path(&g, s)));
            (c, r.restarts, r.steps, r.note)
        }
        None => {
            let r = find_hamilton_cycle(&g, budget, seed)?;
            let c = r.found.map(|c| c.seq);
            debug_assert!(c.as_ref().is_none_or(|s| verify_hamilton_cycle(&g, s)));
            (c, r.restarts, r.steps, r.note)
        }
    };
    let mut v =
        json!({ "found": cert.is_some(), "certificate": cert, "restarts": restarts, "steps": steps, "seed": seed });
    if let Some(n) = note {
        v["note"] = json!(n);
    }
    io.json(&v)
}

fn cmd_ham_bip(a: HamBipArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let (v1, v2, special) = load_frame(&g, &a.frame)?;
    let mf = build_matched_frame(&g, v1, v2, &special)?;
    let seed = io.seed(a.seed);
    let r = find_proper_hamilton_cycle(&g, &mf, a.budget.budget(), seed)?;
    let cert = r.found.map(|c| c.seq);
    let mut v = json!({
        "found": cert.is_some(),
        "certificate": cert,
        "matching": mf.matching(),
        "special_edges": mf.frame.special_edges(),
        "restarts": r.restarts,
        "steps": r.steps,
        "seed": seed,
    });
    if let Some(n) = r.note {
        v["note"] = json!(n);
    }
    io.json(&v)
}

fn cmd_expcheck(a: ExpcheckArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let params = ExpanderParams::new(a.eps, a.r)?;
    let mode = match a.mode {
        CheckArg::Exact => CheckMode::Exact,
        CheckArg::Sampled => CheckMode::Sampled {
            seed: io.seed(a.seed),
            samples: a.samples,
        },
    };
    let report = match a.kind {
        KindArg::Half => check_half_expander(&g, params, mode)?,
        KindArg::Plain => check_expander(&g, params, mode)?,
        KindArg::Bip => {
            let (v1, v2, special) = load_frame(&g, &a.frame)?;
            let frame = SpecialFrame::new(&g, v1, v2, &special)?;
            check_bipartite_expander(&g, &frame, params, mode)?
        }
    };
    io.json(&json!({ "mode": mode, "report": report }))
}

fn cmd_sweep(a: SweepArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let grid: Vec<f64> = parse_list(&a.pgrid, "grid value")?;
    if grid.is_empty() {
        return Err(Failure::Usage("--pgrid is empty".into()));
    }
    let ps: Vec<f64> = match a.pgrid_unit {
        PUnit::Raw => grid,
        PUnit::Clogn => grid.iter().map(|&c| p_from_clogn(c, g.n())).collect(),
    };
    let seed = io.seed(a.seed);
    let res = hamiltonicity_sweep(&g, &ps, a.trials, a.budget.budget(), seed)?;
    match &a.out {
        Some(path) => res.write_csv(fs::File::create(path).map_err(Error::from)?)?,
        None => res.write_csv(&mut *io.out)?,
    }
    io.note(&format!(
        "swept {} levels x {} trials on {} (seed {seed}); monotonicity violations: {}",
        res.rows.len(),
        a.trials,
        res.graph,
        res.monotonicity_violations()
    ));
    Ok(())
}

fn parse_bias(s: &str) -> CliResult<Bias> {
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a, b),
        None => ("1", s),
    };
    let p = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("bad bias `{s}`")))
    };
    Bias::new(p(a)?, p(b)?).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_player(s: &str) -> CliResult<Player> {
    match s {
        "maker" => Ok(Player::Maker),
        "breaker" => Ok(Player::Breaker),
        _ => Err(Failure::Usage(format!("`{s}` is not maker or breaker"))),
    }
}

fn parse_engine(s: &str, maker: bool) -> CliResult<Engine> {
    let e: Engine = s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let ok = if maker { e.plays_maker() } else { e.plays_breaker() };
    if !ok {
        return Err(Failure::Usage(format!(
            "`{s}` is not a {} strategy",
            if maker { "Maker" } else { "Breaker" }
        )));
    }
    Ok(e)
}

fn cmd_play(a: PlayArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let bias = parse_bias(&a.bias)?;
    let first = parse_player(&a.first)?;
    let maker_kind = parse_engine(&a.maker, true)?;
    let breaker_kind = parse_engine(&a.breaker, false)?;
    let seed = io.seed(a.seed);
    let family = if maker_kind.needs_family() || breaker_kind.needs_family() {
        Some(hamilton_family(&g)?)
    } else {
        None
    };
    let mut maker = build_maker(maker_kind, &g, bias, family.as_ref(), seed, a.beta)?;
    let mut breaker = build_breaker(breaker_kind, &g, bias, family.as_ref())?;
    let mut goal = HamiltonGoal::new(g.clone(), Budget::default(), seed);
    let t = play(
        &Board::graph_board(g.clone()),
        &mut goal,
        maker.strategy.as_mut(),
        breaker.as_mut(),
        PlayConfig {
            bias,
            first,
            seed,
            potential_family: family.as_ref(),
        },
    )?;
    if let Some(c) = &t.certificate {
        debug_assert!(verify_hamilton_cycle(&g, c));
    }
    let moves: Vec<Value> = t.moves().iter().map(|m| json!([m.player, m.element, m.turn])).collect();
    let claims = maker.log.as_ref().map(|l| l.lock().expect("claim log").clone());
    if let Some(path) = &a.transcript {
        let mut doc = json!({
            "seed": seed,
            "graph": &g,
            "bias": bias,
            "first": first,
            "maker": maker_kind,
            "breaker": breaker_kind,
            "moves": moves,
            "winner": t.winner,
            "forfeit": t.forfeit,
            "certificate": t.certificate,
        });
        if family.is_some() {
            doc["potentials"] = json!(t.potentials);
        }
        if let Some(c) = &claims {
            doc["maker_claims"] = json!(c);
        }
        let text = serde_json::to_string_pretty(&doc).expect("json");
        fs::write(path, text + "\n").map_err(Error::from)?;
    }
    io.json(&json!({
        "seed": seed,
        "n": g.n(),
        "m": g.m(),
        "bias": bias,
        "first": first,
        "maker": maker_kind,
        "breaker": breaker_kind,
        "winner": t.winner,
        "forfeit": t.forfeit,
        "moves": moves.len(),
        "certificate": t.certificate,
    }))
}

fn cmd_serve(a: ServeArgs, _io: &mut Io<'_>) -> CliResult<()> {
    if !a.addr.ip().is_loopback() {
        return Err(Failure::Usage(format!(
            "refusing to bind non-loopback address {}",
            a.addr
        )));
    }
    let rt = tokio::runtime::Runtime::new().map_err(Error::from)?;
    rt.block_on(service::serve(
        a.addr,
        ServiceConfig {
            persist: a.persist,
            step_budget: a.step_budget,
        },
    ))?;
    Ok(())
}

fn cmd_oracle(a: OracleArgs, io: &mut Io<'_>) -> CliResult<()> {
    let g = load_graph(&a.graph.graph)?;
    let cert = match a.path.as_ref().map(|p| (p[0], p[1])) {
        Some((u, v)) => oracle::hamilton_path_between(&g, u, v)?,
        None => oracle::hamilton_cycle(&g)?,
    };
    io.json(&json!({ "hamiltonian": cert.is_some(), "certificate": cert }))
}
