//! The `gl2ext` command line: argument parsing, dispatch to the library, and
//! report rendering.
//!
//! Every subcommand produces a [`Report`]: a list of pass/fail items plus a
//! JSON payload. Rendering is deterministic for a fixed configuration;
//! timings are only included with `--timing`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use gl2ext::defring::{self, Case};
use gl2ext::exactalg::Rat;
use gl2ext::lattices::{self, CappedInterval, LatticeSite, PadicPoint, PlaceBox};
use gl2ext::padicval::{self, RootSpec, Variant};
use gl2ext::repstruct::{self, Chart};
use gl2ext::typesweights::{self, AdmElt, HTWeight, RhoBarData};
use gl2ext::weights::{self, rectangle, adjacent, is_prime, GraphPoint, Params, SerreWeight, WeightVector};

pub const REPORT_SCHEMA: &str = "gl2ext-report/1";
pub const CONFIG_SCHEMA: &str = "gl2ext-config/1";
pub const THREADS_ENV: &str = "GL2EXT_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "gl2ext", version, about = "Serre weights, deformation rings, p-adic certificates and lattice profiles for GL2")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads (overrides GL2EXT_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Include per-item timings (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extension-graph pictures.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Jordan–Hölder factors of Inj_n σ.
    Jh(JhArgs),
    /// Structure of I(σ, τ) for τ at graph position ω.
    Imod(ImodArgs),
    /// The map t_μ on Λ_W^μ.
    Weights(WeightsArgs),
    /// Modular weights, X(ρ̄, λ) and Jordan–Hölder sets of types.
    Types(TypesArgs),
    /// Deformation-ring tables.
    #[command(subcommand)]
    Defring(DefringCmd),
    /// p-adic certificates.
    #[command(subcommand)]
    Padic(PadicCmd),
    /// Lattices in locally algebraic types.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Monomial ideals of interval families.
    #[command(subcommand)]
    Intervals(IntervalsCmd),
    /// Runs the deformation-ring, p-adic and lattice suites.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// The rectangle between 0 and ω with its adjacency edges.
    Rect {
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Jordan–Hölder constituents of Inj_n σ with adjacency edges.
    Inj(JhArgs),
}

#[derive(Debug, Args)]
pub struct JhArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Socle weight as pairs, e.g. `40,0;43,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct ImodArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: String,
    /// Position of τ in the chart centred at σ.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: String,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// The base weight μ as pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// A single graph point; all of Λ_W^μ when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
}

#[derive(Debug, Args)]
pub struct RhoArg {
    /// ρ̄ as a JSON file or inline JSON object.
    #[arg(long)]
    pub rho: Option<String>,
}

#[derive(Debug, Args)]
pub struct TypesArgs {
    #[command(flatten)]
    pub rho: RhoArg,
    /// Hodge–Tate weight, e.g. `2,0;1,0`.
    #[arg(long)]
    pub lambda: String,
}

#[derive(Debug, Subcommand)]
pub enum DefringCmd {
    /// Verifies closed forms and relations.
    Verify {
        #[arg(long)]
        case: Option<Case>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        n: Option<i64>,
        /// Every table case with m + n up to this bound.
        #[arg(long)]
        max_ell: Option<i64>,
    },
    /// Presentation of the deformation ring for a type.
    Present {
        #[command(flatten)]
        rho: RhoArg,
        #[arg(long)]
        lambda: String,
        /// Admissible tuple, e.g. `t(1,0);wt(1,0)`.
        #[arg(long)]
        wtilde: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum PadicCmd {
    /// Extracts and verifies a certificate x₀ = uG + vG'.
    Cert {
        #[arg(long)]
        p: Option<u64>,
        /// Comma-separated rational roots.
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        #[arg(long, default_value = "monic")]
        variant: Variant,
    },
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// v(κ) for every κ in the Jordan–Hölder cuboid.
    Profile(ProfileArgs),
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub rho: RhoArg,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub wtilde: Option<String>,
    /// The origin κ∘ (a modular weight of the cuboid).
    #[arg(long, allow_hyphen_values = true)]
    pub origin: Option<String>,
    /// Abstract cuboid: lower corner (instead of ρ̄, λ, w̃).
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_tilde: Option<String>,
    /// Valuations t_j of x_j, one value or one per coordinate.
    #[arg(long, default_value = "1/2")]
    pub t: String,
}

#[derive(Debug, Subcommand)]
pub enum IntervalsCmd {
    /// Compares I_{W1} + I_{W2} with I_{W1 ∩ W2}, or runs every case.
    Check(IntervalArgs),
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    /// |𝒦|.
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub exhaustive: bool,
    /// Lower end of the first interval, e.g. `0,2`.
    #[arg(long, default_value = "")]
    pub lower1: String,
    #[arg(long, default_value = "")]
    pub lower2: String,
    /// Common cap.
    #[arg(long, default_value = "")]
    pub cap: String,
    /// Cap of the second interval if different (the check then reports the
    /// failure of the cap hypothesis).
    #[arg(long)]
    pub cap2: Option<String>,
    #[arg(long)]
    pub punctured1: bool,
    #[arg(long)]
    pub punctured2: bool,
}

#[derive(Debug, Args)]
pub struct VerifyAllArgs {
    #[arg(long)]
    pub max_ell: Option<i64>,
}

/// Settings that may come from a configuration file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub schema: Option<String>,
    pub p: Option<u64>,
    pub f: Option<usize>,
    /// Path to a ρ̄ JSON file, relative to the working directory.
    pub rho: Option<PathBuf>,
    pub max_ell: Option<i64>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(s) = &self.schema {
            if s != CONFIG_SCHEMA {
                return Err(usage(format!("unsupported config schema {s}")));
            }
        }
        if let Some(p) = self.p {
            check_prime(p)?;
        }
        if self.f == Some(0) || self.threads == Some(0) || self.max_ell.is_some_and(|m| m < 1) {
            return Err(usage("bounds must be at least 1"));
        }
        Ok(())
    }
}

fn check_prime(p: u64) -> Result<u64, CliError> {
    if p <= 3 || !is_prime(p) {
        return Err(usage(format!("p = {p} must be a prime greater than 3")));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub key: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: Vec<String>,
    pub items: Vec<Item>,
    pub payload: Value,
    /// A DOT rendering, when the command has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

impl Report {
    fn new(command: Vec<String>, items: Vec<Item>, payload: Value) -> Self {
        Report { schema: REPORT_SCHEMA.into(), command, items, payload, dot: None }
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self).map_err(failed)? + "\n"),
            Format::Dot => self.dot.clone().ok_or_else(|| usage("this command has no DOT output")),
            Format::Markdown => {
                let mut out = format!("# gl2ext {}\n\n", self.command.join(" "));
                if !self.items.is_empty() {
                    out += "| item | result | detail |\n|---|---|---|\n";
                    for i in &self.items {
                        let _ = writeln!(
                            out,
                            "| {} | {} | {} |",
                            i.key,
                            if i.pass { "PASS" } else { "FAIL" },
                            i.detail.replace('|', "\\|")
                        );
                    }
                    out += "\n";
                }
                out += "```json\n";
                out += &serde_json::to_string_pretty(&self.payload).map_err(failed)?;
                out += "\n```\n";
                Ok(out)
            }
        }
    }
}

/// Thread count: flag, then configuration, then `GL2EXT_THREADS`.
pub fn thread_count(flag: Option<usize>, cfg: &RunConfig) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag.or(cfg.threads) {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) if !s.trim().is_empty() => {
            let n: usize = s.trim().parse().map_err(|_| usage(format!("{THREADS_ENV}={s} is not a number")))?;
            if n == 0 {
                return Err(usage(format!("{THREADS_ENV} must be at least 1")));
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

/// Parses, configures the thread pool, runs and renders. Returns the text to
/// print and the exit code.
pub fn main_with_args<I, S>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.to_string(), code);
        }
    };
    let outcome = (|| {
        let cfg = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let format = cli.format.or(cfg.format).unwrap_or(Format::Json);
        let threads = thread_count(cli.threads, &cfg)?;
        let report = match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(failed)?
                .install(|| execute(&cli, &cfg, &argv)),
            None => execute(&cli, &cfg, &argv),
        }?;
        Ok::<_, CliError>((report.render(format)?, report.exit_code()))
    })();
    match outcome {
        Ok(r) => r,
        Err(e) => (format!("error: {e}\n"), e.exit_code()),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> Result<Report, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(usage)?;
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    execute(&cli, &cfg, &argv)
}

fn execute(cli: &Cli, cfg: &RunConfig, argv: &[String]) -> Result<Report, CliError> {
    let command: Vec<String> = argv.iter().skip(1).cloned().collect();
    let ctx = Ctx { cfg, timing: cli.timing };
    let mut report = match &cli.command {
        Command::Graph(GraphCmd::Rect { omega }) => graph_rect(omega)?,
        Command::Graph(GraphCmd::Inj(a)) => graph_inj(&ctx, a)?,
        Command::Jh(a) => jh(&ctx, a)?,
        Command::Imod(a) => imod(&ctx, a)?,
        Command::Weights(a) => weights_cmd(&ctx, a)?,
        Command::Types(a) => types_cmd(&ctx, a)?,
        Command::Defring(DefringCmd::Verify { case, m, n, max_ell }) => defring_verify(&ctx, *case, *m, *n, *max_ell)?,
        Command::Defring(DefringCmd::Present { rho, lambda, wtilde }) => defring_present(&ctx, rho, lambda, wtilde)?,
        Command::Padic(PadicCmd::Cert { p, roots, variant }) => padic_cert(&ctx, *p, roots, *variant)?,
        Command::Lattice(LatticeCmd::Profile(a)) => lattice_profile(&ctx, a)?,
        Command::Intervals(IntervalsCmd::Check(a)) => intervals(a)?,
        Command::VerifyAll(a) => verify_all(&ctx, a)?,
    };
    report.command = command;
    Ok(report)
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    timing: bool,
}

impl Ctx<'_> {
    fn p(&self, flag: Option<u64>) -> Result<u64, CliError> {
        check_prime(flag.or(self.cfg.p).ok_or_else(|| usage("a prime --p is required"))?)
    }

    fn rho(&self, arg: &RhoArg) -> Result<RhoBarData, CliError> {
        let text = match (&arg.rho, &self.cfg.rho) {
            (Some(s), _) if s.trim_start().starts_with('{') => s.clone(),
            (Some(s), _) => std::fs::read_to_string(s).map_err(|e| usage(format!("{s}: {e}")))?,
            (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?,
            (None, None) => return Err(usage("--rho is required")),
        };
        let rho: RhoBarData = serde_json::from_str(&text).map_err(|e| usage(format!("ρ̄: {e}")))?;
        rho.validate().map_err(usage)?;
        if let Some(f) = self.cfg.f {
            if f != rho.f {
                return Err(usage(format!("ρ̄ has f = {}, configuration says {f}", rho.f)));
            }
        }
        Ok(rho)
    }

    /// Runs `job` on every key in parallel and returns items sorted by key.
    fn items<K, F>(&self, keys: Vec<K>, job: F) -> Vec<Item>
    where
        K: Send + Sync + std::fmt::Display,
        F: Fn(&K) -> Result<String, String> + Send + Sync,
    {
        let mut items: Vec<(String, Item)> = keys
            .par_iter()
            .map(|k| {
                let start = Instant::now();
                let out = job(k);
                let millis = self.timing.then(|| start.elapsed().as_millis() as u64);
                let key = k.to_string();
                let item = match out {
                    Ok(detail) => Item { key: key.clone(), pass: true, detail, millis },
                    Err(detail) => Item { key: key.clone(), pass: false, detail, millis },
                };
                (key, item)
            })
            .collect();
        items.sort_by(|a, b| a.0.cmp(&b.0));
        items.into_iter().map(|(_, i)| i).collect()
    }
}

fn ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| usage(format!("not an integer: {t:?}"))))
        .collect()
}

fn point(s: &str) -> Result<GraphPoint, CliError> {
    let v = ints(s)?;
    if v.is_empty() {
        return Err(usage("empty graph point"));
    }
    Ok(GraphPoint(v))
}

fn pairs(s: &str) -> Result<WeightVector, CliError> {
    let v = ints(s)?;
    if v.is_empty() || v.len() % 2 != 0 {
        return Err(usage(format!("expected pairs `a,b;c,d`, got {s:?}")));
    }
    Ok(WeightVector(v.chunks(2).map(|c| (c[0], c[1])).collect()))
}

fn jset(s: &str) -> Result<lattices::JMask, CliError> {
    let set: BTreeSet<usize> = ints(s)?
        .into_iter()
        .map(|j| usize::try_from(j).map_err(|_| usage("indices are non-negative")))
        .collect::<Result<_, _>>()?;
    Ok(lattices::mask_of(&set))
}

fn to_value<T: Serialize>(t: &T) -> Result<Value, CliError> {
    serde_json::to_value(t).map_err(failed)
}

fn quoted(s: impl std::fmt::Display) -> String {
    format!("\"{s}\"")
}

/// DOT for a set of graph points with edges between adjacent ones.
fn adjacency_dot(name: &str, nodes: &[(GraphPoint, String)]) -> String {
    let mut out = format!("graph {name} {{\n");
    for (p, label) in nodes {
        let _ = writeln!(out, "  {} [label=\"{}\"];", quoted(p), label);
    }
    for (i, (a, _)) in nodes.iter().enumerate() {
        for (b, _) in &nodes[i + 1..] {
            if adjacent(a, b) {
                let _ = writeln!(out, "  {} -- {};", quoted(a), quoted(b));
            }
        }
    }
    out += "}\n";
    out
}

fn graph_rect(omega: &str) -> Result<Report, CliError> {
    let omega = point(omega)?;
    let origin = GraphPoint::zero(omega.len());
    let pts = rectangle(&origin, &omega);
    let expected: i64 = omega.0.iter().map(|x| x.abs() + 1).product();
    let nodes: Vec<(GraphPoint, String)> = pts.iter().map(|p| (p.clone(), p.to_string())).collect();
    let items = vec![Item {
        key: "size".into(),
        pass: pts.len() as i64 == expected,
        detail: format!("{} points, ∏(|ω_j|+1) = {expected}", pts.len()),
        millis: None,
    }];
    let mut r = Report::new(vec![], items, json!({ "omega": omega, "points": pts }));
    r.dot = Some(adjacency_dot("rectangle", &nodes));
    Ok(r)
}

fn socle(p: u64, sigma: &str) -> Result<(Params, SerreWeight), CliError> {
    let lambda = pairs(sigma)?;
    let params = Params::new(p, lambda.0.len()).map_err(usage)?;
    let s = SerreWeight::from_weight(&params, &lambda).map_err(usage)?;
    Ok((params, s))
}

fn graph_inj(ctx: &Ctx, a: &JhArgs) -> Result<Report, CliError> {
    let (params, s) = socle(ctx.p(a.p)?, &a.sigma)?;
    let prof = repstruct::jh_inj_n(&params, &s, a.n).map_err(failed)?;
    let nodes: Vec<(GraphPoint, String)> = prof
        .entries
        .iter()
        .map(|e| (e.point.clone(), format!("{}\\n×{}", e.point, e.multiplicity)))
        .collect();
    let mut r = Report::new(vec![], vec![], to_value(&prof)?);
    r.dot = Some(adjacency_dot("inj", &nodes));
    Ok(r)
}

fn jh(ctx: &Ctx, a: &JhArgs) -> Result<Report, CliError> {
    let (params, s) = socle(ctx.p(a.p)?, &a.sigma)?;
    let prof = repstruct::jh_inj_n(&params, &s, a.n).map_err(failed)?;
    let top = prof.level_coefficients.last().copied();
    let items = vec![Item {
        key: "top-level".into(),
        pass: top == Some(1),
        detail: format!("level coefficients {:?}", prof.level_coefficients),
        millis: None,
    }];
    Ok(Report::new(vec![], items, to_value(&prof)?))
}

fn imod(ctx: &Ctx, a: &ImodArgs) -> Result<Report, CliError> {
    let (params, s) = socle(ctx.p(a.p)?, &a.sigma)?;
    let omega = point(&a.omega)?;
    let chart = Chart::centred_at(params, &s);
    let data = repstruct::imod_in_chart(&chart, &omega).map_err(failed)?;
    let expected: i64 = omega.0.iter().map(|x| x.abs() + 1).product();
    let covered: usize = data.graded_pieces.iter().flatten().map(|g| g.members.len()).sum();
    let items = vec![
        Item {
            key: "rectangle".into(),
            pass: data.jh.len() as i64 == expected,
            detail: format!("{} constituents", data.jh.len()),
            millis: None,
        },
        Item {
            key: "graded-pieces".into(),
            pass: covered == data.jh.len(),
            detail: format!("{covered} members in {} levels", data.graded_pieces.len()),
            millis: None,
        },
    ];
    let nodes: Vec<(GraphPoint, String)> = data.jh.iter().map(|c| (c.point.clone(), c.weight.to_string())).collect();
    let mut r = Report::new(vec![], items, to_value(&data)?);
    r.dot = Some(adjacency_dot("imod", &nodes));
    Ok(r)
}

fn weights_cmd(ctx: &Ctx, a: &WeightsArgs) -> Result<Report, CliError> {
    let mu = pairs(&a.mu)?;
    let params = Params::new(ctx.p(a.p)?, mu.0.len()).map_err(usage)?;
    let pts = match &a.omega {
        Some(o) => vec![point(o)?],
        None => weights::lambda_mu_points(&params, &mu),
    };
    let rows = pts
        .iter()
        .map(|w| {
            let rep = weights::t_mu_rep(&params, &mu, w).map_err(failed)?;
            let sw = SerreWeight::from_weight(&params, &rep).map_err(failed)?;
            Ok(json!({ "omega": w, "representative": rep, "weight": sw, "display": sw.to_string() }))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    let mut items = Vec::new();
    if a.omega.is_none() {
        let image: BTreeSet<String> = rows.iter().map(|r| r["display"].to_string()).collect();
        items.push(Item {
            key: "injective".into(),
            pass: image.len() == rows.len(),
            detail: format!("{} points, {} weights", rows.len(), image.len()),
            millis: None,
        });
    }
    Ok(Report::new(vec![], items, json!({ "mu": mu, "points": rows })))
}

fn types_cmd(ctx: &Ctx, a: &TypesArgs) -> Result<Report, CliError> {
    let rho = ctx.rho(&a.rho)?;
    let lambda: HTWeight = a.lambda.parse().map_err(usage)?;
    let w = typesweights::w_of_rhobar(&rho).map_err(failed)?;
    let x = typesweights::x_rho_lambda(&rho, &lambda);
    let by_def = typesweights::x_rho_lambda_by_definition(&rho, &lambda).map_err(failed)?;
    let mut types = Vec::new();
    for wt in typesweights::adm_set(&lambda) {
        let tau = typesweights::tau_of_wtilde(&rho, &wt).map_err(failed)?;
        let jh = typesweights::jh_sigma_lambda_tau(&lambda, &tau).map_err(failed)?;
        let inter = typesweights::modular_intersection(&rho, &lambda, &wt).map_err(failed)?;
        types.push(json!({
            "wtilde": wt.to_string(),
            "jh": jh.iter().map(|c| &c.point).collect::<Vec<_>>(),
            "modular": inter.iter().map(|m| &m.point).collect::<Vec<_>>(),
            "s_total": typesweights::s_total(&wt, &lambda, &rho),
        }));
    }
    let zeros = rho.gamma_nonzero.iter().filter(|g| !**g).count();
    let items = vec![
        Item {
            key: "modular-count".into(),
            pass: w.len() == 1 << zeros,
            detail: format!("|W(ρ̄)| = {}", w.len()),
            millis: None,
        },
        Item {
            key: "x-lemma".into(),
            pass: x == by_def,
            detail: format!("|X(ρ̄, λ)| = {}", x.len()),
            millis: None,
        },
    ];
    let payload = json!({
        "rho": rho,
        "lambda": lambda,
        "modular_weights": w,
        "x_rho_lambda": x.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "types": types,
    });
    Ok(Report::new(vec![], items, payload))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CaseKey(Case, i64, i64);

impl std::fmt::Display for CaseKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "defring/{}({},{})", self.0, self.1, self.2)
    }
}

fn defring_items(ctx: &Ctx, cases: Vec<(Case, i64, i64)>) -> Vec<Item> {
    let keys: Vec<CaseKey> = cases.into_iter().map(|(c, m, n)| CaseKey(c, m, n)).collect();
    ctx.items(keys, |k| {
        let sol = defring::verify_solution(k.0, k.1, k.2).map_err(|e| e.to_string())?;
        let rel = defring::verify_relations(k.0, k.1, k.2).map_err(|e| e.to_string())?;
        let n_rel: usize = rel.identities.iter().map(|(_, c)| c).sum();
        Ok(format!(
            "{} equations, {} star factors, {} relation instances",
            sol.checks.len(),
            sol.star.len(),
            n_rel
        ))
    })
}

fn defring_verify(ctx: &Ctx, case: Option<Case>, m: Option<i64>, n: Option<i64>, max_ell: Option<i64>) -> Result<Report, CliError> {
    let cases = match (case, m, n) {
        (Some(c), Some(m), Some(n)) => {
            if !defring::in_table(c, m, n) && !defring::all_cases(m + n).contains(&(c, m, n)) {
                return Err(usage(format!("{c}({m},{n}) is outside the table domain")));
            }
            vec![(c, m, n)]
        }
        (None, None, None) => {
            let bound = max_ell.or(ctx.cfg.max_ell).unwrap_or(4);
            if bound < 1 {
                return Err(usage("--max-ell must be at least 1"));
            }
            defring::all_cases(bound)
        }
        _ => return Err(usage("give all of --case, --m, --n or none of them")),
    };
    let items = defring_items(ctx, cases);
    let payload = json!({ "cases": items.len() });
    Ok(Report::new(vec![], items, payload))
}

fn defring_present(ctx: &Ctx, rho: &RhoArg, lambda: &str, wtilde: &str) -> Result<Report, CliError> {
    let rho = ctx.rho(rho)?;
    let lambda: HTWeight = lambda.parse().map_err(usage)?;
    let w: AdmElt = wtilde.parse().map_err(usage)?;
    let spec = defring::presentation(&rho, &lambda, &w).map_err(failed)?;
    let items = vec![Item {
        key: "components".into(),
        pass: spec.components.len() == 1 << spec.m_count,
        detail: format!("2^{} components, {} free variables", spec.m_count, spec.free_vars),
        millis: None,
    }];
    Ok(Report::new(vec![], items, to_value(&spec)?))
}

fn padic_cert(ctx: &Ctx, p: Option<u64>, roots: &str, variant: Variant) -> Result<Report, CliError> {
    let p = ctx.p(p)?;
    let roots = RootSpec::parse_roots(roots).map_err(usage)?;
    let spec = RootSpec::new(p, roots, variant);
    let report = padicval::check_spec(&spec).map_err(failed)?;
    let cert = padicval::extract_certificate(&spec).map_err(failed)?;
    let verified = cert.verify();
    let items = vec![
        Item {
            key: "determinant".into(),
            pass: report.det_sign.is_some() && report.vp_det == report.expected_vp_det,
            detail: format!("v_p(D) = {} (expected {})", report.vp_det, report.expected_vp_det),
            millis: None,
        },
        Item {
            key: "identity".into(),
            pass: verified.is_ok(),
            detail: match &verified {
                Ok(()) => "x₀ = u·G + v·G' exactly".into(),
                Err(e) => e.to_string(),
            },
            millis: None,
        },
        Item {
            key: "bound".into(),
            pass: cert.within_bound(),
            detail: format!("v_p(x₀) = {} ≤ {}", cert.valuation, cert.bound),
            millis: None,
        },
    ];
    Ok(Report::new(vec![], items, json!({ "certificate": cert, "report": report })))
}

fn rat_list(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Rat>().map_err(|_| usage(format!("not a rational number: {t:?}"))))
        .collect()
}

fn lattice_profile(ctx: &Ctx, a: &ProfileArgs) -> Result<Report, CliError> {
    let origin = a.origin.as_deref().map(point).transpose()?;
    let site = match (&a.lo, &a.hi) {
        (Some(lo), Some(hi)) => {
            let lo = ints(lo)?;
            let s = match &a.s_tilde {
                Some(s) => ints(s)?,
                None => vec![0; lo.len()],
            };
            let origin = origin.unwrap_or_else(|| GraphPoint::zero(lo.len()));
            LatticeSite::single(PlaceBox::new(lo, ints(hi)?, origin, s).map_err(usage)?)
        }
        (None, None) => {
            let rho = ctx.rho(&a.rho)?;
            let lambda: HTWeight = a.lambda.as_deref().ok_or_else(|| usage("--lambda is required"))?.parse().map_err(usage)?;
            let w: AdmElt = a.wtilde.as_deref().ok_or_else(|| usage("--wtilde is required"))?.parse().map_err(usage)?;
            LatticeSite::from_data(&rho, &lambda, &w, origin.as_ref()).map_err(failed)?
        }
        _ => return Err(usage("give both --lo and --hi")),
    };
    let ts = rat_list(&a.t)?;
    let f = site.places[0].f();
    let point = match ts.len() {
        1 => PadicPoint::uniform(&site, ts[0].clone()),
        n if n == f => PadicPoint { t: vec![ts] },
        n => return Err(usage(format!("{n} values of t for {f} coordinates"))),
    };
    let prof = lattices::lattice_profile(&site, &point).map_err(usage)?;
    let zero = prof.value(&site.origin()).is_some_and(|v| *v == Rat::from_integer(0.into()));
    let items = vec![Item {
        key: "origin".into(),
        pass: zero,
        detail: format!("v(κ∘) = 0, values {{{}}}", prof.distinct_values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")),
        millis: None,
    }];
    let mut r = Report::new(vec![], items, json!({ "site": site, "profile": prof }));
    r.dot = Some(prof.to_dot(&site));
    Ok(r)
}

fn intervals(a: &IntervalArgs) -> Result<Report, CliError> {
    if a.k == 0 || a.k > 8 {
        return Err(usage("--k must lie in 1..=8"));
    }
    if a.exhaustive {
        let s = lattices::interval_checks_exhaustive(a.k);
        let items = vec![
            Item {
                key: "sum-law".into(),
                pass: s.sum_failures == 0,
                detail: format!("{} pairs with a common cap", s.pairs),
                millis: None,
            },
            Item {
                key: "quotient".into(),
                pass: s.quotient_failures == 0,
                detail: format!("{} intervals", s.quotients),
                millis: None,
            },
        ];
        return Ok(Report::new(vec![], items, to_value(&s)?));
    }
    let cap = jset(&a.cap)?;
    let w1 = CappedInterval::new(jset(&a.lower1)?, cap, a.punctured1).map_err(usage)?;
    let cap2 = a.cap2.as_deref().map(jset).transpose()?.unwrap_or(cap);
    let w2 = CappedInterval::new(jset(&a.lower2)?, cap2, a.punctured2).map_err(usage)?;
    let full: lattices::JMask = (1 << a.k) - 1;
    if (cap | cap2) & !full != 0 {
        return Err(usage("indices exceed --k"));
    }
    let capped = cap == cap2;
    let rep = lattices::sum_vs_intersection(a.k, &w1.members(), &w2.members());
    let quotient = lattices::quotient_check(a.k, w1.lower, w1.cap).map_err(usage)?;
    let items = vec![
        Item {
            key: "sum-law".into(),
            pass: rep.sum_equals_intersection || !capped,
            detail: format!(
                "I1 + I2 = {}, I(W1 ∩ W2) = {}{}",
                rep.sum,
                rep.intersection,
                if capped { "" } else { " (caps differ; no equality expected)" }
            ),
            millis: None,
        },
        Item {
            key: "quotient".into(),
            pass: quotient.ok(),
            detail: format!("generator {}", quotient.generator),
            millis: None,
        },
    ];
    let fam = |w: &CappedInterval| w.members().into_iter().map(lattices::set_of).collect::<Vec<_>>();
    let payload = json!({
        "w1": fam(&w1),
        "w2": fam(&w2),
        "common_cap": capped,
        "sum": rep.sum.to_string(),
        "intersection": rep.intersection.to_string(),
        "equal": rep.sum_equals_intersection,
        "quotient": quotient,
    });
    Ok(Report::new(vec![], items, payload))
}

fn verify_all(ctx: &Ctx, a: &VerifyAllArgs) -> Result<Report, CliError> {
    let bound = a.max_ell.or(ctx.cfg.max_ell).unwrap_or(6);
    if bound < 1 {
        return Err(usage("--max-ell must be at least 1"));
    }
    let mut items = defring_items(ctx, defring::all_cases(bound));

    let mut specs = Vec::new();
    for p in [5u64, 7, 11, 13] {
        for k in 1..=6i64.min(p as i64 - 1) {
            for variant in [Variant::Monic, Variant::XFactor] {
                let coeffs: Vec<i64> = (1..=k).map(|c| c + (c - 1) * p as i64).collect();
                specs.push((format!("padic/p{p}/k{k}/{variant}"), padicval::scaled_roots(p, &coeffs, variant)));
            }
        }
    }
    #[derive(Clone)]
    struct Keyed(String, RootSpec);
    impl std::fmt::Display for Keyed {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str(&self.0)
        }
    }
    let keyed: Vec<Keyed> = specs.into_iter().map(|(k, s)| Keyed(k, s)).collect();
    items.extend(ctx.items(keyed, |k| {
        let rep = padicval::check_spec(&k.1).map_err(|e| e.to_string())?;
        if rep.ok() {
            Ok(format!("v_p(D) = {}, v_p(x₀) = {} ≤ {}", rep.vp_det, rep.valuation, rep.bound))
        } else {
            Err(format!("{rep:?}"))
        }
    }));

    let mut lattice_keys = Vec::new();
    for f in 1..=2usize {
        for pos in 0..4usize.pow(f as u32) {
            let lo: Vec<i64> = (0..f).map(|j| -((pos / 4usize.pow(j as u32)) as i64 % 4)).collect();
            lattice_keys.push(format!("lattice/triangle/f{f}/lo{}", lo.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
    }
    for k in 1..=4 {
        lattice_keys.push(format!("lattice/intervals/k{k}"));
    }
    items.extend(ctx.items(lattice_keys, |key| {
        if let Some(k) = key.strip_prefix("lattice/intervals/k") {
            let k: usize = k.parse().map_err(|e| format!("{e}"))?;
            let s = lattices::interval_checks_exhaustive(k);
            return if s.ok() { Ok(format!("{} pairs, {} quotients", s.pairs, s.quotients)) } else { Err(format!("{s:?}")) };
        }
        let lo_text = key.rsplit("/lo").next().unwrap_or_default();
        let lo: Vec<i64> = lo_text.split(',').map(|x| x.parse().unwrap_or(0)).collect();
        let hi: Vec<i64> = lo.iter().map(|l| l + 3).collect();
        let f = lo.len();
        let place = PlaceBox::new(lo, hi, GraphPoint::zero(f), vec![0; f]).map_err(|e| e.to_string())?;
        let s = lattices::triangle_law_exhaustive(&LatticeSite::single(place));
        if s.failures == 0 {
            Ok(format!("{} triples, {} equalities", s.triples, s.equalities))
        } else {
            Err(format!("{} failures", s.failures))
        }
    }));
    let passed = items.iter().filter(|i| i.pass).count();
    let payload = json!({ "max_ell": bound, "items": items.len(), "passed": passed });
    Ok(Report::new(vec![], items, payload))
}
