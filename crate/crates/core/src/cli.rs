//! Command-line front end.
//!
//! Structured output is JSON with every float written to 17 significant
//! digits; plot data is CSV. Complex numbers are `[re, im]` arrays in JSON
//! and a pair of columns in CSV.
//!
//! Exit codes: 0 success (including certificate warnings), 2 invalid input,
//! 3 numerical failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::agcd::{approximate_gcd, AgcdParams, AgcdResult, Matcher, Materialized};
use crate::cluster::{self, ClusterParams, MergeRule, Strategy};
use crate::error::Error;
use crate::lagpoly::{LagrangePoly, Root, RootList};
use crate::matching::Matching;
use crate::metric::Rho;
use crate::rootfind;

/// Environment variable seeding every pseudorandom generator.
pub const SEED_ENV: &str = "LAGCD_SEED";
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// `LAGCD_SEED` if set and parseable, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// 17 significant digits, so the value round-trips exactly.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re,im` as two CSV fields.
pub fn format_complex(z: Complex64) -> String {
    format!("{},{}", format_real(z.re), format_real(z.im))
}

/// Pretty JSON with floats in [`format_real`] form; non-finite floats
/// become `null`.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_real(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing a Value into memory cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json writes UTF-8");
    s.push('\n');
    s
}

/// A real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Number> for Complex64 {
    fn from(n: Number) -> Self {
        match n {
            Number::Real(x) => Complex64::new(x, 0.0),
            Number::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for Number {
    fn from(z: Complex64) -> Self {
        Number::Complex([z.re, z.im])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaOverrides {
    pub cluster: Option<f64>,
    pub edge: Option<f64>,
    pub cert: Option<f64>,
}

/// Input problem: samples of `P` and `Q` plus pipeline settings.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProblemFile {
    pub px: Vec<Number>,
    pub py: Vec<Number>,
    #[serde(default)]
    pub qx: Vec<Number>,
    #[serde(default)]
    pub qy: Vec<Number>,
    pub sigma: Option<f64>,
    pub strategy: Option<Strategy>,
    pub max_multiplicity: Option<u32>,
    pub rho: Option<Rho>,
    pub sigma_overrides: Option<SigmaOverrides>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Dnc,
    Heuristic,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Dnc => Strategy::DivideAndConquer,
            StrategyArg::Heuristic => Strategy::SymmetryHeuristic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RhoArg {
    Sum,
    Max,
}

impl From<RhoArg> for Rho {
    fn from(r: RhoArg) -> Self {
        match r {
            RhoArg::Sum => Rho::Sum,
            RhoArg::Max => Rho::Max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatcherArg {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MergeRuleArg {
    Weighted,
    Midpoint,
}

impl From<MergeRuleArg> for MergeRule {
    fn from(m: MergeRuleArg) -> Self {
        match m {
            MergeRuleArg::Weighted => MergeRule::Weighted,
            MergeRuleArg::Midpoint => MergeRule::Midpoint,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lagcd", version, about = "Approximate GCD of polynomials given by values at nodes")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots and residuals of one side of a problem file, as JSON.
    Roots {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "p")]
        side: SideArg,
    },
    /// Full approximate-GCD pipeline, as JSON.
    Agcd(PipelineArgs),
    /// Bipartite graph of the clustered roots, as CSV.
    Graph(PipelineArgs),
    /// Clusters a points file, as CSV.
    Cluster(ClusterArgs),
    /// Seeded pseudorandom points in the unit square, as a points file.
    SamplePoints {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Defaults to LAGCD_SEED.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long = "max-mult")]
    pub max_mult: Option<u32>,
    #[arg(long, value_enum)]
    pub rho: Option<RhoArg>,
    #[arg(long, value_enum, default_value = "greedy")]
    pub matcher: MatcherArg,
    #[arg(long = "merge-rule", value_enum, default_value = "weighted")]
    pub merge_rule: MergeRuleArg,
    /// Repeat the divide-and-conquer pass until nothing merges.
    #[arg(long)]
    pub fixpoint: bool,
    #[arg(long = "sigma-cluster")]
    pub sigma_cluster: Option<f64>,
    #[arg(long = "sigma-edge")]
    pub sigma_edge: Option<f64>,
    #[arg(long = "sigma-cert")]
    pub sigma_cert: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    /// JSON array of entries `value` or `[value, multiplicity]`, where a
    /// value is a real or `[re, im]`. An empty file is an empty list.
    pub input: PathBuf,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "dnc")]
    pub strategy: StrategyArg,
    #[arg(long = "max-mult", default_value_t = 3)]
    pub max_mult: u32,
    #[arg(long, default_value_t = 1.0)]
    pub fuzz: f64,
    #[arg(long = "merge-rule", value_enum, default_value = "weighted")]
    pub merge_rule: MergeRuleArg,
    #[arg(long)]
    pub fixpoint: bool,
}

/// A failed command: message for stderr and process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EigensolveFailure { .. } => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn read_problem(path: &Path) -> CliResult<ProblemFile> {
    parse_problem(&read_text(path)?)
}

pub fn parse_problem(text: &str) -> CliResult<ProblemFile> {
    let problem: ProblemFile =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid problem file: {e}")))?;
    if let Some(s) = problem.sigma {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(CliError::input(format!("sigma must be finite and >= 0, got {s}")));
        }
    }
    Ok(problem)
}

fn side_poly(xs: &[Number], ys: &[Number], name: &str) -> CliResult<LagrangePoly> {
    if xs.len() != ys.len() {
        return Err(Error::ShapeMismatch {
            nodes: xs.len(),
            values: ys.len(),
        }
        .into());
    }
    if xs.len() < 2 {
        return Err(CliError::input(format!("{name}: at least 2 nodes are required, got {}", xs.len())));
    }
    let nodes = xs.iter().map(|&n| n.into()).collect();
    let values = ys.iter().map(|&n| n.into()).collect();
    LagrangePoly::new(nodes, values).map_err(|e| CliError::from(e).prefixed(name))
}

impl CliError {
    fn prefixed(mut self, name: &str) -> Self {
        self.message = format!("{name}: {}", self.message);
        self
    }
}

impl ProblemFile {
    pub fn p(&self) -> CliResult<LagrangePoly> {
        side_poly(&self.px, &self.py, "P")
    }

    pub fn q(&self) -> CliResult<LagrangePoly> {
        side_poly(&self.qx, &self.qy, "Q")
    }

    /// Pipeline settings from the file, overridden by `args`.
    pub fn params(&self, args: &PipelineArgs) -> CliResult<AgcdParams> {
        let sigma = args
            .sigma
            .or(self.sigma)
            .ok_or_else(|| CliError::input("sigma is required (in the file or via --sigma)"))?;
        let mut params = AgcdParams::new(sigma);
        let overrides = self.sigma_overrides.unwrap_or_default();
        params.sigma_cluster = args.sigma_cluster.or(overrides.cluster);
        params.sigma_edge = args.sigma_edge.or(overrides.edge);
        params.sigma_cert = args.sigma_cert.or(overrides.cert);
        if let Some(s) = args.strategy.map(Strategy::from).or(self.strategy) {
            params.strategy = s;
        }
        if let Some(m) = args.max_mult.or(self.max_multiplicity) {
            params.max_multiplicity = m;
        }
        if let Some(r) = args.rho.map(Rho::from).or(self.rho) {
            params.rho = r;
        }
        params.matcher = match args.matcher {
            MatcherArg::Greedy => Matcher::Greedy,
            MatcherArg::Exact => Matcher::Exact,
        };
        params.merge_rule = args.merge_rule.into();
        params.fixpoint = args.fixpoint;
        Ok(params)
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn roots_json(roots: &RootList) -> Value {
    Value::Array(
        roots
            .iter()
            .map(|r| json!({ "value": complex_json(r.value), "multiplicity": r.multiplicity }))
            .collect(),
    )
}

fn materialized_json(m: &Materialized) -> Value {
    json!({
        "degree": m.degree(),
        "roots": roots_json(&m.roots),
        "nodes": m.samples.nodes().iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
        "values": m.samples.values().iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
    })
}

fn matching_json(m: &Matching, r: &AgcdResult) -> Value {
    json!({
        "totalWeight": m.total_weight,
        "edges": m.edges.iter().map(|e| json!({
            "left": complex_json(r.graph.left.entries()[e.left].value),
            "right": complex_json(r.graph.right.entries()[e.right].value),
            "weight": e.weight,
            "distance": e.distance,
        })).collect::<Vec<_>>(),
    })
}

/// The JSON document emitted by `agcd`.
pub fn agcd_json(r: &AgcdResult) -> Value {
    json!({
        "gcd": materialized_json(&r.gcd),
        "pTilde": materialized_json(&r.p_tilde),
        "qTilde": materialized_json(&r.q_tilde),
        "pCofactor": roots_json(&r.p_cofactor),
        "qCofactor": roots_json(&r.q_cofactor),
        "pClusters": roots_json(&r.p_clusters.roots),
        "qClusters": roots_json(&r.q_clusters.roots),
        "matching": matching_json(&r.matching, r),
        "distP": r.dist_p,
        "distQ": r.dist_q,
        "certP": r.cert_p,
        "certQ": r.cert_q,
        "sigma": { "cluster": r.sigmas.cluster, "edge": r.sigmas.edge, "cert": r.sigmas.cert },
        "rho": r.rho,
        "warnings": r.warnings,
    })
}

/// The JSON array emitted by `roots`.
pub fn roots_report_json(report: &rootfind::RootfindReport) -> Value {
    Value::Array(
        report
            .roots
            .iter()
            .zip(&report.residuals)
            .map(|(&z, &res)| json!({ "root": complex_json(z), "residual": res }))
            .collect(),
    )
}

fn parse_point_value(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

/// Parses a points file. Each entry is `value` (multiplicity 1) or
/// `[value, multiplicity]`; a value is a real or `[re, im]`.
pub fn parse_points(text: &str) -> CliResult<RootList> {
    if text.trim().is_empty() {
        return Ok(RootList::empty());
    }
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid points file: {e}")))?;
    let entries = doc
        .as_array()
        .ok_or_else(|| CliError::input("points file must be a JSON array"))?;
    let mut roots = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let bad = || CliError::input(format!("points file entry {i} is not `value` or `[value, multiplicity]`"));
        let root = match entry {
            Value::Number(_) => Root::simple(parse_point_value(entry).ok_or_else(bad)?),
            Value::Array(pair) if pair.len() == 2 && pair[1].is_u64() => {
                let mult = pair[1].as_u64().filter(|&m| m >= 1 && m <= u32::MAX as u64).ok_or_else(bad)?;
                Root::new(parse_point_value(&pair[0]).ok_or_else(bad)?, mult as u32)
            }
            _ => return Err(bad()),
        };
        if !(root.value.re.is_finite() && root.value.im.is_finite()) {
            return Err(Error::NonFinite(i).into());
        }
        roots.push(root);
    }
    Ok(RootList::new(roots)?)
}

/// Seeded points in `[0, 1)^2` in points-file form.
pub fn unit_square_points(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Complex64::new(rng.gen(), rng.gen())).collect()
}

pub const CLUSTER_CSV_HEADER: &str = "re,im,multiplicity,cluster_id,was_merged";

pub fn cluster_csv(clustering: &cluster::Clustering) -> String {
    let mut out = format!("{CLUSTER_CSV_HEADER}\n");
    for (k, r) in clustering.roots.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_complex(r.value),
            r.multiplicity,
            k,
            clustering.was_merged(k)
        ));
    }
    out
}

fn run_pipeline(args: &PipelineArgs) -> CliResult<AgcdResult> {
    let problem = read_problem(&args.input)?;
    let params = problem.params(args)?;
    Ok(approximate_gcd(&problem.p()?, &problem.q()?, &params)?)
}

/// Runs one command and returns what it prints.
pub fn execute(command: &Command) -> CliResult<String> {
    match command {
        Command::Roots { input, side } => {
            let problem = read_problem(input)?;
            let poly = match side {
                SideArg::P => problem.p()?,
                SideArg::Q => problem.q()?,
            };
            let report = rootfind::roots(&poly)?;
            for note in &report.conditioning.notes {
                log::warn!("{note}");
            }
            Ok(to_json_string(&roots_report_json(&report)))
        }
        Command::Agcd(args) => Ok(to_json_string(&agcd_json(&run_pipeline(args)?))),
        Command::Graph(args) => Ok(run_pipeline(args)?.graph.to_csv()),
        Command::Cluster(args) => {
            let roots = parse_points(&read_text(&args.input)?)?;
            let params = ClusterParams {
                sigma: args.sigma,
                max_multiplicity: args.max_mult,
                fuzz_factor: args.fuzz,
                strategy: args.strategy.into(),
                merge_rule: args.merge_rule.into(),
                fixpoint: args.fixpoint,
            };
            Ok(cluster_csv(&cluster::cluster(&roots, &params)?))
        }
        Command::SamplePoints { count, seed } => {
            let pts = unit_square_points(*count, seed.unwrap_or_else(seed_from_env));
            let doc: Vec<Value> = pts.into_iter().map(|z| json!([complex_json(z), 1])).collect();
            Ok(to_json_string(&Value::Array(doc)))
        }
    }
}

/// Parses `args`, executes, writes the output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let text = match execute(&cli.command) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_INPUT
        }
    }
}
