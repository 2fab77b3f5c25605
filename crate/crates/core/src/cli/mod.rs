//! The `twrc` command line.
//!
//! Every command computes its outputs in memory, then writes them and a
//! run manifest from one place at the end. `replay` re-runs a manifest's
//! config and compares output digests.
//!
//! Exit codes: 0 success, 1 runtime or budget failure, 2 non-deterministic
//! uplink, 3 malformed input.

mod manifest;

pub use manifest::{digest_hex, FileDigest, RunConfig, RunManifest};

use crate::channel::{builtin_channel, emit_channel_spec, parse_channel_spec, ChannelError, ChannelSpec};
use crate::prob::{Pmf, ProbError};
use crate::region::{
    capacity_layers, cf_evaluate, conv_r1, decompose_time_sharing, r4_hull, region_contains, region_csv,
    regions_svg, CfInput, RatePoint, RegionConfig, RegionError, RegionPolyline, SearchConfig, CERT_TOLERANCE,
};
use crate::sim::{reports_csv, sweep, CodebookMode, SimConfig, SimError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_NOT_DETERMINISTIC: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Runtime(String),
    NotDeterministic(String),
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::NotDeterministic(_) => EXIT_NOT_DETERMINISTIC,
            CliError::Parse(_) => EXIT_PARSE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Runtime(m) | CliError::NotDeterministic(m) | CliError::Parse(m) => m,
        }
    }
}

impl From<ChannelError> for CliError {
    fn from(e: ChannelError) -> Self {
        match e {
            ChannelError::NotDeterministic { .. } => CliError::NotDeterministic(format!(
                "{e}; the capacity region and the coding scheme need a deterministic uplink, \
                 Y0 a function of (X1, X2)"
            )),
            ChannelError::AlphabetTooLarge { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<RegionError> for CliError {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::Channel(c) => c.into(),
            RegionError::Prob(_) | RegionError::Cardinality { .. } | RegionError::InvalidPoint { .. } | RegionError::Csv { .. } => {
                CliError::Parse(e.to_string())
            }
            RegionError::BudgetExceeded { .. } => CliError::Runtime(format!(
                "{e}; lower --resolution or --lambda-steps, or raise the budget in the config"
            )),
            RegionError::PointOutsideRegion { .. } | RegionError::EmptyRegion => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Channel(c) => c.into(),
            SimError::Prob(_) | SimError::Invalid(_) => CliError::Parse(e.to_string()),
            SimError::Budget(_) => CliError::Runtime(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "twrc", version, about = "Rate regions and coding simulation for the two-way relay channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity region with its uplink and downlink layers.
    Region(RegionArgs),
    /// Time-sharing components reaching a point of the uplink region.
    Decompose(DecomposeArgs),
    /// Monte Carlo error rates of the relay-index scheme.
    Simulate(SimulateArgs),
    /// Rates and constraint margins of one compress-forward choice.
    CfCheck(CfCheckArgs),
    /// Re-run a manifest and compare its outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// `builtin:<name>` or a channel spec file.
    channel: String,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    common: Common,
    /// Simplex grid resolution of the uplink search.
    #[arg(long, default_value_t = 64)]
    resolution: usize,
    #[arg(long, default_value_t = 257)]
    lambda_steps: usize,
    #[arg(long, value_enum, default_values_t = [OutFormat::Csv])]
    out: Vec<OutFormat>,
    /// Also emit the triple-based inner region.
    #[arg(long)]
    r4: bool,
    #[arg(long, default_value_t = 16)]
    r4_resolution: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: Common,
    /// Target as `r1,r2`.
    #[arg(long, value_parser = parse_point)]
    point: RatePoint,
    #[arg(long, default_value_t = 64)]
    resolution: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Rates as `R1,R2` in bits per symbol.
    #[arg(long, value_parser = parse_point)]
    rates: RatePoint,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Blocks per transmission.
    #[arg(long = "B", default_value_t = 10)]
    blocks: usize,
    #[arg(long, default_value_t = 100)]
    batch_size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    #[arg(long, default_value_t = 24)]
    bit_cap: u32,
    /// Input pmfs as comma-separated masses; uniform when absent.
    #[arg(long, value_parser = parse_pmf)]
    p1: Option<Pmf>,
    #[arg(long, value_parser = parse_pmf)]
    p2: Option<Pmf>,
    #[arg(long, value_parser = parse_pmf)]
    p0: Option<Pmf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Explicit,
    Implicit,
}

#[derive(Debug, Args)]
struct CfCheckArgs {
    #[command(flatten)]
    common: Common,
    /// JSON document with q_pmf, x1_given_q, x2_given_q, y0hat_given_y0, x0_pmf.
    #[arg(long)]
    cf_input: PathBuf,
    /// Margins must exceed this strictly.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    manifest: PathBuf,
    #[arg(long, default_value = "replay")]
    out_dir: PathBuf,
}

fn parse_point(s: &str) -> Result<RatePoint, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected r1,r2 but got '{s}'"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
    RatePoint::try_new(num(a)?, num(b)?).map_err(|e| e.to_string())
}

fn parse_pmf(s: &str) -> Result<Pmf, String> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    Pmf::new(vals).map_err(|e: ProbError| e.to_string())
}

/// Resolves a channel URI, returning the spec and the digest of its text.
pub fn load_channel(uri: &str) -> Result<(ChannelSpec, FileDigest), CliError> {
    if let Some(name) = uri.strip_prefix("builtin:") {
        let spec = builtin_channel(name)?;
        let digest = digest_hex(emit_channel_spec(&spec).as_bytes());
        return Ok((spec, FileDigest::new(uri, digest)));
    }
    let text = std::fs::read_to_string(uri).map_err(|e| CliError::Parse(format!("cannot read {uri}: {e}")))?;
    let spec = parse_channel_spec(&text)?;
    Ok((spec, FileDigest::new(uri, digest_hex(text.as_bytes()))))
}

/// Output files by name, and text for stdout.
struct Outputs {
    files: Vec<(String, String)>,
    stdout: String,
}

fn region_outputs(spec: &ChannelSpec, cfg: &RegionConfig, formats: &[OutFormat], r4: bool) -> Result<Outputs, CliError> {
    let layers = capacity_layers(spec, cfg)?;
    for v in &layers.capacity.vertices {
        for (name, outer) in [("uplink", &layers.conv_r1), ("downlink", &layers.r2_frontier)] {
            if !region_contains(outer, &v.point, CERT_TOLERANCE) {
                return Err(CliError::Runtime(format!("capacity vertex {} lies outside the {name} layer", v.point)));
            }
        }
    }
    let r4_layer = if r4 { Some(r4_hull(spec, cfg)?) } else { None };
    let mut named: Vec<(&str, &RegionPolyline)> = vec![
        ("conv_r1", &layers.conv_r1),
        ("r2_frontier", &layers.r2_frontier),
    ];
    if let Some(r) = &r4_layer {
        named.push(("r4_hull", r));
    }
    named.push(("capacity", &layers.capacity));

    let mut files = Vec::new();
    if formats.contains(&OutFormat::Csv) {
        for (name, r) in &named {
            files.push((format!("{name}.csv"), region_csv(r)));
        }
    }
    if formats.contains(&OutFormat::Svg) {
        files.push(("region.svg".to_string(), regions_svg(&named)));
    }
    let mut stdout = String::new();
    let cap = &layers.capacity;
    let _ = writeln!(stdout, "channel {}", spec.name);
    let _ = writeln!(stdout, "capacity vertices {}", cap.vertices.len());
    for v in &cap.vertices {
        let _ = writeln!(stdout, "  {},{}", v.point.r1, v.point.r2);
    }
    if let Some(v) = cap.max_sum_vertex() {
        let _ = writeln!(stdout, "max sum-rate vertex {},{}", v.point.r1, v.point.r2);
    }
    if let Some(g) = layers.r2_frontier.max_gap {
        let _ = writeln!(stdout, "downlink max gap {g:e}");
    }
    Ok(Outputs { files, stdout })
}

fn pmf_list(p: &Pmf) -> String {
    p.probs().iter().map(|v| v.to_string()).collect::<Vec<_>>().join("/")
}

fn decompose_outputs(spec: &ChannelSpec, point: &RatePoint, search: &SearchConfig) -> Result<Outputs, CliError> {
    let table = spec.uplink.table()?;
    let conv = conv_r1(&table, search)?;
    let ts = decompose_time_sharing(point, &conv)?;
    let residual = ts.residual(point, &table)?;
    let mut text = String::new();
    let _ = writeln!(text, "target,{},{}", point.r1, point.r2);
    let _ = writeln!(text, "component,weight,p1,p2,r1,r2");
    for (i, c) in ts.components.iter().enumerate() {
        let r = crate::region::uplink_rectangle(&c.p1, &c.p2, &table)?;
        let _ = writeln!(text, "{i},{},{},{},{},{}", c.weight, pmf_list(&c.p1), pmf_list(&c.p2), r.r1, r.r2);
    }
    let _ = writeln!(text, "residual,{residual:e}");
    Ok(Outputs {
        files: vec![("decompose.csv".into(), text.clone())],
        stdout: text,
    })
}

fn simulate_outputs(spec: &ChannelSpec, cfg: &SimConfig, n_list: &[usize]) -> Result<Outputs, CliError> {
    let reports = sweep(spec, cfg, n_list)?;
    let csv = reports_csv(&reports);
    let timeless: Vec<_> = reports.iter().map(|r| r.without_timing()).collect();
    let mut doc = serde_json::to_string_pretty(&timeless).expect("reports serialize");
    doc.push('\n');
    Ok(Outputs {
        files: vec![("sim.csv".into(), csv.clone()), ("sim_reports.json".into(), doc)],
        stdout: csv,
    })
}

fn cf_outputs(spec: &ChannelSpec, cf: &CfInput, delta: f64) -> Result<Outputs, CliError> {
    let e = cf_evaluate(cf, &spec.uplink, &spec.downlink, delta)?;
    let mut text = String::new();
    let _ = writeln!(text, "rates,{},{}", e.rates.r1, e.rates.r2);
    let _ = writeln!(text, "margins,{},{}", e.slack.0, e.slack.1);
    let _ = writeln!(text, "delta,{delta}");
    let _ = writeln!(text, "feasible,{}", e.feasible);
    Ok(Outputs {
        files: vec![("cf_check.csv".into(), text.clone())],
        stdout: text,
    })
}

fn execute(config: &RunConfig, spec: &ChannelSpec) -> Result<Outputs, CliError> {
    match config {
        RunConfig::Region { region, out, r4, .. } => region_outputs(spec, region, out, *r4),
        RunConfig::Decompose { point, search, .. } => decompose_outputs(spec, point, search),
        RunConfig::Simulate { sim, n_list, .. } => simulate_outputs(spec, sim, n_list),
        RunConfig::CfCheck { cf, delta, .. } => cf_outputs(spec, cf, *delta),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Runs `config`, writes its outputs and manifest under `out_dir`.
fn run_config(config: RunConfig, inputs: Vec<FileDigest>, spec: &ChannelSpec, out_dir: &Path) -> Result<(RunManifest, String), CliError> {
    let start = Instant::now();
    let outputs = execute(&config, spec)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut digests = Vec::new();
    for (name, contents) in &outputs.files {
        write_file(&out_dir.join(name), contents)?;
        digests.push(FileDigest::new(name, digest_hex(contents.as_bytes())));
    }
    let manifest = RunManifest::new(config, inputs, digests, out_dir, start.elapsed().as_secs_f64());
    write_file(&out_dir.join(manifest.file_name()), &manifest.to_json())?;
    Ok((manifest, outputs.stdout))
}

fn cli_config(command: Command) -> Result<(RunConfig, PathBuf), CliError> {
    Ok(match command {
        Command::Region(a) => {
            let mut region = RegionConfig::default();
            region.search.resolution = a.resolution;
            region.search.sample_seed = a.seed;
            region.sweep.lambda_steps = a.lambda_steps;
            region.r4_resolution = a.r4_resolution;
            let mut out = a.out;
            out.dedup();
            (
                RunConfig::Region {
                    channel: a.common.channel,
                    region,
                    out,
                    r4: a.r4,
                },
                a.common.out_dir,
            )
        }
        Command::Decompose(a) => {
            let search = SearchConfig {
                resolution: a.resolution,
                ..SearchConfig::default()
            };
            (
                RunConfig::Decompose {
                    channel: a.common.channel,
                    point: a.point,
                    search,
                },
                a.common.out_dir,
            )
        }
        Command::Simulate(a) => {
            let (spec, _) = load_channel(&a.common.channel)?;
            let mut sim = SimConfig::uniform(&spec, a.rates, a.n_list[0]);
            if let Some(p) = a.p1 {
                sim.p1 = p;
            }
            if let Some(p) = a.p2 {
                sim.p2 = p;
            }
            if let Some(p) = a.p0 {
                sim.p0 = p;
            }
            sim.trials = a.trials;
            sim.epsilon = a.epsilon;
            sim.seed = a.seed;
            sim.blocks = a.blocks;
            sim.batch_size = a.batch_size;
            sim.bit_cap = a.bit_cap;
            sim.mode = match a.mode {
                ModeArg::Auto => CodebookMode::Auto,
                ModeArg::Explicit => CodebookMode::Explicit,
                ModeArg::Implicit => CodebookMode::Implicit,
            };
            (
                RunConfig::Simulate {
                    channel: a.common.channel,
                    sim,
                    n_list: a.n_list,
                },
                a.common.out_dir,
            )
        }
        Command::CfCheck(a) => {
            let path = a.cf_input.display().to_string();
            let text =
                std::fs::read_to_string(&a.cf_input).map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
            let cf: CfInput =
                serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("malformed cf input {path}: {e}")))?;
            (
                RunConfig::CfCheck {
                    channel: a.common.channel,
                    cf_input: FileDigest::new(&path, digest_hex(text.as_bytes())),
                    cf,
                    delta: a.delta,
                },
                a.common.out_dir,
            )
        }
        Command::Replay(_) => unreachable!("replay is handled before config building"),
    })
}

fn replay(args: ReplayArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let old = RunManifest::read(&args.manifest)?;
    let (spec, digest) = load_channel(old.config.channel())?;
    let mut inputs = vec![digest];
    if let RunConfig::CfCheck { cf_input, .. } = &old.config {
        inputs.push(cf_input.clone());
    }
    for (now, then) in inputs.iter().zip(&old.inputs) {
        if now != then {
            return Err(CliError::Runtime(format!(
                "input {} changed since the run (sha256 {} now, {} recorded)",
                then.path, now.sha256, then.sha256
            )));
        }
    }
    let (new, _) = run_config(old.config.clone(), inputs, &spec, &args.out_dir)?;
    let mut mismatched = Vec::new();
    for (a, b) in old.outputs.iter().zip(&new.outputs) {
        let same = a == b;
        let _ = writeln!(out, "{} {}", if same { "identical" } else { "differs  " }, a.path);
        if !same {
            mismatched.push(a.path.clone());
        }
    }
    if old.outputs.len() != new.outputs.len() {
        mismatched.push("output list".into());
    }
    if mismatched.is_empty() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("replay differs in {}", mismatched.join(", "))))
    }
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Replay(a) => replay(a, out),
        other => cli_config(other).and_then(|(config, out_dir)| {
            let (spec, digest) = load_channel(config.channel())?;
            let mut inputs = vec![digest];
            if let RunConfig::CfCheck { cf_input, .. } = &config {
                inputs.push(cf_input.clone());
            }
            let (manifest, stdout) = run_config(config, inputs, &spec, &out_dir)?;
            let _ = write!(out, "{stdout}");
            let _ = writeln!(out, "manifest {}", out_dir.join(manifest.file_name()).display());
            Ok(())
        }),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_and_pmf_parsing() {
        assert_eq!(parse_point("0.3, 0.2").unwrap(), RatePoint::new(0.3, 0.2));
        assert!(parse_point("0.3").is_err());
        assert!(parse_point("-1,0").is_err());
        assert_eq!(parse_pmf("0.25,0.75").unwrap().probs(), &[0.25, 0.75]);
        assert!(parse_pmf("0.5,0.6").is_err());
    }

    #[test]
    fn exit_code_mapping() {
        let e: CliError = ChannelError::NotDeterministic { x1: 0, x2: 1 }.into();
        assert_eq!(e.exit_code(), 2);
        assert!(e.message().contains("deterministic uplink"));
        let e: CliError = ChannelError::UnknownBuiltin("x".into()).into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = SimError::Budget("x".into()).into();
        assert_eq!(e.exit_code(), 1);
        let e: CliError = RegionError::Channel(ChannelError::NotDeterministic { x1: 0, x2: 0 }).into();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn usage_errors_exit_three() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["twrc", "region"], &mut o, &mut e), 3);
        assert_eq!(run(["twrc", "--help"], &mut o, &mut e), 0);
        assert_eq!(run(["twrc", "region", "builtin:nope"], &mut o, &mut e), 3);
    }
}
