//! `qcb`: fuzz campaigns, tightness sweeps, distance queries and capacity
//! tables for the continuity-bound library.

mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Format, Sink};
use qcb_core::bounds::{
    format_sig, run_campaign, tightness_row, BoundReport, CampaignConfig, CampaignKind, EpsSource,
    VIOLATION_SLACK,
};
use qcb_core::capacities::{ea_capacity, erasure_capacities, holevo_cap_heuristic, CapacityKind};
use qcb_core::channels::{read_channel_file, to_channel_file, Channel};
use qcb_core::distances::{
    bures_distance_with, diamond_norm_with, sandwich_holds, BuresOptions, DiamondOptions,
};
use qcb_core::linalg::Rng;
use qcb_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qcb",
    version,
    about = "Continuity bounds for quantum channel information quantities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a seeded falsification campaign for one bound and print CSV rows.
    Check(CheckArgs),
    /// Closed-form tightness sweep on the erasure family.
    Tightness(TightnessArgs),
    /// Diamond-norm and Bures-distance enclosures for two channel files.
    Distance(DistanceArgs),
    /// Capacity table of an erasure channel or of a channel file.
    Capacity(CapacityArgs),
    /// Write a channel description file.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write rows here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoundArg {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Aux,
}

impl From<BoundArg> for CampaignKind {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Prop1 => CampaignKind::Prop1,
            BoundArg::Prop2 => CampaignKind::Prop2,
            BoundArg::Prop3 => CampaignKind::Prop3,
            BoundArg::Prop4 => CampaignKind::Prop4,
            BoundArg::Prop5 => CampaignKind::Prop5,
            BoundArg::Aux => CampaignKind::Auxiliary,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EpsSourceArg {
    IntervalUpper,
    Analytic,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    bound: BoundArg,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, env = "QCB_SEED", default_value_t = 0)]
    seed: u64,
    /// Subsystem dimensions, e.g. `A=2,B=3,C=2`.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<BTreeMap<String, usize>>,
    /// Tensor power of the n-copy bound.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Use one channel on both sides of the bound
    #[arg(long)]
    same_channel: bool,
    /// Use one input state or ensemble on both sides of the bound
    #[arg(long)]
    same_state: bool,
    /// Generate qc-states and use the halved logarithmic term.
    #[arg(long)]
    qc: bool,
    #[arg(long, value_enum, default_value_t = EpsSourceArg::Analytic)]
    eps_source: EpsSourceArg,
    /// Bits of negative margin tolerated before a row counts as a violation.
    #[arg(long, default_value_t = VIOLATION_SLACK)]
    slack: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct TightnessArgs {
    /// Erasure offsets x in [0, 1/2).
    #[arg(long, value_delimiter = ',', default_values_t = vec![1e-1, 1e-2, 1e-3, 1e-4])]
    x: Vec<f64>,
    /// Values of log2 d; only closed forms are used, so these may be huge.
    #[arg(long = "log2-d", value_delimiter = ',', default_values_t = vec![10.0, 100.0, 1000.0])]
    log2_d: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DistanceMethod {
    Diamond,
    Bures,
    Both,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_enum, default_value_t = DistanceMethod::Both)]
    method: DistanceMethod,
    /// Target width of the diamond-norm interval.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, env = "QCB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CapacityArgs {
    /// Channel file; without it the erasure family is used.
    #[arg(long, conflicts_with_all = ["d", "p"])]
    channel: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0.25)]
    p: f64,
    /// Random restarts of the Holevo-capacity search for channel files.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, env = "QCB_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Identity,
    Depolarizing,
    Erasure,
    Random,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(value_enum)]
    family: Family,
    /// Input dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Erasure probability.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Output dimension of a random channel (defaults to d).
    #[arg(long)]
    dout: Option<usize>,
    /// Kraus count of a random channel.
    #[arg(long, default_value_t = 2)]
    kraus: usize,
    #[arg(long, env = "QCB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<BTreeMap<String, usize>, String> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (label, dim) = part
            .split_once('=')
            .ok_or_else(|| format!("expected LABEL=DIM, got {part:?}"))?;
        let label = label.trim();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(format!("invalid label {label:?}"));
        }
        let dim: usize = dim
            .trim()
            .parse()
            .map_err(|e| format!("dimension of {label}: {e}"))?;
        if dim == 0 {
            return Err(format!("dimension of {label} must be positive"));
        }
        if out.insert(label.to_string(), dim).is_some() {
            return Err(format!("label {label} given twice"));
        }
    }
    Ok(out)
}

/// Failures after argument parsing; all map to exit code 2.
#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Tightness(args) => cmd_tightness(args),
        Command::Distance(args) => cmd_distance(args),
        Command::Capacity(args) => cmd_capacity(args),
        Command::Export(args) => cmd_export(args),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, Failure> {
    if args.slack.is_nan() || args.slack < 0.0 {
        return Err(Failure(format!(
            "slack {} must be non-negative",
            args.slack
        )));
    }
    let cfg = CampaignConfig {
        trials: args.trials as usize,
        seed: args.seed,
        dims: args.dims.unwrap_or_default(),
        n: args.n as usize,
        same_channel: args.same_channel,
        same_state: args.same_state,
        qc: args.qc,
        eps_source: match args.eps_source {
            EpsSourceArg::IntervalUpper => EpsSource::IntervalUpper,
            EpsSourceArg::Analytic => EpsSource::Analytic,
        },
    };
    let reports: Vec<BoundReport> = run_campaign(args.bound.into(), &cfg)?
        .into_iter()
        .map(|r| r.with_slack(args.slack))
        .collect();
    let mut sink = Sink::open(args.out.output.as_deref(), args.out.format)?;
    sink.row(BoundReport::HEADER)?;
    for r in &reports {
        sink.row(r.record())?;
    }
    sink.finish()?;
    let violations = reports.iter().filter(|r| r.violated).count();
    let worst = reports
        .iter()
        .map(|r| if r.margin < 0.0 { -r.margin } else { 0.0 })
        .fold(0.0, f64::max);
    eprintln!(
        "summary: rows={} violations={} max_negative_margin_bits={} slack_bits={}",
        reports.len(),
        violations,
        format_sig(worst),
        format_sig(args.slack)
    );
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_tightness(args: TightnessArgs) -> Result<ExitCode, Failure> {
    if let Some(x) = args.x.iter().find(|x| !(0.0..0.5).contains(*x)) {
        return Err(Failure(format!("x = {x} outside [0, 1/2)")));
    }
    let mut sink = Sink::open(args.out.output.as_deref(), args.out.format)?;
    sink.row(["x", "log2_d", "beta_upper", "lhs_Q", "rhs_QC", "ratio"])?;
    for &l in &args.log2_d {
        for &x in &args.x {
            let r = tightness_row(x, l)?;
            sink.row([r.x, r.log2_d, r.beta_upper, r.lhs_q, r.rhs_qc, r.ratio].map(format_sig))?;
        }
    }
    sink.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_distance(args: DistanceArgs) -> Result<ExitCode, Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure(format!("tolerance {} must be positive", args.tol)));
    }
    let a = read_channel_file(&args.a)?;
    let b = read_channel_file(&args.b)?;
    if (a.din(), a.dout()) != (b.din(), b.dout()) {
        return Err(Failure(format!(
            "channel dimensions differ: {}->{} vs {}->{}",
            a.din(),
            a.dout(),
            b.din(),
            b.dout()
        )));
    }
    let mut out = std::io::stdout().lock();
    let diamond_opts = DiamondOptions {
        tol: args.tol,
        seed: args.seed,
        ..DiamondOptions::default()
    };
    let diamond = if args.method != DistanceMethod::Bures {
        let iv = diamond_norm_with(&a, &b, &diamond_opts)?;
        writeln!(
            out,
            "diamond: [{}, {}] lower={} upper={}",
            format_sig(iv.lower),
            format_sig(iv.upper),
            iv.lower_method,
            iv.upper_method
        )?;
        Some(iv)
    } else {
        None
    };
    if args.method != DistanceMethod::Diamond {
        let opts = BuresOptions {
            seed: args.seed,
            diamond_tol: args.tol,
            ..BuresOptions::default()
        };
        let iv = bures_distance_with(&a, &b, &opts)?;
        writeln!(
            out,
            "bures: [{}, {}] lower={} upper={}",
            format_sig(iv.lower),
            format_sig(iv.upper),
            iv.lower_method,
            iv.upper_method
        )?;
        if let Some(d) = &diamond {
            let ok = sandwich_holds(d, &iv);
            writeln!(out, "sandwich: {}", if ok { "ok" } else { "FAILED" })?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_capacity(args: CapacityArgs) -> Result<ExitCode, Failure> {
    let mut rows: Vec<[String; 3]> = Vec::new();
    match &args.channel {
        None => {
            for c in erasure_capacities(args.d, args.p)? {
                rows.push([
                    c.kind.to_string(),
                    format_sig(c.value),
                    c.exactness.to_string(),
                ]);
            }
            let ch = Channel::erasure(args.d, args.p)?;
            let ea = ea_capacity(&ch, 1e-9)?;
            rows.push([
                ea.kind.to_string(),
                format_sig(ea.value),
                ea.exactness.to_string(),
            ]);
        }
        Some(path) => {
            let ch = read_channel_file(path)?;
            let d = ch.din();
            let holevo = holevo_cap_heuristic(&ch, args.restarts, d * d, args.seed)?;
            rows.push([
                holevo.kind.to_string(),
                format_sig(holevo.value),
                holevo.exactness.to_string(),
            ]);
            // Regularized quantities have no closed form for general channels.
            for kind in [
                CapacityKind::Classical,
                CapacityKind::Quantum,
                CapacityKind::Private,
            ] {
                rows.push([kind.to_string(), "unavailable".into(), "none".into()]);
            }
            let ea = ea_capacity(&ch, 1e-9)?;
            rows.push([
                ea.kind.to_string(),
                format_sig(ea.value),
                ea.exactness.to_string(),
            ]);
        }
    }
    let mut sink = Sink::open(args.out.output.as_deref(), args.out.format)?;
    sink.row(["kind", "value_bits", "exactness"])?;
    for r in rows {
        sink.row(r)?;
    }
    sink.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: ExportArgs) -> Result<ExitCode, Failure> {
    if args.d == 0 {
        return Err(Failure("dimension must be positive".into()));
    }
    let ch = match args.family {
        Family::Identity => Channel::identity(args.d),
        Family::Depolarizing => Channel::completely_depolarizing(args.d),
        Family::Erasure => Channel::erasure(args.d, args.p)?,
        Family::Random => {
            let mut rng = Rng::new(args.seed);
            Channel::random(args.d, args.dout.unwrap_or(args.d), args.kraus, &mut rng)?
        }
    };
    let text = to_channel_file(&ch);
    match &args.output {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(std::io::stdout().lock(), "{text}")?,
    }
    Ok(ExitCode::SUCCESS)
}
