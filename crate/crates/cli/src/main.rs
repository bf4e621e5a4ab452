//! `blendcert`: run the blender proof over a range of `xi` and write the
//! certificate.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blendcert_core::blender::solve_zm;
use blendcert_core::certificate::{sweep_xi, Certificate, Parts, XiSweepConfig};
use blendcert_core::construction::{load_construction, ConstructionData};
use blendcert_core::decimal::Decimal;
use blendcert_core::hset::{ConeSpec, HSet};
use blendcert_core::linalg::IVec3;
use blendcert_core::report::{geometry_rows, write_geometry_csv, DEFAULT_GEOMETRY_XI};
use blendcert_core::{verify_cone, Interval, LinearMap};
use clap::{Args, Parser, Subcommand};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "blendcert",
    version,
    about = "Validated interval proof of a blender in a Henon-like family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Blender conditions and hyperbolicity over the xi range.
    Prove(Opts),
    /// Hyperbolicity of the L-set loops only.
    Hyperbolicity(Opts),
    /// Corner coordinates of every set as CSV.
    ExportGeometry(Opts),
    /// Quick internal consistency checks.
    Selftest(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    #[arg(long, env = "BLENDCERT_XI_MIN", default_value = "1.01", conflicts_with = "xi")]
    xi_min: String,
    #[arg(long, env = "BLENDCERT_XI_MAX", default_value = "1.125", conflicts_with = "xi")]
    xi_max: String,
    #[arg(long, env = "BLENDCERT_XI_WIDTH", default_value = "0.001")]
    xi_width: String,
    /// Shorthand for --xi-min MIN --xi-max MAX.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    xi: Option<Vec<String>>,
    /// Point value of xi used by export-geometry.
    #[arg(long, env = "BLENDCERT_AT", default_value_t = DEFAULT_GEOMETRY_XI)]
    at: f64,
    #[arg(long, env = "BLENDCERT_MU", allow_negative_numbers = true)]
    mu: Option<String>,
    #[arg(long, env = "BLENDCERT_BETA", allow_negative_numbers = true)]
    beta: Option<String>,
    /// Construction data (JSON); defaults to the built-in data.
    #[arg(long, env = "BLENDCERT_DATA")]
    data: Option<PathBuf>,
    /// Certificate path, `-` for stdout.
    #[arg(long, env = "BLENDCERT_OUT", default_value = "certificate.json")]
    out: PathBuf,
    /// Geometry CSV path; `prove` writes it too when given.
    #[arg(long, env = "BLENDCERT_GEOMETRY")]
    geometry: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "BLENDCERT_JOBS")]
    jobs: Option<usize>,
    #[arg(short, long, env = "BLENDCERT_VERBOSE")]
    verbose: bool,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load_data(o: &Opts) -> Result<ConstructionData, UsageError> {
    let mut data = load_construction(o.data.as_deref())?;
    let dec = |name: &str, s: &str| {
        s.parse::<Decimal>()
            .map_err(|_| UsageError(format!("invalid --{name}: {s}")))
    };
    if let Some(mu) = &o.mu {
        data.mu = dec("mu", mu)?;
    }
    if let Some(beta) = &o.beta {
        data.beta = dec("beta", beta)?;
    }
    data.validate()?;
    Ok(data)
}

fn sweep_config(o: &Opts) -> Result<XiSweepConfig, UsageError> {
    let (lo, hi) = match &o.xi {
        Some(v) => (v[0].as_str(), v[1].as_str()),
        None => (o.xi_min.as_str(), o.xi_max.as_str()),
    };
    let mut cfg = XiSweepConfig::new(lo, hi, &o.xi_width)?;
    cfg.jobs = o.jobs;
    cfg.validate()?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<Box<dyn Write>, UsageError> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdout().lock()));
    }
    let f = File::create(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(Box::new(BufWriter::new(f)))
}

fn write_certificate(cert: &Certificate, path: &Path) -> Result<(), UsageError> {
    let mut w = create(path)?;
    w.write_all(cert.to_json().as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn export_geometry(data: &ConstructionData, at: f64, path: &Path) -> Result<usize, UsageError> {
    if !(at.is_finite() && at > 1.0) {
        return Err(UsageError(format!("--at must be a number greater than 1, got {at}")));
    }
    let rows = geometry_rows(data, at)?;
    write_geometry_csv(&rows, create(path)?)?;
    Ok(rows.len())
}

fn report(cert: &Certificate, verbose: bool) {
    if verbose {
        for b in &cert.blocks {
            eprintln!(
                "xi [{}, {}] {} ({:.1} ms)",
                b.xi_exact[0],
                b.xi_exact[1],
                if b.pass { "pass" } else { "FAIL" },
                b.elapsed_ms
            );
        }
    }
    let s = &cert.summary;
    eprintln!(
        "{}/{} blocks pass; verdicts: {} B1, {} covering, {} cone, {} appendix covering, {} PD; {} failed",
        s.passing_blocks,
        s.blocks,
        s.b1_verdicts,
        s.covering_verdicts,
        s.cone_verdicts,
        s.appendix_covering_verdicts,
        s.pd_verdicts,
        s.failed_verdicts
    );
    let failures = cert.failures();
    for f in failures.iter().take(if verbose { usize::MAX } else { 10 }) {
        eprintln!("  {f}");
    }
    if !verbose && failures.len() > 10 {
        eprintln!("  ... {} more (see certificate)", failures.len() - 10);
    }
}

fn prove(o: &Opts, parts: Parts) -> Result<bool, UsageError> {
    let data = load_data(o)?;
    let cfg = sweep_config(o)?;
    let cert = sweep_xi(&data, &cfg, parts)?;
    write_certificate(&cert, &o.out)?;
    if let Some(g) = &o.geometry {
        export_geometry(&data, o.at, g)?;
    }
    report(&cert, o.verbose);
    eprintln!(
        "certificate: {} ({})",
        o.out.display(),
        if cert.pass { "PASS" } else { "FAIL" }
    );
    Ok(cert.pass)
}

fn selftest(o: &Opts) -> Result<bool, UsageError> {
    let data = load_data(o)?;
    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };

    let tenth = Interval::ONE.checked_div(Interval::point(10.0))?;
    check(
        "interval: 1/10 enclosed",
        tenth.lo() < 0.1 && 0.1 <= tenth.hi() && tenth.lo() < tenth.hi(),
    );

    let f = LinearMap::diag([4.0, 2.0, 0.5]);
    let unit = IVec3::from_intervals([Interval::new(-1.0, 1.0)?; 3]);
    let h = HSet::with_dx1("U", blendcert_core::Chart::identity(), unit)?;
    let k = ConeSpec::uniform(0.02)?;
    check("cone: diagonal linear map", verify_cone(&f, &h, &k, &h, &k).pass);

    let zm = solve_zm(&data, Interval::point(DEFAULT_GEOMETRY_XI))?;
    check("z_M: residual and side conditions at xi = 1.1", zm.pass());

    let cfg = XiSweepConfig::new("1.1", "1.101", "0.001")?;
    let cert = sweep_xi(&data, &cfg, Parts::ALL)?;
    check("block xi = [1.1, 1.101]", cert.pass);
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::Prove(o) => prove(&o, Parts::ALL),
        Command::Hyperbolicity(o) => prove(&o, Parts::HYPERBOLICITY),
        Command::ExportGeometry(o) => {
            let data = load_data(&o)?;
            let path = o.geometry.clone().unwrap_or_else(|| PathBuf::from("geometry.csv"));
            let n = export_geometry(&data, o.at, &path)?;
            eprintln!("geometry: {} rows at xi = {} -> {}", n, o.at, path.display());
            Ok(true)
        }
        Command::Selftest(o) => selftest(&o),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
