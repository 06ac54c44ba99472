//! Verification driver: runs the suites, emits reports, maintains goldens.

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use wavegauge::report::{
    dump_point, emit, golden_dir, golden_drift, load_golden, regen_golden, render_text, run,
    Format, RunConfig, Suite,
};
use wavegauge::Error;

#[derive(Parser, Debug)]
#[command(
    name = "wavegauge",
    about = "Numerical verification of an explicit Ricci-flat metric family in wave coordinates",
    long_about = None
)]
struct Args {
    /// Profile amplitude
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,

    /// Log-power exponent, must lie in (1/4, 1/2) unless --allow-out-of-range
    #[arg(long, default_value_t = 0.4)]
    alpha: f64,

    /// Time slices to scan (repeatable)
    #[arg(long = "t", value_name = "TIME")]
    t: Vec<f64>,

    /// Suites to run (repeatable): profiles, metric, curvature, gauge, norms, causality, model
    #[arg(long = "suite", value_name = "NAME")]
    suite: Vec<String>,

    /// Riccati ODE certification tolerance
    #[arg(long, default_value_t = 1e-10)]
    ode_tol: f64,

    /// Quadrature relative tolerance
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,

    /// Wave-gauge residual tolerance
    #[arg(long, default_value_t = 1e-9)]
    gauge_tol: f64,

    /// Ricci component tolerance
    #[arg(long, default_value_t = 1e-8)]
    ricci_tol: f64,

    /// Interior sample grid density per axis
    #[arg(long, default_value_t = 20)]
    grid_n: usize,

    /// Output directory for reports and CSV bundles
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Output format
    #[arg(long, value_enum, default_value_t = CliFormat::Text)]
    format: CliFormat,

    /// Recompute golden values with the high-precision oracles; fails on
    /// drift beyond 1e-8 relative against the stored file
    #[arg(long, default_value_t = false)]
    regen_golden: bool,

    /// Golden directory (env WAVEGAUGE_GOLDEN_DIR overrides)
    #[arg(long)]
    golden_dir: Option<PathBuf>,

    /// Permit alpha outside (1/4, 1/2) for negative controls
    #[arg(long, default_value_t = false)]
    allow_out_of_range: bool,

    /// Dump the tensors at a point "t,x1,x2,x3" as JSON and exit
    #[arg(long, value_name = "T,X1,X2,X3")]
    dump_point: Option<String>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum CliFormat {
    Json,
    Text,
    CsvBundle,
}

impl From<CliFormat> for Format {
    fn from(f: CliFormat) -> Format {
        match f {
            CliFormat::Json => Format::Json,
            CliFormat::Text => Format::Text,
            CliFormat::CsvBundle => Format::CsvBundle,
        }
    }
}

fn build_config(args: &Args) -> Result<RunConfig, Error> {
    let mut config = RunConfig {
        epsilon: args.epsilon,
        alpha: args.alpha,
        ode_tol: args.ode_tol,
        quad_tol: args.quad_tol,
        gauge_tol: args.gauge_tol,
        ricci_tol: args.ricci_tol,
        grid_n: args.grid_n,
        allow_out_of_range: args.allow_out_of_range,
        golden_dir: args.golden_dir.clone(),
        ..RunConfig::default()
    };
    if !args.t.is_empty() {
        config.t_list = args.t.clone();
    }
    if !args.suite.is_empty() {
        config.suites = args
            .suite
            .iter()
            .map(|s| Suite::from_name(s))
            .collect::<Result<Vec<_>, _>>()?;
    }
    config.validate()?;
    Ok(config)
}

fn parse_point(text: &str) -> Result<(f64, [f64; 3]), Error> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Config(format!("--dump-point expects t,x1,x2,x3: {e}")))?;
    if parts.len() != 4 {
        return Err(Error::Config(format!(
            "--dump-point expects 4 comma-separated numbers, got {}",
            parts.len()
        )));
    }
    Ok((parts[0], [parts[1], parts[2], parts[3]]))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match try_main(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn try_main(args: &Args) -> Result<ExitCode, Error> {
    let config = build_config(args)?;

    if let Some(point) = &args.dump_point {
        let (t, x) = parse_point(point)?;
        let v = dump_point(t, x, &config)?;
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(ExitCode::SUCCESS);
    }

    if args.regen_golden {
        let dir = golden_dir(&config)
            .ok_or_else(|| Error::Config("--regen-golden needs --golden-dir or env".into()))?;
        let fresh = regen_golden(&config)?;
        match load_golden(&dir) {
            Ok(stored) => {
                let drift = golden_drift(&stored, &fresh);
                if !drift.is_empty() {
                    for (key, rel) in &drift {
                        eprintln!("golden drift on {key}: relative {rel:.3e}");
                    }
                    return Err(Error::Verification(format!(
                        "{} golden values drifted beyond 1e-8 relative",
                        drift.len()
                    )));
                }
                println!("golden values unchanged within 1e-8 relative; rewriting {dir:?}");
            }
            Err(_) => println!("no stored golden values; writing {dir:?}"),
        }
        wavegauge::report::write_golden(&dir, &fresh)?;
        return Ok(ExitCode::SUCCESS);
    }

    let report = run(&config)?;
    print!("{}", render_text(&report));
    let written = emit(&report, args.format.into(), &args.out)?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    if report.overall_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
