use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use dipolar_qb::ParamName;
use dipolar_qb_cli::config::{parse_ordering, parse_side};
use dipolar_qb_cli::{emit_plot_script, run_with_jobs, CliError, CliResult, Scenario, ScenarioConfig};

/// Simulate the two-qubit dipolar quantum battery and write CSV tables.
#[derive(Parser, Debug)]
#[command(name = "dipolar-qb", version)]
struct Args {
    /// spectrum, gibbs, dephasing, thermal-sweep, charge or grid2d
    scenario: Option<String>,

    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// DM interaction strength D.
    #[arg(long, allow_negative_numbers = true)]
    dm: Option<f64>,
    /// KSEA interaction strength G.
    #[arg(long, allow_negative_numbers = true)]
    ksea: Option<f64>,
    /// Zeeman field B.
    #[arg(long, allow_negative_numbers = true)]
    field: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    temperature: Option<f64>,
    /// Dephasing rate.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Charging field strength.
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,

    /// name:min:max:count[:log] or name:v1,v2,...
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Second axis (legend for 1-D scenarios, y for grid2d).
    #[arg(long, allow_hyphen_values = true)]
    sweep2: Option<String>,

    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Maximum number of stored time samples.
    #[arg(long)]
    samples: Option<usize>,

    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "DIPOLAR_QB_JOBS")]
    jobs: Option<usize>,
    /// Add a discord column to `charge` tables.
    #[arg(long)]
    with_discord: bool,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    emit_plot: bool,

    /// Dephasing initial state: ground, gibbs or bell.
    #[arg(long)]
    initial: Option<String>,
    /// Charging convention: forward (UρU†) or adjoint (U†ρU).
    #[arg(long)]
    ordering: Option<String>,
    /// Subsystem measured for discord: a or b.
    #[arg(long)]
    measure_side: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

fn build_config(args: &Args) -> CliResult<ScenarioConfig> {
    let positional = args.scenario.as_deref().map(str::parse::<Scenario>).transpose()?;
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            ScenarioConfig::parse(&text, positional)?
        }
        None => ScenarioConfig::new(
            positional.ok_or_else(|| CliError::Config("no scenario given (positional argument or config)".into()))?,
        ),
    };
    if let Some(s) = positional {
        cfg.scenario = s;
    }

    let params = [
        (ParamName::Delta, args.delta),
        (ParamName::Epsilon, args.epsilon),
        (ParamName::Dm, args.dm),
        (ParamName::Ksea, args.ksea),
        (ParamName::Field, args.field),
        (ParamName::Temperature, args.temperature),
        (ParamName::Gamma, args.gamma),
        (ParamName::Omega, args.omega),
    ];
    for (name, value) in params {
        if let Some(v) = value {
            cfg.params.set(name, v);
        }
    }
    if let Some(s) = &args.sweep {
        cfg.sweep = Some(s.parse()?);
    }
    if let Some(s) = &args.sweep2 {
        cfg.second_axis = Some(s.parse()?);
    }
    if let Some(v) = args.t0 {
        cfg.grid.t0 = v;
    }
    if let Some(v) = args.t1 {
        cfg.grid.t1 = v;
    }
    if let Some(v) = args.dt {
        cfg.grid.dt = v;
    }
    if let Some(v) = args.samples {
        cfg.grid.samples = v;
    }
    if let Some(p) = &args.out {
        cfg.out_path = Some(p.clone());
    }
    if args.with_discord {
        cfg.with_discord = true;
    }
    if let Some(s) = &args.initial {
        cfg.initial = s.parse()?;
    }
    if let Some(s) = &args.ordering {
        cfg.ordering = parse_ordering(s)?;
    }
    if let Some(s) = &args.measure_side {
        cfg.measure_side = parse_side(s)?;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(args: Args) -> CliResult<()> {
    let cfg = build_config(&args)?;
    let jobs = match args.jobs {
        Some(0) => return Err(CliError::Config("--jobs must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let table = run_with_jobs(&cfg, jobs)?;
    match &cfg.out_path {
        Some(path) => {
            table.write_to_path(path)?;
            if args.emit_plot {
                let script = emit_plot_script(path, cfg.scenario)?;
                eprintln!("wrote {}", script.display());
            }
        }
        None => {
            if args.emit_plot {
                return Err(CliError::Config("--emit-plot needs --out".into()));
            }
            table.write_csv(io::stdout().lock()).map_err(|source| CliError::Csv {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dipolar-qb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
