use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hlrc::job::{self, Action, Format, JobConfig, JobError, Overrides, SweepRanges};

#[derive(Parser)]
#[command(name = "hlrc", version, about = "Hierarchical locally recoverable codes on fibered surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Job config (JSON).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled preset instead of a config file.
    #[arg(long)]
    preset: Option<String>,
    /// Directory for artifacts and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Maximum number of weight computations for exhaustive distance.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameter report.
    Params(Common),
    /// Build the generator matrix and export it with the evaluation set.
    Build(Common),
    /// Run erasure-recovery trials.
    Simulate(Common),
    /// Check the distance bound and point-count claims.
    Verify(Common),
    /// Run every action listed in the config.
    Run(Common),
    /// Tabulate parameters over ranges of rho.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Inclusive range `A..B` or a single value.
        #[arg(long)]
        rho1: Option<String>,
        #[arg(long)]
        rho2: Option<String>,
        #[arg(long)]
        rho3: Option<String>,
    },
    /// List bundled presets, or print one as JSON.
    Presets { name: Option<String> },
}

fn load(common: &Common, actions: Option<Vec<Action>>) -> Result<JobConfig, JobError> {
    let mut config = job::load_config(common.config.as_deref(), common.preset.as_deref())?;
    Overrides {
        out: common.out.clone(),
        seed: common.seed,
        trials: common.trials,
        budget: common.budget,
        format: common.format,
    }
    .apply(&mut config);
    if let Some(actions) = actions {
        config.actions = actions;
    }
    Ok(config)
}

fn verify_actions(config: &JobConfig) -> Vec<Action> {
    let listed: Vec<Action> = config
        .actions
        .iter()
        .copied()
        .filter(|a| matches!(a, Action::VerifyDistance | Action::VerifyCensus))
        .collect();
    if !listed.is_empty() {
        listed
    } else if config.code.is_some() {
        vec![Action::VerifyDistance]
    } else {
        vec![Action::VerifyCensus]
    }
}

fn execute(config: &JobConfig) -> Result<i32, JobError> {
    let outcome = job::run(config)?;
    print!("{}", outcome.stdout);
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(outcome.exit_code())
}

fn sweep(common: &Common, rho1: Option<String>, rho2: Option<String>, rho3: Option<String>) -> Result<i32, JobError> {
    let config = load(common, None)?;
    let parse = |s: Option<String>| s.map(|s| job::parse_range(&s)).transpose();
    let ranges = SweepRanges { rho1: parse(rho1)?, rho2: parse(rho2)?, rho3: parse(rho3)? };
    let rows = job::sweep(&config, &ranges)?;
    let csv = job::sweep_csv(&rows);
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => print!("{csv}"),
        Format::Table => print!("{}", job::sweep_table(&rows)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize")),
    }
    if let Some(dir) = &config.output.dir {
        let path = dir.join("sweep.csv");
        std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(&path, csv))
            .map_err(|source| JobError::Io { path: path.clone(), source })?;
        eprintln!("wrote {}", path.display());
    }
    Ok(job::EXIT_OK)
}

fn presets(name: Option<String>) -> Result<i32, JobError> {
    match name {
        Some(n) => {
            let config = job::preset(&n)?;
            println!("{}", serde_json::to_string_pretty(&config).expect("config serializes"));
        }
        None => {
            for n in job::PRESETS {
                println!("{n:<22} {}", job::preset_description(n).unwrap_or(""));
            }
        }
    }
    Ok(job::EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Params(c) => load(&c, Some(vec![Action::Params])).and_then(|cfg| execute(&cfg)),
        Command::Build(c) => load(&c, Some(vec![Action::Params, Action::Build])).and_then(|cfg| execute(&cfg)),
        Command::Simulate(c) => load(&c, Some(vec![Action::Simulate])).and_then(|cfg| execute(&cfg)),
        Command::Verify(c) => load(&c, None).and_then(|mut cfg| {
            cfg.actions = verify_actions(&cfg);
            execute(&cfg)
        }),
        Command::Run(c) => load(&c, None).and_then(|cfg| execute(&cfg)),
        Command::Sweep { common, rho1, rho2, rho3 } => sweep(&common, rho1, rho2, rho3),
        Command::Presets { name } => presets(name),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
