use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use iikit::cli::config::validate;
use iikit::cli::{
    emit_table, human_table, parse_config, run, ConfigError, ExperimentConfig, Format, PRESETS,
};

#[derive(Parser)]
#[command(
    name = "ii-kit",
    version,
    about = "Weighted integral inequality bounds from TOML experiment configs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its report.
    Run {
        config: PathBuf,
        /// Output directory (default: `output.dir` of the config, else the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
        seed: Option<u64>,
        /// Tolerance override, e.g. `--tol soundness=1e-8`.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tol: Vec<String>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// List the built-in presets, or print one.
    Presets {
        #[arg(long)]
        show: Option<String>,
    },
}

fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        violations: vec![format!("{}: {e}", path.display())],
    })?;
    parse_config(&text)
}

fn apply_overrides(
    cfg: &mut ExperimentConfig,
    seed: Option<u64>,
    tol: &[String],
) -> Result<(), ConfigError> {
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let mut bad = Vec::new();
    for kv in tol {
        match kv
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim().parse::<f64>()))
        {
            Some((k, Ok(v))) => {
                cfg.tolerances.insert(k.to_string(), v);
            }
            _ => bad.push(format!(
                "--tol {kv}: expected NAME=VALUE with a numeric value"
            )),
        }
    }
    if !bad.is_empty() {
        return Err(ConfigError { violations: bad });
    }
    validate(cfg)
}

fn config_error(e: &ConfigError) -> ExitCode {
    eprintln!("invalid config:\n{e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("{}: ok ({})", config.display(), cfg.experiment.name());
                ExitCode::SUCCESS
            }
            Err(e) => config_error(&e),
        },
        Command::Presets { show: Some(name) } => match PRESETS.iter().find(|p| p.name == name) {
            Some(p) => {
                print!("{}", p.toml);
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("unknown preset `{name}`");
                ExitCode::from(2)
            }
        },
        Command::Presets { show: None } => {
            for p in PRESETS {
                println!("{:<30} {}", p.name, p.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            out,
            format,
            seed,
            tol,
        } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => return config_error(&e),
            };
            if let Err(e) = apply_overrides(&mut cfg, seed, &tol) {
                return config_error(&e);
            }
            if let Some(f) = format {
                cfg.output.format = match f {
                    FormatArg::Json => Format::Json,
                    FormatArg::Csv => Format::Csv,
                };
            }
            let stem = config
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("report")
                .to_string();
            let report = run(&cfg, &stem);
            let bytes = match emit_table(&report, cfg.output.format) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::FAILURE;
                }
            };
            let dir = out
                .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            let path = dir.join(format!("{}.{}", report.id, cfg.output.format.extension()));
            if let Err(e) =
                std::fs::create_dir_all(&dir).and_then(|()| std::fs::write(&path, bytes))
            {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
            print!("{}", human_table(&report));
            println!("report written to {}", path.display());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
