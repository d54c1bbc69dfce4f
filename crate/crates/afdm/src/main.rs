use std::env;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afdm::commands::{self, Mode};
use afdm::config::{DesignSection, ScenarioSection};
use afdm::{CliError, CliResult, ExperimentConfig, Table};
use clap::{Args, Parser, Subcommand};

/// Default output directory when `--out-dir` is not given.
const OUT_DIR_ENV: &str = "AFDM_OUT_DIR";

#[derive(Parser)]
#[command(name = "afdm", version, about = "Ambiguity, echo and estimation experiments for AFDM radar")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average squared DPAF over the delay-Doppler grid.
    Dpaf {
        #[arg(long, value_enum, default_value = "theory")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Delay and Doppler cuts with the pulse overlays.
    Cuts {
        #[arg(long, value_enum, default_value = "theory")]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Weak-target velocity RMSE for the configured scenario.
    Scenario {
        #[command(flatten)]
        common: Common,
    },
    /// Chirp-parameter choice for the configured strong/weak pair.
    Design {
        #[command(flatten)]
        common: Common,
    },
    /// Print the resolved configuration and its hash.
    Config {
        /// Start from the built-in strong/weak scenario.
        #[arg(long)]
        strong_weak: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: <out-dir>/<command>-<hash>.csv).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Output directory; falls back to $AFDM_OUT_DIR, then ".".
    #[arg(long)]
    out_dir: Option<PathBuf>,

    #[arg(long)]
    waveform: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    two_n_c1: Option<i64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    n_cp: Option<usize>,
    #[arg(long)]
    guard: Option<usize>,
    #[arg(long)]
    oversampling: Option<usize>,
    #[arg(long)]
    symbols: Option<usize>,
    #[arg(long = "mod")]
    modulation: Option<String>,
    /// `rrc` or `none`.
    #[arg(long)]
    pulse: Option<String>,
    #[arg(long)]
    rolloff: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    tau_max: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    nu_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu_max: Option<f64>,
    #[arg(long)]
    nu_step: Option<f64>,
    /// `absolute` or `mainlobe_db`.
    #[arg(long)]
    normalization: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    carrier_hz: Option<f64>,
    #[arg(long)]
    subcarrier_spacing_hz: Option<f64>,
    /// Comma-separated SNR list for `scenario`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr: Option<Vec<f64>>,
    #[arg(long)]
    sigma_c: Option<f64>,
}

impl Common {
    fn load(&self, base: ExperimentConfig) -> CliResult<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => base,
        };
        macro_rules! set {
            ($flag:ident => $($field:ident).+) => {
                if let Some(v) = &self.$flag {
                    c.$($field).+ = v.clone();
                }
            };
        }
        set!(waveform => waveform);
        set!(n => frame.n);
        set!(two_n_c1 => frame.two_n_c1);
        set!(c2 => frame.c2);
        set!(n_cp => frame.n_cp);
        set!(guard => frame.guard);
        set!(oversampling => frame.oversampling);
        set!(symbols => frame.symbols);
        set!(modulation => frame.modulation);
        set!(pulse => pulse.shape);
        set!(rolloff => pulse.rolloff);
        set!(tau_min => grid.tau_min);
        set!(tau_max => grid.tau_max);
        set!(nu_min => grid.nu_min);
        set!(nu_max => grid.nu_max);
        set!(nu_step => grid.nu_step);
        set!(normalization => grid.normalization);
        set!(trials => trials);
        set!(seed => seed);
        set!(carrier_hz => radio.carrier_hz);
        set!(subcarrier_spacing_hz => radio.subcarrier_spacing_hz);
        if let Some(snr) = &self.snr {
            c.scenario.as_mut().ok_or_else(|| CliError::Usage("--snr needs a [scenario] section".into()))?.snr_db = snr.clone();
        }
        if let Some(s) = self.sigma_c {
            c.design.as_mut().ok_or_else(|| CliError::Usage("--sigma-c needs a [design] section".into()))?.sigma_c = s;
        }
        Ok(c)
    }

    fn output_path(&self, command: &str, hash: &str) -> PathBuf {
        if let Some(p) = &self.output {
            return p.clone();
        }
        let dir = self.out_dir.clone().or_else(|| env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{command}-{}.csv", &hash[..12]))
    }
}

fn save(common: &Common, command: &str, table: &Table, config: &ExperimentConfig) -> CliResult<PathBuf> {
    let path = common.output_path(command, &config.hash());
    table.save(&config.to_toml(), &path)?;
    Ok(path)
}

fn report(path: &Path, rows: usize) {
    eprintln!("wrote {rows} rows to {}", path.display());
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Dpaf { mode, common } => {
            let r = common.load(ExperimentConfig::default())?.resolve()?;
            let t = commands::dpaf(&r, mode)?;
            report(&save(&common, "dpaf", &t, &r.config)?, t.rows.len());
        }
        Command::Cuts { mode, common } => {
            let r = common.load(ExperimentConfig::default())?.resolve()?;
            let t = commands::cuts(&r, mode)?;
            report(&save(&common, "cuts", &t, &r.config)?, t.rows.len());
        }
        Command::Scenario { common } => {
            let r = common.load(ExperimentConfig::default())?.resolve()?;
            let t = commands::scenario(&r)?;
            for row in &t.rows {
                println!("{}", row.join(","));
            }
            report(&save(&common, "scenario", &t, &r.config)?, t.rows.len());
        }
        Command::Design { common } => {
            let r = common.load(ExperimentConfig::default())?.resolve()?;
            let (t, text) = commands::design(&r)?;
            print!("{text}");
            report(&save(&common, "design", &t, &r.config)?, t.rows.len());
        }
        Command::Config { strong_weak, common } => {
            let base = if strong_weak { strong_weak_config() } else { ExperimentConfig::default() };
            let r = common.load(base)?.resolve()?;
            println!("# config_hash: {}", r.hash);
            print!("{}", r.config.to_toml());
        }
    }
    Ok(())
}

fn strong_weak_config() -> ExperimentConfig {
    ExperimentConfig {
        scenario: Some(ScenarioSection::strong_weak()),
        design: Some(DesignSection { sigma_c: 0.0, candidates: (1..=16).collect() }),
        ..ExperimentConfig::default()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
