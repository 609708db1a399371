use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mapsim_core::topology::ArchKind;

use crate::config::{invalid, ArchSelection, OutputFormat, RunConfig, SuiteConfig, DEFAULT_STEPS};
use crate::{formats, suite, svg, HarnessError};

#[derive(Debug, Parser)]
#[command(name = "mapsim", version, about = "Multi-agent production system simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the architecture codes.
    List,
    /// Simulate one architecture and write its trajectory.
    Simulate(RunArgs),
    /// Compute the performance metrics of one architecture or ALL.
    Metrics(RunArgs),
    /// Run the 11 x 2 reference grid into a directory.
    Suite(SuiteArgs),
    /// Principal components of the reference grid metrics.
    Pca(SuiteArgs),
    /// Plot the state trajectories of one architecture as SVG.
    Plot(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Architecture code (P, PDO, ..., SA) or ALL.
    #[arg(long, default_value = "ALL")]
    pub arch: String,
    #[arg(long, default_value_t = 5)]
    pub agents: usize,
    /// Fraction kept per step.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Fraction forwarded per step.
    #[arg(long, allow_negative_numbers = true)]
    pub f: Option<f64>,
    /// Source supply per step.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Work share of the transformed fraction.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub w: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Print the resolved configuration as flags and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 5)]
    pub agents: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub w: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Output directory for `suite`, output file for `pca`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

impl RunArgs {
    pub fn to_config(&self) -> Result<RunConfig, HarnessError> {
        let arch: ArchSelection = self.arch.parse().map_err(|e| invalid("--arch", e))?;
        let s = self.s.ok_or_else(|| invalid("--s", "required"))?;
        let f = self.f.ok_or_else(|| invalid("--f", "required"))?;
        let config = RunConfig {
            arch,
            n_agents: self.agents,
            s,
            f,
            b: self.b,
            w: self.w,
            steps: self.steps,
            threshold: self.threshold,
            out: self.out.clone(),
            format: self.format,
        };
        config.validate()?;
        Ok(config)
    }
}

impl SuiteArgs {
    pub fn to_config(&self) -> SuiteConfig {
        SuiteConfig {
            n_agents: self.agents,
            b: self.b,
            w: self.w,
            steps: self.steps,
            threshold: self.threshold,
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<(), HarnessError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| HarnessError::io(path, e)),
        None => io::stdout()
            .lock()
            .write_all(body)
            .map_err(|e| HarnessError::io("<stdout>", e)),
    }
}

fn single(config: &RunConfig) -> Result<ArchKind, HarnessError> {
    match config.arch {
        ArchSelection::One(k) => Ok(k),
        ArchSelection::All => Err(invalid("--arch", "a single architecture is required")),
    }
}

fn plot_title(config: &RunConfig, kind: ArchKind) -> String {
    format!("{kind}  s={}, f={}, N={}", config.s, config.f, config.n_agents)
}

pub fn execute(command: &Command) -> Result<(), HarnessError> {
    match command {
        Command::List => {
            let mut text = String::new();
            for k in ArchKind::ALL {
                text.push_str(&format!("{:<4}{}\n", k.code(), k.description()));
            }
            emit(None, text.as_bytes())
        }
        Command::Simulate(args) | Command::Metrics(args) | Command::Plot(args) if args.dump_config => {
            let config = args.to_config()?;
            let line = config.to_args().join(" ");
            emit(None, format!("{line}\n").as_bytes())
        }
        Command::Simulate(args) => {
            let config = args.to_config()?;
            let kind = single(&config)?;
            let (trajectory, tau) = suite::trajectory_only(&config)?;
            let body = match config.format {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    formats::write_trajectory(&mut buf, &trajectory)?;
                    buf
                }
                OutputFormat::Svg => svg::render_states(&trajectory, tau, &plot_title(&config, kind))?.into_bytes(),
            };
            emit(config.out.as_deref(), &body)
        }
        Command::Plot(args) => {
            let config = args.to_config()?;
            let kind = single(&config)?;
            let (trajectory, tau) = suite::trajectory_only(&config)?;
            let doc = svg::render_states(&trajectory, tau, &plot_title(&config, kind))?;
            emit(config.out.as_deref(), doc.as_bytes())
        }
        Command::Metrics(args) => {
            let config = args.to_config()?;
            let records: Vec<_> = suite::run_selection(&config)?
                .into_iter()
                .map(|e| e.record)
                .collect();
            let body = match config.format {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    formats::write_metrics(&mut buf, &records)?;
                    buf
                }
                OutputFormat::Svg => {
                    let title = format!("Per-agent work  s={}, f={}", config.s, config.f);
                    svg::render_work_bars(&records, &title)?.into_bytes()
                }
            };
            emit(config.out.as_deref(), &body)
        }
        Command::Suite(args) => {
            let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("results"));
            let report = suite::run_paper_suite(&args.to_config(), &dir)?;
            eprintln!(
                "wrote {} runs to {} (PC1+PC2 explain {:.4})",
                report.runs.len(),
                dir.display(),
                report.pca.explained_by_plane()
            );
            Ok(())
        }
        Command::Pca(args) => {
            let report = suite::compute_paper_suite(&args.to_config())?;
            let body = match args.format {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    formats::write_pca(&mut buf, &report.pca)?;
                    buf
                }
                OutputFormat::Svg => svg::render_pca(&report.pca)?.into_bytes(),
            };
            emit(args.out.as_deref(), &body)
        }
    }
}
