use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use mapsim_core::metrics::DEFAULT_THRESHOLD;
use mapsim_core::topology::{ArchKind, ArchitectureSpec, FlowParams, DEFAULT_AGENTS};
use mapsim_core::Error;

use crate::HarnessError;

pub const DEFAULT_STEPS: usize = 200;

/// The two reference parameter configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PaperConfig {
    /// Keep most: `s = 0.8, f = 0.1`.
    A,
    /// Forward most: `s = 0.1, f = 0.8`.
    B,
}

impl PaperConfig {
    pub const ALL: [PaperConfig; 2] = [PaperConfig::A, PaperConfig::B];

    pub fn fractions(self) -> (f64, f64) {
        match self {
            PaperConfig::A => (0.8, 0.1),
            PaperConfig::B => (0.1, 0.8),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PaperConfig::A => "A",
            PaperConfig::B => "B",
        }
    }
}

impl fmt::Display for PaperConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchSelection {
    All,
    One(ArchKind),
}

impl ArchSelection {
    pub fn kinds(self) -> Vec<ArchKind> {
        match self {
            ArchSelection::All => ArchKind::ALL.to_vec(),
            ArchSelection::One(k) => vec![k],
        }
    }
}

impl FromStr for ArchSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "ALL" {
            Ok(ArchSelection::All)
        } else {
            s.parse().map(ArchSelection::One)
        }
    }
}

impl fmt::Display for ArchSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArchSelection::All => f.write_str("ALL"),
            ArchSelection::One(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Svg,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
        })
    }
}

/// A fully resolved single-run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub arch: ArchSelection,
    pub n_agents: usize,
    pub s: f64,
    pub f: f64,
    pub b: f64,
    pub w: f64,
    pub steps: usize,
    pub threshold: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(arch: ArchSelection, s: f64, f: f64) -> Self {
        RunConfig {
            arch,
            n_agents: DEFAULT_AGENTS,
            s,
            f,
            b: 1.0,
            w: 1.0,
            steps: DEFAULT_STEPS,
            threshold: DEFAULT_THRESHOLD,
            out: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn params(&self) -> FlowParams {
        FlowParams::new(self.s, self.f)
            .with_supply(self.b)
            .with_efficiency(self.w)
    }

    pub fn spec(&self, kind: ArchKind) -> Result<ArchitectureSpec, HarnessError> {
        ArchitectureSpec::new(kind, self.n_agents).map_err(|e| invalid("--agents", e))
    }

    /// Checks every field, naming the offending flag.
    pub fn validate(&self) -> Result<(), HarnessError> {
        check_common(self.n_agents, self.b, self.w, self.steps, self.threshold)?;
        for (flag, v) in [("--s", self.s), ("--f", self.f)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(flag, format!("{v} is outside [0, 1]")));
            }
        }
        if self.s + self.f > 1.0 {
            return Err(invalid(
                "--s/--f",
                format!("fractions exceed unity (s + f = {})", self.s + self.f),
            ));
        }
        Ok(())
    }

    /// Flags that reproduce this configuration when parsed again.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![
            "--arch".to_string(),
            self.arch.to_string(),
            "--agents".into(),
            self.n_agents.to_string(),
            "--s".into(),
            self.s.to_string(),
            "--f".into(),
            self.f.to_string(),
            "--b".into(),
            self.b.to_string(),
            "--w".into(),
            self.w.to_string(),
            "--steps".into(),
            self.steps.to_string(),
            "--threshold".into(),
            self.threshold.to_string(),
            "--format".into(),
            self.format.to_string(),
        ];
        if let Some(out) = &self.out {
            args.push("--out".into());
            args.push(out.display().to_string());
        }
        args
    }
}

/// Settings for the reference grid; the fractions are fixed per
/// [`PaperConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub n_agents: usize,
    pub b: f64,
    pub w: f64,
    pub steps: usize,
    pub threshold: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_agents: DEFAULT_AGENTS,
            b: 1.0,
            w: 1.0,
            steps: DEFAULT_STEPS,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        check_common(self.n_agents, self.b, self.w, self.steps, self.threshold)
    }

    pub fn run_config(&self, kind: ArchKind, config: PaperConfig) -> RunConfig {
        let (s, f) = config.fractions();
        RunConfig {
            n_agents: self.n_agents,
            b: self.b,
            w: self.w,
            steps: self.steps,
            threshold: self.threshold,
            ..RunConfig::new(ArchSelection::One(kind), s, f)
        }
    }
}

fn check_common(n_agents: usize, b: f64, w: f64, steps: usize, threshold: f64) -> Result<(), HarnessError> {
    if n_agents < 2 {
        return Err(invalid("--agents", format!("at least 2 agents required, got {n_agents}")));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(invalid("--b", format!("supply must be positive, got {b}")));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(invalid("--w", format!("{w} is outside [0, 1]")));
    }
    if steps < 1 {
        return Err(invalid("--steps", "at least 1 step required".to_string()));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(invalid("--threshold", format!("{threshold} is outside (0, 1)")));
    }
    Ok(())
}

pub(crate) fn invalid(flag: &'static str, reason: impl ToString) -> HarnessError {
    HarnessError::InvalidFlag {
        flag,
        reason: reason.to_string(),
    }
}

/// Names the flag responsible for a model error, when there is one.
pub(crate) fn blame(err: Error) -> HarnessError {
    let flag = match &err {
        Error::FractionsExceedUnity { .. } | Error::NoSteadyState => "--s/--f",
        Error::FractionOutOfRange { name: "s", .. } => "--s",
        Error::FractionOutOfRange { name: "f", .. } => "--f",
        Error::FractionOutOfRange { .. } => "--w",
        Error::TooFewAgents(_) => "--agents",
        Error::NonPositiveSupply(_) => "--b",
        Error::InvalidThreshold(_) => "--threshold",
        Error::HorizonTooShort { .. } => "--steps",
        Error::UnknownArchitecture(_) => "--arch",
        _ => return HarnessError::Model(err),
    };
    invalid(flag, err)
}
