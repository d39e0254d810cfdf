//! Suite orchestration and machine-readable reports.
//!
//! A run is driven by a [`SuiteConfig`]. [`plan`] expands it into named
//! checks, [`run_suite`] executes them on the rayon pool, and
//! [`emit_report`] renders the results as JSON or Markdown.

mod emit;
mod ope;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use emit::{emit_report, Format, REPORT_VERSION};
pub use ope::{describe_ope, OpeError};
pub use suites::Builtins;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DiscreteExact,
    ContinuumNumeric,
    Hopf,
    ParamMaps,
    DslRoundtrip,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::DiscreteExact, Suite::ContinuumNumeric, Suite::Hopf, Suite::ParamMaps, Suite::DslRoundtrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DiscreteExact => "discrete-exact",
            Suite::ContinuumNumeric => "continuum-numeric",
            Suite::Hopf => "hopf",
            Suite::ParamMaps => "param-maps",
            Suite::DslRoundtrip => "dsl-roundtrip",
        }
    }

    /// Prefix shared by the ids of this suite's checks.
    pub fn prefix(self) -> &'static str {
        match self {
            Suite::DiscreteExact => "discrete",
            Suite::ContinuumNumeric => "continuum",
            Suite::Hopf => "hopf",
            Suite::ParamMaps => "param-maps",
            Suite::DslRoundtrip => "dsl",
        }
    }

    pub fn of_id(id: &str) -> Option<Suite> {
        let head = id.split('.').next()?;
        Suite::ALL.into_iter().find(|s| s.prefix() == head)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotChecked,
    OrderLimited,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotChecked => "not-checked",
            Status::OrderLimited => "order-limited",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Numeric,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        }
    }
}

/// Worst deviation seen by a check.
#[derive(Clone, Debug, PartialEq)]
pub enum MaxError {
    /// An exact identity that holds: the difference is identically zero.
    ExactZero,
    /// An exact identity that fails, with the offending expression.
    Counterexample(String),
    Value(f64),
    /// Nothing was measured.
    None,
}

impl fmt::Display for MaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxError::ExactZero => f.write_str("0 (exact)"),
            MaxError::Counterexample(s) => f.write_str(s),
            MaxError::Value(x) => write!(f, "{x:.3e}"),
            MaxError::None => f.write_str("-"),
        }
    }
}

impl Serialize for MaxError {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MaxError::Value(x) if x.is_finite() => s.serialize_f64(*x),
            MaxError::Value(x) => s.serialize_str(&x.to_string()),
            MaxError::None => s.serialize_none(),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub mode: Mode,
    pub max_error: MaxError,
    pub tolerance: Option<f64>,
    pub samples: usize,
    pub constants: BTreeMap<String, String>,
    pub runtime_ms: u64,
    pub anchor: String,
    /// Why a check failed or was not run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckResult {
    pub fn suite(&self) -> Option<Suite> {
        Suite::of_id(&self.id)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown report format `{0}` (expected json or md)")]
    UnknownFormat(String),
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("series order {0} exceeds the supported maximum {1}")]
    OrderTooLarge(usize, usize),
    #[error("built-in definitions failed to load: {0}")]
    Builtin(String),
}

/// Everything that determines a run. With `timing` off, `runtime_ms` is
/// reported as zero and a fixed seed gives byte-identical reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    /// Series order for contractions without a closed form.
    pub order: usize,
    /// Overrides every check's default sample count.
    pub samples: Option<usize>,
    /// Overrides every numeric check's default tolerance.
    pub tol: Option<f64>,
    /// Initial `ln Γ` recurrence depth for continuum ratios.
    pub shifts: usize,
    pub seed: u64,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Suite::ALL.to_vec(),
            order: crate::vertex::ORDER_LIMIT,
            samples: None,
            tol: None,
            shifts: crate::continuum::DEFAULT_SHIFTS,
            seed: 0,
            timing: true,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.order == 0 {
            return Err(ConfigError::NotPositive("order"));
        }
        if self.order > crate::exact::MAX_SERIES_ORDER {
            return Err(ConfigError::OrderTooLarge(self.order, crate::exact::MAX_SERIES_ORDER));
        }
        if self.samples == Some(0) {
            return Err(ConfigError::NotPositive("samples"));
        }
        if self.tol.is_some_and(|t| !(t > 0.0)) {
            return Err(ConfigError::NotPositive("tol"));
        }
        if self.shifts == 0 {
            return Err(ConfigError::NotPositive("shifts"));
        }
        Ok(())
    }

    pub(crate) fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub(crate) fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// What a planned check computes, before timing and id are attached.
pub(crate) struct Outcome {
    pub status: Status,
    pub mode: Mode,
    pub max_error: MaxError,
    pub tolerance: Option<f64>,
    pub samples: usize,
    pub constants: BTreeMap<String, String>,
    pub reason: Option<String>,
}

type Job = Box<dyn Fn(&Builtins, &SuiteConfig, &mut ChaCha8Rng) -> Outcome + Send + Sync>;

/// One named check of a plan.
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    job: Job,
}

impl Check {
    pub(crate) fn new(
        id: impl Into<String>,
        anchor: &'static str,
        job: impl Fn(&Builtins, &SuiteConfig, &mut ChaCha8Rng) -> Outcome + Send + Sync + 'static,
    ) -> Self {
        Check { id: id.into(), anchor, job: Box::new(job) }
    }

    fn run(&self, builtins: &Builtins, cfg: &SuiteConfig) -> CheckResult {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ stable_hash(&self.id));
        let start = Instant::now();
        let o = (self.job)(builtins, cfg, &mut rng);
        let runtime_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
        CheckResult {
            id: self.id.clone(),
            status: o.status,
            mode: o.mode,
            max_error: o.max_error,
            tolerance: o.tolerance,
            samples: o.samples,
            constants: o.constants,
            runtime_ms,
            anchor: self.anchor.to_string(),
            reason: o.reason,
        }
    }
}

/// FNV-1a, so per-check seeds do not depend on the standard hasher.
fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// The checks of the selected suites, in report order.
pub fn plan(cfg: &SuiteConfig) -> Vec<Check> {
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    suites.into_iter().flat_map(suites::checks).collect()
}

/// Ids of every check in every suite.
pub fn check_ids() -> Vec<String> {
    Suite::ALL.into_iter().flat_map(suites::checks).map(|c| c.id).collect()
}

fn execute(checks: &[Check], cfg: &SuiteConfig) -> Result<Vec<CheckResult>, ConfigError> {
    cfg.validate()?;
    if checks.is_empty() {
        return Ok(Vec::new());
    }
    let builtins = Builtins::load(cfg.order)?;
    Ok(checks.par_iter().map(|c| c.run(&builtins, cfg)).collect())
}

/// Run every check of the selected suites.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, ConfigError> {
    execute(&plan(cfg), cfg)
}

/// Run the single check `id`, whatever suite it belongs to.
pub fn run_check(id: &str, cfg: &SuiteConfig) -> Result<CheckResult, ConfigError> {
    let suite = Suite::of_id(id).ok_or_else(|| ConfigError::UnknownCheck(id.to_string()))?;
    let check = suites::checks(suite)
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| ConfigError::UnknownCheck(id.to_string()))?;
    Ok(execute(std::slice::from_ref(&check), cfg)?.remove(0))
}

/// Process exit code for a finished run: 1 iff some check failed.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
