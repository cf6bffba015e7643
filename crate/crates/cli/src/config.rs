//! Line-oriented run configuration: `key = value` pairs, `#` comments.

use std::fmt;
use std::str::FromStr;

use billiard_core::DomainSpec;
use serde_json::{json, Value};
use thiserror::Error;

/// Largest `t_end · κ` accepted.
pub const MAX_DILATION_SPAN: f64 = 100.0;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("`{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

impl ConfigError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Syntax { .. } => "syntax",
            ConfigError::UnknownKey { .. } => "unknown-key",
            ConfigError::Duplicate { .. } => "duplicate-key",
            ConfigError::Invalid { .. } => "invalid-value",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Task {
    Modes,
    Pantograph,
    Populations,
    EnergyRate,
    Validate,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Modes => "modes",
            Task::Pantograph => "pantograph",
            Task::Populations => "populations",
            Task::EnergyRate => "energy-rate",
            Task::Validate => "validate",
        }
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Task::Modes, Task::Pantograph, Task::Populations, Task::EnergyRate, Task::Validate]
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Mode indices `(m, n)`.
pub type ModeIndex = (i32, u32);

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub mu: f64,
    pub hbar: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub r0: f64,
    pub m_max: u32,
    pub n_max: u32,
    pub nr: usize,
    pub ntheta: usize,
    pub dt: f64,
    pub t_end: f64,
    pub n_samples: usize,
    pub initial: ModeIndex,
    pub targets: Vec<ModeIndex>,
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            task: Task::Populations,
            mu: 1.0,
            hbar: 1.0,
            kappa: 0.1,
            gamma: 0.5,
            epsilon: 0.05,
            r0: 1.0,
            m_max: 5,
            n_max: 8,
            nr: 256,
            ntheta: 64,
            dt: 0.01,
            t_end: 50.0,
            n_samples: 201,
            initial: (0, 1),
            targets: vec![(1, 1), (1, 2), (1, 3), (1, 4)],
            output: None,
        }
    }
}

impl RunConfig {
    pub fn domain(&self) -> DomainSpec {
        DomainSpec {
            mu: self.mu,
            hbar: self.hbar,
            r0: self.r0,
            kappa: self.kappa,
            gamma: self.gamma,
            epsilon: self.epsilon,
        }
    }

    /// Uniform sample times on `[0, t_end]`.
    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples).map(|i| self.t_end * i as f64 / (self.n_samples - 1) as f64).collect()
    }

    /// Time column scale: results are reported in units of `1/κ` when `κ > 0`.
    pub fn time_unit(&self) -> (f64, &'static str) {
        if self.kappa > 0.0 {
            (self.kappa, "1/kappa")
        } else {
            (1.0, "raw")
        }
    }

    pub fn to_json(&self) -> Value {
        let pairs = |v: &[ModeIndex]| v.iter().map(|(m, n)| json!([m, n])).collect::<Vec<_>>();
        json!({
            "task": self.task.name(),
            "mu": self.mu,
            "hbar": self.hbar,
            "kappa": self.kappa,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "r0": self.r0,
            "m_max": self.m_max,
            "n_max": self.n_max,
            "nr": self.nr,
            "ntheta": self.ntheta,
            "dt": self.dt,
            "t_end": self.t_end,
            "n_samples": self.n_samples,
            "initial": [self.initial.0, self.initial.1],
            "targets": pairs(&self.targets),
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key: &'static str, reason: &str| Err(ConfigError::Invalid { key, reason: reason.to_string() });
        for (key, v) in [("mu", self.mu), ("hbar", self.hbar), ("r0", self.r0), ("gamma", self.gamma), ("dt", self.dt), ("t_end", self.t_end)] {
            if !(v > 0.0 && v.is_finite()) {
                return invalid(key, "must be positive and finite");
            }
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return invalid("kappa", "must be non-negative and finite");
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return invalid("epsilon", "must be non-negative and finite");
        }
        if self.t_end * self.kappa > MAX_DILATION_SPAN {
            return invalid("t_end", &format!("t_end * kappa must not exceed {MAX_DILATION_SPAN}"));
        }
        if self.n_max == 0 {
            return invalid("n_max", "must be at least 1");
        }
        if self.n_samples < 2 {
            return invalid("n_samples", "need at least 2 samples");
        }
        if self.nr < 16 {
            return invalid("nr", "need at least 16 radial points");
        }
        if self.ntheta < 16 || !self.ntheta.is_multiple_of(2) {
            return invalid("ntheta", "need an even count of at least 16");
        }
        if self.initial.1 == 0 || self.targets.iter().any(|t| t.1 == 0) {
            return invalid(if self.initial.1 == 0 { "initial" } else { "targets" }, "radial index starts at 1");
        }
        if self.targets.is_empty() {
            return invalid("targets", "need at least one target mode");
        }
        Ok(())
    }
}

fn number<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.parse().map_err(|_| ConfigError::Syntax { line, message: format!("`{key}`: cannot parse `{raw}`") })
}

fn mode_index(line: usize, key: &str, raw: &str) -> Result<ModeIndex, ConfigError> {
    let parts: Vec<&str> = raw.split_whitespace().collect();
    match parts.as_slice() {
        [m, n] => Ok((number(line, key, m)?, number(line, key, n)?)),
        _ => Err(ConfigError::Syntax { line, message: format!("`{key}`: expected `m n`, got `{raw}`") }),
    }
}

/// Parses and validates a configuration document. Omitted keys keep their
/// defaults; `t_end` defaults to `5/κ` when `κ > 0`.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    let mut seen: Vec<String> = Vec::new();
    let mut t_end_given = false;
    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| ConfigError::Syntax { line, message: format!("expected `key = value`, got `{content}`") })?;
        if seen.iter().any(|k| k == key) {
            return Err(ConfigError::Duplicate { line, key: key.to_string() });
        }
        seen.push(key.to_string());
        match key {
            "task" => config.task = value.parse().map_err(|message| ConfigError::Syntax { line, message })?,
            "mu" => config.mu = number(line, key, value)?,
            "hbar" => config.hbar = number(line, key, value)?,
            "kappa" => config.kappa = number(line, key, value)?,
            "gamma" => config.gamma = number(line, key, value)?,
            "epsilon" => config.epsilon = number(line, key, value)?,
            "r0" => config.r0 = number(line, key, value)?,
            "m_max" => config.m_max = number(line, key, value)?,
            "n_max" => config.n_max = number(line, key, value)?,
            "nr" => config.nr = number(line, key, value)?,
            "ntheta" => config.ntheta = number(line, key, value)?,
            "dt" => config.dt = number(line, key, value)?,
            "t_end" => {
                config.t_end = number(line, key, value)?;
                t_end_given = true;
            }
            "n_samples" => config.n_samples = number(line, key, value)?,
            "initial" => config.initial = mode_index(line, key, value)?,
            "targets" => {
                config.targets =
                    value.split(',').map(|item| mode_index(line, key, item.trim())).collect::<Result<_, _>>()?
            }
            "output" => config.output = Some(value.to_string()),
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
    }
    if !t_end_given && config.kappa > 0.0 {
        config.t_end = 5.0 / config.kappa;
    }
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_the_first_figure() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!((c.epsilon, c.gamma / c.kappa, c.hbar), (0.05, 5.0, 1.0));
        assert_eq!(c.t_end, 50.0);
    }

    #[test]
    fn negative_epsilon_is_named() {
        match parse_config("epsilon = -0.1") {
            Err(ConfigError::Invalid { key, .. }) => assert_eq!(key, "epsilon"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn task_and_initial_mode() {
        let c = parse_config("task = populations\ninitial = 0 1").unwrap();
        assert_eq!((c.task, c.initial), (Task::Populations, (0, 1)));
        let c = parse_config("# comment\ntask = modes   # trailing\ntargets = 1 1, -1 2").unwrap();
        assert_eq!(c.task, Task::Modes);
        assert_eq!(c.targets, vec![(1, 1), (-1, 2)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_config("mu = 1\n\nfoo = 2"),
            Err(ConfigError::UnknownKey { line: 3, key: "foo".into() })
        );
        assert!(matches!(parse_config("mu = 1\nkappa 0.2"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(matches!(parse_config("nr = many"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(parse_config("mu = 1\nmu = 2"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(matches!(parse_config("initial = 0"), Err(ConfigError::Syntax { line: 1, .. })));
    }

    #[test]
    fn range_guards() {
        assert!(matches!(parse_config("t_end = 2000"), Err(ConfigError::Invalid { key: "t_end", .. })));
        assert!(matches!(parse_config("ntheta = 33"), Err(ConfigError::Invalid { key: "ntheta", .. })));
        assert!(matches!(parse_config("initial = 0 0"), Err(ConfigError::Invalid { key: "initial", .. })));
        let c = parse_config("kappa = 0.2").unwrap();
        assert_eq!(c.t_end, 25.0);
    }
}
