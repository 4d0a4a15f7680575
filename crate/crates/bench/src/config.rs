use std::fmt;
use std::str::FromStr;

use mcbcast::InterferenceModel;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Bts,
    Ets,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Bts => "bts",
            Algorithm::Ets => "ets",
        }
    }

    /// Parses `bts`, `ets` or `both`.
    pub fn parse_set(s: &str) -> Result<Vec<Algorithm>, BenchError> {
        match s {
            "bts" => Ok(vec![Algorithm::Bts]),
            "ets" => Ok(vec![Algorithm::Ets]),
            "both" => Ok(vec![Algorithm::Bts, Algorithm::Ets]),
            other => Err(BenchError::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the deployment square scales with the node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaRule {
    /// Side equals `n` meters.
    Scaled,
    Fixed(f64),
}

impl AreaRule {
    pub fn side(&self, n: usize) -> f64 {
        match *self {
            AreaRule::Scaled => n as f64,
            AreaRule::Fixed(side) => side,
        }
    }
}

impl FromStr for AreaRule {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "scaled" {
            return Ok(AreaRule::Scaled);
        }
        s.strip_prefix("fixed:")
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| *v > 0.0 && v.is_finite())
            .map(AreaRule::Fixed)
            .ok_or_else(|| BenchError::Config(format!("area must be `scaled` or `fixed:<side>`, got `{s}`")))
    }
}

/// Scheduler switches shared by `sweep` and `run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelFlags {
    pub prune_empty: bool,
    pub interference: InterferenceModel,
}

impl Default for ModelFlags {
    fn default() -> Self {
        ModelFlags {
            prune_empty: true,
            interference: InterferenceModel::ChannelAware,
        }
    }
}

impl ModelFlags {
    /// Label written to the `algo` CSV column: the algorithm name followed by
    /// every non-default flag, e.g. `ets:literal:noprune`.
    pub fn label(&self, algo: Algorithm) -> String {
        let mut s = algo.name().to_string();
        if algo == Algorithm::Ets && self.interference == InterferenceModel::Literal {
            s.push_str(":literal");
        }
        if !self.prune_empty {
            s.push_str(":noprune");
        }
        s
    }
}

pub fn parse_interference(s: &str) -> Result<InterferenceModel, BenchError> {
    match s {
        "literal" => Ok(InterferenceModel::Literal),
        "aware" => Ok(InterferenceModel::ChannelAware),
        other => Err(BenchError::Config(format!(
            "interference must be `literal` or `aware`, got `{other}`"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub k_values: Vec<u32>,
    pub radius: f64,
    pub area: AreaRule,
    pub trials: usize,
    pub master_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub flags: ModelFlags,
    pub strict_verify: bool,
    /// Redraws allowed per trial when a topology comes out disconnected.
    pub max_retries: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_values: (1..=10).map(|i| i * 100).collect(),
            k_values: vec![10],
            radius: 100.0,
            area: AreaRule::Scaled,
            trials: 10,
            master_seed: 1,
            algorithms: vec![Algorithm::Bts, Algorithm::Ets],
            flags: ModelFlags::default(),
            strict_verify: true,
            max_retries: 200,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(BenchError::Config("n values must be positive".into()));
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(BenchError::Config("k values must be positive".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(BenchError::Config("radius must be positive".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithm selected".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_parsing() {
        assert_eq!("scaled".parse::<AreaRule>().unwrap(), AreaRule::Scaled);
        assert_eq!("fixed:250".parse::<AreaRule>().unwrap(), AreaRule::Fixed(250.0));
        assert!("fixed:-1".parse::<AreaRule>().is_err());
        assert!("huge".parse::<AreaRule>().is_err());
        assert_eq!(AreaRule::Scaled.side(300), 300.0);
    }

    #[test]
    fn labels() {
        let f = ModelFlags::default();
        assert_eq!(f.label(Algorithm::Ets), "ets");
        let f = ModelFlags {
            prune_empty: false,
            interference: InterferenceModel::Literal,
        };
        assert_eq!(f.label(Algorithm::Ets), "ets:literal:noprune");
        assert_eq!(f.label(Algorithm::Bts), "bts:noprune");
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = ExperimentConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            k_values: vec![0],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!(Algorithm::parse_set("both").unwrap().len(), 2);
        assert!(Algorithm::parse_set("gbs").is_err());
    }
}
