//! Run configuration: a TOML file with a `[law]` and a `[run]` table.
//!
//! ```toml
//! [law]
//! kind = "langevin"
//! lambda = 1.0
//!
//! [run]
//! region = "ii"
//! mu = 0.1
//! delta = 0.05
//! ```

use std::path::Path;

use ferrojet::magnetisation::MagnetisationLaw;
use serde::Deserialize;

use crate::args::{BranchName, ConventionName, LawArgs, LawKind, RegionName, ThetaName};
use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub law: LawSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSection {
    #[serde(alias = "law")]
    pub kind: Option<LawKind>,
    pub lambda: Option<f64>,
    #[serde(alias = "m1p1")]
    pub m1p: Option<f64>,
    #[serde(alias = "m1pp1")]
    pub m1pp: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub region: Option<RegionName>,
    pub beta0: Option<f64>,
    pub gamma0: Option<f64>,
    pub s: Option<f64>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub theta: Option<ThetaName>,
    pub branch: Option<BranchName>,
    pub convention: Option<ConventionName>,
    pub half_length: Option<f64>,
    pub nodes: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => Self::parse(&std::fs::read_to_string(p)?),
        }
    }

    /// Builds the law from flags, falling back to the file, then to the linear law.
    pub fn law(&self, flags: &LawArgs) -> Result<MagnetisationLaw, CliError> {
        let kind = flags.law.or(self.law.kind).unwrap_or(LawKind::Linear);
        let lambda = flags.lambda.or(self.law.lambda);
        let m1p = flags.m1p.or(self.law.m1p);
        let m1pp = flags.m1pp.or(self.law.m1pp);
        Ok(match kind {
            LawKind::Linear => MagnetisationLaw::linear(),
            LawKind::Langevin => {
                let lambda = lambda.ok_or_else(|| CliError::Validation("langevin law needs --lambda".into()))?;
                MagnetisationLaw::langevin(lambda)?
            }
            LawKind::Custom => {
                let (Some(p), Some(pp)) = (m1p, m1pp) else {
                    return Err(CliError::Validation("custom law needs --m1p and --m1pp".into()));
                };
                MagnetisationLaw::custom(p, pp)?
            }
        })
    }
}

pub fn require(value: Option<f64>, name: &str) -> Result<f64, CliError> {
    match value {
        Some(v) if v.is_finite() => Ok(v),
        Some(v) => Err(CliError::Validation(format!("--{name} must be finite, got {v}"))),
        None => Err(CliError::Validation(format!("missing --{name}"))),
    }
}
