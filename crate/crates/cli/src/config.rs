//! JSON run configuration for `simulate`.

use serde::{Deserialize, Serialize};
use tlbm_core::equilibrium::ExpansionSpec;
use tlbm_core::simulator::ShockTubeConfig;

use crate::error::{CliError, CliResult};
use crate::select::ModelSource;

/// An expansion written either as a label (`"HE3"`) or in full.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpansionField {
    Label(String),
    Full(ExpansionSpec),
}

impl ExpansionField {
    pub fn resolve(&self) -> CliResult<ExpansionSpec> {
        let spec = match self {
            ExpansionField::Label(s) => s.parse::<ExpansionSpec>().map_err(|e| CliError::Usage(e.to_string()))?,
            ExpansionField::Full(spec) => spec.clone(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// ```json
/// {
///   "model": {"catalog": "q5"},
///   "expansion": "HE3",
///   "shock_tube": {"rho_bar": 3.0, "tau": 1.0}
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub model: Option<ModelSource>,
    pub expansion: Option<ExpansionField>,
    #[serde(default)]
    pub shock_tube: ShockTubeConfig,
}

impl SimulationConfig {
    pub fn empty() -> Self {
        Self { model: None, expansion: None, shock_tube: ShockTubeConfig::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_uses_defaults() {
        let c: SimulationConfig = serde_json::from_str(r#"{"model":{"catalog":"q7"},"expansion":"TE3"}"#).unwrap();
        assert_eq!(c.shock_tube, ShockTubeConfig::default());
        assert_eq!(c.expansion.unwrap().resolve().unwrap(), ExpansionSpec::taylor(3));
    }

    #[test]
    fn full_expansion_and_unknown_fields() {
        let c: SimulationConfig = serde_json::from_str(
            r#"{"expansion":{"kind":"HE","order":4,"theta0":"1"},"shock_tube":{"rho_bar":11,"dense_side":"right"}}"#,
        )
        .unwrap();
        assert_eq!(c.shock_tube.rho_bar, 11.0);
        assert!(serde_json::from_str::<SimulationConfig>(r#"{"shock_tube":{"rho":1}}"#).is_err());
        assert!(serde_json::from_str::<SimulationConfig>(r#"{"steps":3}"#).is_err());
    }
}
