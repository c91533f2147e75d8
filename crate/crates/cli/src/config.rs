//! Run configuration documents.

use serde::{Deserialize, Serialize};

use pseudoshift::config::ScalarRepr;
use pseudoshift::criteria::ConditionId;
use pseudoshift::TupleSpec;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Construct,
    Orbit,
    Gallery,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Construct => "construct",
            Command::Orbit => "orbit",
            Command::Gallery => "gallery",
        }
    }
}

fn default_k_from() -> u64 {
    1
}

fn default_one() -> u64 {
    1
}

/// Parameters of a `check` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    pub condition: ConditionId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// `K`
    #[serde(default = "default_k_from")]
    pub k_from: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<u64>,
    /// `M`
    #[serde(default = "default_one")]
    pub m: u64,
    /// Explicit `(n_k)`; `n_k = k` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nks: Option<Vec<u64>>,
    /// One row per operator (`dhc-b`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Vec<ScalarRepr>>>,
    /// Shared row (`shc-b`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<Vec<ScalarRepr>>,
    /// First `m` examined by `s-ratio`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_m: Option<u64>,
    /// `r_1 < … < r_N` for `hereditary`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<Vec<u64>>,
    /// `dhc-a` threshold on `|W_{m,n_k}|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// `n_max` for `salas`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructSection {
    pub n: u64,
    /// `M`
    pub m: u64,
    /// Coefficients of `x_i` on `[M]`, one list per operator.
    pub targets: Vec<Vec<ScalarRepr>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSection {
    /// Dense coefficient lists, one per stage.
    pub targets: Vec<Vec<ScalarRepr>>,
    pub schedule: Vec<f64>,
    #[serde(default = "default_search_bound")]
    pub n_search_bound: u64,
    /// Emit the visit log as CSV next to the report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

fn default_search_bound() -> u64 {
    400
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GalleryName {
    /// The doubling-map pair over a constructed underlying pair.
    DoublingPair,
    /// Two weighted shifts whose direct sum is hypercyclic.
    ShiftCounterexample,
    /// `λB`.
    Rolewicz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GallerySection {
    pub name: GalleryName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<ScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<TupleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construct: Option<ConstructSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gallery: Option<GallerySection>,
}

fn positive(value: Option<f64>, field: &str) -> CliResult<()> {
    match value {
        Some(v) if !(v > 0.0) || !v.is_finite() => Err(CliError::Input(format!(
            "{field}: must be a positive finite number, got {v}"
        ))),
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Strict parse followed by [`RunConfig::validate`].
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn validate(&self) -> CliResult<()> {
        positive(self.tol.filter(|t| *t != 0.0), "tol")?;
        if let Some(t) = &self.tuple {
            t.validate().map_err(|e| match e {
                pseudoshift::Error::Config(msg) => CliError::Input(format!("tuple.{msg}")),
                other => CliError::Input(format!("tuple: {other}")),
            })?;
        }
        let need_tuple = || {
            self.tuple
                .as_ref()
                .map(|_| ())
                .ok_or_else(|| CliError::Input(format!("tuple: required by `{}`", self.command.as_str())))
        };
        let missing = |s: &str| CliError::Input(format!("{s}: section required by `{s}`"));
        match self.command {
            Command::Check => {
                need_tuple()?;
                let c = self.check.as_ref().ok_or_else(|| missing("check"))?;
                positive(c.epsilon, "check.epsilon")?;
                positive(c.threshold, "check.threshold")?;
                if c.m == 0 {
                    return Err(CliError::Input("check.m: must be at least 1".into()));
                }
                let eps_needed = !matches!(c.condition, ConditionId::DhcA | ConditionId::Salas);
                if eps_needed && c.epsilon.is_none() {
                    return Err(CliError::Input(format!(
                        "check.epsilon: required by `{}`",
                        c.condition
                    )));
                }
            }
            Command::Construct => {
                need_tuple()?;
                let c = self.construct.as_ref().ok_or_else(|| missing("construct"))?;
                if c.n == 0 || c.m == 0 {
                    return Err(CliError::Input("construct.n, construct.m: must be at least 1".into()));
                }
            }
            Command::Orbit => {
                need_tuple()?;
                let o = self.orbit.as_ref().ok_or_else(|| missing("orbit"))?;
                for (i, e) in o.schedule.iter().enumerate() {
                    positive(Some(*e), &format!("orbit.schedule[{i}]"))?;
                }
            }
            Command::Gallery => {
                let g = self.gallery.as_ref().ok_or_else(|| missing("gallery"))?;
                positive(g.beta, "gallery.beta")?;
                positive(g.alpha, "gallery.alpha")?;
                positive(g.epsilon, "gallery.epsilon")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHECK: &str = r#"
command = "check"

[tuple]
scalar = "real"
p = 2.0

[[tuple.operators]]
map = { kind = "affine", offset = 1 }
weights = { kind = "constant", value = 2.0 }

[[tuple.operators]]
map = { kind = "affine", offset = 1 }
weights = { kind = "table", default = 2.0, entries = [{ index = 2, value = 3.0 }] }

[check]
condition = "s-ratio"
epsilon = 0.25
k_bound = 20
"#;

    #[test]
    fn parse_round_trips() {
        let cfg = RunConfig::parse(CHECK).unwrap();
        let text = cfg.to_toml().unwrap();
        let again = RunConfig::parse(&text).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_toml().unwrap(), text);
    }

    #[test]
    fn zero_epsilon_rejected() {
        let err = RunConfig::parse(&CHECK.replace("epsilon = 0.25", "epsilon = 0.0")).unwrap_err();
        assert!(err.to_string().contains("check.epsilon"), "{err}");
    }

    #[test]
    fn duplicate_and_unknown_fields() {
        let err = RunConfig::parse(&CHECK.replace("k_bound = 20", "k_bound = 20\nk_bound = 3")).unwrap_err();
        assert!(err.to_string().contains("k_bound"), "{err}");
        let err = RunConfig::parse(&CHECK.replace("k_bound = 20", "kbound = 20")).unwrap_err();
        assert!(err.to_string().contains("kbound"), "{err}");
    }

    #[test]
    fn missing_sections_are_named() {
        let err = RunConfig::parse("command = \"orbit\"").unwrap_err();
        assert!(err.to_string().contains("tuple"), "{err}");
        let err = RunConfig::parse("command = \"gallery\"").unwrap_err();
        assert!(err.to_string().contains("gallery"), "{err}");
    }
}
