//! Serializable operator-tuple documents.
//!
//! ```toml
//! scalar = "real"
//! p = 2.0
//!
//! [[operators]]
//! map = { kind = "doubling-a" }
//! weights = { kind = "pow2-override", beta = 2.0, underlying = { kind = "constant", value = 2.0 } }
//! ```
//!
//! Complex scalars are written as `[re, im]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{ShiftMap, ShiftRule};
use crate::operator::PseudoShift;
use crate::scalar::Scalar;
use crate::weights::WeightRule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarRepr {
    pub fn from_scalar<S: Scalar>(v: S) -> Self {
        match v.to_parts() {
            (re, im) if im == 0.0 && !S::IS_COMPLEX => ScalarRepr::Real(re),
            (re, im) => ScalarRepr::Complex([re, im]),
        }
    }

    pub fn to_scalar<S: Scalar>(&self, path: &str) -> Result<S> {
        let (re, im) = match *self {
            ScalarRepr::Real(re) => (re, 0.0),
            ScalarRepr::Complex([re, im]) => (re, im),
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Config(format!("{path}: value must be finite")));
        }
        S::from_parts(re, im).ok_or_else(|| {
            Error::Config(format!("{path}: complex value in a real scalar field"))
        })
    }
}

pub fn scalars_from_reprs<S: Scalar>(values: &[ScalarRepr], path: &str) -> Result<Vec<S>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v.to_scalar(&format!("{path}[{i}]")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub index: u64,
    pub value: ScalarRepr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant {
        value: ScalarRepr,
    },
    Pow2Override {
        beta: ScalarRepr,
        underlying: Box<WeightSpec>,
    },
    Table {
        default: ScalarRepr,
        #[serde(default)]
        entries: Vec<TableEntry>,
    },
    BlockProduct {
        base: Box<WeightSpec>,
        span: u64,
    },
}

impl WeightSpec {
    pub fn from_rule<S: Scalar>(rule: &WeightRule<S>) -> Self {
        match rule {
            WeightRule::Constant(v) => WeightSpec::Constant {
                value: ScalarRepr::from_scalar(*v),
            },
            WeightRule::PowersOfTwo { underlying, beta } => WeightSpec::Pow2Override {
                beta: ScalarRepr::from_scalar(*beta),
                underlying: Box::new(Self::from_rule(underlying)),
            },
            WeightRule::Table { entries, default } => WeightSpec::Table {
                default: ScalarRepr::from_scalar(*default),
                entries: entries
                    .iter()
                    .map(|(&index, &v)| TableEntry {
                        index,
                        value: ScalarRepr::from_scalar(v),
                    })
                    .collect(),
            },
            WeightRule::BlockProduct { base, span } => WeightSpec::BlockProduct {
                base: Box::new(Self::from_rule(base)),
                span: *span,
            },
        }
    }

    /// Builds the rule; errors name the offending field under `path`.
    pub fn to_rule<S: Scalar>(&self, path: &str) -> Result<WeightRule<S>> {
        let nonzero = |v: S, field: String| {
            if v.is_zero_scalar() {
                Err(Error::Config(format!("{field}: weight must be nonzero")))
            } else {
                Ok(v)
            }
        };
        let rule = match self {
            WeightSpec::Constant { value } => {
                let field = format!("{path}.value");
                WeightRule::Constant(nonzero(value.to_scalar(&field)?, field)?)
            }
            WeightSpec::Pow2Override { beta, underlying } => {
                let field = format!("{path}.beta");
                WeightRule::PowersOfTwo {
                    beta: nonzero(beta.to_scalar(&field)?, field)?,
                    underlying: Box::new(underlying.to_rule(&format!("{path}.underlying"))?),
                }
            }
            WeightSpec::Table { default, entries } => {
                let field = format!("{path}.default");
                let default = nonzero(default.to_scalar(&field)?, field)?;
                let mut map = BTreeMap::new();
                for (i, e) in entries.iter().enumerate() {
                    let field = format!("{path}.entries[{i}]");
                    if e.index == 0 {
                        return Err(Error::Config(format!("{field}.index: indices start at 1")));
                    }
                    let v = nonzero(e.value.to_scalar(&field)?, format!("{field}.value"))?;
                    if map.insert(e.index, v).is_some() {
                        return Err(Error::Config(format!(
                            "{field}.index: duplicate index {}",
                            e.index
                        )));
                    }
                }
                WeightRule::Table {
                    entries: map,
                    default,
                }
            }
            WeightSpec::BlockProduct { base, span } => {
                if *span == 0 {
                    return Err(Error::Config(format!("{path}.span: must be at least 1")));
                }
                WeightRule::BlockProduct {
                    base: Box::new(base.to_rule(&format!("{path}.base"))?),
                    span: *span,
                }
            }
        };
        rule.validate()
            .map_err(|e| Error::Config(format!("{path}: {e}")))?;
        Ok(rule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarField {
    #[default]
    Real,
    Complex,
}

impl ScalarField {
    pub fn of<S: Scalar>() -> Self {
        if S::IS_COMPLEX {
            ScalarField::Complex
        } else {
            ScalarField::Real
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub map: ShiftRule,
    pub weights: WeightSpec,
}

fn default_p() -> f64 {
    2.0
}

/// One operator tuple `T_1, …, T_N` on `ℓ^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleSpec {
    #[serde(default)]
    pub scalar: ScalarField,
    #[serde(default = "default_p")]
    pub p: f64,
    pub operators: Vec<OperatorSpec>,
}

impl TupleSpec {
    pub fn from_operators<S: Scalar>(ts: &[PseudoShift<S>], p: f64) -> Self {
        Self {
            scalar: ScalarField::of::<S>(),
            p,
            operators: ts
                .iter()
                .map(|t| OperatorSpec {
                    map: t.map().rule().clone(),
                    weights: WeightSpec::from_rule(t.weights()),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return Err(Error::Config(format!("p: must be a finite real ≥ 1, got {}", self.p)));
        }
        if self.operators.is_empty() {
            return Err(Error::Config("operators: at least one operator is required".into()));
        }
        Ok(())
    }

    /// Builds the tuple over `S`; the document's scalar field must match.
    pub fn build<S: Scalar>(&self) -> Result<Vec<PseudoShift<S>>> {
        self.validate()?;
        if self.scalar != ScalarField::of::<S>() {
            return Err(Error::Config(format!(
                "scalar: document declares {:?}, requested {:?}",
                self.scalar,
                ScalarField::of::<S>()
            )));
        }
        self.operators
            .iter()
            .enumerate()
            .map(|(i, op)| {
                let path = format!("operators[{i}]");
                let map = ShiftMap::new(op.map.clone())
                    .map_err(|e| Error::Config(format!("{path}.map: {e}")))?;
                let weights = op.weights.to_rule::<S>(&format!("{path}.weights"))?;
                PseudoShift::new(map, weights).map_err(|e| Error::Config(format!("{path}: {e}")))
            })
            .collect()
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}
