//! One-parameter sweeps over a scenario.

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

/// `parameter` is a dotted path into the scenario, e.g.
/// `ensemble.relaxation` (a quantity; its `value` is swept in the unit
/// written in the file) or `optical_cavity.quality_factor`. Array elements
/// are addressed by index: `protocol.stages.0.duration`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<SweepScale>,
}

impl SweepSpec {
    pub fn from_values(parameter: impl Into<String>, values: Vec<f64>) -> Self {
        Self { parameter: parameter.into(), values: Some(values), min: None, max: None, count: None, scale: None }
    }

    pub fn from_range(parameter: impl Into<String>, min: f64, max: f64, count: usize, scale: SweepScale) -> Self {
        Self {
            parameter: parameter.into(),
            values: None,
            min: Some(min),
            max: Some(max),
            count: Some(count),
            scale: Some(scale),
        }
    }

    /// Sweep points in output order.
    ///
    /// A range with `min > max` yields exactly the reverse of the swapped
    /// range, so reversed sweeps compare bit for bit.
    pub fn points(&self) -> CliResult<Vec<f64>> {
        let range = (self.min, self.max, self.count);
        match (&self.values, range) {
            (Some(v), (None, None, None)) => {
                if v.is_empty() {
                    return Err(CliError::config("sweep.values is empty"));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(CliError::config("sweep.values must be finite"));
                }
                Ok(v.clone())
            }
            (None, (Some(a), Some(b), Some(n))) => {
                if n < 2 {
                    return Err(CliError::config("sweep.count must be at least 2"));
                }
                if !a.is_finite() || !b.is_finite() {
                    return Err(CliError::config("sweep bounds must be finite"));
                }
                let scale = self.scale.unwrap_or_default();
                if scale == SweepScale::Log && !(a > 0.0 && b > 0.0) {
                    return Err(CliError::config("log sweeps need positive bounds"));
                }
                let (lo, hi) = (a.min(b), a.max(b));
                let step = |k: usize| k as f64 / (n - 1) as f64;
                let mut pts: Vec<f64> = (0..n)
                    .map(|k| match scale {
                        SweepScale::Linear => lo + (hi - lo) * step(k),
                        SweepScale::Log => (lo.ln() + (hi.ln() - lo.ln()) * step(k)).exp(),
                    })
                    .collect();
                pts[0] = lo;
                pts[n - 1] = hi;
                if a > b {
                    pts.reverse();
                }
                Ok(pts)
            }
            _ => Err(CliError::config(
                "sweep needs either `values` or all of `min`, `max`, `count`",
            )),
        }
    }
}

/// Copy of `base` with the parameter at `path` set to `value`.
pub fn apply(base: &ScenarioConfig, path: &str, value: f64) -> CliResult<ScenarioConfig> {
    let mut doc = toml::Value::try_from(base).map_err(|e| CliError::config(e.to_string()))?;
    let unresolved = || CliError::config(format!("sweep parameter `{path}` does not resolve"));
    let mut node = &mut doc;
    for seg in path.split('.') {
        node = match node {
            toml::Value::Table(t) => t.get_mut(seg).ok_or_else(unresolved)?,
            toml::Value::Array(a) => {
                let k: usize = seg.parse().map_err(|_| unresolved())?;
                a.get_mut(k).ok_or_else(unresolved)?
            }
            _ => return Err(unresolved()),
        };
    }
    match node {
        toml::Value::Table(t) if t.contains_key("value") && t.contains_key("unit") => {
            t.insert("value".into(), toml::Value::Float(value));
        }
        toml::Value::Float(x) => *x = value,
        toml::Value::Integer(i) => {
            if value.fract() != 0.0 || value.abs() > i64::MAX as f64 {
                return Err(CliError::config(format!("sweep parameter `{path}` takes integers")));
            }
            *i = value as i64;
        }
        _ => {
            return Err(CliError::config(format!(
                "sweep parameter `{path}` is not a number or quantity"
            )))
        }
    }
    doc.try_into().map_err(|e: toml::de::Error| CliError::config(format!("sweep parameter `{path}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;

    #[test]
    fn log_points_hit_bounds_and_reverse_exactly() {
        let fwd = SweepSpec::from_range("p", 1e3, 1e7, 8, SweepScale::Log).points().unwrap();
        assert_eq!(fwd[0], 1e3);
        assert_eq!(fwd[7], 1e7);
        assert!(fwd.windows(2).all(|w| w[1] > w[0]));
        let mut rev = SweepSpec::from_range("p", 1e7, 1e3, 8, SweepScale::Log).points().unwrap();
        rev.reverse();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn invariants() {
        assert!(SweepSpec::from_range("p", 1.0, 2.0, 1, SweepScale::Linear).points().is_err());
        assert!(SweepSpec::from_range("p", -1.0, 2.0, 4, SweepScale::Log).points().is_err());
        assert!(SweepSpec::from_values("p", vec![]).points().is_err());
    }

    #[test]
    fn apply_sets_quantity_and_scalar() {
        let s = Scenario::from_str(
            "[ensemble]\nrelaxation = { value = 1.0, unit = \"kHz_2pi\" }\n\
             [optical_cavity]\nfrequency = { value = 1.0, unit = \"eV\" }\nquality_factor = 1e10\ntruncation = 3\n",
            ".",
        )
        .unwrap();
        let c = apply(&s.config, "ensemble.relaxation", 5.0).unwrap();
        assert_eq!(c.ensemble.unwrap().relaxation.unwrap().value, 5.0);
        let c = apply(&s.config, "optical_cavity.quality_factor", 1e9).unwrap();
        assert_eq!(c.optical_cavity.as_ref().unwrap().quality_factor, Some(1e9));
        let c = apply(&s.config, "optical_cavity.truncation", 6.0).unwrap();
        assert_eq!(c.optical_cavity.unwrap().truncation, Some(6));
        let err = apply(&s.config, "ensemble.nothing", 1.0).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
