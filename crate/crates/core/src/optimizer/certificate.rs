//! The certificate produced by [`super::minimize`] and its JSON form.
//!
//! The document is a flat object with dotted keys. Exponents are stored as
//! their reciprocals written as decimal strings (shortest round-trip form), so
//! `∞` is `"0"` and reading a certificate back is exact.

use serde_json::{json, Map, Value};

use crate::error::{GnsError, Result};
use crate::exponents::{GnsProblem, LebesgueExponent, Theta};
use crate::feasible::{in_sigma, FeasibilityReport, SigmaPoint};

use super::{objective, OptimizerConfig};

/// Which expression produced `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveForm {
    /// Two-term estimate evaluated at the equalizing splitting time.
    T0Substituted,
}

impl ObjectiveForm {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveForm::T0Substituted => "t0_substituted",
        }
    }
}

/// One sampled point with its objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    pub point: SigmaPoint,
    pub value: f64,
}

/// A feasible point and the constant it certifies.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub problem: GnsProblem,
    pub theta: Theta,
    /// In oriented labels (see [`GnsProblem::oriented`]).
    pub point: SigmaPoint,
    pub value: f64,
    pub objective_form: ObjectiveForm,
    /// The usual closed-form display at the same point, for comparison.
    pub displayed_value: f64,
    pub margins: FeasibilityReport,
    pub config: OptimizerConfig,
    /// Every point drawn by the sampler, across all starts.
    pub sample: Vec<SampleRecord>,
}

fn recip_str(e: LebesgueExponent) -> String {
    format!("{}", e.recip())
}

fn point_json(pt: &SigmaPoint) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("beta1".into(), json!(pt.beta1));
    m.insert("beta2".into(), json!(pt.beta2));
    m.insert("sigma".into(), json!(pt.sigma));
    m.insert("r1_recip".into(), json!(recip_str(pt.r1)));
    m.insert("r2_recip".into(), json!(recip_str(pt.r2)));
    m.insert("q1_recip".into(), json!(recip_str(pt.q1)));
    m.insert("q2_recip".into(), json!(recip_str(pt.q2)));
    m
}

impl BoundCertificate {
    pub fn sample_count(&self) -> usize {
        self.sample.len()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("artifact_version".into(), json!(crate::ARTIFACT_VERSION));
        let p = &self.problem;
        m.insert("problem.d".into(), json!(p.d));
        m.insert("problem.s".into(), json!(p.s));
        m.insert("problem.s1".into(), json!(p.s1));
        m.insert("problem.s2".into(), json!(p.s2));
        m.insert("problem.p_recip".into(), json!(recip_str(p.p)));
        m.insert("problem.p1_recip".into(), json!(recip_str(p.p1)));
        m.insert("problem.p2_recip".into(), json!(recip_str(p.p2)));
        m.insert("theta".into(), json!(self.theta.value()));
        m.insert(
            "orientation".into(),
            serde_json::to_value(p.orientation()).unwrap_or(Value::Null),
        );
        for (k, v) in point_json(&self.point) {
            m.insert(format!("point.{k}"), v);
        }
        m.insert("value".into(), json!(self.value));
        m.insert("objective_form".into(), json!(self.objective_form.as_str()));
        m.insert("displayed_value".into(), json!(self.displayed_value));
        m.insert("margins.ok".into(), json!(self.margins.ok));
        for margin in &self.margins.margins {
            m.insert(format!("margins.{}", margin.name), json!(margin.value));
        }
        let c = &self.config;
        m.insert("config.starts".into(), json!(c.starts));
        m.insert("config.sample_per_start".into(), json!(c.sample_per_start));
        m.insert("config.max_iters".into(), json!(c.max_iters));
        m.insert("config.rel_tol".into(), json!(c.rel_tol));
        m.insert("config.seed".into(), json!(c.seed));
        m.insert("config.sigma_window".into(), json!(c.sigma_window));
        m.insert("sample_count".into(), json!(self.sample_count()));
        let sample: Vec<Value> = self
            .sample
            .iter()
            .map(|rec| {
                let mut pm = point_json(&rec.point);
                pm.insert("value".into(), json!(rec.value));
                Value::Object(pm)
            })
            .collect();
        m.insert("sample".into(), Value::Array(sample));
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes");
        s.push('\n');
        s
    }

    /// Parses a certificate and recomputes everything derived: θ, margins and
    /// the value at the point must agree with the document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| GnsError::Parse(e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| GnsError::Parse("certificate must be a JSON object".into()))?;
        let num = |key: &str| -> Result<f64> {
            obj.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| GnsError::Parse(format!("missing number `{key}`")))
        };
        let int = |key: &str| -> Result<u64> {
            obj.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| GnsError::Parse(format!("missing integer `{key}`")))
        };
        let d = u32::try_from(int("problem.d")?)
            .map_err(|_| GnsError::Parse("dimension too large".into()))?;
        let problem = GnsProblem {
            d,
            s: num("problem.s")?,
            s1: num("problem.s1")?,
            s2: num("problem.s2")?,
            p: recip_field(obj, "problem.p_recip")?,
            p1: recip_field(obj, "problem.p1_recip")?,
            p2: recip_field(obj, "problem.p2_recip")?,
        };
        let theta = problem.theta()?;
        let point = point_from(obj, "point.")?;
        let config = OptimizerConfig {
            starts: int("config.starts")? as usize,
            sample_per_start: int("config.sample_per_start")? as usize,
            max_iters: int("config.max_iters")? as usize,
            rel_tol: num("config.rel_tol")?,
            seed: int("config.seed")?,
            sigma_window: num("config.sigma_window")?,
        };
        let value = num("value")?;
        let displayed_value = num("displayed_value")?;
        match obj.get("objective_form").and_then(Value::as_str) {
            Some("t0_substituted") => {}
            other => return Err(GnsError::Parse(format!("unknown objective_form {other:?}"))),
        }
        let sample = match obj.get("sample") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|item| {
                    let o = item
                        .as_object()
                        .ok_or_else(|| GnsError::Parse("sample entries must be objects".into()))?;
                    let value = o
                        .get("value")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| GnsError::Parse("sample entry without value".into()))?;
                    Ok(SampleRecord { point: point_from(o, "")?, value })
                })
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(GnsError::Parse("missing `sample` array".into())),
        };
        let cert = BoundCertificate {
            problem,
            theta,
            point,
            value,
            objective_form: ObjectiveForm::T0Substituted,
            displayed_value,
            margins: in_sigma(&problem, &point, 0.0),
            config,
            sample,
        };
        cert.check()?;
        Ok(cert)
    }

    /// Feasibility, value recomputation to `1e-12` relative, and dominance of
    /// the recorded sample.
    pub fn check(&self) -> Result<()> {
        if !self.margins.ok {
            return Err(GnsError::Infeasible(self.margins.violations().join(", ")));
        }
        let recomputed = objective(&self.problem, &self.point)?;
        if ((recomputed - self.value) / recomputed).abs() > 1e-12 {
            return Err(GnsError::Parse(format!(
                "recorded value {} differs from recomputed {}",
                self.value, recomputed
            )));
        }
        if let Some(rec) = self.sample.iter().find(|rec| rec.value < self.value) {
            return Err(GnsError::Parse(format!(
                "sample value {} undercuts certified value {}",
                rec.value, self.value
            )));
        }
        Ok(())
    }
}

fn recip_field(obj: &Map<String, Value>, key: &str) -> Result<LebesgueExponent> {
    let text = obj
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| GnsError::Parse(format!("missing string `{key}`")))?;
    let recip: f64 = text
        .parse()
        .map_err(|_| GnsError::Parse(format!("`{key}` is not a decimal: {text}")))?;
    LebesgueExponent::from_recip(recip)
}

fn point_from(obj: &Map<String, Value>, prefix: &str) -> Result<SigmaPoint> {
    let num = |key: &str| -> Result<f64> {
        obj.get(&format!("{prefix}{key}"))
            .and_then(Value::as_f64)
            .ok_or_else(|| GnsError::Parse(format!("missing number `{prefix}{key}`")))
    };
    let exp = |key: &str| recip_field(obj, &format!("{prefix}{key}"));
    Ok(SigmaPoint {
        beta1: num("beta1")?,
        beta2: num("beta2")?,
        sigma: num("sigma")?,
        r1: exp("r1_recip")?,
        r2: exp("r2_recip")?,
        q1: exp("q1_recip")?,
        q2: exp("q2_recip")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::minimize;

    #[test]
    fn json_round_trip() {
        let problem = GnsProblem::from_values(1, 0.5, 4.0, 1.0, 2.0, 0.0, 2.0).unwrap();
        let config = OptimizerConfig { starts: 2, sample_per_start: 4, seed: 1, ..Default::default() };
        let cert = minimize(&problem, &config).unwrap();
        let text = cert.to_json_string();
        let back = BoundCertificate::from_json_str(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json_string(), text);
        assert!(text.contains("\"objective_form\": \"t0_substituted\""));
        assert!(!text.contains("timestamp"));
    }

    #[test]
    fn tampered_value_is_rejected() {
        let problem = GnsProblem::from_values(1, 0.0, f64::INFINITY, 1.0, 2.0, 0.0, 2.0).unwrap();
        let config = OptimizerConfig { starts: 1, sample_per_start: 2, seed: 4, ..Default::default() };
        let cert = minimize(&problem, &config).unwrap();
        let mut doc = cert.to_json();
        doc["value"] = json!(cert.value * 0.5);
        assert!(BoundCertificate::from_json_str(&doc.to_string()).is_err());
        assert!(BoundCertificate::from_json_str("[1, 2]").is_err());
        assert!(BoundCertificate::from_json_str("not json").is_err());
    }
}
