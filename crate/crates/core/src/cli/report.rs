//! JSON and CSV rendering of command results.

use serde_json::{json, Map, Value};

use crate::lattice::Family;
use crate::report::{BoundCheck, DefectReport, RepairResult, Witness};

/// Witness with element ids replaced by element keys.
pub fn witness_json(family: &Family, witness: &Option<Witness>) -> Value {
    let key = |id| Value::from(family.element_key(id));
    match witness {
        None => Value::Null,
        Some(Witness::Pair { lower, upper }) => json!({
            "type": "pair",
            "lower": key(*lower),
            "upper": key(*upper),
        }),
        Some(Witness::Cover(c)) => json!({
            "type": "cover",
            "target": key(c.target),
            "parts": c.parts.iter().map(|&p| key(p)).collect::<Vec<_>>(),
            "cover_sum": c.cover_sum,
        }),
        Some(Witness::Triple { low, mid, high }) => json!({
            "type": "triple",
            "low": key(*low),
            "mid": key(*mid),
            "high": key(*high),
        }),
    }
}

fn check_json(family: &Family, c: &BoundCheck) -> Value {
    json!({
        "name": c.name,
        "holds": c.holds,
        "worst_slack": c.worst_slack,
        "at": family.element_key(c.at),
    })
}

/// One property evaluation, with fields present for every command so the key
/// order never changes. Not-applicable fields are `null`.
pub struct Row {
    pub property: &'static str,
    pub mode: Option<&'static str>,
    pub epsilon: Option<f64>,
    pub defect: DefectReport,
    pub norm_distance: Option<f64>,
    pub guarantee_met: Option<bool>,
    pub repair: Option<RepairResult>,
    pub oracle: Option<f64>,
}

fn opt<T: Into<Value>>(v: Option<T>) -> Value {
    v.map_or(Value::Null, Into::into)
}

impl Row {
    pub fn to_json(&self, family: &Family) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("property".into(), self.property.into());
        m.insert("mode".into(), opt(self.mode));
        m.insert("epsilon".into(), opt(self.epsilon));
        m.insert("epsilon_star".into(), self.defect.epsilon_star.into());
        m.insert("witness".into(), witness_json(family, &self.defect.witness));
        m.insert("norm_distance".into(), opt(self.norm_distance));
        m.insert("guarantee_met".into(), opt(self.guarantee_met));
        let trace = self.repair.as_ref().and_then(|r| r.trace.as_ref());
        m.insert("iterations".into(), opt(trace.map(|t| t.iterations)));
        if let Some(r) = &self.repair {
            m.insert("bound".into(), r.bound.into());
            m.insert("hypothesis_holds".into(), r.hypothesis_holds.into());
            if let Some(t) = trace {
                m.insert("converged".into(), t.converged.into());
            }
            m.insert(
                "checks".into(),
                r.checks
                    .iter()
                    .map(|c| check_json(family, c))
                    .collect::<Vec<_>>()
                    .into(),
            );
        }
        if let Some(o) = self.oracle {
            m.insert(
                "oracle".into(),
                json!({ "epsilon_star": o, "agrees": oracle_agrees(self.defect.epsilon_star, o) }),
            );
        }
        m
    }

    pub fn to_csv(&self) -> String {
        let num = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
        format!(
            "{},{},{},{},{}",
            self.property,
            self.mode.unwrap_or(""),
            self.defect.epsilon_star,
            num(self.norm_distance),
            self.guarantee_met.map_or(String::new(), |b| b.to_string()),
        )
    }
}

pub const CSV_HEADER: &str = "property,mode,epsilon_star,norm_distance,guarantee_met";

pub fn oracle_agrees(fast: f64, brute: f64) -> bool {
    (fast - brute).abs() <= 1e-12 * (1.0 + fast.abs().max(brute.abs()))
}
