//! Factorization traces between the two quotients of a cobordism and their
//! replay check.

use serde_json::{json, Value};
use thiserror::Error;

use torific_core::fans::{fans_equal, Cone, Fan};
use torific_core::lattice::LatticeVector;

use crate::report;

/// One move of a trace, acting on the current fan of the quotient lattice.
#[derive(Debug, Clone)]
pub enum TraceStep {
    /// Replaces the current fan by its star subdivision at `ray`.
    StarSubdivision { ray: LatticeVector, result: Fan },
    /// Replaces the current fan by `result`, whose star subdivision at `ray`
    /// is the current fan.
    InverseStarSubdivision { ray: LatticeVector, result: Fan },
    /// A torific blowup of one chart of the cobordism. It does not move the
    /// quotient fan; replay requires all of its certificates.
    TorificBlowup { chart: Cone, removed_rays: Vec<LatticeVector>, certified: bool, report: Value },
    /// `lower → common ← upper` with `common` refining both ends.
    QuotientMap { lower: Fan, upper: Fan, common: Fan, method: String },
}

#[derive(Debug, Clone)]
pub struct FactorizationTrace {
    pub source: Fan,
    pub target: Fan,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index}: {message}")]
    Step { index: usize, message: String },
    #[error("replay ends at {reached}, expected the target {target}")]
    WrongTarget { reached: String, target: String },
}

impl TraceStep {
    pub fn kind(&self) -> &'static str {
        match self {
            TraceStep::StarSubdivision { .. } => "star-subdivision",
            TraceStep::InverseStarSubdivision { .. } => "inverse-star-subdivision",
            TraceStep::TorificBlowup { .. } => "torific-blowup",
            TraceStep::QuotientMap { .. } => "quotient-map",
        }
    }

    fn apply(&self, current: &Fan) -> Result<Fan, String> {
        match self {
            TraceStep::StarSubdivision { ray, result } => {
                let next = current.star_subdivision(ray).map_err(|e| e.to_string())?;
                if !fans_equal(&next, result) {
                    return Err(format!("star subdivision at {ray} gives {next}, recorded {result}"));
                }
                Ok(next)
            }
            TraceStep::InverseStarSubdivision { ray, result } => {
                let back = result.star_subdivision(ray).map_err(|e| e.to_string())?;
                if !fans_equal(&back, current) {
                    return Err(format!("{result} subdivided at {ray} is {back}, not the current fan {current}"));
                }
                Ok(result.clone())
            }
            TraceStep::TorificBlowup { chart, certified, .. } => {
                if !certified {
                    return Err(format!("toroidal certificate missing on chart {chart}"));
                }
                Ok(current.clone())
            }
            TraceStep::QuotientMap { lower, upper, common, .. } => {
                if !fans_equal(current, lower) {
                    return Err(format!("quotient map starts at {lower}, current fan is {current}"));
                }
                for end in [lower, upper] {
                    if let Err(e) = common.is_refinement(end) {
                        return Err(format!("common fan does not refine {end}: {e}"));
                    }
                }
                Ok(upper.clone())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            TraceStep::StarSubdivision { ray, result } | TraceStep::InverseStarSubdivision { ray, result } => {
                json!({ "kind": self.kind(), "ray": report::vector(ray), "result": report::fan(result) })
            }
            TraceStep::TorificBlowup { chart, removed_rays, certified, report: run } => json!({
                "kind": self.kind(),
                "chart": report::cone(chart),
                "removed_rays": report::vectors(removed_rays),
                "certified": certified,
                "run": run,
            }),
            TraceStep::QuotientMap { lower, upper, common, method } => json!({
                "kind": self.kind(),
                "method": method,
                "lower": report::fan(lower),
                "upper": report::fan(upper),
                "common": report::fan(common),
            }),
        }
    }
}

impl FactorizationTrace {
    /// Applies every step to `source` and compares the result with `target`.
    pub fn replay(&self) -> Result<Fan, ReplayError> {
        let mut current = self.source.clone();
        for (index, step) in self.steps.iter().enumerate() {
            current = step.apply(&current).map_err(|message| ReplayError::Step { index, message })?;
        }
        if !fans_equal(&current, &self.target) {
            return Err(ReplayError::WrongTarget { reached: current.to_string(), target: self.target.to_string() });
        }
        Ok(current)
    }

    /// Steps that change the fan.
    pub fn moves(&self) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(|s| !matches!(s, TraceStep::TorificBlowup { .. }))
    }

    pub fn to_json(&self) -> Value {
        let replay = match self.replay() {
            Ok(_) => json!({ "ok": true }),
            Err(e) => json!({ "ok": false, "error": e.to_string() }),
        };
        json!({
            "source": report::fan(&self.source),
            "target": report::fan(&self.target),
            "steps": self.steps.iter().map(TraceStep::to_json).collect::<Vec<_>>(),
            "replay": replay,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(x)
    }

    fn orthant() -> Fan {
        Fan::from_cone(Cone::new(2, [v(&[1, 0]), v(&[0, 1])]).unwrap()).unwrap()
    }

    #[test]
    fn inverse_steps_replay() {
        let fine = orthant().star_subdivision(&v(&[1, 1])).unwrap();
        let trace = FactorizationTrace {
            source: fine.clone(),
            target: orthant(),
            steps: vec![TraceStep::InverseStarSubdivision { ray: v(&[1, 1]), result: orthant() }],
        };
        assert!(trace.replay().is_ok());
        let forward = FactorizationTrace {
            source: orthant(),
            target: fine.clone(),
            steps: vec![TraceStep::StarSubdivision { ray: v(&[1, 1]), result: fine }],
        };
        assert!(forward.replay().is_ok());
    }

    #[test]
    fn wrong_records_are_caught() {
        let fine = orthant().star_subdivision(&v(&[1, 1])).unwrap();
        let bad = FactorizationTrace {
            source: orthant(),
            target: fine.clone(),
            steps: vec![TraceStep::StarSubdivision { ray: v(&[1, 2]), result: fine.clone() }],
        };
        assert!(matches!(bad.replay(), Err(ReplayError::Step { index: 0, .. })));
        let short = FactorizationTrace { source: orthant(), target: fine, steps: vec![] };
        assert!(matches!(short.replay(), Err(ReplayError::WrongTarget { .. })));
    }
}
