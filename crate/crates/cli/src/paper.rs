//! The built-in A³ example with weights (2, 3, -1) and its pinned values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use torific_core::fans::Cone;
use torific_core::lattice::LatticeVector;
use torific_core::torific::{torify_chart, TorificError, TorificRun};

/// The fixture shipped with the binary.
pub const PINNED_FIXTURE: &str = include_str!("../fixtures/paper_example.json");

type Vector = Vec<i64>;
/// A cone as its sorted list of rays.
type RayList = Vec<Vector>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cone: RayList,
    pub ray: Vector,
    pub witness: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedFacts {
    pub character: i64,
    pub character_sum: i64,
    pub ideal: Vec<Vector>,
    pub certificates_pass: bool,
}

/// Every intermediate object compared by `paper-example`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperFacts {
    pub action: Vector,
    pub characters: Vec<i64>,
    /// Sorted exponent vectors keyed by character.
    pub ideals: BTreeMap<String, Vec<Vector>>,
    pub maximal_cones: Vec<RayList>,
    pub non_simplicial: Vec<RayList>,
    pub removed_rays: Vec<Vector>,
    pub sigma1_witness: Option<Witness>,
    pub certificates_pass: bool,
    pub balanced: Option<BalancedFacts>,
}

/// One differing leaf of the two JSON trees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub path: String,
    pub expected: Value,
    pub actual: Value,
}

pub fn action() -> LatticeVector {
    LatticeVector::from_i64s(&[2, 3, -1])
}

pub fn chart() -> Cone {
    Cone::new(3, (0..3).map(|i| LatticeVector::unit(3, i))).expect("the orthant")
}

/// The character 6 is added to the tangent characters -1, 2, 3.
pub fn extra_characters() -> Vec<BigInt> {
    vec![BigInt::from(6)]
}

pub fn run(balanced: bool) -> Result<TorificRun, TorificError> {
    torify_chart(&chart(), &action(), &extra_characters(), balanced)
}

pub fn parse_fixture(text: &str) -> Result<PaperFacts, serde_json::Error> {
    serde_json::from_str(text)
}

fn small(x: &BigInt) -> i64 {
    x.to_i64().expect("example values are small")
}

fn vector(v: &LatticeVector) -> Vector {
    v.entries().iter().map(small).collect()
}

fn rays(c: &Cone) -> RayList {
    let mut out: RayList = c.rays().iter().map(vector).collect();
    out.sort();
    out
}

/// Extracts the compared facts from a run.
pub fn facts(run: &TorificRun) -> PaperFacts {
    let base: Vec<BigInt> = run.characters.iter().take(4).cloned().collect();
    let mut ideals = BTreeMap::new();
    for c in &base {
        if let Some(ideal) = run.ideal(c) {
            let mut gens: Vec<Vector> = ideal.generators().iter().map(vector).collect();
            gens.sort();
            ideals.insert(c.to_string(), gens);
        }
    }
    let maximal = run.subdivision.maximal_cones();
    let mut maximal_cones: Vec<RayList> = maximal.iter().map(rays).collect();
    maximal_cones.sort();
    let mut non_simplicial: Vec<RayList> = maximal.iter().filter(|c| !c.is_simplicial()).map(rays).collect();
    non_simplicial.sort();
    let mut removed_rays: Vec<Vector> = run.removed_rays.iter().map(vector).collect();
    removed_rays.sort();

    let sigma1 = Cone::new(3, [[1, 0, 0], [1, 0, 1], [1, 1, 0]].map(|r| LatticeVector::from_i64s(&r))).unwrap();
    let v1 = LatticeVector::unit(3, 0);
    let sigma1_witness = run
        .certificates
        .iter()
        .find(|c| c.cone == sigma1 && c.ray == v1)
        .and_then(|c| c.result.as_ref().ok())
        .map(|w| Witness { cone: rays(&sigma1), ray: vector(&v1), witness: vector(w) });

    let balanced = run.balanced.then(|| {
        let character = run.characters.last().expect("nonempty").clone();
        let ideal = run.ideal(&character).map(|i| {
            let mut gens: Vec<Vector> = i.generators().iter().map(vector).collect();
            gens.sort();
            gens
        });
        BalancedFacts {
            character: small(&character),
            character_sum: small(&run.character_sum()),
            ideal: ideal.unwrap_or_default(),
            certificates_pass: run.all_certified(),
        }
    });

    PaperFacts {
        action: vector(&run.action),
        characters: base.iter().map(small).collect(),
        ideals,
        maximal_cones,
        non_simplicial,
        removed_rays,
        sigma1_witness,
        certificates_pass: run.all_certified(),
        balanced,
    }
}

/// Leaves where `actual` differs from `expected`, with JSON-pointer-like paths.
pub fn diff(expected: &Value, actual: &Value) -> Vec<Mismatch> {
    let mut out = Vec::new();
    diff_into("", expected, actual, &mut out);
    out
}

fn diff_into(path: &str, expected: &Value, actual: &Value, out: &mut Vec<Mismatch>) {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            let keys: std::collections::BTreeSet<&String> = e.keys().chain(a.keys()).collect();
            for k in keys {
                let sub = format!("{path}/{k}");
                diff_into(&sub, e.get(k).unwrap_or(&Value::Null), a.get(k).unwrap_or(&Value::Null), out);
            }
        }
        (Value::Array(e), Value::Array(a)) if e.len() == a.len() => {
            for (i, (x, y)) in e.iter().zip(a).enumerate() {
                diff_into(&format!("{path}/{i}"), x, y, out);
            }
        }
        _ if expected == actual => {}
        _ => out.push(Mismatch {
            path: if path.is_empty() { "/".into() } else { path.into() },
            expected: expected.clone(),
            actual: actual.clone(),
        }),
    }
}

/// Runs the example and compares it with `fixture`. The balanced section of
/// the fixture is only compared when `balanced` is set.
pub fn check(balanced: bool, fixture: &PaperFacts) -> Result<(PaperFacts, Vec<Mismatch>), TorificError> {
    let actual = facts(&run(balanced)?);
    let mut expected = fixture.clone();
    if !balanced {
        expected.balanced = None;
    }
    let mismatches = diff(&json!(expected), &json!(actual));
    Ok((actual, mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_fixture_matches() {
        let fixture = parse_fixture(PINNED_FIXTURE).unwrap();
        for balanced in [false, true] {
            let (_, mismatches) = check(balanced, &fixture).unwrap();
            assert!(mismatches.is_empty(), "{mismatches:?}");
        }
    }

    #[test]
    fn diff_reports_paths() {
        let d = diff(&json!({"a": [1, 2], "b": 3}), &json!({"a": [1, 5], "c": 3}));
        let paths: Vec<&str> = d.iter().map(|m| m.path.as_str()).collect();
        assert_eq!(paths, ["/a/1", "/b", "/c"]);
    }
}
