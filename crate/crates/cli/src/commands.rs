//! The subcommands as functions on parsed inputs.
//!
//! Each returns an [`Outcome`]: a structured report, the exit code it calls
//! for, and optionally a file artifact. Hard failures are [`CliError`]s.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use torific_core::cobordism::{build_cobordism, CobordismError, CobordismFan, CycleError, Piece};
use torific_core::fans::{fans_equal, Cone, Fan, FanError};
use torific_core::lattice::LatticeVector;
use torific_core::monomials::hilbert_basis;
use torific_core::torific::{elementary_factor, torify_chart, Obstruction, TorificRun};

use crate::format::{FanFile, IdealFile, ParseError};
use crate::paper;
use crate::report;
use crate::trace::{FactorizationTrace, TraceStep};

/// Stable exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const CYCLE: u8 = 3;
    pub const CERTIFICATE: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("invalid fixture: {0}")]
    Fixture(serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("the cobordism is not collapsible, the order on dependent cones has a cycle: {0}")]
    Cycle(CycleError<Cone>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Fixture(_) => exit::PARSE,
            CliError::Cycle(_) => exit::CYCLE,
            CliError::Io { .. } | CliError::Invalid(_) => exit::INVALID,
        }
    }
}

impl From<FanError> for CliError {
    fn from(e: FanError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CobordismError> for CliError {
    fn from(e: CobordismError) -> Self {
        match e {
            CobordismError::Cycle(c) => CliError::Cycle(c),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub code: u8,
    /// Text written by `--out` instead of the report, when present.
    pub artifact: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { report, code: exit::OK, artifact: None }
    }
}

/// Flags shared by `torify` and `factor`.
#[derive(Debug, Clone, Default)]
pub struct TorifyOptions {
    pub balanced: bool,
    pub characters: Vec<BigInt>,
}

pub fn load_fan(file: &FanFile) -> Result<Fan, CliError> {
    let fan = file.to_fan()?;
    fan.validate()?;
    Ok(fan)
}

/// A fan file with an `action` line, validated as a cobordism.
pub fn load_cobordism(file: &FanFile) -> Result<CobordismFan, CliError> {
    let action = file
        .action
        .clone()
        .ok_or_else(|| CliError::Invalid("the cobordism file has no `action` line".into()))?;
    if action.is_zero() || !action.is_primitive().unwrap_or(false) {
        return Err(CliError::Invalid(format!("action {action} is not primitive")));
    }
    Ok(CobordismFan::new(load_fan(file)?, action)?)
}

fn cone_summary(c: &Cone) -> Value {
    json!({
        "rays": report::vectors(c.rays()),
        "dim": c.dim(),
        "simplicial": c.is_simplicial(),
        "smooth": c.is_smooth(),
        "multiplicity": c.multiplicity().map(|m| report::int(&m)),
    })
}

/// Purity, dimension and completeness of the support.
fn support_summary(fan: &Fan) -> Value {
    let maximal: Vec<Cone> = fan.maximal_cones().into_iter().filter(|c| !c.is_zero()).collect();
    let dim = maximal.iter().map(Cone::dim).max().unwrap_or(0);
    let pure = maximal.iter().all(|c| c.dim() == dim);
    // A pure full-dimensional fan is complete iff every wall lies on two cones.
    let mut wall_count: BTreeMap<Cone, usize> = BTreeMap::new();
    for c in &maximal {
        for f in c.facets() {
            *wall_count.entry(f).or_default() += 1;
        }
    }
    let boundary_walls = wall_count.values().filter(|&&k| k == 1).count();
    let complete = pure && dim == fan.rank() && boundary_walls == 0 && !maximal.is_empty();
    json!({
        "dimension": dim,
        "pure": pure,
        "complete": complete,
        "boundary_walls": boundary_walls,
        "maximal_cones": maximal.len(),
        "rays": fan.rays().len(),
    })
}

pub fn check(file: &FanFile) -> Outcome {
    let mut cones = Vec::new();
    for idx in &file.cones {
        match Cone::new(file.rank, idx.iter().map(|&i| file.rays[i].clone())) {
            Ok(c) if c.is_strictly_convex() => cones.push(c),
            Ok(c) => {
                return Outcome {
                    report: json!({ "valid": false, "reason": "not strictly convex", "cone": report::cone(&c) }),
                    code: exit::INVALID,
                    artifact: None,
                }
            }
            Err(e) => {
                return Outcome {
                    report: json!({ "valid": false, "reason": e.to_string(), "ray_indices": idx }),
                    code: exit::INVALID,
                    artifact: None,
                }
            }
        }
    }
    let fan = match Fan::closure(file.rank, cones) {
        Ok(f) => f,
        Err(e) => {
            return Outcome {
                report: json!({ "valid": false, "reason": e.to_string() }),
                code: exit::INVALID,
                artifact: None,
            }
        }
    };
    if let Err(e) = fan.validate() {
        let mut out = json!({ "valid": false, "reason": e.to_string() });
        if let FanError::Incompatible(a, b) = &e {
            let meet = a.intersection(b);
            out["incompatible"] = json!([report::cone(a), report::cone(b)]);
            out["intersection"] = report::cone(&meet);
        }
        return Outcome { report: out, code: exit::INVALID, artifact: None };
    }
    let maximal: Vec<Value> =
        fan.maximal_cones().iter().filter(|c| !c.is_zero()).map(cone_summary).collect();
    Outcome::ok(json!({
        "valid": true,
        "rank": fan.rank(),
        "smooth": fan.is_smooth(),
        "simplicial": fan.is_simplicial(),
        "support": support_summary(&fan),
        "cones": maximal,
    }))
}

pub fn dual(file: &FanFile) -> Result<Outcome, CliError> {
    let fan = load_fan(file)?;
    let cones: Vec<Value> = fan
        .maximal_cones()
        .iter()
        .map(|c| {
            let d = c.dual();
            json!({
                "cone": report::cone(c),
                "dual": report::cone(&d),
                "dual_facet_normals": report::vectors(d.facet_normals()),
                "hilbert_basis": report::vectors(&hilbert_basis(&d)),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({ "rank": fan.rank(), "cones": cones })))
}

pub fn boundary(cob: &CobordismFan) -> Result<Outcome, CliError> {
    let b = cob.boundary()?;
    let q = cob.quotient();
    Ok(Outcome::ok(json!({
        "action": report::vector(cob.action()),
        "projection": report::vectors(&q.projection().rows()),
        "dependent_cones": cob.dependent_cones().iter().map(report::cone).collect::<Vec<_>>(),
        "lower": report::fan(&b.lower),
        "upper": report::fan(&b.upper),
        "lower_quotient": report::fan(&b.lower_quotient),
        "upper_quotient": report::fan(&b.upper_quotient),
        "lower_quotient_valid": b.lower_quotient.validate().is_ok(),
        "upper_quotient_valid": b.upper_quotient.validate().is_ok(),
        "quotients_equal": fans_equal(&b.lower_quotient, &b.upper_quotient),
    })))
}

/// Builds the cobordism of the blowup of `base` along the ideal and writes it
/// as the artifact. Optional expected fans are compared with the quotients.
pub fn cobordize(
    base: &FanFile,
    ideals: &IdealFile,
    expect_lower: Option<&Fan>,
    expect_upper: Option<&Fan>,
) -> Result<Outcome, CliError> {
    let base_fan = load_fan(base)?;
    if ideals.rank != base_fan.rank() {
        return Err(CliError::Invalid(format!(
            "ideal file has rank {}, the base fan has rank {}",
            ideals.rank,
            base_fan.rank()
        )));
    }
    let ideal_map = ideals.to_ideals().map_err(|e| CliError::Invalid(e.to_string()))?;
    let built = build_cobordism(&base_fan, &ideal_map)?;
    let b = &built.boundary;
    let mut checks = serde_json::Map::new();
    let mut code = exit::OK;
    for (name, expected, actual) in
        [("lower", expect_lower, &b.lower_quotient), ("upper", expect_upper, &b.upper_quotient)]
    {
        if let Some(e) = expected {
            let equal = fans_equal(e, actual);
            if !equal {
                code = exit::INVALID;
            }
            checks.insert(name.into(), json!(equal));
        }
    }
    let file = FanFile::from_fan(built.cobordism.fan(), Some(built.cobordism.action()));
    let report = json!({
        "cobordism": report::fan(built.cobordism.fan()),
        "action": report::vector(built.cobordism.action()),
        "blowup": report::fan(&built.blowup),
        "lower_quotient": report::fan(&b.lower_quotient),
        "upper_quotient": report::fan(&b.upper_quotient),
        "trivial": fans_equal(&b.lower_quotient, &b.upper_quotient),
        "resolution_centers": report::vectors(&built.resolution_centers),
        "expected_checks": Value::Object(checks),
        "cobordism_file": file.to_text(),
    });
    Ok(Outcome { report, code, artifact: Some(file.to_text()) })
}

fn chi_json(chi: &BTreeMap<Cone, i64>) -> Value {
    Value::Array(chi.iter().map(|(c, v)| json!({ "cone": report::cone(c), "chi": v })).collect())
}

pub fn chi(cob: &CobordismFan) -> Result<Outcome, CliError> {
    let chi = cob.chi().map_err(CliError::Cycle)?;
    let relation: Vec<Value> = cob
        .order_relation()
        .iter()
        .map(|(lo, hi)| json!({ "lower": report::cone(lo), "upper": report::cone(hi) }))
        .collect();
    let components: Vec<Value> = cob
        .fixed_components()
        .values()
        .map(|members| Value::Array(members.iter().map(report::cone).collect()))
        .collect();
    Ok(Outcome::ok(json!({
        "chi": chi_json(&chi),
        "order": relation,
        "fixed_components": components,
    })))
}

fn pieces_of(cob: &CobordismFan) -> Result<(BTreeMap<Cone, i64>, Vec<Piece>), CliError> {
    let chi = cob.chi().map_err(CliError::Cycle)?;
    let pieces = cob.quasi_elementary_pieces(&chi)?;
    Ok((chi, pieces))
}

pub fn pieces(cob: &CobordismFan) -> Result<Outcome, CliError> {
    let (chi, pieces) = pieces_of(cob)?;
    let mut rendered = Vec::new();
    let mut quotients = Vec::new();
    for p in &pieces {
        let b = cob.restrict(p.fan.clone())?.boundary()?;
        rendered.push(json!({
            "label": p.label,
            "dependent": p.dependent.iter().map(report::cone).collect::<Vec<_>>(),
            "fan": report::fan(&p.fan),
            "lower_quotient": report::fan(&b.lower_quotient),
            "upper_quotient": report::fan(&b.upper_quotient),
        }));
        quotients.push(b);
    }
    let consecutive = quotients.windows(2).all(|w| fans_equal(&w[0].upper_quotient, &w[1].lower_quotient));
    let code = if consecutive { exit::OK } else { exit::INVALID };
    Ok(Outcome {
        report: json!({ "chi": chi_json(&chi), "pieces": rendered, "consecutive_match": consecutive }),
        code,
        artifact: None,
    })
}

pub fn run_json(run: &TorificRun) -> Value {
    let certificates: Vec<Value> = run
        .certificates
        .iter()
        .map(|c| {
            let mut v = json!({ "cone": report::cone(&c.cone), "ray": report::vector(&c.ray), "ok": c.result.is_ok() });
            match &c.result {
                Ok(w) => v["witness"] = report::vector(w),
                Err(Obstruction::Inconsistent) => v["obstruction"] = json!("inconsistent"),
                Err(Obstruction::NotIntegral(x)) => {
                    v["obstruction"] = json!("not integral");
                    v["rational_solution"] = json!(x.iter().map(|q| q.to_string()).collect::<Vec<_>>());
                }
            }
            v
        })
        .collect();
    json!({
        "chart": report::cone(&run.chart),
        "action": report::vector(&run.action),
        "tangent_characters": run.tangent_characters.iter().map(report::int).collect::<Vec<_>>(),
        "characters": run.characters.iter().map(report::int).collect::<Vec<_>>(),
        "balanced": run.balanced,
        "character_sum": report::int(&run.character_sum()),
        "ideals": run.ideals.iter().map(|(c, i)| {
            let mut v = report::ideal(i);
            v["character"] = report::int(c);
            v
        }).collect::<Vec<_>>(),
        "product": report::ideal(&run.product),
        "subdivision": report::fan(&run.subdivision),
        "removed_rays": report::vectors(&run.removed_rays),
        "certificates": certificates,
        "all_certified": run.all_certified(),
        "coordinates": run.coordinates.iter().map(|c| json!({
            "cone": report::cone(&c.cone),
            "ray": report::vector(&c.ray),
            "witness": report::vector(&c.witness),
            "exponent": report::vector(&c.exponent),
            "in_chart_dual": c.in_chart_dual,
        })).collect::<Vec<_>>(),
    })
}

/// Torific runs on every smooth maximal cone; other cones are listed as
/// skipped with the reason.
fn torify_charts(fan: &Fan, action: &LatticeVector, opts: &TorifyOptions) -> (Vec<TorificRun>, Vec<Value>) {
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for sigma in fan.maximal_cones().into_iter().filter(|c| !c.is_zero()) {
        if !sigma.is_smooth() {
            skipped.push(json!({ "chart": report::cone(&sigma), "reason": "not smooth" }));
            continue;
        }
        match torify_chart(&sigma, action, &opts.characters, opts.balanced) {
            Ok(run) => runs.push(run),
            Err(e) => skipped.push(json!({ "chart": report::cone(&sigma), "reason": e.to_string() })),
        }
    }
    (runs, skipped)
}

fn first_failed_certificate(runs: &[TorificRun]) -> Option<Value> {
    runs.iter().flat_map(|r| &r.certificates).find(|c| c.result.is_err()).map(|c| {
        json!({ "cone": report::cone(&c.cone), "ray": report::vector(&c.ray) })
    })
}

pub fn torify(cob: &CobordismFan, opts: &TorifyOptions) -> Outcome {
    let (runs, skipped) = torify_charts(cob.fan(), cob.action(), opts);
    let failure = first_failed_certificate(&runs);
    let code = if failure.is_some() { exit::CERTIFICATE } else { exit::OK };
    Outcome {
        report: json!({
            "runs": runs.iter().map(run_json).collect::<Vec<_>>(),
            "skipped": skipped,
            "certificate_failure": failure,
        }),
        code,
        artifact: None,
    }
}

/// Result of [`factor_cobordism`].
#[derive(Debug, Clone)]
pub struct Factorization {
    pub chi: BTreeMap<Cone, i64>,
    pub trace: FactorizationTrace,
    pub pieces: Vec<Value>,
    pub runs: Vec<TorificRun>,
}

struct PieceSteps {
    steps: Vec<TraceStep>,
    method: &'static str,
    details: Value,
}

/// Star subdivision steps from `lower` and inverse steps into `upper`, one
/// pair per maximal dependent cone, when every such cone has an elementary
/// factor and the two sides meet.
fn elementary_steps(cob: &CobordismFan, piece: &Piece, lower: &Fan, upper: &Fan) -> Option<PieceSteps> {
    let q = cob.quotient();
    let maximal_dependent: Vec<&Cone> = piece
        .dependent
        .iter()
        .filter(|d| !piece.dependent.iter().any(|e| e != *d && e.has_face(d)))
        .collect();
    let mut factors = Vec::new();
    for d in &maximal_dependent {
        factors.push(elementary_factor(d, cob.action()).ok()?);
    }
    let project = |r: &Option<LatticeVector>| r.as_ref().and_then(|r| q.project(r).primitive().ok());
    let mut steps = Vec::new();
    let mut current = lower.clone();
    for f in &factors {
        if let Some(ray) = project(&f.lower_ray) {
            let next = current.star_subdivision(&ray).ok()?;
            if !fans_equal(&next, &current) {
                steps.push(TraceStep::StarSubdivision { ray, result: next.clone() });
                current = next;
            }
        }
    }
    let mut chain = vec![upper.clone()];
    let mut rays = Vec::new();
    for f in &factors {
        if let Some(ray) = project(&f.upper_ray) {
            let last = chain.last().expect("nonempty");
            let next = last.star_subdivision(&ray).ok()?;
            if !fans_equal(&next, last) {
                chain.push(next);
                rays.push(ray);
            }
        }
    }
    if !fans_equal(&current, chain.last().expect("nonempty")) {
        return None;
    }
    for k in (1..chain.len()).rev() {
        steps.push(TraceStep::InverseStarSubdivision { ray: rays[k - 1].clone(), result: chain[k - 1].clone() });
    }
    let details = Value::Array(
        factors
            .iter()
            .map(|f| {
                json!({
                    "cone": report::cone(&f.cone),
                    "lower_ray": f.lower_ray.as_ref().map(report::vector),
                    "upper_ray": f.upper_ray.as_ref().map(report::vector),
                })
            })
            .collect(),
    );
    Some(PieceSteps { steps, method: "elementary", details })
}

/// Largest `|α|` for which the torified triangle is attempted; torific ideals
/// of larger characters grow too quickly to be useful here.
pub const TORIFIC_ALPHA_LIMIT: u32 = 12;

/// `lcm` of the nonzero tangent characters over the given charts.
fn common_character(runs: &[TorificRun]) -> BigInt {
    runs.iter()
        .flat_map(|r| &r.tangent_characters)
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(c))
}

/// The triangle `lower → common ← upper`, preferring the quotient of the
/// glued torific subdivision for `I_α · I_{-α}` and falling back to the
/// coarsest common refinement.
fn triangle_steps(
    cob: &CobordismFan,
    piece: &Piece,
    lower: &Fan,
    upper: &Fan,
    opts: &TorifyOptions,
) -> Result<PieceSteps, CliError> {
    let action = cob.action();
    let (plain, _) = torify_charts(&piece.fan, action, &TorifyOptions::default());
    let alpha = common_character(&plain);
    let (runs, skipped) = if alpha <= BigInt::from(TORIFIC_ALPHA_LIMIT) {
        let mut characters = opts.characters.clone();
        characters.extend([alpha.clone(), -&alpha]);
        torify_charts(&piece.fan, action, &TorifyOptions { balanced: opts.balanced, characters })
    } else {
        (Vec::new(), Vec::new())
    };

    let torified = (skipped.is_empty() && !runs.is_empty())
        .then(|| {
            let cones: Vec<Cone> = runs.iter().flat_map(|r| r.subdivision.maximal_cones()).collect();
            let glued = Fan::new(cob.fan().rank(), cones).ok()?;
            let b = cob.restrict(glued).ok()?.boundary().ok()?;
            let fits = fans_equal(&b.lower_quotient, &b.upper_quotient)
                && b.lower_quotient.is_refinement(lower).is_ok()
                && b.lower_quotient.is_refinement(upper).is_ok();
            fits.then_some(b.lower_quotient)
        })
        .flatten();

    let mut steps = Vec::new();
    let (common, method) = match torified {
        Some(common) => {
            for r in &runs {
                steps.push(TraceStep::TorificBlowup {
                    chart: r.chart.clone(),
                    removed_rays: r.removed_rays.clone(),
                    certified: r.all_certified(),
                    report: run_json(r),
                });
            }
            (common, "torific")
        }
        None => (intersection_refinement(lower, upper)?, "intersection"),
    };
    steps.push(TraceStep::QuotientMap {
        lower: lower.clone(),
        upper: upper.clone(),
        common,
        method: method.to_string(),
    });
    Ok(PieceSteps { steps, method, details: json!({ "alpha": report::int(&alpha) }) })
}

/// Pairwise intersections of the maximal cones of two fans with one support.
pub fn intersection_refinement(a: &Fan, b: &Fan) -> Result<Fan, CliError> {
    let mut cones = BTreeSet::new();
    for s in a.maximal_cones() {
        for t in b.maximal_cones() {
            cones.insert(s.intersection(&t));
        }
    }
    let common = Fan::new(a.rank(), cones)?;
    for end in [a, b] {
        common
            .is_refinement(end)
            .map_err(|e| CliError::Invalid(format!("no common refinement of the quotients: {e}")))?;
    }
    Ok(common)
}

/// How each nontrivial piece is bridged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Elementary star subdivision pairs when available, else the triangle.
    Auto,
    /// Always the `lower → common ← upper` triangle.
    Triangle,
}

/// Computes χ, the pieces, the per-chart torific runs and a trace from the
/// lower quotient to the upper quotient.
pub fn factor_cobordism(cob: &CobordismFan, opts: &TorifyOptions) -> Result<Factorization, CliError> {
    factor_cobordism_with(cob, opts, Strategy::Auto)
}

pub fn factor_cobordism_with(
    cob: &CobordismFan,
    opts: &TorifyOptions,
    strategy: Strategy,
) -> Result<Factorization, CliError> {
    let (chi, pieces) = pieces_of(cob)?;
    let whole = cob.boundary()?;
    let mut steps = Vec::new();
    let mut rendered = Vec::new();
    let mut all_runs = Vec::new();
    for piece in &pieces {
        let b = cob.restrict(piece.fan.clone())?.boundary()?;
        let (runs, skipped) = torify_charts(&piece.fan, cob.action(), opts);
        let piece_steps = if fans_equal(&b.lower_quotient, &b.upper_quotient) {
            PieceSteps { steps: Vec::new(), method: "trivial", details: Value::Null }
        } else {
            let elementary = match strategy {
                Strategy::Auto => elementary_steps(cob, piece, &b.lower_quotient, &b.upper_quotient),
                Strategy::Triangle => None,
            };
            match elementary {
                Some(s) => s,
                None => triangle_steps(cob, piece, &b.lower_quotient, &b.upper_quotient, opts)?,
            }
        };
        rendered.push(json!({
            "label": piece.label,
            "dependent": piece.dependent.iter().map(report::cone).collect::<Vec<_>>(),
            "lower_quotient": report::fan(&b.lower_quotient),
            "upper_quotient": report::fan(&b.upper_quotient),
            "method": piece_steps.method,
            "details": piece_steps.details,
            "torific_runs": runs.iter().map(run_json).collect::<Vec<_>>(),
            "skipped_charts": skipped,
        }));
        steps.extend(piece_steps.steps);
        all_runs.extend(runs);
    }
    let trace = FactorizationTrace { source: whole.lower_quotient, target: whole.upper_quotient, steps };
    Ok(Factorization { chi, trace, pieces: rendered, runs: all_runs })
}

pub fn factor(cob: &CobordismFan, opts: &TorifyOptions) -> Result<Outcome, CliError> {
    let f = factor_cobordism(cob, opts)?;
    let replay_ok = f.trace.replay().is_ok();
    let failure = first_failed_certificate(&f.runs).or_else(|| {
        f.trace.steps.iter().find_map(|s| match s {
            TraceStep::TorificBlowup { chart, certified: false, .. } => Some(json!({ "cone": report::cone(chart) })),
            _ => None,
        })
    });
    let code = if failure.is_some() {
        exit::CERTIFICATE
    } else if !replay_ok {
        exit::INVALID
    } else {
        exit::OK
    };
    Ok(Outcome {
        report: json!({
            "chi": chi_json(&f.chi),
            "pieces": f.pieces,
            "trace": f.trace.to_json(),
            "replay_ok": replay_ok,
            "certificates_ok": failure.is_none(),
            "certificate_failure": failure,
        }),
        code,
        artifact: None,
    })
}

pub fn paper_example(balanced: bool, fixture_text: &str) -> Result<Outcome, CliError> {
    let fixture = paper::parse_fixture(fixture_text).map_err(CliError::Fixture)?;
    let (actual, mismatches) =
        paper::check(balanced, &fixture).map_err(|e| CliError::Invalid(e.to_string()))?;
    let code = if mismatches.is_empty() { exit::OK } else { exit::INVALID };
    Ok(Outcome {
        report: json!({
            "balanced": balanced,
            "matches": mismatches.is_empty(),
            "diff": mismatches,
            "computed": actual,
        }),
        code,
        artifact: None,
    })
}
