//! Suite-level property checks shared by the property tests (small counts)
//! and the acceptance target (full counts). Each returns a one-line summary
//! on success and a description of the first counterexample on failure.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use torific_core::cobordism::{CobordismFan, Direction};
use torific_core::fans::{fans_equal, Cone, Fan};
use torific_core::lattice::LatticeVector;
use torific_core::monomials::torific_generators;
use torific_core::torific::{tangent_characters, tor_isom_check, torify_chart};

use crate::{chart_suite, cobordism_suite, dot, dual_points_in_box, lcm, lv, minimal_elements, rng, to_i64};

pub type CheckResult = Result<String, String>;

fn positive_combination(rng: &mut crate::Rng64, rays: &[LatticeVector], rank: usize) -> LatticeVector {
    let mut x = LatticeVector::zero(rank);
    for r in rays {
        x = &x + &r.scale(&BigInt::from(rng.gen_range(1..=3)));
    }
    x
}

/// Quotient boundaries are fans covering `π(|Σ|)` and consecutive pieces of
/// the χ decomposition glue along equal boundaries.
pub fn boundaries_and_pieces(seed: u64, count: usize) -> CheckResult {
    let mut r = rng(seed ^ 0x5eed);
    let mut pieces_total = 0;
    for case in cobordism_suite(seed, count) {
        let tag = format!("case {} (a = {})", case.seed, case.action);
        let c = CobordismFan::new(case.fan.clone(), case.action.clone()).map_err(|e| format!("{tag}: {e}"))?;
        let b = c.boundary().map_err(|e| format!("{tag}: {e}"))?;
        let q = c.quotient();
        for (name, side, image) in [("lower", &b.lower, &b.lower_quotient), ("upper", &b.upper, &b.upper_quotient)] {
            image.validate().map_err(|e| format!("{tag}: {name} quotient invalid: {e}"))?;
            for tau in side.cones() {
                let projected = Cone::new(q.target_rank(), tau.rays().iter().map(|v| q.project(v)))
                    .map_err(|e| format!("{tag}: {e}"))?;
                if projected.dim() != tau.dim() || !image.contains_cone(&projected) {
                    return Err(format!("{tag}: {name} cone {tau} does not map onto a cone of the quotient"));
                }
            }
        }
        // every point of |Σ| projects into both quotient supports
        for gamma in c.fan().cones() {
            for _ in 0..3 {
                let x = q.project(&positive_combination(&mut r, gamma.rays(), c.fan().rank()));
                if !b.lower_quotient.support_contains_point(&x) || !b.upper_quotient.support_contains_point(&x) {
                    return Err(format!("{tag}: image {x} of a point of {gamma} is not covered by both quotients"));
                }
            }
        }
        let chi = c.chi().map_err(|e| format!("{tag}: not collapsible: {e}"))?;
        let pieces = c.quasi_elementary_pieces(&chi).map_err(|e| format!("{tag}: {e}"))?;
        pieces_total += pieces.len();
        let closure = c.order_closure();
        let mut bounds = Vec::new();
        for p in &pieces {
            p.fan.validate().map_err(|e| format!("{tag}: piece {} invalid: {e}", p.label))?;
            for x in &p.dependent {
                for y in &p.dependent {
                    if closure.contains(&(x.clone(), y.clone())) {
                        return Err(format!("{tag}: {x} and {y} are comparable inside piece {}", p.label));
                    }
                }
            }
            let sub = c.restrict(p.fan.clone()).map_err(|e| format!("{tag}: {e}"))?;
            bounds.push(sub.boundary().map_err(|e| format!("{tag}: {e}"))?);
        }
        for (i, w) in bounds.windows(2).enumerate() {
            if !fans_equal(&w[0].upper, &w[1].lower) {
                return Err(format!("{tag}: upper boundary of piece {i} differs from lower boundary of piece {}", i + 1));
            }
        }
        if let (Some(first), Some(last)) = (bounds.first(), bounds.last()) {
            if !fans_equal(&first.lower, &b.lower) || !fans_equal(&last.upper, &b.upper) {
                return Err(format!("{tag}: outer boundaries of the pieces differ from those of Σ"));
            }
        }
    }
    Ok(format!("{count} cobordisms, {pieces_total} pieces"))
}

/// Limit cones and the order agree with the semigroup oracle.
pub fn oracle_agreement(seed: u64, count: usize) -> CheckResult {
    let mut free_total = 0;
    for case in cobordism_suite(seed, count) {
        let tag = format!("case {} (a = {})", case.seed, case.action);
        let c = CobordismFan::new(case.fan.clone(), case.action.clone()).map_err(|e| format!("{tag}: {e}"))?;
        let mut relation = BTreeSet::new();
        for g in c.free_cones() {
            free_total += 1;
            let mut ends = Vec::new();
            for d in [Direction::Zero, Direction::Infinity] {
                let fast = c.limit_cone(&g, d);
                let slow = c.orbit_limit_oracle(&g, d);
                if fast != slow {
                    return Err(format!("{tag}: limit of {g} towards {d:?} is {fast:?}, oracle says {slow:?}"));
                }
                ends.push(slow);
            }
            if let (Some(lo), Some(hi)) = (ends[0].clone(), ends[1].clone()) {
                relation.insert((lo, hi));
            }
        }
        if relation != c.order_relation() {
            return Err(format!("{tag}: order relation differs from the oracle"));
        }
    }
    Ok(format!("{count} cobordisms, {free_total} free cones"))
}

/// Torific ideals are nonzero for every character in `[-10, 10]` and, where
/// the generators are small enough, agree with brute-force enumeration.
pub fn torific_ideals(seed: u64, count: usize) -> CheckResult {
    let mut brute = 0;
    for (sigma, a) in chart_suite(seed, count) {
        let tag = format!("chart {sigma} (a = {a})");
        let n = sigma.rank();
        let gens: Vec<Vec<i64>> = sigma.rays().iter().map(to_i64).collect();
        let av = to_i64(&a);
        let mut ideals = Vec::new();
        let mut radius = 4;
        for alpha in -10i64..=10 {
            let ideal = torific_generators(&sigma, &a, &BigInt::from(alpha)).map_err(|e| format!("{tag}: {e}"))?;
            if ideal.is_zero() {
                return Err(format!("{tag}: I_{alpha} is zero"));
            }
            for g in ideal.generators() {
                let g = to_i64(g);
                if dot(&g, &av) != alpha || gens.iter().any(|v| dot(&g, v) < 0) {
                    return Err(format!("{tag}: generator {g:?} of I_{alpha} has the wrong character or leaves the dual cone"));
                }
                radius = radius.max(g.iter().map(|x| x.abs()).max().unwrap_or(0));
            }
            ideals.push((alpha, ideal));
        }
        if radius <= 9 {
            brute += 1;
            let pts = dual_points_in_box(&gens, n, radius);
            for (alpha, ideal) in &ideals {
                let slice: Vec<Vec<i64>> = pts.iter().filter(|p| dot(p, &av) == *alpha).cloned().collect();
                let expected = minimal_elements(&slice, &gens);
                let got: Vec<Vec<i64>> = ideal.generators().iter().map(to_i64).collect();
                if got != expected {
                    return Err(format!("{tag}: I_{alpha} = {got:?}, enumeration gives {expected:?}"));
                }
            }
        }
    }
    Ok(format!("{count} charts, {brute} enumerated by brute force"))
}

/// On every maximal cone of the torific blowup of every chart whose rank
/// lies in `ranks`, the torific ideal of each character equals the pullback
/// of the chart's ideal. Charts of other ranks are skipped.
pub fn pullback_coherence(seed: u64, count: usize, ranks: RangeInclusive<usize>) -> CheckResult {
    let mut charts = 0;
    let mut cells = 0;
    let mut failures = Vec::new();
    for (sigma, a) in chart_suite(seed, count) {
        if !ranks.contains(&sigma.rank()) {
            continue;
        }
        charts += 1;
        let tag = format!("chart {sigma} (a = {a})");
        let run = torify_chart(&sigma, &a, &[], false).map_err(|e| format!("{tag}: {e}"))?;
        for tau in run.subdivision.maximal_cones() {
            cells += 1;
            for (c, ideal) in &run.ideals {
                let local = torific_generators(&tau, &a, c).map_err(|e| format!("{tag}: {e}"))?;
                let pulled = ideal.pullback(&tau).map_err(|e| format!("{tag}: {e}"))?;
                if !local.same_ideal(&pulled) {
                    failures.push(format!("{tag}: I_{c} pulled back to {tau} is {pulled}, expected {local}"));
                    break;
                }
            }
        }
    }
    match failures.first() {
        None => Ok(format!("{charts} charts, {cells} cells")),
        Some(first) => Err(format!("{} of {cells} cells in {charts} charts disagree; first: {first}", failures.len())),
    }
}

/// `tor_isom_check` holds for `±α` with `α` the least common multiple of the
/// nonzero tangent characters. Charts with `α > max_alpha` are counted as
/// skipped: their torific ideals are too large to enumerate.
pub fn tor_isom(seed: u64, count: usize, max_alpha: i64) -> CheckResult {
    let mut checked = 0;
    let mut skipped = 0;
    for (sigma, a) in chart_suite(seed, count) {
        let tag = format!("chart {sigma} (a = {a})");
        let tangent = tangent_characters(&sigma, &a).map_err(|e| format!("{tag}: {e}"))?;
        let l = tangent
            .iter()
            .map(|c| i64::try_from(c).expect("small characters"))
            .fold(0, lcm);
        if l == 0 {
            continue;
        }
        if l > max_alpha {
            skipped += 1;
            continue;
        }
        for alpha in [l, -l] {
            checked += 1;
            match tor_isom_check(&sigma, &a, &BigInt::from(alpha)) {
                Ok(true) => {}
                Ok(false) => return Err(format!("{tag}: quotients differ after blowing up I_{alpha}·I_{}", -alpha)),
                Err(e) => return Err(format!("{tag}: {e}")),
            }
        }
    }
    Ok(format!("{checked} instances, {skipped} charts above the α cap {max_alpha}"))
}

/// For the barycentric subdivision of the orthant fan of the given rank, a
/// coordinate permutation mapping a ray of a cone into the same cone fixes it.
pub fn barycentric_stability(rank: usize) -> CheckResult {
    let orthant = Cone::new(rank, (0..rank).map(|i| LatticeVector::unit(rank, i))).map_err(|e| e.to_string())?;
    let fan = Fan::from_cone(orthant).map_err(|e| e.to_string())?;
    let bs = fan.barycentric_subdivision().map_err(|e| e.to_string())?;
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..rank {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..rank).filter(|i| !p.contains(i)).map(|i| [p.clone(), vec![i]].concat()).collect::<Vec<_>>()
            })
            .collect();
    }
    let mut triples = 0;
    for sigma in bs.cones() {
        for p in &perms {
            for tau in sigma.rays() {
                let image = LatticeVector::new((0..rank).map(|i| tau[p[i]].clone()).collect());
                if sigma.has_ray(&image) {
                    triples += 1;
                    if &image != tau {
                        return Err(format!("permutation {p:?} moves ray {tau} of {sigma} to {image}"));
                    }
                }
            }
        }
    }
    Ok(format!("{} cones, {} permutations, {triples} triples", bs.len(), perms.len()))
}

fn random_rational(r: &mut crate::Rng64, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| BigRational::new(BigInt::from(r.gen_range(-6..=6)), BigInt::from(r.gen_range(1..=4))))
        .collect()
}

fn dot_q(g: &LatticeVector, x: &[BigRational]) -> BigRational {
    g.dot_rational(x)
}

/// `σ∨∨ = σ`, and membership in `σ∨` and `σ∨∨` agrees with the defining
/// inequalities on `samples` rational points per cone.
pub fn dual_involution(seed: u64, cases: usize, samples: usize) -> CheckResult {
    let mut r = rng(seed);
    let mut hits = 0usize;
    for _ in 0..cases {
        let n_gens = r.gen_range(1..=6);
        let n = r.gen_range(2..=4);
        let gens: Vec<LatticeVector> =
            (0..n_gens).map(|_| LatticeVector::from_i64s(&(0..n).map(|_| r.gen_range(-3..=3)).collect::<Vec<_>>())).collect();
        let sigma = Cone::new(n, gens.clone()).map_err(|e| e.to_string())?;
        let dual = sigma.dual();
        let double = dual.dual();
        if double != sigma {
            return Err(format!("dual of the dual of {sigma} is {double}"));
        }
        let dual_gens = dual.generators();
        for i in 0..samples {
            // a third of the samples lie on faces of σ∨ by construction
            let x = if i % 3 == 0 && !dual_gens.is_empty() {
                let mut acc = vec![BigRational::zero(); n];
                for g in &dual_gens {
                    let w = BigRational::new(BigInt::from(r.gen_range(0..=2)), BigInt::from(r.gen_range(1..=3)));
                    for (a, e) in acc.iter_mut().zip(g.entries()) {
                        *a += &w * BigRational::from_integer(e.clone());
                    }
                }
                acc
            } else {
                random_rational(&mut r, n)
            };
            let by_definition = gens.iter().all(|g| !dot_q(g, &x).is_negative());
            let computed = dual.contains(&x).map_err(|e| e.to_string())?;
            if by_definition != computed {
                return Err(format!("membership of {x:?} in the dual of {sigma}: {computed}, expected {by_definition}"));
            }
            hits += usize::from(computed);
            let in_double = dual_gens.iter().all(|m| !dot_q(m, &x).is_negative());
            if in_double != double.contains(&x).map_err(|e| e.to_string())? || in_double != sigma.contains(&x).map_err(|e| e.to_string())? {
                return Err(format!("membership of {x:?} in {sigma} disagrees with its double dual"));
            }
        }
    }
    Ok(format!("{cases} cones, {} samples, {hits} in the dual", cases * samples))
}

/// Resolutions of random fans are smooth refinements that replay exactly.
pub fn desingularization(seed: u64, count: usize) -> CheckResult {
    let mut r = rng(seed);
    let mut centers = 0;
    let mut done = 0;
    while done < count {
        let n = r.gen_range(2..=3);
        let gens: Vec<LatticeVector> = (0..n + r.gen_range(0..=1))
            .map(|_| lv(&(0..n).map(|_| r.gen_range(-3..=3)).collect::<Vec<_>>()))
            .collect();
        let Ok(cone) = Cone::new(n, gens) else { continue };
        if !cone.is_strictly_convex() || cone.is_zero() {
            continue;
        }
        let fan = Fan::from_cone(cone.clone()).map_err(|e| e.to_string())?;
        done += 1;
        let res = fan.desingularize().map_err(|e| format!("{cone}: {e}"))?;
        if !res.fan().is_smooth() {
            return Err(format!("resolution of {cone} is not smooth"));
        }
        res.fan().validate().map_err(|e| format!("{cone}: {e}"))?;
        let replayed = res.replay().map_err(|e| format!("{cone}: {e}"))?;
        if !fans_equal(&replayed, res.fan()) {
            return Err(format!("replaying the centers of {cone} gives a different fan"));
        }
        if res.fan().is_refinement(&fan).is_err() {
            return Err(format!("resolution of {cone} is not a refinement"));
        }
        centers += res.centers.len();
    }
    Ok(format!("{count} fans, {centers} star subdivisions"))
}
