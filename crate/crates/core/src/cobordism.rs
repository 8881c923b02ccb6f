//! Fans carrying a one-parameter subgroup action: boundaries, quotients, the
//! order on fixed components, quasi-elementary pieces and the construction of
//! a cobordism from a blowup.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fans::{fans_equal, Cone, Fan, FanError};
use crate::lattice::{
    quotient_by, solve_integer, LatticeError, LatticeMatrix, LatticeVector, QuotientLattice,
};
use crate::monomials::{hilbert_basis, newton_subdivision, MonomialError, MonomialIdeal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error("the action vector {0} or its negative lies in the support of the fan")]
    ActionInSupport(LatticeVector),
    #[error("the order on dependent cones has a cycle: {0}")]
    Cycle(CycleError<Cone>),
    #[error("no χ value for dependent cone {0}")]
    MissingChi(Cone),
    #[error("χ is not strictly increasing on {0} ≺ {1}")]
    NotIncreasing(Cone, Cone),
    #[error("χ differs on {0} and {1}, which lie in one fixed component")]
    SplitComponent(Cone, Cone),
    #[error("cone {0} is not smooth")]
    NotSmooth(Cone),
    #[error("ideals on {0} and {1} disagree on their common face")]
    InconsistentIdeals(Cone, Cone),
    #[error("ideal supplied for {0}, which is not a maximal cone of the fan")]
    UnknownChart(Cone),
    #[error("construction produced an inconsistent result: {0}")]
    Postcondition(String),
}

/// Which end of the orbit `t ↦ t·x` is followed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `t → 0`, moving along `+a`.
    Zero,
    /// `t → ∞`, moving along `-a`.
    Infinity,
}

/// A directed cycle found by [`topological_labels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleError<T> {
    /// `cycle[i] → cycle[i+1]`, closing back to `cycle[0]`.
    pub cycle: Vec<T>,
}

impl<T: fmt::Display> fmt::Display for CycleError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{x}")?;
        }
        if let Some(first) = self.cycle.first() {
            write!(f, " -> {first}")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug + fmt::Display> std::error::Error for CycleError<T> {}

/// Strictly increasing integer labels for a finite relation.
///
/// Nodes are layered by the length of the longest chain ending at them and
/// numbered consecutively, layer by layer, in `Ord` order within a layer.
/// Edges mentioning unknown nodes add those nodes.
pub fn topological_labels<T>(
    nodes: &BTreeSet<T>,
    edges: &BTreeSet<(T, T)>,
) -> Result<BTreeMap<T, i64>, CycleError<T>>
where
    T: Ord + Clone,
{
    let mut all: BTreeSet<T> = nodes.clone();
    let mut succ: BTreeMap<T, Vec<T>> = BTreeMap::new();
    for (a, b) in edges {
        all.insert(a.clone());
        all.insert(b.clone());
        succ.entry(a.clone()).or_default().push(b.clone());
    }
    if let Some(cycle) = find_cycle(&all, &succ) {
        return Err(CycleError { cycle });
    }
    let mut level: BTreeMap<T, usize> = all.iter().map(|n| (n.clone(), 0)).collect();
    // relax edges |V| times; the graph is acyclic so this converges
    for _ in 0..all.len() {
        let mut changed = false;
        for (a, b) in edges {
            let want = level[a] + 1;
            if level[b] < want {
                level.insert(b.clone(), want);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut order: Vec<(usize, T)> = level.into_iter().map(|(n, l)| (l, n)).collect();
    order.sort();
    Ok(order.into_iter().enumerate().map(|(i, (_, n))| (n, i as i64)).collect())
}

fn find_cycle<T: Ord + Clone>(all: &BTreeSet<T>, succ: &BTreeMap<T, Vec<T>>) -> Option<Vec<T>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut mark: BTreeMap<&T, Mark> = all.iter().map(|n| (n, Mark::Fresh)).collect();
    for root in all {
        if mark[root] != Mark::Fresh {
            continue;
        }
        // iterative DFS keeping the active path
        let mut path: Vec<(&T, usize)> = vec![(root, 0)];
        mark.insert(root, Mark::Active);
        while let Some((node, idx)) = path.last_mut() {
            let next = succ.get(*node).and_then(|s| s.get(*idx));
            *idx += 1;
            match next {
                None => {
                    mark.insert(*node, Mark::Done);
                    path.pop();
                }
                Some(n) => match mark[n] {
                    Mark::Fresh => {
                        mark.insert(n, Mark::Active);
                        path.push((n, 0));
                    }
                    Mark::Active => {
                        let start = path.iter().position(|(p, _)| *p == n).expect("active");
                        return Some(path[start..].iter().map(|(p, _)| (*p).clone()).collect());
                    }
                    Mark::Done => {}
                },
            }
        }
    }
    None
}

/// Lower and upper boundary subfans together with their images in `N / Z·a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPair {
    pub lower: Fan,
    pub upper: Fan,
    pub lower_quotient: Fan,
    pub upper_quotient: Fan,
}

/// A fan `Σ` in `N` with a primitive `a ∈ N` such that `±a ∉ |Σ|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismFan {
    fan: Fan,
    action: LatticeVector,
    quotient: QuotientLattice,
}

/// A quasi-elementary piece `Σ_{a_i}` with its χ value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub label: i64,
    pub fan: Fan,
    /// Dependent cones with `χ = label`.
    pub dependent: Vec<Cone>,
}

impl CobordismFan {
    pub fn new(fan: Fan, action: LatticeVector) -> Result<CobordismFan, CobordismError> {
        if action.rank() != fan.rank() {
            return Err(FanError::DimensionMismatch { expected: fan.rank(), found: action.rank() }.into());
        }
        let quotient = quotient_by(&action)?;
        if fan.support_contains_point(&action) || fan.support_contains_point(&-&action) {
            return Err(CobordismError::ActionInSupport(action));
        }
        Ok(CobordismFan { fan, action, quotient })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn action(&self) -> &LatticeVector {
        &self.action
    }

    pub fn quotient(&self) -> &QuotientLattice {
        &self.quotient
    }

    /// `a ∈ span(σ)`.
    pub fn is_dependent(&self, cone: &Cone) -> bool {
        cone.equations().iter().all(|e| e.dot(&self.action).is_zero())
    }

    pub fn dependent_cones(&self) -> Vec<Cone> {
        self.fan.cones().iter().filter(|c| self.is_dependent(c)).cloned().collect()
    }

    pub fn free_cones(&self) -> Vec<Cone> {
        self.fan.cones().iter().filter(|c| !self.is_dependent(c)).cloned().collect()
    }

    fn direction_vector(&self, direction: Direction) -> LatticeVector {
        match direction {
            Direction::Zero => self.action.clone(),
            Direction::Infinity => -&self.action,
        }
    }

    /// The cone of the orbit that generic points of `O(γ)` flow into.
    ///
    /// For a free cone this is the `δ ⊇ γ` of the fan whose image in
    /// `N / span(γ)` contains the image of `±a` in its relative interior, if
    /// any; a dependent cone is fixed and is its own limit.
    pub fn limit_cone(&self, gamma: &Cone, direction: Direction) -> Option<Cone> {
        if self.is_dependent(gamma) {
            return Some(gamma.clone());
        }
        let b = self.direction_vector(direction);
        self.fan.star_of(gamma).find(|delta| in_join_with_span(delta, gamma, &b, true)).cloned()
    }

    /// Limit cones of every cone of the fan in one direction.
    fn limit_map(&self, direction: Direction) -> BTreeMap<Cone, Option<Cone>> {
        self.fan.cones().iter().map(|g| (g.clone(), self.limit_cone(g, direction))).collect()
    }

    /// Whether `±a ∈ γ + span(τ)` for some cone `γ ⊇ τ`.
    fn flows_inside(&self, tau: &Cone, b: &LatticeVector) -> bool {
        self.fan.star_of(tau).any(|g| in_join_with_span(g, tau, b, false))
    }

    pub fn boundary(&self) -> Result<BoundaryPair, CobordismError> {
        let a = self.action.clone();
        let minus_a = -&a;
        let lower = self.fan.filtered(|t| !self.flows_inside(t, &a));
        let upper = self.fan.filtered(|t| !self.flows_inside(t, &minus_a));
        for (name, f) in [("lower", &lower), ("upper", &upper)] {
            if !f.is_face_closed() {
                return Err(CobordismError::Postcondition(format!("{name} boundary is not face closed")));
            }
        }
        let lower_quotient = self.project(&lower)?;
        let upper_quotient = self.project(&upper)?;
        Ok(BoundaryPair { lower, upper, lower_quotient, upper_quotient })
    }

    /// Image of a subfan of free cones under `π`.
    pub fn project(&self, fan: &Fan) -> Result<Fan, CobordismError> {
        if let Some(bad) = fan.cones().iter().find(|c| self.is_dependent(c) && !c.is_zero()) {
            return Err(CobordismError::Postcondition(format!("cannot project dependent cone {bad}")));
        }
        Ok(fan.map_rays(self.quotient.target_rank(), |r| self.quotient.project(r))?)
    }

    /// Pairs `(σ₁, σ₂)` of dependent cones such that some free cone flows to
    /// `σ₁` as `t → 0` and to `σ₂` as `t → ∞`.
    pub fn order_relation(&self) -> BTreeSet<(Cone, Cone)> {
        let zero = self.limit_map(Direction::Zero);
        let infinity = self.limit_map(Direction::Infinity);
        relation_from_limits(&self.free_cones(), &zero, &infinity)
    }

    /// Transitive closure of [`Self::order_relation`].
    pub fn order_closure(&self) -> BTreeSet<(Cone, Cone)> {
        transitive_closure(&self.order_relation())
    }

    /// Dependent cones grouped into fixed components: two dependent cones
    /// share a component iff a chain of face inclusions among dependent cones
    /// joins them. Each component is keyed by its least cone.
    pub fn fixed_components(&self) -> BTreeMap<Cone, BTreeSet<Cone>> {
        let dependent = self.dependent_cones();
        let mut parent: Vec<usize> = (0..dependent.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..dependent.len() {
            for j in i + 1..dependent.len() {
                if dependent[j].has_face(&dependent[i]) || dependent[i].has_face(&dependent[j]) {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Cone>> = BTreeMap::new();
        for (i, d) in dependent.iter().enumerate() {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().insert(d.clone());
        }
        groups
            .into_values()
            .map(|g| (g.iter().next().expect("nonempty").clone(), g))
            .collect()
    }

    /// Strictly increasing labels on dependent cones, constant on each fixed
    /// component, or the cycle of component representatives witnessing that
    /// the cobordism is not collapsible.
    pub fn chi(&self) -> Result<BTreeMap<Cone, i64>, CycleError<Cone>> {
        let components = self.fixed_components();
        let mut representative = BTreeMap::new();
        for (rep, members) in &components {
            for m in members {
                representative.insert(m.clone(), rep.clone());
            }
        }
        let mut edges = BTreeSet::new();
        for (lo, hi) in self.order_relation() {
            let (lo, hi) = (representative[&lo].clone(), representative[&hi].clone());
            if lo == hi {
                return Err(CycleError { cycle: vec![lo] });
            }
            edges.insert((lo, hi));
        }
        let nodes: BTreeSet<Cone> = components.keys().cloned().collect();
        let labels = topological_labels(&nodes, &edges)?;
        Ok(representative.into_iter().map(|(d, rep)| (d, labels[&rep])).collect())
    }

    /// Free cones flowing into `sigma` in the given direction, and `sigma`.
    pub fn flow_set(&self, sigma: &Cone, direction: Direction) -> BTreeSet<Cone> {
        self.fan
            .cones()
            .iter()
            .filter(|g| self.limit_cone(g, direction).as_ref() == Some(sigma))
            .cloned()
            .collect()
    }

    /// Splits the cobordism along the values of `chi`.
    ///
    /// The piece at value `c` drops the cones flowing to a fixed cone of
    /// lower value as `t → ∞` and those flowing to a fixed cone of higher
    /// value as `t → 0`.
    pub fn quasi_elementary_pieces(
        &self,
        chi: &BTreeMap<Cone, i64>,
    ) -> Result<Vec<Piece>, CobordismError> {
        let dependent = self.dependent_cones();
        for d in &dependent {
            if !chi.contains_key(d) {
                return Err(CobordismError::MissingChi(d.clone()));
            }
        }
        let zero = self.limit_map(Direction::Zero);
        let infinity = self.limit_map(Direction::Infinity);
        for (lo, hi) in relation_from_limits(&self.free_cones(), &zero, &infinity) {
            if chi[&lo] >= chi[&hi] {
                return Err(CobordismError::NotIncreasing(lo, hi));
            }
        }
        for members in self.fixed_components().values() {
            let first = members.iter().next().expect("nonempty");
            if let Some(other) = members.iter().find(|m| chi[*m] != chi[first]) {
                return Err(CobordismError::SplitComponent(first.clone(), other.clone()));
            }
        }
        let values: BTreeSet<i64> = dependent.iter().map(|d| chi[d]).collect();
        let mut towards_infinity: BTreeMap<Cone, BTreeSet<Cone>> = BTreeMap::new();
        let mut towards_zero: BTreeMap<Cone, BTreeSet<Cone>> = BTreeMap::new();
        for (map, limits) in [(&mut towards_zero, &zero), (&mut towards_infinity, &infinity)] {
            for d in &dependent {
                map.insert(d.clone(), BTreeSet::new());
            }
            for (g, limit) in limits {
                if let Some(l) = limit {
                    map.get_mut(l).expect("limits are dependent").insert(g.clone());
                }
            }
        }
        let mut pieces = Vec::new();
        for &value in &values {
            let mut removed: BTreeSet<Cone> = BTreeSet::new();
            for d in &dependent {
                if chi[d] < value {
                    removed.extend(towards_infinity[d].iter().cloned());
                }
                if chi[d] > value {
                    removed.extend(towards_zero[d].iter().cloned());
                }
            }
            let fan = self.fan.filtered(|c| !removed.contains(c));
            if !fan.is_face_closed() {
                return Err(CobordismError::Postcondition(format!(
                    "piece at χ = {value} is not face closed"
                )));
            }
            let members = dependent.iter().filter(|d| chi[*d] == value).cloned().collect();
            pieces.push(Piece { label: value, fan, dependent: members });
        }
        Ok(pieces)
    }

    /// The same action restricted to a subfan.
    pub fn restrict(&self, fan: Fan) -> Result<CobordismFan, CobordismError> {
        CobordismFan::new(fan, self.action.clone())
    }

    /// Independent limit computation through the semigroup of each chart.
    ///
    /// The orbit of `γ` has a limit in the chart `δ ⊇ γ` iff every Hilbert
    /// basis element of `δ∨` vanishing on `γ` pairs nonnegatively with the
    /// flow direction; the limit orbit is cut out by the elements pairing to
    /// zero.
    pub fn orbit_limit_oracle(&self, gamma: &Cone, direction: Direction) -> Option<Cone> {
        let b = self.direction_vector(direction);
        for delta in self.fan.star_of(gamma) {
            let units: Vec<LatticeVector> = hilbert_basis(&delta.dual())
                .into_iter()
                .filter(|m| gamma.generators().iter().all(|g| m.dot(g).is_zero()))
                .collect();
            if units.iter().any(|m| m.dot(&b) < BigInt::zero()) {
                continue;
            }
            let vanishing: Vec<LatticeVector> =
                units.into_iter().filter(|m| m.dot(&b).is_zero()).collect();
            let mut eqs = delta.equations().to_vec();
            eqs.extend(vanishing);
            let limit = Cone::from_inequalities(delta.rank(), delta.facet_normals(), &eqs)
                .expect("ranks agree");
            return Some(limit);
        }
        None
    }
}

fn relation_from_limits(
    free: &[Cone],
    zero: &BTreeMap<Cone, Option<Cone>>,
    infinity: &BTreeMap<Cone, Option<Cone>>,
) -> BTreeSet<(Cone, Cone)> {
    free.iter()
        .filter_map(|g| match (&zero[g], &infinity[g]) {
            (Some(lo), Some(hi)) => Some((lo.clone(), hi.clone())),
            _ => None,
        })
        .collect()
}

/// Whether `b` lies in `δ + span(γ)` (in its relative interior if `strict`),
/// for a face `γ` of `δ`.
fn in_join_with_span(delta: &Cone, gamma: &Cone, b: &LatticeVector, strict: bool) -> bool {
    if delta.is_simplicial() {
        // δ + span(γ) = {Σ λ_i v_i : λ_i >= 0 for the rays v_i not in γ}, and
        // the sign of λ_i is the sign of the facet normal opposite v_i on b
        if delta.equations().iter().any(|e| !e.dot(b).is_zero()) {
            return false;
        }
        let mut signs = Vec::new();
        for r in delta.rays().iter().filter(|r| !gamma.has_ray(r)) {
            match delta.facet_normals().iter().find(|f| !f.dot(r).is_zero()) {
                Some(f) => signs.push(f.dot(b)),
                None => return in_join_generic(delta, gamma, b, strict),
            }
        }
        return signs.iter().all(|s| if strict { s.is_positive() } else { !s.is_negative() });
    }
    in_join_generic(delta, gamma, b, strict)
}

fn in_join_generic(delta: &Cone, gamma: &Cone, b: &LatticeVector, strict: bool) -> bool {
    let span: Vec<LatticeVector> = gamma.generators().iter().map(|r| -r).collect();
    let joined = delta.join(&span);
    if strict {
        joined.relint_contains_point(b)
    } else {
        joined.contains_point(b)
    }
}

pub fn transitive_closure<T: Ord + Clone>(edges: &BTreeSet<(T, T)>) -> BTreeSet<(T, T)> {
    let mut closure = edges.clone();
    loop {
        let mut added = Vec::new();
        for (a, b) in &closure {
            for (c, d) in closure.range((b.clone(), a.clone())..) {
                if c != b {
                    break;
                }
                if !closure.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return closure;
        }
        closure.extend(added);
    }
}

/// Result of [`build_cobordism`].
#[derive(Debug, Clone)]
pub struct BuiltCobordism {
    pub cobordism: CobordismFan,
    /// Fan of the normalized blowup of the base along the ideal.
    pub blowup: Fan,
    pub base: Fan,
    pub boundary: BoundaryPair,
    /// Centers of the star subdivisions used to resolve the blown-up product.
    pub resolution_centers: Vec<LatticeVector>,
}

/// Blowup ideals for the star subdivision of a smooth fan at the sum of
/// `center` (rays of the fan spanning one of its cones).
///
/// On a maximal cone containing all of `center` the ideal is generated by
/// the dual coordinates of those rays; elsewhere it is the unit ideal.
pub fn star_center_ideals(
    base: &Fan,
    center: &[LatticeVector],
) -> Result<BTreeMap<Cone, MonomialIdeal>, CobordismError> {
    let mut out = BTreeMap::new();
    for sigma in base.maximal_cones() {
        if !sigma.is_smooth() {
            return Err(CobordismError::NotSmooth(sigma));
        }
        let ideal = if center.iter().all(|r| sigma.has_ray(r)) {
            let rays = LatticeMatrix::from_rows(sigma.rays(), base.rank());
            let mut gens = Vec::new();
            for r in center {
                let idx = sigma.rays().iter().position(|s| s == r).expect("ray present");
                let target = LatticeVector::unit(sigma.rays().len(), idx);
                gens.push(solve_integer(&rays, &target).expect("smooth cones have dual bases"));
            }
            MonomialIdeal::new(&sigma, gens)?
        } else {
            MonomialIdeal::unit(&sigma)
        };
        out.insert(sigma, ideal);
    }
    Ok(out)
}

/// The cobordism obtained by blowing up `base × P¹` along `J + (w)`, where
/// `w` vanishes on `base × {0}`, resolving, and removing the strict
/// transforms of the two ends.
///
/// The action is `e_{n+1}`; its lower boundary projects to the blowup of
/// `base` along `J` and its upper boundary to `base`. Maximal cones missing
/// from `ideals` carry the unit ideal.
pub fn build_cobordism(
    base: &Fan,
    ideals: &BTreeMap<Cone, MonomialIdeal>,
) -> Result<BuiltCobordism, CobordismError> {
    let n = base.rank();
    let maximal = base.maximal_cones();
    if let Some(bad) = maximal.iter().find(|c| !c.is_smooth()) {
        return Err(CobordismError::NotSmooth(bad.clone()));
    }
    for chart in ideals.keys() {
        if !maximal.contains(chart) {
            return Err(CobordismError::UnknownChart(chart.clone()));
        }
    }
    let ideal_on = |sigma: &Cone| -> MonomialIdeal {
        ideals.get(sigma).cloned().unwrap_or_else(|| MonomialIdeal::unit(sigma))
    };
    for (i, s) in maximal.iter().enumerate() {
        for t in &maximal[i + 1..] {
            let meet = s.intersection(t);
            let left = ideal_on(s).pullback(&meet)?;
            let right = ideal_on(t).pullback(&meet)?;
            if !left.same_ideal(&right) {
                return Err(CobordismError::InconsistentIdeals(s.clone(), t.clone()));
            }
        }
    }

    let up = LatticeVector::unit(n + 1, n);
    let down = -&up;
    let lift = |r: &LatticeVector| r.extended(BigInt::zero());
    let w = LatticeVector::unit(n + 1, n);
    let mut cones: Vec<Cone> = Vec::new();
    let mut blowup_cones: Vec<Cone> = Vec::new();
    for sigma in &maximal {
        let j = ideal_on(sigma);
        if j.is_zero() {
            return Err(MonomialError::ZeroIdeal.into());
        }
        blowup_cones.extend(newton_subdivision(&j)?.source().maximal_cones());

        let mut rays: Vec<LatticeVector> = sigma.rays().iter().map(lift).collect();
        rays.push(up.clone());
        let chart = Cone::new(n + 1, rays)?;
        let mut gens: Vec<LatticeVector> = j.generators().iter().map(lift).collect();
        gens.push(w.clone());
        let ideal = MonomialIdeal::new(&chart, gens)?;
        cones.extend(newton_subdivision(&ideal)?.source().maximal_cones());

        let mut rays: Vec<LatticeVector> = sigma.rays().iter().map(lift).collect();
        rays.push(down.clone());
        cones.push(Cone::new(n + 1, rays)?);
    }
    let blown_up = Fan::new(n + 1, cones)?;
    let resolution = blown_up.desingularize()?;
    let resolved = resolution.fan();
    let total = resolved.filtered(|c| !c.has_ray(&up) && !c.has_ray(&down));
    let cobordism = CobordismFan::new(total, up)?;
    let boundary = cobordism.boundary()?;
    let blowup = Fan::new(n, blowup_cones)?;
    if !fans_equal(&boundary.lower_quotient, &blowup) {
        return Err(CobordismError::Postcondition(format!(
            "lower quotient {} differs from the blowup {}",
            boundary.lower_quotient, blowup
        )));
    }
    if !fans_equal(&boundary.upper_quotient, base) {
        return Err(CobordismError::Postcondition(format!(
            "upper quotient {} differs from the base {}",
            boundary.upper_quotient, base
        )));
    }
    Ok(BuiltCobordism {
        cobordism,
        blowup,
        base: base.clone(),
        boundary,
        resolution_centers: resolution.centers.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(x)
    }

    fn cone(rank: usize, gens: &[&[i64]]) -> Cone {
        Cone::new(rank, gens.iter().map(|g| v(g))).unwrap()
    }

    fn fan(rank: usize, cones: &[&[&[i64]]]) -> Fan {
        Fan::new(rank, cones.iter().map(|c| cone(rank, c))).unwrap()
    }

    fn blowup_cobordism() -> CobordismFan {
        CobordismFan::new(fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]]), v(&[0, 0, 1])).unwrap()
    }

    #[test]
    fn boundaries_of_the_plane_orthant() {
        let c = CobordismFan::new(fan(2, &[&[&[1, 0], &[0, 1]]]), v(&[1, -1])).unwrap();
        let b = c.boundary().unwrap();
        assert_eq!(b.lower, fan(2, &[&[&[1, 0]]]));
        assert_eq!(b.upper, fan(2, &[&[&[0, 1]]]));
        assert_eq!(b.lower_quotient, b.upper_quotient);
        assert_eq!(b.lower_quotient.maximal_cones().len(), 1);
    }

    #[test]
    fn boundaries_of_the_point_blowup() {
        let c = CobordismFan::new(
            fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]),
            v(&[1, 1, -1]),
        )
        .unwrap();
        let b = c.boundary().unwrap();
        assert_eq!(b.lower, fan(3, &[&[&[1, 0, 0], &[0, 1, 0]]]));
        assert_eq!(b.upper, fan(3, &[&[&[1, 0, 0], &[0, 0, 1]], &[&[0, 1, 0], &[0, 0, 1]]]));
        let q = c.quotient();
        let corner = Cone::new(2, [q.project(&v(&[1, 0, 0])), q.project(&v(&[0, 1, 0]))]).unwrap();
        let lower_expected = Fan::from_cone(corner).unwrap();
        assert_eq!(b.lower_quotient, lower_expected);
        let star = lower_expected.star_subdivision(&q.project(&v(&[0, 0, 1]))).unwrap();
        assert_eq!(b.upper_quotient, star);
        assert_eq!(b.upper_quotient.maximal_cones().len(), 2);
    }

    #[test]
    fn action_in_support_is_rejected() {
        let f = fan(2, &[&[&[1, 0], &[0, 1]]]);
        assert!(matches!(CobordismFan::new(f.clone(), v(&[1, 1])), Err(CobordismError::ActionInSupport(_))));
        assert!(matches!(CobordismFan::new(f, v(&[-1, 0])), Err(CobordismError::ActionInSupport(_))));
    }

    #[test]
    fn single_free_cone_has_no_dependent_cones() {
        let c = CobordismFan::new(fan(3, &[&[&[1, 0, 0], &[0, 1, 0]]]), v(&[0, 0, 1])).unwrap();
        assert!(c.dependent_cones().is_empty());
        assert!(c.order_relation().is_empty());
        assert!(c.chi().unwrap().is_empty());
    }

    #[test]
    fn single_dependent_cone() {
        let c = blowup_cobordism();
        let deps = c.dependent_cones();
        assert_eq!(deps, vec![cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]])]);
        assert!(c.order_relation().is_empty());
        let chi = c.chi().unwrap();
        assert_eq!(chi.values().copied().collect::<Vec<_>>(), vec![0]);
        let pieces = c.quasi_elementary_pieces(&chi).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(&pieces[0].fan, c.fan());
    }

    #[test]
    fn limits_agree_with_the_oracle_on_the_blowup() {
        let c = blowup_cobordism();
        for g in c.fan().cones() {
            for d in [Direction::Zero, Direction::Infinity] {
                assert_eq!(c.limit_cone(g, d), c.orbit_limit_oracle(g, d), "{g} {d:?}");
            }
        }
        // the open torus has no limit in either direction
        let zero = Cone::zero(3);
        assert_eq!(c.limit_cone(&zero, Direction::Zero), None);
        assert_eq!(c.limit_cone(&zero, Direction::Infinity), None);
    }

    /// Two dependent cones glued along the free cone `⟨e2, e1+e2+e3⟩`.
    fn two_step_chain() -> CobordismFan {
        let f = fan(
            3,
            &[
                &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]],
                &[&[0, 1, 0], &[1, 1, 1], &[1, 2, 2]],
            ],
        );
        CobordismFan::new(f, v(&[0, 0, 1])).unwrap()
    }

    #[test]
    fn chain_of_two_dependent_cones() {
        let c = two_step_chain();
        let deps = c.dependent_cones();
        assert_eq!(deps.len(), 2);
        let rel = c.order_relation();
        assert_eq!(rel.len(), 1);
        for g in c.fan().cones() {
            for d in [Direction::Zero, Direction::Infinity] {
                assert_eq!(c.limit_cone(g, d), c.orbit_limit_oracle(g, d), "{g} {d:?}");
            }
        }
        let chi = c.chi().unwrap();
        let (lo, hi) = rel.iter().next().unwrap();
        assert!(chi[lo] < chi[hi]);
        let pieces = c.quasi_elementary_pieces(&chi).unwrap();
        assert_eq!(pieces.len(), 2);
        let b0 = c.restrict(pieces[0].fan.clone()).unwrap().boundary().unwrap();
        let b1 = c.restrict(pieces[1].fan.clone()).unwrap().boundary().unwrap();
        assert!(fans_equal(&b0.upper, &b1.lower));
        let whole = c.boundary().unwrap();
        assert!(fans_equal(&whole.lower, &b0.lower));
        assert!(fans_equal(&whole.upper, &b1.upper));
    }

    #[test]
    fn incomparable_components_share_a_piece() {
        // two copies of the blowup cobordism in opposite x1 half-spaces
        let f = fan(
            3,
            &[
                &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]],
                &[&[-1, 0, 0], &[0, -1, 0], &[-1, -1, 1]],
            ],
        );
        let c = CobordismFan::new(f, v(&[0, 0, 1])).unwrap();
        assert!(c.order_relation().is_empty());
        let chi: BTreeMap<Cone, i64> = c.dependent_cones().into_iter().map(|d| (d, 5)).collect();
        let pieces = c.quasi_elementary_pieces(&chi).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].dependent.len(), 2);
        assert_eq!(&pieces[0].fan, c.fan());
    }

    #[test]
    fn nested_dependent_cones_form_one_component() {
        let f = fan(
            3,
            &[
                &[&[-1, -1, 0], &[-1, 0, 0], &[1, 1, -1]],
                &[&[-1, -1, 0], &[1, 0, -1], &[1, 1, -1]],
            ],
        );
        let c = CobordismFan::new(f, v(&[-1, 3, 1])).unwrap();
        let edge = cone(3, &[&[1, 0, -1], &[1, 1, -1]]);
        let top = cone(3, &[&[-1, -1, 0], &[1, 0, -1], &[1, 1, -1]]);
        assert!(c.is_dependent(&edge) && c.is_dependent(&top));
        assert_eq!(c.fixed_components().len(), 2);
        let chi = c.chi().unwrap();
        assert_eq!(chi[&edge], chi[&top]);
        let pieces = c.quasi_elementary_pieces(&chi).unwrap();
        assert_eq!(pieces.len(), 2);
        let b0 = c.restrict(pieces[0].fan.clone()).unwrap().boundary().unwrap();
        let b1 = c.restrict(pieces[1].fan.clone()).unwrap().boundary().unwrap();
        assert!(fans_equal(&b0.upper, &b1.lower));
        let mut split = chi.clone();
        split.insert(edge, chi[&top] + 1);
        assert!(matches!(
            c.quasi_elementary_pieces(&split),
            Err(CobordismError::SplitComponent(..) | CobordismError::NotIncreasing(..))
        ));
    }

    #[test]
    fn sorter_reports_cycles() {
        let nodes: BTreeSet<u32> = [1, 2, 3].into_iter().collect();
        let edges: BTreeSet<(u32, u32)> = [(1, 2), (2, 1)].into_iter().collect();
        let err = topological_labels(&nodes, &edges).unwrap_err();
        let mut cyc = err.cycle.clone();
        cyc.sort();
        assert_eq!(cyc, vec![1, 2]);
        let edges: BTreeSet<(u32, u32)> = [(3, 1), (1, 2)].into_iter().collect();
        let labels = topological_labels(&nodes, &edges).unwrap();
        assert_eq!(labels[&3], 0);
        assert_eq!(labels[&1], 1);
        assert_eq!(labels[&2], 2);
        let labels = topological_labels(&nodes, &BTreeSet::new()).unwrap();
        assert_eq!(labels.values().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn closure_of_a_chain() {
        let edges: BTreeSet<(u32, u32)> = [(1, 2), (2, 3)].into_iter().collect();
        let c = transitive_closure(&edges);
        assert!(c.contains(&(1, 3)));
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn cobordism_of_the_point_blowup() {
        let base = fan(2, &[&[&[1, 0], &[0, 1]]]);
        let ideals = star_center_ideals(&base, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let built = build_cobordism(&base, &ideals).unwrap();
        assert_eq!(built.cobordism.fan(), &fan(3, &[&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]]));
        assert_eq!(built.blowup, fan(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]));
        assert!(built.resolution_centers.is_empty());
    }

    #[test]
    fn principal_ideal_gives_a_trivial_cobordism() {
        let base = fan(2, &[&[&[1, 0], &[0, 1]]]);
        let sigma = base.maximal_cones()[0].clone();
        let mut ideals = BTreeMap::new();
        ideals.insert(sigma.clone(), MonomialIdeal::new(&sigma, [v(&[1, 2])]).unwrap());
        let built = build_cobordism(&base, &ideals).unwrap();
        assert!(fans_equal(&built.boundary.lower_quotient, &base));
        assert!(fans_equal(&built.boundary.upper_quotient, &base));
    }

    #[test]
    fn projective_line_with_a_point_blown_up() {
        let base = fan(1, &[&[&[1]], &[&[-1]]]);
        let ideals = star_center_ideals(&base, &[v(&[1])]).unwrap();
        let built = build_cobordism(&base, &ideals).unwrap();
        // blowing up a smooth point of a curve changes nothing
        assert!(fans_equal(&built.blowup, &base));
        assert!(fans_equal(&built.boundary.lower_quotient, &base));
    }

    #[test]
    fn non_smooth_base_is_rejected() {
        let base = fan(2, &[&[&[0, 1], &[2, -1]]]);
        assert!(matches!(build_cobordism(&base, &BTreeMap::new()), Err(CobordismError::NotSmooth(_))));
    }

    #[test]
    fn inconsistent_ideals_are_rejected() {
        let base = fan(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]]]);
        let maximal = base.maximal_cones();
        let mut ideals = BTreeMap::new();
        // (y) on one chart, unit on the other: they disagree along the ray e2
        let s = maximal.iter().find(|c| c.has_ray(&v(&[1, 0]))).unwrap().clone();
        ideals.insert(s.clone(), MonomialIdeal::new(&s, [v(&[1, 0])]).unwrap());
        assert!(build_cobordism(&base, &ideals).is_ok());
        ideals.insert(s.clone(), MonomialIdeal::new(&s, [v(&[0, 1])]).unwrap());
        assert!(matches!(
            build_cobordism(&base, &ideals),
            Err(CobordismError::InconsistentIdeals(..))
        ));
    }
}
