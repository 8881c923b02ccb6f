//! Monoids of lattice points, monomial ideals on affine charts and their
//! normalized blowups.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fans::{Cone, Fan, FanError, Subdivision};
use crate::lattice::{smith_normal_form, LatticeMatrix, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("exponent {0} does not lie in the dual of the chart")]
    NotInDual(LatticeVector),
    #[error("ideals live on different charts")]
    ChartMismatch,
    #[error("the action vector {0} lies in plus or minus the chart cone")]
    ActionInCone(LatticeVector),
    #[error("the zero ideal has no blowup")]
    ZeroIdeal,
    #[error("cone {0} is not contained in the chart {1}")]
    NotContained(Cone, Cone),
    #[error("chart cone {0} is not strictly convex")]
    NotStrictlyConvex(Cone),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// The weight of a monomial `z^m` under the one-parameter subgroup `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterGrading {
    action: LatticeVector,
}

impl CharacterGrading {
    pub fn new(action: LatticeVector) -> Self {
        CharacterGrading { action }
    }

    pub fn action(&self) -> &LatticeVector {
        &self.action
    }

    pub fn character(&self, m: &LatticeVector) -> BigInt {
        m.dot(&self.action)
    }
}

/// Coordinates adapted to the lineality space of a cone: the lineality is a
/// saturated sublattice `L`, and `M = L ⊕ C` for the complement `C` fixed by
/// the Smith form of a basis of `L`.
struct LinealitySplit {
    /// `(n-k) × n`: coordinates in `M / L`.
    to_quotient: LatticeMatrix,
    /// `n × (n-k)`: the section landing in `C`.
    lift: LatticeMatrix,
}

impl LinealitySplit {
    fn new(lineality: &[LatticeVector], rank: usize) -> Self {
        let k = lineality.len();
        if k == 0 {
            return LinealitySplit {
                to_quotient: LatticeMatrix::identity(rank),
                lift: LatticeMatrix::identity(rank),
            };
        }
        // U·B·V = [I 0], so x ↦ x·V sends L onto the first k coordinates.
        let snf = smith_normal_form(&LatticeMatrix::from_rows(lineality, rank));
        let vt = snf.v.transpose();
        let to_quotient = LatticeMatrix::from_rows(&vt.rows()[k..], rank);
        let lift = LatticeMatrix::from_rows(&snf.v_inv.rows()[k..], rank).transpose();
        LinealitySplit { to_quotient, lift }
    }

    fn project(&self, x: &LatticeVector) -> LatticeVector {
        self.to_quotient.mul_vec(x)
    }

    fn lift(&self, y: &LatticeVector) -> LatticeVector {
        self.lift.mul_vec(y)
    }

    /// The representative of `x + L` lying in the complement.
    fn normalize(&self, x: &LatticeVector) -> LatticeVector {
        self.lift(&self.project(x))
    }
}

/// Minimal generators of the monoid of lattice points of `cone`.
///
/// For a cone with lineality the pointed part is handled in `M / L` and
/// lifted to a fixed complement; the lineality contributes `±` its Hermite
/// basis. The result is sorted.
pub fn hilbert_basis(cone: &Cone) -> Vec<LatticeVector> {
    let rank = cone.rank();
    let split = LinealitySplit::new(cone.lineality(), rank);
    let qrank = rank - cone.lineality().len();
    let pointed = Cone::new(qrank, cone.rays().iter().map(|r| split.project(r)))
        .expect("projected rays have the quotient rank");
    let mut out: Vec<LatticeVector> =
        pointed_hilbert_basis(&pointed).iter().map(|y| split.lift(y)).collect();
    for l in cone.lineality() {
        out.push(l.clone());
        out.push(-l);
    }
    out.sort();
    out.dedup();
    out
}

fn pointed_hilbert_basis(cone: &Cone) -> Vec<LatticeVector> {
    debug_assert!(cone.is_strictly_convex());
    if cone.is_zero() {
        return Vec::new();
    }
    let mut candidates: BTreeSet<LatticeVector> = cone.rays().iter().cloned().collect();
    for simplex in cone.triangulate() {
        candidates.extend(simplex.fundamental_points().into_iter().map(|(p, _)| p));
    }
    let grading = cone.grading();
    let mut graded: Vec<(BigInt, LatticeVector)> =
        candidates.into_iter().map(|c| (grading.dot(&c), c)).collect();
    graded.sort();
    let mut irreducible: Vec<(BigInt, LatticeVector)> = Vec::new();
    for (deg, x) in graded {
        let reducible = irreducible
            .iter()
            .any(|(d, h)| d < &deg && cone.contains_point(&(&x - h)));
        if !reducible {
            irreducible.push((deg, x));
        }
    }
    let mut out: Vec<LatticeVector> = irreducible.into_iter().map(|(_, x)| x).collect();
    out.sort();
    out
}

/// A monomial ideal of `K[M ∩ σ∨]`, stored by a minimal set of exponents.
///
/// Exponents differing by a unit of the chart (an element of the lineality
/// of `σ∨`) are identified and normalized to a fixed complement, so equal
/// ideals on the same chart have equal generator lists. The empty list is
/// the zero ideal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    chart: Cone,
    dual: Cone,
    generators: Vec<LatticeVector>,
}

impl MonomialIdeal {
    /// The ideal generated by `z^m` for `m` in `exponents`.
    pub fn new<I>(chart: &Cone, exponents: I) -> Result<MonomialIdeal, MonomialError>
    where
        I: IntoIterator<Item = LatticeVector>,
    {
        let dual = chart.dual();
        let mut gens = Vec::new();
        for m in exponents {
            chart.check_rank(m.rank())?;
            if !dual.contains_point(&m) {
                return Err(MonomialError::NotInDual(m));
            }
            gens.push(m);
        }
        Ok(Self::from_parts(chart.clone(), dual, gens))
    }

    fn from_parts(chart: Cone, dual: Cone, gens: Vec<LatticeVector>) -> MonomialIdeal {
        let generators = minimalize(&dual, gens);
        MonomialIdeal { chart, dual, generators }
    }

    pub fn unit(chart: &Cone) -> MonomialIdeal {
        Self::new(chart, [LatticeVector::zero(chart.rank())]).expect("0 lies in every dual cone")
    }

    pub fn zero(chart: &Cone) -> MonomialIdeal {
        Self::new(chart, []).expect("no generators to check")
    }

    pub fn chart(&self) -> &Cone {
        &self.chart
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|m| self.dual.contains_point(&-m))
    }

    pub fn is_principal(&self) -> bool {
        self.generators.len() == 1
    }

    /// Whether `z^m` belongs to the ideal.
    pub fn contains(&self, m: &LatticeVector) -> bool {
        self.generators.iter().any(|g| self.dual.contains_point(&(m - g)))
    }

    /// Ideal equality by mutual containment of generators.
    pub fn same_ideal(&self, other: &MonomialIdeal) -> bool {
        self.chart == other.chart
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
        if self.chart != other.chart {
            return Err(MonomialError::ChartMismatch);
        }
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for g in &self.generators {
            for h in &other.generators {
                gens.push(g + h);
            }
        }
        // A translate of a minimal normalized generating set stays minimal
        // and normalized.
        if self.is_principal() || other.is_principal() {
            gens.sort();
            return Ok(MonomialIdeal { chart: self.chart.clone(), dual: self.dual.clone(), generators: gens });
        }
        Ok(Self::from_parts(self.chart.clone(), self.dual.clone(), gens))
    }

    /// The sum of two ideals on the same chart.
    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
        if self.chart != other.chart {
            return Err(MonomialError::ChartMismatch);
        }
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Ok(Self::from_parts(self.chart.clone(), self.dual.clone(), gens))
    }

    /// `v ↦ min_m <m, v>`, the support function of the ideal (`None` for the
    /// zero ideal).
    pub fn order_along(&self, v: &LatticeVector) -> Option<BigInt> {
        self.generators.iter().map(|m| m.dot(v)).min()
    }

    /// The same exponents read on a subcone `τ ⊆ σ`, minimalized there.
    pub fn pullback(&self, tau: &Cone) -> Result<MonomialIdeal, MonomialError> {
        pullback_to_chart(self, tau)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", monomial_string(m))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on {}", self.chart)
    }
}

/// `z1^2*z3` style rendering of an exponent vector (`1` for zero).
pub fn monomial_string(m: &LatticeVector) -> String {
    let parts: Vec<String> = m
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| if e.is_one() { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Drops generators divisible by another generator; associates collapse to
/// their normalized representative.
fn minimalize(dual: &Cone, gens: Vec<LatticeVector>) -> Vec<LatticeVector> {
    let split = LinealitySplit::new(dual.lineality(), dual.rank());
    let mut set: BTreeSet<LatticeVector> = gens.iter().map(|m| split.normalize(m)).collect();
    let all: Vec<LatticeVector> = set.iter().cloned().collect();
    for m in &all {
        let divisible = set.iter().any(|g| g != m && dual.contains_point(&(m - g)));
        if divisible {
            set.remove(m);
        }
    }
    set.into_iter().collect()
}

/// Minimal generators of the ideal spanned by all monomials of character
/// `alpha` on the chart `σ`.
///
/// These are exactly the level-one Hilbert basis elements of the cone
/// `{(m, k) : m ∈ σ∨, <m, a> = αk, k >= 0}`: an element `(m, 1)` decomposes
/// in that monoid iff `m = m' + s` with `m'` of character `α` and `s ∈ σ∨`.
/// The computation is therefore complete without a degree bound.
pub fn torific_generators(
    sigma: &Cone,
    action: &LatticeVector,
    alpha: &BigInt,
) -> Result<MonomialIdeal, MonomialError> {
    sigma.check_rank(action.rank())?;
    if !sigma.is_strictly_convex() {
        return Err(MonomialError::NotStrictlyConvex(sigma.clone()));
    }
    if sigma.contains_point(action) || sigma.contains_point(&-action) {
        return Err(MonomialError::ActionInCone(action.clone()));
    }
    if alpha.is_zero() {
        return Ok(MonomialIdeal::unit(sigma));
    }
    let n = sigma.rank();
    let mut ineqs: Vec<LatticeVector> =
        sigma.rays().iter().map(|r| r.extended(BigInt::zero())).collect();
    ineqs.push(LatticeVector::unit(n + 1, n));
    let eqs = [action.extended(-alpha)];
    let slice = Cone::from_inequalities(n + 1, &ineqs, &eqs)?;
    let level_one: Vec<LatticeVector> = hilbert_basis(&slice)
        .into_iter()
        .filter(|x| x[n].is_one())
        .map(|x| LatticeVector::new(x.entries()[..n].to_vec()))
        .collect();
    MonomialIdeal::new(sigma, level_one)
}

pub fn ideal_product(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
    i.product(j)
}

/// The normalized blowup of the chart along `ideal`: the coarsest
/// subdivision of `σ` on which `v ↦ min_m <m, v>` is linear.
pub fn newton_subdivision(ideal: &MonomialIdeal) -> Result<Subdivision, MonomialError> {
    if ideal.is_zero() {
        return Err(MonomialError::ZeroIdeal);
    }
    let sigma = ideal.chart();
    if !sigma.is_strictly_convex() {
        return Err(MonomialError::NotStrictlyConvex(sigma.clone()));
    }
    // Walk across interior walls from one vertex cell to the next, so cells
    // are computed only for vertices of the Newton polyhedron.
    let gens = ideal.generators();
    let mut start_dirs = vec![sum_of(sigma.rank(), sigma.rays())];
    start_dirs.extend(sigma.rays().iter().cloned());
    let mut queue = vec![lex_min(gens, &start_dirs)];
    let mut seen: BTreeSet<usize> = queue.iter().copied().collect();
    let mut cells = Vec::new();
    while let Some(i) = queue.pop() {
        let m = &gens[i];
        let differences: Vec<LatticeVector> = gens.iter().filter(|g| *g != m).map(|g| g - m).collect();
        let cell = newton_cell(sigma, &differences)?.ok_or_else(|| {
            MonomialError::Fan(FanError::Internal(format!("Newton vertex {m} has a lower-dimensional cell")))
        })?;
        let center = sum_of(sigma.rank(), cell.rays());
        for f in cell.facet_normals() {
            let wall: Vec<LatticeVector> = cell.rays().iter().filter(|r| f.dot(r).is_zero()).cloned().collect();
            let p = sum_of(sigma.rank(), &wall);
            if sigma.facet_normals().iter().any(|n| n.dot(&p).is_zero()) {
                continue;
            }
            // Minimizers at `p + ε(p - center)`, just across the wall.
            let next = lex_min(gens, &[p.clone(), &p - &center]);
            if seen.insert(next) {
                queue.push(next);
            }
        }
        cells.push(cell);
    }
    let fine = Fan::new(sigma.rank(), cells)?;
    let coarse = Fan::from_cone(sigma.clone())?;
    Subdivision::new(fine, coarse)
        .map_err(|e| MonomialError::Fan(FanError::Internal(format!("Newton cells fail to tile: {e}"))))
}

fn sum_of(rank: usize, vectors: &[LatticeVector]) -> LatticeVector {
    vectors.iter().fold(LatticeVector::zero(rank), |acc, x| &acc + x)
}

/// Index of the generator minimizing `<g, dirs[0]>`, ties broken by the later
/// directions in order.
fn lex_min(gens: &[LatticeVector], dirs: &[LatticeVector]) -> usize {
    let key = |g: &LatticeVector| dirs.iter().map(|d| g.dot(d)).collect::<Vec<BigInt>>();
    (0..gens.len()).min_by_key(|&i| key(&gens[i])).expect("nonzero ideal")
}

/// `{v ∈ σ : <d, v> >= 0 for all d}` if it is full-dimensional in `σ`.
///
/// Inequalities are added lazily: only those violated by a ray of the
/// current candidate, which keeps the double description small when most
/// generators are far from `m`. The candidate always contains the cell, so
/// once no ray violates anything they are equal.
fn newton_cell(sigma: &Cone, differences: &[LatticeVector]) -> Result<Option<Cone>, MonomialError> {
    let mut active: Vec<LatticeVector> = sigma.facet_normals().to_vec();
    loop {
        let cell = Cone::from_inequalities(sigma.rank(), &active, sigma.equations())?;
        if cell.dim() < sigma.dim() {
            return Ok(None);
        }
        let mut added = false;
        for r in cell.rays() {
            let worst = differences
                .iter()
                .map(|d| (d.dot(r), d))
                .filter(|(x, _)| x.is_negative())
                .min_by(|a, b| a.0.cmp(&b.0));
            if let Some((_, d)) = worst {
                if !active.contains(d) {
                    active.push(d.clone());
                    added = true;
                }
            }
        }
        if !added {
            return Ok(Some(cell));
        }
    }
}

/// Reads the exponents of `ideal` on a subcone `τ` of its chart.
pub fn pullback_to_chart(ideal: &MonomialIdeal, tau: &Cone) -> Result<MonomialIdeal, MonomialError> {
    if !ideal.chart().contains_cone(tau) {
        return Err(MonomialError::NotContained(tau.clone(), ideal.chart().clone()));
    }
    MonomialIdeal::new(tau, ideal.generators().iter().cloned())
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

    fn orthant(n: usize) -> Cone {
        Cone::new(n, (0..n).map(|i| LatticeVector::unit(n, i))).unwrap()
    }

    fn sorted(mut xs: Vec<LatticeVector>) -> Vec<LatticeVector> {
        xs.sort();
        xs
    }

    #[test]
    fn hilbert_basis_of_orthant() {
        assert_eq!(hilbert_basis(&orthant(2)), vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn hilbert_basis_of_index_two_cone() {
        let c = cone(2, &[&[0, 1], &[2, -1]]);
        assert_eq!(hilbert_basis(&c), sorted(vec![v(&[0, 1]), v(&[1, 0]), v(&[2, -1])]));
    }

    #[test]
    fn hilbert_basis_of_index_three_cone() {
        let c = cone(2, &[&[0, 1], &[3, -1]]);
        assert_eq!(hilbert_basis(&c), sorted(vec![v(&[0, 1]), v(&[1, 0]), v(&[3, -1])]));
    }

    #[test]
    fn hilbert_basis_with_lineality() {
        // half plane x >= 0 in Z^2
        let c = Cone::from_inequalities(2, &[v(&[1, 0])], &[]).unwrap();
        assert_eq!(hilbert_basis(&c), sorted(vec![v(&[0, 1]), v(&[0, -1]), v(&[1, 0])]));
    }

    fn paper_action() -> LatticeVector {
        v(&[2, 3, -1])
    }

    fn gens(alpha: i64) -> Vec<LatticeVector> {
        torific_generators(&orthant(3), &paper_action(), &BigInt::from(alpha))
            .unwrap()
            .generators()
            .to_vec()
    }

    #[test]
    fn torific_ideals_of_weighted_three_space() {
        assert_eq!(gens(2), sorted(vec![v(&[1, 0, 0]), v(&[0, 1, 1])]));
        assert_eq!(gens(3), sorted(vec![v(&[0, 1, 0]), v(&[2, 0, 1])]));
        assert_eq!(gens(6), sorted(vec![v(&[3, 0, 0]), v(&[0, 2, 0]), v(&[2, 1, 1])]));
        assert_eq!(gens(-1), vec![v(&[0, 0, 1])]);
        assert_eq!(gens(-10), vec![v(&[0, 0, 10])]);
        assert_eq!(gens(0), vec![v(&[0, 0, 0])]);
    }

    #[test]
    fn torific_ideal_of_a_plane_reflection() {
        let i = torific_generators(&orthant(2), &v(&[1, -1]), &BigInt::one()).unwrap();
        assert_eq!(i.generators(), &[v(&[1, 0])]);
    }

    #[test]
    fn action_inside_the_cone_is_rejected() {
        let err = torific_generators(&orthant(2), &v(&[1, 1]), &BigInt::one()).unwrap_err();
        assert!(matches!(err, MonomialError::ActionInCone(_)));
        let err = torific_generators(&orthant(2), &v(&[-1, -1]), &BigInt::one()).unwrap_err();
        assert!(matches!(err, MonomialError::ActionInCone(_)));
    }

    #[test]
    fn products_minimalize() {
        let s = orthant(3);
        let i2 = MonomialIdeal::new(&s, gens(2)).unwrap();
        let i3 = MonomialIdeal::new(&s, gens(3)).unwrap();
        let p = ideal_product(&i2, &i3).unwrap();
        // z1^2*z2*z3^2 is a multiple of z1*z2
        assert_eq!(
            p.generators(),
            &sorted(vec![v(&[1, 1, 0]), v(&[3, 0, 1]), v(&[0, 2, 1])])[..]
        );
        assert_eq!(p.product(&MonomialIdeal::unit(&s)).unwrap(), p);
        let x = MonomialIdeal::new(&s, [v(&[1, 0, 0])]).unwrap();
        let z = MonomialIdeal::new(&s, [v(&[0, 0, 1])]).unwrap();
        assert_eq!(x.product(&z).unwrap().generators(), &[v(&[1, 0, 1])]);
    }

    #[test]
    fn minimalization_drops_multiples_and_units() {
        let s = orthant(2);
        let i = MonomialIdeal::new(&s, [v(&[1, 0]), v(&[2, 3]), v(&[0, 1])]).unwrap();
        assert_eq!(i.generators(), &[v(&[0, 1]), v(&[1, 0])]);
        // on a ray chart of Z^2 the second coordinate is a unit
        let ray = cone(2, &[&[1, 0]]);
        let j = MonomialIdeal::new(&ray, [v(&[1, 5]), v(&[1, -2]), v(&[2, 0])]).unwrap();
        assert!(j.is_principal());
        assert!(j.same_ideal(&MonomialIdeal::new(&ray, [v(&[1, 0])]).unwrap()));
        assert!(MonomialIdeal::new(&ray, [v(&[0, 7])]).unwrap().is_unit());
    }

    #[test]
    fn exponents_outside_the_dual_are_rejected() {
        let err = MonomialIdeal::new(&orthant(2), [v(&[-1, 0])]).unwrap_err();
        assert_eq!(err, MonomialError::NotInDual(v(&[-1, 0])));
    }

    #[test]
    fn newton_subdivision_of_principal_ideal_is_identity() {
        let s = orthant(3);
        let i = MonomialIdeal::new(&s, [v(&[1, 2, 0])]).unwrap();
        assert!(newton_subdivision(&i).unwrap().is_identity());
    }

    #[test]
    fn newton_subdivision_of_maximal_ideal_is_a_star() {
        let s = orthant(3);
        let i = MonomialIdeal::new(&s, [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let sub = newton_subdivision(&i).unwrap();
        let star = Fan::from_cone(s).unwrap().star_subdivision(&v(&[1, 1, 1])).unwrap();
        assert_eq!(sub.source(), &star);
    }

    #[test]
    fn newton_subdivision_of_weighted_product() {
        let s = orthant(3);
        let mut product = MonomialIdeal::unit(&s);
        for alpha in [2, 3, 6, -1] {
            product = product.product(&MonomialIdeal::new(&s, gens(alpha)).unwrap()).unwrap();
        }
        let fan = newton_subdivision(&product).unwrap().source().clone();
        let expected = Fan::new(
            3,
            [
                cone(3, &[&[1, 0, 0], &[1, 0, 1], &[1, 1, 0]]),
                cone(3, &[&[1, 1, 0], &[1, 0, 1], &[2, 3, 0], &[0, 0, 1]]),
                cone(3, &[&[2, 3, 0], &[0, 0, 1], &[1, 2, 0], &[0, 1, 1]]),
                cone(3, &[&[1, 2, 0], &[0, 1, 1], &[0, 1, 0]]),
            ],
        )
        .unwrap();
        assert_eq!(fan, expected);
    }

    #[test]
    fn pullback_to_a_blowup_chart_becomes_principal() {
        let s = orthant(2);
        let i = MonomialIdeal::new(&s, [v(&[1, 0]), v(&[0, 1])]).unwrap();
        let tau = cone(2, &[&[1, 0], &[1, 1]]);
        let p = pullback_to_chart(&i, &tau).unwrap();
        assert_eq!(p.generators(), &[v(&[0, 1])]);
        let outside = cone(2, &[&[1, 0], &[-1, 1]]);
        assert!(matches!(pullback_to_chart(&i, &outside), Err(MonomialError::NotContained(..))));
    }

    #[test]
    fn wall_walk_finds_every_vertex_cell() {
        let sigma = orthant(3);
        let mut product = MonomialIdeal::unit(&sigma);
        for alpha in [2, 3, 6, -1, -10, 7] {
            product = product.product(&torific_generators(&sigma, &paper_action(), &BigInt::from(alpha)).unwrap()).unwrap();
        }
        let mut every = Vec::new();
        for m in product.generators() {
            let differences: Vec<LatticeVector> =
                product.generators().iter().filter(|g| *g != m).map(|g| g - m).collect();
            every.extend(newton_cell(&sigma, &differences).unwrap());
        }
        let walked = newton_subdivision(&product).unwrap();
        assert_eq!(walked.source(), &Fan::new(3, every).unwrap());
    }

    #[test]
    fn lazy_cells_match_full_inequality_systems() {
        let sigma = orthant(3);
        let mut product = MonomialIdeal::unit(&sigma);
        for alpha in [2, 3, 6, -1, -10] {
            product = product.product(&torific_generators(&sigma, &paper_action(), &BigInt::from(alpha)).unwrap()).unwrap();
        }
        for m in product.generators() {
            let differences: Vec<LatticeVector> =
                product.generators().iter().filter(|g| *g != m).map(|g| g - m).collect();
            let mut all = sigma.facet_normals().to_vec();
            all.extend(differences.iter().cloned());
            let direct = Cone::from_inequalities(3, &all, &[]).unwrap();
            let lazy = newton_cell(&sigma, &differences).unwrap();
            match lazy {
                Some(cell) => assert_eq!(cell, direct),
                None => assert!(direct.dim() < 3),
            }
        }
    }
}
