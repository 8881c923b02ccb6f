use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::polyhedral::{double_description, project_off};
use super::FanError;
use crate::lattice::{
    hermite_normal_form, integer_kernel, rational_coordinates, smith_normal_form, LatticeMatrix,
    LatticeVector,
};

/// A rational polyhedral cone, stored in both representations.
///
/// Rays are primitive extreme rays taken modulo the lineality space
/// (orthogonally projected off it), lineality and equations are Hermite bases
/// of the corresponding saturated lattices, and facet normals are primitive
/// and projected into the span. All four lists are sorted, so two cones are
/// equal as point sets iff they are equal as values.
#[derive(Clone)]
pub struct Cone {
    rank: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
}

impl Cone {
    /// The cone generated by `generators` in a lattice of the given rank.
    pub fn new<I>(rank: usize, generators: I) -> Result<Cone, FanError>
    where
        I: IntoIterator<Item = LatticeVector>,
    {
        let mut gens = Vec::new();
        for g in generators {
            if g.rank() != rank {
                return Err(FanError::DimensionMismatch { expected: rank, found: g.rank() });
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Self::from_generators(rank, &gens))
    }

    pub fn zero(rank: usize) -> Cone {
        Self::from_generators(rank, &[])
    }

    /// `{x : eqs·x = 0, ineqs·x >= 0}`.
    pub fn from_inequalities(
        rank: usize,
        ineqs: &[LatticeVector],
        eqs: &[LatticeVector],
    ) -> Result<Cone, FanError> {
        for h in ineqs.iter().chain(eqs) {
            if h.rank() != rank {
                return Err(FanError::DimensionMismatch { expected: rank, found: h.rank() });
            }
        }
        let g = double_description(rank, ineqs, eqs);
        let mut gens = g.rays;
        for l in g.lineality {
            gens.push(-&l);
            gens.push(l);
        }
        Ok(Self::from_generators(rank, &gens))
    }

    fn from_generators(rank: usize, gens: &[LatticeVector]) -> Cone {
        let dual = double_description(rank, gens, &[]);
        let primal = double_description(rank, &dual.rays, &dual.lineality);

        let mut dual_gens = dual.rays.clone();
        dual_gens.extend(dual.lineality.iter().cloned());
        let lineality = saturated_kernel(&dual_gens, rank);

        let mut primal_gens = primal.rays.clone();
        primal_gens.extend(primal.lineality.iter().cloned());
        let equations = saturated_kernel(&primal_gens, rank);

        let rays = canonical_directions(&primal.rays, &lineality);
        let facets = canonical_directions(&dual.rays, &equations);
        Cone { rank, rays, lineality, facets, equations }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Extreme rays (modulo lineality).
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Basis of the lineality lattice; empty iff the cone is strictly convex.
    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    /// Inward facet normals, each defined modulo `equations`.
    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facets
    }

    /// Basis of `span(σ)^⊥ ∩ M`.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    /// Rays followed by `±` each lineality basis vector.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(-l);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.rank - self.equations.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// The dual cone `{m : <m,v> >= 0 for all v in σ}` in the dual lattice.
    pub fn dual(&self) -> Cone {
        Cone {
            rank: self.rank,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn contains(&self, x: &[BigRational]) -> Result<bool, FanError> {
        self.check_rank(x.len())?;
        Ok(self.equations.iter().all(|e| e.dot_rational(x).is_zero())
            && self.facets.iter().all(|f| !f.dot_rational(x).is_negative()))
    }

    pub fn relint_contains(&self, x: &[BigRational]) -> Result<bool, FanError> {
        self.check_rank(x.len())?;
        Ok(self.equations.iter().all(|e| e.dot_rational(x).is_zero())
            && self.facets.iter().all(|f| f.dot_rational(x).is_positive()))
    }

    pub fn contains_point(&self, x: &LatticeVector) -> bool {
        debug_assert_eq!(x.rank(), self.rank);
        self.equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| !f.dot(x).is_negative())
    }

    pub fn relint_contains_point(&self, x: &LatticeVector) -> bool {
        debug_assert_eq!(x.rank(), self.rank);
        self.equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| f.dot(x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains_point(g))
    }

    pub fn has_ray(&self, ray: &LatticeVector) -> bool {
        self.rays.binary_search(ray).is_ok()
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(self.rank, &ineqs, &eqs).expect("ranks agree")
    }

    /// Cone generated by `self` together with extra generators.
    pub fn join(&self, extra: &[LatticeVector]) -> Cone {
        let mut g = self.generators();
        g.extend(extra.iter().cloned());
        Cone::from_generators(self.rank, &g)
    }

    /// The smallest face containing all of `points` (which must lie in the cone).
    pub fn minimal_face_containing(&self, points: &[LatticeVector]) -> Cone {
        let tight: Vec<&LatticeVector> =
            self.facets.iter().filter(|f| points.iter().all(|p| f.dot(p).is_zero())).collect();
        let mut gens: Vec<LatticeVector> =
            self.rays.iter().filter(|r| tight.iter().all(|f| f.dot(r).is_zero())).cloned().collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(-l);
        }
        Cone::from_generators(self.rank, &gens)
    }

    /// Whether `other` is a face of `self`.
    pub fn has_face(&self, other: &Cone) -> bool {
        if !self.contains_cone(other) {
            return false;
        }
        let face = self.minimal_face_containing(&other.generators());
        &face == other
    }

    /// Facets of a strictly convex cone, as cones.
    pub fn facets(&self) -> Vec<Cone> {
        self.facets
            .iter()
            .map(|f| {
                let gens: Vec<_> = self.rays.iter().filter(|r| f.dot(r).is_zero()).cloned().collect();
                Cone::from_generators(self.rank, &gens)
            })
            .collect()
    }

    /// All faces of a strictly convex cone, including `{0}` and the cone.
    pub fn faces(&self) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if out.contains(&c) {
                continue;
            }
            stack.extend(c.facets());
            out.insert(c);
        }
        out.insert(Cone::zero(self.rank));
        out
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strictly_convex() && self.rays.len() == self.dim()
    }

    /// Index of the sublattice spanned by the rays inside the saturated
    /// lattice of the span; `None` unless the cone is simplicial.
    pub fn multiplicity(&self) -> Option<BigInt> {
        if !self.is_simplicial() {
            return None;
        }
        if self.rays.is_empty() {
            return Some(BigInt::one());
        }
        let snf = smith_normal_form(&LatticeMatrix::from_rows(&self.rays, self.rank));
        Some(snf.invariant_factors().iter().product())
    }

    pub fn is_smooth(&self) -> bool {
        self.multiplicity().is_some_and(|m| m.is_one())
    }

    /// Sum of the primitive ray generators, made primitive.
    pub fn barycenter(&self) -> Option<LatticeVector> {
        let mut s = LatticeVector::zero(self.rank);
        for r in &self.rays {
            s = &s + r;
        }
        s.primitive().ok()
    }

    /// Coordinates of `x` in terms of the rays of a simplicial cone.
    pub fn ray_coordinates(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        rational_coordinates(&self.rays, x)
    }

    /// Nonzero lattice points `Σ λ_i v_i` with `0 <= λ_i < 1` of a simplicial
    /// cone (the half-open fundamental parallelepiped), paired with their
    /// coefficients. Empty iff the cone is smooth.
    pub fn fundamental_points(&self) -> Vec<(LatticeVector, Vec<BigRational>)> {
        assert!(self.is_simplicial(), "fundamental points need a simplicial cone");
        let d = self.rays.len();
        if d == 0 {
            return Vec::new();
        }
        let snf = smith_normal_form(&LatticeMatrix::from_rows(&self.rays, self.rank));
        let factors = snf.invariant_factors();
        // rays = u_inv · D' · B with B the first d rows of v_inv; a point y·B
        // has ray coefficients λ = y · D'^{-1} · u.
        let mut out = Vec::new();
        let mut k = vec![BigInt::zero(); d];
        loop {
            if k.iter().any(|x| !x.is_zero()) {
                let lambda: Vec<BigRational> = (0..d)
                    .map(|j| {
                        let s = (0..d).fold(BigRational::zero(), |acc, i| {
                            acc + BigRational::new(&k[i] * snf.u.get(i, j), factors[i].clone())
                        });
                        &s - BigRational::from_integer(s.floor().to_integer())
                    })
                    .collect();
                let mut p = vec![BigRational::zero(); self.rank];
                for (l, r) in lambda.iter().zip(&self.rays) {
                    for (pi, ri) in p.iter_mut().zip(r.entries()) {
                        *pi += l * BigRational::from_integer(ri.clone());
                    }
                }
                let point = LatticeVector::new(p.iter().map(|q| q.to_integer()).collect());
                out.push((point, lambda));
            }
            // odometer over 0 <= k_i < d_i
            let mut i = 0;
            loop {
                if i == d {
                    out.sort_by(|a, b| a.0.cmp(&b.0));
                    out.dedup_by(|a, b| a.0 == b.0);
                    return out;
                }
                k[i] += 1;
                if k[i] < factors[i] {
                    break;
                }
                k[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    /// Pulling triangulation of a strictly convex cone using its own rays.
    pub fn triangulate(&self) -> Vec<Cone> {
        if self.is_simplicial() {
            return vec![self.clone()];
        }
        let apex = self.rays[0].clone();
        let mut out = Vec::new();
        for facet in self.facets() {
            if facet.has_ray(&apex) {
                continue;
            }
            for simplex in facet.triangulate() {
                out.push(simplex.join(std::slice::from_ref(&apex)));
            }
        }
        out
    }

    /// A positive integral grading on a strictly convex cone: the sum of its
    /// facet normals.
    pub fn grading(&self) -> LatticeVector {
        let mut s = LatticeVector::zero(self.rank);
        for f in &self.facets {
            s = &s + f;
        }
        s
    }

    pub(crate) fn check_rank(&self, found: usize) -> Result<(), FanError> {
        if found != self.rank {
            return Err(FanError::DimensionMismatch { expected: self.rank, found });
        }
        Ok(())
    }

    fn key(&self) -> (usize, &[LatticeVector], &[LatticeVector]) {
        (self.rank, &self.lineality, &self.rays)
    }
}

fn saturated_kernel(rows: &[LatticeVector], rank: usize) -> Vec<LatticeVector> {
    let basis = if rows.is_empty() {
        (0..rank).map(|i| LatticeVector::unit(rank, i)).collect()
    } else {
        integer_kernel(&LatticeMatrix::from_rows(rows, rank))
    };
    hermite_normal_form(&basis, rank)
}

fn canonical_directions(dirs: &[LatticeVector], off: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = dirs.iter().filter_map(|d| project_off(off, d)).collect();
    out.sort();
    out.dedup();
    out
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lower dimension first, then lexicographic on the canonical data.
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.key().cmp(&other.key()))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        for l in &self.lineality {
            write!(f, ", ±{l}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
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

    fn q(x: &[i64]) -> Vec<BigRational> {
        v(x).to_rational()
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(c.dual(), c);
        assert!(c.is_smooth());
    }

    #[test]
    fn dual_of_index_two_cone() {
        let c = cone(2, &[&[1, 0], &[1, 2]]);
        assert_eq!(c.dual(), cone(2, &[&[0, 1], &[2, -1]]));
    }

    #[test]
    fn dual_of_sigma_one() {
        let c = cone(3, &[&[1, 0, 0], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(c.dual(), cone(3, &[&[1, -1, -1], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn dual_of_ray_has_lineality() {
        let c = cone(2, &[&[1, 0]]);
        let d = c.dual();
        assert_eq!(d.lineality().len(), 1);
        assert_eq!(d.rays(), &[v(&[1, 0])]);
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn membership() {
        let c = cone(2, &[&[1, 0], &[0, 1]]);
        assert!(c.contains(&q(&[1, 1])).unwrap());
        assert!(c.relint_contains(&q(&[1, 1])).unwrap());
        assert!(c.contains(&q(&[1, 0])).unwrap());
        assert!(!c.relint_contains(&q(&[1, 0])).unwrap());
        let c3 = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]);
        assert!(!c3.contains(&q(&[0, 0, 1])).unwrap());
        assert!(c.contains(&q(&[1, 0, 0])).is_err());
    }

    #[test]
    fn smoothness() {
        assert!(cone(2, &[&[1, 0], &[0, 1]]).is_smooth());
        let c = cone(2, &[&[0, 1], &[2, -1]]);
        assert!(c.is_simplicial());
        assert!(!c.is_smooth());
        let s2 = cone(3, &[&[1, 1, 0], &[1, 0, 1], &[2, 3, 0], &[0, 0, 1]]);
        assert!(!s2.is_simplicial());
        assert_eq!(s2.dim(), 3);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = cone(2, &[&[1, 0], &[1, 1], &[0, 1], &[2, 0]]);
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn faces_of_orthant() {
        let c = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(c.faces().len(), 8);
    }

    #[test]
    fn fundamental_points_of_a1() {
        let c = cone(2, &[&[0, 1], &[2, -1]]);
        let pts = c.fundamental_points();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].0, v(&[1, 0]));
    }

    #[test]
    fn triangulation_of_square_cone() {
        let c = cone(3, &[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let t = c.triangulate();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(Cone::is_simplicial));
    }

    #[test]
    fn face_relation() {
        let c = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(c.has_face(&cone(3, &[&[1, 0, 0], &[0, 1, 0]])));
        assert!(!c.has_face(&cone(3, &[&[1, 1, 0]])));
        assert!(c.has_face(&Cone::zero(3)));
    }
}
