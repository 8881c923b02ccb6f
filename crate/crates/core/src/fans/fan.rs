use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;

use super::{Cone, FanError};
use crate::lattice::LatticeVector;

/// A finite, face-closed collection of strictly convex cones meeting along
/// common faces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fan {
    rank: usize,
    cones: BTreeSet<Cone>,
}

impl Fan {
    /// Builds the fan generated by `cones` (faces are added) and checks
    /// pairwise compatibility.
    pub fn new<I>(rank: usize, cones: I) -> Result<Fan, FanError>
    where
        I: IntoIterator<Item = Cone>,
    {
        let fan = Self::closure(rank, cones)?;
        fan.validate()?;
        Ok(fan)
    }

    /// Face closure without the compatibility check.
    pub fn closure<I>(rank: usize, cones: I) -> Result<Fan, FanError>
    where
        I: IntoIterator<Item = Cone>,
    {
        let mut all = BTreeSet::new();
        all.insert(Cone::zero(rank));
        for c in cones {
            if c.rank() != rank {
                return Err(FanError::DimensionMismatch { expected: rank, found: c.rank() });
            }
            if !c.is_strictly_convex() {
                return Err(FanError::NotStrictlyConvex(c));
            }
            if all.contains(&c) {
                continue;
            }
            all.extend(c.faces());
        }
        Ok(Fan { rank, cones: all })
    }

    /// The fan of a single cone and its faces.
    pub fn from_cone(cone: Cone) -> Result<Fan, FanError> {
        let rank = cone.rank();
        Self::closure(rank, [cone])
    }

    pub fn empty(rank: usize) -> Fan {
        let mut cones = BTreeSet::new();
        cones.insert(Cone::zero(rank));
        Fan { rank, cones }
    }

    /// Checks that any two maximal cones meet in a common face.
    pub fn validate(&self) -> Result<(), FanError> {
        let maximal = self.maximal_cones();
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                let meet = a.intersection(b);
                if !a.has_face(&meet) || !b.has_face(&meet) {
                    return Err(FanError::Incompatible(a.clone(), b.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cones(&self) -> &BTreeSet<Cone> {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.len() <= 1
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }

    /// Cones not properly contained in another cone of the fan, in canonical
    /// order.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.dim() > c.dim() && d.contains_cone(c)))
            .cloned()
            .collect()
    }

    /// Primitive generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<LatticeVector> {
        self.cones.iter().filter(|c| c.dim() == 1).map(|c| c.rays()[0].clone()).collect()
    }

    pub fn has_ray(&self, ray: &LatticeVector) -> bool {
        self.cones.iter().any(|c| c.dim() == 1 && c.rays()[0] == *ray)
    }

    pub fn support_contains(&self, x: &[BigRational]) -> Result<bool, FanError> {
        if x.len() != self.rank {
            return Err(FanError::DimensionMismatch { expected: self.rank, found: x.len() });
        }
        Ok(self.maximal_cones().iter().any(|c| c.contains(x).unwrap_or(false)))
    }

    pub fn support_contains_point(&self, x: &LatticeVector) -> bool {
        self.maximal_cones().iter().any(|c| c.contains_point(x))
    }

    /// The unique cone containing `x` in its relative interior.
    pub fn carrier(&self, x: &LatticeVector) -> Option<&Cone> {
        self.cones.iter().find(|c| c.relint_contains_point(x))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    /// Cones of the fan that contain `cone` (its star).
    pub fn star_of<'a>(&'a self, cone: &'a Cone) -> impl Iterator<Item = &'a Cone> + 'a {
        self.cones.iter().filter(move |c| c.contains_cone(cone))
    }

    /// The subfan of cones satisfying `keep`; the caller guarantees face
    /// closure.
    pub(crate) fn filtered<F>(&self, keep: F) -> Fan
    where
        F: Fn(&Cone) -> bool,
    {
        let mut cones: BTreeSet<Cone> = self.cones.iter().filter(|c| keep(c)).cloned().collect();
        cones.insert(Cone::zero(self.rank));
        Fan { rank: self.rank, cones }
    }

    pub fn is_face_closed(&self) -> bool {
        // closure under facets implies closure under all faces
        self.cones.contains(&Cone::zero(self.rank))
            && self.cones.iter().all(|c| c.facets().iter().all(|f| self.cones.contains(f)))
    }

    /// Star subdivision at the ray through `ray`.
    ///
    /// Cones containing the ray are replaced by joins of the ray with their
    /// faces not containing it. If the ray already belongs to the fan the fan
    /// is returned unchanged.
    pub fn star_subdivision(&self, ray: &LatticeVector) -> Result<Fan, FanError> {
        if ray.rank() != self.rank {
            return Err(FanError::DimensionMismatch { expected: self.rank, found: ray.rank() });
        }
        let rho = ray.primitive().map_err(|_| FanError::ZeroRay)?;
        if self.has_ray(&rho) {
            return Ok(self.clone());
        }
        if !self.support_contains_point(&rho) {
            return Err(FanError::OutsideSupport(rho));
        }
        let mut cones = BTreeSet::new();
        for c in &self.cones {
            if !c.contains_point(&rho) {
                cones.insert(c.clone());
                continue;
            }
            for face in c.faces() {
                if !face.contains_point(&rho) {
                    cones.insert(face.join(std::slice::from_ref(&rho)));
                }
            }
        }
        Self::closure(self.rank, cones)
    }

    /// Iterated star subdivision at the barycenters of all cones of dimension
    /// at least two, highest dimension first.
    pub fn barycentric_subdivision(&self) -> Result<Fan, FanError> {
        if let Some(bad) = self.cones.iter().find(|c| !c.is_simplicial()) {
            return Err(FanError::NotSimplicial(bad.clone()));
        }
        let mut order: Vec<&Cone> = self.cones.iter().filter(|c| c.dim() >= 2).collect();
        order.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
        let mut fan = self.clone();
        for c in order {
            let center = c.barycenter().expect("nonzero cone");
            fan = fan.star_subdivision(&center)?;
        }
        Ok(fan)
    }

    /// Deterministic resolution by star subdivisions.
    ///
    /// First non-simplicial cones are removed (lowest dimension first,
    /// subdividing at the barycenter), then the lowest-dimensional singular
    /// cone is subdivided at the fundamental-parallelepiped point minimizing
    /// the largest coefficient (ties: lexicographically smallest point).
    pub fn desingularize(&self) -> Result<Resolution, FanError> {
        let mut fan = self.clone();
        let mut centers = Vec::new();
        loop {
            let next = if let Some(c) = fan.cones.iter().find(|c| !c.is_simplicial()) {
                c.barycenter().expect("non-simplicial cones are nonzero")
            } else if let Some(c) = fan.cones.iter().find(|c| !c.is_smooth()) {
                c.fundamental_points()
                    .into_iter()
                    .map(|(p, lambda)| {
                        let worst = lambda.into_iter().max().expect("nonempty");
                        (worst, p)
                    })
                    .min()
                    .map(|(_, p)| p)
                    .expect("singular cone has fundamental points")
            } else {
                break;
            };
            fan = fan.star_subdivision(&next)?;
            centers.push(next);
        }
        let subdivision = Subdivision::new(fan, self.clone())
            .map_err(|f| FanError::Internal(format!("resolution is not a refinement: {f}")))?;
        Ok(Resolution { subdivision, centers })
    }

    /// Checks that `self` refines `coarse` and returns the witness map.
    pub fn is_refinement(&self, coarse: &Fan) -> Result<Subdivision, RefinementFailure> {
        Subdivision::new(self.clone(), coarse.clone())
    }

    /// Applies `f` to every ray and rebuilds the fan (used for lattice maps
    /// that are injective on each cone).
    pub fn map_rays<F>(&self, target_rank: usize, f: F) -> Result<Fan, FanError>
    where
        F: Fn(&LatticeVector) -> LatticeVector,
    {
        let mut cones = Vec::new();
        for c in self.maximal_cones() {
            cones.push(Cone::new(target_rank, c.rays().iter().map(&f))?);
        }
        Fan::new(target_rank, cones)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.maximal_cones().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Set equality of fans.
pub fn fans_equal(a: &Fan, b: &Fan) -> bool {
    a == b
}

/// A refinement `source -> target` with, for every source cone, the smallest
/// target cone containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    source: Fan,
    target: Fan,
    witness: BTreeMap<Cone, Cone>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinementFailure {
    RankMismatch { source: usize, target: usize },
    /// A source cone lies in no target cone.
    NotContained(Cone),
    /// A target cone is not covered by source cones; carries an uncovered
    /// wall (or the cone itself when nothing lies inside it).
    NotCovered { cone: Cone, wall: Cone },
}

impl fmt::Display for RefinementFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefinementFailure::RankMismatch { source, target } => {
                write!(f, "rank mismatch: {source} vs {target}")
            }
            RefinementFailure::NotContained(c) => write!(f, "cone {c} lies in no target cone"),
            RefinementFailure::NotCovered { cone, wall } => {
                write!(f, "cone {cone} is not covered (open wall {wall})")
            }
        }
    }
}

impl Subdivision {
    pub fn new(source: Fan, target: Fan) -> Result<Subdivision, RefinementFailure> {
        if source.rank != target.rank {
            return Err(RefinementFailure::RankMismatch { source: source.rank, target: target.rank });
        }
        let mut witness = BTreeMap::new();
        for c in &source.cones {
            // BTreeSet order is by dimension, so the first hit is minimal.
            let Some(t) = target.cones.iter().find(|t| t.contains_cone(c)) else {
                return Err(RefinementFailure::NotContained(c.clone()));
            };
            witness.insert(c.clone(), t.clone());
        }
        for t in target.maximal_cones() {
            check_covered(&source, &t)?;
        }
        Ok(Subdivision { source, target, witness })
    }

    /// The trivial subdivision of a fan by itself.
    pub fn identity(fan: Fan) -> Subdivision {
        let witness = fan.cones.iter().map(|c| (c.clone(), c.clone())).collect();
        Subdivision { source: fan.clone(), target: fan, witness }
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    pub fn witness(&self) -> &BTreeMap<Cone, Cone> {
        &self.witness
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

/// Source cones of full dimension inside `target` must close up: every wall
/// is either on the boundary of `target` or shared by exactly two of them.
fn check_covered(source: &Fan, target: &Cone) -> Result<(), RefinementFailure> {
    let d = target.dim();
    if d == 0 {
        return Ok(());
    }
    let pieces: Vec<&Cone> = source.cones.iter().filter(|c| c.dim() == d && target.contains_cone(c)).collect();
    if pieces.is_empty() {
        return Err(RefinementFailure::NotCovered { cone: target.clone(), wall: target.clone() });
    }
    let mut walls: BTreeMap<Cone, usize> = BTreeMap::new();
    for p in &pieces {
        for w in p.facets() {
            *walls.entry(w).or_default() += 1;
        }
    }
    for (w, count) in walls {
        let on_boundary = target
            .facet_normals()
            .iter()
            .any(|f| w.rays().iter().all(|r| f.dot(r) == num_bigint::BigInt::from(0)));
        if !on_boundary && count != 2 {
            return Err(RefinementFailure::NotCovered { cone: target.clone(), wall: w });
        }
    }
    Ok(())
}

/// Output of [`Fan::desingularize`]: the subdivision and the ordered centers
/// of the star subdivisions that produced it.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub subdivision: Subdivision,
    pub centers: Vec<LatticeVector>,
}

impl Resolution {
    pub fn fan(&self) -> &Fan {
        self.subdivision.source()
    }

    /// Re-applies the recorded centers to the original fan.
    pub fn replay(&self) -> Result<Fan, FanError> {
        let mut fan = self.subdivision.target().clone();
        for c in &self.centers {
            fan = fan.star_subdivision(c)?;
        }
        Ok(fan)
    }
}
