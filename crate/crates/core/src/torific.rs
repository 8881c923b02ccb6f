//! Torific blowups of smooth charts and combinatorial certificates that the
//! resulting action is toroidal.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cobordism::{CobordismError, CobordismFan};
use crate::fans::{fans_equal, Cone, Fan, FanError};
use crate::lattice::{rational_rank, smith_normal_form, solve_integer, LatticeMatrix, LatticeVector};
use crate::monomials::{newton_subdivision, torific_generators, MonomialError, MonomialIdeal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorificError {
    #[error("chart cone {0} is not smooth")]
    NotSmooth(Cone),
    #[error("cone {0} is not simplicial")]
    NotSimplicial(Cone),
    #[error("the action vector {0} lies in plus or minus the chart cone")]
    ActionInCone(LatticeVector),
    #[error("cone {0} is not dependent")]
    NotDependent(Cone),
    #[error("{alpha} is not a nonzero multiple of the tangent character {character}")]
    Divisibility { alpha: BigInt, character: BigInt },
    #[error("no pair of star subdivisions identifies the two quotients of {0}")]
    FactorNotFound(Cone),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
}

/// Why no splitting functional exists for a (cone, ray) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// The linear conditions are inconsistent over the rationals.
    Inconsistent,
    /// A rational solution exists but none is integral.
    NotIntegral(Vec<BigRational>),
}

/// Outcome of [`toroidal_certificate`] for one (cone, removed ray) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateRecord {
    pub cone: Cone,
    pub ray: LatticeVector,
    pub result: Result<LatticeVector, Obstruction>,
}

/// The decomposition `Y = Spec K[z_i / z^{m_i}] × Y'` on one maximal chart:
/// `exponent` is `m_i`, the splitting witness is `v_i* - m_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartCoordinate {
    pub cone: Cone,
    pub ray: LatticeVector,
    pub witness: LatticeVector,
    pub exponent: LatticeVector,
    /// Whether `m_i` lies in the dual of the original chart.
    pub in_chart_dual: bool,
}

#[derive(Debug, Clone)]
pub struct TorificRun {
    pub chart: Cone,
    pub action: LatticeVector,
    /// Characters `<v_i*, a>` of the coordinate functions, one per basis
    /// vector of the adapted lattice basis (rays first).
    pub tangent_characters: Vec<BigInt>,
    /// Characters whose ideals are multiplied: sorted distinct values, then
    /// the balancing character if any (which may repeat a value).
    pub characters: Vec<BigInt>,
    pub balanced: bool,
    pub ideals: Vec<(BigInt, MonomialIdeal)>,
    pub product: MonomialIdeal,
    pub subdivision: Fan,
    pub removed_rays: Vec<LatticeVector>,
    pub certificates: Vec<CertificateRecord>,
    pub coordinates: Vec<ChartCoordinate>,
}

impl TorificRun {
    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.result.is_ok())
    }

    pub fn ideal(&self, character: &BigInt) -> Option<&MonomialIdeal> {
        self.ideals.iter().find(|(c, _)| c == character).map(|(_, i)| i)
    }

    pub fn character_sum(&self) -> BigInt {
        self.characters.iter().sum()
    }
}

/// A lattice basis whose first vectors are the rays of a smooth cone,
/// together with its dual basis.
pub fn adapted_basis(sigma: &Cone) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>), TorificError> {
    if !sigma.is_smooth() {
        return Err(TorificError::NotSmooth(sigma.clone()));
    }
    let n = sigma.rank();
    let m = sigma.rays().len();
    let mut basis: Vec<LatticeVector> = sigma.rays().to_vec();
    if m < n {
        let completion = if m == 0 {
            LatticeMatrix::identity(n)
        } else {
            smith_normal_form(&LatticeMatrix::from_rows(sigma.rays(), n)).v_inv
        };
        basis.extend(completion.rows().into_iter().skip(m));
    }
    let matrix = LatticeMatrix::from_rows(&basis, n);
    let dual = (0..n)
        .map(|i| solve_integer(&matrix, &LatticeVector::unit(n, i)).expect("unimodular basis"))
        .collect();
    Ok((basis, dual))
}

/// Characters of the coordinate functions `z_i = z^{v_i*}` of a smooth chart.
pub fn tangent_characters(sigma: &Cone, action: &LatticeVector) -> Result<Vec<BigInt>, TorificError> {
    let (_, dual) = adapted_basis(sigma)?;
    Ok(dual.iter().map(|d| d.dot(action)).collect())
}

/// Searches `m` with `<m, ray> = 1`, `<m, v> = 0` for the other rays of
/// `cone` and `<m, a> = 0`, splitting `cone = ⟨ray⟩ × rest` with `a` in the
/// complementary sublattice.
pub fn toroidal_certificate(
    cone: &Cone,
    ray: &LatticeVector,
    action: &LatticeVector,
) -> Result<LatticeVector, Obstruction> {
    let n = cone.rank();
    let mut rows = vec![ray.clone()];
    let mut rhs = vec![BigInt::from(1)];
    for r in cone.rays().iter().filter(|r| *r != ray) {
        rows.push(r.clone());
        rhs.push(BigInt::zero());
    }
    rows.push(action.clone());
    rhs.push(BigInt::zero());
    let matrix = LatticeMatrix::from_rows(&rows, n);
    let target = LatticeVector::new(rhs.clone());
    if let Some(m) = solve_integer(&matrix, &target) {
        return Ok(m);
    }
    // classify: rank test on the augmented system
    let augmented: Vec<LatticeVector> = rows
        .iter()
        .zip(&rhs)
        .map(|(r, b)| r.extended(b.clone()))
        .collect();
    if rational_rank(&augmented, n + 1) > rational_rank(&rows, n) {
        return Err(Obstruction::Inconsistent);
    }
    Err(Obstruction::NotIntegral(rational_solution(&rows, &rhs, n)))
}

/// One rational solution of a consistent system (free variables zero).
fn rational_solution(rows: &[LatticeVector], rhs: &[BigInt], n: usize) -> Vec<BigRational> {
    let snf = smith_normal_form(&LatticeMatrix::from_rows(rows, n));
    let ub = snf.u.mul_vec(&LatticeVector::new(rhs.to_vec()));
    let factors = snf.invariant_factors();
    let y: Vec<BigRational> = (0..n)
        .map(|i| match factors.get(i) {
            Some(d) => BigRational::new(ub[i].clone(), d.clone()),
            None => BigRational::zero(),
        })
        .collect();
    (0..n)
        .map(|r| {
            (0..n).fold(BigRational::zero(), |acc, c| {
                acc + BigRational::from_integer(snf.v.get(r, c).clone()) * &y[c]
            })
        })
        .collect()
}

fn check_action(sigma: &Cone, action: &LatticeVector) -> Result<(), TorificError> {
    if sigma.contains_point(action) || sigma.contains_point(&-action) {
        return Err(TorificError::ActionInCone(action.clone()));
    }
    Ok(())
}

/// Torific blowup of a smooth chart.
///
/// The characters are the distinct tangent and extra characters in
/// increasing order, followed by `-Σc` when `balanced` is set and the sum is
/// nonzero.
pub fn torify_chart(
    sigma: &Cone,
    action: &LatticeVector,
    extra_characters: &[BigInt],
    balanced: bool,
) -> Result<TorificRun, TorificError> {
    let (_, dual) = adapted_basis(sigma)?;
    check_action(sigma, action)?;
    let tangent: Vec<BigInt> = dual.iter().map(|d| d.dot(action)).collect();
    let distinct: BTreeSet<BigInt> = tangent.iter().chain(extra_characters).cloned().collect();
    let mut characters: Vec<BigInt> = distinct.into_iter().collect();
    if balanced {
        let sum: BigInt = characters.iter().sum();
        if !sum.is_zero() {
            characters.push(-sum);
        }
    }

    let mut ideals: Vec<(BigInt, MonomialIdeal)> = Vec::new();
    let mut product = MonomialIdeal::unit(sigma);
    for c in &characters {
        let ideal = torific_generators(sigma, action, c)?;
        product = product.product(&ideal)?;
        if !ideals.iter().any(|(d, _)| d == c) {
            ideals.push((c.clone(), ideal));
        }
    }
    let subdivision = newton_subdivision(&product)?.source().clone();

    let mut removed_rays = Vec::new();
    for (ray, c) in sigma.rays().iter().zip(&tangent) {
        let ideal = &ideals.iter().find(|(d, _)| d == c).expect("tangent characters are included").1;
        if !ideal.is_principal() {
            removed_rays.push(ray.clone());
        }
    }

    let mut certificates = Vec::new();
    for tau in subdivision.cones() {
        for ray in removed_rays.iter().filter(|r| tau.has_ray(r)) {
            let result = toroidal_certificate(tau, ray, action);
            certificates.push(CertificateRecord { cone: tau.clone(), ray: ray.clone(), result });
        }
    }

    let sigma_dual = sigma.dual();
    let mut coordinates = Vec::new();
    for tau in subdivision.maximal_cones() {
        for ray in removed_rays.iter().filter(|r| tau.has_ray(r)) {
            if let Ok(witness) = toroidal_certificate(&tau, ray, action) {
                let idx = sigma.rays().iter().position(|r| r == ray).expect("ray of the chart");
                let exponent = &dual[idx] - &witness;
                let in_chart_dual = sigma_dual.contains_point(&exponent);
                coordinates.push(ChartCoordinate {
                    cone: tau.clone(),
                    ray: ray.clone(),
                    witness,
                    exponent,
                    in_chart_dual,
                });
            }
        }
    }

    Ok(TorificRun {
        chart: sigma.clone(),
        action: action.clone(),
        tangent_characters: tangent,
        characters,
        balanced,
        ideals,
        product,
        subdivision,
        removed_rays,
        certificates,
        coordinates,
    })
}

/// Blows up the ideals one after another, pulling each back to the charts
/// of the previous step.
pub fn sequential_blowup(sigma: &Cone, ideals: &[MonomialIdeal]) -> Result<Fan, TorificError> {
    let mut fan = Fan::from_cone(sigma.clone())?;
    for ideal in ideals {
        let mut cones = Vec::new();
        for tau in fan.maximal_cones() {
            let local = ideal.pullback(&tau)?;
            cones.extend(newton_subdivision(&local)?.source().maximal_cones());
        }
        fan = Fan::new(sigma.rank(), cones)?;
    }
    Ok(fan)
}

/// Whether blowing up `I_α · I_{-α}` identifies the two quotients.
///
/// `alpha` must be a nonzero multiple of every nonzero tangent character.
pub fn tor_isom_check(sigma: &Cone, action: &LatticeVector, alpha: &BigInt) -> Result<bool, TorificError> {
    let tangent = tangent_characters(sigma, action)?;
    check_action(sigma, action)?;
    for c in &tangent {
        if alpha.is_zero() || (!c.is_zero() && !alpha.is_multiple_of(c)) {
            return Err(TorificError::Divisibility { alpha: alpha.clone(), character: c.clone() });
        }
    }
    let plus = torific_generators(sigma, action, alpha)?;
    let minus = torific_generators(sigma, action, &-alpha)?;
    let fan = newton_subdivision(&plus.product(&minus)?)?.source().clone();
    let cob = CobordismFan::new(fan, action.clone())?;
    let b = cob.boundary()?;
    Ok(fans_equal(&b.lower_quotient, &b.upper_quotient))
}

/// A blowup followed by a blowdown realizing the birational map between the
/// two quotients of a dependent simplicial cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryFactor {
    pub cone: Cone,
    /// Center on the lower side; `None` when the quotients already agree.
    pub lower_ray: Option<LatticeVector>,
    pub upper_ray: Option<LatticeVector>,
    pub lower: Fan,
    pub upper: Fan,
    pub common: Fan,
}

/// Finds rays `r₋ ∈ |∂₋σ|`, `r₊ ∈ |∂₊σ|` whose star subdivisions of the two
/// quotient fans coincide.
///
/// Candidates are tried in order: the two halves of the circuit
/// `a = Σλ_i v_i` split by sign, then rays of `σ`, then primitive sums of
/// subsets of boundary rays.
pub fn elementary_factor(sigma: &Cone, action: &LatticeVector) -> Result<ElementaryFactor, TorificError> {
    if !sigma.is_simplicial() {
        return Err(TorificError::NotSimplicial(sigma.clone()));
    }
    check_action(sigma, action)?;
    let cob = CobordismFan::new(Fan::from_cone(sigma.clone())?, action.clone())?;
    if !cob.is_dependent(sigma) {
        return Err(TorificError::NotDependent(sigma.clone()));
    }
    let b = cob.boundary()?;
    let q = cob.quotient();
    if fans_equal(&b.lower_quotient, &b.upper_quotient) {
        return Ok(ElementaryFactor {
            cone: sigma.clone(),
            lower_ray: None,
            upper_ray: None,
            lower: b.lower_quotient.clone(),
            upper: b.upper_quotient.clone(),
            common: b.lower_quotient,
        });
    }

    let lambda = sigma.ray_coordinates(&action.to_rational()).expect("a lies in the span");
    let weighted = |positive: bool| -> Option<LatticeVector> {
        let mut acc = vec![BigRational::zero(); sigma.rank()];
        for (l, r) in lambda.iter().zip(sigma.rays()) {
            if l.is_positive() == positive && !l.is_zero() {
                let w = l.abs();
                for (a, x) in acc.iter_mut().zip(r.entries()) {
                    *a += &w * BigRational::from_integer(x.clone());
                }
            }
        }
        LatticeVector::from_rational_direction(&acc).ok()
    };
    let candidates = |side: &Fan, circuit: Option<LatticeVector>| -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut push = |v: LatticeVector, out: &mut Vec<LatticeVector>| {
            if side.support_contains_point(&v) && seen.insert(v.clone()) {
                out.push(v);
            }
        };
        if let Some(c) = circuit {
            push(c, &mut out);
        }
        for r in sigma.rays() {
            push(r.clone(), &mut out);
        }
        let rays = side.rays();
        for mask in 1u64..(1u64 << rays.len().min(20)) {
            if mask.count_ones() < 2 || mask.count_ones() as usize > sigma.dim() {
                continue;
            }
            let mut s = LatticeVector::zero(sigma.rank());
            for (i, r) in rays.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s = &s + r;
                }
            }
            if let Ok(p) = s.primitive() {
                push(p, &mut out);
            }
        }
        out
    };
    let lower_candidates = candidates(&b.lower, weighted(true));
    let upper_candidates = candidates(&b.upper, weighted(false));
    for r_minus in &lower_candidates {
        let Ok(p_minus) = q.project(r_minus).primitive() else { continue };
        let Ok(common) = b.lower_quotient.star_subdivision(&p_minus) else { continue };
        for r_plus in &upper_candidates {
            let Ok(p_plus) = q.project(r_plus).primitive() else { continue };
            let Ok(other) = b.upper_quotient.star_subdivision(&p_plus) else { continue };
            if fans_equal(&common, &other) {
                return Ok(ElementaryFactor {
                    cone: sigma.clone(),
                    lower_ray: Some(r_minus.clone()),
                    upper_ray: Some(r_plus.clone()),
                    lower: b.lower_quotient.clone(),
                    upper: b.upper_quotient.clone(),
                    common,
                });
            }
        }
    }
    Err(TorificError::FactorNotFound(sigma.clone()))
}
