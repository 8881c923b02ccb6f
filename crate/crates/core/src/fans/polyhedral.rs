//! Double description for rational cones with integer data.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::lattice::{integer_kernel, rational_rank, LatticeMatrix, LatticeVector};

/// Generators of `{x : eqs·x = 0, ineqs·x >= 0}`: a basis of the lineality
/// space and the extreme rays modulo lineality (not yet canonical).
#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    pub lineality: Vec<LatticeVector>,
    pub rays: Vec<LatticeVector>,
}

pub(crate) fn double_description(
    rank: usize,
    ineqs: &[LatticeVector],
    eqs: &[LatticeVector],
) -> Generators {
    let mut lineality = if eqs.is_empty() {
        (0..rank).map(|i| LatticeVector::unit(rank, i)).collect()
    } else {
        integer_kernel(&LatticeMatrix::from_rows(eqs, rank))
    };
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut processed: Vec<LatticeVector> = eqs.to_vec();

    for h in ineqs {
        if h.is_zero() {
            continue;
        }
        if let Some(idx) = lineality.iter().position(|l| !h.dot(l).is_zero()) {
            let mut l = lineality.remove(idx);
            if h.dot(&l).is_negative() {
                l = -&l;
            }
            let hl = h.dot(&l);
            for other in lineality.iter_mut().chain(rays.iter_mut()) {
                let t = h.dot(other);
                if !t.is_zero() {
                    *other = (&other.scale(&hl) - &l.scale(&t)).primitive().expect("independent");
                }
            }
            rays.push(l);
            processed.push(h.clone());
            continue;
        }

        let mut plus = Vec::new();
        let mut zero = Vec::new();
        let mut minus = Vec::new();
        for r in rays.drain(..) {
            let t = h.dot(&r);
            if t.is_positive() {
                plus.push((r, t));
            } else if t.is_zero() {
                zero.push(r);
            } else {
                minus.push((r, t));
            }
        }
        processed.push(h.clone());
        let had_minus = !minus.is_empty();
        let mut next: Vec<LatticeVector> = plus.iter().map(|(r, _)| r.clone()).collect();
        next.extend(zero);
        for (p, tp) in &plus {
            for (m, tm) in &minus {
                let c = &m.scale(tp) - &p.scale(tm);
                if let Ok(c) = c.primitive() {
                    next.push(c);
                }
            }
        }
        rays = if had_minus { prune(rank, &processed, next) } else { next };
    }

    Generators { lineality, rays }
}

/// Keeps one representative per extreme ray of the cone cut out by
/// `constraints` (equalities come first but the rank test treats all rows
/// uniformly: a ray is extreme iff its tight rows have corank one).
fn prune(rank: usize, constraints: &[LatticeVector], candidates: Vec<LatticeVector>) -> Vec<LatticeVector> {
    let target = rational_rank(constraints, rank) - 1;
    let mut seen: Vec<Vec<bool>> = Vec::new();
    let mut out = Vec::new();
    for r in candidates {
        let tight: Vec<bool> = constraints.iter().map(|c| c.dot(&r).is_zero()).collect();
        if seen.contains(&tight) {
            continue;
        }
        let rows: Vec<LatticeVector> = constraints
            .iter()
            .zip(&tight)
            .filter(|(_, &t)| t)
            .map(|(c, _)| c.clone())
            .collect();
        if rational_rank(&rows, rank) == target {
            seen.push(tight);
            out.push(r);
        }
    }
    out
}

/// Orthogonal projection onto the complement of `span(basis)`, returning the
/// primitive integer direction of the image (or `None` if it vanishes).
pub(crate) fn project_off(basis: &[LatticeVector], v: &LatticeVector) -> Option<LatticeVector> {
    if basis.is_empty() {
        return v.primitive().ok();
    }
    let ortho = gram_schmidt(basis);
    let mut x = v.to_rational();
    for q in &ortho {
        let qq = dot_q(q, q);
        let c = dot_q(&x, q) / qq;
        for (xi, qi) in x.iter_mut().zip(q) {
            *xi -= &c * qi;
        }
    }
    LatticeVector::from_rational_direction(&x).ok()
}

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn gram_schmidt(basis: &[LatticeVector]) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for b in basis {
        let mut x = b.to_rational();
        for q in &out {
            let c = dot_q(&x, q) / dot_q(q, q);
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi -= &c * qi;
            }
        }
        if x.iter().any(|t| !t.is_zero()) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(x)
    }

    #[test]
    fn orthant_dual() {
        let g = double_description(2, &[v(&[1, 0]), v(&[0, 1])], &[]);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays;
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn half_plane_keeps_a_line() {
        let g = double_description(2, &[v(&[0, 1])], &[]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // x3 >= |x1|, x3 >= |x2|
        let ineqs = [v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let g = double_description(3, &ineqs, &[]);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
    }
}
