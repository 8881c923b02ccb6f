//! Seeded random fans and cobordisms, plus brute-force oracles over `i64`
//! that share no code with the exact library paths they check.

pub mod checks;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torific_core::fans::{Cone, Fan};
use torific_core::lattice::LatticeVector;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lv(x: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(x)
}

pub fn to_i64(v: &LatticeVector) -> Vec<i64> {
    v.entries().iter().map(|e| e.to_i64().expect("small entries")).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rows of a random unimodular matrix with small entries.
pub fn random_unimodular(rng: &mut Rng64, n: usize, steps: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut done = 0;
    let mut tries = 0;
    while done < steps && tries < 50 * steps.max(1) {
        tries += 1;
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let k = if rng.gen_bool(0.5) { 1 } else { -1 };
        let row: Vec<i64> = m[i].iter().zip(&m[j]).map(|(a, b)| a + k * b).collect();
        if row.iter().all(|x| x.abs() <= bound) {
            m[i] = row;
            done += 1;
        }
    }
    m.shuffle(rng);
    for row in m.iter_mut() {
        if rng.gen_bool(0.3) {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
    m
}

pub fn random_smooth_cone(rng: &mut Rng64, n: usize) -> Cone {
    let rows = random_unimodular(rng, n, 2 * n, 2);
    Cone::new(n, rows.iter().map(|r| lv(r))).expect("unimodular rows")
}

/// A smooth fan: one full cone, possibly glued to a neighbour across a
/// facet, followed by a few star subdivisions at sums of two rays.
pub fn random_smooth_fan(rng: &mut Rng64, n: usize) -> Fan {
    let rows = random_unimodular(rng, n, 2 * n, 2);
    let mut cones = vec![Cone::new(n, rows.iter().map(|r| lv(r))).unwrap()];
    if n >= 2 && rng.gen_bool(0.5) {
        // ⟨v_1..v_{n-1}, -v_n + Σ c_i v_i⟩ shares the facet opposite v_n
        let mut w: Vec<i64> = rows[n - 1].iter().map(|x| -x).collect();
        for r in &rows[..n - 1] {
            let c = rng.gen_range(0..=1);
            for (wi, ri) in w.iter_mut().zip(r) {
                *wi += c * ri;
            }
        }
        let mut gens: Vec<LatticeVector> = rows[..n - 1].iter().map(|r| lv(r)).collect();
        gens.push(lv(&w));
        cones.push(Cone::new(n, gens).unwrap());
    }
    let mut fan = Fan::new(n, cones).expect("glued along a facet");
    let stars = rng.gen_range(0..=2);
    for _ in 0..stars {
        let two_dim: Vec<Cone> = fan.cones().iter().filter(|c| c.dim() == 2).cloned().collect();
        if two_dim.is_empty() {
            break;
        }
        let c = two_dim.choose(rng).unwrap();
        let center = &c.rays()[0] + &c.rays()[1];
        fan = fan.star_subdivision(&center).unwrap();
    }
    fan
}

/// A random primitive vector with `±a` outside the support.
pub fn random_action(rng: &mut Rng64, fan: &Fan, bound: i64) -> Option<LatticeVector> {
    let n = fan.rank();
    for _ in 0..200 {
        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        let v = lv(&x);
        if v.is_zero() || v.content() != BigInt::from(1) {
            continue;
        }
        if fan.support_contains_point(&v) || fan.support_contains_point(&-&v) {
            continue;
        }
        return Some(v);
    }
    None
}

#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub seed: u64,
    pub fan: Fan,
    pub action: LatticeVector,
}

/// `count` random cobordisms of rank 2 to 4, reproducible from `seed`.
pub fn cobordism_suite(seed: u64, count: usize) -> Vec<SuiteCase> {
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let case_seed = seed.wrapping_mul(1_000_003).wrapping_add(k);
        k += 1;
        let mut r = rng(case_seed);
        let n = [2, 3, 3, 4][r.gen_range(0..4)];
        let fan = random_smooth_fan(&mut r, n);
        if let Some(action) = random_action(&mut r, &fan, 3) {
            out.push(SuiteCase { seed: case_seed, fan, action });
        }
    }
    out
}

/// `count` random smooth full-dimensional charts with an action, rank 2 to 4.
pub fn chart_suite(seed: u64, count: usize) -> Vec<(Cone, LatticeVector)> {
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let mut r = rng(seed.wrapping_mul(7_919).wrapping_add(k));
        k += 1;
        let n = [2, 3, 3, 3, 4][r.gen_range(0..5)];
        let sigma = random_smooth_cone(&mut r, n);
        let fan = Fan::from_cone(sigma.clone()).unwrap();
        if let Some(a) = random_action(&mut r, &fan, 3) {
            out.push((sigma, a));
        }
    }
    out
}

/// All integer points of `[-radius, radius]^n` satisfying `<m, g> >= 0` for
/// every generator `g`.
pub fn dual_points_in_box(gens: &[Vec<i64>], n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![-radius; n];
    loop {
        if gens.iter().all(|g| dot(&x, g) >= 0) {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] <= radius {
                break;
            }
            x[i] = -radius;
            i += 1;
        }
    }
}

/// Elements of `points` not of the form `p + s` with `p` another element and
/// `s` satisfying `<s, g> >= 0` for all generators.
pub fn minimal_elements(points: &[Vec<i64>], gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = points
        .iter()
        .filter(|m| {
            !points.iter().any(|p| {
                p != *m && {
                    let s: Vec<i64> = m.iter().zip(p).map(|(a, b)| a - b).collect();
                    gens.iter().all(|g| dot(&s, g) >= 0)
                }
            })
        })
        .cloned()
        .collect();
    out.sort();
    out
}

/// Irreducible nonzero lattice points of the pointed cone
/// `{x : <x, f> >= 0}` inside a box, by brute force.
pub fn brute_force_hilbert_basis(normals: &[Vec<i64>], n: usize, radius: i64) -> Vec<Vec<i64>> {
    let pts: Vec<Vec<i64>> = dual_points_in_box(normals, n, radius)
        .into_iter()
        .filter(|p| p.iter().any(|&x| x != 0))
        .collect();
    let set: std::collections::BTreeSet<Vec<i64>> = pts.iter().cloned().collect();
    let mut out: Vec<Vec<i64>> = pts
        .iter()
        .filter(|x| {
            !pts.iter().any(|y| {
                let z: Vec<i64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                y != *x && z.iter().any(|&t| t != 0) && set.contains(&z)
            })
        })
        .cloned()
        .collect();
    out.sort();
    out
}

/// Facet normals of the cone generated by `gens` (full-dimensional, rank 2
/// or 3), found by testing every hyperplane through `n - 1` generators.
pub fn brute_force_facets(gens: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    match n {
        2 => {
            for g in gens {
                candidates.push(vec![-g[1], g[0]]);
            }
        }
        3 => {
            for (i, a) in gens.iter().enumerate() {
                for b in &gens[i + 1..] {
                    candidates.push(vec![
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ]);
                }
            }
        }
        _ => panic!("brute-force facets only for rank 2 and 3"),
    }
    for c in candidates {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        for s in [1, -1] {
            let h: Vec<i64> = c.iter().map(|x| s * x).collect();
            if gens.iter().all(|g| dot(&h, g) >= 0) {
                let g = h.iter().fold(0i64, |acc, &x| gcd(acc, x.abs()));
                let h: Vec<i64> = h.iter().map(|x| x / g).collect();
                if !out.contains(&h) {
                    out.push(h);
                }
            }
        }
    }
    out.sort();
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return (a + b).abs();
    }
    (a / gcd(a, b) * b).abs()
}
