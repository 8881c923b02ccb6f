use rand::Rng;
use torific_core::fans::{fans_equal, Cone, Fan, FanError};
use torific_testkit::checks::{barycentric_stability, desingularization, dual_involution};
use torific_testkit::{cobordism_suite, lv, random_unimodular, rng};

#[test]
fn duals_are_involutive_under_sampling() {
    dual_involution(31, 25, 400).unwrap();
}

#[test]
fn resolutions_are_smooth_and_replay() {
    desingularization(32, 25).unwrap();
}

#[test]
fn barycentric_subdivision_is_stable_under_permutations() {
    barycentric_stability(2).unwrap();
    barycentric_stability(3).unwrap();
}

#[test]
fn suite_fans_are_valid_and_smooth() {
    for case in cobordism_suite(33, 40) {
        case.fan.validate().unwrap();
        assert!(case.fan.is_smooth());
        assert!(case.fan.is_face_closed());
    }
}

/// Two cones glued along a facet, then the second one tilted so that it
/// pokes into the first through a two-dimensional face.
#[test]
fn tilted_neighbours_are_rejected() {
    let mut r = rng(34);
    for _ in 0..30 {
        let n = r.gen_range(2..=4);
        let rows = random_unimodular(&mut r, n, 2 * n, 2);
        let first = Cone::new(n, rows.iter().map(|x| lv(x))).unwrap();
        let far: Vec<i64> = rows[n - 1].iter().map(|x| -x).collect();
        let mut second: Vec<Vec<i64>> = rows[..n - 1].to_vec();
        second.push(far);
        assert!(Fan::new(n, [first.clone(), Cone::new(n, second.iter().map(|x| lv(x))).unwrap()]).is_ok());
        // v_1 + v_n lies in the relative interior of a face of the first cone
        second[0] = rows[0].iter().zip(&rows[n - 1]).map(|(a, b)| a + b).collect();
        let tilted = Cone::new(n, second.iter().map(|x| lv(x))).unwrap();
        match Fan::new(n, [first, tilted]) {
            Err(FanError::Incompatible(..)) => {}
            other => panic!("tilted pair accepted: {other:?}"),
        }
    }
}

#[test]
fn star_subdivision_at_an_existing_ray_is_the_identity() {
    for case in cobordism_suite(35, 20) {
        let ray = case.fan.rays()[0].clone();
        assert!(fans_equal(&case.fan.star_subdivision(&ray).unwrap(), &case.fan));
    }
}

#[test]
fn star_subdivisions_refine() {
    for case in cobordism_suite(36, 20) {
        let two: Vec<Cone> = case.fan.cones().iter().filter(|c| c.dim() >= 2).cloned().collect();
        let Some(c) = two.first() else { continue };
        let center = c.barycenter().unwrap();
        let fine = case.fan.star_subdivision(&center).unwrap();
        assert!(fine.has_ray(&center));
        assert!(fine.is_refinement(&case.fan).is_ok());
        assert!(case.fan.is_refinement(&fine).is_err());
    }
}
