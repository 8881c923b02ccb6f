use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use torific_core::lattice::{
    hermite_normal_form, quotient_by, rational_rank, smith_normal_form, solve_integer, LatticeMatrix,
    LatticeVector,
};

fn matrix() -> impl Strategy<Value = LatticeMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |rows| {
            let rows: Vec<&[i64]> = rows.iter().map(|x| x.as_slice()).collect();
            LatticeMatrix::from_i64_rows(&rows)
        })
    })
}

fn primitive_vector() -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-5i64..=5, 2..=5)
        .prop_map(|x| LatticeVector::from_i64s(&x))
        .prop_filter("primitive", |v| !v.is_zero() && v.content().is_one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(s.u.determinant().abs(), BigInt::one());
        prop_assert_eq!(s.v.determinant().abs(), BigInt::one());
        prop_assert_eq!(s.u.mul(&s.u_inv), LatticeMatrix::identity(m.nrows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), LatticeMatrix::identity(m.ncols()));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        for w in f.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert_eq!(f.len(), rational_rank(&m.rows(), m.ncols()));
    }

    #[test]
    fn hermite_form_spans_the_same_lattice(m in matrix()) {
        let h = hermite_normal_form(&m.rows(), m.ncols());
        prop_assert_eq!(h.len(), rational_rank(&m.rows(), m.ncols()));
        if !h.is_empty() {
            // every original row is an integer combination of the basis and back
            let ht = LatticeMatrix::from_rows(&h, m.ncols()).transpose();
            for row in m.rows() {
                prop_assert!(solve_integer(&ht, &row).is_some());
            }
            let mt = m.transpose();
            for row in &h {
                prop_assert!(solve_integer(&mt, row).is_some());
            }
        }
        prop_assert_eq!(hermite_normal_form(&h, m.ncols()), h);
    }

    #[test]
    fn solutions_solve(m in matrix(), x in prop::collection::vec(-4i64..=4, 4)) {
        let x = LatticeVector::from_i64s(&x[..m.ncols()]);
        let b = m.mul_vec(&x);
        let y = solve_integer(&m, &b).expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn quotient_kills_the_action_and_splits(a in primitive_vector()) {
        let q = quotient_by(&a).unwrap();
        prop_assert_eq!(q.target_rank(), a.rank() - 1);
        prop_assert!(q.project(&a).is_zero());
        prop_assert_eq!(q.projection().mul(q.section()), LatticeMatrix::identity(a.rank() - 1));
        // the projection is onto: the unit vectors of the target lift
        for i in 0..a.rank() - 1 {
            let e = LatticeVector::unit(a.rank() - 1, i);
            prop_assert_eq!(q.project(&q.lift(&e)), e);
        }
    }

    #[test]
    fn non_primitive_actions_are_rejected(a in primitive_vector(), k in 2i64..=4) {
        prop_assert!(quotient_by(&a.scale(&BigInt::from(k))).is_err());
    }
}

#[test]
fn zero_matrix_has_no_invariant_factors() {
    let m = LatticeMatrix::zeros(2, 3);
    let s = smith_normal_form(&m);
    assert!(s.invariant_factors().is_empty());
    assert!(s.d.rows().iter().all(|r| r.entries().iter().all(Zero::is_zero)));
}
