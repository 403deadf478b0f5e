//! Property tests for the integer linear algebra.

use irrq::linalg::{
    hermite_normal_form, is_torsion_free_quotient, rank, rational_kernel, saturate, smith_normal_form,
};
use irrq::{IntMatrix, Lattice};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |rows| IntMatrix::from_i64(c, &rows))
    })
}

/// A unimodular `k x k` matrix from a list of elementary operations.
fn unimodular(k: usize, ops: &[(usize, usize, i64, bool)]) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    for &(a, b, f, swap) in ops {
        let (a, b) = (a % k, b % k);
        if swap {
            rows.swap(a, b);
        } else if a != b {
            for j in 0..k {
                rows[a][j] += f * rows[b][j];
            }
        } else {
            rows[a].iter_mut().for_each(|x| *x = -*x);
        }
    }
    IntMatrix::from_i64(k, &rows)
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64, bool)>> {
    prop::collection::vec((0usize..8, 0usize..8, -2i64..=2, any::<bool>()), 0..8)
}

proptest! {
    #[test]
    fn hnf_invariant_under_row_mixing(m in matrix(), ops in ops()) {
        let u = unimodular(m.rows(), &ops);
        prop_assert_eq!(hermite_normal_form(&u.mul(&m)), hermite_normal_form(&m));
    }

    #[test]
    fn snf_invariant_under_two_sided_mixing(m in matrix(), row_ops in ops(), col_ops in ops()) {
        let u = unimodular(m.rows(), &row_ops);
        let v = unimodular(m.cols(), &col_ops);
        prop_assert_eq!(smith_normal_form(&u.mul(&m).mul(&v)), smith_normal_form(&m));
    }

    #[test]
    fn snf_divisibility_chain_and_rank(m in matrix()) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.rank, rank(&m));
        prop_assert!(snf.elementary_divisors.iter().all(|d| d.is_positive()));
        for w in snf.elementary_divisors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn hnf_shape(m in matrix()) {
        let h = hermite_normal_form(&m);
        prop_assert_eq!(h.rows(), rank(&m));
        let mut last = None;
        for r in 0..h.rows() {
            let p = (0..h.cols()).find(|&c| !h.get(r, c).is_zero()).unwrap();
            prop_assert!(h.get(r, p).is_positive());
            prop_assert!(last.is_none_or(|l| p > l));
            for above in 0..r {
                prop_assert!(!h.get(above, p).is_negative() && h.get(above, p) < h.get(r, p));
            }
            last = Some(p);
        }
    }

    #[test]
    fn kernel_annihilates_and_has_full_dimension(m in matrix()) {
        let k = rational_kernel(&m);
        prop_assert_eq!(k.rows(), m.cols() - rank(&m));
        let prod = m.mul(&k.transpose());
        for r in 0..prod.rows() {
            prop_assert!(prod.row(r).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(rank(&k), k.rows());
    }

    #[test]
    fn saturation_is_idempotent_and_extensive(m in matrix()) {
        let l = Lattice::from_generators(&m);
        let s = saturate(&l);
        prop_assert!(s.contains_lattice(&l));
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert_eq!(saturate(&s), s.clone());
        prop_assert_eq!(is_torsion_free_quotient(&l), s == l);
        prop_assert!(is_torsion_free_quotient(&s));
    }

    #[test]
    fn saturation_contains_rational_multiples(m in matrix(), k in 2i64..5) {
        // If k*v is in L then v is in the saturation.
        let l = Lattice::from_generators(&m);
        let s = saturate(&l);
        for r in 0..l.basis().rows() {
            let row = l.basis().row(r);
            if row.iter().all(|x| (x % BigInt::from(k)).is_zero()) {
                let v: Vec<BigInt> = row.iter().map(|x| x / BigInt::from(k)).collect();
                prop_assert!(s.contains(&v));
            }
        }
        let scaled = IntMatrix::from_rows(m.cols(), m.row_vecs().into_iter().map(|r| r.into_iter().map(|x| x * k).collect()).collect());
        prop_assert_eq!(saturate(&Lattice::from_generators(&scaled)), s);
    }
}
