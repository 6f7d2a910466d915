//! Exact integer linear algebra: dense matrices, Hermite/Smith normal forms
//! with transforms, lattice arithmetic and subquotient presentations.

mod exact;
mod mat;
mod subquotient;

pub use exact::{
    col_hnf, kernel_basis, lattice_contains, lattice_eq, lattice_hnf, lattice_intersect,
    preimage_basis, row_hnf, snf, ColHnf, RowHnf, Snf,
};
pub use mat::{mat_mul, mat_vec, vec_add, vec_scale, vec_sub, GMat, IntMat};
pub use subquotient::{solve_mod, solve_mod_mat, GroupShape, Subquotient};

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMat {
        IntMat::from_rows(rows)
    }

    #[test]
    fn row_hnf_reconstructs() {
        let a = m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let h = row_hnf(&a, true).unwrap();
        assert_eq!(mat_mul(&h.u, &a).unwrap(), h.h);
        // pivots strictly increase in both coordinates
        for w in h.pivots.windows(2) {
            assert!(w[0].0 < w[1].0 && w[0].1 < w[1].1);
        }
    }

    #[test]
    fn snf_of_classic_example() {
        let a = m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = snf(&a).unwrap();
        assert_eq!(s.d, vec![2, 2, 156]);
        let lhs = mat_mul(&mat_mul(&s.u, &a).unwrap(), &s.v).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.d[i] } else { 0 };
                assert_eq!(*lhs.get(i, j), want);
            }
        }
        assert_eq!(mat_mul(&s.u, &s.uinv).unwrap(), IntMat::identity(3));
        assert_eq!(mat_mul(&s.v, &s.vinv).unwrap(), IntMat::identity(3));
    }

    #[test]
    fn kernel_of_sum_map() {
        // x + y + z = 0 over Z^3: kernel of rank 2.
        let a = m(vec![vec![1, 1, 1]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 2);
        for c in 0..2 {
            let v = k.col_vec(c);
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn solve_and_membership() {
        let a = m(vec![vec![2, 0], vec![0, 3]]);
        let h = col_hnf(&a).unwrap();
        let x = h.solve(&[4, -9]).unwrap().unwrap();
        assert_eq!(mat_vec(&a, &x).unwrap(), vec![4, -9]);
        assert!(h.solve(&[1, 0]).unwrap().is_none());
    }

    #[test]
    fn lattice_operations() {
        let a = m(vec![vec![2, 0], vec![0, 2]]);
        let b = m(vec![vec![2, 2], vec![2, -2]]);
        assert!(!lattice_eq(&a, &b).unwrap());
        let isect = lattice_intersect(&a, &b).unwrap();
        // span{(2,2),(2,-2)} ∩ 2Z^2 = span{(2,2),(2,-2)} itself has index 2 in 2Z^2
        assert!(lattice_eq(&isect, &b).unwrap());
        let pre = preimage_basis(&m(vec![vec![1, 0], vec![0, 1]]), &a).unwrap();
        assert!(lattice_eq(&pre, &a).unwrap());
    }

    #[test]
    fn subquotient_z_mod_2z_plus_free() {
        // Z^3 ⊇ Z = span{e1, e2}, B = span{2 e1}: quotient = Z/2 + Z.
        let cycles = m(vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
        let bdry = m(vec![vec![2], vec![0], vec![0]]);
        let sq = Subquotient::new(3, &cycles, &bdry).unwrap();
        assert_eq!(sq.invariant_factors(), vec![2]);
        assert_eq!(sq.free_rank(), 1);
        let c = sq.coords(&[3, 5, 0]).unwrap().unwrap();
        let rep = sq.rep(&c).unwrap();
        let c2 = sq.coords(&rep).unwrap().unwrap();
        assert_eq!(c, c2);
        assert!(sq.coords(&[0, 0, 1]).unwrap().is_none());
        assert!(sq.is_zero_class(&[2, 0, 0]).unwrap());
        assert!(!sq.is_zero_class(&[1, 0, 0]).unwrap());
    }

    #[test]
    fn solve_mod_lattice() {
        // 2x ≡ 4 mod 6 has solution x = 2 (also x = 5).
        let a = m(vec![vec![2]]);
        let rel = m(vec![vec![6]]);
        let x = solve_mod(&a, &rel, &[4]).unwrap().unwrap();
        assert_eq!((2 * x[0]).rem_euclid(6), 4);
        // 2x ≡ 3 mod 6 has none.
        assert!(solve_mod(&a, &rel, &[3]).unwrap().is_none());
    }

    #[test]
    fn escalation_handles_large_intermediates() {
        // A matrix engineered with large entries multiplying up past i64 in
        // na\u{ef}ve elimination still yields a correct HNF via BigInt retry.
        let big = 3_000_000_000i64;
        let a = m(vec![vec![big, big - 1], vec![big - 1, big - 2]]);
        let h = row_hnf(&a, true).unwrap();
        assert_eq!(mat_mul(&h.u, &a).unwrap(), h.h);
    }
}
