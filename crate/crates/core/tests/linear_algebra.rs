mod common;

use common::{random_matrix, rng, unimodular};
use nilk::ring_core::{
    determinant, hermite_column_basis, kernel_basis, smith_normal_form, solve, Integers, Matrix, PrimeField, Ring,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng as _;

fn check_smith<R: Ring>(ring: &R, m: &Matrix<R::Elem>) {
    let s = smith_normal_form(ring, m);
    assert_eq!(s.u.mul(ring, m).mul(ring, &s.v), s.d);
    assert!(ring.is_unit(&determinant(ring, &s.u)));
    assert!(ring.is_unit(&determinant(ring, &s.v)));
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j || i >= s.rank {
                assert!(ring.is_zero(s.d.get(i, j)), "off-pattern entry at ({i},{j})");
            }
        }
    }
    let f = s.invariant_factors();
    for w in f.windows(2) {
        assert!(ring.divides(&w[0], &w[1]));
    }
    assert!(f.iter().all(|x| !ring.is_zero(x) && ring.is_canonical(x)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_over_integers(seed in any::<u64>(), rows in 0usize..6, cols in 0usize..6) {
        let z = Integers;
        let m = random_matrix(&z, &mut rng(seed), rows, cols, 9);
        check_smith(&z, &m);
    }

    #[test]
    fn smith_form_over_f7(seed in any::<u64>(), rows in 0usize..6, cols in 0usize..6) {
        let f = PrimeField::new(7).unwrap();
        let m = random_matrix(&f, &mut rng(seed), rows, cols, 9);
        check_smith(&f, &m);
    }

    #[test]
    fn kernel_is_killed_and_complete(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..6) {
        let z = Integers;
        let mut r = rng(seed);
        // low rank on purpose so the kernel is usually nonzero
        let inner = r.gen_range(0..=rows.min(cols));
        let m = random_matrix(&z, &mut r, rows, inner, 3).mul(&z, &random_matrix(&z, &mut r, inner, cols, 3));
        let k = kernel_basis(&z, &m);
        prop_assert!(m.mul(&z, &k).is_zero(&z));
        let x = k.mul(&z, &random_matrix(&z, &mut r, k.cols(), 1, 5));
        prop_assert!(solve(&z, &k, &x).is_some());
        // an integer vector killed by m is integral over the kernel basis
        if let Some(w) = (0..cols).map(|j| Matrix::from_fn(cols, 1, |i, _| if i == j { z.one() } else { z.zero() }))
            .find(|e| m.mul(&z, e).is_zero(&z))
        {
            prop_assert!(solve(&z, &k, &w).is_some());
        }
    }

    #[test]
    fn hermite_basis_is_canonical(seed in any::<u64>(), rows in 1usize..5, cols in 0usize..6) {
        let z = Integers;
        let mut r = rng(seed);
        let m = random_matrix(&z, &mut r, rows, cols, 6);
        let h = hermite_column_basis(&z, &m);
        prop_assert_eq!(hermite_column_basis(&z, &h), h.clone());
        let (v, _) = unimodular(&z, &mut r, cols);
        prop_assert_eq!(hermite_column_basis(&z, &m.mul(&z, &v)), h);
    }

    #[test]
    fn solve_is_exact(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let z = Integers;
        let mut r = rng(seed);
        let m = random_matrix(&z, &mut r, rows, cols, 5);
        let b = m.mul(&z, &random_matrix(&z, &mut r, cols, 2, 5));
        let x = solve(&z, &m, &b).expect("b is in the image by construction");
        prop_assert_eq!(m.mul(&z, &x), b);
        let stray = random_matrix(&z, &mut r, rows, 1, 5);
        if let Some(y) = solve(&z, &m, &stray) {
            prop_assert_eq!(m.mul(&z, &y), stray);
        }
    }
}

#[test]
fn solve_with_empty_shapes() {
    let z = Integers;
    let m = Matrix::<BigInt>::zeros(&z, 3, 0);
    assert_eq!(solve(&z, &m, &Matrix::zeros(&z, 3, 1)), Some(Matrix::zeros(&z, 0, 1)));
    assert_eq!(solve(&z, &m, &Matrix::from_i64(&z, &[[1], [0], [0]])), None);
    let wide = Matrix::<BigInt>::zeros(&z, 0, 2);
    assert_eq!(solve(&z, &wide, &Matrix::zeros(&z, 0, 1)).map(|x| x.shape()), Some((2, 1)));
}

#[test]
fn smith_known_example() {
    let z = Integers;
    let m = Matrix::from_i64(&z, &[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let f: Vec<BigInt> = smith_normal_form(&z, &m).invariant_factors();
    assert_eq!(f, [2, 6, 12].map(BigInt::from));
}
