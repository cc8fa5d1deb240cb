use nalgebra::{DMatrix, DVector};
use optdoe::linalg::{cholesky, cholesky_solve, determinant, gram, symmetric_eigenvalues};
use proptest::prelude::*;

fn mat(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n * n)
}

proptest! {
    #[test]
    fn determinant_matches_nalgebra(n in 1usize..7, seed in mat(6)) {
        let a: Vec<f64> = seed[..n * n].to_vec();
        let ours = determinant(&a, n);
        let theirs = DMatrix::from_row_slice(n, n, &a).determinant();
        prop_assert!((ours - theirs).abs() <= 1e-9 * (1.0 + theirs.abs()), "{} vs {}", ours, theirs);
    }

    #[test]
    fn eigenvalues_match_nalgebra(n in 1usize..7, seed in mat(6)) {
        let b = &seed[..n * n];
        let a = gram(b, n, n);
        let mut theirs: Vec<f64> = DMatrix::from_row_slice(n, n, &a).symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let ours = symmetric_eigenvalues(&a, n);
        let scale = theirs.last().unwrap().abs().max(1.0);
        for (o, t) in ours.iter().zip(&theirs) {
            prop_assert!((o - t).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn cholesky_solve_matches_nalgebra(n in 1usize..7, seed in mat(6), rhs in prop::collection::vec(-10.0f64..10.0, 6)) {
        let b = &seed[..n * n];
        let mut a = gram(b, n, n);
        for i in 0..n {
            a[i * n + i] += 1.0;
        }
        let l = cholesky(&a, n).unwrap();
        let x = cholesky_solve(&l, n, &rhs[..n]);
        let m = DMatrix::from_row_slice(n, n, &a);
        let theirs = m.clone().lu().solve(&DVector::from_row_slice(&rhs[..n])).unwrap();
        for i in 0..n {
            prop_assert!((x[i] - theirs[i]).abs() <= 1e-8 * (1.0 + theirs[i].abs()));
        }
    }
}

#[test]
fn gram_matches_transpose_product() {
    let b = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let m = DMatrix::from_row_slice(3, 2, &b);
    let g = m.transpose() * &m;
    let ours = gram(&b, 3, 2);
    for r in 0..2 {
        for c in 0..2 {
            assert_eq!(ours[r * 2 + c], g[(r, c)]);
        }
    }
}
