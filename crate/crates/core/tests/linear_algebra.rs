use cartanvirt_core::bilinear::{isometry_residual, split_tangent_normal};
use cartanvirt_core::immersion::random_isometry;
use cartanvirt_core::linalg::{max_abs, max_abs_vec, null_space, pinv, rank, singular_values};
use cartanvirt_core::{BilinearForm, Matrix, Subspace, Vector};
use proptest::prelude::*;

const N: usize = 4;

fn matrix(n: usize, m: usize, data: &[f64]) -> Matrix {
    Matrix::from_row_slice(n, m, &data[..n * m])
}

/// `Pᵀ·diag(signs)·P` with `P = I + 0.3·A`, which is invertible for `|A_ij| ≤ 1`.
fn congruent_form(signs: &[f64], data: &[f64]) -> (BilinearForm, Matrix) {
    let n = signs.len();
    let p = Matrix::identity(n, n) + matrix(n, n, data) * (0.3 / n as f64);
    let d = Matrix::from_diagonal(&Vector::from_column_slice(signs));
    let gram = p.transpose() * d * &p;
    let gram = (&gram + gram.transpose()) * 0.5;
    (BilinearForm::new(gram).unwrap(), p)
}

fn signs_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::bool::ANY, N).prop_map(|v| v.into_iter().map(|b| if b { 1.0 } else { -1.0 }).collect())
}

fn entries(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluate_is_symmetric(signs in signs_strategy(), p in entries(N * N), u in entries(N), v in entries(N)) {
        let (form, _) = congruent_form(&signs, &p);
        let (u, v) = (Vector::from_vec(u), Vector::from_vec(v));
        prop_assert_eq!(form.evaluate(&u, &v).unwrap(), form.evaluate(&v, &u).unwrap());
    }

    #[test]
    fn signature_is_a_congruence_invariant(signs in signs_strategy(), p in entries(N * N), q in entries(N * N)) {
        let (form, _) = congruent_form(&signs, &p);
        let expected = signs.iter().filter(|&&s| s > 0.0).count();
        prop_assert_eq!(form.signature().pair(), (expected, N - expected));
        let r = Matrix::identity(N, N) + matrix(N, N, &q) * 0.2;
        let moved = r.transpose() * form.gram() * &r;
        let moved = BilinearForm::new((&moved + moved.transpose()) * 0.5).unwrap();
        prop_assert_eq!(moved.signature(), form.signature());
    }

    #[test]
    fn split_reassembles_and_is_idempotent(x in entries(N), t in entries(2 * N)) {
        // Lorentz form with a spacelike tangent plane inside the first three axes.
        let (form, _) = congruent_form(&[1.0, 1.0, 1.0, -1.0], &[0.0; N * N]);
        let t1 = Vector::from_vec(vec![1.0, 0.3 * t[0], 0.3 * t[1], 0.3 * t[2]]);
        let t2 = Vector::from_vec(vec![0.3 * t[3], 1.0, 0.3 * t[4], 0.3 * t[5]]);
        let tangent = Subspace::new(N, vec![t1.clone(), t2.clone()]).unwrap();
        let x = Vector::from_vec(x);
        let (xt, xn) = split_tangent_normal(&form, &tangent, &x).unwrap();
        prop_assert!(max_abs_vec(&(&xt + &xn - &x)) < 1e-12);
        let (tt, tn) = split_tangent_normal(&form, &tangent, &xt).unwrap();
        prop_assert!(max_abs_vec(&(tt - &xt)) < 1e-12);
        prop_assert!(max_abs_vec(&tn) < 1e-12);
        for b in [&t1, &t2] {
            prop_assert!(form.evaluate(&xn, b).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn isometry_residual_is_invariant_under_composition(signs in signs_strategy(), p in entries(N * N), seed in any::<u64>()) {
        let (form, _) = congruent_form(&signs, &p);
        let a = random_isometry(&form, seed, 0.3);
        let b = random_isometry(&form, seed.wrapping_add(1), 0.3);
        prop_assert!(isometry_residual(&form, &form, &a).unwrap() < 1e-10);
        let l = Matrix::identity(N, N) * 1.1;
        let base = isometry_residual(&form, &form, &l).unwrap();
        let composed = isometry_residual(&form, &form, &(&a * &l)).unwrap();
        prop_assert!((base - composed).abs() < 1e-9 * (1.0 + base));
        prop_assert!(isometry_residual(&form, &form, &(&a * &b)).unwrap() < 1e-10);
    }

    #[test]
    fn pinv_satisfies_penrose_conditions(rows in 1usize..7, cols in 1usize..7, data in entries(36), drop in 0usize..3) {
        let mut a = matrix(rows, cols, &data);
        // force rank deficiency by copying columns
        for k in 0..drop.min(cols.saturating_sub(1)) {
            let c = a.column(0).into_owned() * (k as f64 + 0.5);
            a.set_column(cols - 1 - k, &c);
        }
        let p = pinv(&a);
        let scale = 1.0 + max_abs(&a) * max_abs(&p);
        prop_assert!(max_abs(&(&a * &p * &a - &a)) < 1e-10 * scale);
        prop_assert!(max_abs(&(&p * &a * &p - &p)) < 1e-10 * scale * (1.0 + max_abs(&p)));
        let ap = &a * &p;
        let pa = &p * &a;
        prop_assert!(max_abs(&(&ap - ap.transpose())) < 1e-10 * scale);
        prop_assert!(max_abs(&(&pa - pa.transpose())) < 1e-10 * scale);
    }

    #[test]
    fn singular_values_match_gram_eigenvalues(rows in 1usize..7, cols in 1usize..7, data in entries(36)) {
        let a = matrix(rows, cols, &data);
        let s = singular_values(&a);
        let small = if rows >= cols { a.transpose() * &a } else { &a * a.transpose() };
        let mut ev: Vec<f64> = small.symmetric_eigenvalues().iter().map(|v| v.max(0.0).sqrt()).collect();
        ev.sort_by(|x, y| y.total_cmp(x));
        prop_assert_eq!(s.len(), rows.min(cols));
        for (x, y) in s.iter().zip(ev.iter()) {
            prop_assert!((x - y).abs() < 1e-7 * (1.0 + y));
        }
    }

    #[test]
    fn null_space_is_orthonormal_kernel(rows in 1usize..6, cols in 1usize..7, data in entries(36)) {
        let a = matrix(rows, cols, &data);
        let k = null_space(&a);
        prop_assert_eq!(k.ncols() + rank(&a), cols);
        if k.ncols() > 0 {
            prop_assert!(max_abs(&(&a * &k)) < 1e-10);
            let i = Matrix::identity(k.ncols(), k.ncols());
            prop_assert!(max_abs(&(k.transpose() * &k - i)) < 1e-10);
        }
    }
}

#[test]
fn singular_values_of_known_matrix() {
    // [[3,0],[4,5]] has AᵀA = [[25,20],[20,25]], eigenvalues 45 and 5.
    let a = Matrix::from_row_slice(2, 2, &[3.0, 0.0, 4.0, 5.0]);
    let s = singular_values(&a);
    assert!((s[0] - 45f64.sqrt()).abs() < 1e-13);
    assert!((s[1] - 5f64.sqrt()).abs() < 1e-13);
}
