//! Property tests over mechanically generated matrices: norm axioms,
//! spectral reconstruction, function-calculus inverses, split structure,
//! clamped error probabilities, and file-format round trips.

mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use qsuff::geometry::DensityMatrix;
use qsuff::hermitian::{eig_hermitian, matrix_function, spectral_split, trace_norm};
use qsuff::problem::{Options, ProblemFile};
use qsuff::testing::{bayes_error, error_pair, TestOperator};
use qsuff::{CMatrix, Complex64};

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn square(dim: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(complex_entry(), dim * dim)
        .prop_map(move |v| CMatrix::from_fn(dim, dim, |i, j| v[i * dim + j]))
}

fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    square(dim).prop_map(|a| (&a + a.adjoint()).scale(0.5))
}

fn any_hermitian() -> impl Strategy<Value = CMatrix> {
    (2usize..=4).prop_flat_map(hermitian)
}

fn any_hermitian_pair() -> impl Strategy<Value = (CMatrix, CMatrix)> {
    (2usize..=4).prop_flat_map(|d| (hermitian(d), hermitian(d)))
}

fn spectrum(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.1..1.0f64, dim).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / total).collect()
    })
}

fn state(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    (square(dim), spectrum(dim)).prop_map(move |(a, probs)| {
        let u = a.qr().q();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            probs.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        let m = &u * diag * u.adjoint();
        DensityMatrix::new((&m + m.adjoint()).scale(0.5)).unwrap()
    })
}

fn state_pair_and_test() -> impl Strategy<Value = (DensityMatrix, DensityMatrix, CMatrix)> {
    (2usize..=4).prop_flat_map(|d| (state(d), state(d), hermitian(d)))
}

proptest! {
    #[test]
    fn trace_norm_satisfies_triangle_inequality((a, b) in any_hermitian_pair()) {
        let lhs = trace_norm(&(&a + &b));
        let rhs = trace_norm(&a) + trace_norm(&b);
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn trace_norm_is_unitarily_invariant((a, b) in any_hermitian_pair()) {
        let u = b.qr().q();
        let conjugated = &u * &a * u.adjoint();
        let before = trace_norm(&a);
        let after = trace_norm(&conjugated);
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before));
    }

    #[test]
    fn log_then_exp_recovers_positive_matrices(a in any_hermitian()) {
        let dim = a.nrows();
        let shift = 0.2 + eig_hermitian(&a, None).unwrap().min_eigenvalue().abs();
        let p = &a + CMatrix::identity(dim, dim).scale(shift);
        let ln = matrix_function(&p, f64::ln).unwrap();
        let back = matrix_function(&ln, f64::exp).unwrap();
        let dev = (&back - &p).norm() / p.norm();
        prop_assert!(dev < 1e-9, "deviation {dev}");
    }

    #[test]
    fn spectral_reconstruction_is_faithful(a in any_hermitian()) {
        let dec = eig_hermitian(&a, None).unwrap();
        let dev = (&dec.reconstruct() - &a).norm();
        prop_assert!(dev <= 1e-10 * (1.0 + a.norm()), "deviation {dev}");
    }

    #[test]
    fn spectral_split_parts_are_orthogonal(a in any_hermitian()) {
        let split = spectral_split(&a, None).unwrap();
        let dim = a.nrows();
        // the signed parts reassemble the matrix
        let dev = (&split.positive - &split.negative - &a).norm();
        prop_assert!(dev <= 1e-10 * (1.0 + a.norm()));
        // projections resolve the identity
        let sum = split.plus.matrix() + split.minus.matrix() + split.zero.matrix();
        prop_assert!((sum - CMatrix::identity(dim, dim)).norm() < 1e-9);
        prop_assert_eq!(split.plus.rank() + split.minus.rank() + split.zero.rank(), dim);
        // each signed part lives inside its own projection
        let leak = split.minus.matrix() * &split.positive;
        prop_assert!(leak.norm() <= 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn error_probabilities_are_clamped((rho0, rho1, h) in state_pair_and_test()) {
        let dim = h.nrows();
        let dec = eig_hermitian(&h, None).unwrap();
        let lo = dec.min_eigenvalue();
        let span = (dec.max_eigenvalue() - lo).max(1e-9);
        let m = (&h - CMatrix::identity(dim, dim).scale(lo)).scale(1.0 / span);
        let test = TestOperator::new(m, 1e-9).unwrap();
        let errs = error_pair(&test, &rho0, &rho1);
        prop_assert!((0.0..=1.0).contains(&errs.alpha));
        prop_assert!((0.0..=1.0).contains(&errs.beta));
    }

    #[test]
    fn weighted_error_is_bounded_by_the_blind_guess(
        (rho0, rho1, _) in state_pair_and_test(),
        lambda in 0.0..=1.0f64,
    ) {
        let err = bayes_error(&rho0, &rho1, lambda).unwrap();
        prop_assert!(err >= 0.0);
        prop_assert!(err <= lambda.min(1.0 - lambda) + 1e-12);
    }

    #[test]
    fn scaled_states_are_rejected((rho0, _, _) in state_pair_and_test()) {
        let err = DensityMatrix::new(rho0.matrix().scale(1.1));
        prop_assert!(err.is_err());
    }

    #[test]
    fn problem_files_round_trip(
        dim in 0usize..5,
        rho0 in proptest::collection::vec([-1e6..1e6f64, -1e6..1e6f64], 0..20),
        rho1 in proptest::collection::vec([-1e6..1e6f64, -1e6..1e6f64], 0..20),
        gens in proptest::collection::vec(
            proptest::collection::vec([-1e6..1e6f64, -1e6..1e6f64], 0..10),
            0..3,
        ),
        tol in 1e-12..1e-2f64,
        lambda_grid in 2usize..500,
        tensor_cap in 1usize..10_000,
        seed in proptest::num::u64::ANY,
    ) {
        let file = ProblemFile {
            dim,
            rho0,
            rho1,
            generators: gens,
            options: Options { tol, lambda_grid, tensor_cap, seed },
        };
        let round = ProblemFile::from_slice(file.to_json().as_bytes()).unwrap();
        prop_assert_eq!(file, round);
    }
}
