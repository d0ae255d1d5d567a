//! Deterministic randomized corpus shared by the integration suites.
//!
//! 200 instances over dimensions 2..=4, mixing unstructured random draws
//! with engineered families whose verdicts are known by construction, so
//! implication checks are exercised on both sides.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qsuff::algebra::Subalgebra;
use qsuff::geometry::DensityMatrix;
use qsuff::{CMatrix, Complex64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5EED;

pub struct Instance {
    pub label: String,
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
    pub algebra: Subalgebra,
    /// Both states diagonal in the computational basis.
    pub classical: bool,
}

fn cval(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(
        2.0 * rng.random::<f64>() - 1.0,
        2.0 * rng.random::<f64>() - 1.0,
    )
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| cval(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let a = random_matrix(rng, dim);
    (&a + a.adjoint()).scale(0.5)
}

pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    random_matrix(rng, dim).qr().q()
}

/// Strictly positive weights summing to one, bounded away from zero.
pub fn random_spectrum(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..dim).map(|_| 0.1 + 0.9 * rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let u = random_unitary(rng, dim);
    let spectrum = random_spectrum(rng, dim);
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        spectrum.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    let m = &u * diag * u.adjoint();
    let m = (&m + m.adjoint()).scale(0.5);
    DensityMatrix::new(m).expect("congruence of a positive diagonal is a state")
}

pub fn diagonal_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    DensityMatrix::from_diagonal(&random_spectrum(rng, dim)).unwrap()
}

fn state_with_basis(u: &CMatrix, spectrum: &[f64]) -> DensityMatrix {
    let dim = spectrum.len();
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        spectrum.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    let m = u * diag * u.adjoint();
    let m = (&m + m.adjoint()).scale(0.5);
    DensityMatrix::new(m).unwrap()
}

/// Diagonal subalgebra of the coarse partition `partition[i] = block id`.
pub fn partition_algebra(partition: &[usize]) -> Subalgebra {
    let dim = partition.len();
    let mut gen = CMatrix::zeros(dim, dim);
    for (i, &b) in partition.iter().enumerate() {
        gen[(i, i)] = Complex64::new(b as f64 + 1.0, 0.0);
    }
    Subalgebra::close_generators(&[gen], None).unwrap()
}

/// Diagonal pair whose likelihood ratio is constant on every block, which
/// makes the partition algebra carry all the distinguishing information.
pub fn classical_sufficient_pair(
    rng: &mut ChaCha8Rng,
    partition: &[usize],
) -> (DensityMatrix, DensityMatrix) {
    let dim = partition.len();
    let p = random_spectrum(rng, dim);
    let blocks = partition.iter().max().unwrap() + 1;
    let ratios: Vec<f64> = (0..blocks).map(|_| 0.2 + 1.8 * rng.random::<f64>()).collect();
    let mut q: Vec<f64> = (0..dim).map(|i| ratios[partition[i]] * p[i]).collect();
    let total: f64 = q.iter().sum();
    for v in &mut q {
        *v /= total;
    }
    (
        DensityMatrix::from_diagonal(&p).unwrap(),
        DensityMatrix::from_diagonal(&q).unwrap(),
    )
}

/// The two-block algebra on C⁴: matrices `diag(Y, Y)` with `Y` any 2×2
/// block, generated by the block-repeated flip and sign generators.
pub fn two_block_algebra() -> Subalgebra {
    let mut flip = CMatrix::zeros(4, 4);
    flip[(0, 1)] = Complex64::new(1.0, 0.0);
    flip[(1, 0)] = Complex64::new(1.0, 0.0);
    flip[(2, 3)] = Complex64::new(1.0, 0.0);
    flip[(3, 2)] = Complex64::new(1.0, 0.0);
    let mut sign = CMatrix::zeros(4, 4);
    sign[(0, 0)] = Complex64::new(1.0, 0.0);
    sign[(1, 1)] = Complex64::new(-1.0, 0.0);
    sign[(2, 2)] = Complex64::new(1.0, 0.0);
    sign[(3, 3)] = Complex64::new(-1.0, 0.0);
    Subalgebra::close_generators(&[flip, sign], None).unwrap()
}

/// `diag(b1, b2)` as a state; blocks must already sum to unit trace.
pub fn block_state(b1: &CMatrix, b2: &CMatrix) -> DensityMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = b1[(i, j)];
            m[(i + 2, j + 2)] = b2[(i, j)];
        }
    }
    DensityMatrix::new(m).unwrap()
}

/// Random 2×2 positive block with the requested trace.
pub fn random_block(rng: &mut ChaCha8Rng, trace: f64) -> CMatrix {
    let u = random_unitary(rng, 2);
    let a = 0.1 + 0.9 * rng.random::<f64>();
    let b = 0.1 + 0.9 * rng.random::<f64>();
    let scale = trace / (a + b);
    let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![
        Complex64::new(a * scale, 0.0),
        Complex64::new(b * scale, 0.0),
    ]));
    let m = &u * diag * u.adjoint();
    (&m + m.adjoint()).scale(0.5)
}

pub fn corpus() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out: Vec<Instance> = Vec::with_capacity(200);

    // unstructured: random algebras of 1-3 generators, random states
    for i in 0..50 {
        let dim = 2 + i % 3;
        let count = 1 + i % 3;
        let gens: Vec<CMatrix> = (0..count).map(|_| random_matrix(&mut rng, dim)).collect();
        out.push(Instance {
            label: format!("general-{i}-d{dim}"),
            rho0: random_state(&mut rng, dim),
            rho1: random_state(&mut rng, dim),
            algebra: Subalgebra::close_generators(&gens, None).unwrap(),
            classical: false,
        });
    }

    // commutative algebras from one Hermitian generator
    for i in 0..30 {
        let dim = 2 + i % 3;
        let gen = random_hermitian(&mut rng, dim);
        out.push(Instance {
            label: format!("hermitian-gen-{i}-d{dim}"),
            rho0: random_state(&mut rng, dim),
            rho1: random_state(&mut rng, dim),
            algebra: Subalgebra::close_generators(&[gen], None).unwrap(),
            classical: false,
        });
    }

    // full diagonal algebra, unstructured states
    for i in 0..30 {
        let dim = 2 + i % 3;
        out.push(Instance {
            label: format!("diagonal-alg-{i}-d{dim}"),
            rho0: random_state(&mut rng, dim),
            rho1: random_state(&mut rng, dim),
            algebra: Subalgebra::diagonal(dim),
            classical: false,
        });
    }

    // classical: simultaneously diagonal pairs
    for i in 0..30 {
        if i < 10 {
            // coarse partition with block-constant ratio: sufficient
            let partition: &[usize] = if i % 2 == 0 { &[0, 0, 1] } else { &[0, 0, 1, 1] };
            let (rho0, rho1) = classical_sufficient_pair(&mut rng, partition);
            out.push(Instance {
                label: format!("classical-suff-{i}"),
                rho0,
                rho1,
                algebra: partition_algebra(partition),
                classical: true,
            });
        } else if i < 20 {
            // coarse partition, generic ratios: insufficient
            let partition: &[usize] = if i % 2 == 0 { &[0, 0, 1] } else { &[0, 1, 1, 0] };
            let dim = partition.len();
            out.push(Instance {
                label: format!("classical-coarse-{i}"),
                rho0: diagonal_state(&mut rng, dim),
                rho1: diagonal_state(&mut rng, dim),
                algebra: partition_algebra(partition),
                classical: true,
            });
        } else {
            // full diagonal algebra: diagonal pairs are always sufficient
            let dim = 2 + i % 3;
            out.push(Instance {
                label: format!("classical-fine-{i}-d{dim}"),
                rho0: diagonal_state(&mut rng, dim),
                rho1: diagonal_state(&mut rng, dim),
                algebra: Subalgebra::diagonal(dim),
                classical: true,
            });
        }
    }

    // two-block C⁴ algebra
    for i in 0..20 {
        if i < 10 {
            // proportional blocks share the ratio: sufficient
            let c = 0.3 + rng.random::<f64>();
            let r1 = random_block(&mut rng, 1.0 / (1.0 + c));
            let s1 = random_block(&mut rng, 1.0 / (1.0 + c));
            let r2 = r1.scale(c);
            let s2 = s1.scale(c);
            out.push(Instance {
                label: format!("block-suff-{i}"),
                rho0: block_state(&r1, &r2),
                rho1: block_state(&s1, &s2),
                algebra: two_block_algebra(),
                classical: false,
            });
        } else {
            let t0 = 0.2 + 0.6 * rng.random::<f64>();
            let t1 = 0.2 + 0.6 * rng.random::<f64>();
            let rho0 = block_state(
                &random_block(&mut rng, t0),
                &random_block(&mut rng, 1.0 - t0),
            );
            let rho1 = block_state(
                &random_block(&mut rng, t1),
                &random_block(&mut rng, 1.0 - t1),
            );
            out.push(Instance {
                label: format!("block-generic-{i}"),
                rho0,
                rho1,
                algebra: two_block_algebra(),
                classical: false,
            });
        }
    }

    // commuting state pairs (common eigenbasis), random algebras
    for i in 0..20 {
        let dim = 2 + i % 3;
        let u = random_unitary(&mut rng, dim);
        let rho0 = state_with_basis(&u, &random_spectrum(&mut rng, dim));
        let rho1 = state_with_basis(&u, &random_spectrum(&mut rng, dim));
        let count = 1 + i % 2;
        let gens: Vec<CMatrix> = (0..count).map(|_| random_matrix(&mut rng, dim)).collect();
        out.push(Instance {
            label: format!("commuting-pair-{i}-d{dim}"),
            rho0,
            rho1,
            algebra: Subalgebra::close_generators(&gens, None).unwrap(),
            classical: false,
        });
    }

    // trivial algebra: only the equal pair is sufficient
    for i in 0..10 {
        let dim = 2 + i % 3;
        let rho0 = random_state(&mut rng, dim);
        let rho1 = if i < 5 {
            rho0.clone()
        } else {
            random_state(&mut rng, dim)
        };
        out.push(Instance {
            label: format!("trivial-alg-{i}-d{dim}"),
            rho0,
            rho1,
            algebra: Subalgebra::trivial(dim),
            classical: false,
        });
    }

    // full matrix algebra: restriction loses nothing
    for i in 0..10 {
        let dim = 2 + i % 3;
        out.push(Instance {
            label: format!("full-alg-{i}-d{dim}"),
            rho0: random_state(&mut rng, dim),
            rho1: random_state(&mut rng, dim),
            algebra: Subalgebra::full(dim),
            classical: false,
        });
    }

    assert_eq!(out.len(), 200);
    out
}
