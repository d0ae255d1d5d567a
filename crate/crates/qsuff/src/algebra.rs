//! Unital *-subalgebras of the d×d complex matrices.
//!
//! A subalgebra is stored as a Hilbert–Schmidt-orthonormal basis of its
//! underlying subspace, built by closing a generator list under products and
//! adjoints. Because the subspace is unital and *-closed, the orthogonal
//! projection onto it in the Hilbert–Schmidt inner product is exactly the
//! trace-preserving conditional expectation, so `conditional_expectation`
//! needs no block decomposition.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::DensityMatrix;
use crate::hermitian::{kron, re, CMatrix, Complex64};

/// Rank threshold for Gram–Schmidt on unit-normalized candidates.
pub const CLOSURE_RANK_TOL: f64 = 1e-10;

/// Hilbert–Schmidt inner product `⟨A, B⟩ = Tr(A†B)`.
pub fn hs_dot(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Column-major vectorization, the convention used by every superoperator in
/// this crate: `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
pub fn vec_mat(a: &CMatrix) -> DVector<Complex64> {
    DVector::from_iterator(a.nrows() * a.ncols(), a.iter().copied())
}

/// Membership verdict together with the Frobenius distance to the subspace.
#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub is_member: bool,
    pub distance: f64,
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Candidates whose
/// residual stays below `rank_tol` (relative to their norm) are dropped.
/// Already-orthonormal prefixes pass through unchanged, so iterating the
/// closure only ever appends basis elements.
fn orthonormalize(candidates: &[CMatrix], rank_tol: f64) -> Vec<CMatrix> {
    let mut basis: Vec<CMatrix> = Vec::new();
    for cand in candidates {
        let norm0 = cand.norm();
        if norm0 <= rank_tol {
            continue;
        }
        let mut v = cand.scale(1.0 / norm0);
        for _ in 0..2 {
            for b in &basis {
                let coeff = hs_dot(b, &v);
                v -= b * coeff;
            }
        }
        let norm = v.norm();
        if norm > rank_tol {
            basis.push(v.scale(1.0 / norm));
        }
    }
    basis
}

/// A unital *-subalgebra `M0 ⊆ M_d(ℂ)`.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    ambient: usize,
    basis: Vec<CMatrix>,
    generators: Vec<CMatrix>,
}

impl Subalgebra {
    /// Closes `generators` under linear combinations, products and adjoints,
    /// always including the identity. `rank_tol` (default
    /// [`CLOSURE_RANK_TOL`]) controls the numerical rank decisions.
    ///
    /// The loop re-orthonormalizes `{basis} ∪ {b†} ∪ {b_i b_j}` until the
    /// linear dimension stops growing; since it grows strictly otherwise and
    /// is bounded by d², divergence is a numerical failure, not a
    /// mathematical possibility.
    pub fn close_generators(generators: &[CMatrix], rank_tol: Option<f64>) -> Result<Subalgebra> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("generator list is empty".into()))?;
        let d = first.nrows();
        if d == 0 {
            return Err(Error::InvalidInput("generators must be non-empty matrices".into()));
        }
        for g in generators {
            if !g.is_square() || g.nrows() != d {
                return Err(Error::InvalidInput(format!(
                    "generators must all be {d}x{d}, got {}x{}",
                    g.nrows(),
                    g.ncols()
                )));
            }
            if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("generator has non-finite entries".into()));
            }
        }
        let tol = rank_tol.unwrap_or(CLOSURE_RANK_TOL);

        let mut seed: Vec<CMatrix> = vec![CMatrix::identity(d, d)];
        for g in generators {
            seed.push(g.clone());
            seed.push(g.adjoint());
        }
        let mut basis = orthonormalize(&seed, tol);

        let max_rounds = d * d + 2;
        for _ in 0..max_rounds {
            let mut candidates = basis.clone();
            for b in &basis {
                candidates.push(b.adjoint());
            }
            for a in &basis {
                for b in &basis {
                    candidates.push(a * b);
                }
            }
            let next = orthonormalize(&candidates, tol);
            let stable = next.len() == basis.len();
            basis = next;
            if stable {
                return Ok(Subalgebra {
                    ambient: d,
                    basis,
                    generators: generators.to_vec(),
                });
            }
        }
        Err(Error::ClosureDiverged {
            iterations: max_rounds,
        })
    }

    /// The scalars `ℂ·I`.
    pub fn trivial(dim: usize) -> Subalgebra {
        let id = CMatrix::identity(dim, dim);
        Subalgebra {
            ambient: dim,
            basis: vec![id.scale(1.0 / (dim as f64).sqrt())],
            generators: vec![id],
        }
    }

    /// The full matrix algebra `M_d(ℂ)` (orthonormal basis: matrix units).
    pub fn full(dim: usize) -> Subalgebra {
        let mut basis = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for i in 0..dim {
                let mut e = CMatrix::zeros(dim, dim);
                e[(i, j)] = re(1.0);
                basis.push(e);
            }
        }
        Subalgebra {
            ambient: dim,
            basis,
            generators: vec![CMatrix::identity(dim, dim)],
        }
    }

    /// The diagonal matrices in the standard basis.
    pub fn diagonal(dim: usize) -> Subalgebra {
        let mut basis = Vec::with_capacity(dim);
        let mut generator = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            let mut e = CMatrix::zeros(dim, dim);
            e[(i, i)] = re(1.0);
            basis.push(e);
            generator[(i, i)] = re(i as f64 + 1.0);
        }
        Subalgebra {
            ambient: dim,
            basis,
            generators: vec![generator],
        }
    }

    /// Ambient matrix dimension d.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Linear dimension of the subalgebra as a subspace of M_d(ℂ).
    pub fn linear_dimension(&self) -> usize {
        self.basis.len()
    }

    /// HS-orthonormal basis spanning the subalgebra.
    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// Generators as originally supplied (for reporting).
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    fn check_ambient(&self, x: &CMatrix) -> Result<()> {
        if x.nrows() != self.ambient || x.ncols() != self.ambient {
            return Err(Error::InvalidInput(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                self.ambient,
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(())
    }

    /// Trace-preserving conditional expectation `E(X)`: the HS-orthogonal
    /// projection `Σ_k b_k ⟨b_k, X⟩`.
    pub fn conditional_expectation(&self, x: &CMatrix) -> Result<CMatrix> {
        self.check_ambient(x)?;
        let mut out = CMatrix::zeros(self.ambient, self.ambient);
        for b in &self.basis {
            let coeff = hs_dot(b, x);
            out += b * coeff;
        }
        Ok(out)
    }

    /// Distance-based membership test: `X ∈ M0` iff
    /// `‖X − E(X)‖_F ≤ tol · max(1, ‖X‖_F)`.
    pub fn contains(&self, x: &CMatrix, tol: f64) -> Result<Membership> {
        let e = self.conditional_expectation(x)?;
        let distance = (x - e).norm();
        Ok(Membership {
            is_member: distance <= tol * x.norm().max(1.0),
            distance,
        })
    }

    /// `E` as a d²×d² matrix acting on column-major vectorizations:
    /// `Σ_k vec(b_k) vec(b_k)†`.
    pub fn expectation_superoperator(&self) -> CMatrix {
        let d2 = self.ambient * self.ambient;
        let mut s = CMatrix::zeros(d2, d2);
        for b in &self.basis {
            let v = vec_mat(b);
            // rank-one update s += v v†
            for cidx in 0..d2 {
                let vc = v[cidx].conj();
                if vc == re(0.0) {
                    continue;
                }
                for ridx in 0..d2 {
                    s[(ridx, cidx)] += v[ridx] * vc;
                }
            }
        }
        s
    }

    /// Compression of a state to the subalgebra: `E(ρ)` as a density matrix.
    /// `E` is trace preserving and positive, and `E(ρ) ≥ λ_min(ρ)·I`, so
    /// failure here means numerics degraded rather than bad input.
    pub fn restrict_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let e = self.conditional_expectation(rho.matrix())?;
        let sym = (&e + e.adjoint()).scale(0.5);
        DensityMatrix::new(sym).map_err(|err| {
            Error::NumericalDegeneracy(format!("restricted state is not a valid density: {err}"))
        })
    }

    /// Generator criterion for invariance under the modular flow of `rho`:
    /// `[ln ρ, b] ∈ M0` for every basis element `b`.
    pub fn is_modular_invariant(&self, rho: &DensityMatrix, tol: f64) -> Result<bool> {
        self.check_ambient(rho.matrix())?;
        let log_rho = rho.ln_matrix();
        for b in &self.basis {
            let comm = &log_rho * b - b * &log_rho;
            if !self.contains(&comm, tol)?.is_member {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All pairwise basis commutators vanish within `tol`.
    pub fn is_commutative(&self, tol: f64) -> bool {
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                if (a * b - b * a).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `M0^{⊗n}`, spanned by n-fold Kronecker products of the basis. The HS
    /// inner product factorizes over Kronecker products, so the product
    /// basis is orthonormal already; it is re-orthonormalized anyway to keep
    /// the stored invariant unconditional.
    pub fn tensor_power(&self, n: usize, cap: usize) -> Result<Subalgebra> {
        if n == 0 {
            return Err(Error::InvalidInput("tensor power requires n ≥ 1".into()));
        }
        let requested = u32::try_from(n)
            .ok()
            .and_then(|n| self.ambient.checked_pow(n))
            .unwrap_or(usize::MAX);
        if requested > cap {
            return Err(Error::ResourceLimit { requested, cap });
        }
        let mut basis: Vec<CMatrix> = self.basis.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(basis.len() * self.basis.len());
            for a in &basis {
                for b in &self.basis {
                    next.push(kron(a, b));
                }
            }
            basis = next;
        }
        let basis = orthonormalize(&basis, CLOSURE_RANK_TOL);
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let mut out = g.clone();
                for _ in 1..n {
                    out = kron(&out, g);
                }
                out
            })
            .collect();
        Ok(Subalgebra {
            ambient: requested,
            basis,
            generators,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::TOL_HERM;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    fn assert_orthonormal(alg: &Subalgebra) {
        for (i, a) in alg.basis().iter().enumerate() {
            for (j, b) in alg.basis().iter().enumerate() {
                let dot = hs_dot(a, b);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - re(expect)).norm() < 1e-12,
                    "basis not orthonormal at ({i},{j}): {dot}"
                );
            }
        }
    }

    #[test]
    fn diagonal_generator_closes_to_diagonal_algebra() {
        let alg = Subalgebra::close_generators(&[sigma_z()], None).unwrap();
        assert_eq!(alg.linear_dimension(), 2);
        assert_orthonormal(&alg);
        // projection onto the diagonal: pinching
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.4, 0.1), c(0.4, -0.1), c(0.5, 0.0)],
        );
        let e = alg.conditional_expectation(&x).unwrap();
        assert!((e - CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0)]))).norm() < 1e-12);
    }

    #[test]
    fn pauli_generators_close_to_full_algebra() {
        let alg = Subalgebra::close_generators(&[sigma_x(), sigma_z()], None).unwrap();
        assert_eq!(alg.linear_dimension(), 4);
        assert_orthonormal(&alg);
        assert!(!alg.is_commutative(1e-10));
        // E is the identity on the full algebra
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.1, 0.2), c(0.3, -0.4), c(0.5, 0.6), c(0.7, 0.0)],
        );
        let e = alg.conditional_expectation(&x).unwrap();
        assert!((&e - &x).norm() < 1e-12);
    }

    #[test]
    fn membership_distance_of_sigma_x_from_diagonal() {
        let alg = Subalgebra::diagonal(2);
        let m = alg.contains(&sigma_x(), 1e-8).unwrap();
        assert!(!m.is_member);
        // E(σ_x) = 0, so the distance is ‖σ_x‖_F = √2
        assert_abs_diff_eq!(m.distance, 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn closure_is_idempotent() {
        let g = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.2, 0.7), c(-0.1, 0.4), c(0.9, 0.0)],
        );
        let alg = Subalgebra::close_generators(&[g], None).unwrap();
        let alg2 = Subalgebra::close_generators(alg.basis(), None).unwrap();
        assert_eq!(alg.linear_dimension(), alg2.linear_dimension());
        for b in alg.basis() {
            assert!(alg2.contains(b, 1e-9).unwrap().is_member);
        }
        for b in alg2.basis() {
            assert!(alg.contains(b, 1e-9).unwrap().is_member);
        }
    }

    #[test]
    fn expectation_is_positive_and_unital() {
        let alg = Subalgebra::close_generators(&[sigma_z()], None).unwrap();
        let id = CMatrix::identity(2, 2);
        assert!((alg.conditional_expectation(&id).unwrap() - &id).norm() < 1e-12);

        // PSD input keeps a PSD image
        let v = CMatrix::from_row_slice(2, 1, &[c(0.6, 0.2), c(0.3, -0.7)]);
        let psd = &v * v.adjoint();
        let e = alg.conditional_expectation(&psd).unwrap();
        let spec = crate::hermitian::eig_hermitian(&e, None).unwrap();
        assert!(spec.min_eigenvalue() > -1e-10);
        // trace preserved
        assert_abs_diff_eq!(e.trace().re, psd.trace().re, epsilon = 1e-12);
        assert!(e.trace().im.abs() < TOL_HERM);
    }

    #[test]
    fn expectation_is_a_bimodule_map() {
        let alg = Subalgebra::close_generators(&[sigma_z()], None).unwrap();
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.1, 0.2), c(0.3, -0.4), c(0.5, 0.6), c(0.7, 0.0)],
        );
        for a in alg.basis() {
            for b in alg.basis() {
                let lhs = alg.conditional_expectation(&(a * &x * b)).unwrap();
                let rhs = a * alg.conditional_expectation(&x).unwrap() * b;
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn superoperator_matches_direct_expectation() {
        let alg = Subalgebra::close_generators(&[sigma_x()], None).unwrap();
        let s = alg.expectation_superoperator();
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.9, 0.1), c(-0.2, 0.3), c(0.4, -0.5), c(0.6, 0.0)],
        );
        let via_s = {
            let v = &s * vec_mat(&x);
            CMatrix::from_iterator(2, 2, v.iter().copied())
        };
        let direct = alg.conditional_expectation(&x).unwrap();
        assert!((via_s - direct).norm() < 1e-12);
        // idempotent: S² = S
        assert!((&s * &s - &s).norm() < 1e-12);
    }

    #[test]
    fn tensor_power_of_diagonal_algebra() {
        let alg = Subalgebra::diagonal(2);
        let alg2 = alg.tensor_power(2, 16).unwrap();
        assert_eq!(alg2.ambient_dim(), 4);
        assert_eq!(alg2.linear_dimension(), 4);
        assert_orthonormal(&alg2);
        assert!(alg2.is_commutative(1e-10));
        assert!(matches!(
            alg.tensor_power(20, 16),
            Err(crate::error::Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn m2_tensor_identity_block_algebra() {
        // span{Y ⊗ I}: closure of {σ_x ⊗ I, σ_z ⊗ I}
        let id = CMatrix::identity(2, 2);
        let gens = [kron(&sigma_x(), &id), kron(&sigma_z(), &id)];
        let alg = Subalgebra::close_generators(&gens, None).unwrap();
        assert_eq!(alg.linear_dimension(), 4);
        // block-scalar structure: E(ρ) of blockdiag(R1, R2) averages each block
        // onto (tr R_i / 2)·I
        let r = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.2, 0.0),
            ],
        );
        let e = alg.conditional_expectation(&r).unwrap();
        let expect = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.2, 0.0),
            c(0.2, 0.0),
            c(0.3, 0.0),
            c(0.3, 0.0),
        ]));
        assert!((e - expect).norm() < 1e-12);
    }
}
