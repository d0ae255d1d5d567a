//! Geometry of a pair of invertible states relative to a subalgebra:
//! state-dependent conditional expectations, likelihood operators, relative
//! entropies and the Chernoff error exponent.
//!
//! Conventions fixed here once and used everywhere else:
//! * `rho_inner(X, Y, ρ) = Tr X† ρ^{1/2} Y ρ^{1/2}`;
//! * `rn_derivative(ρ0, ρ1) = ρ0^{−1/2} ρ1 ρ0^{−1/2}`, the likelihood
//!   operator of ρ1 relative to ρ0 in that inner product;
//! * `renyi_trace(ρ0, ρ1, s) = Tr ρ0^{1−s} ρ1^s` (the mirrored orientation
//!   `Tr ρ0^s ρ1^{1−s}` is `s ↦ 1−s`);
//! * entropies and exponents are in nats.

use serde::Serialize;

use crate::algebra::{vec_mat, Membership, Subalgebra};
use crate::error::{Error, Result};
use crate::hermitian::{
    eig_hermitian, kron, re, trace_product, CMatrix, Complex64, SpectralDecomposition,
};
use crate::opt::golden_section_min;

/// Unit-trace tolerance for state validation.
pub const TRACE_TOL: f64 = 1e-10;

/// A state is rejected as non-invertible when
/// `min eigenvalue ≤ INVERTIBILITY_TOL · max eigenvalue`.
pub const INVERTIBILITY_TOL: f64 = 1e-12;

/// Bracket width at which the Chernoff minimization stops.
pub const OPT_TOL: f64 = 1e-10;

/// An invertible density matrix with its spectral decomposition cached, so
/// matrix functions of the state never re-run the eigensolver.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and strict positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !crate::hermitian::is_hermitian(&matrix) {
            return Err(Error::InvalidState(format!(
                "state matrix is not Hermitian: ‖A − A†‖ = {:.3e}",
                crate::hermitian::hermitian_defect(&matrix)
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "state trace must be 1, got {} + {}i",
                tr.re, tr.im
            )));
        }
        let spectrum = eig_hermitian(&matrix, None)?;
        let min = spectrum.min_eigenvalue();
        let max = spectrum.max_eigenvalue();
        if min <= INVERTIBILITY_TOL * max {
            return Err(Error::InvalidState(format!(
                "state is not invertible: min eigenvalue {min:.3e} vs max {max:.3e}"
            )));
        }
        Ok(DensityMatrix { matrix, spectrum })
    }

    /// Diagonal state from a probability vector.
    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        let d = probabilities.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &p) in probabilities.iter().enumerate() {
            m[(i, i)] = re(p);
        }
        DensityMatrix::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// `f(ρ)` through the cached spectrum. The spectrum is strictly positive
    /// by construction, so the standard functions below cannot fail.
    fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.spectrum
            .apply(f)
            .expect("scalar function non-finite on a validated positive spectrum")
    }

    pub fn sqrt_matrix(&self) -> CMatrix {
        self.apply(f64::sqrt)
    }

    pub fn inv_sqrt_matrix(&self) -> CMatrix {
        self.apply(|t| 1.0 / t.sqrt())
    }

    pub fn ln_matrix(&self) -> CMatrix {
        self.apply(f64::ln)
    }

    /// `ρ^t` for any real `t` (the spectrum is strictly positive).
    pub fn power(&self, t: f64) -> CMatrix {
        self.apply(|x| x.powf(t))
    }

    /// `ρ^{⊗n}`, re-validated so the cached spectrum is available.
    pub fn tensor_power(&self, n: usize, cap: usize) -> Result<DensityMatrix> {
        let m = crate::hermitian::tensor_power(&self.matrix, n, cap)?;
        DensityMatrix::new(m)
    }
}

/// `(ρ + εI) / (1 + ε·dim)`: pushes a degenerate candidate state inside the
/// invertible cone. Never applied implicitly; callers opt in.
pub fn regularize(matrix: &CMatrix, epsilon: f64) -> Result<DensityMatrix> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "regularization strength must be positive, got {epsilon}"
        )));
    }
    let d = matrix.nrows();
    let shifted = matrix + CMatrix::identity(d, d).scale(epsilon);
    DensityMatrix::new(shifted.scale(1.0 / (1.0 + epsilon * d as f64)))
}

/// `⟨X, Y⟩_ρ = Tr X† ρ^{1/2} Y ρ^{1/2}`.
pub fn rho_inner(x: &CMatrix, y: &CMatrix, rho: &DensityMatrix) -> Complex64 {
    let sq = rho.sqrt_matrix();
    let sandwiched = &sq * y * &sq;
    crate::algebra::hs_dot(x, &sandwiched)
}

/// Likelihood operator `d = ρ0^{−1/2} ρ1 ρ0^{−1/2}`, symmetrized to absorb
/// roundoff. Positive definite whenever both states are invertible.
pub fn rn_derivative(rho0: &DensityMatrix, rho1: &DensityMatrix) -> CMatrix {
    let isq = rho0.inv_sqrt_matrix();
    let d = &isq * rho1.matrix() * &isq;
    (&d + d.adjoint()).scale(0.5)
}

fn expectation_of_state(alg: &Subalgebra, rho: &DensityMatrix) -> Result<SpectralDecomposition> {
    let e = alg.conditional_expectation(rho.matrix())?;
    let sym = (&e + e.adjoint()).scale(0.5);
    let spec = eig_hermitian(&sym, None)?;
    if spec.min_eigenvalue() <= INVERTIBILITY_TOL * spec.max_eigenvalue() {
        return Err(Error::NumericalDegeneracy(format!(
            "compressed state is numerically singular: min eigenvalue {:.3e}",
            spec.min_eigenvalue()
        )));
    }
    Ok(spec)
}

/// State-dependent conditional expectation onto `M0`:
/// `E_ρ(X) = E(ρ)^{−1/2} E(ρ^{1/2} X ρ^{1/2}) E(ρ)^{−1/2}`.
pub fn gce_apply(alg: &Subalgebra, rho: &DensityMatrix, x: &CMatrix) -> Result<CMatrix> {
    let sq = rho.sqrt_matrix();
    let inner = alg.conditional_expectation(&(&sq * x * &sq))?;
    let er_isqrt = expectation_of_state(alg, rho)?
        .apply(|t| 1.0 / t.sqrt())
        .expect("positive spectrum checked above");
    Ok(&er_isqrt * inner * &er_isqrt)
}

/// A linear map on d×d matrices stored as a d²×d² matrix acting on
/// column-major vectorizations.
#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

/// `X ↦ A X B` as a superoperator: `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    kron(&b.transpose(), a)
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "superoperator on dimension {dim} needs a {0}x{0} matrix, got {1}x{2}",
                dim * dim,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Superoperator { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::InvalidInput(format!(
                "superoperator expects a {0}x{0} argument, got {1}x{2}",
                self.dim,
                x.nrows(),
                x.ncols()
            )));
        }
        let v = &self.matrix * vec_mat(x);
        Ok(CMatrix::from_iterator(self.dim, self.dim, v.iter().copied()))
    }

    /// Tensor product acting on the composite system. The naive Kronecker of
    /// the two matrices indexes coordinates as vec(X_a) ⊗ vec(X_b); the
    /// composite vectorization interleaves them, so rows and columns are
    /// permuted accordingly.
    pub fn kronecker(&self, other: &Superoperator) -> Superoperator {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let naive = kron(&self.matrix, &other.matrix);
        let mut perm = vec![0usize; d * d];
        for ja in 0..a {
            for ia in 0..a {
                let k1 = ja * a + ia;
                for jb in 0..b {
                    for ib in 0..b {
                        let k2 = jb * b + ib;
                        let itot = ia * b + ib;
                        let jtot = ja * b + jb;
                        perm[k1 * b * b + k2] = jtot * d + itot;
                    }
                }
            }
        }
        let mut matrix = CMatrix::zeros(d * d, d * d);
        for (r, &pr) in perm.iter().enumerate() {
            for (c, &pc) in perm.iter().enumerate() {
                matrix[(pr, pc)] = naive[(r, c)];
            }
        }
        Superoperator { dim: d, matrix }
    }

    /// Frobenius distance between the matrix representations.
    pub fn distance(&self, other: &Superoperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }
}

/// Matrix representation of `E_ρ`, composed right to left:
/// sandwich by ρ^{1/2}, project onto `M0`, sandwich by `E(ρ)^{−1/2}`.
pub fn gce_superoperator(alg: &Subalgebra, rho: &DensityMatrix) -> Result<Superoperator> {
    let sq = rho.sqrt_matrix();
    let er_isqrt = expectation_of_state(alg, rho)?
        .apply(|t| 1.0 / t.sqrt())
        .expect("positive spectrum checked above");
    let s_e = alg.expectation_superoperator();
    let matrix = sandwich(&er_isqrt, &er_isqrt) * s_e * sandwich(&sq, &sq);
    Superoperator::new(rho.dim(), matrix)
}

/// `X` is a fixed point of `E_ρ` when `‖E_ρ(X) − X‖_F ≤ tol·max(1, ‖X‖_F)`.
pub fn in_fixed_points(
    alg: &Subalgebra,
    rho: &DensityMatrix,
    x: &CMatrix,
    tol: f64,
) -> Result<Membership> {
    let image = gce_apply(alg, rho, x)?;
    let distance = (&image - x).norm();
    Ok(Membership {
        is_member: distance <= tol * x.norm().max(1.0),
        distance,
    })
}

/// Membership in the multiplicative domain of `E_ρ`:
/// both `ρ^{−1/2} X ρ^{1/2}` and `ρ^{1/2} X ρ^{−1/2}` must lie in `M0`.
/// For Hermitian `X` the two checks are adjoints of each other; both are
/// still executed.
pub fn in_multiplicative_domain(
    alg: &Subalgebra,
    rho: &DensityMatrix,
    x: &CMatrix,
    tol: f64,
) -> Result<bool> {
    let sq = rho.sqrt_matrix();
    let isq = rho.inv_sqrt_matrix();
    let lowered = &isq * x * &sq;
    let raised = &sq * x * &isq;
    Ok(alg.contains(&lowered, tol)?.is_member && alg.contains(&raised, tol)?.is_member)
}

/// `S(ρ1‖ρ0) = Re Tr ρ1 (ln ρ1 − ln ρ0)`, in nats.
pub fn umegaki_entropy(rho1: &DensityMatrix, rho0: &DensityMatrix) -> f64 {
    let diff = rho1.ln_matrix() - rho0.ln_matrix();
    trace_product(rho1.matrix(), &diff).re
}

/// `S_BS(ρ1‖ρ0) = Re Tr ρ0 · d ln d` with `d = ρ0^{−1/2} ρ1 ρ0^{−1/2}`.
/// Always ≥ the Umegaki entropy; equal when the subalgebra generated by the
/// likelihood operator behaves classically (e.g. commuting states).
pub fn bs_entropy(rho1: &DensityMatrix, rho0: &DensityMatrix) -> Result<f64> {
    let d = rn_derivative(rho0, rho1);
    let spec = eig_hermitian(&d, None)?;
    if spec.min_eigenvalue() <= 0.0 {
        return Err(Error::NumericalDegeneracy(format!(
            "likelihood operator lost positivity: min eigenvalue {:.3e}",
            spec.min_eigenvalue()
        )));
    }
    let dlnd = spec.apply(|t| t * t.ln())?;
    Ok(trace_product(rho0.matrix(), &dlnd).re)
}

/// Per-column eigenvalues (cluster values expanded by multiplicity, in basis
/// column order) and the basis overlap matrix `U† V`; `Tr ρ0^{1−s} ρ1^s`
/// becomes a weighted double sum over `|U†V|²`, evaluable for every `s`
/// without another eigensolve.
struct RenyiKernel {
    ev0: Vec<f64>,
    ev1: Vec<f64>,
    weights: Vec<Vec<f64>>,
}

impl RenyiKernel {
    fn new(rho0: &DensityMatrix, rho1: &DensityMatrix) -> RenyiKernel {
        let expand = |spec: &SpectralDecomposition| {
            let mut out = Vec::with_capacity(spec.dim());
            for (value, mult) in spec.eigenvalues().iter().zip(spec.multiplicities()) {
                out.extend(std::iter::repeat_n(*value, *mult));
            }
            out
        };
        let overlap = rho0.spectrum().basis().adjoint() * rho1.spectrum().basis();
        let d = rho0.dim();
        let mut weights = vec![vec![0.0; d]; d];
        for p in 0..d {
            for q in 0..d {
                weights[p][q] = overlap[(p, q)].norm_sqr();
            }
        }
        RenyiKernel {
            ev0: expand(rho0.spectrum()),
            ev1: expand(rho1.spectrum()),
            weights,
        }
    }

    fn eval(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for (p, &lam) in self.ev0.iter().enumerate() {
            let lp = lam.powf(1.0 - s);
            for (q, &mu) in self.ev1.iter().enumerate() {
                acc += lp * mu.powf(s) * self.weights[p][q];
            }
        }
        acc
    }
}

/// `Tr ρ0^{1−s} ρ1^s` for `s ∈ [0, 1]`.
pub fn renyi_trace(rho0: &DensityMatrix, rho1: &DensityMatrix, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidInput(format!(
            "Rényi parameter must lie in [0, 1], got {s}"
        )));
    }
    if rho0.dim() != rho1.dim() {
        return Err(Error::InvalidInput(format!(
            "state dimensions differ: {} vs {}",
            rho0.dim(),
            rho1.dim()
        )));
    }
    Ok(RenyiKernel::new(rho0, rho1).eval(s))
}

/// Chernoff error exponent together with the minimizing parameter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChernoffDistance {
    /// `ξ = −ln inf_{s∈[0,1]} Tr ρ0^{1−s} ρ1^s`, in nats.
    pub xi: f64,
    /// Argmin of the trace functional, in `[0, 1]`.
    pub s_star: f64,
}

/// Minimizes `ln Tr ρ0^{1−s} ρ1^s` over `s ∈ [0, 1]` by golden-section
/// search (the objective is convex in `s`); both endpoints are compared
/// explicitly, and the exponent is clamped at zero against roundoff.
pub fn chernoff_distance(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<ChernoffDistance> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::InvalidInput(format!(
            "state dimensions differ: {} vs {}",
            rho0.dim(),
            rho1.dim()
        )));
    }
    let kernel = RenyiKernel::new(rho0, rho1);
    let (s_star, log_min) = golden_section_min(|s| kernel.eval(s).ln(), 0.0, 1.0, OPT_TOL);
    Ok(ChernoffDistance {
        xi: (-log_min).max(0.0),
        s_star,
    })
}
