//! Dense Hermitian machinery: validated eigendecompositions with eigenvalue
//! clustering, spectral functions, positive/negative splits, trace norms and
//! Kronecker powers.
//!
//! Everything downstream (conditional expectations, entropies, error
//! exponents) reduces to the spectral data produced here, so this module is
//! deliberately strict: inputs are checked for Hermiticity before any
//! eigensolve, and scalar functions are rejected the moment they go
//! non-finite on the spectrum.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Complex64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Relative Hermiticity tolerance: `‖A − A†‖_F ≤ TOL_HERM · max(1, ‖A‖_F)`.
pub const TOL_HERM: f64 = 1e-10;

/// Relative eigenvalue clustering width, in units of the spectral radius.
pub const CLUSTER_REL: f64 = 1e-8;

/// Default cap on the dimension produced by Kronecker powers.
pub const DEFAULT_TENSOR_CAP: usize = 4096;

pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `‖A − A†‖_F`, the distance from `a` to the Hermitian matrices (up to a
/// factor of 2).
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// `Tr(A·B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(b.ncols(), a.nrows());
    let mut acc = re(0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn is_hermitian(a: &CMatrix) -> bool {
    a.is_square() && hermitian_defect(a) <= TOL_HERM * a.norm().max(1.0)
}

fn require_square(a: &CMatrix, what: &str) -> Result<usize> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::InvalidInput(format!(
            "{what} must be square and non-empty, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

fn require_hermitian(a: &CMatrix, what: &str) -> Result<usize> {
    let dim = require_square(a, what)?;
    let defect = hermitian_defect(a);
    if defect > TOL_HERM * a.norm().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "{what} is not Hermitian: ‖A − A†‖ = {defect:.3e}"
        )));
    }
    Ok(dim)
}

/// True when every off-diagonal entry is exactly zero. Kronecker powers of
/// diagonal matrices stay exactly diagonal in floating point, so this fast
/// path keeps large tensor-power spectra cheap.
fn is_exactly_diagonal(a: &CMatrix) -> bool {
    let d = a.nrows();
    for j in 0..d {
        for i in 0..d {
            if i != j && a[(i, j)] != re(0.0) {
                return false;
            }
        }
    }
    true
}

/// Raw (unclustered) eigenvalues of a Hermitian matrix, ascending.
fn raw_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let d = a.nrows();
    let mut vals: Vec<f64> = if is_exactly_diagonal(a) {
        (0..d).map(|i| a[(i, i)].re).collect()
    } else {
        let sym = (a + a.adjoint()).scale(0.5);
        sym.symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    vals
}

/// Eigendecomposition of a Hermitian matrix with nearby eigenvalues merged
/// into clusters.
///
/// Cluster `k` carries a representative eigenvalue (mean of its members),
/// its multiplicity, and an orthonormal set of columns spanning its
/// eigenspace. Clusters are ordered by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    offsets: Vec<usize>,
    /// Unitary whose columns are eigenvectors, grouped by cluster.
    basis: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Number of eigenvalue clusters.
    pub fn cluster_count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Clustered eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// Unitary of grouped eigenvectors.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Columns of `basis` spanning cluster `k`.
    pub fn cluster_columns(&self, k: usize) -> nalgebra::DMatrixView<'_, Complex64> {
        self.basis.columns(self.offsets[k], self.multiplicities[k])
    }

    /// Orthogonal projection onto the eigenspace of cluster `k`.
    pub fn projection(&self, k: usize) -> Projection {
        let cols = self.cluster_columns(k);
        let adjoint = cols.adjoint();
        Projection {
            matrix: cols * adjoint,
            rank: self.multiplicities[k],
        }
    }

    pub fn projections(&self) -> Vec<Projection> {
        (0..self.cluster_count()).map(|k| self.projection(k)).collect()
    }

    /// `Σ_k f(λ_k) P_k`. Fails if `f` is non-finite on any cluster value.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
        let d = self.dim();
        let mut scaled = self.basis.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let flam = f(lam);
            if !flam.is_finite() {
                return Err(Error::Domain { eigenvalue: lam });
            }
            for c in self.offsets[k]..self.offsets[k] + self.multiplicities[k] {
                for r in 0..d {
                    scaled[(r, c)] *= flam;
                }
            }
        }
        Ok(&scaled * self.basis.adjoint())
    }

    /// `Σ_k λ_k P_k`, which reproduces the input up to clustering error.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x).expect("identity is finite")
    }

    /// Multiplicity of the cluster whose eigenvalue is within `tol` of `t`,
    /// or 0 when no cluster matches.
    pub fn multiplicity_at(&self, t: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .find(|(lam, _)| (**lam - t).abs() <= tol)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

/// Validated Hermitian eigendecomposition. Eigenvalues closer than
/// `cluster_tol` are merged into one cluster; `None` selects the default
/// width `CLUSTER_REL · ‖A‖_2`.
pub fn eig_hermitian(a: &CMatrix, cluster_tol: Option<f64>) -> Result<SpectralDecomposition> {
    let d = require_hermitian(a, "eig_hermitian input")?;

    let (mut vals, vecs): (Vec<f64>, CMatrix) = if is_exactly_diagonal(a) {
        let vals: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
        (vals, CMatrix::identity(d, d))
    } else {
        let sym = (a + a.adjoint()).scale(0.5);
        let se = nalgebra::SymmetricEigen::new(sym);
        (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
    };

    // sort ascending, permuting eigenvector columns along
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite eigenvalues"));
    let mut basis = CMatrix::zeros(d, d);
    for (new, &old) in order.iter().enumerate() {
        basis.set_column(new, &vecs.column(old));
    }
    vals = order.iter().map(|&i| vals[i]).collect();

    let radius = vals[0].abs().max(vals[d - 1].abs());
    let tol = cluster_tol.unwrap_or(CLUSTER_REL * radius).max(0.0);

    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut offsets = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        // chain clustering: extend while consecutive gaps stay below tol
        while end < d && vals[end] - vals[end - 1] <= tol {
            end += 1;
        }
        let mean = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        eigenvalues.push(mean);
        multiplicities.push(end - start);
        offsets.push(start);
        start = end;
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        multiplicities,
        offsets,
        basis,
    })
}

/// `f` applied to a Hermitian matrix through its spectrum.
pub fn matrix_function(a: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    eig_hermitian(a, None)?.apply(f)
}

/// Hermitian orthogonal projection with its rank.
#[derive(Debug, Clone)]
pub struct Projection {
    matrix: CMatrix,
    rank: usize,
}

impl Projection {
    /// Validates `P = P† = P²` within `tol` and reads the rank off the trace.
    pub fn try_new(matrix: CMatrix, tol: f64) -> Result<Self> {
        let d = require_hermitian(&matrix, "projection")?;
        let idem = (&matrix * &matrix - &matrix).norm();
        if idem > tol * (d as f64).sqrt().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "not idempotent: ‖P² − P‖ = {idem:.3e}"
            )));
        }
        let tr = matrix.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > 1e-6 || rank < 0.0 {
            return Err(Error::InvalidInput(format!(
                "projection trace {tr} is not a nonnegative integer"
            )));
        }
        Ok(Projection {
            matrix,
            rank: rank as usize,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Projection {
            matrix: CMatrix::zeros(dim, dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projection {
            matrix: CMatrix::identity(dim, dim),
            rank: dim,
        }
    }

    pub(crate) fn from_parts(matrix: CMatrix, rank: usize) -> Self {
        Projection { matrix, rank }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `I − P`.
    pub fn complement(&self) -> Projection {
        let d = self.dim();
        Projection {
            matrix: CMatrix::identity(d, d) - &self.matrix,
            rank: d - self.rank,
        }
    }
}

/// Positive/negative decomposition of a Hermitian matrix.
///
/// `positive` and `negative` are PSD with `A ≈ positive − negative`;
/// eigenvalues within `zero_tol` of 0 are assigned to the kernel projection
/// `zero` and contribute to neither part. `plus`, `minus`, `zero` partition
/// the identity.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub positive: CMatrix,
    pub negative: CMatrix,
    pub plus: Projection,
    pub minus: Projection,
    pub zero: Projection,
}

/// Default kernel threshold used by the splits: `dim · ε_machine · ‖A‖_2`.
pub fn default_zero_tol(dim: usize, spectral_radius: f64) -> f64 {
    dim as f64 * f64::EPSILON * spectral_radius
}

/// Splits a Hermitian matrix into positive part, negative part and kernel.
/// `None` selects the default threshold `dim · ε_machine · ‖A‖_2`. Rank
/// decisions downstream (Neyman–Pearson projections) hinge on `zero_tol`,
/// so callers with a working tolerance should pass it explicitly.
pub fn spectral_split(a: &CMatrix, zero_tol: Option<f64>) -> Result<SpectralSplit> {
    let spec = eig_hermitian(a, None)?;
    let d = spec.dim();
    let tol = zero_tol
        .unwrap_or_else(|| default_zero_tol(d, spec.spectral_radius()))
        .abs();

    let mut positive = CMatrix::zeros(d, d);
    let mut negative = CMatrix::zeros(d, d);
    let mut plus = CMatrix::zeros(d, d);
    let mut minus = CMatrix::zeros(d, d);
    let mut zero = CMatrix::zeros(d, d);
    let (mut rp, mut rm, mut rz) = (0usize, 0usize, 0usize);

    for k in 0..spec.cluster_count() {
        let lam = spec.eigenvalues()[k];
        let p = spec.projection(k);
        if lam.abs() <= tol {
            zero += p.matrix();
            rz += p.rank();
        } else if lam > 0.0 {
            positive += p.matrix().scale(lam);
            plus += p.matrix();
            rp += p.rank();
        } else {
            negative += p.matrix().scale(-lam);
            minus += p.matrix();
            rm += p.rank();
        }
    }

    Ok(SpectralSplit {
        positive,
        negative,
        plus: Projection::from_parts(plus, rp),
        minus: Projection::from_parts(minus, rm),
        zero: Projection::from_parts(zero, rz),
    })
}

/// Trace norm `‖A‖_1 = Σ σ_i(A)`. For Hermitian input this is the sum of
/// absolute eigenvalues; otherwise singular values are taken from the
/// spectrum of `A†A`.
pub fn trace_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    if is_hermitian(a) {
        raw_eigenvalues(a).iter().map(|x| x.abs()).sum()
    } else {
        let g = a.adjoint() * a;
        raw_eigenvalues(&g).iter().map(|x| x.max(0.0).sqrt()).sum()
    }
}

/// Kronecker product, kept as a named operation so tensor conventions stay
/// in one place: the row/column index of `A ⊗ B` is `i_A · dim_B + i_B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `A^{⊗n}`. The resulting dimension must stay within `cap`.
pub fn tensor_power(a: &CMatrix, n: usize, cap: usize) -> Result<CMatrix> {
    let d = require_square(a, "tensor_power input")?;
    if n == 0 {
        return Err(Error::InvalidInput("tensor power requires n ≥ 1".into()));
    }
    let requested = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .unwrap_or(usize::MAX);
    if requested > cap {
        return Err(Error::ResourceLimit { requested, cap });
    }
    let mut out = a.clone();
    for _ in 1..n {
        out = out.kronecker(a);
    }
    Ok(out)
}
