//! Aggregated verdicts about a subalgebra's ability to carry the full
//! testing problem: sufficiency (the restricted states determine the
//! originals), 2-sufficiency (the subalgebra contains a Bayes optimal test
//! for every prior), structural case classification, tensor-power variants
//! and Chernoff-exponent diagnostics.
//!
//! Sufficiency is decided by evaluating several theoretically equivalent
//! conditions side by side. They must agree: a split vote is never resolved
//! by majority but surfaced as [`Error::InternalInconsistency`], because it
//! always means the instance sits on a numerical tolerance edge that the
//! caller has to see.

use serde::Serialize;

use crate::algebra::Subalgebra;
use crate::error::{Error, Result};
use crate::geometry::{
    chernoff_distance, gce_superoperator, in_fixed_points, renyi_trace, rn_derivative,
    umegaki_entropy, DensityMatrix,
};
use crate::hermitian::default_zero_tol;
use crate::testing::{bayes_error, np_decomposition};

/// Default decision tolerance for all verdict operations.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Default number of uniformly spaced priors checked by the error-equality
/// grid.
pub const DEFAULT_LAMBDA_GRID: usize = 101;

/// The individually evaluated sufficiency conditions. All five are
/// equivalent in exact arithmetic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SufficiencyConditions {
    /// Relative entropy survives restriction unchanged.
    pub entropy_equality: bool,
    /// `Tr ρ0^{1/2} ρ1^{1/2}` survives restriction unchanged.
    pub renyi_half_equality: bool,
    /// The adjoint of `E_{ρ0}` fixes `ρ1`.
    pub state_duality: bool,
    /// `E_{ρ0} = E_{ρ1}` as superoperators.
    pub gce_equality: bool,
    /// The likelihood operator is a fixed point of `E_{ρ0}`.
    pub fixed_point: bool,
}

impl SufficiencyConditions {
    fn as_array(&self) -> [bool; 5] {
        [
            self.entropy_equality,
            self.renyi_half_equality,
            self.state_duality,
            self.gce_equality,
            self.fixed_point,
        ]
    }

    pub fn all(&self) -> bool {
        self.as_array().into_iter().all(|b| b)
    }

    pub fn consistent(&self) -> bool {
        let arr = self.as_array();
        arr.iter().all(|&b| b == arr[0])
    }
}

/// Verdict and diagnostics of the sufficiency check.
#[derive(Debug, Clone, Serialize)]
pub struct SufficiencyReport {
    pub verdict: bool,
    /// `S(ρ1‖ρ0) − S(E(ρ1)‖E(ρ0))`, always ≥ 0 up to roundoff.
    pub entropy_gap: f64,
    /// Restricted minus full `Tr ρ0^{1/2} ρ1^{1/2}`, always ≥ 0 up to
    /// roundoff.
    pub renyi_gap_at_half: f64,
    /// `‖E_{ρ0} − E_{ρ1}‖_F` of the superoperator matrices.
    pub gce_distance: f64,
    /// `‖E_{ρ0}(d) − d‖_F`.
    pub fixed_point_distance: f64,
    /// Largest violation of `Tr E_{ρ0}(X) ρ1 = Tr X ρ1` over a spanning set.
    pub duality_deviation: f64,
    pub per_condition: SufficiencyConditions,
}

/// Decides whether the subalgebra is sufficient for the pair by evaluating
/// five equivalent conditions at tolerance `tol`.
pub fn check_sufficiency(
    alg: &Subalgebra,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    tol: f64,
) -> Result<SufficiencyReport> {
    let r0 = alg.restrict_state(rho0)?;
    let r1 = alg.restrict_state(rho1)?;

    let entropy_gap = umegaki_entropy(rho1, rho0) - umegaki_entropy(&r1, &r0);
    let renyi_gap_at_half = renyi_trace(&r0, &r1, 0.5)? - renyi_trace(rho0, rho1, 0.5)?;

    let s0 = gce_superoperator(alg, rho0)?;
    let s1 = gce_superoperator(alg, rho1)?;
    let gce_distance = s0.distance(&s1);
    let gce_scale = s0.matrix().norm().max(s1.matrix().norm()).max(1.0);

    // Tr E_{ρ0}(X) ρ1 = Tr X ρ1 for all X is, in vectorized form, the
    // statement that the transpose of E_{ρ0} fixes vec(ρ1ᵀ); coordinates of
    // the residual are exactly the per-matrix-unit violations.
    let w = crate::algebra::vec_mat(&rho1.matrix().transpose());
    let resid = s0.matrix().transpose() * &w - &w;
    let duality_deviation = resid.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let d = rn_derivative(rho0, rho1);
    let fixed = in_fixed_points(alg, rho0, &d, tol)?;

    let per_condition = SufficiencyConditions {
        entropy_equality: entropy_gap.abs() <= tol,
        renyi_half_equality: renyi_gap_at_half.abs() <= tol,
        state_duality: duality_deviation <= tol,
        gce_equality: gce_distance <= tol * gce_scale,
        fixed_point: fixed.is_member,
    };
    if !per_condition.consistent() {
        return Err(Error::InternalInconsistency(format!(
            "sufficiency conditions disagree at tol {tol:.1e}: \
             entropy = {} (gap {entropy_gap:.3e}), \
             renyi = {} (gap {renyi_gap_at_half:.3e}), \
             duality = {} (dev {duality_deviation:.3e}), \
             gce = {} (dist {gce_distance:.3e}), \
             fixed point = {} (dist {:.3e})",
            per_condition.entropy_equality,
            per_condition.renyi_half_equality,
            per_condition.state_duality,
            per_condition.gce_equality,
            per_condition.fixed_point,
            fixed.distance,
        )));
    }
    Ok(SufficiencyReport {
        verdict: per_condition.all(),
        entropy_gap,
        renyi_gap_at_half,
        gce_distance,
        fixed_point_distance: fixed.distance,
        duality_deviation,
        per_condition,
    })
}

/// One threshold sample of the optimal-test comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridPoint {
    pub t: f64,
    /// `‖P_{t,+} − Q_{t,+}‖_F`.
    pub plus_deviation: f64,
    /// `‖P_{t,0} − Q_{t,0}‖_F`.
    pub zero_deviation: f64,
    pub rank_p_zero: usize,
    pub rank_q_zero: usize,
}

/// One prior sample of the error comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LambdaPoint {
    pub lambda: f64,
    /// Unrestricted minimum Bayes error.
    pub full_error: f64,
    /// Minimum Bayes error after compressing both states.
    pub restricted_error: f64,
}

/// Verdict and per-sample diagnostics of the 2-sufficiency check.
#[derive(Debug, Clone, Serialize)]
pub struct TwoSufficiencyReport {
    pub verdict: bool,
    /// Exact algebraic test: `ρ1 ρ0^{−1} ∈ M0`.
    pub necessary_condition: bool,
    /// Same test with the roles of the states swapped.
    pub necessary_condition_swapped: bool,
    /// Optimal-test projections agree at every sampled threshold.
    pub projections_match: bool,
    /// Bayes errors agree at every sampled prior.
    pub errors_match: bool,
    pub grid: Vec<GridPoint>,
    pub lambda_grid: Vec<LambdaPoint>,
    pub max_error_gap: f64,
}

/// Deduplicates within an absolute-plus-relative width and returns the
/// sorted values together with their consecutive midpoints.
fn threshold_grid(mut anchors: Vec<f64>) -> Vec<f64> {
    anchors.retain(|t| t.is_finite() && *t >= 0.0);
    anchors.sort_by(|a, b| a.partial_cmp(b).expect("finite by construction"));
    anchors.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * (1.0 + b.abs()));
    let mut grid = vec![0.0];
    for pair in anchors.windows(2) {
        grid.push(0.5 * (pair[0] + pair[1]));
    }
    if let Some(max) = anchors.last() {
        grid.push(max * 1.1);
    }
    grid.extend_from_slice(&anchors);
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite by construction"));
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * (1.0 + b.abs()));
    grid
}

/// Kernel slack for a split of `ρ1 − tρ0` whose threshold came from a
/// computed spectrum.
fn split_zero_tol(dim: usize, t: f64, tol: f64) -> f64 {
    default_zero_tol(dim, 1.0 + t).max(tol * (1.0 + t))
}

/// Decides 2-sufficiency: `M0` contains a Bayes optimal test for every
/// prior. Three independent probes are combined:
///
/// * the exact membership `ρ1 ρ0^{−1} ∈ M0` (necessary by the structure of
///   optimal tests; also evaluated with the states swapped, and reported
///   separately);
/// * equality of the optimal-test projections for the full and restricted
///   pairs, sampled at every eigenvalue of either likelihood operator, at
///   all consecutive midpoints, at 0 and beyond the spectrum. The
///   projections are piecewise constant in `t` with jumps only at
///   eigenvalues, so this grid certifies all thresholds;
/// * equality of full and restricted minimum Bayes errors on a uniform
///   prior grid.
pub fn check_2sufficiency(
    alg: &Subalgebra,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    tol: f64,
    lambda_grid_size: usize,
) -> Result<TwoSufficiencyReport> {
    if lambda_grid_size < 2 {
        return Err(Error::InvalidInput(format!(
            "prior grid needs at least 2 points, got {lambda_grid_size}"
        )));
    }
    let r0 = alg.restrict_state(rho0)?;
    let r1 = alg.restrict_state(rho1)?;

    let ratio = rho1.matrix() * rho0.power(-1.0);
    let necessary_condition = alg.contains(&ratio, tol)?.is_member;
    let ratio_swapped = rho0.matrix() * rho1.power(-1.0);
    let necessary_condition_swapped = alg.contains(&ratio_swapped, tol)?.is_member;

    let d = rn_derivative(rho0, rho1);
    let d0 = rn_derivative(&r0, &r1);
    let mut anchors = crate::hermitian::eig_hermitian(&d, None)?.eigenvalues().to_vec();
    anchors.extend_from_slice(crate::hermitian::eig_hermitian(&d0, None)?.eigenvalues());

    let mut grid = Vec::new();
    let mut projections_match = true;
    for t in threshold_grid(anchors) {
        let zt = split_zero_tol(rho0.dim(), t, tol);
        let full = np_decomposition(rho0, rho1, t, Some(zt))?;
        let restricted = np_decomposition(&r0, &r1, t, Some(zt))?;
        let plus_deviation = (full.plus.matrix() - restricted.plus.matrix()).norm();
        let zero_deviation = (full.zero.matrix() - restricted.zero.matrix()).norm();
        let point = GridPoint {
            t,
            plus_deviation,
            zero_deviation,
            rank_p_zero: full.zero.rank(),
            rank_q_zero: restricted.zero.rank(),
        };
        if plus_deviation > tol
            || zero_deviation > tol
            || point.rank_p_zero != point.rank_q_zero
        {
            projections_match = false;
        }
        grid.push(point);
    }

    let mut lambda_grid = Vec::with_capacity(lambda_grid_size);
    let mut max_error_gap: f64 = 0.0;
    for k in 0..lambda_grid_size {
        let lambda = k as f64 / (lambda_grid_size - 1) as f64;
        let full_error = bayes_error(rho0, rho1, lambda)?;
        let restricted_error = bayes_error(&r0, &r1, lambda)?;
        max_error_gap = max_error_gap.max((restricted_error - full_error).abs());
        lambda_grid.push(LambdaPoint {
            lambda,
            full_error,
            restricted_error,
        });
    }
    let errors_match = max_error_gap <= tol;

    if projections_match != errors_match {
        return Err(Error::InternalInconsistency(format!(
            "optimal-test probes disagree at tol {tol:.1e}: projections match = \
             {projections_match}, errors match = {errors_match} (max error gap {max_error_gap:.3e})"
        )));
    }
    if projections_match && errors_match && !necessary_condition {
        return Err(Error::InternalInconsistency(format!(
            "projection and error probes pass but ρ1ρ0^{{−1}} membership fails at tol {tol:.1e}"
        )));
    }

    Ok(TwoSufficiencyReport {
        verdict: necessary_condition && projections_match && errors_match,
        necessary_condition,
        necessary_condition_swapped,
        projections_match,
        errors_match,
        grid,
        lambda_grid,
        max_error_gap,
    })
}

/// Structural hypotheses under which 2-sufficiency is known to upgrade to
/// sufficiency.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CaseLabels {
    /// `M0` is invariant under the modular flows of both states
    /// (generator test: `[ln ρ, M0] ⊆ M0`).
    pub modular_invariance: bool,
    /// All elements of `M0` commute.
    pub commutative_algebra: bool,
    /// `[ρ0, ρ1] = 0`.
    pub commuting_states: bool,
}

impl CaseLabels {
    pub fn any(&self) -> bool {
        self.modular_invariance || self.commutative_algebra || self.commuting_states
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.modular_invariance {
            out.push("modular_invariance");
        }
        if self.commutative_algebra {
            out.push("commutative_algebra");
        }
        if self.commuting_states {
            out.push("commuting_states");
        }
        out
    }
}

/// Evaluates the three structural hypotheses at the default tolerance.
pub fn classify_case(
    alg: &Subalgebra,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<CaseLabels> {
    let tol = DEFAULT_TOL;
    let modular_invariance =
        alg.is_modular_invariant(rho0, tol)? && alg.is_modular_invariant(rho1, tol)?;
    let commutator = rho0.matrix() * rho1.matrix() - rho1.matrix() * rho0.matrix();
    Ok(CaseLabels {
        modular_invariance,
        commutative_algebra: alg.is_commutative(tol),
        commuting_states: commutator.norm() <= tol,
    })
}

/// 2-sufficiency of `M0^{⊗n}` for the n-fold product states.
pub fn check_2n_sufficiency(
    alg: &Subalgebra,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    n: usize,
    tol: f64,
    cap: usize,
    lambda_grid_size: usize,
) -> Result<TwoSufficiencyReport> {
    let alg_n = alg.tensor_power(n, cap)?;
    let rho0_n = rho0.tensor_power(n, cap)?;
    let rho1_n = rho1.tensor_power(n, cap)?;
    check_2sufficiency(&alg_n, &rho0_n, &rho1_n, tol, lambda_grid_size)
}

/// `ξ(ρ0, ρ1) − ξ(E(ρ0), E(ρ1))`: how much of the optimal error exponent
/// the restriction forfeits. Nonnegative up to roundoff; zero for
/// sufficient subalgebras.
pub fn chernoff_gap(
    alg: &Subalgebra,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<f64> {
    let full = chernoff_distance(rho0, rho1)?;
    let restricted = chernoff_distance(&alg.restrict_state(rho0)?, &alg.restrict_state(rho1)?)?;
    Ok(full.xi - restricted.xi)
}
