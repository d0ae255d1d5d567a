//! Report assembly: runs the full verdict pipeline on a validated problem
//! and packages the results as plain serializable documents. This is the
//! layer the command line binds to; everything here is also usable as a
//! library API for batch drivers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{bs_entropy, chernoff_distance, umegaki_entropy};
use crate::problem::{EncodedMatrix, Options, Problem};
use crate::sufficiency::{
    check_2sufficiency, check_sufficiency, classify_case, CaseLabels, SufficiencyReport,
    TwoSufficiencyReport,
};
use crate::testing::{
    bayes_error, error_pair, np_decomposition, simulate_test, ErrorPair, Simulation, TestOperator,
};

/// Shape summary of the subalgebra under analysis.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSummary {
    pub ambient_dim: usize,
    pub linear_dimension: usize,
    pub generator_count: usize,
    pub commutative: bool,
}

/// Structural case labels plus their list form.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    #[serde(flatten)]
    pub flags: CaseLabels,
    pub labels: Vec<String>,
}

/// Relative entropies of the pair, full and restricted, in nats.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub umegaki: f64,
    pub bs: f64,
    pub restricted_umegaki: f64,
    pub restricted_bs: f64,
    pub umegaki_gap: f64,
    pub bs_gap: f64,
}

/// Chernoff exponents of the pair, full and restricted.
#[derive(Debug, Clone, Serialize)]
pub struct ChernoffReport {
    pub xi: f64,
    pub s_star: f64,
    pub restricted_xi: f64,
    pub restricted_s_star: f64,
    pub gap: f64,
}

/// The full analysis document.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub dim: usize,
    pub options: Options,
    pub algebra: AlgebraSummary,
    pub cases: CaseReport,
    pub sufficiency: SufficiencyReport,
    pub two_sufficiency: TwoSufficiencyReport,
    pub entropies: EntropyReport,
    pub chernoff: ChernoffReport,
}

pub fn entropies(problem: &Problem) -> Result<EntropyReport> {
    let r0 = problem.algebra.restrict_state(&problem.rho0)?;
    let r1 = problem.algebra.restrict_state(&problem.rho1)?;
    let umegaki = umegaki_entropy(&problem.rho1, &problem.rho0);
    let bs = bs_entropy(&problem.rho1, &problem.rho0)?;
    let restricted_umegaki = umegaki_entropy(&r1, &r0);
    let restricted_bs = bs_entropy(&r1, &r0)?;
    Ok(EntropyReport {
        umegaki,
        bs,
        restricted_umegaki,
        restricted_bs,
        umegaki_gap: umegaki - restricted_umegaki,
        bs_gap: bs - restricted_bs,
    })
}

fn chernoff_report(problem: &Problem) -> Result<ChernoffReport> {
    let full = chernoff_distance(&problem.rho0, &problem.rho1)?;
    let r0 = problem.algebra.restrict_state(&problem.rho0)?;
    let r1 = problem.algebra.restrict_state(&problem.rho1)?;
    let restricted = chernoff_distance(&r0, &r1)?;
    Ok(ChernoffReport {
        xi: full.xi,
        s_star: full.s_star,
        restricted_xi: restricted.xi,
        restricted_s_star: restricted.s_star,
        gap: full.xi - restricted.xi,
    })
}

/// Runs every verdict on the problem.
pub fn analyze(problem: &Problem) -> Result<AnalysisReport> {
    let alg = &problem.algebra;
    let opts = &problem.options;
    let flags = classify_case(alg, &problem.rho0, &problem.rho1)?;
    Ok(AnalysisReport {
        dim: problem.rho0.dim(),
        options: *opts,
        algebra: AlgebraSummary {
            ambient_dim: alg.ambient_dim(),
            linear_dimension: alg.linear_dimension(),
            generator_count: alg.generators().len(),
            commutative: alg.is_commutative(opts.tol),
        },
        cases: CaseReport {
            flags,
            labels: flags.labels().into_iter().map(str::to_owned).collect(),
        },
        sufficiency: check_sufficiency(alg, &problem.rho0, &problem.rho1, opts.tol)?,
        two_sufficiency: check_2sufficiency(
            alg,
            &problem.rho0,
            &problem.rho1,
            opts.tol,
            opts.lambda_grid,
        )?,
        entropies: entropies(problem)?,
        chernoff: chernoff_report(problem)?,
    })
}

/// One row of the error-exponent convergence table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveRow {
    pub n: usize,
    /// Minimum Bayes error for the n-fold product pair at prior 1/2.
    pub error: f64,
    /// `−(1/n)·ln error`, the per-copy exponent.
    pub rate: f64,
    /// The Chernoff exponent the rates approach from above.
    pub xi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub options: Options,
    pub rows: Vec<CurveRow>,
}

/// Tabulates the equal-prior error of the n-fold product problem for
/// `n = 1..n_max` against the Chernoff exponent.
pub fn chernoff_curve(problem: &Problem, n_max: usize) -> Result<CurveReport> {
    let xi = chernoff_distance(&problem.rho0, &problem.rho1)?.xi;
    let cap = problem.options.tensor_cap;
    // The largest power decides the outcome, so reject a doomed request
    // before spending minutes on the in-cap rows.
    let requested = u32::try_from(n_max)
        .ok()
        .and_then(|n| problem.rho0.dim().checked_pow(n))
        .unwrap_or(usize::MAX);
    if requested > cap {
        return Err(Error::ResourceLimit { requested, cap });
    }
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let rho0_n = problem.rho0.tensor_power(n, cap)?;
        let rho1_n = problem.rho1.tensor_power(n, cap)?;
        let error = bayes_error(&rho0_n, &rho1_n, 0.5)?;
        rows.push(CurveRow {
            n,
            error,
            rate: -error.ln() / n as f64,
            xi,
        });
    }
    Ok(CurveReport {
        options: problem.options,
        rows,
    })
}

/// An estimate with its exact counterpart and a binomial 3σ band.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandedEstimate {
    pub exact: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub lower_3sigma: f64,
    pub upper_3sigma: f64,
    pub within_band: bool,
}

impl BandedEstimate {
    fn new(exact: f64, empirical: f64, shots: u64) -> BandedEstimate {
        let std_error = (exact * (1.0 - exact) / shots as f64).sqrt();
        let lower_3sigma = exact - 3.0 * std_error;
        let upper_3sigma = exact + 3.0 * std_error;
        BandedEstimate {
            exact,
            empirical,
            std_error,
            lower_3sigma,
            upper_3sigma,
            within_band: (lower_3sigma..=upper_3sigma).contains(&empirical),
        }
    }
}

/// Empirical error report for the canonical optimal test at one prior.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub options: Options,
    pub lambda: f64,
    /// Likelihood threshold `λ/(1−λ)`; absent for the degenerate prior
    /// `λ = 1`, where the optimal test never rejects.
    pub t: Option<f64>,
    pub shots: u64,
    pub seed: u64,
    pub exact: ErrorPair,
    pub alpha: BandedEstimate,
    pub beta: BandedEstimate,
    pub rejections_under_rho0: u64,
    pub rejections_under_rho1: u64,
}

/// Samples the canonical optimal test at prior `lambda` under both states:
/// the null-state run uses `seed`, the alternative run `seed + 1`.
pub fn simulate(
    problem: &Problem,
    lambda: f64,
    shots: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(crate::error::Error::InvalidInput(format!(
            "prior weight must lie in [0, 1], got {lambda}"
        )));
    }
    let (t, test) = if lambda < 1.0 {
        let t = lambda / (1.0 - lambda);
        let dec = np_decomposition(&problem.rho0, &problem.rho1, t, None)?;
        (Some(t), dec.canonical_test())
    } else {
        (None, TestOperator::zero(problem.rho0.dim()))
    };
    let exact = error_pair(&test, &problem.rho0, &problem.rho1);
    let under_rho0: Simulation = simulate_test(&test, &problem.rho0, shots, seed)?;
    let under_rho1 = simulate_test(&test, &problem.rho1, shots, seed.wrapping_add(1))?;
    Ok(SimulationReport {
        options: problem.options,
        lambda,
        t,
        shots,
        seed,
        exact,
        alpha: BandedEstimate::new(exact.alpha, under_rho0.estimate, shots),
        beta: BandedEstimate::new(exact.beta, 1.0 - under_rho1.estimate, shots),
        rejections_under_rho0: under_rho0.rejections,
        rejections_under_rho1: under_rho1.rejections,
    })
}

/// Optimal-test decomposition at one threshold, with operators dumped in
/// file encoding.
#[derive(Debug, Clone, Serialize)]
pub struct NpReport {
    pub options: Options,
    pub t: f64,
    pub rank_plus: usize,
    pub rank_minus: usize,
    pub rank_zero: usize,
    pub plus: EncodedMatrix,
    pub minus: EncodedMatrix,
    pub zero: EncodedMatrix,
    /// Errors of the canonical test `M = P_plus`.
    pub canonical_errors: ErrorPair,
}

pub fn np_test(problem: &Problem, t: f64) -> Result<NpReport> {
    let dec = np_decomposition(&problem.rho0, &problem.rho1, t, None)?;
    let canonical = dec.canonical_test();
    Ok(NpReport {
        options: problem.options,
        t,
        rank_plus: dec.plus.rank(),
        rank_minus: dec.minus.rank(),
        rank_zero: dec.zero.rank(),
        plus: EncodedMatrix::from(dec.plus.matrix()),
        minus: EncodedMatrix::from(dec.minus.matrix()),
        zero: EncodedMatrix::from(dec.zero.matrix()),
        canonical_errors: error_pair(&canonical, &problem.rho0, &problem.rho1),
    })
}
