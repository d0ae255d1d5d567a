//! Problem files: a JSON document with two states, optional subalgebra
//! generators and an options block. Complex entries are two-element
//! `[re, im]` arrays, matrices are row-major, so fixtures stay hand-editable
//! and portable across languages.

use serde::{Deserialize, Serialize};

use crate::algebra::Subalgebra;
use crate::error::{Error, Result};
use crate::geometry::DensityMatrix;
use crate::hermitian::{CMatrix, Complex64};

/// Tolerances, grid sizes and the simulation seed. Echoed into every report
/// so verdicts stay reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// Decision tolerance for all verdicts.
    pub tol: f64,
    /// Number of uniformly spaced priors in error-equality grids.
    pub lambda_grid: usize,
    /// Cap on the dimension produced by tensor powers.
    pub tensor_cap: usize,
    /// Reference seed for outcome sampling.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: crate::sufficiency::DEFAULT_TOL,
            lambda_grid: crate::sufficiency::DEFAULT_LAMBDA_GRID,
            tensor_cap: crate::hermitian::DEFAULT_TENSOR_CAP,
            seed: 7,
        }
    }
}

/// On-disk description of a testing problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim: usize,
    /// Null-hypothesis state, row-major `[re, im]` entries.
    pub rho0: Vec<[f64; 2]>,
    /// Alternative state, same encoding.
    pub rho1: Vec<[f64; 2]>,
    /// Subalgebra generators, same encoding each. Empty means the scalars.
    #[serde(default)]
    pub generators: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub options: Options,
}

/// Row-major `[re, im]` encoding of a square matrix, used by reports that
/// dump operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedMatrix {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&CMatrix> for EncodedMatrix {
    fn from(m: &CMatrix) -> Self {
        EncodedMatrix {
            dim: m.nrows(),
            entries: matrix_to_entries(m),
        }
    }
}

pub fn matrix_to_entries(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

pub fn entries_to_matrix(dim: usize, entries: &[[f64; 2]]) -> Result<CMatrix> {
    if entries.len() != dim * dim {
        return Err(Error::Parse(format!(
            "matrix for dimension {dim} needs {} entries, got {}",
            dim * dim,
            entries.len()
        )));
    }
    for (k, e) in entries.iter().enumerate() {
        if !e[0].is_finite() || !e[1].is_finite() {
            return Err(Error::Parse(format!(
                "matrix entry {k} is not finite: [{}, {}]",
                e[0], e[1]
            )));
        }
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let e = entries[i * dim + j];
        Complex64::new(e[0], e[1])
    }))
}

/// A parsed and validated problem, ready for analysis.
#[derive(Debug, Clone)]
pub struct Problem {
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
    pub algebra: Subalgebra,
    pub options: Options,
}

impl ProblemFile {
    /// Parses the JSON document; anything the format does not promise is a
    /// parse error.
    pub fn from_slice(bytes: &[u8]) -> Result<ProblemFile> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    /// Shape-checks the arrays, validates both states, closes the generator
    /// list and sanity-checks the options.
    pub fn validate(&self) -> Result<Problem> {
        if self.dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let opts = &self.options;
        if opts.tol.is_nan() || opts.tol <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "options.tol must be positive, got {}",
                opts.tol
            )));
        }
        if opts.lambda_grid < 2 {
            return Err(Error::InvalidInput(format!(
                "options.lambda_grid must be at least 2, got {}",
                opts.lambda_grid
            )));
        }
        if opts.tensor_cap < self.dim {
            return Err(Error::InvalidInput(format!(
                "options.tensor_cap {} is below the problem dimension {}",
                opts.tensor_cap, self.dim
            )));
        }

        let rho0 = DensityMatrix::new(entries_to_matrix(self.dim, &self.rho0)?)
            .map_err(|e| e.tag_field("rho0"))?;
        let rho1 = DensityMatrix::new(entries_to_matrix(self.dim, &self.rho1)?)
            .map_err(|e| e.tag_field("rho1"))?;

        let algebra = if self.generators.is_empty() {
            Subalgebra::trivial(self.dim)
        } else {
            let gens = self
                .generators
                .iter()
                .map(|g| entries_to_matrix(self.dim, g))
                .collect::<Result<Vec<_>>>()?;
            Subalgebra::close_generators(&gens, None)?
        };

        Ok(Problem {
            rho0,
            rho1,
            algebra,
            options: *opts,
        })
    }
}

impl Error {
    /// Prefixes the offending field name onto a validation error message.
    fn tag_field(self, field: &str) -> Error {
        match self {
            Error::InvalidState(msg) => Error::InvalidState(format!("{field}: {msg}")),
            Error::InvalidInput(msg) => Error::InvalidInput(format!("{field}: {msg}")),
            other => other,
        }
    }
}
