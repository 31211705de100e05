//! JSON wire formats shared by the CLI and other front ends.
//!
//! Matrices travel as row-major nested arrays; a build document bundles the
//! characteristic function, the ladder, and the four matrices so a verifier
//! can re-check everything without recomputing the solve.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charfunc::CharFunc;
use crate::error::{Error, Result};
use crate::hwsolver::{Termination, WeightLadder};
use crate::repbuilder::{BuildMode, Representation};

/// Row-major nested array form of a matrix.
pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Rebuilds a square matrix from row-major nested arrays.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if rows.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(
            "matrix rows must all have the same length as the row count".into(),
        ));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Serialized weight ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderJson {
    pub alpha_j: f64,
    pub d: usize,
    pub alphas: Vec<f64>,
    pub nsq: Vec<f64>,
    pub termination: Termination,
    pub unitary: bool,
    /// `|nsq[d-1]|`
    pub residual: f64,
}

impl LadderJson {
    pub fn from_ladder(ladder: &WeightLadder) -> Self {
        LadderJson {
            alpha_j: ladder.alpha_j(),
            d: ladder.d,
            alphas: ladder.alphas.clone(),
            nsq: ladder.nsq.clone(),
            termination: ladder.termination,
            unitary: ladder.unitary,
            residual: ladder.termination_residual(),
        }
    }

    /// Reattaches the characteristic function to recover a full ladder.
    pub fn into_ladder(self, f: &CharFunc) -> Result<WeightLadder> {
        if self.d == 0 || self.alphas.len() != self.d || self.nsq.len() != self.d {
            return Err(Error::DimensionMismatch(
                "ladder arrays disagree with d".into(),
            ));
        }
        Ok(WeightLadder {
            f: f.clone(),
            d: self.d,
            alphas: self.alphas,
            nsq: self.nsq,
            termination: self.termination,
            unitary: self.unitary,
        })
    }
}

/// Serialized representation matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationJson {
    pub j0: Vec<Vec<f64>>,
    pub jplus: Vec<Vec<f64>>,
    pub jminus: Vec<Vec<f64>>,
    pub casimir: Vec<Vec<f64>>,
}

impl RepresentationJson {
    pub fn from_representation(rep: &Representation) -> Self {
        RepresentationJson {
            j0: matrix_to_rows(&rep.j0),
            jplus: matrix_to_rows(&rep.jplus),
            jminus: matrix_to_rows(&rep.jminus),
            casimir: matrix_to_rows(&rep.casimir),
        }
    }
}

/// Self-contained output of a build: function, mode, ladder, matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildDocument {
    pub function: CharFunc,
    pub mode: BuildMode,
    pub ladder: LadderJson,
    pub representation: RepresentationJson,
}

impl BuildDocument {
    pub fn new(ladder: &WeightLadder, rep: &Representation) -> Self {
        BuildDocument {
            function: ladder.f.clone(),
            mode: rep.mode,
            ladder: LadderJson::from_ladder(ladder),
            representation: RepresentationJson::from_representation(rep),
        }
    }

    /// Reconstructs the in-memory representation for verification.
    pub fn to_representation(&self) -> Result<Representation> {
        let j0 = rows_to_matrix(&self.representation.j0)?;
        let jplus = rows_to_matrix(&self.representation.jplus)?;
        let jminus = rows_to_matrix(&self.representation.jminus)?;
        let casimir = rows_to_matrix(&self.representation.casimir)?;
        let d = j0.nrows();
        if jplus.nrows() != d || jminus.nrows() != d || casimir.nrows() != d {
            return Err(Error::DimensionMismatch(
                "matrices in the document have different sizes".into(),
            ));
        }
        let hermitian_pair = jminus == jplus.transpose();
        Ok(Representation {
            d,
            j0,
            jplus,
            jminus,
            casimir,
            mode: self.mode,
            hermitian_pair,
        })
    }
}
