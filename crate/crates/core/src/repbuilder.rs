//! Explicit d-by-d matrices for `J0`, `J+`, `J-`, and the Casimir.
//!
//! Basis convention: index `m = 0..d-1` labels the state with `J0`
//! eigenvalue `alphas[m]`, so the highest weight sits in the first slot,
//! `J-` populates the first subdiagonal and `J+` the first superdiagonal.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charfunc::CharFunc;
use crate::error::{Error, Result};
use crate::hwsolver::WeightLadder;
use crate::tol;

/// Ladder-coefficient convention of a built representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildMode {
    /// `J-` carries `N_m = sqrt(nsq[m])` and `J+ = transpose(J-)`.
    /// Requires a unitary ladder.
    Unitary,
    /// `J-` carries `nsq[m]` and `J+` carries 1, which keeps every product
    /// relation intact even when some `nsq[m] < 0`, at the price of the
    /// adjoint pairing.
    Algebraic,
}

/// Concrete matrices of a d-dimensional representation.
#[derive(Debug, Clone)]
pub struct Representation {
    pub d: usize,
    pub j0: DMatrix<f64>,
    pub jplus: DMatrix<f64>,
    pub jminus: DMatrix<f64>,
    pub casimir: DMatrix<f64>,
    pub mode: BuildMode,
    /// `jminus == transpose(jplus)` exactly.
    pub hermitian_pair: bool,
}

/// Builds the matrices of a weight ladder.
///
/// Unitary mode rejects ladders with a negative interior `N_m^2`, naming the
/// offending entry; algebraic mode accepts any ladder.
pub fn build(ladder: &WeightLadder, mode: BuildMode) -> Result<Representation> {
    let d = ladder.d;
    let j0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(ladder.alphas.clone()));
    let mut jplus = DMatrix::zeros(d, d);
    let mut jminus = DMatrix::zeros(d, d);

    match mode {
        BuildMode::Unitary => {
            if let Some((index, &value)) = ladder
                .nsq
                .iter()
                .take(d - 1)
                .enumerate()
                .find(|(_, &v)| v < -tol::UNITARY)
            {
                return Err(Error::NonUnitary { index, value });
            }
            for m in 0..d - 1 {
                let n = ladder.nsq[m].max(0.0).sqrt();
                jminus[(m + 1, m)] = n;
                jplus[(m, m + 1)] = n;
            }
        }
        BuildMode::Algebraic => {
            for m in 0..d - 1 {
                jminus[(m + 1, m)] = ladder.nsq[m];
                jplus[(m, m + 1)] = 1.0;
            }
        }
    }

    let hermitian_pair = jminus == jplus.transpose();
    let mut rep = Representation {
        d,
        j0,
        jplus,
        jminus,
        casimir: DMatrix::zeros(d, d),
        mode,
        hermitian_pair,
    };
    rep.casimir = casimir(&rep, &ladder.f)?;
    Ok(rep)
}

/// The Casimir operator
/// `C = (J+ J- + J- J+ + J0 (J0 + 1) + f(J0) (f(J0) + 1)) / 2`,
/// with `f` applied entrywise to the diagonal of `J0`.
pub fn casimir(rep: &Representation, f: &CharFunc) -> Result<DMatrix<f64>> {
    let d = rep.d;
    if rep.j0.nrows() != d || rep.jplus.nrows() != d || rep.jminus.nrows() != d {
        return Err(Error::DimensionMismatch(format!(
            "representation matrices disagree with d = {d}"
        )));
    }
    let fj0 = apply_to_diagonal(&rep.j0, f)?;
    let poly = |m: &DMatrix<f64>| m * (m + DMatrix::identity(d, d));
    let sum = &rep.jplus * &rep.jminus + &rep.jminus * &rep.jplus + poly(&rep.j0) + poly(&fj0);
    Ok(sum * 0.5)
}

/// `f(J0)` for diagonal `J0`: entrywise application to the diagonal.
pub fn apply_to_diagonal(j0: &DMatrix<f64>, f: &CharFunc) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(j0.nrows(), j0.ncols());
    for i in 0..j0.nrows().min(j0.ncols()) {
        out[(i, i)] = f.eval(j0[(i, i)])?;
    }
    Ok(out)
}

/// Plain-text aligned dump, handy for docs and terminals.
pub fn format_matrix(m: &DMatrix<f64>) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| format!("{:+.6}", m[(i, j)])).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|s| s.len())
        .max()
        .unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let body = row
                .iter()
                .map(|s| format!("{s:>width$}"))
                .collect::<Vec<_>>()
                .join("  ");
            format!("[ {body} ]")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
