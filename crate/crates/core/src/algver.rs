//! Numerical verification of the algebraic relations a representation must
//! satisfy. All residuals are Frobenius norms divided by the dimension, so
//! thresholds carry across d.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charfunc::CharFunc;
use crate::error::{Error, Result};
use crate::repbuilder::{apply_to_diagonal, casimir, BuildMode, Representation};
use crate::tol;

/// One relation residual with its pass verdict.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RelationCheck {
    pub residual: f64,
    pub pass: bool,
}

impl RelationCheck {
    fn new(residual: f64, tolerance: f64) -> Self {
        RelationCheck {
            residual,
            pass: residual < tolerance,
        }
    }
}

/// Residuals of the defining relations, the Jacobi identity, the Casimir
/// commutators, highest-weight annihilation, and the adjoint pairing.
///
/// `hermiticity` only counts toward the verdict when the representation was
/// built in unitary mode; algebraic-mode matrices trade the adjoint pairing
/// for validity at negative `N_m^2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationReport {
    pub r1: RelationCheck,
    pub r2: RelationCheck,
    pub r3: RelationCheck,
    pub jacobi: RelationCheck,
    pub casimir_j0: RelationCheck,
    pub casimir_jplus: RelationCheck,
    pub casimir_jminus: RelationCheck,
    pub highest_weight: RelationCheck,
    pub hermiticity: RelationCheck,
    pub hermiticity_required: bool,
    pub tolerance: f64,
    pub passed: bool,
}

impl RelationReport {
    /// (name, check) pairs in report order.
    pub fn entries(&self) -> Vec<(&'static str, RelationCheck)> {
        vec![
            ("r1", self.r1),
            ("r2", self.r2),
            ("r3", self.r3),
            ("jacobi", self.jacobi),
            ("casimir_j0", self.casimir_j0),
            ("casimir_jplus", self.casimir_jplus),
            ("casimir_jminus", self.casimir_jminus),
            ("highest_weight", self.highest_weight),
            ("hermiticity", self.hermiticity),
        ]
    }
}

/// Residual triple for the closed-form commutator variants of one family.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResidualTriple {
    pub lowering: f64,
    pub raising: f64,
    pub commutator: f64,
}

impl ResidualTriple {
    pub fn max(&self) -> f64 {
        self.lowering.max(self.raising).max(self.commutator)
    }
}

fn comm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

fn poly(m: &DMatrix<f64>) -> DMatrix<f64> {
    m * (m + DMatrix::identity(m.nrows(), m.ncols()))
}

/// Checks the defining relations with the default pass threshold.
pub fn check_relations(rep: &Representation, f: &CharFunc) -> Result<RelationReport> {
    check_relations_with(rep, f, tol::RELATION_PASS)
}

/// Checks the defining relations against an explicit threshold.
pub fn check_relations_with(
    rep: &Representation,
    f: &CharFunc,
    tolerance: f64,
) -> Result<RelationReport> {
    let d = rep.d;
    if rep.j0.nrows() != d || rep.jplus.nrows() != d || rep.jminus.nrows() != d {
        return Err(Error::DimensionMismatch(
            "representation matrices disagree on dimension".into(),
        ));
    }
    let dim = d as f64;
    let fj0 = apply_to_diagonal(&rep.j0, f)?;
    let (j0, jp, jm) = (&rep.j0, &rep.jplus, &rep.jminus);

    let r1 = (j0 * jm - jm * &fj0).norm() / dim;
    let r2 = (jp * j0 - &fj0 * jp).norm() / dim;
    let r3 = (comm(jp, jm) - (poly(j0) - poly(&fj0))).norm() / dim;

    let jacobi = (comm(j0, &comm(jp, jm)) + comm(jm, &comm(j0, jp)) + comm(jp, &comm(jm, j0)))
        .norm()
        / dim;

    let c = casimir(rep, f)?;
    let casimir_j0 = comm(&c, j0).norm() / dim;
    let casimir_jplus = comm(&c, jp).norm() / dim;
    let casimir_jminus = comm(&c, jm).norm() / dim;

    let highest_weight = jp.column(0).norm() / dim;
    let hermiticity = (jm - jp.transpose()).norm() / dim;
    let hermiticity_required = rep.mode == BuildMode::Unitary;

    let report = RelationReport {
        r1: RelationCheck::new(r1, tolerance),
        r2: RelationCheck::new(r2, tolerance),
        r3: RelationCheck::new(r3, tolerance),
        jacobi: RelationCheck::new(jacobi, tolerance),
        casimir_j0: RelationCheck::new(casimir_j0, tolerance),
        casimir_jplus: RelationCheck::new(casimir_jplus, tolerance),
        casimir_jminus: RelationCheck::new(casimir_jminus, tolerance),
        highest_weight: RelationCheck::new(highest_weight, tolerance),
        hermiticity: RelationCheck::new(hermiticity, tolerance),
        hermiticity_required,
        tolerance,
        passed: false,
    };
    let core_pass = report.r1.pass
        && report.r2.pass
        && report.r3.pass
        && report.jacobi.pass
        && report.casimir_j0.pass
        && report.casimir_jplus.pass
        && report.casimir_jminus.pass
        && report.highest_weight.pass;
    let passed = core_pass && (!hermiticity_required || report.hermiticity.pass);
    Ok(RelationReport { passed, ..report })
}

/// Verifies the r-deformed commutator form of the linear family:
/// `[J0, J-]_r = -s J-`, `[J0, J+]_{1/r} = (s/r) J+`, and the closed-form
/// `[J+, J-]` polynomial, where `[A, B]_r = AB - r BA`.
pub fn check_rdeformed_form(rep: &Representation, f: &CharFunc) -> Result<ResidualTriple> {
    let (r, s) = match *f {
        CharFunc::Linear { r, s } => (r, s),
        _ => {
            return Err(Error::Precondition(
                "r-deformed form applies to linear characteristic functions".into(),
            ))
        }
    };
    if r == 0.0 {
        return Err(Error::Domain("r = 0 has no 1/r-deformed commutator".into()));
    }
    let d = rep.d as f64;
    let (j0, jp, jm) = (&rep.j0, &rep.jplus, &rep.jminus);
    let eye = DMatrix::identity(rep.d, rep.d);

    let lowering = (j0 * jm - r * (jm * j0) + s * jm).norm() / d;
    let raising = (j0 * jp - (jp * j0) / r - (s / r) * jp).norm() / d;
    let rhs = (1.0 - r * r) * poly2(j0) + (1.0 + 2.0 * r * s - r) * j0 + s * (1.0 - s) * eye;
    let commutator = (comm(jp, jm) - rhs).norm() / d;
    Ok(ResidualTriple {
        lowering,
        raising,
        commutator,
    })
}

/// Verifies the quadratic-family commutator form:
/// `[J0, J+]_{1/r} = -(1/r)(t J0^2 - s) J+`, `[J0, J-]_r = J- (t J0^2 - s)`,
/// and the quartic `[J+, J-]` polynomial.
pub fn check_quadratic_form(rep: &Representation, f: &CharFunc) -> Result<ResidualTriple> {
    let (t, r, s) = match *f {
        CharFunc::Quadratic { t, r, s } => (t, r, s),
        _ => {
            return Err(Error::Precondition(
                "quadratic form applies to quadratic characteristic functions".into(),
            ))
        }
    };
    if r == 0.0 {
        return Err(Error::Domain("r = 0 has no 1/r-deformed commutator".into()));
    }
    let d = rep.d as f64;
    let (j0, jp, jm) = (&rep.j0, &rep.jplus, &rep.jminus);
    let eye = DMatrix::identity(rep.d, rep.d);
    let tj0sq_minus_s = t * poly2(j0) - s * &eye;

    let raising = (j0 * jp - (jp * j0) / r + (&tj0sq_minus_s * jp) / r).norm() / d;
    let lowering = (j0 * jm - r * (jm * j0) - jm * &tj0sq_minus_s).norm() / d;

    let j0sq = poly2(j0);
    let j0cu = &j0sq * j0;
    let j0qu = &j0sq * &j0sq;
    let rhs = -t * t * j0qu - 2.0 * t * r * j0cu
        + (1.0 - (1.0 - s) * t - r * r + s * t) * j0sq
        + (1.0 - r * (1.0 - 2.0 * s)) * j0
        + s * (1.0 - s) * eye;
    let commutator = (comm(jp, jm) - rhs).norm() / d;
    Ok(ResidualTriple {
        lowering,
        raising,
        commutator,
    })
}

/// For the `r = 1` linear family, `J~+- = J+-/s` and
/// `J~0 = J0/s + (1-s)/(2s)` satisfy plain sl(2); returns those residuals.
pub fn check_case1_transform(rep: &Representation, f: &CharFunc) -> Result<ResidualTriple> {
    let s = match *f {
        CharFunc::Linear { r, s } => {
            if r != 1.0 {
                return Err(Error::Precondition(
                    "the sl(2) transform applies to the linear family with r = 1".into(),
                ));
            }
            s
        }
        _ => {
            return Err(Error::Precondition(
                "the sl(2) transform applies to the linear family with r = 1".into(),
            ))
        }
    };
    if !(s > 0.0) {
        return Err(Error::Precondition(format!(
            "the r = 1 family requires s > 0, got {s}"
        )));
    }
    let d = rep.d as f64;
    let eye = DMatrix::identity(rep.d, rep.d);
    let tilde0 = &rep.j0 / s + ((1.0 - s) / (2.0 * s)) * &eye;
    let tplus = &rep.jplus / s;
    let tminus = &rep.jminus / s;

    let raising = (comm(&tilde0, &tplus) - &tplus).norm() / d;
    let lowering = (comm(&tilde0, &tminus) + &tminus).norm() / d;
    let commutator = (comm(&tplus, &tminus) - 2.0 * tilde0).norm() / d;
    Ok(ResidualTriple {
        lowering,
        raising,
        commutator,
    })
}

fn poly2(m: &DMatrix<f64>) -> DMatrix<f64> {
    m * m
}
