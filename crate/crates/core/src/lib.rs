//! Numerical engine for the generalized (non-linear) sl(2) algebra defined by
//! a polynomial characteristic function `f`.
//!
//! The algebra on generators `J0`, `J+`, `J-` closes through `f`:
//!
//! ```text
//! J0 J- = J- f(J0)
//! J+ J0 = f(J0) J+
//! [J+, J-] = J0 (J0 + 1) - f(J0) (f(J0) + 1)
//! ```
//!
//! and `f(x) = x - 1` recovers ordinary sl(2). Finite-dimensional
//! representations are ladders of `J0` eigenvalues obtained by iterating `f`
//! from a highest weight; the ladder closes after `d` steps either because
//! the highest weight solves the cut condition `a + f^d(a) + 1 = 0` or
//! because it sits on a d-cycle of `f`.
//!
//! Module map:
//! - [`charfunc`]: the characteristic function (evaluation, iteration, derivative)
//! - [`dynsys`]: fixed points, cycles, stability, discriminant regimes, cobweb traces
//! - [`hwsolver`]: highest weights from cut conditions and cycles; weight ladders
//! - [`repbuilder`]: explicit d-by-d matrices for `J0`, `J+`, `J-`, and the Casimir
//! - [`algver`]: numerical verification of every algebraic relation
//! - [`qmap`]: the sl_q(2) generators and the functional map onto the linear case
//! - [`jsonio`]: JSON/CSV wire formats shared by the CLI and other front ends

pub mod algver;
pub mod charfunc;
pub mod dynsys;
pub mod error;
pub mod hwsolver;
pub mod jsonio;
pub mod qmap;
pub mod repbuilder;
mod roots;
pub mod tol;

pub use charfunc::CharFunc;
pub use dynsys::{AllowedRegion, CycleReport, DeltaClassification, Regime, Stability};
pub use error::{Error, Result};
pub use hwsolver::{CutSolution, StartClass, Termination, WeightLadder};
pub use qmap::{HalfInt, QDeformParams, Slq2};
pub use repbuilder::{BuildMode, Representation};
