//! sl_q(2) generators and the functional map onto the linear family.
//!
//! With `r = q^2`, the linear-family eigenvalues `r^m alpha_j - s [m]_r`
//! can be produced by acting with functions of `S3` on the standard sl_q(2)
//! representation of the same dimension, so `J0` and `J+` are images of
//! `S3`, `S+` under an explicit diagonal functional.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charfunc::CharFunc;
use crate::error::{Error, Result};
use crate::hwsolver;
use crate::repbuilder::{self, BuildMode};

/// Gauss number `[m]_r = (r^m - 1) / (r - 1)`, extended by continuity to
/// `[m]_1 = m`. Negative bases are defined for integer `m` only.
pub fn gauss_number(m: f64, r: f64) -> f64 {
    if (r - 1.0).abs() <= 1e-12 {
        return m;
    }
    let integer_m = m.fract() == 0.0 && m.abs() <= i32::MAX as f64;
    if (r - 1.0).abs() >= 0.5 {
        // Far from r = 1 the direct form has no cancellation and is exact
        // for integer arguments (e.g. [4]_2 = 15).
        let power = if integer_m { r.powi(m as i32) } else { r.powf(m) };
        (power - 1.0) / (r - 1.0)
    } else if r > 0.0 {
        // exp_m1 keeps precision when r^m is close to 1.
        (m * r.ln()).exp_m1() / (r - 1.0)
    } else {
        f64::NAN
    }
}

/// Symmetric q-bracket `[x] = (q^x - q^{-x}) / (q - q^{-1})`, extended by
/// continuity to `x` at `q = 1`. Defined for `q > 0`.
pub fn bracket_q(x: f64, q: f64) -> f64 {
    let lq = q.ln();
    if lq.abs() < 1e-14 {
        return x;
    }
    (x * lq).sinh() / lq.sinh()
}

/// Non-negative half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub fn from_twice(twice: u32) -> Self {
        HalfInt { twice }
    }

    pub fn try_from_f64(x: f64) -> Result<Self> {
        let twice = 2.0 * x;
        if !(x >= 0.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::Domain(format!(
                "j must be a non-negative half-integer, got {x}"
            )));
        }
        Ok(HalfInt {
            twice: twice as u32,
        })
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `d = 2j + 1`
    pub fn dimension(&self) -> usize {
        self.twice as usize + 1
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice % 2 == 0 {
            write!(out, "{}", self.twice / 2)
        } else {
            write!(out, "{}/2", self.twice)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"2"`, `"3/2"`, or `"1.5"`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |detail: &str| Error::Domain(format!("cannot parse j from {text:?}: {detail}"));
        if let Some((num, den)) = text.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad("bad numerator"))?;
            let den: u32 = den.trim().parse().map_err(|_| bad("bad denominator"))?;
            return match den {
                1 => Ok(HalfInt::from_twice(2 * num)),
                2 => Ok(HalfInt::from_twice(num)),
                _ => Err(bad("denominator must be 1 or 2")),
            };
        }
        let value: f64 = text.trim().parse().map_err(|_| bad("not a number"))?;
        HalfInt::try_from_f64(value)
    }
}

/// Parameters of the map from sl_q(2) to the linear family `f = q^2 x - s`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QDeformParams {
    pub q: f64,
    pub j: HalfInt,
    pub s: f64,
    pub alpha_j: f64,
}

impl QDeformParams {
    pub fn new(q: f64, j: HalfInt, s: f64, alpha_j: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::Domain(format!("q must be positive, got {q}")));
        }
        if (q - 1.0).abs() <= 1e-12 {
            return Err(Error::Domain("q = 1 is the undeformed limit".into()));
        }
        if !s.is_finite() || !alpha_j.is_finite() {
            return Err(Error::Domain("non-finite parameter".into()));
        }
        Ok(QDeformParams { q, j, s, alpha_j })
    }

    /// Builds the parameter set from a linear characteristic function by
    /// `q = sqrt(r)`; slopes `r <= 0` have no deformation parameter.
    pub fn from_linear(f: &CharFunc, j: HalfInt, alpha_j: f64) -> Result<Self> {
        match *f {
            CharFunc::Linear { r, s } if r > 0.0 => Self::new(r.sqrt(), j, s, alpha_j),
            CharFunc::Linear { r, .. } => Err(Error::Domain(format!(
                "r = {r} <= 0 has no real deformation parameter q = sqrt(r)"
            ))),
            _ => Err(Error::Precondition(
                "deformation parameters come from linear characteristic functions".into(),
            )),
        }
    }

    /// `r = q^2`
    pub fn r(&self) -> f64 {
        self.q * self.q
    }

    /// `Q1 = (q^2 - 2) / (q^2 - 1)`
    pub fn q1(&self) -> f64 {
        (self.r() - 2.0) / (self.r() - 1.0)
    }

    /// `Q2 = (q^2 - 1) alpha_j - s`
    pub fn q2(&self) -> f64 {
        (self.r() - 1.0) * self.alpha_j - self.s
    }

    /// `Q3 = q^2 / (q^2 - 1)`; note `Q1 + Q3 = 2` identically.
    pub fn q3(&self) -> f64 {
        self.r() / (self.r() - 1.0)
    }

    pub fn dimension(&self) -> usize {
        self.j.dimension()
    }
}

/// The standard sl_q(2) generators on the (2j+1)-dimensional module.
#[derive(Debug, Clone)]
pub struct Slq2 {
    pub s3: DMatrix<f64>,
    pub splus: DMatrix<f64>,
    pub sminus: DMatrix<f64>,
}

/// Builds `S3 = diag(j - m)` and the ladder pair with matrix elements
/// `sqrt(q^{-2j+1} [m]_{q^2} [2j - m + 1]_{q^2})`.
pub fn build_slq2(j: HalfInt, q: f64) -> Result<Slq2> {
    if !(q > 0.0) || (q - 1.0).abs() <= 1e-12 {
        return Err(Error::Domain(format!(
            "sl_q(2) requires q > 0 and q != 1, got {q}"
        )));
    }
    let d = j.dimension();
    let two_j = j.twice() as f64;
    let r = q * q;
    let prefactor = q.powf(1.0 - two_j);

    let mut s3 = DMatrix::zeros(d, d);
    for m in 0..d {
        s3[(m, m)] = j.value() - m as f64;
    }
    let mut splus = DMatrix::zeros(d, d);
    for m in 1..d {
        let radicand =
            prefactor * gauss_number(m as f64, r) * gauss_number(two_j - m as f64 + 1.0, r);
        if radicand < 0.0 {
            return Err(Error::Domain(format!(
                "negative radicand {radicand} at m = {m} (q = {q})"
            )));
        }
        splus[(m - 1, m)] = radicand.sqrt();
    }
    let sminus = splus.transpose();
    Ok(Slq2 { s3, splus, sminus })
}

/// Residuals of the defining sl_q(2) relations
/// `[S3, S+-] = +-S+-` and `[S+, S-] = [2 S3]` (Frobenius norms).
pub fn slq2_relation_residuals(slq: &Slq2, q: f64) -> (f64, f64, f64) {
    let comm = |a: &DMatrix<f64>, b: &DMatrix<f64>| a * b - b * a;
    let raising = (comm(&slq.s3, &slq.splus) - &slq.splus).norm();
    let lowering = (comm(&slq.s3, &slq.sminus) + &slq.sminus).norm();
    let d = slq.s3.nrows();
    let mut bracket = DMatrix::zeros(d, d);
    for m in 0..d {
        bracket[(m, m)] = bracket_q(2.0 * slq.s3[(m, m)], q);
    }
    let commutator = (comm(&slq.splus, &slq.sminus) - bracket).norm();
    (raising, lowering, commutator)
}

/// `J0` as a function of `S3`: entry `m` carries
/// `q^{2m} alpha_j - s [m]_{q^2}`, the m-th iterate of `f = q^2 x - s`.
pub fn map_j0(params: &QDeformParams) -> DMatrix<f64> {
    let d = params.dimension();
    let r = params.r();
    let j = params.j.value();
    let mut out = DMatrix::zeros(d, d);
    for m in 0..d {
        // j - S3 evaluated on state m is just m.
        let steps = j - (j - m as f64);
        out[(m, m)] = r.powf(steps) * params.alpha_j - params.s * gauss_number(steps, r);
    }
    out
}

/// `J+` as a diagonal coefficient acting on `S+`.
///
/// On the state where `S3 = j - m + 1` the squared coefficient numerator is
/// the ladder value `N_{m-1}^2` written q-deformedly,
/// `(-Q2 [m]_{q^2}) (2 alpha_j + 1 + Q2 [m]_{q^2})`, and the denominator
/// `q^{-2j+1} [m]_{q^2} [2j - m + 1]_{q^2}` is exactly the squared matrix
/// element of `S+` there, so the product leaves the ladder coefficient. The
/// coefficient is evaluated only at positions where `S+` has a non-zero
/// entry; elsewhere the denominator vanishes together with `S+`.
pub fn map_jplus(params: &QDeformParams, slq: &Slq2) -> Result<DMatrix<f64>> {
    let d = params.dimension();
    if slq.splus.nrows() != d {
        return Err(Error::DimensionMismatch(format!(
            "sl_q(2) module has dimension {}, parameters say {d}",
            slq.splus.nrows()
        )));
    }
    let r = params.r();
    let q2v = params.q2();
    let two_j = params.j.twice() as f64;
    let prefactor = params.q.powf(1.0 - two_j);

    let mut out = DMatrix::zeros(d, d);
    for m in 1..d {
        let entry = slq.splus[(m - 1, m)];
        if entry == 0.0 {
            continue;
        }
        let gm = gauss_number(m as f64, r);
        let numerator = (-q2v * gm) * (2.0 * params.alpha_j + 1.0 + q2v * gm);
        if numerator < -1e-12 * (1.0 + numerator.abs()) {
            return Err(Error::Domain(format!(
                "complex radicand: N^2 = {numerator} at m = {m}"
            )));
        }
        let denominator = prefactor * gm * gauss_number(two_j - m as f64 + 1.0, r);
        if denominator <= 0.0 {
            return Err(Error::Domain(format!(
                "vanishing coefficient denominator at m = {m} where S+ is non-zero"
            )));
        }
        let coeff = (numerator.max(0.0) / denominator).sqrt();
        out[(m - 1, m)] = coeff * entry;
    }
    Ok(out)
}

/// Inverse of the functional map, computed numerically: recovers the
/// sl_q(2) generators from directly built `J0`, `J+` matrices by inverting
/// the diagonal relation (matching each `J0` eigenvalue to its ladder
/// position) and dividing the bidiagonal relation entrywise. No closed form
/// is used. Fails when an interior ladder coefficient vanishes, since the
/// division is then singular.
pub fn recover_slq2(
    params: &QDeformParams,
    j0: &DMatrix<f64>,
    jplus: &DMatrix<f64>,
) -> Result<Slq2> {
    let d = params.dimension();
    if j0.nrows() != d || jplus.nrows() != d {
        return Err(Error::DimensionMismatch(format!(
            "matrices are {}x{}, parameters say {d}",
            j0.nrows(),
            j0.ncols()
        )));
    }
    let r = params.r();
    let j = params.j.value();

    // Diagonal relation: each J0 entry must be one of the ladder values
    // r^m alpha_j - s [m]_r; its position fixes the S3 eigenvalue j - m.
    let mut s3 = DMatrix::zeros(d, d);
    for m in 0..d {
        let value = j0[(m, m)];
        let position = (0..d)
            .map(|k| {
                let ladder = r.powi(k as i32) * params.alpha_j
                    - params.s * gauss_number(k as f64, r);
                (k, (ladder - value).abs())
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("d >= 1");
        if position.1 > 1e-6 * (1.0 + value.abs()) {
            return Err(Error::Precondition(format!(
                "J0 entry {value} at slot {m} matches no ladder eigenvalue"
            )));
        }
        s3[(m, m)] = j - position.0 as f64;
    }

    // Bidiagonal relation: S+ = coeff(S3)^{-1} J+ entrywise.
    let reference = build_slq2(params.j, params.q)?;
    let mapped = map_jplus(params, &reference)?;
    let mut splus = DMatrix::zeros(d, d);
    for m in 1..d {
        let target = jplus[(m - 1, m)];
        if target == 0.0 {
            continue;
        }
        let coeff = mapped[(m - 1, m)] / reference.splus[(m - 1, m)];
        if coeff == 0.0 || !coeff.is_finite() {
            return Err(Error::Domain(format!(
                "vanishing map coefficient at m = {m}: inverse is singular"
            )));
        }
        splus[(m - 1, m)] = target / coeff;
    }
    let sminus = splus.transpose();
    Ok(Slq2 { s3, splus, sminus })
}

/// Frobenius distances between the mapped generators and the directly built
/// representation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MapResiduals {
    pub j0: f64,
    pub jplus: f64,
}

/// Compares the mapped `J0`, `J+` against the representation built directly
/// from the cut solution of `f = q^2 x - s` at dimension `2j + 1`.
///
/// The direct side always uses the cut highest weight, so the residuals
/// measure how far `params.alpha_j` is from closing the ladder.
pub fn verify_map(params: &QDeformParams) -> Result<MapResiduals> {
    let d = params.dimension();
    let r = params.r();
    let f = CharFunc::linear(r, params.s);
    let alpha_cut = hwsolver::solve_cut_linear(r, params.s, d)?;
    let ladder = hwsolver::ladder_from_cut(&f, alpha_cut, d)?;
    let rep = repbuilder::build(&ladder, BuildMode::Unitary)?;

    let slq = build_slq2(params.j, params.q)?;
    let mapped_j0 = map_j0(params);
    let mapped_jplus = map_jplus(params, &slq)?;

    Ok(MapResiduals {
        j0: (mapped_j0 - &rep.j0).norm(),
        jplus: (mapped_jplus - &rep.jplus).norm(),
    })
}
