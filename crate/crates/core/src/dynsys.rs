//! Dynamical-systems analysis of the characteristic function: fixed points,
//! d-cycles with stability multipliers, discriminant regimes of the quadratic
//! family, allowed highest-weight regions, and cobweb traces.

use serde::{Deserialize, Serialize};

use crate::charfunc::CharFunc;
use crate::error::{Error, Result};
use crate::roots;
use crate::tol;

/// Stability of a periodic orbit, judged by its multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn from_multiplier(lambda: f64) -> Self {
        let mag = lambda.abs();
        if (mag - 1.0).abs() < tol::MARGINAL_BAND {
            Stability::Marginal
        } else if mag < 1.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    }
}

/// A d-cycle of `f`: points in orbit order starting from the largest element,
/// multiplier `(f^d)'` at any cycle point, and its stability class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleReport {
    pub period: usize,
    pub points: Vec<f64>,
    pub multiplier: f64,
    pub stability: Stability,
}

impl CycleReport {
    /// Largest eigenvalue on the cycle; serves as the highest weight.
    pub fn largest(&self) -> f64 {
        self.points[0]
    }
}

/// Discriminant regime of the quadratic family, split at 0, 4 and 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NoFixedPoint,
    TangentFixedPoint,
    StableOneCycle,
    StableTwoCycle,
    HigherCycles,
}

/// Discriminant data for `f(x) = t x^2 + r x - s` with `t > 0`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DeltaClassification {
    pub delta: f64,
    pub delta1: f64,
    /// Parameter of the conjugate normal form `y^2 + c`.
    pub c: f64,
    pub regime: Regime,
}

/// Open interval of the real axis where descending ladders can start.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AllowedRegion {
    pub low: f64,
    pub high: f64,
    /// Period of the cycle supplying the lower endpoint.
    pub low_period: usize,
    /// True when the lower endpoint only reflects cycles up to the period
    /// cap, so the region is a lower-bound estimate.
    pub truncated: bool,
}

impl AllowedRegion {
    pub fn contains(&self, x: f64) -> bool {
        self.low < x && x < self.high
    }
}

/// One cobweb segment: vertical hops onto the graph of `f`, horizontal hops
/// back to the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    V,
    H,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Segment {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub kind: SegmentKind,
}

/// All real fixed points of `f`, reported as period-1 cycles ordered from
/// the largest.
pub fn fixed_points(f: &CharFunc) -> Result<Vec<CycleReport>> {
    if f.degree() == 0 {
        return Err(Error::Precondition(
            "fixed points require a polynomial of degree >= 1".into(),
        ));
    }
    let mut p = f.coeffs();
    p[1] -= 1.0;
    let mut deg = p.len() - 1;
    while deg > 0 && p[deg] == 0.0 {
        deg -= 1;
    }
    let roots = if deg == 0 {
        if p[0] == 0.0 {
            return Err(Error::Degenerate("f is the identity map".into()));
        }
        vec![]
    } else {
        roots::poly_real_roots(&p)?
    };
    let mut cycles: Vec<CycleReport> = roots
        .into_iter()
        .map(|x| {
            let lambda = f.derivative(x);
            CycleReport {
                period: 1,
                points: vec![x],
                multiplier: lambda,
                stability: Stability::from_multiplier(lambda),
            }
        })
        .collect();
    cycles.sort_by(|a, b| b.largest().total_cmp(&a.largest()));
    Ok(cycles)
}

/// All cycles of exact (prime) period `d`, each reported once and ordered
/// from its largest element.
///
/// Quadratic functions are handled through the conjugate normal form
/// `y^2 + c`; the period cap keeps the scan grid for `f^d(x) - x`
/// (degree `2^d`) tractable. Linear maps have no cycles of period >= 2
/// apart from the degenerate reflection `r = -1`, which is rejected because
/// every point lies on a 2-cycle.
pub fn find_cycles(f: &CharFunc, d: usize) -> Result<Vec<CycleReport>> {
    if d == 0 {
        return Err(Error::Precondition("cycle period must be >= 1".into()));
    }
    if d == 1 {
        return fixed_points(f);
    }
    match canonical_kind(f)? {
        Canonical::Linear { r, s } => linear_cycles(r, s, d),
        Canonical::Quadratic { t, r, s } => {
            if d > tol::PERIOD_CAP {
                return Err(Error::Precondition(format!(
                    "period {d} exceeds the cap {}",
                    tol::PERIOD_CAP
                )));
            }
            quadratic_cycles(f, t, r, s, d)
        }
    }
}

/// Discriminant classification for quadratic `f` with `t > 0`.
pub fn classify_delta(f: &CharFunc) -> Result<DeltaClassification> {
    let (t, r, s) = quadratic_params(f)?;
    if t <= 0.0 {
        return Err(Error::Precondition(
            "delta classification is defined for t > 0".into(),
        ));
    }
    let delta = (r - 1.0) * (r - 1.0) + 4.0 * t * s;
    let delta1 = delta - 4.0;
    let c = (1.0 - delta) / 4.0;
    let regime = if delta.abs() <= 1e-12 {
        Regime::TangentFixedPoint
    } else if delta < 0.0 {
        Regime::NoFixedPoint
    } else if delta < 4.0 {
        Regime::StableOneCycle
    } else if delta < 6.0 {
        Regime::StableTwoCycle
    } else {
        Regime::HigherCycles
    };
    Ok(DeltaClassification {
        delta,
        delta1,
        c,
        regime,
    })
}

/// Normal-form parameter: conjugating by `y = t x + r/2` turns
/// `t x^2 + r x - s` into `y^2 + c` with `c = r/2 - r^2/4 - t s`.
pub fn normal_form(f: &CharFunc) -> Result<f64> {
    let (t, r, s) = quadratic_params(f)?;
    Ok(r / 2.0 - r * r / 4.0 - t * s)
}

/// Fixed points of the quadratic family in closed form, largest first.
fn quadratic_fixed_points(t: f64, r: f64, delta: f64) -> (f64, f64) {
    let root = delta.max(0.0).sqrt();
    let plus = (1.0 - r + root) / (2.0 * t);
    let minus = (1.0 - r - root) / (2.0 * t);
    (plus, minus)
}

/// Two-cycle points of the quadratic family in closed form, largest first.
fn quadratic_two_cycle(t: f64, r: f64, delta1: f64) -> (f64, f64) {
    let root = delta1.max(0.0).sqrt();
    let plus = (-1.0 - r + root) / (2.0 * t);
    let minus = (-1.0 - r - root) / (2.0 * t);
    (plus, minus)
}

/// The open interval where a descending ladder can start, when one exists.
///
/// - `0 < delta <= 4`: between the two fixed points.
/// - `4 < delta <= 6`: from the largest 2-cycle element up to the largest
///   fixed point.
/// - `delta > 6`: from the largest element of the largest-period stable
///   cycle found below the period cap (falling back to the 2-cycle when no
///   stable cycle is found), flagged as truncated.
/// - `delta <= 0`: none.
pub fn allowed_region(f: &CharFunc) -> Result<Option<AllowedRegion>> {
    let (t, r, _s) = quadratic_params(f)?;
    if t <= 0.0 {
        return Err(Error::Precondition(
            "allowed region is defined for t > 0".into(),
        ));
    }
    let class = classify_delta(f)?;
    let delta = class.delta;
    if delta <= 0.0 {
        return Ok(None);
    }
    let (alpha_plus, alpha_minus) = quadratic_fixed_points(t, r, delta);
    if delta <= 4.0 {
        return Ok(Some(AllowedRegion {
            low: alpha_minus,
            high: alpha_plus,
            low_period: 1,
            truncated: false,
        }));
    }
    let (beta_plus, _) = quadratic_two_cycle(t, r, class.delta1);
    if delta <= 6.0 {
        return Ok(Some(AllowedRegion {
            low: beta_plus,
            high: alpha_plus,
            low_period: 2,
            truncated: false,
        }));
    }
    // Past the 2-cycle window: search downward for the deepest stable cycle.
    for period in (2..=tol::PERIOD_CAP).rev() {
        let stable = find_cycles(f, period)?
            .into_iter()
            .find(|c| c.stability == Stability::Stable);
        if let Some(cycle) = stable {
            return Ok(Some(AllowedRegion {
                low: cycle.largest(),
                high: alpha_plus,
                low_period: period,
                truncated: true,
            }));
        }
    }
    Ok(Some(AllowedRegion {
        low: beta_plus,
        high: alpha_plus,
        low_period: 2,
        truncated: true,
    }))
}

/// Cobweb trace from `x0`: alternating vertical and horizontal segments,
/// exactly `2 * steps` of them.
pub fn cobweb_trace(f: &CharFunc, x0: f64, steps: usize) -> Result<Vec<Segment>> {
    if !x0.is_finite() {
        return Err(Error::Domain(format!("cobweb from non-finite x0 = {x0}")));
    }
    let mut segments = Vec::with_capacity(2 * steps);
    let mut x = x0;
    for step in 1..=steps {
        let y = f.eval_unchecked(x);
        if !y.is_finite() || y.abs() > tol::DIVERGENCE_GUARD {
            return Err(Error::Diverged {
                step,
                magnitude: y.abs(),
            });
        }
        segments.push(Segment {
            from: (x, x),
            to: (x, y),
            kind: SegmentKind::V,
        });
        segments.push(Segment {
            from: (x, y),
            to: (y, y),
            kind: SegmentKind::H,
        });
        x = y;
    }
    Ok(segments)
}

/// Writes a cobweb trace as CSV (`x0,step,x,y,kind`).
///
/// Each row records the endpoint of one segment; the polyline starts at
/// `(x0, x0)`.
pub fn cobweb_csv<W: std::io::Write>(out: &mut W, x0: f64, segments: &[Segment]) -> std::io::Result<()> {
    writeln!(out, "x0,step,x,y,kind")?;
    for (step, seg) in segments.iter().enumerate() {
        let kind = match seg.kind {
            SegmentKind::V => "V",
            SegmentKind::H => "H",
        };
        writeln!(out, "{},{},{},{},{}", x0, step, seg.to.0, seg.to.1, kind)?;
    }
    Ok(())
}

enum Canonical {
    Linear { r: f64, s: f64 },
    Quadratic { t: f64, r: f64, s: f64 },
}

/// Reduces any CharFunc of degree <= 2 to its canonical parameters.
fn canonical_kind(f: &CharFunc) -> Result<Canonical> {
    match f {
        CharFunc::Linear { r, s } => Ok(Canonical::Linear { r: *r, s: *s }),
        CharFunc::Quadratic { t, r, s } => Ok(Canonical::Quadratic {
            t: *t,
            r: *r,
            s: *s,
        }),
        CharFunc::Polynomial { coeffs } => match f.degree() {
            0 => Err(Error::Precondition(
                "cycle search requires degree >= 1".into(),
            )),
            1 => Ok(Canonical::Linear {
                r: coeffs[1],
                s: -coeffs[0],
            }),
            2 => Ok(Canonical::Quadratic {
                t: coeffs[2],
                r: *coeffs.get(1).unwrap_or(&0.0),
                s: -coeffs[0],
            }),
            deg => Err(Error::Unsupported(format!(
                "cycle isolation is implemented for degree <= 2, got degree {deg}"
            ))),
        },
    }
}

fn quadratic_params(f: &CharFunc) -> Result<(f64, f64, f64)> {
    match canonical_kind(f)? {
        Canonical::Quadratic { t, r, s } if t != 0.0 => Ok((t, r, s)),
        _ => Err(Error::Precondition(
            "operation requires a quadratic characteristic function".into(),
        )),
    }
}

fn linear_cycles(r: f64, s: f64, d: usize) -> Result<Vec<CycleReport>> {
    debug_assert!(d >= 2);
    if r == -1.0 && d % 2 == 0 {
        return Err(Error::Degenerate(
            "r = -1 makes f an involution: every point off the fixed point lies on a 2-cycle"
                .into(),
        ));
    }
    if r == 1.0 && s == 0.0 {
        return Err(Error::Degenerate("f is the identity map".into()));
    }
    // f^d is linear, so its unique fixed point (when r^d != 1) is the fixed
    // point of f itself: period 1, never exact period d >= 2.
    Ok(vec![])
}

/// Sentinel for orbits that escape during a cycle-equation evaluation.
/// Escapes are always upward for the normal form, so the sign is positive.
const ESCAPED: f64 = 1e30;

fn quadratic_cycles(
    f: &CharFunc,
    t: f64,
    r: f64,
    _s: f64,
    d: usize,
) -> Result<Vec<CycleReport>> {
    let c = normal_form(f)?;
    if c > 0.25 {
        // y^2 + c > y for all y: every orbit increases to infinity.
        return Ok(vec![]);
    }
    let beta = 0.5 * (1.0 + (1.0 - 4.0 * c).sqrt());

    // All periodic points lie in [-beta, beta]; h(y) = f_c^d(y) - y.
    let h = |y: f64| -> f64 {
        let mut z = y;
        for _ in 0..d {
            if z.abs() > beta + 1.0 {
                return ESCAPED;
            }
            z = z * z + c;
        }
        z - y
    };
    let dh = |y: f64| -> f64 {
        let mut z = y;
        let mut deriv = 1.0;
        for _ in 0..d {
            if z.abs() > beta + 1.0 {
                return f64::MAX;
            }
            deriv *= 2.0 * z;
            z = z * z + c;
        }
        deriv - 1.0
    };

    // Root spacing of f_c^d(y) - y shrinks like (2 pi / 2^d)^2 near +-beta in
    // the fully chaotic case, so the grid density grows with 2^d.
    let n = 4096usize.max(256usize << d.min(tol::PERIOD_CAP));
    let pad = 1e-9 * (1.0 + beta);
    let mut found = Vec::new();
    let step = 2.0 * (beta + pad) / n as f64;
    let mut prev_y = -beta - pad;
    let mut prev_h = h(prev_y);
    for i in 1..=n {
        let y = -beta - pad + step * i as f64;
        let hy = h(y);
        if prev_h == 0.0 {
            found.push(prev_y);
        } else if prev_h * hy < 0.0 && prev_h.abs() < ESCAPED && hy.abs() < ESCAPED {
            let bracket = roots::bisect(&h, prev_y, y);
            found.push(roots::newton(&h, &dh, bracket, 40));
        }
        prev_y = y;
        prev_h = hy;
    }

    // Back to original coordinates, then a final polish on f^d(x) - x.
    let g = |x: f64| {
        let (fd, _) = f.iterate_with_derivative(x, d);
        fd - x
    };
    let dg = |x: f64| {
        let (_, deriv) = f.iterate_with_derivative(x, d);
        deriv - 1.0
    };
    let mut candidates: Vec<roots::RootCandidate> = found
        .into_iter()
        .map(|y| {
            let x = roots::newton(&g, &dg, (y - r / 2.0) / t, 20);
            roots::RootCandidate {
                x,
                residual: g(x).abs(),
                from_probe: false,
            }
        })
        .collect();
    candidates = roots::merge_close(candidates, 1e-9);

    let scale_tol = |x: f64| tol::CYCLE_DISTINCT * (1.0 + x.abs());
    let mut points: Vec<f64> = candidates
        .iter()
        .filter(|cand| cand.residual <= 1e-10 * (1.0 + cand.x.abs()))
        .map(|cand| cand.x)
        .filter(|&x| exact_period(f, x, d))
        .collect();
    points.sort_by(|a, b| b.total_cmp(a));

    let mut cycles = Vec::new();
    let mut claimed = vec![false; points.len()];
    for start in 0..points.len() {
        if claimed[start] {
            continue;
        }
        let x0 = points[start];
        let mut orbit = Vec::with_capacity(d);
        let mut x = x0;
        let mut ok = true;
        for _ in 0..d {
            orbit.push(x);
            let next = f.eval_unchecked(x);
            // Re-anchor on the isolated root list to stop drift.
            x = match points
                .iter()
                .position(|&p| (p - next).abs() <= scale_tol(next))
            {
                Some(idx) => {
                    claimed[idx] = true;
                    points[idx]
                }
                None => roots::newton(&g, &dg, next, 20),
            };
            if !x.is_finite() {
                ok = false;
                break;
            }
        }
        claimed[start] = true;
        if !ok || orbit.len() != d {
            continue;
        }
        // Aliasing guard: d points of an exact d-cycle must be distinct.
        let distinct = orbit.iter().enumerate().all(|(i, &a)| {
            orbit[i + 1..]
                .iter()
                .all(|&b| (a - b).abs() > scale_tol(a))
        });
        if !distinct {
            continue;
        }
        let multiplier: f64 = orbit.iter().map(|&p| f.derivative(p)).product();
        cycles.push(CycleReport {
            period: d,
            points: orbit,
            multiplier,
            stability: Stability::from_multiplier(multiplier),
        });
    }
    cycles.sort_by(|a, b| b.largest().total_cmp(&a.largest()));
    Ok(cycles)
}

/// True when `d` is the minimal period of `x` under `f`.
fn exact_period(f: &CharFunc, x: f64, d: usize) -> bool {
    for e in 1..d {
        if d % e != 0 {
            continue;
        }
        let (fe, _) = f.iterate_with_derivative(x, e);
        if (fe - x).abs() <= tol::CYCLE_DISTINCT * (1.0 + x.abs()) {
            return false;
        }
    }
    true
}
