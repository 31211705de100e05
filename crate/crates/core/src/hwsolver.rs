//! Highest weights that close a d-dimensional ladder, either through the cut
//! condition `a + f^d(a) + 1 = 0` or because `a` sits on a d-cycle of `f`.

use serde::{Deserialize, Serialize};

use crate::charfunc::CharFunc;
use crate::dynsys::{self, CycleReport};
use crate::error::{Error, Result};
use crate::qmap::gauss_number;
use crate::roots;
use crate::tol;

/// How a ladder reaches `N_{d-1} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    /// `alpha_j + f^d(alpha_j) + 1 = 0`
    Cut,
    /// `f^d(alpha_j) = alpha_j`
    Cycle,
}

/// The eigenvalue ladder of a d-dimensional representation.
///
/// `alphas[m] = f^m(alpha_j)` for `m = 0..d-1`, and
/// `nsq[m] = alpha_j (alpha_j + 1) - a (a + 1)` with `a = f^{m+1}(alpha_j)`,
/// so `nsq[d-1]` is the termination residual. A ladder is unitary when every
/// interior `nsq[m]` is non-negative, which lets `J- = transpose(J+)` with
/// real entries.
#[derive(Debug, Clone)]
pub struct WeightLadder {
    pub f: CharFunc,
    pub d: usize,
    pub alphas: Vec<f64>,
    pub nsq: Vec<f64>,
    pub termination: Termination,
    pub unitary: bool,
}

impl WeightLadder {
    /// Highest weight `alpha_j`.
    pub fn alpha_j(&self) -> f64 {
        self.alphas[0]
    }

    /// Lowest weight `alpha_b = f^{d-1}(alpha_j)`.
    pub fn alpha_b(&self) -> f64 {
        self.alphas[self.d - 1]
    }

    /// `|nsq[d-1]|`, which must be ~0 for a genuine d-dimensional ladder.
    pub fn termination_residual(&self) -> f64 {
        self.nsq[self.d - 1].abs()
    }

    /// Ladder coefficients `N_m = sqrt(nsq[m])`; `None` if non-unitary.
    pub fn n_values(&self) -> Option<Vec<f64>> {
        if !self.unitary {
            return None;
        }
        Some(self.nsq.iter().map(|&v| v.max(0.0).sqrt()).collect())
    }

    /// Builds the ladder from a highest weight without checking how (or
    /// whether) it terminates. Used internally by the solvers, which perform
    /// their own termination checks first.
    fn from_highest_weight(f: &CharFunc, alpha_j: f64, d: usize, termination: Termination) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("dimension must be >= 1".into()));
        }
        let extended = f.iterate(alpha_j, d)?;
        let alphas = extended[..d].to_vec();
        let top = alpha_j * (alpha_j + 1.0);
        let nsq: Vec<f64> = (0..d)
            .map(|m| {
                let a = extended[m + 1];
                top - a * (a + 1.0)
            })
            .collect();
        let unitary = nsq[..d.saturating_sub(1)]
            .iter()
            .all(|&v| v >= -tol::UNITARY);
        Ok(WeightLadder {
            f: f.clone(),
            d,
            alphas,
            nsq,
            termination,
            unitary,
        })
    }
}

/// A validated root of the cut equation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CutSolution {
    pub alpha_j: f64,
    pub d: usize,
    /// `|alpha_j + f^d(alpha_j) + 1|`
    pub residual: f64,
    pub unitary: bool,
    /// Inside the allowed region, when one is defined for `f`.
    pub within_region: Option<bool>,
}

/// Cut solution for `f(x) = x - s`, `s > 0`: `alpha_j = (s d - 1) / 2`.
pub fn solve_cut_linear_r1(s: f64, d: usize) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Precondition(format!(
            "the r = 1 family requires s > 0, got s = {s}"
        )));
    }
    if d == 0 {
        return Err(Error::Precondition("dimension must be >= 1".into()));
    }
    Ok((s * d as f64 - 1.0) / 2.0)
}

/// Cut solution for `f(x) = r x - s`:
/// `alpha_j = (s [d]_r - 1) / (r^d + 1)` with the Gauss number `[d]_r`.
///
/// `r = 1` delegates to [`solve_cut_linear_r1`]. Non-positive `r` admits no
/// highest-weight representation, except the marginal reflection `r = -1`
/// with `d = 2`, where the formula degenerates to the boundary value `-1/2`.
pub fn solve_cut_linear(r: f64, s: f64, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::Precondition("dimension must be >= 1".into()));
    }
    if r == 1.0 {
        return solve_cut_linear_r1(s, d);
    }
    if r <= 0.0 && !(r == -1.0 && d == 2) {
        return Err(Error::Precondition(format!(
            "r = {r} admits no highest-weight representation (only the marginal r = -1, d = 2)"
        )));
    }
    let gauss = gauss_number(d as f64, r);
    Ok((s * gauss - 1.0) / (r.powi(d as i32) + 1.0))
}

/// Default search interval for [`solve_cut_general`]: the allowed region
/// when `f` defines one, otherwise `(-1/2, 1e3)`.
pub fn default_interval(f: &CharFunc) -> (f64, f64) {
    if let Ok(Some(region)) = dynsys::allowed_region(f) {
        return (region.low, region.high);
    }
    (-0.5, tol::DEFAULT_SEARCH_HI)
}

/// All validated roots of `g(a) = a + f^d(a) + 1` inside `interval`,
/// sorted ascending.
///
/// Candidates are kept only if `a > -1/2` (required for `a > f^d(a)`) and
/// the ladder they generate is genuinely d-dimensional: a root whose ladder
/// already has an interior `N_m = 0` terminates at a smaller dimension and
/// is reported there instead.
pub fn solve_cut_general(f: &CharFunc, d: usize, interval: (f64, f64)) -> Result<Vec<CutSolution>> {
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(Error::Precondition(format!(
            "empty search interval [{lo}, {hi}]"
        )));
    }
    if d == 0 {
        return Err(Error::Precondition("dimension must be >= 1".into()));
    }
    let g = |a: f64| {
        let (orbit, _) = f.iterate_clamped(a, d);
        a + orbit[d] + 1.0
    };
    let dg = |a: f64| {
        let (fd, deriv) = f.iterate_with_derivative(a, d);
        if !fd.is_finite() {
            return f64::MAX;
        }
        1.0 + deriv
    };
    // Scan density scales with d: deg(g) = (deg f)^d.
    let n = 1024 * d;
    let candidates = roots::isolate(g, dg, lo, hi, n)?;
    let merged = roots::merge_close(candidates, tol::DUPLICATE_ROOT);

    let region = dynsys::allowed_region(f).unwrap_or_default();

    let mut solutions = Vec::new();
    for cand in merged {
        let scale = 1.0 + cand.x.abs();
        if cand.residual > tol::TERMINATION * scale {
            if cand.from_probe {
                continue; // probe artifact, not a root
            }
            return Err(Error::RootIsolation {
                lo,
                hi,
                detail: format!(
                    "sign-change candidate at {} stalled with residual {:.3e}",
                    cand.x, cand.residual
                ),
            });
        }
        let alpha_j = cand.x;
        if !(alpha_j > -0.5) {
            continue;
        }
        let ladder = WeightLadder::from_highest_weight(f, alpha_j, d, Termination::Cut)?;
        let primitive = ladder.nsq[..d - 1]
            .iter()
            .all(|&v| v.abs() > tol::TERMINATION);
        if !primitive {
            continue;
        }
        solutions.push(CutSolution {
            alpha_j,
            d,
            residual: cand.residual,
            unitary: ladder.unitary,
            within_region: region.map(|reg| reg.contains(alpha_j)),
        });
    }
    solutions.sort_by(|a, b| a.alpha_j.total_cmp(&b.alpha_j));
    Ok(solutions)
}

/// Ladder for a cut-terminated representation.
pub fn ladder_from_cut(f: &CharFunc, alpha_j: f64, d: usize) -> Result<WeightLadder> {
    let fd = f.iterate_last(alpha_j, d)?;
    let residual = (alpha_j + fd + 1.0).abs();
    if residual > tol::TERMINATION * (1.0 + alpha_j.abs()) {
        return Err(Error::Precondition(format!(
            "alpha_j = {alpha_j} does not satisfy the d = {d} cut condition (residual {residual:.3e})"
        )));
    }
    if !(alpha_j > -0.5) {
        return Err(Error::Precondition(format!(
            "cut highest weights must exceed -1/2, got {alpha_j}"
        )));
    }
    WeightLadder::from_highest_weight(f, alpha_j, d, Termination::Cut)
}

/// Ladder for a cycle-terminated representation: the highest weight is the
/// largest cycle element and `nsq[d-1]` vanishes because `f^d(alpha_j) =
/// alpha_j`.
pub fn ladder_from_cycle(cycle: &CycleReport, f: &CharFunc) -> Result<WeightLadder> {
    if cycle.points.is_empty() || cycle.points.len() != cycle.period {
        return Err(Error::Precondition("malformed cycle report".into()));
    }
    let alpha_j = cycle.largest();
    for (k, &p) in cycle.points.iter().enumerate() {
        let next = cycle.points[(k + 1) % cycle.period];
        let image = f.eval(p)?;
        if (image - next).abs() > tol::TERMINATION * (1.0 + next.abs()) {
            return Err(Error::Precondition(format!(
                "cycle point {p} does not map onto {next} under f (got {image})"
            )));
        }
    }
    WeightLadder::from_highest_weight(f, alpha_j, cycle.period, Termination::Cycle)
}

/// Classification of an arbitrary starting weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum StartClass {
    /// The cut condition closes a d-dimensional ladder.
    FiniteCut { d: usize },
    /// The orbit returns to the start after d steps.
    FiniteCycle { d: usize },
    /// Iterates descend forever (possibly past the divergence guard).
    InfiniteDescending { diverged_at: Option<usize> },
    /// The descending-ladder hypothesis fails at the given step.
    NoLadder { first_ascent: usize },
}

/// Scans `f^k(alpha0)` for `k <= max_iter` and reports the first ladder
/// termination: cut conditions take precedence over cycles, and orbits that
/// never terminate are classified by whether they keep descending.
pub fn classify_start(f: &CharFunc, alpha0: f64, max_iter: usize) -> Result<StartClass> {
    if max_iter == 0 {
        return Err(Error::Precondition("max_iter must be >= 1".into()));
    }
    if !alpha0.is_finite() {
        return Err(Error::Domain(format!("non-finite start {alpha0}")));
    }
    let (orbit, escaped_at) = f.iterate_clamped(alpha0, max_iter);
    let usable = escaped_at.unwrap_or(orbit.len() - 1);

    for k in 1..=usable {
        let residual = (alpha0 + orbit[k] + 1.0).abs();
        if residual < tol::TERMINATION * (1.0 + alpha0.abs()) {
            return Ok(StartClass::FiniteCut { d: k });
        }
    }
    for k in 1..=usable {
        if (orbit[k] - alpha0).abs() < tol::TERMINATION * (1.0 + alpha0.abs()) {
            return Ok(StartClass::FiniteCycle { d: k });
        }
    }
    for k in 1..=usable {
        if orbit[k] >= orbit[k - 1] {
            return Ok(StartClass::NoLadder { first_ascent: k });
        }
    }
    Ok(StartClass::InfiniteDescending {
        diverged_at: escaped_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quad(t: f64, r: f64, s: f64) -> CharFunc {
        CharFunc::quadratic(t, r, s).unwrap()
    }

    #[test]
    fn cut_r1_worked_values() {
        assert_eq!(solve_cut_linear_r1(1.0, 5).unwrap(), 2.0);
        assert_eq!(solve_cut_linear_r1(1.0, 1).unwrap(), 0.0);
        assert_eq!(solve_cut_linear_r1(0.5, 4).unwrap(), 0.5);
        assert!(solve_cut_linear_r1(-1.0, 3).is_err());
        assert!(solve_cut_linear_r1(0.0, 3).is_err());
    }

    #[test]
    fn cut_linear_case2_and_case3() {
        assert_relative_eq!(
            solve_cut_linear(2.0, 1.0, 4).unwrap(),
            14.0 / 17.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            solve_cut_linear(0.7, 1.0, 4).unwrap(),
            1.236_190_629_787_92,
            epsilon = 1e-12
        );
    }

    #[test]
    fn cut_linear_limit_matches_r1_form() {
        for d in [1usize, 3, 7] {
            let near = solve_cut_linear(1.0 + 1e-9, 1.3, d).unwrap();
            let exact = solve_cut_linear_r1(1.3, d).unwrap();
            assert_relative_eq!(near, exact, epsilon = 1e-7);
        }
    }

    #[test]
    fn cut_linear_rejects_forbidden_slopes() {
        assert!(solve_cut_linear(-2.0, 1.0, 3).is_err());
        assert!(solve_cut_linear(0.0, 1.0, 3).is_err());
        assert!(solve_cut_linear(-1.0, 1.0, 3).is_err());
        // Marginal reflection: formula degenerates to the boundary -1/2.
        assert_eq!(solve_cut_linear(-1.0, 1.0, 2).unwrap(), -0.5);
    }

    #[test]
    fn general_solver_matches_closed_form() {
        let f = CharFunc::linear(2.0, 1.0);
        let sols = solve_cut_general(&f, 4, (-0.5, 1.0)).unwrap();
        assert_eq!(sols.len(), 1);
        assert_relative_eq!(sols[0].alpha_j, 14.0 / 17.0, epsilon = 1e-10);
        assert!(sols[0].unitary);
    }

    #[test]
    fn general_solver_quadratic_one_cycle_region() {
        let f = quad(0.1, 1.0, 1.0);
        let bound = 10f64.sqrt();
        let sols = solve_cut_general(&f, 2, (-bound, bound)).unwrap();
        assert!(sols
            .iter()
            .any(|s| (s.alpha_j - 0.476_104_754_187_234).abs() < 1e-9));
        for s in &sols {
            assert_eq!(s.within_region, Some(true));
        }
    }

    #[test]
    fn general_solver_quadratic_two_cycle_region() {
        let f = quad(1.0, 1.0, 1.1);
        let sols = solve_cut_general(&f, 2, (-0.684, 1.049)).unwrap();
        // The degenerate d=1 root at -1 + sqrt(1.1) must not appear here.
        assert_eq!(sols.len(), 2);
        let root = 0.1f64.sqrt();
        assert_relative_eq!(sols[0].alpha_j, -root, epsilon = 1e-9);
        assert_relative_eq!(sols[1].alpha_j, root, epsilon = 1e-9);
        assert!(!sols[0].unitary);
        assert!(sols[1].unitary);
    }

    #[test]
    fn general_solver_rejects_bad_interval() {
        let f = quad(1.0, 1.0, 1.1);
        assert!(solve_cut_general(&f, 2, (1.0, -1.0)).is_err());
    }

    #[test]
    fn ladder_from_cut_spin_two() {
        let f = CharFunc::linear(1.0, 1.0);
        let ladder = ladder_from_cut(&f, 2.0, 5).unwrap();
        assert_eq!(ladder.alphas, vec![2.0, 1.0, 0.0, -1.0, -2.0]);
        assert_eq!(ladder.alpha_b(), -2.0);
        let n = ladder.n_values().unwrap();
        let expect = [2.0, 6f64.sqrt(), 6f64.sqrt(), 2.0, 0.0];
        for (got, want) in n.iter().zip(expect) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        assert_eq!(ladder.termination, Termination::Cut);
        assert!(ladder.unitary);
    }

    #[test]
    fn ladder_from_cut_quadratic_examples() {
        let f = quad(0.1, 1.0, 1.0);
        let ladder = ladder_from_cut(&f, 0.476_104_754_187_234, 2).unwrap();
        assert_relative_eq!(ladder.nsq[0], 0.952_778_983_968_095, epsilon = 1e-9);
        assert!(ladder.nsq[1].abs() < 1e-9);
        assert!(ladder.unitary);

        let g = quad(1.0, 1.0, 1.1);
        let ladder = ladder_from_cut(&g, -(0.1f64.sqrt()), 2).unwrap();
        assert_relative_eq!(ladder.nsq[0], -0.632_455_532_033_676, epsilon = 1e-9);
        assert!(!ladder.unitary);
    }

    #[test]
    fn ladder_from_cut_validates_preconditions() {
        let f = CharFunc::linear(1.0, 1.0);
        assert!(ladder_from_cut(&f, 2.1, 5).is_err());
    }

    #[test]
    fn ladder_from_cycle_fixed_point() {
        let f = quad(0.1, 1.0, 1.0);
        let fps = dynsys::fixed_points(&f).unwrap();
        let ladder = ladder_from_cycle(&fps[0], &f).unwrap();
        assert_eq!(ladder.d, 1);
        assert!(ladder.nsq[0].abs() < 1e-9);
        assert!(ladder.unitary);
        assert_eq!(ladder.termination, Termination::Cycle);
    }

    #[test]
    fn ladder_from_cycle_non_unitary_example() {
        let f = quad(1.0, 1.0, 1.1);
        let cycles = dynsys::find_cycles(&f, 2).unwrap();
        let ladder = ladder_from_cycle(&cycles[0], &f).unwrap();
        assert_relative_eq!(ladder.alphas[0], -0.683_772_233_983_162, epsilon = 1e-8);
        assert_relative_eq!(ladder.alphas[1], -1.316_227_766_016_838, epsilon = 1e-8);
        assert!(ladder.nsq[1].abs() < 1e-8);
        assert_relative_eq!(ladder.nsq[0], -0.632_455_532_033_676, epsilon = 1e-7);
        assert!(!ladder.unitary);
    }

    #[test]
    fn ladder_from_cycle_unitary_example() {
        // 2-cycle of f = 3x^2 + x - 0.5: points (-2 +- sqrt(2)) / 6,
        // nsq[0] = sqrt(2) / 9.
        let f = quad(3.0, 1.0, 0.5);
        let cycles = dynsys::find_cycles(&f, 2).unwrap();
        assert_eq!(cycles.len(), 1);
        let ladder = ladder_from_cycle(&cycles[0], &f).unwrap();
        let sqrt2 = 2f64.sqrt();
        assert_relative_eq!(ladder.alphas[0], (-2.0 + sqrt2) / 6.0, epsilon = 1e-9);
        assert_relative_eq!(ladder.alphas[1], (-2.0 - sqrt2) / 6.0, epsilon = 1e-9);
        assert_relative_eq!(ladder.nsq[0], sqrt2 / 9.0, epsilon = 1e-9);
        assert!(ladder.unitary);
    }

    #[test]
    fn classify_start_worked_cases() {
        let f = CharFunc::linear(1.0, 1.0);
        assert_eq!(
            classify_start(&f, 2.0, 50).unwrap(),
            StartClass::FiniteCut { d: 5 }
        );
        assert_eq!(
            classify_start(&f, 0.3, 50).unwrap(),
            StartClass::InfiniteDescending { diverged_at: None }
        );

        let g = quad(0.1, 1.0, 1.0);
        let alpha_star = 10f64.sqrt();
        assert_eq!(
            classify_start(&g, alpha_star, 20).unwrap(),
            StartClass::FiniteCycle { d: 1 }
        );
    }

    #[test]
    fn classify_start_reports_ascent() {
        // Above the largest fixed point of an upward quadratic the orbit
        // increases from the first step.
        let g = quad(0.1, 1.0, 1.0);
        match classify_start(&g, 5.0, 30).unwrap() {
            StartClass::NoLadder { first_ascent } => assert_eq!(first_ascent, 1),
            other => panic!("expected NoLadder, got {other:?}"),
        }
    }

    #[test]
    fn classify_start_marginal_reflection() {
        let f = CharFunc::linear(-1.0, 2.0);
        assert_eq!(
            classify_start(&f, 1.0, 10).unwrap(),
            StartClass::FiniteCycle { d: 2 }
        );
    }
}
