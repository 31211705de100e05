//! Scalar root isolation: uniform bracketing scan, bisection, Newton polish.
//!
//! Works on closures so both explicit polynomials (fixed points) and iterated
//! maps (cut equations, cycle equations) share one code path. Escaped orbits
//! are expected to be pre-clamped by the caller so `g` stays finite and
//! sign-faithful everywhere.

use crate::error::{Error, Result};

/// One isolated root candidate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RootCandidate {
    pub x: f64,
    pub residual: f64,
    /// True when the candidate came from the tangency probe rather than a
    /// sign change; such candidates may turn out not to be roots at all.
    pub from_probe: bool,
}

/// Scans `[lo, hi]` with `n` subintervals, bisects every sign change, then
/// Newton-polishes. Tangent roots touching zero without a sign change are
/// recovered from near-zero local minima of `|g|` on the grid.
pub(crate) fn isolate<G, D>(g: G, dg: D, lo: f64, hi: f64, n: usize) -> Result<Vec<RootCandidate>>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::Precondition(format!(
            "empty or inverted interval [{lo}, {hi}]"
        )));
    }
    let n = n.max(8);
    let step = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| lo + step * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();

    let mut candidates = Vec::new();
    for i in 0..n {
        let (a, b) = (xs[i], xs[i + 1]);
        let (fa, fb) = (ys[i], ys[i + 1]);
        if fa == 0.0 {
            candidates.push((a, false));
            continue;
        }
        if i == n - 1 && fb == 0.0 {
            candidates.push((b, false));
            continue;
        }
        if fa * fb < 0.0 {
            candidates.push((bisect(&g, a, b), false));
        }
    }

    // Tangency recovery: grid-local minima of |g| that are already tiny.
    for i in 1..n {
        let mag = ys[i].abs();
        if mag < ys[i - 1].abs() && mag < ys[i + 1].abs() {
            let scale = 1.0 + xs[i].abs();
            if mag < 1e-3 * scale && ys[i - 1] * ys[i] > 0.0 && ys[i] * ys[i + 1] > 0.0 {
                candidates.push((xs[i], true));
            }
        }
    }

    let mut out = Vec::new();
    for (x0, from_probe) in candidates {
        let x = newton(&g, &dg, x0, 40);
        let residual = g(x).abs();
        out.push(RootCandidate {
            x,
            residual,
            from_probe,
        });
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(out)
}

/// Bisection on a sign-changing bracket; returns the midpoint of the final
/// interval.
pub(crate) fn bisect<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let mut fa = g(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = g(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Newton refinement; falls back to the best iterate seen.
pub(crate) fn newton<G, D>(g: &G, dg: &D, x0: f64, max_iter: usize) -> f64
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    let mut best = x0;
    let mut best_mag = g(x0).abs();
    for _ in 0..max_iter {
        let gx = g(x);
        if gx.abs() < best_mag {
            best_mag = gx.abs();
            best = x;
        }
        if gx == 0.0 {
            return x;
        }
        let slope = dg(x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - gx / slope;
        if !next.is_finite() || (next - x).abs() > 1.0 + x.abs() {
            break;
        }
        if next == x {
            break;
        }
        x = next;
    }
    let gx = g(x).abs();
    if gx < best_mag {
        x
    } else {
        best
    }
}

/// Merges sorted candidates closer than `gap` (keeps the smaller residual).
pub(crate) fn merge_close(mut roots: Vec<RootCandidate>, gap: f64) -> Vec<RootCandidate> {
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut out: Vec<RootCandidate> = Vec::with_capacity(roots.len());
    for cand in roots {
        match out.last_mut() {
            Some(prev) if (cand.x - prev.x).abs() <= gap * (1.0 + prev.x.abs()) => {
                if cand.residual < prev.residual {
                    prev.x = cand.x;
                    prev.residual = cand.residual;
                }
                prev.from_probe &= cand.from_probe;
            }
            _ => out.push(cand),
        }
    }
    out
}

/// All real roots of the ascending-coefficient polynomial `p`.
///
/// Degree <= 2 is solved in closed form (a double root is reported once);
/// higher degrees fall back to a scan inside the Cauchy root bound.
pub(crate) fn poly_real_roots(p: &[f64]) -> Result<Vec<f64>> {
    let mut deg = p.len().saturating_sub(1);
    while deg > 0 && p[deg] == 0.0 {
        deg -= 1;
    }
    match deg {
        0 => Err(Error::Precondition(
            "degree-0 polynomial has no isolated roots".into(),
        )),
        1 => Ok(vec![-p[0] / p[1]]),
        2 => {
            let (a, b, c) = (p[2], p[1], p[0]);
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                Ok(vec![])
            } else if disc == 0.0 {
                Ok(vec![-b / (2.0 * a)])
            } else {
                // Citardauq pairing avoids cancellation on the small root.
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                let (x1, x2) = if b == 0.0 {
                    let root = (disc.sqrt()) / (2.0 * a);
                    (-root, root)
                } else {
                    (q / a, c / q)
                };
                let mut roots = vec![x1, x2];
                roots.sort_by(f64::total_cmp);
                Ok(roots)
            }
        }
        _ => {
            let lead = p[deg];
            let bound = 1.0
                + p[..deg]
                    .iter()
                    .map(|c| (c / lead).abs())
                    .fold(0.0, f64::max);
            let eval = |x: f64| {
                let mut acc = 0.0;
                for &c in p[..=deg].iter().rev() {
                    acc = acc * x + c;
                }
                acc
            };
            let deriv = |x: f64| {
                let mut acc = 0.0;
                for k in (1..=deg).rev() {
                    acc = acc * x + p[k] * k as f64;
                }
                acc
            };
            let found = isolate(eval, deriv, -bound, bound, 512 * deg)?;
            let merged = merge_close(found, 1e-9);
            Ok(merged
                .into_iter()
                .filter(|c| c.residual <= 1e-9 * (1.0 + c.x.abs()))
                .map(|c| c.x)
                .collect())
        }
    }
}
