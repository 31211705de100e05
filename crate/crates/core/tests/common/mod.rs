//! Test-only oracles, deliberately independent of the library's solvers:
//! dense bisection-only scans of `f^d(x) - x` over explicit closures plus
//! finite-difference multipliers.

/// `f^d(x)` for a plain closure.
pub fn iter_map(f: &dyn Fn(f64) -> f64, x: f64, d: usize) -> f64 {
    let mut y = x;
    for _ in 0..d {
        y = f(y);
    }
    y
}

/// Exhaustive scan for roots of `f^d(x) - x` over `[lo, hi]` using sign
/// changes and long bisection only. Escaped orbits count as large positive.
pub fn periodic_points(
    f: &dyn Fn(f64) -> f64,
    d: usize,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Vec<f64> {
    let g = |x: f64| {
        let mut y = x;
        for _ in 0..d {
            y = f(y);
            if !y.is_finite() || y.abs() > 1e8 {
                return 1e16;
            }
        }
        y - x
    };
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = lo;
    let mut prev_g = g(lo);
    for i in 1..=samples {
        let x = lo + (hi - lo) * i as f64 / samples as f64;
        let gx = g(x);
        if prev_g == 0.0 {
            roots.push(prev_x);
        } else if prev_g * gx < 0.0 && prev_g.abs() < 1e15 && gx.abs() < 1e15 {
            let (mut a, mut b, mut ga) = (prev_x, x, prev_g);
            for _ in 0..120 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if ga * gm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_g = gx;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    roots
}

/// Periodic points of exact period `d`, grouped into cycles in orbit order
/// starting from the largest element.
pub fn cycles(
    f: &dyn Fn(f64) -> f64,
    d: usize,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Vec<Vec<f64>> {
    let tol = 1e-7;
    let pts = periodic_points(f, d, lo, hi, samples);
    let exact: Vec<f64> = pts
        .into_iter()
        .filter(|&x| {
            (1..d)
                .filter(|e| d % e == 0)
                .all(|e| (iter_map(f, x, e) - x).abs() > tol * (1.0 + x.abs()))
        })
        .collect();

    let mut order: Vec<usize> = (0..exact.len()).collect();
    order.sort_by(|&i, &j| exact[j].total_cmp(&exact[i]));
    let mut claimed = vec![false; exact.len()];
    let mut out = Vec::new();
    for &i in &order {
        if claimed[i] {
            continue;
        }
        claimed[i] = true;
        let mut orbit = vec![exact[i]];
        let mut y = exact[i];
        for _ in 1..d {
            y = f(y);
            match exact
                .iter()
                .position(|&p| (p - y).abs() <= tol * (1.0 + y.abs()))
            {
                Some(k) => {
                    claimed[k] = true;
                    orbit.push(exact[k]);
                }
                None => orbit.push(y),
            }
        }
        out.push(orbit);
    }
    out
}

/// Multiplier of a cycle by central finite differences of `f`.
pub fn multiplier_fd(f: &dyn Fn(f64) -> f64, cycle: &[f64]) -> f64 {
    let h = 1e-6;
    cycle
        .iter()
        .map(|&x| (f(x + h) - f(x - h)) / (2.0 * h))
        .product()
}
