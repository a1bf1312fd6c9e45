//! Scalar root and minimum refinement used by the spectral solver and the
//! eigenphase scan.

/// Refine a sign-change bracket [a, b] (f(a)·f(b) ≤ 0) with a
/// bisection/secant hybrid until the interval is shorter than `xtol`.
pub(crate) fn refine_sign_change<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: f64,
    max_iter: usize,
) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(fa * fb < 0.0);
    for _ in 0..max_iter {
        if (b - a).abs() < xtol {
            break;
        }
        // secant proposal, clamped to the inner 90% of the bracket
        let mut x = if fb != fa { b - fb * (b - a) / (fb - fa) } else { 0.5 * (a + b) };
        let lo = a + 0.05 * (b - a);
        let hi = b - 0.05 * (b - a);
        if !(x > lo && x < hi) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    // final linear interpolation inside the tight bracket
    if fb != fa {
        let x = b - fb * (b - a) / (fb - fa);
        if x >= a && x <= b {
            return x;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimization of f on [a, b]; returns (argmin, min).
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() < xtol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fc < fx && fc < fd {
        (c, fc)
    } else if fd < fx {
        (d, fd)
    } else {
        (x, fx)
    }
}
