//! Scalar root-finding and adaptive quadrature used across the toolkit.

/// Bisection on `[lo, hi]`, requiring a sign change. Refines until the
/// bracket is narrower than `xtol` or |f| drops below `ftol`.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    mut f: F,
    xtol: f64,
    ftol: f64,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if !flo.is_finite() || !fhi.is_finite() || flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            return Some(mid); // bracket exhausted at f64 resolution
        }
        let fmid = f(mid);
        if fmid == 0.0 || fmid.abs() < ftol || (hi - lo).abs() < xtol {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bisection followed by secant polishing inside the bracket.
/// Returns the abscissa with |f| below `ftol` when reachable, otherwise the
/// best bisection estimate.
pub fn bisect_then_secant<F: FnMut(f64) -> f64>(
    lo: f64,
    hi: f64,
    mut f: F,
    ftol: f64,
) -> Option<f64> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..20 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() < ftol {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    // secant, falling back to bisection when the step leaves the bracket
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..80 {
        if f1.abs() < ftol {
            return Some(x1);
        }
        let denom = f1 - f0;
        let mut x2 = if denom != 0.0 { x1 - f1 * (x1 - x0) / denom } else { 0.5 * (a + b) };
        if !(x2 > a && x2 < b) {
            x2 = 0.5 * (a + b);
        }
        let f2 = f(x2);
        if f2 == 0.0 || f2.abs() < ftol {
            return Some(x2);
        }
        if f2.signum() == fa.signum() {
            a = x2;
            fa = f2;
        } else {
            b = x2;
            fb = f2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (b - a).abs() < f64::EPSILON * (a.abs() + b.abs() + 1.0) {
            break;
        }
    }
    Some(if f1.abs() < fa.abs().min(fb.abs()) { x1 } else if fa.abs() < fb.abs() { a } else { b })
}

// Gauss7 / Kronrod15 nodes and weights on [-1, 1] (positive half; symmetric).
const K15_NODES: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
// Gauss-7 reuses K15 nodes 1, 3, 5, 7 (0-based).
const G7_WEIGHTS: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in K15_NODES.iter().zip(K15_WEIGHTS.iter()).enumerate() {
        let (fl, fr) = if x == 0.0 {
            let v = f(c);
            (v, 0.0)
        } else {
            (f(c - h * x), f(c + h * x))
        };
        kronrod += w * (fl + fr);
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * (fl + fr);
        } else if x == 0.0 {
            gauss += G7_WEIGHTS[3] * fl;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h.abs())
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]` to the absolute
/// tolerance `abs_tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F, abs_tol: f64) -> f64 {
    fn recurse<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(a, b, f);
        if err <= tol || depth >= 40 || (b - a).abs() < 1e-15 * (a.abs() + b.abs() + 1.0) {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(a, mid, f, 0.5 * tol, depth + 1) + recurse(mid, b, f, 0.5 * tol, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(a, b, &mut f, abs_tol, 0)
}

// 5-point Gauss-Legendre on [-1, 1]; exact for degree 9.
const GL5_NODES: [f64; 5] = [
    -0.906179845938664,
    -0.538469310105683,
    0.0,
    0.538469310105683,
    0.906179845938664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236926885056189,
    0.478628670499366,
    0.568888888888889,
    0.478628670499366,
    0.236926885056189,
];

/// Fixed 5-point Gauss-Legendre quadrature over `[a, b]`.
pub fn gauss5<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (&x, &w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
        sum += w * f(c + h * x);
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(0.0, 2.0, |x| x * x - 2.0, 1e-14, 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn secant_polish_reaches_tight_ftol() {
        let r = bisect_then_secant(0.0, 2.0, |x| x * x * x - x - 1.0, 1e-13).unwrap();
        assert!((r * r * r - r - 1.0).abs() < 1e-13);
    }

    #[test]
    fn quadrature_polynomial_exact() {
        let v = integrate_adaptive(0.0, 2.0, |x| x * x, 1e-12);
        assert!((v - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_oscillatory() {
        let v = integrate_adaptive(0.0, 10.0, |x| (5.0 * x).sin(), 1e-11);
        let exact = (1.0 - (50f64).cos()) / 5.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn gauss5_degree9_exact() {
        let v = gauss5(-1.0, 3.0, |x| x.powi(9) - 2.0 * x.powi(4) + 1.0);
        let exact = (3f64.powi(10) - 1.0) / 10.0 - 2.0 * (3f64.powi(5) + 1.0) / 5.0 + 4.0;
        assert!((v - exact).abs() < 1e-9 * exact.abs());
    }
}
