//! Gauss-Legendre rules and a small adaptive integrator.

use num_complex::Complex64;

use crate::error::{KsError, Result};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence. Nodes ascend.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        // Tricomi initial guess for the i-th root (descending).
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, t);
        x[n - 1 - i] = t;
        w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    // enforce symmetry exactly
    for i in 0..n / 2 {
        let xm = 0.5 * (x[n - 1 - i] - x[i]);
        x[i] = -xm;
        x[n - 1 - i] = xm;
        let wm = 0.5 * (w[i] + w[n - 1 - i]);
        w[i] = wm;
        w[n - 1 - i] = wm;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Legendre P_n and its derivative at t.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    if n == 1 {
        return (t, 1.0);
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Fixed-order Gauss-Legendre quadrature of `f` over [a, b].
pub fn integrate_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    x.iter().zip(w.iter()).map(|(&xi, &wi)| half * wi * f(mid + half * xi)).sum()
}

/// Adaptive Gauss-Legendre integration of a real integrand: panels are
/// bisected while the GL15/GL7 discrepancy exceeds the local tolerance.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let g = |t: f64| Complex64::new(f(t), 0.0);
    integrate_adaptive_complex(&g, a, b, tol).map(|v| v.re)
}

/// Adaptive Gauss-Legendre integration of a complex integrand.
pub fn integrate_adaptive_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    let (x7, w7) = gauss_legendre(7);
    let (x15, w15) = gauss_legendre(15);
    let rule = |lo: f64, hi: f64| -> (Complex64, f64) {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut coarse = Complex64::new(0.0, 0.0);
        for (&xi, &wi) in x7.iter().zip(w7.iter()) {
            coarse += f(mid + half * xi) * (half * wi);
        }
        let mut fine = Complex64::new(0.0, 0.0);
        for (&xi, &wi) in x15.iter().zip(w15.iter()) {
            fine += f(mid + half * xi) * (half * wi);
        }
        (fine, (fine - coarse).norm())
    };

    // worklist of (lo, hi, depth)
    let mut stack = vec![(a, b, 0usize)];
    let mut total = Complex64::new(0.0, 0.0);
    let span = (b - a).abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = rule(lo, hi);
        let local_tol = tol * ((hi - lo).abs() / span).max(1e-300);
        if err <= local_tol || err <= 1e-16 * val.norm().max(1.0) {
            total += val;
        } else {
            if depth >= 60 {
                return Err(KsError::Numeric(format!(
                    "adaptive quadrature failed to converge on [{lo}, {hi}] (residual {err:.3e}, tol {local_tol:.3e})"
                )));
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                total += val; // interval no longer splittable in f64
                continue;
            }
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(KsError::Numeric("adaptive quadrature produced non-finite result".into()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_rule_integrates_polynomials_exactly() {
        // order n integrates degree 2n-1 exactly
        for n in [2usize, 5, 12, 16, 24, 32] {
            let deg = 2 * n - 1;
            let f = |t: f64| t.powi(deg as i32) + 3.0 * t * t;
            let got = integrate_gl(&f, -1.0, 1.0, n);
            assert!((got - 2.0).abs() < 1e-13, "order {n}: {got}");
        }
    }

    #[test]
    fn gl_weights_sum_to_interval_length() {
        for n in 1..=32 {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "order {n}");
        }
    }

    #[test]
    fn adaptive_handles_boundary_layer() {
        // integral of a/(x^2+a^2) over [0,1] = atan(1/a), steep at x=0
        let a = 1e-4;
        let f = |x: f64| a / (x * x + a * a);
        let got = integrate_adaptive(&f, 0.0, 1.0, 1e-12).unwrap();
        assert!((got - (1.0 / a).atan()).abs() < 1e-10);
    }

    #[test]
    fn adaptive_complex_oscillatory() {
        // integral of e^{i 5 x} on [0, 2pi] = 0
        let f = |x: f64| Complex64::new(0.0, 5.0 * x).exp();
        let got = integrate_adaptive_complex(&f, 0.0, 2.0 * std::f64::consts::PI, 1e-12).unwrap();
        assert!(got.norm() < 1e-11);
    }
}
