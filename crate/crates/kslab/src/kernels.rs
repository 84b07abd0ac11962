//! Pointwise kernels and symbols: the Kerzman-Stein kernel, its wedge
//! reductions, the convolution form and Fourier symbol, the weighted graph
//! kernel, and the comb kernel.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Result;
use crate::quadrature::integrate_adaptive_complex;

/// Ray / subscript selector for the wedge kernels.
///
/// For [`wedge_cross_kernel`] it is the sign of the output ray (the row of
/// the 2x2 system); for [`wedge_convolution_kernel`] it is the subscript of
/// k-/k+. The pairing is `Plus` row <-> `Minus` kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Kerzman-Stein kernel A(z, w) = (1/2pi i) [ T(w)/(w-z) - conj(T(z))/conj(w-z) ].
///
/// Skew symmetry A(w, z) = -conj(A(z, w)) holds to the last bit. The
/// coincidence point z = w is outside the domain; meshes keep nodes
/// pairwise distinct and assembly fills the diagonal with the arc limit 0.
#[inline]
pub fn ks_kernel(z: Complex64, tz: Complex64, w: Complex64, tw: Complex64) -> Complex64 {
    debug_assert!(z != w, "ks_kernel evaluated on the diagonal");
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    (tw / (w - z) - tz.conj() / (w - z).conj()) / i2pi
}

/// Cross-ray wedge kernel: the value of the Kerzman-Stein kernel between
/// opposite rays of W_theta in ray coordinates,
/// +-e^{-+ i theta} cos(theta)/(pi i) * (t-s)/(t^2 + s^2 - 2 s t cos 2theta).
///
/// `branch` is the output ray: `Plus` maps data on the lower ray to values
/// on the upper ray. The denominator uses cos(2 theta); re-deriving
/// |t e^{-+ i theta} - s e^{+- i theta}|^2 confirms the cosine.
pub fn wedge_cross_kernel(s: f64, t: f64, theta: f64, branch: Branch) -> Complex64 {
    debug_assert!(s != 0.0 || t != 0.0, "wedge cross kernel undefined at the corner");
    let denom = t * t + s * s - 2.0 * s * t * (2.0 * theta).cos();
    let phase = match branch {
        Branch::Plus => Complex64::from_polar(1.0, -theta),
        Branch::Minus => -Complex64::from_polar(1.0, theta),
    };
    phase * theta.cos() / Complex64::new(0.0, PI) * ((t - s) / denom)
}

/// Convolution kernel on the logarithmic variable,
/// k_{-+}(u) = -+ e^{-+ i theta} cos(theta)/(pi i) * sinh(u/2)/(cosh u - cos 2theta).
///
/// `Branch::Minus` selects k_-, which drives the `Plus` row of
/// [`wedge_cross_kernel`] after the substitution s = e^u, t = e^v.
pub fn wedge_convolution_kernel(u: f64, theta: f64, branch: Branch) -> Complex64 {
    let denom = u.cosh() - (2.0 * theta).cos();
    let phase = match branch {
        Branch::Minus => -Complex64::from_polar(1.0, -theta),
        Branch::Plus => Complex64::from_polar(1.0, theta),
    };
    phase * theta.cos() / Complex64::new(0.0, PI) * ((u * 0.5).sinh() / denom)
}

/// Fourier symbol phi(xi) = sinh[xi (pi - 2 theta)] / cosh(xi pi).
///
/// Evaluated in exponential form so large |xi| neither overflows nor loses
/// the sign; exactly odd in xi by construction.
pub fn symbol_phi(xi: f64, theta: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    let sign = if xi < 0.0 { -1.0 } else { 1.0 };
    let x = xi.abs();
    let a = x * (PI - 2.0 * theta);
    let b = x * PI;
    // sinh(a)/cosh(b) = e^{a-b} (1 - e^{-2a}) / (1 + e^{-2b}),  a >= 0
    //                 = -e^{-a-b} (1 - e^{2a}) / (1 + e^{-2b}), a < 0
    let value = if a >= 0.0 {
        (a - b).exp() * (1.0 - (-2.0 * a).exp()) / (1.0 + (-2.0 * b).exp())
    } else {
        -(-a - b).exp() * (1.0 - (2.0 * a).exp()) / (1.0 + (-2.0 * b).exp())
    };
    sign * value
}

/// Target of the Fourier check for each kernel subscript:
/// FT(k_-) = +e^{-i theta} phi/sqrt(2 pi), FT(k_+) = -e^{+i theta} phi/sqrt(2 pi),
/// with the convention FT f(xi) = (1/sqrt(2 pi)) int e^{-i x xi} f(x) dx.
pub fn symbol_side(xi: f64, theta: f64, branch: Branch) -> Complex64 {
    let phi = symbol_phi(xi, theta);
    let phase = match branch {
        Branch::Minus => Complex64::from_polar(1.0, -theta),
        Branch::Plus => -Complex64::from_polar(1.0, theta),
    };
    phase * (phi / (2.0 * PI).sqrt())
}

/// Numerically Fourier-transforms both convolution kernels over |u| <= 60
/// (the integrand decays like e^{-|u|/2}, so the truncated tail is below
/// 1e-13) and returns the largest pointwise deviation from
/// [`symbol_side`] over the grid.
pub fn symbol_matches_kernel_ft(theta: f64, xi_grid: &[f64]) -> Result<f64> {
    const U_MAX: f64 = 60.0;
    let mut worst = 0.0f64;
    for &xi in xi_grid {
        for branch in [Branch::Minus, Branch::Plus] {
            let f = |u: f64| {
                wedge_convolution_kernel(u, theta, branch)
                    * Complex64::new(0.0, -u * xi).exp()
            };
            let ft = integrate_adaptive_complex(&f, -U_MAX, U_MAX, 1e-11)?
                / (2.0 * PI).sqrt();
            let err = (ft - symbol_side(xi, theta, branch)).norm();
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

/// Weighted graph kernel: the Kerzman-Stein kernel of the curve
/// x + i phi(x) expressed on L^2 of the graph parameter through the
/// isometry f -> f(x + i phi(x)) h(x)^{1/2}, h = (1 + phi'^2)^{1/2}:
///
/// (1/2pi i h(x)^{1/2} h(y)^{1/2}) [ h(x)(1 + i phi'(y))/((y-x) + i(phi(y)-phi(x)))
///                                 - h(y)(1 - i phi'(x))/((y-x) - i(phi(y)-phi(x))) ].
pub fn graph_kernel(
    x: f64,
    y: f64,
    phi_x: f64,
    phi_y: f64,
    dphi_x: f64,
    dphi_y: f64,
) -> Complex64 {
    debug_assert!(x != y, "graph kernel evaluated on the diagonal");
    let hx = (1.0 + dphi_x * dphi_x).sqrt();
    let hy = (1.0 + dphi_y * dphi_y).sqrt();
    let d = Complex64::new(y - x, phi_y - phi_x);
    let num_plus = Complex64::new(1.0, dphi_y) * hx;
    let num_minus = Complex64::new(1.0, -dphi_x) * hy;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    (num_plus / d - num_minus / d.conj()) / (i2pi * (hx * hy).sqrt())
}

/// Comb kernel between interval j at height eps*j/n and interval k at
/// height eps*k/n: (1/pi) (eps (j-k)/n) / ((y-x)^2 + eps^2 (j-k)^2/n^2).
/// Identically zero on a single interval (j = k).
pub fn comb_kernel(x: f64, j: usize, y: f64, k: usize, n: usize, eps: f64) -> f64 {
    if j == k {
        return 0.0;
    }
    let sep = eps * ((j as f64 - k as f64) / n as f64);
    sep / (PI * ((y - x) * (y - x) + sep * sep))
}
