//! Spectra of skew-Hermitian operator matrices, the analytic wedge
//! spectrum, essential-spectrum prediction from corner angles, and the
//! refinement diagnostics.

use num_complex::Complex64;

use crate::error::{KsError, Result};
use crate::geometry::{Boundary, Corner};
use crate::kernels::symbol_phi;
use crate::linalg::CMat;
use crate::mesh::{assemble_ks, build_mesh, MeshParams, OperatorMatrix};

/// Eigenvalue summary of a skew-Hermitian matrix: the spectrum is
/// i * {mu} with real mu, symmetric about zero.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    /// Sorted ascending.
    pub mu: Vec<f64>,
    /// max |mu|.
    pub op_norm: f64,
    /// Matrix dimension.
    pub n: usize,
    /// Largest gap between consecutive mu values.
    pub max_gap: f64,
}

impl SpectrumReport {
    fn from_mu(mut mu: Vec<f64>) -> Self {
        mu.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let op_norm = mu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let max_gap = mu.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
        let n = mu.len();
        Self { mu, op_norm, n, max_gap }
    }

    /// CSV dump: one mu per row.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "mu")?;
        for v in &self.mu {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }
}

/// Predicted interval i[-s*, +s*].
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct SpectrumInterval {
    pub s_star: f64,
}

/// Eigenvalues of a skew-Hermitian operator matrix through the Hermitian
/// solve of -iA. The input must be exactly skew-Hermitian (our assemblies
/// are, by construction).
pub fn eigs_skew(a: &OperatorMatrix) -> Result<SpectrumReport> {
    check_skew(&a.mat)?;
    let mu = skew_eigenvalues(&a.mat)?;
    Ok(SpectrumReport::from_mu(mu))
}

/// Values-and-vectors variant: returns the report plus the unitary U with
/// A U = U diag(i mu). Used for residual and round-trip checks.
pub fn eigs_skew_full(a: &OperatorMatrix) -> Result<(SpectrumReport, CMat)> {
    check_skew(&a.mat)?;
    let h = a.mat.scale(Complex64::new(0.0, -1.0));
    let (mu, vecs) = h.hermitian_eigen()?;
    Ok((SpectrumReport::from_mu(mu), vecs))
}

fn check_skew(m: &CMat) -> Result<()> {
    let defect = m.skew_hermitian_defect();
    if defect != 0.0 {
        return Err(KsError::Contract(format!(
            "matrix is not exactly skew-Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// Raw eigenvalue helper on a bare matrix (same contract as [`eigs_skew`]).
pub fn skew_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    let h = m.scale(Complex64::new(0.0, -1.0));
    h.hermitian_eigenvalues()
}

/// Locates sup_xi |phi(xi; theta)| by a coarse scan plus golden-section
/// refinement on [0, Xi], Xi = ln(2/tol)/(2 min(theta, pi-theta)) chosen so
/// the exponential tail of phi is below tol. Returns (xi*, s*).
pub fn wedge_sup_phi(theta: f64, tol: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(KsError::Domain(format!("wedge angle {theta} outside (0, pi)")));
    }
    if !(tol > 0.0) {
        return Err(KsError::Domain("tolerance must be positive".into()));
    }
    let dist = theta.min(std::f64::consts::PI - theta);
    if (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-14 {
        return Ok((0.0, 0.0));
    }
    let xi_max = (2.0 / tol).ln() / (2.0 * dist);
    let f = |xi: f64| symbol_phi(xi, theta).abs();
    // coarse bracket of the single interior maximum
    let grid = 2048usize;
    let mut best_k = 0usize;
    let mut best = 0.0f64;
    for k in 0..=grid {
        let xi = xi_max * (k as f64 / grid as f64);
        let v = f(xi);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let mut a = xi_max * (best_k.saturating_sub(1) as f64 / grid as f64);
    let mut b = xi_max * ((best_k + 1).min(grid) as f64 / grid as f64);
    // golden-section maximization
    let inv_gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_gr * (b - a);
    let mut d = a + inv_gr * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_gr * (b - a);
            fd = f(d);
        }
    }
    let xi_star = 0.5 * (a + b);
    Ok((xi_star, f(xi_star)))
}

/// The exact spectrum interval of the symmetric wedge operator.
pub fn wedge_spectrum(theta: f64) -> Result<SpectrumInterval> {
    let (_, s_star) = wedge_sup_phi(theta, 1e-12)?;
    Ok(SpectrumInterval { s_star })
}

/// Essential spectrum from the corner list: the union of the per-corner
/// wedge intervals, i.e. the largest of them. No corners means a compact
/// operator and a trivial essential spectrum.
pub fn essential_spectrum(corners: &[Corner]) -> Result<SpectrumInterval> {
    let mut s_star: f64 = 0.0;
    for c in corners {
        let (_, s) = wedge_sup_phi(c.half_angle, 1e-12)?;
        s_star = s_star.max(s);
    }
    Ok(SpectrumInterval { s_star })
}

/// Fraction of the uniform delta-grid on [-s*, s*] that lies within delta
/// of a computed eigenvalue.
pub fn fill_fraction(report: &SpectrumReport, interval: &SpectrumInterval, delta: f64) -> f64 {
    assert!(delta > 0.0, "fill_fraction needs delta > 0");
    let s = interval.s_star;
    if s == 0.0 {
        let all_near_zero = report.mu.iter().all(|&v| v.abs() <= delta);
        return if all_near_zero { 1.0 } else { 0.0 };
    }
    let m = (2.0 * s / delta).ceil() as usize;
    let mut hits = 0usize;
    for k in 0..=m {
        let g = -s + 2.0 * s * (k as f64 / m as f64);
        // mu is sorted: binary search for the nearest value
        let idx = report.mu.partition_point(|&v| v < g);
        let mut near = f64::INFINITY;
        if idx < report.mu.len() {
            near = near.min((report.mu[idx] - g).abs());
        }
        if idx > 0 {
            near = near.min((report.mu[idx - 1] - g).abs());
        }
        if near <= delta {
            hits += 1;
        }
    }
    hits as f64 / (m + 1) as f64
}

/// One refinement level of a convergence study.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub n: usize,
    pub op_norm: f64,
    pub fill: f64,
    pub max_gap: f64,
}

/// Assembles and solves the boundary on every ladder level, reporting the
/// operator norm, the fill of the predicted essential-spectrum interval
/// (delta-resolution), and the largest eigenvalue gap.
pub fn convergence_study(
    boundary: &Boundary,
    ladder: &[MeshParams],
    delta: f64,
) -> Result<Vec<ConvergenceRow>> {
    if ladder.len() < 3 {
        return Err(KsError::Input("convergence ladder needs at least 3 levels".into()));
    }
    let interval = essential_spectrum(boundary.corners())?;
    let mut rows = Vec::with_capacity(ladder.len());
    for params in ladder {
        let mesh = build_mesh(boundary, params)?;
        let a = assemble_ks(&mesh)?;
        let report = eigs_skew(&a)?;
        let fill = fill_fraction(&report, &interval, delta);
        rows.push(ConvergenceRow {
            n: report.n,
            op_norm: report.op_norm,
            fill,
            max_gap: report.max_gap,
        });
    }
    Ok(rows)
}

/// CSV emission for convergence tables.
pub fn write_convergence_csv<W: std::io::Write>(
    rows: &[ConvergenceRow],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "n,op_norm,fill,max_gap")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n, r.op_norm, r.fill, r.max_gap)?;
    }
    Ok(())
}
