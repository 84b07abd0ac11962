//! The comb construction: closed-form image of the first-interval
//! indicator, the norm lower bound that grows like n, projection-norm
//! identities, and the parallel-lines reference constant.

use num_complex::Complex64;

use crate::error::{KsError, Result};
use crate::geometry::{Arc, Boundary, CombSpec};
use crate::kernels::comb_kernel;
use crate::linalg::CMat;
use crate::mesh::{build_mesh, max_nodes, MeshParams};
use crate::quadrature::integrate_adaptive;

/// Closed form of the indicator image on an interval at distance alpha:
/// (1/pi)(arctan((1-x)/alpha) + arctan(x/alpha)); symmetric about x = 1/2.
pub fn af0_exact(x: f64, alpha: f64) -> f64 {
    debug_assert!(x > 0.0 && x < 1.0 && alpha > 0.0);
    (((1.0 - x) / alpha).atan() + (x / alpha).atan()) / std::f64::consts::PI
}

/// Both routes to ||A f_0||^2 restricted to the upper intervals, plus the
/// derived norms.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct CombReport {
    pub n: usize,
    pub eps: f64,
    /// Adaptive quadrature of the closed form.
    pub af0_norm_sq_exact: f64,
    /// Nystrom apply of the assembled kernel, streamed block by block.
    pub af0_norm_sq_matrix: f64,
    pub lower_bound: f64,
    /// sqrt(1 + ||A f_0||^2) from the exact route: what the projection
    /// norm must exceed.
    pub implied_cauchy_norm: f64,
}

/// The closed-form lower bound n (1 - (4pi+8)/(3pi) sqrt(eps)) -
/// (2pi+4)/pi sqrt(eps) for ||A||^2 >= ||A f_0||^2.
pub fn norm_lower_bound(n: usize, eps: f64) -> Result<f64> {
    let spec = CombSpec::new(n, eps)?;
    let r = spec.eps.sqrt();
    let n = spec.n as f64;
    Ok(n * (1.0 - (4.0 * std::f64::consts::PI + 8.0) / (3.0 * std::f64::consts::PI) * r)
        - (2.0 * std::f64::consts::PI + 4.0) / std::f64::consts::PI * r)
}

/// Exact route: sum over j of the adaptive integral of g_j^2, with panel
/// hints at the alpha-wide boundary layers.
pub fn af0_norm_sq_exact(spec: &CombSpec, quad_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for alpha in spec.alphas().into_iter().skip(1) {
        let f = |x: f64| {
            let g = af0_exact(x.clamp(1e-300, 1.0), alpha);
            g * g
        };
        // split at the boundary layers so the adaptive rule converges fast
        let cut = (2.0 * alpha.sqrt()).min(0.5);
        let mut acc = 0.0;
        for (a, b) in [(0.0, cut), (cut, 1.0 - cut), (1.0 - cut, 1.0)] {
            if b > a {
                acc += integrate_adaptive(&f, a, b, quad_tol / 3.0)?;
            }
        }
        total += acc;
    }
    Ok(total)
}

/// Mesh parameters for the matrix route: the cross-interval kernel is a
/// Lorentzian of width alpha_min = eps/n, so panels must not exceed about
/// order * alpha_min / 4 for the Nystrom sum to resolve it.
fn matrix_route_params(spec: &CombSpec) -> MeshParams {
    let alpha_min = spec.eps / spec.n as f64;
    let order = 16usize;
    let panels = ((1.0 / (4.0 * alpha_min)).ceil() as usize).clamp(16, 400);
    MeshParams { panels_per_arc: panels, order, grading_levels: 12, grading_ratio: 0.5 }
}

/// Matrix route: the Nystrom operator applied to the discretized indicator
/// of the base interval, summed over the upper intervals. The entries are
/// exactly those of the dense comb assembly; the (I_j, I_0) blocks are
/// streamed one row at a time so the alpha-resolving mesh never needs a
/// dense N^2 allocation.
pub fn af0_norm_sq_matrix(spec: &CombSpec) -> Result<f64> {
    let params = matrix_route_params(spec);
    // all intervals share one parameter mesh on [0, 1]
    let template = Boundary::new(
        vec![Arc::segment(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))?],
        Vec::new(),
        false,
    )?;
    let mesh = build_mesh(&template, &params)?;
    let xs: Vec<f64> = mesh.nodes().iter().map(|n| n.t).collect();
    let ws: Vec<f64> = mesh.nodes().iter().map(|n| n.weight).collect();
    if xs.len() * (spec.n + 1) > max_nodes() * 4 {
        return Err(KsError::Resource(format!(
            "comb matrix route would need {} nodes per interval",
            xs.len()
        )));
    }
    let row_term = |j: usize, i: usize| -> f64 {
        let gi: f64 = xs
            .iter()
            .zip(ws.iter())
            .map(|(&y, &wy)| comb_kernel(xs[i], j, y, 0, spec.n, spec.eps) * wy)
            .sum();
        ws[i] * gi * gi
    };
    let mut total = 0.0;
    for j in 1..=spec.n {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            total += (0..xs.len()).into_par_iter().map(|i| row_term(j, i)).sum::<f64>();
        }
        #[cfg(not(feature = "parallel"))]
        {
            total += (0..xs.len()).map(|i| row_term(j, i)).sum::<f64>();
        }
    }
    Ok(total)
}

/// Dense twin of [`af0_norm_sq_matrix`] for cross-validation at moderate
/// resolution: assembles the full comb operator with the given parameters
/// and applies it to the discretized indicator of I_0.
pub fn af0_norm_sq_matrix_dense(spec: &CombSpec, params: &MeshParams) -> Result<f64> {
    let boundary = crate::geometry::make_comb(spec)?;
    let mesh = build_mesh(&boundary, params)?;
    let a = crate::mesh::assemble_ks(&mesh)?;
    let nodes = mesh.nodes();
    // discretized f_0: value 1 on interval 0, times sqrt(w) in the
    // weighted coordinates
    let f0: Vec<Complex64> = nodes
        .iter()
        .map(|n| {
            if n.arc == 0 {
                Complex64::new(n.weight.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let image = a.mat.matvec(&f0);
    Ok(nodes
        .iter()
        .zip(image.iter())
        .filter(|(n, _)| n.arc != 0)
        .map(|(_, v)| v.norm_sqr())
        .sum())
}

/// Runs both routes and packages the report.
pub fn af0_norm_sq(spec: &CombSpec, quad_tol: f64) -> Result<CombReport> {
    let exact = af0_norm_sq_exact(spec, quad_tol)?;
    let matrix = af0_norm_sq_matrix(spec)?;
    let lower = norm_lower_bound(spec.n, spec.eps)?;
    Ok(CombReport {
        n: spec.n,
        eps: spec.eps,
        af0_norm_sq_exact: exact,
        af0_norm_sq_matrix: matrix,
        lower_bound: lower,
        implied_cauchy_norm: cauchy_norm_from_ks(exact.sqrt()),
    })
}

/// ||C|| = sqrt(1 + ||A||^2): the projection-norm identity.
pub fn cauchy_norm_from_ks(a: f64) -> f64 {
    assert!(a >= 0.0);
    (1.0 + a * a).sqrt()
}

/// For an idempotent P: returns (||P - P*||, sqrt(||P||^2 - 1)); the two
/// agree for exact projections.
pub fn projection_gap(p: &CMat) -> Result<(f64, f64)> {
    if !p.is_square() {
        return Err(KsError::Input("projection_gap needs a square matrix".into()));
    }
    let norm_p = p.spectral_norm()?;
    let idem = p.matmul(p).sub(p).spectral_norm()?;
    if idem > 1e-12 * norm_p.max(1.0) {
        return Err(KsError::Contract(format!(
            "matrix is not idempotent: ||P^2 - P|| = {idem:.3e}"
        )));
    }
    let gap = p.sub(&p.adjoint()).spectral_norm()?;
    let predicted = if norm_p <= 1.0 { 0.0 } else { (norm_p * norm_p - 1.0).sqrt() };
    Ok((gap, predicted))
}

/// Norm of the singular Cauchy operator for n parallel lines,
/// (1/2) cot(pi / 4n); a reference constant, not a discretization.
pub fn parallel_lines_reference(n_lines: usize) -> f64 {
    assert!(n_lines >= 1);
    0.5 / (std::f64::consts::PI / (4.0 * n_lines as f64)).tan()
}

/// Sweep output row for the CSV interface.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub n: usize,
    pub eps: f64,
    pub af0_norm_sq: f64,
    pub lower_bound: f64,
    pub implied_cauchy_norm_sq: f64,
}

/// Exact-route sweep over a parameter grid.
pub fn sweep(ns: &[usize], epss: &[f64], quad_tol: f64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for &eps in epss {
            let spec = CombSpec::new(n, eps)?;
            let v = af0_norm_sq_exact(&spec, quad_tol)?;
            rows.push(SweepRow {
                n,
                eps,
                af0_norm_sq: v,
                lower_bound: norm_lower_bound(n, eps)?,
                implied_cauchy_norm_sq: 1.0 + v,
            });
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "n,eps,af0_norm_sq,lower_bound,implied_cauchy_norm_sq")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n, r.eps, r.af0_norm_sq, r.lower_bound, r.implied_cauchy_norm_sq
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::ks_kernel;

    #[test]
    fn af0_exact_values() {
        // x = 1/2, alpha = 0.1: (2/pi) arctan 5
        assert!((af0_exact(0.5, 0.1) - 0.87433408362199763).abs() < 1e-15);
        // alpha -> 0 saturates at 1
        assert!((af0_exact(0.3, 1e-12) - 1.0).abs() < 1e-11);
        // symmetry g(x) = g(1-x)
        for x in [0.1, 0.25, 0.4] {
            assert!((af0_exact(x, 0.05) - af0_exact(1.0 - x, 0.05)).abs() < 1e-15);
        }
    }

    #[test]
    fn af0_exact_increases_on_left_half() {
        let alpha = 0.03;
        let mut prev = 0.0;
        for k in 1..=50 {
            let x = 0.5 * k as f64 / 50.0;
            let g = af0_exact(x, alpha);
            assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn lower_bound_values() {
        assert!((norm_lower_bound(10, 0.01).unwrap() - 7.4905163490363753).abs() < 1e-12);
        assert!((norm_lower_bound(1, 0.01).unwrap() - 0.45446007587747289).abs() < 1e-12);
        assert!(norm_lower_bound(3, 0.3).is_err());
        // eps -> 0 limit approaches n
        assert!((norm_lower_bound(7, 1e-12).unwrap() - 7.0).abs() < 1e-4);
    }

    #[test]
    fn lower_bound_monotone_in_n_and_eps() {
        for n in 1..=9usize {
            for eps in [0.001, 0.005, 0.02, 0.05] {
                let b = norm_lower_bound(n, eps).unwrap();
                assert!(norm_lower_bound(n + 1, eps).unwrap() > b);
                assert!(norm_lower_bound(n, eps * 0.5).unwrap() > b);
            }
        }
    }

    #[test]
    fn exact_route_matches_frozen_oracle() {
        // mpmath 30-digit quadrature references
        let spec = CombSpec::new(1, 0.01).unwrap();
        let v = af0_norm_sq_exact(&spec, 1e-11).unwrap();
        assert!((v - 0.93325183117195296).abs() < 1e-9, "{v}");
        let spec = CombSpec::new(1, 0.1).unwrap();
        let v = af0_norm_sq_exact(&spec, 1e-11).unwrap();
        assert!((v - 0.63440753396581417).abs() < 1e-9, "{v}");
        let spec = CombSpec::new(3, 0.02).unwrap();
        let v = af0_norm_sq_exact(&spec, 1e-11).unwrap();
        assert!((v - 2.7524306324579657).abs() < 1e-8, "{v}");
    }

    #[test]
    fn norm_increases_as_eps_shrinks() {
        let hi = af0_norm_sq_exact(&CombSpec::new(1, 0.01).unwrap(), 1e-10).unwrap();
        let lo = af0_norm_sq_exact(&CombSpec::new(1, 0.2).unwrap(), 1e-10).unwrap();
        assert!(hi > lo);
    }

    #[test]
    fn matrix_route_agrees_with_exact_for_small_comb() {
        let spec = CombSpec::new(1, 0.1).unwrap();
        let exact = af0_norm_sq_exact(&spec, 1e-10).unwrap();
        let matrix = af0_norm_sq_matrix(&spec).unwrap();
        assert!((exact - matrix).abs() < 1e-8, "{exact} vs {matrix}");
    }

    #[test]
    fn streamed_route_equals_dense_assembly_route() {
        // moderate mesh: the streamed block apply must reproduce the dense
        // Nystrom apply exactly up to summation roundoff
        let spec = CombSpec::new(2, 0.08).unwrap();
        let params = MeshParams { panels_per_arc: 24, order: 12, grading_levels: 8, grading_ratio: 0.5 };
        let dense = af0_norm_sq_matrix_dense(&spec, &params).unwrap();
        let exact = af0_norm_sq_exact(&spec, 1e-10).unwrap();
        // alpha_min = 0.04, panels 1/24: resolved; agreement at quadrature level
        assert!((dense - exact).abs() < 1e-6, "{dense} vs {exact}");
    }

    #[test]
    fn ks_kernel_on_comb_geometry_matches_comb_kernel() {
        let (n, eps) = (4usize, 0.1);
        let spec = CombSpec::new(n, eps).unwrap();
        let alphas = spec.alphas();
        let one = Complex64::new(1.0, 0.0);
        for (j, k, x, y) in [(1usize, 0usize, 0.3, 0.7), (3, 2, 0.9, 0.05), (0, 4, 0.5, 0.5)] {
            let z = Complex64::new(x, alphas[j]);
            let w = Complex64::new(y, alphas[k]);
            let direct = ks_kernel(z, one, w, one);
            let closed = comb_kernel(x, j, y, k, n, eps);
            assert!((direct - Complex64::new(closed, 0.0)).norm() < 1e-14);
            assert!(direct.im.abs() < 1e-16);
        }
    }

    #[test]
    fn cauchy_norm_identity_values() {
        assert_eq!(cauchy_norm_from_ks(0.0), 1.0);
        assert!((cauchy_norm_from_ks(1.0) - 2f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn projection_gap_closed_forms() {
        // orthogonal projection: gap 0
        let mut p = CMat::zeros(3, 3);
        p[(0, 0)] = Complex64::new(1.0, 0.0);
        p[(1, 1)] = Complex64::new(1.0, 0.0);
        let (gap, predicted) = projection_gap(&p).unwrap();
        assert!(gap < 1e-14 && predicted < 1e-7);

        // 2x2 oblique [[1, t], [0, 0]]: gap = |t| = sqrt(||P||^2 - 1)
        for t in [0.3, 1.0, 4.5] {
            let mut p = CMat::zeros(2, 2);
            p[(0, 0)] = Complex64::new(1.0, 0.0);
            p[(0, 1)] = Complex64::new(t, 0.0);
            let (gap, predicted) = projection_gap(&p).unwrap();
            assert!((gap - t).abs() < 1e-12, "t={t}: {gap}");
            assert!((gap - predicted).abs() < 1e-10);
        }

        // non-idempotent input is a contract violation
        let mut q = CMat::zeros(2, 2);
        q[(0, 1)] = Complex64::new(1.0, 0.0);
        q[(1, 0)] = Complex64::new(1.0, 0.0);
        assert!(matches!(projection_gap(&q), Err(KsError::Contract(_))));
    }

    #[test]
    fn parallel_lines_reference_values() {
        assert!((parallel_lines_reference(1) - 0.5).abs() < 1e-15);
        assert!((parallel_lines_reference(2) - 1.2071067811865475).abs() < 1e-14);
        // asymptote 2n/pi
        for n in [50usize, 100, 200] {
            let ratio = parallel_lines_reference(n) / (2.0 * n as f64 / std::f64::consts::PI);
            assert!((ratio - 1.0).abs() < 1e-2, "n={n}: {ratio}");
        }
        let r50 = parallel_lines_reference(50) / (100.0 / std::f64::consts::PI);
        let r200 = parallel_lines_reference(200) / (400.0 / std::f64::consts::PI);
        assert!((r200 - 1.0).abs() < (r50 - 1.0).abs());
    }
}
