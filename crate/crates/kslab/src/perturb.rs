//! Wedge-approximation residuals on corner graphs and the C1-perturbation
//! bound for smooth graphs, verified numerically.
//!
//! Two graph families appear. The corner form phi(x) = M|x| + p(x) on a
//! symmetric interval with p(0) = p'(0) = 0 measures how fast the operator
//! of the perturbed corner approaches the exact wedge operator; the
//! residual splits into four sign-quadrant blocks, with explicit norm
//! bounds for the off-diagonal pair and a four-kernel decomposition behind
//! them. The smooth form z = x + i p(x) with ||p'|| < 1 feeds the
//! Lipschitz-type bound ||A_1 - A_2|| <= C ||(p_1 - p_2)'||.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{KsError, Result};
use crate::geometry::{Arc, Boundary, Corner};
use crate::linalg::CMat;
use crate::mesh::{assemble_graph_ks, MeshParams};

type RealFn = std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Samples used when measuring sup-norms of derivative profiles.
const SUP_GRID: usize = 8192;

/// A curve given as a graph x + i(M|x| + p(x)) with analytically supplied
/// derivative; no numerical differentiation happens anywhere.
#[derive(Clone)]
pub struct GraphCurve {
    interval: (f64, f64),
    slope: f64,
    p: RealFn,
    dp: RealFn,
}

impl std::fmt::Debug for GraphCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GraphCurve {{ interval: {:?}, slope: {}, .. }}", self.interval, self.slope)
    }
}

impl GraphCurve {
    /// Corner form on [-a, +a]: phi = M|x| + p(x), M != 0, p(0) = p'(0) = 0.
    pub fn corner_form(a: f64, m: f64, p: RealFn, dp: RealFn) -> Result<Self> {
        if !(a > 0.0) {
            return Err(KsError::Domain("corner graph needs a > 0".into()));
        }
        if m == 0.0 {
            return Err(KsError::Domain("corner form requires M != 0".into()));
        }
        if p(0.0).abs() > 1e-12 || dp(0.0).abs() > 1e-12 {
            return Err(KsError::Input("corner form requires p(0) = p'(0) = 0".into()));
        }
        Ok(Self { interval: (-a, a), slope: m, p, dp })
    }

    /// Smooth form on [l, r]: phi = p(x) with ||p'||_inf < 1.
    pub fn smooth_form(interval: (f64, f64), p: RealFn, dp: RealFn) -> Result<Self> {
        if !(interval.0 < interval.1) {
            return Err(KsError::Domain("graph interval must be nonempty".into()));
        }
        let probe = Self { interval, slope: 0.0, p, dp };
        let sup = probe.sup_dp();
        if sup >= 1.0 {
            return Err(KsError::Domain(format!("smooth form requires ||p'|| < 1, got {sup}")));
        }
        Ok(probe)
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn phi(&self, x: f64) -> f64 {
        self.slope * x.abs() + (self.p)(x)
    }

    pub fn dphi(&self, x: f64) -> f64 {
        let s = if x >= 0.0 { self.slope } else { -self.slope };
        s + (self.dp)(x)
    }

    pub fn p_at(&self, x: f64) -> f64 {
        (self.p)(x)
    }

    pub fn dp_at(&self, x: f64) -> f64 {
        (self.dp)(x)
    }

    /// sup |p'| over a dense uniform grid (endpoints included).
    pub fn sup_dp(&self) -> f64 {
        let (l, r) = self.interval;
        (0..=SUP_GRID)
            .map(|k| l + (r - l) * (k as f64 / SUP_GRID as f64))
            .map(|x| (self.dp)(x).abs())
            .fold(0.0, f64::max)
    }

    /// Same curve with the smooth part dropped (the exact corner M|x|).
    pub fn without_p(&self) -> Self {
        Self {
            interval: self.interval,
            slope: self.slope,
            p: std::sync::Arc::new(|_| 0.0),
            dp: std::sync::Arc::new(|_| 0.0),
        }
    }

    /// Boundary of the lifted curve; the corner (if any) splits the
    /// interval so that each arc is C1 and anchored at the vertex.
    pub fn to_boundary(&self) -> Result<Boundary> {
        let (l, r) = self.interval;
        let m = self.slope;
        if m == 0.0 {
            let arc = Arc::graph((l, r), 0.0, self.p.clone(), self.dp.clone())?;
            return Boundary::new(vec![arc], Vec::new(), false);
        }
        if !(l < 0.0 && r > 0.0) {
            return Err(KsError::Domain("corner graph interval must straddle 0".into()));
        }
        let left = Arc::graph((l, 0.0), -m, self.p.clone(), self.dp.clone())?;
        let right = Arc::graph((0.0, r), m, self.p.clone(), self.dp.clone())?;
        let t_in = left.end_tangent();
        let t_out = right.start_tangent();
        let theta = Corner::half_angle_from_tangents(t_in, t_out);
        let corner = Corner::new(Complex64::new(0.0, 0.0), theta, t_in, t_out)?;
        Boundary::new(vec![left, right], vec![corner], false)
    }
}

/// The closed-form bound shared by the two mixed-quadrant residual blocks:
/// ||p'|| * 3 * (1 + (|M| + ||p'||)^2)^{1/2}.
pub fn residual_bound(m: f64, p_sup: f64) -> f64 {
    p_sup * 3.0 * (1.0 + (m.abs() + p_sup) * (m.abs() + p_sup)).sqrt()
}

/// Bounds for the four kernels of the mixed-block decomposition:
/// K1, K3 <= 2 (1 + (|M| + ||p'||)^2)^{1/4} ||p'|| pi and
/// K2, K4 <= (1 + M^2)^{1/2} ||p'|| pi.
pub fn k_bounds(m: f64, p_sup: f64) -> [f64; 4] {
    let outer = 2.0 * (1.0 + (m.abs() + p_sup) * (m.abs() + p_sup)).powf(0.25) * p_sup * PI;
    let inner = (1.0 + m * m).sqrt() * p_sup * PI;
    [outer, inner, outer, inner]
}

/// Numeric norms of the quadrant blocks of A_{M,p} - A_{M,0} together with
/// the analytic bounds and diagnostics.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub m: f64,
    /// Measured sup |p'|.
    pub p_sup: f64,
    /// Spectral norms of E--, E-+, E+-, E++.
    pub block_norms: [f64; 4],
    /// Analytic ceilings where they exist (mixed blocks only).
    pub block_bounds: [Option<f64>; 4],
    /// Spectral norms of the four kernels K1..K4 behind the -+ block.
    pub k_norms: [f64; 4],
    pub k_bounds: [f64; 4],
    /// Max-norm error of 2 pi i E-+ = K1 + K2 - K3 - K4 on the mesh.
    pub reconstruction_error: f64,
    /// Max-norm of E+- + (E-+)^H.
    pub adjoint_defect: f64,
    /// sigma_51 / sigma_1 for E--, E++ and the whole residual: the
    /// computable surrogate of their compactness.
    pub decay_ratios: [f64; 3],
    /// Every bounded block sits below its ceiling.
    pub pass: bool,
}

fn sigma_ratio(block: &CMat) -> Result<f64> {
    let sv = block.singular_values()?;
    if sv.is_empty() || sv[0] == 0.0 {
        return Ok(0.0);
    }
    Ok(sv.get(50).copied().unwrap_or(0.0) / sv[0])
}

/// Assembles A_{M,p} and A_{M,0} on one mesh, splits their difference into
/// the four sign-quadrant blocks and verifies the kernel decomposition of
/// the -+ block.
pub fn residual_blocks(curve: &GraphCurve, params: &MeshParams) -> Result<ResidualReport> {
    if curve.slope == 0.0 {
        return Err(KsError::Input("residual_blocks expects the corner form (M != 0)".into()));
    }
    let m = curve.slope;
    let p_sup = curve.sup_dp();
    let a_mp = assemble_graph_ks(curve, params)?;
    let a_m0 = assemble_graph_ks(&curve.without_p(), params)?;
    let diff = a_mp.mat.sub(&a_m0.mat);
    let mesh = a_mp.mesh.clone();
    let neg: Vec<usize> =
        mesh.nodes().iter().enumerate().filter(|(_, n)| n.t < 0.0).map(|(i, _)| i).collect();
    let pos: Vec<usize> =
        mesh.nodes().iter().enumerate().filter(|(_, n)| n.t > 0.0).map(|(i, _)| i).collect();
    if neg.len() + pos.len() != mesh.len() {
        return Err(KsError::Numeric("mesh node landed exactly on the corner".into()));
    }
    let sub = |rows: &[usize], cols: &[usize]| {
        CMat::from_fn(rows.len(), cols.len(), |r, c| diff[(rows[r], cols[c])])
    };
    let e_mm = sub(&neg, &neg);
    let e_mp = sub(&neg, &pos);
    let e_pm = sub(&pos, &neg);
    let e_pp = sub(&pos, &pos);

    // kernel decomposition of the -+ block
    let phi = |x: f64| curve.phi(x);
    let dphi = |x: f64| curve.dphi(x);
    let h = |x: f64| (1.0 + dphi(x) * dphi(x)).sqrt();
    let nodes = mesh.nodes();
    let kmat = |kernel: &dyn Fn(f64, f64) -> Complex64| {
        CMat::from_fn(neg.len(), pos.len(), |r, c| {
            let (ni, nj) = (&nodes[neg[r]], &nodes[pos[c]]);
            kernel(ni.t, nj.t) * (ni.param_weight * nj.param_weight).sqrt()
        })
    };
    let im = Complex64::new(0.0, 1.0);
    let k1 = kmat(&|x, y| {
        let d = Complex64::new(y - x, phi(y) - phi(x));
        ((h(x) / h(y)).sqrt() * Complex64::new(1.0, dphi(y)) - Complex64::new(1.0, m)) / d
    });
    let k2 = kmat(&|x, y| {
        let d = Complex64::new(y - x, phi(y) - phi(x));
        let d0 = Complex64::new(y - x, m * (y + x));
        Complex64::new(1.0, m) * (1.0 / d - 1.0 / d0)
    });
    let k3 = kmat(&|x, y| {
        let d = Complex64::new(y - x, phi(y) - phi(x));
        ((h(y) / h(x)).sqrt() * Complex64::new(1.0, -dphi(x)) - Complex64::new(1.0, m)) / d.conj()
    });
    let k4 = kmat(&|x, y| {
        let d = Complex64::new(y - x, phi(y) - phi(x));
        let d0 = Complex64::new(y - x, m * (y + x));
        Complex64::new(1.0, m) * (1.0 / d.conj() - 1.0 / d0.conj())
    });
    let recombined = k1.add(&k2).sub(&k3).sub(&k4).scale(1.0 / (2.0 * PI * im));
    let reconstruction_error = recombined.sub(&e_mp).norm_max();
    let adjoint_defect = e_pm.add(&e_mp.adjoint()).norm_max();

    let block_norms = [
        e_mm.spectral_norm()?,
        e_mp.spectral_norm()?,
        e_pm.spectral_norm()?,
        e_pp.spectral_norm()?,
    ];
    let bound = residual_bound(m, p_sup);
    let block_bounds = [None, Some(bound), Some(bound), None];
    let k_norms = [
        k1.spectral_norm()?,
        k2.spectral_norm()?,
        k3.spectral_norm()?,
        k4.spectral_norm()?,
    ];
    let kb = k_bounds(m, p_sup);
    let decay_ratios = [sigma_ratio(&e_mm)?, sigma_ratio(&e_pp)?, sigma_ratio(&diff)?];
    let pass = block_norms[1] <= bound
        && block_norms[2] <= bound
        && k_norms.iter().zip(kb.iter()).all(|(n, b)| n <= b);
    Ok(ResidualReport {
        m,
        p_sup,
        block_norms,
        block_bounds,
        k_norms,
        k_bounds: kb,
        reconstruction_error,
        adjoint_defect,
        decay_ratios,
        pass,
    })
}

/// Result of the two-curve perturbation comparison.
#[derive(Clone, Copy, Debug)]
pub struct PerturbationRatio {
    pub norm_diff: f64,
    pub sup_deriv_diff: f64,
    pub ratio: f64,
}

/// ||A_1 - A_2|| on a common mesh against ||(p_1 - p_2)'||_inf for two
/// smooth-form graphs over the same interval.
pub fn perturbation_ratio(
    p1: &GraphCurve,
    p2: &GraphCurve,
    params: &MeshParams,
) -> Result<PerturbationRatio> {
    if p1.slope != 0.0 || p2.slope != 0.0 {
        return Err(KsError::Input("perturbation_ratio expects smooth-form curves".into()));
    }
    if p1.interval != p2.interval {
        return Err(KsError::Input("curves must share the graph interval".into()));
    }
    let a1 = assemble_graph_ks(p1, params)?;
    let a2 = assemble_graph_ks(p2, params)?;
    let norm_diff = a1.mat.sub(&a2.mat).spectral_norm()?;
    let (l, r) = p1.interval;
    let sup_deriv_diff = (0..=SUP_GRID)
        .map(|k| l + (r - l) * (k as f64 / SUP_GRID as f64))
        .map(|x| (p1.dp_at(x) - p2.dp_at(x)).abs())
        .fold(0.0, f64::max);
    if sup_deriv_diff == 0.0 {
        if norm_diff > 1e-12 {
            return Err(KsError::Contract(format!(
                "identical derivative profiles but ||A1 - A2|| = {norm_diff}"
            )));
        }
        return Ok(PerturbationRatio { norm_diff, sup_deriv_diff, ratio: 0.0 });
    }
    Ok(PerturbationRatio { norm_diff, sup_deriv_diff, ratio: norm_diff / sup_deriv_diff })
}

/// Six-kernel decomposition check for the smooth-form difference.
#[derive(Clone, Debug)]
pub struct EDecomposition {
    /// Max-norm of 2 pi i (A_1 - A_2) - sum E_k over the mesh.
    pub reconstruction_error: f64,
    /// Spectral norms of the six terms.
    pub term_norms: [f64; 6],
}

/// Assembles E_1, E_2, E_3 from their displayed formulas, obtains E_4..E_6
/// by the conjugate-swap relations, and verifies they rebuild A_1 - A_2.
pub fn e_decomposition_check(
    p1: &GraphCurve,
    p2: &GraphCurve,
    params: &MeshParams,
) -> Result<EDecomposition> {
    if p1.slope != 0.0 || p2.slope != 0.0 {
        return Err(KsError::Input("e_decomposition_check expects smooth-form curves".into()));
    }
    if p1.interval != p2.interval {
        return Err(KsError::Input("curves must share the graph interval".into()));
    }
    let a1 = assemble_graph_ks(p1, params)?;
    let a2 = assemble_graph_ks(p2, params)?;
    let diff = a1.mat.sub(&a2.mat);
    let mesh = a1.mesh.clone();
    let nodes = mesh.nodes();
    let n = nodes.len();

    let h1 = |x: f64| (1.0 + p1.dp_at(x) * p1.dp_at(x)).sqrt();
    let h2 = |x: f64| (1.0 + p2.dp_at(x) * p2.dp_at(x)).sqrt();
    let one = Complex64::new(1.0, 0.0);
    let q = |p: &GraphCurve, x: f64, y: f64| (p.p_at(y) - p.p_at(x)) / (y - x);

    let e1 = |x: f64, y: f64| {
        h1(x).sqrt() * (Complex64::new(1.0, p1.dp_at(y)) / h1(y).sqrt())
            * (1.0 / (y - x))
            * (one / Complex64::new(1.0, q(p1, x, y)) - one / Complex64::new(1.0, q(p2, x, y)))
    };
    let e2 = |x: f64, y: f64| {
        h1(x).sqrt()
            * (Complex64::new(1.0, p1.dp_at(y)) / h1(y).sqrt()
                - Complex64::new(1.0, p2.dp_at(y)) / h2(y).sqrt())
            * (1.0 / (y - x))
            * (one / Complex64::new(1.0, q(p2, x, y)))
    };
    let e3 = |x: f64, y: f64| {
        Complex64::new(h1(x).sqrt() - h2(x).sqrt(), 0.0)
            * (Complex64::new(1.0, p2.dp_at(y)) / h2(y).sqrt())
            * (1.0 / (y - x))
            * (one / Complex64::new(1.0, q(p2, x, y)))
    };

    let weighted = |f: &dyn Fn(f64, f64) -> Complex64| {
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(0.0, 0.0)
            } else {
                f(nodes[i].t, nodes[j].t) * (nodes[i].param_weight * nodes[j].param_weight).sqrt()
            }
        })
    };
    let m1 = weighted(&e1);
    let m2 = weighted(&e2);
    let m3 = weighted(&e3);
    // E4(x,y) = conj(E1(y,x)) and so on: entrywise conjugate transposes
    let m4 = CMat::from_fn(n, n, |i, j| m1[(j, i)].conj());
    let m5 = CMat::from_fn(n, n, |i, j| m2[(j, i)].conj());
    let m6 = CMat::from_fn(n, n, |i, j| m3[(j, i)].conj());

    let total = m1.add(&m2).add(&m3).add(&m4).add(&m5).add(&m6);
    let target = diff.scale(Complex64::new(0.0, 2.0 * PI));
    let reconstruction_error = total.sub(&target).norm_max();
    let term_norms = [
        m1.spectral_norm()?,
        m2.spectral_norm()?,
        m3.spectral_norm()?,
        m4.spectral_norm()?,
        m5.spectral_norm()?,
        m6.spectral_norm()?,
    ];
    Ok(EDecomposition { reconstruction_error, term_norms })
}

/// Which smooth profile a battery case uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Quadratic,
    Sinusoid,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Quadratic => "quadratic",
            Profile::Sinusoid => "sinusoid",
        }
    }

    /// Corner-form perturbation with the requested sup |p'| on [-1, 1];
    /// both profiles satisfy p(0) = p'(0) = 0.
    pub fn curve(self, m: f64, p_sup: f64) -> Result<GraphCurve> {
        match self {
            Profile::Quadratic => {
                let c = p_sup / 2.0;
                GraphCurve::corner_form(
                    1.0,
                    m,
                    std::sync::Arc::new(move |x| c * x * x),
                    std::sync::Arc::new(move |x| 2.0 * c * x),
                )
            }
            Profile::Sinusoid => {
                let c = p_sup / 1f64.sin();
                GraphCurve::corner_form(
                    1.0,
                    m,
                    std::sync::Arc::new(move |x| c * (1.0 - x.cos())),
                    std::sync::Arc::new(move |x| c * x.sin()),
                )
            }
        }
    }
}

/// One case of the verification battery.
#[derive(Clone, Copy, Debug)]
pub struct BatteryCase {
    pub m: f64,
    pub p_sup: f64,
}

/// The default 12-case battery: M in {1/4, 1/2, 1, 2} crossed with
/// sup |p'| in {0.02, 0.1, 0.3}. Each case is run for both profiles.
pub fn default_battery() -> Vec<BatteryCase> {
    let mut cases = Vec::new();
    for m in [0.25, 0.5, 1.0, 2.0] {
        for p_sup in [0.02, 0.1, 0.3] {
            cases.push(BatteryCase { m, p_sup });
        }
    }
    cases
}

/// Battery row: one (case, profile) report.
#[derive(Clone, Debug)]
pub struct BatteryRow {
    pub case: BatteryCase,
    pub profile: Profile,
    pub report: ResidualReport,
}

/// Runs the battery with both profiles per case.
pub fn run_battery(cases: &[BatteryCase], params: &MeshParams) -> Result<Vec<BatteryRow>> {
    let mut rows = Vec::with_capacity(cases.len() * 2);
    for case in cases {
        for profile in [Profile::Quadratic, Profile::Sinusoid] {
            let curve = profile.curve(case.m, case.p_sup)?;
            let report = residual_blocks(&curve, params)?;
            rows.push(BatteryRow { case: *case, profile, report });
        }
    }
    Ok(rows)
}

/// CSV emission for battery results: M, p_id, p_sup, block, numeric, bound, pass.
pub fn write_battery_csv<W: std::io::Write>(rows: &[BatteryRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "m,p_id,p_sup,block,numeric_norm,bound,pass")?;
    for row in rows {
        let r = &row.report;
        let blocks: [(&str, f64, f64); 6] = [
            ("E-+", r.block_norms[1], r.block_bounds[1].unwrap_or(f64::NAN)),
            ("E+-", r.block_norms[2], r.block_bounds[2].unwrap_or(f64::NAN)),
            ("K1", r.k_norms[0], r.k_bounds[0]),
            ("K2", r.k_norms[1], r.k_bounds[1]),
            ("K3", r.k_norms[2], r.k_bounds[2]),
            ("K4", r.k_norms[3], r.k_bounds[3]),
        ];
        for (name, numeric, bound) in blocks {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.case.m,
                row.profile.name(),
                row.case.p_sup,
                name,
                numeric,
                bound,
                numeric <= bound
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc as Shared;

    fn zero_fn() -> RealFn {
        Shared::new(|_| 0.0)
    }

    fn battery_params() -> MeshParams {
        MeshParams { panels_per_arc: 4, order: 8, grading_levels: 14, grading_ratio: 0.5 }
    }

    #[test]
    fn residual_bound_values() {
        assert_eq!(residual_bound(1.0, 0.0), 0.0);
        assert!((residual_bound(1.0, 0.1) - 0.44598206241955516).abs() < 1e-15);
        assert!((residual_bound(0.5, 0.2) - 0.73239333694402217).abs() < 1e-15);
    }

    #[test]
    fn k_bound_values() {
        let kb = k_bounds(1.0, 0.1);
        assert!((kb[0] - 0.76608672494811367).abs() < 1e-14);
        assert!((kb[1] - 0.44428829381583662).abs() < 1e-14);
        assert_eq!(kb[0], kb[2]);
        assert_eq!(kb[1], kb[3]);
        assert_eq!(k_bounds(2.0, 0.0), [0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_perturbation_gives_zero_blocks() {
        let curve = GraphCurve::corner_form(1.0, 1.0, zero_fn(), zero_fn()).unwrap();
        let report = residual_blocks(&curve, &battery_params()).unwrap();
        for n in report.block_norms {
            assert!(n < 1e-15, "{n}");
        }
        assert!(report.pass);
    }

    #[test]
    fn quadratic_case_respects_bounds() {
        let curve = Profile::Quadratic.curve(1.0, 0.1).unwrap();
        let report = residual_blocks(&curve, &battery_params()).unwrap();
        assert!((report.p_sup - 0.1).abs() < 1e-12);
        assert!(report.block_norms[1] <= residual_bound(1.0, 0.1));
        assert!(report.reconstruction_error <= 1e-12);
        assert!(report.adjoint_defect <= 1e-13);
        assert!(report.pass);
    }

    #[test]
    fn smooth_form_rejects_steep_profiles() {
        let p: RealFn = Shared::new(|x: f64| 2.0 * x);
        let dp: RealFn = Shared::new(|_| 2.0);
        assert!(GraphCurve::smooth_form((-1.0, 1.0), p, dp).is_err());
    }

    #[test]
    fn corner_form_requires_flat_origin() {
        let p: RealFn = Shared::new(|x: f64| x);
        let dp: RealFn = Shared::new(|_| 1.0);
        assert!(GraphCurve::corner_form(1.0, 1.0, p, dp).is_err());
    }

    #[test]
    fn identical_curves_have_zero_ratio() {
        let p: RealFn = Shared::new(|x: f64| 0.05 * (std::f64::consts::PI * x).sin());
        let dp: RealFn =
            Shared::new(|x: f64| 0.05 * std::f64::consts::PI * (std::f64::consts::PI * x).cos());
        let c1 = GraphCurve::smooth_form((-1.0, 1.0), p.clone(), dp.clone()).unwrap();
        let c2 = GraphCurve::smooth_form((-1.0, 1.0), p, dp).unwrap();
        let out = perturbation_ratio(&c1, &c2, &battery_params()).unwrap();
        assert_eq!(out.ratio, 0.0);
        assert_eq!(out.sup_deriv_diff, 0.0);
    }

    #[test]
    fn e_terms_vanish_for_equal_profiles() {
        let p: RealFn = Shared::new(|x: f64| 0.1 * x * x);
        let dp: RealFn = Shared::new(|x: f64| 0.2 * x);
        let c1 = GraphCurve::smooth_form((-1.0, 1.0), p.clone(), dp.clone()).unwrap();
        let c2 = GraphCurve::smooth_form((-1.0, 1.0), p, dp).unwrap();
        let out = e_decomposition_check(&c1, &c2, &battery_params()).unwrap();
        assert!(out.reconstruction_error < 1e-15);
        for t in out.term_norms {
            assert!(t < 1e-15);
        }
    }

    #[test]
    fn e_decomposition_rebuilds_difference() {
        let p1: RealFn = Shared::new(|x: f64| 0.1 * x * x);
        let dp1: RealFn = Shared::new(|x: f64| 0.2 * x);
        let p2: RealFn = Shared::new(|x: f64| 0.1 * x * x + 0.01 * x * x * x);
        let dp2: RealFn = Shared::new(|x: f64| 0.2 * x + 0.03 * x * x);
        let c1 = GraphCurve::smooth_form((-1.0, 1.0), p1, dp1).unwrap();
        let c2 = GraphCurve::smooth_form((-1.0, 1.0), p2, dp2).unwrap();
        let out = e_decomposition_check(&c1, &c2, &battery_params()).unwrap();
        assert!(out.reconstruction_error <= 1e-12, "{}", out.reconstruction_error);
        // sup |(p1 - p2)'| = 0.03 on [-1, 1]
        let ratio = perturbation_ratio(&c1, &c2, &battery_params()).unwrap();
        assert!((ratio.sup_deriv_diff - 0.03).abs() < 1e-12);
        assert!(ratio.ratio.is_finite() && ratio.ratio > 0.0);
    }

    #[test]
    fn preliminary_scalar_inequalities_hold_on_grid() {
        // |(1+ia)/(1+a^2)^{1/4} - (1+ib)/(1+b^2)^{1/4}| <= sqrt(2) |a-b|
        // and |(1+a^2)^{1/4} - (1+b^2)^{1/4}| <= |a-b| on [-1, 1]^2
        let g = 1000usize;
        for i in 0..=g {
            let a = -1.0 + 2.0 * i as f64 / g as f64;
            let fa = Complex64::new(1.0, a) / (1.0 + a * a).powf(0.25);
            let ra = (1.0 + a * a).powf(0.25);
            for j in 0..=g {
                let b = -1.0 + 2.0 * j as f64 / g as f64;
                let fb = Complex64::new(1.0, b) / (1.0 + b * b).powf(0.25);
                let rb = (1.0 + b * b).powf(0.25);
                let d = (a - b).abs();
                assert!((fa - fb).norm() <= 2f64.sqrt() * d + 1e-14);
                assert!((ra - rb).abs() <= d + 1e-14);
            }
        }
    }
}
