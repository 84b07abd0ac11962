//! Discrete Cauchy singular operator, the Plemelj relation, and the Szego
//! projection obtained from the Kerzman-Stein equation, on closed smooth
//! curves.
//!
//! The principal-value quadrature runs on the arclength-uniform odd-N mesh
//! of [`crate::mesh::build_uniform_closed_mesh`]. On that grid the PV
//! integral of the cotangent part of the Cauchy kernel has an exact
//! discrete form (the conjugate-function matrix of trigonometric
//! interpolation); the assembled entries are the plain kernel values plus
//! a Hermitian cotangent correction, so the projection property holds to
//! spectral accuracy while C - C* remains exactly the Kerzman-Stein
//! assembly.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{KsError, Result};
use crate::linalg::{for_each_column, CMat};
use crate::mesh::{MatrixTag, OperatorMatrix, SharedMesh};

/// Defect and norm summary of the discrete projections.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ProjectionReport {
    /// ||C^2 - C||.
    pub cauchy_defect: f64,
    /// ||S^2 - S||.
    pub szego_idempotency_defect: f64,
    /// ||S - S*||.
    pub szego_self_adjoint_defect: f64,
    /// ||C||.
    pub cauchy_norm: f64,
    /// ||A|| for A = C - C*.
    pub ks_norm: f64,
}

/// Per-node factor z''(s)/(2 z'(s)) in arclength: T'(t) / (2 T |z'|).
fn curvature_half(mesh: &SharedMesh, idx: usize) -> Result<Complex64> {
    let node = &mesh.nodes()[idx];
    let arc = &mesh.boundary().arcs()[node.arc];
    let v = arc.velocity(node.t);
    let a = arc.acceleration(node.t).ok_or_else(|| {
        KsError::Geometry("Cauchy assembly needs twice-differentiable arcs".into())
    })?;
    let speed = v.norm();
    let dspeed = (v.conj() * a).re / speed;
    let dt = a / speed - v * (dspeed / (speed * speed));
    let t = v / speed;
    Ok(dt / (t * 2.0 * speed))
}

/// Assembles the Cauchy singular operator C_0 on an arclength-uniform
/// closed mesh: off the diagonal the kernel value
/// (1/2pi i) T_j/(z_j - z_i) sqrt(w_i w_j) plus the exact PV cotangent
/// correction, on the diagonal the PV limit (1/2pi i) z''/(2z') w_i.
pub fn assemble_cauchy(mesh: &SharedMesh) -> Result<OperatorMatrix> {
    if !mesh.uniform_closed() {
        return Err(KsError::Geometry(
            "Cauchy assembly requires the arclength-uniform closed mesh \
             (open or cornered boundaries are not supported)"
                .into(),
        ));
    }
    let n = mesh.len();
    debug_assert!(n % 2 == 1);
    let nodes = mesh.nodes();
    let kappa: Vec<Complex64> = (0..n).map(|i| curvature_half(mesh, i)).collect::<Result<_>>()?;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let nf = n as f64;
    let mut mat = CMat::zeros(n, n);
    for_each_column(mat.data_mut(), n, |j, col| {
        let nj = &nodes[j];
        for (i, slot) in col.iter_mut().enumerate() {
            if i == j {
                *slot = kappa[j] * nj.weight / i2pi;
            } else {
                let ni = &nodes[i];
                let kernel = nj.tangent / (nj.z - ni.z) * (ni.weight * nj.weight).sqrt() / i2pi;
                let d = i as i64 - j as i64;
                let parity = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let correction =
                    Complex64::new(0.0, -parity / (2.0 * nf * (PI * d as f64 / nf).sin()));
                *slot = kernel + correction;
            }
        }
    });
    Ok(OperatorMatrix { tag: MatrixTag::Cauchy, mesh: mesh.clone(), mat })
}

/// The Plemelj relation: C = C_0 + (1/2) I.
pub fn plemelj(c0: &OperatorMatrix) -> OperatorMatrix {
    let mat = c0.mat.add_diag(Complex64::new(0.5, 0.0));
    OperatorMatrix { tag: MatrixTag::Cauchy, mesh: c0.mesh.clone(), mat }
}

/// The skew part A = C - C*; the identity part of the Plemelj relation
/// cancels, so this equals C_0 - C_0* exactly.
pub fn ks_from_cauchy(c: &OperatorMatrix) -> CMat {
    c.mat.sub(&c.mat.adjoint())
}

/// Szego projection through the Kerzman-Stein equation: S = C (I + A)^{-1}
/// with A = C - C*. I + A is always invertible (its singular values are at
/// least 1 since A is skew-Hermitian).
pub fn szego_from_ks(c: &OperatorMatrix) -> Result<(OperatorMatrix, ProjectionReport)> {
    let a = ks_from_cauchy(c);
    let i_plus_a = a.add_diag(Complex64::new(1.0, 0.0));
    let s = i_plus_a.solve_right(&c.mat)?;
    let report = ProjectionReport {
        cauchy_defect: c.mat.matmul(&c.mat).sub(&c.mat).spectral_norm()?,
        szego_idempotency_defect: s.matmul(&s).sub(&s).spectral_norm()?,
        szego_self_adjoint_defect: s.sub(&s.adjoint()).spectral_norm()?,
        cauchy_norm: c.mat.spectral_norm()?,
        ks_norm: a.spectral_norm()?,
    };
    Ok((OperatorMatrix { tag: MatrixTag::Szego, mesh: c.mesh.clone(), mat: s }, report))
}
