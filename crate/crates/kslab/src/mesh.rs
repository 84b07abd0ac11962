//! Quadrature meshes on boundaries and Nystrom assembly of the
//! Kerzman-Stein operator as an exactly skew-Hermitian matrix.
//!
//! Two mesh flavors exist. Graded panel meshes (Gauss-Legendre panels,
//! dyadically refined into corners and open endpoints) drive the spectral
//! experiments on cornered and open geometry. Uniform-in-arclength meshes
//! with an odd node count serve the Cauchy/Szego module, whose principal
//! value quadrature needs the equispaced grid.

use num_complex::Complex64;
use std::sync::Arc as Shared;

use crate::error::{KsError, Result};
use crate::geometry::{Arc, Boundary};
use crate::kernels::{graph_kernel, ks_kernel};
use crate::linalg::{for_each_column, for_each_column_sequential, CMat};
use crate::perturb::GraphCurve;
use crate::quadrature::{gauss_legendre, integrate_gl};

/// Node cap; override with the KS_MAX_NODES environment variable.
pub const DEFAULT_MAX_NODES: usize = 20_000;

pub fn max_nodes() -> usize {
    std::env::var("KS_MAX_NODES")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(DEFAULT_MAX_NODES)
}

/// Graded-mesh construction parameters.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct MeshParams {
    pub panels_per_arc: usize,
    pub order: usize,
    pub grading_levels: usize,
    pub grading_ratio: f64,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self { panels_per_arc: 8, order: 12, grading_levels: 16, grading_ratio: 0.5 }
    }
}

/// One quadrature node.
#[derive(Clone, Copy, Debug)]
pub struct MeshNode {
    /// Parameter value on its arc.
    pub t: f64,
    pub z: Complex64,
    /// Unit tangent of the traversed path.
    pub tangent: Complex64,
    /// Arc-length weight |z'(t)| times the parameter weight.
    pub weight: f64,
    /// Bare parameter-space quadrature weight.
    pub param_weight: f64,
    /// Index of the owning arc in the boundary.
    pub arc: usize,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    nodes: Vec<MeshNode>,
    boundary: Boundary,
    /// Set for arclength-uniform closed meshes (odd N), required by the
    /// Cauchy assembler.
    uniform_closed: bool,
}

pub type SharedMesh = Shared<Mesh>;

impl Mesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[MeshNode] {
        &self.nodes
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn uniform_closed(&self) -> bool {
        self.uniform_closed
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// CSV dump: t, re z, im z, re T, im T, w.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "t,re_z,im_z,re_t,im_t,w")?;
        for n in &self.nodes {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                n.t, n.z.re, n.z.im, n.tangent.re, n.tangent.im, n.weight
            )?;
        }
        Ok(())
    }
}

/// Smallest admissible panel width when grading toward parameter value
/// `anchor`: Gauss nodes inside a panel narrower than a few dozen ulps of
/// the anchor collapse onto identical floats.
fn panel_width_floor(anchor: f64, order: usize) -> f64 {
    if anchor == 0.0 {
        1e-280
    } else {
        anchor.abs() * f64::EPSILON * 32.0 * order as f64
    }
}

/// Panel breakpoints on [t0, t1] with dyadic refinement toward whichever
/// endpoints are flagged singular.
fn panel_breakpoints(
    t0: f64,
    t1: f64,
    params: &MeshParams,
    singular_at_t0: bool,
    singular_at_t1: bool,
) -> Vec<f64> {
    let mut base = params.panels_per_arc;
    if base == 1 && singular_at_t0 && singular_at_t1 {
        base = 2; // give each endpoint its own panel to refine
    }
    let mut pts: Vec<f64> = (0..=base)
        .map(|k| t0 + (t1 - t0) * (k as f64 / base as f64))
        .collect();
    let ratio = params.grading_ratio;
    if singular_at_t0 {
        let h = pts[1] - pts[0];
        let floor = panel_width_floor(t0, params.order);
        let mut cuts: Vec<f64> = (1..=params.grading_levels)
            .map(|l| h * ratio.powi(l as i32))
            .filter(|d| *d >= floor)
            .map(|d| t0 + d)
            .collect();
        cuts.reverse();
        let mut merged = vec![pts[0]];
        merged.extend(cuts);
        merged.extend_from_slice(&pts[1..]);
        pts = merged;
    }
    if singular_at_t1 {
        let m = pts.len();
        let h = pts[m - 1] - pts[m - 2];
        let floor = panel_width_floor(t1, params.order);
        let cuts: Vec<f64> = (1..=params.grading_levels)
            .map(|l| h * ratio.powi(l as i32))
            .filter(|d| *d >= floor)
            .map(|d| t1 - d)
            .collect();
        let mut merged = pts[..m - 1].to_vec();
        merged.extend(cuts.into_iter().rev());
        merged.push(t1);
        pts = merged;
    }
    pts.dedup();
    pts
}

/// Gauss-Legendre panel mesh with corner/endpoint grading.
pub fn build_mesh(boundary: &Boundary, params: &MeshParams) -> Result<SharedMesh> {
    if params.order < 2 || params.order > 32 {
        return Err(KsError::Input(format!("quadrature order {} outside [2, 32]", params.order)));
    }
    if !(params.grading_ratio > 0.0 && params.grading_ratio < 1.0) {
        return Err(KsError::Input("grading ratio must lie in (0, 1)".into()));
    }
    if params.panels_per_arc == 0 {
        return Err(KsError::Input("panels_per_arc must be positive".into()));
    }
    if params.grading_levels > 200 {
        return Err(KsError::Input("grading_levels > 200 is meaningless in f64".into()));
    }
    let (gx, gw) = gauss_legendre(params.order);
    let mut nodes = Vec::new();
    for (k, arc) in boundary.arcs().iter().enumerate() {
        let (t0, t1) = arc.interval();
        // map parameter endpoints to path endpoints to classify them
        let (path_at_t0, path_at_t1) = if arc.reversed() { (false, true) } else { (true, false) };
        let singular = |at_start: bool| {
            boundary.is_corner_end(k, at_start) || boundary.is_open_end(k, at_start)
        };
        let singular_t0 = singular(path_at_t0);
        let singular_t1 = singular(path_at_t1);
        let pts = panel_breakpoints(t0, t1, params, singular_t0, singular_t1);
        for pair in pts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            for q in 0..params.order {
                let t = mid + half * gx[q];
                let speed = arc.velocity(t).norm();
                let pw = half * gw[q];
                nodes.push(MeshNode {
                    t,
                    z: arc.point(t),
                    tangent: arc.tangent(t),
                    weight: speed * pw,
                    param_weight: pw,
                    arc: k,
                });
            }
        }
    }
    let cap = max_nodes();
    if nodes.len() > cap {
        return Err(KsError::Resource(format!(
            "mesh would have {} nodes, above the cap of {cap} (KS_MAX_NODES)",
            nodes.len()
        )));
    }
    Ok(Shared::new(Mesh { nodes, boundary: boundary.clone(), uniform_closed: false }))
}

/// Arclength-uniform mesh with an odd number of nodes on a closed smooth
/// boundary; the node count is rounded up to odd. Used by the Cauchy and
/// Szego assemblers, whose principal-value rule is exact on the equispaced
/// grid only when no Nyquist mode exists.
pub fn build_uniform_closed_mesh(boundary: &Boundary, n: usize) -> Result<SharedMesh> {
    if !boundary.closed() {
        return Err(KsError::Geometry("uniform mesh requires a closed boundary".into()));
    }
    if !boundary.corners().is_empty() {
        return Err(KsError::Geometry("uniform mesh requires a smooth (corner-free) boundary".into()));
    }
    if n < 16 {
        return Err(KsError::Input("uniform mesh needs at least 16 nodes".into()));
    }
    let n = if n % 2 == 0 { n + 1 } else { n };
    if n > max_nodes() {
        return Err(KsError::Resource(format!("{n} nodes above the cap (KS_MAX_NODES)")));
    }
    let arcs = boundary.arcs();
    if arcs.iter().any(|a| a.reversed()) {
        return Err(KsError::Geometry("uniform mesh expects forward-parametrized arcs".into()));
    }
    let lengths: Vec<f64> = arcs.iter().map(Arc::length).collect();
    let total: f64 = lengths.iter().sum();
    let w = total / n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut cum = 0.0;
    let mut arc_idx = 0usize;
    for i in 0..n {
        let target = total * (i as f64 / n as f64);
        while arc_idx + 1 < arcs.len() && target >= cum + lengths[arc_idx] {
            cum += lengths[arc_idx];
            arc_idx += 1;
        }
        let arc = &arcs[arc_idx];
        let t = invert_arclength(arc, target - cum, lengths[arc_idx])?;
        nodes.push(MeshNode {
            t,
            z: arc.point(t),
            tangent: arc.tangent(t),
            weight: w,
            param_weight: w / arc.velocity(t).norm(),
            arc: arc_idx,
        });
    }
    Ok(Shared::new(Mesh { nodes, boundary: boundary.clone(), uniform_closed: true }))
}

/// Newton inversion of the local arclength function s(t) on one arc.
fn invert_arclength(arc: &Arc, target: f64, arc_len: f64) -> Result<f64> {
    let (t0, t1) = arc.interval();
    let speed = |t: f64| arc.velocity(t).norm();
    let arclen_to = |t: f64| -> f64 {
        if t <= t0 {
            return 0.0;
        }
        let panels = 48usize;
        let h = (t - t0) / panels as f64;
        (0..panels)
            .map(|k| integrate_gl(&speed, t0 + k as f64 * h, t0 + (k + 1) as f64 * h, 12))
            .sum()
    };
    let mut t = t0 + (t1 - t0) * (target / arc_len).clamp(0.0, 1.0);
    for _ in 0..60 {
        let g = arclen_to(t) - target;
        let dt = g / speed(t);
        t = (t - dt).clamp(t0, t1);
        if dt.abs() <= 1e-15 * (t1 - t0).abs() {
            return Ok(t);
        }
    }
    Err(KsError::Numeric("arclength inversion did not converge".into()))
}

/// What a dense operator matrix discretizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixTag {
    Ks,
    Cauchy,
    Szego,
    Generic,
}

/// Dense operator matrix bound to its mesh. Kerzman-Stein-tagged matrices
/// are exactly skew-Hermitian by construction: the strict upper triangle
/// is computed once and mirrored with negated conjugates, the diagonal is
/// the arclength limit 0.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub tag: MatrixTag,
    pub mesh: SharedMesh,
    pub mat: CMat,
}

impl OperatorMatrix {
    pub fn n(&self) -> usize {
        self.mat.n_rows()
    }

    /// CSV dump: i, j, re, im.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "i,j,re,im")?;
        let n = self.n();
        for j in 0..n {
            for i in 0..n {
                let v = self.mat[(i, j)];
                writeln!(out, "{i},{j},{},{}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

fn check_distinct_nodes(mesh: &Mesh) -> Result<()> {
    let mut keyed: Vec<(u64, u64, usize)> = mesh
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.z.re.to_bits(), n.z.im.to_bits(), i))
        .collect();
    keyed.sort_unstable();
    for w in keyed.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(KsError::Numeric(format!(
                "coincident mesh nodes {} and {}; refine less or re-anchor the arc",
                w[0].2, w[1].2
            )));
        }
    }
    Ok(())
}

fn assemble_skew<F>(mesh: &SharedMesh, tag: MatrixTag, entry: F, sequential: bool) -> OperatorMatrix
where
    F: Fn(&MeshNode, &MeshNode) -> Complex64 + Sync,
{
    let n = mesh.len();
    let nodes = mesh.nodes();
    let mut mat = CMat::zeros(n, n);
    let fill = |j: usize, col: &mut [Complex64]| {
        let nj = &nodes[j];
        for (i, slot) in col.iter_mut().enumerate().take(j) {
            *slot = entry(&nodes[i], nj);
        }
    };
    if sequential {
        for_each_column_sequential(mat.data_mut(), n, fill);
    } else {
        for_each_column(mat.data_mut(), n, fill);
    }
    // mirror the strict upper triangle; diagonal stays exactly zero
    for j in 0..n {
        for i in 0..j {
            mat[(j, i)] = -mat[(i, j)].conj();
        }
    }
    OperatorMatrix { tag, mesh: mesh.clone(), mat }
}

/// Nystrom matrix of the Kerzman-Stein operator:
/// entries A(z_i, z_j) sqrt(w_i w_j) off the diagonal, zero on it.
pub fn assemble_ks(mesh: &SharedMesh) -> Result<OperatorMatrix> {
    check_distinct_nodes(mesh)?;
    Ok(assemble_skew(
        mesh,
        MatrixTag::Ks,
        |a, b| ks_kernel(a.z, a.tangent, b.z, b.tangent) * (a.weight * b.weight).sqrt(),
        false,
    ))
}

/// Single-threaded twin of [`assemble_ks`]; the fallback path, kept public
/// so the benchmark suite can compare it against the parallel one.
pub fn assemble_ks_sequential(mesh: &SharedMesh) -> Result<OperatorMatrix> {
    check_distinct_nodes(mesh)?;
    Ok(assemble_skew(
        mesh,
        MatrixTag::Ks,
        |a, b| ks_kernel(a.z, a.tangent, b.z, b.tangent) * (a.weight * b.weight).sqrt(),
        true,
    ))
}

/// Nystrom matrix of the h^{1/2}-weighted graph kernel on the graph
/// parameter. Exactly skew-Hermitian; unitarily identical to
/// [`assemble_ks`] on the lifted curve with matching panels.
pub fn assemble_graph_ks(curve: &GraphCurve, params: &MeshParams) -> Result<OperatorMatrix> {
    let boundary = curve.to_boundary()?;
    let mesh = build_mesh(&boundary, params)?;
    check_distinct_nodes(&mesh)?;
    let phi = |x: f64| curve.phi(x);
    let dphi = |x: f64| curve.dphi(x);
    Ok(assemble_skew(
        &mesh,
        MatrixTag::Ks,
        move |a, b| {
            let (x, y) = (a.t, b.t);
            graph_kernel(x, y, phi(x), phi(y), dphi(x), dphi(y))
                * (a.param_weight * b.param_weight).sqrt()
        },
        false,
    ))
}

/// Splits A into the localization blocks A_{j,k} = M_j A M_k for a
/// partition of the node set, returned as compact submatrices.
pub fn localized_blocks(a: &OperatorMatrix, masks: &[Vec<usize>]) -> Result<Vec<Vec<CMat>>> {
    let n = a.n();
    let mut seen = vec![false; n];
    for m in masks {
        for &i in m {
            if i >= n {
                return Err(KsError::Input(format!("mask index {i} out of range")));
            }
            if seen[i] {
                return Err(KsError::Input(format!("mask index {i} appears twice")));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(KsError::Input("masks do not cover every node".into()));
    }
    let mut blocks = Vec::with_capacity(masks.len());
    for mj in masks {
        let mut row = Vec::with_capacity(masks.len());
        for mk in masks {
            let block = CMat::from_fn(mj.len(), mk.len(), |r, c| a.mat[(mj[r], mk[c])]);
            row.push(block);
        }
        blocks.push(row);
    }
    Ok(blocks)
}

/// Scatters localization blocks back into a full matrix (inverse of
/// [`localized_blocks`]); the reconstruction is exact.
pub fn reassemble_blocks(blocks: &[Vec<CMat>], masks: &[Vec<usize>], n: usize) -> CMat {
    let mut out = CMat::zeros(n, n);
    for (j, row) in blocks.iter().enumerate() {
        for (k, block) in row.iter().enumerate() {
            for (r, &ir) in masks[j].iter().enumerate() {
                for (c, &ic) in masks[k].iter().enumerate() {
                    out[(ir, ic)] += block[(r, c)];
                }
            }
        }
    }
    out
}

/// Continuum-scaled Hilbert-Schmidt (Frobenius) norm of a block. The
/// quadrature weights are already folded into the entries, so this is the
/// discrete surrogate of the double integral of |A(z,w)|^2.
pub fn hs_norm(block: &CMat) -> f64 {
    block.frobenius_norm()
}
