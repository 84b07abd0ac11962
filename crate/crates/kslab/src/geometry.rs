//! Planar curve systems: closed piecewise-C1 boundaries, open curve
//! families (wedges, combs), and graph curves, with unit tangents, corner
//! metadata and a JSON curve-spec loader.
//!
//! Conventions.
//! * Every arc is parametrized with nonvanishing velocity z'(t); the mesh
//!   carries arc-length weights |z'| dt, never the geometry.
//! * An arc may be traversed against its parameter (`reversed`). This lets
//!   constructors anchor the parameter origin at a corner vertex, where
//!   dyadic grading needs the fine f64 resolution around t = 0.
//! * Corner half-angles follow the symmetric-wedge picture: a corner of
//!   interior angle 2*theta matches the wedge {r e^{+-i theta}}, and its
//!   graph form x + i M|x| has M = |cot theta|.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KsError, Result};
use crate::quadrature::integrate_gl;

type RealFn = std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const TANGENT_MATCH_TOL: f64 = 1e-12;

/// Parametrized arc kinds.
#[derive(Clone)]
pub enum ArcKind {
    /// z(t) = origin + t * dir, |dir| = 1.
    Segment { origin: Complex64, dir: Complex64 },
    /// z(t) = center + radius * e^{it}.
    CircularArc { center: Complex64, radius: f64 },
    /// Closed analytic curve z(t) = a cos t + i b sin t, t in [0, 2pi].
    AnalyticClosed { a: f64, b: f64 },
    /// Graph z(x) = x + i(slope * x + p(x)) with analytic derivative dp.
    Graph { slope: f64, p: RealFn, dp: RealFn },
}

impl std::fmt::Debug for ArcKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArcKind::Segment { origin, dir } => {
                write!(f, "Segment {{ origin: {origin}, dir: {dir} }}")
            }
            ArcKind::CircularArc { center, radius } => {
                write!(f, "CircularArc {{ center: {center}, radius: {radius} }}")
            }
            ArcKind::AnalyticClosed { a, b } => write!(f, "AnalyticClosed {{ a: {a}, b: {b} }}"),
            ArcKind::Graph { slope, .. } => write!(f, "Graph {{ slope: {slope}, .. }}"),
        }
    }
}

/// One smooth arc of a boundary.
#[derive(Clone, Debug)]
pub struct Arc {
    kind: ArcKind,
    t0: f64,
    t1: f64,
    /// Path runs from z(t1) to z(t0) when set.
    reversed: bool,
    path_start: Complex64,
    path_end: Complex64,
}

impl Arc {
    pub fn segment(from: Complex64, to: Complex64) -> Result<Self> {
        let d = to - from;
        let len = d.norm();
        if len == 0.0 {
            return Err(KsError::Geometry("zero-length segment".into()));
        }
        Ok(Self {
            kind: ArcKind::Segment { origin: from, dir: d / len },
            t0: 0.0,
            t1: len,
            reversed: false,
            path_start: from,
            path_end: to,
        })
    }

    /// Segment anchored at `anchor` with unit direction `dir` and length
    /// `len`, traversed from the far end toward the anchor.
    pub fn segment_into_anchor(anchor: Complex64, dir: Complex64, len: f64) -> Result<Self> {
        if len <= 0.0 {
            return Err(KsError::Geometry("zero-length segment".into()));
        }
        let far = anchor + dir * len;
        Ok(Self {
            kind: ArcKind::Segment { origin: anchor, dir },
            t0: 0.0,
            t1: len,
            reversed: true,
            path_start: far,
            path_end: anchor,
        })
    }

    /// Segment anchored at `anchor`, traversed away from it.
    pub fn segment_out_of_anchor(anchor: Complex64, dir: Complex64, len: f64) -> Result<Self> {
        if len <= 0.0 {
            return Err(KsError::Geometry("zero-length segment".into()));
        }
        let far = anchor + dir * len;
        Ok(Self {
            kind: ArcKind::Segment { origin: anchor, dir },
            t0: 0.0,
            t1: len,
            reversed: false,
            path_start: anchor,
            path_end: far,
        })
    }

    pub fn circular(center: Complex64, radius: f64, angle0: f64, angle1: f64) -> Result<Self> {
        if radius <= 0.0 || angle1 == angle0 {
            return Err(KsError::Geometry("degenerate circular arc".into()));
        }
        let z = |t: f64| center + Complex64::from_polar(radius, t);
        Ok(Self {
            kind: ArcKind::CircularArc { center, radius },
            t0: angle0,
            t1: angle1,
            reversed: false,
            path_start: z(angle0),
            path_end: z(angle1),
        })
    }

    pub fn analytic_closed(a: f64, b: f64) -> Result<Self> {
        if a <= 0.0 || b <= 0.0 {
            return Err(KsError::Geometry("ellipse semi-axes must be positive".into()));
        }
        let start = Complex64::new(a, 0.0);
        Ok(Self {
            kind: ArcKind::AnalyticClosed { a, b },
            t0: 0.0,
            t1: 2.0 * std::f64::consts::PI,
            reversed: false,
            path_start: start,
            path_end: start,
        })
    }

    pub fn graph(
        interval: (f64, f64),
        slope: f64,
        p: RealFn,
        dp: RealFn,
    ) -> Result<Self> {
        let (l, r) = interval;
        if !(l < r) {
            return Err(KsError::Geometry("graph interval must be nonempty".into()));
        }
        let zl = Complex64::new(l, slope * l + p(l));
        let zr = Complex64::new(r, slope * r + p(r));
        Ok(Self {
            kind: ArcKind::Graph { slope, p, dp },
            t0: l,
            t1: r,
            reversed: false,
            path_start: zl,
            path_end: zr,
        })
    }

    pub fn kind(&self) -> &ArcKind {
        &self.kind
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn reversed(&self) -> bool {
        self.reversed
    }

    /// Stored path endpoints (exact values shared with adjacent arcs).
    pub fn path_start(&self) -> Complex64 {
        self.path_start
    }

    pub fn path_end(&self) -> Complex64 {
        self.path_end
    }

    pub fn point(&self, t: f64) -> Complex64 {
        match &self.kind {
            ArcKind::Segment { origin, dir } => origin + dir * t,
            ArcKind::CircularArc { center, radius } => center + Complex64::from_polar(*radius, t),
            ArcKind::AnalyticClosed { a, b } => Complex64::new(a * t.cos(), b * t.sin()),
            ArcKind::Graph { slope, p, .. } => Complex64::new(t, slope * t + p(t)),
        }
    }

    /// dz/dt of the parametrization (ignores traversal direction).
    pub fn velocity(&self, t: f64) -> Complex64 {
        match &self.kind {
            ArcKind::Segment { dir, .. } => *dir,
            ArcKind::CircularArc { radius, .. } => {
                Complex64::from_polar(*radius, t) * Complex64::new(0.0, 1.0)
            }
            ArcKind::AnalyticClosed { a, b } => Complex64::new(-a * t.sin(), b * t.cos()),
            ArcKind::Graph { slope, dp, .. } => Complex64::new(1.0, slope + dp(t)),
        }
    }

    /// d2z/dt2 where the kind supports it analytically.
    pub fn acceleration(&self, t: f64) -> Option<Complex64> {
        match &self.kind {
            ArcKind::Segment { .. } => Some(Complex64::new(0.0, 0.0)),
            ArcKind::CircularArc { radius, .. } => Some(-Complex64::from_polar(*radius, t)),
            ArcKind::AnalyticClosed { a, b } => Some(Complex64::new(-a * t.cos(), -b * t.sin())),
            ArcKind::Graph { .. } => None,
        }
    }

    /// Unit tangent of the traversed path at parameter t.
    pub fn tangent(&self, t: f64) -> Complex64 {
        let v = self.velocity(t);
        let u = v / v.norm();
        if self.reversed {
            -u
        } else {
            u
        }
    }

    /// Tangent at the path start / path end.
    pub fn start_tangent(&self) -> Complex64 {
        self.tangent(if self.reversed { self.t1 } else { self.t0 })
    }

    pub fn end_tangent(&self) -> Complex64 {
        self.tangent(if self.reversed { self.t0 } else { self.t1 })
    }

    pub fn length(&self) -> f64 {
        match &self.kind {
            ArcKind::Segment { .. } => self.t1 - self.t0,
            ArcKind::CircularArc { radius, .. } => radius * (self.t1 - self.t0).abs(),
            _ => {
                let f = |t: f64| self.velocity(t).norm();
                let panels = 64;
                let h = (self.t1 - self.t0) / panels as f64;
                (0..panels)
                    .map(|k| {
                        integrate_gl(&f, self.t0 + k as f64 * h, self.t0 + (k + 1) as f64 * h, 16)
                    })
                    .sum()
            }
        }
    }
}

/// Corner descriptor: vertex, half-angle theta of the matching symmetric
/// wedge, and the graph Lipschitz constant |cot theta|.
#[derive(Clone, Debug)]
pub struct Corner {
    pub vertex: Complex64,
    pub half_angle: f64,
    pub incoming: Complex64,
    pub outgoing: Complex64,
    pub lipschitz_m: f64,
}

impl Corner {
    pub fn new(
        vertex: Complex64,
        half_angle: f64,
        incoming: Complex64,
        outgoing: Complex64,
    ) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle < std::f64::consts::PI) {
            return Err(KsError::Domain(format!(
                "corner half-angle {half_angle} outside (0, pi)"
            )));
        }
        if (half_angle - std::f64::consts::FRAC_PI_2).abs() < TANGENT_MATCH_TOL {
            return Err(KsError::Domain(
                "half-angle pi/2 is a straight junction, not a corner".into(),
            ));
        }
        // cos(2 theta) must match the tangent pair; the cosine form is
        // invariant under theta -> pi - theta, matching |cot theta|.
        let got = ((-incoming).conj() * outgoing).re;
        if (got - (2.0 * half_angle).cos()).abs() > 1e-10 {
            return Err(KsError::Geometry(format!(
                "tangents inconsistent with half-angle {half_angle}: cos(2theta) = {} vs {}",
                (2.0 * half_angle).cos(),
                got
            )));
        }
        Ok(Self {
            vertex,
            half_angle,
            incoming,
            outgoing,
            lipschitz_m: (1.0 / half_angle.tan()).abs(),
        })
    }

    /// Half-angle from the traversal tangents: theta = (pi - turn)/2 with
    /// turn = arg(conj(T_in) T_out), the signed exterior angle.
    pub fn half_angle_from_tangents(incoming: Complex64, outgoing: Complex64) -> f64 {
        let turn = (incoming.conj() * outgoing).arg();
        0.5 * (std::f64::consts::PI - turn)
    }
}

/// Ordered arc system with corner metadata.
#[derive(Clone, Debug)]
pub struct Boundary {
    arcs: Vec<Arc>,
    corners: Vec<Corner>,
    closed: bool,
}

impl Boundary {
    /// Validates path continuity and corner coverage. Consecutive arcs that
    /// do not share endpoints start a new connected component, which is
    /// only legal for open systems.
    pub fn new(arcs: Vec<Arc>, corners: Vec<Corner>, closed: bool) -> Result<Self> {
        if arcs.is_empty() {
            return Err(KsError::Geometry("boundary needs at least one arc".into()));
        }
        let b = Self { arcs, corners, closed };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        let n = self.arcs.len();
        let junction_count = if self.closed { n } else { n.saturating_sub(1) };
        for k in 0..junction_count {
            let cur = &self.arcs[k];
            let next = &self.arcs[(k + 1) % n];
            let shared = cur.path_end() == next.path_start();
            if !shared {
                if self.closed {
                    return Err(KsError::Geometry(format!(
                        "closed boundary breaks between arcs {k} and {}",
                        (k + 1) % n
                    )));
                }
                continue; // component break in an open system
            }
            let t_in = cur.end_tangent();
            let t_out = next.start_tangent();
            if (t_in - t_out).norm() <= TANGENT_MATCH_TOL {
                continue; // smooth junction
            }
            let v = cur.path_end();
            if !self
                .corners
                .iter()
                .any(|c| (c.vertex - v).norm() <= 1e-12)
            {
                return Err(KsError::Geometry(format!(
                    "tangent jump at junction {v} has no corner descriptor"
                )));
            }
        }
        Ok(())
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    /// True if the endpoint (start when `at_start`) of arc `k` touches no
    /// other arc, i.e. is a free end of an open system.
    pub fn is_open_end(&self, k: usize, at_start: bool) -> bool {
        let p = if at_start { self.arcs[k].path_start() } else { self.arcs[k].path_end() };
        let mut touches = 0;
        for (j, arc) in self.arcs.iter().enumerate() {
            if j == k {
                continue;
            }
            if arc.path_start() == p || arc.path_end() == p {
                touches += 1;
            }
        }
        if self.closed {
            false
        } else {
            touches == 0
        }
    }

    /// True if the given endpoint of arc `k` carries a corner.
    pub fn is_corner_end(&self, k: usize, at_start: bool) -> bool {
        let p = if at_start { self.arcs[k].path_start() } else { self.arcs[k].path_end() };
        self.corners.iter().any(|c| (c.vertex - p).norm() <= 1e-12)
    }
}

/// Symmetric wedge specification: two unit segments {r e^{+-i theta}}.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeSpec {
    pub theta: f64,
}

impl WedgeSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(KsError::Domain(format!("wedge angle {theta} outside (0, pi)")));
        }
        Ok(Self { theta })
    }
}

/// Comb specification: n+1 unit intervals at heights alpha_j = eps*j/n.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombSpec {
    pub n: usize,
    pub eps: f64,
}

impl CombSpec {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(KsError::Domain("comb needs n >= 1 gaps".into()));
        }
        if !(eps > 0.0 && eps < 0.25) {
            return Err(KsError::Domain(format!(
                "comb separation eps = {eps} outside (0, 1/4); the norm estimates require eps < 1/4"
            )));
        }
        Ok(Self { n, eps })
    }

    /// Heights alpha_j = eps * j / n for j = 0..=n; alpha_n == eps exactly.
    pub fn alphas(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.eps * (j as f64 / self.n as f64)).collect()
    }
}

/// The symmetric wedge W_theta, traversed continuously: down the upper ray
/// into the corner, then out along the lower ray. Both rays are
/// parametrized from the corner so grading can dig arbitrarily deep.
pub fn make_wedge(theta: f64) -> Result<Boundary> {
    let spec = WedgeSpec::new(theta)?;
    let up = Complex64::from_polar(1.0, spec.theta);
    let down = Complex64::from_polar(1.0, -spec.theta);
    let origin = Complex64::new(0.0, 0.0);
    let upper = Arc::segment_into_anchor(origin, up, 1.0)?;
    let lower = Arc::segment_out_of_anchor(origin, down, 1.0)?;
    let t_in = upper.end_tangent();
    let t_out = lower.start_tangent();
    let corners = if (t_in - t_out).norm() <= TANGENT_MATCH_TOL {
        Vec::new() // theta = pi/2: the two rays form a straight line
    } else {
        vec![Corner::new(origin, spec.theta, t_in, t_out)?]
    };
    Boundary::new(vec![upper, lower], corners, false)
}

/// The comb configuration: n+1 unit horizontal intervals at heights
/// alpha_j, all oriented rightward; an open, disconnected system.
pub fn make_comb(spec: &CombSpec) -> Result<Boundary> {
    let arcs = spec
        .alphas()
        .into_iter()
        .map(|alpha| {
            Arc::segment(Complex64::new(0.0, alpha), Complex64::new(1.0, alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Boundary::new(arcs, Vec::new(), false)
}

/// Closed polygon from a vertex list (counterclockwise; reversed if given
/// clockwise). Each edge is split at its midpoint into two corner-anchored
/// arcs so dyadic grading near every vertex stays well-conditioned.
pub fn make_polygon(vertices: &[Complex64]) -> Result<Boundary> {
    let k = vertices.len();
    if k < 3 {
        return Err(KsError::Geometry("polygon needs at least 3 vertices".into()));
    }
    // signed area to normalize orientation
    let area2: f64 = (0..k)
        .map(|i| {
            let p = vertices[i];
            let q = vertices[(i + 1) % k];
            p.re * q.im - q.re * p.im
        })
        .sum();
    if area2.abs() < 1e-14 {
        return Err(KsError::Geometry("polygon vertices are collinear or degenerate".into()));
    }
    let verts: Vec<Complex64> =
        if area2 > 0.0 { vertices.to_vec() } else { vertices.iter().rev().copied().collect() };

    let mut arcs = Vec::with_capacity(2 * k);
    let mut corners = Vec::new();
    for i in 0..k {
        let v0 = verts[i];
        let v1 = verts[(i + 1) % k];
        let edge = v1 - v0;
        let len = edge.norm();
        if len < 1e-14 {
            return Err(KsError::Geometry("repeated polygon vertex".into()));
        }
        let dir = edge / len;
        let mid = (v0 + v1) * 0.5;
        let mut first = Arc::segment_out_of_anchor(v0, dir, 0.5 * len)?;
        let mut second = Arc::segment_into_anchor(v1, -dir, 0.5 * len)?;
        // share the midpoint value exactly between the two halves
        first.path_end = mid;
        second.path_start = mid;
        arcs.push(first);
        arcs.push(second);
    }
    for i in 0..k {
        let prev = verts[(i + k - 1) % k];
        let v = verts[i];
        let next = verts[(i + 1) % k];
        let t_in = (v - prev) / (v - prev).norm();
        let t_out = (next - v) / (next - v).norm();
        if (t_in - t_out).norm() <= TANGENT_MATCH_TOL {
            continue; // collinear vertex, no corner
        }
        let theta = Corner::half_angle_from_tangents(t_in, t_out);
        corners.push(Corner::new(v, theta, t_in, t_out)?);
    }
    Boundary::new(arcs, corners, true)
}

pub fn make_circle(r: f64) -> Result<Boundary> {
    make_ellipse(r, r)
}

/// Counterclockwise ellipse x^2/a^2 + y^2/b^2 = 1 as one closed analytic arc.
pub fn make_ellipse(a: f64, b: f64) -> Result<Boundary> {
    if a <= 0.0 || b <= 0.0 {
        return Err(KsError::Domain("ellipse semi-axes must be positive".into()));
    }
    Boundary::new(vec![Arc::analytic_closed(a, b)?], Vec::new(), true)
}

// ---------------------------------------------------------------------------
// JSON curve-spec documents
// ---------------------------------------------------------------------------

/// One arc of a JSON curve-spec document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ArcSpec {
    #[serde(rename = "line-segment")]
    LineSegment { from: [f64; 2], to: [f64; 2] },
    #[serde(rename = "circular-arc")]
    CircularArc { center: [f64; 2], radius: f64, angle_start: f64, angle_end: f64 },
    #[serde(rename = "analytic-closed")]
    AnalyticClosed { a: f64, b: f64 },
}

/// Curve-spec document: either an explicit arc list or a preset. Every
/// variant rejects unknown keys.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Arcs(ArcListDoc),
    Polygon(PolygonDoc),
    Comb(CombDoc),
    Wedge(WedgeDoc),
    Ellipse(EllipseDoc),
    Circle(CircleDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcListDoc {
    pub arcs: Vec<ArcSpec>,
    pub closed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDoc {
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombDoc {
    pub comb: CombSpec,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeDoc {
    pub wedge: WedgeSpec,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipseDoc {
    pub ellipse: EllipseSpec,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleDoc {
    pub circle: CircleSpec,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipseSpec {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub r: f64,
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| KsError::Input(format!("curve spec: {e}")))
    }

    pub fn to_boundary(&self) -> Result<Boundary> {
        match self {
            CurveSpec::Arcs(doc) => {
                let built: Vec<Arc> = doc
                    .arcs
                    .iter()
                    .map(|a| match *a {
                        ArcSpec::LineSegment { from, to } => Arc::segment(
                            Complex64::new(from[0], from[1]),
                            Complex64::new(to[0], to[1]),
                        ),
                        ArcSpec::CircularArc { center, radius, angle_start, angle_end } => {
                            Arc::circular(
                                Complex64::new(center[0], center[1]),
                                radius,
                                angle_start,
                                angle_end,
                            )
                        }
                        ArcSpec::AnalyticClosed { a, b } => Arc::analytic_closed(a, b),
                    })
                    .collect::<Result<_>>()?;
                // snap near-coincident junction endpoints to shared values,
                // then detect corners from tangent jumps
                let mut arcs = built;
                let n = arcs.len();
                let junctions = if doc.closed { n } else { n.saturating_sub(1) };
                let mut corners = Vec::new();
                for k in 0..junctions {
                    let e = arcs[k].path_end();
                    let s = arcs[(k + 1) % n].path_start();
                    if e != s && (e - s).norm() <= 1e-9 {
                        arcs[(k + 1) % n].path_start = e;
                    }
                    if arcs[k].path_end() == arcs[(k + 1) % n].path_start() {
                        let t_in = arcs[k].end_tangent();
                        let t_out = arcs[(k + 1) % n].start_tangent();
                        if (t_in - t_out).norm() > TANGENT_MATCH_TOL {
                            let theta = Corner::half_angle_from_tangents(t_in, t_out);
                            corners.push(Corner::new(arcs[k].path_end(), theta, t_in, t_out)?);
                        }
                    }
                }
                Boundary::new(arcs, corners, doc.closed)
            }
            CurveSpec::Polygon(doc) => {
                let verts: Vec<Complex64> =
                    doc.polygon.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                make_polygon(&verts)
            }
            CurveSpec::Comb(doc) => make_comb(&CombSpec::new(doc.comb.n, doc.comb.eps)?),
            CurveSpec::Wedge(doc) => make_wedge(doc.wedge.theta),
            CurveSpec::Ellipse(doc) => make_ellipse(doc.ellipse.a, doc.ellipse.b),
            CurveSpec::Circle(doc) => make_circle(doc.circle.r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    #[test]
    fn wedge_pi_2_is_straight_line_without_corner() {
        let b = make_wedge(FRAC_PI_2).unwrap();
        assert!(b.corners().is_empty());
        assert_eq!(b.arcs().len(), 2);
    }

    #[test]
    fn wedge_pi_4_has_corner_with_half_angle() {
        let b = make_wedge(FRAC_PI_4).unwrap();
        assert_eq!(b.corners().len(), 1);
        let c = &b.corners()[0];
        assert!((c.half_angle - FRAC_PI_4).abs() < 1e-15);
        // paper orientation: inward on the upper ray, outward on the lower
        assert!((c.incoming + Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
        assert!((c.outgoing - Complex64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn wedge_pi_3_lipschitz_constant() {
        let b = make_wedge(FRAC_PI_3).unwrap();
        let c = &b.corners()[0];
        assert!((c.lipschitz_m - 0.57735026918962576).abs() < 1e-12);
    }

    #[test]
    fn wedge_rejects_out_of_range_angle() {
        assert!(matches!(make_wedge(0.0), Err(KsError::Domain(_))));
        assert!(matches!(make_wedge(PI), Err(KsError::Domain(_))));
        assert!(matches!(make_wedge(-0.3), Err(KsError::Domain(_))));
    }

    #[test]
    fn comb_heights_follow_alpha_j() {
        let spec = CombSpec::new(3, 0.09).unwrap();
        let b = make_comb(&spec).unwrap();
        assert_eq!(b.arcs().len(), 4);
        let heights: Vec<f64> = b.arcs().iter().map(|a| a.path_start().im).collect();
        for (h, expect) in heights.iter().zip([0.0, 0.03, 0.06, 0.09]) {
            assert!((h - expect).abs() < 1e-15);
        }
        // n=1 layout
        let b1 = make_comb(&CombSpec::new(1, 0.1).unwrap()).unwrap();
        assert_eq!(b1.arcs()[0].path_start().im, 0.0);
        assert!((b1.arcs()[1].path_start().im - 0.1).abs() < 1e-16);
        // alpha_7 for n=10, eps=0.01
        let a = CombSpec::new(10, 0.01).unwrap().alphas();
        assert!((a[7] - 0.007).abs() < 1e-17);
    }

    #[test]
    fn comb_total_extent_is_eps_exactly() {
        for (n, eps) in [(1usize, 0.1), (3, 0.09), (7, 0.21), (10, 0.01)] {
            let alphas = CombSpec::new(n, eps).unwrap().alphas();
            assert_eq!(*alphas.last().unwrap(), eps);
            assert_eq!(alphas[0], 0.0);
        }
    }

    #[test]
    fn comb_rejects_large_eps() {
        assert!(matches!(CombSpec::new(3, 0.25), Err(KsError::Domain(_))));
        assert!(matches!(CombSpec::new(3, 0.3), Err(KsError::Domain(_))));
    }

    #[test]
    fn unit_square_has_four_pi_4_corners() {
        let b = make_polygon(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(b.closed());
        assert_eq!(b.corners().len(), 4);
        for c in b.corners() {
            assert!((c.half_angle - FRAC_PI_4).abs() < 1e-12);
        }
        assert!((b.total_length() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_corner_half_angles() {
        let b = make_polygon(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        let mut angles: Vec<f64> = b.corners().iter().map(|c| c.half_angle).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((angles[0] - PI / 8.0).abs() < 1e-12);
        assert!((angles[1] - PI / 8.0).abs() < 1e-12);
        assert!((angles[2] - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn convex_polygon_half_angles_sum() {
        // sum of 2 theta over a convex k-gon = (k-2) pi
        for k in [3usize, 4, 5, 8] {
            let verts: Vec<Complex64> = (0..k)
                .map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / k as f64))
                .collect();
            let b = make_polygon(&verts).unwrap();
            let total: f64 = b.corners().iter().map(|c| 2.0 * c.half_angle).sum();
            assert!((total - (k as f64 - 2.0) * PI).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn clockwise_polygon_is_normalized() {
        let ccw = make_polygon(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        let cw = make_polygon(&[
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let mut a1: Vec<f64> = ccw.corners().iter().map(|c| c.half_angle).collect();
        let mut a2: Vec<f64> = cw.corners().iter().map(|c| c.half_angle).collect();
        a1.sort_by(|x, y| x.partial_cmp(y).unwrap());
        a2.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in a1.iter().zip(a2.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_polygon_rejected() {
        assert!(make_polygon(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).is_err());
        assert!(make_polygon(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ])
        .is_err());
    }

    #[test]
    fn circle_is_closed_without_corners() {
        let b = make_circle(1.0).unwrap();
        assert!(b.closed());
        assert!(b.corners().is_empty());
        assert!((b.total_length() - 2.0 * PI).abs() < 1e-10);
        assert!(make_circle(0.0).is_err());
    }

    #[test]
    fn unit_tangents_have_unit_norm() {
        let boundaries = [
            make_wedge(1.1).unwrap(),
            make_ellipse(1.0, 0.8).unwrap(),
            make_polygon(&[
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 1.5),
            ])
            .unwrap(),
        ];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for b in &boundaries {
            for arc in b.arcs() {
                let (t0, t1) = arc.interval();
                for _ in 0..100 {
                    let t = t0 + (t1 - t0) * next();
                    assert!((arc.tangent(t).norm() - 1.0).abs() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn curve_spec_json_roundtrip_presets() {
        let wedge: CurveSpec = CurveSpec::from_json(r#"{"wedge": {"theta": 0.7853981633974483}}"#).unwrap();
        let b = wedge.to_boundary().unwrap();
        assert_eq!(b.arcs().len(), 2);

        let comb = CurveSpec::from_json(r#"{"comb": {"n": 3, "eps": 0.09}}"#).unwrap();
        assert_eq!(comb.to_boundary().unwrap().arcs().len(), 4);

        let poly = CurveSpec::from_json(r#"{"polygon": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert_eq!(poly.to_boundary().unwrap().corners().len(), 4);

        let ell = CurveSpec::from_json(r#"{"ellipse": {"a": 1.0, "b": 0.8}}"#).unwrap();
        assert!(ell.to_boundary().unwrap().closed());

        let arcs = CurveSpec::from_json(
            r#"{"arcs": [{"kind": "line-segment", "from": [0,0], "to": [1,0]},
                         {"kind": "line-segment", "from": [1,0], "to": [1,1]}],
                "closed": false}"#,
        )
        .unwrap();
        let b = arcs.to_boundary().unwrap();
        assert_eq!(b.corners().len(), 1);
        assert!((b.corners()[0].half_angle - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn curve_spec_rejects_unknown_keys() {
        assert!(CurveSpec::from_json(r#"{"wedge": {"theta": 0.5, "bogus": 1}}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"unknown_top": {}}"#).is_err());
    }
}
