//! Cone, discrete curve and the integral quantities measured on it.
//!
//! A [`DiscreteCurve`] is a polygon with `N + 1` nodes. Arclength is the
//! cumulative chord length. Curvature is the ratio of the length gradient to
//! the area gradient at each node, both projected on the node normal:
//!
//! ```text
//! k_j = <tau_{j-1/2} - tau_{j+1/2}, n_j> / (1/2 <J (x_{j+1} - x_{j-1}), n_j>)
//! ```
//!
//! which is the arclength-weighted second difference `-<x_ss, n>` with the
//! area-dual cell length as denominator. It vanishes on straight polygons, is
//! constant on regular polygons inscribed in a circle, and is second-order
//! accurate on smooth curves. At the two ends the same formula is applied to
//! the curve reflected across the line through the end node along the end
//! normal (ghost reflection), which halves both numerator and denominator.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

use crate::math;

/// Relative tolerance (times curve length) for "endpoint lies on its ray".
pub const ON_RAY_TOL: f64 = 1e-10;

/// Minimum number of segments of a discrete curve.
pub const MIN_SEGMENTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("cone angles must satisfy 0 <= theta2 < theta1 < pi (got theta1 = {theta1}, theta2 = {theta2})")]
    InvalidCone { theta1: f64, theta2: f64 },
    #[error("a curve needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("degenerate segment between nodes {index} and {}", index + 1)]
    DegenerateSegment { index: usize },
    #[error("curve folds back on itself at node {index}")]
    Folded { index: usize },
    #[error("non-finite coordinate at node {index}")]
    NonFinite { index: usize },
    #[error("radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),
    #[error("area must be positive and finite, got {0}")]
    NonPositiveArea(f64),
    #[error("{end} endpoint is {distance:e} away from its ray")]
    BoundaryViolation { end: Ray, distance: f64 },
}

/// Planar point or vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn polar(radius: f64, angle: f64) -> Self {
        Vec2::new(radius * math::cos(angle), radius * math::sin(angle))
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3d cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn angle(self) -> f64 {
        math::atan2(self.y, self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, a: f64) -> Vec2 {
        Vec2::new(self.x * a, self.y * a)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// One of the two boundary rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ray {
    /// Ray at angle `theta1`, carrying node 0.
    First,
    /// Ray at angle `theta2`, carrying node N.
    Second,
}

impl core::fmt::Display for Ray {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Ray::First => f.write_str("first"),
            Ray::Second => f.write_str("second"),
        }
    }
}

/// Region between two rays from the origin at angles `theta2 < theta1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    theta1: f64,
    theta2: f64,
}

impl Cone {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self, GeometryError> {
        let ok = theta1.is_finite()
            && theta2.is_finite()
            && theta2 >= 0.0
            && theta2 < theta1
            && theta1 < PI
            && theta1 - theta2 < PI;
        if !ok {
            return Err(GeometryError::InvalidCone { theta1, theta2 });
        }
        Ok(Cone { theta1, theta2 })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// Opening angle `theta1 - theta2`.
    pub fn opening(&self) -> f64 {
        self.theta1 - self.theta2
    }

    /// Rotation number every compatible curve in this cone has.
    pub fn rotation_number(&self) -> f64 {
        self.opening() / (2.0 * PI)
    }

    /// Unit direction of a ray, pointing away from the tip.
    pub fn direction(&self, ray: Ray) -> Vec2 {
        match ray {
            Ray::First => Vec2::polar(1.0, self.theta1),
            Ray::Second => Vec2::polar(1.0, self.theta2),
        }
    }

    /// Unit normal to a ray pointing into the cone (`e-` for the first ray,
    /// `e+` for the second).
    pub fn inward_normal(&self, ray: Ray) -> Vec2 {
        match ray {
            Ray::First => -self.direction(Ray::First).perp(),
            Ray::Second => self.direction(Ray::Second).perp(),
        }
    }

    /// Signed position along the ray of the orthogonal projection of `p`.
    pub fn ray_parameter(&self, ray: Ray, p: Vec2) -> f64 {
        p.dot(self.direction(ray))
    }

    /// Distance from `p` to the closed ray.
    pub fn distance_to_ray(&self, ray: Ray, p: Vec2) -> f64 {
        if self.ray_parameter(ray, p) >= 0.0 {
            p.dot(self.inward_normal(ray)).abs()
        } else {
            p.norm()
        }
    }

    /// Orthogonal projection onto the supporting line of the ray.
    pub fn project(&self, ray: Ray, p: Vec2) -> Vec2 {
        let d = self.direction(ray);
        d * p.dot(d)
    }

    /// Mirror image of `p` across the supporting line of the ray.
    pub fn reflect(&self, ray: Ray, p: Vec2) -> Vec2 {
        let e = self.inward_normal(ray);
        p - e * (2.0 * p.dot(e))
    }
}

/// Polygonal curve with its arclength, frame and curvature tables.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    nodes: Vec<Vec2>,
    h: Vec<f64>,
    s: Vec<f64>,
    tau: Vec<Vec2>,
    nu: Vec<Vec2>,
    // Normals the curvature is projected on and the flow moves along. They
    // coincide with `nu` except at the ends of a curve placed in a cone,
    // where they are the ray directions.
    pn: Vec<Vec2>,
    dual: Vec<f64>,
    w: Vec<f64>,
    k: Vec<f64>,
    cone: Option<Cone>,
}

impl DiscreteCurve {
    /// Builds the tables for a free polygon. End normals are measured from
    /// one-sided second-order tangents.
    pub fn new(nodes: Vec<Vec2>) -> Result<Self, GeometryError> {
        Self::build(nodes, None)
    }

    /// Builds the tables for a polygon whose ends lie on the rays of `cone`.
    /// The end normals used for the curvature are the ray directions.
    pub fn in_cone(nodes: Vec<Vec2>, cone: &Cone) -> Result<Self, GeometryError> {
        Self::build(nodes, Some(*cone))
    }

    fn build(nodes: Vec<Vec2>, cone: Option<Cone>) -> Result<Self, GeometryError> {
        let n_nodes = nodes.len();
        if n_nodes < MIN_SEGMENTS + 1 {
            return Err(GeometryError::TooFewNodes {
                min: MIN_SEGMENTS + 1,
                got: n_nodes,
            });
        }
        if let Some(index) = nodes.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        let n = n_nodes - 1;

        let mut h = Vec::with_capacity(n);
        for (index, pair) in nodes.windows(2).enumerate() {
            let len = (pair[1] - pair[0]).norm();
            if len <= 0.0 || !len.is_finite() {
                return Err(GeometryError::DegenerateSegment { index });
            }
            h.push(len);
        }
        let mut s = Vec::with_capacity(n_nodes);
        s.push(0.0);
        for &len in &h {
            let last = *s.last().unwrap();
            s.push(last + len);
        }
        let total = s[n];

        if let Some(cone) = cone {
            for (ray, p) in [(Ray::First, nodes[0]), (Ray::Second, nodes[n])] {
                let distance = cone.distance_to_ray(ray, p);
                if distance > ON_RAY_TOL * total {
                    return Err(GeometryError::BoundaryViolation { end: ray, distance });
                }
            }
        }

        let tau = tangents(&nodes, &h);
        let nu: Vec<Vec2> = tau.iter().map(|t| t.perp()).collect();
        let mut pn = nu.clone();
        if let Some(cone) = cone {
            pn[0] = cone.direction(Ray::First);
            pn[n] = cone.direction(Ray::Second);
        }

        let dual = dual_lengths(&nodes, &pn);
        if let Some(index) = dual.iter().position(|&a| !(a > 0.0)) {
            return Err(GeometryError::Folded { index });
        }
        let k = length_gradient(&nodes, &h, &pn)
            .iter()
            .zip(&dual)
            .map(|(g, a)| g / a)
            .collect();

        let mut w = Vec::with_capacity(n_nodes);
        w.push(0.5 * h[0]);
        for j in 1..n {
            w.push(0.5 * (h[j - 1] + h[j]));
        }
        w.push(0.5 * h[n - 1]);

        Ok(DiscreteCurve {
            nodes,
            h,
            s,
            tau,
            nu,
            pn,
            dual,
            w,
            k,
            cone,
        })
    }

    /// Rebuilds the tables for new node positions, keeping the end mode.
    pub fn with_nodes(&self, nodes: Vec<Vec2>) -> Result<Self, GeometryError> {
        Self::build(nodes, self.cone)
    }

    /// Number of segments `N` (the curve has `N + 1` nodes).
    pub fn segments(&self) -> usize {
        self.h.len()
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Vec2> {
        self.nodes
    }

    /// Chord lengths, one per segment.
    pub fn edge_lengths(&self) -> &[f64] {
        &self.h
    }

    /// Cumulative arclength per node, `s[0] = 0`.
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn tau(&self) -> &[Vec2] {
        &self.tau
    }

    pub fn nu(&self) -> &[Vec2] {
        &self.nu
    }

    /// Normals used for the curvature projection and for the motion.
    pub fn motion_normals(&self) -> &[Vec2] {
        &self.pn
    }

    /// Area-dual cell lengths (area gradient projected on the motion normal).
    pub fn dual_lengths(&self) -> &[f64] {
        &self.dual
    }

    /// Trapezoidal arclength quadrature weights; they sum to the length.
    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn cone(&self) -> Option<&Cone> {
        self.cone.as_ref()
    }

    pub fn length(&self) -> f64 {
        self.s[self.segments()]
    }

    /// Mean chord length.
    pub fn mean_spacing(&self) -> f64 {
        self.length() / self.segments() as f64
    }

    /// Ratio of the longest to the shortest segment.
    pub fn spacing_ratio(&self) -> f64 {
        let (lo, hi) = self
            .h
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        hi / lo
    }

    /// Quadrature of a nodal table against arclength.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.w.len());
        self.w.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Same polygon scaled about the tip.
    pub fn scaled(&self, factor: f64) -> Result<Self, GeometryError> {
        self.with_nodes(self.nodes.iter().map(|&p| p * factor).collect())
    }
}

fn tangents(x: &[Vec2], h: &[f64]) -> Vec<Vec2> {
    let n = h.len();
    let mut tau = Vec::with_capacity(n + 1);

    // One-sided quadratic at the ends, centred quadratic inside.
    let (h1, h2) = (h[0], h[1]);
    let d0 = x[0] * (-(2.0 * h1 + h2) / (h1 * (h1 + h2)))
        + x[1] * ((h1 + h2) / (h1 * h2))
        - x[2] * (h1 / (h2 * (h1 + h2)));
    tau.push(d0.normalized());
    for j in 1..n {
        let (hm, hp) = (h[j - 1], h[j]);
        let d = ((x[j + 1] - x[j]) * (hm * hm) + (x[j] - x[j - 1]) * (hp * hp))
            * (1.0 / (hm * hp * (hm + hp)));
        tau.push(d.normalized());
    }
    let (h1, h2) = (h[n - 1], h[n - 2]);
    let dn = x[n] * ((2.0 * h1 + h2) / (h1 * (h1 + h2))) - x[n - 1] * ((h1 + h2) / (h1 * h2))
        + x[n - 2] * (h1 / (h2 * (h1 + h2)));
    tau.push(dn.normalized());
    tau
}

/// Area gradient at each node projected on `normals`.
pub(crate) fn dual_lengths(x: &[Vec2], normals: &[Vec2]) -> Vec<f64> {
    let n = x.len() - 1;
    let mut a = Vec::with_capacity(n + 1);
    a.push(0.5 * (x[1] - x[0]).perp().dot(normals[0]));
    for j in 1..n {
        a.push(0.5 * (x[j + 1] - x[j - 1]).perp().dot(normals[j]));
    }
    a.push(0.5 * (x[n] - x[n - 1]).perp().dot(normals[n]));
    a
}

/// Length gradient at each node projected on `normals`.
fn length_gradient(x: &[Vec2], h: &[f64], normals: &[Vec2]) -> Vec<f64> {
    let n = h.len();
    let t: Vec<Vec2> = (0..n).map(|e| (x[e + 1] - x[e]) * (1.0 / h[e])).collect();
    let mut g = Vec::with_capacity(n + 1);
    g.push(-t[0].dot(normals[0]));
    for j in 1..n {
        g.push((t[j - 1] - t[j]).dot(normals[j]));
    }
    g.push(t[n - 1].dot(normals[n]));
    g
}

/// Area enclosed by the polygon and the two segments joining its ends to
/// the origin: `1/2 sum <midpoint, J edge>` over the edges.
pub fn polygon_area(nodes: &[Vec2]) -> f64 {
    0.5 * nodes
        .windows(2)
        .map(|e| ((e[0] + e[1]) * 0.5).dot((e[1] - e[0]).perp()))
        .sum::<f64>()
}

pub fn length(curve: &DiscreteCurve) -> f64 {
    curve.length()
}

/// Area between the curve and the cone. Fails when an endpoint is off its ray.
pub fn area(curve: &DiscreteCurve, cone: &Cone) -> Result<f64, GeometryError> {
    let tol = ON_RAY_TOL * curve.length();
    let n = curve.segments();
    for (ray, p) in [(Ray::First, curve.nodes[0]), (Ray::Second, curve.nodes[n])] {
        let distance = cone.distance_to_ray(ray, p);
        if distance > tol {
            return Err(GeometryError::BoundaryViolation { end: ray, distance });
        }
    }
    Ok(polygon_area(&curve.nodes))
}

/// Arclength mean of a nodal table.
pub fn mean_value(curve: &DiscreteCurve, values: &[f64]) -> f64 {
    curve.integrate(values) / curve.length()
}

/// `L * int (f - mean f)^2 ds` for a nodal table.
pub fn oscillation_of(curve: &DiscreteCurve, values: &[f64]) -> f64 {
    let mean = mean_value(curve, values);
    let dev: f64 = curve
        .weights()
        .iter()
        .zip(values)
        .map(|(w, v)| w * (v - mean) * (v - mean))
        .sum();
    curve.length() * dev
}

pub fn average_curvature(curve: &DiscreteCurve) -> f64 {
    mean_value(curve, curve.k())
}

pub fn oscillation_of_curvature(curve: &DiscreteCurve) -> f64 {
    oscillation_of(curve, curve.k())
}

pub fn rotation_number(curve: &DiscreteCurve) -> f64 {
    curve.integrate(curve.k()) / (2.0 * PI)
}

/// Tip-centred circular arc spanning a cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSpec {
    pub cone: Cone,
    radius: f64,
}

impl ArcSpec {
    pub fn with_radius(cone: Cone, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GeometryError::NonPositiveRadius(radius));
        }
        Ok(ArcSpec { cone, radius })
    }

    /// Arc enclosing the sector area `area`, i.e. `r = sqrt(2 A / phi)`.
    pub fn with_area(cone: Cone, area: f64) -> Result<Self, GeometryError> {
        if !(area > 0.0) || !area.is_finite() {
            return Err(GeometryError::NonPositiveArea(area));
        }
        Self::with_radius(cone, math::sqrt(2.0 * area / cone.opening()))
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn sector_area(&self) -> f64 {
        0.5 * self.radius * self.radius * self.cone.opening()
    }
}

/// Arc with nodes at uniformly spaced angles from `theta1` down to `theta2`.
pub fn make_arc(spec: &ArcSpec, segments: usize) -> Result<DiscreteCurve, GeometryError> {
    if segments < MIN_SEGMENTS {
        return Err(GeometryError::TooFewNodes {
            min: MIN_SEGMENTS + 1,
            got: segments + 1,
        });
    }
    let cone = spec.cone;
    let nodes = (0..=segments)
        .map(|j| {
            let theta = if j == segments {
                cone.theta2()
            } else {
                cone.theta1() - cone.opening() * (j as f64) / (segments as f64)
            };
            Vec2::polar(spec.radius, theta)
        })
        .collect();
    DiscreteCurve::in_cone(nodes, &cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn quarter() -> Cone {
        Cone::new(FRAC_PI_2, 0.0).unwrap()
    }

    #[test]
    fn cone_rejects_bad_angles() {
        assert!(Cone::new(3.5, 0.0).is_err());
        assert!(Cone::new(1.0, 1.0).is_err());
        assert!(Cone::new(1.0, -0.1).is_err());
        assert!(Cone::new(PI, 0.0).is_err());
        assert!(Cone::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn inward_normals_point_into_cone() {
        let cone = Cone::new(2.0, 0.5).unwrap();
        let mid = Vec2::polar(1.0, 1.25);
        for ray in [Ray::First, Ray::Second] {
            let e = cone.inward_normal(ray);
            assert!(e.dot(cone.direction(ray)).abs() < 1e-15);
            assert!(e.dot(mid) > 0.0);
        }
    }

    #[test]
    fn straight_segment_has_zero_curvature() {
        let nodes = (0..9).map(|i| Vec2::new(1.0 + i as f64, 0.0)).collect();
        let c = DiscreteCurve::new(nodes).unwrap();
        for &k in c.k() {
            assert!(k.abs() < 1e-15);
        }
    }

    #[test]
    fn straight_segment_length_is_exact() {
        let nodes = (0..=10).map(|i| Vec2::new(1.0 + 0.1 * i as f64, 0.0)).collect();
        let c = DiscreteCurve::new(nodes).unwrap();
        assert!((length(&c) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_and_degenerate_input() {
        let few: Vec<Vec2> = (0..8).map(|i| Vec2::new(i as f64, 0.0)).collect();
        assert!(matches!(
            DiscreteCurve::new(few),
            Err(GeometryError::TooFewNodes { .. })
        ));
        let mut dup: Vec<Vec2> = (0..12).map(|i| Vec2::new(i as f64, 0.0)).collect();
        dup[5] = dup[4];
        assert_eq!(
            DiscreteCurve::new(dup),
            Err(GeometryError::DegenerateSegment { index: 4 })
        );
    }

    #[test]
    fn unit_arc_curvature_and_frame() {
        let spec = ArcSpec::with_radius(quarter(), 1.0).unwrap();
        let c = make_arc(&spec, 200).unwrap();
        let ds = c.mean_spacing();
        for j in 0..=200 {
            assert!((c.k()[j] - 1.0).abs() < ds * ds, "k[{j}] = {}", c.k()[j]);
            assert!((c.tau()[j].norm() - 1.0).abs() < 1e-14);
            assert!(c.tau()[j].dot(c.nu()[j]).abs() < 1e-15);
            // outward normal on a tip-centred arc
            assert!(c.nu()[j].dot(c.nodes()[j].normalized()) > 1.0 - ds * ds);
        }
        assert!((length(&c) - FRAC_PI_2).abs() < ds * ds);
        assert!((area(&c, &quarter()).unwrap() - PI / 4.0).abs() < ds * ds);
    }

    #[test]
    fn arc_radius_two_third_of_pi() {
        let cone = Cone::new(PI / 3.0, 0.0).unwrap();
        let c = make_arc(&ArcSpec::with_radius(cone, 2.0).unwrap(), 100).unwrap();
        let ds = c.mean_spacing();
        assert!((c.s()[100] - 2.0 * PI / 3.0).abs() < ds * ds);
        assert!((area(&c, &cone).unwrap() - 2.0 * PI / 3.0).abs() < ds * ds);
        assert!((average_curvature(&c) - 0.5).abs() < ds * ds);
    }

    #[test]
    fn area_rejects_endpoint_off_ray() {
        let cone = quarter();
        let c = make_arc(&ArcSpec::with_radius(cone, 1.0).unwrap(), 32).unwrap();
        let mut nodes = c.nodes().to_vec();
        nodes[0].x += 1e-3;
        let free = DiscreteCurve::new(nodes).unwrap();
        assert!(matches!(
            area(&free, &cone),
            Err(GeometryError::BoundaryViolation { end: Ray::First, .. })
        ));
    }

    #[test]
    fn area_from_sector_inverts() {
        let spec = ArcSpec::with_area(quarter(), PI / 4.0).unwrap();
        assert!((spec.radius() - 1.0).abs() < 1e-15);
        assert!(ArcSpec::with_radius(quarter(), 0.0).is_err());
        assert!(ArcSpec::with_radius(quarter(), -1.0).is_err());
    }

    #[test]
    fn small_arc_rotation_number_and_kosc() {
        let c = make_arc(&ArcSpec::with_radius(quarter(), 1.0).unwrap(), 16).unwrap();
        let ds = c.mean_spacing();
        assert!((rotation_number(&c) - 0.25).abs() < ds * ds);
        assert!(oscillation_of_curvature(&c) < 1e-24);
    }

    #[test]
    fn regular_polygon_curvature_is_constant_including_ends() {
        let c = make_arc(&ArcSpec::with_radius(quarter(), 3.0).unwrap(), 40).unwrap();
        let k0 = c.k()[0];
        for &k in c.k() {
            assert!((k - k0).abs() < 1e-12 * k0);
        }
    }

    #[test]
    fn synthetic_mode_averages_to_zero() {
        let nodes = (0..=64).map(|i| Vec2::new(i as f64 / 64.0, 0.0)).collect();
        let c = DiscreteCurve::new(nodes).unwrap();
        let l = c.length();
        let table: Vec<f64> = c
            .s()
            .iter()
            .map(|&s| 2.0 + 0.3 * math::cos(PI * s / l))
            .collect();
        assert!((mean_value(&c, &table) - 2.0).abs() < 1e-15);
    }
}
