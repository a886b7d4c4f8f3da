use super::{BoundaryPoint, InteriorPoint, Isometry};
use crate::error::{Error, Result};

/// Two endpoints closer than this (chordally) are treated as one point.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Points farther than this from a geodesic are rejected as off it.
pub const ON_GEODESIC_TOL: f64 = 1e-9;

/// An oriented geodesic, from `source` to `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    source: BoundaryPoint,
    target: BoundaryPoint,
}

/// Where and how a transverse geodesic meets an oriented one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub point: InteriorPoint,
    /// Angle in (0, π) from the oriented geodesic to the transverse one,
    /// the latter oriented to point left.
    pub theta: f64,
    pub cos: f64,
    pub sin: f64,
    /// Whether the transverse geodesic already pointed left as given.
    pub points_left: bool,
}

impl Geodesic {
    pub fn new(source: BoundaryPoint, target: BoundaryPoint) -> Result<Self> {
        if source.approx_eq(&target, ENDPOINT_TOL) {
            return Err(Error::DegeneratePoints);
        }
        Ok(Self { source, target })
    }

    /// Geodesic between two points of the extended real line.
    pub fn between(source: f64, target: f64) -> Result<Self> {
        Self::new(BoundaryPoint::real(source), BoundaryPoint::real(target))
    }

    pub(crate) fn from_parts(source: BoundaryPoint, target: BoundaryPoint) -> Self {
        Self { source, target }
    }

    pub fn source(&self) -> BoundaryPoint {
        self.source
    }

    pub fn target(&self) -> BoundaryPoint {
        self.target
    }

    pub fn reverse(&self) -> Self {
        Self {
            source: self.target,
            target: self.source,
        }
    }

    /// The isometry taking `(0 -> ∞)` onto this geodesic.
    ///
    /// Its image of `i` is the reference point from which arc length along
    /// the geodesic is measured when no other base is given.
    pub fn frame(&self) -> Isometry {
        let (ta, tb) = self.target.coords();
        let (mut sa, mut sb) = self.source.coords();
        if ta * sb - sa * tb < 0.0 {
            sa = -sa;
            sb = -sb;
        }
        Isometry::new([[ta, sa], [tb, sb]]).expect("distinct endpoints give a nonsingular frame")
    }

    pub fn point_at(&self, s: f64) -> InteriorPoint {
        self.frame().apply_point(&InteriorPoint { x: 0.0, y: s.exp() })
    }

    /// Hyperbolic distance from `p` to the geodesic.
    pub fn distance_to_point(&self, p: &InteriorPoint) -> f64 {
        let q = self.frame().inverse().apply_point(p);
        (q.x.abs() / q.y).asinh()
    }

    /// Nearest point of the geodesic to `p`.
    pub fn foot(&self, p: &InteriorPoint) -> InteriorPoint {
        let w = self.frame();
        let q = w.inverse().apply_point(p);
        w.apply_point(&InteriorPoint {
            x: 0.0,
            y: q.x.hypot(q.y),
        })
    }

    /// Euclidean direction of the oriented tangent at `p`, assumed on the
    /// geodesic, as an angle from the positive real axis.
    pub fn tangent_angle_at(&self, p: &InteriorPoint) -> f64 {
        let w = self.frame();
        let q = w.inverse().apply_point(p);
        let m = w.matrix();
        // arg of the derivative 1/(c z + d)^2 at z = i·|q|
        let (re, im) = (m[1][1], m[1][0] * q.x.hypot(q.y));
        std::f64::consts::FRAC_PI_2 - 2.0 * im.atan2(re)
    }

    /// Whether the endpoints of `other` separate those of `self` on the circle.
    pub fn links(&self, other: &Self) -> bool {
        let (p1, p2, q1, q2) = (self.source, self.target, other.source, other.target);
        let lambda = p1.wedge(&q1) * p2.wedge(&q2) / (p1.wedge(&q2) * p2.wedge(&q1));
        lambda < 0.0
    }

    pub fn shares_endpoint(&self, other: &Self) -> bool {
        [self.source, self.target].iter().any(|p| {
            p.approx_eq(&other.source, ENDPOINT_TOL) || p.approx_eq(&other.target, ENDPOINT_TOL)
        })
    }

    pub fn same_line(&self, other: &Self) -> bool {
        let direct = self.source.approx_eq(&other.source, ENDPOINT_TOL)
            && self.target.approx_eq(&other.target, ENDPOINT_TOL);
        direct
            || (self.source.approx_eq(&other.target, ENDPOINT_TOL)
                && self.target.approx_eq(&other.source, ENDPOINT_TOL))
    }

    /// Reoriented so it points left when crossed by `by`.
    pub fn pointing_left_of(&self, by: &Geodesic) -> Self {
        match intersect(by, self) {
            Ok(Some(c)) if !c.points_left => self.reverse(),
            _ => *self,
        }
    }

    /// Endpoints of `self` in the frame of `g`, as affine coordinates.
    fn endpoints_in_frame(&self, g: &Geodesic) -> (f64, f64) {
        let w = g.frame().inverse();
        (
            w.apply_boundary(&self.source).to_real(),
            w.apply_boundary(&self.target).to_real(),
        )
    }
}

/// Intersection of `h` with the oriented geodesic `g`, if any.
///
/// The angle is measured from `g` to `h` after `h` is oriented to point left
/// of `g`, so it always lies in (0, π) and `cos` carries the sign.
pub fn intersect(g: &Geodesic, h: &Geodesic) -> Result<Option<Crossing>> {
    if g.shares_endpoint(h) {
        return Err(Error::SharedEndpoint);
    }
    let (u, v) = h.endpoints_in_frame(g);
    if u * v >= 0.0 {
        return Ok(None);
    }
    let (src, tgt) = if u > 0.0 { (u, v) } else { (v, u) };
    let c = (src + tgt) / 2.0;
    let r = (src - tgt) / 2.0;
    let y = (-src * tgt).sqrt();
    let (cos, sin) = (-c / r, y / r);
    Ok(Some(Crossing {
        point: g.frame().apply_point(&InteriorPoint { x: 0.0, y }),
        theta: sin.atan2(cos),
        cos,
        sin,
        points_left: u > 0.0,
    }))
}

/// Distance between two disjoint, non-asymptotic geodesics.
pub fn geodesic_distance(g: &Geodesic, h: &Geodesic) -> Result<f64> {
    let (u, v) = disjoint_in_frame(g, h)?;
    Ok(2.0 * (u / v).sqrt().atanh())
}

/// Feet `(a, a')` of the common perpendicular, `a` on `g` and `a'` on `h`.
pub fn common_perpendicular(g: &Geodesic, h: &Geodesic) -> Result<(InteriorPoint, InteriorPoint)> {
    let (u, v) = disjoint_in_frame(g, h)?;
    let (ends, _) = h.endpoints_in_frame(g);
    let side = ends.signum();
    let radius = (u * v).sqrt();
    let x = 2.0 * u * v / (u + v);
    let y = (radius - x).sqrt() * (radius + x).sqrt();
    let w = g.frame();
    Ok((
        w.apply_point(&InteriorPoint { x: 0.0, y: radius }),
        w.apply_point(&InteriorPoint { x: side * x, y }),
    ))
}

/// Endpoints of `h` in the frame of `g`, folded to `0 < u < v`.
fn disjoint_in_frame(g: &Geodesic, h: &Geodesic) -> Result<(f64, f64)> {
    if g.shares_endpoint(h) {
        return Err(Error::SharedEndpoint);
    }
    let (u, v) = h.endpoints_in_frame(g);
    if u * v < 0.0 {
        return Err(Error::Intersecting);
    }
    let (u, v) = (u.abs(), v.abs());
    Ok((u.min(v), u.max(v)))
}

/// The geodesic through two distinct interior points, oriented from `p` to `q`.
pub fn geodesic_through(p: &InteriorPoint, q: &InteriorPoint) -> Result<Geodesic> {
    let dx = q.x - p.x;
    let scale = p.y.max(q.y);
    let g = if dx.abs() <= 1e-14 * scale {
        if (q.y - p.y).abs() <= 1e-14 * scale {
            return Err(Error::DegeneratePoints);
        }
        Geodesic::between(p.x, f64::INFINITY)?
    } else {
        let c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * dx);
        let r = (p.x - c).hypot(p.y);
        Geodesic::between(c - r, c + r)?
    };
    let base = g.point_at(0.0);
    if signed_position(&g, q, &base)? < signed_position(&g, p, &base)? {
        Ok(g.reverse())
    } else {
        Ok(g)
    }
}

/// Midpoint of the segment `[p, q]`.
pub fn midpoint(p: &InteriorPoint, q: &InteriorPoint) -> Result<InteriorPoint> {
    let g = geodesic_through(p, q)?;
    let base = g.point_at(0.0);
    let (sp, sq) = (signed_position(&g, p, &base)?, signed_position(&g, q, &base)?);
    Ok(g.point_at((sp + sq) / 2.0))
}

/// Signed arc length from `base` to `p` along `g`, positive toward the target.
pub fn signed_position(g: &Geodesic, p: &InteriorPoint, base: &InteriorPoint) -> Result<f64> {
    let w = g.frame().inverse();
    let (p, base) = (w.apply_point(p), w.apply_point(base));
    for q in [&p, &base] {
        let distance = (q.x.abs() / q.y).asinh();
        if distance > ON_GEODESIC_TOL {
            return Err(Error::PointOffGeodesic { distance });
        }
    }
    let (rp, rb) = (p.x.hypot(p.y), base.x.hypot(base.y));
    Ok((rp / rb).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::point_distance;
    use std::f64::consts::{E, FRAC_PI_2, SQRT_2};

    fn g(a: f64, b: f64) -> Geodesic {
        Geodesic::between(a, b).unwrap()
    }

    #[test]
    fn reverse_twice_is_identity() {
        let h = g(-1.0, 3.0);
        assert_eq!(h.reverse().reverse(), h);
    }

    #[test]
    fn equal_endpoints_rejected() {
        assert_eq!(Geodesic::between(1.0, 1.0), Err(Error::DegeneratePoints));
    }

    #[test]
    fn perpendicular_crossing() {
        let axis = g(0.0, f64::INFINITY);
        let c = intersect(&axis, &g(-1.0, 1.0)).unwrap().unwrap();
        assert!((c.theta - FRAC_PI_2).abs() < 1e-15);
        assert!((c.point.y - 1.0).abs() < 1e-15 && c.point.x.abs() < 1e-15);
        assert!(!c.points_left);
        let r = intersect(&axis, &g(1.0, -1.0)).unwrap().unwrap();
        assert!((r.theta - FRAC_PI_2).abs() < 1e-15);
        assert!(r.points_left);
    }

    #[test]
    fn oblique_crossing() {
        let c = intersect(&g(0.0, f64::INFINITY), &g(-1.0, 2.0)).unwrap().unwrap();
        assert!((c.point.y - SQRT_2).abs() < 1e-15);
        // Left-pointing orientation is 2 -> -1: centre 1/2, radius 3/2.
        assert!((c.cos + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shared_endpoint_is_an_error() {
        assert_eq!(
            geodesic_distance(&g(0.0, 1.0), &g(0.0, 2.0)),
            Err(Error::SharedEndpoint)
        );
        assert_eq!(
            intersect(&g(0.0, 1.0), &g(0.0, 2.0)),
            Err(Error::SharedEndpoint)
        );
    }

    #[test]
    fn disjoint_pair_does_not_intersect() {
        assert_eq!(intersect(&g(-2.0, -1.0), &g(1.0, 2.0)), Ok(None));
        assert_eq!(
            geodesic_distance(&g(0.0, f64::INFINITY), &g(-1.0, 1.0)),
            Err(Error::Intersecting)
        );
    }

    #[test]
    fn symmetric_perpendicular() {
        let (a, b) = common_perpendicular(&g(-2.0, -1.0), &g(1.0, 2.0)).unwrap();
        assert!((a.x + b.x).abs() < 1e-14 && (a.y - b.y).abs() < 1e-14);
        let d = geodesic_distance(&g(-2.0, -1.0), &g(1.0, 2.0)).unwrap();
        assert!((point_distance(&a, &b) - d).abs() < 1e-12);
    }

    #[test]
    fn positions_along_axis() {
        let axis = g(0.0, f64::INFINITY);
        let e = InteriorPoint::new(0.0, E).unwrap();
        let s = signed_position(&axis, &e, &InteriorPoint::I).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        assert_eq!(signed_position(&axis, &e, &e).unwrap(), 0.0);
        let off = InteriorPoint::new(1.0, 1.0).unwrap();
        assert!(matches!(
            signed_position(&axis, &off, &e),
            Err(Error::PointOffGeodesic { .. })
        ));
    }

    #[test]
    fn point_at_round_trips() {
        let h = g(-3.0, 0.5);
        let base = h.point_at(0.0);
        let p = h.point_at(1.7);
        assert!((signed_position(&h, &p, &base).unwrap() - 1.7).abs() < 1e-13);
        assert!(h.distance_to_point(&p) < 1e-14);
    }

    #[test]
    fn midpoint_is_equidistant() {
        let p = InteriorPoint::new(-1.0, 0.5).unwrap();
        let q = InteriorPoint::new(2.0, 1.5).unwrap();
        let m = midpoint(&p, &q).unwrap();
        let (a, b) = (point_distance(&p, &m), point_distance(&m, &q));
        assert!((a - b).abs() < 1e-12);
        assert!((a + b - point_distance(&p, &q)).abs() < 1e-12);
        let v = midpoint(&InteriorPoint::I, &InteriorPoint::new(0.0, 4.0).unwrap()).unwrap();
        assert!((v.y - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tangent_of_imaginary_axis_points_up() {
        let axis = g(0.0, f64::INFINITY);
        let a = axis.tangent_angle_at(&InteriorPoint::I);
        assert!((a - FRAC_PI_2).abs() < 1e-15);
        let c = g(1.0, -1.0);
        assert!((c.tangent_angle_at(&InteriorPoint::I) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn foot_is_on_geodesic() {
        let h = g(-3.0, 0.5);
        let p = InteriorPoint::new(2.0, 0.3).unwrap();
        let f = h.foot(&p);
        assert!(h.distance_to_point(&f) < 1e-13);
        let d = point_distance(&p, &f);
        assert!((d - h.distance_to_point(&p)).abs() < 1e-12);
    }
}
