use std::ops::Mul;

use super::{BoundaryPoint, Geodesic, InteriorPoint};
use crate::error::{Error, Result};

/// Tolerance on `||trace| - 2|` used by [`Isometry::classify`].
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// An orientation-preserving isometry of the upper half-plane, i.e. an
/// element of PSL(2,R).
///
/// The matrix always has determinant 1 and its first nonzero entry of the
/// first row is positive, which picks one of the two lifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [[f64; 2]; 2],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Rescales to determinant 1. Fails on a nonpositive determinant.
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det > 0.0 && det.is_finite()) || m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "matrix {m:?} does not define an orientation-preserving isometry"
            )));
        }
        Ok(Self::from_positive_det(m, det))
    }

    fn from_positive_det(m: [[f64; 2]; 2], det: f64) -> Self {
        let mut k = 1.0 / det.sqrt();
        if m[0][0] < 0.0 || (m[0][0] == 0.0 && m[0][1] < 0.0) {
            k = -k;
        }
        let s = |v: f64| v * k + 0.0;
        Self {
            m: [[s(m[0][0]), s(m[0][1])], [s(m[1][0]), s(m[1][1])]],
        }
    }

    pub fn diagonal(lambda: f64) -> Self {
        Self::from_positive_det([[lambda, 0.0], [0.0, 1.0 / lambda]], 1.0)
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (&self.m, &other.m);
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Self::from_positive_det(m, det)
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self::from_positive_det([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]], self.det())
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc.compose(&base))
    }

    /// `w * self * w^-1`
    pub fn conjugate_by(&self, w: &Self) -> Self {
        w.compose(self).compose(&w.inverse())
    }

    pub fn apply_boundary(&self, p: &BoundaryPoint) -> BoundaryPoint {
        let (a, b) = p.coords();
        let m = &self.m;
        BoundaryPoint::normalized(m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
    }

    pub fn apply_point(&self, p: &InteriorPoint) -> InteriorPoint {
        let m = &self.m;
        let (nr, ni) = (m[0][0] * p.x + m[0][1], m[0][0] * p.y);
        let (dr, di) = (m[1][0] * p.x + m[1][1], m[1][0] * p.y);
        let den = dr * dr + di * di;
        InteriorPoint {
            x: (nr * dr + ni * di) / den,
            y: p.y / den,
        }
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic::from_parts(self.apply_boundary(&g.source()), self.apply_boundary(&g.target()))
    }

    pub fn classify(&self) -> Kind {
        let tr = self.trace().abs();
        if (tr - 2.0).abs() <= TRACE_TOL {
            let m = &self.m;
            let off = m[0][1].abs().max(m[1][0].abs()).max((m[0][0] - m[1][1]).abs());
            if off <= TRACE_TOL {
                Kind::Identity
            } else {
                Kind::Parabolic
            }
        } else if tr < 2.0 {
            Kind::Elliptic
        } else {
            Kind::Hyperbolic
        }
    }

    fn require_hyperbolic(&self) -> Result<()> {
        match self.classify() {
            Kind::Hyperbolic => Ok(()),
            _ => Err(Error::NotHyperbolic {
                trace: self.trace().abs(),
            }),
        }
    }

    pub fn translation_length(&self) -> Result<f64> {
        self.require_hyperbolic()?;
        Ok(2.0 * (self.trace().abs() / 2.0).acosh())
    }

    /// Axis oriented from the repelling to the attracting fixed point.
    pub fn axis(&self) -> Result<Geodesic> {
        self.require_hyperbolic()?;
        let sign = self.trace().signum();
        let m = self.m.map(|row| row.map(|v| v * sign));
        let tr = m[0][0] + m[1][1];
        let root = (tr * tr - 4.0).sqrt();
        let big = (tr + root) / 2.0;
        let small = 1.0 / big;
        Ok(Geodesic::from_parts(
            eigenvector(&m, small),
            eigenvector(&m, big),
        ))
    }

    /// Largest entrywise difference, minimized over the sign ambiguity.
    pub fn distance(&self, other: &Self) -> f64 {
        let diff = |s: f64| {
            self.m
                .iter()
                .flatten()
                .zip(other.m.iter().flatten())
                .map(|(a, b)| (a - s * b).abs())
                .fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

fn eigenvector(m: &[[f64; 2]; 2], lambda: f64) -> BoundaryPoint {
    // Two candidate kernel vectors of m - lambda; keep the better scaled one.
    let u = (m[0][1], lambda - m[0][0]);
    let v = (lambda - m[1][1], m[1][0]);
    let (a, b) = if u.0.hypot(u.1) >= v.0.hypot(v.1) { u } else { v };
    BoundaryPoint::normalized(a, b)
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl Default for Isometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn diagonal_products() {
        let g = Isometry::diagonal(E);
        assert!(g.compose(&g).approx_eq(&Isometry::diagonal(E * E), 1e-14));
        assert!(Isometry::IDENTITY.compose(&g).approx_eq(&g, 0.0));
        assert!(g.compose(&g.inverse()).approx_eq(&Isometry::IDENTITY, 1e-15));
    }

    #[test]
    fn classification() {
        let (c, s) = ((PI / 6.0).cos(), (PI / 6.0).sin());
        let rot = Isometry::new([[c, s], [-s, c]]).unwrap();
        assert_eq!(rot.classify(), Kind::Elliptic);
        let shift = Isometry::new([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(shift.classify(), Kind::Parabolic);
        assert_eq!(Isometry::IDENTITY.classify(), Kind::Identity);
        assert_eq!(Isometry::diagonal(E).classify(), Kind::Hyperbolic);
    }

    #[test]
    fn translation_length_of_diagonal() {
        assert!((Isometry::diagonal(E).translation_length().unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            Isometry::IDENTITY.translation_length(),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn axis_orientation() {
        let axis = Isometry::diagonal(E).axis().unwrap();
        assert_eq!(axis.source(), BoundaryPoint::real(0.0));
        assert_eq!(axis.target(), BoundaryPoint::INFINITY);
        let back = Isometry::diagonal(E).inverse().axis().unwrap();
        assert_eq!(back.source(), BoundaryPoint::INFINITY);
        assert_eq!(back.target(), BoundaryPoint::real(0.0));
    }

    #[test]
    fn sign_is_canonical() {
        let m = Isometry::new([[-2.0, 0.0], [0.0, -0.5]]).unwrap();
        assert_eq!(m, Isometry::diagonal(2.0));
        assert!(Isometry::new([[1.0, 0.0], [0.0, -1.0]]).is_err());
    }

    #[test]
    fn negative_power_is_inverse() {
        let g = Isometry::new([[2.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(g.pow(-2).compose(&g.pow(2)).approx_eq(&Isometry::IDENTITY, 1e-13));
    }
}
