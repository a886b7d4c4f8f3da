use crate::error::{Error, Result};

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorPoint {
    pub x: f64,
    pub y: f64,
}

impl InteriorPoint {
    pub const I: InteriorPoint = InteriorPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "({x}, {y}) is not in the upper half-plane"
            )));
        }
        Ok(Self { x, y })
    }
}

/// Hyperbolic distance, written with asinh to stay accurate for close points.
pub fn point_distance(p: &InteriorPoint, q: &InteriorPoint) -> f64 {
    let chord = (p.x - q.x).hypot(p.y - q.y);
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}
