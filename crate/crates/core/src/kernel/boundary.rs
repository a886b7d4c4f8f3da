use crate::error::{Error, Result};

/// A point of the circle at infinity, stored as a projective pair `(a, b)`
/// standing for `a / b`.
///
/// The pair is kept on the unit circle with its first nonzero coordinate
/// positive, so every point has exactly one representative and infinity is
/// just `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    a: f64,
    b: f64,
}

impl BoundaryPoint {
    pub const INFINITY: BoundaryPoint = BoundaryPoint { a: 1.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || (a == 0.0 && b == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "projective pair ({a}, {b}) is not a boundary point"
            )));
        }
        Ok(Self::normalized(a, b))
    }

    /// The point `x` of the real line; `f64::INFINITY` (either sign) gives ∞.
    pub fn real(x: f64) -> Self {
        if x.is_infinite() {
            Self::INFINITY
        } else {
            Self::normalized(x, 1.0)
        }
    }

    pub(crate) fn normalized(a: f64, b: f64) -> Self {
        let n = a.hypot(b);
        let (mut a, mut b) = (a / n, b / n);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            a = -a;
            b = -b;
        }
        Self { a: a + 0.0, b: b + 0.0 }
    }

    pub fn coords(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn is_infinite(&self) -> bool {
        self.b == 0.0
    }

    /// Affine coordinate; `f64::INFINITY` for the point at infinity.
    pub fn to_real(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.a / self.b
        }
    }

    /// Determinant of the two representatives. Zero iff the points coincide.
    pub fn wedge(&self, other: &Self) -> f64 {
        self.a * other.b - self.b * other.a
    }

    /// Equality up to `tol` in the projective (chordal) sense.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.wedge(other).abs() <= tol
    }
}
