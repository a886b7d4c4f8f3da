//! Geometry of the upper half-plane: boundary points, geodesics, isometries.

mod boundary;
mod cross_ratio;
mod geodesic;
mod isometry;
mod point;

pub use boundary::BoundaryPoint;
pub use cross_ratio::{cross_ratio, Convention, CROSS_RATIO_CONVENTION};
pub use geodesic::{
    common_perpendicular, geodesic_distance, geodesic_through, intersect, midpoint, signed_position,
    Crossing, Geodesic,
    ENDPOINT_TOL, ON_GEODESIC_TOL,
};
pub use isometry::{Isometry, Kind, TRACE_TOL};
pub use point::{point_distance, InteriorPoint};

/// `T^u_g`: translation by signed length `u` along the oriented geodesic `g`.
pub fn translate_along(g: &Geodesic, u: f64) -> Isometry {
    if u == 0.0 {
        return Isometry::IDENTITY;
    }
    Isometry::diagonal((u / 2.0).exp()).conjugate_by(&g.frame())
}
