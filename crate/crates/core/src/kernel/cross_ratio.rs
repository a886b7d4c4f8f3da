use super::BoundaryPoint;
use crate::error::{Error, Result};

/// The six classical cross-ratio conventions, named after the value each
/// takes at `(p, q, r, s) = (0, 1, ∞, x)`.
///
/// With `λ = (p−r)(q−s) / ((p−s)(q−r))` they are `λ, 1/λ, 1−λ, 1/(1−λ),
/// (λ−1)/λ, λ/(λ−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `(x − 1) / x`
    Lambda,
    /// `x / (x − 1)`
    InverseLambda,
    /// `1 / x`
    OneMinusLambda,
    /// `x`
    InverseOneMinusLambda,
    /// `1 / (1 − x)`
    LambdaMinusOneOverLambda,
    /// `1 − x`
    LambdaOverLambdaMinusOne,
}

impl Convention {
    pub const ALL: [Convention; 6] = [
        Convention::Lambda,
        Convention::InverseLambda,
        Convention::OneMinusLambda,
        Convention::InverseOneMinusLambda,
        Convention::LambdaMinusOneOverLambda,
        Convention::LambdaOverLambdaMinusOne,
    ];

    pub fn evaluate(self, p: &BoundaryPoint, q: &BoundaryPoint, r: &BoundaryPoint, s: &BoundaryPoint) -> Result<f64> {
        let pts = [p, q, r, s];
        for i in 0..4 {
            for j in i + 1..4 {
                if pts[i].approx_eq(pts[j], 0.0) {
                    return Err(Error::DegeneratePoints);
                }
            }
        }
        let num = p.wedge(r) * q.wedge(s);
        let den = p.wedge(s) * q.wedge(r);
        // 1 − λ in the same wedge form: (p−q)(r−s) / ((p−s)(r−q)), no cancellation.
        let co = p.wedge(q) * r.wedge(s) / (p.wedge(s) * r.wedge(q));
        let lambda = num / den;
        Ok(match self {
            Convention::Lambda => lambda,
            Convention::InverseLambda => den / num,
            Convention::OneMinusLambda => co,
            Convention::InverseOneMinusLambda => 1.0 / co,
            Convention::LambdaMinusOneOverLambda => -co / lambda,
            Convention::LambdaOverLambdaMinusOne => -lambda / co,
        })
    }
}

/// The convention used throughout: with `(p, s)` the endpoints of one
/// geodesic and `(q, r)` those of another,
///
/// * crossing geodesics give `cos²(θ/2)`, θ the angle from `p→s` to `q→r`;
/// * disjoint ones give `−sinh²(d/2)` when `p, s, q, r` run in cyclic order.
pub const CROSS_RATIO_CONVENTION: Convention = Convention::Lambda;

/// `[p, q, r, s] = (p−r)(q−s) / ((p−s)(q−r))`
pub fn cross_ratio(p: &BoundaryPoint, q: &BoundaryPoint, r: &BoundaryPoint, s: &BoundaryPoint) -> Result<f64> {
    CROSS_RATIO_CONVENTION.evaluate(p, q, r, s)
}
