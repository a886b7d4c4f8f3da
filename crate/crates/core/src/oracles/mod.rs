//! Independent ways of computing the derivatives the closed forms predict.

mod dual;
mod fd;
mod spiral;

pub use dual::{dual_derivative, dual_derivative_at, Dual};
pub use fd::{fd_derivative, FdEstimate, FdSpec};
pub use spiral::{spiral_convergence, ConvergenceTrace, SpiralParams};

use crate::derivatives::WeightedMulticurve;
use crate::error::Result;
use crate::shear::{deformed_crossings, deformed_length, ShearConfig};

/// Finite-difference derivative of `t ↦ ℓ(ρ_t)` at 0.
///
/// Refuses to run if a crossing is lost anywhere within the stencil's reach,
/// so the samples never straddle a change of combinatorics.
pub fn length_fd(config: &ShearConfig, spec: &FdSpec) -> Result<FdEstimate> {
    for t in [spec.reach(), -spec.reach()] {
        deformed_crossings(config, t)?;
    }
    fd_derivative(|t| deformed_length(config, t).unwrap_or(f64::NAN), spec)
}

/// Same for `t ↦ Σ μ_k ℓ_k(t)`.
pub fn multicurve_length_fd(mc: &WeightedMulticurve, spec: &FdSpec) -> Result<FdEstimate> {
    for (c, _) in mc.components() {
        for t in [spec.reach(), -spec.reach()] {
            deformed_crossings(c, t)?;
        }
    }
    fd_derivative(
        |t| {
            mc.components()
                .iter()
                .map(|(c, mu)| mu * deformed_length(c, t).unwrap_or(f64::NAN))
                .sum()
        },
        spec,
    )
}
