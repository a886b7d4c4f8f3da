//! Shear deformations of hyperbolic structures, computed in the upper
//! half-plane, together with closed-form derivatives of length functions and
//! independent numerical oracles to check them against.

#![allow(clippy::needless_range_loop)]

pub mod derivatives;
pub mod error;
pub mod hessian;
pub mod kernel;
pub mod oracles;
pub mod sample;
pub mod shear;
pub mod sum;
pub mod twist;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    struct Overview;
    #[doc = include_str!("../../../book/src/geometry.md")]
    struct Geometry;
    #[doc = include_str!("../../../book/src/shear.md")]
    struct Shear;
    #[doc = include_str!("../../../book/src/derivatives.md")]
    struct Derivatives;
    #[doc = include_str!("../../../book/src/hessian.md")]
    struct Hessian;
    #[doc = include_str!("../../../book/src/twist.md")]
    struct Twist;
    #[doc = include_str!("../../../book/src/spiral.md")]
    struct Spiral;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
}
