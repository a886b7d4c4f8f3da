use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::shear::ShearConfig;

/// `re + eps·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub fn constant(re: f64) -> Self {
        Self { re, eps: 0.0 }
    }

    pub fn variable(re: f64) -> Self {
        Self { re, eps: 1.0 }
    }

    pub fn exp(self) -> Self {
        let e = self.re.exp();
        Self {
            re: e,
            eps: self.eps * e,
        }
    }

    pub fn abs(self) -> Self {
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Defined for `re > 1`.
    pub fn acosh(self) -> Self {
        Self {
            re: self.re.acosh(),
            eps: self.eps / ((self.re - 1.0).sqrt() * (self.re + 1.0).sqrt()),
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            re: self.re * k,
            eps: self.eps * k,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            re: self.re + o.re,
            eps: self.eps + o.eps,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            re: self.re - o.re,
            eps: self.eps - o.eps,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            re: self.re * o.re,
            eps: self.re * o.eps + self.eps * o.re,
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

type DualMatrix = [[Dual; 2]; 2];

fn mat_mul(a: &DualMatrix, b: &DualMatrix) -> DualMatrix {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn lift(m: [[f64; 2]; 2]) -> DualMatrix {
    m.map(|row| row.map(Dual::constant))
}

/// Exact first derivative of `t ↦ ℓ(ρ_t)` at `t`, carried through the
/// product of translation matrices and the arccosh of the trace.
pub fn dual_derivative_at(config: &ShearConfig, t: f64) -> Result<f64> {
    let mut acc = lift([[1.0, 0.0], [0.0, 1.0]]);
    for leaf in config.leaves() {
        let frame = leaf.geodesic.frame();
        let half = Dual {
            re: t * leaf.weight / 2.0,
            eps: leaf.weight / 2.0,
        };
        let zero = Dual::constant(0.0);
        let diag = [[half.exp(), zero], [zero, (-half).exp()]];
        let moved = mat_mul(&mat_mul(&lift(frame.matrix()), &diag), &lift(frame.inverse().matrix()));
        acc = mat_mul(&acc, &moved);
    }
    acc = mat_mul(&acc, &lift(config.gamma().matrix()));
    let trace = (acc[0][0] + acc[1][1]).abs();
    if trace.re <= 2.0 + 1e-8 {
        return Err(Error::TraceTooClose { trace: trace.re });
    }
    Ok(trace.scale(0.5).acosh().scale(2.0).eps)
}

pub fn dual_derivative(config: &ShearConfig) -> Result<f64> {
    dual_derivative_at(config, 0.0)
}
