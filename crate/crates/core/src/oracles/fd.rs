use crate::error::{Error, Result};

/// Central-difference settings for derivatives at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSpec {
    pub order: usize,
    pub h0: f64,
    pub levels: usize,
}

/// Value and tableau-based error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate {
    pub value: f64,
    pub error: f64,
}

impl FdSpec {
    pub fn new(order: usize, h0: f64, levels: usize) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        if !(1e-4..=1e-1).contains(&h0) {
            return Err(Error::InvalidParameter(format!("base step {h0} outside [1e-4, 1e-1]")));
        }
        if levels < 2 {
            return Err(Error::InvalidParameter(format!("{levels} Richardson levels, need 2")));
        }
        Ok(Self { order, h0, levels })
    }

    /// `h0 = 1e-2` with 4 levels for orders 1 and 2, `h0 = 5e-2` with 3
    /// levels for order 3.
    pub fn default_for(order: usize) -> Result<Self> {
        match order {
            1 | 2 => Self::new(order, 1e-2, 4),
            3 => Self::new(order, 5e-2, 3),
            k => Err(Error::UnsupportedOrder(k)),
        }
    }

    /// Largest `|t|` at which `f` is sampled.
    pub fn reach(&self) -> f64 {
        if self.order == 3 {
            2.0 * self.h0
        } else {
            self.h0
        }
    }
}

fn sample(f: &impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample { step: t })
    }
}

fn stencil(f: &impl Fn(f64) -> f64, order: usize, h: f64) -> Result<f64> {
    Ok(match order {
        1 => (sample(f, h)? - sample(f, -h)?) / (2.0 * h),
        2 => (sample(f, h)? - 2.0 * sample(f, 0.0)? + sample(f, -h)?) / (h * h),
        _ => {
            (sample(f, 2.0 * h)? - 2.0 * sample(f, h)? + 2.0 * sample(f, -h)? - sample(f, -2.0 * h)?)
                / (2.0 * h * h * h)
        }
    })
}

/// Derivative of `f` at 0 by central differences, Richardson-extrapolated
/// over step halvings. Every stencil used here has an error expansion in
/// even powers of `h`, so each column removes one power of 4.
pub fn fd_derivative(f: impl Fn(f64) -> f64, spec: &FdSpec) -> Result<FdEstimate> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(spec.levels);
    let mut h = spec.h0;
    for i in 0..spec.levels {
        let mut row = vec![stencil(&f, spec.order, h)?];
        for j in 1..=i {
            let p = 4f64.powi(j as i32);
            row.push((p * row[j - 1] - rows[i - 1][j - 1]) / (p - 1.0));
        }
        rows.push(row);
        h /= 2.0;
    }
    let last = &rows[spec.levels - 1];
    let prev = &rows[spec.levels - 2];
    let value = last[spec.levels - 1];
    let error = (value - last[spec.levels - 2])
        .abs()
        .max((value - prev[spec.levels - 2]).abs());
    Ok(FdEstimate { value, error })
}
