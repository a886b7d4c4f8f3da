use crate::error::Result;
use crate::kernel::{intersect, Geodesic};
use crate::shear::{spiral_config, SpiralConfig, SpiralWeights};
use crate::sum::pairwise;

#[derive(Debug, Clone, PartialEq)]
pub struct SpiralParams {
    pub length: f64,
    /// Feet of the two left seed leaves, `x0 < x1 < 0`.
    pub x0: f64,
    pub x1: f64,
    pub weights: SpiralWeights,
    pub n: usize,
    /// Geodesic crossing every leaf, along which `cos θ` is integrated.
    /// Defaults to the one from `2·x0` to `−2·x0`.
    pub probe: Option<Geodesic>,
}

impl SpiralParams {
    /// Unit masses on both sides, gaps shrinking by `ratio` per leaf.
    pub fn geometric(ratio: f64, n: usize) -> Self {
        Self {
            length: -2.0 * ratio.ln(),
            x0: -1.0,
            x1: -ratio,
            weights: SpiralWeights {
                p_masses: vec![1.0; n + 1],
                q_masses: vec![1.0; n + 1],
                total: 0.0,
            },
            n,
            probe: None,
        }
    }

    pub fn build(&self) -> Result<SpiralConfig> {
        let g0 = Geodesic::between(self.x0, f64::INFINITY)?;
        let g1 = Geodesic::between(self.x1, f64::INFINITY)?;
        spiral_config(self.length, &g0, &g1, self.weights.clone(), self.n + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceTrace {
    pub index: usize,
    /// Distance between consecutive partial products, up to sign.
    pub matrix_delta: f64,
    /// `∫ cos θ dα_n` along the probe.
    pub derivative_value: f64,
    /// Slope of `ln(delta)` against the index, shared by the whole run;
    /// `None` when fewer than two deltas are positive.
    pub fitted_rate: Option<f64>,
}

/// Partial products of the spiralling example for `index = 1..=n`.
pub fn spiral_convergence(params: &SpiralParams) -> Result<Vec<ConvergenceTrace>> {
    let config = params.build()?;
    let probe = match params.probe {
        Some(p) => p,
        None => Geodesic::between(2.0 * params.x0, -2.0 * params.x0)?,
    };
    let mut out = Vec::with_capacity(params.n);
    for m in 1..=params.n {
        let here = config.interleaved(m).to_isometry();
        let next = config.interleaved(m + 1).to_isometry();
        let mut terms = Vec::new();
        for (foot, mass) in config.interleaved_masses(m) {
            let leaf = Geodesic::between(foot, f64::INFINITY)?;
            if let Some(c) = intersect(&probe, &leaf)? {
                terms.push(mass * c.cos);
            }
        }
        out.push(ConvergenceTrace {
            index: m,
            matrix_delta: here.distance(&next),
            derivative_value: pairwise(&terms),
            fitted_rate: None,
        });
    }
    let rate = fitted_rate(&out);
    for t in &mut out {
        t.fitted_rate = rate;
    }
    Ok(out)
}

fn fitted_rate(traces: &[ConvergenceTrace]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = traces
        .iter()
        .filter(|t| t.matrix_delta > 0.0)
        .map(|t| (t.index as f64, t.matrix_delta.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
