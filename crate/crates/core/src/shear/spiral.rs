//! Leaves spiralling onto a closed geodesic, seen in the universal cover.
//!
//! The axis is the imaginary axis and `γ(z) = e^L z`. On the left, the
//! vertical leaves `g_{2k} = γ^{-k}(g_0)` and `g_{2k+1} = γ^{-k}(g_1)`
//! accumulate on it from `Re z < 0`; the leaves `h_i` do the same from the
//! right. All of them are oriented upward, so every translation involved is
//! an affine map `z ↦ k z + c` and products are computed in that form.

use crate::error::{Error, Result};
use crate::kernel::{Geodesic, Isometry};

/// `z ↦ scale · z + shift`, with `scale > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub shift: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        scale: 1.0,
        shift: 0.0,
    };

    /// Translation by `u` along the upward vertical geodesic through `x`.
    pub fn translation(x: f64, u: f64) -> Self {
        let k = u.exp();
        Self {
            scale: k,
            shift: x * (1.0 - k),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            scale: self.scale * other.scale,
            shift: self.scale * other.shift + self.shift,
        }
    }

    pub fn to_isometry(&self) -> Isometry {
        let r = self.scale.sqrt();
        Isometry::new([[r, self.shift / r], [0.0, 1.0 / r]]).expect("positive scale")
    }

    /// Translation length `|ln scale|` when the map is hyperbolic.
    pub fn translation_length(&self) -> f64 {
        self.scale.ln().abs()
    }
}

/// Masses of the spiralling example.
///
/// `p_masses[i]` is the mass crossed between `P_i` and `P_{i+1}` (carried by
/// leaf `g_{i+1}`), `q_masses[i]` likewise on the right side, and `total` the
/// mass between `P_0` and `Q_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralWeights {
    pub p_masses: Vec<f64>,
    pub q_masses: Vec<f64>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpiralConfig {
    length: f64,
    g: Vec<f64>,
    h: Vec<f64>,
    weights: SpiralWeights,
    n: usize,
}

fn vertical_foot(g: &Geodesic, side: f64) -> Result<f64> {
    let (s, t) = (g.source(), g.target());
    let x = if t.is_infinite() {
        s.to_real()
    } else if s.is_infinite() {
        t.to_real()
    } else {
        return Err(Error::BadSeedLeaves(
            "seed leaves must be vertical (one endpoint at infinity)".into(),
        ));
    };
    if x * side <= 0.0 {
        return Err(Error::BadSeedLeaves(format!(
            "seed leaf at {x} is on the wrong side of the axis"
        )));
    }
    Ok(x)
}

/// Feet of the translates `γ^{-k}` of two seeds, interleaved, `count` of them.
fn translates(x0: f64, x1: f64, length: f64, count: usize) -> Result<Vec<f64>> {
    let shrink = (-length).exp();
    if !(x0.abs() > x1.abs() && x1.abs() > (x0 * shrink).abs()) {
        return Err(Error::BadSeedLeaves(format!(
            "seeds {x0}, {x1} are not nested inside one period"
        )));
    }
    Ok((0..count)
        .map(|i| {
            let seed = if i % 2 == 0 { x0 } else { x1 };
            seed * shrink.powi((i / 2) as i32)
        })
        .collect())
}

/// Builds the example from the left seeds `g0`, `g1`; the right seeds are
/// their mirror images. Translates are produced up to index `n + 1`.
pub fn spiral_config(
    length: f64,
    g0: &Geodesic,
    g1: &Geodesic,
    weights: SpiralWeights,
    n: usize,
) -> Result<SpiralConfig> {
    let x0 = vertical_foot(g0, -1.0)?;
    let x1 = vertical_foot(g1, -1.0)?;
    let h0 = Geodesic::between(-x0, f64::INFINITY)?;
    let h1 = Geodesic::between(-x1, f64::INFINITY)?;
    SpiralConfig::with_seeds(length, [g0, g1, &h0, &h1], weights, n)
}

impl SpiralConfig {
    pub fn with_seeds(
        length: f64,
        seeds: [&Geodesic; 4],
        weights: SpiralWeights,
        n: usize,
    ) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("length {length}")));
        }
        if weights.p_masses.len() < n || weights.q_masses.len() < n {
            return Err(Error::InvalidParameter(format!(
                "need at least {n} masses on each side"
            )));
        }
        let [g0, g1, h0, h1] = seeds;
        let g = translates(vertical_foot(g0, -1.0)?, vertical_foot(g1, -1.0)?, length, n + 2)?;
        let h = translates(vertical_foot(h0, 1.0)?, vertical_foot(h1, 1.0)?, length, n + 2)?;
        Ok(Self {
            length,
            g,
            h,
            weights,
            n,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> Isometry {
        Isometry::diagonal((self.length / 2.0).exp())
    }

    /// Upward leaf `g_i`, `0 <= i <= n + 1`.
    pub fn g(&self, i: usize) -> Geodesic {
        Geodesic::between(self.g[i], f64::INFINITY).expect("finite foot")
    }

    pub fn h(&self, i: usize) -> Geodesic {
        Geodesic::between(self.h[i], f64::INFINITY).expect("finite foot")
    }

    pub fn g_foot(&self, i: usize) -> f64 {
        self.g[i]
    }

    pub fn h_foot(&self, i: usize) -> f64 {
        self.h[i]
    }

    pub fn weights(&self) -> &SpiralWeights {
        &self.weights
    }

    /// `T^{a_1}_{g_1} ⋯ T^{a_m}_{g_m}`
    pub fn one_sided(&self, m: usize) -> AffineMap {
        (1..=m).fold(AffineMap::IDENTITY, |acc, i| {
            acc.compose(&AffineMap::translation(self.g[i], self.weights.p_masses[i - 1]))
        })
    }

    /// The naive two-sided product `T^{a_1}_{g_1} ⋯ T^{a_m}_{g_m}
    /// T^{b_m}_{h_m} ⋯ T^{b_1}_{h_1}`, whose dilation is `e^{Σa + Σb}`.
    pub fn psi(&self, m: usize) -> AffineMap {
        (1..=m).rev().fold(self.one_sided(m), |acc, i| {
            acc.compose(&AffineMap::translation(self.h[i], self.weights.q_masses[i - 1]))
        })
    }

    /// The product over the components `P_1, …, P_m, Q_m, …, Q_1` between
    /// `P_0` and `Q_0`, each contributing `T^{α(P_0,R)}` along its side facing
    /// `P_0` and `T^{-α(P_0,R)}` along the other, closed by
    /// `T^{α(P_0,Q_0)}_{h_1}`. Its dilation is always `e^{α(P_0,Q_0)}`.
    pub fn interleaved(&self, m: usize) -> AffineMap {
        let w = &self.weights;
        let mut acc = AffineMap::IDENTITY;
        let mut a = 0.0;
        for i in 1..=m {
            a += w.p_masses[i - 1];
            acc = acc
                .compose(&AffineMap::translation(self.g[i], a))
                .compose(&AffineMap::translation(self.g[i + 1], -a));
        }
        let cumulative_b: Vec<f64> = w
            .q_masses
            .iter()
            .take(m)
            .scan(0.0, |s, b| {
                *s += b;
                Some(*s)
            })
            .collect();
        for i in (1..=m).rev() {
            let b = w.total - cumulative_b[i - 1];
            acc = acc
                .compose(&AffineMap::translation(self.h[i + 1], b))
                .compose(&AffineMap::translation(self.h[i], -b));
        }
        acc.compose(&AffineMap::translation(self.h[1], w.total))
    }

    /// Net mass each leaf carries in [`interleaved`](Self::interleaved)`(m)`,
    /// as `(foot, mass)` pairs.
    pub fn interleaved_masses(&self, m: usize) -> Vec<(f64, f64)> {
        let w = &self.weights;
        let mut out = Vec::with_capacity(2 * m + 2);
        let mut a = 0.0;
        for i in 1..=m {
            out.push((self.g[i], w.p_masses[i - 1]));
            a += w.p_masses[i - 1];
        }
        out.push((self.g[m + 1], -a));
        let mut b = w.total;
        for i in 1..=m {
            out.push((self.h[i], w.q_masses[i - 1]));
            b -= w.q_masses[i - 1];
        }
        out.push((self.h[m + 1], b));
        out
    }

    /// `T^a_{g_1} T^b_{g_2} ∘ γ`, a closed leaf sheared along two leaves.
    pub fn closed_leaf_rho(&self, a: f64, b: f64) -> AffineMap {
        AffineMap::translation(self.g[1], a)
            .compose(&AffineMap::translation(self.g[2], b))
            .compose(&AffineMap {
                scale: self.length.exp(),
                shift: 0.0,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seeds() -> (Geodesic, Geodesic) {
        (
            Geodesic::between(-1.0, f64::INFINITY).unwrap(),
            Geodesic::between(-0.5, f64::INFINITY).unwrap(),
        )
    }

    fn config(p: Vec<f64>, q: Vec<f64>, total: f64) -> SpiralConfig {
        let (g0, g1) = seeds();
        let n = p.len();
        let w = SpiralWeights {
            p_masses: p,
            q_masses: q,
            total,
        };
        spiral_config(2.0 * 2f64.ln(), &g0, &g1, w, n).unwrap()
    }

    #[test]
    fn translates_shrink_geometrically() {
        let c = config(vec![0.0; 4], vec![0.0; 4], 0.0);
        assert_eq!(c.g_foot(0), -1.0);
        assert_eq!(c.g_foot(1), -0.5);
        assert!((c.g_foot(2) + 0.25).abs() < 1e-15);
        assert!((c.h_foot(3) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn zero_weights_give_identity_products() {
        let c = config(vec![0.0; 5], vec![0.0; 5], 0.0);
        for m in 0..=5 {
            assert_eq!(c.interleaved(m), AffineMap::IDENTITY);
            assert_eq!(c.psi(m), AffineMap::IDENTITY);
        }
        assert!(c.closed_leaf_rho(0.0, 0.0).to_isometry().approx_eq(&c.gamma(), 1e-15));
    }

    #[test]
    fn interleaved_dilation_is_total_mass() {
        let c = config(vec![1.0, -1.0, 1.0], vec![0.5, 0.5, 0.5], 0.3);
        for m in 0..=3 {
            assert!((c.interleaved(m).scale.ln() - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_seeds() {
        let (g0, g1) = seeds();
        let w = SpiralWeights {
            p_masses: vec![],
            q_masses: vec![],
            total: 0.0,
        };
        let right = Geodesic::between(1.0, f64::INFINITY).unwrap();
        let slanted = Geodesic::between(-1.0, 1.0).unwrap();
        for (a, b) in [(&g1, &g0), (&right, &g1), (&slanted, &g1)] {
            assert!(matches!(
                spiral_config(1.0, a, b, w.clone(), 0),
                Err(Error::BadSeedLeaves(_))
            ));
        }
        assert!(spiral_config(1.0, &g0, &g1, w, 0).is_ok());
    }
}
