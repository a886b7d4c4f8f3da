//! Closed-form derivatives of `t ↦ ℓ(ρ_t)` at `t = 0` for a shear along
//! finitely many weighted leaves, and of the crossing angles and arc lengths.
//!
//! Notation: `a_p` is the weight of crossing `p`, `θ_p` its angle, `ℓ` the
//! length of the closed geodesic and `ℓ_pq` the length of the arc travelled
//! forward from `p` to `q` (so `ℓ_pp = 0` and `ℓ_pq + ℓ_qp = ℓ`).

use crate::error::{Error, Result};
use crate::shear::ShearConfig;
use crate::sum::{pairwise, sum_by};

struct Terms<'a> {
    config: &'a ShearConfig,
    half: f64,
    sh: f64,
}

impl<'a> Terms<'a> {
    fn new(config: &'a ShearConfig) -> Self {
        let half = config.length() / 2.0;
        Self {
            config,
            half,
            sh: half.sinh(),
        }
    }

    fn n(&self) -> usize {
        self.config.len()
    }

    fn a(&self, p: usize) -> f64 {
        self.config.crossings()[p].weight
    }

    fn cos(&self, p: usize) -> f64 {
        self.config.crossings()[p].cos
    }

    fn sin(&self, p: usize) -> f64 {
        self.config.crossings()[p].sin
    }

    fn ell(&self, p: usize, q: usize) -> f64 {
        if p == q {
            0.0
        } else {
            self.config.arc_distance_oriented(p, q)
        }
    }

    /// `cosh(ℓ/2 − ℓ_pq)`, the same for both arcs between `p` and `q`.
    fn kernel(&self, p: usize, q: usize) -> f64 {
        (self.half - self.ell(p, q)).cosh()
    }

    /// `Σ_q a_q cosh(ℓ/2 − ℓ_pq) sin θ_q`
    fn weighted_row(&self, p: usize) -> f64 {
        sum_by(self.n(), |q| self.a(q) * self.kernel(p, q) * self.sin(q))
    }

    /// Whether `r` lies strictly inside the arc from `p` forward to `q`.
    fn strictly_between(&self, p: usize, q: usize, r: usize) -> bool {
        r != p && r != q && self.ell(p, r) < self.ell(p, q)
    }
}

/// `Σ a_p cos θ_p`
pub fn d1_length(config: &ShearConfig) -> f64 {
    let t = Terms::new(config);
    sum_by(t.n(), |p| t.a(p) * t.cos(p))
}

/// `1/(2 sinh(ℓ/2)) Σ_{p,q} a_p a_q cosh(ℓ/2 − ℓ_pq) sin θ_p sin θ_q`,
/// diagonal included.
pub fn d2_length(config: &ShearConfig) -> f64 {
    let t = Terms::new(config);
    let n = t.n();
    let terms: Vec<f64> = (0..n * n)
        .map(|k| {
            let (p, q) = (k / n, k % n);
            t.a(p) * t.a(q) * t.kernel(p, q) * t.sin(p) * t.sin(q)
        })
        .collect();
    pairwise(&terms) / (2.0 * t.sh)
}

/// Third derivative:
/// `−3/(4 sinh²(ℓ/2)) Σ_{p,q,r} a_p a_q a_r sin θ_p sin θ_q cos θ_r K(p,q,r)`.
///
/// For distinct indices `K` is `cosh` of the length of the arc between `p`
/// and `q` that avoids `r`. Coinciding indices stand for atoms pulled apart
/// infinitesimally, and `K` is the average over the ways of doing so; see
/// [`triple_kernel`].
pub fn d3_length(config: &ShearConfig) -> f64 {
    let t = Terms::new(config);
    let n = t.n();
    let terms: Vec<f64> = (0..n * n * n)
        .map(|k| {
            let (p, q, r) = (k / (n * n), (k / n) % n, k % n);
            t.a(p) * t.a(q) * t.a(r) * t.sin(p) * t.sin(q) * t.cos(r) * triple_kernel(&t, p, q, r)
        })
        .collect();
    -3.0 * pairwise(&terms) / (4.0 * t.sh * t.sh)
}

fn triple_kernel(t: &Terms, p: usize, q: usize, r: usize) -> f64 {
    let full = t.config.length();
    match (p == q, r == p, r == q) {
        (true, true, _) => (2.0 + full.cosh()) / 3.0,
        (true, false, _) => 1.0,
        (false, true, _) | (false, _, true) => {
            (t.ell(p, q).cosh() + t.ell(q, p).cosh()) / 2.0
        }
        _ if t.strictly_between(p, q, r) => t.ell(q, p).cosh(),
        _ => t.ell(p, q).cosh(),
    }
}

/// First variation of `cos θ_p`.
pub fn d_cos_theta(config: &ShearConfig, p: usize) -> f64 {
    let t = Terms::new(config);
    t.sin(p) * t.weighted_row(p) / (2.0 * t.sh)
}

/// First variation of `sin θ_p`.
pub fn d_sin_theta(config: &ShearConfig, p: usize) -> f64 {
    let t = Terms::new(config);
    -t.cos(p) * t.weighted_row(p) / (2.0 * t.sh)
}

/// First variation of the oriented arc length `ℓ_pq`, `p ≠ q`:
///
/// `Σ_{p<r<q} a_r cos θ_r + 1/(2 sinh(ℓ/2)) Σ_r a_r sin θ_r
/// (sinh(ℓ/2 − ℓ_qr) cot θ_q − sinh(ℓ/2 − ℓ_pr) cot θ_p)`
///
/// where in the second sum `ℓ_qq = 0` and `ℓ_pp = ℓ`, the atoms at `p` and
/// `q` being seen from outside the arc.
pub fn d_arc_distance(config: &ShearConfig, p: usize, q: usize) -> Result<f64> {
    if p == q {
        return Err(Error::InvalidParameter(
            "arc length variation needs two distinct crossings".into(),
        ));
    }
    let t = Terms::new(config);
    let n = t.n();
    let inner = sum_by(n, |r| {
        if t.strictly_between(p, q, r) {
            t.a(r) * t.cos(r)
        } else {
            0.0
        }
    });
    let (cot_p, cot_q) = (t.cos(p) / t.sin(p), t.cos(q) / t.sin(q));
    let full = config.length();
    let correction = sum_by(n, |r| {
        let from_q = t.ell(q, r);
        let from_p = if r == p { full } else { t.ell(p, r) };
        t.a(r) * t.sin(r) * ((t.half - from_q).sinh() * cot_q - (t.half - from_p).sinh() * cot_p)
    });
    Ok(inner + correction / (2.0 * t.sh))
}

/// Differentiates the order `k − 1` formula term by term with the
/// first-variation formulas above, `k ∈ {2, 3}`.
pub fn recursive_derivative(config: &ShearConfig, k: usize) -> Result<f64> {
    let t = Terms::new(config);
    let n = t.n();
    match k {
        2 => Ok(sum_by(n, |p| t.a(p) * d_cos_theta(config, p))),
        3 => {
            let d1 = d1_length(config);
            let dsin: Vec<f64> = (0..n).map(|p| d_sin_theta(config, p)).collect();
            let mut dell = vec![0.0; n * n];
            for p in 0..n {
                for q in 0..n {
                    if p != q {
                        dell[p * n + q] = d_arc_distance(config, p, q)?;
                    }
                }
            }
            let pair = |f: &dyn Fn(usize, usize) -> f64| {
                sum_by(n * n, |k| f(k / n, k % n))
            };
            // d/dt of the prefactor 1/(2 sinh(ℓ/2)), with ℓ' = d1
            let prefactor = -t.half.cosh() * d1 / (4.0 * t.sh * t.sh)
                * pair(&|p, q| t.a(p) * t.a(q) * t.kernel(p, q) * t.sin(p) * t.sin(q));
            // the kernel's argument ℓ/2 − ℓ_pq moves at ℓ'/2 − ℓ'_pq
            let kernel = pair(&|p, q| {
                let rate = d1 / 2.0 - dell[p * n + q];
                t.a(p) * t.a(q) * (t.half - t.ell(p, q)).sinh() * rate * t.sin(p) * t.sin(q)
            }) / (2.0 * t.sh);
            let sines = pair(&|p, q| {
                t.a(p) * t.a(q) * t.kernel(p, q) * (dsin[p] * t.sin(q) + t.sin(p) * dsin[q])
            }) / (2.0 * t.sh);
            Ok(prefactor + kernel + sines)
        }
        _ => Err(Error::UnsupportedOrder(k)),
    }
}

/// Finitely many closed geodesics with nonnegative weights, each crossing
/// the leaves being sheared.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMulticurve {
    components: Vec<(ShearConfig, f64)>,
}

impl WeightedMulticurve {
    pub fn new(components: Vec<(ShearConfig, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("multicurve has no components".into()));
        }
        if let Some((_, mu)) = components.iter().find(|(_, mu)| !(*mu >= 0.0 && mu.is_finite())) {
            return Err(Error::InvalidParameter(format!("component weight {mu} is negative")));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(ShearConfig, f64)] {
        &self.components
    }

    /// Every component weight multiplied by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.components
                .iter()
                .map(|(cfg, mu)| (cfg.clone(), mu * c))
                .collect(),
        )
    }

    fn weighted(&self, f: impl Fn(&ShearConfig) -> f64) -> f64 {
        let terms: Vec<f64> = self.components.iter().map(|(c, mu)| mu * f(c)).collect();
        pairwise(&terms)
    }
}

pub fn d1_length_multicurve(mc: &WeightedMulticurve) -> f64 {
    mc.weighted(d1_length)
}

pub fn d2_length_multicurve(mc: &WeightedMulticurve) -> f64 {
    mc.weighted(d2_length)
}

pub fn d3_length_multicurve(mc: &WeightedMulticurve) -> f64 {
    mc.weighted(d3_length)
}

/// Closed-form derivative of the given order.
pub fn length_derivative(config: &ShearConfig, order: usize) -> Result<f64> {
    match order {
        1 => Ok(d1_length(config)),
        2 => Ok(d2_length(config)),
        3 => Ok(d3_length(config)),
        k => Err(Error::UnsupportedOrder(k)),
    }
}

pub fn length_derivative_multicurve(mc: &WeightedMulticurve, order: usize) -> Result<f64> {
    match order {
        1 => Ok(d1_length_multicurve(mc)),
        2 => Ok(d2_length_multicurve(mc)),
        3 => Ok(d3_length_multicurve(mc)),
        k => Err(Error::UnsupportedOrder(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Geodesic, Isometry};
    use crate::shear::build_config;
    use std::f64::consts::E;

    fn single(a: f64, left: f64, right: f64) -> ShearConfig {
        let leaf = Geodesic::between(left, right).unwrap();
        build_config(Isometry::diagonal(E), &[(leaf, a)], None).unwrap()
    }

    #[test]
    fn perpendicular_leaf_is_critical() {
        let c = single(1.0, -1.0, 1.0);
        assert!(d1_length(&c).abs() < 1e-16);
        assert!(d3_length(&c).abs() < 1e-16);
        assert!(d_sin_theta(&c, 0).abs() < 1e-16);
        assert!(recursive_derivative(&c, 3).unwrap().abs() < 1e-15);
    }

    #[test]
    fn single_leaf_second_derivative() {
        let c = single(0.7, -1.0, 2.0);
        let x = c.crossings()[0];
        let expected = 0.49 * x.sin * x.sin * 1f64.cosh() / (2.0 * 1f64.sinh());
        assert!((d2_length(&c) - expected).abs() < 1e-15);
        assert!((d1_length(&c) - 0.7 * x.cos).abs() < 1e-16);
    }

    #[test]
    fn single_leaf_third_derivative() {
        let c = single(0.7, -1.0, 2.0);
        let x = c.crossings()[0];
        let expected =
            -0.343 * x.cos * x.sin * x.sin * (2f64.cosh() + 2.0) / (4.0 * 1f64.sinh().powi(2));
        assert!((d3_length(&c) - expected).abs() < 1e-15);
    }

    #[test]
    fn unsupported_orders() {
        let c = single(1.0, -1.0, 1.0);
        assert_eq!(recursive_derivative(&c, 1), Err(Error::UnsupportedOrder(1)));
        assert_eq!(recursive_derivative(&c, 4), Err(Error::UnsupportedOrder(4)));
        assert!(d_arc_distance(&c, 0, 0).is_err());
    }

    #[test]
    fn negative_component_weight_rejected() {
        let c = single(1.0, -1.0, 1.0);
        assert!(WeightedMulticurve::new(vec![(c, -1.0)]).is_err());
    }
}
