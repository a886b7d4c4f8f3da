//! Seeded random geometry for property tests and verification runs.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivatives::WeightedMulticurve;
use crate::hessian::SymMatrix;
use crate::kernel::{BoundaryPoint, Geodesic, InteriorPoint, Isometry};
use crate::shear::{build_config, ShearConfig};
use crate::twist::TwistScene;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random isometry moving `i` a bounded distance.
pub fn random_isometry(rng: &mut SampleRng) -> Isometry {
    loop {
        let mut m = [[0.0f64; 2]; 2];
        for v in m.iter_mut().flatten() {
            *v = rng.gen_range(-2.0..2.0);
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() < 0.2 {
            continue;
        }
        if det < 0.0 {
            m[0][0] = -m[0][0];
            m[1][0] = -m[1][0];
        }
        let w = Isometry::new(m).expect("positive determinant");
        if w.matrix().iter().flatten().map(|v| v * v).sum::<f64>() <= 12.0 {
            return w;
        }
    }
}

pub fn random_point(rng: &mut SampleRng) -> InteriorPoint {
    InteriorPoint {
        x: rng.gen_range(-3.0..3.0),
        y: rng.gen_range(-1.5f64..1.5).exp(),
    }
}

/// Uniform on the circle at infinity (so `∞` is not special).
pub fn random_boundary_point(rng: &mut SampleRng) -> BoundaryPoint {
    let phi: f64 = rng.gen_range(0.0..PI);
    BoundaryPoint::new(phi.cos(), phi.sin()).expect("unit vector")
}

/// Endpoints kept at least `0.05` apart chordally.
pub fn random_geodesic(rng: &mut SampleRng) -> Geodesic {
    loop {
        let (p, q) = (random_boundary_point(rng), random_boundary_point(rng));
        if p.wedge(&q).abs() > 0.05 {
            return Geodesic::new(p, q).expect("distinct endpoints");
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConfigSpec {
    pub leaves: RangeInclusive<usize>,
    pub length: (f64, f64),
    pub weights: (f64, f64),
    /// Smallest gap between crossings, as a fraction of the mean gap.
    pub min_gap: f64,
    /// Conjugate the whole picture by a random isometry.
    pub conjugate: bool,
}

impl Default for ConfigSpec {
    fn default() -> Self {
        Self {
            leaves: 2..=6,
            length: (0.5, 5.0),
            weights: (-1.0, 1.0),
            min_gap: 0.2,
            conjugate: true,
        }
    }
}

/// Leaf crossing the imaginary axis at height `e^s` with angle θ, pointing left.
pub fn standard_leaf(s: f64, theta: f64) -> Geodesic {
    let half = theta / 2.0;
    Geodesic::between(s.exp() * half.tan(), -s.exp() / half.tan()).expect("distinct endpoints")
}

/// Crossing positions with circular gaps bounded below, sorted in `[0, ℓ)`.
fn random_positions(rng: &mut SampleRng, n: usize, length: f64, min_gap: f64) -> Vec<f64> {
    let floor = min_gap * length / n as f64;
    loop {
        let mut s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..length)).collect();
        s.sort_by(f64::total_cmp);
        let ok = (0..n).all(|i| {
            let next = if i + 1 < n { s[i + 1] } else { s[0] + length };
            next - s[i] >= floor || n == 1
        });
        if ok {
            return s;
        }
    }
}

/// `ln tan(θ/2)` for each crossing, spread so that no two leaves or
/// translates cross: `|φ_i − φ_j|` stays below their circular distance.
fn random_slopes(rng: &mut SampleRng, s: &[f64], length: f64) -> Vec<f64> {
    let n = s.len();
    let centre = rng.gen_range(-1.2..1.2);
    (0..n)
        .map(|i| {
            let eps = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = (s[j] - s[i]).abs();
                    d.min(length - d)
                })
                .fold(length / 2.0, f64::min);
            centre + 0.95 * eps / 2.0 * rng.gen_range(-1.0..1.0)
        })
        .collect()
}

pub fn random_config(rng: &mut SampleRng, spec: &ConfigSpec) -> ShearConfig {
    loop {
        let n = rng.gen_range(spec.leaves.clone());
        let length = rng.gen_range(spec.length.0..=spec.length.1);
        let s = random_positions(rng, n, length, spec.min_gap);
        let phi = random_slopes(rng, &s, length);
        let w = if spec.conjugate {
            random_isometry(rng)
        } else {
            Isometry::IDENTITY
        };
        let gamma = Isometry::diagonal((length / 2.0).exp()).conjugate_by(&w);
        let leaves: Vec<(Geodesic, f64)> = s
            .iter()
            .zip(&phi)
            .map(|(&si, &p)| {
                let leaf = w.apply_geodesic(&standard_leaf(si, 2.0 * p.exp().atan()));
                let leaf = if rng.gen_bool(0.5) { leaf.reverse() } else { leaf };
                (leaf, rng.gen_range(spec.weights.0..=spec.weights.1))
            })
            .collect();
        if let Ok(c) = build_config(gamma, &leaves, None) {
            return c;
        }
    }
}

/// Same as [`random_config`] with all weights of one random sign.
pub fn random_signed_config(rng: &mut SampleRng, spec: &ConfigSpec) -> ShearConfig {
    let c = random_config(rng, spec);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let w: Vec<f64> = c.weights().iter().map(|w| sign * w.abs().max(1e-3)).collect();
    c.with_weights(&w).expect("same length")
}

pub fn random_multicurve(rng: &mut SampleRng, spec: &ConfigSpec, components: usize) -> WeightedMulticurve {
    let parts = (0..components)
        .map(|_| (random_config(rng, spec), rng.gen_range(0.1..2.0)))
        .collect();
    WeightedMulticurve::new(parts).expect("positive weights")
}

/// Symmetric matrix with `a_ij ≥ 0` and `a_ii > a_ij` for `j ≠ i`.
pub fn random_dominant_matrix(rng: &mut SampleRng, n: usize) -> SymMatrix {
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..i {
            let v = rng.gen_range(0.0..1.0);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    for i in 0..n {
        let top = (0..n).filter(|&j| j != i).map(|j| a[i][j]).fold(0.0, f64::max);
        a[i][i] = top + rng.gen_range(1e-3..1.0);
    }
    SymMatrix::new(a).expect("symmetric by construction")
}

/// A twist scene with `probes` probe geodesics, conjugated at random.
pub fn random_twist_scene(rng: &mut SampleRng, probes: usize) -> TwistScene {
    loop {
        let length: f64 = rng.gen_range(0.5..4.0);
        let theta_h: f64 = rng.gen_range(0.35..PI - 0.35);
        let phi_h = (theta_h / 2.0).tan().ln();
        let w = random_isometry(rng);
        let gamma = Isometry::diagonal((length / 2.0).exp()).conjugate_by(&w);
        let h = w.apply_geodesic(&standard_leaf(0.0, theta_h));
        let ls: Vec<Geodesic> = (0..probes)
            .map(|_| {
                let s: f64 = rng.gen_range(0.05 * length..0.95 * length);
                let room = s.min(length - s);
                let phi = phi_h + 0.9 * room * rng.gen_range(-1.0..1.0);
                w.apply_geodesic(&standard_leaf(s, 2.0 * phi.exp().atan()))
            })
            .collect();
        if let Ok(scene) = TwistScene::new(gamma, h, &ls) {
            return scene;
        }
    }
}
