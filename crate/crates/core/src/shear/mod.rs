//! Finitely many weighted leaves crossing the axis of a deck transformation,
//! and the geometry obtained by shearing along them.

mod spiral;

pub use spiral::{spiral_config, AffineMap, SpiralConfig, SpiralWeights};

use crate::error::{Error, Result};
use crate::kernel::{
    intersect, signed_position, translate_along, Geodesic, InteriorPoint, Isometry, Kind,
};

/// Crossings closer than this along the axis count as the same crossing.
pub const DUPLICATE_TOL: f64 = 1e-10;

/// Intermediate times visited by [`deformed_crossings`] on the way to `t`.
pub const PROBE_STEPS: usize = 4;

/// A transverse leaf with its Dirac mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf {
    pub geodesic: Geodesic,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingData {
    /// Arc position along the axis, in `[0, ℓ)` for an undeformed config.
    pub s: f64,
    pub theta: f64,
    pub cos: f64,
    pub sin: f64,
    pub weight: f64,
    pub point: InteriorPoint,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub basepoint: Option<InteriorPoint>,
    /// Powers `|k| <= k_check` of gamma are used to test that leaves and
    /// their translates do not cross.
    pub k_check: u32,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            basepoint: None,
            k_check: 3,
        }
    }
}

/// A hyperbolic deck transformation with weighted leaves crossing its axis
/// once each in a fundamental period.
///
/// Leaves are stored oriented to point left of the axis and sorted by
/// arc position from the basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearConfig {
    gamma: Isometry,
    axis: Geodesic,
    length: f64,
    basepoint: InteriorPoint,
    leaves: Vec<Leaf>,
    crossings: Vec<CrossingData>,
}

pub fn build_config(
    gamma: Isometry,
    leaves: &[(Geodesic, f64)],
    basepoint: Option<InteriorPoint>,
) -> Result<ShearConfig> {
    build_config_with(
        gamma,
        leaves,
        &BuildOptions {
            basepoint,
            ..BuildOptions::default()
        },
    )
}

pub fn build_config_with(
    gamma: Isometry,
    leaves: &[(Geodesic, f64)],
    opts: &BuildOptions,
) -> Result<ShearConfig> {
    let axis = gamma.axis()?;
    let length = gamma.translation_length()?;
    let basepoint = match opts.basepoint {
        Some(p) => {
            let distance = axis.distance_to_point(&p);
            if distance > crate::kernel::ON_GEODESIC_TOL {
                return Err(Error::PointOffGeodesic { distance });
            }
            p
        }
        None => axis.foot(&InteriorPoint::I),
    };

    let mut placed = Vec::with_capacity(leaves.len());
    for (index, &(geodesic, weight)) in leaves.iter().enumerate() {
        let crossing = match intersect(&axis, &geodesic) {
            Ok(Some(c)) => c,
            Ok(None) | Err(_) => return Err(Error::LeafMissesAxis { index }),
        };
        let geodesic = if crossing.points_left {
            geodesic
        } else {
            geodesic.reverse()
        };
        // Replace the leaf by the translate crossing `[basepoint, γ(basepoint))`.
        let (s, period) = reduce(signed_position(&axis, &crossing.point, &basepoint)?, length);
        let shift = gamma.pow(-period);
        let geodesic = shift.apply_geodesic(&geodesic);
        let data = CrossingData {
            s,
            theta: crossing.theta,
            cos: crossing.cos,
            sin: crossing.sin,
            weight,
            point: shift.apply_point(&crossing.point),
        };
        placed.push((index, Leaf { geodesic, weight }, data));
    }
    placed.sort_by(|a, b| a.2.s.total_cmp(&b.2.s));

    for w in 0..placed.len() {
        let next = (w + 1) % placed.len();
        if next == w {
            break;
        }
        let gap = (placed[next].2.s - placed[w].2.s).rem_euclid(length);
        if gap <= DUPLICATE_TOL || length - gap <= DUPLICATE_TOL {
            let (a, b) = (placed[w].0, placed[next].0);
            return Err(Error::DuplicateCrossing {
                first: a.min(b),
                second: a.max(b),
            });
        }
    }

    check_lamination(&gamma, &placed, opts.k_check)?;

    Ok(ShearConfig {
        gamma,
        axis,
        length,
        basepoint,
        leaves: placed.iter().map(|p| p.1).collect(),
        crossings: placed.iter().map(|p| p.2).collect(),
    })
}

/// `s = r + k ℓ` with `0 ≤ r < ℓ`, as `(r, k)`.
fn reduce(s: f64, length: f64) -> (f64, i32) {
    let k = (s / length).floor();
    let r = s - k * length;
    if r >= length {
        (0.0, k as i32 + 1)
    } else {
        (r.max(0.0), k as i32)
    }
}

fn check_lamination(
    gamma: &Isometry,
    placed: &[(usize, Leaf, CrossingData)],
    k_check: u32,
) -> Result<()> {
    let k = k_check as i32;
    for power in -k..=k {
        let g = gamma.pow(power);
        for (i, li, _) in placed {
            for (j, lj, _) in placed {
                if power == 0 && i == j {
                    continue;
                }
                let moved = g.apply_geodesic(&lj.geodesic);
                if li.geodesic.same_line(&moved) {
                    continue;
                }
                if li.geodesic.links(&moved) && !li.geodesic.shares_endpoint(&moved) {
                    return Err(Error::LeavesCross {
                        first: *i,
                        second: *j,
                        power,
                    });
                }
            }
        }
    }
    Ok(())
}

impl ShearConfig {
    pub fn gamma(&self) -> Isometry {
        self.gamma
    }

    pub fn axis(&self) -> Geodesic {
        self.axis
    }

    /// Translation length of gamma.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn basepoint(&self) -> InteriorPoint {
        self.basepoint
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn crossings(&self) -> &[CrossingData] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.leaves.iter().map(|l| l.weight).collect()
    }

    /// Same geometry, new weights (in the sorted leaf order).
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights, got {}",
                self.len(),
                weights.len()
            )));
        }
        let mut out = self.clone();
        for ((leaf, c), &w) in out.leaves.iter_mut().zip(&mut out.crossings).zip(weights) {
            leaf.weight = w;
            c.weight = w;
        }
        Ok(out)
    }

    /// Rebuilt around another point of the axis; crossings are re-reduced
    /// and re-sorted.
    pub fn with_basepoint(&self, basepoint: InteriorPoint) -> Result<Self> {
        build_config(self.gamma, &self.leaf_pairs(), Some(basepoint))
    }

    /// The same leaves seen from gamma^-1, whose axis runs the other way.
    pub fn reversed(&self) -> Result<Self> {
        build_config(self.gamma.inverse(), &self.leaf_pairs(), Some(self.basepoint))
    }

    fn leaf_pairs(&self) -> Vec<(Geodesic, f64)> {
        self.leaves.iter().map(|l| (l.geodesic, l.weight)).collect()
    }

    /// Unoriented distance along the axis between crossings `i` and `j`.
    pub fn arc_distance(&self, i: usize, j: usize) -> f64 {
        let d = (self.crossings[i].s - self.crossings[j].s).abs();
        d.min(self.length - d)
    }

    /// Distance travelled along the axis from crossing `i` forward to `j`.
    pub fn arc_distance_oriented(&self, i: usize, j: usize) -> f64 {
        (self.crossings[j].s - self.crossings[i].s).rem_euclid(self.length)
    }
}

/// `ρ_t = T^{t a_1}_{l_1} ⋯ T^{t a_n}_{l_n} ∘ γ`.
pub fn sheared_isometry(config: &ShearConfig, t: f64) -> Result<Isometry> {
    let rho = shear_product(config, t).compose(&config.gamma);
    match rho.classify() {
        Kind::Hyperbolic => Ok(rho),
        _ => Err(Error::DegenerateResult {
            t,
            trace: rho.trace().abs(),
        }),
    }
}

fn shear_product(config: &ShearConfig, t: f64) -> Isometry {
    config
        .leaves
        .iter()
        .fold(Isometry::IDENTITY, |acc, l| {
            acc.compose(&translate_along(&l.geodesic, t * l.weight))
        })
}

/// The shear written with cumulative masses, one pair of translations per
/// gap between consecutive leaves:
/// `T^{A_1}_{l_1} T^{-A_1}_{l_2} T^{A_2}_{l_2} ⋯ T^{A_n}_{l_n} ∘ γ`, where
/// `A_i = t (a_1 + ⋯ + a_i)`. Telescopes to [`sheared_isometry`].
pub fn sheared_isometry_telescoped(config: &ShearConfig, t: f64) -> Result<Isometry> {
    let n = config.len();
    let mut acc = Isometry::IDENTITY;
    let mut mass = 0.0;
    for (i, leaf) in config.leaves.iter().enumerate() {
        mass += t * leaf.weight;
        acc = acc.compose(&translate_along(&leaf.geodesic, mass));
        if i + 1 < n {
            acc = acc.compose(&translate_along(&config.leaves[i + 1].geodesic, -mass));
        }
    }
    let rho = acc.compose(&config.gamma);
    match rho.classify() {
        Kind::Hyperbolic => Ok(rho),
        _ => Err(Error::DegenerateResult {
            t,
            trace: rho.trace().abs(),
        }),
    }
}

pub fn deformed_length(config: &ShearConfig, t: f64) -> Result<f64> {
    sheared_isometry(config, t)?.translation_length()
}

/// Leaf `j` moved by the shears along the leaves before it.
pub fn deformed_leaves(config: &ShearConfig, t: f64) -> Vec<Geodesic> {
    let mut prefix = Isometry::IDENTITY;
    config
        .leaves
        .iter()
        .map(|l| {
            let moved = prefix.apply_geodesic(&l.geodesic);
            prefix = prefix.compose(&translate_along(&l.geodesic, t * l.weight));
            moved
        })
        .collect()
}

/// Crossing data of the deformed leaves against the deformed axis.
///
/// Positions are measured from the point of the new axis nearest the old
/// basepoint and followed continuously from `t = 0`, so they need not lie in
/// `[0, ℓ(t))`. The path to `t` is sampled at [`PROBE_STEPS`] points and any
/// lost or reordered crossing is an error.
pub fn deformed_crossings(config: &ShearConfig, t: f64) -> Result<Vec<CrossingData>> {
    let mut current = config.crossings.clone();
    for step in 1..=PROBE_STEPS {
        let tk = t * step as f64 / PROBE_STEPS as f64;
        current = crossings_at(config, tk, &current)?;
    }
    Ok(current)
}

fn crossings_at(config: &ShearConfig, t: f64, previous: &[CrossingData]) -> Result<Vec<CrossingData>> {
    let rho = sheared_isometry(config, t)?;
    let axis = rho.axis()?;
    let length = rho.translation_length()?;
    let base = axis.foot(&config.basepoint);
    let mut out = Vec::with_capacity(previous.len());
    for (index, (leaf, prev)) in deformed_leaves(config, t).iter().zip(previous).enumerate() {
        let c = match intersect(&axis, leaf) {
            Ok(Some(c)) => c,
            _ => return Err(Error::CrossingLost { index, t }),
        };
        let raw = signed_position(&axis, &c.point, &base)?;
        let s = raw + ((prev.s - raw) / length).round() * length;
        out.push(CrossingData {
            s,
            theta: c.theta,
            cos: c.cos,
            sin: c.sin,
            weight: prev.weight,
            point: c.point,
        });
    }
    for (index, pair) in out.windows(2).enumerate() {
        if pair[1].s <= pair[0].s {
            return Err(Error::CrossingLost { index: index + 1, t });
        }
    }
    if let (Some(first), Some(last)) = (out.first(), out.last()) {
        if out.len() > 1 && last.s - first.s >= length {
            return Err(Error::CrossingLost {
                index: out.len() - 1,
                t,
            });
        }
    }
    Ok(out)
}

/// Oriented distance from crossing `i` forward to crossing `j` along the
/// deformed axis.
pub fn deformed_arc_distance(config: &ShearConfig, t: f64, i: usize, j: usize) -> Result<f64> {
    let length = deformed_length(config, t)?;
    let c = deformed_crossings(config, t)?;
    let d = c[j].s - c[i].s;
    Ok(if j >= i { d } else { d + length })
}
