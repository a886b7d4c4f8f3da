//! Twisting a closed geodesic along one transverse geodesic.
//!
//! `h` crosses the axis `g` of `γ` and `h' = γ(h)`. The deformation is
//! `γ(t) = T^t_{h'} ∘ γ`, whose axis `g(t)` keeps passing through the
//! midpoint `M` of the common perpendicular `[a, a']` of `h` and `h'`.
//! Probes `l` are fixed geodesics crossing `g` between `h` and `h'`; all
//! transverse geodesics are oriented to point left of `g`.

use crate::error::{Error, Result};
use crate::kernel::{
    common_perpendicular, geodesic_through, intersect, midpoint, signed_position, translate_along,
    Geodesic, InteriorPoint, Isometry, Kind,
};

/// Sign of `d cos θ_l / dt` relative to
/// `cosh(ℓ/2 − ℓ_hl) sin θ_h sin θ_l / (2 sinh(ℓ/2))`, fixed against finite
/// differences.
pub const D_COS_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub geodesic: Geodesic,
    pub theta: f64,
    pub cos: f64,
    pub sin: f64,
    /// Distance along `g` from its crossing with `h` forward to this probe.
    pub ell_h: f64,
    /// Where the probe meets the line through `a` and `a'`.
    pub anchor: InteriorPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistScene {
    gamma: Isometry,
    axis: Geodesic,
    length: f64,
    h: Geodesic,
    h_prime: Geodesic,
    theta_h: f64,
    cos_h: f64,
    sin_h: f64,
    feet: (InteriorPoint, InteriorPoint),
    midpoint: InteriorPoint,
    probes: Vec<Probe>,
}

/// State of the deformation at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistSample {
    pub t: f64,
    pub length: f64,
    pub midpoint_residual: f64,
    pub theta_residual: f64,
    /// `(θ_l(t), f_l(t))` per probe.
    pub probes: Vec<(f64, f64)>,
}

impl TwistScene {
    /// Fails with `LeafMissesAxis` if `h` misses the axis, with the kernel's
    /// error if `h` and `γ(h)` are not disjoint and non-asymptotic, and with
    /// `ProbeOutOfRange` for a probe not crossing the axis between them.
    pub fn new(gamma: Isometry, h: Geodesic, probes: &[Geodesic]) -> Result<Self> {
        let axis = gamma.axis()?;
        let length = gamma.translation_length()?;
        let ch = match intersect(&axis, &h) {
            Ok(Some(c)) => c,
            _ => return Err(Error::LeafMissesAxis { index: 0 }),
        };
        let h = if ch.points_left { h } else { h.reverse() };
        let h_prime = gamma.apply_geodesic(&h);
        let feet = common_perpendicular(&h, &h_prime)?;
        let perpendicular = geodesic_through(&feet.0, &feet.1)?;
        let base = ch.point;

        let mut placed = Vec::with_capacity(probes.len());
        for (index, l) in probes.iter().enumerate() {
            let out = Error::ProbeOutOfRange { index };
            let c = match intersect(&axis, l) {
                Ok(Some(c)) => c,
                _ => return Err(out),
            };
            let geodesic = if c.points_left { *l } else { l.reverse() };
            let ell_h = signed_position(&axis, &c.point, &base)?;
            let is_h = geodesic.same_line(&h) || geodesic.same_line(&h_prime);
            if !is_h && !(0.0..=length).contains(&ell_h) {
                return Err(out);
            }
            if !is_h
                && (geodesic.links(&h)
                    || geodesic.links(&h_prime)
                    || geodesic.shares_endpoint(&h)
                    || geodesic.shares_endpoint(&h_prime))
            {
                return Err(out);
            }
            let ell_h = if is_h { 0.0 } else { ell_h };
            let anchor = match intersect(&perpendicular, &geodesic) {
                Ok(Some(a)) => a.point,
                _ if is_h => feet.0,
                _ => return Err(out),
            };
            placed.push(Probe {
                geodesic,
                theta: c.theta,
                cos: c.cos,
                sin: c.sin,
                ell_h,
                anchor,
            });
        }

        Ok(Self {
            gamma,
            axis,
            length,
            h,
            h_prime,
            theta_h: ch.theta,
            cos_h: ch.cos,
            sin_h: ch.sin,
            midpoint: midpoint(&feet.0, &feet.1)?,
            feet,
            probes: placed,
        })
    }

    pub fn gamma(&self) -> Isometry {
        self.gamma
    }

    pub fn axis(&self) -> Geodesic {
        self.axis
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn h(&self) -> Geodesic {
        self.h
    }

    pub fn h_prime(&self) -> Geodesic {
        self.h_prime
    }

    pub fn theta_h(&self) -> f64 {
        self.theta_h
    }

    pub fn midpoint(&self) -> InteriorPoint {
        self.midpoint
    }

    /// `(a, a')`, on `h` and `h'` respectively.
    pub fn perpendicular_feet(&self) -> (InteriorPoint, InteriorPoint) {
        self.feet
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    fn probe(&self, index: usize) -> Result<&Probe> {
        self.probes.get(index).ok_or(Error::ProbeOutOfRange { index })
    }

    /// `γ(t) = T^t_{h'} ∘ γ`.
    pub fn twist_family(&self, t: f64) -> Result<Isometry> {
        let g = translate_along(&self.h_prime, t).compose(&self.gamma);
        match g.classify() {
            Kind::Hyperbolic => Ok(g),
            _ => Err(Error::DegenerateResult {
                t,
                trace: g.trace().abs(),
            }),
        }
    }

    pub fn axis_at(&self, t: f64) -> Result<Geodesic> {
        self.twist_family(t)?.axis()
    }

    pub fn length_at(&self, t: f64) -> Result<f64> {
        self.twist_family(t)?.translation_length()
    }

    /// Distance from `M` to `g(t)`.
    pub fn midpoint_invariance(&self, t: f64) -> Result<f64> {
        Ok(self.axis_at(t)?.distance_to_point(&self.midpoint))
    }

    fn angle_with(axis: &Geodesic, l: &Geodesic, index: usize) -> Result<(f64, InteriorPoint, f64)> {
        match intersect(axis, l) {
            Ok(Some(c)) => Ok((c.theta, c.point, c.cos)),
            _ => Err(Error::CrossingLost { index, t: f64::NAN }),
        }
    }

    /// `|θ_h(t) − θ_{h'}(t)|`.
    pub fn theta_residual(&self, t: f64) -> Result<f64> {
        let axis = self.axis_at(t)?;
        let (a, _, _) = Self::angle_with(&axis, &self.h, 0)?;
        let (b, _, _) = Self::angle_with(&axis, &self.h_prime, 0)?;
        Ok((a - b).abs())
    }

    pub fn theta_h_at(&self, t: f64) -> Result<f64> {
        Ok(Self::angle_with(&self.axis_at(t)?, &self.h, 0)?.0)
    }

    pub fn cos_theta_l_at(&self, l: usize, t: f64) -> Result<f64> {
        let p = self.probe(l)?;
        Ok(Self::angle_with(&self.axis_at(t)?, &p.geodesic, l)?.2)
    }

    /// Position of `g(t) ∩ l` along `l`, measured from `l ∩ [a, a']`.
    pub fn f_l(&self, l: usize, t: f64) -> Result<f64> {
        let p = self.probe(l)?;
        let (_, point, _) = Self::angle_with(&self.axis_at(t)?, &p.geodesic, l)?;
        signed_position(&p.geodesic, &point, &p.anchor)
    }

    /// Position of `g(t) ∩ l'` along `g(t)` measured from `g(t) ∩ l`.
    pub fn probe_separation(&self, l: usize, l_prime: usize, t: f64) -> Result<f64> {
        let axis = self.axis_at(t)?;
        let (_, p, _) = Self::angle_with(&axis, &self.probe(l)?.geodesic, l)?;
        let (_, q, _) = Self::angle_with(&axis, &self.probe(l_prime)?.geodesic, l_prime)?;
        signed_position(&axis, &q, &p)
    }

    /// Clockwise angle at `M` from the tangent of `g` to that of `g(t)`.
    pub fn rotation_angle(&self, t: f64) -> Result<f64> {
        let before = self.axis.tangent_angle_at(&self.midpoint);
        let axis = self.axis_at(t)?;
        let after = axis.tangent_angle_at(&axis.foot(&self.midpoint));
        let turn = (after - before + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
            - std::f64::consts::PI;
        Ok(-turn)
    }

    /// `ℓ' = cos θ_h`.
    pub fn ell_prime(&self) -> f64 {
        self.cos_h
    }

    fn half(&self) -> (f64, f64) {
        let u = self.length / 2.0;
        (u, u.sinh())
    }

    /// `f_l' = −½ (sin θ_h / sin θ_l) sinh(ℓ/2 − ℓ_hl) / sinh(ℓ/2)`.
    pub fn f_l_prime(&self, l: usize) -> Result<f64> {
        let p = self.probe(l)?;
        let (u, sh) = self.half();
        Ok(-0.5 * self.sin_h / p.sin * (u - p.ell_h).sinh() / sh)
    }

    /// `ρ' = −sin θ_h / (2 sinh(ℓ/2))`, the rate at which `g(t)` turns
    /// clockwise about `M`.
    pub fn angular_velocity(&self) -> f64 {
        let (_, sh) = self.half();
        -self.sin_h / (2.0 * sh)
    }

    /// Rate of change of [`probe_separation`](Self::probe_separation):
    /// `sin θ_h / (2 sinh(ℓ/2)) (sinh(ℓ/2 − ℓ_hl) cot θ_l − sinh(ℓ/2 − ℓ_hl') cot θ_l')`.
    pub fn ell_ll_prime(&self, l: usize, l_prime: usize) -> Result<f64> {
        let (p, q) = (self.probe(l)?, self.probe(l_prime)?);
        let (u, sh) = self.half();
        let cot = |p: &Probe| p.cos / p.sin;
        Ok(self.sin_h / (2.0 * sh)
            * ((u - p.ell_h).sinh() * cot(p) - (u - q.ell_h).sinh() * cot(q)))
    }

    /// `d cos θ_l / dt = ½ cosh(ℓ/2 − ℓ_hl) sin θ_h sin θ_l / sinh(ℓ/2)`.
    pub fn d_cos_theta_l(&self, l: usize) -> Result<f64> {
        let p = self.probe(l)?;
        let (u, sh) = self.half();
        Ok(D_COS_SIGN * 0.5 * (u - p.ell_h).cosh() / sh * self.sin_h * p.sin)
    }

    pub fn sample_at(&self, t: f64) -> Result<TwistSample> {
        let probes = (0..self.probes.len())
            .map(|l| {
                let axis = self.axis_at(t)?;
                let p = self.probe(l)?;
                let (theta, point, _) = Self::angle_with(&axis, &p.geodesic, l)?;
                Ok((theta, signed_position(&p.geodesic, &point, &p.anchor)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistSample {
            t,
            length: self.length_at(t)?,
            midpoint_residual: self.midpoint_invariance(t)?,
            theta_residual: self.theta_residual(t)?,
            probes,
        })
    }
}
