//! Seeded verification suites: every closed form checked against an
//! independent oracle on random cases.
//!
//! Each case draws from its own generator, keyed by the run seed, the check
//! and the case index, so results do not depend on how cases are scheduled.
//! Errors are compared as `|x − y| / max(|x|, |y|, 1)`.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::derivatives::{
    d1_length, d1_length_multicurve, d2_length, d2_length_multicurve, d3_length, d_arc_distance,
    d_cos_theta, d_sin_theta, recursive_derivative,
};
use crate::hessian::{
    bound_scale, gauss_positivity, generic_check, hessian_lower_bound, Definiteness, SymMatrix, Verdict,
};
use crate::kernel::{
    cross_ratio, geodesic_distance, intersect, point_distance, BoundaryPoint, Convention, Geodesic,
    Isometry,
};
use crate::oracles::{
    dual_derivative, fd_derivative, length_fd, multicurve_length_fd, spiral_convergence, FdSpec,
    SpiralParams,
};
use crate::sample::{self, ConfigSpec, SampleRng};
use crate::shear::{
    build_config, deformed_arc_distance, deformed_crossings, deformed_length, spiral_config,
    SpiralWeights,
};
use crate::twist::TwistScene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Kernel,
    Derivatives,
    Twist,
    Hessian,
    Spiral,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Kernel,
        Suite::Derivatives,
        Suite::Twist,
        Suite::Hessian,
        Suite::Spiral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Derivatives => "derivatives",
            Suite::Twist => "twist",
            Suite::Hessian => "hessian",
            Suite::Spiral => "spiral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub cases: usize,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            cases: 200,
            tol_scale: 1.0,
        }
    }
}

/// Outcome of one check over all its cases.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest value seen, compared against `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    /// First error raised by a case, if any.
    pub note: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Outcome = std::result::Result<f64, String>;

fn tally(name: &'static str, tolerance: f64, outcomes: Vec<Outcome>) -> Check {
    let mut check = Check {
        name,
        cases: outcomes.len(),
        failures: 0,
        worst: f64::NEG_INFINITY,
        tolerance,
        note: None,
    };
    for o in outcomes {
        match o {
            Ok(e) if e <= tolerance => check.worst = check.worst.max(e),
            Ok(e) => {
                check.failures += 1;
                check.worst = if e.is_nan() { f64::NAN } else { check.worst.max(e) };
            }
            Err(msg) => {
                check.failures += 1;
                check.note.get_or_insert(msg);
            }
        }
    }
    if check.worst == f64::NEG_INFINITY {
        check.worst = 0.0;
    }
    check
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn case_rng(seed: u64, tag: u64, i: usize) -> SampleRng {
    sample::rng(splitmix(splitmix(seed ^ tag.rotate_left(32)) ^ i as u64))
}

/// Runs `f` on `n` cases in parallel, results in case order.
fn cases<F>(opts: &VerifyOptions, tag: u64, n: usize, f: F) -> Vec<Outcome>
where
    F: Fn(&mut SampleRng) -> Outcome + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| f(&mut case_rng(opts.seed, tag, i)))
        .collect()
}

pub fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}

fn msg(e: crate::Error) -> String {
    e.to_string()
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::Kernel => kernel_checks(opts),
        Suite::Derivatives => derivative_checks(opts),
        Suite::Twist => twist_checks(opts),
        Suite::Hessian => hessian_checks(opts),
        Suite::Spiral => spiral_checks(opts),
    }
}

// Kernel.

/// Geodesic between two real endpoints as a Euclidean half-circle.
#[derive(Clone, Copy)]
struct Arc {
    from: f64,
    to: f64,
    c: f64,
    r: f64,
}

impl Arc {
    fn new(from: f64, to: f64) -> Self {
        Self {
            from,
            to,
            c: (from + to) / 2.0,
            r: (to - from).abs() / 2.0,
        }
    }

    fn at(&self, phi: f64) -> (f64, f64) {
        (self.c + self.r * phi.cos(), self.r * phi.sin())
    }

    /// Unit tangent at `(x, y)` pointing toward `to`.
    fn tangent(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let ccw = (-y / self.r, (x - self.c) / self.r);
        if self.to < self.from {
            ccw
        } else {
            (-ccw.0, -ccw.1)
        }
    }
}

fn half_plane_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let chord = (a.0 - b.0).hypot(a.1 - b.1);
    2.0 * (chord / (2.0 * (a.1 * b.1).sqrt())).asinh()
}

fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let k = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - k * (hi - lo);
    let mut x2 = lo + k * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - k * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + k * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Distance between two disjoint half-circles by direct minimisation.
fn minimised_distance(g: &Arc, h: &Arc) -> f64 {
    let edge = 1e-9;
    golden(
        |a| {
            let p = g.at(a);
            golden(|b| half_plane_distance(p, h.at(b)), edge, PI - edge)
        },
        edge,
        PI - edge,
    )
}

fn real_endpoints(rng: &mut SampleRng) -> [f64; 4] {
    loop {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let far = (0..4).all(|i| (i + 1..4).all(|j| (x[i] - x[j]).abs() > 0.05));
        if far {
            return x;
        }
    }
}

fn pts(x: &[f64]) -> Vec<BoundaryPoint> {
    x.iter().map(|&v| BoundaryPoint::real(v)).collect()
}

fn links(x: &[f64; 4]) -> bool {
    let inside = |v: f64| (v - x[0]) * (v - x[1]) < 0.0;
    inside(x[2]) != inside(x[3])
}

fn kernel_checks(opts: &VerifyOptions) -> Vec<Check> {
    let n = opts.cases;
    let s = opts.tol_scale;
    let angle = cases(opts, 1, n, |rng| {
        let x = loop {
            let x = real_endpoints(rng);
            if links(&x) {
                break x;
            }
        };
        let (p, s, q, r) = (x[0], x[1], x[2], x[3]);
        let (g, h) = (Arc::new(p, s), Arc::new(q, r));
        let ix = (r_sq(&h) - r_sq(&g) + g.c * g.c - h.c * h.c) / (2.0 * (g.c - h.c));
        let iy = (g.r * g.r - (ix - g.c).powi(2)).sqrt();
        let (tg, th) = (g.tangent((ix, iy)), h.tangent((ix, iy)));
        let cos = tg.0 * th.0 + tg.1 * th.1;
        let b = pts(&x);
        let cr = cross_ratio(&b[0], &b[2], &b[3], &b[1]).map_err(msg)?;
        Ok(rel_err(cr, (1.0 + cos) / 2.0))
    });
    let distance = cases(opts, 2, n, |rng| {
        let x = loop {
            let x = real_endpoints(rng);
            if !links(&x) {
                break x;
            }
        };
        // Label so that p, s, q, r run around the circle in order.
        let (p, s) = (x[0], x[1]);
        let mut sorted = x;
        sorted.sort_by(f64::total_cmp);
        let at = sorted.iter().position(|&v| v == s).unwrap();
        let next = sorted[(at + 1) % 4];
        let prev = sorted[(at + 3) % 4];
        let q = if next == p { prev } else { next };
        let r = if q == x[2] { x[3] } else { x[2] };
        let d = minimised_distance(&Arc::new(p, s), &Arc::new(q, r));
        let b = pts(&[p, q, r, s]);
        let cr = cross_ratio(&b[0], &b[1], &b[2], &b[3]).map_err(msg)?;
        let g = Geodesic::between(p, s).map_err(msg)?;
        let h = Geodesic::between(q, r).map_err(msg)?;
        let dk = geodesic_distance(&g, &h).map_err(msg)?;
        Ok(rel_err(cr, -(d / 2.0).sinh().powi(2)).max(rel_err(dk, d) * 1e-2))
    });
    let invariance = cases(opts, 3, n, |rng| {
        let w = sample::random_isometry(rng);
        let b: Vec<BoundaryPoint> = (0..4).map(|_| sample::random_boundary_point(rng)).collect();
        let wb: Vec<BoundaryPoint> = b.iter().map(|p| w.apply_boundary(p)).collect();
        let cr = cross_ratio(&b[0], &b[1], &b[2], &b[3]).map_err(msg)?;
        let wcr = cross_ratio(&wb[0], &wb[1], &wb[2], &wb[3]).map_err(msg)?;
        let mut worst = rel_err(cr, wcr);
        let (p, q) = (sample::random_point(rng), sample::random_point(rng));
        worst = worst.max(rel_err(
            point_distance(&p, &q),
            point_distance(&w.apply_point(&p), &w.apply_point(&q)),
        ));
        let (g, h) = (sample::random_geodesic(rng), sample::random_geodesic(rng));
        let (wg, wh) = (w.apply_geodesic(&g), w.apply_geodesic(&h));
        if g.shares_endpoint(&h) {
            return Ok(worst);
        }
        match (intersect(&g, &h).map_err(msg)?, intersect(&wg, &wh).map_err(msg)?) {
            (Some(a), Some(b)) => worst = worst.max(rel_err(a.theta, b.theta)),
            (None, None) => {
                let (a, b) = (
                    geodesic_distance(&g, &h).map_err(msg)?,
                    geodesic_distance(&wg, &wh).map_err(msg)?,
                );
                worst = worst.max(rel_err(a, b));
            }
            _ => return Err("intersection not preserved".into()),
        }
        let length: f64 = rng.gen_range(0.5..5.0);
        let gamma = Isometry::diagonal((length / 2.0).exp()).conjugate_by(&sample::random_isometry(rng));
        let moved = gamma.conjugate_by(&w);
        worst = worst.max(rel_err(
            gamma.translation_length().map_err(msg)?,
            moved.translation_length().map_err(msg)?,
        ));
        let (axis, moved_axis) = (gamma.axis().map_err(msg)?, moved.axis().map_err(msg)?);
        let image = w.apply_geodesic(&axis);
        let apart = image.source().wedge(&moved_axis.source()).abs()
            + image.target().wedge(&moved_axis.target()).abs();
        Ok(worst.max(apart))
    });
    let pinned = {
        let conv = [-3.0, -0.5, 0.25, 2.0, 7.0]
            .iter()
            .map(|&x| {
                let b = pts(&[0.0, 1.0]);
                let inf = BoundaryPoint::real(f64::INFINITY);
                let v = cross_ratio(&b[0], &b[1], &inf, &BoundaryPoint::real(x)).map_err(msg)?;
                let all = [(x - 1.0) / x, x / (x - 1.0), 1.0 / x, x, 1.0 / (1.0 - x), 1.0 - x];
                let mut worst = rel_err(v, (x - 1.0) / x);
                for (c, want) in Convention::ALL.iter().zip(all) {
                    let got = c.evaluate(&b[0], &b[1], &inf, &BoundaryPoint::real(x)).map_err(msg)?;
                    worst = worst.max(rel_err(got, want));
                }
                Ok(worst)
            })
            .collect();
        tally("kernel.convention_pin", 1e-15 * s, conv)
    };
    vec![
        tally("kernel.cross_ratio_angle", 1e-10 * s, angle),
        tally("kernel.cross_ratio_distance", 1e-10 * s, distance),
        tally("kernel.isometry_invariance", 1e-12 * s, invariance),
        pinned,
    ]
}

fn r_sq(a: &Arc) -> f64 {
    a.r * a.r
}

// Derivatives.

fn fd_err(formula: f64, f: impl Fn(f64) -> f64, order: usize) -> Outcome {
    let spec = FdSpec::default_for(order).map_err(msg)?;
    let est = fd_derivative(f, &spec).map_err(msg)?;
    Ok(rel_err(formula, est.value))
}

fn derivative_checks(opts: &VerifyOptions) -> Vec<Check> {
    let n = opts.cases;
    let s = opts.tol_scale;
    let spec = ConfigSpec::default();
    let config = |rng: &mut SampleRng| sample::random_config(rng, &spec);
    let dual = cases(opts, 10, n, |rng| {
        let c = config(rng);
        Ok(rel_err(d1_length(&c), dual_derivative(&c).map_err(msg)?))
    });
    let fd = |order: usize, tag: u64| {
        cases(opts, tag, n, move |rng| {
            let c = config(rng);
            let formula = match order {
                1 => d1_length(&c),
                2 => d2_length(&c),
                _ => d3_length(&c),
            };
            let est = length_fd(&c, &FdSpec::default_for(order).map_err(msg)?).map_err(msg)?;
            Ok(rel_err(formula, est.value))
        })
    };
    let (fd1, fd2, fd3) = (fd(1, 11), fd(2, 12), fd(3, 13));
    let rates = cases(opts, 14, n, |rng| {
        let c = config(rng);
        let crossing = |t: f64, p: usize| deformed_crossings(&c, t).ok().map(|v| v[p]);
        let mut worst = 0.0f64;
        for p in 0..c.len() {
            let cos = fd_err(d_cos_theta(&c, p), |t| crossing(t, p).map_or(f64::NAN, |x| x.cos), 1)?;
            let sin = fd_err(d_sin_theta(&c, p), |t| crossing(t, p).map_or(f64::NAN, |x| x.sin), 1)?;
            worst = worst.max(cos).max(sin);
            for q in (0..c.len()).filter(|&q| q != p) {
                let formula = d_arc_distance(&c, p, q).map_err(msg)?;
                let arc = fd_err(formula, |t| deformed_arc_distance(&c, t, p, q).unwrap_or(f64::NAN), 1)?;
                worst = worst.max(arc);
            }
        }
        Ok(worst)
    });
    let pythagoras = cases(opts, 15, n, |rng| {
        let c = config(rng);
        let worst = c
            .crossings()
            .iter()
            .enumerate()
            .map(|(p, x)| {
                let (dc, ds) = (d_cos_theta(&c, p), d_sin_theta(&c, p));
                (x.sin * ds + x.cos * dc).abs() / dc.abs().max(ds.abs()).max(1.0)
            })
            .fold(0.0, f64::max);
        Ok(worst)
    });
    let recursive = cases(opts, 16, n, |rng| {
        let c = config(rng);
        let two = rel_err(recursive_derivative(&c, 2).map_err(msg)?, d2_length(&c));
        let three = rel_err(recursive_derivative(&c, 3).map_err(msg)?, d3_length(&c));
        Ok(two.max(three))
    });
    let convex = cases(opts, 17, n, |rng| {
        let c = config(rng);
        let w: Vec<f64> = c.weights().iter().map(|w| w.abs().max(1e-3)).collect();
        let c = c.with_weights(&w).map_err(msg)?;
        let h = 0.05;
        let f = |t: f64| deformed_length(&c, t).map_err(msg);
        let mut worst = 0.0f64;
        for k in -19..=19 {
            let t = k as f64 * h;
            let second = f(t + h)? - 2.0 * f(t)? + f(t - h)?;
            worst = worst.max(-second);
        }
        Ok(worst)
    });
    let multicurve = cases(opts, 18, n.div_ceil(4), |rng| {
        let parts = rng.gen_range(2..=3);
        let mc = sample::random_multicurve(rng, &spec, parts);
        let mut worst = 0.0f64;
        for (order, formula) in [(1, d1_length_multicurve(&mc)), (2, d2_length_multicurve(&mc))] {
            let est = multicurve_length_fd(&mc, &FdSpec::default_for(order).map_err(msg)?).map_err(msg)?;
            worst = worst.max(rel_err(formula, est.value) / if order == 1 { 1e-8 } else { 1e-6 });
        }
        Ok(worst)
    });
    vec![
        tally("derivatives.d1_vs_dual", 1e-10 * s, dual),
        tally("derivatives.d1_vs_fd", 1e-8 * s, fd1),
        tally("derivatives.d2_vs_fd", 1e-6 * s, fd2),
        tally("derivatives.d3_vs_fd", 1e-4 * s, fd3),
        tally("derivatives.angle_and_arc_rates_vs_fd", 1e-6 * s, rates),
        tally("derivatives.pythagorean_identity", 1e-12 * s, pythagoras),
        tally("derivatives.recursive_vs_closed_form", 1e-10 * s, recursive),
        tally("derivatives.convexity", 1e-9 * s, convex),
        tally("derivatives.multicurve_vs_fd", s, multicurve),
    ]
}

// Twist.

fn scene_with_h(rng: &mut SampleRng) -> crate::Result<TwistScene> {
    let scene = sample::random_twist_scene(rng, 3);
    let mut probes = vec![scene.h()];
    probes.extend(scene.probes().iter().map(|p| p.geodesic));
    TwistScene::new(scene.gamma(), scene.h(), &probes)
}

fn twist_checks(opts: &VerifyOptions) -> Vec<Check> {
    let n = opts.cases;
    let s = opts.tol_scale;
    let nan = |r: crate::Result<f64>| r.unwrap_or(f64::NAN);
    let ell = cases(opts, 20, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        fd_err(sc.ell_prime(), |t| nan(sc.length_at(t)), 1)
    });
    let anchor = cases(opts, 21, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        Ok((sc.f_l_prime(0).map_err(msg)? + 0.5).abs())
    });
    let feet = cases(opts, 22, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        let mut worst = 0.0f64;
        for l in 0..sc.probes().len() {
            let e = fd_err(sc.f_l_prime(l).map_err(msg)?, |t| nan(sc.f_l(l, t)), 1)?;
            worst = worst.max(e);
        }
        Ok(worst)
    });
    let separation = cases(opts, 23, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        let mut worst = 0.0f64;
        for l in 0..sc.probes().len() {
            for m in 0..sc.probes().len() {
                let formula = sc.ell_ll_prime(l, m).map_err(msg)?;
                let e = fd_err(formula, |t| nan(sc.probe_separation(l, m, t)), 1)?;
                worst = worst.max(e);
            }
        }
        Ok(worst)
    });
    let angle = cases(opts, 24, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        let mut worst = 0.0f64;
        for l in 0..sc.probes().len() {
            let e = fd_err(sc.d_cos_theta_l(l).map_err(msg)?, |t| nan(sc.cos_theta_l_at(l, t)), 1)?;
            worst = worst.max(e);
        }
        Ok(worst)
    });
    let rotation = cases(opts, 25, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        fd_err(sc.angular_velocity(), |t| nan(sc.rotation_angle(t)), 1)
    });
    let grid: Vec<f64> = (0..=40).map(|k| -1.0 + k as f64 * 0.05).collect();
    let midpoint = cases(opts, 26, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        grid.iter()
            .map(|&t| sc.midpoint_invariance(t).map_err(msg))
            .try_fold(0.0f64, |a, r| Ok(a.max(r?)))
    });
    let theta = cases(opts, 27, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        grid.iter()
            .map(|&t| sc.theta_residual(t).map_err(msg))
            .try_fold(0.0f64, |a, r| Ok(a.max(r?)))
    });
    let cross = cases(opts, 28, n, |rng| {
        let sc = scene_with_h(rng).map_err(msg)?;
        let single = build_config(sc.gamma(), &[(sc.h(), 1.0)], None).map_err(msg)?;
        let mut worst = rel_err(sc.d_cos_theta_l(0).map_err(msg)?, d2_length(&single));
        // A probe carrying zero mass next to h: its angle moves as in the twist.
        for l in 1..sc.probes().len() {
            let leaves = [(sc.h(), 1.0), (sc.probes()[l].geodesic, 0.0)];
            let c = build_config(sc.gamma(), &leaves, None).map_err(msg)?;
            let p = c
                .leaves()
                .iter()
                .position(|leaf| leaf.weight == 0.0)
                .expect("probe leaf kept");
            worst = worst.max(rel_err(sc.d_cos_theta_l(l).map_err(msg)?, d_cos_theta(&c, p)));
        }
        Ok(worst)
    });
    vec![
        tally("twist.length_rate_vs_fd", 1e-7 * s, ell),
        tally("twist.anchor_foot_rate", 1e-12 * s, anchor),
        tally("twist.foot_rates_vs_fd", 1e-7 * s, feet),
        tally("twist.separation_rates_vs_fd", 1e-7 * s, separation),
        tally("twist.angle_rates_vs_fd", 1e-7 * s, angle),
        tally("twist.rotation_rate_vs_fd", 1e-7 * s, rotation),
        tally("twist.midpoint_on_axis", 1e-9 * s, midpoint),
        tally("twist.equal_angles", 1e-10 * s, theta),
        tally("twist.matches_shear_formulas", 1e-12 * s, cross),
    ]
}

// Hessian.

fn hessian_checks(opts: &VerifyOptions) -> Vec<Check> {
    let n = opts.cases;
    let s = opts.tol_scale;
    let spec = ConfigSpec::default();
    let positive = cases(opts, 30, n, |rng| {
        let c = sample::random_signed_config(rng, &spec);
        let d2 = d2_length(&c);
        Ok(if d2 > 0.0 { 0.0 } else { 1.0 + d2.abs() })
    });
    let bound = cases(opts, 31, n, |rng| {
        let c = sample::random_config(rng, &spec);
        let d2 = d2_length(&c);
        let b = hessian_lower_bound(&c).map_err(msg)?;
        Ok(((b - d2) / bound_scale(&c)).max(0.0))
    });
    let gauss = cases(opts, 32, 2 * n, |rng| {
        let size = rng.gen_range(2..=6);
        let a = if rng.gen_bool(0.7) {
            sample::random_dominant_matrix(rng, size)
        } else {
            let mut m = vec![vec![0.0; size]; size];
            for i in 0..size {
                for j in 0..=i {
                    let v = rng.gen_range(-1.0..1.0);
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            SymMatrix::new(m).map_err(msg)?
        };
        let cert = gauss_positivity(&a);
        let strict = match cert.verdict {
            Verdict::Definite => Some(true),
            Verdict::Semidefinite => Some(false),
            Verdict::NotApplicable => match generic_check(&a).class {
                Definiteness::PositiveDefinite => Some(true),
                Definiteness::PositiveSemidefinite => Some(false),
                Definiteness::Indefinite => None,
            },
        };
        let mut counterexamples = 0;
        for _ in 0..100 {
            let x: Vec<f64> = (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q = a.quadratic_form(&x);
            let bad = match strict {
                Some(true) => q <= 0.0,
                Some(false) => q < -1e-12 * a.quadratic_form(&vec![1.0; size]).abs().max(1.0),
                None => false,
            };
            if bad {
                counterexamples += 1;
            }
        }
        Ok(counterexamples as f64)
    });
    vec![
        tally("hessian.signed_weights_positive", 0.0, positive),
        tally("hessian.lower_bound_holds", 1e-10 * s, bound),
        tally("hessian.gauss_vs_sampling", 0.0, gauss),
    ]
}

// Spiral.

fn spiral_checks(opts: &VerifyOptions) -> Vec<Check> {
    let s = opts.tol_scale;
    let closed = cases(opts, 40, opts.cases.min(200), |rng| {
        let length: f64 = rng.gen_range(0.5..4.0);
        let (a, b): (f64, f64) = (rng.gen_range(-0.2..1.0), rng.gen_range(-0.2..1.0));
        let x0 = -rng.gen_range(0.5..2.0);
        let x1 = x0 * (-rng.gen_range(0.1..0.9) * length).exp();
        let g0 = Geodesic::between(x0, f64::INFINITY).map_err(msg)?;
        let g1 = Geodesic::between(x1, f64::INFINITY).map_err(msg)?;
        let weights = SpiralWeights {
            p_masses: vec![0.0; 3],
            q_masses: vec![0.0; 3],
            total: 0.0,
        };
        let c = spiral_config(length, &g0, &g1, weights, 3).map_err(msg)?;
        let rho = c.closed_leaf_rho(a, b);
        let exact = length + a + b;
        let via_matrix = rho.to_isometry().translation_length().map_err(msg)?;
        Ok((rho.translation_length() - exact).abs().max(rel_err(via_matrix, exact) * 1e-3))
    });
    let decay = {
        let outcome = spiral_convergence(&SpiralParams::geometric(0.2, 24))
            .map_err(msg)
            .and_then(|trace| {
                if trace.iter().any(|t| t.matrix_delta.is_nan() || t.matrix_delta < 0.0) {
                    return Err("negative or undefined delta".into());
                }
                trace
                    .first()
                    .and_then(|t| t.fitted_rate)
                    .ok_or_else(|| "no fitted rate".to_string())
            });
        // The fitted log-slope itself, which must be at most -0.3.
        tally("spiral.partial_products_cauchy", -0.3, vec![outcome])
    };
    let divergent = {
        let m = 40;
        let weights = SpiralWeights {
            p_masses: (0..=m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
            q_masses: vec![0.0; m + 1],
            total: 0.4,
        };
        let outcome = SpiralParams {
            weights,
            ..SpiralParams::geometric(0.5, m)
        }
        .build()
        .map_err(msg)
        .map(|c| {
            let psi: Vec<f64> = (1..=m).map(|k| c.psi(k).scale.ln()).collect();
            let tail = &psi[m / 2..];
            let spread = tail.iter().cloned().fold(f64::MIN, f64::max)
                - tail.iter().cloned().fold(f64::MAX, f64::min);
            let drift = (1..=m)
                .map(|k| (c.interleaved(k).scale.ln() - 0.4).abs())
                .fold(0.0, f64::max);
            // Oscillation of ψ must stay near 1; the interleaved dilation must not move.
            (1.0 - spread).abs().max(drift)
        });
        tally("spiral.naive_product_diverges", 1e-12 * s, vec![outcome])
    };
    vec![
        tally("spiral.closed_leaf_identity", 1e-12 * s, closed),
        decay,
        divergent,
    ]
}
