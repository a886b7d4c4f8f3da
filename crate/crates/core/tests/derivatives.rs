use std::f64::consts::FRAC_PI_2;

use shearlab::derivatives::{
    d1_length, d1_length_multicurve, d2_length, d2_length_multicurve, d3_length, d3_length_multicurve,
    d_arc_distance, d_cos_theta, d_sin_theta, length_derivative, recursive_derivative, WeightedMulticurve,
};
use shearlab::kernel::Isometry;
use shearlab::oracles::{length_fd, FdSpec};
use shearlab::sample::{random_config, random_multicurve, rng, standard_leaf, ConfigSpec};
use shearlab::shear::{build_config, ShearConfig};
use shearlab::verify::rel_err;
use shearlab::Error;

fn gamma(length: f64) -> Isometry {
    Isometry::diagonal((length / 2.0).exp())
}

fn one_leaf(length: f64, theta: f64, a: f64) -> ShearConfig {
    build_config(gamma(length), &[(standard_leaf(0.3, theta), a)], None).unwrap()
}

fn fd(c: &ShearConfig, order: usize) -> f64 {
    length_fd(c, &FdSpec::default_for(order).unwrap()).unwrap().value
}

fn random_configs(seed: u64, count: usize) -> Vec<ShearConfig> {
    let mut r = rng(seed);
    (0..count).map(|_| random_config(&mut r, &ConfigSpec::default())).collect()
}

#[test]
fn perpendicular_leaf() {
    let (l, a) = (2.0, 1.5);
    let c = one_leaf(l, FRAC_PI_2, a);
    assert!(d1_length(&c).abs() < 1e-15);
    let expected = a * a / (2.0 * (l / 2.0).tanh());
    assert!((d2_length(&c) - expected).abs() < 1e-13);
    assert!(d3_length(&c).abs() < 1e-13);
    assert!(rel_err(d2_length(&c), fd(&c, 2)) < 1e-6);
}

#[test]
fn single_leaf_closed_forms() {
    for (l, theta, a) in [(1.0, 0.7, 1.0), (3.0, 2.0, -0.5), (0.6, 1.3, 2.0)] {
        let c = one_leaf(l, theta, a);
        let (half, sin, cos) = (l / 2.0, theta.sin(), theta.cos());
        assert!((d1_length(&c) - a * cos).abs() < 1e-14);
        let d2 = a * a * sin * sin * half.cosh() / (2.0 * half.sinh());
        assert!(rel_err(d2_length(&c), d2) < 1e-13);
        let d3 = -3.0 * a.powi(3) * sin * sin * cos * (2.0 + l.cosh()) / (12.0 * half.sinh().powi(2));
        assert!(rel_err(d3_length(&c), d3) < 1e-13);
        for order in 1..=3 {
            let tol = [1e-8, 1e-6, 1e-4][order - 1];
            let formula = length_derivative(&c, order).unwrap();
            assert!(rel_err(formula, fd(&c, order)) < tol, "order {order}");
        }
    }
}

#[test]
fn closed_forms_match_fd() {
    for c in random_configs(21, 40) {
        assert!(rel_err(d1_length(&c), fd(&c, 1)) < 1e-8);
        assert!(rel_err(d2_length(&c), fd(&c, 2)) < 1e-6);
        assert!(rel_err(d3_length(&c), fd(&c, 3)) < 1e-4);
    }
}

#[test]
fn reversed_axis_gives_the_same_derivatives() {
    for c in random_configs(22, 40) {
        let r = c.reversed().unwrap();
        for order in 1..=3 {
            let (a, b) = (length_derivative(&c, order).unwrap(), length_derivative(&r, order).unwrap());
            assert!(rel_err(a, b) < 1e-10, "order {order}: {a} vs {b}");
        }
    }
}

#[test]
fn basepoint_does_not_matter() {
    for c in random_configs(23, 30) {
        let moved = c.with_basepoint(c.axis().point_at(0.37 * c.length())).unwrap();
        for order in 1..=3 {
            let (a, b) = (length_derivative(&c, order).unwrap(), length_derivative(&moved, order).unwrap());
            assert!(rel_err(a, b) < 1e-10);
        }
    }
}

#[test]
fn angle_rates_are_consistent() {
    for c in random_configs(24, 40) {
        for (p, x) in c.crossings().iter().enumerate() {
            let (dc, ds) = (d_cos_theta(&c, p), d_sin_theta(&c, p));
            assert!((x.sin * ds + x.cos * dc).abs() < 1e-12 * dc.abs().max(1.0));
        }
        assert!(rel_err(recursive_derivative(&c, 2).unwrap(), d2_length(&c)) < 1e-10);
        assert!(rel_err(recursive_derivative(&c, 3).unwrap(), d3_length(&c)) < 1e-10);
    }
}

#[test]
fn arc_rates_add_up_to_the_length_rate() {
    for c in random_configs(25, 40) {
        for p in 0..c.len() {
            for q in (0..c.len()).filter(|&q| q != p) {
                let sum = d_arc_distance(&c, p, q).unwrap() + d_arc_distance(&c, q, p).unwrap();
                assert!(rel_err(sum, d1_length(&c)) < 1e-10);
            }
        }
    }
}

#[test]
fn bad_requests() {
    let c = one_leaf(2.0, 1.0, 1.0);
    assert!(matches!(d_arc_distance(&c, 0, 0), Err(Error::InvalidParameter(_))));
    assert!(matches!(length_derivative(&c, 4), Err(Error::UnsupportedOrder(4))));
    assert!(matches!(recursive_derivative(&c, 1), Err(Error::UnsupportedOrder(1))));
}

/// The third-derivative sum with a pluggable kernel for distinct indices.
fn d3_with(c: &ShearConfig, kernel: impl Fn(usize, usize, usize) -> f64) -> f64 {
    let n = c.len();
    let x = c.crossings();
    let sh = (c.length() / 2.0).sinh();
    let mut total = 0.0;
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                total += x[p].weight * x[q].weight * x[r].weight * x[p].sin * x[q].sin * x[r].cos
                    * kernel(p, q, r);
            }
        }
    }
    -3.0 * total / (4.0 * sh * sh)
}

#[test]
fn third_derivative_kernel_reading() {
    let configs: Vec<ShearConfig> = random_configs(26, 60).into_iter().filter(|c| c.len() >= 3).collect();
    assert!(configs.len() >= 20);
    let (mut shipped, mut unoriented, mut forward) = (0, 0, 0);
    for c in &configs {
        let est = fd(c, 3);
        let ell = |p: usize, q: usize| if p == q { 0.0 } else { c.arc_distance_oriented(p, q) };
        if rel_err(d3_length(c), est) > 1e-4 {
            shipped += 1;
        }
        if rel_err(d3_with(c, |p, q, _| ell(p, q).min(ell(q, p)).cosh()), est) > 1e-4 {
            unoriented += 1;
        }
        if rel_err(d3_with(c, |p, q, _| ell(p, q).cosh()), est) > 1e-4 {
            forward += 1;
        }
    }
    assert_eq!(shipped, 0);
    assert!(unoriented > configs.len() / 2, "unoriented failed {unoriented}");
    assert!(forward > configs.len() / 2, "forward failed {forward}");
}

#[test]
fn multicurve_is_linear_in_the_weights() {
    let mut r = rng(27);
    let mc = random_multicurve(&mut r, &ConfigSpec::default(), 3);
    let by_hand = |k: usize| -> f64 {
        mc.components().iter().map(|(c, mu)| mu * length_derivative(c, k).unwrap()).sum()
    };
    assert!(rel_err(d1_length_multicurve(&mc), by_hand(1)) < 1e-13);
    assert!(rel_err(d2_length_multicurve(&mc), by_hand(2)) < 1e-13);
    assert!(rel_err(d3_length_multicurve(&mc), by_hand(3)) < 1e-13);
    let doubled = mc.scaled(2.0).unwrap();
    assert!(rel_err(d2_length_multicurve(&doubled), 2.0 * d2_length_multicurve(&mc)) < 1e-13);
    assert!(WeightedMulticurve::new(vec![]).is_err());
    let c = one_leaf(2.0, 1.0, 1.0);
    assert!(WeightedMulticurve::new(vec![(c, -1.0)]).is_err());
}
