use std::f64::consts::FRAC_PI_2;

use shearlab::derivatives::{d2_length, d2_length_multicurve, WeightedMulticurve};
use shearlab::hessian::{
    bound_scale, gaps, gauss_positivity, generic_check, hessian_lower_bound, hessian_lower_bound_multicurve,
    hessian_matrix, hessian_vector, quadratic_lower_bound, Definiteness, SymMatrix, Verdict,
};
use shearlab::kernel::Isometry;
use shearlab::sample::{random_config, random_dominant_matrix, rng, standard_leaf, ConfigSpec};
use shearlab::shear::{build_config, ShearConfig};
use shearlab::Error;

fn gamma(length: f64) -> Isometry {
    Isometry::diagonal((length / 2.0).exp())
}

fn m(rows: &[&[f64]]) -> SymMatrix {
    SymMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn positive(seed: u64, count: usize) -> Vec<ShearConfig> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let c = random_config(&mut r, &ConfigSpec::default());
            let w: Vec<f64> = c.weights().iter().map(|w| w.abs().max(1e-3)).collect();
            c.with_weights(&w).unwrap()
        })
        .collect()
}

#[test]
fn antipodal_pair() {
    let l: f64 = 3.0;
    let c = build_config(
        gamma(l),
        &[(standard_leaf(0.0, 1.2), 1.0), (standard_leaf(l / 2.0, 1.4), -0.5)],
        None,
    )
    .unwrap();
    let h = hessian_matrix(&c);
    let ch = (l / 2.0).cosh();
    for (i, j, v) in [(0, 0, ch), (1, 1, ch), (0, 1, 1.0), (1, 0, 1.0)] {
        assert!((h.get(i, j) - v).abs() < 1e-12);
    }
    let b = hessian_vector(&c);
    let quad = h.quadratic_form(&b) / (2.0 * (l / 2.0).sinh());
    assert!((quad - d2_length(&c)).abs() < 1e-12);
    assert!((gaps(&c)[0] - l / 2.0).abs() < 1e-12);
}

#[test]
fn quadratic_form_is_the_second_derivative() {
    let mut r = rng(31);
    for _ in 0..50 {
        let c = random_config(&mut r, &ConfigSpec::default());
        let h = hessian_matrix(&c);
        let quad = h.quadratic_form(&hessian_vector(&c)) / (2.0 * (c.length() / 2.0).sinh());
        assert!((quad - d2_length(&c)).abs() <= 1e-12 * d2_length(&c).abs().max(1.0));
    }
}

#[test]
fn bound_example() {
    // ℓ = 2, two crossings half a unit apart, so ε = 0.5 for both
    let (a, theta) = (1.3, 1.1);
    let c = build_config(
        gamma(2.0),
        &[(standard_leaf(0.2, theta), a), (standard_leaf(0.7, theta), a)],
        None,
    )
    .unwrap();
    let s2 = theta.sin().powi(2);
    let expected = 2.0 * 0.5f64.sinh() * 0.5 * a * a * s2 / (2.0 * 1f64.sinh());
    assert!((hessian_lower_bound(&c).unwrap() - expected).abs() < 1e-12);
    assert!(hessian_lower_bound(&c).unwrap() <= d2_length(&c));
}

#[test]
fn bound_needs_two_crossings() {
    let c = build_config(gamma(2.0), &[(standard_leaf(0.0, FRAC_PI_2), 1.0)], None).unwrap();
    assert!(matches!(hessian_lower_bound(&c), Err(Error::SingleCrossing)));
}

#[test]
fn bound_holds_for_positive_weights() {
    for c in positive(32, 300) {
        let bound = hessian_lower_bound(&c).unwrap();
        assert!(bound >= 0.0);
        assert!(d2_length(&c) - bound >= -1e-12 * bound_scale(&c));
    }
}

#[test]
fn bound_without_the_prefactor_fails() {
    let violations = positive(33, 300)
        .iter()
        .filter(|c| {
            let bare = hessian_lower_bound(c).unwrap() * 2.0 * (c.length() / 2.0).sinh();
            bare > d2_length(c)
        })
        .count();
    assert!(violations > 0);
}

#[test]
fn hessians_are_positive_definite() {
    for c in positive(34, 100) {
        let g = generic_check(&hessian_matrix(&c));
        assert_ne!(g.class, Definiteness::Indefinite);
    }
}

#[test]
fn pivots_multiply_to_leading_minors() {
    let mut r = rng(35);
    for n in 2..=6 {
        for _ in 0..20 {
            let a = random_dominant_matrix(&mut r, n);
            let cert = gauss_positivity(&a);
            let mut product = 1.0;
            for k in 1..=n {
                product *= cert.pivots[k - 1];
                let minor = a.leading_minor(k);
                assert!((product - minor).abs() <= 1e-9 * minor.abs().max(1.0), "n={n} k={k}");
            }
        }
    }
}

#[test]
fn certificates() {
    let cert = gauss_positivity(&m(&[&[2.0, 1.0], &[1.0, 2.0]]));
    assert_eq!(cert.verdict, Verdict::Definite);
    assert_eq!(cert.lower_bound_coeffs, vec![1.0, 1.0]);
    assert!(cert.generic.is_none());

    let cert = gauss_positivity(&m(&[&[1.0, 1.0], &[1.0, 1.0]]));
    assert_eq!(cert.verdict, Verdict::Semidefinite);
    assert_eq!(cert.generic.unwrap().class, Definiteness::PositiveSemidefinite);

    let cert = gauss_positivity(&m(&[&[1.0, -0.5], &[-0.5, 1.0]]));
    assert_eq!(cert.verdict, Verdict::NotApplicable);
    assert_eq!(cert.generic.unwrap().class, Definiteness::PositiveDefinite);

    let bad = m(&[&[1.0, 0.9, 0.0], &[0.9, 1.0, 0.9], &[0.0, 0.9, 1.0]]);
    let cert = gauss_positivity(&bad);
    assert_eq!(cert.verdict, Verdict::NotApplicable);
    assert_eq!(cert.generic.unwrap().class, Definiteness::Indefinite);
}

#[test]
fn quadratic_bound_inputs() {
    let a = m(&[&[3.0, 1.0], &[1.0, 2.0]]);
    let (value, bound) = quadratic_lower_bound(&a, &[1.0, -1.0]).unwrap();
    assert_eq!(value, 3.0);
    assert_eq!(bound, 3.0);
    assert!(quadratic_lower_bound(&a, &[1.0]).is_err());
    let neg = m(&[&[1.0, -0.1], &[-0.1, 1.0]]);
    assert!(matches!(quadratic_lower_bound(&neg, &[1.0, 1.0]), Err(Error::HypothesesFail { .. })));
    assert!(SymMatrix::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
    assert!(SymMatrix::new(vec![vec![1.0, 2.0]]).is_err());
}

#[test]
fn multicurve_bounds() {
    let parts = positive(36, 3);
    let mc = WeightedMulticurve::new(parts.iter().cloned().zip([0.5, 1.0, 2.0]).collect()).unwrap();
    let summed: f64 = mc.components().iter().map(|(c, mu)| mu * hessian_lower_bound(c).unwrap()).sum();
    let free = hessian_lower_bound_multicurve(&mc, None).unwrap();
    assert!((free - summed).abs() < 1e-12);
    assert!(free <= d2_length_multicurve(&mc));

    // copies of one curve share their arcs, so the designated bound agrees
    let c = parts[0].clone();
    let all: Vec<usize> = (0..c.len()).collect();
    let twins = WeightedMulticurve::new(vec![(c.clone(), 1.0), (c.clone(), 0.5)]).unwrap();
    let designated = hessian_lower_bound_multicurve(&twins, Some(&all)).unwrap();
    assert!((designated - 1.5 * hessian_lower_bound(&c).unwrap()).abs() < 1e-12);
    assert!(hessian_lower_bound_multicurve(&twins, Some(&[99])).is_err());
}
