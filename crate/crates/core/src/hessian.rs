//! Positivity of the second derivative: Gauss elimination on symmetric
//! matrices with nonnegative entries and dominant diagonal, the Hessian in
//! Dirac directions, and the resulting lower bound.

use crate::derivatives::WeightedMulticurve;
use crate::error::{Error, Result};
use crate::shear::ShearConfig;
use crate::sum::{pairwise, sum_by};

/// Largest tolerated `|a_ij − a_ji|` relative to the largest entry.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Pivots below this, relative to the largest entry, count as zero.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    a: Vec<Vec<f64>>,
}

impl SymMatrix {
    /// Checks squareness and symmetry, then averages `a_ij` with `a_ji`.
    pub fn new(mut a: Vec<Vec<f64>>) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        if a.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        let scale = a.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (a[i][j] - a[j][i]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                let m = (a[i][j] + a[j][i]) / 2.0;
                a[i][j] = m;
                a[j][i] = m;
            }
        }
        Ok(Self { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let n = self.n();
        sum_by(n * n, |k| x[k / n] * self.a[k / n][k % n] * x[k % n])
    }

    fn scale(&self) -> f64 {
        self.a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Leading principal minor of order `k`, by cofactor-free elimination
    /// with partial pivoting.
    pub fn leading_minor(&self, k: usize) -> f64 {
        let mut m: Vec<Vec<f64>> = self.a[..k].iter().map(|r| r[..k].to_vec()).collect();
        let mut det = 1.0;
        for c in 0..k {
            let p = (c..k).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
            if m[p][c] == 0.0 {
                return 0.0;
            }
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c];
            for r in c + 1..k {
                let f = m[r][c] / m[c][c];
                for j in c..k {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
        det
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Definite,
    Semidefinite,
    /// The dominance hypotheses fail; see [`PositivityCertificate::generic`].
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// `P A Pᵀ = L D Lᵀ` with symmetric diagonal pivoting.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericCheck {
    pub d: Vec<f64>,
    pub class: Definiteness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityCertificate {
    pub verdict: Verdict,
    /// Pivots of elimination without row exchanges.
    pub pivots: Vec<f64>,
    /// `d_i = min_{j≠i} (a_ii − a_ij)`, so that `xᵀAx ≥ Σ d_i x_i²`.
    pub lower_bound_coeffs: Vec<f64>,
    pub generic: Option<GenericCheck>,
}

enum Hypotheses {
    Strict,
    Weak,
    Fail(usize, usize),
}

fn hypotheses(a: &SymMatrix) -> Hypotheses {
    let n = a.n();
    let mut strict = true;
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) < 0.0 {
                return Hypotheses::Fail(i, j);
            }
            if j != i {
                if a.get(i, i) < a.get(i, j) {
                    return Hypotheses::Fail(i, j);
                }
                if a.get(i, i) == a.get(i, j) {
                    strict = false;
                }
            }
        }
    }
    if strict {
        Hypotheses::Strict
    } else {
        Hypotheses::Weak
    }
}

/// Pivots of plain Gaussian elimination. A (numerically) zero pivot leaves
/// its row unused, which is what happens on the boundary of the cone.
fn plain_pivots(a: &SymMatrix) -> Vec<f64> {
    let n = a.n();
    let tol = PIVOT_TOL * a.scale();
    let mut m = a.a.clone();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = m[k][k];
        pivots.push(p);
        if p.abs() <= tol {
            continue;
        }
        for r in k + 1..n {
            let f = m[r][k] / p;
            for c in k..n {
                m[r][c] -= f * m[k][c];
            }
        }
    }
    pivots
}

pub fn generic_check(a: &SymMatrix) -> GenericCheck {
    let n = a.n();
    let tol = PIVOT_TOL * a.scale().max(f64::MIN_POSITIVE);
    let mut m = a.a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut d = Vec::with_capacity(n);
    let mut class = Definiteness::PositiveDefinite;
    while !active.is_empty() {
        let (pos, &k) = active
            .iter()
            .enumerate()
            .max_by(|x, y| m[*x.1][*x.1].total_cmp(&m[*y.1][*y.1]))
            .unwrap();
        let p = m[k][k];
        d.push(p);
        active.remove(pos);
        if p < -tol {
            class = Definiteness::Indefinite;
            break;
        }
        if p <= tol {
            // Largest remaining diagonal is zero: PSD only if the rest vanishes.
            let rest_zero = active
                .iter()
                .all(|&i| active.iter().all(|&j| m[i][j].abs() <= tol));
            class = if rest_zero {
                Definiteness::PositiveSemidefinite
            } else {
                Definiteness::Indefinite
            };
            d.extend(active.iter().map(|&i| m[i][i]));
            break;
        }
        for &i in &active {
            let f = m[i][k] / p;
            for &j in &active {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    GenericCheck { d, class }
}

fn lower_bound_coeffs(a: &SymMatrix) -> Vec<f64> {
    let n = a.n();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| a.get(i, i) - a.get(i, j))
                .fold(a.get(i, i), f64::min)
        })
        .collect()
}

/// Elimination without row exchanges. Row dominance alone do not force
/// definiteness (`[[1, .9, 0], [.9, 1, .9], [0, .9, 1]]` satisfies them and is
/// indefinite), so a verdict is issued only when the elimination confirms
/// it; otherwise the result is `NotApplicable` with the generic check.
pub fn gauss_positivity(a: &SymMatrix) -> PositivityCertificate {
    let pivots = plain_pivots(a);
    let lower_bound_coeffs = lower_bound_coeffs(a);
    let fallback = || {
        let generic = generic_check(a);
        let verdict = match (&generic.class, hypotheses(a)) {
            (_, Hypotheses::Fail(..)) | (Definiteness::Indefinite, _) => Verdict::NotApplicable,
            _ => Verdict::Semidefinite,
        };
        (verdict, Some(generic))
    };
    let (verdict, generic) = match hypotheses(a) {
        Hypotheses::Strict if pivots.iter().all(|&p| p > 0.0) => (Verdict::Definite, None),
        _ => fallback(),
    };
    PositivityCertificate {
        verdict,
        pivots,
        lower_bound_coeffs,
        generic,
    }
}

/// `(xᵀAx, Σ d_i x_i²)`; requires `a_ij ≥ 0` and `a_ii ≥ a_ij`.
pub fn quadratic_lower_bound(a: &SymMatrix, x: &[f64]) -> Result<(f64, f64)> {
    if x.len() != a.n() {
        return Err(Error::InvalidParameter(format!(
            "vector of length {} for a {}x{} matrix",
            x.len(),
            a.n(),
            a.n()
        )));
    }
    if let Hypotheses::Fail(row, col) = hypotheses(a) {
        return Err(Error::HypothesesFail { row, col });
    }
    let d = lower_bound_coeffs(a);
    let bound = sum_by(x.len(), |i| d[i] * x[i] * x[i]);
    Ok((a.quadratic_form(x), bound))
}

/// `H_ij = cosh(ℓ/2 − ℓ_{p_i p_j})`.
pub fn hessian_matrix(config: &ShearConfig) -> SymMatrix {
    let n = config.len();
    let half = config.length() / 2.0;
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let ell = if i == j { 0.0 } else { config.arc_distance_oriented(i, j) };
                    (half - ell).cosh()
                })
                .collect()
        })
        .collect();
    SymMatrix { a }
}

/// `B_i = a_i sin θ_i`, so that the second derivative is `BᵀHB / (2 sinh(ℓ/2))`.
pub fn hessian_vector(config: &ShearConfig) -> Vec<f64> {
    config.crossings().iter().map(|c| c.weight * c.sin).collect()
}

/// Distance from each crossing to the nearest other one.
pub fn gaps(config: &ShearConfig) -> Vec<f64> {
    let n = config.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| config.arc_distance(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

fn bound_term(half: f64, eps: f64, b: f64) -> f64 {
    (half - eps).sinh() * eps * b * b / (2.0 * half.sinh())
}

/// `Σ_i sinh(ℓ/2 − ε_i) ε_i a_i² sin²θ_i / (2 sinh(ℓ/2))`, a lower bound for
/// the second derivative.
pub fn hessian_lower_bound(config: &ShearConfig) -> Result<f64> {
    if config.len() < 2 {
        return Err(Error::SingleCrossing);
    }
    let half = config.length() / 2.0;
    let b = hessian_vector(config);
    let eps = gaps(config);
    Ok(sum_by(b.len(), |i| bound_term(half, eps[i], b[i])))
}

/// Scale for comparing the second derivative with its bound:
/// `cosh(ℓ/2) Σ a_i²`.
pub fn bound_scale(config: &ShearConfig) -> f64 {
    let a2: f64 = config.weights().iter().map(|w| w * w).sum();
    (config.length() / 2.0).cosh() * a2
}

/// The bound for `Σ_k μ_k ℓ_k''`.
///
/// With `arcs = None` each component contributes its own bound. With
/// designated crossing indices, crossing `i` of every component is taken to
/// lie on the same transverse arc, whose gap `ε_i` is the smallest gap of
/// that crossing over all components.
pub fn hessian_lower_bound_multicurve(mc: &WeightedMulticurve, arcs: Option<&[usize]>) -> Result<f64> {
    let parts = mc.components();
    if parts.iter().any(|(c, _)| c.len() < 2) {
        return Err(Error::SingleCrossing);
    }
    let Some(arcs) = arcs else {
        let terms = parts
            .iter()
            .map(|(c, mu)| Ok(mu * hessian_lower_bound(c)?))
            .collect::<Result<Vec<f64>>>()?;
        return Ok(pairwise(&terms));
    };
    if let Some(&i) = arcs.iter().find(|&&i| parts.iter().any(|(c, _)| i >= c.len())) {
        return Err(Error::InvalidParameter(format!("arc index {i} out of range")));
    }
    let component_gaps: Vec<Vec<f64>> = parts.iter().map(|(c, _)| gaps(c)).collect();
    let eps: Vec<f64> = arcs
        .iter()
        .map(|&i| component_gaps.iter().map(|g| g[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let terms: Vec<f64> = parts
        .iter()
        .map(|(c, mu)| {
            let half = c.length() / 2.0;
            let b = hessian_vector(c);
            mu * sum_by(arcs.len(), |k| bound_term(half, eps[k], b[arcs[k]]))
        })
        .collect();
    Ok(pairwise(&terms))
}
