use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use shearlab::derivatives::{d2_length, d2_length_multicurve, length_derivative, length_derivative_multicurve};
use shearlab::hessian::{
    bound_scale, gauss_positivity, hessian_lower_bound, hessian_lower_bound_multicurve, hessian_matrix,
    hessian_vector, Definiteness, PositivityCertificate, Verdict,
};
use shearlab::oracles::{dual_derivative, length_fd, multicurve_length_fd, spiral_convergence, FdSpec, SpiralParams};
use shearlab::shear::{deformed_crossings, ShearConfig};
use shearlab::twist::TwistScene;
use shearlab::verify::{rel_err, run_suite, Suite, VerifyOptions};

use crate::error::{CliError, CliResult};
use crate::output::{float, write_csv};
use crate::scene::Scene;

/// What a command produced: the report, plus whether its checks held.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

pub enum Report {
    Json(Value),
    Text(String),
}

impl Outcome {
    fn json(report: Value, passed: bool) -> Self {
        Self {
            report: Report::Json(report),
            passed,
        }
    }
}

const FD_TOL: [f64; 3] = [1e-8, 1e-6, 1e-4];
const DUAL_TOL: f64 = 1e-10;

fn lib(e: shearlab::Error) -> CliError {
    CliError::geometry("", e)
}

fn wrong_kind(command: &str, scene: &Scene, wanted: &str) -> CliError {
    CliError::Usage(format!("{command} needs a {wanted} scene, got {}", scene.kind()))
}

/// Crossings must survive over the stencil's reach, or the derivative at 0
/// mixes two combinatorial types.
fn check_crossings(c: &ShearConfig, spec: &FdSpec) -> CliResult<()> {
    for t in [spec.reach(), -spec.reach()] {
        deformed_crossings(c, t).map_err(lib)?;
    }
    Ok(())
}

pub fn derive(scene: &Scene, order: usize, oracle: bool, as_json: bool, tol_scale: f64) -> CliResult<Outcome> {
    let spec = FdSpec::default_for(order).map_err(lib)?;
    let (value, length) = match scene {
        Scene::Shear(c) => {
            check_crossings(c, &spec)?;
            (length_derivative(c, order).map_err(lib)?, Some(c.length()))
        }
        Scene::Multicurve { curve, .. } => {
            for (c, _) in curve.components() {
                check_crossings(c, &spec)?;
            }
            (length_derivative_multicurve(curve, order).map_err(lib)?, None)
        }
        _ => return Err(wrong_kind("derive", scene, "shear_config or multicurve")),
    };
    let mut report = json!({
        "command": "derive",
        "kind": scene.kind(),
        "order": order,
        "value": value,
    });
    if let Some(l) = length {
        report["length"] = json!(l);
    }
    let mut passed = true;
    let mut lines = vec![format!("order {order} derivative: {}", float(value))];
    if oracle {
        let est = match scene {
            Scene::Shear(c) => length_fd(c, &spec),
            Scene::Multicurve { curve, .. } => multicurve_length_fd(curve, &spec),
            _ => unreachable!("kind checked above"),
        }
        .map_err(lib)?;
        let tol = FD_TOL[order - 1] * tol_scale;
        let err = rel_err(value, est.value);
        passed &= err <= tol;
        let mut o = json!({
            "fd": est.value,
            "fd_error_estimate": est.error,
            "fd_rel_err": err,
            "fd_tolerance": tol,
        });
        lines.push(format!("fd: {}  rel err {:.3e} (tol {:.1e})", float(est.value), err, tol));
        if let (1, Scene::Shear(c)) = (order, scene) {
            let dual = dual_derivative(c).map_err(lib)?;
            let err = rel_err(value, dual);
            let tol = DUAL_TOL * tol_scale;
            passed &= err <= tol;
            o["dual"] = json!(dual);
            o["dual_rel_err"] = json!(err);
            o["dual_tolerance"] = json!(tol);
            lines.push(format!("dual: {}  rel err {:.3e} (tol {:.1e})", float(dual), err, tol));
        }
        o["passed"] = json!(passed);
        report["oracle"] = o;
        lines.push(if passed { "oracle agrees" } else { "oracle DISAGREES" }.to_string());
    }
    Ok(Outcome {
        report: if as_json {
            Report::Json(report)
        } else {
            Report::Text(lines.join("\n"))
        },
        passed,
    })
}

fn certificate_json(cert: &PositivityCertificate) -> Value {
    let verdict = match cert.verdict {
        Verdict::Definite => "definite",
        Verdict::Semidefinite => "semidefinite",
        Verdict::NotApplicable => "not_applicable",
    };
    let generic = cert.generic.as_ref().map(|g| {
        let class = match g.class {
            Definiteness::PositiveDefinite => "positive_definite",
            Definiteness::PositiveSemidefinite => "positive_semidefinite",
            Definiteness::Indefinite => "indefinite",
        };
        json!({ "class": class, "pivots": g.d })
    });
    json!({
        "verdict": verdict,
        "pivots": cert.pivots,
        "lower_bound_coeffs": cert.lower_bound_coeffs,
        "generic": generic,
    })
}

fn config_hessian(c: &ShearConfig) -> Value {
    let h = hessian_matrix(c);
    json!({
        "length": c.length(),
        "matrix": h.rows(),
        "vector": hessian_vector(c),
        "certificate": certificate_json(&gauss_positivity(&h)),
    })
}

/// Relative slack allowed below the bound, times `cosh(ℓ/2) Σ a²`.
const BOUND_TOL: f64 = 1e-10;

pub fn hessian(scene: &Scene, bound: bool, tol_scale: f64) -> CliResult<Outcome> {
    let mut report = json!({ "command": "hessian", "kind": scene.kind() });
    let mut passed = true;
    match scene {
        Scene::Shear(c) => {
            let d2 = d2_length(c);
            report["hessian"] = config_hessian(c);
            report["d2"] = json!(d2);
            if bound {
                let b = hessian_lower_bound(c).map_err(lib)?;
                passed = d2 - b >= -BOUND_TOL * tol_scale * bound_scale(c);
                report["bound"] = json!({ "value": b, "slack": d2 - b, "holds": passed });
            }
        }
        Scene::Multicurve { curve, arcs } => {
            let d2 = d2_length_multicurve(curve);
            let parts: Vec<Value> = curve
                .components()
                .iter()
                .map(|(c, mu)| {
                    let mut v = config_hessian(c);
                    v["mu"] = json!(mu);
                    v
                })
                .collect();
            report["components"] = json!(parts);
            report["d2"] = json!(d2);
            if bound {
                let b = hessian_lower_bound_multicurve(curve, arcs.as_deref()).map_err(lib)?;
                let scale: f64 = curve.components().iter().map(|(c, mu)| mu * bound_scale(c)).sum();
                passed = d2 - b >= -BOUND_TOL * tol_scale * scale;
                report["bound"] = json!({ "value": b, "slack": d2 - b, "holds": passed });
            }
        }
        _ => return Err(wrong_kind("hessian", scene, "shear_config or multicurve")),
    }
    Ok(Outcome::json(report, passed))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl std::str::FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected a:b:n, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let (start, end) = (num(a)?, num(b)?);
        let n = n.trim().parse::<usize>().map_err(|e| format!("{n:?}: {e}"))?;
        if n == 0 || !start.is_finite() || !end.is_finite() {
            return Err(format!("grid {s:?} is empty or not finite"));
        }
        Ok(Self { start, end, n })
    }
}

impl TGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.start + i as f64 * step).collect()
    }
}

const MIDPOINT_TOL: f64 = 1e-9;
const THETA_TOL: f64 = 1e-10;
/// Step and floor for the sampled second difference of the length.
const CONVEXITY_STEP: f64 = 1e-3;
const CONVEXITY_TOL: f64 = 1e-7;

pub fn twist(scene: &Scene, grid: &TGrid, csv: Option<&Path>, tol_scale: f64) -> CliResult<Outcome> {
    let Scene::Twist(s) = scene else {
        return Err(wrong_kind("twist", scene, "twist_scene"));
    };
    let rows = grid
        .points()
        .par_iter()
        .map(|&t| twist_row(s, t))
        .collect::<shearlab::Result<Vec<Vec<f64>>>>()
        .map_err(lib)?;
    let probes = s.probes().len();
    let max_col = |k: usize| rows.iter().map(|r| r[k]).fold(0.0, f64::max);
    let min_dd = rows.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min);
    let (mid, theta) = (max_col(3), max_col(4));
    let passed = mid <= MIDPOINT_TOL * tol_scale
        && theta <= THETA_TOL * tol_scale
        && min_dd >= -CONVEXITY_TOL * tol_scale;

    let mut probe_rates = Vec::with_capacity(probes);
    for l in 0..probes {
        let pairs: Vec<Value> = (0..probes)
            .filter(|&k| k != l)
            .map(|k| Ok(json!({ "other": k, "separation_rate": s.ell_ll_prime(l, k)? })))
            .collect::<shearlab::Result<_>>()
            .map_err(lib)?;
        probe_rates.push(json!({
            "index": l,
            "theta": s.probes()[l].theta,
            "ell_h": s.probes()[l].ell_h,
            "f_prime": s.f_l_prime(l).map_err(lib)?,
            "d_cos_theta": s.d_cos_theta_l(l).map_err(lib)?,
            "separations": pairs,
        }));
    }
    let mut header: Vec<String> = ["t", "length", "length_second_difference", "midpoint_residual", "theta_residual"]
        .map(String::from)
        .to_vec();
    for l in 0..probes {
        header.push(format!("theta_{l}"));
        header.push(format!("f_{l}"));
    }
    let mut report = json!({
        "command": "twist",
        "length": s.length(),
        "theta_h": s.theta_h(),
        "ell_prime": s.ell_prime(),
        "angular_velocity": s.angular_velocity(),
        "probes": probe_rates,
        "grid": { "start": grid.start, "end": grid.end, "n": grid.n },
        "max_midpoint_residual": mid,
        "max_theta_residual": theta,
        "min_length_second_difference": min_dd,
        "passed": passed,
    });
    match csv {
        Some(path) => {
            write_csv(path, &header, &rows)?;
            report["csv"] = json!(path.display().to_string());
            report["rows"] = json!(rows.len());
        }
        None => {
            report["columns"] = json!(header);
            report["trajectory"] = json!(rows);
        }
    }
    Ok(Outcome::json(report, passed))
}

fn twist_row(s: &TwistScene, t: f64) -> shearlab::Result<Vec<f64>> {
    let sample = s.sample_at(t)?;
    let h = CONVEXITY_STEP;
    let dd = (s.length_at(t + h)? - 2.0 * sample.length + s.length_at(t - h)?) / (h * h);
    let mut row = vec![t, sample.length, dd, sample.midpoint_residual, sample.theta_residual];
    for (theta, f) in sample.probes {
        row.push(theta);
        row.push(f);
    }
    Ok(row)
}

pub fn spiral(scene: &Scene, csv: Option<&Path>) -> CliResult<Outcome> {
    let Scene::Spiral(params) = scene else {
        return Err(wrong_kind("spiral", scene, "spiral"));
    };
    let trace = spiral_convergence(params).map_err(lib)?;
    let config = params.build().map_err(lib)?;
    let rows: Vec<Vec<f64>> = trace
        .iter()
        .map(|t| {
            vec![
                t.index as f64,
                t.matrix_delta,
                t.derivative_value,
                config.psi(t.index).scale.ln(),
                config.interleaved(t.index).scale.ln(),
            ]
        })
        .collect();
    let header: Vec<String> = [
        "index",
        "matrix_delta",
        "derivative_value",
        "naive_log_dilation",
        "interleaved_log_dilation",
    ]
    .map(String::from)
    .to_vec();
    let rate = trace.first().and_then(|t| t.fitted_rate);
    let mut report = json!({
        "command": "spiral",
        "params": spiral_params_json(params),
        "fitted_rate": rate,
        "cauchy": rate.map(|r| r < 0.0),
    });
    match csv {
        Some(path) => {
            write_csv(path, &header, &rows)?;
            report["csv"] = json!(path.display().to_string());
            report["rows"] = json!(rows.len());
        }
        None => {
            report["columns"] = json!(header);
            report["trace"] = json!(rows);
        }
    }
    Ok(Outcome::json(report, true))
}

fn spiral_params_json(p: &SpiralParams) -> Value {
    json!({
        "length": p.length,
        "x0": p.x0,
        "x1": p.x1,
        "n": p.n,
        "total": p.weights.total,
    })
}

pub fn verify(suites: &[Suite], opts: &VerifyOptions) -> Outcome {
    let mut passed = true;
    let reports: Vec<Value> = suites
        .iter()
        .map(|&suite| {
            let checks: Vec<Value> = run_suite(suite, opts)
                .iter()
                .map(|c| {
                    passed &= c.passed();
                    json!({
                        "name": c.name,
                        "cases": c.cases,
                        "failures": c.failures,
                        "worst": c.worst,
                        "tolerance": c.tolerance,
                        "passed": c.passed(),
                        "note": c.note,
                    })
                })
                .collect();
            json!({ "suite": suite.name(), "checks": checks })
        })
        .collect();
    let report = json!({
        "command": "verify",
        "seed": opts.seed,
        "cases": opts.cases,
        "tol_scale": opts.tol_scale,
        "suites": reports,
        "passed": passed,
    });
    Outcome::json(report, passed)
}
