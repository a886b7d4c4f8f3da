//! Scene files: JSON validated against `schema/scene.schema.json`, then
//! turned into library objects.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use serde_json::Value;
use shearlab::derivatives::WeightedMulticurve;
use shearlab::kernel::{translate_along, BoundaryPoint, Geodesic, InteriorPoint, Isometry};
use shearlab::oracles::SpiralParams;
use shearlab::shear::{build_config_with, BuildOptions, ShearConfig, SpiralWeights};
use shearlab::twist::TwistScene;

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = include_str!("../schema/scene.schema.json");

/// Boundary points closer than this (chordally) count as equal endpoints.
const ENDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PointSpec {
    Real(f64),
    Pair([f64; 2]),
    Inf(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GammaSpec {
    Matrix { matrix: [[f64; 2]; 2] },
    Axis { axis: [PointSpec; 2], length: f64 },
}

#[derive(Debug, Deserialize)]
struct LeafSpec {
    endpoints: [PointSpec; 2],
    weight: f64,
}

#[derive(Debug, Deserialize)]
struct ShearSpec {
    gamma: GammaSpec,
    leaves: Vec<LeafSpec>,
    basepoint: Option<[f64; 2]>,
    k_check: Option<u32>,
}

#[derive(Debug, Deserialize)]
struct TwistSpec {
    gamma: GammaSpec,
    h: [PointSpec; 2],
    #[serde(default)]
    probes: Vec<[PointSpec; 2]>,
}

#[derive(Debug, Deserialize)]
struct ComponentSpec {
    gamma: GammaSpec,
    leaves: Vec<LeafSpec>,
    mu: f64,
}

#[derive(Debug, Deserialize)]
struct MulticurveSpec {
    components: Vec<ComponentSpec>,
    arcs: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct SpiralSpec {
    length: f64,
    x0: f64,
    x1: f64,
    n: usize,
    p_masses: Option<Vec<f64>>,
    q_masses: Option<Vec<f64>>,
    #[serde(default)]
    total: f64,
    probe: Option<[PointSpec; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SceneSpec {
    ShearConfig(ShearSpec),
    TwistScene(TwistSpec),
    Multicurve(MulticurveSpec),
    Spiral(SpiralSpec),
}

#[derive(Debug, Clone)]
pub enum Scene {
    Shear(ShearConfig),
    Twist(TwistScene),
    Multicurve {
        curve: WeightedMulticurve,
        arcs: Option<Vec<usize>>,
    },
    Spiral(SpiralParams),
}

impl Scene {
    pub fn kind(&self) -> &'static str {
        match self {
            Scene::Shear(_) => "shear_config",
            Scene::Twist(_) => "twist_scene",
            Scene::Multicurve { .. } => "multicurve",
            Scene::Spiral(_) => "spiral",
        }
    }
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("bundled schema is JSON");
        jsonschema::validator_for(&schema).expect("bundled schema compiles")
    })
}

pub fn parse_scene(path: &Path) -> CliResult<Scene> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scene_str(&text)
}

pub fn parse_scene_str(text: &str) -> CliResult<Scene> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::schema("", format!("not JSON: {e}")))?;
    // The deepest error is the most specific one.
    if let Some(e) = validator()
        .iter_errors(&value)
        .max_by_key(|e| e.instance_path().as_str().matches('/').count())
    {
        return Err(CliError::schema(e.instance_path().as_str(), e.to_string()));
    }
    let spec: SceneSpec = serde_path_to_error::deserialize(&value).map_err(|e| {
        let pointer = to_pointer(e.path());
        CliError::schema(pointer, e.into_inner().to_string())
    })?;
    build(spec)
}

fn to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .filter_map(|s| match s {
            Segment::Seq { index } => Some(format!("/{index}")),
            Segment::Map { key } => Some(format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { .. } | Segment::Unknown => None,
        })
        .collect()
}

fn point(spec: &PointSpec, at: &str) -> CliResult<BoundaryPoint> {
    match spec {
        PointSpec::Real(x) => Ok(BoundaryPoint::real(*x)),
        PointSpec::Pair([a, b]) => BoundaryPoint::new(*a, *b).map_err(|e| CliError::schema(at, e.to_string())),
        PointSpec::Inf(s) if s == "inf" => Ok(BoundaryPoint::INFINITY),
        PointSpec::Inf(s) => Err(CliError::schema(at, format!("unknown boundary point {s:?}"))),
    }
}

fn geodesic(spec: &[PointSpec; 2], at: &str) -> CliResult<Geodesic> {
    let p = point(&spec[0], &format!("{at}/0"))?;
    let q = point(&spec[1], &format!("{at}/1"))?;
    if p.approx_eq(&q, ENDPOINT_TOL) {
        return Err(CliError::schema(at, "endpoints coincide"));
    }
    Geodesic::new(p, q).map_err(|e| CliError::geometry(at, e))
}

fn gamma(spec: &GammaSpec, at: &str) -> CliResult<Isometry> {
    match spec {
        GammaSpec::Matrix { matrix } => {
            Isometry::new(*matrix).map_err(|e| CliError::geometry(format!("{at}/matrix"), e))
        }
        GammaSpec::Axis { axis, length } => {
            let g = geodesic(axis, &format!("{at}/axis"))?;
            Ok(translate_along(&g, *length))
        }
    }
}

fn shear(
    gamma_spec: &GammaSpec,
    leaves: &[LeafSpec],
    opts: &BuildOptions,
    at: &str,
) -> CliResult<ShearConfig> {
    let g = gamma(gamma_spec, &format!("{at}/gamma"))?;
    let leaves = leaves
        .iter()
        .enumerate()
        .map(|(i, l)| Ok((geodesic(&l.endpoints, &format!("{at}/leaves/{i}/endpoints"))?, l.weight)))
        .collect::<CliResult<Vec<_>>>()?;
    build_config_with(g, &leaves, opts).map_err(|e| {
        let pointer = match e {
            shearlab::Error::LeafMissesAxis { index }
            | shearlab::Error::LeavesCross { first: index, .. }
            | shearlab::Error::DuplicateCrossing { first: index, .. } => format!("{at}/leaves/{index}"),
            shearlab::Error::PointOffGeodesic { .. } => format!("{at}/basepoint"),
            _ => at.to_string(),
        };
        CliError::geometry(pointer, e)
    })
}

fn masses(given: &Option<Vec<f64>>, n: usize, at: &str) -> CliResult<Vec<f64>> {
    match given {
        None => Ok(vec![1.0; n + 1]),
        Some(m) if m.len() > n => Ok(m.clone()),
        Some(m) => Err(CliError::schema(
            at,
            format!("{} masses given, n = {n} needs at least {}", m.len(), n + 1),
        )),
    }
}

fn build(spec: SceneSpec) -> CliResult<Scene> {
    match spec {
        SceneSpec::ShearConfig(s) => {
            let basepoint = match s.basepoint {
                Some([x, y]) => {
                    Some(InteriorPoint::new(x, y).map_err(|e| CliError::schema("/basepoint", e.to_string()))?)
                }
                None => None,
            };
            let opts = BuildOptions {
                basepoint,
                k_check: s.k_check.unwrap_or(BuildOptions::default().k_check),
            };
            Ok(Scene::Shear(shear(&s.gamma, &s.leaves, &opts, "")?))
        }
        SceneSpec::TwistScene(s) => {
            let g = gamma(&s.gamma, "/gamma")?;
            let h = geodesic(&s.h, "/h")?;
            let probes = s
                .probes
                .iter()
                .enumerate()
                .map(|(i, p)| geodesic(p, &format!("/probes/{i}")))
                .collect::<CliResult<Vec<_>>>()?;
            let scene = TwistScene::new(g, h, &probes).map_err(|e| {
                let pointer = match e {
                    shearlab::Error::ProbeOutOfRange { index } => format!("/probes/{index}"),
                    _ => "/h".to_string(),
                };
                CliError::geometry(pointer, e)
            })?;
            Ok(Scene::Twist(scene))
        }
        SceneSpec::Multicurve(s) => {
            let parts = s
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let at = format!("/components/{i}");
                    Ok((shear(&c.gamma, &c.leaves, &BuildOptions::default(), &at)?, c.mu))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let curve = WeightedMulticurve::new(parts).map_err(|e| CliError::geometry("/components", e))?;
            Ok(Scene::Multicurve { curve, arcs: s.arcs })
        }
        SceneSpec::Spiral(s) => {
            let params = SpiralParams {
                length: s.length,
                x0: s.x0,
                x1: s.x1,
                weights: SpiralWeights {
                    p_masses: masses(&s.p_masses, s.n, "/p_masses")?,
                    q_masses: masses(&s.q_masses, s.n, "/q_masses")?,
                    total: s.total,
                },
                n: s.n,
                probe: s.probe.as_ref().map(|p| geodesic(p, "/probe")).transpose()?,
            };
            params.build().map_err(|e| CliError::geometry("", e))?;
            Ok(Scene::Spiral(params))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema_pointer(r: CliResult<Scene>) -> String {
        match r {
            Err(CliError::Schema { pointer, .. }) => pointer,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn gamma_by_axis() {
        let s = parse_scene_str(
            r#"{"kind": "shear_config", "gamma": {"axis": [0, "inf"], "length": 2},
                "leaves": [{"endpoints": [-1, 1], "weight": 1}]}"#,
        )
        .unwrap();
        let Scene::Shear(c) = s else { panic!("wrong kind") };
        assert!((c.length() - 2.0).abs() < 1e-14);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn gamma_by_matrix_and_pairs() {
        let s = parse_scene_str(
            r#"{"kind": "shear_config", "gamma": {"matrix": [[2.718281828459045, 0], [0, 0.36787944117144233]]},
                "leaves": [{"endpoints": [[-1, 1], [2, 1]], "weight": 1}]}"#,
        )
        .unwrap();
        let Scene::Shear(c) = s else { panic!("wrong kind") };
        assert!((c.length() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equal_endpoints() {
        let base = |e: &str| {
            format!(
                r#"{{"kind": "shear_config", "gamma": {{"axis": [0, "inf"], "length": 2}},
                    "leaves": [{{"endpoints": {e}, "weight": 1}}]}}"#
            )
        };
        assert_eq!(schema_pointer(parse_scene_str(&base("[1, 1]"))), "/leaves/0/endpoints");
        assert_eq!(schema_pointer(parse_scene_str(&base("[[2, 2], 1]"))), "/leaves/0/endpoints");
        assert_eq!(schema_pointer(parse_scene_str(&base("[[0, 0], 1]"))), "/leaves/0/endpoints/0");
    }

    #[test]
    fn crossing_leaves() {
        let r = parse_scene_str(
            r#"{"kind": "shear_config", "gamma": {"axis": [0, "inf"], "length": 2},
                "leaves": [{"endpoints": [-1, 1], "weight": 1}, {"endpoints": [-0.5, 3], "weight": 1}]}"#,
        );
        match r {
            Err(CliError::Geometry { source: shearlab::Error::LeavesCross { .. }, .. }) => {}
            other => panic!("expected LeavesCross, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors_point_into_the_file() {
        let cases = [
            (r#"{"kind": "spiral", "length": 1, "x0": -1, "x1": -0.5}"#, ""),
            (r#"{"kind": "spiral", "length": 1, "x0": 1, "x1": -0.5, "n": 3}"#, "/x0"),
            (r#"{"kind": "twist_scene", "gamma": {"axis": [0, "inf"], "length": 2}, "h": [-1, 1], "extra": 1}"#, ""),
            (r#"{"kind": "multicurve", "components": [{"gamma": {"axis": [0, "inf"], "length": 2}, "leaves": [], "mu": 1}]}"#, "/components/0/leaves"),
            (r#"{"kind": "spiral", "length": 1, "x0": -1, "x1": -0.5, "n": 3, "p_masses": [1, 1]}"#, "/p_masses"),
        ];
        for (text, pointer) in cases {
            assert_eq!(schema_pointer(parse_scene_str(text)), pointer, "{text}");
        }
    }

    #[test]
    fn spiral_defaults() {
        let s = parse_scene_str(r#"{"kind": "spiral", "length": 2, "x0": -1, "x1": -0.5, "n": 4}"#).unwrap();
        let Scene::Spiral(p) = s else { panic!("wrong kind") };
        assert_eq!(p.weights.p_masses, vec![1.0; 5]);
        assert_eq!(p.weights.total, 0.0);
    }
}
