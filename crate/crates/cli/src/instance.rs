//! Instance files: named polyhedral data plus a query list, in UTF-8 JSON
//! with rationals written as strings (`"p/q"` or `"p"`) or integers.

use std::collections::BTreeMap;

use serde::Deserialize;

use polylip::rat::parse_rat;
use polylip::{GraphMap, HPolyhedron, Norm, Rat, RowKind, VPolytope};

/// A rational in an instance file: an exact string or an integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RatIn {
    Int(i64),
    Str(String),
}

impl RatIn {
    pub fn to_rat(&self, what: &str) -> Result<Rat, String> {
        match self {
            RatIn::Int(n) => Ok(Rat::from_integer((*n).into())),
            RatIn::Str(s) => parse_rat(s).map_err(|e| format!("{what}: {e}")),
        }
    }
}

fn vec_rat(v: &[RatIn], what: &str) -> Result<Vec<Rat>, String> {
    v.iter()
        .enumerate()
        .map(|(i, r)| r.to_rat(&format!("{what}[{i}]")))
        .collect()
}

fn mat_rat(m: &[Vec<RatIn>], what: &str) -> Result<Vec<Vec<Rat>>, String> {
    m.iter()
        .enumerate()
        .map(|(i, row)| vec_rat(row, &format!("{what}[{i}]")))
        .collect()
}

fn parse_kinds(kinds: &[String], what: &str) -> Result<Vec<RowKind>, String> {
    kinds
        .iter()
        .enumerate()
        .map(|(i, k)| match k.as_str() {
            "le" | "<=" => Ok(RowKind::Le),
            "eq" | "=" => Ok(RowKind::Eq),
            other => Err(format!("{what}[{i}]: unknown row kind {other:?} (use \"le\" or \"eq\")")),
        })
        .collect()
}

pub fn parse_norm(name: &str) -> Result<Norm, String> {
    match name {
        "l1" => Ok(Norm::L1),
        "linf" => Ok(Norm::LInf),
        "l2" => Ok(Norm::L2),
        other => Err(format!("unknown norm {other:?} (use \"l1\", \"linf\", or \"l2\")")),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HRepIn {
    #[serde(rename = "A")]
    pub a: Vec<Vec<RatIn>>,
    pub b: Vec<RatIn>,
    pub kinds: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VRepIn {
    pub vertices: Vec<Vec<RatIn>>,
    #[serde(default)]
    pub rays: Vec<Vec<RatIn>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetIn {
    #[serde(default)]
    pub hrep: Option<HRepIn>,
    #[serde(default)]
    pub vrep: Option<VRepIn>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapIn {
    pub graph_hrep: HRepIn,
    pub m: usize,
    pub n: usize,
}

/// One query: an operation name plus named argument bindings. Unknown
/// keys are rejected so that typos surface as input errors.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    #[serde(default)]
    pub id: Option<String>,
    pub op: String,
    /// Polyhedral set binding (H-form preferred).
    #[serde(default)]
    pub set: Option<String>,
    /// Dynamics binding (bounded V-form).
    #[serde(default)]
    pub dynamics: Option<String>,
    /// Set-valued map binding.
    #[serde(default)]
    pub map: Option<String>,
    /// Target set binding for minimal-time queries.
    #[serde(default)]
    pub target: Option<String>,
    /// Base point (joint point for map queries when `x`/`y` are absent).
    #[serde(default)]
    pub point: Option<String>,
    #[serde(default)]
    pub x: Option<String>,
    #[serde(default)]
    pub y: Option<String>,
    #[serde(default)]
    pub direction: Option<String>,
    /// Output-space vector for coderivative queries.
    #[serde(default)]
    pub vector: Option<String>,
    #[serde(default)]
    pub norm: Option<String>,
    /// Function kind for function-level queries
    /// (gauge | distance | scalar-distance | minimal-time |
    /// minimal-time-map | scalarization).
    #[serde(default)]
    pub function: Option<String>,
    #[serde(default)]
    pub face_cap: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceIn {
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub sets: BTreeMap<String, SetIn>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapIn>,
    #[serde(default)]
    pub points: BTreeMap<String, Vec<RatIn>>,
    #[serde(default)]
    pub directions: BTreeMap<String, Vec<RatIn>>,
    #[serde(default)]
    pub queries: Vec<QuerySpec>,
}

/// A fully resolved instance: exact objects under their names.
pub struct Instance {
    pub sets_h: BTreeMap<String, HPolyhedron>,
    pub sets_v: BTreeMap<String, VPolytope>,
    pub maps: BTreeMap<String, GraphMap>,
    pub points: BTreeMap<String, Vec<Rat>>,
    pub directions: BTreeMap<String, Vec<Rat>>,
    pub queries: Vec<QuerySpec>,
}

fn hrep_to_poly(h: &HRepIn, what: &str) -> Result<HPolyhedron, String> {
    let rows = mat_rat(&h.a, &format!("{what}.A"))?;
    let rhs = vec_rat(&h.b, &format!("{what}.b"))?;
    let kinds = parse_kinds(&h.kinds, &format!("{what}.kinds"))?;
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    HPolyhedron::from_parts(dim, rows, kinds, rhs).map_err(|e| format!("{what}: {e}"))
}

pub fn resolve(input: &InstanceIn) -> Result<Instance, String> {
    let ambient = input.dims.get("ambient").copied();
    let mut sets_h = BTreeMap::new();
    let mut sets_v = BTreeMap::new();
    for (name, set) in &input.sets {
        let what = format!("sets.{name}");
        match (&set.hrep, &set.vrep) {
            (Some(h), None) => {
                let p = hrep_to_poly(h, &what)?;
                if let Some(d) = ambient {
                    if p.dim() != d {
                        return Err(format!("{what}: dimension {} != ambient {d}", p.dim()));
                    }
                }
                sets_h.insert(name.clone(), p);
            }
            (None, Some(v)) => {
                let vertices = mat_rat(&v.vertices, &format!("{what}.vertices"))?;
                let rays = mat_rat(&v.rays, &format!("{what}.rays"))?;
                let dim = vertices
                    .first()
                    .or(rays.first())
                    .map(|r| r.len())
                    .ok_or_else(|| format!("{what}: no generators"))?;
                if let Some(d) = ambient {
                    if dim != d {
                        return Err(format!("{what}: dimension {dim} != ambient {d}"));
                    }
                }
                let vp = VPolytope::new(dim, vertices, rays).map_err(|e| format!("{what}: {e}"))?;
                sets_v.insert(name.clone(), vp);
            }
            (Some(_), Some(_)) => {
                return Err(format!("{what}: give exactly one of hrep/vrep, not both"))
            }
            (None, None) => return Err(format!("{what}: give one of hrep/vrep")),
        }
    }

    let mut maps = BTreeMap::new();
    for (name, m) in &input.maps {
        let what = format!("maps.{name}");
        let graph = hrep_to_poly(&m.graph_hrep, &format!("{what}.graph_hrep"))?;
        if graph.dim() != m.m + m.n {
            return Err(format!(
                "{what}: graph dimension {} != m + n = {}",
                graph.dim(),
                m.m + m.n
            ));
        }
        let g = GraphMap::new(graph, m.m, m.n).map_err(|e| format!("{what}: {e}"))?;
        maps.insert(name.clone(), g);
    }

    let mut points = BTreeMap::new();
    for (name, p) in &input.points {
        points.insert(name.clone(), vec_rat(p, &format!("points.{name}"))?);
    }
    let mut directions = BTreeMap::new();
    for (name, d) in &input.directions {
        let v = vec_rat(d, &format!("directions.{name}"))?;
        if v.iter().all(|c| c == &Rat::from_integer(0.into())) {
            return Err(format!("directions.{name}: the zero vector is not a direction"));
        }
        directions.insert(name.clone(), v);
    }

    let mut seen = std::collections::BTreeSet::new();
    for (i, q) in input.queries.iter().enumerate() {
        let id = q.id.clone().unwrap_or_else(|| format!("q{}", i + 1));
        if !seen.insert(id.clone()) {
            return Err(format!("queries[{i}]: duplicate id {id:?}"));
        }
    }

    Ok(Instance {
        sets_h,
        sets_v,
        maps,
        points,
        directions,
        queries: input.queries.clone(),
    })
}

impl Instance {
    pub fn query_id(&self, index: usize) -> String {
        self.queries[index]
            .id
            .clone()
            .unwrap_or_else(|| format!("q{}", index + 1))
    }

    pub fn set_h(&self, name: &str) -> Result<&HPolyhedron, String> {
        self.sets_h
            .get(name)
            .ok_or_else(|| format!("no H-form set named {name:?}"))
    }

    pub fn set_v(&self, name: &str) -> Result<&VPolytope, String> {
        self.sets_v
            .get(name)
            .ok_or_else(|| format!("no V-form set named {name:?}"))
    }

    pub fn map(&self, name: &str) -> Result<&GraphMap, String> {
        self.maps
            .get(name)
            .ok_or_else(|| format!("no map named {name:?}"))
    }

    pub fn point(&self, name: &str) -> Result<&Vec<Rat>, String> {
        self.points
            .get(name)
            .ok_or_else(|| format!("no point named {name:?}"))
    }

    pub fn direction(&self, name: &str) -> Result<&Vec<Rat>, String> {
        self.directions
            .get(name)
            .ok_or_else(|| format!("no direction named {name:?}"))
    }
}
