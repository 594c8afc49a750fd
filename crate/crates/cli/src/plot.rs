//! Deterministic SVG rendering of a single two-dimensional query: the
//! target set, the dynamics translated to the query point, the
//! generalized projection, and witness cones, each as a labeled layer.
//!
//! Floating point appears here only to place coordinates on the canvas;
//! every geometric decision (clipping, vertex enumeration, emptiness)
//! stays exact.

use polylip::criteria::{self, Target};
use polylip::poly::convert::hrep_to_vrep;
use polylip::rat::{dot, rat_int, rat_to_f64, vadd, vscale};
use polylip::varfun;
use polylip::{ConeSet, ExtReal, GraphMap, HPolyhedron, Rat, RowKind, VPolytope};

use crate::instance::{Instance, QuerySpec};

/// Half-width of the world window; everything is clipped to
/// `[-EXTENT, EXTENT]^2` before vertex enumeration.
const EXTENT: i64 = 6;
/// Canvas pixels per world unit.
const SCALE: f64 = 40.0;

pub struct PlotError {
    pub message: String,
    /// True for input problems (exit 2), false for unsupported or
    /// out-of-domain instances (exit 3).
    pub input: bool,
}

fn unsupported(msg: impl Into<String>) -> PlotError {
    PlotError {
        message: msg.into(),
        input: false,
    }
}

fn input_err(msg: impl Into<String>) -> PlotError {
    PlotError {
        message: msg.into(),
        input: true,
    }
}

fn math(e: polylip::Error) -> PlotError {
    PlotError {
        message: e.to_string(),
        input: false,
    }
}

struct Layer {
    label: String,
    color: &'static str,
    /// Exact vertices of the clipped region, already angularly ordered.
    shape: Shape,
}

enum Shape {
    Point((f64, f64)),
    Segment((f64, f64), (f64, f64)),
    Polygon(Vec<(f64, f64)>),
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn world_box() -> HPolyhedron {
    let e = rat_int(EXTENT);
    let rows = vec![
        vec![rat_int(1), rat_int(0)],
        vec![rat_int(-1), rat_int(0)],
        vec![rat_int(0), rat_int(1)],
        vec![rat_int(0), rat_int(-1)],
    ];
    HPolyhedron::from_parts(
        2,
        rows,
        vec![RowKind::Le; 4],
        vec![e.clone(), e.clone(), e.clone(), e],
    )
    .expect("world box")
}

/// Translate `{x : Ax ⋈ b}` by `c`, giving `{x : Ax ⋈ b + Ac}`.
fn translate(h: &HPolyhedron, c: &[Rat]) -> Result<HPolyhedron, polylip::Error> {
    let rows = h.rows().to_vec();
    let rhs: Vec<Rat> = rows.iter().zip(h.rhs()).map(|(a, b)| b + dot(a, c)).collect();
    HPolyhedron::from_parts(h.dim(), rows, h.kinds().to_vec(), rhs)
}

fn to_screen(p: &[f64; 2]) -> (f64, f64) {
    (
        (p[0] + EXTENT as f64) * SCALE,
        (EXTENT as f64 - p[1]) * SCALE,
    )
}

/// Clip to the world window, enumerate vertices exactly, and order them
/// around their centroid. Returns `None` when the clipped region is
/// empty.
fn outline(h: &HPolyhedron) -> Result<Option<Shape>, polylip::Error> {
    let clipped = h.intersect(&world_box())?;
    if clipped.is_empty()? {
        return Ok(None);
    }
    let v = hrep_to_vrep(&clipped)?;
    let mut pts: Vec<[f64; 2]> = v
        .vertices()
        .iter()
        .map(|p| [rat_to_f64(&p[0]), rat_to_f64(&p[1])])
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
    match pts.len() {
        0 => Ok(None),
        1 => Ok(Some(Shape::Point(to_screen(&pts[0])))),
        2 => Ok(Some(Shape::Segment(to_screen(&pts[0]), to_screen(&pts[1])))),
        _ => {
            let cx = pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64;
            let cy = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
            let mut ordered = pts.clone();
            ordered.sort_by(|a, b| {
                let ta = (a[1] - cy).atan2(a[0] - cx);
                let tb = (b[1] - cy).atan2(b[0] - cx);
                ta.partial_cmp(&tb).expect("finite angles")
            });
            Ok(Some(Shape::Polygon(
                ordered.iter().map(to_screen).collect(),
            )))
        }
    }
}

fn require_dim2(dim: usize, what: &str) -> Result<(), PlotError> {
    if dim != 2 {
        return Err(unsupported(format!(
            "plot2d supports only two-dimensional data; {what} has dimension {dim}"
        )));
    }
    Ok(())
}

struct Scene {
    layers: Vec<Layer>,
    notes: Vec<String>,
}

impl Scene {
    fn push(&mut self, label: &str, h: &HPolyhedron) -> Result<(), PlotError> {
        match outline(h).map_err(math)? {
            Some(shape) => {
                let color = PALETTE[self.layers.len() % PALETTE.len()];
                self.layers.push(Layer {
                    label: label.to_string(),
                    color,
                    shape,
                });
            }
            None => self
                .notes
                .push(format!("layer {label} is empty inside the window")),
        }
        Ok(())
    }

    fn push_cone(&mut self, label: &str, cone: &ConeSet, anchor: &[Rat]) -> Result<(), PlotError> {
        let t = translate(cone.as_poly(), anchor).map_err(math)?;
        self.push(label, &t)
    }
}

/// V-form of `c + t·F` (vertices `c + t v`, rays kept) as an H-form.
fn placed_dynamics(
    f: &VPolytope,
    anchor: &[Rat],
    t: &Rat,
) -> Result<HPolyhedron, polylip::Error> {
    let vertices: Vec<Vec<Rat>> = f
        .vertices()
        .iter()
        .map(|v| vadd(anchor, &vscale(t, v)))
        .collect();
    let placed = VPolytope::new(f.dim(), vertices, f.rays().to_vec())?;
    polylip::poly::convert::vrep_to_hrep(&placed)
}

fn single_point(p: &[Rat]) -> Result<HPolyhedron, polylip::Error> {
    let dim = p.len();
    let mut rows = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut r = vec![rat_int(0); dim];
        r[i] = rat_int(1);
        rows.push(r);
    }
    HPolyhedron::from_parts(dim, rows, vec![RowKind::Eq; dim], p.to_vec())
}

/// Assemble the scene for one query and render it.
pub fn render(instance: &Instance, query_id: &str) -> Result<String, PlotError> {
    let (idx, q) = instance
        .queries
        .iter()
        .enumerate()
        .find(|(i, q)| {
            q.id.as_deref() == Some(query_id) || format!("q{}", i + 1) == query_id
        })
        .map(|(i, q)| (i, q.clone()))
        .ok_or_else(|| input_err(format!("no query named {query_id:?}")))?;
    let _ = idx;

    let mut scene = Scene {
        layers: Vec::new(),
        notes: Vec::new(),
    };

    if q.op.starts_with("gauge") {
        gauge_scene(instance, &q, &mut scene)?;
    } else if q.op.starts_with("scalarization") {
        scalarization_scene(instance, &q, &mut scene)?;
    } else {
        general_scene(instance, &q, &mut scene)?;
    }

    if scene.layers.is_empty() {
        return Err(unsupported(format!(
            "query {query_id:?} produced nothing drawable: {}",
            scene.notes.join("; ")
        )));
    }
    Ok(svg(&scene, query_id, &q.op))
}

/// Gauge queries draw the unit level set `{ρ_F ≤ 1} = F` at the origin,
/// plus the base point.
fn gauge_scene(inst: &Instance, q: &QuerySpec, scene: &mut Scene) -> Result<(), PlotError> {
    let name = q
        .dynamics
        .as_ref()
        .ok_or_else(|| input_err("gauge plots need a dynamics binding"))?;
    let f = inst.set_v(name).map_err(input_err)?;
    require_dim2(f.dim(), "the dynamics")?;
    let unit = polylip::poly::convert::vrep_to_hrep(f).map_err(math)?;
    scene.push("gauge-unit-level-set", &unit)?;
    if let Some(p) = &q.point {
        let x = inst.point(p).map_err(input_err)?;
        require_dim2(x.len(), "the base point")?;
        scene.push("base-point", &single_point(x).map_err(math)?)?;
        if q.op == "gauge-criterion" {
            let report = criteria::minkowski_report(f, x).map_err(math)?;
            if let Some(v) = &report.local {
                scene.push_cone("witness-cone", &v.witness, x)?;
            }
        }
    }
    Ok(())
}

/// Scalarization queries draw the set, the base point, the segment to
/// the hit point, and the normal cone at the hit point.
fn scalarization_scene(
    inst: &Instance,
    q: &QuerySpec,
    scene: &mut Scene,
) -> Result<(), PlotError> {
    let omega = inst
        .set_h(q.set.as_deref().ok_or_else(|| input_err("scalarization plots need a set"))?)
        .map_err(input_err)?;
    require_dim2(omega.dim(), "the set")?;
    let d = inst
        .direction(
            q.direction
                .as_deref()
                .ok_or_else(|| input_err("scalarization plots need a direction"))?,
        )
        .map_err(input_err)?;
    let x = inst
        .point(q.point.as_deref().ok_or_else(|| input_err("scalarization plots need a point"))?)
        .map_err(input_err)?;
    require_dim2(x.len(), "the base point")?;
    scene.push("target-set", omega)?;
    scene.push("base-point", &single_point(x).map_err(math)?)?;
    match polylip::gendiff::scalarization_subdifferential(omega, d, x) {
        Ok(s) => {
            let seg = VPolytope::new(2, vec![x.clone(), s.hit_point.clone()], vec![])
                .and_then(|v| polylip::poly::convert::vrep_to_hrep(&v))
                .map_err(math)?;
            scene.push("ray-to-hit-point", &seg)?;
            let n = polylip::poly::cones::normal_cone_at(omega, &s.hit_point).map_err(math)?;
            scene.push_cone("target-normal-at-hit", &n, &s.hit_point)?;
        }
        Err(e) => scene.notes.push(format!("hit point unavailable: {e}")),
    }
    Ok(())
}

/// Minimal-time, projection, distance, and map queries: target set,
/// dynamics translated to the query point (scaled by the minimal time
/// when finite), generalized projection, witness cones.
fn general_scene(inst: &Instance, q: &QuerySpec, scene: &mut Scene) -> Result<(), PlotError> {
    // Resolve the target as a set in the plane: a named set, or the
    // slice of a named map at the input part of the query point.
    let mut target_set: Option<HPolyhedron> = None;
    let mut x_part: Vec<Rat> = Vec::new();
    let mut y_part: Option<Vec<Rat>> = None;
    let mut map: Option<&GraphMap> = None;

    if let Some(name) = q.target.as_deref().or(q.set.as_deref()) {
        let omega = inst.set_h(name).map_err(input_err)?;
        require_dim2(omega.dim(), "the target set")?;
        target_set = Some(omega.clone());
    }
    if let Some(name) = &q.map {
        let g = inst.map(name).map_err(input_err)?;
        require_dim2(g.output_dim(), "the map output space")?;
        map = Some(g);
    }

    if let Some(g) = map {
        if let Ok((x, y)) = crate::queries::joint_of(inst, q, g.input_dim(), g.output_dim()) {
            x_part = x;
            y_part = Some(y);
        }
    } else if let Some(p) = &q.point {
        let v = inst.point(p).map_err(input_err)?;
        require_dim2(v.len(), "the query point")?;
        y_part = Some(v.clone());
    }

    if let (Some(g), true) = (map, target_set.is_none()) {
        let slice = g.slice(&x_part).map_err(math)?;
        target_set = Some(slice);
    }

    if let Some(omega) = &target_set {
        scene.push("target-set", omega)?;
    }

    let dynamics = match &q.dynamics {
        Some(name) => {
            let f = inst.set_v(name).map_err(input_err)?;
            require_dim2(f.dim(), "the dynamics")?;
            Some(f)
        }
        None => None,
    };

    if let Some(y) = &y_part {
        scene.push("query-point", &single_point(y).map_err(math)?)?;

        if let (Some(f), Some(omega)) = (dynamics, &target_set) {
            let t = varfun::minimal_time(f, omega, y).map_err(math)?;
            match &t {
                ExtReal::Finite(t_bar) => {
                    if t_bar > &rat_int(0) {
                        let placed = placed_dynamics(f, y, t_bar).map_err(math)?;
                        scene.push("dynamics-scaled-to-contact", &placed)?;
                    } else {
                        scene
                            .notes
                            .push("the point lies on the target; dynamics not drawn".into());
                    }
                    let constant = GraphMap::constant(0, omega).map_err(math)?;
                    let proj =
                        varfun::generalized_projection(f, &constant, &[], y).map_err(math)?;
                    scene.push("generalized-projection", &proj)?;
                }
                _ => {
                    let placed = placed_dynamics(f, y, &rat_int(1)).map_err(math)?;
                    scene.push("dynamics", &placed)?;
                    scene
                        .notes
                        .push(format!("minimal time is {t}; no projection to draw"));
                }
            }

            if q.op == "minimal-time-criterion" {
                let v = criteria::minimal_time_criterion(
                    f,
                    &Target::Set(omega),
                    &[],
                    y,
                    q.face_cap.unwrap_or(16),
                )
                .map_err(math)?;
                scene.push_cone("witness-cone", &v.witness, y)?;
                for (label, cone) in &v.labeled_cones {
                    scene.push_cone(label, cone, y)?;
                }
            }
        }
    }

    if let Some(omega) = &target_set {
        if q.op == "normal-cone" {
            if let Some(y) = &y_part {
                let n = polylip::poly::cones::normal_cone_at(omega, y).map_err(math)?;
                scene.push_cone("normal-cone", &n, y)?;
            }
        }
    }

    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

fn svg(scene: &Scene, query_id: &str, op: &str) -> String {
    let size = 2.0 * EXTENT as f64 * SCALE;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" \
         viewBox=\"0 0 {0} {0}\">\n",
        fmt(size)
    ));
    out.push_str(&format!(
        "  <title>{} — {}</title>\n",
        xml_escape(query_id),
        xml_escape(op)
    ));
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    // Axes through the origin.
    let mid = size / 2.0;
    out.push_str(&format!(
        "  <line x1=\"0\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#cccccc\"/>\n",
        fmt(mid),
        fmt(size)
    ));
    out.push_str(&format!(
        "  <line x1=\"{0}\" y1=\"0\" x2=\"{0}\" y2=\"{1}\" stroke=\"#cccccc\"/>\n",
        fmt(mid),
        fmt(size)
    ));
    for layer in &scene.layers {
        out.push_str(&format!("  <g id=\"{}\">\n", xml_escape(&layer.label)));
        let anchor = match &layer.shape {
            Shape::Point(p) => {
                out.push_str(&format!(
                    "    <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>\n",
                    fmt(p.0),
                    fmt(p.1),
                    layer.color
                ));
                *p
            }
            Shape::Segment(a, b) => {
                out.push_str(&format!(
                    "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
                     stroke-width=\"2.5\"/>\n",
                    fmt(a.0),
                    fmt(a.1),
                    fmt(b.0),
                    fmt(b.1),
                    layer.color
                ));
                *a
            }
            Shape::Polygon(pts) => {
                let coords: Vec<String> =
                    pts.iter().map(|p| format!("{},{}", fmt(p.0), fmt(p.1))).collect();
                out.push_str(&format!(
                    "    <polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" \
                     stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                    coords.join(" "),
                    layer.color,
                    layer.color
                ));
                pts[0]
            }
        };
        out.push_str(&format!(
            "    <text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n",
            fmt(anchor.0 + 6.0),
            fmt(anchor.1 - 6.0),
            layer.color,
            xml_escape(&layer.label)
        ));
        out.push_str("  </g>\n");
    }
    for (i, note) in scene.notes.iter().enumerate() {
        out.push_str(&format!(
            "  <text x=\"8\" y=\"{}\" font-size=\"10\" fill=\"#555555\">{}</text>\n",
            fmt(size - 8.0 - 12.0 * i as f64),
            xml_escape(note)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
