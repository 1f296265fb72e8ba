//! Deterministic CSV / JSON / SVG emission.
//!
//! All decimals are serialized with 17 significant digits (`{:.16e}`),
//! enough to round-trip any double bit-faithfully; identical runs produce
//! byte-identical files. The report JSON is written by a small emitter that
//! keeps the fixed-width literals and a fixed key order (serde_json would
//! reformat numbers through its shortest-round-trip printer).

use anyhow::{Context, Result};

use hilbert_dyn::conjecture::{ConjectureReport, Verdict};
use hilbert_dyn::dynamics::{Orbit, OrbitClassification, StopReason};
use hilbert_dyn::geometry::{ConvexBody, Face, Point};

use crate::config::ExperimentConfig;

/// A double with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

// ----- minimal JSON document builder ------------------------------------

/// JSON value with verbatim numeric literals and insertion-ordered keys.
#[derive(Clone, Debug)]
pub enum Json {
    Null,
    Bool(bool),
    /// A pre-formatted numeric literal.
    Num(String),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    /// A double as a 17-significant-digit literal (null if non-finite).
    pub fn num17(x: f64) -> Json {
        if x.is_finite() {
            Json::Num(fmt17(x))
        } else {
            Json::Null
        }
    }

    pub fn int(x: u64) -> Json {
        Json::Num(x.to_string())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(0, &mut out);
        out.push('\n');
        out
    }

    fn write(&self, indent: usize, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(s) => out.push_str(s),
            Json::Str(s) => write_escaped(s, out),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(indent + 1, out);
                    item.write(indent + 1, out);
                }
                out.push('\n');
                push_indent(indent, out);
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(indent + 1, out);
                    write_escaped(key, out);
                    out.push_str(": ");
                    value.write(indent + 1, out);
                }
                out.push('\n');
                push_indent(indent, out);
                out.push('}');
            }
        }
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn point_json(p: &Point) -> Json {
    Json::Arr(p.coords().iter().map(|c| Json::num17(*c)).collect())
}

fn face_json(face: &Face) -> Json {
    match face {
        Face::Polytope { active, vertices } => Json::Obj(vec![
            ("kind", Json::Str("polytope".into())),
            (
                "active",
                Json::Arr(active.iter().map(|i| Json::int(*i as u64)).collect()),
            ),
            (
                "vertices",
                Json::Arr(vertices.iter().map(point_json).collect()),
            ),
        ]),
        Face::Exposed(p) => Json::Obj(vec![
            ("kind", Json::Str("exposed".into())),
            ("point", point_json(p)),
        ]),
    }
}

fn stop_reason_str(s: StopReason) -> &'static str {
    match s {
        StopReason::MaxIter => "MaxIter",
        StopReason::BoundaryProximity => "BoundaryProximity",
        StopReason::Converged => "Converged",
    }
}

fn classification_json(c: &OrbitClassification) -> Json {
    match c {
        OrbitClassification::Bounded { radius } => Json::Obj(vec![
            ("kind", Json::Str("Bounded".into())),
            ("radius", Json::num17(*radius)),
        ]),
        OrbitClassification::Escaping { min_boundary_gap } => Json::Obj(vec![
            ("kind", Json::Str("Escaping".into())),
            ("min_boundary_gap", Json::num17(*min_boundary_gap)),
        ]),
        OrbitClassification::Undetermined => {
            Json::Obj(vec![("kind", Json::Str("Undetermined".into()))])
        }
    }
}

/// The orbit CSV: header `n,coord_0..coord_{N-1},displacement,from_start`,
/// one row per iterate. Row `n` carries the displacement of the step that
/// produced it (`d(x_{n-1}, x_n)`, zero for the start row).
pub fn orbit_csv(orbit: &Orbit, dim: usize) -> String {
    let mut out = String::from("n");
    for i in 0..dim {
        out.push_str(&format!(",coord_{i}"));
    }
    out.push_str(",displacement,from_start\n");
    for (n, p) in orbit.points.iter().enumerate() {
        out.push_str(&n.to_string());
        for c in p.coords() {
            out.push(',');
            out.push_str(&fmt17(*c));
        }
        let disp = if n == 0 { 0.0 } else { orbit.displacements[n - 1] };
        out.push(',');
        out.push_str(&fmt17(disp));
        out.push(',');
        out.push_str(&fmt17(orbit.from_start[n]));
        out.push('\n');
    }
    out
}

fn option_point(p: &Option<Point>) -> Json {
    p.as_ref().map_or(Json::Null, point_json)
}

/// The full run report as a JSON document.
pub fn report_json(report: &ConjectureReport, config: &ExperimentConfig, run_name: &str) -> Json {
    Json::Obj(vec![
        ("name", Json::Str(run_name.into())),
        ("map_id", Json::Str(report.map_id.clone())),
        ("body", Json::Str(config.body.label())),
        ("verdict", Json::Str(report.limit.verdict.as_str().into())),
        ("classification", classification_json(&report.classification)),
        ("stop_reason", Json::Str(stop_reason_str(report.stop_reason).into())),
        ("iterations", Json::int(report.iterations as u64)),
        (
            "clusters",
            Json::Arr(report.limit.clusters.iter().map(point_json).collect()),
        ),
        (
            "face",
            report.limit.face.as_ref().map_or(Json::Null, face_json),
        ),
        ("single_face", Json::Bool(report.limit.single_face)),
        ("star_witness", option_point(&report.limit.star_witness)),
        ("beardon_point", option_point(&report.limit.beardon_point)),
        ("gromov_sup", Json::num17(report.limit.gromov_sup)),
        (
            "estimates",
            report.estimates.map_or(Json::Null, |e| {
                Json::Obj(vec![
                    ("tau_hat", Json::num17(e.tau_hat)),
                    ("tau_upper", Json::num17(e.tau_upper)),
                    ("delta_hat", Json::num17(e.delta_hat)),
                    ("d_upper", Json::num17(e.d_upper)),
                    ("window", Json::int(e.window as u64)),
                ])
            }),
        ),
        (
            "certificate",
            report.certificate.map_or(Json::Null, |c| {
                Json::Obj(vec![
                    ("anchor_index", Json::int(c.anchor_index as u64)),
                    ("epsilon", Json::num17(c.epsilon)),
                    ("slack", Json::num17(c.slack)),
                    ("checked", Json::int(c.checked as u64)),
                ])
            }),
        ),
        (
            "gv",
            report.gv.map_or(Json::Null, |g| {
                Json::Obj(vec![
                    ("d_tau_gap", Json::num17(g.d_tau_gap)),
                    ("horo_payoff", Json::num17(g.horo_payoff)),
                    (
                        "certificate_witnesses_max",
                        Json::Bool(g.certificate_witnesses_max),
                    ),
                ])
            }),
        ),
        ("monotone_escape", Json::Bool(report.monotone_escape)),
        (
            "perturbed",
            Json::Obj(vec![
                ("verdict", Json::Str(report.perturbed.verdict.as_str().into())),
                (
                    "face",
                    report.perturbed.face.as_ref().map_or(Json::Null, face_json),
                ),
                ("faces_match", Json::Bool(report.perturbed.faces_match)),
            ]),
        ),
        (
            "provenance",
            Json::Obj(vec![
                ("seed", Json::int(config.seed)),
                ("max_iter", Json::int(config.max_iter as u64)),
                ("scale", Json::Str(config.scale.label().into())),
                ("tail_fraction", Json::num17(config.tail_fraction)),
                ("cluster_tol", Json::num17(config.tolerances.cluster)),
                ("face_tol", Json::num17(config.tolerances.face)),
                ("boundary_tol", Json::num17(config.tolerances.boundary)),
                ("chain_tol", Json::num17(config.tolerances.chain)),
                (
                    "boundary_samples",
                    Json::int(config.tolerances.boundary_samples as u64),
                ),
                ("probes", Json::int(config.probes as u64)),
                ("beardon", Json::Bool(config.beardon)),
            ]),
        ),
    ])
}

// ----- SVG ---------------------------------------------------------------

fn boundary_outline(body: &ConvexBody, segments: usize) -> Result<Vec<(f64, f64)>> {
    let w = body.witness();
    let mut pts = Vec::with_capacity(segments);
    for k in 0..segments {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
        let dir = [theta.cos(), theta.sin()];
        let (_, t_max) = body
            .ray_interval(w, &dir)
            .map_err(|e| anyhow::anyhow!("outline: {e}"))?;
        pts.push((w[0] + t_max * dir[0], w[1] + t_max * dir[1]));
    }
    Ok(pts)
}

/// Orbit picture for planar bodies: boundary outline, orbit trail, cluster
/// markers, star witness. Never affects exit codes or numeric outputs.
pub fn orbit_svg(body: &ConvexBody, orbit: &Orbit, report: &ConjectureReport) -> Result<String> {
    anyhow::ensure!(body.dim() == 2, "svg needs a planar body");
    let outline = boundary_outline(body, 256)?;
    let (mut min_x, mut max_x, mut min_y, mut max_y) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &outline {
        min_x = min_x.min(*x);
        max_x = max_x.max(*x);
        min_y = min_y.min(*y);
        max_y = max_y.max(*y);
    }
    let margin = 0.05 * (max_x - min_x).max(max_y - min_y);
    let view = format!(
        "{:.6} {:.6} {:.6} {:.6}",
        min_x - margin,
        -(max_y + margin),
        (max_x - min_x) + 2.0 * margin,
        (max_y - min_y) + 2.0 * margin
    );
    // y flips so the picture uses the usual orientation
    let flip = |p: (f64, f64)| (p.0, -p.1);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{view}\" width=\"640\" height=\"640\">\n"
    ));
    svg.push_str("<g fill=\"none\" stroke=\"#334\" stroke-width=\"0.006\">\n<polygon points=\"");
    for p in &outline {
        let (x, y) = flip(*p);
        svg.push_str(&format!("{x:.6},{y:.6} "));
    }
    svg.push_str("\"/>\n</g>\n");

    svg.push_str("<g fill=\"#1f77b4\">\n");
    for p in &orbit.points {
        let (x, y) = flip((p[0], p[1]));
        svg.push_str(&format!("<circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"0.008\"/>\n"));
    }
    svg.push_str("</g>\n");

    svg.push_str("<g stroke=\"#d62728\" stroke-width=\"0.008\">\n");
    for c in &report.limit.clusters {
        let (x, y) = flip((c[0], c[1]));
        let r = 0.02;
        svg.push_str(&format!(
            "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\"/>\n",
            x - r,
            y - r,
            x + r,
            y + r
        ));
        svg.push_str(&format!(
            "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\"/>\n",
            x - r,
            y + r,
            x + r,
            y - r
        ));
    }
    svg.push_str("</g>\n");

    if let Some(star) = &report.limit.star_witness {
        let (x, y) = flip((star[0], star[1]));
        let r = 0.025;
        svg.push_str(&format!(
            "<polygon fill=\"#2ca02c\" points=\"{:.6},{:.6} {:.6},{:.6} {:.6},{:.6} {:.6},{:.6}\"/>\n",
            x,
            y - r,
            x + r,
            y,
            x,
            y + r,
            x - r,
            y
        ));
    }
    svg.push_str(&format!(
        "<!-- verdict: {} -->\n</svg>\n",
        report.limit.verdict.as_str()
    ));
    Ok(svg)
}

/// One row of `summary.csv`.
pub struct SummaryRow {
    pub map_id: String,
    pub body: String,
    pub verdict: Option<Verdict>,
    pub tau_hat: Option<f64>,
    pub d_upper: Option<f64>,
    pub delta_hat: Option<f64>,
    pub gv_gap: Option<f64>,
    pub single_face: Option<bool>,
    pub runtime_ms: u128,
    pub error: Option<String>,
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(
        "map_id,body,verdict,tau_hat,d_upper,delta_hat,gv_gap,single_face,runtime_ms,error\n",
    );
    let opt17 = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.map_id,
            r.body,
            r.verdict.map(|v| v.as_str()).unwrap_or(""),
            opt17(r.tau_hat),
            opt17(r.d_upper),
            opt17(r.delta_hat),
            opt17(r.gv_gap),
            r.single_face.map(|b| b.to_string()).unwrap_or_default(),
            r.runtime_ms,
            r.error.as_deref().unwrap_or(""),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt17(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn json_keeps_the_literal_and_round_trips() {
        let v = Json::Obj(vec![("x", Json::num17(0.1))]);
        let text = v.render();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["x"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn json_escapes_strings() {
        let v = Json::Obj(vec![("s", Json::Str("a\"b\\c\nd".into()))]);
        let text = v.render();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["s"].as_str().unwrap(), "a\"b\\c\nd");
    }

    #[test]
    fn non_finite_becomes_null() {
        assert!(matches!(Json::num17(f64::INFINITY), Json::Null));
        assert!(matches!(Json::num17(f64::NAN), Json::Null));
    }
}
