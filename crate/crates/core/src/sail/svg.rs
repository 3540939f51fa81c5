//! Static picture of a torus decomposition in the logarithmic chart of the
//! sail: one polygon per face orbit, inside the fundamental parallelogram
//! of the unit generators.

use std::fmt::Write;

use super::torus::chart;
use super::SailAnalysis;

const SIZE: f64 = 480.0;
const PALETTE: [&str; 8] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];

/// Orthonormal coordinates of the sum-zero plane.
fn plane(v: &[f64; 3]) -> [f64; 2] {
    let s2 = std::f64::consts::SQRT_2;
    let s6 = 6f64.sqrt();
    [(v[0] - v[1]) / s2, (v[0] + v[1] - 2.0 * v[2]) / s6]
}

pub fn render(analysis: &SailAnalysis) -> String {
    let [g1, g2] = analysis.units.logs.map(|l| plane(&l));
    let to_plane = |st: [f64; 2]| [st[0] * g1[0] + st[1] * g2[0], st[0] * g1[1] + st[1] * g2[1]];
    let polys: Vec<Vec<[f64; 2]>> = analysis
        .torus
        .faces
        .iter()
        .map(|f| {
            f.vertices.iter().map(|v| to_plane(chart(&analysis.sail, &analysis.units, &v.map(|c| c as f64)))).collect()
        })
        .collect();
    let frame = [[0.0, 0.0], g1, [g1[0] + g2[0], g1[1] + g2[1]], g2];
    let all = polys.iter().flatten().chain(frame.iter());
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let margin = 24.0;
    let scale = (SIZE - 2.0 * margin) / span;
    let px = |p: &[f64; 2]| (margin + (p[0] - lo[0]) * scale, SIZE - margin - (p[1] - lo[1]) * scale);
    let path =
        |pts: &[[f64; 2]]| pts.iter().map(&px).map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ");

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (i, (poly, face)) in polys.iter().zip(&analysis.torus.faces).enumerate() {
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="{}" stroke="#333333" stroke-width="1"><title>face orbit {i}: {} corners, area {}</title></polygon>"##,
            path(poly),
            PALETTE[i % PALETTE.len()],
            face.vertices.len(),
            face.area
        );
    }
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#cc0000" stroke-dasharray="6 4" stroke-width="1.5"/>"##,
        path(&frame)
    );
    let inv = &analysis.torus.invariant;
    let _ = writeln!(
        out,
        r##"<text x="8" y="16" font-family="monospace" font-size="12" fill="#000000">{} V={} E={} F={} areas={:?}</text>"##,
        analysis.matrix, inv.vertex_orbits, inv.edge_orbits, inv.face_orbits, inv.face_areas
    );
    out.push_str("</svg>\n");
    out
}
