//! Mesh generators: graded polar mesh of the specimen cross-section and
//! uniform polar O-grids for annulus verification problems.
//!
//! The specimen mesh is built on rays cast from the rebar center to the
//! rectangle boundary. Radii along each ray are log-spaced, which keeps the
//! local aspect ratio near one when the angular spacing matches the relative
//! radial growth. Angular spacing is fine inside the sector that covers the
//! cover strip above the rebar (where the main crack runs) and grades
//! geometrically to a coarse spacing elsewhere. The four rectangle corners
//! are snapped onto the nearest rays so the outer boundary is exact.

use super::{BoundaryEdge, BoundaryTag, Mesh, SpecimenGeometry};
use crate::error::{Error, Result};

/// Minimum number of segments resolving the rebar hole.
const MIN_HOLE_SEGMENTS: usize = 64;

/// Growth ratio of the angular spacing in the fine-to-coarse transition.
const ANGULAR_GROWTH: f64 = 1.18;

pub fn build_specimen_mesh(
    geom: &SpecimenGeometry,
    h_fine: f64,
    h_coarse: f64,
) -> Result<Mesh> {
    geom.validate()?;
    if !(h_fine > 0.0) || !(h_coarse >= h_fine) {
        return Err(Error::config(format!(
            "mesh sizes must satisfy 0 < h_fine <= h_coarse, got {h_fine}, {h_coarse}"
        )));
    }
    let a = geom.rebar_radius;
    let center = geom.rebar_center();
    let r_top = geom.cover + a;

    // Angular targets. The coarse spacing is capped so rebar arcs stay below
    // h_fine and far-field arcs below h_coarse.
    let r_max = [
        [0.0, 0.0],
        [geom.width, 0.0],
        [0.0, geom.height],
        [geom.width, geom.height],
    ]
    .iter()
    .map(|c| super::dist(*c, center))
    .fold(0.0f64, f64::max);
    let d_fine = (h_fine / r_top).min(h_fine / a);
    let d_coarse = (h_fine / a).min(h_coarse / r_max).max(d_fine);
    // Fine sector half-width: rays hitting the top surface within the crack
    // strip (rebar width plus a resolution margin).
    let w_strip = a + 8.0 * h_fine;
    let half_angle = (w_strip / r_top).atan();

    // March half the circle from straight-up; mirror for the other half.
    let mut deltas = Vec::new();
    let mut angle = 0.0f64; // angular distance from pi/2
    let mut last = d_fine;
    while angle < std::f64::consts::PI {
        let d = if angle < half_angle {
            d_fine
        } else {
            (last * ANGULAR_GROWTH).min(d_coarse)
        };
        deltas.push(d);
        angle += d;
        last = d;
    }
    // Rescale so the half-ring closes exactly at pi.
    let scale = std::f64::consts::PI / angle;
    let mut thetas = Vec::with_capacity(2 * deltas.len());
    let mut acc = 0.5 * std::f64::consts::PI;
    thetas.push(acc);
    for d in &deltas {
        acc += d * scale;
        thetas.push(acc);
    }
    // Mirror (skip the shared endpoints at pi/2 and 3pi/2).
    let n_half = thetas.len();
    for k in 1..n_half - 1 {
        thetas.push(std::f64::consts::PI - thetas[n_half - 1 - k] + 2.0 * std::f64::consts::PI);
    }
    let n_rays = thetas.len();
    if n_rays < MIN_HOLE_SEGMENTS {
        return Err(Error::config(format!(
            "angular resolution too coarse: {n_rays} rays < {MIN_HOLE_SEGMENTS}"
        )));
    }

    // Snap the nearest ray onto each rectangle corner direction.
    for corner in [
        [0.0, 0.0],
        [geom.width, 0.0],
        [geom.width, geom.height],
        [0.0, geom.height],
    ] {
        let mut ang = (corner[1] - center[1]).atan2(corner[0] - center[0]);
        if ang < 0.5 * std::f64::consts::PI {
            ang += 2.0 * std::f64::consts::PI;
        }
        let (best, _) = thetas
            .iter()
            .enumerate()
            .map(|(i, t)| (i, (t - ang).abs()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty ray set");
        thetas[best] = ang;
    }

    // Ray hits on the rectangle.
    let hits: Vec<RayHit> = thetas
        .iter()
        .map(|&t| ray_hit(center, t, geom.width, geom.height))
        .collect::<Result<_>>()?;

    // Common radial layer count: enough that every ray keeps its first layer
    // below h_fine and fine rays keep every edge below h_fine.
    let mut layers = 0usize;
    for (i, hit) in hits.iter().enumerate() {
        let span = (hit.r / a).ln();
        let d_local = local_spacing(&thetas, i);
        let ideal = (span / d_local).ceil() as usize;
        layers = layers.max(ideal.max((span * a / h_fine).ceil() as usize));
    }
    let layers = layers.max(2);

    let mut nodes = Vec::with_capacity(n_rays * (layers + 1));
    for (i, hit) in hits.iter().enumerate() {
        let (sin, cos) = thetas[i].sin_cos();
        let ratio = (hit.r / a).ln() / layers as f64;
        for j in 0..=layers {
            if j == layers {
                nodes.push(hit.point); // exact boundary point
            } else {
                let r = a * (ratio * j as f64).exp();
                nodes.push([center[0] + r * cos, center[1] + r * sin]);
            }
        }
    }
    let idx = |i: usize, j: usize| (i % n_rays) * (layers + 1) + j;

    let mut elements = Vec::with_capacity(2 * n_rays * layers);
    for i in 0..n_rays {
        for j in 0..layers {
            let q00 = idx(i, j);
            let q10 = idx(i + 1, j);
            let q11 = idx(i + 1, j + 1);
            let q01 = idx(i, j + 1);
            // CCW quad order is (q00, q01, q11, q10); split along the
            // shorter diagonal.
            if super::dist(nodes[q00], nodes[q11]) <= super::dist(nodes[q10], nodes[q01]) {
                elements.push([q00, q01, q11]);
                elements.push([q00, q11, q10]);
            } else {
                elements.push([q00, q01, q10]);
                elements.push([q01, q11, q10]);
            }
        }
    }

    let mut boundary = Vec::with_capacity(2 * n_rays);
    for i in 0..n_rays {
        boundary.push(BoundaryEdge {
            nodes: [idx(i, 0), idx(i + 1, 0)],
            tag: BoundaryTag::Rebar,
        });
        let mid = [
            0.5 * (nodes[idx(i, layers)][0] + nodes[idx(i + 1, layers)][0]),
            0.5 * (nodes[idx(i, layers)][1] + nodes[idx(i + 1, layers)][1]),
        ];
        boundary.push(BoundaryEdge {
            nodes: [idx(i, layers), idx(i + 1, layers)],
            tag: classify_side(mid, geom.width, geom.height)?,
        });
    }

    let mesh = Mesh {
        nodes,
        elements,
        boundary,
        target_h: h_fine,
    };
    mesh.validate()?;
    for tag in [
        BoundaryTag::Rebar,
        BoundaryTag::Top,
        BoundaryTag::Bottom,
        BoundaryTag::Left,
        BoundaryTag::Right,
    ] {
        if mesh.boundary_edges(tag).next().is_none() {
            return Err(Error::config(format!(
                "generated mesh is missing boundary tag {}",
                tag.as_str()
            )));
        }
    }
    Ok(mesh)
}

struct RayHit {
    r: f64,
    point: [f64; 2],
}

/// First intersection of the ray `center + t (cos, sin)` with the rectangle
/// [0,w] x [0,h]; the hit point is snapped exactly onto the boundary.
fn ray_hit(center: [f64; 2], theta: f64, w: f64, h: f64) -> Result<RayHit> {
    let (sin, cos) = theta.sin_cos();
    let mut best = f64::INFINITY;
    if cos > 1e-14 {
        best = best.min((w - center[0]) / cos);
    }
    if cos < -1e-14 {
        best = best.min(-center[0] / cos);
    }
    if sin > 1e-14 {
        best = best.min((h - center[1]) / sin);
    }
    if sin < -1e-14 {
        best = best.min(-center[1] / sin);
    }
    if !best.is_finite() || best <= 0.0 {
        return Err(Error::numerical("ray cast failed: center outside rectangle?"));
    }
    let mut p = [center[0] + best * cos, center[1] + best * sin];
    // Snap the dominant coordinate exactly onto the wall.
    let snap = |v: f64, lo: f64, hi: f64| {
        if (v - lo).abs() < 1e-9 * hi.max(1.0) {
            lo
        } else if (v - hi).abs() < 1e-9 * hi.max(1.0) {
            hi
        } else {
            v
        }
    };
    p[0] = snap(p[0], 0.0, w).clamp(0.0, w);
    p[1] = snap(p[1], 0.0, h).clamp(0.0, h);
    Ok(RayHit { r: best, point: p })
}

fn local_spacing(thetas: &[f64], i: usize) -> f64 {
    let n = thetas.len();
    let next = (thetas[(i + 1) % n] - thetas[i]).rem_euclid(2.0 * std::f64::consts::PI);
    let prev = (thetas[i] - thetas[(i + n - 1) % n]).rem_euclid(2.0 * std::f64::consts::PI);
    0.5 * (next + prev)
}

fn classify_side(p: [f64; 2], w: f64, h: f64) -> Result<BoundaryTag> {
    let tol = 1e-9 * w.max(h);
    let candidates = [
        (p[1], BoundaryTag::Bottom),
        ((h - p[1]).abs(), BoundaryTag::Top),
        (p[0], BoundaryTag::Left),
        ((w - p[0]).abs(), BoundaryTag::Right),
    ];
    candidates
        .iter()
        .filter(|(d, _)| *d < tol)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|&(_, t)| t)
        .ok_or_else(|| Error::numerical(format!("outer edge midpoint {p:?} not on the rectangle")))
}

/// Uniform polar O-grid between radii `a < b`, tagged INNER / OUTER.
pub fn build_annulus_mesh(a: f64, b: f64, h: f64) -> Result<Mesh> {
    if !(a > 0.0 && b > a) {
        return Err(Error::config(format!(
            "annulus radii must satisfy 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::config("annulus element size must be > 0"));
    }
    let n_theta = ((2.0 * std::f64::consts::PI * b / h).ceil() as usize).max(MIN_HOLE_SEGMENTS);
    let layers = (((b - a) / h).ceil() as usize).max(1);
    let dr = (b - a) / layers as f64;
    let dth = 2.0 * std::f64::consts::PI / n_theta as f64;

    let mut nodes = Vec::with_capacity(n_theta * (layers + 1));
    for i in 0..n_theta {
        let (sin, cos) = (i as f64 * dth).sin_cos();
        for j in 0..=layers {
            let r = a + dr * j as f64;
            nodes.push([r * cos, r * sin]);
        }
    }
    let idx = |i: usize, j: usize| (i % n_theta) * (layers + 1) + j;
    let mut elements = Vec::with_capacity(2 * n_theta * layers);
    for i in 0..n_theta {
        for j in 0..layers {
            let (q00, q10, q11, q01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            elements.push([q00, q10, q11]);
            elements.push([q00, q11, q01]);
        }
    }
    let mut boundary = Vec::with_capacity(2 * n_theta);
    for i in 0..n_theta {
        boundary.push(BoundaryEdge {
            nodes: [idx(i, 0), idx(i + 1, 0)],
            tag: BoundaryTag::Inner,
        });
        boundary.push(BoundaryEdge {
            nodes: [idx(i, layers), idx(i + 1, layers)],
            tag: BoundaryTag::Outer,
        });
    }
    let mesh = Mesh {
        nodes,
        elements,
        boundary,
        target_h: h,
    };
    mesh.validate()?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specimen() -> SpecimenGeometry {
        SpecimenGeometry {
            width: 0.15,
            height: 0.15,
            rebar_radius: 0.008,
            cover: 0.020,
        }
    }

    #[test]
    fn rebar_loop_length_matches_circumference() {
        let mesh = build_specimen_mesh(&specimen(), 0.6e-3, 10e-3).unwrap();
        let len: f64 = mesh
            .boundary_edges(BoundaryTag::Rebar)
            .map(|e| mesh.edge_length(e.nodes))
            .sum();
        let circ = 2.0 * std::f64::consts::PI * 0.008;
        assert!(
            (len - circ).abs() / circ < 0.01,
            "rebar loop length {len}, circumference {circ}"
        );
        assert!(mesh.boundary_edges(BoundaryTag::Rebar).count() >= 64);
    }

    #[test]
    fn rebar_center_follows_cover() {
        let mut geom = specimen();
        geom.cover = 0.040;
        assert_eq!(geom.rebar_center(), [0.075, 0.15 - 0.040 - 0.008]);
    }

    #[test]
    fn area_matches_rectangle_minus_hole() {
        // Oracle: exact area formula vs summed element areas.
        let geom = specimen();
        let mesh = build_specimen_mesh(&geom, 0.8e-3, 10e-3).unwrap();
        let exact = geom.width * geom.height - std::f64::consts::PI * geom.rebar_radius.powi(2);
        let got = mesh.total_area();
        assert!(
            (got - exact).abs() / exact < 0.01,
            "mesh area {got}, exact {exact}"
        );
    }

    #[test]
    fn all_five_tags_present_and_quality_holds() {
        let mesh = build_specimen_mesh(&specimen(), 0.7e-3, 8e-3).unwrap();
        for tag in [
            BoundaryTag::Rebar,
            BoundaryTag::Top,
            BoundaryTag::Bottom,
            BoundaryTag::Left,
            BoundaryTag::Right,
        ] {
            assert!(mesh.boundary_edges(tag).next().is_some(), "{tag:?} missing");
        }
        assert!(mesh.min_angle_deg() >= super::super::MIN_ANGLE_DEG);
    }

    #[test]
    fn cover_band_edges_are_fine() {
        let geom = specimen();
        let h_fine = 0.6e-3;
        let mesh = build_specimen_mesh(&geom, h_fine, 10e-3).unwrap();
        let center = geom.rebar_center();
        let in_band = |p: [f64; 2]| {
            (p[0] - center[0]).abs() <= geom.rebar_radius && p[1] >= center[1]
        };
        let mut checked = 0;
        for &[i, j, k] in &mesh.elements {
            for (u, v) in [(i, j), (j, k), (k, i)] {
                if in_band(mesh.nodes[u]) && in_band(mesh.nodes[v]) {
                    let len = mesh.edge_length([u, v]);
                    assert!(len <= 1.05 * h_fine, "cover-band edge of length {len}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 100, "band should contain many edges, got {checked}");
    }

    #[test]
    fn corners_are_mesh_nodes() {
        let geom = specimen();
        let mesh = build_specimen_mesh(&geom, 1e-3, 10e-3).unwrap();
        for corner in [
            [0.0, 0.0],
            [geom.width, 0.0],
            [geom.width, geom.height],
            [0.0, geom.height],
        ] {
            let found = mesh
                .nodes
                .iter()
                .any(|p| super::super::dist(*p, corner) < 1e-12);
            assert!(found, "corner {corner:?} is not a node");
        }
    }

    #[test]
    fn invalid_geometry_rejected() {
        let mut geom = specimen();
        geom.cover = -0.01;
        assert!(build_specimen_mesh(&geom, 1e-3, 1e-2).is_err());
        let mut geom = specimen();
        geom.cover = 0.141; // cover + 2a >= height
        assert!(build_specimen_mesh(&geom, 1e-3, 1e-2).is_err());
        assert!(build_specimen_mesh(&specimen(), 2e-3, 1e-3).is_err());
    }

    #[test]
    fn annulus_containment_and_area() {
        let (a, b, h) = (0.008, 0.016, 0.5e-3);
        let mesh = build_annulus_mesh(a, b, h).unwrap();
        assert!(!mesh.nodes.is_empty());
        for p in &mesh.nodes {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(r >= a - h && r <= b + h, "node at radius {r}");
        }
        let exact = std::f64::consts::PI * (b * b - a * a);
        let got = mesh.total_area();
        assert!((got - exact).abs() / exact < 0.01);

        // Halving h reduces the polygonalization area error.
        let finer = build_annulus_mesh(a, b, h / 2.0).unwrap();
        let err_coarse = (got - exact).abs();
        let err_fine = (finer.total_area() - exact).abs();
        assert!(err_fine < err_coarse);
    }

    #[test]
    fn annulus_bad_radii_rejected() {
        assert!(build_annulus_mesh(0.016, 0.008, 1e-3).is_err());
        assert!(build_annulus_mesh(0.008, 0.008, 1e-3).is_err());
    }
}
