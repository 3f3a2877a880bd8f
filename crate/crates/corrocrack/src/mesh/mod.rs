//! Triangular meshes of the specimen cross-section and verification annuli.
//!
//! Meshes are immutable after construction: nodes, counter-clockwise
//! triangles and tagged boundary edges. Construction validates positive
//! areas, minimum angle, boundary closure and duplicate nodes, and rejects
//! meshes that fail.

mod generate;
mod io;

pub use generate::{build_annulus_mesh, build_specimen_mesh};
pub use io::{read_mesh, write_mesh};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Minimum acceptable triangle angle in degrees.
pub const MIN_ANGLE_DEG: f64 = 20.0;

/// Rectangular specimen cross-section with a circular rebar hole.
///
/// The rebar is centered horizontally; its vertical position follows from
/// the cover depth `c` measured from the top surface to the rebar crown.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpecimenGeometry {
    /// Cross-section width [m].
    pub width: f64,
    /// Cross-section height [m].
    pub height: f64,
    /// Rebar radius a [m].
    pub rebar_radius: f64,
    /// Cover depth c (top surface to rebar crown) [m].
    pub cover: f64,
}

impl SpecimenGeometry {
    pub fn rebar_center(&self) -> [f64; 2] {
        [
            0.5 * self.width,
            self.height - self.cover - self.rebar_radius,
        ]
    }

    /// Shape factor alpha = (a + c)/a of the equivalent thick-walled
    /// cylinder around the rebar.
    pub fn shape_factor(&self) -> f64 {
        (self.rebar_radius + self.cover) / self.rebar_radius
    }

    pub fn validate(&self) -> Result<()> {
        let g = self;
        if !(g.rebar_radius > 0.0) {
            return Err(Error::config("rebar_radius must be > 0"));
        }
        if !(g.cover > 0.0) {
            return Err(Error::config("cover must be > 0"));
        }
        if !(g.cover + 2.0 * g.rebar_radius < g.height) {
            return Err(Error::config(
                "geometry invariant violated: cover + 2*rebar_radius must be < height",
            ));
        }
        if !(g.width > 2.0 * g.rebar_radius) {
            return Err(Error::config(
                "geometry invariant violated: width must exceed the rebar diameter",
            ));
        }
        Ok(())
    }
}

/// Boundary classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    /// Steel-concrete interface (the hole).
    Rebar,
    Top,
    Bottom,
    Left,
    Right,
    /// Inner circle of an annulus mesh.
    Inner,
    /// Outer circle of an annulus mesh.
    Outer,
}

impl BoundaryTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryTag::Rebar => "REBAR",
            BoundaryTag::Top => "TOP",
            BoundaryTag::Bottom => "BOTTOM",
            BoundaryTag::Left => "LEFT",
            BoundaryTag::Right => "RIGHT",
            BoundaryTag::Inner => "INNER",
            BoundaryTag::Outer => "OUTER",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "REBAR" => BoundaryTag::Rebar,
            "TOP" => BoundaryTag::Top,
            "BOTTOM" => BoundaryTag::Bottom,
            "LEFT" => BoundaryTag::Left,
            "RIGHT" => BoundaryTag::Right,
            "INNER" => BoundaryTag::Inner,
            "OUTER" => BoundaryTag::Outer,
            other => return Err(Error::config(format!("unknown boundary tag {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

/// Immutable triangulation with tagged boundary.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise node index triples.
    pub elements: Vec<[usize; 3]>,
    pub boundary: Vec<BoundaryEdge>,
    /// Representative fine element size used for tolerances [m].
    pub target_h: f64,
}

impl Mesh {
    /// Signed area of one triangle (positive for CCW).
    pub fn element_area(&self, e: usize) -> f64 {
        let [i, j, k] = self.elements[e];
        let (p, q, r) = (self.nodes[i], self.nodes[j], self.nodes[k]);
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.elements.len()).map(|e| self.element_area(e)).sum()
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = 180.0f64;
        for &[i, j, k] in &self.elements {
            let (p, q, r) = (self.nodes[i], self.nodes[j], self.nodes[k]);
            let a = dist(q, r);
            let b = dist(p, r);
            let c = dist(p, q);
            // Law of cosines per corner.
            for (opp, e1, e2) in [(a, b, c), (b, a, c), (c, a, b)] {
                let cos = ((e1 * e1 + e2 * e2 - opp * opp) / (2.0 * e1 * e2)).clamp(-1.0, 1.0);
                worst = worst.min(cos.acos().to_degrees());
            }
        }
        worst
    }

    pub fn edge_length(&self, n: [usize; 2]) -> f64 {
        dist(self.nodes[n[0]], self.nodes[n[1]])
    }

    pub fn boundary_edges(&self, tag: BoundaryTag) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary.iter().filter(move |e| e.tag == tag)
    }

    /// Sorted, deduplicated node indices on a tagged boundary.
    pub fn boundary_nodes(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .boundary_edges(tag)
            .flat_map(|e| e.nodes.into_iter())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Map from undirected boundary edge to the single adjacent element.
    pub fn boundary_adjacency(&self) -> HashMap<(usize, usize), usize> {
        let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (ei, &[i, j, k]) in self.elements.iter().enumerate() {
            for (u, v) in [(i, j), (j, k), (k, i)] {
                let key = (u.min(v), u.max(v));
                edge_owner
                    .entry(key)
                    .and_modify(|o| o.1 += 1)
                    .or_insert((ei, 1));
            }
        }
        let mut out = HashMap::new();
        for be in &self.boundary {
            let key = (be.nodes[0].min(be.nodes[1]), be.nodes[0].max(be.nodes[1]));
            if let Some(&(ei, 1)) = edge_owner.get(&key) {
                out.insert(key, ei);
            }
        }
        out
    }

    /// Full structural validation; called by the generators.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() || self.elements.is_empty() {
            return Err(Error::config("mesh is empty"));
        }
        for (e, &[i, j, k]) in self.elements.iter().enumerate() {
            if i >= self.nodes.len() || j >= self.nodes.len() || k >= self.nodes.len() {
                return Err(Error::config(format!("element {e} has out-of-range node index")));
            }
            if self.element_area(e) <= 0.0 {
                return Err(Error::config(format!(
                    "element {e} has non-positive area {}",
                    self.element_area(e)
                )));
            }
        }
        let min_angle = self.min_angle_deg();
        if min_angle < MIN_ANGLE_DEG {
            return Err(Error::config(format!(
                "mesh quality too low: minimum angle {min_angle:.2} deg < {MIN_ANGLE_DEG} deg"
            )));
        }

        // Every boundary edge must be a mesh edge owned by exactly one element,
        // and every single-owner mesh edge must be listed in the boundary.
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for &[i, j, k] in &self.elements {
            for (u, v) in [(i, j), (j, k), (k, i)] {
                *count.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            }
        }
        let mut listed: HashMap<(usize, usize), usize> = HashMap::new();
        for be in &self.boundary {
            let key = (be.nodes[0].min(be.nodes[1]), be.nodes[0].max(be.nodes[1]));
            *listed.entry(key).or_insert(0) += 1;
            match count.get(&key) {
                Some(1) => {}
                Some(n) => {
                    return Err(Error::config(format!(
                        "boundary edge {key:?} is shared by {n} elements"
                    )))
                }
                None => {
                    return Err(Error::config(format!(
                        "boundary edge {key:?} is not an element edge"
                    )))
                }
            }
        }
        for (key, &n) in &count {
            if n == 1 && !listed.contains_key(key) {
                return Err(Error::config(format!("untagged boundary edge {key:?}")));
            }
        }
        if listed.values().any(|&n| n != 1) {
            return Err(Error::config("duplicate boundary edge"));
        }

        // Closure: every boundary node has even (here: exactly 2) incident
        // boundary edges.
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for be in &self.boundary {
            *degree.entry(be.nodes[0]).or_insert(0) += 1;
            *degree.entry(be.nodes[1]).or_insert(0) += 1;
        }
        if degree.values().any(|&d| d != 2) {
            return Err(Error::config("boundary loops are not closed"));
        }

        // Duplicate nodes within target_h / 100 (cell hashing).
        let tol = self.target_h / 100.0;
        let inv = 1.0 / tol.max(1e-300);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (idx, p) in self.nodes.iter().enumerate() {
            let cell = ((p[0] * inv).floor() as i64, (p[1] * inv).floor() as i64);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(others) = grid.get(&(cell.0 + dx, cell.1 + dy)) {
                        for &o in others {
                            if dist(*p, self.nodes[o]) < tol {
                                return Err(Error::config(format!(
                                    "nodes {o} and {idx} closer than h/100"
                                )));
                            }
                        }
                    }
                }
            }
            grid.entry(cell).or_default().push(idx);
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}
