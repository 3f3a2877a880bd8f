//! Plain-text mesh exchange format.
//!
//! Whitespace-delimited ASCII, SI units (meters):
//!
//! ```text
//! corrocrack-mesh 1 <target_h>
//! nodes <N>
//! <id> <x> <y>            (N rows, ids 0..N-1)
//! elements <M>
//! <id> <n1> <n2> <n3>     (M rows)
//! boundary <K>
//! <n1> <n2> <TAG>         (K rows)
//! ```

use super::{BoundaryEdge, BoundaryTag, Mesh};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub fn write_mesh(mesh: &Mesh, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "corrocrack-mesh 1 {:.17e}", mesh.target_h);
    let _ = writeln!(out, "nodes {}", mesh.nodes.len());
    for (i, p) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(out, "{i} {:.17e} {:.17e}", p[0], p[1]);
    }
    let _ = writeln!(out, "elements {}", mesh.elements.len());
    for (i, e) in mesh.elements.iter().enumerate() {
        let _ = writeln!(out, "{i} {} {} {}", e[0], e[1], e[2]);
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary.len());
    for be in &mesh.boundary {
        let _ = writeln!(out, "{} {} {}", be.nodes[0], be.nodes[1], be.tag.as_str());
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<Mesh> {
    let text = std::fs::read_to_string(path)?;
    let mut tokens = text.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| Error::config(format!("mesh file truncated: expected {what}")))
    };

    if next("header")? != "corrocrack-mesh" {
        return Err(Error::config("not a corrocrack mesh file"));
    }
    if next("version")? != "1" {
        return Err(Error::config("unsupported mesh format version"));
    }
    let target_h: f64 = parse(next("target_h")?)?;

    expect(next("section")?, "nodes")?;
    let n: usize = parse(next("node count")?)?;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let id: usize = parse(next("node id")?)?;
        if id != i {
            return Err(Error::config(format!("node ids must be 0..N-1, got {id}")));
        }
        nodes.push([parse(next("x")?)?, parse(next("y")?)?]);
    }

    expect(next("section")?, "elements")?;
    let m: usize = parse(next("element count")?)?;
    let mut elements = Vec::with_capacity(m);
    for i in 0..m {
        let id: usize = parse(next("element id")?)?;
        if id != i {
            return Err(Error::config(format!("element ids must be 0..M-1, got {id}")));
        }
        elements.push([
            parse(next("n1")?)?,
            parse(next("n2")?)?,
            parse(next("n3")?)?,
        ]);
    }

    expect(next("section")?, "boundary")?;
    let k: usize = parse(next("boundary count")?)?;
    let mut boundary = Vec::with_capacity(k);
    for _ in 0..k {
        boundary.push(BoundaryEdge {
            nodes: [parse(next("n1")?)?, parse(next("n2")?)?],
            tag: BoundaryTag::parse(next("tag")?)?,
        });
    }
    if tokens.next().is_some() {
        return Err(Error::config("trailing content in mesh file"));
    }

    let mesh = Mesh {
        nodes,
        elements,
        boundary,
        target_h,
    };
    mesh.validate()?;
    Ok(mesh)
}

fn expect(got: &str, want: &str) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::config(format!("expected section {want:?}, got {got:?}")))
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::config(format!("cannot parse {s:?} in mesh file")))
}
