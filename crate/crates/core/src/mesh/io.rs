//! Plain-text mesh format.
//!
//! ```text
//! DGTDMESH 1
//! # comments and blank lines are ignored anywhere
//! style layered                 # optional: paved | layered (default paved)
//! layer_planes 0.2 0.204        # optional: flat z-planes, metres
//! <n_vertices> <n_tets> <n_tagged_faces>
//! x y z                         # n_vertices lines, metres
//! a b c d                       # n_tets lines, 0-based vertex ids
//! a b c tag                     # n_tagged_faces lines
//! ```
//!
//! Face tags are `pec`, `periodic-x`, `periodic-y` and `injection`. Periodic
//! and injection faces must be listed; faces left unlisted on the bounding box
//! default to `pec`. Periodic axes are inferred from the periodic tags.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{compute_bounds, connect_mesh, Axis, BoundaryTag, Mesh, MeshStyle, RegionTag};
use crate::error::{Error, Result};
use crate::reference_element::FACE_VERTICES;

const MAGIC: &str = "DGTDMESH 1";

fn tag_name(tag: BoundaryTag) -> &'static str {
    match tag {
        BoundaryTag::Pec => "pec",
        BoundaryTag::PeriodicX => "periodic-x",
        BoundaryTag::PeriodicY => "periodic-y",
        BoundaryTag::InjectionPlane => "injection",
        BoundaryTag::Interior => "interior",
    }
}

/// Serialise a connected mesh.
pub fn write_mesh_file(mesh: &Mesh, path: &Path) -> Result<()> {
    if !mesh.is_connected() {
        return Err(Error::Connectivity("only connected meshes can be written".into()));
    }
    let mut faces = Vec::new();
    for k in 0..mesh.n_elements() {
        for f in 0..4 {
            let link = mesh.face_neighbors[k][f];
            if link.tag == BoundaryTag::Interior {
                continue;
            }
            // Injection faces are shared; write them once.
            if link.tag == BoundaryTag::InjectionPlane {
                if let Some(other) = link.neighbor {
                    if other < (k, f) {
                        continue;
                    }
                }
            }
            faces.push((FACE_VERTICES[f].map(|i| mesh.elements[k][i]), link.tag));
        }
    }
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    let style = match mesh.style {
        MeshStyle::Paved => "paved",
        MeshStyle::Layered => "layered",
    };
    writeln!(out, "style {style}").unwrap();
    if !mesh.layer_planes.is_empty() {
        let planes: Vec<String> = mesh.layer_planes.iter().map(|z| format!("{z:e}")).collect();
        writeln!(out, "layer_planes {}", planes.join(" ")).unwrap();
    }
    writeln!(out, "{} {} {}", mesh.vertices.len(), mesh.n_elements(), faces.len()).unwrap();
    for v in &mesh.vertices {
        // `{:e}` prints the shortest representation that round-trips exactly.
        writeln!(out, "{:e} {:e} {:e}", v[0], v[1], v[2]).unwrap();
    }
    for t in &mesh.elements {
        writeln!(out, "{} {} {} {}", t[0], t[1], t[2], t[3]).unwrap();
    }
    for (v, tag) in faces {
        writeln!(out, "{} {} {} {}", v[0], v[1], v[2], tag_name(tag)).unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

struct Lines<'a> {
    path: &'a Path,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(path: &'a Path, text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            path,
            inner: it.peekable(),
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some(x) => Ok(x),
            None => Err(self.err(0, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn fields<T: std::str::FromStr>(&mut self, what: &str, n: usize) -> Result<(usize, Vec<T>)> {
        let (line, text) = self.next(what)?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != n {
            return Err(self.err(line, format!("expected {n} fields for {what}, found {}", parts.len())));
        }
        let vals = parts
            .iter()
            .map(|p| p.parse::<T>().map_err(|_| self.err(line, format!("invalid value '{p}' in {what}"))))
            .collect::<Result<Vec<T>>>()?;
        Ok((line, vals))
    }
}

/// Read, validate and connect a mesh file.
pub fn read_mesh_file(path: &Path) -> Result<Mesh> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = Lines::new(path, &text);

    let (line, magic) = lines.next("header")?;
    if magic != MAGIC {
        return Err(lines.err(line, format!("expected '{MAGIC}' header")));
    }

    let mut style = MeshStyle::Paved;
    let mut layer_planes = Vec::new();
    while let Some(&(line, l)) = lines.inner.peek() {
        let mut words = l.split_whitespace();
        match words.next() {
            Some("style") => {
                style = match words.next() {
                    Some("paved") => MeshStyle::Paved,
                    Some("layered") => MeshStyle::Layered,
                    other => return Err(lines.err(line, format!("unknown style {other:?}"))),
                };
            }
            Some("layer_planes") => {
                layer_planes = words
                    .map(|w| w.parse::<f64>().map_err(|_| lines.err(line, format!("invalid plane '{w}'"))))
                    .collect::<Result<_>>()?;
                if layer_planes.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(lines.err(line, "layer planes must be strictly increasing"));
                }
            }
            _ => break,
        }
        lines.inner.next();
    }

    let (line, counts) = lines.fields::<usize>("counts line", 3)?;
    let [nv, nt, nb] = [counts[0], counts[1], counts[2]];
    if nv < 4 || nt == 0 {
        return Err(lines.err(line, "a mesh needs at least four vertices and one element"));
    }

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, v) = lines.fields::<f64>("vertex", 3)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(lines.err(line, "non-finite vertex coordinate"));
        }
        vertices.push([v[0], v[1], v[2]]);
    }
    let mut elements = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, t) = lines.fields::<usize>("tetrahedron", 4)?;
        if t.iter().any(|&i| i >= nv) {
            return Err(lines.err(line, format!("vertex index out of range (n_vertices = {nv})")));
        }
        let tet = [t[0], t[1], t[2], t[3]];
        let mut sorted = tet;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(lines.err(line, "repeated vertex in tetrahedron"));
        }
        elements.push(tet);
    }
    let mut tagged: Vec<(usize, [usize; 3], BoundaryTag)> = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (line, text) = lines.next("tagged face")?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(lines.err(line, "expected 'a b c tag' for a tagged face"));
        }
        let mut ids = [0usize; 3];
        for (slot, p) in ids.iter_mut().zip(&parts[..3]) {
            *slot = p
                .parse()
                .ok()
                .filter(|&i: &usize| i < nv)
                .ok_or_else(|| lines.err(line, format!("invalid vertex index '{p}'")))?;
        }
        let tag = match parts[3] {
            "pec" => BoundaryTag::Pec,
            "periodic-x" => BoundaryTag::PeriodicX,
            "periodic-y" => BoundaryTag::PeriodicY,
            "injection" => BoundaryTag::InjectionPlane,
            other => return Err(lines.err(line, format!("unknown face tag '{other}'"))),
        };
        ids.sort_unstable();
        tagged.push((line, ids, tag));
    }
    if let Some(&(line, extra)) = lines.inner.peek() {
        return Err(lines.err(line, format!("unexpected trailing content '{extra}'")));
    }

    let bounds = compute_bounds(&vertices);
    let mut lattice: [Vec<f64>; 3] = Default::default();
    let size = (0..3).map(|d| bounds[1][d] - bounds[0][d]).fold(0.0, f64::max);
    for (d, planes) in lattice.iter_mut().enumerate() {
        let mut c: Vec<f64> = vertices.iter().map(|v| v[d]).collect();
        c.sort_by(f64::total_cmp);
        c.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * size);
        *planes = c;
    }
    let n_el = elements.len();
    let mesh = Mesh {
        vertices,
        elements,
        face_neighbors: Vec::new(),
        region_tags: vec![RegionTag::Interior; n_el],
        style,
        layer_planes,
        lattice,
        bounds,
        periods: [None; 3],
    };
    mesh.check_volumes()?;

    let mut axes = Vec::new();
    if tagged.iter().any(|t| t.2 == BoundaryTag::PeriodicX) {
        axes.push(Axis::X);
    }
    if tagged.iter().any(|t| t.2 == BoundaryTag::PeriodicY) {
        axes.push(Axis::Y);
    }
    let mut mesh = connect_mesh(mesh, &axes)?;

    // Check the listed tags against the derived connectivity and apply the
    // injection tags.
    let mut by_key: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
    for k in 0..mesh.n_elements() {
        for f in 0..4 {
            let mut key = FACE_VERTICES[f].map(|i| mesh.elements[k][i]);
            key.sort_unstable();
            by_key.entry(key).or_default().push((k, f));
        }
    }
    let mut seen = HashMap::new();
    for &(line, key, tag) in &tagged {
        let Some(slots) = by_key.get(&key) else {
            return Err(lines.err(line, "tagged face is not a face of any element"));
        };
        for &(k, f) in slots {
            let link = &mut mesh.face_neighbors[k][f];
            match tag {
                BoundaryTag::InjectionPlane => {
                    if link.tag != BoundaryTag::Interior {
                        return Err(lines.err(line, "injection face must be shared by two elements"));
                    }
                    link.tag = BoundaryTag::InjectionPlane;
                }
                _ if link.tag != tag => {
                    return Err(lines.err(
                        line,
                        format!("face tagged '{}' but connectivity gives '{}'", tag_name(tag), tag_name(link.tag)),
                    ));
                }
                _ => {}
            }
        }
        seen.insert(key, ());
    }
    // Periodic faces are paired on both sides; each side must be listed.
    for k in 0..mesh.n_elements() {
        for f in 0..4 {
            let tag = mesh.face_neighbors[k][f].tag;
            if matches!(tag, BoundaryTag::PeriodicX | BoundaryTag::PeriodicY) {
                let mut key = FACE_VERTICES[f].map(|i| mesh.elements[k][i]);
                key.sort_unstable();
                if !seen.contains_key(&key) {
                    let c = mesh.face_centroid(k, f);
                    return Err(Error::UnmatchedPeriodicFace {
                        element: k,
                        face: f,
                        centroid: c,
                    });
                }
            }
        }
    }
    Ok(mesh)
}
