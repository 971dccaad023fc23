//! OBJ and ASCII PLY, triangles only. Coordinates are written with 17
//! significant digits so a write/read cycle is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{MeshError, TriMesh, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Result<Self, MeshError> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("obj") => Ok(Self::Obj),
            Some("ply") => Ok(Self::Ply),
            _ => Err(MeshError::UnknownFormat(path.to_path_buf())),
        }
    }
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<TriMesh, MeshError> {
    let path = path.as_ref();
    let format = MeshFormat::from_path(path)?;
    let text = fs::read_to_string(path)?;
    match format {
        MeshFormat::Obj => parse_obj(&text),
        MeshFormat::Ply => parse_ply(&text),
    }
}

pub fn write_mesh(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    let text = match MeshFormat::from_path(path)? {
        MeshFormat::Obj => format_obj(mesh),
        MeshFormat::Ply => format_ply(mesh),
    };
    fs::write(path, text)?;
    Ok(())
}

pub(crate) fn format_obj(mesh: &TriMesh) -> String {
    let mut out = String::with_capacity(64 * mesh.vertex_count());
    for v in mesh.vertices() {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

pub(crate) fn format_ply(mesh: &TriMesh) -> String {
    let mut out = String::with_capacity(64 * mesh.vertex_count());
    let _ = write!(
        out,
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\n\
         property double z\nelement face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertex_count(),
        mesh.triangle_count()
    );
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64, MeshError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing coordinate"))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid number {tok:?}")))
}

pub(crate) fn parse_obj(text: &str) -> Result<TriMesh, MeshError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut toks = content.split_whitespace();
        match toks.next() {
            None => {}
            Some("v") => {
                let x = parse_f64(toks.next(), line)?;
                let y = parse_f64(toks.next(), line)?;
                let z = parse_f64(toks.next(), line)?;
                vertices.push(Vec3::new(x, y, z));
            }
            Some("f") => {
                let idx: Vec<&str> = toks.collect();
                if idx.len() != 3 {
                    return Err(MeshError::UnsupportedFeature {
                        line,
                        message: format!("face with {} vertices", idx.len()),
                    });
                }
                let mut tri = [0usize; 3];
                for (slot, tok) in tri.iter_mut().zip(&idx) {
                    let head = tok.split('/').next().unwrap_or("");
                    let k: i64 = head
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid index {tok:?}")))?;
                    let resolved = if k > 0 {
                        k - 1
                    } else if k < 0 {
                        vertices.len() as i64 + k
                    } else {
                        -1
                    };
                    if resolved < 0 || resolved as usize >= vertices.len() {
                        return Err(parse_err(line, format!("index {k} out of range")));
                    }
                    *slot = resolved as usize;
                }
                triangles.push(tri);
            }
            Some("vn" | "vt" | "o" | "g" | "s" | "usemtl" | "mtllib") => {}
            Some(other) => {
                return Err(MeshError::UnsupportedFeature {
                    line,
                    message: format!("OBJ statement {other:?}"),
                })
            }
        }
    }
    if triangles.is_empty() {
        return Err(parse_err(text.lines().count(), "no triangles found"));
    }
    Ok(TriMesh::new(vertices, triangles))
}

pub(crate) fn parse_ply(text: &str) -> Result<TriMesh, MeshError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "ply")) => {}
        Some((n, _)) => return Err(parse_err(n, "missing 'ply' magic")),
        None => return Err(parse_err(0, "empty file")),
    }
    let mut n_vertices = None;
    let mut n_faces = None;
    let mut vertex_props: Vec<String> = Vec::new();
    let mut current = "";
    loop {
        let (n, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, "unterminated header"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["format", "ascii", _] => {}
            ["format", other, ..] => {
                return Err(MeshError::UnsupportedFeature {
                    line: n,
                    message: format!("PLY format {other}"),
                })
            }
            ["comment", ..] | ["obj_info", ..] => {}
            ["element", "vertex", count] => {
                n_vertices = Some(count.parse::<usize>().map_err(|_| parse_err(n, "bad count"))?);
                current = "vertex";
            }
            ["element", "face", count] => {
                n_faces = Some(count.parse::<usize>().map_err(|_| parse_err(n, "bad count"))?);
                current = "face";
            }
            ["element", other, _] => {
                return Err(MeshError::UnsupportedFeature {
                    line: n,
                    message: format!("PLY element {other}"),
                })
            }
            ["property", "list", ..] if current == "face" => {}
            ["property", _, name] if current == "vertex" => vertex_props.push(name.to_string()),
            ["end_header"] => break,
            _ => return Err(parse_err(n, format!("unexpected header line {line:?}"))),
        }
    }
    let n_vertices = n_vertices.ok_or_else(|| parse_err(0, "no vertex element"))?;
    let n_faces = n_faces.ok_or_else(|| parse_err(0, "no face element"))?;
    let pos = |name: &str| vertex_props.iter().position(|p| p == name);
    let (ix, iy, iz) = match (pos("x"), pos("y"), pos("z")) {
        (Some(x), Some(y), Some(z)) => (x, y, z),
        _ => return Err(parse_err(0, "vertex element lacks x/y/z")),
    };
    let mut vertices = Vec::with_capacity(n_vertices);
    for _ in 0..n_vertices {
        let (n, line) = lines.next().ok_or_else(|| parse_err(0, "truncated vertex list"))?;
        let vals: Vec<&str> = line.split_whitespace().collect();
        if vals.len() != vertex_props.len() {
            return Err(parse_err(n, "wrong number of vertex properties"));
        }
        vertices.push(Vec3::new(
            parse_f64(Some(vals[ix]), n)?,
            parse_f64(Some(vals[iy]), n)?,
            parse_f64(Some(vals[iz]), n)?,
        ));
    }
    let mut triangles = Vec::with_capacity(n_faces);
    for _ in 0..n_faces {
        let (n, line) = lines.next().ok_or_else(|| parse_err(0, "truncated face list"))?;
        let vals: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(n, format!("invalid index {t:?}"))))
            .collect::<Result<_, _>>()?;
        if vals.first() != Some(&3) || vals.len() != 4 {
            return Err(MeshError::UnsupportedFeature {
                line: n,
                message: "non-triangle face".into(),
            });
        }
        if vals[1..].iter().any(|&k| k >= vertices.len()) {
            return Err(parse_err(n, "index out of range"));
        }
        triangles.push([vals[1], vals[2], vals[3]]);
    }
    if triangles.is_empty() {
        return Err(parse_err(0, "no triangles found"));
    }
    Ok(TriMesh::new(vertices, triangles))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_face_is_unsupported() {
        let text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        match parse_obj(text) {
            Err(MeshError::UnsupportedFeature { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected UnsupportedFeature, got {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(parse_obj(""), Err(MeshError::Parse { .. })));
        assert!(matches!(parse_ply(""), Err(MeshError::Parse { .. })));
    }

    #[test]
    fn bad_number_reports_line() {
        let text = "v 0 0 0\nv 1 0 zero\n";
        match parse_obj(text) {
            Err(MeshError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn obj_with_texture_indices() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nf 1/1 2/1 -1/1\n";
        let mesh = parse_obj(text).unwrap();
        assert_eq!(mesh.triangles(), &[[0, 1, 2]]);
    }

    #[test]
    fn binary_ply_is_unsupported() {
        let text = "ply\nformat binary_little_endian 1.0\nend_header\n";
        assert!(matches!(
            parse_ply(text),
            Err(MeshError::UnsupportedFeature { line: 2, .. })
        ));
    }
}
