//! Wavefront-style mesh loading.
//!
//! Supported statements: `v`, `vt`, `f` (with `v`, `v/vt`, `v/vt/vn` and
//! `v//vn` corners, 1-based or negative indices), and `g`/`usemtl`/`o` which
//! set the part label for subsequent faces. Normals in the file are ignored;
//! they are recomputed from geometry. Polygons are fan-triangulated.
//!
//! Corners are deduplicated on `(position, texcoord)` pairs, so a position
//! referenced with two different texture coordinates becomes two vertices.
//! Vertices referenced without a texcoord get one synthesized from a
//! cylindrical mapping around the vertical axis.
//!
//! An optional sidecar file `<mesh>.toml` next to the asset overrides the
//! annotation anchor:
//!
//! ```toml
//! anchor = "centroid"   # or "top" (the default rule)
//! # anchor_index = 12   # explicit, counts `v` statements from 0
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use nalgebra::{Point3, Vector2};
use serde::Deserialize;

use super::{Mesh, DEFAULT_FACE_CAP};
use crate::error::{Error, Result};

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    load_mesh_with_cap(path, DEFAULT_FACE_CAP)
}

pub fn load_mesh_with_cap(path: impl AsRef<Path>, face_cap: usize) -> Result<Mesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut parsed = parse(&text, path)?;
    if parsed.mesh.faces.len() > face_cap {
        return Err(Error::FaceBudget {
            path: path.into(),
            faces: parsed.mesh.faces.len(),
            cap: face_cap,
        });
    }
    apply_sidecar(&mut parsed, path)?;
    parsed.mesh.validate()?;
    Ok(parsed.mesh)
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Sidecar {
    /// "top" (highest-y vertex) or "centroid" (vertex nearest the centroid).
    anchor: Option<String>,
    /// Explicit anchor, as a 0-based `v`-statement ordinal.
    anchor_index: Option<u32>,
}

struct Parsed {
    mesh: Mesh,
    /// First loaded vertex for each original `v` statement, for sidecar
    /// anchor resolution (splits share the original position).
    first_loaded: Vec<Option<u32>>,
}

fn err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::MeshFormat {
        path: path.into(),
        line,
        msg: msg.into(),
    }
}

fn parse(text: &str, path: &Path) -> Result<Parsed> {
    let mut positions: Vec<Point3<f64>> = Vec::new();
    let mut texcoords: Vec<Vector2<f64>> = Vec::new();

    let mut vertices: Vec<Point3<f64>> = Vec::new();
    let mut uvs: Vec<Option<Vector2<f64>>> = Vec::new();
    let mut corner_map: HashMap<(usize, Option<usize>), u32> = HashMap::new();
    let mut first_loaded: Vec<Option<u32>> = Vec::new();

    let mut faces: Vec<[u32; 3]> = Vec::new();
    let mut part_labels: Vec<u16> = Vec::new();
    let mut part_names: Vec<String> = Vec::new();
    let mut name_to_label: HashMap<String, u16> = HashMap::new();
    let mut current_part = "default".to_string();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        match keyword {
            "v" => {
                let coords = parse_floats::<3>(&mut tokens)
                    .ok_or_else(|| err(path, lineno, "expected 3 coordinates after 'v'"))?;
                positions.push(Point3::new(coords[0], coords[1], coords[2]));
                first_loaded.push(None);
            }
            "vt" => {
                let coords = parse_floats::<2>(&mut tokens)
                    .ok_or_else(|| err(path, lineno, "expected 2 coordinates after 'vt'"))?;
                texcoords.push(Vector2::new(coords[0], coords[1]));
            }
            "f" => {
                let mut corners: Vec<u32> = Vec::new();
                for token in tokens {
                    let (v_idx, vt_idx) =
                        parse_corner(token, positions.len(), texcoords.len())
                            .map_err(|msg| err(path, lineno, msg))?;
                    let loaded = *corner_map.entry((v_idx, vt_idx)).or_insert_with(|| {
                        let id = vertices.len() as u32;
                        vertices.push(positions[v_idx]);
                        uvs.push(vt_idx.map(|t| texcoords[t]));
                        if first_loaded[v_idx].is_none() {
                            first_loaded[v_idx] = Some(id);
                        }
                        id
                    });
                    corners.push(loaded);
                }
                if corners.len() < 3 {
                    return Err(err(path, lineno, "face needs at least 3 corners"));
                }
                let label = *name_to_label.entry(current_part.clone()).or_insert_with(|| {
                    part_names.push(current_part.clone());
                    (part_names.len() - 1) as u16
                });
                for i in 2..corners.len() {
                    faces.push([corners[0], corners[i - 1], corners[i]]);
                    part_labels.push(label);
                }
            }
            "g" | "usemtl" | "o" => {
                current_part = tokens.next().unwrap_or("default").to_string();
            }
            // Ignored: normals, smoothing, material libraries, extensions.
            "vn" | "s" | "mtllib" | "l" | "p" => {}
            other => {
                return Err(err(path, lineno, format!("unknown statement '{other}'")));
            }
        }
    }

    if faces.is_empty() {
        return Err(err(path, 0, "no faces"));
    }

    let uvs = synthesize_uvs(&vertices, uvs);
    let anchor_index = top_vertex(&vertices);
    Ok(Parsed {
        mesh: Mesh {
            vertices,
            faces,
            uvs,
            part_labels,
            part_names,
            anchor_index,
        },
        first_loaded,
    })
}

fn parse_floats<const N: usize>(tokens: &mut std::str::SplitWhitespace) -> Option<[f64; N]> {
    let mut out = [0.0; N];
    for slot in &mut out {
        *slot = tokens.next()?.parse().ok()?;
    }
    Some(out)
}

/// Parses one face corner (`v`, `v/vt`, `v/vt/vn`, `v//vn`) into 0-based
/// indices, resolving negative (relative) references.
fn parse_corner(
    token: &str,
    n_positions: usize,
    n_texcoords: usize,
) -> std::result::Result<(usize, Option<usize>), String> {
    let mut fields = token.split('/');
    let v = resolve_index(fields.next().unwrap_or(""), n_positions)
        .ok_or_else(|| format!("bad vertex reference '{token}'"))?;
    let vt = match fields.next() {
        None | Some("") => None,
        Some(field) => Some(
            resolve_index(field, n_texcoords)
                .ok_or_else(|| format!("bad texcoord reference '{token}'"))?,
        ),
    };
    Ok((v, vt))
}

fn resolve_index(field: &str, count: usize) -> Option<usize> {
    let raw: i64 = field.parse().ok()?;
    let idx = if raw > 0 {
        raw - 1
    } else if raw < 0 {
        count as i64 + raw
    } else {
        return None;
    };
    (0..count as i64).contains(&idx).then_some(idx as usize)
}

/// Fills missing UVs from a cylindrical mapping around the vertical axis
/// through the centroid; present UVs are kept as-is.
fn synthesize_uvs(
    vertices: &[Point3<f64>],
    uvs: Vec<Option<Vector2<f64>>>,
) -> Vec<Vector2<f64>> {
    let n = vertices.len().max(1) as f64;
    let cx = vertices.iter().map(|v| v.x).sum::<f64>() / n;
    let cz = vertices.iter().map(|v| v.z).sum::<f64>() / n;
    let min_y = vertices.iter().map(|v| v.y).fold(f64::INFINITY, f64::min);
    let max_y = vertices.iter().map(|v| v.y).fold(f64::NEG_INFINITY, f64::max);
    let extent_y = max_y - min_y;

    vertices
        .iter()
        .zip(uvs)
        .map(|(p, uv)| {
            uv.unwrap_or_else(|| {
                let u = (p.z - cz).atan2(p.x - cx) / std::f64::consts::TAU + 0.5;
                let v = if extent_y > 0.0 {
                    (p.y - min_y) / extent_y
                } else {
                    0.0
                };
                Vector2::new(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0))
            })
        })
        .collect()
}

/// Default anchor rule: the highest-y vertex (head-like point of an upright
/// figure); the first one wins on ties.
fn top_vertex(vertices: &[Point3<f64>]) -> u32 {
    let mut best = 0;
    for (i, v) in vertices.iter().enumerate() {
        if v.y > vertices[best].y {
            best = i;
        }
    }
    best as u32
}

fn apply_sidecar(parsed: &mut Parsed, path: &Path) -> Result<()> {
    let sidecar_path = {
        let mut p = path.as_os_str().to_owned();
        p.push(".toml");
        std::path::PathBuf::from(p)
    };
    if !sidecar_path.exists() {
        return Ok(());
    }
    let text = fs::read_to_string(&sidecar_path).map_err(|e| Error::io(&sidecar_path, e))?;
    let sidecar: Sidecar = toml::from_str(&text)
        .map_err(|e| Error::Library(format!("{}: {e}", sidecar_path.display())))?;

    if let Some(ordinal) = sidecar.anchor_index {
        let loaded = parsed
            .first_loaded
            .get(ordinal as usize)
            .copied()
            .flatten()
            .ok_or_else(|| {
                Error::Library(format!(
                    "{}: anchor_index {ordinal} does not name a referenced vertex",
                    sidecar_path.display()
                ))
            })?;
        parsed.mesh.anchor_index = loaded;
        return Ok(());
    }
    match sidecar.anchor.as_deref() {
        None | Some("top") => {}
        Some("centroid") => {
            let centroid = parsed.mesh.centroid();
            let mut best = 0;
            let mut best_dist = f64::INFINITY;
            for (i, v) in parsed.mesh.vertices.iter().enumerate() {
                let d = (v - centroid).norm_squared();
                if d < best_dist {
                    best_dist = d;
                    best = i;
                }
            }
            parsed.mesh.anchor_index = best as u32;
        }
        Some(other) => {
            return Err(Error::Library(format!(
                "{}: unknown anchor mode '{other}' (expected 'top' or 'centroid')",
                sidecar_path.display()
            )));
        }
    }
    Ok(())
}
