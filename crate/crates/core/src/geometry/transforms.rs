//! The three randomizing mesh transforms: axis scale, vertex jitter and
//! solidify, plus the samplers for their parameters.
//!
//! Each transform keeps the basic shape of the input intact while producing
//! structural variation; all are pure and deterministic given the same
//! inputs and seed.

use super::{vertex_normals, Axis, Mesh};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Thickness bounds for [`sample_thickness`].
pub const THICKNESS_MIN: f64 = -0.1;
pub const THICKNESS_MAX: f64 = 0.5;

/// Multiplies every vertex coordinate on `axis` by `factor`, leaving the
/// other axes, topology, UVs and anchor untouched.
pub fn scale_axis(mesh: &Mesh, axis: Axis, factor: f64) -> Result<Mesh> {
    if !(factor > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale factor must be positive, got {factor}"
        )));
    }
    let c = axis.component();
    let mut out = mesh.clone();
    for v in &mut out.vertices {
        v[c] *= factor;
    }
    Ok(out)
}

/// Per-object scale factor `K ~ U(1/n, 8/n)` for a scene of `n` objects:
/// the more objects in the image, the smaller each one may get.
pub fn sample_object_scale(n_objects: u32, rng: &mut Rng) -> Result<f64> {
    if n_objects == 0 {
        return Err(Error::InvalidArgument(
            "object scale is undefined for zero objects".into(),
        ));
    }
    let n = n_objects as f64;
    Ok(rng.uniform(1.0 / n, 8.0 / n))
}

/// Shell thickness `T ~ U(-0.1, 0.5)` for [`solidify`].
pub fn sample_thickness(rng: &mut Rng) -> f64 {
    rng.uniform(THICKNESS_MIN, THICKNESS_MAX)
}

/// Displaces every vertex by an independent per-axis offset drawn from
/// `U(-factor * e, +factor * e)`, where `e` is the mean edge length of the
/// input. Offsets are bounded by a fraction of the local scale, so the
/// inner shape survives. Topology, UVs and anchor are unchanged.
pub fn randomize_vertices(mesh: &Mesh, factor: f64, rng: &mut Rng) -> Result<Mesh> {
    if factor < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "randomization factor must be non-negative, got {factor}"
        )));
    }
    if factor == 0.0 {
        return Ok(mesh.clone());
    }
    let bound = factor * mesh.mean_edge_length();
    let mut out = mesh.clone();
    for v in &mut out.vertices {
        for c in 0..3 {
            v[c] += rng.uniform(-bound, bound);
        }
    }
    Ok(out)
}

/// Shell construction: duplicates every vertex offset by `thickness` along
/// its area-weighted normal and adds the duplicated faces with reversed
/// winding, doubling both counts. Intended for closed or near-closed input
/// (no rim faces are stitched); isolated vertices keep a zero offset. The
/// anchor stays on the original shell.
pub fn solidify(mesh: &Mesh, thickness: f64) -> Mesh {
    let normals = vertex_normals(mesh).normals;
    let offset = mesh.vertices.len() as u32;

    let mut vertices = Vec::with_capacity(mesh.vertices.len() * 2);
    vertices.extend_from_slice(&mesh.vertices);
    vertices.extend(
        mesh.vertices
            .iter()
            .zip(&normals)
            .map(|(v, n)| v + n * thickness),
    );

    let mut uvs = Vec::with_capacity(mesh.uvs.len() * 2);
    uvs.extend_from_slice(&mesh.uvs);
    uvs.extend_from_slice(&mesh.uvs);

    let mut faces = Vec::with_capacity(mesh.faces.len() * 2);
    faces.extend_from_slice(&mesh.faces);
    faces.extend(
        mesh.faces
            .iter()
            .map(|&[a, b, c]| [a + offset, c + offset, b + offset]),
    );

    let mut part_labels = Vec::with_capacity(mesh.part_labels.len() * 2);
    part_labels.extend_from_slice(&mesh.part_labels);
    part_labels.extend_from_slice(&mesh.part_labels);

    Mesh {
        vertices,
        faces,
        uvs,
        part_labels,
        part_names: mesh.part_names.clone(),
        anchor_index: mesh.anchor_index,
    }
}
