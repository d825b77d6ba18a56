//! Triangle meshes and the randomizing transforms applied to them.
//!
//! Meshes are immutable after construction: every transform is a pure
//! `&Mesh -> Mesh` function, so meshes can be processed concurrently without
//! coordination.

mod obj;
mod transforms;

pub use obj::{load_mesh, load_mesh_with_cap};
pub use transforms::{
    randomize_vertices, sample_object_scale, sample_thickness, scale_axis, solidify,
    THICKNESS_MAX, THICKNESS_MIN,
};

use nalgebra::{Point3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default face budget for loaded assets. High-poly models buy nothing here
/// but rendering time, so the loader rejects anything above the cap.
pub const DEFAULT_FACE_CAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn component(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Indexed triangle mesh with per-vertex UVs, per-face part labels and a
/// designated annotation anchor vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point3<f64>>,
    /// Vertex-index triples, one per triangle.
    pub faces: Vec<[u32; 3]>,
    /// Texture coordinates in `[0, 1]²`, one per vertex.
    pub uvs: Vec<Vector2<f64>>,
    /// One small-integer label per face, indexing into `part_names`.
    pub part_labels: Vec<u16>,
    pub part_names: Vec<String>,
    /// Vertex whose projection becomes the instance's dot annotation.
    pub anchor_index: u32,
}

impl Mesh {
    /// Checks the structural invariants: indices in range, non-degenerate
    /// faces, one UV per vertex and one label per face.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len() as u32;
        if self.anchor_index >= nv {
            return Err(Error::InvalidArgument(format!(
                "anchor index {} out of range (vertex count {nv})",
                self.anchor_index
            )));
        }
        if self.uvs.len() != self.vertices.len() {
            return Err(Error::InvalidArgument(format!(
                "uv count {} != vertex count {}",
                self.uvs.len(),
                self.vertices.len()
            )));
        }
        if self.part_labels.len() != self.faces.len() {
            return Err(Error::InvalidArgument(format!(
                "part label count {} != face count {}",
                self.part_labels.len(),
                self.faces.len()
            )));
        }
        for (i, face) in self.faces.iter().enumerate() {
            if face.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidArgument(format!(
                    "face {i} references vertex out of range"
                )));
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(Error::InvalidArgument(format!(
                    "face {i} references the same vertex twice"
                )));
            }
        }
        for (i, &label) in self.part_labels.iter().enumerate() {
            if label as usize >= self.part_names.len() {
                return Err(Error::InvalidArgument(format!(
                    "face {i} labeled {label}, but only {} parts named",
                    self.part_names.len()
                )));
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Distinct part labels used by this mesh, ascending.
    pub fn part_set(&self) -> Vec<u16> {
        let mut parts: Vec<u16> = self.part_labels.clone();
        parts.sort_unstable();
        parts.dedup();
        parts
    }

    /// Axis-aligned bounding box, `None` for an empty mesh.
    pub fn bounds(&self) -> Option<(Point3<f64>, Point3<f64>)> {
        let first = *self.vertices.first()?;
        let mut min = first;
        let mut max = first;
        for v in &self.vertices[1..] {
            for c in 0..3 {
                min[c] = min[c].min(v[c]);
                max[c] = max[c].max(v[c]);
            }
        }
        Some((min, max))
    }

    /// Mean vertex position.
    pub fn centroid(&self) -> Point3<f64> {
        let mut sum = Vector3::zeros();
        for v in &self.vertices {
            sum += v.coords;
        }
        Point3::from(sum / self.vertices.len().max(1) as f64)
    }

    /// Mean length over the unique undirected edges. This is the length
    /// scale the vertex-randomization factor is relative to.
    pub fn mean_edge_length(&self) -> f64 {
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(self.faces.len() * 3);
        for face in &self.faces {
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                let (lo, hi) = if face[a] < face[b] {
                    (face[a], face[b])
                } else {
                    (face[b], face[a])
                };
                edges.push((lo, hi));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.is_empty() {
            return 0.0;
        }
        let total: f64 = edges
            .iter()
            .map(|&(a, b)| (self.vertices[a as usize] - self.vertices[b as usize]).norm())
            .sum();
        total / edges.len() as f64
    }

    /// Unit normal of face `i` (right-hand winding). Zero-area faces yield
    /// the zero vector.
    pub fn face_normal(&self, i: usize) -> Vector3<f64> {
        let [a, b, c] = self.faces[i];
        let p0 = self.vertices[a as usize];
        let cross = (self.vertices[b as usize] - p0).cross(&(self.vertices[c as usize] - p0));
        let norm = cross.norm();
        if norm > 0.0 {
            cross / norm
        } else {
            Vector3::zeros()
        }
    }
}

/// Per-vertex normals plus the vertices that had no incident face.
#[derive(Debug, Clone)]
pub struct VertexNormals {
    pub normals: Vec<Vector3<f64>>,
    /// Vertices with no non-degenerate incident face; their normal is zero.
    pub isolated: Vec<u32>,
}

/// Area-weighted vertex normals: each incident face contributes its
/// (un-normalized) cross product, which weighs the average by face area.
/// Zero-area faces contribute nothing.
pub fn vertex_normals(mesh: &Mesh) -> VertexNormals {
    let mut sums = vec![Vector3::zeros(); mesh.vertices.len()];
    for face in &mesh.faces {
        let p0 = mesh.vertices[face[0] as usize];
        let cross =
            (mesh.vertices[face[1] as usize] - p0).cross(&(mesh.vertices[face[2] as usize] - p0));
        for &v in face {
            sums[v as usize] += cross;
        }
    }
    let mut isolated = Vec::new();
    let normals = sums
        .into_iter()
        .enumerate()
        .map(|(i, sum)| {
            let norm = sum.norm();
            if norm > 0.0 {
                sum / norm
            } else {
                isolated.push(i as u32);
                Vector3::zeros()
            }
        })
        .collect();
    VertexNormals { normals, isolated }
}

#[cfg(test)]
pub(crate) mod test_meshes {
    use super::*;

    /// Axis-aligned unit cube, 8 vertices, 12 triangles, outward winding.
    pub fn unit_cube() -> Mesh {
        let vertices = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(1.0, 0.0, 1.0),
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(0.0, 1.0, 1.0),
        ];
        let faces = vec![
            // z = 0 (normal -z)
            [0, 2, 1],
            [0, 3, 2],
            // z = 1 (normal +z)
            [4, 5, 6],
            [4, 6, 7],
            // y = 0 (normal -y)
            [0, 1, 5],
            [0, 5, 4],
            // y = 1 (normal +y)
            [3, 6, 2],
            [3, 7, 6],
            // x = 0 (normal -x)
            [0, 4, 7],
            [0, 7, 3],
            // x = 1 (normal +x)
            [1, 2, 6],
            [1, 6, 5],
        ];
        let uvs = vec![Vector2::new(0.5, 0.5); 8];
        Mesh {
            part_labels: vec![0; faces.len()],
            part_names: vec!["default".to_string()],
            anchor_index: 2,
            vertices,
            faces,
            uvs,
        }
    }

    /// Icosahedron scaled to the unit sphere; a coarse sphere approximation.
    pub fn icosahedron() -> Mesh {
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let raw = [
            (-1.0, phi, 0.0),
            (1.0, phi, 0.0),
            (-1.0, -phi, 0.0),
            (1.0, -phi, 0.0),
            (0.0, -1.0, phi),
            (0.0, 1.0, phi),
            (0.0, -1.0, -phi),
            (0.0, 1.0, -phi),
            (phi, 0.0, -1.0),
            (phi, 0.0, 1.0),
            (-phi, 0.0, -1.0),
            (-phi, 0.0, 1.0),
        ];
        let vertices: Vec<Point3<f64>> = raw
            .iter()
            .map(|&(x, y, z)| {
                let v = Vector3::new(x, y, z).normalize();
                Point3::from(v)
            })
            .collect();
        let faces: Vec<[u32; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        let uvs = vec![Vector2::new(0.5, 0.5); vertices.len()];
        Mesh {
            part_labels: vec![0; faces.len()],
            part_names: vec!["default".to_string()],
            anchor_index: 0,
            vertices,
            faces,
            uvs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_meshes::{icosahedron, unit_cube};
    use super::*;

    #[test]
    fn cube_is_valid() {
        unit_cube().validate().unwrap();
    }

    #[test]
    fn degenerate_face_rejected() {
        let mut mesh = unit_cube();
        mesh.faces[0] = [1, 1, 2];
        assert!(mesh.validate().is_err());
    }

    #[test]
    fn out_of_range_anchor_rejected() {
        let mut mesh = unit_cube();
        mesh.anchor_index = 99;
        assert!(mesh.validate().is_err());
    }

    #[test]
    fn cube_mean_edge_length() {
        // 12 axis edges of length 1 plus 6 face diagonals of length sqrt(2):
        // (12 + 6*sqrt(2)) / 18.
        let expected = (12.0 + 6.0 * 2.0f64.sqrt()) / 18.0;
        assert!((unit_cube().mean_edge_length() - expected).abs() < 1e-12);
    }

    #[test]
    fn cube_face_normals_axis_aligned() {
        let mesh = unit_cube();
        for i in 0..mesh.face_count() {
            let n = mesh.face_normal(i);
            let max = n.x.abs().max(n.y.abs()).max(n.z.abs());
            assert!((max - 1.0).abs() < 1e-12, "face {i} normal {n:?}");
        }
    }

    #[test]
    fn flat_fan_normals_are_plane_normals() {
        // Triangle fan in the xy-plane around vertex 0.
        let vertices = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(-1.0, 0.5, 0.0),
        ];
        let faces = vec![[0, 1, 2], [0, 2, 3], [0, 3, 4]];
        let mesh = Mesh {
            uvs: vec![Vector2::new(0.0, 0.0); vertices.len()],
            part_labels: vec![0; faces.len()],
            part_names: vec!["default".into()],
            anchor_index: 0,
            vertices,
            faces,
        };
        let result = vertex_normals(&mesh);
        assert!(result.isolated.is_empty());
        for n in &result.normals {
            assert!(n.x.abs() < 1e-12 && n.y.abs() < 1e-12);
            assert!((n.z.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_vertex_flagged() {
        let mut mesh = unit_cube();
        mesh.vertices.push(Point3::new(5.0, 5.0, 5.0));
        mesh.uvs.push(Vector2::new(0.0, 0.0));
        let result = vertex_normals(&mesh);
        assert_eq!(result.isolated, vec![8]);
        assert_eq!(result.normals[8], Vector3::zeros());
    }

    #[test]
    fn sphere_normals_near_radial() {
        // Icosahedron vertices sit on the unit sphere; area-weighted vertex
        // normals must stay within 15 degrees of the radial direction.
        let mesh = icosahedron();
        let result = vertex_normals(&mesh);
        let limit = 15.0f64.to_radians();
        for (v, n) in mesh.vertices.iter().zip(&result.normals) {
            let radial = v.coords.normalize();
            let angle = n.dot(&radial).clamp(-1.0, 1.0).acos();
            assert!(angle < limit, "angle {} deg", angle.to_degrees());
        }
    }

    #[test]
    fn zero_area_faces_contribute_nothing() {
        let vertices = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0), // collinear: zero-area face
            Point3::new(0.0, 0.0, 1.0),
        ];
        let faces = vec![[0, 1, 2], [0, 1, 3]];
        let mesh = Mesh {
            uvs: vec![Vector2::new(0.0, 0.0); vertices.len()],
            part_labels: vec![0; faces.len()],
            part_names: vec!["default".into()],
            anchor_index: 0,
            vertices,
            faces,
        };
        let result = vertex_normals(&mesh);
        // Vertex 2 only touches the degenerate face.
        assert_eq!(result.isolated, vec![2]);
        // The others get the normal of the non-degenerate face, (0, -1, 0).
        assert!((result.normals[0] - Vector3::new(0.0, -1.0, 0.0)).norm() < 1e-12);
    }
}
