//! Z-buffered, perspective-correct triangle rasterization.
//!
//! The renderer is deliberately simple: background plate first, then every
//! triangle scan-converted with a depth test, nearest-texel sampling and
//! flat Lambertian shading. No anti-aliasing, no global illumination —
//! variability, not photorealism, is the product.
//!
//! Conventions (the brute-force test oracle mirrors these exactly):
//!
//! * Edge function: `orient2d(a, b, p) = (b.x-a.x)*(p.y-a.y) - (b.y-a.y)*(p.x-a.x)`
//!   on pixel coordinates (y down), evaluated directly per pixel — no
//!   incremental stepping, so a from-scratch evaluation reproduces it bit
//!   for bit.
//! * Orientation is normalized by swapping the last two vertices when
//!   `orient2d(s0, s1, s2) < 0`; zero-area triangles are dropped.
//! * Coverage at a pixel center: every edge value `w > 0`, or `w == 0` on a
//!   top-left edge (`(b.y == a.y && b.x > a.x) || b.y < a.y`).
//! * Barycentrics `l_i = w_i / area2`; `1/depth` interpolates linearly in
//!   screen space as `l0*i0 + l1*i1 + l2*i2`; attributes interpolate as
//!   `(l0*a0*i0 + l1*a1*i1 + l2*a2*i2) * depth`.
//! * Depth test keeps the strictly nearest fragment; the first-drawn
//!   fragment wins at exactly equal depth. Fragments at or beyond the far
//!   plane are discarded; triangles are clipped against the near plane.
//! * Back-face culling is off: solidified shells are double-sided, so face
//!   normals are flipped toward the camera before shading.
//! * Shading: `color = texel * (ambient + sum over lights of
//!   color * intensity * max(0, n . normalize(light_pos - fragment)))`,
//!   clamped to `[0, 1]`. Lights do not attenuate with distance.

use std::collections::BTreeMap;

use nalgebra::{Point3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::render::{Camera, Framebuffer, Texture};
use crate::scene::{instantiate, Light, MeshLibrary, Scene};

/// One world-space triangle ready for rasterization.
#[derive(Debug, Clone)]
pub struct Triangle<'a> {
    pub positions: [Point3<f64>; 3],
    pub uvs: [Vector2<f64>; 3],
    pub texture: &'a Texture,
}

#[inline]
fn orient2d(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
}

#[inline]
fn is_top_left(a: (f64, f64), b: (f64, f64)) -> bool {
    (b.1 == a.1 && b.0 > a.0) || b.1 < a.1
}

#[inline]
fn edge_admits(w: f64, a: (f64, f64), b: (f64, f64)) -> bool {
    w > 0.0 || (w == 0.0 && is_top_left(a, b))
}

/// Vertex carried through near-plane clipping.
#[derive(Debug, Clone, Copy)]
struct ClipVertex {
    view: Vector3<f64>,
    world: Point3<f64>,
    uv: Vector2<f64>,
}

impl ClipVertex {
    fn lerp(&self, other: &ClipVertex, t: f64) -> ClipVertex {
        ClipVertex {
            view: self.view + (other.view - self.view) * t,
            world: self.world + (other.world - self.world) * t,
            uv: self.uv + (other.uv - self.uv) * t,
        }
    }
}

/// Sutherland-Hodgman against the near plane (`view.z >= near`). A fully
/// inside triangle passes through untouched.
fn clip_near(vertices: [ClipVertex; 3], near: f64) -> Vec<ClipVertex> {
    if vertices.iter().all(|v| v.view.z >= near) {
        return vertices.to_vec();
    }
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let prev = &vertices[(i + 2) % 3];
        let curr = &vertices[i];
        let prev_in = prev.view.z >= near;
        let curr_in = curr.view.z >= near;
        if curr_in != prev_in {
            let t = (near - prev.view.z) / (curr.view.z - prev.view.z);
            out.push(prev.lerp(curr, t));
        }
        if curr_in {
            out.push(*curr);
        }
    }
    out
}

/// Renders a triangle soup over a background plate sized to the camera.
pub fn render_triangles(
    camera: &Camera,
    triangles: &[Triangle],
    lights: &[Light],
    ambient: f64,
    background: &image::RgbImage,
) -> Result<Framebuffer> {
    if background.dimensions() != (camera.width, camera.height) {
        return Err(Error::InvalidArgument(format!(
            "background is {:?}, camera needs {:?}",
            background.dimensions(),
            (camera.width, camera.height)
        )));
    }
    let mut fb = Framebuffer::from_background(background);
    render_triangles_into(&mut fb, camera, triangles, lights, ambient);
    Ok(fb)
}

fn render_triangles_into(
    fb: &mut Framebuffer,
    camera: &Camera,
    triangles: &[Triangle],
    lights: &[Light],
    ambient: f64,
) {
    for tri in triangles {
        let clip_input = [0, 1, 2].map(|i| ClipVertex {
            view: camera.view_coords(&tri.positions[i]),
            world: tri.positions[i],
            uv: tri.uvs[i],
        });
        let polygon = clip_near(clip_input, camera.near);
        for i in 2..polygon.len() {
            raster_one(
                fb,
                camera,
                [polygon[0], polygon[i - 1], polygon[i]],
                tri.texture,
                lights,
                ambient,
            );
        }
    }
}

fn raster_one(
    fb: &mut Framebuffer,
    camera: &Camera,
    mut vertices: [ClipVertex; 3],
    texture: &Texture,
    lights: &[Light],
    ambient: f64,
) {
    let mut screen = vertices.map(|v| camera.pixel_from_view(&v.view));
    let mut area2 = orient2d(screen[0], screen[1], screen[2]);
    if area2 == 0.0 {
        return;
    }
    if area2 < 0.0 {
        vertices.swap(1, 2);
        screen.swap(1, 2);
        area2 = -area2;
    }

    // Flat shading: one normal per triangle, oriented toward the camera
    // (the side facing the viewer is the one being shaded).
    let normal = {
        let n = (vertices[1].world - vertices[0].world)
            .cross(&(vertices[2].world - vertices[0].world));
        let len = n.norm();
        if len == 0.0 {
            return;
        }
        let n = n / len;
        if n.dot(&(camera.position - vertices[0].world)) < 0.0 {
            -n
        } else {
            n
        }
    };

    let inv_d = vertices.map(|v| 1.0 / v.view.z);
    let uv_over_d: [Vector2<f64>; 3] = [0, 1, 2].map(|i| vertices[i].uv * inv_d[i]);
    let world_over_d: [Vector3<f64>; 3] = [0, 1, 2].map(|i| vertices[i].world.coords * inv_d[i]);

    // Pixel centers sit at half-integer coordinates; cover the bounding box.
    let min_x = screen.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let max_x = screen.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = screen.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let max_y = screen.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let x0 = ((min_x - 0.5).ceil() as i64).clamp(0, fb.width() as i64 - 1) as u32;
    let x1 = ((max_x - 0.5).floor() as i64).clamp(0, fb.width() as i64 - 1) as u32;
    let y0 = ((min_y - 0.5).ceil() as i64).clamp(0, fb.height() as i64 - 1) as u32;
    let y1 = ((max_y - 0.5).floor() as i64).clamp(0, fb.height() as i64 - 1) as u32;
    if min_x >= fb.width() as f64 || max_x < 0.0 || min_y >= fb.height() as f64 || max_y < 0.0 {
        return;
    }

    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = (x as f64 + 0.5, y as f64 + 0.5);
            let w0 = orient2d(screen[1], screen[2], p);
            let w1 = orient2d(screen[2], screen[0], p);
            let w2 = orient2d(screen[0], screen[1], p);
            if !(edge_admits(w0, screen[1], screen[2])
                && edge_admits(w1, screen[2], screen[0])
                && edge_admits(w2, screen[0], screen[1]))
            {
                continue;
            }
            let l = [w0 / area2, w1 / area2, w2 / area2];
            let frag_inv_d = l[0] * inv_d[0] + l[1] * inv_d[1] + l[2] * inv_d[2];
            let depth = 1.0 / frag_inv_d;
            if depth >= camera.far || depth >= fb.depth_at(x, y) {
                continue;
            }
            let uv = (l[0] * uv_over_d[0] + l[1] * uv_over_d[1] + l[2] * uv_over_d[2]) * depth;
            let world = Point3::from(
                (l[0] * world_over_d[0] + l[1] * world_over_d[1] + l[2] * world_over_d[2]) * depth,
            );
            let texel = texture.sample_nearest(uv.x, uv.y);
            let color = shade(texel, &world, &normal, lights, ambient);
            fb.write_if_nearer(x, y, depth, color);
        }
    }
}

#[inline]
fn shade(
    texel: [f64; 3],
    world: &Point3<f64>,
    normal: &Vector3<f64>,
    lights: &[Light],
    ambient: f64,
) -> [f32; 3] {
    let mut illum = [ambient; 3];
    for light in lights {
        let to_light = light.position - world;
        let len = to_light.norm();
        if len == 0.0 {
            continue;
        }
        let lambert = normal.dot(&to_light).max(0.0) / len;
        if lambert > 0.0 {
            for c in 0..3 {
                illum[c] += light.color[c] * light.intensity * lambert;
            }
        }
    }
    [0, 1, 2].map(|c| (texel[c] * illum[c]).clamp(0.0, 1.0) as f32)
}

/// Renders a composed scene: background, optional contact shadows, then
/// every instance's triangles with its part textures.
pub fn rasterize(
    scene: &Scene,
    meshes: &MeshLibrary,
    textures: &BTreeMap<String, Texture>,
    background: &image::RgbImage,
) -> Result<Framebuffer> {
    let camera = &scene.camera;
    if background.dimensions() != (camera.width, camera.height) {
        return Err(Error::InvalidArgument(format!(
            "background is {:?}, camera needs {:?}",
            background.dimensions(),
            (camera.width, camera.height)
        )));
    }
    let mut fb = Framebuffer::from_background(background);

    let mut instanced = Vec::with_capacity(scene.instances.len());
    for instance in &scene.instances {
        let mesh = meshes.get(&instance.asset_id).ok_or_else(|| {
            Error::Library(format!("scene references unknown mesh '{}'", instance.asset_id))
        })?;
        instanced.push((instantiate(mesh, instance)?, instance));
    }

    if let Some(strength) = scene.shadows {
        for (mesh, _) in &instanced {
            draw_contact_shadow(&mut fb, camera, mesh, strength);
        }
    }

    for (mesh, instance) in &instanced {
        let part_textures: BTreeMap<u16, &Texture> = instance
            .part_textures
            .iter()
            .map(|(part, id)| {
                textures
                    .get(id)
                    .map(|t| (*part, t))
                    .ok_or_else(|| Error::Library(format!("unknown texture '{id}'")))
            })
            .collect::<Result<_>>()?;
        let triangles: Vec<Triangle> = mesh
            .faces
            .iter()
            .zip(&mesh.part_labels)
            .map(|(face, label)| {
                let texture = part_textures.get(label).copied().ok_or_else(|| {
                    Error::Library(format!("instance has no texture for part {label}"))
                })?;
                Ok(Triangle {
                    positions: face.map(|v| mesh.vertices[v as usize]),
                    uvs: face.map(|v| mesh.uvs[v as usize]),
                    texture,
                })
            })
            .collect::<Result<_>>()?;
        render_triangles_into(&mut fb, camera, &triangles, &scene.lights, scene.ambient);
    }
    Ok(fb)
}

/// Screen-space stand-in for cast shadows: an elliptical darkening under the
/// instance footprint, painted before geometry so objects cover their own
/// shadow core. A coarse approximation of the real thing, gated by config.
fn draw_contact_shadow(fb: &mut Framebuffer, camera: &Camera, mesh: &crate::geometry::Mesh, strength: f64) {
    let Some((min, max)) = mesh.bounds() else {
        return;
    };
    let ground = Point3::new((min.x + max.x) / 2.0, min.y, (min.z + max.z) / 2.0);
    let view = camera.view_coords(&ground);
    if view.z <= camera.near || view.z >= camera.far {
        return;
    }
    let (cx, cy) = camera.pixel_from_view(&view);
    let radius_world = 0.5 * (max.x - min.x).max(max.z - min.z);
    let rx = (radius_world * camera.pixels_per_unit_at(view.z)).max(1.0);
    let ry = (0.45 * rx).max(1.0);

    let x0 = ((cx - rx).floor() as i64).clamp(0, fb.width() as i64 - 1) as u32;
    let x1 = ((cx + rx).ceil() as i64).clamp(0, fb.width() as i64 - 1) as u32;
    let y0 = ((cy - ry).floor() as i64).clamp(0, fb.height() as i64 - 1) as u32;
    let y1 = ((cy + ry).ceil() as i64).clamp(0, fb.height() as i64 - 1) as u32;
    for y in y0..=y1 {
        for x in x0..=x1 {
            let dx = (x as f64 + 0.5 - cx) / rx;
            let dy = (y as f64 + 0.5 - cy) / ry;
            let rho2 = dx * dx + dy * dy;
            if rho2 <= 1.0 {
                fb.modulate(x, y, (1.0 - strength * (1.0 - rho2)) as f32);
            }
        }
    }
}
