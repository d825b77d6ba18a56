//! Scene composition: who stands where, wearing what, under which lights.
//!
//! [`build_scene`] samples every random decision for one image — object
//! count, placements, per-instance transform parameters, textures,
//! background and lights — and records them in a [`Scene`] that is fully
//! replayable: rendering and annotation both reconstruct instance geometry
//! from the recorded parameters, never from shared mutable state.
//!
//! Each sampling stage draws from its own substream of the per-image seed,
//! so extending one stage never shifts the draws of another.

mod library;
mod lights;
mod placement;

pub use library::{
    assign_textures, select_background, AssetSet, ImageEntry, ImageLibrary, MeshAsset,
    MeshLibrary,
};
pub use lights::{place_lights, Light};
pub use placement::{
    sample_component_count, sample_placements, Aabb, GmmComponent, GmmSpec, PlacementMode,
};

use std::collections::BTreeSet;

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Result;
use crate::geometry::{
    randomize_vertices, sample_object_scale, sample_thickness, scale_axis, solidify, Axis, Mesh,
};
use crate::rng::Rng;

/// Which of the randomizing transforms a run applies to its instances.
/// Exactly one kind is active per run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    None,
    Scale,
    #[default]
    Randomize,
    Extrude,
}

/// The transform applied to one instance, with its sampled parameters.
/// Replaying the record on the source mesh reproduces the instance exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TransformRecord {
    None,
    Scale { axis: Axis, factor: f64 },
    Randomize { factor: f64, seed: u64 },
    Extrude { thickness: f64 },
}

impl TransformRecord {
    pub fn kind(&self) -> TransformKind {
        match self {
            TransformRecord::None => TransformKind::None,
            TransformRecord::Scale { .. } => TransformKind::Scale,
            TransformRecord::Randomize { .. } => TransformKind::Randomize,
            TransformRecord::Extrude { .. } => TransformKind::Extrude,
        }
    }
}

/// One placed, transformed, textured mesh instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneInstance {
    pub asset_id: String,
    pub transform: TransformRecord,
    /// Rotation about the vertical axis, radians; instances stand upright.
    pub yaw: f64,
    pub position: Point3<f64>,
    /// Texture id per part label, ascending by label.
    pub part_textures: Vec<(u16, String)>,
    /// World position of the annotation anchor after all transforms.
    pub anchor_world: Point3<f64>,
}

/// A fully specified image-to-be: instances, backdrop, lighting, camera.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub instances: Vec<SceneInstance>,
    /// Background id (`category/stem`) in the background library.
    pub background: String,
    pub lights: Vec<Light>,
    /// Ambient illumination term, sampled per image.
    pub ambient: f64,
    /// Contact-shadow strength when enabled.
    pub shadows: Option<f64>,
    pub camera: crate::render::Camera,
}

/// Reconstructs an instance's world-space mesh: replay the recorded
/// transform, rotate by yaw about the vertical axis, translate to position.
pub fn instantiate(mesh: &Mesh, instance: &SceneInstance) -> Result<Mesh> {
    let mut out = match &instance.transform {
        TransformRecord::None => mesh.clone(),
        TransformRecord::Scale { axis, factor } => scale_axis(mesh, *axis, *factor)?,
        TransformRecord::Randomize { factor, seed } => {
            randomize_vertices(mesh, *factor, &mut Rng::new(*seed))?
        }
        TransformRecord::Extrude { thickness } => solidify(mesh, *thickness),
    };
    let (sin, cos) = instance.yaw.sin_cos();
    for v in &mut out.vertices {
        let (x, z) = (v.x, v.z);
        v.x = cos * x + sin * z;
        v.z = -sin * x + cos * z;
        *v += instance.position.coords;
    }
    Ok(out)
}

/// Samples a complete scene from the per-image stream `rng`.
pub fn build_scene(config: &Config, assets: &AssetSet, rng: &Rng) -> Result<Scene> {
    let camera = config.camera()?;
    let region = config.placement_region()?;

    let n_objects = rng
        .substream("counts")
        .uniform_u32(config.objects.count_min, config.objects.count_max);
    let positions = sample_placements(
        n_objects,
        &region,
        config.placement.mode,
        &mut rng.substream("placement"),
    );

    let mut instance_rng = rng.substream("instances");
    let mut texture_rng = rng.substream("textures");
    let mesh_assets = assets.meshes.assets();
    let mut instances = Vec::with_capacity(positions.len());
    for position in positions {
        let asset = &mesh_assets[instance_rng.index(mesh_assets.len())];
        let transform = match config.objects.transform {
            TransformKind::None => TransformRecord::None,
            TransformKind::Scale => TransformRecord::Scale {
                axis: Axis::ALL[instance_rng.index(3)],
                factor: sample_object_scale(n_objects, &mut instance_rng)?,
            },
            TransformKind::Randomize => TransformRecord::Randomize {
                factor: config.objects.randomize_factor,
                seed: instance_rng.next_u64(),
            },
            TransformKind::Extrude => TransformRecord::Extrude {
                thickness: sample_thickness(&mut instance_rng),
            },
        };
        let yaw = instance_rng.uniform(0.0, std::f64::consts::TAU);
        let part_textures =
            assign_textures(&asset.mesh.part_set(), &assets.textures, &mut texture_rng)?;
        let mut instance = SceneInstance {
            asset_id: asset.id.clone(),
            transform,
            yaw,
            position,
            part_textures,
            anchor_world: Point3::origin(),
        };
        let world_mesh = instantiate(&asset.mesh, &instance)?;
        instance.anchor_world = world_mesh.vertices[world_mesh.anchor_index as usize];
        instances.push(instance);
    }

    let excluded: BTreeSet<String> = config.assets.excluded_categories.iter().cloned().collect();
    let background =
        select_background(&assets.backgrounds, &excluded, &mut rng.substream("background"))?;
    let lights = place_lights(&config.lights, &region, &mut rng.substream("lights"))?;
    let ambient = rng
        .substream("ambient")
        .uniform(config.lights.ambient_min, config.lights.ambient_max);

    Ok(Scene {
        instances,
        background,
        lights,
        ambient,
        shadows: config.lights.shadows.then_some(config.lights.shadow_strength),
        camera,
    })
}
