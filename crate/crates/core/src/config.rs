//! Generation configuration.
//!
//! A run is described by one TOML file; unknown keys are rejected so typos
//! fail loudly instead of silently falling back to defaults. Asset paths are
//! resolved relative to the config file's directory at load time, and the
//! resolved snapshot is embedded verbatim in the dataset manifest, which
//! together with the master seed is enough to regenerate the dataset.
//!
//! ```toml
//! seed = 42
//!
//! [dataset]
//! size = 100            # images to generate
//! flips = true          # add a horizontally flipped copy of every image
//! crops = 0             # random crops per image (0 = off)
//! crop_size = 512
//! density_maps = false  # export density map files alongside annotations
//! density_sigma = 4.0
//!
//! [image]
//! width = 640
//! height = 480
//!
//! [objects]
//! count_min = 5         # objects per image, drawn uniformly
//! count_max = 30
//! transform = "randomize"   # none | scale | randomize | extrude
//! randomize_factor = 0.4    # fraction of mean edge length
//!
//! [placement]
//! mode = "gmm"          # gmm | uniform
//! depth_band = [4.0, 16.0]  # used to derive the region from the camera
//! y_range = [0.0, 0.5]
//! # region_min / region_max override the derived region explicitly
//!
//! [assets]
//! meshes = "assets/meshes"
//! textures = "assets/textures"
//! backgrounds = "assets/backgrounds"
//! excluded_categories = ["stadium"]
//!
//! [camera]
//! position = [0.0, 6.0, 14.0]
//! look_at = [0.0, 1.0, 0.0]
//! up = [0.0, 1.0, 0.0]
//! fov_y = 50.0
//! near = 0.1
//! far = 100.0
//!
//! [lights]
//! count_min = 1
//! count_max = 4
//! intensity_min = 0.4
//! intensity_max = 1.2
//! color_min = [0.25, 0.25, 0.25]
//! color_max = [1.0, 1.0, 1.0]
//! ambient_min = 0.25
//! ambient_max = 0.55
//! region_inflation = 1.6
//! shadows = false       # screen-space contact shadow approximation
//! shadow_strength = 0.35
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::Camera;
use crate::scene::{Aabb, PlacementMode, TransformKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub seed: u64,
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub image: ImageConfig,
    #[serde(default)]
    pub objects: ObjectsConfig,
    #[serde(default)]
    pub placement: PlacementConfig,
    pub assets: AssetsConfig,
    #[serde(default)]
    pub camera: CameraConfig,
    #[serde(default)]
    pub lights: LightsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub size: u32,
    #[serde(default)]
    pub flips: bool,
    #[serde(default)]
    pub crops: u32,
    #[serde(default = "default_crop_size")]
    pub crop_size: u32,
    #[serde(default)]
    pub density_maps: bool,
    #[serde(default = "default_density_sigma")]
    pub density_sigma: f64,
}

fn default_crop_size() -> u32 {
    512
}

fn default_density_sigma() -> f64 {
    4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageConfig {
    pub width: u32,
    pub height: u32,
}

impl Default for ImageConfig {
    fn default() -> Self {
        ImageConfig {
            width: 640,
            height: 480,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectsConfig {
    pub count_min: u32,
    pub count_max: u32,
    #[serde(default)]
    pub transform: TransformKind,
    /// Vertex jitter bound as a fraction of the mean edge length.
    #[serde(default = "default_randomize_factor")]
    pub randomize_factor: f64,
    /// Face budget enforced when loading mesh assets.
    #[serde(default = "default_face_cap")]
    pub face_cap: usize,
}

fn default_randomize_factor() -> f64 {
    0.4
}

fn default_face_cap() -> usize {
    crate::geometry::DEFAULT_FACE_CAP
}

impl Default for ObjectsConfig {
    fn default() -> Self {
        ObjectsConfig {
            count_min: 5,
            count_max: 30,
            transform: TransformKind::default(),
            randomize_factor: default_randomize_factor(),
            face_cap: default_face_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementConfig {
    #[serde(default)]
    pub mode: PlacementMode,
    /// View-space depth band the placement region is cut from when no
    /// explicit region is given.
    #[serde(default = "default_depth_band")]
    pub depth_band: [f64; 2],
    #[serde(default = "default_y_range")]
    pub y_range: [f64; 2],
    #[serde(default)]
    pub region_min: Option<[f64; 3]>,
    #[serde(default)]
    pub region_max: Option<[f64; 3]>,
}

fn default_depth_band() -> [f64; 2] {
    [4.0, 16.0]
}

fn default_y_range() -> [f64; 2] {
    [0.0, 0.5]
}

impl Default for PlacementConfig {
    fn default() -> Self {
        PlacementConfig {
            mode: PlacementMode::Gmm,
            depth_band: default_depth_band(),
            y_range: default_y_range(),
            region_min: None,
            region_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetsConfig {
    pub meshes: PathBuf,
    pub textures: PathBuf,
    pub backgrounds: PathBuf,
    #[serde(default)]
    pub excluded_categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraConfig {
    pub position: [f64; 3],
    pub look_at: [f64; 3],
    pub up: [f64; 3],
    pub fov_y: f64,
    pub near: f64,
    pub far: f64,
}

impl Default for CameraConfig {
    fn default() -> Self {
        CameraConfig {
            position: [0.0, 6.0, 14.0],
            look_at: [0.0, 1.0, 0.0],
            up: [0.0, 1.0, 0.0],
            fov_y: 50.0,
            near: 0.1,
            far: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightsConfig {
    pub count_min: u32,
    pub count_max: u32,
    pub intensity_min: f64,
    pub intensity_max: f64,
    pub color_min: [f64; 3],
    pub color_max: [f64; 3],
    /// Ambient term range, sampled once per image; this is what varies the
    /// overall exposure between images.
    pub ambient_min: f64,
    pub ambient_max: f64,
    /// Lights are scattered in the shell between the placement region and
    /// this inflation of it.
    pub region_inflation: f64,
    /// Screen-space contact-shadow approximation under each instance.
    #[serde(default)]
    pub shadows: bool,
    #[serde(default = "default_shadow_strength")]
    pub shadow_strength: f64,
}

fn default_shadow_strength() -> f64 {
    0.35
}

impl Default for LightsConfig {
    fn default() -> Self {
        LightsConfig {
            count_min: 1,
            count_max: 4,
            intensity_min: 0.4,
            intensity_max: 1.2,
            color_min: [0.25; 3],
            color_max: [1.0; 3],
            ambient_min: 0.25,
            ambient_max: 0.55,
            region_inflation: 1.6,
            shadows: false,
            shadow_strength: default_shadow_strength(),
        }
    }
}

impl Config {
    /// Parses and validates a config file. Relative asset paths are
    /// resolved against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Config> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut config: Config = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(dir) = path.parent() {
            for p in [
                &mut config.assets.meshes,
                &mut config.assets.textures,
                &mut config.assets.backgrounds,
            ] {
                if p.is_relative() {
                    *p = dir.join(&p);
                }
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.dataset.size == 0 {
            return bad("dataset.size must be at least 1".into());
        }
        if self.dataset.crop_size == 0 {
            return bad("dataset.crop_size must be at least 1".into());
        }
        if self.dataset.density_sigma <= 0.0 {
            return bad(format!(
                "dataset.density_sigma must be positive, got {}",
                self.dataset.density_sigma
            ));
        }
        if self.image.width == 0 || self.image.height == 0 {
            return bad("image dimensions must be at least 1".into());
        }
        if self.objects.count_min > self.objects.count_max {
            return bad(format!(
                "objects.count_min {} > count_max {}",
                self.objects.count_min, self.objects.count_max
            ));
        }
        if self.objects.randomize_factor < 0.0 {
            return bad("objects.randomize_factor must be non-negative".into());
        }
        if self.placement.depth_band[0] <= 0.0
            || self.placement.depth_band[0] >= self.placement.depth_band[1]
        {
            return bad(format!(
                "placement.depth_band must be increasing and positive, got {:?}",
                self.placement.depth_band
            ));
        }
        if self.placement.y_range[0] >= self.placement.y_range[1] {
            return bad(format!(
                "placement.y_range must be increasing, got {:?}",
                self.placement.y_range
            ));
        }
        if self.placement.region_min.is_some() != self.placement.region_max.is_some() {
            return bad("placement.region_min and region_max must be given together".into());
        }
        if self.lights.count_min < 1 {
            return bad("lights.count_min must be at least 1".into());
        }
        if self.lights.count_min > self.lights.count_max {
            return bad(format!(
                "lights.count_min {} > count_max {}",
                self.lights.count_min, self.lights.count_max
            ));
        }
        if self.lights.intensity_min > self.lights.intensity_max
            || self.lights.ambient_min > self.lights.ambient_max
            || (0..3).any(|c| self.lights.color_min[c] > self.lights.color_max[c])
        {
            return bad("lights ranges must have min <= max".into());
        }
        if self.lights.region_inflation < 1.0 {
            return bad("lights.region_inflation must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.lights.shadow_strength) {
            return bad("lights.shadow_strength must be in [0, 1]".into());
        }
        // Camera and region construction run their own checks.
        self.camera()?;
        self.placement_region()?;
        Ok(())
    }

    pub fn camera(&self) -> Result<Camera> {
        let c = &self.camera;
        Camera::new(
            Point3::from(c.position),
            Point3::from(c.look_at),
            nalgebra::Vector3::from(c.up),
            c.fov_y,
            c.near,
            c.far,
            self.image.width,
            self.image.height,
        )
        .map_err(|e| Error::Config(format!("camera: {e}")))
    }

    /// The instance placement region: the explicit box if configured,
    /// otherwise the camera frustum footprint between the configured depth
    /// band, with the vertical extent pinned to `y_range`.
    pub fn placement_region(&self) -> Result<Aabb> {
        if let (Some(min), Some(max)) = (self.placement.region_min, self.placement.region_max) {
            return Aabb::new(Point3::from(min), Point3::from(max))
                .map_err(|e| Error::Config(format!("placement region: {e}")));
        }
        let camera = self.camera()?;
        let [d0, d1] = self.placement.depth_band;
        let mut min = Point3::new(f64::INFINITY, 0.0, f64::INFINITY);
        let mut max = Point3::new(f64::NEG_INFINITY, 0.0, f64::NEG_INFINITY);
        for depth in [d0, d1] {
            for corner in camera.frustum_corners_at(depth) {
                min.x = min.x.min(corner.x);
                min.z = min.z.min(corner.z);
                max.x = max.x.max(corner.x);
                max.z = max.z.max(corner.z);
            }
        }
        min.y = self.placement.y_range[0];
        max.y = self.placement.y_range[1];
        Aabb::new(min, max).map_err(|e| Error::Config(format!("derived placement region: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_toml(dir: &Path) -> String {
        format!(
            "[dataset]\nsize = 4\n\n[assets]\nmeshes = \"{0}/m\"\ntextures = \"{0}/t\"\nbackgrounds = \"{0}/b\"\n",
            dir.display()
        )
    }

    #[test]
    fn minimal_config_loads_with_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        fs::write(&path, minimal_toml(dir.path())).unwrap();
        let config = Config::load(&path).unwrap();
        assert_eq!(config.dataset.size, 4);
        assert_eq!(config.image.width, 640);
        assert_eq!(config.dataset.crop_size, 512);
        assert_eq!(config.objects.transform, TransformKind::Randomize);
        assert_eq!(config.placement.mode, PlacementMode::Gmm);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        fs::write(&path, minimal_toml(dir.path()) + "\n[dataset2]\nfoo = 1\n").unwrap();
        assert!(matches!(Config::load(&path), Err(Error::Config(_))));

        let path2 = dir.path().join("config2.toml");
        fs::write(
            &path2,
            minimal_toml(dir.path()).replace("size = 4", "size = 4\nsize_typo = 2"),
        )
        .unwrap();
        assert!(matches!(Config::load(&path2), Err(Error::Config(_))));
    }

    #[test]
    fn relative_asset_paths_resolve_against_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        fs::write(
            &path,
            "[dataset]\nsize = 1\n\n[assets]\nmeshes = \"m\"\ntextures = \"t\"\nbackgrounds = \"b\"\n",
        )
        .unwrap();
        let config = Config::load(&path).unwrap();
        assert_eq!(config.assets.meshes, dir.path().join("m"));
    }

    #[test]
    fn invalid_ranges_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let base = minimal_toml(dir.path());
        for extra in [
            "[objects]\ncount_min = 10\ncount_max = 2\n",
            "[lights]\ncount_min = 0\ncount_max = 2\nintensity_min = 0.4\nintensity_max = 1.0\ncolor_min = [0,0,0]\ncolor_max = [1,1,1]\nambient_min = 0.2\nambient_max = 0.4\nregion_inflation = 1.5\n",
            "[image]\nwidth = 0\nheight = 4\n",
            "[placement]\ndepth_band = [9.0, 3.0]\n",
        ] {
            let path = dir.path().join("config.toml");
            fs::write(&path, format!("{base}\n{extra}")).unwrap();
            assert!(
                matches!(Config::load(&path), Err(Error::Config(_))),
                "accepted: {extra}"
            );
        }
    }

    #[test]
    fn derived_region_widens_with_depth_band() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        fs::write(&path, minimal_toml(dir.path())).unwrap();
        let config = Config::load(&path).unwrap();
        let region = config.placement_region().unwrap();
        assert!(region.max.x > region.min.x);
        assert_eq!(region.min.y, 0.0);
        assert_eq!(region.max.y, 0.5);

        let mut wider = config.clone();
        wider.placement.depth_band = [4.0, 30.0];
        let wide_region = wider.placement_region().unwrap();
        assert!(wide_region.max.x > region.max.x);
    }
}
