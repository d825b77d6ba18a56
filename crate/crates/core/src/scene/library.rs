//! Asset libraries: meshes, texture swatches and background images.
//!
//! Each library is a plain directory. Textures and backgrounds carry an
//! `index.toml` with one `[[entries]]` table per image declaring its file
//! and category label; entry ids are `category/stem`. Meshes are the `.obj`
//! files of the directory in name order, ids are their file stems, with
//! optional `<name>.obj.toml` sidecars for anchor overrides.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{self, Mesh};
use crate::rng::Rng;

#[derive(Debug, Clone)]
pub struct ImageEntry {
    /// `category/stem`, unique within the library.
    pub id: String,
    pub category: String,
    pub path: PathBuf,
}

/// Category-labeled image collection (shared by textures and backgrounds).
#[derive(Debug, Clone)]
pub struct ImageLibrary {
    entries: Vec<ImageEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexFile {
    entries: Vec<IndexEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexEntry {
    file: String,
    category: String,
}

impl ImageLibrary {
    /// Reads `<dir>/index.toml` and checks that every listed image exists
    /// and is decodable, failing fast with the full list of bad entries.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let index_path = dir.join("index.toml");
        let text = fs::read_to_string(&index_path).map_err(|e| Error::io(&index_path, e))?;
        let index: IndexFile = toml::from_str(&text)
            .map_err(|e| Error::Library(format!("{}: {e}", index_path.display())))?;
        if index.entries.is_empty() {
            return Err(Error::Library(format!(
                "{}: empty image library",
                index_path.display()
            )));
        }

        let mut entries = Vec::with_capacity(index.entries.len());
        let mut bad = Vec::new();
        for entry in &index.entries {
            let path = dir.join(&entry.file);
            match image::image_dimensions(&path) {
                Ok(_) => {
                    let stem = Path::new(&entry.file)
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| entry.file.clone());
                    entries.push(ImageEntry {
                        id: format!("{}/{stem}", entry.category),
                        category: entry.category.clone(),
                        path,
                    });
                }
                Err(e) => bad.push(format!("{}: {e}", path.display())),
            }
        }
        if !bad.is_empty() {
            return Err(Error::Library(format!(
                "unreadable images in {}: {}",
                dir.display(),
                bad.join("; ")
            )));
        }
        Ok(ImageLibrary { entries })
    }

    pub fn entries(&self) -> &[ImageEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&ImageEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn categories(&self) -> BTreeSet<String> {
        self.entries.iter().map(|e| e.category.clone()).collect()
    }
}

/// Independently assigns each part a uniformly drawn texture id. Parts are
/// visited in ascending label order so the draw sequence is reproducible;
/// duplicate assignments are allowed.
pub fn assign_textures(
    parts: &[u16],
    library: &ImageLibrary,
    rng: &mut Rng,
) -> Result<Vec<(u16, String)>> {
    if library.entries.is_empty() {
        return Err(Error::Library("texture library is empty".into()));
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted
        .into_iter()
        .map(|part| {
            let entry = &library.entries[rng.index(library.entries.len())];
            (part, entry.id.clone())
        })
        .collect())
}

/// Uniform draw over the images whose category is not excluded.
pub fn select_background(
    library: &ImageLibrary,
    excluded: &BTreeSet<String>,
    rng: &mut Rng,
) -> Result<String> {
    let eligible: Vec<&ImageEntry> = library
        .entries
        .iter()
        .filter(|e| !excluded.contains(&e.category))
        .collect();
    if eligible.is_empty() {
        return Err(Error::Library(
            "every background category is excluded".into(),
        ));
    }
    Ok(eligible[rng.index(eligible.len())].id.clone())
}

#[derive(Debug, Clone)]
pub struct MeshAsset {
    /// File stem of the `.obj`.
    pub id: String,
    pub mesh: Mesh,
}

/// All meshes of a directory, eagerly loaded and validated.
#[derive(Debug, Clone)]
pub struct MeshLibrary {
    assets: Vec<MeshAsset>,
}

impl MeshLibrary {
    pub fn load(dir: impl AsRef<Path>, face_cap: usize) -> Result<Self> {
        let dir = dir.as_ref();
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "obj"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::Library(format!(
                "{}: no .obj meshes found",
                dir.display()
            )));
        }

        let mut assets = Vec::with_capacity(paths.len());
        let mut bad = Vec::new();
        for path in &paths {
            match geometry::load_mesh_with_cap(path, face_cap) {
                Ok(mesh) => assets.push(MeshAsset {
                    id: path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    mesh,
                }),
                Err(e) => bad.push(e.to_string()),
            }
        }
        if !bad.is_empty() {
            return Err(Error::Library(format!(
                "unloadable meshes: {}",
                bad.join("; ")
            )));
        }
        Ok(MeshLibrary { assets })
    }

    pub fn assets(&self) -> &[MeshAsset] {
        &self.assets
    }

    pub fn get(&self, id: &str) -> Option<&Mesh> {
        self.assets.iter().find(|a| a.id == id).map(|a| &a.mesh)
    }
}

/// The three libraries a generation run draws from.
#[derive(Debug, Clone)]
pub struct AssetSet {
    pub meshes: MeshLibrary,
    pub textures: ImageLibrary,
    pub backgrounds: ImageLibrary,
}
