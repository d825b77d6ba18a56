//! Decoded texture swatches with nearest-texel sampling.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::Result;
use crate::scene::ImageLibrary;

/// 8-bit RGB texture. Sampling is nearest-texel with repeat wrapping; no
/// filtering or mip chain, texture fidelity is not the point here.
#[derive(Debug, Clone)]
pub struct Texture {
    width: u32,
    height: u32,
    texels: Vec<[u8; 3]>,
}

impl Texture {
    pub fn load(path: impl AsRef<Path>) -> Result<Texture> {
        let img = image::open(path)?.into_rgb8();
        Ok(Texture::from_image(&img))
    }

    pub fn from_image(img: &image::RgbImage) -> Texture {
        Texture {
            width: img.width(),
            height: img.height(),
            texels: img.pixels().map(|p| p.0).collect(),
        }
    }

    /// 1x1 texture of a constant color (channels in `[0, 1]`).
    pub fn solid(r: f64, g: f64, b: f64) -> Texture {
        let to8 = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
        Texture {
            width: 1,
            height: 1,
            texels: vec![[to8(r), to8(g), to8(b)]],
        }
    }

    /// Nearest texel at `(u, v)`, repeat-wrapped, channels scaled to `[0, 1]`.
    pub fn sample_nearest(&self, u: f64, v: f64) -> [f64; 3] {
        let wrap = |t: f64| t - t.floor();
        let x = ((wrap(u) * self.width as f64) as u32).min(self.width - 1);
        let y = ((wrap(v) * self.height as f64) as u32).min(self.height - 1);
        let [r, g, b] = self.texels[(y * self.width + x) as usize];
        [r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0]
    }
}

/// Decodes every texture of a library up front, keyed by entry id.
pub fn load_textures(library: &ImageLibrary) -> Result<BTreeMap<String, Texture>> {
    library
        .entries()
        .iter()
        .map(|e| Ok((e.id.clone(), Texture::load(&e.path)?)))
        .collect()
}
