//! Color + depth target for the rasterizer.

use crate::error::{Error, Result};

/// Real-valued RGB color buffer plus a depth buffer initialized to +inf.
/// Color stays in `[0, 1]` floats during shading and is quantized to 8-bit
/// only on export.
#[derive(Debug, Clone)]
pub struct Framebuffer {
    width: u32,
    height: u32,
    color: Vec<[f32; 3]>,
    depth: Vec<f64>,
}

impl Framebuffer {
    /// Buffer seeded with the background image; depth everywhere +inf, so a
    /// pixel no fragment touches exports bit-identical to the background.
    pub fn from_background(background: &image::RgbImage) -> Framebuffer {
        let (width, height) = background.dimensions();
        Framebuffer {
            width,
            height,
            color: background
                .pixels()
                .map(|p| [p.0[0] as f32 / 255.0, p.0[1] as f32 / 255.0, p.0[2] as f32 / 255.0])
                .collect(),
            depth: vec![f64::INFINITY; (width * height) as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        (y * self.width + x) as usize
    }

    pub fn depth_at(&self, x: u32, y: u32) -> f64 {
        self.depth[self.index(x, y)]
    }

    pub fn color_at(&self, x: u32, y: u32) -> [f32; 3] {
        self.color[self.index(x, y)]
    }

    /// Depth-tested write: keeps the nearest fragment, first-drawn wins on
    /// exactly equal depth.
    #[inline]
    pub fn write_if_nearer(&mut self, x: u32, y: u32, depth: f64, color: [f32; 3]) {
        let i = self.index(x, y);
        if depth < self.depth[i] {
            self.depth[i] = depth;
            self.color[i] = color;
        }
    }

    /// Multiplies a pixel's color in place (used by the shadow pass).
    pub fn modulate(&mut self, x: u32, y: u32, factor: f32) {
        let i = self.index(x, y);
        for c in &mut self.color[i] {
            *c *= factor;
        }
    }

    /// Quantizes to 8-bit RGB: `round(clamp(c) * 255)` per channel.
    pub fn to_rgb_image(&self) -> image::RgbImage {
        image::RgbImage::from_fn(self.width, self.height, |x, y| {
            let [r, g, b] = self.color[(y * self.width + x) as usize];
            let q = |c: f32| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
            image::Rgb([q(r), q(g), q(b)])
        })
    }
}

/// Scales `img` to cover `width x height` preserving aspect ratio, then
/// center-crops. Backgrounds of any shape become exact camera-sized plates.
pub fn fit_cover(img: &image::RgbImage, width: u32, height: u32) -> Result<image::RgbImage> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument("zero target dimensions".into()));
    }
    if img.dimensions() == (width, height) {
        return Ok(img.clone());
    }
    let (iw, ih) = img.dimensions();
    let scale = (width as f64 / iw as f64).max(height as f64 / ih as f64);
    let sw = (iw as f64 * scale).ceil().max(width as f64) as u32;
    let sh = (ih as f64 * scale).ceil().max(height as f64) as u32;
    let scaled = image::imageops::resize(img, sw, sh, image::imageops::FilterType::Triangle);
    let x0 = (sw - width) / 2;
    let y0 = (sh - height) / 2;
    Ok(image::imageops::crop_imm(&scaled, x0, y0, width, height).to_image())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradient(w: u32, h: u32) -> image::RgbImage {
        image::RgbImage::from_fn(w, h, |x, y| {
            image::Rgb([(x % 256) as u8, (y % 256) as u8, ((x + y) % 256) as u8])
        })
    }

    #[test]
    fn untouched_buffer_exports_background_bytes() {
        let bg = gradient(64, 48);
        let fb = Framebuffer::from_background(&bg);
        assert_eq!(fb.to_rgb_image(), bg);
        assert!(fb.depth_at(10, 10).is_infinite());
    }

    #[test]
    fn depth_test_keeps_nearest_and_first_on_tie() {
        let bg = gradient(4, 4);
        let mut fb = Framebuffer::from_background(&bg);
        fb.write_if_nearer(1, 1, 2.0, [1.0, 0.0, 0.0]);
        fb.write_if_nearer(1, 1, 1.0, [0.0, 1.0, 0.0]);
        assert_eq!(fb.color_at(1, 1), [0.0, 1.0, 0.0]);
        fb.write_if_nearer(1, 1, 1.0, [0.0, 0.0, 1.0]);
        assert_eq!(fb.color_at(1, 1), [0.0, 1.0, 0.0], "tie must keep first");
        fb.write_if_nearer(1, 1, 3.0, [1.0, 1.0, 1.0]);
        assert_eq!(fb.color_at(1, 1), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn fit_cover_hits_exact_dimensions() {
        for (w, h) in [(100, 30), (30, 100), (64, 48), (7, 13)] {
            let out = fit_cover(&gradient(w, h), 64, 48).unwrap();
            assert_eq!(out.dimensions(), (64, 48));
        }
    }

    #[test]
    fn fit_cover_is_identity_for_matching_size() {
        let img = gradient(64, 48);
        assert_eq!(fit_cover(&img, 64, 48).unwrap(), img);
    }
}
