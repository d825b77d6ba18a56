//! Software rendering: camera, framebuffer, textures and the rasterizer.

mod camera;
mod framebuffer;
mod raster;
mod texture;

pub use camera::{Camera, ProjectedPoint};
pub use framebuffer::{fit_cover, Framebuffer};
pub use raster::{rasterize, render_triangles, Triangle};
pub use texture::{load_textures, Texture};
