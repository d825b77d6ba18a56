//! Colored point lights scattered around the scene.

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::config::LightsConfig;
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scene::Aabb;

/// Point light without distance falloff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Light {
    pub position: Point3<f64>,
    /// Per-channel color in `[0, 1]`.
    pub color: [f64; 3],
    pub intensity: f64,
}

/// Draws a light count uniformly from the configured range and scatters
/// the lights in the shell between the placement region and its inflation,
/// so they illuminate the scene from outside and above. Colors and
/// intensities are uniform in their configured ranges; the color mix is
/// what produces the varied exposure and tint across the dataset.
pub fn place_lights(config: &LightsConfig, region: &Aabb, rng: &mut Rng) -> Result<Vec<Light>> {
    if config.count_min < 1 {
        return Err(Error::InvalidArgument(
            "at least one light is required".into(),
        ));
    }
    if config.count_min > config.count_max {
        return Err(Error::InvalidArgument(format!(
            "light count range inverted: {} > {}",
            config.count_min, config.count_max
        )));
    }
    let shell = region.inflated(config.region_inflation);
    let count = rng.uniform_u32(config.count_min, config.count_max);
    let mut lights = Vec::with_capacity(count as usize);
    for _ in 0..count {
        // Rejection into the shell; bounded retries keep the draw count per
        // light finite even when the inflation is degenerate.
        let mut position = shell.sample_uniform(rng);
        for _ in 0..16 {
            if !region.contains(&position) {
                break;
            }
            position = shell.sample_uniform(rng);
        }
        let color = [
            rng.uniform(config.color_min[0], config.color_max[0]),
            rng.uniform(config.color_min[1], config.color_max[1]),
            rng.uniform(config.color_min[2], config.color_max[2]),
        ];
        let intensity = rng.uniform(config.intensity_min, config.intensity_max);
        lights.push(Light {
            position,
            color,
            intensity,
        });
    }
    Ok(lights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region() -> Aabb {
        Aabb::new(Point3::new(-4.0, 0.0, -4.0), Point3::new(4.0, 1.0, 4.0)).unwrap()
    }

    #[test]
    fn fixed_count_and_bounds() {
        let config = LightsConfig {
            count_min: 1,
            count_max: 1,
            intensity_min: 0.5,
            intensity_max: 0.5,
            color_min: [0.2, 0.3, 0.4],
            color_max: [0.2, 0.3, 0.4],
            ..LightsConfig::default()
        };
        let lights = place_lights(&config, &region(), &mut Rng::new(1)).unwrap();
        assert_eq!(lights.len(), 1);
        assert_eq!(lights[0].color, [0.2, 0.3, 0.4]);
        assert_eq!(lights[0].intensity, 0.5);
    }

    #[test]
    fn count_stays_in_range() {
        let config = LightsConfig {
            count_min: 2,
            count_max: 5,
            ..LightsConfig::default()
        };
        let mut rng = Rng::new(2);
        let mut seen = [false; 4];
        for _ in 0..10_000 {
            let n = place_lights(&config, &region(), &mut rng).unwrap().len();
            assert!((2..=5).contains(&n));
            seen[n - 2] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn lights_avoid_the_core_region() {
        let config = LightsConfig::default();
        let r = region();
        let shell = r.inflated(config.region_inflation);
        let mut rng = Rng::new(3);
        let mut outside = 0;
        let mut total = 0;
        for _ in 0..200 {
            for light in place_lights(&config, &r, &mut rng).unwrap() {
                assert!(shell.contains(&light.position));
                total += 1;
                if !r.contains(&light.position) {
                    outside += 1;
                }
            }
        }
        // The bounded rejection loop makes interior placements vanishingly
        // rare with the default inflation.
        assert!(outside as f64 / total as f64 > 0.99);
    }

    #[test]
    fn inverted_range_rejected() {
        let config = LightsConfig {
            count_min: 5,
            count_max: 2,
            ..LightsConfig::default()
        };
        assert!(place_lights(&config, &region(), &mut Rng::new(4)).is_err());
    }

    #[test]
    fn same_seed_same_lights() {
        let config = LightsConfig::default();
        let a = place_lights(&config, &region(), &mut Rng::new(5)).unwrap();
        let b = place_lights(&config, &region(), &mut Rng::new(5)).unwrap();
        assert_eq!(a, b);
    }
}
