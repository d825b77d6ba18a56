//! Instance placement: the Gaussian-mixture sampler and its uniform
//! ablation counterpart.
//!
//! Positions come from a mixture of identity-covariance Gaussians whose
//! means are scattered uniformly over the placement region. That produces
//! tight clusters with occlusion plus large empty areas of visible
//! background, the way real objects group in the world. The `uniform` mode
//! drops the mixture and scatters positions independently, kept as an
//! ablation switch.

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Axis-aligned box in scene units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point3<f64>,
    pub max: Point3<f64>,
}

impl Aabb {
    pub fn new(min: Point3<f64>, max: Point3<f64>) -> Result<Self> {
        if (0..3).any(|c| min[c] >= max[c]) {
            return Err(Error::InvalidArgument(format!(
                "box must have positive volume, got min {min:?} max {max:?}"
            )));
        }
        Ok(Aabb { min, max })
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        (0..3).all(|c| p[c] >= self.min[c] && p[c] <= self.max[c])
    }

    /// Clamps `p` into the box component-wise.
    pub fn clamp(&self, p: Point3<f64>) -> Point3<f64> {
        Point3::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
            p.z.clamp(self.min.z, self.max.z),
        )
    }

    pub fn sample_uniform(&self, rng: &mut Rng) -> Point3<f64> {
        Point3::new(
            rng.uniform(self.min.x, self.max.x),
            rng.uniform(self.min.y, self.max.y),
            rng.uniform(self.min.z, self.max.z),
        )
    }

    /// Grows every extent by `factor` about the center (1.0 = unchanged).
    pub fn inflated(&self, factor: f64) -> Aabb {
        let center = nalgebra::center(&self.min, &self.max);
        let half = (self.max - self.min) * 0.5 * factor;
        Aabb {
            min: center - half,
            max: center + half,
        }
    }
}

/// How instance positions are drawn over the placement region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementMode {
    /// Gaussian mixture with uniformly scattered means (the default).
    #[default]
    Gmm,
    /// Independent uniform positions (ablation baseline).
    Uniform,
}

/// A Gaussian mixture with identity covariance per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmSpec {
    components: Vec<GmmComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmComponent {
    pub weight: f64,
    pub mean: Point3<f64>,
}

impl GmmSpec {
    /// Builds a mixture, checking that weights are non-negative and sum to 1
    /// within 1e-9.
    pub fn new(components: Vec<GmmComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument(
                "mixture needs at least one component".into(),
            ));
        }
        if components.iter().any(|c| c.weight < 0.0) {
            return Err(Error::InvalidArgument("negative mixture weight".into()));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(GmmSpec { components })
    }

    /// Equal-weight mixture over the given means.
    pub fn uniform_weights(means: Vec<Point3<f64>>) -> Result<Self> {
        let k = means.len();
        let weight = 1.0 / k as f64;
        GmmSpec::new(
            means
                .into_iter()
                .map(|mean| GmmComponent { weight, mean })
                .collect(),
        )
    }

    pub fn components(&self) -> &[GmmComponent] {
        &self.components
    }

    /// One draw: pick a component by weight, then add a standard-normal
    /// offset per axis (identity covariance).
    pub fn sample(&self, rng: &mut Rng) -> Point3<f64> {
        let weights: Vec<f64> = self.components.iter().map(|c| c.weight).collect();
        let mean = self.components[rng.weighted_index(&weights)].mean;
        Point3::new(
            mean.x + rng.normal(),
            mean.y + rng.normal(),
            mean.z + rng.normal(),
        )
    }
}

/// Number of mixture components for a scene of `n_objects`: a real drawn
/// from `U(1 + n/20, 2 + n/8)`, rounded to the nearest integer (ties away
/// from zero) and clamped to at least 1. Zero objects mean zero components.
pub fn sample_component_count(n_objects: u32, rng: &mut Rng) -> u32 {
    if n_objects == 0 {
        return 0;
    }
    let n = n_objects as f64;
    let draw = rng.uniform(1.0 + n / 20.0, 2.0 + n / 8.0);
    (draw.round() as u32).max(1)
}

/// Draws `n_objects` positions in `region` under the given mode. Mixture
/// samples that land outside the region are clamped to its surface, so the
/// returned list always has exactly `n_objects` in-region points.
pub fn sample_placements(
    n_objects: u32,
    region: &Aabb,
    mode: PlacementMode,
    rng: &mut Rng,
) -> Vec<Point3<f64>> {
    if n_objects == 0 {
        return Vec::new();
    }
    match mode {
        PlacementMode::Uniform => (0..n_objects).map(|_| region.sample_uniform(rng)).collect(),
        PlacementMode::Gmm => {
            let k = sample_component_count(n_objects, rng);
            let means = (0..k).map(|_| region.sample_uniform(rng)).collect();
            let spec = GmmSpec::uniform_weights(means)
                .expect("component count is clamped to at least 1");
            (0..n_objects)
                .map(|_| region.clamp(spec.sample(rng)))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region() -> Aabb {
        Aabb::new(Point3::new(-10.0, 0.0, -10.0), Point3::new(10.0, 2.0, 10.0)).unwrap()
    }

    #[test]
    fn aabb_rejects_empty_extent() {
        assert!(Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn clamp_pins_to_surface() {
        let r = region();
        let p = r.clamp(Point3::new(99.0, -5.0, 0.5));
        assert_eq!(p, Point3::new(10.0, 0.0, 0.5));
        assert!(r.contains(&p));
    }

    #[test]
    fn weights_must_sum_to_one() {
        let means = vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0)];
        let bad = GmmSpec::new(
            means
                .iter()
                .map(|&mean| GmmComponent { weight: 0.3, mean })
                .collect(),
        );
        assert!(bad.is_err());
        let good = GmmSpec::uniform_weights(means).unwrap();
        let total: f64 = good.components().iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn component_count_in_rounded_bounds_for_20_objects() {
        // U(2, 4.5) rounded to nearest: {2, 3, 4} (4.5 itself is excluded
        // by the half-open draw).
        let mut rng = Rng::new(8);
        let mut seen = [false; 3];
        for _ in 0..100_000 {
            let k = sample_component_count(20, &mut rng);
            assert!((2..=4).contains(&k), "k = {k}");
            seen[(k - 2) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn zero_objects_zero_components() {
        let mut rng = Rng::new(9);
        assert_eq!(sample_component_count(0, &mut rng), 0);
        assert!(sample_placements(0, &region(), PlacementMode::Gmm, &mut rng).is_empty());
    }

    #[test]
    fn forced_single_component_matches_mean() {
        // Monte-Carlo oracle: with one component at mu and identity
        // covariance, the per-axis sample mean converges to mu at about
        // 1/sqrt(n); 0.05 is five standard errors at n = 10^4.
        let mu = Point3::new(3.0, -1.0, 7.0);
        let spec = GmmSpec::uniform_weights(vec![mu]).unwrap();
        let mut rng = Rng::new(10);
        let n = 10_000;
        let mut sum = nalgebra::Vector3::zeros();
        for _ in 0..n {
            sum += spec.sample(&mut rng).coords;
        }
        let mean = sum / n as f64;
        for c in 0..3 {
            assert!((mean[c] - mu[c]).abs() < 0.05, "axis {c}: {}", mean[c]);
        }
    }

    #[test]
    fn placements_stay_in_region() {
        let r = region();
        let mut rng = Rng::new(11);
        for mode in [PlacementMode::Gmm, PlacementMode::Uniform] {
            let points = sample_placements(500, &r, mode, &mut rng);
            assert_eq!(points.len(), 500);
            assert!(points.iter().all(|p| r.contains(p)));
        }
    }

    #[test]
    fn placements_deterministic() {
        let r = region();
        let a = sample_placements(50, &r, PlacementMode::Gmm, &mut Rng::new(12));
        let b = sample_placements(50, &r, PlacementMode::Gmm, &mut Rng::new(12));
        assert_eq!(a, b);
    }
}
