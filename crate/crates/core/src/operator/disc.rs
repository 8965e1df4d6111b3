use serde::Serialize;

use crate::{ComplexPoint, Error, Result};

/// Golden ratio; discs need `r` below it for the image discs of all branches to nest.
pub const GOLDEN: f64 = 1.618_033_988_749_894_8;
pub const DEFAULT_RADIUS: f64 = 1.5;

/// Disc `{|z - 1| < r}` with `1 <= r < (1 + √5)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscDomain {
    radius: f64,
}

impl Default for DiscDomain {
    fn default() -> Self {
        DiscDomain { radius: DEFAULT_RADIUS }
    }
}

impl DiscDomain {
    pub fn new(radius: f64) -> Result<Self> {
        if !(1.0..GOLDEN).contains(&radius) {
            return Err(Error::Domain(format!("disc radius must lie in [1, {GOLDEN}), got {radius}")));
        }
        Ok(DiscDomain { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        (z - 1.0).norm() < self.radius
    }

    /// Image of the disc under `z -> 1/(z+n)`, see [`image_disc`].
    pub fn image_disc(&self, n: u64) -> Result<(ComplexPoint, f64)> {
        image_disc(n, self.radius)
    }

    /// Whether the closure of the image disc of branch `n` lies inside the disc.
    pub fn contains_image(&self, n: u64) -> Result<bool> {
        contains_image(n, self.radius)
    }
}

/// Centre `c_n = (n+1)/((n+1)² - r²)` and radius `r_n = r/((n+1)² - r²)` of the
/// image of `{|z - 1| < r}` under `z -> 1/(z+n)`.
///
/// Takes a bare radius so that radii outside the admissible range can be probed.
pub fn image_disc(n: u64, radius: f64) -> Result<(ComplexPoint, f64)> {
    if n == 0 {
        return Err(Error::Domain("branch index starts at 1".into()));
    }
    let m = (n + 1) as f64;
    let den = m * m - radius * radius;
    if den <= 0.0 {
        return Err(Error::Domain(format!("disc of radius {radius} contains the pole of branch {n}")));
    }
    Ok((ComplexPoint::new(m / den, 0.0), radius / den))
}

/// `|c_n - 1| + r_n < r`.
pub fn contains_image(n: u64, radius: f64) -> Result<bool> {
    let (c, rn) = image_disc(n, radius)?;
    Ok((c - 1.0).norm() + rn < radius)
}

/// Values of a function on a fixed grid in the disc: 64 equispaced points on
/// `|z - 1| = r/2`, then the centre `z = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicSample {
    pub points: Vec<ComplexPoint>,
    pub values: Vec<ComplexPoint>,
}

impl HolomorphicSample {
    pub const RING: usize = 64;

    pub fn grid(disc: &DiscDomain) -> Vec<ComplexPoint> {
        let rho = disc.radius() / 2.0;
        let mut pts: Vec<ComplexPoint> = (0..Self::RING)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / Self::RING as f64;
                ComplexPoint::new(1.0 + rho * th.cos(), rho * th.sin())
            })
            .collect();
        pts.push(ComplexPoint::new(1.0, 0.0));
        pts
    }

    pub fn from_fn<F: Fn(ComplexPoint) -> ComplexPoint>(disc: &DiscDomain, f: F) -> Self {
        let points = Self::grid(disc);
        let values = points.iter().map(|&z| f(z)).collect();
        HolomorphicSample { points, values }
    }

    pub fn max_abs_diff(&self, other: &HolomorphicSample) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_image_disc() {
        let (c, r) = image_disc(1, 1.5).unwrap();
        assert!((c.re - 8.0 / 7.0).abs() < 1e-15);
        assert!((r - 6.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn radius_range() {
        assert!(DiscDomain::new(0.9).is_err());
        assert!(DiscDomain::new(1.7).is_err());
        assert!(DiscDomain::new(1.0).is_ok());
    }

    #[test]
    fn containment_breaks_past_golden_ratio() {
        for &r in &[1.01, 1.3, 1.5, 1.61] {
            for n in 1..=1000 {
                assert!(contains_image(n, r).unwrap(), "r = {r}, n = {n}");
            }
        }
        assert!(!contains_image(1, 1.62).unwrap());
    }

    #[test]
    fn grid_shape() {
        let g = HolomorphicSample::grid(&DiscDomain::default());
        assert_eq!(g.len(), 65);
        assert!((g[0] - ComplexPoint::new(1.75, 0.0)).norm() < 1e-15);
        assert_eq!(g[64], ComplexPoint::new(1.0, 0.0));
    }
}
