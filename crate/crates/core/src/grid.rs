//! Radial sampling grids.

use crate::error::{Error, Result};

/// Largest admissible first grid point.
pub const MAX_R_MIN: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub enum GridScheme {
    /// Log-spaced on `[r_min, knee]`, uniform on `[knee, r_max]`.
    LogUniform {
        knee: f64,
    },
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    points: Vec<f64>,
    scheme: GridScheme,
}

impl RadialGrid {
    /// `n` points in total, split so the log and uniform parts have comparable spacing at the knee.
    pub fn log_uniform(r_min: f64, knee: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min < knee && knee < r_max && r_max.is_finite()) {
            return Err(Error::Config(format!(
                "radial grid needs 0 < r_min < knee < r_max, got {r_min}, {knee}, {r_max}"
            )));
        }
        if r_min > MAX_R_MIN {
            return Err(Error::Config(format!(
                "r_min = {r_min} exceeds {MAX_R_MIN}; the regular-solution boundary needs a smaller start"
            )));
        }
        if n < 16 {
            return Err(Error::Config(format!(
                "radial grid needs at least 16 points, got {n}"
            )));
        }
        // Spacing at the knee is knee·L/n_log on the log side and (r_max − knee)/n_lin on the other.
        let log_span = (knee / r_min).ln();
        let weight = log_span * knee;
        let n_log = ((n as f64) * weight / (weight + r_max - knee)).round() as usize;
        let n_log = n_log.clamp(4, n - 4);
        let n_lin = n - n_log;

        let mut points = Vec::with_capacity(n);
        for i in 0..n_log {
            points.push(r_min * (log_span * i as f64 / n_log as f64).exp());
        }
        let h = (r_max - knee) / (n_lin - 1) as f64;
        for j in 0..n_lin {
            points.push(if j + 1 == n_lin {
                r_max
            } else {
                knee + h * j as f64
            });
        }
        Ok(Self {
            points,
            scheme: GridScheme::LogUniform { knee },
        })
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 16 {
            return Err(Error::Config(format!(
                "radial grid needs at least 16 points, got {}",
                points.len()
            )));
        }
        if !(points[0] > 0.0) || points[0] > MAX_R_MIN {
            return Err(Error::Config(format!(
                "first radius must lie in (0, {MAX_R_MIN}], got {}",
                points[0]
            )));
        }
        if points
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(Error::Config(
                "radii must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self {
            points,
            scheme: GridScheme::Explicit,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn scheme(&self) -> &GridScheme {
        &self.scheme
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.points[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.points.last().expect("grid is nonempty")
    }

    /// Index of the grid point closest to `r`.
    pub fn nearest(&self, r: f64) -> usize {
        let p = self.points.partition_point(|&x| x < r);
        if p == 0 {
            0
        } else if p == self.points.len() {
            p - 1
        } else if (self.points[p] - r) < (r - self.points[p - 1]) {
            p
        } else {
            p - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_layout() {
        let g = RadialGrid::log_uniform(1e-4, 1.0, 60.0, 6000).unwrap();
        assert_eq!(g.len(), 6000);
        assert_eq!(g.r_min(), 1e-4);
        assert_eq!(g.r_max(), 60.0);
        assert!(g.points().windows(2).all(|w| w[1] > w[0]));
        let knee = g.nearest(1.0);
        assert!((g.points()[knee] - 1.0).abs() < 1e-12);
        let h_log = g.points()[knee] - g.points()[knee - 1];
        let h_lin = g.points()[knee + 1] - g.points()[knee];
        assert!(h_log / h_lin > 0.8 && h_log / h_lin < 1.25);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RadialGrid::log_uniform(1e-2, 1.0, 60.0, 100).is_err());
        assert!(RadialGrid::log_uniform(1e-4, 1.0, 60.0, 8).is_err());
        assert!(RadialGrid::log_uniform(1e-4, 70.0, 60.0, 100).is_err());
        assert!(RadialGrid::from_points(vec![1e-4, 1.0]).is_err());
        let mut p: Vec<f64> = (1..=20).map(|i| i as f64 * 1e-4).collect();
        assert!(RadialGrid::from_points(p.clone()).is_ok());
        p[5] = p[4];
        assert!(RadialGrid::from_points(p).is_err());
    }

    #[test]
    fn nearest_index() {
        let g = RadialGrid::from_points((1..=20).map(|i| i as f64 * 1e-4).collect()).unwrap();
        assert_eq!(g.nearest(0.0), 0);
        assert_eq!(g.nearest(1.0), 19);
        assert_eq!(g.nearest(5.2e-4), 4);
        assert_eq!(g.nearest(5.6e-4), 5);
    }
}
