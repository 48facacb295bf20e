use std::f64::consts::PI;
use std::path::Path;

use super::{KeyValueFile, OrganizedCloud};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Spherical binning of a spinning LiDAR. Row 0 is the highest elevation,
/// column 0 the smallest azimuth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    pub azimuth_bins: usize,
    pub elevation_bins: usize,
    /// Radians, `[min, max)`.
    pub azimuth_min: f64,
    pub azimuth_max: f64,
    pub elevation_min: f64,
    pub elevation_max: f64,
}

impl Default for GridConfig {
    /// HDL-64E style: 64 rows over +2.0°..-24.8°, 2000 columns over the full turn.
    fn default() -> Self {
        Self {
            azimuth_bins: 2000,
            elevation_bins: 64,
            azimuth_min: -PI,
            azimuth_max: PI,
            elevation_min: (-24.8f64).to_radians(),
            elevation_max: 2.0f64.to_radians(),
        }
    }
}

impl GridConfig {
    pub fn full_sphere(azimuth_bins: usize, elevation_bins: usize) -> Self {
        Self {
            azimuth_bins,
            elevation_bins,
            azimuth_min: -PI,
            azimuth_max: PI,
            elevation_min: -PI / 2.0,
            elevation_max: PI / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.azimuth_bins < 2 || self.elevation_bins < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 bins per axis".into()));
        }
        if !(self.azimuth_max > self.azimuth_min) || !(self.elevation_max > self.elevation_min) {
            return Err(Error::InvalidInput("grid angular ranges must be positive".into()));
        }
        Ok(())
    }

    fn azimuth_step(&self) -> f64 {
        (self.azimuth_max - self.azimuth_min) / self.azimuth_bins as f64
    }

    fn elevation_step(&self) -> f64 {
        (self.elevation_max - self.elevation_min) / self.elevation_bins as f64
    }

    /// Cell of a point by its spherical angles, if inside the grid.
    pub fn cell_of(&self, p: &Vec3) -> Option<(usize, usize)> {
        let horizontal = p.x.hypot(p.y);
        if horizontal == 0.0 && p.z == 0.0 {
            return None;
        }
        let az = p.y.atan2(p.x);
        let el = p.z.atan2(horizontal);
        let col = ((az - self.azimuth_min) / self.azimuth_step()).floor();
        let row = ((self.elevation_max - el) / self.elevation_step()).floor();
        // The closed upper edge of the grid falls into the last bin.
        let col = if col as usize == self.azimuth_bins && az <= self.azimuth_max { col - 1.0 } else { col };
        let row = if row as usize == self.elevation_bins && el >= self.elevation_min { row - 1.0 } else { row };
        if col < 0.0 || row < 0.0 || col >= self.azimuth_bins as f64 || row >= self.elevation_bins as f64 {
            return None;
        }
        Some((row as usize, col as usize))
    }

    /// Unit ray through the center of a cell.
    pub fn ray_direction(&self, row: usize, col: usize) -> Vec3 {
        let az = self.azimuth_min + (col as f64 + 0.5) * self.azimuth_step();
        let el = self.elevation_max - (row as f64 + 0.5) * self.elevation_step();
        Vec3::new(el.cos() * az.cos(), el.cos() * az.sin(), el.sin())
    }

    pub fn from_kv(kv: &KeyValueFile) -> Result<Self> {
        let d = Self::default();
        let deg = |key: &str, default: f64| -> Result<f64> {
            Ok(kv.get::<f64>(key)?.map(f64::to_radians).unwrap_or(default))
        };
        let cfg = Self {
            azimuth_bins: kv.get("azimuth_bins")?.unwrap_or(d.azimuth_bins),
            elevation_bins: kv.get("elevation_bins")?.unwrap_or(d.elevation_bins),
            azimuth_min: deg("azimuth_min_deg", d.azimuth_min)?,
            azimuth_max: deg("azimuth_max_deg", d.azimuth_max)?,
            elevation_min: deg("elevation_min_deg", d.elevation_min)?,
            elevation_max: deg("elevation_max_deg", d.elevation_max)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_kv(&self) -> String {
        format!(
            "azimuth_bins = {}\nelevation_bins = {}\nazimuth_min_deg = {}\nazimuth_max_deg = {}\nelevation_min_deg = {}\nelevation_max_deg = {}\n",
            self.azimuth_bins,
            self.elevation_bins,
            self.azimuth_min.to_degrees(),
            self.azimuth_max.to_degrees(),
            self.elevation_min.to_degrees(),
            self.elevation_max.to_degrees(),
        )
    }
}

/// Bins raw points by azimuth and elevation; the nearest return wins each cell.
pub fn organize_lidar(raw_points: &[Vec3], cfg: &GridConfig) -> Result<OrganizedCloud> {
    cfg.validate()?;
    if raw_points.is_empty() {
        return Err(Error::InvalidInput("no points to organize".into()));
    }
    let mut cloud = OrganizedCloud::new(cfg.elevation_bins, cfg.azimuth_bins, "");
    for p in raw_points {
        if !p.iter().all(|v| v.is_finite()) {
            continue;
        }
        let Some((r, c)) = cfg.cell_of(p) else { continue };
        match cloud.get(r, c) {
            Some(q) if q.norm_squared() <= p.norm_squared() => {}
            _ => cloud.set(r, c, Some(*p)),
        }
    }
    Ok(cloud)
}

/// Reads little-endian `f32` quadruplets `(x, y, z, intensity)`; intensity is dropped.
pub fn load_kitti_bin(path: impl AsRef<Path>) -> Result<Vec<Vec3>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() % 16 != 0 {
        return Err(Error::InvalidInput(format!(
            "{}: size {} is not a multiple of 16 bytes",
            path.display(),
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|rec| {
            let f = |i: usize| f32::from_le_bytes(rec[i..i + 4].try_into().unwrap()) as f64;
            Vec3::new(f(0), f(4), f(8))
        })
        .collect())
}

/// Writes points in the same layout with zero intensity.
pub fn write_kitti_bin(path: impl AsRef<Path>, points: &[Vec3]) -> Result<()> {
    let path = path.as_ref();
    let mut bytes = Vec::with_capacity(points.len() * 16);
    for p in points {
        for v in [p.x as f32, p.y as f32, p.z as f32, 0.0f32] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
