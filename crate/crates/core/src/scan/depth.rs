use std::path::Path;

use image::{ImageBuffer, ImageReader, Luma};

use super::{KeyValueFile, OrganizedCloud};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Pinhole intrinsics of a depth camera. `depth_scale` is raw units per meter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepthIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub depth_scale: f64,
}

impl Default for DepthIntrinsics {
    /// Kinect-style 640×480 camera with the 5000 units/m convention.
    fn default() -> Self {
        Self {
            fx: 525.0,
            fy: 525.0,
            cx: 319.5,
            cy: 239.5,
            depth_scale: 5000.0,
        }
    }
}

impl DepthIntrinsics {
    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0 && self.depth_scale > 0.0) {
            return Err(Error::InvalidInput(
                "focal lengths and depth scale must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn back_project(&self, u: f64, v: f64, z: f64) -> Vec3 {
        Vec3::new((u - self.cx) * z / self.fx, (v - self.cy) * z / self.fy, z)
    }

    /// Pixel coordinates and depth of a camera-frame point.
    pub fn project(&self, p: &Vec3) -> (f64, f64, f64) {
        (self.fx * p.x / p.z + self.cx, self.fy * p.y / p.z + self.cy, p.z)
    }

    /// Ray through a pixel center, scaled so its z component is 1.
    pub fn ray(&self, u: usize, v: usize) -> Vec3 {
        self.back_project(u as f64, v as f64, 1.0)
    }

    pub fn from_kv(kv: &KeyValueFile) -> Result<Self> {
        let d = Self::default();
        let k = Self {
            fx: kv.get("fx")?.unwrap_or(d.fx),
            fy: kv.get("fy")?.unwrap_or(d.fy),
            cx: kv.get("cx")?.unwrap_or(d.cx),
            cy: kv.get("cy")?.unwrap_or(d.cy),
            depth_scale: kv.get("depth_scale")?.unwrap_or(d.depth_scale),
        };
        k.validate()?;
        Ok(k)
    }

    pub fn to_kv(&self) -> String {
        format!(
            "fx = {}\nfy = {}\ncx = {}\ncy = {}\ndepth_scale = {}\n",
            self.fx, self.fy, self.cx, self.cy, self.depth_scale
        )
    }
}

/// Raw depth values, row-major; zero means no measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl DepthImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[v * self.width + u]
    }

    pub fn set(&mut self, u: usize, v: usize, raw: f64) {
        self.data[v * self.width + u] = raw;
    }
}

/// Back-projects every pixel; row `v`, column `u` of the output is pixel `(u, v)`.
pub fn depth_to_cloud(depth: &DepthImage, k: &DepthIntrinsics) -> OrganizedCloud {
    let mut cloud = OrganizedCloud::new(depth.height, depth.width, "");
    for v in 0..depth.height {
        for u in 0..depth.width {
            let raw = depth.get(u, v);
            if raw > 0.0 && raw.is_finite() {
                cloud.set(v, u, Some(k.back_project(u as f64, v as f64, raw / k.depth_scale)));
            }
        }
    }
    cloud
}

/// Loads a single-channel 16-bit PNG or PGM.
pub fn load_depth_image(path: impl AsRef<Path>) -> Result<DepthImage> {
    let path = path.as_ref();
    let img = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| Error::Image {
            path: path.into(),
            source: e,
        })?
        .into_luma16();
    let (w, h) = img.dimensions();
    Ok(DepthImage {
        width: w as usize,
        height: h as usize,
        data: img.into_raw().into_iter().map(f64::from).collect(),
    })
}

/// Saves raw values rounded to `u16`; format follows the file extension.
pub fn save_depth_image(path: impl AsRef<Path>, depth: &DepthImage) -> Result<()> {
    let path = path.as_ref();
    let raw: Vec<u16> = depth
        .data
        .iter()
        .map(|v| v.round().clamp(0.0, u16::MAX as f64) as u16)
        .collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(depth.width as u32, depth.height as u32, raw)
            .ok_or_else(|| Error::InvalidInput("depth buffer size mismatch".into()))?;
    img.save(path).map_err(|e| Error::Image {
        path: path.into(),
        source: e,
    })
}
