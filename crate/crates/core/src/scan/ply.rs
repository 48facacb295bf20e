use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// ASCII PLY content: labelled vertices, optional edges and per-vertex normals.
#[derive(Clone, Debug, Default)]
pub struct PlyData {
    pub comments: Vec<String>,
    pub vertices: Vec<Vec3>,
    pub labels: Option<Vec<i32>>,
    pub normals: Option<Vec<Vec3>>,
    /// `(v0, v1, label)`
    pub edges: Vec<(usize, usize, i32)>,
}

impl PlyData {
    pub fn from_points(points: Vec<Vec3>) -> Self {
        Self {
            vertices: points,
            ..Self::default()
        }
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::from("ply\nformat ascii 1.0\n");
        for c in &self.comments {
            for line in c.lines() {
                let _ = writeln!(s, "comment {line}");
            }
        }
        let _ = writeln!(s, "element vertex {}", self.vertices.len());
        s.push_str("property double x\nproperty double y\nproperty double z\n");
        if self.normals.is_some() {
            s.push_str("property double nx\nproperty double ny\nproperty double nz\n");
        }
        if self.labels.is_some() {
            s.push_str("property int label\n");
        }
        if !self.edges.is_empty() {
            let _ = writeln!(s, "element edge {}", self.edges.len());
            s.push_str("property int vertex1\nproperty int vertex2\nproperty int label\n");
        }
        s.push_str("end_header\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = write!(s, "{} {} {}", v.x, v.y, v.z);
            if let Some(n) = &self.normals {
                let _ = write!(s, " {} {} {}", n[i].x, n[i].y, n[i].z);
            }
            if let Some(l) = &self.labels {
                let _ = write!(s, " {}", l[i]);
            }
            s.push('\n');
        }
        for (a, b, l) in &self.edges {
            let _ = writeln!(s, "{a} {b} {l}");
        }
        s
    }
}

pub fn write_ply(path: impl AsRef<Path>, data: &PlyData) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, data.to_ascii()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_counts_match_body() {
        let mut d = PlyData::from_points(vec![Vec3::new(0.0, 1.0, 2.0), Vec3::new(3.0, 4.0, 5.0)]);
        d.labels = Some(vec![7, 7]);
        d.edges.push((0, 1, 7));
        d.comments.push("seed = 3".into());
        let text = d.to_ascii();
        assert!(text.starts_with("ply\nformat ascii 1.0\ncomment seed = 3\nelement vertex 2\n"));
        assert!(text.contains("element edge 1\n"));
        let body: Vec<_> = text.split("end_header\n").nth(1).unwrap().lines().collect();
        assert_eq!(body, vec!["0 1 2 7", "3 4 5 7", "0 1 7"]);
    }
}
