//! Versioned JSON form of a geometry.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Geometry, LineDesc};
use crate::error::{Error, Result};
use crate::forms::{FormSpace, FormSpec};
use crate::linalg::Subspace;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryFile {
    pub schema: u32,
    pub form: FormSpec,
    pub k: usize,
    pub points: Vec<Vec<Vec<u32>>>,
    pub lines: Vec<Vec<u32>>,
}

impl Geometry {
    pub fn to_file(&self) -> GeometryFile {
        GeometryFile {
            schema: SCHEMA,
            form: self.space.spec(),
            k: self.k,
            points: self.points.iter().map(|p| p.to_serial()).collect(),
            lines: self.lines().map(|l| l.to_vec()).collect(),
        }
    }

    /// Rebuilds a geometry, validating points and lines. Line flags are
    /// recomputed from the first two points of each line.
    pub fn from_file(file: &GeometryFile) -> Result<Geometry> {
        if file.schema != SCHEMA {
            return Err(Error::InvalidArgument(format!("unsupported schema {}", file.schema)));
        }
        let space = FormSpace::from_spec(&file.form)?;
        let f = space.field();
        let dim = space.dim();
        let points: Vec<Subspace> =
            file.points.iter().map(|rows| Subspace::from_serial(f, dim, rows)).collect::<Result<_>>()?;
        if !points.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("points are not sorted and distinct".into()));
        }
        if points.iter().any(|p| p.dim() != file.k || !space.is_totally_isotropic(p)) {
            return Err(Error::InvalidArgument("a point is not a totally isotropic k-space".into()));
        }
        let line_size = file.lines.first().map_or(0, |l| l.len());
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut flags = Vec::new();
        for line in &file.lines {
            if line.len() != line_size || line.len() < 2 || !line.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidArgument("lines must be sorted with equal sizes".into()));
            }
            if line.iter().any(|&p| p as usize >= points.len()) {
                return Err(Error::InvalidArgument("line refers to a missing point".into()));
            }
            let (a, b) = (&points[line[0] as usize], &points[line[1] as usize]);
            let d = a.intersect(f, b)?;
            let u = (file.k < space.n()).then(|| a.sum(f, b)).transpose()?;
            lower.push(d.clone());
            if let Some(u) = &u {
                upper.push(u.clone());
            }
            flags.push((d, u));
        }
        lower.sort();
        lower.dedup();
        upper.sort();
        upper.dedup();
        let line_desc = flags
            .iter()
            .map(|(d, u)| LineDesc {
                lower: lower.binary_search(d).unwrap() as u32,
                upper: u.as_ref().map(|u| upper.binary_search(u).unwrap() as u32),
            })
            .collect();
        let line_points = file.lines.iter().flatten().copied().collect();
        Ok(Geometry::from_parts(space, file.k, points, line_size, line_points, line_desc, lower, upper))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let w = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(w, &self.to_file())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Geometry> {
        let r = std::io::BufReader::new(std::fs::File::open(path)?);
        let file: GeometryFile = serde_json::from_reader(r)?;
        Geometry::from_file(&file)
    }
}
