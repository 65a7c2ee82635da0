//! Intersection geometry for the mirror-array surface.
//!
//! Frame: the array plane is `y = 0` at RSU height, the source headlamp sits
//! at `x = z = 0`, rows step along `z` and columns along `x`. The source and
//! destination vectors are relative to the centroid of mirror `(i, j)`; their
//! sign conventions are kept exactly as published (the source vector points
//! down, the destination vector's `y` component is `y_IRS - y_d`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// 1-based `(row, column)` of a mirror element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MirrorIndex {
    pub i: usize,
    pub j: usize,
}

impl MirrorIndex {
    pub const fn new(i: usize, j: usize) -> Self {
        MirrorIndex { i, j }
    }

    /// Row-major position in an `n x n` array.
    pub fn flat(self, n: usize) -> usize {
        (self.i - 1) * n + (self.j - 1)
    }

    pub fn from_flat(k: usize, n: usize) -> Self {
        MirrorIndex { i: k / n + 1, j: k % n + 1 }
    }
}

/// Mirror array mounted on the roadside unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsConfig {
    /// Mirrors per side.
    pub n_m: usize,
    pub l_m: f64,
    pub w_m: f64,
    /// Mirror reflectivity.
    pub rho_m: f64,
    /// RSU height.
    pub y_irs: f64,
    /// Source-to-array offset along x.
    pub x_s: f64,
    /// Source-to-array offset along z.
    pub z_s: f64,
}

impl IrsConfig {
    /// Places the array so that the source vehicle sits `d_sr` from it,
    /// i.e. `z_s = d_sr + n_m * w_m`.
    pub fn at_source_distance(
        n_m: usize,
        l_m: f64,
        w_m: f64,
        rho_m: f64,
        y_irs: f64,
        x_s: f64,
        d_sr: f64,
    ) -> Self {
        IrsConfig { n_m, l_m, w_m, rho_m, y_irs, x_s, z_s: d_sr + n_m as f64 * w_m }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_m < 1 {
            return Err(Error::validation("irs.n_m", "must be >= 1"));
        }
        positive("irs.l_m", self.l_m)?;
        positive("irs.w_m", self.w_m)?;
        positive("irs.y_irs", self.y_irs)?;
        if !(0.0..=1.0).contains(&self.rho_m) {
            return Err(Error::validation(
                "irs.rho_m",
                format!("must lie in [0, 1] (got {})", self.rho_m),
            ));
        }
        finite("irs.x_s", self.x_s)?;
        finite("irs.z_s", self.z_s)
    }

    pub fn check_index(&self, idx: MirrorIndex) -> Result<()> {
        if idx.i == 0 || idx.j == 0 || idx.i > self.n_m || idx.j > self.n_m {
            return Err(Error::IndexOutOfBounds { i: idx.i, j: idx.j, n: self.n_m });
        }
        Ok(())
    }

    fn column_offset(&self, j: usize) -> f64 {
        self.x_s + self.w_m / 2.0 + (j as f64 - 1.0) * self.w_m
    }

    fn row_offset(&self, i: usize) -> f64 {
        self.z_s + self.l_m / 2.0 + (i as f64 - 1.0) * self.l_m
    }

    pub fn mirror_count(&self) -> usize {
        self.n_m * self.n_m
    }
}

/// User-facing placement of the two vehicles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    pub d_sr: f64,
    pub d_rd: f64,
    pub h_tx: f64,
    pub h_rx: f64,
    /// Destination receiver distance past the array's near edge along z.
    pub dest_z_offset: f64,
    /// Source aperture width (x) and length (y).
    pub w_s: f64,
    pub l_s: f64,
}

/// Resolved source/destination placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub d_sr: f64,
    pub d_rd: f64,
    pub h_tx: f64,
    pub h_rx: f64,
    pub x_d: f64,
    pub z_d: f64,
    pub w_s: f64,
    pub l_s: f64,
}

impl LinkGeometry {
    /// Derives `x_d` and `z_d` so that `d_RD = x_d - (x_s + n_m l_m)` and the
    /// destination sits `dest_z_offset` beyond `z_s`. `cfg` must already have
    /// been placed at `p.d_sr` (see [`IrsConfig::at_source_distance`]).
    pub fn build(cfg: &IrsConfig, p: &LinkParams) -> Result<Self> {
        positive("geometry.d_sr", p.d_sr)?;
        positive("geometry.d_rd", p.d_rd)?;
        positive("geometry.h_tx", p.h_tx)?;
        positive("geometry.h_rx", p.h_rx)?;
        finite("geometry.dest_z_offset", p.dest_z_offset)?;
        non_negative("geometry.source_width", p.w_s)?;
        non_negative("geometry.source_length", p.l_s)?;
        let n = cfg.n_m as f64;
        let implied = cfg.z_s - n * cfg.w_m;
        if (implied - p.d_sr).abs() > 1e-9 * p.d_sr.max(1.0) {
            return Err(Error::validation(
                "geometry.d_sr",
                format!("inconsistent with irs.z_s: z_s - n_m w_m = {implied}, d_sr = {}", p.d_sr),
            ));
        }
        Ok(LinkGeometry {
            d_sr: p.d_sr,
            d_rd: p.d_rd,
            h_tx: p.h_tx,
            h_rx: p.h_rx,
            x_d: p.d_rd + cfg.x_s + n * cfg.l_m,
            z_d: cfg.z_s + p.dest_z_offset,
            w_s: p.w_s,
            l_s: p.l_s,
        })
    }
}

pub(crate) fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(key, format!("must be > 0 (got {v})")))
    }
}

pub(crate) fn non_negative(key: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(key, format!("must be >= 0 (got {v})")))
    }
}

pub(crate) fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(key, format!("must be finite (got {v})")))
    }
}

/// Vector from mirror `(i, j)` to the source center.
pub fn source_vector(cfg: &IrsConfig, lg: &LinkGeometry, idx: MirrorIndex) -> Result<Vec3> {
    cfg.check_index(idx)?;
    Ok(Vec3::new(
        -cfg.column_offset(idx.j),
        -(cfg.y_irs - lg.h_tx),
        -cfg.row_offset(idx.i),
    ))
}

pub fn mirror_centroid(cfg: &IrsConfig, idx: MirrorIndex) -> Result<Vec3> {
    cfg.check_index(idx)?;
    Ok(Vec3::new(cfg.column_offset(idx.j), 0.0, cfg.row_offset(idx.i)))
}

/// Vector from mirror `(i, j)` to the destination receiver.
pub fn destination_vector(cfg: &IrsConfig, lg: &LinkGeometry, idx: MirrorIndex) -> Result<Vec3> {
    cfg.check_index(idx)?;
    Ok(Vec3::new(
        lg.x_d - cfg.column_offset(idx.j),
        -(lg.h_rx - cfg.y_irs),
        lg.z_d - cfg.row_offset(idx.i),
    ))
}

/// Unit normal bisecting the directions from `r` to `s` and from `r` to `d`,
/// so a ray from `s` reflects at `r` toward `d`.
pub fn mirror_normal(s: Vec3, r: Vec3, d: Vec3) -> Result<Vec3> {
    let to_s = (s - r)
        .try_normalize()
        .ok_or_else(|| Error::degenerate("source coincides with mirror centroid"))?;
    let to_d = (d - r)
        .try_normalize()
        .ok_or_else(|| Error::degenerate("destination coincides with mirror centroid"))?;
    let denom2 = 2.0 + 2.0 * to_s.dot(to_d);
    if denom2 <= 1e-24 {
        return Err(Error::degenerate("incidence and reflection directions are antiparallel"));
    }
    Ok((to_s + to_d) / denom2.sqrt())
}

/// Mirror tilt angles: `beta` about z, `alpha` about x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorOrientation {
    pub alpha: f64,
    pub beta: f64,
    pub normal: Vec3,
}

impl MirrorOrientation {
    /// Inverse of [`orientation_angles`]; `upper` selects the `+y` hemisphere
    /// for the normal, which the angles alone cannot distinguish.
    pub fn normal_from_angles(alpha: f64, beta: f64, upper: bool) -> Vec3 {
        let nz = beta.sin();
        let nx = (alpha * beta.cos()).sin();
        let ny = (1.0 - nx * nx - nz * nz).max(0.0).sqrt();
        Vec3::new(nx, if upper { ny } else { -ny }, nz)
    }

    pub fn rebuilt_normal(&self) -> Vec3 {
        Self::normal_from_angles(self.alpha, self.beta, self.normal.y >= 0.0)
    }
}

pub fn orientation_angles(normal: Vec3) -> Result<MirrorOrientation> {
    let sb = normal.dot(Vec3::E3);
    if !(sb.abs() < 1.0) {
        return Err(Error::GimbalDegenerate(normal.to_array()));
    }
    let beta = sb.asin();
    let cb = beta.cos();
    if cb <= 1e-12 {
        return Err(Error::GimbalDegenerate(normal.to_array()));
    }
    let alpha = normal.dot(Vec3::E1).clamp(-1.0, 1.0).asin() / cb;
    Ok(MirrorOrientation { alpha, beta, normal })
}

/// Pre-reflection image of `d`: the ray leaving `r` toward `d`, reflected
/// about `normal`, continued to the source plane `z = s.z`.
pub fn preimage_point(s: Vec3, r: Vec3, d: Vec3, normal: Vec3) -> Result<Vec3> {
    let to_d = (d - r)
        .try_normalize()
        .ok_or_else(|| Error::degenerate("destination coincides with reflection point"))?;
    let cos_theta = normal.dot(to_d);
    let dir = 2.0 * cos_theta * normal - to_d;
    if dir.z.abs() < 1e-15 {
        return Err(Error::NoIntersection);
    }
    let t = (s.z - r.z) / dir.z;
    let p = r + t * dir;
    Ok(Vec3::new(p.x, p.y, s.z))
}

/// Everything about one aimed mirror needed by the irradiance integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorFrame {
    pub index: MirrorIndex,
    pub centroid: Vec3,
    /// Absolute source position (centroid + source vector).
    pub source: Vec3,
    /// Absolute destination position (centroid + destination vector).
    pub destination: Vec3,
    pub normal: Vec3,
    /// In-plane axis of the local `x''` coordinate (spans `l_m`).
    pub axis_x: Vec3,
    /// In-plane axis of the local `z''` coordinate (spans `w_m`).
    pub axis_z: Vec3,
}

impl MirrorFrame {
    pub fn new(cfg: &IrsConfig, lg: &LinkGeometry, idx: MirrorIndex) -> Result<Self> {
        let centroid = mirror_centroid(cfg, idx)?;
        let source = centroid + source_vector(cfg, lg, idx)?;
        let destination = centroid + destination_vector(cfg, lg, idx)?;
        let normal = mirror_normal(source, centroid, destination)?;
        // local z'' follows the global z axis tilted into the mirror plane
        let axis_z = (Vec3::E3 - Vec3::E3.dot(normal) * normal)
            .try_normalize()
            .ok_or_else(|| Error::degenerate("mirror normal parallel to z"))?;
        let axis_x = normal.cross(axis_z);
        Ok(MirrorFrame { index: idx, centroid, source, destination, normal, axis_x, axis_z })
    }

    /// Point on the mirror surface at local coordinates `(x'', z'')`.
    pub fn surface_point(&self, x: f64, z: f64) -> Vec3 {
        self.centroid + x * self.axis_x + z * self.axis_z
    }

    pub fn orientation(&self) -> Result<MirrorOrientation> {
        orientation_angles(self.normal)
    }
}
