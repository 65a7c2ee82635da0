//! NLOS road-reflection baseline.
//!
//! Ground frame: the lanes meet at the origin, the transmitter's ground
//! projection is at `(0, 0, -d_SR)` (driving along z) and the receiver's at
//! `(d_RD, 0, 0)` (driving along x). Road points have `y = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{non_negative, positive, LinkGeometry};
use crate::optics::OpticsConfig;
use crate::quadrature::graded_midpoint;
use crate::vec3::Vec3;

/// Axis-aligned rectangle on the road plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadPatch {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl RoadPatch {
    /// The road between the two vehicles, kept `inset` away from both ground projections.
    pub fn between(lg: &LinkGeometry, inset: f64) -> Self {
        RoadPatch { x_min: inset, x_max: lg.d_rd - inset, z_min: -lg.d_sr + inset, z_max: -inset }
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min).max(0.0) * (self.z_max - self.z_min).max(0.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_max > self.x_min && self.z_max > self.z_min) {
            return Err(Error::validation("nrr.patch", format!("degenerate patch {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NrrConfig {
    /// Headlamp luminous intensity, cd (direction independent).
    pub intensity_cd: f64,
    /// Luminous efficacy of radiation, lm/W.
    pub ler: f64,
    pub rho_r: f64,
    /// Inset of the default patch from the vehicle projections, m.
    pub patch_inset: f64,
    /// Explicit patch; overrides the inset rectangle when set.
    pub patch: Option<RoadPatch>,
    /// Cells per axis.
    pub grid: usize,
    /// Width over which the mesh is graded toward the patch edges, m.
    pub grade_scale: f64,
}

impl NrrConfig {
    pub fn validate(&self) -> Result<()> {
        positive("nrr.intensity_cd", self.intensity_cd)?;
        positive("nrr.ler", self.ler)?;
        positive("nrr.grade_scale", self.grade_scale)?;
        non_negative("nrr.patch_inset", self.patch_inset)?;
        if !(0.0..=1.0).contains(&self.rho_r) {
            return Err(Error::validation("nrr.rho_r", format!("must lie in [0, 1] (got {})", self.rho_r)));
        }
        if self.grid < 2 {
            return Err(Error::validation("nrr.grid", format!("must be >= 2 (got {})", self.grid)));
        }
        Ok(())
    }

    pub fn resolve_patch(&self, lg: &LinkGeometry) -> Result<RoadPatch> {
        let p = self.patch.unwrap_or_else(|| RoadPatch::between(lg, self.patch_inset));
        p.validate()?;
        Ok(p)
    }
}

/// Received optical power per unit road area from point `point`.
pub fn nrr_differential_power(point: Vec3, lg: &LinkGeometry, nc: &NrrConfig, oc: &OpticsConfig) -> Result<f64> {
    let d_sr = point.x.hypot(point.z + lg.d_sr);
    let d_rd = (point.x - lg.d_rd).hypot(point.z);
    if d_sr < 1e-12 || d_rd < 1e-12 {
        return Err(Error::SingularDistance(format!(
            "road point ({}, {}) on a vehicle ground projection",
            point.x, point.z
        )));
    }
    let rx = d_rd.hypot(lg.h_rx);
    let sin_gamma = d_sr / d_sr.hypot(lg.h_tx);
    let cos_phi = lg.h_rx / rx;
    let cos_psi = d_rd / rx;
    Ok(nc.intensity_cd * sin_gamma * nc.rho_r * cos_phi * oc.a_r * cos_psi
        / (nc.ler * PI * d_sr * d_sr * d_rd * d_rd))
}

pub fn nrr_received_power(lg: &LinkGeometry, nc: &NrrConfig, oc: &OpticsConfig) -> Result<f64> {
    nrr_received_power_with(lg, nc, oc, Exec::default())
}

/// Tensor composite midpoint over the patch; rows are evaluated under `exec`
/// and reduced in order.
pub fn nrr_received_power_with(lg: &LinkGeometry, nc: &NrrConfig, oc: &OpticsConfig, exec: Exec) -> Result<f64> {
    nc.validate()?;
    let p = nc.resolve_patch(lg)?;
    let xs = graded_midpoint(p.x_min, p.x_max, nc.grid, nc.grade_scale);
    let zs = graded_midpoint(p.z_min, p.z_max, nc.grid, nc.grade_scale);
    let rows = exec.try_map(xs.len(), |k| {
        let (x, wx) = xs[k];
        let mut s = 0.0;
        for &(z, wz) in &zs {
            s += wz * nrr_differential_power(Vec3::new(x, 0.0, z), lg, nc, oc)?;
        }
        Ok::<_, Error>(wx * s)
    })?;
    Ok(rows.iter().sum())
}
