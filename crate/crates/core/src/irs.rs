//! Mirror-array IRS channel gain.
//!
//! Each mirror's irradiance integral runs over the part of the mirror whose
//! pre-reflection image of the destination falls inside the source aperture.
//! For a flat mirror every reflected ray through the mirror appears to come
//! from `D'`, the mirror image of the destination, so the map from the mirror
//! surface to the source plane is a central projection through `D'`. That
//! projection takes the mirror rectangle to a quadrilateral; clipping it
//! against the aperture rectangle gives the exact support of the indicator.
//! The integral is then evaluated in source-plane coordinates over that
//! convex polygon, with the area Jacobian of the projection.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{IrsConfig, LinkGeometry, MirrorFrame, MirrorIndex};
use crate::optics::{concentrator_gain, OpticsConfig};
use crate::quadrature::{clip_to_rect, integrate_convex_polygon, polygon_area, Point2, QuadratureSpec};
use crate::vec3::Vec3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsLinkResult {
    pub n_m: usize,
    /// Channel gain summed over all mirrors.
    pub gain: f64,
    /// Row-major `n_m x n_m` irradiance integrals.
    pub per_mirror_irradiance: Vec<f64>,
    /// Row-major per-mirror gain terms; `gain` is their index-order sum.
    pub per_mirror_gain: Vec<f64>,
    /// Fraction of mirrors with an empty lit region.
    pub blocked_fraction: f64,
}

impl IrsLinkResult {
    pub fn irradiance(&self, idx: MirrorIndex) -> f64 {
        self.per_mirror_irradiance[idx.flat(self.n_m)]
    }

    /// Electrical signal power for transmit power `p_tx`.
    pub fn received_power(&self, oc: &OpticsConfig, p_tx: f64) -> f64 {
        irs_received_power(self.gain, oc, p_tx)
    }
}

/// Per-mirror lit region in the source plane.
struct SourcePlaneMap {
    frame: MirrorFrame,
    image: Vec3,
    plane_z: f64,
}

impl SourcePlaneMap {
    fn new(frame: MirrorFrame) -> Self {
        let rel = frame.destination - frame.centroid;
        let image = frame.destination - 2.0 * rel.dot(frame.normal) * frame.normal;
        SourcePlaneMap { frame, image, plane_z: frame.source.z }
    }

    /// Where the reflected ray through mirror point `p` meets the source plane.
    fn project(&self, p: Vec3) -> Result<Point2> {
        let dir = p - self.image;
        if dir.z.abs() < 1e-15 {
            return Err(Error::NoIntersection);
        }
        let t = (self.plane_z - self.image.z) / dir.z;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NoIntersection);
        }
        let q = self.image + t * dir;
        Ok([q.x, q.y])
    }

    /// Mirror point seen through source-plane point `q`, and `dA_mirror / dA_source`.
    fn lift(&self, q: Point2) -> (Vec3, f64) {
        let w = Vec3::new(q[0], q[1], self.plane_z) - self.image;
        let wn = w.dot(self.frame.normal);
        let s = (self.frame.centroid - self.image).dot(self.frame.normal) / wn;
        let p = self.image + s * w;
        (p, s * s * (w.z / wn).abs())
    }

    fn mirror_outline(&self, cfg: &IrsConfig) -> Result<Vec<Point2>> {
        let (hx, hz) = (cfg.l_m / 2.0, cfg.w_m / 2.0);
        [(-hx, -hz), (hx, -hz), (hx, hz), (-hx, hz)]
            .iter()
            .map(|&(x, z)| self.project(self.frame.surface_point(x, z)))
            .collect()
    }
}

/// `cos^m` source radiance term times the geometric kernel at mirror point `p`.
fn integrand(frame: &MirrorFrame, m: f64, p: Vec3) -> f64 {
    let to_d = frame.destination - p;
    let rx_cos = to_d.z;
    let mirror_cos = frame.normal.dot(to_d);
    if rx_cos <= 0.0 || mirror_cos <= 0.0 {
        return 0.0;
    }
    let from_s = p - frame.source;
    let cos_emit = from_s.z / from_s.norm();
    if cos_emit <= 0.0 {
        return 0.0;
    }
    let r2 = to_d.norm_squared();
    cos_emit.powf(m) * rx_cos * mirror_cos / (r2 * r2)
}

#[derive(Debug, Clone, Copy)]
struct MirrorContribution {
    irradiance: f64,
    term: f64,
    lit: bool,
}

fn mirror_contribution(
    cfg: &IrsConfig,
    lg: &LinkGeometry,
    oc: &OpticsConfig,
    idx: MirrorIndex,
    rule: &[(f64, f64)],
) -> Result<MirrorContribution> {
    let frame = MirrorFrame::new(cfg, lg, idx)?;
    let map = SourcePlaneMap::new(frame);
    let outline = map.mirror_outline(cfg)?;
    let s = frame.source;
    let lit = clip_to_rect(
        &outline,
        [s.x - lg.w_s / 2.0, s.y - lg.l_s / 2.0],
        [s.x + lg.w_s / 2.0, s.y + lg.l_s / 2.0],
    );
    let area = polygon_area(&lit).abs();
    if area == 0.0 || lit.len() < 3 {
        return Ok(MirrorContribution { irradiance: 0.0, term: 0.0, lit: false });
    }
    let m = oc.lambertian_order;
    let integral = integrate_convex_polygon(&lit, rule, |q| {
        let (p, jac) = map.lift(q);
        integrand(&frame, m, p) * jac
    });
    let irradiance = (m + 1.0) * cfg.rho_m / (2.0 * PI) * integral;

    let to_d = frame.destination - frame.centroid;
    let cos_rx = to_d.z / to_d.norm();
    let theta = cos_rx.clamp(-1.0, 1.0).acos();
    let term = oc.eta * oc.a_r * oc.filter_gain * concentrator_gain(theta, oc) * irradiance * cos_rx;
    Ok(MirrorContribution { irradiance, term: term.max(0.0), lit: true })
}

/// Irradiance integral of one mirror (includes the `(m+1) rho_M / 2 pi` prefactor).
pub fn mirror_irradiance(
    cfg: &IrsConfig,
    lg: &LinkGeometry,
    oc: &OpticsConfig,
    idx: MirrorIndex,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    cfg.check_index(idx)?;
    Ok(mirror_contribution(cfg, lg, oc, idx, &quad.unit_rule())?.irradiance)
}

pub fn irs_channel_gain(
    cfg: &IrsConfig,
    lg: &LinkGeometry,
    oc: &OpticsConfig,
    quad: &QuadratureSpec,
) -> Result<IrsLinkResult> {
    irs_channel_gain_with(cfg, lg, oc, quad, Exec::default())
}

/// Sums every mirror's gain term; mirrors are evaluated under `exec` and
/// reduced in row-major order, so the result does not depend on `exec`.
pub fn irs_channel_gain_with(
    cfg: &IrsConfig,
    lg: &LinkGeometry,
    oc: &OpticsConfig,
    quad: &QuadratureSpec,
    exec: Exec,
) -> Result<IrsLinkResult> {
    cfg.validate()?;
    quad.validate()?;
    let n = cfg.n_m;
    let rule = quad.unit_rule();
    let parts = exec.try_map(n * n, |k| {
        mirror_contribution(cfg, lg, oc, MirrorIndex::from_flat(k, n), &rule)
    })?;
    let gain = parts.iter().map(|c| c.term).sum();
    let blocked = parts.iter().filter(|c| !c.lit).count();
    Ok(IrsLinkResult {
        n_m: n,
        gain,
        per_mirror_irradiance: parts.iter().map(|c| c.irradiance).collect(),
        per_mirror_gain: parts.iter().map(|c| c.term).collect(),
        blocked_fraction: blocked as f64 / (n * n) as f64,
    })
}

/// Electrical received signal power `(R G)^2 P`.
pub fn irs_received_power(gain: f64, oc: &OpticsConfig, p_tx: f64) -> f64 {
    let a = oc.responsivity * gain;
    a * a * p_tx
}
