use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::positive;

/// Receiver front end shared by all three schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticsConfig {
    /// Photodetector area, m^2.
    pub a_r: f64,
    /// Optical filter gain T.
    pub filter_gain: f64,
    /// Concentrator refractive index n.
    pub refractive_index: f64,
    /// Half field of view, radians.
    pub psi_c: f64,
    /// Lambertian order m of the source.
    pub lambertian_order: f64,
    /// LED current-to-light conversion efficiency.
    pub eta: f64,
    /// Photodetector responsivity, A/W.
    pub responsivity: f64,
}

impl OpticsConfig {
    pub fn validate(&self) -> Result<()> {
        positive("optics.a_r", self.a_r)?;
        positive("optics.filter_gain", self.filter_gain)?;
        positive("optics.eta", self.eta)?;
        positive("optics.responsivity", self.responsivity)?;
        if !(self.refractive_index >= 1.0 && self.refractive_index.is_finite()) {
            return Err(Error::validation(
                "optics.refractive_index",
                format!("must be >= 1 (got {})", self.refractive_index),
            ));
        }
        if !(self.psi_c > 0.0 && self.psi_c <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::validation(
                "optics.fov_half_deg",
                format!("must lie in (0, 90] degrees (got {})", self.psi_c.to_degrees()),
            ));
        }
        if !(self.lambertian_order >= 1.0 && self.lambertian_order.is_finite()) {
            return Err(Error::validation(
                "optics.lambertian_order",
                format!("must be >= 1 (got {})", self.lambertian_order),
            ));
        }
        Ok(())
    }
}

/// Lambertian order from the LED semi-angle at half power.
pub fn lambertian_order(semi_angle: f64) -> f64 {
    -std::f64::consts::LN_2 / semi_angle.cos().ln()
}

/// Non-imaging concentrator gain: `n^2 / sin^2(psi_c)` inside the field of
/// view (boundary included), zero outside.
pub fn concentrator_gain(theta: f64, oc: &OpticsConfig) -> f64 {
    if (0.0..=oc.psi_c).contains(&theta) {
        let s = oc.psi_c.sin();
        oc.refractive_index * oc.refractive_index / (s * s)
    } else {
        0.0
    }
}
