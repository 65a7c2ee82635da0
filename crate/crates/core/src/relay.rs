//! Amplify-and-forward optical relay baseline.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{positive, LinkGeometry};
use crate::optics::{concentrator_gain, OpticsConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelayConfig {
    /// Source transmit power, W.
    pub p_sr: f64,
    /// Relay transmit power, W.
    pub p_rd: f64,
    /// Relay mounting height, m.
    pub y_relay: f64,
    /// Path-loss exponent.
    pub mu: f64,
    /// Noise variance on each hop, W.
    pub sigma2: f64,
}

impl RelayConfig {
    pub fn validate(&self) -> Result<()> {
        positive("relay.p_sr", self.p_sr)?;
        positive("relay.p_rd", self.p_rd)?;
        positive("relay.y_relay", self.y_relay)?;
        positive("noise.sigma2", self.sigma2)?;
        if !(self.mu >= 1.0 && self.mu.is_finite()) {
            return Err(Error::validation("relay.mu", format!("must be >= 1 (got {})", self.mu)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayLinkResult {
    pub g_sr: f64,
    pub h_rd: f64,
    /// Electrical power at the relay input.
    pub p_relay: f64,
    /// Signal power at the destination.
    pub p_dest: f64,
    pub snr_af: f64,
    /// Relay-to-destination distance used in the path-loss term.
    pub d_d: f64,
}

/// Lambertian line-of-sight DC gain for emission angle `phi`, incidence
/// angle `psi` and distance `d`.
pub fn lambertian_gain(phi: f64, psi: f64, d: f64, oc: &OpticsConfig) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::SingularDistance(format!("hop distance {d}")));
    }
    if !(0.0..=oc.psi_c).contains(&psi) {
        return Ok(0.0);
    }
    let m = oc.lambertian_order;
    Ok((m + 1.0) * oc.a_r * phi.cos().powf(m) / (2.0 * PI * d * d)
        * oc.filter_gain
        * concentrator_gain(psi, oc)
        * psi.cos())
}

/// `(R G_SR)^2 P_SR`.
pub fn relay_input_power(g_sr: f64, rc: &RelayConfig, oc: &OpticsConfig) -> f64 {
    let a = oc.responsivity * g_sr;
    a * a * rc.p_sr
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfSnr {
    pub snr: f64,
    pub p_dest: f64,
}

/// End-to-end AF SNR for relay input power `p_relay` and second-hop gain
/// `h_rd`. Returns `f64::INFINITY` when the noise vanishes.
pub fn af_snr(p_relay: f64, h_rd: f64, rc: &RelayConfig, lg: &LinkGeometry, oc: &OpticsConfig) -> AfSnr {
    let d_d = second_hop_distance(rc, lg);
    let hop = rc.p_rd * (oc.responsivity * h_rd).powi(2);
    let p_dest = hop * p_relay;
    let s2 = rc.sigma2;
    let den = hop * s2 + d_d.powf(rc.mu) * (p_relay + s2) * s2;
    let snr = if den == 0.0 {
        if p_dest > 0.0 { f64::INFINITY } else { 0.0 }
    } else {
        p_dest / den
    };
    AfSnr { snr, p_dest }
}

fn second_hop_distance(rc: &RelayConfig, lg: &LinkGeometry) -> f64 {
    (rc.y_relay - lg.h_rx).hypot(lg.d_rd)
}

fn hop_gain(horizontal: f64, dh: f64, oc: &OpticsConfig) -> Result<f64> {
    let angle = dh.abs().atan2(horizontal);
    lambertian_gain(angle, angle, horizontal.hypot(dh), oc)
}

pub fn relay_link(lg: &LinkGeometry, rc: &RelayConfig, oc: &OpticsConfig) -> Result<RelayLinkResult> {
    rc.validate()?;
    let g_sr = hop_gain(lg.d_sr, rc.y_relay - lg.h_tx, oc)?;
    let h_rd = hop_gain(lg.d_rd, rc.y_relay - lg.h_rx, oc)?;
    let p_relay = relay_input_power(g_sr, rc, oc);
    let AfSnr { snr, p_dest } = af_snr(p_relay, h_rd, rc, lg, oc);
    Ok(RelayLinkResult { g_sr, h_rd, p_relay, p_dest, snr_af: snr, d_d: second_hop_distance(rc, lg) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optics() -> OpticsConfig {
        OpticsConfig {
            a_r: 1e-4,
            filter_gain: 1.0,
            refractive_index: 1.5,
            psi_c: 60f64.to_radians(),
            lambertian_order: 2.0,
            eta: 0.2,
            responsivity: 0.54,
        }
    }

    fn relay() -> RelayConfig {
        RelayConfig { p_sr: 10.0, p_rd: 10.0, y_relay: 2.0, mu: 2.0, sigma2: 1e-22 }
    }

    fn link(d_sr: f64, d_rd: f64) -> LinkGeometry {
        LinkGeometry { d_sr, d_rd, h_tx: 0.8, h_rx: 0.8, x_d: 0.0, z_d: 0.0, w_s: 0.01, l_s: 0.01 }
    }

    #[test]
    fn boresight_gain_value() {
        let g = lambertian_gain(0.0, 0.0, 10.0, &optics()).unwrap();
        assert!((g - 1.432e-6).abs() < 1e-9, "{g}");
    }

    #[test]
    fn outside_fov_and_zero_distance() {
        assert_eq!(lambertian_gain(0.0, 70f64.to_radians(), 10.0, &optics()).unwrap(), 0.0);
        assert!(matches!(lambertian_gain(0.0, 0.0, 0.0, &optics()), Err(Error::SingularDistance(_))));
        let g1 = lambertian_gain(0.2, 0.2, 5.0, &optics()).unwrap();
        let g2 = lambertian_gain(0.2, 0.2, 10.0, &optics()).unwrap();
        assert!((g1 / g2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn input_power() {
        let rc = relay();
        let p = relay_input_power(1e-6, &rc, &optics());
        assert!((p - 2.916e-12).abs() < 1e-24);
        assert_eq!(relay_input_power(0.0, &rc, &optics()), 0.0);
        let half = RelayConfig { p_sr: 5.0, ..rc };
        assert!((relay_input_power(1e-6, &half, &optics()) - p / 2.0).abs() < 1e-24);
    }

    #[test]
    fn snr_limits() {
        let rc = relay();
        let lg = link(100.0, 10.0);
        assert_eq!(af_snr(0.0, 1e-6, &rc, &lg, &optics()).snr, 0.0);
        let quiet = RelayConfig { sigma2: 0.0, ..rc.clone() };
        assert!(af_snr(1e-12, 1e-6, &quiet, &lg, &optics()).snr.is_infinite());
    }

    #[test]
    fn symmetric_hops() {
        let r = relay_link(&link(10.0, 10.0), &relay(), &optics()).unwrap();
        assert_eq!(r.g_sr, r.h_rd);
    }

    #[test]
    fn numerator_is_destination_power() {
        let rc = relay();
        let oc = optics();
        let r = relay_link(&link(80.0, 10.0), &rc, &oc).unwrap();
        let expect = rc.p_rd * (oc.responsivity * r.h_rd).powi(2) * r.p_relay;
        assert!((r.p_dest - expect).abs() <= 1e-15 * expect);
    }
}
