//! Single-point evaluation of any scheme from a scenario.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::irs::{irs_channel_gain_with, irs_received_power};
use crate::metrics::{ber_from_snr, BerResult};
use crate::nrr::{nrr_received_power_with, RoadPatch};
use crate::relay::{relay_link, RelayLinkResult};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Irs,
    Relay,
    Nrr,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Irs, Scheme::Relay, Scheme::Nrr];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Irs => "irs",
            Scheme::Relay => "relay",
            Scheme::Nrr => "nrr",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "irs" => Ok(Scheme::Irs),
            "relay" => Ok(Scheme::Relay),
            "nrr" => Ok(Scheme::Nrr),
            _ => Err(Error::validation("scheme", format!("expected irs, relay or nrr (got {s:?})"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SchemeDetail {
    Irs { n_m: usize, blocked_fraction: f64, p_tx_w: f64 },
    Relay(RelayLinkResult),
    Nrr { optical_power_w: f64, patch: RoadPatch },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub scheme: Scheme,
    /// IRS: array gain. Relay: product of the two hop gains. NRR: received
    /// optical power in W, since the headlamp is specified by intensity.
    pub gain: f64,
    /// Electrical signal power at the detector, W.
    pub received_power_w: f64,
    pub received_power_dbm: f64,
    pub snr: f64,
    pub ber: BerResult,
    pub detail: SchemeDetail,
}

pub fn dbm(power_w: f64) -> f64 {
    10.0 * (power_w / 1e-3).log10()
}

pub fn evaluate(scheme: Scheme, s: &Scenario) -> Result<LinkBudget> {
    evaluate_with(scheme, s, Exec::default())
}

pub fn evaluate_with(scheme: Scheme, s: &Scenario, exec: Exec) -> Result<LinkBudget> {
    s.validate()?;
    let oc = s.optics();
    let lg = s.link_geometry()?;
    let sigma2 = s.noise.sigma2;
    let (gain, power, snr, detail) = match scheme {
        Scheme::Irs => {
            let r = irs_channel_gain_with(&s.irs_config(), &lg, &oc, &s.quadrature(), exec)?;
            let p = irs_received_power(r.gain, &oc, s.irs.p_tx);
            let detail = SchemeDetail::Irs { n_m: r.n_m, blocked_fraction: r.blocked_fraction, p_tx_w: s.irs.p_tx };
            (r.gain, p, p / sigma2, detail)
        }
        Scheme::Relay => {
            let r = relay_link(&lg, &s.relay_config(), &oc)?;
            (r.g_sr * r.h_rd, r.p_dest, r.snr_af, SchemeDetail::Relay(r))
        }
        Scheme::Nrr => {
            let nc = s.nrr_config();
            let optical = nrr_received_power_with(&lg, &nc, &oc, exec)?;
            let p = (oc.responsivity * optical).powi(2);
            let detail = SchemeDetail::Nrr { optical_power_w: optical, patch: nc.resolve_patch(&lg)? };
            (optical, p, p / sigma2, detail)
        }
    };
    Ok(LinkBudget {
        scheme,
        gain,
        received_power_w: power,
        received_power_dbm: dbm(power),
        snr,
        ber: ber_from_snr(snr),
        detail,
    })
}
