//! Scenario file: every model parameter in one sectioned TOML document.
//!
//! Unknown keys are rejected at every level. Angles are in degrees on disk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{IrsConfig, LinkGeometry, LinkParams};
use crate::metrics::NoiseModel;
use crate::nrr::{NrrConfig, RoadPatch};
use crate::optics::OpticsConfig;
use crate::quadrature::{QuadratureRule, QuadratureSpec};
use crate::relay::RelayConfig;

pub const SECTIONS: [&str; 7] = ["irs", "relay", "nrr", "optics", "geometry", "noise", "sweep"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IrsSection {
    pub n_m: usize,
    pub l_m: f64,
    pub w_m: f64,
    pub rho_m: f64,
    pub y_irs: f64,
    pub x_s: f64,
    /// Headlamp transmit power, W.
    pub p_tx: f64,
    pub quad_points: usize,
    pub quad_rule: QuadratureRule,
}

impl Default for IrsSection {
    fn default() -> Self {
        IrsSection {
            n_m: 20,
            l_m: 0.01,
            w_m: 0.01,
            rho_m: 0.8,
            y_irs: 2.0,
            x_s: -1.75,
            p_tx: 20.0,
            quad_points: 16,
            quad_rule: QuadratureRule::MidpointComposite,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaySection {
    pub p_sr: f64,
    pub p_rd: f64,
    /// Defaults to `irs.y_irs` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_relay: Option<f64>,
    pub mu: f64,
}

impl Default for RelaySection {
    fn default() -> Self {
        RelaySection { p_sr: 10.0, p_rd: 10.0, y_relay: None, mu: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NrrSection {
    pub intensity_cd: f64,
    pub ler: f64,
    pub rho_r: f64,
    pub patch_inset: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patch: Option<RoadPatch>,
    pub grid: usize,
    pub grade_scale: f64,
}

impl Default for NrrSection {
    fn default() -> Self {
        NrrSection {
            intensity_cd: 60000.0,
            ler: 150.0,
            rho_r: 0.24,
            patch_inset: 0.5,
            patch: None,
            grid: 64,
            grade_scale: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpticsSection {
    pub a_r: f64,
    pub filter_gain: f64,
    pub refractive_index: f64,
    pub fov_half_deg: f64,
    pub lambertian_order: f64,
    pub eta: f64,
    pub responsivity: f64,
}

impl Default for OpticsSection {
    fn default() -> Self {
        OpticsSection {
            a_r: 1e-4,
            filter_gain: 1.0,
            refractive_index: 1.5,
            fov_half_deg: 60.0,
            lambertian_order: 2.0,
            eta: 0.2,
            responsivity: 0.54,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub d_sr: f64,
    pub d_rd: f64,
    pub h_tx: f64,
    pub h_rx: f64,
    pub dest_z_offset: f64,
    pub source_width: f64,
    pub source_length: f64,
}

impl Default for GeometrySection {
    fn default() -> Self {
        GeometrySection {
            d_sr: 100.0,
            d_rd: 10.0,
            h_tx: 0.8,
            h_rx: 0.8,
            dest_z_offset: 10.0,
            source_width: 0.01,
            source_length: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub sigma2: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        NoiseSection { sigma2: 1e-22 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub d_sr_start: f64,
    pub d_sr_stop: f64,
    pub d_sr_step: f64,
    pub n_m_start: usize,
    pub n_m_stop: usize,
    pub n_m_step: usize,
    /// Array sizes plotted against distance.
    pub n_m_series: Vec<usize>,
    /// Distances plotted against array size.
    pub d_sr_series: Vec<f64>,
    pub surface_d_sr_step: f64,
    pub surface_n_m_stop: usize,
    pub target_ber: f64,
    pub range_floor: f64,
    pub range_ceiling: f64,
    pub range_rel_tol: f64,
    /// Largest array size tried by the crossover scan.
    pub nm_max: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            d_sr_start: 20.0,
            d_sr_stop: 500.0,
            d_sr_step: 5.0,
            n_m_start: 1,
            n_m_stop: 100,
            n_m_step: 1,
            n_m_series: vec![5, 20, 50],
            d_sr_series: vec![100.0, 200.0],
            surface_d_sr_step: 40.0,
            surface_n_m_stop: 30,
            target_ber: 1e-3,
            range_floor: 2.0,
            range_ceiling: 20000.0,
            range_rel_tol: 1e-3,
            nm_max: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub irs: IrsSection,
    pub relay: RelaySection,
    pub nrr: NrrSection,
    pub optics: OpticsSection,
    pub geometry: GeometrySection,
    pub noise: NoiseSection,
    pub sweep: SweepSection,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| schema_error(text, &e))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Applies `key=value`. `key` is `section.field` or a field name that is
    /// unique across sections; matching ignores case. `value` is a TOML value,
    /// or a bare string.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment.split_once('=').ok_or_else(|| Error::Schema {
            path: assignment.to_string(),
            reason: "expected key=value".into(),
        })?;
        let (section, field) = self.resolve_key(key.trim())?;
        let value = parse_value(raw.trim());
        let mut doc = toml::Table::try_from(&*self).expect("scenario serializes");
        let path = format!("{section}.{field}");
        doc.get_mut(&section)
            .and_then(|v| v.as_table_mut())
            .expect("section present")
            .insert(field, value);
        *self = toml::Value::Table(doc).try_into().map_err(|e: toml::de::Error| Error::Schema {
            path,
            reason: e.message().trim().to_string(),
        })?;
        Ok(())
    }

    fn resolve_key(&self, key: &str) -> Result<(String, String)> {
        let key = key.to_ascii_lowercase();
        let unknown = || Error::Schema { path: key.clone(), reason: "unknown key".into() };
        let known = Scenario::known_fields();
        if let Some((s, f)) = key.split_once('.') {
            if known.iter().any(|(ks, kf)| ks == s && kf == f) {
                return Ok((s.to_string(), f.to_string()));
            }
            return Err(unknown());
        }
        let hits: Vec<_> = known.iter().filter(|(_, f)| *f == key).collect();
        match hits.as_slice() {
            [(s, f)] => Ok((s.clone(), f.clone())),
            [] => Err(unknown()),
            _ => Err(Error::Schema {
                path: key.clone(),
                reason: format!(
                    "ambiguous; qualify with one of {}",
                    hits.iter().map(|(s, f)| format!("{s}.{f}")).collect::<Vec<_>>().join(", ")
                ),
            }),
        }
    }

    /// `(section, field)` for every settable key, including optional ones.
    pub fn known_fields() -> Vec<(String, String)> {
        let mut full = Scenario::default();
        full.relay.y_relay = Some(0.0);
        full.nrr.patch = Some(RoadPatch { x_min: 0.0, x_max: 1.0, z_min: 0.0, z_max: 1.0 });
        let doc = toml::Table::try_from(&full).expect("scenario serializes");
        let mut out = Vec::new();
        for s in SECTIONS {
            for f in doc[s].as_table().expect("section table").keys() {
                out.push((s.to_string(), f.clone()));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let irs = self.irs_config();
        irs.validate()?;
        self.quadrature().validate()?;
        crate::geometry::positive("irs.p_tx", self.irs.p_tx)?;
        self.optics().validate()?;
        self.noise().validate()?;
        self.relay_config().validate()?;
        let lg = self.link_geometry()?;
        let nc = self.nrr_config();
        nc.validate()?;
        nc.resolve_patch(&lg)?;
        self.validate_sweep()
    }

    fn validate_sweep(&self) -> Result<()> {
        let s = &self.sweep;
        crate::sweep::SweepRange::new(s.d_sr_start, s.d_sr_stop, s.d_sr_step).validate("sweep.d_sr")?;
        crate::sweep::SweepRange::new(s.n_m_start as f64, s.n_m_stop as f64, s.n_m_step as f64)
            .validate("sweep.n_m")?;
        if s.n_m_start < 1 {
            return Err(Error::validation("sweep.n_m_start", "must be >= 1"));
        }
        if s.n_m_series.iter().any(|&n| n < 1) {
            return Err(Error::validation("sweep.n_m_series", "entries must be >= 1"));
        }
        for &d in &s.d_sr_series {
            crate::geometry::positive("sweep.d_sr_series", d)?;
        }
        crate::geometry::positive("sweep.surface_d_sr_step", s.surface_d_sr_step)?;
        if s.surface_n_m_stop < 1 {
            return Err(Error::validation("sweep.surface_n_m_stop", "must be >= 1"));
        }
        if !(s.target_ber > 0.0 && s.target_ber < 0.5 || s.target_ber == 0.5) {
            return Err(Error::validation(
                "sweep.target_ber",
                format!("must lie in (0, 0.5] (got {})", s.target_ber),
            ));
        }
        crate::geometry::positive("sweep.range_floor", s.range_floor)?;
        if !(s.range_ceiling > s.range_floor && s.range_ceiling.is_finite()) {
            return Err(Error::validation("sweep.range_ceiling", "must exceed sweep.range_floor"));
        }
        if !(s.range_rel_tol > 0.0 && s.range_rel_tol < 0.1) {
            return Err(Error::validation("sweep.range_rel_tol", "must lie in (0, 0.1)"));
        }
        if s.nm_max < 1 {
            return Err(Error::validation("sweep.nm_max", "must be >= 1"));
        }
        Ok(())
    }

    pub fn with_d_sr(&self, d_sr: f64) -> Scenario {
        let mut s = self.clone();
        s.geometry.d_sr = d_sr;
        s
    }

    pub fn with_n_m(&self, n_m: usize) -> Scenario {
        let mut s = self.clone();
        s.irs.n_m = n_m;
        s
    }

    pub fn irs_config(&self) -> IrsConfig {
        let i = &self.irs;
        IrsConfig::at_source_distance(i.n_m, i.l_m, i.w_m, i.rho_m, i.y_irs, i.x_s, self.geometry.d_sr)
    }

    pub fn link_params(&self) -> LinkParams {
        let g = &self.geometry;
        LinkParams {
            d_sr: g.d_sr,
            d_rd: g.d_rd,
            h_tx: g.h_tx,
            h_rx: g.h_rx,
            dest_z_offset: g.dest_z_offset,
            w_s: g.source_width,
            l_s: g.source_length,
        }
    }

    pub fn link_geometry(&self) -> Result<LinkGeometry> {
        LinkGeometry::build(&self.irs_config(), &self.link_params())
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec::new(self.irs.quad_points, self.irs.quad_rule)
    }

    pub fn optics(&self) -> OpticsConfig {
        let o = &self.optics;
        OpticsConfig {
            a_r: o.a_r,
            filter_gain: o.filter_gain,
            refractive_index: o.refractive_index,
            psi_c: o.fov_half_deg.to_radians(),
            lambertian_order: o.lambertian_order,
            eta: o.eta,
            responsivity: o.responsivity,
        }
    }

    pub fn relay_config(&self) -> RelayConfig {
        let r = &self.relay;
        RelayConfig {
            p_sr: r.p_sr,
            p_rd: r.p_rd,
            y_relay: r.y_relay.unwrap_or(self.irs.y_irs),
            mu: r.mu,
            sigma2: self.noise.sigma2,
        }
    }

    pub fn nrr_config(&self) -> NrrConfig {
        let n = &self.nrr;
        NrrConfig {
            intensity_cd: n.intensity_cd,
            ler: n.ler,
            rho_r: n.rho_r,
            patch_inset: n.patch_inset,
            patch: n.patch,
            grid: n.grid,
            grade_scale: n.grade_scale,
        }
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel { sigma2: self.noise.sigma2 }
    }
}

fn parse_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Turns a TOML error into a schema error whose path names the offending key.
fn schema_error(text: &str, e: &toml::de::Error) -> Error {
    let reason = e.message().trim().to_string();
    let Some(span) = e.span() else {
        return Error::Schema { path: "<document>".into(), reason };
    };
    let before = &text[..span.start.min(text.len())];
    let line_start = before.rfind('\n').map_or(0, |k| k + 1);
    let line_end = text[line_start..].find('\n').map_or(text.len(), |k| line_start + k);
    let line = text[line_start..line_end].trim();
    let section = before
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('[') && l.ends_with(']'))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').trim().to_string());
    let key = line.split_once('=').map(|(k, _)| k.trim().to_string());
    let path = match (section, key) {
        (_, _) if line.starts_with('[') => line.trim_matches(|c| c == '[' || c == ']').trim().to_string(),
        (Some(s), Some(k)) => format!("{s}.{k}"),
        (None, Some(k)) => k,
        (Some(s), None) => s,
        (None, None) => "<document>".into(),
    };
    Error::Schema { path, reason }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Scenario::default().validate().unwrap();
    }

    #[test]
    fn empty_document_is_default() {
        assert_eq!(Scenario::from_toml_str("").unwrap(), Scenario::default());
    }

    #[test]
    fn unknown_key_names_its_path() {
        let e = Scenario::from_toml_str("[irs]\nn_m = 5\nbogus = 1\n").unwrap_err();
        match e {
            Error::Schema { path, .. } => assert_eq!(path, "irs.bogus"),
            other => panic!("{other:?}"),
        }
        let e = Scenario::from_toml_str("[extra]\nx = 1\n").unwrap_err();
        assert!(matches!(e, Error::Schema { .. }));
    }

    #[test]
    fn wrong_type_is_schema_error() {
        let e = Scenario::from_toml_str("[geometry]\nd_sr = \"far\"\n").unwrap_err();
        match e {
            Error::Schema { path, .. } => assert_eq!(path, "geometry.d_sr"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides() {
        let mut s = Scenario::default();
        s.set("d_SR=250").unwrap();
        assert_eq!(s.geometry.d_sr, 250.0);
        s.set("irs.n_m = 7").unwrap();
        assert_eq!(s.irs.n_m, 7);
        s.set("quad_rule=gauss").unwrap();
        assert_eq!(s.irs.quad_rule, QuadratureRule::GaussTensor);
        s.set("y_relay=3.5").unwrap();
        assert_eq!(s.relay_config().y_relay, 3.5);
        assert!(matches!(s.set("nope=1"), Err(Error::Schema { .. })));
        assert!(matches!(s.set("n_m=2.5"), Err(Error::Schema { .. })));
        assert!(matches!(s.set("d_sr"), Err(Error::Schema { .. })));
        s.set("d_sr=-5").unwrap();
        match s.validate().unwrap_err() {
            Error::Validation { key, .. } => assert_eq!(key, "geometry.d_sr"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn relay_height_follows_array() {
        let mut s = Scenario::default();
        s.irs.y_irs = 4.0;
        assert_eq!(s.relay_config().y_relay, 4.0);
    }
}
