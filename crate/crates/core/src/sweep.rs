//! Distance and array-size sweeps, the crossover scan and the maximum-range
//! solver.

use serde::{Deserialize, Serialize};

use crate::budget::{dbm, evaluate_with, Scheme};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    DSr,
    NM,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        SweepRange { start, stop, step }
    }

    pub fn validate(&self, key: &str) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::validation(
                key,
                format!("empty range: start {} must be below stop {}", self.start, self.stop),
            ));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::validation(key, format!("step must be > 0 (got {})", self.step)));
        }
        Ok(())
    }

    /// `start, start + step, ...` up to and including `stop`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub variable: SweepVariable,
    pub range: SweepRange,
    pub fixed: Scenario,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.range.validate("sweep.range")?;
        if self.variable == SweepVariable::NM {
            if self.range.start < 1.0 {
                return Err(Error::validation("sweep.range", "n_m must start at >= 1"));
            }
            for v in [self.range.start, self.range.stop, self.range.step] {
                if v.fract() != 0.0 {
                    return Err(Error::validation("sweep.range", format!("n_m steps must be integers (got {v})")));
                }
            }
        }
        self.fixed.validate()
    }

    fn scenario_at(&self, v: f64) -> Scenario {
        match self.variable {
            SweepVariable::DSr => self.fixed.with_d_sr(v),
            SweepVariable::NM => self.fixed.with_n_m(v as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub variable: f64,
    pub power_w: f64,
    pub power_dbm: f64,
    pub ber: f64,
    /// Set when this grid point could not be evaluated.
    pub error: Option<String>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_sweep_with(spec, Exec::default())
}

/// One row per grid point in grid order; failed points become error rows
/// with NaN columns.
pub fn run_sweep_with(spec: &SweepSpec, exec: Exec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let pts = spec.range.points();
    Ok(exec.map(pts.len(), |k| {
        let v = pts[k];
        match evaluate_with(spec.scheme, &spec.scenario_at(v), exec) {
            Ok(b) => SweepRow {
                variable: v,
                power_w: b.received_power_w,
                power_dbm: b.received_power_dbm,
                ber: b.ber.ber,
                error: None,
            },
            Err(e) => SweepRow {
                variable: v,
                power_w: f64::NAN,
                power_dbm: f64::NAN,
                ber: f64::NAN,
                error: Some(e.to_string()),
            },
        }
    }))
}

/// Smallest array size whose received power reaches the relay's at `d_sr`.
pub fn crossover_nm(d_sr: f64, fixed: &Scenario) -> Result<usize> {
    let at = fixed.with_d_sr(d_sr);
    at.validate()?;
    let relay = evaluate_with(Scheme::Relay, &at, Exec::default())?.received_power_w;
    for n in 1..=fixed.sweep.nm_max {
        let irs = evaluate_with(Scheme::Irs, &at.with_n_m(n), Exec::default())?.received_power_w;
        if irs >= relay {
            return Ok(n);
        }
    }
    Err(Error::NotFound(format!(
        "IRS power stays below the relay's {relay:e} W for n_m in 1..={} at d_sr = {d_sr} m",
        fixed.sweep.nm_max
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxRange {
    pub d_sr: f64,
    /// BER at `d_sr`.
    pub ber: f64,
    /// The target was never exceeded below the search ceiling.
    pub hit_ceiling: bool,
}

const SCAN_POINTS: usize = 48;

/// Largest `d_sr` with BER at or below `target`. A geometric scan from the
/// search floor to the ceiling brackets the crossing and checks that BER
/// crosses the target only once; bisection then narrows the bracket to the
/// relative tolerance.
pub fn max_range_for_ber(scheme: Scheme, target: f64, fixed: &Scenario) -> Result<MaxRange> {
    fixed.validate()?;
    let sw = &fixed.sweep;
    let (floor, ceiling) = (sw.range_floor, sw.range_ceiling);
    let ber_at = |d: f64| -> Result<f64> { Ok(evaluate_with(scheme, &fixed.with_d_sr(d), Exec::default())?.ber.ber) };

    let ratio = (ceiling / floor).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|k| if k == SCAN_POINTS - 1 { ceiling } else { floor * ratio.powi(k as i32) })
        .collect();
    let bers = Exec::default().try_map(grid.len(), |k| ber_at(grid[k]))?;
    if bers[0] > target {
        return Err(Error::Unreachable { target, floor, ber: bers[0] });
    }
    let Some(k) = bers.iter().position(|&b| b > target) else {
        return Ok(MaxRange { d_sr: ceiling, ber: bers[bers.len() - 1], hit_ceiling: true });
    };
    if let Some(j) = (k + 1..grid.len()).find(|&j| bers[j] <= target) {
        return Err(Error::Bracketing(format!(
            "BER crosses the target more than once: {:e} at {} m, {:e} at {} m",
            bers[k], grid[k], bers[j], grid[j]
        )));
    }
    let (mut lo, mut hi) = (grid[k - 1], grid[k]);
    let mut ber_lo = bers[k - 1];
    while hi - lo > sw.range_rel_tol * lo {
        let mid = 0.5 * (lo + hi);
        let b = ber_at(mid)?;
        if b > target {
            hi = mid;
        } else {
            lo = mid;
            ber_lo = b;
        }
    }
    Ok(MaxRange { d_sr: lo, ber: ber_lo, hit_ceiling: false })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub label: String,
    pub scheme: Scheme,
    pub n_m: Option<usize>,
    pub range: MaxRange,
}

/// Maximum range at `sweep.target_ber` for NRR, 5x5 IRS, relay, 20x20 IRS
/// and 50x50 IRS, in that order.
pub fn table2(fixed: &Scenario) -> Result<Vec<Table2Row>> {
    let target = fixed.sweep.target_ber;
    let rows: [(Scheme, Option<usize>); 5] = [
        (Scheme::Nrr, None),
        (Scheme::Irs, Some(5)),
        (Scheme::Relay, None),
        (Scheme::Irs, Some(20)),
        (Scheme::Irs, Some(50)),
    ];
    rows.iter()
        .map(|&(scheme, n_m)| {
            let s = n_m.map_or_else(|| fixed.clone(), |n| fixed.with_n_m(n));
            let label = match (scheme, n_m) {
                (Scheme::Irs, Some(n)) => format!("irs_{n}x{n}"),
                _ => scheme.name().to_string(),
            };
            Ok(Table2Row { label, scheme, n_m, range: max_range_for_ber(scheme, target, &s)? })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub d_sr: f64,
    pub n_m: usize,
    pub irs_power_w: f64,
    pub relay_power_w: f64,
    pub irs_wins: bool,
}

/// IRS and relay power over a `(d_sr, n_m)` grid, row-major in `d_sr`.
pub fn surface_sweep(d_range: SweepRange, nm_range: SweepRange, fixed: &Scenario) -> Result<Vec<SurfaceCell>> {
    d_range.validate("sweep.d_sr")?;
    nm_range.validate("sweep.n_m")?;
    fixed.validate()?;
    let ds = d_range.points();
    let ns: Vec<usize> = nm_range.points().into_iter().map(|n| n as usize).collect();
    let relay = Exec::default().try_map(ds.len(), |k| {
        Ok::<_, Error>(evaluate_with(Scheme::Relay, &fixed.with_d_sr(ds[k]), Exec::default())?.received_power_w)
    })?;
    Exec::default().try_map(ds.len() * ns.len(), |k| {
        let (a, b) = (k / ns.len(), k % ns.len());
        let s = fixed.with_d_sr(ds[a]).with_n_m(ns[b]);
        let irs = evaluate_with(Scheme::Irs, &s, Exec::default())?.received_power_w;
        Ok(SurfaceCell { d_sr: ds[a], n_m: ns[b], irs_power_w: irs, relay_power_w: relay[a], irs_wins: irs >= relay[a] })
    })
}

/// `10 log10(a / b)`.
pub fn db_ratio(a: f64, b: f64) -> f64 {
    dbm(a) - dbm(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_points_include_stop() {
        let p = SweepRange::new(20.0, 500.0, 5.0).points();
        assert_eq!(p.len(), 97);
        assert_eq!(p[96], 500.0);
        assert_eq!(SweepRange::new(1.0, 10.0, 4.0).points(), vec![1.0, 5.0, 9.0]);
    }

    #[test]
    fn empty_range_rejected() {
        assert!(SweepRange::new(5.0, 5.0, 1.0).validate("r").is_err());
        assert!(SweepRange::new(1.0, 5.0, 0.0).validate("r").is_err());
    }
}
