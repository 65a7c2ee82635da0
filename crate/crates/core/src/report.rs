//! Plot-ready CSV rendering shared by the CLI and the acceptance suite.

use std::fmt::Write;

use crate::sweep::{SurfaceCell, SweepRow, Table2Row};

pub const SWEEP_HEADER: &str = "variable,power_w,power_dbm,ber";

/// Nine significant digits in scientific notation; `.` decimal separator.
pub fn sig9(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.8e}")
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{},{}", sig9(r.variable), sig9(r.power_w), sig9(r.power_dbm), sig9(r.ber)).unwrap();
    }
    out
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut out = String::from("scheme,n_m,max_d_sr_m,ber_at_range,hit_ceiling\n");
    for r in rows {
        let n = r.n_m.map_or(String::new(), |n| n.to_string());
        writeln!(out, "{},{},{},{},{}", r.label, n, sig9(r.range.d_sr), sig9(r.range.ber), r.range.hit_ceiling).unwrap();
    }
    out
}

pub fn surface_csv(cells: &[SurfaceCell]) -> String {
    let mut out = String::from("d_sr,n_m,irs_power_w,relay_power_w,irs_wins\n");
    for c in cells {
        writeln!(out, "{},{},{},{},{}", sig9(c.d_sr), c.n_m, sig9(c.irs_power_w), sig9(c.relay_power_w), c.irs_wins)
            .unwrap();
    }
    out
}
