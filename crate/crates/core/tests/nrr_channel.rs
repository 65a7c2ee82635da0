use std::f64::consts::PI;

use oirs_core::nrr::{nrr_differential_power, nrr_received_power, RoadPatch};
use oirs_core::{Scenario, Vec3};

fn power(s: &Scenario) -> f64 {
    nrr_received_power(&s.link_geometry().unwrap(), &s.nrr_config(), &s.optics()).unwrap()
}

/// Closed form `mu' I h_Rx / (d_SR d_RD sqrt(d_SR^2 + h_Tx^2) (d_RD^2 + h_Rx^2))`.
fn closed_form(x: f64, z: f64, s: &Scenario) -> f64 {
    let g = &s.geometry;
    let n = &s.nrr;
    let d_sr = x.hypot(z + g.d_sr);
    let d_rd = (x - g.d_rd).hypot(z);
    let mu = n.rho_r * s.optics.a_r / (n.ler * PI);
    mu * n.intensity_cd * g.h_rx / (d_sr * d_rd * (d_sr * d_sr + g.h_tx * g.h_tx).sqrt() * (d_rd * d_rd + g.h_rx * g.h_rx))
}

#[test]
fn density_matches_closed_form() {
    let s = Scenario::default().with_d_sr(37.0);
    let lg = s.link_geometry().unwrap();
    for (x, z) in [(0.5, -0.5), (4.0, -20.0), (9.5, -36.5), (2.2, -1.0)] {
        let a = nrr_differential_power(Vec3::new(x, 0.0, z), &lg, &s.nrr_config(), &s.optics()).unwrap();
        let b = closed_form(x, z, &s);
        assert!((a - b).abs() <= 1e-13 * b, "({x}, {z}): {a:e} vs {b:e}");
    }
}

#[test]
fn density_falls_moving_away_from_both_vehicles() {
    // along the perpendicular bisector of the Tx and Rx projections, away from both
    let s = Scenario::default().with_d_sr(10.0);
    let lg = s.link_geometry().unwrap();
    let mut last = f64::INFINITY;
    for k in 0..50 {
        let t = 0.1 * k as f64;
        let p = Vec3::new(5.0 + t, 0.0, -5.0 - t);
        let v = nrr_differential_power(p, &lg, &s.nrr_config(), &s.optics()).unwrap();
        assert!(v < last, "t={t}");
        last = v;
    }
}

#[test]
fn grid_refinement_converges() {
    for d in [2.0, 6.0, 20.0, 100.0, 500.0, 6000.0] {
        let s = Scenario::default().with_d_sr(d);
        let mut fine = s.clone();
        fine.nrr.grid = 128;
        let (a, b) = (power(&s), power(&fine));
        assert!((a - b).abs() / b < 0.01, "d={d}: {a:e} vs {b:e}");
    }
}

#[test]
fn power_is_linear_in_scalars() {
    let base = Scenario::default();
    let p0 = power(&base);
    let mut s = base.clone();
    s.nrr.rho_r = 0.12;
    assert!((power(&s) - 0.5 * p0).abs() <= 1e-12 * p0);
    let mut s = base.clone();
    s.optics.a_r = 2e-4;
    assert!((power(&s) - 2.0 * p0).abs() <= 1e-12 * p0);
    let mut s = base.clone();
    s.nrr.intensity_cd = 30000.0;
    assert!((power(&s) - 0.5 * p0).abs() <= 1e-12 * p0);
    let mut s = base.clone();
    s.nrr.ler = 300.0;
    assert!((power(&s) - 0.5 * p0).abs() <= 1e-12 * p0);
}

#[test]
fn power_decreases_with_distance() {
    let mut last = f64::INFINITY;
    for k in 0..=96 {
        let d = 20.0 + 5.0 * k as f64;
        let p = power(&Scenario::default().with_d_sr(d));
        assert!(p < last, "d={d}");
        last = p;
    }
}

#[test]
fn vanishing_patch_has_no_power() {
    let mut s = Scenario::default();
    s.nrr.patch = Some(RoadPatch { x_min: 3.0, x_max: 3.0 + 1e-9, z_min: -40.0, z_max: -40.0 + 1e-9 });
    assert!(power(&s) < 1e-20);
}

#[test]
fn emission_factor_six_metres_from_transmitter() {
    // a point 6 m from the Tx projection; only sin(gamma) depends on h_Tx
    let s = Scenario::default().with_d_sr(20.0);
    let lg = s.link_geometry().unwrap();
    let (nc, oc) = (s.nrr_config(), s.optics());
    let p = Vec3::new(0.0, 0.0, -14.0);
    let with_h = nrr_differential_power(p, &lg, &nc, &oc).unwrap();
    let mut flat = lg.clone();
    flat.h_tx = 1e-9;
    let without = nrr_differential_power(p, &flat, &nc, &oc).unwrap();
    let sin_gamma = with_h / without;
    assert!((sin_gamma - 6.0 / 36.64f64.sqrt()).abs() < 1e-12);
    assert!((sin_gamma - 0.991228).abs() < 1e-6);
}
