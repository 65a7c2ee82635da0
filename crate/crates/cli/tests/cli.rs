use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oirs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oirs")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn eval_prints_budget() {
    let o = oirs(&["eval", "--scheme", "irs", "--set", "n_m=50"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for key in ["gain", "received_power_w", "received_power_dbm", "snr", "ber_analytic"] {
        assert!(text.contains(key), "{key} missing from\n{text}");
    }
}

#[test]
fn eval_json_with_monte_carlo() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("e");
    let o = oirs(&[
        "eval", "--scheme", "irs", "--json", "--set", "d_sr=40", "--set", "n_m=5", "--mc-bits", "200000", "--seed", "9",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["budget"]["scheme"], "irs");
    assert_eq!(v["monte_carlo"]["mc_trials"], 200000);
    assert_eq!(v["monte_carlo"]["seed"], 9);
    let analytic = v["budget"]["ber"]["ber"].as_f64().unwrap();
    let mc = v["monte_carlo"]["ber"].as_f64().unwrap();
    let sigma = (analytic * (1.0 - analytic) / 2e5).sqrt();
    assert!((mc - analytic).abs() < 4.0 * sigma, "{mc} vs {analytic}");
    let m = manifest(&out);
    assert_eq!(m["seed"], 9);
    assert_eq!(m["outputs"][0]["file"], "eval.json");
}

#[test]
fn exit_codes() {
    let o = oirs(&["eval", "--set", "d_sr=-5"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("geometry.d_sr"));

    assert_eq!(code(&oirs(&["eval", "--set", "nonsense=1"])), 3);

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "[irs]\nn_m = 5\ncolour = \"red\"\n").unwrap();
    let o = oirs(&["eval", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("irs.colour"));

    assert_eq!(code(&oirs(&["eval", "--config", "/definitely/not/here.toml"])), 6);
    assert_eq!(code(&oirs(&["eval", "--scheme", "laser"])), 2);
    assert_eq!(code(&oirs(&["sweep", "fig9"])), 4);
    assert_eq!(code(&oirs(&["sweep", "d_sr", "--set", "d_sr_stop=10"])), 4);

    let file = tmp.path().join("plain");
    fs::write(&file, "x").unwrap();
    let o = oirs(&["sweep", "d_sr", "--set", "d_sr_step=240", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(code(&o), 6);

    let mut dark = vec!["crossover", "--set", "rho_m=0", "--set", "nm_max=3", "--set", "d_sr_series=[100.0]"];
    dark.extend(["--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&oirs(&dark)), 7);
}

#[test]
fn fig3a_writes_five_series() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("fig3a");
    let o = oirs(&["sweep", "fig3a", "--set", "d_sr_step=60", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["nrr.csv", "relay.csv", "irs_5.csv", "irs_20.csv", "irs_50.csv"] {
        let text = fs::read_to_string(out.join(f)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("variable,power_w,power_dbm,ber"));
        let rows: Vec<_> = lines.collect();
        assert_eq!(rows.len(), 9, "{f}");
        for r in rows {
            let cols: Vec<_> = r.split(',').collect();
            assert_eq!(cols.len(), 4);
            for c in cols {
                let mantissa = c.split('e').next().unwrap().trim_start_matches('-');
                assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 9, "{c}");
            }
        }
    }
    let m = manifest(&out);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 5);
    assert_eq!(m["tool"], "oirs");
    assert!(m["started_utc"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn manifest_config_reproduces_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    let o = oirs(&[
        "sweep", "n_m", "--scheme", "irs", "--set", "n_m_stop=12", "--set", "d_sr=150", "--out", first.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let m = manifest(&first);
    let cfg = tmp.path().join("resolved.toml");
    fs::write(&cfg, m["config_toml"].as_str().unwrap()).unwrap();
    let second = tmp.path().join("b");
    let o = oirs(&["sweep", "n_m", "--scheme", "irs", "--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let a = fs::read(first.join("irs_n_m.csv")).unwrap();
    let b = fs::read(second.join("irs_n_m.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(manifest(&second)["outputs"][0]["sha256"], m["outputs"][0]["sha256"]);
}

#[test]
fn table2_and_crossover_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("t");
    let o = oirs(&["table2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(out.join("table2.csv")).unwrap();
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows[0], "scheme,n_m,max_d_sr_m,ber_at_range,hit_ceiling");
    assert_eq!(rows.len(), 6);
    assert!(rows[2].starts_with("irs_5x5,5,"));

    let out = tmp.path().join("c");
    let o = oirs(&["crossover", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(out.join("crossover.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn surface_sweep_file() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let o = oirs(&[
        "sweep", "fig4", "--set", "surface_d_sr_step=240", "--set", "surface_n_m_stop=4", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(out.join("surface.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("d_sr,n_m,irs_power_w,relay_power_w,irs_wins"));
    assert_eq!(text.lines().count(), 1 + 3 * 4);
}
