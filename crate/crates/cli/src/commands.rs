use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chrono::Utc;
use oirs_core::budget::LinkBudget;
use oirs_core::metrics::{monte_carlo_ber, monte_carlo_ber_snr, BerResult};
use oirs_core::report::{sig9, surface_csv, sweep_csv, table2_csv};
use oirs_core::sweep::{self, run_sweep, surface_sweep, SweepRange, SweepRow, SweepSpec, SweepVariable};
use oirs_core::{evaluate, Error, Scenario, Scheme};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{timestamp, Manifest, OutDir};
use crate::Common;

const DEFAULT_OUT: &str = "out";

pub fn load_scenario(c: &Common) -> Result<Scenario, CliError> {
    let mut s = match &c.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Scenario::from_toml_str(&text)?
        }
        None => Scenario::default(),
    };
    for kv in &c.overrides {
        s.set(kv)?;
    }
    s.validate()?;
    Ok(s)
}

fn manifest(command: &str, args: &[String], c: &Common, s: &Scenario) -> Manifest {
    Manifest {
        tool: "oirs",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        args: args.to_vec(),
        seed: c.seed,
        mc_bits: c.mc_bits,
        started_utc: timestamp(Utc::now()),
        finished_utc: String::new(),
        config_toml: s.to_toml_string(),
        config: s.clone(),
        outputs: Vec::new(),
        warnings: Vec::new(),
    }
}

#[derive(Debug, Serialize)]
struct EvalRecord {
    d_sr_m: f64,
    n_m: Option<usize>,
    budget: LinkBudget,
    monte_carlo: Option<BerResult>,
}

pub fn eval(c: &Common, args: &[String], scheme: Scheme, json: bool) -> Result<(), CliError> {
    let s = load_scenario(c)?;
    let m = manifest("eval", args, c, &s);
    let budget = evaluate(scheme, &s)?;
    let mc = match c.mc_bits {
        Some(bits) => Some(match scheme {
            Scheme::Irs => monte_carlo_ber(budget.gain, s.irs.p_tx, &s.optics(), &s.noise(), bits, c.seed)?,
            _ => monte_carlo_ber_snr(budget.snr, bits, c.seed)?,
        }),
        None => None,
    };
    let record = EvalRecord {
        d_sr_m: s.geometry.d_sr,
        n_m: (scheme == Scheme::Irs).then_some(s.irs.n_m),
        budget,
        monte_carlo: mc,
    };
    let text = serde_json::to_string_pretty(&record).expect("record serializes") + "\n";
    if json {
        print!("{text}");
    } else {
        print!("{}", summary(&record));
    }
    if let Some(dir) = &c.out {
        let mut out = OutDir::create(dir)?;
        out.write("eval.json", &text)?;
        out.finish(m)?;
    }
    Ok(())
}

fn summary(r: &EvalRecord) -> String {
    let b = &r.budget;
    let mut t = String::new();
    writeln!(t, "scheme              {}", b.scheme).unwrap();
    writeln!(t, "d_sr_m              {}", r.d_sr_m).unwrap();
    if let Some(n) = r.n_m {
        writeln!(t, "n_m                 {n}").unwrap();
    }
    writeln!(t, "gain                {}", sig9(b.gain)).unwrap();
    writeln!(t, "received_power_w    {}", sig9(b.received_power_w)).unwrap();
    writeln!(t, "received_power_dbm  {:.3}", b.received_power_dbm).unwrap();
    writeln!(t, "snr                 {}", sig9(b.snr)).unwrap();
    writeln!(t, "ber_analytic        {}", sig9(b.ber.ber)).unwrap();
    if let Some(mc) = &r.monte_carlo {
        writeln!(
            t,
            "ber_monte_carlo     {} (stderr {}, {} bits, seed {})",
            sig9(mc.ber),
            sig9(mc.mc_stderr),
            mc.mc_trials,
            mc.seed.unwrap_or_default()
        )
        .unwrap();
    }
    t
}

fn out_dir(c: &Common) -> &Path {
    c.out.as_deref().unwrap_or(Path::new(DEFAULT_OUT))
}

fn d_range(s: &Scenario) -> SweepRange {
    SweepRange::new(s.sweep.d_sr_start, s.sweep.d_sr_stop, s.sweep.d_sr_step)
}

fn nm_range(s: &Scenario) -> SweepRange {
    SweepRange::new(s.sweep.n_m_start as f64, s.sweep.n_m_stop as f64, s.sweep.n_m_step as f64)
}

fn file_tag(v: f64) -> String {
    if v.fract() == 0.0 { format!("{v:.0}") } else { v.to_string().replace('.', "p") }
}

pub fn sweep(c: &Common, args: &[String], name: &str, scheme: Scheme) -> Result<(), CliError> {
    let s = load_scenario(c)?;
    let mut m = manifest(&format!("sweep {name}"), args, c, &s);
    let mut tables: Vec<(String, Vec<SweepRow>)> = Vec::new();
    let mut extra: Vec<(String, String)> = Vec::new();
    let spec = |scheme, variable, range, fixed: Scenario| SweepSpec { scheme, variable, range, fixed };
    match name {
        "fig3a" => {
            tables.push(("nrr.csv".into(), run_sweep(&spec(Scheme::Nrr, SweepVariable::DSr, d_range(&s), s.clone()))?));
            tables.push(("relay.csv".into(), run_sweep(&spec(Scheme::Relay, SweepVariable::DSr, d_range(&s), s.clone()))?));
            for &n in &s.sweep.n_m_series {
                let rows = run_sweep(&spec(Scheme::Irs, SweepVariable::DSr, d_range(&s), s.with_n_m(n)))?;
                tables.push((format!("irs_{n}.csv"), rows));
            }
        }
        "fig3b" => {
            for &d in &s.sweep.d_sr_series {
                let rows = run_sweep(&spec(Scheme::Irs, SweepVariable::NM, nm_range(&s), s.with_d_sr(d)))?;
                tables.push((format!("irs_d{}.csv", file_tag(d)), rows));
            }
        }
        "fig4" => {
            let d = SweepRange::new(s.sweep.d_sr_start, s.sweep.d_sr_stop, s.sweep.surface_d_sr_step);
            let n = SweepRange::new(1.0, s.sweep.surface_n_m_stop as f64, 1.0);
            extra.push(("surface.csv".into(), surface_csv(&surface_sweep(d, n, &s)?)));
        }
        "d_sr" => {
            tables.push((format!("{scheme}_d_sr.csv"), run_sweep(&spec(scheme, SweepVariable::DSr, d_range(&s), s.clone()))?));
        }
        "n_m" => {
            tables.push((format!("{scheme}_n_m.csv"), run_sweep(&spec(scheme, SweepVariable::NM, nm_range(&s), s.clone()))?));
        }
        other => {
            return Err(Error::Validation {
                key: "sweep name".into(),
                reason: format!("unknown sweep {other:?}; expected fig3a, fig3b, fig4, d_sr or n_m"),
            }
            .into())
        }
    }
    let mut out = OutDir::create(out_dir(c))?;
    for (file, rows) in &tables {
        for r in rows.iter().filter(|r| r.error.is_some()) {
            let w = format!("{file}: variable {}: {}", r.variable, r.error.as_deref().unwrap_or_default());
            eprintln!("oirs: warning: {w}");
            m.warnings.push(w);
        }
        out.write(file, &sweep_csv(rows))?;
    }
    for (file, text) in &extra {
        out.write(file, text)?;
    }
    let n = tables.len() + extra.len();
    let dir = out.finish(m)?;
    println!("wrote {n} csv file(s) and manifest.json to {}", dir.display());
    Ok(())
}

pub fn table2(c: &Common, args: &[String]) -> Result<(), CliError> {
    let s = load_scenario(c)?;
    let m = manifest("table2", args, c, &s);
    let rows = sweep::table2(&s)?;
    println!("max d_SR at BER {}:", s.sweep.target_ber);
    for r in &rows {
        let flag = if r.range.hit_ceiling { " (search ceiling)" } else { "" };
        println!("  {:<10} {:>10.1} m{flag}", r.label, r.range.d_sr);
    }
    let mut out = OutDir::create(out_dir(c))?;
    out.write("table2.csv", &table2_csv(&rows))?;
    out.finish(m)?;
    Ok(())
}

pub fn crossover(c: &Common, args: &[String]) -> Result<(), CliError> {
    let s = load_scenario(c)?;
    let m = manifest("crossover", args, c, &s);
    let mut csv = String::from("d_sr,n_m\n");
    for &d in &s.sweep.d_sr_series {
        let n = sweep::crossover_nm(d, &s)?;
        println!("d_sr {d} m: n_m >= {n}");
        writeln!(csv, "{},{n}", sig9(d)).unwrap();
    }
    let mut out = OutDir::create(out_dir(c))?;
    out.write("crossover.csv", &csv)?;
    out.finish(m)?;
    Ok(())
}
