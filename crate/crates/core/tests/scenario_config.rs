use oirs_core::scenario::Scenario;
use oirs_core::Error;
use proptest::prelude::*;

#[test]
fn default_round_trip() {
    let s = Scenario::default();
    let text = s.to_toml_string();
    assert_eq!(Scenario::from_toml_str(&text).unwrap(), s);
    assert_eq!(Scenario::from_toml_str(&text).unwrap().to_toml_string(), text);
}

#[test]
fn every_section_present_in_output() {
    let text = Scenario::default().to_toml_string();
    for s in oirs_core::scenario::SECTIONS {
        assert!(text.contains(&format!("[{s}]")), "{s}");
    }
}

#[test]
fn unknown_section_or_key_rejected() {
    for doc in ["[irs]\nn_mm = 3\n", "[weather]\nrain = true\n", "top = 1\n", "[nrr.patch]\nx_min = 0\nwidth = 2\n"] {
        assert!(matches!(Scenario::from_toml_str(doc), Err(Error::Schema { .. })), "{doc}");
    }
}

#[test]
fn optional_keys_round_trip() {
    let mut s = Scenario::default();
    s.set("y_relay=5").unwrap();
    s.set("nrr.patch={x_min=1.0, x_max=8.0, z_min=-50.0, z_max=-2.0}").unwrap();
    let back = Scenario::from_toml_str(&s.to_toml_string()).unwrap();
    assert_eq!(back, s);
    assert_eq!(back.nrr.patch.unwrap().x_max, 8.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_scenarios_round_trip(
        n_m in 1usize..200,
        d in 1e-3f64..1e5,
        sigma2 in 1e-30f64..1e-10,
        eta in 1e-4f64..1.0,
        series in prop::collection::vec(1usize..100, 0..6),
        rule in any::<bool>(),
    ) {
        let mut s = Scenario::default();
        s.irs.n_m = n_m;
        s.geometry.d_sr = d;
        s.noise.sigma2 = sigma2;
        s.optics.eta = eta;
        s.sweep.n_m_series = series;
        if rule {
            s.set("quad_rule=gauss-tensor").unwrap();
        }
        let text = s.to_toml_string();
        prop_assert_eq!(Scenario::from_toml_str(&text).unwrap(), s);
    }
}
