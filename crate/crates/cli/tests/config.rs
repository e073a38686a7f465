use mwstab::config::{Format, ModelName, MuGrid, RunConfig};
use mwstab::{resolve_config, CommonArgs};
use proptest::prelude::*;

fn any_config() -> impl Strategy<Value = RunConfig> {
    (
        prop_oneof![Just(ModelName::A), Just(ModelName::B)],
        (1e-3..10.0f64, -0.2..0.2f64, -10.0..10.0f64),
        3usize..200,
        (-0.5..0.0f64, 1e-6..0.5f64, 2usize..1000),
        1e-15..1e-3f64,
        "[a-z0-9_/]{0,12}(\\.csv)?",
        prop_oneof![Just(Format::Csv), Just(Format::Json)],
    )
        .prop_map(|(model, (k, a, gamma), n_modes, (start, width, count), tol, out_path, format)| RunConfig {
            model,
            k,
            a,
            gamma,
            n_modes,
            mu_grid: MuGrid { start, stop: start + width, count },
            tol,
            out_path,
            format,
        })
}

proptest! {
    #[test]
    fn config_text_round_trips(cfg in any_config()) {
        let mut back = RunConfig::with_grid(MuGrid { start: 0.0, stop: 1.0, count: 2 });
        back.merge_text(&cfg.to_text()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_text(), cfg.to_text());
    }

    #[test]
    fn config_file_round_trips_through_resolution(cfg in any_config()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, cfg.to_text()).unwrap();
        let args = CommonArgs { config: Some(path), ..CommonArgs::default() };
        let resolved = resolve_config(&args, MuGrid { start: 0.0, stop: 0.5, count: 11 }).unwrap();
        prop_assert_eq!(resolved, cfg);
    }
}
