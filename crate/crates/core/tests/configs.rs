use std::path::Path;

use gausslink::sweep::{evaluate, write_csv, Experiment, SweepConfig};

fn shrink(mut config: SweepConfig) -> SweepConfig {
    for axis in &mut config.axes {
        axis.points = axis.points.min(5);
    }
    config
}

#[test]
fn shipped_configs_load_and_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("ini") {
            continue;
        }
        let config = SweepConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let table = evaluate(&shrink(config)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!table.rows.is_empty());
        seen += 1;
    }
    assert!(seen >= 10, "only {seen} configs found");
}

#[test]
fn figure_defaults_are_deterministic() {
    let out = tempfile::tempdir().unwrap();
    for experiment in Experiment::ALL {
        let config = shrink(SweepConfig::figure_default(experiment));
        let (a, b) = (out.path().join("a.csv"), out.path().join("b.csv"));
        write_csv(&evaluate(&config).unwrap(), &a).unwrap();
        write_csv(&evaluate(&config).unwrap(), &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{}", experiment.name());
    }
}
