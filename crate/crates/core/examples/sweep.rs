//! Builds a sweep in code, runs it in parallel, and writes CSV plus an SVG
//! heatmap to a temporary directory.
//!
//! The same grid can be described in an INI file and run with
//! `gausslink sweep <file> --svg`; see `configs/` for one per figure.

use gausslink::sweep::{run_sweep, Axis, AxisName, Experiment, Scale, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = SweepConfig::figure_default(Experiment::Fig2bcCapacityMaps);
    config.axes = vec![
        Axis::new(AxisName::COm, 0.1, 10.0, 40, Scale::Log),
        Axis::new(AxisName::CEm, 0.1, 10.0, 40, Scale::Log),
    ];
    config.output = "capacity.csv".into();
    config.validate()?;

    let dir = std::env::temp_dir().join("gausslink-sweep-example");
    let done = run_sweep(&config, Some(&dir), true)?;
    println!("{} rows ({} unstable) -> {}", done.rows, done.unstable, done.csv_path.display());
    if let Some(svg) = done.svg_path {
        println!("heatmap of `{}` -> {}", config.heatmap_metric(), svg.display());
    }

    let text = std::fs::read_to_string(&done.csv_path)?;
    for line in text.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}
