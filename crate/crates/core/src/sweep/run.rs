use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{Experiment, FixedParams, SweepConfig};
use super::{emit_heatmap, ConfigError, SweepError};
use crate::channel::{dqt_capacity_boundary, dqt_q_lb, BosonicChannel};
use crate::entanglement::{duan_quantity, entanglement_of_formation, entanglement_rate};
use crate::error::Result;
use crate::integrate::Quadrature;
use crate::swapping::{apply_optical_loss, click_rate, mm_capacity, swapped_form};
use crate::teleport::{induced_channel, optimize_gain};
use crate::transducer::{
    dqt_channel, output_mo_covariance, stability_check, Detuning, TransducerParams, TwoModeStandardForm,
};

/// Evaluated grid: axis columns, the `stable` flag, then metrics. Empty
/// cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub n_axes: usize,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn unstable_rows(&self) -> usize {
        self.rows.iter().filter(|r| r[self.n_axes] == Some(0.0)).count()
    }
}

/// Files written by [`run_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    pub rows: usize,
    pub unstable: usize,
}

/// Evaluates every grid point on the current rayon pool. Rows come out in
/// row-major order with the first axis outermost.
pub fn evaluate(config: &SweepConfig) -> Result<SweepTable, SweepError> {
    config.validate()?;
    let grids: Vec<Vec<f64>> = config.axes.iter().map(|a| a.values()).collect();
    let metric_names = config.experiment.metrics();
    let mut columns: Vec<String> = config.axes.iter().map(|a| a.name.name().to_string()).collect();
    columns.push("stable".into());
    columns.extend(metric_names.iter().map(|m| m.to_string()));

    let rows = (0..config.len())
        .into_par_iter()
        .map(|k| {
            let mut rest = k;
            let mut coords = vec![0.0; grids.len()];
            let mut point = config.fixed;
            for (a, grid) in grids.iter().enumerate().rev() {
                coords[a] = grid[rest % grid.len()];
                rest /= grid.len();
                point.set(config.axes[a].name, coords[a]);
            }
            let metrics = point_metrics(config.experiment, &point).map_err(|e| {
                let at: Vec<String> = config
                    .axes
                    .iter()
                    .zip(&coords)
                    .map(|(a, v)| format!("{}={v}", a.name.name()))
                    .collect();
                SweepError::Numerical(format!("at {}: {e}", at.join(", ")))
            })?;
            let mut row: Vec<Option<f64>> = coords.into_iter().map(Some).collect();
            match metrics {
                Some(values) => {
                    row.push(Some(1.0));
                    row.extend(values);
                }
                None => {
                    row.push(Some(0.0));
                    row.extend(std::iter::repeat_n(None, metric_names.len()));
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(SweepTable {
        columns,
        n_axes: config.axes.len(),
        rows,
    })
}

/// Fixed 12-significant-digit scientific formatting.
pub fn format_value(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Writes `table` as comma-separated UTF-8 with LF line endings.
pub fn write_csv(table: &SweepTable, path: &Path) -> Result<(), SweepError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.map(format_value).unwrap_or_default()))?;
    }
    w.flush()?;
    Ok(())
}

/// Evaluates `config`, writes the CSV and, when requested by the config or
/// by `force_svg`, a heatmap next to it.
pub fn run_sweep(config: &SweepConfig, out_dir: Option<&Path>, force_svg: bool) -> Result<SweepOutcome, SweepError> {
    let want_svg = force_svg || config.emit_svg;
    if want_svg && config.axes.len() != 2 {
        return Err(SweepError::Config(ConfigError {
            line: None,
            field: Some("emit_svg".into()),
            message: "a heatmap needs exactly two axes".into(),
        }));
    }
    let table = evaluate(config)?;
    let csv_path = match out_dir {
        Some(dir) if config.output.is_relative() => dir.join(&config.output),
        _ => config.output.clone(),
    };
    write_csv(&table, &csv_path)?;
    let svg_path = if want_svg {
        let svg = csv_path.with_extension("svg");
        emit_heatmap(&csv_path, config.heatmap_metric(), &svg)?;
        Some(svg)
    } else {
        None
    };
    Ok(SweepOutcome {
        csv_path,
        svg_path,
        rows: table.rows.len(),
        unstable: table.unstable_rows(),
    })
}

fn red(point: &FixedParams) -> Result<TransducerParams> {
    point.device().params(Detuning::Red)
}

fn blue(point: &FixedParams) -> Result<Option<TransducerParams>> {
    let p = point.device().params(Detuning::Blue)?;
    Ok(stability_check(&p).then_some(p))
}

fn lossy_form(p: &TransducerParams, tau: f64) -> Result<TwoModeStandardForm> {
    apply_optical_loss(&output_mo_covariance(p, 0.0)?, tau)
}

fn channel_noise(ch: &BosonicChannel) -> f64 {
    match *ch {
        BosonicChannel::ThermalLoss { n_e, .. } | BosonicChannel::ThermalAmplification { n_e, .. } => n_e,
        BosonicChannel::RandomDisplacement { sigma_sq } => sigma_sq,
    }
}

fn point_metrics(experiment: Experiment, point: &FixedParams) -> Result<Option<Vec<Option<f64>>>> {
    let boundary = dqt_capacity_boundary(point.zeta_o, point.zeta_e).ok();
    let quad = Quadrature::default();
    let values = match experiment {
        Experiment::Fig1aDqtBoundary => {
            let p = red(point)?;
            let ch = dqt_channel(&p, 0.0)?;
            vec![
                Some(point.c_om * point.c_em),
                boundary,
                Some(ch.eta),
                Some(ch.n_e),
                Some(dqt_q_lb(&p, 0.0)?),
            ]
        }
        Experiment::Custom => {
            let Some(p) = blue(point)? else { return Ok(None) };
            let form = lossy_form(&p, point.tau)?;
            let opt = optimize_gain(&form)?;
            vec![
                Some(form.u),
                Some(form.v),
                Some(form.w),
                Some(entanglement_of_formation(&form)?),
                Some(duan_quantity(&form)),
                Some(opt.kappa_opt),
                Some(opt.q_lb_opt),
                Some(induced_channel(&form, point.kappa)?.q_lb()),
                Some(dqt_q_lb(&red(point)?, 0.0)?),
            ]
        }
        _ => {
            let Some(p) = blue(point)? else { return Ok(None) };
            blue_metrics(experiment, point, &p, boundary, &quad)?
        }
    };
    Ok(Some(values))
}

fn blue_metrics(
    experiment: Experiment,
    point: &FixedParams,
    p: &TransducerParams,
    boundary: Option<f64>,
    quad: &Quadrature,
) -> Result<Vec<Option<f64>>> {
    let form = || lossy_form(p, point.tau);
    Ok(match experiment {
        Experiment::Fig1bEqtIdeal | Experiment::Fig2bcCapacityMaps => {
            let f = form()?;
            let opt = optimize_gain(&f)?;
            let mut v = vec![
                Some(f.u),
                Some(f.v),
                Some(f.w),
                Some(opt.kappa_opt),
                Some(opt.q_lb_opt),
                Some(dqt_q_lb(&red(point)?, 0.0)?),
            ];
            if experiment == Experiment::Fig1bEqtIdeal {
                v.push(boundary);
            }
            v
        }
        Experiment::Fig2aGainCurves => {
            let ch = induced_channel(&form()?, point.kappa)?;
            vec![Some(ch.eta()), Some(channel_noise(&ch)), Some(ch.q_lb())]
        }
        Experiment::Fig2dEofMap => {
            let f = form()?;
            vec![
                Some(f.u),
                Some(f.v),
                Some(f.w),
                Some(entanglement_of_formation(&f)?),
                Some(duan_quantity(&f)),
            ]
        }
        Experiment::Fig4aMmEof => {
            let f = form()?;
            let mm = swapped_form(&f)?;
            vec![
                Some(mm.u),
                Some(mm.w),
                Some(entanglement_of_formation(&mm)?),
                Some(entanglement_of_formation(&f)?),
            ]
        }
        Experiment::Fig4bMmCapacity => {
            let mm = swapped_form(&form()?)?;
            let opt = mm_capacity(&mm)?;
            vec![Some(mm.u), Some(mm.w), Some(opt.kappa_opt), Some(opt.q_lb_opt)]
        }
        Experiment::Fig5aClickRate => {
            let rates = click_rate(p, point.tau, point.dt, quad)?;
            vec![Some(rates.r_t), Some(rates.r_b)]
        }
        Experiment::Fig5bHomodyneRate => vec![Some(entanglement_rate(p, point.tau, quad)?.value)],
        Experiment::Fig1aDqtBoundary | Experiment::Custom => unreachable!("handled by point_metrics"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{Axis, AxisName, Scale};

    fn small(experiment: Experiment) -> SweepConfig {
        let mut c = SweepConfig::figure_default(experiment);
        for a in &mut c.axes {
            a.points = 3;
        }
        c
    }

    #[test]
    fn two_by_two_custom_has_four_rows() {
        let mut c = SweepConfig::figure_default(Experiment::Custom);
        c.axes = vec![
            Axis::new(AxisName::COm, 0.5, 1.0, 2, Scale::Linear),
            Axis::new(AxisName::CEm, 0.5, 1.0, 2, Scale::Linear),
        ];
        let t = evaluate(&c).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.rows[1][0], Some(0.5));
        assert_eq!(t.rows[1][1], Some(1.0));
        assert_eq!(t.columns[2], "stable");
    }

    #[test]
    fn unstable_rows_are_blank() {
        let mut c = SweepConfig::figure_default(Experiment::Fig2dEofMap);
        c.axes = vec![
            Axis::new(AxisName::COm, 1.0, 5.0, 2, Scale::Linear),
            Axis::new(AxisName::CEm, 0.5, 1.0, 2, Scale::Linear),
        ];
        let t = evaluate(&c).unwrap();
        assert_eq!(t.unstable_rows(), 2);
        let last = t.rows.last().unwrap();
        assert_eq!(last[2], Some(0.0));
        assert!(last[3..].iter().all(Option::is_none));
    }

    #[test]
    fn formatting_is_fixed() {
        assert_eq!(format_value(1.0), "1.00000000000e0");
        assert_eq!(format_value(-0.0), "0.00000000000e0");
        assert_eq!(format_value(-1.5e-7), "-1.50000000000e-7");
    }

    #[test]
    fn every_experiment_runs_on_a_small_grid() {
        for e in Experiment::ALL {
            let t = evaluate(&small(e)).unwrap();
            assert_eq!(t.rows.len(), 9, "{}", e.name());
        }
    }
}
