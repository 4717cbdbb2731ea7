use std::time::Instant;

use clap::Args;
use serde_json::json;

use uncert_core::closedform::{dischord_curve, discrete_curve};
use uncert_core::export::{self, OutputSet, RunManifest, StatesFile};
use uncert_core::tradeoff::{log_grid, sweep};
use uncert_core::{MetricSpec, MetricT, MetricZ};

use crate::{Failure, OutArgs, SolverArgs, TArg, ZArg};

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    metric_z: ZArg,
    #[arg(long, value_enum)]
    metric_t: TArg,
    /// Exponent of the angle deviation.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Exponent of the number deviation.
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 1e-3)]
    tmin: f64,
    #[arg(long, default_value_t = 1e3)]
    tmax: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

/// At most this many ground states are sampled in `wavefunctions.csv`.
const WAVE_STATES: usize = 25;
const WAVE_GRID: usize = 129;

pub fn run(a: &CurveArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let spec = MetricSpec::new(a.metric_z.into(), a.metric_t.into()).with_exponents(a.alpha, a.beta);
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let grid = log_grid(a.tmin, a.tmax, a.points).map_err(|e| Failure::Usage(e.to_string()))?;
    let opts = a.solver.options()?;

    let curve = sweep(spec, &grid, &opts)?;
    let mut out = OutputSet::new(&a.out.out)?;
    out.write("curve.csv", export::curve_csv(&curve))?;
    let states = serde_json::to_string(&StatesFile::from_curve(&curve)).expect("states serialise");
    out.write("states.json", states + "\n")?;
    out.write("excited.csv", export::excited_csv(&curve))?;
    let stride = curve.points.len().div_ceil(WAVE_STATES).max(1);
    out.write("wavefunctions.csv", export::wavefunction_csv(&curve, stride, WAVE_GRID)?)?;

    let mut results = json!({
        "identity_defect": curve.identity_defect(),
        "max_tail": curve.points.iter().map(|p| p.tail).fold(0.0, f64::max),
        "max_n_max": curve.points.iter().map(|p| p.n_max).max().unwrap_or(0),
        "x_range": curve.x_range(),
    });
    let quadratic = spec.alpha == 2.0 && spec.beta == 2.0;
    if spec.metric_z == MetricZ::Disc && quadratic {
        let exact = discrete_curve(spec.metric_t, &grid)?;
        out.write("closedform.csv", export::closed_form_csv(&exact))?;
        let max_dy = curve
            .points
            .iter()
            .zip(&exact)
            .map(|(p, e)| (p.y - e.solution.y).abs())
            .fold(0.0, f64::max);
        results["max_abs_dy_closed_form"] = json!(max_dy);
        if spec.metric_t == MetricT::Cho {
            let max_dy = curve
                .points
                .iter()
                .map(|p| (p.y - dischord_curve(p.x.clamp(0.0, 2.0)).unwrap_or(f64::NAN)).abs())
                .fold(0.0, f64::max);
            results["max_abs_dy_dischord"] = json!(max_dy);
        }
    }

    let manifest = RunManifest {
        command: "curve".into(),
        spec: Some(spec),
        grids: json!({ "tmin": a.tmin, "tmax": a.tmax, "points": a.points, "spacing": "log" }),
        tolerances: json!({ "tail_tol": opts.tail_tol, "residual_tol": opts.residual_tol, "require_certificate": opts.require_certificate, "cap": opts.cap, "banded_cap": opts.banded_cap }),
        n_max: Some(opts.n_max),
        outputs: Vec::new(),
        results,
        wall_time: start.elapsed().as_secs_f64(),
        library_version: uncert_core::VERSION.into(),
    };
    out.finish(manifest)?;
    Ok(())
}
