use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::json;

use uncert_core::bounds::{dominance, dominance_regions, BoundCurve, BoundKind};
use uncert_core::export::{self, fmt_f64, OutputSet, RunManifest};
use uncert_core::tradeoff::{log_grid, sweep};
use uncert_core::MetricSpec;

use crate::{Failure, OutArgs, SolverArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pair {
    StdArc,
    StdCho,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pair: Pair,
    /// Comma-separated bound names: judge, cn, second.
    #[arg(long)]
    curves: String,
    /// Number of curve points (log-spaced t in [1e-3, 1e3]) at which the
    /// bounds are compared.
    #[arg(long, default_value_t = 500)]
    xgrid: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

/// Slack allowed when a bound is compared with the sweep.
const SLACK: f64 = 1e-9;

fn parse_curves(pair: Pair, list: &str) -> Result<Vec<(String, BoundKind)>, Failure> {
    let mut out: Vec<(String, BoundKind)> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind = match (pair, name) {
            (Pair::StdArc, "judge") => BoundKind::JudgeArc,
            (Pair::StdCho, "judge") => BoundKind::JudgeCho,
            (Pair::StdCho, "cn") => BoundKind::Cn,
            (Pair::StdCho, "second") => BoundKind::SecondOrderCho,
            (Pair::StdArc, "cn" | "second") => {
                return Err(Failure::Usage(format!("bound {name:?} is only defined for --pair std-cho")))
            }
            _ => return Err(Failure::Usage(format!("unknown bound {name:?} (expected judge, cn, second)"))),
        };
        if !out.iter().any(|(n, _)| n == name) {
            out.push((name.to_string(), kind));
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("--curves is empty".into()));
    }
    Ok(out)
}

pub fn run(a: &BoundsArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let chosen = parse_curves(a.pair, &a.curves)?;
    if a.xgrid < 2 {
        return Err(Failure::Usage(format!("--xgrid must be at least 2, got {}", a.xgrid)));
    }
    let opts = a.solver.options()?;
    let spec: MetricSpec = chosen[0].1.spec();
    let grid = log_grid(1e-3, 1e3, a.xgrid).map_err(|e| Failure::Usage(e.to_string()))?;
    let curve = sweep(spec, &grid, &opts)?;
    let curves: Vec<(String, BoundCurve)> =
        chosen.iter().map(|(n, k)| Ok((n.clone(), BoundCurve::named(*k)?))).collect::<Result<_, uncert_core::Error>>()?;

    let mut out = OutputSet::new(&a.out.out)?;
    out.write("sweep.csv", export::curve_csv(&curve))?;
    let xs: Vec<f64> = curve.points.iter().map(|p| p.x).collect();
    for (name, c) in &curves {
        let source = format!("bound:{}", c.kind.name());
        out.write(&format!("bound_{name}.csv"), export::source_csv(&source, &c.sample(&xs)))?;
    }

    let mut header: Vec<String> = vec!["t".into(), "x".into(), "y_sweep".into()];
    for (name, _) in &curves {
        header.push(name.clone());
        header.push(format!("gap_{name}"));
        header.push(format!("{name}_le_sweep"));
    }
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            header.push(format!("{}_le_{}", curves[i].0, curves[j].0));
        }
    }
    let mut rows = Vec::with_capacity(curve.points.len());
    let mut min_gap = vec![f64::INFINITY; curves.len()];
    let mut all_below = vec![true; curves.len()];
    for p in &curve.points {
        let vals: Vec<Option<f64>> = curves.iter().map(|(_, c)| c.eval(p.x).ok()).collect();
        let mut row = vec![fmt_f64(p.t), fmt_f64(p.x), fmt_f64(p.y)];
        for (k, v) in vals.iter().enumerate() {
            match v {
                Some(b) => {
                    let gap = p.y - b;
                    min_gap[k] = min_gap[k].min(gap);
                    all_below[k] &= gap >= -SLACK;
                    row.extend([fmt_f64(*b), fmt_f64(gap), (gap >= -SLACK).to_string()]);
                }
                None => row.extend([String::new(), String::new(), String::new()]),
            }
        }
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                row.push(match (vals[i], vals[j]) {
                    (Some(u), Some(v)) => (u <= v + SLACK).to_string(),
                    _ => String::new(),
                });
            }
        }
        rows.push(row);
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    out.write("dominance.csv", export::table_csv(&header_refs, &rows))?;

    let mut results = json!({});
    for (k, (name, _)) in curves.iter().enumerate() {
        results[name] = json!({ "min_gap_to_sweep": min_gap[k], "below_sweep": all_below[k] });
    }
    let has = |n: &str| curves.iter().any(|(m, _)| m == n);
    if has("cn") && has("second") {
        let xs = uncert_core::bounds::interior_grid(0.0, 2.0, a.xgrid);
        let rows = dominance(uncert_core::bounds::cn_bound, uncert_core::bounds::second_order_cho_at, &xs);
        results["second_above_cn_regions"] = json!(dominance_regions(&rows));
    }

    let manifest = RunManifest {
        command: "bounds".into(),
        spec: Some(spec),
        grids: json!({ "tmin": 1e-3, "tmax": 1e3, "points": a.xgrid, "spacing": "log" }),
        tolerances: json!({ "slack": SLACK, "tail_tol": opts.tail_tol }),
        n_max: Some(opts.n_max),
        outputs: Vec::new(),
        results,
        wall_time: start.elapsed().as_secs_f64(),
        library_version: uncert_core::VERSION.into(),
    };
    out.finish(manifest)?;
    Ok(())
}
