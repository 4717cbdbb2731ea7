use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use uncert_core::closedform::dischord_curve;
use uncert_core::export::{self, fmt_f64, OutputSet, RunManifest};
use uncert_core::spectral::{self, SolveOptions};
use uncert_core::special::{arc_boundary_residual, arc_ground_energy, cho_ground_energy};
use uncert_core::tradeoff::{compare_families, hausdorff_with_refinement, log_grid, sweep};
use uncert_core::{MetricSpec, MetricT, MetricZ};

use crate::{Failure, OutArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PaperConstants,
    Identities,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    value: f64,
    expected: f64,
    tolerance: f64,
    /// `"abs"` for |value - expected| <= tolerance, `"le"` / `"ge"` for one-sided checks.
    kind: &'static str,
    pass: bool,
}

impl Check {
    fn abs(name: &str, value: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (value - expected).abs() <= tolerance;
        Check { name: name.into(), value, expected, tolerance, kind: "abs", pass }
    }

    fn le(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, expected: bound, tolerance: 0.0, kind: "le", pass: value <= bound }
    }

    fn ge(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, expected: bound, tolerance: 0.0, kind: "ge", pass: value >= bound }
    }
}

const STD_ARC: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Arc);
const STD_CHO: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Cho);
const DISC_CHO: MetricSpec = MetricSpec::new(MetricZ::Disc, MetricT::Cho);

fn family_constants(opts: &SolveOptions) -> uncert_core::Result<Vec<Check>> {
    let grid = log_grid(1e-3, 1e3, 200)?;
    let arc = sweep(STD_ARC, &grid, opts)?;
    let cho = sweep(STD_CHO, &grid, opts)?;
    let cmp = compare_families(&arc, &cho)?;
    let h = hausdorff_with_refinement(STD_ARC, STD_CHO, 1e-3, 1e3, 200, opts)?;
    Ok(vec![
        Check::abs("max_norm_distance_arc_cho", cmp.max_norm_distance, 0.145, 0.01),
        Check::le("hausdorff_orbit_distance_arc_cho", h.value + h.error_bar, 0.033),
        Check::ge("min_overlap_arc_cho", cmp.min_overlap, 0.98),
    ])
}

fn identities(opts: &SolveOptions) -> uncert_core::Result<Vec<Check>> {
    let mut out = Vec::new();
    let grid = log_grid(1e-3, 1e3, 50)?;
    for (name, spec) in [("std_arc", STD_ARC), ("std_cho", STD_CHO), ("disc_cho", DISC_CHO)] {
        let curve = sweep(spec, &grid, opts)?;
        out.push(Check::abs(&format!("energy_identity_{name}"), curve.identity_defect(), 0.0, 1e-9));
        if spec == DISC_CHO {
            let dy = curve
                .points
                .iter()
                .map(|p| (p.y - dischord_curve(p.x.min(2.0)).unwrap_or(f64::NAN)).abs())
                .fold(0.0, f64::max);
            out.push(Check::abs("closed_form_disc_cho", dy, 0.0, 1e-6));
        }
    }
    for t in [0.1, 1.0, 10.0] {
        let e = spectral::solve(STD_CHO, t, opts)?.e0;
        out.push(Check::abs(&format!("mathieu_e0_t{t}"), e, cho_ground_energy(t)?, 1e-8));
    }
    let e = spectral::solve(STD_ARC, 1.0, opts)?.e0;
    out.push(Check::abs("hypergeometric_e0_t1", e, arc_ground_energy(1.0)?, 1e-6));
    Ok(out)
}

/// Boundary residual at `t = 1` over `lambda in [0, 4]`; its zeros are the
/// even eigenvalues of the standard/arc Hamiltonian.
fn arc_boundary_scan() -> uncert_core::Result<String> {
    let rows = (0..=400)
        .map(|i| {
            let lambda = 0.01 * i as f64;
            Ok(vec![fmt_f64(lambda), fmt_f64(arc_boundary_residual(1.0, lambda)?)])
        })
        .collect::<uncert_core::Result<Vec<_>>>()?;
    Ok(export::table_csv(&["lambda", "residual"], &rows))
}

pub fn run(a: &VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let opts = SolveOptions::default();
    let (suite, checks) = match a.suite {
        Suite::PaperConstants => ("paper-constants", family_constants(&opts)?),
        Suite::Identities => ("identities", identities(&opts)?),
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in &checks {
        println!("[{}] {} = {:.6e} ({} {:.3e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.kind, c.expected);
    }

    let mut out = OutputSet::new(&a.out.out)?;
    if a.suite == Suite::Identities {
        out.write("arc_boundary.csv", arc_boundary_scan()?)?;
    }
    let report = json!({ "suite": suite, "passed": checks.len() - failed, "failed": failed, "checks": checks });
    out.write("report.json", serde_json::to_string_pretty(&report).expect("report serialises") + "\n")?;
    let manifest = RunManifest {
        command: format!("verify --suite {suite}"),
        spec: None,
        grids: json!({ "tmin": 1e-3, "tmax": 1e3, "spacing": "log" }),
        tolerances: json!({ "tail_tol": opts.tail_tol, "residual_tol": opts.residual_tol }),
        n_max: Some(opts.n_max),
        outputs: Vec::new(),
        results: json!({ "passed": checks.len() - failed, "failed": failed }),
        wall_time: start.elapsed().as_secs_f64(),
        library_version: uncert_core::VERSION.into(),
    };
    out.finish(manifest)?;
    if failed > 0 {
        return Err(Failure::ChecksFailed(failed));
    }
    Ok(())
}
