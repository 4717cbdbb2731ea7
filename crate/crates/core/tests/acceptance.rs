//! Acceptance checks. Each criterion prints one `PASS`/`FAIL` line with the
//! measured values; the test fails if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uncert_core::bounds::{self, dominance, dominance_regions};
use uncert_core::closedform::dischord_curve;
use uncert_core::covariant::{self, NoiseMargins};
use uncert_core::dist::transport::transport_points;
use uncert_core::special::{arc_ground_energy, cho_ground_energy};
use uncert_core::spectral::{self, build_hamiltonian, SolveOptions};
use uncert_core::tradeoff::{self, compare_families, hausdorff_with_refinement, sweep};
use uncert_core::{IntDist, MetricSpec, MetricT, MetricZ};

const STD_ARC: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Arc);
const STD_CHO: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Cho);
const DISC_ARC: MetricSpec = MetricSpec::new(MetricZ::Disc, MetricT::Arc);
const DISC_CHO: MetricSpec = MetricSpec::new(MetricZ::Disc, MetricT::Cho);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// 1
fn closed_form_curve() -> Outcome {
    let start = Instant::now();
    let curve = sweep(DISC_CHO, &tradeoff::default_grid(), &SolveOptions::default()).unwrap();
    let max_dy = curve
        .points
        .iter()
        .map(|p| (p.y - dischord_curve(p.x.min(2.0)).unwrap()).abs())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        max_dy < 1e-6 && secs < 30.0,
        format!("max |y - dischord(x)| = {max_dy:.3e} (tol 1e-6), {secs:.1} s (limit 30 s)"),
    )
}

// 2
fn mathieu_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &t in &[0.1, 1.0, 10.0] {
        let e = spectral::solve(STD_CHO, t, &SolveOptions::default()).unwrap().e0;
        worst = worst.max((e - cho_ground_energy(t).unwrap()).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-8 && secs < 5.0,
        format!("max |E0 - (2t + a0(-4t)/4)| = {worst:.3e} over t in {{0.1, 1, 10}} (tol 1e-8), {secs:.2} s"),
    )
}

// 3
fn hypergeometric_oracle() -> Outcome {
    let start = Instant::now();
    let e = spectral::solve(STD_ARC, 1.0, &SolveOptions::default()).unwrap().e0;
    let c = arc_ground_energy(1.0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let d = (e - c).abs();
    outcome(d < 1e-6 && secs < 5.0, format!("E0(1) = {e:.13}, boundary root = {c:.13}, diff {d:.3e} (tol 1e-6), {secs:.2} s"))
}

// 4
fn judge_tangency(arc: &tradeoff::TradeoffCurve) -> Outcome {
    let gaps: Vec<(f64, f64)> =
        arc.points.iter().filter_map(|p| bounds::judge_arc(p.x).ok().map(|j| (p.t, p.y - j))).collect();
    let min_gap = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    let at = gaps.iter().find(|g| g.1 == min_gap).map(|g| g.0).unwrap_or(f64::NAN);
    outcome(
        (-1e-9..=1e-3).contains(&min_gap),
        format!("min_t (y - judge_arc(x)) = {min_gap:.3e} at t = {at:.3e} over {} points (need in [-1e-9, 1e-3])", gaps.len()),
    )
}

// 5
fn family_constants(arc: &tradeoff::TradeoffCurve, cho: &tradeoff::TradeoffCurve) -> Outcome {
    let cmp = compare_families(arc, cho).unwrap();
    let h = hausdorff_with_refinement(STD_ARC, STD_CHO, 1e-3, 1e3, 200, &SolveOptions::default()).unwrap();
    let norm_ok = (cmp.max_norm_distance - 0.145).abs() <= 0.01;
    let haus_ok = h.value <= 0.033;
    let fid_ok = cmp.min_overlap >= 0.98;
    outcome(
        norm_ok && haus_ok && fid_ok,
        format!(
            "max ||psi_arc - psi_cho|| = {:.4} at t = {:.3e} (0.145 +- 0.01); Hausdorff = {:.4} (coarse {:.4}, bar {:.1e}, need <= 0.033); min |<psi_arc|psi_cho>| = {:.4} (squared {:.4}; need >= 0.98)",
            cmp.max_norm_distance, cmp.argmax_t, h.value, h.coarse_value, h.error_bar, cmp.min_overlap, cmp.min_fidelity
        ),
    )
}

// 6
fn bound_soundness() -> Outcome {
    let grid = tradeoff::log_grid(1e-3, 1e3, 500).unwrap();
    let cho = sweep(STD_CHO, &grid, &SolveOptions::default()).unwrap();
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    for p in &cho.points {
        let (Ok(j), Ok(cn), Ok(s)) = (bounds::judge_cho(p.x), bounds::cn_bound(p.x), bounds::second_order_cho_at(p.x))
        else {
            continue;
        };
        worst = worst.min(cn - j).min(p.y - cn).min(p.y - s);
        checked += 1;
    }
    let xs = bounds::interior_grid(0.05, 1.95, 498);
    let xs: Vec<f64> = std::iter::once(0.05).chain(xs).chain(std::iter::once(1.95)).collect();
    let rows = dominance(bounds::cn_bound, bounds::second_order_cho_at, &xs);
    let regions = dominance_regions(&rows);
    let report: Vec<String> = regions.iter().map(|(a, b)| format!("[{a:.4}, {b:.4}]")).collect();
    outcome(
        worst >= -1e-9 && checked == cho.points.len(),
        format!(
            "judge_cho <= cn <= sweep and second_order <= sweep at {checked} sweep points, min slack {worst:.3e} (need >= -1e-9); second-order above CN on x in {} of {} grid points, regions {}",
            rows.iter().filter(|r| r.margin() > 0.0).count(),
            rows.len(),
            if report.is_empty() { "none".to_string() } else { report.join(" ") }
        ),
    )
}

// 7
fn endpoints() -> Outcome {
    // The curve at t = 1e-3 still differs from the equidistribution limit
    // by O(t) in x (about 1.6e-2 for the arc metric), so the limits are
    // checked at extreme samples t = 1e-5 and t = 1e3.
    let (t_lo, t_hi) = (1e-5, 1e3);
    let opts = SolveOptions { require_certificate: false, ..SolveOptions::default() };
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    let mut check = |label: &str, spec: MetricSpec, t: f64, target: (f64, f64), opts: &SolveOptions| {
        let r = spectral::solve(spec, t, opts).unwrap();
        let (x, y) = tradeoff::variance_pair(&r, &spec).unwrap();
        let err = (x - target.0).abs().max((y - target.1).abs());
        worst = worst.max(err);
        parts.push(format!("{label} t={t:.0e}: ({x:.6}, {y:.6}) err {err:.2e} [n_max {}]", r.n_max));
    };
    let x_arc = PI * PI / 3.0;
    check("std/arc", STD_ARC, t_lo, (x_arc, 0.0), &opts);
    check("std/cho", STD_CHO, t_lo, (2.0, 0.0), &opts);
    check("disc/cho", DISC_CHO, t_lo, (2.0, 0.0), &opts);
    check("disc/arc", DISC_ARC, t_lo, (x_arc, 0.0), &opts);
    check("disc/cho", DISC_CHO, t_hi, (0.0, 1.0), &opts);
    // algebraic coefficient decay: no tail certificate at any dense truncation
    check("disc/arc", DISC_ARC, t_hi, (0.0, 1.0), &SolveOptions::fixed(2560));
    outcome(worst < 1e-3, format!("max endpoint error {worst:.3e} (tol 1e-3); {}", parts.join("; ")))
}

// 8
fn mu_equals_pu() -> Outcome {
    let ts = [0.1, 0.3, 1.0, 3.0, 10.0];
    let opts = SolveOptions { require_certificate: false, ..SolveOptions::default() };
    let sched = covariant::default_eps_schedule();
    let (mut z_err, mut t_metric, mut t_cal, mut bar) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    for spec in [STD_ARC, STD_CHO, DISC_ARC, DISC_CHO] {
        for &t in &ts {
            let r = spectral::solve(spec, t, &opts).unwrap();
            let noise = NoiseMargins::from_state(&r, covariant::DEFAULT_NOISE_GRID).unwrap();
            let rep = covariant::error_report(&noise, &spec, &sched).unwrap();
            let scale = rep.deviation_n.max(1e-300);
            z_err = z_err
                .max((rep.metric_error_n - rep.deviation_n).abs() / scale)
                .max((rep.calibration_n.limit - rep.deviation_n).abs() / scale);
            t_metric = t_metric.max((rep.metric_error_theta - rep.deviation_theta).abs());
            t_cal = t_cal.max((rep.calibration_theta.limit - rep.deviation_theta).abs());
            bar = bar.max(rep.calibration_theta.error_bar);
            n += 1;
        }
    }
    outcome(
        z_err < 1e-12 && t_metric < 1e-3 && t_cal < 1e-3,
        format!(
            "{n} states: Z metric/calibration relative error {z_err:.2e} (exact, tol 1e-12); T metric error {t_metric:.2e}, T calibration error {t_cal:.2e} (tol 1e-3, max extrapolation bar {bar:.1e})"
        ),
    )
}

/// Minimum cost over all vertices of the transportation polytope: spanning
/// trees of the bipartite support graph with non-negative tree flows.
fn enumerate_transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (m, n) = (supply.len(), demand.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let k = m + n - 1;
    let mut best = f64::INFINITY;
    let total = cells.len();
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..total).filter(|b| mask >> b & 1 == 1).map(|b| cells[b]).collect();
        let mut row = supply.to_vec();
        let mut col = demand.to_vec();
        let mut left = chosen.clone();
        let mut flows = Vec::new();
        let mut ok = true;
        while !left.is_empty() {
            // peel a leaf: a row or column that appears in exactly one remaining cell
            let leaf = left.iter().position(|&(i, j)| {
                left.iter().filter(|c| c.0 == i).count() == 1 || left.iter().filter(|c| c.1 == j).count() == 1
            });
            let Some(pos) = leaf else {
                ok = false;
                break;
            };
            let (i, j) = left.remove(pos);
            let row_leaf = left.iter().all(|c| c.0 != i);
            let f = if row_leaf { row[i] } else { col[j] };
            row[i] -= f;
            col[j] -= f;
            flows.push(((i, j), f));
        }
        if !ok || row.iter().chain(&col).any(|r| r.abs() > 1e-12) || flows.iter().any(|f| f.1 < -1e-14) {
            continue;
        }
        best = best.min(flows.iter().map(|&((i, j), f)| f * cost[i][j]).sum());
    }
    best
}

// 9
fn transport_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_enum = 0.0f64;
    for case in 0..200 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=4);
        let alpha = [1.0, 2.0, 1.5][case % 3];
        let weights = |rng: &mut ChaCha8Rng, k: usize| {
            let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|v| v / s).collect::<Vec<f64>>()
        };
        let (wa, wb) = (weights(&mut rng, m), weights(&mut rng, n));
        let on_z = case % 2 == 0;
        let (mz, mt) = (
            if case % 4 == 0 { MetricZ::Std } else { MetricZ::Disc },
            if case % 4 == 1 { MetricT::Arc } else { MetricT::Cho },
        );
        let d = |a: f64, b: f64| if on_z { mz.eval_real(a, b) } else { mt.eval(a, b) };
        let point = |rng: &mut ChaCha8Rng| if on_z { rng.gen_range(-6..=6) as f64 } else { rng.gen_range(-PI..PI) };
        let mu: Vec<(f64, f64)> = wa.iter().map(|&w| (point(&mut rng), w)).collect();
        let nu: Vec<(f64, f64)> = wb.iter().map(|&w| (point(&mut rng), w)).collect();
        let t = transport_points(&mu, &nu, d, alpha).unwrap();
        let costs: Vec<Vec<f64>> = mu.iter().map(|a| nu.iter().map(|b| d(a.0, b.0).powf(alpha)).collect()).collect();
        let exact = enumerate_transport(&wa, &wb, &costs);
        worst_enum = worst_enum.max((t.cost - exact).abs() / exact.max(1.0));
    }
    let mut worst_cdf = 0.0f64;
    for _ in 0..200 {
        let mk = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..=8);
            IntDist::normalized((0..k).map(|_| (rng.gen_range(-15..=15), rng.gen_range(0.01..1.0)))).unwrap()
        };
        let (a, b) = (mk(&mut rng), mk(&mut rng));
        let lp = a.transport_distance(&b, MetricZ::Std, 1.0).unwrap().distance;
        let (mut fa, mut fb, mut w1) = (0.0, 0.0, 0.0);
        for k in -15..15 {
            fa += a.prob(k);
            fb += b.prob(k);
            w1 += (fa - fb).abs();
        }
        worst_cdf = worst_cdf.max((lp - w1).abs());
    }
    outcome(
        worst_enum <= 1e-12 && worst_cdf <= 1e-10,
        format!("200 instances vs vertex enumeration: max rel diff {worst_enum:.2e} (tol 1e-12); 200 instances vs CDF formula: max diff {worst_cdf:.2e} (tol 1e-10)"),
    )
}

// 10
fn stability_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let specs = [STD_ARC, STD_CHO, DISC_ARC, DISC_CHO];
    let mut tested = 0;
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    let mut attempts = 0;
    while tested < 100 && attempts < 10_000 {
        attempts += 1;
        let spec = specs[attempts % 4];
        let t = 10f64.powf(rng.gen_range(-1.5..1.5));
        let r = spectral::solve(spec, t, &SolveOptions::fixed(80)).unwrap();
        let h = build_hamiltonian(spec, t, r.n_max).unwrap();
        let scale = 10f64.powf(rng.gen_range(-3.0..-0.5));
        let mut phi: Vec<f64> = r.psi_hat.iter().map(|c| c + scale * rng.gen_range(-1.0..1.0)).collect();
        // mostly local perturbations, sometimes mixing in the excited state
        if attempts % 3 == 0 {
            let w = rng.gen_range(0.0..0.7);
            phi.iter_mut().zip(&r.psi1_hat).for_each(|(p, e)| *p += w * e);
        }
        let norm = phi.iter().map(|v| v * v).sum::<f64>().sqrt();
        phi.iter_mut().for_each(|v| *v /= norm);
        let e_phi: f64 = phi.iter().zip(h.apply(&phi)).map(|(a, b)| a * b).sum();
        if e_phi >= r.e1 {
            continue;
        }
        let fid = tradeoff::overlap(&phi, &r.psi_hat).powi(2);
        let floor = (r.e1 - e_phi) / (r.e1 - r.e0);
        let margin = fid - floor;
        min_margin = min_margin.min(margin);
        if margin < -1e-12 {
            violations += 1;
        }
        tested += 1;
    }
    outcome(
        tested == 100 && violations == 0,
        format!("{tested} perturbed states with E_phi < E1, {violations} counterexamples, min (fidelity - floor) = {min_margin:.3e}"),
    )
}

fn truncation_note() -> Outcome {
    let mut worst = 0.0f64;
    for spec in [STD_ARC, STD_CHO] {
        for &t in &[0.1, 1.0, 10.0] {
            let a = spectral::solve(spec, t, &SolveOptions::fixed(80)).unwrap().e0;
            let b = spectral::solve(spec, t, &SolveOptions::fixed(160)).unwrap().e0;
            worst = worst.max((a - b).abs());
        }
    }
    outcome(worst < 1e-10, format!("max |E0(n_max=80) - E0(n_max=160)| = {worst:.2e} over std pairs, t in {{0.1, 1, 10}} (tol 1e-10)"))
}

// Run without the libtest harness so the criterion lines are always printed.
fn main() {
    let arc = sweep(STD_ARC, &tradeoff::default_grid(), &SolveOptions::default()).unwrap();
    let cho = sweep(STD_CHO, &tradeoff::default_grid(), &SolveOptions::default()).unwrap();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 closed-form curve equivalence", closed_form_curve()),
        ("2 Mathieu oracle", mathieu_oracle()),
        ("3 hypergeometric oracle", hypergeometric_oracle()),
        ("4 Judge optimal constant", judge_tangency(&arc)),
        ("5 family constants", family_constants(&arc, &cho)),
        ("6 bound soundness", bound_soundness()),
        ("7 endpoint values", endpoints()),
        ("8 MU=PU identity", mu_equals_pu()),
        ("9 transport engine", transport_engine()),
        ("10 stability bound", stability_bound()),
        ("note: n_max doubling invariance", truncation_note()),
    ];
    let mut failed = Vec::new();
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(*name);
        }
    }
    println!("acceptance: {} of {} passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
