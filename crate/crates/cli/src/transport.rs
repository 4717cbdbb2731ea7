use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use uncert_core::dist::AnyDist;
use uncert_core::export::write_atomic;
use uncert_core::{MetricT, MetricZ};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Z,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Std,
    Disc,
    Arc,
    Cho,
}

#[derive(Args, Debug)]
pub struct TransportArgs {
    #[arg(long, value_enum, ignore_case = true)]
    space: Space,
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long)]
    mu: PathBuf,
    #[arg(long)]
    nu: PathBuf,
    /// Where to write the optimal coupling as JSON.
    #[arg(long, default_value = "coupling.json")]
    out: PathBuf,
}

fn read_dist(path: &Path) -> Result<AnyDist, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    AnyDist::from_json(&s).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn run(a: &TransportArgs) -> Result<(), Failure> {
    if !(a.alpha >= 1.0 && a.alpha.is_finite()) {
        return Err(Failure::Usage(format!("--alpha must be a finite number >= 1, got {}", a.alpha)));
    }
    let (mu, nu) = (read_dist(&a.mu)?, read_dist(&a.nu)?);
    let t = match (a.space, mu, nu) {
        (Space::Z, AnyDist::Z(mu), AnyDist::Z(nu)) => {
            let m = match a.metric {
                MetricArg::Std => MetricZ::Std,
                MetricArg::Disc => MetricZ::Disc,
                _ => return Err(Failure::Usage("--space z takes --metric std or disc".into())),
            };
            mu.transport_distance(&nu, m, a.alpha)?
        }
        (Space::T, AnyDist::T(mu), AnyDist::T(nu)) => {
            let m = match a.metric {
                MetricArg::Arc => MetricT::Arc,
                MetricArg::Cho => MetricT::Cho,
                _ => return Err(Failure::Usage("--space t takes --metric arc or cho".into())),
            };
            mu.transport_distance(&nu, m, a.alpha)?
        }
        _ => return Err(Failure::Usage("distribution files do not match --space".into())),
    };
    let json = serde_json::to_string_pretty(&t).expect("transport serialises") + "\n";
    write_atomic(&a.out, json.as_bytes())?;
    println!("{:.16e}", t.distance);
    Ok(())
}
