//! File formats shared by the library and the command-line tool.
//!
//! CSV files have a header row, `.` decimals, LF line endings and every
//! float written with 17 significant digits (`{:.16e}`), so identical runs
//! give byte-identical files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::closedform::ClosedFormPoint;
use crate::error::{Error, Result};
use crate::metrics::MetricSpec;
use crate::tradeoff::TradeoffCurve;

/// Header of the sweep CSV.
pub const CURVE_HEADER: &str = "t,x,y,E0,E1,gap,n_max";
/// Header of CSVs that mix curves from several sources.
pub const SOURCE_HEADER: &str = "source,x,y";
/// Header of the ground versus first excited pairs.
pub const EXCITED_HEADER: &str = "t,x0,y0,x1,y1";
/// Header of sampled ground-state wave functions.
pub const WAVE_HEADER: &str = "t,theta,psi";

/// Fixed float formatting used in every CSV.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `t,x,y,E0,E1,gap,n_max` rows of a sweep.
pub fn curve_csv(curve: &TradeoffCurve) -> String {
    let mut s = String::with_capacity(128 * (curve.points.len() + 1));
    s.push_str(CURVE_HEADER);
    s.push('\n');
    for p in &curve.points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_f64(p.t),
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(p.e0),
            fmt_f64(p.e1),
            fmt_f64(p.gap()),
            p.n_max
        );
    }
    s
}

/// Closed-form samples in the sweep schema; `E1`, `gap` are empty and
/// `n_max` is `0`.
pub fn closed_form_csv(points: &[ClosedFormPoint]) -> String {
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},,,0",
            fmt_f64(p.t),
            fmt_f64(p.solution.x),
            fmt_f64(p.solution.y),
            fmt_f64(p.e0)
        );
    }
    s
}

/// `source,x,y` rows, e.g. `source=bound:cn`.
pub fn source_csv(source: &str, points: &[(f64, f64)]) -> String {
    let mut s = String::from(SOURCE_HEADER);
    s.push('\n');
    for &(x, y) in points {
        let _ = writeln!(s, "{source},{},{}", fmt_f64(x), fmt_f64(y));
    }
    s
}

/// Uncertainty pairs of the ground and first excited states at each `t`.
pub fn excited_csv(curve: &TradeoffCurve) -> String {
    let mut s = String::from(EXCITED_HEADER);
    s.push('\n');
    for p in &curve.points {
        let _ = writeln!(s, "{},{},{},{},{}", fmt_f64(p.t), fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.x1), fmt_f64(p.y1));
    }
    s
}

/// `sqrt(2 pi) psi(theta)` of every `stride`-th ground state on `grid` equally
/// spaced angles in `[-pi, pi]`.
pub fn wavefunction_csv(curve: &TradeoffCurve, stride: usize, grid: usize) -> Result<String> {
    if stride == 0 || grid < 2 {
        return Err(Error::InvalidArgument(format!("bad wave-function sampling: stride {stride}, grid {grid}")));
    }
    let mut s = String::from(WAVE_HEADER);
    s.push('\n');
    for (p, psi) in curve.points.iter().zip(&curve.states).step_by(stride) {
        let n_max = psi.len() / 2;
        for j in 0..grid {
            let theta = -PI + 2.0 * PI * j as f64 / (grid - 1) as f64;
            let v = crate::spectral::position_value(psi, n_max, theta);
            let _ = writeln!(s, "{},{},{}", fmt_f64(p.t), fmt_f64(theta), fmt_f64(v));
        }
    }
    Ok(s)
}

/// Generic CSV from a header and rows of already formatted cells.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// Ground states of a sweep, one entry per `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub t: f64,
    pub n_max: usize,
    /// Coefficients `psi_hat_n` for `n = -n_max..=n_max`.
    pub psi_hat: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatesFile {
    pub spec: MetricSpec,
    pub states: Vec<StateRecord>,
}

impl StatesFile {
    pub fn from_curve(curve: &TradeoffCurve) -> Self {
        StatesFile {
            spec: curve.spec,
            states: curve
                .points
                .iter()
                .zip(&curve.states)
                .map(|(p, s)| StateRecord { t: p.t, n_max: p.n_max, psi_hat: s.clone() })
                .collect(),
        }
    }
}

/// Record of one command-line run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<MetricSpec>,
    pub grids: serde_json::Value,
    pub tolerances: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
    /// Extra results (checks, maxima) reported by the command.
    #[serde(default)]
    pub results: serde_json::Value,
    pub wall_time: f64,
    pub library_version: String,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Write via a temporary file in the same directory and rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(io)
}

/// Writes files into an output directory and removes everything it wrote
/// if dropped before [`OutputSet::finish`].
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    written: Vec<String>,
    done: bool,
}

impl OutputSet {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(OutputSet { dir: dir.to_path_buf(), written: Vec::new(), done: false })
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        write_atomic(&self.dir.join(name), contents.as_ref())?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.written
    }

    /// Write the manifest (listing every output) last and keep the files.
    pub fn finish(mut self, mut manifest: RunManifest) -> Result<()> {
        manifest.outputs = self.written.clone();
        let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
        write_atomic(&self.dir.join(MANIFEST_NAME), format!("{json}\n").as_bytes())?;
        self.done = true;
        Ok(())
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if !self.done {
            for name in &self.written {
                let _ = std::fs::remove_file(self.dir.join(name));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tradeoff::CurvePoint;

    fn tiny_curve() -> TradeoffCurve {
        TradeoffCurve {
            spec: MetricSpec::default(),
            points: vec![CurvePoint { t: 0.5, x: 1.25, y: 0.1, e0: 0.725, e1: 2.0, n_max: 80, tail: 0.0, x1: 0.5, y1: 1.75 }],
            states: vec![vec![0.0, 1.0, 0.0]],
        }
    }

    #[test]
    fn curve_csv_format() {
        let s = curve_csv(&tiny_curve());
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some(CURVE_HEADER));
        let row = lines.next().unwrap();
        assert_eq!(
            row,
            "5.0000000000000000e-1,1.2500000000000000e0,1.0000000000000001e-1,7.2499999999999998e-1,2.0000000000000000e0,1.2749999999999999e0,80"
        );
        assert!(!s.contains('\r'));
        let back: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn excited_and_wavefunction_rows() {
        let c = tiny_curve();
        let e = excited_csv(&c);
        assert_eq!(e.lines().nth(1), Some("5.0000000000000000e-1,1.2500000000000000e0,1.0000000000000001e-1,5.0000000000000000e-1,1.7500000000000000e0"));
        let w = wavefunction_csv(&c, 1, 5).unwrap();
        let rows: Vec<&str> = w.lines().collect();
        assert_eq!(rows[0], WAVE_HEADER);
        assert_eq!(rows.len(), 6);
        assert!(rows[1..].iter().all(|r| r.ends_with(",1.0000000000000000e0")));
        assert!(wavefunction_csv(&c, 0, 5).is_err());
    }

    #[test]
    fn source_rows() {
        let s = source_csv("bound:cn", &[(0.5, 0.25)]);
        assert_eq!(s, "source,x,y\nbound:cn,5.0000000000000000e-1,2.5000000000000000e-1\n");
    }

    #[test]
    fn output_set_cleans_up_on_drop() {
        let dir = std::env::temp_dir().join(format!("uncert-export-{}", std::process::id()));
        {
            let mut o = OutputSet::new(&dir).unwrap();
            o.write("a.csv", "x\n").unwrap();
            assert!(dir.join("a.csv").exists());
        }
        assert!(!dir.join("a.csv").exists());
        let mut o = OutputSet::new(&dir).unwrap();
        o.write("b.csv", "x\n").unwrap();
        let m = RunManifest {
            command: "test".into(),
            spec: None,
            grids: serde_json::Value::Null,
            tolerances: serde_json::Value::Null,
            n_max: None,
            outputs: vec![],
            results: serde_json::Value::Null,
            wall_time: 0.0,
            library_version: "0".into(),
        };
        o.finish(m).unwrap();
        let text = std::fs::read_to_string(dir.join(MANIFEST_NAME)).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.outputs, vec!["b.csv".to_string()]);
        assert!(dir.join("b.csv").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn states_file_roundtrip() {
        let f = StatesFile::from_curve(&tiny_curve());
        let back: StatesFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
