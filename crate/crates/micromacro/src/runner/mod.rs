//! Case setup, time-loop orchestration, output files and the scaling harness.

pub mod config;
pub mod frame;
pub mod halo;
pub mod scaling;
pub mod solver1d;
pub mod solver2d;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, reference, CaseConfig, CaseName, Init, PrimState};
pub use frame::{read_frame, write_frame, Frame, MicroSlice};

use crate::error::{Error, Result};
use crate::mesh::{Dim, TimePlan};
use crate::mms::{convergence_table, ConvergenceRow};

/// Per-run record written next to the frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub case: String,
    pub eps: f64,
    pub steps: usize,
    pub dt: f64,
    pub cfl_effective: f64,
    pub t_final: f64,
    pub workers: (usize, usize),
    /// Domain integrals of the conserved quantities: mass, momentum component(s), energy.
    pub totals_initial: Vec<f64>,
    pub totals_final: Vec<f64>,
    pub seconds: f64,
    /// Relative L² errors (macro, micro) for manufactured-solution cases.
    pub mms_errors: Option<(f64, f64)>,
}

impl Summary {
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:.16e}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut s = String::new();
        let _ = writeln!(s, "case = {}", self.case);
        let _ = writeln!(s, "eps = {:e}", self.eps);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "dt = {:.16e}", self.dt);
        let _ = writeln!(s, "cfl_effective = {:.6}", self.cfl_effective);
        let _ = writeln!(s, "t_final = {:.16e}", self.t_final);
        let _ = writeln!(s, "workers = {}x{}", self.workers.0, self.workers.1);
        let _ = writeln!(s, "totals_initial = {}", list(&self.totals_initial));
        let _ = writeln!(s, "totals_final = {}", list(&self.totals_final));
        let drift: Vec<f64> = self
            .totals_initial
            .iter()
            .zip(&self.totals_final)
            .map(|(a, b)| b - a)
            .collect();
        let _ = writeln!(s, "totals_drift = {}", list(&drift));
        let _ = writeln!(s, "seconds = {:.3}", self.seconds);
        if let Some((ma, mi)) = self.mms_errors {
            let _ = writeln!(s, "macro_error = {ma:.6e}\nmicro_error = {mi:.6e}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub frames: Vec<Frame>,
    pub summary: Summary,
}

impl RunOutput {
    pub fn last(&self) -> &Frame {
        self.frames
            .last()
            .expect("a run always records its final frame")
    }
}

/// Steps at which frames are recorded: the first step whose time reaches each requested
/// output time, plus the final step.
pub fn output_steps(times: &[f64], plan: &TimePlan, n_steps: usize) -> Vec<usize> {
    let tol = 1e-12 * plan.t_final;
    let mut steps: Vec<usize> = times
        .iter()
        .map(|&t| ((t - tol) / plan.dt).ceil().max(0.0) as usize)
        .filter(|&s| s <= n_steps)
        .collect();
    steps.push(n_steps);
    steps.sort_unstable();
    steps.dedup();
    steps
}

/// Run one configuration at a single ε.
pub fn run_case(cfg: &CaseConfig, eps: f64) -> Result<RunOutput> {
    cfg.validate()?;
    match cfg.dim {
        Dim::D1V1 => solver1d::run_1d(cfg, eps),
        Dim::D2V2 => solver2d::run_2d(cfg, eps),
    }
}

/// Run every ε of a configuration and write frames and summaries under `out`. With several ε
/// values each run gets its own `eps_<value>` subdirectory.
pub fn solve_and_write(cfg: &CaseConfig, out: &Path) -> Result<Vec<(PathBuf, RunOutput)>> {
    cfg.validate()?;
    let mut done = Vec::new();
    for &eps in &cfg.eps {
        let dir = if cfg.eps.len() == 1 {
            out.to_path_buf()
        } else {
            out.join(format!("eps_{eps:e}"))
        };
        let run = run_case(cfg, eps)?;
        for f in &run.frames {
            write_frame(f, &dir)?;
        }
        write_text(&dir.join("summary.txt"), &run.summary.to_text())?;
        done.push((dir, run));
    }
    Ok(done)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            msg: e.to_string(),
        })?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// Manufactured-solution convergence study over N = base·2^k, k < levels. The spatial and
/// velocity resolutions are refined together.
pub fn mms_convergence(case: CaseName, levels: usize) -> Result<Vec<ConvergenceRow>> {
    let base = match case {
        CaseName::Mms1d => 10,
        CaseName::Mms2d => 20,
        _ => {
            return Err(Error::config(
                "case",
                "convergence studies need an mms case",
            ))
        }
    };
    let cfg = reference(case)?;
    let mut rows = Vec::with_capacity(levels);
    for k in 0..levels {
        let n = base << k;
        let c = CaseConfig {
            nx: n,
            ny: if case == CaseName::Mms2d { n } else { 1 },
            nv1: n,
            nv2: if case == CaseName::Mms2d { n } else { 1 },
            ..cfg.clone()
        };
        let run = run_case(&c, c.eps[0])?;
        let (ma, mi) = run.summary.mms_errors.expect("mms runs report errors");
        rows.push((n, ma, mi));
    }
    Ok(convergence_table(&rows))
}

/// Scaled centreline heat flux |h|/ε for each ε of a Knudsen sweep.
pub fn knudsen_sweep(cfg: &CaseConfig, eps_list: &[f64]) -> Result<Vec<(f64, f64, RunOutput)>> {
    eps_list
        .iter()
        .map(|&eps| {
            let run = run_case(cfg, eps)?;
            let h = solver1d::centre_heat_flux(run.last(), eps);
            Ok((eps, h, run))
        })
        .collect()
}

pub const SWEEP_HEADER: &str = "eps,scaled_heat_flux";

pub fn format_sweep(rows: &[(f64, f64)]) -> String {
    let mut s = format!("{SWEEP_HEADER}\n");
    for (e, h) in rows {
        let _ = writeln!(s, "{e:e},{h:.10e}");
    }
    s
}
