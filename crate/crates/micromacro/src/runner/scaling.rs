//! Weak and strong scaling runs of the lid-driven cavity.
//!
//! Weak scaling keeps a fixed block per worker, so the global grid grows like √P in each
//! direction and the step count grows with it. Strong scaling splits one fixed grid. In both
//! modes the smallest worker count is the baseline, and the ideal time is
//!
//! ```text
//! weak:   t_ideal(P) = √(P / P₀) · t(P₀)
//! strong: t_ideal(P) = P₀ · t(P₀) / P
//! ```
//!
//! with efficiency t_ideal / t.

use std::fmt;
use std::str::FromStr;

use super::config::{reference, CaseConfig, CaseName};
use super::run_case;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleMode {
    Weak,
    Strong,
}

impl ScaleMode {
    pub fn name(self) -> &'static str {
        match self {
            ScaleMode::Weak => "weak",
            ScaleMode::Strong => "strong",
        }
    }
}

impl FromStr for ScaleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(ScaleMode::Weak),
            "strong" => Ok(ScaleMode::Strong),
            _ => Err(Error::config(
                "mode",
                format!("`{s}` is not weak or strong"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleOptions {
    pub mode: ScaleMode,
    pub workers: Vec<usize>,
    /// Cells per worker along each direction in weak mode.
    pub block: usize,
    /// Global cells along each direction in strong mode.
    pub n: usize,
    pub nv: usize,
    /// Cap on the step count; `None` runs to the final time.
    pub max_steps: Option<usize>,
}

impl ScaleOptions {
    pub fn new(mode: ScaleMode, workers: Vec<usize>) -> Self {
        ScaleOptions {
            mode,
            workers,
            block: 36,
            n: 360,
            nv: 14,
            max_steps: None,
        }
    }
}

/// One timed run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub mode: ScaleMode,
    pub workers: usize,
    pub grid: (usize, usize),
    pub nx: usize,
    pub ny: usize,
    pub nv1: usize,
    pub nv2: usize,
    pub steps: usize,
    pub seconds: f64,
    pub ideal_seconds: f64,
    pub efficiency: f64,
}

impl fmt::Display for TimingRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} workers={} grid={}x{} nx={} ny={} nv1={} nv2={} steps={} seconds={:.6e} ideal_seconds={:.6e} efficiency={:.6}",
            self.mode.name(),
            self.workers,
            self.grid.0,
            self.grid.1,
            self.nx,
            self.ny,
            self.nv1,
            self.nv2,
            self.steps,
            self.seconds,
            self.ideal_seconds,
            self.efficiency
        )
    }
}

impl FromStr for TimingRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let mut kv = std::collections::HashMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("`{tok}` is not key=value")))?;
            kv.insert(k, v);
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| bad(format!("missing `{k}`")))
        };
        let int = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| bad(format!("bad integer for `{k}`")))
        };
        let float = |k: &str| -> Result<f64> {
            get(k)?
                .parse()
                .map_err(|_| bad(format!("bad number for `{k}`")))
        };
        Ok(TimingRecord {
            mode: get("mode")?.parse()?,
            workers: int("workers")?,
            grid: parse_grid(get("grid")?)?,
            nx: int("nx")?,
            ny: int("ny")?,
            nv1: int("nv1")?,
            nv2: int("nv2")?,
            steps: int("steps")?,
            seconds: float("seconds")?,
            ideal_seconds: float("ideal_seconds")?,
            efficiency: float("efficiency")?,
        })
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    super::config::parse_worker_grid(s)
}

/// The most square r×c = p with r ≤ c.
pub fn factor_workers(p: usize) -> (usize, usize) {
    let r = (1..=p)
        .take_while(|r| r * r <= p)
        .filter(|r| p % r == 0)
        .last()
        .unwrap_or(1);
    (r, p / r)
}

pub fn ideal_time(mode: ScaleMode, base_workers: usize, base_seconds: f64, workers: usize) -> f64 {
    let ratio = workers as f64 / base_workers as f64;
    match mode {
        ScaleMode::Weak => ratio.sqrt() * base_seconds,
        ScaleMode::Strong => base_seconds / ratio,
    }
}

/// Lid-cavity configuration for `p` workers.
pub fn scaling_config(opts: &ScaleOptions, p: usize) -> Result<CaseConfig> {
    let (rows, cols) = factor_workers(p);
    let (nx, ny) = match opts.mode {
        ScaleMode::Weak => (opts.block * cols, opts.block * rows),
        ScaleMode::Strong => (opts.n, opts.n),
    };
    let cfg = CaseConfig {
        nx,
        ny,
        nv1: opts.nv,
        nv2: opts.nv,
        workers: (rows, cols),
        max_steps: opts.max_steps,
        output_times: Vec::new(),
        micro_cells: Vec::new(),
        ..reference(CaseName::LidCavity)?
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Fill ideal times and efficiencies from the smallest worker count.
pub fn apply_ideal(records: &mut [TimingRecord]) {
    let Some(base) = records
        .iter()
        .min_by_key(|r| r.workers)
        .map(|r| (r.workers, r.seconds))
    else {
        return;
    };
    for r in records {
        r.ideal_seconds = ideal_time(r.mode, base.0, base.1, r.workers);
        r.efficiency = if r.seconds > 0.0 {
            r.ideal_seconds / r.seconds
        } else {
            1.0
        };
    }
}

/// Time one lid-cavity run per worker count. All configurations are checked before any run.
pub fn scaling_study(opts: &ScaleOptions) -> Result<Vec<TimingRecord>> {
    if opts.workers.is_empty() || opts.workers.contains(&0) {
        return Err(Error::config("workers", "worker counts must be positive"));
    }
    let cfgs: Vec<CaseConfig> = opts
        .workers
        .iter()
        .map(|&p| scaling_config(opts, p))
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(cfgs.len());
    for (cfg, &p) in cfgs.iter().zip(&opts.workers) {
        let run = run_case(cfg, cfg.eps[0])?;
        records.push(TimingRecord {
            mode: opts.mode,
            workers: p,
            grid: cfg.workers,
            nx: cfg.nx,
            ny: cfg.ny,
            nv1: cfg.nv1,
            nv2: cfg.nv2,
            steps: run.summary.steps,
            seconds: run.summary.seconds,
            ideal_seconds: 0.0,
            efficiency: 0.0,
        });
    }
    apply_ideal(&mut records);
    Ok(records)
}

pub fn format_records(records: &[TimingRecord]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}
