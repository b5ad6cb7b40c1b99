//! Uniform cell-centered grids in space and velocity, and the global time-step plan.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::config(
                "axis",
                format!("need min < max, got [{min}, {max}]"),
            ));
        }
        if n == 0 {
            return Err(Error::config("axis", "cell count must be positive"));
        }
        Ok(Axis { min, max, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    /// Center of cell `i`, 1-based.
    pub fn center(&self, i: usize) -> f64 {
        self.min + (i as f64 - 0.5) * self.spacing()
    }

    pub fn max_speed(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

pub fn cell_centers(axis: &Axis) -> Vec<f64> {
    (1..=axis.n).map(|i| axis.center(i)).collect()
}

/// Velocity-cell centers and spacing for one velocity dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VelGrid1D {
    pub v: Vec<f64>,
    pub dv: f64,
}

impl VelGrid1D {
    pub fn new(axis: &Axis) -> Self {
        VelGrid1D {
            v: cell_centers(axis),
            dv: axis.spacing(),
        }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

/// Tensor-product velocity grid; flat index is `k * n2 + l` with `k` along v₁.
#[derive(Debug, Clone, PartialEq)]
pub struct VelGrid2D {
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub dv1: f64,
    pub dv2: f64,
}

impl VelGrid2D {
    pub fn new(a1: &Axis, a2: &Axis) -> Self {
        VelGrid2D {
            v1: cell_centers(a1),
            v2: cell_centers(a2),
            dv1: a1.spacing(),
            dv2: a2.spacing(),
        }
    }

    pub fn n1(&self) -> usize {
        self.v1.len()
    }

    pub fn n2(&self) -> usize {
        self.v2.len()
    }

    pub fn len(&self) -> usize {
        self.v1.len() * self.v2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weight(&self) -> f64 {
        self.dv1 * self.dv2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    D1V1,
    D2V2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMesh {
    pub dim: Dim,
    pub space: Vec<Axis>,
    pub vel: Vec<Axis>,
}

impl PhaseMesh {
    pub fn one_d(x: Axis, v: Axis) -> Self {
        PhaseMesh {
            dim: Dim::D1V1,
            space: vec![x],
            vel: vec![v],
        }
    }

    pub fn two_d(x: Axis, y: Axis, v1: Axis, v2: Axis) -> Self {
        PhaseMesh {
            dim: Dim::D2V2,
            space: vec![x, y],
            vel: vec![v1, v2],
        }
    }

    pub fn x(&self) -> &Axis {
        &self.space[0]
    }

    pub fn y(&self) -> &Axis {
        &self.space[1]
    }

    pub fn v1(&self) -> &Axis {
        &self.vel[0]
    }

    pub fn v2(&self) -> &Axis {
        &self.vel[1]
    }

    pub fn n_vel(&self) -> usize {
        self.vel.iter().map(|a| a.n).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePlan {
    pub dt: f64,
    pub n_steps: usize,
    pub cfl_effective: f64,
    pub t_final: f64,
}

pub fn plan_time(t_final: f64, cfl_request: f64, mesh: &PhaseMesh) -> Result<TimePlan> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::config(
            "t_final",
            format!("must be positive, got {t_final}"),
        ));
    }
    if !(cfl_request > 0.0 && cfl_request < 1.0) {
        return Err(Error::config(
            "cfl",
            format!("must lie in (0,1), got {cfl_request}"),
        ));
    }
    let (dt0, cfl_of): (f64, Box<dyn Fn(f64) -> f64>) = match mesh.dim {
        Dim::D1V1 => {
            let dx = mesh.x().spacing();
            let vmax = mesh.v1().max_speed();
            (cfl_request * dx / vmax, Box::new(move |dt| vmax * dt / dx))
        }
        Dim::D2V2 => {
            let (dx, dy) = (mesh.x().spacing(), mesh.y().spacing());
            let (v1, v2) = (mesh.v1().max_speed(), mesh.v2().max_speed());
            let dt0 = cfl_request * (dx / v1).min(dy / v2);
            (dt0, Box::new(move |dt| (v1 * dt / dx).max(v2 * dt / dy)))
        }
    };
    let n_steps = (t_final / dt0).ceil().max(1.0) as usize;
    let dt = t_final / n_steps as f64;
    Ok(TimePlan {
        dt,
        n_steps,
        cfl_effective: cfl_of(dt),
        t_final,
    })
}
