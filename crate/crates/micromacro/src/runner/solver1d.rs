//! 1D1V time loop: micro step, heat flux, then the conservative macro step.

use std::f64::consts::PI;
use std::time::Instant;

use super::config::{CaseConfig, CaseName, Init, PrimState};
use super::frame::{Frame, MicroSlice, FIELDS_1D};
use super::{output_steps, RunOutput, Summary};
use crate::boundary::{
    apply_wall_temperatures_1d, fill_heat_ghosts_1d, fill_macro_ghosts_1d, fill_micro_ghosts_1d,
    Bc1D,
};
use crate::error::{Error, Result};
use crate::gas_state::{maxwellian_1d, primitives_1d, CollisionModel, Macro1D, Prim1D};
use crate::macro1d::{heat_flux_1d, macro_step_1d};
use crate::mesh::{cell_centers, plan_time, VelGrid1D};
use crate::micro1d::{ghat_1d, interface_temperatures_1d, micro_step_1d, Grid1D, MicroField1D};
use crate::mms::{relative_l2, Mms1D, MmsSource1D};

fn state(s: &PrimState) -> Macro1D {
    Macro1D::from_prim(s.rho, s.u1, s.t)
}

fn wave(x: f64) -> Macro1D {
    let a = 2.0 * PI * x;
    Macro1D::from_prim(
        1.0 + 0.2 * a.sin(),
        0.3 + 0.1 * a.cos(),
        1.0 + 0.1 * (a + 0.5).sin(),
    )
}

/// Cell-centre macro state and G at t = 0, ghosts included (left zero).
pub fn initial_state_1d(
    cfg: &CaseConfig,
    eps: f64,
    grid: &Grid1D,
    xc: &[f64],
) -> (Vec<Macro1D>, MicroField1D) {
    let nx = grid.nx;
    let mut q = vec![Macro1D::from_prim(1.0, 0.0, 1.0); nx + 2];
    let mut g = MicroField1D::zeros(nx, grid.nv());
    for i in 1..=nx {
        let x = xc[i - 1];
        q[i] = match cfg.init {
            Init::Mms => Mms1D::exact_macro(0.0, x),
            Init::Uniform(s) => state(&s),
            Init::Riemann { left, right, split } => state(if x < split { &left } else { &right }),
            Init::Wave => wave(x),
        };
        if cfg.init == Init::Mms {
            let case = Mms1D::new(eps);
            for (o, &v) in g.row_mut(i).iter_mut().zip(&grid.vg.v) {
                *o = case.g_exact(0.0, x, v);
            }
        }
    }
    (q, g)
}

fn totals(q: &[Macro1D], dx: f64) -> Vec<f64> {
    let mut t = vec![0.0; 3];
    for c in &q[1..q.len() - 1] {
        for (a, b) in t.iter_mut().zip(c.to_array()) {
            *a += b * dx;
        }
    }
    t
}

fn make_frame(
    cfg: &CaseConfig,
    eps: f64,
    q: &[Macro1D],
    g: &MicroField1D,
    h: &[f64],
    step: usize,
    time: f64,
) -> Frame {
    let nx = cfg.nx;
    let mut values = Vec::with_capacity(nx * 4);
    for i in 1..=nx {
        let a = q[i].to_array();
        values.extend_from_slice(&[a[0], a[1], a[2], h[i]]);
    }
    let micro = cfg
        .micro_cells
        .iter()
        .map(|&(i, j)| MicroSlice {
            cell: (i, j),
            values: g.row(i).to_vec(),
        })
        .collect();
    Frame {
        dim: 1,
        nx,
        ny: 1,
        nv1: cfg.nv1,
        nv2: 1,
        time,
        step,
        eps,
        fields: FIELDS_1D.iter().map(|s| s.to_string()).collect(),
        values,
        micro,
    }
}

/// Mutable state of a 1D run between steps.
pub struct Solver1D {
    pub grid: Grid1D,
    pub bc: Bc1D,
    pub model: CollisionModel,
    pub eps: f64,
    pub dt: f64,
    pub xc: Vec<f64>,
    pub q: Vec<Macro1D>,
    pub g: MicroField1D,
    pub h: Vec<f64>,
    mms: Option<(Mms1D, MmsSource1D)>,
}

impl Solver1D {
    pub fn new(cfg: &CaseConfig, eps: f64, dt: f64) -> Result<Self> {
        let mesh = cfg.mesh()?;
        let grid = Grid1D::new(&mesh);
        let xc = cell_centers(mesh.x());
        let (q, g) = initial_state_1d(cfg, eps, &grid, &xc);
        let mms =
            (cfg.case == CaseName::Mms1d).then(|| (Mms1D::new(eps), MmsSource1D::new(&grid.vg)));
        let mut s = Solver1D {
            h: vec![0.0; grid.nx + 2],
            grid,
            bc: cfg.bc1d()?,
            model: cfg.model()?,
            eps,
            dt,
            xc,
            q,
            g,
            mms,
        };
        for i in 1..=s.grid.nx {
            primitives_1d(&s.q[i]).map_err(|e| Error::state(&[i], e.to_string()))?;
        }
        s.h = heat_flux_1d(&s.g, &s.grid.vg, eps);
        fill_heat_ghosts_1d(&mut s.h, &s.bc);
        Ok(s)
    }

    /// Advance from tⁿ = n·Δt to tⁿ⁺¹.
    pub fn step(&mut self, n: usize) -> Result<()> {
        let (nx, dt, eps) = (self.grid.nx, self.dt, self.eps);
        let tn = n as f64 * dt;
        fill_macro_ghosts_1d(&mut self.q, &self.bc)?;
        let prims: Vec<Prim1D> = self
            .q
            .iter()
            .enumerate()
            .map(|(i, c)| primitives_1d(c).map_err(|e| Error::state(&[i], e.to_string())))
            .collect::<Result<_>>()?;
        let mut t_face = interface_temperatures_1d(&prims);
        apply_wall_temperatures_1d(&mut t_face, &prims, &self.bc);
        let mut ghat = ghat_1d(&prims, &t_face, &self.model, &self.grid);
        if let Some((case, src)) = &self.mms {
            for i in 1..=nx {
                let tau = self.model.tau(prims[i].rho, prims[i].t);
                src.add(
                    case,
                    tn,
                    self.xc[i - 1],
                    &self.grid.vg,
                    1.0 / tau,
                    ghat.row_mut(i),
                );
            }
        }
        fill_micro_ghosts_1d(&mut self.g, &self.bc);
        self.g = micro_step_1d(&self.g, &prims, &ghat, &self.model, &self.grid, dt, eps)?;
        self.h = heat_flux_1d(&self.g, &self.grid.vg, eps);
        fill_heat_ghosts_1d(&mut self.h, &self.bc);
        let source: Option<Vec<[f64; 3]>> = self.mms.as_ref().map(|_| {
            self.xc
                .iter()
                .map(|&x| Mms1D::macro_source(tn, x).map(|s| dt * s))
                .collect()
        });
        self.q = macro_step_1d(&self.q, &self.h, source.as_deref(), self.grid.dx, dt)?;
        Ok(())
    }

    /// Relative L² errors of (ρ, ρu, ℰ) and of G against the manufactured solution at time t.
    pub fn mms_errors(&self, t: f64) -> Result<(f64, f64)> {
        let (case, _) = self
            .mms
            .as_ref()
            .ok_or_else(|| Error::config("case", "not a manufactured-solution run"))?;
        let (mut num, mut ex) = (Vec::new(), Vec::new());
        let (mut gn, mut ge) = (Vec::new(), Vec::new());
        for i in 1..=self.grid.nx {
            let x = self.xc[i - 1];
            num.extend(self.q[i].to_array());
            ex.extend(Mms1D::exact_macro(t, x).to_array());
            gn.extend_from_slice(self.g.row(i));
            ge.extend(self.grid.vg.v.iter().map(|&v| case.g_exact(t, x, v)));
        }
        Ok((relative_l2(&num, &ex)?, relative_l2(&gn, &ge)?))
    }
}

pub fn run_1d(cfg: &CaseConfig, eps: f64) -> Result<RunOutput> {
    let start = Instant::now();
    let mesh = cfg.mesh()?;
    let plan = plan_time(cfg.t_final, cfg.cfl, &mesh)?;
    let n_steps = cfg.max_steps.map_or(plan.n_steps, |m| m.min(plan.n_steps));
    let outputs = output_steps(&cfg.output_times, &plan, n_steps);
    let mut s = Solver1D::new(cfg, eps, plan.dt)?;
    let totals_initial = totals(&s.q, s.grid.dx);
    let mut frames = Vec::with_capacity(outputs.len());
    let mut next_out = outputs.iter().peekable();
    for n in 0..=n_steps {
        if next_out.peek() == Some(&&n) {
            next_out.next();
            frames.push(make_frame(
                cfg,
                eps,
                &s.q,
                &s.g,
                &s.h,
                n,
                n as f64 * plan.dt,
            ));
        }
        if n < n_steps {
            s.step(n).map_err(|e| e.at_step(n))?;
        }
    }
    let t_end = n_steps as f64 * plan.dt;
    let mms_errors = if cfg.case == CaseName::Mms1d {
        Some(s.mms_errors(t_end)?)
    } else {
        None
    };
    Ok(RunOutput {
        frames,
        summary: Summary {
            case: cfg.case.name().to_string(),
            eps,
            steps: n_steps,
            dt: plan.dt,
            cfl_effective: plan.cfl_effective,
            t_final: t_end,
            workers: (1, 1),
            totals_initial,
            totals_final: totals(&s.q, s.grid.dx),
            seconds: start.elapsed().as_secs_f64(),
            mms_errors,
        },
    })
}

/// |H|/ε at the centre cell (nx+1)/2.
pub fn centre_heat_flux(frame: &Frame, eps: f64) -> f64 {
    let i = frame.nx.div_ceil(2);
    frame.record(i, 1)[3].abs() / eps
}

/// Centreline distribution f = ℳ + εG at the centre cell, from a frame that stores its micro slice.
pub fn centre_pdf(frame: &Frame, vg: &VelGrid1D) -> Result<Vec<f64>> {
    let i = frame.nx.div_ceil(2);
    let slice = frame.micro_at(i, 1).ok_or_else(|| {
        Error::config(
            "micro_cells",
            format!("frame has no micro slice at cell {i}"),
        )
    })?;
    let r = frame.record(i, 1);
    let p = primitives_1d(&Macro1D {
        rho: r[0],
        mom: r[1],
        ener: r[2],
    })?;
    Ok(vg
        .v
        .iter()
        .zip(&slice.values)
        .map(|(&v, &g)| maxwellian_1d(p.rho, p.u, p.t, v) + frame.eps * g)
        .collect())
}

/// Free-molecular solution between walls at T_C (left) and T_H (right): the v > 0 half is a
/// half-Maxwellian at T_C, the v < 0 half one at T_H, with densities ρ_C = 2/(1+√(T_C/T_H)),
/// ρ_H = ρ_C√(T_C/T_H).
pub fn free_molecular_pdf(vg: &VelGrid1D, t_c: f64, t_h: f64) -> Vec<f64> {
    let r = (t_c / t_h).sqrt();
    let rho_c = 2.0 / (1.0 + r);
    let rho_h = rho_c * r;
    vg.v.iter()
        .map(|&v| {
            if v > 0.0 {
                maxwellian_1d(rho_c, 0.0, t_c, v)
            } else {
                maxwellian_1d(rho_h, 0.0, t_h, v)
            }
        })
        .collect()
}

/// Closed-form interpolation of the scaled heat flux between the continuum and free-molecular limits.
pub fn harmonic_heat_flux(eps: f64) -> f64 {
    0.0834227284897751706 / (0.2780757616325839021 + eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::{reference, MMS1D};
    use crate::runner::parse_config;

    #[test]
    fn free_molecular_pdf_carries_unit_density_and_no_mass_flux() {
        let vg = VelGrid1D::new(&crate::mesh::Axis::new(-12.0, 12.0, 4000).unwrap());
        let f = free_molecular_pdf(&vg, 1.0, 1.2);
        let m0: f64 = f.iter().sum::<f64>() * vg.dv;
        let m1: f64 = f.iter().zip(&vg.v).map(|(a, v)| a * v).sum::<f64>() * vg.dv;
        assert!((m0 - 1.0).abs() < 1e-6, "{m0}");
        assert!(m1.abs() < 1e-6, "{m1}");
    }

    #[test]
    fn harmonic_limits() {
        assert!((harmonic_heat_flux(0.0) - 0.3).abs() < 1e-3);
        assert!((harmonic_heat_flux(1e6) * 1e6 - 0.0834227284897751706).abs() < 1e-6);
    }

    #[test]
    fn mms_initial_state_is_exact() {
        let cfg = reference(CaseName::Mms1d).unwrap();
        let s = Solver1D::new(&cfg, 0.1, 1e-3).unwrap();
        assert!(s.mms_errors(0.0).unwrap().0 == 0.0 && s.mms_errors(0.0).unwrap().1 == 0.0);
    }

    #[test]
    fn short_periodic_run_conserves() {
        let text = MMS1D
            .replace("case = mms1d", "case = custom\ndim = 1\ninit = wave")
            .replace("t_final = 0.9351", "t_final = 0.05");
        let cfg = parse_config(&text).unwrap();
        let out = run_1d(&cfg, 0.1).unwrap();
        for (a, b) in out
            .summary
            .totals_initial
            .iter()
            .zip(&out.summary.totals_final)
        {
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
        assert_eq!(out.frames.len(), 1);
        assert_eq!(out.last().step, out.summary.steps);
    }

    #[test]
    fn uniform_rest_state_stays_put() {
        let text = "case = custom\ndim = 1\ninit = uniform\ninit_left = 1, 0, 1\nx = 0, 1\nnx = 16\nv1 = -6, 6\nnv1 = 24\n\
                    eps = 0.5\ntau_model = hard_sphere_1d\ncfl = 0.9\nt_final = 0.1\nbc_left = wall\nt_wall_left = 1\n\
                    bc_right = wall\nt_wall_right = 1\n";
        let cfg = parse_config(text).unwrap();
        let out = run_1d(&cfg, 0.5).unwrap();
        let rho = out.last().field("rho").unwrap();
        assert!(rho.iter().all(|r| (r - 1.0).abs() < 1e-13), "{rho:?}");
    }
}
