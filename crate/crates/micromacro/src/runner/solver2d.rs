//! 2D2V time loop on a grid of worker threads.
//!
//! Each step: macro halos and primitives at tⁿ, x then y micro transport, Ĝ and collision,
//! heat tensor, then the macro relaxation / x sweep / y sweep / relaxation sequence. Every
//! kernel reads only nearest neighbours, so a one-cell halo refreshed before each stencil
//! gives results independent of the worker grid.

use std::f64::consts::PI;
use std::thread;
use std::time::Instant;

use super::config::{CaseConfig, CaseName, Init, PrimState};
use super::frame::{Frame, MicroSlice, FIELDS_2D};
use super::halo::{build_links, Block, HaloPlan, Links};
use super::{output_steps, RunOutput, Summary};
use crate::boundary::{
    fill_heat_face_2d, fill_macro_face_2d, fill_micro_face_2d, wall_ghat_cell, Bc2D, BcKind, Face,
};
use crate::error::{Error, Result};
use crate::gas_state::{primitives_2d, CollisionModel, Macro2D, Prim2D, Tensor2};
use crate::macro2d::{check_field, heat_tensor_cell, relax_field, sweep, HeatTensor2D};
use crate::mesh::{plan_time, Axis};
use crate::micro2d::{
    collide_cell, ghat_cell, local, micro_transport_into, Dir, Grid2D, MicroField2D, Scratch,
};
use crate::mms::{relative_l2, Mms2D, MmsSource2D};
use crate::projection::maxwellian_values_2d;

const X_FACES: [Face; 2] = [Face::Left, Face::Right];
const Y_FACES: [Face; 2] = [Face::Bottom, Face::Top];

fn state(s: &PrimState) -> Macro2D {
    Macro2D::from_prim(s.rho, s.u1, s.u2, Tensor2::iso(s.rho * s.t))
}

fn wave(x: f64, y: f64) -> Macro2D {
    let (a, b) = (2.0 * PI * x, 2.0 * PI * y);
    let rho = 1.0 + 0.2 * a.sin() * b.cos();
    let (u1, u2) = (0.3 + 0.1 * b.sin(), -0.2 + 0.1 * a.cos());
    let p = Tensor2 {
        t11: rho * (1.0 + 0.1 * (a + b).sin()),
        t12: 0.05 * rho * b.sin(),
        t22: rho * (1.0 - 0.05 * a.cos()),
    };
    Macro2D::from_prim(rho, u1, u2, p)
}

pub fn initial_macro_2d(init: &Init, x: f64, y: f64) -> Macro2D {
    match init {
        Init::Mms => Mms2D::exact_macro(0.0, x, y),
        Init::Uniform(s) => state(s),
        Init::Riemann { left, right, split } => state(if x < *split { left } else { right }),
        Init::Wave => wave(x, y),
    }
}

/// Move a local-cell state error to global cell indices.
fn globalize(e: Error, b: &Block) -> Error {
    match e {
        Error::State { cell, msg } if cell.len() == 2 => Error::State {
            cell: vec![cell[0] + b.i0, cell[1] + b.j0],
            msg,
        },
        other => other,
    }
}

/// Read-only data shared by all workers of a run.
struct Shared<'a> {
    cfg: &'a CaseConfig,
    global: Grid2D,
    x: Axis,
    y: Axis,
    bc: Bc2D,
    model: CollisionModel,
    eps: f64,
    dt: f64,
    n_steps: usize,
    outputs: &'a [usize],
    mms: Option<(Mms2D, MmsSource2D)>,
}

struct BlockRecord {
    values: Vec<f64>,
    micro: Vec<MicroSlice>,
}

struct WorkerOut {
    records: Vec<BlockRecord>,
    totals_initial: [f64; 4],
    totals_final: [f64; 4],
    /// Σ|G − g|², Σ|g|² against the manufactured solution at the final time.
    micro_err: (f64, f64),
}

struct Worker<'a> {
    sh: &'a Shared<'a>,
    block: &'a Block,
    links: Links,
    grid: Grid2D,
    xc: Vec<f64>,
    yc: Vec<f64>,
    q: Vec<Macro2D>,
    g: MicroField2D,
    spare: MicroField2D,
    h: Vec<HeatTensor2D>,
    prims: Vec<Prim2D>,
    /// Faces on the domain boundary, with their kinds.
    physical: Vec<(Face, BcKind)>,
    wall: [bool; 4],
    sc: Scratch,
}

impl<'a> Worker<'a> {
    fn new(sh: &'a Shared<'a>, block: &'a Block, links: Links) -> Result<Self> {
        let grid = sh.global.block(block.nx, block.ny);
        let nv = grid.nv();
        let xc: Vec<f64> = (0..=block.nx + 1)
            .map(|i| sh.x.center(block.i0 + i))
            .collect();
        let yc: Vec<f64> = (0..=block.ny + 1)
            .map(|j| sh.y.center(block.j0 + j))
            .collect();
        let mut q = vec![Macro2D::default(); grid.n_cells()];
        let mut g = MicroField2D::zeros(block.nx, block.ny, nv);
        for (i, j) in grid.interior() {
            q[grid.cell(i, j)] = initial_macro_2d(&sh.cfg.init, xc[i], yc[j]);
            if sh.cfg.init == Init::Mms {
                let vg = &grid.vg;
                let cell = g.cell_mut(i, j);
                for (k, &a) in vg.v1.iter().enumerate() {
                    for (l, &b) in vg.v2.iter().enumerate() {
                        cell[k * vg.n2() + l] = Mms2D::g_exact(0.0, xc[i], yc[j], a, b);
                    }
                }
            }
        }
        let physical: Vec<(Face, BcKind)> = block
            .physical_faces()
            .into_iter()
            .map(|f| (f, sh.bc.face(f)))
            .collect();
        let mut wall = [false; 4];
        for (f, k) in &physical {
            wall[f.index()] = matches!(k, BcKind::Wall(_));
        }
        let nan = f64::NAN;
        let sentinel = Prim2D {
            rho: nan,
            u1: nan,
            u2: nan,
            p: Tensor2::iso(nan),
            tt: Tensor2::iso(nan),
            t: nan,
            pres: nan,
        };
        let mut w = Worker {
            sh,
            block,
            links,
            spare: g.clone(),
            g,
            h: vec![HeatTensor2D::default(); grid.n_cells()],
            prims: vec![sentinel; grid.n_cells()],
            q,
            xc,
            yc,
            physical,
            wall,
            sc: Scratch::new(nv),
            grid,
        };
        w.prims_on(false)?;
        w.heat();
        Ok(w)
    }

    /// Primitives on the interior and, when `halo`, on the four face halos.
    fn prims_on(&mut self, halo: bool) -> Result<()> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut cells: Vec<(usize, usize)> = self.grid.interior().collect();
        if halo {
            cells.extend((1..=ny).flat_map(|j| [(0, j), (nx + 1, j)]));
            cells.extend((1..=nx).flat_map(|i| [(i, 0), (i, ny + 1)]));
        }
        for (i, j) in cells {
            let c = self.grid.cell(i, j);
            self.prims[c] = primitives_2d(&self.q[c]).map_err(|e| {
                let e = match e {
                    Error::State { msg, .. } => Error::State {
                        cell: vec![i, j],
                        msg,
                    },
                    other => other,
                };
                globalize(e, self.block)
            })?;
        }
        Ok(())
    }

    fn heat(&mut self) {
        let eps = self.sh.eps;
        for (i, j) in self.grid.interior() {
            let c = self.grid.cell(i, j);
            let p = &self.prims[c];
            self.h[c] = heat_tensor_cell(self.g.cell(i, j), p.u1, p.u2, &self.grid.vg, eps);
        }
    }

    fn fill_macro(&mut self, faces: &[Face]) -> Result<()> {
        self.links
            .exchange(self.q.as_mut_slice(), &self.grid, faces)?;
        for &(f, kind) in self.physical.iter().filter(|(f, _)| faces.contains(f)) {
            fill_macro_face_2d(&mut self.q, &self.grid, f, kind)
                .map_err(|e| globalize(e, self.block))?;
        }
        Ok(())
    }

    fn fill_micro(&mut self, faces: &[Face]) -> Result<()> {
        self.links.exchange(&mut self.g, &self.grid, faces)?;
        for &(f, kind) in self.physical.iter().filter(|(f, _)| faces.contains(f)) {
            fill_micro_face_2d(&mut self.g, &self.grid, f, kind);
        }
        Ok(())
    }

    fn fill_heat(&mut self) -> Result<()> {
        self.links
            .exchange(self.h.as_mut_slice(), &self.grid, &Face::ALL)?;
        for &(f, kind) in &self.physical {
            fill_heat_face_2d(&mut self.h, &self.grid, f, kind);
        }
        Ok(())
    }

    fn transport(&mut self, dir: Dir) {
        micro_transport_into(
            dir,
            &self.g,
            &self.prims,
            &self.grid,
            self.sh.dt,
            &mut self.sc,
            &mut self.spare,
        );
        std::mem::swap(&mut self.g, &mut self.spare);
    }

    fn collide(&mut self, tn: f64) -> Result<()> {
        let sh = self.sh;
        let grid = &self.grid;
        let (nx, ny) = (grid.nx, grid.ny);
        let nv = grid.nv();
        let mut ghat = vec![0.0; nv];
        for (i, j) in grid.interior() {
            let p = &self.prims[grid.cell(i, j)];
            let nb = [
                &self.prims[grid.cell(i - 1, j)],
                &self.prims[grid.cell(i + 1, j)],
                &self.prims[grid.cell(i, j - 1)],
                &self.prims[grid.cell(i, j + 1)],
            ];
            maxwellian_values_2d(&local(p), &grid.vg, &mut self.sc.m);
            let near_wall = (self.wall[0] && i == 1)
                || (self.wall[1] && i == nx)
                || (self.wall[2] && j == 1)
                || (self.wall[3] && j == ny);
            if near_wall {
                wall_ghat_cell(
                    p,
                    nb,
                    grid,
                    &sh.model,
                    &self.sc.m,
                    &mut self.sc.w,
                    &mut ghat,
                );
            } else {
                ghat_cell(p, nb, grid, sh.eps, &sh.model, &self.sc.m, &mut ghat).map_err(|e| {
                    let e = match e {
                        Error::State { msg, .. } => Error::State {
                            cell: vec![i, j],
                            msg,
                        },
                        other => other,
                    };
                    globalize(e, self.block)
                })?;
            }
            let tau = sh.model.tau(p.rho, p.t);
            if let Some((_, src)) = &sh.mms {
                src.add(tn, self.xc[i], self.yc[j], 1.0 / tau, &mut ghat);
            }
            collide_cell(self.g.cell_mut(i, j), &ghat, sh.eps, sh.dt, tau);
        }
        Ok(())
    }

    fn macro_update(&mut self, tn: f64) -> Result<()> {
        let sh = self.sh;
        let model = sh.model;
        let tau_of = move |p: &Prim2D| model.tau(p.rho, p.t);
        let b = self.block;
        relax_field(&mut self.q, &self.grid, tau_of, model.nu, sh.eps, sh.dt)
            .map_err(|e| globalize(e, b))?;
        self.fill_macro(&X_FACES)?;
        self.fill_heat()?;
        self.q = sweep(Dir::X, &self.q, &self.h, &self.grid, sh.dt).map_err(|e| globalize(e, b))?;
        self.fill_macro(&Y_FACES)?;
        self.q = sweep(Dir::Y, &self.q, &self.h, &self.grid, sh.dt).map_err(|e| globalize(e, b))?;
        if let Some((case, _)) = &sh.mms {
            for (i, j) in self.grid.interior() {
                let c = self.grid.cell(i, j);
                let s = case.macro_source(tn, self.xc[i], self.yc[j]);
                let mut a = self.q[c].to_array();
                for (x, d) in a.iter_mut().zip(s) {
                    *x += sh.dt * d;
                }
                self.q[c] = Macro2D::from_array(a);
            }
        }
        relax_field(&mut self.q, &self.grid, tau_of, model.nu, sh.eps, sh.dt)
            .map_err(|e| globalize(e, b))?;
        check_field(&self.q, &self.grid).map_err(|e| globalize(e, b))
    }

    fn step(&mut self, n: usize) -> Result<()> {
        let tn = n as f64 * self.sh.dt;
        self.fill_macro(&Face::ALL)?;
        self.prims_on(true)?;
        self.fill_micro(&X_FACES)?;
        self.transport(Dir::X);
        self.fill_micro(&Y_FACES)?;
        self.transport(Dir::Y);
        self.collide(tn)?;
        self.heat();
        self.macro_update(tn)
    }

    fn record(&self) -> BlockRecord {
        let mut values = Vec::with_capacity(self.grid.nx * self.grid.ny * 10);
        for (i, j) in self.grid.interior() {
            let c = self.grid.cell(i, j);
            values.extend(self.q[c].to_array());
            values.extend(self.h[c].to_array());
        }
        let b = self.block;
        let micro = self
            .sh
            .cfg
            .micro_cells
            .iter()
            .filter(|&&(gi, gj)| gi > b.i0 && gi <= b.i0 + b.nx && gj > b.j0 && gj <= b.j0 + b.ny)
            .map(|&(gi, gj)| MicroSlice {
                cell: (gi, gj),
                values: self.g.cell(gi - b.i0, gj - b.j0).to_vec(),
            })
            .collect();
        BlockRecord { values, micro }
    }

    fn totals(&self) -> [f64; 4] {
        let w = self.grid.dx * self.grid.dy;
        let mut t = [0.0; 4];
        for (i, j) in self.grid.interior() {
            let q = &self.q[self.grid.cell(i, j)];
            for (a, b) in t.iter_mut().zip([q.rho, q.m1, q.m2, q.energy()]) {
                *a += w * b;
            }
        }
        t
    }

    fn micro_error(&self, t: f64) -> (f64, f64) {
        let vg = &self.grid.vg;
        let (mut num, mut den) = (0.0, 0.0);
        for (i, j) in self.grid.interior() {
            let cell = self.g.cell(i, j);
            for (k, &a) in vg.v1.iter().enumerate() {
                for (l, &b) in vg.v2.iter().enumerate() {
                    let e = Mms2D::g_exact(t, self.xc[i], self.yc[j], a, b);
                    let d = cell[k * vg.n2() + l] - e;
                    num += d * d;
                    den += e * e;
                }
            }
        }
        (num, den)
    }

    fn run(mut self) -> Result<WorkerOut> {
        let sh = self.sh;
        let totals_initial = self.totals();
        let mut records = Vec::with_capacity(sh.outputs.len());
        let mut next = sh.outputs.iter().peekable();
        for n in 0..=sh.n_steps {
            if next.peek() == Some(&&n) {
                next.next();
                records.push(self.record());
            }
            if n < sh.n_steps {
                self.step(n).map_err(|e| e.at_step(n))?;
            }
        }
        let micro_err = if sh.mms.is_some() {
            self.micro_error(sh.n_steps as f64 * sh.dt)
        } else {
            (0.0, 0.0)
        };
        Ok(WorkerOut {
            records,
            totals_initial,
            totals_final: self.totals(),
            micro_err,
        })
    }
}

/// Prefer the most informative error when several workers fail: a state error names the
/// step and cell, a worker error only reports that a neighbour stopped.
fn pick_error(errors: Vec<Error>) -> Error {
    let rank = |e: &Error| match e {
        Error::State { .. } => 0,
        Error::Worker { .. } => 2,
        _ => 1,
    };
    errors
        .into_iter()
        .min_by_key(rank)
        .expect("at least one error")
}

pub fn run_2d(cfg: &CaseConfig, eps: f64) -> Result<RunOutput> {
    let start = Instant::now();
    cfg.validate()?;
    let mesh = cfg.mesh()?;
    let plan = plan_time(cfg.t_final, cfg.cfl, &mesh)?;
    let n_steps = cfg.max_steps.map_or(plan.n_steps, |m| m.min(plan.n_steps));
    let outputs = output_steps(&cfg.output_times, &plan, n_steps);
    let bc = cfg.bc2d()?;
    let halo = HaloPlan::new(cfg.nx, cfg.ny, cfg.workers, &bc)?;
    let global = Grid2D::new(&mesh);
    let mms = (cfg.case == CaseName::Mms2d).then(|| {
        let case = Mms2D::new(eps);
        let src = case.profiles(&global.vg);
        (case, src)
    });
    let shared = Shared {
        cfg,
        global,
        x: *mesh.x(),
        y: *mesh.y(),
        bc,
        model: cfg.model()?,
        eps,
        dt: plan.dt,
        n_steps,
        outputs: &outputs,
        mms,
    };
    let links = build_links(&halo);
    let results: Vec<Result<WorkerOut>> = thread::scope(|s| {
        let handles: Vec<_> = halo
            .blocks
            .iter()
            .zip(links)
            .map(|(b, l)| {
                let sh = &shared;
                s.spawn(move || Worker::new(sh, b, l)?.run())
            })
            .collect();
        handles
            .into_iter()
            .enumerate()
            .map(|(w, h)| {
                h.join().unwrap_or_else(|_| {
                    Err(Error::Worker {
                        worker: w,
                        msg: "worker panicked".into(),
                    })
                })
            })
            .collect()
    });
    let mut outs = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(o) => outs.push(o),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(pick_error(errors));
    }

    let (nx, ny) = (cfg.nx, cfg.ny);
    let nf = FIELDS_2D.len();
    let mut frames = Vec::with_capacity(outputs.len());
    for (k, &step) in outputs.iter().enumerate() {
        let mut values = vec![0.0; nx * ny * nf];
        let mut micro = Vec::new();
        for (b, o) in halo.blocks.iter().zip(&outs) {
            let rec = &o.records[k];
            for (r, row) in rec.values.chunks(b.nx * nf).enumerate() {
                let start = ((b.j0 + r) * nx + b.i0) * nf;
                values[start..start + row.len()].copy_from_slice(row);
            }
            micro.extend(rec.micro.iter().cloned());
        }
        micro.sort_by_key(|m| cfg.micro_cells.iter().position(|c| *c == m.cell));
        frames.push(Frame {
            dim: 2,
            nx,
            ny,
            nv1: cfg.nv1,
            nv2: cfg.nv2,
            time: step as f64 * plan.dt,
            step,
            eps,
            fields: FIELDS_2D.iter().map(|s| s.to_string()).collect(),
            values,
            micro,
        });
    }
    let sum = |f: fn(&WorkerOut) -> [f64; 4]| -> Vec<f64> {
        let mut t = vec![0.0; 4];
        for o in &outs {
            for (a, b) in t.iter_mut().zip(f(o)) {
                *a += b;
            }
        }
        t
    };
    let t_end = n_steps as f64 * plan.dt;
    let mms_errors = if cfg.case == CaseName::Mms2d {
        let last = frames.last().expect("final frame");
        let (mut num, mut ex) = (Vec::new(), Vec::new());
        for j in 1..=ny {
            for i in 1..=nx {
                num.extend_from_slice(&last.record(i, j)[..6]);
                ex.extend(
                    Mms2D::exact_macro(t_end, mesh.x().center(i), mesh.y().center(j)).to_array(),
                );
            }
        }
        let (n, d) = outs.iter().fold((0.0, 0.0), |acc, o| {
            (acc.0 + o.micro_err.0, acc.1 + o.micro_err.1)
        });
        Some((relative_l2(&num, &ex)?, (n / d).sqrt()))
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
            workers: cfg.workers,
            totals_initial: sum(|o| o.totals_initial),
            totals_final: sum(|o| o.totals_final),
            seconds: start.elapsed().as_secs_f64(),
            mms_errors,
        },
    })
}

/// Heat-flux vector h = ½(ℍ₁₁₁ + ℍ₁₂₂, ℍ₁₁₂ + ℍ₂₂₂) for every cell of a 2D frame.
pub fn heat_vectors(frame: &Frame) -> Vec<[f64; 2]> {
    frame
        .values
        .chunks(frame.n_fields())
        .map(|r| HeatTensor2D::from_array([r[6], r[7], r[8], r[9]]).vector())
        .collect()
}

/// Velocity and scalar temperature for every cell of a 2D frame.
pub fn velocity_temperature(frame: &Frame) -> Result<Vec<(f64, f64, f64)>> {
    frame
        .values
        .chunks(frame.n_fields())
        .map(|r| {
            let p = primitives_2d(&Macro2D::from_array([r[0], r[1], r[2], r[3], r[4], r[5]]))?;
            Ok((p.u1, p.u2, p.t))
        })
        .collect()
}

/// Counter-clockwise line integral of the velocity around the middle box (the central half of
/// the domain in each direction), sampled on the cell rows and columns nearest its edges.
/// Clockwise circulation is negative.
pub fn midbox_circulation(frame: &Frame, dx: f64, dy: f64) -> Result<f64> {
    let vt = velocity_temperature(frame)?;
    let (nx, ny) = (frame.nx, frame.ny);
    let at = |i: usize, j: usize| vt[(j - 1) * nx + (i - 1)];
    let (il, ir) = (nx / 4 + 1, 3 * nx / 4);
    let (jb, jt) = (ny / 4 + 1, 3 * ny / 4);
    let mut c = 0.0;
    for i in il..=ir {
        c += (at(i, jb).0 - at(i, jt).0) * dx;
    }
    for j in jb..=jt {
        c += (at(ir, j).1 - at(il, j).1) * dy;
    }
    Ok(c)
}

/// Fraction of cells away from the boundary where heat flows up the temperature gradient,
/// h·∇T > 0, with centred differences for ∇T.
pub fn anti_fourier_fraction(frame: &Frame, dx: f64, dy: f64) -> Result<f64> {
    let vt = velocity_temperature(frame)?;
    let h = heat_vectors(frame);
    let nx = frame.nx;
    let t = |i: usize, j: usize| vt[(j - 1) * nx + (i - 1)].2;
    let (mut hits, mut total) = (0usize, 0usize);
    for j in 2..frame.ny {
        for i in 2..nx {
            let gx = (t(i + 1, j) - t(i - 1, j)) / (2.0 * dx);
            let gy = (t(i, j + 1) - t(i, j - 1)) / (2.0 * dy);
            let hv = h[(j - 1) * nx + (i - 1)];
            total += 1;
            if hv[0] * gx + hv[1] * gy > 0.0 {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / total.max(1) as f64)
}

/// Largest absolute change of the conserved fields between two frames of the same run.
pub fn max_macro_change(a: &Frame, b: &Frame) -> f64 {
    a.values
        .chunks(a.n_fields())
        .zip(b.values.chunks(b.n_fields()))
        .flat_map(|(x, y)| x[..6].iter().zip(&y[..6]).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}
