//! One step of the 2D microscopic update: x transport, y transport, then the
//! semi-implicit collision against Ĝ.
//!
//! Fields live on a block of `nx × ny` cells with a one-cell halo; cell `(i, j)` with
//! `0 ≤ i ≤ nx+1`, `0 ≤ j ≤ ny+1` is stored at `j·(nx+2) + i`.

use crate::error::Result;
use crate::gas_state::{modify_tensor, CollisionModel, Gaussian2D, Prim2D};
use crate::mesh::{PhaseMesh, VelGrid2D};
use crate::micro1d::collision_weights;
use crate::projection::{
    add_projected_maxwellian_transport_2d, add_projection_2d, coeffs_2d, maxwellian_values_2d,
    sigma_from_gradients, Local2D,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub vg: VelGrid2D,
}

impl Grid2D {
    /// Whole-domain grid.
    pub fn new(mesh: &PhaseMesh) -> Self {
        Grid2D {
            nx: mesh.x().n,
            ny: mesh.y().n,
            dx: mesh.x().spacing(),
            dy: mesh.y().spacing(),
            vg: VelGrid2D::new(mesh.v1(), mesh.v2()),
        }
    }

    /// Same spacings on a sub-block.
    pub fn block(&self, nx: usize, ny: usize) -> Self {
        Grid2D {
            nx,
            ny,
            ..self.clone()
        }
    }

    pub fn nv(&self) -> usize {
        self.vg.len()
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 2) + i
    }

    pub fn n_cells(&self) -> usize {
        (self.nx + 2) * (self.ny + 2)
    }

    /// Interior cells in storage order (x fastest).
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.ny).flat_map(move |j| (1..=self.nx).map(move |i| (i, j)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicroField2D {
    pub nx: usize,
    pub ny: usize,
    pub nv: usize,
    pub data: Vec<f64>,
}

impl MicroField2D {
    pub fn zeros(nx: usize, ny: usize, nv: usize) -> Self {
        MicroField2D {
            nx,
            ny,
            nv,
            data: vec![0.0; (nx + 2) * (ny + 2) * nv],
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 2) + i
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let c = self.idx(i, j);
        &self.data[c * self.nv..(c + 1) * self.nv]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let c = self.idx(i, j);
        &mut self.data[c * self.nv..(c + 1) * self.nv]
    }
}

pub fn local(p: &Prim2D) -> Local2D {
    Local2D {
        rho: p.rho,
        u1: p.u1,
        u2: p.u2,
        t: p.t,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    X,
    Y,
}

/// Per-cell work buffers, sized to the velocity grid.
#[derive(Debug, Clone)]
pub struct Scratch {
    pub m: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
}

impl Scratch {
    pub fn new(nv: usize) -> Self {
        Scratch {
            m: vec![0.0; nv],
            z: vec![0.0; nv],
            w: vec![0.0; nv],
        }
    }
}

/// G + Δt(Ẑ − Z) for one cell, with Z the upwind difference along `dir`.
#[allow(clippy::too_many_arguments)]
pub fn transport_cell(
    dir: Dir,
    gm: &[f64],
    gc: &[f64],
    gp: &[f64],
    loc: &Local2D,
    grid: &Grid2D,
    dt: f64,
    sc: &mut Scratch,
    out: &mut [f64],
) {
    let vg = &grid.vg;
    let n2 = vg.n2();
    match dir {
        Dir::X => {
            let inv = 1.0 / grid.dx;
            for (k, &a) in vg.v1.iter().enumerate() {
                let (vm, vp) = (a.min(0.0) * inv, a.max(0.0) * inv);
                let r = k * n2..(k + 1) * n2;
                for (((z, &m), &c), &p) in sc.z[r.clone()]
                    .iter_mut()
                    .zip(&gm[r.clone()])
                    .zip(&gc[r.clone()])
                    .zip(&gp[r])
                {
                    *z = vm * (p - c) + vp * (c - m);
                }
            }
        }
        Dir::Y => {
            let inv = 1.0 / grid.dy;
            let vm: Vec<f64> = vg.v2.iter().map(|&b| b.min(0.0) * inv).collect();
            let vp: Vec<f64> = vg.v2.iter().map(|&b| b.max(0.0) * inv).collect();
            for k in 0..vg.n1() {
                let b = k * n2;
                for l in 0..n2 {
                    let q = b + l;
                    sc.z[q] = vm[l] * (gp[q] - gc[q]) + vp[l] * (gc[q] - gm[q]);
                }
            }
        }
    }
    maxwellian_values_2d(loc, vg, &mut sc.m);
    let c = coeffs_2d(&sc.z, loc, vg);
    for ((o, &g), &z) in out.iter_mut().zip(gc).zip(&sc.z) {
        *o = g - dt * z;
    }
    add_projection_2d(&c, loc, vg, &sc.m, dt, out);
}

/// x-stage over the interior; the x-halo of `g` must be filled.
pub fn micro_transport_x(
    g: &MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    dt: f64,
) -> MicroField2D {
    micro_transport(Dir::X, g, prims, grid, dt)
}

/// y-stage over the interior; the y-halo of `g` must be filled. Projection uses the t^n state.
pub fn micro_transport_y(
    g: &MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    dt: f64,
) -> MicroField2D {
    micro_transport(Dir::Y, g, prims, grid, dt)
}

fn micro_transport(
    dir: Dir,
    g: &MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    dt: f64,
) -> MicroField2D {
    let mut out = MicroField2D::zeros(g.nx, g.ny, g.nv);
    micro_transport_into(dir, g, prims, grid, dt, &mut Scratch::new(g.nv), &mut out);
    out
}

/// One transport stage written into a preallocated field; halo entries of `out` are untouched.
pub fn micro_transport_into(
    dir: Dir,
    g: &MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    dt: f64,
    sc: &mut Scratch,
    out: &mut MicroField2D,
) {
    for (i, j) in grid.interior() {
        let (m, p) = match dir {
            Dir::X => (g.cell(i - 1, j), g.cell(i + 1, j)),
            Dir::Y => (g.cell(i, j - 1), g.cell(i, j + 1)),
        };
        let loc = local(&prims[grid.cell(i, j)]);
        transport_cell(
            dir,
            m,
            g.cell(i, j),
            p,
            &loc,
            grid,
            dt,
            sc,
            out.cell_mut(i, j),
        );
    }
}

/// True when 𝒯 differs from T·I by no more than 1e-13·T, in which case 𝒢 − ℳ is taken as zero.
pub fn nearly_isotropic(tmod: &crate::gas_state::Tensor2, t: f64) -> bool {
    let d = (tmod.t11 - t)
        .abs()
        .max((tmod.t22 - t).abs())
        .max(tmod.t12.abs());
    d <= 1e-13 * t
}

/// out += scale·(𝒢 − ℳ) with `m` holding ℳ. The cross factor of the Gaussian is advanced
/// multiplicatively along v₂ so each row costs one exponential per grid point of v₁ and v₂.
pub fn add_gaussian_minus_maxwellian(
    g: &Gaussian2D,
    vg: &VelGrid2D,
    m: &[f64],
    scale: f64,
    out: &mut [f64],
) {
    let n2 = vg.n2();
    let (i11, i12, i22, pref) = g.inverse_and_prefactor();
    let (u1, u2) = g.mean();
    let b: Vec<f64> = vg
        .v2
        .iter()
        .map(|&v| (-0.5 * i22 * (v - u2) * (v - u2)).exp())
        .collect();
    let c20 = vg.v2[0] - u2;
    for (k, &v1) in vg.v1.iter().enumerate() {
        let c1 = v1 - u1;
        let a = pref * (-0.5 * i11 * c1 * c1).exp();
        let step = (-i12 * c1 * vg.dv2).exp();
        let mut cross = (-i12 * c1 * c20).exp();
        let base = k * n2;
        for l in 0..n2 {
            let q = base + l;
            out[q] += scale * (a * b[l] * cross - m[q]);
            cross *= step;
        }
    }
}

/// Centered-difference Ĝ for one cell; `nb` are the left, right, bottom and top neighbours.
/// `sc.m` must hold the cell's Maxwellian on entry.
#[allow(clippy::too_many_arguments)]
pub fn ghat_cell(
    p: &Prim2D,
    nb: [&Prim2D; 4],
    grid: &Grid2D,
    eps: f64,
    model: &CollisionModel,
    m: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let [l, r, d, u] = nb;
    let tau = model.tau(p.rho, p.t);
    let (hx, hy) = (2.0 * grid.dx, 2.0 * grid.dy);
    let sigma = sigma_from_gradients(
        (r.u1 - l.u1) / hx,
        (u.u1 - d.u1) / hy,
        (r.u2 - l.u2) / hx,
        (u.u2 - d.u2) / hy,
    );
    let tx = (0.5 * (r.t + p.t) - 0.5 * (p.t + l.t)) / grid.dx;
    let ty = (0.5 * (u.t + p.t) - 0.5 * (p.t + d.t)) / grid.dy;
    out.iter_mut().for_each(|x| *x = 0.0);
    add_projected_maxwellian_transport_2d(
        &local(p),
        &sigma,
        [tx, ty],
        &grid.vg,
        m,
        -1.0 / tau,
        out,
    );
    let tmod = modify_tensor(&p.tt, p.t, model.nu)?;
    if !nearly_isotropic(&tmod, p.t) {
        let gs = Gaussian2D::new(p.rho, p.u1, p.u2, &tmod)?;
        add_gaussian_minus_maxwellian(&gs, &grid.vg, m, 1.0 / eps, out);
    }
    Ok(())
}

/// Ĝ over the interior using centered differences everywhere; halo primitives must be filled.
pub fn ghat_2d(
    prims: &[Prim2D],
    grid: &Grid2D,
    eps: f64,
    model: &CollisionModel,
) -> Result<MicroField2D> {
    let nv = grid.nv();
    let mut out = MicroField2D::zeros(grid.nx, grid.ny, nv);
    let mut m = vec![0.0; nv];
    for (i, j) in grid.interior() {
        let c = grid.cell(i, j);
        let p = &prims[c];
        let nb = [
            &prims[grid.cell(i - 1, j)],
            &prims[grid.cell(i + 1, j)],
            &prims[grid.cell(i, j - 1)],
            &prims[grid.cell(i, j + 1)],
        ];
        maxwellian_values_2d(&local(p), &grid.vg, &mut m);
        ghat_cell(p, nb, grid, eps, model, &m, out.cell_mut(i, j)).map_err(|e| at_cell(e, i, j))?;
    }
    Ok(out)
}

/// G^{n+1} = ε/(ε+Δtτ)G** + Δtτ/(ε+Δtτ)Ĝ, in place on `g`.
#[inline]
pub fn collide_cell(g: &mut [f64], ghat: &[f64], eps: f64, dt: f64, tau: f64) {
    let (a, b) = collision_weights(eps, dt, tau);
    for (x, &h) in g.iter_mut().zip(ghat) {
        *x = a * *x + b * h;
    }
}

pub fn micro_collide_2d(
    gss: &MicroField2D,
    ghat: &MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    dt: f64,
    eps: f64,
    model: &CollisionModel,
) -> MicroField2D {
    let mut out = gss.clone();
    for (i, j) in grid.interior() {
        let p = &prims[grid.cell(i, j)];
        collide_cell(
            out.cell_mut(i, j),
            ghat.cell(i, j),
            eps,
            dt,
            model.tau(p.rho, p.t),
        );
    }
    out
}

pub(crate) fn at_cell(e: crate::error::Error, i: usize, j: usize) -> crate::error::Error {
    match e {
        crate::error::Error::State { msg, .. } => crate::error::Error::State {
            cell: vec![i, j],
            msg,
        },
        other => other,
    }
}
