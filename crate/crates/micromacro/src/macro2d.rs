//! 2D six-moment macroscopic update: Strang splitting of the pressure relaxation
//! around dimensional KFVS sweeps, closed by the micro heat-flux tensor.

use std::f64::consts::PI;

use crate::error::Result;
use crate::gas_state::{erf, primitives_2d, Macro2D, Prim2D, Tensor2};
use crate::mesh::VelGrid2D;
use crate::micro2d::{at_cell, Grid2D, MicroField2D};

pub type Flux2D = [f64; 6];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeatTensor2D {
    pub h111: f64,
    pub h112: f64,
    pub h122: f64,
    pub h222: f64,
}

impl HeatTensor2D {
    /// h = ½(ℍ₁₁₁ + ℍ₁₂₂, ℍ₁₁₂ + ℍ₂₂₂).
    pub fn vector(&self) -> [f64; 2] {
        [0.5 * (self.h111 + self.h122), 0.5 * (self.h112 + self.h222)]
    }

    fn mean(&self, o: &Self) -> Self {
        HeatTensor2D {
            h111: 0.5 * (self.h111 + o.h111),
            h112: 0.5 * (self.h112 + o.h112),
            h122: 0.5 * (self.h122 + o.h122),
            h222: 0.5 * (self.h222 + o.h222),
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.h111, self.h112, self.h122, self.h222]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        HeatTensor2D {
            h111: a[0],
            h112: a[1],
            h122: a[2],
            h222: a[3],
        }
    }
}

/// ε Δv₁Δv₂ Σ central cubic moments of one cell's G about (u₁, u₂).
pub fn heat_tensor_cell(g: &[f64], u1: f64, u2: f64, vg: &VelGrid2D, eps: f64) -> HeatTensor2D {
    let n2 = vg.n2();
    let c2: Vec<f64> = vg.v2.iter().map(|&b| b - u2).collect();
    let mut h = [0.0; 4];
    for (k, &a) in vg.v1.iter().enumerate() {
        let c1 = a - u1;
        let row = &g[k * n2..(k + 1) * n2];
        let (mut r0, mut r1, mut r2, mut r3) = (0.0, 0.0, 0.0, 0.0);
        for (&x, &c) in row.iter().zip(&c2) {
            r0 += x;
            r1 += c * x;
            r2 += c * c * x;
            r3 += c * c * c * x;
        }
        h[0] += c1 * c1 * c1 * r0;
        h[1] += c1 * c1 * r1;
        h[2] += c1 * r2;
        h[3] += r3;
    }
    let w = eps * vg.weight();
    HeatTensor2D::from_array(h.map(|x| w * x))
}

/// Heat tensor on every interior cell (halo entries zero), moments about the t^n velocity.
pub fn heat_tensor(
    g: &MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    eps: f64,
) -> Vec<HeatTensor2D> {
    let mut out = vec![HeatTensor2D::default(); grid.n_cells()];
    for (i, j) in grid.interior() {
        let c = grid.cell(i, j);
        out[c] = heat_tensor_cell(g.cell(i, j), prims[c].u1, prims[c].u2, &grid.vg, eps);
    }
    out
}

/// TR-BDF2 amplification for the pressure relaxation. `dt` is the full time step; the map
/// advances the relaxation by Δt/2.
pub fn relax_factor(tau: f64, nu: f64, eps: f64, dt: f64) -> f64 {
    let s = tau * (1.0 - nu) * dt;
    (48.0 * eps * eps - 10.0 * s * eps) / (48.0 * eps * eps + 14.0 * s * eps + s * s)
}

/// P₁₁' = ((1+W)P₁₁ + (1−W)P₂₂)/2, P₁₂' = W P₁₂, P₂₂' symmetric.
pub fn trbdf2_relax(p: &Tensor2, tau: f64, nu: f64, eps: f64, dt: f64) -> Tensor2 {
    apply_relax(p, relax_factor(tau, nu, eps, dt))
}

pub fn apply_relax(p: &Tensor2, w: f64) -> Tensor2 {
    // mean ± relaxed deviation keeps the trace to rounding
    let m = 0.5 * (p.t11 + p.t22);
    let d = 0.5 * w * (p.t11 - p.t22);
    Tensor2 {
        t11: m + d,
        t12: w * p.t12,
        t22: m - d,
    }
}

/// Relaxation of one conserved state, τ taken from that state.
pub fn relax_state(
    q: &Macro2D,
    tau_of: impl Fn(&Prim2D) -> f64,
    nu: f64,
    eps: f64,
    dt: f64,
) -> Result<Macro2D> {
    let p = primitives_2d(q)?;
    let pn = trbdf2_relax(&p.p, tau_of(&p), nu, eps, dt);
    Ok(Macro2D::from_prim(q.rho, p.u1, p.u2, pn))
}

fn ab(rho: f64, u: f64, paa: f64) -> (f64, f64) {
    let a = (2.0 * paa / (PI * rho)).sqrt() * (-rho * u * u / (2.0 * paa)).exp();
    let b = erf(u * (rho / (2.0 * paa)).sqrt());
    (a, b)
}

fn jk_x(p: &Prim2D) -> (Flux2D, Flux2D) {
    let (r, u1, u2, pp) = (p.rho, p.u1, p.u2, &p.p);
    let j = [
        r,
        r * u1,
        r * u2,
        r * u1 * u1 + 2.0 * pp.t11,
        r * u1 * u2 + 2.0 * pp.t12,
        r * u2 * u2 + pp.t22 + pp.t12 * pp.t12 / pp.t11,
    ];
    (j, physical_flux_x(p))
}

fn jk_y(p: &Prim2D) -> (Flux2D, Flux2D) {
    let (r, u1, u2, pp) = (p.rho, p.u1, p.u2, &p.p);
    let j = [
        r,
        r * u1,
        r * u2,
        r * u1 * u1 + pp.t11 + pp.t12 * pp.t12 / pp.t22,
        r * u1 * u2 + 2.0 * pp.t12,
        r * u2 * u2 + 2.0 * pp.t22,
    ];
    (j, physical_flux_y(p))
}

/// x-direction flux of the six-moment system without heat flux.
pub fn physical_flux_x(p: &Prim2D) -> Flux2D {
    let (r, u1, u2, pp) = (p.rho, p.u1, p.u2, &p.p);
    [
        r * u1,
        r * u1 * u1 + pp.t11,
        r * u1 * u2 + pp.t12,
        r * u1 * u1 * u1 + 3.0 * u1 * pp.t11,
        r * u1 * u1 * u2 + u2 * pp.t11 + 2.0 * u1 * pp.t12,
        r * u1 * u2 * u2 + u1 * pp.t22 + 2.0 * u2 * pp.t12,
    ]
}

pub fn physical_flux_y(p: &Prim2D) -> Flux2D {
    let (r, u1, u2, pp) = (p.rho, p.u1, p.u2, &p.p);
    [
        r * u2,
        r * u1 * u2 + pp.t12,
        r * u2 * u2 + pp.t22,
        r * u1 * u1 * u2 + u2 * pp.t11 + 2.0 * u1 * pp.t12,
        r * u1 * u2 * u2 + u1 * pp.t22 + 2.0 * u2 * pp.t12,
        r * u2 * u2 * u2 + 3.0 * u2 * pp.t22,
    ]
}

pub fn kfvs_prim_x(l: &Prim2D, r: &Prim2D) -> Flux2D {
    let (al, bl) = ab(l.rho, l.u1, l.p.t11);
    let (ar, br) = ab(r.rho, r.u1, r.p.t11);
    let (jl, kl) = jk_x(l);
    let (jr, kr) = jk_x(r);
    std::array::from_fn(|c| {
        0.5 * (al * jl[c] + (1.0 + bl) * kl[c]) + 0.5 * (-ar * jr[c] + (1.0 - br) * kr[c])
    })
}

pub fn kfvs_prim_y(d: &Prim2D, u: &Prim2D) -> Flux2D {
    let (ad, bd) = ab(d.rho, d.u2, d.p.t22);
    let (au, bu) = ab(u.rho, u.u2, u.p.t22);
    let (jd, kd) = jk_y(d);
    let (ju, ku) = jk_y(u);
    std::array::from_fn(|c| {
        0.5 * (ad * jd[c] + (1.0 + bd) * kd[c]) + 0.5 * (-au * ju[c] + (1.0 - bu) * ku[c])
    })
}

pub fn kfvs_flux_2d_x(ql: &Macro2D, qr: &Macro2D) -> Result<Flux2D> {
    Ok(kfvs_prim_x(&primitives_2d(ql)?, &primitives_2d(qr)?))
}

pub fn kfvs_flux_2d_y(qd: &Macro2D, qu: &Macro2D) -> Result<Flux2D> {
    Ok(kfvs_prim_y(&primitives_2d(qd)?, &primitives_2d(qu)?))
}

/// One dimensional sweep over the interior. Halo entries of `q` and `h` along `dir` must be filled.
pub fn sweep(
    dir: crate::micro2d::Dir,
    q: &[Macro2D],
    h: &[HeatTensor2D],
    grid: &Grid2D,
    dt: f64,
) -> Result<Vec<Macro2D>> {
    use crate::micro2d::Dir;
    let mut out = q.to_vec();
    let (nx, ny) = (grid.nx, grid.ny);
    // primitives on interior plus the halo along the sweep direction
    let mut prims: Vec<Option<Prim2D>> = vec![None; grid.n_cells()];
    for j in 0..ny + 2 {
        for i in 0..nx + 2 {
            let needed = match dir {
                Dir::X => (1..=ny).contains(&j),
                Dir::Y => (1..=nx).contains(&i),
            };
            if needed {
                let c = grid.cell(i, j);
                prims[c] = Some(primitives_2d(&q[c]).map_err(|e| at_cell(e, i, j))?);
            }
        }
    }
    let p = |i: usize, j: usize| prims[grid.cell(i, j)].as_ref().expect("sweep primitive");
    match dir {
        Dir::X => {
            let r = dt / grid.dx;
            for j in 1..=ny {
                let mut left = kfvs_prim_x(p(0, j), p(1, j));
                let mut hl = h[grid.cell(0, j)].mean(&h[grid.cell(1, j)]);
                for i in 1..=nx {
                    let right = kfvs_prim_x(p(i, j), p(i + 1, j));
                    let hr = h[grid.cell(i, j)].mean(&h[grid.cell(i + 1, j)]);
                    let c = grid.cell(i, j);
                    let mut a = q[c].to_array();
                    for k in 0..6 {
                        a[k] -= r * (right[k] - left[k]);
                    }
                    a[3] -= r * (hr.h111 - hl.h111);
                    a[4] -= r * (hr.h112 - hl.h112);
                    a[5] -= r * (hr.h122 - hl.h122);
                    out[c] = Macro2D::from_array(a);
                    left = right;
                    hl = hr;
                }
            }
        }
        Dir::Y => {
            let r = dt / grid.dy;
            for i in 1..=nx {
                let mut down = kfvs_prim_y(p(i, 0), p(i, 1));
                let mut hd = h[grid.cell(i, 0)].mean(&h[grid.cell(i, 1)]);
                for j in 1..=ny {
                    let up = kfvs_prim_y(p(i, j), p(i, j + 1));
                    let hu = h[grid.cell(i, j)].mean(&h[grid.cell(i, j + 1)]);
                    let c = grid.cell(i, j);
                    let mut a = q[c].to_array();
                    for k in 0..6 {
                        a[k] -= r * (up[k] - down[k]);
                    }
                    a[3] -= r * (hu.h112 - hd.h112);
                    a[4] -= r * (hu.h122 - hd.h122);
                    a[5] -= r * (hu.h222 - hd.h222);
                    out[c] = Macro2D::from_array(a);
                    down = up;
                    hd = hu;
                }
            }
        }
    }
    Ok(out)
}

/// Relaxation over the interior, τ from each cell's own state.
pub fn relax_field(
    q: &mut [Macro2D],
    grid: &Grid2D,
    tau_of: impl Fn(&Prim2D) -> f64,
    nu: f64,
    eps: f64,
    dt: f64,
) -> Result<()> {
    for (i, j) in grid.interior() {
        let c = grid.cell(i, j);
        q[c] = relax_state(&q[c], &tau_of, nu, eps, dt).map_err(|e| at_cell(e, i, j))?;
    }
    Ok(())
}

/// Validity check of all interior cells.
pub fn check_field(q: &[Macro2D], grid: &Grid2D) -> Result<()> {
    for (i, j) in grid.interior() {
        primitives_2d(&q[grid.cell(i, j)]).map_err(|e| at_cell(e, i, j))?;
    }
    Ok(())
}
