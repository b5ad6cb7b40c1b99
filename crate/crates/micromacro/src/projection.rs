//! Projection onto the span of the collision invariants weighted by the local Maxwellian,
//! and the closed forms of (I−Π)[v·∇ℳ].
//!
//! Coefficients use the continuum-orthonormal basis with midpoint quadrature, so the
//! discrete operator is a projector only up to quadrature error.

use std::f64::consts::SQRT_2;

use crate::gas_state::Prim1D;
use crate::mesh::{VelGrid1D, VelGrid2D};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProjCoeffs1D {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProjCoeffs2D {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// Local state entering a 2D projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local2D {
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    pub t: f64,
}

pub fn maxwellian_values_1d(p: &Prim1D, vg: &VelGrid1D, out: &mut [f64]) {
    let pref = p.rho / (2.0 * std::f64::consts::PI * p.t).sqrt();
    let s = 1.0 / (2.0 * p.t);
    for (o, &v) in out.iter_mut().zip(&vg.v) {
        let c = v - p.u;
        *o = pref * (-c * c * s).exp();
    }
}

pub fn coeffs_1d(f: &[f64], p: &Prim1D, vg: &VelGrid1D) -> ProjCoeffs1D {
    let st = p.t.sqrt();
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for (&fv, &v) in f.iter().zip(&vg.v) {
        let z = (v - p.u) / st;
        s0 += fv;
        s1 += z * fv;
        s2 += (0.5 * z * z - 0.5) * fv;
    }
    let w = vg.dv / p.rho;
    ProjCoeffs1D {
        a1: w * s0,
        a2: w * s1,
        a3: w * SQRT_2 * s2,
    }
}

/// Evaluate {a1 + z·a2 + √2(z²/2 − ½)·a3}ℳ into `out`.
pub fn apply_1d(c: &ProjCoeffs1D, p: &Prim1D, vg: &VelGrid1D, maxw: &[f64], out: &mut [f64]) {
    let st = p.t.sqrt();
    for ((o, &v), &m) in out.iter_mut().zip(&vg.v).zip(maxw) {
        let z = (v - p.u) / st;
        *o = (c.a1 + z * c.a2 + SQRT_2 * (0.5 * z * z - 0.5) * c.a3) * m;
    }
}

pub fn project_1d(f: &[f64], p: &Prim1D, vg: &VelGrid1D) -> Vec<f64> {
    let mut m = vec![0.0; vg.len()];
    maxwellian_values_1d(p, vg, &mut m);
    let c = coeffs_1d(f, p, vg);
    let mut out = vec![0.0; vg.len()];
    apply_1d(&c, p, vg, &m, &mut out);
    out
}

/// (I−Π)[v ℳ_x] = ((v−u)³/(2T) − (3/2)(v−u))·(T_x/T)·ℳ.
pub fn projected_maxwellian_transport_1d(p: &Prim1D, dt_dx: f64, vg: &VelGrid1D) -> Vec<f64> {
    let mut m = vec![0.0; vg.len()];
    maxwellian_values_1d(p, vg, &mut m);
    vg.v.iter()
        .zip(&m)
        .map(|(&v, &mv)| {
            let c = v - p.u;
            (c * c * c / (2.0 * p.t) - 1.5 * c) * (dt_dx / p.t) * mv
        })
        .collect()
}

/// Separable evaluation of the 2D Maxwellian on the full velocity grid.
pub fn maxwellian_values_2d(s: &Local2D, vg: &VelGrid2D, out: &mut [f64]) {
    let inv = 1.0 / (2.0 * s.t);
    let pref = s.rho / (2.0 * std::f64::consts::PI * s.t);
    let e2: Vec<f64> = vg
        .v2
        .iter()
        .map(|&b| (-(b - s.u2) * (b - s.u2) * inv).exp())
        .collect();
    let n2 = vg.n2();
    for (k, &a) in vg.v1.iter().enumerate() {
        let e1 = pref * (-(a - s.u1) * (a - s.u1) * inv).exp();
        for (o, &e) in out[k * n2..(k + 1) * n2].iter_mut().zip(&e2) {
            *o = e1 * e;
        }
    }
}

pub fn coeffs_2d(f: &[f64], s: &Local2D, vg: &VelGrid2D) -> ProjCoeffs2D {
    let n2 = vg.n2();
    let st = s.t.sqrt();
    let (mut a1, mut a2, mut a3, mut a4) = (0.0, 0.0, 0.0, 0.0);
    for (k, &a) in vg.v1.iter().enumerate() {
        let c1 = a - s.u1;
        let row = &f[k * n2..(k + 1) * n2];
        let (mut r0, mut r2, mut r22) = (0.0, 0.0, 0.0);
        for (&fv, &b) in row.iter().zip(&vg.v2) {
            let c2 = b - s.u2;
            r0 += fv;
            r2 += c2 * fv;
            r22 += c2 * c2 * fv;
        }
        a1 += r0;
        a2 += c1 * r0;
        a3 += r2;
        a4 += c1 * c1 * r0 + r22;
    }
    let w = vg.weight() / s.rho;
    ProjCoeffs2D {
        a1: w * a1,
        a2: w * a2 / st,
        a3: w * a3 / st,
        a4: w * (a4 / (2.0 * s.t) - a1),
    }
}

/// out[kl] += scale · {a1 + c·(a2,a3)/√T + (|c|²/(2T) − 1)a4}ℳ.
pub fn add_projection_2d(
    c: &ProjCoeffs2D,
    s: &Local2D,
    vg: &VelGrid2D,
    maxw: &[f64],
    scale: f64,
    out: &mut [f64],
) {
    let n2 = vg.n2();
    let st = s.t.sqrt();
    let inv2t = 1.0 / (2.0 * s.t);
    for (k, &a) in vg.v1.iter().enumerate() {
        let c1 = a - s.u1;
        let base = c.a1 + c1 / st * c.a2 - c.a4 + c1 * c1 * inv2t * c.a4;
        for l in 0..n2 {
            let c2 = vg.v2[l] - s.u2;
            let idx = k * n2 + l;
            out[idx] += scale * (base + c2 / st * c.a3 + c2 * c2 * inv2t * c.a4) * maxw[idx];
        }
    }
}

pub fn project_2d(f: &[f64], s: &Local2D, vg: &VelGrid2D) -> Vec<f64> {
    let mut m = vec![0.0; vg.len()];
    maxwellian_values_2d(s, vg, &mut m);
    let c = coeffs_2d(f, s, vg);
    let mut out = vec![0.0; vg.len()];
    add_projection_2d(&c, s, vg, &m, 1.0, &mut out);
    out
}

/// Strain-like tensor σ built from velocity gradients.
pub fn sigma_from_gradients(du1_dx: f64, du1_dy: f64, du2_dx: f64, du2_dy: f64) -> [[f64; 2]; 2] {
    let off = du1_dy + du2_dx;
    [[du1_dx - du2_dy, off], [off, -du1_dx + du2_dy]]
}

/// out[kl] += scale · {B:σ + C·∇T}ℳ.
#[allow(clippy::too_many_arguments)]
pub fn add_projected_maxwellian_transport_2d(
    s: &Local2D,
    sigma: &[[f64; 2]; 2],
    grad_t: [f64; 2],
    vg: &VelGrid2D,
    maxw: &[f64],
    scale: f64,
    out: &mut [f64],
) {
    let n2 = vg.n2();
    let inv2t = 1.0 / (2.0 * s.t);
    let invt = 1.0 / s.t;
    for (k, &a) in vg.v1.iter().enumerate() {
        let c1 = a - s.u1;
        for l in 0..n2 {
            let c2 = vg.v2[l] - s.u2;
            let bs = inv2t
                * (-c2 * c2 * sigma[0][0] + 2.0 * c1 * c2 * sigma[0][1] - c1 * c1 * sigma[1][1]);
            let cg = ((c1 * c1 + c2 * c2) * inv2t - 2.0) * invt * (c1 * grad_t[0] + c2 * grad_t[1]);
            let idx = k * n2 + l;
            out[idx] += scale * (bs + cg) * maxw[idx];
        }
    }
}

pub fn projected_maxwellian_transport_2d(
    s: &Local2D,
    sigma: &[[f64; 2]; 2],
    grad_t: [f64; 2],
    vg: &VelGrid2D,
) -> Vec<f64> {
    let mut m = vec![0.0; vg.len()];
    maxwellian_values_2d(s, vg, &mut m);
    let mut out = vec![0.0; vg.len()];
    add_projected_maxwellian_transport_2d(s, sigma, grad_t, vg, &m, 1.0, &mut out);
    out
}

/// Discrete collision-invariant moments (1, v−u, |v−u|²/2) of a 1D velocity function.
pub fn invariant_moments_1d(f: &[f64], u: f64, vg: &VelGrid1D) -> [f64; 3] {
    let mut m = [0.0; 3];
    for (&fv, &v) in f.iter().zip(&vg.v) {
        let c = v - u;
        m[0] += fv;
        m[1] += c * fv;
        m[2] += 0.5 * c * c * fv;
    }
    m.map(|x| x * vg.dv)
}

/// Discrete collision-invariant moments (1, c₁, c₂, |c|²/2) of a 2D velocity function.
pub fn invariant_moments_2d(f: &[f64], u1: f64, u2: f64, vg: &VelGrid2D) -> [f64; 4] {
    let n2 = vg.n2();
    let mut m = [0.0; 4];
    for (k, &a) in vg.v1.iter().enumerate() {
        for (l, &b) in vg.v2.iter().enumerate() {
            let fv = f[k * n2 + l];
            let (c1, c2) = (a - u1, b - u2);
            m[0] += fv;
            m[1] += c1 * fv;
            m[2] += c2 * fv;
            m[3] += 0.5 * (c1 * c1 + c2 * c2) * fv;
        }
    }
    m.map(|x| x * vg.weight())
}
