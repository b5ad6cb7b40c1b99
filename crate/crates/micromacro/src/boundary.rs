//! Boundary conditions: periodic wrap, constant extrapolation and diffusely reflecting walls.
//!
//! Diffuse walls re-emit a wall-temperature Maxwellian whose density makes the net kinetic
//! mass flux through the wall vanish. The macro ghost cell holds that wall Maxwellian, so the
//! generic KFVS flux between ghost and interior is the wall flux; micro and heat-flux ghosts
//! are zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gas_state::{
    erf, primitives_1d, primitives_2d, CollisionModel, Macro1D, Macro2D, Prim1D, Prim2D, Tensor2,
};
use crate::macro1d::half_range_coeffs;
use crate::macro2d::HeatTensor2D;
use crate::micro1d::MicroField1D;
use crate::micro2d::{at_cell, local, Grid2D, MicroField2D};
use crate::projection::{add_projection_2d, coeffs_2d, maxwellian_values_2d};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSpec {
    pub t_wall: f64,
    /// Tangential wall velocity.
    pub u_wall: f64,
}

impl WallSpec {
    pub fn new(t_wall: f64, u_wall: f64) -> Result<Self> {
        if !(t_wall > 0.0 && t_wall.is_finite()) {
            return Err(Error::config(
                "t_wall",
                format!("wall temperature must be positive, got {t_wall}"),
            ));
        }
        if !u_wall.is_finite() {
            return Err(Error::config("u_wall", "wall velocity must be finite"));
        }
        Ok(WallSpec { t_wall, u_wall })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcKind {
    Periodic,
    Extrapolate,
    Wall(WallSpec),
}

impl BcKind {
    pub fn name(&self) -> &'static str {
        match self {
            BcKind::Periodic => "periodic",
            BcKind::Extrapolate => "extrapolate",
            BcKind::Wall(_) => "wall",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bc1D {
    pub left: BcKind,
    pub right: BcKind,
}

impl Bc1D {
    pub fn new(left: BcKind, right: BcKind) -> Result<Self> {
        check_pair("x", left, right)?;
        Ok(Bc1D { left, right })
    }

    pub fn side(&self, s: Side) -> BcKind {
        match s {
            Side::Low => self.left,
            Side::High => self.right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    Left,
    Right,
    Bottom,
    Top,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::Left, Face::Right, Face::Bottom, Face::Top];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_x(self) -> bool {
        matches!(self, Face::Left | Face::Right)
    }

    pub fn side(self) -> Side {
        match self {
            Face::Left | Face::Bottom => Side::Low,
            Face::Right | Face::Top => Side::High,
        }
    }

    pub fn opposite(self) -> Face {
        match self {
            Face::Left => Face::Right,
            Face::Right => Face::Left,
            Face::Bottom => Face::Top,
            Face::Top => Face::Bottom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bc2D {
    pub faces: [BcKind; 4],
}

impl Bc2D {
    pub fn new(left: BcKind, right: BcKind, bottom: BcKind, top: BcKind) -> Result<Self> {
        check_pair("x", left, right)?;
        check_pair("y", bottom, top)?;
        Ok(Bc2D {
            faces: [left, right, bottom, top],
        })
    }

    pub fn face(&self, f: Face) -> BcKind {
        self.faces[f.index()]
    }
}

fn check_pair(axis: &str, lo: BcKind, hi: BcKind) -> Result<()> {
    if (lo == BcKind::Periodic) != (hi == BcKind::Periodic) {
        return Err(Error::config(
            format!("bc_{axis}"),
            "periodic must be set on both faces of an axis",
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// 1D

/// Wall density giving zero net mass flux against the adjacent interior state.
pub fn wall_density_1d(p: &Prim1D, wall: &WallSpec, side: Side) -> f64 {
    let (alpha, bp, bm) = half_range_coeffs(p.u, p.t);
    let s = (2.0 * PI / wall.t_wall).sqrt();
    match side {
        Side::Low => s * p.rho * (alpha - p.u * bm),
        Side::High => s * p.rho * (alpha + p.u * bp),
    }
}

/// Ratio of the second to the zeroth velocity moment of the split interface distribution:
/// wall Maxwellian on the incoming half range, interior Maxwellian on the outgoing one.
pub fn wall_interface_temperature_1d(p: &Prim1D, wall: &WallSpec, side: Side) -> f64 {
    let (alpha, bp, bm) = half_range_coeffs(p.u, p.t);
    let tw = wall.t_wall;
    let (r, u, t) = (p.rho, p.u, p.t);
    // emitted wall mass flux per unit interior density
    let k = match side {
        Side::Low => alpha - u * bm,
        Side::High => alpha + u * bp,
    };
    let wall_m2 = k * (PI * tw / 2.0).sqrt();
    let wall_m0 = k * (PI / (2.0 * tw)).sqrt();
    let (gas_m2, gas_m0) = match side {
        Side::Low => ((t + u * u) * bm - u * alpha, bm),
        Side::High => ((t + u * u) * bp + u * alpha, bp),
    };
    (r * (wall_m2 + gas_m2)) / (r * (wall_m0 + gas_m0))
}

pub fn wall_ghost_1d(p: &Prim1D, wall: &WallSpec, side: Side) -> Macro1D {
    Macro1D::from_prim(wall_density_1d(p, wall, side), 0.0, wall.t_wall)
}

/// Fill macro ghost entries 0 and nx+1.
pub fn fill_macro_ghosts_1d(q: &mut [Macro1D], bc: &Bc1D) -> Result<()> {
    let n = q.len() - 2;
    for (side, ghost, inner, wrap) in [(Side::Low, 0, 1, n), (Side::High, n + 1, n, 1)] {
        q[ghost] = match bc.side(side) {
            BcKind::Periodic => q[wrap],
            BcKind::Extrapolate => q[inner],
            BcKind::Wall(w) => {
                let p = primitives_1d(&q[inner]).map_err(|e| relabel_1d(e, inner))?;
                wall_ghost_1d(&p, &w, side)
            }
        };
    }
    Ok(())
}

pub fn fill_micro_ghosts_1d(g: &mut MicroField1D, bc: &Bc1D) {
    let n = g.nx;
    for (side, ghost, inner, wrap) in [(Side::Low, 0, 1, n), (Side::High, n + 1, n, 1)] {
        let src = match bc.side(side) {
            BcKind::Periodic => Some(wrap),
            BcKind::Extrapolate => Some(inner),
            BcKind::Wall(_) => None,
        };
        match src {
            Some(s) => {
                let row = g.row(s).to_vec();
                g.row_mut(ghost).copy_from_slice(&row);
            }
            None => g.row_mut(ghost).iter_mut().for_each(|x| *x = 0.0),
        }
    }
}

/// Ghost heat flux: wrap, copy, or zero at a wall so the interface value is half the cell value.
pub fn fill_heat_ghosts_1d(h: &mut [f64], bc: &Bc1D) {
    let n = h.len() - 2;
    for (side, ghost, inner, wrap) in [(Side::Low, 0, 1, n), (Side::High, n + 1, n, 1)] {
        h[ghost] = match bc.side(side) {
            BcKind::Periodic => h[wrap],
            BcKind::Extrapolate => h[inner],
            BcKind::Wall(_) => 0.0,
        };
    }
}

/// Replace the two boundary face temperatures with the wall values where walls are present.
pub fn apply_wall_temperatures_1d(t_face: &mut [f64], prims: &[Prim1D], bc: &Bc1D) {
    let n = t_face.len() - 1;
    if let BcKind::Wall(w) = bc.left {
        t_face[0] = wall_interface_temperature_1d(&prims[1], &w, Side::Low);
    }
    if let BcKind::Wall(w) = bc.right {
        t_face[n] = wall_interface_temperature_1d(&prims[n], &w, Side::High);
    }
}

/// Net mass flux through a wall: emitted wall half range plus the interior half range
/// leaving the domain, positive in +x.
pub fn wall_mass_flux_1d(p: &Prim1D, wall: &WallSpec, side: Side) -> f64 {
    let rw = wall_density_1d(p, wall, side);
    let (alpha, bp, bm) = half_range_coeffs(p.u, p.t);
    let emitted = rw * (wall.t_wall / (2.0 * PI)).sqrt();
    match side {
        Side::Low => emitted + p.rho * (p.u * bm - alpha),
        Side::High => -emitted + p.rho * (p.u * bp + alpha),
    }
}

fn relabel_1d(e: Error, i: usize) -> Error {
    match e {
        Error::State { msg, .. } => Error::State { cell: vec![i], msg },
        other => other,
    }
}

// ---------------------------------------------------------------------------------------------
// 2D

/// R_a± = √(𝕋_aa/T_w)e^{−u_a²/(2𝕋_aa)} + u_a√(π/(2T_w))(erf(u_a/√(2𝕋_aa)) ± 1).
pub fn wall_ratio(u: f64, taa: f64, t_wall: f64, side: Side) -> f64 {
    let sgn = match side {
        Side::Low => -1.0,
        Side::High => 1.0,
    };
    (taa / t_wall).sqrt() * (-u * u / (2.0 * taa)).exp()
        + u * (PI / (2.0 * t_wall)).sqrt() * (erf(u / (2.0 * taa).sqrt()) + sgn)
}

pub fn wall_density_2d(p: &Prim2D, wall: &WallSpec, face: Face) -> f64 {
    let (u, taa) = if face.is_x() {
        (p.u1, p.tt.t11)
    } else {
        (p.u2, p.tt.t22)
    };
    p.rho * wall_ratio(u, taa, wall.t_wall, face.side())
}

/// Ghost state (ρ_wall, tangential wall velocity, ℙ = ρ_wall T_wall I).
pub fn wall_ghost_2d(p: &Prim2D, wall: &WallSpec, face: Face) -> Macro2D {
    let rw = wall_density_2d(p, wall, face);
    let (u1, u2) = if face.is_x() {
        (0.0, wall.u_wall)
    } else {
        (wall.u_wall, 0.0)
    };
    Macro2D::from_prim(rw, u1, u2, Tensor2::iso(rw * wall.t_wall))
}

/// (ghost, adjacent interior, periodic partner) cell coordinates along one face.
pub(crate) fn face_cells(
    grid: &Grid2D,
    face: Face,
) -> Vec<((usize, usize), (usize, usize), (usize, usize))> {
    let (nx, ny) = (grid.nx, grid.ny);
    match face {
        Face::Left => (1..=ny).map(|j| ((0, j), (1, j), (nx, j))).collect(),
        Face::Right => (1..=ny).map(|j| ((nx + 1, j), (nx, j), (1, j))).collect(),
        Face::Bottom => (1..=nx).map(|i| ((i, 0), (i, 1), (i, ny))).collect(),
        Face::Top => (1..=nx).map(|i| ((i, ny + 1), (i, ny), (i, 1))).collect(),
    }
}

/// Fill one face of macro ghosts. Periodic wraps inside the block, which is only correct
/// when the block spans the whole periodic axis.
pub fn fill_macro_face_2d(
    q: &mut [Macro2D],
    grid: &Grid2D,
    face: Face,
    kind: BcKind,
) -> Result<()> {
    for (g, c, w) in face_cells(grid, face) {
        let gi = grid.cell(g.0, g.1);
        q[gi] = match kind {
            BcKind::Periodic => q[grid.cell(w.0, w.1)],
            BcKind::Extrapolate => q[grid.cell(c.0, c.1)],
            BcKind::Wall(wall) => {
                let p = primitives_2d(&q[grid.cell(c.0, c.1)]).map_err(|e| at_cell(e, c.0, c.1))?;
                wall_ghost_2d(&p, &wall, face)
            }
        };
    }
    Ok(())
}

pub fn fill_micro_face_2d(g: &mut MicroField2D, grid: &Grid2D, face: Face, kind: BcKind) {
    let nv = g.nv;
    for (gc, c, w) in face_cells(grid, face) {
        let dst = g.idx(gc.0, gc.1) * nv;
        let src = match kind {
            BcKind::Periodic => Some(g.idx(w.0, w.1) * nv),
            BcKind::Extrapolate => Some(g.idx(c.0, c.1) * nv),
            BcKind::Wall(_) => None,
        };
        match src {
            Some(s) => g.data.copy_within(s..s + nv, dst),
            None => g.data[dst..dst + nv].iter_mut().for_each(|x| *x = 0.0),
        }
    }
}

pub fn fill_heat_face_2d(h: &mut [HeatTensor2D], grid: &Grid2D, face: Face, kind: BcKind) {
    for (g, c, w) in face_cells(grid, face) {
        h[grid.cell(g.0, g.1)] = match kind {
            BcKind::Periodic => h[grid.cell(w.0, w.1)],
            BcKind::Extrapolate => h[grid.cell(c.0, c.1)],
            BcKind::Wall(_) => HeatTensor2D::default(),
        };
    }
}

/// Whole-domain fills for a single block.
pub fn fill_macro_ghosts_2d(
    q: &mut [Macro2D],
    grid: &Grid2D,
    bc: &Bc2D,
    faces: &[Face],
) -> Result<()> {
    for &f in faces {
        fill_macro_face_2d(q, grid, f, bc.face(f))?;
    }
    Ok(())
}

pub fn fill_micro_ghosts_2d(g: &mut MicroField2D, grid: &Grid2D, bc: &Bc2D, faces: &[Face]) {
    for &f in faces {
        fill_micro_face_2d(g, grid, f, bc.face(f));
    }
}

pub fn fill_heat_ghosts_2d(h: &mut [HeatTensor2D], grid: &Grid2D, bc: &Bc2D, faces: &[Face]) {
    for &f in faces {
        fill_heat_face_2d(h, grid, f, bc.face(f));
    }
}

/// Halo corners are never read by the dimensional stencils; debug builds poison them.
pub fn poison_corners<T: Copy>(data: &mut [T], grid: &Grid2D, sentinel: T) {
    if cfg!(debug_assertions) {
        let (nx, ny) = (grid.nx, grid.ny);
        for (i, j) in [(0, 0), (nx + 1, 0), (0, ny + 1), (nx + 1, ny + 1)] {
            data[grid.cell(i, j)] = sentinel;
        }
    }
}

/// Ĝ = −(1/τ)(I−Π)[M] on a wall-adjacent cell, with M the upwind difference of v·∇ℳ built from
/// the cell's own Maxwellian and its four neighbours (ghost wall Maxwellians on wall sides).
/// `m` must hold the cell's Maxwellian; `buf` is scratch of the same length.
pub fn wall_ghat_cell(
    p: &Prim2D,
    nb: [&Prim2D; 4],
    grid: &Grid2D,
    model: &CollisionModel,
    m: &[f64],
    buf: &mut [f64],
    out: &mut [f64],
) {
    let vg = &grid.vg;
    let n2 = vg.n2();
    let (ix, iy) = (1.0 / grid.dx, 1.0 / grid.dy);
    out.iter_mut().for_each(|x| *x = 0.0);
    for (s, nbp) in nb.iter().enumerate() {
        maxwellian_values_2d(&local(nbp), vg, buf);
        // neighbour s contributes only on the velocities that flow from it into the cell
        for (k, &a) in vg.v1.iter().enumerate() {
            for (l, &b) in vg.v2.iter().enumerate() {
                let q = k * n2 + l;
                let d = m[q] - buf[q];
                out[q] += match s {
                    0 => a.max(0.0) * ix * d,
                    1 => -a.min(0.0) * ix * d,
                    2 => b.max(0.0) * iy * d,
                    _ => -b.min(0.0) * iy * d,
                };
            }
        }
    }
    let loc = local(p);
    let c = coeffs_2d(out, &loc, vg);
    add_projection_2d(&c, &loc, vg, m, -1.0, out);
    let tau = model.tau(p.rho, p.t);
    out.iter_mut().for_each(|x| *x *= -1.0 / tau);
}

/// Overwrite Ĝ on every cell adjacent to a wall face listed in `walls`.
pub fn override_wall_ghat_2d(
    ghat: &mut MicroField2D,
    prims: &[Prim2D],
    grid: &Grid2D,
    model: &CollisionModel,
    walls: &[Face],
) {
    if walls.is_empty() {
        return;
    }
    let nv = grid.nv();
    let (mut m, mut buf) = (vec![0.0; nv], vec![0.0; nv]);
    let (nx, ny) = (grid.nx, grid.ny);
    for (i, j) in grid.interior() {
        let adjacent = walls.iter().any(|f| match f {
            Face::Left => i == 1,
            Face::Right => i == nx,
            Face::Bottom => j == 1,
            Face::Top => j == ny,
        });
        if !adjacent {
            continue;
        }
        let p = &prims[grid.cell(i, j)];
        let nb = [
            &prims[grid.cell(i - 1, j)],
            &prims[grid.cell(i + 1, j)],
            &prims[grid.cell(i, j - 1)],
            &prims[grid.cell(i, j + 1)],
        ];
        maxwellian_values_2d(&local(p), &grid.vg, &mut m);
        wall_ghat_cell(p, nb, grid, model, &m, &mut buf, ghat.cell_mut(i, j));
    }
}
