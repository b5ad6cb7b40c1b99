//! One step of the 1D microscopic update with the semi-implicit collision treatment.

use crate::error::Result;
use crate::gas_state::{CollisionModel, Prim1D};
use crate::mesh::{PhaseMesh, VelGrid1D};
use crate::projection::{apply_1d, coeffs_1d, maxwellian_values_1d};

/// Spatial and velocity discretization seen by the 1D kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub nx: usize,
    pub dx: f64,
    pub vg: VelGrid1D,
}

impl Grid1D {
    pub fn new(mesh: &PhaseMesh) -> Self {
        Grid1D {
            nx: mesh.x().n,
            dx: mesh.x().spacing(),
            vg: VelGrid1D::new(mesh.v1()),
        }
    }

    pub fn nv(&self) -> usize {
        self.vg.len()
    }
}

/// Micro values on `nx` cells plus one ghost cell per side. Row `i` holds cell `i`,
/// so interior cells are rows `1..=nx` and rows `0`, `nx+1` are ghosts.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroField1D {
    pub nx: usize,
    pub nv: usize,
    pub data: Vec<f64>,
}

impl MicroField1D {
    pub fn zeros(nx: usize, nv: usize) -> Self {
        MicroField1D {
            nx,
            nv,
            data: vec![0.0; (nx + 2) * nv],
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.nv..(i + 1) * self.nv]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.nv..(i + 1) * self.nv]
    }
}

/// Face temperatures T_{i+1/2} = (T_i + T_{i+1})/2 for faces 0..=nx; face `f` sits between
/// cells `f` and `f+1`. Wall faces are overwritten by the boundary module.
pub fn interface_temperatures_1d(prims: &[Prim1D]) -> Vec<f64> {
    prims.windows(2).map(|w| 0.5 * (w[0].t + w[1].t)).collect()
}

/// ε/(ε+Δtτ) and Δtτ/(ε+Δtτ).
#[inline]
pub fn collision_weights(eps: f64, dt: f64, tau: f64) -> (f64, f64) {
    let d = eps + dt * tau;
    (eps / d, dt * tau / d)
}

/// Ĝ from the analytic projection of the Maxwellian transport term.
pub fn ghat_1d(
    prims: &[Prim1D],
    t_face: &[f64],
    model: &CollisionModel,
    grid: &Grid1D,
) -> MicroField1D {
    let nv = grid.nv();
    let mut out = MicroField1D::zeros(grid.nx, nv);
    let mut m = vec![0.0; nv];
    for i in 1..=grid.nx {
        let p = &prims[i];
        let tau = model.tau(p.rho, p.t);
        let grad = (t_face[i] - t_face[i - 1]) / (grid.dx * p.t);
        maxwellian_values_1d(p, &grid.vg, &mut m);
        for ((o, &v), &mv) in out.row_mut(i).iter_mut().zip(&grid.vg.v).zip(&m) {
            let c = v - p.u;
            *o = -(c * c * c / (2.0 * p.t) - 1.5 * c) * grad * mv / tau;
        }
    }
    out
}

/// Sign-split upwind difference of G; ghost rows must already hold boundary data.
pub fn upwind_z_1d(g: &MicroField1D, grid: &Grid1D) -> MicroField1D {
    let nv = g.nv;
    let mut z = MicroField1D::zeros(g.nx, nv);
    let inv = 1.0 / grid.dx;
    for i in 1..=g.nx {
        let (gl, gc, gr) = (g.row(i - 1), g.row(i), g.row(i + 1));
        for (k, zk) in z.row_mut(i).iter_mut().enumerate() {
            let v = grid.vg.v[k];
            *zk = v.min(0.0) * (gr[k] - gc[k]) * inv + v.max(0.0) * (gc[k] - gl[k]) * inv;
        }
    }
    z
}

/// G^{n+1} = ε/(ε+Δtτ)(G − Δt(Z − Ẑ)) + Δtτ/(ε+Δtτ)Ĝ with Ẑ the discrete projection of Z.
pub fn micro_step_1d(
    g: &MicroField1D,
    prims: &[Prim1D],
    ghat: &MicroField1D,
    model: &CollisionModel,
    grid: &Grid1D,
    dt: f64,
    eps: f64,
) -> Result<MicroField1D> {
    let nv = g.nv;
    let z = upwind_z_1d(g, grid);
    let mut out = MicroField1D::zeros(g.nx, nv);
    let mut m = vec![0.0; nv];
    let mut zhat = vec![0.0; nv];
    for i in 1..=g.nx {
        let p = &prims[i];
        let tau = model.tau(p.rho, p.t);
        let (a, b) = collision_weights(eps, dt, tau);
        maxwellian_values_1d(p, &grid.vg, &mut m);
        let zi = z.row(i);
        let c = coeffs_1d(zi, p, &grid.vg);
        apply_1d(&c, p, &grid.vg, &m, &mut zhat);
        let (gi, hi) = (g.row(i), ghat.row(i));
        for (k, o) in out.row_mut(i).iter_mut().enumerate() {
            *o = a * (gi[k] - dt * (zi[k] - zhat[k])) + b * hi[k];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas_state::{maxwellian_1d, TauKind};
    use crate::mesh::Axis;

    fn grid(nx: usize, nv: usize) -> Grid1D {
        wide_grid(nx, nv, 6.5)
    }

    fn wide_grid(nx: usize, nv: usize, l: f64) -> Grid1D {
        Grid1D::new(&PhaseMesh::one_d(
            Axis::new(0.0, 1.0, nx).unwrap(),
            Axis::new(-l, l, nv).unwrap(),
        ))
    }

    fn hs() -> CollisionModel {
        CollisionModel::new(TauKind::HardSphere1d, 0.0).unwrap()
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64)
    }

    fn periodic_ghosts(g: &mut MicroField1D) {
        let nx = g.nx;
        let last = g.row(nx).to_vec();
        let first = g.row(1).to_vec();
        g.row_mut(0).copy_from_slice(&last);
        g.row_mut(nx + 1).copy_from_slice(&first);
    }

    #[test]
    fn ghat_vanishes_for_uniform_temperature() {
        let gr = grid(8, 16);
        let prims: Vec<Prim1D> = (0..10)
            .map(|i| Prim1D {
                rho: 1.0 + 0.1 * i as f64,
                u: 0.2,
                t: 1.3,
            })
            .collect();
        let tf = interface_temperatures_1d(&prims);
        assert!(ghat_1d(&prims, &tf, &hs(), &gr)
            .data
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn ghat_sign_for_rising_temperature() {
        let gr = grid(4, 40);
        let prims: Vec<Prim1D> = (0..6)
            .map(|i| Prim1D {
                rho: 1.0,
                u: 0.0,
                t: 1.0 + 0.05 * i as f64,
            })
            .collect();
        let tf = interface_temperatures_1d(&prims);
        let gh = ghat_1d(&prims, &tf, &hs(), &gr);
        // v ≈ 6.34 is well past the sign change at √3·√T
        assert!(gh.row(2)[39] < 0.0);
    }

    #[test]
    fn ghat_matches_symbolic_profile() {
        // Smooth periodic temperature; Ĝ against −(1/τ)(I−Π)[vℳ_x] evaluated with exact T_x.
        let nx = 200;
        let gr = grid(nx, 60);
        let prof = |x: f64| Prim1D {
            rho: 1.0 + 0.3 * (2.0 * std::f64::consts::PI * x).sin(),
            u: 0.1,
            t: 1.0 + 0.2 * (2.0 * std::f64::consts::PI * x).cos(),
        };
        let xs: Vec<f64> = (0..nx + 2).map(|i| (i as f64 - 0.5) * gr.dx).collect();
        let prims: Vec<Prim1D> = xs.iter().map(|&x| prof(x)).collect();
        let tf = interface_temperatures_1d(&prims);
        let gh = ghat_1d(&prims, &tf, &hs(), &gr);
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 1..=nx {
            let p = prims[i];
            let tx = -0.4 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * xs[i]).sin();
            let tau = hs().tau(p.rho, p.t);
            for (k, &v) in gr.vg.v.iter().enumerate() {
                let c = v - p.u;
                let want = -(c.powi(3) / (2.0 * p.t) - 1.5 * c) * tx / p.t
                    * maxwellian_1d(p.rho, p.u, p.t, v)
                    / tau;
                err = err.max((gh.row(i)[k] - want).abs());
                scale = scale.max(want.abs());
            }
        }
        assert!(err < 1e-3 * scale, "{err} vs {scale}");
    }

    #[test]
    fn upwind_constant_and_linear() {
        let gr = grid(6, 8);
        let mut g = MicroField1D::zeros(6, 8);
        g.data.iter_mut().for_each(|x| *x = 2.5);
        assert!(upwind_z_1d(&g, &gr).data.iter().all(|&x| x == 0.0));
        for i in 0..8 {
            let x = (i as f64 - 0.5) * gr.dx;
            g.row_mut(i).iter_mut().for_each(|y| *y = x);
        }
        let z = upwind_z_1d(&g, &gr);
        for i in 1..=6 {
            for (k, &v) in gr.vg.v.iter().enumerate() {
                assert!((z.row(i)[k] - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn upwind_matches_reference_loop() {
        let (nx, nv) = (7, 9);
        let gr = grid(nx, nv);
        let mut seed = 11;
        let mut g = MicroField1D::zeros(nx, nv);
        g.data.iter_mut().for_each(|x| *x = lcg(&mut seed));
        let z = upwind_z_1d(&g, &gr);
        for i in 1..=nx {
            for k in 0..nv {
                let v = gr.vg.v[k];
                let gm = g.data[(i - 1) * nv + k];
                let g0 = g.data[i * nv + k];
                let gp = g.data[(i + 1) * nv + k];
                let want = if v > 0.0 {
                    v * (g0 - gm) / gr.dx
                } else {
                    v * (gp - g0) / gr.dx
                };
                assert!((z.data[i * nv + k] - want).abs() <= 1e-13 * want.abs().max(1.0));
            }
        }
    }

    fn random_setup(
        nx: usize,
        nv: usize,
        l: f64,
        seed: u64,
    ) -> (Grid1D, MicroField1D, Vec<Prim1D>) {
        let gr = wide_grid(nx, nv, l);
        let mut s = seed;
        let mut g = MicroField1D::zeros(nx, nv);
        g.data.iter_mut().for_each(|x| *x = lcg(&mut s) - 0.5);
        periodic_ghosts(&mut g);
        let prims: Vec<Prim1D> = (0..nx + 2)
            .map(|_| Prim1D {
                rho: 0.5 + lcg(&mut s),
                u: lcg(&mut s) - 0.5,
                t: 0.5 + lcg(&mut s),
            })
            .collect();
        (gr, g, prims)
    }

    #[test]
    fn z_minus_zhat_has_no_basis_moments() {
        // wide grid: the residual is the quadrature defect of the basis, negligible here
        let (gr, g, prims) = random_setup(5, 96, 12.0, 3);
        let z = upwind_z_1d(&g, &gr);
        let mut m = vec![0.0; 96];
        let mut zh = vec![0.0; 96];
        for i in 1..=5 {
            let p = prims[i];
            maxwellian_values_1d(&p, &gr.vg, &mut m);
            let c = coeffs_1d(z.row(i), &p, &gr.vg);
            apply_1d(&c, &p, &gr.vg, &m, &mut zh);
            let d: Vec<f64> = z.row(i).iter().zip(&zh).map(|(a, b)| a - b).collect();
            let r = coeffs_1d(&d, &p, &gr.vg);
            let scale = c.a1.abs() + c.a2.abs() + c.a3.abs() + 1.0;
            assert!(
                r.a1.abs() < 1e-11 * scale
                    && r.a2.abs() < 1e-11 * scale
                    && r.a3.abs() < 1e-11 * scale,
                "{r:?}"
            );
        }
    }

    #[test]
    fn step_limits_and_identities() {
        let (gr, g, prims) = random_setup(6, 32, 6.5, 5);
        let tf = interface_temperatures_1d(&prims);
        let gh = ghat_1d(&prims, &tf, &hs(), &gr);
        let same = micro_step_1d(&g, &prims, &gh, &hs(), &gr, 0.0, 0.1).unwrap();
        for i in 1..=6 {
            assert_eq!(same.row(i), g.row(i));
        }
        let ap = micro_step_1d(&g, &prims, &gh, &hs(), &gr, 1e-3, 1e-14).unwrap();
        for i in 1..=6 {
            for k in 0..32 {
                let (a, b) = (ap.row(i)[k], gh.row(i)[k]);
                assert!((a - b).abs() <= 1e-8 * b.abs() + 1e-10, "{a} {b}");
            }
        }
    }

    #[test]
    fn equilibrium_stays_zero() {
        let gr = grid(6, 20);
        let prims = vec![
            Prim1D {
                rho: 1.0,
                u: 0.3,
                t: 1.0
            };
            8
        ];
        let g = MicroField1D::zeros(6, 20);
        let tf = interface_temperatures_1d(&prims);
        let gh = ghat_1d(&prims, &tf, &hs(), &gr);
        let out = micro_step_1d(&g, &prims, &gh, &hs(), &gr, 0.01, 0.1).unwrap();
        assert!(out.data.iter().all(|&x| x == 0.0));
    }
}
