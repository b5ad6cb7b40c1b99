//! 1D macroscopic finite-volume update with kinetic flux vector splitting.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gas_state::{erf, primitives_1d, Macro1D, Prim1D};
use crate::mesh::VelGrid1D;
use crate::micro1d::MicroField1D;

pub type Flux1D = [f64; 3];

/// α = √(T/2π)e^{−u²/2T} and β± = ½(1 ± erf(u/√(2T))).
#[inline]
pub fn half_range_coeffs(u: f64, t: f64) -> (f64, f64, f64) {
    let alpha = (t / (2.0 * PI)).sqrt() * (-u * u / (2.0 * t)).exp();
    let e = erf(u / (2.0 * t).sqrt());
    (alpha, 0.5 * (1.0 + e), 0.5 * (1.0 - e))
}

/// Euler flux (ρu, ρ(T+u²), ½ρu(3T+u²)).
#[inline]
pub fn physical_flux_1d(p: &Prim1D) -> Flux1D {
    [
        p.rho * p.u,
        p.rho * (p.t + p.u * p.u),
        0.5 * p.rho * p.u * (3.0 * p.t + p.u * p.u),
    ]
}

pub fn kfvs_flux_prim_1d(l: &Prim1D, r: &Prim1D) -> Flux1D {
    let (al, bpl, _) = half_range_coeffs(l.u, l.t);
    let (ar, _, bmr) = half_range_coeffs(r.u, r.t);
    let fl = physical_flux_1d(l);
    let fr = physical_flux_1d(r);
    let wl = [l.rho, l.rho * l.u, 0.5 * l.rho * (2.0 * l.t + l.u * l.u)];
    let wr = [r.rho, r.rho * r.u, 0.5 * r.rho * (2.0 * r.t + r.u * r.u)];
    std::array::from_fn(|c| al * wl[c] + bpl * fl[c] - ar * wr[c] + bmr * fr[c])
}

pub fn kfvs_flux_1d(ql: &Macro1D, qr: &Macro1D) -> Result<Flux1D> {
    Ok(kfvs_flux_prim_1d(&primitives_1d(ql)?, &primitives_1d(qr)?))
}

/// H_i = (ε/2)Δv Σ v³ G_i on interior rows; ghost entries are left at zero.
pub fn heat_flux_1d(g: &MicroField1D, vg: &VelGrid1D, eps: f64) -> Vec<f64> {
    let mut h = vec![0.0; g.nx + 2];
    for (i, hi) in h.iter_mut().enumerate().take(g.nx + 1).skip(1) {
        let s: f64 = g
            .row(i)
            .iter()
            .zip(&vg.v)
            .map(|(&x, &v)| v * v * v * x)
            .sum();
        *hi = 0.5 * eps * vg.dv * s;
    }
    h
}

/// Conservative update of the interior cells. `q` and `h` carry filled ghost entries at
/// indices 0 and nx+1; `source` holds per-interior-cell increments already scaled by Δt.
pub fn macro_step_1d(
    q: &[Macro1D],
    h: &[f64],
    source: Option<&[[f64; 3]]>,
    dx: f64,
    dt: f64,
) -> Result<Vec<Macro1D>> {
    let nx = q.len() - 2;
    let prims = q
        .iter()
        .enumerate()
        .map(|(i, c)| primitives_1d(c).map_err(|e| relabel(e, i)))
        .collect::<Result<Vec<_>>>()?;
    let flux: Vec<Flux1D> = prims
        .windows(2)
        .map(|w| kfvs_flux_prim_1d(&w[0], &w[1]))
        .collect();
    let hf: Vec<f64> = h.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let r = dt / dx;
    let mut out = q.to_vec();
    for i in 1..=nx {
        let mut a = q[i].to_array();
        for (c, ac) in a.iter_mut().enumerate() {
            *ac -= r * (flux[i][c] - flux[i - 1][c]);
        }
        a[2] -= r * (hf[i] - hf[i - 1]);
        if let Some(s) = source {
            for (ac, sc) in a.iter_mut().zip(&s[i - 1]) {
                *ac += sc;
            }
        }
        let next = Macro1D::from_array(a);
        primitives_1d(&next).map_err(|e| relabel(e, i))?;
        out[i] = next;
    }
    Ok(out)
}

fn relabel(e: Error, i: usize) -> Error {
    match e {
        Error::State { msg, .. } => Error::State { cell: vec![i], msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64)
    }

    fn half_range_quadrature(l: &Prim1D, r: &Prim1D, n: usize, vmax: f64) -> Flux1D {
        let dv = vmax / n as f64;
        let mut f = [0.0; 3];
        for k in 0..n {
            let v = (k as f64 + 0.5) * dv;
            let ml = crate::gas_state::maxwellian_1d(l.rho, l.u, l.t, v);
            let mr = crate::gas_state::maxwellian_1d(r.rho, r.u, r.t, -v);
            f[0] += (v * ml - v * mr) * dv;
            f[1] += (v * v * ml + v * v * mr) * dv;
            f[2] += 0.5 * (v * v * v * ml - v * v * v * mr) * dv;
        }
        f
    }

    #[test]
    fn consistency_at_rest() {
        let q = Macro1D::from_prim(1.0, 0.0, 1.0);
        let f = kfvs_flux_1d(&q, &q).unwrap();
        assert!(
            f[0].abs() < 1e-15 && (f[1] - 1.0).abs() < 1e-15 && f[2].abs() < 1e-15,
            "{f:?}"
        );
    }

    #[test]
    fn supersonic_limit() {
        let p = Prim1D {
            rho: 1.0,
            u: 50.0,
            t: 1.0,
        };
        let f = kfvs_flux_prim_1d(&p, &p);
        let e = physical_flux_1d(&p);
        for c in 0..3 {
            assert!((f[c] - e[c]).abs() <= 1e-12 * e[c].abs());
        }
    }

    #[test]
    fn consistency_randomized() {
        let mut s = 9;
        for _ in 0..200 {
            let p = Prim1D {
                rho: 0.1 + 2.0 * lcg(&mut s),
                u: 4.0 * lcg(&mut s) - 2.0,
                t: 0.1 + 2.0 * lcg(&mut s),
            };
            let f = kfvs_flux_prim_1d(&p, &p);
            let e = physical_flux_1d(&p);
            let scale = e
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()))
                .max(p.rho * p.t);
            for c in 0..3 {
                assert!((f[c] - e[c]).abs() <= 1e-13 * scale, "{f:?} {e:?}");
            }
        }
    }

    #[test]
    fn matches_half_range_quadrature() {
        let l = Prim1D {
            rho: 1.0,
            u: 0.3,
            t: 1.1,
        };
        let r = Prim1D {
            rho: 0.4,
            u: -0.2,
            t: 0.7,
        };
        let f = kfvs_flux_prim_1d(&l, &r);
        let q = half_range_quadrature(&l, &r, 1_000_000, 20.0);
        for c in 0..3 {
            assert!((f[c] - q[c]).abs() < 1e-6, "{f:?} {q:?}");
        }
    }

    #[test]
    fn heat_flux_parity_and_reference() {
        let vg = VelGrid1D::new(&crate::mesh::Axis::new(-4.0, 4.0, 16).unwrap());
        let mut g = MicroField1D::zeros(3, 16);
        for i in 0..5 {
            g.row_mut(i)
                .iter_mut()
                .zip(&vg.v)
                .for_each(|(x, &v)| *x = (-v * v).exp());
        }
        assert!(heat_flux_1d(&g, &vg, 0.3).iter().all(|&h| h.abs() < 1e-15));
        for i in 0..5 {
            g.row_mut(i).copy_from_slice(&vg.v);
        }
        let h = heat_flux_1d(&g, &vg, 0.3);
        let mut want = 0.0;
        for k in 0..16 {
            want += vg.v[k].powi(4);
        }
        want *= 0.5 * 0.3 * vg.dv;
        assert!(want > 0.0 && (h[2] - want).abs() < 1e-12 * want);
        assert!(heat_flux_1d(&g, &vg, 0.0).iter().all(|&h| h == 0.0));
    }

    fn periodic(q: &mut [Macro1D]) {
        let n = q.len() - 2;
        q[0] = q[n];
        q[n + 1] = q[1];
    }

    #[test]
    fn uniform_state_unchanged() {
        let mut q = vec![Macro1D::from_prim(1.0, 0.2, 1.0); 12];
        periodic(&mut q);
        let out = macro_step_1d(&q, &[0.0; 12], None, 0.1, 0.01).unwrap();
        for i in 1..=10 {
            for c in 0..3 {
                assert!((out[i].to_array()[c] - q[i].to_array()[c]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn periodic_mass_conserved() {
        let mut s = 2;
        let mut q: Vec<Macro1D> = (0..34)
            .map(|_| Macro1D::from_prim(0.5 + lcg(&mut s), lcg(&mut s) - 0.5, 0.5 + lcg(&mut s)))
            .collect();
        periodic(&mut q);
        let mut h: Vec<f64> = (0..34).map(|_| 0.1 * (lcg(&mut s) - 0.5)).collect();
        h[0] = h[32];
        h[33] = h[1];
        let out = macro_step_1d(&q, &h, None, 1.0 / 32.0, 0.002).unwrap();
        for c in 0..3 {
            let before: f64 = q[1..=32].iter().map(|x| x.to_array()[c]).sum();
            let after: f64 = out[1..=32].iter().map(|x| x.to_array()[c]).sum();
            assert!(
                (before - after).abs() <= 1e-13 * before.abs().max(1.0),
                "{c}: {before} {after}"
            );
        }
    }

    #[test]
    fn shock_tube_stencil_is_local() {
        let nx = 20;
        let mut q: Vec<Macro1D> = (0..nx + 2)
            .map(|i| {
                if i <= nx / 2 {
                    Macro1D::from_prim(1.0, 0.0, 1.0)
                } else {
                    Macro1D::from_prim(0.125, 0.0, 0.8)
                }
            })
            .collect();
        q[0] = q[1];
        q[nx + 1] = q[nx];
        let out = macro_step_1d(&q, &vec![0.0; nx + 2], None, 0.05, 0.001).unwrap();
        for i in 1..=nx {
            let changed = out[i] != q[i];
            assert_eq!(changed, i == nx / 2 || i == nx / 2 + 1, "cell {i}");
        }
    }

    #[test]
    fn invalid_result_reports_cell() {
        let mut q = vec![Macro1D::from_prim(1.0, 0.0, 1.0); 6];
        q[3] = Macro1D::from_prim(1e-6, 0.0, 1e-6);
        let err = macro_step_1d(&q, &[0.0; 6], None, 0.01, 1.0).unwrap_err();
        assert_eq!(err.category(), "state");
    }
}
