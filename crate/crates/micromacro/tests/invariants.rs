//! Property tests for the solver's algebraic and parallel invariants.

use micromacro::gas_state::{primitives_1d, primitives_2d, Macro1D, Macro2D, Tensor2};
use micromacro::macro1d::{kfvs_flux_1d, physical_flux_1d};
use micromacro::macro2d::{
    apply_relax, kfvs_flux_2d_x, kfvs_flux_2d_y, physical_flux_x, physical_flux_y, relax_factor,
};
use micromacro::mesh::{Axis, VelGrid1D, VelGrid2D};
use micromacro::projection::{
    add_projection_2d, apply_1d, coeffs_1d, coeffs_2d, invariant_moments_1d, invariant_moments_2d,
    maxwellian_values_1d, maxwellian_values_2d, Local2D,
};
use micromacro::runner::{parse_config, run_case, CaseConfig, RunOutput};
use proptest::prelude::*;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

prop_compose! {
    fn state1d()(rho in 0.1..3.0f64, u in -2.0..2.0f64, t in 0.2..3.0f64) -> Macro1D {
        Macro1D::from_prim(rho, u, t)
    }
}

prop_compose! {
    fn state2d()(rho in 0.1..3.0f64, u1 in -1.5..1.5f64, u2 in -1.5..1.5f64,
                 t11 in 0.3..2.5f64, t22 in 0.3..2.5f64, c in -0.9..0.9f64) -> Macro2D {
        let p = Tensor2 { t11: rho * t11, t12: rho * c * (t11 * t22).sqrt(), t22: rho * t22 };
        Macro2D::from_prim(rho, u1, u2, p)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kfvs_is_consistent(q in state1d(), q2 in state2d()) {
        let p = primitives_1d(&q).unwrap();
        prop_assert!(close(&kfvs_flux_1d(&q, &q).unwrap(), &physical_flux_1d(&p), 1e-12));
        let p2 = primitives_2d(&q2).unwrap();
        prop_assert!(close(&kfvs_flux_2d_x(&q2, &q2).unwrap(), &physical_flux_x(&p2), 1e-12));
        prop_assert!(close(&kfvs_flux_2d_y(&q2, &q2).unwrap(), &physical_flux_y(&p2), 1e-12));
    }

    #[test]
    fn kfvs_mass_flux_is_antisymmetric_under_reflection(a in state1d(), b in state1d()) {
        let mirror = |q: &Macro1D| Macro1D { mom: -q.mom, ..*q };
        let f = kfvs_flux_1d(&a, &b).unwrap();
        let g = kfvs_flux_1d(&mirror(&b), &mirror(&a)).unwrap();
        prop_assert!((f[0] + g[0]).abs() <= 1e-13 * (f[0].abs() + 1.0));
        prop_assert!((f[1] - g[1]).abs() <= 1e-13 * (f[1].abs() + 1.0));
    }

    #[test]
    fn relaxation_keeps_trace_and_damps_shear(q in state2d(), tau in 0.01..10.0f64, nu in -1.0..0.99f64,
                                              eps in 1e-6..10.0f64, dt in 0.0..1.0f64) {
        let w = relax_factor(tau, nu, eps, dt);
        prop_assert!(w.abs() <= 1.0);
        let p = primitives_2d(&q).unwrap().p;
        let r = apply_relax(&p, w);
        let tr = p.t11 + p.t22;
        prop_assert!(((r.t11 + r.t22) - tr).abs() <= 4.0 * f64::EPSILON * tr);
        prop_assert!(r.t12.abs() <= p.t12.abs());
        prop_assert!(r.t11 * r.t22 - r.t12 * r.t12 > 0.0);
        prop_assert_eq!(relax_factor(tau, nu, eps, 0.0), 1.0);
    }

    #[test]
    fn projection_1d_is_idempotent_and_moment_exact(q in state1d(), seed in prop::collection::vec(-1.0..1.0f64, 160)) {
        let vg = VelGrid1D::new(&Axis::new(-20.0, 20.0, 160).unwrap());
        let p = primitives_1d(&q).unwrap();
        let mut m = vec![0.0; vg.v.len()];
        maxwellian_values_1d(&p, &vg, &mut m);
        let mut once = vec![0.0; seed.len()];
        apply_1d(&coeffs_1d(&seed, &p, &vg), &p, &vg, &m, &mut once);
        let mut twice = vec![0.0; seed.len()];
        apply_1d(&coeffs_1d(&once, &p, &vg), &p, &vg, &m, &mut twice);
        prop_assert!(close(&twice, &once, 1e-10));
        let a = invariant_moments_1d(&seed, p.u, &vg);
        let b = invariant_moments_1d(&once, p.u, &vg);
        prop_assert!(close(&b, &a, 1e-10));
    }

    #[test]
    fn projection_2d_is_idempotent(q in state2d(), seed in prop::collection::vec(-1.0..1.0f64, 72 * 72)) {
        let ax = Axis::new(-14.0, 14.0, 72).unwrap();
        let vg = VelGrid2D::new(&ax, &ax);
        let p = primitives_2d(&q).unwrap();
        let loc = Local2D { rho: p.rho, u1: p.u1, u2: p.u2, t: p.t };
        let mut m = vec![0.0; 72 * 72];
        maxwellian_values_2d(&loc, &vg, &mut m);
        let mut once = vec![0.0; 72 * 72];
        add_projection_2d(&coeffs_2d(&seed, &loc, &vg), &loc, &vg, &m, 1.0, &mut once);
        let mut twice = vec![0.0; 72 * 72];
        add_projection_2d(&coeffs_2d(&once, &loc, &vg), &loc, &vg, &m, 1.0, &mut twice);
        prop_assert!(close(&twice, &once, 1e-9));
        let a = invariant_moments_2d(&seed, p.u1, p.u2, &vg);
        let b = invariant_moments_2d(&once, p.u1, p.u2, &vg);
        prop_assert!(close(&b, &a, 1e-9));
    }
}

fn lid(workers: &str, steps: usize) -> CaseConfig {
    parse_config(&format!(
        "case = lid_cavity\nx = 0, 1\nnx = 8\ny = 0, 1\nny = 8\nv1 = -5, 5\nnv1 = 6\nv2 = -5, 5\nnv2 = 6\neps = 0.08\n\
         nu = -1\ntau_model = esbgk_2d\ncfl = 0.95\nt_final = 3\nbc_left = wall\nt_wall_left = 1\nbc_right = wall\nt_wall_right = 1\n\
         bc_bottom = wall\nt_wall_bottom = 1\nbc_top = wall\nt_wall_top = 1\nu_wall_top = 0.16\nmax_steps = {steps}\nworkers = {workers}\nmicro_cells = 2:3, 7:7\n"
    ))
    .unwrap()
}

fn wave(workers: &str) -> CaseConfig {
    parse_config(&format!(
        "case = custom\ndim = 2\nx = 0, 1\nnx = 8\ny = 0, 1\nny = 8\nv1 = -6, 6\nnv1 = 8\nv2 = -6, 6\nnv2 = 8\n\
         eps = 0.1\nnu = -0.5\ntau_model = esbgk_2d\ncfl = 0.9\nt_final = 1\nmax_steps = 12\nbc_left = periodic\n\
         bc_right = periodic\nbc_bottom = periodic\nbc_top = periodic\ninit = wave\nworkers = {workers}\n"
    ))
    .unwrap()
}

fn max_diff(a: &RunOutput, b: &RunOutput) -> f64 {
    a.frames
        .iter()
        .zip(&b.frames)
        .flat_map(|(x, y)| x.values.iter().zip(&y.values).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

const GRIDS: [&str; 6] = ["1x2", "2x1", "2x2", "1x4", "4x1", "4x4"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn worker_count_does_not_change_the_answer(k in 0..GRIDS.len(), steps in 1usize..6) {
        let base = run_case(&lid("1x1", steps), 0.08).unwrap();
        let split = run_case(&lid(GRIDS[k], steps), 0.08).unwrap();
        prop_assert_eq!(base.frames.len(), split.frames.len());
        prop_assert!(max_diff(&base, &split) <= 1e-13);
        for (x, y) in base.frames.iter().zip(&split.frames) {
            prop_assert_eq!(&x.micro, &y.micro);
        }
    }

    #[test]
    fn periodic_runs_conserve_totals(k in 0..GRIDS.len()) {
        let run = run_case(&wave(GRIDS[k]), 0.1).unwrap();
        let s = &run.summary;
        for (a, b) in s.totals_initial.iter().zip(&s.totals_final) {
            prop_assert!((a - b).abs() <= 1e-12 * s.totals_initial[0]);
        }
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let a = run_case(&lid("2x2", 4), 0.08).unwrap();
    let b = run_case(&lid("2x2", 4), 0.08).unwrap();
    assert_eq!(a.frames, b.frames);
    assert_eq!(a.summary.totals_final, b.summary.totals_final);
}
