//! Files consumed by the plotting scripts and the shipped configuration files.

use std::path::PathBuf;

use micromacro::mms::{format_table, parse_table, ConvergenceRow};
use micromacro::runner::frame::{frame_to_string, parse_frame};
use micromacro::runner::scaling::{ScaleMode, TimingRecord};
use micromacro::runner::{
    load_config, read_frame, reference, run_case, write_frame, CaseName, Frame, MicroSlice,
};
use proptest::prelude::*;

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn shipped_configs_match_references() {
    let mut seen = 0;
    for case in CaseName::ALL.into_iter().filter(|c| *c != CaseName::Custom) {
        let path = configs_dir().join(format!("{}.cfg", case.name()));
        let cfg = load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut want = reference(case).unwrap();
        assert_eq!(
            cfg.output_dir,
            PathBuf::from(format!("output/{}", case.name()))
        );
        want.output_dir = cfg.output_dir.clone();
        assert_eq!(cfg, want, "{}", case.name());
        seen += 1;
    }
    assert_eq!(seen, 6);
}

#[test]
fn solver_frames_survive_disk() {
    let mut cfg = reference(CaseName::Shocktube).unwrap();
    cfg.nx = 20;
    cfg.nv1 = 12;
    cfg.max_steps = Some(5);
    cfg.output_times = vec![cfg.t_final];
    cfg.micro_cells = vec![(3, 1), (10, 1)];
    let run = run_case(&cfg, 0.01).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for f in &run.frames {
        let path = write_frame(f, dir.path()).unwrap();
        assert_eq!(&read_frame(&path).unwrap(), f);
    }
    assert_eq!(run.last().micro.len(), 2);
}

#[test]
fn truncated_frame_is_format_error() {
    let f = Frame {
        dim: 1,
        nx: 3,
        ny: 1,
        nv1: 2,
        nv2: 1,
        time: 0.5,
        step: 4,
        eps: 0.1,
        fields: ["rho", "mom", "ener", "heat"].map(String::from).to_vec(),
        values: (0..12).map(f64::from).collect(),
        micro: vec![],
    };
    let text = frame_to_string(&f);
    let cut: String = text
        .lines()
        .take(text.lines().count() - 2)
        .map(|l| format!("{l}\n"))
        .collect();
    let err = parse_frame(&cut, std::path::Path::new("x.dat")).unwrap_err();
    assert_eq!(err.category(), "format");
}

#[test]
fn table_rejects_wrong_header() {
    assert!(parse_table("N,err\n20,1e-2\n").is_err());
    assert!(
        parse_table("N,macro_error,macro_ratio,micro_error,micro_ratio\n20,1e-2,nan\n").is_err()
    );
}

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1e-8..1e-8f64, Just(0.0)]
}

prop_compose! {
    fn frame2d()(nx in 1usize..5, ny in 1usize..5, nv in 1usize..4, step in 0usize..100_000)
        (values in prop::collection::vec(value(), nx * ny * 10),
         micro in prop::collection::vec(value(), nv * nv),
         cell in (1..=nx, 1..=ny),
         time in 0.0..10.0f64, eps in 1e-6..1e3f64,
         nx in Just(nx), ny in Just(ny), nv in Just(nv), step in Just(step)) -> Frame {
        Frame {
            dim: 2, nx, ny, nv1: nv, nv2: nv, time, step, eps,
            fields: ["rho", "m1", "m2", "e11", "e12", "e22", "h111", "h112", "h122", "h222"].map(String::from).to_vec(),
            values,
            micro: vec![MicroSlice { cell, values: micro }],
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frame_text_round_trips(f in frame2d()) {
        let back = parse_frame(&frame_to_string(&f), std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn table_round_trips(errs in prop::collection::vec((1e-6..1.0f64, 1e-6..1.0f64), 1..6)) {
        let rows: Vec<ConvergenceRow> = errs.iter().enumerate().map(|(k, &(a, b))| ConvergenceRow {
            n: 20 << k,
            macro_error: a,
            macro_ratio: (k > 0).then(|| (errs[k - 1].0 / a).log2()),
            micro_error: b,
            micro_ratio: (k > 0).then(|| (errs[k - 1].1 / b).log2()),
        }).collect();
        let back = parse_table(&format_table(&rows)).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (x, y) in back.iter().zip(&rows) {
            prop_assert_eq!(x.n, y.n);
            prop_assert!((x.macro_error - y.macro_error).abs() <= 1e-6 * y.macro_error);
            prop_assert!((x.micro_error - y.micro_error).abs() <= 1e-6 * y.micro_error);
            prop_assert_eq!(x.macro_ratio.is_some(), y.macro_ratio.is_some());
            if let (Some(a), Some(b)) = (x.macro_ratio, y.macro_ratio) {
                prop_assert!((a - b).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn timing_record_round_trips(weak in any::<bool>(), p in 1usize..256, steps in 1usize..10_000,
                                 s in 1u32..1000, i in 1u32..1000, e in 1u32..256) {
        // dyadic values print exactly at the record's precision
        let r = TimingRecord {
            mode: if weak { ScaleMode::Weak } else { ScaleMode::Strong },
            workers: p,
            grid: micromacro::runner::scaling::factor_workers(p),
            nx: 36, ny: 36, nv1: 14, nv2: 14, steps,
            seconds: f64::from(s) / 8.0,
            ideal_seconds: f64::from(i) / 8.0,
            efficiency: f64::from(e) / 64.0,
        };
        prop_assert_eq!(r.to_string().parse::<TimingRecord>().unwrap(), r);
    }
}
