//! Text frame files: a short header followed by one record per spatial cell, x fastest.
//!
//! ```text
//! # micromacro-frame v1
//! dim 2
//! nx 120
//! ny 120
//! nv1 14
//! nv2 14
//! time 3.0000000000000000e0
//! step 1896
//! eps 8.0000000000000002e-2
//! fields rho m1 m2 e11 e12 e22 h111 h112 h122 h222
//! data
//! <nx·ny lines of space separated values>
//! micro <i> <j>
//! <nv1·nv2 values on one line, v1 major>
//! end
//! ```
//!
//! Values are written with 17 significant digits so reading returns the exact doubles.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const MAGIC: &str = "# micromacro-frame v1";
pub const FIELDS_1D: [&str; 4] = ["rho", "mom", "ener", "heat"];
pub const FIELDS_2D: [&str; 10] = [
    "rho", "m1", "m2", "e11", "e12", "e22", "h111", "h112", "h122", "h222",
];

/// Micro values G at one cell, 1-based indices (j = 1 in 1D).
#[derive(Debug, Clone, PartialEq)]
pub struct MicroSlice {
    pub cell: (usize, usize),
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub dim: usize,
    pub nx: usize,
    pub ny: usize,
    pub nv1: usize,
    pub nv2: usize,
    pub time: f64,
    pub step: usize,
    pub eps: f64,
    pub fields: Vec<String>,
    /// Cell-major records: `values[c·n_fields + f]` with c = (j−1)·nx + (i−1).
    pub values: Vec<f64>,
    pub micro: Vec<MicroSlice>,
}

impl Frame {
    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn n_fields(&self) -> usize {
        self.fields.len()
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f == name)
    }

    /// One field over all cells, x fastest.
    pub fn field(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.field_index(name)?;
        Some(self.values.chunks(self.n_fields()).map(|r| r[k]).collect())
    }

    /// Record of cell (i, j), 1-based.
    pub fn record(&self, i: usize, j: usize) -> &[f64] {
        let n = self.n_fields();
        let c = (j - 1) * self.nx + (i - 1);
        &self.values[c * n..(c + 1) * n]
    }

    pub fn micro_at(&self, i: usize, j: usize) -> Option<&MicroSlice> {
        self.micro.iter().find(|m| m.cell == (i, j))
    }

    fn check_shape(&self, path: &Path) -> Result<()> {
        let fmt = |msg: String| Error::Format {
            path: path.to_path_buf(),
            msg,
        };
        if self.values.len() != self.n_cells() * self.n_fields() {
            return Err(fmt(format!(
                "{} values for {} cells of {} fields",
                self.values.len(),
                self.n_cells(),
                self.n_fields()
            )));
        }
        let nv = self.nv1 * self.nv2;
        if let Some(m) = self.micro.iter().find(|m| m.values.len() != nv) {
            return Err(fmt(format!(
                "micro slice at {:?} has {} values, expected {nv}",
                m.cell,
                m.values.len()
            )));
        }
        Ok(())
    }
}

pub fn frame_file_name(step: usize) -> String {
    format!("frame_{step:07}.dat")
}

pub fn frame_to_string(frame: &Frame) -> String {
    let mut s = String::with_capacity(frame.values.len() * 24 + 256);
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "dim {}", frame.dim);
    let _ = writeln!(
        s,
        "nx {}\nny {}\nnv1 {}\nnv2 {}",
        frame.nx, frame.ny, frame.nv1, frame.nv2
    );
    let _ = writeln!(
        s,
        "time {:.16e}\nstep {}\neps {:.16e}",
        frame.time, frame.step, frame.eps
    );
    let _ = writeln!(s, "fields {}", frame.fields.join(" "));
    s.push_str("data\n");
    let push_row = |s: &mut String, row: &[f64]| {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    };
    for row in frame.values.chunks(frame.n_fields().max(1)) {
        push_row(&mut s, row);
    }
    for m in &frame.micro {
        let _ = writeln!(s, "micro {} {}", m.cell.0, m.cell.1);
        push_row(&mut s, &m.values);
    }
    s.push_str("end\n");
    s
}

pub fn write_frame(frame: &Frame, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(frame_file_name(frame.step));
    frame.check_shape(&path)?;
    let io = |e: std::io::Error| Error::Io {
        path: path.clone(),
        msg: e.to_string(),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        msg: e.to_string(),
    })?;
    std::fs::write(&path, frame_to_string(frame)).map_err(io)?;
    Ok(path)
}

pub fn read_frame(path: &Path) -> Result<Frame> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    parse_frame(&text, path)
}

pub fn parse_frame(text: &str, path: &Path) -> Result<Frame> {
    let fmt = |n: usize, msg: String| Error::Format {
        path: path.to_path_buf(),
        msg: format!("line {n}: {msg}"),
    };
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| fmt(0, format!("unexpected end of file, expected {what}")))
    };

    let (n, l) = next("magic")?;
    if l != MAGIC {
        return Err(fmt(n, format!("bad magic `{l}`")));
    }
    let mut header = |key: &str| -> Result<(usize, String)> {
        let (n, l) = next(key)?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok((n, v.trim().to_string())),
            _ => Err(fmt(n, format!("expected `{key}`, got `{l}`"))),
        }
    };
    let mut int = |key: &str| -> Result<usize> {
        let (n, v) = header(key)?;
        v.parse()
            .map_err(|_| fmt(n, format!("`{key}` is not an integer")))
    };
    let dim = int("dim")?;
    let nx = int("nx")?;
    let ny = int("ny")?;
    let nv1 = int("nv1")?;
    let nv2 = int("nv2")?;
    let float = |(n, v): (usize, String)| -> Result<f64> {
        v.parse().map_err(|_| fmt(n, format!("bad number `{v}`")))
    };
    let time = float(header("time")?)?;
    let (sn, sv) = header("step")?;
    let step = sv
        .parse()
        .map_err(|_| fmt(sn, "`step` is not an integer".into()))?;
    let eps = float(header("eps")?)?;
    let (_, fv) = header("fields")?;
    let fields: Vec<String> = fv.split_whitespace().map(str::to_string).collect();

    let expected: &[&str] = match dim {
        1 => &FIELDS_1D,
        2 => &FIELDS_2D,
        _ => return Err(fmt(2, format!("dim must be 1 or 2, got {dim}"))),
    };
    if fields != expected {
        return Err(fmt(
            0,
            format!("fields `{}` do not match dim {dim}", fields.join(" ")),
        ));
    }
    if dim == 1 && (ny != 1 || nv2 != 1) {
        return Err(fmt(0, format!("1D frame declares ny = {ny}, nv2 = {nv2}")));
    }

    let (n, l) = next("data")?;
    if l != "data" {
        return Err(fmt(n, format!("expected `data`, got `{l}`")));
    }
    let parse_row = |n: usize, l: &str, len: usize| -> Result<Vec<f64>> {
        let row: Vec<f64> = l
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| fmt(n, format!("bad number `{t}`")))
            })
            .collect::<Result<_>>()?;
        if row.len() != len {
            return Err(fmt(n, format!("{} values, expected {len}", row.len())));
        }
        Ok(row)
    };
    let nf = fields.len();
    let mut values = Vec::with_capacity(nx * ny * nf);
    for _ in 0..nx * ny {
        let (n, l) = next("cell record")?;
        values.extend(parse_row(n, l, nf)?);
    }
    let mut micro = Vec::new();
    loop {
        let (n, l) = next("`micro` or `end`")?;
        if l == "end" {
            break;
        }
        let mut it = l.split_whitespace();
        let cell = match (it.next(), it.next(), it.next(), it.next()) {
            (Some("micro"), Some(i), Some(j), None) => match (i.parse(), j.parse()) {
                (Ok(i), Ok(j)) if (1..=nx).contains(&i) && (1..=ny).contains(&j) => (i, j),
                _ => return Err(fmt(n, format!("bad micro cell `{l}`"))),
            },
            _ => return Err(fmt(n, format!("expected `micro i j` or `end`, got `{l}`"))),
        };
        let (n, l) = next("micro values")?;
        micro.push(MicroSlice {
            cell,
            values: parse_row(n, l, nv1 * nv2)?,
        });
    }
    if let Some((n, l)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(fmt(n, format!("trailing content `{l}`")));
    }
    Ok(Frame {
        dim,
        nx,
        ny,
        nv1,
        nv2,
        time,
        step,
        eps,
        fields,
        values,
        micro,
    })
}
