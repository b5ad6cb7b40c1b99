//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, lists are comma separated. Unknown and
//! repeated keys are rejected. A config file is complete on its own: the case name selects
//! the initial condition and diagnostics, everything else is spelled out.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::boundary::{Bc1D, Bc2D, BcKind, Face, WallSpec};
use crate::error::{Error, Result};
use crate::gas_state::{CollisionModel, TauKind};
use crate::mesh::{Axis, Dim, PhaseMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseName {
    Mms1d,
    Shocktube,
    HeatTransfer,
    KnudsenSweep,
    Mms2d,
    LidCavity,
    Custom,
}

impl CaseName {
    pub const ALL: [CaseName; 7] = [
        CaseName::Mms1d,
        CaseName::Shocktube,
        CaseName::HeatTransfer,
        CaseName::KnudsenSweep,
        CaseName::Mms2d,
        CaseName::LidCavity,
        CaseName::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseName::Mms1d => "mms1d",
            CaseName::Shocktube => "shocktube",
            CaseName::HeatTransfer => "heat_transfer",
            CaseName::KnudsenSweep => "knudsen_sweep",
            CaseName::Mms2d => "mms2d",
            CaseName::LidCavity => "lid_cavity",
            CaseName::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Fixed dimension of a named case; `None` for custom.
    pub fn dim(self) -> Option<Dim> {
        match self {
            CaseName::Mms1d
            | CaseName::Shocktube
            | CaseName::HeatTransfer
            | CaseName::KnudsenSweep => Some(Dim::D1V1),
            CaseName::Mms2d | CaseName::LidCavity => Some(Dim::D2V2),
            CaseName::Custom => None,
        }
    }

    pub fn is_mms(self) -> bool {
        matches!(self, CaseName::Mms1d | CaseName::Mms2d)
    }
}

/// Primitive state (ρ, u₁, u₂, T); u₂ is ignored in 1D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    pub t: f64,
}

impl PrimState {
    pub const REST: PrimState = PrimState {
        rho: 1.0,
        u1: 0.0,
        u2: 0.0,
        t: 1.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init {
    /// Exact manufactured solution at t = 0.
    Mms,
    Uniform(PrimState),
    /// Two states split by a plane x = `split`.
    Riemann {
        left: PrimState,
        right: PrimState,
        split: f64,
    },
    /// Smooth periodic state with net momentum and, in 2D, an anisotropic pressure.
    Wave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub case: CaseName,
    pub dim: Dim,
    pub x: (f64, f64),
    pub nx: usize,
    pub y: (f64, f64),
    pub ny: usize,
    pub v1: (f64, f64),
    pub nv1: usize,
    pub v2: (f64, f64),
    pub nv2: usize,
    pub eps: Vec<f64>,
    pub nu: f64,
    pub tau: TauKind,
    pub cfl: f64,
    pub t_final: f64,
    pub max_steps: Option<usize>,
    /// Left, right, bottom, top. 1D uses the first two.
    pub bc: [BcKind; 4],
    pub init: Init,
    pub output_times: Vec<f64>,
    pub output_dir: PathBuf,
    /// (blocks along y, blocks along x).
    pub workers: (usize, usize),
    /// 1-based cells whose micro values are stored in frames; j = 1 in 1D.
    pub micro_cells: Vec<(usize, usize)>,
}

impl CaseConfig {
    pub fn mesh(&self) -> Result<PhaseMesh> {
        let x = Axis::new(self.x.0, self.x.1, self.nx).map_err(|e| rename(e, "x"))?;
        let v1 = Axis::new(self.v1.0, self.v1.1, self.nv1).map_err(|e| rename(e, "v1"))?;
        Ok(match self.dim {
            Dim::D1V1 => PhaseMesh::one_d(x, v1),
            Dim::D2V2 => {
                let y = Axis::new(self.y.0, self.y.1, self.ny).map_err(|e| rename(e, "y"))?;
                let v2 = Axis::new(self.v2.0, self.v2.1, self.nv2).map_err(|e| rename(e, "v2"))?;
                PhaseMesh::two_d(x, y, v1, v2)
            }
        })
    }

    pub fn model(&self) -> Result<CollisionModel> {
        CollisionModel::new(self.tau, self.nu)
    }

    pub fn bc1d(&self) -> Result<Bc1D> {
        Bc1D::new(self.bc[0], self.bc[1])
    }

    pub fn bc2d(&self) -> Result<Bc2D> {
        Bc2D::new(self.bc[0], self.bc[1], self.bc[2], self.bc[3])
    }

    /// Copy with a single ε.
    pub fn with_eps(&self, eps: f64) -> Self {
        CaseConfig {
            eps: vec![eps],
            ..self.clone()
        }
    }

    pub fn n_workers(&self) -> usize {
        self.workers.0 * self.workers.1
    }

    /// Cross-field checks shared by the parser and programmatic callers.
    pub fn validate(&self) -> Result<()> {
        self.mesh()?;
        self.model()?;
        match self.dim {
            Dim::D1V1 => {
                self.bc1d()?;
            }
            Dim::D2V2 => {
                self.bc2d()?;
            }
        }
        if self.eps.is_empty() {
            return Err(Error::config("eps", "at least one value is required"));
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(Error::config(
                "eps",
                format!("must be positive and finite, got {e}"),
            ));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::config(
                "cfl",
                format!("must lie in (0,1), got {}", self.cfl),
            ));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::config(
                "t_final",
                format!("must be positive, got {}", self.t_final),
            ));
        }
        if let Some(t) = self
            .output_times
            .iter()
            .find(|t| !(**t >= 0.0 && **t <= self.t_final * (1.0 + 1e-12)))
        {
            return Err(Error::config(
                "output_times",
                format!("{t} lies outside [0, t_final]"),
            ));
        }
        let (r, c) = self.workers;
        if r == 0 || c == 0 {
            return Err(Error::config(
                "workers",
                "worker grid dimensions must be positive",
            ));
        }
        match self.dim {
            Dim::D1V1 if (r, c) != (1, 1) => {
                return Err(Error::config("workers", "1D runs use a single worker"));
            }
            Dim::D2V2 if self.nx % c != 0 || self.ny % r != 0 => {
                return Err(Error::config(
                    "workers",
                    format!("{r}x{c} does not divide the {}x{} grid", self.nx, self.ny),
                ));
            }
            _ => {}
        }
        let ny = if self.dim == Dim::D1V1 { 1 } else { self.ny };
        if let Some(&(i, j)) = self
            .micro_cells
            .iter()
            .find(|&&(i, j)| i == 0 || i > self.nx || j == 0 || j > ny)
        {
            return Err(Error::config(
                "micro_cells",
                format!("cell ({i}, {j}) is outside the grid"),
            ));
        }
        if self.case.is_mms()
            && self
                .bc
                .iter()
                .take(self.n_faces())
                .any(|b| *b != BcKind::Periodic)
        {
            return Err(Error::config(
                "bc",
                "manufactured-solution cases need periodic boundaries",
            ));
        }
        if self.init == Init::Mms && !self.case.is_mms() {
            return Err(Error::config("init", "mms initial data needs an mms case"));
        }
        Ok(())
    }

    fn n_faces(&self) -> usize {
        match self.dim {
            Dim::D1V1 => 2,
            Dim::D2V2 => 4,
        }
    }
}

fn rename(e: Error, field: &str) -> Error {
    match e {
        Error::Config { msg, .. } => Error::config(field, msg),
        other => other,
    }
}

const KEYS: &[&str] = &[
    "case",
    "dim",
    "x",
    "nx",
    "y",
    "ny",
    "v1",
    "nv1",
    "v2",
    "nv2",
    "eps",
    "nu",
    "tau_model",
    "tau_value",
    "cfl",
    "t_final",
    "max_steps",
    "bc_left",
    "bc_right",
    "bc_bottom",
    "bc_top",
    "t_wall_left",
    "t_wall_right",
    "t_wall_bottom",
    "t_wall_top",
    "u_wall_left",
    "u_wall_right",
    "u_wall_bottom",
    "u_wall_top",
    "init",
    "init_left",
    "init_right",
    "init_split",
    "output_times",
    "output_dir",
    "workers",
    "micro_cells",
];

const KEYS_2D_ONLY: &[&str] = &[
    "y",
    "ny",
    "v2",
    "nv2",
    "bc_bottom",
    "bc_top",
    "t_wall_bottom",
    "t_wall_top",
    "u_wall_bottom",
    "u_wall_top",
];

struct Entries {
    map: HashMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.raw(key)
            .ok_or_else(|| Error::config(key, "missing required key"))
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key).map(|(l, v)| num(l, key, v)).transpose()
    }

    fn f64_req(&self, key: &str) -> Result<f64> {
        let (l, v) = self.required(key)?;
        num(l, key, v)
    }

    fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        self.raw(key)
            .map(|(l, v)| {
                v.parse::<usize>().map_err(|_| {
                    parse_err(
                        l,
                        format!("`{key}` expects a non-negative integer, got `{v}`"),
                    )
                })
            })
            .transpose()
    }

    fn usize_req(&self, key: &str) -> Result<usize> {
        self.usize_opt(key)?
            .ok_or_else(|| Error::config(key, "missing required key"))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|(l, v)| v.split(',').map(|s| num(l, key, s.trim())).collect())
            .transpose()
    }

    fn pair(&self, key: &str) -> Result<(f64, f64)> {
        let (l, _) = self.required(key)?;
        match self.list(key)?.as_deref() {
            Some([a, b]) => Ok((*a, *b)),
            _ => Err(parse_err(
                l,
                format!("`{key}` expects two comma-separated numbers"),
            )),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn num(line: usize, key: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| parse_err(line, format!("`{key}` expects a number, got `{s}`")))
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, got `{body}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(parse_err(line, format!("unknown key `{k}`")));
        }
        if v.is_empty() {
            return Err(parse_err(line, format!("`{k}` has no value")));
        }
        if let Some((first, _)) = map.insert(k.to_string(), (line, v.to_string())) {
            return Err(parse_err(
                line,
                format!("duplicate key `{k}` (first set on line {first})"),
            ));
        }
    }
    Ok(Entries { map })
}

fn parse_workers(line: usize, v: &str) -> Result<(usize, usize)> {
    let bad = || parse_err(line, format!("`workers` expects RxC, got `{v}`"));
    let (r, c) = v.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        r.trim().parse().map_err(|_| bad())?,
        c.trim().parse().map_err(|_| bad())?,
    ))
}

/// Parse a worker grid written as `RxC`.
pub fn parse_worker_grid(v: &str) -> Result<(usize, usize)> {
    parse_workers(0, v).map_err(|_| Error::config("workers", format!("expected RxC, got `{v}`")))
}

fn parse_bc(e: &Entries, face: &str) -> Result<BcKind> {
    let key = format!("bc_{face}");
    let (line, v) = e.required(&key)?;
    match v {
        "periodic" => Ok(BcKind::Periodic),
        "extrapolate" => Ok(BcKind::Extrapolate),
        "wall" => {
            let t = e.f64_opt(&format!("t_wall_{face}"))?.ok_or_else(|| {
                Error::config(format!("t_wall_{face}"), "wall face needs a temperature")
            })?;
            let u = e.f64_opt(&format!("u_wall_{face}"))?.unwrap_or(0.0);
            WallSpec::new(t, u)
                .map(BcKind::Wall)
                .map_err(|err| rename(err, &format!("t_wall_{face}")))
        }
        other => Err(parse_err(line, format!("unknown boundary kind `{other}`"))),
    }
}

fn parse_state(e: &Entries, key: &str, dim: Dim) -> Result<PrimState> {
    let (line, _) = e.required(key)?;
    let v = e.list(key)?.unwrap_or_default();
    let s = match (dim, v.as_slice()) {
        (Dim::D1V1, [rho, u, t]) => PrimState {
            rho: *rho,
            u1: *u,
            u2: 0.0,
            t: *t,
        },
        (Dim::D2V2, [rho, u1, u2, t]) => PrimState {
            rho: *rho,
            u1: *u1,
            u2: *u2,
            t: *t,
        },
        (Dim::D1V1, _) => return Err(parse_err(line, format!("`{key}` expects rho, u, T"))),
        (Dim::D2V2, _) => return Err(parse_err(line, format!("`{key}` expects rho, u1, u2, T"))),
    };
    if !(s.rho > 0.0 && s.t > 0.0) {
        return Err(Error::config(
            key,
            "density and temperature must be positive",
        ));
    }
    Ok(s)
}

fn fixed_init(case: CaseName) -> Option<Init> {
    match case {
        CaseName::Mms1d | CaseName::Mms2d => Some(Init::Mms),
        CaseName::Shocktube => Some(Init::Riemann {
            left: PrimState::REST,
            right: PrimState {
                rho: 0.125,
                u1: 0.0,
                u2: 0.0,
                t: 0.8,
            },
            split: 0.5,
        }),
        CaseName::HeatTransfer | CaseName::KnudsenSweep | CaseName::LidCavity => {
            Some(Init::Uniform(PrimState::REST))
        }
        CaseName::Custom => None,
    }
}

fn parse_init(e: &Entries, case: CaseName, dim: Dim) -> Result<Init> {
    if let Some(init) = fixed_init(case) {
        for k in ["init", "init_left", "init_right", "init_split"] {
            if e.raw(k).is_some() {
                return Err(Error::config(
                    k,
                    format!("the {} case fixes its initial condition", case.name()),
                ));
            }
        }
        return Ok(init);
    }
    let (line, kind) = e.required("init")?;
    match kind {
        "uniform" => Ok(Init::Uniform(parse_state(e, "init_left", dim)?)),
        "riemann" => Ok(Init::Riemann {
            left: parse_state(e, "init_left", dim)?,
            right: parse_state(e, "init_right", dim)?,
            split: e.f64_req("init_split")?,
        }),
        "wave" => Ok(Init::Wave),
        other => Err(parse_err(
            line,
            format!("unknown initial condition `{other}`"),
        )),
    }
}

fn parse_cells(line: usize, v: &str, dim: Dim) -> Result<Vec<(usize, usize)>> {
    v.split(',')
        .map(|s| {
            let s = s.trim();
            let bad = || parse_err(line, format!("bad micro cell `{s}`"));
            match dim {
                Dim::D1V1 => Ok((s.parse().map_err(|_| bad())?, 1)),
                Dim::D2V2 => {
                    let (i, j) = s.split_once(':').ok_or_else(bad)?;
                    Ok((
                        i.trim().parse().map_err(|_| bad())?,
                        j.trim().parse().map_err(|_| bad())?,
                    ))
                }
            }
        })
        .collect()
}

pub fn parse_config(text: &str) -> Result<CaseConfig> {
    let e = tokenize(text)?;
    let (cl, cv) = e.required("case")?;
    let case = CaseName::parse(cv).ok_or_else(|| parse_err(cl, format!("unknown case `{cv}`")))?;
    let dim = match (case.dim(), e.raw("dim")) {
        (Some(d), None) => d,
        (fixed, Some((l, v))) => {
            let d = match v {
                "1" => Dim::D1V1,
                "2" => Dim::D2V2,
                _ => return Err(parse_err(l, format!("`dim` must be 1 or 2, got `{v}`"))),
            };
            if fixed.is_some_and(|f| f != d) {
                return Err(Error::config(
                    "dim",
                    format!("the {} case has a fixed dimension", case.name()),
                ));
            }
            d
        }
        (None, None) => return Err(Error::config("dim", "custom cases must set dim")),
    };
    if dim == Dim::D1V1 {
        if let Some(k) = KEYS_2D_ONLY.iter().find(|k| e.raw(k).is_some()) {
            return Err(Error::config(*k, "not used by 1D cases"));
        }
    }
    let tau_name = e.required("tau_model")?.1.to_string();
    let tau = TauKind::parse(&tau_name, e.f64_opt("tau_value")?)?;
    let two = dim == Dim::D2V2;
    let bc = if two {
        [
            parse_bc(&e, "left")?,
            parse_bc(&e, "right")?,
            parse_bc(&e, "bottom")?,
            parse_bc(&e, "top")?,
        ]
    } else {
        [
            parse_bc(&e, "left")?,
            parse_bc(&e, "right")?,
            BcKind::Periodic,
            BcKind::Periodic,
        ]
    };
    let t_final = e.f64_req("t_final")?;
    let cfg = CaseConfig {
        case,
        dim,
        x: e.pair("x")?,
        nx: e.usize_req("nx")?,
        y: if two { e.pair("y")? } else { (0.0, 1.0) },
        ny: if two { e.usize_req("ny")? } else { 1 },
        v1: e.pair("v1")?,
        nv1: e.usize_req("nv1")?,
        v2: if two { e.pair("v2")? } else { (0.0, 1.0) },
        nv2: if two { e.usize_req("nv2")? } else { 1 },
        eps: e
            .list("eps")?
            .ok_or_else(|| Error::config("eps", "missing required key"))?,
        nu: e.f64_opt("nu")?.unwrap_or(0.0),
        tau,
        cfl: e.f64_req("cfl")?,
        t_final,
        max_steps: e.usize_opt("max_steps")?,
        bc,
        init: parse_init(&e, case, dim)?,
        output_times: e.list("output_times")?.unwrap_or_else(|| vec![t_final]),
        output_dir: e
            .raw("output_dir")
            .map_or_else(|| PathBuf::from("output"), |(_, v)| PathBuf::from(v)),
        workers: e
            .raw("workers")
            .map(|(l, v)| parse_workers(l, v))
            .transpose()?
            .unwrap_or((1, 1)),
        micro_cells: e
            .raw("micro_cells")
            .map(|(l, v)| parse_cells(l, v, dim))
            .transpose()?
            .unwrap_or_default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<CaseConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    parse_config(&text)
}

pub const MMS1D: &str = "\
case = mms1d
x = 0, 1
nx = 40
v1 = -6.5, 6.5
nv1 = 40
eps = 0.1
tau_model = hard_sphere_1d
cfl = 0.95
t_final = 0.9351
bc_left = periodic
bc_right = periodic
";

pub const SHOCKTUBE: &str = "\
case = shocktube
x = -0.25, 1.25
nx = 768
v1 = -4.5, 4.5
nv1 = 128
eps = 0.1, 0.01, 0.001
tau_model = hard_sphere_1d
cfl = 0.991
t_final = 0.16
bc_left = extrapolate
bc_right = extrapolate
";

pub const HEAT_TRANSFER: &str = "\
case = heat_transfer
x = 0, 1
nx = 129
v1 = -6, 6
nv1 = 129
eps = 0.01
tau_model = pressure_1d
cfl = 0.95
t_final = 100
bc_left = wall
t_wall_left = 1
bc_right = wall
t_wall_right = 1.2
micro_cells = 65
";

pub const KNUDSEN_SWEEP: &str = "\
case = knudsen_sweep
x = 0, 1
nx = 129
v1 = -6, 6
nv1 = 129
eps = 0.01, 0.1, 1, 10, 100, 1e30
tau_model = pressure_1d
cfl = 0.95
t_final = 100
bc_left = wall
t_wall_left = 1
bc_right = wall
t_wall_right = 1.2
micro_cells = 65
";

pub const MMS2D: &str = "\
case = mms2d
x = 0, 1
nx = 20
y = 0, 1
ny = 20
v1 = -5, 5
nv1 = 20
v2 = -5, 5
nv2 = 20
eps = 0.08
nu = 0
tau_model = esbgk_2d_mms
cfl = 0.926
t_final = 0.25
bc_left = periodic
bc_right = periodic
bc_bottom = periodic
bc_top = periodic
";

pub const LID_CAVITY: &str = "\
case = lid_cavity
x = 0, 1
nx = 120
y = 0, 1
ny = 120
v1 = -5, 5
nv1 = 14
v2 = -5, 5
nv2 = 14
eps = 0.08
nu = -1
tau_model = esbgk_2d
cfl = 0.95
t_final = 3
bc_left = wall
t_wall_left = 1
bc_right = wall
t_wall_right = 1
bc_bottom = wall
t_wall_bottom = 1
bc_top = wall
t_wall_top = 1
u_wall_top = 0.16
output_times = 2.7, 3
";

/// Reference configuration text for a named case.
pub fn reference_text(case: CaseName) -> Option<&'static str> {
    match case {
        CaseName::Mms1d => Some(MMS1D),
        CaseName::Shocktube => Some(SHOCKTUBE),
        CaseName::HeatTransfer => Some(HEAT_TRANSFER),
        CaseName::KnudsenSweep => Some(KNUDSEN_SWEEP),
        CaseName::Mms2d => Some(MMS2D),
        CaseName::LidCavity => Some(LID_CAVITY),
        CaseName::Custom => None,
    }
}

pub fn reference(case: CaseName) -> Result<CaseConfig> {
    let text = reference_text(case)
        .ok_or_else(|| Error::config("case", "custom cases have no reference config"))?;
    parse_config(text)
}

/// Wall spec of a face, if it is a wall.
pub fn wall_of(cfg: &CaseConfig, face: Face) -> Option<WallSpec> {
    match cfg.bc[face.index()] {
        BcKind::Wall(w) => Some(w),
        _ => None,
    }
}
