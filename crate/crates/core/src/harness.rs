//! Experiment drivers behind the command line: configuration, draw
//! schedule, sweeps, CSV output and the run manifest.
//!
//! Draw schedule: every experiment opens a fresh stream over the byte file
//! at offset 0. The 1D coefficient consumes two draws per interval, the
//! random-sines coefficient two draws per mode.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fem2d::{self, NodalField, Tensor2};
use crate::homog1d::{self, EffectiveField1D, ExtensionKind, ExtensionSpec1D};
use crate::metrics::{self, Curve, CurveRecord, Norm};
use crate::problem::{AnalyticCoeff2D, Case1d, Coefficient2d, PiecewiseConstantCoeff1D, RandomSines, Rhs1D};
use crate::rng::ByteStreamRng;
use crate::upscale2d::{self, UpscaleConfig};

/// 1D coefficient choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff1dSpec {
    A1,
    A2,
    A3,
    Constant(f64),
}

impl Coeff1dSpec {
    pub fn build(self, rng: &mut ByteStreamRng) -> Result<PiecewiseConstantCoeff1D> {
        match self {
            Coeff1dSpec::A1 => PiecewiseConstantCoeff1D::build(Case1d::A1, rng),
            Coeff1dSpec::A2 => PiecewiseConstantCoeff1D::build(Case1d::A2, rng),
            Coeff1dSpec::A3 => PiecewiseConstantCoeff1D::build(Case1d::A3, rng),
            Coeff1dSpec::Constant(c) => PiecewiseConstantCoeff1D::constant(c),
        }
    }
}

fn default_contrast() -> f64 {
    1e4
}

/// 2D coefficient choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coeff2dSpec {
    Mingyue,
    RandomSines {
        n_sin: usize,
        #[serde(default = "default_contrast")]
        contrast: f64,
    },
    Constant(f64),
}

impl Coeff2dSpec {
    pub fn build(self, rng: &mut ByteStreamRng) -> Result<AnalyticCoeff2D> {
        Ok(match self {
            Coeff2dSpec::Mingyue => AnalyticCoeff2D::MingYue,
            Coeff2dSpec::RandomSines { n_sin, contrast } => {
                rng.require_draws(2 * n_sin)?;
                AnalyticCoeff2D::RandomSines(RandomSines::from_rng(n_sin, contrast, rng)?)
            }
            Coeff2dSpec::Constant(c) => AnalyticCoeff2D::Constant(c),
        })
    }

    pub fn label(self) -> String {
        match self {
            Coeff2dSpec::Mingyue => "mingyue".into(),
            Coeff2dSpec::RandomSines { n_sin, .. } => format!("sines{n_sin}"),
            Coeff2dSpec::Constant(c) => format!("const{c}"),
        }
    }
}

/// Parses `a1|a2|a3|mingyue|sines:<n>[:<contrast>]|const1d:<c>|const2d:<c>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnyCoeffSpec {
    OneD(Coeff1dSpec),
    TwoD(Coeff2dSpec),
}

impl std::str::FromStr for AnyCoeffSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown coefficient {s:?}"));
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        Ok(match parts.as_slice() {
            ["a1"] => Self::OneD(Coeff1dSpec::A1),
            ["a2"] => Self::OneD(Coeff1dSpec::A2),
            ["a3"] => Self::OneD(Coeff1dSpec::A3),
            ["const1d", c] => Self::OneD(Coeff1dSpec::Constant(num(c)?)),
            ["mingyue"] => Self::TwoD(Coeff2dSpec::Mingyue),
            ["const2d", c] => Self::TwoD(Coeff2dSpec::Constant(num(c)?)),
            ["sines", n] => Self::TwoD(Coeff2dSpec::RandomSines { n_sin: n.parse().map_err(|_| bad())?, contrast: 1e4 }),
            ["sines", n, c] => Self::TwoD(Coeff2dSpec::RandomSines { n_sin: n.parse().map_err(|_| bad())?, contrast: num(c)? }),
            _ => return Err(bad()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Run1dConfig {
    pub coefficient: Coeff1dSpec,
    pub rhs: Rhs1D,
    pub extensions: Vec<ExtensionKind>,
    pub epsbar: Vec<f64>,
    pub n_sol: usize,
    pub ul: f64,
    pub ur: f64,
}

impl Default for Run1dConfig {
    fn default() -> Self {
        Self {
            coefficient: Coeff1dSpec::A2,
            rhs: Rhs1D::F1,
            extensions: vec![
                ExtensionKind::Discrete(1),
                ExtensionKind::Discrete(2),
                ExtensionKind::Discrete(4),
                ExtensionKind::Discrete(8),
                ExtensionKind::Continuous,
            ],
            epsbar: vec![0.016, 0.008, 0.004, 0.002],
            n_sol: 1_000_000,
            ul: 0.0,
            ur: 0.0,
        }
    }
}

impl Run1dConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sol < 2 {
            return Err(Error::Config(format!("n_sol = {} is below 2", self.n_sol)));
        }
        if self.epsbar.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::Config("epsbar values must be positive".into()));
        }
        if self.epsbar.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("epsbar sweep must be strictly decreasing".into()));
        }
        Ok(())
    }

    pub fn paper_scale(mut self) -> Self {
        self.n_sol = 64_000_000;
        self
    }
}

/// One row of the 1D sweep; NaN errors mark a failed row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row1d {
    pub epsbar: f64,
    pub extension: ExtensionKind,
    pub n_sol: usize,
    pub e2: f64,
    pub einf: f64,
    pub e2hat: f64,
    pub einfhat: f64,
}

fn row_1d(
    a: &PiecewiseConstantCoeff1D,
    reference: &homog1d::Grid1DSolution,
    cfg: &Run1dConfig,
    spec: ExtensionSpec1D,
) -> Result<(f64, f64, f64, f64)> {
    let field = EffectiveField1D::new(a, spec)?;
    let u = homog1d::solve_exact_1d(&field, cfg.rhs, cfg.ul, cfg.ur, cfg.n_sol)?;
    let corrected = homog1d::correct_1d(&u, &field)?;
    let (e2, einf) = homog1d::errors_1d(&u.u, &reference.u)?;
    let (e2hat, einfhat) = homog1d::errors_1d(&corrected, &reference.u)?;
    Ok((e2, einf, e2hat, einfhat))
}

/// Stage name and wall time in seconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub seconds: f64,
}

struct Timer(Vec<Stage>);

impl Timer {
    fn time<T>(&mut self, name: impl Into<String>, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let stage = Stage { name: name.into(), seconds: start.elapsed().as_secs_f64() };
        log::info!("{}: {:.2} s", stage.name, stage.seconds);
        self.0.push(stage);
        out
    }
}

#[derive(Debug, Clone)]
pub struct Sweep1d {
    pub rows: Vec<Row1d>,
    pub stages: Vec<Stage>,
}

/// Runs the sweep. Row failures are logged and kept as NaN rows.
pub fn compute_1d(cfg: &Run1dConfig, bytes: &ByteStreamRng) -> Result<Sweep1d> {
    cfg.validate()?;
    let mut timer = Timer(Vec::new());
    let mut rng = bytes.rewound();
    let a = timer.time("coefficient", || cfg.coefficient.build(&mut rng))?;
    let reference = timer.time("reference", || homog1d::solve_exact_1d(&a, cfg.rhs, cfg.ul, cfg.ur, cfg.n_sol))?;
    let mut rows = Vec::new();
    for &epsbar in &cfg.epsbar {
        for &kind in &cfg.extensions {
            let spec = ExtensionSpec1D::new(kind, epsbar)?;
            let result = timer.time(format!("{kind} epsbar={epsbar}"), || row_1d(&a, &reference, cfg, spec));
            let (e2, einf, e2hat, einfhat) = result.unwrap_or_else(|e| {
                log::warn!("row {kind} epsbar={epsbar} failed: {e}");
                (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
            });
            rows.push(Row1d { epsbar, extension: kind, n_sol: cfg.n_sol, e2, einf, e2hat, einfhat });
        }
    }
    Ok(Sweep1d { rows, stages: timer.0 })
}

pub fn write_errors1d_csv(rows: &[Row1d], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "epsbar,extension,k,N_sol,E2,Einf,E2hat,Einfhat")?;
    for r in rows {
        let (ext, k) = match r.extension {
            ExtensionKind::Continuous => ("C", String::new()),
            ExtensionKind::Discrete(k) => ("D", k.to_string()),
        };
        writeln!(
            out,
            "{},{ext},{k},{},{:e},{:e},{:e},{:e}",
            r.epsbar, r.n_sol, r.e2, r.einf, r.e2hat, r.einfhat
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Run2dConfig {
    pub coefficient: Coeff2dSpec,
    /// Macro mesh sizes; each `1 / h` must be a whole number.
    pub h: Vec<f64>,
    pub k: usize,
    /// Cell-problem grid; chosen per `h` from the finest wavelength when absent.
    pub n_cell: Option<usize>,
    pub n_cell_cap: usize,
    /// Stored corrector grid; `min(n_cell, 128)` when absent, further
    /// capped at the reference resolution of one window.
    pub n_store: Option<usize>,
    pub n_ref: usize,
    pub f: f64,
    /// Also upscale with half the cell grid and report the differences.
    pub compare_half_cell_grid: bool,
    pub write_cell_store: bool,
}

impl Default for Run2dConfig {
    fn default() -> Self {
        Self {
            coefficient: Coeff2dSpec::RandomSines { n_sin: 64, contrast: 1e4 },
            h: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
            k: 2,
            n_cell: None,
            n_cell_cap: 256,
            n_store: None,
            n_ref: 1024,
            f: 10.0,
            compare_half_cell_grid: false,
            write_cell_store: true,
        }
    }
}

impl Run2dConfig {
    pub fn macro_grid(h: f64) -> Result<usize> {
        let n = 1.0 / h;
        if !(h > 0.0) || (n - n.round()).abs() > 1e-9 * n {
            return Err(Error::Config(format!("1/h = {n} is not a whole number")));
        }
        Ok(n.round() as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_ref.is_power_of_two() || self.n_ref < 2 {
            return Err(Error::Config(format!("n_ref = {} must be a power of two", self.n_ref)));
        }
        for &h in &self.h {
            let n = Self::macro_grid(h)?;
            if !n.is_power_of_two() || n > self.n_ref {
                return Err(Error::Config(format!("1/h = {n} must be a power of two not above n_ref")));
            }
        }
        if self.h.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("h sweep must be strictly decreasing".into()));
        }
        Ok(())
    }

    pub fn paper_scale(mut self) -> Self {
        self.n_ref = 4096;
        self.n_cell_cap = 512;
        self
    }

    /// Upscaling parameters at mesh size `h`.
    pub fn upscale_config(&self, a: &dyn Coefficient2d, h: f64) -> Result<UpscaleConfig> {
        let n = Self::macro_grid(h)?;
        let epsbar = self.k as f64 * h;
        let nc = self
            .n_cell
            .unwrap_or_else(|| UpscaleConfig::default_cell_grid(epsbar, a.finest_wavelength(), self.n_cell_cap));
        // query points are reference nodes: storing more than that per window is wasted
        let window_ref = (self.k * self.n_ref / n).max(2 * self.k);
        let ns = self.n_store.unwrap_or(nc.min(128)).min(window_ref).min(nc);
        UpscaleConfig::with_store(epsbar, self.k, nc, ns)
    }
}

/// Per-`h` contrast and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastRow {
    pub h: f64,
    pub epsbar: f64,
    pub n_cell: usize,
    pub contrast: f64,
    pub max_asymmetry: f64,
    /// Tensor-field and macro-solution differences against half the cell
    /// grid, when requested.
    pub half_grid: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Sweep2d {
    pub experiment: String,
    pub records: Vec<CurveRecord>,
    pub contrast: Vec<ContrastRow>,
    pub fields: Vec<(usize, upscale2d::EffectiveField2D)>,
    pub stages: Vec<Stage>,
}

fn push_errors(
    records: &mut Vec<CurveRecord>,
    experiment: &str,
    h: f64,
    curve: Curve,
    meta: &str,
    errs: Result<(f64, f64)>,
) {
    let (values, meta) = match errs {
        Ok((e2, ei)) => ([e2, ei], meta.to_string()),
        Err(e) => {
            log::warn!("{curve} at h={h} failed: {e}");
            ([f64::NAN, f64::NAN], format!("{meta};failed={e}"))
        }
    };
    for (norm, value) in [Norm::L2, Norm::Linf].into_iter().zip(values) {
        records.push(CurveRecord { experiment: experiment.into(), h, curve, norm, value, meta: meta.clone() });
    }
}

fn isotropic_samples(a: &dyn Coefficient2d, n: usize) -> Vec<Tensor2> {
    a.sample_centers([0.0, 0.0], 1.0 / n as f64, n).into_iter().map(Tensor2::iso).collect()
}

pub fn compute_2d(cfg: &Run2dConfig, bytes: &ByteStreamRng) -> Result<Sweep2d> {
    cfg.validate()?;
    let mut timer = Timer(Vec::new());
    let mut rng = bytes.rewound();
    let a = timer.time("coefficient", || cfg.coefficient.build(&mut rng))?;
    let experiment = cfg.coefficient.label();
    let (u_ref, _) = timer.time("reference", || fem2d::solve_dirichlet(cfg.n_ref, &isotropic_samples(&a, cfg.n_ref), |_| cfg.f))?;
    let u_ref = u_ref.into_values();
    let mut records = Vec::new();
    let mut contrast = Vec::new();
    let mut fields = Vec::new();
    for &h in &cfg.h {
        let n = Run2dConfig::macro_grid(h)?;
        let up = cfg.upscale_config(&a, h)?;
        let meta = format!(
            "N_ref={};N_c={};N_cs={};epsbar={}{}",
            cfg.n_ref,
            up.n_cell,
            up.n_store,
            up.epsbar,
            match cfg.coefficient {
                Coeff2dSpec::RandomSines { n_sin, .. } => format!(";N_sin={n_sin}"),
                _ => String::new(),
            }
        );

        if n < cfg.n_ref {
            let direct = timer.time(format!("direct N={n}"), || {
                let (u, _) = fem2d::solve_dirichlet(n, &isotropic_samples(&a, n), |_| cfg.f)?;
                metrics::relative_errors(&metrics::restrict_to_reference(&u, cfg.n_ref)?, &u_ref)
            });
            push_errors(&mut records, &experiment, h, Curve::C1, &meta, direct);
        }

        let field = match timer.time(format!("upscale N={n}"), || upscale2d::upscale_field(&a, &up)) {
            Ok(f) => f,
            Err(e) => {
                log::warn!("upscaling at h={h} failed: {e}");
                for curve in [Curve::C2, Curve::C3] {
                    push_errors(&mut records, &experiment, h, curve, &meta, Err(Error::Config(e.to_string())));
                }
                continue;
            }
        };
        let corrected = |refine: usize| -> Result<(f64, f64)> {
            let (u, _) = upscale2d::solve_macro(&field, refine, cfg.f)?;
            let c = upscale2d::correct_2d(&u, &field, cfg.n_ref)?;
            metrics::relative_errors(&c.corrected, &u_ref)
        };
        let c2 = timer.time(format!("macro h N={n}"), || corrected(1));
        push_errors(&mut records, &experiment, h, Curve::C2, &meta, c2);
        let c3 = timer.time(format!("macro h/4 N={n}"), || corrected(4));
        push_errors(&mut records, &experiment, h, Curve::C3, &meta, c3);

        let half_grid = if cfg.compare_half_cell_grid && up.n_cell >= 32 {
            let half = UpscaleConfig::with_store(up.epsbar, up.k, up.n_cell / 2, up.n_store.min(up.n_cell / 2))?;
            let coarse = timer.time(format!("upscale half N={n}"), || upscale2d::upscale_field(&a, &half))?;
            let dt = upscale2d::tensor_field_difference(field.tensors(), coarse.tensors())?;
            let (u1, _) = upscale2d::solve_macro(&field, 1, cfg.f)?;
            let (u2, _) = upscale2d::solve_macro(&coarse, 1, cfg.f)?;
            let du = metrics::relative_errors(u2.values(), u1.values())?.0;
            Some((dt, du))
        } else {
            None
        };
        contrast.push(ContrastRow {
            h,
            epsbar: up.epsbar,
            n_cell: up.n_cell,
            contrast: upscale2d::contrast_ca(&field),
            max_asymmetry: field.max_asymmetry(),
            half_grid,
        });
        fields.push((n, field));
    }
    Ok(Sweep2d { experiment, records, contrast, fields, stages: timer.0 })
}

pub fn write_contrast_csv(rows: &[ContrastRow], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "h,epsbar,N_c,C_A,max_asymmetry,tensor_diff_half,solution_diff_half")?;
    for r in rows {
        let (dt, du) = r.half_grid.map_or((String::new(), String::new()), |(a, b)| (format!("{a:e}"), format!("{b:e}")));
        writeln!(out, "{},{},{},{:e},{:e},{dt},{du}", r.h, r.epsbar, r.n_cell, r.contrast, r.max_asymmetry)?;
    }
    Ok(())
}

/// Where the bytes came from, for the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct ByteSource {
    pub path: Option<PathBuf>,
    pub len: usize,
    pub sha256: String,
}

impl ByteSource {
    pub fn describe(rng: &ByteStreamRng, path: Option<&Path>) -> Self {
        Self {
            path: path.map(Path::to_path_buf),
            len: rng.bytes().len(),
            sha256: hex::encode(Sha256::digest(rng.bytes())),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<C: Serialize> {
    pub command: String,
    pub version: String,
    pub config: C,
    pub random_bytes: ByteSource,
    pub threads: usize,
    pub stages: Vec<Stage>,
    pub outputs: Vec<String>,
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<String> {
    let path = dir.join(name);
    let mut out = create(&path)?;
    f(&mut out).and_then(|_| out.flush()).map_err(|e| Error::io(&path, e))?;
    Ok(name.to_string())
}

fn write_manifest<C: Serialize>(dir: &Path, manifest: &Manifest<C>) -> Result<()> {
    let path = dir.join("manifest.json");
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, manifest)?;
    out.write_all(b"\n").and_then(|_| out.flush()).map_err(|e| Error::io(&path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs the 1D sweep and writes `errors1d.csv` and `manifest.json`.
pub fn run1d(cfg: &Run1dConfig, bytes: &ByteStreamRng, source: Option<&Path>, out_dir: &Path) -> Result<Sweep1d> {
    ensure_dir(out_dir)?;
    let sweep = compute_1d(cfg, bytes)?;
    let outputs = vec![write_file(out_dir, "errors1d.csv", |o| write_errors1d_csv(&sweep.rows, o))?];
    write_manifest(out_dir, &Manifest {
        command: "run1d".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg,
        random_bytes: ByteSource::describe(bytes, source),
        threads: rayon::current_num_threads(),
        stages: sweep.stages.clone(),
        outputs,
    })?;
    Ok(sweep)
}

/// Runs the 2D sweep and writes `curves.csv`, `contrast.csv`, one tensor
/// CSV and one cell store per `h`, and `manifest.json`.
pub fn run2d(cfg: &Run2dConfig, bytes: &ByteStreamRng, source: Option<&Path>, out_dir: &Path) -> Result<Sweep2d> {
    ensure_dir(out_dir)?;
    let sweep = compute_2d(cfg, bytes)?;
    let mut outputs = vec![
        write_file(out_dir, "curves.csv", |o| metrics::write_curves_csv(&sweep.records, o))?,
        write_file(out_dir, "contrast.csv", |o| write_contrast_csv(&sweep.contrast, o))?,
    ];
    for (n, field) in &sweep.fields {
        outputs.push(write_file(out_dir, &format!("tensors_N{n}.csv"), |o| field.write_tensor_csv(o))?);
        if cfg.write_cell_store {
            let name = format!("cells_N{n}.bin");
            field.store().save(&out_dir.join(&name))?;
            outputs.push(name);
        }
    }
    write_manifest(out_dir, &Manifest {
        command: "run2d".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg,
        random_bytes: ByteSource::describe(bytes, source),
        threads: rayon::current_num_threads(),
        stages: sweep.stages.clone(),
        outputs,
    })?;
    Ok(sweep)
}

/// Reads an `n x n` window of samples, one row of the cell grid per line
/// (first line is `y2 = 0`), comma or whitespace separated.
pub fn read_window_csv(path: &Path) -> Result<(Vec<f64>, usize)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_window(&text)
}

pub fn parse_window(text: &str) -> Result<(Vec<f64>, usize)> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", line_no + 1))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("window must be square, got {n} rows")));
    }
    Ok((rows.concat(), n))
}

/// Cell probe result: tensor, correctors and bound check.
#[derive(Debug, Clone)]
pub struct CellProbe {
    pub n: usize,
    pub pair: fem2d::CellSolutionPair,
    pub harmonic: f64,
    pub arithmetic: f64,
}

pub fn cellprobe(samples: &[f64], n: usize) -> Result<CellProbe> {
    let pair = fem2d::solve_cell_pair(samples, n)?;
    let arithmetic = samples.iter().sum::<f64>() / samples.len() as f64;
    let harmonic = samples.len() as f64 / samples.iter().map(|v| 1.0 / v).sum::<f64>();
    Ok(CellProbe { n, pair, harmonic, arithmetic })
}

impl CellProbe {
    pub fn report(&self) -> String {
        let t = self.pair.effective.tensor;
        let (lo, hi) = t.eigenvalues();
        format!(
            "A11 = {:.10e}\nA12 = {:.10e}\nA22 = {:.10e}\nasymmetry = {:.3e}\neigenvalues = [{lo:.10e}, {hi:.10e}] within [{:.10e}, {:.10e}]\n",
            t.a11, t.a12, t.a22, self.pair.effective.asymmetry, self.harmonic, self.arithmetic
        )
    }

    /// Rows `i1,i2,w1,w2` on the cell grid.
    pub fn write_solutions_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "i1,i2,w1,w2")?;
        for (q, (a, b)) in self.pair.w1.iter().zip(&self.pair.w2).enumerate() {
            writeln!(out, "{},{},{:e},{:e}", q % self.n, q / self.n, a, b)?;
        }
        Ok(())
    }
}

/// Samples a coefficient for plotting: `x,value` at `n` uniform points of
/// [0, 1] in 1D, `x,y,value` at the `n x n` square centres of the unit
/// square in 2D.
pub fn dump_coeff(spec: AnyCoeffSpec, bytes: &ByteStreamRng, n: usize, mut out: impl Write) -> Result<()> {
    let mut rng = bytes.rewound();
    let io = |e| Error::io("<output>", e);
    match spec {
        AnyCoeffSpec::OneD(c) => {
            let a = c.build(&mut rng)?;
            writeln!(out, "x,value").map_err(io)?;
            for i in 0..n {
                let x = if n == 1 { 0.0 } else { homog1d::grid_node(i, n) };
                writeln!(out, "{x},{:e}", a.value_at(x)).map_err(io)?;
            }
        }
        AnyCoeffSpec::TwoD(c) => {
            let a = c.build(&mut rng)?;
            let step = 1.0 / n as f64;
            writeln!(out, "x,y,value").map_err(io)?;
            for (q, v) in a.sample_centers([0.0, 0.0], step, n).iter().enumerate() {
                let (x, y) = (((q % n) as f64 + 0.5) * step, ((q / n) as f64 + 0.5) * step);
                writeln!(out, "{x},{y},{v:e}").map_err(io)?;
            }
        }
    }
    out.flush().map_err(io)
}

/// Reference solution helper shared with tests.
pub fn reference_2d(a: &dyn Coefficient2d, n_ref: usize, f: f64) -> Result<NodalField> {
    Ok(fem2d::solve_dirichlet(n_ref, &isotropic_samples(a, n_ref), |_| f)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json_round_trip() {
        let cfg = Run2dConfig { coefficient: Coeff2dSpec::Mingyue, n_cell: Some(32), ..Default::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<Run2dConfig>(&text).unwrap(), cfg);
        let partial: Run1dConfig = serde_json::from_str(r#"{"coefficient": {"constant": 1.0}, "extensions": ["C", "D2"]}"#).unwrap();
        assert_eq!(partial.coefficient, Coeff1dSpec::Constant(1.0));
        assert_eq!(partial.extensions, vec![ExtensionKind::Continuous, ExtensionKind::Discrete(2)]);
        assert_eq!(partial.n_sol, 1_000_000);
        let sines: Run2dConfig = serde_json::from_str(r#"{"coefficient": {"random_sines": {"n_sin": 128}}}"#).unwrap();
        assert_eq!(sines.coefficient, Coeff2dSpec::RandomSines { n_sin: 128, contrast: 1e4 });
        assert!(serde_json::from_str::<Run1dConfig>(r#"{"nsol": 3}"#).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = Run1dConfig::default();
        c.epsbar = vec![0.004, 0.008];
        assert!(c.validate().is_err());
        let mut d = Run2dConfig::default();
        d.h = vec![0.3];
        assert!(d.validate().is_err());
        d.h = vec![1.0 / 8.0];
        d.n_ref = 4;
        assert!(d.validate().is_err());
    }

    #[test]
    fn coefficient_strings() {
        assert_eq!("a3".parse::<AnyCoeffSpec>().unwrap(), AnyCoeffSpec::OneD(Coeff1dSpec::A3));
        assert_eq!(
            "sines:64:100".parse::<AnyCoeffSpec>().unwrap(),
            AnyCoeffSpec::TwoD(Coeff2dSpec::RandomSines { n_sin: 64, contrast: 100.0 })
        );
        assert!("sines".parse::<AnyCoeffSpec>().is_err());
    }

    #[test]
    fn constant_smoke_1d() {
        let cfg = Run1dConfig {
            coefficient: Coeff1dSpec::Constant(1.0),
            n_sol: 2001,
            ..Default::default()
        };
        let sweep = compute_1d(&cfg, &ByteStreamRng::fixture()).unwrap();
        assert_eq!(sweep.rows.len(), 20);
        for r in &sweep.rows {
            assert!(r.e2 < 1e-12 && r.e2hat < 1e-12 && r.einf < 1e-12 && r.einfhat < 1e-12, "{r:?}");
        }
        let mut out = Vec::new();
        write_errors1d_csv(&sweep.rows[..1], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("epsbar,extension,k,N_sol,E2,Einf,E2hat,Einfhat\n0.016,D,1,2001,"));
    }

    #[test]
    fn constant_smoke_2d() {
        let cfg = Run2dConfig {
            coefficient: Coeff2dSpec::Constant(2.0),
            h: vec![0.25, 0.125],
            n_cell: Some(16),
            n_ref: 32,
            ..Default::default()
        };
        let sweep = compute_2d(&cfg, &ByteStreamRng::fixture()).unwrap();
        for h in [0.25, 0.125] {
            let get = |c: Curve| sweep.records.iter().find(|r| r.h == h && r.curve == c && r.norm == Norm::L2).unwrap().value;
            // the corrector vanishes, so c2 is the plain h-grid solution
            assert!((get(Curve::C1) - get(Curve::C2)).abs() < 1e-9);
            assert!(get(Curve::C3) <= get(Curve::C2));
        }
        assert!(sweep.contrast.iter().all(|r| r.contrast == 1.0));
    }

    #[test]
    fn window_parsing() {
        let (v, n) = parse_window("# laminate\n1, 1\n4 4\n").unwrap();
        assert_eq!((v, n), (vec![1.0, 1.0, 4.0, 4.0], 2));
        assert!(parse_window("1,2\n3\n").is_err());
        assert!(parse_window("1,x\n3,4\n").is_err());
    }

    #[test]
    fn probe_constant_window() {
        let p = cellprobe(&[3.0; 256], 16).unwrap();
        assert_eq!(p.pair.effective.tensor, Tensor2::iso(3.0));
        assert!(p.report().starts_with("A11 = 3.0000000000e0\n"));
    }

    #[test]
    fn runs_write_identical_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = Run2dConfig {
            coefficient: Coeff2dSpec::RandomSines { n_sin: 8, contrast: 100.0 },
            h: vec![0.25, 0.125],
            n_cell: Some(16),
            n_ref: 32,
            ..Default::default()
        };
        let bytes = ByteStreamRng::fixture();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        run2d(&cfg, &bytes, None, &a).unwrap();
        run2d(&cfg, &bytes, None, &b).unwrap();
        for name in ["curves.csv", "contrast.csv", "tensors_N8.csv", "cells_N8.bin"] {
            assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
        }
        let manifest: serde_json::Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["random_bytes"]["len"], 65536);
        assert_eq!(manifest["config"]["n_ref"], 32);
    }
}
