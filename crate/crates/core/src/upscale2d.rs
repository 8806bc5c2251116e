//! Discrete two-scale upscaling in 2D: one cell problem per macro cell of
//! size `h = epsbar / k`, solved on the `epsbar`-window centred on it.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem2d::{self, NodalField, SolveReport, Tensor2};
use crate::problem::Coefficient2d;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct UpscaleConfig {
    pub epsbar: f64,
    pub k: usize,
    /// Cell-problem grid per window side.
    pub n_cell: usize,
    /// Stored cell-solution grid per window side.
    pub n_store: usize,
}

impl UpscaleConfig {
    /// Stores cell solutions at `min(n_cell, 128)`.
    pub fn new(epsbar: f64, k: usize, n_cell: usize) -> Result<Self> {
        Self::with_store(epsbar, k, n_cell, n_cell.min(128))
    }

    pub fn with_store(epsbar: f64, k: usize, n_cell: usize, n_store: usize) -> Result<Self> {
        if !(epsbar > 0.0) || k == 0 {
            return Err(Error::Config(format!("need epsbar > 0 and k >= 1, got {epsbar}, {k}")));
        }
        let cells = k as f64 / epsbar;
        if (cells - cells.round()).abs() > 1e-9 * cells || cells.round() < 1.0 {
            return Err(Error::Config(format!("k / epsbar = {cells} is not a whole number of cells")));
        }
        if n_cell < 16 {
            return Err(Error::Config(format!("cell grid {n_cell} is below 16")));
        }
        if n_store == 0 || n_store > n_cell || n_cell % n_store != 0 {
            return Err(Error::Config(format!("stored grid {n_store} must divide cell grid {n_cell}")));
        }
        if (n_store * (k - 1)) % (2 * k) != 0 || n_store % k != 0 {
            return Err(Error::Config(format!("stored grid {n_store} cannot isolate the central 1/{k} of a window")));
        }
        Ok(Self { epsbar, k, n_cell, n_store })
    }

    pub fn h(&self) -> f64 {
        self.epsbar / self.k as f64
    }

    /// Macro cells per side of the unit square.
    pub fn n_macro(&self) -> usize {
        (self.k as f64 / self.epsbar).round() as usize
    }

    /// Nodes per side of the stored block covering one macro cell.
    pub fn block_nodes(&self) -> usize {
        self.n_store / self.k + 1
    }

    fn block_offset(&self) -> usize {
        self.n_store * (self.k - 1) / (2 * self.k)
    }

    /// Lower-left corner of the window of macro cell `(i1, i2)`.
    pub fn window_origin(&self, i1: usize, i2: usize) -> [f64; 2] {
        let h = self.h();
        let half = 0.5 * self.epsbar;
        [(i1 as f64 + 0.5) * h - half, (i2 as f64 + 0.5) * h - half]
    }

    /// Cell grid resolving the finest wavelength with 16 samples per
    /// wavelength, rounded up to a power of two and kept in `[64, cap]`.
    pub fn default_cell_grid(epsbar: f64, finest_wavelength: Option<f64>, cap: usize) -> usize {
        let want = finest_wavelength.map_or(1.0, |l| (16.0 * epsbar / l).ceil());
        (want as usize).next_power_of_two().clamp(64, cap.max(64))
    }
}

/// Correctors of every macro cell restricted to that cell, on the stored grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStore {
    n: usize,
    k: usize,
    n_store: usize,
    epsbar: f64,
    /// Per cell (row-major, `i2 * n + i1`): `w1` block then `w2` block,
    /// each `m x m` with the first index fastest.
    data: Vec<f64>,
}

impl CellStore {
    fn empty(cfg: &UpscaleConfig) -> Self {
        Self { n: cfg.n_macro(), k: cfg.k, n_store: cfg.n_store, epsbar: cfg.epsbar, data: Vec::new() }
    }

    pub fn block_nodes(&self) -> usize {
        self.n_store / self.k + 1
    }

    fn block_len(&self) -> usize {
        let m = self.block_nodes();
        2 * m * m
    }

    /// `(w1, w2)` blocks of macro cell `(i1, i2)`.
    pub fn block(&self, i1: usize, i2: usize) -> (&[f64], &[f64]) {
        let len = self.block_len();
        let start = (i2 * self.n + i1) * len;
        let b = &self.data[start..start + len];
        b.split_at(len / 2)
    }

    /// Bilinear interpolation of `(w1, w2)` at local coordinates
    /// `t in [0, 1]^2` of macro cell `(i1, i2)`.
    pub fn eval(&self, i1: usize, i2: usize, t: [f64; 2]) -> [f64; 2] {
        let m = self.block_nodes();
        let span = (m - 1) as f64;
        let (gx, gy) = (t[0].clamp(0.0, 1.0) * span, t[1].clamp(0.0, 1.0) * span);
        let a = (gx.floor() as usize).min(m - 2);
        let b = (gy.floor() as usize).min(m - 2);
        let (s, r) = (gx - a as f64, gy - b as f64);
        let (w1, w2) = self.block(i1, i2);
        let lerp = |w: &[f64]| {
            let v00 = w[b * m + a];
            let v10 = w[b * m + a + 1];
            let v01 = w[(b + 1) * m + a];
            let v11 = w[(b + 1) * m + a + 1];
            (1.0 - r) * ((1.0 - s) * v00 + s * v10) + r * ((1.0 - s) * v01 + s * v11)
        };
        [lerp(w1), lerp(w2)]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        for v in [self.n, self.k, self.n_store] {
            out.write_all(&(v as u64).to_le_bytes())?;
        }
        out.write_all(&self.epsbar.to_le_bytes())?;
        for v in &self.data {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut input: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        input
            .read_to_end(&mut buf)
            .map_err(|e| Error::Parse(format!("cell store: {e}")))?;
        if buf.len() < 32 || (buf.len() - 32) % 8 != 0 {
            return Err(Error::Parse(format!("cell store of {} bytes is truncated", buf.len())));
        }
        let word = |i: usize| <[u8; 8]>::try_from(&buf[8 * i..8 * i + 8]).unwrap();
        let n = u64::from_le_bytes(word(0)) as usize;
        let k = u64::from_le_bytes(word(1)) as usize;
        let n_store = u64::from_le_bytes(word(2)) as usize;
        let epsbar = f64::from_le_bytes(word(3));
        if k == 0 || n_store % k != 0 {
            return Err(Error::Parse(format!("cell store header has k = {k}, stored grid {n_store}")));
        }
        let data: Vec<f64> = (4..buf.len() / 8).map(|i| f64::from_le_bytes(word(i))).collect();
        let store = Self { n, k, n_store, epsbar, data };
        if store.data.len() != n * n * store.block_len() {
            return Err(Error::Parse(format!("cell store holds {} values, header implies {}", store.data.len(), n * n * store.block_len())));
        }
        Ok(store)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_to(&mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

/// Per-cell effective tensors plus the stored correctors.
#[derive(Debug, Clone)]
pub struct EffectiveField2D {
    cfg: UpscaleConfig,
    tensors: Vec<Tensor2>,
    max_asymmetry: f64,
    store: CellStore,
}

impl EffectiveField2D {
    /// Reassembles a field from saved tensors and a saved store.
    pub fn from_parts(cfg: UpscaleConfig, tensors: Vec<Tensor2>, store: CellStore) -> Result<Self> {
        let n = cfg.n_macro();
        if tensors.len() != n * n || store.n != n || store.k != cfg.k || store.n_store != cfg.n_store {
            return Err(Error::GridMismatch("tensor field and cell store disagree with the configuration".into()));
        }
        Ok(Self { cfg, tensors, max_asymmetry: 0.0, store })
    }

    pub fn config(&self) -> &UpscaleConfig {
        &self.cfg
    }

    pub fn n(&self) -> usize {
        self.cfg.n_macro()
    }

    pub fn tensors(&self) -> &[Tensor2] {
        &self.tensors
    }

    pub fn tensor(&self, i1: usize, i2: usize) -> Tensor2 {
        self.tensors[i2 * self.n() + i1]
    }

    pub fn store(&self) -> &CellStore {
        &self.store
    }

    /// Largest relative `|A12 - A21| / |A|` seen before symmetrisation.
    pub fn max_asymmetry(&self) -> f64 {
        self.max_asymmetry
    }

    /// Rows `i1,i2,A11,A12,A22`.
    pub fn write_tensor_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "i1,i2,A11,A12,A22")?;
        let n = self.n();
        for (idx, t) in self.tensors.iter().enumerate() {
            writeln!(out, "{},{},{:e},{:e},{:e}", idx % n, idx / n, t.a11, t.a12, t.a22)?;
        }
        Ok(())
    }
}

struct CellOutcome {
    tensor: Tensor2,
    asymmetry: f64,
    block: Vec<f64>,
}

fn upscale_cell(a: &dyn Coefficient2d, cfg: &UpscaleConfig, i1: usize, i2: usize) -> Result<CellOutcome> {
    let nc = cfg.n_cell;
    let samples = a.sample_centers(cfg.window_origin(i1, i2), cfg.epsbar / nc as f64, nc);
    let pair = fem2d::solve_cell_pair(&samples, nc).map_err(|e| match e {
        Error::NoConvergence { iterations, residual, .. } => {
            Error::NoConvergence { iterations, residual, cell: Some((i1, i2)) }
        }
        other => other,
    })?;
    let m = cfg.block_nodes();
    let off = cfg.block_offset();
    let stride = nc / cfg.n_store;
    let mut block = Vec::with_capacity(2 * m * m);
    for w in [&pair.w1, &pair.w2] {
        for b in 0..m {
            for a in 0..m {
                // node n_store wraps to node 0 on the torus
                let s1 = ((off + a) * stride) % nc;
                let s2 = ((off + b) * stride) % nc;
                block.push(w[s2 * nc + s1]);
            }
        }
    }
    let t = pair.effective.tensor;
    Ok(CellOutcome { tensor: t, asymmetry: pair.effective.asymmetry / t.norm(), block })
}

/// Solves every cell problem (in parallel, results placed by cell index).
pub fn upscale_field(a: &dyn Coefficient2d, cfg: &UpscaleConfig) -> Result<EffectiveField2D> {
    let n = cfg.n_macro();
    let outcomes: Vec<CellOutcome> = (0..n * n)
        .into_par_iter()
        .map(|idx| upscale_cell(a, cfg, idx % n, idx / n))
        .collect::<Result<_>>()?;
    let mut store = CellStore::empty(cfg);
    store.data.reserve(n * n * 2 * cfg.block_nodes().pow(2));
    let mut tensors = Vec::with_capacity(n * n);
    let mut max_asymmetry: f64 = 0.0;
    for o in outcomes {
        tensors.push(o.tensor);
        max_asymmetry = max_asymmetry.max(o.asymmetry);
        store.data.extend_from_slice(&o.block);
    }
    Ok(EffectiveField2D { cfg: *cfg, tensors, max_asymmetry, store })
}

/// Dirichlet solve of `-div(A grad U) = f` on the grid `refine` times finer
/// than the macro grid, each cell's tensor copied to its sub-squares.
pub fn solve_macro(field: &EffectiveField2D, refine: usize, f: f64) -> Result<(NodalField, SolveReport)> {
    let n = field.n();
    let nf = n * refine.max(1);
    let r = nf / n;
    let coeff: Vec<Tensor2> = (0..nf * nf).map(|q| field.tensor((q % nf) / r, (q / nf) / r)).collect();
    fem2d::solve_dirichlet(nf, &coeff, |_| f)
}

/// `U` and `U_hat = U + epsbar (w1 dU/dx1 + w2 dU/dx2)` at the nodes of the
/// `n_ref x n_ref` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedSolution {
    pub n_ref: usize,
    pub base: Vec<f64>,
    pub corrected: Vec<f64>,
}

/// Gradient of a macro-grid P1 function: central differences at square
/// centres, bilinear in between, held constant beyond the outermost centres.
#[derive(Debug, Clone)]
pub struct CenteredGradient {
    n: usize,
    g: Vec<[f64; 2]>,
}

impl CenteredGradient {
    pub fn new(u: &NodalField) -> Self {
        let n = u.n();
        let h = 1.0 / n as f64;
        let mut g = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let (u00, u10, u01, u11) = (u.at(i, j), u.at(i + 1, j), u.at(i, j + 1), u.at(i + 1, j + 1));
                g.push([(u10 - u00 + u11 - u01) / (2.0 * h), (u01 - u00 + u11 - u10) / (2.0 * h)]);
            }
        }
        Self { n, g }
    }

    pub fn eval(&self, p: [f64; 2]) -> [f64; 2] {
        let n = self.n;
        let last = (n - 1) as f64;
        let cx = (p[0] * n as f64 - 0.5).clamp(0.0, last);
        let cy = (p[1] * n as f64 - 0.5).clamp(0.0, last);
        let i = (cx.floor() as usize).min(n.saturating_sub(2));
        let j = (cy.floor() as usize).min(n.saturating_sub(2));
        if n == 1 {
            return self.g[0];
        }
        let (s, t) = (cx - i as f64, cy - j as f64);
        let at = |a: usize, b: usize| self.g[b * n + a];
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (1.0 - t) * ((1.0 - s) * at(i, j)[c] + s * at(i + 1, j)[c])
                + t * ((1.0 - s) * at(i, j + 1)[c] + s * at(i + 1, j + 1)[c]);
        }
        out
    }

    pub fn max_norm(&self) -> f64 {
        self.g.iter().fold(0.0, |m, v| m.max(v[0].abs()).max(v[1].abs()))
    }
}

/// Corrects `u` (on the macro grid or a refinement of it) at the reference
/// nodes. Gradients always come from `u` injected onto the macro grid.
pub fn correct_2d(u: &NodalField, field: &EffectiveField2D, n_ref: usize) -> Result<CorrectedSolution> {
    let n = field.n();
    if u.n() % n != 0 {
        return Err(Error::GridMismatch(format!("solution grid {} is not a refinement of {n}", u.n())));
    }
    let grad = CenteredGradient::new(&u.coarsen(u.n() / n)?);
    let eps = field.cfg.epsbar;
    let h = field.cfg.h();
    let nodes = (n_ref + 1) * (n_ref + 1);
    let mut base = Vec::with_capacity(nodes);
    let mut corrected = Vec::with_capacity(nodes);
    for q in 0..nodes {
        let p = [(q % (n_ref + 1)) as f64 / n_ref as f64, (q / (n_ref + 1)) as f64 / n_ref as f64];
        let value = u.interpolate(p)?;
        let i1 = ((p[0] * n as f64).floor() as usize).min(n - 1);
        let i2 = ((p[1] * n as f64).floor() as usize).min(n - 1);
        let t = [(p[0] - i1 as f64 * h) / h, (p[1] - i2 as f64 * h) / h];
        let w = field.store.eval(i1, i2, t);
        let g = grad.eval(p);
        base.push(value);
        corrected.push(value + eps * (w[0] * g[0] + w[1] * g[1]));
    }
    Ok(CorrectedSolution { n_ref, base, corrected })
}

/// `sup max(A11, A22) / inf min(A11, A22)` over the cells.
pub fn contrast_ca(field: &EffectiveField2D) -> f64 {
    contrast_of(field.tensors())
}

pub fn contrast_of(tensors: &[Tensor2]) -> f64 {
    let hi = tensors.iter().fold(f64::NEG_INFINITY, |m, t| m.max(t.a11).max(t.a22));
    let lo = tensors.iter().fold(f64::INFINITY, |m, t| m.min(t.a11).min(t.a22));
    hi / lo
}

/// Relative Frobenius difference of two tensor fields of the same size.
pub fn tensor_field_difference(a: &[Tensor2], b: &[Tensor2]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} vs {} tensors", a.len(), b.len())));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = Tensor2 { a11: x.a11 - y.a11, a12: x.a12 - y.a12, a21: x.a21 - y.a21, a22: x.a22 - y.a22 };
        num += d.norm().powi(2);
        den += x.norm().powi(2);
    }
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{AnalyticCoeff2D, FnCoefficient};
    use std::f64::consts::PI;

    #[test]
    fn config_validation() {
        assert!(UpscaleConfig::new(0.25, 2, 64).is_ok());
        assert!(UpscaleConfig::new(0.3, 2, 64).is_err());
        assert!(UpscaleConfig::new(0.25, 2, 8).is_err());
        assert!(UpscaleConfig::with_store(0.25, 2, 64, 48).is_err());
        assert!(UpscaleConfig::with_store(0.25, 2, 64, 2).is_err());
        let c = UpscaleConfig::new(0.25, 2, 256).unwrap();
        assert_eq!((c.n_macro(), c.n_store, c.block_nodes(), c.block_offset()), (8, 128, 65, 32));
        let c1 = UpscaleConfig::new(0.125, 1, 64).unwrap();
        assert_eq!((c1.block_nodes(), c1.block_offset()), (65, 0));
        assert_eq!(c.window_origin(0, 0), [-0.0625, -0.0625]);
    }

    #[test]
    fn default_cell_grid_rule() {
        assert_eq!(UpscaleConfig::default_cell_grid(0.25, Some(1.0 / 32.0), 256), 128);
        assert_eq!(UpscaleConfig::default_cell_grid(1.0 / 64.0, Some(1.0 / 32.0), 256), 64);
        assert_eq!(UpscaleConfig::default_cell_grid(0.5, Some(1.0 / 256.0), 256), 256);
        assert_eq!(UpscaleConfig::default_cell_grid(0.5, None, 256), 64);
    }

    #[test]
    fn constant_coefficient_field() {
        let cfg = UpscaleConfig::new(0.25, 2, 16).unwrap();
        let field = upscale_field(&AnalyticCoeff2D::Constant(2.0), &cfg).unwrap();
        assert!(field.tensors().iter().all(|t| *t == Tensor2::iso(2.0)));
        assert_eq!(field.store().max_abs(), 0.0);
        assert_eq!(contrast_ca(&field), 1.0);
        let (u, _) = solve_macro(&field, 1, 10.0).unwrap();
        let (p, _) = fem2d::solve_dirichlet(8, &vec![Tensor2::iso(1.0); 64], |_| 10.0).unwrap();
        for (a, b) in u.values().iter().zip(p.values()) {
            assert!((2.0 * a - b).abs() < 1e-9);
        }
        let c = correct_2d(&u, &field, 32).unwrap();
        assert_eq!(c.base, c.corrected);
    }

    fn periodic(eps: f64) -> impl Fn([f64; 2]) -> f64 + Sync {
        move |p: [f64; 2]| {
            let (y1, y2) = (2.0 * PI * p[0] / eps, 2.0 * PI * p[1] / eps);
            (1.0 + 0.8 * y1.sin() * (y2 + 0.3).cos() + 0.3 * (y1 + y2).cos()).exp()
        }
    }

    #[test]
    fn periodic_coefficient_gives_identical_cells() {
        let eps = 0.25;
        let a = FnCoefficient(periodic(eps));
        let d2 = upscale_field(&a, &UpscaleConfig::new(eps, 2, 32).unwrap()).unwrap();
        let d1 = upscale_field(&a, &UpscaleConfig::new(eps, 1, 32).unwrap()).unwrap();
        let t0 = d2.tensor(0, 0);
        assert!(t0.a12.abs() > 1e-3);
        for t in d2.tensors().iter().chain(d1.tensors()) {
            assert!(tensor_field_difference(&[t0], &[*t]).unwrap() < 1e-8);
        }
        assert!(d2.max_asymmetry() < 1e-8);
    }

    #[test]
    fn contrast_examples() {
        assert_eq!(contrast_of(&[Tensor2::symmetric(1.0, 0.0, 2.0), Tensor2::symmetric(4.0, 0.0, 8.0)]), 8.0);
        assert_eq!(contrast_of(&[Tensor2::iso(3.0); 5]), 1.0);
    }

    #[test]
    fn laminate_field_leaves_x1_gradient_uncorrected() {
        // a depends on x2 only, so w1 = 0 and U = x1 is not corrected
        let eps = 0.125;
        let a = FnCoefficient(move |p: [f64; 2]| if (p[1] / eps).rem_euclid(1.0) < 0.5 { 1.0 } else { 4.0 });
        let field = upscale_field(&a, &UpscaleConfig::new(eps, 2, 16).unwrap()).unwrap();
        let u = NodalField::from_fn(16, |p| p[0]);
        let c = correct_2d(&u, &field, 64).unwrap();
        for (a, b) in c.base.iter().zip(&c.corrected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn correction_respects_magnitude_bound() {
        let eps = 0.125;
        let a = FnCoefficient(periodic(0.05));
        let field = upscale_field(&a, &UpscaleConfig::new(eps, 2, 32).unwrap()).unwrap();
        let (u, _) = solve_macro(&field, 1, 10.0).unwrap();
        let c = correct_2d(&u, &field, 64).unwrap();
        let bound = eps * CenteredGradient::new(&u).max_norm() * field.store().max_abs() * 2.0 * 1.1;
        let worst = c.base.iter().zip(&c.corrected).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(worst > 0.0 && worst <= bound, "{worst} vs {bound}");
    }

    #[test]
    fn refined_macro_solve_agrees() {
        let field = upscale_field(&AnalyticCoeff2D::MingYue, &UpscaleConfig::new(0.25, 2, 16).unwrap()).unwrap();
        let (u1, _) = solve_macro(&field, 1, 10.0).unwrap();
        let (u4, _) = solve_macro(&field, 4, 10.0).unwrap();
        assert_eq!(u4.n(), 32);
        let coarse = u4.coarsen(4).unwrap();
        let diff: f64 = coarse.values().iter().zip(u1.values()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = u1.values().iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(diff / norm < 0.1);
    }

    #[test]
    fn store_round_trip() {
        let field = upscale_field(&AnalyticCoeff2D::MingYue, &UpscaleConfig::new(0.5, 2, 16).unwrap()).unwrap();
        let mut bytes = Vec::new();
        field.store().write_to(&mut bytes).unwrap();
        assert_eq!(&bytes[..8], &4u64.to_le_bytes());
        assert_eq!(bytes.len(), 32 + 16 * 2 * 9 * 9 * 8);
        let back = CellStore::read_from(&bytes[..]).unwrap();
        assert_eq!(&back, field.store());
        assert!(CellStore::read_from(&bytes[..40]).is_err());
        let rebuilt = EffectiveField2D::from_parts(*field.config(), field.tensors().to_vec(), back).unwrap();
        assert_eq!(rebuilt.tensor(1, 2), field.tensor(1, 2));
    }

    #[test]
    fn gradient_of_linear_function_is_exact() {
        let u = NodalField::from_fn(8, |p| 2.0 * p[0] - 3.0 * p[1]);
        let g = CenteredGradient::new(&u);
        for p in [[0.0, 0.0], [0.31, 0.77], [1.0, 0.5]] {
            let v = g.eval(p);
            assert!((v[0] - 2.0).abs() < 1e-12 && (v[1] + 3.0).abs() < 1e-12);
        }
    }
}
