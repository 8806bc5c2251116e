//! Linear finite elements on the uniform `N x N` Cartesian grid of the unit
//! square, each square cut into two triangles by its lower-left to
//! upper-right diagonal.
//!
//! With that triangulation every node couples only to its four axis
//! neighbours and to its two diagonal neighbours along the cut, so all
//! operators are stored as 7-point stencils over the unknown grid.

use crate::error::{Error, Result};

/// A 2x2 coefficient tensor, stored unsymmetrised.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tensor2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Tensor2 {
    pub fn iso(c: f64) -> Self {
        Self { a11: c, a12: 0.0, a21: 0.0, a22: c }
    }

    pub fn symmetric(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a21: a12, a22 }
    }

    pub fn symmetrized(&self) -> Self {
        let off = 0.5 * (self.a12 + self.a21);
        Self::symmetric(self.a11, off, self.a22)
    }

    /// Eigenvalues `(min, max)` of the symmetric part.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let s = self.symmetrized();
        let mean = 0.5 * (s.a11 + s.a22);
        let half_diff = 0.5 * (s.a11 - s.a22);
        let r = half_diff.hypot(s.a12);
        (mean - r, mean + r)
    }

    pub fn is_spd(&self) -> bool {
        (self.a12 - self.a21).abs() <= 1e-12 * self.norm() && self.eigenvalues().0 > 0.0
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22).sqrt()
    }

    fn quad(&self, u: [f64; 2], v: [f64; 2]) -> f64 {
        u[0] * (self.a11 * v[0] + self.a12 * v[1]) + u[1] * (self.a21 * v[0] + self.a22 * v[1])
    }
}

/// Neighbour offsets of the stencil, slot 0 is the node itself.
pub const STENCIL: [(isize, isize); 7] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];

fn slot(di: isize, dj: isize) -> usize {
    match (di, dj) {
        (0, 0) => 0,
        (1, 0) => 1,
        (-1, 0) => 2,
        (0, 1) => 3,
        (0, -1) => 4,
        (1, 1) => 5,
        (-1, -1) => 6,
        _ => unreachable!("offset ({di}, {dj}) is not on the stencil"),
    }
}

/// Corner offsets and unscaled barycentric gradients (multiply by `1/h`)
/// of the two triangles of a square.
const TRIANGLES: [([(isize, isize); 3], [[f64; 2]; 3]); 2] = [
    ([(0, 0), (1, 0), (1, 1)], [[-1.0, 0.0], [1.0, -1.0], [0.0, 1.0]]),
    ([(0, 0), (1, 1), (0, 1)], [[0.0, -1.0], [1.0, 0.0], [-1.0, 1.0]]),
];

/// Symmetric 7-point operator on an `nx x ny` grid of unknowns.
#[derive(Debug, Clone)]
pub struct GridOperator {
    nx: usize,
    ny: usize,
    periodic: bool,
    coef: Vec<[f64; 7]>,
}

impl GridOperator {
    fn zeros(nx: usize, ny: usize, periodic: bool) -> Self {
        Self { nx, ny, periodic, coef: vec![[0.0; 7]; nx * ny] }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.coef.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.coef.iter().map(|c| c[0]).collect()
    }

    fn neighbour(&self, i: usize, j: usize, (di, dj): (isize, isize)) -> Option<usize> {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let (mut a, mut b) = (i as isize + di, j as isize + dj);
        if self.periodic {
            a = a.rem_euclid(nx);
            b = b.rem_euclid(ny);
        } else if a < 0 || b < 0 || a >= nx || b >= ny {
            return None;
        }
        Some(b as usize * self.nx + a as usize)
    }

    /// Nonzero entries `(column, value)` of row `r`; repeated columns
    /// (tiny periodic grids) are summed.
    pub fn row(&self, r: usize) -> Vec<(usize, f64)> {
        let (i, j) = (r % self.nx, r / self.nx);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(7);
        for (s, off) in STENCIL.iter().enumerate() {
            let v = self.coef[r][s];
            if v == 0.0 {
                continue;
            }
            if let Some(c) = self.neighbour(i, j, *off) {
                match out.iter_mut().find(|(col, _)| *col == c) {
                    Some(e) => e.1 += v,
                    None => out.push((c, v)),
                }
            }
        }
        out
    }

    /// Start of the row `j + dj` of the unknown grid, if it exists.
    fn row_start(&self, j: usize, dj: isize) -> Option<usize> {
        let ny = self.ny;
        match dj {
            -1 if j > 0 => Some((j - 1) * self.nx),
            -1 => self.periodic.then(|| (ny - 1) * self.nx),
            1 if j + 1 < ny => Some((j + 1) * self.nx),
            1 => self.periodic.then_some(0),
            _ => Some(j * self.nx),
        }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let nx = self.nx;
        for j in 0..self.ny {
            let row = j * nx;
            let up = self.row_start(j, 1);
            let down = self.row_start(j, -1);
            if let (Some(u), Some(d)) = (up, down) {
                for i in 1..nx.saturating_sub(1) {
                    let r = row + i;
                    let c = &self.coef[r];
                    y[r] = c[0] * x[r]
                        + c[1] * x[r + 1]
                        + c[2] * x[r - 1]
                        + c[3] * x[u + i]
                        + c[4] * x[d + i]
                        + c[5] * x[u + i + 1]
                        + c[6] * x[d + i - 1];
                }
            }
            if up.is_some() && down.is_some() && nx > 1 {
                y[row] = self.edge_value(x, row, up, down, 0);
                y[row + nx - 1] = self.edge_value(x, row, up, down, nx - 1);
            } else {
                for i in 0..nx {
                    y[row + i] = self.edge_value(x, row, up, down, i);
                }
            }
        }
    }

    /// Row product for nodes whose stencil may leave the grid.
    fn edge_value(&self, x: &[f64], row: usize, up: Option<usize>, down: Option<usize>, i: usize) -> f64 {
        let nx = self.nx;
        let left = if i > 0 { Some(i - 1) } else { self.periodic.then(|| nx - 1) };
        let right = if i + 1 < nx { Some(i + 1) } else { self.periodic.then_some(0) };
        let r = row + i;
        let c = &self.coef[r];
        let mut acc = c[0] * x[r];
        if let Some(a) = right {
            acc += c[1] * x[row + a];
        }
        if let Some(a) = left {
            acc += c[2] * x[row + a];
        }
        if let Some(u) = up {
            acc += c[3] * x[u + i];
            if let Some(a) = right {
                acc += c[5] * x[u + a];
            }
        }
        if let Some(d) = down {
            acc += c[4] * x[d + i];
            if let Some(a) = left {
                acc += c[6] * x[d + a];
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Unknowns are the interior nodes; boundary values are zero.
    Dirichlet,
    /// Unknowns are the torus nodes; solution has zero mean.
    PeriodicZeroMean,
}

#[derive(Debug, Clone)]
pub struct SparseSpdSystem {
    pub matrix: GridOperator,
    pub rhs: Vec<f64>,
    pub constraint: Constraint,
}

/// Uniform mesh of the unit square with `n` squares per side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CartesianP1Mesh {
    n: usize,
}

impl CartesianP1Mesh {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegenerateGrid(format!("need at least 2 squares per side, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn triangle_count(&self) -> usize {
        2 * self.n * self.n
    }

    /// Vertices of every triangle as node indices `(i, j)`, counter-clockwise.
    pub fn triangles(&self) -> impl Iterator<Item = [(usize, usize); 3]> + '_ {
        let n = self.n;
        (0..n * n).flat_map(move |sq| {
            let (si, sj) = ((sq % n) as isize, (sq / n) as isize);
            TRIANGLES.iter().map(move |(corners, _)| {
                corners.map(|(di, dj)| ((si + di) as usize, (sj + dj) as usize))
            })
        })
    }
}

fn check_coefficients(coeff: &[Tensor2], n: usize) -> Result<()> {
    if coeff.len() != n * n {
        return Err(Error::GridMismatch(format!("{} coefficients for {n}x{n} squares", coeff.len())));
    }
    match coeff.iter().position(|t| !t.is_spd()) {
        Some(square) => Err(Error::NonSpdCoefficient { square }),
        None => Ok(()),
    }
}

/// Stiffness and load of `-div(K grad u) = f` with `u = 0` on the boundary,
/// `K` constant per square (`coeff[j * n + i]`). The load uses the
/// edge-midpoint rule, exact for quadratic `f`.
pub fn assemble_dirichlet(
    mesh: &CartesianP1Mesh,
    coeff: &[Tensor2],
    f: impl Fn([f64; 2]) -> f64,
) -> Result<SparseSpdSystem> {
    let n = mesh.n();
    check_coefficients(coeff, n)?;
    let h = mesh.h();
    let m = n - 1;
    let mut op = GridOperator::zeros(m, m, false);
    let mut rhs = vec![0.0; m * m];
    let unknown = |i: isize, j: isize| -> Option<usize> {
        (i >= 1 && j >= 1 && i < n as isize && j < n as isize).then(|| (j as usize - 1) * m + i as usize - 1)
    };
    let area = 0.5 * h * h;
    for sj in 0..n as isize {
        for si in 0..n as isize {
            let k = &coeff[sj as usize * n + si as usize];
            for (corners, grads) in &TRIANGLES {
                let pts = corners.map(|(di, dj)| [(si + di) as f64 * h, (sj + dj) as f64 * h]);
                let mid = |a: usize, b: usize| f([0.5 * (pts[a][0] + pts[b][0]), 0.5 * (pts[a][1] + pts[b][1])]);
                let fm = [mid(0, 1), mid(1, 2), mid(2, 0)];
                for a in 0..3 {
                    let Some(row) = unknown(si + corners[a].0, sj + corners[a].1) else {
                        continue;
                    };
                    // midpoints touching vertex a: edges (a, a+1) and (a+2, a)
                    rhs[row] += area / 6.0 * (fm[a] + fm[(a + 2) % 3]);
                    for b in 0..3 {
                        if unknown(si + corners[b].0, sj + corners[b].1).is_none() {
                            continue;
                        }
                        let off = (corners[b].0 - corners[a].0, corners[b].1 - corners[a].1);
                        op.coef[row][slot(off.0, off.1)] += 0.5 * k.quad(grads[a], grads[b]);
                    }
                }
            }
        }
    }
    Ok(SparseSpdSystem { matrix: op, rhs, constraint: Constraint::Dirichlet })
}

/// Periodic stiffness on the `nc x nc` torus for a scalar field sampled at
/// square centres, with the cell-problem load `-int grad(phi) . a e_dir`.
fn assemble_cell(samples: &[f64], nc: usize, dir: usize) -> SparseSpdSystem {
    let h = 1.0 / nc as f64;
    let mut op = GridOperator::zeros(nc, nc, true);
    let mut rhs = vec![0.0; nc * nc];
    let wrap = |v: isize| v.rem_euclid(nc as isize) as usize;
    for sj in 0..nc as isize {
        for si in 0..nc as isize {
            let a = samples[sj as usize * nc + si as usize];
            for (corners, grads) in &TRIANGLES {
                for p in 0..3 {
                    let row = wrap(sj + corners[p].1) * nc + wrap(si + corners[p].0);
                    rhs[row] -= a * 0.5 * h * grads[p][dir];
                    for q in 0..3 {
                        let off = (corners[q].0 - corners[p].0, corners[q].1 - corners[p].1);
                        let g = grads[p][0] * grads[q][0] + grads[p][1] * grads[q][1];
                        op.coef[row][slot(off.0, off.1)] += 0.5 * a * g;
                    }
                }
            }
        }
    }
    SparseSpdSystem { matrix: op, rhs, constraint: Constraint::PeriodicZeroMean }
}

#[derive(Debug, Clone, Copy)]
pub struct CgSettings {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl CgSettings {
    /// Relative residual `1e-10`, at most `50 n` iterations.
    pub fn for_grid(n: usize) -> Self {
        Self { rel_tol: 1e-10, max_iter: 50 * n.max(1) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// True `|b - A x| / |b|` of the returned solution.
    pub rel_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

/// Jacobi-preconditioned conjugate gradients. Periodic systems have the
/// constants projected out of every residual and search direction.
pub fn solve_spd(system: &SparseSpdSystem, settings: CgSettings) -> Result<(Vec<f64>, SolveReport)> {
    let a = &system.matrix;
    let len = a.len();
    let periodic = system.constraint == Constraint::PeriodicZeroMean;
    let mut b = system.rhs.clone();
    if periodic {
        remove_mean(&mut b);
    }
    let b_norm = dot(&b, &b).sqrt();
    let mut x = vec![0.0; len];
    if b_norm == 0.0 {
        return Ok((x, SolveReport { iterations: 0, rel_residual: 0.0 }));
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();
    let mut r = b.clone();
    let mut z = vec![0.0; len];
    let mut p = vec![0.0; len];
    let mut ap = vec![0.0; len];
    let mut iterations = 0;
    let target = settings.rel_tol * b_norm;

    // restart from the true residual if the recurrence drifted
    for _restart in 0..4 {
        for ((zi, ri), di) in z.iter_mut().zip(&r).zip(&inv_diag) {
            *zi = ri * di;
        }
        if periodic {
            remove_mean(&mut z);
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        let mut r_norm = dot(&r, &r).sqrt();
        while r_norm > target && iterations < settings.max_iter {
            a.apply(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            let mut r_sum = 0.0;
            for k in 0..len {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
                r_sum += r[k];
            }
            let r_shift = if periodic { r_sum / len as f64 } else { 0.0 };
            let (mut z_sum, mut rr, mut rz_next) = (0.0, 0.0, 0.0);
            for k in 0..len {
                r[k] -= r_shift;
                z[k] = r[k] * inv_diag[k];
                z_sum += z[k];
                rr += r[k] * r[k];
                rz_next += r[k] * z[k];
            }
            // r has zero sum now, so shifting z leaves r . z unchanged
            let z_shift = if periodic { z_sum / len as f64 } else { 0.0 };
            let beta = rz_next / rz;
            rz = rz_next;
            for k in 0..len {
                p[k] = (z[k] - z_shift) + beta * p[k];
            }
            r_norm = rr.sqrt();
            iterations += 1;
        }
        if periodic {
            remove_mean(&mut x);
        }
        a.apply(&x, &mut ap);
        for k in 0..len {
            r[k] = b[k] - ap[k];
        }
        if periodic {
            remove_mean(&mut r);
        }
        let true_norm = dot(&r, &r).sqrt();
        if true_norm <= target {
            return Ok((x, SolveReport { iterations, rel_residual: true_norm / b_norm }));
        }
        if iterations >= settings.max_iter {
            return Err(Error::NoConvergence { iterations, residual: true_norm / b_norm, cell: None });
        }
    }
    a.apply(&x, &mut ap);
    let res = b.iter().zip(&ap).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    Err(Error::NoConvergence { iterations, residual: res / b_norm, cell: None })
}

/// Nodal P1 function on the `(n + 1)^2` nodes of the `n x n` grid,
/// node `(i, j)` at `(i / n, j / n)` stored at `j * (n + 1) + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    n: usize,
    values: Vec<f64>,
}

impl NodalField {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != (n + 1) * (n + 1) {
            return Err(Error::GridMismatch(format!("{} values for a {n}x{n} grid", values.len())));
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![0.0; (n + 1) * (n + 1)] }
    }

    /// Embeds interior unknowns, boundary set to zero.
    pub fn from_interior(n: usize, interior: &[f64]) -> Self {
        let mut out = Self::zeros(n);
        let m = n - 1;
        for j in 1..n {
            for i in 1..n {
                out.values[j * (n + 1) + i] = interior[(j - 1) * m + i - 1];
            }
        }
        out
    }

    pub fn from_fn(n: usize, f: impl Fn([f64; 2]) -> f64) -> Self {
        let h = 1.0 / n as f64;
        let values = (0..(n + 1) * (n + 1))
            .map(|k| f([(k % (n + 1)) as f64 * h, (k / (n + 1)) as f64 * h]))
            .collect();
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.n + 1) + i]
    }

    /// Value of the P1 interpolant at `p` in the closed unit square.
    pub fn interpolate(&self, p: [f64; 2]) -> Result<f64> {
        if !(0.0..=1.0).contains(&p[0]) || !(0.0..=1.0).contains(&p[1]) {
            return Err(Error::QueryOutsideDomain(p[0], p[1]));
        }
        let n = self.n as f64;
        let (gx, gy) = (p[0] * n, p[1] * n);
        let i = (gx.floor() as usize).min(self.n - 1);
        let j = (gy.floor() as usize).min(self.n - 1);
        let (s, t) = (gx - i as f64, gy - j as f64);
        let u00 = self.at(i, j);
        let u10 = self.at(i + 1, j);
        let u11 = self.at(i + 1, j + 1);
        let u01 = self.at(i, j + 1);
        Ok(if s >= t {
            u00 + s * (u10 - u00) + t * (u11 - u10)
        } else {
            u00 + t * (u01 - u00) + s * (u11 - u01)
        })
    }

    /// Values at the nodes of the `n / factor` grid (injection).
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || self.n % factor != 0 {
            return Err(Error::GridMismatch(format!("{} is not a multiple of {factor}", self.n)));
        }
        let m = self.n / factor;
        let values = (0..(m + 1) * (m + 1))
            .map(|k| self.at((k % (m + 1)) * factor, (k / (m + 1)) * factor))
            .collect();
        Ok(Self { n: m, values })
    }
}

/// Assembles and solves the Dirichlet problem with zero boundary values.
pub fn solve_dirichlet(
    n: usize,
    coeff: &[Tensor2],
    f: impl Fn([f64; 2]) -> f64,
) -> Result<(NodalField, SolveReport)> {
    let mesh = CartesianP1Mesh::new(n)?;
    let system = assemble_dirichlet(&mesh, coeff, f)?;
    let (x, report) = solve_spd(&system, CgSettings::for_grid(n))?;
    Ok((NodalField::from_interior(n, &x), report))
}

fn check_samples(samples: &[f64], nc: usize) -> Result<()> {
    if nc < 2 || samples.len() != nc * nc {
        return Err(Error::GridMismatch(format!("{} samples for a {nc}x{nc} cell grid", samples.len())));
    }
    if let Some(k) = samples.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::NonpositiveCoefficient {
            x: ((k % nc) as f64 + 0.5) / nc as f64,
            value: samples[k],
        });
    }
    Ok(())
}

/// Periodic zero-mean corrector `w_dir` (0 for `e_1`, 1 for `e_2`) on the
/// `nc x nc` torus; node `(i, j)` at `(i / nc, j / nc)`.
pub fn solve_cell(samples: &[f64], nc: usize, dir: usize) -> Result<Vec<f64>> {
    check_samples(samples, nc)?;
    if dir > 1 {
        return Err(Error::Config(format!("direction must be 0 or 1, got {dir}")));
    }
    let system = assemble_cell(samples, nc, dir);
    let (mut w, _) = solve_spd(&system, CgSettings::for_grid(nc))?;
    remove_mean(&mut w);
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTensor {
    /// Symmetrised tensor.
    pub tensor: Tensor2,
    /// `|A12 - A21|` before symmetrisation.
    pub asymmetry: f64,
}

/// `A_ij = int_Y e_i . a (grad w_j + e_j)`, symmetrised and checked
/// against the harmonic and arithmetic means of the samples.
pub fn averaged_tensor(samples: &[f64], nc: usize, w1: &[f64], w2: &[f64]) -> Result<EffectiveTensor> {
    check_samples(samples, nc)?;
    if w1.len() != nc * nc || w2.len() != nc * nc {
        return Err(Error::GridMismatch("cell solutions do not match the sample grid".into()));
    }
    let h = 1.0 / nc as f64;
    let wrap = |v: isize| v.rem_euclid(nc as isize) as usize;
    let mut acc = [[0.0f64; 2]; 2];
    for sj in 0..nc as isize {
        for si in 0..nc as isize {
            let a = samples[sj as usize * nc + si as usize];
            for (corners, grads) in &TRIANGLES {
                let mut g = [[0.0f64; 2]; 2];
                for p in 0..3 {
                    let node = wrap(sj + corners[p].1) * nc + wrap(si + corners[p].0);
                    for (col, w) in [w1, w2].iter().enumerate() {
                        g[col][0] += w[node] * grads[p][0];
                        g[col][1] += w[node] * grads[p][1];
                    }
                }
                // |T| grad w = (h / 2) * sum w g_p
                for col in 0..2 {
                    for row in 0..2 {
                        acc[row][col] += a * 0.5 * h * g[col][row];
                    }
                }
            }
        }
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let harmonic = samples.len() as f64 / samples.iter().map(|v| 1.0 / v).sum::<f64>();
    let raw = Tensor2 {
        a11: acc[0][0] + mean,
        a12: acc[0][1],
        a21: acc[1][0],
        a22: acc[1][1] + mean,
    };
    let tensor = raw.symmetrized();
    let (lo, hi) = tensor.eigenvalues();
    let (lower, upper) = (harmonic * (1.0 - 1e-6), mean * (1.0 + 1e-6));
    for eigenvalue in [lo, hi] {
        if eigenvalue < lower || eigenvalue > upper {
            return Err(Error::BoundsViolation { eigenvalue, lower: harmonic, upper: mean });
        }
    }
    Ok(EffectiveTensor { tensor, asymmetry: (raw.a12 - raw.a21).abs() })
}

/// Both cell solutions and the effective tensor of one window.
#[derive(Debug, Clone)]
pub struct CellSolutionPair {
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub effective: EffectiveTensor,
}

pub fn solve_cell_pair(samples: &[f64], nc: usize) -> Result<CellSolutionPair> {
    let w1 = solve_cell(samples, nc, 0)?;
    let w2 = solve_cell(samples, nc, 1)?;
    let effective = averaged_tensor(samples, nc, &w1, &w2)?;
    Ok(CellSolutionPair { w1, w2, effective })
}
