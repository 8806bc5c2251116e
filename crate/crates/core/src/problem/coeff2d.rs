use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::ByteStreamRng;

/// Scales of the five oscillating quotients of the "no scale separation"
/// coefficient.
pub const MINGYUE_SCALES: [f64; 5] = [1.0 / 5.0, 1.0 / 13.0, 1.0 / 17.0, 1.0 / 31.0, 1.0 / 65.0];

/// Approximate `(min, max)` of the sine sum over the unit square, per
/// number of modes. These fix the exponent scale of [`RandomSines`].
const SINE_SUM_EXTREMA: [(usize, f64, f64); 4] = [
    (64, -19.7229, 22.5351),
    (128, -36.1412, 34.124),
    (256, -49.6262, 51.5507),
    (512, -81.8554, 75.7885),
];

/// A scalar coefficient defined on the whole plane.
pub trait Coefficient2d: Sync {
    fn eval(&self, p: [f64; 2]) -> f64;

    /// `n x n` samples at `origin + ((i + 1/2) step, (j + 1/2) step)`,
    /// stored with `i` (the x1 index) fastest.
    fn sample_centers(&self, origin: [f64; 2], step: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let y = origin[1] + (j as f64 + 0.5) * step;
            for i in 0..n {
                out.push(self.eval([origin[0] + (i as f64 + 0.5) * step, y]));
            }
        }
        out
    }

    /// Shortest wavelength present in the field, if known.
    fn finest_wavelength(&self) -> Option<f64> {
        None
    }
}

/// Wraps a closure as a coefficient; handy for manufactured fields.
pub struct FnCoefficient<F>(pub F);

impl<F: Fn([f64; 2]) -> f64 + Sync> Coefficient2d for FnCoefficient<F> {
    fn eval(&self, p: [f64; 2]) -> f64 {
        (self.0)(p)
    }
}

/// `a(x) = 10^(beta S(x))` with
/// `S(x) = sum_i sin(pi i (x1 sin psi_i + x2 cos psi_i + phi_i))`,
/// `psi_i = 2 pi xi_{2i-1}`, `phi_i = 2 xi_{2i}` and
/// `beta = log10(contrast) / (max S - min S)`.
#[derive(Debug, Clone)]
pub struct RandomSines {
    contrast: f64,
    s_min: f64,
    s_max: f64,
    beta: f64,
    /// `(pi i sin psi_i, pi i cos psi_i)`
    wave: Vec<[f64; 2]>,
    /// `pi i phi_i`
    shift: Vec<f64>,
}

impl RandomSines {
    pub fn tabulated_extrema(n_sin: usize) -> Option<(f64, f64)> {
        SINE_SUM_EXTREMA
            .iter()
            .find(|(n, _, _)| *n == n_sin)
            .map(|&(_, lo, hi)| (lo, hi))
    }

    /// Draws `2 n_sin` values from `rng`. The exponent scale uses the
    /// tabulated extrema when `n_sin` is one of 64, 128, 256, 512 and
    /// otherwise the extrema sampled on a 1024 x 1024 grid.
    pub fn from_rng(n_sin: usize, contrast: f64, rng: &mut ByteStreamRng) -> Result<Self> {
        match Self::tabulated_extrema(n_sin) {
            Some((lo, hi)) => Self::with_extrema(n_sin, contrast, lo, hi, rng),
            None => {
                let mut probe = Self::with_extrema(n_sin, contrast, -1.0, 1.0, rng)?;
                let (lo, hi) = probe.estimate_extrema_s(1024);
                probe.set_extrema(lo, hi)?;
                Ok(probe)
            }
        }
    }

    pub fn with_extrema(
        n_sin: usize,
        contrast: f64,
        s_min: f64,
        s_max: f64,
        rng: &mut ByteStreamRng,
    ) -> Result<Self> {
        if n_sin == 0 {
            return Err(Error::Config("need at least one sine mode".into()));
        }
        if !(contrast >= 1.0) {
            return Err(Error::Config(format!("contrast must be >= 1, got {contrast}")));
        }
        rng.require_draws(2 * n_sin)?;
        let mut wave = Vec::with_capacity(n_sin);
        let mut shift = Vec::with_capacity(n_sin);
        for i in 1..=n_sin {
            let psi = 2.0 * PI * rng.next_xi()?;
            let phi = 2.0 * rng.next_xi()?;
            let k = PI * i as f64;
            wave.push([k * psi.sin(), k * psi.cos()]);
            shift.push(k * phi);
        }
        let mut out = Self { contrast, s_min: 0.0, s_max: 0.0, beta: 0.0, wave, shift };
        out.set_extrema(s_min, s_max)?;
        Ok(out)
    }

    fn set_extrema(&mut self, s_min: f64, s_max: f64) -> Result<()> {
        if !(s_max > s_min) {
            return Err(Error::Config(format!("degenerate sine-sum range [{s_min}, {s_max}]")));
        }
        self.s_min = s_min;
        self.s_max = s_max;
        self.beta = self.contrast.log10() / (s_max - s_min);
        Ok(())
    }

    pub fn n_sin(&self) -> usize {
        self.wave.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn contrast(&self) -> f64 {
        self.contrast
    }

    pub fn extrema(&self) -> (f64, f64) {
        (self.s_min, self.s_max)
    }

    pub fn s(&self, p: [f64; 2]) -> f64 {
        self.wave
            .iter()
            .zip(&self.shift)
            .map(|(w, c)| (w[0] * p[0] + w[1] * p[1] + c).sin())
            .sum()
    }

    pub fn grad_s(&self, p: [f64; 2]) -> [f64; 2] {
        self.wave.iter().zip(&self.shift).fold([0.0, 0.0], |g, (w, c)| {
            let d = (w[0] * p[0] + w[1] * p[1] + c).cos();
            [g[0] + w[0] * d, g[1] + w[1] * d]
        })
    }

    /// `S` on an `n x n` lattice `origin + (i, j) * step`, `i` fastest.
    ///
    /// Uses `sin(A + B) = sin A cos B + cos A sin B` with the x1 and x2
    /// phases tabulated once per column and row.
    fn s_lattice(&self, origin: [f64; 2], step: f64, n: usize) -> Vec<f64> {
        let modes = self.wave.len();
        let mut col_sin = vec![0.0; n * modes];
        let mut col_cos = vec![0.0; n * modes];
        for i in 0..n {
            let x = origin[0] + i as f64 * step;
            for (m, w) in self.wave.iter().enumerate() {
                let (s, c) = (w[0] * x).sin_cos();
                col_sin[i * modes + m] = s;
                col_cos[i * modes + m] = c;
            }
        }
        let mut out = Vec::with_capacity(n * n);
        let mut row_sin = vec![0.0; modes];
        let mut row_cos = vec![0.0; modes];
        for j in 0..n {
            let y = origin[1] + j as f64 * step;
            for (m, (w, c)) in self.wave.iter().zip(&self.shift).enumerate() {
                let (s, co) = (w[1] * y + c).sin_cos();
                row_sin[m] = s;
                row_cos[m] = co;
            }
            for i in 0..n {
                let cs = &col_sin[i * modes..(i + 1) * modes];
                let cc = &col_cos[i * modes..(i + 1) * modes];
                let mut acc = 0.0;
                for m in 0..modes {
                    acc += cs[m] * row_cos[m] + cc[m] * row_sin[m];
                }
                out.push(acc);
            }
        }
        out
    }

    /// Min and max of `S` over the `(n + 1)^2` nodes of a uniform grid on
    /// the unit square.
    pub fn estimate_extrema_s(&self, n: usize) -> (f64, f64) {
        let step = 1.0 / n.max(1) as f64;
        self.s_lattice([0.0, 0.0], step, n + 1)
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
    }
}

impl Coefficient2d for RandomSines {
    fn eval(&self, p: [f64; 2]) -> f64 {
        10f64.powf(self.beta * self.s(p))
    }

    fn sample_centers(&self, origin: [f64; 2], step: f64, n: usize) -> Vec<f64> {
        let shifted = [origin[0] + 0.5 * step, origin[1] + 0.5 * step];
        let mut s = self.s_lattice(shifted, step, n);
        for v in &mut s {
            *v = 10f64.powf(self.beta * *v);
        }
        s
    }

    fn finest_wavelength(&self) -> Option<f64> {
        Some(2.0 / self.n_sin() as f64)
    }
}

/// The analytic 2D coefficients of the experiments.
#[derive(Debug, Clone)]
pub enum AnalyticCoeff2D {
    /// Six-term smooth coefficient without scale separation.
    MingYue,
    RandomSines(RandomSines),
    Constant(f64),
}

impl AnalyticCoeff2D {
    fn mingyue(p: [f64; 2]) -> f64 {
        let [x1, x2] = p;
        let tp = 2.0 * PI;
        let e = MINGYUE_SCALES;
        let q1 = (1.1 + (tp * x1 / e[0]).sin()) / (1.1 + (tp * x2 / e[0]).sin());
        let q2 = (1.1 + (tp * x2 / e[1]).sin()) / (1.1 + (tp * x1 / e[1]).cos());
        let q3 = (1.1 + (tp * x1 / e[2]).cos()) / (1.1 + (tp * x2 / e[2]).sin());
        let q4 = (1.1 + (tp * x2 / e[3]).sin()) / (1.1 + (tp * x1 / e[3]).cos());
        let q5 = (1.1 + (tp * x1 / e[4]).cos()) / (1.1 + (tp * x2 / e[4]).sin());
        (q1 + q2 + q3 + q4 + q5 + (4.0 * x1 * x1 * x2 * x2).sin() + 1.0) / 6.0
    }
}

impl Coefficient2d for AnalyticCoeff2D {
    fn eval(&self, p: [f64; 2]) -> f64 {
        match self {
            AnalyticCoeff2D::MingYue => Self::mingyue(p),
            AnalyticCoeff2D::RandomSines(r) => r.eval(p),
            AnalyticCoeff2D::Constant(c) => *c,
        }
    }

    fn sample_centers(&self, origin: [f64; 2], step: f64, n: usize) -> Vec<f64> {
        match self {
            AnalyticCoeff2D::RandomSines(r) => r.sample_centers(origin, step, n),
            AnalyticCoeff2D::Constant(c) => vec![*c; n * n],
            AnalyticCoeff2D::MingYue => {
                let f = FnCoefficient(Self::mingyue);
                f.sample_centers(origin, step, n)
            }
        }
    }

    fn finest_wavelength(&self) -> Option<f64> {
        match self {
            AnalyticCoeff2D::MingYue => Some(MINGYUE_SCALES[4]),
            AnalyticCoeff2D::RandomSines(r) => r.finest_wavelength(),
            AnalyticCoeff2D::Constant(_) => None,
        }
    }
}
