//! One-dimensional pipeline: window maps of the C and D_k extensions,
//! harmonic-mean averaged coefficient, analytic cell corrector,
//! semi-analytic solves of `(a u')' = f` and the H1 correction.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::problem::{PiecewiseConstantCoeff1D, Rhs1D, DOMAIN_1D};

/// How the averaging window `W_x` follows the point `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionKind {
    /// Window centred at `x`.
    Continuous,
    /// Window centred at the midpoint of the `epsbar / k` cell containing `x`.
    Discrete(usize),
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionKind::Continuous => f.write_str("C"),
            ExtensionKind::Discrete(k) => write!(f, "D{k}"),
        }
    }
}

impl FromStr for ExtensionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown extension {s:?}, expected C or D<k>"));
        match s {
            "C" | "c" => Ok(ExtensionKind::Continuous),
            _ => {
                let k = s.strip_prefix(['D', 'd']).ok_or_else(bad)?;
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(ExtensionKind::Discrete(k))
            }
        }
    }
}

impl serde::Serialize for ExtensionKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ExtensionKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionSpec1D {
    kind: ExtensionKind,
    epsbar: f64,
}

impl ExtensionSpec1D {
    pub fn new(kind: ExtensionKind, epsbar: f64) -> Result<Self> {
        if !(epsbar > 0.0) {
            return Err(Error::Config(format!("averaging size must be positive, got {epsbar}")));
        }
        if let ExtensionKind::Discrete(0) = kind {
            return Err(Error::Config("subdivision k must be >= 1".into()));
        }
        Ok(Self { kind, epsbar })
    }

    pub fn continuous(epsbar: f64) -> Result<Self> {
        Self::new(ExtensionKind::Continuous, epsbar)
    }

    pub fn discrete(k: usize, epsbar: f64) -> Result<Self> {
        Self::new(ExtensionKind::Discrete(k), epsbar)
    }

    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }

    pub fn epsbar(&self) -> f64 {
        self.epsbar
    }

    /// Cell size `epsbar / k` of a discrete extension.
    pub fn cell_size(&self) -> Option<f64> {
        match self.kind {
            ExtensionKind::Continuous => None,
            ExtensionKind::Discrete(k) => Some(self.epsbar / k as f64),
        }
    }

    /// Window centre for `x`.
    pub fn xhat(&self, x: f64) -> f64 {
        match self.cell_size() {
            None => x,
            Some(h) => h * ((x / h).floor() + 0.5),
        }
    }

    /// `W_x = (xhat - epsbar/2, xhat + epsbar/2)`.
    pub fn window(&self, x: f64) -> (f64, f64) {
        let c = self.xhat(x);
        (c - 0.5 * self.epsbar, c + 0.5 * self.epsbar)
    }

    fn checked_window(&self, x: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.window(x);
        if lo < DOMAIN_1D.0 {
            return Err(Error::OutOfDomain { x: lo, lo: DOMAIN_1D.0, hi: DOMAIN_1D.1 });
        }
        if hi > DOMAIN_1D.1 {
            return Err(Error::OutOfDomain { x: hi, lo: DOMAIN_1D.0, hi: DOMAIN_1D.1 });
        }
        Ok((lo, hi))
    }
}

/// Harmonic mean of `a` over `W_x`, summed exactly over the segments.
pub fn averaged_coeff_1d(a: &PiecewiseConstantCoeff1D, spec: &ExtensionSpec1D, x: f64) -> Result<f64> {
    let (lo, hi) = spec.checked_window(x)?;
    Ok(spec.epsbar / a.inverse_integral(lo, hi))
}

/// `w(x, x / epsbar)` for the periodic cell problem built on `W_x`,
/// normalised to zero mean over the period.
pub fn cell_corrector_1d(a: &PiecewiseConstantCoeff1D, spec: &ExtensionSpec1D, x: f64) -> Result<f64> {
    let (lo, hi) = spec.checked_window(x)?;
    let eps = spec.epsbar;
    let harmonic = eps / a.inverse_integral(lo, hi);

    // integral over the window of G(z) - G(lo), G a primitive of 1/a
    let mut g = 0.0;
    let mut area = 0.0;
    for (s0, s1, v) in a.segments_in(lo, hi) {
        let len = s1 - s0;
        area += g * len + 0.5 * len * len / v;
        g += len / v;
    }
    let mean = (harmonic * area - 0.5 * eps * eps) / (eps * eps);
    Ok((harmonic * a.inverse_integral(lo, x) - (x - lo)) / eps - mean)
}

/// Conductivity as seen by the semi-analytic solver.
pub trait Conductivity1d {
    fn value(&self, x: f64) -> f64;

    /// Integral of `1 / a` over `[lo, hi]`; midpoint rule unless the field
    /// can do better.
    fn inverse_integral(&self, lo: f64, hi: f64) -> f64 {
        (hi - lo) / self.value(0.5 * (lo + hi))
    }
}

impl Conductivity1d for PiecewiseConstantCoeff1D {
    fn value(&self, x: f64) -> f64 {
        self.value_at(x)
    }

    fn inverse_integral(&self, lo: f64, hi: f64) -> f64 {
        PiecewiseConstantCoeff1D::inverse_integral(self, lo, hi)
    }
}

/// Conductivity given pointwise by a closure.
pub struct FnConductivity<F>(pub F);

impl<F: Fn(f64) -> f64> Conductivity1d for FnConductivity<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// Averaged coefficient `A(.)` of one extension together with access to
/// its cell correctors.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveField1D<'a> {
    coeff: &'a PiecewiseConstantCoeff1D,
    spec: ExtensionSpec1D,
}

impl<'a> EffectiveField1D<'a> {
    /// Checks that every window for `x` in [0, 1] fits in (-1, 2).
    pub fn new(coeff: &'a PiecewiseConstantCoeff1D, spec: ExtensionSpec1D) -> Result<Self> {
        spec.checked_window(0.0)?;
        spec.checked_window(1.0)?;
        Ok(Self { coeff, spec })
    }

    pub fn spec(&self) -> &ExtensionSpec1D {
        &self.spec
    }

    pub fn coeff(&self) -> &PiecewiseConstantCoeff1D {
        self.coeff
    }

    pub fn averaged(&self, x: f64) -> Result<f64> {
        averaged_coeff_1d(self.coeff, &self.spec, x)
    }

    pub fn corrector(&self, x: f64) -> Result<f64> {
        cell_corrector_1d(self.coeff, &self.spec, x)
    }

    fn harmonic(&self, x: f64) -> f64 {
        let (lo, hi) = self.spec.window(x);
        self.spec.epsbar / self.coeff.inverse_integral(lo, hi)
    }
}

impl Conductivity1d for EffectiveField1D<'_> {
    fn value(&self, x: f64) -> f64 {
        self.harmonic(x)
    }

    /// Exact for D_k fields, which are constant on each `epsbar / k` cell.
    fn inverse_integral(&self, lo: f64, hi: f64) -> f64 {
        let Some(h) = self.spec.cell_size() else {
            return (hi - lo) / self.harmonic(0.5 * (lo + hi));
        };
        let mut acc = 0.0;
        let mut start = lo;
        while start < hi {
            let cell = (start / h).floor();
            let end = ((cell + 1.0) * h).min(hi);
            // guard against `end == start` from rounding at a cell edge
            let end = if end <= start { hi.min(start + h) } else { end };
            acc += (end - start) / self.harmonic(0.5 * (start + end));
            start = end;
        }
        acc
    }
}

/// Nodal solution on `n` uniform nodes of [0, 1].
#[derive(Debug, Clone)]
pub struct Grid1DSolution {
    pub u: Vec<f64>,
    /// `u'` at the cell midpoints.
    pub du: Vec<f64>,
    /// Constant `C` in `a u' = C + F`.
    pub flux_constant: f64,
}

impl Grid1DSolution {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `u'` at the nodes: mean of the two adjacent midpoint values, the
    /// end nodes copy their single neighbour.
    pub fn nodal_derivative(&self) -> Vec<f64> {
        let m = self.du.len();
        (0..=m)
            .map(|i| match i {
                0 => self.du[0],
                _ if i == m => self.du[m - 1],
                _ => 0.5 * (self.du[i - 1] + self.du[i]),
            })
            .collect()
    }
}

/// Node `i` of an `n`-node uniform grid on [0, 1].
pub fn grid_node(i: usize, n: usize) -> f64 {
    i as f64 / (n - 1) as f64
}

/// Solves `(a u')' = f`, `u(0) = ul`, `u(1) = ur` through
/// `u(x) = ul + C int_0^x 1/a + int_0^x F/a`, accumulating both integrals
/// cell by cell on `n` uniform nodes (`F/a` by the midpoint rule).
pub fn solve_exact_1d(
    a: &impl Conductivity1d,
    rhs: Rhs1D,
    ul: f64,
    ur: f64,
    n: usize,
) -> Result<Grid1DSolution> {
    if n < 2 {
        return Err(Error::DegenerateGrid(format!("need at least 2 nodes, got {n}")));
    }
    let cells = n - 1;
    let mut inv = Vec::with_capacity(cells);
    let mut f_inv = Vec::with_capacity(cells);
    let mut mids = Vec::with_capacity(cells);
    for c in 0..cells {
        let lo = grid_node(c, n);
        let hi = grid_node(c + 1, n);
        let mid = 0.5 * (lo + hi);
        let value = a.value(mid);
        let g = a.inverse_integral(lo, hi);
        if !(value > 0.0) || !(g > 0.0) || !g.is_finite() {
            return Err(Error::NonpositiveCoefficient { x: mid, value });
        }
        inv.push(g);
        f_inv.push(rhs.primitive(mid) * g);
        mids.push((mid, value));
    }
    let total_inv: f64 = inv.iter().sum();
    let total_f_inv: f64 = f_inv.iter().sum();
    let flux = (ur - ul - total_f_inv) / total_inv;

    let mut u = Vec::with_capacity(n);
    let mut acc = ul;
    u.push(acc);
    for (g, fg) in inv.iter().zip(&f_inv) {
        acc += flux * g + fg;
        u.push(acc);
    }
    let du = mids
        .iter()
        .map(|&(x, value)| (flux + rhs.primitive(x)) / value)
        .collect();
    Ok(Grid1DSolution { u, du, flux_constant: flux })
}

/// `U_hat(x) = U(x) + epsbar U'(x) w(x, x / epsbar)` at every node.
pub fn correct_1d(solution: &Grid1DSolution, field: &EffectiveField1D<'_>) -> Result<Vec<f64>> {
    let n = solution.len();
    let eps = field.spec().epsbar();
    let du = solution.nodal_derivative();
    (0..n)
        .map(|i| {
            let w = field.corrector(grid_node(i, n))?;
            Ok(solution.u[i] + eps * du[i] * w)
        })
        .collect()
}

/// Absolute `(L2, Linf)` distance of two nodal functions on [0, 1],
/// L2 by the trapezoidal rule.
pub fn errors_1d(v: &[f64], u: &[f64]) -> Result<(f64, f64)> {
    if v.len() != u.len() {
        return Err(Error::GridMismatch(format!("{} vs {} nodes", v.len(), u.len())));
    }
    if v.len() < 2 {
        return Err(Error::DegenerateGrid("need at least 2 nodes".into()));
    }
    let h = 1.0 / (v.len() - 1) as f64;
    let last = v.len() - 1;
    let mut sq = 0.0;
    let mut max: f64 = 0.0;
    for (i, (a, b)) in v.iter().zip(u).enumerate() {
        let d = a - b;
        let w = if i == 0 || i == last { 0.5 } else { 1.0 };
        sq += w * d * d;
        max = max.max(d.abs());
    }
    Ok(((sq * h).sqrt(), max))
}
