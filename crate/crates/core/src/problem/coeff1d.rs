use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::ByteStreamRng;

/// Extended 1D domain on which the coefficient is known.
pub const DOMAIN_1D: (f64, f64) = (-1.0, 2.0);

const BAND_START: f64 = 0.25;
const BAND_END: f64 = 0.75;

/// Oscillation intensity of the 1D random coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case1d {
    A1,
    A2,
    A3,
}

impl Case1d {
    /// Mean interval width of the oscillating band.
    pub fn eps(self) -> f64 {
        match self {
            Case1d::A1 => 0.004,
            Case1d::A2 => 0.001,
            Case1d::A3 => 0.000_25,
        }
    }
}

impl FromStr for Case1d {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a1" => Ok(Case1d::A1),
            "a2" => Ok(Case1d::A2),
            "a3" => Ok(Case1d::A3),
            _ => Err(Error::Config(format!("unknown 1D coefficient case {s:?}"))),
        }
    }
}

impl fmt::Display for Case1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case1d::A1 => "a1",
            Case1d::A2 => "a2",
            Case1d::A3 => "a3",
        };
        f.write_str(s)
    }
}

/// Piecewise-constant coefficient on (-1, 2).
///
/// Stored as a full segment list: `edges[0] = -1`, `edges[last] = 2` and
/// `values[s]` holds on `[edges[s], edges[s + 1])`. The first and last
/// segments are the constant outer value 1 for generated fields.
#[derive(Debug, Clone)]
pub struct PiecewiseConstantCoeff1D {
    edges: Vec<f64>,
    values: Vec<f64>,
    /// `inv_prefix[s]` = integral of 1/a from -1 to `edges[s]`.
    inv_prefix: Vec<f64>,
}

impl PiecewiseConstantCoeff1D {
    /// Draws the random band: `x_1 = 1/4`,
    /// `x_{i+1} = x_i + eps (0.1 + 4 xi_{2i-1}) / 2.1`, value
    /// `0.001 + xi_{2i}` on `[x_i, x_{i+1})`, stopping once `x_M >= 3/4`.
    pub fn generate(eps: f64, rng: &mut ByteStreamRng) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Config(format!("interval scale must be positive, got {eps}")));
        }
        let mut breaks = vec![BAND_START];
        let mut values = Vec::new();
        let mut x = BAND_START;
        while x < BAND_END {
            let width_xi = rng.next_xi()?;
            let value_xi = rng.next_xi()?;
            x += eps * (0.1 + 4.0 * width_xi) / 2.1;
            breaks.push(x);
            values.push(0.001 + value_xi);
        }
        Self::from_band(&breaks, &values)
    }

    pub fn build(case: Case1d, rng: &mut ByteStreamRng) -> Result<Self> {
        Self::generate(case.eps(), rng)
    }

    /// Band `[breaks[0], breaks[last])` with `values[i]` on
    /// `[breaks[i], breaks[i + 1])`, and 1 elsewhere in (-1, 2).
    pub fn from_band(breaks: &[f64], values: &[f64]) -> Result<Self> {
        if breaks.len() != values.len() + 1 {
            return Err(Error::Config(format!(
                "{} breakpoints need {} values, got {}",
                breaks.len(),
                breaks.len().saturating_sub(1),
                values.len()
            )));
        }
        let mut edges = Vec::with_capacity(breaks.len() + 2);
        let mut vals = Vec::with_capacity(values.len() + 2);
        edges.push(DOMAIN_1D.0);
        vals.push(1.0);
        edges.extend_from_slice(breaks);
        vals.extend_from_slice(values);
        vals.push(1.0);
        edges.push(DOMAIN_1D.1);
        Self::from_segments(edges, vals)
    }

    /// Constant coefficient on the whole extended domain.
    pub fn constant(value: f64) -> Result<Self> {
        Self::from_segments(vec![DOMAIN_1D.0, DOMAIN_1D.1], vec![value])
    }

    fn from_segments(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("segment edges must be strictly increasing".into()));
        }
        if edges[0] != DOMAIN_1D.0 || *edges.last().unwrap() != DOMAIN_1D.1 {
            return Err(Error::Config("segments must cover (-1, 2)".into()));
        }
        if let Some((s, &v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonpositiveCoefficient { x: edges[s], value: v });
        }
        let mut inv_prefix = Vec::with_capacity(edges.len());
        let mut acc = 0.0;
        inv_prefix.push(acc);
        for (s, v) in values.iter().enumerate() {
            acc += (edges[s + 1] - edges[s]) / v;
            inv_prefix.push(acc);
        }
        Ok(Self { edges, values, inv_prefix })
    }

    /// Breakpoints `x_1 < ... < x_M` of the oscillating band.
    pub fn breakpoints(&self) -> &[f64] {
        &self.edges[1..self.edges.len() - 1]
    }

    /// Values on the band intervals `[x_i, x_{i+1})`.
    pub fn band_values(&self) -> &[f64] {
        &self.values[1..self.values.len() - 1]
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of the segment containing `x` (half-open, clamped to the ends).
    fn segment(&self, x: f64) -> usize {
        let idx = self.edges.partition_point(|&e| e <= x);
        idx.clamp(1, self.values.len()) - 1
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > DOMAIN_1D.0 && x < DOMAIN_1D.1) {
            return Err(Error::OutOfDomain { x, lo: DOMAIN_1D.0, hi: DOMAIN_1D.1 });
        }
        Ok(self.value_at(x))
    }

    /// Unchecked lookup; points beyond the domain take the end values.
    pub fn value_at(&self, x: f64) -> f64 {
        self.values[self.segment(x)]
    }

    /// Integral of 1/a from -1 to `z`, exact for the piecewise-constant field.
    pub fn inverse_primitive(&self, z: f64) -> f64 {
        let s = self.segment(z);
        self.inv_prefix[s] + (z - self.edges[s]) / self.values[s]
    }

    /// Exact integral of 1/a over `[lo, hi]`.
    pub fn inverse_integral(&self, lo: f64, hi: f64) -> f64 {
        self.inverse_primitive(hi) - self.inverse_primitive(lo)
    }

    /// Segments `(start, end, value)` clipped to `[lo, hi]`.
    pub fn segments_in(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let first = self.segment(lo);
        (first..self.values.len())
            .take_while(move |&s| self.edges[s] < hi)
            .map(move |s| (self.edges[s].max(lo), self.edges[s + 1].min(hi), self.values[s]))
            .filter(|(a, b, _)| b > a)
    }

    /// Smallest and largest value on `[lo, hi]`.
    pub fn extrema_in(&self, lo: f64, hi: f64) -> (f64, f64) {
        self.segments_in(lo, hi)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(mn, mx), (_, _, v)| (mn.min(v), mx.max(v)))
    }
}
