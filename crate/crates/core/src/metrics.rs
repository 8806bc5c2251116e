//! Grid transfer and relative error norms on the reference grid.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fem2d::NodalField;

/// Values of the P1 function `v` at the nodes of the `n_ref x n_ref` grid.
pub fn restrict_to_reference(v: &NodalField, n_ref: usize) -> Result<Vec<f64>> {
    if n_ref == 0 || (v.n() > n_ref) {
        return Err(Error::GridMismatch(format!("grid {} is finer than reference {n_ref}", v.n())));
    }
    (0..(n_ref + 1) * (n_ref + 1))
        .map(|q| v.interpolate([(q % (n_ref + 1)) as f64 / n_ref as f64, (q / (n_ref + 1)) as f64 / n_ref as f64]))
        .collect()
}

/// `(E2, Einf)` of `y` against `u_ref`, both at the `(n + 1)^2` reference
/// nodes, each divided by the matching norm of `u_ref`. L2 uses tensor
/// trapezoidal weights.
pub fn relative_errors(y: &[f64], u_ref: &[f64]) -> Result<(f64, f64)> {
    if y.len() != u_ref.len() {
        return Err(Error::GridMismatch(format!("{} vs {} reference values", y.len(), u_ref.len())));
    }
    let side = (y.len() as f64).sqrt().round() as usize;
    if side < 2 || side * side != y.len() {
        return Err(Error::GridMismatch(format!("{} values do not form a square grid", y.len())));
    }
    let weight = |i: usize| if i == 0 || i == side - 1 { 0.5 } else { 1.0 };
    let (mut d2, mut r2, mut dmax, mut rmax) = (0.0, 0.0, 0.0f64, 0.0f64);
    for (q, (a, b)) in y.iter().zip(u_ref).enumerate() {
        let w = weight(q % side) * weight(q / side);
        let d = a - b;
        d2 += w * d * d;
        r2 += w * b * b;
        dmax = dmax.max(d.abs());
        rmax = rmax.max(b.abs());
    }
    if r2 == 0.0 || rmax == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(((d2 / r2).sqrt(), dmax / rmax))
}

/// `c1`: direct solve on the h-grid; `c2`: corrected `U_h`;
/// `c3`: corrected `U_{h,4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    C1,
    C2,
    C3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Norm {
    L2,
    Linf,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Curve::C1 => "c1",
            Curve::C2 => "c2",
            Curve::C3 => "c3",
        })
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L2 => "L2",
            Norm::Linf => "Linf",
        })
    }
}

impl FromStr for Curve {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c1" => Ok(Curve::C1),
            "c2" => Ok(Curve::C2),
            "c3" => Ok(Curve::C3),
            _ => Err(Error::Parse(format!("unknown curve {s:?}"))),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L2" => Ok(Norm::L2),
            "Linf" => Ok(Norm::Linf),
            _ => Err(Error::Parse(format!("unknown norm {s:?}"))),
        }
    }
}

/// One point of an error curve. `value` is NaN when the solve behind it
/// failed; `meta` then carries the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub experiment: String,
    pub h: f64,
    pub curve: Curve,
    pub norm: Norm,
    pub value: f64,
    pub meta: String,
}

impl CurveRecord {
    pub fn failed(&self) -> bool {
        self.value.is_nan()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `experiment,h,curve,norm,value,meta`.
pub fn write_curves_csv(records: &[CurveRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "experiment,h,curve,norm,value,meta")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{:e},{}",
            csv_field(&r.experiment),
            r.h,
            r.curve,
            r.norm,
            r.value,
            csv_field(&r.meta)
        )?;
    }
    Ok(())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
