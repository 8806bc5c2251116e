use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Right-hand sides of the 1D problem `(a u')' = f` together with their
/// exact primitives `F(x) = int_0^x f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rhs1D {
    /// `50 sin(30 x)`
    F1,
    /// `-4`
    F2,
    /// `4 (1_(1/2,3/4) - 1_(1/4,1/2))`
    F3,
    /// `f = 0`, used for Laplace checks.
    Zero,
}

impl Rhs1D {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Rhs1D::F1 => 50.0 * (30.0 * x).sin(),
            Rhs1D::F2 => -4.0,
            Rhs1D::F3 => {
                if x > 0.5 && x < 0.75 {
                    4.0
                } else if x > 0.25 && x < 0.5 {
                    -4.0
                } else {
                    0.0
                }
            }
            Rhs1D::Zero => 0.0,
        }
    }

    pub fn primitive(self, x: f64) -> f64 {
        match self {
            Rhs1D::F1 => (50.0 / 30.0) * (1.0 - (30.0 * x).cos()),
            Rhs1D::F2 => -4.0 * x,
            Rhs1D::F3 => {
                let down = (x.min(0.5) - 0.25).max(0.0);
                let up = (x.min(0.75) - 0.5).max(0.0);
                4.0 * (up - down)
            }
            Rhs1D::Zero => 0.0,
        }
    }
}

impl FromStr for Rhs1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(Rhs1D::F1),
            "f2" => Ok(Rhs1D::F2),
            "f3" => Ok(Rhs1D::F3),
            "zero" => Ok(Rhs1D::Zero),
            _ => Err(Error::Config(format!("unknown right-hand side {s:?}"))),
        }
    }
}

impl fmt::Display for Rhs1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rhs1D::F1 => "f1",
            Rhs1D::F2 => "f2",
            Rhs1D::F3 => "f3",
            Rhs1D::Zero => "zero",
        };
        f.write_str(s)
    }
}
