//! Exact rational polynomials in the sinusoidal coordinate `η = ωx²`.
//!
//! Everything in this module is exact: coefficients are reduced big rationals
//! and floating point only appears when a polynomial is evaluated. The
//! classical Laguerre polynomials, the two deforming families `ξ_ℓ` (L1, L2)
//! and the exceptional `X_ℓ` polynomials `P_{ℓ,n}` are all built here.

mod laguerre;
mod poly;
mod prepared;
mod sturm;

pub mod float;

pub use laguerre::{deforming_xi, deforming_xi_pair, exceptional_p, laguerre, xi};
pub use poly::PolyQ;
pub(crate) use prepared::f64_to_rational;
pub use prepared::PreparedPoly;
pub use sturm::{count_positive_roots, sturm_sequence};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced rational number with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` as a reduced rational. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::RationalParse(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Lowest-terms `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn half() -> Rational {
    rat(1, 2)
}

/// The two admissible sets of deforming functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    L1,
    L2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::L1 => f.write_str("L1"),
            Family::L2 => f.write_str("L2"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "L1" => Ok(Family::L1),
            "L2" => Ok(Family::L2),
            other => Err(Error::ParameterRange(format!(
                "unknown family {other:?}, expected L1 or L2"
            ))),
        }
    }
}

/// Identifies one deformed system: family, deformation degree `ℓ`,
/// coupling `g` and frequency `ω`.
///
/// Construction only checks `ω > 0` and the common lower bound `g > -1/2`.
/// The family-specific ranges of the Darboux-Crum prepotentials and the
/// zero-freedom of `ξ_ℓ` are enforced by the constructors that need them.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub family: Family,
    pub ell: u32,
    pub g: Rational,
    pub omega: f64,
}

impl ModelParams {
    pub fn new(family: Family, ell: u32, g: Rational, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::ParameterRange(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if g <= -half() {
            return Err(Error::ParameterRange(format!(
                "g = {} must exceed -1/2",
                format_rational(&g)
            )));
        }
        Ok(Self {
            family,
            ell,
            g,
            omega,
        })
    }

    /// Same system with `g` replaced.
    pub fn with_g(&self, g: Rational) -> Result<Self> {
        Self::new(self.family, self.ell, g, self.omega)
    }

    pub fn g_f64(&self) -> f64 {
        to_f64(&self.g)
    }

    /// Range required by the Darboux-Crum prepotentials: L1 `g > 1/2`,
    /// L2 `g > -1/2`.
    pub fn check_dc_range(&self) -> Result<()> {
        let ok = match self.family {
            Family::L1 => self.g > half(),
            Family::L2 => self.g > -half(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ParameterRange(format!(
                "{} Darboux-Crum prepotential requires g {} , got g = {}",
                self.family,
                match self.family {
                    Family::L1 => "> 1/2",
                    Family::L2 => "> -1/2",
                },
                format_rational(&self.g)
            )))
        }
    }
}

impl Serialize for ModelParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ModelParams", 4)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("g", &format_rational(&self.g))?;
        st.serialize_field("omega", &self.omega)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            family: Family,
            ell: u32,
            g: String,
            omega: f64,
        }
        let raw = Raw::deserialize(d)?;
        let g = parse_rational(&raw.g).map_err(serde::de::Error::custom)?;
        ModelParams::new(raw.family, raw.ell, g, raw.omega).map_err(serde::de::Error::custom)
    }
}

/// Sign of a rational, as -1, 0 or 1.
pub(crate) fn signum(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
