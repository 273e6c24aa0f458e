use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ratfn::{PreparedRatFn, RatFn};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_checked, tail_end};
use crate::polycore::{format_rational, parse_rational, to_f64, PolyQ, Rational};

/// `f(x) = C · exp(−a·ωx²/2) · x^p · N(η)/D(η)` with `η = ωx²`.
///
/// The representation is kept canonical: `N` and `D` carry no factor of `η`
/// (any such factor is absorbed into `p` and `C`), so `p` is the exact
/// exponent of the leading behaviour at the origin.
#[derive(Clone, Debug)]
pub struct StructuredFn {
    c: f64,
    a: i32,
    p: Rational,
    r: RatFn,
    omega: f64,
    p_f64: f64,
    prepared: PreparedRatFn,
}

impl StructuredFn {
    pub fn new(c: f64, a: i32, p: Rational, r: RatFn, omega: f64) -> Self {
        let (mut c, mut p, mut r) = (c, p, r);
        if let Some(v) = r.valuation().filter(|&v| v != 0) {
            let eta_v = PolyQ::monomial(Rational::one(), v.unsigned_abs() as usize);
            r = if v > 0 {
                RatFn::new(r.num().div_rem(&eta_v).0, r.den().clone())
            } else {
                RatFn::new(r.num().clone(), r.den().div_rem(&eta_v).0)
            };
            // η^v x^p = ω^v x^{p+2v}
            p += Rational::from_integer((2 * v).into());
            c *= omega.powi(v as i32);
        }
        if r.is_zero() {
            c = 0.0;
        }
        let prepared = r.prepare();
        let p_f64 = to_f64(&p);
        Self {
            c,
            a,
            p,
            r,
            omega,
            p_f64,
            prepared,
        }
    }

    pub fn zero(omega: f64) -> Self {
        Self::new(0.0, 1, Rational::zero(), RatFn::zero(), omega)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn a(&self) -> i32 {
        self.a
    }

    pub fn power(&self) -> &Rational {
        &self.p
    }

    pub fn ratio(&self) -> &RatFn {
        &self.r
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() || self.c == 0.0
    }

    pub fn with_c(&self, c: f64) -> Self {
        Self { c, ..self.clone() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.with_c(self.c * s)
    }

    /// `exp(−aη/2) x^p`, the common envelope.
    fn envelope(&self, x: f64) -> f64 {
        (-0.5 * self.a as f64 * self.omega * x * x + self.p_f64 * x.ln()).exp()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.c * self.envelope(x) * self.prepared.eval(self.omega * x * x)
    }

    /// `N(η)/D(η)` at `x`, without the envelope or `C`.
    pub fn eval_ratio(&self, x: f64) -> f64 {
        self.prepared.eval(self.omega * x * x)
    }

    /// `ln|f(x)|`, usable far beyond the range where `f` underflows.
    pub fn ln_abs(&self, x: f64) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let eta = self.omega * x * x;
        self.c.abs().ln() - 0.5 * self.a as f64 * eta
            + self.p_f64 * x.ln()
            + self.prepared.eval_num(eta).abs().ln()
            - self.prepared.eval_den(eta).abs().ln()
    }

    /// Exact `d/dx`: with `f = C e^{−aη/2} x^p R(η)`,
    /// `f′ = C e^{−aη/2} x^{p−1} [pR + 2ηR′ − aηR]`.
    pub fn derivative(&self) -> Self {
        let r = self.r.scale(&self.p)
            + self
                .r
                .derivative()
                .mul_eta()
                .scale(&Rational::from_integer(2.into()))
            - self
                .r
                .mul_eta()
                .scale(&Rational::from_integer(self.a.into()));
        Self::new(self.c, self.a, &self.p - Rational::one(), r, self.omega)
    }

    /// Same envelope, ratio multiplied by `m`.
    pub fn mul_ratio(&self, m: &RatFn) -> Self {
        Self::new(self.c, self.a, self.p.clone(), &self.r * m, self.omega)
    }

    /// Sign of `f` as `x → 0⁺`.
    pub fn sign_near_zero(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        (self.c.signum() as i32) * self.r.sign_near_zero()
    }

    /// Decides `∫_0^∞ f² dx < ∞` from the structure alone.
    pub fn is_square_integrable(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        // canonical form: f ~ x^p at the origin
        let at_zero = &self.p * Rational::from_integer(2.into()) > -Rational::one();
        let at_inf = match self.a {
            a if a > 0 => true,
            a if a < 0 => false,
            _ => {
                let growth = self.r.degree_at_infinity().unwrap_or(0);
                // x^{p + 2·growth} must decay faster than x^{-1/2}
                &self.p + Rational::from_integer((2 * growth).into())
                    < -Rational::new(1.into(), 2.into())
            }
        };
        at_zero && at_inf
    }

    /// Right end of the numerical support: `f²` has dropped by `e^{-42}`
    /// below its maximum.
    pub fn support_end(&self) -> f64 {
        let step = 0.01 / self.omega.sqrt();
        tail_end(|x| 2.0 * self.ln_abs(x), step, 42.0)
    }

    /// `∫_0^∞ f² dx`.
    pub fn norm_sq(&self) -> Result<f64> {
        if !self.is_square_integrable() {
            return Err(Error::NonNormalizable(format!(
                "a = {}, p = {}",
                self.a,
                format_rational(&self.p)
            )));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let end = self.support_end();
        integrate_checked(|x| self.eval(x).powi(2), end, 1e-12)
    }

    /// Unit L² norm and positive near the origin.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq()?;
        if n == 0.0 {
            return Err(Error::NonNormalizable("zero function".into()));
        }
        let s = self.sign_near_zero() as f64;
        Ok(self.with_c(self.c * s / n.sqrt()))
    }

    /// `Some(k)` when `self = k · other` identically.
    pub fn proportionality(&self, other: &Self) -> Option<f64> {
        if self.a != other.a || self.p != other.p || other.is_zero() {
            return None;
        }
        let q = (&self.r * &other.r.recip()).as_constant()?;
        Some(self.c * to_f64(&q) / other.c)
    }

    pub fn to_record(&self) -> WavefunctionRecord {
        WavefunctionRecord {
            a: self.a,
            p: format_rational(&self.p),
            n: self.r.num().clone(),
            d: self.r.den().clone(),
            c: self.c,
        }
    }

    pub fn from_record(rec: &WavefunctionRecord, omega: f64) -> Result<Self> {
        if rec.d.is_zero() {
            return Err(Error::ParameterRange("zero denominator".into()));
        }
        let p = parse_rational(&rec.p)?;
        Ok(Self::new(
            rec.c,
            rec.a,
            p,
            RatFn::new(rec.n.clone(), rec.d.clone()),
            omega,
        ))
    }
}

/// Serialized form `{a, p, N, D, C}` of a [`StructuredFn`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionRecord {
    pub a: i32,
    pub p: String,
    #[serde(rename = "N")]
    pub n: PolyQ,
    #[serde(rename = "D")]
    pub d: PolyQ,
    #[serde(rename = "C")]
    pub c: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{int, rat};
    use std::f64::consts::PI;

    fn gaussian_power(p: i64, omega: f64) -> StructuredFn {
        StructuredFn::new(1.0, 1, int(p), RatFn::one(), omega)
    }

    #[test]
    fn eta_factors_move_into_the_power() {
        // 3 · x · η² with ω = 2 → 12 x^5
        let f = StructuredFn::new(
            3.0,
            1,
            int(1),
            RatFn::from_poly(PolyQ::from_ints(&[0, 0, 1])),
            2.0,
        );
        assert_eq!(f.power(), &int(5));
        assert_eq!(f.c(), 12.0);
        assert_eq!(f.ratio(), &RatFn::one());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let r = RatFn::new(PolyQ::from_ints(&[2, -1, 1]), PolyQ::from_ints(&[3, 1]));
        let f = StructuredFn::new(0.7, 1, rat(3, 2), r, 1.3);
        let d = f.derivative();
        for &x in &[0.3, 1.0, 2.2] {
            let h = 1e-5;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!((d.eval(x) - fd).abs() < 1e-8 * fd.abs().max(1.0), "{x}");
        }
    }

    #[test]
    fn derivative_of_ground_state_is_exact() {
        // d/dx e^{−x²/2} x = (1 − x²) e^{−x²/2}
        let f = gaussian_power(1, 1.0);
        let d = f.derivative();
        assert_eq!(d.power(), &int(0));
        assert_eq!(d.ratio(), &RatFn::from_poly(PolyQ::from_ints(&[1, -1])));
    }

    #[test]
    fn norm_of_gaussian() {
        // ∫ x² e^{−x²} = √π/4
        let f = gaussian_power(1, 1.0);
        assert!((f.norm_sq().unwrap() - PI.sqrt() / 4.0).abs() < 1e-13);
        let n = f.normalized().unwrap();
        assert!((n.norm_sq().unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn integrability_decisions() {
        assert!(gaussian_power(0, 1.0).is_square_integrable());
        assert!(!StructuredFn::new(1.0, 1, rat(-1, 2), RatFn::one(), 1.0).is_square_integrable());
        assert!(StructuredFn::new(1.0, 1, rat(-1, 4), RatFn::one(), 1.0).is_square_integrable());
        assert!(!StructuredFn::new(1.0, -1, int(2), RatFn::one(), 1.0).is_square_integrable());
        assert!(!StructuredFn::new(1.0, 0, int(-2), RatFn::one(), 1.0).is_square_integrable());
        assert!(matches!(
            StructuredFn::new(1.0, -1, int(2), RatFn::one(), 1.0).norm_sq(),
            Err(Error::NonNormalizable(_))
        ));
    }

    #[test]
    fn normalization_fixes_sign_at_origin() {
        let r = RatFn::from_poly(PolyQ::from_ints(&[-2, 1]));
        let f = StructuredFn::new(5.0, 1, int(1), r, 1.0)
            .normalized()
            .unwrap();
        assert!(f.eval(1e-3) > 0.0);
    }

    #[test]
    fn record_round_trip() {
        let r = RatFn::new(PolyQ::from_ints(&[2, 1]), PolyQ::from_ints(&[3, 1]));
        let f = StructuredFn::new(0.25, 1, rat(5, 2), r, 1.5);
        let json = serde_json::to_string(&f.to_record()).unwrap();
        let rec: WavefunctionRecord = serde_json::from_str(&json).unwrap();
        let g = StructuredFn::from_record(&rec, 1.5).unwrap();
        assert_eq!(g.to_record(), f.to_record());
        assert!(json.contains(r#""p":"5/2""#));
    }

    #[test]
    fn proportional_functions_are_detected() {
        let r = RatFn::new(PolyQ::from_ints(&[2, 1]), PolyQ::from_ints(&[3, 1]));
        let f = StructuredFn::new(1.0, 1, int(1), r.clone(), 1.0);
        let g = StructuredFn::new(2.0, 1, int(1), r.scale(&int(-3)), 1.0);
        assert_eq!(g.proportionality(&f), Some(-6.0));
        assert_eq!(f.proportionality(&gaussian_power(1, 1.0)), None);
    }
}
