use num_traits::{One, Zero};
use serde::Serialize;

use super::ratfn::RatFn;
use super::structured::StructuredFn;
use crate::error::{Error, Result};
use crate::polycore::{
    count_positive_roots, deforming_xi, deforming_xi_pair, format_rational, int, to_f64, Family,
    ModelParams, PolyQ, Rational,
};

/// `W(x) = gauss·η/2 + b·ln x + Σ sᵢ ln ξᵢ(η)`, `η = ωx²`.
#[derive(Clone, Debug)]
pub struct Prepotential {
    gauss: i32,
    power: Rational,
    terms: Vec<(i32, PolyQ)>,
    omega: f64,
}

impl Prepotential {
    /// Fails if any `ξᵢ` vanishes on `[0, ∞)`.
    pub fn new(gauss: i32, power: Rational, terms: Vec<(i32, PolyQ)>, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::ParameterRange(format!(
                "omega must be positive, got {omega}"
            )));
        }
        for (i, (_, xi)) in terms.iter().enumerate() {
            let roots = count_positive_roots(xi) + usize::from(xi.coeff(0).is_zero());
            if roots > 0 {
                return Err(Error::SingularDeformation {
                    name: format!("log term {i}: {xi}"),
                    roots,
                });
            }
        }
        // constant factors do not contribute to W′
        let terms = terms
            .into_iter()
            .filter(|(_, xi)| xi.degree() != Some(0))
            .collect();
        Ok(Self {
            gauss,
            power,
            terms,
            omega,
        })
    }

    pub fn gauss(&self) -> i32 {
        self.gauss
    }

    pub fn power(&self) -> &Rational {
        &self.power
    }

    pub fn terms(&self) -> &[(i32, PolyQ)] {
        &self.terms
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `Q(η) = x·W′(x) = gauss·η + b + 2η Σ sᵢ ξᵢ′/ξᵢ`.
    pub fn derivative_q(&self) -> RatFn {
        let mut q = RatFn::from_poly(PolyQ::from_coeffs(vec![
            self.power.clone(),
            int(self.gauss as i64),
        ]));
        for (s, xi) in &self.terms {
            let log_d = RatFn::new(xi.derivative(), xi.clone())
                .mul_eta()
                .scale(&int(2 * *s as i64));
            q = q + log_d;
        }
        q
    }

    /// `W′(x)`.
    pub fn derivative_eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::OutsideDomain(x));
        }
        Ok(self.derivative_q().prepare().eval(self.omega * x * x) / x)
    }

    /// `e^{W}` as a structured function with unit prefactor.
    pub fn exp(&self) -> StructuredFn {
        let mut r = RatFn::one();
        for (s, xi) in &self.terms {
            let f = RatFn::from_poly(xi.clone());
            r = if *s > 0 { &r * &f } else { &r * &f.recip() };
        }
        StructuredFn::new(1.0, -self.gauss, self.power.clone(), r, self.omega)
    }

    /// Integer-exponent product, `e^{kW}`.
    pub fn exp_k(&self, k: i32) -> StructuredFn {
        let mut r = RatFn::one();
        for (s, xi) in &self.terms {
            let f = RatFn::from_poly(xi.pow((k * s).unsigned_abs()));
            r = if k * s > 0 { &r * &f } else { &r * &f.recip() };
        }
        StructuredFn::new(
            1.0,
            -k * self.gauss,
            &self.power * int(k as i64),
            r,
            self.omega,
        )
    }

    /// `W(x)` itself (up to the additive constant of the log terms).
    pub fn eval(&self, x: f64) -> f64 {
        let eta = self.omega * x * x;
        let mut w = 0.5 * self.gauss as f64 * eta + to_f64(&self.power) * x.ln();
        for (s, xi) in &self.terms {
            w += *s as f64 * xi.prepare().eval(eta).abs().ln();
        }
        w
    }

    /// `e^{W}` is normalizable on the half-line.
    pub fn ground_state_normalizable(&self) -> bool {
        self.exp().is_square_integrable()
    }

    pub fn describe(&self) -> PrepotentialRecord {
        PrepotentialRecord {
            gauss: self.gauss,
            power: format_rational(&self.power),
            log_terms: self.terms.iter().map(|(s, p)| (*s, p.clone())).collect(),
        }
    }
}

/// Serialized `{gauss, power, log_terms}` description of a prepotential.
#[derive(Clone, Debug, Serialize)]
pub struct PrepotentialRecord {
    pub gauss: i32,
    pub power: String,
    pub log_terms: Vec<(i32, PolyQ)>,
}

/// `W_0 = −ωx²/2 + g ln x`, `g > 0`.
pub fn prepotential_w0(g: &Rational, omega: f64) -> Result<Prepotential> {
    if *g <= Rational::zero() {
        return Err(Error::ParameterRange(format!(
            "radial oscillator prepotential requires g > 0, got g = {}",
            format_rational(g)
        )));
    }
    Prepotential::new(-1, g.clone(), vec![], omega)
}

/// Deformed oscillator: `W_ℓ = −ωx²/2 + (g+ℓ) ln x + ln ξ_ℓ(η; g+1)/ξ_ℓ(η; g)`.
pub fn prepotential_wl_deformed(params: &ModelParams) -> Result<Prepotential> {
    let (xi_g, xi_g1) = deforming_xi_pair(params)?;
    let b = &params.g + int(params.ell as i64);
    if b <= Rational::zero() {
        return Err(Error::ParameterRange(format!(
            "deformed oscillator requires g + ell > 0, got {}",
            format_rational(&b)
        )));
    }
    Prepotential::new(-1, b, vec![(1, xi_g1), (-1, xi_g)], params.omega)
}

/// Darboux-Crum prepotentials:
/// L1 `+ωx²/2 + (g+ℓ−1) ln x + ln ξ_ℓ(η; g)`,
/// L2 `−ωx²/2 − (g+ℓ) ln x + ln ξ_ℓ(η; g)`.
pub fn prepotential_wl_dc(params: &ModelParams) -> Result<Prepotential> {
    params.check_dc_range()?;
    let xi = deforming_xi(params)?;
    let gl = &params.g + int(params.ell as i64);
    match params.family {
        Family::L1 => Prepotential::new(1, gl - Rational::one(), vec![(1, xi)], params.omega),
        Family::L2 => Prepotential::new(-1, -gl, vec![(1, xi)], params.omega),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_rational;

    fn params(f: Family, ell: u32, g: &str) -> ModelParams {
        ModelParams::new(f, ell, parse_rational(g).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn w0_derivative() {
        // W0′ = −x + 1/x for g = ω = 1
        let w = prepotential_w0(&int(1), 1.0).unwrap();
        assert_eq!(
            w.derivative_q(),
            RatFn::from_poly(PolyQ::from_ints(&[1, -1]))
        );
        for &x in &[0.5, 1.0, 3.0] {
            assert!((w.derivative_eval(x).unwrap() - (-x + 1.0 / x)).abs() < 1e-14);
        }
        assert!(prepotential_w0(&int(0), 1.0).is_err());
        assert!(w.derivative_eval(0.0).is_err());
    }

    #[test]
    fn undeformed_limit_is_w0() {
        let w = prepotential_wl_deformed(&params(Family::L1, 0, "1")).unwrap();
        let w0 = prepotential_w0(&int(1), 1.0).unwrap();
        assert_eq!(w.derivative_q(), w0.derivative_q());
        assert!(w.terms().is_empty());
    }

    #[test]
    fn deformed_derivative_against_direct_formula() {
        // L1, ℓ=1, g=1: ξ(g) = 3/2 + η, ξ(g+1) = 5/2 + η, so
        // W′ = −x + 2/x + 2x/(5/2 + x²) − 2x/(3/2 + x²)
        let w = prepotential_wl_deformed(&params(Family::L1, 1, "1")).unwrap();
        for &x in &[0.1, 0.7, 1.9, 4.0] {
            let direct = -x + 2.0 / x + 2.0 * x / (2.5 + x * x) - 2.0 * x / (1.5 + x * x);
            assert!((w.derivative_eval(x).unwrap() - direct).abs() < 1e-14 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn dc_signs() {
        let w1 = prepotential_wl_dc(&params(Family::L1, 1, "1")).unwrap();
        assert_eq!(w1.gauss(), 1);
        assert_eq!(w1.power(), &int(1));
        let w2 = prepotential_wl_dc(&params(Family::L2, 1, "1")).unwrap();
        assert_eq!(w2.gauss(), -1);
        assert_eq!(w2.power(), &int(-2));
        let w0 = prepotential_wl_dc(&params(Family::L2, 0, "1")).unwrap();
        assert_eq!(w0.power(), &int(-1));
        assert!(w0.terms().is_empty());
        // L1 DC needs g > 1/2
        assert!(prepotential_wl_dc(&params(Family::L1, 1, "1/2")).is_err());
    }

    #[test]
    fn singular_log_term_is_rejected() {
        let r = Prepotential::new(-1, int(1), vec![(1, PolyQ::from_ints(&[-1, 1]))], 1.0);
        assert!(matches!(
            r,
            Err(Error::SingularDeformation { roots: 1, .. })
        ));
        let r = Prepotential::new(-1, int(1), vec![(1, PolyQ::from_ints(&[0, 1]))], 1.0);
        assert!(r.is_err());
    }

    #[test]
    fn exp_matches_eval() {
        let w = prepotential_wl_deformed(&params(Family::L2, 2, "5/2")).unwrap();
        let e = w.exp();
        let scale = e.eval(1.0) / w.eval(1.0).exp();
        for &x in &[0.3, 1.4, 2.5] {
            assert!((e.eval(x) / w.eval(x).exp() / scale - 1.0).abs() < 1e-13);
        }
        let e2 = w.exp_k(2);
        for &x in &[0.3, 1.4] {
            assert!((e2.eval(x) - e.eval(x).powi(2)).abs() < 1e-13 * e2.eval(x));
        }
        assert!(w.ground_state_normalizable());
        let dc = prepotential_wl_dc(&params(Family::L1, 1, "3/2")).unwrap();
        assert!(!dc.ground_state_normalizable());
    }
}
