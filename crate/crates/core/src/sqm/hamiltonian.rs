use serde::{Deserialize, Serialize};

use super::prepotential::Prepotential;
use super::ratfn::{PreparedRatFn, RatFn};
use super::structured::StructuredFn;
use crate::error::{Error, Result};
use crate::polycore::{int, to_f64, Rational};

/// Which factorization: `+` for `W′² + W″`, `−` for `W′² − W″`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `T_p R = pR + 2ηR′ − aηR`, the ratio part of `d/dx` applied to
/// `e^{−aη/2} x^p R(η)` (the result carries `x^{p−1}`).
pub(crate) fn t_op(r: &RatFn, p: &Rational, a: i32) -> RatFn {
    r.scale(p) + r.derivative().mul_eta().scale(&int(2)) - r.mul_eta().scale(&int(a as i64))
}

/// `−d²/dx² + W′² ± W″ + offset·ω`.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    w: Prepotential,
    sign: Sign,
    offset: Rational,
    u: RatFn,
    prepared: PreparedRatFn,
}

impl Hamiltonian {
    /// `offset` is in units of `ω`.
    pub fn new(w: Prepotential, sign: Sign, offset: Rational) -> Self {
        let q = w.derivative_q();
        // x·W′ = Q(η), x²·W″ = 2ηQ′ − Q
        let w2 = q.derivative().mul_eta().scale(&int(2)) - &q;
        let u = &q * &q + w2.scale(&int(sign.as_i64())) + RatFn::eta().scale(&offset);
        let prepared = u.prepare();
        Self {
            w,
            sign,
            offset,
            u,
            prepared,
        }
    }

    pub fn prepotential(&self) -> &Prepotential {
        &self.w
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn omega(&self) -> f64 {
        self.w.omega()
    }

    /// Same operator with a different additive constant.
    pub fn with_offset(&self, offset: Rational) -> Self {
        Self::new(self.w.clone(), self.sign, offset)
    }

    /// `U(η) = x² V(x)`, an exact rational function of `η`.
    pub fn potential_u(&self) -> &RatFn {
        &self.u
    }

    /// `V(x)` for `x > 0`.
    pub fn potential_eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::OutsideDomain(x));
        }
        Ok(self.potential_unchecked(x))
    }

    pub(crate) fn potential_unchecked(&self, x: f64) -> f64 {
        self.prepared.eval(self.omega() * x * x) / (x * x)
    }

    /// `H f` in closed form.
    pub fn apply(&self, f: &StructuredFn) -> StructuredFn {
        let (p, a) = (f.power(), f.a());
        let d2 = t_op(&t_op(f.ratio(), p, a), &(p - int(1)), a);
        let r = &self.u * f.ratio() - d2;
        StructuredFn::new(f.c(), a, p - int(2), r, f.omega())
    }

    pub fn offset_f64(&self) -> f64 {
        to_f64(&self.offset) * self.omega()
    }
}

/// `A^± f = (±d/dx − W′) f` in closed form.
pub fn susy_apply(sign: Sign, w: &Prepotential, f: &StructuredFn) -> StructuredFn {
    let (p, a) = (f.power(), f.a());
    let q = w.derivative_q();
    let r = t_op(f.ratio(), p, a).scale(&int(sign.as_i64())) - &q * f.ratio();
    StructuredFn::new(f.c(), a, p - int(1), r, f.omega())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::log_linear;
    use crate::polycore::{laguerre, rat};
    use crate::sqm::prepotential::prepotential_w0;

    #[test]
    fn w0_potential_closed_form() {
        // g = 1: V+ = x² − 3, V+(1) = −2
        let h = Hamiltonian::new(prepotential_w0(&int(1), 1.0).unwrap(), Sign::Plus, int(0));
        assert!((h.potential_eval(1.0).unwrap() + 2.0).abs() < 1e-15);
        // g = 2: V+ = x² + 2/x² − 5
        let h = Hamiltonian::new(prepotential_w0(&int(2), 1.0).unwrap(), Sign::Plus, int(0));
        for &x in &[0.2, 1.0, 3.5] {
            let v = x * x + 2.0 / (x * x) - 5.0;
            assert!((h.potential_eval(x).unwrap() - v).abs() < 1e-13 * v.abs().max(1.0));
        }
        assert!(h.potential_eval(0.0).is_err());
        assert!(h.potential_eval(-1.0).is_err());
    }

    #[test]
    fn general_g_omega_oscillator_potential() {
        // ω²x² + g(g−1)/x² − (2g+1)ω
        let (g, om) = (rat(7, 3), 1.7);
        let h = Hamiltonian::new(prepotential_w0(&g, om).unwrap(), Sign::Plus, int(0));
        let gf = 7.0 / 3.0;
        for x in log_linear(1e-3, 6.0, 200) {
            let v = om * om * x * x + gf * (gf - 1.0) / (x * x) - (2.0 * gf + 1.0) * om;
            assert!((h.potential_eval(x).unwrap() - v).abs() < 1e-12 * v.abs().max(1.0));
        }
    }

    #[test]
    fn shape_invariance_is_exact() {
        for g in [rat(1, 2), int(1), rat(5, 2)] {
            let minus = Hamiltonian::new(prepotential_w0(&g, 2.0).unwrap(), Sign::Minus, int(0));
            let plus = Hamiltonian::new(
                prepotential_w0(&(&g + int(1)), 2.0).unwrap(),
                Sign::Plus,
                int(4),
            );
            assert_eq!(minus.potential_u(), plus.potential_u());
        }
    }

    #[test]
    fn annihilates_ground_state() {
        let w = prepotential_w0(&rat(3, 2), 1.0).unwrap();
        assert!(susy_apply(Sign::Plus, &w, &w.exp()).is_zero());
    }

    #[test]
    fn factorized_action_on_first_excited_state() {
        // A⁻A⁺ φ_1 = 4ω φ_1 with φ_1 = e^{−η/2} x^g L_1^{(g−1/2)}(η)
        let (g, om) = (int(2), 1.3);
        let w = prepotential_w0(&g, om).unwrap();
        let phi = StructuredFn::new(
            1.0,
            1,
            g.clone(),
            RatFn::from_poly(laguerre(1, &(&g - rat(1, 2)))),
            om,
        );
        let out = susy_apply(Sign::Minus, &w, &susy_apply(Sign::Plus, &w, &phi));
        assert_eq!(
            out.proportionality(&phi)
                .map(|k| (k / om * 1e12).round() / 1e12),
            Some(4.0)
        );
        let h = Hamiltonian::new(w, Sign::Plus, int(0));
        let hphi = h.apply(&phi);
        assert_eq!(
            hphi.ratio(),
            &RatFn::from_poly(laguerre(1, &rat(3, 2))).scale(&int(4))
        );
    }
}
