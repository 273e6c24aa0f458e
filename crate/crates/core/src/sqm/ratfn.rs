use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::polycore::{PolyQ, PreparedPoly, Rational};

/// Reduced rational function `num(η) / den(η)`.
///
/// Invariants: `gcd(num, den) = 1`, `den` is monic and never zero; the zero
/// function is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFn {
    num: PolyQ,
    den: PolyQ,
}

impl RatFn {
    pub fn new(num: PolyQ, den: PolyQ) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().recip();
        Self {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: PolyQ::zero(),
            den: PolyQ::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(PolyQ::one())
    }

    pub fn from_poly(p: PolyQ) -> Self {
        Self {
            num: p,
            den: PolyQ::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(PolyQ::constant(c))
    }

    pub fn eta() -> Self {
        Self::from_poly(PolyQ::eta())
    }

    pub fn num(&self) -> &PolyQ {
        &self.num
    }

    pub fn den(&self) -> &PolyQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), Some(0)) => Some(self.num.coeff(0) / self.den.coeff(0)),
            _ => None,
        }
    }

    /// d/dη by the quotient rule.
    pub fn derivative(&self) -> Self {
        let n = &self.num.derivative() * &self.den - &self.num * &self.den.derivative();
        Self::new(n, &self.den * &self.den)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Multiplies by `η`.
    pub fn mul_eta(&self) -> Self {
        Self::new(self.num.shift(1), self.den.clone())
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, eta: &Rational) -> Rational {
        self.num.eval(eta) / self.den.eval(eta)
    }

    pub fn prepare(&self) -> PreparedRatFn {
        PreparedRatFn {
            num: self.num.prepare(),
            den: self.den.prepare(),
        }
    }

    /// Sign as `η → 0⁺`.
    pub fn sign_near_zero(&self) -> i32 {
        self.num.sign_near_zero() * self.den.sign_near_zero()
    }

    /// Order of the zero (positive) or pole (negative) at `η = 0`.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        Some(vn - self.den.valuation().unwrap_or(0) as i64)
    }

    /// `deg num − deg den`, the growth exponent in `η` at infinity.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap_or(0) as i64)
    }
}

/// Floating point evaluator for a fixed [`RatFn`].
#[derive(Clone, Debug)]
pub struct PreparedRatFn {
    num: PreparedPoly,
    den: PreparedPoly,
}

impl PreparedRatFn {
    pub fn eval(&self, eta: f64) -> f64 {
        self.num.eval(eta) / self.den.eval(eta)
    }

    pub fn eval_num(&self, eta: f64) -> f64 {
        self.num.eval(eta)
    }

    pub fn eval_den(&self, eta: f64) -> f64 {
        self.den.eval(eta)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFn::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: &RatFn) -> RatFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl From<PolyQ> for RatFn {
    fn from(p: PolyQ) -> Self {
        Self::from_poly(p)
    }
}

impl One for RatFn {
    fn one() -> Self {
        RatFn::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let f = PolyQ::from_ints(&[1, 1]);
        let r = RatFn::new(
            &f * &PolyQ::from_ints(&[3, 0, 1]),
            (&f * &PolyQ::from_ints(&[2, 4])).scale(&int(3)),
        );
        assert_eq!(r.den(), &PolyQ::from_coeffs(vec![rat(1, 2), int(1)]));
        assert_eq!(
            r.num(),
            &PolyQ::from_coeffs(vec![rat(1, 4), int(0), rat(1, 12)])
        );
    }

    #[test]
    fn derivative_of_inverse() {
        // d/dη 1/(1+η) = −1/(1+η)²
        let r = RatFn::new(PolyQ::one(), PolyQ::from_ints(&[1, 1]));
        let d = r.derivative();
        assert_eq!(
            d,
            RatFn::new(PolyQ::from_ints(&[-1]), PolyQ::from_ints(&[1, 2, 1]))
        );
    }

    fn small_ratfn() -> impl Strategy<Value = RatFn> {
        let poly = prop::collection::vec(-6i64..6, 1..4).prop_map(|c| PolyQ::from_ints(&c));
        (poly.clone(), poly).prop_filter_map("zero den", |(n, d)| {
            // keep denominators free of roots at small positive integers
            if d.is_zero() || (1..6).any(|k| d.eval(&int(k)) == int(0)) || d.coeff(0) == int(0) {
                None
            } else {
                Some(RatFn::new(n, d))
            }
        })
    }

    proptest! {
        #[test]
        fn field_ops_agree_with_pointwise_values(a in small_ratfn(), b in small_ratfn(), k in 1i64..6) {
            let x = int(k);
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!(&a - &a, RatFn::zero());
            prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
        }
    }
}
