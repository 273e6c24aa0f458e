use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, to_f64, PreparedPoly, Rational};

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[k]` multiplies `η^k`. Trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c·η^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// The identity polynomial `η`.
    pub fn eta() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| super::int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, eta: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * eta + c)
    }

    /// Correctly rounded evaluation at a floating point `η`.
    ///
    /// Prepares the exact integer form on every call; use [`PreparedPoly`]
    /// when evaluating the same polynomial many times.
    pub fn eval_f64(&self, eta: f64) -> f64 {
        PreparedPoly::new(self).eval(eta)
    }

    pub fn prepare(&self) -> PreparedPoly {
        PreparedPoly::new(self)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * super::int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Substitutes `η → −η`, i.e. flips the sign of odd coefficients.
    pub fn negate_arg(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Multiplies by `η^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Polynomial long division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &PolyQ) -> (PolyQ, PolyQ) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (PolyQ::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        (PolyQ::from_coeffs(quot), PolyQ::from_coeffs(rem))
    }

    /// Scales to leading coefficient one. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Index of the lowest nonzero coefficient, i.e. the multiplicity of the
    /// root at `η = 0`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Sign of the polynomial as `η → 0⁺`.
    pub fn sign_near_zero(&self) -> i32 {
        self.valuation()
            .map(|k| super::signum(&self.coeffs[k]))
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// All coefficients strictly positive (Descartes: no positive roots).
    pub fn all_coeffs_positive(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().all(|c| c.is_positive())
    }

    pub fn pow(&self, k: u32) -> PolyQ {
        (0..k).fold(PolyQ::one(), |acc, _| &acc * self)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}·")?;
                    }
                    if k == 1 {
                        f.write_str("η")?;
                    } else {
                        write!(f, "η^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::from_coeffs(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: &PolyQ) -> PolyQ {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<String>,
}

impl Serialize for PolyQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(PolyQ::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn eval_constant_one() {
        let one = PolyQ::one();
        for eta in [-3.0, 0.0, 0.25, 17.0] {
            assert_eq!(one.eval_f64(eta), 1.0);
        }
    }

    #[test]
    fn diff_linear_is_constant() {
        let p = PolyQ::from_coeffs(vec![rat(3, 2), int(1)]);
        assert_eq!(p.derivative(), PolyQ::one());
        assert!(PolyQ::one().derivative().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a = PolyQ::from_ints(&[1, 1]);
        let b = PolyQ::from_ints(&[1, -1]);
        assert_eq!(&a * &b, PolyQ::from_ints(&[1, 0, -1]));
    }

    #[test]
    fn zero_polynomial_is_empty() {
        let z = PolyQ::from_ints(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert!(z.coeffs().is_empty());
        let p = PolyQ::from_ints(&[1, 2]);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn negate_arg_flips_odd_terms() {
        let p = PolyQ::from_ints(&[1, 2, 3, 4]);
        assert_eq!(p.negate_arg(), PolyQ::from_ints(&[1, -2, 3, -4]));
    }

    #[test]
    fn display() {
        let p = PolyQ::from_coeffs(vec![rat(3, 2), int(-1), rat(1, 2)]);
        assert_eq!(p.to_string(), "3/2 - η + 1/2·η^2");
        assert_eq!(PolyQ::zero().to_string(), "0");
    }

    #[test]
    fn json_schema() {
        let p = PolyQ::from_coeffs(vec![rat(5, 2), int(1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":["5/2","1/1"]}"#);
        let zero = serde_json::to_string(&PolyQ::zero()).unwrap();
        assert_eq!(zero, r#"{"coeffs":[]}"#);
        let bad: Result<PolyQ, _> = serde_json::from_str(r#"{"coeffs":["1/0"]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = PolyQ::from_ints(&[1, 1]);
        let a = &f * &PolyQ::from_ints(&[2, 0, 3]);
        let b = &f * &PolyQ::from_ints(&[-5, 7]);
        assert_eq!(a.gcd(&b), f);
    }

    fn small_poly() -> impl Strategy<Value = PolyQ> {
        prop::collection::vec((-20i64..20, 1i64..7), 0..6)
            .prop_map(|v| PolyQ::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn json_round_trip(p in small_poly()) {
            let s = serde_json::to_string(&p).unwrap();
            let back: PolyQ = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree() || r.is_zero());
        }

        #[test]
        fn ring_ops_commute_with_evaluation(a in small_poly(), b in small_poly(), n in -9i64..9, d in 1i64..5) {
            let x = rat(n, d);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            // Leibniz rule, exact
            prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
        }

        #[test]
        fn operation_order_is_irrelevant(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&c * &b));
            prop_assert_eq!(&(&a + &b) * &c, &(&c * &a) + &(&b * &c));
        }
    }
}
