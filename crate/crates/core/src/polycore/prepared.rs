use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PolyQ, Rational};

/// Integer form `(1/den)·Σ a_k η^k` of a [`PolyQ`] for repeated evaluation.
///
/// Evaluation is exact in big integers at the (exactly representable)
/// floating point argument and rounded once at the end, so high-degree
/// Laguerre-type polynomials do not suffer cancellation in the monomial basis.
#[derive(Clone, Debug)]
pub struct PreparedPoly {
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl PreparedPoly {
    pub fn new(p: &PolyQ) -> Self {
        let den = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self { coeffs, den }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, eta: f64) -> f64 {
        let Some((top, rest)) = self.coeffs.split_last() else {
            return 0.0;
        };
        if rest.is_empty() {
            return ratio_to_f64(top.clone(), self.den.clone());
        }
        if !eta.is_finite() {
            return f64::NAN;
        }
        if eta == 0.0 {
            return ratio_to_f64(self.coeffs[0].clone(), self.den.clone());
        }
        let (m, e) = decompose(eta);
        let deg = rest.len();
        if e >= 0 {
            let x = m << (e as usize);
            let acc = rest.iter().rev().fold(top.clone(), |acc, a| acc * &x + a);
            ratio_to_f64(acc, self.den.clone())
        } else {
            // Σ a_k m^k 2^{-sk} = 2^{-s·deg} Σ a_k m^k 2^{s(deg-k)}
            let s = (-e) as usize;
            let mut acc = top.clone();
            for (i, a) in rest.iter().rev().enumerate() {
                let k = deg - 1 - i;
                acc = acc * &m + (a << (s * (deg - k)));
            }
            ratio_to_f64(acc, &self.den << (s * deg))
        }
    }
}

/// Writes a finite nonzero `x` as `m·2^e` with integer `m`.
fn decompose(x: f64) -> (BigInt, i64) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let tz = mant.trailing_zeros() as i64;
    (BigInt::from(sign * (mant >> tz) as i64), e + tz)
}

fn ratio_to_f64(num: BigInt, den: BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let neg = num.is_negative() != den.is_negative();
    let (n, d) = (num.abs(), den.abs());
    // Scale so the integer quotient carries 64+ significant bits.
    let shift = d.bits() as i64 - n.bits() as i64 + 66;
    let q = if shift >= 0 {
        (n << (shift as usize)) / d
    } else {
        n / (d << ((-shift) as usize))
    };
    let v = ldexp(q.to_f64().unwrap_or(f64::INFINITY), -shift);
    if neg {
        -v
    } else {
        v
    }
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl From<&PolyQ> for PreparedPoly {
    fn from(p: &PolyQ) -> Self {
        Self::new(p)
    }
}

/// Exact conversion of a finite `f64` into a rational.
pub(crate) fn f64_to_rational(x: f64) -> Rational {
    if x == 0.0 {
        return Rational::zero();
    }
    let (m, e) = decompose(x);
    if e >= 0 {
        Rational::from_integer(m << (e as usize))
    } else {
        Rational::new(m, BigInt::one() << ((-e) as usize))
    }
}
