//! Floating-coefficient counterparts of the exact constructions, for
//! couplings `g` that are not rational.
//!
//! Lower trust than the exact path: coefficients are rounded and evaluation
//! happens in the monomial basis. Only used for evaluation-level checks at
//! small degree.

use super::Family;

/// Polynomial in `η` with `f64` coefficients (index = power).
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly(pub Vec<f64>);

impl FloatPoly {
    pub fn one() -> Self {
        FloatPoly(vec![1.0])
    }

    pub fn eval(&self, eta: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * eta + c)
    }

    pub fn derivative(&self) -> Self {
        FloatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn negate_arg(&self) -> Self {
        FloatPoly(
            self.0
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    pub fn mul(&self, other: &FloatPoly) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return FloatPoly(vec![]);
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        FloatPoly(out)
    }

    pub fn add(&self, other: &FloatPoly) -> Self {
        let n = self.0.len().max(other.0.len());
        FloatPoly(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&0.0) + other.0.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        FloatPoly(self.0.iter().map(|c| c * s).collect())
    }

    /// Multiplies by `η`.
    pub fn shift(&self) -> Self {
        let mut v = vec![0.0];
        v.extend_from_slice(&self.0);
        FloatPoly(v)
    }
}

pub fn laguerre_f64(n: usize, alpha: f64) -> FloatPoly {
    let mut prev = FloatPoly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = FloatPoly(vec![1.0 + alpha, -1.0]);
    for k in 1..n {
        let k = k as f64;
        let lin = FloatPoly(vec![2.0 * k + 1.0 + alpha, -1.0]);
        let next = lin
            .mul(&cur)
            .add(&prev.scale(-(k + alpha)))
            .scale(1.0 / (k + 1.0));
        prev = cur;
        cur = next;
    }
    cur
}

pub fn xi_f64(family: Family, ell: u32, g: f64) -> FloatPoly {
    let l = ell as f64;
    match family {
        Family::L1 => laguerre_f64(ell as usize, g + l - 1.5).negate_arg(),
        Family::L2 => laguerre_f64(ell as usize, -g - l - 0.5),
    }
}

pub fn exceptional_p_f64(family: Family, ell: u32, g: f64, n: usize) -> FloatPoly {
    let l = ell as f64;
    let xi_g = xi_f64(family, ell, g);
    let xi_g1 = xi_f64(family, ell, g + 1.0);
    match family {
        Family::L1 => {
            let p = laguerre_f64(n, g + l - 1.5);
            xi_g1.mul(&p).add(&xi_g.mul(&p.derivative()).scale(-1.0))
        }
        Family::L2 => {
            let p = laguerre_f64(n, g + l + 0.5);
            xi_g1
                .mul(&p)
                .scale(g + 0.5)
                .add(&xi_g.mul(&p.derivative()).shift())
                .scale(1.0 / (n as f64 + g + 0.5))
        }
    }
}
