use num_traits::Zero;

use super::{
    count_positive_roots, format_rational, half, int, rat, Family, ModelParams, PolyQ, Rational,
};
use crate::error::{Error, Result};

/// Classical Laguerre polynomial `L_n^{(α)}(η)` from the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+α−η) L_k − (k+α) L_{k−1}`.
pub fn laguerre(n: usize, alpha: &Rational) -> PolyQ {
    let mut prev = PolyQ::one();
    if n == 0 {
        return prev;
    }
    let mut cur = PolyQ::from_coeffs(vec![int(1) + alpha, int(-1)]);
    for k in 1..n {
        let kq = int(k as i64);
        let lin = PolyQ::from_coeffs(vec![int(2) * &kq + int(1) + alpha, int(-1)]);
        let next = (&lin * &cur - prev.scale(&(&kq + alpha))).scale(&(kq + int(1)).recip());
        prev = cur;
        cur = next;
    }
    cur
}

/// Raw deforming polynomial `ξ_ℓ(η; g)` without any zero check:
/// L1 → `L_ℓ^{(g+ℓ−3/2)}(−η)`, L2 → `L_ℓ^{(−g−ℓ−1/2)}(η)`.
pub fn xi(family: Family, ell: u32, g: &Rational) -> PolyQ {
    let l = int(ell as i64);
    match family {
        Family::L1 => laguerre(ell as usize, &(g + &l - rat(3, 2))).negate_arg(),
        Family::L2 => laguerre(ell as usize, &(-g - &l - half())),
    }
}

/// Deforming polynomial at `params.g`, rejected if it vanishes anywhere on
/// the open half-line.
pub fn deforming_xi(params: &ModelParams) -> Result<PolyQ> {
    checked_xi(params.family, params.ell, &params.g)
}

/// `(ξ_ℓ(η; g), ξ_ℓ(η; g+1))`, both checked for zeros on the half-line.
pub fn deforming_xi_pair(params: &ModelParams) -> Result<(PolyQ, PolyQ)> {
    let (fam, ell, g) = (params.family, params.ell, &params.g);
    Ok((
        checked_xi(fam, ell, g)?,
        checked_xi(fam, ell, &(g + int(1)))?,
    ))
}

pub(crate) fn checked_xi(family: Family, ell: u32, g: &Rational) -> Result<PolyQ> {
    let p = xi(family, ell, g);
    let roots = count_positive_roots(&p);
    if roots > 0 {
        return Err(Error::SingularDeformation {
            name: format!("xi_{ell}(eta; g={}) [{family}]", format_rational(g)),
            roots,
        });
    }
    Ok(p)
}

/// Exceptional polynomial `P_{ℓ,n}(η; g)` of degree `ℓ+n`, written as a
/// bilinear combination of deforming and classical Laguerre polynomials.
pub fn exceptional_p(params: &ModelParams, n: usize) -> Result<PolyQ> {
    let (fam, ell, g) = (params.family, params.ell, &params.g);
    let (xi_g, xi_g1) = deforming_xi_pair(params)?;
    let l = int(ell as i64);
    Ok(match fam {
        Family::L1 => {
            // P_n(η; g+ℓ−1) = L_n^{(g+ℓ−3/2)}
            let p = laguerre(n, &(g + &l - rat(3, 2)));
            &xi_g1 * &p - &xi_g * &p.derivative()
        }
        Family::L2 => {
            let pref = int(n as i64) + g + half();
            if pref.is_zero() {
                return Err(Error::ParameterRange(format!(
                    "n + g + 1/2 vanishes for n = {n}, g = {}",
                    format_rational(g)
                )));
            }
            // P_n(η; g+ℓ+1) = L_n^{(g+ℓ+1/2)}
            let p = laguerre(n, &(g + &l + half()));
            let a = (&xi_g1 * &p).scale(&(g + half()));
            let b = (&xi_g * &p.derivative()).shift(1);
            (a + b).scale(&pref.recip())
        }
    })
}
