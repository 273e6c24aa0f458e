use serde::Serialize;

use super::eigen::EigenState;
use super::hamiltonian::{t_op, Hamiltonian};
use super::ratfn::RatFn;
use super::structured::StructuredFn;
use crate::polycore::float::{exceptional_p_f64, xi_f64};
use crate::polycore::{int, PolyQ, Rational};
use crate::Family;

/// Pieces of `(H − εω)ψ` after clearing `C e^{−aη/2} x^{p−2}` and the
/// common denominator: kinetic `−ψ″`, potential `Vψ` and energy `εωψ`
/// numerators, and their sum.
#[derive(Clone, Debug)]
pub struct ResidualNumerator {
    pub kinetic: PolyQ,
    pub potential: PolyQ,
    pub energy: PolyQ,
    pub total: PolyQ,
}

impl ResidualNumerator {
    pub fn is_exact_zero(&self) -> bool {
        self.total.is_zero()
    }

    /// `max|coeff(total)| / max|coeff(piece)|`.
    pub fn relative(&self) -> f64 {
        let scale = self
            .kinetic
            .max_abs_coeff()
            .max(self.potential.max_abs_coeff())
            .max(self.energy.max_abs_coeff());
        if scale == 0.0 {
            return 0.0;
        }
        self.total.max_abs_coeff() / scale
    }
}

/// Exact residual numerator of `(H − εω)f`.
pub fn residual_numerator(
    h: &Hamiltonian,
    f: &StructuredFn,
    epsilon: &Rational,
) -> ResidualNumerator {
    let (p, a, r) = (f.power(), f.a(), f.ratio());
    let kin = -t_op(&t_op(r, p, a), &(p - int(1)), a);
    let pot = h.potential_u() * r;
    let en = -r.mul_eta().scale(epsilon);
    // over the product of denominators, unreduced
    let dens = [kin.den(), pot.den(), en.den()];
    let clear = |x: &RatFn, skip: usize| {
        dens.iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .fold(x.num().clone(), |acc, (_, d)| &acc * *d)
    };
    let (k, v, e) = (clear(&kin, 0), clear(&pot, 1), clear(&en, 2));
    let total = &(&k + &v) + &e;
    ResidualNumerator {
        kinetic: k,
        potential: v,
        energy: e,
        total,
    }
}

/// Exact-path residual of a state: `0` exactly when the closed form solves
/// `Hψ = Eψ`, otherwise the relative size of the cleared numerator.
pub fn residual_check(h: &Hamiltonian, state: &EigenState) -> f64 {
    residual_numerator(h, &state.wavefunction, &state.epsilon).relative()
}

/// Floating-path residual on a grid: `max|−ψ″ + Vψ − Eψ| / max(|ψ″| + |Vψ| + |Eψ|)`.
pub fn residual_grid(h: &Hamiltonian, f: &StructuredFn, energy: f64, grid: &[f64]) -> f64 {
    let d2 = f.derivative().derivative();
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for &x in grid {
        let (psi, k) = (f.eval(x), d2.eval(x));
        let v = h.potential_unchecked(x) * psi;
        num = num.max((-k + v - energy * psi).abs());
        den = den.max(k.abs() + v.abs() + (energy * psi).abs());
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Residual of a deformed oscillator state for real (possibly irrational)
/// `g`, evaluated pointwise from floating-coefficient polynomials.
///
/// Residual of the cleared ratio equation
/// `−T_{p−1}T_p R + (U − εη) R = 0`, `R = P_{ℓ,n}/ξ(g)`, `p = g+ℓ`, relative
/// to the largest term on the grid. The eigenvalue is `ε = 4n`.
pub fn deformed_residual_f64(
    family: Family,
    ell: u32,
    g: f64,
    omega: f64,
    n: usize,
    epsilon: f64,
    grid: &[f64],
) -> f64 {
    let p = g + ell as f64;
    let (xi0, xi1) = (xi_f64(family, ell, g), xi_f64(family, ell, g + 1.0));
    let pp = exceptional_p_f64(family, ell, g, n);
    let polys = |q: &crate::polycore::float::FloatPoly| {
        let d = q.derivative();
        let d2 = d.derivative();
        (q.clone(), d, d2)
    };
    let ((x0, x0d, x0dd), (x1, x1d, x1dd), (pq, pd, pdd)) = (polys(&xi0), polys(&xi1), polys(&pp));
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for &x in grid {
        let eta = omega * x * x;
        let (a0, a0d, a0dd) = (x0.eval(eta), x0d.eval(eta), x0dd.eval(eta));
        let (a1, a1d, a1dd) = (x1.eval(eta), x1d.eval(eta), x1dd.eval(eta));
        let (b, bd, bdd) = (pq.eval(eta), pd.eval(eta), pdd.eval(eta));
        // R, R′, R″ by the quotient rule
        let r = b / a0;
        let rd = (bd - r * a0d) / a0;
        let rdd = (bdd - 2.0 * rd * a0d - r * a0dd) / a0;
        // Q = −η + p + 2η(ξ1′/ξ1 − ξ0′/ξ0) and Q′
        let (l1, l0) = (a1d / a1, a0d / a0);
        let (l1d, l0d) = (a1dd / a1 - l1 * l1, a0dd / a0 - l0 * l0);
        let q = -eta + p + 2.0 * eta * (l1 - l0);
        let qd = -1.0 + 2.0 * (l1 - l0) + 2.0 * eta * (l1d - l0d);
        let u = q * q + 2.0 * eta * qd - q;
        // S = T_p R, then T_{p−1} S with a = 1
        let s = p * r + 2.0 * eta * rd - eta * r;
        let sd = p * rd + 2.0 * rd + 2.0 * eta * rdd - r - eta * rd;
        let tt = (p - 1.0) * s + 2.0 * eta * sd - eta * s;
        let e = epsilon * eta * r;
        num = num.max((-tt + u * r - e).abs());
        den = den.max(tt.abs().max((u * r).abs()).max(e.abs()));
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// One line of a residual sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub n: usize,
    pub exact_zero: bool,
    pub relative: f64,
}

pub fn residual_rows(h: &Hamiltonian, states: &[EigenState]) -> Vec<ResidualRow> {
    states
        .iter()
        .map(|s| {
            let r = residual_numerator(h, &s.wavefunction, &s.epsilon);
            ResidualRow {
                n: s.n,
                exact_zero: r.is_exact_zero(),
                relative: r.relative(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::log_linear;
    use crate::polycore::parse_rational;
    use crate::sqm::eigen::{
        dc_hamiltonians, eigensystem_dc_pair, eigensystem_deformed, hamiltonian_deformed,
        radial_oscillator,
    };
    use crate::ModelParams;

    fn params(f: Family, ell: u32, g: &str) -> ModelParams {
        ModelParams::new(f, ell, parse_rational(g).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn oscillator_ground_state_residual_is_zero() {
        let (h, s) = radial_oscillator(&int(1), 1.0, 3).unwrap();
        for st in &s {
            assert_eq!(residual_check(&h, st), 0.0);
        }
    }

    #[test]
    fn deformed_states_have_zero_residual() {
        for fam in [Family::L1, Family::L2] {
            for ell in 0..=3 {
                let p = params(fam, ell, "3/2");
                let h = hamiltonian_deformed(&p).unwrap();
                for st in eigensystem_deformed(&p, 5).unwrap() {
                    assert!(residual_numerator(&h, &st.wavefunction, &st.epsilon).is_exact_zero());
                }
            }
        }
    }

    #[test]
    fn wrong_energy_is_detected() {
        let p = params(Family::L1, 1, "1");
        let h = hamiltonian_deformed(&p).unwrap();
        let s = &eigensystem_deformed(&p, 2).unwrap()[2];
        assert!(residual_numerator(&h, &s.wavefunction, &int(4)).relative() > 1e-2);
    }

    #[test]
    fn perturbed_state_is_detected() {
        let p = params(Family::L2, 2, "5/2");
        let h = hamiltonian_deformed(&p).unwrap();
        let s = &eigensystem_deformed(&p, 3).unwrap()[3];
        let bad = s.perturbed(1e-3);
        assert!(residual_check(&h, &bad) > 1e-4);
        let grid = log_linear(1e-3, 6.0, 400);
        assert!(residual_grid(&h, &bad.wavefunction, bad.energy, &grid) > 1e-4);
        assert!(residual_grid(&h, &s.wavefunction, s.energy, &grid) < 1e-10);
    }

    #[test]
    fn dc_states_solve_both_partners() {
        for fam in [Family::L1, Family::L2] {
            let p = params(fam, 2, "3/2");
            let (plus, minus) = dc_hamiltonians(&p).unwrap();
            let pair = eigensystem_dc_pair(&p, 4).unwrap();
            for (a, b) in pair.plus.iter().zip(&pair.minus) {
                assert_eq!(residual_check(&plus, a), 0.0);
                assert_eq!(residual_check(&minus, b), 0.0);
            }
        }
    }

    #[test]
    fn float_path_for_irrational_g() {
        let grid = log_linear(1e-2, 5.0, 300);
        let g = std::f64::consts::SQRT_2;
        for fam in [Family::L1, Family::L2] {
            for n in 0..4 {
                let r = deformed_residual_f64(fam, 2, g, 1.3, n, 4.0 * n as f64, &grid);
                assert!(r < 1e-10, "{fam} n={n}: {r}");
            }
            assert!(deformed_residual_f64(fam, 2, g, 1.3, 2, 8.5, &grid) > 1e-3);
        }
        // agrees with the exact path at rational g
        assert!(deformed_residual_f64(Family::L1, 1, 1.5, 1.0, 3, 12.0, &grid) < 1e-12);
    }
}
