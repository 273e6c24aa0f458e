use rayon::prelude::*;

use crate::error::{Error, Result};

/// Uniform interior grid `x_i = x_min + i·h`, `i = 1..=n`, with Dirichlet
/// conditions at `x_min` and `x_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl FdConfig {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Self {
        Self { n, x_min, x_max }
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n + 1) as f64
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n + 1,
            ..*self
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.h();
        (1..=self.n).map(move |i| self.x_min + i as f64 * h)
    }
}

/// Symmetric tridiagonal discretization of `−d²/dx² + V(x)`:
/// diagonal `2/h² + V(x_i)`, off-diagonal `−1/h²`.
#[derive(Clone, Debug)]
pub struct FdHamiltonian {
    pub h: f64,
    pub diag: Vec<f64>,
    pub off: f64,
}

impl FdHamiltonian {
    pub fn new<V: Fn(f64) -> f64 + Sync>(v: V, cfg: FdConfig) -> Result<Self> {
        let h = cfg.h();
        let xs: Vec<f64> = cfg.nodes().collect();
        let diag: Vec<f64> = xs.par_iter().map(|&x| 2.0 / (h * h) + v(x)).collect();
        if let Some(i) = diag.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonFinite(format!("potential at x = {}", xs[i])));
        }
        Ok(Self {
            h,
            diag,
            off: -1.0 / (h * h),
        })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        tridiagonal_lowest(&self.diag, self.off, k)
    }
}

/// Number of eigenvalues strictly below `lambda` (negative pivots of the
/// LDLᵀ factorization of `T − λ`).
pub fn count_below(diag: &[f64], off: f64, lambda: f64) -> usize {
    let e2 = off * off;
    let mut q = 1.0;
    let mut count = 0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 {
            d - lambda
        } else {
            d - lambda - e2 / q
        };
        if q == 0.0 {
            q = f64::MIN_POSITIVE;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues by bisection on Sturm counts.
pub fn tridiagonal_lowest(diag: &[f64], off: f64, k: usize) -> Result<Vec<f64>> {
    assert!(k <= diag.len());
    let r = 2.0 * off.abs();
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
    let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let eigs: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|j| {
            // smallest λ with count_below(λ) ≥ j + 1
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if count_below(diag, off, m) > j {
                    b = m;
                } else {
                    a = m;
                }
            }
            0.5 * (a + b)
        })
        .collect();
    let delta = 64.0 * f64::EPSILON * scale;
    for (j, &l) in eigs.iter().enumerate() {
        let below = count_below(diag, off, l - delta);
        let upto = count_below(diag, off, l + delta);
        if below > j || upto < j + 1 {
            return Err(Error::SturmMismatch {
                expected: j + 1,
                found: upto,
                bound: l + delta,
            });
        }
    }
    Ok(eigs)
}

/// Lowest eigenvalues at spacing `h` and `h/2`, and their Richardson
/// extrapolation `(4 λ(h/2) − λ(h)) / 3`.
#[derive(Clone, Debug)]
pub struct FdEigs {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

pub fn fd_eigs<V: Fn(f64) -> f64 + Sync>(v: V, cfg: FdConfig, k: usize) -> Result<FdEigs> {
    let coarse = FdHamiltonian::new(&v, cfg)?.lowest(k)?;
    let fine = FdHamiltonian::new(&v, cfg.refined())?.lowest(k)?;
    let extrapolated = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(FdEigs {
        coarse,
        fine,
        extrapolated,
    })
}

/// One rung of a grid-refinement ladder.
#[derive(Clone, Debug)]
pub struct LadderRow {
    pub n: usize,
    pub h: f64,
    pub eigenvalues: Vec<f64>,
}

/// Eigenvalues on `levels` successively halved spacings starting at `cfg`.
pub fn fd_ladder<V: Fn(f64) -> f64 + Sync>(
    v: V,
    cfg: FdConfig,
    k: usize,
    levels: usize,
) -> Result<Vec<LadderRow>> {
    let mut rows = Vec::with_capacity(levels);
    let mut c = cfg;
    for _ in 0..levels {
        rows.push(LadderRow {
            n: c.n,
            h: c.h(),
            eigenvalues: FdHamiltonian::new(&v, c)?.lowest(k)?,
        });
        c = c.refined();
    }
    Ok(rows)
}

/// Convergence order `log2(e(h)/e(h/2))` for each consecutive pair of errors.
pub fn observed_order(errors: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0] / w[1]).abs().log2())
        .collect()
}

/// `n,h,lambda_0,lambda_1,...` with a header row.
pub fn ladder_csv(rows: &[LadderRow]) -> String {
    let k = rows.first().map_or(0, |r| r.eigenvalues.len());
    let mut out = String::from("n,h");
    for j in 0..k {
        out.push_str(&format!(",lambda_{j}"));
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{:e}", r.n, r.h));
        for l in &r.eigenvalues {
            out.push_str(&format!(",{l:.15e}"));
        }
        out.push('\n');
    }
    out
}
