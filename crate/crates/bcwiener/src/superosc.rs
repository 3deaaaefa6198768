//! Superoscillatory sequences and band-limited approximation of series.
//!
//! The generating sequence is
//!
//! ```text
//! F_m(t, a) = (cos(t/m) + i a sin(t/m))^m = Σ_{k=0}^m c_k(m,a) e^{it(1-2k/m)},
//! c_k(m,a) = C(m,k) ((1+a)/2)^{m-k} ((1-a)/2)^k,
//! ```
//!
//! whose frequencies `1 - 2k/m` all lie in `[-1, 1]` while
//! `F_m(t, a) → e^{iat}` as `m → ∞`, uniformly on compact `t`-intervals,
//! with error `O(1/m)`; for `a > 1` the limit oscillates faster than any
//! component (`Σ_k |c_k| = a^m`). The binomial identity behind the
//! expansion holds for every real `a`, so negative frequencies use the
//! same coefficients with `a = n < -1`, without a separate conjugation
//! path.
//!
//! Bicomplex variant: `F_m(x, y, a, b) = F_m(x,a) e₁ + F_m(y,b) e₂`, which
//! approximates a Wiener element by replacing each `Zⁿ`, `|n| ≥ 2`, with
//! `F_m(t-s, t+s, n, n)`; the low-band terms `n ∈ {-1,0,1}` are kept
//! exactly.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bcmatrix::BCMatrix;
use crate::bicomplex::{Bicomplex, BoundaryPoint};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::series::BCLaurentSeries;

/// Parameters of the bicomplex sequence `F_m(x, y, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcSuperoscParams {
    pub m: u32,
    pub a: f64,
    pub b: f64,
}

/// Coefficients `c_k(m, a)`, `k = 0..m`.
///
/// `Σ_k c_k = 1` and, for `|a| > 1`, `Σ_k |c_k| = |a|^m`.
pub fn superosc_coeffs(m: u32, a: f64) -> Vec<f64> {
    assert!(m >= 1, "superoscillation order must be at least 1");
    let f1 = (1.0 + a) / 2.0;
    let f2 = (1.0 - a) / 2.0;
    let mut binom = 1.0f64;
    (0..=m)
        .map(|k| {
            let c = binom * f1.powi((m - k) as i32) * f2.powi(k as i32);
            binom *= (m - k) as f64 / (k + 1) as f64;
            c
        })
        .collect()
}

/// Closed-form evaluation `(cos(t/m) + i a sin(t/m))^m`.
///
/// Large orders go through log-polar exponentiation so that `a^m` cannot
/// overflow intermediate products.
pub fn superosc_eval(m: u32, a: f64, t: f64) -> Complex64 {
    assert!(m >= 1, "superoscillation order must be at least 1");
    let tau = t / m as f64;
    let w = Complex64::new(tau.cos(), a * tau.sin());
    if m <= 512 {
        w.powu(m)
    } else {
        let (r, phi) = w.to_polar();
        Complex64::from_polar((m as f64 * r.ln()).exp(), m as f64 * phi)
    }
}

/// Coefficient-sum evaluation `Σ_k c_k e^{it(1-2k/m)}`, the band-limited
/// form of [`superosc_eval`]. The two agree to roughly `1e-10 · |a|^m`;
/// keep `m` moderate here, the coefficients grow like `a^m`.
pub fn superosc_eval_sum(m: u32, a: f64, t: f64) -> Complex64 {
    superosc_coeffs(m, a)
        .iter()
        .enumerate()
        .map(|(k, &c)| Complex64::cis(t * (1.0 - 2.0 * k as f64 / m as f64)) * c)
        .sum()
}

/// Channelwise bicomplex evaluation `F_m(x,a) e₁ + F_m(y,b) e₂`.
pub fn bc_superosc_eval(params: &BcSuperoscParams, x: f64, y: f64) -> Bicomplex {
    Bicomplex::from_idempotent(
        superosc_eval(params.m, params.a, x),
        superosc_eval(params.m, params.b, y),
    )
}

fn approx_channel_value(
    coeffs: &std::collections::BTreeMap<i64, CMatrix>,
    shape: (usize, usize),
    m: u32,
    u: f64,
) -> CMatrix {
    let mut acc = CMatrix::zeros(shape.0, shape.1);
    for (&n, coeff) in coeffs {
        let w = if n.abs() <= 1 {
            Complex64::cis(n as f64 * u)
        } else {
            superosc_eval(m, n as f64, u)
        };
        acc += coeff * w;
    }
    acc
}

/// Band-limited approximant of `f` at a boundary point: the terms
/// `n ∈ {-1, 0, 1}` are exact, all others use `F_m(t-s, t+s, n, n)`.
pub fn approximate_series(f: &BCLaurentSeries, m: u32, pt: &BoundaryPoint) -> Result<BCMatrix> {
    if !f.is_square() {
        let (p, q) = f.shape();
        return Err(Error::ShapeMismatch(format!(
            "approximation of a non-square {}x{} series",
            p, q
        )));
    }
    if m < 1 {
        return Err(Error::InvalidParameter(
            "superoscillation order must be at least 1".into(),
        ));
    }
    let (u, v) = pt.channel_angles();
    let (c1, c2) = f.split_channels();
    let v1 = approx_channel_value(c1.coeffs(), f.shape(), m, u);
    let v2 = approx_channel_value(c2.coeffs(), f.shape(), m, v);
    BCMatrix::from_channels(&v1, &v2)
}

/// Sup over the grid of `‖f(Z) - approximant(Z)‖` in the bicomplex
/// operator norm.
pub fn approximation_error(f: &BCLaurentSeries, m: u32, grid: &[BoundaryPoint]) -> Result<f64> {
    let errs: Vec<f64> = grid
        .par_iter()
        .map(|pt| {
            let exact = f.eval(pt);
            approximate_series(f, m, pt).map(|approx| {
                exact
                    .sub(&approx)
                    .expect("shapes agree by construction")
                    .bc_op_norm()
            })
        })
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Square grid of boundary points whose channel angles `(t-s, t+s)` sweep
/// `[-half_width, half_width]²`, the compact window where band-limited
/// approximants converge.
pub fn channel_angle_grid(half_width: f64, steps: usize) -> Vec<BoundaryPoint> {
    let mut grid = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let frac = |idx: usize| {
                if steps == 1 {
                    0.0
                } else {
                    2.0 * idx as f64 / (steps - 1) as f64 - 1.0
                }
            };
            let u = half_width * frac(i);
            let v = half_width * frac(j);
            grid.push(BoundaryPoint::new((u + v) / 2.0, (v - u) / 2.0));
        }
    }
    grid
}
