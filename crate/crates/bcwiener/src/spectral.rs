//! Wiener inversion and spectral factorization of positive series.
//!
//! Both operations work channelwise: a bicomplex series is invertible
//! (resp. admits a factorization `f = f₊ f₊*` with causal, causally
//! invertible `f₊`) exactly when each idempotent channel does on the unit
//! circle. Inversion samples the channel pointwise and recovers
//! coefficients by DFT; factorization runs Wilson's Newton iteration
//!
//! ```text
//! W ← W · [ W⁻¹ S W⁻* + I ]₊      ([·]₊ keeps n > 0 and half of n = 0)
//! ```
//!
//! starting from the Cholesky factor of the mean, truncating each iterate
//! to the causal window `[0, K]`. A ♯-symmetric complex series of doubled
//! size can be factorized directly ([`sharp_route_factorize`]); the result
//! agrees with the embedded channel-route factor up to a constant right
//! unitary, which [`factor_uniqueness_unitary`] certifies.
//!
//! Every routine reports its sup-grid residual instead of trusting the
//! truncation silently.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};
use crate::series::{coefficients_from_grid, BCLaurentSeries, ChannelSeries};

/// Factor normalization applied after Wilson convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Constant right unitary chosen so the 0-th coefficient is Hermitian
    /// positive definite. Total on the whole domain.
    PdZero,
    /// Constant right unitary chosen so the factor equals `I` at `z = 1`;
    /// only possible when `f(1) = I`, otherwise [`Error::NotNormalizable`].
    AtOne,
}

/// Options for [`spectral_factorize`] and [`sharp_route_factorize`].
#[derive(Debug, Clone, Copy)]
pub struct FactorizeOptions {
    /// Causal truncation order: the factor lives on `[0, K]`.
    pub truncation: usize,
    /// Sample grid size, a power of two with `N ≥ 2K + 2`.
    pub grid: usize,
    /// Relative convergence tolerance of the Newton residual.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Relative positive-definiteness floor for grid values.
    pub pd_tol: f64,
    pub normalization: Normalization,
}

impl FactorizeOptions {
    pub fn with_truncation(truncation: usize) -> Self {
        Self {
            truncation,
            grid: default_grid_size(2 * truncation as i64),
            newton_tol: 1e-10,
            max_iter: 60,
            pd_tol: 1e-10,
            normalization: Normalization::PdZero,
        }
    }
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        Self::with_truncation(16)
    }
}

/// Power-of-two grid with headroom: `max(256, 8·span)` rounded up.
pub fn default_grid_size(span: i64) -> usize {
    let want = (8 * span.max(0) as usize).max(256);
    want.next_power_of_two()
}

/// Result of a Wiener inversion, with its sup-grid certificate
/// `‖f·g - I‖` measured on a grid twice as fine as the computation grid.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub inverse: BCLaurentSeries,
    pub residual: f64,
}

/// Channel-level inversion result.
#[derive(Debug, Clone)]
pub struct ChannelInversion {
    pub inverse: ChannelSeries,
    pub residual: f64,
}

/// Result of a spectral factorization.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// Causal factor with support in `[0, K]` and PD (or at-one) constant
    /// coefficient.
    pub plus: BCLaurentSeries,
    /// Sup-grid `‖f - f₊ f₊*‖` over both channels.
    pub residual: f64,
    /// Newton iterations used per channel.
    pub iterations: [usize; 2],
}

/// Channel-level factorization result.
#[derive(Debug, Clone)]
pub struct ChannelFactorization {
    pub plus: ChannelSeries,
    pub residual: f64,
    pub iterations: usize,
    /// For the ♯-route: relative ♯-symmetry defect of the factor before
    /// the final symmetrizing average.
    pub sym_defect: Option<f64>,
}

/// Constant right-unitary relating two factorizations of the same density,
/// one per idempotent channel.
#[derive(Debug, Clone)]
pub struct UnitaryCertificate {
    pub u1: CMatrix,
    pub u2: CMatrix,
    /// Sup-grid `‖a·U - b‖` (worst channel).
    pub residual: f64,
    /// `‖U U* - I‖_F` (worst channel).
    pub unitary_defect: f64,
}

fn validate_grid(k: usize, n_grid: usize) -> Result<()> {
    if !n_grid.is_power_of_two() || n_grid < 2 * k + 2 {
        return Err(Error::InvalidParameter(format!(
            "grid size {} must be a power of two with N >= 2K+2 = {}",
            n_grid,
            2 * k + 2
        )));
    }
    Ok(())
}

/// Entrywise forward DFT over the grid index, scaled by 1/N; `bins[r]` is
/// the aliased coefficient at frequency `r`.
fn bins_from_grid(values: &[CMatrix]) -> Vec<CMatrix> {
    let n = values.len();
    let (p, q) = values[0].shape();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut bins = vec![CMatrix::zeros(p, q); n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for r in 0..p {
        for c in 0..q {
            for (m, v) in values.iter().enumerate() {
                buf[m] = v[(r, c)];
            }
            fft.process(&mut buf);
            for (bin, b) in bins.iter_mut().enumerate() {
                b[(r, c)] = buf[bin] / n as f64;
            }
        }
    }
    bins
}

/// Entrywise inverse DFT: grid values of `Σ_r bins[r] e^{irθ}`.
fn grid_from_bins(bins: &[CMatrix]) -> Vec<CMatrix> {
    let n = bins.len();
    let (p, q) = bins[0].shape();
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);
    let mut values = vec![CMatrix::zeros(p, q); n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for r in 0..p {
        for c in 0..q {
            for (bin, b) in bins.iter().enumerate() {
                buf[bin] = b[(r, c)];
            }
            ifft.process(&mut buf);
            for (m, v) in values.iter_mut().enumerate() {
                v[(r, c)] = buf[m];
            }
        }
    }
    values
}

fn grid_angle(m: usize, n: usize) -> f64 {
    std::f64::consts::TAU * m as f64 / n as f64
}

/// Pointwise inversion of one channel with DFT coefficient recovery.
///
/// `tol` is the absolute floor on the smallest singular value at every
/// grid point; a value at or below it means the determinant vanishes
/// somewhere on the circle and no Wiener inverse exists.
pub fn invert_channel(
    f: &ChannelSeries,
    k: usize,
    n_grid: usize,
    tol: f64,
    channel: u8,
) -> Result<ChannelInversion> {
    let (p, q) = f.shape();
    if p != q {
        return Err(Error::ShapeMismatch(format!(
            "inversion of a non-square {}x{} series",
            p, q
        )));
    }
    validate_grid(k, n_grid)?;

    let samples = f.sample_grid(n_grid);
    for (m, v) in samples.iter().enumerate() {
        let sigma_min = v.clone().svd(false, false).singular_values.min();
        if sigma_min <= tol {
            return Err(Error::NotInvertibleOnBoundary {
                channel,
                theta: grid_angle(m, n_grid),
                sigma_min,
                tol,
            });
        }
    }
    let inverses: Vec<CMatrix> = samples
        .iter()
        .enumerate()
        .map(|(m, v)| {
            cmatrix::try_inverse(v).ok_or(Error::NotInvertibleOnBoundary {
                channel,
                theta: grid_angle(m, n_grid),
                sigma_min: 0.0,
                tol,
            })
        })
        .collect::<Result<_>>()?;
    let inverse = coefficients_from_grid(&inverses, -(k as i64), k as i64)?;

    // certificate on a grid twice as fine
    let fine = 2 * n_grid;
    let id = CMatrix::identity(p, p);
    let residual = (0..fine)
        .map(|m| {
            let theta = grid_angle(m, fine);
            cmatrix::op_norm(&(f.eval_angle(theta) * inverse.eval_angle(theta) - &id))
        })
        .fold(0.0, f64::max);
    Ok(ChannelInversion { inverse, residual })
}

/// Wiener inversion of a bicomplex series: both channels are inverted
/// pointwise on the boundary and recovered on `|n| ≤ K`.
pub fn invert(f: &BCLaurentSeries, k: usize, n_grid: usize, tol: f64) -> Result<Inversion> {
    if !f.is_square() {
        let (p, q) = f.shape();
        return Err(Error::ShapeMismatch(format!(
            "inversion of a non-square {}x{} series",
            p, q
        )));
    }
    let (c1, c2) = f.split_channels();
    let (r1, r2) = rayon::join(
        || invert_channel(&c1, k, n_grid, tol, 1),
        || invert_channel(&c2, k, n_grid, tol, 2),
    );
    let (r1, r2) = (r1?, r2?);
    Ok(Inversion {
        inverse: BCLaurentSeries::merge_channels(&r1.inverse, &r2.inverse)?,
        residual: r1.residual + r2.residual,
    })
}

/// Causal half `[X]₊ = x₀/2 + Σ_{n>0} xₙ e^{inθ}` evaluated back on the
/// grid; the Nyquist bin is split evenly so `[X]₊ + [X]₊* = X` holds
/// exactly at the grid points for Hermitian-valued `X`.
fn causal_half_grid(bins: &[CMatrix]) -> Vec<CMatrix> {
    let n = bins.len();
    let (p, q) = bins[0].shape();
    let mut plus = vec![CMatrix::zeros(p, q); n];
    plus[0] = &bins[0] * Complex64::new(0.5, 0.0);
    plus[1..n / 2].clone_from_slice(&bins[1..n / 2]);
    plus[n / 2] = &bins[n / 2] * Complex64::new(0.5, 0.0);
    grid_from_bins(&plus)
}

/// Wilson factorization of one positive channel.
pub fn factorize_channel(
    f: &ChannelSeries,
    opts: &FactorizeOptions,
    channel: u8,
) -> Result<ChannelFactorization> {
    let (p, q) = f.shape();
    if p != q {
        return Err(Error::ShapeMismatch(format!(
            "factorization of a non-square {}x{} series",
            p, q
        )));
    }
    let k = opts.truncation;
    let n_grid = opts.grid;
    validate_grid(k, n_grid)?;
    if n_grid < 4 {
        return Err(Error::InvalidParameter("grid too small".into()));
    }

    let samples = f.sample_grid(n_grid);
    let scale = samples.iter().map(cmatrix::op_norm).fold(0.0, f64::max);
    let pd_floor = opts.pd_tol * scale.max(f64::MIN_POSITIVE);
    for (m, v) in samples.iter().enumerate() {
        // positivity is meant in the Hermitian sense; a non-Hermitian value
        // shows up as a negative certificate
        let herm_defect = cmatrix::frob_norm(&(v - v.adjoint()));
        let min_eig = cmatrix::min_hermitian_eigenvalue(v);
        if herm_defect > 1e-8 * (1.0 + scale) || min_eig <= pd_floor {
            return Err(Error::NotPositive {
                channel,
                theta: grid_angle(m, n_grid),
                min_eig: min_eig.min(-herm_defect),
                tol: pd_floor,
            });
        }
    }

    // start from the Cholesky factor of the constant coefficient
    let mut s0 = CMatrix::zeros(p, p);
    for v in &samples {
        s0 += v;
    }
    s0 /= Complex64::new(n_grid as f64, 0.0);
    s0 = (&s0 + s0.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = nalgebra::Cholesky::new(s0).ok_or(Error::NotPositive {
        channel,
        theta: 0.0,
        min_eig: 0.0,
        tol: pd_floor,
    })?;
    let mut w_grid: Vec<CMatrix> = vec![chol.l(); n_grid];

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        iterations = it;
        // T = W⁻¹ S W⁻* pointwise
        let t_grid: Vec<CMatrix> = w_grid
            .iter()
            .zip(samples.iter())
            .enumerate()
            .map(|(m, (w, s))| {
                let lu = w.clone().lu();
                let y = lu.solve(s).ok_or(Error::NoConvergence {
                    iterations: it,
                    residual,
                })?;
                let z = lu.solve(&y.adjoint()).ok_or(Error::NoConvergence {
                    iterations: it,
                    residual,
                })?;
                let _ = m;
                Ok(z.adjoint())
            })
            .collect::<Result<_>>()?;
        let plus = causal_half_grid(&bins_from_grid(&t_grid));
        let half_id = CMatrix::identity(p, p) * Complex64::new(0.5, 0.0);
        for (w, g) in w_grid.iter_mut().zip(plus) {
            *w *= g + &half_id;
        }
        // project back onto the causal window [0, K]
        let mut bins = bins_from_grid(&w_grid);
        for (r, b) in bins.iter_mut().enumerate() {
            if r > k {
                *b = CMatrix::zeros(p, p);
            }
        }
        w_grid = grid_from_bins(&bins);

        residual = w_grid
            .iter()
            .zip(samples.iter())
            .map(|(w, s)| cmatrix::op_norm(&(w * w.adjoint() - s)))
            .fold(0.0, f64::max);
        if residual <= opts.newton_tol * scale.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if residual > opts.newton_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }

    let mut plus = coefficients_from_grid(&w_grid, 0, k as i64)?;

    // constant right-unitary normalization
    let u = match opts.normalization {
        Normalization::PdZero => cmatrix::right_polar_correction(&plus.coeff(0))?,
        Normalization::AtOne => {
            let f_at_one = f.eval_angle(0.0);
            let dev = cmatrix::frob_norm(&(&f_at_one - CMatrix::identity(p, p)));
            if dev > 1e-8 * (1.0 + scale) {
                return Err(Error::NotNormalizable(format!(
                    "normalization at z = 1 needs f(1) = I, deviation {dev:.3e}"
                )));
            }
            let w1 = plus.eval_angle(0.0);
            cmatrix::try_inverse(&w1).ok_or_else(|| {
                Error::NotNormalizable("factor is singular at z = 1".into())
            })?
        }
    };
    let mut normalized = ChannelSeries::new(p, p);
    for (&n, cmat) in plus.coeffs() {
        normalized.insert(n, cmat * &u)?;
    }
    plus = normalized;

    // honest residual of the normalized, truncated factor
    let residual = (0..n_grid)
        .map(|m| {
            let theta = grid_angle(m, n_grid);
            let w = plus.eval_angle(theta);
            cmatrix::op_norm(&(&w * w.adjoint() - &samples[m]))
        })
        .fold(0.0, f64::max);

    Ok(ChannelFactorization {
        plus,
        residual,
        iterations,
        sym_defect: None,
    })
}

/// Spectral factorization `f = f₊ f₊*` of a positive bicomplex series,
/// channel by channel.
pub fn spectral_factorize(f: &BCLaurentSeries, opts: &FactorizeOptions) -> Result<Factorization> {
    if !f.is_square() {
        let (p, q) = f.shape();
        return Err(Error::ShapeMismatch(format!(
            "factorization of a non-square {}x{} series",
            p, q
        )));
    }
    let (c1, c2) = f.split_channels();
    let (r1, r2) = rayon::join(
        || factorize_channel(&c1, opts, 1),
        || factorize_channel(&c2, opts, 2),
    );
    let (r1, r2) = (r1?, r2?);
    Ok(Factorization {
        plus: BCLaurentSeries::merge_channels(&r1.plus, &r2.plus)?,
        residual: r1.residual + r2.residual,
        iterations: [r1.iterations, r2.iterations],
    })
}

fn series_sym_defect(f: &ChannelSeries) -> Result<f64> {
    let scale = f
        .coeffs()
        .values()
        .map(cmatrix::frob_norm)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut defect = 0.0f64;
    for c in f.coeffs().values() {
        defect = defect.max(crate::bcmatrix::sharp_defect(c)?);
    }
    Ok(defect / scale)
}

/// Factorization of a ♯-symmetric complex series of doubled size, as a
/// plain complex circle factorization followed by a certified symmetrizing
/// average of the factor with its ♯-conjugate.
pub fn sharp_route_factorize(
    f: &ChannelSeries,
    opts: &FactorizeOptions,
) -> Result<ChannelFactorization> {
    let sym_tol = 1e-8;
    let input_defect = series_sym_defect(f)?;
    if input_defect > sym_tol {
        return Err(Error::NotSharpSymmetric {
            defect: input_defect,
            tol: sym_tol,
        });
    }
    let raw = factorize_channel(f, opts, 0)?;

    // the normalized factor of a ♯-symmetric density is ♯-symmetric up to
    // rounding; certify before averaging
    let defect = series_sym_defect(&raw.plus)?;
    if defect > sym_tol {
        return Err(Error::NotSharpSymmetric {
            defect,
            tol: sym_tol,
        });
    }
    let (p, _) = raw.plus.shape();
    let mut symmetrized = ChannelSeries::new(p, p);
    for (&n, c) in raw.plus.coeffs() {
        let avg = (c + crate::bcmatrix::sharp_conjugate(c)?) * Complex64::new(0.5, 0.0);
        symmetrized.insert(n, avg)?;
    }

    let n_grid = opts.grid;
    let samples = f.sample_grid(n_grid);
    let residual = (0..n_grid)
        .map(|m| {
            let w = symmetrized.eval_angle(grid_angle(m, n_grid));
            cmatrix::op_norm(&(&w * w.adjoint() - &samples[m]))
        })
        .fold(0.0, f64::max);

    Ok(ChannelFactorization {
        plus: symmetrized,
        residual,
        iterations: raw.iterations,
        sym_defect: Some(defect),
    })
}

/// Certifies that two causal complex factors differ by the constant right
/// unitary `U = a₀⁻¹ b₀`; returns `(U, sup-grid ‖aU - b‖, ‖UU* - I‖)`.
pub fn channel_uniqueness(
    a: &ChannelSeries,
    b: &ChannelSeries,
    tol: f64,
) -> Result<(CMatrix, f64, f64)> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch("factor shapes differ".into()));
    }
    let a0 = a.coeff(0);
    let b0 = b.coeff(0);
    let u = cmatrix::solve(&a0, &b0).ok_or_else(|| {
        Error::InvalidParameter("factor has a singular constant coefficient".into())
    })?;
    let unitary_defect = cmatrix::unitary_defect(&u);

    let span = a
        .support()
        .iter()
        .chain(b.support().iter())
        .map(|(lo, hi)| hi - lo)
        .max()
        .unwrap_or(0);
    let n_grid = default_grid_size(span);
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for m in 0..n_grid {
        let theta = grid_angle(m, n_grid);
        let bv = b.eval_angle(theta);
        scale = scale.max(cmatrix::op_norm(&bv));
        residual = residual.max(cmatrix::op_norm(&(a.eval_angle(theta) * &u - bv)));
    }
    if unitary_defect > tol || residual > tol * (1.0 + scale) {
        return Err(Error::NotRelated {
            residual,
            unitary_defect,
        });
    }
    Ok((u, residual, unitary_defect))
}

/// Channelwise uniqueness certificate for two bicomplex factorizations of
/// the same density.
pub fn factor_uniqueness_unitary(
    a: &BCLaurentSeries,
    b: &BCLaurentSeries,
    tol: f64,
) -> Result<UnitaryCertificate> {
    let (a1, a2) = a.split_channels();
    let (b1, b2) = b.split_channels();
    let (u1, r1, d1) = channel_uniqueness(&a1, &b1, tol)?;
    let (u2, r2, d2) = channel_uniqueness(&a2, &b2, tol)?;
    Ok(UnitaryCertificate {
        u1,
        u2,
        residual: r1.max(r2),
        unitary_defect: d1.max(d2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcmatrix::BCMatrix;
    use crate::bicomplex::{Bicomplex, BoundaryPoint};
    use crate::series::ProjectionSide;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_c(rng: &mut StdRng, scale: f64) -> Complex64 {
        c(
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        )
    }

    fn rand_cmatrix(rng: &mut StdRng, p: usize, q: usize, scale: f64) -> CMatrix {
        CMatrix::from_fn(p, q, |_, _| rand_c(rng, scale))
    }

    fn rand_bcmatrix(rng: &mut StdRng, p: usize, q: usize, scale: f64) -> BCMatrix {
        BCMatrix::new(
            rand_cmatrix(rng, p, q, scale),
            rand_cmatrix(rng, p, q, scale),
        )
        .unwrap()
    }

    /// Random causal series with dominant Hermitian-PD constant term, so
    /// that it is invertible everywhere on the boundary.
    pub(crate) fn random_causal_pd(
        rng: &mut StdRng,
        p: usize,
        degree: i64,
    ) -> BCLaurentSeries {
        let mut g = BCLaurentSeries::new(p, p);
        let g1 = rand_cmatrix(rng, p, p, 1.0);
        let g2 = rand_cmatrix(rng, p, p, 1.0);
        let bump = CMatrix::identity(p, p) * c(p as f64 + 1.0, 0.0);
        let p1 = &g1 * g1.adjoint() + &bump;
        let p2 = &g2 * g2.adjoint() + &bump;
        g.insert(0, BCMatrix::from_channels(&p1, &p2).unwrap()).unwrap();
        let tail_scale = 0.3 / degree.max(1) as f64;
        for n in 1..=degree {
            g.insert(n, rand_bcmatrix(rng, p, p, tail_scale)).unwrap();
        }
        g
    }

    fn geometric_half() -> BCLaurentSeries {
        // f = 1 - Z/2
        BCLaurentSeries::scalar_from_pairs(&[
            (0, Bicomplex::one()),
            (1, Bicomplex::from_real(-0.5)),
        ])
    }

    fn two_z_density() -> BCLaurentSeries {
        BCLaurentSeries::scalar_from_pairs(&[
            (-1, Bicomplex::from_real(2.0)),
            (0, Bicomplex::from_real(5.0)),
            (1, Bicomplex::from_real(2.0)),
        ])
    }

    #[test]
    fn invert_geometric() {
        let inv = invert(&geometric_half(), 40, 256, 1e-9).unwrap();
        assert!(inv.residual <= 1e-9);
        for n in 0..=40i64 {
            let expect = Bicomplex::from_real(2.0f64.powi(-n as i32));
            let got = inv.inverse.coeff(n).entry(0, 0);
            assert!((got.z1 - expect.z1).norm() <= 1e-10, "n={n}");
            assert!(got.z2.norm() <= 1e-12);
        }
        for n in 1..=40i64 {
            assert!(inv.inverse.coeff(-n).entry(0, 0).z1.norm() <= 1e-12);
        }
    }

    #[test]
    fn invert_constant() {
        let mut rng = StdRng::seed_from_u64(7);
        let cmat = rand_cmatrix(&mut rng, 3, 3, 0.5) + CMatrix::identity(3, 3) * c(3.0, 0.0);
        let f = BCLaurentSeries::constant(BCMatrix::from_channels(&cmat, &cmat).unwrap());
        let inv = invert(&f, 8, 256, 1e-9).unwrap();
        assert!(inv.residual <= 1e-12);
        let expect = cmatrix::try_inverse(&cmat).unwrap();
        let (g1, _) = inv.inverse.split_channels();
        assert!(cmatrix::frob_norm(&(g1.coeff(0) - expect)) <= 1e-12);
    }

    #[test]
    fn invert_detects_boundary_zero() {
        // 1 - Z vanishes at t = s = 0
        let f = BCLaurentSeries::scalar_from_pairs(&[
            (0, Bicomplex::one()),
            (1, Bicomplex::from_real(-1.0)),
        ]);
        match invert(&f, 16, 256, 1e-9) {
            Err(Error::NotInvertibleOnBoundary { theta, .. }) => {
                assert!(theta.abs() <= 1e-12)
            }
            other => panic!("expected boundary error, got {other:?}"),
        }
    }

    #[test]
    fn factorize_toeplitz_example() {
        let f = two_z_density();
        let opts = FactorizeOptions::with_truncation(8);
        let fac = spectral_factorize(&f, &opts).unwrap();
        assert!(fac.residual <= 1e-10 * f.wiener_norm());
        let w0 = fac.plus.coeff(0).entry(0, 0);
        let w1 = fac.plus.coeff(1).entry(0, 0);
        assert!((w0.z1 - c(2.0, 0.0)).norm() <= 1e-10);
        assert!((w1.z1 - c(1.0, 0.0)).norm() <= 1e-10);
        assert!(w0.z2.norm() <= 1e-10 && w1.z2.norm() <= 1e-10);
        // causality: support in [0, K]
        let (lo, hi) = fac.plus.support().unwrap();
        assert!(lo >= 0 && hi <= 8);
        // f ≈ f₊ · f₊*
        let recon = fac.plus.multiply(&fac.plus.star()).unwrap();
        assert!(recon.coeff_distance(&f) <= 1e-10 * f.wiener_norm());
    }

    #[test]
    fn factorize_identity() {
        let f = BCLaurentSeries::identity(3);
        let fac = spectral_factorize(&f, &FactorizeOptions::with_truncation(4)).unwrap();
        assert!(fac.residual <= 1e-12);
        assert!(
            fac.plus
                .coeff(0)
                .sub(&BCMatrix::identity(3))
                .unwrap()
                .bc_op_norm()
                <= 1e-12
        );
        assert!(fac.plus.tail_mass(0) <= 1e-12);
    }

    #[test]
    fn factorize_construct_then_recover() {
        let mut rng = StdRng::seed_from_u64(42);
        for trial in 0..3 {
            let p = 2 + trial % 2;
            let deg = 3;
            let g = random_causal_pd(&mut rng, p, deg);
            let f = g.multiply(&g.star()).unwrap();
            let mut opts = FactorizeOptions::with_truncation(deg as usize);
            opts.grid = 256;
            let fac = spectral_factorize(&f, &opts).unwrap();
            assert!(
                fac.residual <= 1e-8 * (1.0 + f.wiener_norm()),
                "trial {trial}: residual {}",
                fac.residual
            );
            let cert = factor_uniqueness_unitary(&fac.plus, &g, 1e-6).unwrap();
            assert!(cert.residual <= 1e-6 * (1.0 + g.wiener_norm()));
            assert!(cert.unitary_defect <= 1e-6);
        }
    }

    /// Toeplitz-Cholesky (Bauer) oracle: the trailing rows of the Cholesky
    /// factor of the banded Toeplitz matrix [f_{i-j}] converge to the
    /// spectral factor coefficients, reversed and adjointed. Independent of
    /// the Wilson iteration and of any constructed factor.
    fn bauer_factor_scalar(coeffs: &[(i64, Complex64)], k: usize, m: usize) -> Vec<Complex64> {
        let lookup = |n: i64| -> Complex64 {
            coeffs
                .iter()
                .find(|(j, _)| *j == n)
                .map(|(_, c)| *c)
                .unwrap_or(c(0.0, 0.0))
        };
        let t = CMatrix::from_fn(m, m, |i, j| lookup(i as i64 - j as i64));
        let chol = nalgebra::Cholesky::new(t).expect("PD Toeplitz section");
        let l = chol.l();
        // row m-1: L[m-1, m-1-k] -> w_k (scalar case, positive w_0)
        (0..=k).map(|kk| l[(m - 1, m - 1 - kk)]).collect()
    }

    #[test]
    fn wilson_factor_matches_bauer_oracle() {
        // PD by diagonal dominance, not built from any known factor
        let coeffs: Vec<(i64, Complex64)> = vec![
            (0, c(6.0, 0.0)),
            (1, c(1.2, 0.4)),
            (-1, c(1.2, -0.4)),
            (2, c(-0.3, 0.7)),
            (-2, c(-0.3, -0.7)),
            (3, c(0.25, -0.1)),
            (-3, c(0.25, 0.1)),
        ];
        let f = BCLaurentSeries::merge_channels(
            &ChannelSeries::scalar_from_pairs(&coeffs),
            &ChannelSeries::scalar_from_pairs(&coeffs),
        )
        .unwrap();

        let k = 14usize;
        let mut opts = FactorizeOptions::with_truncation(k);
        opts.grid = 512;
        let fac = spectral_factorize(&f, &opts).unwrap();
        let (w1, _) = fac.plus.split_channels();

        let bauer = bauer_factor_scalar(&coeffs, k, 400);
        for (kk, expect) in bauer.iter().enumerate() {
            let got = w1.coeff(kk as i64)[(0, 0)];
            assert!(
                (got - expect).norm() <= 1e-8,
                "k={kk}: wilson {got} vs bauer {expect}"
            );
        }
    }

    #[test]
    fn factorize_reports_stalls() {
        // the factor of (1 + 0.9Z)(1 + 0.9Z⁻¹) has degree 1; a constant
        // truncation window cannot reach the tolerance
        let g = BCLaurentSeries::scalar_from_pairs(&[
            (0, Bicomplex::one()),
            (1, Bicomplex::from_real(0.9)),
        ]);
        let f = g.multiply(&g.star()).unwrap();
        let mut opts = FactorizeOptions::with_truncation(0);
        opts.grid = 256;
        match spectral_factorize(&f, &opts) {
            Err(Error::NoConvergence {
                iterations,
                residual,
            }) => {
                assert_eq!(iterations, opts.max_iter);
                assert!(residual > opts.newton_tol * f.wiener_norm());
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn factorize_rejects_indefinite() {
        // 2cos θ dips below zero
        let f = BCLaurentSeries::scalar_from_pairs(&[
            (-1, Bicomplex::one()),
            (1, Bicomplex::one()),
        ]);
        assert!(matches!(
            spectral_factorize(&f, &FactorizeOptions::with_truncation(4)),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn uniqueness_certificates() {
        let mut rng = StdRng::seed_from_u64(3);
        let g = random_causal_pd(&mut rng, 3, 2);
        let cert = factor_uniqueness_unitary(&g, &g, 1e-8).unwrap();
        assert!(cmatrix::frob_norm(&(&cert.u1 - CMatrix::identity(3, 3))) <= 1e-10);
        assert!(cert.residual <= 1e-10);

        // b = a · U₀ for a random constant unitary U₀ (same in both channels)
        let u0 = rand_cmatrix(&mut rng, 3, 3, 1.0).qr().q();
        let u0_bc = BCMatrix::from_channels(&u0, &u0).unwrap();
        let b = g.multiply(&BCLaurentSeries::constant(u0_bc)).unwrap();
        let cert = factor_uniqueness_unitary(&g, &b, 1e-6).unwrap();
        assert!(cmatrix::frob_norm(&(&cert.u1 - &u0)) <= 1e-10);
        assert!(cmatrix::frob_norm(&(&cert.u2 - &u0)) <= 1e-10);

        // non-unitary relation is rejected
        let stretch = CMatrix::identity(3, 3) * c(1.5, 0.0);
        let b = g
            .multiply(&BCLaurentSeries::constant(
                BCMatrix::from_channels(&stretch, &stretch).unwrap(),
            ))
            .unwrap();
        assert!(matches!(
            factor_uniqueness_unitary(&g, &b, 1e-6),
            Err(Error::NotRelated { .. })
        ));
    }

    #[test]
    fn sharp_route_scalar_example() {
        let f = two_z_density().embed_sharp();
        let opts = FactorizeOptions::with_truncation(8);
        let fac = sharp_route_factorize(&f, &opts).unwrap();
        assert!(fac.residual <= 1e-9);
        assert!(fac.sym_defect.unwrap() <= 1e-8);
        // factor is the embedding of 2 + Z
        let w0 = fac.plus.coeff(0);
        let w1 = fac.plus.coeff(1);
        assert!(cmatrix::frob_norm(&(w0 - CMatrix::identity(2, 2) * c(2.0, 0.0))) <= 1e-9);
        assert!(cmatrix::frob_norm(&(w1 - CMatrix::identity(2, 2))) <= 1e-9);
    }

    #[test]
    fn sharp_route_identity_and_rejection() {
        let f = ChannelSeries::constant(CMatrix::identity(2, 2));
        let fac = sharp_route_factorize(&f, &FactorizeOptions::with_truncation(2)).unwrap();
        assert!(cmatrix::frob_norm(&(fac.plus.coeff(0) - CMatrix::identity(2, 2))) <= 1e-12);

        let mut bad = ChannelSeries::constant(CMatrix::identity(2, 2) * c(4.0, 0.0));
        bad.insert(
            1,
            CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.2, 0.0)]),
        )
        .unwrap();
        assert!(matches!(
            sharp_route_factorize(&bad, &FactorizeOptions::with_truncation(4)),
            Err(Error::NotSharpSymmetric { .. })
        ));
    }

    #[test]
    fn sharp_symmetry_is_preserved() {
        let mut rng = StdRng::seed_from_u64(9);
        let g = random_causal_pd(&mut rng, 2, 3);
        let f = g.multiply(&g.star()).unwrap();
        let fac = sharp_route_factorize(&f.embed_sharp(), &FactorizeOptions::with_truncation(3))
            .unwrap();
        assert!(fac.sym_defect.unwrap() <= 1e-8);
    }

    #[test]
    fn route_equivalence() {
        let mut rng = StdRng::seed_from_u64(11);
        let g = random_causal_pd(&mut rng, 2, 2);
        let f = g.multiply(&g.star()).unwrap();
        let opts = FactorizeOptions::with_truncation(2);
        let idem = spectral_factorize(&f, &opts).unwrap();
        let sharp = sharp_route_factorize(&f.embed_sharp(), &opts).unwrap();
        let embedded = idem.plus.embed_sharp();
        let (u, resid, defect) = channel_uniqueness(&embedded, &sharp.plus, 1e-6).unwrap();
        assert!(resid <= 1e-6 * (1.0 + sharp.plus.wiener_norm()));
        assert!(defect <= 1e-6);
        // both sides are PD-normalized, so the unitary is the identity
        assert!(cmatrix::frob_norm(&(&u - CMatrix::identity(4, 4))) <= 1e-6);
    }

    #[test]
    fn y_symmetry_is_preserved_with_at_one_normalization() {
        let mut rng = StdRng::seed_from_u64(23);
        let p = 3usize;
        let y = rand_cmatrix(&mut rng, p, p, 1.0).qr().q(); // unitary Y

        // causal g with coefficients commuting with Y, then pinned g(1) = I
        let mut g1 = ChannelSeries::new(p, p);
        let mut g2 = ChannelSeries::new(p, p);
        let poly_in_y = |rng: &mut StdRng, y: &CMatrix, dom: f64| {
            CMatrix::identity(p, p) * c(dom, 0.0)
                + y * rand_c(rng, 0.2)
                + y * y * rand_c(rng, 0.2)
        };
        for n in 0..=2i64 {
            let dom = if n == 0 { 4.0 } else { 0.0 };
            g1.insert(n, poly_in_y(&mut rng, &y, dom)).unwrap();
            g2.insert(n, poly_in_y(&mut rng, &y, dom)).unwrap();
        }
        let pin = |ch: &ChannelSeries| {
            let inv = cmatrix::try_inverse(&ch.eval_angle(0.0)).unwrap();
            let mut out = ChannelSeries::new(p, p);
            for (&n, coeff) in ch.coeffs() {
                out.insert(n, coeff * &inv).unwrap();
            }
            out
        };
        let g = BCLaurentSeries::merge_channels(&pin(&g1), &pin(&g2)).unwrap();
        let f = g.multiply(&g.star()).unwrap();

        let mut opts = FactorizeOptions::with_truncation(2);
        opts.normalization = Normalization::AtOne;
        let fac = spectral_factorize(&f, &opts).unwrap();

        // f₊(1) = I and every coefficient is Y-symmetric
        let at_one = fac.plus.eval(&BoundaryPoint::new(0.0, 0.0));
        assert!(
            at_one
                .sub(&BCMatrix::identity(p))
                .unwrap()
                .bc_op_norm()
                <= 1e-8
        );
        let (w1, w2) = fac.plus.split_channels();
        for ch in [&w1, &w2] {
            for coeff in ch.coeffs().values() {
                let conj = cmatrix::similarity_conjugate(coeff, &y).unwrap();
                assert!(
                    cmatrix::frob_norm(&(&conj - coeff)) <= 1e-8 * (1.0 + cmatrix::frob_norm(coeff))
                );
            }
        }
    }

    #[test]
    fn at_one_normalization_requires_unit_value() {
        let f = two_z_density(); // f(1) = 9
        let mut opts = FactorizeOptions::with_truncation(4);
        opts.normalization = Normalization::AtOne;
        assert!(matches!(
            spectral_factorize(&f, &opts),
            Err(Error::NotNormalizable(_))
        ));
    }

    #[test]
    fn projections_commute_with_factor_support() {
        let f = two_z_density();
        let fac = spectral_factorize(&f, &FactorizeOptions::with_truncation(6)).unwrap();
        let causal = fac.plus.project(ProjectionSide::Plus);
        assert!(causal.coeff_distance(&fac.plus) <= 1e-15);
    }
}
