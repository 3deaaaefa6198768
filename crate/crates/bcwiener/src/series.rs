//! Truncated matrix Laurent series: the computational stand-in for the
//! Wiener algebra.
//!
//! A [`BCLaurentSeries`] is a finite-support map `n ↦ fₙ` of bicomplex
//! `p×q` coefficients, evaluated on the distinguished boundary as
//! `f(Z) = Σ fₙ Zⁿ`. Everything factors through the idempotent channels:
//! channel `ℓ` is an ordinary complex series on the unit circle, evaluated
//! at `e^{i(t-s)}` (channel 1) or `e^{i(t+s)}` (channel 2).
//!
//! All operations keep supports finite. Transform-based routines quantify
//! their truncation through [`BCLaurentSeries::tail_mass`] and the
//! residual certificates reported by [`crate::spectral`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::bcmatrix::{self, BCMatrix};
use crate::bicomplex::{Bicomplex, BoundaryPoint};
use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};

/// Causal (`n ≥ 0`) or anticausal (`n ≤ 0`) projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSide {
    Plus,
    Minus,
}

/// One idempotent channel of a series: complex `p×q` coefficients on the
/// unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSeries {
    p: usize,
    q: usize,
    coeffs: BTreeMap<i64, CMatrix>,
}

impl ChannelSeries {
    pub fn new(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: CMatrix) -> Self {
        let (p, q) = c.shape();
        let mut s = Self::new(p, q);
        s.coeffs.insert(0, c);
        s
    }

    pub fn scalar_from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        let mut s = Self::new(1, 1);
        for &(n, c) in pairs {
            s.coeffs.insert(n, CMatrix::from_element(1, 1, c));
        }
        s
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn insert(&mut self, n: i64, coeff: CMatrix) -> Result<()> {
        if coeff.shape() != (self.p, self.q) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient {}x{} in a {}x{} series",
                coeff.nrows(),
                coeff.ncols(),
                self.p,
                self.q
            )));
        }
        self.coeffs.insert(n, coeff);
        Ok(())
    }

    pub fn coeff(&self, n: i64) -> CMatrix {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.p, self.q))
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, CMatrix> {
        &self.coeffs
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let min = *self.coeffs.keys().next()?;
        let max = *self.coeffs.keys().next_back()?;
        Some((min, max))
    }

    /// Horner evaluation of `Σ cₙ λⁿ` at a unimodular (or any nonzero) `λ`.
    pub fn eval(&self, lambda: Complex64) -> CMatrix {
        let (min, max) = match self.support() {
            Some(s) => s,
            None => return CMatrix::zeros(self.p, self.q),
        };
        let mut acc = CMatrix::zeros(self.p, self.q);
        for n in (min..=max).rev() {
            acc *= lambda;
            if let Some(c) = self.coeffs.get(&n) {
                acc += c;
            }
        }
        if min != 0 {
            acc *= lambda.powi(min as i32);
        }
        acc
    }

    pub fn eval_angle(&self, theta: f64) -> CMatrix {
        self.eval(Complex64::cis(theta))
    }

    /// Values on the uniform grid `θ_m = 2πm/N`.
    pub fn sample_grid(&self, n_grid: usize) -> Vec<CMatrix> {
        (0..n_grid)
            .into_par_iter()
            .map(|m| self.eval_angle(std::f64::consts::TAU * m as f64 / n_grid as f64))
            .collect()
    }

    /// `Σₙ ‖cₙ‖_op`.
    pub fn wiener_norm(&self) -> f64 {
        self.coeffs.values().map(cmatrix::op_norm).fold(0.0, |a, b| a + b)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch("series add".into()));
        }
        let mut out = self.clone();
        for (&n, c) in &rhs.coeffs {
            let e = out
                .coeffs
                .entry(n)
                .or_insert_with(|| CMatrix::zeros(self.p, self.q));
            *e += c;
        }
        Ok(out)
    }

    /// Coefficient-level Cauchy product.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.q != rhs.p {
            return Err(Error::ShapeMismatch(format!(
                "series product: {}x{} times {}x{}",
                self.p, self.q, rhs.p, rhs.q
            )));
        }
        let mut out = Self::new(self.p, rhs.q);
        for (&n, a) in &self.coeffs {
            for (&m, b) in &rhs.coeffs {
                let e = out
                    .coeffs
                    .entry(n + m)
                    .or_insert_with(|| CMatrix::zeros(self.p, rhs.q));
                *e += a * b;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn project(&self, side: ProjectionSide) -> Self {
        let mut out = Self::new(self.p, self.q);
        for (&n, c) in &self.coeffs {
            let keep = match side {
                ProjectionSide::Plus => n >= 0,
                ProjectionSide::Minus => n <= 0,
            };
            if keep {
                out.coeffs.insert(n, c.clone());
            }
        }
        out
    }

    /// The series of the pointwise adjoint: coefficient `cₙ*` at `-n`.
    pub fn star(&self) -> Self {
        let mut out = Self::new(self.q, self.p);
        for (&n, c) in &self.coeffs {
            out.coeffs.insert(-n, c.adjoint());
        }
        out
    }

    /// Drops coefficients with norm at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = Self::new(self.p, self.q);
        for (&n, c) in &self.coeffs {
            if cmatrix::frob_norm(c) > tol {
                out.coeffs.insert(n, c.clone());
            }
        }
        out
    }

    /// Largest coefficient distance `max_n ‖aₙ - bₙ‖_op` over the union of
    /// supports.
    pub fn coeff_distance(&self, rhs: &Self) -> f64 {
        let mut keys: Vec<i64> = self.coeffs.keys().chain(rhs.coeffs.keys()).cloned().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|n| cmatrix::op_norm(&(self.coeff(n) - rhs.coeff(n))))
            .fold(0.0, f64::max)
    }

    /// True when every coefficient is bicomplex ♯-symmetric within `tol`
    /// relative to the largest coefficient norm.
    pub fn is_sharp_symmetric(&self, tol: f64) -> Result<bool> {
        if !self.p.is_multiple_of(2) || !self.q.is_multiple_of(2) {
            return Err(Error::OddDimension {
                rows: self.p,
                cols: self.q,
            });
        }
        let scale = self
            .coeffs
            .values()
            .map(cmatrix::frob_norm)
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for c in self.coeffs.values() {
            if bcmatrix::sharp_defect(c)? > tol * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extracts a bicomplex series from a ♯-symmetric complex one.
    pub fn extract_sharp(&self, tol_sym: f64) -> Result<BCLaurentSeries> {
        if !self.p.is_multiple_of(2) || !self.q.is_multiple_of(2) {
            return Err(Error::OddDimension {
                rows: self.p,
                cols: self.q,
            });
        }
        let mut out = BCLaurentSeries::new(self.p / 2, self.q / 2);
        for (&n, c) in &self.coeffs {
            out.insert(n, bcmatrix::extract_sharp(c, tol_sym)?)?;
        }
        Ok(out)
    }
}

/// Forward DFT of each matrix entry over the grid index; returns the
/// coefficients `cₙ = (1/N) Σ_m f(θ_m) e^{-inθ_m}` for `n ∈ [k_min, k_max]`.
pub fn coefficients_from_grid(samples: &[CMatrix], k_min: i64, k_max: i64) -> Result<ChannelSeries> {
    let n_grid = samples.len();
    if n_grid == 0 {
        return Err(Error::InvalidParameter("empty sample grid".into()));
    }
    let (p, q) = samples[0].shape();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_grid);
    let mut bins: Vec<CMatrix> = Vec::new();
    let span = (k_max - k_min + 1).max(0) as usize;
    bins.resize(span, CMatrix::zeros(p, q));
    let mut buf = vec![Complex64::new(0.0, 0.0); n_grid];
    for r in 0..p {
        for c in 0..q {
            for (m, s) in samples.iter().enumerate() {
                buf[m] = s[(r, c)];
            }
            fft.process(&mut buf);
            for (idx, n) in (k_min..=k_max).enumerate() {
                let bin = n.rem_euclid(n_grid as i64) as usize;
                bins[idx][(r, c)] = buf[bin] / n_grid as f64;
            }
        }
    }
    let mut out = ChannelSeries::new(p, q);
    for (idx, n) in (k_min..=k_max).enumerate() {
        out.insert(n, bins[idx].clone())?;
    }
    Ok(out)
}

/// Coefficient recovery from a pointwise sampler on the unit circle.
///
/// Samples at `θ_m = 2πm/N` and returns the coefficients for `|n| ≤ K`.
/// Exact (up to rounding) for trigonometric polynomials of degree below
/// `N - K`; aliasing from higher frequencies folds in at distance `N`.
/// Requires `N ≥ 2K + 2` with `N` a power of two.
pub fn coefficients_from_samples<F>(sampler: F, k: usize, n_grid: usize) -> Result<ChannelSeries>
where
    F: Fn(f64) -> CMatrix + Sync,
{
    if !n_grid.is_power_of_two() || n_grid < 2 * k + 2 {
        return Err(Error::InvalidParameter(format!(
            "grid size {} must be a power of two with N >= 2K+2 = {}",
            n_grid,
            2 * k + 2
        )));
    }
    let samples: Vec<CMatrix> = (0..n_grid)
        .into_par_iter()
        .map(|m| sampler(std::f64::consts::TAU * m as f64 / n_grid as f64))
        .collect();
    coefficients_from_grid(&samples, -(k as i64), k as i64)
}

/// A truncated bicomplex matrix Laurent series.
#[derive(Debug, Clone, PartialEq)]
pub struct BCLaurentSeries {
    p: usize,
    q: usize,
    coeffs: BTreeMap<i64, BCMatrix>,
}

impl BCLaurentSeries {
    pub fn new(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: BCMatrix) -> Self {
        let (p, q) = c.shape();
        let mut s = Self::new(p, q);
        s.coeffs.insert(0, c);
        s
    }

    pub fn identity(p: usize) -> Self {
        Self::constant(BCMatrix::identity(p))
    }

    pub fn scalar_from_pairs(pairs: &[(i64, Bicomplex)]) -> Self {
        let mut s = Self::new(1, 1);
        for &(n, z) in pairs {
            s.coeffs.insert(n, BCMatrix::from_scalar(z));
        }
        s
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn is_square(&self) -> bool {
        self.p == self.q
    }

    pub fn insert(&mut self, n: i64, coeff: BCMatrix) -> Result<()> {
        if coeff.shape() != (self.p, self.q) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient {}x{} in a {}x{} series",
                coeff.nrows(),
                coeff.ncols(),
                self.p,
                self.q
            )));
        }
        self.coeffs.insert(n, coeff);
        Ok(())
    }

    pub fn coeff(&self, n: i64) -> BCMatrix {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| BCMatrix::zeros(self.p, self.q))
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BCMatrix> {
        &self.coeffs
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let min = *self.coeffs.keys().next()?;
        let max = *self.coeffs.keys().next_back()?;
        Some((min, max))
    }

    /// Idempotent channel pair of the coefficient family.
    pub fn split_channels(&self) -> (ChannelSeries, ChannelSeries) {
        let mut c1 = ChannelSeries::new(self.p, self.q);
        let mut c2 = ChannelSeries::new(self.p, self.q);
        for (&n, c) in &self.coeffs {
            let (p1, p2) = c.channels();
            c1.coeffs.insert(n, p1);
            c2.coeffs.insert(n, p2);
        }
        (c1, c2)
    }

    pub fn merge_channels(c1: &ChannelSeries, c2: &ChannelSeries) -> Result<Self> {
        if c1.shape() != c2.shape() {
            return Err(Error::ShapeMismatch("merge: channel shapes differ".into()));
        }
        let (p, q) = c1.shape();
        let mut out = Self::new(p, q);
        let mut keys: Vec<i64> = c1.coeffs.keys().chain(c2.coeffs.keys()).cloned().collect();
        keys.sort_unstable();
        keys.dedup();
        for n in keys {
            out.coeffs
                .insert(n, BCMatrix::from_channels(&c1.coeff(n), &c2.coeff(n))?);
        }
        Ok(out)
    }

    /// Evaluation at a boundary point: channel 1 at `e^{i(t-s)}`, channel 2
    /// at `e^{i(t+s)}`.
    pub fn eval(&self, pt: &BoundaryPoint) -> BCMatrix {
        let (l1, l2) = pt.channels();
        let (c1, c2) = self.split_channels();
        BCMatrix::from_channels(&c1.eval(l1), &c2.eval(l2)).expect("channels share a shape")
    }

    /// `Σₙ (‖fₙ⁽¹⁾‖_op + ‖fₙ⁽²⁾‖_op)`.
    pub fn wiener_norm(&self) -> f64 {
        self.coeffs.values().map(BCMatrix::bc_op_norm).fold(0.0, |a, b| a + b)
    }

    /// Coefficient mass outside `|n| ≤ k`.
    pub fn tail_mass(&self, k: i64) -> f64 {
        self.coeffs
            .iter()
            .filter(|(&n, _)| n.abs() > k)
            .map(|(_, c)| c.bc_op_norm())
            .fold(0.0, |a, b| a + b)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch("series add".into()));
        }
        let mut out = self.clone();
        for (&n, c) in &rhs.coeffs {
            let e = out
                .coeffs
                .entry(n)
                .or_insert_with(|| BCMatrix::zeros(self.p, self.q));
            *e = e.add(c)?;
        }
        Ok(out)
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.q != rhs.p {
            return Err(Error::ShapeMismatch(format!(
                "series product: {}x{} times {}x{}",
                self.p, self.q, rhs.p, rhs.q
            )));
        }
        let mut out = Self::new(self.p, rhs.q);
        for (&n, a) in &self.coeffs {
            for (&m, b) in &rhs.coeffs {
                let prod = a.matmul(b)?;
                let e = out
                    .coeffs
                    .entry(n + m)
                    .or_insert_with(|| BCMatrix::zeros(self.p, rhs.q));
                *e = e.add(&prod)?;
            }
        }
        Ok(out)
    }

    pub fn project(&self, side: ProjectionSide) -> Self {
        let mut out = Self::new(self.p, self.q);
        for (&n, c) in &self.coeffs {
            let keep = match side {
                ProjectionSide::Plus => n >= 0,
                ProjectionSide::Minus => n <= 0,
            };
            if keep {
                out.coeffs.insert(n, c.clone());
            }
        }
        out
    }

    /// Pointwise star-adjoint series: coefficient `(fₙ)*` at `-n`.
    pub fn star(&self) -> Self {
        let mut out = Self::new(self.q, self.p);
        for (&n, c) in &self.coeffs {
            out.coeffs.insert(-n, c.star_adjoint());
        }
        out
    }

    /// Entrywise 2×2-block embedding of every coefficient.
    pub fn embed_sharp(&self) -> ChannelSeries {
        let mut out = ChannelSeries::new(2 * self.p, 2 * self.q);
        for (&n, c) in &self.coeffs {
            out.coeffs.insert(n, c.embed_sharp());
        }
        out
    }

    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = Self::new(self.p, self.q);
        for (&n, c) in &self.coeffs {
            if c.bc_op_norm() > tol {
                out.coeffs.insert(n, c.clone());
            }
        }
        out
    }

    pub fn coeff_distance(&self, rhs: &Self) -> f64 {
        let mut keys: Vec<i64> = self.coeffs.keys().chain(rhs.coeffs.keys()).cloned().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|n| {
                self.coeff(n)
                    .sub(&rhs.coeff(n))
                    .map(|d| d.bc_op_norm())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}
