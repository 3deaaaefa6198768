//! Bicomplex matrices and their ♯-symmetric complex embedding.
//!
//! A `p×q` bicomplex matrix `M = M₁ + j M₂` is stored as the cartesian pair
//! `(M₁, M₂)`; its idempotent channels are `P₁ = M₁ - i M₂` and
//! `P₂ = M₁ + i M₂`, in which products and sums act independently.
//!
//! The embedding [`BCMatrix::embed_sharp`] replaces every entry
//! `z₁ + j z₂` inline by the 2×2 block
//!
//! ```text
//! [ z₁  -z₂ ]
//! [ z₂   z₁ ]
//! ```
//!
//! producing a `2p×2q` complex matrix. The image is exactly the set of
//! matrices fixed by the ♯-conjugation `M ↦ J_a M J_b*`, where `J_a` is the
//! block-diagonal stack of `J = [[0,-1],[1,0]]` matching this inline block
//! layout. A fixed permutation ([`interleaved_to_block`]) converts to the
//! big-block form `[[M₁,-M₂],[M₂,M₁]]`, whose ♯-structure matrix is the
//! half-split `J ⊗ I_a`; the two conventions are permutation-similar.

use num_complex::Complex64;

use crate::bicomplex::Bicomplex;
use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};

/// Default relative tolerance for ♯-symmetry certificates.
pub const TOL_SYM: f64 = 1e-10;

/// A bicomplex matrix in cartesian storage `M₁ + j M₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct BCMatrix {
    m1: CMatrix,
    m2: CMatrix,
}

impl BCMatrix {
    pub fn new(m1: CMatrix, m2: CMatrix) -> Result<Self> {
        if m1.shape() != m2.shape() {
            return Err(Error::ShapeMismatch(format!(
                "cartesian parts must share a shape, got {}x{} and {}x{}",
                m1.nrows(),
                m1.ncols(),
                m2.nrows(),
                m2.ncols()
            )));
        }
        Ok(Self { m1, m2 })
    }

    pub fn zeros(p: usize, q: usize) -> Self {
        Self {
            m1: CMatrix::zeros(p, q),
            m2: CMatrix::zeros(p, q),
        }
    }

    pub fn identity(p: usize) -> Self {
        Self {
            m1: CMatrix::identity(p, p),
            m2: CMatrix::zeros(p, p),
        }
    }

    /// 1×1 matrix holding a single bicomplex scalar.
    pub fn from_scalar(z: Bicomplex) -> Self {
        Self {
            m1: CMatrix::from_element(1, 1, z.z1),
            m2: CMatrix::from_element(1, 1, z.z2),
        }
    }

    /// `z · I_p`.
    pub fn scalar_identity(p: usize, z: Bicomplex) -> Self {
        Self {
            m1: CMatrix::identity(p, p) * z.z1,
            m2: CMatrix::identity(p, p) * z.z2,
        }
    }

    pub fn from_channels(p1: &CMatrix, p2: &CMatrix) -> Result<Self> {
        if p1.shape() != p2.shape() {
            return Err(Error::ShapeMismatch(format!(
                "channels must share a shape, got {}x{} and {}x{}",
                p1.nrows(),
                p1.ncols(),
                p2.nrows(),
                p2.ncols()
            )));
        }
        // M₁ = (P₁+P₂)/2, M₂ = i(P₁-P₂)/2
        let half = Complex64::new(0.5, 0.0);
        let m1 = (p1 + p2) * half;
        let m2 = (p1 - p2) * Complex64::new(0.0, 0.5);
        Ok(Self { m1, m2 })
    }

    pub fn nrows(&self) -> usize {
        self.m1.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.m1.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.m1.shape()
    }

    pub fn m1(&self) -> &CMatrix {
        &self.m1
    }

    pub fn m2(&self) -> &CMatrix {
        &self.m2
    }

    /// Idempotent channels `(P₁, P₂) = (M₁ - i M₂, M₁ + i M₂)`.
    pub fn channels(&self) -> (CMatrix, CMatrix) {
        let i = Complex64::new(0.0, 1.0);
        (&self.m1 - &self.m2 * i, &self.m1 + &self.m2 * i)
    }

    pub fn entry(&self, r: usize, c: usize) -> Bicomplex {
        Bicomplex {
            z1: self.m1[(r, c)],
            z2: self.m2[(r, c)],
        }
    }

    pub fn set_entry(&mut self, r: usize, c: usize, z: Bicomplex) {
        self.m1[(r, c)] = z.z1;
        self.m2[(r, c)] = z.z2;
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "add: {}x{} vs {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(Self {
            m1: &self.m1 + &rhs.m1,
            m2: &self.m2 + &rhs.m2,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "sub: {}x{} vs {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(Self {
            m1: &self.m1 - &rhs.m1,
            m2: &self.m2 - &rhs.m2,
        })
    }

    /// Matrix product, computed channelwise: `(MN)` has channels
    /// `(P₁Q₁, P₂Q₂)`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        let (p1, p2) = self.channels();
        let (q1, q2) = rhs.channels();
        Self::from_channels(&(p1 * q1), &(p2 * q2))
    }

    pub fn scale(&self, z: Bicomplex) -> Self {
        let (p1, p2) = self.channels();
        let (l1, l2) = z.idempotent();
        Self::from_channels(&(p1 * l1), &(p2 * l2)).expect("channels share a shape")
    }

    /// Conjugate transpose with the star conjugation entrywise; acts as the
    /// ordinary adjoint on each channel.
    pub fn star_adjoint(&self) -> Self {
        let (p1, p2) = self.channels();
        Self::from_channels(&p1.adjoint(), &p2.adjoint()).expect("channels share a shape")
    }

    /// Hermitian-PSD test: both channels Hermitian with smallest eigenvalue
    /// at least `-tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        if !self.m1.is_square() {
            return false;
        }
        let (p1, p2) = self.channels();
        cmatrix::is_hermitian_psd(&p1, 1e-10, tol) && cmatrix::is_hermitian_psd(&p2, 1e-10, tol)
    }

    /// `‖P₁‖_op + ‖P₂‖_op`, the bicomplex matrix norm. For scalars this is
    /// the dual Lie norm, so `‖I_p‖ = 2`.
    pub fn bc_op_norm(&self) -> f64 {
        let (p1, p2) = self.channels();
        cmatrix::op_norm(&p1) + cmatrix::op_norm(&p2)
    }

    /// Inline 2×2-block embedding into `C^{2p×2q}`.
    pub fn embed_sharp(&self) -> CMatrix {
        let (p, q) = self.shape();
        let mut out = CMatrix::zeros(2 * p, 2 * q);
        for r in 0..p {
            for c in 0..q {
                let z1 = self.m1[(r, c)];
                let z2 = self.m2[(r, c)];
                out[(2 * r, 2 * c)] = z1;
                out[(2 * r, 2 * c + 1)] = -z2;
                out[(2 * r + 1, 2 * c)] = z2;
                out[(2 * r + 1, 2 * c + 1)] = z1;
            }
        }
        out
    }
}

/// Inverse of [`BCMatrix::embed_sharp`].
///
/// Requires even dimensions and ♯-symmetry within `tol_sym` relative to
/// `‖C‖_F`; exact embeddings extract exactly.
pub fn extract_sharp(c: &CMatrix, tol_sym: f64) -> Result<BCMatrix> {
    let defect = sharp_defect(c)?;
    let scale = cmatrix::frob_norm(c);
    if defect > tol_sym * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSharpSymmetric {
            defect: defect / scale.max(f64::MIN_POSITIVE),
            tol: tol_sym,
        });
    }
    let (p, q) = (c.nrows() / 2, c.ncols() / 2);
    let mut m1 = CMatrix::zeros(p, q);
    let mut m2 = CMatrix::zeros(p, q);
    for r in 0..p {
        for s in 0..q {
            m1[(r, s)] = (c[(2 * r, 2 * s)] + c[(2 * r + 1, 2 * s + 1)]) * 0.5;
            m2[(r, s)] = (c[(2 * r + 1, 2 * s)] - c[(2 * r, 2 * s + 1)]) * 0.5;
        }
    }
    Ok(BCMatrix { m1, m2 })
}

/// The structural matrix of the ♯-conjugation for the inline block layout:
/// the `2a×2a` block-diagonal stack of `J = [[0,-1],[1,0]]`.
///
/// It is unitary (`J_a J_a* = I`) and permutation-similar to the half-split
/// Kronecker form `J ⊗ I_a` used with the big-block layout; see
/// [`interleaved_to_block`].
#[derive(Debug, Clone, PartialEq)]
pub struct SharpStructure {
    a: usize,
    j_a: CMatrix,
}

impl SharpStructure {
    pub fn new(a: usize) -> Self {
        let mut j_a = CMatrix::zeros(2 * a, 2 * a);
        for blk in 0..a {
            j_a[(2 * blk, 2 * blk + 1)] = Complex64::new(-1.0, 0.0);
            j_a[(2 * blk + 1, 2 * blk)] = Complex64::new(1.0, 0.0);
        }
        Self { a, j_a }
    }

    pub fn block_count(&self) -> usize {
        self.a
    }

    pub fn j_a(&self) -> &CMatrix {
        &self.j_a
    }
}

/// ♯-conjugate `J_a C J_b*` of a `2a×2b` matrix, computed blockwise:
/// each 2×2 block `[[α,β],[γ,δ]]` maps to `[[δ,-γ],[-β,α]]`.
pub fn sharp_conjugate(c: &CMatrix) -> Result<CMatrix> {
    if !c.nrows().is_multiple_of(2) || !c.ncols().is_multiple_of(2) {
        return Err(Error::OddDimension {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    let (a, b) = (c.nrows() / 2, c.ncols() / 2);
    let mut out = CMatrix::zeros(2 * a, 2 * b);
    for r in 0..a {
        for s in 0..b {
            let alpha = c[(2 * r, 2 * s)];
            let beta = c[(2 * r, 2 * s + 1)];
            let gamma = c[(2 * r + 1, 2 * s)];
            let delta = c[(2 * r + 1, 2 * s + 1)];
            out[(2 * r, 2 * s)] = delta;
            out[(2 * r, 2 * s + 1)] = -gamma;
            out[(2 * r + 1, 2 * s)] = -beta;
            out[(2 * r + 1, 2 * s + 1)] = alpha;
        }
    }
    Ok(out)
}

/// Frobenius norm of `C - C♯`.
pub fn sharp_defect(c: &CMatrix) -> Result<f64> {
    let conj = sharp_conjugate(c)?;
    Ok(cmatrix::frob_norm(&(c - conj)))
}

pub fn is_sharp_symmetric(c: &CMatrix, tol: f64) -> Result<bool> {
    let defect = sharp_defect(c)?;
    Ok(defect <= tol * (1.0 + cmatrix::frob_norm(c)))
}

/// Permutation taking the inline 2×2-block layout to the big-block layout
/// `[[M₁,-M₂],[M₂,M₁]]`: row `2r+h` of a `2p`-row matrix moves to `hp + r`.
pub fn interleaved_to_block(c: &CMatrix) -> Result<CMatrix> {
    if !c.nrows().is_multiple_of(2) || !c.ncols().is_multiple_of(2) {
        return Err(Error::OddDimension {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    let (p, q) = (c.nrows() / 2, c.ncols() / 2);
    let mut out = CMatrix::zeros(2 * p, 2 * q);
    for r in 0..p {
        for h in 0..2 {
            for s in 0..q {
                for g in 0..2 {
                    out[(h * p + r, g * q + s)] = c[(2 * r + h, 2 * s + g)];
                }
            }
        }
    }
    Ok(out)
}

/// Inverse permutation of [`interleaved_to_block`].
pub fn block_to_interleaved(c: &CMatrix) -> Result<CMatrix> {
    if !c.nrows().is_multiple_of(2) || !c.ncols().is_multiple_of(2) {
        return Err(Error::OddDimension {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    let (p, q) = (c.nrows() / 2, c.ncols() / 2);
    let mut out = CMatrix::zeros(2 * p, 2 * q);
    for r in 0..p {
        for h in 0..2 {
            for s in 0..q {
                for g in 0..2 {
                    out[(2 * r + h, 2 * s + g)] = c[(h * p + r, g * q + s)];
                }
            }
        }
    }
    Ok(out)
}
