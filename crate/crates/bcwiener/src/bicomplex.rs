//! Scalar bicomplex arithmetic.
//!
//! A bicomplex number is `Z = z₁ + j z₂` with commuting imaginary units
//! `i`, `j` and hyperbolic unit `k = ij` (`k² = 1`). The idempotents
//! `e₁ = (1+k)/2`, `e₂ = (1-k)/2` split the algebra into two complex
//! channels
//!
//! ```text
//! Z = λ₁ e₁ + λ₂ e₂,   λ₁ = z₁ - i z₂,   λ₂ = z₁ + i z₂,
//! ```
//!
//! in which multiplication, powers and inversion act componentwise.
//! Canonical storage is cartesian `(z₁, z₂)`; channel pairs are computed on
//! demand so neither basis is privileged.
//!
//! Note on scaling: the dual Lie norm here is literally `|λ₁| + |λ₂|`
//! (no `1/2` factor), so `‖1‖ = 2`. This keeps submultiplicativity exact
//! and matches the matrix norm used by [`crate::bcmatrix`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance deciding when a channel counts as a zero divisor.
pub const TOL_INV_REL: f64 = 1e-12;

/// Default absolute tolerance for hyperbolic-positivity tests.
pub const TOL_HYPERBOLIC: f64 = 1e-10;

/// A bicomplex number `z₁ + j z₂` in cartesian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bicomplex {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// Hyperbolic-valued norm `|λ₁| e₁ + |λ₂| e₂`, an element of the cone 𝔻₊.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicNorm {
    pub c1: f64,
    pub c2: f64,
}

/// Which of the three bicomplex conjugations to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjugation {
    /// `conj(z₁) + j conj(z₂)`
    Bar,
    /// `z₁ - j z₂`
    Dagger,
    /// `conj(z₁) - j conj(z₂)`, the composition of the other two
    Star,
}

impl Bicomplex {
    /// Build from cartesian parts. Panics on non-finite components; file
    /// input goes through [`crate::jsonio`], which rejects them as schema
    /// errors instead.
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        assert!(
            z1.re.is_finite() && z1.im.is_finite() && z2.re.is_finite() && z2.im.is_finite(),
            "bicomplex components must be finite"
        );
        Self { z1, z2 }
    }

    pub fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// The first imaginary unit `i`.
    pub fn i() -> Self {
        Self::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0))
    }

    /// The second imaginary unit `j`.
    pub fn j() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// The hyperbolic unit `k = ij`.
    pub fn k() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0))
    }

    /// Idempotent `e₁ = (1+k)/2`.
    pub fn e1() -> Self {
        Self::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5))
    }

    /// Idempotent `e₂ = (1-k)/2`.
    pub fn e2() -> Self {
        Self::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.5))
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, Complex64::new(0.0, 0.0))
    }

    /// Idempotent channel pair `(λ₁, λ₂) = (z₁ - i z₂, z₁ + i z₂)`.
    pub fn idempotent(&self) -> (Complex64, Complex64) {
        let iz2 = Complex64::new(-self.z2.im, self.z2.re); // i·z₂
        (self.z1 - iz2, self.z1 + iz2)
    }

    /// Rebuild from channels: `z₁ = (λ₁+λ₂)/2`, `z₂ = i(λ₁-λ₂)/2`.
    pub fn from_idempotent(l1: Complex64, l2: Complex64) -> Self {
        let z1 = (l1 + l2) * 0.5;
        let d = (l1 - l2) * 0.5;
        let z2 = Complex64::new(-d.im, d.re); // i·(λ₁-λ₂)/2
        Self { z1, z2 }
    }

    /// Channelwise inverse `λ₁⁻¹ e₁ + λ₂⁻¹ e₂`.
    ///
    /// Fails with [`Error::ZeroDivisor`] when either channel modulus is at
    /// most `TOL_INV_REL` times the dual Lie norm; the zero-divisor set is
    /// scale-invariant so the test is relative.
    pub fn inverse(&self) -> Result<Self> {
        let (l1, l2) = self.idempotent();
        let tol = TOL_INV_REL * (l1.norm() + l2.norm());
        if l1.norm() <= tol || l2.norm() <= tol {
            return Err(Error::ZeroDivisor {
                l1: l1.norm(),
                l2: l2.norm(),
                tol,
            });
        }
        Ok(Self::from_idempotent(l1.inv(), l2.inv()))
    }

    pub fn conjugate(&self, kind: Conjugation) -> Self {
        match kind {
            Conjugation::Bar => Self {
                z1: self.z1.conj(),
                z2: self.z2.conj(),
            },
            Conjugation::Dagger => Self {
                z1: self.z1,
                z2: -self.z2,
            },
            Conjugation::Star => Self {
                z1: self.z1.conj(),
                z2: -self.z2.conj(),
            },
        }
    }

    /// Dual Lie norm `|λ₁| + |λ₂|` (without the 1/2 factor, so `‖1‖ = 2`).
    pub fn dual_lie_norm(&self) -> f64 {
        let (l1, l2) = self.idempotent();
        l1.norm() + l2.norm()
    }

    /// Lie norm `max(|λ₁|, |λ₂|)`.
    pub fn lie_norm(&self) -> f64 {
        let (l1, l2) = self.idempotent();
        l1.norm().max(l2.norm())
    }

    /// Hyperbolic-valued norm `|λ₁| e₁ + |λ₂| e₂`.
    pub fn hyperbolic_norm(&self) -> HyperbolicNorm {
        let (l1, l2) = self.idempotent();
        HyperbolicNorm {
            c1: l1.norm(),
            c2: l2.norm(),
        }
    }

    /// Membership in the cone 𝔻₊: both channels real within `tol` and
    /// greater than `tol`.
    pub fn is_hyperbolic_positive(&self, tol: f64) -> bool {
        let (l1, l2) = self.idempotent();
        l1.im.abs() <= tol && l2.im.abs() <= tol && l1.re > tol && l2.re > tol
    }

    /// Integer power via the channel power law.
    pub fn powu(&self, n: u32) -> Self {
        let (l1, l2) = self.idempotent();
        Self::from_idempotent(l1.powu(n), l2.powu(n))
    }
}

impl std::ops::Add for Bicomplex {
    type Output = Bicomplex;
    fn add(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex {
            z1: self.z1 + rhs.z1,
            z2: self.z2 + rhs.z2,
        }
    }
}

impl std::ops::Sub for Bicomplex {
    type Output = Bicomplex;
    fn sub(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex {
            z1: self.z1 - rhs.z1,
            z2: self.z2 - rhs.z2,
        }
    }
}

impl std::ops::Neg for Bicomplex {
    type Output = Bicomplex;
    fn neg(self) -> Bicomplex {
        Bicomplex {
            z1: -self.z1,
            z2: -self.z2,
        }
    }
}

impl std::ops::Mul for Bicomplex {
    type Output = Bicomplex;
    // (z₁ + j z₂)(w₁ + j w₂) = (z₁w₁ - z₂w₂) + j (z₁w₂ + z₂w₁), since j² = -1
    fn mul(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex {
            z1: self.z1 * rhs.z1 - self.z2 * rhs.z2,
            z2: self.z1 * rhs.z2 + self.z2 * rhs.z1,
        }
    }
}

impl std::ops::Mul<f64> for Bicomplex {
    type Output = Bicomplex;
    fn mul(self, rhs: f64) -> Bicomplex {
        Bicomplex {
            z1: self.z1 * rhs,
            z2: self.z2 * rhs,
        }
    }
}

/// A point `(t, s)` of the distinguished boundary ∂𝕂 = { e^{it} e^{js} }.
///
/// The channel arguments are `λ₁ = e^{i(t-s)}` and `λ₂ = e^{i(t+s)}`; both
/// are unimodular, so every boundary element is invertible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    t: f64,
    s: f64,
}

impl BoundaryPoint {
    /// Angles are kept as given: the boundary value is 2π-periodic in each,
    /// and band-limited approximants ([`crate::superosc`]) need the raw
    /// angles, not the torus representative.
    pub fn new(t: f64, s: f64) -> Self {
        assert!(t.is_finite() && s.is_finite(), "angles must be finite");
        Self { t, s }
    }

    /// The representative with both angles wrapped into `[0, 2π)`.
    pub fn wrapped(&self) -> Self {
        let two_pi = std::f64::consts::TAU;
        Self {
            t: self.t.rem_euclid(two_pi),
            s: self.s.rem_euclid(two_pi),
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// The bicomplex value `e^{it} e^{js}`, i.e. `z₁ = e^{it} cos s`,
    /// `z₂ = e^{it} sin s`.
    pub fn value(&self) -> Bicomplex {
        let eit = Complex64::cis(self.t);
        Bicomplex {
            z1: eit * self.s.cos(),
            z2: eit * self.s.sin(),
        }
    }

    /// Unimodular channel values `(e^{i(t-s)}, e^{i(t+s)})`.
    pub fn channels(&self) -> (Complex64, Complex64) {
        (Complex64::cis(self.t - self.s), Complex64::cis(self.t + self.s))
    }

    /// Channel arguments `(t-s, t+s)`.
    pub fn channel_angles(&self) -> (f64, f64) {
        (self.t - self.s, self.t + self.s)
    }
}
