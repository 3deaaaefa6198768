//! Rational matrix functions as state-space realizations
//! `f(z) = D + C (zI - A)⁻¹ B`, and the circle-related machinery built on
//! them: Riesz spectral projectors, Laurent coefficients, the Stein
//! equation, and realizations of spectral densities `w(z) w(1/z̄)*`.
//!
//! Laurent convention. With `P` the spectral projector of `A` for the
//! eigenvalues outside the closed unit disk, the resolvent expansion on
//! `|z| = 1` gives
//!
//! ```text
//! f(z) = D  +  Σ_{n≥1} [C A^{n-1} (I-P) B] z^{-n}
//!            -  Σ_{n≥0} [C (A|_{range P})^{-n-1} P B] z^{n},
//! ```
//!
//! so the stable part of the spectrum feeds the negative powers and the
//! antistable part the nonnegative ones. [`fourier_from_realization`]
//! returns the coefficient of `z^n` under exactly this convention; it is
//! validated against direct DFT sampling in the test suite.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bcmatrix;
use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};

/// Eigenvalues closer than this to the unit circle make a realization
/// irregular.
pub const TOL_CIRCLE: f64 = 1e-8;

/// Trapezoid nodes for the contour-integral projector.
pub const QUAD_NODES: usize = 4096;

/// State-space realization `D + C (zI - A)⁻¹ B` with `A: N×N`, `B: N×q`,
/// `C: p×N`, `D: p×q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
}

impl Realization {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() || b.nrows() != n || c.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "realization blocks: A {}x{}, B {}x{}, C {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols()
            )));
        }
        if d.shape() != (c.nrows(), b.ncols()) {
            return Err(Error::ShapeMismatch(format!(
                "feedthrough D must be {}x{}, got {}x{}",
                c.nrows(),
                b.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    /// Output shape `(p, q)`.
    pub fn shape(&self) -> (usize, usize) {
        self.d.shape()
    }

    /// `D + C (zI - A)⁻¹ B`; the resolvent solve must be well conditioned.
    pub fn eval(&self, z: Complex64) -> Result<CMatrix> {
        let n = self.state_dim();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let m = CMatrix::identity(n, n) * z - &self.a;
        let x = cmatrix::solve(&m, &self.b).ok_or(Error::SingularResolvent {
            re: z.re,
            im: z.im,
        })?;
        let resid = cmatrix::frob_norm(&(&m * &x - &self.b));
        if resid > 1e-8 * (1.0 + cmatrix::frob_norm(&self.b)) {
            return Err(Error::SingularResolvent { re: z.re, im: z.im });
        }
        Ok(&self.d + &self.c * x)
    }

    /// True when no eigenvalue of `A` lies within `tol` of the unit circle.
    pub fn is_regular_on_circle(&self, tol: f64) -> Result<bool> {
        Ok(cmatrix::eigenvalues(&self.a)?
            .into_iter()
            .all(|l| (l.norm() - 1.0).abs() > tol))
    }
}

/// Sum of principal parts plus a constant: `D + Σ_m Σ_k H_{k,m}/(z-p_m)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub d: CMatrix,
    pub poles: Vec<Pole>,
}

/// One pole with its principal-part coefficients `H_1 .. H_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub location: Complex64,
    pub coeffs: Vec<CMatrix>,
}

impl PartialFractions {
    pub fn eval(&self, z: Complex64) -> CMatrix {
        let mut out = self.d.clone();
        for pole in &self.poles {
            let w = (z - pole.location).inv();
            let mut pw = w;
            for h in &pole.coeffs {
                out += h * pw;
                pw *= w;
            }
        }
        out
    }
}

/// Companion-style realization of a partial-fraction expansion: one
/// `p_m I + superdiagonal` block per pole, `B` stacking the `H` matrices
/// and `C` selecting the first block row.
pub fn build_realization(pf: &PartialFractions) -> Result<Realization> {
    let (a_rows, b_cols) = pf.d.shape();
    for (i, pi) in pf.poles.iter().enumerate() {
        if pi.coeffs.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "pole {} has no principal-part coefficients",
                i
            )));
        }
        for h in &pi.coeffs {
            if h.shape() != (a_rows, b_cols) {
                return Err(Error::ShapeMismatch(format!(
                    "principal-part coefficient {}x{} does not match D {}x{}",
                    h.nrows(),
                    h.ncols(),
                    a_rows,
                    b_cols
                )));
            }
        }
        for pj in &pf.poles[i + 1..] {
            let dist = (pi.location - pj.location).norm();
            if dist <= 1e-12 * (1.0 + pi.location.norm().max(pj.location.norm())) {
                return Err(Error::DuplicatePole {
                    re: pi.location.re,
                    im: pi.location.im,
                });
            }
        }
    }

    let n: usize = pf.poles.iter().map(|p| p.coeffs.len() * a_rows).sum();
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, b_cols);
    let mut c = CMatrix::zeros(a_rows, n);
    let mut offset = 0;
    for pole in &pf.poles {
        let k = pole.coeffs.len();
        for blk in 0..k {
            let at = offset + blk * a_rows;
            for r in 0..a_rows {
                a[(at + r, at + r)] = pole.location;
                if blk + 1 < k {
                    a[(at + r, at + a_rows + r)] = Complex64::new(1.0, 0.0);
                }
            }
            b.view_mut((at, 0), (a_rows, b_cols))
                .copy_from(&pole.coeffs[blk]);
        }
        for r in 0..a_rows {
            c[(r, offset + r)] = Complex64::new(1.0, 0.0);
        }
        offset += k * a_rows;
    }
    Realization::new(a, b, c, pf.d.clone())
}

/// How to compute the spectral projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RieszMethod {
    /// Ordered triangular (Schur) decomposition plus a Sylvester solve.
    Schur,
    /// Trapezoid discretization of the contour integral.
    Quadrature,
}

/// One spectral part of `A`: an orthonormal basis `V` of an invariant
/// subspace, the restriction `V* A V` of `A` to it, and the coordinate map
/// `V* Π` of the associated spectral projector `Π`. Powers of `A` composed
/// with `Π` are computed entirely inside the subspace, so components of
/// the complementary spectrum can never leak in and grow.
#[derive(Debug, Clone)]
struct InvariantPart {
    basis: CMatrix,
    restricted: CMatrix,
    cobasis: CMatrix,
}

impl InvariantPart {
    fn empty(n: usize) -> Self {
        Self {
            basis: CMatrix::zeros(n, 0),
            restricted: CMatrix::zeros(0, 0),
            cobasis: CMatrix::zeros(0, n),
        }
    }

    fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// `(A|_subspace)^m Π rhs`; negative `m` requires the restricted block
    /// to be invertible (true for the antistable part).
    fn apply_power(&self, m: i64, rhs: &CMatrix) -> CMatrix {
        if self.rank() == 0 {
            return CMatrix::zeros(self.basis.nrows(), rhs.ncols());
        }
        let mut coords = &self.cobasis * rhs;
        if m >= 0 {
            for _ in 0..m {
                coords = &self.restricted * coords;
            }
        } else {
            let lu = self.restricted.clone().lu();
            for _ in 0..(-m) {
                coords = lu
                    .solve(&coords)
                    .expect("restricted block is invertible off the unit circle");
            }
        }
        &self.basis * coords
    }
}

/// Spectral projector of `A` onto the invariant subspace of eigenvalues
/// outside the closed unit disk, carrying invariant-subspace bases for
/// both spectral parts so Laurent coefficients can be computed stably.
#[derive(Debug, Clone)]
pub struct RieszProjector {
    projector: CMatrix,
    antistable: InvariantPart,
    stable: InvariantPart,
}

impl RieszProjector {
    pub fn matrix(&self) -> &CMatrix {
        &self.projector
    }

    /// Number of eigenvalues outside the closed unit disk.
    pub fn rank(&self) -> usize {
        self.antistable.rank()
    }
}

fn circle_check(eigs: &[Complex64], tol_circle: f64) -> Result<()> {
    for l in eigs {
        if (l.norm() - 1.0).abs() <= tol_circle {
            return Err(Error::EigenvalueOnCircle {
                re: l.re,
                im: l.im,
                tol: tol_circle,
            });
        }
    }
    Ok(())
}

/// Unitary similarity swapping the adjacent diagonal entries `i`, `i+1` of
/// an upper-triangular `t`, updating `q` accordingly.
fn swap_adjacent(t: &mut CMatrix, q: &mut CMatrix, i: usize) {
    let n = t.nrows();
    let a = t[(i, i)];
    let b = t[(i, i + 1)];
    let c = t[(i + 1, i + 1)];
    // eigenvector of [[a,b],[0,c]] for eigenvalue c
    let v1 = b;
    let v2 = c - a;
    let nrm = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    let g11 = v1 / nrm;
    let g21 = v2 / nrm;
    let g12 = -g21.conj();
    let g22 = g11.conj();
    for col in 0..n {
        let x = t[(i, col)];
        let y = t[(i + 1, col)];
        t[(i, col)] = g11.conj() * x + g21.conj() * y;
        t[(i + 1, col)] = g12.conj() * x + g22.conj() * y;
    }
    for row in 0..n {
        let x = t[(row, i)];
        let y = t[(row, i + 1)];
        t[(row, i)] = x * g11 + y * g21;
        t[(row, i + 1)] = x * g12 + y * g22;
    }
    for row in 0..q.nrows() {
        let x = q[(row, i)];
        let y = q[(row, i + 1)];
        q[(row, i)] = x * g11 + y * g21;
        q[(row, i + 1)] = x * g12 + y * g22;
    }
    t[(i + 1, i)] = Complex64::new(0.0, 0.0);
}

/// Solves `t11 y - y t22 = rhs` for upper-triangular `t11`, `t22` with
/// disjoint spectra, by back-substitution.
fn sylvester_triangular(t11: &CMatrix, t22: &CMatrix, rhs: &CMatrix) -> CMatrix {
    let k = t11.nrows();
    let m = t22.nrows();
    let mut y = CMatrix::zeros(k, m);
    for j in 0..m {
        for i in (0..k).rev() {
            let mut s = rhs[(i, j)];
            for l in (i + 1)..k {
                s -= t11[(i, l)] * y[(l, j)];
            }
            for l in 0..j {
                s += y[(i, l)] * t22[(l, j)];
            }
            y[(i, j)] = s / (t11[(i, i)] - t22[(j, j)]);
        }
    }
    y
}

/// Riesz projection for the spectrum of `a` outside the closed unit disk,
/// `P = I - (1/2πi) ∮_{|z|=1} (zI - a)⁻¹ dz`.
pub fn riesz_projection(a: &CMatrix, method: RieszMethod) -> Result<RieszProjector> {
    riesz_projection_with(a, method, TOL_CIRCLE, QUAD_NODES)
}

pub fn riesz_projection_with(
    a: &CMatrix,
    method: RieszMethod,
    tol_circle: f64,
    quad_nodes: usize,
) -> Result<RieszProjector> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("projector of a non-square matrix".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(RieszProjector {
            projector: CMatrix::zeros(0, 0),
            antistable: InvariantPart::empty(0),
            stable: InvariantPart::empty(0),
        });
    }
    let eigs = cmatrix::eigenvalues(a)?;
    circle_check(&eigs, tol_circle)?;
    let rank = eigs.iter().filter(|l| l.norm() > 1.0).count();

    match method {
        RieszMethod::Schur => {
            let (antistable, projector) = schur_invariant_part(a, true, rank)?;
            let (stable, _) = schur_invariant_part(a, false, n - rank)?;
            Ok(RieszProjector {
                projector,
                antistable,
                stable,
            })
        }
        RieszMethod::Quadrature => {
            let id = CMatrix::identity(n, n);
            let terms: Vec<CMatrix> = (0..quad_nodes)
                .into_par_iter()
                .map(|m| {
                    let z = Complex64::cis(std::f64::consts::TAU * m as f64 / quad_nodes as f64);
                    let resolvent = cmatrix::try_inverse(&(&id * z - a))
                        .expect("circle nodes stay away from the spectrum");
                    resolvent * z
                })
                .collect();
            // fixed-order reduction for bit-stable output
            let mut acc = CMatrix::zeros(n, n);
            for term in &terms {
                acc += term;
            }
            let projector = &id - acc / Complex64::new(quad_nodes as f64, 0.0);
            let complement = &id - &projector;
            let antistable = quadrature_invariant_part(a, &projector, rank);
            let stable = quadrature_invariant_part(a, &complement, n - rank);
            Ok(RieszProjector {
                projector,
                antistable,
                stable,
            })
        }
    }
}

/// Ordered-Schur invariant part: eigenvalues satisfying the modulus
/// predicate are bubbled into the leading `k×k` block, whose basis,
/// restriction and projector coordinates are returned together with the
/// spectral projector onto it.
fn schur_invariant_part(
    a: &CMatrix,
    lead_outside: bool,
    k: usize,
) -> Result<(InvariantPart, CMatrix)> {
    let n = a.nrows();
    if k == 0 {
        return Ok((InvariantPart::empty(n), CMatrix::zeros(n, n)));
    }
    let schur = a
        .clone()
        .try_schur(1e-14, 100_000)
        .ok_or(Error::SchurFailed)?;
    let (mut q, mut t) = schur.unpack();
    let leads = |v: Complex64| {
        if lead_outside {
            v.norm() > 1.0
        } else {
            v.norm() <= 1.0
        }
    };
    loop {
        let mut changed = false;
        for i in 0..n - 1 {
            if !leads(t[(i, i)]) && leads(t[(i + 1, i + 1)]) {
                swap_adjacent(&mut t, &mut q, i);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let t11 = t.view((0, 0), (k, k)).clone_owned();
    let t12 = t.view((0, k), (k, n - k)).clone_owned();
    let t22 = t.view((k, k), (n - k, n - k)).clone_owned();
    let y = sylvester_triangular(&t11, &t22, &t12);
    let q1 = q.view((0, 0), (n, k)).clone_owned();
    let q2 = q.view((0, k), (n, n - k)).clone_owned();
    // projector = Q1 (Q1* + Y Q2*)
    let w_star = q1.adjoint() + &y * q2.adjoint();
    let projector = &q1 * &w_star;
    Ok((
        InvariantPart {
            basis: q1,
            restricted: t11,
            cobasis: w_star,
        },
        projector,
    ))
}

/// Invariant part recovered from a quadrature projector: orthonormal range
/// basis by column-pivoted QR, restriction `V* A V`.
fn quadrature_invariant_part(a: &CMatrix, projector: &CMatrix, rank: usize) -> InvariantPart {
    let n = a.nrows();
    if rank == 0 {
        return InvariantPart::empty(n);
    }
    let qr = projector.clone().col_piv_qr();
    let basis = qr.q().view((0, 0), (n, rank)).clone_owned();
    let restricted = basis.adjoint() * a * &basis;
    let cobasis = basis.adjoint() * projector;
    InvariantPart {
        basis,
        restricted,
        cobasis,
    }
}

/// Laurent coefficient of `z^n` of a realization regular on the circle;
/// see the module docs for the sign and index convention.
pub fn fourier_from_realization(
    r: &Realization,
    proj: &RieszProjector,
    n: i64,
) -> Result<CMatrix> {
    let (p, q) = r.shape();
    let nn = r.state_dim();
    if proj.projector.nrows() != nn {
        return Err(Error::ShapeMismatch(format!(
            "projector is {}x{} but the state dimension is {}",
            proj.projector.nrows(),
            proj.projector.ncols(),
            nn
        )));
    }
    if nn == 0 {
        return Ok(if n == 0 {
            r.d.clone()
        } else {
            CMatrix::zeros(p, q)
        });
    }
    if n <= -1 {
        // stable side: C A^{|n|-1} (I-P) B, powered inside the stable subspace
        let v = proj.stable.apply_power(-n - 1, &r.b);
        Ok(&r.c * v)
    } else {
        // antistable side: D δ_{n0} - C (A|_P)^{-n-1} P B
        let v = proj.antistable.apply_power(-(n + 1), &r.b);
        let mut out = -(&r.c * v);
        if n == 0 {
            out += &r.d;
        }
        Ok(out)
    }
}

/// Unique solution of the Stein equation `x - a x a* = b b*` for a stable
/// `a` (spectral radius below one), by squared (Smith) accumulation with a
/// direct vectorized solve as fallback.
pub fn stein_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "Stein equation: a {}x{}, b {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let rho = cmatrix::spectral_radius(a)?;
    if rho >= 1.0 - 1e-10 {
        return Err(Error::UnstableA { rho });
    }
    let rhs = b * b.adjoint();
    let rhs_scale = cmatrix::frob_norm(&rhs).max(f64::MIN_POSITIVE);

    let mut x = rhs.clone();
    let mut pow = a.clone();
    for _ in 0..128 {
        if cmatrix::frob_norm(&pow) <= 1e-300 {
            break;
        }
        x = &x + &pow * &x * pow.adjoint();
        pow = &pow * &pow;
        if cmatrix::op_norm(&pow) < 1e-18 {
            x = &x + &pow * &x * pow.adjoint();
            break;
        }
    }
    x = (&x + x.adjoint()) * Complex64::new(0.5, 0.0);

    let residual = cmatrix::frob_norm(&(&x - a * &x * a.adjoint() - &rhs));
    if residual <= 1e-12 * rhs_scale {
        return Ok(x);
    }
    // fallback: (I - conj(a) ⊗ a) vec(X) = vec(bb*)
    let n = a.nrows();
    let kron = a.map(|v| v.conj()).kronecker(a);
    let sys = CMatrix::identity(n * n, n * n) - kron;
    let vec_rhs = CMatrix::from_fn(n * n, 1, |i, _| rhs[(i % n, i / n)]);
    let sol = cmatrix::solve(&sys, &vec_rhs)
        .ok_or_else(|| Error::InvalidParameter("Stein system is singular".into()))?;
    let mut x = CMatrix::from_fn(n, n, |r, c| sol[(c * n + r, 0)]);
    x = (&x + x.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(x)
}

/// Realization of the spectral density `f(z) = w(z) w(1/z̄)*` built from a
/// realization `w(z) = d + c (zI - a)⁻¹ b` of its left spectral factor.
///
/// Requires `a` and `d` invertible and both `σ(a)` and `σ(a - b d⁻¹ c)`
/// inside the open unit disk. The complementary (stable-side) Riesz
/// projector of the assembled state matrix is `[[I, X],[0, 0]]` with `X`
/// the Stein solution for `(a, b)`.
pub fn spectral_density_realization(
    a: &CMatrix,
    b: &CMatrix,
    c: &CMatrix,
    d: &CMatrix,
) -> Result<Realization> {
    let m = a.nrows();
    if !a.is_square() || b.nrows() != m || c.ncols() != m || !d.is_square() {
        return Err(Error::ShapeMismatch(
            "spectral factor blocks have inconsistent shapes".into(),
        ));
    }
    if d.nrows() != c.nrows() || d.ncols() != b.ncols() || b.ncols() != c.nrows() {
        return Err(Error::ShapeMismatch(
            "spectral factor must be square: need b: m×p, c: p×m, d: p×p".into(),
        ));
    }
    let a_inv_star = cmatrix::try_inverse(a).ok_or(Error::SingularA)?.adjoint();
    let d_inv = cmatrix::try_inverse(d).ok_or(Error::SingularD)?;

    let rho_a = cmatrix::spectral_radius(a)?;
    if rho_a >= 1.0 {
        return Err(Error::NotStable {
            which: "a",
            rho: rho_a,
        });
    }
    let zero_dyn = a - b * d_inv * c;
    let rho_z = cmatrix::spectral_radius(&zero_dyn)?;
    if rho_z >= 1.0 {
        return Err(Error::NotStable {
            which: "a - b d⁻¹ c",
            rho: rho_z,
        });
    }

    let gamma = d.adjoint() - b.adjoint() * &a_inv_star * c.adjoint();
    let mut big_a = CMatrix::zeros(2 * m, 2 * m);
    big_a.view_mut((0, 0), (m, m)).copy_from(a);
    big_a
        .view_mut((0, m), (m, m))
        .copy_from(&(-(b * b.adjoint() * &a_inv_star)));
    big_a.view_mut((m, m), (m, m)).copy_from(&a_inv_star);

    let p = d.nrows();
    let mut big_b = CMatrix::zeros(2 * m, p);
    big_b.view_mut((0, 0), (m, p)).copy_from(&(b * &gamma));
    big_b
        .view_mut((m, 0), (m, p))
        .copy_from(&(&a_inv_star * c.adjoint()));

    let mut big_c = CMatrix::zeros(p, 2 * m);
    big_c.view_mut((0, 0), (p, m)).copy_from(c);
    big_c
        .view_mut((0, m), (p, m))
        .copy_from(&(-(d * b.adjoint() * &a_inv_star)));

    let big_d = d * &gamma;
    Realization::new(big_a, big_b, big_c, big_d)
}

/// Fourier coefficient `f_k` (for `k ≥ 0`) of the spectral density
/// `w(z) w(1/z̄)*` directly from the factor realization:
/// `f_0 = dd* + cXc*` and `f_k = (db* + cXa*) a*^{k-1} c*`, with `X` the
/// Stein solution; negative coefficients follow from `f_{-k} = f_k*`.
pub fn spectral_fourier_coeffs(
    a: &CMatrix,
    b: &CMatrix,
    c: &CMatrix,
    d: &CMatrix,
    k: usize,
) -> Result<CMatrix> {
    let x = stein_solve(a, b)?;
    if k == 0 {
        return Ok(d * d.adjoint() + c * &x * c.adjoint());
    }
    let mut lead = d * b.adjoint() + c * &x * a.adjoint();
    for _ in 0..k - 1 {
        lead *= a.adjoint();
    }
    Ok(lead * c.adjoint())
}

fn sharp_average(m: &CMatrix, tol: f64, scale: f64) -> Result<CMatrix> {
    let defect = bcmatrix::sharp_defect(m)?;
    if defect > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSharpSymmetric {
            defect: defect / scale.max(f64::MIN_POSITIVE),
            tol,
        });
    }
    Ok((m + bcmatrix::sharp_conjugate(m)?) * Complex64::new(0.5, 0.0))
}

/// Groups eigenvalues into pole clusters; defective eigenvalues of a
/// k-fold pole scatter like ε^(1/k), so the radius is generous and the
/// cluster mean (trace-exact) is used as the pole.
fn cluster_poles(eigs: &[Complex64]) -> Vec<(Complex64, usize)> {
    let scale = eigs.iter().map(|l| l.norm()).fold(1.0, f64::max);
    let tol = 1e-4 * scale;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &l in eigs {
        let mut placed = false;
        for (mean, count) in clusters.iter_mut() {
            if (l - *mean).norm() <= tol {
                let n = *count as f64;
                *mean = (*mean * n + l) / (n + 1.0);
                *count += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((l, 1));
        }
    }
    clusters
}

/// Replaces a realization whose values on the circle are ♯-symmetric by one
/// whose `A, B, C, D` are blockwise ♯-symmetric, without changing the
/// transfer function beyond 1e-8 on the circle.
///
/// Already-symmetric realizations are returned essentially unchanged.
/// Otherwise partial fractions are re-extracted: poles come from the
/// eigenvalues of `A` (no blind identification), principal parts from
/// contour quadrature around each pole, and each coefficient is certified
/// ♯-symmetric before averaging with its ♯-conjugate.
pub fn sharp_symmetrize_realization(r: &Realization) -> Result<Realization> {
    let (p, q) = r.shape();
    if p % 2 != 0 || q % 2 != 0 {
        return Err(Error::OddDimension { rows: p, cols: q });
    }
    let tol_sym = 1e-8;

    // fast path: all four blocks already ♯-symmetric
    if r.state_dim().is_multiple_of(2) {
        let blocks = [&r.a, &r.b, &r.c, &r.d];
        let all_symmetric = blocks.iter().all(|m| {
            bcmatrix::sharp_defect(m)
                .map(|d| d <= 1e-12 * (1.0 + cmatrix::frob_norm(m)))
                .unwrap_or(false)
        });
        if all_symmetric {
            return Ok(Realization {
                a: sharp_average(&r.a, 1.0, 1.0)?,
                b: sharp_average(&r.b, 1.0, 1.0)?,
                c: sharp_average(&r.c, 1.0, 1.0)?,
                d: sharp_average(&r.d, 1.0, 1.0)?,
            });
        }
    }

    // certify the transfer function itself is ♯-symmetric on the circle
    let n_check = 64;
    let mut circle_scale = 0.0f64;
    let mut samples = Vec::with_capacity(n_check);
    for m in 0..n_check {
        let z = Complex64::cis(std::f64::consts::TAU * m as f64 / n_check as f64);
        let v = r.eval(z)?;
        circle_scale = circle_scale.max(cmatrix::frob_norm(&v));
        samples.push((z, v));
    }
    for (_, v) in &samples {
        let defect = bcmatrix::sharp_defect(v)?;
        if defect > tol_sym * circle_scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotSharpSymmetric {
                defect: defect / circle_scale.max(f64::MIN_POSITIVE),
                tol: tol_sym,
            });
        }
    }

    // poles and orders from the state matrix
    let eigs = cmatrix::eigenvalues(&r.a)?;
    let clusters = cluster_poles(&eigs);

    let mut poles = Vec::new();
    for (idx, &(pole, order)) in clusters.iter().enumerate() {
        let mut radius: f64 = 0.5;
        for (jdx, &(other, _)) in clusters.iter().enumerate() {
            if jdx != idx {
                radius = radius.min(0.4 * (pole - other).norm());
            }
        }
        radius = radius.max(1e-3);
        let nodes = 256;
        let mut coeffs = Vec::with_capacity(order);
        for k in 1..=order {
            let mut acc = CMatrix::zeros(p, q);
            for mth in 0..nodes {
                let phase = Complex64::cis(std::f64::consts::TAU * mth as f64 / nodes as f64);
                let z = pole + phase * radius;
                let fv = r.eval(z)?;
                // (1/2πi) ∮ f(z)(z-p)^{k-1} dz with z = p + r e^{iθ}
                acc += fv * ((phase * radius).powu(k as u32) / nodes as f64);
            }
            coeffs.push(acc);
        }
        // drop negligible high-order parts, then the pole itself if empty
        let drop_tol = 1e-9 * (1.0 + circle_scale);
        while coeffs
            .last()
            .map(|h| cmatrix::frob_norm(h) <= drop_tol)
            .unwrap_or(false)
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            continue;
        }
        let coeffs = coeffs
            .iter()
            .map(|h| sharp_average(h, tol_sym, 1.0 + circle_scale))
            .collect::<Result<Vec<_>>>()?;
        poles.push(Pole {
            location: pole,
            coeffs,
        });
    }

    let d = sharp_average(&r.d, tol_sym, 1.0 + circle_scale)?;
    let rebuilt = build_realization(&PartialFractions { d, poles })?;

    // reconstruction certificate on the circle
    let mut residual = 0.0f64;
    for (z, v) in &samples {
        let w = rebuilt.eval(*z)?;
        residual = residual.max(cmatrix::frob_norm(&(w - v)));
    }
    let tol_recon = 1e-8 * (1.0 + circle_scale);
    if residual > tol_recon {
        return Err(Error::PoleExtraction {
            residual,
            tol: tol_recon,
        });
    }
    Ok(rebuilt)
}
