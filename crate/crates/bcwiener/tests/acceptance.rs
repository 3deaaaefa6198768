//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its timing (run with `--nocapture` to see them).

use std::time::Instant;

use bcwiener::bcmatrix::BCMatrix;
use bcwiener::bicomplex::{Bicomplex, BoundaryPoint};
use bcwiener::cmatrix::{self, CMatrix};
use bcwiener::realization::{
    fourier_from_realization, riesz_projection, spectral_density_realization,
    spectral_fourier_coeffs, stein_solve, Realization, RieszMethod,
};
use bcwiener::series::BCLaurentSeries;
use bcwiener::spectral::{
    channel_uniqueness, factor_uniqueness_unitary, invert, sharp_route_factorize,
    spectral_factorize, FactorizeOptions,
};
use bcwiener::superosc::{
    approximation_error, channel_angle_grid, superosc_coeffs, superosc_eval, superosc_eval_sum,
};
use bcwiener::Error;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    c(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

fn rand_bicomplex(rng: &mut ChaCha8Rng, scale: f64) -> Bicomplex {
    Bicomplex::new(rand_complex(rng, scale), rand_complex(rng, scale))
}

fn rand_cmatrix(rng: &mut ChaCha8Rng, p: usize, q: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(p, q, |_, _| rand_complex(rng, scale))
}

fn rand_bcmatrix(rng: &mut ChaCha8Rng, p: usize, q: usize, scale: f64) -> BCMatrix {
    BCMatrix::new(
        rand_cmatrix(rng, p, q, scale),
        rand_cmatrix(rng, p, q, scale),
    )
    .unwrap()
}

fn rand_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    rand_cmatrix(rng, n, n, 1.0).qr().q()
}

/// Causal bicomplex series with Hermitian-PD dominant constant term.
fn random_causal_pd(rng: &mut ChaCha8Rng, p: usize, degree: i64) -> BCLaurentSeries {
    let mut g = BCLaurentSeries::new(p, p);
    let g1 = rand_cmatrix(rng, p, p, 1.0);
    let g2 = rand_cmatrix(rng, p, p, 1.0);
    let bump = CMatrix::identity(p, p) * c(p as f64 + 1.0, 0.0);
    let p1 = &g1 * g1.adjoint() + &bump;
    let p2 = &g2 * g2.adjoint() + &bump;
    g.insert(0, BCMatrix::from_channels(&p1, &p2).unwrap())
        .unwrap();
    let tail = 0.3 / degree.max(1) as f64;
    for n in 1..=degree {
        g.insert(n, rand_bcmatrix(rng, p, p, tail)).unwrap();
    }
    g
}

/// Direct-summation DFT coefficient, independent of the library FFT path.
fn dft_coefficient(samples: &[CMatrix], n: i64) -> CMatrix {
    let len = samples.len() as f64;
    let (p, q) = samples[0].shape();
    let mut acc = CMatrix::zeros(p, q);
    for (m, v) in samples.iter().enumerate() {
        let phase = Complex64::cis(-std::f64::consts::TAU * n as f64 * m as f64 / len);
        acc += v * phase;
    }
    acc / c(len, 0.0)
}

#[test]
fn criterion_1_idempotent_algebra() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let trials = 10_000;
    for i in 0..trials {
        let z = rand_bicomplex(&mut rng, 2.0);
        let w = rand_bicomplex(&mut rng, 2.0);
        let (l1, l2) = z.idempotent();
        let (m1, m2) = w.idempotent();
        let scale = z.dual_lie_norm().max(1e-6) * w.dual_lie_norm().max(1e-6);

        let (p1, p2) = (z * w).idempotent();
        assert!((p1 - l1 * m1).norm() <= 1e-12 * scale);
        assert!((p2 - l2 * m2).norm() <= 1e-12 * scale);

        let (s1, s2) = (z + w).idempotent();
        let add_scale = z.dual_lie_norm() + w.dual_lie_norm() + 1.0;
        assert!((s1 - (l1 + m1)).norm() <= 1e-12 * add_scale);
        assert!((s2 - (l2 + m2)).norm() <= 1e-12 * add_scale);

        let n = (i % 33) as u32;
        let zn = z * (1.0 / (1.0 + z.lie_norm()));
        let (q1, q2) = zn.powu(n).idempotent();
        let (l1n, l2n) = zn.idempotent();
        assert!((q1 - l1n.powu(n)).norm() <= 1e-12 * 2.0);
        assert!((q2 - l2n.powu(n)).norm() <= 1e-12 * 2.0);

        let (h1, h2) = z.idempotent();
        if h1.norm().min(h2.norm()) > 1e-3 * z.dual_lie_norm() {
            let inv = z.inverse().expect("well-conditioned inverse");
            let prod = z * inv;
            assert!((prod.z1 - c(1.0, 0.0)).norm() <= 1e-12);
            assert!(prod.z2.norm() <= 1e-12);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance 1 (idempotent algebra, {} pairs): PASS [{} ms]",
        trials,
        elapsed.as_millis()
    );
}

#[test]
fn criterion_2_norm_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let trials = 10_000;
    let mut violations = 0usize;
    for _ in 0..trials {
        let z = rand_bicomplex(&mut rng, 3.0);
        let w = rand_bicomplex(&mut rng, 3.0);
        let lhs = (z * w).dual_lie_norm();
        let rhs = z.dual_lie_norm() * w.dual_lie_norm();
        if lhs > rhs * (1.0 + 1e-14) + 1e-14 {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
    let elapsed = start.elapsed();
    println!(
        "acceptance 2 (dual-Lie submultiplicativity, {} pairs, {} violations): PASS [{} ms]",
        trials,
        violations,
        elapsed.as_millis()
    );
}

#[test]
fn criterion_3_embedding_isomorphism() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let trials = 1000;
    for i in 0..trials {
        let p = if i % 2 == 0 { 2 } else { 4 };
        let m = rand_bcmatrix(&mut rng, p, p, 1.5);
        let n = rand_bcmatrix(&mut rng, p, p, 1.5);
        let scale = (m.bc_op_norm() + 1.0) * (n.bc_op_norm() + 1.0);

        let sum = m.add(&n).unwrap().embed_sharp();
        assert!(
            cmatrix::frob_norm(&(&sum - (m.embed_sharp() + n.embed_sharp()))) <= 1e-10 * scale
        );
        let prod = m.matmul(&n).unwrap().embed_sharp();
        assert!(
            cmatrix::frob_norm(&(&prod - m.embed_sharp() * n.embed_sharp())) <= 1e-10 * scale
        );
        let star = m.star_adjoint().embed_sharp();
        assert!(cmatrix::frob_norm(&(&star - m.embed_sharp().adjoint())) <= 1e-10 * scale);

        // positivity equivalence on a Gram instance and an indefinite shift
        let gram = m.matmul(&m.star_adjoint()).unwrap();
        let tol = 1e-10 * (1.0 + gram.bc_op_norm());
        assert!(gram.is_positive(tol));
        assert!(cmatrix::min_hermitian_eigenvalue(&gram.embed_sharp()) >= -tol);

        let shift = gram.bc_op_norm() + 1.0;
        let shifted = gram
            .sub(&BCMatrix::scalar_identity(p, Bicomplex::from_real(shift)))
            .unwrap();
        assert!(!shifted.is_positive(tol));
        assert!(cmatrix::min_hermitian_eigenvalue(&shifted.embed_sharp()) < -tol);
    }
    let elapsed = start.elapsed();
    println!(
        "acceptance 3 (embedding *-isomorphism + positivity, {} instances): PASS [{} ms]",
        trials,
        elapsed.as_millis()
    );
}

#[test]
fn criterion_4_inversion() {
    let start = Instant::now();

    // geometric scalar inverse
    let f = BCLaurentSeries::scalar_from_pairs(&[
        (0, Bicomplex::one()),
        (1, Bicomplex::from_real(-0.5)),
    ]);
    let inv = invert(&f, 40, 256, 1e-9).unwrap();
    assert!(inv.residual <= 1e-9, "residual {}", inv.residual);
    for n in 0..=40i64 {
        let got = inv.inverse.coeff(n).entry(0, 0);
        assert!((got.z1.re - 2.0f64.powi(-n as i32)).abs() <= 1e-10, "n={n}");
        assert!(got.z1.im.abs() <= 1e-12 && got.z2.norm() <= 1e-12);
    }

    // random diagonally dominant 3x3 series
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..3 {
        let mut f = BCLaurentSeries::new(3, 3);
        let dom = CMatrix::identity(3, 3) * c(4.0, 0.0);
        f.insert(
            0,
            BCMatrix::from_channels(
                &(&dom + rand_cmatrix(&mut rng, 3, 3, 0.2)),
                &(&dom + rand_cmatrix(&mut rng, 3, 3, 0.2)),
            )
            .unwrap(),
        )
        .unwrap();
        for n in [-2i64, -1, 1, 2] {
            f.insert(n, rand_bcmatrix(&mut rng, 3, 3, 0.25)).unwrap();
        }
        let inv = invert(&f, 40, 256, 1e-9).unwrap();
        assert!(inv.residual <= 1e-8, "residual {}", inv.residual);
    }

    // boundary zero is detected
    let f = BCLaurentSeries::scalar_from_pairs(&[
        (0, Bicomplex::one()),
        (1, Bicomplex::from_real(-1.0)),
    ]);
    assert!(matches!(
        invert(&f, 16, 256, 1e-9),
        Err(Error::NotInvertibleOnBoundary { .. })
    ));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 2.0, "took {elapsed:?}");
    println!(
        "acceptance 4 (Wiener inversion): PASS [{} ms]",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_5_spectral_factorization() {
    let start = Instant::now();

    // (a) Toeplitz example
    let f = BCLaurentSeries::scalar_from_pairs(&[
        (-1, Bicomplex::from_real(2.0)),
        (0, Bicomplex::from_real(5.0)),
        (1, Bicomplex::from_real(2.0)),
    ]);
    let fac = spectral_factorize(&f, &FactorizeOptions::with_truncation(8)).unwrap();
    let w0 = fac.plus.coeff(0).entry(0, 0);
    let w1 = fac.plus.coeff(1).entry(0, 0);
    assert!((w0.z1 - c(2.0, 0.0)).norm() <= 1e-10 && w0.z2.norm() <= 1e-10);
    assert!((w1.z1 - c(1.0, 0.0)).norm() <= 1e-10 && w1.z2.norm() <= 1e-10);
    for n in 2..=8i64 {
        assert!(fac.plus.coeff(n).bc_op_norm() <= 1e-10);
    }

    // (b) construct-then-recover
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for (p, deg) in [(2usize, 3i64), (3, 5), (4, 4), (4, 5)] {
        let g = random_causal_pd(&mut rng, p, deg);
        let density = g.multiply(&g.star()).unwrap();
        let mut opts = FactorizeOptions::with_truncation(deg as usize);
        opts.grid = 256;
        let fac = spectral_factorize(&density, &opts).unwrap();
        assert!(
            fac.residual <= 1e-8 * (1.0 + density.wiener_norm()),
            "p={p} deg={deg}: residual {}",
            fac.residual
        );
        let cert = factor_uniqueness_unitary(&fac.plus, &g, 1e-6).unwrap();
        assert!(cert.residual <= 1e-6 * (1.0 + g.wiener_norm()));
        assert!(cert.unitary_defect <= 1e-6);
        let (lo, _) = fac.plus.support().unwrap();
        assert!(lo >= 0, "factor must be causal");
    }

    // (c) ♯-symmetric input gives a ♯-symmetric factor
    let g = random_causal_pd(&mut rng, 2, 3);
    let density = g.multiply(&g.star()).unwrap();
    let sharp_in = density.embed_sharp();
    let sfac = sharp_route_factorize(&sharp_in, &FactorizeOptions::with_truncation(3)).unwrap();
    assert!(sfac.sym_defect.unwrap() <= 1e-8);

    // (d) the two routes agree up to a constant right unitary
    let idem = spectral_factorize(&density, &FactorizeOptions::with_truncation(3)).unwrap();
    let (u, resid, defect) =
        channel_uniqueness(&idem.plus.embed_sharp(), &sfac.plus, 1e-6).unwrap();
    assert!(resid <= 1e-6 * (1.0 + sfac.plus.wiener_norm()));
    assert!(defect <= 1e-6);
    assert_eq!(u.nrows(), 4);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "acceptance 5 (spectral factorization a-d): PASS [{} ms]",
        elapsed.as_millis()
    );
}

/// Random realization with eigenvalues well separated from the circle.
fn random_regular_realization(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: usize,
    q: usize,
) -> Realization {
    let mut t = CMatrix::zeros(n, n);
    for i in 0..n {
        let inside = rng.random_range(0.0..1.0) < 0.6;
        let modulus = if inside {
            rng.random_range(0.15..0.68)
        } else {
            rng.random_range(1.45..3.0)
        };
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        t[(i, i)] = Complex64::from_polar(modulus, phase);
        for j in i + 1..n {
            t[(i, j)] = rand_complex(rng, 0.4);
        }
    }
    let u = rand_unitary(rng, n);
    let a = &u * t * u.adjoint();
    Realization::new(
        a,
        rand_cmatrix(rng, n, q, 1.0),
        rand_cmatrix(rng, p, n, 1.0),
        rand_cmatrix(rng, p, q, 1.0),
    )
    .unwrap()
}

#[test]
fn criterion_6_realization_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);

    // pinned projector value
    let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
    let expect = CMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(2.0 / 3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    );
    for method in [RieszMethod::Schur, RieszMethod::Quadrature] {
        let p = riesz_projection(&a, method).unwrap();
        assert!(cmatrix::frob_norm(&(p.matrix() - &expect)) <= 1e-9);
    }

    let grid = 1024usize;
    for trial in 0..100 {
        let n = 1 + (trial % 8);
        let p = 1 + (trial % 3);
        let q = 1 + ((trial / 3) % 3);
        let r = random_regular_realization(&mut rng, n, p, q);

        let proj_s = riesz_projection(&r.a, RieszMethod::Schur).unwrap();
        let proj_q = riesz_projection(&r.a, RieszMethod::Quadrature).unwrap();
        assert!(
            cmatrix::frob_norm(&(proj_s.matrix() - proj_q.matrix()))
                <= 1e-8 * (1.0 + cmatrix::frob_norm(proj_s.matrix())),
            "trial {trial}: projector methods disagree"
        );

        let samples: Vec<CMatrix> = (0..grid)
            .map(|m| {
                r.eval(Complex64::cis(std::f64::consts::TAU * m as f64 / grid as f64))
                    .unwrap()
            })
            .collect();
        let scale = samples.iter().map(cmatrix::op_norm).fold(1.0, f64::max);
        for nn in -16i64..=16 {
            let direct = fourier_from_realization(&r, &proj_s, nn).unwrap();
            let oracle = dft_coefficient(&samples, nn);
            assert!(
                cmatrix::frob_norm(&(&direct - &oracle)) <= 1e-8 * scale,
                "trial {trial}, n={nn}"
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "acceptance 6 (realization Fourier oracle, 100 instances): PASS [{} ms]",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_7_spectral_density_suite() {
    let start = Instant::now();
    let one = CMatrix::from_element(1, 1, c(1.0, 0.0));
    let a = CMatrix::from_element(1, 1, c(0.5, 0.0));

    // numeric integration oracle for |w(e^{it})|², w(z) = (z+0.5)/(z-0.5)
    let nodes = 16_384usize;
    let density_coeff = |k: i64| -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for m in 0..nodes {
            let t = std::f64::consts::TAU * m as f64 / nodes as f64;
            let z = Complex64::cis(t);
            let w = (z + 0.5) / (z - 0.5);
            acc += w * w.conj() * Complex64::cis(-k as f64 * t);
        }
        acc / c(nodes as f64, 0.0)
    };

    let f0 = spectral_fourier_coeffs(&a, &one, &one, &one, 0).unwrap();
    assert!((f0[(0, 0)] - c(7.0 / 3.0, 0.0)).norm() <= 1e-12);
    assert!((f0[(0, 0)] - density_coeff(0)).norm() <= 1e-8);
    for k in 1..=8usize {
        let fk = spectral_fourier_coeffs(&a, &one, &one, &one, k).unwrap();
        let closed = (5.0 / 3.0) * 0.5f64.powi(k as i32 - 1);
        assert!((fk[(0, 0)] - c(closed, 0.0)).norm() <= 1e-12, "k={k}");
        assert!((fk[(0, 0)] - density_coeff(k as i64)).norm() <= 1e-8, "k={k}");
        // Hermitian pairing f_{-k} = f_k*
        assert!((density_coeff(-(k as i64)) - fk[(0, 0)].conj()).norm() <= 1e-8);
    }

    // Stein residual
    let x = stein_solve(&a, &one).unwrap();
    let resid = cmatrix::frob_norm(&(&x - &a * &x * a.adjoint() - &one * one.adjoint()));
    assert!(resid <= 1e-12);

    // assembled density realization and its stable-side projector [[I,X],[0,0]]
    let dens = spectral_density_realization(&a, &one, &one, &one).unwrap();
    let proj = riesz_projection(&dens.a, RieszMethod::Schur).unwrap();
    let stable = CMatrix::identity(2, 2) - proj.matrix();
    let mut expect = CMatrix::identity(2, 2);
    expect[(1, 1)] = c(0.0, 0.0);
    expect[(0, 1)] = x[(0, 0)];
    assert!(cmatrix::frob_norm(&(&stable - &expect)) <= 1e-9);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 2.0, "took {elapsed:?}");
    println!(
        "acceptance 7 (density Fourier formulas + Stein + projector): PASS [{} ms]",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_8_superoscillations() {
    let start = Instant::now();

    // Σ|c_k| = a^m and closed form vs coefficient sum
    for a in 2..=6 {
        for m in [2u32, 9, 17, 28, 40] {
            let coeffs = superosc_coeffs(m, a as f64);
            let total: f64 = coeffs.iter().map(|x| x.abs()).sum();
            let expect = (a as f64).powi(m as i32);
            assert!((total - expect).abs() <= 1e-10 * expect, "a={a} m={m}");
            for t in [-2.0, 0.7, 3.0] {
                let closed = superosc_eval(m, a as f64, t);
                let summed = superosc_eval_sum(m, a as f64, t);
                assert!((closed - summed).norm() <= 1e-10 * expect, "a={a} m={m} t={t}");
            }
        }
    }

    // O(1/m) rate on |t| <= 1
    for a in 2..=6 {
        let sup_err = |m: u32| -> f64 {
            (0..81)
                .map(|i| {
                    let t = -1.0 + 2.0 * i as f64 / 80.0;
                    (superosc_eval(m, a as f64, t) - Complex64::cis(a as f64 * t)).norm()
                })
                .fold(0.0, f64::max)
        };
        let errs: Vec<f64> = [64u32, 128, 256].iter().map(|&m| sup_err(m)).collect();
        for w in errs.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.35..=0.65).contains(&ratio), "a={a}: {errs:?}");
        }
    }

    // exactness on low-band series
    let low = BCLaurentSeries::scalar_from_pairs(&[
        (-1, Bicomplex::new(c(0.2, 1.1), c(-0.3, 0.0))),
        (0, Bicomplex::from_real(1.5)),
        (1, Bicomplex::new(c(0.4, -0.2), c(0.0, 0.8))),
    ]);
    let grid = channel_angle_grid(1.0, 9);
    for m in [1u32, 8, 64] {
        assert!(approximation_error(&low, m, &grid).unwrap() <= 1e-13);
    }

    // monotone sup-grid error for decaying coefficients
    let mut f = BCLaurentSeries::new(1, 1);
    for n in -8i64..=8 {
        f.insert(
            n,
            BCMatrix::from_scalar(Bicomplex::from_real(2.0f64.powi(-(n.abs() as i32)))),
        )
        .unwrap();
    }
    let errs: Vec<f64> = [32u32, 64, 128]
        .iter()
        .map(|&m| approximation_error(&f, m, &grid).unwrap())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");

    // exact channel split of the bicomplex sequence
    let pt = BoundaryPoint::new(0.35, -0.15);
    let (u, v) = pt.channel_angles();
    let approx = bcwiener::superosc::approximate_series(
        &BCLaurentSeries::scalar_from_pairs(&[(5, Bicomplex::one())]),
        32,
        &pt,
    )
    .unwrap();
    let (l1, l2) = approx.entry(0, 0).idempotent();
    assert!((l1 - superosc_eval(32, 5.0, u)).norm() <= 1e-13);
    assert!((l2 - superosc_eval(32, 5.0, v)).norm() <= 1e-13);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "acceptance 8 (superoscillations): PASS [{} ms]",
        elapsed.as_millis()
    );
}
