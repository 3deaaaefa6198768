//! JSON wire formats for scalars, matrices, series, realizations and
//! factorization options, shared by the `bcw` command line tool and its
//! golden-file tests.
//!
//! Complex entries are `[re, im]` pairs; a bicomplex matrix is
//! `{"rows", "cols", "M1", "M2"}` in cartesian form, with the channel form
//! `{"P1", "P2"}` accepted on input and converted. serde_json prints
//! doubles in shortest round-trip decimal, so serialized files are
//! byte-stable across runs and platforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bcmatrix::BCMatrix;
use crate::bicomplex::Bicomplex;
use crate::cmatrix::CMatrix;
use crate::realization::{PartialFractions, Pole, Realization};
use crate::series::{BCLaurentSeries, ChannelSeries};
use crate::spectral::{FactorizeOptions, Normalization};

/// Schema-level failure: malformed JSON, inconsistent shapes, or
/// non-finite numbers.
#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("json parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Invalid(String),
}

pub type SchemaResult<T> = std::result::Result<T, SchemaError>;

fn invalid<T>(msg: impl Into<String>) -> SchemaResult<T> {
    Err(SchemaError::Invalid(msg.into()))
}

fn check_finite(x: f64, what: &str) -> SchemaResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        invalid(format!("non-finite number in {what}"))
    }
}

/// `{"z1": [re, im], "z2": [re, im]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalarJson {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
}

pub fn scalar_to_json(z: &Bicomplex) -> ScalarJson {
    ScalarJson {
        z1: [z.z1.re, z.z1.im],
        z2: [z.z2.re, z.z2.im],
    }
}

pub fn scalar_from_json(j: &ScalarJson) -> SchemaResult<Bicomplex> {
    for (v, name) in [(&j.z1, "z1"), (&j.z2, "z2")] {
        check_finite(v[0], name)?;
        check_finite(v[1], name)?;
    }
    Ok(Bicomplex::new(
        Complex64::new(j.z1[0], j.z1[1]),
        Complex64::new(j.z2[0], j.z2[1]),
    ))
}

/// Row-major nested arrays of `[re, im]` entries.
pub type CMatrixJson = Vec<Vec<[f64; 2]>>;

pub fn cmatrix_to_json(m: &CMatrix) -> CMatrixJson {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn cmatrix_from_json(j: &CMatrixJson) -> SchemaResult<CMatrix> {
    let rows = j.len();
    let cols = j.first().map(|r| r.len()).unwrap_or(0);
    for row in j {
        if row.len() != cols {
            return invalid("ragged matrix rows");
        }
        for e in row {
            check_finite(e[0], "matrix entry")?;
            check_finite(e[1], "matrix entry")?;
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |r, c| {
        Complex64::new(j[r][c][0], j[r][c][1])
    }))
}

/// Cartesian form `{"rows","cols","M1","M2"}`; channel form
/// `{"rows","cols","P1","P2"}` accepted on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BCMatrixJson {
    pub rows: usize,
    pub cols: usize,
    #[serde(rename = "M1", default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<CMatrixJson>,
    #[serde(rename = "M2", default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<CMatrixJson>,
    #[serde(rename = "P1", default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<CMatrixJson>,
    #[serde(rename = "P2", default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<CMatrixJson>,
}

pub fn bcmatrix_to_json(m: &BCMatrix) -> BCMatrixJson {
    BCMatrixJson {
        rows: m.nrows(),
        cols: m.ncols(),
        m1: Some(cmatrix_to_json(m.m1())),
        m2: Some(cmatrix_to_json(m.m2())),
        p1: None,
        p2: None,
    }
}

pub fn bcmatrix_from_json(j: &BCMatrixJson) -> SchemaResult<BCMatrix> {
    let shaped = |part: &CMatrixJson, name: &str| -> SchemaResult<CMatrix> {
        let m = cmatrix_from_json(part)?;
        if m.shape() != (j.rows, j.cols) {
            return invalid(format!(
                "{name} is {}x{}, declared {}x{}",
                m.nrows(),
                m.ncols(),
                j.rows,
                j.cols
            ));
        }
        Ok(m)
    };
    match (&j.m1, &j.m2, &j.p1, &j.p2) {
        (Some(m1), Some(m2), None, None) => {
            let m1 = shaped(m1, "M1")?;
            let m2 = shaped(m2, "M2")?;
            BCMatrix::new(m1, m2).map_err(|e| SchemaError::Invalid(e.to_string()))
        }
        (None, None, Some(p1), Some(p2)) => {
            let p1 = shaped(p1, "P1")?;
            let p2 = shaped(p2, "P2")?;
            BCMatrix::from_channels(&p1, &p2).map_err(|e| SchemaError::Invalid(e.to_string()))
        }
        _ => invalid("matrix needs either M1+M2 or P1+P2"),
    }
}

/// `{"n": int, "coeff": <bicomplex matrix>}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub n: i64,
    pub coeff: BCMatrixJson,
}

/// `{"p", "q", "terms": [...]}` with terms in ascending `n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub p: usize,
    pub q: usize,
    pub terms: Vec<TermJson>,
}

pub fn series_to_json(f: &BCLaurentSeries) -> SeriesJson {
    let (p, q) = f.shape();
    SeriesJson {
        p,
        q,
        terms: f
            .coeffs()
            .iter()
            .map(|(&n, c)| TermJson {
                n,
                coeff: bcmatrix_to_json(c),
            })
            .collect(),
    }
}

pub fn series_from_json(j: &SeriesJson) -> SchemaResult<BCLaurentSeries> {
    if j.p == 0 || j.q == 0 {
        return invalid("series shape must be positive");
    }
    let mut f = BCLaurentSeries::new(j.p, j.q);
    for term in &j.terms {
        let coeff = bcmatrix_from_json(&term.coeff)?;
        f.insert(term.n, coeff)
            .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    }
    Ok(f)
}

/// `{"A", "B", "C", "D"}` in the complex-matrix encoding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationJson {
    #[serde(rename = "A")]
    pub a: CMatrixJson,
    #[serde(rename = "B")]
    pub b: CMatrixJson,
    #[serde(rename = "C")]
    pub c: CMatrixJson,
    #[serde(rename = "D")]
    pub d: CMatrixJson,
}

pub fn realization_to_json(r: &Realization) -> RealizationJson {
    RealizationJson {
        a: cmatrix_to_json(&r.a),
        b: cmatrix_to_json(&r.b),
        c: cmatrix_to_json(&r.c),
        d: cmatrix_to_json(&r.d),
    }
}

pub fn realization_from_json(j: &RealizationJson) -> SchemaResult<Realization> {
    let a = cmatrix_from_json(&j.a)?;
    let mut b = cmatrix_from_json(&j.b)?;
    let mut c = cmatrix_from_json(&j.c)?;
    let d = cmatrix_from_json(&j.d)?;
    // nested-array JSON cannot express the column count of an empty
    // matrix, so a zero-state realization reloads with the shapes D implies
    if a.nrows() == 0 {
        if b.nrows() == 0 && b.ncols() == 0 {
            b = CMatrix::zeros(0, d.ncols());
        }
        if c.nrows() == 0 && c.ncols() == 0 {
            c = CMatrix::zeros(d.nrows(), 0);
        }
    }
    Realization::new(a, b, c, d).map_err(|e| SchemaError::Invalid(e.to_string()))
}

/// `{"p": [re, im], "H": [<matrix>, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleJson {
    pub p: [f64; 2],
    #[serde(rename = "H")]
    pub h: Vec<CMatrixJson>,
}

/// `{"D": <matrix>, "poles": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialFractionsJson {
    #[serde(rename = "D")]
    pub d: CMatrixJson,
    pub poles: Vec<PoleJson>,
}

pub fn partial_fractions_to_json(pf: &PartialFractions) -> PartialFractionsJson {
    PartialFractionsJson {
        d: cmatrix_to_json(&pf.d),
        poles: pf
            .poles
            .iter()
            .map(|pole| PoleJson {
                p: [pole.location.re, pole.location.im],
                h: pole.coeffs.iter().map(cmatrix_to_json).collect(),
            })
            .collect(),
    }
}

pub fn partial_fractions_from_json(j: &PartialFractionsJson) -> SchemaResult<PartialFractions> {
    let d = cmatrix_from_json(&j.d)?;
    let mut poles = Vec::with_capacity(j.poles.len());
    for pole in &j.poles {
        check_finite(pole.p[0], "pole")?;
        check_finite(pole.p[1], "pole")?;
        if pole.h.is_empty() {
            return invalid("pole without principal-part coefficients");
        }
        poles.push(Pole {
            location: Complex64::new(pole.p[0], pole.p[1]),
            coeffs: pole
                .h
                .iter()
                .map(cmatrix_from_json)
                .collect::<SchemaResult<_>>()?,
        });
    }
    Ok(PartialFractions { d, poles })
}

/// `{"K","N","newton_tol","max_iter","normalization"}` with normalization
/// `"pd0"` or `"at_one"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorizeOptionsJson {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub normalization: String,
}

pub fn factorize_options_to_json(o: &FactorizeOptions) -> FactorizeOptionsJson {
    FactorizeOptionsJson {
        k: o.truncation,
        n: o.grid,
        newton_tol: o.newton_tol,
        max_iter: o.max_iter,
        normalization: match o.normalization {
            Normalization::PdZero => "pd0".into(),
            Normalization::AtOne => "at_one".into(),
        },
    }
}

pub fn factorize_options_from_json(j: &FactorizeOptionsJson) -> SchemaResult<FactorizeOptions> {
    let normalization = match j.normalization.as_str() {
        "pd0" => Normalization::PdZero,
        "at_one" => Normalization::AtOne,
        other => return invalid(format!("unknown normalization {other:?}")),
    };
    check_finite(j.newton_tol, "newton_tol")?;
    Ok(FactorizeOptions {
        truncation: j.k,
        grid: j.n,
        newton_tol: j.newton_tol,
        max_iter: j.max_iter,
        pd_tol: 1e-10,
        normalization,
    })
}

/// Samples a series over a `(t, s)` grid as CSV with columns
/// `t,s,entry_row,entry_col,re_z1,im_z1,re_z2,im_z2` for external plotters.
pub fn series_samples_csv(f: &BCLaurentSeries, t_steps: usize, s_steps: usize) -> String {
    use std::fmt::Write;
    let mut out = String::from("t,s,entry_row,entry_col,re_z1,im_z1,re_z2,im_z2\n");
    for it in 0..t_steps {
        for is in 0..s_steps {
            let t = std::f64::consts::TAU * it as f64 / t_steps as f64;
            let s = std::f64::consts::TAU * is as f64 / s_steps as f64;
            let v = f.eval(&crate::bicomplex::BoundaryPoint::new(t, s));
            for r in 0..v.nrows() {
                for c in 0..v.ncols() {
                    let z = v.entry(r, c);
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        t, s, r, c, z.z1.re, z.z1.im, z.z2.re, z.z2.im
                    )
                    .expect("string writes cannot fail");
                }
            }
        }
    }
    out
}

/// Channel series round-trip used by the ♯-route: serialized as a
/// bicomplex series of halved shape when ♯-symmetric.
pub fn channel_series_to_bc_json(f: &ChannelSeries, tol_sym: f64) -> SchemaResult<SeriesJson> {
    let bc = f
        .extract_sharp(tol_sym)
        .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    Ok(series_to_json(&bc))
}
