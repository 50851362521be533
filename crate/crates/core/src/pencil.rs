//! Hermitian pencils `M(x) = x M0 + y M1 + z M2` and their certification:
//! definiteness, the adjugate system `C(M)`, the Hesse identity, LMI
//! membership and the doubling to a real symmetric pencil.

use std::fmt::Write as _;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{self, Certificate, Verdict};
use crate::linalg;
use crate::poly::{to_complex, HomogPoly3};
use crate::polymatrix::PolyMatrix;
use crate::sampling;
use crate::uniroots::REAL_ROOT_TOL;

/// Relative asymmetry tolerated in a Hermitian coefficient matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default pivot threshold (relative to `trace / d`) for definiteness.
pub const PD_TOL: f64 = 1e-10;

#[derive(Debug)]
pub struct HermitianPencil {
    mats: [DMatrix<C64>; 3],
    adj: OnceLock<PolyMatrix>,
}

impl Clone for HermitianPencil {
    fn clone(&self) -> Self {
        Self {
            mats: self.mats.clone(),
            adj: self.adj.clone(),
        }
    }
}

impl PartialEq for HermitianPencil {
    fn eq(&self, other: &Self) -> bool {
        self.mats == other.mats
    }
}

impl HermitianPencil {
    pub fn new(mats: [DMatrix<C64>; 3]) -> Result<Self> {
        let d = mats[0].nrows();
        if d == 0 || mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::Invalid("pencil matrices must be square of equal size".into()));
        }
        let scale = mats.iter().map(linalg::max_abs).fold(0.0, f64::max);
        for m in &mats {
            let asym = linalg::hermitian_defect(m);
            if asym > HERMITIAN_TOL * scale.max(1.0) {
                return Err(Error::NotHermitian { asym });
            }
        }
        Ok(Self::new_unchecked(mats.map(hermitian_part)))
    }

    fn new_unchecked(mats: [DMatrix<C64>; 3]) -> Self {
        Self {
            mats,
            adj: OnceLock::new(),
        }
    }

    /// Builds a pencil from entries given as linear-form coefficients
    /// `[c_x, c_y, c_z]`.
    pub fn from_linear_entries(entries: &[Vec<[C64; 3]>]) -> Result<Self> {
        let d = entries.len();
        if entries.iter().any(|r| r.len() != d) {
            return Err(Error::Invalid("pencil must be square".into()));
        }
        Self::new([0, 1, 2].map(|v| DMatrix::from_fn(d, d, |i, j| entries[i][j][v])))
    }

    pub fn from_real_linear(entries: &[Vec<[f64; 3]>]) -> Result<Self> {
        let c: Vec<Vec<[C64; 3]>> = entries
            .iter()
            .map(|r| r.iter().map(|&l| to_complex(l)).collect())
            .collect();
        Self::from_linear_entries(&c)
    }

    /// Reads off the coefficient matrices of a matrix of linear forms.
    pub fn from_poly_matrix(m: &PolyMatrix) -> Result<Self> {
        if m.degree() != 1 {
            return Err(Error::Degree("pencil entries must be linear".into()));
        }
        let d = m.dim();
        let mats = [0, 1, 2].map(|v| {
            let mut e = [0, 0, 0];
            e[v] = 1;
            DMatrix::from_fn(d, d, |i, j| m.get(i, j).coeff(e))
        });
        Self::new(mats)
    }

    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[DMatrix<C64>; 3] {
        &self.mats
    }

    pub fn eval(&self, pt: [f64; 3]) -> DMatrix<C64> {
        &self.mats[0] * C64::from(pt[0]) + &self.mats[1] * C64::from(pt[1]) + &self.mats[2] * C64::from(pt[2])
    }

    pub fn eval_complex(&self, pt: [C64; 3]) -> DMatrix<C64> {
        &self.mats[0] * pt[0] + &self.mats[1] * pt[1] + &self.mats[2] * pt[2]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new_unchecked(self.mats.clone().map(|m| m * C64::from(s)))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn poly_matrix(&self) -> PolyMatrix {
        let d = self.dim();
        PolyMatrix::from_fn(d, |i, j| {
            HomogPoly3::linear([self.mats[0][(i, j)], self.mats[1][(i, j)], self.mats[2][(i, j)]])
        })
        .expect("linear entries")
    }

    /// `det M(x)` as a real polynomial of degree `d`.
    pub fn determinant(&self) -> HomogPoly3 {
        self.poly_matrix().determinant().real_part()
    }

    /// Symbolic adjugate, computed once per pencil.
    pub fn adjugate(&self) -> &PolyMatrix {
        self.adj.get_or_init(|| self.poly_matrix().adjugate())
    }

    /// The member `λᵀ M^adj conj(λ)` of `C(M)`.
    pub fn adjugate_form(&self, lambda: &DVector<C64>) -> Result<HomogPoly3> {
        let d = self.dim();
        if lambda.len() != d {
            return Err(Error::Invalid("lambda has the wrong length".into()));
        }
        if lambda.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::ZeroVector);
        }
        let adj = self.adjugate();
        let mut acc = HomogPoly3::zero(adj.degree());
        for j in 0..d {
            for k in 0..d {
                let w = lambda[j] * lambda[k].conj();
                if w.norm() != 0.0 {
                    acc = &acc + &adj.get(j, k).scale(w);
                }
            }
        }
        Ok(acc.real_part())
    }
}

fn hermitian_part(m: DMatrix<C64>) -> DMatrix<C64> {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn eval_pencil(m: &HermitianPencil, pt: [f64; 3]) -> DMatrix<C64> {
    m.eval(pt)
}

pub fn pencil_det(m: &HermitianPencil) -> HomogPoly3 {
    m.determinant()
}

pub fn adjugate_form(m: &HermitianPencil, lambda: &DVector<C64>) -> Result<HomogPoly3> {
    m.adjugate_form(lambda)
}

/// Cholesky test with pivots required to exceed `tol · trace / d`.
pub fn is_positive_definite(h: &DMatrix<C64>, tol: f64) -> Result<bool> {
    Ok(definiteness_margin(h, tol)?.success)
}

/// Cholesky outcome including the smallest pivot, for diagnostics.
pub fn definiteness_margin(h: &DMatrix<C64>, tol: f64) -> Result<linalg::CholeskyOutcome> {
    let scale = linalg::max_abs(h);
    let asym = linalg::hermitian_defect(h);
    if asym > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { asym });
    }
    let d = h.nrows() as f64;
    let trace: f64 = h.diagonal().iter().map(|c| c.re).sum();
    if !(trace > 0.0) {
        return Ok(linalg::CholeskyOutcome {
            success: false,
            min_pivot: trace / d,
        });
    }
    Ok(linalg::cholesky_pivots(h, tol * trace / d))
}

/// Max over curve points of the normalized Hesse defect
/// `(λ M^adj λ̄)(μ M^adj μ̄) − (λ M^adj μ̄)(μ M^adj λ̄)`.
pub fn hesse_residual(
    m: &HermitianPencil,
    lambda: &DVector<C64>,
    mu: &DVector<C64>,
    points: &[[f64; 3]],
) -> Result<f64> {
    if lambda.iter().all(|c| c.norm() == 0.0) || mu.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    if m.dim() == 1 {
        return Ok(0.0);
    }
    let (lc, mc) = (lambda.map(|c| c.conj()), mu.map(|c| c.conj()));
    let scale = lambda.norm_squared() * mu.norm_squared();
    let mut worst: f64 = 0.0;
    for p in points {
        let adj = linalg::adjugate(&m.eval(hyperbolic::normalize3(*p)));
        let form = |a: &DVector<C64>, b: &DVector<C64>| (a.transpose() * &adj * b)[(0, 0)];
        let defect = form(lambda, &lc) * form(mu, &mc) - form(lambda, &mc) * form(mu, &lc);
        let norm = adj.norm_squared() * scale;
        if norm > 0.0 {
            worst = worst.max(defect.norm() / norm);
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct DefinitenessReport {
    pub certificate: Certificate,
    /// `M(e)` or `−M(e)` passes Cholesky.
    pub cholesky_definite: bool,
    pub agrees: bool,
}

/// Decides definiteness of `M(e)` from interlacing of sampled members of
/// `C(M)` against `det M`, and compares with the Cholesky ground truth.
///
/// A sampled form that interlaces certifies definiteness; since either all
/// members of `C(M)` interlace or none do (for irreducible `det M`), a single
/// failing sample refutes it.
pub fn definiteness_via_interlacing(
    m: &HermitianPencil,
    e: [f64; 3],
    n_lambda: usize,
    seed: u64,
) -> Result<DefinitenessReport> {
    let f = m.determinant();
    let me = m.eval(e);
    let cholesky_definite = is_positive_definite(&me, PD_TOL)? || is_positive_definite(&(-me), PD_TOL)?;
    let mut rng = sampling::rng(seed);
    let mut cert = None;
    let n_lines = 50;
    for k in 0..n_lambda.max(1) {
        let lambda = sampling::complex_gaussian(&mut rng, m.dim());
        let g = m.adjugate_form(&lambda)?;
        let c = hyperbolic::check_interlaces(&f, &g, e, n_lines, REAL_ROOT_TOL, seed.wrapping_add(k as u64))?;
        if c.is_refuted() {
            cert = Some(c);
            break;
        }
    }
    let certificate = cert.unwrap_or(Certificate {
        verdict: Verdict::CertifiedTrueBySampling,
        witness: None,
        lines_tested: n_lines * n_lambda.max(1),
        tol: REAL_ROOT_TOL,
        cross_check: None,
        notes: Vec::new(),
    });
    let agrees = certificate.is_certified() == cholesky_definite;
    let mut certificate = certificate;
    certificate.cross_check = Some(agrees);
    Ok(DefinitenessReport {
        certificate,
        cholesky_definite,
        agrees,
    })
}

/// Real symmetric pencil of size `2d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPencil {
    mats: [DMatrix<f64>; 3],
}

impl SymPencil {
    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[DMatrix<f64>; 3] {
        &self.mats
    }

    pub fn eval(&self, pt: [f64; 3]) -> DMatrix<f64> {
        &self.mats[0] * pt[0] + &self.mats[1] * pt[1] + &self.mats[2] * pt[2]
    }

    pub fn det_at(&self, pt: [f64; 3]) -> f64 {
        self.eval(pt).lu().determinant()
    }

    pub fn is_positive_definite_at(&self, pt: [f64; 3], tol: f64) -> bool {
        let h = self.eval(pt).map(C64::from);
        is_positive_definite(&h, tol).unwrap_or(false)
    }

    /// Plain-text LMI listing `N0, N1, N2` row-major, for SDP tools.
    pub fn to_lmi_text(&self) -> String {
        let mut s = String::new();
        let n = self.dim();
        let _ = writeln!(s, "# linear matrix inequality x*N0 + y*N1 + z*N2 >= 0");
        let _ = writeln!(s, "dim {n}");
        for (k, m) in self.mats.iter().enumerate() {
            let _ = writeln!(s, "N{k}");
            for i in 0..n {
                let row: Vec<String> = (0..n).map(|j| format!("{:.17e}", m[(i, j)])).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s
    }
}

/// Doubles `M = A + iB` (A symmetric, B skew) into `N = [[A, B], [−B, A]]`,
/// so that `det N = det(M)^2` and `N(e) ≻ 0` iff `M(e) ≻ 0`.
pub fn realify(m: &HermitianPencil) -> SymPencil {
    let d = m.dim();
    let mats = m.mats.clone().map(|mi| {
        let a = mi.map(|c| c.re);
        let b = mi.map(|c| c.im);
        let mut n = DMatrix::<f64>::zeros(2 * d, 2 * d);
        n.view_mut((0, 0), (d, d)).copy_from(&a);
        n.view_mut((d, d), (d, d)).copy_from(&a);
        n.view_mut((0, d), (d, d)).copy_from(&b);
        n.view_mut((d, 0), (d, d)).copy_from(&(-b));
        n
    });
    SymPencil { mats }
}

/// Whether `M(a)` is positive semidefinite, tested by Cholesky on the
/// shifted matrix `M(a) + tol·‖M(a)‖·I`.
pub fn lmi_membership(m: &HermitianPencil, a: [f64; 3], tol: f64) -> Result<bool> {
    let h = m.eval(a);
    let scale = h.norm();
    if scale == 0.0 {
        return Ok(true);
    }
    let asym = linalg::hermitian_defect(&h);
    if asym > 1e-9 * scale {
        return Err(Error::NotHermitian { asym });
    }
    let shifted = &h + DMatrix::<C64>::identity(m.dim(), m.dim()) * C64::from(tol * scale);
    Ok(linalg::cholesky_pivots(&shifted, 0.0).success)
}

type CMatJson = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
struct PencilJson {
    d: usize,
    #[serde(rename = "M0")]
    m0: CMatJson,
    #[serde(rename = "M1")]
    m1: CMatJson,
    #[serde(rename = "M2")]
    m2: CMatJson,
}

fn cmat_to_json(m: &DMatrix<C64>) -> CMatJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn cmat_from_json(d: usize, v: &CMatJson) -> Result<DMatrix<C64>> {
    if v.len() != d || v.iter().any(|r| r.len() != d) {
        return Err(Error::Invalid(format!("expected a {d}x{d} matrix")));
    }
    Ok(DMatrix::from_fn(d, d, |i, j| C64::new(v[i][j][0], v[i][j][1])))
}

impl Serialize for HermitianPencil {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PencilJson {
            d: self.dim(),
            m0: cmat_to_json(&self.mats[0]),
            m1: cmat_to_json(&self.mats[1]),
            m2: cmat_to_json(&self.mats[2]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianPencil {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PencilJson::deserialize(d)?;
        let conv = |v: &CMatJson| cmat_from_json(raw.d, v).map_err(serde::de::Error::custom);
        HermitianPencil::new([conv(&raw.m0)?, conv(&raw.m1)?, conv(&raw.m2)?])
            .map_err(serde::de::Error::custom)
    }
}

type RMatJson = Vec<Vec<f64>>;

#[derive(Serialize, Deserialize)]
struct SymPencilJson {
    d: usize,
    #[serde(rename = "N0")]
    n0: RMatJson,
    #[serde(rename = "N1")]
    n1: RMatJson,
    #[serde(rename = "N2")]
    n2: RMatJson,
}

impl Serialize for SymPencil {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let conv = |m: &DMatrix<f64>| -> RMatJson {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect()
        };
        SymPencilJson {
            d: self.dim(),
            n0: conv(&self.mats[0]),
            n1: conv(&self.mats[1]),
            n2: conv(&self.mats[2]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymPencil {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SymPencilJson::deserialize(d)?;
        let n = raw.d;
        let conv = |v: &RMatJson| {
            if v.len() != n || v.iter().any(|r| r.len() != n) {
                return Err(serde::de::Error::custom(format!("expected a {n}x{n} matrix")));
            }
            Ok(DMatrix::from_fn(n, n, |i, j| v[i][j]))
        };
        Ok(SymPencil {
            mats: [conv(&raw.n0)?, conv(&raw.n1)?, conv(&raw.n2)?],
        })
    }
}
