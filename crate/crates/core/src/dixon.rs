//! Dixon's construction of a definite Hermitian determinantal representation
//! from a real-contact divisor, and the pipeline around it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{self, Certificate, DEFAULT_LINES};
use crate::intersect::{self, Divisor, DEFAULT_CLUSTER_RADIUS};
use crate::linalg;
use crate::pencil::{self, DefinitenessReport, HermitianPencil, PD_TOL};
use crate::poly::{exponents, monomial_count, solve_combination, HomogPoly3};
use crate::polymatrix::PolyMatrix;
use crate::sampling;
use crate::uniroots::{find_roots, REAL_ROOT_TOL};

/// Singular values below this fraction of the largest span the vanishing space.
pub const NULL_SPACE_TOL: f64 = 1e-8;
pub const CONTAINMENT_TOL: f64 = 1e-6;
/// A Noether solve is exact below this residual.
pub const NOETHER_EXACT_TOL: f64 = 1e-7;
pub const NOETHER_FAIL_TOL: f64 = 1e-6;
pub const DIVISION_TOL: f64 = 1e-6;
pub const DET_MISFIT_TOL: f64 = 1e-6;
pub const DEGENERATE_TOL: f64 = 1e-8;
pub const VERIFY_POINTS: usize = 100;
pub const VERIFY_TOL: f64 = 1e-6;
/// Splitting tolerance for deciding which intersection points are real.
pub const SPLIT_TOL: f64 = 1e-6;

const PERTURB_SEED: u64 = 0x5eed_5eed;

fn unit(c: f64) -> C64 {
    C64::new(c, 0.0)
}

/// Degree `d − 1` forms `g` with `f.g ≥ D`, as a list starting with `a11`
/// and completed to `d` members.
pub fn vanishing_basis(f: &HomogPoly3, a11: &HomogPoly3, d_div: &Divisor) -> Result<Vec<HomogPoly3>> {
    let d = f.degree();
    if d == 0 {
        return Err(Error::Constant);
    }
    if a11.degree() != d - 1 {
        return Err(Error::Degree(format!("a11 must have degree {}", d - 1)));
    }
    if d_div.max_multiplicity() >= 2 {
        return Err(Error::SingularInput(
            "the contact divisor has a point of multiplicity at least 2".into(),
        ));
    }
    let n = monomial_count(d - 1);
    let exps: Vec<[usize; 3]> = exponents(d - 1).collect();
    let pts: Vec<[C64; 3]> = d_div.entries().iter().map(|e| e.point.coords()).collect();
    let eval = DMatrix::from_fn(pts.len(), n, |r, c| {
        let [i, j, k] = exps[c];
        let p = pts[r];
        p[0].powu(i as u32) * p[1].powu(j as u32) * p[2].powu(k as u32)
    });
    let null = if pts.is_empty() {
        DMatrix::identity(n, n)
    } else {
        linalg::null_space(&eval, NULL_SPACE_TOL)
    };
    if null.ncols() < d {
        return Err(Error::Dimension {
            found: null.ncols(),
            needed: d,
        });
    }
    let v = a11.to_vector();
    let vnorm = v.norm();
    if vnorm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let u = &v / unit(vnorm);
    // distance of a11 from the null space
    let proj = &null * (null.adjoint() * &u);
    let residual = (&u - proj).norm();
    if residual >= CONTAINMENT_TOL {
        return Err(Error::Containment { residual });
    }
    let mut chosen: Vec<DVector<C64>> = vec![u];
    let mut candidates: Vec<DVector<C64>> = null.column_iter().map(|c| c.into_owned()).collect();
    while chosen.len() < d {
        // pick the candidate with the largest component orthogonal to the span
        let mut best: Option<(f64, DVector<C64>)> = None;
        for c in &candidates {
            let mut r = c.clone();
            for q in &chosen {
                let dot = q.dotc(&r);
                r -= q * dot;
            }
            let nr = r.norm();
            if best.as_ref().is_none_or(|(b, _)| nr > *b) {
                best = Some((nr, r));
            }
        }
        let (nr, r) = best.expect("null space is nonempty");
        if nr < 1e-8 {
            return Err(Error::Dimension {
                found: chosen.len(),
                needed: d,
            });
        }
        chosen.push(&r / unit(nr));
        candidates.retain(|c| c != &r);
    }
    let mut out = vec![a11.clone()];
    for q in &chosen[1..] {
        out.push(HomogPoly3::from_coeffs(d - 1, q.iter().copied().collect())?);
    }
    Ok(out)
}

/// Solves `h = p f + q a11` in the least-squares sense.
pub fn noether_solve(f: &HomogPoly3, a11: &HomogPoly3, h: &HomogPoly3) -> Result<(HomogPoly3, HomogPoly3, f64)> {
    let d = f.degree();
    if d == 0 || a11.degree() + 1 != d {
        return Err(Error::Degree("a11 must have degree deg f - 1".into()));
    }
    if h.degree() != 2 * (d - 1) {
        return Err(Error::Degree(format!("h must have degree {}", 2 * (d - 1))));
    }
    let one = unit(1.0);
    let p_exps: Vec<[usize; 3]> = if d >= 2 { exponents(d - 2).collect() } else { Vec::new() };
    let q_exps: Vec<[usize; 3]> = exponents(d - 1).collect();
    let mut cols: Vec<HomogPoly3> = p_exps.iter().map(|&e| f.mul_poly(&HomogPoly3::monomial(e, one))).collect();
    cols.extend(q_exps.iter().map(|&e| a11.mul_poly(&HomogPoly3::monomial(e, one))));
    let (sol, residual) = solve_combination(&cols, h);
    let p = if d >= 2 {
        HomogPoly3::from_coeffs(d - 2, sol[..p_exps.len()].to_vec())?
    } else {
        HomogPoly3::zero(0)
    };
    let q = HomogPoly3::from_coeffs(d - 1, sol[p_exps.len()..].to_vec())?;
    Ok((p, q, residual))
}

/// The contact matrix `A_D` and the largest Noether residual met while
/// building it.
#[derive(Clone, Debug)]
pub struct ContactMatrix {
    pub matrix: PolyMatrix,
    pub max_residual: f64,
}

pub fn build_contact_matrix(f: &HomogPoly3, basis: &[HomogPoly3]) -> Result<ContactMatrix> {
    let d = f.degree();
    if basis.len() != d {
        return Err(Error::Invalid(format!("basis must have {d} members")));
    }
    if !basis[0].is_real() {
        return Err(Error::Invalid("a11 must be real".into()));
    }
    let a11 = basis[0].real_part();
    let mut upper = vec![vec![HomogPoly3::zero(d - 1); d]; d];
    upper[0][0] = a11.clone();
    upper[0][1..d].clone_from_slice(&basis[1..d]);
    let mut max_residual: f64 = 0.0;
    for j in 1..d {
        for k in j..d {
            let h = basis[j].conj().mul_poly(&basis[k]);
            let (_, q, residual) = noether_solve(f, &a11, &h)?;
            if residual >= NOETHER_FAIL_TOL {
                return Err(Error::NoetherResidual {
                    row: j,
                    col: k,
                    residual,
                });
            }
            max_residual = max_residual.max(residual);
            upper[j][k] = if j == k { q.real_part() } else { q };
        }
    }
    let matrix = PolyMatrix::from_fn(d, |i, j| {
        if i <= j {
            upper[i][j].clone()
        } else {
            upper[j][i].conj()
        }
    })?;
    Ok(ContactMatrix { matrix, max_residual })
}

/// Everything `extract_pencil` computes, including the unnormalized pencil.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub pencil: HermitianPencil,
    pub raw: HermitianPencil,
    pub gamma: f64,
    pub oriented_gamma: f64,
    pub flipped: bool,
    pub max_division_residual: f64,
    pub det_misfit: f64,
}

/// `adj(A) / f^{d−2}` as a pencil, with `det = γ f`. No normalization.
pub fn extract_pencil_raw(f: &HomogPoly3, a: &PolyMatrix) -> Result<(HermitianPencil, f64, f64)> {
    extract_raw_with_tol(f, a, DIVISION_TOL)
}

fn extract_raw_with_tol(f: &HomogPoly3, a: &PolyMatrix, division_tol: f64) -> Result<(HermitianPencil, f64, f64)> {
    let d = f.degree();
    if a.dim() != d {
        return Err(Error::Invalid(format!("contact matrix must be {d}x{d}")));
    }
    let (lin, max_res) = if d == 1 {
        (PolyMatrix::from_fn(1, |_, _| f.clone())?, 0.0)
    } else {
        let adj = a.adjugate();
        let divisor = f.pow(d - 2);
        // residuals are measured against the largest entry so that entries
        // which vanish identically do not report pure roundoff
        let scale = (0..d * d)
            .map(|n| adj.get(n / d, n % d).norm())
            .fold(0.0, f64::max);
        let mut max_res: f64 = 0.0;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let (q, rel) = adj.get(i, j).exact_divide(&divisor)?;
                let res = if scale == 0.0 { 0.0 } else { rel * adj.get(i, j).norm() / scale };
                if res >= division_tol {
                    return Err(Error::DivisionResidual {
                        row: i,
                        col: j,
                        residual: res,
                    });
                }
                max_res = max_res.max(res);
                entries.push(q);
            }
        }
        let mut it = entries.into_iter();
        (PolyMatrix::from_fn(d, |_, _| it.next().unwrap())?, max_res)
    };
    let mats = [0usize, 1, 2].map(|v| {
        let mut e = [0, 0, 0];
        e[v] = 1;
        let m = DMatrix::from_fn(d, d, |i, j| lin.get(i, j).coeff(e));
        (&m + m.adjoint()) * unit(0.5)
    });
    let raw = HermitianPencil::new(mats)?;
    let gamma = raw.determinant().proportionality(f).0.re;
    Ok((raw, gamma, max_res))
}

/// Extracts the linear pencil `M_D = adj(A) / f^{d−2}`, orients it positive
/// definite at `e` and rescales it so that `det M = f`.
pub fn extract_pencil(f: &HomogPoly3, a: &PolyMatrix, e: [f64; 3]) -> Result<(HermitianPencil, f64)> {
    let x = extract_pencil_detailed(f, a, e)?;
    Ok((x.pencil, x.gamma))
}

pub fn extract_pencil_detailed(f: &HomogPoly3, a: &PolyMatrix, e: [f64; 3]) -> Result<Extraction> {
    extract_detailed_with_tol(f, a, e, DIVISION_TOL)
}

fn extract_detailed_with_tol(f: &HomogPoly3, a: &PolyMatrix, e: [f64; 3], division_tol: f64) -> Result<Extraction> {
    let d = f.degree();
    let (raw, _, max_division_residual) = extract_raw_with_tol(f, a, division_tol)?;
    let det = raw.determinant();
    let entry_scale = raw.mats().iter().map(linalg::max_abs).fold(0.0, f64::max);
    let (g, det_misfit) = det.proportionality(f);
    let gamma = g.re;
    if entry_scale == 0.0 || det.max_abs() < DEGENERATE_TOL * entry_scale.powi(d as i32) {
        return Err(Error::Degenerate { gamma });
    }
    if det_misfit >= DET_MISFIT_TOL {
        return Err(Error::DetMisfit { misfit: det_misfit });
    }
    let me = raw.eval(e);
    let flipped = !pencil::is_positive_definite(&me, PD_TOL)? && pencil::is_positive_definite(&(-me), PD_TOL)?;
    let (mut m, mut oriented_gamma) = (raw.clone(), gamma);
    if flipped {
        m = m.neg();
        if d % 2 == 1 {
            oriented_gamma = -oriented_gamma;
        }
    }
    if oriented_gamma > 0.0 {
        m = m.scale(oriented_gamma.powf(-1.0 / d as f64));
    }
    Ok(Extraction {
        pencil: m,
        raw,
        gamma,
        oriented_gamma,
        flipped,
        max_division_residual,
        det_misfit,
    })
}

/// Samples members `λᵀ A λ̄` of `C_D` and looks for a repeated factor, which
/// shows up as a multiple root on every line.
pub fn detect_degenerate(f: &HomogPoly3, a: &PolyMatrix, e: [f64; 3], n_lambda: usize, seed: u64) -> Result<Certificate> {
    let d = f.degree();
    if a.dim() != d {
        return Err(Error::Invalid(format!("contact matrix must be {d}x{d}")));
    }
    let lines_per_sample = 3;
    let mut rng = sampling::rng(seed);
    let mut tested = 0;
    if d == 1 {
        let mut c = Certificate::certified(0, REAL_ROOT_TOL);
        c.notes.push("constant members are square-free".into());
        return Ok(c);
    }
    for _ in 0..n_lambda.max(1) {
        let lambda = sampling::complex_gaussian(&mut rng, d);
        let mut g = HomogPoly3::zero(a.degree());
        for j in 0..d {
            for k in 0..d {
                g = &g + &a.get(j, k).scale(lambda[j] * lambda[k].conj());
            }
        }
        let g = g.real_part();
        if g.is_zero(1e-12 * a.get(0, 0).max_abs().max(1.0)) {
            return Ok(Certificate::refuted(vec![e], tested, REAL_ROOT_TOL));
        }
        if g.degree() < 2 {
            continue;
        }
        let mut repeated_on_all = true;
        let mut done = 0;
        while done < lines_per_sample {
            let b = sampling::unit_sphere(&mut rng);
            let dir = sampling::unit_sphere(&mut rng);
            let roots = match find_roots(&g.restrict_to_real_line(b, dir)) {
                Ok(r) => r,
                Err(Error::LeadingCoeff { .. }) => continue,
                Err(err) => return Err(err),
            };
            done += 1;
            tested += 1;
            if roots.clusters().iter().all(|&(_, m)| m < 2) {
                repeated_on_all = false;
                break;
            }
        }
        if repeated_on_all {
            let mut c = Certificate::refuted(vec![e], tested, REAL_ROOT_TOL);
            c.notes.push("sampled member of C_D has a repeated factor".into());
            return Ok(c);
        }
    }
    Ok(Certificate::certified(tested, REAL_ROOT_TOL))
}

/// Knobs for [`dixon_represent_with`].
#[derive(Clone, Debug)]
pub struct DixonOptions {
    pub seed: u64,
    /// Replaces `D_e f` as the first row entry; must interlace `f`.
    pub a11: Option<HomogPoly3>,
    /// Bit `i` selects the other point of the `i`-th conjugate pair.
    pub split_choice: u64,
    pub n_lines: usize,
    pub n_lambda: usize,
    pub check_degenerate: bool,
    /// Realness tolerance for roots on sampled lines.
    pub root_tol: f64,
    /// Largest accepted residual when dividing the adjugate by `f^{d−2}`.
    pub division_tol: f64,
}

impl Default for DixonOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            a11: None,
            split_choice: 0,
            n_lines: DEFAULT_LINES,
            n_lambda: 3,
            check_degenerate: false,
            root_tol: REAL_ROOT_TOL,
            division_tol: DIVISION_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DixonReport {
    pub degree: usize,
    pub seed: u64,
    pub base_point: [f64; 3],
    pub negated_input: bool,
    pub stages: Vec<&'static str>,
    pub hyperbolicity: Certificate,
    pub divisor: Divisor,
    pub conjugate_pairs: usize,
    pub split_choice: u64,
    pub basis_condition: f64,
    pub max_noether_residual: f64,
    pub max_division_residual: f64,
    pub gamma: f64,
    pub orientation_flipped: bool,
    pub det_misfit: f64,
    pub det_residual: f64,
    pub definite_at_e: bool,
    pub min_pivot: f64,
    pub definiteness: DefinitenessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<Certificate>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Representation {
    pub pencil: HermitianPencil,
    pub contact_matrix: PolyMatrix,
    pub report: DixonReport,
}

pub fn dixon_represent(f: &HomogPoly3, e: [f64; 3], seed: u64) -> Result<HermitianPencil> {
    Ok(dixon_represent_with(
        f,
        e,
        &DixonOptions {
            seed,
            ..DixonOptions::default()
        },
    )?
    .pencil)
}

fn singular_from(err: Error) -> Error {
    match err.root() {
        Error::BezoutDeficit { .. }
        | Error::MultiplicityEstimate(_)
        | Error::NotRealContact(_)
        | Error::CommonFactor => Error::SingularInput(err.root().to_string()),
        _ => err,
    }
}

fn basis_condition(basis: &[HomogPoly3]) -> f64 {
    let cols: Vec<DVector<C64>> = basis.iter().map(|p| p.to_vector()).collect();
    let m = DMatrix::from_columns(&cols);
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Full pipeline: `a11 = D_e f`, real-contact splitting of `f.a11`, the
/// vanishing space, the contact matrix, the pencil, and verification.
pub fn dixon_represent_with(f: &HomogPoly3, e: [f64; 3], opts: &DixonOptions) -> Result<Representation> {
    let mut stages = Vec::new();
    let mut notes = Vec::new();
    let d = f.degree();
    if d == 0 {
        return Err(Error::Constant);
    }
    if f.max_imag() > crate::poly::REAL_TOL * f.max_abs() {
        return Err(Error::Invalid("polynomial must have real coefficients".into()));
    }
    let mut f = f.real_part();
    let fe = f.eval_real(e).re;
    if fe.abs() <= 1e-12 * f.norm() * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).powf(d as f64 / 2.0) {
        return Err(Error::BasePoint { value: fe });
    }
    let negated_input = fe < 0.0;
    if negated_input {
        f = -&f;
        notes.push("f(e) < 0; representing -f".into());
    }

    stages.push("hyperbolicity");
    let hyp = hyperbolic::check_hyperbolic(&f, e, opts.n_lines, opts.root_tol, opts.seed).map_err(Error::at("hyperbolicity"))?;
    if hyp.is_refuted() {
        let witness = hyp.witness.as_ref().and_then(|w| w.first().copied()).unwrap_or(e);
        return Err(Error::at("hyperbolicity")(Error::NotHyperbolic { witness }));
    }

    let a11 = match &opts.a11 {
        Some(a) => {
            if a.degree() + 1 != d || !a.is_real() {
                return Err(Error::Invalid("a11 must be real of degree deg f - 1".into()));
            }
            notes.push("a11 supplied by caller".into());
            a.real_part()
        }
        None => f.directional_derivative(e)?,
    };
    let a11 = a11.scale_real(1.0 / a11.max_abs());

    stages.push("intersect");
    let div = if d == 1 {
        Divisor::new()
    } else {
        intersect::intersection_divisor(&f, &a11, DEFAULT_CLUSTER_RADIUS)
            .map_err(singular_from)
            .map_err(Error::at("intersect"))?
    };
    stages.push("split");
    let (d_div, _) = intersect::split_real_contact_with_choice(&div, SPLIT_TOL, opts.split_choice)
        .map_err(singular_from)
        .map_err(Error::at("split"))?;
    let conjugate_pairs = intersect::conjugate_pair_count(&div, SPLIT_TOL);

    stages.push("vanishing-basis");
    let basis = vanishing_basis(&f, &a11, &d_div).map_err(Error::at("vanishing-basis"))?;
    let basis_condition = basis_condition(&basis);

    stages.push("contact-matrix");
    let contact = build_contact_matrix(&f, &basis).map_err(Error::at("contact-matrix"))?;

    let degeneracy = if opts.check_degenerate {
        stages.push("degeneracy");
        let c = detect_degenerate(&f, &contact.matrix, e, opts.n_lambda, opts.seed).map_err(Error::at("degeneracy"))?;
        if c.is_refuted() {
            return Err(Error::at("degeneracy")(Error::Degenerate { gamma: 0.0 }));
        }
        Some(c)
    } else {
        None
    };

    stages.push("extract");
    let ex = extract_detailed_with_tol(&f, &contact.matrix, e, opts.division_tol).map_err(Error::at("extract"))?;
    let m = ex.pencil.clone();

    stages.push("verify");
    let mut rng = sampling::rng(opts.seed ^ 0xde7);
    let mut det_residual: f64 = 0.0;
    for _ in 0..VERIFY_POINTS {
        let p = sampling::unit_sphere(&mut rng);
        let fx = f.eval_real(p).re;
        let dx = linalg::det(&m.eval(p)).re;
        det_residual = det_residual.max((dx - fx).abs() / (1.0 + fx.abs()));
    }
    if det_residual >= VERIFY_TOL {
        return Err(Error::at("verify")(Error::DetMisfit { misfit: det_residual }));
    }
    let chol = pencil::definiteness_margin(&m.eval(e), PD_TOL).map_err(Error::at("verify"))?;
    if !chol.success {
        return Err(Error::at("verify")(Error::Invalid(format!(
            "M(e) is not positive definite (pivot {:e})",
            chol.min_pivot
        ))));
    }
    let definiteness =
        pencil::definiteness_via_interlacing(&m, e, opts.n_lambda, opts.seed).map_err(Error::at("verify"))?;
    if !definiteness.agrees {
        notes.push("interlacing cross-check disagrees with Cholesky".into());
    }
    if ex.flipped {
        notes.push("raw pencil was negative definite at e; negated".into());
    }

    let report = DixonReport {
        degree: d,
        seed: opts.seed,
        base_point: e,
        negated_input,
        stages,
        hyperbolicity: hyp,
        divisor: d_div,
        conjugate_pairs,
        split_choice: opts.split_choice,
        basis_condition,
        max_noether_residual: contact.max_residual,
        max_division_residual: ex.max_division_residual,
        gamma: ex.gamma,
        orientation_flipped: ex.flipped,
        det_misfit: ex.det_misfit,
        det_residual,
        definite_at_e: chol.success,
        min_pivot: chol.min_pivot,
        definiteness,
        degeneracy,
        notes,
    };
    Ok(Representation {
        pencil: m,
        contact_matrix: contact.matrix,
        report,
    })
}

/// Smoothing preprocessor `p ↦ p + s·ℓ·D_e p`, applied `iterations` times
/// and renormalized to `p(e) = 1`.
///
/// `ℓ` is a fixed linear form with `ℓ(e) = 1`. On a line `a + te` the step
/// reads `u ↦ u + s(t + ℓ(a))u'`, which keeps `u` real-rooted and lowers every
/// multiple root by one except where `ℓ` vanishes.
pub fn perturb_smooth(f: &HomogPoly3, e: [f64; 3], s: f64, iterations: usize) -> Result<HomogPoly3> {
    if !(s >= 0.0) {
        return Err(Error::Invalid("smoothing step must be nonnegative".into()));
    }
    if s == 0.0 || iterations == 0 {
        return Ok(f.clone());
    }
    let ell = HomogPoly3::linear_real(smoothing_form(e)?);
    let mut p = f.clone();
    for _ in 0..iterations {
        let dp = p.directional_derivative(e)?;
        p = &p + &(&ell * &dp).scale_real(s);
    }
    let pe = p.eval_real(e).re;
    if pe == 0.0 {
        return Err(Error::BasePoint { value: pe });
    }
    let p = p.scale_real(1.0 / pe);
    let c = hyperbolic::check_hyperbolic(&p, e, DEFAULT_LINES, REAL_ROOT_TOL, PERTURB_SEED)?;
    if c.is_refuted() {
        return Err(Error::HyperbolicityLost);
    }
    Ok(p)
}

/// `ℓ = ⟨e + w, x⟩ / ⟨e, e⟩` with a fixed `w ⊥ e`.
#[allow(clippy::approx_constant)]
fn smoothing_form(e: [f64; 3]) -> Result<[f64; 3]> {
    let ee = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    if ee == 0.0 {
        return Err(Error::ZeroVector);
    }
    for g in [[0.2718, -0.3183, 0.7071], [0.5772, 0.6931, -0.1414]] {
        let ge = (g[0] * e[0] + g[1] * e[1] + g[2] * e[2]) / ee;
        let w = [g[0] - ge * e[0], g[1] - ge * e[1], g[2] - ge * e[2]];
        if w.iter().map(|v| v * v).sum::<f64>() > 1e-4 * ee {
            return Ok([(e[0] + w[0]) / ee, (e[1] + w[1]) / ee, (e[2] + w[2]) / ee]);
        }
    }
    unreachable!("two independent generic vectors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::intersect::{DivisorEntry, ProjPoint};

    const E: [f64; 3] = [1.0, 0.0, 0.0];

    fn quadric() -> HomogPoly3 {
        HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], -1.0), ([0, 0, 2], -1.0)]).unwrap()
    }

    fn in_span(basis: &[HomogPoly3], p: &HomogPoly3) -> f64 {
        solve_combination(basis, p).1
    }

    #[test]
    fn paper_vanishing_space() {
        let f = fixtures::paper_quartic();
        let basis = vanishing_basis(&f, &fixtures::paper_a11(), &fixtures::paper_divisor_d()).unwrap();
        assert_eq!(basis.len(), 4);
        assert_eq!(basis[0], fixtures::paper_a11());
        for p in fixtures::paper_basis() {
            assert!(in_span(&basis, &p) < 1e-6);
        }
        for p in &basis {
            assert!(in_span(&fixtures::paper_basis(), p) < 1e-6);
        }
    }

    #[test]
    fn quadric_vanishing_space() {
        // the single point [1:i:0] of x^2 - y^2 - z^2 ... uses [0:1:i] on the cone
        let p = ProjPoint::new([C64::new(0.0, 0.0), unit(1.0), C64::new(0.0, 1.0)]).unwrap();
        let div = Divisor::from_entries(vec![DivisorEntry { point: p, mult: 1 }]);
        let f = &quadric() - &HomogPoly3::from_real_terms(2, &[([2, 0, 0], 2.0)]).unwrap();
        // f = -x^2 - y^2 - z^2 is not hyperbolic; only linear algebra matters here
        let a11 = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let basis = vanishing_basis(&f, &a11, &div).unwrap();
        assert_eq!(basis.len(), 2);
        for g in &basis {
            assert!(g.eval(p.coords()).norm() < 1e-12);
        }
        // oracle: linear forms through [0:1:i] are spanned by x and y + i z
        let oracle = [a11.clone(), HomogPoly3::linear([unit(0.0), unit(1.0), C64::new(0.0, 1.0)])];
        for g in &basis {
            assert!(in_span(&oracle, g) < 1e-12);
        }
    }

    #[test]
    fn linear_vanishing_space_is_constants() {
        let f = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let one = HomogPoly3::constant(unit(1.0));
        assert_eq!(vanishing_basis(&f, &one, &Divisor::new()).unwrap(), vec![one]);
    }

    #[test]
    fn vanishing_space_errors() {
        let f = fixtures::paper_quartic();
        let mut div = fixtures::paper_divisor_d();
        let x3 = HomogPoly3::monomial([0, 3, 0], unit(1.0));
        assert!(matches!(
            vanishing_basis(&f, &x3, &div),
            Err(Error::Containment { .. })
        ));
        let p = div.entries()[2].point;
        div.add_point(p, 1, 1e-9);
        assert!(matches!(
            vanishing_basis(&f, &fixtures::paper_a11(), &div),
            Err(Error::SingularInput(_))
        ));
        // ten generic points leave no cubic
        let mut rng = sampling::rng(9);
        let mut many = Divisor::new();
        for _ in 0..10 {
            let v = sampling::complex_gaussian(&mut rng, 3);
            many.add_point(ProjPoint::new([v[0], v[1], v[2]]).unwrap(), 1, 1e-9);
        }
        assert!(matches!(
            vanishing_basis(&f, &fixtures::paper_a11(), &many),
            Err(Error::Dimension { found: 0, needed: 4 })
        ));
    }

    #[test]
    fn paper_noether_identity() {
        let f = fixtures::paper_quartic();
        let a12 = &fixtures::paper_basis()[1];
        let (p, q, res) = noether_solve(&f, &fixtures::paper_a11(), &a12.mul_poly(&a12.conj())).unwrap();
        let want_p = HomogPoly3::from_real_terms(2, &[([0, 0, 2], 16.0), ([2, 0, 0], -12.0)]).unwrap();
        assert!((&q - &fixtures::paper_a22()).max_abs() < 1e-8);
        assert!((&p - &want_p).max_abs() < 1e-8);
        assert!(res < 1e-8);
    }

    #[test]
    fn trivial_noether_solves() {
        let f = fixtures::paper_quartic();
        let a11 = fixtures::paper_a11();
        let x2 = HomogPoly3::monomial([2, 0, 0], unit(1.0));
        let (p, q, _) = noether_solve(&f, &a11, &(&f * &x2)).unwrap();
        assert!((&p - &x2).max_abs() < 1e-10 && q.max_abs() < 1e-10);
        let xy2 = HomogPoly3::monomial([1, 2, 0], unit(1.0));
        let (p, q, _) = noether_solve(&f, &a11, &(&a11 * &xy2)).unwrap();
        assert!(p.max_abs() < 1e-10 && (&q - &xy2).max_abs() < 1e-10);
        // a target outside the ideal leaves a residual
        let y6 = HomogPoly3::monomial([0, 6, 0], unit(1.0));
        assert!(noether_solve(&f, &a11, &y6).unwrap().2 > 1e-3);
    }

    #[test]
    fn paper_contact_matrix() {
        let f = fixtures::paper_quartic();
        let a = build_contact_matrix(&f, &fixtures::paper_basis()).unwrap();
        assert!(a.matrix.is_hermitian(1e-10));
        assert_eq!(a.matrix.degree(), 3);
        assert!((a.matrix.get(1, 1) - &fixtures::paper_a22()).max_abs() < 1e-8);
        assert!(a.max_residual < 1e-8);
    }

    #[test]
    fn linear_contact_matrix() {
        let f = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let one = HomogPoly3::constant(unit(1.0));
        let a = build_contact_matrix(&f, std::slice::from_ref(&one)).unwrap();
        assert_eq!(a.matrix.dim(), 1);
        assert_eq!(a.matrix.get(0, 0), &one);
    }

    #[test]
    fn paper_pencil_from_printed_basis() {
        let f = fixtures::paper_quartic();
        let a = build_contact_matrix(&f, &fixtures::paper_basis()).unwrap().matrix;
        let (raw, gamma, res) = extract_pencil_raw(&f, &a).unwrap();
        assert!(res < 1e-8);
        assert!((gamma / 2f64.powi(24) - 1.0).abs() < 1e-9);
        let want = fixtures::paper_md();
        for v in 0..3 {
            assert!((&raw.mats()[v] - &want.mats()[v]).norm() < 1e-8 * want.mats()[0].norm());
        }
        let (m, g) = extract_pencil(&f, &a, E).unwrap();
        assert!((g / 2f64.powi(24) - 1.0).abs() < 1e-9);
        assert!((&m.determinant() - &f).max_abs() < 1e-9);
        assert!(pencil::is_positive_definite(&m.eval(E), PD_TOL).unwrap());
    }

    #[test]
    fn linear_pencil() {
        let f = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let a = PolyMatrix::identity(1);
        let (m, g) = extract_pencil(&f, &a, E).unwrap();
        assert_eq!(g, 1.0);
        assert_eq!(m.determinant(), f);
    }

    #[test]
    fn quadric_by_hand() {
        // a11 = x - y meets the cone doubly at [1:1:0]; D = [1:1:0].
        let f = quadric();
        let a11 = HomogPoly3::linear_real([1.0, -1.0, 0.0]);
        let d_div = Divisor::from_entries(vec![DivisorEntry {
            point: ProjPoint::from_real([1.0, 1.0, 0.0]).unwrap(),
            mult: 1,
        }]);
        let basis = vanishing_basis(&f, &a11, &d_div).unwrap();
        let a = build_contact_matrix(&f, &basis).unwrap().matrix;
        // hand solve: with a12 = c z, a22 = |c|^2 (x + y) and the pencil is
        // [[a22, -a12], [-conj(a12), a11]], whose determinant is |c|^2 f
        let (m, g) = extract_pencil(&f, &a, E).unwrap();
        assert!(g > 0.0);
        assert!((&m.determinant() - &f).max_abs() < 1e-12);
        assert!(pencil::is_positive_definite(&m.eval(E), PD_TOL).unwrap());
        let c = basis[1].coeff([0, 0, 1]);
        assert!((a.get(1, 1) - &HomogPoly3::linear_real([1.0, 1.0, 0.0]).scale_real(c.norm_sqr())).max_abs() < 1e-12);
    }

    #[test]
    fn degenerate_contact_matrix() {
        let f = fixtures::paper_quartic();
        let v = [unit(1.0), C64::new(0.0, 2.0), unit(-1.0), unit(0.5)];
        let x2y = HomogPoly3::monomial([2, 1, 0], unit(1.0));
        let a = PolyMatrix::from_fn(4, |i, j| x2y.scale(v[i] * v[j].conj())).unwrap();
        assert!(detect_degenerate(&f, &a, E, 3, 1).unwrap().is_refuted());
        assert!(matches!(
            extract_pencil(&f, &a, E),
            Err(Error::Degenerate { .. })
        ));
        let good = build_contact_matrix(&f, &fixtures::paper_basis()).unwrap().matrix;
        assert!(detect_degenerate(&f, &good, E, 5, 1).unwrap().is_certified());
        let lin = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        assert!(detect_degenerate(&lin, &PolyMatrix::identity(1), E, 3, 1).unwrap().is_certified());
    }

    #[test]
    fn represent_paper_quartic() {
        let f = fixtures::paper_quartic();
        let rep = dixon_represent_with(&f, E, &DixonOptions::default()).unwrap();
        let m = &rep.pencil;
        assert_eq!(m.dim(), 4);
        assert!((&m.determinant() - &f).max_abs() < 1e-8);
        assert!(pencil::is_positive_definite(&m.eval(E), PD_TOL).unwrap());
        assert_eq!(rep.report.divisor.degree(), 6);
        assert!(rep.report.definiteness.agrees);
    }

    #[test]
    fn represent_line_and_quadric() {
        let x = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let m = dixon_represent(&x, E, 0).unwrap();
        assert_eq!(m.dim(), 1);
        assert!((m.mats()[0][(0, 0)] - unit(1.0)).norm() < 1e-14);
        let f = quadric();
        let m = dixon_represent(&f, E, 0).unwrap();
        assert!((&m.determinant() - &f).max_abs() < 1e-12);
        assert!(pencil::is_positive_definite(&m.eval(E), PD_TOL).unwrap());
        // same determinant and definiteness as [[x+y, z], [z, x-y]]
        let q = fixtures::quadric_pencil();
        assert!((&q.determinant() - &m.determinant()).max_abs() < 1e-12);
        assert!(pencil::is_positive_definite(&q.eval(E), PD_TOL).unwrap());
    }

    #[test]
    fn represent_negated_input() {
        let f = -&quadric();
        let rep = dixon_represent_with(&f, E, &DixonOptions::default()).unwrap();
        assert!(rep.report.negated_input);
        assert!((&rep.pencil.determinant() - &quadric()).max_abs() < 1e-12);
    }

    #[test]
    fn represent_rejects_bad_input() {
        let sphere = HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)]).unwrap();
        let err = dixon_represent(&sphere, E, 0).unwrap_err();
        assert!(matches!(err.root(), Error::NotHyperbolic { .. }));
        let err = dixon_represent(&fixtures::tacnode_quartic(), fixtures::TACNODE_BASE_POINT, 0).unwrap_err();
        assert!(matches!(err.root(), Error::SingularInput(_)), "{err}");
        assert!(err.to_string().contains("--perturb"));
    }

    #[test]
    fn perturbation_basics() {
        let f = quadric();
        assert_eq!(perturb_smooth(&f, E, 0.0, 3).unwrap(), f);
        let g = perturb_smooth(&f, E, 0.1, 1).unwrap();
        assert_eq!(g.degree(), 2);
        assert!((g.eval_real(E).re - 1.0).abs() < 1e-14);
        assert!(perturb_smooth(&f, E, -1.0, 1).is_err());
    }

    #[test]
    fn perturbation_splits_double_line() {
        // x^2 restricted to lines through e has a double root; one step splits it.
        let f = HomogPoly3::monomial([2, 0, 0], unit(1.0));
        let g = perturb_smooth(&f, E, 0.5, 1).unwrap();
        let mut rng = sampling::rng(2);
        for _ in 0..20 {
            let a = sampling::unit_sphere(&mut rng);
            let u = g.restrict_to_real_line(E, a);
            let c = u.coeffs();
            // discriminant oracle for a real quadratic
            let disc = c[1].re * c[1].re - 4.0 * c[2].re * c[0].re;
            assert!(disc > 1e-6, "{disc}");
        }
    }

    #[test]
    fn perturbed_paper_quartic_is_smooth_and_representable() {
        let f = perturb_smooth(&fixtures::paper_quartic(), E, 0.01, 3).unwrap();
        let c = hyperbolic::smooth_disjointness_check(&f, E, 100, hyperbolic::SINGULAR_GRADIENT_TOL, 1).unwrap();
        assert!(c.is_certified());
        let m = dixon_represent(&f, E, 1).unwrap();
        assert!((&m.determinant() - &f).max_abs() < 1e-7);
    }
}
