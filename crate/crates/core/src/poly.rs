//! Dense homogeneous polynomials in three variables `x, y, z` with complex
//! coefficients.
//!
//! Coefficients are stored in graded-lex order: for degree `d` the exponent
//! triple `(i, j, k)` lives at index `r(r+1)/2 + k` where `r = j + k`, so the
//! sequence starts `x^d, x^{d-1}y, x^{d-1}z, x^{d-2}y^2, ...`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::uniroots::UniPoly;

/// Imaginary parts below this fraction of the largest coefficient count as zero.
pub const REAL_TOL: f64 = 1e-12;

/// A residual below this marks a division as exact.
pub const EXACT_DIVISION_TOL: f64 = 1e-8;

/// Number of monomials of degree `d` in three variables.
pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Position of `x^i y^j z^k` in the coefficient vector of degree `i + j + k`.
pub fn monomial_index(_i: usize, j: usize, k: usize) -> usize {
    let r = j + k;
    r * (r + 1) / 2 + k
}

/// Iterator over exponent triples of degree `d` in storage order.
pub fn exponents(d: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..=d).flat_map(move |r| (0..=r).map(move |k| [d - r, r - k, k]))
}

#[derive(Clone, PartialEq)]
pub struct HomogPoly3 {
    degree: usize,
    coeffs: Vec<C64>,
}

impl HomogPoly3 {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![C64::new(0.0, 0.0); monomial_count(degree)],
        }
    }

    /// The constant polynomial `c` (degree 0).
    pub fn constant(c: C64) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn monomial(exp: [usize; 3], c: C64) -> Self {
        let mut p = Self::zero(exp[0] + exp[1] + exp[2]);
        p.coeffs[monomial_index(exp[0], exp[1], exp[2])] = c;
        p
    }

    /// The linear form `l0 x + l1 y + l2 z`.
    pub fn linear(l: [C64; 3]) -> Self {
        Self {
            degree: 1,
            coeffs: l.to_vec(),
        }
    }

    pub fn linear_real(l: [f64; 3]) -> Self {
        Self::linear([l[0].into(), l[1].into(), l[2].into()])
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::Degree(format!(
                "{} coefficients supplied for degree {degree}",
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms<I>(degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ([usize; 3], C64)>,
    {
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            if e[0] + e[1] + e[2] != degree {
                return Err(Error::Degree(format!(
                    "exponent {e:?} does not sum to degree {degree}"
                )));
            }
            p.coeffs[monomial_index(e[0], e[1], e[2])] += c;
        }
        Ok(p)
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_terms(degree: usize, terms: &[([usize; 3], f64)]) -> Result<Self> {
        Self::from_terms(degree, terms.iter().map(|&(e, c)| (e, C64::new(c, 0.0))))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: [usize; 3]) -> C64 {
        if exp.iter().sum::<usize>() != self.degree {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[monomial_index(exp[0], exp[1], exp[2])]
    }

    pub fn terms(&self) -> impl Iterator<Item = ([usize; 3], C64)> + '_ {
        exponents(self.degree).zip(self.coeffs.iter().copied())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// True when all imaginary parts are negligible relative to the largest coefficient.
    pub fn is_real(&self) -> bool {
        let scale = self.max_abs();
        self.coeffs.iter().all(|c| c.im.abs() <= REAL_TOL * scale)
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> Self {
        self.map(|c| C64::new(c.re, 0.0))
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|c| c * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|c| c * s)
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add degree {} and degree {}",
                self.degree, other.degree
            )));
        }
        Ok(Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut out = vec![C64::new(0.0, 0.0); monomial_count(degree)];
        let rhs: Vec<([usize; 3], C64)> = other
            .terms()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .collect();
        for (a, ca) in self.terms() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for &(b, cb) in &rhs {
                out[monomial_index(a[0] + b[0], a[1] + b[1], a[2] + b[2])] += ca * cb;
            }
        }
        Self {
            degree,
            coeffs: out,
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(C64::new(1.0, 0.0));
        for _ in 0..n {
            acc = acc.mul_poly(self);
        }
        acc
    }

    pub fn eval(&self, pt: [C64; 3]) -> C64 {
        let d = self.degree;
        let powers = |v: C64| {
            let mut p = Vec::with_capacity(d + 1);
            let mut acc = C64::new(1.0, 0.0);
            for _ in 0..=d {
                p.push(acc);
                acc *= v;
            }
            p
        };
        let (px, py, pz) = (powers(pt[0]), powers(pt[1]), powers(pt[2]));
        self.terms()
            .map(|(e, c)| c * px[e[0]] * py[e[1]] * pz[e[2]])
            .sum()
    }

    pub fn eval_real(&self, pt: [f64; 3]) -> C64 {
        self.eval([pt[0].into(), pt[1].into(), pt[2].into()])
    }

    /// Coefficients of `t -> p(t e + a)`, lowest power first.
    pub fn restrict_to_line(&self, e: [C64; 3], a: [C64; 3]) -> UniPoly {
        let d = self.degree;
        let linear_powers = |slope: C64, offset: C64| {
            let mut out: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]];
            for n in 1..=d {
                let prev = &out[n - 1];
                let mut next = vec![C64::new(0.0, 0.0); n + 1];
                for (m, &c) in prev.iter().enumerate() {
                    next[m] += c * offset;
                    next[m + 1] += c * slope;
                }
                out.push(next);
            }
            out
        };
        let px = linear_powers(e[0], a[0]);
        let py = linear_powers(e[1], a[1]);
        let pz = linear_powers(e[2], a[2]);
        let mut out = vec![C64::new(0.0, 0.0); d + 1];
        for (exp, c) in self.terms() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let xy = uni_mul(&px[exp[0]], &py[exp[1]]);
            let xyz = uni_mul(&xy, &pz[exp[2]]);
            for (m, v) in xyz.into_iter().enumerate() {
                out[m] += c * v;
            }
        }
        UniPoly::new(out)
    }

    pub fn restrict_to_real_line(&self, e: [f64; 3], a: [f64; 3]) -> UniPoly {
        self.restrict_to_line(to_complex(e), to_complex(a))
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, var: usize) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Constant);
        }
        let mut out = Self::zero(self.degree - 1);
        for (mut e, c) in self.terms() {
            if e[var] == 0 {
                continue;
            }
            let n = e[var] as f64;
            e[var] -= 1;
            out.coeffs[monomial_index(e[0], e[1], e[2])] += c * n;
        }
        Ok(out)
    }

    /// `e0 ∂p/∂x + e1 ∂p/∂y + e2 ∂p/∂z`.
    pub fn directional_derivative(&self, e: [f64; 3]) -> Result<Self> {
        let mut out = Self::zero(self.degree.checked_sub(1).ok_or(Error::Constant)?);
        for (var, &w) in e.iter().enumerate() {
            if w != 0.0 {
                out = &out + &self.partial(var)?.scale_real(w);
            }
        }
        Ok(out)
    }

    pub fn gradient(&self, pt: [C64; 3]) -> Result<[C64; 3]> {
        Ok([
            self.partial(0)?.eval(pt),
            self.partial(1)?.eval(pt),
            self.partial(2)?.eval(pt),
        ])
    }

    /// Substitutes `x -> T u`, i.e. returns `u -> p(T u)` for a 3x3 matrix `T`
    /// given by rows.
    pub fn compose_linear(&self, t: &[[C64; 3]; 3]) -> Self {
        let rows: Vec<HomogPoly3> = t.iter().map(|r| Self::linear(*r)).collect();
        let pows: Vec<Vec<HomogPoly3>> = rows
            .iter()
            .map(|l| {
                let mut v = vec![Self::constant(C64::new(1.0, 0.0))];
                for n in 1..=self.degree {
                    let next = v[n - 1].mul_poly(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(self.degree);
        for (e, c) in self.terms() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let term = pows[0][e[0]]
                .mul_poly(&pows[1][e[1]])
                .mul_poly(&pows[2][e[2]]);
            for (o, v) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o += c * v;
            }
        }
        out
    }

    /// Least-squares quotient `p / q`.
    ///
    /// Minimizes `‖p − q·quotient‖` over quotients of degree `deg p − deg q`
    /// and reports the residual relative to `‖p‖`. The division is exact when
    /// the residual is below [`EXACT_DIVISION_TOL`].
    pub fn exact_divide(&self, q: &Self) -> Result<(Self, f64)> {
        if q.is_zero(0.0) {
            return Err(Error::Invalid("division by the zero polynomial".into()));
        }
        let qd = self
            .degree
            .checked_sub(q.degree)
            .ok_or_else(|| Error::Degree("divisor degree exceeds dividend degree".into()))?;
        let columns: Vec<HomogPoly3> = exponents(qd)
            .map(|e| q.mul_poly(&Self::monomial(e, C64::new(1.0, 0.0))))
            .collect();
        let (sol, residual) = solve_combination(&columns, self);
        Ok((Self::from_coeffs(qd, sol)?, residual))
    }

    /// Best `c` with `self ≈ c · other`, and the relative misfit.
    pub fn proportionality(&self, other: &Self) -> (C64, f64) {
        let denom: f64 = other.coeffs.iter().map(|c| c.norm_sqr()).sum();
        if denom == 0.0 || self.degree != other.degree {
            return (C64::new(0.0, 0.0), f64::INFINITY);
        }
        let num: C64 = other
            .coeffs
            .iter()
            .zip(&self.coeffs)
            .map(|(o, s)| o.conj() * s)
            .sum();
        let c = num / denom;
        let resid = (self - &other.scale(c)).norm() / self.norm().max(f64::MIN_POSITIVE);
        (c, resid)
    }

    /// Coefficient vector as a column.
    pub fn to_vector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.coeffs)
    }
}

/// Solves `target ≈ Σ x_i columns[i]` in the coefficient least-squares
/// sense. Returns the coefficients `x` and the residual relative to `‖target‖`.
pub(crate) fn solve_combination(columns: &[HomogPoly3], target: &HomogPoly3) -> (Vec<C64>, f64) {
    let rows = target.coeffs.len();
    if columns.is_empty() {
        return (Vec::new(), if target.norm() == 0.0 { 0.0 } else { 1.0 });
    }
    let a = DMatrix::from_fn(rows, columns.len(), |r, c| columns[c].coeffs[r]);
    let b = target.to_vector();
    let x = linalg::lstsq(&a, &b);
    let resid = (&a * &x - &b).norm();
    let scale = b.norm();
    let rel = if scale == 0.0 { resid } else { resid / scale };
    (x.iter().copied().collect(), rel)
}

fn uni_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn to_complex(v: [f64; 3]) -> [C64; 3] {
    [v[0].into(), v[1].into(), v[2].into()]
}

impl Add for &HomogPoly3 {
    type Output = HomogPoly3;

    /// Panics on degree mismatch; use [`HomogPoly3::checked_add`] otherwise.
    fn add(self, rhs: &HomogPoly3) -> HomogPoly3 {
        self.checked_add(rhs).expect("degree mismatch in polynomial addition")
    }
}

impl Sub for &HomogPoly3 {
    type Output = HomogPoly3;

    fn sub(self, rhs: &HomogPoly3) -> HomogPoly3 {
        self.checked_sub(rhs)
            .expect("degree mismatch in polynomial subtraction")
    }
}

impl Mul for &HomogPoly3 {
    type Output = HomogPoly3;

    fn mul(self, rhs: &HomogPoly3) -> HomogPoly3 {
        self.mul_poly(rhs)
    }
}

impl Neg for &HomogPoly3 {
    type Output = HomogPoly3;

    fn neg(self) -> HomogPoly3 {
        self.map(|c| -c)
    }
}

impl fmt::Debug for HomogPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly3[{}](", self.degree)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for HomogPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = self.max_abs();
        let mut first = true;
        for (e, c) in self.terms() {
            if c.norm() <= 1e-14 * scale || c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im.abs() <= 1e-14 * scale {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (name, p) in ["x", "y", "z"].iter().zip(e) {
                match p {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{p}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [usize; 3],
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    degree: usize,
    terms: Vec<TermJson>,
}

impl Serialize for HomogPoly3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            degree: self.degree,
            terms: self
                .terms()
                .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                .map(|(exp, c)| TermJson {
                    exp,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogPoly3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        HomogPoly3::from_terms(
            raw.degree,
            raw.terms.into_iter().map(|t| (t.exp, C64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
