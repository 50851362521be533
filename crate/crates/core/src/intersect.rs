//! Intersection divisors of plane curves, real-contact splitting, and the
//! divisor attached to a determinantal representation.
//!
//! Intersections are computed by eliminating one variable with a Sylvester
//! resultant after a random real rotation of coordinates. The resultant is
//! recovered by sampling Sylvester determinants on a circle and inverting the
//! discrete Fourier transform; its roots are lifted back to points and
//! grouped into multiplicity clusters.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pencil::HermitianPencil;
use crate::poly::HomogPoly3;
use crate::sampling;
use crate::uniroots::{find_roots, UniPoly};

pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-5;
const MAX_CLUSTER_RADIUS: f64 = 1e-3;
/// Coordinates with imaginary part below this are real.
pub const REAL_POINT_TOL: f64 = 1e-7;
/// Sylvester determinants below this fraction of Hadamard's bound count as zero.
const COMMON_FACTOR_TOL: f64 = 1e-11;
const LIFT_RESIDUAL_TOL: f64 = 1e-5;
const MAX_ROTATIONS: u64 = 12;
const ROTATION_SEED: u64 = 0x1d5e_c0de;

/// A point of the complex projective plane, scaled so that its first
/// largest-magnitude coordinate equals 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    coords: [C64; 3],
}

impl ProjPoint {
    pub fn new(coords: [C64; 3]) -> Result<Self> {
        let max = coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 || !max.is_finite() {
            return Err(Error::Invalid("projective point cannot be zero".into()));
        }
        let pivot = coords
            .iter()
            .position(|c| c.norm() >= (1.0 - 1e-6) * max)
            .expect("max is attained");
        let p = coords[pivot];
        let mut out = [coords[0] / p, coords[1] / p, coords[2] / p];
        out[pivot] = C64::new(1.0, 0.0);
        Ok(Self { coords: out })
    }

    pub fn from_real(v: [f64; 3]) -> Result<Self> {
        Self::new([v[0].into(), v[1].into(), v[2].into()])
    }

    pub fn coords(&self) -> [C64; 3] {
        self.coords
    }

    pub fn conj(&self) -> Self {
        Self::new([
            self.coords[0].conj(),
            self.coords[1].conj(),
            self.coords[2].conj(),
        ])
        .expect("conjugate of a nonzero point")
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.im.abs() <= tol)
    }

    /// Sine of the angle between the two lines in C^3.
    pub fn distance(&self, other: &Self) -> f64 {
        let dot: C64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let n1: f64 = self.coords.iter().map(|c| c.norm_sqr()).sum();
        let n2: f64 = other.coords.iter().map(|c| c.norm_sqr()).sum();
        (1.0 - dot.norm_sqr() / (n1 * n2)).max(0.0).sqrt()
    }

    /// True when the first coordinate with a non-negligible imaginary part has
    /// positive imaginary part; this picks one point from each conjugate pair.
    pub fn has_positive_phase(&self, tol: f64) -> bool {
        self.coords
            .iter()
            .find(|c| c.im.abs() > tol)
            .is_none_or(|c| c.im > 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorEntry {
    pub point: ProjPoint,
    pub mult: usize,
}

/// Finite formal sum of projective points with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Divisor {
    entries: Vec<DivisorEntry>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<DivisorEntry>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[DivisorEntry] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(|e| e.mult).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `mult` copies of `point`, merging with an entry within `tol`.
    pub fn add_point(&mut self, point: ProjPoint, mult: usize, tol: f64) {
        if mult == 0 {
            return;
        }
        match self
            .entries
            .iter_mut()
            .find(|e| e.point.distance(&point) <= tol)
        {
            Some(e) => e.mult += mult,
            None => self.entries.push(DivisorEntry { point, mult }),
        }
    }

    pub fn sum(&self, other: &Self, tol: f64) -> Self {
        let mut out = self.clone();
        for e in &other.entries {
            out.add_point(e.point, e.mult, tol);
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|e| DivisorEntry {
                    point: e.point.conj(),
                    mult: e.mult,
                })
                .collect(),
        }
    }

    /// Multiplicity of the entry within `tol` of `p`, or 0.
    pub fn multiplicity_at(&self, p: &ProjPoint, tol: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| e.point.distance(p) <= tol)
            .map(|e| e.mult)
            .sum()
    }

    /// Multiset equality with point matching within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.degree() == other.degree()
            && self
                .entries
                .iter()
                .all(|e| other.multiplicity_at(&e.point, tol) == e.mult)
            && other
                .entries
                .iter()
                .all(|e| self.multiplicity_at(&e.point, tol) == e.mult)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.mult).max().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    coords: [[f64; 2]; 3],
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct DivisorJson {
    points: Vec<PointJson>,
}

impl Serialize for Divisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DivisorJson {
            points: self
                .entries
                .iter()
                .map(|e| {
                    let c = e.point.coords();
                    PointJson {
                        coords: [[c[0].re, c[0].im], [c[1].re, c[1].im], [c[2].re, c[2].im]],
                        mult: e.mult,
                    }
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DivisorJson::deserialize(d)?;
        let mut entries = Vec::with_capacity(raw.points.len());
        for p in raw.points {
            if p.mult == 0 {
                return Err(serde::de::Error::custom("multiplicities must be positive"));
            }
            let c = p.coords;
            let point = ProjPoint::new([
                C64::new(c[0][0], c[0][1]),
                C64::new(c[1][0], c[1][1]),
                C64::new(c[2][0], c[2][1]),
            ])
            .map_err(serde::de::Error::custom)?;
            entries.push(DivisorEntry { point, mult: p.mult });
        }
        Ok(Divisor { entries })
    }
}

/// Coefficients of `p(u, 1, w)` grouped by powers of `w`: entry `k` is the
/// univariate polynomial in `u` multiplying `w^k`.
fn coefficients_in_w(p: &HomogPoly3) -> Vec<UniPoly> {
    let d = p.degree();
    let mut out: Vec<Vec<C64>> = (0..=d).map(|k| vec![C64::new(0.0, 0.0); d - k + 1]).collect();
    for (e, c) in p.terms() {
        out[e[2]][e[0]] += c;
    }
    out.into_iter().map(UniPoly::new).collect()
}

fn sylvester_at(fc: &[C64], gc: &[C64]) -> DMatrix<C64> {
    // fc, gc: coefficients in w, lowest power first.
    let d = fc.len() - 1;
    let e = gc.len() - 1;
    let n = d + e;
    let mut s = DMatrix::<C64>::zeros(n, n);
    for i in 0..e {
        for k in 0..=d {
            s[(i, i + k)] = fc[d - k];
        }
    }
    for i in 0..d {
        for k in 0..=e {
            s[(e + i, i + k)] = gc[e - k];
        }
    }
    s
}

struct Lifted {
    point: [C64; 3],
}

fn rotate(p: &HomogPoly3, q: &[[f64; 3]; 3]) -> HomogPoly3 {
    let qc = q.map(|r| r.map(C64::from));
    p.compose_linear(&qc)
}

enum Attempt {
    Done(Vec<Lifted>),
    Retry(String),
}

fn attempt(f: &HomogPoly3, g: &HomogPoly3, q: &[[f64; 3]; 3]) -> Result<Attempt> {
    let fr = rotate(f, q);
    let gr = rotate(g, q);
    let (d, e) = (fr.degree(), gr.degree());
    let lead_f = fr.coeff([0, 0, d]).norm();
    let lead_g = gr.coeff([0, 0, e]).norm();
    if lead_f < 1e-6 * fr.max_abs() || lead_g < 1e-6 * gr.max_abs() {
        return Ok(Attempt::Retry("curve passes near the projection center".into()));
    }
    let fw = coefficients_in_w(&fr);
    let gw = coefficients_in_w(&gr);
    let n = d * e;
    let samples = n + 1;
    let mut values = Vec::with_capacity(samples);
    let mut all_negligible = true;
    for m in 0..samples {
        let u = C64::from_polar(1.0, 2.0 * PI * m as f64 / samples as f64);
        let fc: Vec<C64> = fw.iter().map(|p| p.eval(u)).collect();
        let gc: Vec<C64> = gw.iter().map(|p| p.eval(u)).collect();
        let s = sylvester_at(&fc, &gc);
        let hadamard: f64 = s
            .row_iter()
            .map(|r| r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .product();
        let det = linalg::det(&s);
        if det.norm() > COMMON_FACTOR_TOL * hadamard {
            all_negligible = false;
        }
        values.push(det);
    }
    if all_negligible {
        return Err(Error::CommonFactor);
    }
    // inverse DFT on the unit circle
    let coeffs: Vec<C64> = (0..samples)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(m, v)| v * C64::from_polar(1.0, -2.0 * PI * (j * m) as f64 / samples as f64))
                .sum::<C64>()
                / samples as f64
        })
        .collect();
    let res = UniPoly::new(coeffs);
    let roots = match find_roots(&res) {
        Ok(r) => r,
        Err(Error::LeadingCoeff { .. }) => {
            return Ok(Attempt::Retry("intersection on the line at infinity".into()))
        }
        Err(err) => return Err(err),
    };
    let mut lifted = Vec::with_capacity(n);
    for &u in &roots.roots {
        let fu = UniPoly::new(fw.iter().map(|p| p.eval(u)).collect());
        let gu = UniPoly::new(gw.iter().map(|p| p.eval(u)).collect());
        let rel = |p: &UniPoly, w: C64| {
            let scale: f64 = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * w.norm().powi(k as i32))
                .sum();
            p.eval(w).norm() / scale.max(f64::MIN_POSITIVE)
        };
        let froots = find_roots(&fu)?;
        let groots = find_roots(&gu)?;
        let score = |w: C64| rel(&fu, w) + rel(&gu, w);
        let candidates: Vec<C64> = froots.roots.iter().chain(&groots.roots).copied().collect();
        let Some(mut w) = candidates
            .iter()
            .copied()
            .min_by(|a, b| score(*a).total_cmp(&score(*b)))
        else {
            return Ok(Attempt::Retry("no candidate lift".into()));
        };
        // Two distinct common roots in w mean two points share a projection.
        let common: Vec<(C64, usize)> = groots
            .clusters()
            .into_iter()
            .filter(|(c, _)| rel(&fu, *c) < LIFT_RESIDUAL_TOL)
            .collect();
        if common.len() > 1 {
            let spread = common
                .iter()
                .map(|(c, _)| (c - common[0].0).norm() / (1.0 + c.norm()))
                .fold(0.0, f64::max);
            if spread > 1e-3 {
                return Ok(Attempt::Retry("two intersection points share a projection".into()));
            }
        }
        let mut u = u;
        polish(&fr, &gr, &mut u, &mut w);
        if score(w) > LIFT_RESIDUAL_TOL && rel_point_residual(&fr, &gr, u, w) > LIFT_RESIDUAL_TOL {
            return Ok(Attempt::Retry("lifted point misses one of the curves".into()));
        }
        // back to original coordinates: x = Q (u, 1, w)
        let local = [u, C64::new(1.0, 0.0), w];
        let point = [0, 1, 2].map(|i| (0..3).map(|k| local[k] * q[i][k]).sum::<C64>());
        lifted.push(Lifted { point });
    }
    Ok(Attempt::Done(lifted))
}

fn rel_point_residual(f: &HomogPoly3, g: &HomogPoly3, u: C64, w: C64) -> f64 {
    let p = [u, C64::new(1.0, 0.0), w];
    let n = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let p = p.map(|c| c / n);
    f.eval(p).norm() / f.norm() + g.eval(p).norm() / g.norm()
}

/// Newton refinement of `(u, w)` on `f(u,1,w) = g(u,1,w) = 0`, applied only
/// while the Jacobian is well conditioned and the residual decreases.
fn polish(f: &HomogPoly3, g: &HomogPoly3, u: &mut C64, w: &mut C64) {
    let (Ok(fx), Ok(fz), Ok(gx), Ok(gz)) = (f.partial(0), f.partial(2), g.partial(0), g.partial(2)) else {
        return;
    };
    let one = C64::new(1.0, 0.0);
    for _ in 0..4 {
        let p = [*u, one, *w];
        let r = [f.eval(p), g.eval(p)];
        let j = [[fx.eval(p), fz.eval(p)], [gx.eval(p), gz.eval(p)]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let jn = j.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        if det.norm() < 1e-6 * jn * jn {
            return;
        }
        let du = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dw = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        let (nu, nw) = (*u - du, *w - dw);
        if rel_point_residual(f, g, nu, nw) < rel_point_residual(f, g, *u, *w) {
            *u = nu;
            *w = nw;
        } else {
            return;
        }
    }
}

/// Groups points within `radius` (single linkage) into `(center, size)`.
fn cluster_points(points: &[ProjPoint], radius: f64) -> Vec<(ProjPoint, usize)> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].distance(&points[j]) <= radius && label[i] != label[j] {
                let (from, to) = (label[j], label[i]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut seen: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for i in 0..n {
        if seen.contains(&label[i]) {
            continue;
        }
        seen.push(label[i]);
        let members: Vec<&ProjPoint> = (0..n).filter(|&j| label[j] == label[i]).map(|j| &points[j]).collect();
        let reference = members[0].coords();
        let pivot = reference
            .iter()
            .position(|c| (c - C64::new(1.0, 0.0)).norm() == 0.0)
            .unwrap_or(0);
        let mut acc = [C64::new(0.0, 0.0); 3];
        for m in &members {
            let c = m.coords();
            let s = c[pivot];
            for k in 0..3 {
                acc[k] += c[k] / s;
            }
        }
        let mean = acc.map(|c| c / members.len() as f64);
        out.push((ProjPoint::new(mean).expect("nonzero mean"), members.len()));
    }
    out
}

fn min_separation(clusters: &[(ProjPoint, usize)]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            best = best.min(clusters[i].0.distance(&clusters[j].0));
        }
    }
    best
}

/// Intersection divisor `f.g` of two plane curves without common component.
///
/// `tol` is the initial cluster radius (projective distance); it doubles up
/// to `1e-3` while a neighbouring cluster sits just outside it.
pub fn intersection_divisor(f: &HomogPoly3, g: &HomogPoly3, tol: f64) -> Result<Divisor> {
    let expected = f.degree() * g.degree();
    if f.is_zero(0.0) || g.is_zero(0.0) {
        return Err(Error::Invalid("intersection with the zero polynomial".into()));
    }
    if expected == 0 {
        return Ok(Divisor::new());
    }
    let mut rng = sampling::rng(ROTATION_SEED);
    let mut last_reason = String::new();
    for _ in 0..MAX_ROTATIONS {
        let q = sampling::rotation(&mut rng);
        match attempt(f, g, &q)? {
            Attempt::Retry(reason) => last_reason = reason,
            Attempt::Done(lifted) => {
                if lifted.len() != expected {
                    last_reason = format!("recovered {} points", lifted.len());
                    continue;
                }
                let points: Vec<ProjPoint> = lifted
                    .iter()
                    .map(|l| ProjPoint::new(l.point))
                    .collect::<Result<_>>()?;
                let mut radius = tol;
                let clusters = loop {
                    let c = cluster_points(&points, radius);
                    if min_separation(&c) > 3.0 * radius || radius >= MAX_CLUSTER_RADIUS {
                        break c;
                    }
                    radius = (radius * 2.0).min(MAX_CLUSTER_RADIUS);
                };
                if min_separation(&clusters) <= 3.0 * radius {
                    return Err(Error::BezoutDeficit {
                        found: expected,
                        expected,
                        detail: "multiplicity clusters remain ambiguous at the largest radius".into(),
                    });
                }
                let mut div = Divisor::new();
                for (p, m) in clusters {
                    div.entries.push(DivisorEntry { point: p, mult: m });
                }
                return Ok(div);
            }
        }
    }
    Err(Error::BezoutDeficit {
        found: 0,
        expected,
        detail: last_reason,
    })
}

/// Splits a real-contact divisor `div = D + conj(D)` using the canonical
/// phase rule.
pub fn split_real_contact(div: &Divisor, tol: f64) -> Result<(Divisor, Divisor)> {
    split_real_contact_with_choice(div, tol, 0)
}

/// Number of conjugate pairs in `div`, i.e. the number of independent
/// splitting choices (`2^n` splits in total).
pub fn conjugate_pair_count(div: &Divisor, tol: f64) -> usize {
    div.entries
        .iter()
        .filter(|e| !e.point.is_real(REAL_POINT_TOL.max(tol)) && e.point.has_positive_phase(REAL_POINT_TOL))
        .count()
}

/// Like [`split_real_contact`], but flips the representative of the `i`-th
/// conjugate pair when bit `i` of `choice` is set.
pub fn split_real_contact_with_choice(div: &Divisor, tol: f64, choice: u64) -> Result<(Divisor, Divisor)> {
    let real_tol = REAL_POINT_TOL.max(tol);
    let mut d = Divisor::new();
    let mut pair_index = 0;
    let mut used = vec![false; div.entries.len()];
    for (i, e) in div.entries.iter().enumerate() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if e.point.is_real(real_tol) {
            if e.mult % 2 != 0 {
                return Err(Error::NotRealContact(format!(
                    "real point {:?} has odd multiplicity {}",
                    e.point.coords(),
                    e.mult
                )));
            }
            d.entries.push(DivisorEntry {
                point: e.point,
                mult: e.mult / 2,
            });
            continue;
        }
        let target = e.point.conj();
        let partner = div
            .entries
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, o)| (j, o.point.distance(&target)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((j, dist)) = partner.filter(|(_, dist)| *dist <= tol) else {
            return Err(Error::NotRealContact(format!(
                "point {:?} has no conjugate partner",
                e.point.coords()
            )));
        };
        let _ = dist;
        used[j] = true;
        let other = &div.entries[j];
        if other.mult != e.mult {
            return Err(Error::NotRealContact(format!(
                "conjugate points carry multiplicities {} and {}",
                e.mult, other.mult
            )));
        }
        let (pos, neg) = if e.point.has_positive_phase(REAL_POINT_TOL) {
            (e.point, other.point)
        } else {
            (other.point, e.point)
        };
        let pick = if choice >> pair_index & 1 == 1 { neg } else { pos };
        pair_index += 1;
        d.entries.push(DivisorEntry {
            point: pick,
            mult: e.mult,
        });
    }
    let dbar = d.conj();
    Ok((d, dbar))
}

/// The divisor `D_M` with `f.a11 = D_M + conj(D_M)` determined by the first
/// row `(a11, ..., a1d)` of the adjugate of `M`.
///
/// At a non-real point the multiplicity is the minimum over `j` of the
/// intersection multiplicities of `f` and `a1j`. At a real point it is half
/// the multiplicity in `f.a11`, which the identity forces.
pub fn divisor_from_pencil(m: &HermitianPencil, f: &HomogPoly3, tol: f64) -> Result<Divisor> {
    let det = m.determinant();
    let (_, misfit) = det.proportionality(f);
    if misfit > 1e-6 {
        return Err(Error::DetMismatch { misfit });
    }
    if m.dim() == 1 {
        return Ok(Divisor::new());
    }
    let adj = m.adjugate();
    let row = adj.row(0);
    let a11 = row[0].real_part();
    let base = intersection_divisor(f, &a11, tol)?;
    let match_tol = 100.0 * MAX_CLUSTER_RADIUS;
    let others: Vec<Divisor> = row[1..]
        .iter()
        .filter(|p| p.max_abs() > 1e-10 * a11.max_abs())
        .map(|p| intersection_divisor(f, p, tol))
        .collect::<Result<_>>()?;
    let mut dm = Divisor::new();
    for e in base.entries() {
        let n_p = if e.point.is_real(REAL_POINT_TOL) {
            if e.mult % 2 != 0 {
                return Err(Error::MultiplicityEstimate(format!(
                    "real point with odd multiplicity {}",
                    e.mult
                )));
            }
            e.mult / 2
        } else {
            others
                .iter()
                .map(|div| div.multiplicity_at(&e.point, match_tol))
                .fold(e.mult, usize::min)
        };
        if n_p > 0 {
            dm.entries.push(DivisorEntry {
                point: e.point,
                mult: n_p,
            });
        }
    }
    if !dm.sum(&dm.conj(), match_tol).approx_eq(&base, match_tol) {
        return Err(Error::MultiplicityEstimate(
            "D_M + conj(D_M) does not reproduce f.a11".into(),
        ));
    }
    Ok(dm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn quadric_cone() -> HomogPoly3 {
        HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], -1.0), ([0, 0, 2], -1.0)]).unwrap()
    }

    #[test]
    fn normalization_is_idempotent_and_conjugation_involutive() {
        let p = ProjPoint::new([c(2.0, 0.0), c(3f64.sqrt(), 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(ProjPoint::new(p.coords()).unwrap(), p);
        assert!(p.conj().conj().distance(&p) < 1e-15);
        assert!(p.has_positive_phase(1e-9));
        assert!(!p.conj().has_positive_phase(1e-9));
        assert!(ProjPoint::new([c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn conic_meets_line_in_two_conjugate_points() {
        let x = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let div = intersection_divisor(&quadric_cone(), &x, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(div.degree(), 2);
        assert_eq!(div.entries().len(), 2);
        for want in [[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)]] {
            let p = ProjPoint::new(want).unwrap();
            assert_eq!(div.multiplicity_at(&p, 1e-9), 1);
        }
    }

    #[test]
    fn common_factor_is_rejected() {
        let x = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        let f = &x * &HomogPoly3::linear_real([1.0, -1.0, 0.0]);
        assert!(matches!(
            intersection_divisor(&f, &x, DEFAULT_CLUSTER_RADIUS),
            Err(Error::CommonFactor)
        ));
    }

    #[test]
    fn paper_intersection_divisor() {
        let f = fixtures::paper_quartic();
        let div = intersection_divisor(&f, &fixtures::paper_a11(), DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(div.degree(), 12);
        assert_eq!(div.entries().len(), 10);
        for (p, m) in fixtures::paper_intersection_points() {
            assert_eq!(div.multiplicity_at(&p, 1e-6), m, "{p:?}");
        }
    }

    #[test]
    fn tangent_line_gives_double_point() {
        // x = y touches x^2 - y^2 - z^2 at [1:1:0].
        let l = HomogPoly3::linear_real([1.0, -1.0, 0.0]);
        let div = intersection_divisor(&quadric_cone(), &l, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(div.entries().len(), 1);
        assert_eq!(div.entries()[0].mult, 2);
        assert!(div.entries()[0].point.distance(&ProjPoint::from_real([1.0, 1.0, 0.0]).unwrap()) < 1e-7);
    }

    #[test]
    fn splitting_paper_divisor_reproduces_printed_choice() {
        let f = fixtures::paper_quartic();
        let div = intersection_divisor(&f, &fixtures::paper_a11(), DEFAULT_CLUSTER_RADIUS).unwrap();
        let (d, dbar) = split_real_contact(&div, 1e-6).unwrap();
        assert_eq!(d.degree(), 6);
        assert!(d.sum(&dbar, 1e-6).approx_eq(&div, 1e-6));
        assert!(d.approx_eq(&fixtures::paper_divisor_d(), 1e-6));
        assert_eq!(conjugate_pair_count(&div, 1e-6), 4);
        let (alt, _) = split_real_contact_with_choice(&div, 1e-6, 0b1).unwrap();
        assert!(!alt.approx_eq(&d, 1e-6));
        assert_eq!(alt.degree(), 6);
    }

    #[test]
    fn splitting_edge_cases() {
        let p = ProjPoint::new([c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let div = Divisor::from_entries(vec![
            DivisorEntry { point: p, mult: 1 },
            DivisorEntry { point: p.conj(), mult: 1 },
        ]);
        let (d, _) = split_real_contact(&div, 1e-9).unwrap();
        assert_eq!(d.degree(), 1);
        assert!(d.entries()[0].point.distance(&p) < 1e-15);

        let real = Divisor::from_entries(vec![DivisorEntry {
            point: ProjPoint::from_real([1.0, 2.0, 3.0]).unwrap(),
            mult: 1,
        }]);
        assert!(matches!(
            split_real_contact(&real, 1e-9),
            Err(Error::NotRealContact(_))
        ));
    }

    #[test]
    fn divisor_from_quadric_pencil() {
        let m = fixtures::quadric_pencil();
        let div = divisor_from_pencil(&m, &quadric_cone(), DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(div.degree(), 1);
        let p = div.entries()[0].point;
        assert!(p.distance(&ProjPoint::from_real([1.0, 1.0, 0.0]).unwrap()) < 1e-7);
    }

    #[test]
    fn divisor_from_linear_pencil_is_empty() {
        let m = HermitianPencil::from_real_linear(&[vec![[1.0, 0.0, 0.0]]]).unwrap();
        let f = HomogPoly3::linear_real([1.0, 0.0, 0.0]);
        assert!(divisor_from_pencil(&m, &f, DEFAULT_CLUSTER_RADIUS).unwrap().is_empty());
    }

    #[test]
    fn divisor_from_paper_pencil() {
        let f = fixtures::paper_quartic();
        let div = divisor_from_pencil(&fixtures::paper_md(), &f, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert_eq!(div.degree(), 6);
        for e in div.entries().iter().filter(|e| e.point.is_real(REAL_POINT_TOL)) {
            assert_eq!(e.mult, 1);
        }
        let a11 = fixtures::paper_md().adjugate().get(0, 0).real_part();
        let base = intersection_divisor(&f, &a11, DEFAULT_CLUSTER_RADIUS).unwrap();
        assert!(div.sum(&div.conj(), 1e-6).approx_eq(&base, 1e-6));
    }

    #[test]
    fn divisor_from_pencil_rejects_wrong_determinant() {
        let m = fixtures::quadric_pencil();
        assert!(matches!(
            divisor_from_pencil(&m, &HomogPoly3::monomial([2, 0, 0], c(1.0, 0.0)), 1e-5),
            Err(Error::DetMismatch { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let div = intersection_divisor(&quadric_cone(), &HomogPoly3::linear_real([1.0, 0.0, 0.0]), 1e-5).unwrap();
        let s = serde_json::to_string(&div).unwrap();
        let back: Divisor = serde_json::from_str(&s).unwrap();
        assert!(back.approx_eq(&div, 1e-15));
    }
}
