//! Univariate complex polynomials: simultaneous root finding and the
//! real-rootedness / interlacing predicates built on it.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default band for calling a root real: `|Im r| ≤ REAL_ROOT_TOL · (1 + |r|)`.
pub const REAL_ROOT_TOL: f64 = 1e-7;

/// Roots closer than this (scaled by `1 + |r|`) form one multiplicity cluster.
pub const CLUSTER_RADIUS: f64 = 1e-5;

/// Leading coefficients below this fraction of the largest one are rejected.
pub const LEADING_COEFF_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 2000;

/// Coefficients of a polynomial in `t`, lowest power first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniPoly {
    coeffs: Vec<C64>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![C64::new(0.0, 0.0)]
        } else {
            coeffs
        };
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// `lead · Π (t − r_i)`.
    pub fn from_roots(lead: C64, roots: &[C64]) -> Self {
        let mut c = vec![lead];
        for r in roots {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (k, v) in c.iter().enumerate() {
                next[k + 1] += v;
                next[k] -= v * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Nominal degree (length of the coefficient list minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, t: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![C64::new(0.0, 0.0)]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn is_real(&self) -> bool {
        let s = self.max_abs();
        self.coeffs.iter().all(|c| c.im.abs() <= 1e-12 * s)
    }
}

/// All roots of a polynomial, repeated according to multiplicity.
#[derive(Clone, Debug, Serialize)]
pub struct RootList {
    pub roots: Vec<C64>,
    pub cluster_radius: f64,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Groups roots lying within the cluster radius of one another
    /// (single linkage) and returns `(mean, multiplicity)` per group.
    pub fn clusters(&self) -> Vec<(C64, usize)> {
        let n = self.roots.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (self.roots[i], self.roots[j]);
                let scale = 1.0 + a.norm().max(b.norm());
                if (a - b).norm() <= self.cluster_radius * scale {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[rj] = ri;
                    }
                }
            }
        }
        let mut groups: Vec<(usize, C64, usize)> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match groups.iter_mut().find(|g| g.0 == r) {
                Some(g) => {
                    g.1 += self.roots[i];
                    g.2 += 1;
                }
                None => groups.push((r, self.roots[i], 1)),
            }
        }
        groups
            .into_iter()
            .map(|(_, sum, m)| (sum / m as f64, m))
            .collect()
    }

    /// Whether every cluster center satisfies `|Im| ≤ tol · (1 + |r|)`.
    pub fn all_real(&self, tol: f64) -> bool {
        self.clusters()
            .iter()
            .all(|(c, _)| c.im.abs() <= tol * (1.0 + c.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.clusters()
            .iter()
            .map(|(c, _)| c.im.abs())
            .fold(0.0, f64::max)
    }

    /// Real parts of the cluster centers, expanded by multiplicity and sorted.
    pub fn sorted_real_parts(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .clusters()
            .into_iter()
            .flat_map(|(c, m)| std::iter::repeat_n(c.re, m))
            .collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

/// Aberth–Ehrlich simultaneous iteration for all roots of `u`.
pub fn find_roots(u: &UniPoly) -> Result<RootList> {
    let n = u.degree();
    let scale = u.max_abs();
    if n == 0 {
        return Ok(RootList {
            roots: Vec::new(),
            cluster_radius: CLUSTER_RADIUS,
        });
    }
    let lead = u.leading();
    if !(lead.norm() >= LEADING_COEFF_TOL * scale) || scale == 0.0 {
        return Err(Error::LeadingCoeff {
            lead: lead.norm(),
            scale,
        });
    }
    // Exact zeros at the origin are split off directly.
    let zeros = u.coeffs.iter().take_while(|c| c.re == 0.0 && c.im == 0.0).count();
    let monic: Vec<C64> = u.coeffs[zeros..].iter().map(|c| c / lead).collect();
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    if monic.len() > 1 {
        roots.extend(aberth(&monic));
    }
    Ok(RootList {
        roots,
        cluster_radius: CLUSTER_RADIUS,
    })
}

fn aberth(monic: &[C64]) -> Vec<C64> {
    let n = monic.len() - 1;
    let p = UniPoly::new(monic.to_vec());
    let dp = p.derivative();
    if n == 1 {
        return vec![-monic[0]];
    }
    let center = -monic[n - 1] / n as f64;
    let shifted = taylor_shift(monic, center);
    let radius = (0..n)
        .map(|k| shifted[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-12);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + C64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = p.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step <= 4.0 * f64::EPSILON {
            break;
        }
    }
    // Newton polish, accepted only when it lowers the residual.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let pv = p.eval(*zi);
            let dv = dp.eval(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let cand = *zi - pv / dv;
            if cand.is_finite() && p.eval(cand).norm() < pv.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    z
}

/// Coefficients of `p(t + c)`.
fn taylor_shift(coeffs: &[C64], c: C64) -> Vec<C64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = a[j + 1];
            a[j] += c * next;
        }
    }
    a
}

pub fn is_real_rooted(u: &UniPoly, tol: f64) -> Result<bool> {
    Ok(find_roots(u)?.all_real(tol))
}

/// Whether the roots of `gu` (degree `d − 1`) weakly interlace those of `fu`
/// (degree `d`): `α_i ≤ β_i ≤ α_{i+1}` with slack `tol · (1 + max |root|)`.
pub fn interlaces(fu: &UniPoly, gu: &UniPoly, tol: f64) -> Result<bool> {
    if fu.degree() == 0 || gu.degree() + 1 != fu.degree() {
        return Err(Error::Degree(format!(
            "interlacing needs deg g = deg f - 1, got {} and {}",
            gu.degree(),
            fu.degree()
        )));
    }
    let fr = find_roots(fu)?;
    let gr = find_roots(gu)?;
    for r in [&fr, &gr] {
        if !r.all_real(tol) {
            return Err(Error::NotRealRooted {
                max_imag: r.max_imag(),
            });
        }
    }
    Ok(sorted_interlace(&fr.sorted_real_parts(), &gr.sorted_real_parts(), tol))
}

pub(crate) fn sorted_interlace(alpha: &[f64], beta: &[f64], tol: f64) -> bool {
    let scale = 1.0
        + alpha
            .iter()
            .chain(beta)
            .map(|v| v.abs())
            .fold(0.0, f64::max);
    let slack = tol * scale;
    beta.iter()
        .enumerate()
        .all(|(i, &b)| alpha[i] <= b + slack && b <= alpha[i + 1] + slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted_re(u: &UniPoly) -> Vec<f64> {
        let mut v: Vec<f64> = find_roots(u).unwrap().roots.iter().map(|r| r.re).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    #[test]
    fn simple_quadratic() {
        let r = sorted_re(&UniPoly::from_real(&[-25.0, 0.0, 1.0]));
        assert!((r[0] + 5.0).abs() < 1e-14 && (r[1] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn quartic_with_double_zero() {
        let u = UniPoly::from_real(&[0.0, 0.0, -8.0, 0.0, 1.0]);
        let r = sorted_re(&u);
        let s = 8f64.sqrt();
        let want = [-s, 0.0, 0.0, s];
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn numerically_double_root_clusters() {
        // (t - 1.5)^2 (t + 2)
        let u = UniPoly::from_roots(
            C64::new(1.0, 0.0),
            &[C64::new(1.5, 0.0), C64::new(1.5, 0.0), C64::new(-2.0, 0.0)],
        );
        let roots = find_roots(&u).unwrap();
        let clusters = roots.clusters();
        assert_eq!(clusters.len(), 2);
        let double = clusters.iter().find(|c| c.1 == 2).unwrap();
        // a double root is only conditioned to about sqrt(eps)
        assert!((double.0 - C64::new(1.5, 0.0)).norm() < 1e-8);
        assert!(roots.all_real(REAL_ROOT_TOL));
    }

    #[test]
    fn rejects_vanishing_leading_coefficient() {
        let u = UniPoly::from_real(&[1.0, 1.0, 1e-14]);
        assert!(matches!(find_roots(&u), Err(Error::LeadingCoeff { .. })));
    }

    #[test]
    fn real_rootedness() {
        assert!(!is_real_rooted(&UniPoly::from_real(&[1.0, 0.0, 1.0]), REAL_ROOT_TOL).unwrap());
        assert!(is_real_rooted(&UniPoly::from_real(&[-1.0, 0.0, 1.0]), REAL_ROOT_TOL).unwrap());
    }

    #[test]
    fn interlacing_small_cases() {
        let f = UniPoly::from_real(&[-1.0, 0.0, 1.0]);
        assert!(interlaces(&f, &UniPoly::from_real(&[0.0, 1.0]), 1e-9).unwrap());
        assert!(!interlaces(&f, &UniPoly::from_real(&[-2.0, 1.0]), 1e-9).unwrap());
        assert!(matches!(
            interlaces(&f, &f, 1e-9),
            Err(Error::Degree(_))
        ));
        let complex = UniPoly::from_real(&[1.0, 0.0, 1.0]);
        assert!(matches!(
            interlaces(&complex, &UniPoly::from_real(&[0.0, 1.0]), 1e-9),
            Err(Error::NotRealRooted { .. })
        ));
    }

    #[test]
    fn companion_oracle_agrees_on_degree_six() {
        // Eigenvalues of the companion matrix as an independent route.
        let c = [3.0, -1.0, 0.5, 2.0, -4.0, 1.0, 1.0];
        let u = UniPoly::from_real(&c);
        let n = c.len() - 1;
        let comp = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -c[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let eig = comp.complex_eigenvalues();
        let roots = find_roots(&u).unwrap().roots;
        for ev in eig.iter() {
            let best = roots.iter().map(|r| (r - ev).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "{ev} unmatched");
        }
    }

    proptest! {
        #[test]
        fn reconstruction(
            re in proptest::collection::vec(-3.0f64..3.0, 1..=8),
            im in proptest::collection::vec(-3.0f64..3.0, 8),
            lead in 0.5f64..4.0,
        ) {
            let roots: Vec<C64> = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
            let u = UniPoly::from_roots(C64::new(lead, 0.0), &roots);
            let found = find_roots(&u).unwrap();
            let back = UniPoly::from_roots(C64::new(lead, 0.0), &found.roots);
            let s = u.max_abs();
            for (a, b) in back.coeffs().iter().zip(u.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-6 * s);
            }
            for r in &found.roots {
                let bound = 1e-8 * u.norm() * r.norm().max(1.0).powi(u.degree() as i32);
                prop_assert!(u.eval(*r).norm() < bound);
            }
        }

        #[test]
        fn derivative_interlaces(roots in proptest::collection::vec(-5.0f64..5.0, 2..=8)) {
            let r: Vec<C64> = roots.iter().map(|&v| C64::new(v, 0.0)).collect();
            let u = UniPoly::from_roots(C64::new(1.0, 0.0), &r);
            prop_assert!(interlaces(&u, &u.derivative(), 1e-7).unwrap());
        }

        #[test]
        fn conjugate_pairs(coeffs in proptest::collection::vec(-2.0f64..2.0, 3..=8)) {
            let mut c = coeffs.clone();
            *c.last_mut().unwrap() = 1.0;
            let found = find_roots(&UniPoly::from_real(&c)).unwrap();
            for r in found.roots.iter().filter(|r| r.im.abs() > 1e-6) {
                let best = found.roots.iter().map(|s| (s - r.conj()).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(best < 1e-6);
            }
        }
    }
}
