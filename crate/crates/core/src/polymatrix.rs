//! Square matrices whose entries are homogeneous polynomials of a common degree.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::poly::HomogPoly3;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<HomogPoly3>,
}

impl PolyMatrix {
    /// Builds a matrix from rows; all entries must share one degree.
    pub fn from_rows(rows: Vec<Vec<HomogPoly3>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Invalid("polynomial matrix must be square and non-empty".into()));
        }
        let entries: Vec<HomogPoly3> = rows.into_iter().flatten().collect();
        let deg = entries[0].degree();
        if entries.iter().any(|p| p.degree() != deg) {
            return Err(Error::Degree("matrix entries must share one degree".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> HomogPoly3) -> Result<Self> {
        Self::from_rows(
            (0..dim)
                .map(|i| (0..dim).map(|j| f(i, j)).collect())
                .collect(),
        )
    }

    /// Constant identity matrix (entries of degree 0).
    pub fn identity(dim: usize) -> Self {
        let one = HomogPoly3::constant(C64::new(1.0, 0.0));
        let zero = HomogPoly3::zero(0);
        Self::from_fn(dim, |i, j| if i == j { one.clone() } else { zero.clone() })
            .expect("identity is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common degree of the entries.
    pub fn degree(&self) -> usize {
        self.entries[0].degree()
    }

    pub fn get(&self, row: usize, col: usize) -> &HomogPoly3 {
        &self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[HomogPoly3] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// Hermitian within `tol` relative to the largest entry coefficient.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.entries.iter().map(|p| p.max_abs()).fold(0.0, f64::max);
        (0..self.dim).all(|i| {
            (i..self.dim).all(|j| {
                let a = self.get(i, j);
                let b = self.get(j, i).conj();
                (a - &b).max_abs() <= tol * scale
            })
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Invalid("dimension mismatch in matrix product".into()));
        }
        let deg = self.degree() + other.degree();
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(HomogPoly3::zero(deg), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        })
    }

    pub fn eval(&self, pt: [C64; 3]) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).eval(pt))
    }

    /// Determinant of the submatrix on `rows` x `cols` (equal lengths), by
    /// Laplace expansion memoized over column subsets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> HomogPoly3 {
        assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let deg = self.degree();
        // level m holds determinants of rows[0..m] against each m-subset of
        // cols, keyed by bitmask over positions in `cols`.
        let mut level: BTreeMap<u32, HomogPoly3> = BTreeMap::new();
        level.insert(0, HomogPoly3::constant(C64::new(1.0, 0.0)));
        for (m, &r) in rows.iter().enumerate() {
            let mut next: BTreeMap<u32, HomogPoly3> = BTreeMap::new();
            for (&mask, sub) in &level {
                for c in 0..k {
                    if mask & (1 << c) != 0 {
                        continue;
                    }
                    // position of c among the columns of the enlarged subset
                    let pos = (mask & ((1 << c) - 1)).count_ones() as usize;
                    let sign = if (m + pos).is_multiple_of(2) { 1.0 } else { -1.0 };
                    let term = (sub * self.get(r, cols[c])).scale_real(sign);
                    let key = mask | (1 << c);
                    match next.get_mut(&key) {
                        Some(acc) => *acc = &*acc + &term,
                        None => {
                            next.insert(key, term);
                        }
                    }
                }
            }
            level = next;
        }
        level
            .remove(&((1u32 << k) - 1))
            .unwrap_or_else(|| HomogPoly3::zero(deg * k))
    }

    pub fn determinant(&self) -> HomogPoly3 {
        let idx: Vec<usize> = (0..self.dim).collect();
        self.minor(&idx, &idx)
    }

    /// Transpose of the cofactor matrix. A 1x1 matrix has adjugate `[1]`.
    pub fn adjugate(&self) -> Self {
        let d = self.dim;
        if d == 1 {
            return Self::identity(1);
        }
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                // adj[i][j] = (-1)^{i+j} det(A without row j, column i)
                let rows: Vec<usize> = (0..d).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..d).filter(|&c| c != i).collect();
                let m = self.minor(&rows, &cols);
                entries.push(if (i + j) % 2 == 0 { m } else { -&m });
            }
        }
        Self { dim: d, entries }
    }

    pub fn map(&self, f: impl Fn(&HomogPoly3) -> HomogPoly3) -> Result<Self> {
        Self::from_fn(self.dim, |i, j| f(self.get(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(l: [f64; 3]) -> HomogPoly3 {
        HomogPoly3::linear_real(l)
    }

    #[test]
    fn one_by_one_adjugate_is_identity() {
        let m = PolyMatrix::from_rows(vec![vec![lin([1.0, 2.0, 3.0])]]).unwrap();
        let adj = m.adjugate();
        assert_eq!(adj.degree(), 0);
        assert_eq!(adj.get(0, 0).coeffs(), &[C64::new(1.0, 0.0)]);
    }

    #[test]
    fn two_by_two_adjugate() {
        let (p, q, r, s) = (
            lin([1.0, 0.0, 0.0]),
            lin([0.0, 1.0, 0.0]),
            lin([0.0, 0.0, 1.0]),
            lin([1.0, 1.0, 0.0]),
        );
        let m = PolyMatrix::from_rows(vec![vec![p.clone(), q.clone()], vec![r.clone(), s.clone()]])
            .unwrap();
        let adj = m.adjugate();
        assert_eq!(adj.get(0, 0), &s);
        assert_eq!(adj.get(0, 1), &-&q);
        assert_eq!(adj.get(1, 0), &-&r);
        assert_eq!(adj.get(1, 1), &p);
    }

    #[test]
    fn identity_determinant() {
        let det = PolyMatrix::identity(3).determinant();
        assert_eq!(det.coeffs(), &[C64::new(1.0, 0.0)]);
    }

    #[test]
    fn quadric_pencil_determinant() {
        let m = PolyMatrix::from_rows(vec![
            vec![lin([1.0, 1.0, 0.0]), lin([0.0, 0.0, 1.0])],
            vec![lin([0.0, 0.0, 1.0]), lin([1.0, -1.0, 0.0])],
        ])
        .unwrap();
        let want =
            HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], -1.0), ([0, 0, 2], -1.0)])
                .unwrap();
        assert!((&m.determinant() - &want).max_abs() < 1e-15);
    }

    #[test]
    fn three_by_three_matches_rule_of_sarrus() {
        let v: Vec<HomogPoly3> = (0..9)
            .map(|i| lin([i as f64 + 1.0, (i * i % 5) as f64, 1.0 - i as f64]))
            .collect();
        let m = PolyMatrix::from_rows(vec![v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()])
            .unwrap();
        let a = |i: usize, j: usize| &v[3 * i + j];
        let t = |x: &HomogPoly3, y: &HomogPoly3, z: &HomogPoly3| &(x * y) * z;
        let sarrus = &(&(&t(a(0, 0), a(1, 1), a(2, 2)) + &t(a(0, 1), a(1, 2), a(2, 0)))
            + &t(a(0, 2), a(1, 0), a(2, 1)))
            - &(&(&t(a(0, 2), a(1, 1), a(2, 0)) + &t(a(0, 0), a(1, 2), a(2, 1)))
                + &t(a(0, 1), a(1, 0), a(2, 2)));
        assert!((&m.determinant() - &sarrus).max_abs() < 1e-10);
    }
}
