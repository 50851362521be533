//! Worked example data and seeded generators of hyperbolic test inputs.
//!
//! The quartic `x^4 - 4x^2y^2 + y^4 - 4x^2z^2 - 2y^2z^2 + z^4` has two real
//! nodes at `[0:±1:1]` and is hyperbolic with respect to `(1, 0, 0)`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::dixon;
use crate::intersect::{Divisor, DivisorEntry, ProjPoint};
use crate::pencil::HermitianPencil;
use crate::poly::HomogPoly3;
use crate::sampling;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn poly(degree: usize, terms: &[([usize; 3], C64)]) -> HomogPoly3 {
    HomogPoly3::from_terms(degree, terms.iter().copied()).expect("valid fixture")
}

pub fn paper_quartic() -> HomogPoly3 {
    HomogPoly3::from_real_terms(
        4,
        &[
            ([4, 0, 0], 1.0),
            ([2, 2, 0], -4.0),
            ([0, 4, 0], 1.0),
            ([2, 0, 2], -4.0),
            ([0, 2, 2], -2.0),
            ([0, 0, 4], 1.0),
        ],
    )
    .expect("valid fixture")
}

/// `D_e f / 4` for `e = (1, 0, 0)`.
pub fn paper_a11() -> HomogPoly3 {
    HomogPoly3::from_real_terms(3, &[([3, 0, 0], 1.0), ([1, 2, 0], -2.0), ([1, 0, 2], -2.0)])
        .expect("valid fixture")
}

/// The cubics `a11, a12, a13, a14` spanning the vanishing space of the
/// worked example.
pub fn paper_basis() -> Vec<HomogPoly3> {
    let a12 = poly(
        3,
        &[
            ([3, 0, 0], c(0.0, 1.0)),
            ([1, 2, 0], c(0.0, 4.0)),
            ([2, 0, 1], c(-4.0, 0.0)),
            ([0, 2, 1], c(-4.0, 0.0)),
            ([0, 0, 3], c(4.0, 0.0)),
        ],
    );
    let a13 = poly(
        3,
        &[
            ([3, 0, 0], c(0.0, -3.0)),
            ([2, 1, 0], c(4.0, 0.0)),
            ([1, 2, 0], c(0.0, 4.0)),
            ([0, 3, 0], c(-4.0, 0.0)),
            ([0, 1, 2], c(4.0, 0.0)),
        ],
    );
    let a14 = poly(
        3,
        &[
            ([3, 0, 0], c(-1.0, 0.0)),
            ([2, 1, 0], c(0.0, -2.0)),
            ([2, 0, 1], c(0.0, -2.0)),
            ([1, 1, 1], c(4.0, 0.0)),
        ],
    );
    vec![paper_a11(), a12, a13, a14]
}

pub fn paper_a22() -> HomogPoly3 {
    HomogPoly3::from_real_terms(3, &[([3, 0, 0], 13.0), ([1, 2, 0], -14.0), ([1, 0, 2], -22.0)])
        .expect("valid fixture")
}

/// The printed pencil `M_D`, whose determinant is `2^24 f`.
pub fn paper_md() -> HermitianPencil {
    // upper triangle as [c_x, c_y, c_z]
    let z = [c(0.0, 0.0); 3];
    let upper: [[[C64; 3]; 4]; 4] = [
        [
            [c(14.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
            [c(0.0, 2.0), c(-2.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 2.0), c(0.0, -2.0)],
        ],
        [z, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], z, [c(0.0, -1.0), c(2.0, 0.0), c(0.0, 0.0)]],
        [z, z, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 1.0), c(0.0, 0.0), c(-2.0, 0.0)]],
        [z, z, z, [c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]],
    ];
    let entries: Vec<Vec<[C64; 3]>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let l = if i <= j { upper[i][j] } else { upper[j][i].map(|v| v.conj()) };
                    l.map(|v| v * 32.0)
                })
                .collect()
        })
        .collect();
    HermitianPencil::from_linear_entries(&entries).expect("valid fixture")
}

/// Points of `f.a11` with multiplicities: eight simple non-real points and
/// the two nodes counted twice.
pub fn paper_intersection_points() -> Vec<(ProjPoint, usize)> {
    let s = 3f64.sqrt();
    let mut out = Vec::new();
    for (a, b) in [(c(s, 0.0), c(0.0, 1.0)), (c(0.0, 1.0), c(s, 0.0))] {
        for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            out.push((ProjPoint::new([c(2.0, 0.0), a * sa, b * sb]).unwrap(), 1));
        }
    }
    out.push((ProjPoint::from_real([0.0, 1.0, 1.0]).unwrap(), 2));
    out.push((ProjPoint::from_real([0.0, -1.0, 1.0]).unwrap(), 2));
    out
}

/// `D = [0:1:1] + [0:-1:1] + [2:√3:i] + [2:-√3:i] + [2:i:√3] + [2:i:-√3]`.
pub fn paper_divisor_d() -> Divisor {
    let s = 3f64.sqrt();
    let pts = [
        [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        [c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
        [c(2.0, 0.0), c(s, 0.0), c(0.0, 1.0)],
        [c(2.0, 0.0), c(-s, 0.0), c(0.0, 1.0)],
        [c(2.0, 0.0), c(0.0, 1.0), c(s, 0.0)],
        [c(2.0, 0.0), c(0.0, 1.0), c(-s, 0.0)],
    ];
    Divisor::from_entries(
        pts.iter()
            .map(|&p| DivisorEntry {
                point: ProjPoint::new(p).unwrap(),
                mult: 1,
            })
            .collect(),
    )
}

/// `[[x+y, z], [z, x-y]]`, a definite representation of `x^2 - y^2 - z^2`.
pub fn quadric_pencil() -> HermitianPencil {
    HermitianPencil::from_real_linear(&[
        vec![[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        vec![[0.0, 0.0, 1.0], [1.0, -1.0, 0.0]],
    ])
    .expect("valid fixture")
}

/// Product of two conics tangent at `[1:0:1]`; hyperbolic with respect to
/// `(1, 0, 0.5)` and singular there.
pub fn tacnode_quartic() -> HomogPoly3 {
    let q1 = HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], -1.0), ([0, 0, 2], -1.0)]).unwrap();
    let q2 = HomogPoly3::from_real_terms(2, &[([1, 0, 1], 1.0), ([0, 2, 0], -1.0), ([0, 0, 2], -1.0)]).unwrap();
    &q1 * &q2
}

pub const TACNODE_BASE_POINT: [f64; 3] = [1.0, 0.0, 0.5];

/// Product of `degree` random real lines `x + b y + c z` with `b^2 + c^2 < 0.81`,
/// all positive at `(1, 0, 0)`.
pub fn random_line_product(degree: usize, seed: u64) -> HomogPoly3 {
    let mut rng = sampling::rng(seed);
    let mut f = HomogPoly3::constant(c(1.0, 0.0));
    for _ in 0..degree {
        let (b, cz) = loop {
            let b = sampling::uniform(&mut rng, -0.9, 0.9);
            let cz = sampling::uniform(&mut rng, -0.9, 0.9);
            if b * b + cz * cz < 0.81 {
                break (b, cz);
            }
        };
        f = &f * &HomogPoly3::linear_real([1.0, b, cz]);
    }
    f
}

/// A smooth hyperbolic curve obtained by smoothing a random line product.
pub fn random_smooth_hyperbolic(degree: usize, seed: u64) -> HomogPoly3 {
    let f = random_line_product(degree, seed);
    dixon::perturb_smooth(&f, [1.0, 0.0, 0.0], 0.05, 2).expect("line products are hyperbolic")
}

fn random_hermitian(rng: &mut sampling::SeededRng, d: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| c(sampling::gaussian(rng), sampling::gaussian(rng)));
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// `M0 = G G* + I` with random Hermitian `M1, M2`: definite at `(1, 0, 0)`.
pub fn random_definite_pencil(d: usize, seed: u64) -> HermitianPencil {
    let mut rng = sampling::rng(seed);
    let g = DMatrix::from_fn(d, d, |_, _| c(sampling::gaussian(&mut rng), sampling::gaussian(&mut rng)));
    let m0 = &g * g.adjoint() + DMatrix::identity(d, d);
    let m1 = random_hermitian(&mut rng, d);
    let m2 = random_hermitian(&mut rng, d);
    HermitianPencil::new([m0, m1, m2]).expect("Hermitian by construction")
}

/// `P diag(l_1, ..., l_d) P*` for random invertible `P` and real lines `l_i`
/// whose values at `(1, 0, 0)` have mixed signs. The determinant is
/// hyperbolic but `M(1, 0, 0)` is indefinite.
pub fn random_indefinite_pencil(d: usize, seed: u64) -> HermitianPencil {
    assert!(d >= 2);
    let mut rng = sampling::rng(seed);
    let p = DMatrix::from_fn(d, d, |_, _| c(sampling::gaussian(&mut rng), sampling::gaussian(&mut rng)));
    let lines: Vec<[f64; 3]> = (0..d)
        .map(|i| {
            let sign = if i == 0 { -1.0 } else { 1.0 };
            [
                sign * sampling::uniform(&mut rng, 0.5, 1.5),
                sampling::uniform(&mut rng, -0.4, 0.4),
                sampling::uniform(&mut rng, -0.4, 0.4),
            ]
        })
        .collect();
    let mats = [0, 1, 2].map(|v| {
        let diag = DMatrix::from_fn(d, d, |i, j| if i == j { c(lines[i][v], 0.0) } else { c(0.0, 0.0) });
        &p * diag * p.adjoint()
    });
    HermitianPencil::new(mats).expect("Hermitian by construction")
}
