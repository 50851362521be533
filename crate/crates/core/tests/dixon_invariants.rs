use detrep::dixon::{self, DixonOptions};
use detrep::hyperbolic;
use detrep::pencil::{self, PD_TOL};
use detrep::uniroots::REAL_ROOT_TOL;
use detrep::{fixtures, linalg, poly, sampling, HomogPoly3, PolyMatrix};

const E: [f64; 3] = [1.0, 0.0, 0.0];

fn paper_contact() -> PolyMatrix {
    let f = fixtures::paper_quartic();
    dixon::dixon_represent_with(&f, E, &DixonOptions::default()).unwrap().contact_matrix
}

#[test]
fn contact_matrix_is_rank_one_on_the_curve() {
    let f = fixtures::paper_quartic();
    let a = paper_contact();
    let a11 = a.get(0, 0);
    for j in 1..4 {
        for k in j..4 {
            // a11 a_jk - conj(a1j) a1k lies in (f)
            let minor = &(a11 * a.get(j, k)) - &a.get(0, j).conj().mul_poly(a.get(0, k));
            let (_, res) = minor.exact_divide(&f).unwrap();
            assert!(res < 1e-6, "({j},{k}) residual {res:e}");
        }
    }
    for p in hyperbolic::sample_curve_points(&f, E, 50, 3).unwrap() {
        let sv = a.eval(poly::to_complex(p)).singular_values();
        let mut s: Vec<f64> = sv.iter().copied().collect();
        s.sort_by(|x, y| y.total_cmp(x));
        assert!(s[1] < 1e-5 * s[0], "{s:?}");
    }
}

#[test]
fn adjugate_of_pencil_recovers_contact_matrix() {
    let f = fixtures::paper_quartic();
    let a = paper_contact();
    let (raw, _, _) = dixon::extract_pencil_raw(&f, &a).unwrap();
    // det A = c f^{d-1}
    let (c, misfit) = a.determinant().proportionality(&f.pow(3));
    assert!(misfit < 1e-6);
    let adj = raw.adjugate();
    let scale = c * c;
    let amax = (0..16).map(|n| a.get(n / 4, n % 4).max_abs()).fold(0.0, f64::max);
    for i in 0..4 {
        for j in 0..4 {
            let diff = adj.get(i, j) - &a.get(i, j).scale(scale);
            assert!(diff.max_abs() < 1e-5 * amax * scale.norm(), "({i},{j})");
        }
    }
}

#[test]
fn members_of_the_contact_system_interlace() {
    let f = fixtures::paper_quartic();
    let a = paper_contact();
    let mut rng = sampling::rng(17);
    for k in 0..20 {
        let l = sampling::complex_gaussian(&mut rng, 4);
        let mut g = HomogPoly3::zero(3);
        for j in 0..4 {
            for m in 0..4 {
                g = &g + &a.get(j, m).scale(l[j] * l[m].conj());
            }
        }
        assert!(g.max_imag() < 1e-9 * g.max_abs());
        let c = hyperbolic::check_interlaces(&f, &g.real_part(), E, 50, REAL_ROOT_TOL, 100 + k).unwrap();
        assert!(c.is_certified(), "lambda sample {k}");
    }
}

fn check_representation(f: &HomogPoly3, seed: u64) {
    let m = dixon::dixon_represent(f, E, seed).unwrap();
    let mut rng = sampling::rng(seed + 1);
    for _ in 0..100 {
        let p = sampling::unit_sphere(&mut rng);
        let fx = f.eval_real(p).re;
        assert!((linalg::det(&m.eval(p)).re - fx).abs() < 1e-6 * (1.0 + fx.abs()));
    }
    assert!(pencil::is_positive_definite(&m.eval(E), PD_TOL).unwrap());
}

#[test]
fn random_smooth_curves_are_represented() {
    for (degree, seed) in [(2, 1), (3, 2), (3, 3), (4, 4), (5, 5)] {
        let f = fixtures::random_smooth_hyperbolic(degree, seed);
        check_representation(&f, seed);
    }
}

#[test]
fn perturbed_tacnode_is_represented() {
    let e = fixtures::TACNODE_BASE_POINT;
    let f = dixon::perturb_smooth(&fixtures::tacnode_quartic(), e, 0.05, 3).unwrap();
    let m = dixon::dixon_represent(&f, e, 0).unwrap();
    assert!((&m.determinant() - &f).max_abs() < 1e-6 * f.max_abs());
    assert!(pencil::is_positive_definite(&m.eval(e), PD_TOL).unwrap());
}

#[test]
fn other_splittings_give_other_representations() {
    let f = fixtures::paper_quartic();
    let base = dixon::dixon_represent_with(&f, E, &DixonOptions::default()).unwrap();
    let alt = dixon::dixon_represent_with(&f, E, &DixonOptions { split_choice: 0b1, ..DixonOptions::default() }).unwrap();
    assert!((&alt.pencil.determinant() - &f).max_abs() < 1e-7);
    assert!(pencil::is_positive_definite(&alt.pencil.eval(E), PD_TOL).unwrap());
    assert!(!alt.report.divisor.approx_eq(&base.report.divisor, 1e-6));
}

#[test]
fn pipeline_is_deterministic() {
    let f = fixtures::random_smooth_hyperbolic(3, 9);
    let a = dixon::dixon_represent(&f, E, 4).unwrap();
    let b = dixon::dixon_represent(&f, E, 4).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn divisor_of_produced_pencil_matches_construction() {
    let f = fixtures::paper_quartic();
    let rep = dixon::dixon_represent_with(&f, E, &DixonOptions::default()).unwrap();
    let dm = detrep::intersect::divisor_from_pencil(&rep.pencil, &f, detrep::intersect::DEFAULT_CLUSTER_RADIUS).unwrap();
    assert!(dm.approx_eq(&rep.report.divisor, 1e-5));
}
