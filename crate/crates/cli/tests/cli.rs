use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use detrep::{fixtures, HermitianPencil, HomogPoly3};
use tempfile::TempDir;

fn detrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detrep")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, v: &T) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sphere() -> HomogPoly3 {
    HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)]).unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "q.json", &fixtures::paper_quartic());
    let o = detrep(&["check", s(&q)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("\"hyperbolic\": true"));

    let sp = write_json(dir.path(), "s.json", &sphere());
    let o = detrep(&["check", s(&sp)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("refuted"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"degree\": 2, \"terms\": [").unwrap();
    assert_eq!(code(&detrep(&["check", s(&bad)])), 2);
    assert_eq!(code(&detrep(&["check", s(&q), "--e", "1,0"])), 2);
    assert_eq!(code(&detrep(&["frobnicate"])), 2);
}

#[test]
fn represent_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "q.json", &fixtures::paper_quartic());
    let out = dir.path().join("out");
    let o = detrep(&["represent", s(&q), "--out-dir", s(&out), "--realify", "--lmi", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m: HermitianPencil = serde_json::from_str(&fs::read_to_string(out.join("pencil.json")).unwrap()).unwrap();
    assert_eq!(m.dim(), 4);
    let sym: detrep::SymPencil =
        serde_json::from_str(&fs::read_to_string(out.join("sympencil.json")).unwrap()).unwrap();
    assert_eq!(sym.dim(), 8);
    assert!(fs::read_to_string(out.join("lmi.txt")).unwrap().contains("dim 8"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["definite_at_e"], true);

    let o = detrep(&["verify", s(&q), s(&out.join("pencil.json"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn represent_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "q.json", &fixtures::random_smooth_hyperbolic(3, 11));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = detrep(&["represent", s(&q), "--out-dir", s(d), "--seed", "3"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for name in ["pencil.json", "report.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn represent_linear_form() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "x.json", &HomogPoly3::linear_real([1.0, 0.0, 0.0]));
    let out = dir.path().join("out");
    let o = detrep(&["represent", s(&q), "--out-dir", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m: HermitianPencil = serde_json::from_str(&fs::read_to_string(out.join("pencil.json")).unwrap()).unwrap();
    assert_eq!(m.dim(), 1);
}

#[test]
fn singular_input_needs_perturbation() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "t.json", &fixtures::tacnode_quartic());
    let out = dir.path().join("out");
    let o = detrep(&["represent", s(&q), "--e", "1,0,0.5", "--out-dir", s(&out)]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("singular input") && err.contains("--perturb"), "{err}");

    let o = detrep(&["represent", s(&q), "--e", "1,0,0.5", "--perturb", "0.05,3", "--out-dir", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.join("perturbed.json").exists());
    let o = detrep(&["verify", s(&out.join("perturbed.json")), s(&out.join("pencil.json")), "--e", "1,0,0.5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&detrep(&["represent", s(&q), "--perturb", "0.05"])), 2);
}

#[test]
fn verify_fixture_identity_and_negation() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "q.json", &fixtures::paper_quartic());
    let md = write_json(dir.path(), "md.json", &fixtures::paper_md());
    let o = detrep(&["verify", s(&q), s(&md)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let eye = HermitianPencil::from_real_linear(
        &(0..4)
            .map(|i| (0..4).map(|j| if i == j { [1.0, 0.0, 0.0] } else { [0.0; 3] }).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let eye = write_json(dir.path(), "eye.json", &eye);
    let o = detrep(&["verify", s(&q), s(&eye)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not a multiple"));

    let neg = write_json(dir.path(), "neg.json", &fixtures::paper_md().neg());
    let o = detrep(&["verify", s(&q), s(&neg)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("negative-definite"));
}

#[test]
fn enumerate_splits_writes_alternatives() {
    let dir = TempDir::new().unwrap();
    let q = write_json(dir.path(), "q.json", &fixtures::paper_quartic());
    let out = dir.path().join("out");
    let o = detrep(&["represent", s(&q), "--out-dir", s(&out), "--enumerate-splits"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let splits = summary["splits"].as_array().unwrap();
    assert_eq!(splits.len(), 15);
    for sp in splits.iter().filter(|sp| sp["file"].is_string()) {
        let path = out.join(sp["file"].as_str().unwrap());
        assert_eq!(code(&detrep(&["verify", s(&q), s(&path)])), 0);
    }
}

fn csv_points(text: &str) -> Vec<(String, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("curve,u,v"));
    lines
        .map(|l| {
            let p: Vec<&str> = l.split(',').collect();
            (p[0].to_string(), p[1].parse().unwrap(), p[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn plot_charts() {
    let dir = TempDir::new().unwrap();
    let circle = HomogPoly3::from_real_terms(2, &[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], -1.0)]).unwrap();
    let c = write_json(dir.path(), "c.json", &circle);
    let o = detrep(&["plot", s(&c), "--chart", "z", "--samples", "50"]);
    assert_eq!(code(&o), 0);
    let pts = csv_points(&stdout(&o));
    assert!(pts.len() > 40);
    for (_, u, v) in &pts {
        assert!((u * u + v * v - 1.0).abs() < 1e-9);
    }

    let sp = write_json(dir.path(), "s.json", &sphere());
    let o = detrep(&["plot", s(&sp)]);
    assert_eq!(stdout(&o), "curve,u,v\n");

    let q = write_json(dir.path(), "q.json", &fixtures::paper_quartic());
    let g = write_json(dir.path(), "g.json", &fixtures::paper_a11());
    let csv = dir.path().join("plot.csv");
    let o = detrep(&["plot", s(&q), "--g", s(&g), "--out", s(&csv)]);
    assert_eq!(code(&o), 0);
    let pts = csv_points(&fs::read_to_string(&csv).unwrap());
    let f = fixtures::paper_quartic();
    assert!(pts.iter().any(|p| p.0 == "g"));
    for (name, u, v) in pts.iter().filter(|p| p.0 == "f") {
        assert_eq!(name, "f");
        assert!(f.eval_real([1.0, *u, *v]).re.abs() < 1e-6 * (1.0 + u.abs() + v.abs()).powi(4));
    }
    assert_eq!(code(&detrep(&["plot", s(&q), "--chart", "w"])), 2);
}
