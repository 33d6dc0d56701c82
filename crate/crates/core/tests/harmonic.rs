use nilharm::cohomology::{cohomology, CohomologySpace};
use nilharm::exterior::{basis, Form};
use nilharm::harmonic::*;
use nilharm::liespec::LieAlgebraSpec;
use nilharm::linalg::Matrix;
use nilharm::scalar::{frac, int, Scalar};
use nilharm::symplectic::{symplectic_cone, symplectic_existence, Existence, SymplecticForm};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORKED: &str = "(0,0,0,12,14,15+23+24)";

fn f(s: &str) -> Form {
    Form::parse(6, s).unwrap()
}

fn spec(s: &str) -> LieAlgebraSpec {
    LieAlgebraSpec::parse(s).unwrap()
}

/// `A[α13] + B[α15] + C[α23] + D[α16+α25-α34] + E[α26-α45]`.
fn worked_form(a: i64, b: i64, c: i64, d: i64, e: i64) -> Form {
    let parts = ["a13", "a15", "a23", "a16 + a25 - a34", "a26 - a45"];
    let mut w = Form::zero(6, 2);
    for (p, v) in parts.iter().zip([a, b, c, d, e]) {
        w = &w + &f(p).scale(&int(v));
    }
    w
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn random_exact_shift(g: &LieAlgebraSpec, rng: &mut ChaCha8Rng) -> Form {
    let coords: Vec<Scalar> = (0..6).map(|_| int(rng.gen_range(-3..=3))).collect();
    g.d(&Form::from_vector(6, 1, &coords))
}

#[test]
fn worked_example_matrix_in_listed_bases() {
    let g = spec(WORKED);
    let h = cohomology(&g);
    let listed3 = [
        "a126",
        "a135",
        "a136 + a146",
        "a136 + a235",
        "a156 - a236 - a246",
        "a156 + a345 - a246",
    ];
    let listed5 = ["a12456", "a13456", "a23456"];
    let coords = |s: &[&str]| -> Matrix {
        let cols: Vec<Vec<Scalar>> = s.iter().map(|x| h.reduce(&f(x)).unwrap()).collect();
        Matrix::from_columns(&cols, cols[0].len())
    };
    let s3 = coords(&listed3);
    let t5_inv = coords(&listed5).inverse().expect("listed H^5 classes form a basis");
    // expected rows (-E,0,0),(0,0,0),(-D,-E,0),(0,-E,0),(-B,-D,E),(-B,-2D,-E), one class at a time
    let expected = |b: i64, d: i64, e: i64| {
        Matrix::from_i64(6, 3, &[-e, 0, 0, 0, 0, 0, -d, -e, 0, 0, -e, 0, -b, -d, e, -b, -2 * d, -e])
    };
    let units = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1), (2, -1, 3, 1, 4)];
    for (a, b, c, d, e) in units {
        let cup = h.cup_matrix(&worked_form(a, b, c, d, e), 3, 1).unwrap();
        let in_listed = (&(&t5_inv * &cup.matrix) * &s3).transpose();
        assert_eq!(in_listed, expected(b, d, e), "A..E = {:?}", (a, b, c, d, e));
    }
}

#[test]
fn worked_example_values() {
    let g = spec(WORKED);
    let h = cohomology(&g);
    // E ≠ 0
    for (a, b, c, d, e) in [(1, 0, 0, 0, 1), (0, 1, 0, 2, 1), (2, -1, 3, 1, -2)] {
        let s = SymplecticForm::new(&g, worked_form(a, b, c, d, e)).unwrap();
        assert_eq!(primitive(&h, &s, 0).unwrap().basis.len(), 3);
        let p = harmonic_subspaces(&h, &s).unwrap();
        assert_eq!(p.h, vec![1, 3, 5, 5, 4, 2, 1]);
        assert_eq!(h3_via_kernel(&h, &s).unwrap(), 5);
    }
    // E = 0 forces D ≠ 0
    for (a, b, c, d) in [(0, 0, 0, 1), (1, 2, -1, -1), (3, 0, 1, 2)] {
        let s = SymplecticForm::new(&g, worked_form(a, b, c, d, 0)).unwrap();
        assert_eq!(primitive(&h, &s, 0).unwrap().basis.len(), 4);
        let p = harmonic_subspaces(&h, &s).unwrap();
        assert_eq!(&p.h[3..6], &[4, 3, 0]);
        assert_eq!(h3_via_kernel(&h, &s).unwrap(), 4);
    }
}

#[test]
fn torus_is_fully_harmonic() {
    let g = spec("(0,0,0,0,0,0)");
    let h = cohomology(&g);
    for w in ["a12 + a34 + a56", "a14 + a25 + a36 + 2*a12"] {
        let s = SymplecticForm::new(&g, f(w)).unwrap();
        let p = harmonic_subspaces(&h, &s).unwrap();
        assert_eq!(p.h, (0..=6).map(|k| binomial(6, k)).collect::<Vec<_>>());
        assert_eq!(primitive(&h, &s, 0).unwrap().basis.len(), 14);
        assert_eq!(h3_via_kernel(&h, &s).unwrap(), 20);
        for k in 0..=6 {
            assert_eq!(chain_level_h(&s, k).unwrap(), binomial(6, k));
        }
    }
}

#[test]
fn chain_level_agrees_on_worked_example() {
    let g = spec(WORKED);
    let h = cohomology(&g);
    for w in [worked_form(1, 0, 0, 0, 1), worked_form(0, 0, 0, 1, 0)] {
        let s = SymplecticForm::new(&g, w).unwrap();
        let p = harmonic_subspaces(&h, &s).unwrap();
        for k in 0..=6 {
            assert_eq!(chain_level_h(&s, k).unwrap(), p.h[k], "k={k}");
        }
    }
    let s = SymplecticForm::new(&g, worked_form(1, 0, 0, 0, 1)).unwrap();
    assert_eq!(chain_level_h(&s, 5).unwrap(), 2);
    assert_eq!(chain_level_h(&s, 0).unwrap(), 1);
}

fn witness(g: &LieAlgebraSpec) -> SymplecticForm {
    match symplectic_existence(g).unwrap() {
        Existence::Yes(w) => SymplecticForm::new(g, w.omega).unwrap(),
        Existence::No { .. } => panic!("expected a symplectic algebra"),
    }
}

#[test]
fn yamada_examples() {
    for (s, b1, h5) in [("(0,0,0,0,0,12)", 5, 4), ("(0,0,0,0,12,13)", 4, 2)] {
        let g = spec(s);
        let h = cohomology(&g);
        let w = witness(&g);
        let p = harmonic_subspaces(&h, &w).unwrap();
        assert_eq!(p.h[5], h5);
        let report = yamada_check(&g, &p, b1);
        assert_eq!(report.step_length, 2);
        assert_eq!(report.top_formula, Some(true));
        assert!(report.passed(), "{report:?}");
    }
    let torus = spec("(0,0,0,0,0,0)");
    let p = harmonic_subspaces(&cohomology(&torus), &witness(&torus)).unwrap();
    let report = yamada_check(&torus, &p, 6);
    assert_eq!(report.inequality, None);
    assert!(report.passed());
}

fn profile_invariants(h: &CohomologySpace, s: &SymplecticForm) {
    let p = harmonic_subspaces(h, s).unwrap();
    for k in 0..=6 {
        assert!(p.h[k] <= h.betti(k));
    }
    for k in 0..=2 {
        assert_eq!(p.h[k], h.betti(k));
    }
    for k in 0..=3 {
        assert!(p.h[3 - k] >= p.h[3 + k]);
    }
    assert_eq!(h3_via_kernel(h, s).unwrap(), p.h[3]);
    // primitive classes are harmonic
    for k in 0..=3 {
        let prim = primitive(h, s, k).unwrap();
        let harm = &p.subspaces[3 - k];
        let dim = h.betti(3 - k);
        let mut both = harm.clone();
        both.extend(prim.basis.iter().cloned());
        assert_eq!(nilharm::linalg::rational::span_dimension(&both, dim), harm.len(), "P ⊆ H_hr in degree {}", 3 - k);
    }
}

#[test]
fn invariants_class_and_scale_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in [WORKED, "(0,0,12,13,23,14-25)", "(0,0,0,12,13,14+23)", "(0,0,0,0,12,14+25)", "(0,0,12,13,14,15)"] {
        let g = spec(s);
        let h = cohomology(&g);
        let cone = symplectic_cone(&h).unwrap();
        let ev = ClassEvaluator::new(&h, &cone);
        let mut done = 0;
        while done < 4 {
            let x: Vec<i64> = (0..h.betti(2)).map(|_| rng.gen_range(-2..=2)).collect();
            let mut coords: Vec<Scalar> = x.iter().map(|&v| int(v)).collect();
            coords.resize(cone.dim(), Scalar::zero());
            let Ok(sf) = SymplecticForm::new(&g, cone.form_at(&coords).unwrap()) else {
                assert!(ev.evaluate(&x).is_none());
                continue;
            };
            done += 1;
            profile_invariants(&h, &sf);
            let base = harmonic_subspaces(&h, &sf).unwrap();
            assert_eq!(ev.evaluate(&x), Some(base.h.clone()), "{s} {x:?}");
            let shifted = SymplecticForm::new(&g, &sf.omega().clone() + &random_exact_shift(&g, &mut rng)).unwrap();
            let p2 = harmonic_subspaces(&h, &shifted).unwrap();
            assert_eq!(p2.subspaces, base.subspaces);
            assert_eq!(p2.omega_class, base.omega_class);
            let scaled = SymplecticForm::new(&g, sf.omega().scale(&frac(-7, 3))).unwrap();
            assert_eq!(harmonic_subspaces(&h, &scaled).unwrap().subspaces, base.subspaces);
        }
    }
}

/// `L^k` maps invariant harmonic `(m-k)`-forms onto invariant harmonic `(m+k)`-forms.
#[test]
fn lefschetz_iso_on_harmonic_forms() {
    let g = spec(WORKED);
    let s = SymplecticForm::new(&g, worked_form(1, 1, 0, 1, 1)).unwrap();
    for k in 0..=3 {
        let src = harmonic_forms(&s, 3 - k);
        let tgt = harmonic_forms(&s, 3 + k);
        let wk = s.omega().power(k);
        let imgs: Vec<Vec<Scalar>> = src
            .iter()
            .map(|v| Form::from_vector(6, 3 - k, v).wedge(&wk).unwrap().to_vector())
            .collect();
        let dim = basis(6).dim(3 + k);
        let span = |v: &[Vec<Scalar>]| nilharm::linalg::rational::span_dimension(v, dim);
        assert_eq!(span(&imgs), src.len(), "injective for k={k}");
        let mut both = imgs.clone();
        both.extend(tgt.iter().cloned());
        assert_eq!(span(&imgs), tgt.len());
        assert_eq!(span(&both), tgt.len());
    }
}

#[test]
fn kernel_shortcut_needs_dimension_six() {
    let g = spec("(0,0,0,12)");
    let h = cohomology(&g);
    let s = SymplecticForm::new(&g, Form::parse(4, "a14 + a23").unwrap()).unwrap();
    assert!(h3_via_kernel(&h, &s).is_err());
    assert_eq!(harmonic_subspaces(&h, &s).unwrap().h.len(), 5);
}
