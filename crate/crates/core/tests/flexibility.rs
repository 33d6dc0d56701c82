use nilharm::cohomology::cohomology;
use nilharm::exec::Exec;
use nilharm::exterior::Form;
use nilharm::flexibility::*;
use nilharm::harmonic::harmonic_subspaces;
use nilharm::liespec::LieAlgebraSpec;
use nilharm::linalg::Matrix;
use nilharm::scalar::{frac, int, Scalar};
use nilharm::symplectic::pfaffian_coeff;
use nilharm::Error;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORKED: &str = "(0,0,0,12,14,15+23+24)";

fn spec(s: &str) -> LieAlgebraSpec {
    LieAlgebraSpec::parse(s).unwrap()
}

fn f(s: &str) -> Form {
    Form::parse(6, s).unwrap()
}

/// `A[α13] + B[α15] + C[α23] + D[α16+α25-α34] + E[α26-α45]` in cone coordinates.
fn worked_coords(cone: &Cone, v: [i64; 5]) -> Vec<Scalar> {
    let parts = ["a13", "a15", "a23", "a16 + a25 - a34", "a26 - a45"];
    let mut w = Form::zero(6, 2);
    for (p, c) in parts.iter().zip(v) {
        w = &w + &f(p).scale(&int(c));
    }
    cone.description.coords_of(&w).unwrap()
}

fn quick() -> Budget {
    Budget::new(1, 2, 200)
}

#[test]
fn torus_grid_contains_standard_form() {
    let forms: Vec<Form> = sample_cone(&spec("(0,0,0,0,0,0)"), SampleStrategy::Grid { bound: 1, support: 3 })
        .unwrap()
        .map(|s| s.omega().clone())
        .collect();
    assert!(forms.contains(&f("a12 + a34 + a56")));
}

#[test]
fn sample_cone_requires_symplectic_algebra() {
    let r = sample_cone(&spec("(0,0,0,0,0,12+34)"), SampleStrategy::Random { seed: 0, count: 10 });
    assert!(matches!(r, Err(Error::NotSymplectic)));
}

#[test]
fn sampled_forms_are_closed_and_nondegenerate() {
    for strategy in [SampleStrategy::Grid { bound: 1, support: 2 }, SampleStrategy::Random { seed: 3, count: 40 }] {
        let g = spec(WORKED);
        let mut count = 0;
        for s in sample_cone(&g, strategy).unwrap() {
            assert!(g.d(s.omega()).is_zero());
            assert!(!pfaffian_coeff(s.omega()).unwrap().is_zero());
            count += 1;
        }
        assert!(count > 0);
    }
}

#[test]
fn sampling_is_deterministic() {
    let run = |seed| -> Vec<Form> {
        sample_cone(&spec(WORKED), SampleStrategy::Random { seed, count: 30 }).unwrap().map(|s| s.omega().clone()).collect()
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
}

#[test]
fn value_set_examples() {
    let r = value_sets(&spec("(0,0,12,13,23,14-25)"), Budget::default(), 0).unwrap();
    assert_eq!((r.values(3), r.values(4), r.values(5)), (vec![4], vec![2, 3, 4], vec![0]));
    let r = value_sets(&spec("(0,0,0,12,13,14+23)"), Budget::default(), 0).unwrap();
    assert_eq!(r.values(3), vec![5, 6, 7]);
    let r = value_sets(&spec("(0,0,0,0,0,0)"), quick(), 0).unwrap();
    assert_eq!((r.values(3), r.values(4), r.values(5)), (vec![20], vec![15], vec![6]));
}

#[test]
fn witnesses_reproduce_their_profiles() {
    for s in [WORKED, "(0,0,12,13,23,14-25)", "(0,0,0,12,13+14,24)"] {
        let g = spec(s);
        let h = cohomology(&g);
        let cone = Cone::new(&g).unwrap();
        let r = value_sets_in(&cone, Budget::default(), 1, Exec::default());
        assert!(r.checks.passed(), "{:?}", r.checks);
        for p in &r.profiles {
            let coords: Vec<Scalar> = p.witness.iter().map(|&v| int(v)).collect();
            let sf = cone.symplectic_form(&coords).unwrap();
            assert_eq!(harmonic_subspaces(&h, &sf).unwrap().h, p.h, "{s}");
        }
        for set in &r.sets {
            for a in &set.attained {
                let p = r.profiles.iter().find(|p| p.witness == a.witness).unwrap();
                assert_eq!(p.h[set.k], a.value);
            }
        }
    }
}

#[test]
fn reports_are_deterministic_across_execution_modes() {
    let cone = Cone::new(&spec(WORKED)).unwrap();
    let budget = Budget::new(2, 3, 500);
    let a = value_sets_in(&cone, budget, 9, Exec::Parallel);
    let b = value_sets_in(&cone, budget, 9, Exec::Sequential);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = value_sets_in(&cone, budget, 9, Exec::Parallel);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    let other_seed = value_sets_in(&cone, budget, 10, Exec::Parallel);
    for k in 3..=5 {
        assert_eq!(a.values(k), other_seed.values(k));
    }
}

#[test]
fn zero_budget_attains_nothing() {
    let r = value_sets(&spec(WORKED), Budget::zero(), 0).unwrap();
    assert!(r.profiles.is_empty());
    assert_eq!(r.grid_points + r.random_samples, 0);
}

#[test]
fn budget_syntax() {
    assert_eq!("default".parse::<Budget>().unwrap(), Budget::default());
    assert_eq!("zero".parse::<Budget>().unwrap(), Budget::zero());
    assert_eq!("2,5,100".parse::<Budget>().unwrap(), Budget::new(2, 5, 100));
    let d = Budget::default();
    assert_eq!(d.to_string().parse::<Budget>().unwrap(), d);
    for bad in ["", "1,2", "1,2,3,4", "-1,2,3", "a,b,c"] {
        assert!(bad.parse::<Budget>().is_err(), "{bad}");
    }
    assert!(Budget::new(2, 5, 10_000).below_default());
    assert!(!d.below_default());
}

fn rank_of(d: &Matrix, m: &Matrix) -> usize {
    (d * m).rank()
}

#[test]
fn rank_perturbation_examples() {
    let id = Matrix::identity(2);
    let zero = Matrix::zeros(2, 2);
    assert_eq!(rank_perturbation(&id, &zero, &id, 1).unwrap(), frac(1, 2));
    let a = Matrix::from_i64(2, 2, &[1, 0, 0, 0]);
    let b = Matrix::from_i64(2, 2, &[0, 0, 0, 1]);
    let l = rank_perturbation(&id, &a, &b, 1).unwrap();
    assert_eq!(rank_of(&id, &a.add(&b.scale(&l))), 2);
    assert!(matches!(rank_perturbation(&id, &id, &zero, 1), Err(Error::Precondition(_))));
}

#[test]
fn rank_perturbation_on_worked_example() {
    let g = spec(WORKED);
    let h = cohomology(&g);
    let cone = Cone::new(&g).unwrap();
    let lmat = |v| h.cup_matrix(&cone.description.form_at(&worked_coords(&cone, v)).unwrap(), 3, 1).unwrap().matrix;
    let (a, b) = (lmat([0, 0, 0, 1, 0]), lmat([1, 0, 0, 0, 1]));
    let d = Matrix::identity(3);
    assert_eq!(6 - a.rank(), 4);
    assert_eq!(6 - b.rank(), 3);
    let l = rank_perturbation(&d, &a, &b, 1).unwrap();
    assert_eq!(6 - a.add(&b.scale(&l)).rank(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn rank_perturbation_meets_postcondition(
        a in proptest::collection::vec(-2i64..=2, 9),
        b in proptest::collection::vec(-2i64..=2, 9),
        dm in proptest::collection::vec(-1i64..=1, 6),
        k in 1u32..=2,
    ) {
        let (a, b, d) = (Matrix::from_i64(3, 3, &a), Matrix::from_i64(3, 3, &b), Matrix::from_i64(2, 3, &dm));
        let base = rank_of(&d, &a.pow(k));
        match rank_perturbation(&d, &a, &b, k) {
            Ok(l) => prop_assert!(rank_of(&d, &a.add(&b.scale(&l)).pow(k)) > base),
            Err(Error::Precondition(_)) => prop_assert!(rank_of(&d, &b.pow(k)) <= base),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}

#[test]
fn torus_is_never_certified() {
    let g = spec("(0,0,0,0,0,0)");
    let cone = Cone::new(&g).unwrap();
    let w0 = cone.description.coords_of(&f("a12 + a34 + a56")).unwrap();
    let w1 = cone.description.coords_of(&f("a14 + a25 + a36")).unwrap();
    for k in 0..=6 {
        assert!(matches!(certify_flexible(&g, k, &w0, &w1), Err(Error::Precondition(_))));
    }
}

fn random_t(rng: &mut ChaCha8Rng) -> Scalar {
    let q = rng.gen_range(1..=97);
    frac(rng.gen_range(0..=q), q)
}

#[test]
fn worked_example_certificate() {
    let g = spec(WORKED);
    let cone = Cone::new(&g).unwrap();
    let w0 = worked_coords(&cone, [0, 0, 0, 1, 0]);
    let w1 = worked_coords(&cone, [1, 0, 0, 0, 1]);
    let cert = certify_flexible(&g, 5, &w0, &w1).unwrap();
    let mut ends = [cert.h_at_0[5], cert.h_at_1[5]];
    ends.sort_unstable();
    assert_eq!(ends, [0, 2]);
    assert!(check_certificate(&cone, &cert).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let t = random_t(&mut rng);
        let omega = cone.description.form_at(&cert.point(&t).unwrap()).unwrap();
        assert!(!pfaffian_coeff(&omega).unwrap().is_zero(), "t = {t}");
        let h = cone.h_at(&cert.point(&t).unwrap()).unwrap();
        assert_eq!(&h[..=2], &cert.h_at_0[..=2]);
    }
    let json = serde_json::to_string(&cert).unwrap();
    let back: FlexibilityCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn tampered_certificates_are_rejected() {
    let g = spec(WORKED);
    let cone = Cone::new(&g).unwrap();
    let cert = certify_flexible(&g, 5, &worked_coords(&cone, [0, 0, 0, 1, 0]), &worked_coords(&cone, [1, 0, 0, 0, 1])).unwrap();
    let mut bad = cert.clone();
    bad.h_at_1 = bad.h_at_0.clone();
    assert!(!check_certificate(&cone, &bad).unwrap());
    let mut bad = cert.clone();
    bad.omega1[0] = "7".into();
    assert!(!check_certificate(&cone, &bad).unwrap());
    let mut bad = cert;
    bad.nonvanishing_proof.sign_changes_at_b += 1;
    assert!(!check_certificate(&cone, &bad).unwrap());
}

#[test]
fn segment_search_shrinks_past_degenerate_forms() {
    // The straight segment from E=0 to E≠0 below crosses pf = 0 before shrinking.
    let g = spec(WORKED);
    let cone = Cone::new(&g).unwrap();
    let w0 = worked_coords(&cone, [0, 0, 0, 1, 0]);
    let w1 = worked_coords(&cone, [0, 0, 0, -1, 1]);
    let p = cone.description.pfaffian.restrict_to_line(&w0, &w0.iter().zip(&w1).map(|(a, b)| b - a).collect::<Vec<_>>());
    assert!(!sturm_nonvanishing(&p, &Scalar::zero(), &int(1)).unwrap());
    let cert = certify_flexible(&g, 4, &w0, &w1).unwrap();
    assert!(check_certificate(&cone, &cert).unwrap());
}

#[test]
fn sturm_examples() {
    let p = |c: &[i64]| UnivariatePolynomial::new(c.iter().map(|&v| int(v)).collect());
    assert!(sturm_nonvanishing(&p(&[1, 0, 1]), &int(0), &int(1)).unwrap());
    let half = UnivariatePolynomial::new(vec![frac(-1, 2), int(1)]);
    assert!(!sturm_nonvanishing(&half, &int(0), &int(1)).unwrap());
    assert!(sturm_nonvanishing(&p(&[1, -3, 3]), &int(0), &int(1)).unwrap());
    assert!(matches!(sturm_nonvanishing(&p(&[]), &int(0), &int(1)), Err(Error::ZeroPolynomial)));
}

#[test]
fn flexible_rows_certify_from_value_sets() {
    for s in ["(0,0,12,13,23,14-25)", "(0,0,0,12,13,14)", "(0,0,0,0,12,14+25)"] {
        let cone = Cone::new(&spec(s)).unwrap();
        let r = value_sets_in(&cone, Budget::default(), 0, Exec::default());
        let cert = find_certificate(&cone, &r).unwrap_or_else(|| panic!("{s}"));
        assert!(check_certificate(&cone, &cert).unwrap());
    }
    let cone = Cone::new(&spec("(0,0,0,12,14,15)")).unwrap();
    let r = value_sets_in(&cone, Budget::default(), 0, Exec::default());
    assert!(varying_degrees(&r).is_empty());
    assert!(find_certificate(&cone, &r).is_none());
}

#[test]
fn genericity_examples() {
    let r = genericity_report(&spec(WORKED), Budget::default(), 0).unwrap();
    assert_eq!((r.h4_max, r.h5_max), (4, 2));
    assert!(!r.h5_constant);
    assert_eq!(r.h3_min, None);
    assert!(r.samples >= 1000);
    assert!(r.h4_fraction() >= 0.99 && r.h5_fraction() >= 0.99);
    assert!(!r.pencils.is_empty() && r.pencils.iter().all(PencilResult::finite));

    let r = genericity_report(&spec("(0,0,12,13,23,14-25)"), Budget::default(), 0).unwrap();
    assert_eq!(r.h4_max, 4);
    assert!(r.h4_fraction() >= 0.99);

    let r = genericity_report(&spec("(0,0,0,12,13,14+23)"), Budget::default(), 0).unwrap();
    assert!(r.h5_constant);
    assert_eq!(r.h3_min, Some(5));
    assert!(r.h3_fraction().unwrap() >= 0.99);
    assert!(r.pencils.iter().all(PencilResult::finite));
}
