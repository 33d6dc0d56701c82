use nilharm::exterior::Form;
use nilharm::flexibility::{sample_cone, SampleStrategy};
use nilharm::liespec::LieAlgebraSpec;
use nilharm::properties::operator_suite;
use nilharm::symplectic::SymplecticForm;

const NAMES: [&str; 11] = [
    "star_involution",
    "anchors_dimension_two",
    "product_rule_2_4",
    "sl2_lstar_l",
    "sl2_a_l",
    "sl2_a_lstar",
    "lefschetz_iso",
    "delta_squared",
    "lstar_is_contraction",
    "delta_is_bracket",
    "harmonic_iso",
];

#[test]
fn suite_passes_on_worked_example() {
    let spec = LieAlgebraSpec::parse("(0,0,0,12,14,15+23+24)").unwrap();
    let s = SymplecticForm::new(&spec, Form::parse(6, "a16 + a25 - a34 + a26 - a45").unwrap()).unwrap();
    let r = operator_suite(&s, 3);
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, NAMES);
    assert!(r.passed(), "{:?}", r.checks);
    assert!(r.checks.iter().all(|c| c.detail.is_empty()));
}

#[test]
fn suite_passes_on_seeded_samples() {
    for (i, structure) in ["(0,0,0,0,0,0)", "(0,0,0,0,12,13)", "(0,0,12,13,23,14-25)"].iter().enumerate() {
        let spec = LieAlgebraSpec::parse(structure).unwrap();
        for s in sample_cone(&spec, SampleStrategy::Random { seed: i as u64, count: 2 }).unwrap() {
            let r = operator_suite(&s, i as u64);
            assert!(r.passed(), "{structure} {}: {:?}", s.omega().render(), r.checks);
        }
    }
}

#[test]
fn suite_is_deterministic_and_serializes() {
    let s = SymplecticForm::on_vector_space(Form::parse(4, "a12 + 2*a34").unwrap()).unwrap();
    let a = operator_suite(&s, 11);
    assert_eq!(a, operator_suite(&s, 11));
    let json = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<nilharm::properties::OperatorSuite>(&json).unwrap(), a);
}
