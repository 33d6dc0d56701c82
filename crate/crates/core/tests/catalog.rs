use nilharm::catalog::*;
use nilharm::cohomology::cohomology;
use nilharm::exec::Exec;
use nilharm::flexibility::Budget;
use nilharm::liespec::lower_central_series;
use nilharm::symplectic::symplectic_cone;
use nilharm::ParseError;

const FLEXIBLE: [&str; 10] = [
    "(0,0,12,13,23,14-25)",
    "(0,0,12,13,14+23,24+15)",
    "(0,0,0,12,14,15+23+24)",
    "(0,0,0,12,13+14,24)",
    "(0,0,0,12,13,14+23)",
    "(0,0,0,12,13,24)",
    "(0,0,0,12,13,14)",
    "(0,0,0,12,13,23)",
    "(0,0,0,0,12,14+25)",
    "(0,0,0,0,12,13)",
];

fn entry(s: &str) -> CatalogEntry {
    load_catalog().into_iter().find(|e| e.structure == s).unwrap()
}

#[test]
fn catalog_shape() {
    let c = load_catalog();
    assert_eq!(c.len(), 34);
    assert_eq!(c.iter().filter(|e| !e.symplectic()).count(), 8);
    let mut flex: Vec<&str> = c.iter().filter(|e| e.expected_flexible).map(|e| e.structure.as_str()).collect();
    flex.sort_unstable();
    let mut want = FLEXIBLE.to_vec();
    want.sort_unstable();
    assert_eq!(flex, want);
    assert_eq!(c[0].structure, "(0,0,12,13,14+23,34+52)");
    assert_eq!((c[0].b1, c[0].b2, c[0].symplectic()), (2, 2, false));
    let t = entry("(0,0,0,0,0,0)");
    assert_eq!((t.expected_h3.clone(), t.expected_h4.clone(), t.expected_h5.clone()), (Some(vec![20]), Some(vec![15]), Some(vec![6])));
    assert_eq!(t.expected_moduli_dim, Some(15));
    let keys: Vec<_> = c.iter().map(|e| (e.b1, e.b2, e.six_minus_s)).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    for (i, e) in c.iter().enumerate() {
        assert_eq!(e.index, i + 1);
        assert_eq!(e.symplectic(), e.expected_moduli_dim.is_some());
        assert!(!e.expected_flexible || e.symplectic());
    }
}

#[test]
fn structure_columns_recompute() {
    for e in load_catalog() {
        let h = cohomology(&e.spec());
        assert_eq!((h.betti(1), h.betti(2)), (e.b1, e.b2), "{}", e.structure);
        assert_eq!(h.betti(3), 2 * (e.b2 + 1 - e.b1), "{}", e.structure);
        assert_eq!(6 - lower_central_series(&e.spec()).step_length, e.six_minus_s, "{}", e.structure);
    }
}

#[test]
fn non_symplectic_rows_have_identically_zero_pfaffian() {
    for e in load_catalog() {
        let cone = symplectic_cone(&cohomology(&e.spec())).unwrap();
        assert_eq!(cone.pfaffian.is_zero(), !e.symplectic(), "{}", e.structure);
    }
}

#[test]
fn moduli_column_relation() {
    // dim S = b2 + 6 - b1 holds on every symplectic row but one, whose listed
    // value disagrees with its own b1 and b2.
    let off: Vec<String> = load_catalog()
        .into_iter()
        .filter(|e| e.symplectic() && e.expected_moduli_dim != Some(e.b2 + 6 - e.b1))
        .map(|e| e.structure)
        .collect();
    assert_eq!(off, vec!["(0,0,0,12,13,23)".to_string()]);
}

#[test]
fn step_two_rows_list_top_formula() {
    for e in load_catalog().into_iter().filter(|e| e.symplectic()) {
        if lower_central_series(&e.spec()).step_length == 2 {
            assert_eq!(e.expected_h5, Some(vec![2 * (e.b1 - 3)]), "{}", e.structure);
        }
    }
}

#[test]
fn verify_entry_examples() {
    let r = verify_entry(&entry("(0,0,0,0,12,15)"), Budget::default(), 0);
    assert_eq!(r.status, Status::Pass, "{:?}", r.columns);
    let c = &r.computed;
    assert_eq!((c.b1, c.b2, c.moduli_dim, c.flexible), (4, 7, Some(9), Some(false)));
    assert_eq!((c.h3.clone(), c.h4.clone(), c.h5.clone()), (Some(vec![6]), Some(vec![3]), Some(vec![2])));

    let r = verify_entry(&entry("(0,0,0,12,13,23)"), Budget::default(), 0);
    for col in ["h3", "h4", "h5", "flexible", "cross-checks"] {
        assert_eq!(r.column(col).unwrap().status, Status::Pass, "{col}");
    }
    assert_eq!(r.computed.h3, Some(vec![9, 10]));
    assert_eq!(r.computed.h4, Some(vec![7, 8]));
    assert!(r.certificate.is_some());
    let dim = r.column("dim S").unwrap();
    assert_eq!((dim.computed.as_str(), dim.status), ("11", Status::Fail));

    let r = verify_entry(&entry("(0,0,0,12,14,24)"), Budget::default(), 0);
    assert_eq!(r.status, Status::Pass);
    assert!(!r.computed.symplectic);
    for col in ["h3", "h4", "h5"] {
        assert_eq!(r.column(col).unwrap().computed, "-");
    }
}

#[test]
fn zero_budget_sweep() {
    let r = sweep(Budget::zero(), 0);
    assert_eq!(r.summary.total, 34);
    for e in &r.entries {
        for col in ["b1", "b2", "b3", "6-s", "symplectic"] {
            assert_eq!(e.column(col).unwrap().status, Status::Pass, "{} {col}", e.structure);
        }
        let dim = e.column("dim S").unwrap().status;
        assert_eq!(dim == Status::Pass, e.structure != "(0,0,0,12,13,23)", "{}", e.structure);
        if e.computed.symplectic {
            for col in ["h3", "h4", "h5", "flexible"] {
                let c = e.column(col).unwrap();
                assert_eq!(c.status, Status::InsufficientBudget, "{} {col}", e.structure);
                assert_eq!(c.computed, "insufficient budget");
            }
        }
    }
    assert_eq!(r.summary.insufficient_budget, 25);
    assert!(r.render_table().contains("insufficient budget"));
}

#[test]
fn low_budget_degrades_instead_of_failing() {
    let r = verify_entry(&entry("(0,0,12,13,23,14-25)"), Budget::new(1, 1, 0), 0);
    let h4 = r.column("h4").unwrap();
    assert_eq!(h4.status, Status::InsufficientBudget, "{h4:?}");
    assert_ne!(r.status, Status::Fail);
}

#[test]
fn outcome_does_not_depend_on_seed_or_execution() {
    for s in ["(0,0,12,13,23,14-25)", "(0,0,0,12,14,15+23+24)", "(0,0,0,0,12,15)"] {
        let e = entry(s);
        let a = verify_entry_with(&e, Budget::default(), 0, Exec::Parallel);
        let b = verify_entry_with(&e, Budget::default(), 7, Exec::Parallel);
        let statuses = |r: &EntryReport| r.columns.iter().map(|c| c.status).collect::<Vec<_>>();
        assert_eq!(statuses(&a), statuses(&b));
        assert_eq!(a.computed, b.computed);
        let c = verify_entry_with(&e, Budget::default(), 0, Exec::Sequential);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    }
}

#[test]
fn report_json_round_trips() {
    let r = sweep(Budget::new(1, 1, 20), 0);
    let json = serde_json::to_string_pretty(&r).unwrap();
    let back: VerificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
    assert!(r.render_table().contains("rows verified"));
}

#[test]
fn malformed_catalog_lines() {
    let bad = [
        "(0,0,12) | 1 | 2",
        "(0,0,0,0,0,0) | 6 | 15 | 5 | | 20 | 15 | 6 | 15 | maybe",
        "(0,0,0,0,0,0) | x | 15 | 5 | | 20 | 15 | 6 | 15 | no",
        "(0,0,0,0,0,7) | 6 | 15 | 5 | | 20 | 15 | 6 | 15 | no",
    ];
    for text in bad {
        assert!(matches!(parse_catalog(text), Err(ParseError::Catalog { line: 1, .. })), "{text}");
    }
    let ok = parse_catalog("# comment\n\n(0,0,0,0,0,0) | 6 | 15 | 5 | | 20 | 15 | 6 | 15 | no").unwrap();
    assert_eq!(ok.len(), 1);
    assert_eq!(ok[0].direct_sum, None);
}
