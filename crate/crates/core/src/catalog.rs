//! The 34 six-dimensional nilpotent Lie algebras with their expected
//! invariants, and batch verification against recomputed values.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cohomology::cohomology;
use crate::error::ParseError;
use crate::exec::Exec;
use crate::flexibility::{find_certificate, value_sets_in, varying_degrees, Budget, Cone, FlexibilityCertificate, StructureChecks};
use crate::harmonic::{chain_level_h, h3_via_kernel, yamada_check_h, YamadaReport};
use crate::liespec::{lower_central_series, LieAlgebraSpec};
use crate::symplectic::{symplectic_existence_in, Existence};

const CATALOG: &str = include_str!("../data/catalog.txt");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// 1-based row number.
    pub index: usize,
    pub structure: String,
    pub b1: usize,
    pub b2: usize,
    pub six_minus_s: usize,
    /// Dimensions of irreducible summands, e.g. `1+5`. Informational.
    pub direct_sum: Option<String>,
    /// `None` for algebras without symplectic forms.
    pub expected_h3: Option<Vec<usize>>,
    pub expected_h4: Option<Vec<usize>>,
    pub expected_h5: Option<Vec<usize>>,
    pub expected_moduli_dim: Option<usize>,
    pub expected_flexible: bool,
}

impl CatalogEntry {
    pub fn spec(&self) -> LieAlgebraSpec {
        LieAlgebraSpec::parse(&self.structure).expect("catalog structures parse")
    }

    pub fn symplectic(&self) -> bool {
        self.expected_h3.is_some()
    }

    pub fn expected(&self, k: usize) -> Option<&[usize]> {
        match k {
            3 => self.expected_h3.as_deref(),
            4 => self.expected_h4.as_deref(),
            5 => self.expected_h5.as_deref(),
            _ => None,
        }
    }
}

fn is_none_marker(s: &str) -> bool {
    matches!(s, "-" | "—" | "none")
}

/// Parses catalog text: `#` comments, one `|`-separated row per line.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| ParseError::Catalog { line, msg };
        let cols: Vec<&str> = content.split('|').map(str::trim).collect();
        if cols.len() != 10 {
            return Err(err(format!("expected 10 columns, found {}", cols.len())));
        }
        LieAlgebraSpec::parse(cols[0]).map_err(|e| err(e.to_string()))?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("`{s}` is not a number")));
        let set = |s: &str| -> Result<Option<Vec<usize>>, ParseError> {
            if is_none_marker(s) {
                return Ok(None);
            }
            let mut v = s.split(',').map(|x| num(x.trim())).collect::<Result<Vec<_>, _>>()?;
            v.sort_unstable();
            v.dedup();
            Ok(Some(v))
        };
        let flexible = match cols[9] {
            "yes" => true,
            "no" => false,
            other => return Err(err(format!("flexible column `{other}` is not yes/no"))),
        };
        out.push(CatalogEntry {
            index: out.len() + 1,
            structure: cols[0].to_string(),
            b1: num(cols[1])?,
            b2: num(cols[2])?,
            six_minus_s: num(cols[3])?,
            direct_sum: (!cols[4].is_empty()).then(|| cols[4].to_string()),
            expected_h3: set(cols[5])?,
            expected_h4: set(cols[6])?,
            expected_h5: set(cols[7])?,
            expected_moduli_dim: if is_none_marker(cols[8]) { None } else { Some(num(cols[8])?) },
            expected_flexible: flexible,
        });
    }
    Ok(out)
}

/// The checked-in catalog, in table order.
pub fn load_catalog() -> Vec<CatalogEntry> {
    parse_catalog(CATALOG).expect("embedded catalog is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    InsufficientBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnCheck {
    pub column: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Computed {
    pub b1: usize,
    pub b2: usize,
    pub b3: usize,
    pub six_minus_s: usize,
    pub symplectic: bool,
    pub moduli_dim: Option<usize>,
    pub h3: Option<Vec<usize>>,
    pub h4: Option<Vec<usize>>,
    pub h5: Option<Vec<usize>>,
    pub flexible: Option<bool>,
}

/// Cross-checks at the attained profiles and over all evaluated samples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossChecks {
    /// Low-degree equality, `h_{m-k} ≥ h_{m+k}`, `h_3 = h_5 + dim ker L` and
    /// Yamada over every sample.
    pub samples: Option<StructureChecks>,
    /// Yamada relations at the first profile.
    pub yamada: Option<YamadaReport>,
    /// `h_3` from `dim ker(L: H³ → H⁵)` agrees at every profile witness.
    pub kernel_lemma: Option<bool>,
    /// Invariant harmonic forms give the same `h_k` at every profile witness.
    pub chain_level: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub index: usize,
    pub structure: String,
    pub computed: Computed,
    pub columns: Vec<ColumnCheck>,
    pub status: Status,
    /// `(h_0, …, h_6)` profile witnesses over the `Z²` basis.
    pub witnesses: Vec<(Vec<usize>, Vec<i64>)>,
    pub certificate: Option<FlexibilityCertificate>,
    pub cross_checks: CrossChecks,
    #[serde(skip)]
    pub timing: Duration,
}

impl EntryReport {
    pub fn column(&self, name: &str) -> Option<&ColumnCheck> {
        self.columns.iter().find(|c| c.column == name)
    }
}

fn render_set(v: Option<&[usize]>) -> String {
    match v {
        None => "-".into(),
        Some(v) => v.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    }
}

fn exact(column: &str, expected: String, computed: String) -> ColumnCheck {
    let status = if expected == computed { Status::Pass } else { Status::Fail };
    ColumnCheck { column: column.into(), expected, computed, status }
}

/// Recomputes every column of `entry` and the cross-checks. Value sets that
/// fall short of the table under a reduced budget are marked
/// [`Status::InsufficientBudget`] instead of failing.
pub fn verify_entry_with(entry: &CatalogEntry, budget: Budget, seed: u64, exec: Exec) -> EntryReport {
    let start = Instant::now();
    let spec = entry.spec();
    let h = cohomology(&spec);
    let lcs = lower_central_series(&spec);
    let mut c = Computed {
        b1: h.betti(1),
        b2: h.betti(2),
        b3: h.betti(3),
        six_minus_s: 6 - lcs.step_length.min(6),
        ..Computed::default()
    };
    let mut columns = vec![
        exact("b1", entry.b1.to_string(), c.b1.to_string()),
        exact("b2", entry.b2.to_string(), c.b2.to_string()),
        exact("b3", (2 * (entry.b2 + 1 - entry.b1)).to_string(), c.b3.to_string()),
        exact("6-s", entry.six_minus_s.to_string(), c.six_minus_s.to_string()),
    ];
    let (cone_desc, decision) = symplectic_existence_in(&h).expect("six-dimensional algebra");
    c.symplectic = decision.is_yes();
    columns.push(exact("symplectic", entry.symplectic().to_string(), c.symplectic.to_string()));
    c.moduli_dim = c.symplectic.then(|| cone_desc.dim());
    columns.push(exact(
        "dim S",
        entry.expected_moduli_dim.map_or("-".into(), |v| v.to_string()),
        c.moduli_dim.map_or("-".into(), |v| v.to_string()),
    ));
    let mut witnesses = Vec::new();
    let mut certificate = None;
    let mut cross = CrossChecks::default();
    if let Existence::Yes(_) = decision {
        let cone = Cone::new(&spec).expect("symplectic");
        let report = value_sets_in(&cone, budget, seed, exec);
        let short = budget.is_empty() || report.profiles.is_empty();
        let mut any_short = short;
        for k in 3..=5 {
            let computed = (!short).then(|| report.values(k));
            let expected = entry.expected(k);
            let status = match (&computed, expected) {
                (None, _) => Status::InsufficientBudget,
                (Some(got), Some(want)) if got.as_slice() == want => Status::Pass,
                (Some(got), Some(want)) if budget.below_default() && got.iter().all(|v| want.contains(v)) => {
                    any_short = true;
                    Status::InsufficientBudget
                }
                _ => Status::Fail,
            };
            columns.push(ColumnCheck {
                column: format!("h{k}"),
                expected: render_set(expected),
                computed: computed.as_ref().map_or("insufficient budget".into(), |v| render_set(Some(v))),
                status,
            });
            match k {
                3 => c.h3 = computed,
                4 => c.h4 = computed,
                _ => c.h5 = computed,
            }
        }
        if !short {
            witnesses = report.profiles.iter().map(|p| (p.h.clone(), p.witness.clone())).collect();
            let varies = !varying_degrees(&report).is_empty();
            certificate = if varies { find_certificate(&cone, &report) } else { None };
            let flexible = certificate.is_some();
            c.flexible = Some(flexible);
            let status = if flexible == entry.expected_flexible {
                Status::Pass
            } else if any_short && !flexible {
                Status::InsufficientBudget
            } else {
                Status::Fail
            };
            columns.push(ColumnCheck {
                column: "flexible".into(),
                expected: entry.expected_flexible.to_string(),
                computed: flexible.to_string(),
                status,
            });
            cross = cross_checks(&cone, &report.profiles, report.checks.clone());
            let cross_ok = cross.samples.as_ref().is_some_and(StructureChecks::passed)
                && cross.yamada.as_ref().is_none_or(YamadaReport::passed)
                && cross.kernel_lemma != Some(false)
                && cross.chain_level != Some(false);
            columns.push(ColumnCheck {
                column: "cross-checks".into(),
                expected: "consistent".into(),
                computed: if cross_ok { "consistent" } else { "violated" }.into(),
                status: if cross_ok { Status::Pass } else { Status::Fail },
            });
        } else {
            columns.push(ColumnCheck {
                column: "flexible".into(),
                expected: entry.expected_flexible.to_string(),
                computed: "insufficient budget".into(),
                status: Status::InsufficientBudget,
            });
        }
    } else {
        for k in 3..=5 {
            columns.push(exact(&format!("h{k}"), render_set(entry.expected(k)), "-".into()));
        }
        columns.push(ColumnCheck {
            column: "flexible".into(),
            expected: entry.expected_flexible.to_string(),
            computed: "false".into(),
            status: if entry.expected_flexible { Status::Fail } else { Status::Pass },
        });
    }
    let status = if columns.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if columns.iter().any(|c| c.status == Status::InsufficientBudget) {
        Status::InsufficientBudget
    } else {
        Status::Pass
    };
    EntryReport {
        index: entry.index,
        structure: entry.structure.clone(),
        computed: c,
        columns,
        status,
        witnesses,
        certificate,
        cross_checks: cross,
        timing: start.elapsed(),
    }
}

pub fn verify_entry(entry: &CatalogEntry, budget: Budget, seed: u64) -> EntryReport {
    verify_entry_with(entry, budget, seed, Exec::default())
}

fn cross_checks(cone: &Cone, profiles: &[crate::flexibility::ProfileRecord], samples: StructureChecks) -> CrossChecks {
    let mut kernel_ok = true;
    let mut chain_ok = true;
    for p in profiles {
        let coords: Vec<_> = p.witness.iter().map(|&v| crate::scalar::int(v)).collect();
        let sf = cone.symplectic_form(&coords).expect("witness is symplectic");
        kernel_ok &= h3_via_kernel(&cone.cohomology, &sf).ok() == Some(p.h[3]);
        chain_ok &= (0..p.h.len()).all(|k| chain_level_h(&sf, k).ok() == Some(p.h[k]));
    }
    let spec = &cone.spec;
    let yamada = profiles
        .first()
        .filter(|_| lower_central_series(spec).step_length >= 2)
        .map(|p| yamada_check_h(spec, &p.h, cone.cohomology.betti(1)));
    CrossChecks {
        samples: Some(samples),
        yamada,
        kernel_lemma: (!profiles.is_empty()).then_some(kernel_ok),
        chain_level: (!profiles.is_empty()).then_some(chain_ok),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub insufficient_budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub budget: Budget,
    pub seed: u64,
    pub entries: Vec<EntryReport>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    /// Text table in the catalog's column order.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>2} {:>2} {:>3}  {:<26} {:<8} {:<7} {:<7} {:<5} {:>3}  {:<5} {:<19} {:>8}",
            "b1", "b2", "6-s", "structure", "sum", "h3", "h4", "h5", "S", "flex", "status", "ms"
        );
        for e in &self.entries {
            let c = &e.computed;
            let set = |v: &Option<Vec<usize>>| match v {
                Some(v) => render_set(Some(v)),
                None if c.symplectic => "?".into(),
                None => "-".into(),
            };
            let status = match e.status {
                Status::Pass => "ok".to_string(),
                Status::Fail => {
                    let bad: Vec<&str> = e.columns.iter().filter(|c| c.status == Status::Fail).map(|c| c.column.as_str()).collect();
                    format!("FAIL {}", bad.join(","))
                }
                Status::InsufficientBudget => "insufficient budget".into(),
            };
            let entry = load_catalog().into_iter().find(|x| x.index == e.index);
            let sum = entry.and_then(|x| x.direct_sum).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:>2} {:>2} {:>3}  {:<26} {:<8} {:<7} {:<7} {:<5} {:>3}  {:<5} {:<19} {:>8}",
                c.b1,
                c.b2,
                c.six_minus_s,
                e.structure,
                sum,
                set(&c.h3),
                set(&c.h4),
                set(&c.h5),
                c.moduli_dim.map_or("-".into(), |v| v.to_string()),
                match c.flexible {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None if c.symplectic => "?",
                    None => "no",
                },
                status,
                e.timing.as_millis(),
            );
        }
        let s = &self.summary;
        let _ = writeln!(out, "{}/{} rows verified", s.passed, s.total);
        if s.insufficient_budget > 0 {
            let _ = writeln!(out, "{} rows with insufficient budget", s.insufficient_budget);
        }
        out
    }
}

/// Verifies every catalog row; results are ordered by row.
pub fn sweep_with(budget: Budget, seed: u64, exec: Exec) -> VerificationReport {
    let entries = exec.map(&load_catalog(), |e| verify_entry_with(e, budget, seed, exec));
    let count = |s: Status| entries.iter().filter(|e| e.status == s).count();
    let summary = Summary {
        total: entries.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        insufficient_budget: count(Status::InsufficientBudget),
    };
    VerificationReport { budget, seed, entries, summary }
}

pub fn sweep(budget: Budget, seed: u64) -> VerificationReport {
    sweep_with(budget, seed, Exec::default())
}
