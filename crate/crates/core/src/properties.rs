//! Exact operator identities at one symplectic point, as a report.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exterior::{basis, Form};
use crate::harmonic::harmonic_forms;
use crate::linalg::rational::span_dimension;
use crate::linalg::Matrix;
use crate::scalar::{int, Scalar};
use crate::symplectic::SymplecticForm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    /// First failing grade or input, empty on success.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSuite {
    pub omega: String,
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
}

impl OperatorSuite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, failure: Option<String>) -> PropertyCheck {
    PropertyCheck { name: name.into(), passed: failure.is_none(), detail: failure.unwrap_or_default() }
}

fn first_failure(range: impl IntoIterator<Item = usize>, ok: impl Fn(usize) -> bool) -> Option<String> {
    range.into_iter().find(|&k| !ok(k)).map(|k| format!("grade {k}"))
}

/// Copies a form on `R^k` into `R^n` with indices shifted by `offset`.
fn embed(a: &Form, n: usize, offset: usize) -> Form {
    let mut out = Form::zero(n, a.grade());
    for (mi, c) in a.terms() {
        let idx: Vec<usize> = mi.indices().map(|i| i + offset).collect();
        out = &out + &Form::basis_element(n, &idx).expect("index in range").scale(c);
    }
    out
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Form {
    let coords: Vec<Scalar> = (0..basis(n).dim(k)).map(|_| int(rng.gen_range(-3..=3))).collect();
    Form::from_vector(n, k, &coords)
}

fn random_nondegenerate(rng: &mut ChaCha8Rng, n: usize) -> SymplecticForm {
    loop {
        if let Ok(s) = SymplecticForm::on_vector_space(random_form(rng, n, 2)) {
            return s;
        }
    }
}

/// Runs the operator identities at `s`: `** = id`, the two-dimensional
/// anchors, the product rule on a `2 ⊕ 4` split, the sl(2) relations,
/// `L^k: Λ^{m-k} ≅ Λ^{m+k}`, `δ² = 0`, `L* = i(Π)` by two routes, and
/// `L^k` on invariant harmonic forms. Auxiliary forms come from `seed`.
pub fn operator_suite(s: &SymplecticForm, seed: u64) -> OperatorSuite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.n();
    let m = s.m();
    let dim = |k: usize| basis(n).dim(k);
    let op = |k: usize, t: usize, f: &dyn Fn(&Form) -> crate::Result<Form>| s.operator_matrix(k, t, f);
    let lef = |k: usize| op(k, k + 2, &|a| s.lefschetz(a));
    let lstar = |k: usize| op(k, k - 2, &|a| s.lefschetz_dual(a));
    let a_mat = |k: usize| Matrix::identity(dim(k)).scale(&int(m as i64 - k as i64));
    let mut checks = Vec::new();

    checks.push(check(
        "star_involution",
        first_failure(0..=n, |k| &s.star_matrices()[n - k] * &s.star_matrices()[k] == Matrix::identity(dim(k))),
    ));

    let c = int(rng.gen_range(1..=5)) * int(if rng.gen_bool(0.5) { 1 } else { -1 });
    let plane = SymplecticForm::on_vector_space(Form::parse(2, "a12").expect("form").scale(&c)).expect("nondegenerate");
    let one_form = random_form(&mut rng, 2, 1);
    let anchors = [
        plane.star(&one_form).ok() == Some(-&one_form),
        plane.star(plane.omega()).ok() == Some(Form::one(2)),
        plane.star(&Form::one(2)).ok() == Some(plane.omega().clone()),
    ];
    checks.push(check("anchors_dimension_two", anchors.iter().position(|ok| !ok).map(|i| format!("anchor {i}"))));

    let s1 = SymplecticForm::on_vector_space(Form::parse(2, "a12").expect("form")).expect("nondegenerate");
    let s2 = random_nondegenerate(&mut rng, 4);
    let split = SymplecticForm::on_vector_space(&embed(s1.omega(), 6, 0) + &embed(s2.omega(), 6, 2)).expect("sum of nondegenerate");
    let mut product = None;
    'outer: for k1 in 0..=2 {
        for k2 in 0..=4 {
            let a1 = random_form(&mut rng, 2, k1);
            let a2 = random_form(&mut rng, 4, k2);
            let lhs = split.star(&embed(&a1, 6, 0).wedge(&embed(&a2, 6, 2)).expect("grades fit")).expect("star");
            let rhs = embed(&s1.star(&a1).expect("star"), 6, 0).wedge(&embed(&s2.star(&a2).expect("star"), 6, 2)).expect("grades fit");
            let rhs = if (k1 * k2) % 2 == 0 { rhs } else { -&rhs };
            if lhs != rhs {
                product = Some(format!("grades ({k1}, {k2})"));
                break 'outer;
            }
        }
    }
    checks.push(check("product_rule_2_4", product));

    checks.push(check(
        "sl2_lstar_l",
        first_failure(0..=n, |k| {
            let up = if k + 2 <= n { &lstar(k + 2) * &lef(k) } else { Matrix::zeros(dim(k), dim(k)) };
            let down = if k >= 2 { &lef(k - 2) * &lstar(k) } else { Matrix::zeros(dim(k), dim(k)) };
            up.sub(&down) == a_mat(k)
        }),
    ));
    checks.push(check(
        "sl2_a_l",
        first_failure(0..n.saturating_sub(1), |k| (&a_mat(k + 2) * &lef(k)).sub(&(&lef(k) * &a_mat(k))) == lef(k).scale(&int(-2))),
    ));
    checks.push(check(
        "sl2_a_lstar",
        first_failure(2..=n, |k| (&a_mat(k - 2) * &lstar(k)).sub(&(&lstar(k) * &a_mat(k))) == lstar(k).scale(&int(2))),
    ));
    checks.push(check(
        "lefschetz_iso",
        first_failure(0..=m, |k| op(m - k, m + k, &|a| a.wedge(&s.omega().power(k))).rank() == dim(m - k)),
    ));
    checks.push(check(
        "delta_squared",
        first_failure(2..=n, |k| (&op(k - 1, k - 2, &|a| s.delta(a)) * &op(k, k - 1, &|a| s.delta(a))).is_zero()),
    ));
    checks.push(check(
        "lstar_is_contraction",
        first_failure(2..=n, |k| lstar(k) == op(k, k - 2, &|a| s.contract_pi(a))),
    ));
    checks.push(check(
        "delta_is_bracket",
        first_failure(1..=n, |k| op(k, k - 1, &|a| s.delta(a)) == op(k, k - 1, &|a| s.pi_d_bracket(a)).scale(&int(-1))),
    ));
    checks.push(check(
        "harmonic_iso",
        first_failure(0..=m, |k| {
            let src = harmonic_forms(s, m - k);
            let tgt = harmonic_forms(s, m + k);
            let wk = s.omega().power(k);
            let imgs: Vec<Vec<Scalar>> = src
                .iter()
                .map(|v| {
                    let img = Form::from_vector(n, m - k, v).wedge(&wk).expect("grades fit");
                    if img.is_zero() { vec![Scalar::zero(); dim(m + k)] } else { img.to_vector() }
                })
                .collect();
            let mut both = imgs.clone();
            both.extend(tgt.iter().cloned());
            let d = dim(m + k);
            span_dimension(&imgs, d) == src.len() && src.len() == tgt.len() && span_dimension(&both, d) == tgt.len()
        }),
    ));
    OperatorSuite { omega: s.omega().render(), seed, checks }
}
