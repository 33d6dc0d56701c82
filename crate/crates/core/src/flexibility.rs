//! Exploration of the symplectic cone: attained value sets of `h_k`,
//! certified symplectic paths along which `h_k` jumps, rank perturbations and
//! genericity statistics.
//!
//! Sweeps run over `H²` class coordinates. `h_k` and the Pfaffian depend only
//! on the class, and a point of the `Z²` grid has the same class coordinates as
//! its `H²` part, so both grids attain the same values.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology, CohomologySpace};
use crate::error::{Error, ParseError, Result};
use crate::exec::Exec;
use crate::harmonic::{yamada_check_h, ClassEvaluator};
use crate::liespec::{lower_central_series, LieAlgebraSpec};
use crate::linalg::Matrix;
use crate::poly::{count_roots, SturmProof};
use crate::scalar::{frac, int, render_scalar, to_primitive_integers, Scalar};
use crate::symplectic::{
    next_subset, next_tuple, symplectic_existence_in, Existence, SymplecticConeDescription, SymplecticForm,
};

pub use crate::poly::{sturm_nonvanishing, UnivariatePolynomial};

/// Random samples draw numerators from `[-R, R]`.
pub const RANDOM_NUMERATOR_BOUND: i64 = 1000;
/// Random samples draw denominators from `[1, Q]`.
pub const RANDOM_DENOMINATOR_BOUND: i64 = 4;
/// Shrinking steps tried by the segment search (`s = 1, 1/2, …, 2^-depth`).
pub const SEGMENT_DEPTH: u32 = 40;
/// Attempts `λ = 2^-1, …, 2^-depth` in [`rank_perturbation`].
pub const PERTURBATION_DEPTH: u32 = 64;

const RANDOM_CHUNK: usize = 64;

/// Sampling budget: full grid with entries in `[-grid_bound, grid_bound]` on
/// supports of size at most `support`, a wider grid with entries in
/// `[-wide_bound, wide_bound]` on supports of size at most `wide_support`, and
/// `samples` seeded random points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub grid_bound: i64,
    pub support: usize,
    pub samples: usize,
    pub wide_bound: i64,
    pub wide_support: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { grid_bound: 2, support: 5, samples: 10_000, wide_bound: 3, wide_support: 3 }
    }
}

impl Budget {
    pub fn zero() -> Self {
        Budget { grid_bound: 0, support: 0, samples: 0, wide_bound: 0, wide_support: 0 }
    }

    pub fn new(grid_bound: i64, support: usize, samples: usize) -> Self {
        Budget { grid_bound, support, samples, wide_bound: 0, wide_support: 0 }
    }

    /// No grid point and no random sample.
    pub fn is_empty(&self) -> bool {
        (self.grid_bound == 0 || self.support == 0) && (self.wide_bound == 0 || self.wide_support == 0) && self.samples == 0
    }

    /// Smaller than the default in some component.
    pub fn below_default(&self) -> bool {
        let d = Budget::default();
        self.grid_bound < d.grid_bound
            || self.support < d.support
            || self.samples < d.samples
            || self.wide_bound < d.wide_bound
            || self.wide_support < d.wide_support
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.grid_bound, self.support, self.samples)?;
        if self.wide_bound > 0 || self.wide_support > 0 {
            write!(f, ",{},{}", self.wide_bound, self.wide_support)?;
        }
        Ok(())
    }
}

impl FromStr for Budget {
    type Err = ParseError;

    /// `default`, `zero`, `B,S,N` or `B,S,N,B',S'`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Syntax { pos: 0, msg: format!("budget `{s}` is not `default`, `zero`, `B,S,N` or `B,S,N,B',S'`") };
        match s.trim() {
            "default" => return Ok(Budget::default()),
            "zero" => return Ok(Budget::zero()),
            _ => {}
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 && parts.len() != 5 {
            return Err(bad());
        }
        let bound = |t: &str| t.parse::<i64>().ok().filter(|&b| b >= 0).ok_or_else(bad);
        let count = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let mut b = Budget::new(bound(parts[0])?, count(parts[1])?, count(parts[2])?);
        if parts.len() == 5 {
            b.wide_bound = bound(parts[3])?;
            b.wide_support = count(parts[4])?;
        }
        Ok(b)
    }
}

/// Cohomology, cone description and fast evaluator of a symplectic algebra.
pub struct Cone {
    pub spec: LieAlgebraSpec,
    pub cohomology: CohomologySpace,
    pub description: SymplecticConeDescription,
    pub evaluator: ClassEvaluator,
}

impl Cone {
    /// Fails with [`Error::NotSymplectic`] when the Pfaffian vanishes identically.
    pub fn new(spec: &LieAlgebraSpec) -> Result<Self> {
        let h = cohomology(spec);
        let (description, decision) = symplectic_existence_in(&h)?;
        if let Existence::No { .. } = decision {
            return Err(Error::NotSymplectic);
        }
        let evaluator = ClassEvaluator::new(&h, &description);
        Ok(Cone { spec: spec.clone(), cohomology: h, description, evaluator })
    }

    pub fn class_dim(&self) -> usize {
        self.description.class_count
    }

    /// `Z²` coordinates of integer class coordinates (exact part zero).
    pub fn z2_coords(&self, x: &[i64]) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = x.iter().map(|&a| int(a)).collect();
        v.resize(self.description.dim(), Scalar::zero());
        v
    }

    /// Primitive integer class coordinates of `Z²` coordinates; `None` when
    /// an entry does not fit in `i64`.
    pub fn class_key(&self, coords: &[Scalar]) -> Option<Vec<i64>> {
        to_primitive_integers(&coords[..self.class_dim()]).iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn symplectic_form(&self, coords: &[Scalar]) -> Result<SymplecticForm> {
        SymplecticForm::new(&self.spec, self.description.form_at(coords)?)
    }

    /// `h` at `Z²` coordinates, `None` when degenerate.
    pub fn h_at(&self, coords: &[Scalar]) -> Option<Vec<usize>> {
        if self.description.pf_at(coords).is_zero() {
            return None;
        }
        match self.class_key(coords) {
            Some(x) => Some(self.evaluator.h_at(&x)),
            None => {
                let sf = self.symplectic_form(coords).ok()?;
                crate::harmonic::harmonic_subspaces(&self.cohomology, &sf).ok().map(|p| p.h)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleStrategy {
    /// Class coordinates with entries in `[-bound, bound]` and at most
    /// `support` nonzero entries.
    Grid { bound: i64, support: usize },
    Random { seed: u64, count: usize },
}

/// Symplectic forms from a grid or seeded random sampling of the cone,
/// deterministic in the strategy. Degenerate points are skipped.
pub fn sample_cone(spec: &LieAlgebraSpec, strategy: SampleStrategy) -> Result<impl Iterator<Item = SymplecticForm>> {
    let cone = Cone::new(spec)?;
    let points: Vec<Vec<i64>> = match strategy {
        SampleStrategy::Grid { bound, support } => {
            let mut all = Vec::new();
            for s in supports(cone.class_dim(), support) {
                for_each_tuple(&s, cone.class_dim(), bound, false, |x| all.push(x.to_vec()));
            }
            all
        }
        SampleStrategy::Random { seed, count } => random_points(cone.class_dim(), seed, count),
    };
    Ok(points.into_iter().filter_map(move |x| {
        if !cone.evaluator.pf_nonzero(&x) {
            return None;
        }
        Some(cone.symplectic_form(&cone.z2_coords(&x)).expect("nonzero Pfaffian"))
    }))
}

/// All index subsets of `0..d` of size `1..=max`, by size then lexicographically.
pub fn supports(d: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max.min(d) {
        let mut s: Vec<usize> = (0..size).collect();
        loop {
            out.push(s.clone());
            if !next_subset(&mut s, d) {
                break;
            }
        }
    }
    out
}

/// Calls `f` on every vector supported exactly on `support` with entries in
/// `[-bound, bound] \ {0}`. With `projective`, only primitive vectors whose
/// first entry is positive.
pub fn for_each_tuple(support: &[usize], d: usize, bound: i64, projective: bool, f: impl FnMut(&[i64])) {
    for_each_tuple_beyond(support, d, bound, 0, projective, f)
}

/// As [`for_each_tuple`], skipping vectors whose entries all lie in
/// `[-inner, inner]`.
fn for_each_tuple_beyond(support: &[usize], d: usize, bound: i64, inner: i64, projective: bool, mut f: impl FnMut(&[i64])) {
    if bound <= 0 || support.is_empty() {
        return;
    }
    let values: Vec<i64> = (-bound..=bound).filter(|&v| v != 0).collect();
    let mut digits = vec![0usize; support.len()];
    let mut x = vec![0i64; d];
    loop {
        let first = values[digits[0]];
        let keep = (!projective || (first > 0 && digits.iter().fold(0i64, |g, &i| num_integer::gcd(g, values[i])) == 1))
            && digits.iter().any(|&i| values[i].abs() > inner);
        if keep {
            for (&s, &i) in support.iter().zip(&digits) {
                x[s] = values[i];
            }
            f(&x);
        }
        if !next_tuple(&mut digits, values.len()) {
            break;
        }
    }
}

/// Grid work items: a support and the entry bound, with the inner bound of
/// points already covered by the base grid.
fn grid_tasks(d: usize, budget: &Budget) -> Vec<(Vec<usize>, i64, i64)> {
    let mut tasks: Vec<(Vec<usize>, i64, i64)> = Vec::new();
    if budget.grid_bound > 0 {
        tasks.extend(supports(d, budget.support).into_iter().map(|s| (s, budget.grid_bound, 0)));
    }
    if budget.wide_bound > 0 {
        for s in supports(d, budget.wide_support) {
            let covered = if s.len() <= budget.support { budget.grid_bound.min(budget.wide_bound) } else { 0 };
            if covered < budget.wide_bound {
                tasks.push((s, budget.wide_bound, covered));
            }
        }
    }
    tasks
}

/// Seeded random class vectors: entries `p/q` with `|p| ≤ R`, `1 ≤ q ≤ Q`,
/// scaled to primitive integer vectors.
pub fn random_points(d: usize, seed: u64, count: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v: Vec<Scalar> = (0..d)
                .map(|_| {
                    let p = rng.gen_range(-RANDOM_NUMERATOR_BOUND..=RANDOM_NUMERATOR_BOUND);
                    let q = rng.gen_range(1..=RANDOM_DENOMINATOR_BOUND);
                    frac(p, q)
                })
                .collect();
            to_primitive_integers(&v).iter().map(|b| b.to_i64().expect("bounded entries")).collect()
        })
        .collect()
}

/// One attained `(h_0, …, h_n)` profile and the first sample attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub h: Vec<usize>,
    /// Integer coordinates over the `Z²` basis.
    pub witness: Vec<i64>,
    pub grid_count: usize,
    pub random_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttainedValue {
    pub value: usize,
    pub witness: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeValues {
    pub k: usize,
    pub attained: Vec<AttainedValue>,
}

impl DegreeValues {
    pub fn values(&self) -> Vec<usize> {
        self.attained.iter().map(|a| a.value).collect()
    }
}

/// Failures of the structural relations over every evaluated sample.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureChecks {
    pub samples: usize,
    /// `h_k = b_k` for `k ≤ 2`.
    pub small_failures: usize,
    /// `h_{m-k} ≥ h_{m+k}`.
    pub epi_failures: usize,
    /// `h_3 = h_5 + dim ker(L: H³ → H⁵)`; dimension six only.
    pub ker_failures: usize,
    pub yamada_failures: usize,
    pub first_failure: Option<Vec<i64>>,
}

impl StructureChecks {
    pub fn passed(&self) -> bool {
        self.small_failures + self.epi_failures + self.ker_failures + self.yamada_failures == 0
    }

    fn merge(&mut self, other: &StructureChecks) {
        self.samples += other.samples;
        self.small_failures += other.small_failures;
        self.epi_failures += other.epi_failures;
        self.ker_failures += other.ker_failures;
        self.yamada_failures += other.yamada_failures;
        if self.first_failure.is_none() {
            self.first_failure.clone_from(&other.first_failure);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSetReport {
    pub structure: String,
    pub budget: Budget,
    pub seed: u64,
    pub betti: Vec<usize>,
    /// Number of `H²` coordinates (leading entries of each witness).
    pub class_dim: usize,
    pub z2_dim: usize,
    pub grid_points: usize,
    pub grid_symplectic: usize,
    pub random_samples: usize,
    pub random_symplectic: usize,
    /// Ordered by first occurrence (grid before random samples).
    pub profiles: Vec<ProfileRecord>,
    /// `k = 3, 4, 5`.
    pub sets: Vec<DegreeValues>,
    pub checks: StructureChecks,
}

impl ValueSetReport {
    pub fn values(&self, k: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.profiles.iter().map(|p| p.h[k]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn witness_for(&self, k: usize, value: usize) -> Option<&[i64]> {
        self.profiles.iter().find(|p| p.h[k] == value).map(|p| p.witness.as_slice())
    }
}

#[derive(Default)]
struct Tally {
    /// First-occurrence order.
    profiles: Vec<ProfileRecord>,
    index: BTreeMap<Vec<usize>, usize>,
    points: usize,
    symplectic: usize,
    checks: StructureChecks,
}

impl Tally {
    fn record(&mut self, h: Vec<usize>, witness: &[i64], grid: bool) {
        let i = *self.index.entry(h.clone()).or_insert_with(|| {
            self.profiles.push(ProfileRecord { h, witness: witness.to_vec(), grid_count: 0, random_count: 0 });
            self.profiles.len() - 1
        });
        if grid {
            self.profiles[i].grid_count += 1;
        } else {
            self.profiles[i].random_count += 1;
        }
    }

    fn merge(&mut self, other: Tally) {
        self.points += other.points;
        self.symplectic += other.symplectic;
        self.checks.merge(&other.checks);
        for p in other.profiles {
            match self.index.get(&p.h) {
                Some(&i) => {
                    self.profiles[i].grid_count += p.grid_count;
                    self.profiles[i].random_count += p.random_count;
                }
                None => {
                    self.index.insert(p.h.clone(), self.profiles.len());
                    self.profiles.push(p);
                }
            }
        }
    }
}

struct Checker {
    b: Vec<usize>,
    spec: LieAlgebraSpec,
    yamada_applies: bool,
}

impl Checker {
    fn new(cone: &Cone) -> Self {
        Checker {
            b: cone.cohomology.betti_numbers(),
            spec: cone.spec.clone(),
            yamada_applies: lower_central_series(&cone.spec).step_length >= 2,
        }
    }

    fn check(&self, h: &[usize], primitive: &[usize], x: &[i64], out: &mut StructureChecks) {
        let top = h.len() - 1;
        let m = top / 2;
        out.samples += 1;
        let mut failed = false;
        if (0..=2.min(top)).any(|k| h[k] != self.b[k]) {
            out.small_failures += 1;
            failed = true;
        }
        if (1..=m).any(|k| h[m - k] < h[m + k]) {
            out.epi_failures += 1;
            failed = true;
        }
        if top == 6 && h[3] != h[5] + primitive[3] {
            out.ker_failures += 1;
            failed = true;
        }
        if self.yamada_applies && !yamada_check_h(&self.spec, h, self.b[1]).passed() {
            out.yamada_failures += 1;
            failed = true;
        }
        if failed && out.first_failure.is_none() {
            out.first_failure = Some(x.to_vec());
        }
    }
}

fn evaluate_into(cone: &Cone, checker: &Checker, x: &[i64], grid: bool, t: &mut Tally) {
    t.points += 1;
    if !cone.evaluator.pf_nonzero(x) {
        return;
    }
    t.symplectic += 1;
    let (h, primitive) = cone.evaluator.dims_at(x);
    checker.check(&h, &primitive, x, &mut t.checks);
    let mut w = x.to_vec();
    w.resize(cone.description.dim(), 0);
    t.record(h, &w, grid);
}

/// Attained `h` profiles under `budget`: the projective grids over `H²`
/// class coordinates, then `budget.samples` seeded random points. Sample
/// evaluation runs under `exec`; results are merged in sample order.
pub fn value_sets_in(cone: &Cone, budget: Budget, seed: u64, exec: Exec) -> ValueSetReport {
    let d = cone.class_dim();
    let checker = Checker::new(cone);
    let tasks = grid_tasks(d, &budget);
    let grid_parts = exec.map(&tasks, |(s, bound, inner)| {
        let mut t = Tally::default();
        for_each_tuple_beyond(s, d, *bound, *inner, true, |x| evaluate_into(cone, &checker, x, true, &mut t));
        t
    });
    let points = random_points(d, seed, budget.samples);
    let chunks: Vec<&[Vec<i64>]> = points.chunks(RANDOM_CHUNK).collect();
    let random_parts = exec.map(&chunks, |c| {
        let mut t = Tally::default();
        for x in c.iter() {
            evaluate_into(cone, &checker, x, false, &mut t);
        }
        t
    });
    let mut grid = Tally::default();
    for t in grid_parts {
        grid.merge(t);
    }
    let (grid_points, grid_symplectic) = (grid.points, grid.symplectic);
    let mut random = Tally::default();
    for t in random_parts {
        random.merge(t);
    }
    let (random_samples, random_symplectic) = (random.points, random.symplectic);
    grid.merge(random);
    let profiles = grid.profiles;
    let top = cone.cohomology.n();
    let sets = (3..=5.min(top))
        .map(|k| {
            let mut attained: Vec<AttainedValue> = Vec::new();
            for p in &profiles {
                if !attained.iter().any(|a| a.value == p.h[k]) {
                    attained.push(AttainedValue { value: p.h[k], witness: p.witness.clone() });
                }
            }
            attained.sort_by_key(|a| a.value);
            DegreeValues { k, attained }
        })
        .collect();
    ValueSetReport {
        structure: cone.spec.render(),
        budget,
        seed,
        betti: cone.cohomology.betti_numbers(),
        class_dim: d,
        z2_dim: cone.description.dim(),
        grid_points,
        grid_symplectic,
        random_samples,
        random_symplectic,
        profiles,
        sets,
        checks: grid.checks,
    }
}

pub fn value_sets(spec: &LieAlgebraSpec, budget: Budget, seed: u64) -> Result<ValueSetReport> {
    Ok(value_sets_in(&Cone::new(spec)?, budget, seed, Exec::default()))
}

/// `rank(D·M^k)`; `M` must be square when `k > 1`.
fn rank_dmk(d: &Matrix, m: &Matrix, k: u32) -> Result<usize> {
    if k > 1 && m.rows() != m.cols() {
        return Err(Error::DimensionMismatch { left: m.rows(), right: m.cols() });
    }
    let p = match k {
        0 => Matrix::identity(m.cols()),
        1 => m.clone(),
        _ => m.pow(k),
    };
    if d.cols() != p.rows() {
        return Err(Error::DimensionMismatch { left: d.cols(), right: p.rows() });
    }
    Ok((d * &p).rank())
}

/// A rational `λ` with `rank D(A+λB)^k > rank D·A^k`, trying `λ = 1/2, 1/4, …`.
/// When `rank D·B^k > rank D·A^k` the good `λ` form an open dense set whose
/// complement is finite, so the search succeeds; otherwise a failed search is
/// reported as a precondition error.
pub fn rank_perturbation(d: &Matrix, a: &Matrix, b: &Matrix, k: u32) -> Result<Scalar> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch { left: a.rows() * a.cols(), right: b.rows() * b.cols() });
    }
    let base = rank_dmk(d, a, k)?;
    let mut lambda = frac(1, 2);
    for _ in 0..PERTURBATION_DEPTH {
        if rank_dmk(d, &a.add(&b.scale(&lambda)), k)? > base {
            return Ok(lambda);
        }
        lambda /= int(2);
    }
    if rank_dmk(d, b, k)? <= base {
        return Err(Error::Precondition("rank D·B^k does not exceed rank D·A^k".into()));
    }
    Err(Error::SearchExhausted(format!("no λ = 2^-j, j ≤ {PERTURBATION_DEPTH}, raises the rank")))
}

/// A straight symplectic path `ω_t = ω₀ + t(ω₁ - ω₀)`, `t ∈ [0, 1]`, along
/// which `h_k` changes. The Pfaffian along the path has no root on `[0, 1]`
/// by the embedded Sturm proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexibilityCertificate {
    pub structure: String,
    pub k: usize,
    /// Coordinates over the `Z²` basis.
    pub omega0: Vec<String>,
    pub omega1: Vec<String>,
    /// `pf(ω_t)` by ascending degree.
    pub pfaffian_on_path: Vec<String>,
    pub nonvanishing_proof: SturmProof,
    pub h_at_0: Vec<usize>,
    pub h_at_1: Vec<usize>,
}

impl FlexibilityCertificate {
    pub fn omega0(&self) -> Result<Vec<Scalar>> {
        parse_all(&self.omega0)
    }

    pub fn omega1(&self) -> Result<Vec<Scalar>> {
        parse_all(&self.omega1)
    }

    /// `ω_t` in `Z²` coordinates.
    pub fn point(&self, t: &Scalar) -> Result<Vec<Scalar>> {
        let (a, b) = (self.omega0()?, self.omega1()?);
        Ok(a.iter().zip(&b).map(|(x, y)| x + t * (y - x)).collect())
    }
}

fn parse_all(v: &[String]) -> Result<Vec<Scalar>> {
    v.iter().map(|s| crate::scalar::parse_scalar(s).map_err(Error::from)).collect()
}

fn render_all(v: &[Scalar]) -> Vec<String> {
    v.iter().map(render_scalar).collect()
}

/// Searches segments from one endpoint towards the other, shrinking by
/// `s = 1, 1/2, …, 2^-SEGMENT_DEPTH`, for a path with differing `h_k` at the
/// ends and a Pfaffian without roots on `[0, 1]`. Both orientations are tried.
pub fn certify_flexible_in(cone: &Cone, k: usize, omega0: &[Scalar], omega1: &[Scalar]) -> Result<FlexibilityCertificate> {
    let dim = cone.description.dim();
    for w in [omega0, omega1] {
        if w.len() != dim {
            return Err(Error::DimensionMismatch { left: w.len(), right: dim });
        }
    }
    let h0 = cone.h_at(omega0).ok_or(Error::Degenerate)?;
    let h1 = cone.h_at(omega1).ok_or(Error::Degenerate)?;
    if k >= h0.len() {
        return Err(Error::GradeOutOfRange { grade: k, n: h0.len() - 1 });
    }
    if h0[k] == h1[k] {
        return Err(Error::Precondition(format!("h_{k} agrees at both forms ({})", h0[k])));
    }
    for (base, other, hb) in [(omega0, omega1, &h0), (omega1, omega0, &h1)] {
        let dir: Vec<Scalar> = other.iter().zip(base).map(|(o, b)| o - b).collect();
        let mut s = Scalar::one();
        for _ in 0..=SEGMENT_DEPTH {
            let end: Vec<Scalar> = base.iter().zip(&dir).map(|(b, v)| b + &s * v).collect();
            let step: Vec<Scalar> = dir.iter().map(|v| &s * v).collect();
            s /= int(2);
            let Some(he) = cone.h_at(&end) else { continue };
            if he[k] == hb[k] {
                continue;
            }
            let p = cone.description.pfaffian.restrict_to_line(base, &step);
            assert!(!p.is_zero(), "Pfaffian vanishes along a segment with a symplectic endpoint");
            let (roots, proof) = count_roots(&p, &Scalar::zero(), &Scalar::one())?;
            if roots == 0 {
                return Ok(FlexibilityCertificate {
                    structure: cone.spec.render(),
                    k,
                    omega0: render_all(base),
                    omega1: render_all(&end),
                    pfaffian_on_path: render_all(p.coeffs()),
                    nonvanishing_proof: proof,
                    h_at_0: hb.clone(),
                    h_at_1: he,
                });
            }
        }
    }
    Err(Error::SearchExhausted(format!("no root-free segment with differing h_{k}")))
}

pub fn certify_flexible(spec: &LieAlgebraSpec, k: usize, omega0: &[Scalar], omega1: &[Scalar]) -> Result<FlexibilityCertificate> {
    certify_flexible_in(&Cone::new(spec)?, k, omega0, omega1)
}

/// Independent re-check of a certificate: the Sturm proof is valid for the
/// Pfaffian recomputed along the path, and `h_k` differs at the ends.
pub fn check_certificate(cone: &Cone, cert: &FlexibilityCertificate) -> Result<bool> {
    let (a, b) = (cert.omega0()?, cert.omega1()?);
    let dir: Vec<Scalar> = b.iter().zip(&a).map(|(y, x)| y - x).collect();
    let p = cone.description.pfaffian.restrict_to_line(&a, &dir);
    if render_all(p.coeffs()) != cert.pfaffian_on_path || !crate::poly::check_proof(&cert.nonvanishing_proof)? {
        return Ok(false);
    }
    let (roots, _) = count_roots(&p, &Scalar::zero(), &Scalar::one())?;
    let (h0, h1) = (cone.h_at(&a), cone.h_at(&b));
    Ok(roots == 0 && h0.as_ref() == Some(&cert.h_at_0) && h1.as_ref() == Some(&cert.h_at_1) && cert.h_at_0[cert.k] != cert.h_at_1[cert.k])
}

/// Tries witness pairs from a value-set report, highest degree first, and
/// returns the first certificate.
pub fn find_certificate(cone: &Cone, report: &ValueSetReport) -> Option<FlexibilityCertificate> {
    for set in report.sets.iter().rev() {
        for (i, a) in set.attained.iter().enumerate() {
            for b in &set.attained[i + 1..] {
                let w0: Vec<Scalar> = a.witness.iter().map(|&v| int(v)).collect();
                let w1: Vec<Scalar> = b.witness.iter().map(|&v| int(v)).collect();
                if let Ok(c) = certify_flexible_in(cone, set.k, &w0, &w1) {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// Degrees whose value set has more than one element.
pub fn varying_degrees(report: &ValueSetReport) -> Vec<usize> {
    report.sets.iter().filter(|s| s.attained.len() > 1).map(|s| s.k).collect()
}

/// Random line `base + t·direction` through a non-generic point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilResult {
    pub base: Vec<i64>,
    pub direction: Vec<i64>,
    pub test_points: usize,
    /// Symplectic test points `t ≠ 0` with non-generic `(h_4, h_5)` (or `h_3`).
    pub nongeneric: usize,
    /// Test points where the Pfaffian vanishes.
    pub degenerate: usize,
}

impl PencilResult {
    /// Some test point is generic, so the non-generic locus on the line is a
    /// proper algebraic subset, hence finite.
    pub fn finite(&self) -> bool {
        self.nongeneric + self.degenerate < self.test_points
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub structure: String,
    pub samples: usize,
    pub h4_max: usize,
    pub h4_at_max: usize,
    pub h5_max: usize,
    pub h5_at_max: usize,
    pub h5_constant: bool,
    /// Present when the `h_5` value set is a singleton.
    pub h3_min: Option<usize>,
    pub h3_at_min: Option<usize>,
    pub pencils: Vec<PencilResult>,
}

impl GenericityReport {
    pub fn fraction(count: usize, total: usize) -> f64 {
        if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        }
    }

    pub fn h4_fraction(&self) -> f64 {
        Self::fraction(self.h4_at_max, self.samples)
    }

    pub fn h5_fraction(&self) -> f64 {
        Self::fraction(self.h5_at_max, self.samples)
    }

    pub fn h3_fraction(&self) -> Option<f64> {
        self.h3_at_min.map(|c| Self::fraction(c, self.samples))
    }
}

const PENCILS_PER_POINT: usize = 3;
const PENCIL_TEST_POINTS: i64 = 16;

/// Frequencies of the extremal values over the random samples of `report`
/// (extrema taken over everything the report attained), and random pencils
/// through each non-generic profile witness.
pub fn genericity_report_in(cone: &Cone, report: &ValueSetReport, seed: u64) -> GenericityReport {
    let max_of = |k: usize| report.values(k).into_iter().max().unwrap_or(0);
    let (h4_max, h5_max) = (max_of(4), max_of(5));
    let h5_constant = report.values(5).len() == 1;
    let h3_min = h5_constant.then(|| report.values(3)[0]);
    let count = |pred: &dyn Fn(&[usize]) -> bool| {
        report.profiles.iter().filter(|p| pred(&p.h)).map(|p| p.random_count).sum::<usize>()
    };
    let generic = |h: &[usize]| h[4] == h4_max && h[5] == h5_max && h3_min.is_none_or(|m| h[3] == m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let d = cone.class_dim();
    let mut pencils = Vec::new();
    for p in report.profiles.iter().filter(|p| !generic(&p.h)) {
        let base = &p.witness[..d];
        for _ in 0..PENCILS_PER_POINT {
            let direction: Vec<i64> = (0..d).map(|_| rng.gen_range(-RANDOM_NUMERATOR_BOUND..=RANDOM_NUMERATOR_BOUND)).collect();
            let mut r = PencilResult { base: base.to_vec(), direction: direction.clone(), test_points: 0, nongeneric: 0, degenerate: 0 };
            for j in 1..=PENCIL_TEST_POINTS {
                // t = 1/j, scaled by j: j·base + direction
                let x: Vec<i64> = base.iter().zip(&direction).map(|(b, v)| j * b + v).collect();
                r.test_points += 1;
                match cone.evaluator.evaluate(&x) {
                    None => r.degenerate += 1,
                    Some(h) if !generic(&h) => r.nongeneric += 1,
                    Some(_) => {}
                }
            }
            pencils.push(r);
        }
    }
    GenericityReport {
        structure: report.structure.clone(),
        samples: report.random_symplectic,
        h4_max,
        h4_at_max: count(&|h| h[4] == h4_max),
        h5_max,
        h5_at_max: count(&|h| h[5] == h5_max),
        h5_constant,
        h3_min,
        h3_at_min: h3_min.map(|m| count(&|h| h[3] == m)),
        pencils,
    }
}

pub fn genericity_report(spec: &LieAlgebraSpec, budget: Budget, seed: u64) -> Result<GenericityReport> {
    let cone = Cone::new(spec)?;
    let report = value_sets_in(&cone, budget, seed, Exec::default());
    Ok(genericity_report_in(&cone, &report, seed))
}
