//! Symplectically harmonic cohomology.
//!
//! In degrees `d ≤ m` the harmonic subspace is `P^d + L(H^{d-2}_hr)`, where
//! `P^d = ker(L^{m-d+1}: H^d → H^{2m-d+2})`; above the middle degree it is the
//! image `L^j(H^{m-j}_hr)`. The recursion runs on integer coordinate matrices,
//! generic over the entry type so sweeps can use overflow-checked `i128`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cohomology::CohomologySpace;
use crate::error::{Error, Result};
use crate::exterior::basis;
use crate::liespec::{lower_central_series, LieAlgebraSpec};
use crate::linalg::integer::{reduce_rows, span};
use crate::linalg::{to_integer_matrix, with_fallback, IntEntry, IntMatrix, Matrix, Overflow};
use crate::scalar::{common_denominator, Scalar};
use crate::symplectic::{SymplecticConeDescription, SymplecticForm};

/// Integer basis rows of a subspace of `H^d`, in class coordinates.
pub type Subspace<T> = Vec<Vec<T>>;

/// Output of the recursion: harmonic and primitive subspaces per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Recursion<T> {
    pub harmonic: Vec<Subspace<T>>,
    /// `P^d` for `d ≤ m`.
    pub primitive: Vec<Subspace<T>>,
}

impl<T> Recursion<T> {
    pub fn h(&self) -> Vec<usize> {
        self.harmonic.iter().map(Vec::len).collect()
    }
}

/// `L^r` from `H^k`, as a product of the one-step matrices. `None` when the
/// target degree exceeds the top degree (the map is zero).
fn lefschetz_power<T: IntEntry>(l: &[IntMatrix<T>], betti: &[usize], k: usize, r: usize) -> Result<Option<IntMatrix<T>>, Overflow> {
    let top = betti.len() - 1;
    if k + 2 * r > top {
        return Ok(None);
    }
    let mut acc = identity::<T>(betti[k]);
    for step in 0..r {
        acc = l[k + 2 * step].mul(&acc)?;
    }
    Ok(Some(acc))
}

fn identity<T: IntEntry>(n: usize) -> IntMatrix<T> {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, T::one());
    }
    m
}

fn image<T: IntEntry>(map: &IntMatrix<T>, sub: &Subspace<T>) -> Result<Subspace<T>, Overflow> {
    let imgs = sub.iter().map(|v| map.apply(v)).collect::<Result<Vec<_>, _>>()?;
    span(imgs, map.rows)
}

fn kernel_of_power<T: IntEntry>(l: &[IntMatrix<T>], betti: &[usize], k: usize, r: usize) -> Result<Subspace<T>, Overflow> {
    match lefschetz_power(l, betti, k, r)? {
        Some(p) => p.kernel(),
        None => Ok(identity::<T>(betti[k]).row_vecs()),
    }
}

/// Runs the recursion given the one-step cup matrices `l[k]: H^k → H^{k+2}`.
pub fn recursion<T: IntEntry>(l: &[IntMatrix<T>], betti: &[usize]) -> Result<Recursion<T>, Overflow> {
    let top = betti.len() - 1;
    let m = top / 2;
    let mut harmonic: Vec<Subspace<T>> = vec![Vec::new(); top + 1];
    let mut primitive: Vec<Subspace<T>> = Vec::with_capacity(m + 1);
    for d in 0..=m {
        let p = kernel_of_power(l, betti, d, m - d + 1)?;
        let mut gens = p.clone();
        if d >= 2 {
            gens.extend(
                harmonic[d - 2]
                    .iter()
                    .map(|v| l[d - 2].apply(v))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        harmonic[d] = span(gens, betti[d])?;
        primitive.push(p);
    }
    for j in 1..=m {
        let map = lefschetz_power(l, betti, m - j, j)?.expect("target within range");
        harmonic[m + j] = image(&map, &harmonic[m - j])?;
    }
    Ok(Recursion { harmonic, primitive })
}

/// Integer cup matrices of `[ω]` for `k = 0..=n-2`, each scaled by its own
/// common denominator (kernels and images are unchanged).
pub fn integer_cup_matrices(h: &CohomologySpace, omega: &SymplecticForm) -> Result<Vec<IntMatrix<BigInt>>> {
    let n = h.n();
    (0..=n.saturating_sub(2))
        .map(|k| Ok(to_integer_matrix(&h.cup_matrix(omega.omega(), k, 1)?.matrix)))
        .collect()
}

fn run_recursion(mats: &[IntMatrix<BigInt>], betti: &[usize]) -> Recursion<BigInt> {
    with_fallback(
        mats,
        |small| {
            let r = recursion(small, betti)?;
            Ok(Recursion {
                harmonic: r.harmonic.iter().map(to_big).collect(),
                primitive: r.primitive.iter().map(to_big).collect(),
            })
        },
        |big| recursion(big, betti),
    )
}

fn to_big<T: IntEntry>(s: &Subspace<T>) -> Subspace<BigInt> {
    s.iter().map(|v| v.iter().map(IntEntry::to_bigint).collect()).collect()
}

fn to_scalars(s: &Subspace<BigInt>) -> Vec<Vec<Scalar>> {
    s.iter().map(|v| v.iter().map(|x| Scalar::from_integer(x.clone())).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveSubspace {
    pub degree: usize,
    /// Basis in `H^degree` coordinates.
    pub basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicProfile {
    /// Coordinates of `[ω]` in the `H²` basis.
    pub omega_class: Vec<Scalar>,
    pub h: Vec<usize>,
    /// Per degree, a basis of `H^k_hr` in `H^k` coordinates.
    pub subspaces: Vec<Vec<Vec<Scalar>>>,
}

fn require_same(h: &CohomologySpace, omega: &SymplecticForm) -> Result<()> {
    if h.n() != omega.n() {
        return Err(Error::DimensionMismatch { left: h.n(), right: omega.n() });
    }
    Ok(())
}

/// `P^{m-k} = ker(L^{k+1})` on `H^{m-k}`.
pub fn primitive(h: &CohomologySpace, omega: &SymplecticForm, k: usize) -> Result<PrimitiveSubspace> {
    require_same(h, omega)?;
    let m = omega.m();
    if k > m {
        return Err(Error::GradeOutOfRange { grade: k, n: m });
    }
    let degree = m - k;
    let cup = h.cup_matrix(omega.omega(), degree, k + 1)?;
    let basis = if cup.target > h.n() { identity_rows(h.betti(degree)) } else { cup.matrix.kernel() };
    Ok(PrimitiveSubspace { degree, basis })
}

fn identity_rows(n: usize) -> Vec<Vec<Scalar>> {
    Matrix::identity(n).row_vecs()
}

pub fn harmonic_subspaces(h: &CohomologySpace, omega: &SymplecticForm) -> Result<HarmonicProfile> {
    require_same(h, omega)?;
    let mats = integer_cup_matrices(h, omega)?;
    let rec = run_recursion(&mats, &h.betti_numbers());
    let subspaces: Vec<Vec<Vec<Scalar>>> = rec.harmonic.iter().map(to_scalars).collect();
    Ok(HarmonicProfile {
        omega_class: h.reduce(omega.omega())?,
        h: subspaces.iter().map(Vec::len).collect(),
        subspaces,
    })
}

/// `h_5 + dim ker(L: H³ → H⁵)` in dimension six.
pub fn h3_via_kernel(h: &CohomologySpace, omega: &SymplecticForm) -> Result<usize> {
    require_same(h, omega)?;
    if omega.n() != 6 {
        return Err(Error::WrongDimension { expected: 6, got: omega.n() });
    }
    let profile = harmonic_subspaces(h, omega)?;
    let ker = h.cup_matrix(omega.omega(), 3, 1)?.matrix.kernel().len();
    Ok(profile.h[5] + ker)
}

/// Invariant forms with `da = 0` and `δa = 0` in degree `k`, as coordinate rows.
pub fn harmonic_forms(omega: &SymplecticForm, k: usize) -> Vec<Vec<Scalar>> {
    let n = omega.n();
    let spec = omega.spec();
    let mut rows = if k < n {
        omega.operator_matrix(k, k + 1, |a| Ok(spec.d(a))).row_vecs()
    } else {
        Vec::new()
    };
    if k > 0 {
        rows.extend(omega.operator_matrix(k, k - 1, |a| omega.delta(a)).row_vecs());
    }
    let dim = basis(n).dim(k);
    if rows.is_empty() {
        return identity_rows(dim);
    }
    Matrix::from_rows_with_cols(&rows, dim).kernel()
}

/// `dim` of harmonic invariant k-forms modulo exact ones:
/// `dim(Harm + B) - dim B`.
pub fn chain_level_h(omega: &SymplecticForm, k: usize) -> Result<usize> {
    let n = omega.n();
    if k > n {
        return Err(Error::GradeOutOfRange { grade: k, n });
    }
    let harm = harmonic_forms(omega, k);
    let exact: Vec<Vec<Scalar>> = if k == 0 {
        Vec::new()
    } else {
        let spec = omega.spec();
        omega.operator_matrix(k - 1, k, |a| Ok(spec.d(a))).column_vecs()
    };
    let dim = basis(n).dim(k);
    let b = crate::linalg::rational::span_dimension(&exact, dim);
    let mut all = exact;
    all.extend(harm);
    Ok(crate::linalg::rational::span_dimension(&all, dim) - b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YamadaReport {
    pub step_length: usize,
    /// `dim 𝔤^r` with `r = step_length - 1`.
    pub dim_last_term: usize,
    pub h1: usize,
    pub h_top_minus_1: usize,
    /// `h_1 - h_{2m-1} ≥ dim 𝔤^r`; `None` for abelian algebras.
    pub inequality: Option<bool>,
    /// Step length two: `h_1 - h_{2m-1} = dim[𝔤,𝔤]`.
    pub equality: Option<bool>,
    /// Step length two: `h_{2m-1} = 2(b_1 - m)`.
    pub top_formula: Option<bool>,
}

impl YamadaReport {
    pub fn passed(&self) -> bool {
        self.inequality != Some(false) && self.equality != Some(false) && self.top_formula != Some(false)
    }
}

pub fn yamada_check(spec: &LieAlgebraSpec, profile: &HarmonicProfile, b1: usize) -> YamadaReport {
    yamada_check_h(spec, &profile.h, b1)
}

pub fn yamada_check_h(spec: &LieAlgebraSpec, h: &[usize], b1: usize) -> YamadaReport {
    let lcs = lower_central_series(spec);
    let s = lcs.step_length;
    let top = h.len() - 1;
    let m = top / 2;
    let (h1, hm1) = (h[1], h[top - 1]);
    let dim_last_term = lcs.dims.get(s - 1).copied().unwrap_or(0);
    let diff = h1 as i64 - hm1 as i64;
    let applies = s >= 2;
    YamadaReport {
        step_length: s,
        dim_last_term,
        h1,
        h_top_minus_1: hm1,
        inequality: applies.then_some(diff >= dim_last_term as i64),
        equality: (s == 2).then(|| diff == lcs.dims[1] as i64),
        top_formula: (s == 2).then(|| hm1 as i64 == 2 * (b1 as i64 - m as i64)),
    }
}

/// Fast evaluation of `h` over `H²` class coordinates: the cup matrix of a
/// class is `Σ x_i M_i` with per-basis-class integer matrices precomputed.
#[derive(Clone, Debug)]
pub struct ClassEvaluator {
    betti: Vec<usize>,
    /// `cup[k][i]`: basis class `i`, `H^k → H^{k+2}`, one common scale per `k`.
    cup: Vec<Vec<IntMatrix<i128>>>,
    cup_big: Vec<Vec<IntMatrix<BigInt>>>,
    /// Pfaffian restricted to class coordinates, integer coefficients.
    pf_terms: Vec<(Vec<(usize, u16)>, i128)>,
}

impl ClassEvaluator {
    pub fn new(h: &CohomologySpace, cone: &SymplecticConeDescription) -> Self {
        let n = h.n();
        let b2 = h.betti(2);
        let mut cup = Vec::new();
        let mut cup_big = Vec::new();
        for k in 0..=n.saturating_sub(2) {
            let mats = h.class_cup_matrices(k);
            let den = Scalar::from_integer(common_denominator(mats.iter().flat_map(|m| m.entries().iter())));
            let ints: Vec<IntMatrix<BigInt>> = mats.iter().map(|m| to_integer_matrix(&m.scale(&den))).collect();
            cup.push(ints.iter().map(|m| m.convert().expect("small structure constants")).collect());
            cup_big.push(ints);
        }
        let terms = cone.pfaffian.terms();
        let den = Scalar::from_integer(common_denominator(terms.values()));
        let pf_terms = terms
            .iter()
            .filter(|(e, _)| e[b2..].iter().all(|&x| x == 0))
            .map(|(e, c)| {
                let v: i128 = (c * &den).to_integer().try_into().expect("small pfaffian coefficients");
                let factors = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x)).collect();
                (factors, v)
            })
            .collect();
        ClassEvaluator { betti: h.betti_numbers(), cup, cup_big, pf_terms }
    }

    pub fn class_dim(&self) -> usize {
        self.betti[2]
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    /// Sign of the Pfaffian (up to a fixed positive scale) at integer class
    /// coordinates.
    pub fn pf_nonzero(&self, x: &[i64]) -> bool {
        let mut acc: i128 = 0;
        for (factors, c) in &self.pf_terms {
            let mut v = *c;
            for &(i, e) in factors {
                for _ in 0..e {
                    v *= x[i] as i128;
                }
            }
            acc += v;
        }
        acc != 0
    }

    fn combine<T: IntEntry>(mats: &[IntMatrix<T>], x: &[T]) -> Result<IntMatrix<T>, Overflow> {
        let mut out: IntMatrix<T> = IntMatrix::zeros(mats[0].rows, mats[0].cols);
        for (m, xi) in mats.iter().zip(x) {
            if xi.is_zero() {
                continue;
            }
            for (o, v) in out.data.iter_mut().zip(&m.data) {
                if !v.is_zero() {
                    *o = o.checked_add(&v.checked_mul(xi)?)?;
                }
            }
        }
        Ok(out)
    }

    fn cup_at<T: IntEntry>(all: &[Vec<IntMatrix<T>>], x: &[T]) -> Result<Vec<IntMatrix<T>>, Overflow> {
        all.iter().map(|mats| Self::combine(mats, x)).collect()
    }

    /// The recursion at integer class coordinates (nondegeneracy is the
    /// caller's concern).
    pub fn recursion_at(&self, x: &[i64]) -> Recursion<BigInt> {
        let small: Result<Recursion<i128>, Overflow> = (|| {
            let xs: Vec<i128> = x.iter().map(|&v| v as i128).collect();
            recursion(&Self::cup_at(&self.cup, &xs)?, &self.betti)
        })();
        match small {
            Ok(r) => Recursion {
                harmonic: r.harmonic.iter().map(to_big).collect(),
                primitive: r.primitive.iter().map(to_big).collect(),
            },
            Err(Overflow) => {
                let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                let mats = Self::cup_at(&self.cup_big, &xs).expect("BigInt arithmetic does not overflow");
                recursion(&mats, &self.betti).expect("BigInt arithmetic does not overflow")
            }
        }
    }

    /// `h` at integer class coordinates.
    pub fn h_at(&self, x: &[i64]) -> Vec<usize> {
        let small: Result<Vec<usize>, Overflow> = (|| {
            let xs: Vec<i128> = x.iter().map(|&v| v as i128).collect();
            Ok(recursion(&Self::cup_at(&self.cup, &xs)?, &self.betti)?.h())
        })();
        small.unwrap_or_else(|_| self.recursion_at(x).h())
    }

    /// `h` and the primitive dimensions `dim P^d` (`d ≤ m`) at integer class
    /// coordinates.
    pub fn dims_at(&self, x: &[i64]) -> (Vec<usize>, Vec<usize>) {
        let small: Result<Recursion<i128>, Overflow> = (|| {
            let xs: Vec<i128> = x.iter().map(|&v| v as i128).collect();
            recursion(&Self::cup_at(&self.cup, &xs)?, &self.betti)
        })();
        match small {
            Ok(r) => (r.h(), r.primitive.iter().map(Vec::len).collect()),
            Err(Overflow) => {
                let r = self.recursion_at(x);
                (r.h(), r.primitive.iter().map(Vec::len).collect())
            }
        }
    }

    /// `None` when the class is degenerate.
    pub fn evaluate(&self, x: &[i64]) -> Option<Vec<usize>> {
        self.pf_nonzero(x).then(|| self.h_at(x))
    }

    /// `dim ker(L: H^k → H^{k+2})` at integer class coordinates.
    pub fn kernel_dim(&self, x: &[i64], k: usize) -> usize {
        let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let l = Self::combine(&self.cup_big[k], &xs).expect("BigInt arithmetic does not overflow");
        l.cols - reduce_rows(l.row_vecs(), l.cols).expect("BigInt").rows.len()
    }
}
