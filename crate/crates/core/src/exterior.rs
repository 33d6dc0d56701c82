//! Exact graded exterior algebra over a based vector space.
//!
//! Forms live in Λ*(V*) and are written in the dual basis `a1..an`; multivectors
//! live in Λ*(V) with basis `e1..en`. Coefficients are sparse maps from
//! [`MultiIndex`] to [`Scalar`] with zeros omitted.
//!
//! Interior products follow the antiderivation convention
//! `i(e_j)(a_j ∧ b) = b` when `b` has no `a_j` factor, and for a decomposable
//! multivector `i(v1 ∧ … ∧ vp) = i(vp) ∘ … ∘ i(v1)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};
use crate::scalar::{parse_scalar, render_scalar, Scalar};

/// Largest supported dimension (single-digit generator names).
pub const MAX_DIM: usize = 9;

/// A strictly increasing set of generator indices in `1..=9`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds a multi-index from strictly increasing 1-based indices.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > MAX_DIM || i <= last {
                return Err(Error::Precondition(format!(
                    "multi-index {indices:?} must be strictly increasing in 1..=9"
                )));
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Ok(MultiIndex(mask))
    }

    pub fn single(i: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&i));
        MultiIndex(1 << (i - 1))
    }

    pub fn from_mask(mask: u16) -> Self {
        MultiIndex(mask)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    /// Ascending 1-based indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn max_index(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }

    fn without(self, i: usize) -> Self {
        MultiIndex(self.0 & !(1 << (i - 1)))
    }

    /// Number of entries of `self` strictly below index `i`.
    fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u16 << (i - 1)) - 1)).count_ones()
    }

    fn digits(self) -> String {
        self.indices().map(|i| char::from(b'0' + i as u8)).collect()
    }
}

impl Ord for MultiIndex {
    /// Grade first, then lexicographic on the ascending index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.grade().cmp(&other.grade()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.digits())
    }
}

/// Sign of `x_I ∧ x_J` relative to `x_{I∪J}`; zero if `I` and `J` overlap.
pub fn wedge_sign(a: MultiIndex, b: MultiIndex) -> i32 {
    if a.0 & b.0 != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    for j in b.indices() {
        swaps += (a.0 >> j).count_ones();
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Lexicographically ordered basis of Λ^k for each k, with reverse lookup.
#[derive(Debug)]
pub struct Basis {
    n: usize,
    by_grade: Vec<Vec<MultiIndex>>,
    position: Vec<usize>,
}

impl Basis {
    fn build(n: usize) -> Basis {
        let mut by_grade: Vec<Vec<MultiIndex>> = vec![Vec::new(); n + 1];
        for mask in 0u16..(1 << n) {
            let mi = MultiIndex(mask);
            by_grade[mi.grade()].push(mi);
        }
        let mut position = vec![0; 1 << n];
        for g in by_grade.iter_mut() {
            g.sort();
            for (p, mi) in g.iter().enumerate() {
                position[mi.0 as usize] = p;
            }
        }
        Basis {
            n,
            by_grade,
            position,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self, k: usize) -> &[MultiIndex] {
        self.by_grade.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.grade(k).len()
    }

    pub fn position(&self, mi: MultiIndex) -> usize {
        self.position[mi.0 as usize]
    }
}

/// Shared basis table for dimension `n`.
pub fn basis(n: usize) -> &'static Basis {
    static TABLES: OnceLock<Vec<Basis>> = OnceLock::new();
    assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
    &TABLES.get_or_init(|| (0..=MAX_DIM).map(Basis::build).collect())[n]
}

pub trait Kind: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    const PREFIX: char;
}

/// Marker for Λ*(V*).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Covector;
/// Marker for Λ*(V).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Vector;

impl Kind for Covector {
    const PREFIX: char = 'a';
}
impl Kind for Vector {
    const PREFIX: char = 'e';
}

/// Homogeneous element of an exterior algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct Graded<K: Kind> {
    n: usize,
    grade: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
    kind: PhantomData<K>,
}

pub type Form = Graded<Covector>;
pub type Multivector = Graded<Vector>;

impl<K: Kind> Graded<K> {
    pub fn zero(n: usize, grade: usize) -> Self {
        assert!(n <= MAX_DIM);
        Graded {
            n,
            grade,
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        let mut s = Self::zero(n, 0);
        s.add_term(MultiIndex::EMPTY, c);
        s
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    pub fn monomial(n: usize, mi: MultiIndex, c: Scalar) -> Result<Self> {
        if mi.max_index() > n {
            return Err(Error::GradeOutOfRange { grade: mi.max_index(), n });
        }
        let mut s = Self::zero(n, mi.grade());
        s.add_term(mi, c);
        Ok(s)
    }

    /// Basis monomial from 1-based indices, e.g. `&[1, 3]` for `a13`.
    pub fn basis_element(n: usize, indices: &[usize]) -> Result<Self> {
        Self::monomial(n, MultiIndex::new(indices)?, Scalar::one())
    }

    /// Coordinates in the lexicographic basis of Λ^grade.
    pub fn from_vector(n: usize, grade: usize, coords: &[Scalar]) -> Self {
        let b = basis(n);
        assert_eq!(coords.len(), b.dim(grade));
        let mut s = Self::zero(n, grade);
        for (mi, c) in b.grade(grade).iter().zip(coords) {
            s.add_term(*mi, c.clone());
        }
        s
    }

    pub fn to_vector(&self) -> Vec<Scalar> {
        let b = basis(self.n);
        let mut v = vec![Scalar::zero(); b.dim(self.grade)];
        for (mi, c) in &self.terms {
            v[b.position(*mi)] = c.clone();
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, mi: MultiIndex) -> Scalar {
        self.terms.get(&mi).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x_mi`, dropping the entry if it cancels.
    pub fn add_term(&mut self, mi: MultiIndex, c: Scalar) {
        debug_assert_eq!(mi.grade(), self.grade);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mi) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.grade);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.grade != other.grade {
            return Err(Error::Precondition(format!(
                "grade mismatch: {} vs {}",
                self.grade, other.grade
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        Ok(out)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let mut out = Self::zero(self.n, self.grade + other.grade);
        if out.grade > self.n {
            return Ok(out);
        }
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let s = wedge_sign(*i, *j);
                if s == 0 {
                    continue;
                }
                let c = a * b;
                out.add_term(MultiIndex(i.0 | j.0), if s > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// `self^k`.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.wedge(self).expect("same dimension");
        }
        acc
    }

    /// Canonical text rendering, e.g. `a136 + a146` or `2*e12 - 1/3*e34`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (mi, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mi.grade() == 0 {
                out.push_str(&render_scalar(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&render_scalar(&mag));
                out.push('*');
            }
            out.push(K::PREFIX);
            out.push_str(&mi.digits());
        }
        out
    }

    /// Parses the canonical rendering; the grade is taken from the terms.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let bad = |msg: &str| {
            Error::Parse(ParseError::Syntax {
                pos: 0,
                msg: format!("{msg} in `{text}`"),
            })
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && !(i > 0 && compact[..i].ends_with('/')) {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if i != 0 {
                    return Err(bad("dangling sign"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad("dangling sign"));
        }
        pieces.push((neg, cur));
        let mut result: Option<Self> = None;
        for (neg, piece) in pieces {
            let (coef, mono) = match piece.split_once('*') {
                Some((c, m)) => (parse_scalar(c)?, Some(m.to_string())),
                None if piece.starts_with(K::PREFIX) => (Scalar::one(), Some(piece.clone())),
                None => (parse_scalar(&piece)?, None),
            };
            let coef = if neg { -coef } else { coef };
            let mi = match mono {
                None => MultiIndex::EMPTY,
                Some(m) => {
                    let digits = m.strip_prefix(K::PREFIX).ok_or_else(|| bad("bad monomial"))?;
                    let idx: Vec<usize> = digits
                        .chars()
                        .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("bad digit")))
                        .collect::<Result<_>>()?;
                    MultiIndex::new(&idx)?
                }
            };
            let term = Self::monomial(n, mi, coef)?;
            result = Some(match result {
                None => term,
                Some(acc) => acc.try_add(&term)?,
            });
        }
        Ok(result.expect("at least one term"))
    }
}

impl<K: Kind> fmt::Display for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<K: Kind> fmt::Debug for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graded(n={}, k={}: {})", self.n, self.grade, self.render())
    }
}

impl<K: Kind> Add for &Graded<K> {
    type Output = Graded<K>;
    fn add(self, rhs: &Graded<K>) -> Graded<K> {
        self.try_add(rhs).expect("incompatible operands")
    }
}

impl<K: Kind> Sub for &Graded<K> {
    type Output = Graded<K>;
    fn sub(self, rhs: &Graded<K>) -> Graded<K> {
        self.try_add(&-rhs).expect("incompatible operands")
    }
}

impl<K: Kind> Neg for &Graded<K> {
    type Output = Graded<K>;
    fn neg(self) -> Graded<K> {
        self.scale(&-Scalar::one())
    }
}

/// `a ∧ b` for forms.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.wedge(b)
}

/// `i(e_j) a`.
fn contract_vector(j: usize, a: &Form) -> Form {
    let mut out = Form::zero(a.n, a.grade.saturating_sub(1));
    if a.grade == 0 {
        return out;
    }
    for (mi, c) in &a.terms {
        if !mi.contains(j) {
            continue;
        }
        let sign_odd = mi.count_below(j) % 2 == 1;
        out.add_term(mi.without(j), if sign_odd { -c.clone() } else { c.clone() });
    }
    out
}

/// Interior product `i(x) a`. Returns the zero form when `grade(x) > grade(a)`.
pub fn contract(x: &Multivector, a: &Form) -> Result<Form> {
    if x.n != a.n {
        return Err(Error::DimensionMismatch { left: x.n, right: a.n });
    }
    if x.grade > a.grade {
        return Ok(Form::zero(a.n, 0));
    }
    let mut out = Form::zero(a.n, a.grade - x.grade);
    for (mi, c) in &x.terms {
        let mut cur = a.clone();
        for j in mi.indices() {
            cur = contract_vector(j, &cur);
            if cur.is_zero() {
                break;
            }
        }
        for (k, v) in cur.terms {
            out.add_term(k, v * c);
        }
    }
    Ok(out)
}

/// Inhomogeneous form, stored by grade.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedForm {
    n: usize,
    components: BTreeMap<usize, Form>,
}

impl MixedForm {
    pub fn zero(n: usize) -> Self {
        MixedForm {
            n,
            components: BTreeMap::new(),
        }
    }

    pub fn from_forms(n: usize, forms: impl IntoIterator<Item = Form>) -> Result<Self> {
        let mut m = Self::zero(n);
        for f in forms {
            m.add(&f)?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, f: &Form) -> Result<()> {
        if f.n != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: f.n });
        }
        let slot = self
            .components
            .entry(f.grade)
            .or_insert_with(|| Form::zero(self.n, f.grade));
        *slot = slot.try_add(f)?;
        if slot.is_zero() {
            self.components.remove(&f.grade);
        }
        Ok(())
    }

    pub fn components(&self) -> impl Iterator<Item = &Form> {
        self.components.values()
    }

    /// Applies a grade-preserving or grade-shifting map to each component.
    pub fn map(&self, f: impl Fn(&Form) -> Form) -> MixedForm {
        let mut out = MixedForm::zero(self.n);
        for c in self.components.values() {
            out.add(&f(c)).expect("same dimension");
        }
        out
    }
}

/// The degree-`k` component `π_k(a)`.
pub fn grade_project(a: &MixedForm, k: usize) -> Form {
    a.components
        .get(&k)
        .cloned()
        .unwrap_or_else(|| Form::zero(a.n, k))
}
