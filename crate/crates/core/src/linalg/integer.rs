//! Fraction-free integer elimination.
//!
//! Rank, kernel and span computations over ℤ give the same answers as over ℚ
//! (row and column scalings do not change either), and avoid the gcd traffic of
//! rational arithmetic. The code is generic over [`IntEntry`], implemented for
//! overflow-checked `i128` and for [`BigInt`]; callers run the `i128` path first
//! and redo the computation with `BigInt` when it reports [`Overflow`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait IntEntry: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow>;
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow>;
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn checked_neg(&self) -> Result<Self, Overflow>;
    /// Non-negative gcd.
    fn gcd(&self, other: &Self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, other: &Self) -> Self;
    fn from_bigint(v: &BigInt) -> Result<Self, Overflow>;
    fn to_bigint(&self) -> BigInt;
    fn from_i64(v: i64) -> Self;
}

impl IntEntry for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_add(*self, *other).ok_or(Overflow)
    }
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_sub(*self, *other).ok_or(Overflow)
    }
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_mul(*self, *other).ok_or(Overflow)
    }
    fn checked_neg(&self) -> Result<Self, Overflow> {
        i128::checked_neg(*self).ok_or(Overflow)
    }
    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        // gcd of two i128 values other than MIN fits
        a as i128
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn from_bigint(v: &BigInt) -> Result<Self, Overflow> {
        v.to_i128().filter(|x| *x != i128::MIN).ok_or(Overflow)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

impl IntEntry for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self * other)
    }
    fn checked_neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn from_bigint(v: &BigInt) -> Result<Self, Overflow> {
        Ok(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

/// Dense integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct IntMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: IntEntry> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn convert<U: IntEntry>(&self) -> Result<IntMatrix<U>, Overflow> {
        let data = self
            .data
            .iter()
            .map(|v| U::from_bigint(&v.to_bigint()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>, Overflow> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.checked_add(&a.checked_mul(x)?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn mul(&self, rhs: &IntMatrix<T>) -> Result<IntMatrix<T>, Overflow> {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes");
        let mut out: IntMatrix<T> = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).checked_add(&a.checked_mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rank(&self) -> Result<usize, Overflow> {
        Ok(reduce_rows(self.row_vecs(), self.cols)?.rows.len())
    }

    /// Integer basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Result<Vec<Vec<T>>, Overflow> {
        let ech = reduce_rows(self.row_vecs(), self.cols)?;
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        // common multiple of the pivot values
        let mut lcm = T::one();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            let pv = &row[p];
            let g = lcm.gcd(pv);
            lcm = lcm.checked_mul(&pv.div_exact(&g))?;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![T::zero(); self.cols];
            v[f] = lcm.clone();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                let a = &row[f];
                if a.is_zero() {
                    continue;
                }
                v[p] = a.checked_mul(&lcm.div_exact(&row[p]))?.checked_neg()?;
            }
            normalize(&mut v)?;
            basis.push(v);
        }
        Ok(basis)
    }
}

impl IntMatrix<BigInt> {
    pub fn from_bigints(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }
}

/// Fully reduced integer echelon form: every pivot is positive, pivot columns
/// are zero outside their pivot row, rows are primitive and sorted by pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

fn content<T: IntEntry>(v: &[T]) -> T {
    let mut g = T::zero();
    for x in v {
        if !x.is_zero() {
            g = g.gcd(x);
            if g == T::one() {
                break;
            }
        }
    }
    g
}

fn normalize<T: IntEntry>(v: &mut [T]) -> Result<(), Overflow> {
    let g = content(v);
    if g.is_zero() {
        return Ok(());
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(T::is_negative);
    if g != T::one() || flip {
        for x in v.iter_mut() {
            let y = x.div_exact(&g);
            *x = if flip { y.checked_neg()? } else { y };
        }
    }
    Ok(())
}

/// Row-reduces a list of vectors of length `cols`, dropping zero rows.
pub fn reduce_rows<T: IntEntry>(mut rows: Vec<Vec<T>>, cols: usize) -> Result<Echelon<T>, Overflow> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        normalize(&mut rows[r])?;
        let (head, tail) = rows.split_at_mut(r);
        let (prow, rest) = tail.split_first_mut().expect("pivot row exists");
        let pv = prow[c].clone();
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let a = other[c].clone();
            if a.is_zero() {
                continue;
            }
            let g = pv.gcd(&a);
            let fp = pv.div_exact(&g);
            let fa = a.div_exact(&g);
            for j in 0..cols {
                let x = &other[j];
                let y = &prow[j];
                if y.is_zero() {
                    if !x.is_zero() && fp != T::one() {
                        other[j] = x.checked_mul(&fp)?;
                    }
                    continue;
                }
                other[j] = x.checked_mul(&fp)?.checked_sub(&y.checked_mul(&fa)?)?;
            }
            normalize(other)?;
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Ok(Echelon { rows, pivots })
}

/// Reduced integer basis of the span of `vectors`.
pub fn span<T: IntEntry>(vectors: Vec<Vec<T>>, len: usize) -> Result<Vec<Vec<T>>, Overflow> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    Ok(reduce_rows(vectors, len)?.rows)
}
