//! Nilpotent Lie algebras given in Salamon structure notation.
//!
//! `(0,0,12,13,14,34+52)` lists `dα_k` for each generator: entry `k` is `0` or a
//! signed sum of two-digit terms, where the term `ij` means `α_i ∧ α_j` in the
//! written order (so `52` is `-α_2 ∧ α_5`). Constants are stored normalized as
//! `c^{ij}_k` with `i < j < k`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{ParseError, Result};
use crate::exterior::{basis, Form, MultiIndex, MAX_DIM};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    n: usize,
    name: String,
    /// `(i, j, k) -> c^{ij}_k` with `i < j < k`, zeros omitted.
    constants: BTreeMap<(usize, usize, usize), Scalar>,
}

impl fmt::Debug for LieAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebraSpec({})", self.name)
    }
}

impl fmt::Display for LieAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", b as char)))
        }
    }
}

/// One parsed term: sign and the two generator indices in written order.
type RawTerm = (bool, usize, usize);

fn parse_entries(text: &str) -> Result<Vec<Vec<RawTerm>>, ParseError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor {
        bytes: compact.as_bytes(),
        pos: 0,
    };
    cur.expect(b'(')?;
    let mut entries = Vec::new();
    loop {
        let mut terms = Vec::new();
        if cur.peek() == Some(b'0') {
            cur.pos += 1;
        } else {
            let mut negative = false;
            loop {
                let mut digits = [0usize; 2];
                for d in digits.iter_mut() {
                    match cur.peek() {
                        Some(c @ b'1'..=b'9') => {
                            *d = usize::from(c - b'0');
                            cur.pos += 1;
                        }
                        _ => return Err(cur.err("expected a generator digit 1-9")),
                    }
                }
                terms.push((negative, digits[0], digits[1]));
                match cur.peek() {
                    Some(b'+') => negative = false,
                    Some(b'-') => negative = true,
                    _ => break,
                }
                cur.pos += 1;
            }
        }
        entries.push(terms);
        match cur.peek() {
            Some(b',') => cur.pos += 1,
            Some(b')') => {
                cur.pos += 1;
                break;
            }
            _ => return Err(cur.err("expected `,` or `)`")),
        }
    }
    if cur.pos != cur.bytes.len() {
        return Err(cur.err("trailing input"));
    }
    Ok(entries)
}

impl LieAlgebraSpec {
    /// Parses structure notation and checks triangularity and `d² = 0`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let entries = parse_entries(text)?;
        let n = entries.len();
        if n == 0 || n > MAX_DIM {
            return Err(ParseError::Dimension(n));
        }
        let mut constants: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        for (idx, terms) in entries.iter().enumerate() {
            let k = idx + 1;
            for &(neg, a, b) in terms {
                for d in [a, b] {
                    if d > n {
                        return Err(ParseError::DigitOutOfRange { entry: k, digit: d, n });
                    }
                }
                let term = format!("{a}{b}");
                if a == b || a.max(b) >= k {
                    return Err(ParseError::NotTriangular { entry: k, term });
                }
                let (i, j, swap) = if a < b { (a, b, false) } else { (b, a, true) };
                let positive = neg == swap;
                let c = if positive { Scalar::one() } else { -Scalar::one() };
                let slot = constants.entry((i, j, k)).or_insert_with(Scalar::zero);
                *slot += c;
            }
        }
        constants.retain(|_, v| !v.is_zero());
        let spec = LieAlgebraSpec {
            n,
            name: text.chars().filter(|c| !c.is_whitespace()).collect(),
            constants,
        };
        for k in 1..=n {
            let dd = spec.d(&spec.d_generator(k));
            if !dd.is_zero() {
                return Err(ParseError::NotDifferential { generator: k });
            }
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn constants(&self) -> &BTreeMap<(usize, usize, usize), Scalar> {
        &self.constants
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.constants
            .get(&(i, j, k))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// `dα_k` as a 2-form.
    pub fn d_generator(&self, k: usize) -> Form {
        let mut out = Form::zero(self.n, 2);
        for ((i, j, kk), c) in &self.constants {
            if *kk == k {
                out.add_term(MultiIndex::new(&[*i, *j]).expect("i < j"), c.clone());
            }
        }
        out
    }

    /// Chevalley–Eilenberg differential, extended as an antiderivation.
    pub fn d(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.n, a.grade() + 1);
        if a.grade() >= self.n {
            return out;
        }
        let gens: Vec<Form> = (1..=self.n).map(|k| self.d_generator(k)).collect();
        for (mi, c) in a.terms() {
            let idx: Vec<usize> = mi.indices().collect();
            for (p, &k) in idx.iter().enumerate() {
                if gens[k - 1].is_zero() {
                    continue;
                }
                // α_{i1} ∧ … ∧ dα_{ip} ∧ … with sign (-1)^p
                let mut term = Form::one(self.n);
                for (q, &g) in idx.iter().enumerate() {
                    let factor = if q == p {
                        gens[g - 1].clone()
                    } else {
                        Form::basis_element(self.n, &[g]).expect("valid index")
                    };
                    term = term.wedge(&factor).expect("same dimension");
                }
                let coef = if p % 2 == 0 { c.clone() } else { -c.clone() };
                for (m, v) in term.terms() {
                    out.add_term(*m, v * &coef);
                }
            }
        }
        out
    }

    /// Renders back to notation with `i < j` in every term, except that a
    /// negative leading term is written reversed (`52` for `-25`).
    pub fn render(&self) -> String {
        let mut parts = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            let mut s = String::new();
            for ((i, j, kk), c) in &self.constants {
                if *kk != k {
                    continue;
                }
                let reps = c.abs_int();
                let sign = if c > &Scalar::zero() { '+' } else { '-' };
                for _ in 0..reps {
                    if s.is_empty() && sign == '-' {
                        s.push_str(&format!("{j}{i}"));
                        continue;
                    }
                    if !s.is_empty() {
                        s.push(sign);
                    }
                    s.push_str(&format!("{i}{j}"));
                }
            }
            if s.is_empty() {
                s.push('0');
            }
            parts.push(s);
        }
        format!("({})", parts.join(","))
    }
}

trait AbsInt {
    fn abs_int(&self) -> usize;
}

impl AbsInt for Scalar {
    fn abs_int(&self) -> usize {
        use num_traits::{Signed, ToPrimitive};
        self.to_integer().abs().to_usize().expect("small structure constant")
    }
}

/// Matrices of `d: Λ^k → Λ^{k+1}` in the lexicographic multi-index bases.
#[derive(Clone, Debug)]
pub struct CEDifferential {
    n: usize,
    matrices: Vec<Matrix>,
}

impl CEDifferential {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix of `d` on Λ^k (rows: Λ^{k+1}, columns: Λ^k). For `k = n` the
    /// matrix has zero rows.
    pub fn matrix(&self, k: usize) -> &Matrix {
        &self.matrices[k]
    }
}

pub fn differential(spec: &LieAlgebraSpec) -> CEDifferential {
    let n = spec.n;
    let b = basis(n);
    let matrices = (0..=n)
        .map(|k| {
            let rows = b.dim(k + 1);
            let cols: Vec<Vec<Scalar>> = b
                .grade(k)
                .iter()
                .map(|mi| {
                    let f = Form::monomial(n, *mi, Scalar::one()).expect("valid");
                    let df = spec.d(&f);
                    if rows == 0 {
                        Vec::new()
                    } else {
                        df.to_vector()
                    }
                })
                .collect();
            Matrix::from_columns(&cols, rows)
        })
        .collect();
    CEDifferential { n, matrices }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCentralSeries {
    /// `dim 𝔤^r` for r = 0, 1, … up to and including the first zero.
    pub dims: Vec<usize>,
    pub step_length: usize,
}

/// Lower central series from the brackets `[e_i, e_j] = -Σ_k c^{ij}_k e_k`.
pub fn lower_central_series(spec: &LieAlgebraSpec) -> LowerCentralSeries {
    let n = spec.n;
    let bracket = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for ((i, j, k), c) in &spec.constants {
            // [x, y] picks up x_i y_j - x_j y_i on [e_i, e_j]
            let coef = &x[i - 1] * &y[j - 1] - &x[j - 1] * &y[i - 1];
            if !coef.is_zero() {
                out[k - 1] -= coef * c;
            }
        }
        out
    };
    let unit = |i: usize| -> Vec<Scalar> {
        (0..n)
            .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
            .collect()
    };
    let mut current: Vec<Vec<Scalar>> = (0..n).map(unit).collect();
    let mut dims = vec![n];
    while !current.is_empty() {
        let mut next = Vec::new();
        for i in 0..n {
            for y in &current {
                let v = bracket(&unit(i), y);
                if v.iter().any(|c| !c.is_zero()) {
                    next.push(v);
                }
            }
        }
        current = if next.is_empty() {
            Vec::new()
        } else {
            Matrix::from_rows(&next).row_space()
        };
        dims.push(current.len());
    }
    let step_length = dims.iter().filter(|&&d| d > 0).count();
    LowerCentralSeries { dims, step_length }
}
