//! Exact polynomials: univariate with Sturm chains, and multivariate in
//! exponent-vector form.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{render_scalar, sign, Scalar};

/// Coefficients by degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Scalar>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `t`.
    pub fn variable() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = Scalar::zero();
        Self::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    r[top - dd + i] -= &q * c;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![Scalar::zero(); r.len() - dd];
        let lead = divisor.leading();
        for top in (dd..r.len()).rev() {
            let c = &r[top] / &lead;
            if !c.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    r[top - dd + i] -= &c * dc;
                }
            }
            q[top - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `p / gcd(p, p')`: the same roots, all simple.
    pub fn square_free(&self) -> Self {
        let d = self.derivative();
        if self.is_zero() || d.is_zero() {
            return self.clone();
        }
        self.div_rem(&self.gcd(&d)).0
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = sign(c) < 0;
            let mag = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&render_scalar(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", render_scalar(&mag), mono));
            }
        }
        out
    }
}

impl fmt::Debug for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `p, p', -rem(p, p'), …` down to the last nonzero remainder.
pub fn sturm_chain(p: &UnivariatePolynomial) -> Vec<UnivariatePolynomial> {
    let mut chain = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Scalar::one()));
    }
    chain
}

pub fn sign_changes(chain: &[UnivariatePolynomial], t: &Scalar) -> usize {
    let signs: Vec<i8> = chain.iter().map(|q| sign(&q.eval(t))).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Exact proof data that a polynomial has no root in `[a, b]`, re-checkable from
/// the chain alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmProof {
    /// The polynomial itself, coefficients by degree.
    pub polynomial: Vec<String>,
    /// Chain of the square-free part; polynomials as coefficient lists by degree, rendered `p/q`.
    pub chain: Vec<Vec<String>>,
    pub a: String,
    pub b: String,
    pub value_at_a: String,
    pub value_at_b: String,
    pub sign_changes_at_a: usize,
    pub sign_changes_at_b: usize,
}

/// Sturm chain evaluation on `[a, b]`. Returns the number of distinct roots in
/// the closed interval and the proof data.
pub fn count_roots(p: &UnivariatePolynomial, a: &Scalar, b: &Scalar) -> Result<(usize, SturmProof)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a > b {
        return Err(Error::Precondition("empty interval".into()));
    }
    // the chain of the square-free part counts distinct roots in (a, b] even
    // when an endpoint is a multiple root
    let chain = sturm_chain(&p.square_free());
    let va = sign_changes(&chain, a);
    let vb = sign_changes(&chain, b);
    let pa = p.eval(a);
    let pb = p.eval(b);
    // V(a) - V(b) counts distinct roots in (a, b]; add a root at a separately.
    let roots = va - vb + usize::from(pa.is_zero());
    let proof = SturmProof {
        polynomial: p.coeffs().iter().map(render_scalar).collect(),
        chain: chain
            .iter()
            .map(|q| q.coeffs().iter().map(render_scalar).collect())
            .collect(),
        a: render_scalar(a),
        b: render_scalar(b),
        value_at_a: render_scalar(&pa),
        value_at_b: render_scalar(&pb),
        sign_changes_at_a: va,
        sign_changes_at_b: vb,
    };
    Ok((roots, proof))
}

/// `true` iff `p` has no real root in `[a, b]`.
pub fn sturm_nonvanishing(p: &UnivariatePolynomial, a: &Scalar, b: &Scalar) -> Result<bool> {
    Ok(count_roots(p, a, b)?.0 == 0)
}

/// Re-validates a nonvanishing proof: rebuilds the chain polynomials, checks
/// each is the Sturm successor of the previous two, and recounts the endpoint
/// values and sign changes.
pub fn check_proof(proof: &SturmProof) -> Result<bool> {
    let parse = |s: &str| crate::scalar::parse_scalar(s).map_err(Error::from);
    let p = UnivariatePolynomial::new(proof.polynomial.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?);
    let chain: Vec<UnivariatePolynomial> = proof
        .chain
        .iter()
        .map(|c| c.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>().map(UnivariatePolynomial::new))
        .collect::<Result<_>>()?;
    if chain.is_empty() || p.is_zero() || chain[0] != p.square_free() {
        return Ok(false);
    }
    if chain.len() > 1 && chain[1] != chain[0].derivative() {
        return Ok(false);
    }
    for w in chain.windows(3) {
        if w[2] != w[0].rem(&w[1]).scale(&-Scalar::one()) {
            return Ok(false);
        }
    }
    if chain.len() > 1 && !chain[chain.len() - 2].rem(&chain[chain.len() - 1]).is_zero() {
        return Ok(false);
    }
    let (a, b) = (parse(&proof.a)?, parse(&proof.b)?);
    let (va, vb) = (sign_changes(&chain, &a), sign_changes(&chain, &b));
    Ok(a <= b
        && render_scalar(&p.eval(&a)) == proof.value_at_a
        && render_scalar(&p.eval(&b)) == proof.value_at_b
        && (va, vb) == (proof.sign_changes_at_a, proof.sign_changes_at_b)
        && !p.eval(&a).is_zero()
        && !p.eval(&b).is_zero()
        && va == vb)
}

/// Polynomial in `nvars` variables, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Scalar>,
}

impl MultiPolynomial {
    pub fn zero(nvars: usize) -> Self {
        MultiPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u16>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exponents: Vec<u16>, c: Scalar) {
        assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars);
        let mut total = Scalar::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    v *= xi;
                }
                if v.is_zero() {
                    break;
                }
            }
            total += v;
        }
        total
    }

    /// `t ↦ p(base + t·direction)`.
    pub fn restrict_to_line(&self, base: &[Scalar], direction: &[Scalar]) -> UnivariatePolynomial {
        let lines: Vec<UnivariatePolynomial> = base
            .iter()
            .zip(direction)
            .map(|(b, d)| UnivariatePolynomial::new(vec![b.clone(), d.clone()]))
            .collect();
        let mut out = UnivariatePolynomial::zero();
        for (e, c) in &self.terms {
            let mut term = UnivariatePolynomial::constant(c.clone());
            for (line, &ei) in lines.iter().zip(e) {
                for _ in 0..ei {
                    term = term.mul(line);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Variables named `prefix1, prefix2, …`.
    pub fn render(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = sign(c) < 0;
            let mag = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &ei) in e.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => factors.push(format!("{prefix}{}", i + 1)),
                    _ => factors.push(format!("{prefix}{}^{ei}", i + 1)),
                }
            }
            if factors.is_empty() {
                out.push_str(&render_scalar(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&render_scalar(&mag));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}
