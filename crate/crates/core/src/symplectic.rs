//! Symplectic linear algebra on the Chevalley–Eilenberg complex.
//!
//! Sign conventions: the flat map is `μ₁(v) = -i(v)ω`, extended
//! multiplicatively to `μ_k` on k-vectors, and `*α = i(μ_k⁻¹ α) ω^m/m!`. With
//! these choices `*α = -α` on 1-forms and `*ω = 1` when `n = 2`. The bivector is
//! `Π = μ₂⁻¹(ω)` and the dual Lefschetz operator is `L* = *L*`, which agrees
//! with `i(Π)` and gives `[L*, L] = A`.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::cohomology::{cohomology, CohomologySpace};
use crate::error::{Error, Result};
use crate::exterior::{basis, contract, Form, MixedForm, Multivector, MultiIndex};
use crate::liespec::LieAlgebraSpec;
use crate::linalg::Matrix;
use crate::poly::MultiPolynomial;
use crate::scalar::{int, Scalar};

fn factorial(k: usize) -> Scalar {
    (1..=k as i64).fold(Scalar::one(), |acc, v| acc * int(v))
}

fn volume_index(n: usize) -> MultiIndex {
    MultiIndex::from_mask(((1u32 << n) - 1) as u16)
}

/// Coefficient of `α_1∧…∧α_n` in `ω^m/m!`.
pub fn pfaffian_coeff(omega: &Form) -> Result<Scalar> {
    let n = omega.n();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if omega.grade() != 2 {
        return Err(Error::Precondition(format!("pfaffian of a {}-form", omega.grade())));
    }
    let m = n / 2;
    Ok(omega.power(m).coeff(volume_index(n)) / factorial(m))
}

/// Matrix of the flat map `v ↦ -i(v)ω` (column `j` is the image of `e_j`).
pub fn flat_matrix(omega: &Form) -> Matrix {
    let n = omega.n();
    let mut w = Matrix::zeros(n, n);
    for (mi, c) in omega.terms() {
        let idx: Vec<usize> = mi.indices().collect();
        let (i, j) = (idx[0] - 1, idx[1] - 1);
        w[(i, j)] = c.clone();
        w[(j, i)] = -c.clone();
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBivector {
    pub pi: Multivector,
}

#[derive(Debug)]
pub struct SymplecticForm {
    spec: LieAlgebraSpec,
    omega: Form,
    m: usize,
    pf: Scalar,
    volume: Form,
    /// `μ₁⁻¹(α_j)` for `j = 1..n`.
    inverse_flat: Vec<Multivector>,
    pi: Multivector,
    star_cache: OnceLock<Vec<Matrix>>,
}

impl Clone for SymplecticForm {
    fn clone(&self) -> Self {
        SymplecticForm {
            spec: self.spec.clone(),
            omega: self.omega.clone(),
            m: self.m,
            pf: self.pf.clone(),
            volume: self.volume.clone(),
            inverse_flat: self.inverse_flat.clone(),
            pi: self.pi.clone(),
            star_cache: OnceLock::new(),
        }
    }
}

impl SymplecticForm {
    /// Checks closedness and nondegeneracy.
    pub fn new(spec: &LieAlgebraSpec, omega: Form) -> Result<Self> {
        let n = spec.n();
        if omega.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: omega.n() });
        }
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        if omega.grade() != 2 {
            return Err(Error::Precondition(format!("a symplectic form has grade 2, not {}", omega.grade())));
        }
        if !spec.d(&omega).is_zero() {
            return Err(Error::NotClosed);
        }
        let pf = pfaffian_coeff(&omega)?;
        if pf.is_zero() {
            return Err(Error::Degenerate);
        }
        let m = n / 2;
        let g = flat_matrix(&omega).inverse().ok_or(Error::Degenerate)?;
        let inverse_flat: Vec<Multivector> = (0..n)
            .map(|j| {
                let mut v = Multivector::zero(n, 1);
                for i in 0..n {
                    v.add_term(MultiIndex::single(i + 1), g[(i, j)].clone());
                }
                v
            })
            .collect();
        let mut pi = Multivector::zero(n, 2);
        for (mi, c) in omega.terms() {
            let idx: Vec<usize> = mi.indices().collect();
            let t = inverse_flat[idx[0] - 1].wedge(&inverse_flat[idx[1] - 1]).expect("same n");
            pi = &pi + &t.scale(c);
        }
        let volume = omega.power(m).scale(&(Scalar::one() / factorial(m)));
        Ok(SymplecticForm {
            spec: spec.clone(),
            omega,
            m,
            pf,
            volume,
            inverse_flat,
            pi,
            star_cache: OnceLock::new(),
        })
    }

    /// A symplectic form on the vector space `R^n` (zero differential).
    pub fn on_vector_space(omega: Form) -> Result<Self> {
        let zeros = vec!["0"; omega.n()].join(",");
        let spec = LieAlgebraSpec::parse(&format!("({zeros})"))?;
        Self::new(&spec, omega)
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn pf(&self) -> &Scalar {
        &self.pf
    }

    /// `ω^m/m!`.
    pub fn volume(&self) -> &Form {
        &self.volume
    }

    pub fn dual_bivector(&self) -> DualBivector {
        DualBivector { pi: self.pi.clone() }
    }

    /// `μ_k⁻¹(a)`.
    pub fn mu_inverse(&self, a: &Form) -> Multivector {
        let n = self.n();
        let mut out = Multivector::zero(n, a.grade());
        for (mi, c) in a.terms() {
            let mut v = Multivector::one(n);
            for j in mi.indices() {
                v = v.wedge(&self.inverse_flat[j - 1]).expect("same n");
            }
            out = &out + &v.scale(c);
        }
        out
    }

    /// `μ_k(x)`, extending `v ↦ -i(v)ω` multiplicatively.
    pub fn mu(&self, x: &Multivector) -> Form {
        let n = self.n();
        let flat: Vec<Form> = (1..=n)
            .map(|j| {
                let e = Multivector::basis_element(n, &[j]).expect("index in range");
                -&contract(&e, &self.omega).expect("same n")
            })
            .collect();
        let mut out = Form::zero(n, x.grade());
        for (mi, c) in x.terms() {
            let mut f = Form::one(n);
            for j in mi.indices() {
                f = f.wedge(&flat[j - 1]).expect("same n");
            }
            out = &out + &f.scale(c);
        }
        out
    }

    fn check(&self, a: &Form) -> Result<()> {
        if a.n() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: a.n() });
        }
        Ok(())
    }

    /// `*a = i(μ_k⁻¹ a) ω^m/m!`.
    pub fn star(&self, a: &Form) -> Result<Form> {
        self.check(a)?;
        let out = contract(&self.mu_inverse(a), &self.volume)?;
        if out.grade() != self.n() - a.grade() {
            return Ok(Form::zero(self.n(), self.n() - a.grade()));
        }
        Ok(out)
    }

    /// `L(a) = a ∧ ω`.
    pub fn lefschetz(&self, a: &Form) -> Result<Form> {
        self.check(a)?;
        a.wedge(&self.omega)
    }

    /// `L*(a) = *L*a`.
    pub fn lefschetz_dual(&self, a: &Form) -> Result<Form> {
        if a.grade() < 2 {
            self.check(a)?;
            return Ok(Form::zero(self.n(), 0));
        }
        self.star(&self.lefschetz(&self.star(a)?)?)
    }

    /// `i(Π)a`, the second route to `L*`.
    pub fn contract_pi(&self, a: &Form) -> Result<Form> {
        self.check(a)?;
        if a.grade() < 2 {
            return Ok(Form::zero(self.n(), 0));
        }
        contract(&self.pi, a)
    }

    /// `δa = (-1)^{k+1} *d*a`.
    pub fn delta(&self, a: &Form) -> Result<Form> {
        self.check(a)?;
        if a.grade() == 0 {
            return Ok(Form::zero(self.n(), 0));
        }
        let v = self.star(&self.spec.d(&self.star(a)?))?;
        Ok(if a.grade() % 2 == 1 { v } else { -&v })
    }

    /// `[i(Π), d]a = i(Π)da - d i(Π)a`.
    pub fn pi_d_bracket(&self, a: &Form) -> Result<Form> {
        self.check(a)?;
        if a.grade() == 0 {
            return Ok(Form::zero(self.n(), 0));
        }
        let first = self.contract_pi(&self.spec.d(a))?;
        let second = if a.grade() >= 2 {
            self.spec.d(&self.contract_pi(a)?)
        } else {
            Form::zero(self.n(), a.grade() - 1)
        };
        Ok(&first - &second)
    }

    /// Matrices of `*` on each `Λ^k`, computed once and shared.
    pub fn star_matrices(&self) -> &[Matrix] {
        self.star_cache.get_or_init(|| {
            let n = self.n();
            (0..=n).map(|k| self.operator_matrix(k, n - k, |a| self.star(a))).collect()
        })
    }

    /// Matrix of a linear operator `Λ^k → Λ^target` in the lexicographic bases.
    pub fn operator_matrix(&self, k: usize, target: usize, op: impl Fn(&Form) -> Result<Form>) -> Matrix {
        let n = self.n();
        let b = basis(n);
        let cols: Vec<Vec<Scalar>> = b
            .grade(k)
            .iter()
            .map(|mi| {
                let e = Form::monomial(n, *mi, Scalar::one()).expect("basis element");
                let img = op(&e).expect("operator defined on basis");
                if img.is_zero() {
                    vec![Scalar::zero(); b.dim(target)]
                } else {
                    assert_eq!(img.grade(), target);
                    img.to_vector()
                }
            })
            .collect();
        Matrix::from_columns(&cols, b.dim(target))
    }
}

/// `A = Σ (m-k) π_k`.
pub fn operator_a(m: usize, a: &MixedForm) -> MixedForm {
    a.map(|c| c.scale(&int(m as i64 - c.grade() as i64)))
}

/// Closed 2-forms coordinatized over a basis of `Z²`, with the Pfaffian as a
/// homogeneous polynomial in those coordinates.
#[derive(Clone, Debug)]
pub struct SymplecticConeDescription {
    /// `H²` representatives first, then a basis of exact 2-forms.
    pub z2_basis: Vec<Form>,
    pub class_count: usize,
    pub pfaffian: MultiPolynomial,
}

impl SymplecticConeDescription {
    pub fn dim(&self) -> usize {
        self.z2_basis.len()
    }

    pub fn form_at(&self, coords: &[Scalar]) -> Result<Form> {
        if coords.len() != self.dim() {
            return Err(Error::Parse(crate::error::ParseError::CoordinateCount {
                expected: self.dim(),
                got: coords.len(),
            }));
        }
        let n = self.z2_basis.first().map_or(0, Form::n);
        let mut out = Form::zero(n, 2);
        for (z, c) in self.z2_basis.iter().zip(coords) {
            if !c.is_zero() {
                out = &out + &z.scale(c);
            }
        }
        Ok(out)
    }

    /// Coordinates of a closed 2-form over the `Z²` basis.
    pub fn coords_of(&self, omega: &Form) -> Result<Vec<Scalar>> {
        if omega.grade() != 2 {
            return Err(Error::Precondition("coordinates of a non-2-form".into()));
        }
        let cols: Vec<Vec<Scalar>> = self.z2_basis.iter().map(Form::to_vector).collect();
        let m = Matrix::from_columns(&cols, omega.to_vector().len());
        m.solve(&omega.to_vector()).ok_or(Error::NotClosed)
    }

    pub fn pf_at(&self, coords: &[Scalar]) -> Scalar {
        self.pfaffian.eval(coords)
    }
}

/// Builds the `Z²` basis and expands the Pfaffian symbolically.
pub fn symplectic_cone(h: &CohomologySpace) -> Result<SymplecticConeDescription> {
    let n = h.n();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let m = n / 2;
    let mut z2_basis: Vec<Form> = h.representatives(2).to_vec();
    let class_count = z2_basis.len();
    z2_basis.extend(h.coboundaries(2).iter().map(|v| Form::from_vector(n, 2, v)));
    let d = z2_basis.len();
    let vol = volume_index(n);
    let mut pfaffian = MultiPolynomial::zero(d);
    // multisets i1 <= i2 <= … <= im with the running wedge product
    fn expand(
        z: &[Form],
        m: usize,
        vol: MultiIndex,
        start: usize,
        chosen: &mut Vec<usize>,
        prefix: &Form,
        out: &mut MultiPolynomial,
    ) {
        if chosen.len() == m {
            let c = prefix.coeff(vol);
            if c.is_zero() {
                return;
            }
            let mut exps = vec![0u16; z.len()];
            for &i in chosen.iter() {
                exps[i] += 1;
            }
            let denom = exps.iter().fold(Scalar::one(), |acc, &e| acc * factorial(e as usize));
            out.add_term(exps, c / denom);
            return;
        }
        for i in start..z.len() {
            let next = prefix.wedge(&z[i]).expect("same n");
            if next.is_zero() {
                continue;
            }
            chosen.push(i);
            expand(z, m, vol, i, chosen, &next, out);
            chosen.pop();
        }
    }
    if m > 0 {
        expand(&z2_basis, m, vol, 0, &mut Vec::new(), &Form::one(n), &mut pfaffian);
    }
    Ok(SymplecticConeDescription { z2_basis, class_count, pfaffian })
}

#[derive(Clone, Debug)]
pub struct Witness {
    /// Coordinates over the `Z²` basis.
    pub coords: Vec<Scalar>,
    pub omega: Form,
    pub pf: Scalar,
}

#[derive(Clone, Debug)]
pub enum Existence {
    Yes(Witness),
    /// The Pfaffian polynomial over `Z²` is identically zero.
    No { z2_dim: usize },
}

impl Existence {
    pub fn is_yes(&self) -> bool {
        matches!(self, Existence::Yes(_))
    }
}

/// Small-integer witness search over the cone coordinates: supports of
/// increasing size, entries in `{1, -1, 2, -2}`. A nonzero polynomial of degree
/// `m ≤ 4` cannot vanish on all of `{-2, …, 2}^d`, so the search terminates.
pub fn find_witness(cone: &SymplecticConeDescription) -> Option<Vec<Scalar>> {
    if cone.pfaffian.is_zero() {
        return None;
    }
    let d = cone.dim();
    let values = [int(1), int(-1), int(2), int(-2)];
    for size in 1..=d {
        let mut support: Vec<usize> = (0..size).collect();
        loop {
            let mut choice = vec![0usize; size];
            loop {
                let mut x = vec![Scalar::zero(); d];
                for (s, c) in support.iter().zip(&choice) {
                    x[*s] = values[*c].clone();
                }
                if !cone.pf_at(&x).is_zero() {
                    return Some(x);
                }
                if !next_tuple(&mut choice, values.len()) {
                    break;
                }
            }
            if !next_subset(&mut support, d) {
                break;
            }
        }
    }
    None
}

/// Advances a base-`base` counter; `false` after the last tuple.
pub(crate) fn next_tuple(digits: &mut [usize], base: usize) -> bool {
    for v in digits.iter_mut().rev() {
        *v += 1;
        if *v < base {
            return true;
        }
        *v = 0;
    }
    false
}

/// Advances a strictly increasing index tuple in `0..d` lexicographically.
pub(crate) fn next_subset(support: &mut [usize], d: usize) -> bool {
    let size = support.len();
    for i in (0..size).rev() {
        if support[i] < d - size + i {
            support[i] += 1;
            for j in i + 1..size {
                support[j] = support[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn symplectic_existence_in(h: &CohomologySpace) -> Result<(SymplecticConeDescription, Existence)> {
    let cone = symplectic_cone(h)?;
    let decision = match find_witness(&cone) {
        Some(coords) => {
            let omega = cone.form_at(&coords)?;
            let pf = pfaffian_coeff(&omega)?;
            Existence::Yes(Witness { coords, omega, pf })
        }
        None => Existence::No { z2_dim: cone.dim() },
    };
    Ok((cone, decision))
}

pub fn symplectic_existence(spec: &LieAlgebraSpec) -> Result<Existence> {
    Ok(symplectic_existence_in(&cohomology(spec))?.1)
}

/// `dim Z²`, the dimension of the space of closed invariant 2-forms.
pub fn moduli_dimension(spec: &LieAlgebraSpec) -> Result<usize> {
    let h = cohomology(spec);
    let (cone, decision) = symplectic_existence_in(&h)?;
    match decision {
        Existence::Yes(_) => Ok(cone.dim()),
        Existence::No { .. } => Err(Error::NotSymplectic),
    }
}
