//! Chevalley–Eilenberg cohomology with explicit representatives.
//!
//! In each degree the coboundaries `B^k` are put in reduced echelon form. A
//! cocycle's normal form subtracts the coboundary echelon rows at their pivot
//! columns; the representatives of `H^k` are the reduced echelon rows of the
//! normal forms of a cocycle basis. Reduction of a closed form to coordinates is
//! then a fixed linear map: take the normal form and read off the entries at the
//! representatives' pivot columns.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{basis, Form};
use crate::liespec::{differential, CEDifferential, LieAlgebraSpec};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
struct Degree {
    representatives: Vec<Form>,
    /// `b_k × dim Λ^k`; valid on closed forms.
    reduction: Matrix,
    cocycles: Vec<Vec<Scalar>>,
    coboundaries: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct CohomologySpace {
    spec: LieAlgebraSpec,
    d: CEDifferential,
    degrees: Vec<Degree>,
}

pub fn cohomology(spec: &LieAlgebraSpec) -> CohomologySpace {
    let n = spec.n();
    let d = differential(spec);
    let b = basis(n);
    let degrees = (0..=n)
        .map(|k| {
            let dim = b.dim(k);
            let cocycles = d.matrix(k).kernel();
            let (coboundaries, cob_pivots) = if k == 0 {
                (Vec::new(), Vec::new())
            } else {
                let (r, piv) = d.matrix(k - 1).transpose().rref();
                ((0..piv.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>(), piv)
            };
            let normal_form = |z: &[Scalar]| -> Vec<Scalar> {
                let mut w = z.to_vec();
                for (row, &p) in coboundaries.iter().zip(&cob_pivots) {
                    let f = z[p].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for (wi, ri) in w.iter_mut().zip(row) {
                        if !ri.is_zero() {
                            *wi -= &f * ri;
                        }
                    }
                }
                w
            };
            let normal: Vec<Vec<Scalar>> = cocycles.iter().map(|z| normal_form(z)).collect();
            let (reps, rep_pivots) = if normal.is_empty() {
                (Vec::new(), Vec::new())
            } else {
                let (r, piv) = Matrix::from_rows_with_cols(&normal, dim).rref();
                ((0..piv.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>(), piv)
            };
            // reduction(z)_i = nf(z)[q_i] = z[q_i] - Σ_p z[p] B_p[q_i]
            let mut reduction = Matrix::zeros(reps.len(), dim);
            for (i, &q) in rep_pivots.iter().enumerate() {
                reduction[(i, q)] += Scalar::from_integer(1.into());
                for (row, &p) in coboundaries.iter().zip(&cob_pivots) {
                    if !row[q].is_zero() {
                        reduction[(i, p)] -= row[q].clone();
                    }
                }
            }
            Degree {
                representatives: reps.iter().map(|v| Form::from_vector(n, k, v)).collect(),
                reduction,
                cocycles,
                coboundaries,
            }
        })
        .collect();
    CohomologySpace {
        spec: spec.clone(),
        d,
        degrees,
    }
}

impl CohomologySpace {
    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn differential(&self) -> &CEDifferential {
        &self.d
    }

    pub fn betti(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.representatives.len())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.n()).map(|k| self.betti(k)).collect()
    }

    pub fn representatives(&self, k: usize) -> &[Form] {
        self.degrees.get(k).map_or(&[], |d| d.representatives.as_slice())
    }

    /// Basis of closed forms `Z^k` as coordinate vectors.
    pub fn cocycles(&self, k: usize) -> &[Vec<Scalar>] {
        &self.degrees[k].cocycles
    }

    /// Basis of exact forms `B^k` (reduced echelon rows).
    pub fn coboundaries(&self, k: usize) -> &[Vec<Scalar>] {
        &self.degrees[k].coboundaries
    }

    pub fn reduction_matrix(&self, k: usize) -> &Matrix {
        &self.degrees[k].reduction
    }

    pub fn is_closed(&self, a: &Form) -> bool {
        self.spec.d(a).is_zero()
    }

    /// Coordinates of the class of a closed form.
    pub fn reduce(&self, a: &Form) -> Result<Vec<Scalar>> {
        if a.n() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: a.n() });
        }
        if a.grade() > self.n() {
            return Ok(Vec::new());
        }
        if !self.is_closed(a) {
            return Err(Error::NotClosed);
        }
        Ok(self.degrees[a.grade()].reduction.apply(&a.to_vector()))
    }

    /// The representative form with the given class coordinates.
    pub fn form_from_coords(&self, k: usize, coords: &[Scalar]) -> Result<Form> {
        let reps = self.representatives(k);
        if coords.len() != reps.len() {
            return Err(Error::Parse(crate::error::ParseError::CoordinateCount {
                expected: reps.len(),
                got: coords.len(),
            }));
        }
        let mut out = Form::zero(self.n(), k);
        for (r, c) in reps.iter().zip(coords) {
            if !c.is_zero() {
                out = &out + &r.scale(c);
            }
        }
        Ok(out)
    }

    /// `Σ (-1)^k b_k`.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.n())
            .map(|k| if k % 2 == 0 { self.betti(k) as i64 } else { -(self.betti(k) as i64) })
            .sum()
    }

    /// For six-dimensional algebras: `b_3 = 2(b_2 - b_1 + 1)` and vanishing Euler
    /// characteristic.
    pub fn euler_check(&self) -> Result<bool> {
        if self.n() != 6 {
            return Err(Error::WrongDimension { expected: 6, got: self.n() });
        }
        let (b1, b2, b3) = (self.betti(1) as i64, self.betti(2) as i64, self.betti(3) as i64);
        Ok(b3 == 2 * (b2 - b1 + 1) && self.euler_characteristic() == 0)
    }

    /// Matrix of `x ↦ x ∧ [c]^r` from `H^k` to `H^{k+2r}`.
    pub fn cup_matrix(&self, c: &Form, k: usize, r: usize) -> Result<CupMatrix> {
        if c.n() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: c.n() });
        }
        if c.grade() != 2 {
            return Err(Error::Precondition(format!("cup by a {}-form", c.grade())));
        }
        if !self.is_closed(c) {
            return Err(Error::NotClosed);
        }
        let target = k + 2 * r;
        let rows = self.betti(target);
        let power = c.power(r);
        let cols: Vec<Vec<Scalar>> = self
            .representatives(k)
            .iter()
            .map(|x| {
                if rows == 0 {
                    return Vec::new();
                }
                let y = x.wedge(&power).expect("same dimension");
                self.degrees[target].reduction.apply(&y.to_vector())
            })
            .collect();
        Ok(CupMatrix {
            source: k,
            target,
            matrix: Matrix::from_columns(&cols, rows),
        })
    }

    /// Cup matrices `H^k → H^{k+2}` of the `H^2` basis classes, one per class.
    pub fn class_cup_matrices(&self, k: usize) -> Vec<Matrix> {
        self.representatives(2)
            .iter()
            .map(|c| self.cup_matrix(c, k, 1).expect("representatives are closed").matrix)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupMatrix {
    pub source: usize,
    pub target: usize,
    /// `b_target × b_source`; column `j` holds the image of the `j`-th basis class.
    pub matrix: Matrix,
}
