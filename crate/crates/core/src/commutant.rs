//! The lattice of integer matrices commuting with a matrix `C ∈ M(3,Z)`,
//! normalized to a basis `(E, A, B)`, and the rational coordinates of `B` in
//! the powers of `A`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::IntMatrix;
use crate::error::{Error, Result};
use crate::lattice::{self, IntVec};

/// Basis `(E, A, B)` of the commutant lattice of `c`, with
/// `B = alpha·A² + beta·A + gamma·E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantBasis {
    pub c: IntMatrix,
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
}

fn to_vec(m: &IntMatrix) -> IntVec {
    m.entries().to_vec()
}

fn from_vec(dim: usize, v: IntVec) -> IntMatrix {
    IntMatrix::new(dim, v).expect("vector length matches dimension")
}

/// Z-basis (Hermite normal form) of `{X integer : XC = CX}`.
///
/// The basis comes from the integer kernel of the commutator map
/// `X ↦ XC - CX`, which is already saturated, so no separate intersection
/// with `Z^(k²)` is needed.
pub fn commutant_lattice(c: &IntMatrix) -> Result<Vec<IntMatrix>> {
    let k = c.dim();
    if !c.is_irreducible() {
        return Err(Error::NotInM(k));
    }
    let n = k * k;
    let mut rows = Vec::with_capacity(n);
    for i in 0..k {
        for j in 0..k {
            let mut row = vec![BigInt::zero(); n];
            for l in 0..k {
                row[i * k + l] += c.get(l, j);
                row[l * k + j] -= c.get(i, l);
            }
            rows.push(row);
        }
    }
    let kernel = lattice::integer_kernel(&rows, n);
    if kernel.len() != k {
        return Err(Error::IntegralityViolated(format!("commutant of an M({k},Z) matrix has rank {}", kernel.len())));
    }
    Ok(kernel.into_iter().map(|v| from_vec(k, v)).collect())
}

/// Re-bases a rank-3 commutant basis as `(E, A, B)`.
///
/// Every element splits uniquely as `x₀₀·E + X₀` with `X₀` in the sublattice
/// of elements whose top-left entry is zero; `(A, B)` is the Hermite basis of
/// that sublattice, which makes the choice deterministic.
pub fn normalize_basis(raw: &[IntMatrix], c: &IntMatrix) -> Result<CommutantBasis> {
    if c.dim() != 3 {
        return Err(Error::Dimension(c.dim()));
    }
    if raw.len() != 3 || raw.iter().any(|m| m.dim() != 3) {
        return Err(Error::InvalidBasis("expected three 3x3 matrices".into()));
    }
    if let Some(bad) = raw.iter().find(|m| !m.commutes_with(c)) {
        return Err(Error::InvalidBasis(format!("{bad} does not commute with {c}")));
    }
    let vecs: Vec<IntVec> = raw.iter().map(to_vec).collect();
    if lattice::hnf(vecs.clone()).len() != 3 {
        return Err(Error::InvalidBasis("matrices are linearly dependent".into()));
    }
    let e = IntMatrix::identity(3);
    if lattice::integer_coordinates(&vecs, e.entries()).is_none() {
        return Err(Error::InvalidBasis("identity is not in the integer span".into()));
    }
    let projected: Vec<IntVec> =
        raw.iter().map(|m| to_vec(&m.sub(&IntMatrix::scalar(3, m.get(0, 0).clone())))).collect();
    let reduced = lattice::hnf(projected);
    debug_assert_eq!(reduced.len(), 2);
    let mut it = reduced.into_iter();
    let a = from_vec(3, it.next().expect("rank 2"));
    let b = from_vec(3, it.next().expect("rank 2"));
    CommutantBasis::from_parts(c.clone(), a, b)
}

/// Exact rationals `(α, β, γ)` with `B = αA² + βA + γE`.
pub fn express_in_powers(a: &IntMatrix, b: &IntMatrix) -> Result<(BigRational, BigRational, BigRational)> {
    if a.dim() != 3 || b.dim() != 3 {
        return Err(Error::Dimension(if a.dim() != 3 { a.dim() } else { b.dim() }));
    }
    let q = |m: &IntMatrix| m.entries().iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>();
    let cols = [q(&a.mul(a)), q(a), q(&IntMatrix::identity(3))];
    let sol = lattice::solve_rational(&cols, &q(b)).ok_or(Error::NotCommutantMember)?;
    Ok((sol[0].clone(), sol[1].clone(), sol[2].clone()))
}

/// `αA² + βA + γE` as a rational matrix, compared entrywise against `target`.
fn reconstructs(
    a: &IntMatrix,
    alpha: &BigRational,
    beta: &BigRational,
    gamma: &BigRational,
    target: &IntMatrix,
) -> bool {
    let a2 = a.mul(a);
    (0..3).all(|i| {
        (0..3).all(|j| {
            let mut v = alpha * BigRational::from_integer(a2.get(i, j).clone())
                + beta * BigRational::from_integer(a.get(i, j).clone());
            if i == j {
                v += gamma;
            }
            v == BigRational::from_integer(target.get(i, j).clone())
        })
    })
}

impl CommutantBasis {
    /// Normalized basis of the commutant lattice of `c`.
    pub fn of(c: &IntMatrix) -> Result<Self> {
        normalize_basis(&commutant_lattice(c)?, c)
    }

    fn from_parts(c: IntMatrix, a: IntMatrix, b: IntMatrix) -> Result<Self> {
        let (alpha, beta, gamma) = express_in_powers(&a, &b)?;
        debug_assert!(reconstructs(&a, &alpha, &beta, &gamma, &b));
        Ok(Self { c, a, b, alpha, beta, gamma })
    }

    /// Caller-chosen `(A, B)`, checked to form a basis `(E, A, B)` of the
    /// commutant lattice of `c`.
    pub fn with_basis(c: &IntMatrix, a: IntMatrix, b: IntMatrix) -> Result<Self> {
        let lattice_basis: Vec<IntVec> = commutant_lattice(c)?.iter().map(to_vec).collect();
        let proposed = vec![to_vec(&IntMatrix::identity(3)), to_vec(&a), to_vec(&b)];
        if lattice::hnf(proposed) != lattice::hnf(lattice_basis) {
            return Err(Error::InvalidBasis("(E, A, B) does not span the commutant lattice".into()));
        }
        Self::from_parts(c.clone(), a, b)
    }

    pub fn e(&self) -> IntMatrix {
        IntMatrix::identity(3)
    }

    pub fn elements(&self) -> [IntMatrix; 3] {
        [self.e(), self.a.clone(), self.b.clone()]
    }

    /// Integer coordinates of `x` in `(E, A, B)`, if `x` is in the lattice.
    pub fn coordinates(&self, x: &IntMatrix) -> Option<[BigInt; 3]> {
        let rows: Vec<IntVec> = self.elements().iter().map(to_vec).collect();
        let v = lattice::integer_coordinates(&rows, x.entries())?;
        Some([v[0].clone(), v[1].clone(), v[2].clone()])
    }

    /// `x·E + m·A + n·B`.
    pub fn combine(&self, x: &BigInt, m: &BigInt, n: &BigInt) -> IntMatrix {
        IntMatrix::scalar(3, x.clone()).add(&self.a.scale(m)).add(&self.b.scale(n))
    }

    /// Index of `Z{E, C, C²}` in the commutant lattice.
    pub fn index_of_powers(&self) -> BigInt {
        let c = &self.c;
        let rows: Vec<IntVec> = [IntMatrix::identity(3), c.clone(), c.mul(c)]
            .iter()
            .map(|m| self.coordinates(m).expect("powers of C commute with C").to_vec())
            .collect();
        lattice::det(&rows).abs()
    }

    pub fn reconstructs_b(&self) -> bool {
        reconstructs(&self.a, &self.alpha, &self.beta, &self.gamma, &self.b)
    }

    /// Same lattice, generators `(A, B)` replaced by a unimodular
    /// re-combination `(p·A + q·B + s·E, r·A + t·B + u·E)` with `pt - qr = ±1`.
    pub fn rebased(&self, new_a: IntMatrix, new_b: IntMatrix) -> Result<Self> {
        Self::with_basis(&self.c, new_a, new_b)
    }
}

#[derive(Serialize)]
pub struct CommutantSummary {
    pub matrix: IntMatrix,
    pub basis: [IntMatrix; 3],
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub index_of_powers: String,
}

impl From<&CommutantBasis> for CommutantSummary {
    fn from(b: &CommutantBasis) -> Self {
        use crate::arith::rational_to_string as s;
        Self {
            matrix: b.c.clone(),
            basis: b.elements(),
            alpha: s(&b.alpha),
            beta: s(&b.beta),
            gamma: s(&b.gamma),
            index_of_powers: b.index_of_powers().to_string(),
        }
    }
}

/// Second generator for the non-Frobenius example:
/// `B = (A² - 30A + 29E) / 2`.
pub fn counterexample_basis() -> CommutantBasis {
    let a = IntMatrix::from_rows([[1, 2, 0], [0, 1, 2], [-7, 0, 29]]);
    let twice_b = a.mul(&a).sub(&a.scale(&30.into())).add(&IntMatrix::scalar(3, 29.into()));
    let b = IntMatrix::new(3, twice_b.entries().iter().map(|v| v / 2).collect()).expect("3x3");
    debug_assert!(twice_b.entries().iter().all(|v| v.is_even()));
    CommutantBasis::with_basis(&a, a.clone(), b).expect("known basis of the example")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn golden() -> IntMatrix {
        IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]])
    }

    fn counterexample() -> IntMatrix {
        IntMatrix::from_rows([[1, 2, 0], [0, 1, 2], [-7, 0, 29]])
    }

    /// Brute force: integer matrices with entries in [-2, 2] commuting with
    /// `c`, each must be an integer combination of the lattice basis.
    #[test]
    fn lattice_contains_small_commuting_matrices() {
        let c = golden();
        let basis = CommutantBasis::of(&c).unwrap();
        let mut found = 0;
        let mut v = [-2i64; 9];
        loop {
            let x = IntMatrix::from_i64(3, &v).unwrap();
            if x.commutes_with(&c) {
                found += 1;
                assert!(basis.coordinates(&x).is_some(), "{x} missing from lattice");
            }
            let mut i = 0;
            while i < 9 {
                v[i] += 1;
                if v[i] <= 2 {
                    break;
                }
                v[i] = -2;
                i += 1;
            }
            if i == 9 {
                break;
            }
        }
        assert!(found > 3);
    }

    #[test]
    fn golden_ratio_basis_is_powers() {
        let c = golden();
        let basis = CommutantBasis::of(&c).unwrap();
        assert_eq!(basis.a, c);
        assert_eq!(basis.b, c.mul(&c));
        assert_eq!(basis.index_of_powers(), 1.into());
        assert_eq!((basis.alpha.clone(), basis.beta.clone(), basis.gamma.clone()), (rat(1, 1), rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn normalization_recovers_identity() {
        let c = golden();
        let e = IntMatrix::identity(3);
        let raw = vec![e.scale(&2.into()).add(&c.scale(&3.into())), e.add(&c), c.mul(&c).add(&e)];
        let basis = normalize_basis(&raw, &c).unwrap();
        let from_raw = lattice::hnf(raw.iter().map(to_vec).collect());
        let from_basis = lattice::hnf(basis.elements().iter().map(to_vec).collect());
        assert_eq!(from_raw, from_basis);
        assert_eq!(basis.e(), e);
    }

    #[test]
    fn counterexample_lattice() {
        let a = counterexample();
        let lat = commutant_lattice(&a).unwrap();
        assert_eq!(lat.len(), 3);
        let known = counterexample_basis();
        assert_eq!(
            (known.alpha.clone(), known.beta.clone(), known.gamma.clone()),
            (rat(1, 2), rat(-15, 1), rat(29, 2))
        );
        let normalized = CommutantBasis::of(&a).unwrap();
        assert!(normalized.coordinates(&known.b).is_some());
        assert_eq!(normalized.index_of_powers(), 2.into());
        assert!(normalized.reconstructs_b());
    }

    #[test]
    fn express_in_powers_examples() {
        let a = counterexample();
        assert_eq!(express_in_powers(&a, &a).unwrap(), (rat(0, 1), rat(1, 1), rat(0, 1)));
        assert_eq!(express_in_powers(&a, &IntMatrix::identity(3)).unwrap(), (rat(0, 1), rat(0, 1), rat(1, 1)));
        // not in span{E, A, A^2}
        let stray = IntMatrix::from_rows([[0, 0, 0], [1, 0, 0], [0, 0, 0]]);
        assert_eq!(express_in_powers(&a, &stray), Err(Error::NotCommutantMember));
    }

    #[test]
    fn reducible_input_rejected() {
        assert_eq!(commutant_lattice(&IntMatrix::identity(3)), Err(Error::NotInM(3)));
    }

    #[test]
    fn two_by_two_commutant() {
        let c = IntMatrix::from_rows([[1, 2], [2, 3]]);
        let lat = commutant_lattice(&c).unwrap();
        assert_eq!(lat.len(), 2);
        for m in &lat {
            assert!(m.commutes_with(&c));
        }
    }

    #[test]
    fn with_basis_rejects_sublattice() {
        let c = golden();
        let err = CommutantBasis::with_basis(&c, c.scale(&2.into()), c.mul(&c));
        assert!(matches!(err, Err(Error::InvalidBasis(_))));
    }
}
