//! Small dense integer matrices (2×2 and 3×3) with exact entries, along with
//! the predicates that sort them into `M(k,Z)` (irreducible characteristic
//! polynomial) and `H(k,Z)` (irreducible with real, distinct eigenvalues).
//!
//! Nothing in this module touches floating point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Square integer matrix of dimension 2 or 3, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Dimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(Error::Parse(format!("{} entries do not form a {dim}x{dim} matrix", entries.len())));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_i64(dim: usize, entries: &[i64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Panics unless `N` is 2 or 3; intended for literals in code and tests.
    pub fn from_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_i64(N, &flat).expect("literal matrix must be 2x2 or 3x3")
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, BigInt::one())
    }

    pub fn zero(dim: usize) -> Self {
        Self::scalar(dim, BigInt::zero())
    }

    pub fn scalar(dim: usize, value: BigInt) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = value.clone();
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Entries as `i64` if every one fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|v| v.to_i64()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Self { dim: n, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix sum dimension mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix difference dimension mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { dim: self.dim, entries }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|v| v * factor).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|v| -v).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        Self { dim: n, entries }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> BigInt {
        match self.dim {
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            _ => {
                let m = |i, j| self.get(i, j);
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
        }
    }

    /// Signed complementary minor of entry `(i, j)`: `(-1)^(i+j)` times the
    /// determinant of the matrix with row `i` and column `j` removed.
    pub fn cofactor(&self, i: usize, j: usize) -> BigInt {
        let n = self.dim;
        let sign = if (i + j).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        if n == 2 {
            return sign * self.get(1 - i, 1 - j);
        }
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = self.get(rows[0], cols[0]) * self.get(rows[1], cols[1])
            - self.get(rows[0], cols[1]) * self.get(rows[1], cols[0]);
        sign * minor
    }

    /// Classical adjoint: entry `(i, j)` is the cofactor of `(j, i)`, so that
    /// `M · adj(M) = adj(M) · M = det(M) · E`.
    pub fn adjugate(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.cofactor(j, i));
            }
        }
        Self { dim: n, entries }
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn unimodular_inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_one() {
            Some(self.adjugate())
        } else if (-&det).is_one() {
            Some(self.adjugate().neg())
        } else {
            None
        }
    }

    /// Sum of absolute values of all entries.
    pub fn norm(&self) -> BigInt {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.dim == other.dim && self.mul(other) == other.mul(self)
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| if i == j { self.get(i, j) == self.get(0, 0) } else { self.get(i, j).is_zero() }))
    }

    /// Coefficients `c0..=ck` (low to high) of the monic `det(xE - M)`.
    pub fn char_poly_monic(&self) -> Vec<BigInt> {
        match self.dim {
            2 => vec![self.det(), -self.trace(), BigInt::one()],
            _ => {
                let c = self.char_cubic_unchecked();
                vec![-c.a3, c.a2, -c.a1, BigInt::one()]
            }
        }
    }

    pub fn char_cubic(&self) -> Result<CharCubic> {
        if self.dim != 3 {
            return Err(Error::Dimension(self.dim));
        }
        Ok(self.char_cubic_unchecked())
    }

    fn char_cubic_unchecked(&self) -> CharCubic {
        let principal = |i: usize, j: usize| self.get(i, i) * self.get(j, j) - self.get(i, j) * self.get(j, i);
        CharCubic { a1: self.trace(), a2: principal(0, 1) + principal(0, 2) + principal(1, 2), a3: self.det() }
    }

    /// Discriminant of the characteristic polynomial.
    pub fn char_discriminant(&self) -> BigInt {
        poly_discriminant(&self.char_poly_monic())
    }

    /// True iff the characteristic polynomial has no rational root, which for
    /// degrees 2 and 3 is irreducibility over Q.
    pub fn is_irreducible(&self) -> bool {
        !has_integer_root(&self.char_poly_monic())
    }

    /// Irreducible with all eigenvalues real (and then necessarily distinct).
    pub fn is_hyperbolic(&self) -> bool {
        self.is_irreducible() && self.char_discriminant().is_positive()
    }

    /// Rows separated by `;`, entries by `,`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = s
            .trim()
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|v| v.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad entry {:?}", v.trim()))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("matrix {s:?} is not square")));
        }
        IntMatrix::new(n, rows.into_iter().flatten().collect())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Characteristic polynomial of a 3×3 matrix in the convention
/// `χ(x) = -x³ + a1·x² - a2·x + a3`: `a1` is the trace, `a2` the sum of the
/// principal 2×2 minors, `a3` the determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharCubic {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
}

impl CharCubic {
    pub fn new(a1: i64, a2: i64, a3: i64) -> Self {
        Self { a1: a1.into(), a2: a2.into(), a3: a3.into() }
    }

    /// `χ(x) = -x³ + a1·x² - a2·x + a3`.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        -(x * x * x) + &self.a1 * x * x - &self.a2 * x + &self.a3
    }

    /// Low-to-high coefficients of the monic polynomial `-χ(x)`.
    pub fn monic(&self) -> [BigInt; 4] {
        [-self.a3.clone(), self.a2.clone(), -self.a1.clone(), BigInt::one()]
    }

    pub fn discriminant(&self) -> BigInt {
        poly_discriminant(&self.monic())
    }
}

/// Discriminant of a monic quadratic or cubic given low-to-high coefficients.
pub fn poly_discriminant(coeffs: &[BigInt]) -> BigInt {
    match coeffs.len() {
        3 => &coeffs[1] * &coeffs[1] - BigInt::from(4) * &coeffs[0],
        4 => {
            let (d, c, b) = (&coeffs[0], &coeffs[1], &coeffs[2]);
            b * b * c * c - BigInt::from(4) * c * c * c - BigInt::from(4) * b * b * b * d - BigInt::from(27) * d * d
                + BigInt::from(18) * b * c * d
        }
        n => panic!("discriminant of degree {} polynomial is not supported", n - 1),
    }
}

fn eval_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Rational-root test for a monic integer polynomial: any rational root is an
/// integer dividing the constant term.
fn has_integer_root(coeffs: &[BigInt]) -> bool {
    let constant = &coeffs[0];
    if constant.is_zero() {
        return true;
    }
    divisors(&constant.abs()).into_iter().any(|d| eval_poly(coeffs, &d).is_zero() || eval_poly(coeffs, &-d).is_zero())
}

/// Positive divisors of `n > 0` by trial division.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            let q = n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `p/q` with `q > 0`, or just `p` for integers.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_str(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counterexample() -> IntMatrix {
        IntMatrix::from_rows([[1, 2, 0], [0, 1, 2], [-7, 0, 29]])
    }

    /// Independent oracle: det(M - xE) by cofactor expansion on a polynomial
    /// matrix, coefficients low to high.
    fn det_m_minus_x(m: &IntMatrix) -> Vec<BigInt> {
        type P = Vec<BigInt>;
        let entry = |i: usize, j: usize| -> P {
            let mut p = vec![m.get(i, j).clone(), BigInt::zero()];
            if i == j {
                p[1] = -BigInt::one();
            }
            p
        };
        let mul = |a: &P, b: &P| -> P {
            let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let add = |a: &P, b: &P, sign: i64| -> P {
            let n = a.len().max(b.len());
            (0..n)
                .map(|k| a.get(k).cloned().unwrap_or_default() + b.get(k).cloned().unwrap_or_default() * sign)
                .collect()
        };
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| -> P {
            add(&mul(&entry(r0, c0), &entry(r1, c1)), &mul(&entry(r0, c1), &entry(r1, c0)), -1)
        };
        let t0 = mul(&entry(0, 0), &minor(1, 2, 1, 2));
        let t1 = mul(&entry(0, 1), &minor(1, 2, 0, 2));
        let t2 = mul(&entry(0, 2), &minor(1, 2, 0, 1));
        add(&add(&t0, &t1, -1), &t2, 1)
    }

    #[test]
    fn char_cubic_examples() {
        assert_eq!(IntMatrix::identity(3).char_cubic().unwrap(), CharCubic::new(3, 3, 1));
        assert_eq!(counterexample().char_cubic().unwrap(), CharCubic::new(31, 59, 1));
        let golden = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]]);
        assert_eq!(golden.char_cubic().unwrap(), CharCubic::new(-1, -2, 1));
        assert!(IntMatrix::identity(2).char_cubic().is_err());
    }

    #[test]
    fn char_cubic_matches_cofactor_oracle() {
        let samples = [
            counterexample(),
            IntMatrix::from_rows([[2, -1, 3], [0, 4, -2], [5, 1, -3]]),
            IntMatrix::from_rows([[0, 0, 1], [1, 0, -3], [0, 1, 7]]),
        ];
        for m in samples {
            let oracle = det_m_minus_x(&m);
            let c = m.char_cubic().unwrap();
            assert_eq!(oracle, vec![c.a3.clone(), -c.a2.clone(), c.a1.clone(), -BigInt::one()]);
            for x in [-1i64, 0, 1, 5] {
                assert_eq!(eval_poly(&oracle, &int(x)), c.eval(&int(x)));
            }
        }
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(IntMatrix::identity(3).adjugate(), IntMatrix::identity(3));
        let d = IntMatrix::from_rows([[2, 0, 0], [0, 3, 0], [0, 0, 5]]);
        assert_eq!(d.adjugate(), IntMatrix::from_rows([[15, 0, 0], [0, 10, 0], [0, 0, 6]]));
        let a = counterexample();
        assert_eq!(a.mul(&a.adjugate()), IntMatrix::identity(3));
        let m2 = IntMatrix::from_rows([[1, 2], [3, 4]]);
        assert_eq!(m2.adjugate(), IntMatrix::from_rows([[4, -2], [-3, 1]]));
    }

    #[test]
    fn irreducibility_and_hyperbolicity() {
        assert!(!IntMatrix::identity(3).is_irreducible());
        assert!(!IntMatrix::identity(2).is_irreducible());
        assert!(IntMatrix::from_rows([[0, 2], [1, 0]]).is_irreducible());
        assert!(counterexample().is_irreducible());
        assert!(counterexample().is_hyperbolic());
        let golden = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]]);
        assert_eq!(golden.char_discriminant(), int(49));
        assert!(golden.is_hyperbolic());
        // x^3 - 2x^2 + x - 2 = (x-2)(x^2+1): reducible
        let rot = IntMatrix::from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 2]]);
        assert!(!rot.is_irreducible());
        assert!(!rot.is_hyperbolic());
        // x^3 - 2: irreducible, one real root
        let cbrt2 = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]]);
        assert!(cbrt2.is_irreducible());
        assert!(cbrt2.char_discriminant().is_negative());
        assert!(!cbrt2.is_hyperbolic());
    }

    #[test]
    fn norms() {
        assert_eq!(IntMatrix::zero(3).norm(), int(0));
        assert_eq!(counterexample().norm(), int(42));
        assert_eq!(IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]]).norm(), int(6));
    }

    #[test]
    fn parse_and_format() {
        let m: IntMatrix = "1,2,0;0,1,2;-7,0,29".parse().unwrap();
        assert_eq!(m, counterexample());
        assert_eq!(m.to_string(), "1,2,0;0,1,2;-7,0,29");
        assert!("1,2;3".parse::<IntMatrix>().is_err());
        assert!("1,2,3;4,5,6".parse::<IntMatrix>().is_err());
        assert!("1,x;3,4".parse::<IntMatrix>().is_err());
        assert!("5".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&rat(29, 2)), "29/2");
        assert_eq!(rational_to_string(&rat(-30, 2)), "-15");
        assert_eq!(rational_from_str("-7/14"), Some(rat(-1, 2)));
        assert_eq!(rational_from_str("1/0"), None);
    }

    #[test]
    fn divisor_listing() {
        let ds: Vec<i64> = divisors(&int(36)).iter().map(|d| d.to_i64().unwrap()).collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix3() -> impl Strategy<Value = IntMatrix> {
            proptest::collection::vec(-9i64..=9, 9).prop_map(|v| IntMatrix::from_i64(3, &v).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn adjugate_identity(m in matrix3()) {
                let det = IntMatrix::scalar(3, m.det());
                let adj = m.adjugate();
                prop_assert_eq!(m.mul(&adj), det.clone());
                prop_assert_eq!(adj.mul(&m), det);
            }

            #[test]
            fn char_cubic_at_small_points(m in matrix3()) {
                let c = m.char_cubic().unwrap();
                prop_assert_eq!(c.eval(&BigInt::zero()), m.det());
                for x in [-1i64, 1] {
                    let shifted = m.sub(&IntMatrix::scalar(3, int(x)));
                    prop_assert_eq!(c.eval(&int(x)), shifted.det());
                }
            }

            #[test]
            fn hyperbolic_implies_irreducible(m in matrix3()) {
                prop_assert!(!m.is_hyperbolic() || m.is_irreducible());
            }
        }
    }
}
