//! The polynomial forms whose unit values decide Frobenius type: the binary
//! quadratic `Q_A` of a 2×2 matrix, and for 3×3 matrices the binary cubic
//! `P̄(m,n)`, the ternary cubic `P̃_{A,B}(x,y,z)` and their product
//! `Q_{A,B} = P̄ · P̃_{A,A∨}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{rational_to_string, CharCubic, IntMatrix};
use crate::commutant::CommutantBasis;
use crate::error::{Error, Result};

fn q(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// `p·x² + q·xy + r·y²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryQuadraticForm {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
}

impl BinaryQuadraticForm {
    pub fn new(p: i64, q: i64, r: i64) -> Self {
        Self { p: p.into(), q: q.into(), r: r.into() }
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.p * x * x + &self.q * x * y + &self.r * y * y
    }

    pub fn discriminant(&self) -> BigInt {
        &self.q * &self.q - BigInt::from(4) * &self.p * &self.r
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &[(&self.p, "x^2"), (&self.q, "x*y"), (&self.r, "y^2")])
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, terms: &[(&BigInt, &str)]) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        let a = c.abs();
        if a.is_one() {
            f.write_str(mono)?;
        } else {
            write!(f, "{a}*{mono}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Form of a 2×2 matrix `A = (a_ij)`:
/// `(a12·x² + (a22 - a11)·xy - a21·y²) / gcd(a12, a21, a22 - a11)`.
pub fn q2(a: &IntMatrix) -> Result<BinaryQuadraticForm> {
    if a.dim() != 2 {
        return Err(Error::Dimension(a.dim()));
    }
    if !a.is_irreducible() {
        return Err(Error::NotInM(2));
    }
    let a12 = a.get(0, 1);
    let a21 = a.get(1, 0);
    let diff = a.get(1, 1) - a.get(0, 0);
    let g = a12.gcd(a21).gcd(&diff);
    // an irreducible matrix is not scalar, so g > 0
    Ok(BinaryQuadraticForm { p: a12 / &g, q: diff / &g, r: -(a21 / &g) })
}

/// A form with rational coefficients written as `scale · primitive`, where
/// `primitive` has coprime integer coefficients and a positive leading one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scaled<const N: usize> {
    pub primitive: [BigInt; N],
    pub scale: BigRational,
}

/// `coeffs` are listed from the leading monomial down.
fn canonical_scaling<const N: usize>(coeffs: &[BigRational; N]) -> Scaled<N> {
    let Some(lead) = coeffs.iter().find(|c| !c.is_zero()) else {
        return Scaled { primitive: std::array::from_fn(|_| BigInt::zero()), scale: BigRational::zero() };
    };
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * q(&den)).to_integer()).collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if lead.is_negative() {
        content = -content;
    }
    let primitive = std::array::from_fn(|i| &ints[i] / &content);
    Scaled { primitive, scale: BigRational::new(content, den) }
}

/// `c30·m³ + c21·m²n + c12·mn² + c03·n³` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCubicForm {
    pub coeffs: [BigRational; 4],
}

impl BinaryCubicForm {
    pub fn eval(&self, m: &BigInt, n: &BigInt) -> BigRational {
        let (m, n) = (q(m), q(n));
        let [c30, c21, c12, c03] = &self.coeffs;
        c30 * &m * &m * &m + c21 * &m * &m * &n + c12 * &m * &n * &n + c03 * &n * &n * &n
    }

    pub fn scaled(&self) -> Scaled<4> {
        canonical_scaling(&self.coeffs)
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_string).collect()
    }
}

pub const BINARY_MONOMIALS: [&str; 4] = ["m^3", "m^2*n", "m*n^2", "n^3"];

/// `P̄(m,n)` built from the characteristic polynomial
/// `-x³ + a1·x² - a2·x + a3` of `A` and the coefficients of
/// `B = αA² + βA + γE` (`γ` does not enter).
pub fn p_bar(chi: &CharCubic, alpha: &BigRational, beta: &BigRational) -> BinaryCubicForm {
    let (a1, a2, a3) = (q(&chi.a1), q(&chi.a2), q(&chi.a3));
    let two = q(&2.into());
    let three = q(&3.into());
    let four = q(&4.into());
    let s = &a2 + &a1 * &a1;
    let c21 = &two * &a1 * alpha + &three * beta;
    let c12 = &s * alpha * alpha + &four * &a1 * alpha * beta + &three * beta * beta;
    let c03 = (&a1 * &a2 - &a3) * alpha * alpha * alpha
        + &s * alpha * alpha * beta
        + &two * &a1 * alpha * beta * beta
        + beta * beta * beta;
    BinaryCubicForm { coeffs: [BigRational::one(), c21, c12, c03] }
}

/// One-based index pair `ij`.
pub type IndexPair = (u8, u8);

/// `⟨ij,kl⟩_{A,B} = a_ij·b_kl - a_kl·b_ij` with one-based indices.
pub fn bracket(a: &IntMatrix, b: &IntMatrix, ij: IndexPair, kl: IndexPair) -> Result<BigInt> {
    let dim = a.dim().min(b.dim()) as u8;
    for idx in [ij.0, ij.1, kl.0, kl.1] {
        if idx == 0 || idx > dim {
            return Err(Error::IndexOutOfRange(idx));
        }
    }
    let at = |m: &IntMatrix, (i, j): IndexPair| m.get(i as usize - 1, j as usize - 1).clone();
    Ok(at(a, ij) * at(b, kl) - at(a, kl) * at(b, ij))
}

/// Monomials of a ternary cubic, in the storage order of
/// [`TernaryCubicForm::coeffs`]; entries are `(x, y, z)` exponents.
pub const TERNARY_MONOMIALS: [(u32, u32, u32); 10] =
    [(3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 0), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (0, 1, 2), (1, 1, 1)];

/// Leading-first order used for canonical scaling:
/// x³ ≻ x²y ≻ x²z ≻ xy² ≻ xyz ≻ xz² ≻ y³ ≻ y²z ≻ yz² ≻ z³.
const TERNARY_LEADING_ORDER: [usize; 10] = [0, 3, 5, 4, 9, 6, 1, 7, 8, 2];

type BracketTerm = (i64, IndexPair, IndexPair);

/// Bracket sums giving each coefficient of `P̃_{A,B}`, one row per entry of
/// [`TERNARY_MONOMIALS`].
///
/// The x²z row is `⟨11,12⟩ + ⟨12,33⟩ + ⟨32,13⟩`; with this row
/// `P̃_{A,A∨}(u) = det(u; uA; uA²)` holds identically (see tests).
pub const P_TILDE_TABLE: [&[BracketTerm]; 10] = [
    &[(1, (1, 2), (1, 3))],
    &[(1, (2, 3), (2, 1))],
    &[(1, (3, 1), (3, 2))],
    &[(1, (1, 3), (1, 1)), (1, (2, 2), (1, 3)), (1, (1, 2), (2, 3))],
    &[(1, (2, 2), (2, 3)), (1, (2, 3), (1, 1)), (1, (1, 3), (2, 1))],
    &[(1, (1, 1), (1, 2)), (1, (1, 2), (3, 3)), (1, (3, 2), (1, 3))],
    &[(1, (3, 2), (3, 3)), (1, (1, 1), (3, 2)), (1, (3, 1), (1, 2))],
    &[(1, (2, 1), (2, 2)), (1, (3, 3), (2, 1)), (1, (2, 3), (3, 1))],
    &[(1, (3, 1), (2, 2)), (1, (3, 3), (3, 1)), (1, (2, 1), (3, 2))],
    &[(1, (1, 1), (2, 2)), (1, (2, 2), (3, 3)), (1, (3, 3), (1, 1)), (3, (1, 3), (3, 1))],
];

/// Ternary cubic with integer coefficients in [`TERNARY_MONOMIALS`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryCubicForm {
    pub coeffs: [BigInt; 10],
}

impl TernaryCubicForm {
    pub fn eval(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> BigInt {
        TERNARY_MONOMIALS.iter().zip(&self.coeffs).map(|(&(ex, ey, ez), c)| c * x.pow(ex) * y.pow(ey) * z.pow(ez)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Canonical scaling; the primitive coefficients are returned in storage
    /// order.
    pub fn scaled(&self) -> Scaled<10> {
        let ordered: [BigRational; 10] = std::array::from_fn(|i| q(&self.coeffs[TERNARY_LEADING_ORDER[i]]));
        let s = canonical_scaling(&ordered);
        let mut primitive: [BigInt; 10] = std::array::from_fn(|_| BigInt::zero());
        for (rank, &slot) in TERNARY_LEADING_ORDER.iter().enumerate() {
            primitive[slot] = s.primitive[rank].clone();
        }
        Scaled { primitive, scale: s.scale }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: std::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]) }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { coeffs: std::array::from_fn(|i| &self.coeffs[i] * c) }
    }
}

pub fn ternary_monomial_name(i: usize) -> String {
    let (ex, ey, ez) = TERNARY_MONOMIALS[i];
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x", ex), part("y", ey), part("z", ez)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl fmt::Display for TernaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = TERNARY_LEADING_ORDER.iter().map(|&i| ternary_monomial_name(i)).collect();
        let terms: Vec<(&BigInt, &str)> =
            TERNARY_LEADING_ORDER.iter().zip(&names).map(|(&i, n)| (&self.coeffs[i], n.as_str())).collect();
        write_poly(f, &terms)
    }
}

pub fn p_tilde(a: &IntMatrix, b: &IntMatrix) -> Result<TernaryCubicForm> {
    if a.dim() != 3 || b.dim() != 3 {
        return Err(Error::Dimension(if a.dim() != 3 { a.dim() } else { b.dim() }));
    }
    let mut coeffs: [BigInt; 10] = std::array::from_fn(|_| BigInt::zero());
    for (slot, terms) in P_TILDE_TABLE.iter().enumerate() {
        for &(mult, ij, kl) in terms.iter() {
            coeffs[slot] += BigInt::from(mult) * bracket(a, b, ij, kl)?;
        }
    }
    Ok(TernaryCubicForm { coeffs })
}

/// `Q_{A,B}(x,y,z;m,n) = P̄(m,n) · P̃_{A,A∨}(x,y,z)` together with the
/// canonical scaling of each factor. The unscaled product always has integer
/// coefficients; `content = mn.scale · xyz.scale` is then a nonzero integer
/// and `Q = content · F_mn · F_xyz` with both `F` primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductForm {
    pub cubic_mn: BinaryCubicForm,
    pub cubic_xyz: TernaryCubicForm,
    pub mn: Scaled<4>,
    pub xyz: Scaled<10>,
}

impl ProductForm {
    pub fn new(cubic_mn: BinaryCubicForm, cubic_xyz: TernaryCubicForm) -> Result<Self> {
        for c in &cubic_mn.coeffs {
            for d in &cubic_xyz.coeffs {
                if !(c * q(d)).is_integer() {
                    return Err(Error::IntegralityViolated(format!(
                        "coefficient {} * {} of P̄·P̃ is not an integer",
                        rational_to_string(c),
                        d
                    )));
                }
            }
        }
        let mn = cubic_mn.scaled();
        let xyz = cubic_xyz.scaled();
        Ok(Self { cubic_mn, cubic_xyz, mn, xyz })
    }

    /// Integer content of the product: `Q = content · F_mn · F_xyz`.
    pub fn content(&self) -> BigInt {
        let c = &self.mn.scale * &self.xyz.scale;
        debug_assert!(c.is_integer());
        c.to_integer()
    }

    /// Exact value of `Q` at `(x, y, z, m, n)`.
    pub fn eval(&self, point: &[BigInt; 5]) -> BigRational {
        let [x, y, z, m, n] = point;
        self.cubic_mn.eval(m, n) * q(&self.cubic_xyz.eval(x, y, z))
    }

    /// Integer coefficients of the full product, keyed by
    /// `(x, y, z, m, n)` exponents.
    pub fn product_terms(&self) -> Vec<([u32; 5], BigInt)> {
        let mut out = Vec::new();
        for (i, c) in self.cubic_mn.coeffs.iter().enumerate() {
            for (&(ex, ey, ez), d) in TERNARY_MONOMIALS.iter().zip(&self.cubic_xyz.coeffs) {
                let v = c * q(d);
                if !v.is_zero() {
                    out.push(([ex, ey, ez, 3 - i as u32, i as u32], v.to_integer()));
                }
            }
        }
        out.sort();
        out
    }
}

/// Product form of `c` with the normalized commutant basis.
pub fn q3(c: &IntMatrix) -> Result<(CommutantBasis, ProductForm)> {
    let basis = CommutantBasis::of(c)?;
    let form = q3_with_basis(&basis)?;
    Ok((basis, form))
}

pub fn q3_with_basis(basis: &CommutantBasis) -> Result<ProductForm> {
    let chi = basis.a.char_cubic()?;
    let mn = p_bar(&chi, &basis.alpha, &basis.beta);
    let xyz = p_tilde(&basis.a, &basis.a.adjugate())?;
    ProductForm::new(mn, xyz)
}

#[derive(Serialize)]
pub struct FactorTable {
    pub monomials: Vec<String>,
    pub coefficients: Vec<String>,
    pub primitive: Vec<String>,
    pub scale: String,
}

impl FactorTable {
    pub fn mn(form: &ProductForm) -> Self {
        Self {
            monomials: BINARY_MONOMIALS.iter().map(|s| s.to_string()).collect(),
            coefficients: form.cubic_mn.coefficient_strings(),
            primitive: form.mn.primitive.iter().map(|c| c.to_string()).collect(),
            scale: rational_to_string(&form.mn.scale),
        }
    }

    pub fn xyz(form: &ProductForm) -> Self {
        Self {
            monomials: (0..10).map(ternary_monomial_name).collect(),
            coefficients: form.cubic_xyz.coeffs.iter().map(|c| c.to_string()).collect(),
            primitive: form.xyz.primitive.iter().map(|c| c.to_string()).collect(),
            scale: rational_to_string(&form.xyz.scale),
        }
    }
}
