//! Totally real cubic fields given by a monic integer cubic with three
//! simple real roots. Roots carry rational isolating intervals; signs of
//! polynomials at a root are decided by a floating-point evaluation with a
//! rigorous error bound and, when that is inconclusive, by exact bisection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<BigInt>);

impl Poly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self(c)
    }

    pub fn constant(v: BigInt) -> Self {
        Self::new(vec![v])
    }

    /// `a + b·t`.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::new(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self(Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &Poly) -> Self {
        let d = m.0.len() - 1;
        let mut c = self.0.clone();
        while c.len() > d {
            let lead = c.pop().expect("nonempty");
            let shift = c.len() - d;
            for (i, mc) in m.0[..d].iter().enumerate() {
                c[shift + i] -= &lead * mc;
            }
        }
        Self::new(c)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    /// Upper bound for `|p'|` on `[-r, r]`.
    fn derivative_bound(&self, r: &BigRational) -> BigRational {
        let mut bound = BigRational::zero();
        let mut pow = BigRational::one();
        for (k, c) in self.0.iter().enumerate().skip(1) {
            bound += BigRational::from_integer(c.abs() * BigInt::from(k)) * &pow;
            pow *= r;
        }
        bound
    }
}

fn to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn rat_from_f64(v: f64) -> BigRational {
    BigRational::from_f64(v).expect("finite")
}

/// Real roots of the monic cubic `x³ + b·x² + c·x + d` (ascending), or
/// `None` when fewer than three are real.
pub fn real_roots(b: f64, c: f64, d: f64) -> Option<[f64; 3]> {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    if p >= 0.0 {
        return None;
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let mut r: [f64; 3] =
        std::array::from_fn(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - b / 3.0);
    for x in r.iter_mut() {
        for _ in 0..4 {
            let f = ((*x + b) * *x + c) * *x + d;
            let df = (3.0 * *x + 2.0 * b) * *x + c;
            if df != 0.0 {
                *x -= f / df;
            }
        }
    }
    r.sort_by(f64::total_cmp);
    Some(r)
}

/// A real root with a rational isolating interval `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub approx: f64,
    pub lo: BigRational,
    pub hi: BigRational,
    /// `max(approx - lo, hi - approx)`, rounded up.
    radius: f64,
}

/// `Q(λ)` for a totally real cubic `λ`.
#[derive(Clone, Debug)]
pub struct CubicField {
    /// Monic defining polynomial.
    pub poly: Poly,
    pub roots: [RealRoot; 3],
}

impl CubicField {
    /// Field of the monic cubic `x³ + c2·x² + c1·x + c0` given as
    /// `[c0, c1, c2]`.
    pub fn new(c: [BigInt; 3]) -> Result<Self> {
        let poly = Poly::new(vec![c[0].clone(), c[1].clone(), c[2].clone(), BigInt::one()]);
        let approx = real_roots(to_f64(&c[2]), to_f64(&c[1]), to_f64(&c[0])).ok_or(Error::NotHyperbolic)?;
        let scale = approx.iter().fold(1.0f64, |m, r| m.max(r.abs()));
        for rel in [1e-12, 1e-9, 1e-6, 1e-3] {
            let delta = rel * scale;
            let roots: Vec<RealRoot> = approx
                .iter()
                .map(|&a| {
                    let lo = rat_from_f64(a - delta);
                    let hi = rat_from_f64(a + delta);
                    let radius = ((a - (a - delta)).max((a + delta) - a)) * (1.0 + 1e-12);
                    RealRoot { approx: a, lo, hi, radius }
                })
                .collect();
            let changes = roots.iter().all(|r| {
                let (a, b) = (poly.eval(&r.lo), poly.eval(&r.hi));
                a.signum() * b.signum() == -BigRational::one()
            });
            let disjoint = roots.windows(2).all(|w| w[0].hi < w[1].lo);
            if changes && disjoint {
                let roots: [RealRoot; 3] = roots.try_into().expect("three roots");
                return Ok(Self { poly, roots });
            }
        }
        Err(Error::IncreaseRadius("could not isolate the eigenvalues".into()))
    }

    pub fn root(&self, i: usize) -> f64 {
        self.roots[i].approx
    }

    /// Floating value of `q` at root `i` with a rigorous bound on its error.
    pub fn eval_with_error(&self, q: &Poly, i: usize) -> (f64, f64) {
        let r = &self.roots[i];
        let a = r.approx;
        let rho = r.radius;
        let coeffs: Vec<f64> = q.0.iter().map(to_f64).collect();
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for c in coeffs.iter().rev() {
            value = value * a + c;
            magnitude = magnitude * a.abs() + c.abs();
        }
        let mut lipschitz = 0.0;
        let mut pow = 1.0;
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            lipschitz += k as f64 * c.abs() * pow;
            pow *= a.abs() + rho;
        }
        let n = coeffs.len().max(1) as f64;
        let err = lipschitz * rho + 4.0 * n * f64::EPSILON * magnitude;
        (value, err * 2.0 + f64::MIN_POSITIVE)
    }

    /// Exact sign of `q(λ_i)`.
    pub fn sign_at(&self, q: &Poly, i: usize) -> Ordering {
        let q = q.rem_monic(&self.poly);
        if q.is_zero() {
            return Ordering::Equal;
        }
        let (v, err) = self.eval_with_error(&q, i);
        if v.abs() > err {
            return v.total_cmp(&0.0);
        }
        self.refine_sign(&q, i)
    }

    fn refine_sign(&self, q: &Poly, i: usize) -> Ordering {
        let root = &self.roots[i];
        let mut lo = root.lo.clone();
        let mut hi = root.hi.clone();
        let p_lo = self.poly.eval(&lo).signum();
        let two = BigRational::from_integer(2.into());
        loop {
            let mid = (&lo + &hi) / &two;
            let half = (&hi - &lo) / &two;
            let qm = q.eval(&mid);
            let reach = lo.abs().max(hi.abs());
            let bound = q.derivative_bound(&reach) * &half;
            if qm.abs() > bound {
                // the whole interval has the sign of the midpoint
                debug_assert!(q.eval(&lo).signum() == qm.signum() && q.eval(&hi).signum() == qm.signum());
                return if qm.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
            if self.poly.eval(&mid).signum() == p_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn golden() -> CubicField {
        // x³ + x² - 2x - 1
        CubicField::new([int(-1), int(-2), int(1)]).unwrap()
    }

    #[test]
    fn roots_of_golden_cubic() {
        let f = golden();
        let expect: Vec<f64> = (1..=3).map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / 7.0).cos()).collect();
        let mut expect = expect;
        expect.sort_by(f64::total_cmp);
        for (r, e) in f.roots.iter().zip(&expect) {
            assert!((r.approx - e).abs() < 1e-12);
            assert!(r.lo < r.hi);
        }
        assert!(CubicField::new([int(-2), int(0), int(0)]).is_err());
    }

    #[test]
    fn reduction_modulo_the_cubic() {
        let f = golden();
        let t3 = Poly::new(vec![int(0), int(0), int(0), int(1)]);
        assert_eq!(t3.rem_monic(&f.poly), Poly::new(vec![int(1), int(2), int(-1)]));
    }

    #[test]
    fn signs_near_zero_are_exact() {
        let f = golden();
        // linear forms that nearly vanish at each root, beyond what the
        // float path can decide
        let big = BigInt::from(10).pow(30);
        for i in 0..3 {
            let approx = (f.root(i) * 1e15).round();
            let q = Poly::linear(-BigInt::from(approx as i64) * BigInt::from(10).pow(15), big.clone());
            let exact = f.sign_at(&q, i);
            let slow = f.refine_sign(&q.rem_monic(&f.poly), i);
            assert_eq!(exact, slow);
            assert_ne!(exact, Ordering::Equal);
        }
    }

    #[test]
    fn sign_matches_float_when_far_from_zero() {
        let f = golden();
        let q = Poly::new(vec![int(3), int(-5), int(2)]);
        for i in 0..3 {
            let v = q.eval_f64(f.root(i));
            assert_eq!(f.sign_at(&q, i), v.total_cmp(&0.0));
        }
    }
}
