//! Totally positive units of the commutant order and a certified basis of
//! their logarithm lattice.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::field::CubicField;
use crate::arith::IntMatrix;
use crate::commutant::{express_in_powers, CommutantBasis};
use crate::error::{Error, Result};

/// Largest eigenvalue bound tried before giving up.
pub const UNIT_BOUND_CAP: u32 = 1 << 10;

/// Two generators of the group of commutant units with all eigenvalues
/// positive. These preserve every eigen-cone and act on each sail.
#[derive(Clone, Debug, Serialize)]
pub struct UnitGroup {
    pub generators: [IntMatrix; 2],
    /// `ln μ_i` for each generator, eigenvalues in ascending order of the
    /// eigenvalues of `C`.
    pub logs: [[f64; 3]; 2],
    /// Eigenvalue bound at which the basis was certified.
    pub bound: u32,
}

fn f(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn norm(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cross_norm(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    norm(&c)
}

/// Eigenvalues of `x·E + m·A + n·B` at each root, as rows `[1, a_i, b_i]`.
fn eigen_rows(basis: &CommutantBasis, field: &CubicField) -> Result<[[f64; 3]; 3]> {
    let pa = express_in_powers(&basis.c, &basis.a)?;
    let pb = express_in_powers(&basis.c, &basis.b)?;
    let at = |p: &(BigRational, BigRational, BigRational), x: f64| (f(&p.0) * x + f(&p.1)) * x + f(&p.2);
    Ok(std::array::from_fn(|i| {
        let l = field.root(i);
        [1.0, at(&pa, l), at(&pb, l)]
    }))
}

fn invert(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det
        })
    })
}

/// Positive units with every eigenvalue at most `t`, as coordinates and
/// eigenvalue logarithms.
fn positive_units(rows: &[[f64; 3]; 3], t: f64) -> Vec<([i64; 3], [f64; 3])> {
    let inv = invert(*rows);
    let reach = |k: usize| (t * inv[k].iter().map(|v| v.abs()).sum::<f64>()).ceil() as i64;
    let (mb, nb) = (reach(1), reach(2));
    let mut out = Vec::new();
    for m in -mb..=mb {
        for n in -nb..=nb {
            let shift: [f64; 3] = std::array::from_fn(|i| m as f64 * rows[i][1] + n as f64 * rows[i][2]);
            let lo = shift.iter().map(|s| -t - s).fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
            let hi = shift.iter().map(|s| t - s).fold(f64::INFINITY, f64::min).floor() as i64;
            for x in lo..=hi {
                let mu: [f64; 3] = std::array::from_fn(|i| x as f64 + shift[i]);
                let p = mu[0] * mu[1] * mu[2];
                if (p.abs() - 1.0).abs() > 1e-6 {
                    continue;
                }
                let sign = if mu.iter().all(|v| *v > 0.0) {
                    1
                } else if mu.iter().all(|v| *v < 0.0) {
                    -1
                } else {
                    continue;
                };
                let coords = [x * sign, m * sign, n * sign];
                if coords == [1, 0, 0] {
                    continue;
                }
                out.push((coords, mu.map(|v| (v * sign as f64).ln())));
            }
        }
    }
    out
}

/// A basis of the positive unit group of the commutant of `c`.
///
/// All positive units with eigenvalues up to a bound `T` are listed; the two
/// shortest independent log vectors form a basis as soon as the second is
/// no longer than `sqrt(3/2)·ln T`, because every unit at least that short
/// has all eigenvalues below `T` and so was listed.
pub fn dirichlet_generators(c: &IntMatrix) -> Result<UnitGroup> {
    if !c.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let basis = CommutantBasis::of(c)?;
    let chi = c.char_cubic()?;
    let field = CubicField::new([-&chi.a3, chi.a2.clone(), -&chi.a1])?;
    let rows = eigen_rows(&basis, &field)?;
    let mut t = 8u32;
    while t <= UNIT_BOUND_CAP {
        let mut units: Vec<([i64; 3], [f64; 3])> = positive_units(&rows, t as f64)
            .into_iter()
            .filter(|(k, _)| basis.combine(&k[0].into(), &k[1].into(), &k[2].into()).det().is_one())
            .collect();
        units.sort_by(|a, b| norm(&a.1).total_cmp(&norm(&b.1)).then(b.0.cmp(&a.0)));
        if let Some(first) = units.first() {
            let v1 = first.1;
            let second = units.iter().find(|u| cross_norm(&v1, &u.1) > 1e-9 * norm(&v1) * norm(&u.1));
            if let Some(second) = second {
                if norm(&second.1) * (1.0 + 1e-9) <= (1.5f64).sqrt() * (t as f64).ln() {
                    let mat = |k: &[i64; 3]| basis.combine(&BigInt::from(k[0]), &k[1].into(), &k[2].into());
                    return Ok(UnitGroup {
                        generators: [mat(&first.0), mat(&second.0)],
                        logs: [v1, second.1],
                        bound: t,
                    });
                }
            }
        }
        t *= 2;
    }
    Err(Error::UnitsNotFound(UNIT_BOUND_CAP))
}

impl UnitGroup {
    /// Generators conjugated as `P⁻¹·g·P`.
    pub fn conjugated(&self, p: &IntMatrix, p_inv: &IntMatrix) -> Self {
        Self { generators: self.generators.clone().map(|g| p_inv.mul(&g).mul(p)), ..self.clone() }
    }

    /// Coordinates of a sum-zero log vector in the generator basis.
    pub fn log_coordinates(&self, v: &[f64; 3]) -> [f64; 2] {
        let [a, b] = &self.logs;
        let d = |x: &[f64; 3], y: &[f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
        let (aa, ab, bb) = (d(a, a), d(a, b), d(b, b));
        let (va, vb) = (d(v, a), d(v, b));
        let det = aa * bb - ab * ab;
        [(va * bb - vb * ab) / det, (vb * aa - va * ab) / det]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::FrobeniusParams;
    use num_traits::Signed;

    fn log_vector(g: &IntMatrix, basis: &CommutantBasis, rows: &[[f64; 3]; 3]) -> [f64; 3] {
        let k = basis.coordinates(g).unwrap().map(|v| v.to_f64().unwrap());
        std::array::from_fn(|i| (k[0] + k[1] * rows[i][1] + k[2] * rows[i][2]).abs().ln())
    }

    #[test]
    fn golden_matrix_is_a_unit_of_the_group() {
        let c = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]]);
        let group = dirichlet_generators(&c).unwrap();
        for g in &group.generators {
            assert!(g.det().is_one());
            assert!(g.commutes_with(&c));
        }
        let basis = CommutantBasis::of(&c).unwrap();
        let chi = c.char_cubic().unwrap();
        let field = CubicField::new([-&chi.a3, chi.a2.clone(), -&chi.a1]).unwrap();
        let rows = eigen_rows(&basis, &field).unwrap();
        // C and C² - 2E are units with mixed eigenvalue signs; their squares
        // are positive and generate the same group as the computed basis
        let u = c.mul(&c).sub(&IntMatrix::scalar(3, 2.into()));
        assert!(c.det().abs().is_one() && u.det().abs().is_one());
        let coords: Vec<[f64; 2]> =
            [c.mul(&c), u.mul(&u)].iter().map(|g| group.log_coordinates(&log_vector(g, &basis, &rows))).collect();
        for st in &coords {
            for v in st {
                assert!((v - v.round()).abs() < 1e-9, "{st:?}");
            }
        }
        let index = coords[0][0] * coords[1][1] - coords[0][1] * coords[1][0];
        assert!((index.abs() - 1.0).abs() < 1e-9, "index {index}");
    }

    #[test]
    fn generators_have_positive_eigenvalues() {
        for params in [FrobeniusParams::m131(), FrobeniusParams::m031()] {
            let c = params.matrix();
            let group = dirichlet_generators(&c).unwrap();
            for g in &group.generators {
                assert!(g.det().is_one());
                assert!(g.commutes_with(&c));
                let tr = g.trace();
                assert!(tr > BigInt::from(0));
            }
            assert!(cross_norm(&group.logs[0], &group.logs[1]) > 1e-6);
        }
    }

    #[test]
    fn elliptic_input_is_rejected() {
        let c = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]]);
        assert_eq!(dirichlet_generators(&c).unwrap_err(), Error::NotHyperbolic);
    }
}
