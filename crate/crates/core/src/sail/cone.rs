//! The open simplicial cone cut out by the eigen-planes of a hyperbolic
//! matrix that contains `(0,0,1)`, and its minimal lattice points.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::field::{CubicField, Poly};
use crate::arith::IntMatrix;
use crate::error::{Error, Result};

pub type Point = [i64; 3];

/// Eigen-directions of `C` as polynomials in an eigenvalue, with the cone
/// orientation that puts `(0,0,1)` inside.
///
/// Row 0 of `adj(C - tE)` gives left eigenvectors `l(t)` and column 0 right
/// eigenvectors `v(t)`; at each root `λ_i` both are nonzero because every
/// nonzero rational vector is cyclic for an irreducible characteristic
/// polynomial.
#[derive(Clone, Debug)]
pub struct EigenCone {
    pub matrix: IntMatrix,
    pub field: CubicField,
    left: [Poly; 3],
    right: [Poly; 3],
    /// `σ_i` with `x ∈ K ⟺ σ_i·l_i(x) > 0` for all `i`.
    pub sigma: [i8; 3],
    /// `s_i` such that `s_i·v(λ_i)` spans the `i`-th ray of the closed cone.
    ray_sign: [i8; 3],
    /// `l_j(λ_i)` as floats with error bounds.
    left_values: [[(f64, f64); 3]; 3],
}

fn sign_i8(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// `adj(C - tE)` with polynomial entries.
fn adjugate_pencil(c: &IntMatrix) -> [[Poly; 3]; 3] {
    let m = |i: usize, j: usize| -> Poly {
        let v = c.get(i, j).clone();
        if i == j {
            Poly::linear(v, -BigInt::one())
        } else {
            Poly::constant(v)
        }
    };
    let cof = |i: usize, j: usize| -> Poly {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = m(rows[0], cols[0]).mul(&m(rows[1], cols[1])).sub(&m(rows[0], cols[1]).mul(&m(rows[1], cols[0])));
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            minor.scale(&-BigInt::one())
        }
    };
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i)))
}

pub fn eigen_cone(c: &IntMatrix) -> Result<EigenCone> {
    if c.dim() != 3 {
        return Err(Error::Dimension(c.dim()));
    }
    if !c.is_irreducible() {
        return Err(Error::NotInM(3));
    }
    if !c.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let chi = c.char_cubic()?;
    let field = CubicField::new([-&chi.a3, chi.a2.clone(), -&chi.a1])?;
    let adj = adjugate_pencil(c);
    let left: [Poly; 3] = std::array::from_fn(|j| adj[0][j].clone());
    let right: [Poly; 3] = std::array::from_fn(|j| adj[j][0].clone());
    let left_values =
        std::array::from_fn(|i| std::array::from_fn(|j| field.eval_with_error(&left[j].rem_monic(&field.poly), i)));
    let mut cone = EigenCone { matrix: c.clone(), field, left, right, sigma: [1; 3], ray_sign: [1; 3], left_values };
    for i in 0..3 {
        let s = sign_i8(cone.field.sign_at(&cone.left[2], i));
        debug_assert_ne!(s, 0, "(0,0,1) lies on an eigen-plane");
        cone.sigma[i] = s;
    }
    for i in 0..3 {
        let pairing = (0..3).fold(Poly::new(Vec::new()), |acc, j| acc.add(&cone.left[j].mul(&cone.right[j])));
        cone.ray_sign[i] = cone.sigma[i] * sign_i8(cone.field.sign_at(&pairing, i));
    }
    Ok(cone)
}

impl EigenCone {
    fn form_poly(&self, x: &Point) -> Poly {
        (0..3).fold(Poly::new(Vec::new()), |acc, j| acc.add(&self.left[j].scale(&BigInt::from(x[j]))))
    }

    /// Certified sign of `σ_i·l_i(x)`.
    pub fn side(&self, x: &Point, i: usize) -> Ordering {
        let (v, err) = self.approx_form(x, i);
        let raw = if v.abs() > err { v.total_cmp(&0.0) } else { self.field.sign_at(&self.form_poly(x), i) };
        if self.sigma[i] > 0 {
            raw
        } else {
            raw.reverse()
        }
    }

    /// `l_i(x)` as a float, with an error bound.
    fn approx_form(&self, x: &Point, i: usize) -> (f64, f64) {
        let mut v = 0.0;
        let mut err = 0.0;
        let mut mag = 0.0;
        for (&(val, e), &xj) in self.left_values[i].iter().zip(x) {
            let xj = xj as f64;
            v += xj * val;
            err += xj.abs() * e;
            mag += (xj * val).abs();
        }
        (v, 2.0 * (err + 8.0 * f64::EPSILON * mag) + f64::MIN_POSITIVE)
    }

    pub fn contains(&self, x: &Point) -> bool {
        (0..3).all(|i| self.side(x, i) == Ordering::Greater)
    }

    /// `σ_i·l_i(x)`, positive on the cone.
    pub fn coordinates(&self, x: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| {
            let v: f64 = (0..3).map(|j| x[j] * self.left_values[i][j].0).sum();
            self.sigma[i] as f64 * v
        })
    }

    /// Unit-free direction of the `i`-th ray.
    pub fn ray(&self, i: usize) -> [f64; 3] {
        let lambda = self.field.root(i);
        let v: [f64; 3] = std::array::from_fn(|j| self.ray_sign[i] as f64 * self.right[j].eval_f64(lambda));
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        v.map(|c| c / norm)
    }

    /// Whether `n·r > 0` on every ray `r` of the closed cone.
    pub fn positive_on_rays(&self, n: &Point) -> bool {
        let q = (0..3).fold(Poly::new(Vec::new()), |acc, j| acc.add(&self.right[j].scale(&BigInt::from(n[j]))));
        (0..3).all(|i| sign_i8(self.field.sign_at(&q, i)) * self.ray_sign[i] > 0)
    }

    /// Lowest `z` with `(x, y, z)` in the cone.
    fn column_floor(&self, x: i64, y: i64) -> i64 {
        let mut bound = f64::NEG_INFINITY;
        for i in 0..3 {
            let [a0, a1, a2] = self.left_values[i].map(|(v, _)| v * self.sigma[i] as f64);
            // a0·x + a1·y + a2·z > 0 with a2 > 0
            bound = bound.max(-(a0 * x as f64 + a1 * y as f64) / a2);
        }
        let mut z = bound.floor() as i64 + 1;
        while !self.contains(&[x, y, z]) {
            z += 1;
        }
        while self.contains(&[x, y, z - 1]) {
            z -= 1;
        }
        z
    }

    /// Lattice points of the cone in `[-r, r]³` that are minimal: no other
    /// enumerated point `y` has `x - y` in the closed cone. Every vertex of
    /// the sail in the box is among them.
    pub fn minimal_points(&self, radius: i64) -> Vec<Point> {
        let mut columns = Vec::new();
        for x in -radius..=radius {
            for y in -radius..=radius {
                let z = self.column_floor(x, y);
                if (-radius..=radius).contains(&z) {
                    columns.push([x, y, z]);
                }
            }
        }
        pareto_minimal(self, columns)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn tol(v: f64) -> f64 {
    1e-9 * (1.0 + v.abs())
}

/// Drops points that are certainly dominated in all three cone
/// coordinates; near-ties are kept.
fn pareto_minimal(cone: &EigenCone, points: Vec<Point>) -> Vec<Point> {
    let mut items: Vec<([f64; 3], Point)> =
        points.into_iter().map(|p| (cone.coordinates(&p.map(|c| c as f64)), p)).collect();
    items.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.1.cmp(&b.1)));
    let mut keep = vec![false; items.len()];
    // staircase over (f2, f3): keys ascending, values strictly descending
    let mut stairs: BTreeMap<Key, f64> = BTreeMap::new();
    let mut inserted = 0;
    for k in 0..items.len() {
        let f = items[k].0;
        while inserted < k && items[inserted].0[0] < f[0] - tol(f[0]) {
            if keep[inserted] {
                let g = items[inserted].0;
                insert_stair(&mut stairs, g[1], g[2]);
            }
            inserted += 1;
        }
        let dominated = stairs.range(..Key(f[1] - tol(f[1]))).next_back().is_some_and(|(_, &f3)| f3 < f[2] - tol(f[2]));
        keep[k] = !dominated;
    }
    let mut out: Vec<Point> = items.into_iter().zip(keep).filter(|(_, k)| *k).map(|(it, _)| it.1).collect();
    out.sort();
    out
}

fn insert_stair(stairs: &mut BTreeMap<Key, f64>, f2: f64, f3: f64) {
    if stairs.range(..=Key(f2)).next_back().is_some_and(|(_, &v)| v <= f3) {
        return;
    }
    let stale: Vec<Key> = stairs.range(Key(f2)..).take_while(|(_, &v)| v >= f3).map(|(k, _)| *k).collect();
    for k in stale {
        stairs.remove(&k);
    }
    stairs.insert(Key(f2), f3);
}

/// `n` made primitive.
pub fn primitive(n: [i64; 3]) -> [i64; 3] {
    let g = n.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
    if g == 0 {
        n
    } else {
        n.map(|v| v / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_zero(p: &Point) -> bool {
        p.iter().all(|v| *v == 0)
    }

    fn golden() -> IntMatrix {
        IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]])
    }

    #[test]
    fn cone_contains_e3_and_rays_are_eigenvectors() {
        let c = golden();
        let cone = eigen_cone(&c).unwrap();
        assert!(cone.contains(&[0, 0, 1]));
        assert!(!cone.contains(&[0, 0, -1]));
        for i in 0..3 {
            let r = cone.ray(i);
            let lambda = cone.field.root(i);
            let cr: Vec<f64> =
                (0..3).map(|a| (0..3).map(|b| c.get(a, b).to_string().parse::<f64>().unwrap() * r[b]).sum()).collect();
            for a in 0..3 {
                assert!((cr[a] - lambda * r[a]).abs() < 1e-9);
            }
            // rays sit on the boundary: two coordinates vanish, one is positive
            let k = cone.coordinates(&r);
            for (j, v) in k.iter().enumerate() {
                if j == i {
                    assert!(*v > 1e-9);
                } else {
                    assert!(v.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn reducible_and_elliptic_inputs_are_rejected() {
        assert!(eigen_cone(&IntMatrix::identity(3)).is_err());
        assert_eq!(
            eigen_cone(&IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]])).unwrap_err(),
            Error::NotHyperbolic
        );
    }

    #[test]
    fn minimal_points_are_not_dominated() {
        let cone = eigen_cone(&golden()).unwrap();
        let pts = cone.minimal_points(6);
        assert!(pts.contains(&[0, 0, 1]));
        // brute-force oracle over every lattice point of the box
        let mut all = Vec::new();
        for x in -6..=6i64 {
            for y in -6..=6i64 {
                for z in -6..=6i64 {
                    if cone.contains(&[x, y, z]) {
                        all.push([x, y, z]);
                    }
                }
            }
        }
        let in_closed = |d: Point| is_zero(&d) || (0..3).all(|i| cone.side(&d, i) != Ordering::Less);
        for p in &all {
            let dominated = all.iter().any(|q| q != p && in_closed([p[0] - q[0], p[1] - q[1], p[2] - q[2]]));
            assert_eq!(!dominated, pts.contains(p), "{p:?}");
        }
    }
}
