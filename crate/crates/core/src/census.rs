//! Enumeration of integer matrices on an L1-sphere and the census of
//! `M(3,Z)` / `H(3,Z)` members by norm.

use serde::Serialize;

use crate::arith::IntMatrix;
use crate::error::{Error, Result};
use crate::parallel::Workers;

pub const DEFAULT_CENSUS_CAP: u32 = 7;

const CHUNK: usize = 4096;

/// Class of a square integer matrix with respect to `M(k,Z) ⊃ H(k,Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MatrixClass {
    /// Characteristic polynomial has a rational root.
    #[serde(rename = "reducible")]
    Reducible,
    /// Irreducible, but not all eigenvalues real.
    #[serde(rename = "M")]
    MOnly,
    /// Irreducible with three real eigenvalues.
    #[serde(rename = "H")]
    Hyperbolic,
}

impl MatrixClass {
    pub fn tag(self) -> &'static str {
        match self {
            MatrixClass::Reducible => "reducible",
            MatrixClass::MOnly => "M",
            MatrixClass::Hyperbolic => "H",
        }
    }

    pub fn in_m(self) -> bool {
        self != MatrixClass::Reducible
    }
}

pub fn classify_matrix(m: &IntMatrix) -> MatrixClass {
    if !m.is_irreducible() {
        MatrixClass::Reducible
    } else if m.char_discriminant() > 0.into() {
        MatrixClass::Hyperbolic
    } else {
        MatrixClass::MOnly
    }
}

/// Successor order on a single entry: 0, -1, 1, -2, 2, ...
fn next_key(v: i64) -> i64 {
    if v <= 0 {
        -v + if v == 0 { -1 } else { 0 }
    } else {
        -(v + 1)
    }
}

/// Every `dim × dim` integer matrix with entry L1-norm exactly `n`, once
/// each, in lexicographic order on the row-major entry vector where entries
/// compare by absolute value and then negative before positive.
#[derive(Clone, Debug)]
pub struct L1Sphere {
    dim: usize,
    norm: i64,
    current: Option<Vec<i64>>,
    started: bool,
}

pub fn enumerate_norm(dim: usize, n: u32) -> Result<L1Sphere> {
    if dim != 2 && dim != 3 {
        return Err(Error::Dimension(dim));
    }
    let mut first = vec![0; dim * dim];
    fill_minimal(&mut first, 0, n as i64);
    Ok(L1Sphere { dim, norm: n as i64, current: Some(first), started: false })
}

/// Smallest completion of positions `from..` carrying `budget`: zeros and
/// `-budget` last.
fn fill_minimal(v: &mut [i64], from: usize, budget: i64) {
    for x in v[from..].iter_mut() {
        *x = 0;
    }
    if let Some(last) = v.last_mut() {
        *last = -budget;
    }
}

impl L1Sphere {
    fn advance(&mut self) -> bool {
        let Some(v) = self.current.as_mut() else { return false };
        let len = v.len();
        let mut prefix: Vec<i64> = Vec::with_capacity(len);
        let mut acc = 0;
        for x in v.iter() {
            prefix.push(acc);
            acc += x.abs();
        }
        for i in (0..len).rev() {
            let budget = self.norm - prefix[i];
            let mut cand = next_key(v[i]);
            while cand.abs() <= budget {
                let rest = budget - cand.abs();
                if i == len - 1 {
                    if rest == 0 {
                        v[i] = cand;
                        return true;
                    }
                } else {
                    v[i] = cand;
                    fill_minimal(v, i + 1, rest);
                    return true;
                }
                cand = next_key(cand);
            }
        }
        false
    }
}

impl Iterator for L1Sphere {
    type Item = IntMatrix;

    fn next(&mut self) -> Option<IntMatrix> {
        if self.started && !self.advance() {
            self.current = None;
        }
        self.started = true;
        let v = self.current.as_ref()?;
        Some(IntMatrix::from_i64(self.dim, v).expect("dimension checked at construction"))
    }
}

/// Closed-form size of the L1-sphere of radius `n` in `Z^d`:
/// `Σ_k C(d,k) · 2^k · C(n-1,k-1)`.
pub fn sphere_size(d: u64, n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=d.min(n)).map(|k| binomial(d, k) * (1 << k) * binomial(n - 1, k - 1)).sum()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub dim: usize,
    pub norm: u32,
    pub total_enumerated: u64,
    pub count_m: u64,
    pub count_h: u64,
}

impl CensusReport {
    pub fn csv_header() -> &'static str {
        "norm,count_M,count_H"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.norm, self.count_m, self.count_h)
    }
}

/// Runs `visit` on every matrix of the sphere with its class, in enumeration
/// order. Classification is spread over `workers`.
pub fn census_visit(
    dim: usize,
    n: u32,
    cap: u32,
    workers: &Workers,
    mut visit: impl FnMut(&IntMatrix, MatrixClass),
) -> Result<CensusReport> {
    if n > cap {
        return Err(Error::CapExceeded { norm: n, cap });
    }
    let mut report = CensusReport { dim, norm: n, total_enumerated: 0, count_m: 0, count_h: 0 };
    let mut stream = enumerate_norm(dim, n)?;
    loop {
        let chunk: Vec<IntMatrix> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let classes = workers.map(&chunk, classify_matrix);
        for (m, class) in chunk.iter().zip(classes) {
            report.total_enumerated += 1;
            match class {
                MatrixClass::Hyperbolic => {
                    report.count_m += 1;
                    report.count_h += 1;
                }
                MatrixClass::MOnly => report.count_m += 1,
                MatrixClass::Reducible => {}
            }
            visit(m, class);
        }
    }
    Ok(report)
}

pub fn census(dim: usize, n: u32, cap: u32, workers: &Workers) -> Result<CensusReport> {
    census_visit(dim, n, cap, workers, |_, _| {})
}

/// All members of `M(dim,Z)` with norm exactly `n`, in enumeration order.
pub fn members(dim: usize, n: u32, cap: u32, workers: &Workers, hyperbolic_only: bool) -> Result<Vec<IntMatrix>> {
    let mut out = Vec::new();
    census_visit(dim, n, cap, workers, |m, class| {
        let keep = if hyperbolic_only { class == MatrixClass::Hyperbolic } else { class.in_m() };
        if keep {
            out.push(m.clone());
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn entry_order() {
        let mut v = 0;
        let seq: Vec<i64> = (0..6)
            .map(|_| {
                let out = v;
                v = next_key(v);
                out
            })
            .collect();
        assert_eq!(seq, vec![0, -1, 1, -2, 2, -3]);
    }

    #[test]
    fn small_spheres() {
        assert_eq!(enumerate_norm(3, 0).unwrap().count(), 1);
        assert_eq!(enumerate_norm(3, 1).unwrap().count(), 18);
        let first: Vec<String> = enumerate_norm(2, 1).unwrap().map(|m| m.to_string()).collect();
        assert_eq!(
            first,
            vec!["0,0;0,-1", "0,0;0,1", "0,0;-1,0", "0,0;1,0", "0,-1;0,0", "0,1;0,0", "-1,0;0,0", "1,0;0,0"]
        );
        assert!(enumerate_norm(4, 1).is_err());
    }

    #[test]
    fn sphere_sizes_match_closed_form() {
        assert_eq!(sphere_size(9, 6), 53_154);
        for n in 0..=6u32 {
            let all: Vec<IntMatrix> = enumerate_norm(3, n).unwrap().collect();
            assert_eq!(all.len() as u64, sphere_size(9, n as u64));
            let distinct: HashSet<&IntMatrix> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.iter().all(|m| m.norm() == n.into()));
        }
        for n in 0..=6u32 {
            assert_eq!(enumerate_norm(2, n).unwrap().count() as u64, sphere_size(4, n as u64));
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_matrix(&IntMatrix::identity(3)), MatrixClass::Reducible);
        let m031 = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 3, 0]]);
        assert_eq!(classify_matrix(&m031), MatrixClass::Hyperbolic);
        let cbrt2 = IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]]);
        assert_eq!(classify_matrix(&cbrt2), MatrixClass::MOnly);
    }

    #[test]
    fn census_small_norms() {
        let w = Workers::new(1).unwrap();
        for n in 0..=3 {
            assert_eq!(census(3, n, DEFAULT_CENSUS_CAP, &w).unwrap().count_m, 0);
        }
        let r4 = census(3, 4, DEFAULT_CENSUS_CAP, &w).unwrap();
        assert_eq!((r4.count_m, r4.count_h), (240, 0));
        assert!(matches!(census(3, 8, DEFAULT_CENSUS_CAP, &w), Err(Error::CapExceeded { norm: 8, cap: 7 })));
    }

    #[test]
    fn transposition_preserves_counts() {
        let w = Workers::new(1).unwrap();
        let mut m = 0;
        let mut h = 0;
        for mat in enumerate_norm(3, 5).unwrap() {
            match classify_matrix(&mat.transpose()) {
                MatrixClass::Hyperbolic => {
                    m += 1;
                    h += 1
                }
                MatrixClass::MOnly => m += 1,
                _ => {}
            }
        }
        let r = census(3, 5, DEFAULT_CENSUS_CAP, &w).unwrap();
        assert_eq!((r.count_m, r.count_h), (m, h));
    }

    #[test]
    fn worker_count_does_not_change_census() {
        let one = census(3, 5, DEFAULT_CENSUS_CAP, &Workers::new(1).unwrap()).unwrap();
        let four = census(3, 5, DEFAULT_CENSUS_CAP, &Workers::new(4).unwrap()).unwrap();
        assert_eq!(one, four);
    }
}
