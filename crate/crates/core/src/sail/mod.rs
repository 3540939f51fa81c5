//! Sails of hyperbolic 3×3 matrices: the boundary of the convex hull of the
//! nonzero lattice points in an eigen-cone, its quotient by the positive
//! units of the commutant, and invariants of the resulting torus
//! decomposition.

pub mod cone;
pub mod field;
pub mod hull;
pub mod svg;
pub mod torus;
pub mod units;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use cone::{eigen_cone, EigenCone, Point};
pub use torus::{torus_invariants, FaceOrbit, TorusDecomposition, TorusInvariant};
pub use units::{dirichlet_generators, UnitGroup};

use crate::arith::IntMatrix;
use crate::error::{Error, Result};
use crate::frobenius::{ClassificationReport, FractionClass, Provenance};
use crate::lattice::hnf_with_transform;
use crate::parallel::Workers;

/// Radii tried in turn until the torus decomposition closes.
pub const RADIUS_SCHEDULE: [i64; 5] = [16, 32, 64, 128, 256];
pub const RADIUS_CAP: i64 = 256;

/// A face of the sail, certified to be a face of the hull of all lattice
/// points of the open cone (not only those in the search box).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SailFace {
    /// Primitive normal, positive on the cone.
    pub normal: Point,
    pub level: i64,
    pub vertices: Vec<Point>,
    pub lattice_points: usize,
    pub area: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SailComplex {
    #[serde(skip)]
    pub cone: EigenCone,
    pub radius: i64,
    /// Minimal lattice points fed to the hull.
    pub candidates: usize,
    pub faces: Vec<SailFace>,
    /// Hull faces with a normal positive on the cone that could not be
    /// certified at this radius.
    pub provisional: usize,
}

impl SailComplex {
    /// Corners of the certified faces.
    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.faces.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Sail of `cone` from the lattice points in `[-radius, radius]³`.
///
/// A hull face with normal `n` and level `d` is kept when `n` is positive on
/// every ray of the closed cone and the simplex `{x ∈ K : n·x ≤ d}` lies in
/// the box. Then no lattice point of the cone lies below the face, so it is
/// a face of the true sail, and it stays one at every larger radius.
pub fn compute_sail(cone: &EigenCone, radius: i64) -> Result<SailComplex> {
    if radius < 1 {
        return Err(Error::Config("radius must be at least 1".into()));
    }
    let points = cone.minimal_points(radius);
    if points.is_empty() {
        return Err(Error::IncreaseRadius(format!("no lattice point of the cone within radius {radius}")));
    }
    let rays: [[f64; 3]; 3] = std::array::from_fn(|i| cone.ray(i));
    let limit = radius as f64 * (1.0 - 1e-9);
    let mut faces = Vec::new();
    let mut provisional = 0;
    for f in hull::hull_faces(&points) {
        if f.level <= 0 || !cone.positive_on_rays(&f.normal) {
            continue;
        }
        let inside = rays.iter().all(|r| {
            let nr: f64 = (0..3).map(|k| f.normal[k] as f64 * r[k]).sum();
            let t = f.level as f64 / nr;
            r.iter().all(|c| (t * c).abs() <= limit)
        });
        if inside {
            let area = f.lattice_area();
            faces.push(SailFace {
                normal: f.normal,
                level: f.level,
                vertices: f.vertices,
                lattice_points: f.lattice_points,
                area,
            });
        } else {
            provisional += 1;
        }
    }
    Ok(SailComplex { cone: cone.clone(), radius, candidates: points.len(), faces, provisional })
}

/// Sail of the cone containing `(0,0,1)` together with its torus
/// decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct SailAnalysis {
    pub matrix: IntMatrix,
    pub sail: SailComplex,
    pub units: UnitGroup,
    pub torus: TorusDecomposition,
}

fn schedule(start: Option<i64>) -> Vec<i64> {
    match start {
        Some(r) => {
            let mut v = vec![r.clamp(1, RADIUS_CAP)];
            while *v.last().expect("nonempty") < RADIUS_CAP {
                v.push((v.last().expect("nonempty") * 2).min(RADIUS_CAP));
            }
            v
        }
        None => RADIUS_SCHEDULE.to_vec(),
    }
}

fn analyze_cone(c: &IntMatrix, units: UnitGroup, start: Option<i64>) -> Result<SailAnalysis> {
    let cone = eigen_cone(c)?;
    let mut last = Error::IncreaseRadius("empty radius schedule".into());
    for radius in schedule(start) {
        let sail = compute_sail(&cone, radius)?;
        match torus_invariants(&sail, &units) {
            Ok(torus) => return Ok(SailAnalysis { matrix: c.clone(), sail, units, torus }),
            Err(e @ Error::IncreaseRadius(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Sail through `(0,0,1)` and its torus invariants, growing the radius from
/// `start` (or the default schedule) up to the cap.
pub fn analyze_sail(c: &IntMatrix, start: Option<i64>) -> Result<SailAnalysis> {
    let units = dirichlet_generators(c)?;
    analyze_cone(c, units, start)
}

/// The eight eigen-cones come in four pairs `±K`; each pair is named by the
/// signs of the cone coordinates relative to the cone of `(0,0,1)`.
pub const CONE_CLASSES: [[i8; 3]; 4] = [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]];

/// Smallest lattice point (sup norm, then lexicographic) in the cone with
/// sign pattern `signs`.
fn cone_point(cone: &EigenCone, signs: [i8; 3]) -> Point {
    let want = signs.map(|s| if s > 0 { Ordering::Greater } else { Ordering::Less });
    for r in 1i64.. {
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    let p = [x, y, z];
                    if p.iter().map(|v| v.abs()).max() == Some(r) && (0..3).all(|i| cone.side(&p, i) == want[i]) {
                        return p;
                    }
                }
            }
        }
    }
    unreachable!("every open cone contains lattice points")
}

/// Unimodular `P` with `P·e3 = w` for primitive `w`.
fn completing_basis(w: Point) -> (IntMatrix, IntMatrix) {
    let rows: Vec<Vec<BigInt>> = w.iter().map(|&v| vec![BigInt::from(v)]).collect();
    let (_, u, _) = hnf_with_transform(&rows);
    let u = IntMatrix::new(3, u.into_iter().flatten().collect()).expect("3×3");
    let u_inv = u.unimodular_inverse().expect("unimodular");
    let mut p = IntMatrix::zero(3);
    for (dst, src) in [(0, 1), (1, 2), (2, 0)] {
        for i in 0..3 {
            p.set(i, dst, u_inv.get(i, src).clone());
        }
    }
    let p_inv = p.unimodular_inverse().expect("unimodular");
    debug_assert!((0..3).all(|i| p.get(i, 2).to_i64() == Some(w[i])));
    (p, p_inv)
}

/// Torus invariants of all four cone pairs, sorted; unchanged when `C` is
/// replaced by an integer conjugate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FractionInvariant {
    pub cones: Vec<TorusInvariant>,
}

pub fn fraction_invariant(c: &IntMatrix) -> Result<FractionInvariant> {
    let base = eigen_cone(c)?;
    let units = dirichlet_generators(c)?;
    let mut cones = Vec::with_capacity(4);
    for signs in CONE_CLASSES {
        let w = cone_point(&base, signs);
        let (p, p_inv) = completing_basis(w);
        let moved = p_inv.mul(c).mul(&p);
        let analysis = analyze_cone(&moved, units.conjugated(&p, &p_inv), None)?;
        cones.push(analysis.torus.invariant);
    }
    cones.sort();
    Ok(FractionInvariant { cones })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinction {
    Distinct,
    /// Equal invariants; this does not prove equivalence.
    Indistinguishable,
}

pub fn invariant_distinguish(c1: &IntMatrix, c2: &IntMatrix) -> Result<Distinction> {
    if fraction_invariant(c1)? == fraction_invariant(c2)? {
        Ok(Distinction::Indistinguishable)
    } else {
        Ok(Distinction::Distinct)
    }
}

/// Agreement between class labels and sail invariants over a
/// classification report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SailCrossCheck {
    /// Labels whose matrix has the invariants of the labelled class.
    pub agree: u64,
    /// Labelled matrices whose invariants differ from their class.
    pub disagree: Vec<IntMatrix>,
    /// Unresolved matrices labelled by matching invariants.
    pub filled: u64,
    /// Matrices where the invariants could not be computed.
    pub failed: Vec<(IntMatrix, String)>,
}

impl SailCrossCheck {
    pub fn is_clean(&self) -> bool {
        self.disagree.is_empty() && self.failed.is_empty()
    }
}

/// Checks every label in `report` against the sail invariants of its
/// representative and labels the unresolved rows whose invariants match
/// exactly one representative.
pub fn cross_check(report: &mut ClassificationReport, workers: &Workers) -> Result<SailCrossCheck> {
    let mut known: Vec<(FractionClass, FractionInvariant)> = Vec::new();
    for a in &report.assignments {
        if let Some(params) = a.class.params() {
            if !known.iter().any(|(c, _)| *c == a.class) {
                known.push((a.class.clone(), fraction_invariant(&params.matrix())?));
            }
        }
    }
    for class in FractionClass::REPRESENTATIVES {
        if !known.iter().any(|(c, _)| *c == class) {
            let params = class.params().expect("representative");
            known.push((class, fraction_invariant(&params.matrix())?));
        }
    }
    let invariants = workers.map(&report.assignments, |a| fraction_invariant(&a.matrix));
    let mut check = SailCrossCheck::default();
    for (a, inv) in report.assignments.iter_mut().zip(invariants) {
        let inv = match inv {
            Ok(inv) => inv,
            Err(e) => {
                check.failed.push((a.matrix.clone(), e.to_string()));
                continue;
            }
        };
        if a.class == FractionClass::Unresolved {
            let matches: Vec<&FractionClass> = known.iter().filter(|(_, k)| *k == inv).map(|(c, _)| c).collect();
            if let [class] = matches[..] {
                a.class = class.clone();
                a.provenance = Provenance::SailInvariant;
                check.filled += 1;
            }
        } else if known.iter().any(|(c, k)| *c == a.class && *k == inv) {
            check.agree += 1;
        } else {
            check.disagree.push(a.matrix.clone());
        }
    }
    report.counts.clear();
    for a in &report.assignments {
        *report.counts.entry(a.class.clone()).or_insert(0) += 1;
    }
    Ok(check)
}
