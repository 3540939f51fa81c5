//! The face complex a sail induces on its quotient torus.
//!
//! Positive units act on the sail and, through the logarithms of the cone
//! coordinates, as translations of a plane. Each face, edge and vertex is
//! pulled back into the fundamental parallelogram of the generators and
//! compared exactly; the result is accepted only when the recovered complex
//! closes up into a torus.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::cone::Point;
use super::units::UnitGroup;
use super::SailComplex;
use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// Integer-affine invariants of the torus decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TorusInvariant {
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub face_orbits: usize,
    /// Sorted lattice areas of the face orbits.
    pub face_areas: Vec<i64>,
    /// Sorted corner counts of the face orbits.
    pub face_sizes: Vec<usize>,
}

/// One face per orbit, pulled back into the fundamental parallelogram.
#[derive(Clone, Debug, Serialize)]
pub struct FaceOrbit {
    pub vertices: Vec<Point>,
    pub normal: Point,
    pub area: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusDecomposition {
    pub invariant: TorusInvariant,
    pub faces: Vec<FaceOrbit>,
    /// One vertex per orbit.
    pub vertices: Vec<Point>,
}

/// `g1^a·g2^b` with a cache; the generators commute.
struct Action {
    gens: [IntMatrix; 2],
    invs: [IntMatrix; 2],
    cache: HashMap<(i64, i64), IntMatrix>,
}

impl Action {
    fn new(units: &UnitGroup) -> Self {
        let invs = units.generators.clone().map(|g| g.unimodular_inverse().expect("units are invertible"));
        Self { gens: units.generators.clone(), invs, cache: HashMap::new() }
    }

    fn power(&mut self, a: i64, b: i64) -> IntMatrix {
        if let Some(m) = self.cache.get(&(a, b)) {
            return m.clone();
        }
        let m = if (a, b) == (0, 0) {
            IntMatrix::identity(3)
        } else if a != 0 {
            let step = if a > 0 { &self.gens[0] } else { &self.invs[0] };
            let step = step.clone();
            step.mul(&self.power(a - a.signum(), b))
        } else {
            let step = if b > 0 { &self.gens[1] } else { &self.invs[1] };
            let step = step.clone();
            step.mul(&self.power(0, b - b.signum()))
        };
        self.cache.insert((a, b), m.clone());
        m
    }

    fn apply(&mut self, a: i64, b: i64, pts: &[Point]) -> Result<Vec<Point>> {
        let m = self.power(a, b);
        pts.iter()
            .map(|p| {
                let v: Option<Point> = (0..3)
                    .map(|i| (0..3).map(|j| m.get(i, j) * BigInt::from(p[j])).sum::<BigInt>().to_i64())
                    .collect::<Option<Vec<i64>>>()
                    .map(|v| [v[0], v[1], v[2]]);
                v.ok_or_else(|| Error::IncreaseRadius("unit orbit left the 64-bit range".into()))
            })
            .collect()
    }
}

fn sorted(mut v: Vec<Point>) -> Vec<Point> {
    v.sort();
    v
}

/// Classes of objects under the unit action, keyed by their pulled-back
/// sorted vertex lists.
struct Orbits {
    index: BTreeMap<Vec<Point>, usize>,
    parent: Vec<usize>,
}

impl Orbits {
    fn new() -> Self {
        Self { index: BTreeMap::new(), parent: Vec::new() }
    }

    fn insert(&mut self, key: Vec<Point>) {
        if !self.index.contains_key(&key) {
            self.index.insert(key, self.parent.len());
            self.parent.push(self.parent.len());
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Merges keys that differ by one generator step in either direction;
    /// these arise when a centroid sits on the parallelogram boundary.
    fn close(&mut self, action: &mut Action) -> Result<()> {
        let keys: Vec<(Vec<Point>, usize)> = self.index.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for (key, id) in keys {
            for (a, b) in NEIGHBOURS {
                let image = sorted(action.apply(a, b, &key)?);
                if let Some(&other) = self.index.get(&image) {
                    self.union(id, other);
                }
            }
        }
        Ok(())
    }

    fn class_of(&mut self, key: &[Point], action: &mut Action) -> Result<Option<usize>> {
        if let Some(&i) = self.index.get(key) {
            return Ok(Some(self.find(i)));
        }
        for (a, b) in NEIGHBOURS {
            let image = sorted(action.apply(a, b, key)?);
            if let Some(&i) = self.index.get(&image) {
                return Ok(Some(self.find(i)));
            }
        }
        Ok(None)
    }

    fn class_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

const NEIGHBOURS: [(i64, i64); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

/// Position of a point of the cone in generator coordinates.
pub(crate) fn chart(sail: &SailComplex, units: &UnitGroup, x: &[f64; 3]) -> [f64; 2] {
    let logs = sail.cone.coordinates(x).map(f64::ln);
    let mean = logs.iter().sum::<f64>() / 3.0;
    units.log_coordinates(&logs.map(|v| v - mean))
}

fn centroid(pts: &[Point]) -> [f64; 3] {
    let n = pts.len() as f64;
    std::array::from_fn(|k| pts.iter().map(|p| p[k] as f64).sum::<f64>() / n)
}

fn pull_back(sail: &SailComplex, units: &UnitGroup, action: &mut Action, pts: &[Point]) -> Result<Vec<Point>> {
    let [s, t] = chart(sail, units, &centroid(pts));
    action.apply(-(s.floor() as i64), -(t.floor() as i64), pts)
}

fn edges_of(poly: &[Point]) -> Vec<Vec<Point>> {
    let k = poly.len();
    (0..k).map(|i| sorted(vec![poly[i], poly[(i + 1) % k]])).collect()
}

/// Orbits of the certified faces of `sail` under `units`, which must
/// preserve the sail's cone.
pub fn torus_invariants(sail: &SailComplex, units: &UnitGroup) -> Result<TorusDecomposition> {
    if sail.faces.is_empty() {
        return Err(Error::IncreaseRadius(format!("no certified sail faces at radius {}", sail.radius)));
    }
    let mut action = Action::new(units);
    let mut faces = Orbits::new();
    let mut edges = Orbits::new();
    let mut verts = Orbits::new();
    let mut polygons: BTreeMap<Vec<Point>, (Vec<Point>, Point, i64)> = BTreeMap::new();
    for f in &sail.faces {
        let poly = pull_back(sail, units, &mut action, &f.vertices)?;
        let key = sorted(poly.clone());
        let normal = {
            // normals transform by the inverse transpose; recompute from the polygon
            let [a, b, c] = [poly[0], poly[1], poly[2]].map(|p| p.map(|v| v as i128));
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let w = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let n = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
            super::cone::primitive(n.map(|v| v as i64))
        };
        polygons.entry(key.clone()).or_insert((poly, normal, f.area));
        faces.insert(key);
        for e in edges_of(&f.vertices) {
            edges.insert(sorted(pull_back(sail, units, &mut action, &e)?));
        }
        for v in &f.vertices {
            verts.insert(pull_back(sail, units, &mut action, &[*v])?);
        }
    }
    faces.close(&mut action)?;
    edges.close(&mut action)?;
    verts.close(&mut action)?;

    // one representative polygon per face class
    let mut reps: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    let keys: Vec<Vec<Point>> = faces.index.keys().cloned().collect();
    for key in keys {
        let class = faces.class_of(&key, &mut action)?.expect("inserted");
        reps.entry(class).or_insert(key);
    }
    let mut incidence: HashMap<usize, usize> = HashMap::new();
    let mut face_orbits = Vec::new();
    for key in reps.values() {
        let (poly, normal, area) = polygons[key].clone();
        for e in edges_of(&poly) {
            let pulled = sorted(pull_back(sail, units, &mut action, &e)?);
            let class = edges
                .class_of(&pulled, &mut action)?
                .ok_or_else(|| Error::IncreaseRadius("an edge orbit of a face orbit was not observed".into()))?;
            *incidence.entry(class).or_default() += 1;
        }
        face_orbits.push(FaceOrbit { vertices: poly, normal, area });
    }
    let edge_count = edges.class_count();
    if incidence.len() != edge_count || incidence.values().any(|&k| k != 2) {
        let open = edge_count - incidence.values().filter(|&&k| k == 2).count();
        return Err(Error::IncreaseRadius(format!(
            "the observed faces do not cover a fundamental domain: {open} of {edge_count} edge orbits are not bounded by two face orbits"
        )));
    }
    let vertex_count = verts.class_count();
    let face_count = reps.len();
    if vertex_count + face_count != edge_count {
        return Err(Error::IncreaseRadius(format!(
            "orbit counts V={vertex_count}, E={edge_count}, F={face_count} do not close up into a torus"
        )));
    }
    let mut vertex_reps: BTreeMap<usize, Point> = BTreeMap::new();
    let vkeys: Vec<Vec<Point>> = verts.index.keys().cloned().collect();
    for key in vkeys {
        let class = verts.class_of(&key, &mut action)?.expect("inserted");
        vertex_reps.entry(class).or_insert(key[0]);
    }
    let mut face_areas: Vec<i64> = face_orbits.iter().map(|f| f.area).collect();
    face_areas.sort();
    let mut face_sizes: Vec<usize> = face_orbits.iter().map(|f| f.vertices.len()).collect();
    face_sizes.sort();
    Ok(TorusDecomposition {
        invariant: TorusInvariant {
            vertex_orbits: vertex_count,
            edge_orbits: edge_count,
            face_orbits: face_count,
            face_areas,
            face_sizes,
        },
        faces: face_orbits,
        vertices: vertex_reps.into_values().collect(),
    })
}
