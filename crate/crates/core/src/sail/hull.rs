//! Exact incremental convex hull of integer points, and the planar faces it
//! induces.

use std::collections::{BTreeMap, HashSet};

use super::cone::{primitive, Point};

type V = [i128; 3];

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: V, b: V) -> V {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: V, b: V) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn wide(p: &Point) -> V {
    p.map(|c| c as i128)
}

/// Outward normal of the triangle `(a, b, c)` (counter-clockwise seen from
/// outside).
fn normal(a: V, b: V, c: V) -> V {
    cross(sub(b, a), sub(c, a))
}

/// Triangles of the hull boundary as index triples, counter-clockwise from
/// outside. Empty when the points span less than three dimensions.
pub fn hull_triangles(points: &[Point]) -> Vec<[usize; 3]> {
    let pts: Vec<V> = points.iter().map(wide).collect();
    let Some(seed) = initial_simplex(&pts) else { return Vec::new() };
    let [a, b, c, d] = seed;
    let mut faces: Vec<[usize; 3]> = if dot(normal(pts[a], pts[b], pts[c]), sub(pts[d], pts[a])) < 0 {
        vec![[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    } else {
        vec![[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    };
    for (i, &p) in pts.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let visible: Vec<bool> =
            faces.iter().map(|f| dot(normal(pts[f[0]], pts[f[1]], pts[f[2]]), sub(p, pts[f[0]])) > 0).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let lit: HashSet<(usize, usize)> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, v)| **v)
            .flat_map(|(f, _)| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .collect();
        let mut next = Vec::with_capacity(faces.len() + 4);
        let mut horizon = Vec::new();
        for (f, v) in faces.iter().zip(&visible) {
            if *v {
                for (u, w) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                    if !lit.contains(&(w, u)) {
                        horizon.push((u, w));
                    }
                }
            } else {
                next.push(*f);
            }
        }
        for (u, w) in horizon {
            next.push([u, w, i]);
        }
        faces = next;
    }
    faces
}

fn initial_simplex(pts: &[V]) -> Option<[usize; 4]> {
    let a = 0;
    let b = (1..pts.len()).find(|&i| pts[i] != pts[a])?;
    let c = (1..pts.len()).find(|&i| normal(pts[a], pts[b], pts[i]) != [0, 0, 0])?;
    let n = normal(pts[a], pts[b], pts[c]);
    let d = (1..pts.len()).find(|&i| dot(n, sub(pts[i], pts[a])) != 0)?;
    Some([a, b, c, d])
}

/// A planar face of the hull: the lattice polygon of all input points on the
/// supporting plane `normal·x = level`, where `normal` is primitive and
/// points into the hull.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlaneFace {
    pub normal: Point,
    pub level: i64,
    /// Corners, counter-clockwise around `normal`, starting from the
    /// smallest.
    pub vertices: Vec<Point>,
    /// Number of input points on the face.
    pub lattice_points: usize,
}

impl PlaneFace {
    /// Area in units of the smallest lattice triangle in the face plane.
    pub fn lattice_area(&self) -> i64 {
        let n = wide(&self.normal);
        let v: Vec<V> = self.vertices.iter().map(wide).collect();
        let twice: i128 =
            (1..v.len().saturating_sub(1)).map(|k| dot(cross(sub(v[k], v[0]), sub(v[k + 1], v[0])), n)).sum();
        let nn = dot(n, n);
        debug_assert_eq!(twice % nn, 0);
        (twice / nn) as i64
    }

    /// Undirected edges as sorted endpoint pairs.
    pub fn edges(&self) -> Vec<(Point, Point)> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    }
}

/// Distinct hull facets, merged over coplanar triangles.
pub fn hull_faces(points: &[Point]) -> Vec<PlaneFace> {
    let tris = hull_triangles(points);
    let mut planes: BTreeMap<Point, i64> = BTreeMap::new();
    for t in &tris {
        let [a, b, c] = t.map(|i| wide(&points[i]));
        let out = normal(a, b, c);
        let inner = primitive(out.map(|v| -(v as i64)));
        let level = dot(wide(&inner), a) as i64;
        planes.insert(inner, level);
    }
    planes
        .into_iter()
        .map(|(n, level)| {
            let on: Vec<Point> = points.iter().copied().filter(|p| dot(wide(&n), wide(p)) == level as i128).collect();
            PlaneFace { normal: n, level, vertices: polygon(&on, n), lattice_points: on.len() }
        })
        .collect()
}

/// Convex polygon of coplanar points, oriented counter-clockwise around `n`.
fn polygon(on: &[Point], n: Point) -> Vec<Point> {
    // project away the coordinate where n is largest; orientation in the
    // projection flips with the sign of that component
    let k = (0..3).max_by_key(|&i| (n[i].abs(), std::cmp::Reverse(i))).expect("three coordinates");
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let flip = n[k] < 0;
    let mut pts: Vec<(i128, i128, Point)> = on.iter().map(|p| (p[i] as i128, p[j] as i128, *p)).collect();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().map(|t| t.2).collect();
    }
    let turn = |o: &(i128, i128, Point), a: &(i128, i128, Point), b: &(i128, i128, Point)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    // Andrew's monotone chain, counter-clockwise in the projection
    let mut hull: Vec<(i128, i128, Point)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i128, i128, Point)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    let mut verts: Vec<Point> = hull.into_iter().map(|t| t.2).collect();
    if flip {
        verts.reverse();
    }
    let first = verts.iter().enumerate().min_by_key(|(_, p)| **p).map(|(i, _)| i).unwrap_or(0);
    verts.rotate_left(first);
    verts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> Vec<Point> {
        let mut v = Vec::new();
        for x in 0..=2 {
            for y in 0..=2 {
                for z in 0..=2 {
                    v.push([x, y, z]);
                }
            }
        }
        v
    }

    #[test]
    fn cube_has_six_square_faces() {
        let faces = hull_faces(&cube());
        assert_eq!(faces.len(), 6);
        for f in &faces {
            assert_eq!(f.vertices.len(), 4);
            assert_eq!(f.lattice_points, 9);
            // a 2×2 square holds eight unit triangles
            assert_eq!(f.lattice_area(), 8);
        }
        let bottom = faces.iter().find(|f| f.normal == [0, 0, 1]).unwrap();
        assert_eq!(bottom.level, 0);
        assert_eq!(bottom.vertices, vec![[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]]);
    }

    #[test]
    fn tetrahedron_triangles_are_outward() {
        let pts = vec![[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]];
        let tris = hull_triangles(&pts[..4]);
        assert_eq!(tris.len(), 4);
        let faces = hull_faces(&pts);
        let slanted = faces.iter().find(|f| f.normal == [-1, -1, -1]).unwrap();
        assert_eq!(slanted.level, -1);
        assert_eq!(slanted.lattice_area(), 1);
    }

    #[test]
    fn flat_input_has_no_hull() {
        assert!(hull_triangles(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]).is_empty());
    }

    #[test]
    fn euler_characteristic_of_random_hulls() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<Point> = (0..60).map(|_| std::array::from_fn(|_| rng.gen_range(-9..=9))).collect();
            let faces = hull_faces(&pts);
            let mut edges = HashSet::new();
            let mut verts = HashSet::new();
            for f in &faces {
                edges.extend(f.edges());
                verts.extend(f.vertices.iter().copied());
                // every input point is on the inner side of every face
                assert!(pts.iter().all(|p| dot(wide(&f.normal), wide(p)) >= f.level as i128));
            }
            assert_eq!(verts.len() as i64 - edges.len() as i64 + faces.len() as i64, 2);
        }
    }
}
