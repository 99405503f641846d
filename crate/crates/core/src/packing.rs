//! Packings of unit balls, their contact graphs and explicit constructions.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{tolerance, FccPoint, RealVec3};
use crate::grid::SpatialGrid;

/// Ball centers, either exact fcc lattice points or real coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "representation", content = "centers", rename_all = "kebab-case")]
pub enum Centers {
    ExactFcc(Vec<FccPoint>),
    Real(Vec<RealVec3>),
}

/// A finite family of unit balls given by their centers.
///
/// Construction does not validate; call [`validate`] or [`contact_graph`]
/// (which validates first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Packing {
    centers: Centers,
}

impl Packing {
    pub fn fcc(points: Vec<FccPoint>) -> Self {
        Packing { centers: Centers::ExactFcc(points) }
    }

    pub fn real(points: Vec<RealVec3>) -> Self {
        Packing { centers: Centers::Real(points) }
    }

    pub fn centers(&self) -> &Centers {
        &self.centers
    }

    pub fn len(&self) -> usize {
        match &self.centers {
            Centers::ExactFcc(p) => p.len(),
            Centers::Real(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact_fcc(&self) -> bool {
        matches!(self.centers, Centers::ExactFcc(_))
    }

    pub fn fcc_points(&self) -> Option<&[FccPoint]> {
        match &self.centers {
            Centers::ExactFcc(p) => Some(p),
            Centers::Real(_) => None,
        }
    }

    /// Real-coordinate centers (fcc points are scaled by √2).
    pub fn real_centers(&self) -> Vec<RealVec3> {
        match &self.centers {
            Centers::ExactFcc(p) => p.iter().map(FccPoint::to_real).collect(),
            Centers::Real(p) => p.clone(),
        }
    }

    /// The same balls in real coordinates.
    pub fn to_real(&self) -> Packing {
        Packing::real(self.real_centers())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapPair {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

/// Outcome of [`validate`]; never an error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub n: usize,
    pub duplicates: Vec<(usize, usize)>,
    pub overlaps: Vec<OverlapPair>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.duplicates.is_empty() && self.overlaps.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if let Some(&(i, j)) = self.duplicates.first() {
            return Err(Error::Duplicate { i, j });
        }
        if let Some(o) = self.overlaps.first() {
            return Err(Error::Overlap { i: o.i, j: o.j, distance: o.distance });
        }
        Ok(())
    }
}

/// Report coincident centers and pairs closer than 2.
pub fn validate(p: &Packing) -> ValidityReport {
    let mut duplicates = Vec::new();
    let mut overlaps = Vec::new();
    match &p.centers {
        Centers::ExactFcc(pts) => {
            // distinct fcc points are always at least 2 apart
            fcc_index(pts, &mut duplicates);
        }
        Centers::Real(pts) => {
            let tol = tolerance();
            let grid = SpatialGrid::new(pts, 2.0);
            for (i, j) in grid.close_pairs(2.0) {
                let d = pts[i].dist(&pts[j]);
                if d == 0.0 {
                    duplicates.push((i, j));
                } else if d < 2.0 - tol {
                    overlaps.push(OverlapPair { i, j, distance: d });
                }
            }
        }
    }
    duplicates.sort_unstable();
    ValidityReport { n: p.len(), duplicates, overlaps }
}

fn fcc_index(pts: &[FccPoint], duplicates: &mut Vec<(usize, usize)>) {
    let mut index: HashMap<FccPoint, usize> = HashMap::with_capacity(pts.len());
    for (j, q) in pts.iter().enumerate() {
        if let Some(&i) = index.get(q) {
            duplicates.push((i, j));
        } else {
            index.insert(*q, j);
        }
    }
}

/// The contact graph: one edge per touching pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
}

impl ContactGraph {
    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut degree = vec![0; n];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        if let Some(i) = degree.iter().position(|&d| d > 12) {
            return Err(Error::Inconsistency(format!(
                "ball {i} has {} touching neighbours, more than the kissing number 12",
                degree[i]
            )));
        }
        Ok(ContactGraph { n, edges, degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self) -> &[usize] {
        &self.degree
    }

    pub fn contact_number(&self) -> usize {
        self.edges.len()
    }

    /// Indices touching ball `i`, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    /// `hist[d]` = number of balls with exactly `d` contacts.
    pub fn degree_histogram(&self) -> [usize; 13] {
        let mut h = [0; 13];
        for &d in &self.degree {
            h[d] += 1;
        }
        h
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }
}

/// Contact graph of a valid packing.
///
/// Exact fcc packings use the integer predicate (touching iff integer
/// squared distance 2) via a hash of lattice points; real packings use a
/// uniform grid and `|dist − 2| ≤ tolerance`.
pub fn contact_graph(p: &Packing) -> Result<ContactGraph> {
    validate(p).into_result()?;
    let edges = match &p.centers {
        Centers::ExactFcc(pts) => {
            let index: HashMap<FccPoint, usize> = pts.iter().enumerate().map(|(i, q)| (*q, i)).collect();
            let mut edges = Vec::new();
            for (i, q) in pts.iter().enumerate() {
                for nb in q.neighbors() {
                    if let Some(&j) = index.get(&nb) {
                        if j > i {
                            edges.push((i, j));
                        }
                    }
                }
            }
            edges.sort_unstable();
            edges
        }
        Centers::Real(pts) => {
            let tol = tolerance();
            let reach = 2.0 + tol;
            let grid = SpatialGrid::new(pts, reach);
            grid.close_pairs(reach)
                .into_iter()
                .filter(|&(i, j)| (pts[i].dist(&pts[j]) - 2.0).abs() <= tol)
                .collect()
        }
    };
    ContactGraph::from_edges(p.len(), edges)
}

/// Brute-force O(n²) contact count, used as a test oracle and for small inputs.
pub fn contact_number_brute_force(p: &Packing) -> usize {
    match &p.centers {
        Centers::ExactFcc(pts) => {
            let mut c = 0;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    c += pts[i].touches(&pts[j]) as usize;
                }
            }
            c
        }
        Centers::Real(pts) => {
            let tol = tolerance();
            let mut c = 0;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    c += ((pts[i].dist(&pts[j]) - 2.0).abs() <= tol) as usize;
                }
            }
            c
        }
    }
}

/// Ball counts by degree class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreePartition {
    /// Balls with exactly 12 neighbours.
    pub m: usize,
    /// Balls with at most 9 neighbours.
    pub k: usize,
    /// Balls with 10 or 11 neighbours.
    pub rest: usize,
}

pub fn degree_partition(g: &ContactGraph) -> DegreePartition {
    let mut part = DegreePartition { m: 0, k: 0, rest: 0 };
    for &d in g.degree() {
        match d {
            12 => part.m += 1,
            10 | 11 => part.rest += 1,
            _ => part.k += 1,
        }
    }
    part
}

/// Unit vectors `u_ij = ½(c_j − c_i)` towards each neighbour of ball `i`.
pub fn contact_directions(g: &ContactGraph, p: &Packing, i: usize) -> Result<Vec<RealVec3>> {
    if i >= p.len() || g.n() != p.len() {
        return Err(Error::Domain(format!("ball index {i} out of range for {} balls", p.len())));
    }
    let centers = p.real_centers();
    Ok(g.neighbors(i)
        .into_iter()
        .map(|j| (centers[j] - centers[i]).normalized().expect("touching centers are distinct"))
        .collect())
}

/// `n(k) = k(2k² + 1)/3`, the size of the octahedral fcc cluster.
pub fn octahedron_size(k: u64) -> u64 {
    k * (2 * k * k + 1) / 3
}

/// The fcc points filling a regular octahedron with `k` balls on each edge.
///
/// Points are the integer triples with `|a|+|b|+|c| ≤ k−1` and
/// `a+b+c ≡ k−1 (mod 2)`; the facets `±a±b±c = k−1` are spanned by contact
/// directions. For even `k` that set lies in the odd coset, so it is shifted
/// by `(−1, 0, 0)` onto the lattice. Output is sorted lexicographically.
pub fn gen_fcc_octahedron(k: u64) -> Result<Packing> {
    if k < 2 {
        return Err(Error::Domain(format!("octahedron needs k ≥ 2, got {k}")));
    }
    let m = (k - 1) as i64;
    let shift = if m % 2 == 0 { 0 } else { -1 };
    let mut pts = Vec::with_capacity(octahedron_size(k) as usize);
    for a in -m..=m {
        for b in -(m - a.abs())..=(m - a.abs()) {
            let rem = m - a.abs() - b.abs();
            for c in -rem..=rem {
                if (a + b + c - m).rem_euclid(2) == 0 {
                    pts.push(FccPoint::new(a + shift, b, c)?);
                }
            }
        }
    }
    pts.sort_unstable();
    Ok(Packing::fcc(pts))
}

/// The 13-ball cluster: the origin and its 12 fcc neighbours (a cuboctahedron).
pub fn gen_cuboctahedron_13() -> Packing {
    let o = FccPoint::ORIGIN;
    let mut pts = vec![o];
    pts.extend(o.neighbors());
    Packing::fcc(pts)
}

/// All fcc points with integer squared norm at most `radius_sq`.
pub fn gen_fcc_ball(radius_sq: i64) -> Result<Packing> {
    if radius_sq < 0 {
        return Err(Error::Domain(format!("radius² must be non-negative, got {radius_sq}")));
    }
    let r = (radius_sq as f64).sqrt().floor() as i64 + 1;
    let mut pts = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if (a + b + c).rem_euclid(2) == 0 && a * a + b * b + c * c <= radius_sq {
                    pts.push(FccPoint::new(a, b, c)?);
                }
            }
        }
    }
    Ok(Packing::fcc(pts))
}

fn octahedron_vertices() -> [RealVec3; 6] {
    [
        RealVec3::new(SQRT_2, 0.0, 0.0),
        RealVec3::new(0.0, SQRT_2, 0.0),
        RealVec3::new(0.0, 0.0, SQRT_2),
        RealVec3::new(-SQRT_2, 0.0, 0.0),
        RealVec3::new(0.0, -SQRT_2, 0.0),
        RealVec3::new(0.0, 0.0, -SQRT_2),
    ]
}

/// Reflection through the plane `x + y + z = √2` of the shared face.
fn reflect_through_shared_face(p: RealVec3) -> RealVec3 {
    let n = RealVec3::new(1.0, 1.0, 1.0) * (1.0 / 3f64.sqrt());
    let offset = SQRT_2 / 3f64.sqrt();
    p - n * (2.0 * (p.dot(&n) - offset))
}

/// Two regular octahedra of edge 2 glued along a triangular face: 9 centers.
///
/// The first three centers are the shared face `(√2,0,0), (0,√2,0), (0,0,√2)`,
/// the next three the rest of the first octahedron, the last three their
/// mirror images through the shared face.
pub fn gen_double_octahedron() -> Packing {
    let v = octahedron_vertices();
    let mut pts = v.to_vec();
    pts.extend(v[3..].iter().map(|&p| reflect_through_shared_face(p)));
    Packing::real(pts)
}

/// Sides of the shared face, each as (its two vertices, the opposite vertex
/// of the adjacent face in the first octahedron), in lexicographic order of
/// the vertex coordinates.
fn shared_face_sides() -> Vec<(RealVec3, RealVec3, RealVec3)> {
    let v = octahedron_vertices();
    let mut face = [v[0], v[1], v[2]];
    face.sort_by(|a, b| a.to_array().partial_cmp(&b.to_array()).expect("finite"));
    let mut sides = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let (p, q) = (face[i], face[j]);
            // the third face vertex w; the adjacent face of the first octahedron
            // across side pq holds −w
            let w = face[3 - i - j];
            sides.push((p, q, -w));
        }
    }
    sides
}

/// Points at distance `r` from each of `p`, `q`, `s` (0 or 2 solutions).
fn trilaterate(p: RealVec3, q: RealVec3, s: RealVec3, r: f64) -> Option<[RealVec3; 2]> {
    let ex = (q - p).normalized()?;
    let i = ex.dot(&(s - p));
    let ey = (s - p - ex * i).normalized()?;
    let ez = ex.cross(&ey);
    let d = (q - p).norm();
    let j = ey.dot(&(s - p));
    let x = d / 2.0;
    let y = (i * i + j * j) / (2.0 * j) - i * x / j;
    let z2 = r * r - x * x - y * y;
    if z2 < 0.0 {
        return None;
    }
    let z = z2.sqrt();
    let base = p + ex * x + ey * y;
    Some([base + ez * z, base - ez * z])
}

/// The double octahedron plus `extra` balls, one per side of the shared face,
/// each at distance 2 from the four vertices of the two faces meeting there.
pub fn gen_augmented_double_octahedron(extra: usize) -> Result<Packing> {
    if !(1..=3).contains(&extra) {
        return Err(Error::Domain(format!("extra must be 1, 2 or 3, got {extra}")));
    }
    let tol = tolerance();
    let mut pts = gen_double_octahedron().real_centers();
    for (p, q, apex) in shared_face_sides().into_iter().take(extra) {
        let mirrored = reflect_through_shared_face(apex);
        let roots = trilaterate(p, q, apex, 2.0)
            .ok_or_else(|| Error::Construction("spheres around the side do not meet".into()))?;
        let site = roots
            .into_iter()
            .find(|x| {
                (x.dist(&mirrored) - 2.0).abs() <= tol && pts.iter().all(|c| c.dist(x) >= 2.0 - tol)
            })
            .ok_or_else(|| Error::Construction("no exterior point touches all four vertices".into()))?;
        pts.push(site);
    }
    Ok(Packing::real(pts))
}
