//! Sampling-based verification of coverings, cap densities and the volume
//! and surface of unions of enlarged balls.
//!
//! Every estimator is deterministic: sphere samples are quadrature grids and
//! Monte Carlo streams are keyed by an explicit seed and a fixed chunk index,
//! so results do not depend on the number of worker threads.

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cap_area, unit_angle, RealVec3};
use crate::grid::SpatialGrid;
use crate::packing::{contact_directions, contact_graph, contact_number_brute_force, gen_fcc_octahedron, octahedron_size, Packing};

pub const DEFAULT_COVERING_SAMPLES: usize = 200_000;
pub const DEFAULT_SURFACE_SAMPLES: usize = 50_000;
pub const DEFAULT_VOLUME_SAMPLES: usize = 10_000_000;
/// Slack allowed when comparing a covering radius with a cap angle.
pub const COVERING_SLACK: f64 = 1e-6;
/// Contact directions of a packing are at least this far apart.
pub const MIN_SEPARATION: f64 = PI / 3.0 - 1e-9;

const MC_CHUNK: usize = 1 << 16;
const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleScheme {
    FibonacciSpiral,
    SubdividedIcosahedron,
}

/// A fixed set of unit vectors used as a quadrature grid on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSample {
    points: Vec<RealVec3>,
    scheme: SampleScheme,
}

impl SphereSample {
    /// `n` points on the golden-angle spiral, evenly spread in `z`.
    pub fn fibonacci(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("sphere sample needs at least one point".into()));
        }
        let golden = PI * (3.0 - 5f64.sqrt());
        let points = (0..n)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / n as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden * i as f64;
                RealVec3::new(r * phi.cos(), r * phi.sin(), z)
            })
            .collect();
        Ok(SphereSample { points, scheme: SampleScheme::FibonacciSpiral })
    }

    /// Vertices of the icosahedron with every edge split into `frequency`
    /// parts, projected to the sphere: `10 f² + 2` points.
    pub fn icosahedral(frequency: usize) -> Result<Self> {
        if frequency == 0 {
            return Err(Error::Domain("icosahedral frequency must be positive".into()));
        }
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let v: Vec<RealVec3> = [
            [-1.0, t, 0.0], [1.0, t, 0.0], [-1.0, -t, 0.0], [1.0, -t, 0.0],
            [0.0, -1.0, t], [0.0, 1.0, t], [0.0, -1.0, -t], [0.0, 1.0, -t],
            [t, 0.0, -1.0], [t, 0.0, 1.0], [-t, 0.0, -1.0], [-t, 0.0, 1.0],
        ]
        .iter()
        .map(|&[x, y, z]| RealVec3::new(x, y, z))
        .collect();
        let faces = [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ];
        let f = frequency as f64;
        let mut seen = HashSet::new();
        let mut points = Vec::with_capacity(10 * frequency * frequency + 2);
        for [a, b, c] in faces {
            for i in 0..=frequency {
                for j in 0..=frequency - i {
                    let w = (frequency - i - j) as f64;
                    let p = (v[a] * w + v[b] * i as f64 + v[c] * j as f64) * (1.0 / f);
                    let u = p.normalized().expect("barycentric points avoid the origin");
                    let key = ((u.x * 1e9).round() as i64, (u.y * 1e9).round() as i64, (u.z * 1e9).round() as i64);
                    if seen.insert(key) {
                        points.push(u);
                    }
                }
            }
        }
        Ok(SphereSample { points, scheme: SampleScheme::SubdividedIcosahedron })
    }

    pub fn points(&self) -> &[RealVec3] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn scheme(&self) -> SampleScheme {
        self.scheme
    }
}

fn check_unit(dirs: &[RealVec3]) -> Result<()> {
    for d in dirs {
        if !d.is_finite() || (d.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidDirection(format!("{:?} is not a unit vector", d.to_array())));
        }
    }
    Ok(())
}

/// Contact directions of one ball together with the angular radius of the
/// caps placed on them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapConfiguration {
    directions: Vec<RealVec3>,
    cap_angle: f64,
}

impl CapConfiguration {
    pub fn new(directions: Vec<RealVec3>, cap_angle: f64) -> Result<Self> {
        check_unit(&directions)?;
        if !(cap_angle > 0.0 && cap_angle <= PI) {
            return Err(Error::Domain(format!("cap angle must lie in (0, π], got {cap_angle}")));
        }
        Ok(CapConfiguration { directions, cap_angle })
    }

    pub fn directions(&self) -> &[RealVec3] {
        &self.directions
    }

    pub fn cap_angle(&self) -> f64 {
        self.cap_angle
    }

    /// Smallest pairwise angle between directions, `π` for fewer than two.
    pub fn min_separation(&self) -> f64 {
        let d = &self.directions;
        let mut best = PI;
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                best = best.min(unit_angle(&d[i], &d[j]));
            }
        }
        best
    }
}

/// The 12 directions `(±1, ±1, 0)/√2` and permutations.
pub fn cuboctahedral_directions() -> Vec<RealVec3> {
    crate::geometry::FCC_NEIGHBOR_OFFSETS
        .iter()
        .map(|&[a, b, c]| RealVec3::new(a as f64, b as f64, c as f64).normalized().expect("nonzero offset"))
        .collect()
}

/// Angular distance from `u` to the nearest direction.
fn gap(u: &RealVec3, dirs: &[RealVec3]) -> f64 {
    let nearest = dirs
        .iter()
        .max_by(|a, b| a.dot(u).total_cmp(&b.dot(u)))
        .expect("direction set is nonempty");
    unit_angle(u, nearest)
}

/// Pattern search on the sphere for a local maximum of `gap`, starting at `u`.
fn refine(u: RealVec3, dirs: &[RealVec3]) -> f64 {
    const MOVES: usize = 16;
    let mut p = u;
    let mut best = gap(&p, dirs);
    let mut step = 0.02;
    let mut twist = 0.0f64;
    while step > 1e-11 {
        let helper = if p.x.abs() < 0.9 { RealVec3::new(1.0, 0.0, 0.0) } else { RealVec3::new(0.0, 1.0, 0.0) };
        let e1 = p.cross(&helper).normalized().expect("helper is not parallel to p");
        let e2 = p.cross(&e1);
        let mut moved = false;
        for m in 0..MOVES {
            let th = twist + 2.0 * PI * m as f64 / MOVES as f64;
            let Some(q) = (p + (e1 * th.cos() + e2 * th.sin()) * step).normalized() else { continue };
            let g = gap(&q, dirs);
            if g > best {
                best = g;
                p = q;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
            twist += 0.618_033_988_75 * 2.0 * PI / MOVES as f64;
        }
    }
    best
}

/// Largest angular distance from a point of the sphere to the nearest
/// direction, using the default sample and refinement.
pub fn covering_radius(directions: &[RealVec3]) -> Result<f64> {
    covering_radius_with(directions, &SphereSample::fibonacci(DEFAULT_COVERING_SAMPLES)?)
}

/// Covering radius from a given sample, refined by local search around the
/// worst sample points.
pub fn covering_radius_with(directions: &[RealVec3], sample: &SphereSample) -> Result<f64> {
    if directions.is_empty() {
        return Err(Error::Domain("covering radius needs at least one direction".into()));
    }
    check_unit(directions)?;
    let gaps: Vec<f64> = sample.points().par_iter().map(|u| gap(u, directions)).collect();
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_by(|&a, &b| gaps[b].total_cmp(&gaps[a]).then(a.cmp(&b)));
    let sampled = gaps[order[0]];
    let refined = order
        .par_iter()
        .take(24)
        .map(|&i| refine(sample.points()[i], directions))
        .reduce(|| 0.0, f64::max);
    Ok(sampled.max(refined))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringCheck {
    pub covering_radius: f64,
    /// Angular radius `arccos(1/r)` of a neighbour's enlarged ball seen on
    /// the enlarged sphere.
    pub cap_angle: f64,
    /// `cap_angle − covering_radius`; negative when a gap remains.
    pub margin: f64,
    pub pass: bool,
}

/// Whether the enlarged neighbours cover the boundary of the enlarged
/// central ball of radius `r`.
pub fn covering_check(directions: &[RealVec3], r: f64) -> Result<CoveringCheck> {
    covering_check_with(directions, r, &SphereSample::fibonacci(DEFAULT_COVERING_SAMPLES)?)
}

pub fn covering_check_with(directions: &[RealVec3], r: f64, sample: &SphereSample) -> Result<CoveringCheck> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("enlargement must exceed 1, got {r}")));
    }
    let radius = covering_radius_with(directions, sample)?;
    let cap_angle = (1.0 / r).acos();
    Ok(CoveringCheck { covering_radius: radius, cap_angle, margin: cap_angle - radius, pass: radius <= cap_angle + COVERING_SLACK })
}

/// A sampled quantity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0 }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 { 0.0 } else { self.stderr / self.value.abs() }
    }
}

/// Area of the union of the caps of `config`, from the fraction of sample
/// points inside some cap.
pub fn cap_union_area(config: &CapConfiguration) -> Result<Estimate> {
    Ok(cap_union_area_with(config, &SphereSample::fibonacci(DEFAULT_COVERING_SAMPLES)?))
}

pub fn cap_union_area_with(config: &CapConfiguration, sample: &SphereSample) -> Estimate {
    let cos_a = config.cap_angle.cos();
    let inside = sample
        .points()
        .par_iter()
        .filter(|u| config.directions.iter().any(|d| d.dot(u) >= cos_a))
        .count();
    let n = sample.count() as f64;
    let f = inside as f64 / n;
    Estimate { value: 4.0 * PI * f, stderr: 4.0 * PI * (f * (1.0 - f) / n).sqrt() }
}

/// `Σ area(C(u, π/6)) / area(∪ C(u, α))` over the directions of `config`;
/// the cap angle of `config` is ignored in favour of `alpha`.
pub fn molnar_ratio(directions: &[RealVec3], alpha: f64) -> Result<f64> {
    molnar_ratio_with(directions, alpha, &SphereSample::fibonacci(DEFAULT_COVERING_SAMPLES)?)
}

pub fn molnar_ratio_with(directions: &[RealVec3], alpha: f64, sample: &SphereSample) -> Result<f64> {
    let config = CapConfiguration::new(directions.to_vec(), alpha)?;
    if directions.is_empty() {
        return Err(Error::InvalidConfiguration("no directions".into()));
    }
    let sep = config.min_separation();
    if sep < MIN_SEPARATION {
        return Err(Error::InvalidConfiguration(format!("directions only {sep} rad apart; π/6 caps overlap")));
    }
    let packed = directions.len() as f64 * cap_area(PI / 6.0)?;
    Ok(packed / cap_union_area_with(&config, sample).value)
}

/// Largest molnar ratio over all balls of a packing that have contacts.
pub fn max_molnar_ratio(p: &Packing, alpha: f64, sample: &SphereSample) -> Result<Option<f64>> {
    let g = contact_graph(p)?;
    let mut best: Option<f64> = None;
    for i in 0..p.len() {
        if g.degree()[i] == 0 {
            continue;
        }
        let dirs = contact_directions(&g, p, i)?;
        let r = molnar_ratio_with(&dirs, alpha, sample)?;
        best = Some(best.map_or(r, |b| b.max(r)));
    }
    Ok(best)
}

fn check_enlargement(r: f64) -> Result<()> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("enlargement must be at least 1, got {r}")));
    }
    Ok(())
}

fn check_valid(p: &Packing) -> Result<()> {
    let report = crate::packing::validate(p);
    if let Some(&(i, j)) = report.duplicates.first() {
        return Err(Error::Duplicate { i, j });
    }
    if let Some(o) = report.overlaps.first() {
        return Err(Error::Overlap { i: o.i, j: o.j, distance: o.distance });
    }
    Ok(())
}

/// Monte Carlo estimate of the volume of `∪(c_i + rB)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub volume: Estimate,
    /// `n·(4π/3) / volume`.
    pub density: Estimate,
    pub samples: usize,
    pub seed: u64,
}

/// Uniform sampling of the bounding box of the enlarged balls. The sample
/// stream is split into fixed chunks, each with its own ChaCha stream, and
/// hit counts are summed in chunk order.
pub fn union_volume_mc(p: &Packing, r: f64, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    check_enlargement(r)?;
    if samples == 0 {
        return Err(Error::Domain("Monte Carlo needs at least one sample".into()));
    }
    if p.is_empty() {
        return Err(Error::Domain("packing is empty".into()));
    }
    check_valid(p)?;
    let centers = p.real_centers();
    let mut lo = centers[0];
    let mut hi = centers[0];
    for c in &centers {
        lo = RealVec3::new(lo.x.min(c.x), lo.y.min(c.y), lo.z.min(c.z));
        hi = RealVec3::new(hi.x.max(c.x), hi.y.max(c.y), hi.z.max(c.z));
    }
    let lo = lo - RealVec3::new(r, r, r);
    let ext = hi + RealVec3::new(r, r, r) - lo;
    let box_volume = ext.x * ext.y * ext.z;
    let grid = SpatialGrid::new(&centers, r);
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: Vec<usize> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            (0..len)
                .filter(|_| {
                    let q = lo + RealVec3::new(ext.x * rng.gen::<f64>(), ext.y * rng.gen::<f64>(), ext.z * rng.gen::<f64>());
                    grid.any_strictly_within(&q, r, None)
                })
                .count()
        })
        .collect();
    let n = samples as f64;
    let f = hits.iter().sum::<usize>() as f64 / n;
    let volume = Estimate { value: box_volume * f, stderr: box_volume * (f * (1.0 - f) / n).sqrt() };
    let balls = p.len() as f64 * 4.0 * PI / 3.0;
    let density = if volume.value > 0.0 {
        let d = balls / volume.value;
        Estimate { value: d, stderr: d * volume.relative_error() }
    } else {
        Estimate { value: f64::INFINITY, stderr: f64::INFINITY }
    };
    Ok(VolumeEstimate { volume, density, samples, seed })
}

/// Boundary area of `∪(c_i + rB)`: each sphere of radius `r` contributes the
/// fraction of its sample points lying outside every other enlarged ball.
pub fn union_surface(p: &Packing, r: f64, per_ball_samples: usize) -> Result<Estimate> {
    check_enlargement(r)?;
    check_valid(p)?;
    let sample = SphereSample::fibonacci(per_ball_samples)?;
    let centers = p.real_centers();
    let grid = SpatialGrid::new(&centers, r);
    let n = sample.count() as f64;
    let sphere = 4.0 * PI * r * r;
    let parts: Vec<(f64, f64)> = centers
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let exposed = sample.points().iter().filter(|u| !grid.any_strictly_within(&(*c + **u * r), r, Some(i))).count();
            let f = exposed as f64 / n;
            (sphere * f, sphere * sphere * f * (1.0 - f) / n)
        })
        .collect();
    let area = parts.iter().map(|x| x.0).sum();
    let var: f64 = parts.iter().map(|x| x.1).sum();
    Ok(Estimate { value: area, stderr: var.sqrt() })
}

/// Relative slack for floating rounding when both estimates are exact.
const ISOPERIMETRIC_ROUNDING: f64 = 1e-12;

/// `36π V² ≤ A³ (1 + 3 s)` with `s` the combined relative standard error of
/// `V²` and `A³`.
pub fn isoperimetric_check(volume: Estimate, area: Estimate) -> Result<bool> {
    if !(volume.value > 0.0) || !(area.value > 0.0) {
        return Err(Error::Domain("volume and area must be positive".into()));
    }
    let s = ((2.0 * volume.relative_error()).powi(2) + (3.0 * area.relative_error()).powi(2)).sqrt();
    let lhs = 36.0 * PI * volume.value * volume.value;
    let rhs = area.value.powi(3) * (1.0 + 3.0 * s + ISOPERIMETRIC_ROUNDING);
    Ok(lhs <= rhs)
}

/// Contact count of the octahedral cluster against both closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OctahedralCountReport {
    pub k: u64,
    pub n: u64,
    pub counted: u64,
    /// `4k³ − 6k² + 2k`.
    pub cubic: u64,
    /// `6n − 6k²`.
    pub from_n: u64,
    /// Sum of the counts by layer type.
    pub breakdown: u64,
}

/// Contacts by position in the octahedron: inner balls with 12, balls in the
/// open facets with 9, on open edges with 7, at vertices with 4 (each
/// halved for the edge count).
fn octahedron_breakdown(k: i128) -> i128 {
    let t = k - 2;
    let f = k - 3;
    6 * (2 * t * t * t + t) / 3 + 36 * (f * f + f) / 2 + 42 * t + 12
}

pub fn check_octahedral_count(k: u64) -> Result<OctahedralCountReport> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    let p = gen_fcc_octahedron(k)?;
    let n = octahedron_size(k);
    if p.len() as u64 != n {
        return Err(Error::Inconsistency(format!("octahedron has {} balls, expected {n}", p.len())));
    }
    let counted = contact_number_brute_force(&p) as u64;
    let cubic = 4 * k * k * k - 6 * k * k + 2 * k;
    let from_n = 6 * n - 6 * k * k;
    let breakdown = octahedron_breakdown(k as i128) as u64;
    let rep = OctahedralCountReport { k, n, counted, cubic, from_n, breakdown };
    if counted != cubic || counted != from_n || counted != breakdown {
        return Err(Error::Inconsistency(format!("octahedron k = {k}: {rep:?}")));
    }
    Ok(rep)
}

/// Uniform JSON record for a verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub inputs: serde_json::Value,
    pub computed: f64,
    pub reference: f64,
    pub margin: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(check: &str, inputs: serde_json::Value, computed: f64, reference: f64, margin: f64, pass: bool) -> Self {
        VerificationReport { check: check.to_string(), inputs, computed, reference, margin, pass }
    }
}
