//! Obtuse superbases, strict Voronoi vector candidates and the map into fcc.
//!
//! Every 3-dimensional lattice has an obtuse superbase `v0, v1, v2, v3`:
//! the vectors sum to zero, `v1, v2, v3` form a lattice basis and all six
//! Selling parameters `p_ij = v_i · v_j` are non-positive. Selling's
//! reduction finds one by repeatedly flipping a superbase vector across a
//! positive parameter; each step lowers `Σ |v_i|²` by `2 p_ij`.
//!
//! The superbase tracks every vector as integer coefficients over the input
//! basis, so the reduced vectors span exactly the input lattice and the
//! parameters never drift numerically. Lattices whose Gram matrix is
//! integral are reduced with exact integer comparisons.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FccPoint, RealVec3};

/// Threshold for "non-positive" on real Selling parameters.
pub const SELLING_EPS: f64 = 1e-9;
/// Default cap on Selling steps.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

const LENGTH_TWO_TOL: f64 = 1e-9;

/// Gram matrix of a basis: exact when integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gram {
    Integer([[i64; 3]; 3]),
    Real([[f64; 3]; 3]),
}

impl Gram {
    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        match self {
            Gram::Real(g) => *g,
            Gram::Integer(g) => g.map(|row| row.map(|x| x as f64)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Gram::Integer(_))
    }
}

/// A lattice basis `b1, b2, b3` with its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    vectors: [RealVec3; 3],
    gram: Gram,
}

impl LatticeBasis {
    /// Basis from explicit row vectors. The Gram matrix is stored exactly when
    /// every inner product is an integer representable in f64.
    pub fn from_vectors(vectors: [RealVec3; 3]) -> Result<Self> {
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidLattice("non-finite basis coordinate".into()));
        }
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = vectors[i].dot(&vectors[j]);
            }
        }
        let integral = g.iter().flatten().all(|x| x.fract() == 0.0 && x.abs() < 2f64.powi(52));
        let gram = if integral { Gram::Integer(g.map(|r| r.map(|x| x as i64))) } else { Gram::Real(g) };

        let det = vectors[0].dot(&vectors[1].cross(&vectors[2]));
        let scale = vectors.iter().map(|v| v.norm()).product::<f64>();
        if !(det.abs() > 1e-9 * scale) {
            return Err(Error::InvalidLattice(format!("basis is degenerate (det = {det})")));
        }
        check_positive_definite(&gram)?;
        Ok(LatticeBasis { vectors, gram })
    }

    /// Basis realised from an integral Gram matrix by Cholesky factorisation.
    pub fn from_integer_gram(gram: [[i64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
                }
            }
        }
        let exact = Gram::Integer(gram);
        check_positive_definite(&exact)?;
        let g = exact.to_f64();
        let l11 = g[0][0].sqrt();
        let l21 = g[1][0] / l11;
        let l31 = g[2][0] / l11;
        let l22 = (g[1][1] - l21 * l21).sqrt();
        let l32 = (g[2][1] - l31 * l21) / l22;
        let l33 = (g[2][2] - l31 * l31 - l32 * l32).sqrt();
        let vectors = [
            RealVec3::new(l11, 0.0, 0.0),
            RealVec3::new(l21, l22, 0.0),
            RealVec3::new(l31, l32, l33),
        ];
        Ok(LatticeBasis { vectors, gram: exact })
    }

    pub fn vectors(&self) -> &[RealVec3; 3] {
        &self.vectors
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    pub fn determinant(&self) -> f64 {
        self.vectors[0].dot(&self.vectors[1].cross(&self.vectors[2]))
    }

    /// Lattice vector with integer coordinates `x` over this basis.
    pub fn point(&self, x: [i64; 3]) -> RealVec3 {
        self.vectors[0] * x[0] as f64 + self.vectors[1] * x[1] as f64 + self.vectors[2] * x[2] as f64
    }

    /// Cubic lattice with the given side length.
    pub fn cubic(side: f64) -> Result<Self> {
        LatticeBasis::from_vectors([
            RealVec3::new(side, 0.0, 0.0),
            RealVec3::new(0.0, side, 0.0),
            RealVec3::new(0.0, 0.0, side),
        ])
    }

    /// The fcc lattice with minimum distance 2: `√2·(1,1,0), √2·(1,0,1), √2·(0,1,1)`.
    pub fn fcc() -> Self {
        let s = std::f64::consts::SQRT_2;
        LatticeBasis::from_vectors([
            RealVec3::new(s, s, 0.0),
            RealVec3::new(s, 0.0, s),
            RealVec3::new(0.0, s, s),
        ])
        .expect("fcc basis is valid")
    }
}

fn check_positive_definite(gram: &Gram) -> Result<()> {
    let ok = match gram {
        Gram::Integer(g) => {
            let g = g.map(|r| r.map(|x| x as i128));
            let m1 = g[0][0];
            let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let m3 = det3_i128(&g);
            m1 > 0 && m2 > 0 && m3 > 0
        }
        Gram::Real(g) => {
            let m1 = g[0][0];
            let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let m3 = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
            m1 > 0.0 && m2 > 0.0 && m3 > 0.0
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidLattice("Gram matrix is not positive definite".into()))
    }
}

fn det3_i128(g: &[[i128; 3]; 3]) -> i128 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Index pairs of the six Selling parameters, in lexicographic order.
pub const SELLING_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Four lattice vectors summing to zero, with their Selling parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Superbase {
    vectors: [RealVec3; 4],
    /// `v_i = Σ_j coeffs[i][j] b_j` over the originating basis.
    coeffs: [[i64; 3]; 4],
    selling: [f64; 6],
    exact: Option<[i64; 6]>,
    steps: usize,
}

impl Superbase {
    /// The trivial superbase `(-(b1+b2+b3), b1, b2, b3)` of a basis.
    pub fn from_basis(basis: &LatticeBasis) -> Self {
        let coeffs = [[-1, -1, -1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
        Superbase::from_coeffs(basis, coeffs, 0)
    }

    fn from_coeffs(basis: &LatticeBasis, coeffs: [[i64; 3]; 4], steps: usize) -> Self {
        let vectors = coeffs.map(|c| basis.point(c));
        let (selling, exact) = selling_params(&basis.gram, &coeffs);
        Superbase { vectors, coeffs, selling, exact, steps }
    }

    pub fn vectors(&self) -> &[RealVec3; 4] {
        &self.vectors
    }

    pub fn coeffs(&self) -> &[[i64; 3]; 4] {
        &self.coeffs
    }

    /// Selling parameters in [`SELLING_PAIRS`] order.
    pub fn selling(&self) -> &[f64; 6] {
        &self.selling
    }

    pub fn selling_at(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let idx = SELLING_PAIRS.iter().position(|&p| p == (i, j)).expect("distinct indices");
        self.selling[idx]
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_reduced(&self) -> bool {
        match self.exact {
            Some(p) => p.iter().all(|&x| x <= 0),
            None => self.selling.iter().all(|&x| x <= SELLING_EPS),
        }
    }

    /// `|det(v1, v2, v3)|`.
    pub fn volume(&self) -> f64 {
        self.vectors[1].dot(&self.vectors[2].cross(&self.vectors[3])).abs()
    }

    /// Sum of the vectors in `mask` (bit `i` selects `v_i`).
    pub fn subset_sum(&self, mask: u8) -> RealVec3 {
        (0..4).filter(|i| mask & (1 << i) != 0).fold(RealVec3::ZERO, |acc, i| acc + self.vectors[i])
    }
}

fn selling_params(gram: &Gram, coeffs: &[[i64; 3]; 4]) -> ([f64; 6], Option<[i64; 6]>) {
    match gram {
        Gram::Integer(g) => {
            let p = SELLING_PAIRS.map(|(i, j)| {
                let mut s = 0i128;
                for a in 0..3 {
                    for b in 0..3 {
                        s += coeffs[i][a] as i128 * g[a][b] as i128 * coeffs[j][b] as i128;
                    }
                }
                s as i64
            });
            (p.map(|x| x as f64), Some(p))
        }
        Gram::Real(g) => {
            let p = SELLING_PAIRS.map(|(i, j)| {
                let mut s = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        s += coeffs[i][a] as f64 * g[a][b] * coeffs[j][b] as f64;
                    }
                }
                s
            });
            (p, None)
        }
    }
}

/// Which positive Selling parameter to eliminate next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SellingRule {
    /// The largest positive parameter, ties to the smallest `(i, j)`.
    Largest,
    /// A uniformly random positive parameter (seeded). Used to test that the
    /// outcome does not depend on the reduction path.
    Random(u64),
}

/// Selling reduction with the default rule and step cap.
pub fn selling_reduce(basis: &LatticeBasis) -> Result<Superbase> {
    selling_reduce_with(basis, SellingRule::Largest, DEFAULT_MAX_STEPS)
}

pub fn selling_reduce_with(basis: &LatticeBasis, rule: SellingRule, max_steps: usize) -> Result<Superbase> {
    check_positive_definite(basis.gram())?;
    let mut rng = match rule {
        SellingRule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        SellingRule::Largest => None,
    };
    let mut sb = Superbase::from_basis(basis);
    let mut steps = 0;
    loop {
        let positive: Vec<usize> = (0..6)
            .filter(|&k| match sb.exact {
                Some(p) => p[k] > 0,
                None => sb.selling[k] > SELLING_EPS,
            })
            .collect();
        if positive.is_empty() {
            return Ok(sb);
        }
        if steps >= max_steps {
            return Err(Error::NonConvergence { steps });
        }
        let pick = match rng.as_mut() {
            Some(rng) => *positive.choose(rng).expect("non-empty"),
            None => {
                let mut best = positive[0];
                for &k in &positive[1..] {
                    if sb.selling[k] > sb.selling[best] {
                        best = k;
                    }
                }
                best
            }
        };
        let (i, j) = SELLING_PAIRS[pick];
        let mut coeffs = sb.coeffs;
        let vi = coeffs[i];
        for k in (0..4).filter(|&k| k != i && k != j) {
            for a in 0..3 {
                coeffs[k][a] += vi[a];
            }
        }
        coeffs[i] = vi.map(|x| -x);
        steps += 1;
        sb = Superbase::from_coeffs(basis, coeffs, steps);
    }
}

/// Subset masks (over `v0..v3`) of the seven listed Voronoi candidate classes:
/// `v1, v0+v1, v1+v2, v1+v3, v0+v1+v2, v0+v1+v3, v1+v2+v3`.
pub const VORONOI_MASKS: [u8; 7] = [0b0010, 0b0011, 0b0110, 0b1010, 0b0111, 0b1011, 0b1110];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoronoiVector {
    pub vector: RealVec3,
    /// Subset of superbase vectors summed (before the sign).
    pub mask: u8,
    pub negated: bool,
    pub norm_sq: f64,
}

/// The 14 strict Voronoi vector candidates `±v_S` of a reduced superbase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronoiVectorList {
    pub vectors: Vec<VoronoiVector>,
    pub length_two_count: usize,
}

impl VoronoiVectorList {
    pub fn min_length(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm_sq).fold(f64::INFINITY, f64::min).sqrt()
    }

    /// Squared lengths in ascending order.
    pub fn sorted_norms(&self) -> Vec<f64> {
        let mut n: Vec<f64> = self.vectors.iter().map(|v| v.norm_sq).collect();
        n.sort_by(f64::total_cmp);
        n
    }
}

pub fn voronoi_vectors(sb: &Superbase) -> Result<VoronoiVectorList> {
    if !sb.is_reduced() {
        return Err(Error::Precondition("superbase is not reduced".into()));
    }
    let mut vectors = Vec::with_capacity(14);
    for &mask in &VORONOI_MASKS {
        let v = sb.subset_sum(mask);
        for negated in [false, true] {
            let vector = if negated { -v } else { v };
            vectors.push(VoronoiVector { vector, mask, negated, norm_sq: vector.norm_sq() });
        }
    }
    let length_two_count = vectors.iter().filter(|v| is_length_two(v.norm_sq)).count();
    Ok(VoronoiVectorList { vectors, length_two_count })
}

fn is_length_two(norm_sq: f64) -> bool {
    (norm_sq.sqrt() - 2.0).abs() <= LENGTH_TWO_TOL
}

/// Shortest nonzero vector length, read off the reduced superbase candidates.
pub fn min_vector_length(basis: &LatticeBasis) -> Result<f64> {
    let sb = selling_reduce(basis)?;
    Ok(voronoi_vectors(&sb)?.min_length())
}

/// Fixed obtuse superbase of the fcc lattice in integer fcc coordinates:
/// `(1,1,0), (1,-1,0), (-1,0,1), (-1,0,-1)`, real vectors `√2` times these.
pub const FCC_SUPERBASE: [[i64; 3]; 4] = [[1, 1, 0], [1, -1, 0], [-1, 0, 1], [-1, 0, -1]];

fn fcc_subset_norm(perm: &[usize; 4], mask: u8) -> i64 {
    let mut s = [0i64; 3];
    for i in (0..4).filter(|i| mask & (1 << i) != 0) {
        for a in 0..3 {
            s[a] += FCC_SUPERBASE[perm[i]][a];
        }
    }
    s.iter().map(|x| x * x).sum()
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Contact-preserving linear map from a packing lattice into the fcc lattice.
///
/// Built on a reduced superbase `v_i` of the source lattice: `v_i` is sent to
/// `w_{π(i)}` of [`FCC_SUPERBASE`], where `π` is the lexicographically first
/// permutation sending every length-2 Voronoi candidate to a length-2 fcc
/// vector. Every length-2 lattice vector is a shortest vector, hence one of
/// the candidates, so touching pairs stay touching.
#[derive(Debug, Clone, PartialEq)]
pub struct FccMap {
    permutation: [usize; 4],
    /// Inverse of the integer matrix taking superbase coordinates to input
    /// basis coordinates.
    to_superbase: [[i64; 3]; 3],
}

impl FccMap {
    pub fn new(sb: &Superbase) -> Result<Self> {
        let list = voronoi_vectors(sb)?;
        let min = list.min_length();
        if min < 2.0 - LENGTH_TWO_TOL {
            return Err(Error::NotAPackingLattice { min_length: min });
        }
        let short: Vec<u8> = VORONOI_MASKS
            .iter()
            .copied()
            .filter(|&m| is_length_two(sb.subset_sum(m).norm_sq()))
            .collect();
        let permutation = permutations4()
            .into_iter()
            .find(|perm| short.iter().all(|&m| fcc_subset_norm(perm, m) == 2))
            .ok_or(Error::AssignmentFailure)?;

        // x = Mᵀ y where row i of M holds the coefficients of v_{i+1}.
        let c = sb.coeffs();
        let mt = [
            [c[1][0], c[2][0], c[3][0]],
            [c[1][1], c[2][1], c[3][1]],
            [c[1][2], c[2][2], c[3][2]],
        ];
        let to_superbase = unimodular_inverse(&mt)?;
        Ok(FccMap { permutation, to_superbase })
    }

    pub fn permutation(&self) -> [usize; 4] {
        self.permutation
    }

    /// Image of the lattice point with coordinates `x` over the input basis.
    pub fn apply(&self, x: [i64; 3]) -> FccPoint {
        let m = &self.to_superbase;
        let y: [i64; 3] = std::array::from_fn(|r| m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2]);
        let mut out = [0i64; 3];
        for (k, yk) in y.iter().enumerate() {
            let w = FCC_SUPERBASE[self.permutation[k + 1]];
            for a in 0..3 {
                out[a] += yk * w[a];
            }
        }
        FccPoint::new(out[0], out[1], out[2]).expect("integer combinations of fcc vectors are fcc points")
    }
}

fn unimodular_inverse(m: &[[i64; 3]; 3]) -> Result<[[i64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() != 1 {
        return Err(Error::Inconsistency(format!("superbase transform has determinant {det}")));
    }
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let minor = m[rs[0]][cs[0]] * m[rs[1]][cs[1]] - m[rs[0]][cs[1]] * m[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // inverse = adj / det, adj = cofactorᵀ
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) * det)))
}

/// Map integer points of a lattice (coordinates over its reduced superbase's
/// originating basis) into the fcc lattice, preserving every contact.
pub fn map_to_fcc(sb: &Superbase, points: &[[i64; 3]]) -> Result<Vec<FccPoint>> {
    let map = FccMap::new(sb)?;
    Ok(points.iter().map(|&x| map.apply(x)).collect())
}

/// Lattice description as read from JSON: either row basis vectors or an
/// integral Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<[[i64; 3]; 3]>,
}

impl LatticeFile {
    pub fn into_basis(self) -> Result<LatticeBasis> {
        match (self.basis, self.gram) {
            (Some(b), None) => LatticeBasis::from_vectors(b.map(RealVec3::from)),
            (None, Some(g)) => LatticeBasis::from_integer_gram(g),
            _ => Err(Error::Format("lattice file needs exactly one of \"basis\" or \"gram\"".into())),
        }
    }
}

pub fn parse_lattice_json(text: &str) -> Result<LatticeBasis> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.into_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn fcc_superbase_basis() -> LatticeBasis {
        let w = FCC_SUPERBASE.map(|c| FccPoint::new(c[0], c[1], c[2]).unwrap().to_real());
        LatticeBasis::from_vectors([w[1], w[2], w[3]]).unwrap()
    }

    #[test]
    fn cubic_basis_is_already_reduced() {
        let basis = LatticeBasis::cubic(2.0).unwrap();
        assert!(basis.gram().is_exact());
        let sb = selling_reduce(&basis).unwrap();
        assert_eq!(sb.steps(), 0);
        assert_eq!(sb.vectors()[0], RealVec3::new(-2.0, -2.0, -2.0));
        assert_eq!(sb.selling_at(1, 2), 0.0);
        assert_eq!(sb.selling_at(1, 3), 0.0);
        assert_eq!(sb.selling_at(2, 3), 0.0);
        assert!(sb.is_reduced());
    }

    #[test]
    fn fixed_fcc_superbase_is_obtuse() {
        let mut sum = [0; 3];
        for w in FCC_SUPERBASE {
            for a in 0..3 {
                sum[a] += w[a];
            }
        }
        assert_eq!(sum, [0, 0, 0]);
        let sb = Superbase::from_basis(&fcc_superbase_basis());
        assert!(sb.is_reduced());
        for p in sb.selling() {
            assert!((p - 0.0).abs() < 1e-12 || (p + 2.0).abs() < 1e-12, "{p}");
        }
        for v in sb.vectors() {
            assert!((v.norm() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fcc_basis_reduces_to_length_two_superbase() {
        let basis = LatticeBasis::fcc();
        let sb = selling_reduce(&basis).unwrap();
        assert!(sb.is_reduced());
        let sum = sb.vectors().iter().fold(RealVec3::ZERO, |a, v| a + *v);
        assert!(sum.norm() < 1e-9);
        for v in sb.vectors() {
            assert!((v.norm() - 2.0).abs() < 1e-9);
        }
        assert!((sb.volume() - basis.determinant().abs()).abs() < 1e-9);
    }

    #[test]
    fn reduced_input_is_a_fixed_point() {
        let sb = selling_reduce(&fcc_superbase_basis()).unwrap();
        assert_eq!(sb.steps(), 0);
    }

    #[test]
    fn voronoi_counts() {
        let fcc = voronoi_vectors(&selling_reduce(&LatticeBasis::fcc()).unwrap()).unwrap();
        assert_eq!(fcc.vectors.len(), 14);
        assert_eq!(fcc.length_two_count, 12);
        let long: Vec<_> = fcc.vectors.iter().filter(|v| !is_length_two(v.norm_sq)).collect();
        assert_eq!(long.len(), 2);
        assert!(long.iter().all(|v| (v.norm_sq.sqrt() - 2.0 * SQRT_2).abs() < 1e-9));

        let cubic = voronoi_vectors(&selling_reduce(&LatticeBasis::cubic(2.0).unwrap()).unwrap()).unwrap();
        assert_eq!(cubic.length_two_count, 6);
    }

    #[test]
    fn voronoi_list_closed_under_negation() {
        let sb = selling_reduce(&LatticeBasis::fcc()).unwrap();
        let list = voronoi_vectors(&sb).unwrap();
        for v in &list.vectors {
            assert!(list.vectors.iter().any(|w| (w.vector + v.vector).norm() < 1e-12));
        }
        let negated = Superbase {
            vectors: sb.vectors.map(|v| -v),
            coeffs: sb.coeffs.map(|c| c.map(|x| -x)),
            ..sb.clone()
        };
        let other = voronoi_vectors(&negated).unwrap();
        for v in &other.vectors {
            assert!(list.vectors.iter().any(|w| (w.vector - v.vector).norm() < 1e-12));
        }
    }

    #[test]
    fn voronoi_rejects_unreduced() {
        let basis = LatticeBasis::from_vectors([
            RealVec3::new(2.0, 0.0, 0.0),
            RealVec3::new(1.0, 2.0, 0.0),
            RealVec3::new(0.0, 0.0, 2.0),
        ])
        .unwrap();
        let sb = Superbase::from_basis(&basis);
        assert!(!sb.is_reduced());
        assert!(matches!(voronoi_vectors(&sb), Err(Error::Precondition(_))));
    }

    #[test]
    fn min_vector_lengths() {
        assert!((min_vector_length(&LatticeBasis::fcc()).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(min_vector_length(&LatticeBasis::cubic(2.0).unwrap()).unwrap(), 2.0);
        assert_eq!(min_vector_length(&LatticeBasis::cubic(3.0).unwrap()).unwrap(), 3.0);
    }

    #[test]
    fn invalid_lattices() {
        let flat = LatticeBasis::from_vectors([
            RealVec3::new(1.0, 0.0, 0.0),
            RealVec3::new(0.0, 1.0, 0.0),
            RealVec3::new(1.0, 1.0, 0.0),
        ]);
        assert!(matches!(flat, Err(Error::InvalidLattice(_))));
        let indefinite = LatticeBasis::from_integer_gram([[1, 2, 0], [2, 1, 0], [0, 0, 1]]);
        assert!(matches!(indefinite, Err(Error::InvalidLattice(_))));
    }

    #[test]
    fn non_convergence_is_reported() {
        let basis = LatticeBasis::from_vectors([
            RealVec3::new(2.0, 0.0, 0.0),
            RealVec3::new(31.0, 2.0, 0.0),
            RealVec3::new(17.0, 23.0, 2.0),
        ])
        .unwrap();
        assert_eq!(selling_reduce_with(&basis, SellingRule::Largest, 1), Err(Error::NonConvergence { steps: 1 }));
        assert!(selling_reduce(&basis).unwrap().is_reduced());
    }

    #[test]
    fn integer_gram_matches_vector_basis() {
        let basis = LatticeBasis::from_integer_gram([[4, 2, 2], [2, 4, 2], [2, 2, 4]]).unwrap();
        assert!((min_vector_length(&basis).unwrap() - 2.0).abs() < 1e-12);
        let list = voronoi_vectors(&selling_reduce(&basis).unwrap()).unwrap();
        assert_eq!(list.length_two_count, 12);
    }

    #[test]
    fn map_identity_on_fcc() {
        let basis = fcc_superbase_basis();
        let sb = selling_reduce(&basis).unwrap();
        let map = FccMap::new(&sb).unwrap();
        assert_eq!(map.permutation(), [0, 1, 2, 3]);
        assert_eq!(map.apply([1, 0, 0]).coords(), FCC_SUPERBASE[1]);
    }

    #[test]
    fn map_cubic_l_shape() {
        let sb = selling_reduce(&LatticeBasis::cubic(2.0).unwrap()).unwrap();
        let img = map_to_fcc(&sb, &[[0, 0, 0], [1, 0, 0], [1, 1, 0]]).unwrap();
        assert!(img[0].touches(&img[1]) && img[1].touches(&img[2]));
        // v1 + v2 is long in the cubic lattice but w1 + w2 is short in fcc, so
        // the identity assignment adds the diagonal contact
        assert!(img[0].touches(&img[2]));
    }

    #[test]
    fn map_rejects_short_lattice() {
        let sb = selling_reduce(&LatticeBasis::cubic(1.5).unwrap()).unwrap();
        assert!(matches!(map_to_fcc(&sb, &[[0, 0, 0]]), Err(Error::NotAPackingLattice { .. })));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = [[1, 2, 0], [0, 1, 3], [0, 0, 1]];
        let inv = unimodular_inverse(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert_eq!(s, (i == j) as i64);
            }
        }
    }

    #[test]
    fn lattice_json_forms() {
        let b = parse_lattice_json(r#"{"basis": [[2,0,0],[0,2,0],[0,0,2]]}"#).unwrap();
        assert_eq!(b.determinant(), 8.0);
        let g = parse_lattice_json(r#"{"gram": [[4,0,0],[0,4,0],[0,0,4]]}"#).unwrap();
        assert!((g.determinant() - 8.0).abs() < 1e-12);
        assert!(parse_lattice_json(r#"{}"#).is_err());
        assert!(parse_lattice_json(r#"{"basis": [[2,0,0],[0,2,0],[0,0,2]], "gram": [[4,0,0],[0,4,0],[0,0,4]]}"#).is_err());
    }
}
