//! Vector arithmetic, the integer fcc coordinate model and spherical caps.
//!
//! # Fcc coordinates
//!
//! Lattice points of the face-centered cubic lattice are stored as integer
//! triples `(a, b, c)` with `a + b + c` even. The real position is
//! `√2 · (a, b, c)`, which makes the shortest lattice vector `√2 · (1, 1, 0)`
//! exactly of length 2. Two fcc centers touch iff their integer squared
//! distance is 2, so lattice-restricted contact counting never touches
//! floating point.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for geometric predicates on real coordinates.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current process-wide tolerance for real-coordinate predicates.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Override the process-wide tolerance. Values that are not finite and
/// positive are rejected.
pub fn set_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    Ok(())
}

/// A point or direction in 3-space, in units of the ball radius.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct RealVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for RealVec3 {
    fn from(v: [f64; 3]) -> Self {
        RealVec3::new(v[0], v[1], v[2])
    }
}

impl From<RealVec3> for [f64; 3] {
    fn from(v: RealVec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl RealVec3 {
    pub const ZERO: RealVec3 = RealVec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        RealVec3 { x, y, z }
    }

    /// Checked constructor rejecting NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = RealVec3::new(x, y, z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("non-finite coordinate {v}")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &RealVec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &RealVec3) -> RealVec3 {
        RealVec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &RealVec3) -> f64 {
        (*self - *other).norm()
    }

    pub fn dist_sq(&self, other: &RealVec3) -> f64 {
        (*self - *other).norm_sq()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<RealVec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        self.into()
    }
}

impl fmt::Display for RealVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for RealVec3 {
    type Output = RealVec3;
    fn add(self, o: RealVec3) -> RealVec3 {
        RealVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for RealVec3 {
    fn add_assign(&mut self, o: RealVec3) {
        *self = *self + o;
    }
}

impl Sub for RealVec3 {
    type Output = RealVec3;
    fn sub(self, o: RealVec3) -> RealVec3 {
        RealVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for RealVec3 {
    type Output = RealVec3;
    fn neg(self) -> RealVec3 {
        RealVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for RealVec3 {
    type Output = RealVec3;
    fn mul(self, s: f64) -> RealVec3 {
        RealVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// A lattice point of the fcc lattice in sum-even integer coordinates.
///
/// Ordering is lexicographic on `(a, b, c)`, which is the tie-break order
/// used throughout the search code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 3]", into = "[i64; 3]")]
pub struct FccPoint {
    a: i64,
    b: i64,
    c: i64,
}

/// The 12 nearest-neighbour offsets of the fcc lattice, in lexicographic order.
pub const FCC_NEIGHBOR_OFFSETS: [[i64; 3]; 12] = [
    [-1, -1, 0],
    [-1, 0, -1],
    [-1, 0, 1],
    [-1, 1, 0],
    [0, -1, -1],
    [0, -1, 1],
    [0, 1, -1],
    [0, 1, 1],
    [1, -1, 0],
    [1, 0, -1],
    [1, 0, 1],
    [1, 1, 0],
];

impl FccPoint {
    pub const ORIGIN: FccPoint = FccPoint { a: 0, b: 0, c: 0 };

    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if (a + b + c).rem_euclid(2) != 0 {
            return Err(Error::InvalidCoordinate { a, b, c });
        }
        Ok(FccPoint { a, b, c })
    }

    pub fn coords(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Integer squared distance; the real squared distance is twice this.
    pub fn int_dist_sq(&self, other: &FccPoint) -> i64 {
        let (da, db, dc) = (self.a - other.a, self.b - other.b, self.c - other.c);
        da * da + db * db + dc * dc
    }

    pub fn touches(&self, other: &FccPoint) -> bool {
        self.int_dist_sq(other) == 2
    }

    /// Translate by an integer offset whose coordinate sum is even.
    pub fn offset(&self, d: [i64; 3]) -> FccPoint {
        debug_assert_eq!((d[0] + d[1] + d[2]).rem_euclid(2), 0);
        FccPoint { a: self.a + d[0], b: self.b + d[1], c: self.c + d[2] }
    }

    /// The 12 touching lattice neighbours, in lexicographic order.
    pub fn neighbors(&self) -> impl Iterator<Item = FccPoint> + '_ {
        FCC_NEIGHBOR_OFFSETS.iter().map(move |d| self.offset(*d))
    }

    pub fn to_real(&self) -> RealVec3 {
        RealVec3::new(self.a as f64, self.b as f64, self.c as f64) * SQRT_2
    }
}

impl TryFrom<[i64; 3]> for FccPoint {
    type Error = Error;
    fn try_from(v: [i64; 3]) -> Result<Self> {
        FccPoint::new(v[0], v[1], v[2])
    }
}

impl From<FccPoint> for [i64; 3] {
    fn from(p: FccPoint) -> Self {
        p.coords()
    }
}

impl fmt::Display for FccPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Real position `√2 · (a, b, c)` of a raw integer triple, rejecting odd sums.
pub fn fcc_to_real(coords: [i64; 3]) -> Result<RealVec3> {
    FccPoint::try_from(coords).map(|p| p.to_real())
}

/// Area of a spherical cap of the given angular radius on the unit sphere.
pub fn cap_area(angular_radius: f64) -> Result<f64> {
    if !(angular_radius > 0.0 && angular_radius <= PI) {
        return Err(Error::Domain(format!(
            "cap angular radius must lie in (0, π], got {angular_radius}"
        )));
    }
    Ok(2.0 * PI * (1.0 - angular_radius.cos()))
}

/// Angle between two unit vectors, in `[0, π]`.
pub fn angular_distance(u: &RealVec3, v: &RealVec3) -> Result<f64> {
    for w in [u, v] {
        if !w.is_finite() || (w.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDirection(format!("{w} is not a unit vector")));
        }
    }
    Ok(unit_angle(u, v))
}

/// Unchecked angle between unit vectors. The atan2 form stays accurate near
/// 0 and π where `acos` of a clamped dot product loses half the digits.
pub(crate) fn unit_angle(u: &RealVec3, v: &RealVec3) -> f64 {
    let s = u.cross(v).norm();
    let c = u.dot(v).clamp(-1.0, 1.0);
    s.atan2(c)
}

/// An open spherical cap on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    center: RealVec3,
    angular_radius: f64,
}

impl SphericalCap {
    pub fn new(center: RealVec3, angular_radius: f64) -> Result<Self> {
        if !center.is_finite() || (center.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDirection(format!("cap center {center} is not a unit vector")));
        }
        if !(angular_radius > 0.0 && angular_radius < PI) {
            return Err(Error::Domain(format!(
                "cap angular radius must lie in (0, π), got {angular_radius}"
            )));
        }
        Ok(SphericalCap { center, angular_radius })
    }

    pub fn center(&self) -> RealVec3 {
        self.center
    }

    pub fn angular_radius(&self) -> f64 {
        self.angular_radius
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * (1.0 - self.angular_radius.cos())
    }

    /// Open-cap membership for a unit vector.
    pub fn contains(&self, dir: &RealVec3) -> bool {
        dir.dot(&self.center) > self.angular_radius.cos()
    }
}

/// Radius of the enlarged balls used by the first bound, `r̂ = 1.81383`.
pub const R_HAT: f64 = 1.81383;
/// Enlargement radius of the improved bound, `r̂ = 1.58731`.
pub const R_HAT_IMPROVED: f64 = 1.58731;
/// Enlargement radius for fcc sub-packings, `r̄ = √2`.
pub const R_BAR: f64 = SQRT_2;
/// Enlargement factor used by the doubled-ball approach.
pub const R_DOUBLE: f64 = 2.0;

/// Enlargement radius together with the angular radius of the cap that a
/// touching neighbour's enlarged ball cuts out of the enlarged sphere.
///
/// A neighbour center sits at distance 2; the two spheres of radius `r`
/// meet on the circle at angle `α` from the contact direction with
/// `cos α = 1/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapGeometry {
    enlargement: f64,
    contact_cap_angle: f64,
}

impl CapGeometry {
    pub fn new(enlargement: f64) -> Result<Self> {
        if !(enlargement.is_finite() && enlargement > 1.0) {
            return Err(Error::Domain(format!("enlargement radius must exceed 1, got {enlargement}")));
        }
        Ok(CapGeometry { enlargement, contact_cap_angle: (1.0 / enlargement).acos() })
    }

    pub fn enlargement(&self) -> f64 {
        self.enlargement
    }

    pub fn contact_cap_angle(&self) -> f64 {
        self.contact_cap_angle
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn tolerance_default_is_1e_minus_9() {
        assert_eq!(tolerance(), DEFAULT_TOLERANCE);
    }

    #[test]
    fn fcc_to_real_examples() {
        assert_eq!(fcc_to_real([0, 0, 0]).unwrap(), RealVec3::ZERO);
        let p = fcc_to_real([1, 1, 0]).unwrap();
        assert!((p.x - SQRT_2).abs() < 1e-15 && (p.y - SQRT_2).abs() < 1e-15 && p.z == 0.0);
        assert!((p.norm() - 2.0).abs() < 1e-12);
        let q = fcc_to_real([2, 0, 0]).unwrap();
        assert!((q.norm() - 2.0 * SQRT_2).abs() < 1e-12);
        assert!(!FccPoint::new(2, 0, 0).unwrap().touches(&FccPoint::ORIGIN));
    }

    #[test]
    fn fcc_parity_violation_rejected() {
        assert_eq!(fcc_to_real([1, 0, 0]), Err(Error::InvalidCoordinate { a: 1, b: 0, c: 0 }));
        assert!(FccPoint::new(-1, 0, 0).is_err());
        assert!(serde_json::from_str::<FccPoint>("[1,2,2]").is_err());
    }

    #[test]
    fn neighbor_offsets_are_the_twelve_contacts() {
        let o = FccPoint::ORIGIN;
        let ns: Vec<_> = o.neighbors().collect();
        assert_eq!(ns.len(), 12);
        assert!(ns.iter().all(|n| n.touches(&o)));
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_area_examples() {
        let a6 = cap_area(FRAC_PI_6).unwrap();
        assert!((a6 - 2.0 * PI * (1.0 - 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((a6 - 0.841787).abs() < 1e-6);
        assert!((cap_area(FRAC_PI_2).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((cap_area(FRAC_PI_4).unwrap() - 1.840302).abs() < 1e-6);
        assert!((cap_area(PI).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!(cap_area(0.0).is_err());
        assert!(cap_area(-0.1).is_err());
        assert!(cap_area(3.5).is_err());
    }

    #[test]
    fn angular_distance_examples() {
        let u = RealVec3::new(1.0, 0.0, 0.0);
        assert_eq!(angular_distance(&u, &u).unwrap(), 0.0);
        assert!((angular_distance(&u, &-u).unwrap() - PI).abs() < 1e-15);
        let v = RealVec3::new(1.0, 1.0, 0.0).normalized().unwrap();
        assert!((angular_distance(&u, &v).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!(angular_distance(&u, &RealVec3::new(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn cap_geometry_special_radii() {
        for r in [R_HAT, R_HAT_IMPROVED, R_BAR, R_DOUBLE] {
            let g = CapGeometry::new(r).unwrap();
            assert!((g.contact_cap_angle().cos() * r - 1.0).abs() < 1e-12);
        }
        assert!((CapGeometry::new(R_BAR).unwrap().contact_cap_angle() - FRAC_PI_4).abs() < 1e-15);
        assert!((CapGeometry::new(R_DOUBLE).unwrap().contact_cap_angle() - FRAC_PI_3).abs() < 1e-15);
        assert!(CapGeometry::new(1.0).is_err());
    }

    #[test]
    fn spherical_cap_rejects_non_unit_center() {
        assert!(SphericalCap::new(RealVec3::new(1.0, 1.0, 0.0), 0.3).is_err());
        let cap = SphericalCap::new(RealVec3::new(0.0, 0.0, 1.0), FRAC_PI_6).unwrap();
        assert!(cap.contains(&RealVec3::new(0.0, 0.0, 1.0)));
        assert!(!cap.contains(&RealVec3::new(1.0, 0.0, 0.0)));
    }

    fn fcc_point() -> impl Strategy<Value = FccPoint> {
        (-50i64..50, -50i64..50, -50i64..50)
            .prop_map(|(a, b, c)| FccPoint::new(a, b, c + (a + b + c).rem_euclid(2)).unwrap())
    }

    proptest! {
        #[test]
        fn real_distance_matches_integer_model(p in fcc_point(), q in fcc_point()) {
            let real = p.to_real().dist_sq(&q.to_real());
            let exact = 2.0 * p.int_dist_sq(&q) as f64;
            prop_assert!((real - exact).abs() <= 1e-9 * exact.max(1.0));
        }

        #[test]
        fn cap_area_is_monotone(x in 1e-6f64..PI, y in 1e-6f64..PI) {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            prop_assert!(cap_area(lo).unwrap() <= cap_area(hi).unwrap());
        }
    }
}
