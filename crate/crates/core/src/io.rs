//! Interchange formats: packing JSON, XYZ, CSV edge lists and tables.

use std::fmt::Write as _;

use crate::bounds::LedgerEntry;
use crate::error::{Error, Result};
use crate::packing::{ContactGraph, Packing};

/// Number of significant digits for every printed float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-5, 1e12)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn read_packing_json(text: &str) -> Result<Packing> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("packing JSON: {e}")))
}

pub fn write_packing_json(p: &Packing) -> String {
    serde_json::to_string_pretty(p).expect("packings always serialize") + "\n"
}

/// Integer lattice coordinates, one `[a, b, c]` triple per point.
pub fn read_points_json(text: &str) -> Result<Vec<[i64; 3]>> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("points JSON: {e}")))
}

/// XYZ with element `X`; fcc coordinates are scaled by √2 to true geometry.
pub fn to_xyz(p: &Packing) -> String {
    let centers = p.real_centers();
    let mut out = format!("{}\nunit balls, radius 1\n", centers.len());
    for c in centers {
        let _ = writeln!(out, "X {} {} {}", format_float(c.x), format_float(c.y), format_float(c.z));
    }
    out
}

pub fn edges_csv(g: &ContactGraph) -> String {
    let mut out = String::from("i,j\n");
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{i},{j}");
    }
    out
}

pub fn constants_csv(ledger: &[LedgerEntry]) -> String {
    let mut out = String::from("name,recomputed,published,diff,rule,matches\n");
    for e in ledger {
        let rule = match e.rule {
            crate::bounds::MatchRule::Rounded => "rounded",
            crate::bounds::MatchRule::Prefix => "prefix",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{rule},{}",
            e.name,
            format_float(e.recomputed),
            e.published,
            format_float(e.diff),
            e.matches
        );
    }
    out
}

pub fn constants_json(ledger: &[LedgerEntry]) -> String {
    serde_json::to_string_pretty(ledger).expect("ledger serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::derive_constants;
    use crate::geometry::{FccPoint, RealVec3};
    use crate::packing::{contact_graph, gen_fcc_octahedron};

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(521.0327), "521.0327");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(1.5e-7), "1.5e-7");
        assert_eq!(format_float(2e15), "2e15");
        assert_eq!(format_float(9.9999999999999), "10");
    }

    #[test]
    fn packing_roundtrip() {
        let p = gen_fcc_octahedron(2).unwrap();
        assert_eq!(read_packing_json(&write_packing_json(&p)).unwrap(), p);
        let r = Packing::real(vec![RealVec3::new(0.0, 0.0, 0.0), RealVec3::new(2.0, 0.0, 0.0)]);
        assert_eq!(read_packing_json(&write_packing_json(&r)).unwrap(), r);
        assert!(read_packing_json(r#"{"representation":"exact-fcc","centers":[[1,0,0]]}"#).is_err());
        assert!(read_packing_json("[").is_err());
    }

    #[test]
    fn xyz_scales_fcc() {
        let p = Packing::fcc(vec![FccPoint::ORIGIN, FccPoint::new(1, 1, 0).unwrap()]);
        let xyz = to_xyz(&p);
        assert_eq!(xyz.lines().next(), Some("2"));
        assert_eq!(xyz.lines().nth(3), Some("X 1.41421356237 1.41421356237 0"));
    }

    #[test]
    fn csv_outputs() {
        let g = contact_graph(&gen_fcc_octahedron(2).unwrap()).unwrap();
        assert_eq!(edges_csv(&g).lines().count(), 13);
        let c = constants_csv(&derive_constants());
        assert!(c.lines().skip(1).all(|l| l.ends_with(",true")));
        assert!(constants_json(&derive_constants()).contains("coefficient_ii"));
    }
}
