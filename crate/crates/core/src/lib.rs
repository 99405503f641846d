//! Contact numbers of finite packings of congruent unit balls in 3-space.
//!
//! The crate is organised by concern:
//!
//! - [`geometry`]: vectors, the integer fcc coordinate model, spherical caps.
//! - [`lattice`]: Selling reduction to an obtuse superbase, Voronoi vector
//!   candidates and the contact-preserving map into the fcc lattice.
//! - [`packing`]: packings, contact graphs and the explicit constructions.
//! - [`bounds`]: closed-form upper and lower bounds and the constants ledger.
//! - [`verify`]: sampling-based checks of coverings, cap densities, union
//!   volumes and surface areas.
//! - [`search`]: greedy and local-swap search for high-contact fcc clusters.
//! - [`io`]: JSON / XYZ / CSV interchange formats.
//!
//! Unit balls have radius 1, so two balls touch when their centers are at
//! distance exactly 2.

pub mod bounds;
pub mod error;
pub mod geometry;
mod grid;
pub mod io;
pub mod lattice;
pub mod packing;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{FccPoint, RealVec3};
pub use packing::{ContactGraph, DegreePartition, Packing};

/// Run `f` on a dedicated pool of `workers` threads, or on the global pool
/// when `workers` is `None`. Results never depend on the worker count.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Domain("worker count must be positive".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Domain(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
