//! Uniform hash grid for fixed-radius neighbour queries.

use std::collections::HashMap;

use crate::geometry::RealVec3;

type Cell = (i64, i64, i64);

pub(crate) struct SpatialGrid<'a> {
    points: &'a [RealVec3],
    cell: f64,
    cells: HashMap<Cell, Vec<usize>>,
}

impl<'a> SpatialGrid<'a> {
    /// Grid with cubic cells of side `cell`; queries up to that radius only
    /// need the 27 surrounding cells.
    pub(crate) fn new(points: &'a [RealVec3], cell: f64) -> Self {
        let mut cells: HashMap<Cell, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(key(p, cell)).or_default().push(i);
        }
        SpatialGrid { points, cell, cells }
    }

    /// Indices of points within `radius` (≤ cell side) of `q`, ascending.
    pub(crate) fn within(&self, q: &RealVec3, radius: f64) -> Vec<usize> {
        debug_assert!(radius <= self.cell);
        let r2 = radius * radius;
        let (cx, cy, cz) = key(q, self.cell);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) {
                        out.extend(ids.iter().copied().filter(|&j| self.points[j].dist_sq(q) <= r2));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True when some point other than `skip` lies strictly within `radius` of `q`.
    pub(crate) fn any_strictly_within(&self, q: &RealVec3, radius: f64, skip: Option<usize>) -> bool {
        let r2 = radius * radius;
        let (cx, cy, cz) = key(q, self.cell);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) {
                        if ids.iter().any(|&j| Some(j) != skip && self.points[j].dist_sq(q) < r2) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// All pairs `(i, j)`, `i < j`, at distance ≤ `radius`, sorted.
    pub(crate) fn close_pairs(&self, radius: f64) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            pairs.extend(self.within(p, radius).into_iter().filter(|&j| j > i).map(|j| (i, j)));
        }
        pairs
    }
}

fn key(p: &RealVec3, cell: f64) -> Cell {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn close_pairs_matches_brute_force() {
        let pts: Vec<RealVec3> = (0..60)
            .map(|i| {
                let t = i as f64;
                RealVec3::new((t * 1.7).sin() * 5.0, (t * 0.9).cos() * 5.0, (t * 0.37).sin() * 5.0)
            })
            .collect();
        let grid = SpatialGrid::new(&pts, 2.0);
        let fast = grid.close_pairs(2.0);
        let mut slow = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(&pts[j]) <= 2.0 {
                    slow.push((i, j));
                }
            }
        }
        assert_eq!(fast, slow);
    }
}
