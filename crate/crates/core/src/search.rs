//! Search for fcc clusters with many contacts.
//!
//! Moves are scored in exact integers: a candidate site scores the number of
//! current points at squared distance 2. Ties are always broken by the
//! lexicographic order of the coordinates.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bound_ii, six_n_minus};
use crate::error::{Error, Result};
use crate::geometry::FccPoint;
use crate::packing::{contact_graph, gen_cuboctahedron_13, gen_fcc_octahedron, octahedron_size, Packing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Greedy,
    GreedySwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub strategy: Strategy,
    /// Passes of the relocation sweep.
    pub swap_iterations: usize,
    /// Extra swap runs with derived seeds; the best result is kept.
    pub restarts: usize,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { n: 2, strategy: Strategy::GreedySwap, swap_iterations: 100, restarts: 0, seed: 0, workers: None }
    }
}

impl SearchConfig {
    pub fn with_n(n: usize) -> Self {
        SearchConfig { n, ..Default::default() }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("search needs n ≥ 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Domain("worker count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Improvement {
    /// Sweep index, 0 for the starting packing.
    pub iteration: usize,
    pub contacts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub packing: Packing,
    pub contact_number: usize,
    pub history: Vec<Improvement>,
    pub bound_ii: Option<f64>,
    /// `6n − 6k²` when `n` is an octahedral size `n(k)`.
    pub octahedral_value: Option<usize>,
}

/// `k` with `n = k(2k²+1)/3`, if any.
pub fn octahedral_k(n: usize) -> Option<u64> {
    (2..).map(|k| (k, octahedron_size(k))).take_while(|&(_, s)| s <= n as u64).find(|&(_, s)| s == n as u64).map(|(k, _)| k)
}

fn count_contacts(points: &[FccPoint]) -> usize {
    let set: HashSet<FccPoint> = points.iter().copied().collect();
    points.iter().map(|p| p.neighbors().filter(|q| set.contains(q)).count()).sum::<usize>() / 2
}

/// Recount via the packing module and attach bound comparisons.
fn finish(points: Vec<FccPoint>, history: Vec<Improvement>) -> Result<SearchResult> {
    let packing = Packing::fcc(points);
    let contact_number = contact_graph(&packing)?.contact_number();
    let n = packing.len();
    let bound = if n >= 2 { Some(bound_ii(n as u64)?.value) } else { None };
    if let Some(b) = bound {
        if contact_number as f64 >= b {
            return Err(Error::Inconsistency(format!("{contact_number} contacts among {n} lattice balls reach the lattice bound {b}")));
        }
    }
    let octahedral_value = octahedral_k(n).map(|k| (6 * octahedron_size(k) - 6 * k * k) as usize);
    Ok(SearchResult { packing, contact_number, history, bound_ii: bound, octahedral_value })
}

/// Frontier sites of `set` with their scores.
fn frontier(set: &HashSet<FccPoint>) -> HashMap<FccPoint, usize> {
    let mut scores = HashMap::new();
    for p in set {
        for q in p.neighbors() {
            if !set.contains(&q) {
                *scores.entry(q).or_insert(0) += 1;
            }
        }
    }
    scores
}

/// Highest-scoring frontier site, lexicographically smallest among ties.
fn best_site(scores: &HashMap<FccPoint, usize>) -> Option<(FccPoint, usize)> {
    scores.iter().map(|(&q, &s)| (q, s)).min_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)))
}

/// Grow a cluster from the origin, always adding the frontier site with the
/// most new contacts.
pub fn greedy_grow(config: &SearchConfig) -> Result<SearchResult> {
    config.check()?;
    let points = grow_from(vec![FccPoint::ORIGIN], config.n);
    let c = count_contacts(&points);
    finish(points, vec![Improvement { iteration: 0, contacts: c }])
}

fn grow_from(mut points: Vec<FccPoint>, n: usize) -> Vec<FccPoint> {
    let mut set: HashSet<FccPoint> = points.iter().copied().collect();
    let mut scores = frontier(&set);
    while points.len() < n {
        let (q, _) = best_site(&scores).expect("a nonempty cluster has a frontier");
        scores.remove(&q);
        for r in q.neighbors() {
            if !set.contains(&r) && r != q {
                *scores.entry(r).or_insert(0) += 1;
            }
        }
        set.insert(q);
        points.push(q);
    }
    points
}

/// One relocation sweep in a seeded order. A point moves to the best frontier
/// site of the others when that gains contacts, and with probability ½ to a
/// random equally good site otherwise. Returns whether anything moved.
fn sweep(points: &mut [FccPoint], rng: &mut ChaCha8Rng) -> bool {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(rng);
    let mut moved = false;
    for i in order {
        let x = points[i];
        let rest: HashSet<FccPoint> = points.iter().copied().filter(|&p| p != x).collect();
        let degree = x.neighbors().filter(|q| rest.contains(q)).count();
        let scores = frontier(&rest);
        let Some((_, top)) = best_site(&scores) else { continue };
        let mut ties: Vec<FccPoint> = scores.iter().filter(|&(&q, &s)| s == top && q != x).map(|(&q, _)| q).collect();
        ties.sort_unstable();
        if ties.is_empty() {
            continue;
        }
        if top > degree {
            points[i] = ties[0];
            moved = true;
        } else if top == degree && rng.gen_bool(0.5) {
            points[i] = ties[rng.gen_range(0..ties.len())];
            moved = true;
        }
    }
    moved
}

fn swap_run(start: &[FccPoint], iterations: usize, seed: u64) -> (Vec<FccPoint>, Vec<Improvement>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = start.to_vec();
    let mut best = current.clone();
    let mut best_c = count_contacts(&best);
    let mut history = vec![Improvement { iteration: 0, contacts: best_c }];
    for it in 1..=iterations {
        let moved = sweep(&mut current, &mut rng);
        let c = count_contacts(&current);
        if c > best_c {
            best_c = c;
            best.clone_from(&current);
            history.push(Improvement { iteration: it, contacts: c });
        }
        if !moved {
            break;
        }
    }
    best.sort_unstable();
    (best, history)
}

/// Relocate single points to better frontier sites. Never returns fewer
/// contacts than `start`.
pub fn local_swap_improve(start: &Packing, config: &SearchConfig) -> Result<SearchResult> {
    config.check()?;
    let points = start
        .fcc_points()
        .ok_or_else(|| Error::Precondition("local search needs an exact-fcc packing".into()))?;
    contact_graph(start)?;
    let runs: Vec<(Vec<FccPoint>, Vec<Improvement>)> = crate::with_workers(config.workers, || {
        (0..=config.restarts as u64)
            .into_par_iter()
            .map(|r| swap_run(points, config.swap_iterations, config.seed.wrapping_add(r.wrapping_mul(0x9E37_79B9_7F4A_7C15))))
            .collect()
    })?;
    // first run with the most contacts
    let (points, history) = runs
        .into_iter()
        .rev()
        .max_by_key(|(p, _)| count_contacts(p))
        .expect("at least one run");
    finish(points, history)
}

/// Greedy growth, followed by swaps when the strategy asks for them.
pub fn search(config: &SearchConfig) -> Result<SearchResult> {
    let grown = greedy_grow(config)?;
    match config.strategy {
        Strategy::Greedy => Ok(grown),
        Strategy::GreedySwap => local_swap_improve(&grown.packing, config),
    }
}

/// A frontier site touching three mutually touching points, first in
/// lexicographic order.
pub fn tetrahedral_site(points: &[FccPoint]) -> Option<FccPoint> {
    let set: HashSet<FccPoint> = points.iter().copied().collect();
    let mut sites: Vec<FccPoint> = frontier(&set)
        .into_iter()
        .filter(|&(_, s)| s >= 3)
        .map(|(q, _)| q)
        .filter(|q| {
            let nb: Vec<FccPoint> = q.neighbors().filter(|r| set.contains(r)).collect();
            (0..nb.len()).any(|a| {
                (a + 1..nb.len()).any(|b| nb[a].touches(&nb[b]) && (b + 1..nb.len()).any(|c| nb[a].touches(&nb[c]) && nb[b].touches(&nb[c])))
            })
        })
        .collect();
    sites.sort_unstable();
    sites.first().copied()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub best: usize,
    pub bound_ii: f64,
    pub octahedral_value: Option<usize>,
    /// Which construction produced the witness.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestKnownTable {
    pub rows: Vec<TableRow>,
    #[serde(skip)]
    pub witnesses: Vec<Packing>,
}

impl BestKnownTable {
    /// Rows `n` with `best(n) < best(n−1) + 3`.
    pub fn chain_shortfalls(&self) -> Vec<usize> {
        self.rows.windows(2).filter(|w| w[1].best < w[0].best + 3).map(|w| w[1].n).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,best,bound_ii,octahedral_value,source\n");
        for r in &self.rows {
            let oct = r.octahedral_value.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.best, crate::io::format_float(r.bound_ii), oct, r.source));
        }
        out
    }
}

struct Entry {
    points: Vec<FccPoint>,
    contacts: usize,
    source: String,
}

fn offer(slot: &mut Option<Entry>, points: Vec<FccPoint>, source: &str) -> bool {
    let contacts = count_contacts(&points);
    if slot.as_ref().is_none_or(|e| contacts > e.contacts) {
        let mut points = points;
        points.sort_unstable();
        *slot = Some(Entry { points, contacts, source: source.to_string() });
        true
    } else {
        false
    }
}

/// Drop the point with the fewest contacts, lexicographically largest among ties.
fn shrink(points: &[FccPoint]) -> Vec<FccPoint> {
    let set: HashSet<FccPoint> = points.iter().copied().collect();
    let drop = points
        .iter()
        .copied()
        .min_by(|a, b| {
            let da = a.neighbors().filter(|q| set.contains(q)).count();
            let db = b.neighbors().filter(|q| set.contains(q)).count();
            da.cmp(&db).then(b.cmp(a))
        })
        .expect("nonempty cluster");
    points.iter().copied().filter(|&p| p != drop).collect()
}

/// Best contact counts found for `n = 2..=n_max`.
///
/// Candidates per row: greedy growth (plus swaps), the octahedral clusters
/// and the cuboctahedron as seeds, the previous row extended by its best
/// frontier site and the next row with its weakest point removed. Where
/// `best(n) < best(n−1) + 3`, the previous witness plus a free tetrahedral
/// site is tried; in fcc that site can be absent, see
/// [`BestKnownTable::chain_shortfalls`].
pub fn best_known_table(n_max: usize, config: &SearchConfig) -> Result<BestKnownTable> {
    if n_max < 2 {
        return Err(Error::Domain(format!("table needs n_max ≥ 2, got {n_max}")));
    }
    config.check()?;
    let searched: Vec<Result<SearchResult>> = crate::with_workers(config.workers, || {
        (2..=n_max)
            .into_par_iter()
            .map(|n| {
                let cfg = SearchConfig { n, workers: None, seed: config.seed.wrapping_add(n as u64), ..*config };
                search(&cfg)
            })
            .collect()
    })?;
    let mut slots: Vec<Option<Entry>> = (0..=n_max).map(|_| None).collect();
    for r in searched {
        let r = r?;
        let n = r.packing.len();
        offer(&mut slots[n], r.packing.fcc_points().expect("search yields fcc").to_vec(), "search");
    }
    for k in 2.. {
        let n = octahedron_size(k) as usize;
        if n > n_max {
            break;
        }
        let p = gen_fcc_octahedron(k)?;
        offer(&mut slots[n], p.fcc_points().expect("fcc").to_vec(), &format!("octahedron k={k}"));
    }
    if n_max >= 13 {
        let p = gen_cuboctahedron_13();
        offer(&mut slots[13], p.fcc_points().expect("fcc").to_vec(), "cuboctahedron");
    }

    // alternate extension and shrinking until neither improves a row
    loop {
        let mut changed = false;
        for n in 3..=n_max {
            let prev = slots[n - 1].as_ref().expect("row filled").points.clone();
            changed |= offer(&mut slots[n], grow_from(prev, n), "extended");
        }
        for n in (2..n_max).rev() {
            let next = slots[n + 1].as_ref().expect("row filled").points.clone();
            changed |= offer(&mut slots[n], shrink(&next), "shrunk");
        }
        if !changed {
            break;
        }
    }
    for n in 3..=n_max {
        let prev = slots[n - 1].as_ref().expect("row filled");
        if slots[n].as_ref().expect("row filled").contacts < prev.contacts + 3 {
            // a triangle has only one fcc apex, so the site may be missing or taken
            if let Some(site) = tetrahedral_site(&prev.points) {
                let mut pts = prev.points.clone();
                pts.push(site);
                offer(&mut slots[n], pts, "tetrahedral patch");
            }
        }
    }

    let mut rows = Vec::with_capacity(n_max - 1);
    let mut witnesses = Vec::with_capacity(n_max - 1);
    for (n, slot) in slots.into_iter().enumerate().skip(2) {
        let e = slot.expect("row filled");
        let r = finish(e.points, Vec::new())?;
        if r.contact_number != e.contacts {
            return Err(Error::Inconsistency(format!("row {n}: recount {} differs from {}", r.contact_number, e.contacts)));
        }
        rows.push(TableRow {
            n,
            best: r.contact_number,
            bound_ii: r.bound_ii.expect("n ≥ 2"),
            octahedral_value: r.octahedral_value,
            source: e.source,
        });
        witnesses.push(r.packing);
    }
    Ok(BestKnownTable { rows, witnesses })
}

/// `6n − 6k²`, the contact count of the octahedral cluster, as a real lower
/// bound reference for arbitrary `n`.
pub fn octahedral_reference(n: usize) -> Option<f64> {
    octahedral_k(n).map(|k| six_n_minus(n as f64, 0.0) - 6.0 * (k * k) as f64)
}
