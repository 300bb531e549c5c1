//! Breadth-first searches counting tiles on shortest chains.

use std::collections::{BTreeSet, HashSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::pillow::{LevelGeometry, TileIndex};

/// Restrictions on a planar search.
pub struct PlanarDomain<A, R> {
    /// Cells the chain may use.
    pub allowed: A,
    /// Representative of a cell modulo a symmetry of the problem.
    pub reduce: R,
}

impl PlanarDomain<fn(i64, i64) -> bool, fn((i64, i64)) -> (i64, i64)> {
    /// The whole grid, no quotient.
    pub fn unrestricted() -> Self {
        PlanarDomain { allowed: |_, _| true, reduce: |c| c }
    }
}

/// Shortest chain, counted in cells, from any source cell to a cell
/// satisfying `is_target`, on the unfolded index grid with Chebyshev
/// (corner-contact) adjacency.
///
/// Returns `Ok(None)` when `cap` is given and no chain of at most `cap`
/// cells exists.
pub fn planar_chain_length<A, R>(
    sources: &[(i64, i64)],
    mut is_target: impl FnMut(i64, i64) -> bool,
    mut domain: PlanarDomain<A, R>,
    budget: &Budget,
    cap: Option<u64>,
) -> Result<Option<u64>>
where
    A: FnMut(i64, i64) -> bool,
    R: FnMut((i64, i64)) -> (i64, i64),
{
    let mut visited: HashSet<(i64, i64)> = HashSet::new();
    let mut frontier: Vec<(i64, i64)> = Vec::new();
    for &s in sources {
        let s = (domain.reduce)(s);
        if visited.insert(s) {
            if is_target(s.0, s.1) {
                return Ok(Some(1));
            }
            frontier.push(s);
        }
    }
    let mut count = 1u64;
    while !frontier.is_empty() {
        if cap.is_some_and(|c| count >= c) {
            return Ok(None);
        }
        count += 1;
        let mut next = Vec::new();
        for &(i, j) in &frontier {
            for di in -1..=1 {
                for dj in -1..=1 {
                    let c = (domain.reduce)((i + di, j + dj));
                    if visited.contains(&c) || !(domain.allowed)(c.0, c.1) {
                        continue;
                    }
                    visited.insert(c);
                    if is_target(c.0, c.1) {
                        return Ok(Some(count));
                    }
                    next.push(c);
                }
            }
        }
        if visited.len() as u64 > budget.frontier {
            return Err(Error::BudgetExceeded { budget: budget.frontier });
        }
        frontier = next;
    }
    Ok(None)
}

/// Visited marks for canonical tiles of one level: a bitmap over the
/// residue box when it is small enough, a hash set otherwise.
pub enum TileMarks {
    Dense { h22: i64, bits: Vec<u64> },
    Sparse(HashSet<(i64, i64)>),
}

const DENSE_LIMIT: i64 = 1 << 28;

impl TileMarks {
    pub fn new(geo: &LevelGeometry) -> Self {
        let hnf = geo.hnf();
        match hnf.h11.checked_mul(hnf.h22) {
            Some(size) if size <= DENSE_LIMIT => {
                TileMarks::Dense { h22: hnf.h22, bits: vec![0; (size as usize).div_ceil(64)] }
            }
            _ => TileMarks::Sparse(HashSet::new()),
        }
    }

    /// Marks `t`, returning whether it was unmarked.
    pub fn insert(&mut self, t: &TileIndex) -> bool {
        match self {
            TileMarks::Dense { h22, bits } => {
                let k = (t.i * *h22 + t.j) as usize;
                let (word, bit) = (k / 64, 1u64 << (k % 64));
                let fresh = bits[word] & bit == 0;
                bits[word] |= bit;
                fresh
            }
            TileMarks::Sparse(set) => set.insert((t.i, t.j)),
        }
    }
}

/// Canonical tiles meeting `t`, possibly with repeats and `t` itself.
pub fn touching_tiles<'a>(geo: &'a LevelGeometry, t: &TileIndex) -> impl Iterator<Item = TileIndex> + 'a {
    let (i, j) = (t.i, t.j);
    (-1..=1).flat_map(move |di| (-1..=1).map(move |dj| geo.canonical_tile(i + di, j + dj)))
}

/// Same search on the folded pillow: neighbors are canonical tiles in
/// corner contact.
pub fn folded_chain_length(
    geo: &LevelGeometry,
    sources: &BTreeSet<TileIndex>,
    targets: &BTreeSet<TileIndex>,
    budget: &Budget,
) -> Result<Option<u64>> {
    if sources.iter().any(|s| targets.contains(s)) {
        return Ok(Some(1));
    }
    let mut visited = TileMarks::new(geo);
    let mut seen = 0u64;
    for s in sources {
        visited.insert(s);
        seen += 1;
    }
    let mut frontier: Vec<TileIndex> = sources.iter().copied().collect();
    let mut count = 1u64;
    while !frontier.is_empty() {
        count += 1;
        let mut next = Vec::new();
        for t in &frontier {
            for nb in touching_tiles(geo, t) {
                if visited.insert(&nb) {
                    seen += 1;
                    if targets.contains(&nb) {
                        return Ok(Some(count));
                    }
                    next.push(nb);
                }
            }
        }
        if seen > budget.frontier {
            return Err(Error::BudgetExceeded { budget: budget.frontier });
        }
        frontier = next;
    }
    Ok(None)
}
