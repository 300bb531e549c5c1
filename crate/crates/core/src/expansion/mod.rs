//! `D_n`, the minimal number of level-n tiles joining opposite sides of the
//! curve `C`, computed two independent ways, with its operator-norm
//! sandwich, the expansion-factor sequence and the disjoint-path bound.

pub mod flow;
pub mod raster;
pub mod search;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact::{inv_pow, linf_norm, rational_to_f64, AlgebraicModulus, Rational};
use crate::pillow::{Axis, CellDecomposition, EdgeConvention, LattesTypeMap, LevelGeometry, ZeroEdge};

use self::search::{folded_chain_length, planar_chain_length, PlanarDomain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DnMethod {
    Planar,
    Folded,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnReport {
    pub level: u32,
    pub dn: u64,
    #[serde(with = "crate::serde_num::ratio")]
    pub lower_bound: Rational,
    pub lower_bound_f64: f64,
    #[serde(with = "crate::serde_num::ratio")]
    pub upper_bound: Rational,
    pub upper_bound_f64: f64,
    pub method: DnMethod,
    /// `Some(equal)` when both algorithms ran.
    pub agreement: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MengerReport {
    pub level: u32,
    pub dn: u64,
    /// Fewest tiles on an edge-connected path between the two sides inside one 0-tile.
    pub path_min_tiles: u64,
    /// Maximum number of vertex-disjoint such paths.
    pub max_disjoint_paths: u64,
    /// Tiles inside one 0-tile, `deg^n`.
    pub tile_budget: u64,
    /// Tiles overlapping the 0-tile; equals `tile_budget` when `nested`.
    pub region_tiles: u64,
    /// Level-n tiles subdivide the 0-tiles.
    pub nested: bool,
    /// `D_n <= N_n` and `D_n <= k`.
    pub chain_holds: bool,
    /// `k · N_n <= deg^n`; the weaker `<= 2 deg^n` is enforced.
    pub single_tile_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lambda0Term {
    pub n: u32,
    pub dn: u64,
    pub root_f64: f64,
    pub lower_root_f64: f64,
    pub upper_root_f64: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lambda0Report {
    pub terms: Vec<Lambda0Term>,
    pub target: AlgebraicModulus,
    pub final_error_f64: f64,
}

impl Lambda0Report {
    pub fn within(&self, tolerance: f64) -> bool {
        self.final_error_f64 <= tolerance
    }
}

/// `D'_n = min(D_h, D_v)` on the unfolded grid of level-n parallelograms.
///
/// `D_h` is the shortest chain from the line `L^n {y = 0}` to `L^n {y = 1}`
/// in index space. The configuration is periodic along the source line with
/// period `L^n (1, 0)`, so sources are the cells meeting one period of it.
pub fn dn_planar(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<u64> {
    let geo = map.level(n)?;
    let [a, b, c, d] = geo.power();
    let dh = crossing_length(&geo, Axis::Y, (a, c), budget, None)?
        .ok_or_else(|| Error::InvariantViolation("no chain between horizontal lines".into()))?;
    let dv = crossing_length(&geo, Axis::X, (b, d), budget, Some(dh))?;
    Ok(dv.map_or(dh, |dv| dv.min(dh)))
}

fn crossing_length(
    geo: &LevelGeometry,
    axis: Axis,
    period: (i64, i64),
    budget: &Budget,
    cap: Option<u64>,
) -> Result<Option<u64>> {
    let sources = raster::supercover(period);
    // A shortest chain can be cut down to one whose cells all meet the
    // closed strip between the two lines, and the strip is invariant under
    // translation by one period of the source line.
    let det = i128::from(geo.det());
    let domain = PlanarDomain {
        allowed: |i, j| {
            let (lo, hi) = geo.cell_range(i, j, axis);
            lo <= det && hi >= 0
        },
        reduce: |(i, j): (i64, i64)| {
            let t = if period.0 != 0 { i.div_euclid(period.0) } else { j.div_euclid(period.1) };
            (i - t * period.0, j - t * period.1)
        },
    };
    planar_chain_length(&sources, |i, j| geo.cell_meets_line(i, j, axis, 1), domain, budget, cap)
}

/// `D_n` by search over the folded pillow's tiles, between the two pairs of
/// disjoint 0-edges.
pub fn dn_folded(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<u64> {
    dn_folded_with(map, n, EdgeConvention::Closed, budget)
}

pub fn dn_folded_with(map: &LattesTypeMap, n: u32, convention: EdgeConvention, budget: &Budget) -> Result<u64> {
    let dec = CellDecomposition::new(map, n, budget)?;
    let geo = dec.geometry();
    let side = |edge: ZeroEdge| -> BTreeSet<_> {
        dec.tiles().iter().copied().filter(|t| geo.cell_meets_zero_edge(t.i, t.j, edge, convention)).collect()
    };
    let mut best: Option<u64> = None;
    for (from, to) in [(ZeroEdge::Bottom, ZeroEdge::Top), (ZeroEdge::Left, ZeroEdge::Right)] {
        if let Some(len) = folded_chain_length(geo, &side(from), &side(to), budget)? {
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best.ok_or_else(|| Error::InvariantViolation("opposite 0-edges are not joined".into()))
}

/// `(1/‖L^{-n}‖∞, 1/‖L^{-n}‖∞ + 1)`
pub fn dn_bounds(map: &LattesTypeMap, n: u32) -> Result<(Rational, Rational)> {
    let lower = linf_norm(&inv_pow(map.matrix(), n)?).recip();
    let upper = &lower + Rational::one();
    Ok((lower, upper))
}

pub fn dn_report(map: &LattesTypeMap, n: u32, method: DnMethod, budget: &Budget) -> Result<DnReport> {
    let (dn, agreement) = match method {
        DnMethod::Planar => (dn_planar(map, n, budget)?, None),
        DnMethod::Folded => (dn_folded(map, n, budget)?, None),
        DnMethod::Both => {
            let p = dn_planar(map, n, budget)?;
            let f = dn_folded(map, n, budget)?;
            (p, Some(p == f))
        }
    };
    let (lower_bound, upper_bound) = dn_bounds(map, n)?;
    let d = Rational::from_integer(BigInt::from(dn));
    if d < lower_bound || d > upper_bound {
        return Err(Error::InvariantViolation(format!(
            "D_{n} = {dn} outside [{lower_bound}, {upper_bound}]"
        )));
    }
    let dm1 = BigInt::from(dn) - 1;
    if &dm1 * &dm1 > map.degree_pow(n) {
        return Err(Error::InvariantViolation(format!("(D_{n} - 1)^2 exceeds deg^{n}")));
    }
    Ok(DnReport {
        level: n,
        dn,
        lower_bound_f64: rational_to_f64(&lower_bound),
        upper_bound_f64: rational_to_f64(&upper_bound),
        lower_bound,
        upper_bound,
        method,
        agreement,
    })
}

/// `D_n^{1/n}` for `1 <= n <= n_max` against the smallest eigenvalue modulus.
pub fn lambda0_estimate(map: &LattesTypeMap, n_max: u32, budget: &Budget) -> Result<Lambda0Report> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let mut terms = Vec::new();
    for n in 1..=n_max {
        let dn = dn_planar(map, n, budget)?;
        let (lo, hi) = dn_bounds(map, n)?;
        let root = |v: f64| v.powf(1.0 / f64::from(n));
        terms.push(Lambda0Term {
            n,
            dn,
            root_f64: root(dn as f64),
            lower_root_f64: root(rational_to_f64(&lo)),
            upper_root_f64: root(rational_to_f64(&hi)),
        });
    }
    let target = map.lambda0().clone();
    let final_error_f64 = (terms.last().unwrap().root_f64 - target.approx()).abs();
    Ok(Lambda0Report { terms, target, final_error_f64 })
}

/// Level-n cells whose interior meets the interior of the 0-tile
/// `℘([0,1]^2)`. When the level-n tiles subdivide the 0-tiles these are
/// exactly the `deg^n` tiles inside it.
pub fn zero_tile_region(geo: &LevelGeometry) -> Vec<(i64, i64)> {
    let [a, b, c, d] = geo.power();
    let (xs, ys) = ([0, a, b, a + b], [0, c, d, c + d]);
    let (i_lo, i_hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (j_lo, j_hi) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let det = i128::from(geo.det());
    let overlaps = |(lo, hi): (i128, i128)| lo < det && hi > 0;
    let mut cells = Vec::new();
    for i in i_lo..i_hi {
        for j in j_lo..j_hi {
            if overlaps(geo.cell_range(i, j, Axis::X)) && overlaps(geo.cell_range(i, j, Axis::Y)) {
                cells.push((i, j));
            }
        }
    }
    cells
}

/// Whether every level-n tile lies inside a single 0-tile.
pub fn tiles_nest(geo: &LevelGeometry) -> bool {
    let det = i128::from(geo.det());
    // a unit cell at the origin suffices: the pattern is periodic under the lattice
    [Axis::X, Axis::Y].iter().all(|&axis| {
        let (lo, hi) = geo.cell_range(0, 0, axis);
        lo.div_euclid(det) == (hi - 1).div_euclid(det)
    }) && zero_tile_region(geo).len() as i128 == det
}

/// Disjoint-path data inside one 0-tile between its bottom and top sides.
///
/// The inequalities are enforced when the level-n tiles nest inside the
/// 0-tiles. Otherwise the region is the set of tiles overlapping the 0-tile
/// and the outcome is only reported.
pub fn menger_verify(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<MengerReport> {
    let deg_n = map.degree_pow(n);
    if deg_n > BigInt::from(budget.cells) {
        return Err(Error::LevelTooDeep { level: n, cells: deg_n.to_string(), budget: budget.cells });
    }
    let tile_budget = deg_n.to_u64().unwrap();
    let geo = map.level(n)?;
    let nested = tiles_nest(&geo);
    let cells = zero_tile_region(&geo);
    let index: HashMap<(i64, i64), usize> = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let adjacency: Vec<Vec<usize>> = cells
        .iter()
        .map(|&(i, j)| {
            [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
                .iter()
                .filter_map(|c| index.get(c).copied())
                .collect()
        })
        .collect();
    let side = |k: i64| -> Vec<usize> {
        (0..cells.len()).filter(|&v| geo.cell_meets_line(cells[v].0, cells[v].1, Axis::Y, k)).collect()
    };
    let (a, b) = (side(0), side(1));

    let path_min_tiles = shortest_path_tiles(&adjacency, &a, &b)
        .ok_or_else(|| Error::InvariantViolation("0-tile sides not joined".into()))?;
    let max_disjoint_paths = flow::vertex_disjoint_paths(&adjacency, &a, &b);
    let dn = dn_planar(map, n, budget)?;
    let product = max_disjoint_paths * path_min_tiles;
    let chain_holds = dn <= path_min_tiles && dn <= max_disjoint_paths;

    if nested {
        if !chain_holds {
            return Err(Error::InvariantViolation(format!(
                "D_{n} = {dn} exceeds N_n = {path_min_tiles} or k = {max_disjoint_paths}"
            )));
        }
        if product > 2 * tile_budget {
            return Err(Error::InvariantViolation(format!("k N_n = {product} exceeds 2 deg^n")));
        }
    }
    Ok(MengerReport {
        level: n,
        dn,
        path_min_tiles,
        max_disjoint_paths,
        tile_budget,
        region_tiles: cells.len() as u64,
        nested,
        chain_holds,
        single_tile_bound_holds: product <= tile_budget,
    })
}

fn shortest_path_tiles(adjacency: &[Vec<usize>], from: &[usize], to: &[usize]) -> Option<u64> {
    let target: BTreeSet<usize> = to.iter().copied().collect();
    let mut dist = vec![u64::MAX; adjacency.len()];
    let mut queue = std::collections::VecDeque::new();
    for &s in from {
        dist[s] = 1;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        if target.contains(&u) {
            return Some(dist[u]);
        }
        for &v in &adjacency[u] {
            if dist[v] == u64::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests;
