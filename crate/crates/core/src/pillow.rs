//! The (2,2,2,2) pillow `R^2 / Γ`, Γ generated by translations by `2Z^2`
//! and `x ↦ -x`, and the level-n cell decompositions pulled back by `L^n`.
//!
//! All cells are handled in *index space*: the level-n parallelogram
//! `L^{-n}([i, i+1] × [j, j+1])` is addressed by the integer pair `(i, j)`.
//! In index space Γ acts by translations by `2 L^n Z^2` together with the
//! point reflection `w ↦ -w`, which sends the unit square `(i, j)` to
//! `(-i-1, -j-1)`, the edge slots accordingly, and the lattice point
//! `(i, j)` to `(-i, -j)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact::{eig_min_modulus, mat_pow, AlgebraicModulus, ColumnHnf, IntMat2, Rational};

/// Translations of the folding group are by `LATTICE_SCALE · Z^2`.
pub const LATTICE_SCALE: i64 = 2;
/// Order of the rotation group acting on the torus (`⟨-id⟩`).
pub const ROTATION_ORDER: u32 = 2;

/// Index coordinates are kept below this bound so every form evaluation fits in i128.
const INDEX_BOUND: i64 = 1 << 40;

#[derive(Clone, Debug, PartialEq)]
pub struct LattesTypeMap {
    matrix: IntMat2,
    degree: BigInt,
    lambda0: AlgebraicModulus,
}

/// Validates `L` as the linear part of a Lattès-type map on the pillow.
pub fn make_map(l: IntMat2) -> Result<LattesTypeMap> {
    let det = l.det();
    if det <= BigInt::from(1) {
        return Err(Error::DegreeTooSmall(det.to_string()));
    }
    if l.discriminant() >= BigInt::zero() {
        // real roots of z^2 - tr z + det, both of modulus > 1 iff |tr| < 1 + det
        if l.trace().abs() >= &det + 1 {
            return Err(Error::NotExpanding);
        }
    }
    let lambda0 = eig_min_modulus(&l)?;
    Ok(LattesTypeMap { matrix: l, degree: det, lambda0 })
}

impl LattesTypeMap {
    pub fn matrix(&self) -> &IntMat2 {
        &self.matrix
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn lambda0(&self) -> &AlgebraicModulus {
        &self.lambda0
    }

    pub fn lattice_scale(&self) -> i64 {
        LATTICE_SCALE
    }

    pub fn rotation_order(&self) -> u32 {
        ROTATION_ORDER
    }

    /// `deg^n` as an exact integer.
    pub fn degree_pow(&self, n: u32) -> BigInt {
        num_traits::pow(self.degree.clone(), n as usize)
    }

    /// Number of level-n tiles, `2 deg^n`.
    pub fn tile_count(&self, n: u32) -> BigInt {
        self.degree_pow(n) * 2
    }

    pub fn level(&self, n: u32) -> Result<LevelGeometry> {
        LevelGeometry::new(self, n)
    }

    /// Errors unless `2 deg^n` fits in the cell budget.
    pub fn check_enumeration(&self, n: u32, budget: &Budget) -> Result<()> {
        let cells = self.tile_count(n);
        if cells > BigInt::from(budget.cells) {
            return Err(Error::LevelTooDeep { level: n, cells: cells.to_string(), budget: budget.cells });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TileIndex {
    pub level: u32,
    pub i: i64,
    pub j: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSide {
    Bottom,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeIndex {
    pub level: u32,
    pub i: i64,
    pub j: i64,
    pub side: EdgeSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexIndex {
    pub level: u32,
    pub i: i64,
    pub j: i64,
}

impl fmt::Display for TileIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}({}, {})", self.level, self.i, self.j)
    }
}

/// One of the four 0-edges of the curve `C = ℘(∂[0,1]^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroEdge {
    Bottom,
    Top,
    Left,
    Right,
}

impl ZeroEdge {
    pub const ALL: [ZeroEdge; 4] = [ZeroEdge::Bottom, ZeroEdge::Top, ZeroEdge::Left, ZeroEdge::Right];

    /// The lifted edge is the union of the lines `{axis = k}` with `k ≡ parity (mod 2)`.
    fn axis_and_parity(self) -> (Axis, i128) {
        match self {
            ZeroEdge::Bottom => (Axis::Y, 0),
            ZeroEdge::Top => (Axis::Y, 1),
            ZeroEdge::Left => (Axis::X, 0),
            ZeroEdge::Right => (Axis::X, 1),
        }
    }

    pub fn opposite(self) -> ZeroEdge {
        match self {
            ZeroEdge::Bottom => ZeroEdge::Top,
            ZeroEdge::Top => ZeroEdge::Bottom,
            ZeroEdge::Left => ZeroEdge::Right,
            ZeroEdge::Right => ZeroEdge::Left,
        }
    }
}

/// Whether a tile touching only an endpoint (a cone point) of a 0-edge meets it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeConvention {
    #[default]
    Closed,
    Open,
}

/// Plane coordinate axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Index-space data of one level: `L^n`, its determinant, and the column
/// HNF of the translation lattice `2 L^n Z^2`.
#[derive(Clone, Debug)]
pub struct LevelGeometry {
    level: u32,
    power: [i64; 4],
    det: i64,
    hnf: ColumnHnf<i64>,
}

const CHEBYSHEV_OFFSETS: [(i64, i64); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];
const SIDE_OFFSETS: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

impl LevelGeometry {
    fn new(map: &LattesTypeMap, n: u32) -> Result<Self> {
        let p = mat_pow(&map.matrix, n);
        let det = p.det();
        let too_deep = || Error::LevelTooDeep {
            level: n,
            cells: map.tile_count(n).to_string(),
            budget: INDEX_BOUND as u64,
        };
        let small = |v: &BigInt| v.to_i64().filter(|x| x.abs() < INDEX_BOUND);
        let power = [small(&p.a), small(&p.b), small(&p.c), small(&p.d)];
        let (Some(a), Some(b), Some(c), Some(d), Some(det)) = (power[0], power[1], power[2], power[3], small(&det))
        else {
            return Err(too_deep());
        };
        let s = LATTICE_SCALE;
        let hnf = ColumnHnf::new(s * a, s * b, s * c, s * d).ok_or(Error::NonInvertible)?;
        Ok(LevelGeometry { level: n, power: [a, b, c, d], det, hnf })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `L^n`, row-major.
    pub fn power(&self) -> [i64; 4] {
        self.power
    }

    /// `det(L^n) = deg^n`.
    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn hnf(&self) -> &ColumnHnf<i64> {
        &self.hnf
    }

    /// Reduces modulo the translation lattice `2 L^n Z^2`.
    pub fn residue(&self, i: i64, j: i64) -> (i64, i64) {
        self.hnf.residue(i, j)
    }

    pub fn canonical_tile(&self, i: i64, j: i64) -> TileIndex {
        let r = self.residue(i, j);
        let s = self.residue(-i - 1, -j - 1);
        let (i, j) = r.min(s);
        TileIndex { level: self.level, i, j }
    }

    pub fn canonical_edge(&self, i: i64, j: i64, side: EdgeSide) -> EdgeIndex {
        let (ri, rj) = self.residue(i, j);
        let (fi, fj) = match side {
            EdgeSide::Bottom => (-i - 1, -j),
            EdgeSide::Left => (-i, -j - 1),
        };
        let (si, sj) = self.residue(fi, fj);
        let (i, j) = (ri, rj).min((si, sj));
        EdgeIndex { level: self.level, i, j, side }
    }

    pub fn canonical_vertex(&self, i: i64, j: i64) -> VertexIndex {
        let (i, j) = self.residue(i, j).min(self.residue(-i, -j));
        VertexIndex { level: self.level, i, j }
    }

    /// `det^n · (L^{-n} w)`: plane coordinates of the index point `w`, scaled to integers.
    pub fn plane_scaled(&self, wx: i64, wy: i64) -> (i128, i128) {
        let [a, b, c, d] = self.power.map(i128::from);
        let (x, y) = (i128::from(wx), i128::from(wy));
        (d * x - b * y, -c * x + a * y)
    }

    fn corner_values(&self, i: i64, j: i64, axis: Axis) -> [i128; 4] {
        let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
        corners.map(|(x, y)| {
            let (px, py) = self.plane_scaled(x, y);
            match axis {
                Axis::X => px,
                Axis::Y => py,
            }
        })
    }

    /// Range of the scaled plane coordinate `axis` over the closed cell `(i, j)`.
    pub fn cell_range(&self, i: i64, j: i64, axis: Axis) -> (i128, i128) {
        let v = self.corner_values(i, j, axis);
        (*v.iter().min().unwrap(), *v.iter().max().unwrap())
    }

    /// Whether the closed cell meets the plane line `{axis = k}`.
    pub fn cell_meets_line(&self, i: i64, j: i64, axis: Axis, k: i64) -> bool {
        let (lo, hi) = self.cell_range(i, j, axis);
        let t = i128::from(k) * i128::from(self.det);
        lo <= t && t <= hi
    }

    /// Whether the closed cell meets the lift of the given 0-edge.
    pub fn cell_meets_zero_edge(&self, i: i64, j: i64, edge: ZeroEdge, convention: EdgeConvention) -> bool {
        let (axis, parity) = edge.axis_and_parity();
        let det = i128::from(self.det);
        let period = 2 * det;
        let offset = parity * det;
        let values = self.corner_values(i, j, axis);
        let lo = *values.iter().min().unwrap();
        let hi = *values.iter().max().unwrap();
        // smallest value >= lo of the form offset + period·m
        let first = offset + num_integer::Integer::div_ceil(&(lo - offset), &period) * period;
        if first > hi {
            return false;
        }
        if convention == EdgeConvention::Closed || first < hi && first > lo {
            return true;
        }
        // The hit sits at an extreme corner value; check every hit level.
        let mut t = first;
        while t <= hi {
            let touching: Vec<usize> = (0..4).filter(|&k| values[k] == t).collect();
            if t > lo && t < hi || touching.len() >= 2 {
                return true;
            }
            // single corner on the line: meets the open edge unless it is a cone point
            let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
            let (cx, cy) = corners[touching[0]];
            let (px, py) = self.plane_scaled(cx, cy);
            let other = match axis {
                Axis::X => py,
                Axis::Y => px,
            };
            if other.rem_euclid(det) != 0 {
                return true;
            }
            t += period;
        }
        false
    }

    /// Canonical tiles meeting `t` at a point, `t` itself excluded.
    pub fn chain_neighbors(&self, t: &TileIndex) -> Vec<TileIndex> {
        self.neighbors(t, &CHEBYSHEV_OFFSETS)
    }

    /// Canonical tiles sharing a full side with `t`.
    pub fn edge_neighbors(&self, t: &TileIndex) -> Vec<TileIndex> {
        self.neighbors(t, &SIDE_OFFSETS)
    }

    fn neighbors(&self, t: &TileIndex, offsets: &[(i64, i64)]) -> Vec<TileIndex> {
        let mut out: Vec<TileIndex> = offsets
            .iter()
            .map(|&(di, dj)| self.canonical_tile(t.i + di, t.j + dj))
            .filter(|n| n != t)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn chain_adjacent(&self, t1: &TileIndex, t2: &TileIndex) -> Result<bool> {
        self.check_level(t1)?;
        self.check_level(t2)?;
        let c2 = self.canonical_tile(t2.i, t2.j);
        Ok(self.canonical_tile(t1.i, t1.j) == c2
            || CHEBYSHEV_OFFSETS.iter().any(|&(di, dj)| self.canonical_tile(t1.i + di, t1.j + dj) == c2))
    }

    pub fn edge_adjacent(&self, t1: &TileIndex, t2: &TileIndex) -> Result<bool> {
        self.check_level(t1)?;
        self.check_level(t2)?;
        let c2 = self.canonical_tile(t2.i, t2.j);
        Ok(SIDE_OFFSETS.iter().any(|&(di, dj)| self.canonical_tile(t1.i + di, t1.j + dj) == c2))
    }

    fn check_level(&self, t: &TileIndex) -> Result<()> {
        if t.level != self.level {
            return Err(Error::LevelMismatch(t.level, self.level));
        }
        Ok(())
    }

    /// Index-space cells whose closure contains the index point `w`.
    pub fn cells_containing(&self, w: (&Rational, &Rational)) -> Result<Vec<(i64, i64)>> {
        let floors = |v: &Rational| -> Result<Vec<i64>> {
            let f = v.floor().to_integer().to_i64().ok_or_else(|| {
                Error::InvalidInput(format!("index coordinate {v} out of range"))
            })?;
            Ok(if v.is_integer() { vec![f - 1, f] } else { vec![f] })
        };
        let xs = floors(w.0)?;
        let ys = floors(w.1)?;
        Ok(xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect())
    }

    /// Index-space image `L^n p` of a plane point.
    pub fn to_index(&self, p: (&Rational, &Rational)) -> (Rational, Rational) {
        let [a, b, c, d] = self.power.map(|v| Rational::from_integer(BigInt::from(v)));
        (&a * p.0 + &b * p.1, &c * p.0 + &d * p.1)
    }

    pub fn tiles_containing(&self, p: &PillowPoint) -> Result<BTreeSet<TileIndex>> {
        let (wx, wy) = self.to_index((&p.x, &p.y));
        Ok(self
            .cells_containing((&wx, &wy))?
            .into_iter()
            .map(|(i, j)| self.canonical_tile(i, j))
            .collect())
    }

    /// Canonical tiles, sorted, enumerated from the residue box.
    pub fn enumerate_tiles(&self) -> Vec<TileIndex> {
        let mut out = Vec::new();
        for i in 0..self.hnf.h11 {
            for j in 0..self.hnf.h22 {
                let t = self.canonical_tile(i, j);
                if (t.i, t.j) == (i, j) {
                    out.push(t);
                }
            }
        }
        out.sort();
        out
    }

    pub fn enumerate_edges(&self) -> Vec<EdgeIndex> {
        let mut out = Vec::new();
        for i in 0..self.hnf.h11 {
            for j in 0..self.hnf.h22 {
                for side in [EdgeSide::Bottom, EdgeSide::Left] {
                    let e = self.canonical_edge(i, j, side);
                    if (e.i, e.j) == (i, j) {
                        out.push(e);
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn enumerate_vertices(&self) -> Vec<VertexIndex> {
        let mut out = Vec::new();
        for i in 0..self.hnf.h11 {
            for j in 0..self.hnf.h22 {
                let v = self.canonical_vertex(i, j);
                if (v.i, v.j) == (i, j) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }

    /// The four sides of a tile as canonical edges: bottom, top, left, right.
    pub fn tile_edges(&self, t: &TileIndex) -> [EdgeIndex; 4] {
        [
            self.canonical_edge(t.i, t.j, EdgeSide::Bottom),
            self.canonical_edge(t.i, t.j + 1, EdgeSide::Bottom),
            self.canonical_edge(t.i, t.j, EdgeSide::Left),
            self.canonical_edge(t.i + 1, t.j, EdgeSide::Left),
        ]
    }

    /// Vertex classes fixed by the point reflection (the cone points).
    pub fn cone_vertices(&self) -> Vec<VertexIndex> {
        self.enumerate_vertices()
            .into_iter()
            .filter(|v| self.residue(-v.i, -v.j) == (v.i, v.j))
            .collect()
    }
}

/// A point of the pillow, stored as its canonical lift in `[0, 2)^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PillowPoint {
    #[serde(with = "crate::serde_num::ratio")]
    pub x: Rational,
    #[serde(with = "crate::serde_num::ratio")]
    pub y: Rational,
}

impl PillowPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        let two = Rational::from_integer(BigInt::from(LATTICE_SCALE));
        let reduce = |v: &Rational| -> Rational {
            let q = (v / &two).floor();
            v - q * &two
        };
        let direct = (reduce(&x), reduce(&y));
        let flipped = (reduce(&-&x), reduce(&-&y));
        let (x, y) = direct.min(flipped);
        PillowPoint { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        PillowPoint::new(crate::exact::rat(x.0, x.1), crate::exact::rat(y.0, y.1))
    }

    /// Cone points are the images of the integer lattice.
    pub fn is_cone_point(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

impl fmt::Display for PillowPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn canonical_tile(map: &LattesTypeMap, n: u32, i: i64, j: i64) -> Result<TileIndex> {
    Ok(map.level(n)?.canonical_tile(i, j))
}

pub fn tiles(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<Vec<TileIndex>> {
    map.check_enumeration(n, budget)?;
    Ok(map.level(n)?.enumerate_tiles())
}

pub fn chain_adjacent(map: &LattesTypeMap, t1: &TileIndex, t2: &TileIndex) -> Result<bool> {
    if t1.level != t2.level {
        return Err(Error::LevelMismatch(t1.level, t2.level));
    }
    map.level(t1.level)?.chain_adjacent(t1, t2)
}

pub fn edge_adjacent(map: &LattesTypeMap, t1: &TileIndex, t2: &TileIndex) -> Result<bool> {
    if t1.level != t2.level {
        return Err(Error::LevelMismatch(t1.level, t2.level));
    }
    map.level(t1.level)?.edge_adjacent(t1, t2)
}

pub fn tiles_containing(map: &LattesTypeMap, n: u32, p: &PillowPoint) -> Result<BTreeSet<TileIndex>> {
    map.level(n)?.tiles_containing(p)
}

pub fn zero_edge_tiles(
    map: &LattesTypeMap,
    n: u32,
    edge: ZeroEdge,
    convention: EdgeConvention,
    budget: &Budget,
) -> Result<BTreeSet<TileIndex>> {
    map.check_enumeration(n, budget)?;
    let geo = map.level(n)?;
    Ok(geo
        .enumerate_tiles()
        .into_iter()
        .filter(|t| geo.cell_meets_zero_edge(t.i, t.j, edge, convention))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    pub vertices: u64,
    pub edges: u64,
    pub tiles: u64,
}

impl CellCounts {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.tiles as i64
    }

    /// `(2 deg^n + 2, 4 deg^n, 2 deg^n)`
    pub fn expected(degree_pow: u64) -> CellCounts {
        CellCounts { vertices: 2 * degree_pow + 2, edges: 4 * degree_pow, tiles: 2 * degree_pow }
    }
}

/// The level-n cells of the pillow with adjacency accessors.
#[derive(Clone, Debug)]
pub struct CellDecomposition {
    map: LattesTypeMap,
    geometry: LevelGeometry,
    tiles: Vec<TileIndex>,
    edges: Vec<EdgeIndex>,
    vertices: Vec<VertexIndex>,
}

impl CellDecomposition {
    pub fn new(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<Self> {
        map.check_enumeration(n, budget)?;
        let geometry = map.level(n)?;
        Ok(CellDecomposition {
            map: map.clone(),
            tiles: geometry.enumerate_tiles(),
            edges: geometry.enumerate_edges(),
            vertices: geometry.enumerate_vertices(),
            geometry,
        })
    }

    pub fn map(&self) -> &LattesTypeMap {
        &self.map
    }

    pub fn level(&self) -> u32 {
        self.geometry.level
    }

    pub fn geometry(&self) -> &LevelGeometry {
        &self.geometry
    }

    pub fn tiles(&self) -> &[TileIndex] {
        &self.tiles
    }

    pub fn edges(&self) -> &[EdgeIndex] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VertexIndex] {
        &self.vertices
    }

    pub fn tile_position(&self, t: &TileIndex) -> Option<usize> {
        self.tiles.binary_search(t).ok()
    }

    pub fn counts(&self) -> CellCounts {
        CellCounts {
            vertices: self.vertices.len() as u64,
            edges: self.edges.len() as u64,
            tiles: self.tiles.len() as u64,
        }
    }

    /// Number of tile sides lying on each edge, counted with multiplicity.
    pub fn edge_incidence(&self) -> BTreeMap<EdgeIndex, u32> {
        let mut inc = BTreeMap::new();
        for t in &self.tiles {
            for e in self.geometry.tile_edges(t) {
                *inc.entry(e).or_insert(0) += 1;
            }
        }
        inc
    }
}

/// Enumerated `(V, E, F)`, checked against `(2 deg^n + 2, 4 deg^n, 2 deg^n)`,
/// Euler's formula and edge incidence.
pub fn cell_counts(map: &LattesTypeMap, n: u32, budget: &Budget) -> Result<CellCounts> {
    let dec = CellDecomposition::new(map, n, budget)?;
    let counts = dec.counts();
    let deg_n = map
        .degree_pow(n)
        .to_u64()
        .ok_or_else(|| Error::InvariantViolation("degree power overflow".into()))?;
    let expected = CellCounts::expected(deg_n);
    if counts != expected {
        return Err(Error::InvariantViolation(format!("cell counts {counts:?} differ from {expected:?}")));
    }
    if counts.euler_characteristic() != 2 {
        return Err(Error::InvariantViolation(format!("V - E + F = {}", counts.euler_characteristic())));
    }
    let inc = dec.edge_incidence();
    if inc.len() != dec.edges.len() || inc.values().any(|&k| k != 2) {
        return Err(Error::InvariantViolation("an edge does not bound exactly two tile sides".into()));
    }
    Ok(counts)
}

/// Never true: `2i + 1` is odd while translations are even.
pub fn involution_fixes_tile(geo: &LevelGeometry, t: &TileIndex) -> bool {
    geo.residue(-t.i - 1, -t.j - 1) == (t.i, t.j)
}
