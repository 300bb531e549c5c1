//! Tile-separation levels `m`, `m'` and the finite-level chain metric `d_n`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{pow, One, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact::{AlgebraicModulus, Rational};
use crate::expansion::search::{touching_tiles, TileMarks};
use crate::orbifold::ExtNat;
use crate::pillow::{LattesTypeMap, LevelGeometry, PillowPoint, TileIndex};

pub const DEFAULT_LEVEL_CAP: u32 = 20;
pub const DEFAULT_WINDOW: u32 = 5;
pub const DEFAULT_PAIRS: usize = 12;

/// `count · Λ₀^exponent`, exact as the pair plus a rational when Λ₀ is rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledCount {
    pub count: u64,
    pub exponent: i64,
    #[serde(with = "crate::serde_num::ratio_opt")]
    pub value: Option<Rational>,
    pub value_f64: f64,
}

impl ScaledCount {
    pub fn new(count: u64, exponent: i64, lambda: &AlgebraicModulus) -> Self {
        let value = lambda.as_rational().map(|q| {
            let c = Rational::from_integer(BigInt::from(count));
            if exponent >= 0 {
                c * pow(q, exponent as usize)
            } else {
                c / pow(q, (-exponent) as usize)
            }
        });
        let value_f64 = count as f64 * lambda.approx().powi(exponent as i32);
        ScaledCount { count, exponent, value, value_f64 }
    }

    pub fn cmp_with(&self, other: &ScaledCount, lambda: &AlgebraicModulus) -> Ordering {
        let (a, b) = (Rational::from_integer(self.count.into()), Rational::from_integer(other.count.into()));
        lambda.cmp_scaled(&a, self.exponent, &b, other.exponent)
    }

    /// `self <= factor · other`
    pub fn at_most_times(&self, factor: u64, other: &ScaledCount, lambda: &AlgebraicModulus) -> bool {
        let a = Rational::from_integer(self.count.into());
        let b = Rational::from_integer(BigInt::from(other.count) * factor);
        lambda.cmp_scaled(&a, self.exponent, &b, other.exponent) != Ordering::Greater
    }
}

/// Whether some tile containing `x` and some tile containing `y` are
/// disjoint, resp. meet, at the given level.
fn separation(geo: &LevelGeometry, x: &PillowPoint, y: &PillowPoint) -> Result<(bool, bool)> {
    let tx = geo.tiles_containing(x)?;
    let ty = geo.tiles_containing(y)?;
    let (mut disjoint, mut touching) = (false, false);
    for a in &tx {
        for b in &ty {
            if geo.chain_adjacent(a, b)? {
                touching = true;
            } else {
                disjoint = true;
            }
        }
    }
    Ok((disjoint, touching))
}

/// Least level with disjoint tiles containing `x` and `y`; `∞` when `x = y`.
pub fn m_index(map: &LattesTypeMap, x: &PillowPoint, y: &PillowPoint, n_cap: u32) -> Result<ExtNat> {
    if x == y {
        return Ok(ExtNat::Infinite);
    }
    for n in 0..=n_cap {
        if separation(&map.level(n)?, x, y)?.0 {
            return Ok(ExtNat::Finite(u64::from(n)));
        }
    }
    Err(Error::CapExceeded { cap: n_cap })
}

/// Largest level `<= n_cap` with meeting tiles containing `x` and `y`, by a
/// descending scan. Still meeting at `n_cap` gives `CapExceeded`, i.e. only
/// the lower bound `n_cap` is known.
pub fn m_prime_index(map: &LattesTypeMap, x: &PillowPoint, y: &PillowPoint, n_cap: u32) -> Result<ExtNat> {
    if x == y {
        return Ok(ExtNat::Infinite);
    }
    for n in (0..=n_cap).rev() {
        if separation(&map.level(n)?, x, y)?.1 {
            if n == n_cap {
                return Err(Error::CapExceeded { cap: n_cap });
            }
            return Ok(ExtNat::Finite(u64::from(n)));
        }
    }
    Err(Error::InvariantViolation("level-0 tiles always meet".into()))
}

/// Fewest tiles in a chain from a tile containing the source to a tile
/// containing each target. `targets[k] = Some(0)` when it is the source.
pub fn chain_counts(
    geo: &LevelGeometry,
    source: &PillowPoint,
    targets: &[PillowPoint],
    budget: &Budget,
) -> Result<Vec<u64>> {
    let mut result: Vec<Option<u64>> = targets.iter().map(|t| (t == source).then_some(0)).collect();
    let mut waiting: HashMap<TileIndex, Vec<usize>> = HashMap::new();
    for (k, t) in targets.iter().enumerate() {
        if result[k].is_none() {
            for tile in geo.tiles_containing(t)? {
                waiting.entry(tile).or_default().push(k);
            }
        }
    }
    let mut remaining = result.iter().filter(|r| r.is_none()).count();
    let mut settle = |tile: &TileIndex, count: u64, result: &mut Vec<Option<u64>>| {
        if let Some(ks) = waiting.remove(tile) {
            for k in ks {
                if result[k].is_none() {
                    result[k] = Some(count);
                    remaining -= 1;
                }
            }
        }
        remaining == 0
    };

    let sources: BTreeSet<TileIndex> = geo.tiles_containing(source)?;
    let mut visited = TileMarks::new(geo);
    let mut seen = 0u64;
    for s in &sources {
        visited.insert(s);
        seen += 1;
    }
    let mut frontier: Vec<TileIndex> = sources.into_iter().collect();
    let mut count = 1u64;
    let mut done = targets.is_empty() || result.iter().all(Option::is_some);
    for t in &frontier {
        done |= settle(t, count, &mut result);
    }
    while !done && !frontier.is_empty() {
        count += 1;
        let mut next = Vec::new();
        for t in &frontier {
            for nb in touching_tiles(geo, t) {
                if visited.insert(&nb) {
                    seen += 1;
                    done |= settle(&nb, count, &mut result);
                    next.push(nb);
                }
            }
        }
        if seen > budget.frontier {
            return Err(Error::BudgetExceeded { budget: budget.frontier });
        }
        frontier = next;
    }
    result
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::InvariantViolation("pillow tiles are not chain-connected".into())))
        .collect()
}

/// `d_n(x, y) = (fewest tiles joining x to y) · Λ₀^{-n}`.
pub fn dn_metric(map: &LattesTypeMap, x: &PillowPoint, y: &PillowPoint, n: u32, budget: &Budget) -> Result<ScaledCount> {
    let geo = map.level(n)?;
    let count = chain_counts(&geo, x, std::slice::from_ref(y), budget)?[0];
    Ok(ScaledCount::new(count, -i64::from(n), map.lambda0()))
}

/// `counts[a][b]` for every pair of points at one level.
pub fn pairwise_chain_counts(geo: &LevelGeometry, points: &[PillowPoint], budget: &Budget) -> Result<Vec<Vec<u64>>> {
    points.iter().map(|p| chain_counts(geo, p, points, budget)).collect()
}

/// `k`-th element of the base-`b` van der Corput sequence.
fn van_der_corput(k: u64, base: u64) -> Rational {
    let mut value = Rational::zero();
    let mut scale = Rational::new(BigInt::one(), BigInt::from(base));
    let mut k = k;
    while k > 0 {
        value += &scale * Rational::from_integer(BigInt::from(k % base));
        scale /= Rational::from_integer(BigInt::from(base));
        k /= base;
    }
    value
}

/// Deterministic low-discrepancy points `(2 h_2(k), h_3(k))`, `k = 1, 2, ...`,
/// in the fundamental domain `[0,2] × [0,1]`, skipping cone points.
pub fn halton_points(count: usize) -> Vec<PillowPoint> {
    let two = Rational::from_integer(BigInt::from(2));
    (1u64..)
        .map(|k| PillowPoint::new(&two * van_der_corput(k, 2), van_der_corput(k, 3)))
        .filter(|p| !p.is_cone_point())
        .take(count)
        .collect()
}

/// Consecutive Halton points paired up: `(p_k, p_{k+1})`.
pub fn default_pairs(count: usize) -> Vec<(PillowPoint, PillowPoint)> {
    let pts = halton_points(count + 1);
    pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDistance {
    pub level: u32,
    pub d_n: ScaledCount,
    /// `d_n · Λ₀^m`
    pub scaled: ScaledCount,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub x: PillowPoint,
    pub y: PillowPoint,
    pub m: u32,
    pub m_prime: u32,
    /// `m_prime` is only a lower bound.
    pub m_prime_capped: bool,
    pub distances: Vec<LevelDistance>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcludedPair {
    pub x: PillowPoint,
    pub y: PillowPoint,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileDiameters {
    /// Level `N` of the metric used to measure.
    pub metric_level: u32,
    pub tiles_measured: u64,
    /// Extremes of `diam_{d_N}(τ) · Λ₀^n` over the measured n-tiles.
    pub scaled_min: ScaledCount,
    pub scaled_max: ScaledCount,
    /// Geometric mean of the extremes.
    pub scale_f64: f64,
    /// Every scaled diameter lies in `[s / spread, s · spread]`, with
    /// `spread = empirical_C / empirical_c`.
    pub within_visual_bounds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisualReport {
    pub lambda: AlgebraicModulus,
    pub window: u32,
    pub samples: Vec<PairReport>,
    pub excluded: Vec<ExcludedPair>,
    pub empirical_c: ScaledCount,
    #[serde(rename = "empirical_C")]
    pub empirical_big_c: ScaledCount,
    /// `empirical_C / empirical_c`
    pub spread_f64: f64,
    /// Largest `m - m'` over the sample.
    pub max_m_gap: i64,
    /// Pairs with `m' > m + 1`.
    pub m_prime_violations: u64,
    pub triples_checked: u64,
    pub triangle_violations: u64,
    pub tile_diameters: Option<TileDiameters>,
}

impl VisualReport {
    /// `empirical_C <= factor · empirical_c`, exactly when Λ₀ allows.
    pub fn spread_at_most(&self, factor: u64) -> bool {
        self.empirical_big_c.at_most_times(factor, &self.empirical_c, &self.lambda)
    }
}

/// Assembles `m`, `m'` and `d_n` for `n ∈ (m, m + window]` over the pairs.
pub fn visual_report(
    map: &LattesTypeMap,
    pairs: &[(PillowPoint, PillowPoint)],
    window: u32,
    level_cap: u32,
    budget: &Budget,
) -> Result<VisualReport> {
    if window == 0 {
        return Err(Error::InvalidInput("window must be at least 1".into()));
    }
    let lambda = map.lambda0().clone();
    let mut samples = Vec::new();
    let mut excluded = Vec::new();
    for (x, y) in pairs {
        if x == y {
            excluded.push(ExcludedPair { x: x.clone(), y: y.clone(), reason: "x = y, m is infinite".into() });
            continue;
        }
        let m = match m_index(map, x, y, level_cap)? {
            ExtNat::Finite(m) => m as u32,
            ExtNat::Infinite => unreachable!(),
        };
        let (m_prime, m_prime_capped) = match m_prime_index(map, x, y, m + 2) {
            Ok(ExtNat::Finite(v)) => (v as u32, false),
            Err(Error::CapExceeded { cap }) => (cap, true),
            Ok(ExtNat::Infinite) => unreachable!(),
            Err(e) => return Err(e),
        };
        samples.push(PairReport { x: x.clone(), y: y.clone(), m, m_prime, m_prime_capped, distances: Vec::new() });
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput("no pair with x != y".into()));
    }

    // all-pairs counts per level, reused for the triangle check
    let mut points: Vec<PillowPoint> = samples.iter().flat_map(|s| [s.x.clone(), s.y.clone()]).collect();
    points.sort();
    points.dedup();
    let position = |p: &PillowPoint| points.binary_search(p).unwrap();
    let levels: BTreeSet<u32> = samples.iter().flat_map(|s| s.m + 1..=s.m + window).collect();
    let mut triples_checked = 0u64;
    let mut triangle_violations = 0u64;
    let mut per_level: HashMap<u32, Vec<Vec<u64>>> = HashMap::new();
    for &n in &levels {
        let geo = map.level(n)?;
        let counts = pairwise_chain_counts(&geo, &points, budget)?;
        let k = points.len();
        for a in 0..k {
            for b in 0..k {
                if counts[a][b] != counts[b][a] {
                    triangle_violations += 1;
                }
                for c in 0..k {
                    triples_checked += 1;
                    if counts[a][c] > counts[a][b] + counts[b][c] {
                        triangle_violations += 1;
                    }
                }
            }
        }
        per_level.insert(n, counts);
    }

    let mut extremes: Option<(ScaledCount, ScaledCount)> = None;
    for s in &mut samples {
        let (a, b) = (position(&s.x), position(&s.y));
        for n in s.m + 1..=s.m + window {
            let count = per_level[&n][a][b];
            let d_n = ScaledCount::new(count, -i64::from(n), &lambda);
            let scaled = ScaledCount::new(count, i64::from(s.m) - i64::from(n), &lambda);
            extremes = Some(match extremes.take() {
                None => (scaled.clone(), scaled.clone()),
                Some((lo, hi)) => (
                    if scaled.cmp_with(&lo, &lambda) == Ordering::Less { scaled.clone() } else { lo },
                    if scaled.cmp_with(&hi, &lambda) == Ordering::Greater { scaled.clone() } else { hi },
                ),
            });
            s.distances.push(LevelDistance { level: n, d_n, scaled });
        }
    }
    let (empirical_c, empirical_big_c) = extremes.unwrap();
    if empirical_c.count == 0 {
        return Err(Error::InvariantViolation("zero distance between distinct points".into()));
    }
    let spread_f64 = empirical_big_c.value_f64 / empirical_c.value_f64;
    let max_m_gap = samples.iter().map(|s| i64::from(s.m) - i64::from(s.m_prime)).max().unwrap();
    let m_prime_violations = samples.iter().filter(|s| s.m_prime_capped || s.m_prime > s.m + 1).count() as u64;

    let deepest = *levels.iter().max().unwrap();
    let tile_diameters = tile_diameters(map, &samples, deepest, spread_f64, budget)?;

    Ok(VisualReport {
        lambda,
        window,
        samples,
        excluded,
        empirical_c,
        empirical_big_c,
        spread_f64,
        max_m_gap,
        m_prime_violations,
        triples_checked,
        triangle_violations,
        tile_diameters,
    })
}

/// Corners and centre of a tile as pillow points.
fn tile_marks(geo: &LevelGeometry, t: &TileIndex) -> Vec<PillowPoint> {
    let det = BigInt::from(geo.det());
    let (i, j) = (2 * t.i, 2 * t.j);
    [(i, j), (i + 2, j), (i, j + 2), (i + 2, j + 2), (i + 1, j + 1)]
        .iter()
        .map(|&(wx, wy)| {
            let (px, py) = geo.plane_scaled(wx, wy);
            let den: BigInt = &det * 2;
            PillowPoint::new(Rational::new(BigInt::from(px), den.clone()), Rational::new(BigInt::from(py), den))
        })
        .collect()
}

/// Diameters in `d_N` of the n-tiles containing the sample points, for
/// `N - 5 <= n <= N - 3`.
fn tile_diameters(
    map: &LattesTypeMap,
    samples: &[PairReport],
    metric_level: u32,
    spread: f64,
    budget: &Budget,
) -> Result<Option<TileDiameters>> {
    if metric_level < 4 {
        return Ok(None);
    }
    let lambda = map.lambda0();
    let deep = map.level(metric_level)?;
    let mut scaled = Vec::new();
    for n in metric_level.saturating_sub(5).max(1)..=metric_level - 3 {
        let geo = map.level(n)?;
        let mut tiles = BTreeSet::new();
        for s in samples {
            tiles.extend(geo.tiles_containing(&s.x)?);
        }
        for t in &tiles {
            let marks = tile_marks(&geo, t);
            let counts = pairwise_chain_counts(&deep, &marks, budget)?;
            let diam = counts.iter().flatten().copied().max().unwrap();
            scaled.push(ScaledCount::new(diam, i64::from(n) - i64::from(metric_level), lambda));
        }
    }
    let min = scaled.iter().min_by(|a, b| a.cmp_with(b, lambda)).unwrap().clone();
    let max = scaled.iter().max_by(|a, b| a.cmp_with(b, lambda)).unwrap().clone();
    let scale_f64 = (min.value_f64 * max.value_f64).sqrt();
    let within_visual_bounds = scale_f64 / spread <= min.value_f64 && max.value_f64 <= scale_f64 * spread;
    Ok(Some(TileDiameters {
        metric_level,
        tiles_measured: scaled.len() as u64,
        scaled_min: min,
        scaled_max: max,
        scale_f64,
        within_visual_bounds,
    }))
}
