//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use lattes_pillow::exact::IntMat2;
use lattes_pillow::orbifold::{ExtNat, Portrait, PortraitNode};
use lattes_pillow::pillow::{make_map, LattesTypeMap};

pub fn map(m: [i64; 4]) -> LattesTypeMap {
    make_map(IntMat2::from_i64(m)).unwrap()
}

/// 2I, diag(2,3), [[1,-2],[1,1]], [[2,1],[0,2]], [[3,1],[1,2]]
pub const TEST_MATRICES: [[i64; 4]; 5] = [[2, 0, 0, 2], [2, 0, 0, 3], [1, -2, 1, 1], [2, 1, 0, 2], [3, 1, 1, 2]];

/// Answer bound for the brute-force search.
pub const BOUND: u64 = 12;

/// Candidate values: the divisors of [`BOUND`].
pub const VALUES: [Option<u64>; 6] = [Some(1), Some(2), Some(3), Some(4), Some(6), Some(12)];

fn divides(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => b % a == 0,
    }
}

/// Outcome of exhausting every `ν` with values in [`VALUES`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Exhaustion {
    pub valid: u64,
    /// Valid functions not divisible by the candidate minimum.
    pub counterexamples: u64,
    pub candidate_seen: bool,
}

/// Enumerates every valid `ν` over [`VALUES`] by backtracking and checks
/// that `candidate` divides each one.
pub fn exhaust(image: &[usize], degree: &[u64], candidate: &[Option<u64>]) -> Exhaustion {
    let k = image.len();
    let n_values = VALUES.len();
    let val = |i: usize| VALUES[i].unwrap();
    // ok[p][a][b]: value a at p pushes into value b at f(p)
    let ok: Vec<Vec<Vec<bool>>> = (0..k)
        .map(|p| (0..n_values).map(|a| (0..n_values).map(|b| val(b) % (val(a) * degree[p]) == 0).collect()).collect())
        .collect();
    // good[p][a]: the candidate divides value a at p
    let good: Vec<Vec<bool>> =
        (0..k).map(|p| (0..n_values).map(|a| divides(candidate[p], VALUES[a])).collect()).collect();
    let cand_idx: Vec<Option<usize>> = candidate.iter().map(|c| VALUES.iter().position(|v| v == c)).collect();
    // edges checked once both endpoints are assigned
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); k];
    for p in 0..k {
        due[p.max(image[p])].push(p);
    }
    struct Search<'a> {
        image: &'a [usize],
        ok: &'a [Vec<Vec<bool>>],
        good: &'a [Vec<bool>],
        cand: &'a [Option<usize>],
        due: &'a [Vec<usize>],
        nu: Vec<usize>,
        out: Exhaustion,
    }
    impl Search<'_> {
        fn go(&mut self, pos: usize, all_good: bool, equal: bool) {
            if pos == self.nu.len() {
                self.out.valid += 1;
                self.out.counterexamples += u64::from(!all_good);
                self.out.candidate_seen |= equal;
                return;
            }
            for v in 0..VALUES.len() {
                self.nu[pos] = v;
                if self.due[pos].iter().all(|&p| self.ok[p][self.nu[p]][self.nu[self.image[p]]]) {
                    let g = all_good && self.good[pos][v];
                    let e = equal && self.cand[pos] == Some(v);
                    self.go(pos + 1, g, e);
                }
            }
        }
    }
    let mut s = Search { image, ok: &ok, good: &good, cand: &cand_idx, due: &due, nu: vec![0; k], out: Exhaustion::default() };
    s.go(0, true, true);
    s.out
}

pub fn portrait(image: &[usize], degree: &[u64]) -> Portrait {
    Portrait {
        nodes: image
            .iter()
            .zip(degree)
            .enumerate()
            .map(|(p, (&q, &d))| PortraitNode { id: format!("n{p}"), image: format!("n{q}"), degree: d as u32 })
            .collect(),
    }
}

pub fn as_options(nu: &[ExtNat]) -> Vec<Option<u64>> {
    nu.iter()
        .map(|v| match v {
            ExtNat::Finite(a) => Some(*a),
            ExtNat::Infinite => None,
        })
        .collect()
}

/// Every functional graph on `k` nodes with a nondecreasing degree sequence
/// from `degrees`. Relabeling sorts any degree sequence, so this meets every
/// isomorphism class.
pub fn for_each_portrait(k: usize, degrees: &[u64], mut f: impl FnMut(&[usize], &[u64])) {
    let mut image = vec![0usize; k];
    let mut deg_idx = vec![0usize; k];
    loop {
        // degree sequences for this image
        deg_idx.iter_mut().for_each(|d| *d = 0);
        loop {
            let degree: Vec<u64> = deg_idx.iter().map(|&i| degrees[i]).collect();
            f(&image, &degree);
            // next nondecreasing index sequence
            let Some(p) = (0..k).rev().find(|&p| deg_idx[p] + 1 < degrees.len()) else { break };
            let v = deg_idx[p] + 1;
            for q in p..k {
                deg_idx[q] = v;
            }
        }
        let Some(p) = (0..k).rev().find(|&p| image[p] + 1 < k) else { return };
        image[p] += 1;
        for q in p + 1..k {
            image[q] = 0;
        }
    }
}

/// No cycle carries a critical node, so the minimal `ν` is finite.
pub fn cycles_unramified(image: &[usize], degree: &[u64]) -> bool {
    // after k steps every walk sits on its cycle
    let k = image.len();
    (0..k).all(|start| {
        let mut p = start;
        for _ in 0..k {
            p = image[p];
        }
        let q = p;
        loop {
            if degree[p] != 1 {
                return false;
            }
            p = image[p];
            if p == q {
                return true;
            }
        }
    })
}
