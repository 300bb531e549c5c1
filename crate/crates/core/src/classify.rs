//! Whether a Lattès-type map of the pillow is conjugate to a Lattès map.
//!
//! The verdict is algebraic: `tr(L)^2 < 4 det(L)` or `L` scalar. The growth
//! of `D_n / deg^{n/2}` over a window is recorded as a consistency witness.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact::IntMat2;
use crate::expansion::dn_planar;
use crate::pillow::LattesTypeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Lattes,
    LattesTypeNonLattes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraicEvidence {
    /// Complex eigenvalues, both of modulus `sqrt(det)`.
    NegativeDiscriminant,
    ScalarMatrix,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioTerm {
    pub n: u32,
    pub dn: u64,
    /// `D_n / deg^{n/2}`
    pub ratio_f64: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub verdict: Verdict,
    pub algebraic_evidence: AlgebraicEvidence,
    /// Repeated real eigenvalue on a non-scalar matrix: `‖L^{-n}‖∞` carries
    /// a factor linear in `n`.
    pub non_semisimple: bool,
    pub empirical_evidence: Vec<RatioTerm>,
    /// Smallest recorded ratio.
    pub min_ratio_f64: f64,
    pub consistency: bool,
}

pub fn algebraic_evidence(l: &IntMat2) -> AlgebraicEvidence {
    if l.is_scalar() {
        AlgebraicEvidence::ScalarMatrix
    } else if l.discriminant().is_negative() {
        AlgebraicEvidence::NegativeDiscriminant
    } else {
        AlgebraicEvidence::Neither
    }
}

pub fn algebraic_verdict(l: &IntMat2) -> Verdict {
    match algebraic_evidence(l) {
        AlgebraicEvidence::Neither => Verdict::LattesTypeNonLattes,
        _ => Verdict::Lattes,
    }
}

/// Algebraic verdict plus the ratios `D_n / deg^{n/2}` for `1 <= n <= n_max`.
///
/// Consistent means: for a Lattès verdict every ratio is at least 1/2;
/// otherwise the ratios never increase. Both are checked in integers,
/// as `4 D_n^2 >= deg^n` and `D_{n+1}^2 <= deg · D_n^2`.
pub fn lattes_verdict(map: &LattesTypeMap, n_max: u32, budget: &Budget) -> Result<ClassificationVerdict> {
    if n_max < 3 {
        return Err(Error::InvalidInput(format!("n_max must be at least 3, got {n_max}")));
    }
    let l = map.matrix();
    let evidence = algebraic_evidence(l);
    let verdict = algebraic_verdict(l);
    let deg = map.degree().clone();
    let deg_f = deg.to_f64().unwrap_or(f64::INFINITY);

    let mut terms = Vec::new();
    let mut dns = Vec::new();
    for n in 1..=n_max {
        let dn = dn_planar(map, n, budget)?;
        dns.push(BigInt::from(dn));
        terms.push(RatioTerm { n, dn, ratio_f64: dn as f64 / deg_f.powf(f64::from(n) / 2.0) });
    }
    let consistency = match verdict {
        Verdict::Lattes => dns.iter().zip(1..).all(|(d, n)| 4 * d * d >= map.degree_pow(n)),
        Verdict::LattesTypeNonLattes => dns.windows(2).all(|w| &w[1] * &w[1] <= &deg * &w[0] * &w[0]),
    };
    let min_ratio_f64 = terms.iter().map(|t| t.ratio_f64).fold(f64::INFINITY, f64::min);
    Ok(ClassificationVerdict {
        verdict,
        algebraic_evidence: evidence,
        non_semisimple: !l.is_scalar() && l.discriminant() == BigInt::from(0),
        empirical_evidence: terms,
        min_ratio_f64,
        consistency,
    })
}
