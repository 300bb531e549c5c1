//! Minimal orbifold function of a ramification portrait, its signature and
//! Euler characteristic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitNode {
    pub id: String,
    pub image: String,
    pub degree: u32,
}

/// Finite forward-closed functional graph of marked points with local degrees.
///
/// Critical points outside the postcritical set must be listed when they
/// feed a postcritical orbit; unlisted points are taken to have `ν = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Portrait {
    pub nodes: Vec<PortraitNode>,
}

impl Portrait {
    pub fn from_json(text: &str) -> Result<Self> {
        let p: Portrait = serde_json::from_str(text).map_err(|e| Error::MalformedPortrait(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    /// Builds a portrait from `(id, image, degree)` triples.
    pub fn from_triples(nodes: &[(&str, &str, u32)]) -> Result<Self> {
        let p = Portrait {
            nodes: nodes
                .iter()
                .map(|&(id, image, degree)| PortraitNode { id: id.into(), image: image.into(), degree })
                .collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.images().map(|_| ())
    }

    /// Image of each node as an index into `nodes`.
    fn images(&self) -> Result<Vec<usize>> {
        if self.nodes.is_empty() {
            return Err(Error::MalformedPortrait("no nodes".into()));
        }
        let mut position = HashMap::new();
        for (k, node) in self.nodes.iter().enumerate() {
            if node.degree == 0 {
                return Err(Error::MalformedPortrait(format!("node {:?} has degree 0", node.id)));
            }
            if position.insert(node.id.as_str(), k).is_some() {
                return Err(Error::MalformedPortrait(format!("duplicate node {:?}", node.id)));
            }
        }
        self.nodes
            .iter()
            .map(|node| {
                position.get(node.image.as_str()).copied().ok_or_else(|| {
                    Error::MalformedPortrait(format!("image {:?} of node {:?} is not a node", node.image, node.id))
                })
            })
            .collect()
    }

    fn degrees(&self) -> Vec<u64> {
        self.nodes.iter().map(|n| u64::from(n.degree)).collect()
    }
}

/// A positive integer or `∞`, ordered by size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub const ONE: ExtNat = ExtNat::Finite(1);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    /// `self | other`, where every positive integer and `∞` divide `∞`.
    pub fn divides(self, other: ExtNat) -> bool {
        match (self, other) {
            (_, ExtNat::Infinite) => true,
            (ExtNat::Infinite, ExtNat::Finite(_)) => false,
            (ExtNat::Finite(a), ExtNat::Finite(b)) => b % a == 0,
        }
    }

    pub fn lcm(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a.lcm(&b)),
            _ => ExtNat::Infinite,
        }
    }

    pub fn gcd(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a.gcd(&b)),
            (ExtNat::Finite(a), ExtNat::Infinite) | (ExtNat::Infinite, ExtNat::Finite(a)) => ExtNat::Finite(a),
            (ExtNat::Infinite, ExtNat::Infinite) => ExtNat::Infinite,
        }
    }

    pub fn checked_mul(self, k: u64) -> Option<ExtNat> {
        match self {
            ExtNat::Finite(a) => a.checked_mul(k).map(ExtNat::Finite),
            ExtNat::Infinite => Some(ExtNat::Infinite),
        }
    }

    /// `1/ν`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> Rational {
        match self {
            ExtNat::Finite(a) => Rational::new(BigInt::one(), BigInt::from(a)),
            ExtNat::Infinite => Rational::from_integer(BigInt::from(0)),
        }
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Infinite, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(a) => write!(f, "{a}"),
            ExtNat::Infinite => write!(f, "inf"),
        }
    }
}

/// JSON form: a number, or the string `"inf"`.
impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(a) => s.serialize_u64(*a),
            ExtNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(0) => Err(serde::de::Error::custom("orbifold values are positive")),
            Raw::Num(a) => Ok(ExtNat::Finite(a)),
            Raw::Text(t) if t == "inf" || t == "∞" => Ok(ExtNat::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbifoldClass {
    Parabolic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldClassification {
    pub class: OrbifoldClass,
    /// Signature written out, for parabolic orbifolds.
    pub parabolic_type: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbifoldData {
    pub nu: BTreeMap<String, ExtNat>,
    pub signature: Vec<ExtNat>,
    #[serde(with = "crate::serde_num::ratio")]
    pub chi: Rational,
    pub chi_f64: f64,
    pub class: OrbifoldClass,
    pub parabolic_type: Option<String>,
}

/// The divisibility-least `ν` with `ν(p) deg(p) | ν(f(p))` on every node.
pub fn nu_minimal(portrait: &Portrait) -> Result<OrbifoldData> {
    let nu = nu_values(portrait)?;
    let mut signature: Vec<ExtNat> = nu.iter().copied().filter(|&v| v != ExtNat::ONE).collect();
    signature.sort();
    let chi = euler_char(&signature);
    let classification = classify_signature(&signature)?;
    Ok(OrbifoldData {
        nu: portrait.nodes.iter().map(|n| n.id.clone()).zip(nu).collect(),
        signature,
        chi_f64: crate::exact::rational_to_f64(&chi),
        chi,
        class: classification.class,
        parabolic_type: classification.parabolic_type,
    })
}

/// `ν` in node order.
pub fn nu_values(portrait: &Portrait) -> Result<Vec<ExtNat>> {
    let image = portrait.images()?;
    let degree = portrait.degrees();
    let mut nu = vec![ExtNat::ONE; image.len()];

    for cycle in cycles(&image) {
        let product = cycle.iter().try_fold(1u64, |acc, &p| acc.checked_mul(degree[p]));
        if product != Some(1) {
            for &p in &cycle {
                nu[p] = ExtNat::Infinite;
            }
        }
    }
    // ∞ only travels forward, and forward orbits from a cycle stay on it,
    // so the marks above are already closed.

    loop {
        let mut changed = false;
        for p in 0..image.len() {
            let q = image[p];
            if !nu[q].is_finite() {
                continue;
            }
            let push = nu[p]
                .checked_mul(degree[p])
                .ok_or_else(|| Error::InvalidInput("orbifold value overflows u64".into()))?;
            let updated = nu[q].lcm(push);
            if updated != nu[q] {
                nu[q] = updated;
                changed = true;
            }
        }
        if !changed {
            return Ok(nu);
        }
    }
}

/// Node sets of the cycles of a functional graph.
fn cycles(image: &[usize]) -> Vec<Vec<usize>> {
    // 0 unvisited, 1 on the current walk, 2 finished
    let mut state = vec![0u8; image.len()];
    let mut found = Vec::new();
    for start in 0..image.len() {
        let mut walk = Vec::new();
        let mut p = start;
        while state[p] == 0 {
            state[p] = 1;
            walk.push(p);
            p = image[p];
        }
        if state[p] == 1 {
            let from = walk.iter().position(|&q| q == p).unwrap();
            found.push(walk[from..].to_vec());
        }
        for q in walk {
            state[q] = 2;
        }
    }
    found
}

/// Whether `ν(p) deg(p) | ν(f(p))` for every node.
pub fn is_valid_nu(portrait: &Portrait, nu: &[ExtNat]) -> Result<bool> {
    let image = portrait.images()?;
    let degree = portrait.degrees();
    Ok(nu.len() == image.len()
        && (0..image.len()).all(|p| nu[p].checked_mul(degree[p]).is_some_and(|v| v.divides(nu[image[p]]))))
}

/// `2 - Σ (1 - 1/ν)`.
pub fn euler_char(signature: &[ExtNat]) -> Rational {
    let one = Rational::one();
    signature
        .iter()
        .fold(Rational::from_integer(BigInt::from(2)), |chi, v| chi - (&one - v.reciprocal()))
}

const PARABOLIC_TYPES: [&[ExtNat]; 6] = {
    use ExtNat::{Finite as F, Infinite as I};
    [&[F(2), F(2), F(2), F(2)], &[F(3), F(3), F(3)], &[F(2), F(4), F(4)], &[F(2), F(3), F(6)], &[I, I], &[F(2), F(2), I]]
};

/// Parabolic iff `χ = 0`; a positive `χ` cannot come from a Thurston map.
pub fn classify_signature(signature: &[ExtNat]) -> Result<OrbifoldClassification> {
    let mut sorted = signature.to_vec();
    sorted.sort();
    sorted.retain(|&v| v != ExtNat::ONE);
    let chi = euler_char(&sorted);
    if chi.is_positive() {
        return Err(Error::NotThurstonOrbifold(chi.to_string()));
    }
    if chi.is_negative() {
        return Ok(OrbifoldClassification { class: OrbifoldClass::Hyperbolic, parabolic_type: None });
    }
    let name = PARABOLIC_TYPES
        .iter()
        .find(|t| **t == sorted.as_slice())
        .map(|t| signature_name(t))
        .ok_or_else(|| Error::InvariantViolation(format!("χ = 0 for unlisted signature {}", signature_name(&sorted))))?;
    Ok(OrbifoldClassification { class: OrbifoldClass::Parabolic, parabolic_type: Some(name) })
}

pub fn classify_orbifold(data: &OrbifoldData) -> Result<OrbifoldClassification> {
    classify_signature(&data.signature)
}

/// `(2,4,4)`-style rendering.
pub fn signature_name(signature: &[ExtNat]) -> String {
    let parts: Vec<String> = signature.iter().map(ExtNat::to_string).collect();
    format!("({})", parts.join(","))
}

/// Some cycle of the portrait contains a critical node.
pub fn has_periodic_critical(portrait: &Portrait) -> Result<bool> {
    let image = portrait.images()?;
    Ok(cycles(&image).iter().any(|c| c.iter().any(|&p| portrait.nodes[p].degree >= 2)))
}

/// The four-point pillow: fixed points `p1..p4`, each the image of a
/// critical point `c1..c4` of degree 2.
pub fn pillow_portrait() -> Portrait {
    let mut nodes = Vec::new();
    for k in 1..=4 {
        nodes.push(PortraitNode { id: format!("p{k}"), image: format!("p{k}"), degree: 1 });
        nodes.push(PortraitNode { id: format!("c{k}"), image: format!("p{k}"), degree: 2 });
    }
    Portrait { nodes }
}
