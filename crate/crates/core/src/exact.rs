//! Exact scalar and 2×2 matrix arithmetic.
//!
//! Everything here works over arbitrary-precision integers and rationals.
//! Inverse powers of an integer matrix have denominators growing like
//! `det^n`, which overflows machine words after a couple of dozen levels.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Row-major integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

/// Row-major rational matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMat2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl IntMat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IntMat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn from_i64(m: [i64; 4]) -> Self {
        IntMat2::new(m[0], m[1], m[2], m[3])
    }

    pub fn identity() -> Self {
        IntMat2::new(1, 0, 0, 1)
    }

    pub fn scalar(s: i64) -> Self {
        IntMat2::new(s, 0, 0, s)
    }

    pub fn diag(x: i64, y: i64) -> Self {
        IntMat2::new(x, 0, 0, y)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// `trace^2 - 4 det`
    pub fn discriminant(&self) -> BigInt {
        let t = self.trace();
        &t * &t - BigInt::from(4) * self.det()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMat2::identity()
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Adjugate `[[d, -b], [-c, a]]`; `M * adj(M) = det(M) I`.
    pub fn adjugate(&self) -> IntMat2 {
        IntMat2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn apply(&self, v: (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        (&self.a * v.0 + &self.b * v.1, &self.c * v.0 + &self.d * v.1)
    }

    pub fn to_rational(&self) -> RatMat2 {
        RatMat2 {
            a: rat_from_int(self.a.clone()),
            b: rat_from_int(self.b.clone()),
            c: rat_from_int(self.c.clone()),
            d: rat_from_int(self.d.clone()),
        }
    }

    pub fn to_i64(&self) -> Option<[i64; 4]> {
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?])
    }
}

impl Mul for &IntMat2 {
    type Output = IntMat2;

    fn mul(self, r: &IntMat2) -> IntMat2 {
        IntMat2 {
            a: &self.a * &r.a + &self.b * &r.c,
            b: &self.a * &r.b + &self.b * &r.d,
            c: &self.c * &r.a + &self.d * &r.c,
            d: &self.c * &r.b + &self.d * &r.d,
        }
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl RatMat2 {
    pub fn identity() -> Self {
        IntMat2::identity().to_rational()
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: (&Rational, &Rational)) -> (Rational, Rational) {
        (&self.a * v.0 + &self.b * v.1, &self.c * v.0 + &self.d * v.1)
    }
}

impl Mul for &RatMat2 {
    type Output = RatMat2;

    fn mul(self, r: &RatMat2) -> RatMat2 {
        RatMat2 {
            a: &self.a * &r.a + &self.b * &r.c,
            b: &self.a * &r.b + &self.b * &r.d,
            c: &self.c * &r.a + &self.d * &r.c,
            d: &self.c * &r.b + &self.d * &r.d,
        }
    }
}

impl fmt::Display for RatMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Exact `n`-th power by repeated squaring.
pub fn mat_pow(l: &IntMat2, n: u32) -> IntMat2 {
    let mut result = IntMat2::identity();
    let mut base = l.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Exact `L^{-n}` computed as `adj(L)^n / det(L)^n`.
pub fn inv_pow(l: &IntMat2, n: u32) -> Result<RatMat2> {
    let det = l.det();
    if det.is_zero() {
        return Err(Error::NonInvertible);
    }
    let adj_n = mat_pow(&l.adjugate(), n);
    let den = num_traits::pow(det, n as usize);
    let entry = |x: &BigInt| Rational::new(x.clone(), den.clone());
    Ok(RatMat2 { a: entry(&adj_n.a), b: entry(&adj_n.b), c: entry(&adj_n.c), d: entry(&adj_n.d) })
}

/// The ℓ∞ → ℓ∞ operator norm: the largest absolute row sum.
pub fn linf_norm(m: &RatMat2) -> Rational {
    let r1 = m.a.abs() + m.b.abs();
    let r2 = m.c.abs() + m.d.abs();
    if r1 >= r2 {
        r1
    } else {
        r2
    }
}

/// Exact description of an eigenvalue modulus of an integer 2×2 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusKind {
    /// The modulus is this integer.
    Integer {
        #[serde(with = "crate::serde_num::bigint")]
        value: BigInt,
    },
    /// The modulus is `sqrt(radicand)`, radicand not a perfect square.
    SqrtRational {
        #[serde(with = "crate::serde_num::ratio")]
        radicand: Rational,
    },
    /// The modulus is `(trace_abs - sqrt(disc)) / 2`, disc > 0 not a perfect square.
    HalfSumWithSqrt {
        #[serde(with = "crate::serde_num::bigint")]
        trace_abs: BigInt,
        #[serde(with = "crate::serde_num::bigint")]
        disc: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicModulus {
    #[serde(flatten)]
    pub kind: ModulusKind,
    pub approx_f64: f64,
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn exact_rational_sqrt(q: &Rational) -> Option<Rational> {
    Some(Rational::new(exact_isqrt(q.numer())?, exact_isqrt(q.denom())?))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl AlgebraicModulus {
    pub fn integer(v: BigInt) -> Self {
        let approx_f64 = v.to_f64().unwrap_or(f64::INFINITY);
        AlgebraicModulus { kind: ModulusKind::Integer { value: v }, approx_f64 }
    }

    /// `sqrt(q)`, collapsing to an integer when `q` is a perfect square of one.
    pub fn sqrt_of(q: Rational) -> Self {
        if let Some(r) = exact_rational_sqrt(&q) {
            if r.is_integer() {
                return AlgebraicModulus::integer(r.to_integer());
            }
        }
        let approx_f64 = rational_to_f64(&q).sqrt();
        AlgebraicModulus { kind: ModulusKind::SqrtRational { radicand: q }, approx_f64 }
    }

    /// `(p - sqrt(disc)) / 2` for `p > sqrt(disc) >= 0`.
    fn half_sum(p: BigInt, disc: BigInt) -> Self {
        if let Some(s) = exact_isqrt(&disc) {
            // Rational roots of a monic integer quadratic are integers.
            let twice = &p - &s;
            debug_assert!(twice.is_even());
            return AlgebraicModulus::integer(twice / 2);
        }
        // 2 det / (p + sqrt(disc)) avoids cancellation.
        let det: BigInt = (&p * &p - &disc) / 4;
        let pf = p.to_f64().unwrap_or(f64::INFINITY);
        let df = disc.to_f64().unwrap_or(f64::INFINITY);
        let approx_f64 = 2.0 * det.to_f64().unwrap_or(f64::INFINITY) / (pf + df.sqrt());
        AlgebraicModulus { kind: ModulusKind::HalfSumWithSqrt { trace_abs: p, disc }, approx_f64 }
    }

    pub fn approx(&self) -> f64 {
        self.approx_f64
    }

    /// The modulus as an exact rational, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match &self.kind {
            ModulusKind::Integer { value } => Some(rat_from_int(value.clone())),
            ModulusKind::SqrtRational { radicand } => exact_rational_sqrt(radicand),
            ModulusKind::HalfSumWithSqrt { .. } => None,
        }
    }

    /// The exact square of the modulus when it is rational.
    pub fn squared(&self) -> Option<Rational> {
        match &self.kind {
            ModulusKind::Integer { value } => Some(rat_from_int(value * value)),
            ModulusKind::SqrtRational { radicand } => Some(radicand.clone()),
            ModulusKind::HalfSumWithSqrt { .. } => None,
        }
    }

    /// Compares `a * m^ea` with `b * m^eb` for non-negative `a`, `b`.
    ///
    /// Exact unless the modulus is of half-sum kind, where binary64 is used.
    pub fn cmp_scaled(&self, a: &Rational, ea: i64, b: &Rational, eb: i64) -> Ordering {
        let e = ea - eb;
        let pow_q = |q: &Rational, e: i64| -> Rational {
            if e >= 0 {
                num_traits::pow(q.clone(), e as usize)
            } else {
                num_traits::pow(q.recip(), (-e) as usize)
            }
        };
        if let Some(q) = self.as_rational() {
            return (a * pow_q(&q, e)).cmp(b);
        }
        if let Some(q2) = self.squared() {
            let lhs = a * a * pow_q(&q2, e);
            return lhs.cmp(&(b * b));
        }
        let lhs = rational_to_f64(a) * self.approx_f64.powi(e as i32);
        lhs.partial_cmp(&rational_to_f64(b)).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for AlgebraicModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModulusKind::Integer { value } => write!(f, "{value}"),
            ModulusKind::SqrtRational { radicand } => write!(f, "sqrt({radicand})"),
            ModulusKind::HalfSumWithSqrt { trace_abs, disc } => {
                write!(f, "({trace_abs} - sqrt({disc}))/2")
            }
        }
    }
}

/// Smallest modulus among the eigenvalues of `l` (requires `det(l) > 0`).
pub fn eig_min_modulus(l: &IntMat2) -> Result<AlgebraicModulus> {
    let det = l.det();
    if !det.is_positive() {
        return Err(Error::InvalidInput(format!("eig_min_modulus needs det > 0, got {det}")));
    }
    let disc = l.discriminant();
    if disc.is_negative() {
        // complex pair, |λ|² = det
        return Ok(AlgebraicModulus::sqrt_of(rat_from_int(det)));
    }
    // Real roots share a sign because det > 0, so the smaller modulus is
    // (|tr| - sqrt(disc)) / 2.
    Ok(AlgebraicModulus::half_sum(l.trace().abs(), disc))
}

/// Order of a finite-order element of SL(2, Z).
pub fn rotation_order(u: &IntMat2) -> Result<u32> {
    if !u.det().is_one() {
        return Err(Error::InfiniteOrder(format!("det = {} is not 1", u.det())));
    }
    let order = match u.trace().to_i64() {
        Some(2) => 1,
        Some(-2) => 2,
        Some(-1) => 3,
        Some(0) => 4,
        Some(1) => 6,
        _ => return Err(Error::InfiniteOrder(format!("trace {} outside [-2, 2]", u.trace()))),
    };
    if !mat_pow(u, order).is_identity() {
        return Err(Error::InfiniteOrder(format!("{u} to the power {order} is not the identity")));
    }
    Ok(order)
}

/// Column Hermite normal form `[[h11, 0], [h21, h22]]` of a nonsingular
/// integer matrix, with `h11, h22 > 0` and `0 <= h21 < h22`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnHnf<T> {
    pub h11: T,
    pub h21: T,
    pub h22: T,
}

impl<T> ColumnHnf<T>
where
    T: Integer + Signed + Clone,
{
    pub fn new(a: T, b: T, c: T, d: T) -> Option<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if det.is_zero() {
            return None;
        }
        let eg = a.extended_gcd(&b);
        let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        // first column of M·U, where U = [[s, -b/g], [t, a/g]] is unimodular
        let h21_raw = s * c + t * d;
        let h22 = (det / g.clone()).abs();
        let h21 = h21_raw.mod_floor(&h22);
        Some(ColumnHnf { h11: g, h21, h22 })
    }

    /// Unique representative of `v + H Z^2` in `[0, h11) × [0, h22)`.
    pub fn residue(&self, x: T, y: T) -> (T, T) {
        let k = x.div_floor(&self.h11);
        let rx = x - k.clone() * self.h11.clone();
        let ry = (y - k * self.h21.clone()).mod_floor(&self.h22);
        (rx, ry)
    }

    pub fn index(&self) -> T {
        self.h11.clone() * self.h22.clone()
    }
}

pub fn column_hnf(m: &IntMat2) -> Result<ColumnHnf<BigInt>> {
    ColumnHnf::new(m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone()).ok_or(Error::NonInvertible)
}

/// Canonical coset representative of `v` modulo the lattice `M Z^2`.
pub fn hnf_residue(m: &IntMat2, v: (BigInt, BigInt)) -> Result<(BigInt, BigInt)> {
    Ok(column_hnf(m)?.residue(v.0, v.1))
}
