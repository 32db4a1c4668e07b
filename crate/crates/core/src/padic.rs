//! Exact arithmetic on ℤ[1/p].
//!
//! Every point the rest of the crate evaluates at (grid nodes, translation
//! parameters, mask arguments) is a [`PAdicRational`]: a number `u·p^e` with
//! `u` an arbitrary-precision integer. The additive character is returned as
//! an exact [`RootOfUnity`] so zero/one tests never go through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Deterministic primality test for the word-sized primes used as `p`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u64))
    }
}

/// p-adic valuation. Zero has its own variant instead of a large integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

pub(crate) fn pow_big(p: u32, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// `r / n` for `0 ≤ r < n`, to double precision.
pub(crate) fn ratio_to_f64(r: &BigInt, n: &BigInt) -> f64 {
    let scaled: BigInt = (r << 64usize) / n;
    scaled.to_f64().unwrap_or(0.0) / 18_446_744_073_709_551_616.0
}

/// An element `unit · p^exp` of ℤ[1/p] in canonical form: `p ∤ unit`, and
/// `exp = 0` when the value is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicRational {
    p: u32,
    unit: BigInt,
    exp: i64,
}

impl PAdicRational {
    pub fn new(p: u32, unit: impl Into<BigInt>, exp: i64) -> Self {
        let mut unit = unit.into();
        let mut exp = exp;
        if unit.is_zero() {
            return Self { p, unit, exp: 0 };
        }
        let pb = BigInt::from(p);
        loop {
            let (q, r) = unit.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            unit = q;
            exp += 1;
        }
        Self { p, unit, exp }
    }

    pub fn zero(p: u32) -> Self {
        Self::new(p, 0, 0)
    }

    pub fn one(p: u32) -> Self {
        Self::new(p, 1, 0)
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        Self::new(p, n, 0)
    }

    /// `numerator / p^s`.
    pub fn from_ratio(p: u32, numerator: impl Into<BigInt>, s: u32) -> Self {
        Self::new(p, numerator, -(s as i64))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation `v` with `|x|_p = p^{-v}`.
    pub fn norm_exp(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.exp)
        }
    }

    /// True when `|x|_p ≤ 1`.
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.exp >= 0
    }

    /// Denominator depth `s ≥ 0`: `x = l / p^s` with `p ∤ l` unless `s = 0`.
    pub fn depth(&self) -> u32 {
        if self.is_zero() || self.exp >= 0 {
            0
        } else {
            (-self.exp) as u32
        }
    }

    /// `(l, s)` with `x = l / p^s`, `s = depth()`.
    pub fn as_ratio(&self) -> (BigInt, u32) {
        if self.exp >= 0 {
            (&self.unit * pow_big(self.p, self.exp as u32), 0)
        } else {
            (self.unit.clone(), (-self.exp) as u32)
        }
    }

    /// Multiply by `p^k`.
    pub fn scale_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            p: self.p,
            unit: self.unit.clone(),
            exp: self.exp + k,
        }
    }

    /// p-adic fractional part `{x}_p ∈ [0, 1)`.
    pub fn frac_part(&self) -> Self {
        if self.is_integral() {
            return Self::zero(self.p);
        }
        let s = (-self.exp) as u32;
        let modulus = pow_big(self.p, s);
        let r = self.unit.mod_floor(&modulus);
        Self::from_ratio(self.p, r, s)
    }

    /// Additive character `χ_p(x) = e^{2πi{x}_p}` as an exact root of unity.
    pub fn character(&self) -> RootOfUnity {
        let f = self.frac_part();
        let (l, s) = f.as_ratio();
        RootOfUnity::new(self.p, s, l.to_biguint().unwrap_or_default())
    }

    /// Residue of `x·p^shift` modulo `modulus`, for `x·p^shift` a p-adic integer.
    /// Used to map points onto grid node indices.
    pub(crate) fn integer_residue(&self, shift: i64, modulus: u64) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        let e = self.exp + shift;
        if e < 0 {
            return None;
        }
        let m = BigInt::from(modulus);
        let pe = BigInt::from(self.p).modpow(&BigInt::from(e), &m);
        let r = (&self.unit.mod_floor(&m) * pe).mod_floor(&m);
        r.to_u64()
    }

    /// Canonical digits `x_0, x_1, …` of `x = p^γ (x_0 + x_1 p + …)`, the first
    /// `count` of them, together with `γ`. `None` for zero.
    pub fn digits(&self, count: usize) -> Option<(i64, Vec<u32>)> {
        if self.is_zero() {
            return None;
        }
        let pb = BigInt::from(self.p);
        let modulus = num_traits::pow(pb.clone(), count);
        let mut u = self.unit.mod_floor(&modulus);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u32().unwrap_or(0));
            u = q;
        }
        Some((self.exp, out))
    }

    pub fn to_f64(&self) -> f64 {
        let u = self.unit.to_f64().unwrap_or(f64::NAN);
        u * (self.p as f64).powi(self.exp as i32)
    }

    /// Accepts `u*p^e`, `l/p^s`, `l/d` (with `d` a power of the prime) and plain integers.
    /// `p` is required when the string does not name the prime.
    pub fn parse(text: &str, p: Option<u32>) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("cannot parse p-adic rational {text:?}"));
        let parse_int = |s: &str| s.parse::<BigInt>().map_err(|_| bad());
        let resolve = |named: u32| -> Result<u32> {
            match p {
                Some(q) if q != named => Err(Error::PrimeMismatch(q, named)),
                _ => Ok(named),
            }
        };
        if let Some((u, rest)) = t.split_once('*') {
            let (base, e) = rest.split_once('^').ok_or_else(bad)?;
            let base: u32 = base.parse().map_err(|_| bad())?;
            let e: i64 = e.parse().map_err(|_| bad())?;
            let q = resolve(base)?;
            check_prime(q)?;
            return Ok(Self::new(q, parse_int(u)?, e));
        }
        if let Some((l, d)) = t.split_once('/') {
            let l = parse_int(l)?;
            if let Some((base, s)) = d.split_once('^') {
                let base: u32 = base.parse().map_err(|_| bad())?;
                let s: i64 = s.parse().map_err(|_| bad())?;
                let q = resolve(base)?;
                check_prime(q)?;
                return Ok(Self::new(q, l, -s));
            }
            let mut d: u64 = d.parse().map_err(|_| bad())?;
            let q = p.ok_or_else(|| {
                Error::Parse(format!(
                    "{text:?} needs a known prime to interpret its denominator"
                ))
            })?;
            let mut s = 0i64;
            while d > 1 && d.is_multiple_of(q as u64) {
                d /= q as u64;
                s += 1;
            }
            if d != 1 {
                return Err(Error::Parse(format!(
                    "denominator of {text:?} is not a power of {q}"
                )));
            }
            return Ok(Self::new(q, l, -s));
        }
        let q = p.ok_or_else(|| Error::Parse(format!("{text:?} needs a known prime")))?;
        Ok(Self::new(q, parse_int(&t)?, 0))
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic rationals over different primes");
    }
}

impl fmt::Display for PAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp.cmp(&0) {
            Ordering::Less => write!(f, "{}/{}^{}", self.unit, self.p, -self.exp),
            Ordering::Equal => write!(f, "{}", self.unit),
            Ordering::Greater => write!(f, "{}*{}^{}", self.unit, self.p, self.exp),
        }
    }
}

impl Serialize for PAdicRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for &PAdicRational {
    type Output = PAdicRational;
    fn add(self, rhs: &PAdicRational) -> PAdicRational {
        self.check_same(rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.unit * pow_big(self.p, (self.exp - e) as u32);
        let b = &rhs.unit * pow_big(self.p, (rhs.exp - e) as u32);
        PAdicRational::new(self.p, a + b, e)
    }
}

impl Neg for &PAdicRational {
    type Output = PAdicRational;
    fn neg(self) -> PAdicRational {
        PAdicRational {
            p: self.p,
            unit: -&self.unit,
            exp: self.exp,
        }
    }
}

impl Sub for &PAdicRational {
    type Output = PAdicRational;
    fn sub(self, rhs: &PAdicRational) -> PAdicRational {
        self + &(-rhs)
    }
}

impl Mul for &PAdicRational {
    type Output = PAdicRational;
    fn mul(self, rhs: &PAdicRational) -> PAdicRational {
        self.check_same(rhs);
        PAdicRational::new(self.p, &self.unit * &rhs.unit, self.exp + rhs.exp)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PAdicRational {
            type Output = PAdicRational;
            fn $m(self, rhs: PAdicRational) -> PAdicRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PAdicRational {
    type Output = PAdicRational;
    fn neg(self) -> PAdicRational {
        -&self
    }
}

/// `e^{2πi n / p^s}` kept exact as `(n, s)`. Canonical: `p ∤ n` when `s > 0`,
/// and `s = 0` for the value 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    p: u32,
    level: u32,
    index: BigUint,
}

impl RootOfUnity {
    pub fn new(p: u32, level: u32, index: BigUint) -> Self {
        let modulus: BigUint = num_traits::pow(BigUint::from(p), level as usize);
        let mut index = index % &modulus;
        let mut level = level;
        let pb = BigUint::from(p);
        while level > 0 {
            if index.is_zero() {
                level = 0;
                break;
            }
            let (q, r) = index.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            index = q;
            level -= 1;
        }
        Self { p, level, index }
    }

    pub fn one(p: u32) -> Self {
        Self {
            p,
            level: 0,
            index: BigUint::zero(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }

    pub fn is_one(&self) -> bool {
        self.level == 0
    }

    /// Index at a (not smaller) common level.
    pub fn index_at_level(&self, level: u32) -> BigUint {
        assert!(level >= self.level);
        &self.index * num_traits::pow(BigUint::from(self.p), (level - self.level) as usize)
    }

    pub fn conj(&self) -> Self {
        let modulus: BigUint = num_traits::pow(BigUint::from(self.p), self.level as usize);
        Self::new(self.p, self.level, (&modulus - &self.index) % &modulus)
    }

    /// Angle as a fraction of a full turn, in `[0, 1)`.
    pub fn turns(&self) -> f64 {
        if self.level == 0 {
            return 0.0;
        }
        let modulus: BigUint = num_traits::pow(BigUint::from(self.p), self.level as usize);
        let scaled: BigUint = (&self.index << 64usize) / modulus;
        scaled.to_f64().unwrap_or(0.0) / 18_446_744_073_709_551_616.0
    }

    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.turns();
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl Mul for &RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: &RootOfUnity) -> RootOfUnity {
        assert_eq!(self.p, rhs.p, "roots of unity over different primes");
        let level = self.level.max(rhs.level);
        RootOfUnity::new(
            self.p,
            level,
            self.index_at_level(level) + rhs.index_at_level(level),
        )
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        &self * &rhs
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootOfUnity", 2)?;
        match self.index.to_u64() {
            Some(n) => st.serialize_field("n", &n)?,
            None => st.serialize_field("n", &self.index.to_string())?,
        }
        st.serialize_field("s", &self.level)?;
        st.end()
    }
}

/// Elements `k / p^γ`, `k = 0, …, p^γ − 1`: the shifts of `I_p` of norm at
/// most `p^γ`, together with 0.
pub fn enumerate_shifts(p: u32, radius_exp: u32) -> Vec<PAdicRational> {
    let count = (p as u64).pow(radius_exp);
    (0..count)
        .map(|k| PAdicRational::from_ratio(p, BigInt::from(k), radius_exp))
        .collect()
}
