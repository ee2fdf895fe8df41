//! Exact rationals with p-adic valuations, radii kept as base-p exponents, and
//! capped-precision p-adic numbers.
//!
//! No floating point appears here. A radius `r = p^{-ρ}` is stored as the
//! rational exponent `ρ`, so every norm comparison is a comparison of
//! rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Rational exponent of a radius or norm: `|x| = p^{-e}`.
pub type Exponent = BigRational;

pub fn exponent(n: i64) -> Exponent {
    BigRational::from_integer(BigInt::from(n))
}

pub fn exponent_ratio(n: i64, d: i64) -> Exponent {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Deterministic primality test for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `v_p(n)` for a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    if p == 2 {
        return n.trailing_zeros().map(|z| z as i64);
    }
    let mut m = n.magnitude().clone();
    let mut v = 0i64;
    // strip p^8 at a time first
    let big = BigUint::from(p).pow(8);
    loop {
        let (q, r) = m.div_rem(&big);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 8;
    }
    loop {
        let (q, r) = m.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Some(v)
}

/// A p-adic valuation: an integer, or `+∞` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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

    pub fn as_exponent(self) -> Option<Exponent> {
        self.finite().map(exponent)
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
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(ExactScalar(BigRational::new(numer, denom)))
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactScalar(BigRational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExactScalar(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar(r)
    }

    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("reciprocal of zero".into()));
        }
        Ok(ExactScalar(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        ExactScalar(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    /// Exact `v_p(x)`, `Infinite` iff `x = 0`.
    pub fn valuation(&self, p: u64) -> Valuation {
        match int_valuation(self.numer(), p) {
            None => Valuation::Infinite,
            Some(vn) => Valuation::Finite(vn - int_valuation(self.denom(), p).unwrap_or(0)),
        }
    }

    /// Bits in the larger of numerator and denominator; a crude height.
    pub fn height_bits(&self) -> u64 {
        self.numer().bits().max(self.denom().bits())
    }
}

/// `v_p(x)`; see [`ExactScalar::valuation`].
pub fn valuation(x: &ExactScalar, p: u64) -> Valuation {
    x.valuation(p)
}

fn pow_u(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Reduce a p-integral rational to its canonical representative in `[0, p^k)`.
pub fn padic_residue(x: &ExactScalar, p: u64, k: u32) -> Result<BigUint> {
    if let Valuation::Finite(v) = x.valuation(p) {
        if v < 0 {
            return Err(Error::NegativeValuation);
        }
    }
    let modulus = BigInt::from(pow_u(p, k));
    let num = x.numer().mod_floor(&modulus);
    let den = x.denom().mod_floor(&modulus);
    let inv = mod_inverse(&den, &modulus).ok_or(Error::NegativeValuation)?;
    Ok((num * inv)
        .mod_floor(&modulus)
        .to_biguint()
        .expect("nonnegative after mod_floor"))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Hensel-lift a `k`-th root of unity from `F_p` to `Z/p^K`.
///
/// `k` must divide `p - 1`, so `k` is a p-adic unit and Newton's iteration on
/// `ω^k - 1` converges from any seed with `seed^k ≡ 1 (mod p)`.
pub fn hensel_unit_root(p: u64, k: u32, seed: u64, precision: u32) -> Result<CappedPadic> {
    check_prime(p)?;
    if k == 0 || !(p - 1).is_multiple_of(k as u64) {
        return Err(Error::InvalidInput(format!("k = {k} does not divide p - 1")));
    }
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let pm = BigUint::from(p);
    let seed_res = BigUint::from(seed) % &pm;
    if seed_res.is_zero() || seed_res.modpow(&BigUint::from(k), &pm) != BigUint::one() {
        return Err(Error::BadSeed);
    }
    let modulus = BigInt::from(pow_u(p, precision));
    let kk = BigInt::from(k);
    let mut w = BigInt::from(seed_res);
    let mut known = 1u32;
    while known < precision {
        // ω ← ω − (ω^k − 1) / (k ω^{k−1})
        let wk1 = w.modpow(&BigInt::from(k - 1), &modulus);
        let f = (&wk1 * &w - 1u32).mod_floor(&modulus);
        let df = (&kk * &wk1).mod_floor(&modulus);
        let inv = mod_inverse(&df, &modulus).expect("k and ω are units");
        w = (&w - f * inv).mod_floor(&modulus);
        known = known.saturating_mul(2);
    }
    Ok(CappedPadic::from_residue(
        p,
        &w.to_biguint().expect("nonnegative"),
        precision,
    ))
}

/// Whether a disk is open (`|x - b| < r`) or closed (`|x - b| ≤ r`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Open,
    Closed,
}

/// A radius `p^{-ρ}` stored by its exponent `ρ`, together with the polarity of
/// the disk it bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogRadius {
    pub exponent: Exponent,
    pub polarity: Polarity,
}

impl LogRadius {
    pub fn open(exponent: Exponent) -> Self {
        LogRadius {
            exponent,
            polarity: Polarity::Open,
        }
    }

    pub fn closed(exponent: Exponent) -> Self {
        LogRadius {
            exponent,
            polarity: Polarity::Closed,
        }
    }

    pub fn is_open(&self) -> bool {
        self.polarity == Polarity::Open
    }

    /// Whether a point at distance `p^{-v}` from the center lies in the disk.
    pub fn contains_valuation(&self, v: Valuation) -> bool {
        match v {
            Valuation::Infinite => true,
            Valuation::Finite(v) => self.contains_exponent(&exponent(v)),
        }
    }

    pub fn contains_exponent(&self, v: &Exponent) -> bool {
        match self.polarity {
            Polarity::Open => v > &self.exponent,
            Polarity::Closed => v >= &self.exponent,
        }
    }
}

/// Disks about a common center ordered by inclusion.
impl PartialOrd for LogRadius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogRadius {
    fn cmp(&self, other: &Self) -> Ordering {
        other.exponent.cmp(&self.exponent).then_with(|| {
            match (self.polarity, other.polarity) {
                (Polarity::Open, Polarity::Closed) => Ordering::Less,
                (Polarity::Closed, Polarity::Open) => Ordering::Greater,
                _ => Ordering::Equal,
            }
        })
    }
}

/// A p-adic number known modulo `p^abs_precision`.
///
/// Nonzero values are stored as `p^v · u` with `u` a unit known modulo
/// `p^(abs_precision - v)`. A value that is `0 mod p^abs_precision` has
/// valuation `Infinite`; exact zero carries `abs_precision = i64::MAX`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CappedPadic {
    prime: u64,
    valuation: Valuation,
    unit: BigUint,
    abs_precision: i64,
}

impl CappedPadic {
    pub fn exact_zero(p: u64) -> Self {
        CappedPadic {
            prime: p,
            valuation: Valuation::Infinite,
            unit: BigUint::zero(),
            abs_precision: i64::MAX,
        }
    }

    /// From an integer residue modulo `p^precision`.
    pub fn from_residue(p: u64, r: &BigUint, precision: u32) -> Self {
        Self::from_scaled_residue(p, &BigInt::from(r.clone()), 0, precision as i64)
    }

    /// The value `p^shift · r`, known modulo `p^abs_precision`.
    fn from_scaled_residue(p: u64, r: &BigInt, shift: i64, abs_precision: i64) -> Self {
        let rel = abs_precision - shift;
        if rel <= 0 {
            return CappedPadic {
                prime: p,
                valuation: Valuation::Infinite,
                unit: BigUint::zero(),
                abs_precision,
            };
        }
        let modulus = BigInt::from(pow_u(p, rel as u32));
        let r = r.mod_floor(&modulus);
        match int_valuation(&r, p) {
            None => CappedPadic {
                prime: p,
                valuation: Valuation::Infinite,
                unit: BigUint::zero(),
                abs_precision,
            },
            Some(v) => {
                let unit = (r / BigInt::from(pow_u(p, v as u32)))
                    .to_biguint()
                    .expect("nonnegative");
                let unit_mod = pow_u(p, (rel - v) as u32);
                CappedPadic {
                    prime: p,
                    valuation: Valuation::Finite(v + shift),
                    unit: unit % unit_mod,
                    abs_precision,
                }
            }
        }
    }

    /// Approximate an exact rational to `relative` digits of precision.
    pub fn from_scalar(x: &ExactScalar, p: u64, relative: u32) -> Self {
        match x.valuation(p) {
            Valuation::Infinite => Self::exact_zero(p),
            Valuation::Finite(v) => {
                let scaled = if v >= 0 {
                    x.clone() / ExactScalar::from_bigint(BigInt::from(pow_u(p, v as u32)))
                } else {
                    x.clone() * ExactScalar::from_bigint(BigInt::from(pow_u(p, (-v) as u32)))
                };
                let u = padic_residue(&scaled, p, relative).expect("unit has valuation 0");
                CappedPadic {
                    prime: p,
                    valuation: Valuation::Finite(v),
                    unit: u,
                    abs_precision: v + relative as i64,
                }
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Relative precision of the unit part; `None` for a zero value.
    pub fn precision(&self) -> Option<u32> {
        self.valuation
            .finite()
            .map(|v| (self.abs_precision - v) as u32)
    }

    pub fn abs_precision(&self) -> i64 {
        self.abs_precision
    }

    pub fn is_exact_zero(&self) -> bool {
        self.valuation.is_infinite() && self.abs_precision == i64::MAX
    }

    /// Indistinguishable from zero at the available precision.
    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    /// Integer representative modulo `p^abs_precision`; requires the value to
    /// be integral.
    pub fn to_residue(&self) -> Result<BigUint> {
        match self.valuation {
            Valuation::Infinite => Ok(BigUint::zero()),
            Valuation::Finite(v) if v < 0 => Err(Error::NegativeValuation),
            Valuation::Finite(v) => Ok(&self.unit * pow_u(self.prime, v as u32)),
        }
    }

    /// Exact rational `p^v · u` representing this approximation.
    pub fn to_scalar(&self) -> ExactScalar {
        match self.valuation {
            Valuation::Infinite => ExactScalar::zero(),
            Valuation::Finite(v) => {
                let u = ExactScalar::from_bigint(BigInt::from(self.unit.clone()));
                let pv = ExactScalar::from_bigint(BigInt::from(pow_u(self.prime, v.unsigned_abs() as u32)));
                if v >= 0 {
                    u * pv
                } else {
                    u / pv
                }
            }
        }
    }

    /// Multiply by `p^k` exactly; the absolute precision moves with it.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        if let Valuation::Finite(v) = out.valuation {
            out.valuation = Valuation::Finite(v + k);
        }
        if out.abs_precision != i64::MAX {
            out.abs_precision += k;
        }
        out
    }

    fn common_floor(&self, other: &Self) -> i64 {
        let a = self.valuation.finite().unwrap_or(self.abs_precision);
        let b = other.valuation.finite().unwrap_or(other.abs_precision);
        a.min(b).min(0)
    }

    fn scaled_int(&self, floor: i64) -> BigInt {
        match self.valuation {
            Valuation::Infinite => BigInt::zero(),
            Valuation::Finite(v) => BigInt::from(&self.unit * pow_u(self.prime, (v - floor) as u32)),
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.prime, other.prime, "mixed primes");
        let abs = self.abs_precision.min(other.abs_precision);
        if abs == i64::MAX {
            // both exact zero
            return self.clone();
        }
        let floor = self.common_floor(other);
        let a = self.scaled_int(floor);
        let b = other.scaled_int(floor);
        let s = if negate { a - b } else { a + b };
        Self::from_scaled_residue(self.prime, &s, floor, abs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        Self::exact_zero(self.prime).sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mixed primes");
        match (self.valuation, other.valuation) {
            (Valuation::Finite(va), Valuation::Finite(vb)) => {
                let abs = (va.saturating_add(other.abs_precision))
                    .min(vb.saturating_add(self.abs_precision));
                let prod = BigInt::from(&self.unit * &other.unit);
                Self::from_scaled_residue(self.prime, &prod, va + vb, abs)
            }
            _ => {
                let va = self.valuation.finite().unwrap_or(self.abs_precision);
                let vb = other.valuation.finite().unwrap_or(other.abs_precision);
                let abs = if self.is_exact_zero() || other.is_exact_zero() {
                    i64::MAX
                } else {
                    va.saturating_add(vb)
                };
                CappedPadic {
                    prime: self.prime,
                    valuation: Valuation::Infinite,
                    unit: BigUint::zero(),
                    abs_precision: abs,
                }
            }
        }
    }

    /// Division by a unit (valuation-zero) value; any other divisor is an error.
    pub fn div_unit(&self, other: &Self) -> Result<Self> {
        if other.valuation != Valuation::Finite(0) {
            return Err(Error::NotAUnit);
        }
        let rel = other.abs_precision;
        let modulus = BigInt::from(pow_u(self.prime, rel as u32));
        let inv = mod_inverse(&BigInt::from(other.unit.clone()), &modulus).ok_or(Error::NotAUnit)?;
        let inv = CappedPadic::from_scaled_residue(self.prime, &inv, 0, rel);
        Ok(self.mul(&inv))
    }

    /// Whether two approximations agree modulo `p^k`.
    pub fn agrees_mod(&self, other: &Self, k: i64) -> bool {
        let d = self.sub(other);
        match d.valuation {
            Valuation::Infinite => d.abs_precision >= k,
            Valuation::Finite(v) => v >= k,
        }
    }
}

impl fmt::Display for CappedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            Valuation::Infinite if self.abs_precision == i64::MAX => write!(f, "0"),
            Valuation::Infinite => write!(f, "O({}^{})", self.prime, self.abs_precision),
            Valuation::Finite(v) => write!(
                f,
                "{}^{}*{} + O({}^{})",
                self.prime, v, self.unit, self.prime, self.abs_precision
            ),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                ExactScalar::new(n, d)
            }
            None => Ok(ExactScalar::from_bigint(
                BigInt::from_str(s).map_err(|_| bad())?,
            )),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        ExactScalar::from_bigint(n)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'b ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        self.0 *= &rhs.0;
    }
}

/// Render a rational exponent as a decimal string (`"3/2"`, `"-1"`).
pub fn exponent_string(e: &Exponent) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Sign of a big integer as -1, 0 or 1.
pub fn signum(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Floor of a rational as an `i64`, if it fits.
pub fn floor_i64(e: &Exponent) -> Option<i64> {
    e.floor().to_integer().to_i64()
}

/// Ceiling of a rational as an `i64`, if it fits.
pub fn ceil_i64(e: &Exponent) -> Option<i64> {
    e.ceil().to_integer().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactScalar {
        s.parse().unwrap()
    }

    #[test]
    fn valuations_of_small_rationals() {
        assert_eq!(q("12").valuation(2), Valuation::Finite(2));
        assert_eq!(q("0").valuation(2), Valuation::Infinite);
        // (p+1)^{p+1}/p^p at p = 2
        assert_eq!(q("27/4").valuation(2), Valuation::Finite(-2));
        assert_eq!(q("27/4").valuation(3), Valuation::Finite(3));
    }

    #[test]
    fn residues() {
        assert_eq!(padic_residue(&q("7"), 3, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(padic_residue(&q("1/2"), 3, 2).unwrap(), BigUint::from(5u32));
        assert_eq!(padic_residue(&q("1/3"), 3, 1), Err(Error::NegativeValuation));
        assert_eq!(padic_residue(&q("-1"), 3, 4).unwrap(), BigUint::from(80u32));
    }

    #[test]
    fn hensel_lifts() {
        let w = hensel_unit_root(5, 4, 2, 3).unwrap();
        assert_eq!(w.to_residue().unwrap(), BigUint::from(57u32));
        let w = hensel_unit_root(3, 2, 2, 4).unwrap();
        assert_eq!(w.to_residue().unwrap(), BigUint::from(80u32));
        let w = hensel_unit_root(5, 4, 3, 1).unwrap();
        assert_eq!(w.to_residue().unwrap(), BigUint::from(3u32));
        assert_eq!(hensel_unit_root(5, 4, 0, 3), Err(Error::BadSeed));
        assert_eq!(hensel_unit_root(7, 3, 3, 3), Err(Error::BadSeed));
    }

    #[test]
    fn hensel_lift_is_a_root_of_unity() {
        for (p, k) in [(7u64, 3u32), (7, 6), (13, 4), (31, 5)] {
            for seed in 1..p {
                let pm = BigUint::from(p);
                if BigUint::from(seed).modpow(&BigUint::from(k), &pm) != BigUint::one() {
                    continue;
                }
                let w = hensel_unit_root(p, k, seed, 20).unwrap().to_residue().unwrap();
                let m = pow_u(p, 20);
                assert_eq!(w.modpow(&BigUint::from(k), &m), BigUint::one());
                assert_eq!(&w % &pm, BigUint::from(seed));
            }
        }
    }

    #[test]
    fn log_radius_ordering() {
        let a = LogRadius::open(exponent(1));
        let b = LogRadius::closed(exponent(1));
        let c = LogRadius::open(exponent(0));
        assert!(a < b);
        assert!(b < c);
        assert!(a.contains_valuation(Valuation::Finite(2)));
        assert!(!a.contains_valuation(Valuation::Finite(1)));
        assert!(b.contains_valuation(Valuation::Finite(1)));
        assert!(a.contains_valuation(Valuation::Infinite));
    }

    #[test]
    fn capped_arithmetic_tracks_precision() {
        let p = 3;
        let x = CappedPadic::from_scalar(&q("10"), p, 5);
        let y = CappedPadic::from_scalar(&q("1"), p, 5);
        let d = x.sub(&y); // 9
        assert_eq!(d.valuation(), Valuation::Finite(2));
        assert_eq!(d.precision(), Some(3));
        let prod = d.mul(&d);
        assert_eq!(prod.valuation(), Valuation::Finite(4));
        assert_eq!(prod.abs_precision(), 7);
        assert_eq!(d.div_unit(&d), Err(Error::NotAUnit));
        let two = CappedPadic::from_scalar(&q("2"), p, 5);
        let half = y.div_unit(&two).unwrap();
        assert_eq!(half.to_residue().unwrap(), padic_residue(&q("1/2"), 3, 5).unwrap());
        let shifted = d.shift(-2);
        assert_eq!(shifted.valuation(), Valuation::Finite(0));
        assert_eq!(shifted.to_residue().unwrap(), BigUint::one());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "-7", "3/4", "-27/4", "123456789012345678901234567890"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("6/8").to_string(), "3/4");
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("abc".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
    }

    proptest::proptest! {
        #[test]
        fn valuation_is_a_valuation(a in -5000i64..5000, b in 1i64..5000, c in -5000i64..5000, d in 1i64..5000, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let x = ExactScalar::ratio(a, b);
            let y = ExactScalar::ratio(c, d);
            let vx = x.valuation(p);
            let vy = y.valuation(p);
            let vxy = (&x * &y).valuation(p);
            match (vx, vy) {
                (Valuation::Finite(s), Valuation::Finite(t)) => proptest::prop_assert_eq!(vxy, Valuation::Finite(s + t)),
                _ => proptest::prop_assert_eq!(vxy, Valuation::Infinite),
            }
            let vsum = (&x + &y).valuation(p);
            proptest::prop_assert!(vsum >= vx.min(vy));
            if vx != vy {
                proptest::prop_assert_eq!(vsum, vx.min(vy));
            }
        }

        #[test]
        fn log_radius_order_matches_exponents(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
            let r1 = LogRadius::closed(exponent_ratio(a, b));
            let r2 = LogRadius::closed(exponent_ratio(c, d));
            proptest::prop_assert_eq!(r1.cmp(&r2), r2.exponent.cmp(&r1.exponent));
        }
    }
}
