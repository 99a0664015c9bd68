//! Exact positive-rational arithmetic and the multiplicative-dependence
//! predicates that drive classification.
//!
//! Every slope and coordinate in this crate is a [`Rational`]: a reduced
//! fraction of arbitrary-precision integers. Floating point only appears in
//! emitted artifacts, never in a decision.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `numer / denom` with `denom > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// `n / d` in lowest terms. Panics when `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::Parse {
                input: format!("{n}/0"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Rational(BigRational::new(n, d)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `self^exp` for any integer exponent. Panics for `0^negative`.
    pub fn pow(&self, exp: i64) -> Self {
        let e = exp.unsigned_abs();
        let e: u32 = e.try_into().expect("exponent too large");
        let n: BigInt = Pow::pow(self.numer(), e);
        let d: BigInt = Pow::pow(self.denom(), e);
        // Powers of coprime integers stay coprime.
        if exp >= 0 {
            Rational(BigRational::new_raw(n, d))
        } else {
            assert!(!n.is_zero(), "zero raised to a negative power");
            if n.is_negative() {
                Rational(BigRational::new_raw(-d, -n))
            } else {
                Rational(BigRational::new_raw(d, n))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fall back for magnitudes outside the f64 fast path.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// True for `0 ≤ self ≤ 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    fn mul_ref(&self, rhs: &Rational) -> Rational {
        // a/b * c/d with cross cancellation; the result is already reduced.
        let (a, b) = (self.numer(), self.denom());
        let (c, d) = (rhs.numer(), rhs.denom());
        if a.is_zero() || c.is_zero() {
            return Rational::zero();
        }
        let g_ad = gcd(a, d);
        let g_bc = gcd(b, c);
        let n = (a / &g_ad) * (c / &g_bc);
        let m = (b / &g_bc) * (d / &g_ad);
        Rational(BigRational::new_raw(n, m))
    }
}

/// `gcd` with a fast path when one side fits in a machine word: one linear
/// remainder, then a word-sized gcd. The generic binary algorithm is
/// quadratic when the sizes are lopsided, which is the common case when
/// multiplying a long orbit product by a slope.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let small = |x: &BigInt| x.magnitude().to_u64();
    match (small(a), small(b)) {
        (Some(x), Some(y)) => BigInt::from(x.gcd(&y)),
        (Some(0), None) => b.abs(),
        (None, Some(0)) => a.abs(),
        (Some(x), None) => BigInt::from(x.gcd(&(b.magnitude() % x).to_u64().expect("below x"))),
        (None, Some(y)) => BigInt::from(y.gcd(&(a.magnitude() % y).to_u64().expect("below y"))),
        (None, None) => a.gcd(b),
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.denom() == other.denom() {
            return self.numer().cmp(other.numer());
        }
        (self.numer() * other.denom()).cmp(&(other.numer() * self.denom()))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Rational(&a.0 + &b.0));
forward_binop!(Sub, sub, |a, b| Rational(&a.0 - &b.0));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| {
    assert!(!b.is_zero(), "division by zero");
    a.mul_ref(&b.recip())
});

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"p/q"` or `"p"` in base 10 with an optional leading minus.
/// Decimal and exponent notation are rejected.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t.contains(['.', 'e', 'E']) {
            return Err(fail(
                "floating-point input is not accepted; write the value as an exact fraction p/q",
            ));
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let digits = |x: &str, allow_minus: bool| {
            let body = if allow_minus {
                x.strip_prefix('-').unwrap_or(x)
            } else {
                x
            };
            !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
        };
        if !digits(num, true) || !digits(den, false) {
            return Err(fail("expected p/q or p with decimal integers"));
        }
        let n: BigInt = num.parse().map_err(|_| fail("bad numerator"))?;
        let d: BigInt = den.parse().map_err(|_| fail("bad denominator"))?;
        if d.is_zero() {
            return Err(fail("zero denominator"));
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Largest trial divisor used by [`factor_signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeBound(pub u64);

impl PrimeBound {
    pub const DEFAULT: PrimeBound = PrimeBound(1_000_000);
}

impl Default for PrimeBound {
    fn default() -> Self {
        PrimeBound::DEFAULT
    }
}

/// Prime-exponent vector of a positive rational. Zero exponents are never
/// stored, so the empty signature is exactly the value 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PrimeSignature(BTreeMap<u64, i64>);

impl PrimeSignature {
    pub fn exponent(&self, p: u64) -> i64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    /// `∏ p^{e_p}`.
    pub fn reconstruct(&self) -> Rational {
        let mut n = BigInt::one();
        let mut d = BigInt::one();
        for (p, e) in self.iter() {
            let pe: BigInt = Pow::pow(BigInt::from(p), e.unsigned_abs() as u32);
            if e > 0 {
                n *= pe;
            } else {
                d *= pe;
            }
        }
        Rational(BigRational::new_raw(n, d))
    }

    fn add_factors(&mut self, factors: Vec<(u64, u32)>, sign: i64) {
        for (p, e) in factors {
            let entry = self.0.entry(p).or_insert(0);
            *entry += sign * i64::from(e);
            if *entry == 0 {
                self.0.remove(&p);
            }
        }
    }
}

impl FromIterator<(u64, i64)> for PrimeSignature {
    fn from_iter<I: IntoIterator<Item = (u64, i64)>>(iter: I) -> Self {
        PrimeSignature(iter.into_iter().filter(|&(_, e)| e != 0).collect())
    }
}

/// Trial division of a positive integer. A cofactor left over once the
/// divisor exceeds its square root is prime and is accepted even when it is
/// above `bound`; a cofactor that still has an untested divisor range is not.
fn factor_natural(n: &BigUint, bound: PrimeBound) -> std::result::Result<Vec<(u64, u32)>, ()> {
    if let Some(small) = n.to_u128() {
        return factor_u128(small, bound.0);
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    loop {
        let dd = BigUint::from(d) * d;
        if dd > n {
            break;
        }
        if d > bound.0 {
            return Err(());
        }
        let mut e = 0u32;
        loop {
            let (q, r) = n.div_rem(&BigUint::from(d));
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
            if let Some(small) = n.to_u128() {
                let rest = factor_u128_from(small, d + 1, bound.0)?;
                out.extend(rest);
                return Ok(out);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let p = n.to_u64().ok_or(())?;
        out.push((p, 1));
    }
    Ok(out)
}

fn factor_u128(n: u128, bound: u64) -> std::result::Result<Vec<(u64, u32)>, ()> {
    factor_u128_from(n, 2, bound)
}

fn factor_u128_from(
    mut n: u128,
    start: u64,
    bound: u64,
) -> std::result::Result<Vec<(u64, u32)>, ()> {
    let mut out = Vec::new();
    let mut d = start.max(2);
    if d > 2 && d.is_multiple_of(2) {
        d += 1;
    }
    while u128::from(d) * u128::from(d) <= n {
        if d > bound {
            return Err(());
        }
        let mut e = 0;
        while n.is_multiple_of(u128::from(d)) {
            n /= u128::from(d);
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((u64::try_from(n).map_err(|_| ())?, 1));
    }
    Ok(out)
}

/// Prime signature of a positive rational by trial division.
pub fn factor_signature(q: &Rational, bound: PrimeBound) -> Result<PrimeSignature> {
    if !q.is_positive() {
        return Err(Error::NonPositive {
            what: "factored value",
            value: q.to_string(),
        });
    }
    let exceeded = || Error::FactorBoundExceeded {
        value: q.to_string(),
        bound: bound.0,
    };
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let mut sig = PrimeSignature::default();
    sig.add_factors(factor_natural(n, bound).map_err(|_| exceeded())?, 1);
    sig.add_factors(factor_natural(d, bound).map_err(|_| exceeded())?, -1);
    Ok(sig)
}

/// Exponents `(k, ℓ)` attached to `r^k ρ^ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentPair {
    pub k: i64,
    pub l: i64,
}

impl ExponentPair {
    pub const fn new(k: i64, l: i64) -> Self {
        ExponentPair { k, l }
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.l)
    }
}

/// Two positive slopes `r` and `ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlopePair {
    pub r: Rational,
    pub rho: Rational,
}

impl SlopePair {
    pub fn new(r: Rational, rho: Rational) -> Result<Self> {
        for (what, v) in [("r", &r), ("rho", &rho)] {
            if !v.is_positive() {
                return Err(Error::NonPositive {
                    what,
                    value: v.to_string(),
                });
            }
        }
        Ok(SlopePair { r, rho })
    }

    /// Parses both slopes from their text forms.
    pub fn parse(r: &str, rho: &str) -> Result<Self> {
        SlopePair::new(r.parse()?, rho.parse()?)
    }

    /// Same pair with the slopes ordered `r ≤ ρ`.
    pub fn normalized(&self) -> SlopePair {
        if self.r <= self.rho {
            self.clone()
        } else {
            self.swapped()
        }
    }

    pub fn swapped(&self) -> SlopePair {
        SlopePair {
            r: self.rho.clone(),
            rho: self.r.clone(),
        }
    }

    /// `r^k ρ^ℓ`.
    pub fn power_product(&self, k: i64, l: i64) -> Rational {
        self.r.pow(k) * self.rho.pow(l)
    }

    pub(crate) fn straddles_one(&self) -> bool {
        self.r < Rational::one() && self.rho > Rational::one()
    }
}

impl fmt::Display for SlopePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r = {}, rho = {})", self.r, self.rho)
    }
}

/// Minimal `(k, ℓ) ≠ (0, 0)` with `r^k = ρ^ℓ`, normalized to `k > 0` and
/// `gcd(k, |ℓ|) = 1`, or `None` when the slopes are multiplicatively
/// independent.
pub fn multiplicative_dependence(
    pair: &SlopePair,
    bound: PrimeBound,
) -> Result<Option<ExponentPair>> {
    for v in [&pair.r, &pair.rho] {
        if v.is_one() {
            return Err(Error::DegenerateSlope(v.to_string()));
        }
    }
    let sr = factor_signature(&pair.r, bound)?;
    let sp = factor_signature(&pair.rho, bound)?;
    // r^k = ρ^ℓ  ⟺  k·sig(r) = ℓ·sig(ρ); both signatures are nonzero, so
    // dependence means equal supports and a common ratio e_ρ(p) / e_r(p) = ℓ/k.
    if !sr.primes().eq(sp.primes()) {
        return Ok(None);
    }
    let mut ratio: Option<(i64, i64)> = None;
    for ((_, er), (_, ep)) in sr.iter().zip(sp.iter()) {
        // k / ℓ candidates: k·er = ℓ·ep  ⇒  (k, ℓ) ∝ (ep, er)
        let g = ep.gcd(&er);
        let (mut k, mut l) = (ep / g, er / g);
        if k < 0 {
            k = -k;
            l = -l;
        }
        match ratio {
            None => ratio = Some((k, l)),
            Some(prev) if prev == (k, l) => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(ratio.map(|(k, l)| ExponentPair::new(k, l)))
}

/// `r < 1 < ρ` and `r^k = ρ^ℓ` only for `k = ℓ = 0`.
pub fn is_never_connect(pair: &SlopePair, bound: PrimeBound) -> Result<bool> {
    if !pair.straddles_one() {
        return Ok(false);
    }
    Ok(multiplicative_dependence(pair, bound)?.is_none())
}

/// Exact ordering of `r^k ρ^ℓ` against `threshold`, by cross-multiplying
/// integer powers.
pub fn compare_power_product(pair: &SlopePair, k: i64, l: i64, threshold: &Rational) -> Ordering {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (q, e) in [(&pair.r, k), (&pair.rho, l)] {
        let ue = u32::try_from(e.unsigned_abs()).expect("exponent too large");
        let (top, bottom) = if e >= 0 {
            (q.numer(), q.denom())
        } else {
            (q.denom(), q.numer())
        };
        num *= Pow::pow(top, ue);
        den *= Pow::pow(bottom, ue);
    }
    // Slopes are positive, so `den > 0`.
    debug_assert_eq!(den.sign(), Sign::Plus);
    (num * threshold.denom()).cmp(&(threshold.numer() * den))
}

/// A slope pair verified to be never-connect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeverConnect(SlopePair);

impl NeverConnect {
    pub fn new(pair: SlopePair, bound: PrimeBound) -> Result<Self> {
        if is_never_connect(&pair, bound)? {
            Ok(NeverConnect(pair))
        } else {
            Err(Error::NotNeverConnect {
                r: pair.r.to_string(),
                rho: pair.rho.to_string(),
            })
        }
    }

    pub fn pair(&self) -> &SlopePair {
        &self.0
    }

    pub fn into_pair(self) -> SlopePair {
        self.0
    }
}

impl std::ops::Deref for NeverConnect {
    type Target = SlopePair;
    fn deref(&self) -> &SlopePair {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pair(r: &str, rho: &str) -> SlopePair {
        SlopePair::parse(r, rho).unwrap()
    }

    /// Independent oracle: naive trial division over every integer.
    fn naive_factor(mut n: u64) -> BTreeMap<u64, i64> {
        let mut out = BTreeMap::new();
        let mut d = 2;
        while n > 1 {
            while n.is_multiple_of(d) {
                *out.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 1;
        }
        out
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-2/4").to_string(), "-1/2");
        assert_eq!(q("7").to_string(), "7");
        assert_eq!(q("6/2"), Rational::integer(3));
        for bad in ["", "1/", "/2", "a", "1/0", "0.5", "1e3", "1/-2", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
        let err = "0.5".parse::<Rational>().unwrap_err().to_string();
        assert!(err.contains("exact fraction"));
    }

    #[test]
    fn ordering_and_arithmetic() {
        assert!(q("1/3") < q("1/2"));
        assert_eq!(q("1/2") * q("2/3"), q("1/3"));
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(q("1/2") - q("1/3"), q("1/6"));
        assert_eq!(q("1/2") / q("1/4"), q("2"));
        assert_eq!(q("2/3").pow(-2), q("9/4"));
        assert_eq!(q("-2/3").pow(-3), q("-27/8"));
        assert_eq!(q("5").pow(0), Rational::one());
        assert_eq!(Rational::zero() * q("7/3"), Rational::zero());
    }

    #[test]
    fn factor_examples() {
        let b = PrimeBound::DEFAULT;
        assert!(factor_signature(&q("1"), b).unwrap().is_empty());
        assert_eq!(
            factor_signature(&q("1/2"), b).unwrap(),
            [(2, -1)].into_iter().collect()
        );
        let twelve: PrimeSignature = naive_factor(12).into_iter().collect();
        assert_eq!(factor_signature(&q("12"), b).unwrap(), twelve);
        assert_eq!(twelve, [(2, 2), (3, 1)].into_iter().collect());
    }

    #[test]
    fn factor_rejects_nonpositive_and_large_factors() {
        let b = PrimeBound::DEFAULT;
        assert!(matches!(
            factor_signature(&q("0"), b),
            Err(Error::NonPositive { .. })
        ));
        assert!(factor_signature(&q("-3"), b).is_err());
        // 1000003 is prime; accepted because it is proven prime.
        assert_eq!(
            factor_signature(&q("1000003"), b).unwrap(),
            [(1_000_003, 1)].into_iter().collect()
        );
        // 101 * 103 with a bound of 50: 101 is never reached.
        assert!(matches!(
            factor_signature(&q("10403"), PrimeBound(50)),
            Err(Error::FactorBoundExceeded { .. })
        ));
        // Beyond u128 the big-integer path is used.
        let big = q("340282366920938463463374607431768211456"); // 2^128
        assert_eq!(
            factor_signature(&big, b).unwrap(),
            [(2, 128)].into_iter().collect()
        );
        let mixed = Rational::new(6, 35).pow(60);
        let sig = factor_signature(&mixed, b).unwrap();
        assert_eq!(
            sig,
            [(2, 60), (3, 60), (5, -60), (7, -60)].into_iter().collect()
        );
        assert_eq!(sig.reconstruct(), mixed);
    }

    #[test]
    fn dependence_examples() {
        let b = PrimeBound::DEFAULT;
        assert_eq!(
            multiplicative_dependence(&pair("1/2", "2"), b).unwrap(),
            Some(ExponentPair::new(1, -1))
        );
        assert_eq!(
            multiplicative_dependence(&pair("1/4", "8"), b).unwrap(),
            Some(ExponentPair::new(3, -2))
        );
        assert_eq!(
            multiplicative_dependence(&pair("1/2", "3"), b).unwrap(),
            None
        );
        assert_eq!(
            multiplicative_dependence(&pair("6", "12"), b).unwrap(),
            None
        );
        assert_eq!(
            multiplicative_dependence(&pair("4/9", "27/8"), b).unwrap(),
            Some(ExponentPair::new(3, -2))
        );
        assert!(matches!(
            multiplicative_dependence(&pair("1", "3"), b),
            Err(Error::DegenerateSlope(_))
        ));
    }

    #[test]
    fn never_connect_examples() {
        let b = PrimeBound::DEFAULT;
        assert!(is_never_connect(&pair("1/2", "3"), b).unwrap());
        assert!(!is_never_connect(&pair("1/2", "2"), b).unwrap());
        assert!(!is_never_connect(&pair("2", "3"), b).unwrap());
        assert!(!is_never_connect(&pair("1", "3"), b).unwrap());
        assert!(NeverConnect::new(pair("1/4", "8"), b).is_err());
    }

    #[test]
    fn compare_examples() {
        let p = pair("1/2", "3");
        let one = Rational::one();
        assert_eq!(compare_power_product(&p, 1, 1, &one), Ordering::Greater);
        assert_eq!(compare_power_product(&p, 0, 0, &one), Ordering::Equal);
        assert_eq!(compare_power_product(&p, 2, 1, &one), Ordering::Less);
        assert_eq!(
            compare_power_product(&p, -3, -1, &q("8/3")),
            Ordering::Equal
        );
        assert_eq!(compare_power_product(&p, 1, 0, &q("-5")), Ordering::Greater);
    }

    fn small_pos() -> impl Strategy<Value = Rational> {
        (1i64..2000, 1i64..2000).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn signature_round_trips(v in small_pos()) {
            let sig = factor_signature(&v, PrimeBound::DEFAULT).unwrap();
            prop_assert_eq!(sig.reconstruct(), v);
            prop_assert!(sig.iter().all(|(_, e)| e != 0));
        }

        #[test]
        fn dependence_witness_is_equal(base in 2i64..12, x in 1i64..5, y in 1i64..5) {
            let r = Rational::new(1, base).pow(x);
            let rho = Rational::integer(base).pow(y);
            let p = SlopePair::new(r, rho).unwrap();
            let dep = multiplicative_dependence(&p, PrimeBound::DEFAULT).unwrap().unwrap();
            prop_assert!(dep.k > 0);
            prop_assert_eq!(dep.k.gcd(&dep.l.abs()), 1);
            prop_assert_eq!(compare_power_product(&p, dep.k, -dep.l, &Rational::one()), Ordering::Equal);
        }

        #[test]
        fn compare_matches_direct_evaluation(k in -6i64..6, l in -6i64..6, t in small_pos()) {
            let p = pair("2/3", "5/2");
            prop_assert_eq!(compare_power_product(&p, k, l, &t), p.power_product(k, l).cmp(&t));
        }

        #[test]
        fn mul_matches_reference(a in small_pos(), b in small_pos()) {
            let reference = Rational(&a.0 * &b.0);
            prop_assert_eq!(a * b, reference);
        }
    }

    #[test]
    fn never_connect_pairs_have_no_small_relation() {
        let b = PrimeBound::DEFAULT;
        for (r, rho) in [("1/2", "3"), ("2/3", "5/2"), ("3/7", "11/5")] {
            let p = pair(r, rho);
            assert!(is_never_connect(&p, b).unwrap());
            for k in -12..=12 {
                for l in -12..=12 {
                    let ord = compare_power_product(&p, k, l, &Rational::one());
                    assert_eq!(
                        ord == Ordering::Equal,
                        k == 0 && l == 0,
                        "{r},{rho}: {k},{l}"
                    );
                }
            }
        }
    }
}
