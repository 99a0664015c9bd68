//! The multiplicative orbit `{r^k ρ^ℓ}` and its density witnesses.
//!
//! The orbit is split into four classes by the signs of the exponents:
//!
//! | class | k     | ℓ     |
//! |-------|-------|-------|
//! | `B1`  | ≥ 0   | ≥ 0   |
//! | `B2`  | < 0   | < 0   |
//! | `B3`  | ≥ 0   | < 0   |
//! | `B4`  | < 0   | ≥ 0   |
//!
//! For a never-connect pair `B1` alone is dense in `(0, ∞)`. Nothing here
//! proves that; the functions produce finite, exactly checked witnesses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{ExponentPair, NeverConnect, Rational, SlopePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbitClass {
    B1,
    B2,
    B3,
    B4,
}

impl OrbitClass {
    pub const ALL: [OrbitClass; 4] = [
        OrbitClass::B1,
        OrbitClass::B2,
        OrbitClass::B3,
        OrbitClass::B4,
    ];

    pub fn of(k: i64, l: i64) -> OrbitClass {
        match (k >= 0, l >= 0) {
            (true, true) => OrbitClass::B1,
            (false, false) => OrbitClass::B2,
            (true, false) => OrbitClass::B3,
            (false, true) => OrbitClass::B4,
        }
    }

    fn k_range(self, n: i64) -> std::ops::RangeInclusive<i64> {
        match self {
            OrbitClass::B1 | OrbitClass::B3 => 0..=n,
            OrbitClass::B2 | OrbitClass::B4 => -n..=-1,
        }
    }

    fn l_range(self, n: i64) -> std::ops::RangeInclusive<i64> {
        match self {
            OrbitClass::B1 | OrbitClass::B4 => 0..=n,
            OrbitClass::B2 | OrbitClass::B3 => -n..=-1,
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for OrbitClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B1" => Ok(OrbitClass::B1),
            "B2" => Ok(OrbitClass::B2),
            "B3" => Ok(OrbitClass::B3),
            "B4" => Ok(OrbitClass::B4),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected one of B1, B2, B3, B4".into(),
            }),
        }
    }
}

/// `r^k ρ^ℓ` together with its exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitEntry {
    pub value: Rational,
    pub exponents: ExponentPair,
    pub klass: OrbitClass,
}

impl OrbitEntry {
    pub fn new(pair: &SlopePair, k: i64, l: i64) -> Self {
        OrbitEntry {
            value: pair.power_product(k, l),
            exponents: ExponentPair::new(k, l),
            klass: OrbitClass::of(k, l),
        }
    }
}

/// All orbit elements of the selected classes with `|k|, |ℓ| ≤ bound` that
/// fall in the closed interval `[lo, hi]`, sorted by value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitWindow {
    pub lo: Rational,
    pub hi: Rational,
    pub bound: u32,
    pub entries: Vec<OrbitEntry>,
}

impl OrbitWindow {
    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|e| &e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `[base^{-n}, …, base^{n}]`, indexed by `e + n`.
fn power_table(base: &Rational, n: i64) -> Vec<Rational> {
    (-n..=n).map(|e| base.pow(e)).collect()
}

fn require_nondegenerate(pair: &SlopePair) -> Result<()> {
    for v in [&pair.r, &pair.rho] {
        if v.is_one() {
            return Err(Error::DegenerateSlope(v.to_string()));
        }
    }
    Ok(())
}

pub fn enumerate_orbit(
    pair: &SlopePair,
    classes: &[OrbitClass],
    bound: u32,
    lo: &Rational,
    hi: &Rational,
) -> Result<OrbitWindow> {
    if lo >= hi {
        return Err(Error::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    require_nondegenerate(pair)?;
    let n = i64::from(bound);
    let rp = power_table(&pair.r, n);
    let pp = power_table(&pair.rho, n);
    let mut classes = classes.to_vec();
    classes.sort();
    classes.dedup();

    let mut entries = Vec::new();
    for class in classes {
        for k in class.k_range(n) {
            for l in class.l_range(n) {
                let value = &rp[(k + n) as usize] * &pp[(l + n) as usize];
                if &value >= lo && &value <= hi {
                    entries.push(OrbitEntry {
                        value,
                        exponents: ExponentPair::new(k, l),
                        klass: class,
                    });
                }
            }
        }
    }
    // Ties only happen for dependent pairs; exponents break them.
    entries.sort_by(|a, b| a.value.cmp(&b.value).then(a.exponents.cmp(&b.exponents)));
    Ok(OrbitWindow {
        lo: lo.clone(),
        hi: hi.clone(),
        bound,
        entries,
    })
}

/// Largest distance between neighbouring entries, counting the gaps to both
/// interval ends.
pub fn max_gap(window: &OrbitWindow) -> Result<Rational> {
    let first = window.entries.first().ok_or(Error::Empty("orbit window"))?;
    let last = window.entries.last().expect("nonempty");
    let mut gap = &first.value - &window.lo;
    let tail = &window.hi - &last.value;
    if tail > gap {
        gap = tail;
    }
    for w in window.entries.windows(2) {
        let d = &w[1].value - &w[0].value;
        if d > gap {
            gap = d;
        }
    }
    Ok(gap)
}

/// Number of `B3` elements above `x` (or `B4` elements below `x`) with
/// exponents bounded by `bound`. Both counts are finite for every bound when
/// the pair is never-connect, so they stabilize as the bound grows.
pub fn nowhere_tail_count(
    pair: &SlopePair,
    class: OrbitClass,
    x: &Rational,
    bound: u32,
) -> Result<usize> {
    if !x.is_positive() {
        return Err(Error::NonPositive {
            what: "x",
            value: x.to_string(),
        });
    }
    require_nondegenerate(pair)?;
    let n = i64::from(bound);
    let rp = power_table(&pair.r, n);
    let pp = power_table(&pair.rho, n);
    let beyond = |v: &Rational| match class {
        OrbitClass::B3 => v > x,
        OrbitClass::B4 => v < x,
        _ => false,
    };
    if !matches!(class, OrbitClass::B3 | OrbitClass::B4) {
        return Err(Error::Precondition(format!(
            "tail counts are defined for B3 and B4, not {class}"
        )));
    }
    let mut count = 0;
    for k in class.k_range(n) {
        for l in class.l_range(n) {
            if beyond(&(&rp[(k + n) as usize] * &pp[(l + n) as usize])) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `z_1 = 1`, `z_2 = r`, then `z_{n+1} = ρ·z_n` when that stays `≤ 1` and
/// `r·z_n` otherwise. Every term lies in `[r/ρ, 1]`.
pub fn greedy_orbit(pair: &SlopePair, steps: usize) -> Result<Vec<Rational>> {
    if !pair.straddles_one() {
        return Err(Error::Precondition(format!(
            "greedy orbit needs r < 1 < rho, got {pair}"
        )));
    }
    if steps == 0 {
        return Err(Error::OutOfRange {
            what: "steps",
            value: "0".into(),
            expected: "at least 1",
        });
    }
    let one = Rational::one();
    let mut z = Vec::with_capacity(steps);
    z.push(one.clone());
    if steps >= 2 {
        z.push(pair.r.clone());
    }
    while z.len() < steps {
        let last = z.last().expect("nonempty");
        let up = last * &pair.rho;
        let next = if up <= one { up } else { last * &pair.r };
        z.push(next);
    }
    Ok(z)
}

fn require_open_unit(what: &'static str, v: &Rational) -> Result<()> {
    if !v.is_positive() || *v >= Rational::one() {
        return Err(Error::OutOfRange {
            what,
            value: v.to_string(),
            expected: "strictly between 0 and 1",
        });
    }
    Ok(())
}

/// Non-negative `(k, ℓ)` with `1 − ε < x·r^k ρ^ℓ < 1`.
///
/// Column sweep: for `k = 0, 1, 2, …` take the largest `ℓ` keeping
/// `x·r^k ρ^ℓ < 1` and test the lower bound. The largest admissible `ℓ` never
/// decreases with `k`, so the sweep is incremental.
pub fn find_exponents(
    pair: &NeverConnect,
    x: &Rational,
    epsilon: &Rational,
    max_k: u64,
) -> Result<ExponentPair> {
    require_open_unit("x", x)?;
    require_open_unit("epsilon", epsilon)?;
    let one = Rational::one();
    let floor = &one - epsilon;
    let (r, rho) = (&pair.r, &pair.rho);

    let mut w = x.clone();
    let mut l: i64 = 0;
    let mut k: u64 = 0;
    loop {
        loop {
            let up = &w * rho;
            if up >= one {
                break;
            }
            w = up;
            l += 1;
        }
        if w > floor {
            return Ok(ExponentPair::new(k as i64, l));
        }
        if k == max_k {
            return Err(Error::BudgetExhausted {
                what: "exponent search",
                budget: max_k,
            });
        }
        k += 1;
        w = &w * r;
    }
}

/// A `B1` element strictly between two `B2` elements `x < y`.
pub fn between_witness(
    pair: &NeverConnect,
    x: &OrbitEntry,
    y: &OrbitEntry,
    budget: u64,
) -> Result<OrbitEntry> {
    for (name, e) in [("x", x), ("y", y)] {
        if OrbitClass::of(e.exponents.k, e.exponents.l) != OrbitClass::B2 {
            return Err(Error::Precondition(format!(
                "{name} = r^{} rho^{} is not in B2",
                e.exponents.k, e.exponents.l
            )));
        }
    }
    if x.value >= y.value {
        return Err(Error::Precondition(format!(
            "need x < y, got {} >= {}",
            x.value, y.value
        )));
    }
    let (r, rho) = (&pair.r, &pair.rho);
    // For each k, the smallest ℓ with r^k ρ^ℓ > x; it never decreases in k.
    let mut w = Rational::one();
    let mut l: i64 = 0;
    let mut k: u64 = 0;
    loop {
        while w <= x.value {
            w = &w * rho;
            l += 1;
        }
        if w < y.value {
            return Ok(OrbitEntry {
                value: w,
                exponents: ExponentPair::new(k as i64, l),
                klass: OrbitClass::B1,
            });
        }
        if k == budget {
            return Err(Error::BudgetExhausted {
                what: "between-witness search",
                budget,
            });
        }
        k += 1;
        w = &w * r;
    }
}
