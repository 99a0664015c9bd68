//! Words over `{r, ρ}` and the geometry they induce.
//!
//! A word `a_1 … a_m` selects one of the two segments of the relation for
//! each consecutive coordinate pair. Its prefix products `P_n = a_1 ··· a_n`
//! fix the direction `(1, P_1, …, P_m)` of the corresponding branch, and the
//! branch parameter `T = 1 / max(1, max_n P_n)` is how far the branch
//! reaches before some coordinate hits 1.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{NeverConnect, Rational, SlopePair};
use crate::orbits::find_exponents;

/// `R` multiplies by `r`, `P` by `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    R,
    P,
}

impl Symbol {
    pub fn factor(self, pair: &SlopePair) -> &Rational {
        match self {
            Symbol::R => &pair.r,
            Symbol::P => &pair.rho,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::R => 'R',
            Symbol::P => 'P',
        }
    }
}

/// A finite word over `{R, P}`, written as a plain string such as `"RPR"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_repeat(&mut self, s: Symbol, count: u64) {
        self.0.extend(std::iter::repeat_n(s, count as usize));
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }

    /// The word without its first symbol.
    pub fn tail(&self) -> Word {
        Word(self.0.iter().skip(1).copied().collect())
    }

    /// All `2^len` words in lexicographic order (`R < P`).
    pub fn all(len: usize) -> impl Iterator<Item = Word> {
        (0u64..1 << len).map(move |bits| {
            Word(
                (0..len)
                    .map(|i| {
                        if bits >> (len - 1 - i) & 1 == 1 {
                            Symbol::P
                        } else {
                            Symbol::R
                        }
                    })
                    .collect(),
            )
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'R' => Ok(Symbol::R),
                'P' => Ok(Symbol::P),
                _ => Err(Error::Parse {
                    input: s.to_string(),
                    reason: format!("unexpected symbol {c:?}; words use only R and P"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    pub pair: SlopePair,
    pub word: Word,
}

impl Itinerary {
    pub fn new(pair: SlopePair, word: Word) -> Self {
        Itinerary { pair, word }
    }

    pub fn parse(pair: &SlopePair, word: &str) -> Result<Self> {
        Ok(Itinerary::new(pair.clone(), word.parse()?))
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Product of all factors of the word.
    pub fn total_product(&self) -> Rational {
        self.word
            .symbols()
            .iter()
            .fold(Rational::one(), |acc, s| acc * s.factor(&self.pair))
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.word, f)
    }
}

/// `P_0 = 1, P_1, …, P_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixProducts(pub Vec<Rational>);

impl PrefixProducts {
    pub fn max(&self) -> &Rational {
        self.0.iter().max().expect("P_0 is always present")
    }

    pub fn last(&self) -> &Rational {
        self.0.last().expect("P_0 is always present")
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

pub fn prefix_products(it: &Itinerary) -> PrefixProducts {
    let mut out = Vec::with_capacity(it.len() + 1);
    let mut acc = Rational::one();
    out.push(acc.clone());
    for s in it.word.symbols() {
        acc = &acc * s.factor(&it.pair);
        out.push(acc.clone());
    }
    PrefixProducts(out)
}

/// `1 / max(1, max_n P_n)`: the largest `t` with `t·P_n ∈ [0, 1]` for all `n`.
pub fn branch_param(it: &Itinerary) -> Rational {
    param_of(&prefix_products(it))
}

pub(crate) fn param_of(products: &PrefixProducts) -> Rational {
    // P_0 = 1 already bounds the max from below.
    products.max().recip()
}

/// `b_1, …, b_{m+1}` with `b_n = T·P_{n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointVector {
    pub coords: Vec<Rational>,
    pub param: Rational,
}

pub fn endpoint_vector(it: &Itinerary) -> EndpointVector {
    let products = prefix_products(it);
    let param = param_of(&products);
    let coords = products.0.iter().map(|p| p * &param).collect();
    EndpointVector { coords, param }
}

/// Whether the eventually periodic word `pre · cycle^∞` keeps its prefix
/// products bounded, i.e. whether its branch is a nondegenerate arc.
///
/// The prefix is finite and cannot affect boundedness; only the cycle
/// product matters. A cycle product of exactly 1 means `r^a ρ^b = 1` with
/// `a + b > 0`, which a never-connect pair cannot satisfy, so that case only
/// arises for dependent pairs and is bounded.
pub fn is_useful_periodic(pre: &Itinerary, cycle: &Itinerary) -> Result<bool> {
    if cycle.is_empty() {
        return Err(Error::Empty("cycle"));
    }
    if pre.pair != cycle.pair {
        return Err(Error::Precondition(
            "prefix and cycle use different slope pairs".into(),
        ));
    }
    Ok(cycle.total_product() <= Rational::one())
}

/// A finite word `a` with `x·P_n ∈ [0, 1]` for every prefix and
/// `max_n x·P_n ≥ 1 − ε` (the empty prefix included).
///
/// Built in stages from the running value `v` (initially `x`): stage `j`
/// asks [`find_exponents`] for `(k, ℓ)` with `v·r^k ρ^ℓ ∈ (1 − ε_j, 1)`,
/// where `ε_j = max(ε, 2^{−j})`, and appends `R^k P^ℓ`. The `R` block only
/// shrinks `v`; the `P` block grows it monotonically to a value below 1.
pub fn build_sup_itinerary(
    pair: &NeverConnect,
    x: &Rational,
    epsilon: &Rational,
    budget: u64,
) -> Result<Itinerary> {
    let one = Rational::one();
    if !x.is_positive() || *x >= one {
        return Err(Error::OutOfRange {
            what: "x",
            value: x.to_string(),
            expected: "strictly between 0 and 1",
        });
    }
    if !epsilon.is_positive() || *epsilon >= one {
        return Err(Error::OutOfRange {
            what: "epsilon",
            value: epsilon.to_string(),
            expected: "strictly between 0 and 1",
        });
    }
    let target = &one - epsilon;
    let mut word = Word::empty();
    let mut v = x.clone();
    let mut best = x.clone();
    let mut stage_eps = Rational::new(1, 2);
    while best < target {
        let eps_j = Rational::max(&stage_eps, epsilon).clone();
        let e = find_exponents(pair, &v, &eps_j, budget)?;
        word.extend_repeat(Symbol::R, e.k as u64);
        word.extend_repeat(Symbol::P, e.l as u64);
        v = &v * pair.power_product(e.k, e.l);
        if v > best {
            best = v.clone();
        }
        stage_eps = &stage_eps * Rational::new(1, 2);
    }
    Ok(Itinerary::new(pair.pair().clone(), word))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PrimeBound;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn it(r: &str, rho: &str, w: &str) -> Itinerary {
        Itinerary::parse(&SlopePair::parse(r, rho).unwrap(), w).unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn words_parse_and_enumerate() {
        assert_eq!("RPR".parse::<Word>().unwrap().to_string(), "RPR");
        assert!("RXP".parse::<Word>().is_err());
        assert!("".parse::<Word>().unwrap().is_empty());
        let all: Vec<String> = Word::all(2).map(|w| w.to_string()).collect();
        assert_eq!(all, ["RR", "RP", "PR", "PP"]);
        assert_eq!(Word::all(0).count(), 1);
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(prefix_products(&it("1/2", "3", "")).0, qs(&["1"]));
        assert_eq!(
            prefix_products(&it("1/2", "3", "RPR")).0,
            qs(&["1", "1/2", "3/2", "3/4"])
        );
        assert_eq!(
            prefix_products(&it("1/2", "1/3", "PP")).0,
            qs(&["1", "1/3", "1/9"])
        );
    }

    #[test]
    fn param_examples() {
        for w in ["", "R", "PRP", "PPPR"] {
            assert_eq!(branch_param(&it("1/2", "1/3", w)), q("1"));
        }
        assert_eq!(branch_param(&it("1/2", "3", "P")), q("1/3"));
        assert_eq!(branch_param(&it("1/2", "3", "RP")), q("2/3"));
    }

    #[test]
    fn endpoint_examples() {
        let e = endpoint_vector(&it("1/2", "3", "RP"));
        assert_eq!(e.coords, qs(&["2/3", "1/3", "1"]));
        assert_eq!(e.param, q("2/3"));
        assert_eq!(
            endpoint_vector(&it("1/2", "1/2", "RR")).coords,
            qs(&["1", "1/2", "1/4"])
        );
        assert_eq!(endpoint_vector(&it("1/2", "3", "")).coords, qs(&["1"]));
    }

    #[test]
    fn usefulness() {
        let base = it("1/2", "3", "");
        assert!(!is_useful_periodic(&base, &it("1/2", "3", "P")).unwrap());
        assert!(is_useful_periodic(&base, &it("1/2", "3", "RRP")).unwrap());
        assert!(is_useful_periodic(&it("1/2", "3", "P"), &it("1/2", "3", "R")).unwrap());
        // Dependent pair with a unit cycle product.
        assert!(is_useful_periodic(&it("1/2", "2", ""), &it("1/2", "2", "RP")).unwrap());
        // r = 1: degenerate exactly when ρ recurs.
        assert!(is_useful_periodic(&it("1", "3", ""), &it("1", "3", "R")).unwrap());
        assert!(!is_useful_periodic(&it("1", "3", ""), &it("1", "3", "RRP")).unwrap());
        assert!(matches!(
            is_useful_periodic(&base, &it("1/2", "3", "")),
            Err(Error::Empty(_))
        ));
        assert!(is_useful_periodic(&base, &it("1/3", "3", "R")).is_err());
    }

    fn nc() -> NeverConnect {
        NeverConnect::new(SlopePair::parse("1/2", "3").unwrap(), PrimeBound::DEFAULT).unwrap()
    }

    fn check_sup(p: &NeverConnect, x: &Rational, eps: &Rational, word: &Itinerary) {
        let products = prefix_products(word);
        let values: Vec<Rational> = products.0.iter().map(|pp| pp * x).collect();
        assert!(values.iter().all(Rational::in_unit_interval));
        let best = values.iter().max().unwrap();
        assert!(*best >= Rational::one() - eps, "{best} < 1 - {eps}");
        assert_eq!(word.pair, *p.pair());
    }

    #[test]
    fn sup_examples() {
        let p = nc();
        let w = build_sup_itinerary(&p, &q("1/2"), &q("1/4"), 10_000).unwrap();
        assert_eq!(w.word.to_string(), "RP");
        check_sup(&p, &q("1/2"), &q("1/4"), &w);

        let w = build_sup_itinerary(&p, &q("99/100"), &q("1/50"), 10_000).unwrap();
        assert!(w.is_empty());

        let w = build_sup_itinerary(&p, &q("1/3"), &q("1/10"), 10_000).unwrap();
        check_sup(&p, &q("1/3"), &q("1/10"), &w);
        let best = prefix_products(&w)
            .0
            .iter()
            .map(|pp| pp * q("1/3"))
            .max()
            .unwrap();
        assert!(best >= q("9/10") && best < q("1"));

        assert!(build_sup_itinerary(&p, &q("1"), &q("1/4"), 10).is_err());
        assert!(build_sup_itinerary(&p, &q("1/2"), &q("0"), 10).is_err());
    }

    proptest! {
        #[test]
        fn endpoint_recurrence_and_bounds(bits in proptest::collection::vec(any::<bool>(), 0..14)) {
            let pair = SlopePair::parse("2/3", "5/2").unwrap();
            let word = Word(bits.iter().map(|&b| if b { Symbol::P } else { Symbol::R }).collect());
            let it = Itinerary::new(pair.clone(), word.clone());
            let e = endpoint_vector(&it);
            prop_assert_eq!(e.coords.len(), word.len() + 1);
            for (i, s) in word.symbols().iter().enumerate() {
                prop_assert_eq!(&e.coords[i + 1], &(&e.coords[i] * s.factor(&pair)));
            }
            prop_assert!(e.coords.iter().all(Rational::in_unit_interval));
            prop_assert_eq!(e.coords.iter().max().unwrap(), &Rational::one());
        }

        #[test]
        fn extending_never_raises_param(bits in proptest::collection::vec(any::<bool>(), 0..12), extra in any::<bool>()) {
            let pair = SlopePair::parse("1/2", "3").unwrap();
            let mut word = Word(bits.iter().map(|&b| if b { Symbol::P } else { Symbol::R }).collect());
            let before = branch_param(&Itinerary::new(pair.clone(), word.clone()));
            word.push(if extra { Symbol::P } else { Symbol::R });
            let after = branch_param(&Itinerary::new(pair, word));
            prop_assert!(after <= before);
        }

        #[test]
        fn sup_postconditions(num in 1i64..1000, eps_idx in 0usize..3) {
            let p = nc();
            let x = Rational::new(num, 1000);
            let eps = [q("1/4"), q("1/16"), q("1/100")][eps_idx].clone();
            let w = build_sup_itinerary(&p, &x, &eps, 10_000).unwrap();
            check_sup(&p, &x, &eps, &w);
        }
    }
}
