//! Finite Mahavier products of the two-segment relation.
//!
//! The depth-`m` product is the set of points `(x_1, …, x_{m+1}) ∈ [0,1]^{m+1}`
//! with every consecutive pair `(x_i, x_{i+1})` on one of the two segments,
//! i.e. `x_{i+1} ∈ {r·x_i, ρ·x_i}`. It is a union of `2^m` straight segments
//! from the origin, one per word; see [`BranchSet`].
//!
//! Distances use the weighted maximum metric
//! `d(x, y) = max_i 2^{−(i−1)}·|x_i − y_i|` on the Hilbert cube, so that
//! dropping coordinates past `m + 1` costs at most `2^{−(m+1)}`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{NeverConnect, Rational, SlopePair};
use crate::itinerary::{
    build_sup_itinerary, param_of, prefix_products, Itinerary, PrefixProducts, Symbol, Word,
};

/// Largest depth [`finite_mahavier`] builds without an explicit cap.
pub const DEFAULT_DEPTH_CAP: usize = 20;

/// Default number of sample points per branch.
pub const DEFAULT_SAMPLES_PER_BRANCH: usize = 8;

pub type PlanarPoint = (Rational, Rational);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    pub start: PlanarPoint,
    pub end: PlanarPoint,
}

impl Segment {
    /// Whether `(x, y)` lies on the closed segment.
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let (ax, ay) = &self.start;
        let (bx, by) = &self.end;
        let dx = bx - ax;
        let dy = by - ay;
        let cross = &dx * &(y - ay) - &dy * &(x - ax);
        if !cross.is_zero() {
            return false;
        }
        let within = |v: &Rational, a: &Rational, b: &Rational| v >= a.min(b) && v <= a.max(b);
        within(x, ax, bx) && within(y, ay, by)
    }
}

/// A closed relation on `[0,1]` given as a finite union of segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentRelation {
    pub segments: Vec<Segment>,
}

impl SegmentRelation {
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        self.segments.iter().any(|s| s.contains(x, y))
    }
}

/// End of the segment `y = s·x` from the origin, clipped to the unit square.
fn clipped_end(slope: &Rational) -> PlanarPoint {
    if *slope <= Rational::one() {
        (Rational::one(), slope.clone())
    } else {
        (slope.recip(), Rational::one())
    }
}

/// `{y = r·x} ∪ {y = ρ·x}` inside `[0,1]²`; a single segment when `r = ρ`.
pub fn relation_union(pair: &SlopePair) -> SegmentRelation {
    let origin = (Rational::zero(), Rational::zero());
    let mut segments = vec![Segment {
        start: origin.clone(),
        end: clipped_end(&pair.r),
    }];
    if pair.rho != pair.r {
        segments.push(Segment {
            start: origin,
            end: clipped_end(&pair.rho),
        });
    }
    SegmentRelation { segments }
}

/// Swaps the coordinates of every segment endpoint.
pub fn inverse_relation(rel: &SegmentRelation) -> SegmentRelation {
    let flip = |(x, y): &PlanarPoint| (y.clone(), x.clone());
    SegmentRelation {
        segments: rel
            .segments
            .iter()
            .map(|s| Segment {
                start: flip(&s.start),
                end: flip(&s.end),
            })
            .collect(),
    }
}

/// A point of `[0,1]^{m+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CubePoint(Vec<Rational>);

impl CubePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("cube point"));
        }
        if let Some(bad) = coords.iter().find(|c| !c.in_unit_interval()) {
            return Err(Error::OutOfRange {
                what: "coordinate",
                value: bad.to_string(),
                expected: "within [0, 1]",
            });
        }
        Ok(CubePoint(coords))
    }

    pub fn origin(dim: usize) -> Self {
        CubePoint(vec![Rational::zero(); dim])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// 1-based coordinate access.
    pub fn coord(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    /// Drops the first coordinate.
    pub fn shifted(&self) -> Option<CubePoint> {
        (self.0.len() > 1).then(|| CubePoint(self.0[1..].to_vec()))
    }

    pub fn truncated(&self, dim: usize) -> CubePoint {
        CubePoint(self.0[..dim.min(self.0.len())].to_vec())
    }
}

/// `p_{i+1} ∈ {r·p_i, ρ·p_i}` for every consecutive pair and all coordinates
/// in `[0, 1]`.
pub fn satisfies_relation(pair: &SlopePair, p: &CubePoint) -> bool {
    p.coords().iter().all(Rational::in_unit_interval)
        && p.coords().windows(2).all(|w| {
            let next = &w[1];
            *next == &w[0] * &pair.r || *next == &w[0] * &pair.rho
        })
}

/// The segment `{t·(1, P_1, …, P_m) : t ∈ [0, param_max]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub word: Word,
    pub param_max: Rational,
    pub direction: PrefixProducts,
}

impl Branch {
    pub fn from_itinerary(it: &Itinerary) -> Self {
        let direction = prefix_products(it);
        Branch {
            word: it.word.clone(),
            param_max: param_of(&direction),
            direction,
        }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn point_at(&self, t: &Rational) -> CubePoint {
        CubePoint(self.direction.as_slice().iter().map(|d| d * t).collect())
    }

    pub fn endpoint(&self) -> CubePoint {
        self.point_at(&self.param_max)
    }

    /// `param_max·s/count` for `s = 1..=count`.
    pub fn samples(&self, count: usize) -> Vec<CubePoint> {
        (1..=count as i64)
            .map(|s| self.point_at(&(&self.param_max * Rational::new(s, count as i64))))
            .collect()
    }
}

/// Diameter of a branch under the cube metric: the weighted distance from
/// the origin to its far end.
pub fn branch_diameter(b: &Branch) -> Rational {
    let end = b.endpoint();
    weighted_norm(end.coords())
}

fn weighted_norm(coords: &[Rational]) -> Rational {
    let mut best = Rational::zero();
    let mut weight = Rational::one();
    let half = Rational::new(1, 2);
    for c in coords {
        let v = c.abs() * &weight;
        if v > best {
            best = v;
        }
        weight = &weight * &half;
    }
    best
}

/// Whether two origin-rooted segments share only the origin, i.e. their
/// directions are not positively parallel.
pub fn meet_only_at_origin(a: &Branch, b: &Branch) -> bool {
    let da = a.direction.as_slice();
    let db = b.direction.as_slice();
    if da.len() != db.len() {
        return true;
    }
    let Some(i0) = da.iter().position(|v| !v.is_zero()) else {
        return true;
    };
    if db[i0].is_zero() {
        return true;
    }
    !da.iter().zip(db).all(|(x, y)| x * &db[i0] == y * &da[i0])
}

/// The depth-`m` Mahavier product as origin-rooted branches, one per word in
/// lexicographic order (`R < P`). When `r = ρ` all words coincide and a
/// single branch is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSet {
    pub pair: SlopePair,
    pub depth: usize,
    pub branches: Vec<Branch>,
}

impl BranchSet {
    pub fn dim(&self) -> usize {
        self.depth + 1
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branch(&self, word: &Word) -> Option<&Branch> {
        self.branches.iter().find(|b| &b.word == word)
    }

    /// Membership in the full depth-`m` product.
    pub fn contains(&self, p: &CubePoint) -> bool {
        p.dim() == self.dim() && satisfies_relation(&self.pair, p)
    }

    /// Whether every branch of `other` lies inside some branch of `self`.
    pub fn covers(&self, other: &BranchSet) -> bool {
        if other.depth != self.depth {
            return false;
        }
        let by_word: HashMap<&Word, &Branch> = self.branches.iter().map(|b| (&b.word, b)).collect();
        other.branches.iter().all(|ob| {
            let host = by_word
                .get(&ob.word)
                .copied()
                .or_else(|| self.branches.iter().find(|b| b.direction == ob.direction));
            match host {
                Some(h) => h.direction == ob.direction && h.param_max >= ob.param_max,
                None => ob.param_max.is_zero(),
            }
        })
    }

    /// Origin plus `per_branch` evenly spaced points along every branch.
    pub fn sample_cloud(&self, per_branch: usize) -> PointCloud {
        let mut points = vec![CubePoint::origin(self.dim())];
        for b in &self.branches {
            points.extend(b.samples(per_branch));
        }
        PointCloud { points }
    }

    /// Whether every pair of distinct branches meets only at the origin.
    ///
    /// Two segments from the origin overlap beyond it exactly when their
    /// directions are positive multiples of each other, so it suffices to
    /// scale each direction to a leading 1 and look for repeats.
    pub fn branches_meet_only_at_origin(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.branches.len());
        self.branches.iter().all(|b| {
            let d = b.direction.as_slice();
            match d.iter().find(|v| !v.is_zero()) {
                Some(lead) => seen.insert(d.iter().map(|v| v / lead).collect::<Vec<_>>()),
                None => true,
            }
        })
    }
}

pub fn finite_mahavier(pair: &SlopePair, depth: usize) -> Result<BranchSet> {
    finite_mahavier_capped(pair, depth, DEFAULT_DEPTH_CAP)
}

pub fn finite_mahavier_capped(pair: &SlopePair, depth: usize, cap: usize) -> Result<BranchSet> {
    if depth < 1 || depth > cap {
        return Err(Error::DepthOutOfRange { depth, cap });
    }
    // Distinct words differ at their first differing symbol, so their
    // directions coincide only when r = ρ.
    let branches = if pair.r == pair.rho {
        let word = Word(vec![Symbol::R; depth]);
        vec![Branch::from_itinerary(&Itinerary::new(pair.clone(), word))]
    } else {
        let mut out = Vec::with_capacity(1 << depth);
        let mut word = Vec::with_capacity(depth);
        let mut products = vec![Rational::one()];
        grow(pair, depth, &mut word, &mut products, &mut out);
        out
    };
    Ok(BranchSet {
        pair: pair.clone(),
        depth,
        branches,
    })
}

fn grow(
    pair: &SlopePair,
    depth: usize,
    word: &mut Vec<Symbol>,
    products: &mut Vec<Rational>,
    out: &mut Vec<Branch>,
) {
    if word.len() == depth {
        let direction = PrefixProducts(products.clone());
        out.push(Branch {
            word: Word(word.clone()),
            param_max: param_of(&direction),
            direction,
        });
        return;
    }
    for s in [Symbol::R, Symbol::P] {
        let next = products.last().expect("nonempty") * s.factor(pair);
        word.push(s);
        products.push(next);
        grow(pair, depth, word, products, out);
        products.pop();
        word.pop();
    }
}

/// The shift map on a branch set: drops the first coordinate.
///
/// The branch of `c·a'` maps onto the initial piece `[0, T_{ca'}·c]` of the
/// branch of `a'`; the image branch for `a'` keeps the longer of its two
/// preimage pieces.
pub fn shift(bs: &BranchSet) -> Result<BranchSet> {
    if bs.depth < 2 {
        return Err(Error::Precondition(format!(
            "shift needs depth >= 2, got {}",
            bs.depth
        )));
    }
    let mut order: Vec<Word> = Vec::new();
    let mut images: HashMap<Word, Branch> = HashMap::new();
    for b in &bs.branches {
        let first = b.word.symbols()[0];
        let lead = first.factor(&bs.pair);
        let param = &b.param_max * lead;
        let tail = b.word.tail();
        let direction = PrefixProducts(
            b.direction.as_slice()[1..]
                .iter()
                .map(|d| d / lead)
                .collect(),
        );
        match images.get_mut(&tail) {
            Some(existing) => {
                if param > existing.param_max {
                    existing.param_max = param;
                }
            }
            None => {
                order.push(tail.clone());
                images.insert(
                    tail.clone(),
                    Branch {
                        word: tail,
                        param_max: param,
                        direction,
                    },
                );
            }
        }
    }
    order.sort();
    let branches = order
        .into_iter()
        .map(|w| images.remove(&w).expect("inserted above"))
        .collect();
    Ok(BranchSet {
        pair: bs.pair.clone(),
        depth: bs.depth - 1,
        branches,
    })
}

/// A point `x` of the depth-`(m+1)` product with `σ(x) = q`, if one exists.
pub fn shift_preimage(pair: &SlopePair, q: &CubePoint) -> Option<CubePoint> {
    let first = q.coord(1);
    [&pair.r, &pair.rho].into_iter().find_map(|s| {
        let x1 = first / s;
        if !x1.in_unit_interval() {
            return None;
        }
        let mut coords = Vec::with_capacity(q.dim() + 1);
        coords.push(x1);
        coords.extend(q.coords().iter().cloned());
        let p = CubePoint(coords);
        satisfies_relation(pair, &p).then_some(p)
    })
}

/// A planar segment from the origin to `end`, with every word projecting
/// onto it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectedSegment {
    pub end: PlanarPoint,
    pub words: Vec<Word>,
}

/// Image of every branch under the coordinate projection `(π_i, π_j)`,
/// 1-based, duplicates merged in first-seen order.
pub fn project(bs: &BranchSet, i: usize, j: usize) -> Result<Vec<ProjectedSegment>> {
    let max = bs.dim();
    for idx in [i, j] {
        if idx < 1 || idx > max {
            return Err(Error::IndexOutOfRange { index: idx, max });
        }
    }
    if i >= j {
        return Err(Error::Precondition(format!(
            "projection indices must satisfy i < j, got {i}, {j}"
        )));
    }
    let mut out: Vec<ProjectedSegment> = Vec::new();
    let mut seen: HashMap<PlanarPoint, usize> = HashMap::new();
    for b in &bs.branches {
        let e = b.endpoint();
        let end = (e.coord(i).clone(), e.coord(j).clone());
        match seen.get(&end) {
            Some(&k) => out[k].words.push(b.word.clone()),
            None => {
                seen.insert(end.clone(), out.len());
                out.push(ProjectedSegment {
                    end,
                    words: vec![b.word.clone()],
                });
            }
        }
    }
    Ok(out)
}

/// One endpoint per branch.
pub fn endpoints(bs: &BranchSet) -> PointCloud {
    PointCloud {
        points: bs.branches.iter().map(Branch::endpoint).collect(),
    }
}

/// `max_i 2^{−(i−1)}·|p_i − q_i|`.
pub fn cube_metric(p: &CubePoint, q: &CubePoint) -> Result<Rational> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let diff: Vec<Rational> = p
        .coords()
        .iter()
        .zip(q.coords())
        .map(|(a, b)| a - b)
        .collect();
    Ok(weighted_norm(&diff))
}

/// A finite set of cube points of one common dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCloud {
    pub points: Vec<CubePoint>,
}

impl PointCloud {
    pub fn new(points: Vec<CubePoint>) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|p| p.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    left: first.dim(),
                    right: bad.dim(),
                });
            }
        }
        Ok(PointCloud { points })
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(CubePoint::dim)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the first `dim` coordinates, merging duplicates in first-seen
    /// order.
    pub fn truncate(&self, dim: usize) -> PointCloud {
        let mut seen = HashSet::new();
        let points = self
            .points
            .iter()
            .map(|p| p.truncated(dim))
            .filter(|p| seen.insert(p.clone()))
            .collect();
        PointCloud { points }
    }

    /// Appends every admissible next coordinate `c·x_last`, `c ∈ {r, ρ}`,
    /// that stays within `[0, 1]`.
    pub fn lift(&self, pair: &SlopePair) -> PointCloud {
        let mut points = Vec::with_capacity(self.points.len() * 2);
        for p in &self.points {
            let last = p.coords().last().expect("nonempty point");
            let a = last * &pair.r;
            let b = last * &pair.rho;
            for (k, next) in [a.clone(), b.clone()].into_iter().enumerate() {
                if k == 1 && next == a {
                    continue;
                }
                if next.in_unit_interval() {
                    let mut c = p.coords().to_vec();
                    c.push(next);
                    points.push(CubePoint(c));
                }
            }
        }
        PointCloud { points }
    }
}

/// Hausdorff distance between two finite clouds under [`cube_metric`], by
/// exhaustive pairwise comparison.
///
/// All coordinates are first scaled to integers over a common denominator,
/// with the metric weights folded in, so the inner loop compares integers.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<Rational> {
    let (da, db) = match (a.dim(), b.dim()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::Empty("point cloud")),
    };
    if da != db {
        return Err(Error::DimensionMismatch {
            left: da,
            right: db,
        });
    }
    let dim = da;
    let mut lcm = BigInt::one();
    for p in a.points.iter().chain(&b.points) {
        for c in p.coords() {
            lcm = lcm.lcm(c.denom());
        }
    }
    let scale = &lcm << (dim - 1);
    let scaled = |cloud: &PointCloud| -> Vec<Vec<BigInt>> {
        cloud
            .points
            .iter()
            .map(|p| {
                p.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.numer() * (&lcm / c.denom())) << (dim - 1 - i))
                    .collect()
            })
            .collect()
    };
    let sa = scaled(a);
    let sb = scaled(b);
    let fits = sa.iter().chain(&sb).flatten().all(|v| v.abs().bits() < 125);
    let d = if fits {
        let to_small = |s: &Vec<Vec<BigInt>>| -> Vec<Vec<i128>> {
            s.iter()
                .map(|p| p.iter().map(|v| v.to_i128().expect("fits")).collect())
                .collect()
        };
        let (ia, ib) = (to_small(&sa), to_small(&sb));
        let dist = |x: &[i128], y: &[i128]| {
            x.iter()
                .zip(y)
                .map(|(u, v)| (u - v).abs())
                .max()
                .unwrap_or(0)
        };
        BigInt::from(directed(&ia, &ib, dist).max(directed(&ib, &ia, dist)))
    } else {
        let dist = |x: &[BigInt], y: &[BigInt]| {
            x.iter()
                .zip(y)
                .map(|(u, v)| (u - v).abs())
                .max()
                .unwrap_or_default()
        };
        directed(&sa, &sb, dist).max(directed(&sb, &sa, dist))
    };
    Rational::from_bigints(d, scale)
}

/// `H(lift(A_m), A_{m+1})` where `A_{m+1}` samples the depth-`(m+1)` product
/// and `A_m` is its truncation to depth `m`. Comparing a truncation against
/// its own source keeps every lifted point on the relation; at most
/// `2^{−(m+1)}` since only the last coordinate can differ.
pub fn depth_convergence_gap(pair: &SlopePair, m: usize, per_branch: usize) -> Result<Rational> {
    let deeper = finite_mahavier(pair, m + 1)?.sample_cloud(per_branch);
    let lifted = deeper.truncate(m + 1).lift(pair);
    hausdorff(&lifted, &deeper)
}

/// `max_{x∈A} min_{y∈B} dist(x, y)`.
///
/// A row stops scanning once it finds a candidate no farther than the
/// running maximum, since it can no longer raise it. Each row starts where
/// the previous row found its nearest neighbour; clouds emitted in word
/// order keep neighbours close in index.
fn directed<T, F>(a: &[Vec<T>], b: &[Vec<T>], dist: F) -> T
where
    T: Ord + Clone + Default,
    F: Fn(&[T], &[T]) -> T,
{
    let mut best: Option<T> = None;
    let mut hint = 0usize;
    for x in a {
        let mut row_min: Option<T> = None;
        let start = hint;
        for step in 0..b.len() {
            let j = (start + step) % b.len();
            let d = dist(x, &b[j]);
            if row_min.as_ref().is_none_or(|m| d < *m) {
                row_min = Some(d.clone());
                hint = j;
            }
            if best.as_ref().is_some_and(|m| d <= *m) {
                break;
            }
        }
        let row_min = row_min.unwrap_or_default();
        if best.as_ref().is_none_or(|m| row_min > *m) {
            best = Some(row_min);
        }
    }
    best.unwrap_or_default()
}

/// An approximate endpoint agreeing with a given point on a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointCertificate {
    pub point: CubePoint,
    /// Full word of the branch carrying `point`.
    pub word: Word,
    /// The untruncated continuation produced for `x = p_n`.
    pub continuation: Word,
    pub distance: Rational,
}

/// Replaces the coordinates of `p` after position `n` by the orbit of
/// `x = p_n` along a word whose prefix values climb to within `ε` of 1.
/// The result lies in the branch set, agrees with `p` on its first `n`
/// coordinates, and so is within `2^{−n}` of `p`.
pub fn endpoint_certificate(
    bs: &BranchSet,
    pair: &NeverConnect,
    p: &CubePoint,
    n: usize,
    epsilon: &Rational,
    budget: u64,
) -> Result<EndpointCertificate> {
    if pair.pair() != &bs.pair {
        return Err(Error::Precondition("branch set and pair disagree".into()));
    }
    if !bs.contains(p) {
        return Err(Error::NotOnBranch);
    }
    if n < 1 || n > bs.depth {
        return Err(Error::OutOfRange {
            what: "agreement depth",
            value: n.to_string(),
            expected: "within 1..=depth",
        });
    }
    let x = p.coord(n).clone();
    if x.is_zero() {
        return Err(Error::Precondition(format!(
            "coordinate {n} of the point is 0"
        )));
    }
    let continuation = if x.is_one() {
        Word::empty()
    } else {
        build_sup_itinerary(pair, &x, epsilon, budget)?.word
    };

    let mut word = Word::empty();
    for w in p.coords()[..n].windows(2) {
        word.push(if w[1] == &w[0] * &pair.r {
            Symbol::R
        } else {
            Symbol::P
        });
    }
    let need = bs.depth + 1 - n;
    let mut coords = p.coords()[..n].to_vec();
    let mut v = x;
    for i in 0..need {
        let s = continuation.symbols().get(i).copied().unwrap_or(Symbol::R);
        v = &v * s.factor(pair);
        coords.push(v.clone());
        word.push(s);
    }
    let point = CubePoint::new(coords)?;
    debug_assert!(bs.contains(&point));
    let distance = cube_metric(p, &point)?;
    Ok(EndpointCertificate {
        point,
        word,
        continuation,
        distance,
    })
}
