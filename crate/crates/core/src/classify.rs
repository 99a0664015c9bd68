//! Fan-kind decision procedure for `L_{r,ρ}` and finite-depth audits.
//!
//! After ordering the slopes so that `r ≤ ρ` the cases are:
//!
//! | case | condition                      | kind                  |
//! |------|--------------------------------|-----------------------|
//! | 1a   | `r = ρ ≤ 1`                    | arc                   |
//! | 1b   | `r = ρ > 1`                    | single point          |
//! | 2a   | `1 < r < ρ`                    | single point          |
//! | 2b   | `r < ρ ≤ 1`                    | Cantor fan            |
//! | 2c   | `r = 1 < ρ`                    | countable smooth fan  |
//! | 2d   | `r < 1 < ρ`, independent       | Lelek fan             |
//! | 2e   | `r < 1 < ρ`, `r^k = ρ^ℓ`       | open                  |
//!
//! Everything is decided symbolically; the finite-depth witnesses attached to
//! a report are illustrations, never inputs to the verdict.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    multiplicative_dependence, ExponentPair, NeverConnect, PrimeBound, Rational, SlopePair,
};
use crate::itinerary::Symbol;
use crate::mahavier::{
    branch_diameter, cube_metric, endpoint_certificate, endpoints, finite_mahavier, CubePoint,
    PointCloud,
};

/// Depth at which [`classify`] samples endpoints for its witness.
pub const REFERENCE_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FanKind {
    SinglePoint,
    Arc,
    CantorFan,
    CountableSmoothFan,
    LelekFan,
    DependentOpenCase,
}

impl fmt::Display for FanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    /// The ramification point, when the limit is a fan with one.
    pub top: Option<CubePoint>,
    pub top_note: String,
    pub reference_depth: usize,
    pub branch_count: usize,
    /// Largest branch parameter at the reference depth.
    pub max_branch_param: Rational,
    pub sample_endpoints: PointCloud,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterRow {
    /// Number of `ρ`-symbols in the word.
    pub p_symbols: usize,
    pub branches: usize,
    pub max_diameter: Rational,
    pub bound: Rational,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureWitness {
    pub depth: usize,
    pub branch_count: usize,
    pub distinct_endpoints: usize,
    /// Every pair of branches meets exactly at the origin.
    pub origin_only_intersections: bool,
    pub endpoints: PointCloud,
    /// Only filled in for [`FanKind::CountableSmoothFan`].
    pub diameter_table: Vec<DiameterRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub kind: FanKind,
    pub normalized_pair: SlopePair,
    pub dependence: Option<ExponentPair>,
    pub citations: Vec<String>,
    pub witnesses: Witnesses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureWitness>,
}

/// `r ≤ ρ`.
fn normalize(pair: &SlopePair) -> SlopePair {
    if pair.r <= pair.rho {
        pair.clone()
    } else {
        SlopePair {
            r: pair.rho.clone(),
            rho: pair.r.clone(),
        }
    }
}

fn decide(
    pair: &SlopePair,
    bound: PrimeBound,
) -> Result<(FanKind, Option<ExponentPair>, Vec<String>)> {
    let one = Rational::one();
    let (r, rho) = (&pair.r, &pair.rho);
    let cite = |s: &str| vec![s.to_string()];
    let out = if r == rho {
        if *r <= one {
            (
                FanKind::Arc,
                None,
                cite("case 1a: r = rho <= 1, an arc from the origin to (1, r, r^2, ...)"),
            )
        } else {
            (
                FanKind::SinglePoint,
                None,
                cite("case 1b: r = rho > 1, only the origin survives"),
            )
        }
    } else if *r > one {
        (
            FanKind::SinglePoint,
            None,
            cite("case 2a: both slopes exceed 1, only the origin survives"),
        )
    } else if *rho <= one {
        (
            FanKind::CantorFan,
            None,
            cite("case 2b: both slopes at most 1, a Cantor fan"),
        )
    } else if r.is_one() {
        (
            FanKind::CountableSmoothFan,
            None,
            cite("case 2c: r = 1 < rho, a countable union of fans shrinking to the top"),
        )
    } else {
        match multiplicative_dependence(pair, bound)? {
            None => (
                FanKind::LelekFan,
                None,
                vec![
                    "case 2d: r < 1 < rho with r, rho multiplicatively independent".into(),
                    "never-connect pair: endpoints are dense, a Lelek fan".into(),
                ],
            ),
            Some(e) => (
                FanKind::DependentOpenCase,
                Some(e),
                vec![
                    format!("case 2e: r < 1 < rho with r^{} = rho^{}", e.k, e.l),
                    "open problem: the homeomorphism type for dependent pairs is not known".into(),
                ],
            ),
        }
    };
    Ok(out)
}

fn top_of(kind: FanKind, dim: usize) -> (Option<CubePoint>, String) {
    match kind {
        FanKind::SinglePoint => (
            None,
            "degenerate: the product is the single point at the origin".into(),
        ),
        FanKind::Arc => (None, "an arc has no ramification point".into()),
        FanKind::DependentOpenCase => (
            Some(CubePoint::origin(dim)),
            "all branches meet at the origin; the limit type is open".into(),
        ),
        _ => (Some(CubePoint::origin(dim)), "top at the origin".into()),
    }
}

/// Decides the fan kind of `L_{r,ρ}` in exact arithmetic.
pub fn classify(pair: &SlopePair, bound: PrimeBound) -> Result<ClassificationReport> {
    let normalized = normalize(pair);
    let (kind, dependence, citations) = decide(&normalized, bound)?;
    let bs = finite_mahavier(&normalized, REFERENCE_DEPTH)?;
    let (top, top_note) = top_of(kind, bs.dim());
    let max_branch_param = bs
        .branches
        .iter()
        .map(|b| &b.param_max)
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    Ok(ClassificationReport {
        kind,
        normalized_pair: normalized,
        dependence,
        citations,
        witnesses: Witnesses {
            top,
            top_note,
            reference_depth: REFERENCE_DEPTH,
            branch_count: bs.len(),
            max_branch_param,
            sample_endpoints: endpoints(&bs),
        },
        structure: None,
    })
}

/// `D_n = max_{j=0..n} 1 / (2^j ρ^{n−j})`, the diameter bound for branches
/// with `n` occurrences of `ρ` when `r = 1`.
pub fn countable_fan_bound(rho: &Rational, n: usize) -> Rational {
    let two = Rational::integer(2);
    let n = n as i64;
    (0..=n)
        .map(|j| (two.pow(j) * rho.pow(n - j)).recip())
        .max()
        .expect("n >= 0")
}

/// [`classify`] plus depth-`m` structure: pairwise branch intersections,
/// the endpoint cloud and, for `r = 1 < ρ`, the diameter table.
pub fn structure_report(
    pair: &SlopePair,
    depth: usize,
    bound: PrimeBound,
) -> Result<ClassificationReport> {
    let mut report = classify(pair, bound)?;
    let bs = finite_mahavier(&report.normalized_pair, depth)?;
    let ends = endpoints(&bs);
    let distinct_endpoints = ends.truncate(bs.dim()).len();
    let mut diameter_table = Vec::new();
    if report.kind == FanKind::CountableSmoothFan {
        let mut rows: Vec<(usize, Rational)> = vec![(0, Rational::zero()); depth + 1];
        for b in &bs.branches {
            let row = &mut rows[b.word.count(Symbol::P)];
            row.0 += 1;
            let d = branch_diameter(b);
            if d > row.1 {
                row.1 = d;
            }
        }
        diameter_table = rows
            .into_iter()
            .enumerate()
            .map(|(n, (branches, max_diameter))| {
                let bound = countable_fan_bound(&report.normalized_pair.rho, n);
                DiameterRow {
                    p_symbols: n,
                    branches,
                    within: max_diameter <= bound,
                    max_diameter,
                    bound,
                }
            })
            .collect();
    }
    report.structure = Some(StructureWitness {
        depth,
        branch_count: bs.len(),
        distinct_endpoints,
        origin_only_intersections: bs.branches_meet_only_at_origin(),
        endpoints: ends,
        diameter_table,
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditSample {
    pub word: String,
    /// Position along the branch as a fraction of its parameter range.
    pub fraction: Rational,
    pub point: CubePoint,
    pub certificate: CubePoint,
    pub distance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub pair: SlopePair,
    pub depth: usize,
    pub agreement_depth: usize,
    pub tolerance: Rational,
    pub seed: u64,
    pub samples: Vec<AuditSample>,
    pub skipped: Vec<String>,
    pub max_distance: Rational,
    pub passed: bool,
}

/// Tuning for [`lelek_density_audit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConfig {
    pub depth: usize,
    pub samples: usize,
    pub agreement_depth: usize,
    pub epsilon: Rational,
    pub budget: u64,
    pub seed: u64,
    pub bound: PrimeBound,
}

impl AuditConfig {
    pub fn new(depth: usize, samples: usize, agreement_depth: usize) -> Self {
        AuditConfig {
            depth,
            samples,
            agreement_depth,
            epsilon: Rational::new(1, 100),
            budget: 10_000,
            seed: 0,
            bound: PrimeBound::DEFAULT,
        }
    }
}

/// Positions along a branch are `s / SAMPLE_GRID` of its parameter range.
const SAMPLE_GRID: i64 = 256;

/// Samples points on random branches of the depth-`m` product and, for each,
/// builds an endpoint agreeing with it on the first `n` coordinates. Passes
/// iff every certificate is within `2^{−n}`. The origin is skipped: it has no
/// positive coordinate to continue from.
pub fn lelek_density_audit(pair: &SlopePair, cfg: &AuditConfig) -> Result<AuditRecord> {
    let report = classify(pair, cfg.bound)?;
    if report.kind != FanKind::LelekFan {
        return Err(Error::WrongKind {
            expected: FanKind::LelekFan.to_string(),
            found: report.kind.to_string(),
        });
    }
    let n = cfg.agreement_depth;
    if n > cfg.depth {
        return Err(Error::OutOfRange {
            what: "agreement depth",
            value: n.to_string(),
            expected: "at most the depth",
        });
    }
    let nc = NeverConnect::new(report.normalized_pair.clone(), cfg.bound)?;
    let bs = finite_mahavier(nc.pair(), cfg.depth)?;
    let tolerance = Rational::new(1, 2).pow(n as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::with_capacity(cfg.samples);
    let mut skipped = Vec::new();
    for _ in 0..cfg.samples {
        let b = &bs.branches[rng.gen_range(0..bs.len())];
        let fraction = Rational::new(rng.gen_range(0..=SAMPLE_GRID), SAMPLE_GRID);
        let point = b.point_at(&(&b.param_max * &fraction));
        if point.is_origin() {
            skipped.push(format!("origin sample on branch {}", b.word));
            continue;
        }
        let (certificate, distance) = if n == 0 {
            let end = b.endpoint();
            let d = cube_metric(&point, &end)?;
            (end, d)
        } else {
            let c = endpoint_certificate(&bs, &nc, &point, n, &cfg.epsilon, cfg.budget)?;
            (c.point, c.distance)
        };
        samples.push(AuditSample {
            word: b.word.to_string(),
            fraction,
            point,
            certificate,
            distance,
        });
    }
    let max_distance = samples
        .iter()
        .map(|s| &s.distance)
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    Ok(AuditRecord {
        pair: nc.pair().clone(),
        depth: cfg.depth,
        agreement_depth: n,
        passed: max_distance <= tolerance,
        tolerance,
        seed: cfg.seed,
        samples,
        skipped,
        max_distance,
    })
}
