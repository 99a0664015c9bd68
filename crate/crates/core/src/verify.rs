//! The invariant suite run by `lelek verify`: one named check per property,
//! evaluated for a single slope pair at desk scale.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{classify, lelek_density_audit, structure_report, AuditConfig, FanKind};
use crate::error::Result;
use crate::exactnum::{multiplicative_dependence, NeverConnect, PrimeBound, Rational, SlopePair};
use crate::itinerary::{build_sup_itinerary, endpoint_vector, prefix_products, Itinerary, Word};
use crate::mahavier::{
    cube_metric, depth_convergence_gap, endpoints, finite_mahavier, hausdorff, satisfies_relation,
    shift, shift_preimage, CubePoint, PointCloud,
};
use crate::orbits::{enumerate_orbit, find_exponents, greedy_orbit, max_gap, OrbitClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub depth: usize,
    pub orbit_bound: u32,
    pub epsilon: Rational,
    pub samples: usize,
    pub budget: u64,
    pub seed: u64,
    pub prime_bound: PrimeBound,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            depth: 8,
            orbit_bound: 32,
            epsilon: Rational::new(1, 100),
            samples: 64,
            budget: 10_000,
            seed: 0,
            prime_bound: PrimeBound::DEFAULT,
        }
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

/// Runs every applicable check. Checks that only make sense for
/// never-connect pairs are skipped (not failed) for other pairs.
pub fn run_all(pair: &SlopePair, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut s = Suite { checks: Vec::new() };
    let report = classify(pair, cfg.prime_bound)?;
    let norm = report.normalized_pair.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let swapped = classify(&pair.swapped(), cfg.prime_bound)?.kind;
    s.record(
        "classify.swap_invariance",
        swapped == report.kind,
        format!("{} both ways", report.kind),
    );

    if !norm.r.is_one() && !norm.rho.is_one() {
        let dep = multiplicative_dependence(&norm, cfg.prime_bound)?;
        let ok = match dep {
            Some(e) => norm.r.pow(e.k) == norm.rho.pow(e.l),
            None => (-12i64..=12)
                .flat_map(|k| (-12i64..=12).map(move |l| (k, l)))
                .filter(|&(k, l)| (k, l) != (0, 0))
                .all(|(k, l)| !norm.power_product(k, l).is_one()),
        };
        s.record("exactnum.dependence_relation", ok, format!("{dep:?}"));
    }

    let classes = OrbitClass::ALL;
    let (lo, hi) = (Rational::new(1, 10), Rational::one());
    if !norm.r.is_one() && !norm.rho.is_one() {
        let w = enumerate_orbit(&norm, &classes, cfg.orbit_bound, &lo, &hi)?;
        let sorted = w.entries.windows(2).all(|p| p[0].value <= p[1].value);
        let in_range = w.values().all(|v| *v >= lo && *v <= hi);
        let classed = w.entries.iter().all(|e| {
            OrbitClass::of(e.exponents.k, e.exponents.l) == e.klass
                && norm.power_product(e.exponents.k, e.exponents.l) == e.value
        });
        s.record(
            "orbits.window_sorted_in_range",
            sorted && in_range && classed,
            format!("{} entries", w.len()),
        );

        let mut gaps = Vec::new();
        for n in [8u32, 16, 32] {
            let w = enumerate_orbit(&norm, &[OrbitClass::B1], n, &lo, &hi)?;
            if w.len() >= 2 {
                gaps.push(max_gap(&w)?);
            }
        }
        let monotone = gaps.windows(2).all(|g| g[1] <= g[0]);
        s.record("orbits.gap_non_increasing", monotone, format!("{gaps:?}"));
    }

    let nc = NeverConnect::new(norm.clone(), cfg.prime_bound).ok();
    match &nc {
        Some(nc) => {
            let z = greedy_orbit(&norm, 2000)?;
            let floor = &norm.r / &norm.rho;
            let ok = z.iter().all(|v| *v >= floor && *v <= Rational::one());
            s.record(
                "orbits.greedy_within_bounds",
                ok,
                format!("{} terms in [{floor}, 1]", z.len()),
            );

            let mut ok = true;
            for _ in 0..10 {
                let x = Rational::new(rng.gen_range(1..1000), 1000);
                for n in 1..=10i64 {
                    let eps = Rational::new(1, n + 1);
                    let e = find_exponents(nc, &x, &eps, cfg.budget)?;
                    let v = &x * norm.power_product(e.k, e.l);
                    ok &= e.k >= 0 && e.l >= 0 && v < Rational::one() && v > Rational::one() - &eps;
                }
            }
            s.record(
                "orbits.find_exponents_window",
                ok,
                "10 random x, eps = 1/(n+1), n = 1..10",
            );

            let mut ok = true;
            for _ in 0..10 {
                let x = Rational::new(rng.gen_range(1..1000), 1000);
                let it = build_sup_itinerary(nc, &x, &cfg.epsilon, cfg.budget)?;
                let vals: Vec<Rational> = prefix_products(&it)
                    .as_slice()
                    .iter()
                    .map(|p| &x * p)
                    .collect();
                let max = vals.iter().max().expect("P_0 present");
                ok &= vals.iter().all(Rational::in_unit_interval)
                    && *max >= Rational::one() - &cfg.epsilon;
            }
            s.record(
                "itinerary.sup_postconditions",
                ok,
                format!("10 random x, eps = {}", cfg.epsilon),
            );
        }
        None => s.record(
            "orbits.never_connect_checks",
            true,
            "skipped: pair is not never-connect",
        ),
    }

    let mut ok = true;
    for len in 0..=6usize {
        for w in Word::all(len) {
            let ev = endpoint_vector(&Itinerary::new(norm.clone(), w));
            let p = CubePoint::new(ev.coords.clone())?;
            ok &= satisfies_relation(&norm, &p) && ev.coords.iter().max() == Some(&Rational::one());
        }
    }
    s.record(
        "itinerary.endpoint_vectors",
        ok,
        "all words up to length 6 reach 1 and respect the relation",
    );

    let m = cfg.depth;
    let bs = finite_mahavier(&norm, m)?;
    let expected = if norm.r == norm.rho { 1 } else { 1usize << m };
    s.record(
        "mahavier.branch_count",
        bs.len() == expected,
        format!("{} branches at depth {m}", bs.len()),
    );

    let cloud = bs.sample_cloud(8);
    let ok = cloud.points.iter().all(|p| bs.contains(p));
    s.record(
        "mahavier.membership",
        ok,
        format!("{} sampled points", cloud.len()),
    );

    let ok = bs.branches.iter().all(|b| {
        let mid = b.point_at(&(&b.param_max * Rational::new(1, 2)));
        let halved: Vec<Rational> = b
            .endpoint()
            .coords()
            .iter()
            .map(|c| c * Rational::new(1, 2))
            .collect();
        bs.contains(&mid) && mid.coords() == halved.as_slice()
    });
    s.record(
        "mahavier.branches_straight",
        ok,
        "midpoint of each branch lies on it",
    );

    s.record(
        "mahavier.origin_only_intersections",
        bs.branches_meet_only_at_origin(),
        "pairwise",
    );

    let distinct = endpoints(&bs).truncate(bs.dim()).len();
    if norm.r == norm.rho {
        s.record(
            "mahavier.endpoint_count",
            distinct == 1,
            format!("{distinct} endpoints"),
        );
    } else if norm.rho < Rational::one() {
        s.record(
            "mahavier.endpoint_count",
            distinct == 1 << m,
            format!("{distinct} endpoints"),
        );
    }

    if m >= 2 {
        let lower = finite_mahavier(&norm, m - 1)?;
        let image = shift(&bs)?;
        let into = lower.covers(&image)
            && cloud
                .points
                .iter()
                .all(|p| lower.contains(&p.shifted().expect("dim >= 2")));
        s.record(
            "mahavier.shift_into",
            into,
            format!("depth {m} into depth {}", m - 1),
        );
        let lower_cloud = lower.sample_cloud(8);
        let onto = image.covers(&lower)
            && lower_cloud
                .points
                .iter()
                .chain(&endpoints(&lower).points)
                .all(|q| shift_preimage(&norm, q).is_some_and(|p| bs.contains(&p)));
        if norm.rho >= Rational::one() {
            s.record(
                "mahavier.shift_onto",
                onto,
                format!("depth {m} onto depth {}", m - 1),
            );
        } else {
            s.record(
                "mahavier.shift_onto",
                !onto,
                "both slopes below 1: the first coordinate of an image is at most rho, so not onto",
            );
        }
    }

    let mut ok = true;
    for _ in 0..30 {
        let [a, b, c] = [0; 3].map(|_| random_cloud(&mut rng));
        let (ab, ba) = (hausdorff(&a, &b)?, hausdorff(&b, &a)?);
        let (bc, ac) = (hausdorff(&b, &c)?, hausdorff(&a, &c)?);
        ok &= hausdorff(&a, &a)?.is_zero() && ab == ba && ac <= &ab + &bc;
        let (sa, sb): (HashSet<_>, HashSet<_>) =
            (a.points.iter().collect(), b.points.iter().collect());
        ok &= ab.is_zero() == (sa == sb);
    }
    s.record("mahavier.hausdorff_axioms", ok, "30 random triples");

    let mut ok = true;
    let mut detail = Vec::new();
    for k in 1..m.min(6) {
        let gap = depth_convergence_gap(&norm, k, 4)?;
        ok &= gap <= Rational::new(1, 2).pow(k as i64 + 1);
        detail.push(format!("m={k}: {gap}"));
    }
    s.record("mahavier.depth_convergence", ok, detail.join(", "));

    let mut ok = true;
    for (p, q) in cloud.points.iter().zip(cloud.points.iter().skip(1)) {
        ok &= cube_metric(p, q)? == cube_metric(q, p)?;
    }
    s.record("mahavier.metric_symmetric", ok, "consecutive samples");

    if report.kind == FanKind::CountableSmoothFan {
        let st = structure_report(pair, m, cfg.prime_bound)?;
        let table = st
            .structure
            .expect("set by structure_report")
            .diameter_table;
        let ok = table.iter().all(|r| r.within);
        s.record(
            "classify.countable_fan_diameters",
            ok,
            format!("{} rows", table.len()),
        );
    }

    if report.kind == FanKind::LelekFan && m >= 2 {
        let n = m - 2;
        let mut acfg = AuditConfig::new(m, cfg.samples, n);
        acfg.epsilon = cfg.epsilon.clone();
        acfg.budget = cfg.budget;
        acfg.seed = cfg.seed;
        acfg.bound = cfg.prime_bound;
        let rec = lelek_density_audit(pair, &acfg)?;
        s.record(
            "classify.lelek_density_audit",
            rec.passed,
            format!("max distance {} vs {}", rec.max_distance, rec.tolerance),
        );
    }

    Ok(s.checks)
}

fn random_cloud(rng: &mut ChaCha8Rng) -> PointCloud {
    let n = rng.gen_range(1..6);
    let points = (0..n)
        .map(|_| {
            let coords = (0..3)
                .map(|_| Rational::new(rng.gen_range(0..=12), 12))
                .collect();
            CubePoint::new(coords).expect("coordinates in [0, 1]")
        })
        .collect();
    PointCloud::new(points).expect("common dimension")
}
