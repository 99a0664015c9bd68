//! Acceptance suite: twelve end-to-end criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so that every criterion is
//! reported even when an earlier one fails. Each criterion also has a
//! wall-clock limit; exceeding it counts as a failure.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lelek_core::classify::{countable_fan_bound, AuditConfig};
use lelek_core::mahavier::{
    branch_diameter, depth_convergence_gap, endpoints, shift_preimage, PointCloud,
};
use lelek_core::orbits::nowhere_tail_count;
use lelek_core::{
    between_witness, build_sup_itinerary, classify, enumerate_orbit, find_exponents,
    finite_mahavier, greedy_orbit, hausdorff, is_never_connect, lelek_density_audit, max_gap,
    prefix_products, shift, CubePoint, ExponentPair, FanKind, NeverConnect, OrbitClass, PrimeBound,
    Rational, SlopePair, Symbol,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, wall-clock limit in seconds, body.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn pair(r: &str, rho: &str) -> SlopePair {
    SlopePair::parse(r, rho).unwrap()
}

fn nc(r: &str, rho: &str) -> NeverConnect {
    NeverConnect::new(pair(r, rho), PrimeBound::DEFAULT).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(2..1_000_000i64);
    Rational::new(rng.gen_range(1..den), den)
}

/// Never-connect pairs with small numerators and denominators.
fn random_nc_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<NeverConnect> {
    let mut out: Vec<NeverConnect> = Vec::new();
    while out.len() < count {
        let b = rng.gen_range(2..30i64);
        let r = Rational::new(rng.gen_range(1..b), b);
        let d = rng.gen_range(1..30i64);
        let rho = Rational::new(rng.gen_range(d + 1..4 * d + 2), d);
        let p = SlopePair::new(r, rho).unwrap();
        if p == pair("1/2", "3") || out.iter().any(|o| o.pair() == &p) {
            continue;
        }
        if is_never_connect(&p, PrimeBound::DEFAULT).unwrap() {
            out.push(NeverConnect::new(p, PrimeBound::DEFAULT).unwrap());
        }
    }
    out
}

fn c1_classification_table() -> Outcome {
    let table = [
        ("1/2", "1/2", FanKind::Arc),
        ("2", "3", FanKind::SinglePoint),
        ("1/2", "1/3", FanKind::CantorFan),
        ("1", "3", FanKind::CountableSmoothFan),
        ("1/2", "3", FanKind::LelekFan),
        ("1/4", "8", FanKind::DependentOpenCase),
    ];
    for (r, rho, want) in table {
        let rep = classify(&pair(r, rho), PrimeBound::DEFAULT).map_err(|e| e.to_string())?;
        ensure(rep.kind == want, || {
            format!("({r}, {rho}) gave {}, expected {want}", rep.kind)
        })?;
        let swapped = classify(&pair(rho, r), PrimeBound::DEFAULT).map_err(|e| e.to_string())?;
        ensure(swapped.kind == want, || {
            format!("({rho}, {r}) not swap invariant")
        })?;
    }
    let dep = classify(&pair("1/4", "8"), PrimeBound::DEFAULT).map_err(|e| e.to_string())?;
    ensure(dep.dependence == Some(ExponentPair::new(3, -2)), || {
        format!("dependence {:?}, expected (3, -2)", dep.dependence)
    })?;
    Ok("6 exemplar pairs, both orders".into())
}

fn c2_greedy_orbit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pairs = vec![nc("1/2", "3")];
    pairs.extend(random_nc_pairs(&mut rng, 10));
    for p in &pairs {
        let z = greedy_orbit(p.pair(), 10_000).map_err(|e| e.to_string())?;
        let floor = &p.r / &p.rho;
        ensure(z.len() == 10_000, || "wrong length".into())?;
        if let Some((i, v)) = z
            .iter()
            .enumerate()
            .find(|(_, v)| **v < floor || **v > Rational::one())
        {
            return Err(format!(
                "{}: z_{} = {v} outside [{floor}, 1]",
                p.pair(),
                i + 1
            ));
        }
    }
    Ok(format!("{} pairs x 10000 terms", pairs.len()))
}

fn c3_find_exponents() -> Outcome {
    let p = nc("1/2", "3");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_k = 0;
    for _ in 0..100 {
        let x = random_unit(&mut rng);
        for n in 1..=30i64 {
            let eps = Rational::new(1, n + 1);
            let e = find_exponents(&p, &x, &eps, 10_000)
                .map_err(|e| format!("x = {x}, n = {n}: {e}"))?;
            let v = &x * p.power_product(e.k, e.l);
            ensure(e.k >= 0 && e.l >= 0, || format!("negative exponents {e}"))?;
            ensure(v > Rational::one() - &eps && v < Rational::one(), || {
                format!("x = {x}, n = {n}: {v} outside window")
            })?;
            max_k = max_k.max(e.k);
        }
    }
    Ok(format!("3000 searches, largest k = {max_k}"))
}

fn c4_sup_itinerary() -> Outcome {
    let p = nc("1/2", "3");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut longest = 0;
    for _ in 0..100 {
        let x = random_unit(&mut rng);
        for eps in ["1/4", "1/16", "1/100"].map(q) {
            let it = build_sup_itinerary(&p, &x, &eps, 10_000).map_err(|e| e.to_string())?;
            let vals: Vec<Rational> = prefix_products(&it)
                .as_slice()
                .iter()
                .map(|v| &x * v)
                .collect();
            ensure(vals.iter().all(Rational::in_unit_interval), || {
                format!("x = {x}, eps = {eps}: prefix left [0, 1]")
            })?;
            let max = vals.iter().max().unwrap();
            ensure(*max >= Rational::one() - &eps, || {
                format!("x = {x}, eps = {eps}: max {max}")
            })?;
            longest = longest.max(it.len());
        }
    }
    Ok(format!("300 itineraries, longest word {longest}"))
}

/// Frozen from a brute-force enumeration of `2^{-k} 3^l` over the window.
const GAP_THRESHOLD: (i64, i64) = (1, 40);

fn c5_density_trend() -> Outcome {
    let p = pair("1/2", "3");
    let frozen = [
        (8u32, q("15/128")),
        (16, q("81/1024")),
        (32, q("3159/65536")),
        (64, q("1738366812781/70368744177664")),
    ];
    let mut prev: Option<Rational> = None;
    let mut below_at = None;
    let threshold = Rational::new(GAP_THRESHOLD.0, GAP_THRESHOLD.1);
    for (n, want) in &frozen {
        let w = enumerate_orbit(&p, &[OrbitClass::B1], *n, &q("1/10"), &q("1"))
            .map_err(|e| e.to_string())?;
        let g = max_gap(&w).map_err(|e| e.to_string())?;
        ensure(&g == want, || format!("N = {n}: gap {g}, oracle {want}"))?;
        if let Some(pg) = &prev {
            ensure(g <= *pg, || format!("gap grew at N = {n}"))?;
        }
        if below_at.is_none() && g < threshold {
            below_at = Some(*n);
        }
        prev = Some(g);
    }
    let n = below_at.ok_or_else(|| format!("never below {threshold}"))?;
    Ok(format!("non-increasing, below {threshold} at N = {n}"))
}

fn c6_between() -> Outcome {
    let p = nc("1/2", "3");
    let w = enumerate_orbit(p.pair(), &[OrbitClass::B2], 6, &q("1/1000"), &q("1000"))
        .map_err(|e| e.to_string())?;
    ensure(w.len() == 36, || {
        format!("{} B2 entries, expected 36", w.len())
    })?;
    let mut count = 0;
    for (i, x) in w.entries.iter().enumerate() {
        for y in &w.entries[i + 1..] {
            let b = between_witness(&p, x, y, 10_000).map_err(|e| e.to_string())?;
            ensure(
                b.klass == OrbitClass::B1 && b.value > x.value && b.value < y.value,
                || {
                    format!(
                        "witness {} not strictly inside ({}, {})",
                        b.value, x.value, y.value
                    )
                },
            )?;
            ensure(
                b.value == p.power_product(b.exponents.k, b.exponents.l),
                || "value mismatch".into(),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} B2 pairs"))
}

fn c7_nowhere() -> Outcome {
    let p = pair("1/2", "3");
    let mut counts = Vec::new();
    for x in ["1/2", "1", "2"].map(q) {
        let a = nowhere_tail_count(&p, OrbitClass::B3, &x, 64).map_err(|e| e.to_string())?;
        let b = nowhere_tail_count(&p, OrbitClass::B3, &x, 128).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("x = {x}: {a} at N = 64, {b} at N = 128"))?;
        counts.push(format!("{x}: {a}"));
    }
    Ok(format!("stable counts {}", counts.join(", ")))
}

fn c8_structure() -> Outcome {
    let p = pair("1/2", "3");
    let mut prev = None;
    for m in 1..=10usize {
        let bs = finite_mahavier(&p, m).map_err(|e| e.to_string())?;
        ensure(bs.len() == 1 << m, || {
            format!("depth {m}: {} branches", bs.len())
        })?;
        ensure(bs.branches_meet_only_at_origin(), || {
            format!("depth {m}: branches overlap")
        })?;
        let samples = bs.sample_cloud(8);
        ensure(samples.points.iter().all(|s| bs.contains(s)), || {
            format!("depth {m}: sample off relation")
        })?;
        if let Some(lower) = prev.take() {
            let lower: lelek_core::BranchSet = lower;
            let image = shift(&bs).map_err(|e| e.to_string())?;
            ensure(lower.covers(&image), || {
                format!("depth {m}: shift not into")
            })?;
            ensure(image.covers(&lower), || {
                format!("depth {m}: shift not onto")
            })?;
            let ends = endpoints(&bs);
            let into = samples
                .points
                .iter()
                .chain(&ends.points)
                .all(|s| lower.contains(&s.shifted().unwrap()));
            ensure(into, || {
                format!("depth {m}: shifted point off depth {}", m - 1)
            })?;
            let onto = lower
                .sample_cloud(8)
                .points
                .iter()
                .chain(&endpoints(&lower).points)
                .all(|t| shift_preimage(&p, t).is_some_and(|s| bs.contains(&s)));
            ensure(onto, || format!("depth {} point without preimage", m - 1))?;
        }
        prev = Some(bs);
    }
    Ok("depths 1..10".into())
}

fn random_cloud(rng: &mut ChaCha8Rng) -> PointCloud {
    let n = rng.gen_range(1..8);
    let points = (0..n)
        .map(|_| {
            CubePoint::new(
                (0..4)
                    .map(|_| Rational::new(rng.gen_range(0..=24), 24))
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    PointCloud::new(points).unwrap()
}

fn c9_hausdorff() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = |a: &PointCloud, b: &PointCloud| hausdorff(a, b).map_err(|e| e.to_string());
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| random_cloud(&mut rng));
        let (ab, ba, bc, ac) = (h(&a, &b)?, h(&b, &a)?, h(&b, &c)?, h(&a, &c)?);
        ensure(h(&a, &a)?.is_zero(), || "H(A, A) != 0".into())?;
        let same =
            a.points.iter().collect::<HashSet<_>>() == b.points.iter().collect::<HashSet<_>>();
        ensure(ab.is_zero() == same, || {
            "H(A, B) = 0 disagrees with set equality".into()
        })?;
        ensure(ab == ba, || "asymmetric".into())?;
        ensure(ac <= &ab + &bc, || "triangle inequality".into())?;
    }
    let p = pair("1/2", "3");
    let mut worst = Vec::new();
    for m in 2..=9usize {
        let gap = depth_convergence_gap(&p, m, 8).map_err(|e| e.to_string())?;
        let bound = Rational::new(1, 2).pow(m as i64 + 1);
        ensure(gap <= bound, || format!("m = {m}: {gap} > {bound}"))?;
        worst.push(format!("{gap}"));
    }
    Ok(format!("100 triples; gaps m=2..9: {}", worst.join(", ")))
}

fn c10_endpoint_density() -> Outcome {
    let mut parts = Vec::new();
    for (r, rho) in [("1/2", "3"), ("2/3", "5/2")] {
        let mut cfg = AuditConfig::new(10, 100, 4);
        cfg.seed = 10;
        let rec = lelek_density_audit(&pair(r, rho), &cfg).map_err(|e| e.to_string())?;
        ensure(rec.passed, || {
            format!("({r}, {rho}): max distance {}", rec.max_distance)
        })?;
        ensure(rec.samples.iter().all(|s| s.distance <= q("1/16")), || {
            "distance above 1/16".into()
        })?;
        parts.push(format!(
            "({r}, {rho}) {} checked, {} skipped, max {}",
            rec.samples.len(),
            rec.skipped.len(),
            rec.max_distance
        ));
    }
    Ok(parts.join("; "))
}

fn c11_cantor() -> Outcome {
    let bs = finite_mahavier(&pair("1/2", "1/3"), 10).map_err(|e| e.to_string())?;
    let mut owner: HashMap<CubePoint, String> = HashMap::new();
    for b in &bs.branches {
        if let Some(prev) = owner.insert(b.endpoint(), b.word.to_string()) {
            return Err(format!("words {prev} and {} share an endpoint", b.word));
        }
    }
    ensure(owner.len() == 1024, || {
        format!("{} distinct endpoints", owner.len())
    })?;
    Ok("1024 distinct endpoints, injective".into())
}

fn c12_countable_fan() -> Outcome {
    let p = pair("1", "3");
    let bs = finite_mahavier(&p, 12).map_err(|e| e.to_string())?;
    let mut max_by_n: Vec<Rational> = vec![Rational::zero(); 5];
    for b in &bs.branches {
        let n = b.word.count(Symbol::P);
        if n > 4 {
            continue;
        }
        let d = branch_diameter(b);
        let bound = countable_fan_bound(&p.rho, n);
        ensure(d <= bound, || {
            format!("{}: diameter {d} > D_{n} = {bound}", b.word)
        })?;
        if d > max_by_n[n] {
            max_by_n[n] = d;
        }
    }
    let oracle = ["1", "1/2", "1/4", "1/8", "1/16"].map(q);
    for n in 0..=4 {
        let bound = countable_fan_bound(&p.rho, n);
        ensure(bound == oracle[n], || {
            format!("D_{n} = {bound}, oracle {}", oracle[n])
        })?;
        ensure(max_by_n[n] == bound, || {
            format!("D_{n} not attained: max {}", max_by_n[n])
        })?;
    }
    Ok("bound holds and is attained for n = 0..4".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("classification table", 1, c1_classification_table),
        ("greedy orbit stays in [r/rho, 1]", 5, c2_greedy_orbit),
        (
            "exponent search realizes 1 - 1/(n+1) < x r^k rho^l < 1",
            30,
            c3_find_exponents,
        ),
        ("sup itinerary postconditions", 60, c4_sup_itinerary),
        ("B1 gap trend", 10, c5_density_trend),
        ("B1 element between B2 elements", 10, c6_between),
        ("B3 tail counts stabilize", 5, c7_nowhere),
        ("Mahavier structure at depths 1..10", 60, c8_structure),
        ("Hausdorff axioms and depth convergence", 60, c9_hausdorff),
        ("endpoint density audit", 60, c10_endpoint_density),
        ("Cantor fan endpoints", 5, c11_cantor),
        ("countable fan diameter bound", 30, c12_countable_fan),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit}s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{elapsed:.2?}] {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name} [{elapsed:.2?}] {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
