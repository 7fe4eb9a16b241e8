//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divcorr_cli::commands::{
    centred_weight, exceptional_densities, majorant_row, naive_tau, run,
};
use divcorr_cli::config::{BodySpec, Bound};
use divcorr_cli::{Command, RunConfig};
use divcorr_core::affine::AffineSystem;
use divcorr_core::arith::{build_tables, ExceptionalThresholds};
use divcorr_core::engine::{gowers_norm, gowers_norm_direct, WeightInputs, WeightKind};
use divcorr_core::local::{
    alpha_direct, alpha_prime_power_brute, alpha_prime_power_fast, singular_product, BetaCache,
    ExactRational, Truncation, DEFAULT_WORK_CAP,
};
use divcorr_core::majorant::{cluster_count, cluster_set_upto, xis_bound, xis_density, ClusterSpec};
use divcorr_core::params::{Gamma, MajorantParams, WMode};
use divcorr_core::wtrick::{make_context, mu_wb};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn six_over_pi2() -> f64 {
    6.0 / std::f64::consts::PI.powi(2)
}

fn boxed(lo: &[&str], hi: &[&str]) -> BodySpec {
    BodySpec {
        lo: Some(lo.iter().map(|s| Bound::Expr(s.to_string())).collect()),
        hi: Some(hi.iter().map(|s| Bound::Expr(s.to_string())).collect()),
        ..Default::default()
    }
}

fn csv_column(csv: &str, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == name).expect("column");
    r.records().map(|rec| rec.unwrap()[idx].to_string()).collect()
}

fn binary_config() -> RunConfig {
    RunConfig {
        system: Some(vec![vec![1, 0], vec![1, 1]]),
        grid: Some(vec![100_000, 1_000_000, 10_000_000]),
        body: Some(boxed(&["1"], &["N-1"])),
        pmax: Some(100_000),
        trunc: Some(12),
        ..Default::default()
    }
}

fn ternary_config() -> RunConfig {
    RunConfig {
        system: Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]),
        grid: Some(vec![1000, 3000, 10_000]),
        body: Some(boxed(&["1", "1"], &["M", "M"])),
        pmax: Some(100_000),
        trunc: Some(12),
        ..Default::default()
    }
}

/// Integer-weight suite with `N <= 10³`, including empty and one-point bodies.
fn oracle_suite() -> Vec<(RunConfig, &'static str)> {
    let sys = |rows: &[&[i64]]| Some(rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let cfg = |system, n, body: BodySpec, weight: &str| RunConfig {
        system,
        n: Some(n),
        body: Some(body),
        weight: Some(weight.into()),
        ..Default::default()
    };
    let poly = |a: Vec<Vec<i64>>, b: &[i64]| BodySpec {
        a: Some(a),
        b: Some(b.iter().map(|&x| Bound::Int(x)).collect()),
        ..Default::default()
    };
    vec![
        (cfg(sys(&[&[1, 0], &[1, 1]]), 10, boxed(&["1"], &["4"]), "tau"), "hand"),
        (cfg(sys(&[&[1, 0], &[1, 1]]), 1000, boxed(&["1"], &["N-1"]), "tau"), "consecutive"),
        (cfg(sys(&[&[1, 0], &[1, 2]]), 1000, boxed(&["1"], &["N-2"]), "tau"), "shift 2"),
        (cfg(sys(&[&[1, 0], &[2, 1]]), 1000, boxed(&["1"], &["499"]), "tau"), "n, 2n+1"),
        (cfg(sys(&[&[1, 0], &[1, 1], &[1, 2]]), 1000, boxed(&["1"], &["N-2"]), "tau"), "three shifts"),
        (cfg(sys(&[&[1, 0, 0], &[0, 1, 0]]), 1000, boxed(&["1", "1"], &["30", "40"]), "tau"), "separable"),
        (cfg(sys(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]), 1000, boxed(&["1", "1"], &["M", "M"]), "tau"), "n1, n2, n1+n2"),
        (cfg(sys(&[&[1, 0, 0], &[1, 1, 0], &[1, 2, 0]]), 1000, boxed(&["1", "1"], &["100", "100"]), "tau"), "progression"),
        (cfg(sys(&[&[2, 1, 1], &[1, 3, 0]]), 1000, boxed(&["1", "1"], &["60", "60"]), "tau"), "mixed"),
        (
            cfg(
                sys(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
                1000,
                poly(vec![vec![1, 1], vec![-1, 0], vec![0, -1]], &[40, -1, -1]),
                "tau",
            ),
            "triangle",
        ),
        (cfg(sys(&[&[1, 0], &[1, 1]]), 1000, boxed(&["7"], &["7"]), "tau"), "one point"),
        (cfg(sys(&[&[1, 0], &[1, 1]]), 1000, boxed(&["9"], &["3"]), "tau"), "empty box"),
        (
            cfg(sys(&[&[1, 0, 0], &[0, 1, 0]]), 1000, poly(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], &[5, -10, 5, -1]), "tau"),
            "empty polytope",
        ),
        (cfg(sys(&[&[1, 0, 0], &[1, 1, 0]]), 1000, boxed(&["1", "1"], &["20", "20"]), "unit"), "unit weight"),
    ]
}

fn criterion_1() -> Outcome {
    let s = AffineSystem::from_rows(&[&[1, 0], &[1, 1]]).unwrap();
    let start = Instant::now();
    let sp = singular_product(&s, 100_000, Truncation::Fixed(12), &BetaCache::new()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let bad = sp
        .per_prime
        .iter()
        .filter(|b| !b.contains(&(&ExactRational::one() - &ExactRational::inv_pow(b.p, 2))))
        .count();
    let dev = (sp.value - six_over_pi2()).abs();
    check(
        dev <= 2e-4 && bad == 0 && secs < 30.0,
        format!("value {:.7}, |diff| {dev:.2e}, {bad} intervals miss 1-p^-2, {secs:.1}s", sp.value),
    )
}

fn criterion_2() -> Outcome {
    let s = AffineSystem::from_rows(&[&[1, 0], &[1, 2]]).unwrap();
    let start = Instant::now();
    let sp = singular_product(&s, 100_000, Truncation::Fixed(12), &BetaCache::new()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    // local factor (1 − p⁻²)σ₋₁(p^{v_p(2)}): 9/8 at p = 2
    let bad = sp
        .per_prime
        .iter()
        .filter(|b| {
            let closed = if b.p == 2 {
                ExactRational::ratio(9, 8)
            } else {
                &ExactRational::one() - &ExactRational::inv_pow(b.p, 2)
            };
            !b.contains(&closed)
        })
        .count();
    let target = six_over_pi2() * 1.5;
    let dev = (sp.value - target).abs();
    check(
        dev <= 5e-4 && bad == 0 && secs < 30.0,
        format!("value {:.7} vs {target:.7}, |diff| {dev:.2e}, {bad} intervals miss, {secs:.1}s", sp.value),
    )
}

fn deviations(csv: &str) -> Vec<f64> {
    csv_column(csv, "deviation").iter().map(|s| s.parse().unwrap()).collect()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let out = run(Command::VerifyMainTheorem, &binary_config()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let d = deviations(&out.csv);
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let last = *d.last().unwrap();
    check(
        decreasing && last <= 0.15 && secs <= 300.0,
        format!("deviations {d:.4?} at N = 1e5, 1e6, 1e7 (strictly decreasing: {decreasing}; final <= 0.15: {}), {secs:.1}s", last <= 0.15),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let out = run(Command::VerifyMainTheorem, &ternary_config()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let d = deviations(&out.csv);
    let non_increasing = d.windows(2).all(|w| w[1] <= w[0]);
    let last = *d.last().unwrap();
    check(
        non_increasing && last <= 0.25 && secs <= 600.0,
        format!("deviations {d:.4?} at M = 500, 1500, 5000 (non-increasing: {non_increasing}), {secs:.1}s"),
    )
}

fn criterion_5() -> Outcome {
    let suite = oracle_suite();
    let mut mismatches = Vec::new();
    let mut hand = String::new();
    for (cfg, name) in &suite {
        let fast = run(Command::Correlate, cfg).map_err(|e| format!("{name}: {e}"))?;
        let mut ocfg = cfg.clone();
        ocfg.target = Some("correlate".into());
        let slow = run(Command::Oracle, &ocfg).map_err(|e| format!("{name}: {e}"))?;
        let a = csv_column(&fast.csv, "raw");
        let b = csv_column(&slow.csv, "raw");
        if a != b {
            mismatches.push(format!("{name}: {a:?} vs {b:?}"));
        }
        if *name == "hand" {
            hand = a[0].clone();
        }
    }
    check(
        mismatches.is_empty() && hand == "18" && suite.len() >= 12,
        format!("{} systems, mismatches {mismatches:?}, hand example = {hand}", suite.len()),
    )
}

fn random_system(rng: &mut ChaCha8Rng) -> AffineSystem {
    loop {
        let d = rng.gen_range(1..=3usize);
        let t = rng.gen_range(1..=3usize);
        let rows: Vec<Vec<i64>> = (0..t)
            .map(|_| (0..=d).map(|j| if j < d { rng.gen_range(-6..=6) } else { rng.gen_range(-10..=10) }).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        if let Ok(s) = AffineSystem::from_rows(&refs) {
            return s;
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut agree = 0;
    let mut cases = 0;
    while cases < 200 {
        let s = random_system(&mut rng);
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let exps: Vec<u32> = (0..s.len()).map(|_| rng.gen_range(0..=3)).collect();
        let brute = match alpha_prime_power_brute(&s, p, &exps, DEFAULT_WORK_CAP) {
            Ok(v) => v,
            Err(_) => continue,
        };
        cases += 1;
        agree += (alpha_prime_power_fast(&s, p, &exps).unwrap() == brute) as usize;
    }
    let mut mult = 0;
    let mut mcases = 0;
    let left = [2u64, 4, 8, 3, 9, 6, 12];
    let right = [5u64, 25, 7, 35, 1];
    while mcases < 200 {
        let s = random_system(&mut rng);
        let d1: Vec<u64> = (0..s.len()).map(|_| left[rng.gen_range(0..left.len())]).collect();
        let d2: Vec<u64> = (0..s.len()).map(|_| right[rng.gen_range(0..right.len())]).collect();
        let prod: Vec<u64> = d1.iter().zip(&d2).map(|(a, b)| a * b).collect();
        let (Ok(a), Ok(b), Ok(c)) = (
            alpha_direct(&s, &prod, 1 << 22),
            alpha_direct(&s, &d1, 1 << 22),
            alpha_direct(&s, &d2, 1 << 22),
        ) else {
            continue;
        };
        mcases += 1;
        mult += (a == &b * &c) as usize;
    }
    check(
        agree == 200 && mult == 200,
        format!("fast = brute on {agree}/200, multiplicative on {mult}/200"),
    )
}

fn criterion_7() -> Outcome {
    let n = 100_000;
    let t = build_tables(n).unwrap();
    let (violations, _, mean, m) = majorant_row(n, MajorantParams::default(), &t).map_err(|e| e.to_string())?;
    check(
        violations == 0,
        format!("{violations} violations over n <= 1e5 ({} cluster terms, mean nu {mean:.1})", m.terms.len()),
    )
}

fn criterion_8() -> Outcome {
    let t = build_tables(1_000_000).unwrap();
    let mut means = Vec::new();
    let mut terms = Vec::new();
    for n in [10_000u64, 100_000, 1_000_000] {
        let (_, _, mean, m) = majorant_row(n, MajorantParams::default(), &t).map_err(|e| e.to_string())?;
        means.push(mean);
        terms.push(m.terms.len());
    }
    let ratio = means.iter().cloned().fold(f64::MIN, f64::max) / means.iter().cloned().fold(f64::MAX, f64::min);
    let big_n = 10_000u64;
    let gamma = Gamma::from_reciprocal(4).unwrap();
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for s in [8u32, 16] {
        for i in 1..=4 {
            let Some(spec) = ClusterSpec::new(i, s, gamma) else { continue };
            let set = cluster_set_upto(&spec, big_n, big_n, &t);
            for n in 1..=big_n {
                let f = t.factorize(n).unwrap();
                let direct = set.iter().filter(|&&u| n % u == 0).count() as u64;
                checked += 1;
                mismatches += (cluster_count(&f, &spec, big_n) != direct) as u64;
            }
        }
    }
    check(
        ratio <= 3.0 && mismatches == 0,
        format!(
            "mean nu {means:.1?} at N = 1e4, 1e5, 1e6 (cluster terms {terms:?}), max/min {ratio:.1}; cluster_count mismatches {mismatches}/{checked}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let t = build_tables(1_000_000).unwrap();
    let gamma = Gamma::from_reciprocal(4).unwrap();
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for n in [10_000u64, 100_000, 1_000_000] {
        let (a, b, _) = exceptional_densities(n, 2.0, gamma, &t).map_err(|e| e.to_string())?;
        s1.push(a);
        s2.push(b);
    }
    let mono = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0]);
    let big_n = 10_000;
    let mut worst: f64 = 0.0;
    for s in [8u32, 16] {
        for i in 1..=4 {
            let Some(spec) = ClusterSpec::new(i, s, gamma) else { continue };
            let d = xis_density(&spec, big_n, &t).unwrap();
            let b = xis_bound(&spec, big_n, &t);
            if b > 0.0 {
                worst = worst.max(d / b);
            } else if d > 0.0 {
                worst = f64::INFINITY;
            }
        }
    }
    check(
        mono(&s1) && mono(&s2) && worst <= 1.1,
        format!("S1 {s1:.4?}, S2 {s2:.4?}; max X(i,s) density/bound {worst:.3}"),
    )
}

fn criterion_10() -> Outcome {
    let n = 100_000u64;
    let t = build_tables(1_000_000).unwrap();
    let ctx = make_context(n, 2.0, WMode::Manual(5.0)).unwrap();
    let th = ExceptionalThresholds::new(n, 2.0, Gamma::from_reciprocal(4).unwrap());
    let mut decomp = 0u64;
    let mut bar = 0u64;
    for k in 1..=n {
        let f = t.factorize(k).unwrap();
        decomp += (ctx.coprime_divisor_count(&f) * ctx.smooth_divisor_count(&f) != f.divisor_count()) as u64;
        let tb = ctx.tau_bar_scaled(&f);
        bar += (tb > f.divisor_count() || (!th.is_exceptional(&f) && tb != f.divisor_count())) as u64;
    }
    let big = 1_000_000u64;
    let ctx = make_context(big, 2.0, WMode::Manual(5.0)).unwrap();
    let m_max = (big - 1) / ctx.big_w;
    let mean: f64 = (1..=m_max)
        .map(|m| {
            let f = t.factorize(ctx.big_w * m + 1).unwrap();
            ctx.coprime_divisor_count(&f) as f64 * ctx.prime_scale()
        })
        .sum::<f64>()
        / m_max as f64;
    let mu = mu_wb(1, &ctx).unwrap();
    check(
        decomp == 0 && bar == 0 && (mu - mean).abs() <= 0.05,
        format!("decomposition failures {decomp}, tau-bar failures {bar}, mu {mu:.4} vs mean {mean:.4} (W = {}, bigW = {})", ctx.w_prod, ctx.big_w),
    )
}

fn criterion_11() -> Outcome {
    let lf = RunConfig {
        system: Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]),
        n: Some(1_000_000),
        w: Some(5.0),
        c1: Some(1.0),
        body: Some(boxed(&["1", "1"], &["(N-1)/144", "(N-1)/144"])),
        ..Default::default()
    };
    let out = run(Command::LinearFormsCheck, &lf).map_err(|e| e.to_string())?;
    let dev: f64 = out.summary["deviation"].as_f64().unwrap();
    let cc = RunConfig {
        n: Some(100_000),
        w: Some(5.0),
        c1: Some(1.0),
        c_sigma: Some(1.0),
        tuples: Some(50),
        tuple_size: Some(2),
        max_shift: Some(100),
        ..Default::default()
    };
    let out2 = run(Command::CorrelationCheck, &cc).map_err(|e| e.to_string())?;
    let holds = csv_column(&out2.csv, "holds").iter().filter(|h| *h == "true").count();
    let rhs: Vec<f64> = csv_column(&out2.csv, "rhs").iter().map(|s| s.parse().unwrap()).collect();
    let flat = rhs.iter().filter(|&&r| r == 1.0).count();
    // null when some tuple fails for every c_sigma
    let min_c = match out2.summary["minimal_c_sigma"].as_f64() {
        Some(c) => format!("{c:.4}"),
        None => "unattainable".into(),
    };
    check(
        dev <= 0.3 && holds == 50,
        format!(
            "linear-forms deviation {dev:.4} (bigW = {}); correlation inequality holds on {holds}/50, right side fixed at 1 for {flat} tuples, minimal c_sigma {min_c}",
            out.summary["big_w"]
        ),
    )
}

fn criterion_12() -> Outcome {
    let t = build_tables(100_000).unwrap();
    let gamma = Gamma::from_reciprocal(4).unwrap();
    let f = |n: u64| {
        let ctx = make_context(n, 2.0, WMode::Manual(5.0)).unwrap();
        let inp = WeightInputs { big_n: n, gamma, ctx: Some(&ctx), majorant: None };
        centred_weight(WeightKind::TauTildePrime, n, inp, &t).unwrap()
    };
    let small = f(300);
    let fast = gowers_norm(&small, 2).unwrap();
    let direct = gowers_norm_direct(&small, 2).unwrap();
    let agree = (fast.norm - direct.norm).abs();
    let norms: Vec<f64> = [1000u64, 10_000, 100_000].iter().map(|&n| gowers_norm(&f(n), 2).unwrap().norm).collect();
    let non_increasing = norms.windows(2).all(|w| w[1] <= w[0]);
    check(
        agree <= 1e-10 && non_increasing,
        format!("fast vs direct at N = 300: {agree:.1e}; U2 norms {norms:.5?} at N = 1e3, 1e4, 1e5 (non-increasing: {non_increasing})"),
    )
}

fn criterion_13() -> Outcome {
    let mut oracle_cases = oracle_suite();
    oracle_cases.truncate(10);
    let mut configs: Vec<(Command, RunConfig, String)> = vec![
        (Command::VerifyMainTheorem, binary_config(), "binary".into()),
        (Command::VerifyMainTheorem, ternary_config(), "ternary".into()),
    ];
    for (c, name) in oracle_cases {
        configs.push((Command::Correlate, c, name.into()));
    }
    let mut diffs = Vec::new();
    for (cmd, cfg, name) in &configs {
        let mut bodies = Vec::new();
        for workers in [1usize, 2, 8, 1] {
            let mut c = cfg.clone();
            c.workers = Some(workers);
            bodies.push(run(*cmd, &c).map_err(|e| e.to_string())?.csv);
        }
        if bodies.windows(2).any(|w| w[0] != w[1]) {
            diffs.push(name.clone());
        }
    }
    check(
        diffs.is_empty(),
        format!("{} configurations x workers 1/2/8 plus a repeat; differing: {diffs:?}", configs.len()),
    )
}

fn main() {
    // the harness passes libtest flags; a name filter skips the suite
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if args.iter().any(|a| !"acceptance".contains(a.as_str())) {
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("singular product of (n, n+1) vs 6/pi^2", criterion_1),
        ("singular product of (n, n+2) vs 9/pi^2", criterion_2),
        ("binary correlation vs singular product", criterion_3),
        ("(n1, n2, n1+n2) correlation vs singular product", criterion_4),
        ("engine vs naive oracle", criterion_5),
        ("alpha exactness and multiplicativity", criterion_6),
        ("majorisation, zero violations", criterion_7),
        ("majorant mass and cluster counts", criterion_8),
        ("exceptional-set paucity", criterion_9),
        ("W-trick identities", criterion_10),
        ("linear-forms and correlation checks", criterion_11),
        ("Gowers norms", criterion_12),
        ("determinism across workers", criterion_13),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    // keeps the oracle helper in the public surface exercised
    assert_eq!(naive_tau(12), 6);
    println!(
        "acceptance: {} passed, {} failed {:?}",
        13 - failed.len(),
        failed.len(),
        failed
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
