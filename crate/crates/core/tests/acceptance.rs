//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the terminal.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bhg::constructions::{base_digits, golomb_set, moment_curve_vectorized, translate_union};
use bhg::finite_field::{prime_power, FieldElement, FieldSpec};
use bhg::groups::{BhgSet, GroupSpec};
use bhg::search::{bound_gap_report, exhaustive_max, SearchOptions};
use bhg::symmetric::{power_sum_collision, power_sums, roots_from_sigma, sigma_from_power_sums, RootRecovery};
use bhg::verifier::{min_g, VerifyOptions};
use bhg::multiset::Multisets;
use common::{bhg, field, naive_max_cyclic, naive_min_g, naive_min_g_set, set_lines, tuples};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn verify_min_g(stdin: &str) -> Result<u64, String> {
    let r = bhg(&["verify"], stdin);
    ensure!(r.code == 0, "verify exited {}: {}", r.code, r.stderr);
    ok(field(&r.stdout, "min_g").ok_or("no min_g")?.parse::<u64>())
}

const EXPECTED_A: &[&str] = &["0,0", "1,1", "2,1", "t,2t+1", "t+1,t+2", "t+2,2", "2t,2t+1", "2t+1,2", "2t+2,t+2"];
const EXPECTED_B: &[&[u64]] = &[
    &[0, 0, 0, 0], &[0, 1, 0, 1], &[0, 2, 0, 1], &[1, 0, 2, 1], &[1, 1, 1, 2],
    &[1, 2, 0, 2], &[2, 0, 2, 1], &[2, 1, 0, 2], &[2, 2, 1, 2],
];

fn c1_moment_example() -> Outcome {
    let args = ["construct", "moment", "--p", "3", "--n", "2", "--h", "2", "--modulus", "1,1,2"];
    let a = bhg(&args, "");
    ensure!(a.code == 0, "construct exited {}", a.code);
    ensure!(set_lines(&a.stdout) == EXPECTED_A, "field form differs: {:?}", set_lines(&a.stdout));
    let mut vargs = args.to_vec();
    vargs.push("--vectorize");
    let b = bhg(&vargs, "");
    ensure!(set_lines(&b.stdout) == tuples(EXPECTED_B), "vector form differs: {:?}", set_lines(&b.stdout));
    let (ga, gb) = (verify_min_g(&a.stdout)?, verify_min_g(&b.stdout)?);
    ensure!(ga == 1 && gb == 1, "min_g {ga}, {gb}");
    Ok("9 pairs and 9 quadruples exact, min_g=1 on both".into())
}

fn c2_moment_sweep() -> Outcome {
    let mut cases = Vec::new();
    for p in [5u64, 7, 11, 13] {
        for h in [2usize, 3] {
            cases.push((p, 1usize, h));
        }
    }
    cases.push((3, 2, 2));
    cases.push((5, 2, 2));
    for &(p, n, h) in &cases {
        let set = ok(moment_curve_vectorized(p, n, h, None))?.set;
        let oracle = naive_min_g_set(&set, h);
        let fast = ok(min_g(&set, h, &VerifyOptions::default()))?;
        ensure!(oracle == 1 && fast == 1, "GF({p}^{n}) h={h}: oracle {oracle}, verifier {fast}");
    }
    Ok(format!("{} instances, min_g=1", cases.len()))
}

fn c3_newton() -> Outcome {
    let mut checked = 0;
    for p in [7u64, 11] {
        let f = ok(FieldSpec::prime(p))?;
        let all: Vec<FieldElement> = f.elements().collect();
        for k in 1..=3 {
            for idx in Multisets::new(all.len(), k) {
                let ms: Vec<FieldElement> = idx.iter().map(|&i| all[i].clone()).collect();
                let sigma = ok(sigma_from_power_sums(&f, &ok(power_sums(&f, &ms, k))?))?;
                let back = ok(roots_from_sigma(&f, &sigma))?;
                ensure!(back == RootRecovery::Roots(ms.clone()), "GF({p}) {ms:?} -> {back:?}");
                checked += 1;
            }
        }
    }
    let gf2 = ok(FieldSpec::prime(2))?;
    let (x, y) = ok(power_sum_collision(&gf2, 2))?.ok_or("no GF(2) collision found")?;
    ensure!(x != y, "collision is trivial");
    ensure!(ok(power_sums(&gf2, &x, 2))? == ok(power_sums(&gf2, &y, 2))?, "collision power sums differ");
    let show = |v: &[FieldElement]| v.iter().map(|e| gf2.format_element(e)).collect::<Vec<_>>().join(",");
    Ok(format!("{checked} multisets round-trip; GF(2) collision {{{}}} vs {{{}}}", show(&x), show(&y)))
}

const EXPECTED_LIFT_2: &[&[u64]] = &[
    &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0], &[0, 0, 1, 1, 1], &[0, 1, 0, 0, 1], &[0, 1, 0, 1, 0],
    &[0, 1, 1, 1, 1], &[1, 1, 0, 0, 1], &[1, 1, 0, 1, 0], &[1, 1, 1, 1, 1],
];
const EXPECTED_LIFT_6: &[&[u64]] = &[&[0, 1], &[0, 2], &[1, 1], &[1, 3], &[1, 4], &[2, 3], &[4, 1], &[4, 2], &[5, 1]];

fn c4_translate_and_lift() -> Outcome {
    let a = ok(BhgSet::from_ints(ok(GroupSpec::boxed(1, 8))?, &[1, 2, 7], 2, None))?;
    let b = ok(translate_union(&a, 8, &[0, 1, 3]))?.set;
    ensure!(b.ints() == [1, 2, 7, 9, 10, 15, 25, 26, 31], "union {:?}", b.ints());
    let opts = VerifyOptions::default();
    let gb = ok(min_g(&b, 2, &opts))?;
    let claimed = ok(BhgSet::new(b.spec.clone(), b.elements().to_vec(), 2, Some(gb)))?;
    for (base, dim, expect) in [(2u64, 5usize, EXPECTED_LIFT_2), (6, 2, EXPECTED_LIFT_6)] {
        let lifted = ok(base_digits(&claimed, base, dim))?.set;
        let got: Vec<String> = lifted.elements().iter().map(|e| e.to_string()).collect();
        ensure!(got == tuples(expect), "base {base}: {got:?}");
        let g = ok(min_g(&lifted, 2, &opts))?;
        ensure!(g == 2, "base {base}: min_g {g}");
    }
    ensure!(gb == 2, "union min_g {gb}");
    Ok("union and both liftings exact, min_g=2 on all three".into())
}

fn c5_lift_property() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let opts = VerifyOptions::default();
    for trial in 0..100 {
        let base = rng.gen_range(2..=6u64);
        let dim = rng.gen_range(2..=3usize);
        let side = base.pow(dim as u32);
        let size = rng.gen_range(1..=side.min(12) as usize);
        let values = rand::seq::index::sample(&mut rng, side as usize, size);
        let values: Vec<u64> = values.into_iter().map(|v| v as u64).collect();
        let spec = ok(GroupSpec::boxed(1, side))?;
        let elems: Vec<Vec<u64>> = values.iter().map(|&v| vec![v]).collect();
        let g = naive_min_g(&spec, &elems, 2);
        let a = ok(BhgSet::from_ints(spec, &values, 2, Some(g)))?;
        let lifted = ok(base_digits(&a, base, dim))?.set;
        let lg = ok(min_g(&lifted, 2, &opts))?;
        ensure!(lifted.len() == a.len(), "trial {trial}: size changed");
        ensure!(lg <= g, "trial {trial}: N={base} d={dim} lifted {lg} > {g}");
    }
    Ok("100 seeded sets, size kept and min_g not raised".into())
}

const EXPECTED_GOLOMB: &[&[u64]] = &[
    &[1, 14], &[2, 10], &[3, 2], &[4, 1], &[5, 4], &[6, 13], &[7, 15], &[8, 6],
    &[9, 12], &[10, 7], &[11, 11], &[12, 5], &[13, 3], &[14, 8], &[15, 9],
];

fn golomb_17() -> Result<String, String> {
    let r = bhg(&["construct", "golomb", "--q", "17", "--alpha", "3", "--beta", "5", "--a", "1"], "");
    ensure!(r.code == 0, "golomb exited {}: {}", r.code, r.stderr);
    Ok(r.stdout)
}

fn c6_golomb() -> Outcome {
    let out = golomb_17()?;
    ensure!(set_lines(&out) == tuples(EXPECTED_GOLOMB), "pairs differ: {:?}", set_lines(&out));
    let g = verify_min_g(&out)?;
    ensure!(g == 1, "min_g {g}");
    let mut pairs = 0;
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 17] {
        let (p, n) = prime_power(q).ok_or("not a prime power")?;
        let f = ok(FieldSpec::canonical(p, n))?;
        let prims: Vec<FieldElement> = f.elements().filter(|x| f.is_primitive(x)).collect();
        for alpha in &prims {
            for beta in &prims {
                let set = ok(golomb_set(&f, alpha, beta, &f.one()))?.set;
                ensure!(set.len() as u64 == q - 2, "q={q}: size {}", set.len());
                pairs += 1;
            }
        }
    }
    Ok(format!("15 pairs exact, Sidon; |G|=q-2 for {pairs} primitive pairs"))
}

const EXPECTED_REDUCED: &[&[u64]] = &[
    &[0, 6], &[1, 4], &[1, 6], &[2, 2], &[2, 7], &[3, 2], &[3, 3], &[4, 1],
    &[4, 5], &[5, 3], &[5, 4], &[6, 0], &[6, 5], &[7, 1], &[7, 7],
];

fn c7_reduction() -> Outcome {
    let r = bhg(&["construct", "reduce", "--divisors", "2,2"], &golomb_17()?);
    ensure!(r.code == 0, "reduce exited {}", r.code);
    ensure!(set_lines(&r.stdout) == tuples(EXPECTED_REDUCED), "pairs differ: {:?}", set_lines(&r.stdout));
    let group = field(&r.stdout, "group").unwrap_or("");
    ensure!(group == "product:8,8", "group {group}");
    ensure!(field(&r.stdout, "g") == Some("4"), "certificate g {:?}", field(&r.stdout, "g"));
    let g = verify_min_g(&r.stdout)?;
    ensure!(g <= 4, "min_g {g} exceeds certificate");
    Ok(format!("15 pairs exact on {group}, not Z16xZ16, certificate g=4, measured min_g={g}"))
}

fn search(spec: &str, g: u64, threads: usize) -> Result<bhg::search::SearchResult, String> {
    let spec: GroupSpec = ok(spec.parse())?;
    ok(exhaustive_max(&spec, 2, g, &SearchOptions { threads, ..SearchOptions::default() }))
}

fn c8_extremal() -> Outcome {
    let mut parts = Vec::new();
    for (spec, expect) in [("product:3,3", 3), ("product:5,5", 5), ("product:7", 3), ("product:8", 3)] {
        let r = search(spec, 1, 1)?;
        ensure!(r.exhaustive, "{spec}: not exhaustive");
        ensure!(r.best_size == expect, "{spec}: {} != {expect}", r.best_size);
        parts.push(format!("{spec}={}", r.best_size));
    }
    Ok(parts.join(" "))
}

fn c9_gap() -> Outcome {
    let mut parts = Vec::new();
    for n in [2u64, 3, 4] {
        let r = ok(bound_gap_report(n, 2, 2, 1, &SearchOptions::default()))?;
        ensure!(r.one_dim.exhaustive && r.multi_dim.exhaustive, "N={n}: not exhaustive");
        ensure!(r.holds, "N={n}: inequality fails");
        parts.push(format!("N={n}: {}<={}", r.one_dim.best_size, r.multi_dim.best_size));
    }
    Ok(parts.join(", "))
}

fn c10_oracle() -> Outcome {
    for m in 2..=12u64 {
        for g in [1, 2] {
            let r = search(&format!("product:{m}"), g, 1)?;
            let naive = naive_max_cyclic(m, 2, g);
            ensure!(r.exhaustive && r.best_size == naive, "m={m} g={g}: {} vs {naive}", r.best_size);
        }
    }
    Ok("Z_2..Z_12, g in {1,2}: 22 values agree".into())
}

fn golden_commands() -> Result<Vec<(Vec<String>, String)>, String> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let golomb = golomb_17()?;
    let reduced = bhg(&["construct", "reduce", "--divisors", "2,2"], &golomb).stdout;
    let union = bhg(&["construct", "union", "--m", "8", "--coeffs", "0,1,3"], "version=1\ngroup=box:1,8\nh=2\n1\n2\n7\n").stdout;
    Ok(vec![
        (s(&["construct", "moment", "--p", "3", "--n", "2", "--h", "2", "--modulus", "1,1,2"]), String::new()),
        (s(&["construct", "moment", "--p", "3", "--n", "2", "--h", "2", "--modulus", "1,1,2", "--vectorize"]), String::new()),
        (s(&["construct", "golomb", "--q", "17", "--alpha", "3", "--beta", "5", "--a", "1"]), String::new()),
        (s(&["construct", "reduce", "--divisors", "2,2"]), golomb.clone()),
        (s(&["construct", "union", "--m", "8", "--coeffs", "0,1,3"]), "version=1\ngroup=box:1,8\nh=2\n1\n2\n7\n".into()),
        (s(&["construct", "digits", "--base", "6", "--dim", "2"]), union.clone()),
        (s(&["construct", "digits", "--base", "2", "--dim", "5"]), union),
        (s(&["verify"]), golomb),
        (s(&["verify", "--json"]), reduced),
        (s(&["search", "max", "--group", "product:5,5", "--h", "2", "--g", "1"]), String::new()),
        (s(&["search", "max", "--group", "product:12", "--h", "2", "--g", "2", "--json"]), String::new()),
        (s(&["search", "gap", "--n", "4", "--d", "2", "--h", "2", "--g", "1"]), String::new()),
        (s(&["search", "greedy", "--h", "3", "--g", "1", "--count", "4"]), String::new()),
        (s(&["field", "info", "--p", "3", "--n", "2", "--modulus", "1,1,2"]), String::new()),
    ])
}

fn numeric_fields(out: &str) -> Vec<String> {
    out.lines().filter(|l| !l.contains("witness") && !l.starts_with("representation")).map(str::to_string).collect()
}

fn c11_determinism() -> Outcome {
    let cmds = golden_commands()?;
    for (args, stdin) in &cmds {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = bhg(&argv, stdin);
        ensure!(first.code == 0, "{argv:?} exited {}", first.code);
        for _ in 0..2 {
            let again = bhg(&argv, stdin);
            ensure!(again.stdout == first.stdout, "{argv:?} output changed between runs");
        }
        if matches!(argv[0], "verify" | "search") && argv.get(1) != Some(&"greedy") {
            let mut threaded = argv.clone();
            threaded.extend(["--threads", "4"]);
            let t = bhg(&threaded, stdin);
            ensure!(t.code == first.code, "{argv:?} exit code changed with threads");
            ensure!(numeric_fields(&t.stdout) == numeric_fields(&first.stdout), "{argv:?} numbers changed with threads");
        }
    }
    Ok(format!("{} golden commands byte-identical; --threads 4 agrees", cmds.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("moment curve example", Duration::from_secs(1), c1_moment_example),
        ("moment curve sweep", Duration::from_secs(10), c2_moment_sweep),
        ("newton round-trip", Duration::from_secs(5), c3_newton),
        ("translate-union and digit lifts", Duration::from_secs(1), c4_translate_and_lift),
        ("digit lift property", Duration::from_secs(30), c5_lift_property),
        ("golomb sets", Duration::from_secs(10), c6_golomb),
        ("modular reduction", Duration::from_secs(1), c7_reduction),
        ("extremal values", Duration::from_secs(60), c8_extremal),
        ("one-dim vs two-dim bound", Duration::from_secs(120), c9_gap),
        ("search vs subset oracle", Duration::from_secs(60), c10_oracle),
        ("determinism", Duration::from_secs(600), c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = match result {
            Ok(d) if took > *limit => Err(format!("{d}; took {took:?}, limit {limit:?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({} ms)", i + 1, took.as_millis()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} ({} ms)", i + 1, took.as_millis());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
