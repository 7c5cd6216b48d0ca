mod common;

use common::{bhg, field, set_lines, tuples};

const GOLOMB_17: &[&[u64]] = &[
    &[1, 14], &[2, 10], &[3, 2], &[4, 1], &[5, 4], &[6, 13], &[7, 15], &[8, 6],
    &[9, 12], &[10, 7], &[11, 11], &[12, 5], &[13, 3], &[14, 8], &[15, 9],
];

fn golomb_17() -> String {
    let r = bhg(&["construct", "golomb", "--q", "17", "--alpha", "3", "--beta", "5", "--a", "1"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    r.stdout
}

#[test]
fn golomb_file_format() {
    let out = golomb_17();
    let header: Vec<&str> = out.lines().take(6).collect();
    assert_eq!(
        header,
        [
            "version=1",
            "group=product:16,16",
            "h=2",
            "g=1",
            "construction=golomb q=17 alpha=3 beta=5 a=1",
            "convention=multiset-repetition",
        ]
    );
    assert_eq!(set_lines(&out), tuples(GOLOMB_17));
}

#[test]
fn verify_reports_fields_in_order() {
    let r = bhg(&["verify"], &golomb_17());
    assert_eq!(r.code, 0);
    let keys: Vec<&str> = r.stdout.lines().map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(keys, ["group", "h", "convention", "size", "multisets", "distinct_sums", "min_g", "g", "result"]);
    assert_eq!(field(&r.stdout, "multisets"), Some("120"));
    assert_eq!(field(&r.stdout, "distinct_sums"), Some("120"));
    assert_eq!(field(&r.stdout, "result"), Some("pass"));
}

#[test]
fn verify_failure_exits_one_with_witness() {
    let set = "version=1\ngroup=box:1,8\nh=2\n0\n1\n2\n";
    let r = bhg(&["verify", "--g", "1"], set);
    assert_eq!(r.code, 1);
    assert_eq!(field(&r.stdout, "min_g"), Some("2"));
    assert_eq!(field(&r.stdout, "witness_sum"), Some("2"));
    let reps: Vec<&str> = r.stdout.lines().filter_map(|l| l.strip_prefix("representation=")).collect();
    assert_eq!(reps, ["0+2", "1+1"]);
    assert_eq!(field(&r.stdout, "result"), Some("fail"));
}

#[test]
fn json_matches_human_output() {
    let input = bhg(&["construct", "reduce", "--divisors", "2,2"], &golomb_17()).stdout;
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["verify"], input.as_str()),
        (vec!["search", "max", "--group", "product:5,5", "--h", "2", "--g", "1"], ""),
        (vec!["search", "gap", "--n", "3", "--d", "2", "--h", "2", "--g", "1"], ""),
        (vec!["search", "greedy", "--h", "2", "--g", "1", "--count", "5"], ""),
        (vec!["field", "info", "--p", "3", "--n", "2", "--modulus", "1,1,2"], ""),
    ];
    for (args, stdin) in cases {
        let human = bhg(&args, stdin);
        let mut jargs = args.clone();
        jargs.push("--json");
        let json = bhg(&jargs, stdin);
        assert_eq!(human.code, json.code);
        let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        let obj = v.as_object().unwrap();
        let mut lines = Vec::new();
        for (k, val) in obj {
            let items = match val {
                serde_json::Value::Array(a) => a.clone(),
                other => vec![other.clone()],
            };
            for item in items {
                let s = match item {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                lines.push(format!("{k}={s}"));
            }
        }
        let human_lines: Vec<String> = human.stdout.lines().map(str::to_string).collect();
        assert_eq!(lines, human_lines, "{args:?}");
    }
}

#[test]
fn elapsed_time_goes_to_stderr() {
    let r = bhg(&["search", "max", "--group", "product:7", "--h", "2", "--g", "1"], "");
    assert!(!r.stdout.contains("elapsed"));
    assert!(r.stderr.contains("elapsed_ms="));
    assert_eq!(field(&r.stdout, "witness"), Some("0 1 3"));
}

#[test]
fn budget_exhaustion_exits_three() {
    let r = bhg(&["search", "max", "--group", "product:12", "--h", "2", "--g", "1", "--budget", "10"], "");
    assert_eq!(r.code, 3);
    assert_eq!(field(&r.stdout, "exhaustive"), Some("false"));
    let set = "version=1\ngroup=box:1,100\nh=2\n".to_string()
        + &(0..60).map(|i| format!("{i}\n")).collect::<String>();
    let r = bhg(&["verify", "--h", "5", "--budget", "1000"], &set);
    assert_eq!(r.code, 3);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["construct", "moment", "--p", "3"],
        vec!["construct", "moment", "--p", "3", "--n", "2", "--h", "2", "--modulus", "1,0,1,1"],
        vec!["search", "max", "--group", "ring:5", "--h", "2", "--g", "1"],
    ] {
        let r = bhg(&args, "");
        assert_eq!(r.code, 2, "{args:?}: {}", r.stdout);
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_one() {
    // composite p, reducible modulus, small characteristic, non-primitive alpha
    for args in [
        vec!["construct", "moment", "--p", "4", "--n", "1", "--h", "2"],
        vec!["construct", "moment", "--p", "3", "--n", "2", "--h", "2", "--modulus", "1,0,2"],
        vec!["construct", "moment", "--p", "3", "--n", "1", "--h", "3"],
        vec!["construct", "golomb", "--q", "7", "--alpha", "2", "--beta", "3", "--a", "1"],
    ] {
        let r = bhg(&args, "");
        assert_eq!(r.code, 1, "{args:?}");
        assert!(r.stdout.is_empty());
    }
}

#[test]
fn malformed_set_files_are_rejected() {
    for text in [
        "version=1\ngroup=product:5\nh=2\n7\n",
        "version=1\ngroup=product:5\nh=2\n1\n1\n",
        "version=1\ngroup=product:5,5\nh=2\n1\n",
        "version=2\ngroup=product:5\nh=2\n1\n",
        "version=1\ngroup=product:5\nh=2\nconvention=distinct\n1\n",
        "version=1\nh=2\n1\n",
    ] {
        let r = bhg(&["verify"], text);
        assert_eq!(r.code, 2, "{text:?}");
        assert!(r.stderr.contains("line") || r.stderr.contains("group"), "{}", r.stderr);
    }
}

#[test]
fn field_info_reports_modulus() {
    let r = bhg(&["field", "info", "--p", "3", "--n", "2", "--modulus", "1,2"], "");
    assert_eq!(field(&r.stdout, "modulus"), Some("x^2+x+2"));
    assert_eq!(field(&r.stdout, "order"), Some("9"));
    assert_eq!(field(&r.stdout, "primitive"), Some("t"));
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("bhg-cli-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    let r = bhg(&["construct", "golomb", "--q", "17", "--alpha", "3", "--beta", "5", "--a", "1", "--output", p], "");
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golomb_17());
    let v = bhg(&["verify", "--input", p], "");
    assert_eq!(field(&v.stdout, "min_g"), Some("1"));
    std::fs::remove_file(path).unwrap();
}
