#![allow(dead_code)]

use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Stdio};

use bhg::{BhgSet, GroupSpec};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built binary with `stdin` piped in.
pub fn bhg(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bhg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bhg");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Value of `key=...` in line-oriented output.
pub fn field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

/// Element lines of a set file: everything after the header records.
pub fn set_lines(out: &str) -> Vec<String> {
    out.lines().filter(|l| !l.contains('=')).map(str::to_string).collect()
}

pub fn tuples(xs: &[&[u64]]) -> Vec<String> {
    xs.iter().map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(",")).collect()
}

fn reduce(spec: &GroupSpec, v: &mut [u64]) {
    if let GroupSpec::Product(m) = spec {
        for (x, mi) in v.iter_mut().zip(m) {
            *x %= mi;
        }
    }
}

/// Largest number of h-multisets of `elems` sharing a sum, by plain recursion.
pub fn naive_min_g(spec: &GroupSpec, elems: &[Vec<u64>], h: usize) -> u64 {
    fn rec(
        spec: &GroupSpec,
        elems: &[Vec<u64>],
        start: usize,
        left: usize,
        acc: &mut Vec<u64>,
        tally: &mut HashMap<Vec<u64>, u64>,
    ) {
        if left == 0 {
            let mut key = acc.clone();
            reduce(spec, &mut key);
            *tally.entry(key).or_default() += 1;
            return;
        }
        for i in start..elems.len() {
            for (a, x) in acc.iter_mut().zip(&elems[i]) {
                *a += x;
            }
            rec(spec, elems, i, left - 1, acc, tally);
            for (a, x) in acc.iter_mut().zip(&elems[i]) {
                *a -= x;
            }
        }
    }
    if elems.is_empty() {
        return 0;
    }
    let mut tally = HashMap::new();
    rec(spec, elems, 0, h, &mut vec![0; elems[0].len()], &mut tally);
    tally.values().copied().max().unwrap_or(0)
}

pub fn naive_min_g_set(set: &BhgSet, h: usize) -> u64 {
    let elems: Vec<Vec<u64>> = set.elements().iter().map(|e| e.0.clone()).collect();
    naive_min_g(&set.spec, &elems, h)
}

/// F_h(Z_m, g) by checking every subset of Z_m.
pub fn naive_max_cyclic(m: u64, h: usize, g: u64) -> usize {
    let spec = GroupSpec::product(vec![m]).unwrap();
    let mut best = 0;
    for mask in 0u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let elems: Vec<Vec<u64>> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| vec![i]).collect();
        if naive_min_g(&spec, &elems, h) <= g {
            best = size;
        }
    }
    best
}
