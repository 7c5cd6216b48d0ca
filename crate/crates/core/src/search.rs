//! Exact extremal values F_h(G, g) by branch and bound, and the greedy
//! integer generator.
//!
//! Subsets are grown in lexicographic member order, only ever appending a
//! member larger than the current maximum, so each subset is visited once.
//! Representation counts are kept incrementally: appending `x` adds exactly
//! the multisets that contain `x` at least once.
//!
//! Translations preserve representation counts, so in a product group the
//! smallest member can be taken to be the identity. In a box only the first
//! coordinate can be normalised that way: the lexicographically smallest
//! member is required to have first coordinate 0.
//!
//! The search tree is split into independent branches keyed by the first two
//! members. Each branch keeps its own incumbent, seeded from a greedy lower
//! bound, so node counts and the reported optimum do not depend on the
//! number of worker threads.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::constructions::base_digits;
use crate::error::{Error, Result};
use crate::groups::{BhgSet, GroupSpec, SumEncoder};
use crate::multiset::multiset_count;
use crate::verifier::{is_bhg, VerifyOptions};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Largest key space the dense counting table will allocate.
const MAX_TABLE: u64 = 1 << 26;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub node_budget: u64,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_budget: DEFAULT_NODE_BUDGET, threads: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub spec: GroupSpec,
    pub h: usize,
    pub g: u64,
    pub best_size: usize,
    pub witness: BhgSet,
    /// True iff optimality was proven. Otherwise `best_size` is only a
    /// lower bound.
    pub exhaustive: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Incremental representation counts for a growing set.
struct Counts<'a> {
    lifted: &'a [u64],
    encoder: &'a SumEncoder,
    h: usize,
    g: u32,
    table: Vec<u32>,
    chosen: Vec<usize>,
    touched: Vec<Vec<u64>>,
}

impl<'a> Counts<'a> {
    fn new(lifted: &'a [u64], encoder: &'a SumEncoder, h: usize, g: u32) -> Self {
        Counts {
            lifted,
            encoder,
            h,
            g,
            table: vec![0; encoder.key_space() as usize],
            chosen: Vec::new(),
            touched: Vec::new(),
        }
    }

    /// Appends member `x`; on a count above `g` undoes the partial update
    /// and returns false.
    fn push(&mut self, x: usize) -> bool {
        let mut keys = Vec::new();
        let vx = self.lifted[x];
        let chosen_lifted: Vec<u64> = self.chosen.iter().map(|&i| self.lifted[i]).collect();
        let mut ok = true;
        for j in 1..=self.h {
            let base = vx * j as u64;
            ok = sums_of(&chosen_lifted, 0, self.h - j, base, &mut |s| {
                let key = self.encoder.reduce(s);
                let slot = &mut self.table[key as usize];
                *slot += 1;
                keys.push(key);
                *slot <= self.g
            });
            if !ok {
                break;
            }
        }
        if !ok {
            for k in keys {
                self.table[k as usize] -= 1;
            }
            return false;
        }
        self.chosen.push(x);
        self.touched.push(keys);
        true
    }

    fn pop(&mut self) {
        self.chosen.pop();
        for k in self.touched.pop().expect("pop on empty set") {
            self.table[k as usize] -= 1;
        }
    }
}

/// Calls `visit` with `base` plus every size-`left` multiset sum drawn from
/// `vals[from..]`; stops early once `visit` returns false.
fn sums_of(vals: &[u64], from: usize, left: usize, base: u64, visit: &mut impl FnMut(u64) -> bool) -> bool {
    if left == 0 {
        return visit(base);
    }
    for i in from..vals.len() {
        if !sums_of(vals, i, left - 1, base + vals[i], visit) {
            return false;
        }
    }
    true
}

/// Largest k with `C(k+h-1, h) <= g * sums`, the counting cap on a
/// B_h[g] set whose h-fold sums take at most `sums` values.
fn counting_cap(h: usize, g: u64, sums: u64, members: usize) -> usize {
    let limit = g as u128 * sums as u128;
    let mut k = 0;
    while k < members && multiset_count(k + 1, h) <= limit {
        k += 1;
    }
    k
}

struct Shared<'a> {
    lifted: &'a [u64],
    encoder: &'a SumEncoder,
    h: usize,
    g: u32,
    cap: usize,
    budget: u64,
    nodes: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

struct Branch {
    best: usize,
    witness: Option<Vec<usize>>,
    nodes: u64,
}

fn dfs(sh: &Shared<'_>, counts: &mut Counts<'_>, from: usize, br: &mut Branch) {
    br.nodes += 1;
    if sh.nodes.fetch_add(1, Ordering::Relaxed) >= sh.budget {
        sh.aborted.store(true, Ordering::Relaxed);
    }
    let k = counts.chosen.len();
    if k > br.best {
        br.best = k;
        br.witness = Some(counts.chosen.clone());
    }
    let n = sh.lifted.len();
    for x in from..n {
        if br.best >= sh.cap || sh.aborted.load(Ordering::Relaxed) {
            return;
        }
        if k + (n - x) <= br.best {
            return;
        }
        if counts.push(x) {
            dfs(sh, counts, x + 1, br);
            counts.pop();
        }
    }
}

fn run_branch(sh: &Shared<'_>, first: usize, second: usize, seed: usize) -> Branch {
    let mut br = Branch { best: seed, witness: None, nodes: 0 };
    let mut counts = Counts::new(sh.lifted, sh.encoder, sh.h, sh.g);
    if counts.push(first) && counts.push(second) {
        dfs(sh, &mut counts, second + 1, &mut br);
    }
    br
}

/// Greedy pass over `members` in order: a quick lower bound.
fn greedy_in_order(lifted: &[u64], encoder: &SumEncoder, h: usize, g: u32) -> Vec<usize> {
    let mut counts = Counts::new(lifted, encoder, h, g);
    for x in 0..lifted.len() {
        counts.push(x);
    }
    counts.chosen
}

/// F_h(G, g) for a product group, or F_h^d(N, g) for a box.
pub fn exhaustive_max(spec: &GroupSpec, h: usize, g: u64, opts: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    if h < 2 {
        return Err(Error::Precondition(format!("h = {h}; need h >= 2")));
    }
    if g == 0 {
        return Err(Error::Precondition("g must be at least 1".into()));
    }
    let g32 = u32::try_from(g).map_err(|_| Error::Precondition(format!("g = {g} is too large")))?;
    let members = spec.members()?;
    let encoder = SumEncoder::new(spec, h)?;
    if encoder.key_space() > MAX_TABLE {
        return Err(Error::BudgetExceeded { required: encoder.key_space() as u128, budget: MAX_TABLE as u128 });
    }
    let lifted: Vec<u64> = members.iter().map(|x| encoder.lift(x)).collect();
    let n = lifted.len();
    let cap = counting_cap(h, g, encoder.key_space(), n);

    let seed = greedy_in_order(&lifted, &encoder, h, g32);
    let firsts: Vec<usize> = match spec {
        GroupSpec::Product(_) => vec![0],
        GroupSpec::Box { .. } => (0..n).take_while(|&i| members[i].0[0] == 0).collect(),
    };
    let branches: Vec<(usize, usize)> = if seed.len() >= cap {
        Vec::new()
    } else {
        firsts.iter().flat_map(|&f| (f + 1..n).map(move |s| (f, s))).collect()
    };

    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let shared = Shared {
        lifted: &lifted,
        encoder: &encoder,
        h,
        g: g32,
        cap,
        budget: opts.node_budget,
        nodes: &nodes,
        aborted: &aborted,
    };
    let run = |&(f, s): &(usize, usize)| run_branch(&shared, f, s, seed.len());
    let results: Vec<Branch> = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?;
        pool.install(|| branches.par_iter().map(run).collect())
    } else {
        branches.iter().map(run).collect()
    };

    let mut best = seed.clone();
    for br in &results {
        if let Some(w) = &br.witness {
            if w.len() > best.len() {
                best = w.clone();
            }
        }
    }
    let nodes_explored = results.iter().map(|b| b.nodes).sum::<u64>();
    let witness = BhgSet::new(spec.clone(), best.iter().map(|&i| members[i].clone()).collect(), h, Some(g))?;
    Ok(SearchResult {
        spec: spec.clone(),
        h,
        g,
        best_size: witness.len(),
        witness,
        exhaustive: !aborted.load(Ordering::Relaxed),
        nodes_explored,
        elapsed: start.elapsed(),
    })
}

/// First `count` terms of the greedy B_h[g] sequence of positive integers
/// starting from 1.
pub fn greedy_bhg(h: usize, g: u64, count: usize) -> Result<BhgSet> {
    if h < 2 {
        return Err(Error::Precondition(format!("h = {h}; need h >= 2")));
    }
    if g == 0 || count == 0 {
        return Err(Error::Precondition("g and count must be at least 1".into()));
    }
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut terms: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 1u64;
    while terms.len() < count {
        let mut keys = Vec::new();
        let mut ok = true;
        for j in 1..=h {
            ok = sums_of(&terms, 0, h - j, candidate * j as u64, &mut |s| {
                let slot = counts.entry(s).or_insert(0);
                *slot += 1;
                keys.push(s);
                *slot <= g
            });
            if !ok {
                break;
            }
        }
        if ok {
            terms.push(candidate);
        } else {
            for k in keys {
                *counts.get_mut(&k).expect("counted") -= 1;
            }
        }
        candidate += 1;
    }
    let side = terms.last().copied().unwrap_or(1) + 1;
    BhgSet::from_ints(GroupSpec::boxed(1, side)?, &terms, h, Some(g))
}

/// Both sides of F_h(N^d, g) <= F_h^d(N, g), with the base-N lift of the
/// one-dimensional optimum.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub side: u64,
    pub dim: usize,
    pub h: usize,
    pub g: u64,
    pub one_dim: SearchResult,
    pub lifted_witness: BhgSet,
    pub lifted_is_bhg: bool,
    pub multi_dim: SearchResult,
    /// `F_h^d(N, g) - F_h(N^d, g)`.
    pub gap: i64,
    /// Inequality holds and the lifted optimum verifies. Only meaningful as
    /// a proof when both searches are exhaustive.
    pub holds: bool,
}

pub fn bound_gap_report(side: u64, dim: usize, h: usize, g: u64, opts: &SearchOptions) -> Result<GapReport> {
    let length = u32::try_from(dim)
        .ok()
        .and_then(|d| side.checked_pow(d))
        .ok_or_else(|| Error::Precondition(format!("{side}^{dim} overflows")))?;
    let one_dim = exhaustive_max(&GroupSpec::boxed(1, length)?, h, g, opts)?;
    let lifted = base_digits(&one_dim.witness, side, dim)?.set;
    let lifted_is_bhg = is_bhg(&lifted, h, g, &VerifyOptions { threads: opts.threads, ..Default::default() })?.holds;
    let multi_dim = exhaustive_max(&GroupSpec::boxed(dim, side)?, h, g, opts)?;
    let gap = multi_dim.best_size as i64 - one_dim.best_size as i64;
    Ok(GapReport {
        side,
        dim,
        h,
        g,
        holds: gap >= 0 && lifted_is_bhg,
        one_dim,
        lifted_witness: lifted,
        lifted_is_bhg,
        multi_dim,
        gap,
    })
}
