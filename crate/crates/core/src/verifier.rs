//! Brute-force representation counting.
//!
//! Every size-h multiset of the candidate set (summands may repeat, order
//! is ignored) is enumerated and its sum is tallied. The set is B_h[g]
//! exactly when no sum is reached more than g times.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{BhgSet, GroupElement, GroupSpec, SumEncoder};
use crate::multiset::multiset_count;

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Counting convention reported alongside every result.
pub const CONVENTION: &str = "multiset-repetition";

/// Most representations kept in a witness.
const WITNESS_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Largest number of multisets the oracle will enumerate.
    pub budget: u128,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: DEFAULT_BUDGET, threads: 1 }
    }
}

/// A sum together with distinct multisets realising it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sum: GroupElement,
    pub representations: Vec<Vec<GroupElement>>,
}

#[derive(Clone, Debug)]
pub struct RepProfile {
    pub spec: GroupSpec,
    pub h: usize,
    pub counts: BTreeMap<GroupElement, u64>,
    pub max_count: u64,
    /// Smallest sum attaining `max_count`, present when `max_count > 1`.
    pub witness: Option<Witness>,
    pub multisets: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BhgCheck {
    pub holds: bool,
    pub max_count: u64,
    /// On failure: a sum with `g + 1` distinct representations.
    pub witness: Option<Witness>,
}

struct Tally {
    encoder: SumEncoder,
    counts: HashMap<u64, u64>,
    multisets: u128,
}

fn check_h(h: usize) -> Result<()> {
    if h < 2 {
        return Err(Error::Precondition(format!("h = {h}; need h >= 2")));
    }
    Ok(())
}

fn tally(set: &BhgSet, h: usize, opts: &VerifyOptions) -> Result<Tally> {
    check_h(h)?;
    let multisets = multiset_count(set.len(), h);
    if multisets > opts.budget {
        return Err(Error::BudgetExceeded { required: multisets, budget: opts.budget });
    }
    let encoder = SumEncoder::new(&set.spec, h)?;
    let lifted: Vec<u64> = set.elements().iter().map(|x| encoder.lift(x)).collect();

    let count_branch = |first: usize| {
        let mut local = HashMap::new();
        walk(&lifted, first, h - 1, lifted[first], &mut |s| {
            *local.entry(encoder.reduce(s)).or_insert(0u64) += 1;
        });
        local
    };
    let merge = |mut a: HashMap<u64, u64>, b: HashMap<u64, u64>| {
        for (k, v) in b {
            *a.entry(k).or_insert(0) += v;
        }
        a
    };

    let counts = if opts.threads > 1 && lifted.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?;
        pool.install(|| (0..lifted.len()).into_par_iter().map(count_branch).reduce(HashMap::new, merge))
    } else {
        (0..lifted.len()).map(count_branch).fold(HashMap::new(), merge)
    };
    Ok(Tally { encoder, counts, multisets })
}

/// Visits every non-decreasing continuation of length `left` starting at
/// index `from`, passing the lifted sum.
fn walk(lifted: &[u64], from: usize, left: usize, partial: u64, visit: &mut impl FnMut(u64)) {
    if left == 0 {
        visit(partial);
        return;
    }
    for i in from..lifted.len() {
        walk(lifted, i, left - 1, partial + lifted[i], visit);
    }
}

/// First `limit` multisets (lexicographic index order) whose sum has
/// reduced key `key`.
fn representations(set: &BhgSet, encoder: &SumEncoder, key: u64, limit: usize) -> Vec<Vec<GroupElement>> {
    let lifted: Vec<u64> = set.elements().iter().map(|x| encoder.lift(x)).collect();
    let h = encoder.h();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(h);
    collect(&lifted, 0, h, 0, &mut stack, &mut |idx, s| {
        if out.len() < limit && encoder.reduce(s) == key {
            out.push(idx.iter().map(|&i| set.elements()[i].clone()).collect());
        }
        out.len() < limit
    });
    out
}

fn collect(
    lifted: &[u64],
    from: usize,
    left: usize,
    partial: u64,
    stack: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], u64) -> bool,
) -> bool {
    if left == 0 {
        return visit(stack, partial);
    }
    for i in from..lifted.len() {
        stack.push(i);
        let go_on = collect(lifted, i, left - 1, partial + lifted[i], stack, visit);
        stack.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// Representation count of every realised h-fold sum.
pub fn rep_profile(set: &BhgSet, h: usize, opts: &VerifyOptions) -> Result<RepProfile> {
    let t = tally(set, h, opts)?;
    let max_count = t.counts.values().copied().max().unwrap_or(0);
    let witness = if max_count > 1 {
        let key = t.counts.iter().filter(|(_, &c)| c == max_count).map(|(&k, _)| k).min().expect("max exists");
        let limit = (max_count as usize).min(WITNESS_LIMIT);
        Some(Witness { sum: t.encoder.decode(key), representations: representations(set, &t.encoder, key, limit) })
    } else {
        None
    };
    let counts = t.counts.iter().map(|(&k, &c)| (t.encoder.decode(k), c)).collect();
    Ok(RepProfile { spec: set.spec.clone(), h, counts, max_count, witness, multisets: t.multisets })
}

/// Least g for which the set is B_h[g].
pub fn min_g(set: &BhgSet, h: usize, opts: &VerifyOptions) -> Result<u64> {
    let t = tally(set, h, opts)?;
    Ok(t.counts.values().copied().max().unwrap_or(0))
}

/// Decides B_h[g]. A failing check carries a sum with `g + 1` distinct
/// representations.
pub fn is_bhg(set: &BhgSet, h: usize, g: u64, opts: &VerifyOptions) -> Result<BhgCheck> {
    let t = tally(set, h, opts)?;
    let max_count = t.counts.values().copied().max().unwrap_or(0);
    if max_count <= g {
        return Ok(BhgCheck { holds: true, max_count, witness: None });
    }
    let key = t.counts.iter().filter(|(_, &c)| c == max_count).map(|(&k, _)| k).min().expect("max exists");
    let limit = (g as usize).saturating_add(1).min(WITNESS_LIMIT);
    let witness = Witness { sum: t.encoder.decode(key), representations: representations(set, &t.encoder, key, limit) };
    Ok(BhgCheck { holds: false, max_count, witness: Some(witness) })
}
