//! Combinations with repetition.

/// Number of size-`k` multisets drawn from `n` items, `C(n+k-1, k)`.
/// Saturates at `u128::MAX`.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let top = (n + k - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (top - i) / (i + 1) stays integral at every step
        match acc.checked_mul(top - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Non-decreasing index tuples `i_1 <= ... <= i_k` over `0..n`, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Multisets {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Multisets {
    pub fn new(n: usize, k: usize) -> Self {
        Multisets { n, cur: vec![0; k], done: n == 0 && k > 0 }
    }
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        match self.cur.iter().rposition(|&i| i + 1 < self.n) {
            Some(pos) => {
                let v = self.cur[pos] + 1;
                for slot in &mut self.cur[pos..] {
                    *slot = v;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}
