//! Exact arithmetic in GF(p) and GF(p^n).
//!
//! A field is described by a prime `p` and a monic irreducible modulus of
//! degree `n`. Elements are coefficient tuples over Z_p stored high-to-low,
//! `(a_{n-1}, ..., a_0)` for `a_0 + a_1 t + ... + a_{n-1} t^{n-1}`, where `t`
//! is the class of `x`. The same high-to-low order is used for the modulus
//! tail `(c_{n-1}, ..., c_0)` of `x^n + c_{n-1} x^{n-1} + ... + c_0`.
//!
//! Elements have a canonical index: the coefficient tuple read as a base-p
//! integer. Enumeration, "smallest" searches and discrete-log tables all use
//! that order.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on `p^n` for enumeration-based routines.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` in increasing order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^n` into `(p, n)`.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        n += 1;
    }
    Some((p, n))
}

/// An element of GF(p^n), coefficients high-to-low.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// GF(p^n) given by a prime and a monic irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p, n: 1, modulus: vec![0] })
    }

    /// GF(p^n) with an explicit modulus tail `(c_{n-1}, ..., c_0)`.
    ///
    /// The tail length fixes `n`. Degree-one moduli are normalised to `x`
    /// since every linear modulus gives plain arithmetic mod p.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.is_empty() {
            return Err(Error::InvalidField("modulus must have degree at least 1".into()));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidField(format!("coefficient {c} is not reduced mod {p}")));
        }
        if modulus.len() == 1 {
            return Self::prime(p);
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::Reducible(format_modulus(&modulus)));
        }
        Ok(FieldSpec { p, n: modulus.len(), modulus })
    }

    /// GF(p^n) with the lexicographically smallest irreducible modulus.
    pub fn canonical(p: u64, n: usize) -> Result<Self> {
        let modulus = find_irreducible(p, n, DEFAULT_FIELD_BUDGET)?;
        Ok(FieldSpec { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Modulus tail, high-to-low, without the implicit leading 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, `p^n`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.n as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Constant element `v mod p`.
    pub fn from_int(&self, v: u64) -> FieldElement {
        let mut coeffs = vec![0; self.n];
        coeffs[self.n - 1] = v % self.p;
        FieldElement { coeffs }
    }

    /// Builds an element from a high-to-low coefficient tuple.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        let x = FieldElement { coeffs: coeffs.to_vec() };
        self.check(&x)?;
        Ok(x)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.coeffs.len() == self.n && x.coeffs.iter().all(|&c| c < self.p)
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!("{:?}", x.coeffs)))
        }
    }

    /// Canonical index: the coefficient tuple read as a base-p integer.
    pub fn index(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0; self.n];
        for c in coeffs.iter_mut().rev() {
            *c = idx % self.p;
            idx /= self.p;
        }
        FieldElement { coeffs }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn neg(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, &self.neg_raw(y)))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    /// `x^e` by square-and-multiply; `x^0 = 1`.
    pub fn pow(&self, x: &FieldElement, e: u64) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.pow_raw(x, e))
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.is_zero() {
            return Err(Error::Precondition("zero is not invertible".into()));
        }
        Ok(self.pow_raw(x, self.order() - 2))
    }

    pub(crate) fn add_raw(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub(crate) fn neg_raw(&self, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        FieldElement { coeffs }
    }

    pub(crate) fn mul_raw(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let n = self.n;
        let p = self.p;
        // low-to-high scratch
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in x.coeffs.iter().rev().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().rev().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // x^n = -(c_{n-1} x^{n-1} + ... + c_0)
        for deg in (n..2 * n - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus.iter().rev().enumerate() {
                let k = deg - n + i;
                prod[k] = (prod[k] + (p - c) * m) % p;
            }
        }
        prod.truncate(n);
        prod.reverse();
        FieldElement { coeffs: prod }
    }

    pub(crate) fn pow_raw(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            base = self.mul_raw(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order is exactly `p^n - 1`.
    pub fn is_primitive(&self, x: &FieldElement) -> bool {
        if !self.contains(x) || x.is_zero() {
            return false;
        }
        let group = self.order() - 1;
        let one = self.one();
        prime_factors(group)
            .into_iter()
            .all(|r| self.pow_raw(x, group / r) != one)
    }

    /// Smallest primitive element in canonical order.
    pub fn find_primitive(&self) -> Result<FieldElement> {
        let q = self.order();
        if q > DEFAULT_FIELD_BUDGET {
            return Err(Error::BudgetExceeded { required: q as u128, budget: DEFAULT_FIELD_BUDGET as u128 });
        }
        (1..q)
            .map(|i| self.from_index(i))
            .find(|x| self.is_primitive(x))
            .ok_or_else(|| Error::InvalidField("no primitive element".into()))
    }

    /// Coefficient tuple, high-to-low. Additive isomorphism GF(p^n) -> Z_p^n.
    pub fn vectorize(&self, x: &FieldElement) -> Result<Vec<u64>> {
        self.check(x)?;
        Ok(x.coeffs.clone())
    }

    pub fn devectorize(&self, v: &[u64]) -> Result<FieldElement> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        self.element(v)
    }

    /// Renders `x` as a polynomial in `t`, e.g. `2t+1`, `t^2+2`, `0`.
    pub fn format_element(&self, x: &FieldElement) -> String {
        let n = x.coeffs.len();
        let terms: Vec<String> = x
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let deg = n - 1 - i;
                let coef = if c == 1 && deg > 0 { String::new() } else { c.to_string() };
                match deg {
                    0 => coef,
                    1 => format!("{coef}t"),
                    _ => format!("{coef}t^{deg}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Inverse of [`FieldSpec::format_element`]. Coefficients are reduced mod p.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let bad = || Error::InvalidElement(s.to_string());
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut coeffs = vec![0u64; self.n];
        for term in s.split('+') {
            let (coef, deg) = match term.find('t') {
                None => (term.parse::<u64>().map_err(|_| bad())?, 0),
                Some(pos) => {
                    let coef = if pos == 0 { 1 } else { term[..pos].parse().map_err(|_| bad())? };
                    let rest = &term[pos + 1..];
                    let deg = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                    };
                    (coef, deg)
                }
            };
            if deg >= self.n {
                return Err(bad());
            }
            let slot = &mut coeffs[self.n - 1 - deg];
            *slot = (*slot + coef % self.p) % self.p;
        }
        Ok(FieldElement { coeffs })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.n, format_modulus(&self.modulus))
    }
}

/// Human form of the monic polynomial with the given tail, e.g. `x^2+x+2`.
pub fn format_modulus(tail: &[u64]) -> String {
    let n = tail.len();
    let mut terms = vec![if n == 1 { "x".to_string() } else { format!("x^{n}") }];
    for (i, &c) in tail.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let deg = n - 1 - i;
        let coef = if c == 1 && deg > 0 { String::new() } else { c.to_string() };
        terms.push(match deg {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{deg}"),
        });
    }
    terms.join("+")
}

/// Remainder of `a` modulo monic `m`, both low-to-high over Z_p.
fn poly_rem_monic(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return r;
    }
    for deg in (dm..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for (i, &mc) in m.iter().enumerate() {
            let k = deg - dm + i;
            r[k] = (r[k] + (p - c) * mc % p) % p;
        }
    }
    r.truncate(dm);
    r
}

/// Low-to-high coefficients of the monic polynomial with the given tail.
fn monic_from_tail(tail: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = tail.iter().rev().copied().collect();
    v.push(1);
    v
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=n/2`.
pub fn is_irreducible(p: u64, tail: &[u64]) -> bool {
    let n = tail.len();
    if n == 1 {
        return true;
    }
    let f = monic_from_tail(tail);
    for k in 1..=n / 2 {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut div_tail = vec![0u64; k];
            let mut r = idx;
            for c in div_tail.iter_mut().rev() {
                *c = r % p;
                r /= p;
            }
            let rem = poly_rem_monic(p, &f, &monic_from_tail(&div_tail));
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `n`
/// over Z_p, returned as its high-to-low tail.
pub fn find_irreducible(p: u64, n: usize, budget: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidField("degree must be at least 1".into()));
    }
    let count = u32::try_from(n)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|&c| c <= budget)
        .ok_or(Error::BudgetExceeded {
            required: (p as u128).saturating_pow(n as u32),
            budget: budget as u128,
        })?;
    if n == 1 {
        return Ok(vec![0]);
    }
    for idx in 0..count {
        let mut tail = vec![0u64; n];
        let mut r = idx;
        for c in tail.iter_mut().rev() {
            *c = r % p;
            r /= p;
        }
        if is_irreducible(p, &tail) {
            return Ok(tail);
        }
    }
    Err(Error::InvalidField(format!("no irreducible polynomial of degree {n} over Z_{p}")))
}

/// Full discrete-log table for a primitive base.
#[derive(Clone, Debug)]
pub struct DlogTable {
    spec: FieldSpec,
    base: FieldElement,
    log: Vec<u64>,
}

impl DlogTable {
    pub fn new(spec: &FieldSpec, base: &FieldElement) -> Result<Self> {
        let q = spec.order();
        if q > DEFAULT_FIELD_BUDGET {
            return Err(Error::BudgetExceeded { required: q as u128, budget: DEFAULT_FIELD_BUDGET as u128 });
        }
        if !spec.is_primitive(base) {
            return Err(Error::NotPrimitive(spec.format_element(base)));
        }
        let mut log = vec![u64::MAX; q as usize];
        let mut x = spec.one();
        for e in 0..q - 1 {
            log[spec.index(&x) as usize] = e;
            x = spec.mul_raw(&x, base);
        }
        Ok(DlogTable { spec: spec.clone(), base: base.clone(), log })
    }

    pub fn base(&self) -> &FieldElement {
        &self.base
    }

    /// The unique `e` in `[0, q-2]` with `base^e = x`.
    pub fn log(&self, x: &FieldElement) -> Result<u64> {
        self.spec.check(x)?;
        if x.is_zero() {
            return Err(Error::ZeroLog);
        }
        Ok(self.log[self.spec.index(x) as usize])
    }
}

/// One-shot discrete logarithm; builds the table on every call.
pub fn dlog(spec: &FieldSpec, base: &FieldElement, x: &FieldElement) -> Result<u64> {
    DlogTable::new(spec, base)?.log(x)
}
