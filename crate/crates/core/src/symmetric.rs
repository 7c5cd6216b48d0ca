//! Power sums, elementary symmetric values and Newton's identities over a
//! finite field, plus root-multiset recovery.
//!
//! Together these give a constructive check of the moment-curve argument:
//! a multiset of size n over a field of characteristic p > n is determined
//! by its first n power sums.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::multiset::Multisets;

/// Elementary symmetric values and power sums of one multiset. `sigma[0]`
/// holds sigma_1; sigma_0 = 1 is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricProfile {
    pub spec: FieldSpec,
    pub sigma: Vec<FieldElement>,
    pub power: Vec<FieldElement>,
}

impl SymmetricProfile {
    /// Profile of `values` up to degree `values.len()`, both routes computed
    /// directly (no Newton recursion).
    pub fn of(spec: &FieldSpec, values: &[FieldElement]) -> Result<Self> {
        Ok(SymmetricProfile {
            spec: spec.clone(),
            sigma: elementary_symmetric(spec, values)?,
            power: power_sums(spec, values, values.len())?,
        })
    }

    pub fn k(&self) -> usize {
        self.sigma.len()
    }
}

/// `(p_1, ..., p_k)` with `p_j = sum of x^j`.
pub fn power_sums(spec: &FieldSpec, values: &[FieldElement], k: usize) -> Result<Vec<FieldElement>> {
    let mut sums = vec![spec.zero(); k];
    for x in values {
        let mut pw = spec.one();
        for s in sums.iter_mut() {
            pw = spec.mul(&pw, x)?;
            *s = spec.add_raw(s, &pw);
        }
    }
    Ok(sums)
}

/// `(sigma_1, ..., sigma_n)` by expanding `prod (1 + x_i z)` term by term.
pub fn elementary_symmetric(spec: &FieldSpec, values: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let mut e = vec![spec.zero(); values.len() + 1];
    e[0] = spec.one();
    for (i, x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let term = spec.mul(&e[k - 1], x)?;
            e[k] = spec.add_raw(&e[k], &term);
        }
    }
    e.remove(0);
    Ok(e)
}

/// Newton's identities, `k sigma_k = sum_{i=1..k} (-1)^{i-1} sigma_{k-i} p_i`.
///
/// Every step divides by `k`, so the characteristic must exceed the
/// length of `power`.
pub fn sigma_from_power_sums(spec: &FieldSpec, power: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let k_max = power.len();
    if (spec.p() as u128) <= k_max as u128 {
        return Err(Error::SmallCharacteristic { p: spec.p(), k: k_max });
    }
    let mut sigma = Vec::with_capacity(k_max + 1);
    sigma.push(spec.one());
    for k in 1..=k_max {
        let mut acc = spec.zero();
        for i in 1..=k {
            let term = spec.mul(&sigma[k - i], &power[i - 1])?;
            acc = if i % 2 == 1 { spec.add_raw(&acc, &term) } else { spec.sub(&acc, &term)? };
        }
        let inv_k = spec.inv(&spec.from_int(k as u64))?;
        sigma.push(spec.mul_raw(&acc, &inv_k));
    }
    sigma.remove(0);
    Ok(sigma)
}

/// Outcome of [`roots_from_sigma`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootRecovery {
    /// Root multiset in canonical element order.
    Roots(Vec<FieldElement>),
    /// The polynomial has fewer than `n` roots in the field.
    NoSplit,
}

/// Recovers the multiset whose elementary symmetric values are `sigma` by
/// scanning the field for roots of `sum (-1)^k sigma_k lambda^{n-k}` and
/// dividing each one out as often as it divides.
pub fn roots_from_sigma(spec: &FieldSpec, sigma: &[FieldElement]) -> Result<RootRecovery> {
    let n = sigma.len();
    if n == 0 {
        return Err(Error::Precondition("need at least one symmetric value".into()));
    }
    // high-to-low coefficients of the monic polynomial
    let mut poly = Vec::with_capacity(n + 1);
    poly.push(spec.one());
    for (i, s) in sigma.iter().enumerate() {
        poly.push(if i % 2 == 0 { spec.neg(s)? } else { s.clone() });
    }
    let mut roots = Vec::with_capacity(n);
    for r in spec.elements() {
        while poly.len() > 1 {
            let (quotient, rem) = synthetic_division(spec, &poly, &r);
            if !rem.is_zero() {
                break;
            }
            roots.push(r.clone());
            poly = quotient;
        }
        if poly.len() == 1 {
            break;
        }
    }
    if roots.len() == n {
        Ok(RootRecovery::Roots(roots))
    } else {
        Ok(RootRecovery::NoSplit)
    }
}

/// Divides a high-to-low polynomial by `(lambda - r)`.
fn synthetic_division(spec: &FieldSpec, poly: &[FieldElement], r: &FieldElement) -> (Vec<FieldElement>, FieldElement) {
    let mut out = Vec::with_capacity(poly.len() - 1);
    let mut acc = spec.zero();
    for c in poly {
        acc = spec.add_raw(&spec.mul_raw(&acc, r), c);
        out.push(acc.clone());
    }
    let rem = out.pop().expect("non-empty polynomial");
    (out, rem)
}

/// Searches for two distinct size-`n` multisets with equal power sums
/// `p_1..p_n`. Returns `None` when the power sums are injective.
pub fn power_sum_collision(spec: &FieldSpec, n: usize) -> Result<Option<(Vec<FieldElement>, Vec<FieldElement>)>> {
    let all: Vec<FieldElement> = spec.elements().collect();
    let mut seen: HashMap<Vec<FieldElement>, Vec<FieldElement>> = HashMap::new();
    for idx in Multisets::new(all.len(), n) {
        let ms: Vec<FieldElement> = idx.iter().map(|&i| all[i].clone()).collect();
        let key = power_sums(spec, &ms, n)?;
        if let Some(prev) = seen.get(&key) {
            return Ok(Some((prev.clone(), ms)));
        }
        seen.insert(key, ms);
    }
    Ok(None)
}
