//! Explicit B_h[g] constructions.
//!
//! Each construction returns its set together with the (h, g) it is proven
//! to satisfy, except [`translate_union`], whose g must be measured.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_field::{DlogTable, FieldElement, FieldSpec};
use crate::groups::{BhgSet, GroupElement, GroupSpec};

/// The (h, g) guaranteed for a constructed set, with provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionCertificate {
    pub construction: String,
    pub parameters: Vec<(String, String)>,
    pub h: usize,
    pub g: u64,
    pub source: Option<String>,
}

impl ConstructionCertificate {
    fn new(construction: &str, parameters: Vec<(&str, String)>, h: usize, g: u64) -> Self {
        ConstructionCertificate {
            construction: construction.to_string(),
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            h,
            g,
            source: None,
        }
    }
}

impl fmt::Display for ConstructionCertificate {
    /// `name k=v k=v`, used as the set-file provenance record.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.construction)?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        if let Some(src) = &self.source {
            write!(f, " source=[{src}]")?;
        }
        Ok(())
    }
}

/// A constructed set and, where one is proven, its certificate.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub set: BhgSet,
    pub certificate: Option<ConstructionCertificate>,
}

/// The moment curve `{(x, x^2, ..., x^h)}` in field coordinates.
#[derive(Clone, Debug)]
pub struct MomentCurve {
    pub field: FieldSpec,
    pub h: usize,
    /// One point per field element, in canonical element order.
    pub points: Vec<Vec<FieldElement>>,
    pub certificate: ConstructionCertificate,
}

impl MomentCurve {
    /// Applies the coefficient-vector isomorphism to every coordinate,
    /// giving a set in Z_p^{hn}.
    pub fn vectorize(&self) -> Result<Constructed> {
        let p = self.field.p();
        let spec = GroupSpec::product(vec![p; self.h * self.field.n()])?;
        let elements = self
            .points
            .iter()
            .map(|pt| {
                let mut coords = Vec::with_capacity(self.h * self.field.n());
                for x in pt {
                    coords.extend(self.field.vectorize(x)?);
                }
                Ok(GroupElement(coords))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut certificate = self.certificate.clone();
        certificate.parameters.push(("vectorize".into(), "true".into()));
        Ok(Constructed { set: BhgSet::new(spec, elements, self.h, Some(1))?, certificate: Some(certificate) })
    }
}

/// Field parameters for provenance; the modulus only matters when n > 1.
fn field_params(field: &FieldSpec, params: &mut Vec<(&str, String)>) {
    if field.n() > 1 {
        let tail = field.modulus().iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        params.push(("modulus", tail));
    }
}

/// Moment curve over `field`; a B_h set when the characteristic exceeds h.
pub fn moment_curve(field: &FieldSpec, h: usize) -> Result<MomentCurve> {
    if h < 2 {
        return Err(Error::Precondition(format!("h = {h}; need h >= 2")));
    }
    if field.p() <= h as u64 {
        return Err(Error::Precondition(format!(
            "characteristic {} must exceed h = {h}",
            field.p()
        )));
    }
    let points = field
        .elements()
        .map(|x| {
            let mut pt = Vec::with_capacity(h);
            let mut pw = x.clone();
            for _ in 0..h {
                pt.push(pw.clone());
                pw = field.mul(&pw, &x)?;
            }
            Ok(pt)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut params = vec![("p", field.p().to_string()), ("n", field.n().to_string()), ("h", h.to_string())];
    field_params(field, &mut params);
    let certificate = ConstructionCertificate::new("moment", params, h, 1);
    Ok(MomentCurve { field: field.clone(), h, points, certificate })
}

/// Moment curve over GF(p^n) mapped into Z_p^{hn}. Without an explicit
/// modulus tail the canonical one is used.
pub fn moment_curve_vectorized(p: u64, n: usize, h: usize, modulus: Option<Vec<u64>>) -> Result<Constructed> {
    let field = match modulus {
        Some(m) => {
            if m.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.len() });
            }
            FieldSpec::new(p, m)?
        }
        None => FieldSpec::canonical(p, n)?,
    };
    moment_curve(&field, h)?.vectorize()
}

fn one_dimensional(input: &BhgSet) -> Result<()> {
    if input.spec.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: input.spec.dim() });
    }
    Ok(())
}

/// Exactly `dim` base-`base` digits of `value`, most significant first.
pub fn to_digits(value: u64, base: u64, dim: usize) -> Vec<u64> {
    let mut digits = vec![0; dim];
    let mut v = value;
    for d in digits.iter_mut().rev() {
        *d = v % base;
        v /= base;
    }
    digits
}

/// Inverse of [`to_digits`].
pub fn from_digits(digits: &[u64], base: u64) -> u64 {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Writes each integer of a one-dimensional set as a `dim`-digit base-`base`
/// tuple, giving a set inside [0, base-1]^dim of Z^dim with the same (h, g).
pub fn base_digits(input: &BhgSet, base: u64, dim: usize) -> Result<Constructed> {
    one_dimensional(input)?;
    if base < 2 {
        return Err(Error::Precondition(format!("base {base} is below 2")));
    }
    let limit = u32::try_from(dim)
        .ok()
        .and_then(|d| base.checked_pow(d))
        .ok_or_else(|| Error::Precondition(format!("{base}^{dim} overflows")))?;
    let elements = input
        .ints()
        .into_iter()
        .map(|v| {
            if v >= limit {
                return Err(Error::Precondition(format!("element {v} is not below {base}^{dim} = {limit}")));
            }
            Ok(GroupElement(to_digits(v, base, dim)))
        })
        .collect::<Result<Vec<_>>>()?;
    let set = BhgSet::new(GroupSpec::boxed(dim, base)?, elements, input.h, input.g)?;
    let certificate = input.g.map(|g| {
        let mut c = ConstructionCertificate::new(
            "digits",
            vec![("base", base.to_string()), ("dim", dim.to_string())],
            input.h,
            g,
        );
        c.source = Some(format!("{} h={} g={}", input.spec, input.h, g));
        c
    });
    Ok(Constructed { set, certificate })
}

/// `A + c*m` over all `c` in `coeffs`, as integers. No certificate: the
/// multiplicity of the result depends on the instance.
pub fn translate_union(input: &BhgSet, m: u64, coeffs: &[u64]) -> Result<Constructed> {
    one_dimensional(input)?;
    if coeffs.is_empty() {
        return Err(Error::Precondition("no translate multipliers given".into()));
    }
    let distinct: BTreeSet<u64> = coeffs.iter().copied().collect();
    if distinct.len() != coeffs.len() {
        return Err(Error::Precondition("translate multipliers must be distinct".into()));
    }
    let base = input.ints();
    if let Some(v) = base.iter().find(|&&v| v >= m) {
        return Err(Error::Precondition(format!("element {v} is not below m = {m}")));
    }
    let top = *distinct.iter().next_back().expect("non-empty");
    let side = (top + 1)
        .checked_mul(m)
        .ok_or_else(|| Error::Precondition("translate range overflows".into()))?;
    let elements: Vec<u64> = distinct.iter().flat_map(|&c| base.iter().map(move |&a| a + c * m)).collect();
    let set = BhgSet::from_ints(GroupSpec::boxed(1, side)?, &elements, input.h, None)?;
    Ok(Constructed { set, certificate: None })
}

/// Result of [`modular_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub set: BhgSet,
    pub certificate: ConstructionCertificate,
    /// Input elements lost to coincidences, `|input| - |output|`.
    pub collisions: usize,
}

/// Reduces coordinate i modulo `m_i / g_i`. The image is B_h[g * prod g_i]
/// because the kernel of the reduction has `prod g_i` elements.
pub fn modular_reduce(input: &BhgSet, divisors: &[u64]) -> Result<Reduction> {
    let GroupSpec::Product(moduli) = &input.spec else {
        return Err(Error::Precondition("modular reduction needs a product group".into()));
    };
    if divisors.len() != moduli.len() {
        return Err(Error::DimensionMismatch { expected: moduli.len(), found: divisors.len() });
    }
    let g = input
        .g
        .ok_or_else(|| Error::Precondition("input set carries no claimed g".into()))?;
    let mut reduced = Vec::with_capacity(moduli.len());
    for (&m, &d) in moduli.iter().zip(divisors) {
        if d == 0 || m % d != 0 {
            return Err(Error::Precondition(format!("{d} does not divide {m}")));
        }
        reduced.push(m / d);
    }
    let spec = GroupSpec::product(reduced.clone())?;
    let image: BTreeSet<GroupElement> = input
        .elements()
        .iter()
        .map(|x| GroupElement(x.0.iter().zip(&reduced).map(|(c, r)| c % r).collect()))
        .collect();
    let collisions = input.len() - image.len();
    let kernel = divisors
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d))
        .and_then(|k| k.checked_mul(g))
        .ok_or_else(|| Error::Precondition("certificate bound overflows".into()))?;
    let divs = divisors.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut certificate = ConstructionCertificate::new("reduce", vec![("divisors", divs)], input.h, kernel);
    certificate.source = Some(format!("{} h={} g={}", input.spec, input.h, g));
    let set = BhgSet::new(spec, image.into_iter().collect(), input.h, Some(kernel))?;
    Ok(Reduction { set, certificate, collisions })
}

/// `{(i, log_beta(a - alpha^i)) : i = 1..q-1, alpha^i != a}` in
/// Z_{q-1} x Z_{q-1}; a Sidon set with q - 2 elements. The index q-1 is
/// stored as 0.
pub fn golomb_set(field: &FieldSpec, alpha: &FieldElement, beta: &FieldElement, a: &FieldElement) -> Result<Constructed> {
    let q = field.order();
    if q < 3 {
        return Err(Error::Precondition(format!("q = {q}; need q >= 3")));
    }
    if !field.is_primitive(alpha) {
        return Err(Error::NotPrimitive(field.format_element(alpha)));
    }
    if !field.contains(a) {
        return Err(Error::InvalidElement(format!("{:?}", a.coeffs())));
    }
    if a.is_zero() {
        return Err(Error::Precondition("a must be nonzero".into()));
    }
    let logs = DlogTable::new(field, beta)?;
    let mut elements = Vec::with_capacity(q as usize - 2);
    let mut pw = field.one();
    for i in 1..q {
        pw = field.mul(&pw, alpha)?;
        if &pw == a {
            continue;
        }
        let e = logs.log(&field.sub(a, &pw)?)?;
        elements.push(GroupElement(vec![i % (q - 1), e]));
    }
    let spec = GroupSpec::product(vec![q - 1, q - 1])?;
    let mut params = vec![
        ("q", q.to_string()),
        ("alpha", field.format_element(alpha)),
        ("beta", field.format_element(beta)),
        ("a", field.format_element(a)),
    ];
    field_params(field, &mut params);
    let certificate = ConstructionCertificate::new("golomb", params, 2, 1);
    Ok(Constructed { set: BhgSet::new(spec, elements, 2, Some(1))?, certificate: Some(certificate) })
}
