//! Ambient groups for d-tuples.
//!
//! `Product` is Z_{m_1} x ... x Z_{m_d} with componentwise reduction. `Box`
//! is Z^d restricted to members drawn from [0, N-1]^d; sums are never
//! reduced, so they may leave the box.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<u64>> for GroupElement {
    fn from(v: Vec<u64>) -> Self {
        GroupElement(v)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    Product(Vec<u64>),
    Box { dim: usize, side: u64 },
}

impl GroupSpec {
    pub fn product(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup("product needs at least one factor".into()));
        }
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("modulus {m} is below 2")));
        }
        Ok(GroupSpec::Product(moduli))
    }

    pub fn boxed(dim: usize, side: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGroup("box dimension must be at least 1".into()));
        }
        if side < 2 {
            return Err(Error::InvalidGroup(format!("box side {side} is below 2")));
        }
        Ok(GroupSpec::Box { dim, side })
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::Product(m) => m.len(),
            GroupSpec::Box { dim, .. } => *dim,
        }
    }

    /// Group order for products; `None` for boxes, whose sums are unreduced.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::Product(m) => m.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x)),
            GroupSpec::Box { .. } => None,
        }
    }

    /// Number of candidate members: the group order or the box volume.
    pub fn volume(&self) -> Option<u64> {
        match self {
            GroupSpec::Product(_) => self.order(),
            GroupSpec::Box { dim, side } => side.checked_pow(*dim as u32),
        }
    }

    /// Per-coordinate exclusive upper bound for members.
    pub fn bounds(&self) -> Vec<u64> {
        match self {
            GroupSpec::Product(m) => m.clone(),
            GroupSpec::Box { dim, side } => vec![*side; *dim],
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.dim() == self.dim() && x.0.iter().zip(self.bounds()).all(|(&c, b)| c < b)
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        if !self.contains(x) {
            return Err(Error::InvalidGroupElement(x.to_string()));
        }
        Ok(())
    }

    /// All members in lexicographic order.
    pub fn members(&self) -> Result<Vec<GroupElement>> {
        let bounds = self.bounds();
        let total = self
            .volume()
            .filter(|&v| v <= 1 << 24)
            .ok_or_else(|| Error::InvalidGroup(format!("{self} is too large to enumerate")))?;
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; bounds.len()];
        for _ in 0..total {
            out.push(GroupElement(cur.clone()));
            for i in (0..cur.len()).rev() {
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
        Ok(out)
    }

    /// Ambient addition: componentwise mod m_i for products, plain integer
    /// sums for boxes. Operands of a box sum may themselves be sums.
    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let d = self.dim();
        for v in [x, y] {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
            }
        }
        let coords = match self {
            GroupSpec::Product(m) => {
                for v in [x, y] {
                    self.check(v)?;
                }
                x.0.iter().zip(&y.0).zip(m).map(|((a, b), m)| (a + b) % m).collect()
            }
            GroupSpec::Box { .. } => x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect(),
        };
        Ok(GroupElement(coords))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.dim()])
    }
}

/// Sum of a multiset of summands; the counting key for representations.
pub fn canonical_sum_key(spec: &GroupSpec, summands: &[GroupElement]) -> Result<GroupElement> {
    let (first, rest) = summands
        .split_first()
        .ok_or_else(|| Error::Precondition("empty multiset has no sum".into()))?;
    spec.check(first)?;
    rest.iter().try_fold(first.clone(), |acc, x| {
        spec.check(x)?;
        spec.add(&acc, x)
    })
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Product(m) => {
                let parts: Vec<String> = m.iter().map(u64::to_string).collect();
                write!(f, "product:{}", parts.join(","))
            }
            GroupSpec::Box { dim, side } => write!(f, "box:{dim},{side}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `product:m1,...,md` or `box:d,N`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidGroup(format!("{s}: {msg}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let nums: Vec<u64> = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("expected comma-separated integers"))?;
        match kind {
            "product" => GroupSpec::product(nums),
            "box" => match nums[..] {
                [d, n] => GroupSpec::boxed(d as usize, n),
                _ => Err(bad("box takes dimension and side")),
            },
            _ => Err(bad("unknown group kind")),
        }
    }
}

/// A finite candidate set with its ambient group and claimed parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhgSet {
    pub spec: GroupSpec,
    elements: Vec<GroupElement>,
    pub h: usize,
    pub g: Option<u64>,
}

impl BhgSet {
    /// Validates membership and stores the elements sorted. Duplicates are
    /// rejected.
    pub fn new(spec: GroupSpec, mut elements: Vec<GroupElement>, h: usize, g: Option<u64>) -> Result<Self> {
        if h < 2 {
            return Err(Error::Precondition(format!("h = {h}; need h >= 2")));
        }
        if g == Some(0) {
            return Err(Error::Precondition("g must be at least 1".into()));
        }
        for x in &elements {
            spec.check(x)?;
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!("duplicate element {}", w[0])));
        }
        Ok(BhgSet { spec, elements, h, g })
    }

    /// One-dimensional convenience constructor.
    pub fn from_ints(spec: GroupSpec, values: &[u64], h: usize, g: Option<u64>) -> Result<Self> {
        Self::new(spec, values.iter().map(|&v| GroupElement(vec![v])).collect(), h, g)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// First coordinates of a one-dimensional set.
    pub fn ints(&self) -> Vec<u64> {
        self.elements.iter().map(|e| e.0[0]).collect()
    }
}

/// Packs elements into integers so that an h-fold sum is a plain integer sum
/// followed by [`SumEncoder::reduce`].
///
/// Each coordinate gets radix `h*(b-1)+1` where `b` is its bound, so digit
/// sums of up to `h` members never carry. Reduced keys use radix `m_i` for
/// products and stay lifted for boxes; in both cases key order matches
/// lexicographic element order.
#[derive(Clone, Debug)]
pub struct SumEncoder {
    lift_radix: Vec<u64>,
    moduli: Option<Vec<u64>>,
    h: usize,
}

impl SumEncoder {
    pub fn new(spec: &GroupSpec, h: usize) -> Result<Self> {
        let bounds = spec.bounds();
        let lift_radix: Vec<u64> = bounds.iter().map(|&b| h as u64 * (b - 1) + 1).collect();
        lift_radix
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::InvalidGroup(format!("{spec} sums do not fit in 64-bit keys")))?;
        let moduli = match spec {
            GroupSpec::Product(m) => Some(m.clone()),
            GroupSpec::Box { .. } => None,
        };
        Ok(SumEncoder { lift_radix, moduli, h })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn lift(&self, x: &GroupElement) -> u64 {
        x.0.iter().zip(&self.lift_radix).fold(0, |acc, (&c, &r)| acc * r + c)
    }

    /// Maps the integer sum of up to `h` lifted members to its group key.
    pub fn reduce(&self, mut s: u64) -> u64 {
        let Some(moduli) = &self.moduli else {
            return s;
        };
        let mut key = 0;
        let mut scale = 1;
        for (&r, &m) in self.lift_radix.iter().zip(moduli).rev() {
            key += (s % r) % m * scale;
            scale *= m;
            s /= r;
        }
        key
    }

    /// Exclusive upper bound of reduced keys.
    pub fn key_space(&self) -> u64 {
        match &self.moduli {
            Some(m) => m.iter().product(),
            None => self.lift_radix.iter().product(),
        }
    }

    pub fn decode(&self, mut key: u64) -> GroupElement {
        let radix = self.moduli.as_ref().unwrap_or(&self.lift_radix);
        let mut coords = vec![0; radix.len()];
        for (c, &r) in coords.iter_mut().zip(radix).rev() {
            *c = key % r;
            key /= r;
        }
        GroupElement(coords)
    }
}
