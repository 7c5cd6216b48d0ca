//! Line-oriented set files.
//!
//! ```text
//! # comment
//! version=1
//! group=product:8,8
//! h=2
//! g=4
//! construction=reduce divisors=2,2
//! convention=multiset-repetition
//! 1,6
//! 2,2
//! ```
//!
//! Sets still in field coordinates use `group=field:p,n,dim` followed by a
//! `modulus=` record (high-to-low tail) and element lines such as `t,2t+1`.
//! Element lines are kept sorted; parsing normalises the order.

use std::fmt::Write as _;

use crate::constructions::MomentCurve;
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::groups::{BhgSet, GroupElement, GroupSpec};
use crate::verifier::CONVENTION;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetBody {
    Group { spec: GroupSpec, elements: Vec<GroupElement> },
    Field { field: FieldSpec, dim: usize, points: Vec<Vec<FieldElement>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFile {
    pub version: u32,
    pub h: Option<usize>,
    pub g: Option<u64>,
    pub construction: Option<String>,
    pub convention: Option<String>,
    pub body: SetBody,
}

impl SetFile {
    pub fn from_set(set: &BhgSet, construction: Option<String>) -> Self {
        SetFile {
            version: FORMAT_VERSION,
            h: Some(set.h),
            g: set.g,
            construction,
            convention: Some(CONVENTION.to_string()),
            body: SetBody::Group { spec: set.spec.clone(), elements: set.elements().to_vec() },
        }
    }

    pub fn from_moment_curve(mc: &MomentCurve) -> Self {
        let mut points = mc.points.clone();
        points.sort_by_key(|pt| pt.iter().map(|x| mc.field.index(x)).collect::<Vec<_>>());
        SetFile {
            version: FORMAT_VERSION,
            h: Some(mc.h),
            g: Some(mc.certificate.g),
            construction: Some(mc.certificate.to_string()),
            convention: Some(CONVENTION.to_string()),
            body: SetBody::Field { field: mc.field.clone(), dim: mc.h, points },
        }
    }

    pub fn len(&self) -> usize {
        match &self.body {
            SetBody::Group { elements, .. } => elements.len(),
            SetBody::Field { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The set in group form. Field coordinates are vectorised into
    /// Z_p^{n*dim}. `h` overrides the header value.
    pub fn to_bhg_set(&self, h: Option<usize>) -> Result<BhgSet> {
        let h = h
            .or(self.h)
            .ok_or_else(|| Error::Precondition("no h given and none recorded in the set file".into()))?;
        match &self.body {
            SetBody::Group { spec, elements } => BhgSet::new(spec.clone(), elements.clone(), h, self.g),
            SetBody::Field { field, dim, points } => {
                let spec = GroupSpec::product(vec![field.p(); field.n() * dim])?;
                let elements = points
                    .iter()
                    .map(|pt| {
                        let mut coords = Vec::new();
                        for x in pt {
                            coords.extend(field.vectorize(x)?);
                        }
                        Ok(GroupElement(coords))
                    })
                    .collect::<Result<Vec<_>>>()?;
                BhgSet::new(spec, elements, h, self.g)
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "version={}", self.version);
        match &self.body {
            SetBody::Group { spec, .. } => {
                let _ = writeln!(out, "group={spec}");
            }
            SetBody::Field { field, dim, .. } => {
                let _ = writeln!(out, "group=field:{},{},{}", field.p(), field.n(), dim);
                let tail: Vec<String> = field.modulus().iter().map(u64::to_string).collect();
                let _ = writeln!(out, "modulus={}", tail.join(","));
            }
        }
        if let Some(h) = self.h {
            let _ = writeln!(out, "h={h}");
        }
        if let Some(g) = self.g {
            let _ = writeln!(out, "g={g}");
        }
        if let Some(c) = &self.construction {
            let _ = writeln!(out, "construction={c}");
        }
        if let Some(c) = &self.convention {
            let _ = writeln!(out, "convention={c}");
        }
        match &self.body {
            SetBody::Group { elements, .. } => {
                for e in elements {
                    let _ = writeln!(out, "{e}");
                }
            }
            SetBody::Field { field, points, .. } => {
                for pt in points {
                    let parts: Vec<String> = pt.iter().map(|x| field.format_element(x)).collect();
                    let _ = writeln!(out, "{}", parts.join(","));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut group: Option<(usize, String)> = None;
        let mut modulus: Option<(usize, String)> = None;
        let mut h = None;
        let mut g = None;
        let mut construction = None;
        let mut convention = None;
        let mut lines = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let Some((key, value)) = line.split_once('=') else {
                lines.push((lineno, line.to_string()));
                continue;
            };
            if !lines.is_empty() {
                return Err(perr("header record after element lines".into()));
            }
            let value = value.trim();
            match key.trim() {
                "version" => {
                    let v: u32 = value.parse().map_err(|_| perr(format!("bad version {value:?}")))?;
                    if v != FORMAT_VERSION {
                        return Err(perr(format!("unsupported version {v}")));
                    }
                    version = Some(v);
                }
                "group" => group = Some((lineno, value.to_string())),
                "modulus" => modulus = Some((lineno, value.to_string())),
                "h" => h = Some(value.parse().map_err(|_| perr(format!("bad h {value:?}")))?),
                "g" => g = Some(value.parse().map_err(|_| perr(format!("bad g {value:?}")))?),
                "construction" => construction = Some(value.to_string()),
                "convention" => {
                    if value != CONVENTION {
                        return Err(perr(format!("unsupported counting convention {value:?}")));
                    }
                    convention = Some(value.to_string());
                }
                other => return Err(perr(format!("unknown header record {other:?}"))),
            }
        }

        let (gline, gtext) = group.ok_or(Error::Parse { line: 0, msg: "missing group record".into() })?;
        let body = if let Some(rest) = gtext.strip_prefix("field:") {
            parse_field_body(gline, rest, modulus, &lines)?
        } else {
            let spec: GroupSpec = gtext.parse().map_err(|e: Error| Error::Parse { line: gline, msg: e.to_string() })?;
            let mut elements = Vec::with_capacity(lines.len());
            for (lineno, l) in &lines {
                let perr = |msg: String| Error::Parse { line: *lineno, msg };
                let coords: Vec<u64> = l
                    .split(',')
                    .map(|t| t.trim().parse::<u64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| perr(format!("bad element {l:?}")))?;
                let e = GroupElement(coords);
                spec.check(&e).map_err(|err| perr(err.to_string()))?;
                elements.push(e);
            }
            elements.sort();
            if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Parse { line: 0, msg: format!("duplicate element {}", w[0]) });
            }
            SetBody::Group { spec, elements }
        };
        Ok(SetFile { version: version.unwrap_or(FORMAT_VERSION), h, g, construction, convention, body })
    }
}

fn parse_field_body(gline: usize, rest: &str, modulus: Option<(usize, String)>, lines: &[(usize, String)]) -> Result<SetBody> {
    let gerr = |msg: String| Error::Parse { line: gline, msg };
    let nums: Vec<u64> = rest
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| gerr(format!("bad field descriptor {rest:?}")))?;
    let [p, n, dim] = nums[..] else {
        return Err(gerr("field descriptor takes p,n,dim".into()));
    };
    let (mline, mtext) = modulus.ok_or_else(|| gerr("field group needs a modulus record".into()))?;
    let tail: Vec<u64> = mtext
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse { line: mline, msg: format!("bad modulus {mtext:?}") })?;
    if tail.len() != n as usize {
        return Err(Error::Parse { line: mline, msg: format!("modulus has {} coefficients, expected {n}", tail.len()) });
    }
    let field = FieldSpec::new(p, tail).map_err(|e| Error::Parse { line: mline, msg: e.to_string() })?;
    let dim = dim as usize;
    let mut points = Vec::with_capacity(lines.len());
    for (lineno, l) in lines {
        let perr = |msg: String| Error::Parse { line: *lineno, msg };
        let pt = l
            .split(',')
            .map(|t| field.parse_element(t))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| perr(e.to_string()))?;
        if pt.len() != dim {
            return Err(perr(format!("expected {dim} coordinates")));
        }
        points.push(pt);
    }
    points.sort_by_key(|pt| pt.iter().map(|x| field.index(x)).collect::<Vec<_>>());
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse { line: 0, msg: "duplicate element".into() });
    }
    Ok(SetBody::Field { field, dim, points })
}
