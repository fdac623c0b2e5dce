//! Central hyperplane arrangements over the rationals and their regions.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lp::LinearSystem;
use crate::rational::{self, dot, int, Rational};

/// Sign vector of a region: bit `i` is set when the region lies on the positive side of hyperplane `i`.
pub type SignMask = u64;

pub const MAX_HYPERPLANES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub index: usize,
    pub normal: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub signs: SignMask,
    pub witness: Vec<Rational>,
}

impl Region {
    /// `+1` or `-1` for hyperplane `i`.
    pub fn sign(&self, i: usize) -> i8 {
        if self.signs >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn sign_string(&self, n: usize) -> String {
        (0..n).map(|i| if self.sign(i) > 0 { '+' } else { '-' }).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub dimension: usize,
    pub hyperplanes: Vec<Hyperplane>,
    pub base: Region,
    pub name: String,
}

/// Families of built-in reflection arrangements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Dihedral `I2(m)`: `m` lines in the plane.
    I2(usize),
    /// Braid arrangement `A_n` in dimension `n + 1`.
    A(usize),
    B(usize),
    D(usize),
}

impl Family {
    pub fn parse(tag: &str) -> Result<Family> {
        let t = tag.trim().to_ascii_uppercase().replace(['(', ')'], ":");
        let t = t.trim_end_matches(':');
        let bad = || Error::Parse(format!("unknown family tag {tag:?}; expected I2:m, An, Bn or Dn"));
        let num = |s: &str| s.trim_matches(':').parse::<usize>().map_err(|_| bad());
        let fam = if let Some(rest) = t.strip_prefix("I2") {
            Family::I2(num(rest)?)
        } else if let Some(rest) = t.strip_prefix('A') {
            Family::A(num(rest)?)
        } else if let Some(rest) = t.strip_prefix('B') {
            Family::B(num(rest)?)
        } else if let Some(rest) = t.strip_prefix('D') {
            Family::D(num(rest)?)
        } else {
            return Err(bad());
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(self) -> Result<()> {
        let ok = match self {
            Family::I2(m) => m >= 3,
            Family::A(n) => n >= 1,
            Family::B(n) | Family::D(n) => n >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("parameter out of range for {self}")))
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::I2(m) => write!(f, "I2({m})"),
            Family::A(n) => write!(f, "A{n}"),
            Family::B(n) => write!(f, "B{n}"),
            Family::D(n) => write!(f, "D{n}"),
        }
    }
}

impl Arrangement {
    /// Builds an arrangement from normals and a base point strictly off every hyperplane.
    pub fn from_normals(normals: Vec<Vec<Rational>>, base_point: Vec<Rational>, name: impl Into<String>) -> Result<Self> {
        let dimension = base_point.len();
        let hyperplanes = validate_normals(normals, dimension)?;
        let signs = signs_at(&hyperplanes, &base_point)
            .ok_or_else(|| Error::InvalidArrangement("base point lies on a hyperplane".into()))?;
        Ok(Arrangement { dimension, hyperplanes, base: Region { signs, witness: base_point }, name: name.into() })
    }

    /// Builds an arrangement whose base region is given by a sign vector.
    pub fn from_normals_and_signs(normals: Vec<Vec<Rational>>, dimension: usize, signs: SignMask, name: impl Into<String>) -> Result<Self> {
        let hyperplanes = validate_normals(normals, dimension)?;
        let witness = region_witness(&hyperplanes, dimension, signs)
            .ok_or_else(|| Error::InvalidArrangement("base sign vector is infeasible".into()))?;
        Ok(Arrangement { dimension, hyperplanes, base: Region { signs, witness }, name: name.into() })
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn full_mask(&self) -> SignMask {
        full_mask(self.len())
    }

    pub fn normals(&self) -> Vec<Vec<Rational>> {
        self.hyperplanes.iter().map(|h| h.normal.clone()).collect()
    }

    /// Dimension of the span of the normals.
    pub fn rank(&self) -> usize {
        crate::linalg::rank(&self.normals(), self.dimension)
    }

    /// Signs of a point, or `None` if it lies on some hyperplane.
    pub fn signs_of(&self, x: &[Rational]) -> Option<SignMask> {
        signs_at(&self.hyperplanes, x)
    }

    /// The restriction to a subset of hyperplanes, re-indexed in the given order, with the same base point.
    pub fn subarrangement(&self, indices: &[usize]) -> Result<Arrangement> {
        let normals = indices.iter().map(|&i| self.hyperplanes[i].normal.clone()).collect();
        let name = format!("{}|{:?}", self.name, indices);
        Arrangement::from_normals(normals, self.base.witness.clone(), name)
    }

    /// Heuristic reducibility test: the graph joining non-orthogonal normals is disconnected.
    pub fn looks_reducible(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && !dot(&self.hyperplanes[i].normal, &self.hyperplanes[j].normal).is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().any(|s| !s)
    }

    pub fn warn_if_reducible(&self) {
        if self.looks_reducible() {
            log::warn!("arrangement {} appears reducible; results are still computed", self.name);
        }
    }

    /// Every region, one per feasible sign vector, sorted by sign mask.
    pub fn enumerate_regions(&self) -> Vec<Region> {
        let mut out = Vec::new();
        let start = vec![rational::zero(); self.dimension];
        enumerate_cells(&self.normals(), self.dimension, &[], 0, 0, Some(start), &mut out);
        out.sort_by_key(|r| r.signs);
        out
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "dimension": self.dimension,
            "hyperplanes": self.hyperplanes.iter().map(|h| h.normal.iter().map(rational::format).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "base": {"point": self.base.witness.iter().map(rational::format).collect::<Vec<_>>()},
        })
    }
}

pub fn full_mask(n: usize) -> SignMask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn validate_normals(normals: Vec<Vec<Rational>>, dimension: usize) -> Result<Vec<Hyperplane>> {
    if normals.is_empty() {
        return Err(Error::InvalidArrangement("no hyperplanes".into()));
    }
    if normals.len() > MAX_HYPERPLANES {
        return Err(Error::InvalidArrangement(format!("at most {MAX_HYPERPLANES} hyperplanes are supported")));
    }
    for (i, v) in normals.iter().enumerate() {
        if v.len() != dimension {
            return Err(Error::InvalidArrangement(format!("hyperplane {i} has {} coordinates, expected {dimension}", v.len())));
        }
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidArrangement(format!("hyperplane {i} has a zero normal")));
        }
    }
    for i in 0..normals.len() {
        for j in 0..i {
            if crate::linalg::rank(&[normals[i].clone(), normals[j].clone()], dimension) < 2 {
                return Err(Error::InvalidArrangement(format!("hyperplanes {j} and {i} are parallel duplicates")));
            }
        }
    }
    Ok(normals.into_iter().enumerate().map(|(index, normal)| Hyperplane { index, normal }).collect())
}

fn signs_at(hs: &[Hyperplane], x: &[Rational]) -> Option<SignMask> {
    let mut m = 0;
    for h in hs {
        let v = dot(&h.normal, x);
        if v.is_zero() {
            return None;
        }
        if v.is_positive() {
            m |= 1 << h.index;
        }
    }
    Some(m)
}

/// Strict interior point of the cone with the given signs, if it is nonempty.
pub fn region_witness(hs: &[Hyperplane], dimension: usize, signs: SignMask) -> Option<Vec<Rational>> {
    let mut sys = LinearSystem::new(dimension);
    for h in hs {
        sys.at_least(oriented(&h.normal, signs >> h.index & 1 == 1), rational::one());
    }
    sys.solve()
}

fn oriented(v: &[Rational], positive: bool) -> Vec<Rational> {
    if positive {
        v.to_vec()
    } else {
        v.iter().map(|x| -x.clone()).collect()
    }
}

/// Depth-first enumeration of the feasible sign vectors of `normals`, subject to `equalities`.
/// `hint` is a point satisfying all constraints fixed so far.
pub(crate) fn enumerate_cells(
    normals: &[Vec<Rational>],
    dimension: usize,
    equalities: &[Vec<Rational>],
    depth: usize,
    signs: SignMask,
    hint: Option<Vec<Rational>>,
    out: &mut Vec<Region>,
) {
    let Some(w) = hint else { return };
    if depth == normals.len() {
        out.push(Region { signs, witness: w });
        return;
    }
    let v = dot(&normals[depth], &w);
    for positive in [true, false] {
        let next_signs = if positive { signs | 1 << depth } else { signs };
        let agrees = (positive && v.is_positive()) || (!positive && v.is_negative());
        let point = if agrees {
            let a = v.abs();
            if a < rational::one() {
                Some(w.iter().map(|x| x / &a).collect())
            } else {
                Some(w.clone())
            }
        } else {
            let mut sys = LinearSystem::new(dimension);
            for e in equalities {
                sys.equal(e.clone(), rational::zero());
            }
            for k in 0..=depth {
                sys.at_least(oriented(&normals[k], next_signs >> k & 1 == 1), rational::one());
            }
            sys.solve()
        };
        enumerate_cells(normals, dimension, equalities, depth + 1, next_signs, point, out);
    }
}

/// A built-in reflection arrangement with every normal positive on the documented base region.
///
/// * `I2(m)`: lines through the origin with directions `(m-1-2k, 1)`, base point between the first two.
/// * `A_n`: normals `e_i - e_j` (`i < j`) in dimension `n + 1`, base point `(n+1, n, ..., 1)`.
/// * `B_n`: normals `e_i`, then `e_j - e_i` and `e_j + e_i` for `i < j`; base point `(1, 2, ..., n)`.
/// * `D_n`: normals `e_j - e_i` and `e_j + e_i` for `i < j`; base point `(1, 2, ..., n)`.
pub fn builtin_arrangement(family: Family) -> Result<Arrangement> {
    family.validate()?;
    let (normals, base): (Vec<Vec<i64>>, Vec<i64>) = match family {
        Family::I2(m) => {
            let m = m as i64;
            let dir = |k: i64| (m - 1 - 2 * k, 1i64);
            let normals = (0..m).map(|k| {
                let (a, b) = dir(k);
                vec![-b, a]
            });
            let (a0, b0) = dir(0);
            let (a1, b1) = dir(1);
            (normals.collect(), vec![a0 + a1, b0 + b1])
        }
        Family::A(n) => {
            let d = n + 1;
            let mut normals = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    let mut v = vec![0; d];
                    v[i] = 1;
                    v[j] = -1;
                    normals.push(v);
                }
            }
            (normals, (1..=d as i64).rev().collect())
        }
        Family::B(n) | Family::D(n) => {
            let mut normals = Vec::new();
            if matches!(family, Family::B(_)) {
                for i in 0..n {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    normals.push(v);
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = vec![0; n];
                    v[i] = -1;
                    v[j] = 1;
                    normals.push(v.clone());
                    v[i] = 1;
                    normals.push(v);
                }
            }
            (normals, (1..=n as i64).collect())
        }
    };
    let base: Vec<Rational> = rational::vec_from_ints(&base);
    let normals: Vec<Vec<Rational>> = normals
        .into_iter()
        .map(|v| {
            let v = rational::vec_from_ints(&v);
            if dot(&v, &base).is_negative() {
                v.iter().map(|x| -x.clone()).collect()
            } else {
                v
            }
        })
        .collect();
    Arrangement::from_normals(normals, base, family.to_string())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatJson {
    Int(i64),
    Text(String),
}

impl RatJson {
    fn value(&self) -> Result<Rational> {
        match self {
            RatJson::Int(i) => Ok(int(*i)),
            RatJson::Text(t) => rational::parse(t),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseJson {
    point: Option<Vec<RatJson>>,
    signs: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct ArrangementJson {
    dimension: usize,
    hyperplanes: Vec<Vec<RatJson>>,
    base: BaseJson,
    name: Option<String>,
}

/// Parses the JSON arrangement format.
///
/// Each hyperplane is a list of `dimension` normal coordinates; an optional extra
/// trailing offset is accepted only when it is zero. The base region is given either
/// by `{"point": [...]}` or by `{"signs": ["+", "-", ...]}`.
pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let doc: ArrangementJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = doc.dimension;
    let mut normals = Vec::new();
    for (i, h) in doc.hyperplanes.iter().enumerate() {
        let mut v = h.iter().map(RatJson::value).collect::<Result<Vec<_>>>()?;
        if v.len() == n + 1 {
            let off = v.pop().unwrap_or_default();
            if !off.is_zero() {
                return Err(Error::InvalidArrangement(format!("hyperplane {i} does not pass through the origin")));
            }
        }
        normals.push(v);
    }
    let name = doc.name.unwrap_or_else(|| "input".to_string());
    match (doc.base.point, doc.base.signs) {
        (Some(p), None) => {
            let p = p.iter().map(RatJson::value).collect::<Result<Vec<_>>>()?;
            if p.len() != n {
                return Err(Error::InvalidArrangement("base point has the wrong dimension".into()));
            }
            Arrangement::from_normals(normals, p, name)
        }
        (None, Some(s)) => {
            if s.len() != normals.len() {
                return Err(Error::InvalidArrangement("base sign vector has the wrong length".into()));
            }
            let mut mask = 0;
            for (i, c) in s.iter().enumerate() {
                match c.as_str() {
                    "+" | "1" => mask |= 1 << i,
                    "-" | "-1" => {}
                    other => return Err(Error::Parse(format!("bad sign {other:?}"))),
                }
            }
            Arrangement::from_normals_and_signs(normals, n, mask, name)
        }
        _ => Err(Error::Parse("base must give exactly one of \"point\" or \"signs\"".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_region_counts() {
        let cases = [(Family::I2(3), 6), (Family::I2(4), 8), (Family::A(3), 24), (Family::B(3), 48), (Family::D(4), 192)];
        for (fam, count) in cases {
            let arr = builtin_arrangement(fam).unwrap();
            let regions = arr.enumerate_regions();
            assert_eq!(regions.len(), count, "{fam}");
            for r in &regions {
                assert_eq!(arr.signs_of(&r.witness), Some(r.signs));
            }
            assert!(regions.iter().any(|r| r.signs == arr.base.signs));
        }
    }

    #[test]
    fn parse_formats() {
        let arr = parse_arrangement(r#"{"dimension":2,"hyperplanes":[["1","0"],["0","1"],["1","1"],["1","-1"]],"base":{"point":["1","-3"]}}"#).unwrap();
        assert_eq!(arr.len(), 4);
        assert_eq!(arr.enumerate_regions().len(), 8);
        let err = parse_arrangement(r#"{"dimension":2,"hyperplanes":[[1,0],[2,0]],"base":{"point":[1,1]}}"#).unwrap_err();
        assert!(err.to_string().contains("parallel"));
        assert!(parse_arrangement(r#"{"dimension":2,"hyperplanes":[[0,0]],"base":{"point":[1,1]}}"#).is_err());
        assert!(parse_arrangement(r#"{"dimension":2,"hyperplanes":[[1,0,3]],"base":{"point":[1,1]}}"#).is_err());
        let signs = parse_arrangement(r#"{"dimension":2,"hyperplanes":[["1/2",0],[0,1]],"base":{"signs":["-","+"]}}"#).unwrap();
        assert_eq!(signs.base.signs, 0b10);
    }

    #[test]
    fn a3_rank_and_reducibility() {
        let arr = builtin_arrangement(Family::A(3)).unwrap();
        assert_eq!(arr.dimension, 4);
        assert_eq!(arr.len(), 6);
        assert_eq!(arr.rank(), 3);
        assert!(!arr.looks_reducible());
        assert!(builtin_arrangement(Family::D(2)).unwrap().looks_reducible());
    }

    #[test]
    fn family_tags() {
        assert_eq!(Family::parse("I2:4").unwrap(), Family::I2(4));
        assert_eq!(Family::parse("i2(5)").unwrap(), Family::I2(5));
        assert_eq!(Family::parse("A3").unwrap(), Family::A(3));
        assert!(Family::parse("I2:2").is_err());
        assert!(Family::parse("E8").is_err());
    }
}
