//! The poset of regions (weak order) of an arrangement.

use std::collections::HashMap;
use std::fmt::Write;

use serde_json::{json, Value};

use crate::arrangement::{Arrangement, Region, SignMask};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoverEdge {
    pub id: usize,
    pub lower: usize,
    pub upper: usize,
    pub hyperplane: usize,
}

/// Orientation of a Salvetti edge: `Up` is `e` (away from the base), `Star` is `e*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeStep {
    pub edge: usize,
    pub dir: Direction,
}

#[derive(Clone, Debug)]
pub struct RegionPoset {
    pub nhyperplanes: usize,
    pub rank: usize,
    pub regions: Vec<Region>,
    pub base: usize,
    pub top: usize,
    pub covers: Vec<CoverEdge>,
    /// `inv(C)`: hyperplanes separating `C` from the base, as a bitmask.
    pub inv: Vec<SignMask>,
    pub antipode: Vec<usize>,
    pub lower_covers: Vec<Vec<usize>>,
    pub upper_covers: Vec<Vec<usize>>,
    pub simplicial: bool,
    index: HashMap<SignMask, usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl RegionPoset {
    pub fn new(arr: &Arrangement) -> Result<Self> {
        let n = arr.len();
        let mut regions = arr.enumerate_regions();
        let b = arr.base.signs;
        regions.sort_by_key(|r| ((r.signs ^ b).count_ones(), r.signs));
        let index: HashMap<SignMask, usize> = regions.iter().enumerate().map(|(i, r)| (r.signs, i)).collect();
        let base = *index.get(&b).ok_or_else(|| Error::Internal("base region not enumerated".into()))?;
        let full = arr.full_mask();
        let top = *index.get(&(b ^ full)).ok_or_else(|| Error::Internal("antipode of base missing".into()))?;
        let inv: Vec<SignMask> = regions.iter().map(|r| r.signs ^ b).collect();
        let antipode = regions
            .iter()
            .map(|r| index.get(&(r.signs ^ full)).copied().ok_or_else(|| Error::Internal("region without antipode".into())))
            .collect::<Result<Vec<_>>>()?;
        let mut covers = Vec::new();
        let mut lower_covers = vec![Vec::new(); regions.len()];
        let mut upper_covers = vec![Vec::new(); regions.len()];
        let mut edge_index = HashMap::new();
        for (lo, r) in regions.iter().enumerate() {
            for h in 0..n {
                if inv[lo] >> h & 1 == 1 {
                    continue;
                }
                if let Some(&up) = index.get(&(r.signs ^ 1 << h)) {
                    let id = covers.len();
                    covers.push(CoverEdge { id, lower: lo, upper: up, hyperplane: h });
                    lower_covers[up].push(id);
                    upper_covers[lo].push(id);
                    edge_index.insert((lo, up), id);
                }
            }
        }
        let rank = arr.rank();
        let simplicial = (0..regions.len()).all(|r| lower_covers[r].len() + upper_covers[r].len() == rank);
        Ok(RegionPoset { nhyperplanes: n, rank, regions, base, top, covers, inv, antipode, lower_covers, upper_covers, simplicial, index, edge_index })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn require_simplicial(&self, what: &str) -> Result<()> {
        if self.simplicial {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} requires a simplicial arrangement")))
        }
    }

    pub fn region_by_signs(&self, signs: SignMask) -> Option<usize> {
        self.index.get(&signs).copied()
    }

    pub fn grade(&self, c: usize) -> usize {
        self.inv[c].count_ones() as usize
    }

    /// Hyperplanes separating two regions.
    pub fn separation(&self, a: usize, b: usize) -> SignMask {
        self.regions[a].signs ^ self.regions[b].signs
    }

    /// The region across hyperplane `h`, if `h` is a wall of `c`.
    pub fn neighbor(&self, c: usize, h: usize) -> Option<usize> {
        self.index.get(&(self.regions[c].signs ^ 1 << h)).copied()
    }

    pub fn walls(&self, c: usize) -> Vec<usize> {
        (0..self.nhyperplanes).filter(|&h| self.neighbor(c, h).is_some()).collect()
    }

    /// The cover edge joining two adjacent regions, in either order.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a, b)).or_else(|| self.edge_index.get(&(b, a))).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.inv[a] & !self.inv[b] == 0
    }

    fn meet_or_join(&self, a: usize, b: usize, meet: bool) -> Result<usize> {
        self.require_simplicial("meet and join")?;
        let bounds: Vec<usize> = (0..self.len())
            .filter(|&c| if meet { self.leq(c, a) && self.leq(c, b) } else { self.leq(a, c) && self.leq(b, c) })
            .collect();
        let extreme: Vec<usize> = bounds
            .iter()
            .copied()
            .filter(|&c| bounds.iter().all(|&d| d == c || if meet { !self.leq(c, d) } else { !self.leq(d, c) }))
            .collect();
        match extreme.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::Internal(format!("regions {a} and {b} have {} extremal common bounds", extreme.len()))),
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        self.meet_or_join(a, b, true)
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        self.meet_or_join(a, b, false)
    }

    pub fn join_all(&self, items: &[usize]) -> Result<usize> {
        let mut acc = self.base;
        for &x in items {
            acc = self.join(acc, x)?;
        }
        Ok(acc)
    }

    /// Meet of `c` with every region it covers.
    pub fn pop(&self, c: usize) -> Result<usize> {
        let mut acc = c;
        for &e in &self.lower_covers[c] {
            acc = self.meet(acc, self.covers[e].lower)?;
        }
        Ok(acc)
    }

    /// Lower walls of `c`: the hyperplanes of its lower cover edges.
    pub fn lower_walls(&self, c: usize) -> Vec<usize> {
        self.lower_covers[c].iter().map(|&e| self.covers[e].hyperplane).collect()
    }

    /// Regions of a minimal gallery from `a` to `b`, crossing the least-indexed available wall at each step.
    pub fn minimal_walk(&self, a: usize, b: usize) -> Vec<usize> {
        let mut walk = vec![a];
        let mut cur = a;
        while cur != b {
            let sep = self.separation(cur, b);
            let next = (0..self.nhyperplanes)
                .filter(|&h| sep >> h & 1 == 1)
                .find_map(|h| self.neighbor(cur, h))
                .expect("a separating wall always exists");
            walk.push(next);
            cur = next;
        }
        walk
    }

    /// The gallery `gal(a, b)` as Salvetti edge steps.
    pub fn minimal_gallery(&self, a: usize, b: usize) -> Vec<EdgeStep> {
        self.walk_to_steps(&self.minimal_walk(a, b))
    }

    pub fn walk_to_steps(&self, walk: &[usize]) -> Vec<EdgeStep> {
        walk.windows(2)
            .map(|w| {
                let edge = self.edge_between(w[0], w[1]).expect("consecutive regions are adjacent");
                let dir = if self.covers[edge].lower == w[0] { Direction::Up } else { Direction::Star };
                EdgeStep { edge, dir }
            })
            .collect()
    }

    /// Source and target regions of a step.
    pub fn step_ends(&self, s: EdgeStep) -> (usize, usize) {
        let e = self.covers[s.edge];
        match s.dir {
            Direction::Up => (e.lower, e.upper),
            Direction::Star => (e.upper, e.lower),
        }
    }

    /// All maximal chains of the interval `[a, b]`, as region walks.
    pub fn all_minimal_walks(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![a];
        self.walks_rec(b, &mut cur, &mut out);
        out
    }

    fn walks_rec(&self, b: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let x = *cur.last().unwrap();
        if x == b {
            out.push(cur.clone());
            return;
        }
        let sep = self.separation(x, b);
        for h in 0..self.nhyperplanes {
            if sep >> h & 1 == 1 {
                if let Some(y) = self.neighbor(x, h) {
                    cur.push(y);
                    self.walks_rec(b, cur, out);
                    cur.pop();
                }
            }
        }
    }

    /// Regions in the interval `[a, b]` of the weak order.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.leq(a, c) && self.leq(c, b)).collect()
    }

    pub fn is_join_irreducible(&self, c: usize) -> bool {
        self.lower_covers[c].len() == 1
    }

    pub fn to_dot(&self, label: impl Fn(&CoverEdge) -> String) -> String {
        let mut s = String::from("digraph weak_order {\n  rankdir=BT;\n");
        for (i, r) in self.regions.iter().enumerate() {
            let _ = writeln!(s, "  r{i} [label=\"{i}\\n{}\"];", r.sign_string(self.nhyperplanes));
        }
        for e in &self.covers {
            let _ = writeln!(s, "  r{} -> r{} [label=\"{}\"];", e.lower, e.upper, label(e));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "regions": self.regions.iter().enumerate().map(|(i, r)| json!({
                "id": i,
                "signs": r.sign_string(self.nhyperplanes),
                "rank": self.grade(i),
                "witness": r.witness.iter().map(crate::rational::format).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "base": self.base,
            "top": self.top,
            "covers": self.covers.iter().map(|e| json!({"id": e.id, "lower": e.lower, "upper": e.upper, "hyperplane": e.hyperplane})).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{builtin_arrangement, parse_arrangement, Family};

    fn poset(f: Family) -> RegionPoset {
        RegionPoset::new(&builtin_arrangement(f).unwrap()).unwrap()
    }

    #[test]
    fn dihedral_structure() {
        let p = poset(Family::I2(4));
        assert_eq!(p.len(), 8);
        assert_eq!(p.upper_covers[p.base].len(), 2);
        assert_eq!(p.grade(p.top), 4);
        assert_eq!(p.all_minimal_walks(p.base, p.top).len(), 2);
        let atoms: Vec<usize> = p.upper_covers[p.base].iter().map(|&e| p.covers[e].upper).collect();
        assert_eq!(p.meet(atoms[0], atoms[1]).unwrap(), p.base);
        assert_eq!(p.join(atoms[0], atoms[1]).unwrap(), p.top);
        assert_eq!(p.pop(p.top).unwrap(), p.base);
        assert_eq!(p.pop(p.base).unwrap(), p.base);
        assert!(p.simplicial);
    }

    #[test]
    fn a3_weak_order() {
        let p = poset(Family::A(3));
        assert_eq!(p.len(), 24);
        assert_eq!(p.covers.len(), 36);
        assert_eq!(p.upper_covers[p.base].len(), 3);
        assert_eq!(p.minimal_gallery(p.base, p.top).len(), 6);
        let brute = (0..24)
            .flat_map(|a| (0..24).map(move |b| (a, b)))
            .filter(|&(a, b)| p.leq(a, b) && p.grade(b) == p.grade(a) + 1)
            .count();
        assert_eq!(brute, 36);
        for c in 0..24 {
            assert_eq!(p.inv[p.antipode[c]], p.inv[c] ^ 0b111111);
            if p.is_join_irreducible(c) {
                assert_eq!(p.pop(c).unwrap(), p.covers[p.lower_covers[c][0]].lower);
            }
            for d in 0..24 {
                p.meet(c, d).unwrap();
                p.join(c, d).unwrap();
                let g = p.minimal_walk(c, d);
                assert_eq!(g.len() - 1, p.separation(c, d).count_ones() as usize);
            }
        }
        assert!(p.simplicial);
    }

    #[test]
    fn non_simplicial_detected() {
        let arr = parse_arrangement(r#"{"dimension":3,"hyperplanes":[[1,0,0],[0,1,0],[0,0,1],[1,1,1]],"base":{"point":[1,1,1]}}"#).unwrap();
        let p = RegionPoset::new(&arr).unwrap();
        assert!(!p.simplicial);
        assert!((0..p.len()).any(|c| p.walls(c).len() == 4));
        assert!(p.meet(0, 1).is_err());
    }
}
