//! Shards, shard labels of cover edges, and the shard intersection order.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use serde_json::{json, Value};

use crate::arrangement::{enumerate_cells, Arrangement, SignMask};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::LinearSystem;
use crate::poset::RegionPoset;
use crate::rational::{self, dot, Rational};

/// A full rank-2 subarrangement: every hyperplane containing one codimension-2 subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Subarrangement {
    pub hyperplanes: Vec<usize>,
    /// The two walls of the region of the subarrangement containing the base region.
    pub basic: [usize; 2],
}

impl Rank2Subarrangement {
    pub fn mask(&self) -> SignMask {
        self.hyperplanes.iter().fold(0, |m, &h| m | 1 << h)
    }

    pub fn is_basic(&self, h: usize) -> bool {
        self.basic.contains(&h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shard {
    pub id: usize,
    pub hyperplane: usize,
    /// Hyperplanes cutting `hyperplane`, ascending.
    pub cutters: Vec<usize>,
    /// Bits of `cutters` on whose positive side the shard lies.
    pub cut_positive: SignMask,
    pub witness: Vec<Rational>,
}

impl Shard {
    pub fn cutter_mask(&self) -> SignMask {
        self.cutters.iter().fold(0, |m, &h| m | 1 << h)
    }

    pub fn cut_signs(&self) -> Vec<(usize, i8)> {
        self.cutters.iter().map(|&h| (h, if self.cut_positive >> h & 1 == 1 { 1 } else { -1 })).collect()
    }

    /// Whether a region with these signs is adjacent to the shard's side conditions.
    pub fn matches(&self, signs: SignMask) -> bool {
        signs & self.cutter_mask() == self.cut_positive
    }
}

#[derive(Clone, Debug)]
pub struct ShardData {
    pub rank2: Vec<Rank2Subarrangement>,
    pub cutters: Vec<Vec<usize>>,
    pub shards: Vec<Shard>,
    pub by_hyperplane: Vec<Vec<usize>>,
    /// `Σ(e)` for each cover edge.
    pub edge_shard: Vec<usize>,
    /// `-Σ` for each shard.
    pub antipodal: Vec<usize>,
    /// `J_Σ`, defined only for simplicial arrangements.
    pub join_irreducible: Option<Vec<usize>>,
    pair_rank2: HashMap<(usize, usize), usize>,
}

impl ShardData {
    pub fn new(arr: &Arrangement, poset: &RegionPoset) -> Result<Self> {
        let n = arr.len();
        let normals = arr.normals();
        let mut rank2 = Vec::new();
        let mut pair_rank2 = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                if pair_rank2.contains_key(&(i, j)) {
                    continue;
                }
                let span = [normals[i].clone(), normals[j].clone()];
                let members: Vec<usize> = (0..n).filter(|&k| linalg::in_span(&span, &normals[k], arr.dimension)).collect();
                let mask = members.iter().fold(0u64, |m, &h| m | 1 << h);
                let b = arr.base.signs & mask;
                let basic: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&h| poset.regions.iter().any(|r| r.signs & mask == b ^ 1 << h))
                    .collect();
                let basic: [usize; 2] = basic
                    .try_into()
                    .map_err(|v: Vec<usize>| Error::Internal(format!("rank-2 subarrangement {members:?} has {} basic hyperplanes", v.len())))?;
                let id = rank2.len();
                for &a in &members {
                    for &c in &members {
                        if a < c {
                            pair_rank2.insert((a, c), id);
                        }
                    }
                }
                rank2.push(Rank2Subarrangement { hyperplanes: members, basic });
            }
        }
        let mut cutters = vec![BTreeSet::new(); n];
        for a in &rank2 {
            for &h in &a.hyperplanes {
                if !a.is_basic(h) {
                    cutters[h].extend(a.basic.iter().copied());
                }
            }
        }
        let cutters: Vec<Vec<usize>> = cutters.into_iter().map(|s| s.into_iter().collect()).collect();

        let mut shards = Vec::new();
        let mut by_hyperplane = vec![Vec::new(); n];
        for h in 0..n {
            for (cut_positive, witness) in shard_cells(arr, h, &cutters[h])? {
                let id = shards.len();
                by_hyperplane[h].push(id);
                shards.push(Shard { id, hyperplane: h, cutters: cutters[h].clone(), cut_positive, witness });
            }
        }

        let mut edge_shard = Vec::with_capacity(poset.covers.len());
        for e in &poset.covers {
            let signs = poset.regions[e.lower].signs;
            let found: Vec<usize> = by_hyperplane[e.hyperplane].iter().copied().filter(|&s| shards[s].matches(signs)).collect();
            match found.as_slice() {
                [s] => edge_shard.push(*s),
                _ => return Err(Error::Internal(format!("edge {} matches {} shards", e.id, found.len()))),
            }
        }

        let antipodal = shards
            .iter()
            .map(|s| {
                let want = s.cutter_mask() & !s.cut_positive;
                by_hyperplane[s.hyperplane]
                    .iter()
                    .copied()
                    .find(|&t| shards[t].cut_positive == want)
                    .ok_or_else(|| Error::Internal(format!("shard {} has no antipodal shard", s.id)))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut data = ShardData { rank2, cutters, shards, by_hyperplane, edge_shard, antipodal, join_irreducible: None, pair_rank2 };
        if poset.simplicial {
            let mut ji = Vec::with_capacity(data.shards.len());
            for s in 0..data.shards.len() {
                let carriers: Vec<usize> = (0..poset.len()).filter(|&c| data.lower_shards(poset, c).contains(&s)).collect();
                let minimal: Vec<usize> =
                    carriers.iter().copied().filter(|&c| carriers.iter().all(|&d| d == c || !poset.leq(d, c))).collect();
                match minimal.as_slice() {
                    [j] => ji.push(*j),
                    _ => return Err(Error::Internal(format!("shard {s} has {} minimal carriers", minimal.len()))),
                }
            }
            data.join_irreducible = Some(ji);
        }
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.shards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shards.is_empty()
    }

    /// The full rank-2 subarrangement containing two distinct hyperplanes.
    pub fn rank2_of(&self, a: usize, b: usize) -> Result<&Rank2Subarrangement> {
        let key = (a.min(b), a.max(b));
        self.pair_rank2
            .get(&key)
            .map(|&i| &self.rank2[i])
            .ok_or_else(|| Error::Precondition(format!("hyperplanes {a} and {b} do not span a rank-2 flat")))
    }

    /// Whether `cutter` cuts `cut`: `cutter` is basic and `cut` is not, in their common rank-2 subarrangement.
    pub fn cuts(&self, cutter: usize, cut: usize) -> Result<bool> {
        let a = self.rank2_of(cutter, cut)?;
        Ok(a.is_basic(cutter) && !a.is_basic(cut))
    }

    /// `cov_Sha(C)`: the shards labelling the lower cover edges of `c`, ascending.
    pub fn lower_shards(&self, poset: &RegionPoset, c: usize) -> Vec<usize> {
        let mut v: Vec<usize> = poset.lower_covers[c].iter().map(|&e| self.edge_shard[e]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn require_ji(&self) -> Result<&[usize]> {
        self.join_irreducible.as_deref().ok_or_else(|| Error::Unsupported("J_Σ requires a simplicial arrangement".into()))
    }

    /// The unique lower shard of a join-irreducible region.
    pub fn shard_of_join_irreducible(&self, poset: &RegionPoset, j: usize) -> Result<usize> {
        match poset.lower_covers[j].as_slice() {
            [e] => Ok(self.edge_shard[*e]),
            _ => Err(Error::Precondition(format!("region {j} is not join-irreducible"))),
        }
    }

    /// Shard labels of every cover edge inside `[Pop(c), c]`.
    pub fn interval_labels(&self, poset: &RegionPoset, c: usize) -> Result<BTreeSet<usize>> {
        let p = poset.pop(c)?;
        Ok(poset
            .covers
            .iter()
            .filter(|e| poset.leq(p, e.lower) && poset.leq(e.upper, c))
            .map(|e| self.edge_shard[e.id])
            .collect())
    }

    /// Whether the join of `J_Σ` over the lower shards of `c` is `c`.
    pub fn canonical_join_check(&self, poset: &RegionPoset, c: usize) -> Result<bool> {
        let ji = self.require_ji()?;
        let parts: Vec<usize> = self.lower_shards(poset, c).iter().map(|&s| ji[s]).collect();
        Ok(poset.join_all(&parts)? == c)
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .shards
            .iter()
            .map(|s| json!({
                "id": s.id,
                "hyperplane": s.hyperplane,
                "cut_signs": s.cut_signs().iter().map(|(h, g)| json!({"hyperplane": h, "sign": if *g > 0 { "+" } else { "-" }})).collect::<Vec<_>>(),
                "witness": s.witness.iter().map(rational::format).collect::<Vec<_>>(),
                "join_irreducible": self.join_irreducible.as_ref().map(|j| j[s.id]),
                "antipodal": self.antipodal[s.id],
            }))
            .collect::<Vec<_>>())
    }
}

/// Cells of hyperplane `h` cut by its cutting hyperplanes, with witnesses off every other hyperplane.
fn shard_cells(arr: &Arrangement, h: usize, cutters: &[usize]) -> Result<Vec<(SignMask, Vec<Rational>)>> {
    let n = arr.dimension;
    let basis = linalg::nullspace(&[arr.hyperplanes[h].normal.clone()], n);
    let others: Vec<usize> = (0..arr.len()).filter(|&k| k != h).collect();
    let restricted: Vec<Vec<Rational>> = others
        .iter()
        .map(|&k| basis.iter().map(|b| dot(&arr.hyperplanes[k].normal, b)).collect())
        .collect();
    let mut cells = Vec::new();
    enumerate_cells(&restricted, basis.len(), &[], 0, 0, Some(vec![rational::zero(); basis.len()]), &mut cells);
    let cutter_mask: SignMask = cutters.iter().fold(0, |m, &c| m | 1 << c);
    let mut groups: Vec<(SignMask, Vec<Rational>)> = Vec::new();
    for cell in cells {
        let mut full: SignMask = 0;
        for (pos, &k) in others.iter().enumerate() {
            if cell.signs >> pos & 1 == 1 {
                full |= 1 << k;
            }
        }
        let key = full & cutter_mask;
        if groups.iter().all(|(k, _)| *k != key) {
            let mut x = vec![rational::zero(); n];
            for (y, b) in cell.witness.iter().zip(&basis) {
                for i in 0..n {
                    x[i] += y * &b[i];
                }
            }
            if arr.signs_of_except(&x, h) != Some(full) {
                return Err(Error::Internal(format!("shard witness on hyperplane {h} is not generic")));
            }
            groups.push((key, x));
        }
    }
    groups.sort_by_key(|(k, _)| *k);
    Ok(groups)
}

impl Arrangement {
    /// Signs of a point that lies on hyperplane `h` and off every other hyperplane.
    pub fn signs_of_except(&self, x: &[Rational], h: usize) -> Option<SignMask> {
        let mut m = 0;
        for hp in &self.hyperplanes {
            let v = dot(&hp.normal, x);
            let zero = num_traits::Zero::is_zero(&v);
            if hp.index == h {
                if !zero {
                    return None;
                }
                continue;
            }
            if zero {
                return None;
            }
            if num_traits::Signed::is_positive(&v) {
                m |= 1 << hp.index;
            }
        }
        Some(m)
    }
}

/// The shard intersection order, as an order matrix on regions.
#[derive(Clone, Debug)]
pub struct ShardPoset {
    /// `order[a][b]` holds when `a ⪯ b`.
    pub order: Vec<Vec<bool>>,
}

impl ShardPoset {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order[a][b]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Cover relations of the order.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.order[a][b] && !(0..n).any(|c| c != a && c != b && self.order[a][c] && self.order[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph shard_order {\n  rankdir=BT;\n");
        for i in 0..self.len() {
            let _ = writeln!(s, "  r{i} [label=\"{i}\"];");
        }
        for (a, b) in self.hasse() {
            let _ = writeln!(s, "  r{a} -> r{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Exact description of `⋂cov_Sha(C)`: the flat cut out by the lower walls and the weak cutting conditions.
#[derive(Clone, Debug)]
pub struct ShardIntersection {
    pub equations: Vec<Vec<Rational>>,
    pub inequalities: Vec<Vec<Rational>>,
    pub shards: Vec<usize>,
}

pub fn shard_intersection(arr: &Arrangement, data: &ShardData, poset: &RegionPoset, c: usize) -> ShardIntersection {
    let shards = data.lower_shards(poset, c);
    let mut equations = Vec::new();
    let mut inequalities = Vec::new();
    for &s in &shards {
        let sh = &data.shards[s];
        equations.push(arr.hyperplanes[sh.hyperplane].normal.clone());
        for (k, g) in sh.cut_signs() {
            let v = &arr.hyperplanes[k].normal;
            inequalities.push(if g > 0 { v.clone() } else { v.iter().map(|x| -x.clone()).collect() });
        }
    }
    ShardIntersection { equations, inequalities, shards }
}

/// Whether `inner ⊆ outer` as closed polyhedral cones.
fn cone_contained(n: usize, inner: &ShardIntersection, outer: &ShardIntersection) -> bool {
    if !linalg::span_contains(&inner.equations, &outer.equations, n) {
        return false;
    }
    outer.inequalities.iter().all(|g| {
        let mut sys = LinearSystem::new(n);
        for e in &inner.equations {
            sys.equal(e.clone(), rational::zero());
        }
        for q in &inner.inequalities {
            sys.at_least(q.clone(), rational::zero());
        }
        sys.at_least(g.iter().map(|x| -x.clone()).collect(), rational::one());
        sys.solve().is_none()
    })
}

/// The shard intersection order, computed three independent ways that must agree.
pub fn shard_intersection_order(arr: &Arrangement, data: &ShardData, poset: &RegionPoset) -> Result<ShardPoset> {
    poset.require_simplicial("the shard intersection order")?;
    let n = poset.len();
    let inter: Vec<ShardIntersection> = (0..n).map(|c| shard_intersection(arr, data, poset, c)).collect();
    let labels: Vec<BTreeSet<usize>> = (0..n).map(|c| data.interval_labels(poset, c)).collect::<Result<_>>()?;
    let walls: Vec<Vec<Vec<Rational>>> =
        (0..n).map(|c| poset.lower_walls(c).iter().map(|&h| arr.hyperplanes[h].normal.clone()).collect()).collect();
    let mut order = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            let by_labels = labels[a].is_subset(&labels[b]);
            let by_hyperplanes = poset.leq(a, b) && linalg::span_contains(&walls[b], &walls[a], arr.dimension);
            let geometric = cone_contained(arr.dimension, &inter[b], &inter[a]);
            if by_labels != geometric || by_labels != by_hyperplanes {
                return Err(Error::Internal(format!(
                    "shard order disagreement at ({a}, {b}): geometric {geometric}, labels {by_labels}, hyperplanes {by_hyperplanes}"
                )));
            }
            order[a][b] = geometric;
        }
    }
    Ok(ShardPoset { order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{builtin_arrangement, Family};

    fn setup(f: Family) -> (Arrangement, RegionPoset, ShardData) {
        let arr = builtin_arrangement(f).unwrap();
        let p = RegionPoset::new(&arr).unwrap();
        let d = ShardData::new(&arr, &p).unwrap();
        (arr, p, d)
    }

    #[test]
    fn shard_counts() {
        for m in 3..=7 {
            let (_, _, d) = setup(Family::I2(m));
            assert_eq!(d.len(), 2 * m - 2);
        }
        let (_, p, d) = setup(Family::A(3));
        assert_eq!(d.len(), 11);
        let ji = (0..p.len()).filter(|&c| p.is_join_irreducible(c)).count();
        assert_eq!(ji, 11);
        let (_, _, d) = setup(Family::B(3));
        let (_, p3, _) = setup(Family::B(3));
        assert_eq!(d.len(), (0..p3.len()).filter(|&c| p3.is_join_irreducible(c)).count());
    }

    #[test]
    fn dihedral_cuts() {
        let (_, p, d) = setup(Family::I2(4));
        let walls = p.walls(p.base);
        for h in 0..4 {
            for k in 0..4 {
                if h != k {
                    assert_eq!(d.cuts(k, h).unwrap(), walls.contains(&k) && !walls.contains(&h));
                }
            }
        }
        for &e in &p.lower_covers[p.top] {
            let s = d.edge_shard[e];
            assert!(walls.contains(&d.shards[s].hyperplane));
            assert!(d.shards[s].cutters.is_empty());
        }
        assert!(d.cuts(0, 0).is_err());
    }

    #[test]
    fn join_irreducible_bijection() {
        for f in [Family::I2(4), Family::I2(5), Family::A(3)] {
            let (_, p, d) = setup(f);
            let ji = d.join_irreducible.clone().unwrap();
            for (s, &j) in ji.iter().enumerate() {
                assert!(p.is_join_irreducible(j));
                assert_eq!(d.shard_of_join_irreducible(&p, j).unwrap(), s);
            }
            for c in 0..p.len() {
                assert!(d.canonical_join_check(&p, c).unwrap());
            }
        }
    }

    #[test]
    fn shard_order_dihedral_and_a3() {
        let (arr, p, d) = setup(Family::I2(4));
        let o = shard_intersection_order(&arr, &d, &p).unwrap();
        for c in 0..8 {
            assert!(o.leq(p.base, c));
            assert!(o.leq(c, p.top));
        }
        let middle: Vec<usize> = (0..8).filter(|&c| c != p.base && c != p.top).collect();
        for &a in &middle {
            for &b in &middle {
                assert_eq!(o.leq(a, b), a == b);
            }
        }
        let (arr, p, d) = setup(Family::A(3));
        let o = shard_intersection_order(&arr, &d, &p).unwrap();
        for a in 0..24 {
            for b in 0..24 {
                if o.leq(a, b) {
                    assert!(p.leq(a, b));
                }
            }
        }
    }
}
