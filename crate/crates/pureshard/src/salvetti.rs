//! The Salvetti 1-skeleton, positive galleries, flips across 2-cells, and the word problem for loops at the base region.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, SignMask};
use crate::error::{Error, Result};
use crate::garside::{self, GarsideCategory, GarsideElement};
use crate::poset::{Direction, EdgeStep, RegionPoset};
use crate::shards::ShardData;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Minimal galleries between regions, composed as in Deligne's gallery category.
///
/// A simple `(x, y)` is the minimal gallery from `x` to `y`; `Δ_x = (x, -x)`.
#[derive(Clone, Copy)]
pub struct GalleryCategory<'a> {
    pub poset: &'a RegionPoset,
}

impl GarsideCategory for GalleryCategory<'_> {
    type Obj = usize;
    type Simple = (usize, usize);

    fn source(&self, s: &(usize, usize)) -> usize {
        s.0
    }

    fn target(&self, s: &(usize, usize)) -> usize {
        s.1
    }

    fn identity(&self, x: &usize) -> (usize, usize) {
        (*x, *x)
    }

    fn delta(&self, x: &usize) -> (usize, usize) {
        (*x, self.poset.antipode[*x])
    }

    fn tau_obj(&self, x: &usize) -> usize {
        self.poset.antipode[*x]
    }

    fn tau(&self, s: &(usize, usize)) -> (usize, usize) {
        (self.poset.antipode[s.0], self.poset.antipode[s.1])
    }

    fn complement(&self, s: &(usize, usize)) -> (usize, usize) {
        (s.1, self.poset.antipode[s.0])
    }

    fn left_weight(&self, a: &(usize, usize), b: &(usize, usize)) -> ((usize, usize), (usize, usize)) {
        let (x, mut y) = *a;
        let z = b.1;
        'grow: loop {
            let movable = self.poset.separation(y, z) & !self.poset.separation(x, y);
            let mut bits = movable;
            while bits != 0 {
                let h = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if let Some(next) = self.poset.neighbor(y, h) {
                    y = next;
                    continue 'grow;
                }
            }
            break;
        }
        ((x, y), (y, z))
    }
}

pub type GalleryElement = GarsideElement<usize, (usize, usize)>;

/// An element of the fundamental group of the Salvetti complex, based at the base region.
///
/// Stored as `Δ^power · x₁ ⋯ x_r` in greedy normal form, which is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopElement {
    repr: GalleryElement,
}

impl LoopElement {
    pub fn power(&self) -> i64 {
        self.repr.power
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.repr.factors
    }

    pub fn is_identity(&self) -> bool {
        self.repr.is_identity()
    }

    /// Whether the loop is represented by a positive gallery.
    pub fn is_positive(&self) -> bool {
        self.repr.is_positive()
    }

    pub fn repr(&self) -> &GalleryElement {
        &self.repr
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PositiveGallery {
    pub source: usize,
    pub steps: Vec<StepRecord>,
}

/// Serializable form of an [`EdgeStep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepRecord {
    pub edge: usize,
    pub star: bool,
}

impl From<EdgeStep> for StepRecord {
    fn from(s: EdgeStep) -> Self {
        StepRecord { edge: s.edge, star: s.dir == Direction::Star }
    }
}

impl From<StepRecord> for EdgeStep {
    fn from(s: StepRecord) -> Self {
        EdgeStep { edge: s.edge, dir: if s.star { Direction::Star } else { Direction::Up } }
    }
}

impl PositiveGallery {
    pub fn empty(source: usize) -> Self {
        PositiveGallery { source, steps: Vec::new() }
    }

    pub fn from_steps(poset: &RegionPoset, source: usize, steps: impl IntoIterator<Item = EdgeStep>) -> Result<Self> {
        let steps: Vec<StepRecord> = steps.into_iter().map(StepRecord::from).collect();
        let g = PositiveGallery { source, steps };
        g.regions(poset)?;
        Ok(g)
    }

    pub fn from_walk(poset: &RegionPoset, walk: &[usize]) -> Result<Self> {
        let source = *walk.first().ok_or_else(|| Error::Precondition("empty walk".into()))?;
        for w in walk.windows(2) {
            if poset.edge_between(w[0], w[1]).is_none() {
                return Err(Error::Precondition(format!("regions {} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(PositiveGallery { source, steps: poset.walk_to_steps(walk).into_iter().map(StepRecord::from).collect() })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The visited regions, checking that consecutive steps chain.
    pub fn regions(&self, poset: &RegionPoset) -> Result<Vec<usize>> {
        let mut walk = vec![self.source];
        for s in &self.steps {
            if s.edge >= poset.covers.len() {
                return Err(Error::Precondition(format!("no cover edge {}", s.edge)));
            }
            let (a, b) = poset.step_ends((*s).into());
            if a != *walk.last().unwrap() {
                return Err(Error::Precondition(format!("step over edge {} does not start at region {}", s.edge, walk.last().unwrap())));
            }
            walk.push(b);
        }
        Ok(walk)
    }

    pub fn target(&self, poset: &RegionPoset) -> Result<usize> {
        Ok(*self.regions(poset)?.last().unwrap())
    }
}

/// One 2-cell: the two boundary galleries around a codimension-2 face, as region walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCellRelation {
    /// Index into the rank-2 subarrangements of [`ShardData`].
    pub subarrangement: usize,
    pub sides: [Vec<usize>; 2],
}

impl TwoCellRelation {
    pub fn start(&self) -> usize {
        self.sides[0][0]
    }

    pub fn len(&self) -> usize {
        self.sides[0].len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The greedy factorization of a positive gallery into minimal galleries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryNormalForm {
    pub factors: Vec<(usize, usize)>,
}

/// A loop letter: a Salvetti edge step, possibly traversed backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedStep {
    pub step: EdgeStep,
    pub inverse: bool,
}

/// A letter `δ_k` or `δ_k⁻¹` over the loops of a fixed minimal gallery `B → -B` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeltaLetter {
    pub index: usize,
    pub inverse: bool,
}

pub struct Salvetti {
    pub arr: Arrangement,
    pub poset: RegionPoset,
    pub shards: ShardData,
    two_cells: OnceLock<Vec<TwoCellRelation>>,
}

impl Salvetti {
    pub fn new(arr: Arrangement) -> Result<Self> {
        let poset = RegionPoset::new(&arr)?;
        let shards = ShardData::new(&arr, &poset)?;
        Ok(Salvetti { arr, poset, shards, two_cells: OnceLock::new() })
    }

    pub fn category(&self) -> GalleryCategory<'_> {
        GalleryCategory { poset: &self.poset }
    }

    pub fn base(&self) -> usize {
        self.poset.base
    }

    /// Directed edges `(step, from, to)`: `e` and `e*` for every cover relation.
    pub fn one_skeleton(&self) -> Vec<(EdgeStep, usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.poset.covers.len());
        for e in &self.poset.covers {
            out.push((EdgeStep { edge: e.id, dir: Direction::Up }, e.lower, e.upper));
            out.push((EdgeStep { edge: e.id, dir: Direction::Star }, e.upper, e.lower));
        }
        out
    }

    pub fn one_skeleton_dot(&self) -> String {
        let mut s = String::from("digraph salvetti {\n");
        for (i, r) in self.poset.regions.iter().enumerate() {
            let _ = writeln!(s, "  r{i} [label=\"{}\"];", r.sign_string(self.arr.len()));
        }
        for (step, a, b) in self.one_skeleton() {
            let name = match step.dir {
                Direction::Up => format!("e{}", step.edge),
                Direction::Star => format!("e{}*", step.edge),
            };
            let _ = writeln!(s, "  r{a} -> r{b} [label=\"{name}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn two_cells(&self) -> &[TwoCellRelation] {
        self.two_cells.get_or_init(|| self.compute_two_cells())
    }

    fn compute_two_cells(&self) -> Vec<TwoCellRelation> {
        let p = &self.poset;
        let mut out = Vec::new();
        for (ai, a) in self.shards.rank2.iter().enumerate() {
            let mask = a.mask();
            for r in 0..p.len() {
                let outside = p.regions[r].signs & !mask;
                let sectors = p.regions.iter().filter(|x| x.signs & !mask == outside).count();
                if sectors != 2 * a.hyperplanes.len() {
                    continue;
                }
                let goal = p.region_by_signs(p.regions[r].signs ^ mask).expect("opposite sector exists");
                let mut sides = Vec::new();
                let mut cur = vec![r];
                geodesics_within(p, mask, goal, &mut cur, &mut sides);
                sides.sort();
                let sides: [Vec<usize>; 2] = sides.try_into().expect("a face of codimension 2 has two boundary galleries");
                out.push(TwoCellRelation { subarrangement: ai, sides });
            }
        }
        out
    }

    /// Replace the subword at position `at` matching one side of `cell` by the other side.
    pub fn flip(&self, g: &PositiveGallery, at: usize, cell: &TwoCellRelation) -> Result<PositiveGallery> {
        let walk = g.regions(&self.poset)?;
        let m = cell.len();
        if at + m >= walk.len() {
            return Err(Error::Precondition("flip position out of range".into()));
        }
        let window = &walk[at..=at + m];
        let other = if window == cell.sides[0].as_slice() {
            &cell.sides[1]
        } else if window == cell.sides[1].as_slice() {
            &cell.sides[0]
        } else {
            return Err(Error::Precondition(format!("subword at {at} is not a side of the 2-cell")));
        };
        let mut out = walk[..at].to_vec();
        out.extend_from_slice(other);
        out.extend_from_slice(&walk[at + m + 1..]);
        PositiveGallery::from_walk(&self.poset, &out)
    }

    fn flip_neighbors(&self, walk: &[usize], by_start: &HashMap<usize, Vec<usize>>, out: &mut Vec<Vec<usize>>) {
        let cells = self.two_cells();
        for at in 0..walk.len() {
            let Some(list) = by_start.get(&walk[at]) else { continue };
            for &ci in list {
                let cell = &cells[ci];
                let m = cell.len();
                if at + m >= walk.len() {
                    continue;
                }
                for side in 0..2 {
                    if walk[at..=at + m] == cell.sides[side][..] {
                        let mut w = walk[..at].to_vec();
                        w.extend_from_slice(&cell.sides[1 - side]);
                        w.extend_from_slice(&walk[at + m + 1..]);
                        out.push(w);
                    }
                }
            }
        }
    }

    /// All galleries reachable from `g` by flips, as region walks.
    pub fn flip_closure(&self, g: &PositiveGallery, budget: usize) -> Result<HashSet<Vec<usize>>> {
        let mut by_start: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, c) in self.two_cells().iter().enumerate() {
            by_start.entry(c.start()).or_default().push(i);
        }
        let start = g.regions(&self.poset)?;
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut next = Vec::new();
        while let Some(w) = queue.pop_front() {
            next.clear();
            self.flip_neighbors(&w, &by_start, &mut next);
            for n in next.drain(..) {
                if seen.insert(n.clone()) {
                    if seen.len() > budget {
                        return Err(Error::ResourceLimit(format!("flip closure exceeded {budget} states")));
                    }
                    queue.push_back(n);
                }
            }
        }
        Ok(seen)
    }

    /// The atom crossed by one positive step.
    pub fn atom(&self, s: EdgeStep) -> (usize, usize) {
        self.poset.step_ends(s)
    }

    /// The positive gallery as a category element in normal form.
    pub fn positive_element(&self, g: &PositiveGallery) -> Result<GalleryElement> {
        self.poset.require_simplicial("the gallery word problem")?;
        g.regions(&self.poset)?;
        let cat = self.category();
        Ok(garside::from_simples(&cat, g.source, g.steps.iter().map(|&s| self.atom(s.into()))))
    }

    pub fn gallery_normal_form(&self, g: &PositiveGallery) -> Result<GalleryNormalForm> {
        let e = self.positive_element(g)?;
        Ok(GalleryNormalForm { factors: garside::positive_factors(&self.category(), &e).expect("positive") })
    }

    /// Whether two positive galleries are related by flips.
    pub fn positive_equivalent(&self, a: &PositiveGallery, b: &PositiveGallery, budget: usize) -> Result<bool> {
        let wa = a.regions(&self.poset)?;
        let wb = b.regions(&self.poset)?;
        if wa.len() != wb.len() || wa[0] != wb[0] || wa.last() != wb.last() {
            return Ok(false);
        }
        if self.poset.simplicial {
            return Ok(self.positive_element(a)? == self.positive_element(b)?);
        }
        Ok(self.flip_closure(a, budget)?.contains(&wb))
    }

    pub fn identity_loop(&self) -> LoopElement {
        LoopElement { repr: GarsideElement::identity(self.base()) }
    }

    /// The loop of a walk in the 1-skeleton that may traverse edges backwards.
    pub fn loop_from_signed_walk(&self, steps: &[SignedStep]) -> Result<LoopElement> {
        self.poset.require_simplicial("the loop word problem")?;
        let cat = self.category();
        let mut cur = self.base();
        let mut e = GarsideElement::identity(cur);
        for s in steps {
            let (a, b) = self.atom(s.step);
            if s.inverse {
                if b != cur {
                    return Err(Error::Precondition(format!("inverse step over edge {} does not start at region {cur}", s.step.edge)));
                }
                garside::push_simple_inverse(&cat, &mut e, &(a, b));
                cur = a;
            } else {
                if a != cur {
                    return Err(Error::Precondition(format!("step over edge {} does not start at region {cur}", s.step.edge)));
                }
                garside::push_simple(&cat, &mut e, (a, b));
                cur = b;
            }
        }
        if cur != self.base() {
            return Err(Error::Precondition("walk does not return to the base region".into()));
        }
        Ok(LoopElement { repr: e })
    }

    /// The loop of a positive gallery from the base region back to itself.
    pub fn loop_from_gallery(&self, g: &PositiveGallery) -> Result<LoopElement> {
        if g.source != self.base() || g.target(&self.poset)? != self.base() {
            return Err(Error::Precondition("gallery is not a loop at the base region".into()));
        }
        Ok(LoopElement { repr: self.positive_element(g)? })
    }

    /// `gal(B, C') · e · e* · gal(B, C')⁻¹` for the edge `e : C' ⋖ C`.
    pub fn edge_loop(&self, edge: usize) -> Result<LoopElement> {
        self.poset.require_simplicial("the loop word problem")?;
        let e = self.poset.covers[edge];
        let b = self.base();
        let cat = self.category();
        let mut x = GarsideElement::identity(b);
        garside::push_simple(&cat, &mut x, (b, e.lower));
        garside::push_simple(&cat, &mut x, (e.lower, e.upper));
        garside::push_simple(&cat, &mut x, (e.upper, e.lower));
        garside::push_simple_inverse(&cat, &mut x, &(b, e.lower));
        Ok(LoopElement { repr: x })
    }

    /// The canonical edge of a shard: the one whose lower region comes first.
    pub fn canonical_edge(&self, shard: usize) -> usize {
        (0..self.poset.covers.len())
            .filter(|&e| self.shards.edge_shard[e] == shard)
            .min_by_key(|&e| (self.poset.covers[e].lower, e))
            .expect("every shard labels an edge")
    }

    pub fn shard_loop(&self, shard: usize) -> Result<LoopElement> {
        if shard >= self.shards.len() {
            return Err(Error::Precondition(format!("no shard {shard}")));
        }
        self.edge_loop(self.canonical_edge(shard))
    }

    /// Every shard loop, indexed by shard id.
    pub fn shard_loops(&self) -> Result<Vec<LoopElement>> {
        (0..self.shards.len()).map(|s| self.shard_loop(s)).collect()
    }

    pub fn mul(&self, a: &LoopElement, b: &LoopElement) -> LoopElement {
        LoopElement { repr: garside::multiply(&self.category(), &a.repr, &b.repr) }
    }

    pub fn inv(&self, a: &LoopElement) -> LoopElement {
        LoopElement { repr: garside::inverse(&self.category(), &a.repr) }
    }

    /// Whether `a` is a prefix of `b` in the positive monoid of galleries.
    pub fn left_divides(&self, a: &LoopElement, b: &LoopElement) -> bool {
        garside::left_divides(&self.category(), &a.repr, &b.repr)
    }

    /// The product of shard loops along a word of shard ids.
    pub fn loop_of_word(&self, word: &[usize]) -> Result<LoopElement> {
        let gens = self.shard_loops()?;
        self.eval_word(&gens, word)
    }

    pub fn eval_word(&self, gens: &[LoopElement], word: &[usize]) -> Result<LoopElement> {
        let mut acc = self.identity_loop();
        for &s in word {
            let g = gens.get(s).ok_or_else(|| Error::Precondition(format!("no shard {s}")))?;
            acc = self.mul(&acc, g);
        }
        Ok(acc)
    }

    /// `Δ² = gal(B, -B) · gal(-B, B)`.
    pub fn full_twist(&self) -> Result<LoopElement> {
        self.poset.require_simplicial("the loop word problem")?;
        let cat = self.category();
        let b = self.base();
        let t = self.poset.top;
        Ok(LoopElement { repr: garside::from_simples(&cat, b, [(b, t), (t, b)]) })
    }

    /// Numerator and denominator positive galleries from the base region, with `x = numerator · denominator⁻¹`.
    pub fn fraction(&self, x: &LoopElement) -> (PositiveGallery, PositiveGallery) {
        let cat = self.category();
        let (num, den) = garside::as_fraction(&cat, &x.repr);
        (self.expand(&num), self.expand(&den))
    }

    fn expand(&self, e: &GalleryElement) -> PositiveGallery {
        let simples = garside::positive_factors(&self.category(), e).expect("positive");
        let mut steps = Vec::new();
        for (a, b) in simples {
            steps.extend(self.poset.minimal_gallery(a, b).into_iter().map(StepRecord::from));
        }
        PositiveGallery { source: e.source, steps }
    }

    /// Loops `δ_1, …, δ_k` of the edges of a minimal gallery from the base region to its opposite.
    pub fn delta_generators(&self, delta: &PositiveGallery) -> Result<Vec<LoopElement>> {
        self.check_delta(delta)?;
        delta.steps.iter().map(|s| self.edge_loop(s.edge)).collect()
    }

    fn check_delta(&self, delta: &PositiveGallery) -> Result<Vec<usize>> {
        let walk = delta.regions(&self.poset)?;
        let ok = walk[0] == self.base()
            && *walk.last().unwrap() == self.poset.top
            && walk.len() == self.arr.len() + 1
            && delta.steps.iter().all(|s| !s.star);
        if !ok {
            return Err(Error::Precondition("expected a positive minimal gallery from the base region to its opposite".into()));
        }
        Ok(walk)
    }

    /// `t_e = (δ_{i_s} ⋯ δ_{i_1})⁻¹ δ_k (δ_{i_s} ⋯ δ_{i_1})`, where `δ` crosses `H_e` at step `k`
    /// and `i_1 < ⋯ < i_s < k` are the steps crossing hyperplanes not separating the lower region of `e` from the base.
    pub fn rewrite_in_delta_generators(&self, delta: &PositiveGallery, edge: usize) -> Result<Vec<DeltaLetter>> {
        let walk = self.check_delta(delta)?;
        let crossed: Vec<usize> = walk.windows(2).map(|w| self.poset.separation(w[0], w[1]).trailing_zeros() as usize).collect();
        let e = self.poset.covers[edge];
        let k = crossed.iter().position(|&h| h == e.hyperplane).expect("a minimal gallery to the opposite crosses every hyperplane");
        let inv: SignMask = self.poset.inv[e.lower];
        let conj: Vec<usize> = (0..k).filter(|&i| inv >> crossed[i] & 1 == 0).collect();
        let mut word: Vec<DeltaLetter> = conj.iter().map(|&i| DeltaLetter { index: i + 1, inverse: true }).collect();
        word.push(DeltaLetter { index: k + 1, inverse: false });
        word.extend(conj.iter().rev().map(|&i| DeltaLetter { index: i + 1, inverse: false }));
        Ok(word)
    }

    pub fn eval_delta_word(&self, gens: &[LoopElement], word: &[DeltaLetter]) -> LoopElement {
        let mut acc = self.identity_loop();
        for l in word {
            let g = &gens[l.index - 1];
            acc = self.mul(&acc, &if l.inverse { self.inv(g) } else { g.clone() });
        }
        acc
    }

    /// Multiplicity of each hyperplane among the letters of a word over shard ids.
    pub fn abelian_degree(&self, word: &[usize]) -> Vec<usize> {
        let mut d = vec![0; self.arr.len()];
        for &s in word {
            d[self.shards.shards[s].hyperplane] += 1;
        }
        d
    }

    /// Map a word over shards to the subarrangement on `indices`, whose Salvetti data is `sub`.
    pub fn subarrangement_quotient(&self, sub: &Salvetti, indices: &[usize], word: &[usize]) -> Result<Vec<usize>> {
        let pos: HashMap<usize, usize> = indices.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let mut out = Vec::new();
        for &s in word {
            let sh = self.shards.shards.get(s).ok_or_else(|| Error::Precondition(format!("no shard {s}")))?;
            let Some(&k) = pos.get(&sh.hyperplane) else { continue };
            let signs = sub
                .arr
                .signs_of_except(&sh.witness, k)
                .ok_or_else(|| Error::Internal("shard witness is not generic in the subarrangement".into()))?;
            let t = sub.shards.by_hyperplane[k]
                .iter()
                .copied()
                .find(|&t| sub.shards.shards[t].matches(signs))
                .ok_or_else(|| Error::Internal("no subarrangement shard contains the witness".into()))?;
            out.push(t);
        }
        Ok(out)
    }

    /// Compare greedy normal forms with flip classes on every positive gallery of length at most
    /// `max_len`, from every region. Returns the number of galleries whose classes disagree.
    pub fn normal_form_vs_flips(&self, max_len: usize, budget: usize) -> Result<usize> {
        let p = &self.poset;
        let mut mismatches = 0;
        for start in 0..p.len() {
            let mut layer = vec![vec![start]];
            for len in 0..=max_len {
                if len > 0 {
                    layer = layer
                        .iter()
                        .flat_map(|w| {
                            let x = *w.last().unwrap();
                            p.walls(x).into_iter().filter_map(move |h| p.neighbor(x, h)).map(move |y| {
                                let mut v = w.clone();
                                v.push(y);
                                v
                            })
                        })
                        .collect();
                }
                let mut class: HashMap<Vec<usize>, usize> = HashMap::new();
                let mut by_nf: HashMap<GalleryElement, usize> = HashMap::new();
                for w in &layer {
                    let g = PositiveGallery::from_walk(p, w)?;
                    let c = match class.get(w) {
                        Some(&c) => c,
                        None => {
                            let id = class.len();
                            for v in self.flip_closure(&g, budget)? {
                                class.insert(v, id);
                            }
                            id
                        }
                    };
                    let nf = self.positive_element(&g)?;
                    if *by_nf.entry(nf).or_insert(c) != c {
                        mismatches += 1;
                    }
                }
                let classes: HashSet<usize> = class.values().copied().collect();
                mismatches += classes.len().abs_diff(by_nf.len());
            }
        }
        Ok(mismatches)
    }
}

fn geodesics_within(p: &RegionPoset, mask: SignMask, goal: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let x = *cur.last().unwrap();
    if x == goal {
        out.push(cur.clone());
        return;
    }
    let mut bits = p.separation(x, goal) & mask;
    while bits != 0 {
        let h = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if let Some(y) = p.neighbor(x, h) {
            cur.push(y);
            geodesics_within(p, mask, goal, cur, out);
            cur.pop();
        }
    }
}

/// Naming of a rank-2 arrangement: the right path crosses `H_1, …, H_m` via `e_1, …, e_m`;
/// the left path crosses `H_m, …, H_1` and `e_{m+i}` is its edge crossing `H_i`.
#[derive(Clone, Debug)]
pub struct Rank2Frame {
    pub m: usize,
    /// `hyperplanes[i-1]` is the arrangement index of `H_i`.
    pub hyperplanes: Vec<usize>,
    /// `edges[i-1]` is the cover edge `e_i`, for `i = 1..=2m`.
    pub edges: Vec<usize>,
    /// `shards[i-1]` is `Σ_i = Σ(e_i)`.
    pub shards: Vec<usize>,
    pub right: Vec<usize>,
    pub left: Vec<usize>,
}

impl Rank2Frame {
    pub fn new(sal: &Salvetti) -> Result<Self> {
        let p = &sal.poset;
        let m = sal.arr.len();
        if sal.arr.rank() != 2 || p.len() != 2 * m || m < 2 {
            return Err(Error::Precondition("expected an essential rank-2 arrangement".into()));
        }
        let right = p.minimal_walk(p.base, p.top);
        let walks = p.all_minimal_walks(p.base, p.top);
        let left = walks
            .into_iter()
            .find(|w| w[1] != right[1])
            .ok_or_else(|| Error::Internal("rank-2 arrangement without a second path".into()))?;
        let hyperplanes: Vec<usize> = right.windows(2).map(|w| p.separation(w[0], w[1]).trailing_zeros() as usize).collect();
        let mut edges: Vec<usize> = right.windows(2).map(|w| p.edge_between(w[0], w[1]).unwrap()).collect();
        let left_edges: Vec<usize> = left.windows(2).map(|w| p.edge_between(w[0], w[1]).unwrap()).collect();
        for &h in &hyperplanes {
            let e = left_edges.iter().copied().find(|&e| p.covers[e].hyperplane == h).unwrap();
            edges.push(e);
        }
        let shards = edges.iter().map(|&e| sal.shards.edge_shard[e]).collect();
        Ok(Rank2Frame { m, hyperplanes, edges, shards, right, left })
    }

    /// `e_i`, 1-based.
    pub fn edge(&self, i: usize) -> usize {
        self.edges[i - 1]
    }

    /// `Σ_i`, 1-based.
    pub fn shard(&self, i: usize) -> usize {
        self.shards[i - 1]
    }

    /// The right path `e_1 ⋯ e_m` as a gallery.
    pub fn right_gallery(&self, sal: &Salvetti) -> PositiveGallery {
        PositiveGallery::from_walk(&sal.poset, &self.right).expect("walk")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{builtin_arrangement, Family};

    fn sal(f: Family) -> Salvetti {
        Salvetti::new(builtin_arrangement(f).unwrap()).unwrap()
    }

    fn up(e: usize) -> EdgeStep {
        EdgeStep { edge: e, dir: Direction::Up }
    }

    fn star(e: usize) -> EdgeStep {
        EdgeStep { edge: e, dir: Direction::Star }
    }

    #[test]
    fn skeleton_and_cells() {
        let s = sal(Family::I2(4));
        assert_eq!(s.one_skeleton().len(), 16);
        assert_eq!(s.two_cells().len(), 8);
        let a3 = sal(Family::A(3));
        assert_eq!(a3.one_skeleton().len(), 72);
        assert!(s.one_skeleton_dot().starts_with("digraph"));
    }

    #[test]
    fn dihedral_flips() {
        let s = sal(Family::I2(4));
        let f = Rank2Frame::new(&s).unwrap();
        let e = |i| f.edge(i);
        let right = PositiveGallery::from_steps(&s.poset, s.base(), (1..=4).map(|i| up(e(i)))).unwrap();
        let left = PositiveGallery::from_steps(&s.poset, s.base(), [8, 7, 6, 5].map(|i| up(e(i)))).unwrap();
        let cell = s.two_cells().iter().find(|c| c.start() == s.base()).unwrap();
        let flipped = s.flip(&right, 0, cell).unwrap();
        assert_eq!(flipped, left);
        assert_eq!(s.flip(&flipped, 0, cell).unwrap(), right);
        let r1 = s.poset.covers[e(1)].upper;
        let g = PositiveGallery::from_steps(&s.poset, r1, [up(e(2)), up(e(3)), up(e(4)), star(e(5))]).unwrap();
        let h = PositiveGallery::from_steps(&s.poset, r1, [star(e(1)), up(e(8)), up(e(7)), up(e(6))]).unwrap();
        let cell = s.two_cells().iter().find(|c| c.start() == r1).unwrap();
        assert_eq!(s.flip(&g, 0, cell).unwrap(), h);
        assert!(s.positive_equivalent(&g, &h, DEFAULT_BUDGET).unwrap());
        assert!(s.positive_equivalent(&right, &left, DEFAULT_BUDGET).unwrap());
        let a = PositiveGallery::from_steps(&s.poset, s.base(), [up(e(1)), star(e(1)), up(e(8)), star(e(8))]).unwrap();
        let b = PositiveGallery::from_steps(&s.poset, s.base(), [up(e(8)), star(e(8)), up(e(1)), star(e(1))]).unwrap();
        assert!(!s.positive_equivalent(&a, &b, DEFAULT_BUDGET).unwrap());
        assert!(!s.flip_closure(&a, DEFAULT_BUDGET).unwrap().contains(&b.regions(&s.poset).unwrap()));
    }

    #[test]
    fn dihedral_shard_loops() {
        let s = sal(Family::I2(4));
        let f = Rank2Frame::new(&s).unwrap();
        let delta = f.right_gallery(&s);
        let gens = s.delta_generators(&delta).unwrap();
        let t = |i: usize| s.edge_loop(f.edge(i)).unwrap();
        assert_eq!(t(5), gens[0]);
        assert_eq!(t(8), gens[3]);
        let d = |i: usize, inverse| DeltaLetter { index: i, inverse };
        assert_eq!(s.rewrite_in_delta_generators(&delta, f.edge(6)).unwrap(), vec![d(1, true), d(2, false), d(1, false)]);
        assert_eq!(
            s.rewrite_in_delta_generators(&delta, f.edge(7)).unwrap(),
            vec![d(1, true), d(2, true), d(3, false), d(2, false), d(1, false)]
        );
        assert_eq!(s.rewrite_in_delta_generators(&delta, f.edge(3)).unwrap(), vec![d(3, false)]);
        for i in 1..=8 {
            let w = s.rewrite_in_delta_generators(&delta, f.edge(i)).unwrap();
            assert_eq!(s.eval_delta_word(&gens, &w), t(i));
        }
        let twist = s.full_twist().unwrap();
        assert_eq!(twist.power(), 2);
        let prod = s.mul(&s.mul(&gens[3], &gens[2]), &s.mul(&gens[1], &gens[0]));
        assert_eq!(prod, twist);
        let other = s.mul(&s.mul(&gens[0], &gens[3]), &s.mul(&gens[2], &gens[1]));
        assert_eq!(other, twist);
        let x = s.mul(&gens[0], &gens[1]);
        assert!(s.mul(&x, &s.inv(&x)).is_identity());
        let classes: HashSet<LoopElement> = (1..=8).map(t).collect();
        assert_eq!(classes.len(), 6);
    }

    #[test]
    fn thm_shard_loops_a3() {
        let s = sal(Family::A(3));
        let loops: Vec<LoopElement> = (0..s.poset.covers.len()).map(|e| s.edge_loop(e).unwrap()).collect();
        for a in 0..loops.len() {
            for b in 0..loops.len() {
                assert_eq!(loops[a] == loops[b], s.shards.edge_shard[a] == s.shards.edge_shard[b]);
            }
        }
        let twist = s.full_twist().unwrap();
        for g in s.shard_loops().unwrap() {
            assert_eq!(s.mul(&twist, &g), s.mul(&g, &twist));
        }
        for walk in s.poset.all_minimal_walks(s.base(), s.poset.top) {
            let delta = PositiveGallery::from_walk(&s.poset, &walk).unwrap();
            let gens = s.delta_generators(&delta).unwrap();
            for e in 0..s.poset.covers.len() {
                let w = s.rewrite_in_delta_generators(&delta, e).unwrap();
                assert_eq!(s.eval_delta_word(&gens, &w), loops[e]);
            }
            let prod = gens.iter().rev().fold(s.identity_loop(), |acc, g| s.mul(&acc, g));
            assert_eq!(prod, twist);
        }
    }

    #[test]
    fn normal_forms_match_flips() {
        let s = sal(Family::I2(3));
        assert_eq!(s.normal_form_vs_flips(6, DEFAULT_BUDGET).unwrap(), 0);
    }

    #[test]
    fn fractions_round_trip() {
        let s = sal(Family::A(3));
        let gens = s.shard_loops().unwrap();
        let x = s.mul(&s.inv(&gens[3]), &s.mul(&gens[5], &s.inv(&gens[0])));
        let (num, den) = s.fraction(&x);
        assert_eq!(num.target(&s.poset).unwrap(), den.target(&s.poset).unwrap());
        let cat = s.category();
        let n = s.positive_element(&num).unwrap();
        let d = s.positive_element(&den).unwrap();
        let back = garside::multiply(&cat, &n, &garside::inverse(&cat, &d));
        assert_eq!(&back, x.repr());
    }

    #[test]
    fn quotient_to_three_lines() {
        let s = sal(Family::I2(4));
        let f = Rank2Frame::new(&s).unwrap();
        let all: Vec<usize> = (0..4).collect();
        let same = Salvetti::new(s.arr.subarrangement(&all).unwrap()).unwrap();
        let word: Vec<usize> = (0..s.shards.len()).collect();
        assert_eq!(s.subarrangement_quotient(&same, &all, &word).unwrap(), word);
        let drop = f.hyperplanes[3];
        let idx: Vec<usize> = (0..4).filter(|&h| h != drop).collect();
        let sub = Salvetti::new(s.arr.subarrangement(&idx).unwrap()).unwrap();
        let q2 = s.subarrangement_quotient(&sub, &idx, &[f.shard(2)]).unwrap();
        let q5 = s.subarrangement_quotient(&sub, &idx, &[f.shard(5)]).unwrap();
        assert_ne!(sub.loop_of_word(&q2).unwrap(), sub.loop_of_word(&q5).unwrap());
        let twist_word: Vec<usize> = (1..=4).rev().map(|i| f.shard(i)).collect();
        assert_eq!(s.loop_of_word(&twist_word).unwrap(), s.full_twist().unwrap());
        let q = s.subarrangement_quotient(&sub, &idx, &twist_word).unwrap();
        assert_eq!(sub.loop_of_word(&q).unwrap(), sub.full_twist().unwrap());
        assert_eq!(s.abelian_degree(&twist_word), vec![1; 4]);
    }
}
