//! The pure shard monoid: the interval `[1, Δ²]`, its order and counts, and the Crackle and Pow maps.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fmt::Write;

use serde_json::{json, Value};

use crate::arrangement::SignMask;
use crate::error::{Error, Result};
use crate::finposet::FinitePoset;
use crate::poset::RegionPoset;
use crate::salvetti::{LoopElement, Rank2Frame, Salvetti, SignedStep};
use crate::shards::ShardPoset;

#[derive(Clone, Debug)]
pub struct MonoidElement {
    pub id: usize,
    pub rank: usize,
    pub loop_element: LoopElement,
    /// Multiplicity of each hyperplane in any word for the element.
    pub degree: Vec<usize>,
    /// One word over shard ids.
    pub word: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalCover {
    pub lower: usize,
    pub upper: usize,
    pub shard: usize,
}

#[derive(Clone, Debug)]
pub struct IntervalPoset {
    pub elements: Vec<MonoidElement>,
    pub covers: Vec<IntervalCover>,
    pub up: Vec<Vec<usize>>,
    pub down: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
    pub poset: FinitePoset,
    index: HashMap<LoopElement, usize>,
}

impl IntervalPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn id_of(&self, x: &LoopElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn rank_generating_function(&self) -> Vec<usize> {
        let top = self.elements[self.top].rank;
        let mut out = vec![0; top + 1];
        for e in &self.elements {
            out[e.rank] += 1;
        }
        out
    }

    pub fn max_chain_count(&self) -> u128 {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.elements[i].rank);
        let mut paths = vec![0u128; self.len()];
        paths[self.bottom] = 1;
        for &x in &order {
            for &c in &self.up[x] {
                paths[self.covers[c].upper] += paths[x];
            }
        }
        paths[self.top]
    }

    /// Whether the interval is a lattice; on failure, two elements and two incomparable maximal common lower bounds.
    pub fn lattice_check(&self) -> (bool, Option<[usize; 4]>) {
        match self.poset.meet_failure() {
            None => (true, None),
            Some(w) => (false, Some(w)),
        }
    }

    /// Every maximal chain, as its sequence of shard labels.
    pub fn chain_words(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.chains_rec(self.bottom, &mut cur, &mut out);
        out
    }

    fn chains_rec(&self, x: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if x == self.top {
            out.push(cur.clone());
            return;
        }
        for &c in &self.up[x] {
            cur.push(self.covers[c].shard);
            self.chains_rec(self.covers[c].upper, cur, out);
            cur.pop();
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements.iter().map(|e| json!({
                "id": e.id,
                "rank": e.rank,
                "word": e.word,
                "covers": self.up[e.id].iter().map(|&c| json!({"upper": self.covers[c].upper, "shard": self.covers[c].shard})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "bottom": self.bottom,
            "top": self.top,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph interval {\n  rankdir=BT;\n");
        for e in &self.elements {
            let label: Vec<String> = e.word.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(s, "  p{} [label=\"{}\"];", e.id, if label.is_empty() { "1".to_string() } else { label.join(" ") });
        }
        for c in &self.covers {
            let _ = writeln!(s, "  p{} -> p{} [label=\"{}\"];", c.lower, c.upper, c.shard);
        }
        s.push_str("}\n");
        s
    }
}

/// The shard loops of an arrangement together with the enumerated interval `[1, Δ²]`.
pub struct ShardMonoid<'a> {
    pub sal: &'a Salvetti,
    pub gens: Vec<LoopElement>,
    pub twist: LoopElement,
    pub interval: IntervalPoset,
}

struct Search<'s> {
    sal: &'s Salvetti,
    gens: &'s [LoopElement],
    hyper: Vec<usize>,
    twist: &'s LoopElement,
    full: SignMask,
    memo: HashMap<LoopElement, bool>,
    budget: usize,
}

impl Search<'_> {
    fn extendable(&mut self, x: &LoopElement, used: SignMask) -> Result<bool> {
        if let Some(&v) = self.memo.get(x) {
            return Ok(v);
        }
        let v = if used == self.full {
            x == self.twist
        } else {
            let mut found = false;
            for s in 0..self.gens.len() {
                let h = self.hyper[s];
                if used >> h & 1 == 1 {
                    continue;
                }
                let y = self.sal.mul(x, &self.gens[s]);
                if self.extendable(&y, used | 1 << h)? {
                    found = true;
                    break;
                }
            }
            found
        };
        if self.memo.len() >= self.budget {
            return Err(Error::ResourceLimit(format!("interval search exceeded {} states", self.budget)));
        }
        self.memo.insert(x.clone(), v);
        Ok(v)
    }
}

impl<'a> ShardMonoid<'a> {
    pub fn new(sal: &'a Salvetti, budget: usize) -> Result<Self> {
        let gens = sal.shard_loops()?;
        let twist = sal.full_twist()?;
        let interval = enumerate_interval(sal, &gens, &twist, budget)?;
        Ok(ShardMonoid { sal, gens, twist, interval })
    }

    fn poset(&self) -> &RegionPoset {
        &self.sal.poset
    }

    pub fn eval(&self, word: &[usize]) -> Result<LoopElement> {
        self.sal.eval_word(&self.gens, word)
    }

    /// `κ(t_{Σ_1} ⋯ t_{Σ_k}) = t_{-Σ_k} ⋯ t_{-Σ_1}`.
    pub fn kappa(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().map(|&s| self.sal.shards.antipodal[s]).collect()
    }

    /// A word for `x⁻¹Δ²`: the labels along some upward path from `x` to the top.
    pub fn complement_word(&self, x: usize) -> Vec<usize> {
        let ip = &self.interval;
        let mut word = Vec::new();
        let mut cur = x;
        while cur != ip.top {
            let c = ip.covers[ip.up[cur][0]];
            word.push(c.shard);
            cur = c.upper;
        }
        word
    }

    /// `Ω(x) = κ(x⁻¹Δ²)`, if it lies in the interval.
    pub fn omega(&self, x: usize) -> Result<Option<usize>> {
        let w = self.kappa(&self.complement_word(x));
        Ok(self.interval.id_of(&self.eval(&w)?))
    }

    /// Ω is an order-reversing involution of the interval, and κ fixes Δ².
    pub fn omega_check(&self) -> Result<bool> {
        let ip = &self.interval;
        let mut om = Vec::with_capacity(ip.len());
        for x in 0..ip.len() {
            match self.omega(x)? {
                Some(y) => om.push(y),
                None => return Ok(false),
            }
        }
        if (0..ip.len()).any(|x| om[om[x]] != x) {
            return Ok(false);
        }
        for a in 0..ip.len() {
            for b in 0..ip.len() {
                if ip.leq(a, b) != ip.leq(om[b], om[a]) {
                    return Ok(false);
                }
            }
        }
        let top_word = &ip.elements[ip.top].word;
        if self.eval(&self.kappa(top_word))? != self.twist {
            return Ok(false);
        }
        for e in &ip.elements {
            let again = self.eval(&self.kappa(&e.word))?;
            for c in &ip.down[e.id] {
                let c = ip.covers[*c];
                let mut w = ip.elements[c.lower].word.clone();
                w.push(c.shard);
                if self.eval(&self.kappa(&w))? != again {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Shard labels along a region walk, reversed: `t_{Σ(e_k)} ⋯ t_{Σ(e_1)}`.
    pub fn reversed_labels(&self, walk: &[usize]) -> Vec<usize> {
        let p = self.poset();
        walk.windows(2)
            .rev()
            .map(|w| self.sal.shards.edge_shard[p.edge_between(w[0], w[1]).expect("adjacent")])
            .collect()
    }

    pub fn crackle_word(&self, c: usize) -> Result<Vec<usize>> {
        let p = self.poset();
        p.require_simplicial("Crackle")?;
        Ok(self.reversed_labels(&p.minimal_walk(p.pop(c)?, c)))
    }

    /// `Crackle(C)` as an interval element.
    pub fn crackle(&self, c: usize) -> Result<usize> {
        let x = self.eval(&self.crackle_word(c)?)?;
        self.interval.id_of(&x).ok_or_else(|| Error::Internal(format!("Crackle({c}) is not in the interval")))
    }

    /// `gal(B, Pop C) · gal(Pop C, C) · gal(C, Pop C) · gal(B, Pop C)⁻¹`.
    pub fn crackle_via_galleries(&self, c: usize) -> Result<LoopElement> {
        let p = self.poset();
        let pc = p.pop(c)?;
        let mut steps = forward_steps(p, &p.minimal_walk(p.base, pc));
        steps.extend(forward_steps(p, &p.minimal_walk(pc, c)));
        steps.extend(forward_steps(p, &p.minimal_walk(c, pc)));
        steps.extend(inverse_steps(p, &p.minimal_walk(p.base, pc)));
        self.sal.loop_from_signed_walk(&steps)
    }

    pub fn pow_word(&self, c: usize) -> Vec<usize> {
        let p = self.poset();
        self.reversed_labels(&p.minimal_walk(p.base, c))
    }

    pub fn pow(&self, c: usize) -> Result<usize> {
        let x = self.eval(&self.pow_word(c))?;
        self.interval.id_of(&x).ok_or_else(|| Error::Internal(format!("Pow({c}) is not in the interval")))
    }

    /// Every minimal gallery from the base region to `c` gives the same Pow.
    pub fn pow_gallery_independent(&self, c: usize) -> Result<bool> {
        let p = self.poset();
        let mut seen: Option<LoopElement> = None;
        for walk in p.all_minimal_walks(p.base, c) {
            let x = self.eval(&self.reversed_labels(&walk))?;
            match &seen {
                None => seen = Some(x),
                Some(y) if *y != x => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// `D ⪯ C ⇔ Crackle(D) ≤ Crackle(C)`, and Crackle is injective.
    pub fn crackle_embedding_check(&self, order: &ShardPoset) -> Result<bool> {
        let img: Vec<usize> = (0..self.poset().len()).map(|c| self.crackle(c)).collect::<Result<_>>()?;
        Ok(embeds(&img, |d, c| order.leq(d, c), &self.interval))
    }

    /// `D ≤ C ⇔ Pow(D) ≤ Pow(C)`, and Pow is injective.
    pub fn pow_embedding_check(&self) -> Result<bool> {
        let p = self.poset();
        let img: Vec<usize> = (0..p.len()).map(|c| self.pow(c)).collect::<Result<_>>()?;
        Ok(embeds(&img, |d, c| p.leq(d, c), &self.interval))
    }

    /// Shards occurring in some word for each element.
    pub fn letters(&self) -> Vec<BTreeSet<usize>> {
        let ip = &self.interval;
        let mut order: Vec<usize> = (0..ip.len()).collect();
        order.sort_by_key(|&i| ip.elements[i].rank);
        let mut out = vec![BTreeSet::new(); ip.len()];
        for &x in &order {
            let mut acc = BTreeSet::new();
            for &c in &ip.down[x] {
                let c = ip.covers[c];
                acc.extend(out[c.lower].iter().copied());
                acc.insert(c.shard);
            }
            out[x] = acc;
        }
        out
    }

    /// `t_Σ` occurs in a word for `Crackle(C)` iff `J_Σ ⪯ C`.
    pub fn all_shards_check(&self, order: &ShardPoset) -> Result<bool> {
        let ji = self.sal.shards.require_ji()?;
        let letters = self.letters();
        for c in 0..self.poset().len() {
            let l = &letters[self.crackle(c)?];
            for (s, &j) in ji.iter().enumerate() {
                if l.contains(&s) != order.leq(j, c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// For each region, whether `Crackle(C) ≤ Pow(C)`.
    pub fn crackle_below_pow(&self) -> Result<Vec<bool>> {
        (0..self.poset().len()).map(|c| Ok(self.interval.leq(self.crackle(c)?, self.pow(c)?))).collect()
    }

    /// The identification maps for `C` and the checks of ω_C for every `D ⪯ C`.
    pub fn two_ways_check(&self, order: &ShardPoset, c: usize) -> Result<bool> {
        if self.poset().lower_covers[c].is_empty() {
            return Ok(self.crackle(c)? == self.interval.bottom);
        }
        let tw = TwoWays::new(self.sal, c)?;
        for d in 0..self.poset().len() {
            if order.leq(d, c) && !tw.check(self, d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The checks for a single pair `D ⪯ C`.
    pub fn two_ways_pair(&self, order: &ShardPoset, c: usize, d: usize) -> Result<bool> {
        if !order.leq(d, c) {
            return Err(Error::Precondition(format!("region {d} is not below {c} in the shard intersection order")));
        }
        if self.poset().lower_covers[c].is_empty() {
            return Ok(self.crackle(c)? == self.interval.bottom);
        }
        TwoWays::new(self.sal, c)?.check(self, d)
    }
}

fn embeds(img: &[usize], src_leq: impl Fn(usize, usize) -> bool, ip: &IntervalPoset) -> bool {
    let distinct: HashSet<usize> = img.iter().copied().collect();
    if distinct.len() != img.len() {
        return false;
    }
    (0..img.len()).all(|d| (0..img.len()).all(|c| src_leq(d, c) == ip.leq(img[d], img[c])))
}

pub fn forward_steps(p: &RegionPoset, walk: &[usize]) -> Vec<SignedStep> {
    p.walk_to_steps(walk).into_iter().map(|step| SignedStep { step, inverse: false }).collect()
}

/// The gallery along `walk`, traversed backwards.
pub fn inverse_steps(p: &RegionPoset, walk: &[usize]) -> Vec<SignedStep> {
    p.walk_to_steps(walk).into_iter().rev().map(|step| SignedStep { step, inverse: true }).collect()
}

pub fn enumerate_interval(sal: &Salvetti, gens: &[LoopElement], twist: &LoopElement, budget: usize) -> Result<IntervalPoset> {
    let n = sal.arr.len();
    let hyper: Vec<usize> = sal.shards.shards.iter().map(|s| s.hyperplane).collect();
    let mut search = Search { sal, gens, hyper: hyper.clone(), twist, full: sal.arr.full_mask(), memo: HashMap::new(), budget };
    let one = sal.identity_loop();
    if !search.extendable(&one, 0)? {
        return Err(Error::Internal("the identity does not extend to the full twist".into()));
    }
    let mut elements = vec![MonoidElement { id: 0, rank: 0, loop_element: one.clone(), degree: vec![0; n], word: Vec::new() }];
    let mut used = vec![0 as SignMask];
    let mut index = HashMap::from([(one, 0usize)]);
    let mut covers = Vec::new();
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].loop_element.clone();
        for s in 0..gens.len() {
            let h = hyper[s];
            if used[next] >> h & 1 == 1 {
                continue;
            }
            let y = sal.mul(&x, &gens[s]);
            if !search.extendable(&y, used[next] | 1 << h)? {
                continue;
            }
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    let mut word = elements[next].word.clone();
                    word.push(s);
                    let degree = sal.abelian_degree(&word);
                    elements.push(MonoidElement { id, rank: word.len(), loop_element: y.clone(), degree, word });
                    used.push(used[next] | 1 << h);
                    index.insert(y, id);
                    id
                }
            };
            covers.push(IntervalCover { lower: next, upper: id, shard: s });
        }
        next += 1;
    }
    let top = *index.get(twist).ok_or_else(|| Error::Internal("full twist missing from interval".into()))?;
    let mut up = vec![Vec::new(); elements.len()];
    let mut down = vec![Vec::new(); elements.len()];
    for (i, c) in covers.iter().enumerate() {
        up[c.lower].push(i);
        down[c.upper].push(i);
    }
    let poset = FinitePoset::from_covers(elements.len(), covers.iter().map(|c| (c.lower, c.upper)).collect());
    Ok(IntervalPoset { elements, covers, up, down, bottom: 0, top, poset, index })
}

/// The identifications of `[Pop(C), C]` and of `{D ⪯ C}` with the regions of `H_C`.
struct TwoWays {
    pop_c: usize,
    hyperplanes: Vec<usize>,
    sub: Salvetti,
    /// `(ι_C^Pop)⁻¹`, indexed by region of `H_C`.
    lift: Vec<usize>,
}

impl TwoWays {
    fn new(sal: &Salvetti, c: usize) -> Result<Self> {
        let p = &sal.poset;
        let walls: Vec<Vec<_>> = p.lower_walls(c).iter().map(|&h| sal.arr.hyperplanes[h].normal.clone()).collect();
        let hyperplanes: Vec<usize> = (0..sal.arr.len())
            .filter(|&h| crate::linalg::in_span(&walls, &sal.arr.hyperplanes[h].normal, sal.arr.dimension))
            .collect();
        let sub = Salvetti::new(sal.arr.subarrangement(&hyperplanes)?)?;
        let pop_c = p.pop(c)?;
        let mut lift = vec![usize::MAX; sub.poset.len()];
        let mut tw = TwoWays { pop_c, hyperplanes, sub, lift: Vec::new() };
        for e in p.interval(pop_c, c) {
            let r = tw.iota(p, e);
            if lift[r] != usize::MAX {
                return Err(Error::Internal(format!("[Pop({c}), {c}] does not restrict bijectively")));
            }
            lift[r] = e;
        }
        if lift.contains(&usize::MAX) {
            return Err(Error::Internal(format!("[Pop({c}), {c}] does not cover the regions of its localization")));
        }
        tw.lift = lift;
        Ok(tw)
    }

    /// `ι_C`: the region of `H_C` containing a region of `H`.
    fn iota(&self, p: &RegionPoset, e: usize) -> usize {
        let signs = p.regions[e].signs;
        let mask = self.hyperplanes.iter().enumerate().fold(0u64, |m, (k, &h)| m | (signs >> h & 1) << k);
        self.sub.poset.region_by_signs(mask).expect("restriction of a region is a region")
    }

    fn omega(&self, p: &RegionPoset, e: usize) -> usize {
        self.lift[self.iota(p, e)]
    }

    fn check(&self, sm: &ShardMonoid<'_>, d: usize) -> Result<bool> {
        let p = sm.poset();
        let sal = sm.sal;
        let pd = p.pop(d)?;
        let src = p.interval(pd, d);
        let x = self.iota(p, d);
        let px = self.sub.poset.pop(x)?;
        let image: BTreeSet<usize> = src.iter().map(|&e| self.omega(p, e)).collect();
        let expected: BTreeSet<usize> = p.interval(self.lift[px], self.lift[x]).into_iter().collect();
        if image.len() != src.len() || image != expected {
            return Ok(false);
        }
        for &a in &src {
            let wa = self.omega(p, a);
            if !p.leq(a, wa) {
                return Ok(false);
            }
            for &b in &src {
                if p.leq(a, b) != p.leq(wa, self.omega(p, b)) {
                    return Ok(false);
                }
            }
        }
        for e in &p.covers {
            if p.leq(pd, e.lower) && p.leq(e.upper, d) {
                let Some(f) = p.edge_between(self.omega(p, e.lower), self.omega(p, e.upper)) else { return Ok(false) };
                if sal.shards.edge_shard[f] != sal.shards.edge_shard[e.id] {
                    return Ok(false);
                }
            }
        }
        let sp = &self.sub.poset;
        let mut sub_walk = sp.minimal_walk(sp.base, px);
        sub_walk.extend_from_slice(&sp.minimal_walk(px, x)[1..]);
        sub_walk.extend_from_slice(&sp.minimal_walk(x, px)[1..]);
        let lifted: Vec<usize> = sub_walk.iter().map(|&r| self.lift[r]).collect();
        let back: Vec<usize> = sp.minimal_walk(sp.base, px).iter().map(|&r| self.lift[r]).collect();
        if lifted.windows(2).chain(back.windows(2)).any(|w| p.edge_between(w[0], w[1]).is_none()) {
            return Ok(false);
        }
        let prefix = p.minimal_walk(p.base, self.pop_c);
        let mut steps = forward_steps(p, &prefix);
        steps.extend(forward_steps(p, &lifted));
        steps.extend(inverse_steps(p, &back));
        steps.extend(inverse_steps(p, &prefix));
        let phi = sal.loop_from_signed_walk(&steps)?;
        Ok(phi == sm.eval(&sm.crackle_word(d)?)?)
    }
}

/// `ℓ_I` or `r_I` for an index set `I ⊆ [m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank2WordClass {
    pub left: bool,
    pub indices: Vec<usize>,
}

impl fmt::Display for Rank2WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{}{{{}}}", if self.left { "l" } else { "r" }, idx.join(","))
    }
}

/// `r_I = r_{i_k} ⋯ r_{i_1}` as shard ids.
pub fn r_word(frame: &Rank2Frame, indices: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = indices.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.into_iter().map(|i| frame.shard(i)).collect()
}

/// `ℓ_I = ℓ_{i_1} ⋯ ℓ_{i_k}` as shard ids.
pub fn l_word(frame: &Rank2Frame, indices: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = indices.to_vec();
    v.sort_unstable();
    v.into_iter().map(|i| frame.shard(frame.m + i)).collect()
}

/// Parse letters like `r2 l1 l10` into shard ids.
pub fn parse_rank2_word(frame: &Rank2Frame, text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (side, num) = t.split_at(1);
            let i: usize = num.parse().map_err(|_| Error::Parse(format!("bad letter {t:?}")))?;
            if i == 0 || i > frame.m {
                return Err(Error::Parse(format!("index out of range in {t:?}")));
            }
            match side {
                "r" | "R" => Ok(frame.shard(i)),
                "l" | "L" => Ok(frame.shard(frame.m + i)),
                _ => Err(Error::Parse(format!("bad letter {t:?}"))),
            }
        })
        .collect()
}

/// Index set (1-based) of the hyperplanes used by a word, if none repeats.
pub fn rank2_degree(sal: &Salvetti, frame: &Rank2Frame, word: &[usize]) -> Option<Vec<usize>> {
    let degree = sal.abelian_degree(word);
    if degree.iter().any(|&d| d > 1) {
        return None;
    }
    let mut idx: Vec<usize> = (1..=frame.m).filter(|&i| degree[frame.hyperplanes[i - 1]] == 1).collect();
    idx.sort_unstable();
    Some(idx)
}

/// The `ℓ_I` or `r_I` form of a word, preferring `ℓ_I` where the two coincide.
pub fn rank2_normalize(sal: &Salvetti, gens: &[LoopElement], frame: &Rank2Frame, word: &[usize]) -> Result<Option<Rank2WordClass>> {
    let Some(indices) = rank2_degree(sal, frame, word) else { return Ok(None) };
    let x = sal.eval_word(gens, word)?;
    if sal.eval_word(gens, &l_word(frame, &indices))? == x {
        return Ok(Some(Rank2WordClass { left: true, indices }));
    }
    if sal.eval_word(gens, &r_word(frame, &indices))? == x {
        return Ok(Some(Rank2WordClass { left: false, indices }));
    }
    Ok(None)
}

pub fn rank2_classify(sm: &ShardMonoid<'_>, frame: &Rank2Frame) -> Result<Vec<Option<Rank2WordClass>>> {
    sm.interval.elements.iter().map(|e| rank2_normalize(sm.sal, &sm.gens, frame, &e.word)).collect()
}

/// Expected element count, chain count and rank generating function for `m` lines.
pub fn rank2_expected(m: usize) -> (usize, u128, Vec<usize>) {
    let binom = |n: usize, k: usize| -> usize { (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1)) };
    let mut rgf = vec![1];
    for k in 1..m {
        rgf.push(2 * binom(m, k) - 2);
    }
    rgf.push(1);
    (rgf.iter().sum(), m as u128 * (1u128 << (m - 2)), rgf)
}

/// Unimodal words `ℓ_I r_{[m]∖I}` with `1 ∈ I`, `m ∉ I`.
pub fn unimodal_words(frame: &Rank2Frame) -> Vec<Vec<usize>> {
    let m = frame.m;
    let mut out = Vec::new();
    for bits in 0..1u64 << (m - 2) {
        let mut i_set = vec![1];
        let mut rest = vec![m];
        for k in 2..m {
            if bits >> (k - 2) & 1 == 1 {
                i_set.push(k);
            } else {
                rest.push(k);
            }
        }
        let mut w = l_word(frame, &i_set);
        w.extend(r_word(frame, &rest));
        out.push(w);
    }
    out
}

/// The maximal chains of the interval are exactly the cyclic rotations of unimodal words.
pub fn unimodal_census_check(sm: &ShardMonoid<'_>, frame: &Rank2Frame) -> bool {
    let chains: BTreeSet<Vec<usize>> = sm.interval.chain_words().into_iter().collect();
    let mut expected = BTreeSet::new();
    for w in unimodal_words(frame) {
        for r in 0..w.len() {
            let mut v = w.clone();
            v.rotate_left(r);
            expected.insert(v);
        }
    }
    chains == expected && expected.len() as u128 == rank2_expected(frame.m).1
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(1, m, k, &mut cur, &mut out);
    out
}

/// Left-to-right order of the elements of each rank in the layered drawing.
///
/// Index sets are ordered lexicographically as the index words of `r_I` (decreasing) and `ℓ_I` (increasing).
pub fn rank2_layout(sm: &ShardMonoid<'_>, frame: &Rank2Frame) -> Result<Vec<Vec<usize>>> {
    let m = frame.m;
    let ip = &sm.interval;
    let locate = |w: Vec<usize>| -> Result<usize> {
        ip.id_of(&sm.eval(&w)?).ok_or_else(|| Error::Internal("layout word is not in the interval".into()))
    };
    let mut levels = vec![vec![ip.bottom]];
    for k in 1..m {
        let subsets = subsets_of_size(m, k);
        let mut by_word = subsets.clone();
        by_word.sort_by_key(|s| s.iter().rev().copied().collect::<Vec<usize>>());
        let mut seq = Vec::new();
        for i in by_word.iter().filter(|s| s.contains(&m)) {
            seq.push(locate(r_word(frame, i))?);
        }
        let s2: Vec<&Vec<usize>> = subsets.iter().rev().filter(|s| !s.contains(&1)).collect();
        for i in s2.iter().skip(1) {
            seq.push(locate(l_word(frame, i))?);
        }
        for i in by_word.iter().rev().filter(|s| !s.contains(&m)) {
            seq.push(locate(r_word(frame, i))?);
        }
        let s4: Vec<&Vec<usize>> = subsets.iter().filter(|s| s.contains(&1)).collect();
        for i in s4.iter().skip(1) {
            seq.push(locate(l_word(frame, i))?);
        }
        levels.push(seq);
    }
    levels.push(vec![ip.top]);
    Ok(levels)
}

/// The layered drawing lists each rank exactly once and has no crossing cover edges.
pub fn rank2_layout_crossing_check(sm: &ShardMonoid<'_>, frame: &Rank2Frame) -> Result<bool> {
    let ip = &sm.interval;
    let levels = rank2_layout(sm, frame)?;
    let mut pos = vec![usize::MAX; ip.len()];
    for (k, level) in levels.iter().enumerate() {
        let distinct: HashSet<usize> = level.iter().copied().collect();
        let at_rank = ip.elements.iter().filter(|e| e.rank == k).count();
        if distinct.len() != level.len() || level.len() != at_rank || level.iter().any(|&x| ip.elements[x].rank != k) {
            return Ok(false);
        }
        for (i, &x) in level.iter().enumerate() {
            pos[x] = i;
        }
    }
    for k in 0..levels.len() - 1 {
        let band: Vec<(i64, i64)> = ip
            .covers
            .iter()
            .filter(|c| ip.elements[c.lower].rank == k)
            .map(|c| (pos[c.lower] as i64, pos[c.upper] as i64))
            .collect();
        for (i, &(a, b)) in band.iter().enumerate() {
            for &(c, d) in &band[i + 1..] {
                if (a - c) * (b - d) < 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{builtin_arrangement, Family};
    use crate::salvetti::DEFAULT_BUDGET;
    use crate::shards::shard_intersection_order;

    fn sal(f: Family) -> Salvetti {
        Salvetti::new(builtin_arrangement(f).unwrap()).unwrap()
    }

    #[test]
    fn dihedral_interval() {
        for m in 3..=6 {
            let s = sal(Family::I2(m));
            let sm = ShardMonoid::new(&s, DEFAULT_BUDGET).unwrap();
            let (count, chains, rgf) = rank2_expected(m);
            assert_eq!(sm.interval.len(), count);
            assert_eq!(sm.interval.max_chain_count(), chains);
            assert_eq!(sm.interval.rank_generating_function(), rgf);
            assert!(sm.interval.lattice_check().0);
            let frame = Rank2Frame::new(&s).unwrap();
            assert!(rank2_classify(&sm, &frame).unwrap().iter().all(|c| c.is_some()));
            assert!(unimodal_census_check(&sm, &frame));
            assert!(rank2_layout_crossing_check(&sm, &frame).unwrap());
            assert!(sm.omega_check().unwrap());
        }
        assert_eq!(rank2_expected(4), (24, 16, vec![1, 6, 10, 6, 1]));
        assert_eq!(rank2_expected(5).2, vec![1, 8, 18, 18, 8, 1]);
    }

    #[test]
    fn dihedral_maps() {
        let s = sal(Family::I2(4));
        let sm = ShardMonoid::new(&s, DEFAULT_BUDGET).unwrap();
        let order = shard_intersection_order(&s.arr, &s.shards, &s.poset).unwrap();
        assert!(sm.crackle_embedding_check(&order).unwrap());
        assert!(sm.pow_embedding_check().unwrap());
        assert!(sm.all_shards_check(&order).unwrap());
        let ranks: BTreeSet<usize> = (0..8).map(|c| sm.interval.elements[sm.crackle(c).unwrap()].rank).collect();
        assert_eq!(ranks, BTreeSet::from([0, 1, 4]));
        assert_eq!(sm.crackle(s.poset.base).unwrap(), sm.interval.bottom);
        assert_eq!(sm.crackle(s.poset.top).unwrap(), sm.interval.top);
        assert_eq!(sm.pow(s.poset.top).unwrap(), sm.interval.top);
        for c in 0..8 {
            assert_eq!(sm.eval(&sm.crackle_word(c).unwrap()).unwrap(), sm.crackle_via_galleries(c).unwrap());
            assert!(sm.two_ways_check(&order, c).unwrap());
        }
        let frame = Rank2Frame::new(&s).unwrap();
        let classes = rank2_classify(&sm, &frame).unwrap();
        for c in 0..8 {
            let cl = classes[sm.pow(c).unwrap()].clone().unwrap();
            let consecutive = cl.indices.windows(2).all(|w| w[1] == w[0] + 1);
            assert!(consecutive, "{cl}");
        }
    }

    #[test]
    fn rank2_example_m10() {
        let s = sal(Family::I2(10));
        let frame = Rank2Frame::new(&s).unwrap();
        let gens = s.shard_loops().unwrap();
        let w = parse_rank2_word(&frame, "r2 l1 l4 l7 l8 r10 r9 r6").unwrap();
        let cl = rank2_normalize(&s, &gens, &frame, &w).unwrap().unwrap();
        assert_eq!(cl, Rank2WordClass { left: true, indices: vec![1, 2, 4, 6, 7, 8, 9, 10] });
    }

    #[test]
    fn a3_interval() {
        let s = sal(Family::A(3));
        let sm = ShardMonoid::new(&s, DEFAULT_BUDGET).unwrap();
        assert_eq!(sm.interval.len(), 152);
        assert_eq!(sm.interval.max_chain_count(), 588);
        let (lattice, witness) = sm.interval.lattice_check();
        assert!(!lattice);
        let [x, y, a, b] = witness.unwrap();
        let ip = &sm.interval;
        assert!(ip.leq(a, x) && ip.leq(a, y) && ip.leq(b, x) && ip.leq(b, y));
        assert!(!ip.leq(a, b) && !ip.leq(b, a));
        let rgf = ip.rank_generating_function();
        assert!(rgf.iter().eq(rgf.iter().rev()));
        assert!(sm.omega_check().unwrap());
        let order = shard_intersection_order(&s.arr, &s.shards, &s.poset).unwrap();
        assert!(sm.crackle_embedding_check(&order).unwrap());
        assert!(sm.pow_embedding_check().unwrap());
        assert!(sm.all_shards_check(&order).unwrap());
        for c in 0..s.poset.len() {
            assert!(sm.pow_gallery_independent(c).unwrap());
            assert_eq!(sm.eval(&sm.crackle_word(c).unwrap()).unwrap(), sm.crackle_via_galleries(c).unwrap());
            assert!(sm.two_ways_check(&order, c).unwrap());
        }
        let c = (0..24).find(|&c| s.poset.grade(c) == 1).unwrap();
        assert!(sm.two_ways_pair(&order, c, s.poset.top).is_err());
        assert!(sm.two_ways_pair(&order, c, c).unwrap());
        assert_eq!(sm.kappa(&[]), Vec::<usize>::new());
    }
}
