//! Braid groups of finite Coxeter groups: greedy normal forms, the Snap map, inversion
//! multisets, c-sortable elements and noncrossing partitions.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Family;
use crate::coxeter::{CoxeterArrangement, CoxeterGroup};
use crate::error::{Error, Result};
use crate::finposet::FinitePoset;
use crate::garside::{self, GarsideCategory, GarsideElement};
use crate::salvetti::LoopElement;
use crate::shardmonoid::ShardMonoid;
use crate::shards::ShardPoset;

/// The Garside structure of `B⁺(W)`: simples are the elements of `W`, `Δ = w∘`.
#[derive(Clone, Copy)]
pub struct BraidCategory<'g> {
    pub group: &'g CoxeterGroup,
}

impl GarsideCategory for BraidCategory<'_> {
    type Obj = ();
    type Simple = usize;

    fn source(&self, _: &usize) {}

    fn target(&self, _: &usize) {}

    fn identity(&self, _: &()) -> usize {
        self.group.identity
    }

    fn delta(&self, _: &()) -> usize {
        self.group.w0
    }

    fn tau_obj(&self, _: &()) {}

    fn tau(&self, s: &usize) -> usize {
        self.group.conj(self.group.w0, *s)
    }

    fn complement(&self, s: &usize) -> usize {
        self.group.mul(self.group.inverse[*s], self.group.w0)
    }

    fn left_weight(&self, a: &usize, b: &usize) -> (usize, usize) {
        let g = self.group;
        let (mut x, mut y) = (*a, *b);
        'outer: loop {
            for i in 0..g.rank() {
                if g.is_left_descent(y, i) && !g.is_right_descent(x, i) {
                    x = g.mul(x, g.gens[i]);
                    y = g.mul(g.gens[i], y);
                    continue 'outer;
                }
            }
            return (x, y);
        }
    }
}

/// `Δ^k · x₁ ⋯ x_r` in left greedy normal form.
pub type BraidElem = GarsideElement<(), usize>;

pub struct Braids<'g> {
    pub group: &'g CoxeterGroup,
    cat: BraidCategory<'g>,
}

impl<'g> Braids<'g> {
    pub fn new(group: &'g CoxeterGroup) -> Self {
        Braids { group, cat: BraidCategory { group } }
    }

    pub fn identity(&self) -> BraidElem {
        GarsideElement::identity(())
    }

    /// The positive lift `𝐰` of `w`.
    pub fn lift(&self, w: usize) -> BraidElem {
        garside::from_simples(&self.cat, (), [w])
    }

    pub fn delta(&self) -> BraidElem {
        self.lift(self.group.w0)
    }

    pub fn from_word(&self, word: &[usize]) -> BraidElem {
        garside::from_simples(&self.cat, (), word.iter().map(|&i| self.group.gens[i]))
    }

    pub fn mul(&self, a: &BraidElem, b: &BraidElem) -> BraidElem {
        garside::multiply(&self.cat, a, b)
    }

    pub fn inv(&self, a: &BraidElem) -> BraidElem {
        garside::inverse(&self.cat, a)
    }

    pub fn left_divides(&self, a: &BraidElem, b: &BraidElem) -> bool {
        garside::left_divides(&self.cat, a, b)
    }

    /// The projection `φ : B(W) → W`.
    pub fn phi(&self, a: &BraidElem) -> usize {
        let g = self.group;
        let d = if a.power.rem_euclid(2) == 1 { g.w0 } else { g.identity };
        a.factors.iter().fold(d, |acc, &x| g.mul(acc, x))
    }

    /// A word over `S` for a positive braid.
    pub fn word(&self, a: &BraidElem) -> Option<Vec<usize>> {
        let simples = garside::positive_factors(&self.cat, a)?;
        Some(simples.into_iter().flat_map(|x| self.group.reduced_word(x)).collect())
    }

    /// Normal form factors written as reduced words, `Δ` factors included.
    pub fn format(&self, a: &BraidElem) -> String {
        let mut parts = Vec::new();
        if a.power != 0 {
            parts.push(format!("Δ^{}", a.power));
        }
        parts.extend(a.factors.iter().map(|&x| self.group.word_name(x)));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" · ")
        }
    }

    /// `Snap(w) = Pop(𝐰) · 𝐰∘(des w)²`, computed as `𝐰 · 𝐰∘(des w)`.
    pub fn snap(&self, w: usize) -> BraidElem {
        let j = self.group.longest_of(&self.group.right_descents(w));
        self.mul(&self.lift(w), &self.lift(j))
    }

    /// `Crackle(w) = Pop(𝐰) · 𝐰∘(des w)² · Pop(𝐰)⁻¹`.
    pub fn crackle(&self, w: usize) -> BraidElem {
        let g = self.group;
        let j = self.lift(g.longest_of(&g.right_descents(w)));
        let p = self.lift(g.pop(w));
        self.mul(&self.mul(&self.mul(&p, &j), &j), &self.inv(&p))
    }

    /// `Inv` of a word: the reflections `s₁ ⋯ s_{k-1} s_k s_{k-1} ⋯ s₁` in order.
    pub fn inv_sequence(&self, word: &[usize]) -> Vec<usize> {
        self.group.inversion_sequence(word)
    }

    pub fn inv_multiset(&self, a: &BraidElem) -> Option<Vec<usize>> {
        let mut v = self.inv_sequence(&self.word(a)?);
        v.sort_unstable();
        Some(v)
    }
}

/// All words obtained from `word` by one braid move.
pub fn braid_moves(group: &CoxeterGroup, word: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..word.len() {
        for j in 0..group.rank() {
            let (s, t) = (word[i], j);
            if s == t {
                continue;
            }
            let m = group.coxeter_matrix[s][t];
            if i + m > word.len() {
                continue;
            }
            if (0..m).all(|k| word[i + k] == if k % 2 == 0 { s } else { t }) {
                let mut w = word.to_vec();
                for k in 0..m {
                    w[i + k] = if k % 2 == 0 { t } else { s };
                }
                out.push(w);
            }
        }
    }
    out
}

fn all_words(rank: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..rank).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Compare normal-form equality with braid-move equivalence on all words of each length up to `max_len`.
/// Returns the number of words whose two classes disagree.
pub fn normal_form_vs_braid_moves(group: &CoxeterGroup, max_len: usize) -> usize {
    let b = Braids::new(group);
    let mut mismatches = 0;
    for len in 0..=max_len {
        let words = all_words(group.rank(), len);
        let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut parent: Vec<usize> = (0..words.len()).collect();
        for (i, w) in words.iter().enumerate() {
            for v in braid_moves(group, w) {
                let j = index[v.as_slice()];
                let (a, c) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = c;
            }
        }
        let mut by_nf: HashMap<BraidElem, usize> = HashMap::new();
        let mut by_class: HashMap<usize, usize> = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            let nf = b.from_word(w);
            let root = find(&mut parent, i);
            let first_nf = *by_nf.entry(nf).or_insert(root);
            let first_class = *by_class.entry(root).or_insert(root);
            if first_nf != root || first_class != root {
                mismatches += 1;
            }
        }
        if by_nf.len() != by_class.len() {
            mismatches += by_nf.len().abs_diff(by_class.len());
        }
    }
    mismatches
}

/// Apply random braid moves to random words and compare `Inv` multisets.
/// Returns the number of words whose multiset changed.
pub fn inv_multiset_fuzz(group: &CoxeterGroup, seed: u64, samples: usize, max_len: usize, moves: usize) -> usize {
    let b = Braids::new(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..samples {
        let len = rng.gen_range(0..=max_len);
        let mut word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..group.rank())).collect();
        let sorted = |w: &[usize]| {
            let mut v = b.inv_sequence(w);
            v.sort_unstable();
            v
        };
        let before = sorted(&word);
        for _ in 0..moves {
            let options = braid_moves(group, &word);
            if options.is_empty() {
                break;
            }
            word = options[rng.gen_range(0..options.len())].clone();
        }
        if sorted(&word) != before {
            bad += 1;
        }
    }
    bad
}

/// Braid-theoretic checks for a Coxeter group transported to its reflection arrangement.
pub struct CoxBraid<'a> {
    pub ca: &'a CoxeterArrangement,
    pub braids: Braids<'a>,
}

impl<'a> CoxBraid<'a> {
    pub fn new(ca: &'a CoxeterArrangement) -> Self {
        CoxBraid { ca, braids: Braids::new(&ca.group) }
    }

    fn g(&self) -> &CoxeterGroup {
        &self.ca.group
    }

    /// `lift` is an order isomorphism from the weak order onto `[1, 𝐰∘]`.
    pub fn lift_isomorphism_check(&self) -> bool {
        let g = self.g();
        let b = &self.braids;
        let lifts: Vec<BraidElem> = (0..g.order()).map(|w| b.lift(w)).collect();
        let p = &self.ca.sal.poset;
        (0..g.order()).all(|u| {
            b.left_divides(&lifts[u], &b.delta())
                && (0..g.order()).all(|v| {
                    let weak = p.leq(self.ca.region_of[u], self.ca.region_of[v]);
                    weak == b.left_divides(&lifts[u], &lifts[v])
                })
        })
    }

    /// `φ(Snap w) = Pop w`, `Snap(w) ≤ Δ²` and `Snap(w) = Pop(𝐰) · 𝐰∘(des w)²` for every `w`.
    pub fn snap_basic_check(&self) -> bool {
        let g = self.g();
        let b = &self.braids;
        let twist = b.mul(&b.delta(), &b.delta());
        (0..g.order()).all(|w| {
            let s = b.snap(w);
            let j = b.lift(g.longest_of(&g.right_descents(w)));
            let other = b.mul(&b.mul(&b.lift(g.pop(w)), &j), &j);
            b.phi(&s) == g.pop(w) && b.left_divides(&s, &twist) && s == other
        }) && b.snap(g.identity).is_identity()
            && b.snap(g.w0) == twist
    }

    /// `u ⪯ v ⇔ inv(u) ⊆ inv(v) and ⟨cov u⟩ ⊆ ⟨cov v⟩`, against the shard intersection order.
    pub fn shard_reformulation_check(&self, order: &ShardPoset) -> bool {
        let g = self.g();
        let subgroups: Vec<Vec<usize>> = (0..g.order()).map(|w| g.subgroup(&g.cover_reflections(w))).collect();
        let invs: Vec<Vec<usize>> = (0..g.order()).map(|w| g.inversions(w)).collect();
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
        (0..g.order()).all(|u| {
            (0..g.order()).all(|v| {
                let formula = subset(&invs[u], &invs[v]) && subset(&subgroups[u], &subgroups[v]);
                formula == order.leq(self.ca.region_of[u], self.ca.region_of[v])
            })
        })
    }

    /// `Snap` is injective and `u ⪯ v ⇔ Snap(u) ≤ Snap(v)`.
    pub fn snap_embedding_check(&self, order: &ShardPoset) -> bool {
        let g = self.g();
        let b = &self.braids;
        let snaps: Vec<BraidElem> = (0..g.order()).map(|w| b.snap(w)).collect();
        let distinct: BTreeSet<&BraidElem> = snaps.iter().collect();
        distinct.len() == snaps.len()
            && (0..g.order()).all(|u| {
                (0..g.order()).all(|v| {
                    order.leq(self.ca.region_of[u], self.ca.region_of[v]) == b.left_divides(&snaps[u], &snaps[v])
                })
            })
    }

    /// Group the covers `u ⋖ us` by the braid `𝐮𝐬𝐮⁻¹` and compare with shard labels.
    /// Returns the number of classes and whether the two partitions agree.
    pub fn shard_conjugate_classes(&self) -> (usize, bool) {
        let g = self.g();
        let b = &self.braids;
        let mut by_braid: HashMap<BraidElem, usize> = HashMap::new();
        let mut by_shard: HashMap<usize, BraidElem> = HashMap::new();
        let mut ok = true;
        for u in 0..g.order() {
            let lu = b.lift(u);
            let lu_inv = b.inv(&lu);
            for i in 0..g.rank() {
                if g.is_right_descent(u, i) {
                    continue;
                }
                let c = b.mul(&b.mul(&lu, &b.lift(g.gens[i])), &lu_inv);
                let shard = self.ca.cover_shard(u, i);
                ok &= *by_braid.entry(c.clone()).or_insert(shard) == shard;
                ok &= *by_shard.entry(shard).or_insert(c.clone()) == c;
            }
        }
        ok &= by_braid.len() == self.ca.sal.shards.len();
        (by_braid.len(), ok)
    }

    /// The image of a loop under `(X, Y) ↦ lift(x⁻¹y)`, `Δ_X ↦ 𝐰∘`.
    pub fn loop_to_braid(&self, x: &LoopElement) -> BraidElem {
        let g = self.g();
        let b = &self.braids;
        let mut out = GarsideElement { source: (), power: x.power(), factors: Vec::new() };
        for &(r, s) in x.factors() {
            let (u, v) = (self.ca.element_of[r], self.ca.element_of[s]);
            out = b.mul(&out, &b.lift(g.mul(g.inverse[u], v)));
        }
        out
    }

    /// `Snap(w) = Crackle(w) · Pop(𝐰)` in `B(W)`, and the braid `Crackle(w)` is the image of the
    /// loop `Crackle(w(B))`.
    pub fn snap_crackle_pop_check(&self, sm: &ShardMonoid<'_>) -> Result<bool> {
        let g = self.g();
        let b = &self.braids;
        for w in 0..g.order() {
            let crackle = b.crackle(w);
            if b.mul(&crackle, &b.lift(g.pop(w))) != b.snap(w) {
                return Ok(false);
            }
            let id = sm.crackle(self.ca.region_of[w])?;
            if self.loop_to_braid(&sm.interval.elements[id].loop_element) != crackle {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Inv(Snap w)` splits as `{t₁..t_m} ⊎ {t_{m+1}..t_r} ⊎ {t_r..t_{m+1}}`, the first block being
    /// `inv(Pop w)` and the doubled block being the reflections of `⟨cov w⟩`.
    /// The word used is a reduced word of `Pop w`, then one of `w∘(des w)`, then its reverse.
    pub fn snap_inversion_check(&self, w: usize) -> bool {
        let g = self.g();
        let j = g.longest_of(&g.right_descents(w));
        let pop = g.pop(w);
        let mut word = g.reduced_word(pop);
        let m = word.len();
        let jw = g.reduced_word(j);
        word.extend(&jw);
        word.extend(jw.iter().rev());
        let seq = self.braids.inv_sequence(&word);
        let r = m + jw.len();
        let mut first: Vec<usize> = seq[..m].to_vec();
        first.sort_unstable();
        let mut middle: Vec<usize> = seq[m..r].to_vec();
        middle.sort_unstable();
        let distinct = middle.windows(2).all(|p| p[0] != p[1]);
        let reversed = (0..jw.len()).all(|k| seq[r + k] == seq[r - 1 - k]);
        let sub = g.subgroup(&g.cover_reflections(w));
        let in_sub: Vec<usize> = g.reflections.iter().copied().filter(|t| sub.binary_search(t).is_ok()).collect();
        let multiset_ok = {
            let mut a = seq.clone();
            a.sort_unstable();
            Some(a) == self.braids.inv_multiset(&self.braids.snap(w))
        };
        first == g.inversions(pop) && distinct && reversed && middle == in_sub && multiset_ok
    }

    /// Sorting word of `w` for the Coxeter word `c`, split into the blocks of `c^∞`.
    pub fn sorting_blocks(&self, c: &[usize], w: usize) -> Vec<Vec<usize>> {
        let g = self.g();
        let mut blocks = Vec::new();
        let mut rest = w;
        while rest != g.identity {
            let mut block = Vec::new();
            for &s in c {
                if g.is_left_descent(rest, s) {
                    rest = g.mul(g.gens[s], rest);
                    block.push(s);
                }
            }
            blocks.push(block);
        }
        blocks
    }

    pub fn sorting_word(&self, c: &[usize], w: usize) -> Vec<usize> {
        self.sorting_blocks(c, w).concat()
    }

    pub fn is_sortable(&self, c: &[usize], w: usize) -> bool {
        let blocks = self.sorting_blocks(c, w);
        blocks.windows(2).all(|p| p[1].iter().all(|s| p[0].contains(s)))
    }

    pub fn sortables(&self, c: &[usize]) -> Vec<usize> {
        (0..self.g().order()).filter(|&w| self.is_sortable(c, w)).collect()
    }

    /// Shard labels along the sorting word of `w∘`.
    pub fn noncrossing_shards(&self, c: &[usize]) -> BTreeSet<usize> {
        let g = self.g();
        let mut u = g.identity;
        let mut out = BTreeSet::new();
        for s in self.sorting_word(c, g.w0) {
            out.insert(self.ca.cover_shard(u, s));
            u = g.mul(u, g.gens[s]);
        }
        out
    }

    /// `[1, c]` in absolute order, as sorted element ids.
    pub fn noncrossing_partitions(&self, c: &[usize]) -> (Vec<usize>, FinitePoset) {
        let g = self.g();
        let lt = g.reflection_length();
        let cw = g.product(c);
        let below = |u: usize, v: usize| lt[u] + lt[g.mul(g.inverse[u], v)] == lt[v];
        let elems: Vec<usize> = (0..g.order()).filter(|&u| below(u, cw)).collect();
        let poset = FinitePoset::from_relation(elems.len(), |a, b| below(elems[a], elems[b]));
        (elems, poset)
    }

    /// `(Snap(Sort(W, c)), ≤)` and `(Crackle(Sort(W, c)), ≤)` are both isomorphic to `NC(W, c)`.
    pub fn catalan_checks(&self, sm: &ShardMonoid<'_>, c: &[usize]) -> Result<CatalanReport> {
        let b = &self.braids;
        let sort = self.sortables(c);
        let (nc, nc_poset) = self.noncrossing_partitions(c);
        let snaps: Vec<BraidElem> = sort.iter().map(|&w| b.snap(w)).collect();
        let snap_poset = FinitePoset::from_relation(sort.len(), |x, y| b.left_divides(&snaps[x], &snaps[y]));
        let crackles: Vec<usize> = sort.iter().map(|&w| sm.crackle(self.ca.region_of[w])).collect::<Result<_>>()?;
        let crackle_poset = FinitePoset::from_relation(sort.len(), |x, y| sm.interval.leq(crackles[x], crackles[y]));
        Ok(CatalanReport {
            sortables: sort.len(),
            noncrossing: nc.len(),
            snap_isomorphic: snap_poset.isomorphism(&nc_poset).is_some(),
            crackle_isomorphic: crackle_poset.isomorphism(&nc_poset).is_some(),
        })
    }

    /// One word per distinct standard Coxeter element, taken from the orderings of `S`.
    pub fn coxeter_words(&self) -> Vec<Vec<usize>> {
        let g = self.g();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in permutations(g.rank()) {
            if seen.insert(g.product(&c)) {
                out.push(c);
            }
        }
        out
    }

    pub fn parse_coxeter_word(&self, text: &str) -> Result<Vec<usize>> {
        let c = self.g().parse_word(text)?;
        let mut sorted = c.clone();
        sorted.sort_unstable();
        if sorted != (0..self.g().rank()).collect::<Vec<_>>() {
            return Err(Error::Parse(format!("{text:?} is not an ordering of the simple generators")));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalanReport {
    pub sortables: usize,
    pub noncrossing: usize,
    pub snap_isomorphic: bool,
    pub crackle_isomorphic: bool,
}

impl CatalanReport {
    pub fn passed(&self) -> bool {
        self.sortables == self.noncrossing && self.snap_isomorphic && self.crackle_isomorphic
    }
}

/// The Coxeter–Catalan number of a finite type.
pub fn coxeter_catalan(family: Family) -> u128 {
    let binom = |n: u128, k: u128| -> u128 { (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1)) };
    match family {
        Family::I2(m) => m as u128 + 2,
        Family::A(n) => binom(2 * n as u128 + 2, n as u128 + 1) / (n as u128 + 2),
        Family::B(n) => binom(2 * n as u128, n as u128),
        Family::D(n) => {
            let n = n as u128;
            (3 * n - 2) * binom(2 * n - 2, n - 1) / n
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::salvetti::{Rank2Frame, DEFAULT_BUDGET};
    use crate::shards::shard_intersection_order;

    fn setup(f: Family) -> CoxeterArrangement {
        CoxeterArrangement::new(f).unwrap()
    }

    #[test]
    fn normal_forms() {
        let g = CoxeterGroup::new(Family::I2(4)).unwrap();
        let b = Braids::new(&g);
        let ss = b.from_word(&[0, 0]);
        assert_eq!(ss.factors, vec![g.gens[0], g.gens[0]]);
        let twist = b.mul(&b.delta(), &b.delta());
        for m in 3..=6 {
            let g = CoxeterGroup::new(Family::I2(m)).unwrap();
            let b = Braids::new(&g);
            let twist = b.mul(&b.delta(), &b.delta());
            for i in 0..2 {
                let s = b.from_word(&[i]);
                assert_eq!(b.mul(&twist, &s), b.mul(&s, &twist));
            }
        }
        assert_eq!(twist.power, 2);
        let w = g.product(&[0, 1, 0]);
        assert_eq!(b.phi(&b.lift(w)), w);
        assert!(b.left_divides(&b.lift(g.gens[0]), &b.lift(w)));
        assert!(!b.left_divides(&b.lift(g.gens[1]), &b.lift(w)));
    }

    #[test]
    fn snap_example() {
        let ca = setup(Family::A(3));
        let cb = CoxBraid::new(&ca);
        let g = &ca.group;
        let w = g.product(&g.parse_word("s1s2s3s2").unwrap());
        let word = cb.braids.word(&cb.braids.snap(w)).unwrap();
        let names: Vec<String> = cb.braids.inv_sequence(&word).into_iter().map(|t| g.reflection_name(t)).collect();
        assert_eq!(names, ["(12)", "(13)", "(14)", "(34)", "(34)", "(14)", "(13)"]);
        for w in 0..g.order() {
            assert!(cb.snap_inversion_check(w));
        }
        assert!(cb.snap_basic_check());
        assert!(cb.lift_isomorphism_check());
    }

    #[test]
    fn dihedral_snap_figure() {
        let ca = setup(Family::I2(4));
        let cb = CoxBraid::new(&ca);
        let g = &ca.group;
        let st = g.product(&[0, 1]);
        assert_eq!(cb.braids.snap(st), cb.braids.from_word(&[0, 1, 1]));
        let order = shard_intersection_order(&ca.sal.arr, &ca.sal.shards, &ca.sal.poset).unwrap();
        assert!(cb.snap_embedding_check(&order));
        assert!(cb.shard_reformulation_check(&order));
        assert_eq!(cb.shard_conjugate_classes(), (6, true));
        let frame = Rank2Frame::new(&ca.sal).unwrap();
        let expected: BTreeSet<usize> = [1, 6, 7, 8].into_iter().map(|i| frame.shard(i)).collect();
        assert_eq!(cb.noncrossing_shards(&[0, 1]), expected);
        let sm = ShardMonoid::new(&ca.sal, DEFAULT_BUDGET).unwrap();
        assert!(cb.snap_crackle_pop_check(&sm).unwrap());
        for c in cb.coxeter_words() {
            let r = cb.catalan_checks(&sm, &c).unwrap();
            assert_eq!(r.sortables, 6);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn sorting_counts() {
        let ca = setup(Family::A(3));
        let cb = CoxBraid::new(&ca);
        assert_eq!(cb.coxeter_words().len(), 4);
        assert_eq!(coxeter_catalan(Family::A(3)), 14);
        assert_eq!(coxeter_catalan(Family::B(3)), 20);
        assert_eq!(coxeter_catalan(Family::D(4)), 50);
        for c in cb.coxeter_words() {
            assert_eq!(cb.sortables(&c).len(), 14);
            assert_eq!(cb.noncrossing_partitions(&c).0.len(), 14);
            assert!(cb.is_sortable(&c, ca.group.w0));
        }
        assert_eq!(cb.shard_conjugate_classes(), (11, true));
        for m in 3..=6 {
            let ca = setup(Family::I2(m));
            let cb = CoxBraid::new(&ca);
            assert_eq!(cb.sortables(&[0, 1]).len(), m + 2);
        }
    }

    #[test]
    fn braid_move_oracles() {
        let g = CoxeterGroup::new(Family::I2(3)).unwrap();
        assert_eq!(normal_form_vs_braid_moves(&g, 6), 0);
        let a3 = CoxeterGroup::new(Family::A(3)).unwrap();
        assert_eq!(normal_form_vs_braid_moves(&a3, 5), 0);
        assert_eq!(inv_multiset_fuzz(&a3, 7, 200, 12, 20), 0);
    }
}
