//! Finite Coxeter groups of types A, B, D and I2(m) as explicit multiplication tables,
//! and their reflection arrangements.

use std::collections::{HashMap, VecDeque};

use crate::arrangement::{builtin_arrangement, Family};
use crate::error::{Error, Result};
use crate::rational;
use crate::salvetti::Salvetti;

/// Largest group order for which a full multiplication table is built.
pub const MAX_ORDER: usize = 2000;

#[derive(Clone, Debug)]
pub struct CoxeterGroup {
    pub family: Family,
    /// Model of each element: a (signed) permutation, or `[ε, a]` for `j ↦ εj + a` on `Z/2m`.
    pub models: Vec<Vec<i32>>,
    /// Element ids of the simple reflections `s_1, …, s_n`.
    pub gens: Vec<usize>,
    pub identity: usize,
    pub w0: usize,
    pub length: Vec<usize>,
    pub inverse: Vec<usize>,
    /// Sorted element ids of all reflections.
    pub reflections: Vec<usize>,
    pub coxeter_matrix: Vec<Vec<usize>>,
    table: Vec<u32>,
    index: HashMap<Vec<i32>, usize>,
}

fn compose(family: Family, x: &[i32], y: &[i32]) -> Vec<i32> {
    match family {
        Family::I2(m) => {
            let m2 = 2 * m as i32;
            vec![x[0] * y[0], (x[0] * y[1] + x[1]).rem_euclid(m2)]
        }
        _ => y.iter().map(|&v| x[v.unsigned_abs() as usize - 1] * v.signum()).collect(),
    }
}

fn generator_models(family: Family) -> (Vec<i32>, Vec<Vec<i32>>) {
    let swap = |n: usize, i: usize| {
        let mut p: Vec<i32> = (1..=n as i32).collect();
        p.swap(i, i + 1);
        p
    };
    match family {
        Family::I2(m) => (vec![1, 0], vec![vec![-1, 1], vec![-1, 2 * m as i32 - 1]]),
        Family::A(n) => ((1..=n as i32 + 1).collect(), (0..n).map(|i| swap(n + 1, i)).collect()),
        Family::B(n) => {
            let mut s1: Vec<i32> = (1..=n as i32).collect();
            s1[0] = -1;
            let mut gens = vec![s1];
            gens.extend((0..n - 1).map(|i| swap(n, i)));
            ((1..=n as i32).collect(), gens)
        }
        Family::D(n) => {
            let mut s1: Vec<i32> = (1..=n as i32).collect();
            s1[0] = -2;
            s1[1] = -1;
            let mut gens = vec![s1];
            gens.extend((0..n - 1).map(|i| swap(n, i)));
            ((1..=n as i32).collect(), gens)
        }
    }
}

impl CoxeterGroup {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        if matches!(family, Family::D(n) if n < 3) {
            return Err(Error::Unsupported("type D requires rank at least 3".into()));
        }
        let (id_model, gen_models) = generator_models(family);
        let mut models = vec![id_model.clone()];
        let mut index = HashMap::from([(id_model, 0usize)]);
        let mut length = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for g in &gen_models {
                let x = compose(family, &models[w], g);
                if !index.contains_key(&x) {
                    if models.len() >= MAX_ORDER {
                        return Err(Error::ResourceLimit(format!("{family} has more than {MAX_ORDER} elements")));
                    }
                    index.insert(x.clone(), models.len());
                    length.push(length[w] + 1);
                    queue.push_back(models.len());
                    models.push(x);
                }
            }
        }
        let n = models.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(family, &models[a], &models[b])] as u32;
            }
        }
        let gens: Vec<usize> = gen_models.iter().map(|g| index[g]).collect();
        let inverse: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("group")).collect();
        let w0 = (0..n).max_by_key(|&w| length[w]).unwrap();
        let mut g = CoxeterGroup {
            family,
            models,
            gens,
            identity: 0,
            w0,
            length,
            inverse,
            reflections: Vec::new(),
            coxeter_matrix: Vec::new(),
            table,
            index,
        };
        let mut refl: Vec<usize> = (0..n).flat_map(|u| g.gens.clone().into_iter().map(move |s| (u, s))).map(|(u, s)| g.conj(u, s)).collect();
        refl.sort_unstable();
        refl.dedup();
        g.reflections = refl;
        let r = g.gens.len();
        g.coxeter_matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let st = g.mul(g.gens[i], g.gens[j]);
                        let mut k = 1;
                        let mut x = st;
                        while x != g.identity {
                            x = g.mul(x, st);
                            k += 1;
                        }
                        k
                    })
                    .collect()
            })
            .collect();
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.models.len()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    /// `u x u⁻¹`.
    pub fn conj(&self, u: usize, x: usize) -> usize {
        self.mul(self.mul(u, x), self.inverse[u])
    }

    pub fn id_of_model(&self, model: &[i32]) -> Option<usize> {
        self.index.get(model).copied()
    }

    pub fn product(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity, |acc, &i| self.mul(acc, self.gens[i]))
    }

    /// Right descents, as generator indices.
    pub fn right_descents(&self, w: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.length[self.mul(w, self.gens[i])] < self.length[w]).collect()
    }

    pub fn left_descents(&self, w: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.length[self.mul(self.gens[i], w)] < self.length[w]).collect()
    }

    pub fn is_right_descent(&self, w: usize, i: usize) -> bool {
        self.length[self.mul(w, self.gens[i])] < self.length[w]
    }

    pub fn is_left_descent(&self, w: usize, i: usize) -> bool {
        self.length[self.mul(self.gens[i], w)] < self.length[w]
    }

    /// A reduced word (generator indices), peeling off the smallest right descent.
    pub fn reduced_word(&self, w: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length[w]);
        let mut x = w;
        while x != self.identity {
            let i = (0..self.rank()).find(|&i| self.is_right_descent(x, i)).unwrap();
            word.push(i);
            x = self.mul(x, self.gens[i]);
        }
        word.reverse();
        word
    }

    /// Elements of the subgroup generated by a set of elements.
    pub fn subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut out = vec![self.identity];
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `w∘(J)`: the longest element of the standard parabolic subgroup on generator indices `J`.
    pub fn longest_of(&self, j: &[usize]) -> usize {
        let gens: Vec<usize> = j.iter().map(|&i| self.gens[i]).collect();
        self.subgroup(&gens).into_iter().max_by_key(|&w| self.length[w]).unwrap()
    }

    /// Left inversions `{t : len(tw) < len(w)}`, sorted.
    pub fn inversions(&self, w: usize) -> Vec<usize> {
        self.reflections.iter().copied().filter(|&t| self.length[self.mul(t, w)] < self.length[w]).collect()
    }

    /// Cover reflections `{w s w⁻¹ : s ∈ des(w)}`, sorted.
    pub fn cover_reflections(&self, w: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.right_descents(w).into_iter().map(|i| self.conj(w, self.gens[i])).collect();
        v.sort_unstable();
        v
    }

    /// `Pop(w) = w · w∘(des(w))`.
    pub fn pop(&self, w: usize) -> usize {
        self.mul(w, self.longest_of(&self.right_descents(w)))
    }

    /// Reflections `s_1 ⋯ s_{j-1} s_j s_{j-1} ⋯ s_1` of a word, in order.
    pub fn inversion_sequence(&self, word: &[usize]) -> Vec<usize> {
        let mut prefix = self.identity;
        word.iter()
            .map(|&i| {
                let t = self.conj(prefix, self.gens[i]);
                prefix = self.mul(prefix, self.gens[i]);
                t
            })
            .collect()
    }

    /// Reflection length, by breadth-first search over reflection multiplication.
    pub fn reflection_length(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.order()];
        dist[self.identity] = 0;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &t in &self.reflections {
                let y = self.mul(x, t);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Human-readable name of a reflection: a transposition `(ij)` in type A, otherwise its reduced word.
    pub fn reflection_name(&self, t: usize) -> String {
        if let Family::A(_) = self.family {
            let p = &self.models[t];
            let moved: Vec<usize> = (0..p.len()).filter(|&i| p[i] != i as i32 + 1).map(|i| i + 1).collect();
            if moved.len() == 2 {
                return format!("({}{})", moved[0], moved[1]);
            }
        }
        self.word_name(t)
    }

    pub fn word_name(&self, w: usize) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            return "1".into();
        }
        word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join("")
    }

    /// Parse a word like `s1s2s3` or `1 2 3` into generator indices.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let cleaned = text.replace(['s', 'S'], " ").replace(',', " ");
        cleaned
            .split_whitespace()
            .map(|t| {
                let i: usize = t.parse().map_err(|_| Error::Parse(format!("bad generator {t:?}")))?;
                if i == 0 || i > self.rank() {
                    return Err(Error::Parse(format!("generator {i} out of range")));
                }
                Ok(i - 1)
            })
            .collect()
    }
}

/// A Coxeter group together with its reflection arrangement and the identification `w ↦ w(B)`.
pub struct CoxeterArrangement {
    pub group: CoxeterGroup,
    pub sal: Salvetti,
    pub region_of: Vec<usize>,
    pub element_of: Vec<usize>,
    /// `hyperplane_of[k]` is the hyperplane of reflection `group.reflections[k]`.
    pub hyperplane_of: Vec<usize>,
}

impl CoxeterArrangement {
    pub fn new(family: Family) -> Result<Self> {
        let group = CoxeterGroup::new(family)?;
        let arr = builtin_arrangement(family)?;
        let sal = Salvetti::new(arr)?;
        let p = &sal.poset;
        let region_of: Vec<usize> = (0..group.order())
            .map(|w| {
                let point = match family {
                    Family::I2(m) => dihedral_chamber_point(m, group.models[w][1] as usize),
                    _ => act(&group.models[w], &sal.arr.base.witness),
                };
                sal.arr
                    .signs_of(&point)
                    .and_then(|s| p.region_by_signs(s))
                    .ok_or_else(|| Error::Internal(format!("element {w} does not map to a region")))
            })
            .collect::<Result<_>>()?;
        let mut element_of = vec![usize::MAX; p.len()];
        for (w, &r) in region_of.iter().enumerate() {
            if element_of[r] != usize::MAX {
                return Err(Error::Internal("w ↦ w(B) is not injective".into()));
            }
            element_of[r] = w;
        }
        if element_of.contains(&usize::MAX) || region_of[group.identity] != p.base {
            return Err(Error::Internal("w ↦ w(B) is not a bijection fixing the base region".into()));
        }
        let mut hyperplane_of = vec![usize::MAX; group.reflections.len()];
        for w in 0..group.order() {
            for i in 0..group.rank() {
                let ws = group.mul(w, group.gens[i]);
                if group.length[ws] != group.length[w] + 1 {
                    continue;
                }
                let edge = p
                    .edge_between(region_of[w], region_of[ws])
                    .filter(|&e| p.covers[e].lower == region_of[w])
                    .ok_or_else(|| Error::Internal(format!("weak order edge {w} ⋖ {ws} is not a region cover")))?;
                let t = group.conj(w, group.gens[i]);
                let k = group.reflections.binary_search(&t).unwrap();
                let h = p.covers[edge].hyperplane;
                if hyperplane_of[k] != usize::MAX && hyperplane_of[k] != h {
                    return Err(Error::Internal("reflection crosses two hyperplanes".into()));
                }
                hyperplane_of[k] = h;
            }
        }
        let weak_covers = (0..group.order())
            .map(|w| (0..group.rank()).filter(|&i| group.length[group.mul(w, group.gens[i])] > group.length[w]).count())
            .sum::<usize>();
        if weak_covers != p.covers.len() || hyperplane_of.contains(&usize::MAX) {
            return Err(Error::Internal("weak order and region poset differ".into()));
        }
        Ok(CoxeterArrangement { group, sal, region_of, element_of, hyperplane_of })
    }

    /// The shard label of the cover `w ⋖ ws`.
    pub fn cover_shard(&self, w: usize, i: usize) -> usize {
        let ws = self.group.mul(w, self.group.gens[i]);
        let e = self.sal.poset.edge_between(self.region_of[w], self.region_of[ws]).expect("cover");
        self.sal.shards.edge_shard[e]
    }
}

/// `(w·x)_{|w(i)|} = sign(w(i)) x_i`.
fn act(model: &[i32], x: &[rational::Rational]) -> Vec<rational::Rational> {
    let mut out = vec![rational::zero(); x.len()];
    for (i, &v) in model.iter().enumerate() {
        let k = v.unsigned_abs() as usize - 1;
        out[k] = if v > 0 { x[i].clone() } else { -x[i].clone() };
    }
    out
}

/// A point in chamber `c_j` of the dihedral arrangement, chambers numbered counterclockwise from the base.
fn dihedral_chamber_point(m: usize, j: usize) -> Vec<rational::Rational> {
    let m = m as i64;
    let dir = |k: i64| -> (i64, i64) {
        if k < m {
            (m - 1 - 2 * k, 1)
        } else {
            let (a, b) = (m - 1 - 2 * (k - m), 1);
            (-a, -b)
        }
    };
    let j = j as i64;
    let (a, b) = dir(j);
    let (c, d) = dir((j + 1) % (2 * m));
    rational::vec_from_ints(&[a + c, b + d])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (f, n, l) in [
            (Family::I2(4), 8, 4),
            (Family::A(3), 24, 6),
            (Family::B(3), 48, 9),
            (Family::D(4), 192, 12),
            (Family::I2(7), 14, 7),
        ] {
            let g = CoxeterGroup::new(f).unwrap();
            assert_eq!(g.order(), n);
            assert_eq!(g.length[g.w0], l);
            assert_eq!(g.inversions(g.w0).len(), l);
            for i in 0..g.rank() {
                for j in 0..g.rank() {
                    let mij = g.coxeter_matrix[i][j];
                    let st = g.mul(g.gens[i], g.gens[j]);
                    let mut x = g.identity;
                    for _ in 0..mij {
                        x = g.mul(x, st);
                    }
                    assert_eq!(x, g.identity);
                }
            }
        }
        let b = CoxeterGroup::new(Family::B(3)).unwrap();
        assert_eq!(b.coxeter_matrix[0][1], 4);
        let d = CoxeterGroup::new(Family::D(4)).unwrap();
        assert_eq!(d.coxeter_matrix[0][1], 2);
        assert_eq!(d.coxeter_matrix[0][2], 3);
    }

    #[test]
    fn arrangements_match_weak_order() {
        for f in [Family::I2(3), Family::I2(4), Family::I2(6), Family::A(3), Family::B(3), Family::D(4)] {
            let ca = CoxeterArrangement::new(f).unwrap();
            assert_eq!(ca.sal.arr.len(), ca.group.reflections.len());
            for w in 0..ca.group.order() {
                assert_eq!(ca.sal.poset.grade(ca.region_of[w]), ca.group.length[w]);
                assert_eq!(ca.sal.poset.pop(ca.region_of[w]).unwrap(), ca.region_of[ca.group.pop(w)]);
                let inv: Vec<usize> = ca.group.inversions(w);
                let hs: u64 = inv.iter().map(|t| 1u64 << ca.hyperplane_of[ca.group.reflections.binary_search(t).unwrap()]).sum();
                assert_eq!(hs, ca.sal.poset.inv[ca.region_of[w]]);
            }
        }
    }

    #[test]
    fn words_and_names() {
        let g = CoxeterGroup::new(Family::A(3)).unwrap();
        let w = g.product(&g.parse_word("s1s2s3s2").unwrap());
        assert_eq!(g.length[w], 4);
        assert_eq!(g.product(&g.reduced_word(w)), w);
        assert_eq!(g.reflection_name(g.gens[0]), "(12)");
        assert_eq!(g.right_descents(w), vec![1, 2]);
        assert_eq!(g.pop(w), g.gens[0]);
        assert!(g.parse_word("s4").is_err());
    }
}
