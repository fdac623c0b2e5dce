//! Finite posets given by cover relations: reachability, lattice test, isomorphism.

#[derive(Clone, Debug)]
pub struct FinitePoset {
    n: usize,
    /// `up[a]` has bit `b` set iff `a ≤ b`.
    up: Vec<Vec<u64>>,
    pub covers: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Build from cover relations `(lower, upper)`; the relation must be acyclic.
    pub fn from_covers(n: usize, covers: Vec<(usize, usize)>) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in &covers {
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(a) = stack.pop() {
            order.push(a);
            for &b in &succ[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
        assert_eq!(order.len(), n, "cover relation has a cycle");
        let mut up = vec![vec![0u64; words]; n];
        for &a in order.iter().rev() {
            up[a][a / 64] |= 1 << (a % 64);
            for &b in &succ[a] {
                let row = up[b].clone();
                for (x, y) in up[a].iter_mut().zip(row) {
                    *x |= y;
                }
            }
        }
        FinitePoset { n, up, covers }
    }

    /// Build from an order predicate, keeping only its cover relations.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let rel: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| leq(a, b)).collect()).collect();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && rel[a][b] && !(0..n).any(|c| c != a && c != b && rel[a][c] && rel[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        FinitePoset::from_covers(n, covers)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a][b / 64] >> (b % 64) & 1 == 1
    }

    /// `None` if every pair has a meet; otherwise `(x, y, m1, m2)` with `m1`, `m2` incomparable maximal common lower bounds.
    pub fn meet_failure(&self) -> Option<[usize; 4]> {
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.leq(x, y) || self.leq(y, x) {
                    continue;
                }
                let lower: Vec<usize> = (0..self.n).filter(|&z| self.leq(z, x) && self.leq(z, y)).collect();
                let maximal: Vec<usize> =
                    lower.iter().copied().filter(|&z| lower.iter().all(|&w| w == z || !self.leq(z, w))).collect();
                if maximal.len() > 1 {
                    return Some([x, y, maximal[0], maximal[1]]);
                }
            }
        }
        None
    }

    /// `None` if every pair has a join; otherwise `(x, y, j1, j2)` with two minimal common upper bounds.
    pub fn join_failure(&self) -> Option<[usize; 4]> {
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.leq(x, y) || self.leq(y, x) {
                    continue;
                }
                let upper: Vec<usize> = (0..self.n).filter(|&z| self.leq(x, z) && self.leq(y, z)).collect();
                let minimal: Vec<usize> =
                    upper.iter().copied().filter(|&z| upper.iter().all(|&w| w == z || !self.leq(w, z))).collect();
                if minimal.len() > 1 {
                    return Some([x, y, minimal[0], minimal[1]]);
                }
            }
        }
        None
    }

    fn down_count(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.leq(b, a)).count()
    }

    fn up_count(&self, a: usize) -> usize {
        self.up[a].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// An order isomorphism `self → other`, found by backtracking.
    pub fn isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        if self.n != other.n || self.covers.len() != other.covers.len() {
            return None;
        }
        let inv_a: Vec<(usize, usize)> = (0..self.n).map(|a| (self.down_count(a), self.up_count(a))).collect();
        let inv_b: Vec<(usize, usize)> = (0..other.n).map(|a| (other.down_count(a), other.up_count(a))).collect();
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&a| inv_a[a]);
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        if self.extend(other, &order, 0, &inv_a, &inv_b, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        other: &FinitePoset,
        order: &[usize],
        k: usize,
        inv_a: &[(usize, usize)],
        inv_b: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let a = order[k];
        for b in 0..other.n {
            if used[b] || inv_a[a] != inv_b[b] {
                continue;
            }
            let consistent = order[..k].iter().all(|&c| {
                let d = map[c];
                self.leq(a, c) == other.leq(b, d) && self.leq(c, a) == other.leq(d, b)
            });
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if self.extend(other, order, k + 1, inv_a, inv_b, map, used) {
                return true;
            }
            used[b] = false;
            map[a] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_and_diamond() {
        let chain = FinitePoset::from_covers(4, vec![(0, 1), (1, 2), (2, 3)]);
        assert!(chain.leq(0, 3) && !chain.leq(3, 0));
        assert!(chain.meet_failure().is_none());
        let bowtie = FinitePoset::from_covers(6, vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)]);
        assert_eq!(bowtie.meet_failure(), Some([3, 4, 1, 2]));
        let relabeled = FinitePoset::from_covers(4, vec![(3, 2), (2, 1), (1, 0)]);
        assert_eq!(chain.isomorphism(&relabeled), Some(vec![3, 2, 1, 0]));
        let diamond = FinitePoset::from_covers(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(chain.isomorphism(&diamond).is_none());
        let wide = FinitePoset::from_covers(70, (1..70).map(|i| (0, i)).collect());
        assert!(wide.leq(0, 69) && !wide.leq(69, 1));
        let r = FinitePoset::from_relation(4, |a, b| chain.leq(a, b));
        assert_eq!(r.covers.len(), 3);
    }
}
