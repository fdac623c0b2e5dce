//! Exact phase-one simplex with Bland's rule.

use num_traits::{Signed, Zero};

use crate::rational::{zero, Rational};

/// A system of linear constraints in free variables.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub nvars: usize,
    /// `a . x >= b`
    pub ge: Vec<(Vec<Rational>, Rational)>,
    /// `a . x == b`
    pub eq: Vec<(Vec<Rational>, Rational)>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, ge: Vec::new(), eq: Vec::new() }
    }

    pub fn at_least(&mut self, a: Vec<Rational>, b: Rational) -> &mut Self {
        debug_assert_eq!(a.len(), self.nvars);
        self.ge.push((a, b));
        self
    }

    pub fn equal(&mut self, a: Vec<Rational>, b: Rational) -> &mut Self {
        debug_assert_eq!(a.len(), self.nvars);
        self.eq.push((a, b));
        self
    }

    /// A feasible point, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        feasible_point(self)
    }
}

pub fn feasible_point(sys: &LinearSystem) -> Option<Vec<Rational>> {
    let n = sys.nvars;
    let nge = sys.ge.len();
    let m = nge + sys.eq.len();
    if m == 0 {
        return Some(vec![zero(); n]);
    }
    // columns: u (n) | v (n) | slack (nge) | artificial (m) | rhs
    let art0 = 2 * n + nge;
    let width = art0 + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (a, b)) in sys.ge.iter().chain(sys.eq.iter()).enumerate() {
        let mut row = vec![zero(); width];
        for k in 0..n {
            row[k] = a[k].clone();
            row[n + k] = -a[k].clone();
        }
        if i < nge {
            row[2 * n + i] = -crate::rational::one();
        }
        row[rhs] = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[art0 + i] = crate::rational::one();
        t.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| art0 + i).collect();
    let mut cost = vec![zero(); width];
    for row in &t {
        for j in 0..art0 {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }
    while let Some(enter) = (0..art0).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave?;
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x = &*x / &piv;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..width {
                    if !prow[j].is_zero() {
                        row[j] -= &f * &prow[j];
                    }
                }
            }
        }
        let f = cost[enter].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                cost[j] -= &f * &prow[j];
            }
        }
        basis[r] = enter;
    }
    if !cost[rhs].is_zero() {
        return None;
    }
    let mut vals = vec![zero(); art0];
    for (i, &b) in basis.iter().enumerate() {
        if b < art0 {
            vals[b] = t[i][rhs].clone();
        }
    }
    Some((0..n).map(|k| &vals[k] - &vals[n + k]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, int, vec_from_ints};

    #[test]
    fn strict_cone_feasible() {
        let mut s = LinearSystem::new(2);
        s.at_least(vec_from_ints(&[1, -1]), int(1)).at_least(vec_from_ints(&[0, 1]), int(1));
        let x = s.solve().unwrap();
        assert!(dot(&vec_from_ints(&[1, -1]), &x) >= int(1));
        assert!(dot(&vec_from_ints(&[0, 1]), &x) >= int(1));
    }

    #[test]
    fn contradictory_system() {
        let mut s = LinearSystem::new(2);
        s.at_least(vec_from_ints(&[1, 0]), int(1)).at_least(vec_from_ints(&[-1, 0]), int(1));
        assert!(s.solve().is_none());
    }

    #[test]
    fn equality_constraints() {
        let mut s = LinearSystem::new(3);
        s.equal(vec_from_ints(&[1, 1, 1]), int(0))
            .at_least(vec_from_ints(&[1, 0, 0]), int(1))
            .at_least(vec_from_ints(&[0, 1, 0]), int(1));
        let x = s.solve().unwrap();
        assert_eq!(dot(&vec_from_ints(&[1, 1, 1]), &x), int(0));
        assert!(x[2] <= int(-2));
        let mut s = LinearSystem::new(2);
        s.equal(vec_from_ints(&[1, 0]), int(0)).at_least(vec_from_ints(&[1, 0]), int(1));
        assert!(s.solve().is_none());
    }
}
