//! Greedy normal forms in a Garside category whose Garside automorphism is an involution.
//!
//! Elements are stored as `Δ^power · x₁ ⋯ x_r` with `x₁ ⋯ x_r` left-weighted and `x₁ ≠ Δ`.
//! This form is canonical, so equality of elements is structural equality.

use std::fmt::Debug;
use std::hash::Hash;

pub trait GarsideCategory {
    type Obj: Clone + Eq + Hash + Ord + Debug;
    type Simple: Clone + Eq + Hash + Ord + Debug;

    fn source(&self, s: &Self::Simple) -> Self::Obj;
    fn target(&self, s: &Self::Simple) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Simple;
    fn delta(&self, x: &Self::Obj) -> Self::Simple;
    /// `Δ_x : x → τ(x)`.
    fn tau_obj(&self, x: &Self::Obj) -> Self::Obj;
    /// `τ(s)`, defined by `s · Δ = Δ · τ(s)`.
    fn tau(&self, s: &Self::Simple) -> Self::Simple;
    /// The right complement `∂s` with `s · ∂s = Δ`.
    fn complement(&self, s: &Self::Simple) -> Self::Simple;
    /// Rewrite `a · b` as `a' · b'` with `a'` the largest simple left-divisor of `a · b`.
    fn left_weight(&self, a: &Self::Simple, b: &Self::Simple) -> (Self::Simple, Self::Simple);

    fn is_identity(&self, s: &Self::Simple) -> bool {
        *s == self.identity(&self.source(s))
    }

    fn is_delta(&self, s: &Self::Simple) -> bool {
        *s == self.delta(&self.source(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GarsideElement<O, S> {
    pub source: O,
    pub power: i64,
    pub factors: Vec<S>,
}

pub type Elem<G> = GarsideElement<<G as GarsideCategory>::Obj, <G as GarsideCategory>::Simple>;

impl<O: Clone, S> GarsideElement<O, S> {
    pub fn identity(source: O) -> Self {
        GarsideElement { source, power: 0, factors: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.power == 0 && self.factors.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.power >= 0
    }

    /// Canonical length: the number of simple factors including `Δ` factors, if positive.
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }
}

fn tau_pow<G: GarsideCategory>(g: &G, x: &G::Obj, k: i64) -> G::Obj {
    if k.rem_euclid(2) == 1 {
        g.tau_obj(x)
    } else {
        x.clone()
    }
}

fn tau_simple_pow<G: GarsideCategory>(g: &G, s: &G::Simple, k: i64) -> G::Simple {
    if k.rem_euclid(2) == 1 {
        g.tau(s)
    } else {
        s.clone()
    }
}

/// The object where the element ends.
pub fn target<G: GarsideCategory>(g: &G, a: &Elem<G>) -> G::Obj {
    match a.factors.last() {
        Some(s) => g.target(s),
        None => tau_pow(g, &a.source, a.power),
    }
}

/// Append a simple on the right.
pub fn push_simple<G: GarsideCategory>(g: &G, a: &mut Elem<G>, s: G::Simple) {
    debug_assert_eq!(target(g, a), g.source(&s));
    if g.is_identity(&s) {
        return;
    }
    a.factors.push(s);
    let mut i = a.factors.len() - 1;
    while i > 0 {
        let (x, y) = g.left_weight(&a.factors[i - 1], &a.factors[i]);
        if x == a.factors[i - 1] {
            break;
        }
        a.factors[i - 1] = x;
        a.factors[i] = y;
        i -= 1;
    }
    a.factors.retain(|s| !g.is_identity(s));
    let lead = a.factors.iter().take_while(|s| g.is_delta(s)).count();
    if lead > 0 {
        a.factors.drain(..lead);
        a.power += lead as i64;
    }
}

/// Append `Δ` on the right: `Δ^e L Δ = Δ^{e+1} τ(L)`.
pub fn push_delta<G: GarsideCategory>(g: &G, a: &mut Elem<G>) {
    a.power += 1;
    for s in a.factors.iter_mut() {
        *s = g.tau(s);
    }
}

/// Append `Δ⁻¹` on the right: `Δ^e L Δ⁻¹ = Δ^{e-1} τ(L)`.
pub fn push_delta_inverse<G: GarsideCategory>(g: &G, a: &mut Elem<G>) {
    a.power -= 1;
    for s in a.factors.iter_mut() {
        *s = g.tau(s);
    }
}

/// Append `s⁻¹`, where `s` is a simple ending at the current target: `s⁻¹ = ∂s · Δ⁻¹`.
pub fn push_simple_inverse<G: GarsideCategory>(g: &G, a: &mut Elem<G>, s: &G::Simple) {
    debug_assert_eq!(target(g, a), g.target(s));
    push_simple(g, a, g.complement(s));
    push_delta_inverse(g, a);
}

pub fn from_simples<G: GarsideCategory>(g: &G, source: G::Obj, simples: impl IntoIterator<Item = G::Simple>) -> Elem<G> {
    let mut a = GarsideElement::identity(source);
    for s in simples {
        push_simple(g, &mut a, s);
    }
    a
}

pub fn multiply<G: GarsideCategory>(g: &G, a: &Elem<G>, b: &Elem<G>) -> Elem<G> {
    debug_assert_eq!(target(g, a), b.source);
    let mut out = GarsideElement {
        source: a.source.clone(),
        power: a.power + b.power,
        factors: a.factors.iter().map(|s| tau_simple_pow(g, s, b.power)).collect(),
    };
    for s in &b.factors {
        push_simple(g, &mut out, s.clone());
    }
    out
}

pub fn inverse<G: GarsideCategory>(g: &G, a: &Elem<G>) -> Elem<G> {
    let mut out = GarsideElement::identity(target(g, a));
    for s in a.factors.iter().rev() {
        push_simple_inverse(g, &mut out, s);
    }
    for _ in 0..a.power.max(0) {
        push_delta_inverse(g, &mut out);
    }
    for _ in 0..(-a.power).max(0) {
        push_delta(g, &mut out);
    }
    out
}

/// Whether `a` left-divides `b` in the positive monoid: `a⁻¹b` is positive.
pub fn left_divides<G: GarsideCategory>(g: &G, a: &Elem<G>, b: &Elem<G>) -> bool {
    a.source == b.source && multiply(g, &inverse(g, a), b).is_positive()
}

/// Expand a positive element into simples, writing `Δ^k` as `k` explicit factors.
pub fn positive_factors<G: GarsideCategory>(g: &G, a: &Elem<G>) -> Option<Vec<G::Simple>> {
    if a.power < 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut x = a.source.clone();
    for _ in 0..a.power {
        out.push(g.delta(&x));
        x = g.tau_obj(&x);
    }
    out.extend(a.factors.iter().cloned());
    Some(out)
}

/// `Δ^{-k}L = τ^k(L) · Δ^{-k}`: numerator and denominator exponents as positive parts.
pub fn as_fraction<G: GarsideCategory>(g: &G, a: &Elem<G>) -> (Elem<G>, Elem<G>) {
    if a.power >= 0 {
        return (a.clone(), GarsideElement::identity(target(g, a)));
    }
    let k = -a.power;
    let numerator = GarsideElement {
        source: a.source.clone(),
        power: 0,
        factors: a.factors.iter().map(|s| tau_simple_pow(g, s, k)).collect(),
    };
    let denominator = GarsideElement { source: a.source.clone(), power: k, factors: Vec::new() };
    (numerator, denominator)
}
