//! The group interface shared by every other module, plus direct products,
//! the integers, a swap extension of `G × G`, and ball enumeration.
//!
//! Elements are always stored in a canonical form, so equality of elements
//! is plain `==`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A group with canonical element representatives.
pub trait Group {
    type Elem: Clone + Eq + Ord + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a^n` by repeated squaring; negative exponents invert first.
    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let mut base = if n < 0 { self.invert(a) } else { a.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = self.identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(&ab, &self.invert(&ba))
    }

    /// `g x g⁻¹`.
    fn conjugate(&self, g: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        let gx = self.multiply(g, x);
        self.multiply(&gx, &self.invert(g))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }
}

impl<G: Group + ?Sized> Group for &G {
    type Elem = G::Elem;

    fn identity(&self) -> Self::Elem {
        (**self).identity()
    }
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).multiply(a, b)
    }
    fn invert(&self, a: &Self::Elem) -> Self::Elem {
        (**self).invert(a)
    }
    fn is_identity(&self, a: &Self::Elem) -> bool {
        (**self).is_identity(a)
    }
    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        (**self).pow(a, n)
    }
}

/// A finite group whose elements can be listed.
pub trait FiniteGroup: Group {
    /// Every element exactly once, in a deterministic order starting with the
    /// identity.
    fn elements(&self) -> Vec<Self::Elem>;
}

/// The additive group ℤ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Group for Integers {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }
    fn multiply(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn invert(&self, a: &i64) -> i64 {
        -a
    }
    fn pow(&self, a: &i64, n: i64) -> i64 {
        a * n
    }
}

/// `A × B` with componentwise operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectProduct<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: Group, B: Group> DirectProduct<A, B> {
    pub fn new(left: A, right: B) -> Self {
        DirectProduct { left, right }
    }

    pub fn embed_left(&self, a: A::Elem) -> (A::Elem, B::Elem) {
        (a, self.right.identity())
    }

    pub fn embed_right(&self, b: B::Elem) -> (A::Elem, B::Elem) {
        (self.left.identity(), b)
    }
}

impl<A: Group, B: Group> Group for DirectProduct<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (
            self.left.multiply(&a.0, &b.0),
            self.right.multiply(&a.1, &b.1),
        )
    }
    fn invert(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.invert(&a.0), self.right.invert(&a.1))
    }
    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        (self.left.pow(&a.0, n), self.right.pow(&a.1, n))
    }
}

/// `(G × G) ⋊ ℤ/2`, where the generator of `ℤ/2` swaps the two factors.
///
/// Elements are `(a, b, swapped)` meaning `(a, b) · t^swapped`. The swap `t`
/// conjugates `(f, 1)` to `(1, f)`, which models two maps with disjoint
/// supports exchanged by a third.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapProduct<G> {
    pub factor: G,
}

impl<G: Group> SwapProduct<G> {
    pub fn new(factor: G) -> Self {
        SwapProduct { factor }
    }

    pub fn swap(&self) -> (G::Elem, G::Elem, bool) {
        (self.factor.identity(), self.factor.identity(), true)
    }
}

impl<G: Group> Group for SwapProduct<G> {
    type Elem = (G::Elem, G::Elem, bool);

    fn identity(&self) -> Self::Elem {
        (self.factor.identity(), self.factor.identity(), false)
    }

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        // (a0, a1) t^s · (b0, b1) t^u = (a0, a1)(t^s (b0, b1) t^-s) t^(s+u)
        let (b0, b1) = if a.2 { (&b.1, &b.0) } else { (&b.0, &b.1) };
        (
            self.factor.multiply(&a.0, b0),
            self.factor.multiply(&a.1, b1),
            a.2 ^ b.2,
        )
    }

    fn invert(&self, a: &Self::Elem) -> Self::Elem {
        let (i0, i1) = (self.factor.invert(&a.0), self.factor.invert(&a.1));
        if a.2 {
            // ((a0, a1) t)⁻¹ = t (a0⁻¹, a1⁻¹) = (a1⁻¹, a0⁻¹) t
            (i1, i0, true)
        } else {
            (i0, i1, false)
        }
    }
}

/// A homomorphism between two groups, given by its action on elements.
pub struct Homomorphism<A, B> {
    pub name: String,
    map: Arc<dyn Fn(&A) -> B + Send + Sync>,
}

impl<A, B> Clone for Homomorphism<A, B> {
    fn clone(&self) -> Self {
        Homomorphism {
            name: self.name.clone(),
            map: Arc::clone(&self.map),
        }
    }
}

impl<A, B> fmt::Debug for Homomorphism<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("name", &self.name)
            .finish()
    }
}

impl<A, B> Homomorphism<A, B> {
    pub fn new(name: impl Into<String>, map: impl Fn(&A) -> B + Send + Sync + 'static) -> Self {
        Homomorphism {
            name: name.into(),
            map: Arc::new(map),
        }
    }

    pub fn apply(&self, a: &A) -> B {
        (self.map)(a)
    }

    /// Checks `h(ab) = h(a)h(b)` on the given pairs and returns the first
    /// failing pair index.
    pub fn check_on_pairs<GA, GB>(&self, domain: &GA, codomain: &GB, pairs: &[(A, A)]) -> Result<(), usize>
    where
        GA: Group<Elem = A>,
        GB: Group<Elem = B>,
        B: PartialEq,
    {
        for (i, (a, b)) in pairs.iter().enumerate() {
            let lhs = self.apply(&domain.multiply(a, b));
            let rhs = codomain.multiply(&self.apply(a), &self.apply(b));
            if lhs != rhs {
                return Err(i);
            }
        }
        Ok(())
    }
}

impl<E: Clone + 'static> Homomorphism<E, E> {
    pub fn identity() -> Self {
        Homomorphism::new("id", |e: &E| e.clone())
    }
}

/// Elements within a word-length ball, sorted by length (breadth-first order,
/// deduplicated by canonical form).
#[derive(Clone, Debug)]
pub struct Ball<E> {
    pub elements: Vec<E>,
    pub lengths: Vec<usize>,
}

impl<E> Ball<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, usize)> {
        self.elements.iter().zip(self.lengths.iter().copied())
    }
}

/// Breadth-first enumeration of the ball of the given radius with respect to
/// `generators` (inverses are added automatically).
pub fn ball<G: Group>(group: &G, generators: &[G::Elem], radius: usize) -> Ball<G::Elem> {
    let mut gens: Vec<G::Elem> = Vec::new();
    for g in generators {
        for h in [g.clone(), group.invert(g)] {
            if !group.is_identity(&h) && !gens.contains(&h) {
                gens.push(h);
            }
        }
    }
    let identity = group.identity();
    let mut seen = BTreeSet::new();
    seen.insert(identity.clone());
    let mut elements = alloc::vec![identity];
    let mut lengths = alloc::vec![0];
    let mut frontier_start = 0;
    for r in 1..=radius {
        let frontier_end = elements.len();
        for i in frontier_start..frontier_end {
            for s in &gens {
                let next = group.multiply(&elements[i], s);
                if seen.insert(next.clone()) {
                    elements.push(next);
                    lengths.push(r);
                }
            }
        }
        if elements.len() == frontier_end {
            break;
        }
        frontier_start = frontier_end;
    }
    Ball { elements, lengths }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_pow_and_commutator() {
        assert_eq!(Integers.pow(&3, -4), -12);
        assert_eq!(Integers.commutator(&5, &7), 0);
    }

    #[test]
    fn ball_of_integers() {
        let b = ball(&Integers, &[1], 3);
        assert_eq!(b.elements, alloc::vec![0, 1, -1, 2, -2, 3, -3]);
        assert_eq!(b.lengths, alloc::vec![0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn swap_product_conjugates_factors() {
        let g = SwapProduct::new(Integers);
        let t = g.swap();
        let f = (5, 0, false);
        assert_eq!(g.conjugate(&t, &f), (0, 5, false));
        let x = (2, -3, true);
        assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
        assert!(g.is_identity(&g.multiply(&g.invert(&x), &x)));
    }

    #[test]
    fn product_projection_is_homomorphism() {
        let g = DirectProduct::new(Integers, Integers);
        let pr = Homomorphism::new("pr1", |e: &(i64, i64)| e.0);
        let pairs = alloc::vec![((1, 2), (3, 4)), ((-5, 0), (5, 9))];
        assert_eq!(pr.check_on_pairs(&g, &Integers, &pairs), Ok(()));
        let bad = Homomorphism::new("bad", |e: &(i64, i64)| e.0 * e.0);
        assert_eq!(bad.check_on_pairs(&g, &Integers, &pairs), Err(0));
    }
}
