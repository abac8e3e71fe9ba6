//! Abstraction values `<a>x`: one bound name over a nominal body.

use std::collections::BTreeSet;
use std::fmt;

use super::atom::{Name, Nominal, Perm};

/// An abstraction `<a>x`, i.e. the class of `(a, x)` modulo renaming of `a`.
///
/// Values are normalized at construction: the stored binder is the least
/// name outside the support of the class, and the body is swapped to match.
/// Structural equality therefore coincides with abstraction equality, and
/// `support` is the body support minus the binder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Abs<T> {
    binder: Name,
    body: T,
}

impl<T: Nominal + Clone> Abs<T> {
    pub fn new(binder: Name, body: T) -> Abs<T> {
        let mut class_support = body.support();
        class_support.remove(&binder);
        let canonical = Name::least_outside(&class_support);
        if canonical == binder {
            Abs { binder, body }
        } else {
            // canonical is fresh for the body, so the swap is a renaming
            Abs { binder: canonical, body: body.act(&Perm::swap(binder, canonical)) }
        }
    }

    pub fn binder(&self) -> Name {
        self.binder
    }

    pub fn body(&self) -> &T {
        &self.body
    }

    /// Concretion `<a>x @ b`: read the abstraction at the name `b`.
    ///
    /// Defined when `b` is the binder or fresh for the body; `None` signals
    /// an illegal concretion.
    pub fn concretion(&self, b: Name) -> Option<T> {
        if b == self.binder {
            Some(self.body.clone())
        } else if !self.body.support().contains(&b) {
            Some(self.body.act(&Perm::swap(self.binder, b)))
        } else {
            None
        }
    }
}

/// Abstraction equality evaluated as the two-case disjunction on the stored
/// representatives: equal binders and bodies, or the right binder is fresh
/// for the left body and swapping carries one body to the other.
///
/// On normalized values this agrees with `==`; it exists so tests can check
/// that agreement rather than trusting normalization blindly.
pub fn abs_eq<T: Nominal + Clone + Eq>(l: &Abs<T>, r: &Abs<T>) -> bool {
    (l.binder == r.binder && l.body == r.body)
        || (!l.body.support().contains(&r.binder)
            && l.body.act(&Perm::swap(l.binder, r.binder)) == r.body)
}

impl<T: Nominal + Clone> Nominal for Abs<T> {
    fn act(&self, p: &Perm) -> Self {
        Abs::new(p.apply(self.binder), self.body.act(p))
    }

    fn support(&self) -> BTreeSet<Name> {
        let mut s = self.body.support();
        s.remove(&self.binder);
        s
    }
}

impl<T: fmt::Display> fmt::Display for Abs<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>{}", self.binder, self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: u32) -> Name {
        Name(i)
    }

    #[test]
    fn alpha_equal_abstractions_normalize_together() {
        // <a>a = <b>b: b is fresh for a and (a b).a = b.
        assert_eq!(Abs::new(n(0), n(0)), Abs::new(n(1), n(1)));
        // <a>b = <c>b: c is fresh for b and (a c).b = b.
        assert_eq!(Abs::new(n(0), n(1)), Abs::new(n(2), n(1)));
        // <a>b != <b>a: would need b fresh for b.
        assert_ne!(Abs::new(n(0), n(1)), Abs::new(n(1), n(0)));
    }

    #[test]
    fn abs_eq_matches_structural_equality() {
        let pool: Vec<Name> = (0..3).map(n).collect();
        for &a in &pool {
            for &x in &pool {
                for &b in &pool {
                    for &y in &pool {
                        let l = Abs::new(a, x);
                        let r = Abs::new(b, y);
                        assert_eq!(abs_eq(&l, &r), l == r, "<{a}>{x} vs <{b}>{y}");
                    }
                }
            }
        }
    }

    #[test]
    fn support_drops_the_binder() {
        let v = Abs::new(n(0), (n(0), n(1)));
        assert_eq!(v.support(), [n(1)].into_iter().collect());
        let closed = Abs::new(n(3), n(3));
        assert!(closed.support().is_empty());
    }

    #[test]
    fn binder_is_least_outside_class_support() {
        // class support of <c>(c, b) is {b}, so the binder normalizes to a.
        let v = Abs::new(n(2), (n(2), n(1)));
        assert_eq!(v.binder(), n(0));
        assert_eq!(v.body(), &(n(0), n(1)));
    }

    #[test]
    fn concretion_cases() {
        // (<a>a) @ b = b
        assert_eq!(Abs::new(n(0), n(0)).concretion(n(1)), Some(n(1)));
        // (<a>b) @ b is illegal: b occurs in the body and is not the binder
        assert_eq!(Abs::new(n(0), n(1)).concretion(n(1)), None);
        // (<a>x) @ a = x
        let v = Abs::new(n(0), (n(0), n(1)));
        assert_eq!(v.concretion(v.binder()), Some(*v.body()));
    }

    #[test]
    fn action_is_compatible_with_normalization() {
        let v = Abs::new(n(0), (n(0), n(1)));
        let p = Perm::swap(n(1), n(2));
        let w = v.act(&p);
        assert_eq!(w.support(), [n(2)].into_iter().collect());
        // acting with a permutation fixing the support is the identity
        let q = Perm::swap(n(0), n(5));
        assert_eq!(w.act(&q), w);
    }
}
