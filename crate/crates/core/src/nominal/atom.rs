//! Names, finite permutations, and the group action interface.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

/// An atom from the countably infinite alphabet of names.
///
/// Names are backed by natural-number indices and totally ordered by index.
/// The first 26 render as `a`..`z`, everything above as `#k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(pub u32);

impl Name {
    pub fn index(self) -> u32 {
        self.0
    }

    /// The least name not contained in `used`.
    pub fn least_outside(used: &BTreeSet<Name>) -> Name {
        let mut k = 0u32;
        for n in used {
            if n.0 == k {
                k += 1;
            } else if n.0 > k {
                break;
            }
        }
        Name(k)
    }

    /// Parses the rendering produced by `Display` (`a`..`z` or `#k`).
    pub fn parse(text: &str) -> Option<Name> {
        let mut chars = text.chars();
        match chars.next()? {
            '#' => {
                let rest = &text[1..];
                if rest.is_empty() {
                    return None;
                }
                rest.parse::<u32>().ok().map(Name)
            }
            c if c.is_ascii_lowercase() && chars.next().is_none() => {
                Some(Name(c as u32 - 'a' as u32))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 26 {
            write!(f, "{}", (b'a' + self.0 as u8) as char)
        } else {
            write!(f, "#{}", self.0)
        }
    }
}

/// A finite permutation of names, stored as a product of transpositions.
///
/// The swap list is applied right to left: the last transposition in the
/// list acts first, so `compose(p, q)` concatenates `p` before `q` and
/// satisfies `compose(p, q).apply(x) == p.apply(q.apply(x))`.
#[derive(Debug, Clone, Default)]
pub struct Perm {
    swaps: Vec<(Name, Name)>,
}

impl Perm {
    pub fn identity() -> Perm {
        Perm { swaps: Vec::new() }
    }

    /// The transposition `(a b)`. For `a == b` this is the identity.
    pub fn swap(a: Name, b: Name) -> Perm {
        if a == b {
            Perm::identity()
        } else {
            Perm { swaps: vec![(a, b)] }
        }
    }

    pub fn from_swaps(swaps: Vec<(Name, Name)>) -> Perm {
        Perm { swaps }
    }

    pub fn apply(&self, x: Name) -> Name {
        self.swaps.iter().rev().fold(x, |x, &(a, b)| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        })
    }

    /// `compose(p, q)` applies `q` first, then `p`.
    pub fn compose(&self, after: &Perm) -> Perm {
        let mut swaps = self.swaps.clone();
        swaps.extend_from_slice(&after.swaps);
        Perm { swaps }
    }

    pub fn inverse(&self) -> Perm {
        let mut swaps = self.swaps.clone();
        swaps.reverse();
        Perm { swaps }
    }

    pub fn is_identity(&self) -> bool {
        self.moved_points().is_empty()
    }

    /// Normalizes to the finite mapping of atoms actually moved.
    pub fn moved_points(&self) -> BTreeMap<Name, Name> {
        let mut moved = BTreeMap::new();
        for &(a, b) in &self.swaps {
            moved.insert(a, a);
            moved.insert(b, b);
        }
        let atoms: Vec<Name> = moved.keys().copied().collect();
        moved.clear();
        for x in atoms {
            let y = self.apply(x);
            if y != x {
                moved.insert(x, y);
            }
        }
        moved
    }
}

impl PartialEq for Perm {
    fn eq(&self, other: &Self) -> bool {
        self.moved_points() == other.moved_points()
    }
}

impl Eq for Perm {}

/// A value with a finite-permutation action and a finite support.
///
/// Implementations must satisfy the action laws (`act(identity) = id`,
/// `act(p.compose(q)) = act(p) . act(q)`) and `support` must return a set
/// outside of which every permutation fixes the value.
pub trait Nominal {
    fn act(&self, p: &Perm) -> Self;
    fn support(&self) -> BTreeSet<Name>;
}

/// `a # x`: the name is outside the support of the value.
pub fn fresh_for<T: Nominal>(a: Name, x: &T) -> bool {
    !x.support().contains(&a)
}

/// The least name fresh for `x`.
pub fn least_fresh<T: Nominal>(x: &T) -> Name {
    Name::least_outside(&x.support())
}

impl Nominal for Name {
    fn act(&self, p: &Perm) -> Self {
        p.apply(*self)
    }

    fn support(&self) -> BTreeSet<Name> {
        std::iter::once(*self).collect()
    }
}

impl<A: Nominal, B: Nominal> Nominal for (A, B) {
    fn act(&self, p: &Perm) -> Self {
        (self.0.act(p), self.1.act(p))
    }

    fn support(&self) -> BTreeSet<Name> {
        let mut s = self.0.support();
        s.extend(self.1.support());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: u32) -> Name {
        Name(i)
    }

    #[test]
    fn rendering_is_bijective_with_index() {
        assert_eq!(n(0).to_string(), "a");
        assert_eq!(n(25).to_string(), "z");
        assert_eq!(n(26).to_string(), "#26");
        for i in [0, 3, 25, 26, 117] {
            assert_eq!(Name::parse(&n(i).to_string()), Some(n(i)));
        }
        assert_eq!(Name::parse("ab"), None);
        assert_eq!(Name::parse("#"), None);
        assert_eq!(Name::parse("A"), None);
    }

    #[test]
    fn identity_fixes_everything() {
        assert_eq!(Perm::identity().apply(n(1)), n(1));
    }

    #[test]
    fn transposition_swaps() {
        let p = Perm::swap(n(0), n(1));
        assert_eq!(p.apply(n(0)), n(1));
        assert_eq!(p.apply(n(1)), n(0));
        assert_eq!(p.apply(n(2)), n(2));
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // (a b) . (b c) sends c to b to a; frozen from the mapping oracle below.
        let p = Perm::swap(n(0), n(1)).compose(&Perm::swap(n(1), n(2)));
        assert_eq!(p.apply(n(2)), n(0));
        assert_eq!(p.apply(n(0)), n(1));
        assert_eq!(p.apply(n(1)), n(2));

        // Oracle: compose as plain function composition on every pool atom.
        let (f, g) = (Perm::swap(n(0), n(1)), Perm::swap(n(1), n(2)));
        for i in 0..5 {
            assert_eq!(p.apply(n(i)), f.apply(g.apply(n(i))));
        }
    }

    #[test]
    fn inverse_cancels() {
        let p = Perm::from_swaps(vec![(n(0), n(1)), (n(1), n(2)), (n(0), n(3))]);
        let inv = p.inverse();
        for i in 0..6 {
            assert_eq!(inv.apply(p.apply(n(i))), n(i));
            assert_eq!(p.apply(inv.apply(n(i))), n(i));
        }
    }

    #[test]
    fn perm_equality_is_by_mapping() {
        // (a b)(a b) = id even though the swap lists differ.
        let p = Perm::from_swaps(vec![(n(0), n(1)), (n(0), n(1))]);
        assert_eq!(p, Perm::identity());
        assert!(p.is_identity());
        // (a b)(b c) = (a c)(a b) as functions.
        let lhs = Perm::swap(n(0), n(1)).compose(&Perm::swap(n(1), n(2)));
        let rhs = Perm::swap(n(0), n(2)).compose(&Perm::swap(n(0), n(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn least_outside_picks_first_gap() {
        let used: BTreeSet<Name> = [n(0), n(1), n(3)].into_iter().collect();
        assert_eq!(Name::least_outside(&used), n(2));
        assert_eq!(Name::least_outside(&BTreeSet::new()), n(0));
        let full: BTreeSet<Name> = (0..4).map(n).collect();
        assert_eq!(Name::least_outside(&full), n(4));
    }
}
