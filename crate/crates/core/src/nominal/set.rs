//! Finite supported sets with the powerset-monad structure.
//!
//! At the scale of this library every set is finite, so the finitely and
//! uniformly finitely supported powersets coincide on representable values;
//! one type serves both, and each use site documents which monad it
//! instantiates.

use std::collections::BTreeSet;
use std::fmt;

use super::atom::{Name, Nominal, Perm};

/// A finite set of nominal values, stored in canonical sorted order.
///
/// Support is uniform: the union of the element supports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuppSet<T: Ord> {
    elems: BTreeSet<T>,
}

impl<T: Ord> Default for SuppSet<T> {
    fn default() -> Self {
        SuppSet { elems: BTreeSet::new() }
    }
}

impl<T: Ord> SuppSet<T> {
    pub fn empty() -> SuppSet<T> {
        SuppSet::default()
    }

    /// Monad unit: the singleton set.
    pub fn unit(x: T) -> SuppSet<T> {
        SuppSet { elems: std::iter::once(x).collect() }
    }

    pub fn insert(&mut self, x: T) {
        self.elems.insert(x);
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elems.contains(x)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + Clone {
        self.elems.iter()
    }

    pub fn is_subset(&self, other: &SuppSet<T>) -> bool {
        self.elems.is_subset(&other.elems)
    }

    pub fn union(mut self, other: SuppSet<T>) -> SuppSet<T> {
        self.elems.extend(other.elems);
        self
    }

    pub fn map<U: Ord>(&self, f: impl FnMut(&T) -> U) -> SuppSet<U> {
        self.elems.iter().map(f).collect()
    }
}

impl<T: Ord> SuppSet<SuppSet<T>> {
    /// Monad multiplication: union of a set of sets.
    pub fn mult(self) -> SuppSet<T> {
        let mut out = SuppSet::empty();
        for inner in self.elems {
            out.elems.extend(inner.elems);
        }
        out
    }
}

impl<T: Ord> FromIterator<T> for SuppSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        SuppSet { elems: iter.into_iter().collect() }
    }
}

impl<T: Ord> IntoIterator for SuppSet<T> {
    type Item = T;
    type IntoIter = std::collections::btree_set::IntoIter<T>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.into_iter()
    }
}

impl<T: Nominal + Ord> Nominal for SuppSet<T> {
    fn act(&self, p: &Perm) -> Self {
        self.map(|x| x.act(p))
    }

    fn support(&self) -> BTreeSet<Name> {
        let mut s = BTreeSet::new();
        for x in &self.elems {
            s.extend(x.support());
        }
        s
    }
}

impl<T: Ord + fmt::Display> fmt::Display for SuppSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Strength of the powerset monad: pair a value with each member of a set.
pub fn strength<T: Nominal + Ord + Clone, U: Nominal + Ord + Clone>(
    x: &T,
    s: &SuppSet<U>,
) -> SuppSet<(T, U)> {
    s.map(|u| (x.clone(), u.clone()))
}

/// Costrength: pair each member of a set with a value.
pub fn costrength<T: Nominal + Ord + Clone, U: Nominal + Ord + Clone>(
    s: &SuppSet<T>,
    y: &U,
) -> SuppSet<(T, U)> {
    s.map(|t| (t.clone(), y.clone()))
}

/// The pairing induced by commutativity of the monad: the cartesian product.
///
/// Both composite paths of the commutativity diagram (strength then
/// costrength, and the reverse) collapse to this; the law suite evaluates
/// them separately and compares.
pub fn comm_pair<T, U>(s: &SuppSet<T>, u: &SuppSet<U>) -> SuppSet<(T, U)>
where
    T: Nominal + Ord + Clone,
    U: Nominal + Ord + Clone,
{
    let mut out = SuppSet::empty();
    for t in s.iter() {
        for v in u.iter() {
            out.insert((t.clone(), v.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: u32) -> Name {
        Name(i)
    }

    fn set(xs: &[u32]) -> SuppSet<Name> {
        xs.iter().map(|&i| n(i)).collect()
    }

    #[test]
    fn unit_and_mult_basics() {
        assert_eq!(SuppSet::unit(n(0)), set(&[0]));
        let nested: SuppSet<SuppSet<Name>> = [set(&[0]), set(&[0, 1])].into_iter().collect();
        assert_eq!(nested.mult(), set(&[0, 1]));
        assert_eq!(SuppSet::<SuppSet<Name>>::empty().mult(), set(&[]));
    }

    #[test]
    fn support_is_union_of_element_supports() {
        let s: SuppSet<(Name, Name)> = [(n(0), n(2)), (n(1), n(0))].into_iter().collect();
        assert_eq!(s.support(), [n(0), n(1), n(2)].into_iter().collect());
    }

    #[test]
    fn action_is_elementwise() {
        let s = set(&[0, 1]);
        let p = Perm::swap(n(1), n(3));
        assert_eq!(s.act(&p), set(&[0, 3]));
    }

    #[test]
    fn strength_and_pairing_are_equivariant() {
        let pool = [0u32, 1, 2, 3];
        for &i in &pool {
            for &j in &pool {
                let p = Perm::swap(n(i), n(j));
                let (x, s, u) = (n(0), set(&[1, 2]), set(&[0, 3]));
                assert_eq!(strength(&x, &s).act(&p), strength(&x.act(&p), &s.act(&p)));
                assert_eq!(comm_pair(&s, &u).act(&p), comm_pair(&s.act(&p), &u.act(&p)));
            }
        }
    }

    #[test]
    fn strength_pairs_on_the_left() {
        assert_eq!(
            strength(&n(0), &set(&[1, 2])),
            [(n(0), n(1)), (n(0), n(2))].into_iter().collect()
        );
        assert_eq!(strength(&n(0), &set(&[])), SuppSet::empty());
        assert_eq!(strength(&n(0), &set(&[0])), SuppSet::unit((n(0), n(0))));
    }

    #[test]
    fn comm_pair_is_the_product() {
        assert_eq!(comm_pair(&set(&[0]), &set(&[1])), SuppSet::unit((n(0), n(1))));
        assert_eq!(
            comm_pair(&set(&[0, 1]), &set(&[2])),
            [(n(0), n(2)), (n(1), n(2))].into_iter().collect()
        );
        assert_eq!(comm_pair(&set(&[]), &set(&[1, 2])), SuppSet::empty());
    }

    // Monad laws, exhaustively over small sets from a 4-atom pool.
    fn all_small_sets() -> Vec<SuppSet<Name>> {
        let pool: Vec<Name> = (0..4).map(n).collect();
        let mut out = Vec::new();
        for mask in 0u32..16 {
            if mask.count_ones() <= 3 {
                out.push(
                    pool.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &x)| x)
                        .collect(),
                );
            }
        }
        out
    }

    #[test]
    fn monad_unit_laws_exhaustive() {
        for s in all_small_sets() {
            assert_eq!(SuppSet::unit(s.clone()).mult(), s);
            assert_eq!(s.map(|x| SuppSet::unit(*x)).mult(), s);
        }
    }

    #[test]
    fn monad_associativity_exhaustive() {
        let sets = all_small_sets();
        let mut nested: Vec<SuppSet<SuppSet<Name>>> = Vec::new();
        for i in 0..sets.len() {
            nested.push([sets[i].clone()].into_iter().collect());
            for j in i + 1..sets.len() {
                nested.push([sets[i].clone(), sets[j].clone()].into_iter().collect());
            }
        }
        // triple nesting: pairs of the two-level sets
        for i in (0..nested.len()).step_by(7) {
            for j in (i..nested.len()).step_by(11) {
                let sss: SuppSet<SuppSet<SuppSet<Name>>> =
                    [nested[i].clone(), nested[j].clone()].into_iter().collect();
                let via_outer = sss.clone().mult().mult();
                let via_inner = sss.map(|ss| ss.clone().mult()).mult();
                assert_eq!(via_outer, via_inner);
            }
        }
    }
}
