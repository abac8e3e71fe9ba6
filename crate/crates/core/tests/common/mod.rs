//! Shared helpers for the integration tests: an independent α-equivalence
//! oracle built by closing the one-step binder-renaming relation under
//! reflexivity, symmetry, and transitivity over a finite string universe.
//!
//! The oracle works on raw strings only (set-of-atoms freshness, swaps,
//! structural equality) and never calls the library's α-equivalence or
//! canonicalization.

// shared across test targets that use different subsets of it
#![allow(dead_code)]

use nomata::barlang::{BarString, Letter};
use nomata::nominal::Name;

pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// All bar strings over the first `atoms` names with length at most `max_len`.
pub fn string_universe(atoms: u32, max_len: usize) -> Vec<Vec<Letter>> {
    let alphabet: Vec<Letter> = (0..atoms)
        .map(|i| Letter::Free(Name(i)))
        .chain((0..atoms).map(|i| Letter::Bar(Name(i))))
        .collect();
    let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &alphabet {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn swap_letters(letters: &[Letter], a: Name, b: Name) -> Vec<Letter> {
    let rename = |x: Name| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    letters
        .iter()
        .map(|l| match *l {
            Letter::Free(x) => Letter::Free(rename(x)),
            Letter::Bar(x) => Letter::Bar(rename(x)),
        })
        .collect()
}

fn atoms_of(letters: &[Letter]) -> Vec<Name> {
    let mut out: Vec<Name> = letters
        .iter()
        .map(|l| match *l {
            Letter::Free(x) | Letter::Bar(x) => x,
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The generated-congruence closure: for every string and every binding
/// position, rename the binder of the entire suffix to any pool atom that
/// is fresh for the raw suffix, and join the two strings. Transitivity
/// comes from the union-find.
///
/// The universe must carry spare atoms beyond the strings under comparison:
/// the generating relation ranges over the infinite alphabet, and chains
/// between equivalent strings routinely pass through fresh intermediate
/// binders (e.g. `|a|bac` and `|b|abc` over three atoms connect only via a
/// fourth). One spare atom per binder position suffices: renaming binders
/// right to left onto private atoms reaches a form determined by the
/// binding pattern and free names alone.
pub fn closure_oracle(universe: &[Vec<Letter>], atoms: u32) -> UnionFind {
    let index: std::collections::HashMap<&[Letter], usize> =
        universe.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut uf = UnionFind::new(universe.len());
    for (i, w) in universe.iter().enumerate() {
        for pos in 0..w.len() {
            let Letter::Bar(a) = w[pos] else { continue };
            let suffix = &w[pos + 1..];
            let suffix_atoms = atoms_of(suffix);
            for b in (0..atoms).map(Name) {
                if b == a || suffix_atoms.contains(&b) {
                    continue;
                }
                let mut rewritten = w[..pos].to_vec();
                rewritten.push(Letter::Bar(b));
                rewritten.extend(swap_letters(suffix, a, b));
                let j = index[rewritten.as_slice()];
                uf.union(i, j);
            }
        }
    }
    uf
}

pub fn to_bar_string(letters: &[Letter]) -> BarString {
    BarString::new(letters.to_vec())
}
