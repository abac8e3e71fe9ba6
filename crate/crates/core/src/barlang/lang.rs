//! Depth-bounded language values with the derivative structure of the
//! terminal coalgebra: ε-flag, left quotients by plain letters, and a
//! binder-quotient producing an abstraction of the residual language.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::nominal::{Abs, Name, Nominal, Perm, SuppSet};
use crate::Error;

use super::{canonicalize, BarString, CanonicalBarString, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LangKind {
    /// Plain data words, no binding letters.
    Data,
    /// α-classes of bar strings, stored canonically.
    Bar,
}

/// A language truncated to words of bounded length.
///
/// The empty word is tracked by the `eps` flag; `words` holds the members
/// of length 1..=depth, canonical for the bar kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LangApprox {
    kind: LangKind,
    depth: usize,
    eps: bool,
    words: SuppSet<CanonicalBarString>,
}

impl LangApprox {
    pub fn new(kind: LangKind, depth: usize) -> LangApprox {
        LangApprox { kind, depth, eps: false, words: SuppSet::empty() }
    }

    pub fn kind(&self) -> LangKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn eps(&self) -> bool {
        self.eps
    }

    pub fn words(&self) -> impl Iterator<Item = &CanonicalBarString> + Clone {
        self.words.iter()
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.eps && self.words.is_empty()
    }

    pub fn insert(&mut self, w: &BarString) -> Result<(), Error> {
        if w.len() > self.depth {
            return Err(Error::LengthOverflow { len: w.len(), depth: self.depth });
        }
        if self.kind == LangKind::Data && w.has_bar() {
            return Err(Error::BarInDataContext(w.to_string()));
        }
        if w.is_empty() {
            self.eps = true;
        } else {
            self.words.insert(canonicalize(w));
        }
        Ok(())
    }

    /// Membership, decided on canonical forms for the bar kind.
    pub fn member(&self, w: &BarString) -> bool {
        if w.is_empty() {
            self.eps
        } else {
            self.words.contains(&canonicalize(w))
        }
    }

    /// The left quotient by the plain letter `a`: all words whose
    /// `a`-prefixed extension is in the language. Depth shrinks by one.
    pub fn derive_free(&self, a: Name) -> LangApprox {
        let mut out = LangApprox::new(self.kind, self.depth.saturating_sub(1));
        for w in self.words.iter() {
            if w.first() == Some(Letter::Free(a)) {
                let t = w.tail();
                if t.is_empty() {
                    out.eps = true;
                } else {
                    out.words.insert(t);
                }
            }
        }
        out
    }

    /// The binder quotient: an abstraction `<a>L'` where `a` is the least
    /// name fresh for the whole language and `L'` collects the residuals of
    /// all `|`-prefixed members read at `a`. The resulting abstraction does
    /// not depend on the fresh choice.
    pub fn derive_bar(&self) -> Abs<LangApprox> {
        assert_eq!(self.kind, LangKind::Bar, "binder quotient of a data language");
        let fresh = Name::least_outside(&self.support());
        Abs::new(fresh, self.derive_bar_at(fresh))
    }

    /// The residual language of `|`-prefixed members read at a specific
    /// fresh name; exposed so tests can compare two fresh choices.
    pub fn derive_bar_at(&self, fresh: Name) -> LangApprox {
        debug_assert!(!self.support().contains(&fresh));
        let mut out = LangApprox::new(self.kind, self.depth.saturating_sub(1));
        for w in self.words.iter() {
            if let Some(Letter::Bar(b)) = w.first() {
                let t = w.tail();
                let residual = if b == fresh {
                    t
                } else {
                    canonicalize(&t.as_bar_string().act(&Perm::swap(b, fresh)))
                };
                if residual.is_empty() {
                    out.eps = true;
                } else {
                    out.words.insert(residual);
                }
            }
        }
        out
    }

    /// One unfolding of the coalgebra structure: the ε-flag, the left
    /// quotients over the ambient pool, and (for the bar kind) the binder
    /// quotient.
    pub fn tau(&self, pool: &[Name]) -> TauStep {
        TauStep {
            eps: self.eps,
            free: pool.iter().map(|&a| (a, self.derive_free(a))).collect(),
            bar: match self.kind {
                LangKind::Data => None,
                LangKind::Bar => Some(self.derive_bar()),
            },
        }
    }

    /// Machine-readable listing: rendered words in canonical order.
    pub fn rendered_words(&self) -> Vec<String> {
        self.words.iter().map(|w| w.to_string()).collect()
    }

    /// Builds a language from a set of word classes, with the empty word
    /// folded into the ε-flag.
    pub fn from_classes<'a>(
        kind: LangKind,
        depth: usize,
        classes: impl Iterator<Item = &'a CanonicalBarString>,
    ) -> Result<LangApprox, Error> {
        let mut out = LangApprox::new(kind, depth);
        for w in classes {
            out.insert(w.as_bar_string())?;
        }
        Ok(out)
    }
}

/// The result of one coalgebraic unfolding step of a language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauStep {
    pub eps: bool,
    pub free: BTreeMap<Name, LangApprox>,
    pub bar: Option<Abs<LangApprox>>,
}

/// Membership decided by unfolding the derivative structure along the
/// letters of `w` and reading the ε-flag at the end.
///
/// A bar letter steps through the binder quotient. Since the queried class
/// and the quotient abstraction may use different binders, both are read at
/// a common fresh name; concretion at a name fresh for an abstraction value
/// is always defined.
pub fn member_via_tau(l: &LangApprox, w: &BarString) -> bool {
    match w.first() {
        None => l.eps(),
        Some(Letter::Free(a)) => member_via_tau(&l.derive_free(a), &w.tail()),
        Some(Letter::Bar(b)) => {
            let abs = l.derive_bar();
            let query = Abs::new(b, canonicalize(&w.tail()));
            let mut used = abs.support();
            used.extend(query.support());
            let c = Name::least_outside(&used);
            let next_lang = abs.concretion(c).expect("fresh concretion");
            let next_word = query.concretion(c).expect("fresh concretion");
            member_via_tau(&next_lang, next_word.as_bar_string())
        }
    }
}

impl Nominal for LangApprox {
    fn act(&self, p: &Perm) -> Self {
        LangApprox {
            kind: self.kind,
            depth: self.depth,
            eps: self.eps,
            words: self.words.map(|w| w.act(p)),
        }
    }

    fn support(&self) -> BTreeSet<Name> {
        self.words.support()
    }
}

impl fmt::Display for LangApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{eps: {}", self.eps)?;
        for w in self.words.iter() {
            write!(f, ", {w}")?;
        }
        write!(f, "}}")
    }
}
