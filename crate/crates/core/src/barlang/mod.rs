//! Bar strings: words over names extended with name-binding letters `|a`,
//! their free names, α-equivalence, and canonical representatives.

mod lang;

pub use lang::{member_via_tau, LangApprox, LangKind, TauStep};

use std::collections::BTreeSet;
use std::fmt;

use crate::nominal::{Name, Nominal, Perm};

/// A single letter: a plain name or a binding occurrence `|a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Free(Name),
    Bar(Name),
}

impl Letter {
    pub fn name(self) -> Name {
        match self {
            Letter::Free(a) | Letter::Bar(a) => a,
        }
    }
}

impl Nominal for Letter {
    fn act(&self, p: &Perm) -> Self {
        match *self {
            Letter::Free(a) => Letter::Free(p.apply(a)),
            Letter::Bar(a) => Letter::Bar(p.apply(a)),
        }
    }

    fn support(&self) -> BTreeSet<Name> {
        std::iter::once(self.name()).collect()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Free(a) => write!(f, "{a}"),
            Letter::Bar(a) => write!(f, "|{a}"),
        }
    }
}

/// A finite word over the extended alphabet, with the pointwise group action.
///
/// Ordering is shortlex (length first, then letterwise), which keeps
/// language listings grouped by word length.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BarString {
    letters: Vec<Letter>,
}

impl BarString {
    pub fn empty() -> BarString {
        BarString::default()
    }

    pub fn new(letters: Vec<Letter>) -> BarString {
        BarString { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn tail(&self) -> BarString {
        BarString { letters: self.letters[1..].to_vec() }
    }

    pub fn prepend(&self, l: Letter) -> BarString {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(l);
        letters.extend_from_slice(&self.letters);
        BarString { letters }
    }

    pub fn has_bar(&self) -> bool {
        self.letters.iter().any(|l| matches!(l, Letter::Bar(_)))
    }

    /// Parses the word syntax: whitespace-separated letters, `|x` for bar
    /// letters, and a compact unspaced form when all names are single
    /// characters. The empty string and `ε` denote the empty word.
    pub fn parse(text: &str) -> Result<BarString, WordParseError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(BarString::empty());
        }
        if text.contains(char::is_whitespace) {
            text.split_whitespace()
                .map(parse_letter)
                .collect::<Result<Vec<_>, _>>()
                .map(BarString::new)
        } else if let Ok(l) = parse_letter(text) {
            Ok(BarString::new(vec![l]))
        } else {
            // compact form: single-character names only
            let mut letters = Vec::new();
            let mut chars = text.chars();
            while let Some(c) = chars.next() {
                let (bar, c) = if c == '|' {
                    match chars.next() {
                        Some(c2) => (true, c2),
                        None => return Err(WordParseError::new(text, "dangling `|`")),
                    }
                } else {
                    (false, c)
                };
                let name = Name::parse(&c.to_string())
                    .ok_or_else(|| WordParseError::new(text, format!("invalid name `{c}`")))?;
                letters.push(if bar { Letter::Bar(name) } else { Letter::Free(name) });
            }
            Ok(BarString::new(letters))
        }
    }
}

fn parse_letter(tok: &str) -> Result<Letter, WordParseError> {
    if let Some(rest) = tok.strip_prefix('|') {
        Name::parse(rest)
            .map(Letter::Bar)
            .ok_or_else(|| WordParseError::new(tok, format!("invalid name `{rest}`")))
    } else {
        Name::parse(tok)
            .map(Letter::Free)
            .ok_or_else(|| WordParseError::new(tok, format!("invalid letter `{tok}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word `{input}`: {reason}")]
pub struct WordParseError {
    pub input: String,
    pub reason: String,
}

impl WordParseError {
    fn new(input: &str, reason: impl Into<String>) -> Self {
        WordParseError { input: input.to_string(), reason: reason.into() }
    }
}

impl PartialOrd for BarString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BarString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl Nominal for BarString {
    fn act(&self, p: &Perm) -> Self {
        BarString { letters: self.letters.iter().map(|l| l.act(p)).collect() }
    }

    /// Support of the raw string: every occurring name, bound or free.
    fn support(&self) -> BTreeSet<Name> {
        self.letters.iter().map(|l| l.name()).collect()
    }
}

impl fmt::Display for BarString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        if self.letters.iter().all(|l| l.name().index() < 26) {
            for l in &self.letters {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            for (i, l) in self.letters.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{l}")?;
            }
            Ok(())
        }
    }
}

/// The free names of a bar string: names whose first plain occurrence is
/// not preceded by a binding occurrence of the same name.
pub fn free_names(w: &BarString) -> BTreeSet<Name> {
    free_names_slice(&w.letters)
}

fn free_names_slice(letters: &[Letter]) -> BTreeSet<Name> {
    let mut free = BTreeSet::new();
    let mut barred = BTreeSet::new();
    for l in letters {
        match *l {
            Letter::Free(a) => {
                if !barred.contains(&a) {
                    free.insert(a);
                }
            }
            Letter::Bar(a) => {
                barred.insert(a);
            }
        }
    }
    free
}

/// α-equivalence of bar strings, decided structurally: plain letters must
/// match on the nose, and a binding letter compares the abstractions of the
/// suffixes (equal binders, or the right binder fresh for the left suffix
/// and a swap carrying one suffix to the other).
pub fn alpha_eq(v: &BarString, w: &BarString) -> bool {
    alpha_eq_slice(&v.letters, &w.letters)
}

fn alpha_eq_slice(v: &[Letter], w: &[Letter]) -> bool {
    match (v.split_first(), w.split_first()) {
        (None, None) => true,
        (Some((Letter::Free(a), vt)), Some((Letter::Free(b), wt))) => {
            a == b && alpha_eq_slice(vt, wt)
        }
        (Some((Letter::Bar(a), vt)), Some((Letter::Bar(b), wt))) => {
            if a == b {
                alpha_eq_slice(vt, wt)
            } else {
                let swapped: Vec<Letter> = vt.iter().map(|l| l.act(&Perm::swap(*a, *b))).collect();
                !free_names_slice(vt).contains(b) && alpha_eq_slice(&swapped, wt)
            }
        }
        _ => false,
    }
}

/// An α-normal form: every binding letter uses the least name outside the
/// support of the abstracted suffix class. Two bar strings are α-equivalent
/// exactly when their canonical forms are letterwise equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalBarString(BarString);

impl CanonicalBarString {
    pub fn empty() -> CanonicalBarString {
        CanonicalBarString(BarString::empty())
    }

    pub fn as_bar_string(&self) -> &BarString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first()
    }

    /// The suffix after the first letter. Canonicality is preserved: the
    /// canonicalization rule rewrites a word suffix-first.
    pub fn tail(&self) -> CanonicalBarString {
        CanonicalBarString(self.0.tail())
    }

    pub fn prepend(&self, l: Letter) -> CanonicalBarString {
        canonicalize(&self.0.prepend(l))
    }
}

impl Nominal for CanonicalBarString {
    fn act(&self, p: &Perm) -> Self {
        canonicalize(&self.0.act(p))
    }

    /// The least support of the class: the free names.
    fn support(&self) -> BTreeSet<Name> {
        free_names(&self.0)
    }
}

impl fmt::Display for CanonicalBarString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The canonical representative of the α-class of `w`.
///
/// Recursively: plain letters are kept, and for `|a·w` the binder is
/// renamed to the least name outside the free names of the canonicalized
/// suffix minus `a`.
pub fn canonicalize(w: &BarString) -> CanonicalBarString {
    CanonicalBarString(BarString::new(canon_slice(&w.letters)))
}

fn canon_slice(letters: &[Letter]) -> Vec<Letter> {
    match letters.split_first() {
        None => Vec::new(),
        Some((Letter::Free(a), t)) => {
            let mut out = vec![Letter::Free(*a)];
            out.extend(canon_slice(t));
            out
        }
        Some((Letter::Bar(a), t)) => {
            let u = canon_slice(t);
            let mut class_support = free_names_slice(&u);
            class_support.remove(a);
            let b = Name::least_outside(&class_support);
            let mut out = vec![Letter::Bar(b)];
            if b == *a {
                out.extend(u);
            } else {
                // the swap renames the free occurrences of the old binder,
                // but can also disturb bound binders equal to the new one;
                // re-canonicalizing the suffix restores the normal form
                let swap = Perm::swap(*a, b);
                let swapped: Vec<Letter> = u.iter().map(|l| l.act(&swap)).collect();
                out.extend(canon_slice(&swapped));
            }
            out
        }
    }
}
