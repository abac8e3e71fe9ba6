//! The Kleisli category of the powerset monad over concrete carriers:
//! hom-lattice maps with joins, the distributive laws for the transition
//! functors, the lifted functor action, and the least-fixed-point trace
//! semantics.
//!
//! A transition layer is `FValue`: termination, a letter with a successor,
//! or (for binding automata) an abstraction of a successor. Words and
//! α-classes of words form the initial algebra for that layer; iterating
//! the induced one-step operator from the bottom map climbs the hom-lattice
//! and yields, after `i` rounds, exactly the accepted words of length
//! below `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::automata::{ConcreteAutomaton, State};
use crate::barlang::{CanonicalBarString, LangApprox, Letter};
use crate::nominal::{Abs, Name, Nominal, Perm, SuppSet};
use crate::Error;

/// A point of the hom-lattice `Kl(P)(X, Y)`: a finite map from carrier
/// elements to supported sets, ordered pointwise by inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleisliMap<X: Ord, Y: Ord> {
    table: BTreeMap<X, SuppSet<Y>>,
}

impl<X: Ord + Clone + fmt::Display, Y: Ord + Clone> KleisliMap<X, Y> {
    /// The bottom of the hom-lattice: every carrier element maps to ∅.
    pub fn bottom(carrier: impl IntoIterator<Item = X>) -> Self {
        KleisliMap { table: carrier.into_iter().map(|x| (x, SuppSet::empty())).collect() }
    }

    pub fn from_fn(
        carrier: impl IntoIterator<Item = X>,
        mut f: impl FnMut(&X) -> SuppSet<Y>,
    ) -> Self {
        KleisliMap {
            table: carrier
                .into_iter()
                .map(|x| {
                    let v = f(&x);
                    (x, v)
                })
                .collect(),
        }
    }

    pub fn get(&self, x: &X) -> Result<&SuppSet<Y>, Error> {
        self.table
            .get(x)
            .ok_or_else(|| Error::CarrierMismatch(format!("`{x}` is not in the carrier")))
    }

    pub fn set(&mut self, x: X, v: SuppSet<Y>) {
        self.table.insert(x, v);
    }

    pub fn carrier(&self) -> impl Iterator<Item = &X> + Clone {
        self.table.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&X, &SuppSet<Y>)> {
        self.table.iter()
    }

    pub fn same_carrier<Z: Ord>(&self, other: &KleisliMap<X, Z>) -> bool {
        self.table.len() == other.table.len()
            && self.table.keys().zip(other.table.keys()).all(|(a, b)| a == b)
    }

    /// The hom-lattice order: pointwise inclusion over a shared carrier.
    pub fn leq(&self, other: &Self) -> bool {
        self.same_carrier(other) && self.table.iter().all(|(x, s)| s.is_subset(&other.table[x]))
    }

    /// Pointwise union, the least upper bound.
    pub fn join(&self, other: &Self) -> Result<Self, Error> {
        if !self.same_carrier(other) {
            return Err(Error::CarrierMismatch("join of maps over different carriers".into()));
        }
        Ok(KleisliMap {
            table: self
                .table
                .iter()
                .map(|(x, s)| (x.clone(), s.clone().union(other.table[x].clone())))
                .collect(),
        })
    }

    /// Join of any family over an explicit carrier; the empty family gives
    /// the bottom map.
    pub fn join_many<'a>(
        carrier: impl IntoIterator<Item = X>,
        maps: impl IntoIterator<Item = &'a Self>,
    ) -> Result<Self, Error>
    where
        X: 'a,
        Y: 'a,
    {
        let mut out = Self::bottom(carrier);
        for m in maps {
            out = out.join(m)?;
        }
        Ok(out)
    }

    /// Closure under the pool symmetries: the map commutes with every
    /// transposition of pool atoms.
    pub fn is_equivariant(&self, pool: &[Name]) -> bool
    where
        X: Nominal,
        Y: Nominal,
    {
        pool.iter().enumerate().all(|(i, &a)| {
            pool[i + 1..].iter().all(|&b| {
                let p = Perm::swap(a, b);
                self.table
                    .iter()
                    .all(|(x, s)| self.table.get(&x.act(&p)).is_some_and(|t| *t == s.act(&p)))
            })
        })
    }
}

impl<X: Ord + Clone + fmt::Display> KleisliMap<X, X> {
    /// The Kleisli identity: singletons.
    pub fn unit(carrier: impl IntoIterator<Item = X>) -> Self {
        KleisliMap { table: carrier.into_iter().map(|x| (x.clone(), SuppSet::unit(x))).collect() }
    }
}

/// Kleisli composition `g • f`: flatten the image of `f` through `g` by
/// union. Bottom is absorbing on the left: `⊥ • f = ⊥`.
pub fn kleisli_compose<X, Y, Z>(
    g: &KleisliMap<Y, Z>,
    f: &KleisliMap<X, Y>,
) -> Result<KleisliMap<X, Z>, Error>
where
    X: Ord + Clone + fmt::Display,
    Y: Ord + Clone + fmt::Display,
    Z: Ord + Clone,
{
    let mut table = BTreeMap::new();
    for (x, ys) in f.entries() {
        let mut out = SuppSet::empty();
        for y in ys.iter() {
            out = out.union(g.get(y)?.clone());
        }
        table.insert(x.clone(), out);
    }
    Ok(KleisliMap { table })
}

/// One transition layer over a state space: termination, a letter with a
/// successor, or an abstraction of a successor (binding automata only).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FValue<X> {
    Unit,
    Pair(Name, X),
    Bind(Abs<X>),
}

impl<X: Nominal + Ord + Clone> Nominal for FValue<X> {
    fn act(&self, p: &Perm) -> Self {
        match self {
            FValue::Unit => FValue::Unit,
            FValue::Pair(a, x) => FValue::Pair(p.apply(*a), x.act(p)),
            FValue::Bind(abs) => FValue::Bind(abs.act(p)),
        }
    }

    fn support(&self) -> BTreeSet<Name> {
        match self {
            FValue::Unit => BTreeSet::new(),
            FValue::Pair(a, x) => {
                let mut s = x.support();
                s.insert(*a);
                s
            }
            FValue::Bind(abs) => abs.support(),
        }
    }
}

impl<X: fmt::Display> fmt::Display for FValue<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FValue::Unit => write!(f, "*"),
            FValue::Pair(a, x) => write!(f, "({a}, {x})"),
            FValue::Bind(abs) => write!(f, "{abs}"),
        }
    }
}

/// The distributive law of the transition functor over the powerset monad,
/// clause by clause: termination maps to a singleton, a letter distributes
/// over the successor set, and an abstraction distributes over its body set.
pub fn lambda_f<X: Nominal + Ord + Clone>(v: &FValue<SuppSet<X>>) -> SuppSet<FValue<X>> {
    match v {
        FValue::Unit => SuppSet::unit(FValue::Unit),
        FValue::Pair(a, s) => s.map(|x| FValue::Pair(*a, x.clone())),
        FValue::Bind(abs) => rho_abs(abs).map(|b| FValue::Bind(b.clone())),
    }
}

/// The abstraction case of the distributive law: `<a>S ↦ {<a>s : s ∈ S}`.
/// Well-defined on abstraction values (not just representatives) and
/// monotone in the body set.
pub fn rho_abs<X: Nominal + Ord + Clone>(abs: &Abs<SuppSet<X>>) -> SuppSet<Abs<X>> {
    let binder = abs.binder();
    abs.body().map(|x| Abs::new(binder, x.clone()))
}

/// The transition functor on an equivariant function of the successor slot.
pub fn fvalue_map<X, Y>(v: &FValue<X>, f: impl Fn(&X) -> Y) -> FValue<Y>
where
    X: Nominal + Ord + Clone,
    Y: Nominal + Ord + Clone,
{
    match v {
        FValue::Unit => FValue::Unit,
        FValue::Pair(a, x) => FValue::Pair(*a, f(x)),
        FValue::Bind(abs) => FValue::Bind(Abs::new(abs.binder(), f(abs.body()))),
    }
}

/// The action of the lifted transition functor on a Kleisli map.
pub fn fbar_apply<X, Y>(f: &KleisliMap<X, Y>, v: &FValue<X>) -> Result<SuppSet<FValue<Y>>, Error>
where
    X: Nominal + Ord + Clone + fmt::Display,
    Y: Nominal + Ord + Clone,
{
    Ok(match v {
        FValue::Unit => SuppSet::unit(FValue::Unit),
        FValue::Pair(a, x) => f.get(x)?.map(|y| FValue::Pair(*a, y.clone())),
        FValue::Bind(abs) => {
            let image = f.get(abs.body())?.clone();
            rho_abs(&Abs::new(abs.binder(), image)).map(|b| FValue::Bind(b.clone()))
        }
    })
}

/// Reads a concrete automaton as a coalgebra `q ↦ {*, (a, q'), <a>q'}` over
/// its own state set.
pub fn coalgebra_of(a: &ConcreteAutomaton) -> KleisliMap<State, FValue<State>> {
    KleisliMap::from_fn(a.states.iter().cloned(), |q| {
        let mut out = SuppSet::empty();
        if a.is_final(q) {
            out.insert(FValue::Unit);
        }
        for (src, letter, tgt) in &a.free_trans {
            if src == q {
                out.insert(FValue::Pair(*letter, tgt.clone()));
            }
        }
        for (src, abs) in &a.bar_trans {
            if src == q {
                out.insert(FValue::Bind(abs.clone()));
            }
        }
        out
    })
}

/// The initial-algebra structure on words: termination is the empty word,
/// a letter is prepended, and an abstraction becomes a binding letter (the
/// class is re-canonicalized).
pub fn iota_step(v: &FValue<CanonicalBarString>) -> CanonicalBarString {
    match v {
        FValue::Unit => CanonicalBarString::empty(),
        FValue::Pair(a, w) => w.prepend(Letter::Free(*a)),
        FValue::Bind(abs) => abs.body().prepend(Letter::Bar(abs.binder())),
    }
}

/// The inverse of [`iota_step`] on canonical words: peel the first letter.
pub fn iota_inverse(w: &CanonicalBarString) -> FValue<CanonicalBarString> {
    match w.first() {
        None => FValue::Unit,
        Some(Letter::Free(a)) => FValue::Pair(a, w.tail()),
        Some(Letter::Bar(b)) => FValue::Bind(Abs::new(b, w.tail())),
    }
}

/// The ascending iteration of the trace operator from the bottom map:
/// `tr⁰ = ⊥` and `trⁱ⁺¹(q) = ⋃ { ι(u) : v ∈ c(q), u ∈ F̄(trⁱ)(v) }`.
/// Returns all iterates `tr⁰ .. tr^depth`; the chain is monotone, and the
/// `i`-th iterate holds exactly the accepted words of length below `i`.
pub fn trace_chain(
    a: &ConcreteAutomaton,
    depth: usize,
) -> Result<Vec<KleisliMap<State, CanonicalBarString>>, Error> {
    let coalg = coalgebra_of(a);
    let mut chain = vec![KleisliMap::bottom(a.states.iter().cloned())];
    for _ in 0..depth {
        let prev = chain.last().expect("nonempty chain");
        let mut next = KleisliMap::bottom(a.states.iter().cloned());
        for (q, out) in coalg.entries() {
            let mut words = SuppSet::empty();
            for v in out.iter() {
                for u in fbar_apply(prev, v)?.iter() {
                    words.insert(iota_step(u));
                }
            }
            next.set(q.clone(), words);
        }
        chain.push(next);
    }
    Ok(chain)
}

/// The `depth`-th iterate of the trace operator.
pub fn trace_iterate(
    a: &ConcreteAutomaton,
    depth: usize,
) -> Result<KleisliMap<State, CanonicalBarString>, Error> {
    Ok(trace_chain(a, depth)?.pop().expect("nonempty chain"))
}

/// Converts one state's trace value into a language.
pub fn trace_language(
    a: &ConcreteAutomaton,
    tr: &KleisliMap<State, CanonicalBarString>,
    q: &State,
    depth: usize,
) -> Result<LangApprox, Error> {
    LangApprox::from_classes(a.lang_kind(), depth, tr.get(q)?.iter())
}

/// The accepted-language oracle packaged as a Kleisli map into word
/// classes, with ε a member rather than a flag.
pub fn lang_map(a: &ConcreteAutomaton, depth: usize) -> KleisliMap<State, CanonicalBarString> {
    let all = a.enum_all(depth);
    KleisliMap::from_fn(a.states.iter().cloned(), |q| {
        let lang = &all[q];
        let mut words: SuppSet<CanonicalBarString> = lang.words().cloned().collect();
        if lang.eps() {
            words.insert(CanonicalBarString::empty());
        }
        words
    })
}

/// Checks that the accepted language makes the trace square commute,
/// truncated to words of length below `depth`: composing the coalgebra with
/// the lifted language map equals destructing the language words, pointwise
/// for every state. Returns human-readable mismatches.
pub fn check_trace_square(a: &ConcreteAutomaton, depth: usize) -> Result<Vec<String>, Error> {
    check_trace_square_sides(a, a, depth)
}

/// The two sides of the trace square computed against possibly different
/// automata, so harness tests can inject a defect into one side only.
pub fn check_trace_square_sides(
    coalg_side: &ConcreteAutomaton,
    lang_side: &ConcreteAutomaton,
    depth: usize,
) -> Result<Vec<String>, Error> {
    let coalg = coalgebra_of(coalg_side);
    let lang_inner = lang_map(lang_side, depth.saturating_sub(1));
    let lang_outer = lang_map(lang_side, depth);
    let mut mismatches = Vec::new();
    for (q, out) in coalg.entries() {
        let mut lhs: SuppSet<FValue<CanonicalBarString>> = SuppSet::empty();
        for v in out.iter() {
            lhs = lhs.union(fbar_apply(&lang_inner, v)?);
        }
        let rhs: SuppSet<FValue<CanonicalBarString>> = lang_outer.get(q)?.map(iota_inverse);
        if lhs != rhs {
            mismatches.push(format!("state {q}: coalgebra side {lhs} != language side {rhs}"));
        }
    }
    Ok(mismatches)
}
