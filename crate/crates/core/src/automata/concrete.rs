//! Expansion of a symbolic description over a finite name pool, run
//! semantics, and the exhaustive accepted-language oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::barlang::{canonicalize, BarString, LangApprox, LangKind, Letter};
use crate::nominal::{Abs, Name, Nominal, Perm};
use crate::Error;

use super::spec::{AutomatonKind, AutomatonSpec, RuleLetter, Violation};

/// A concrete state: an orbit identifier with an injective tuple of pool
/// atoms filling its registers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    pub orbit: String,
    pub args: Vec<Name>,
}

impl State {
    pub fn new(orbit: impl Into<String>, args: Vec<Name>) -> State {
        State { orbit: orbit.into(), args }
    }

    /// Parses `q0` or `q1(a,b)`.
    pub fn parse(text: &str) -> Option<State> {
        let text = text.trim();
        match text.find('(') {
            None => Some(State::new(text, Vec::new())),
            Some(i) => {
                let inner = text[i + 1..].strip_suffix(')')?;
                let orbit = &text[..i];
                if inner.trim().is_empty() {
                    return Some(State::new(orbit, Vec::new()));
                }
                let args =
                    inner.split(',').map(|t| Name::parse(t.trim())).collect::<Option<Vec<_>>>()?;
                Some(State::new(orbit, args))
            }
        }
    }
}

impl Nominal for State {
    fn act(&self, p: &Perm) -> Self {
        State { orbit: self.orbit.clone(), args: self.args.iter().map(|&a| p.apply(a)).collect() }
    }

    fn support(&self) -> BTreeSet<Name> {
        self.args.iter().copied().collect()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.orbit)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The expansion of a symbolic description over a finite pool of atoms:
/// all injective register fillings, all injective rule instantiations.
/// Binding transitions are stored as abstractions of the target state, so
/// the stored relation is closed under renaming of the bound atom by
/// construction. Immutable after construction; queries are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteAutomaton {
    pub kind: AutomatonKind,
    pub name: String,
    pub pool: Vec<Name>,
    pub states: BTreeSet<State>,
    pub finals: BTreeSet<State>,
    pub free_trans: BTreeSet<(State, Name, State)>,
    pub bar_trans: BTreeSet<(State, Abs<State>)>,
}

/// All injective `k`-tuples over `pool`, in lexicographic pool order.
fn injective_tuples(pool: &[Name], k: usize) -> Vec<Vec<Name>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for tuple in &out {
            for &a in pool {
                if !tuple.contains(&a) {
                    let mut t = tuple.clone();
                    t.push(a);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

/// Expands `spec` over the first `pool_size` atoms.
pub fn expand(spec: &AutomatonSpec, pool_size: usize) -> Result<ConcreteAutomaton, Error> {
    if pool_size < spec.min_pool() {
        return Err(Error::PoolInsufficient {
            pool: pool_size,
            reason: format!("the description needs at least {} atoms", spec.min_pool()),
        });
    }
    let pool: Vec<Name> = (0..pool_size as u32).map(Name).collect();

    let mut states = BTreeSet::new();
    let mut finals = BTreeSet::new();
    for orbit in &spec.orbits {
        for args in injective_tuples(&pool, orbit.arity) {
            let q = State::new(orbit.id.clone(), args);
            if orbit.is_final {
                finals.insert(q.clone());
            }
            states.insert(q);
        }
    }

    let mut free_trans = BTreeSet::new();
    let mut bar_trans = BTreeSet::new();
    for rule in &spec.rules {
        let vars = rule.vars();
        for assignment in injective_tuples(&pool, vars.len()) {
            let lookup = |v: &str| -> Name {
                let i = vars.iter().position(|&u| u == v).expect("rule variable");
                assignment[i]
            };
            let src = State::new(
                rule.src_orbit.clone(),
                rule.src_vars.iter().map(|v| lookup(v)).collect(),
            );
            let tgt = State::new(
                rule.tgt_orbit.clone(),
                rule.tgt_vars.iter().map(|v| lookup(v)).collect(),
            );
            match &rule.letter {
                RuleLetter::Free(v) => {
                    free_trans.insert((src, lookup(v), tgt));
                }
                RuleLetter::Bar(v) => {
                    bar_trans.insert((src, Abs::new(lookup(v), tgt)));
                }
            }
        }
    }

    Ok(ConcreteAutomaton {
        kind: spec.kind,
        name: spec.name.clone(),
        pool,
        states,
        finals,
        free_trans,
        bar_trans,
    })
}

impl ConcreteAutomaton {
    pub fn lang_kind(&self) -> LangKind {
        match self.kind {
            AutomatonKind::Nofa => LangKind::Data,
            AutomatonKind::Rnna => LangKind::Bar,
        }
    }

    pub fn is_final(&self, q: &State) -> bool {
        self.finals.contains(q)
    }

    pub fn free_successors<'a>(&'a self, q: &'a State, a: Name) -> impl Iterator<Item = &'a State> {
        self.free_trans
            .iter()
            .filter(move |(src, letter, _)| src == q && *letter == a)
            .map(|(_, _, tgt)| tgt)
    }

    pub fn bar_out<'a>(&'a self, q: &'a State) -> impl Iterator<Item = &'a Abs<State>> {
        self.bar_trans.iter().filter(move |(src, _)| src == q).map(|(_, abs)| abs)
    }

    fn check_state(&self, q: &State) -> Result<(), Error> {
        if self.states.contains(q) {
            Ok(())
        } else {
            Err(Error::UnknownState(q.to_string()))
        }
    }

    /// Does `q` accept the word? For plain automata this is run existence.
    /// For binding automata the word denotes its α-class: the word is
    /// canonicalized, and every binding step reads the stored abstraction
    /// and the queried suffix class at a common fresh pool atom. (Reading
    /// at the word's own binder is not enough: that concretion can be
    /// undefined against a target that retains more registers than the
    /// remaining word mentions, even though the class is accepted.)
    pub fn accepts(&self, q: &State, w: &BarString) -> Result<bool, Error> {
        self.check_state(q)?;
        if self.kind == AutomatonKind::Nofa && w.has_bar() {
            return Err(Error::BarInDataContext(w.to_string()));
        }
        let canonical = canonicalize(w);
        for name in canonical.as_bar_string().support() {
            if !self.pool.contains(&name) {
                return Err(Error::PoolInsufficient {
                    pool: self.pool.len(),
                    reason: format!("word `{canonical}` uses the atom `{name}` outside the pool"),
                });
            }
        }
        self.run(q, canonical.as_bar_string())
    }

    fn run(&self, q: &State, w: &BarString) -> Result<bool, Error> {
        match w.first() {
            None => Ok(self.is_final(q)),
            Some(Letter::Free(a)) => {
                let tail = w.tail();
                for next in self.free_successors(q, a) {
                    if self.run(next, &tail)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Some(Letter::Bar(b)) => {
                let query = Abs::new(b, canonicalize(&w.tail()));
                for abs in self.bar_out(q) {
                    let mut used = abs.support();
                    used.extend(query.support());
                    let Some(&c) = self.pool.iter().find(|c| !used.contains(c)) else {
                        return Err(Error::PoolExhausted {
                            pool: self.pool.len(),
                            context: format!("binding step of `{w}` at {q}"),
                        });
                    };
                    let next_state = abs.concretion(c).expect("fresh concretion");
                    let next_word = query.concretion(c).expect("fresh concretion");
                    if self.run(&next_state, next_word.as_bar_string())? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// The exact set of accepted words of length at most `depth`, by
    /// exhaustive enumeration of pool runs (memoized on shared suffixes);
    /// canonical α-classes for binding automata.
    pub fn enum_language(&self, q: &State, depth: usize) -> Result<LangApprox, Error> {
        self.check_state(q)?;
        let mut memo: BTreeMap<(State, usize), LangApprox> = BTreeMap::new();
        Ok(self.enum_rec(q, depth, &mut memo))
    }

    /// [`Self::enum_language`] for every state at once, sharing one memo
    /// table across the whole run space.
    pub fn enum_all(&self, depth: usize) -> BTreeMap<State, LangApprox> {
        let mut memo: BTreeMap<(State, usize), LangApprox> = BTreeMap::new();
        self.states.iter().map(|q| (q.clone(), self.enum_rec(q, depth, &mut memo))).collect()
    }

    fn enum_rec(
        &self,
        q: &State,
        depth: usize,
        memo: &mut BTreeMap<(State, usize), LangApprox>,
    ) -> LangApprox {
        if let Some(l) = memo.get(&(q.clone(), depth)) {
            return l.clone();
        }
        let mut lang = LangApprox::new(self.lang_kind(), depth);
        if self.is_final(q) {
            lang.insert(&BarString::empty()).expect("empty word fits any depth");
        }
        if depth > 0 {
            for (src, a, tgt) in &self.free_trans {
                if src == q {
                    let sub = self.enum_rec(tgt, depth - 1, memo);
                    if sub.eps() {
                        lang.insert(&BarString::new(vec![Letter::Free(*a)])).expect("within depth");
                    }
                    for word in sub.words() {
                        lang.insert(&word.as_bar_string().prepend(Letter::Free(*a)))
                            .expect("within depth");
                    }
                }
            }
            for (src, abs) in &self.bar_trans {
                if src == q {
                    for &c in &self.pool {
                        let Some(tgt) = abs.concretion(c) else { continue };
                        let sub = self.enum_rec(&tgt, depth - 1, memo);
                        if sub.eps() {
                            lang.insert(&BarString::new(vec![Letter::Bar(c)]))
                                .expect("within depth");
                        }
                        for word in sub.words() {
                            lang.insert(&word.as_bar_string().prepend(Letter::Bar(c)))
                                .expect("within depth");
                        }
                    }
                }
            }
        }
        memo.insert((q.clone(), depth), lang.clone());
        lang
    }

    /// Closure of all components under every transposition of pool atoms
    /// (transpositions generate the full symmetric group on the pool, and
    /// closure under generators of a finite relation implies closure under
    /// the group). α-invariance of the binding relation needs no check:
    /// abstraction storage makes it hold by construction.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, &a) in self.pool.iter().enumerate() {
            for &b in &self.pool[i + 1..] {
                let p = Perm::swap(a, b);
                let swap = (a.to_string(), b.to_string());
                for q in &self.states {
                    if !self.states.contains(&q.act(&p)) {
                        out.push(Violation::NotClosed {
                            component: "state set",
                            swap: swap.clone(),
                            witness: q.to_string(),
                        });
                    }
                }
                for q in &self.finals {
                    if !self.finals.contains(&q.act(&p)) {
                        out.push(Violation::NotClosed {
                            component: "final states",
                            swap: swap.clone(),
                            witness: q.to_string(),
                        });
                    }
                }
                for (src, letter, tgt) in &self.free_trans {
                    let image = (src.act(&p), p.apply(*letter), tgt.act(&p));
                    if !self.free_trans.contains(&image) {
                        out.push(Violation::NotClosed {
                            component: "free transitions",
                            swap: swap.clone(),
                            witness: format!("{src} -{letter}-> {tgt}"),
                        });
                    }
                }
                for (src, abs) in &self.bar_trans {
                    let image = (src.act(&p), abs.act(&p));
                    if !self.bar_trans.contains(&image) {
                        out.push(Violation::NotClosed {
                            component: "binding transitions",
                            swap: swap.clone(),
                            witness: format!("{src} -|{}-> {}", abs.binder(), abs.body()),
                        });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::fixtures;
    use crate::automata::spec::parse_spec;

    fn n(i: u32) -> Name {
        Name(i)
    }

    fn w(text: &str) -> BarString {
        BarString::parse(text).unwrap()
    }

    fn ex(text: &str, pool: usize) -> ConcreteAutomaton {
        expand(&parse_spec(text).unwrap(), pool).unwrap()
    }

    #[test]
    fn expansion_of_ex1_over_two_atoms() {
        let a = ex(fixtures::EX1, 2);
        let expected: BTreeSet<State> = [
            State::new("q0", vec![]),
            State::new("q1", vec![n(0)]),
            State::new("q1", vec![n(1)]),
            State::new("q2", vec![]),
        ]
        .into_iter()
        .collect();
        assert_eq!(a.states, expected);
        assert!(a.free_trans.contains(&(
            State::new("q0", vec![]),
            n(0),
            State::new("q1", vec![n(0)])
        )));
        assert!(a.free_trans.contains(&(
            State::new("q1", vec![n(0)]),
            n(0),
            State::new("q2", vec![])
        )));
        assert_eq!(a.free_trans.len(), 4);
        assert_eq!(a.finals.len(), 1);
    }

    #[test]
    fn bar_transitions_collapse_to_canonical_classes() {
        let a = ex(fixtures::EX2, 2);
        let q0 = State::new("q0", vec![]);
        let from_q0: Vec<_> = a.bar_out(&q0).collect();
        // both instantiations of the rule denote the same abstraction
        assert_eq!(from_q0.len(), 1);
        assert_eq!(*from_q0[0], Abs::new(n(0), State::new("q1", vec![n(0)])));
    }

    #[test]
    fn pool_must_host_the_largest_rule() {
        let spec = parse_spec(fixtures::EX1).unwrap();
        assert!(matches!(expand(&spec, 0), Err(Error::PoolInsufficient { .. })));
        assert!(expand(&spec, 1).is_ok());
    }

    #[test]
    fn acceptance_on_ex1() {
        let a = ex(fixtures::EX1, 3);
        let q0 = State::new("q0", vec![]);
        assert_eq!(a.accepts(&q0, &w("aa")), Ok(true));
        assert_eq!(a.accepts(&q0, &w("bb")), Ok(true));
        assert_eq!(a.accepts(&q0, &w("ab")), Ok(false));
        assert_eq!(a.accepts(&q0, &w("")), Ok(false));
        assert_eq!(a.accepts(&State::new("q2", vec![]), &w("")), Ok(true));
        assert!(matches!(a.accepts(&q0, &w("|aa")), Err(Error::BarInDataContext(_))));
        assert!(matches!(
            a.accepts(&State::new("q9", vec![]), &w("aa")),
            Err(Error::UnknownState(_))
        ));
    }

    #[test]
    fn acceptance_on_ex2_is_alpha_invariant() {
        let a = ex(fixtures::EX2, 3);
        let q0 = State::new("q0", vec![]);
        for word in ["|aa", "|bb", "|cc"] {
            assert_eq!(a.accepts(&q0, &w(word)), Ok(true), "{word}");
        }
        assert_eq!(a.accepts(&q0, &w("|ab")), Ok(false));
        assert_eq!(a.accepts(&q0, &w("aa")), Ok(false));
    }

    #[test]
    fn acceptance_reads_binders_at_a_common_fresh_atom() {
        // from p(a) the only binding transition retains the register a, so
        // the canonical member [|aa] has no concretion at its own binder
        let text = "rnna tricky\nstate p(x)\nstate r(x,y)\nstate f final\n\
                    trans p(x) -|y-> r(x,y)\ntrans r(x,y) -y-> f\n";
        let a = ex(text, 3);
        let p_a = State::new("p", vec![n(0)]);
        assert_eq!(a.accepts(&p_a, &w("|bb")), Ok(true));
        assert_eq!(a.accepts(&p_a, &w("|aa")), Ok(true));
        assert_eq!(a.accepts(&p_a, &w("|ba")), Ok(false));
        let lang = a.enum_language(&p_a, 2).unwrap();
        assert_eq!(lang.rendered_words(), ["|aa"]);
    }

    #[test]
    fn words_with_out_of_pool_atoms_are_rejected() {
        let a = ex(fixtures::EX1, 2);
        let q0 = State::new("q0", vec![]);
        assert!(matches!(a.accepts(&q0, &w("cc")), Err(Error::PoolInsufficient { .. })));
    }

    #[test]
    fn enumerated_languages_match_the_fixture_descriptions() {
        let a1 = ex(fixtures::EX1, 3);
        let l1 = a1.enum_language(&State::new("q0", vec![]), 3).unwrap();
        assert_eq!(l1.rendered_words(), ["aa", "bb", "cc"]);
        assert!(!l1.eps());

        let a2 = ex(fixtures::EX2, 2);
        let l2 = a2.enum_language(&State::new("q0", vec![]), 2).unwrap();
        assert_eq!(l2.rendered_words(), ["|aa"]);

        let a3 = ex(fixtures::EX3, 2);
        let l3 = a3.enum_language(&State::new("q0", vec![]), 4).unwrap();
        assert_eq!(l3.rendered_words(), ["|a", "|aa", "|aaa", "|aaaa"]);
    }

    #[test]
    fn enumeration_agrees_with_acceptance() {
        let a = ex(fixtures::EX2, 4);
        let q0 = State::new("q0", vec![]);
        let lang = a.enum_language(&q0, 3).unwrap();
        // every enumerated word is accepted; spot-check non-members
        for word in lang.words() {
            assert_eq!(a.accepts(&q0, word.as_bar_string()), Ok(true), "{word}");
        }
        for word in ["|ab", "a", "|a"] {
            assert!(!lang.member(&w(word)));
            assert_eq!(a.accepts(&q0, &w(word)), Ok(false));
        }
    }

    #[test]
    fn expansions_validate_clean() {
        for text in [fixtures::EX1, fixtures::EX2, fixtures::EX3] {
            let a = ex(text, 3);
            assert!(a.validate().is_empty());
        }
    }

    #[test]
    fn validator_names_a_missing_permuted_transition() {
        let mut a = ex(fixtures::EX1, 2);
        let victim = a.free_trans.iter().next().unwrap().clone();
        a.free_trans.remove(&victim);
        let violations = a.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::NotClosed { component: "free transitions", .. })));
    }

    #[test]
    fn state_parsing_round_trips() {
        for text in ["q0", "q1(a)", "r(a,c)"] {
            let q = State::parse(text).unwrap();
            assert_eq!(q.to_string(), text);
        }
        assert_eq!(State::parse("q0()"), Some(State::new("q0", vec![])));
        assert!(State::parse("q1(").is_none());
        assert!(State::parse("q1(A)").is_none());
    }
}
