//! Powerset determinization and the language semantics it induces: the
//! extension transformation turning a set of transition layers into one
//! deterministic-style step over macro-states, the isomorphism between
//! sets-of-abstractions and abstractions-of-sets, and the cross-check
//! against the fixed-point trace semantics.

use std::collections::BTreeMap;

use crate::automata::{AutomatonKind, ConcreteAutomaton, State};
use crate::barlang::{LangApprox, Letter};
use crate::kleisli::{coalgebra_of, trace_iterate, trace_language, FValue, KleisliMap};
use crate::nominal::{least_fresh, Abs, Name, Nominal, SuppSet};
use crate::Error;

/// A set of automaton states, the carrier of the determinized system.
pub type MacroState = SuppSet<State>;

/// The two composite paths of a compatibility square, for comparison.
pub type SquarePaths<X> = (GValue<SuppSet<X>>, GValue<SuppSet<X>>);

/// One deterministic-style step: acceptance, a successor for every pool
/// atom, and (for binding automata) a single abstraction of a successor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GValue<S: Ord> {
    pub accept: bool,
    pub free_succ: BTreeMap<Name, S>,
    pub bar_succ: Option<Abs<S>>,
}

/// The extension transformation: flattens a set of transition layers into
/// one step over sets.
///
/// Acceptance holds when the termination layer is present; the successor at
/// `a` collects all `(a, x)` layers; and the binding successor reads every
/// abstraction layer at one shared fresh atom `β` and binds the collected
/// set as `<β>{..}`. Any atom fresh for all abstraction layers gives the
/// same abstraction, so the result is fresh-choice independent; the chosen
/// `β` is the least such pool atom, and the pool running out of fresh atoms
/// is an error.
pub fn epsilon<X: Nominal + Ord + Clone>(
    s: &SuppSet<FValue<X>>,
    pool: &[Name],
    include_bar: bool,
) -> Result<GValue<SuppSet<X>>, Error> {
    let bar_succ = if include_bar {
        let mut used = std::collections::BTreeSet::new();
        for v in s.iter() {
            if let FValue::Bind(abs) = v {
                used.extend(abs.support());
            }
        }
        let Some(&fresh) = pool.iter().find(|a| !used.contains(a)) else {
            return Err(Error::PoolExhausted {
                pool: pool.len(),
                context: "the abstraction layers of a determinization step".into(),
            });
        };
        Some(epsilon_bar_at(s, fresh))
    } else {
        debug_assert!(!s.iter().any(|v| matches!(v, FValue::Bind(_))));
        None
    };

    let mut free_succ: BTreeMap<Name, SuppSet<X>> =
        pool.iter().map(|&a| (a, SuppSet::empty())).collect();
    let mut accept = false;
    for v in s.iter() {
        match v {
            FValue::Unit => accept = true,
            FValue::Pair(a, x) => {
                if let Some(succ) = free_succ.get_mut(a) {
                    succ.insert(x.clone());
                }
            }
            FValue::Bind(_) => {}
        }
    }
    Ok(GValue { accept, free_succ, bar_succ })
}

/// The binding component of [`epsilon`] at an explicit fresh atom; exposed
/// so tests can compare two fresh choices.
pub fn epsilon_bar_at<X: Nominal + Ord + Clone>(
    s: &SuppSet<FValue<X>>,
    fresh: Name,
) -> Abs<SuppSet<X>> {
    let mut body = SuppSet::empty();
    for v in s.iter() {
        if let FValue::Bind(abs) = v {
            body.insert(abs.concretion(fresh).expect("fresh concretion"));
        }
    }
    Abs::new(fresh, body)
}

/// Turns a set of abstractions into an abstraction of a set by reading all
/// members at a shared fresh atom: the inverse of
/// [`rho_abs`](crate::kleisli::rho_abs) on representable values.
pub fn psi_abs<X: Nominal + Ord + Clone>(s: &SuppSet<Abs<X>>) -> Abs<SuppSet<X>> {
    let fresh = least_fresh(s);
    Abs::new(fresh, s.map(|abs| abs.concretion(fresh).expect("fresh concretion")))
}

/// The step structure lifted to sets of steps: acceptance is disjunction,
/// successors are collected pointwise as sets-of-sets, and the binding
/// components are read at a shared fresh atom. Every member must carry a
/// binding component.
pub fn rho_g<S: Nominal + Ord + Clone>(
    t: &SuppSet<GValue<S>>,
    pool: &[Name],
) -> Result<GValue<SuppSet<S>>, Error> {
    let mut used = std::collections::BTreeSet::new();
    for gv in t.iter() {
        match &gv.bar_succ {
            Some(abs) => used.extend(abs.support()),
            None => {
                return Err(Error::CarrierMismatch(
                    "a step without a binding component in a binding-step set".into(),
                ))
            }
        }
    }
    let Some(&fresh) = pool.iter().find(|a| !used.contains(a)) else {
        return Err(Error::PoolExhausted {
            pool: pool.len(),
            context: "the binding components of a step set".into(),
        });
    };

    let accept = t.iter().any(|gv| gv.accept);
    let mut free_succ: BTreeMap<Name, SuppSet<S>> =
        pool.iter().map(|&a| (a, SuppSet::empty())).collect();
    let mut bar_body = SuppSet::empty();
    for gv in t.iter() {
        for (&a, succ) in &gv.free_succ {
            if let Some(slot) = free_succ.get_mut(&a) {
                slot.insert(succ.clone());
            }
        }
        let abs = gv.bar_succ.as_ref().expect("checked above");
        bar_body.insert(abs.concretion(fresh).expect("fresh concretion"));
    }
    Ok(GValue { accept, free_succ, bar_succ: Some(Abs::new(fresh, bar_body)) })
}

/// The multiplication of the powerset monad applied under the step functor:
/// flattens doubly-nested successors.
pub fn g_mult<X: Nominal + Ord + Clone>(gv: GValue<SuppSet<SuppSet<X>>>) -> GValue<SuppSet<X>> {
    GValue {
        accept: gv.accept,
        free_succ: gv.free_succ.into_iter().map(|(a, s)| (a, s.mult())).collect(),
        bar_succ: gv.bar_succ.map(|abs| Abs::new(abs.binder(), abs.body().clone().mult())),
    }
}

/// Both composite paths of the first compatibility square between the
/// extension transformation and the Kleisli-side distributive law:
/// distribute-then-flatten-then-extend versus extend-then-flatten.
pub fn eps_left_square<X: Nominal + Ord + Clone>(
    input: &SuppSet<FValue<SuppSet<X>>>,
    pool: &[Name],
) -> Result<SquarePaths<X>, Error> {
    let distributed: SuppSet<SuppSet<FValue<X>>> = input.map(crate::kleisli::lambda_f);
    let path1 = epsilon(&distributed.mult(), pool, true)?;
    let path2 = g_mult(epsilon(input, pool, true)?);
    Ok((path1, path2))
}

/// Both composite paths of the second compatibility square: flatten-then-
/// extend versus extend-each-then-lift-then-flatten.
pub fn eps_right_square<X: Nominal + Ord + Clone>(
    input: &SuppSet<SuppSet<FValue<X>>>,
    pool: &[Name],
) -> Result<SquarePaths<X>, Error> {
    let path1 = epsilon(&input.clone().mult(), pool, true)?;
    let mut stepped: SuppSet<GValue<SuppSet<X>>> = SuppSet::empty();
    for s in input.iter() {
        stepped.insert(epsilon(s, pool, true)?);
    }
    let path2 = g_mult(rho_g(&stepped, pool)?);
    Ok((path1, path2))
}

/// Lazy generalized determinization of one automaton: macro-states are
/// created on demand while unfolding, and the languages reached from each
/// (macro-state, depth) pair are memoized. The cache is a plain
/// deterministic memo table; queries are pure.
pub struct Determinizer<'a> {
    automaton: &'a ConcreteAutomaton,
    coalg: KleisliMap<State, FValue<State>>,
    memo: BTreeMap<(MacroState, usize), LangApprox>,
}

impl<'a> Determinizer<'a> {
    pub fn new(automaton: &'a ConcreteAutomaton) -> Determinizer<'a> {
        Determinizer { automaton, coalg: coalgebra_of(automaton), memo: BTreeMap::new() }
    }

    /// One determinization step: the extension transformation applied to
    /// the union of the member coalgebra outputs.
    pub fn step(&self, s: &MacroState) -> Result<GValue<MacroState>, Error> {
        let mut flat = SuppSet::empty();
        for q in s.iter() {
            flat = flat.union(self.coalg.get(q)?.clone());
        }
        epsilon(&flat, &self.automaton.pool, self.automaton.kind == AutomatonKind::Rnna)
    }

    /// The language of words of length at most `depth` reaching acceptance
    /// from the macro-state `s`, by unfolding [`Self::step`].
    pub fn lang(&mut self, s: &MacroState, depth: usize) -> Result<LangApprox, Error> {
        if let Some(hit) = self.memo.get(&(s.clone(), depth)) {
            return Ok(hit.clone());
        }
        let gv = self.step(s)?;
        let mut out = LangApprox::new(self.automaton.lang_kind(), depth);
        if gv.accept {
            out.insert(&crate::barlang::BarString::empty()).expect("empty word");
        }
        if depth > 0 {
            for (&a, succ) in &gv.free_succ {
                if succ.is_empty() {
                    continue;
                }
                let sub = self.lang(succ, depth - 1)?;
                if sub.eps() {
                    out.insert(&crate::barlang::BarString::new(vec![Letter::Free(a)]))
                        .expect("within depth");
                }
                for w in sub.words() {
                    out.insert(&w.as_bar_string().prepend(Letter::Free(a))).expect("within depth");
                }
            }
            if let Some(abs) = &gv.bar_succ {
                let binder = abs.binder();
                let sub = self.lang(&abs.body().clone(), depth - 1)?;
                if sub.eps() {
                    out.insert(&crate::barlang::BarString::new(vec![Letter::Bar(binder)]))
                        .expect("within depth");
                }
                for w in sub.words() {
                    out.insert(&w.as_bar_string().prepend(Letter::Bar(binder)))
                        .expect("within depth");
                }
            }
        }
        self.memo.insert((s.clone(), depth), out.clone());
        Ok(out)
    }
}

/// The coalgebraic language of a single state: unfold the determinization
/// from the singleton macro-state.
pub fn lang_semantics(a: &ConcreteAutomaton, q: &State, depth: usize) -> Result<LangApprox, Error> {
    if !a.states.contains(q) {
        return Err(Error::UnknownState(q.to_string()));
    }
    Determinizer::new(a).lang(&SuppSet::unit(q.clone()), depth)
}

/// Checks that determinized language semantics at depth `d` equals the
/// `d+1`-st trace iterate for every state. Returns mismatch descriptions.
pub fn check_relation(a: &ConcreteAutomaton, depth: usize) -> Result<Vec<String>, Error> {
    check_relation_sides(a, a, depth)
}

/// The two semantics computed against possibly different automata, so
/// harness tests can inject a defect into one side only.
pub fn check_relation_sides(
    em_side: &ConcreteAutomaton,
    kl_side: &ConcreteAutomaton,
    depth: usize,
) -> Result<Vec<String>, Error> {
    let tr = trace_iterate(kl_side, depth + 1)?;
    let mut det = Determinizer::new(em_side);
    let mut mismatches = Vec::new();
    for q in &em_side.states {
        let em = det.lang(&SuppSet::unit(q.clone()), depth)?;
        let kl = trace_language(kl_side, &tr, q, depth)?;
        if em != kl {
            mismatches.push(format!("state {q}: determinized {em} != trace {kl}"));
        }
    }
    Ok(mismatches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{expand, fixtures, parse_spec};
    use crate::barlang::BarString;
    use crate::kleisli::rho_abs;

    fn n(i: u32) -> Name {
        Name(i)
    }

    fn ex(text: &str, pool: usize) -> ConcreteAutomaton {
        expand(&parse_spec(text).unwrap(), pool).unwrap()
    }

    fn state(text: &str) -> State {
        State::parse(text).unwrap()
    }

    #[test]
    fn epsilon_clauses() {
        let pool: Vec<Name> = (0..2).map(n).collect();
        // {*} accepts with empty successors
        let s: SuppSet<FValue<Name>> = SuppSet::unit(FValue::Unit);
        let gv = epsilon(&s, &pool, true).unwrap();
        assert!(gv.accept);
        assert!(gv.free_succ.values().all(|s| s.is_empty()));
        assert!(gv.bar_succ.unwrap().body().is_empty());

        // pairs land in their letter's slot
        let s: SuppSet<FValue<Name>> =
            [FValue::Pair(n(0), n(5)), FValue::Pair(n(1), n(6))].into_iter().collect();
        let gv = epsilon(&s, &pool, false).unwrap();
        assert!(!gv.accept);
        assert_eq!(gv.free_succ[&n(0)], SuppSet::unit(n(5)));
        assert_eq!(gv.free_succ[&n(1)], SuppSet::unit(n(6)));
        assert_eq!(gv.bar_succ, None);
    }

    #[test]
    fn epsilon_bar_is_fresh_choice_independent() {
        let q1 = |a: u32| state(&format!("q1({})", Name(a)));
        let s: SuppSet<FValue<State>> =
            [FValue::Bind(Abs::new(n(0), q1(0))), FValue::Bind(Abs::new(n(1), state("q2")))]
                .into_iter()
                .collect();
        let via2 = epsilon_bar_at(&s, n(2));
        let via5 = epsilon_bar_at(&s, n(5));
        assert_eq!(via2, via5);
        let expected: SuppSet<State> = [q1(2), state("q2")].into_iter().collect();
        assert_eq!(via2, Abs::new(n(2), expected));
    }

    #[test]
    fn psi_and_rho_invert_each_other() {
        let sets: Vec<SuppSet<Abs<Name>>> = vec![
            SuppSet::empty(),
            SuppSet::unit(Abs::new(n(0), n(0))),
            [Abs::new(n(0), n(0)), Abs::new(n(0), n(1)), Abs::new(n(2), n(1))]
                .into_iter()
                .collect(),
        ];
        for s in sets {
            assert_eq!(rho_abs(&psi_abs(&s)), s, "rho . psi = id on {s}");
        }
        let abs_sets: Vec<Abs<SuppSet<Name>>> = vec![
            Abs::new(n(0), SuppSet::empty()),
            Abs::new(n(0), [n(0), n(1)].into_iter().collect()),
            Abs::new(n(3), [n(3)].into_iter().collect()),
        ];
        for abs in abs_sets {
            assert_eq!(psi_abs(&rho_abs(&abs)), abs, "psi . rho = id on {abs}");
        }
        // {<a>a} reads at a fresh atom but stays the same abstraction
        let s = SuppSet::unit(Abs::new(n(0), n(0)));
        assert_eq!(psi_abs(&s), Abs::new(n(0), SuppSet::unit(n(0))));
    }

    #[test]
    fn determinize_step_examples() {
        let a1 = ex(fixtures::EX1, 2);
        let det = Determinizer::new(&a1);
        let gv = det.step(&SuppSet::unit(state("q2"))).unwrap();
        assert!(gv.accept);
        assert!(gv.free_succ.values().all(|s| s.is_empty()));
        assert_eq!(gv.bar_succ, None);

        let gv = det.step(&SuppSet::unit(state("q0"))).unwrap();
        assert!(!gv.accept);
        assert_eq!(gv.free_succ[&n(0)], SuppSet::unit(state("q1(a)")));
        assert_eq!(gv.free_succ[&n(1)], SuppSet::unit(state("q1(b)")));

        let a2 = ex(fixtures::EX2, 2);
        let det = Determinizer::new(&a2);
        let gv = det.step(&SuppSet::unit(state("q0"))).unwrap();
        let bar = gv.bar_succ.unwrap();
        assert_eq!(bar, Abs::new(n(1), SuppSet::unit(state("q1(b)"))));
    }

    #[test]
    fn lang_semantics_matches_the_fixture_languages() {
        let a1 = ex(fixtures::EX1, 3);
        let l = lang_semantics(&a1, &state("q0"), 3).unwrap();
        assert_eq!(l.rendered_words(), ["aa", "bb", "cc"]);
        assert!(!l.eps());

        let a2 = ex(fixtures::EX2, 3);
        let l = lang_semantics(&a2, &state("q0"), 2).unwrap();
        assert_eq!(l.rendered_words(), ["|aa"]);

        let a3 = ex(fixtures::EX3, 3);
        let l = lang_semantics(&a3, &state("q0"), 1).unwrap();
        assert_eq!(l.rendered_words(), ["|a"]);
    }

    #[test]
    fn macro_language_is_the_union_of_member_languages() {
        let a = ex(fixtures::EX2, 3);
        let mut det = Determinizer::new(&a);
        let all: MacroState = [state("q0"), state("q2")].into_iter().collect();
        let combined = det.lang(&all, 2).unwrap();
        let from_q0 = det.lang(&SuppSet::unit(state("q0")), 2).unwrap();
        let from_q2 = det.lang(&SuppSet::unit(state("q2")), 2).unwrap();
        assert_eq!(combined.eps(), from_q0.eps() || from_q2.eps());
        let mut union: Vec<String> = from_q0.rendered_words();
        union.extend(from_q2.rendered_words());
        union.sort();
        union.dedup();
        let mut got = combined.rendered_words();
        got.sort();
        assert_eq!(got, union);
    }

    #[test]
    fn language_semantics_agrees_with_the_trace_iterates() {
        for (text, pool) in [(fixtures::EX1, 4), (fixtures::EX2, 4), (fixtures::EX3, 4)] {
            let a = ex(text, pool);
            assert_eq!(check_relation(&a, 3).unwrap(), Vec::<String>::new());
        }
    }

    #[test]
    fn relation_check_detects_an_injected_defect() {
        let a = ex(fixtures::EX1, 3);
        let mut broken = a.clone();
        let victim = broken.free_trans.iter().next().unwrap().clone();
        broken.free_trans.remove(&victim);
        assert!(!check_relation_sides(&broken, &a, 2).unwrap().is_empty());
    }

    #[test]
    fn unfolding_matches_the_language_derivatives() {
        // one determinization step followed by language-at-depth-1 agrees
        // with the derivative structure of the language at depth 2
        let a = ex(fixtures::EX2, 3);
        let q0 = state("q0");
        let lang = lang_semantics(&a, &q0, 2).unwrap();
        let tau = lang.tau(&a.pool);
        let mut det = Determinizer::new(&a);
        let gv = det.step(&SuppSet::unit(q0)).unwrap();
        assert_eq!(tau.eps, gv.accept);
        for &atom in &a.pool {
            let via_det = det.lang(&gv.free_succ[&atom], 1).unwrap();
            assert_eq!(tau.free[&atom], via_det, "free derivative at {atom}");
        }
        let bar = gv.bar_succ.unwrap();
        let via_det = Abs::new(bar.binder(), det.lang(bar.body(), 1).unwrap());
        assert_eq!(tau.bar.unwrap(), via_det);
    }

    #[test]
    fn word_membership_via_the_determinized_system() {
        let a = ex(fixtures::EX2, 3);
        let l = lang_semantics(&a, &state("q0"), 2).unwrap();
        assert!(l.member(&BarString::parse("|bb").unwrap()));
        assert!(!l.member(&BarString::parse("|ab").unwrap()));
    }

    #[test]
    fn extension_squares_on_degenerate_inputs() {
        let pool: Vec<Name> = (0..3).map(n).collect();
        // empty input: both paths give the empty step
        let empty: SuppSet<FValue<SuppSet<Name>>> = SuppSet::empty();
        let (p1, p2) = eps_left_square(&empty, &pool).unwrap();
        assert_eq!(p1, p2);
        assert!(!p1.accept);
        let empty2: SuppSet<SuppSet<FValue<Name>>> = SuppSet::empty();
        let (p1, p2) = eps_right_square(&empty2, &pool).unwrap();
        assert_eq!(p1, p2);

        // a singleton termination layer nested once
        let unit_once: SuppSet<SuppSet<FValue<Name>>> = SuppSet::unit(SuppSet::unit(FValue::Unit));
        let (p1, p2) = eps_right_square(&unit_once, &pool).unwrap();
        assert_eq!(p1, p2);
        assert!(p1.accept);
    }
}
