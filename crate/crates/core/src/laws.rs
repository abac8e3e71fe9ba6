//! Executable law suites: the equations the semantics constructions rest on,
//! evaluated on seeded random inputs. The CLI `selfcheck` command and the
//! acceptance tests both run these.

use crate::automata::{expand, random_spec, AutomatonKind};
use crate::barlang::Letter;
use crate::em::{eps_left_square, eps_right_square, psi_abs};
use crate::kleisli::{
    check_trace_square, fbar_apply, fvalue_map, kleisli_compose, lambda_f, rho_abs, FValue,
    KleisliMap,
};
use crate::nominal::{comm_pair, costrength, strength, Abs, Name, Nominal, Perm, SuppSet};
use crate::rng::Rng;

/// The outcome of one suite: how many cases ran and what failed.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SelfcheckReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteResult>,
}

impl SelfcheckReport {
    pub fn all_green(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// Runs every suite with `cases` random inputs each.
pub fn run_selfcheck(seed: u64, cases: usize) -> SelfcheckReport {
    run_selfcheck_impl(seed, cases, false)
}

/// Runs the suites with a deliberate defect in one comparison, proving the
/// harness can fail.
pub fn run_selfcheck_with_defect(seed: u64, cases: usize) -> SelfcheckReport {
    run_selfcheck_impl(seed, cases, true)
}

fn run_selfcheck_impl(seed: u64, cases: usize, inject_defect: bool) -> SelfcheckReport {
    let suites = vec![
        monad_laws(seed, cases, inject_defect),
        lambda_laws(seed.wrapping_add(1), cases),
        rho_laws(seed.wrapping_add(2), cases),
        psi_laws(seed.wrapping_add(3), cases),
        eps_laws(seed.wrapping_add(4), cases),
        lattice_laws(seed.wrapping_add(5), cases),
        trace_vs_determinization(seed.wrapping_add(6), cases),
    ];
    SelfcheckReport { seed, cases, suites }
}

const LAW_POOL: usize = 3;

fn pool_names(k: usize) -> Vec<Name> {
    (0..k as u32).map(Name).collect()
}

fn rand_name(rng: &mut Rng) -> Name {
    Name(rng.below(LAW_POOL) as u32)
}

fn rand_name_set(rng: &mut Rng) -> SuppSet<Name> {
    let size = rng.below(3);
    (0..size).map(|_| rand_name(rng)).collect()
}

fn rand_nested(rng: &mut Rng) -> SuppSet<SuppSet<Name>> {
    (0..rng.below(3)).map(|_| rand_name_set(rng)).collect()
}

fn rand_fvalue(rng: &mut Rng) -> FValue<Name> {
    match rng.below(4) {
        0 => FValue::Unit,
        1 | 2 => FValue::Pair(rand_name(rng), rand_name(rng)),
        _ => FValue::Bind(Abs::new(rand_name(rng), rand_name(rng))),
    }
}

fn rand_fvalue_set(rng: &mut Rng) -> SuppSet<FValue<Name>> {
    (0..rng.below(3)).map(|_| rand_fvalue(rng)).collect()
}

fn record(failures: &mut Vec<String>, case: usize, msg: String) {
    if failures.len() < 5 {
        failures.push(format!("case {case}: {msg}"));
    } else if failures.len() == 5 {
        failures.push("...".into());
    }
}

/// Unit and associativity laws of the finite powerset monad, plus the two
/// commutativity-diagram paths collapsing to the cartesian product.
fn monad_laws(seed: u64, cases: usize, inject_defect: bool) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let s = rand_name_set(&mut rng);
        if SuppSet::unit(s.clone()).mult() != s {
            record(&mut failures, case, format!("left unit law failed on {s}"));
        }
        if s.map(|x| SuppSet::unit(*x)).mult() != s {
            record(&mut failures, case, format!("right unit law failed on {s}"));
        }

        let sss: SuppSet<SuppSet<SuppSet<Name>>> =
            (0..rng.below(3)).map(|_| rand_nested(&mut rng)).collect();
        let mut via_outer = sss.clone().mult().mult();
        let via_inner = sss.clone().map(|ss| ss.clone().mult()).mult();
        if inject_defect {
            // drop one element from one side to prove the harness can fail
            let min = via_outer.iter().next().copied();
            match min {
                Some(min) => {
                    via_outer = via_outer.into_iter().filter(|x| *x != min).collect();
                }
                None => via_outer.insert(Name(17)),
            }
        }
        if via_outer != via_inner {
            record(&mut failures, case, format!("associativity failed on {sss}"));
        }

        // commutativity: strength-then-costrength and the reverse agree
        let (u, v) = (rand_name_set(&mut rng), rand_name_set(&mut rng));
        let upper: SuppSet<(Name, Name)> = strength(&u, &v).map(|(s, y)| costrength(s, y)).mult();
        let lower: SuppSet<(Name, Name)> = costrength(&u, &v).map(|(x, s)| strength(x, s)).mult();
        let product = comm_pair(&u, &v);
        if upper != product || lower != product {
            record(&mut failures, case, format!("commutativity paths differ on {u}, {v}"));
        }
    }
    SuiteResult { name: "monad-laws", cases, failures }
}

/// The unit and multiplication squares making the transition-layer
/// distribution a distributive law over the monad.
fn lambda_laws(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let v = rand_fvalue(&mut rng);
        if lambda_f(&fvalue_map(&v, |x| SuppSet::unit(*x))) != SuppSet::unit(v.clone()) {
            record(&mut failures, case, format!("unit square failed on {v}"));
        }

        let nested: FValue<SuppSet<SuppSet<Name>>> = match rng.below(3) {
            0 => FValue::Unit,
            1 => FValue::Pair(rand_name(&mut rng), rand_nested(&mut rng)),
            _ => FValue::Bind(Abs::new(rand_name(&mut rng), rand_nested(&mut rng))),
        };
        let path1 = lambda_f(&fvalue_map(&nested, |ss| ss.clone().mult()));
        let path2: SuppSet<FValue<Name>> = lambda_f(&nested).map(lambda_f).mult();
        if path1 != path2 {
            record(&mut failures, case, format!("multiplication square failed on {nested}"));
        }
    }
    SuiteResult { name: "lambda-distributive-law", cases, failures }
}

/// The quotient square relating the pair distribution to the abstraction
/// distribution, plus representative independence and monotonicity.
fn rho_laws(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let a = rand_name(&mut rng);
        let s = rand_name_set(&mut rng);
        let via_lambda: SuppSet<Abs<Name>> =
            lambda_f(&FValue::Pair(a, s.clone())).map(|fv| match fv {
                FValue::Pair(b, x) => Abs::new(*b, *x),
                _ => unreachable!("pair distribution yields pairs"),
            });
        let via_rho = rho_abs(&Abs::new(a, s.clone()));
        if via_lambda != via_rho {
            record(&mut failures, case, format!("quotient square failed on <{a}>{s}"));
        }

        // the clause evaluated at two representatives of one abstraction
        let fresh = Name(LAW_POOL as u32 + rng.below(2) as u32);
        let swapped = s.act(&Perm::swap(a, fresh));
        let out1: SuppSet<Abs<Name>> = s.map(|x| Abs::new(a, *x));
        let out2: SuppSet<Abs<Name>> = swapped.map(|x| Abs::new(fresh, *x));
        if out1 != out2 {
            record(&mut failures, case, format!("representative dependence on <{a}>{s}"));
        }

        // local monotonicity
        let mut bigger = s.clone();
        bigger.insert(rand_name(&mut rng));
        if !rho_abs(&Abs::new(a, s.clone())).is_subset(&rho_abs(&Abs::new(a, bigger.clone()))) {
            record(&mut failures, case, format!("monotonicity failed on <{a}>{s}"));
        }
    }
    SuiteResult { name: "rho-quotient", cases, failures }
}

fn rand_abs_letter_set(rng: &mut Rng) -> SuppSet<Abs<Letter>> {
    (0..rng.below(4))
        .map(|_| {
            let body = if rng.chance(1, 2) {
                Letter::Free(rand_name(rng))
            } else {
                Letter::Bar(rand_name(rng))
            };
            Abs::new(rand_name(rng), body)
        })
        .collect()
}

/// Mutual inversion of the two abstraction/set distributions, and
/// naturality of the set-to-abstraction direction in the carrier.
fn psi_laws(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    let flip = |l: &Letter| match *l {
        Letter::Free(a) => Letter::Bar(a),
        Letter::Bar(a) => Letter::Free(a),
    };
    let collapse = |l: &Letter| Letter::Free(l.name());
    for case in 0..cases {
        let s: SuppSet<Abs<Name>> =
            (0..rng.below(4)).map(|_| Abs::new(rand_name(&mut rng), rand_name(&mut rng))).collect();
        if rho_abs(&psi_abs(&s)) != s {
            record(&mut failures, case, format!("rho . psi != id on {s}"));
        }

        let abs = Abs::new(rand_name(&mut rng), rand_name_set(&mut rng));
        if psi_abs(&rho_abs(&abs)) != abs {
            record(&mut failures, case, format!("psi . rho != id on {abs}"));
        }

        // naturality in the carrier for two equivariant maps
        let letters = rand_abs_letter_set(&mut rng);
        for (name, f) in [("flip", &flip as &dyn Fn(&Letter) -> Letter), ("collapse", &collapse)] {
            let mapped_first = psi_abs(&letters.map(|a| Abs::new(a.binder(), f(a.body()))));
            let psi_first = psi_abs(&letters);
            let mapped_after = Abs::new(psi_first.binder(), psi_first.body().map(f));
            if mapped_first != mapped_after {
                record(&mut failures, case, format!("naturality ({name}) failed on {letters}"));
            }
        }
    }
    SuiteResult { name: "psi-iso-naturality", cases, failures }
}

/// The two compatibility squares of the extension transformation against
/// the Kleisli and determinization-side distributions.
fn eps_laws(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    let pool = pool_names(LAW_POOL + 2);
    for case in 0..cases {
        let left_input: SuppSet<FValue<SuppSet<Name>>> = (0..rng.below(3))
            .map(|_| match rng.below(3) {
                0 => FValue::Unit,
                1 => FValue::Pair(rand_name(&mut rng), rand_name_set(&mut rng)),
                _ => FValue::Bind(Abs::new(rand_name(&mut rng), rand_name_set(&mut rng))),
            })
            .collect();
        match eps_left_square(&left_input, &pool) {
            Ok((p1, p2)) if p1 == p2 => {}
            Ok(_) => record(&mut failures, case, format!("left square failed on {left_input}")),
            Err(e) => record(&mut failures, case, format!("left square error: {e}")),
        }

        let right_input: SuppSet<SuppSet<FValue<Name>>> =
            (0..rng.below(3)).map(|_| rand_fvalue_set(&mut rng)).collect();
        match eps_right_square(&right_input, &pool) {
            Ok((p1, p2)) if p1 == p2 => {}
            Ok(_) => record(&mut failures, case, format!("right square failed on {right_input}")),
            Err(e) => record(&mut failures, case, format!("right square error: {e}")),
        }
    }
    SuiteResult { name: "epsilon-extension", cases, failures }
}

fn rand_kleisli(rng: &mut Rng, carrier: &[Name]) -> KleisliMap<Name, Name> {
    KleisliMap::from_fn(carrier.iter().copied(), |_| {
        carrier.iter().copied().filter(|_| rng.chance(1, 3)).collect()
    })
}

/// An equivariant endo-map on the pool: the image of each atom follows one
/// of the patterns closed under renaming.
fn rand_equivariant(rng: &mut Rng, carrier: &[Name]) -> KleisliMap<Name, Name> {
    let pattern = rng.below(4);
    KleisliMap::from_fn(carrier.iter().copied(), |&x| match pattern {
        0 => SuppSet::empty(),
        1 => SuppSet::unit(x),
        2 => carrier.iter().copied().collect(),
        _ => carrier.iter().copied().filter(|&y| y != x).collect(),
    })
}

/// Join as least upper bound, distribution of composition over joins on
/// both sides, left strictness of bottom, and closure of equivariant maps
/// under joins.
fn lattice_laws(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    let carrier = pool_names(LAW_POOL);
    for case in 0..cases {
        let f = rand_kleisli(&mut rng, &carrier);
        let g = rand_kleisli(&mut rng, &carrier);
        let h = rand_kleisli(&mut rng, &carrier);
        let join = f.join(&g).expect("shared carrier");
        if !f.leq(&join) || !g.leq(&join) {
            record(&mut failures, case, "join is not an upper bound".into());
        }
        let upper = join.join(&h).expect("shared carrier");
        if !join.leq(&upper) {
            record(&mut failures, case, "join exceeds an upper bound".into());
        }
        if f.join(&f).expect("shared carrier") != f {
            record(&mut failures, case, "join is not idempotent".into());
        }

        let left = kleisli_compose(&h, &join).expect("carriers align");
        let right = kleisli_compose(&h, &f)
            .expect("carriers align")
            .join(&kleisli_compose(&h, &g).expect("carriers align"))
            .expect("shared carrier");
        if left != right {
            record(&mut failures, case, "composition does not distribute on the right".into());
        }
        let left = kleisli_compose(&join, &h).expect("carriers align");
        let right = kleisli_compose(&f, &h)
            .expect("carriers align")
            .join(&kleisli_compose(&g, &h).expect("carriers align"))
            .expect("shared carrier");
        if left != right {
            record(&mut failures, case, "composition does not distribute on the left".into());
        }

        let bottom: KleisliMap<Name, Name> = KleisliMap::bottom(carrier.iter().copied());
        if kleisli_compose(&bottom, &f).expect("carriers align") != bottom {
            record(&mut failures, case, "bottom is not left strict".into());
        }

        let e1 = rand_equivariant(&mut rng, &carrier);
        let e2 = rand_equivariant(&mut rng, &carrier);
        if !e1.is_equivariant(&carrier) || !e2.is_equivariant(&carrier) {
            record(&mut failures, case, "equivariant generator broke".into());
        }
        if !e1.join(&e2).expect("shared carrier").is_equivariant(&carrier) {
            record(&mut failures, case, "equivariant maps not closed under join".into());
        }

        // the lifted functor action is monotone
        let small = rand_kleisli(&mut rng, &carrier);
        let big = small.join(&rand_kleisli(&mut rng, &carrier)).expect("shared carrier");
        let v = rand_fvalue(&mut rng);
        let on_small = fbar_apply(&small, &v).expect("carrier");
        let on_big = fbar_apply(&big, &v).expect("carrier");
        if !on_small.is_subset(&on_big) {
            record(&mut failures, case, format!("lifted action not monotone on {v}"));
        }
    }
    SuiteResult { name: "hom-lattice", cases, failures }
}

/// End-to-end agreement on random automata: the trace square commutes and
/// the determinized language equals the trace iterate.
fn trace_vs_determinization(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let kind = if case % 2 == 0 { AutomatonKind::Nofa } else { AutomatonKind::Rnna };
        let spec = random_spec(kind, &mut rng);
        let a = match expand(&spec, spec.auto_pool(2)) {
            Ok(a) => a,
            Err(e) => {
                record(&mut failures, case, format!("expansion failed: {e}"));
                continue;
            }
        };
        match check_trace_square(&a, 2) {
            Ok(mismatches) if mismatches.is_empty() => {}
            Ok(mismatches) => {
                record(&mut failures, case, format!("trace square: {}", mismatches[0]))
            }
            Err(e) => record(&mut failures, case, format!("trace square error: {e}")),
        }
        match crate::em::check_relation(&a, 2) {
            Ok(mismatches) if mismatches.is_empty() => {}
            Ok(mismatches) => {
                record(&mut failures, case, format!("semantics disagree: {}", mismatches[0]))
            }
            Err(e) => record(&mut failures, case, format!("relation check error: {e}")),
        }
    }
    SuiteResult { name: "trace-vs-determinization", cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_green_at_seed_zero() {
        let report = run_selfcheck(0, 40);
        for suite in &report.suites {
            assert!(suite.passed(), "{}: {:?}", suite.name, suite.failures);
            assert_eq!(suite.cases, 40);
        }
        assert!(report.all_green());
    }

    #[test]
    fn injected_defect_is_caught() {
        let report = run_selfcheck_with_defect(0, 40);
        assert!(!report.all_green());
    }

    #[test]
    fn zero_cases_is_a_vacuous_pass() {
        let report = run_selfcheck(0, 0);
        assert!(report.all_green());
        assert!(report.suites.iter().all(|s| s.cases == 0));
    }
}
