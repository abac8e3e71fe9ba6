//! Seeded random automaton descriptions for the law suites and the
//! acceptance checks: small orbit counts, small arities, and rules that
//! respect the side conditions of the chosen kind by construction.

use crate::rng::Rng;

use super::spec::{validate_spec, AutomatonKind, AutomatonSpec, OrbitDecl, Rule, RuleLetter};

const VAR_NAMES: [&str; 5] = ["x", "y", "z", "u", "v"];

/// A random description with at most three orbits of arity at most two.
/// The result always passes [`validate_spec`].
pub fn random_spec(kind: AutomatonKind, rng: &mut Rng) -> AutomatonSpec {
    let orbit_count = rng.range(1, 3);
    let mut orbits: Vec<OrbitDecl> = (0..orbit_count)
        .map(|i| OrbitDecl {
            id: format!("q{i}"),
            arity: rng.range(0, 2),
            is_final: rng.chance(1, 2),
        })
        .collect();
    if orbits.iter().all(|o| !o.is_final) {
        orbits.last_mut().expect("at least one orbit").is_final = true;
    }

    let mut rules = Vec::new();
    let rule_count = rng.range(2, 4);
    let mut attempts = 0;
    while rules.len() < rule_count && attempts < 40 {
        attempts += 1;
        if let Some(rule) = random_rule(kind, &orbits, rng) {
            rules.push(rule);
        }
    }

    let spec = AutomatonSpec { kind, name: "random".into(), orbits, rules };
    debug_assert!(validate_spec(&spec).is_empty());
    spec
}

fn random_rule(kind: AutomatonKind, orbits: &[OrbitDecl], rng: &mut Rng) -> Option<Rule> {
    let src = rng.pick(orbits);
    let src_vars: Vec<String> = VAR_NAMES[..src.arity].iter().map(|v| v.to_string()).collect();

    let bar = kind == AutomatonKind::Rnna && (src.arity == 0 || rng.chance(1, 2));
    let letter_var = if bar {
        // a binding letter may bind a register or a fresh atom
        if !src_vars.is_empty() && rng.chance(1, 3) {
            rng.pick(&src_vars).clone()
        } else {
            "z".to_string()
        }
    } else {
        match kind {
            // finite branching: a plain letter must come from the registers
            AutomatonKind::Rnna => {
                if src_vars.is_empty() {
                    return None;
                }
                rng.pick(&src_vars).clone()
            }
            AutomatonKind::Nofa => {
                if !src_vars.is_empty() && rng.chance(2, 3) {
                    rng.pick(&src_vars).clone()
                } else {
                    "z".to_string()
                }
            }
        }
    };

    // variables the target tuple may mention
    let mut allowed: Vec<String> = src_vars.clone();
    match kind {
        AutomatonKind::Rnna => {
            if bar && !allowed.contains(&letter_var) {
                allowed.push(letter_var.clone());
            }
        }
        AutomatonKind::Nofa => {
            if !allowed.contains(&letter_var) {
                allowed.push(letter_var.clone());
            }
            // one extra fresh register keeps branching factors small
            allowed.push("u".to_string());
        }
    }

    let feasible: Vec<&OrbitDecl> = orbits.iter().filter(|o| o.arity <= allowed.len()).collect();
    if feasible.is_empty() {
        return None;
    }
    let tgt = (*rng.pick(&feasible)).clone();
    let mut pool = allowed;
    let mut tgt_vars = Vec::new();
    for _ in 0..tgt.arity {
        let i = rng.below(pool.len());
        tgt_vars.push(pool.remove(i));
    }

    let letter = if bar { RuleLetter::Bar(letter_var) } else { RuleLetter::Free(letter_var) };
    Some(Rule { src_orbit: src.id.clone(), src_vars, letter, tgt_orbit: tgt.id, tgt_vars })
}
