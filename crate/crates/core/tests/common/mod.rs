//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use el_unification::{expand, Atom, Concept, ConceptName, Definition, Equation, TBox, UnificationProblem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const CONSTANTS: [&str; 3] = ["A", "B", "C"];
pub const ROLES: [&str; 2] = ["r", "s"];
pub const VARIABLES: [&str; 3] = ["X", "Y", "Z"];

/// Random term of role depth at most `depth` over `A, B, C` and `r, s`.
pub fn term(rng: &mut ChaCha8Rng, depth: usize) -> Concept {
    term_over(rng, depth, &CONSTANTS, &[])
}

pub fn term_over(rng: &mut ChaCha8Rng, depth: usize, consts: &[&str], vars: &[&str]) -> Concept {
    let width = rng.gen_range(0..=3);
    Concept::and((0..width).map(|_| {
        let pick = rng.gen_range(0..10);
        if depth == 0 || pick < 5 {
            if !vars.is_empty() && rng.gen_bool(0.3) {
                Concept::variable(vars.choose(rng).unwrap())
            } else {
                Concept::constant(consts.choose(rng).unwrap())
            }
        } else {
            let filler = term_over(rng, depth - 1, consts, vars);
            Concept::some(ROLES.choose(rng).unwrap(), filler)
        }
    }))
}

/// A term subsuming `c`: some conjuncts dropped, fillers generalized.
pub fn generalize(rng: &mut ChaCha8Rng, c: &Concept) -> Concept {
    let mut kept = Vec::new();
    for a in c.top_level() {
        if !rng.gen_bool(0.7) {
            continue;
        }
        kept.push(match a {
            Concept::Exists(r, f) => Concept::exists(r.clone(), generalize(rng, f)),
            other => other.clone(),
        });
    }
    Concept::and(kept)
}

/// A pair biased towards positive subsumption.
pub fn term_pair(rng: &mut ChaCha8Rng, depth: usize) -> (Concept, Concept) {
    let c = term(rng, depth);
    match rng.gen_range(0..3) {
        0 => (c, term(rng, depth)),
        1 => {
            let d = generalize(rng, &c);
            (c, d)
        }
        _ => {
            let extra = term(rng, depth);
            (Concept::and([c.clone(), extra]), c)
        }
    }
}

fn flat_atom_pool(consts: &[&str], roles: &[&str], vars: &[&str]) -> Vec<Concept> {
    let mut pool: Vec<Concept> = consts.iter().map(|c| Concept::constant(c)).collect();
    for r in roles {
        pool.push(Concept::some(r, Concept::top()));
        for c in consts {
            pool.push(Concept::some(r, Concept::constant(c)));
        }
        for v in vars {
            pool.push(Concept::some(r, Concept::variable(v)));
        }
    }
    pool
}

/// Random flat problem with at most 3 variables, 2 roles, 3 constants,
/// 6 non-variable atoms and 4 equations.
pub fn flat_problem(rng: &mut ChaCha8Rng) -> UnificationProblem {
    let nv = rng.gen_range(1..=3);
    let nc = rng.gen_range(1..=3);
    let nr = rng.gen_range(1..=2);
    let vars = &VARIABLES[..nv];
    let consts = &CONSTANTS[..nc];
    let roles = &ROLES[..nr];
    let mut pool = flat_atom_pool(consts, roles, vars);
    pool.shuffle(rng);
    let mut chosen: Vec<Concept> = Vec::new();
    let mut nonvar: BTreeSet<Atom> = BTreeSet::new();
    let budget = rng.gen_range(1..=6);
    for a in pool {
        let mut next = nonvar.clone();
        next.extend(a.atoms().into_iter().filter(|x| x.as_variable().is_none()));
        if next.len() <= budget {
            nonvar = next;
            chosen.push(a);
        }
    }
    let neq = rng.gen_range(1..=4);
    let side = |rng: &mut ChaCha8Rng| {
        let mut parts = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            parts.push(Concept::variable(vars.choose(rng).unwrap()));
        }
        if !chosen.is_empty() {
            for _ in 0..rng.gen_range(0..=3) {
                parts.push(chosen.choose(rng).unwrap().clone());
            }
        }
        Concept::and(parts)
    };
    let eqs = (0..neq).map(|_| Equation::new(side(rng), side(rng))).collect();
    UnificationProblem::new(eqs).unwrap()
}

/// Random acyclic TBox defining some of `D1, D2, D3` over primitive
/// constants; definitions only mention lower-numbered defined names
/// in reverse, so `D1` may use `D2`, `D3`.
pub fn acyclic_tbox(rng: &mut ChaCha8Rng) -> TBox {
    let n = rng.gen_range(0..=3);
    let names = ["D1", "D2", "D3"];
    let defs = (0..n)
        .map(|i| {
            let later: Vec<&str> = names[i + 1..n].to_vec();
            let mut pool: Vec<&str> = CONSTANTS.to_vec();
            pool.extend(later);
            let rhs = term_over(rng, 2, &pool, &[]);
            Definition::new(ConceptName::constant(names[i]), rhs)
        })
        .collect();
    TBox::acyclic(defs).unwrap()
}

/// A TBox defining up to three names over `A, B` and the variable `X`,
/// and a problem over `X, Y` that mentions the defined names.
pub fn tbox_problem(rng: &mut ChaCha8Rng) -> (TBox, UnificationProblem) {
    let names = ["D1", "D2", "D3"];
    let n = rng.gen_range(1..=3);
    let defs = (0..n)
        .map(|i| {
            let mut pool = vec!["A", "B"];
            pool.extend(&names[i + 1..n]);
            Definition::new(ConceptName::constant(names[i]), term_over(rng, 1, &pool, &["X"]))
        })
        .collect();
    let t = TBox::acyclic(defs).unwrap();
    let mut pool = vec!["A", "B"];
    pool.extend(&names[..n]);
    let eqs = (0..rng.gen_range(1..=2))
        .map(|_| Equation::new(term_over(rng, 1, &pool, &["X", "Y"]), term_over(rng, 1, &pool, &["Y"])))
        .collect();
    (t, UnificationProblem::new(eqs).unwrap())
}

pub fn expanded_problem(g: &UnificationProblem, t: &TBox) -> UnificationProblem {
    UnificationProblem::new(
        g.equations().iter().map(|e| Equation::new(expand(&e.lhs, t).unwrap(), expand(&e.rhs, t).unwrap())).collect(),
    )
    .unwrap()
}
