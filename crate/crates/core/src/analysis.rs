//! The instantiation preorder, decided by matching, and descending chains
//! of unifiers for `X ⊓ ∃r.Y ≡? ∃r.Y`.
//!
//! `is_instance(s, t, vars)` means `s ≤• t`: some `λ` gives
//! `t(X) ≡ λ(s(X))` for every `X` in `vars`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::guess::Outcome;
use crate::problem::{Equation, FreshNames, UnificationProblem};
use crate::solve::{solve, Algorithm, SolveConfig};
use crate::substitution::{is_unifier, Substitution};
use crate::subsumption::{equivalent, reduce};
use crate::symbol::{ConceptName, Role, RESERVED_PREFIX};
use crate::term::Concept;

/// Default node budget for a single matching problem.
pub const MATCH_BUDGET: u64 = 1_000_000;

/// `s ≤• t` over `vars`. Variables occurring in the images of `t` are held
/// fixed; those in the images of `s` are the unknowns of the matcher.
pub fn is_instance(s: &Substitution, t: &Substitution, vars: &BTreeSet<ConceptName>) -> Result<bool> {
    is_instance_with_budget(s, t, vars, Some(MATCH_BUDGET))
}

pub fn is_instance_with_budget(
    s: &Substitution,
    t: &Substitution,
    vars: &BTreeSet<ConceptName>,
    budget: Option<u64>,
) -> Result<bool> {
    let mut frozen: BTreeMap<ConceptName, Concept> = BTreeMap::new();
    let mut equations = Vec::new();
    for x in vars {
        let target = t.expanded_image(x).replace_names(&mut |n| {
            n.is_variable().then(|| {
                frozen
                    .entry(n.clone())
                    .or_insert_with(|| Concept::constant(&format!("{}_{}", RESERVED_PREFIX, n.symbol)))
                    .clone()
            })
        });
        equations.push(Equation::new(s.expanded_image(x), target));
    }
    let g = UnificationProblem::new(equations)?;
    if g.variables().is_empty() {
        return Ok(g.equations().iter().all(|e| equivalent(&e.lhs, &e.rhs)));
    }
    let cfg = SolveConfig { algorithm: Algorithm::Goal, max_nodes: budget, ..SolveConfig::default() };
    match solve(&g, &cfg)?.outcome {
        Outcome::Sat(_) => Ok(true),
        Outcome::Unsat => Ok(false),
        Outcome::BudgetExceeded => Err(Error::BudgetExceeded),
    }
}

/// A chain `σ_0, σ_1, ...` of unifiers with `σ_{i+1} ≤• σ_i`.
#[derive(Clone, Debug)]
pub struct UnifierChain {
    pub problem: UnificationProblem,
    pub steps: Vec<Substitution>,
    /// The fresh variable introduced by each step after the first.
    pub fresh_vars: Vec<ConceptName>,
    /// For each step after the first, a `λ` with `λ(σ_{i+1}) ≡ σ_i`.
    pub witnesses: Vec<Option<Substitution>>,
}

impl UnifierChain {
    pub fn variables(&self) -> &BTreeSet<ConceptName> {
        self.problem.variables()
    }
}

/// `{X ⊓ ∃r.Y ≡? ∃r.Y}`.
pub fn type_zero_problem() -> UnificationProblem {
    let y = Concept::variable("Y");
    UnificationProblem::from_pairs([(Concept::and([Concept::variable("X"), Concept::some("r", y.clone())]), Concept::some("r", y))])
        .expect("well-formed")
}

/// The chain `σ_0, ..., σ_k` starting from `X ↦ ∃r.A, Y ↦ A`, where each
/// step maps `X ↦ C ⊓ ∃r.Z` and `Y ↦ D ⊓ Z` for the previous `C, D` and a
/// fresh `Z`.
pub fn type_zero_chain(k: usize) -> UnifierChain {
    let problem = type_zero_problem();
    let (x, y) = (ConceptName::variable("X"), ConceptName::variable("Y"));
    let a = Concept::constant("A");
    let first = Substitution::from_pairs([(x.clone(), Concept::some("r", a.clone())), (y.clone(), a)]);
    let mut names = FreshNames::avoiding(problem.variables().iter().chain(problem.constants()));
    let mut chain = UnifierChain { problem, steps: vec![first], fresh_vars: Vec::new(), witnesses: Vec::new() };
    for _ in 0..k {
        let z = names.fresh();
        let (next, lambda) = hat(chain.steps.last().unwrap(), &x, &y, &z)
            .expect("every step maps X to a conjunction of existential restrictions");
        chain.steps.push(next);
        chain.fresh_vars.push(z);
        chain.witnesses.push(Some(lambda));
    }
    chain
}

/// One step of the construction, with its witness `Z ↦ C_1`.
fn hat(s: &Substitution, x: &ConceptName, y: &ConceptName, z: &ConceptName) -> Option<(Substitution, Substitution)> {
    let c = reduce(&s.expanded_image(x));
    let d = reduce(&s.expanded_image(y));
    let r = Role::new("r");
    let c1 = match c.top_level().first()? {
        Concept::Exists(role, filler) if *role == r => (**filler).clone(),
        _ => return None,
    };
    let zc = Concept::Name(z.clone());
    let next = Substitution::from_pairs([
        (x.clone(), Concept::and([c, Concept::exists(r, zc.clone())])),
        (y.clone(), Concept::and([d, zc])),
    ]);
    Some((next, Substitution::from_pairs([(z.clone(), c1)])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    /// The matcher ran out of budget.
    Inconclusive,
}

impl CheckOutcome {
    fn tag(self) -> &'static str {
        match self {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Fail => "fail",
            CheckOutcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obligation {
    /// `σ_i` unifies the problem.
    Unifier(usize),
    /// `σ_{i+1} ≤• σ_i`.
    Instance(usize),
    /// not `σ_i ≤• σ_{i+1}`.
    NotInstance(usize),
}

#[derive(Clone, Debug)]
pub struct ChainCheck {
    pub obligation: Obligation,
    pub outcome: CheckOutcome,
    pub method: &'static str,
}

#[derive(Clone, Debug, Default)]
pub struct ChainReport {
    pub checks: Vec<ChainCheck>,
    pub steps: Vec<String>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == CheckOutcome::Pass)
    }

    pub fn inconclusive(&self) -> bool {
        self.checks.iter().any(|c| c.outcome == CheckOutcome::Inconclusive)
    }

    /// One `key=value` record per line.
    pub fn key_value(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(out, "step={} substitution={}", i, s).unwrap();
        }
        for c in &self.checks {
            let (kind, i, j) = match c.obligation {
                Obligation::Unifier(i) => ("unifier", i, i),
                Obligation::Instance(i) => ("instance", i + 1, i),
                Obligation::NotInstance(i) => ("not_instance", i, i + 1),
            };
            writeln!(out, "check={} lhs={} rhs={} method={} result={}", kind, i, j, c.method, c.outcome.tag()).unwrap();
        }
        writeln!(out, "verdict={}", if self.passed() { "pass" } else if self.inconclusive() { "inconclusive" } else { "fail" })
            .unwrap();
        out
    }
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "σ{} = {}", i, s)?;
        }
        for c in &self.checks {
            let what = match c.obligation {
                Obligation::Unifier(i) => format!("σ{} is a unifier", i),
                Obligation::Instance(i) => format!("σ{} ≤• σ{}", i + 1, i),
                Obligation::NotInstance(i) => format!("σ{} ≤• σ{} refuted", i, i + 1),
            };
            writeln!(f, "{:<28} {:<12} [{}]", what, c.outcome.tag(), c.method)?;
        }
        let verdict = if self.passed() { "verified" } else if self.inconclusive() { "inconclusive" } else { "FAILED" };
        write!(f, "chain of length {}: {}", self.steps.len(), verdict)
    }
}

fn show(s: &Substitution, vars: &BTreeSet<ConceptName>) -> String {
    let parts: Vec<String> = vars.iter().map(|x| format!("{} ↦ {}", x, s.expanded_image(x).dl())).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn verify_chain(c: &UnifierChain) -> ChainReport {
    verify_chain_with_budget(c, Some(MATCH_BUDGET))
}

pub fn verify_chain_with_budget(c: &UnifierChain, budget: Option<u64>) -> ChainReport {
    let vars = c.variables();
    let mut report = ChainReport { checks: Vec::new(), steps: c.steps.iter().map(|s| show(s, vars)).collect() };
    for (i, s) in c.steps.iter().enumerate() {
        let ok = is_unifier(s, &c.problem);
        report.checks.push(ChainCheck {
            obligation: Obligation::Unifier(i),
            outcome: if ok { CheckOutcome::Pass } else { CheckOutcome::Fail },
            method: "equivalence",
        });
    }
    let verdict = |r: Result<bool>, want: bool| match r {
        Ok(v) if v == want => CheckOutcome::Pass,
        Ok(_) => CheckOutcome::Fail,
        Err(_) => CheckOutcome::Inconclusive,
    };
    for i in 0..c.steps.len().saturating_sub(1) {
        let (prev, next) = (&c.steps[i], &c.steps[i + 1]);
        let witnessed = c.witnesses.get(i).and_then(Option::as_ref).is_some_and(|lambda| {
            vars.iter().all(|x| equivalent(&lambda.apply(&next.expanded_image(x)), &prev.expanded_image(x)))
        });
        let (outcome, method) = if witnessed {
            (CheckOutcome::Pass, "witness")
        } else {
            (verdict(is_instance_with_budget(next, prev, vars, budget), true), "matcher")
        };
        report.checks.push(ChainCheck { obligation: Obligation::Instance(i), outcome, method });
        report.checks.push(ChainCheck {
            obligation: Obligation::NotInstance(i),
            outcome: verdict(is_instance_with_budget(prev, next, vars, budget), false),
            method: "matcher",
        });
    }
    report
}
