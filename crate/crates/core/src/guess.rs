//! Guess-and-test decision procedure for flat problems.
//!
//! Assignments `S_X` are enumerated deterministically: variables in term
//! order, and for each variable the subsets of non-variable atoms by
//! increasing cardinality, then lexicographically by atom order. Branches are
//! cut only when they provably fail: a dependency cycle, a top-level mismatch
//! once all top-level variables of an equation are fixed, or a failed
//! equivalence check once every variable an equation depends on is fixed.
//! Equivalence is decided modulo `T_σ`, so no image is ever expanded.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::problem::{FlatProblem, UnificationProblem};
use crate::substitution::{is_unifier, Substitution};
use crate::subsumption::{reduce, TBoxReasoner};
use crate::symbol::ConceptName;
use crate::tbox::{Definition, TBox};
use crate::term::{Atom, Concept};

#[derive(Clone, Debug)]
pub struct GuessConfig {
    /// Limit on the number of partial assignments visited.
    pub max_assignments: Option<u64>,
    pub enumerate_all: bool,
    /// Worker threads; the subsets of the first variable are split among them.
    pub jobs: usize,
}

impl Default for GuessConfig {
    fn default() -> GuessConfig {
        GuessConfig { max_assignments: None, enumerate_all: false, jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat(Substitution),
    Unsat,
    BudgetExceeded,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }

    pub fn substitution(&self) -> Option<&Substitution> {
        match self {
            Outcome::Sat(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct GuessStats {
    /// Partial assignments visited.
    pub assignments: u64,
    /// Equivalence checks modulo `T_σ`.
    pub checks: u64,
    /// Largest node table built by a `T_σ` reasoner.
    pub max_reasoner_nodes: usize,
}

pub fn solve_guess(g: &UnificationProblem, cfg: &GuessConfig) -> Result<Outcome> {
    Ok(solve_guess_with_stats(g, cfg)?.0)
}

pub fn solve_guess_with_stats(g: &UnificationProblem, cfg: &GuessConfig) -> Result<(Outcome, GuessStats)> {
    let cfg = GuessConfig { enumerate_all: false, ..cfg.clone() };
    let search = Search::new(g)?;
    let (mut found, stats, exhausted) = search.run(&cfg);
    let outcome = match found.pop() {
        Some(s) => Outcome::Sat(s),
        None if exhausted => Outcome::BudgetExceeded,
        None => Outcome::Unsat,
    };
    Ok((outcome, stats))
}

/// All unifiers induced by acyclic assignments, one per class of
/// per-variable equivalent substitutions, in enumeration order.
pub fn enumerate_unifiers(g: &UnificationProblem, cfg: &GuessConfig) -> Result<Vec<Substitution>> {
    let cfg = GuessConfig { enumerate_all: true, ..cfg.clone() };
    let search = Search::new(g)?;
    let (found, _, exhausted) = search.run(&cfg);
    if exhausted {
        return Err(Error::BudgetExceeded);
    }
    Ok(found)
}

struct EqInfo {
    index: usize,
    top_vars: Vec<usize>,
    all_vars: Vec<usize>,
    l_top: Vec<usize>,
    r_top: Vec<usize>,
    l_mask: Sig,
    r_mask: Sig,
}

/// Top-level constants and roles, as bitmasks over the problem signature.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Sig {
    consts: u128,
    roles: u128,
}

impl Sig {
    fn union(self, o: Sig) -> Sig {
        Sig { consts: self.consts | o.consts, roles: self.roles | o.roles }
    }
}

struct Search {
    problem: UnificationProblem,
    vars: Vec<ConceptName>,
    atoms: Vec<Atom>,
    atom_vars: Vec<Vec<usize>>,
    atom_sig: Vec<Sig>,
    /// Atoms allowed in `S_X`, excluding those mentioning `X` itself.
    candidates: Vec<Vec<usize>>,
    eqs: Vec<EqInfo>,
}

struct Run<'a> {
    search: &'a Search,
    cfg: &'a GuessConfig,
    chosen: Vec<Option<Vec<usize>>>,
    counter: &'a AtomicU64,
    stats: GuessStats,
    found: Vec<Substitution>,
    seen: HashSet<Vec<Concept>>,
    exhausted: bool,
    best: &'a AtomicUsize,
    first_index: usize,
}

impl Search {
    fn new(g: &UnificationProblem) -> Result<Search> {
        let flat = FlatProblem::new(g)?;
        let vars: Vec<ConceptName> = flat.variables().iter().cloned().collect();
        let var_index: BTreeMap<&ConceptName, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let atoms: Vec<Atom> = flat.non_variable_atoms().into_iter().collect();
        let consts: BTreeMap<ConceptName, usize> =
            g.constants().iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let roles: BTreeMap<_, usize> = g.roles().iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        if consts.len() > 128 || roles.len() > 128 {
            return Err(Error::BudgetExceeded);
        }
        let sig_of = |a: &Atom| match a.concept() {
            Concept::Name(n) => Sig { consts: 1 << consts[n], roles: 0 },
            Concept::Exists(r, _) => Sig { consts: 0, roles: 1 << roles[r] },
            _ => unreachable!(),
        };
        let atom_vars: Vec<Vec<usize>> =
            atoms.iter().map(|a| a.variables().iter().map(|v| var_index[v]).collect()).collect();
        let atom_sig = atoms.iter().map(sig_of).collect();
        let candidates = (0..vars.len())
            .map(|x| (0..atoms.len()).filter(|&a| !atom_vars[a].contains(&x)).collect())
            .collect();
        let eqs = flat
            .equations()
            .iter()
            .enumerate()
            .map(|(index, e)| {
                let l_top: Vec<usize> = e.lvar.iter().map(|v| var_index[v]).collect();
                let r_top: Vec<usize> = e.rvar.iter().map(|v| var_index[v]).collect();
                let mut top_vars: Vec<usize> = l_top.iter().chain(&r_top).copied().collect();
                top_vars.sort();
                top_vars.dedup();
                let all_vars = e.variables().iter().map(|v| var_index[v]).collect();
                let l_mask = e.lato.iter().map(sig_of).fold(Sig::default(), Sig::union);
                let r_mask = e.rato.iter().map(sig_of).fold(Sig::default(), Sig::union);
                EqInfo { index, top_vars, all_vars, l_top, r_top, l_mask, r_mask }
            })
            .collect();
        Ok(Search { problem: flat.to_problem(), vars, atoms, atom_vars, atom_sig, candidates, eqs })
    }

    /// Returns the unifiers found, statistics and whether the budget ran out.
    fn run(&self, cfg: &GuessConfig) -> (Vec<Substitution>, GuessStats, bool) {
        let counter = AtomicU64::new(0);
        let best = AtomicUsize::new(usize::MAX);
        let jobs = cfg.jobs.max(1);
        if jobs == 1 || self.vars.is_empty() {
            let mut run = Run::new(self, cfg, &counter, &best, 0);
            run.start(None);
            return (run.found, run.stats, run.exhausted);
        }
        let results: Mutex<Vec<(usize, Vec<Substitution>, GuessStats, bool)>> = Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for k in 0..jobs {
                let results = &results;
                let counter = &counter;
                let best = &best;
                scope.spawn(move || {
                    let mut run = Run::new(self, cfg, counter, best, k);
                    run.start(Some((k, jobs)));
                    results.lock().unwrap().push((run.first_index, run.found, run.stats, run.exhausted));
                });
            }
        });
        let mut results = results.into_inner().unwrap();
        results.sort_by_key(|r| r.0);
        let mut stats = GuessStats::default();
        let mut exhausted = false;
        let mut found = Vec::new();
        let mut seen = HashSet::new();
        for (_, subs, st, ex) in results {
            stats.assignments += st.assignments;
            stats.checks += st.checks;
            stats.max_reasoner_nodes = stats.max_reasoner_nodes.max(st.max_reasoner_nodes);
            exhausted |= ex;
            for s in subs {
                if seen.insert(self.key(&s)) {
                    found.push(s);
                }
            }
        }
        if !cfg.enumerate_all {
            found.truncate(1);
            if !found.is_empty() {
                exhausted = false;
            }
        }
        (found, stats, exhausted)
    }

    fn key(&self, s: &Substitution) -> Vec<Concept> {
        self.vars.iter().map(|x| reduce(&s.expanded_image(x))).collect()
    }

    fn substitution(&self, chosen: &[Option<Vec<usize>>]) -> Substitution {
        let bindings = chosen
            .iter()
            .enumerate()
            .filter_map(|(x, set)| {
                let set = set.as_ref()?;
                Some((self.vars[x].clone(), Concept::and(set.iter().map(|&a| self.atoms[a].concept().clone()))))
            })
            .collect();
        Substitution::dag(bindings).expect("assignment kept acyclic")
    }
}

/// Subsets of `items` by increasing size, lexicographic within a size.
fn subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = items.len();
    (0..=n).flat_map(move |k| {
        let mut idx: Option<Vec<usize>> = Some((0..k).collect());
        std::iter::from_fn(move || {
            let cur = idx.take()?;
            let out = cur.iter().map(|&i| items[i]).collect();
            let mut next = cur;
            let mut i = k;
            while i > 0 {
                i -= 1;
                if next[i] < n - k + i {
                    next[i] += 1;
                    for j in i + 1..k {
                        next[j] = next[j - 1] + 1;
                    }
                    idx = Some(next);
                    break;
                }
            }
            Some(out)
        })
    })
}

impl<'a> Run<'a> {
    fn new(
        search: &'a Search,
        cfg: &'a GuessConfig,
        counter: &'a AtomicU64,
        best: &'a AtomicUsize,
        first_index: usize,
    ) -> Run<'a> {
        Run {
            search,
            cfg,
            chosen: vec![None; search.vars.len()],
            counter,
            stats: GuessStats::default(),
            found: Vec::new(),
            seen: HashSet::new(),
            exhausted: false,
            best,
            first_index,
        }
    }

    fn done(&self) -> bool {
        self.exhausted || (!self.cfg.enumerate_all && !self.found.is_empty())
    }

    fn start(&mut self, partition: Option<(usize, usize)>) {
        // Equations without variables are decided before any guess.
        let ground: Vec<usize> = (0..self.search.eqs.len()).filter(|&e| self.search.eqs[e].all_vars.is_empty()).collect();
        for e in ground {
            if !self.check_equation(e) {
                return;
            }
        }
        match partition {
            None => self.extend(0),
            Some((k, jobs)) => {
                let search = self.search;
                let mut first_found = None;
                for (idx, set) in subsets(&search.candidates[0]).enumerate() {
                    if idx % jobs != k {
                        continue;
                    }
                    if !self.cfg.enumerate_all && idx > self.best.load(Ordering::Relaxed) {
                        break;
                    }
                    let before = self.found.len();
                    self.try_set(0, set);
                    if self.found.len() > before && first_found.is_none() {
                        first_found = Some(idx);
                        self.best.fetch_min(idx, Ordering::Relaxed);
                    }
                    if self.done() {
                        break;
                    }
                }
                self.first_index = first_found.unwrap_or(usize::MAX);
            }
        }
    }

    fn extend(&mut self, x: usize) {
        if x == self.search.vars.len() {
            let s = self.search.substitution(&self.chosen);
            assert!(is_unifier(&s, &self.search.problem), "accepted assignment is not a unifier");
            if !self.cfg.enumerate_all || self.seen.insert(self.search.key(&s)) {
                self.found.push(s);
            }
            return;
        }
        let search = self.search;
        for set in subsets(&search.candidates[x]) {
            self.try_set(x, set);
            if self.done() {
                return;
            }
        }
    }

    fn try_set(&mut self, x: usize, set: Vec<usize>) {
        let n = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        self.stats.assignments += 1;
        if self.cfg.max_assignments.is_some_and(|m| n > m) {
            self.exhausted = true;
            return;
        }
        self.chosen[x] = Some(set);
        if !self.creates_cycle(x) && self.equations_hold(x) {
            self.extend(x + 1);
        }
        self.chosen[x] = None;
    }

    fn deps(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.chosen[x].iter().flatten().flat_map(move |&a| self.search.atom_vars[a].iter().copied())
    }

    /// Whether `x` reaches itself through assigned variables.
    fn creates_cycle(&self, x: usize) -> bool {
        let mut stack: Vec<usize> = self.deps(x).collect();
        let mut seen = vec![false; self.chosen.len()];
        while let Some(y) = stack.pop() {
            if y == x {
                return true;
            }
            if !std::mem::replace(&mut seen[y], true) {
                stack.extend(self.deps(y));
            }
        }
        false
    }

    fn top_sig(&self, vars: &[usize], base: Sig) -> Sig {
        vars.iter()
            .flat_map(|&v| self.chosen[v].iter().flatten())
            .fold(base, |acc, &a| acc.union(self.search.atom_sig[a]))
    }

    /// Runs every check that became possible by fixing `x`.
    fn equations_hold(&mut self, x: usize) -> bool {
        let search = self.search;
        for (e, info) in search.eqs.iter().enumerate() {
            if info.top_vars.contains(&x) && info.top_vars.iter().all(|&v| self.chosen[v].is_some()) {
                let l = self.top_sig(&info.l_top, info.l_mask);
                let r = self.top_sig(&info.r_top, info.r_mask);
                if l != r {
                    return false;
                }
            }
            if let Some(closure) = self.closure(&info.all_vars) {
                if closure.contains(&x) && !self.check_equation(e) {
                    return false;
                }
            }
        }
        true
    }

    /// Variables the equation's image depends on, if all are assigned.
    fn closure(&self, start: &[usize]) -> Option<Vec<usize>> {
        let mut seen = vec![false; self.chosen.len()];
        let mut stack = start.to_vec();
        let mut out = Vec::new();
        while let Some(y) = stack.pop() {
            if std::mem::replace(&mut seen[y], true) {
                continue;
            }
            self.chosen[y].as_ref()?;
            out.push(y);
            stack.extend(self.deps(y));
        }
        Some(out)
    }

    fn check_equation(&mut self, e: usize) -> bool {
        self.stats.checks += 1;
        let eq = &self.search.problem.equations()[self.search.eqs[e].index];
        let defs = self
            .chosen
            .iter()
            .enumerate()
            .filter_map(|(x, set)| {
                let set = set.as_ref()?;
                let rhs = Concept::and(set.iter().map(|&a| self.search.atoms[a].concept().clone()));
                Some(Definition::new(self.search.vars[x].clone(), rhs))
            })
            .collect();
        let t = TBox::new(defs).expect("one definition per variable");
        let mut r = TBoxReasoner::new(&t).expect("assignment kept acyclic");
        let ok = r.equivalent(&eq.lhs, &eq.rhs);
        self.stats.max_reasoner_nodes = self.stats.max_reasoner_nodes.max(r.node_count());
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsumption::equivalent;

    fn a(s: &str) -> Concept {
        Concept::constant(s)
    }

    fn x() -> Concept {
        Concept::variable("X")
    }

    fn image(o: &Outcome) -> Concept {
        o.substitution().unwrap().expanded_image(&ConceptName::variable("X"))
    }

    #[test]
    fn subsets_order() {
        let got: Vec<Vec<usize>> = subsets(&[4, 5, 6]).collect();
        assert_eq!(got, vec![vec![], vec![4], vec![5], vec![6], vec![4, 5], vec![4, 6], vec![5, 6], vec![4, 5, 6]]);
        assert_eq!(subsets(&[]).count(), 1);
    }

    #[test]
    fn gamma1() {
        let g = UnificationProblem::from_pairs([(
            Concept::and([Concept::some("r", x()), Concept::some("r", a("A"))]),
            Concept::some("r", x()),
        )])
        .unwrap();
        let o = solve_guess(&g, &GuessConfig::default()).unwrap();
        assert!(equivalent(&image(&o), &a("A")));
    }

    #[test]
    fn gamma2() {
        let rhs = Concept::and([Concept::some("r", a("A")), Concept::some("r", a("B"))]);
        let g = UnificationProblem::from_pairs([(Concept::and([x(), rhs.clone()]), x())]).unwrap();
        let o = solve_guess(&g, &GuessConfig::default()).unwrap();
        assert!(equivalent(&image(&o), &rhs));
    }

    #[test]
    fn distinct_constants_unsat() {
        let g = UnificationProblem::from_pairs([(a("A"), a("B"))]).unwrap();
        assert_eq!(solve_guess(&g, &GuessConfig::default()).unwrap(), Outcome::Unsat);
    }

    #[test]
    fn budget_is_not_unsat() {
        let g = UnificationProblem::from_pairs([(
            Concept::and([x(), Concept::some("r", a("A")), Concept::some("s", a("B"))]),
            Concept::and([Concept::some("r", Concept::variable("Y")), Concept::some("s", Concept::variable("Y"))]),
        )])
        .unwrap();
        let cfg = GuessConfig { max_assignments: Some(2), ..GuessConfig::default() };
        assert_eq!(solve_guess(&g, &cfg).unwrap(), Outcome::BudgetExceeded);
    }

    #[test]
    fn enumeration() {
        let g = UnificationProblem::from_pairs([(x(), a("A"))]).unwrap();
        let all = enumerate_unifiers(&g, &GuessConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].expanded_image(&ConceptName::variable("X")), a("A"));

        let y = Concept::variable("Y");
        let tz = UnificationProblem::from_pairs([(Concept::and([x(), Concept::some("r", y.clone())]), Concept::some("r", y))])
            .unwrap();
        let all = enumerate_unifiers(&tz, &GuessConfig::default()).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|s| is_unifier(s, &tz)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let y = Concept::variable("Y");
        let g = UnificationProblem::from_pairs([
            (Concept::and([x(), Concept::some("r", y.clone())]), Concept::some("r", y.clone())),
            (y.clone(), Concept::and([a("A"), a("B")])),
        ])
        .unwrap();
        let seq = solve_guess(&g, &GuessConfig::default()).unwrap();
        let par = solve_guess(&g, &GuessConfig { jobs: 3, ..GuessConfig::default() }).unwrap();
        assert_eq!(seq, par);
        let e1 = enumerate_unifiers(&g, &GuessConfig::default()).unwrap();
        let e3 = enumerate_unifiers(&g, &GuessConfig { jobs: 3, ..GuessConfig::default() }).unwrap();
        assert_eq!(e1.len(), e3.len());
    }

    #[test]
    fn non_flat_rejected() {
        let g = UnificationProblem::from_pairs([(Concept::some("r", Concept::some("r", a("A"))), x())]).unwrap();
        assert!(matches!(solve_guess(&g, &GuessConfig::default()), Err(Error::NotFlat(0))));
    }
}
