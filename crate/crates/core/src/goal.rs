//! Goal-oriented solver for flat problems.
//!
//! Equations are kept as four sets over the non-variable atoms of the input.
//! Eager-Assignment is applied whenever it applies; otherwise the unsolved
//! atom with the fewest Decomposition and Extension alternatives is picked
//! and those alternatives are explored depth-first. Every mutation is logged on a trail so a
//! failed alternative is undone in place.

use std::collections::{BTreeMap, HashSet};

use crate::error::Result;
use crate::guess::Outcome;
use crate::problem::{FlatEquation, FlatProblem, UnificationProblem};
use crate::substitution::{is_unifier, substitution_of_assignment, Assignment};
use crate::symbol::ConceptName;
use crate::term::{Atom, Concept};

#[derive(Clone, Debug, Default)]
pub struct GoalConfig {
    /// Limit on the number of search nodes.
    pub max_nodes: Option<u64>,
    /// Record one line per rule application.
    pub trace: bool,
}

#[derive(Clone, Debug, Default)]
pub struct GoalStats {
    pub nodes: u64,
    pub eager: u64,
    pub decomposition: u64,
    pub extension: u64,
    pub backtracks: u64,
    /// Most Eager-Assignment applications on a single branch.
    pub max_branch_eager: u64,
    /// Most Decomposition and Extension applications on a single branch.
    pub max_branch_decomp_ext: u64,
    /// Applications that exceeded the per-branch bounds (`#vars` for
    /// Eager-Assignment, `#equations · #atoms` for the others).
    pub bound_violations: u64,
    pub variables: usize,
    pub atoms: usize,
    pub max_equations: usize,
    pub trace: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleResult {
    Applied,
    Fail,
    NotApplicable,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.0[i / 64] |= 1 << (i % 64);
        !had
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }

    fn minus(&self, other: &Bits) -> impl Iterator<Item = usize> + '_ {
        let o = other.clone();
        self.iter().filter(move |&i| !o.contains(i))
    }
}

#[derive(Clone)]
struct Eqn {
    vars: [Bits; 2],
    atoms: [Bits; 2],
}

impl Eqn {
    fn solved(&self) -> bool {
        self.atoms[0] == self.atoms[1]
    }
}

/// The filler of an existential atom.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Filler {
    Top,
    Var(usize),
    Const(usize),
}

enum Undo {
    EqAtom(usize, usize, usize),
    Assign(usize, usize),
    Finish(usize),
    NewEquation((Filler, Filler)),
}

/// Search state of the goal-oriented solver.
pub struct GoalState {
    vars: Vec<ConceptName>,
    var_index: BTreeMap<ConceptName, usize>,
    atoms: Vec<Atom>,
    atom_index: BTreeMap<Atom, usize>,
    /// For `∃r.F`: the role (as the atom's role symbol) and the filler.
    exists: Vec<Option<(usize, Filler)>>,
    eqs: Vec<Eqn>,
    original: usize,
    assignment: Vec<Bits>,
    finished: Vec<bool>,
    d_memo: HashSet<(Filler, Filler)>,
    trail: Vec<Undo>,
    branch_eager: u64,
    branch_decomp_ext: u64,
    problem: UnificationProblem,
    trace_on: bool,
    pub stats: GoalStats,
}

fn side_ix(s: Side) -> usize {
    match s {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl GoalState {
    pub fn new(g: &UnificationProblem) -> Result<GoalState> {
        let flat = FlatProblem::new(g)?;
        let vars: Vec<ConceptName> = flat.variables().iter().cloned().collect();
        let var_index: BTreeMap<ConceptName, usize> = vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let atoms: Vec<Atom> = flat.non_variable_atoms().into_iter().collect();
        let atom_index: BTreeMap<Atom, usize> = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let mut roles: BTreeMap<_, usize> = BTreeMap::new();
        let exists = atoms
            .iter()
            .map(|a| {
                let (r, f) = a.as_exists()?;
                let next = roles.len();
                let role = *roles.entry(r.clone()).or_insert(next);
                let filler = match f {
                    Concept::Top => Filler::Top,
                    Concept::Name(n) if n.is_variable() => Filler::Var(var_index[n]),
                    Concept::Name(_) => Filler::Const(atom_index[&Atom::new(f.clone()).unwrap()]),
                    _ => unreachable!("flat atom"),
                };
                Some((role, filler))
            })
            .collect();
        let mut st = GoalState {
            vars: vars.clone(),
            var_index,
            atoms,
            atom_index,
            exists,
            eqs: Vec::new(),
            original: flat.equations().len(),
            assignment: vec![Bits::new(0); vars.len()],
            finished: vec![false; vars.len()],
            d_memo: HashSet::new(),
            trail: Vec::new(),
            branch_eager: 0,
            branch_decomp_ext: 0,
            problem: flat.to_problem(),
            trace_on: false,
            stats: GoalStats::default(),
        };
        let n = st.atoms.len();
        st.assignment = vec![Bits::new(n); st.vars.len()];
        for e in flat.equations() {
            let mut eq = st.empty_eqn();
            for (s, (vs, ats)) in [(&e.lvar, &e.lato), (&e.rvar, &e.rato)].into_iter().enumerate() {
                for v in vs {
                    eq.vars[s].insert(st.var_index[v]);
                }
                for a in ats {
                    eq.atoms[s].insert(st.atom_index[a]);
                }
            }
            st.eqs.push(eq);
        }
        st.stats.variables = st.vars.len();
        st.stats.atoms = st.atoms.len();
        st.stats.max_equations = st.eqs.len();
        Ok(st)
    }

    fn empty_eqn(&self) -> Eqn {
        let (nv, na) = (self.vars.len(), self.atoms.len());
        Eqn { vars: [Bits::new(nv), Bits::new(nv)], atoms: [Bits::new(na), Bits::new(na)] }
    }

    pub fn equation_count(&self) -> usize {
        self.eqs.len()
    }

    /// Equations of the input come first, generated ones follow.
    pub fn original_equation_count(&self) -> usize {
        self.original
    }

    pub fn equation(&self, e: usize) -> FlatEquation {
        let eq = &self.eqs[e];
        let vars = |s: usize| eq.vars[s].iter().map(|v| self.vars[v].clone()).collect();
        let atoms = |s: usize| eq.atoms[s].iter().map(|a| self.atoms[a].clone()).collect();
        FlatEquation { lvar: vars(0), lato: atoms(0), rvar: vars(1), rato: atoms(1) }
    }

    pub fn is_finished(&self, x: &ConceptName) -> bool {
        self.var_index.get(x).is_some_and(|&i| self.finished[i])
    }

    pub fn all_solved(&self) -> bool {
        self.eqs.iter().all(Eqn::solved)
    }

    pub fn assignment(&self) -> Assignment {
        let mut asg = Assignment::new(&self.vars);
        for (x, set) in self.assignment.iter().enumerate() {
            asg.set(self.vars[x].clone(), set.iter().map(|a| self.atoms[a].clone()).collect());
        }
        asg
    }

    fn trace(&mut self, line: impl FnOnce(&GoalState) -> String) {
        if self.trace_on {
            let l = line(self);
            self.stats.trace.push(l);
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::EqAtom(e, s, a) => self.eqs[e].atoms[s].remove(a),
                Undo::Assign(x, a) => self.assignment[x].remove(a),
                Undo::Finish(x) => self.finished[x] = false,
                Undo::NewEquation(key) => {
                    self.eqs.pop();
                    self.d_memo.remove(&key);
                }
            }
        }
    }

    fn add_eq_atom(&mut self, e: usize, s: usize, a: usize) {
        if self.eqs[e].atoms[s].insert(a) {
            self.trail.push(Undo::EqAtom(e, s, a));
        }
    }

    /// Whether `from` depends on `target` under the current assignment.
    fn reaches(&self, from: usize, target: usize) -> bool {
        let mut stack = vec![from];
        let mut seen = vec![false; self.vars.len()];
        while let Some(y) = stack.pop() {
            if y == target {
                return true;
            }
            if std::mem::replace(&mut seen[y], true) {
                continue;
            }
            for a in self.assignment[y].iter() {
                if let Some((_, Filler::Var(z))) = self.exists[a] {
                    stack.push(z);
                }
            }
        }
        false
    }

    /// Adds `a` to `S_x` and expands every equation containing `x`. Returns
    /// false, leaving the change for the caller to undo, on a cycle.
    fn assign(&mut self, x: usize, a: usize) -> bool {
        if !self.assignment[x].insert(a) {
            return true;
        }
        self.trail.push(Undo::Assign(x, a));
        if let Some((_, Filler::Var(y))) = self.exists[a] {
            if self.reaches(y, x) {
                return false;
            }
        }
        for e in 0..self.eqs.len() {
            for s in 0..2 {
                if self.eqs[e].vars[s].contains(x) {
                    self.add_eq_atom(e, s, a);
                }
            }
        }
        true
    }

    fn eager_applies(&self, e: usize, side: Side) -> Option<usize> {
        let eq = &self.eqs[e];
        let s = side_ix(side);
        if !eq.atoms[s].is_empty() {
            return None;
        }
        let mut unfinished = eq.vars[s].iter().filter(|&x| !self.finished[x]);
        let x = unfinished.next()?;
        if unfinished.next().is_some() || eq.vars[1 - s].iter().any(|z| !self.finished[z]) {
            return None;
        }
        Some(x)
    }

    fn find_eager(&self) -> Option<(usize, Side)> {
        (0..self.eqs.len())
            .flat_map(|e| [(e, Side::Left), (e, Side::Right)])
            .find(|&(e, side)| self.eager_applies(e, side).is_some())
    }

    /// Builds `C ⊓ B ≡? B` for fillers `C` and `B`, expanded.
    fn push_d_equation(&mut self, c: Filler, b: Filler) {
        if !self.d_memo.insert((c, b)) {
            return;
        }
        let mut eq = self.empty_eqn();
        let put = |eq: &mut Eqn, s: usize, f: Filler| match f {
            Filler::Top => {}
            Filler::Var(v) => {
                eq.vars[s].insert(v);
                for a in self.assignment[v].iter() {
                    eq.atoms[s].insert(a);
                }
            }
            Filler::Const(a) => {
                eq.atoms[s].insert(a);
            }
        };
        put(&mut eq, 0, c);
        put(&mut eq, 0, b);
        put(&mut eq, 1, b);
        self.eqs.push(eq);
        self.stats.max_equations = self.stats.max_equations.max(self.eqs.len());
        self.trail.push(Undo::NewEquation((c, b)));
    }

    fn count_decomp_ext(&mut self) {
        self.branch_decomp_ext += 1;
        self.stats.max_branch_decomp_ext = self.stats.max_branch_decomp_ext.max(self.branch_decomp_ext);
        if self.branch_decomp_ext > (self.eqs.len() * self.atoms.len()) as u64 {
            self.stats.bound_violations += 1;
        }
    }

    fn eager(&mut self, e: usize, side: Side) -> RuleResult {
        let Some(x) = self.eager_applies(e, side) else { return RuleResult::NotApplicable };
        let mark = self.trail.len();
        let s = side_ix(side);
        let target: Vec<usize> = self.eqs[e].atoms[1 - s].iter().collect();
        for a in target {
            if !self.assign(x, a) {
                self.undo_to(mark);
                self.trace(|st| format!("eager-{} eq={} var={} fail", side.tag(), e, st.vars[x]));
                return RuleResult::Fail;
            }
        }
        self.finished[x] = true;
        self.trail.push(Undo::Finish(x));
        self.stats.eager += 1;
        self.branch_eager += 1;
        self.stats.max_branch_eager = self.stats.max_branch_eager.max(self.branch_eager);
        if self.branch_eager > self.vars.len() as u64 {
            self.stats.bound_violations += 1;
        }
        self.trace(|st| {
            let set: Vec<String> = st.assignment[x].iter().map(|a| format!("{:?}", st.atoms[a])).collect();
            format!("eager-{} eq={} var={} S={{{}}}", side.tag(), e, st.vars[x], set.join(", "))
        });
        RuleResult::Applied
    }

    /// The side on which atom `a` is unsolved in equation `e`.
    fn unsolved_side(&self, e: usize, a: usize) -> Option<Side> {
        let eq = &self.eqs[e];
        match (eq.atoms[0].contains(a), eq.atoms[1].contains(a)) {
            (true, false) => Some(Side::Left),
            (false, true) => Some(Side::Right),
            _ => None,
        }
    }

    fn decomposition(&mut self, e: usize, a: usize, b: usize) -> RuleResult {
        let Some(side) = self.unsolved_side(e, a) else { return RuleResult::NotApplicable };
        let o = side_ix(side.other());
        let (Some((r, c)), Some((rb, fb))) = (self.exists[a], self.exists[b]) else {
            return RuleResult::NotApplicable;
        };
        if r != rb || !self.eqs[e].atoms[o].contains(b) {
            return RuleResult::NotApplicable;
        }
        self.add_eq_atom(e, o, a);
        self.push_d_equation(c, fb);
        self.stats.decomposition += 1;
        self.count_decomp_ext();
        self.trace(|st| format!("decompose-{} eq={} atom={:?} with={:?}", side.tag(), e, st.atoms[a], st.atoms[b]));
        RuleResult::Applied
    }

    fn extension(&mut self, e: usize, a: usize, x: usize) -> RuleResult {
        let Some(side) = self.unsolved_side(e, a) else { return RuleResult::NotApplicable };
        let o = side_ix(side.other());
        if self.finished[x] || !self.eqs[e].vars[o].contains(x) {
            return RuleResult::NotApplicable;
        }
        let mark = self.trail.len();
        if !self.assign(x, a) {
            self.undo_to(mark);
            self.trace(|st| format!("extend-{} eq={} atom={:?} var={} fail", side.tag(), e, st.atoms[a], st.vars[x]));
            return RuleResult::Fail;
        }
        self.stats.extension += 1;
        self.count_decomp_ext();
        self.trace(|st| format!("extend-{} eq={} atom={:?} var={}", side.tag(), e, st.atoms[a], st.vars[x]));
        RuleResult::Applied
    }

    /// The unsolved atom with the fewest applicable choices, with those
    /// choices. Ties go to the earliest equation and the least atom.
    fn select(&self) -> Option<(usize, usize, Vec<Choice>)> {
        let mut best: Option<(usize, usize, Vec<Choice>)> = None;
        for (e, eq) in self.eqs.iter().enumerate() {
            if eq.solved() {
                continue;
            }
            let mut unsolved: Vec<usize> = eq.atoms[0].minus(&eq.atoms[1]).chain(eq.atoms[1].minus(&eq.atoms[0])).collect();
            unsolved.sort_unstable();
            for a in unsolved {
                let c = self.choices(e, a);
                if best.as_ref().is_none_or(|b| c.len() < b.2.len()) {
                    let done = c.is_empty();
                    best = Some((e, a, c));
                    if done {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn choices(&self, e: usize, a: usize) -> Vec<Choice> {
        let side = self.unsolved_side(e, a).expect("selected atom is unsolved");
        let o = side_ix(side.other());
        let eq = &self.eqs[e];
        let mut out = Vec::new();
        if let Some((r, _)) = self.exists[a] {
            for b in eq.atoms[o].iter() {
                if matches!(self.exists[b], Some((rb, _)) if rb == r) {
                    out.push(Choice::Decompose(b));
                }
            }
        }
        for x in eq.vars[o].iter() {
            if !self.finished[x] {
                out.push(Choice::Extend(x));
            }
        }
        out
    }

    fn search(&mut self, cfg: &GoalConfig) -> std::result::Result<bool, ()> {
        self.stats.nodes += 1;
        if cfg.max_nodes.is_some_and(|m| self.stats.nodes > m) {
            return Err(());
        }
        let mark = self.trail.len();
        let saved = (self.branch_eager, self.branch_decomp_ext);
        let restore = |st: &mut GoalState| {
            st.undo_to(mark);
            st.branch_eager = saved.0;
            st.branch_decomp_ext = saved.1;
        };
        loop {
            if self.all_solved() {
                return Ok(true);
            }
            match self.find_eager() {
                Some((e, side)) => {
                    if self.eager(e, side) == RuleResult::Fail {
                        restore(self);
                        return Ok(false);
                    }
                }
                None => break,
            }
        }
        let (e, a, choices) = self.select().expect("some equation is unsolved");
        for choice in choices {
            let m = self.trail.len();
            let before = (self.branch_eager, self.branch_decomp_ext);
            let applied = match choice {
                Choice::Decompose(b) => self.decomposition(e, a, b),
                Choice::Extend(x) => self.extension(e, a, x),
            };
            if applied == RuleResult::Applied {
                match self.search(cfg) {
                    Ok(true) => return Ok(true),
                    Ok(false) => {}
                    Err(()) => {
                        restore(self);
                        return Err(());
                    }
                }
            }
            self.stats.backtracks += 1;
            self.undo_to(m);
            (self.branch_eager, self.branch_decomp_ext) = before;
        }
        restore(self);
        Ok(false)
    }

    fn atom_id(&self, a: &Atom) -> Option<usize> {
        self.atom_index.get(a).copied()
    }

    fn var_id(&self, x: &ConceptName) -> Option<usize> {
        self.var_index.get(x).copied()
    }
}

#[derive(Clone, Copy)]
enum Choice {
    Decompose(usize),
    Extend(usize),
}

/// Applies the given variant of Eager-Assignment to equation `e`.
pub fn rule_eager_assignment(st: &mut GoalState, e: usize, side: Side) -> RuleResult {
    if e >= st.eqs.len() {
        return RuleResult::NotApplicable;
    }
    st.eager(e, side)
}

/// Decomposition of the unsolved `atom = ∃r.C` in `e` against `∃r.B`.
pub fn rule_decomposition(st: &mut GoalState, e: usize, atom: &Atom, choice: &Atom) -> RuleResult {
    match (st.atom_id(atom), st.atom_id(choice)) {
        (Some(a), Some(b)) if e < st.eqs.len() => st.decomposition(e, a, b),
        _ => RuleResult::NotApplicable,
    }
}

/// Extension of `S_X` by the unsolved `atom` of `e`.
pub fn rule_extension(st: &mut GoalState, e: usize, atom: &Atom, x: &ConceptName) -> RuleResult {
    match (st.atom_id(atom), st.var_id(x)) {
        (Some(a), Some(v)) if e < st.eqs.len() => st.extension(e, a, v),
        _ => RuleResult::NotApplicable,
    }
}

pub fn solve_goal(g: &UnificationProblem, cfg: &GoalConfig) -> Result<Outcome> {
    Ok(solve_goal_with_stats(g, cfg)?.0)
}

pub fn solve_goal_with_stats(g: &UnificationProblem, cfg: &GoalConfig) -> Result<(Outcome, GoalStats)> {
    let mut st = GoalState::new(g)?;
    st.trace_on = cfg.trace;
    let outcome = match st.search(cfg) {
        Err(()) => Outcome::BudgetExceeded,
        Ok(false) => Outcome::Unsat,
        Ok(true) => {
            let s = substitution_of_assignment(&st.assignment()).expect("assignment kept acyclic");
            assert!(is_unifier(&s, &st.problem), "solved state does not induce a unifier");
            Outcome::Sat(s)
        }
    };
    Ok((outcome, st.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsumption::equivalent;

    fn a(s: &str) -> Concept {
        Concept::constant(s)
    }

    fn v(s: &str) -> Concept {
        Concept::variable(s)
    }

    fn img(o: &Outcome, x: &str) -> Concept {
        o.substitution().unwrap().expanded_image(&ConceptName::variable(x))
    }

    fn top_r() -> Concept {
        Concept::some("r", Concept::top())
    }

    #[test]
    fn eager_example() {
        let g = UnificationProblem::from_pairs([
            (v("Y"), Concept::top()),
            (v("Z"), top_r()),
            (Concept::and([v("X"), v("Y")]), v("Z")),
        ])
        .unwrap();
        let (o, stats) = solve_goal_with_stats(&g, &GoalConfig { trace: true, ..Default::default() }).unwrap();
        assert_eq!(img(&o, "X"), top_r());
        assert_eq!(img(&o, "Z"), top_r());
        assert_eq!(img(&o, "Y"), Concept::top());
        assert_eq!(stats.eager, 3);
        assert_eq!(stats.trace.len(), 3);
    }

    #[test]
    fn decomposition_example() {
        let g = UnificationProblem::from_pairs([(
            Concept::and([Concept::some("r", v("X")), Concept::some("r", a("A"))]),
            Concept::some("r", a("A")),
        )])
        .unwrap();
        let o = solve_goal(&g, &GoalConfig::default()).unwrap();
        assert_eq!(img(&o, "X"), Concept::top());
    }

    #[test]
    fn extension_example() {
        let g = UnificationProblem::from_pairs([(Concept::and([a("A"), top_r()]), Concept::and([top_r(), v("X")]))]).unwrap();
        let o = solve_goal(&g, &GoalConfig::default()).unwrap();
        assert_eq!(img(&o, "X"), a("A"));
    }

    #[test]
    fn standalone_rules() {
        let g = UnificationProblem::from_pairs([(v("X"), Concept::top())]).unwrap();
        let mut st = GoalState::new(&g).unwrap();
        assert_eq!(rule_eager_assignment(&mut st, 0, Side::Left), RuleResult::Applied);
        assert!(st.is_finished(&ConceptName::variable("X")));
        assert_eq!(rule_eager_assignment(&mut st, 0, Side::Left), RuleResult::NotApplicable);

        let g = UnificationProblem::from_pairs([(v("X"), Concept::some("r", v("X")))]).unwrap();
        let mut st = GoalState::new(&g).unwrap();
        assert_eq!(rule_eager_assignment(&mut st, 0, Side::Left), RuleResult::Fail);
        assert!(!st.is_finished(&ConceptName::variable("X")));
        assert_eq!(solve_goal(&g, &GoalConfig::default()).unwrap(), Outcome::Unsat);
    }

    #[test]
    fn decomposition_memo() {
        let rx = Atom::new(Concept::some("r", v("X"))).unwrap();
        let ra = Atom::new(Concept::some("r", a("A"))).unwrap();
        let g = UnificationProblem::from_pairs([
            (Concept::and([rx.concept().clone(), ra.concept().clone()]), ra.concept().clone()),
            (Concept::and([rx.concept().clone(), ra.concept().clone(), a("B")]), Concept::and([ra.concept().clone(), a("B")])),
        ])
        .unwrap();
        let mut st = GoalState::new(&g).unwrap();
        assert_eq!(rule_decomposition(&mut st, 0, &rx, &ra), RuleResult::Applied);
        assert_eq!(st.equation_count(), 3);
        assert!(st.equation(0).is_solved());
        let d = st.equation(2);
        assert_eq!(d.to_equation().lhs, Concept::and([v("X"), a("A")]));
        assert_eq!(rule_decomposition(&mut st, 1, &rx, &ra), RuleResult::Applied);
        assert_eq!(st.equation_count(), 3);
        assert_eq!(rule_decomposition(&mut st, 0, &ra, &rx), RuleResult::NotApplicable);
    }

    #[test]
    fn extension_cycle_fails() {
        let rx = Atom::new(Concept::some("r", v("X"))).unwrap();
        let g = UnificationProblem::from_pairs([(rx.concept().clone(), v("X"))]).unwrap();
        let mut st = GoalState::new(&g).unwrap();
        assert_eq!(rule_extension(&mut st, 0, &rx, &ConceptName::variable("X")), RuleResult::Fail);
        let ax = Atom::new(a("A")).unwrap();
        assert_eq!(rule_extension(&mut st, 0, &ax, &ConceptName::variable("X")), RuleResult::NotApplicable);
    }

    #[test]
    fn gamma_examples() {
        let x = v("X");
        let g1 = UnificationProblem::from_pairs([(
            Concept::and([Concept::some("r", x.clone()), Concept::some("r", a("A"))]),
            Concept::some("r", x.clone()),
        )])
        .unwrap();
        let o = solve_goal(&g1, &GoalConfig::default()).unwrap();
        assert!(equivalent(&img(&o, "X"), &a("A")));
        let rhs = Concept::and([Concept::some("r", a("A")), Concept::some("r", a("B"))]);
        let g2 = UnificationProblem::from_pairs([(Concept::and([x.clone(), rhs.clone()]), x)]).unwrap();
        let o = solve_goal(&g2, &GoalConfig::default()).unwrap();
        assert!(equivalent(&img(&o, "X"), &rhs));
    }

    #[test]
    fn budget() {
        let g = UnificationProblem::from_pairs([(a("A"), v("X"))]).unwrap();
        let o = solve_goal(&g, &GoalConfig { max_nodes: Some(0), trace: false }).unwrap();
        assert_eq!(o, Outcome::BudgetExceeded);
    }
}
