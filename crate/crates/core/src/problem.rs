//! Unification problems, flat equations and flattening.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::{ConceptName, Role, Symbol, RESERVED_PREFIX};
use crate::term::{Atom, Concept};

/// `lhs ≡? rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Equation {
    pub fn new(lhs: Concept, rhs: Concept) -> Equation {
        Equation { lhs, rhs }
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ≡? {:?}", self.lhs, self.rhs)
    }
}

/// A finite set of equations together with its signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnificationProblem {
    equations: Vec<Equation>,
    variables: BTreeSet<ConceptName>,
    constants: BTreeSet<ConceptName>,
    roles: BTreeSet<Role>,
}

impl UnificationProblem {
    pub fn new(equations: Vec<Equation>) -> Result<UnificationProblem> {
        UnificationProblem::with_signature(equations, BTreeSet::new(), BTreeSet::new())
    }

    /// Like [`UnificationProblem::new`], registering extra names that need
    /// not occur in the equations.
    pub fn with_signature(
        equations: Vec<Equation>,
        mut variables: BTreeSet<ConceptName>,
        mut constants: BTreeSet<ConceptName>,
    ) -> Result<UnificationProblem> {
        let mut roles = BTreeSet::new();
        for eq in &equations {
            for side in [&eq.lhs, &eq.rhs] {
                side.visit_names(&mut |n| {
                    if n.is_variable() {
                        variables.insert(n.clone());
                    } else {
                        constants.insert(n.clone());
                    }
                });
                side.visit_roles(&mut |r| {
                    roles.insert(r.clone());
                });
            }
        }
        let var_syms: HashSet<&Symbol> = variables.iter().map(|v| &v.symbol).collect();
        if let Some(clash) = constants.iter().find(|c| var_syms.contains(&c.symbol)) {
            return Err(Error::KindClash(clash.symbol.clone()));
        }
        Ok(UnificationProblem { equations, variables, constants, roles })
    }

    pub fn from_pairs<I: IntoIterator<Item = (Concept, Concept)>>(pairs: I) -> Result<UnificationProblem> {
        UnificationProblem::new(pairs.into_iter().map(|(l, r)| Equation::new(l, r)).collect())
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn variables(&self) -> &BTreeSet<ConceptName> {
        &self.variables
    }

    pub fn constants(&self) -> &BTreeSet<ConceptName> {
        &self.constants
    }

    pub fn roles(&self) -> &BTreeSet<Role> {
        &self.roles
    }

    pub fn is_flat(&self) -> bool {
        self.equations.iter().all(|e| e.lhs.is_flat() && e.rhs.is_flat())
    }

    pub fn size(&self) -> usize {
        self.equations.iter().map(|e| e.lhs.size() + e.rhs.size()).sum()
    }
}

/// A flat equation split into variables and non-variable atoms per side.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatEquation {
    pub lvar: BTreeSet<ConceptName>,
    pub lato: BTreeSet<Atom>,
    pub rvar: BTreeSet<ConceptName>,
    pub rato: BTreeSet<Atom>,
}

impl FlatEquation {
    /// Splits an equation between flat terms.
    pub fn from_sides(lhs: &Concept, rhs: &Concept) -> Option<FlatEquation> {
        let (lvar, lato) = split_side(lhs)?;
        let (rvar, rato) = split_side(rhs)?;
        Some(FlatEquation { lvar, lato, rvar, rato })
    }

    pub fn lhs(&self) -> Concept {
        join_side(&self.lvar, &self.lato)
    }

    pub fn rhs(&self) -> Concept {
        join_side(&self.rvar, &self.rato)
    }

    pub fn to_equation(&self) -> Equation {
        Equation::new(self.lhs(), self.rhs())
    }

    pub fn variables(&self) -> BTreeSet<ConceptName> {
        let mut vs: BTreeSet<ConceptName> = self.lvar.union(&self.rvar).cloned().collect();
        for a in self.lato.iter().chain(&self.rato) {
            vs.extend(a.variables());
        }
        vs
    }

    pub fn is_solved(&self) -> bool {
        self.lato == self.rato
    }
}

impl fmt::Debug for FlatEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ≡? {:?}", self.lhs(), self.rhs())
    }
}

fn split_side(side: &Concept) -> Option<(BTreeSet<ConceptName>, BTreeSet<Atom>)> {
    let mut vars = BTreeSet::new();
    let mut atoms = BTreeSet::new();
    for part in side.top_level() {
        if !part.is_flat_atom() {
            return None;
        }
        match part.as_variable() {
            Some(v) => {
                vars.insert(v.clone());
            }
            None => {
                atoms.insert(Atom::new(part.clone()).unwrap());
            }
        }
    }
    Some((vars, atoms))
}

fn join_side(vars: &BTreeSet<ConceptName>, atoms: &BTreeSet<Atom>) -> Concept {
    Concept::and(
        vars.iter()
            .map(|v| Concept::Name(v.clone()))
            .chain(atoms.iter().map(|a| a.concept().clone())),
    )
}

/// A flat problem in four-set form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatProblem {
    equations: Vec<FlatEquation>,
    variables: BTreeSet<ConceptName>,
}

impl FlatProblem {
    pub fn new(g: &UnificationProblem) -> Result<FlatProblem> {
        let equations = g
            .equations()
            .iter()
            .enumerate()
            .map(|(i, e)| FlatEquation::from_sides(&e.lhs, &e.rhs).ok_or(Error::NotFlat(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FlatProblem { equations, variables: g.variables().clone() })
    }

    pub fn from_equations(equations: Vec<FlatEquation>) -> FlatProblem {
        let variables = equations.iter().flat_map(FlatEquation::variables).collect();
        FlatProblem { equations, variables }
    }

    pub fn equations(&self) -> &[FlatEquation] {
        &self.equations
    }

    pub fn variables(&self) -> &BTreeSet<ConceptName> {
        &self.variables
    }

    /// The non-variable atoms of the problem, nested constants included.
    pub fn non_variable_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for e in &self.equations {
            for side in [e.lhs(), e.rhs()] {
                out.extend(side.atoms().into_iter().filter(|a| a.as_variable().is_none()));
            }
        }
        out
    }

    pub fn to_problem(&self) -> UnificationProblem {
        UnificationProblem::with_signature(
            self.equations.iter().map(FlatEquation::to_equation).collect(),
            self.variables.clone(),
            BTreeSet::new(),
        )
        .expect("flat problem has a consistent signature")
    }
}

/// Generator of `_v<n>` variables that avoids names already in use.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: HashSet<Symbol>,
    next: usize,
}

impl FreshNames {
    pub fn avoiding<'a, I: IntoIterator<Item = &'a ConceptName>>(names: I) -> FreshNames {
        FreshNames { used: names.into_iter().map(|n| n.symbol.clone()).collect(), next: 0 }
    }

    pub fn fresh(&mut self) -> ConceptName {
        loop {
            let name = format!("{}{}", RESERVED_PREFIX, self.next);
            self.next += 1;
            let sym = Symbol::intern(&name);
            if self.used.insert(sym) {
                return ConceptName::variable(&name);
            }
        }
    }
}

/// Result of flattening: the flat problem and, for each fresh variable, the
/// subterm it names.
#[derive(Clone, Debug)]
pub struct Flattening {
    pub problem: FlatProblem,
    pub fresh: BTreeMap<ConceptName, Concept>,
    pub original_variables: BTreeSet<ConceptName>,
}

/// Flattens `g` by naming every non-flat filler `C` of `∃r.C` with one fresh
/// variable `X_C` and adding `X_C ≡? C'`, where `C'` is `C` flattened.
pub fn flatten(g: &UnificationProblem) -> Flattening {
    let mut names = g.variables().iter().chain(g.constants()).collect::<Vec<_>>();
    names.sort();
    let mut st = Flattener {
        fresh_names: FreshNames::avoiding(names),
        memo: HashMap::new(),
        extra: Vec::new(),
        fresh: BTreeMap::new(),
    };
    let mut equations = Vec::new();
    for e in g.equations() {
        let l = st.flat_term(&e.lhs);
        let r = st.flat_term(&e.rhs);
        equations.push(FlatEquation::from_sides(&l, &r).unwrap());
    }
    equations.append(&mut st.extra);
    let mut variables = g.variables().clone();
    variables.extend(st.fresh.keys().cloned());
    Flattening {
        problem: FlatProblem { equations, variables },
        fresh: st.fresh,
        original_variables: g.variables().clone(),
    }
}

struct Flattener {
    fresh_names: FreshNames,
    memo: HashMap<Concept, ConceptName>,
    extra: Vec<FlatEquation>,
    fresh: BTreeMap<ConceptName, Concept>,
}

impl Flattener {
    fn flat_term(&mut self, c: &Concept) -> Concept {
        Concept::and(c.top_level().iter().map(|atom| match atom {
            Concept::Exists(r, filler) if !matches!(**filler, Concept::Top | Concept::Name(_)) => {
                Concept::exists(r.clone(), Concept::Name(self.name_for(filler)))
            }
            other => other.clone(),
        }))
    }

    fn name_for(&mut self, c: &Concept) -> ConceptName {
        if let Some(x) = self.memo.get(c) {
            return x.clone();
        }
        let x = self.fresh_names.fresh();
        self.memo.insert(c.clone(), x.clone());
        self.fresh.insert(x.clone(), c.clone());
        let flat = self.flat_term(c);
        self.extra.push(FlatEquation::from_sides(&Concept::Name(x.clone()), &flat).unwrap());
        x
    }
}
