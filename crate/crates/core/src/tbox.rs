//! Acyclic TBoxes: dependency analysis, expansion, and the translation of a
//! TBox into a unification problem in dag-solved form.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::problem::{Equation, UnificationProblem};
use crate::substitution::Substitution;
use crate::symbol::{ConceptName, NameKind};
use crate::term::Concept;

/// `lhs ≐ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub lhs: ConceptName,
    pub rhs: Concept,
}

impl Definition {
    pub fn new(lhs: ConceptName, rhs: Concept) -> Definition {
        Definition { lhs, rhs }
    }
}

/// A set of definitions with unique left-hand sides. Cycles are permitted in
/// the value and reported by [`TBox::is_acyclic`]; operations that need an
/// acyclic TBox return [`Error::CyclicTBox`].
#[derive(Clone, Debug, Default)]
pub struct TBox {
    defs: Vec<Definition>,
    index: HashMap<ConceptName, usize>,
}

impl TBox {
    pub fn new(defs: Vec<Definition>) -> Result<TBox> {
        let mut index = HashMap::with_capacity(defs.len());
        for (i, def) in defs.iter().enumerate() {
            if index.insert(def.lhs.clone(), i).is_some() {
                return Err(Error::DuplicateDefinition(def.lhs.clone()));
            }
        }
        Ok(TBox { defs, index })
    }

    /// Like [`TBox::new`] but also rejects terminological cycles.
    pub fn acyclic(defs: Vec<Definition>) -> Result<TBox> {
        let t = TBox::new(defs)?;
        t.check_acyclic()?;
        Ok(t)
    }

    pub fn empty() -> TBox {
        TBox::default()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.defs
    }

    pub fn definition(&self, name: &ConceptName) -> Option<&Concept> {
        self.index.get(name).map(|&i| &self.defs[i].rhs)
    }

    pub fn is_defined(&self, name: &ConceptName) -> bool {
        self.index.contains_key(name)
    }

    pub fn defined_names(&self) -> BTreeSet<ConceptName> {
        self.defs.iter().map(|d| d.lhs.clone()).collect()
    }

    /// Total number of constructor nodes on both sides of all definitions.
    pub fn size(&self) -> usize {
        self.defs.iter().map(|d| 1 + d.rhs.size()).sum()
    }

    /// `A` directly depends on `B` if `B` is defined and occurs in the
    /// definition of `A`.
    pub fn direct_dependencies(&self) -> BTreeMap<ConceptName, BTreeSet<ConceptName>> {
        self.defs
            .iter()
            .map(|d| {
                let deps = d.rhs.names().into_iter().filter(|n| self.is_defined(n)).collect();
                (d.lhs.clone(), deps)
            })
            .collect()
    }

    /// Transitive closure of direct dependency.
    pub fn depends_on(&self) -> BTreeSet<(ConceptName, ConceptName)> {
        let direct = self.direct_dependencies();
        let mut closure = BTreeSet::new();
        for start in direct.keys() {
            let mut stack: Vec<&ConceptName> = direct[start].iter().collect();
            let mut seen = BTreeSet::new();
            while let Some(next) = stack.pop() {
                if seen.insert(next) {
                    closure.insert((start.clone(), next.clone()));
                    stack.extend(direct.get(next).into_iter().flatten());
                }
            }
        }
        closure
    }

    pub fn is_acyclic(&self) -> bool {
        self.check_acyclic().is_ok()
    }

    pub fn check_acyclic(&self) -> Result<()> {
        match self.dependency_order() {
            Some(_) => Ok(()),
            None => {
                let cyclic = self
                    .depends_on()
                    .into_iter()
                    .find(|(a, b)| a == b)
                    .map(|(a, _)| a)
                    .expect("no topological order implies a self-dependency");
                Err(Error::CyclicTBox(cyclic))
            }
        }
    }

    /// Defined names ordered so that each name comes before every name it
    /// depends on; ties are broken by the term order. `None` if cyclic.
    fn dependency_order(&self) -> Option<Vec<ConceptName>> {
        let direct = self.direct_dependencies();
        // number of not-yet-emitted definitions that mention each name
        let mut pending: BTreeMap<&ConceptName, usize> = direct.keys().map(|k| (k, 0)).collect();
        for deps in direct.values() {
            for d in deps {
                *pending.get_mut(d).unwrap() += 1;
            }
        }
        let mut ready: BTreeSet<&ConceptName> =
            pending.iter().filter(|(_, &c)| c == 0).map(|(k, _)| *k).collect();
        let mut order = Vec::with_capacity(direct.len());
        while let Some(next) = ready.pop_first() {
            order.push(next.clone());
            for d in &direct[next] {
                let c = pending.get_mut(d).unwrap();
                *c -= 1;
                if *c == 0 {
                    ready.insert(d);
                }
            }
        }
        (order.len() == direct.len()).then_some(order)
    }
}

pub fn depends_on(t: &TBox) -> BTreeSet<(ConceptName, ConceptName)> {
    t.depends_on()
}

pub fn is_acyclic(t: &TBox) -> bool {
    t.is_acyclic()
}

/// Expansion of `c`: every defined name replaced, exhaustively, by its
/// definition. Expansions of defined names are shared but the output is
/// materialized and can be exponentially larger than the input.
pub fn expand(c: &Concept, t: &TBox) -> Result<Concept> {
    t.check_acyclic()?;
    let mut memo: HashMap<ConceptName, Concept> = HashMap::new();
    Ok(expand_with(c, t, &mut memo))
}

fn expand_with(c: &Concept, t: &TBox, memo: &mut HashMap<ConceptName, Concept>) -> Concept {
    c.replace_names(&mut |n| {
        let rhs = t.definition(n)?;
        if let Some(done) = memo.get(n) {
            return Some(done.clone());
        }
        let expanded = expand_with(rhs, t, memo);
        memo.insert(n.clone(), expanded.clone());
        Some(expanded)
    })
}

/// `Γ(T)`: one equation `A ≡? C` per definition, with defined names turned
/// into variables and ordered so that the result is in dag-solved form.
pub fn problem_of_tbox(t: &TBox) -> Result<UnificationProblem> {
    let order = t.dependency_order().ok_or_else(|| t.check_acyclic().unwrap_err())?;
    let defined = t.defined_names();
    let equations = order
        .iter()
        .map(|name| {
            let rhs = t.definition(name).unwrap().rekind(&defined, NameKind::Variable);
            Equation::new(Concept::Name(name.with_kind(NameKind::Variable)), rhs)
        })
        .collect();
    UnificationProblem::new(equations)
}

/// Checks `{X1 ≡? C1, ..., Xn ≡? Cn}` with distinct variables `Xi` where
/// `Xi` does not occur in `Ci, ..., Cn`.
pub fn is_dag_solved(g: &UnificationProblem) -> Result<()> {
    let mut seen = BTreeSet::new();
    let eqs = g.equations();
    for (i, eq) in eqs.iter().enumerate() {
        let x = eq
            .lhs
            .as_variable()
            .ok_or_else(|| Error::NotDagSolved(format!("left side of equation {} is not a variable", i)))?;
        if !seen.insert(x.clone()) {
            return Err(Error::NotDagSolved(format!("variable {} is solved twice", x)));
        }
        if let Some(j) = eqs[i..].iter().position(|later| later.rhs.mentions(x)) {
            return Err(Error::NotDagSolved(format!("{} occurs in right side of equation {}", x, i + j)));
        }
    }
    Ok(())
}

/// The most general unifier `σ_Γ` of a problem in dag-solved form, in
/// expanded form.
pub fn sigma_of_dag_solved(g: &UnificationProblem) -> Result<Substitution> {
    is_dag_solved(g)?;
    let mut bindings: BTreeMap<ConceptName, Concept> = BTreeMap::new();
    for eq in g.equations().iter().rev() {
        let x = eq.lhs.as_variable().unwrap().clone();
        let image = eq.rhs.replace_names(&mut |n| bindings.get(n).cloned());
        bindings.insert(x, image);
    }
    Ok(Substitution::expanded(bindings))
}

/// Reduces unification modulo `t` to plain unification: the equations of `g`
/// together with `Γ(T)`, with defined names read as variables.
pub fn reduce_problem_mod_tbox(g: &UnificationProblem, t: &TBox) -> Result<UnificationProblem> {
    t.check_acyclic()?;
    if let Some(v) = t.defined_names().into_iter().find(|n| n.is_variable()) {
        return Err(Error::DefinedVariable(v));
    }
    let defined = t.defined_names();
    let mut equations: Vec<Equation> = g
        .equations()
        .iter()
        .map(|eq| Equation::new(eq.lhs.rekind(&defined, NameKind::Variable), eq.rhs.rekind(&defined, NameKind::Variable)))
        .collect();
    equations.extend(problem_of_tbox(t)?.equations().iter().cloned());
    UnificationProblem::new(equations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsumption::equivalent;

    fn c(s: &str) -> Concept {
        Concept::constant(s)
    }

    fn family() -> TBox {
        TBox::acyclic(vec![
            Definition::new(
                ConceptName::constant("Mother"),
                Concept::and([c("Woman"), Concept::some("child", c("Human"))]),
            ),
            Definition::new(ConceptName::constant("Woman"), Concept::and([c("Human"), c("Female")])),
        ])
        .unwrap()
    }

    #[test]
    fn mother_depends_on_woman() {
        let t = family();
        let deps = t.depends_on();
        assert!(deps.contains(&(ConceptName::constant("Mother"), ConceptName::constant("Woman"))));
        assert_eq!(deps.len(), 1);
        assert!(t.is_acyclic());
    }

    #[test]
    fn self_reference_is_cyclic() {
        let t = TBox::new(vec![Definition::new(ConceptName::constant("A"), Concept::some("r", c("A")))]).unwrap();
        assert!(!t.is_acyclic());
        assert!(matches!(expand(&c("A"), &t), Err(Error::CyclicTBox(_))));
        assert!(TBox::empty().is_acyclic());
        assert!(TBox::empty().depends_on().is_empty());
    }

    #[test]
    fn duplicate_lhs_rejected() {
        let err = TBox::new(vec![
            Definition::new(ConceptName::constant("Woman"), c("Human")),
            Definition::new(ConceptName::constant("Woman"), Concept::top()),
        ])
        .unwrap_err();
        assert_eq!(err, Error::DuplicateDefinition(ConceptName::constant("Woman")));
    }

    #[test]
    fn expand_mother() {
        let got = expand(&c("Mother"), &family()).unwrap();
        let want = Concept::and([c("Human"), c("Female"), Concept::some("child", c("Human"))]);
        assert_eq!(got, want);
        let prim = Concept::some("r", c("Human"));
        assert_eq!(expand(&prim, &family()).unwrap(), prim);
        assert_eq!(expand(&got, &family()).unwrap(), got);
    }

    #[test]
    fn gamma_of_tbox_is_dag_solved() {
        let g = problem_of_tbox(&family()).unwrap();
        assert_eq!(g.equations().len(), 2);
        assert_eq!(g.equations()[0].lhs, Concept::variable("Mother"));
        assert_eq!(g.equations()[1].lhs, Concept::variable("Woman"));
        is_dag_solved(&g).unwrap();
        assert!(problem_of_tbox(&TBox::empty()).unwrap().equations().is_empty());
    }

    #[test]
    fn sigma_matches_expansion() {
        let t = family();
        let sigma = sigma_of_dag_solved(&problem_of_tbox(&t).unwrap()).unwrap();
        let mother = sigma.image(&ConceptName::variable("Mother")).unwrap();
        assert!(equivalent(
            mother,
            &Concept::and([c("Human"), c("Female"), Concept::some("child", c("Human"))])
        ));
        assert_eq!(
            sigma.image(&ConceptName::variable("Woman")).unwrap(),
            &Concept::and([c("Human"), c("Female")])
        );
    }

    #[test]
    fn sigma_simple_chains() {
        let x1 = Concept::variable("X1");
        let x2 = Concept::variable("X2");
        let g = UnificationProblem::new(vec![
            Equation::new(x1.clone(), Concept::some("r", x2.clone())),
            Equation::new(x2.clone(), c("A")),
        ])
        .unwrap();
        let s = sigma_of_dag_solved(&g).unwrap();
        assert_eq!(s.image(&ConceptName::variable("X1")).unwrap(), &Concept::some("r", c("A")));

        let bad = UnificationProblem::new(vec![Equation::new(x1.clone(), Concept::some("r", x1.clone()))]).unwrap();
        assert!(matches!(sigma_of_dag_solved(&bad), Err(Error::NotDagSolved(_))));
    }

    #[test]
    fn reduction_with_empty_tbox_is_identity() {
        let g = UnificationProblem::new(vec![Equation::new(Concept::variable("X"), c("A"))]).unwrap();
        let r = reduce_problem_mod_tbox(&g, &TBox::empty()).unwrap();
        assert_eq!(r.equations(), g.equations());
    }
}
