//! Substitutions in expanded and dag form, assignments, unifier checks and
//! the is-minimality order on ground substitutions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::problem::UnificationProblem;
use crate::subsumption::{equivalent, subsumes, TBoxReasoner};
use crate::symbol::ConceptName;
use crate::tbox::{Definition, TBox};
use crate::term::{Atom, Concept};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// Images are applied as they are.
    Expanded,
    /// Images may mention other bound variables; read as an acyclic TBox.
    Dag,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<ConceptName, Concept>,
    form: Form,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::expanded(BTreeMap::new())
    }

    pub fn expanded(bindings: BTreeMap<ConceptName, Concept>) -> Substitution {
        Substitution { bindings, form: Form::Expanded }
    }

    /// A dag-form substitution; errors if the bindings are cyclic.
    pub fn dag(bindings: BTreeMap<ConceptName, Concept>) -> Result<Substitution> {
        let s = Substitution { bindings, form: Form::Dag };
        s.as_tbox().check_acyclic().map_err(|e| match e {
            Error::CyclicTBox(x) => Error::CyclicSubstitution(x),
            other => other,
        })?;
        Ok(s)
    }

    pub fn from_pairs<I: IntoIterator<Item = (ConceptName, Concept)>>(pairs: I) -> Substitution {
        Substitution::expanded(pairs.into_iter().collect())
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn bindings(&self) -> &BTreeMap<ConceptName, Concept> {
        &self.bindings
    }

    pub fn domain(&self) -> impl Iterator<Item = &ConceptName> {
        self.bindings.keys()
    }

    /// The stored image of `x`; for dag form this may mention other variables.
    pub fn image(&self, x: &ConceptName) -> Option<&Concept> {
        self.bindings.get(x)
    }

    /// `σ(X)` with dag bindings unfolded.
    pub fn expanded_image(&self, x: &ConceptName) -> Concept {
        self.apply(&Concept::Name(x.clone()))
    }

    /// `σ(c)`.
    pub fn apply(&self, c: &Concept) -> Concept {
        match self.form {
            Form::Expanded => c.replace_names(&mut |n| self.bindings.get(n).cloned()),
            Form::Dag => {
                let mut memo = HashMap::new();
                self.unfold(c, &mut memo, &|_| true)
            }
        }
    }

    fn unfold(
        &self,
        c: &Concept,
        memo: &mut HashMap<ConceptName, Concept>,
        select: &dyn Fn(&ConceptName) -> bool,
    ) -> Concept {
        c.replace_names(&mut |n| {
            if !select(n) {
                return None;
            }
            let image = self.bindings.get(n)?;
            if let Some(done) = memo.get(n) {
                return Some(done.clone());
            }
            let out = self.unfold(image, memo, select);
            memo.insert(n.clone(), out.clone());
            Some(out)
        })
    }

    /// The same substitution in expanded form.
    pub fn to_expanded(&self) -> Substitution {
        match self.form {
            Form::Expanded => self.clone(),
            Form::Dag => {
                let mut memo = HashMap::new();
                let bindings = self
                    .bindings
                    .keys()
                    .map(|x| (x.clone(), self.unfold(&Concept::Name(x.clone()), &mut memo, &|_| true)))
                    .collect();
                Substitution::expanded(bindings)
            }
        }
    }

    /// Dag form restricted to `keep`, with every other bound variable
    /// inlined into the images.
    pub fn unfold_except(&self, keep: &BTreeSet<ConceptName>) -> Substitution {
        let mut memo = HashMap::new();
        let select = |n: &ConceptName| !keep.contains(n);
        let bindings = self
            .bindings
            .iter()
            .filter(|(x, _)| keep.contains(*x))
            .map(|(x, c)| {
                let image = match self.form {
                    Form::Dag => self.unfold(c, &mut memo, &select),
                    Form::Expanded => c.clone(),
                };
                (x.clone(), image)
            })
            .collect();
        Substitution { bindings, form: self.form }
    }

    /// Only the bindings of `vars`. For dag form the result keeps the other
    /// bindings it depends on inlined.
    pub fn restrict(&self, vars: &BTreeSet<ConceptName>) -> Substitution {
        match self.form {
            Form::Expanded => Substitution::expanded(
                self.bindings.iter().filter(|(x, _)| vars.contains(*x)).map(|(x, c)| (x.clone(), c.clone())).collect(),
            ),
            Form::Dag => self.unfold_except(vars),
        }
    }

    /// `T_σ`: one definition `X ≐ σ(X)` per binding.
    pub fn as_tbox(&self) -> TBox {
        TBox::new(self.bindings.iter().map(|(x, c)| Definition::new(x.clone(), c.clone())).collect())
            .expect("bindings have unique keys")
    }

    /// Size of `σ(X)` after unfolding, computed without materializing it.
    /// Saturates at `u128::MAX`.
    pub fn expanded_size(&self, x: &ConceptName) -> u128 {
        fn size_of(
            s: &Substitution,
            c: &Concept,
            memo: &mut HashMap<ConceptName, u128>,
        ) -> u128 {
            match c {
                Concept::Top => 1,
                Concept::Name(n) => match (s.form, s.bindings.get(n)) {
                    (_, None) => 1,
                    (Form::Expanded, Some(img)) => img.size() as u128,
                    (Form::Dag, Some(img)) => {
                        if let Some(&v) = memo.get(n) {
                            return v;
                        }
                        let v = size_of(s, img, memo);
                        memo.insert(n.clone(), v);
                        v
                    }
                },
                Concept::Exists(_, f) => size_of(s, f, memo).saturating_add(1),
                Concept::Conj(cs) => cs.iter().fold(1u128, |acc, c| acc.saturating_add(size_of(s, c, memo))),
            }
        }
        size_of(self, &Concept::Name(x.clone()), &mut HashMap::new())
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, c)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} ↦ {:?}", x, c)?;
        }
        f.write_str("}")
    }
}

/// Per-variable sets `S_X` of non-variable atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    sets: BTreeMap<ConceptName, BTreeSet<Atom>>,
}

impl Assignment {
    /// Empty sets for every variable in `vars`.
    pub fn new<'a, I: IntoIterator<Item = &'a ConceptName>>(vars: I) -> Assignment {
        Assignment { sets: vars.into_iter().map(|v| (v.clone(), BTreeSet::new())).collect() }
    }

    pub fn set(&mut self, x: ConceptName, atoms: BTreeSet<Atom>) {
        self.sets.insert(x, atoms);
    }

    pub fn get(&self, x: &ConceptName) -> Option<&BTreeSet<Atom>> {
        self.sets.get(x)
    }

    pub fn sets(&self) -> &BTreeMap<ConceptName, BTreeSet<Atom>> {
        &self.sets
    }

    /// `X` directly depends on `Y` if `Y` occurs in an atom of `S_X`.
    pub fn direct_dependencies(&self, x: &ConceptName) -> BTreeSet<ConceptName> {
        self.sets.get(x).into_iter().flatten().flat_map(|a| a.variables()).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.to_bindings().is_ok()
    }

    fn to_bindings(&self) -> Result<Substitution> {
        let bindings = self
            .sets
            .iter()
            .map(|(x, atoms)| (x.clone(), Concept::and(atoms.iter().map(|a| a.concept().clone()))))
            .collect();
        Substitution::dag(bindings)
    }
}

/// The dag-form substitution `X ↦ ⊓ S_X` (and `X ↦ ⊤` for empty `S_X`).
pub fn substitution_of_assignment(a: &Assignment) -> Result<Substitution> {
    a.to_bindings()
}

/// Whether `s` unifies every equation of `g`. Dag-form substitutions are
/// checked as equivalence modulo `T_σ`, without expanding them.
pub fn is_unifier(s: &Substitution, g: &UnificationProblem) -> bool {
    match s.form {
        Form::Expanded => g.equations().iter().all(|e| equivalent(&s.apply(&e.lhs), &s.apply(&e.rhs))),
        Form::Dag => {
            let t = s.as_tbox();
            let mut r = match TBoxReasoner::new(&t) {
                Ok(r) => r,
                Err(_) => return false,
            };
            g.equations().iter().all(|e| r.equivalent(&e.lhs, &e.rhs))
        }
    }
}

/// Outcome of comparing two ground substitutions in the order `≻`, where
/// `σ ≽ θ` iff `σ(X) ⊑ θ(X)` for every variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundOrder {
    Equal,
    Greater,
    Less,
    Incomparable,
}

pub fn compare_ground(s: &Substitution, t: &Substitution, vars: &BTreeSet<ConceptName>) -> Result<GroundOrder> {
    let mut ge = true;
    let mut le = true;
    for x in vars {
        let a = s.expanded_image(x);
        let b = t.expanded_image(x);
        if !a.is_ground() || !b.is_ground() {
            return Err(Error::NotGround(x.clone()));
        }
        ge &= subsumes(&a, &b);
        le &= subsumes(&b, &a);
    }
    Ok(match (ge, le) {
        (true, true) => GroundOrder::Equal,
        (true, false) => GroundOrder::Greater,
        (false, true) => GroundOrder::Less,
        (false, false) => GroundOrder::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Concept {
        Concept::constant(s)
    }

    fn v(s: &str) -> ConceptName {
        ConceptName::variable(s)
    }

    #[test]
    fn apply_man() {
        let s = Substitution::from_pairs([(v("Man"), Concept::and([a("Human"), a("Male")]))]);
        let t = Concept::and([Concept::Name(v("Man")), Concept::some("loves", Concept::variable("X"))]);
        let want = Concept::and([a("Human"), a("Male"), Concept::some("loves", Concept::variable("X"))]);
        assert_eq!(s.apply(&t), want);
        assert_eq!(Substitution::identity().apply(&t), t);
        assert_eq!(s.apply(&Concept::top()), Concept::top());
    }

    #[test]
    fn assignment_images() {
        let mut asg = Assignment::new([&v("X"), &v("Y")]);
        assert_eq!(substitution_of_assignment(&asg).unwrap().expanded_image(&v("X")), Concept::top());
        asg.set(v("X"), [Atom::new(Concept::some("r", Concept::Name(v("Y")))).unwrap()].into());
        asg.set(v("Y"), [Atom::new(a("A")).unwrap()].into());
        let s = substitution_of_assignment(&asg).unwrap();
        assert_eq!(s.form(), Form::Dag);
        assert_eq!(s.expanded_image(&v("X")), Concept::some("r", a("A")));
        assert_eq!(s.expanded_size(&v("X")), 2);

        asg.set(v("Y"), [Atom::new(Concept::some("r", Concept::Name(v("X")))).unwrap()].into());
        assert!(!asg.is_acyclic());
        assert!(matches!(substitution_of_assignment(&asg), Err(Error::CyclicSubstitution(_))));
    }

    #[test]
    fn unifier_checks() {
        let x = Concept::Name(v("X"));
        let g1 = UnificationProblem::from_pairs([(
            Concept::and([Concept::some("r", x.clone()), Concept::some("r", a("A"))]),
            Concept::some("r", x),
        )])
        .unwrap();
        assert!(!is_unifier(&Substitution::from_pairs([(v("X"), a("B"))]), &g1));
        assert!(is_unifier(&Substitution::from_pairs([(v("X"), a("A"))]), &g1));
        let dag = Substitution::dag([(v("X"), a("A"))].into()).unwrap();
        assert!(is_unifier(&dag, &g1));

        let trivial = UnificationProblem::from_pairs([(a("A"), Concept::and([a("A"), a("A")]))]).unwrap();
        assert!(is_unifier(&Substitution::identity(), &trivial));
    }

    #[test]
    fn ground_order() {
        let vars: BTreeSet<_> = [v("X")].into();
        let s1 = Substitution::from_pairs([(v("X"), Concept::and([a("A"), a("B")]))]);
        let g1 = Substitution::from_pairs([(v("X"), a("A"))]);
        assert_eq!(compare_ground(&s1, &g1, &vars).unwrap(), GroundOrder::Greater);
        assert_eq!(compare_ground(&g1, &s1, &vars).unwrap(), GroundOrder::Less);
        assert_eq!(compare_ground(&s1, &s1, &vars).unwrap(), GroundOrder::Equal);
        let b = Substitution::from_pairs([(v("X"), a("B"))]);
        assert_eq!(compare_ground(&g1, &b, &vars).unwrap(), GroundOrder::Incomparable);
        let open = Substitution::from_pairs([(v("X"), Concept::variable("Y"))]);
        assert!(matches!(compare_ground(&open, &g1, &vars), Err(Error::NotGround(_))));
    }

    #[test]
    fn unfold_except_inlines_hidden_variables() {
        let s = Substitution::dag(
            [(v("X"), Concept::some("r", Concept::Name(v("_v0")))), (v("_v0"), Concept::and([a("A"), a("B")]))].into(),
        )
        .unwrap();
        let shown = s.unfold_except(&[v("X")].into());
        assert_eq!(shown.bindings().len(), 1);
        assert_eq!(shown.image(&v("X")).unwrap(), &Concept::some("r", Concept::and([a("A"), a("B")])));
    }
}
