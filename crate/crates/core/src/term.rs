//! EL concept terms in AC-canonical form.
//!
//! Every [`Concept`] value is canonical by construction: conjunctions are
//! flattened, never contain `Top`, have at least two children, and keep their
//! children sorted by the derived total order. Duplicate conjuncts are kept;
//! removing them is the job of [`crate::subsumption::reduce`]. Structural
//! equality of two `Concept`s is therefore equality modulo associativity and
//! commutativity of conjunction.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::symbol::{ConceptName, NameKind, Role};

/// Sorted children of a conjunction. Only constructible inside the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjuncts(Arc<[Concept]>);

impl Deref for Conjuncts {
    type Target = [Concept];

    fn deref(&self) -> &[Concept] {
        &self.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Name(ConceptName),
    Exists(Role, Arc<Concept>),
    Conj(Conjuncts),
}

impl Concept {
    pub fn top() -> Concept {
        Concept::Top
    }

    pub fn name(name: ConceptName) -> Concept {
        Concept::Name(name)
    }

    pub fn constant(name: &str) -> Concept {
        Concept::Name(ConceptName::constant(name))
    }

    pub fn variable(name: &str) -> Concept {
        Concept::Name(ConceptName::variable(name))
    }

    pub fn exists(role: Role, filler: Concept) -> Concept {
        Concept::Exists(role, Arc::new(filler))
    }

    /// `∃role.filler` with the role given by name.
    pub fn some(role: &str, filler: Concept) -> Concept {
        Concept::exists(Role::new(role), filler)
    }

    /// Canonical conjunction of the given terms.
    pub fn and<I: IntoIterator<Item = Concept>>(parts: I) -> Concept {
        let mut flat = Vec::new();
        for part in parts {
            match part {
                Concept::Top => {}
                Concept::Conj(cs) => flat.extend(cs.iter().cloned()),
                other => flat.push(other),
            }
        }
        Concept::from_atoms(flat)
    }

    /// Builds a conjunction from already flat, non-Top parts.
    pub(crate) fn from_atoms(mut flat: Vec<Concept>) -> Concept {
        match flat.len() {
            0 => Concept::Top,
            1 => flat.pop().unwrap(),
            _ => {
                flat.sort();
                Concept::Conj(Conjuncts(flat.into()))
            }
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Concept::Top)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Concept::Name(_) | Concept::Exists(..))
    }

    pub fn as_name(&self) -> Option<&ConceptName> {
        match self {
            Concept::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_variable(&self) -> Option<&ConceptName> {
        self.as_name().filter(|n| n.is_variable())
    }

    /// The top-level conjuncts: empty for `Top`, a singleton for an atom.
    pub fn top_level(&self) -> &[Concept] {
        match self {
            Concept::Top => &[],
            Concept::Conj(cs) => cs,
            atom => std::slice::from_ref(atom),
        }
    }

    pub fn top_level_atoms(&self) -> Vec<Atom> {
        self.top_level().iter().cloned().map(Atom).collect()
    }

    /// All atoms occurring in the term, including nested ones.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Concept::Top => {}
            Concept::Name(_) => {
                out.insert(Atom(self.clone()));
            }
            Concept::Exists(_, filler) => {
                out.insert(Atom(self.clone()));
                filler.collect_atoms(out);
            }
            Concept::Conj(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Maximal nesting depth of existential restrictions.
    pub fn role_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Name(_) => 0,
            Concept::Exists(_, filler) => 1 + filler.role_depth(),
            Concept::Conj(cs) => cs.iter().map(Concept::role_depth).max().unwrap_or(0),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Name(_) => 1,
            Concept::Exists(_, filler) => 1 + filler.size(),
            Concept::Conj(cs) => 1 + cs.iter().map(Concept::size).sum::<usize>(),
        }
    }

    /// A name, `∃r.Name` or `∃r.⊤`.
    pub fn is_flat_atom(&self) -> bool {
        match self {
            Concept::Name(_) => true,
            Concept::Exists(_, filler) => matches!(**filler, Concept::Name(_) | Concept::Top),
            _ => false,
        }
    }

    /// A conjunction of flat atoms (including the empty one).
    pub fn is_flat(&self) -> bool {
        self.top_level().iter().all(Concept::is_flat_atom)
    }

    pub fn names(&self) -> BTreeSet<ConceptName> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            out.insert(n.clone());
        });
        out
    }

    pub fn variables(&self) -> BTreeSet<ConceptName> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            if n.is_variable() {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn roles(&self) -> BTreeSet<Role> {
        let mut out = BTreeSet::new();
        self.visit_roles(&mut |r| {
            out.insert(r.clone());
        });
        out
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit_names(&mut |n| ground &= !n.is_variable());
        ground
    }

    pub fn mentions(&self, name: &ConceptName) -> bool {
        let mut found = false;
        self.visit_names(&mut |n| found |= n == name);
        found
    }

    pub fn visit_names(&self, f: &mut impl FnMut(&ConceptName)) {
        match self {
            Concept::Top => {}
            Concept::Name(n) => f(n),
            Concept::Exists(_, filler) => filler.visit_names(f),
            Concept::Conj(cs) => cs.iter().for_each(|c| c.visit_names(f)),
        }
    }

    pub fn visit_roles(&self, f: &mut impl FnMut(&Role)) {
        match self {
            Concept::Top | Concept::Name(_) => {}
            Concept::Exists(r, filler) => {
                f(r);
                filler.visit_roles(f)
            }
            Concept::Conj(cs) => cs.iter().for_each(|c| c.visit_roles(f)),
        }
    }

    /// Replaces names for which `f` returns a term; the result is canonical.
    pub fn replace_names(&self, f: &mut impl FnMut(&ConceptName) -> Option<Concept>) -> Concept {
        match self {
            Concept::Top => Concept::Top,
            Concept::Name(n) => f(n).unwrap_or_else(|| self.clone()),
            Concept::Exists(r, filler) => Concept::exists(r.clone(), filler.replace_names(f)),
            Concept::Conj(cs) => Concept::and(cs.iter().map(|c| c.replace_names(f))),
        }
    }

    /// Changes the kind of every occurrence of the given symbols.
    pub fn rekind(&self, names: &BTreeSet<ConceptName>, kind: NameKind) -> Concept {
        self.replace_names(&mut |n| {
            if names.contains(n) {
                Some(Concept::Name(n.with_kind(kind)))
            } else {
                None
            }
        })
    }

    pub fn to_raw(&self) -> RawConcept {
        match self {
            Concept::Top => RawConcept::Top,
            Concept::Name(n) => RawConcept::Name(n.clone()),
            Concept::Exists(r, filler) => RawConcept::Exists(r.clone(), Box::new(filler.to_raw())),
            Concept::Conj(cs) => RawConcept::And(cs.iter().map(Concept::to_raw).collect()),
        }
    }

    /// Debug-friendly rendering in DL notation.
    pub fn dl(&self) -> DlNotation<'_> {
        DlNotation(self)
    }
}

/// Structural equality modulo associativity and commutativity.
pub fn ac_equal(s: &Concept, t: &Concept) -> bool {
    s == t
}

/// An unnormalized term tree, as produced by a parser or a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawConcept {
    Top,
    Name(ConceptName),
    Exists(Role, Box<RawConcept>),
    And(Vec<RawConcept>),
}

impl RawConcept {
    pub fn normalize(&self) -> Concept {
        ac_normalize(self)
    }
}

pub fn ac_normalize(raw: &RawConcept) -> Concept {
    match raw {
        RawConcept::Top => Concept::Top,
        RawConcept::Name(n) => Concept::Name(n.clone()),
        RawConcept::Exists(r, filler) => Concept::exists(r.clone(), ac_normalize(filler)),
        RawConcept::And(parts) => Concept::and(parts.iter().map(ac_normalize)),
    }
}

/// A concept name or an existential restriction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Concept);

impl Atom {
    pub fn new(c: Concept) -> Option<Atom> {
        c.is_atom().then_some(Atom(c))
    }

    pub fn concept(&self) -> &Concept {
        &self.0
    }

    pub fn into_concept(self) -> Concept {
        self.0
    }

    /// For `∃r.C`, the role and filler.
    pub fn as_exists(&self) -> Option<(&Role, &Concept)> {
        match &self.0 {
            Concept::Exists(r, filler) => Some((r, filler)),
            _ => None,
        }
    }
}

impl Deref for Atom {
    type Target = Concept;

    fn deref(&self) -> &Concept {
        &self.0
    }
}

impl From<Atom> for Concept {
    fn from(a: Atom) -> Concept {
        a.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Renders in the s-expression surface syntax.
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Name(n) => write!(f, "{}", n),
            Concept::Exists(r, filler) => write!(f, "(some {} {})", r, filler),
            Concept::Conj(cs) => {
                f.write_str("(and")?;
                for c in cs.iter() {
                    write!(f, " {}", c)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dl())
    }
}

pub struct DlNotation<'a>(&'a Concept);

impl fmt::Display for DlNotation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Concept::Top => f.write_str("⊤"),
            Concept::Name(n) => write!(f, "{}", n),
            Concept::Exists(r, filler) => match **filler {
                Concept::Conj(_) => write!(f, "∃{}.({})", r, filler.dl()),
                _ => write!(f, "∃{}.{}", r, filler.dl()),
            },
            Concept::Conj(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊓ ")?;
                    }
                    write!(f, "{}", c.dl())?;
                }
                Ok(())
            }
        }
    }
}
