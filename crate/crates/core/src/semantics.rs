//! Finite interpretations, used to refute subsumptions and to check models of
//! TBoxes.
//!
//! Extensions are bitsets over a domain of at most 64 elements.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symbol::{ConceptName, Role};
use crate::tbox::TBox;
use crate::term::Concept;

pub const MAX_DOMAIN: usize = 64;

/// A subset of the domain `{0, ..., n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Extension(pub u64);

impl Extension {
    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Extension {
        Extension(elems.into_iter().fold(0, |m, e| m | (1u64 << e)))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn is_subset(self, other: Extension) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn elements(self) -> Vec<usize> {
        (0..64).filter(|&e| self.contains(e)).collect()
    }
}

/// Concept names and roles an interpretation has to cover.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub roles: BTreeSet<Role>,
}

impl Signature {
    pub fn of_terms<'a, I: IntoIterator<Item = &'a Concept>>(terms: I) -> Signature {
        let mut sig = Signature::default();
        for t in terms {
            sig.concepts.extend(t.names());
            sig.roles.extend(t.roles());
        }
        sig
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    size: usize,
    concepts: BTreeMap<ConceptName, Extension>,
    /// Successor set of every element, per role.
    roles: BTreeMap<Role, Vec<Extension>>,
}

impl Interpretation {
    /// Empty extensions over a domain of `size` elements.
    pub fn new(size: usize) -> Interpretation {
        assert!((1..=MAX_DOMAIN).contains(&size), "domain size must be in 1..={}", MAX_DOMAIN);
        Interpretation { size, concepts: BTreeMap::new(), roles: BTreeMap::new() }
    }

    pub fn domain_size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> Extension {
        Extension(if self.size == 64 { u64::MAX } else { (1u64 << self.size) - 1 })
    }

    pub fn set_concept(&mut self, name: ConceptName, ext: Extension) {
        assert!(ext.is_subset(self.domain()), "extension outside the domain");
        self.concepts.insert(name, ext);
    }

    pub fn add_edge(&mut self, role: Role, from: usize, to: usize) {
        assert!(from < self.size && to < self.size, "edge outside the domain");
        let succ = self.roles.entry(role).or_insert_with(|| vec![Extension(0); self.size]);
        succ[from].0 |= 1 << to;
    }

    pub fn concept_ext(&self, name: &ConceptName) -> Extension {
        self.concepts.get(name).copied().unwrap_or_default()
    }

    pub fn role_ext(&self, role: &Role) -> Vec<(usize, usize)> {
        let Some(succ) = self.roles.get(role) else { return Vec::new() };
        succ.iter()
            .enumerate()
            .flat_map(|(x, s)| s.elements().into_iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn roles(&self) -> impl Iterator<Item = &Role> {
        self.roles.keys()
    }

    /// `c^I`. Terms with variables have no extension.
    pub fn evaluate(&self, c: &Concept) -> Result<Extension> {
        Ok(match c {
            Concept::Top => self.domain(),
            Concept::Name(n) if n.is_variable() => return Err(Error::VariableInTerm(n.clone())),
            Concept::Name(n) => self.concept_ext(n),
            Concept::Exists(r, filler) => {
                let target = self.evaluate(filler)?;
                match self.roles.get(r) {
                    None => Extension(0),
                    Some(succ) => Extension::from_elements((0..self.size).filter(|&x| succ[x].0 & target.0 != 0)),
                }
            }
            Concept::Conj(cs) => {
                let mut ext = self.domain();
                for part in cs.iter() {
                    ext.0 &= self.evaluate(part)?.0;
                }
                ext
            }
        })
    }

    /// Whether `A^I = C^I` for every definition `A ≐ C` of `t`.
    pub fn is_model(&self, t: &TBox) -> Result<bool> {
        for d in t.definitions() {
            if self.evaluate(&Concept::Name(d.lhs.clone()))? != self.evaluate(&d.rhs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn evaluate(c: &Concept, i: &Interpretation) -> Result<Extension> {
    i.evaluate(c)
}

pub fn is_model(i: &Interpretation, t: &TBox) -> Result<bool> {
    i.is_model(t)
}

/// A reproducible interpretation drawn with ChaCha8 seeded from `seed`.
/// The domain size is uniform in `1..=max_domain`; each element is in each
/// concept with probability 1/2 and each pair is in each role with
/// probability 1/3.
pub fn random_interpretation(sig: &Signature, max_domain: usize, seed: u64) -> Interpretation {
    assert!((1..=MAX_DOMAIN).contains(&max_domain));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(1..=max_domain);
    let mut i = Interpretation::new(size);
    for c in &sig.concepts {
        let ext = Extension::from_elements((0..size).filter(|_| rng.gen_bool(0.5)));
        i.set_concept(c.clone(), ext);
    }
    for r in &sig.roles {
        i.roles.insert(r.clone(), vec![Extension(0); size]);
        for x in 0..size {
            for y in 0..size {
                if rng.gen_bool(1.0 / 3.0) {
                    i.add_edge(r.clone(), x, y);
                }
            }
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbox::Definition;

    fn a(s: &str) -> ConceptName {
        ConceptName::constant(s)
    }

    #[test]
    fn table_rows() {
        let mut i = Interpretation::new(3);
        assert_eq!(i.evaluate(&Concept::top()).unwrap().elements(), vec![0, 1, 2]);
        i.set_concept(a("A"), Extension::from_elements([1, 2]));
        i.set_concept(a("B"), Extension::from_elements([2]));
        i.add_edge(Role::new("r"), 0, 2);
        let ab = Concept::and([Concept::constant("A"), Concept::constant("B")]);
        assert_eq!(i.evaluate(&ab).unwrap().elements(), vec![2]);
        let ra = Concept::some("r", Concept::constant("B"));
        assert_eq!(i.evaluate(&ra).unwrap().elements(), vec![0]);
        assert!(i.evaluate(&Concept::variable("X")).is_err());
        assert_eq!(i.role_ext(&Role::new("r")), vec![(0, 2)]);
    }

    #[test]
    fn models() {
        let t = TBox::acyclic(vec![Definition::new(a("A"), Concept::some("r", Concept::constant("B")))]).unwrap();
        let mut i = Interpretation::new(2);
        i.set_concept(a("B"), Extension::from_elements([1]));
        i.add_edge(Role::new("r"), 0, 1);
        i.add_edge(Role::new("r"), 1, 1);
        assert!(i.is_model(&TBox::empty()).unwrap());
        i.set_concept(a("A"), Extension::from_elements([0]));
        assert!(!i.is_model(&t).unwrap());
        i.set_concept(a("A"), Extension::from_elements([0, 1]));
        assert!(i.is_model(&t).unwrap());
    }

    #[test]
    fn random_is_reproducible() {
        let sig = Signature::of_terms([&Concept::some("r", Concept::constant("A"))]);
        assert_eq!(random_interpretation(&sig, 5, 7), random_interpretation(&sig, 5, 7));
        assert_eq!(random_interpretation(&sig, 1, 3).domain_size(), 1);
        let no_roles = Signature::of_terms([&Concept::constant("A")]);
        assert_eq!(random_interpretation(&no_roles, 4, 1).roles().count(), 0);
    }
}
