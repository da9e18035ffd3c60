//! Subsumption modulo an acyclic TBox without materializing expansions.
//!
//! Every distinct syntactic subterm becomes a node. A node is described by its
//! unfolded top-level atoms: the primitive names and `∃r.E` nodes reached by
//! replacing defined names at the top level by their definitions. Node-pair
//! subsumption follows the structural rule and is memoized, so the work is
//! polynomial in the number of nodes even when the expansion is exponential.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::symbol::{ConceptName, Role};
use crate::tbox::TBox;
use crate::term::Concept;

type NodeId = usize;

#[derive(Default)]
struct Unfolded {
    names: BTreeSet<ConceptName>,
    exists: Vec<(Role, NodeId)>,
}

/// Reusable reasoner over one acyclic TBox.
pub struct TBoxReasoner<'t> {
    tbox: &'t TBox,
    ids: HashMap<Concept, NodeId>,
    terms: Vec<Concept>,
    unfolded: Vec<Option<std::rc::Rc<Unfolded>>>,
    memo: HashMap<(NodeId, NodeId), bool>,
}

impl<'t> TBoxReasoner<'t> {
    pub fn new(tbox: &'t TBox) -> Result<TBoxReasoner<'t>> {
        tbox.check_acyclic()?;
        Ok(TBoxReasoner { tbox, ids: HashMap::new(), terms: Vec::new(), unfolded: Vec::new(), memo: HashMap::new() })
    }

    /// `c ⊑_T d`.
    pub fn subsumes(&mut self, c: &Concept, d: &Concept) -> bool {
        let a = self.node(c);
        let b = self.node(d);
        self.sub(a, b)
    }

    pub fn equivalent(&mut self, c: &Concept, d: &Concept) -> bool {
        self.subsumes(c, d) && self.subsumes(d, c)
    }

    /// Number of nodes created so far.
    pub fn node_count(&self) -> usize {
        self.terms.len()
    }

    fn node(&mut self, c: &Concept) -> NodeId {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        let id = self.terms.len();
        self.terms.push(c.clone());
        self.unfolded.push(None);
        self.ids.insert(c.clone(), id);
        id
    }

    fn unfold(&mut self, id: NodeId) -> std::rc::Rc<Unfolded> {
        if let Some(u) = &self.unfolded[id] {
            return u.clone();
        }
        let mut out = Unfolded::default();
        let mut seen_exists = BTreeSet::new();
        let mut seen_defined = BTreeSet::new();
        let mut stack: Vec<Concept> = self.terms[id].top_level().to_vec();
        while let Some(atom) = stack.pop() {
            match &atom {
                Concept::Name(n) => match self.tbox.definition(n) {
                    Some(rhs) => {
                        if seen_defined.insert(n.clone()) {
                            stack.extend(rhs.top_level().iter().cloned());
                        }
                    }
                    None => {
                        out.names.insert(n.clone());
                    }
                },
                Concept::Exists(r, filler) => {
                    let f = self.node(filler);
                    if seen_exists.insert((r.clone(), f)) {
                        out.exists.push((r.clone(), f));
                    }
                }
                _ => unreachable!("top-level conjuncts are atoms"),
            }
        }
        let rc = std::rc::Rc::new(out);
        self.unfolded[id] = Some(rc.clone());
        rc
    }

    fn sub(&mut self, a: NodeId, b: NodeId) -> bool {
        if a == b {
            return true;
        }
        if let Some(&v) = self.memo.get(&(a, b)) {
            return v;
        }
        let ua = self.unfold(a);
        let ub = self.unfold(b);
        let result = ub.names.is_subset(&ua.names)
            && ub.exists.iter().all(|(s, e)| {
                ua.exists.iter().any(|(r, f)| r == s && self.sub(*f, *e))
            });
        self.memo.insert((a, b), result);
        result
    }
}

/// `c ⊑_T d`. Errors if `t` is cyclic.
pub fn subsumes_wrt_tbox(t: &TBox, c: &Concept, d: &Concept) -> Result<bool> {
    Ok(TBoxReasoner::new(t)?.subsumes(c, d))
}

/// `c ≡_T d`. Errors if `t` is cyclic.
pub fn equivalent_wrt_tbox(t: &TBox, c: &Concept, d: &Concept) -> Result<bool> {
    Ok(TBoxReasoner::new(t)?.equivalent(c, d))
}
