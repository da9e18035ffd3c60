//! Interned identifiers for concept and role names.
//!
//! A [`Symbol`] is a pointer into a process-wide interning table. Equality and
//! hashing use the pointer, ordering uses the string contents so that
//! canonical forms do not depend on the order in which names were first seen.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

/// Names starting with this prefix are reserved for generated variables.
pub const RESERVED_PREFIX: &str = "_v";

fn table() -> &'static Mutex<HashSet<Arc<str>>> {
    static TABLE: OnceLock<Mutex<HashSet<Arc<str>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashSet::new()))
}

#[derive(Clone)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn intern(name: &str) -> Symbol {
        let mut table = table().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = table.get(name) {
            return Symbol(existing.clone());
        }
        let arc: Arc<str> = Arc::from(name);
        table.insert(arc.clone());
        Symbol(arc)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as *const u8 as usize).hash(state)
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A role name `r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Role(pub Symbol);

impl Role {
    pub fn new(name: &str) -> Role {
        Role(Symbol::intern(name))
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether a concept name may be replaced by a substitution.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NameKind {
    Constant,
    Variable,
}

/// A concept name together with its kind.
///
/// Two names with the same symbol but different kinds are distinct; problem
/// construction rejects such mixtures.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptName {
    pub kind: NameKind,
    pub symbol: Symbol,
}

impl ConceptName {
    pub fn constant(name: &str) -> ConceptName {
        ConceptName { kind: NameKind::Constant, symbol: Symbol::intern(name) }
    }

    pub fn variable(name: &str) -> ConceptName {
        ConceptName { kind: NameKind::Variable, symbol: Symbol::intern(name) }
    }

    pub fn is_variable(&self) -> bool {
        self.kind == NameKind::Variable
    }

    pub fn with_kind(&self, kind: NameKind) -> ConceptName {
        ConceptName { kind, symbol: self.symbol.clone() }
    }
}

impl fmt::Display for ConceptName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbol.fmt(f)
    }
}

impl fmt::Debug for ConceptName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NameKind::Constant => write!(f, "{}", self.symbol),
            NameKind::Variable => write!(f, "?{}", self.symbol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_gives_pointer_equality() {
        let a = Symbol::intern("Woman");
        let b = Symbol::intern(&String::from("Woman"));
        assert_eq!(a, b);
        assert!(Arc::ptr_eq(&a.0, &b.0));
    }

    #[test]
    fn ordering_is_lexicographic() {
        let z = Symbol::intern("zeta_order");
        let a = Symbol::intern("alpha_order");
        assert!(a < z);
    }

    #[test]
    fn kind_separates_names() {
        assert_ne!(ConceptName::constant("X"), ConceptName::variable("X"));
    }
}
