//! Structural subsumption, equivalence and reduced forms.
//!
//! `C ⊑ D` holds iff every top-level concept name of `D` is a top-level name
//! of `C` and every top-level `∃s.E` of `D` has a top-level `∃s.F` in `C` with
//! `F ⊑ E`. The recursion visits each pair of subterm positions at most once,
//! so it runs in `O(|C|·|D|)` without a cache.

mod acyclic;

pub use acyclic::{equivalent_wrt_tbox, subsumes_wrt_tbox, TBoxReasoner};

use crate::term::Concept;

/// `c ⊑ d`.
pub fn subsumes(c: &Concept, d: &Concept) -> bool {
    let lhs = c.top_level();
    d.top_level().iter().all(|goal| match goal {
        Concept::Name(_) => lhs.contains(goal),
        Concept::Exists(role, filler) => lhs.iter().any(|cand| match cand {
            Concept::Exists(r, f) => r == role && subsumes(f, filler),
            _ => false,
        }),
        _ => unreachable!("top-level conjuncts are atoms"),
    })
}

pub fn equivalent(c: &Concept, d: &Concept) -> bool {
    subsumes(c, d) && subsumes(d, c)
}

/// `c ⊏ d`: `c ⊑ d` and not `d ⊑ c`.
pub fn strictly_subsumes(c: &Concept, d: &Concept) -> bool {
    subsumes(c, d) && !subsumes(d, c)
}

/// Reduced form under `C ⊓ ⊤ → C`, `A ⊓ A → A` and
/// `∃r.C ⊓ ∃r.D → ∃r.C` (for `C ⊑ D`), applied innermost-first.
///
/// Of two equivalent conjuncts the one that is smaller in the term order
/// survives, which makes the output canonical.
pub fn reduce(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Name(_) => c.clone(),
        Concept::Exists(r, filler) => Concept::exists(r.clone(), reduce(filler)),
        Concept::Conj(parts) => {
            let mut reduced: Vec<Concept> = parts.iter().map(reduce).collect();
            reduced.sort();
            let mut kept: Vec<Concept> = Vec::with_capacity(reduced.len());
            for atom in reduced {
                if kept.iter().any(|k| subsumes(k, &atom)) {
                    continue;
                }
                kept.retain(|k| !subsumes(&atom, k));
                kept.push(atom);
            }
            Concept::from_atoms(kept)
        }
    }
}

/// Equivalence decided by comparing reduced forms modulo AC.
pub fn equivalent_via_reduction(c: &Concept, d: &Concept) -> bool {
    reduce(c) == reduce(d)
}

/// True if no reduction rule applies anywhere in `c`.
pub fn is_reduced(c: &Concept) -> bool {
    match c {
        Concept::Top | Concept::Name(_) => true,
        Concept::Exists(_, filler) => is_reduced(filler),
        Concept::Conj(parts) => {
            parts.iter().all(is_reduced)
                && parts.iter().enumerate().all(|(i, p)| {
                    parts.iter().enumerate().all(|(j, q)| i == j || !subsumes(p, q))
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Concept {
        Concept::constant(s)
    }

    fn child(c: Concept) -> Concept {
        Concept::some("child", c)
    }

    #[test]
    fn woman_with_daughter_is_a_woman() {
        let c = Concept::and([n("Woman"), child(n("Woman"))]);
        assert!(subsumes(&c, &n("Woman")));
        assert!(!subsumes(&n("Woman"), &c));
    }

    #[test]
    fn everything_is_below_top() {
        assert!(subsumes(&n("A"), &Concept::top()));
        assert!(subsumes(&Concept::top(), &Concept::top()));
        assert!(!subsumes(&Concept::top(), &n("A")));
        assert!(!equivalent(&Concept::top(), &n("A")));
    }

    #[test]
    fn rich_daughter_equivalence() {
        let lhs = Concept::and([child(n("Rich")), child(Concept::and([n("Woman"), n("Rich")]))]);
        let rhs = child(Concept::and([n("Woman"), n("Rich")]));
        assert!(subsumes(&lhs, &rhs));
        assert!(subsumes(&rhs, &lhs));
        assert!(equivalent(&lhs, &rhs));
        assert!(equivalent_via_reduction(&lhs, &rhs));
        assert_eq!(reduce(&lhs), rhs);
    }

    #[test]
    fn strictness() {
        let ab = Concept::and([n("A"), n("B")]);
        assert!(strictly_subsumes(&ab, &n("A")));
        assert!(!strictly_subsumes(&n("A"), &n("A")));
    }

    #[test]
    fn reduce_examples() {
        let t = Concept::and([n("A"), n("A"), Concept::top()]);
        assert_eq!(reduce(&t), n("A"));
        let u = Concept::some("r", Concept::and([n("A"), n("A")]));
        assert_eq!(reduce(&u), Concept::some("r", n("A")));
        assert!(is_reduced(&reduce(&t)));
        assert!(!is_reduced(&t));
    }

    #[test]
    fn distinct_constants_are_not_equivalent() {
        assert!(!equivalent_via_reduction(&n("A"), &n("B")));
        let c = Concept::and([n("A"), Concept::some("r", n("B"))]);
        let d = Concept::and([Concept::some("r", n("B")), n("A")]);
        assert!(equivalent_via_reduction(&c, &d));
    }

    #[test]
    fn equivalent_fillers_keep_one_copy() {
        let x = Concept::some("r", Concept::and([n("A"), Concept::some("s", n("B")), Concept::some("s", Concept::top())]));
        let y = Concept::some("r", Concept::and([n("A"), Concept::some("s", n("B"))]));
        let t = Concept::and([x, y.clone()]);
        assert_eq!(reduce(&t), y);
    }
}
