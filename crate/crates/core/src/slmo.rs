//! Terms over `{∧, 1, f_1, ..., f_n}` (semilattices with monotone
//! operators) and their translation to and from EL.
//!
//! `A ↦ a`, `X ↦ x`, `⊤ ↦ 1`, `⊓ ↦ ∧`, `∃r_i ↦ f_i`. Names keep their
//! spelling in both directions so that translations round-trip.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::guess::Outcome;
use crate::problem::UnificationProblem;
use crate::solve::{solve, SolveConfig};
use crate::subsumption::equivalent;
use crate::symbol::{ConceptName, NameKind, Role, Symbol};
use crate::term::Concept;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SLTerm {
    One,
    Var(Symbol),
    Const(Symbol),
    Meet(Box<SLTerm>, Box<SLTerm>),
    Mono(u32, Box<SLTerm>),
}

impl SLTerm {
    pub fn var(name: &str) -> SLTerm {
        SLTerm::Var(Symbol::intern(name))
    }

    pub fn constant(name: &str) -> SLTerm {
        SLTerm::Const(Symbol::intern(name))
    }

    pub fn meet(s: SLTerm, t: SLTerm) -> SLTerm {
        SLTerm::Meet(Box::new(s), Box::new(t))
    }

    pub fn mono(i: u32, s: SLTerm) -> SLTerm {
        SLTerm::Mono(i, Box::new(s))
    }

    /// Infix rendering, e.g. `a ∧ f1(1)`.
    pub fn infix(&self) -> String {
        match self {
            SLTerm::One => "1".into(),
            SLTerm::Var(x) => format!("?{}", x),
            SLTerm::Const(a) => a.to_string(),
            SLTerm::Meet(s, t) => {
                let side = |u: &SLTerm| match u {
                    SLTerm::Meet(..) => format!("({})", u.infix()),
                    _ => u.infix(),
                };
                format!("{} ∧ {}", side(s), side(t))
            }
            SLTerm::Mono(i, s) => format!("f{}({})", i, s.infix()),
        }
    }
}

impl fmt::Display for SLTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SLTerm::One => f.write_str("1"),
            SLTerm::Var(x) => write!(f, "?{}", x),
            SLTerm::Const(a) => write!(f, "{}", a),
            SLTerm::Meet(s, t) => write!(f, "(meet {} {})", s, t),
            SLTerm::Mono(i, s) => write!(f, "(f {} {})", i, s),
        }
    }
}

/// Bijection between roles and operator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleIndex {
    to_index: BTreeMap<Role, u32>,
    to_role: BTreeMap<u32, Role>,
}

impl RoleIndex {
    pub fn new() -> RoleIndex {
        RoleIndex::default()
    }

    /// Fails if either side is already taken.
    pub fn insert(&mut self, role: Role, i: u32) -> bool {
        if self.to_index.contains_key(&role) || self.to_role.contains_key(&i) {
            return false;
        }
        self.to_index.insert(role.clone(), i);
        self.to_role.insert(i, role);
        true
    }

    /// Roles spelled `r<n>` get index `n` when that is unambiguous; otherwise
    /// roles are numbered from 1 in term order.
    pub fn for_roles<'a, I: IntoIterator<Item = &'a Role>>(roles: I) -> RoleIndex {
        let roles: Vec<&Role> = roles.into_iter().collect();
        let mut idx = RoleIndex::new();
        let numbered = roles.iter().all(|r| {
            r.0.as_str()
                .strip_prefix('r')
                .and_then(|n| n.parse::<u32>().ok())
                .is_some_and(|n| n >= 1 && idx.insert((*r).clone(), n))
        });
        if numbered {
            return idx;
        }
        let mut idx = RoleIndex::new();
        for (i, r) in roles.into_iter().enumerate() {
            idx.insert(r.clone(), i as u32 + 1);
        }
        idx
    }

    pub fn index(&self, r: &Role) -> Option<u32> {
        self.to_index.get(r).copied()
    }

    pub fn role(&self, i: u32) -> Option<&Role> {
        self.to_role.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Role)> {
        self.to_role.iter().map(|(i, r)| (*i, r))
    }
}

/// `t_C`.
pub fn to_slmo(c: &Concept, index: &RoleIndex) -> Result<SLTerm> {
    Ok(match c {
        Concept::Top => SLTerm::One,
        Concept::Name(n) if n.is_variable() => SLTerm::Var(n.symbol.clone()),
        Concept::Name(n) => SLTerm::Const(n.symbol.clone()),
        Concept::Exists(r, filler) => {
            let i = index.index(r).ok_or_else(|| Error::UnindexedRole(r.0.clone()))?;
            SLTerm::mono(i, to_slmo(filler, index)?)
        }
        Concept::Conj(parts) => {
            let mut it = parts.iter();
            let first = to_slmo(it.next().unwrap(), index)?;
            it.try_fold(first, |acc, p| Ok::<_, Error>(SLTerm::meet(acc, to_slmo(p, index)?)))?
        }
    })
}

pub fn from_slmo(t: &SLTerm, index: &RoleIndex) -> Result<Concept> {
    Ok(match t {
        SLTerm::One => Concept::Top,
        SLTerm::Var(x) => Concept::Name(ConceptName { kind: NameKind::Variable, symbol: x.clone() }),
        SLTerm::Const(a) => Concept::Name(ConceptName { kind: NameKind::Constant, symbol: a.clone() }),
        SLTerm::Meet(s, u) => Concept::and([from_slmo(s, index)?, from_slmo(u, index)?]),
        SLTerm::Mono(i, s) => {
            let r = index.role(*i).ok_or(Error::UnindexedOperator(*i))?;
            Concept::exists(r.clone(), from_slmo(s, index)?)
        }
    })
}

/// Indices used in `t`.
pub fn operators(t: &SLTerm) -> Vec<u32> {
    let mut out = Vec::new();
    fn go(t: &SLTerm, out: &mut Vec<u32>) {
        match t {
            SLTerm::Meet(s, u) => {
                go(s, out);
                go(u, out);
            }
            SLTerm::Mono(i, s) => {
                out.push(*i);
                go(s, out)
            }
            _ => {}
        }
    }
    go(t, &mut out);
    out.sort();
    out.dedup();
    out
}

/// An index naming each operator `f_i` by the role `r<i>`.
pub fn default_index_for(terms: &[&SLTerm]) -> RoleIndex {
    let mut idx = RoleIndex::new();
    for t in terms {
        for i in operators(t) {
            idx.insert(Role::new(&format!("r{}", i)), i);
        }
    }
    idx
}

/// `s =_SLmO t`, decided as equivalence of the EL translations.
pub fn slmo_word_problem(s: &SLTerm, t: &SLTerm) -> bool {
    let idx = default_index_for(&[s, t]);
    let c = from_slmo(s, &idx).expect("index covers all operators");
    let d = from_slmo(t, &idx).expect("index covers all operators");
    equivalent(&c, &d)
}

/// Unification modulo SLmO through the EL translation. Returns a unifier
/// mapping variable names to SLmO terms, or `None` if there is none.
pub fn slmo_unify(pairs: &[(SLTerm, SLTerm)], cfg: &SolveConfig) -> Result<Option<BTreeMap<Symbol, SLTerm>>> {
    let all: Vec<&SLTerm> = pairs.iter().flat_map(|(s, t)| [s, t]).collect();
    let idx = default_index_for(&all);
    let eqs = pairs
        .iter()
        .map(|(s, t)| Ok((from_slmo(s, &idx)?, from_slmo(t, &idx)?)))
        .collect::<Result<Vec<_>>>()?;
    let g = UnificationProblem::from_pairs(eqs)?;
    match solve(&g, cfg)?.outcome {
        Outcome::Sat(s) => {
            let out = g
                .variables()
                .iter()
                .map(|x| Ok((x.symbol.clone(), to_slmo(&s.expanded_image(x), &idx)?)))
                .collect::<Result<_>>()?;
            Ok(Some(out))
        }
        Outcome::Unsat => Ok(None),
        Outcome::BudgetExceeded => Err(Error::BudgetExceeded),
    }
}

/// Parses `1`, `name`, `?name`, `(meet s t)` and `(f i s)`.
pub fn parse_slmo(text: &str) -> Result<SLTerm> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let t = parse_at(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Syntax(format!("trailing input after term: `{}`", tokens[pos])));
    }
    Ok(t)
}

/// Parses a whitespace-separated sequence of terms.
pub fn parse_slmo_many(text: &str) -> Result<Vec<SLTerm>> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < tokens.len() {
        out.push(parse_at(&tokens, &mut pos)?);
    }
    Ok(out)
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split(';').next().unwrap_or("");
        let spaced = line.replace('(', " ( ").replace(')', " ) ");
        out.extend(spaced.split_whitespace().map(str::to_string));
    }
    out
}

fn parse_at(tokens: &[String], pos: &mut usize) -> Result<SLTerm> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::Syntax("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "1" => Ok(SLTerm::One),
        ")" => Err(Error::Syntax("unexpected `)`".into())),
        "(" => {
            let head = tokens.get(*pos).ok_or_else(|| Error::Syntax("unexpected end of input".into()))?;
            *pos += 1;
            let t = match head.as_str() {
                "meet" => {
                    let s = parse_at(tokens, pos)?;
                    let u = parse_at(tokens, pos)?;
                    SLTerm::meet(s, u)
                }
                "f" => {
                    let i = tokens
                        .get(*pos)
                        .and_then(|t| t.parse::<u32>().ok())
                        .ok_or_else(|| Error::Syntax("expected operator index after `f`".into()))?;
                    *pos += 1;
                    SLTerm::mono(i, parse_at(tokens, pos)?)
                }
                other => return Err(Error::Syntax(format!("unknown operator `{}`", other))),
            };
            match tokens.get(*pos).map(String::as_str) {
                Some(")") => {
                    *pos += 1;
                    Ok(t)
                }
                _ => Err(Error::Syntax("expected `)`".into())),
            }
        }
        name => {
            let (is_var, bare) = match name.strip_prefix('?') {
                Some(b) => (true, b),
                None => (false, name),
            };
            let valid = bare.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && bare.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Syntax(format!("invalid name `{}`", name)));
            }
            Ok(if is_var { SLTerm::var(bare) } else { SLTerm::constant(bare) })
        }
    }
}
