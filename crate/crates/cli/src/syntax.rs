//! The problem-file format.
//!
//! ```text
//! term := "top" | NAME | "(" "and" term+ ")" | "(" "some" NAME term ")"
//! stmt := "(" "variables" NAME+ ")" | "(" "constants" NAME+ ")"
//!       | "(" "define" NAME term ")" | "(" "unify" term term ")"
//! ```
//!
//! `;` starts a comment that runs to the end of the line. Names that are not
//! declared as variables are constants. Declarations may appear anywhere in
//! the file; they are collected before any term is built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use el_unification::{Concept, ConceptName, Definition, Equation, Role, TBox, UnificationProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
}

fn tokenize(text: &str) -> Vec<(Token, Pos)> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        let mut col = 0;
        while let Some((_, ch)) = chars.next() {
            col += 1;
            let pos = Pos { line: l + 1, col };
            match ch {
                ';' => break,
                '(' => out.push((Token::Open, pos)),
                ')' => out.push((Token::Close, pos)),
                c if c.is_whitespace() => {}
                c => {
                    let mut word = String::from(c);
                    while let Some(&(_, next)) = chars.peek() {
                        if next.is_whitespace() || matches!(next, '(' | ')' | ';') {
                            break;
                        }
                        word.push(next);
                        chars.next();
                        col += 1;
                    }
                    out.push((Token::Word(word), pos));
                }
            }
        }
    }
    out
}

fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let tokens = tokenize(text);
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    for (tok, pos) in tokens {
        match tok {
            Token::Open => stack.push((Vec::new(), pos)),
            Token::Close => {
                let Some((items, open)) = stack.pop() else {
                    return err(pos, "unbalanced `)`");
                };
                let list = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            Token::Word(w) => match stack.last_mut() {
                Some((parent, _)) => parent.push(Sexp::Atom(w, pos)),
                None => return err(pos, format!("expected `(`, found `{}`", w)),
            },
        }
    }
    if let Some((_, open)) = stack.pop() {
        return err(open, "unclosed `(`");
    }
    Ok(top)
}

fn check_name(word: &str, pos: Pos) -> Result<(), ParseError> {
    if word.starts_with("_v") {
        return err(pos, format!("`{}`: names starting with `_v` are reserved", word));
    }
    let mut chars = word.chars();
    let first_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
    if !first_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return err(pos, format!("invalid name `{}`", word));
    }
    if matches!(word, "top" | "and" | "some" | "variables" | "constants" | "define" | "unify") {
        return err(pos, format!("`{}` is a keyword", word));
    }
    Ok(())
}

fn name_of(s: &Sexp) -> Result<(&str, Pos), ParseError> {
    match s {
        Sexp::Atom(w, p) => {
            check_name(w, *p)?;
            Ok((w, *p))
        }
        Sexp::List(_, p) => err(*p, "expected a name, found a list"),
    }
}

fn head(items: &[Sexp], pos: Pos) -> Result<&str, ParseError> {
    match items.first() {
        Some(Sexp::Atom(w, _)) => Ok(w),
        Some(other) => err(other.pos(), "expected a keyword"),
        None => err(pos, "empty list"),
    }
}

/// A parsed problem file.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    /// Names declared with `(variables ...)`.
    pub variables: BTreeSet<ConceptName>,
    /// Names declared with `(constants ...)`.
    pub constants: BTreeSet<ConceptName>,
    pub tbox: TBox,
    pub equations: Vec<Equation>,
}

impl ProblemFile {
    /// The equations, with every declared name registered.
    pub fn problem(&self) -> UnificationProblem {
        UnificationProblem::with_signature(self.equations.clone(), self.variables.clone(), self.constants.clone())
            .expect("parser rejects kind clashes")
    }

    pub fn has_tbox(&self) -> bool {
        !self.tbox.is_empty()
    }
}

struct Builder {
    variables: BTreeSet<String>,
}

impl Builder {
    fn concept_name(&self, w: &str) -> ConceptName {
        if self.variables.contains(w) {
            ConceptName::variable(w)
        } else {
            ConceptName::constant(w)
        }
    }

    fn term(&self, s: &Sexp) -> Result<Concept, ParseError> {
        match s {
            Sexp::Atom(w, _) if w == "top" => Ok(Concept::top()),
            Sexp::Atom(..) => {
                let (w, _) = name_of(s)?;
                Ok(Concept::name(self.concept_name(w)))
            }
            Sexp::List(items, pos) => match head(items, *pos)? {
                "and" => {
                    if items.len() < 2 {
                        return err(*pos, "`and` needs at least one argument");
                    }
                    Ok(Concept::and(items[1..].iter().map(|t| self.term(t)).collect::<Result<Vec<_>, _>>()?))
                }
                "some" => {
                    if items.len() != 3 {
                        return err(*pos, "`some` takes a role and a term");
                    }
                    let (r, _) = name_of(&items[1])?;
                    Ok(Concept::exists(Role::new(r), self.term(&items[2])?))
                }
                other => err(items[0].pos(), format!("unknown term constructor `{}`", other)),
            },
        }
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let stmts = read_all(text)?;

    // Declarations first, so that terms can mention names declared later.
    let mut kinds: BTreeMap<String, (bool, Pos)> = BTreeMap::new();
    for s in &stmts {
        let Sexp::List(items, pos) = s else { unreachable!("read_all only yields lists at top level") };
        let is_var = match head(items, *pos)? {
            "variables" => true,
            "constants" => false,
            _ => continue,
        };
        if items.len() < 2 {
            return err(*pos, "declaration lists no names");
        }
        for item in &items[1..] {
            let (w, p) = name_of(item)?;
            if let Some(&(prev, prev_pos)) = kinds.get(w) {
                if prev != is_var {
                    return err(p, format!("`{}` declared both as variable and constant (see {})", w, prev_pos));
                }
            } else {
                kinds.insert(w.to_string(), (is_var, p));
            }
        }
    }
    let b = Builder { variables: kinds.iter().filter(|(_, (v, _))| *v).map(|(w, _)| w.clone()).collect() };

    let mut definitions: Vec<(Definition, Pos)> = Vec::new();
    let mut equations = Vec::new();
    for s in &stmts {
        let Sexp::List(items, pos) = s else { unreachable!() };
        match head(items, *pos)? {
            "variables" | "constants" => {}
            "define" => {
                if items.len() != 3 {
                    return err(*pos, "`define` takes a name and a term");
                }
                let (w, p) = name_of(&items[1])?;
                let lhs = b.concept_name(w);
                if lhs.is_variable() {
                    return err(p, format!("`{}` is a variable and cannot be defined", w));
                }
                if let Some((_, first)) = definitions.iter().find(|(d, _)| d.lhs == lhs) {
                    return err(p, format!("`{}` is already defined at {}", w, first));
                }
                definitions.push((Definition::new(lhs, b.term(&items[2])?), p));
            }
            "unify" => {
                if items.len() != 3 {
                    return err(*pos, "`unify` takes two terms");
                }
                equations.push(Equation::new(b.term(&items[1])?, b.term(&items[2])?));
            }
            other => return err(items[0].pos(), format!("unknown statement `{}`", other)),
        }
    }

    let positions: BTreeMap<ConceptName, Pos> = definitions.iter().map(|(d, p)| (d.lhs.clone(), *p)).collect();
    let tbox = TBox::new(definitions.into_iter().map(|(d, _)| d).collect()).expect("duplicates rejected above");
    if let Err(e) = tbox.check_acyclic() {
        let pos = match &e {
            el_unification::Error::CyclicTBox(n) => positions.get(n).copied(),
            _ => None,
        };
        return err(pos.unwrap_or(Pos { line: 1, col: 1 }), e.to_string());
    }

    let declared = |want: bool| {
        kinds
            .iter()
            .filter(|(_, (v, _))| *v == want)
            .map(|(w, _)| if want { ConceptName::variable(w) } else { ConceptName::constant(w) })
            .collect()
    };
    Ok(ProblemFile { variables: declared(true), constants: declared(false), tbox, equations })
}

/// Prints `file` so that [`parse_problem`] reads back an equal problem.
pub fn print_problem(file: &ProblemFile) -> String {
    let mut out = String::new();
    let list = |out: &mut String, kw: &str, names: &BTreeSet<ConceptName>| {
        if !names.is_empty() {
            let names: Vec<String> = names.iter().map(|n| n.to_string()).collect();
            writeln!(out, "({} {})", kw, names.join(" ")).unwrap();
        }
    };
    list(&mut out, "variables", &file.variables);
    list(&mut out, "constants", &file.constants);
    for d in file.tbox.definitions() {
        writeln!(out, "(define {} {})", d.lhs, d.rhs).unwrap();
    }
    for eq in &file.equations {
        writeln!(out, "(unify {} {})", eq.lhs, eq.rhs).unwrap();
    }
    out
}
