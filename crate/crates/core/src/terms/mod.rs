//! First-order syntax with position-named variables, and unification over a
//! triangular substitution.

mod bindings;
mod position;

pub use bindings::{BindingDelta, Bindings, UnifyFailure};
pub use position::{InvalidPosition, Position};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Predicate,
    Function,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

/// Raised when a symbol is reused with a different arity.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("symbol `{name}` used with arity {found}, previously {expected}")]
pub struct ArityMismatch {
    pub name: String,
    pub expected: usize,
    pub found: usize,
}

/// Problem-wide symbol table. `(name, kind)` is unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
    index: HashMap<(String, SymbolKind), SymbolId>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(
        &mut self,
        name: &str,
        arity: usize,
        kind: SymbolKind,
    ) -> Result<SymbolId, ArityMismatch> {
        if let Some(&id) = self.index.get(&(name.to_owned(), kind)) {
            let expected = self.symbols[id.index()].arity;
            if expected != arity {
                return Err(ArityMismatch {
                    name: name.to_owned(),
                    expected,
                    found: arity,
                });
            }
            return Ok(id);
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(Symbol {
            name: name.to_owned(),
            arity,
            kind,
        });
        self.index.insert((name.to_owned(), kind), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str, kind: SymbolKind) -> Option<SymbolId> {
        self.index.get(&(name.to_owned(), kind)).copied()
    }

    pub fn get(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }
}

/// A clause variable: the `index`th variable of the clause attached below
/// `position`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub position: Position,
    pub index: u32,
}

impl Var {
    pub fn new(position: Position, index: u32) -> Self {
        Var { position, index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x@{}/{}", self.position, self.index)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Var),
    App(SymbolId, Arc<[Term]>),
}

impl Term {
    pub fn constant(symbol: SymbolId) -> Self {
        Term::App(symbol, Arc::from(Vec::new()))
    }

    pub fn app(symbol: SymbolId, args: Vec<Term>) -> Self {
        Term::App(symbol, Arc::from(args))
    }

    pub fn var(position: Position, index: u32) -> Self {
        Term::Var(Var::new(position, index))
    }

    /// Rename every variable to live at `at`, keeping its local index.
    pub fn rename(&self, at: &Position) -> Term {
        match self {
            Term::Var(v) => Term::Var(Var::new(at.clone(), v.index)),
            Term::App(f, args) if args.is_empty() => Term::App(*f, args.clone()),
            Term::App(f, args) => Term::App(*f, args.iter().map(|t| t.rename(at)).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|t| t.vars(out)),
        }
    }

    pub fn show<'a>(&'a self, symbols: &'a SymbolTable) -> Show<'a, Term> {
        Show(self, symbols)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub positive: bool,
    pub predicate: SymbolId,
    pub args: Arc<[Term]>,
}

impl Literal {
    pub fn new(positive: bool, predicate: SymbolId, args: Vec<Term>) -> Self {
        Literal {
            positive,
            predicate,
            args: Arc::from(args),
        }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            predicate: self.predicate,
            args: self.args.clone(),
        }
    }

    pub fn rename(&self, at: &Position) -> Literal {
        Literal {
            positive: self.positive,
            predicate: self.predicate,
            args: self.args.iter().map(|t| t.rename(at)).collect(),
        }
    }

    /// Same predicate, opposite sign: the shape of a potential connection.
    pub fn complements(&self, other: &Literal) -> bool {
        self.predicate == other.predicate && self.positive != other.positive
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.args.iter().for_each(|t| t.vars(&mut out));
        out
    }

    pub fn show<'a>(&'a self, symbols: &'a SymbolTable) -> Show<'a, Literal> {
        Show(self, symbols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    NegatedConjecture,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseId(pub u32);

impl ClauseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An input clause. Its variables are stored named at the root position; the
/// `index` of each is its local index, contiguous from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub role: Role,
    pub literals: Vec<Literal>,
    pub var_count: u32,
}

/// The clause's literals with each local variable `i` renamed to the variable
/// `(at, i)`.
pub fn instantiate_clause(clause: &Clause, at: &Position) -> Vec<Literal> {
    if at.is_root() {
        return clause.literals.clone();
    }
    clause.literals.iter().map(|l| l.rename(at)).collect()
}

/// True iff `l1` and the complement of `l2` fail to unify with no bindings in
/// place: the two literals can never form a connection.
pub fn never_unifiable(l1: &Literal, l2: &Literal) -> bool {
    if !l1.complements(l2) {
        return true;
    }
    let mut scratch = Bindings::new();
    scratch.unify_args(&l1.args, &l2.args).is_err()
}

/// True iff both tuples dereference to syntactically identical terms.
pub fn equal_under(s: &[Term], t: &[Term], bindings: &Bindings) -> bool {
    s.len() == t.len() && s.iter().zip(t).all(|(a, b)| bindings.equal(a, b))
}

/// Display adapter resolving symbol names through a table.
pub struct Show<'a, T>(&'a T, &'a SymbolTable);

impl fmt::Display for Show<'_, Term> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.0, self.1)
    }
}

impl fmt::Display for Show<'_, Literal> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = self.0;
        if !lit.positive {
            f.write_str("~")?;
        }
        write_app(f, self.1.name(lit.predicate), &lit.args, self.1)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, symbols: &SymbolTable) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, "{v}"),
        Term::App(s, args) => write_app(f, symbols.name(*s), args, symbols),
    }
}

fn write_app(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    args: &[Term],
    symbols: &SymbolTable,
) -> fmt::Result {
    f.write_str(name)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_term(f, a, symbols)?;
        }
        f.write_str(")")?;
    }
    Ok(())
}
