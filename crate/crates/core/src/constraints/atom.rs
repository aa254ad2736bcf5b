use std::fmt;
use std::sync::Arc;

use crate::terms::{Literal, Position, SymbolTable, Term, Var};

/// A fact about the current tableau.
///
/// Place literals are unsubstituted and carry position-named variables, so
/// the same tableau content yields the same atom whatever order it was built
/// in. Pair atoms are ordered (ancestor, descendant).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// `literal` sits at `position`.
    Place {
        literal: Literal,
        position: Position,
    },
    /// `var` is bound to `term` in the global substitution.
    Bind { var: Var, term: Term },
    /// The literals at the two positions can never be connected.
    NoConnect {
        ancestor: Position,
        descendant: Position,
    },
    /// Regularity obligation between two same-sign literals on one branch:
    /// `lhs` (ancestor arguments) must stay distinct from `rhs`.
    Diseq {
        ancestor: Position,
        descendant: Position,
        lhs: Arc<[Term]>,
        rhs: Arc<[Term]>,
    },
}

impl Atom {
    pub fn place(literal: Literal, position: Position) -> Atom {
        Atom::Place { literal, position }
    }

    pub fn bind(var: Var, term: Term) -> Atom {
        Atom::Bind { var, term }
    }

    pub fn no_connect(ancestor: Position, descendant: Position) -> Atom {
        debug_assert!(ancestor.is_strict_ancestor_of(&descendant));
        Atom::NoConnect {
            ancestor,
            descendant,
        }
    }

    pub fn is_bind(&self) -> bool {
        matches!(self, Atom::Bind { .. })
    }

    /// Dump form: `L@p`, `x@p/i->t`, `p~/~q`, `p!=q`.
    pub fn show<'a>(&'a self, symbols: &'a SymbolTable) -> ShowAtom<'a> {
        ShowAtom(self, symbols)
    }
}

pub struct ShowAtom<'a>(&'a Atom, &'a SymbolTable);

impl fmt::Display for ShowAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Atom::Place { literal, position } => {
                write!(f, "{}@{position}", literal.show(self.1))
            }
            Atom::Bind { var, term } => write!(f, "{var}->{}", term.show(self.1)),
            Atom::NoConnect {
                ancestor,
                descendant,
            } => write!(f, "{ancestor}~/~{descendant}"),
            Atom::Diseq {
                ancestor,
                descendant,
                ..
            } => write!(f, "{ancestor}!={descendant}"),
        }
    }
}

/// One constraint per line, atoms separated by spaces. The empty constraint
/// prints as `{}`.
pub fn dump_constraint(atoms: &[Atom], symbols: &SymbolTable) -> String {
    if atoms.is_empty() {
        return "{}".to_owned();
    }
    atoms
        .iter()
        .map(|a| a.show(symbols).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
