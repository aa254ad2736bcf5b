//! Reader for TPTP clause normal form problems.
//!
//! Supports `cnf(name, role, clause).` statements with optional annotations,
//! `include('file').` with an optional name selection, quoted atoms, and both
//! comment styles. Equality is read as an ordinary binary predicate named `=`.

mod lexer;
mod parser;

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::terms::{Clause, ClauseId, Literal, Role, SymbolKind, SymbolTable, Term, Var};
use parser::{RawAtom, RawLiteral, RawTerm, Statement};

pub const EQUALITY: &str = "=";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{file}:{line}:{column}: {message}")]
pub struct ParseDiagnostic {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    /// In file and include order.
    pub clauses: Vec<Clause>,
    pub symbols: SymbolTable,
    pub origin: String,
    pub has_equality: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StartPolicy {
    #[default]
    ConjectureFirst,
    All,
}

impl Problem {
    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id.index()]
    }

    pub fn clause_ids(&self) -> impl Iterator<Item = ClauseId> {
        (0..self.clauses.len() as u32).map(ClauseId)
    }

    pub fn find_clause(&self, name: &str) -> Option<ClauseId> {
        self.clauses
            .iter()
            .position(|c| c.name == name)
            .map(|i| ClauseId(i as u32))
    }

    /// Parse a problem from text. Includes are resolved against
    /// `include_dir` only.
    pub fn parse_str(
        src: &str,
        origin: &str,
        include_dir: Option<&Path>,
    ) -> Result<Problem, ParseDiagnostic> {
        let mut loader = Loader::new(include_dir.map(Path::to_path_buf), None, None);
        loader.load_source(src, origin, None)?;
        Ok(loader.finish(origin))
    }

    /// Render as TPTP. Variables print as `X<local index>`.
    pub fn to_tptp(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            let role = match c.role {
                Role::Axiom => "axiom",
                Role::NegatedConjecture => "negated_conjecture",
                Role::Other => "plain",
            };
            let _ = write!(out, "cnf({}, {role}, ", quote_formula_name(&c.name));
            if c.literals.is_empty() {
                out.push_str("$false");
            }
            for (i, l) in c.literals.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                self.write_literal(&mut out, l);
            }
            out.push_str(").\n");
        }
        out
    }

    fn write_literal(&self, out: &mut String, l: &Literal) {
        let name = self.symbols.name(l.predicate);
        if name == EQUALITY && l.args.len() == 2 {
            self.write_term(out, &l.args[0]);
            out.push_str(if l.positive { " = " } else { " != " });
            self.write_term(out, &l.args[1]);
            return;
        }
        if !l.positive {
            out.push('~');
        }
        self.write_app(out, name, &l.args, false);
    }

    fn write_term(&self, out: &mut String, t: &Term) {
        match t {
            Term::Var(v) => {
                let _ = write!(out, "X{}", v.index);
            }
            Term::App(f, args) => self.write_app(out, self.symbols.name(*f), args, true),
        }
    }

    fn write_app(&self, out: &mut String, name: &str, args: &[Term], in_term: bool) {
        let constant_only = name.starts_with(|c: char| c == '"' || c.is_ascii_digit());
        if constant_only && !(in_term && args.is_empty()) {
            out.push_str(&quote(name));
        } else {
            out.push_str(&quote_name(name));
        }
        if !args.is_empty() {
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.write_term(out, a);
            }
            out.push(')');
        }
    }
}

fn quote_formula_name(name: &str) -> String {
    if name.starts_with(['$', '"']) {
        quote(name)
    } else {
        quote_name(name)
    }
}

fn quote(name: &str) -> String {
    format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
}

fn quote_name(name: &str) -> String {
    let mut chars = name.chars();
    let plain = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some('$') => {
            let rest: Vec<char> = chars.collect();
            rest.first().is_some_and(|c| c.is_ascii_lowercase())
                && rest.iter().all(|c| c.is_ascii_alphanumeric() || *c == '_')
        }
        Some('"') if name.len() >= 2 && name.ends_with('"') => {
            let inner = &name[1..name.len() - 1];
            return format!("\"{}\"", inner.replace('\\', "\\\\").replace('"', "\\\""));
        }
        Some(c) if c.is_ascii_digit() => name.chars().all(|c| c.is_ascii_digit()),
        _ => false,
    };
    if plain {
        name.to_owned()
    } else {
        quote(name)
    }
}

/// Read a problem file, resolving includes against `include_dir`, then the
/// including file's directory, then the problem's directory, then `$TPTP`.
pub fn parse_problem(path: &Path, include_dir: Option<&Path>) -> Result<Problem, ParseDiagnostic> {
    let tptp_root = std::env::var_os("TPTP").map(PathBuf::from);
    let mut loader = Loader::new(
        include_dir.map(Path::to_path_buf),
        path.parent().map(Path::to_path_buf),
        tptp_root,
    );
    let origin = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|e| ParseDiagnostic {
        file: origin.clone(),
        line: 1,
        column: 1,
        message: format!("cannot read problem: {e}"),
    })?;
    loader.load_source(&src, &origin, path.parent())?;
    Ok(loader.finish(&origin))
}

/// Clauses to try as start clauses, as indices in input order.
pub fn select_start_clauses(problem: &Problem, policy: StartPolicy) -> Vec<ClauseId> {
    let all = problem.clause_ids();
    match policy {
        StartPolicy::All => all.collect(),
        StartPolicy::ConjectureFirst => {
            let conj: Vec<ClauseId> = problem
                .clause_ids()
                .filter(|&id| problem.clause(id).role == Role::NegatedConjecture)
                .collect();
            if conj.is_empty() {
                all.collect()
            } else {
                conj
            }
        }
    }
}

const MAX_INCLUDE_DEPTH: usize = 32;

struct Loader {
    include_dir: Option<PathBuf>,
    problem_dir: Option<PathBuf>,
    tptp_root: Option<PathBuf>,
    symbols: SymbolTable,
    clauses: Vec<Clause>,
    has_equality: bool,
    stack: Vec<PathBuf>,
}

impl Loader {
    fn new(
        include_dir: Option<PathBuf>,
        problem_dir: Option<PathBuf>,
        tptp_root: Option<PathBuf>,
    ) -> Self {
        Loader {
            include_dir,
            problem_dir,
            tptp_root,
            symbols: SymbolTable::new(),
            clauses: Vec::new(),
            has_equality: false,
            stack: Vec::new(),
        }
    }

    fn finish(self, origin: &str) -> Problem {
        Problem {
            clauses: self.clauses,
            symbols: self.symbols,
            origin: origin.to_owned(),
            has_equality: self.has_equality,
        }
    }

    fn resolve(&self, file: &str, current_dir: Option<&Path>) -> Option<PathBuf> {
        let candidate = Path::new(file);
        if candidate.is_absolute() {
            return candidate.is_file().then(|| candidate.to_path_buf());
        }
        [
            self.include_dir.as_deref(),
            current_dir,
            self.problem_dir.as_deref(),
            self.tptp_root.as_deref(),
        ]
        .into_iter()
        .flatten()
        .map(|dir| dir.join(candidate))
        .find(|p| p.is_file())
    }

    fn load_source(
        &mut self,
        src: &str,
        file: &str,
        dir: Option<&Path>,
    ) -> Result<(), ParseDiagnostic> {
        self.load_selected(src, file, dir, None)
    }

    fn load_selected(
        &mut self,
        src: &str,
        file: &str,
        dir: Option<&Path>,
        selection: Option<&HashSet<String>>,
    ) -> Result<(), ParseDiagnostic> {
        for statement in parser::parse_statements(src, file)? {
            match statement {
                Statement::Include {
                    file: target,
                    selection: names,
                    line,
                    column,
                } => {
                    let diag = |message: String| ParseDiagnostic {
                        file: file.to_owned(),
                        line,
                        column,
                        message,
                    };
                    let path = self
                        .resolve(&target, dir)
                        .ok_or_else(|| diag(format!("cannot find included file `{target}`")))?;
                    if self.stack.len() >= MAX_INCLUDE_DEPTH || self.stack.contains(&path) {
                        return Err(diag(format!("include cycle through `{target}`")));
                    }
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| diag(format!("cannot read `{target}`: {e}")))?;
                    let names: Option<HashSet<String>> = names.map(|n| n.into_iter().collect());
                    self.stack.push(path.clone());
                    let shown = path.display().to_string();
                    let result = self.load_selected(&text, &shown, path.parent(), names.as_ref());
                    self.stack.pop();
                    result?;
                }
                Statement::Cnf {
                    name,
                    role,
                    literals,
                    ..
                } => {
                    if selection.is_some_and(|s| !s.contains(&name)) {
                        continue;
                    }
                    let role = match role.as_str() {
                        "axiom" => Role::Axiom,
                        "negated_conjecture" => Role::NegatedConjecture,
                        _ => Role::Other,
                    };
                    if let Some(clause) = self.build_clause(name, role, literals, file)? {
                        self.clauses.push(clause);
                    }
                }
            }
        }
        Ok(())
    }

    /// `None` when the clause is a tautology.
    fn build_clause(
        &mut self,
        name: String,
        role: Role,
        raw: Vec<RawLiteral>,
        file: &str,
    ) -> Result<Option<Clause>, ParseDiagnostic> {
        let mut vars: HashMap<String, u32> = HashMap::new();
        let mut literals: Vec<Literal> = Vec::new();
        for lit in raw {
            let diag = |message: String| ParseDiagnostic {
                file: file.to_owned(),
                line: lit.line,
                column: lit.column,
                message,
            };
            let (pred, args) = match lit.atom {
                RawAtom::True if lit.positive => return Ok(None),
                RawAtom::False if !lit.positive => return Ok(None),
                RawAtom::True | RawAtom::False => continue,
                RawAtom::Pred(name, args) => (name, args),
                RawAtom::Equal(l, r) => {
                    self.has_equality = true;
                    (EQUALITY.to_owned(), vec![l, r])
                }
            };
            let predicate = self
                .symbols
                .intern(&pred, args.len(), SymbolKind::Predicate)
                .map_err(|e| diag(e.to_string()))?;
            let args = args
                .iter()
                .map(|t| self.build_term(t, &mut vars))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| diag(e.to_string()))?;
            let literal = Literal::new(lit.positive, predicate, args);
            if literals.contains(&literal.negated()) {
                return Ok(None);
            }
            if !literals.contains(&literal) {
                literals.push(literal);
            }
        }
        Ok(Some(Clause {
            name,
            role,
            literals,
            var_count: vars.len() as u32,
        }))
    }

    fn build_term(
        &mut self,
        t: &RawTerm,
        vars: &mut HashMap<String, u32>,
    ) -> Result<Term, crate::terms::ArityMismatch> {
        Ok(match t {
            RawTerm::Var(name) => {
                let next = vars.len() as u32;
                let index = *vars.entry(name.clone()).or_insert(next);
                Term::Var(Var::new(crate::terms::Position::root(), index))
            }
            RawTerm::App(f, args) => {
                let symbol = self.symbols.intern(f, args.len(), SymbolKind::Function)?;
                let args = args
                    .iter()
                    .map(|a| self.build_term(a, vars))
                    .collect::<Result<Vec<_>, _>>()?;
                Term::app(symbol, args)
            }
        })
    }
}
