use std::fmt::Write as _;

use super::Inference;
use crate::terms::{Bindings, Position, SymbolKind, SymbolTable, Term, Var};
use crate::tptp::Problem;

/// A closed tableau, as the sequence of inferences that builds it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<Inference>,
    pub final_bindings: Bindings,
}

impl Proof {
    /// One line per step, then the substitution:
    ///
    /// ```text
    /// 1. start clause=c1
    /// 2. extend goal=1 clause=c2 lit=1
    /// 3. reduce goal=1.2 ancestor=1
    /// bindings:
    /// x@1/0 -> c
    /// ```
    pub fn render(&self, problem: &Problem) -> String {
        let mut out = String::new();
        for (n, step) in self.steps.iter().enumerate() {
            let n = n + 1;
            let _ = match step {
                Inference::Start { clause } => {
                    writeln!(out, "{n}. start clause={}", problem.clause(*clause).name)
                }
                Inference::Reduce { goal, ancestor } => {
                    writeln!(out, "{n}. reduce goal={goal} ancestor={ancestor}")
                }
                Inference::Extend {
                    goal,
                    clause,
                    literal,
                } => writeln!(
                    out,
                    "{n}. extend goal={goal} clause={} lit={literal}",
                    problem.clause(*clause).name
                ),
            };
        }
        out.push_str("bindings:\n");
        for (v, t) in self.final_bindings.iter() {
            let _ = writeln!(out, "{v} -> {}", t.show(&problem.symbols));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("proof line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

/// Read the format written by [`Proof::render`]. Clause and symbol names
/// are resolved against `problem`.
pub fn parse_proof(text: &str, problem: &Problem) -> Result<Proof, ProofParseError> {
    let mut proof = Proof::default();
    let mut in_bindings = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ProofParseError { line, message };
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if l == "bindings:" {
            if in_bindings {
                return Err(err("repeated `bindings:` header".into()));
            }
            in_bindings = true;
            continue;
        }
        if in_bindings {
            let (lhs, rhs) = l
                .split_once(" -> ")
                .ok_or_else(|| err(format!("expected `var -> term`, found `{l}`")))?;
            let v = parse_var(lhs).map_err(&err)?;
            let t = TermReader::new(rhs, &problem.symbols)
                .read_all()
                .map_err(&err)?;
            if proof.final_bindings.get(&v).is_some() {
                return Err(err(format!("variable {v} bound twice")));
            }
            if proof.final_bindings.occurs(&v, &t) {
                return Err(err(format!("binding for {v} is cyclic")));
            }
            proof.final_bindings.bind(v, t);
            continue;
        }
        let (num, rest) = l
            .split_once(". ")
            .ok_or_else(|| err(format!("expected a numbered step, found `{l}`")))?;
        let expected = proof.steps.len() + 1;
        if num.parse::<usize>().ok() != Some(expected) {
            return Err(err(format!(
                "expected step number {expected}, found `{num}`"
            )));
        }
        let (rule, args) = rest.split_once(' ').unwrap_or((rest, ""));
        let clause_named = |name: &str| {
            problem
                .find_clause(name)
                .ok_or_else(|| err(format!("unknown clause `{name}`")))
        };
        let step = match rule {
            "start" => {
                let name = args
                    .strip_prefix("clause=")
                    .ok_or_else(|| err("expected `clause=`".into()))?;
                Inference::Start {
                    clause: clause_named(name)?,
                }
            }
            "reduce" => {
                let rest = args
                    .strip_prefix("goal=")
                    .ok_or_else(|| err("expected `goal=`".into()))?;
                let (goal, ancestor) = rest
                    .split_once(" ancestor=")
                    .ok_or_else(|| err("expected `ancestor=`".into()))?;
                Inference::Reduce {
                    goal: parse_position(goal).map_err(&err)?,
                    ancestor: parse_position(ancestor).map_err(&err)?,
                }
            }
            "extend" => {
                let rest = args
                    .strip_prefix("goal=")
                    .ok_or_else(|| err("expected `goal=`".into()))?;
                let (goal, rest) = rest
                    .split_once(" clause=")
                    .ok_or_else(|| err("expected `clause=`".into()))?;
                let (name, lit) = rest
                    .rsplit_once(" lit=")
                    .ok_or_else(|| err("expected `lit=`".into()))?;
                let literal: u32 = lit
                    .parse()
                    .map_err(|_| err(format!("bad literal index `{lit}`")))?;
                Inference::Extend {
                    goal: parse_position(goal).map_err(&err)?,
                    clause: clause_named(name)?,
                    literal,
                }
            }
            other => return Err(err(format!("unknown rule `{other}`"))),
        };
        proof.steps.push(step);
    }
    Ok(proof)
}

fn parse_position(s: &str) -> Result<Position, String> {
    s.parse::<Position>().map_err(|e| e.to_string())
}

fn parse_var(s: &str) -> Result<Var, String> {
    let body = s
        .strip_prefix("x@")
        .ok_or_else(|| format!("expected a variable, found `{s}`"))?;
    let (pos, idx) = body
        .rsplit_once('/')
        .ok_or_else(|| format!("expected `x@pos/index`, found `{s}`"))?;
    let index = idx
        .parse()
        .map_err(|_| format!("bad variable index `{idx}`"))?;
    Ok(Var::new(parse_position(pos)?, index))
}

struct TermReader<'a> {
    src: &'a str,
    at: usize,
    symbols: &'a SymbolTable,
}

impl<'a> TermReader<'a> {
    fn new(src: &'a str, symbols: &'a SymbolTable) -> Self {
        TermReader {
            src,
            at: 0,
            symbols,
        }
    }

    fn read_all(mut self) -> Result<Term, String> {
        let t = self.term(0)?;
        if self.at != self.src.len() {
            return Err(format!(
                "trailing input after term: `{}`",
                &self.src[self.at..]
            ));
        }
        Ok(t)
    }

    fn term(&mut self, depth: usize) -> Result<Term, String> {
        if depth > 256 {
            return Err("term nested too deeply".into());
        }
        let rest = &self.src[self.at..];
        let end = rest.find(['(', ',', ')']).unwrap_or(rest.len());
        let name = &rest[..end];
        self.at += end;
        if name.starts_with("x@") {
            return parse_var(name).map(Term::Var);
        }
        let mut args = Vec::new();
        if self.src[self.at..].starts_with('(') {
            self.at += 1;
            loop {
                args.push(self.term(depth + 1)?);
                match self.src[self.at..].chars().next() {
                    Some(',') => self.at += 1,
                    Some(')') => {
                        self.at += 1;
                        break;
                    }
                    _ => return Err("unterminated argument list".into()),
                }
            }
        }
        let f = self
            .symbols
            .lookup(name, SymbolKind::Function)
            .ok_or_else(|| format!("unknown function symbol `{name}`"))?;
        if self.symbols.get(f).arity != args.len() {
            return Err(format!("`{name}` applied to {} arguments", args.len()));
        }
        Ok(Term::app(f, args))
    }
}
