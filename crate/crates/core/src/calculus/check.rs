//! Independent replay of a proof. Shares only the syntax types with the
//! search: its own tree, its own eagerly applied substitution, its own
//! unifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{Inference, Proof};
use crate::terms::{instantiate_clause, Literal, Position, Term, Var};
use crate::tptp::Problem;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}{message}", match .step { Some(s) => format!("step {s}: "), None => String::new() })]
pub struct ProofError {
    /// 1-based step index, or `None` for a defect of the final tableau.
    pub step: Option<usize>,
    pub message: String,
}

/// Replay `proof` and confirm it builds a closed, regular connection tableau
/// whose branches are no longer than `limit`.
pub fn check_proof(problem: &Problem, proof: &Proof, limit: usize) -> Result<(), ProofError> {
    let mut c = Checker::default();
    for (i, step) in proof.steps.iter().enumerate() {
        c.step(problem, step, limit).map_err(|message| ProofError {
            step: Some(i + 1),
            message,
        })?;
    }
    let fin = |message: String| ProofError {
        step: None,
        message,
    };
    if !c.started {
        return Err(fin("proof has no start step".into()));
    }
    if let Some(p) = c.open.iter().next() {
        return Err(fin(format!("branch {p} is still open")));
    }
    for (p, l) in &c.nodes {
        let mut q = p.parent();
        while let Some(a) = q {
            if a.is_root() {
                break;
            }
            let al = &c.nodes[&a];
            if al.positive == l.positive
                && al.predicate == l.predicate
                && c.apply_all(&al.args) == c.apply_all(&l.args)
            {
                return Err(fin(format!("branch through {a} and {p} is irregular")));
            }
            q = a.parent();
        }
    }
    for (v, t) in proof.final_bindings.iter() {
        let claimed = proof.final_bindings.apply(t);
        let actual = c.apply(&Term::Var(v.clone()));
        if c.apply(&claimed) != actual {
            return Err(fin(format!(
                "reported binding for {v} does not match the replay"
            )));
        }
    }
    for (k, (a, b)) in c.connections.iter().enumerate() {
        let close = a
            .iter()
            .zip(b.iter())
            .all(|(s, t)| proof.final_bindings.apply(s) == proof.final_bindings.apply(t));
        if !close {
            return Err(fin(format!(
                "reported bindings do not unify connection {}",
                k + 1
            )));
        }
    }
    Ok(())
}

type ArgPair = (Arc<[Term]>, Arc<[Term]>);

#[derive(Default)]
struct Checker {
    started: bool,
    nodes: BTreeMap<Position, Literal>,
    open: BTreeSet<Position>,
    /// Fully applied: no bound variable occurs in any range term.
    subst: HashMap<Var, Term>,
    /// Argument tuples of every connection made.
    connections: Vec<ArgPair>,
}

impl Checker {
    fn step(&mut self, problem: &Problem, step: &Inference, limit: usize) -> Result<(), String> {
        let clause_lits = |id: crate::terms::ClauseId, at: &Position| {
            if id.index() >= problem.clauses.len() {
                return Err(format!("no clause with index {}", id.index()));
            }
            Ok(instantiate_clause(problem.clause(id), at))
        };
        match step {
            Inference::Start { clause } => {
                if self.started {
                    return Err("start after the tableau was started".into());
                }
                let lits = clause_lits(*clause, &Position::root())?;
                self.started = true;
                self.attach(&Position::root(), lits, None, limit)
            }
            Inference::Reduce { goal, ancestor } => {
                self.require_open(goal)?;
                if ancestor.is_root() || !ancestor.is_strict_ancestor_of(goal) {
                    return Err(format!("{ancestor} is not a literal above {goal}"));
                }
                let g = self.nodes[goal].clone();
                let a = self.nodes[ancestor].clone();
                self.connect(&g, &a)?;
                self.open.remove(goal);
                Ok(())
            }
            Inference::Extend {
                goal,
                clause,
                literal,
            } => {
                self.require_open(goal)?;
                if goal.depth() >= limit {
                    return Err(format!(
                        "extension below {goal} exceeds depth limit {limit}"
                    ));
                }
                let lits = clause_lits(*clause, goal)?;
                let k = *literal as usize;
                if k == 0 || k > lits.len() {
                    return Err(format!("literal index {literal} out of range"));
                }
                let g = self.nodes[goal].clone();
                self.connect(&g, &lits[k - 1])?;
                self.open.remove(goal);
                self.attach(goal, lits, Some(k), limit)
            }
        }
    }

    fn require_open(&self, goal: &Position) -> Result<(), String> {
        if !self.started || !self.open.contains(goal) {
            return Err(format!("{goal} is not an open branch"));
        }
        Ok(())
    }

    fn attach(
        &mut self,
        at: &Position,
        lits: Vec<Literal>,
        connected: Option<usize>,
        limit: usize,
    ) -> Result<(), String> {
        if !lits.is_empty() && at.depth() + 1 > limit {
            return Err(format!("branch below {at} exceeds depth limit {limit}"));
        }
        for (i, l) in lits.into_iter().enumerate() {
            let p = at.child(i as u32 + 1);
            if connected != Some(i + 1) {
                self.open.insert(p.clone());
            }
            self.nodes.insert(p, l);
        }
        Ok(())
    }

    fn connect(&mut self, a: &Literal, b: &Literal) -> Result<(), String> {
        if a.predicate != b.predicate || a.positive == b.positive || a.args.len() != b.args.len() {
            return Err("literals are not complementary".into());
        }
        self.connections.push((a.args.clone(), b.args.clone()));
        for (s, t) in a.args.iter().zip(b.args.iter()) {
            self.unify(s, t)?;
        }
        Ok(())
    }

    fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.subst.get(v) {
                Some(u) => u.clone(),
                None => t.clone(),
            },
            Term::App(f, args) => Term::app(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    fn apply_all(&self, ts: &[Term]) -> Vec<Term> {
        ts.iter().map(|t| self.apply(t)).collect()
    }

    fn unify(&mut self, s: &Term, t: &Term) -> Result<(), String> {
        let s = self.apply(s);
        let t = self.apply(t);
        match (&s, &t) {
            (Term::Var(x), Term::Var(y)) if x == y => Ok(()),
            (Term::Var(x), u) | (u, Term::Var(x)) => {
                let mut vs = Vec::new();
                u.vars(&mut vs);
                if vs.contains(x) {
                    return Err(format!("occurs check fails for {x}"));
                }
                self.eliminate(x.clone(), u.clone());
                Ok(())
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return Err("connection does not unify".into());
                }
                for (a, b) in xs.iter().zip(ys.iter()) {
                    self.unify(a, b)?;
                }
                Ok(())
            }
        }
    }

    fn eliminate(&mut self, x: Var, u: Term) {
        let single: HashMap<Var, Term> = [(x.clone(), u.clone())].into_iter().collect();
        let sub = |t: &Term| substitute(t, &single);
        for v in self.subst.values_mut() {
            *v = sub(v);
        }
        self.subst.insert(x, u);
    }
}

fn substitute(t: &Term, s: &HashMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::app(*f, args.iter().map(|a| substitute(a, s)).collect()),
    }
}
