//! The connection tableau: start, reduction and extension steps under a
//! depth limit, with regularity enforced through disequations.
//!
//! Applying an inference is two-phase. [`Tableau::try_apply`] performs the
//! calculus check and mutates the tableau, returning an [`ApplyRecord`] with
//! the trail atoms the step asserts; the caller then decides whether to keep
//! it or hand the record back to [`Tableau::undo_apply`].

mod check;
mod proof;

pub use check::{check_proof, ProofError};
pub use proof::{parse_proof, Proof, ProofParseError};

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::constraints::Atom;
use crate::terms::{
    equal_under, instantiate_clause, never_unifiable, BindingDelta, Bindings, ClauseId, Literal,
    Position, Term,
};
use crate::tptp::Problem;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Inference {
    Start {
        clause: ClauseId,
    },
    Reduce {
        goal: Position,
        ancestor: Position,
    },
    /// `literal` is 1-based.
    Extend {
        goal: Position,
        clause: ClauseId,
        literal: u32,
    },
}

impl Inference {
    pub fn goal(&self) -> Option<&Position> {
        match self {
            Inference::Start { .. } => None,
            Inference::Reduce { goal, .. } | Inference::Extend { goal, .. } => Some(goal),
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, Inference::Extend { .. })
    }
}

/// Regularity obligation: the literal at `descendant` must not become equal
/// to the same-sign literal at `ancestor`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disequation {
    pub ancestor: Position,
    pub descendant: Position,
    pub lhs: Arc<[Term]>,
    pub rhs: Arc<[Term]>,
}

impl Disequation {
    pub fn is_falsified(&self, bindings: &Bindings) -> bool {
        equal_under(&self.lhs, &self.rhs, bindings)
    }

    pub fn atom(&self) -> Atom {
        Atom::Diseq {
            ancestor: self.ancestor.clone(),
            descendant: self.descendant.clone(),
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }
}

/// The argument tuples an inference had to unify: goal side first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub goal: Arc<[Term]>,
    pub partner: Arc<[Term]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApplyRecord {
    pub inference: Inference,
    pub atoms: Vec<Atom>,
    pub delta: BindingDelta,
    pub new_nodes: Vec<Position>,
    pub new_diseqs: Vec<Disequation>,
    pub closed_goal: Option<Position>,
    pub connection: Option<Connection>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CalculusFailure {
    #[error("connection cannot be made under the current substitution")]
    ConnectionBlocked { goal: Literal, partner: Literal },
    #[error("step would violate regularity between {} and {}", diseq.ancestor, diseq.descendant)]
    RegularityBlocked {
        diseq: Disequation,
        /// True when the disequation would have been created by this step.
        created: bool,
        connection: Connection,
    },
    #[error("extension exceeds the depth limit")]
    DepthBlocked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    literal: Literal,
    /// Number of children; zero for a leaf.
    children: u32,
}

/// Inferences for one goal, in search order, plus the extensions withheld
/// because the goal sits at the depth limit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Candidates {
    pub inferences: Vec<Inference>,
    pub depth_blocked: Vec<Inference>,
}

#[derive(Clone, Debug, Default)]
pub struct Tableau {
    nodes: HashMap<Position, Node>,
    root_children: Option<u32>,
    open: BTreeSet<Position>,
    bindings: Bindings,
    diseqs: Vec<Disequation>,
}

impl Tableau {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_started(&self) -> bool {
        self.root_children.is_some()
    }

    pub fn is_closed(&self) -> bool {
        self.is_started() && self.open.is_empty()
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn literal_at(&self, p: &Position) -> Option<&Literal> {
        self.nodes.get(p).map(|n| &n.literal)
    }

    pub fn open_branches(&self) -> impl Iterator<Item = &Position> {
        self.open.iter()
    }

    pub fn is_open(&self, p: &Position) -> bool {
        self.open.contains(p)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn active_diseqs(&self) -> &[Disequation] {
        &self.diseqs
    }

    /// Positions of all literal nodes, in depth-first order.
    pub fn positions(&self) -> Vec<Position> {
        let mut v: Vec<Position> = self.nodes.keys().cloned().collect();
        v.sort();
        v
    }

    /// Strict ancestors of `p` that carry literals, nearest first.
    pub fn ancestors(&self, p: &Position) -> Vec<Position> {
        let mut out = Vec::new();
        let mut cur = p.parent();
        while let Some(q) = cur {
            if q.is_root() {
                break;
            }
            cur = q.parent();
            out.push(q);
        }
        out
    }

    /// The leftmost open branch, or `None` when the tableau is empty or
    /// closed.
    pub fn select_goal(&self) -> Option<Position> {
        self.open.iter().next().cloned()
    }

    pub fn enumerate_inferences(
        &self,
        goal: Option<&Position>,
        problem: &Problem,
        start_clauses: &[ClauseId],
        limit: usize,
    ) -> Candidates {
        let Some(goal) = goal else {
            return Candidates {
                inferences: start_clauses
                    .iter()
                    .map(|&clause| Inference::Start { clause })
                    .collect(),
                depth_blocked: Vec::new(),
            };
        };
        let lit = &self.nodes[goal].literal;
        let mut out = Candidates::default();
        for q in self.ancestors(goal) {
            let anc = &self.nodes[&q].literal;
            if !never_unifiable(lit, anc) {
                out.inferences.push(Inference::Reduce {
                    goal: goal.clone(),
                    ancestor: q,
                });
            }
        }
        let blocked = goal.depth() >= limit;
        for clause in problem.clause_ids() {
            for (i, l) in problem.clause(clause).literals.iter().enumerate() {
                if l.complements(lit) {
                    let j = Inference::Extend {
                        goal: goal.clone(),
                        clause,
                        literal: i as u32 + 1,
                    };
                    if blocked {
                        out.depth_blocked.push(j);
                    } else {
                        out.inferences.push(j);
                    }
                }
            }
        }
        out
    }

    /// Apply `j` if the calculus allows it. On failure the tableau is left
    /// exactly as it was.
    pub fn try_apply(
        &mut self,
        j: &Inference,
        problem: &Problem,
        limit: usize,
    ) -> Result<ApplyRecord, CalculusFailure> {
        match j {
            Inference::Start { clause } => {
                assert!(!self.is_started(), "start on a started tableau");
                let lits = instantiate_clause(problem.clause(*clause), &Position::root());
                let mut rec = ApplyRecord {
                    inference: j.clone(),
                    atoms: Vec::new(),
                    delta: BindingDelta::default(),
                    new_nodes: Vec::new(),
                    new_diseqs: Vec::new(),
                    closed_goal: None,
                    connection: None,
                };
                self.root_children = Some(lits.len() as u32);
                self.place_children(&Position::root(), lits, None, &mut rec);
                Ok(rec)
            }
            Inference::Reduce { goal, ancestor } => {
                assert!(
                    self.open.contains(goal),
                    "reduce on a goal that is not open"
                );
                assert!(ancestor.is_strict_ancestor_of(goal) && !ancestor.is_root());
                let g = self.nodes[goal].literal.clone();
                let a = self.nodes[ancestor].literal.clone();
                if !g.complements(&a) {
                    return Err(CalculusFailure::ConnectionBlocked {
                        goal: g,
                        partner: a,
                    });
                }
                let delta = self.bindings.unify_args(&g.args, &a.args).map_err(|_| {
                    CalculusFailure::ConnectionBlocked {
                        goal: g.clone(),
                        partner: a.clone(),
                    }
                })?;
                let connection = Connection {
                    goal: g.args.clone(),
                    partner: a.args.clone(),
                };
                if let Some(d) = self.diseqs.iter().find(|d| d.is_falsified(&self.bindings)) {
                    let diseq = d.clone();
                    self.bindings.undo_delta(&delta);
                    return Err(CalculusFailure::RegularityBlocked {
                        diseq,
                        created: false,
                        connection,
                    });
                }
                self.open.remove(goal);
                let atoms = self.bind_atoms(&delta);
                Ok(ApplyRecord {
                    inference: j.clone(),
                    atoms,
                    delta,
                    new_nodes: Vec::new(),
                    new_diseqs: Vec::new(),
                    closed_goal: Some(goal.clone()),
                    connection: Some(connection),
                })
            }
            Inference::Extend {
                goal,
                clause,
                literal,
            } => {
                assert!(
                    self.open.contains(goal),
                    "extend on a goal that is not open"
                );
                if goal.depth() >= limit {
                    return Err(CalculusFailure::DepthBlocked);
                }
                let c = problem.clause(*clause);
                assert!(*literal >= 1 && (*literal as usize) <= c.literals.len());
                let lits = instantiate_clause(c, goal);
                let g = self.nodes[goal].literal.clone();
                let partner = lits[*literal as usize - 1].clone();
                if !g.complements(&partner) {
                    return Err(CalculusFailure::ConnectionBlocked { goal: g, partner });
                }
                let delta = self
                    .bindings
                    .unify_args(&g.args, &partner.args)
                    .map_err(|_| CalculusFailure::ConnectionBlocked {
                        goal: g.clone(),
                        partner: partner.clone(),
                    })?;
                let connection = Connection {
                    goal: g.args.clone(),
                    partner: partner.args.clone(),
                };
                let mut failed = self
                    .diseqs
                    .iter()
                    .find(|d| d.is_falsified(&self.bindings))
                    .map(|d| (d.clone(), false));
                if failed.is_none() {
                    failed = self
                        .regularity_pairs(goal, &lits)
                        .into_iter()
                        .find(|d| d.is_falsified(&self.bindings))
                        .map(|d| (d, true));
                }
                if let Some((diseq, created)) = failed {
                    self.bindings.undo_delta(&delta);
                    return Err(CalculusFailure::RegularityBlocked {
                        diseq,
                        created,
                        connection,
                    });
                }
                let mut rec = ApplyRecord {
                    inference: j.clone(),
                    atoms: Vec::new(),
                    delta,
                    new_nodes: Vec::new(),
                    new_diseqs: Vec::new(),
                    closed_goal: Some(goal.clone()),
                    connection: Some(connection),
                };
                self.open.remove(goal);
                self.nodes.get_mut(goal).unwrap().children = lits.len() as u32;
                self.place_children(goal, lits, Some(*literal), &mut rec);
                Ok(rec)
            }
        }
    }

    fn bind_atoms(&self, delta: &BindingDelta) -> Vec<Atom> {
        delta
            .vars
            .iter()
            .map(|v| Atom::bind(v.clone(), self.bindings.get(v).unwrap().clone()))
            .collect()
    }

    /// Disequations between each literal about to be placed below `at` and
    /// its same-sign ancestors (including `at` itself).
    fn regularity_pairs(&self, at: &Position, lits: &[Literal]) -> Vec<Disequation> {
        let mut path = self.ancestors(at);
        if !at.is_root() {
            path.insert(0, at.clone());
        }
        let mut out = Vec::new();
        for (i, l) in lits.iter().enumerate() {
            let child = at.child(i as u32 + 1);
            for q in &path {
                let a = &self.nodes[q].literal;
                if a.predicate == l.predicate && a.positive == l.positive {
                    out.push(Disequation {
                        ancestor: q.clone(),
                        descendant: child.clone(),
                        lhs: a.args.clone(),
                        rhs: l.args.clone(),
                    });
                }
            }
        }
        out
    }

    /// Attach `lits` below `at`, record atoms in emission order: places,
    /// bindings, no-connection facts, disequations.
    fn place_children(
        &mut self,
        at: &Position,
        lits: Vec<Literal>,
        connected: Option<u32>,
        rec: &mut ApplyRecord,
    ) {
        let diseqs = self.regularity_pairs(at, &lits);
        let mut path = self.ancestors(at);
        if !at.is_root() {
            path.insert(0, at.clone());
        }
        let mut no_connect = Vec::new();
        for (i, l) in lits.iter().enumerate() {
            let child = at.child(i as u32 + 1);
            rec.atoms.push(Atom::place(l.clone(), child.clone()));
            for q in path.iter().rev() {
                if never_unifiable(&self.nodes[q].literal, l) {
                    no_connect.push(Atom::no_connect(q.clone(), child.clone()));
                }
            }
        }
        rec.atoms.extend(self.bind_atoms(&rec.delta));
        rec.atoms.extend(no_connect);
        rec.atoms.extend(diseqs.iter().map(Disequation::atom));
        for (i, l) in lits.into_iter().enumerate() {
            let child = at.child(i as u32 + 1);
            if connected != Some(i as u32 + 1) {
                self.open.insert(child.clone());
            }
            self.nodes.insert(
                child.clone(),
                Node {
                    literal: l,
                    children: 0,
                },
            );
            rec.new_nodes.push(child);
        }
        self.diseqs.extend(diseqs.iter().cloned());
        rec.new_diseqs = diseqs;
    }

    /// Revert the most recent successful `try_apply`.
    pub fn undo_apply(&mut self, rec: &ApplyRecord) {
        let keep = self.diseqs.len() - rec.new_diseqs.len();
        debug_assert_eq!(&self.diseqs[keep..], &rec.new_diseqs[..]);
        self.diseqs.truncate(keep);
        for p in &rec.new_nodes {
            debug_assert_eq!(self.nodes.get(p).map(|n| n.children), Some(0));
            self.nodes.remove(p);
            self.open.remove(p);
        }
        self.bindings.undo_delta(&rec.delta);
        match &rec.inference {
            Inference::Start { .. } => self.root_children = None,
            Inference::Extend { goal, .. } => {
                self.nodes.get_mut(goal).unwrap().children = 0;
                self.open.insert(goal.clone());
            }
            Inference::Reduce { goal, .. } => {
                self.open.insert(goal.clone());
            }
        }
    }

    /// Hash of the complete tableau state, for undo checks.
    pub fn state_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.root_children.hash(&mut h);
        for p in self.positions() {
            p.hash(&mut h);
            let n = &self.nodes[&p];
            n.literal.hash(&mut h);
            n.children.hash(&mut h);
        }
        self.open.hash(&mut h);
        self.bindings.state_hash().hash(&mut h);
        self.diseqs.hash(&mut h);
        h.finish()
    }

    /// Literal pairs on one branch that are equal under the current
    /// substitution. Brute force; used by tests.
    pub fn regularity_violations(&self) -> Vec<(Position, Position)> {
        let mut out = Vec::new();
        for p in self.nodes.keys() {
            for q in self.ancestors(p) {
                let a = &self.nodes[&q].literal;
                let b = &self.nodes[p].literal;
                if a.predicate == b.predicate
                    && a.positive == b.positive
                    && equal_under(&a.args, &b.args, &self.bindings)
                {
                    out.push((q, p.clone()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::Problem;

    pub(crate) const RUNNING: &str = "\
cnf(c1, axiom, p(X) | q(Y) | r(X,Y) | p(Z)).
cnf(c2, axiom, ~p(X) | s).
cnf(c3, axiom, ~s | ~p(c)).
cnf(c4, axiom, ~q(d)).
cnf(c5, axiom, ~p(f(c))).
cnf(c6, axiom, ~r(X,c)).
cnf(c7, axiom, ~r(d,X)).
";

    fn running() -> Problem {
        Problem::parse_str(RUNNING, "running.p", None).unwrap()
    }

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    fn ext(goal: &str, clause: u32, literal: u32) -> Inference {
        Inference::Extend {
            goal: pos(goal),
            clause: ClauseId(clause - 1),
            literal,
        }
    }

    fn show(problem: &Problem, atoms: &[Atom]) -> String {
        crate::constraints::dump_constraint(atoms, &problem.symbols)
    }

    /// The inference prefix that reaches the stuck tableau of the running
    /// example, with `Rxy@3` the only open branch.
    pub(crate) fn running_prefix() -> Vec<Inference> {
        vec![
            Inference::Start {
                clause: ClauseId(0),
            },
            ext("1", 2, 1),
            ext("1.2", 3, 1),
            Inference::Reduce {
                goal: pos("1.2.2"),
                ancestor: pos("1"),
            },
            ext("2", 4, 1),
            ext("4", 5, 1),
        ]
    }

    #[test]
    fn start_places_literals_without_diseqs() {
        let problem = running();
        let mut t = Tableau::new();
        let rec = t
            .try_apply(
                &Inference::Start {
                    clause: ClauseId(0),
                },
                &problem,
                3,
            )
            .unwrap();
        assert_eq!(
            show(&problem, &rec.atoms),
            "p(x@0/0)@1 q(x@0/1)@2 r(x@0/0,x@0/1)@3 p(x@0/2)@4"
        );
        assert!(rec.new_diseqs.is_empty());
        assert_eq!(t.select_goal(), Some(pos("1")));
    }

    #[test]
    fn running_prefix_leaves_one_open_branch() {
        let problem = running();
        let mut t = Tableau::new();
        let mut recs = Vec::new();
        for j in running_prefix() {
            recs.push(t.try_apply(&j, &problem, 3).unwrap());
        }
        assert_eq!(
            t.open_branches().cloned().collect::<Vec<_>>(),
            vec![pos("3")]
        );
        assert_eq!(
            show(&problem, &recs[1].atoms[..3]),
            "~p(x@1/0)@1.1 s@1.2 x@1/0->x@0/0"
        );
        assert_eq!(show(&problem, &recs[3].atoms), "x@0/0->c");
        let cands = t.enumerate_inferences(Some(&pos("3")), &problem, &[], 3);
        assert_eq!(cands.inferences, vec![ext("3", 6, 1), ext("3", 7, 1)]);
        for j in &cands.inferences {
            let err = t.try_apply(j, &problem, 3).unwrap_err();
            assert!(matches!(err, CalculusFailure::ConnectionBlocked { .. }));
        }
        assert!(t.regularity_violations().is_empty());
    }

    #[test]
    fn enumeration_order_and_depth_block() {
        let problem = running();
        let mut t = Tableau::new();
        for j in &running_prefix()[..3] {
            t.try_apply(j, &problem, 3).unwrap();
        }
        let goal = pos("1.2.2");
        let c = t.enumerate_inferences(Some(&goal), &problem, &[], 4);
        assert_eq!(
            c.inferences,
            vec![
                Inference::Reduce {
                    goal: goal.clone(),
                    ancestor: pos("1")
                },
                ext("1.2.2", 1, 1),
                ext("1.2.2", 1, 4),
            ]
        );
        let c = t.enumerate_inferences(Some(&goal), &problem, &[], 3);
        assert_eq!(c.inferences.len(), 1);
        assert_eq!(c.depth_blocked.len(), 2);
        assert_eq!(
            t.try_apply(&ext("1.2.2", 1, 1), &problem, 3),
            Err(CalculusFailure::DepthBlocked)
        );
    }

    #[test]
    fn apply_then_undo_restores_state() {
        let problem = running();
        let mut t = Tableau::new();
        let mut hashes = vec![t.state_hash()];
        let mut recs = Vec::new();
        for j in running_prefix() {
            recs.push(t.try_apply(&j, &problem, 3).unwrap());
            hashes.push(t.state_hash());
        }
        while let Some(rec) = recs.pop() {
            hashes.pop();
            t.undo_apply(&rec);
            assert_eq!(t.state_hash(), *hashes.last().unwrap());
        }
        assert!(!t.is_started());
    }

    #[test]
    fn regularity_blocks_repeated_literal() {
        let problem = Problem::parse_str(
            "cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | p(a)).",
            "t.p",
            None,
        )
        .unwrap();
        let mut t = Tableau::new();
        t.try_apply(
            &Inference::Start {
                clause: ClauseId(0),
            },
            &problem,
            4,
        )
        .unwrap();
        let before = t.state_hash();
        let err = t.try_apply(&ext("1", 2, 1), &problem, 4).unwrap_err();
        match err {
            CalculusFailure::RegularityBlocked { diseq, created, .. } => {
                assert!(created);
                assert_eq!(diseq.ancestor, pos("1"));
                assert_eq!(diseq.descendant, pos("1.2"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(t.state_hash(), before);
    }

    #[test]
    fn no_connect_atoms_cover_mismatched_ancestors() {
        let problem = running();
        let mut t = Tableau::new();
        t.try_apply(
            &Inference::Start {
                clause: ClauseId(0),
            },
            &problem,
            3,
        )
        .unwrap();
        let rec = t.try_apply(&ext("1", 2, 1), &problem, 3).unwrap();
        let nc: Vec<_> = rec
            .atoms
            .iter()
            .filter(|a| matches!(a, Atom::NoConnect { .. }))
            .collect();
        assert_eq!(
            show(&problem, &nc.into_iter().cloned().collect::<Vec<_>>()),
            "1~/~1.2"
        );
    }
}
