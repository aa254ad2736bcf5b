use crate::calculus::{ApplyRecord, CalculusFailure, Inference, Proof, Tableau};
use crate::constraints::{is_violated_naive, Atom, ConstraintStore, Frame, Trail};
use crate::explain::{conflict_context, explain_failed_inference, explain_open_branch, Reason};
use crate::terms::ClauseId;
use crate::tptp::Problem;

use super::{Budget, LevelResult, Statistics};

/// What one expansion of the current goal did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    Applied(Inference),
    /// Every alternative failed; the reason to learn.
    Stuck(Reason),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ForceError {
    #[error(transparent)]
    Calculus(#[from] CalculusFailure),
    #[error("inference violates {0} learned constraint(s)")]
    Conflict(usize),
}

/// One depth level of the learning search.
pub struct LearningLevel<'a> {
    problem: &'a Problem,
    start: &'a [ClauseId],
    limit: usize,
    tableau: Tableau,
    trail: Trail,
    records: Vec<ApplyRecord>,
    store: ConstraintStore,
    stats: Statistics,
    limit_hit: bool,
}

impl<'a> LearningLevel<'a> {
    pub fn new(problem: &'a Problem, start: &'a [ClauseId], limit: usize) -> Self {
        LearningLevel {
            problem,
            start,
            limit,
            tableau: Tableau::new(),
            trail: Trail::new(),
            records: Vec::new(),
            store: ConstraintStore::new(),
            stats: Statistics {
                depth: limit,
                ..Statistics::default()
            },
            limit_hit: false,
        }
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn trail(&self) -> &Trail {
        &self.trail
    }

    pub fn store(&self) -> &ConstraintStore {
        &self.store
    }

    pub fn stats(&self) -> &Statistics {
        &self.stats
    }

    pub fn limit_hit(&self) -> bool {
        self.limit_hit
    }

    pub fn learned(&self) -> impl Iterator<Item = &[Atom]> {
        self.store.iter().map(|(_, c)| c.atoms.as_slice())
    }

    pub fn proof(&self) -> Proof {
        Proof {
            steps: self
                .trail
                .frames()
                .iter()
                .map(|f| f.inference.clone())
                .collect(),
            final_bindings: self.tableau.bindings().clone(),
        }
    }

    /// Apply `j` as if the search had chosen it, subject to the calculus and
    /// the learned constraints.
    pub fn force(&mut self, j: &Inference) -> Result<(), ForceError> {
        let rec = self.tableau.try_apply(j, self.problem, self.limit)?;
        let conflicts = self.store.check_conflicts(&self.trail, &rec.atoms);
        if !conflicts.is_empty() {
            self.tableau.undo_apply(&rec);
            return Err(ForceError::Conflict(conflicts.len()));
        }
        self.commit(rec);
        Ok(())
    }

    fn commit(&mut self, rec: ApplyRecord) {
        match rec.inference {
            Inference::Extend { .. } => self.stats.extensions_applied += 1,
            Inference::Reduce { .. } => self.stats.reductions_applied += 1,
            Inference::Start { .. } => {}
        }
        self.trail.commit_frame(Frame {
            inference: rec.inference.clone(),
            atoms: rec.atoms.clone(),
        });
        self.records.push(rec);
        self.stats.max_trail_depth = self.stats.max_trail_depth.max(self.trail.len() as u64);
    }

    /// Try the alternatives for the current goal in order and commit the
    /// first one the calculus and the constraints allow; otherwise return
    /// the reason the goal is stuck.
    pub fn expand(&mut self) -> Expansion {
        let goal = self.tableau.select_goal();
        debug_assert!(goal.is_some() || !self.tableau.is_started());
        let mut learn = match &goal {
            Some(g) => explain_open_branch(&self.tableau, g),
            None => Reason::new(),
        };
        let cands =
            self.tableau
                .enumerate_inferences(goal.as_ref(), self.problem, self.start, self.limit);
        if !cands.depth_blocked.is_empty() {
            self.limit_hit = true;
        }
        for j in cands.inferences {
            if j.is_extension() {
                self.stats.extensions_tried += 1;
            }
            match self.tableau.try_apply(&j, self.problem, self.limit) {
                Err(failure) => {
                    learn.extend(explain_failed_inference(&self.tableau, &j, &failure));
                }
                Ok(rec) => {
                    let conflicts = self.store.check_conflicts(&self.trail, &rec.atoms);
                    if conflicts.is_empty() {
                        self.commit(rec);
                        return Expansion::Applied(j);
                    }
                    self.stats.conflicts_hit += 1;
                    let chosen = self.store.select_conflict(&conflicts, &rec.atoms, &learn);
                    let atoms = self.store.get(chosen).atoms.clone();
                    let context = conflict_context(&self.tableau, &rec, &atoms);
                    learn.extend(atoms.into_iter().filter(|a| !rec.atoms.contains(a)));
                    learn.extend(context);
                    self.tableau.undo_apply(&rec);
                }
            }
        }
        debug_assert!(
            learn.iter().all(|a| self.trail.contains(a)),
            "reason mentions atoms that are not on the trail"
        );
        Expansion::Stuck(learn)
    }

    /// Pop frames until `learn` no longer holds, then store it. Returns the
    /// number of frames popped.
    pub fn backjump_and_learn(&mut self, learn: Reason) -> usize {
        let atoms: Vec<Atom> = learn.into_iter().collect();
        let mut popped = 0;
        if atoms.is_empty() {
            while !self.trail.is_empty() {
                self.pop();
                popped += 1;
            }
        } else {
            while is_violated_naive(&atoms, &self.trail) {
                assert!(
                    !self.trail.is_empty(),
                    "learned reason is not grounded in the trail"
                );
                self.pop();
                popped += 1;
            }
        }
        self.stats.backjump_frame_total += popped as u64;
        self.stats.constraints_learned += 1;
        self.store.add_constraint(atoms, &self.trail);
        popped
    }

    fn pop(&mut self) {
        self.trail.pop_frame();
        let rec = self.records.pop().expect("record for every frame");
        self.tableau.undo_apply(&rec);
    }

    pub fn run(&mut self, budget: &mut Budget) -> LevelResult {
        loop {
            if self.tableau.is_closed() {
                return LevelResult::Closed(self.proof());
            }
            if !budget.tick() {
                return LevelResult::TimeOut;
            }
            match self.expand() {
                Expansion::Applied(_) => {}
                Expansion::Stuck(learn) => {
                    let exhausted = learn.is_empty();
                    self.backjump_and_learn(learn);
                    if exhausted {
                        return LevelResult::Exhausted {
                            limit_hit: self.limit_hit,
                        };
                    }
                }
            }
        }
    }
}
