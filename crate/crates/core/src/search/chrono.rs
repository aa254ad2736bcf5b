use std::collections::HashSet;

use crate::calculus::{ApplyRecord, Inference, Proof, Tableau};
use crate::constraints::Atom;
use crate::terms::ClauseId;
use crate::tptp::Problem;

use super::{Budget, LevelResult, Statistics};

struct Choice {
    alternatives: Vec<Inference>,
    next: usize,
    applied: bool,
}

/// A closed tableau found by exhaustive enumeration, with every atom its
/// inferences asserted.
#[derive(Clone, Debug)]
pub struct ClosedTableau {
    pub proof: Proof,
    pub atoms: HashSet<Atom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TooManyClosed {
    #[error("more than {0} closed tableaux")]
    Cap(usize),
    #[error("search budget exhausted")]
    Budget,
}

/// One depth level of plain depth-first search with chronological
/// backtracking.
pub struct ChronologicalLevel<'a> {
    problem: &'a Problem,
    start: &'a [ClauseId],
    limit: usize,
    tableau: Tableau,
    records: Vec<ApplyRecord>,
    stack: Vec<Choice>,
    stats: Statistics,
    limit_hit: bool,
    begun: bool,
}

impl<'a> ChronologicalLevel<'a> {
    pub fn new(problem: &'a Problem, start: &'a [ClauseId], limit: usize) -> Self {
        ChronologicalLevel {
            problem,
            start,
            limit,
            tableau: Tableau::new(),
            records: Vec::new(),
            stack: Vec::new(),
            stats: Statistics {
                depth: limit,
                ..Statistics::default()
            },
            limit_hit: false,
            begun: false,
        }
    }

    pub fn stats(&self) -> &Statistics {
        &self.stats
    }

    pub fn limit_hit(&self) -> bool {
        self.limit_hit
    }

    fn push_choice(&mut self) {
        let goal = self.tableau.select_goal();
        let cands =
            self.tableau
                .enumerate_inferences(goal.as_ref(), self.problem, self.start, self.limit);
        if !cands.depth_blocked.is_empty() {
            self.limit_hit = true;
        }
        self.stack.push(Choice {
            alternatives: cands.inferences,
            next: 0,
            applied: false,
        });
    }

    fn proof(&self) -> Proof {
        Proof {
            steps: self.records.iter().map(|r| r.inference.clone()).collect(),
            final_bindings: self.tableau.bindings().clone(),
        }
    }

    /// Advance to the next closed tableau. Calling again resumes the search
    /// after the last one found.
    pub fn run(&mut self, budget: &mut Budget) -> LevelResult {
        if !self.begun {
            self.begun = true;
            self.push_choice();
        }
        loop {
            if !budget.tick() {
                return LevelResult::TimeOut;
            }
            let Some(top) = self.stack.last_mut() else {
                return LevelResult::Exhausted {
                    limit_hit: self.limit_hit,
                };
            };
            if top.applied {
                top.applied = false;
                let rec = self.records.pop().unwrap();
                self.tableau.undo_apply(&rec);
            }
            let mut applied = None;
            while top.next < top.alternatives.len() {
                let j = &top.alternatives[top.next];
                top.next += 1;
                if j.is_extension() {
                    self.stats.extensions_tried += 1;
                }
                if let Ok(rec) = self.tableau.try_apply(j, self.problem, self.limit) {
                    top.applied = true;
                    applied = Some(rec);
                    break;
                }
            }
            let Some(rec) = applied else {
                self.stack.pop();
                continue;
            };
            match rec.inference {
                Inference::Extend { .. } => self.stats.extensions_applied += 1,
                Inference::Reduce { .. } => self.stats.reductions_applied += 1,
                Inference::Start { .. } => {}
            }
            self.records.push(rec);
            self.stats.max_trail_depth = self.stats.max_trail_depth.max(self.records.len() as u64);
            if self.tableau.is_closed() {
                return LevelResult::Closed(self.proof());
            }
            self.push_choice();
        }
    }

    fn closed_atoms(&self) -> HashSet<Atom> {
        self.records
            .iter()
            .flat_map(|r| r.atoms.iter().cloned())
            .collect()
    }
}

/// Every closed tableau at `limit`, in search order. Fails when there are
/// more than `cap` of them or the budget runs out.
pub fn enumerate_closed(
    problem: &Problem,
    start: &[ClauseId],
    limit: usize,
    cap: usize,
    budget: &mut Budget,
) -> Result<Vec<ClosedTableau>, TooManyClosed> {
    let mut level = ChronologicalLevel::new(problem, start, limit);
    let mut found = Vec::new();
    loop {
        match level.run(budget) {
            LevelResult::Closed(proof) => {
                if found.len() == cap {
                    return Err(TooManyClosed::Cap(cap));
                }
                found.push(ClosedTableau {
                    proof,
                    atoms: level.closed_atoms(),
                });
            }
            LevelResult::Exhausted { .. } => return Ok(found),
            LevelResult::TimeOut => return Err(TooManyClosed::Budget),
        }
    }
}
