//! Depth-limited proof search, iterated over increasing limits.
//!
//! Two engines share the calculus. The learning engine explains every dead
//! end, records the explanation as a constraint, and backjumps until the
//! constraint no longer holds on the trail. The chronological engine undoes
//! one inference at a time and tries the next alternative.

mod chrono;
mod learning;

pub use chrono::{enumerate_closed, ChronologicalLevel, ClosedTableau, TooManyClosed};
pub use learning::{Expansion, ForceError, LearningLevel};

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::calculus::Proof;
use crate::constraints::Atom;
use crate::terms::ClauseId;
use crate::tptp::{select_start_clauses, Problem, StartPolicy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Learning,
    Chronological,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Highest depth limit to try; unbounded when `None`.
    pub max_depth: Option<usize>,
    pub time_budget: Duration,
    pub mode: Mode,
    pub start_policy: StartPolicy,
    /// Cap on search iterations across all levels; exceeding it counts as
    /// running out of time.
    pub step_budget: Option<u64>,
    /// Keep every learned constraint in the result.
    pub collect_constraints: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_depth: None,
            time_budget: Duration::from_secs(10),
            mode: Mode::Learning,
            start_policy: StartPolicy::ConjectureFirst,
            step_budget: None,
            collect_constraints: false,
        }
    }
}

/// Counters for one depth level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Statistics {
    pub depth: usize,
    pub extensions_applied: u64,
    pub extensions_tried: u64,
    pub reductions_applied: u64,
    pub constraints_learned: u64,
    pub conflicts_hit: u64,
    pub max_trail_depth: u64,
    pub backjump_frame_total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelResult {
    Closed(Proof),
    /// No closed tableau at this limit. `limit_hit` records whether any
    /// extension was withheld by the limit.
    Exhausted {
        limit_hit: bool,
    },
    TimeOut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Theorem {
        proof: Proof,
        depth: usize,
    },
    /// Every level would fail: the search never reached the depth limit.
    Saturated {
        depth: usize,
    },
    DepthOut,
    TimeOut,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub levels: Vec<Statistics>,
    /// Learned constraints tagged with their depth limit, when requested.
    pub constraints: Vec<(usize, Vec<Atom>)>,
}

/// Wall-clock deadline plus an optional iteration cap, polled once per
/// search iteration.
#[derive(Clone, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    steps_left: Option<u64>,
}

impl Budget {
    pub fn new(time: Option<Duration>, steps: Option<u64>) -> Self {
        Budget {
            deadline: time.and_then(|t| Instant::now().checked_add(t)),
            steps_left: steps,
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(None, None)
    }

    /// Consume one step; false once the budget is spent.
    pub fn tick(&mut self) -> bool {
        if let Some(n) = &mut self.steps_left {
            if *n == 0 {
                return false;
            }
            *n -= 1;
        }
        match self.deadline {
            Some(d) => Instant::now() < d,
            None => true,
        }
    }
}

pub fn run_level(
    problem: &Problem,
    start: &[ClauseId],
    limit: usize,
    mode: Mode,
    budget: &mut Budget,
) -> (LevelResult, Statistics, Vec<Vec<Atom>>) {
    match mode {
        Mode::Learning => {
            let mut level = LearningLevel::new(problem, start, limit);
            let r = level.run(budget);
            let learned = level.learned().map(<[Atom]>::to_vec).collect();
            (r, level.stats().clone(), learned)
        }
        Mode::Chronological => {
            let mut level = ChronologicalLevel::new(problem, start, limit);
            let r = level.run(budget);
            (r, level.stats().clone(), Vec::new())
        }
    }
}

/// Iterative deepening from limit 1.
pub fn prove(problem: &Problem, options: &SearchOptions) -> SearchResult {
    let start = select_start_clauses(problem, options.start_policy);
    let mut budget = Budget::new(Some(options.time_budget), options.step_budget);
    let mut result = SearchResult {
        outcome: Outcome::TimeOut,
        levels: Vec::new(),
        constraints: Vec::new(),
    };
    for limit in 1.. {
        let (r, stats, learned) = run_level(problem, &start, limit, options.mode, &mut budget);
        result.levels.push(stats);
        if options.collect_constraints {
            result
                .constraints
                .extend(learned.into_iter().map(|c| (limit, c)));
        }
        result.outcome = match r {
            LevelResult::Closed(proof) => Outcome::Theorem {
                proof,
                depth: limit,
            },
            LevelResult::Exhausted { limit_hit: false } => Outcome::Saturated { depth: limit },
            LevelResult::Exhausted { limit_hit: true } if options.max_depth == Some(limit) => {
                Outcome::DepthOut
            }
            LevelResult::Exhausted { limit_hit: true } => continue,
            LevelResult::TimeOut => Outcome::TimeOut,
        };
        break;
    }
    result
}
