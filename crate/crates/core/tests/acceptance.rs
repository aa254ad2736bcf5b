//! Acceptance criteria, one test per criterion. Each test prints a single
//! `PASS` or `FAIL` line with the measured values before asserting.
//!
//! Criteria 1, 2 and 8 read problems from a TPTP installation located by the
//! `TPTP` environment variable and fail when it is absent.

mod common;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use connlearn::calculus::{check_proof, Inference};
use connlearn::constraints::{
    dump_constraint, is_violated_naive, Atom, ConstraintStore, Frame, Trail,
};
use connlearn::explain::minimal_blocking_bindings;
use connlearn::search::{
    enumerate_closed, prove, run_level, Budget, Expansion, LearningLevel, LevelResult, Mode,
    Outcome, SearchOptions, TooManyClosed,
};
use connlearn::terms::{Bindings, ClauseId, Position};
use connlearn::tptp::{parse_problem, select_start_clauses, Problem, StartPolicy};
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

fn report(id: u32, name: &str, ok: bool, detail: impl AsRef<str>) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id} {name}: {verdict}: {}", detail.as_ref());
}

fn puz005() -> Result<Problem, String> {
    let root = tptp_root().ok_or("TPTP is not set or has no Problems directory")?;
    let path = root.join("Problems/PUZ/PUZ005-1.p");
    parse_problem(&path, Some(&root)).map_err(|e| format!("{}: {e}", path.display()))
}

#[test]
fn criterion_1_puz005_closes_at_depth_8() {
    let problem = match puz005() {
        Ok(p) => p,
        Err(e) => {
            report(1, "PUZ005-1 end to end", false, &e);
            panic!("{e}");
        }
    };
    let start = select_start_clauses(&problem, StartPolicy::ConjectureFirst);
    let began = Instant::now();
    let mut budget = Budget::new(Some(Duration::from_secs(120)), None);
    let mut failures = Vec::new();
    for limit in 1..=8 {
        let (r, _, _) = run_level(&problem, &start, limit, Mode::Learning, &mut budget);
        match (limit, r) {
            (1..=7, LevelResult::Exhausted { limit_hit: true }) => {}
            (8, LevelResult::Closed(proof)) => {
                if let Err(e) = check_proof(&problem, &proof, 8) {
                    failures.push(format!("proof rejected: {e}"));
                }
            }
            (l, other) => failures.push(format!("limit {l}: {other:?}")),
        }
    }
    let elapsed = began.elapsed();
    let ok = failures.is_empty() && elapsed <= Duration::from_secs(120);
    report(
        1,
        "PUZ005-1 end to end",
        ok,
        format!("{:.1}s {failures:?}", elapsed.as_secs_f64()),
    );
    assert!(ok);
}

#[test]
fn criterion_2_learning_prunes_chronological_search() {
    let problem = match puz005() {
        Ok(p) => p,
        Err(e) => {
            report(2, "pruning at depth 7", false, &e);
            panic!("{e}");
        }
    };
    let start = select_start_clauses(&problem, StartPolicy::ConjectureFirst);
    let (lr, learned, _) = run_level(
        &problem,
        &start,
        7,
        Mode::Learning,
        &mut Budget::unlimited(),
    );
    let mut budget = Budget::new(Some(Duration::from_secs(30 * 60)), None);
    let (cr, plain, _) = run_level(&problem, &start, 7, Mode::Chronological, &mut budget);
    let l = learned.extensions_applied;
    let c = plain.extensions_applied;
    let chrono_done = !matches!(cr, LevelResult::TimeOut);
    // A capped chronological count is a lower bound, so the ratio still holds.
    let ok =
        matches!(lr, LevelResult::Exhausted { .. }) && l <= 1_000_000 && l.saturating_mul(10) <= c;
    report(
        2,
        "pruning at depth 7",
        ok,
        format!(
            "learning {l} extensions, chronological {c}{}",
            if chrono_done { "" } else { " (capped)" }
        ),
    );
    assert!(ok);
}

fn run_random_agreement(count: u64, cap: Duration) -> Result<(usize, usize), String> {
    let began = Instant::now();
    let mut closed = 0;
    let mut checked = 0;
    for seed in 0..count {
        let problem = random_problem(&mut rng(seed));
        let start = select_start_clauses(&problem, StartPolicy::All);
        for limit in 1..=4 {
            let (lr, _, _) = run_level(
                &problem,
                &start,
                limit,
                Mode::Learning,
                &mut Budget::unlimited(),
            );
            let (cr, _, _) = run_level(
                &problem,
                &start,
                limit,
                Mode::Chronological,
                &mut Budget::unlimited(),
            );
            let (a, b) = (
                matches!(lr, LevelResult::Closed(_)),
                matches!(cr, LevelResult::Closed(_)),
            );
            if a != b {
                return Err(format!(
                    "seed {seed} limit {limit}: learning {a}, chronological {b}"
                ));
            }
            if let LevelResult::Closed(proof) = lr {
                closed += 1;
                check_proof(&problem, &proof, limit)
                    .map_err(|e| format!("seed {seed} limit {limit}: {e}"))?;
                checked += 1;
            }
        }
        if began.elapsed() > cap {
            return Err(format!("exceeded {}s after {seed} problems", cap.as_secs()));
        }
    }
    Ok((closed, checked))
}

#[test]
fn criterion_3_completeness_on_random_problems() {
    let began = Instant::now();
    let r = run_random_agreement(500, Duration::from_secs(300));
    let detail = match &r {
        Ok((closed, checked)) => format!(
            "500 problems x 4 limits agree, {closed} closed, {checked} proofs checked, {:.1}s",
            began.elapsed().as_secs_f64()
        ),
        Err(e) => e.clone(),
    };
    report(3, "random completeness", r.is_ok(), detail);
    r.unwrap();
}

#[test]
fn criterion_4_learned_constraints_spare_closed_tableaux() {
    let mut tested = 0;
    let mut seed = 0;
    let mut violation = None;
    while tested < 200 && violation.is_none() {
        let problem = random_problem(&mut rng(seed));
        let start = select_start_clauses(&problem, StartPolicy::All);
        for limit in 1..=4 {
            let closed =
                match enumerate_closed(&problem, &start, limit, 20, &mut Budget::unlimited()) {
                    Ok(c) if !c.is_empty() => c,
                    Ok(_) | Err(TooManyClosed::Cap(_)) | Err(TooManyClosed::Budget) => continue,
                };
            let (_, _, learned) = run_level(
                &problem,
                &start,
                limit,
                Mode::Learning,
                &mut Budget::unlimited(),
            );
            tested += 1;
            for c in &learned {
                for t in &closed {
                    if c.iter().all(|a| t.atoms.contains(a)) {
                        violation = Some(format!(
                            "seed {seed} limit {limit}: {} holds on a closed tableau",
                            dump_constraint(c, &problem.symbols)
                        ));
                    }
                }
            }
        }
        seed += 1;
    }
    let ok = violation.is_none();
    report(
        4,
        "learned constraints spare closed tableaux",
        ok,
        violation.unwrap_or_else(|| format!("{tested} levels with closed tableaux, {seed} seeds")),
    );
    assert!(ok);
}

fn sorted_dump(atoms: impl IntoIterator<Item = Atom>, problem: &Problem) -> String {
    let mut v: Vec<Atom> = atoms.into_iter().collect();
    v.sort();
    dump_constraint(&v, &problem.symbols)
}

fn stuck_after(
    problem: &Problem,
    start: &[ClauseId],
    limit: usize,
    prefix: &[Inference],
) -> Vec<Atom> {
    let mut level = LearningLevel::new(problem, start, limit);
    for j in prefix {
        level.force(j).expect("prefix applies");
    }
    match level.expand() {
        Expansion::Stuck(r) => r.into_iter().collect(),
        Expansion::Applied(j) => panic!("goal was not stuck: {j:?}"),
    }
}

fn ext(goal: &str, clause: u32) -> Inference {
    Inference::Extend {
        goal: goal.parse().unwrap(),
        clause: ClauseId(clause),
        literal: 1,
    }
}

#[test]
fn criterion_5_constraints_match_worked_examples() {
    let running = Problem::parse_str(RUNNING, "running.p", None).unwrap();
    let got = stuck_after(
        &running,
        &[ClauseId(0)],
        3,
        &[
            Inference::Start {
                clause: ClauseId(0),
            },
            ext("1", 1),
            ext("1.2", 2),
            Inference::Reduce {
                goal: "1.2.2".parse().unwrap(),
                ancestor: "1".parse().unwrap(),
            },
            ext("2", 3),
            ext("4", 4),
        ],
    );
    let first = sorted_dump(got, &running);
    let want_first = "r(x@0/0,x@0/1)@3 x@0/0->c x@0/1->d";

    let scenario = Problem::parse_str(REDUCTION_SCENARIO, "reduction.p", None).unwrap();
    let got = stuck_after(
        &scenario,
        &[ClauseId(0)],
        5,
        &[
            Inference::Start {
                clause: ClauseId(0),
            },
            ext("1", 1),
            ext("1.2", 2),
            ext("1.2.2", 3),
            ext("1.2.2.2", 4),
        ],
    );
    let second = sorted_dump(got, &scenario);
    let p5 = Position::from_path(&[1, 2, 2, 2, 2]);
    let mut want: Vec<Atom> = ["1.2", "1.2.2", "1.2.2.2"]
        .iter()
        .map(|a| Atom::no_connect(a.parse().unwrap(), p5.clone()))
        .collect();
    let top = &scenario.clauses[0];
    let e4 = &scenario.clauses[4];
    let x = Position::root();
    want.push(Atom::place(
        top.literals[0].rename(&x),
        "1".parse().unwrap(),
    ));
    want.push(Atom::place(
        e4.literals[1].rename(&p5.parent().unwrap()),
        p5.clone(),
    ));
    let d = scenario.clauses[1].literals[0].args[0].clone();
    let var = top.literals[0].rename(&x).vars()[0].clone();
    want.push(Atom::bind(var, d));
    let want_second = sorted_dump(want, &scenario);

    let ok = first == want_first && second == want_second;
    report(
        5,
        "worked-example constraints",
        ok,
        format!("running [{first}], reduction scenario [{second}]"),
    );
    assert_eq!(first, want_first);
    assert_eq!(second, want_second);
}

fn blocks(l1: &connlearn::terms::Literal, l2: &connlearn::terms::Literal, s: &[Atom]) -> bool {
    let mut b = Bindings::new();
    for a in s {
        let Atom::Bind { var, term } = a else {
            panic!("not a binding: {a:?}")
        };
        b.bind(var.clone(), term.clone());
    }
    b.unify_args(&l1.args, &l2.args).is_err()
}

#[test]
fn criterion_6_blocking_explanations_are_irredundant() {
    let gen = TermGen::new(6);
    let mut r = rng(6);
    let mut cases = 0;
    let mut failure = None;
    while cases < 1000 && failure.is_none() {
        let sigma = gen.substitution(&mut r, 6);
        let (l1, l2) = gen.literal_pair(&mut r, 2);
        let mut empty = Bindings::new();
        if empty.unify_args(&l1.args, &l2.args).is_err() {
            continue;
        }
        let mut probe = sigma.clone();
        if probe.unify_args(&l1.args, &l2.args).is_ok() {
            continue;
        }
        cases += 1;
        let s = minimal_blocking_bindings(&l1, &l2, &sigma);
        let in_sigma = s.iter().all(|a| match a {
            Atom::Bind { var, term } => sigma.get(var) == Some(term),
            _ => false,
        });
        if !in_sigma || !blocks(&l1, &l2, &s) {
            failure = Some(format!(
                "case {cases}: result does not block or is not a subset"
            ));
            continue;
        }
        for i in 0..s.len() {
            let mut smaller = s.clone();
            smaller.remove(i);
            if blocks(&l1, &l2, &smaller) {
                failure = Some(format!("case {cases}: binding {i} is redundant"));
            }
        }
    }
    let ok = failure.is_none();
    report(
        6,
        "irredundant blocking explanations",
        ok,
        failure.unwrap_or_else(|| format!("{cases} blocked pairs")),
    );
    assert!(ok);
}

#[test]
fn criterion_7_watched_checks_match_the_naive_check() {
    let mut r = rng(7);
    let mut triples = 0;
    let mut failure = None;
    'outer: while triples < 10_000 {
        let universe = r.gen_range(4..14u32);
        let mut store = ConstraintStore::new();
        let mut trail = Trail::new();
        let mut stored: Vec<Vec<Atom>> = Vec::new();
        for _ in 0..40 {
            match r.gen_range(0..10) {
                0..=2 => {
                    let k = r.gen_range(1..=4usize.min(universe as usize));
                    let mut ids: Vec<u32> = (0..universe).collect();
                    ids.shuffle(&mut r);
                    let atoms: Vec<Atom> = ids[..k].iter().map(|&n| opaque_atom(n)).collect();
                    if is_violated_naive(&atoms, &trail) {
                        continue;
                    }
                    store.add_constraint(atoms.clone(), &trail);
                    stored.push(atoms);
                }
                3 if !trail.is_empty() => {
                    trail.pop_frame();
                }
                _ => {
                    let k = r.gen_range(0..3);
                    let mut tentative: Vec<Atom> = Vec::new();
                    for _ in 0..k {
                        let a = opaque_atom(r.gen_range(0..universe));
                        if !trail.contains(&a) && !tentative.contains(&a) {
                            tentative.push(a);
                        }
                    }
                    let mut got = store.check_conflicts(&trail, &tentative);
                    got.sort();
                    let mut want: Vec<usize> = Vec::new();
                    for (i, c) in stored.iter().enumerate() {
                        if c.iter().all(|a| trail.contains(a) || tentative.contains(a)) {
                            want.push(i);
                        }
                    }
                    let got_idx: Vec<usize> = got.iter().map(|id| id.0 as usize).collect();
                    triples += 1;
                    if got_idx != want {
                        failure = Some(format!("triple {triples}: got {got_idx:?}, want {want:?}"));
                        break 'outer;
                    }
                    if !store.watches_are_valid(&trail) {
                        failure = Some(format!("triple {triples}: watch invariant broken"));
                        break 'outer;
                    }
                    if got.is_empty() {
                        trail.commit_frame(Frame {
                            inference: Inference::Start {
                                clause: ClauseId(0),
                            },
                            atoms: tentative,
                        });
                    }
                }
            }
        }
    }
    let ok = failure.is_none();
    report(
        7,
        "watched conflict checks",
        ok,
        failure.unwrap_or_else(|| format!("{triples} triples agree with the naive check")),
    );
    assert!(ok);
}

fn puz_cnf_files(root: &Path) -> Vec<PathBuf> {
    let dir = root.join("Problems/PUZ");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map(|rd| rd.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    files.retain(|p| {
        p.file_name().and_then(|n| n.to_str()).is_some_and(|n| {
            n.ends_with(".p")
                && n.contains('-')
                && !n.contains('+')
                && !n.contains('^')
                && !n.contains('_')
        })
    });
    files.sort();
    files
}

#[test]
fn criterion_8_puz_sweep_proofs_check() {
    let Some(root) = tptp_root() else {
        let e = "TPTP is not set or has no Problems directory";
        report(8, "PUZ sweep", false, e);
        panic!("{e}");
    };
    let files = puz_cnf_files(&root);
    let mut theorems = 0;
    let mut rejected = Vec::new();
    let mut skipped = 0;
    for path in &files {
        let Ok(problem) = parse_problem(path, Some(&root)) else {
            skipped += 1;
            continue;
        };
        let options = SearchOptions::default();
        if let Outcome::Theorem { proof, depth } = prove(&problem, &options).outcome {
            theorems += 1;
            if let Err(e) = check_proof(&problem, &proof, depth) {
                rejected.push(format!("{}: {e}", path.display()));
            }
        }
    }
    let ok = !files.is_empty() && rejected.is_empty();
    report(
        8,
        "PUZ sweep",
        ok,
        format!(
            "{} files, {skipped} not CNF or unparsable, {theorems} theorems, rejected {rejected:?}",
            files.len()
        ),
    );
    assert!(ok);
}
