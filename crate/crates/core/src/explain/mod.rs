//! Reasons for dead ends: small sets of trail atoms that account for an
//! inference failing or a branch being open.

use indexmap::IndexSet;

use crate::calculus::{ApplyRecord, CalculusFailure, Connection, Inference, Tableau};
use crate::constraints::Atom;
use crate::terms::{equal_under, never_unifiable, Bindings, Literal, Position, Term, Var};

/// A set of atoms, all on the trail when it is produced.
pub type Reason = IndexSet<Atom>;

enum Target<'a> {
    /// The seed equations must become unsolvable.
    Clash,
    /// The two tuples must become syntactically equal.
    Equal(&'a [Term], &'a [Term]),
}

/// A subset of `sigma` that makes unifying `l1` with the complement of `l2`
/// fail, irredundant: dropping any returned binding lets the unification
/// succeed.
///
/// Panics if the literals unify under `sigma` or can never unify.
pub fn minimal_blocking_bindings(l1: &Literal, l2: &Literal, sigma: &Bindings) -> Vec<Atom> {
    assert!(
        !never_unifiable(l1, l2),
        "blocking bindings requested for literals that never unify"
    );
    let entries: Vec<(Var, Term)> = sigma.iter().map(|(v, t)| (v.clone(), t.clone())).collect();
    let seed = zip_args(&l1.args, &l2.args);
    minimal_subset(&seed, &entries, &Target::Clash)
        .unwrap_or_else(|| panic!("literals unify under the given substitution"))
}

/// A subset `S` of `sigma` such that `lhs` and `rhs` are equal under every
/// substitution satisfying `S` and the `seed` equations; irredundant as for
/// [`minimal_blocking_bindings`]. Seed equations are never part of the
/// result.
///
/// Panics unless `lhs` and `rhs` are equal under `sigma` plus `seed`.
pub fn minimal_falsifying_bindings(
    lhs: &[Term],
    rhs: &[Term],
    sigma: &Bindings,
    seed: &[(Term, Term)],
) -> Vec<Atom> {
    let entries: Vec<(Var, Term)> = sigma.iter().map(|(v, t)| (v.clone(), t.clone())).collect();
    falsifying_over(lhs, rhs, &entries, seed)
}

fn falsifying_over(
    lhs: &[Term],
    rhs: &[Term],
    entries: &[(Var, Term)],
    seed: &[(Term, Term)],
) -> Vec<Atom> {
    minimal_subset(seed, entries, &Target::Equal(lhs, rhs))
        .unwrap_or_else(|| panic!("tuples are not equal under the given substitution"))
}

fn zip_args(a: &[Term], b: &[Term]) -> Vec<(Term, Term)> {
    a.iter().cloned().zip(b.iter().cloned()).collect()
}

/// Seed, then the chosen entries, in a fresh substitution. `None` when some
/// equation fails.
fn build(seed: &[(Term, Term)], entries: &[(Var, Term)], chosen: &[usize]) -> Option<Bindings> {
    let mut tau = Bindings::new();
    for (s, t) in seed {
        tau.unify(s, t).ok()?;
    }
    for &i in chosen {
        let (v, t) = &entries[i];
        tau.unify(&Term::Var(v.clone()), t).ok()?;
    }
    Some(tau)
}

fn reached(target: &Target<'_>, tau: Option<&Bindings>) -> bool {
    match (target, tau) {
        (Target::Clash, tau) => tau.is_none(),
        (Target::Equal(l, r), Some(tau)) => equal_under(l, r, tau),
        (Target::Equal(..), None) => false,
    }
}

/// Scan `entries` in binding order on top of a scratch substitution holding
/// the seed and the entries kept so far. The entry at which the target is
/// first reached is kept, and the scan restarts from a checkpoint that
/// includes it. Once the kept entries alone reach the target, a deletion pass
/// drops any that turned out redundant.
fn minimal_subset(
    seed: &[(Term, Term)],
    entries: &[(Var, Term)],
    target: &Target<'_>,
) -> Option<Vec<Atom>> {
    let mut kept: Vec<usize> = Vec::new();
    loop {
        let base = build(seed, entries, &kept);
        if reached(target, base.as_ref()) {
            break;
        }
        let mut tau = base?;
        let mut culprit = None;
        for (i, (v, t)) in entries.iter().enumerate() {
            if kept.contains(&i) {
                continue;
            }
            let ok = tau.unify(&Term::Var(v.clone()), t).is_ok();
            let hit = match target {
                Target::Clash => !ok,
                Target::Equal(l, r) => !ok || equal_under(l, r, &tau),
            };
            if hit {
                culprit = Some(i);
                break;
            }
        }
        kept.push(culprit?);
    }
    let mut k = 0;
    while k < kept.len() {
        let mut without = kept.clone();
        without.remove(k);
        if reached(target, build(seed, entries, &without).as_ref()) {
            kept = without;
        } else {
            k += 1;
        }
    }
    kept.sort_unstable();
    Some(
        kept.into_iter()
            .map(|i| Atom::bind(entries[i].0.clone(), entries[i].1.clone()))
            .collect(),
    )
}

/// Why the branch ending at `goal` is open at all: its literal, and every
/// ancestor it could never be connected to.
pub fn explain_open_branch(tableau: &Tableau, goal: &Position) -> Reason {
    let lit = tableau.literal_at(goal).expect("goal carries a literal");
    let mut reason = Reason::new();
    reason.insert(Atom::place(lit.clone(), goal.clone()));
    for q in tableau.ancestors(goal).into_iter().rev() {
        if never_unifiable(tableau.literal_at(&q).unwrap(), lit) {
            reason.insert(Atom::no_connect(q, goal.clone()));
        }
    }
    reason
}

fn place_of(tableau: &Tableau, p: &Position) -> Atom {
    Atom::place(tableau.literal_at(p).unwrap().clone(), p.clone())
}

fn connection_seed(c: &Connection) -> Vec<(Term, Term)> {
    zip_args(&c.goal, &c.partner)
}

/// Why `j` could not be applied. The goal's own placement is left to
/// [`explain_open_branch`].
pub fn explain_failed_inference(
    tableau: &Tableau,
    j: &Inference,
    failure: &CalculusFailure,
) -> Reason {
    let mut reason = Reason::new();
    if let Inference::Reduce { ancestor, .. } = j {
        reason.insert(place_of(tableau, ancestor));
    }
    match failure {
        CalculusFailure::DepthBlocked => {}
        CalculusFailure::ConnectionBlocked { goal, partner } => {
            if never_unifiable(goal, partner) {
                return reason;
            }
            reason.extend(minimal_blocking_bindings(goal, partner, tableau.bindings()));
        }
        CalculusFailure::RegularityBlocked {
            diseq,
            created,
            connection,
        } => {
            if *created {
                reason.insert(place_of(tableau, &diseq.ancestor));
            } else {
                reason.insert(diseq.atom());
            }
            reason.extend(minimal_falsifying_bindings(
                &diseq.lhs,
                &diseq.rhs,
                tableau.bindings(),
                &connection_seed(connection),
            ));
        }
    }
    reason
}

/// Trail atoms that make the atoms of `conflict` asserted by `rec` follow
/// from the inference alone. Call while `rec` is still applied.
///
/// Placements made by the inference depend only on its goal and clause.
/// No-connection facts and disequations additionally depend on the
/// ancestor's literal. Bindings made by the inference depend on the part of
/// the existing substitution that forces them.
pub fn conflict_context(tableau: &Tableau, rec: &ApplyRecord, conflict: &[Atom]) -> Reason {
    let mut reason = Reason::new();
    if let Inference::Reduce { ancestor, .. } = &rec.inference {
        reason.insert(place_of(tableau, ancestor));
    }
    let mut forced_vars = Vec::new();
    let mut forced_terms = Vec::new();
    for a in conflict.iter().filter(|a| rec.atoms.contains(a)) {
        match a {
            Atom::NoConnect { ancestor, .. } | Atom::Diseq { ancestor, .. } => {
                reason.insert(place_of(tableau, ancestor));
            }
            Atom::Bind { var, term } => {
                forced_vars.push(Term::Var(var.clone()));
                forced_terms.push(term.clone());
            }
            Atom::Place { .. } => {}
        }
    }
    if !forced_vars.is_empty() {
        let connection = rec
            .connection
            .as_ref()
            .expect("bindings come from a connection");
        let before = tableau.bindings().len() - rec.delta.len();
        let entries: Vec<(Var, Term)> = tableau
            .bindings()
            .iter()
            .take(before)
            .map(|(v, t)| (v.clone(), t.clone()))
            .collect();
        reason.extend(falsifying_over(
            &forced_vars,
            &forced_terms,
            &entries,
            &connection_seed(connection),
        ));
    }
    reason
}
