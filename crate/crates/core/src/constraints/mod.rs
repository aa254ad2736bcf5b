//! Learned constraints over tableau atoms, with one-watched-atom conflict
//! detection.
//!
//! All atoms are positive facts, so there is nothing to propagate: a
//! constraint only matters at the moment its last missing atom is about to be
//! asserted. Each stored constraint watches one atom that is not on the
//! trail. Asserting that atom visits the constraint, which either moves its
//! watch to another absent atom or reports a conflict.

mod atom;
mod trail;

pub use atom::{dump_constraint, Atom, ShowAtom};
pub use trail::{Frame, Trail};

use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub atoms: Vec<Atom>,
    /// Index into `atoms`; `None` only for the empty constraint.
    pub watch: Option<usize>,
}

/// Constraints learned at the current depth limit. Nothing is forgotten
/// until [`ConstraintStore::clear_level`].
#[derive(Clone, Debug, Default)]
pub struct ConstraintStore {
    constraints: Vec<Constraint>,
    watches: HashMap<Atom, Vec<ConstraintId>>,
    exhausted: bool,
}

impl ConstraintStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn get(&self, id: ConstraintId) -> &Constraint {
        &self.constraints[id.0 as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ConstraintId, &Constraint)> {
        self.constraints
            .iter()
            .enumerate()
            .map(|(i, c)| (ConstraintId(i as u32), c))
    }

    /// Set once the empty constraint has been learned.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn clear_level(&mut self) {
        self.constraints.clear();
        self.watches.clear();
        self.exhausted = false;
    }

    /// Store `atoms` as a constraint. At least one atom must be off the
    /// trail; the first such atom becomes the watch.
    pub fn add_constraint(&mut self, atoms: Vec<Atom>, trail: &Trail) -> ConstraintId {
        let mut atoms = atoms;
        dedup_in_place(&mut atoms);
        let id = ConstraintId(self.constraints.len() as u32);
        let watch = if atoms.is_empty() {
            self.exhausted = true;
            None
        } else {
            let w = atoms.iter().position(|a| !trail.contains(a));
            debug_assert!(w.is_some(), "learned constraint is violated by the trail");
            let w = w.unwrap_or(0);
            self.watches.entry(atoms[w].clone()).or_default().push(id);
            Some(w)
        };
        self.constraints.push(Constraint { atoms, watch });
        id
    }

    /// Every stored constraint whose atoms all lie in `trail ∪ tentative`.
    /// Non-conflicting constraints visited on the way get their watch moved
    /// to an atom outside both sets. The trail is not modified.
    pub fn check_conflicts(&mut self, trail: &Trail, tentative: &[Atom]) -> Vec<ConstraintId> {
        let mut conflicts = Vec::new();
        if self.exhausted {
            conflicts.extend(
                self.iter()
                    .filter(|(_, c)| c.atoms.is_empty())
                    .map(|(id, _)| id),
            );
        }
        let absent = |a: &Atom| !trail.contains(a) && !tentative.contains(a);
        for (i, atom) in tentative.iter().enumerate() {
            if tentative[..i].contains(atom) {
                continue;
            }
            let Some(list) = self.watches.get_mut(atom) else {
                continue;
            };
            let watching = std::mem::take(list);
            let mut stay = Vec::new();
            let mut moved = Vec::new();
            for id in watching {
                let c = &mut self.constraints[id.0 as usize];
                let n = c.atoms.len();
                let from = c.watch.unwrap_or(0);
                let replacement = (1..n)
                    .map(|k| (from + k) % n)
                    .find(|&k| absent(&c.atoms[k]));
                match replacement {
                    Some(k) => {
                        c.watch = Some(k);
                        moved.push((c.atoms[k].clone(), id));
                    }
                    None => {
                        stay.push(id);
                        conflicts.push(id);
                    }
                }
            }
            if stay.is_empty() {
                self.watches.remove(atom);
            } else {
                self.watches.insert(atom.clone(), stay);
            }
            for (a, id) in moved {
                self.watches.entry(a).or_default().push(id);
            }
        }
        conflicts
    }

    /// The conflict adding the fewest new atoms to `learned`; ties go to the
    /// earliest-learned constraint.
    pub fn select_conflict(
        &self,
        conflicts: &[ConstraintId],
        tentative: &[Atom],
        learned: &indexmap::IndexSet<Atom>,
    ) -> ConstraintId {
        assert!(!conflicts.is_empty());
        *conflicts
            .iter()
            .min_by_key(|&&id| {
                let added = self
                    .get(id)
                    .atoms
                    .iter()
                    .filter(|a| !tentative.contains(a) && !learned.contains(*a))
                    .count();
                (added, id.0)
            })
            .unwrap()
    }

    /// Check the watch invariant: every constraint that is not violated by
    /// the trail watches an atom that is off the trail and is filed under it.
    pub fn watches_are_valid(&self, trail: &Trail) -> bool {
        self.iter().all(|(id, c)| match c.watch {
            None => c.atoms.is_empty(),
            Some(w) => {
                let filed = self
                    .watches
                    .get(&c.atoms[w])
                    .is_some_and(|l| l.contains(&id));
                filed && (!trail.contains(&c.atoms[w]) || is_violated_naive(&c.atoms, trail))
            }
        })
    }
}

/// Direct subset test against the trail.
pub fn is_violated_naive(atoms: &[Atom], trail: &Trail) -> bool {
    atoms.iter().all(|a| trail.contains(a))
}

fn dedup_in_place(atoms: &mut Vec<Atom>) {
    let mut seen = std::collections::HashSet::new();
    atoms.retain(|a| seen.insert(a.clone()));
}
