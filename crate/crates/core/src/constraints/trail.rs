use std::collections::HashSet;

use super::Atom;
use crate::calculus::Inference;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub inference: Inference,
    pub atoms: Vec<Atom>,
}

/// Stack of frames, one per applied inference, plus the set of every atom
/// currently asserted.
#[derive(Clone, Debug, Default)]
pub struct Trail {
    frames: Vec<Frame>,
    members: HashSet<Atom>,
}

impl Trail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.members.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn atom_count(&self) -> usize {
        self.members.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.frames.iter().flat_map(|f| f.atoms.iter())
    }

    /// Push without a conflict check; the search checks first.
    pub fn commit_frame(&mut self, frame: Frame) {
        for atom in &frame.atoms {
            let fresh = self.members.insert(atom.clone());
            debug_assert!(fresh, "atom asserted twice: {atom:?}");
        }
        self.frames.push(frame);
    }

    pub fn pop_frame(&mut self) -> Frame {
        let frame = self.frames.pop().expect("pop from an empty trail");
        for atom in &frame.atoms {
            self.members.remove(atom);
        }
        frame
    }

    pub fn clear(&mut self) {
        self.frames.clear();
        self.members.clear();
    }
}
