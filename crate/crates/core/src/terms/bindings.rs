use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnifyFailure {
    #[error("symbol clash")]
    Clash,
    #[error("occurs check")]
    Occurs,
}

/// Variables bound by one successful unification, in binding order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BindingDelta {
    pub(crate) start: usize,
    pub vars: Vec<Var>,
}

impl BindingDelta {
    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }
}

/// Triangular substitution: bound terms may mention bound variables, and
/// lookups dereference lazily. Undo is a truncation of `order`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    map: HashMap<Var, Term>,
    order: Vec<Var>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    /// Bindings in the order they were made.
    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> + '_ {
        self.order.iter().map(move |v| (v, &self.map[v]))
    }

    pub fn mark(&self) -> usize {
        self.order.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        debug_assert!(mark <= self.order.len());
        for v in self.order.drain(mark..) {
            self.map.remove(&v);
        }
    }

    pub fn undo_delta(&mut self, delta: &BindingDelta) {
        assert_eq!(
            delta.start + delta.vars.len(),
            self.order.len(),
            "binding deltas must be undone most recent first"
        );
        debug_assert_eq!(&self.order[delta.start..], &delta.vars[..]);
        self.undo_to(delta.start);
    }

    /// Bind without checks. The caller guarantees `v` is unbound and the
    /// binding creates no cycle.
    pub fn bind(&mut self, v: Var, t: Term) {
        debug_assert!(!self.map.contains_key(&v));
        self.order.push(v.clone());
        self.map.insert(v, t);
    }

    pub fn resolve<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// The term with every bound variable replaced, recursively.
    pub fn apply(&self, t: &Term) -> Term {
        match self.resolve(t) {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(f, args) if args.is_empty() => Term::App(*f, args.clone()),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn equal(&self, a: &Term, b: &Term) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| self.equal(x, y))
            }
            _ => false,
        }
    }

    pub fn occurs(&self, v: &Var, t: &Term) -> bool {
        match self.resolve(t) {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    pub fn unify(&mut self, a: &Term, b: &Term) -> Result<BindingDelta, UnifyFailure> {
        self.unify_pairs(vec![(a.clone(), b.clone())])
    }

    pub fn unify_args(&mut self, a: &[Term], b: &[Term]) -> Result<BindingDelta, UnifyFailure> {
        if a.len() != b.len() {
            return Err(UnifyFailure::Clash);
        }
        self.unify_pairs(a.iter().cloned().zip(b.iter().cloned()).rev().collect())
    }

    /// Solve all pairs or leave the bindings untouched. Pairs are popped from
    /// the end of `stack`. When both sides are unbound variables, the one on
    /// the right is bound to the one on the left.
    fn unify_pairs(&mut self, mut stack: Vec<(Term, Term)>) -> Result<BindingDelta, UnifyFailure> {
        let start = self.order.len();
        while let Some((a, b)) = stack.pop() {
            let a = self.resolve(&a).clone();
            let b = self.resolve(&b).clone();
            let outcome = match (&a, &b) {
                (Term::Var(x), Term::Var(y)) if x == y => Ok(()),
                (_, Term::Var(y)) => self.bind_checked(y, &a),
                (Term::Var(x), _) => self.bind_checked(x, &b),
                (Term::App(f, xs), Term::App(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        Err(UnifyFailure::Clash)
                    } else {
                        stack.extend(xs.iter().cloned().zip(ys.iter().cloned()).rev());
                        Ok(())
                    }
                }
            };
            if let Err(e) = outcome {
                self.undo_to(start);
                return Err(e);
            }
        }
        Ok(BindingDelta {
            start,
            vars: self.order[start..].to_vec(),
        })
    }

    fn bind_checked(&mut self, v: &Var, t: &Term) -> Result<(), UnifyFailure> {
        if self.occurs(v, t) {
            return Err(UnifyFailure::Occurs);
        }
        self.bind(v.clone(), t.clone());
        Ok(())
    }

    /// Order-sensitive hash of the full state.
    pub fn state_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for (v, t) in self.iter() {
            v.hash(&mut h);
            t.hash(&mut h);
        }
        h.finish()
    }
}
