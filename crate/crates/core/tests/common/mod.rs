#![allow(dead_code)]

use connlearn::constraints::Atom;
use connlearn::terms::{Bindings, Literal, Position, SymbolId, SymbolKind, SymbolTable, Term, Var};
use connlearn::tptp::Problem;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RUNNING: &str = include_str!("../fixtures/running.p");
pub const REDUCTION_SCENARIO: &str = include_str!("../fixtures/reduction_scenario.p");

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const PREDICATES: [(&str, usize); 5] = [("r", 2), ("p", 1), ("q", 1), ("s", 0), ("p", 1)];

fn term(rng: &mut ChaCha8Rng, vars: usize, nested: bool) -> String {
    let roll = rng.gen_range(0..10);
    if vars > 0 && roll < 6 {
        format!("X{}", rng.gen_range(0..vars))
    } else if roll < 9 || nested {
        ["a", "a", "b"][rng.gen_range(0..3)].to_owned()
    } else {
        format!("f({})", term(rng, vars, true))
    }
}

/// Clause text for a small random problem: at most 6 clauses of at most 3
/// literals, at most 2 variables per clause, function nesting at most 1.
/// Half the problems are Horn-shaped (a negative goal clause, then clauses
/// with exactly one positive literal), which makes closed tableaux common.
pub fn random_problem_text(rng: &mut ChaCha8Rng) -> String {
    let horn = rng.gen_bool(0.5);
    let n = rng.gen_range(2..=6);
    let mut out = String::new();
    for i in 0..n {
        let vars = rng.gen_range(0..=2);
        let len = if horn { [1, 1, 2, 3] } else { [1, 2, 2, 3] }[rng.gen_range(0..4)];
        let lits: Vec<String> = (0..len)
            .map(|k| {
                let pool = if horn {
                    &PREDICATES[1..]
                } else {
                    &PREDICATES[..]
                };
                let (p, arity) = pool[rng.gen_range(0..pool.len())];
                let negative = match (horn, i, k) {
                    (false, _, _) => rng.gen_bool(0.5),
                    (true, 0, _) => true,
                    (true, _, k) => k > 0,
                };
                let sign = if negative { "~" } else { "" };
                if arity == 0 {
                    format!("{sign}{p}")
                } else {
                    let args: Vec<String> = (0..arity).map(|_| term(rng, vars, false)).collect();
                    format!("{sign}{p}({})", args.join(","))
                }
            })
            .collect();
        let role = if i == 0 || rng.gen_bool(0.2) {
            "negated_conjecture"
        } else {
            "axiom"
        };
        out.push_str(&format!("cnf(c{i}, {role}, {}).\n", lits.join(" | ")));
    }
    out
}

pub fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    loop {
        let text = random_problem_text(rng);
        let p = Problem::parse_str(&text, "random.p", None).expect("generated text parses");
        if !p.clauses.is_empty() {
            return p;
        }
    }
}

/// Random first-order terms over variables at two positions, constants
/// `c`, `d` and functions `f/1`, `g/2`.
pub struct TermGen {
    pub symbols: SymbolTable,
    pub c: SymbolId,
    pub d: SymbolId,
    pub f: SymbolId,
    pub g: SymbolId,
    pub p: SymbolId,
    pub vars: Vec<Var>,
}

impl TermGen {
    pub fn new(var_count: u32) -> Self {
        let mut symbols = SymbolTable::new();
        let c = symbols.intern("c", 0, SymbolKind::Function).unwrap();
        let d = symbols.intern("d", 0, SymbolKind::Function).unwrap();
        let f = symbols.intern("f", 1, SymbolKind::Function).unwrap();
        let g = symbols.intern("g", 2, SymbolKind::Function).unwrap();
        let p = symbols.intern("p", 2, SymbolKind::Predicate).unwrap();
        let vars = (0..var_count)
            .map(|i| Var::new(Position::from_path(&[1 + i % 2]), i / 2))
            .collect();
        TermGen {
            symbols,
            c,
            d,
            f,
            g,
            p,
            vars,
        }
    }

    pub fn term(&self, rng: &mut ChaCha8Rng, depth: usize) -> Term {
        let roll = rng.gen_range(0..10);
        if depth == 0 || roll < 4 {
            if !self.vars.is_empty() && rng.gen_bool(0.6) {
                Term::Var(self.vars[rng.gen_range(0..self.vars.len())].clone())
            } else {
                Term::constant(if rng.gen_bool(0.5) { self.c } else { self.d })
            }
        } else if roll < 7 {
            Term::app(self.f, vec![self.term(rng, depth - 1)])
        } else {
            Term::app(
                self.g,
                vec![self.term(rng, depth - 1), self.term(rng, depth - 1)],
            )
        }
    }

    /// A positive and a negative `p` literal with random arguments.
    pub fn literal_pair(&self, rng: &mut ChaCha8Rng, depth: usize) -> (Literal, Literal) {
        let a = vec![self.term(rng, depth), self.term(rng, depth)];
        let b = vec![self.term(rng, depth), self.term(rng, depth)];
        (
            Literal::new(true, self.p, a),
            Literal::new(false, self.p, b),
        )
    }

    /// A consistent substitution built from random unifications, with
    /// between 1 and `max` bindings.
    pub fn substitution(&self, rng: &mut ChaCha8Rng, max: usize) -> Bindings {
        loop {
            let mut b = Bindings::new();
            for _ in 0..8 {
                let s = Term::Var(self.vars[rng.gen_range(0..self.vars.len())].clone());
                let t = self.term(rng, 2);
                let mark = b.mark();
                if b.unify(&s, &t).is_ok() && b.len() > max {
                    b.undo_to(mark);
                }
            }
            if !b.is_empty() {
                return b;
            }
        }
    }

    /// Every ground term of depth at most 1.
    pub fn small_ground_terms(&self) -> Vec<Term> {
        let consts = [Term::constant(self.c), Term::constant(self.d)];
        let mut out = consts.to_vec();
        for a in &consts {
            out.push(Term::app(self.f, vec![a.clone()]));
            for b in &consts {
                out.push(Term::app(self.g, vec![a.clone(), b.clone()]));
            }
        }
        out
    }
}

/// Distinct opaque atoms for store tests.
pub fn opaque_atom(n: u32) -> Atom {
    Atom::no_connect(Position::root(), Position::from_path(&[n + 1]))
}

pub fn tptp_root() -> Option<std::path::PathBuf> {
    let root = std::path::PathBuf::from(std::env::var_os("TPTP")?);
    root.join("Problems").is_dir().then_some(root)
}
