#![no_main]

use connlearn::calculus::{check_proof, parse_proof};
use connlearn::tptp::Problem;
use libfuzzer_sys::fuzz_target;

const PROBLEM: &str = "\
cnf(a, axiom, p(z)).
cnf(b, axiom, ~p(X) | p(s(X))).
cnf(g, negated_conjecture, ~p(s(z))).
cnf(h, axiom, q(X, f(X)) | ~p(X)).
";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let problem = Problem::parse_str(PROBLEM, "successor.p", None).unwrap();
    if let Ok(proof) = parse_proof(text, &problem) {
        let _ = check_proof(&problem, &proof, 8);
        let again = parse_proof(&proof.render(&problem), &problem).expect("rendered proof parses");
        assert_eq!(again.steps, proof.steps);
    }
});
