#![no_main]

use connlearn::tptp::Problem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(problem) = Problem::parse_str(src, "fuzz.p", None) {
        let text = problem.to_tptp();
        let again = Problem::parse_str(&text, "again.p", None).expect("rendered problem parses");
        assert_eq!(again.to_tptp(), text);
    }
});
