//! The Kleisli triple laws, checked exhaustively over small carriers.

use forge::monad::catalog::{law_suite, parse_monad};
use forge::monad::{check_monad_laws, LawOptions};

fn main() {
    // Every monad in the catalog, at the options the suite pins for it:
    // carriers to size 2 everywhere, plus a unit-law pass at size 3 for the
    // well-order monad whose T(X) grows too fast for full associativity.
    for (spec, opts) in law_suite() {
        let m = parse_monad(&spec).unwrap();
        let rep = check_monad_laws(&m, &opts);
        println!(
            "{spec:<24} size {}  {:>9} instances  {}",
            opts.max_size,
            rep.checked,
            if rep.passed() { "ok" } else { "FAILED" }
        );
        assert!(rep.passed(), "{spec} broke a monad law");
    }

    // A single monad with custom options, for comparison.
    let m = parse_monad("powerset:full").unwrap();
    let rep = check_monad_laws(&m, &LawOptions { max_size: 3, ..LawOptions::default() });
    println!("\npowerset:full at size 3: {} instances, coverage {:?}", rep.checked, rep.coverage);
    assert!(rep.passed());
}
