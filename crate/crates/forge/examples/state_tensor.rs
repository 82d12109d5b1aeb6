//! The semilattice/state tensor computed two ways: closed-form count vs
//! saturation of the free algebra.

use forge::theory::{builtin_theory, state_theory};
use forge::tensor::{saturate_free_tensor, verify_state_tensor};
use forge::DEFAULT_TERM_BUDGET;

fn main() {
    // tensor(Semilattice, State(S)) free over X should match the nonempty
    // composite monad carrier S -> P(S x X), here counted with the empty
    // subset included: (2^(|S|*|X|))^|S|.
    for (s, x) in [(1, 1), (1, 2), (2, 1)] {
        let rep = verify_state_tensor(s, x, 24, 500_000).unwrap();
        println!(
            "S = {s}, X = {x}: expected {}, found {} ({} rounds, {})",
            rep.expected, rep.found, rep.rounds, rep.outcome
        );
        assert!(rep.stabilized);
        assert!(rep.model_satisfies_theory);
        assert!(rep.bijection);
        assert_eq!(rep.outcome, "pass");
        assert_eq!(u128::try_from(rep.found).unwrap(), rep.expected);
    }

    // The saturation itself, watched round by round. Layers alternate: monad
    // operations over current representatives, then joins, re-quotienting
    // after each. The trace for one state and two generators collapses back
    // down to the 4 classes the count above predicts for S=1, X=2.
    let st = state_theory(1);
    let (alg, sat) = saturate_free_tensor(&st, 2, 16, DEFAULT_TERM_BUDGET).unwrap();
    println!(
        "\nsaturate tensor(Semilattice, State(1)) over 2 generators: {} classes in {} rounds",
        sat.classes, sat.rounds
    );
    println!("  class trace {:?}", sat.class_trace);
    assert!(sat.stabilized);
    assert!(sat.pattern_observed);
    assert_eq!(sat.classes, 4);
    assert_eq!(alg.classes.len(), 4);
    for c in &alg.classes {
        println!("  {}", c.repr);
    }

    // Same machinery against a theory with no state flavor at all: the empty
    // theory contributes nothing, so the tensor is just the free semilattice,
    // 2^n - 1 nonempty joins plus the n generators' closure = 2^n with bot.
    let empty = builtin_theory("empty").unwrap();
    let (alg2, sat2) = saturate_free_tensor(&empty, 3, 16, DEFAULT_TERM_BUDGET).unwrap();
    println!(
        "\nsaturate tensor(Semilattice, Empty) over 3 generators: {} classes",
        sat2.classes
    );
    assert!(sat2.stabilized);
    assert_eq!(alg2.classes.len(), 8);
}
