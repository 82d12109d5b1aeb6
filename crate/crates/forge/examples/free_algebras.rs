//! Free algebras by depth-bounded enumeration and by saturation.

use forge::free::{free_algebra, free_algebra_saturating, FreeError};
use forge::theory::builtin_theory;
use forge::value::FiniteSet;

fn main() {
    // The free bounded semilattice on n generators is the powerset of the
    // generators: joins of subsets, with bot for the empty one.
    let sl = builtin_theory("semilattice").unwrap();
    for n in 0..=3 {
        let gens = FiniteSet::atoms("g", n);
        let sat = free_algebra_saturating(&sl, &gens, 16, 100_000).unwrap();
        println!(
            "free semilattice on {n}: {} classes (stabilized after {} rounds)",
            sat.algebra.classes.len(),
            sat.rounds
        );
        assert!(sat.stabilized);
        assert_eq!(sat.algebra.classes.len(), 1 << n);
    }

    // Depth-bounded enumeration of an infinite free algebra stays honest:
    // the quotient is marked not closed.
    let mon = builtin_theory("monoid").unwrap();
    let gens = FiniteSet::atoms("g", 2);
    let fa = free_algebra(&mon, &gens, 3, 200_000).unwrap();
    println!(
        "\nfree monoid on 2, terms to depth 3: {} classes from {} terms, closed = {}",
        fa.classes.len(),
        fa.term_count,
        fa.closed
    );
    for c in fa.classes.iter().take(8) {
        println!("  {}", c.repr);
    }

    // Budgets fail upfront, with the size the enumeration would need.
    match free_algebra(&mon, &gens, 12, 10_000) {
        Err(FreeError::Budget { needed, budget }) => {
            println!("\ndepth 12 refused: {needed} terms against a budget of {budget}")
        }
        other => panic!("expected a budget refusal, got {other:?}"),
    }
}
