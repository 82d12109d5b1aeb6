//! Which monads let independent computations be sequenced in either order.

use forge::monad::catalog::parse_monad;
use forge::monad::{is_commutative, pair_exchange};
use forge::value::{parse_value, FiniteSet};

fn main() {
    for spec in ["identity", "powerset:full", "multiset:cap=3", "state:S=2", "wellorder", "list:cap=3"] {
        let m = parse_monad(spec).unwrap();
        let rep = is_commutative(&m, 2);
        match &rep.witness {
            None => println!("{spec:<16} commutative over {} pairs", rep.checked),
            Some(w) => {
                println!("{spec:<16} NOT commutative: p = {}, q = {}", w.p, w.q);
                println!("{:16} p-then-q gives {}", "", w.left);
                println!("{:16} q-then-p gives {}", "", w.right);
            }
        }
    }

    // The state witness, replayed by hand: reading before or after a write
    // are different programs.
    let m = parse_monad("state:S=2").unwrap();
    let a = FiniteSet::atoms("a", 1);
    let b = FiniteSet::atoms("b", 1);
    let p = parse_value("{s0->(s0,a0),s1->(s0,a0)}").unwrap();
    let q = parse_value("{s0->(s1,b0),s1->(s0,b0)}").unwrap();
    let (left, right) = pair_exchange(&m, &a, &p, &b, &q);
    println!("\nstate exchange by hand:\n  left  = {left}\n  right = {right}");
    assert_ne!(left, right);
}
