//! Extracting the equational theory a monad induces, up to a fixed arity.

use forge::monad::catalog::parse_monad;
use forge::monad::theorify;

fn main() {
    // Operations come from monad values over argument atoms: each m in
    // T({a0,..,ak-1}) acts as a k-ary operation by Kleisli extension.
    // Projection and substitution equations are then re-checked inside the
    // monad itself.
    for spec in ["powerset:full", "state:S=2", "terminal"] {
        let m = parse_monad(spec).unwrap();
        let (theory, rep) = theorify(&m, 2, 2);
        println!(
            "{spec}: {} operations, {} equations, {} violations",
            rep.ops,
            rep.equations,
            rep.violations.len()
        );
        assert!(rep.violations.is_empty());
        for op in theory.ops.iter().take(6) {
            println!("  {} / {}", op.name, op.arity);
        }
        for eq in theory.equations.iter().take(4) {
            println!("  {eq}");
        }
        println!();
    }
}
