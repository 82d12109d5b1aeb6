//! Eventual containment between a lasso of sets and a lasso of values, and
//! the splitting law that makes unions decompose.

use forge::subsume::{
    bounded_chain_subsumes, catalog, parse_lasso, parse_lasso_sets, ramsey_run, subsumes,
    subsumption_witness, union_split_property,
};
use forge::DEFAULT_SEED;

fn main() {
    // a subsumes x when infinitely many positions i_1 < i_2 < .. have every
    // earlier value x_{i_j} inside every later set a_{i_k}. For ultimately
    // periodic sequences one aligned recurring hit decides it.
    let a = parse_lasso_sets("pre:[{v0}];cyc:[{v0,v1},{}]").unwrap();
    let x = parse_lasso("pre:[v2];cyc:[v1,v0]").unwrap();
    match subsumption_witness(&a, &x) {
        Some((i, v)) => println!("a subsumes x: value {v} recurs from position {i}"),
        None => println!("a does not subsume x"),
    }
    assert!(subsumes(&a, &x));

    // Misalign the cycle and nothing recurs: v2 misses the full sets at odd
    // positions, v1 lands on the empty sets at even ones.
    let x2 = parse_lasso("pre:[];cyc:[v1,v2]").unwrap();
    assert!(!subsumes(&a, &x2));
    println!("misaligned x: subsumed = {}", subsumes(&a, &x2));

    // A hit confined to the preamble is not recurring.
    let pre_only = parse_lasso_sets("pre:[{v0}];cyc:[{}]").unwrap();
    let x3 = parse_lasso("pre:[v0];cyc:[v0]").unwrap();
    assert!(!subsumes(&pre_only, &x3));

    // The splitting law: a union of set lassos subsumes exactly when one
    // half does. No joint behavior can emerge from interleaving halves.
    let b = parse_lasso_sets("pre:[];cyc:[{v2},{v1}]").unwrap();
    let u = a.union(&b);
    println!(
        "\nunion {u}\n  subsumes x: {} (a: {}, b: {})",
        subsumes(&u, &x),
        subsumes(&a, &x),
        subsumes(&b, &x)
    );
    assert!(union_split_property(&a, &b, &x));
    assert!(union_split_property(&a, &b, &x2));

    // The same law over seeded random instances.
    let ram = ramsey_run(500, 4, DEFAULT_SEED);
    println!("\nsplitting law on {} random triples: {} hold", ram.samples, ram.holds);
    assert!(ram.ok);
    assert_eq!(ram.holds, ram.samples);

    // Two independent deciders: the recurrence reduction and a bounded
    // longest-chain search straight from the definition. They must agree on
    // the fixed cross-check catalog.
    let mut yes = 0;
    for (a, x) in catalog() {
        let fast = subsumes(&a, &x);
        let slow = bounded_chain_subsumes(&a, &x);
        assert_eq!(fast, slow, "deciders disagree on a = {a}, x = {x}");
        yes += usize::from(fast);
    }
    println!("catalog: both deciders agree on all 50 instances ({yes} subsume)");
}
