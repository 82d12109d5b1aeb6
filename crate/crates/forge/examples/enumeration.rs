//! Counting finite two-structure algebras up to isomorphism.

use forge::tensor::search::{enumerate_tensor_algebras, SearchConfig, TheoryFamily};

fn main() {
    // Semilattices carrying one extra unary operation that distributes over
    // the join, generated by a single point. Small enough to check by hand:
    // sizes 1, 2, 3 hold 1, 2, 3 classes.
    let left = TheoryFamily::by_name("semilattice").unwrap();
    let right = TheoryFamily::by_name("unary").unwrap();
    let cfg = SearchConfig { generators: 1, max_carrier: 3, ..SearchConfig::default() };
    let rep = enumerate_tensor_algebras(&left, &right, &cfg).unwrap();
    println!("(semilattice, unary), {} generator:", cfg.generators);
    for sc in &rep.per_size {
        println!("  size {}: {} classes ({} nodes)", sc.size, sc.classes, sc.nodes);
    }
    println!("  total {}", rep.total);
    assert_eq!(rep.per_size.iter().map(|s| s.classes).collect::<Vec<_>>(), [1, 2, 3]);
    assert_eq!(rep.total, 6);
    assert!(!rep.partial);

    // Without symmetry breaking the search walks every labelled model, so the
    // counts can only grow. The quotient counts above are the canonical ones.
    let raw_cfg = SearchConfig { symmetry_breaking: false, ..cfg.clone() };
    let raw = enumerate_tensor_algebras(&left, &right, &raw_cfg).unwrap();
    println!("  labelled total {} (>= {} classes)", raw.total, rep.total);
    assert!(raw.total >= rep.total);

    // A size-indexed family on the left: the well-order theory instantiated
    // at each carrier size, against the free binary signature, two
    // generators. Size 2 alone already holds 128 classes.
    let wo = TheoryFamily::wellorder_lowered();
    let free = TheoryFamily::by_name("sigma22").unwrap();
    let cfg2 = SearchConfig { generators: 2, max_carrier: 2, ..SearchConfig::default() };
    let rep2 = enumerate_tensor_algebras(&wo, &free, &cfg2).unwrap();
    println!("\n(wellorder, sigma22), {} generators:", cfg2.generators);
    for sc in &rep2.per_size {
        println!("  size {}: {} classes ({} nodes)", sc.size, sc.classes, sc.nodes);
    }
    assert_eq!(rep2.per_size.last().unwrap().classes, 128);

    // Kept sample models were re-verified against both theories during the
    // search; spot-check that some survived for inspection.
    assert!(!rep2.samples.is_empty());
    println!("  {} sample models retained", rep2.samples.len());
}
