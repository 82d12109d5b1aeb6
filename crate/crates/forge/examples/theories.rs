//! Builtin theories, sums, tensors, and the text format.

use forge::theory::{builtin_theory, dsl, theory_sum, theory_tensor};

fn main() {
    let sl = builtin_theory("semilattice").unwrap();
    println!("{} has {} operations:", sl.name, sl.ops.len());
    for op in &sl.ops {
        println!("  {} / {}", op.name, op.arity);
    }
    for eq in &sl.equations {
        println!("  {eq}");
    }

    let free = builtin_theory("sigma22").unwrap();
    let sum = theory_sum(&sl, &free);
    println!("\nsum with {}: {} ops, {} equations", free.name, sum.ops.len(), sum.equations.len());

    // The tensor adds one commutation equation per pair of operations
    // across the two sides. join and bot against u0 and u1 gives four.
    let tensor = theory_tensor(&sl, &free);
    println!("tensor: {} ops, {} equations", tensor.ops.len(), tensor.equations.len());
    for eq in &tensor.equations[sum.equations.len()..] {
        println!("  {eq}");
    }
    assert_eq!(tensor.equations.len() - sum.equations.len(), 4);

    let src = "
        # a meet with top, the order dual of the builtin
        theory Meet {
          op meet : 2;
          op top : 0;
          eq (x,y,z) meet(meet(x,y),z) = meet(x,meet(y,z));
          eq (x,y) meet(x,y) = meet(y,x);
          eq (x) meet(x,x) = x;
          eq (x) meet(x,top) = x;
        }
    ";
    let parsed = dsl::parse_theory(src).unwrap();
    parsed.validate().unwrap();
    println!("\nparsed '{}' from text: {} ops, {} equations", parsed.name, parsed.ops.len(), parsed.equations.len());
}
