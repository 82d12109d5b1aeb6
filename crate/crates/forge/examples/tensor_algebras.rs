//! Two structures on one carrier: table commutation, algebra laws, and the
//! exchange law relating them.

use forge::model::FinAlgebra;
use forge::tensor::{
    check_commutation_tables, check_em_algebra, check_tensor_law, commutation_cross_check,
    em_from_semilattice_tables, em_from_sigma22_tables, TensorAlgebra,
};
use forge::theory::builtin_theory;

fn algebra(u: [[usize; 2]; 2]) -> FinAlgebra {
    // The two-element chain c0 < c1 with join = max and bot = c0, plus one
    // binary operation pair u0 = u1 given by the table.
    let v = serde_json::json!({
        "carrier": ["c0", "c1"],
        "tables": {
            "join": {"c0,c0": "c0", "c0,c1": "c1", "c1,c0": "c1", "c1,c1": "c1"},
            "bot": {"": "c0"},
            "u0": {
                "c0,c0": format!("c{}", u[0][0]), "c0,c1": format!("c{}", u[0][1]),
                "c1,c0": format!("c{}", u[1][0]), "c1,c1": format!("c{}", u[1][1]),
            },
            "u1": {
                "c0,c0": format!("c{}", u[0][0]), "c0,c1": format!("c{}", u[0][1]),
                "c1,c0": format!("c{}", u[1][0]), "c1,c1": format!("c{}", u[1][1]),
            },
        }
    });
    FinAlgebra::from_json(&v).unwrap()
}

fn main() {
    let sl = builtin_theory("semilattice").unwrap();
    let free = builtin_theory("sigma22").unwrap();

    // u = max commutes with join; u = first projection does too.
    // u = min does not: max(min(a,b), min(c,d)) can undershoot.
    for (name, u) in [
        ("max", [[0usize, 1], [1, 1]]),
        ("fst", [[0, 0], [1, 1]]),
        ("min", [[0, 0], [0, 1]]),
    ] {
        let alg = algebra(u);
        let comm = check_commutation_tables(&sl, &free, &alg).unwrap();
        print!("u = {name}: tables {}", if comm.ok { "commute" } else { "do not commute" });

        // The same tables induce a powerset-monad structure (fold join over
        // a subset) and a free-binary-signature structure (fold u through a
        // tree). The exchange law holds exactly when the tables commute.
        let s_struct = em_from_semilattice_tables(&alg).unwrap();
        let t_struct = em_from_sigma22_tables(&alg, 1).unwrap();
        assert!(check_em_algebra(&s_struct, 2).ok);
        assert!(check_em_algebra(&t_struct, 2).ok);
        let pair = TensorAlgebra::new(s_struct, t_struct).unwrap();
        let law = check_tensor_law(&pair, 2, 2, 1_000_000);
        println!(", exchange law {} ({} instances)", if law.ok { "holds" } else { "fails" }, law.checked);
        assert_eq!(comm.ok, law.ok);
        if let Some(w) = &law.witness {
            println!("  witness: p = {}, q = {}, {} != {}", w.p, w.q, w.left, w.right);
        }
    }

    // The same agreement, on randomized candidates over a 3-atom universe.
    let cc = commutation_cross_check(100, 3, forge::DEFAULT_SEED);
    println!(
        "\ncross-check on {} random candidates: {} commute and pass, {} violate and fail, {} disagreements",
        cc.samples, cc.both_pass, cc.both_fail, cc.disagreements.len()
    );
    assert!(cc.ok);
}
