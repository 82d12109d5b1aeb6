//! The metalanguage: typed do-notation programs evaluated in any monad.

use std::collections::BTreeMap;

use forge::metalang::{equiv, eval, parse_program, typecheck};
use forge::monad::catalog::parse_monad;
use forge::value::parse_value;

fn main() {
    let src = "
        set A = {a0, a1};
        fun not : A -> A = { a0 : a1, a1 : a0 };
        var p : T A;
        var q : T A;
        term lr   = do x <- p; do y <- q; ret (x, y);
        term rl   = do y <- q; do x <- p; ret (x, y);
        term twice = do x <- p; ret not(not(x));
        term once  = do x <- p; ret x;
    ";
    let prog = parse_program(src).unwrap();

    let m = parse_monad("powerset:full").unwrap();
    let lr = typecheck(&prog, prog.term("lr").unwrap()).unwrap();
    println!("lr : {}", lr.ty());

    // Evaluation under an explicit environment.
    let mut env = BTreeMap::new();
    env.insert("p".to_string(), parse_value("{a0,a1}").unwrap());
    env.insert("q".to_string(), parse_value("{a1}").unwrap());
    let v = eval(&m, &prog, &lr, &env).unwrap();
    println!("lr at p = {{a0,a1}}, q = {{a1}}: {v}");

    // Double negation cancels, in every monad, at every environment.
    let twice = typecheck(&prog, prog.term("twice").unwrap()).unwrap();
    let once = typecheck(&prog, prog.term("once").unwrap()).unwrap();
    let rep = equiv(&m, &prog, &twice, &once).unwrap();
    println!("twice = once over {} environments: {}", rep.checked, rep.equal);
    assert!(rep.equal);

    // Exchanging two independent draws is a property of the monad, not of
    // the language: it holds for powerset and fails for state.
    let rl = typecheck(&prog, prog.term("rl").unwrap()).unwrap();
    for spec in ["powerset:full", "multiset:cap=3", "state:S=2"] {
        let m = parse_monad(spec).unwrap();
        let rep = equiv(&m, &prog, &lr, &rl).unwrap();
        match &rep.witness {
            None => println!("{spec:<16} lr = rl over {} environments", rep.checked),
            Some(w) => {
                println!("{spec:<16} lr != rl, first disagreement:");
                for (name, val) in &w.env {
                    println!("{:16}   {name} = {val}", "");
                }
                println!("{:16}   lr gives {}", "", w.left);
                println!("{:16}   rl gives {}", "", w.right);
            }
        }
    }
}
