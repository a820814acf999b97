//! Kernel expressions and problem files.
//!
//! ```bash
//! cargo run --release --example kernel_dsl
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use sumkernel::dsl::{parse_expr, Bindings, Field, ProblemSpec};
use sumkernel::resolvent::Resummation;

const PROBLEM: &str = r#"{
    "grid": {"t_min": 0, "t_max": 1, "n": 201},
    "field": "complex",
    "g": {"delta": 1, "smooth": "0"},
    "components": [
        {"separable": {"a": "-(i/2)*f1*sin(w*tp)", "b": "1"}},
        {"numeric": {"k": "0.3*exp(-(tp - t))"}}
    ],
    "solver": {"orders": 30, "method": "resummed"},
    "params": {"f1": 1, "w": 1}
}"#;

fn main() -> sumkernel::error::Result<()> {
    for src in ["2+3*4^2", "(2+3)*4", "-2^2"] {
        let e = parse_expr(src, Field::Real).expect("valid");
        println!("{src:10} -> {e:24} = {}", e.eval::<f64>(&Bindings::default()).expect("closed"));
    }

    for bad in ["2*", "1 + foo(t)", "(1 + 2"] {
        println!("{bad:10} -> {}", parse_expr(bad, Field::Real).unwrap_err());
    }

    let params = BTreeMap::from([("w".to_string(), 2.0)]);
    let e = parse_expr("exp(i*w*(tp - t))", Field::Complex).expect("valid");
    let z: Complex64 = e.eval(&Bindings::new(&params).at(1.0, 0.25)).expect("bound");
    println!("exp(i w (tp - t)) at (1, 0.25) = {z:.6}");
    println!("1/(t - 1) at t = 1 -> {}", parse_expr("1/(t - 1)", Field::Real).unwrap().eval::<f64>(&Bindings::default().with_t(1.0)).unwrap_err());

    let spec = ProblemSpec::from_json(PROBLEM)?;
    let p = spec.build::<Complex64>()?;
    let res = Resummation::new(&p.sum_kernel, None, &spec.solver.config())?;
    let (f, report) = res.solve(&p.g, spec.solver.orders, &spec.solver.config())?;
    println!("solved in {} orders, converged {}, f(1, 0) = {:.8}", report.orders.len(), report.converged, f.smooth().get(200, 0));

    let broken = PROBLEM.replace(r#""params": {"f1": 1, "w": 1}"#, r#""params": {"f1": 1}"#);
    println!("without w: {}", ProblemSpec::from_json(&broken).unwrap_err());
    Ok(())
}
