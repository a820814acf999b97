//! The constant kernel `(a+b)Θ` split as `aΘ + bΘ`, solved by the re-summed
//! series and compared with the closed forms at `(t', t) = (1, 0)`.
//!
//! ```bash
//! cargo run --release --example constant_kernel
//! ```

use sumkernel::cli::constant_example;
use sumkernel::grid::Grid;

fn main() -> sumkernel::error::Result<()> {
    let (a, b) = (1.0, 2.0);
    let ex = constant_example(Grid::new(0.0, 1.0, 1601)?, a, b)?;
    let last = ex.rows.last().expect("non-empty grid");
    println!("a = {a}, b = {b}, n = {}", ex.grid.n);
    println!("{:>10} {:>18} {:>18} {:>10}", "", "solver", "closed form", "rel dev");
    for (name, s, o, dev) in [
        ("order 0", last[1], last[2], ex.rel_dev_order0),
        ("order 1", last[3], last[4], ex.rel_dev_order1),
        ("converged", last[5], last[6], ex.rel_dev_converged),
        ("T", last[7], last[8], ex.rel_dev_t),
    ] {
        println!("{name:>10} {s:18.10} {o:18.10} {dev:10.2e}");
    }
    println!("orders used: {}, C_T = {:.4}, C_K = {:.4}", ex.report.orders.len(), ex.report.constants.c_t.unwrap_or(f64::NAN), ex.report.constants.c_k);
    Ok(())
}
