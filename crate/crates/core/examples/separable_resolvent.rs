//! Closed-form resolvent of a separable kernel against the Neumann series.
//!
//! `K = ã(t') b̃(t) Θ` has `R̃ = ã(t') b̃(t) exp(∫_t^{t'} ã b̃)`.
//!
//! ```bash
//! cargo run --release --example separable_resolvent
//! ```

use sumkernel::grid::Grid;
use sumkernel::resolvent::{resolvent_neumann, resolvent_separable, SeparableComponent};
use sumkernel::star::OneVariableFunction;

fn main() -> sumkernel::error::Result<()> {
    let grid = Grid::new(0.0, 1.0, 801)?;
    let a = OneVariableFunction::from_fn(grid, |t| t);
    let b = OneVariableFunction::constant(grid, 1.0);
    let component = SeparableComponent::new(a, b)?;

    let closed = resolvent_separable(&component);
    let numeric = resolvent_neumann(&component.kernel(), 200, 1e-14)?;
    println!("Neumann terms        : {}", numeric.terms);
    println!("converged            : {}", numeric.converged);
    println!("sup |closed - series|: {:.3e}", closed.distance(&numeric.resolvent)?);

    // R̃(1, 0) = 1 · exp(1/2)
    let exact = 0.5f64.exp();
    println!("R(1, 0) closed = {:.12}, exact = {exact:.12}", closed.smooth().get(800, 0));
    Ok(())
}
