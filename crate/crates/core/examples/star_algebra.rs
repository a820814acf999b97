//! The ∗-product on a grid: identity, powers of Θ and the associativity defect.
//!
//! ```bash
//! cargo run --release --example star_algebra
//! ```

use sumkernel::grid::Grid;
use sumkernel::star::GeneralizedKernel;
use sumkernel::validation::theta_power_deviation;

fn main() -> sumkernel::error::Result<()> {
    let grid = Grid::new(0.0, 1.0, 401)?;
    let theta = GeneralizedKernel::constant(grid, 1.0);
    let one = GeneralizedKernel::identity(grid);

    // 1_∗ short-circuits, so these are bit-exact
    assert_eq!(one.star(&theta)?, theta);
    assert_eq!(theta.star(&one)?, theta);

    // Θ^{∗k}(t', t) = (t' − t)^{k−1}/(k−1)!
    let cube = theta.star_power(3);
    println!("Θ^3(1, 0)         = {:.10} (exact 0.5)", cube.smooth().get(400, 0));
    for n in [101, 201, 401, 801] {
        let g = Grid::new(0.0, 1.0, n)?;
        println!("n = {n:4}: max_k<=6 |Θ^k - exact| = {:.3e}", theta_power_deviation(g, 6));
    }

    // two smooth kernels: associativity holds to O(h²) only
    let f = GeneralizedKernel::from_fn(grid, 0.0, |tp, t| (tp - t).sin() + 1.0);
    let g = GeneralizedKernel::from_fn(grid, 0.0, |tp, t| (-(tp * t)).exp());
    let left = f.star(&g)?.star(&theta)?;
    let right = f.star(&g.star(&theta)?)?;
    println!("|(f*g)*Θ - f*(g*Θ)| = {:.3e}, h² = {:.3e}", left.distance(&right)?, grid.step().powi(2));

    // diagonal of a delta-free product vanishes
    let diag = (0..grid.n_points()).map(|i| f.star(&g).unwrap().smooth().get(i, i)).fold(0.0f64, |m, v| m.max(v.abs()));
    println!("max |(f*g)(t, t)| = {diag:e}");

    // 1 ∗ F ∗ 1 by nested sweeps
    let sandwich = one.sandwich_ones();
    println!("(1*1_∗*1)(1, 0)   = {:.10} (exact 1)", sandwich.smooth().get(400, 0));
    Ok(())
}
