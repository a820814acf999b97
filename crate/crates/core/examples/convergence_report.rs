//! Neumann against re-summed partial sums for `a = 1, b = 0.05`, where the
//! re-summation kernel is much smaller than the full kernel.
//!
//! ```bash
//! cargo run --release --example convergence_report
//! ```

use sumkernel::grid::Grid;
use sumkernel::resolvent::{convergence_bounds, SeriesConfig};
use sumkernel::star::GeneralizedKernel;
use sumkernel::validation::ConstantKernelOracle;

fn main() -> sumkernel::error::Result<()> {
    let grid = Grid::new(0.0, 1.0, 801)?;
    let sk = ConstantKernelOracle::new(1.0, 0.05).sum_kernel(grid)?;
    let analysis = convergence_bounds(&sk, &GeneralizedKernel::identity(grid), 7, &SeriesConfig::default(), None)?;
    let c = &analysis.constants;
    println!("C_K = {:.4}, C_T = {:.4}, C_f = {:.4}", c.c_k, c.c_t.unwrap_or(f64::NAN), c.c_f);
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "order", "neumann", "resummed", "bound_N", "bound_R");
    for r in &analysis.rows {
        println!(
            "{:>5} {:12.3e} {:12.3e} {:12.3e} {:12.3e}",
            r.order, r.neumann_error, r.resummed_error, r.bound_neumann, r.bound_resummed
        );
    }
    for l in &analysis.resolvent_bounds {
        println!("resolvent bound, component {}: ratio {:.12} holds {}", l.component, l.ratio, l.holds);
    }
    println!("|f_neumann - f_resummed| = {:.3e}", analysis.limit_discrepancy);
    analysis.write_csv(std::io::stdout().lock()).expect("stdout");
    Ok(())
}
