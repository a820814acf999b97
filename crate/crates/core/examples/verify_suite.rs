//! The invariant suite behind `sumkernel verify`, on the default constant
//! kernels and on a coarse grid where the Θ-power check fails.
//!
//! ```bash
//! cargo run --release --example verify_suite
//! ```

use sumkernel::grid::Grid;
use sumkernel::resolvent::SeriesConfig;
use sumkernel::star::GeneralizedKernel;
use sumkernel::validation::{default_verify_problem, verify_suite, ConstantKernelOracle, VerifyReport};

fn show(label: &str, r: &VerifyReport) {
    println!("{label}: n = {}, tau_q = {:.3e}, passed = {}", r.n, r.tau_q, r.passed);
    for c in &r.checks {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"));
        println!("  {:24} {:5} measured {:>10} threshold {:>10}", c.name, format!("{:?}", c.status), fmt(c.measured), fmt(c.threshold));
    }
}

fn main() -> sumkernel::error::Result<()> {
    let cfg = SeriesConfig::default();
    let (sk, g) = default_verify_problem();
    show("default", &verify_suite(&sk, &g, &cfg)?);

    let coarse = Grid::new(0.0, 1.0, 21)?;
    let sk = ConstantKernelOracle::new(1.0, 2.0).sum_kernel(coarse)?;
    show("coarse", &verify_suite(&sk, &GeneralizedKernel::identity(coarse), &cfg)?);
    Ok(())
}
