//! The driven two-level system as a Volterra equation for `ȧ`, checked
//! against RK4. Also prints the degenerate cases and the split discrepancy.
//!
//! ```bash
//! cargo run --release --example heun
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use sumkernel::resolvent::SeriesConfig;
use sumkernel::validation::{heun_compare, heun_volterra_solve, HeunProblem};

fn main() -> sumkernel::error::Result<()> {
    let cfg = SeriesConfig::default();
    let p = HeunProblem::desk();
    let cmp = heun_compare(&p, 60, &cfg, 20_000)?;
    println!("f1 = {}, nu = {}, omega = {}, n = {}", p.f1, p.nu, p.omega, p.grid.n_points());
    println!("sup |a_volterra - a_rk4|  = {:.3e}", cmp.sup_abs_error);
    println!("relative to max |a_rk4|   = {:.3e}", cmp.relative_error);
    println!("orders used               = {}", cmp.report.orders.len());
    if let Some(s) = cmp.split {
        println!("split discrepancy         = {:.3} (sup R = {:.3}, relative {:.3})", s.sup_distance, s.sup_r, s.relative);
    }
    for (t, a, r) in cmp.samples.iter().step_by(400) {
        println!("  t = {t:6.3}  a = {a:.6}  rk4 = {r:.6}");
    }

    // ν = 2ω without drive: a = cos t
    let res = HeunProblem::new(0.0, 2.0, 1.0, 2.0 * PI, 1601)?;
    let sol = heun_volterra_solve(&res, 60, &cfg)?;
    let err = res.grid.nodes().zip(sol.a.values()).map(|(t, a)| (a - Complex64::new(t.cos(), 0.0)).norm()).fold(0.0, f64::max);
    println!("f1 = 0, nu = 2: sup |a - cos t| = {err:.3e}");
    Ok(())
}
