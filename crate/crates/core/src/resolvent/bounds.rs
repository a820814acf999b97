use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;

use super::neumann::solve_neumann_with;
use super::report::{remainder_bound, Constants, SolveReport};
use super::{Resummation, SeriesConfig, SumKernel};

/// Empirical errors and `n!` bounds of the partial sum `f^{(order)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderBound {
    pub order: usize,
    pub neumann_error: f64,
    pub resummed_error: f64,
    pub bound_neumann: f64,
    pub bound_resummed: f64,
}

/// `sup|R̃_{K_i}| ≤ C_{K_i} e^{C_{K_i}|I|} (1 + ε_q)` for one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventBoundCheck {
    pub component: usize,
    pub resolvent_sup: f64,
    pub bound: f64,
    /// `resolvent_sup / bound`; 1 means the bound is saturated.
    pub ratio: f64,
    pub holds: bool,
}

impl ResolventBoundCheck {
    pub fn new(component: usize, kernel_sup: f64, resolvent_sup: f64, length: f64, eps_q: f64) -> Self {
        let bound = kernel_sup * (kernel_sup * length).exp();
        let ratio = if bound > 0.0 { resolvent_sup / bound } else if resolvent_sup == 0.0 { 1.0 } else { f64::INFINITY };
        Self { component, resolvent_sup, bound, ratio, holds: resolvent_sup <= bound * (1.0 + eps_q) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceAnalysis {
    pub constants: Constants,
    pub rows: Vec<OrderBound>,
    pub resolvent_bounds: Vec<ResolventBoundCheck>,
    /// `‖f_neumann − f_resummed‖` between the two converged limits.
    pub limit_discrepancy: f64,
    pub neumann: SolveReport,
    pub resummed: SolveReport,
}

/// Runs both series to the floor and compares the first `n_orders` partial
/// sums of each against its own converged limit.
pub fn convergence_bounds<S: Scalar>(
    sk: &SumKernel<S>,
    g: &GeneralizedKernel<S>,
    n_orders: usize,
    cfg: &SeriesConfig,
    order: Option<&[usize]>,
) -> Result<ConvergenceAnalysis> {
    let cfg = SeriesConfig { track_defect: false, ..*cfg };
    let n_orders = n_orders.max(1);
    let res = Resummation::new(sk, order, &cfg)?;

    let mut partial = Vec::with_capacity(n_orders);
    let (f_res, resummed) = res.solve_with(g, usize::MAX, &cfg, |n, f| {
        if n < n_orders {
            partial.push(f.clone());
        }
    })?;
    let resummed_errors = errors_against(&partial, &f_res, n_orders)?;

    partial.clear();
    let (f_neu, neumann) = solve_neumann_with(res.kernel(), g, usize::MAX, &cfg, |n, f| {
        if n < n_orders {
            partial.push(f.clone());
        }
    })?;
    let neumann_errors = errors_against(&partial, &f_neu, n_orders)?;

    let c_t = res.t().sup_norm();
    let constants = Constants {
        c_k: res.kernel().sup_norm(),
        c_t: Some(c_t),
        c_f: f_res.sup_norm(),
        c_f_estimated: true,
        c_delta: f_res.delta_coeff().modulus(),
        interval_length: sk.grid().length(),
    };
    let bound = |rate: f64, n: usize| remainder_bound(constants.c_f, constants.c_delta, rate, constants.interval_length, n);
    let rows = (0..n_orders)
        .map(|k| OrderBound {
            order: k,
            neumann_error: neumann_errors[k],
            resummed_error: resummed_errors[k],
            bound_neumann: bound(constants.c_k, k + 1),
            bound_resummed: bound(c_t, k + 1),
        })
        .collect();
    let eps_q = 10.0 * sk.grid().step().powi(2);
    let resolvent_bounds = sk
        .components()
        .iter()
        .zip(res.resolvents())
        .enumerate()
        .map(|(i, (c, r))| ResolventBoundCheck::new(i, c.sup_norm(), r.resolvent.sup_norm(), constants.interval_length, eps_q))
        .collect();
    Ok(ConvergenceAnalysis { constants, rows, resolvent_bounds, limit_discrepancy: f_neu.distance(&f_res)?, neumann, resummed })
}

/// Partial sums past the stopping order equal the limit.
fn errors_against<S: Scalar>(partial: &[GeneralizedKernel<S>], limit: &GeneralizedKernel<S>, n: usize) -> Result<Vec<f64>> {
    (0..n).map(|k| partial.get(k).map_or(Ok(0.0), |p| limit.distance(p))).collect()
}

impl ConvergenceAnalysis {
    /// `order,neumann_error,resummed_error,bound_neumann,bound_resummed`
    /// preceded by a `#` constants line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let c = &self.constants;
        writeln!(
            w,
            "# c_k={:.16e},c_t={:.16e},c_f={:.16e},c_f_estimated={},c_delta={:.16e},interval_length={:.16e}",
            c.c_k,
            c.c_t.unwrap_or(f64::NAN),
            c.c_f,
            c.c_f_estimated,
            c.c_delta,
            c.interval_length
        )?;
        writeln!(w, "order,neumann_error,resummed_error,bound_neumann,bound_resummed")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.order, r.neumann_error, r.resummed_error, r.bound_neumann, r.bound_resummed
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::resolvent::{Component, SeparableComponent};
    use crate::star::OneVariableFunction;

    fn constant(grid: Grid, c: f64) -> Component<f64> {
        Component::Separable(
            SeparableComponent::new(OneVariableFunction::constant(grid, c), OneVariableFunction::constant(grid, 1.0))
                .unwrap(),
        )
    }

    #[test]
    fn zero_kernel_has_zero_bounds() {
        let grid = Grid::new(0.0, 1.0, 21).unwrap();
        let sk = SumKernel::new(vec![Component::Numeric(GeneralizedKernel::<f64>::zero(grid))]).unwrap();
        let g = GeneralizedKernel::identity(grid);
        let a = convergence_bounds(&sk, &g, 4, &SeriesConfig::default(), None).unwrap();
        for r in &a.rows {
            assert_eq!((r.neumann_error, r.resummed_error, r.bound_neumann, r.bound_resummed), (0.0, 0.0, 0.0, 0.0));
        }
        assert!(a.resolvent_bounds.iter().all(|c| c.holds));
    }

    #[test]
    fn bounds_dominate_errors() {
        let grid = Grid::new(0.0, 1.0, 201).unwrap();
        let sk = SumKernel::new(vec![constant(grid, 1.0), constant(grid, 0.05)]).unwrap();
        let g = GeneralizedKernel::identity(grid);
        let a = convergence_bounds(&sk, &g, 7, &SeriesConfig::default(), None).unwrap();
        let c_t = a.constants.c_t.unwrap();
        assert!(c_t < a.constants.c_k);
        for r in &a.rows {
            assert!(r.resummed_error <= r.neumann_error);
            assert!(r.neumann_error <= r.bound_neumann);
            assert!(r.resummed_error <= r.bound_resummed);
        }
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 9);
    }

    #[test]
    fn resolvent_bound_saturation_ratio() {
        let c = ResolventBoundCheck::new(0, 2.0, 2.0 * 2f64.exp(), 1.0, 0.0);
        assert!(c.holds);
        assert!((c.ratio - 1.0).abs() < 1e-15);
        assert!(!ResolventBoundCheck::new(0, 1.0, 3.0, 1.0, 1e-6).holds);
    }
}
