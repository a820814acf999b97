use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;

use super::report::{Method, OrderRecord, SolveReport};
use super::{SeriesConfig, SumKernel};

/// A partial sum `Σ_{k=0}^{m} K^{∗k}` with its stopping diagnostics.
///
/// Powers are accumulated on the right, `K^{∗k} = K^{∗(k−1)} ∗ K`, so that
/// `R ∗ (1_∗ − K) = 1_∗` holds to rounding on the grid.
#[derive(Debug, Clone)]
pub struct NeumannResolvent<S> {
    pub resolvent: GeneralizedKernel<S>,
    /// Number of summed terms, `m + 1`.
    pub terms: usize,
    pub last_term_norm: f64,
    /// False when the last term still exceeded the tolerance.
    pub converged: bool,
}

fn neumann_series<S: Scalar>(
    k: &GeneralizedKernel<S>,
    n_terms: usize,
    mut small: impl FnMut(f64, &GeneralizedKernel<S>) -> bool,
) -> Result<NeumannResolvent<S>> {
    if !k.is_delta_free() {
        return Err(Error::NotDeltaFree(k.delta_coeff().to_string()));
    }
    let mut sum = GeneralizedKernel::identity(*k.grid());
    let mut term = sum.clone();
    let mut last = 1.0;
    let mut converged = small(0.0, &sum) && n_terms == 1;
    let mut terms = 1;
    while terms < n_terms.max(1) {
        term = term.star(k)?;
        sum = sum.add(&term)?;
        terms += 1;
        last = term.sup_norm();
        if small(last, &sum) {
            converged = true;
            break;
        }
    }
    Ok(NeumannResolvent { resolvent: sum, terms, last_term_norm: last, converged })
}

/// `Σ_{k=0}^{m} K^{∗k}`, stopping at `n_terms` terms or at the first term of
/// sup-norm `≤ tol`.
pub fn resolvent_neumann<S: Scalar>(
    k: &GeneralizedKernel<S>,
    n_terms: usize,
    tol: f64,
) -> Result<NeumannResolvent<S>> {
    neumann_series(k, n_terms, |norm, _| norm <= tol)
}

/// Neumann resolvent run until the term falls below the configured floor
/// relative to the running sum.
pub(crate) fn neumann_to_floor<S: Scalar>(k: &GeneralizedKernel<S>, cfg: &SeriesConfig) -> Result<NeumannResolvent<S>> {
    neumann_series(k, cfg.max_neumann_terms, |norm, sum| norm <= cfg.floor(sum.sup_norm()))
}

/// `f^{(n)} = Σ_{k=0}^{n} K^{∗k} ∗ g` for `n < n_orders`, with early stop at
/// the floor; the defect of order `n` is the norm of term `n+1`.
pub fn solve_neumann<S: Scalar>(
    sk: &SumKernel<S>,
    g: &GeneralizedKernel<S>,
    n_orders: usize,
    cfg: &SeriesConfig,
) -> Result<(GeneralizedKernel<S>, SolveReport)> {
    solve_neumann_with(&sk.total_kernel(), g, n_orders, cfg, |_, _| {})
}

/// [`solve_neumann`] on a materialized kernel, calling `visit(n, &f^{(n)})`
/// after every order.
pub(crate) fn solve_neumann_with<S: Scalar>(
    k: &GeneralizedKernel<S>,
    g: &GeneralizedKernel<S>,
    n_orders: usize,
    cfg: &SeriesConfig,
    mut visit: impl FnMut(usize, &GeneralizedKernel<S>),
) -> Result<(GeneralizedKernel<S>, SolveReport)> {
    if k.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let n_orders = n_orders.max(1);
    let mut term = g.clone();
    let mut f = g.clone();
    let mut records = Vec::new();
    let mut converged = false;
    visit(0, &f);
    for n in 0..n_orders {
        let term_norm = term.sup_norm();
        let next = k.star(&term)?;
        // f^{(n)} − g − K∗f^{(n)} = −K^{∗(n+1)}∗g
        let defect = next.sup_norm();
        records.push(OrderRecord { order: n, term_norm, defect: Some(defect), bound: 0.0 });
        if n > 0 && term_norm <= cfg.floor(f.sup_norm()) {
            converged = true;
            break;
        }
        if n + 1 == n_orders {
            break;
        }
        f = f.add(&next)?;
        term = next;
        visit(n + 1, &f);
    }
    let report = SolveReport::new(Method::Neumann, records, converged, k, None, &f, cfg);
    Ok((f, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::resolvent::Component;

    fn unit(n: usize) -> Grid {
        Grid::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn zero_kernel_gives_identity() {
        let g = unit(11);
        let r = resolvent_neumann(&GeneralizedKernel::<f64>::zero(g), 10, 0.0).unwrap();
        assert_eq!(r.resolvent, GeneralizedKernel::identity(g));
        assert!(r.converged);
    }

    #[test]
    fn truncation_is_flagged() {
        let g = unit(11);
        let r = resolvent_neumann(&GeneralizedKernel::<f64>::constant(g, 1.0), 2, 1e-12).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms, 2);
        assert_eq!(r.resolvent.smooth().get(10, 0), 1.0);
    }

    #[test]
    fn constant_three_theta() {
        // trapezoid resolvent of cΘ: ratio (1 + ch/2)/(1 − ch/2) per step
        let grid = unit(201);
        let c = 3.0;
        let h = grid.step();
        let expected = c * ((1.0 + c * h / 2.0) / (1.0 - c * h / 2.0)).powi(200);
        let r = resolvent_neumann(&GeneralizedKernel::constant(grid, c), 200, 1e-13).unwrap();
        assert!(r.converged);
        assert!((r.resolvent.smooth().get(200, 0) - expected).abs() < 1e-10 * expected);
        assert!((expected / (3.0 * 3f64.exp()) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn resolvent_defect_is_small() {
        let grid = unit(101);
        let k = GeneralizedKernel::from_fn(grid, 0.0, |tp, t| (tp - t).sin() + 0.5);
        let r = resolvent_neumann(&k, 200, 1e-14).unwrap().resolvent;
        let one = GeneralizedKernel::identity(grid);
        let right = one.add(&r.star(&k).unwrap()).unwrap();
        assert!(r.distance(&right).unwrap() < 1e-12);
        let left = one.add(&k.star(&r).unwrap()).unwrap();
        assert!(r.distance(&left).unwrap() < grid.step().powi(2));
    }

    #[test]
    fn solve_reports_orders() {
        let grid = unit(101);
        let sk = SumKernel::new(vec![Component::Numeric(GeneralizedKernel::constant(grid, 1.0))]).unwrap();
        let g = GeneralizedKernel::identity(grid);
        let (f, rep) = solve_neumann(&sk, &g, 100, &SeriesConfig::default()).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.orders[0].term_norm, 0.0);
        assert!((f.smooth().get(100, 0) - 1f64.exp()).abs() < 1e-4);
        for w in rep.orders.windows(2).skip(1) {
            assert!(w[1].defect.unwrap() <= w[0].defect.unwrap());
        }

        let (f1, rep) = solve_neumann(&sk, &g, 2, &SeriesConfig::default()).unwrap();
        assert_eq!(rep.orders.len(), 2);
        assert!(!rep.converged);
        assert_eq!(f1.smooth().get(100, 0), 1.0);
    }
}
