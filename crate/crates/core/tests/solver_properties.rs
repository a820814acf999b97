use proptest::prelude::*;
use sumkernel::grid::Grid;
use sumkernel::resolvent::{
    build_t, build_t_alternative, solve_neumann, solve_resummed, Component, Resummation, SeparableComponent,
    SeriesConfig, SumKernel,
};
use sumkernel::star::{GeneralizedKernel, OneVariableFunction};

fn grid(n: usize) -> Grid {
    Grid::new(0.0, 1.0, n).unwrap()
}

fn separable(g: Grid, c: f64, w: f64) -> Component<f64> {
    let a = OneVariableFunction::from_fn(g, |t| c * (w * t).cos());
    let b = OneVariableFunction::constant(g, 1.0);
    Component::Separable(SeparableComponent::new(a, b).unwrap())
}

fn numeric(g: Grid, c: f64, w: f64) -> Component<f64> {
    Component::Numeric(GeneralizedKernel::from_fn(g, 0.0, |tp, t| c * (w * (tp - t)).sin() + 0.5 * c))
}

fn mixed() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-1.5f64..1.5, 0.0f64..3.0, -1.5f64..1.5, 0.0f64..3.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_series_solve_the_same_equation((c1, w1, c2, w2) in mixed()) {
        let g = grid(61);
        let sk = SumKernel::new(vec![separable(g, c1, w1), numeric(g, c2, w2)]).unwrap();
        let rhs = GeneralizedKernel::identity(g);
        let cfg = SeriesConfig::default();
        let (f_r, rep_r) = solve_resummed(&sk, &rhs, 200, &cfg).unwrap();
        let (f_n, rep_n) = solve_neumann(&sk, &rhs, 200, &cfg).unwrap();
        prop_assert!(rep_r.converged && rep_n.converged);
        prop_assert!(rep_r.orders.len() <= rep_n.orders.len());
        let scale = 1.0 + f_n.sup_norm();
        prop_assert!(f_r.distance(&f_n).unwrap() <= 20.0 * g.step().powi(2) * scale);
    }

    #[test]
    fn order_and_alternative_t_agree((c1, w1, c2, w2) in mixed(), c3 in -1.0f64..1.0) {
        let g = grid(41);
        let sk = SumKernel::new(vec![numeric(g, c1, w1), numeric(g, c2, w2), numeric(g, c3, 1.0)]).unwrap();
        let cfg = SeriesConfig::default();
        let res = Resummation::new(&sk, None, &cfg).unwrap();
        let rhs = GeneralizedKernel::identity(g);
        let (f0, _) = res.solve(&rhs, usize::MAX, &cfg).unwrap();
        for order in [[2, 1, 0], [1, 0, 2]] {
            let (f1, _) = res.reordered(&order, &cfg).unwrap().solve(&rhs, usize::MAX, &cfg).unwrap();
            prop_assert!(f0.distance(&f1).unwrap() <= 10.0 * g.step().powi(2) * (1.0 + f0.sup_norm()));
        }
        let t = build_t(&sk, None).unwrap();
        let t_alt = build_t_alternative(&sk, None).unwrap();
        prop_assert!(t.distance(&t_alt).unwrap() <= 10.0 * g.step().powi(2) * (1.0 + t.sup_norm()));
    }
}

#[test]
fn zero_kernel_solution_is_the_inhomogeneity() {
    let g = grid(21);
    let sk = SumKernel::new(vec![Component::Numeric(GeneralizedKernel::zero(g)), separable(g, 0.0, 1.0)]).unwrap();
    let rhs = GeneralizedKernel::from_fn(g, 1.0, |tp, t| tp - 2.0 * t);
    let (f, report) = solve_resummed(&sk, &rhs, 5, &SeriesConfig::default()).unwrap();
    assert_eq!(f, rhs);
    assert!(report.converged);
}

#[test]
fn bad_product_order_is_rejected() {
    let g = grid(11);
    let sk = SumKernel::new(vec![separable(g, 1.0, 0.0), separable(g, 2.0, 0.0)]).unwrap();
    assert!(build_t(&sk, Some(&[0, 0])).is_err());
    assert!(build_t(&sk, Some(&[0])).is_err());
    assert!(build_t(&sk, Some(&[1, 0])).is_ok());
}
