//! The driven two-level system as a Volterra equation for `ȧ`.
//!
//! Eliminating `b` (with `b(0) = 0`) gives `ȧ = 1_∗ + K ∗ ȧ` with
//! `K = −(i/2ω) f(t') Θ − (ν²/4ω²) · 1∗F∗1`, where
//! `F = (1_∗ − (i/2ω) f)^{∗−1} = δ + (i/2ω) f(t') e^{(i f₁/2ω²)(cos ωt − cos ωt')} Θ`
//! propagates `b`. Then `a(t) = ∫_0^t ȧ(τ, 0) dτ` with `a(0) = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::resolvent::{Component, Resummation, SeparableComponent, SeriesConfig, SolveReport, SumKernel};
use crate::star::{GeneralizedKernel, OneVariableFunction, TriangularField};

use super::ode::{heun_ode_oracle, TwoLevelSystem};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunProblem {
    pub f1: f64,
    pub nu: f64,
    pub omega: f64,
    pub horizon: f64,
    pub grid: Grid,
}

/// How the `ν²` component is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeunSplit {
    /// `1∗F∗1` sampled by nested quadrature, one numeric component.
    Numeric,
    /// `s(t') − s(t)` with `s(t) := (1∗F∗1)(t, 0)`, two separable components.
    Literal,
}

impl HeunProblem {
    pub fn new(f1: f64, nu: f64, omega: f64, horizon: f64, n_points: usize) -> Result<Self> {
        if omega == 0.0 || !omega.is_finite() {
            return Err(Error::Invalid(format!("omega must be finite and nonzero, got {omega}")));
        }
        if horizon <= 0.0 || !horizon.is_finite() {
            return Err(Error::Invalid(format!("horizon must be positive, got {horizon}")));
        }
        if !f1.is_finite() || !nu.is_finite() {
            return Err(Error::Invalid("f1 and nu must be finite".into()));
        }
        Ok(Self { f1, nu, omega, horizon, grid: Grid::new(0.0, horizon, n_points)? })
    }

    /// `f₁ = 0.5, ν = 0.5, ω = 1` on `[0, 2π]` with 1601 nodes.
    pub fn desk() -> Self {
        Self::new(0.5, 0.5, 1.0, 2.0 * std::f64::consts::PI, 1601).expect("valid defaults")
    }

    pub fn system(&self) -> TwoLevelSystem {
        TwoLevelSystem { f1: self.f1, nu: self.nu, omega: self.omega }
    }

    fn drive(&self) -> OneVariableFunction<C> {
        let s = self.system();
        OneVariableFunction::from_fn(self.grid, |t| C::new(s.drive(t), 0.0))
    }

    /// `ã = (i/2ω) f(t')`, `b̃ ≡ 1`: the component whose resolvent is `F`.
    pub fn generating_component(&self) -> SeparableComponent<C> {
        let c = I / (2.0 * self.omega);
        let a = OneVariableFunction::from_samples(self.grid, self.drive().values().iter().map(|f| c * f).collect())
            .expect("grid-sized");
        SeparableComponent::new(a, OneVariableFunction::constant(self.grid, C::new(1.0, 0.0))).expect("same grid")
    }

    fn coupling(&self) -> C {
        C::new(-self.nu * self.nu / (4.0 * self.omega * self.omega), 0.0)
    }
}

/// `F` from its closed form.
pub fn heun_build_f(p: &HeunProblem) -> GeneralizedKernel<C> {
    let (f1, w) = (p.f1, p.omega);
    let phase = I * (f1 / (2.0 * w * w));
    GeneralizedKernel::new(
        C::new(1.0, 0.0),
        TriangularField::from_fn(p.grid, |i, j| {
            let (tp, t) = (p.grid.node(i), p.grid.node(j));
            I / (2.0 * w) * f1 * (w * tp).sin() * (phase * ((w * t).cos() - (w * tp).cos())).exp()
        }),
    )
}

/// `1 ∗ F ∗ 1`.
pub fn heun_sandwich(p: &HeunProblem) -> GeneralizedKernel<C> {
    heun_build_f(p).sandwich_ones()
}

/// The sum kernel for `ȧ`; the `ν²` component is omitted when `ν = 0`.
pub fn heun_build_kernel(p: &HeunProblem) -> SumKernel<C> {
    heun_build_kernel_with(p, HeunSplit::Numeric)
}

pub fn heun_build_kernel_with(p: &HeunProblem, split: HeunSplit) -> SumKernel<C> {
    let grid = p.grid;
    let first = p.generating_component();
    let a1 = OneVariableFunction::from_samples(grid, first.a().values().iter().map(|v| -v).collect()).expect("grid-sized");
    let one = OneVariableFunction::constant(grid, C::new(1.0, 0.0));
    let mut comps = vec![Component::Separable(SeparableComponent::new(a1, one.clone()).expect("same grid"))];
    if p.nu != 0.0 {
        let r = heun_sandwich(p);
        let c = p.coupling();
        match split {
            HeunSplit::Numeric => comps.push(Component::Numeric(r.scale(c))),
            HeunSplit::Literal => {
                let s = split_profile(&r);
                let cs = OneVariableFunction::from_samples(grid, s.values().iter().map(|v| c * v).collect())
                    .expect("grid-sized");
                let minus_c = OneVariableFunction::constant(grid, -c);
                comps.push(Component::Separable(SeparableComponent::new(cs, one).expect("same grid")));
                comps.push(Component::Separable(SeparableComponent::new(minus_c, s).expect("same grid")));
            }
        }
    }
    SumKernel::new(comps).expect("components share the grid")
}

/// `s(t) = R(t, t_min)`, so that `R(t, t_min) = s(t) − s(t_min)`.
fn split_profile(r: &GeneralizedKernel<C>) -> OneVariableFunction<C> {
    OneVariableFunction::from_samples(*r.grid(), r.smooth().column(0)).expect("grid-sized")
}

/// Distance between `1∗F∗1` and `(s(t') − s(t))Θ` with `s(t) := (1∗F∗1)(t, t_min)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitDiscrepancy {
    pub sup_distance: f64,
    pub sup_r: f64,
    /// `sup_distance / sup_r`.
    pub relative: f64,
}

pub fn heun_split_discrepancy(p: &HeunProblem) -> SplitDiscrepancy {
    let r = heun_sandwich(p);
    let s = split_profile(&r);
    let split = TriangularField::from_fn(p.grid, |i, j| s.get(i) - s.get(j));
    let sup_distance = r.smooth().distance(&split).expect("same grid");
    let sup_r = r.sup_norm();
    SplitDiscrepancy { sup_distance, sup_r, relative: if sup_r > 0.0 { sup_distance / sup_r } else { 0.0 } }
}

#[derive(Debug, Clone)]
pub struct HeunVolterraSolution {
    /// `a(t)` on the grid.
    pub a: OneVariableFunction<C>,
    /// `ȧ(t', t)`, the resolvent of the Heun kernel.
    pub a_dot: GeneralizedKernel<C>,
    pub report: SolveReport,
}

/// Solves `ȧ = 1_∗ + K ∗ ȧ` by the re-summed series and integrates along `t = t_min`.
pub fn heun_volterra_solve(p: &HeunProblem, n_orders: usize, cfg: &SeriesConfig) -> Result<HeunVolterraSolution> {
    heun_volterra_solve_with(p, HeunSplit::Numeric, n_orders, cfg)
}

pub fn heun_volterra_solve_with(
    p: &HeunProblem,
    split: HeunSplit,
    n_orders: usize,
    cfg: &SeriesConfig,
) -> Result<HeunVolterraSolution> {
    let sk = heun_build_kernel_with(p, split);
    let res = Resummation::new(&sk, None, cfg)?;
    let (a_dot, report) = res.solve(&GeneralizedKernel::identity(p.grid), n_orders, cfg)?;
    let a = a_dot.integrate_left_edge(0)?;
    Ok(HeunVolterraSolution { a, a_dot, report })
}

/// Volterra solution against the RK4 oracle on the grid nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeunComparison {
    pub problem: HeunProblem,
    pub rk4_steps: usize,
    pub sup_abs_error: f64,
    pub max_abs_rk4: f64,
    /// `sup_abs_error / max_abs_rk4`.
    pub relative_error: f64,
    pub report: SolveReport,
    pub split: Option<SplitDiscrepancy>,
    /// `(t, a_volterra, a_rk4)` per node.
    #[serde(skip)]
    pub samples: Vec<(f64, C, C)>,
}

pub fn heun_compare(p: &HeunProblem, n_orders: usize, cfg: &SeriesConfig, rk4_steps: usize) -> Result<HeunComparison> {
    let sol = heun_volterra_solve(p, n_orders, cfg)?;
    let ode = heun_ode_oracle(p.system(), p.horizon, C::new(1.0, 0.0), C::new(0.0, 0.0), rk4_steps);
    let reference = ode.a_on(&p.grid);
    let samples: Vec<(f64, C, C)> =
        p.grid.nodes().zip(sol.a.values()).zip(&reference).map(|((t, &a), &r)| (t, a, r)).collect();
    let sup_abs_error = samples.iter().map(|(_, a, r)| (a - r).norm()).fold(0.0, f64::max);
    let max_abs_rk4 = reference.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let split = (p.nu != 0.0).then(|| heun_split_discrepancy(p));
    Ok(HeunComparison {
        problem: *p,
        rk4_steps,
        sup_abs_error,
        max_abs_rk4,
        relative_error: sup_abs_error / max_abs_rk4,
        report: sol.report,
        split,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn f_diagonal_and_zero_drive() {
        let p = HeunProblem::new(1.0, 0.5, 1.0, PI, 101).unwrap();
        let f = heun_build_f(&p);
        for i in 0..101 {
            let t = p.grid.node(i);
            let expected = I / 2.0 * t.sin();
            assert!((f.smooth().get(i, i) - expected).norm() < 1e-15);
        }
        assert!(f.smooth().get(100, 0).norm() < 1e-15, "sin(π) = 0");

        let p0 = HeunProblem::new(0.0, 0.5, 1.0, PI, 11).unwrap();
        assert_eq!(heun_build_f(&p0), GeneralizedKernel::identity(p0.grid));
    }

    #[test]
    fn f_matches_separable_resolvent() {
        let p = HeunProblem::new(0.5, 0.5, 1.3, 2.0 * PI, 801).unwrap();
        let closed = heun_build_f(&p);
        let algebra = p.generating_component().resolvent();
        assert!(closed.distance(&algebra).unwrap() < p.grid.step().powi(2));
    }

    #[test]
    fn kernel_shapes() {
        let p = HeunProblem::new(0.5, 0.0, 1.0, 1.0, 21).unwrap();
        assert_eq!(heun_build_kernel(&p).len(), 1);
        let p = HeunProblem::new(0.0, 2.0, 1.0, 1.0, 21).unwrap();
        let k = heun_build_kernel(&p).total_kernel();
        // −(ν²/4ω²) (t' − t) with ν = 2ω
        let expected = GeneralizedKernel::from_fn(p.grid, C::new(0.0, 0.0), |tp, t| C::new(-(tp - t), 0.0));
        assert!(k.distance(&expected).unwrap() < 1e-14);
        assert_eq!(heun_build_kernel_with(&p, HeunSplit::Literal).len(), 3);
    }

    #[test]
    fn split_is_exact_without_drive() {
        let p = HeunProblem::new(0.0, 0.5, 1.0, 1.0, 41).unwrap();
        assert!(heun_split_discrepancy(&p).sup_distance < 1e-14);
        let p = HeunProblem::new(0.5, 0.5, 1.0, 2.0 * PI, 201).unwrap();
        assert!(heun_split_discrepancy(&p).relative > 1e-3);
    }

    #[test]
    fn free_problem_gives_unit_amplitude() {
        let p = HeunProblem::new(0.0, 0.0, 1.0, 1.0, 21).unwrap();
        let s = heun_volterra_solve(&p, 4, &SeriesConfig::default()).unwrap();
        assert!(s.a.values().iter().all(|a| (a - C::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn coarse_agreement_with_rk4() {
        let p = HeunProblem::new(0.5, 0.5, 1.0, 2.0 * PI, 201).unwrap();
        let c = heun_compare(&p, 60, &SeriesConfig::default(), 4000).unwrap();
        assert!(c.report.converged);
        assert!(c.relative_error < 1e-2, "{}", c.relative_error);

        let p = HeunProblem::new(0.0, 2.0, 1.0, 2.0 * PI, 201).unwrap();
        let s = heun_volterra_solve(&p, 60, &SeriesConfig::default()).unwrap();
        for (t, a) in p.grid.nodes().zip(s.a.values()) {
            assert!((a - C::new(t.cos(), 0.0)).norm() < 1e-2);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(HeunProblem::new(0.5, 0.5, 0.0, 1.0, 11).is_err());
        assert!(HeunProblem::new(0.5, 0.5, 1.0, -1.0, 11).is_err());
    }
}
