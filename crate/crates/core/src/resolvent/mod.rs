//! Resolvents of sum kernels.
//!
//! A [`SumKernel`] `K = Σ_i K_i` is solved through the resolvents `R_{K_i}` of
//! its components: separable components have a closed form, numeric ones are
//! summed as a Neumann series. The re-summed series
//! `f = Σ_k T^{∗k} ∗ (⊛_i R_{K_i}) ∗ g` with `T = 1_∗ − (⊛_i R_{K_i}) ∗ (1_∗ − K)`
//! lives in [`resummed`]; sup-norm constants and the `n!` bounds in [`bounds`].

pub mod bounds;
pub mod neumann;
pub mod report;
pub mod resummed;
pub mod separable;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;

pub use bounds::{convergence_bounds, ConvergenceAnalysis, ResolventBoundCheck, OrderBound};
pub use neumann::{resolvent_neumann, solve_neumann, NeumannResolvent};
pub use report::{Constants, Method, OrderRecord, SolveReport, Timings};
pub use resummed::{build_t, build_t_alternative, solve_resummed, truncation_error_check, Resummation};
pub use separable::{resolvent_separable, SeparableComponent};

/// Stopping rule and limits shared by every series in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Absolute floor on the sup-norm of an order term.
    pub abs_tol: f64,
    /// Floor relative to the sup-norm of the running sum.
    pub rel_tol: f64,
    /// Hard cap on Neumann terms for numeric component resolvents.
    pub max_neumann_terms: usize,
    /// Largest tolerated modulus of T's delta coefficient.
    pub delta_floor: f64,
    /// Record `‖f − g − K∗f‖` after every order (one extra product per order).
    pub track_defect: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_neumann_terms: 400, delta_floor: 1e-12, track_defect: true }
    }
}

impl SeriesConfig {
    /// `max(abs_tol, rel_tol · scale)`.
    pub fn floor(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale)
    }
}

/// One summand of a [`SumKernel`].
#[derive(Debug, Clone)]
pub enum Component<S> {
    /// `ã(t') b̃(t) Θ(t'−t)` with a closed-form resolvent.
    Separable(SeparableComponent<S>),
    /// A delta-free kernel known only through its samples.
    Numeric(GeneralizedKernel<S>),
}

impl<S: Scalar> Component<S> {
    pub fn grid(&self) -> &Grid {
        match self {
            Component::Separable(c) => c.grid(),
            Component::Numeric(k) => k.grid(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Component::Separable(_) => "separable",
            Component::Numeric(_) => "numeric",
        }
    }

    pub fn kernel(&self) -> GeneralizedKernel<S> {
        match self {
            Component::Separable(c) => c.kernel(),
            Component::Numeric(k) => k.clone(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            Component::Separable(c) => c.kernel().sup_norm(),
            Component::Numeric(k) => k.sup_norm(),
        }
    }

    /// `R_{K_i}`: closed form for separable components, Neumann to the
    /// configured floor otherwise.
    pub fn resolvent(&self, cfg: &SeriesConfig) -> Result<ComponentResolvent<S>> {
        match self {
            Component::Separable(c) => {
                Ok(ComponentResolvent { resolvent: c.resolvent(), method: ResolventMethod::ClosedForm })
            }
            Component::Numeric(k) => {
                let n = neumann::neumann_to_floor(k, cfg)?;
                Ok(ComponentResolvent {
                    method: ResolventMethod::Neumann {
                        terms: n.terms,
                        converged: n.converged,
                        last_term_norm: n.last_term_norm,
                    },
                    resolvent: n.resolvent,
                })
            }
        }
    }
}

/// How a component resolvent was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ResolventMethod {
    ClosedForm,
    Neumann { terms: usize, converged: bool, last_term_norm: f64 },
}

#[derive(Debug, Clone)]
pub struct ComponentResolvent<S> {
    pub resolvent: GeneralizedKernel<S>,
    pub method: ResolventMethod,
}

/// `R_{K_i}` for one component; see [`Component::resolvent`].
pub fn component_resolvent<S: Scalar>(c: &Component<S>, cfg: &SeriesConfig) -> Result<ComponentResolvent<S>> {
    c.resolvent(cfg)
}

/// `K = Σ_i K_i` over a shared grid.
#[derive(Debug, Clone)]
pub struct SumKernel<S> {
    grid: Grid,
    components: Vec<Component<S>>,
}

impl<S: Scalar> SumKernel<S> {
    pub fn new(components: Vec<Component<S>>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptySumKernel)?;
        let grid = *first.grid();
        for c in &components {
            if *c.grid() != grid {
                return Err(Error::GridMismatch);
            }
            if let Component::Numeric(k) = c {
                if !k.is_delta_free() {
                    return Err(Error::NotDeltaFree(k.delta_coeff().to_string()));
                }
            }
        }
        Ok(Self { grid, components })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Component<S>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `K = Σ_i K_i` as a single delta-free kernel.
    pub fn total_kernel(&self) -> GeneralizedKernel<S> {
        let mut total = GeneralizedKernel::zero(self.grid);
        for c in &self.components {
            total = total.add(&c.kernel()).expect("components share the grid");
        }
        total
    }

    /// `[0, 1, …, d−1]`: the product `R_{K_d} ∗ ⋯ ∗ R_{K_1}`.
    pub fn default_order(&self) -> Vec<usize> {
        (0..self.components.len()).collect()
    }

    pub(crate) fn check_order(&self, order: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.components.len()];
        if order.len() != seen.len() {
            return Err(Error::InvalidOrder(order.to_vec()));
        }
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidOrder(order.to_vec()));
            }
        }
        Ok(())
    }
}
