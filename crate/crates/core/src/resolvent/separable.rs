use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Scalar;
use crate::star::{GeneralizedKernel, OneVariableFunction, TriangularField};

/// A degenerate kernel `ã(t') b̃(t)`, with `α̃ = ∫_{t_min}^{t} ã b̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableComponent<S> {
    a: OneVariableFunction<S>,
    b: OneVariableFunction<S>,
    alpha: OneVariableFunction<S>,
}

impl<S: Scalar> SeparableComponent<S> {
    pub fn new(a: OneVariableFunction<S>, b: OneVariableFunction<S>) -> Result<Self> {
        if a.grid() != b.grid() {
            return Err(Error::GridMismatch);
        }
        let grid = *a.grid();
        let diagonal: Vec<S> = a.values().iter().zip(b.values()).map(|(x, y)| *x * *y).collect();
        let alpha = OneVariableFunction::from_samples(grid, grid.cumulative_trapezoid(&diagonal))?;
        Ok(Self { a, b, alpha })
    }

    pub fn grid(&self) -> &Grid {
        self.a.grid()
    }

    pub fn a(&self) -> &OneVariableFunction<S> {
        &self.a
    }

    pub fn b(&self) -> &OneVariableFunction<S> {
        &self.b
    }

    pub fn alpha(&self) -> &OneVariableFunction<S> {
        &self.alpha
    }

    /// `ã(t_i) b̃(t_j)` on the triangle.
    pub fn kernel(&self) -> GeneralizedKernel<S> {
        let (a, b) = (self.a.values(), self.b.values());
        GeneralizedKernel::new(S::zero(), TriangularField::from_fn(*self.grid(), |i, j| a[i] * b[j]))
    }

    /// `R_K = δ + ã(t') b̃(t) e^{α̃(t') − α̃(t)} Θ`.
    pub fn resolvent(&self) -> GeneralizedKernel<S> {
        let (a, b, alpha) = (self.a.values(), self.b.values(), self.alpha.values());
        GeneralizedKernel::new(
            S::one(),
            TriangularField::from_fn(*self.grid(), |i, j| a[i] * b[j] * (alpha[i] - alpha[j]).exp()),
        )
    }
}

/// Closed-form resolvent of a separable component.
pub fn resolvent_separable<S: Scalar>(comp: &SeparableComponent<S>) -> GeneralizedKernel<S> {
    comp.resolvent()
}
