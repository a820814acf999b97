//! Closed forms for the constant kernel `K = (a+b)Θ` split as `aΘ + bΘ`.
//!
//! Quotients by `a − b` are rewritten through `exprel(x) = (eˣ − 1)/x` so that
//! every form stays finite and accurate as `a → b`.

use crate::error::Result;
use crate::grid::Grid;
use crate::resolvent::{Component, SeparableComponent, SumKernel};
use crate::star::OneVariableFunction;

/// `(eˣ − 1)/x`, with its series near zero.
pub fn exprel(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        1.0 + x / 2.0 + x * x / 6.0
    } else {
        x.exp_m1() / x
    }
}

/// `(a+b) e^{(a+b)Δ}`.
pub fn constant_exact(a: f64, b: f64, delta: f64) -> f64 {
    (a + b) * ((a + b) * delta).exp()
}

/// `(a² e^{aΔ} − b² e^{bΔ})/(a − b)`.
pub fn constant_f0(a: f64, b: f64, delta: f64) -> f64 {
    let eb = (b * delta).exp();
    a * a * delta * eb * exprel((a - b) * delta) + (a + b) * eb
}

/// `ab (e^{aΔ} − e^{bΔ})/(a − b)`; `a² Δ e^{aΔ}` at `a = b`.
pub fn constant_t(a: f64, b: f64, delta: f64) -> f64 {
    a * b * delta * (b * delta).exp() * exprel((a - b) * delta)
}

/// Order-1 partial sum `f̃^{(1)}(Δ) = p̃ + T̃ + ∫_0^Δ T̃(Δ−s) p̃(s) ds`, with
/// `p̃ = f̃^{(0)}` and the convolution by composite Simpson on 2048 panels.
pub fn constant_f1(a: f64, b: f64, delta: f64) -> f64 {
    const PANELS: usize = 2048;
    let h = delta / PANELS as f64;
    let integrand = |s: f64| constant_t(a, b, delta - s) * constant_f0(a, b, s);
    let mut acc = integrand(0.0) + integrand(delta);
    for k in 1..PANELS {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * integrand(k as f64 * h);
    }
    constant_f0(a, b, delta) + constant_t(a, b, delta) + acc * h / 3.0
}

/// The order-1 expression in quotient form,
/// `(a+b)/(a−b) (a e^{aΔ} − b e^{bΔ}) + ab/(a−b)³ [e^{bΔ}(a² + b² + b²(a−b)Δ) − e^{aΔ}(a² + b² − a²(a−b)Δ)]`,
/// and its limit `a e^{aΔ}(2 + 2aΔ + a²Δ² + a³Δ³/6)` at `a = b`.
///
/// Cancels catastrophically for `a ≈ b`; [`constant_f1`] is the stable route.
pub fn constant_f1_printed(a: f64, b: f64, delta: f64) -> f64 {
    let (ea, eb) = ((a * delta).exp(), (b * delta).exp());
    if a == b {
        let x = a * delta;
        return a * ea * (2.0 + 2.0 * x + x * x + x * x * x / 6.0);
    }
    let d = a - b;
    (a + b) / d * (a * ea - b * eb)
        + a * b / d.powi(3) * (eb * (a * a + b * b + b * b * d * delta) - ea * (a * a + b * b - a * a * d * delta))
}

/// Oracle parameters for the split `K₁ = aΘ`, `K₂ = bΘ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantKernelOracle {
    pub a: f64,
    pub b: f64,
}

impl ConstantKernelOracle {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn exact(&self, delta: f64) -> f64 {
        constant_exact(self.a, self.b, delta)
    }

    pub fn f0(&self, delta: f64) -> f64 {
        constant_f0(self.a, self.b, delta)
    }

    pub fn f1(&self, delta: f64) -> f64 {
        constant_f1(self.a, self.b, delta)
    }

    pub fn t(&self, delta: f64) -> f64 {
        constant_t(self.a, self.b, delta)
    }

    /// `sup_Δ |T̃|` over `[0, length]`; `|T̃|` is monotone in `Δ`.
    pub fn c_t(&self, length: f64) -> f64 {
        self.t(length).abs()
    }

    /// Two separable components `ã ≡ a, b̃ ≡ 1` and `ã ≡ b, b̃ ≡ 1`.
    pub fn sum_kernel(&self, grid: Grid) -> Result<SumKernel<f64>> {
        let one = OneVariableFunction::constant(grid, 1.0);
        let comp = |c: f64| -> Result<Component<f64>> {
            Ok(Component::Separable(SeparableComponent::new(OneVariableFunction::constant(grid, c), one.clone())?))
        };
        SumKernel::new(vec![comp(self.a)?, comp(self.b)?])
    }
}
