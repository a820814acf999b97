//! Classic fixed-step RK4 for the two-level system
//! `2iω ȧ = ν b + f a`, `2iω ḃ = ν a − f b`, `f(t) = f₁ sin(ωt)`.

use num_complex::Complex64;

use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelSystem {
    pub f1: f64,
    pub nu: f64,
    pub omega: f64,
}

impl TwoLevelSystem {
    pub fn drive(&self, t: f64) -> f64 {
        self.f1 * (self.omega * t).sin()
    }

    /// `(ȧ, ḃ)` at `(t, a, b)`.
    pub fn rhs(&self, t: f64, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let c = Complex64::new(0.0, -1.0 / (2.0 * self.omega));
        let f = self.drive(t);
        (c * (self.nu * b + f * a), c * (self.nu * a - f * b))
    }
}

/// Trajectory on the uniform RK4 mesh over `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub system: TwoLevelSystem,
    pub horizon: f64,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

/// Integrates from `a(0) = a0`, `b(0) = b0` with `steps` RK4 steps.
pub fn heun_ode_oracle(system: TwoLevelSystem, horizon: f64, a0: Complex64, b0: Complex64, steps: usize) -> OdeSolution {
    let steps = steps.max(1);
    let h = horizon / steps as f64;
    let (mut a, mut b) = (a0, b0);
    let mut out_a = Vec::with_capacity(steps + 1);
    let mut out_b = Vec::with_capacity(steps + 1);
    out_a.push(a);
    out_b.push(b);
    for k in 0..steps {
        let t = k as f64 * h;
        let (ka1, kb1) = system.rhs(t, a, b);
        let (ka2, kb2) = system.rhs(t + 0.5 * h, a + ka1 * (0.5 * h), b + kb1 * (0.5 * h));
        let (ka3, kb3) = system.rhs(t + 0.5 * h, a + ka2 * (0.5 * h), b + kb2 * (0.5 * h));
        let (ka4, kb4) = system.rhs(t + h, a + ka3 * h, b + kb3 * h);
        a += (ka1 + ka2 * 2.0 + ka3 * 2.0 + ka4) * (h / 6.0);
        b += (kb1 + kb2 * 2.0 + kb3 * 2.0 + kb4) * (h / 6.0);
        out_a.push(a);
        out_b.push(b);
    }
    OdeSolution { system, horizon, a: out_a, b: out_b }
}

impl OdeSolution {
    pub fn steps(&self) -> usize {
        self.a.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.steps() as f64
    }

    /// `(a(t), b(t))` by cubic Hermite interpolation between mesh points,
    /// slopes from the right-hand side; error `O(h⁴)` like the integrator.
    pub fn at(&self, t: f64) -> (Complex64, Complex64) {
        let h = self.step();
        let k = ((t / h).floor().max(0.0) as usize).min(self.steps() - 1);
        let t0 = k as f64 * h;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let (da0, db0) = self.system.rhs(t0, self.a[k], self.b[k]);
        let (da1, db1) = self.system.rhs(t0 + h, self.a[k + 1], self.b[k + 1]);
        let (h00, h10, h01, h11) =
            (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s, -2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        let interp = |y0: Complex64, d0: Complex64, y1: Complex64, d1: Complex64| {
            y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h)
        };
        (interp(self.a[k], da0, self.a[k + 1], da1), interp(self.b[k], db0, self.b[k + 1], db1))
    }

    /// `a` sampled at the nodes of `grid`.
    pub fn a_on(&self, grid: &Grid) -> Vec<Complex64> {
        grid.nodes().map(|t| self.at(t).0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_system_is_constant() {
        let s = TwoLevelSystem { f1: 0.0, nu: 0.0, omega: 1.3 };
        let sol = heun_ode_oracle(s, 1.0, Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0), 50);
        assert!(sol.a.iter().all(|&a| a == Complex64::new(0.3, 0.1)));
        assert!(sol.b.iter().all(|&b| b == Complex64::new(-0.2, 0.0)));
    }

    #[test]
    fn resonant_coupling_gives_cosine() {
        // ν = 2ω: ȧ = −i b, ḃ = −i a, so a = cos t, b = −i sin t
        let s = TwoLevelSystem { f1: 0.0, nu: 2.0, omega: 1.0 };
        let sol = heun_ode_oracle(s, 2.0 * PI, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 4000);
        for t in [0.0, 0.3, 1.0, 3.0001, 2.0 * PI] {
            let (a, b) = sol.at(t);
            assert!((a - Complex64::new(t.cos(), 0.0)).norm() < 1e-12);
            assert!((b - Complex64::new(0.0, -t.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn step_halving_ratio_is_sixteen() {
        let s = TwoLevelSystem { f1: 0.5, nu: 0.5, omega: 1.0 };
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let end = |n| *heun_ode_oracle(s, 2.0 * PI, one, zero, n).a.last().unwrap();
        let reference = end(32000);
        let (e1, e2) = ((end(100) - reference).norm(), (end(200) - reference).norm());
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn norm_is_conserved() {
        // the generator is anti-Hermitian
        let s = TwoLevelSystem { f1: 0.5, nu: 0.5, omega: 1.0 };
        let sol = heun_ode_oracle(s, 2.0 * PI, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 20000);
        for (a, b) in sol.a.iter().zip(&sol.b) {
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
