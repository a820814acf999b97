//! The ∗-product algebra on grid-discretized generalized kernels.
//!
//! A [`GeneralizedKernel`] stands for `c·δ(t'−t) + k̃(t',t)·Θ(t'−t)` with a
//! constant delta coefficient `c` and a lower-triangular field `k̃` sampled on
//! node pairs `(i, j)`, `i ≥ j`. The product
//!
//! ```text
//! (f ∗ g)(t',t) = c_f c_g δ + ( c_f g̃ + c_g f̃ + ∫_t^{t'} f̃(t',τ) g̃(τ,t) dτ ) Θ
//! ```
//!
//! is evaluated with the composite trapezoid rule on the shared uniform grid.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Scalar;

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

/// Values `k̃(t_i, t_j)` for `i ≥ j`, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularField<S> {
    grid: Grid,
    values: Vec<S>,
}

impl<S: Scalar> TriangularField<S> {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.n_points();
        Self { grid, values: vec![S::zero(); n * (n + 1) / 2] }
    }

    pub fn from_fn(grid: Grid, mut k: impl FnMut(usize, usize) -> S) -> Self {
        let n = grid.n_points();
        let mut values = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                values.push(k(i, j));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Panics if `j > i` or `i` is outside the grid.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        assert!(j <= i, "triangular field accessed above the diagonal ({i}, {j})");
        self.values[packed_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: S) {
        assert!(j <= i, "triangular field accessed above the diagonal ({i}, {j})");
        self.values[packed_index(i, j)] = value;
    }

    /// Entries `(i, 0..=i)`.
    #[inline]
    pub fn row(&self, i: usize) -> &[S] {
        let start = packed_index(i, 0);
        &self.values[start..start + i + 1]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        let start = packed_index(i, 0);
        &mut self.values[start..start + i + 1]
    }

    /// Column `j` from the diagonal down: `(j, j), (j+1, j), …`.
    pub fn column(&self, j: usize) -> Vec<S> {
        (j..self.grid.n_points()).map(|i| self.get(i, j)).collect()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// `(i, j, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        let n = self.grid.n_points();
        (0..n).flat_map(move |i| (0..=i).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, mut f: impl FnMut(S) -> S) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| f(*v)).collect() }
    }

    fn zip_with(&self, other: &Self, mut f: impl FnMut(S, S) -> S) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    /// Sup-norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((*a - *b).modulus())))
    }
}

/// Samples of a function of one time variable on the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OneVariableFunction<S> {
    grid: Grid,
    values: Vec<S>,
}

impl<S: Scalar> OneVariableFunction<S> {
    pub fn from_samples(grid: Grid, values: Vec<S>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::LengthMismatch { expected: grid.n_points(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, mut m: impl FnMut(f64) -> S) -> Self {
        let values = grid.nodes().map(&mut m).collect();
        Self { grid, values }
    }

    /// Like [`from_fn`](Self::from_fn) but fails on evaluation errors or non-finite values.
    pub fn try_from_fn<E: std::fmt::Display>(
        grid: Grid,
        mut m: impl FnMut(f64) -> std::result::Result<S, E>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.n_points());
        for t in grid.nodes() {
            let v = m(t).map_err(|e| Error::FunctionEvaluation { t, message: e.to_string() })?;
            if !v.is_finite() {
                return Err(Error::FunctionEvaluation { t, message: format!("non-finite value {v}") });
            }
            values.push(v);
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: Grid, c: S) -> Self {
        Self { grid, values: vec![c; grid.n_points()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, k: usize) -> S {
        self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    /// `m(t')` treated as the left variable: `m(t_i) Θ(t'−t)`.
    pub fn lift_left(&self) -> GeneralizedKernel<S> {
        GeneralizedKernel {
            delta: S::zero(),
            smooth: TriangularField::from_fn(self.grid, |i, _| self.values[i]),
        }
    }

    /// `m(t)` treated as the right variable: `m(t_j) Θ(t'−t)`.
    pub fn lift_right(&self) -> GeneralizedKernel<S> {
        GeneralizedKernel {
            delta: S::zero(),
            smooth: TriangularField::from_fn(self.grid, |_, j| self.values[j]),
        }
    }
}

/// `c·δ(t'−t) + k̃(t',t)·Θ(t'−t)` on a grid, with `Θ(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedKernel<S> {
    delta: S,
    smooth: TriangularField<S>,
}

impl<S: Scalar> GeneralizedKernel<S> {
    pub fn new(delta: S, smooth: TriangularField<S>) -> Self {
        Self { delta, smooth }
    }

    /// `1_∗ = δ(t'−t)`.
    pub fn identity(grid: Grid) -> Self {
        Self { delta: S::one(), smooth: TriangularField::zeros(grid) }
    }

    pub fn zero(grid: Grid) -> Self {
        Self { delta: S::zero(), smooth: TriangularField::zeros(grid) }
    }

    /// `c·Θ(t'−t)`.
    pub fn constant(grid: Grid, c: S) -> Self {
        Self { delta: S::zero(), smooth: TriangularField::from_fn(grid, |_, _| c) }
    }

    /// Samples `k(t_i, t_j)` on every node pair `i ≥ j`.
    pub fn from_fn(grid: Grid, delta: S, mut k: impl FnMut(f64, f64) -> S) -> Self {
        let nodes: Vec<f64> = grid.nodes().collect();
        Self { delta, smooth: TriangularField::from_fn(grid, |i, j| k(nodes[i], nodes[j])) }
    }

    /// Builds a kernel from a fallible two-variable function `k(t', t)`.
    ///
    /// Evaluation failures and non-finite samples are reported with the
    /// offending node coordinates.
    pub fn make_kernel<E: std::fmt::Display>(
        grid: Grid,
        delta: S,
        mut k: impl FnMut(f64, f64) -> std::result::Result<S, E>,
    ) -> Result<Self> {
        let nodes: Vec<f64> = grid.nodes().collect();
        let mut smooth = TriangularField::zeros(grid);
        for i in 0..nodes.len() {
            for j in 0..=i {
                let (t_prime, t) = (nodes[i], nodes[j]);
                let v = k(t_prime, t)
                    .map_err(|e| Error::KernelEvaluation { t_prime, t, message: e.to_string() })?;
                if !v.is_finite() {
                    return Err(Error::KernelEvaluation {
                        t_prime,
                        t,
                        message: format!("non-finite value {v}"),
                    });
                }
                smooth.set(i, j, v);
            }
        }
        Ok(Self { delta, smooth })
    }

    pub fn grid(&self) -> &Grid {
        self.smooth.grid()
    }

    pub fn delta_coeff(&self) -> S {
        self.delta
    }

    pub fn smooth(&self) -> &TriangularField<S> {
        &self.smooth
    }

    pub fn into_parts(self) -> (S, TriangularField<S>) {
        (self.delta, self.smooth)
    }

    pub fn with_delta(mut self, delta: S) -> Self {
        self.delta = delta;
        self
    }

    pub fn is_delta_free(&self) -> bool {
        self.delta.is_zero()
    }

    /// Smooth value at the nodes nearest to `(t', t)`; `None` outside the
    /// support `t' ≥ t` or the grid.
    pub fn smooth_at(&self, t_prime: f64, t: f64) -> Option<S> {
        let g = self.grid();
        let (i, j) = (g.nearest_node(t_prime)?, g.nearest_node(t)?);
        (i >= j).then(|| self.smooth.get(i, j))
    }

    /// Sup-norm of the ordinary part over `I²`; the delta part is excluded.
    pub fn sup_norm(&self) -> f64 {
        self.smooth.sup_norm()
    }

    /// Sup-norm distance of the ordinary parts.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.smooth.distance(&other.smooth)
    }

    pub fn scale(&self, c: S) -> Self {
        Self { delta: self.delta * c, smooth: self.smooth.map(|v| v * c) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { delta: self.delta + other.delta, smooth: self.smooth.zip_with(&other.smooth, |a, b| a + b)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { delta: self.delta - other.delta, smooth: self.smooth.zip_with(&other.smooth, |a, b| a - b)? })
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: S, other: &Self, b: S) -> Result<Self> {
        Ok(Self {
            delta: a * self.delta + b * other.delta,
            smooth: self.smooth.zip_with(&other.smooth, |x, y| a * x + b * y)?,
        })
    }

    /// The ∗-product `self ∗ other`.
    ///
    /// Each output entry `(i, j)` sums the inner quadrature over nodes `j..=i`
    /// in ascending order, so results do not depend on evaluation order.
    pub fn star(&self, other: &Self) -> Result<Self> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch);
        }
        let (cf, cg) = (self.delta, other.delta);
        let (f, g) = (&self.smooth, &other.smooth);

        // Pure deltas scale the other operand; this also keeps 1_∗ ∗ g = g bit-exact.
        if f.is_zero() {
            return Ok(Self { delta: cf * cg, smooth: g.map(|v| cf * v) });
        }
        if g.is_zero() {
            return Ok(Self { delta: cf * cg, smooth: f.map(|v| v * cg) });
        }

        let grid = *self.grid();
        let n = grid.n_points();
        let h = grid.step();
        let mut out = TriangularField::zeros(grid);
        let mut acc = vec![S::zero(); n];

        for i in 0..n {
            let f_row = f.row(i);
            let acc = &mut acc[..=i];
            acc.iter_mut().for_each(|a| *a = S::zero());
            for (m, &fim) in f_row.iter().enumerate() {
                if fim.is_zero() {
                    continue;
                }
                S::axpy(&mut acc[..=m], fim, g.row(m));
            }
            let fii = f_row[i];
            let g_row = g.row(i);
            let out_row = out.row_mut(i);
            for j in 0..i {
                let endpoints = (f_row[j] * g.get(j, j) + fii * g_row[j]).scale(0.5);
                let quad = (acc[j] - endpoints).scale(h);
                out_row[j] = cf * g_row[j] + cg * f_row[j] + quad;
            }
            // zero-length integral on the diagonal
            out_row[i] = cf * g_row[i] + cg * f_row[i];
        }
        Ok(Self { delta: cf * cg, smooth: out })
    }

    /// `self^{∗n}`, with `self^{∗0} = 1_∗`.
    pub fn star_power(&self, n: usize) -> Self {
        let mut acc = Self::identity(*self.grid());
        for _ in 0..n {
            acc = acc.star(self).expect("operands share a grid");
        }
        acc
    }

    /// `self ∗ (self ∗ (⋯ ∗ rhs))` with `n` left factors.
    pub fn apply_left(&self, n: usize, rhs: &Self) -> Result<Self> {
        let mut acc = rhs.clone();
        for _ in 0..n {
            acc = self.star(&acc)?;
        }
        Ok(acc)
    }

    /// `1 ∗ F ∗ 1 = ∫_t^{t'} ∫_{τ₁}^{t'} F(τ₂, τ₁) dτ₂ dτ₁ Θ`, evaluated by
    /// nested trapezoid sweeps in `O(n²)`.
    pub fn sandwich_ones(&self) -> Self {
        let grid = *self.grid();
        let n = grid.n_points();
        let half_h = 0.5 * grid.step();
        let f = &self.smooth;

        // inner(i, m) = c_F + ∫_{t_m}^{t_i} F̃(τ, t_m) dτ
        let mut inner = TriangularField::zeros(grid);
        for m in 0..n {
            let mut acc = self.delta;
            inner.set(m, m, acc);
            for i in m + 1..n {
                acc += (f.get(i - 1, m) + f.get(i, m)).scale(half_h);
                inner.set(i, m, acc);
            }
        }

        // outer(i, j) = ∫_{t_j}^{t_i} inner(i, τ₁) dτ₁
        let mut outer = TriangularField::zeros(grid);
        for i in 0..n {
            let row = inner.row(i);
            let out_row = outer.row_mut(i);
            let mut acc = S::zero();
            out_row[i] = acc;
            for j in (0..i).rev() {
                acc += (row[j] + row[j + 1]).scale(half_h);
                out_row[j] = acc;
            }
        }
        Self { delta: S::zero(), smooth: outer }
    }

    /// `t ↦ c + ∫_{t_from}^{t} f̃(τ, t_from) dτ` for `t ≥ t_from`, zero before.
    ///
    /// Under `Θ(0) = 1` the delta contributes its coefficient once.
    pub fn integrate_left_edge(&self, t_from: usize) -> Result<OneVariableFunction<S>> {
        let grid = *self.grid();
        let n = grid.n_points();
        if t_from >= n {
            return Err(Error::NodeOutOfRange { index: t_from, n_points: n });
        }
        let column = self.smooth.column(t_from);
        let cumulative = grid.cumulative_trapezoid(&column);
        let mut values = vec![S::zero(); n];
        for (v, c) in values[t_from..].iter_mut().zip(cumulative) {
            *v = self.delta + c;
        }
        OneVariableFunction::from_samples(grid, values)
    }

    /// Writes `i,j,t_i,t_j,re,im` rows, preceded by a `# delta=re,im` line.
    ///
    /// Only node pairs with `i % stride == 0 && j % stride == 0` are written.
    pub fn write_csv<W: Write>(&self, mut w: W, stride: usize) -> std::io::Result<()> {
        let stride = stride.max(1);
        let grid = self.grid();
        writeln!(w, "# delta={:.16e},{:.16e}", self.delta.re(), self.delta.im())?;
        writeln!(w, "i,j,t_i,t_j,re,im")?;
        for i in (0..grid.n_points()).step_by(stride) {
            let ti = grid.node(i);
            for j in (0..=i).step_by(stride) {
                let v = self.smooth.get(i, j);
                writeln!(w, "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}", ti, grid.node(j), v.re(), v.im())?;
            }
        }
        Ok(())
    }

    /// Reads the full-resolution output of [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(grid: Grid, r: R) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Invalid(format!("csv line {line}: {msg}"));
        let mut delta = None;
        let mut smooth = TriangularField::zeros(grid);
        let mut seen = 0usize;
        for (lineno, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::Invalid(e.to_string()))?;
            let lineno = lineno + 1;
            if let Some(rest) = line.strip_prefix("# delta=") {
                let (re, im) = rest.split_once(',').ok_or_else(|| bad(lineno, "malformed delta"))?;
                let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(lineno, "malformed delta"));
                delta = Some(S::from_parts(parse(re)?, parse(im)?).ok_or_else(|| bad(lineno, "complex delta in real field"))?);
                continue;
            }
            if line.starts_with("i,") || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(bad(lineno, "expected 6 columns"));
            }
            let i: usize = cols[0].parse().map_err(|_| bad(lineno, "bad row index"))?;
            let j: usize = cols[1].parse().map_err(|_| bad(lineno, "bad column index"))?;
            if j > i || i >= grid.n_points() {
                return Err(bad(lineno, "index outside the triangle"));
            }
            let re: f64 = cols[4].parse().map_err(|_| bad(lineno, "bad real part"))?;
            let im: f64 = cols[5].parse().map_err(|_| bad(lineno, "bad imaginary part"))?;
            let v = S::from_parts(re, im).ok_or_else(|| bad(lineno, "complex value in real field"))?;
            smooth.set(i, j, v);
            seen += 1;
        }
        if seen != smooth.values().len() {
            return Err(Error::Invalid(format!("csv has {seen} entries, grid needs {}", smooth.values().len())));
        }
        let delta = delta.ok_or_else(|| Error::Invalid("csv lacks the delta header".into()))?;
        Ok(Self { delta, smooth })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn unit(n: usize) -> Grid {
        Grid::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn make_kernel_samples_nodes() {
        let g = unit(11);
        let id = GeneralizedKernel::<f64>::make_kernel(g, 1.0, |_, _| Ok::<_, String>(0.0)).unwrap();
        assert_eq!(id, GeneralizedKernel::identity(g));
        let three = GeneralizedKernel::<f64>::from_fn(g, 0.0, |_, _| 3.0);
        assert_eq!(three.smooth().get(7, 2), 3.0);
        let prod = GeneralizedKernel::<f64>::from_fn(g, 0.0, |tp, t| tp * t);
        assert_eq!(prod.smooth().get(7, 3), g.node(7) * g.node(3));
    }

    #[test]
    fn make_kernel_reports_coordinates() {
        let g = unit(11);
        let err = GeneralizedKernel::<f64>::make_kernel(g, 0.0, |tp, t| {
            if tp > 0.55 && t < 0.05 { Err("domain") } else { Ok(1.0) }
        })
        .unwrap_err();
        match err {
            Error::KernelEvaluation { t_prime, t, .. } => {
                assert!((t_prime - 0.6).abs() < 1e-12);
                assert_eq!(t, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = GeneralizedKernel::<f64>::make_kernel(g, 0.0, |_, t| Ok::<_, String>(1.0 / t)).unwrap_err();
        assert!(matches!(err, Error::KernelEvaluation { .. }));
    }

    #[test]
    fn identity_is_exact() {
        let g = unit(21);
        let k = GeneralizedKernel::<f64>::from_fn(g, 0.3, |tp, t| (tp - 2.0 * t).sin() - 0.0);
        let id = GeneralizedKernel::identity(g);
        assert_eq!(id.star(&k).unwrap(), k);
        assert_eq!(k.star(&id).unwrap(), k);
    }

    #[test]
    fn theta_squared_is_linear() {
        let g = unit(11);
        let theta = GeneralizedKernel::<f64>::constant(g, 1.0);
        let sq = theta.star(&theta).unwrap();
        assert!((sq.smooth().get(10, 0) - 1.0).abs() < 1e-14);
        assert!((sq.smooth().get(6, 2) - 0.4).abs() < 1e-14);
        assert_eq!(sq.delta_coeff(), 0.0);
    }

    #[test]
    fn left_variable_product_half() {
        // f̃ = t', g̃(τ, t) = τ: (f ∗ g)(1, 0) = ∫₀¹ τ dτ... with f̃(1, τ) = 1.
        let g = unit(101);
        let f = GeneralizedKernel::<f64>::from_fn(g, 0.0, |tp, _| tp);
        let h = GeneralizedKernel::<f64>::from_fn(g, 0.0, |tp, _| tp);
        let p = h.star(&f).unwrap();
        assert!((p.smooth().get(100, 0) - 0.5).abs() < 1e-12);
        let p = f.star(&h).unwrap();
        assert!((p.smooth().get(100, 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn powers() {
        let g = unit(201);
        let theta = GeneralizedKernel::<f64>::constant(g, 1.0);
        assert_eq!(theta.star_power(0), GeneralizedKernel::identity(g));
        assert!((theta.star_power(3).smooth().get(200, 0) - 0.5).abs() < 1e-5);
        let two = GeneralizedKernel::<f64>::constant(g, 2.0);
        assert!((two.star_power(2).smooth().get(200, 0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lifts() {
        let g = unit(11);
        let ones = OneVariableFunction::constant(g, 1.0_f64);
        assert_eq!(ones.lift_left(), GeneralizedKernel::constant(g, 1.0));
        let lin = OneVariableFunction::from_fn(g, |t| t);
        assert_eq!(lin.lift_left().smooth_at(1.0, 0.5), Some(1.0));
        assert_eq!(lin.lift_right().smooth_at(1.0, 0.5), Some(0.5));
        assert!(OneVariableFunction::from_samples(g, vec![1.0_f64; 3]).is_err());
    }

    #[test]
    fn sandwich_of_delta_and_theta() {
        let g = unit(101);
        let id = GeneralizedKernel::<f64>::identity(g);
        let theta = GeneralizedKernel::<f64>::constant(g, 1.0);
        assert!((id.sandwich_ones().smooth().get(100, 0) - 1.0).abs() < 1e-13);
        assert!((theta.sandwich_ones().smooth().get(100, 0) - 0.5).abs() < 1e-13);
        let both = id.add(&theta).unwrap();
        assert!((both.sandwich_ones().smooth().get(100, 0) - 1.5).abs() < 1e-13);
    }

    #[test]
    fn sandwich_matches_lifted_products() {
        let g = unit(201);
        let f = GeneralizedKernel::<f64>::from_fn(g, 1.0, |tp, t| (tp * t).cos() + tp);
        let ones = OneVariableFunction::constant(g, 1.0).lift_left();
        let composed = ones.star(&f.star(&ones).unwrap()).unwrap();
        assert!(f.sandwich_ones().distance(&composed).unwrap() < 1e-4);
    }

    #[test]
    fn sup_norms() {
        let g = unit(101);
        assert_eq!(GeneralizedKernel::<f64>::constant(g, 1.0).sup_norm(), 1.0);
        assert_eq!(GeneralizedKernel::<f64>::identity(g).sup_norm(), 0.0);
        let s = GeneralizedKernel::<f64>::from_fn(g, 0.0, |tp, t| (tp - t).sin());
        assert!((s.sup_norm() - 1.0_f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn left_edge_integrals() {
        let g = unit(11);
        let id = GeneralizedKernel::<f64>::identity(g);
        assert!(id.integrate_left_edge(0).unwrap().values().iter().all(|v| *v == 1.0));
        let theta = GeneralizedKernel::<f64>::constant(g, 1.0);
        let a = theta.integrate_left_edge(0).unwrap();
        assert!((a.get(4) - 0.4).abs() < 1e-15);
        let both = id.add(&theta).unwrap().integrate_left_edge(0).unwrap();
        assert!((both.get(10) - 2.0).abs() < 1e-15);
        let late = theta.integrate_left_edge(5).unwrap();
        assert_eq!(late.get(4), 0.0);
        assert!((late.get(10) - 0.5).abs() < 1e-15);
        assert!(theta.integrate_left_edge(11).is_err());
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = GeneralizedKernel::<f64>::identity(unit(5));
        let b = GeneralizedKernel::<f64>::identity(unit(6));
        assert!(matches!(a.star(&b), Err(Error::GridMismatch)));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn complex_csv_round_trip() {
        let g = unit(6);
        let k = GeneralizedKernel::<Complex64>::from_fn(g, Complex64::new(1.0, -0.5), |tp, t| {
            Complex64::new(tp.sin(), (tp * t).exp() / 3.0)
        });
        let mut buf = Vec::new();
        k.write_csv(&mut buf, 1).unwrap();
        let back = GeneralizedKernel::<Complex64>::read_csv(g, buf.as_slice()).unwrap();
        assert_eq!(back, k);
        assert!(GeneralizedKernel::<f64>::read_csv(g, buf.as_slice()).is_err());
    }
}
