use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;

use super::report::{Method, OrderRecord, SolveReport};
use super::{ComponentResolvent, SeriesConfig, SumKernel};

/// The objects of the re-summed series for one product order:
/// `P = R_{order[d−1]} ∗ ⋯ ∗ R_{order[0]}` and `T = 1_∗ − P ∗ (1_∗ − K)`.
#[derive(Debug, Clone)]
pub struct Resummation<S> {
    order: Vec<usize>,
    components: Vec<GeneralizedKernel<S>>,
    kernel: GeneralizedKernel<S>,
    resolvents: Vec<ComponentResolvent<S>>,
    product: GeneralizedKernel<S>,
    t: GeneralizedKernel<S>,
    t_delta_residue: f64,
}

impl<S: Scalar> Resummation<S> {
    /// `order = None` uses `[0, 1, …, d−1]`, i.e. `R_{K_d} ∗ ⋯ ∗ R_{K_1}`.
    pub fn new(sk: &SumKernel<S>, order: Option<&[usize]>, cfg: &SeriesConfig) -> Result<Self> {
        let order = order.map_or_else(|| sk.default_order(), <[usize]>::to_vec);
        sk.check_order(&order)?;
        let resolvents = sk.components().iter().map(|c| c.resolvent(cfg)).collect::<Result<Vec<_>>>()?;
        let components = sk.components().iter().map(|c| c.kernel()).collect();
        Self::assemble(order, components, sk.total_kernel(), resolvents, cfg)
    }

    /// The same sum kernel under another product order, reusing the
    /// component resolvents.
    pub fn reordered(&self, order: &[usize], cfg: &SeriesConfig) -> Result<Self> {
        let mut seen = vec![false; self.components.len()];
        let valid = order.len() == seen.len()
            && order.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true));
        if !valid {
            return Err(Error::InvalidOrder(order.to_vec()));
        }
        Self::assemble(order.to_vec(), self.components.clone(), self.kernel.clone(), self.resolvents.clone(), cfg)
    }

    fn assemble(
        order: Vec<usize>,
        components: Vec<GeneralizedKernel<S>>,
        kernel: GeneralizedKernel<S>,
        resolvents: Vec<ComponentResolvent<S>>,
        cfg: &SeriesConfig,
    ) -> Result<Self> {
        let mut product = resolvents[order[0]].resolvent.clone();
        for &i in &order[1..] {
            product = resolvents[i].resolvent.star(&product)?;
        }
        let one = GeneralizedKernel::identity(*kernel.grid());
        let t = one.sub(&product.star(&one.sub(&kernel)?)?)?;
        let t_delta_residue = t.delta_coeff().modulus();
        if t_delta_residue > cfg.delta_floor {
            return Err(Error::DeltaResidue { modulus: t_delta_residue, floor: cfg.delta_floor });
        }
        let t = t.with_delta(S::zero());
        Ok(Self { order, components, kernel, resolvents, product, t, t_delta_residue })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `K = Σ_i K_i`.
    pub fn kernel(&self) -> &GeneralizedKernel<S> {
        &self.kernel
    }

    pub fn resolvents(&self) -> &[ComponentResolvent<S>] {
        &self.resolvents
    }

    /// `⊛_i R_{K_i}` in the configured order.
    pub fn product(&self) -> &GeneralizedKernel<S> {
        &self.product
    }

    pub fn t(&self) -> &GeneralizedKernel<S> {
        &self.t
    }

    /// Modulus of T's delta coefficient before it was clamped to zero.
    pub fn t_delta_residue(&self) -> f64 {
        self.t_delta_residue
    }

    /// `P ∗ Σ_{n=2}^{d} (−1)^n Σ_{i_1<⋯<i_n} K_{σ(i_1)} ∗ ⋯ ∗ K_{σ(i_n)}`,
    /// positions taken along the product order.
    pub fn t_alternative(&self) -> Result<GeneralizedKernel<S>> {
        let grid = *self.kernel.grid();
        let d = self.order.len();
        // elementary[n]: sum over increasing position sequences of length n
        let mut elementary: Vec<GeneralizedKernel<S>> = vec![GeneralizedKernel::zero(grid); d + 1];
        elementary[0] = GeneralizedKernel::identity(grid);
        for (p, &i) in self.order.iter().enumerate() {
            for n in (1..=p + 1).rev() {
                let extended = elementary[n - 1].star(&self.components[i])?;
                elementary[n] = elementary[n].add(&extended)?;
            }
        }
        let mut m = GeneralizedKernel::zero(grid);
        for (n, e) in elementary.iter().enumerate().skip(2) {
            let sign = if n % 2 == 0 { S::one() } else { -S::one() };
            m = m.linear_combination(S::one(), e, sign)?;
        }
        self.product.star(&m)
    }

    /// Runs the series `Σ_k T^{∗k} ∗ P ∗ g` up to `n_orders` orders.
    pub fn solve(
        &self,
        g: &GeneralizedKernel<S>,
        n_orders: usize,
        cfg: &SeriesConfig,
    ) -> Result<(GeneralizedKernel<S>, SolveReport)> {
        self.solve_with(g, n_orders, cfg, |_, _| {})
    }

    /// [`Resummation::solve`], calling `visit(n, &f^{(n)})` after every order.
    pub fn solve_with(
        &self,
        g: &GeneralizedKernel<S>,
        n_orders: usize,
        cfg: &SeriesConfig,
        mut visit: impl FnMut(usize, &GeneralizedKernel<S>),
    ) -> Result<(GeneralizedKernel<S>, SolveReport)> {
        if g.grid() != self.kernel.grid() {
            return Err(Error::GridMismatch);
        }
        let n_orders = n_orders.max(1);
        let mut term = self.product.star(g)?;
        let mut f = term.clone();
        let mut kf = if cfg.track_defect { Some(self.kernel.star(&f)?) } else { None };
        let mut records = Vec::new();
        let mut converged = false;
        for n in 0..n_orders {
            if n > 0 {
                term = self.t.star(&term)?;
                f = f.add(&term)?;
                if let Some(kf) = kf.as_mut() {
                    *kf = kf.add(&self.kernel.star(&term)?)?;
                }
            }
            visit(n, &f);
            let term_norm = term.sup_norm();
            let defect = match &kf {
                Some(kf) => Some(f.sub(g)?.sub(kf)?.sup_norm()),
                None => None,
            };
            records.push(OrderRecord { order: n, term_norm, defect, bound: 0.0 });
            if n > 0 && term_norm <= cfg.floor(f.sup_norm()) {
                converged = true;
                break;
            }
        }
        let mut report = SolveReport::new(
            Method::Resummed,
            records,
            converged,
            &self.kernel,
            Some(self.t.sup_norm()),
            &f,
            cfg,
        );
        report.component_resolvents = self.resolvents.iter().map(|r| r.method).collect();
        Ok((f, report))
    }

    /// `‖(f − f^{(n−1)}) − T^{∗n} ∗ f‖` against a converged `f`, with
    /// `T^{∗n} ∗ f` evaluated as `T ∗ (T ∗ ⋯ (T ∗ f))`.
    pub fn truncation_error(&self, g: &GeneralizedKernel<S>, f: &GeneralizedKernel<S>, n: usize) -> Result<f64> {
        let mut partial = self.product.star(g)?;
        let mut term = partial.clone();
        for _ in 1..n {
            term = self.t.star(&term)?;
            partial = partial.add(&term)?;
        }
        let remainder = self.t.apply_left(n, f)?;
        f.sub(&partial)?.distance(&remainder)
    }
}

/// T for the given product order (`None` for the default).
pub fn build_t<S: Scalar>(sk: &SumKernel<S>, order: Option<&[usize]>) -> Result<GeneralizedKernel<S>> {
    Ok(Resummation::new(sk, order, &SeriesConfig::default())?.t)
}

/// The alternating-sum form of T; must agree with [`build_t`] for the same order.
pub fn build_t_alternative<S: Scalar>(sk: &SumKernel<S>, order: Option<&[usize]>) -> Result<GeneralizedKernel<S>> {
    Resummation::new(sk, order, &SeriesConfig::default())?.t_alternative()
}

/// `f^{(n_orders−1)} = Σ_{k<n_orders} T^{∗k} ∗ (⊛_i R_{K_i}) ∗ g` in the default order.
pub fn solve_resummed<S: Scalar>(
    sk: &SumKernel<S>,
    g: &GeneralizedKernel<S>,
    n_orders: usize,
    cfg: &SeriesConfig,
) -> Result<(GeneralizedKernel<S>, SolveReport)> {
    Resummation::new(sk, None, cfg)?.solve(g, n_orders, cfg)
}

/// [`Resummation::truncation_error`] with a reference re-summed to the floor.
pub fn truncation_error_check<S: Scalar>(sk: &SumKernel<S>, g: &GeneralizedKernel<S>, n: usize) -> Result<f64> {
    let cfg = SeriesConfig { track_defect: false, ..SeriesConfig::default() };
    let res = Resummation::new(sk, None, &cfg)?;
    let (f, _) = res.solve(g, usize::MAX, &cfg)?;
    res.truncation_error(g, &f, n)
}
