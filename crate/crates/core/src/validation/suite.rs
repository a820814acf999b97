//! Invariant checks run by `sumkernel verify`.
//!
//! Thresholds scale with the quadrature tolerance
//! `τ_q(h) = h² · max(1, C_K, C_T, C_f)`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::Grid;
use crate::resolvent::neumann::neumann_to_floor;
use crate::resolvent::{convergence_bounds, Component, Resummation, SeriesConfig, SumKernel};
use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;

use super::constant::ConstantKernelOracle;

/// Largest power checked against `(t' − t)^{k−1}/(k−1)!`.
pub const THETA_POWER_MAX: usize = 6;
/// Fixed threshold for the relative Θ-power deviation.
pub const THETA_POWER_TOLERANCE: f64 = 5e-5;
/// Orders checked by the truncation identity and the n!-bound.
pub const CHECKED_ORDERS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub measured: Option<f64>,
    pub threshold: Option<f64>,
    /// `threshold − measured`; negative on failure.
    pub slack: Option<f64>,
    pub detail: String,
}

impl CheckResult {
    fn measured(name: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        let pass = measured <= threshold;
        Self {
            name: name.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            measured: Some(measured),
            threshold: Some(threshold),
            slack: Some(threshold - measured),
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            measured: None,
            threshold: None,
            slack: None,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
    pub components: usize,
    pub tau_q: f64,
    pub eps_q: f64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Relative sup distance between `Θ^{∗k}` and `(t' − t)^{k−1}/(k−1)!` over `k ≤ max_k`.
pub fn theta_power_deviation(grid: Grid, max_k: usize) -> f64 {
    let theta = GeneralizedKernel::constant(grid, 1.0);
    let mut power = theta.clone();
    let mut worst = 0.0f64;
    for k in 1..=max_k {
        if k > 1 {
            power = power.star(&theta).expect("same grid");
        }
        let mut fact = 1.0;
        for m in 1..k {
            fact *= m as f64;
        }
        let exact = GeneralizedKernel::from_fn(grid, 0.0, |tp, t| (tp - t).powi(k as i32 - 1) / fact);
        let scale = exact.sup_norm().max(1.0);
        worst = worst.max(power.distance(&exact).expect("same grid") / scale);
    }
    worst
}

/// The default suite problem: `a = 1, b = 2` constants on `[0, 1]`, `g = 1_∗`.
pub fn default_verify_problem() -> (SumKernel<f64>, GeneralizedKernel<f64>) {
    let grid = Grid::new(0.0, 1.0, 401).expect("valid grid");
    let sk = ConstantKernelOracle::new(1.0, 2.0).sum_kernel(grid).expect("valid components");
    (sk, GeneralizedKernel::identity(grid))
}

/// Every product order worth checking: the reverse and each cyclic shift.
fn alternative_orders(d: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    out.push((0..d).rev().collect());
    for s in 1..d {
        out.push((0..d).map(|k| (k + s) % d).collect());
    }
    out.sort();
    out.dedup();
    out.retain(|o| o.iter().enumerate().any(|(k, &v)| k != v));
    out
}

pub fn verify_suite<S: Scalar>(sk: &SumKernel<S>, g: &GeneralizedKernel<S>, cfg: &SeriesConfig) -> Result<VerifyReport> {
    let cfg = SeriesConfig { track_defect: false, ..*cfg };
    let grid = *sk.grid();
    let h2 = grid.step().powi(2);
    let d = sk.len();

    let res = Resummation::new(sk, None, &cfg)?;
    let (f, report) = res.solve(g, usize::MAX, &cfg)?;
    let c_k = res.kernel().sup_norm();
    let c_t = res.t().sup_norm();
    let c_f = f.sup_norm();
    let tau_q = h2 * 1f64.max(c_k).max(c_t).max(c_f);
    let eps_q = 10.0 * h2;
    let mut checks = Vec::new();

    checks.push(CheckResult::measured(
        "theta_power",
        theta_power_deviation(grid, THETA_POWER_MAX),
        THETA_POWER_TOLERANCE,
        format!("relative sup distance, k <= {THETA_POWER_MAX}"),
    ));

    let mut worst = 0.0f64;
    for n in 1..=CHECKED_ORDERS {
        worst = worst.max(res.truncation_error(g, &f, n)?);
    }
    checks.push(CheckResult::measured(
        "truncation_identity",
        worst,
        10.0 * tau_q,
        format!("max over n <= {CHECKED_ORDERS} of |(f - f^(n-1)) - T^n * f|; series converged: {}", report.converged),
    ));

    if d < 2 {
        checks.push(CheckResult::skipped("permutation_invariance", "single component"));
        checks.push(CheckResult::skipped("alternative_t", "single component"));
    } else {
        let mut worst = 0.0f64;
        for order in alternative_orders(d) {
            let other = res.reordered(&order, &cfg)?;
            let (f_other, _) = other.solve(g, usize::MAX, &cfg)?;
            worst = worst.max(f.distance(&f_other)?);
        }
        checks.push(CheckResult::measured("permutation_invariance", worst, 10.0 * tau_q, "reverse and cyclic shifts"));
        let alt = res.t_alternative()?;
        checks.push(CheckResult::measured("alternative_t", res.t().distance(&alt)?, 10.0 * tau_q, "sup |T - T_alt|"));
    }

    let mut defect = 0.0f64;
    for (c, r) in sk.components().iter().zip(res.resolvents()) {
        let k = c.kernel();
        let rhs = GeneralizedKernel::identity(grid).add(&k.star(&r.resolvent)?)?;
        defect = defect.max(r.resolvent.distance(&rhs)?);
    }
    checks.push(CheckResult::measured(
        "resolvent_defect",
        defect,
        cfg.floor(1.0).max(10.0 * tau_q),
        "max over components of |R - 1 - K * R|",
    ));

    let separable: Vec<_> = sk
        .components()
        .iter()
        .filter_map(|c| match c {
            Component::Separable(s) => Some(s),
            Component::Numeric(_) => None,
        })
        .collect();
    if separable.is_empty() {
        checks.push(CheckResult::skipped("closed_form_vs_neumann", "no separable components"));
    } else {
        let mut worst = 0.0f64;
        for s in separable {
            let numeric = neumann_to_floor(&s.kernel(), &cfg)?;
            worst = worst.max(s.resolvent().distance(&numeric.resolvent)?);
        }
        checks.push(CheckResult::measured("closed_form_vs_neumann", worst, 10.0 * tau_q, "separable components"));
    }

    let analysis = convergence_bounds(sk, g, CHECKED_ORDERS + 1, &cfg, None)?;
    let worst_resolvent = analysis.resolvent_bounds.iter().map(|l| l.ratio).fold(0.0, f64::max);
    checks.push(CheckResult::measured("resolvent_bound", worst_resolvent, 1.0 + eps_q, "max sup|R_i - 1| / (C_i exp(C_i |I|))"));

    let floor = cfg.floor(c_f);
    let ratio = |err: f64, bound: f64| err / (bound * (1.0 + eps_q) + floor);
    let worst_bound = analysis
        .rows
        .iter()
        .map(|r| ratio(r.neumann_error, r.bound_neumann).max(ratio(r.resummed_error, r.bound_resummed)))
        .fold(0.0, f64::max);
    checks.push(CheckResult::measured(
        "bound_validity",
        worst_bound,
        1.0,
        format!("max error / bound over orders 0..={CHECKED_ORDERS}, both series"),
    ));

    let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
    Ok(VerifyReport { t_min: grid.t_min(), t_max: grid.t_max(), n: grid.n_points(), components: d, tau_q, eps_q, checks, passed })
}
