use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::star::GeneralizedKernel;

use super::{ResolventMethod, SeriesConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Neumann,
    Resummed,
}

/// Diagnostics of the partial sum `f^{(order)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub order: usize,
    /// Sup-norm of the term added at this order.
    pub term_norm: f64,
    /// `‖f^{(order)} − g − K∗f^{(order)}‖`, when tracked.
    pub defect: Option<f64>,
    /// [`remainder_bound`] at `n = order + 1` with `C = C_K` or `C_T`.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c_k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_t: Option<f64>,
    pub c_f: f64,
    /// `C_f` is the sup-norm of the computed solution, not of the exact one.
    pub c_f_estimated: bool,
    /// Modulus of the solution's delta coefficient.
    pub c_delta: f64,
    pub interval_length: f64,
}

/// Wall-clock timings; kept out of serialized output unless requested so
/// that reports stay byte-identical across runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub setup_seconds: f64,
    pub series_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: Method,
    pub orders: Vec<OrderRecord>,
    pub constants: Constants,
    /// The last term fell below `max(abs_tol, rel_tol·C_f)`.
    pub converged: bool,
    /// The defect stopped decreasing while above the series floor.
    pub defect_stagnated: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub component_resolvents: Vec<ResolventMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// `C (C_rate |I|)^n / n!`, evaluated as a running product.
pub fn factorial_bound(c_f: f64, rate: f64, length: f64, n: usize) -> f64 {
    (1..=n).fold(c_f, |acc, k| acc * rate * length / k as f64)
}

/// Bound on `‖f̃ − f̃^{(n−1)}‖` for `f = c δ + f̃`:
/// `(C_f + |c| n / |I|) (C_rate |I|)^n / n!`.
///
/// The delta part of `f` contributes `|c| C_rate^n |I|^{n−1} / (n−1)!` on top
/// of `C_f (C_rate |I|)^n / n!`, which only covers the ordinary part.
pub fn remainder_bound(c_f: f64, c_delta: f64, rate: f64, length: f64, n: usize) -> f64 {
    factorial_bound(c_f + c_delta * n as f64 / length, rate, length, n)
}

impl SolveReport {
    pub(crate) fn new<S: Scalar>(
        method: Method,
        mut orders: Vec<OrderRecord>,
        converged: bool,
        k: &GeneralizedKernel<S>,
        c_t: Option<f64>,
        f: &GeneralizedKernel<S>,
        cfg: &SeriesConfig,
    ) -> Self {
        let constants = Constants {
            c_k: k.sup_norm(),
            c_t,
            c_f: f.sup_norm(),
            c_f_estimated: true,
            c_delta: f.delta_coeff().modulus(),
            interval_length: k.grid().length(),
        };
        let rate = match method {
            Method::Neumann => constants.c_k,
            Method::Resummed => c_t.unwrap_or(constants.c_k),
        };
        for r in &mut orders {
            r.bound = remainder_bound(constants.c_f, constants.c_delta, rate, constants.interval_length, r.order + 1);
        }
        let defects: Vec<f64> = orders.iter().filter_map(|r| r.defect).collect();
        let floor = cfg.floor(constants.c_f);
        let defect_stagnated = match defects.as_slice() {
            [.., prev, last] => *last > floor && *last > 0.5 * *prev,
            _ => false,
        };
        Self {
            method,
            orders,
            constants,
            converged,
            defect_stagnated,
            component_resolvents: Vec::new(),
            timings: None,
        }
    }

    pub fn final_order(&self) -> usize {
        self.orders.last().map_or(0, |r| r.order)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite-safe plain data")
    }

    /// `order,term_norm,defect,bound` rows preceded by a `#` constants line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let c = &self.constants;
        writeln!(
            w,
            "# method={},c_k={:.16e},c_t={},c_f={:.16e},c_f_estimated={},c_delta={:.16e},interval_length={:.16e}",
            match self.method {
                Method::Neumann => "neumann",
                Method::Resummed => "resummed",
            },
            c.c_k,
            c.c_t.map_or_else(|| "NA".to_string(), |v| format!("{v:.16e}")),
            c.c_f,
            c.c_f_estimated,
            c.c_delta,
            c.interval_length
        )?;
        writeln!(w, "order,term_norm,defect,bound")?;
        for r in &self.orders {
            let defect = r.defect.map_or_else(|| "NA".to_string(), |d| format!("{d:.16e}"));
            writeln!(w, "{},{:.16e},{},{:.16e}", r.order, r.term_norm, defect, r.bound)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_bound_matches_closed_form() {
        assert_eq!(factorial_bound(2.0, 3.0, 1.0, 0), 2.0);
        assert!((factorial_bound(2.0, 3.0, 1.0, 3) - 2.0 * 27.0 / 6.0).abs() < 1e-15);
        assert_eq!(factorial_bound(1.0, 0.0, 1.0, 2), 0.0);
        // no overflow where the naive power would
        assert!(factorial_bound(1.0, 50.0, 1.0, 400).is_finite());
    }

    #[test]
    fn delta_part_of_remainder() {
        // f = δ, K = cΘ: K^{∗n} ∗ f = c^n Δ^{n−1}/(n−1)! at Δ = |I|
        for n in 1..6 {
            let exact = 2f64.powi(n as i32) * 3f64.powi(n as i32 - 1) / (1..n).product::<usize>() as f64;
            assert!((remainder_bound(0.0, 1.0, 2.0, 3.0, n) - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn timings_are_not_serialized_by_default() {
        let r = SolveReport {
            method: Method::Neumann,
            orders: vec![OrderRecord { order: 0, term_norm: 1.0, defect: Some(0.5), bound: 2.0 }],
            constants: Constants { c_k: 1.0, c_t: None, c_f: 1.0, c_f_estimated: true, c_delta: 0.0, interval_length: 1.0 },
            converged: false,
            defect_stagnated: false,
            component_resolvents: vec![],
            timings: None,
        };
        let json = r.to_json();
        assert!(!json.contains("timings"));
        assert!(!json.contains("c_t"));
        let back: SolveReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.lines().nth(1).unwrap() == "order,term_norm,defect,bound");
        assert!(csv.contains("c_t=NA"));
    }
}
