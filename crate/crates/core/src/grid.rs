//! Uniform grids and the trapezoidal quadrature shared by every operand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform discretization of `I = [t_min, t_max]` with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    t_min: f64,
    t_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, n_points: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_max > t_min && n_points >= 2) {
            return Err(Error::InvalidGrid { t_min, t_max, n_points });
        }
        Ok(Self { t_min, t_max, n_points })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn step(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_points - 1) as f64
    }

    /// `|I|`.
    pub fn length(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn node(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.t_max
        } else {
            self.t_min + k as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|k| self.node(k))
    }

    /// Index of the node closest to `t`, if `t` lies in the interval.
    pub fn nearest_node(&self, t: f64) -> Option<usize> {
        if t < self.t_min - 0.5 * self.step() || t > self.t_max + 0.5 * self.step() {
            return None;
        }
        let k = ((t - self.t_min) / self.step()).round() as usize;
        Some(k.min(self.n_points - 1))
    }

    /// The grid with twice the resolution (`2n - 1` nodes) over the same interval.
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }

    /// Trapezoid rule over consecutive samples spaced by the grid step.
    /// Zero for fewer than two samples.
    pub fn trapezoid<S: Scalar>(&self, samples: &[S]) -> S {
        match samples {
            [] | [_] => S::zero(),
            [first, inner @ .., last] => {
                let mut acc = (*first + *last).scale(0.5);
                for v in inner {
                    acc += *v;
                }
                acc.scale(self.step())
            }
        }
    }

    /// Running trapezoid integral from node 0; `out[0] = 0`.
    pub fn cumulative_trapezoid<S: Scalar>(&self, samples: &[S]) -> Vec<S> {
        let half_h = 0.5 * self.step();
        let mut out = Vec::with_capacity(samples.len());
        let mut acc = S::zero();
        out.push(acc);
        for w in samples.windows(2) {
            acc += (w[0] + w[1]).scale(half_h);
            out.push(acc);
        }
        out.truncate(samples.len());
        out
    }
}
