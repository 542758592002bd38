//! Uniform Nystrom grid on [0, 2pi) with the trigonometric-interpolation
//! quadrature for logarithmic singularities and the spectral differentiation
//! matrix.
//!
//! Quadrature: for 2n nodes t_j = j pi/n,
//!   int_0^{2pi} ln(4 sin^2((t-s)/2)) f(s) ds  ~=  sum_j R_{|i-j|} f(t_j)
//! with
//!   R_m = -(2pi/n) sum_{p=1}^{n-1} cos(p m pi/n)/p - (pi/n^2) (-1)^m,
//! while smooth parts use the trapezoidal rule with weight pi/n.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::{Curve, CurveJet};

#[derive(Debug, Clone)]
pub struct NystromGrid {
    /// half the node count
    pub n_q: usize,
    /// parameter values t_j = j pi / n_q, j = 0..2 n_q
    pub nodes: Vec<f64>,
    pub jets: Vec<CurveJet>,
    /// log-quadrature weights R_m indexed by m = (i - j) mod 2 n_q
    pub log_w: Vec<f64>,
    /// trapezoidal weight pi / n_q
    pub trapez: f64,
}

impl NystromGrid {
    pub fn build(curve: &Curve, n_q: usize) -> Result<Self> {
        assert!(n_q >= 2);
        let n = 2 * n_q;
        let nodes: Vec<f64> = (0..n).map(|j| PI * j as f64 / n_q as f64).collect();
        let jets = nodes
            .iter()
            .map(|&t| curve.jet(t))
            .collect::<Result<Vec<_>>>()?;
        let log_w = log_weights(n_q);
        Ok(Self {
            n_q,
            nodes,
            jets,
            log_w,
            trapez: PI / n_q as f64,
        })
    }

    /// Size of the collocation system (number of nodes).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        2 * self.n_q
    }

    #[inline]
    pub fn log_weight(&self, i: usize, j: usize) -> f64 {
        let n = self.len();
        let m = (i + n - j) % n;
        self.log_w[m]
    }

    /// Trigonometric differentiation matrix (row-major, len^2).
    pub fn diff_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let diff = (i as isize - j as isize) as f64;
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                d[i * n + j] = 0.5 * sign / ((diff * PI / (2.0 * self.n_q as f64)).tan());
            }
        }
        d
    }

    /// Spectral derivative of a sampled periodic function.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len();
        let d = self.diff_matrix();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += d[i * n + j] * values[j];
            }
            out[i] = acc;
        }
        out
    }
}

fn log_weights(n_q: usize) -> Vec<f64> {
    let n = 2 * n_q;
    let nf = n_q as f64;
    let mut w = vec![0.0; n];
    for (m, slot) in w.iter_mut().enumerate() {
        let mut acc = 0.0;
        for p in 1..n_q {
            acc += ((p * m) as f64 * PI / nf).cos() / p as f64;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *slot = -(2.0 * PI / nf) * acc - PI / (nf * nf) * sign;
    }
    w
}
