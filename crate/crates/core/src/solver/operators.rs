//! Assembly of the parametrized boundary integral operators for one curve and
//! one (possibly complex) wavenumber: single layer S, double layer K, adjoint
//! double layer K', and the hypersingular operator T in its Maue form
//! T = diag(1/|gamma'|) D Q D + kappa^2 S_nn, where Q is the single layer
//! acting on parametric derivatives and S_nn the normal-weighted single layer.
//!
//! Every weakly singular kernel is split as K1(t,s) ln(4 sin^2((t-s)/2)) +
//! K2(t,s) with smooth K1, K2 and assembled with the dedicated log-quadrature
//! weights plus the trapezoidal rule.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::linalg::CMat;
use crate::special::{h1_pair, jn_seq_c, EULER_GAMMA};

use super::grid::NystromGrid;

pub struct LayerOps {
    pub kappa: Complex64,
    /// single layer (with arclength factor)
    pub s: CMat,
    /// double layer
    pub k: CMat,
    /// adjoint double layer
    pub kp: CMat,
    /// hypersingular operator in Maue form
    pub t: CMat,
}

pub fn assemble_layer_ops(grid: &NystromGrid, kappa: Complex64, diff: &[f64]) -> LayerOps {
    let n = grid.len();
    let mut s = CMat::zeros(n, n);
    let mut k = CMat::zeros(n, n);
    let mut kp = CMat::zeros(n, n);
    let mut q = CMat::zeros(n, n);
    let mut snn = CMat::zeros(n, n);

    let i4 = Complex64::new(0.0, 0.25);
    let quarter_pi_inv = 1.0 / (4.0 * PI);
    let tz = grid.trapez;

    for i in 0..n {
        let ji = &grid.jets[i];
        for j in 0..n {
            if i == j {
                continue;
            }
            let jj = &grid.jets[j];
            let dx = jj.point[0] - ji.point[0];
            let dy = jj.point[1] - ji.point[1];
            let r = (dx * dx + dy * dy).sqrt();
            let z = kappa * r;
            let (h0, h1) = h1_pair(z);
            let js = jn_seq_c(z, 1);
            let (j0, j1) = (js[0], js[1]);

            let dt = 0.5 * (grid.nodes[i] - grid.nodes[j]);
            let log_term = (4.0 * dt.sin() * dt.sin()).ln();
            let rw = grid.log_weight(i, j);

            // single layer, with and without the arclength factor
            let m_full = i4 * h0;
            let m1 = -j0 * quarter_pi_inv;
            let m2 = m_full - m1 * log_term;
            let q_entry = rw * m1 + tz * m2;
            *q.at_mut(i, j) = q_entry;
            *s.at_mut(i, j) = q_entry * jj.speed;

            // normal-weighted single layer
            let nn = ji.normal[0] * jj.normal[0] + ji.normal[1] * jj.normal[1];
            *snn.at_mut(i, j) = q_entry * (nn * jj.speed);

            // double layer: kernel -(i kappa/4) H1(z) nu(s).(y-x)/r |gamma'(s)|
            let wd = (jj.normal[0] * dx + jj.normal[1] * dy) / r * jj.speed;
            let d_full = -Complex64::i() * kappa * 0.25 * h1 * wd;
            let d1 = kappa * quarter_pi_inv * j1 * wd;
            *k.at_mut(i, j) = rw * d1 + tz * (d_full - d1 * log_term);

            // adjoint double layer: nu(t).(x-y)
            let wa = -(ji.normal[0] * dx + ji.normal[1] * dy) / r * jj.speed;
            let a_full = -Complex64::i() * kappa * 0.25 * h1 * wa;
            let a1 = kappa * quarter_pi_inv * j1 * wa;
            *kp.at_mut(i, j) = rw * a1 + tz * (a_full - a1 * log_term);
        }

        // diagonal limits
        let ji = &grid.jets[i];
        let sp = ji.speed;
        let log_scale = (kappa * sp * 0.5).ln();
        let diag_m1 = Complex64::new(-quarter_pi_inv, 0.0);
        let diag_m2 =
            Complex64::new(0.0, 0.25) - (log_scale + EULER_GAMMA) / (2.0 * PI);
        let q_diag = grid.log_w[0] * diag_m1 + tz * diag_m2;
        *q.at_mut(i, i) = q_diag;
        *s.at_mut(i, i) = q_diag * sp;
        *snn.at_mut(i, i) = q_diag * sp;

        let curv = (ji.normal[0] * ji.d2[0] + ji.normal[1] * ji.d2[1]) / (4.0 * PI * sp);
        *k.at_mut(i, i) = Complex64::new(tz * curv, 0.0);
        *kp.at_mut(i, i) = Complex64::new(tz * curv, 0.0);
    }

    // Maue form of the hypersingular operator
    let dq = q.real_mul_left(diff, n).real_mul_right(diff, n);
    let mut t = snn.clone();
    t.scale(kappa * kappa);
    for i in 0..n {
        let inv_sp = Complex64::new(1.0 / grid.jets[i].speed, 0.0);
        for j in 0..n {
            *t.at_mut(i, j) += inv_sp * dq.at(i, j);
        }
    }

    LayerOps {
        kappa,
        s,
        k,
        kp,
        t,
    }
}
