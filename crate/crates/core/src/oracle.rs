//! Closed-form cylindrical-wave series far fields for circular obstacles:
//! the independent correctness oracle for the Nystrom solvers.
//!
//! For a circle of radius R centered at the origin and a single incident
//! plane wave of direction d, the scattered far field is
//!   u_inf(xhat) = sqrt(2/(pi k)) e^{-i pi/4} sum_m a_m e^{i m (theta_x - theta_d)}
//! with per-mode scattering coefficients a_m determined by the boundary
//! condition. Off-center circles are handled by the translation phase factor
//! e^{i k l .(d - xhat)}, superpositions by linearity.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::incident::PlaneWaveSuperposition;
use crate::solver::{BoundaryCondition, FarFieldPattern};
use crate::special::{jn_seq_c, yn_seq_c};

/// Certified series truncation: the retained maximum mode and the bound on
/// the dropped pattern contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub m_max: usize,
    pub tail_bound: f64,
}

/// Truncation with an a-posteriori tail certificate from the coefficient
/// decay of the scattering series.
pub fn certified_truncation(
    radius: f64,
    bc: &BoundaryCondition,
    k: f64,
) -> Result<SeriesTruncation> {
    let interior = match bc {
        BoundaryCondition::Transmission { n, .. } => Some(Complex64::new(k, 0.0) * n.sqrt()),
        _ => None,
    };
    let mut m_max = truncation_order(k, radius, interior);
    let amp = (2.0 / (PI * k)).sqrt();
    for _ in 0..4 {
        let coeffs = mode_coefficients(radius, bc, k, m_max + 10)?;
        // dropped modes contribute at most 2 amp sum |a_m| to the pattern
        let tail_bound: f64 = coeffs[m_max + 1..]
            .iter()
            .map(|c| 2.0 * amp * c.norm())
            .sum();
        if tail_bound < 1e-13 {
            return Ok(SeriesTruncation { m_max, tail_bound });
        }
        m_max += 20;
    }
    let coeffs = mode_coefficients(radius, bc, k, m_max + 10)?;
    let tail_bound = coeffs[m_max + 1..]
        .iter()
        .map(|c| 2.0 * amp * c.norm())
        .sum();
    Ok(SeriesTruncation { m_max, tail_bound })
}

/// Truncation order ansatz max(20, ceil(|kappa| R) + 15).
fn truncation_order(k: f64, r: f64, interior: Option<Complex64>) -> usize {
    let mut arg = k * r;
    if let Some(ki) = interior {
        arg = arg.max(ki.norm() * r);
    }
    (arg.ceil() as usize + 15).max(20)
}

/// Per-mode scattering coefficients a_0..a_{m_max} for the given condition.
fn mode_coefficients(
    radius: f64,
    bc: &BoundaryCondition,
    k: f64,
    m_max: usize,
) -> Result<Vec<Complex64>> {
    let x = Complex64::new(k * radius, 0.0);
    let j = jn_seq_c(x, m_max + 1);
    let y = yn_seq_c(x, m_max + 1);
    let h: Vec<Complex64> = j
        .iter()
        .zip(&y)
        .map(|(a, b)| a + Complex64::i() * b)
        .collect();
    let jp = |m: usize| -> Complex64 {
        if m == 0 {
            -j[1]
        } else {
            0.5 * (j[m - 1] - j[m + 1])
        }
    };
    let hp = |m: usize| -> Complex64 {
        if m == 0 {
            -h[1]
        } else {
            0.5 * (h[m - 1] - h[m + 1])
        }
    };

    let mut out = Vec::with_capacity(m_max + 1);
    match bc {
        BoundaryCondition::Dirichlet => {
            for m in 0..=m_max {
                out.push(-j[m] / h[m]);
            }
        }
        BoundaryCondition::Neumann => {
            for m in 0..=m_max {
                out.push(-jp(m) / hp(m));
            }
        }
        BoundaryCondition::Impedance { mu } => {
            let q = mu / k;
            for m in 0..=m_max {
                out.push(-(jp(m) + q * j[m]) / (hp(m) + q * h[m]));
            }
        }
        BoundaryCondition::Transmission { n, lambda } => {
            let ki = Complex64::new(k, 0.0) * n.sqrt();
            let xi = ki * radius;
            let ji = jn_seq_c(xi, m_max + 1);
            let jip = |m: usize| -> Complex64 {
                if m == 0 {
                    -ji[1]
                } else {
                    0.5 * (ji[m - 1] - ji[m + 1])
                }
            };
            // interface system per mode for (a_m, b_m):
            //   a_m H_m(kR)  - b_m J_m(ki R)            = -J_m(kR)
            //   a_m k H'_m(kR) - b_m lambda ki J'_m(ki R) = -k J'_m(kR)
            for m in 0..=m_max {
                let a11 = h[m];
                let a12 = -ji[m];
                let a21 = k * hp(m);
                let a22 = -lambda * ki * jip(m);
                let det = a11 * a22 - a12 * a21;
                // cancellation-aware test: the products are huge for large
                // orders even when the mode is perfectly solvable
                let scale = (a11 * a22).norm() + (a12 * a21).norm();
                if det.norm() < 1e-12 * scale {
                    return Err(Error::SingularSystem(format!(
                        "transmission interface mode {m} singular at k = {k} (near an interior resonance)"
                    )));
                }
                let b1 = -j[m];
                let b2 = -k * jp(m);
                out.push((b1 * a22 - a12 * b2) / det);
            }
        }
    }
    Ok(out)
}

/// Series far field of a circle for a single plane wave.
pub fn series_farfield(
    radius: f64,
    center: [f64; 2],
    bc: &BoundaryCondition,
    k: f64,
    dir: [f64; 2],
    n_f: usize,
) -> Result<FarFieldPattern> {
    if radius <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    bc.validate()?;
    let interior = match bc {
        BoundaryCondition::Transmission { n, .. } => Some(Complex64::new(k, 0.0) * n.sqrt()),
        _ => None,
    };
    let mut m_max = truncation_order(k, radius, interior);
    let mut coeffs = mode_coefficients(radius, bc, k, m_max)?;
    // certify the tail; extend once if the decay has not set in yet
    let max_c = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_c > 0.0 && coeffs[m_max].norm() > 1e-13 * max_c {
        m_max += 20;
        coeffs = mode_coefficients(radius, bc, k, m_max)?;
    }

    let amp = (2.0 / (PI * k)).sqrt() * (-Complex64::i() * PI / 4.0).exp();
    let theta_d = dir[1].atan2(dir[0]);
    let mut samples = Vec::with_capacity(n_f);
    for jj in 0..n_f {
        let th = 2.0 * PI * jj as f64 / n_f as f64;
        let xhat = [th.cos(), th.sin()];
        // sum over modes -m_max..m_max with a_{-m} = a_m
        let mut acc = coeffs[0];
        for (m, c) in coeffs.iter().enumerate().skip(1) {
            let phase = (m as f64) * (th - theta_d);
            acc += c * 2.0 * phase.cos();
        }
        // translation phase for the off-center circle
        let shift = self_phase(k, center, dir, xhat);
        samples.push(amp * acc * shift);
    }
    FarFieldPattern::new(k, vec![dir], samples)
}

/// e^{i k l.(d - xhat)}: far-field phase factor of an obstacle shifted by l.
fn self_phase(k: f64, l: [f64; 2], d: [f64; 2], xhat: [f64; 2]) -> Complex64 {
    (Complex64::i() * k * (l[0] * (d[0] - xhat[0]) + l[1] * (d[1] - xhat[1]))).exp()
}

/// Series far field for a superposition of plane waves (by linearity).
pub fn series_farfield_superposition(
    radius: f64,
    center: [f64; 2],
    bc: &BoundaryCondition,
    w: &PlaneWaveSuperposition,
    n_f: usize,
) -> Result<FarFieldPattern> {
    let mut total: Option<FarFieldPattern> = None;
    for d in &w.dirs {
        let part = series_farfield(radius, center, bc, w.k, *d, n_f)?;
        total = Some(match total {
            None => part,
            Some(mut acc) => {
                for (a, b) in acc.samples.iter_mut().zip(&part.samples) {
                    *a += b;
                }
                acc
            }
        });
    }
    let mut far = total.expect("superposition has at least one direction");
    far.directions = w.dirs.clone();
    Ok(far)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_contrast_transmission_scatters_nothing() {
        let bc = BoundaryCondition::Transmission {
            n: Complex64::new(1.0, 0.0),
            lambda: 1.0,
        };
        let far = series_farfield(1.0, [0.0, 0.0], &bc, 2.0, [1.0, 0.0], 32).unwrap();
        assert!(far.sup_norm() < 1e-13);
    }

    #[test]
    fn dirichlet_mode_coefficients_bounded_by_one() {
        let coeffs = mode_coefficients(1.0, &BoundaryCondition::Dirichlet, 5.0, 40).unwrap();
        for c in coeffs {
            assert!(c.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn impedance_large_mu_approaches_dirichlet() {
        let k = 3.0;
        let hard = series_farfield(
            1.0,
            [0.0, 0.0],
            &BoundaryCondition::Impedance { mu: 1e6 },
            k,
            [1.0, 0.0],
            64,
        )
        .unwrap();
        let soft =
            series_farfield(1.0, [0.0, 0.0], &BoundaryCondition::Dirichlet, k, [1.0, 0.0], 64)
                .unwrap();
        let rel = hard.sup_diff(&soft) / soft.sup_norm();
        assert!(rel < 1e-4, "impedance limit rel diff {rel:e}");
    }

    #[test]
    fn low_frequency_pattern_nearly_constant() {
        let far = series_farfield(
            1.0,
            [0.0, 0.0],
            &BoundaryCondition::Dirichlet,
            0.01,
            [1.0, 0.0],
            64,
        )
        .unwrap();
        let vals: Vec<f64> = far.samples.iter().map(|v| v.norm()).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
        assert!(spread < 0.01 * mean, "variation {spread:e} vs mean {mean:e}");
    }

    #[test]
    fn shifted_oracle_is_phase_multiplied_centered_oracle() {
        let k = 2.0;
        let d = [0.6, 0.8];
        let center = [0.3, -0.7];
        let bc = BoundaryCondition::Neumann;
        let shifted = series_farfield(1.0, center, &bc, k, d, 48).unwrap();
        let centered = series_farfield(1.0, [0.0, 0.0], &bc, k, d, 48).unwrap();
        for j in 0..48 {
            let xhat = centered.observation_dir(j);
            let want = centered.samples[j] * self_phase(k, center, d, xhat);
            assert!((shifted.samples[j] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn certified_truncation_bounds_the_tail() {
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Transmission {
                n: Complex64::new(0.64, 0.0),
                lambda: 1.2,
            },
        ] {
            let t = certified_truncation(1.0, &bc, 11.0).unwrap();
            assert!(t.tail_bound < 1e-13, "tail bound {:e}", t.tail_bound);
            assert!(t.m_max >= 26);
        }
    }

    #[test]
    fn doubling_truncation_changes_nothing() {
        let k = 7.0;
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::Impedance { mu: 2.0 },
            BoundaryCondition::Transmission {
                n: Complex64::new(0.64, 0.0),
                lambda: 1.2,
            },
        ] {
            let m0 = truncation_order(k, 1.0, None);
            let c1 = mode_coefficients(1.0, &bc, k, m0).unwrap();
            let c2 = mode_coefficients(1.0, &bc, k, 2 * m0).unwrap();
            let amp = (2.0 / (PI * k)).sqrt();
            // pattern difference is bounded by 2 amp sum of dropped coefficients
            let tail: f64 = c2[m0 + 1..].iter().map(|c| 2.0 * amp * c.norm()).sum();
            assert!(tail < 1e-13, "tail {tail:e}");
            for (a, b) in c1.iter().zip(&c2) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
