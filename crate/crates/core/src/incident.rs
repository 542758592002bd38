//! Plane-wave incident fields and their boundary trace data.
//!
//! The incident field is a superposition of one or two unit-amplitude plane
//! waves, u^i(x) = sum_j exp(i k d_j . x). Directions are stored as unit
//! vectors; angles are accepted at the configuration boundary only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveJet};
use crate::solver::BoundaryCondition;

/// Superposition of one or two unit plane waves at a common wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveSuperposition {
    pub k: f64,
    pub dirs: Vec<[f64; 2]>,
}

impl PlaneWaveSuperposition {
    pub fn new(k: f64, dirs: Vec<[f64; 2]>) -> Result<Self> {
        if k <= 0.0 {
            return Err(Error::InvalidConfig(format!("wavenumber must be > 0, got {k}")));
        }
        if dirs.is_empty() || dirs.len() > 2 {
            return Err(Error::InvalidConfig(format!(
                "expected 1 or 2 incident directions, got {}",
                dirs.len()
            )));
        }
        for d in &dirs {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if (len - 1.0).abs() > 1e-14 {
                return Err(Error::InvalidConfig(format!(
                    "incident direction ({}, {}) is not unit length",
                    d[0], d[1]
                )));
            }
        }
        if dirs.len() == 2 && dirs[0] == dirs[1] {
            return Err(Error::InvalidConfig(
                "the two incident directions must differ".into(),
            ));
        }
        Ok(Self { k, dirs })
    }

    pub fn single(k: f64, dir: [f64; 2]) -> Result<Self> {
        Self::new(k, vec![dir])
    }

    pub fn from_angles(k: f64, angles: &[f64]) -> Result<Self> {
        let dirs = angles.iter().map(|&a| [a.cos(), a.sin()]).collect();
        Self::new(k, dirs)
    }

    /// u^i(x).
    pub fn field_value(&self, x: [f64; 2]) -> Complex64 {
        self.dirs
            .iter()
            .map(|d| (Complex64::i() * self.k * (d[0] * x[0] + d[1] * x[1])).exp())
            .sum()
    }

    /// grad u^i(x).
    pub fn gradient(&self, x: [f64; 2]) -> [Complex64; 2] {
        let mut g = [Complex64::new(0.0, 0.0); 2];
        for d in &self.dirs {
            let e = (Complex64::i() * self.k * (d[0] * x[0] + d[1] * x[1])).exp();
            let ik = Complex64::i() * self.k;
            g[0] += ik * d[0] * e;
            g[1] += ik * d[1] * e;
        }
        g
    }

    /// u^i and its normal derivative at a boundary jet.
    pub fn value_and_normal_derivative(&self, jet: &CurveJet) -> (Complex64, Complex64) {
        let v = self.field_value(jet.point);
        let g = self.gradient(jet.point);
        (v, g[0] * jet.normal[0] + g[1] * jet.normal[1])
    }
}

/// Boundary datum of the scattering problem: a single value for the scalar
/// boundary conditions, a pair (f1, f2) for the transmission problem.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceData {
    Scalar(Complex64),
    Pair(Complex64, Complex64),
}

/// Right-hand side data f (or (f1, f2)) of the scattered-field problem at
/// parameter t: f = -u^i (Dirichlet), -du^i/dnu (Neumann),
/// -(du^i/dnu + mu u^i) (impedance), and (-u^i, -du^i/dnu) (transmission).
pub fn trace_data(
    w: &PlaneWaveSuperposition,
    curve: &Curve,
    t: f64,
    bc: &BoundaryCondition,
) -> Result<TraceData> {
    let jet = curve.jet(t)?;
    let (v, dv) = w.value_and_normal_derivative(&jet);
    Ok(match bc {
        BoundaryCondition::Dirichlet => TraceData::Scalar(-v),
        BoundaryCondition::Neumann => TraceData::Scalar(-dv),
        BoundaryCondition::Impedance { mu } => TraceData::Scalar(-(dv + mu * v)),
        BoundaryCondition::Transmission { .. } => TraceData::Pair(-v, -dv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BenchmarkCurve;
    use std::f64::consts::PI;

    #[test]
    fn field_values() {
        let w = PlaneWaveSuperposition::single(1.0, [1.0, 0.0]).unwrap();
        assert_eq!(w.field_value([0.0, 0.0]), Complex64::new(1.0, 0.0));

        let w2 = PlaneWaveSuperposition::new(1.0, vec![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let v = w2.field_value([0.0, 0.0]);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);

        let wpi = PlaneWaveSuperposition::single(PI, [1.0, 0.0]).unwrap();
        let v = wpi.field_value([1.0, 0.0]);
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn rejects_bad_directions() {
        assert!(PlaneWaveSuperposition::new(1.0, vec![[1.0, 0.1]]).is_err());
        assert!(PlaneWaveSuperposition::new(1.0, vec![[1.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(PlaneWaveSuperposition::new(0.0, vec![[1.0, 0.0]]).is_err());
    }

    #[test]
    fn traces_on_unit_circle() {
        let circle = Curve::Benchmark(BenchmarkCurve::Circle {
            r0: 1.0,
            center: [0.0, 0.0],
        });
        let w = PlaneWaveSuperposition::single(1.0, [1.0, 0.0]).unwrap();
        let e_i = Complex64::new(1.0f64.cos(), 1.0f64.sin()); // exp(i)

        match trace_data(&w, &circle, 0.0, &BoundaryCondition::Dirichlet).unwrap() {
            TraceData::Scalar(v) => assert!((v + e_i).norm() < 1e-14),
            _ => panic!(),
        }
        // d.nu = 1 at t = 0, so du^i/dnu = i exp(i)
        match trace_data(&w, &circle, 0.0, &BoundaryCondition::Neumann).unwrap() {
            TraceData::Scalar(v) => assert!((v + Complex64::i() * e_i).norm() < 1e-14),
            _ => panic!(),
        }
        match trace_data(&w, &circle, 0.0, &BoundaryCondition::Impedance { mu: 2.0 }).unwrap() {
            TraceData::Scalar(v) => {
                assert!((v + (Complex64::new(2.0, 1.0)) * e_i).norm() < 1e-14)
            }
            _ => panic!(),
        }
    }

    #[test]
    fn trace_linearity_in_superposition() {
        let curve = Curve::Benchmark(BenchmarkCurve::AppleShaped);
        let k = 2.4;
        let (d1, d2) = ([0.6, 0.8], [-1.0, 0.0]);
        let w12 = PlaneWaveSuperposition::new(k, vec![d1, d2]).unwrap();
        let w1 = PlaneWaveSuperposition::single(k, d1).unwrap();
        let w2 = PlaneWaveSuperposition::single(k, d2).unwrap();
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::Impedance { mu: 1.3 },
        ] {
            for i in 0..9 {
                let t = 0.7 * i as f64;
                let all = trace_data(&w12, &curve, t, &bc).unwrap();
                let a = trace_data(&w1, &curve, t, &bc).unwrap();
                let b = trace_data(&w2, &curve, t, &bc).unwrap();
                match (all, a, b) {
                    (TraceData::Scalar(s), TraceData::Scalar(x), TraceData::Scalar(y)) => {
                        assert!((s - (x + y)).norm() < 1e-14)
                    }
                    _ => panic!(),
                }
            }
        }
    }

    #[test]
    fn helmholtz_residual_by_finite_differences() {
        let w = PlaneWaveSuperposition::new(3.0, vec![[0.6, 0.8], [0.0, -1.0]]).unwrap();
        let h = 4e-4;
        let k2 = w.k * w.k;
        for &x in &[[0.3, -0.4], [1.1, 0.7], [-0.5, 0.2]] {
            let c = w.field_value(x);
            let lap = (w.field_value([x[0] + h, x[1]])
                + w.field_value([x[0] - h, x[1]])
                + w.field_value([x[0], x[1] + h])
                + w.field_value([x[0], x[1] - h])
                - 4.0 * c)
                / (h * h);
            let resid = (lap + k2 * c).norm();
            assert!(resid < 1e-6 * k2, "residual {resid:e}");
        }
    }
}
