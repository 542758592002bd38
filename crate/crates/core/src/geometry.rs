//! Closed boundary curves and their differential geometry.
//!
//! The inversion unknown is a starlike curve: a center plus a radial
//! trigonometric polynomial. Benchmark obstacles (circle, apple, kite,
//! rounded triangle) carry their closed-form parametrizations. All curves
//! are traversed counter-clockwise so the outward normal is
//! `(y', -x')/|gamma'|`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Grid size used for positivity and orthogonality spot checks.
pub const GEOMETRY_CHECK_GRID: usize = 512;

/// Radial floor enforced on inversion iterates.
pub const RADIAL_FLOOR: f64 = 0.05;

/// r(theta) = alpha_0 + sum_{l=1}^{M} [alpha_l cos(l theta) + alpha_{l+M} sin(l theta)].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    order: usize,
    coeffs: Vec<f64>,
}

impl TrigPolynomial {
    pub fn new(order: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 2 * order + 1 {
            return Err(Error::InvalidConfig(format!(
                "trig polynomial of order {order} needs {} coefficients, got {}",
                2 * order + 1,
                coeffs.len()
            )));
        }
        Ok(Self { order, coeffs })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            order: 0,
            coeffs: vec![value],
        }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![0.0; 2 * order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.jet(theta).0
    }

    /// Value, first and second derivative at theta.
    pub fn jet(&self, theta: f64) -> (f64, f64, f64) {
        let m = self.order;
        let mut v = self.coeffs[0];
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for l in 1..=m {
            let lf = l as f64;
            let (s, c) = (lf * theta).sin_cos();
            let a = self.coeffs[l];
            let b = self.coeffs[l + m];
            v += a * c + b * s;
            d1 += lf * (-a * s + b * c);
            d2 += lf * lf * (-a * c - b * s);
        }
        (v, d1, d2)
    }

    /// Minimum over a uniform grid.
    pub fn min_on_grid(&self, n: usize) -> f64 {
        (0..n)
            .map(|i| self.eval(2.0 * PI * i as f64 / n as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Squared Sobolev H^s norm of a radial trigonometric polynomial:
/// 2 pi a_0^2 + pi sum_l (1+l^2)^s (a_l^2 + a_{l+M}^2).
pub fn hs_norm_squared(p: &TrigPolynomial, s: f64) -> f64 {
    let m = p.order();
    let c = p.coeffs();
    let mut out = 2.0 * PI * c[0] * c[0];
    for l in 1..=m {
        let w = (1.0 + (l * l) as f64).powf(s);
        out += PI * w * (c[l] * c[l] + c[l + m] * c[l + m]);
    }
    out
}

/// Diagonal of the H^s quadratic form in coefficient order
/// [a_0, a_1..a_M, a_{M+1}..a_{2M}].
pub fn hs_penalty_diagonal(order: usize, s: f64) -> Vec<f64> {
    let mut d = vec![0.0; 2 * order + 1];
    d[0] = 2.0 * PI;
    for l in 1..=order {
        let w = PI * (1.0 + (l * l) as f64).powf(s);
        d[l] = w;
        d[l + order] = w;
    }
    d
}

/// Starlike curve gamma(t) = center + r(t) (cos t, sin t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarlikeCurve {
    pub center: [f64; 2],
    #[serde(rename = "alpha", with = "radial_serde")]
    pub radial: TrigPolynomial,
}

/// Serialize the radial polynomial as the bare coefficient list `alpha`.
mod radial_serde {
    use super::TrigPolynomial;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &TrigPolynomial, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(p.coeffs())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<TrigPolynomial, D::Error> {
        let coeffs: Vec<f64> = serde::Deserialize::deserialize(d)?;
        if coeffs.len().is_multiple_of(2) {
            return Err(serde::de::Error::custom(
                "alpha must have odd length 2M+1",
            ));
        }
        let order = (coeffs.len() - 1) / 2;
        TrigPolynomial::new(order, coeffs).map_err(serde::de::Error::custom)
    }
}

impl StarlikeCurve {
    pub fn new(center: [f64; 2], radial: TrigPolynomial) -> Self {
        Self { center, radial }
    }

    pub fn circle(r0: f64, center: [f64; 2]) -> Self {
        Self::new(center, TrigPolynomial::constant(r0))
    }

    /// Circle of radius r0 embedded in an order-M coefficient space.
    pub fn circle_with_order(r0: f64, center: [f64; 2], order: usize) -> Self {
        let mut radial = TrigPolynomial::zero(order);
        radial.coeffs_mut()[0] = r0;
        Self::new(center, radial)
    }

    pub fn min_radius(&self) -> f64 {
        self.radial.min_on_grid(GEOMETRY_CHECK_GRID)
    }
}

/// Fixed benchmark obstacles with closed-form parametrizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkCurve {
    Circle { r0: f64, center: [f64; 2] },
    AppleShaped,
    KiteShaped,
    RoundedTriangle,
}

/// Parametric perturbation field h(t) = shift + radial(t) (cos t, sin t).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePerturbation {
    pub shift: [f64; 2],
    pub radial: TrigPolynomial,
}

impl CurvePerturbation {
    pub fn translation(shift: [f64; 2]) -> Self {
        Self {
            shift,
            radial: TrigPolynomial::constant(0.0),
        }
    }

    pub fn radial(radial: TrigPolynomial) -> Self {
        Self {
            shift: [0.0, 0.0],
            radial,
        }
    }

    pub fn value(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        let r = self.radial.eval(t);
        [self.shift[0] + r * c, self.shift[1] + r * s]
    }

    fn jet(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let (s, c) = t.sin_cos();
        let (r, r1, r2) = self.radial.jet(t);
        let p = [self.shift[0] + r * c, self.shift[1] + r * s];
        let d1 = [r1 * c - r * s, r1 * s + r * c];
        let d2 = [(r2 - r) * c - 2.0 * r1 * s, (r2 - r) * s + 2.0 * r1 * c];
        (p, d1, d2)
    }
}

/// Any closed C^2 boundary curve the solver can handle.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Starlike(StarlikeCurve),
    Benchmark(BenchmarkCurve),
    /// base curve translated by a fixed offset
    Translated { base: Box<Curve>, offset: [f64; 2] },
    /// base curve plus eps * h(t); used by finite-difference oracles
    Perturbed {
        base: Box<Curve>,
        h: CurvePerturbation,
        eps: f64,
    },
}

/// Pointwise differential data of a curve at parameter t.
#[derive(Debug, Clone, Copy)]
pub struct CurveJet {
    pub point: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
    /// unit outward normal
    pub normal: [f64; 2],
    /// |gamma'(t)|
    pub speed: f64,
}

impl From<StarlikeCurve> for Curve {
    fn from(c: StarlikeCurve) -> Self {
        Curve::Starlike(c)
    }
}

impl From<BenchmarkCurve> for Curve {
    fn from(c: BenchmarkCurve) -> Self {
        Curve::Benchmark(c)
    }
}

impl Curve {
    pub fn translated(self, offset: [f64; 2]) -> Curve {
        Curve::Translated {
            base: Box::new(self),
            offset,
        }
    }

    pub fn perturbed(self, h: CurvePerturbation, eps: f64) -> Curve {
        Curve::Perturbed {
            base: Box::new(self),
            h,
            eps,
        }
    }

    /// gamma(t).
    pub fn point(&self, t: f64) -> [f64; 2] {
        self.raw_jet(t).0
    }

    fn raw_jet(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        match self {
            Curve::Starlike(c) => {
                let (s, sn) = (t.sin(), t.cos());
                let (cs, si) = (sn, s);
                let (r, r1, r2) = c.radial.jet(t);
                let p = [c.center[0] + r * cs, c.center[1] + r * si];
                let d1 = [r1 * cs - r * si, r1 * si + r * cs];
                let d2 = [(r2 - r) * cs - 2.0 * r1 * si, (r2 - r) * si + 2.0 * r1 * cs];
                (p, d1, d2)
            }
            Curve::Benchmark(b) => benchmark_jet(b, t),
            Curve::Translated { base, offset } => {
                let (p, d1, d2) = base.raw_jet(t);
                ([p[0] + offset[0], p[1] + offset[1]], d1, d2)
            }
            Curve::Perturbed { base, h, eps } => {
                let (p, d1, d2) = base.raw_jet(t);
                let (hp, hd1, hd2) = h.jet(t);
                (
                    [p[0] + eps * hp[0], p[1] + eps * hp[1]],
                    [d1[0] + eps * hd1[0], d1[1] + eps * hd1[1]],
                    [d2[0] + eps * hd2[0], d2[1] + eps * hd2[1]],
                )
            }
        }
    }

    /// Point, derivatives, outward normal and arclength element at t.
    pub fn jet(&self, t: f64) -> Result<CurveJet> {
        let (point, d1, d2) = self.raw_jet(t);
        let speed = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
        if speed < 1e-12 {
            return Err(Error::DegenerateCurve { t, speed });
        }
        Ok(CurveJet {
            point,
            d1,
            d2,
            normal: [d1[1] / speed, -d1[0] / speed],
            speed,
        })
    }

    /// Sampled polyline (t_i, x_i, y_i) on a uniform parameter grid.
    pub fn sample_polyline(&self, n: usize) -> Vec<(f64, f64, f64)> {
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let p = self.point(t);
                (t, p[0], p[1])
            })
            .collect()
    }
}

fn benchmark_jet(b: &BenchmarkCurve, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let (s, c) = t.sin_cos();
    match b {
        BenchmarkCurve::Circle { r0, center } => (
            [center[0] + r0 * c, center[1] + r0 * s],
            [-r0 * s, r0 * c],
            [-r0 * c, -r0 * s],
        ),
        BenchmarkCurve::AppleShaped => {
            // r(t) = (0.5 + 0.4 cos t + 0.1 sin 2t) / (1 + 0.7 cos t)
            let (s2, c2) = (2.0 * t).sin_cos();
            let num = 0.5 + 0.4 * c + 0.1 * s2;
            let num1 = -0.4 * s + 0.2 * c2;
            let num2 = -0.4 * c - 0.4 * s2;
            let den = 1.0 + 0.7 * c;
            let den1 = -0.7 * s;
            let den2 = -0.7 * c;
            let r = num / den;
            let r1 = (num1 * den - num * den1) / (den * den);
            let r2 = ((num2 * den - num * den2) * den - 2.0 * den1 * (num1 * den - num * den1))
                / (den * den * den);
            radial_jet(r, r1, r2, s, c)
        }
        BenchmarkCurve::KiteShaped => {
            let (s2, c2) = (2.0 * t).sin_cos();
            (
                [c + 0.65 * c2 - 0.65, 1.5 * s],
                [-s - 1.3 * s2, 1.5 * c],
                [-c - 2.6 * c2, -1.5 * s],
            )
        }
        BenchmarkCurve::RoundedTriangle => {
            // r(t) = 2 + 0.3 cos 3t
            let (s3, c3) = (3.0 * t).sin_cos();
            let r = 2.0 + 0.3 * c3;
            let r1 = -0.9 * s3;
            let r2 = -2.7 * c3;
            radial_jet(r, r1, r2, s, c)
        }
    }
}

fn radial_jet(r: f64, r1: f64, r2: f64, s: f64, c: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    (
        [r * c, r * s],
        [r1 * c - r * s, r1 * s + r * c],
        [(r2 - r) * c - 2.0 * r1 * s, (r2 - r) * s + 2.0 * r1 * c],
    )
}
