//! Nystrom boundary-integral forward solvers for the exterior scattering
//! problems and the transmission problem, with far-field evaluation on a
//! uniform grid of the unit circle.
//!
//! Formulations (all second-kind compatible, coupling parameter eta = k):
//! - Dirichlet: u^s = (DL - i eta SL) phi, so (I/2 + K - i eta S) phi = f.
//! - Neumann:   u^s = (DL + i eta SL) phi, so (T + i eta (K' - I/2)) phi = f,
//!   with the hypersingular T in Maue form.
//! - Impedance: Neumann ansatz plus mu times the ansatz trace.
//! - Transmission: u^s = DL_k phi + SL_k psi outside,
//!   u = (1/lambda) DL_{ki} phi + SL_{ki} psi inside (ki = k sqrt(n)), which
//!   cancels the hypersingular parts in the flux equation analytically.

pub mod grid;
pub mod io;
pub mod operators;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::incident::PlaneWaveSuperposition;
use crate::linalg::{CMat, LuFactors};

use grid::NystromGrid;
use operators::{assemble_layer_ops, LayerOps};

/// Boundary condition of the scattering problem.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    Impedance {
        mu: f64,
    },
    /// Penetrable obstacle: refractive index n (Re n > 0, Im n >= 0) and
    /// transmission constant lambda > 0.
    Transmission {
        n: Complex64,
        lambda: f64,
    },
}

impl BoundaryCondition {
    pub fn validate(&self) -> Result<()> {
        if let BoundaryCondition::Transmission { n, lambda } = self {
            if n.re <= 0.0 || n.im < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "transmission index must satisfy Re n > 0, Im n >= 0, got {n}"
                )));
            }
            if *lambda <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "transmission constant must be positive, got {lambda}"
                )));
            }
        }
        Ok(())
    }
}

/// Far-field pattern sampled at theta_j = 2 pi (j-1)/n_f, j = 1..n_f.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    pub k: f64,
    /// incident directions the pattern was generated with
    pub directions: Vec<[f64; 2]>,
    pub samples: Vec<Complex64>,
}

impl FarFieldPattern {
    pub fn new(k: f64, directions: Vec<[f64; 2]>, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "far-field grid needs n_f >= 2, got {}",
                samples.len()
            )));
        }
        Ok(Self {
            k,
            directions,
            samples,
        })
    }

    pub fn n_f(&self) -> usize {
        self.samples.len()
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples.len() as f64
    }

    pub fn observation_dir(&self, j: usize) -> [f64; 2] {
        let t = self.theta(j);
        [t.cos(), t.sin()]
    }

    /// Pointwise squared modulus |u_inf|^2.
    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.norm_sqr()).collect()
    }

    /// sup_j |self_j - other_j|.
    pub fn sup_diff(&self, other: &FarFieldPattern) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Discretization controls for the forward solvers.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// initial half node count
    pub n_q: usize,
    /// doubling cap
    pub n_q_max: usize,
    /// far-field sup-change tolerance for the doubling loop
    pub tol: f64,
    /// disable doubling (fixed n_q); used inside the inversion loop
    pub adaptive: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_q: 64,
            n_q_max: 512,
            tol: 1e-8,
            adaptive: true,
        }
    }
}

impl SolverConfig {
    pub fn fixed(n_q: usize) -> Self {
        Self {
            n_q,
            n_q_max: n_q,
            tol: 0.0,
            adaptive: false,
        }
    }
}

/// 2D far-field normalization constant e^{i pi/4} / sqrt(8 pi k).
fn farfield_constant(k: f64) -> Complex64 {
    (Complex64::i() * PI / 4.0).exp() / (8.0 * PI * k).sqrt()
}

/// Assembled exterior solver for one (curve, bc, k, n_q); retains the LU
/// factorization so derived problems reuse it.
pub struct ExteriorSolver {
    pub grid: NystromGrid,
    pub bc: BoundaryCondition,
    pub k: f64,
    eta: f64,
    lu: LuFactors,
    ops: LayerOps,
    diff: Vec<f64>,
}

/// Retained solution of an exterior scattering problem: density, far field and
/// boundary traces of the total field.
pub struct ExteriorSolution {
    pub far: FarFieldPattern,
    pub density: Vec<Complex64>,
    /// total field u = u^i + u^s on the boundary nodes
    pub u_total: Vec<Complex64>,
    /// normal derivative of the total field on the boundary nodes
    pub dnu_total: Vec<Complex64>,
}

impl ExteriorSolver {
    pub fn assemble(curve: &Curve, bc: &BoundaryCondition, k: f64, n_q: usize) -> Result<Self> {
        bc.validate()?;
        if matches!(bc, BoundaryCondition::Transmission { .. }) {
            return Err(Error::InvalidConfig(
                "transmission problems use TransmissionSolver".into(),
            ));
        }
        if k <= 0.0 {
            return Err(Error::InvalidConfig(format!("wavenumber must be > 0, got {k}")));
        }
        let grid = NystromGrid::build(curve, n_q)?;
        let diff = grid.diff_matrix();
        let ops = assemble_layer_ops(&grid, Complex64::new(k, 0.0), &diff);
        let eta = k;
        let ieta = Complex64::new(0.0, eta);

        let mut sys = match bc {
            BoundaryCondition::Dirichlet => {
                // I/2 + K - i eta S
                let mut a = ops.k.add_scaled(-ieta, &ops.s);
                a.add_diag(Complex64::new(0.5, 0.0));
                a
            }
            BoundaryCondition::Neumann | BoundaryCondition::Impedance { .. } => {
                // T + i eta (K' - I/2)  [+ mu ((I/2 + K) + i eta S)]
                let mut a = ops.t.add_scaled(ieta, &ops.kp);
                a.add_diag(-ieta * 0.5);
                if let BoundaryCondition::Impedance { mu } = bc {
                    let muc = Complex64::new(*mu, 0.0);
                    a = a.add_scaled(muc, &ops.k);
                    a = a.add_scaled(muc * ieta, &ops.s);
                    a.add_diag(muc * 0.5);
                }
                a
            }
            BoundaryCondition::Transmission { .. } => unreachable!(),
        };
        // keep the matrix around only through the factorization
        let lu = LuFactors::factor(std::mem::replace(&mut sys, CMat::zeros(1, 1)))?;
        Ok(Self {
            grid,
            bc: bc.clone(),
            k,
            eta,
            lu,
            ops,
            diff,
        })
    }

    /// Solve for the layer density given boundary data at the nodes.
    pub fn solve_density(&self, data: &[Complex64]) -> Vec<Complex64> {
        self.lu.solve(data)
    }

    /// Far field of the ansatz for a solved density.
    pub fn far_field(
        &self,
        density: &[Complex64],
        n_f: usize,
        directions: Vec<[f64; 2]>,
    ) -> FarFieldPattern {
        let c = farfield_constant(self.k);
        let ieta = Complex64::new(0.0, self.eta);
        // DL - i eta SL for Dirichlet, DL + i eta SL otherwise
        let sl_weight = match self.bc {
            BoundaryCondition::Dirichlet => -ieta,
            _ => ieta,
        };
        let mut samples = Vec::with_capacity(n_f);
        for j in 0..n_f {
            let th = 2.0 * PI * j as f64 / n_f as f64;
            let xhat = [th.cos(), th.sin()];
            let mut acc = Complex64::new(0.0, 0.0);
            for (jet, rho) in self.grid.jets.iter().zip(density) {
                let phase =
                    (-Complex64::i() * self.k * (xhat[0] * jet.point[0] + xhat[1] * jet.point[1]))
                        .exp();
                let dl = -Complex64::i()
                    * self.k
                    * (xhat[0] * jet.normal[0] + xhat[1] * jet.normal[1]);
                acc += (dl + sl_weight) * phase * jet.speed * rho;
            }
            samples.push(c * self.grid.trapez * acc);
        }
        FarFieldPattern {
            k: self.k,
            directions,
            samples,
        }
    }

    /// Far-field evaluation matrix: far = mat . density.
    pub fn far_field_matrix(&self, n_f: usize) -> CMat {
        let c = farfield_constant(self.k);
        let ieta = Complex64::new(0.0, self.eta);
        let sl_weight = match self.bc {
            BoundaryCondition::Dirichlet => -ieta,
            _ => ieta,
        };
        let n = self.grid.len();
        let mut mat = CMat::zeros(n_f, n);
        for j in 0..n_f {
            let th = 2.0 * PI * j as f64 / n_f as f64;
            let xhat = [th.cos(), th.sin()];
            for (m, jet) in self.grid.jets.iter().enumerate() {
                let phase =
                    (-Complex64::i() * self.k * (xhat[0] * jet.point[0] + xhat[1] * jet.point[1]))
                        .exp();
                let dl = -Complex64::i()
                    * self.k
                    * (xhat[0] * jet.normal[0] + xhat[1] * jet.normal[1]);
                *mat.at_mut(j, m) = c * self.grid.trapez * (dl + sl_weight) * phase * jet.speed;
            }
        }
        mat
    }

    /// Solve the scattering problem for an incident superposition, retaining
    /// boundary traces of the total field.
    pub fn solve_scattering(
        &self,
        w: &PlaneWaveSuperposition,
        n_f: usize,
    ) -> Result<ExteriorSolution> {
        if (w.k - self.k).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "incident wavenumber differs from the assembled solver".into(),
            ));
        }
        let n = self.grid.len();
        let mut ui = Vec::with_capacity(n);
        let mut dui = Vec::with_capacity(n);
        for jet in &self.grid.jets {
            let (v, dv) = w.value_and_normal_derivative(jet);
            ui.push(v);
            dui.push(dv);
        }
        let data: Vec<Complex64> = match &self.bc {
            BoundaryCondition::Dirichlet => ui.iter().map(|v| -v).collect(),
            BoundaryCondition::Neumann => dui.iter().map(|v| -v).collect(),
            BoundaryCondition::Impedance { mu } => ui
                .iter()
                .zip(&dui)
                .map(|(v, dv)| -(dv + mu * v))
                .collect(),
            BoundaryCondition::Transmission { .. } => unreachable!(),
        };
        let density = self.solve_density(&data);
        let far = self.far_field(&density, n_f, w.dirs.clone());

        let ieta = Complex64::new(0.0, self.eta);
        let (us, dnus) = match &self.bc {
            BoundaryCondition::Dirichlet => {
                // u^s = f on the boundary; dnu u^s = (T - i eta (K' - I/2)) phi
                let mut dn = self.ops.t.matvec(&density);
                let kp = self.ops.kp.matvec(&density);
                for i in 0..n {
                    dn[i] -= ieta * (kp[i] - 0.5 * density[i]);
                }
                (data.clone(), dn)
            }
            _ => {
                // u^s = (I/2 + K + i eta S) phi
                let kphi = self.ops.k.matvec(&density);
                let sphi = self.ops.s.matvec(&density);
                let mut val = Vec::with_capacity(n);
                for i in 0..n {
                    val.push(0.5 * density[i] + kphi[i] + ieta * sphi[i]);
                }
                // dnu u^s = (T + i eta (K' - I/2)) phi
                let mut dn = self.ops.t.matvec(&density);
                let kpphi = self.ops.kp.matvec(&density);
                for i in 0..n {
                    dn[i] += ieta * (kpphi[i] - 0.5 * density[i]);
                }
                (val, dn)
            }
        };
        let u_total: Vec<Complex64> = ui.iter().zip(&us).map(|(a, b)| a + b).collect();
        let dnu_total: Vec<Complex64> = dui.iter().zip(&dnus).map(|(a, b)| a + b).collect();
        Ok(ExteriorSolution {
            far,
            density,
            u_total,
            dnu_total,
        })
    }

    /// Tangential derivative (d/ds) of nodal boundary values.
    pub fn tangential_derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        tangential_derivative(&self.grid, &self.diff, values)
    }

    /// Surface divergence of a scalar tangential component: (1/|g'|) d/dt g.
    pub fn surface_divergence(&self, g: &[Complex64]) -> Vec<Complex64> {
        tangential_derivative(&self.grid, &self.diff, g)
    }
}

/// d/ds f = (1/|gamma'|) d/dt f for nodal values of a periodic function.
pub(crate) fn tangential_derivative(
    grid: &NystromGrid,
    diff: &[f64],
    values: &[Complex64],
) -> Vec<Complex64> {
    let n = grid.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let d = diff[i * n + j];
            if d != 0.0 {
                acc += d * values[j];
            }
        }
        out[i] = acc / grid.jets[i].speed;
    }
    out
}

/// Assembled transmission solver with retained block factorization.
pub struct TransmissionSolver {
    pub grid: NystromGrid,
    pub k: f64,
    pub n_index: Complex64,
    pub lambda: f64,
    lu: LuFactors,
    ops_e: LayerOps,
    ops_i: LayerOps,
    diff: Vec<f64>,
}

/// Retained transmission solution: densities, far field and both-side traces
/// of the total field.
pub struct TransmissionSolution {
    pub far: FarFieldPattern,
    pub phi: Vec<Complex64>,
    pub psi: Vec<Complex64>,
    /// common boundary trace of the total field (u_+ = u_- on Gamma)
    pub u_total: Vec<Complex64>,
    /// exterior normal derivative of the total field
    pub dnu_plus: Vec<Complex64>,
    /// interior normal derivative of the total field
    pub dnu_minus: Vec<Complex64>,
}

impl TransmissionSolver {
    pub fn assemble(
        curve: &Curve,
        n_index: Complex64,
        lambda: f64,
        k: f64,
        n_q: usize,
    ) -> Result<Self> {
        let bc = BoundaryCondition::Transmission {
            n: n_index,
            lambda,
        };
        bc.validate()?;
        if k <= 0.0 {
            return Err(Error::InvalidConfig(format!("wavenumber must be > 0, got {k}")));
        }
        let grid = NystromGrid::build(curve, n_q)?;
        let diff = grid.diff_matrix();
        let kappa_e = Complex64::new(k, 0.0);
        let kappa_i = k * n_index.sqrt();
        let ops_e = assemble_layer_ops(&grid, kappa_e, &diff);
        let ops_i = assemble_layer_ops(&grid, kappa_i, &diff);
        let n = grid.len();
        let a = 1.0 / lambda;

        let mut sys = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                // block (1,1): (1+a)/2 I + K_k - a K_i
                let mut v = ops_e.k.at(i, j) - a * ops_i.k.at(i, j);
                if i == j {
                    v += 0.5 * (1.0 + a);
                }
                *sys.at_mut(i, j) = v;
                // block (1,2): S_k - S_i
                *sys.at_mut(i, j + n) = ops_e.s.at(i, j) - ops_i.s.at(i, j);
                // block (2,1): T_k - T_i (hypersingular parts cancel)
                *sys.at_mut(i + n, j) = ops_e.t.at(i, j) - ops_i.t.at(i, j);
                // block (2,2): -(1+lambda)/2 I + K'_k - lambda K'_i
                let mut v = ops_e.kp.at(i, j) - lambda * ops_i.kp.at(i, j);
                if i == j {
                    v -= 0.5 * (1.0 + lambda);
                }
                *sys.at_mut(i + n, j + n) = v;
            }
        }
        let lu = LuFactors::factor(sys)?;
        Ok(Self {
            grid,
            k,
            n_index,
            lambda,
            lu,
            ops_e,
            ops_i,
            diff,
        })
    }

    /// Solve for the density pair (phi, psi) given interface data (f1, f2).
    pub fn solve_density(
        &self,
        f1: &[Complex64],
        f2: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.grid.len();
        let mut rhs = Vec::with_capacity(2 * n);
        rhs.extend_from_slice(f1);
        rhs.extend_from_slice(f2);
        let sol = self.lu.solve(&rhs);
        (sol[..n].to_vec(), sol[n..].to_vec())
    }

    /// Far field of the exterior representation DL_k phi + SL_k psi.
    pub fn far_field(
        &self,
        phi: &[Complex64],
        psi: &[Complex64],
        n_f: usize,
        directions: Vec<[f64; 2]>,
    ) -> FarFieldPattern {
        let c = farfield_constant(self.k);
        let mut samples = Vec::with_capacity(n_f);
        for j in 0..n_f {
            let th = 2.0 * PI * j as f64 / n_f as f64;
            let xhat = [th.cos(), th.sin()];
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, jet) in self.grid.jets.iter().enumerate() {
                let phase =
                    (-Complex64::i() * self.k * (xhat[0] * jet.point[0] + xhat[1] * jet.point[1]))
                        .exp();
                let dl = -Complex64::i()
                    * self.k
                    * (xhat[0] * jet.normal[0] + xhat[1] * jet.normal[1]);
                acc += (dl * phi[m] + psi[m]) * phase * jet.speed;
            }
            samples.push(c * self.grid.trapez * acc);
        }
        FarFieldPattern {
            k: self.k,
            directions,
            samples,
        }
    }

    /// Far-field evaluation matrix over the stacked density [phi; psi].
    pub fn far_field_matrix(&self, n_f: usize) -> CMat {
        let c = farfield_constant(self.k);
        let n = self.grid.len();
        let mut mat = CMat::zeros(n_f, 2 * n);
        for j in 0..n_f {
            let th = 2.0 * PI * j as f64 / n_f as f64;
            let xhat = [th.cos(), th.sin()];
            for (m, jet) in self.grid.jets.iter().enumerate() {
                let phase =
                    (-Complex64::i() * self.k * (xhat[0] * jet.point[0] + xhat[1] * jet.point[1]))
                        .exp();
                let dl = -Complex64::i()
                    * self.k
                    * (xhat[0] * jet.normal[0] + xhat[1] * jet.normal[1]);
                *mat.at_mut(j, m) = c * self.grid.trapez * dl * phase * jet.speed;
                *mat.at_mut(j, m + n) = c * self.grid.trapez * phase * jet.speed;
            }
        }
        mat
    }

    /// Solve the transmission scattering problem for an incident field.
    pub fn solve_scattering(
        &self,
        w: &PlaneWaveSuperposition,
        n_f: usize,
    ) -> Result<TransmissionSolution> {
        if (w.k - self.k).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "incident wavenumber differs from the assembled solver".into(),
            ));
        }
        let n = self.grid.len();
        let mut ui = Vec::with_capacity(n);
        let mut dui = Vec::with_capacity(n);
        for jet in &self.grid.jets {
            let (v, dv) = w.value_and_normal_derivative(jet);
            ui.push(v);
            dui.push(dv);
        }
        let f1: Vec<Complex64> = ui.iter().map(|v| -v).collect();
        let f2: Vec<Complex64> = dui.iter().map(|v| -v).collect();
        let (phi, psi) = self.solve_density(&f1, &f2);
        let far = self.far_field(&phi, &psi, n_f, w.dirs.clone());
        let traces = self.traces(&phi, &psi);
        let u_total: Vec<Complex64> = ui
            .iter()
            .zip(&traces.0)
            .map(|(a, b)| a + b)
            .collect();
        let dnu_plus: Vec<Complex64> = dui
            .iter()
            .zip(&traces.1)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TransmissionSolution {
            far,
            phi,
            psi,
            u_total,
            dnu_plus,
            dnu_minus: traces.2,
        })
    }

    /// (u^s_+, dnu u^s_+, dnu u_-) traces of the representation.
    fn traces(
        &self,
        phi: &[Complex64],
        psi: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let n = self.grid.len();
        let a = 1.0 / self.lambda;
        // u^s_+ = (I/2 + K_k) phi + S_k psi
        let kphi = self.ops_e.k.matvec(phi);
        let spsi = self.ops_e.s.matvec(psi);
        let mut us_plus = Vec::with_capacity(n);
        for i in 0..n {
            us_plus.push(0.5 * phi[i] + kphi[i] + spsi[i]);
        }
        // dnu u^s_+ = T_k phi + (K'_k - I/2) psi
        let tphi = self.ops_e.t.matvec(phi);
        let kppsi = self.ops_e.kp.matvec(psi);
        let mut dnu_plus = Vec::with_capacity(n);
        for i in 0..n {
            dnu_plus.push(tphi[i] + kppsi[i] - 0.5 * psi[i]);
        }
        // dnu u_- = a T_i phi + (K'_i + I/2) psi
        let tiphi = self.ops_i.t.matvec(phi);
        let kpipsi = self.ops_i.kp.matvec(psi);
        let mut dnu_minus = Vec::with_capacity(n);
        for i in 0..n {
            dnu_minus.push(a * tiphi[i] + kpipsi[i] + 0.5 * psi[i]);
        }
        (us_plus, dnu_plus, dnu_minus)
    }

    pub fn tangential_derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        tangential_derivative(&self.grid, &self.diff, values)
    }
}

/// Far field for any boundary condition, with automatic node doubling until
/// the pattern change is below tolerance.
pub fn far_field_for(
    curve: &Curve,
    bc: &BoundaryCondition,
    w: &PlaneWaveSuperposition,
    n_f: usize,
    cfg: &SolverConfig,
) -> Result<FarFieldPattern> {
    let solve_at = |n_q: usize| -> Result<FarFieldPattern> {
        match bc {
            BoundaryCondition::Transmission { n, lambda } => {
                let s = TransmissionSolver::assemble(curve, *n, *lambda, w.k, n_q)?;
                Ok(s.solve_scattering(w, n_f)?.far)
            }
            _ => {
                let s = ExteriorSolver::assemble(curve, bc, w.k, n_q)?;
                Ok(s.solve_scattering(w, n_f)?.far)
            }
        }
    };
    let mut n_q = cfg.n_q;
    let mut current = solve_at(n_q)?;
    if !cfg.adaptive {
        return Ok(current);
    }
    while 2 * n_q <= cfg.n_q_max {
        n_q *= 2;
        let finer = solve_at(n_q)?;
        let change = finer.sup_diff(&current);
        current = finer;
        if change < cfg.tol {
            break;
        }
    }
    Ok(current)
}

/// Exterior scattering solve (Dirichlet/Neumann/impedance).
pub fn solve_exterior(
    curve: &Curve,
    bc: &BoundaryCondition,
    w: &PlaneWaveSuperposition,
    n_f: usize,
    cfg: &SolverConfig,
) -> Result<FarFieldPattern> {
    if matches!(bc, BoundaryCondition::Transmission { .. }) {
        return Err(Error::InvalidConfig(
            "solve_exterior expects a non-transmission boundary condition".into(),
        ));
    }
    far_field_for(curve, bc, w, n_f, cfg)
}

/// Transmission scattering solve.
pub fn solve_transmission(
    curve: &Curve,
    n_index: Complex64,
    lambda: f64,
    w: &PlaneWaveSuperposition,
    n_f: usize,
    cfg: &SolverConfig,
) -> Result<FarFieldPattern> {
    far_field_for(
        curve,
        &BoundaryCondition::Transmission {
            n: n_index,
            lambda,
        },
        w,
        n_f,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BenchmarkCurve, StarlikeCurve};
    use crate::oracle::series_farfield_superposition;

    fn circle(r0: f64, center: [f64; 2]) -> Curve {
        Curve::Benchmark(BenchmarkCurve::Circle { r0, center })
    }

    #[test]
    fn dirichlet_circle_matches_series_oracle() {
        let curve = circle(1.0, [0.0, 0.0]);
        let w = PlaneWaveSuperposition::single(1.0, [1.0, 0.0]).unwrap();
        let bc = BoundaryCondition::Dirichlet;
        let far = solve_exterior(&curve, &bc, &w, 64, &SolverConfig::fixed(64)).unwrap();
        let want = series_farfield_superposition(1.0, [0.0, 0.0], &bc, &w, 64).unwrap();
        let err = far.sup_diff(&want);
        assert!(err < 1e-8, "dirichlet sup err {err:e}");
    }

    #[test]
    fn neumann_circle_matches_series_oracle() {
        let curve = circle(1.0, [0.0, 0.0]);
        let w = PlaneWaveSuperposition::single(2.0, [0.6, 0.8]).unwrap();
        let bc = BoundaryCondition::Neumann;
        let far = solve_exterior(&curve, &bc, &w, 64, &SolverConfig::fixed(64)).unwrap();
        let want = series_farfield_superposition(1.0, [0.0, 0.0], &bc, &w, 64).unwrap();
        let err = far.sup_diff(&want);
        assert!(err < 1e-8, "neumann sup err {err:e}");
    }

    #[test]
    fn impedance_circle_matches_series_oracle() {
        let curve = circle(1.0, [0.0, 0.0]);
        let w = PlaneWaveSuperposition::single(3.0, [0.0, 1.0]).unwrap();
        let bc = BoundaryCondition::Impedance { mu: 2.0 };
        let far = solve_exterior(&curve, &bc, &w, 48, &SolverConfig::fixed(64)).unwrap();
        let want = series_farfield_superposition(1.0, [0.0, 0.0], &bc, &w, 48).unwrap();
        let err = far.sup_diff(&want);
        assert!(err < 1e-8, "impedance sup err {err:e}");
    }

    #[test]
    fn transmission_circle_matches_series_oracle() {
        let curve = circle(1.0, [0.0, 0.0]);
        let w = PlaneWaveSuperposition::single(1.0, [1.0, 0.0]).unwrap();
        let bc = BoundaryCondition::Transmission {
            n: Complex64::new(0.64, 0.0),
            lambda: 1.2,
        };
        let far = far_field_for(&curve, &bc, &w, 64, &SolverConfig::fixed(64)).unwrap();
        let want = series_farfield_superposition(1.0, [0.0, 0.0], &bc, &w, 64).unwrap();
        let err = far.sup_diff(&want);
        assert!(err < 1e-8, "transmission sup err {err:e}");
    }

    #[test]
    fn invalid_transmission_parameters_rejected() {
        let bad_n = BoundaryCondition::Transmission {
            n: Complex64::new(-0.5, 0.0),
            lambda: 1.0,
        };
        assert!(bad_n.validate().is_err());
        let bad_lambda = BoundaryCondition::Transmission {
            n: Complex64::new(0.64, 0.0),
            lambda: 0.0,
        };
        assert!(bad_lambda.validate().is_err());
        let w = PlaneWaveSuperposition::single(1.0, [1.0, 0.0]).unwrap();
        assert!(solve_transmission(
            &circle(1.0, [0.0, 0.0]),
            Complex64::new(0.64, -0.1),
            1.2,
            &w,
            16,
            &SolverConfig::fixed(16),
        )
        .is_err());
    }

    #[test]
    fn transmission_zero_contrast_scatters_nothing() {
        let curve = circle(1.0, [0.2, -0.4]);
        let w = PlaneWaveSuperposition::single(2.0, [1.0, 0.0]).unwrap();
        let far = solve_transmission(
            &curve,
            Complex64::new(1.0, 0.0),
            1.0,
            &w,
            32,
            &SolverConfig::fixed(48),
        )
        .unwrap();
        assert!(far.sup_norm() < 1e-10, "zero contrast norm {:e}", far.sup_norm());
    }

    #[test]
    fn superposition_far_field_is_sum_of_parts() {
        let curve = Curve::Benchmark(BenchmarkCurve::AppleShaped);
        let k = 1.0;
        let (d1, d2) = ([1.0, 0.0], [-0.5, 3f64.sqrt() / 2.0]);
        let cfg = SolverConfig::fixed(64);
        let bc = BoundaryCondition::Dirichlet;
        let w12 = PlaneWaveSuperposition::new(k, vec![d1, d2]).unwrap();
        let both = solve_exterior(&curve, &bc, &w12, 32, &cfg).unwrap();
        let a = solve_exterior(
            &curve,
            &bc,
            &PlaneWaveSuperposition::single(k, d1).unwrap(),
            32,
            &cfg,
        )
        .unwrap();
        let b = solve_exterior(
            &curve,
            &bc,
            &PlaneWaveSuperposition::single(k, d2).unwrap(),
            32,
            &cfg,
        )
        .unwrap();
        for j in 0..32 {
            let sum = a.samples[j] + b.samples[j];
            assert!((both.samples[j] - sum).norm() < 1e-12);
        }
    }

    #[test]
    fn translated_obstacle_far_field_phase_relation() {
        // u_inf_l(xhat) = e^{i k l.(d - xhat)} u_inf(xhat)
        let base = Curve::Benchmark(BenchmarkCurve::AppleShaped);
        let l = [0.3, -0.7];
        let shifted = base.clone().translated(l);
        let k = 1.0;
        let d = [1.0, 0.0];
        let w = PlaneWaveSuperposition::single(k, d).unwrap();
        let cfg = SolverConfig::fixed(96);
        let bc = BoundaryCondition::Dirichlet;
        let far0 = solve_exterior(&base, &bc, &w, 64, &cfg).unwrap();
        let farl = solve_exterior(&shifted, &bc, &w, 64, &cfg).unwrap();
        let mut err = 0.0f64;
        for j in 0..64 {
            let xhat = far0.observation_dir(j);
            let phase = (Complex64::i()
                * k
                * (l[0] * (d[0] - xhat[0]) + l[1] * (d[1] - xhat[1])))
                .exp();
            err = err.max((farl.samples[j] - phase * far0.samples[j]).norm());
        }
        assert!(err < 1e-8, "translation relation sup err {err:e}");
    }

    #[test]
    fn starlike_circle_equals_benchmark_circle_solution() {
        let k = 2.0;
        let w = PlaneWaveSuperposition::single(k, [1.0, 0.0]).unwrap();
        let cfg = SolverConfig::fixed(48);
        let bc = BoundaryCondition::Dirichlet;
        let a = solve_exterior(
            &Curve::Starlike(StarlikeCurve::circle(0.8, [0.1, 0.2])),
            &bc,
            &w,
            32,
            &cfg,
        )
        .unwrap();
        let b = solve_exterior(&circle(0.8, [0.1, 0.2]), &bc, &w, 32, &cfg).unwrap();
        assert!(a.sup_diff(&b) < 1e-12);
    }

    #[test]
    fn interface_conditions_hold_for_transmission_solution() {
        let curve = Curve::Benchmark(BenchmarkCurve::RoundedTriangle);
        let k = 1.0;
        let lambda = 1.2;
        let w = PlaneWaveSuperposition::single(k, [1.0, 0.0]).unwrap();
        let s = TransmissionSolver::assemble(&curve, Complex64::new(0.64, 0.0), lambda, k, 64)
            .unwrap();
        let sol = s.solve_scattering(&w, 32).unwrap();
        // flux condition dnu u_+ = lambda dnu u_- of the total field
        let mut err = 0.0f64;
        for i in 0..s.grid.len() {
            err = err.max((sol.dnu_plus[i] - lambda * sol.dnu_minus[i]).norm());
        }
        let scale = sol
            .dnu_plus
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10 * scale.max(1.0), "flux mismatch {err:e}");
    }
}
