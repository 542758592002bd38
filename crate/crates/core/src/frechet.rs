//! Frechet-derivative far fields of the phaseless far-field operators and
//! assembly of the phaseless Jacobian 2 Re[conj(u_inf) (u')_inf].
//!
//! For a boundary perturbation h (center shift plus radial trig polynomial)
//! the derivative far field (u')_inf solves the same scattering problem with
//! derived boundary data, so every Jacobian column is one extra right-hand
//! side against the retained factorization:
//! - Dirichlet:     f = -h_nu (du/dnu)
//! - Neumann:       f = k^2 h_nu u + Div_G[h_nu (grad u)_t]
//! - transmission:  f1 = -h_nu (du_+/dnu - du_-/dnu) and
//!   f2 = (k^2 - lambda k^2 n) h_nu u
//!   + Div_G[h_nu ((grad u_+)_t - lambda (grad u_-)_t)]
//!   + (dlambda/lambda) du_+/dnu
//!
//! In 2D the surface divergence of a scalar tangential component g is the
//! arclength derivative (1/|gamma'|) d/dt g, evaluated spectrally.

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{Curve, CurvePerturbation, TrigPolynomial};
use crate::incident::PlaneWaveSuperposition;
use crate::solver::{
    BoundaryCondition, ExteriorSolution, ExteriorSolver, FarFieldPattern, TransmissionSolution,
    TransmissionSolver,
};

/// Perturbation of the scattering configuration: a boundary vector field and,
/// for penetrable obstacles, a change of the transmission constant.
#[derive(Debug, Clone)]
pub struct BoundaryPerturbation {
    pub h: CurvePerturbation,
    pub dlambda: f64,
}

impl BoundaryPerturbation {
    pub fn shape(h: CurvePerturbation) -> Self {
        Self { h, dlambda: 0.0 }
    }
}

/// Physical model of the inverse problem (impedance inversion is out of
/// scope; its derivative is not available).
#[derive(Debug, Clone, PartialEq)]
pub enum Physics {
    Dirichlet,
    Neumann,
    Transmission { n: Complex64 },
}

impl Physics {
    pub fn boundary_condition(&self, lambda: f64) -> BoundaryCondition {
        match self {
            Physics::Dirichlet => BoundaryCondition::Dirichlet,
            Physics::Neumann => BoundaryCondition::Neumann,
            Physics::Transmission { n } => BoundaryCondition::Transmission { n: *n, lambda },
        }
    }

    pub fn is_transmission(&self) -> bool {
        matches!(self, Physics::Transmission { .. })
    }
}

fn normal_components(solver_grid: &crate::solver::grid::NystromGrid, h: &CurvePerturbation) -> Vec<f64> {
    solver_grid
        .jets
        .iter()
        .zip(&solver_grid.nodes)
        .map(|(jet, &t)| {
            let hv = h.value(t);
            hv[0] * jet.normal[0] + hv[1] * jet.normal[1]
        })
        .collect()
}

fn dirichlet_data(
    solver: &ExteriorSolver,
    sol: &ExteriorSolution,
    h: &CurvePerturbation,
) -> Vec<Complex64> {
    let hnu = normal_components(&solver.grid, h);
    sol.dnu_total
        .iter()
        .zip(&hnu)
        .map(|(dnu, &hn)| -hn * dnu)
        .collect()
}

fn neumann_data(
    solver: &ExteriorSolver,
    sol: &ExteriorSolution,
    h: &CurvePerturbation,
) -> Vec<Complex64> {
    let hnu = normal_components(&solver.grid, h);
    let k2 = solver.k * solver.k;
    // for the sound-hard total field the boundary gradient is purely
    // tangential: (grad u)_t = d u/ds
    let grad_t = solver.tangential_derivative(&sol.u_total);
    let g: Vec<Complex64> = grad_t
        .iter()
        .zip(&hnu)
        .map(|(gt, &hn)| hn * gt)
        .collect();
    let div = solver.surface_divergence(&g);
    sol.u_total
        .iter()
        .zip(&hnu)
        .zip(&div)
        .map(|((u, &hn), dv)| k2 * hn * u + dv)
        .collect()
}

fn transmission_data(
    solver: &TransmissionSolver,
    sol: &TransmissionSolution,
    p: &BoundaryPerturbation,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let hnu = normal_components(&solver.grid, &p.h);
    let lambda = solver.lambda;
    let k2 = solver.k * solver.k;
    let coeff = k2 - lambda * k2 * solver.n_index;
    // the total field is continuous across the interface, so both tangential
    // gradients equal the arclength derivative of the common trace
    let grad_t = solver.tangential_derivative(&sol.u_total);
    let g: Vec<Complex64> = grad_t
        .iter()
        .zip(&hnu)
        .map(|(gt, &hn)| hn * (1.0 - lambda) * gt)
        .collect();
    let div = solver.tangential_derivative(&g);
    let f1: Vec<Complex64> = sol
        .dnu_plus
        .iter()
        .zip(&sol.dnu_minus)
        .zip(&hnu)
        .map(|((dp, dm), &hn)| -hn * (dp - dm))
        .collect();
    let f2: Vec<Complex64> = sol
        .u_total
        .iter()
        .zip(&hnu)
        .zip(&div)
        .zip(&sol.dnu_plus)
        .map(|(((u, &hn), dv), dp)| coeff * hn * u + dv + (p.dlambda / lambda) * dp)
        .collect();
    (f1, f2)
}

/// Derivative far field for the sound-soft problem.
pub fn derivative_farfield_dirichlet(
    curve: &Curve,
    k: f64,
    w: &PlaneWaveSuperposition,
    h: &CurvePerturbation,
    n_f: usize,
    n_q: usize,
) -> Result<FarFieldPattern> {
    let solver = ExteriorSolver::assemble(curve, &BoundaryCondition::Dirichlet, k, n_q)?;
    let sol = solver.solve_scattering(w, n_f)?;
    let data = dirichlet_data(&solver, &sol, h);
    let density = solver.solve_density(&data);
    Ok(solver.far_field(&density, n_f, w.dirs.clone()))
}

/// Derivative far field for the sound-hard problem.
pub fn derivative_farfield_neumann(
    curve: &Curve,
    k: f64,
    w: &PlaneWaveSuperposition,
    h: &CurvePerturbation,
    n_f: usize,
    n_q: usize,
) -> Result<FarFieldPattern> {
    let solver = ExteriorSolver::assemble(curve, &BoundaryCondition::Neumann, k, n_q)?;
    let sol = solver.solve_scattering(w, n_f)?;
    let data = neumann_data(&solver, &sol, h);
    let density = solver.solve_density(&data);
    Ok(solver.far_field(&density, n_f, w.dirs.clone()))
}

/// Derivative far field for the transmission problem, including the
/// transmission-constant perturbation dlambda.
#[allow(clippy::too_many_arguments)]
pub fn derivative_farfield_transmission(
    curve: &Curve,
    n_index: Complex64,
    lambda: f64,
    k: f64,
    w: &PlaneWaveSuperposition,
    h: &CurvePerturbation,
    dlambda: f64,
    n_f: usize,
    n_q: usize,
) -> Result<FarFieldPattern> {
    let solver = TransmissionSolver::assemble(curve, n_index, lambda, k, n_q)?;
    let sol = solver.solve_scattering(w, n_f)?;
    let p = BoundaryPerturbation {
        h: h.clone(),
        dlambda,
    };
    let (f1, f2) = transmission_data(&solver, &sol, &p);
    let (phi, psi) = solver.solve_density(&f1, &f2);
    Ok(solver.far_field(&phi, &psi, n_f, w.dirs.clone()))
}

/// Basis perturbations of the inversion unknowns, in column order:
/// center e_x, center e_y, radial {1, cos t, .., cos Mt, sin t, .., sin Mt},
/// and (transmission only) the unit lambda perturbation.
pub fn basis_perturbations(order: usize, with_lambda: bool) -> Vec<BoundaryPerturbation> {
    let mut basis = Vec::with_capacity(2 * order + 3 + usize::from(with_lambda));
    basis.push(BoundaryPerturbation::shape(CurvePerturbation::translation([
        1.0, 0.0,
    ])));
    basis.push(BoundaryPerturbation::shape(CurvePerturbation::translation([
        0.0, 1.0,
    ])));
    for c in 0..2 * order + 1 {
        let mut radial = TrigPolynomial::zero(order);
        radial.coeffs_mut()[c] = 1.0;
        basis.push(BoundaryPerturbation::shape(CurvePerturbation::radial(radial)));
    }
    if with_lambda {
        basis.push(BoundaryPerturbation {
            h: CurvePerturbation::translation([0.0, 0.0]),
            dlambda: 1.0,
        });
    }
    basis
}

/// Forward value and phaseless Jacobian block for one direction pair.
pub struct PairLinearization {
    pub far: FarFieldPattern,
    /// F = |u_inf|^2 on the observation grid
    pub value: Vec<f64>,
    /// columns[p][j] = 2 Re[conj(u_inf_j) (u'_p)_inf_j]
    pub columns: Vec<Vec<f64>>,
}

fn phaseless_column(far: &FarFieldPattern, derivative: &[Complex64]) -> Vec<f64> {
    far.samples
        .iter()
        .zip(derivative)
        .map(|(u, du)| 2.0 * (u.conj() * du).re)
        .collect()
}

/// Linearize the phaseless far-field map of one direction pair at the given
/// starlike iterate; one forward factorization serves all columns.
pub fn linearize_pair(
    curve: &Curve,
    physics: &Physics,
    lambda: f64,
    order: usize,
    w: &PlaneWaveSuperposition,
    n_f: usize,
    n_q: usize,
) -> Result<PairLinearization> {
    let basis = basis_perturbations(order, physics.is_transmission());
    match physics {
        Physics::Transmission { n } => {
            let solver = TransmissionSolver::assemble(curve, *n, lambda, w.k, n_q)?;
            let sol = solver.solve_scattering(w, n_f)?;
            let ff = solver.far_field_matrix(n_f);
            let mut columns = Vec::with_capacity(basis.len());
            for p in &basis {
                let (f1, f2) = transmission_data(&solver, &sol, p);
                let (phi, psi) = solver.solve_density(&f1, &f2);
                let mut stacked = phi;
                stacked.extend(psi);
                let derivative = ff.matvec(&stacked);
                columns.push(phaseless_column(&sol.far, &derivative));
            }
            Ok(PairLinearization {
                value: sol.far.intensity(),
                far: sol.far,
                columns,
            })
        }
        _ => {
            let bc = physics.boundary_condition(lambda);
            let solver = ExteriorSolver::assemble(curve, &bc, w.k, n_q)?;
            let sol = solver.solve_scattering(w, n_f)?;
            let ff = solver.far_field_matrix(n_f);
            let mut columns = Vec::with_capacity(basis.len());
            for p in &basis {
                let data = match physics {
                    Physics::Dirichlet => dirichlet_data(&solver, &sol, &p.h),
                    Physics::Neumann => neumann_data(&solver, &sol, &p.h),
                    Physics::Transmission { .. } => unreachable!(),
                };
                let density = solver.solve_density(&data);
                let derivative = ff.matvec(&density);
                columns.push(phaseless_column(&sol.far, &derivative));
            }
            Ok(PairLinearization {
                value: sol.far.intensity(),
                far: sol.far,
                columns,
            })
        }
    }
}

/// Phaseless Jacobian over several direction pairs, stacked row-blocks of
/// size n_f; column order as in [`basis_perturbations`].
pub struct PhaselessJacobian {
    pub pairs: Vec<PairLinearization>,
    pub n_unknowns: usize,
}

pub fn phaseless_jacobian(
    curve: &Curve,
    physics: &Physics,
    lambda: f64,
    order: usize,
    waves: &[PlaneWaveSuperposition],
    n_f: usize,
    n_q: usize,
) -> Result<PhaselessJacobian> {
    let mut pairs = Vec::with_capacity(waves.len());
    for w in waves {
        pairs.push(linearize_pair(curve, physics, lambda, order, w, n_f, n_q)?);
    }
    let n_unknowns = 2 * order + 3 + usize::from(physics.is_transmission());
    Ok(PhaselessJacobian { pairs, n_unknowns })
}

/// Dense row-major view of the stacked Jacobian (rows = pairs x n_f).
pub fn stacked_jacobian(j: &PhaselessJacobian) -> (Vec<f64>, usize, usize) {
    let n_f = j.pairs[0].value.len();
    let rows = j.pairs.len() * n_f;
    let cols = j.n_unknowns;
    let mut a = vec![0.0; rows * cols];
    for (l, pair) in j.pairs.iter().enumerate() {
        for (p, col) in pair.columns.iter().enumerate() {
            for (row_in_block, v) in col.iter().enumerate() {
                a[(l * n_f + row_in_block) * cols + p] = *v;
            }
        }
    }
    (a, rows, cols)
}


#[cfg(test)]
mod jacobian_fd_tests {
    use super::*;
    use crate::geometry::StarlikeCurve;
    use crate::phaseless::intensity;
    use crate::solver::{far_field_for, SolverConfig};

    /// full phaseless Jacobian against column-by-column central finite
    /// differences of |u_inf|^2 on a circle iterate with M = 3
    #[test]
    fn phaseless_jacobian_matches_finite_difference_jacobian() {
        let order = 3;
        let state = StarlikeCurve::circle_with_order(0.8, [0.1, -0.2], order);
        let curve = Curve::Starlike(state.clone());
        let w = PlaneWaveSuperposition::new(1.5, vec![[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let n_f = 24;
        let n_q = 64;
        let lin = linearize_pair(&curve, &Physics::Dirichlet, 0.0, order, &w, n_f, n_q).unwrap();

        let eps = 1e-4;
        let cfg = SolverConfig::fixed(n_q);
        let basis = basis_perturbations(order, false);
        let mut worst = 0.0f64;
        for (p, pert) in basis.iter().enumerate() {
            let plus = far_field_for(
                &curve.clone().perturbed(pert.h.clone(), eps),
                &BoundaryCondition::Dirichlet,
                &w,
                n_f,
                &cfg,
            )
            .unwrap();
            let minus = far_field_for(
                &curve.clone().perturbed(pert.h.clone(), -eps),
                &BoundaryCondition::Dirichlet,
                &w,
                n_f,
                &cfg,
            )
            .unwrap();
            let ip = intensity(&plus);
            let im = intensity(&minus);
            let scale = lin.columns[p]
                .iter()
                .map(|v| v.abs())
                .fold(0.0, f64::max)
                .max(1e-12);
            let mut err = 0.0f64;
            for j in 0..n_f {
                let fd = (ip[j] - im[j]) / (2.0 * eps);
                err = err.max((lin.columns[p][j] - fd).abs());
            }
            worst = worst.max(err / scale);
        }
        assert!(worst < 1e-4, "max relative column error {worst:e}");
    }
}
