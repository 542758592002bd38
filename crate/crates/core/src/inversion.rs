//! Regularized Levenberg-Marquardt inversion of multi-frequency phaseless
//! far-field data, recursive in frequency.
//!
//! At each wavenumber the linearized phaseless equations are solved in the
//! least-squares sense with an H^s penalty on the radial update and plain
//! squared penalties on the center and transmission-constant updates; the
//! damping weight beta is chosen by bisection so the predicted linear
//! residual is rho times the current one. Frequencies are swept in
//! increasing order, each reconstruction warm-starting the next.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frechet::{linearize_pair, Physics};
use crate::geometry::{hs_penalty_diagonal, Curve, StarlikeCurve, RADIAL_FLOOR};
use crate::linalg::solve_real;
use crate::phaseless::{discrete_l2_norm, PhaselessDataset};
use crate::util::par_map;

/// Current reconstruction: starlike curve plus the transmission constant
/// (ignored for impenetrable obstacles).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterateState {
    pub curve: StarlikeCurve,
    pub lambda: f64,
}

impl IterateState {
    pub fn new(curve: StarlikeCurve, lambda: f64) -> Self {
        Self { curve, lambda }
    }
}

/// Algorithm parameters with the working defaults.
#[derive(Debug, Clone)]
pub struct InversionConfig {
    /// Sobolev exponent of the radial penalty
    pub s: f64,
    /// radial order M
    pub order: usize,
    /// residual reduction target per step
    pub rho: f64,
    /// stopping multiplier: stop when Err_k < tau_stop * delta
    pub tau_stop: f64,
    /// assumed noise ratio
    pub delta: f64,
    /// iteration cap per frequency
    pub max_iterations: usize,
    /// Nystrom half node count for forward solves inside the loop
    pub n_q: usize,
    /// beta bracket and bisection tolerance
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_rel_tol: f64,
    /// worker threads for per-pair linearizations
    pub threads: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            s: 1.6,
            order: 25,
            rho: 0.8,
            tau_stop: 1.5,
            delta: 0.05,
            max_iterations: 50,
            n_q: 64,
            beta_min: 1e-10,
            beta_max: 1e10,
            beta_rel_tol: 1e-3,
            threads: 1,
        }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidConfig(format!("rho must lie in (0,1), got {}", self.rho)));
        }
        if self.tau_stop <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "tau_stop must exceed 1, got {}",
                self.tau_stop
            )));
        }
        if self.s < 0.0 {
            return Err(Error::InvalidConfig(format!("s must be >= 0, got {}", self.s)));
        }
        if self.delta < 0.0 {
            return Err(Error::InvalidConfig(format!("delta must be >= 0, got {}", self.delta)));
        }
        Ok(())
    }

    /// Stopping threshold with a floor for noise-free data.
    pub fn stop_threshold(&self) -> f64 {
        (self.tau_stop * self.delta).max(1e-8)
    }
}

/// Weighted linear least-squares model of one frequency:
/// minimize sum_rows w (J delta - r)^2 + beta delta^T P delta.
pub struct Linearization {
    pub jacobian: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    /// residual r = y - F at delta = 0
    pub residual: Vec<f64>,
    /// discrete L2 weight 2 pi / n_f
    pub weight: f64,
    /// penalty diagonal P
    pub penalty: Vec<f64>,
}

impl Linearization {
    /// sqrt(sum_l ||F_l - y_l||^2) at delta = 0.
    pub fn residual_norm(&self) -> f64 {
        (self.weight * self.residual.iter().map(|r| r * r).sum::<f64>()).sqrt()
    }

    /// sqrt(sum_l ||F_l + J delta - y_l||^2) for a candidate update.
    pub fn predicted_residual(&self, delta: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            let row = &self.jacobian[i * self.cols..(i + 1) * self.cols];
            let mut v = -self.residual[i];
            for (a, d) in row.iter().zip(delta) {
                v += a * d;
            }
            acc += v * v;
        }
        (self.weight * acc).sqrt()
    }
}

/// Penalty diagonal in the unknown order [a1, a2, radial.., lambda?].
pub fn penalty_diagonal(order: usize, s: f64, with_lambda: bool) -> Vec<f64> {
    let mut p = vec![1.0, 1.0];
    p.extend(hs_penalty_diagonal(order, s));
    if with_lambda {
        p.push(1.0);
    }
    p
}

/// Solve the damped normal equations (J^T W J + beta P) delta = J^T W r.
pub fn lm_update(lin: &Linearization, beta: f64) -> Result<Vec<f64>> {
    if beta < 0.0 {
        return Err(Error::InvalidConfig(format!("beta must be >= 0, got {beta}")));
    }
    let (rows, cols) = (lin.rows, lin.cols);
    let mut normal = vec![0.0; cols * cols];
    let mut rhs = vec![0.0; cols];
    for i in 0..rows {
        let row = &lin.jacobian[i * cols..(i + 1) * cols];
        let r = lin.residual[i];
        for a in 0..cols {
            let ja = row[a];
            if ja == 0.0 {
                continue;
            }
            rhs[a] += lin.weight * ja * r;
            for b in a..cols {
                normal[a * cols + b] += lin.weight * ja * row[b];
            }
        }
    }
    for a in 0..cols {
        for b in 0..a {
            normal[a * cols + b] = normal[b * cols + a];
        }
        normal[a * cols + a] += beta * lin.penalty[a];
    }
    solve_real(&mut normal, cols, &mut rhs)?;
    Ok(rhs)
}

/// Result of the beta selection.
#[derive(Debug, Clone)]
pub struct BetaSelection {
    pub beta: f64,
    pub update: Vec<f64>,
    /// predicted residual / residual before
    pub achieved_ratio: f64,
    /// true when even the beta floor cannot reach the target reduction
    pub bracket_failed: bool,
}

/// Bisection on beta so the predicted linear residual equals rho times the
/// current residual, to relative tolerance `beta_rel_tol`.
pub fn select_beta(lin: &Linearization, rho: f64, cfg: &InversionConfig) -> Result<BetaSelection> {
    let before = lin.residual_norm();
    if before <= 0.0 {
        return Err(Error::Domain(
            "beta selection requires a positive current residual".into(),
        ));
    }
    let target = rho * before;
    let eval = |beta: f64| -> Result<(Vec<f64>, f64)> {
        let update = lm_update(lin, beta)?;
        let pred = lin.predicted_residual(&update);
        Ok((update, pred))
    };

    // raise the floor geometrically while the damped normal equations are
    // still singular (rank-deficient Jacobian, e.g. an exact translation
    // nullspace of single-pair phaseless data)
    let mut beta_floor = cfg.beta_min;
    let (update_lo, pred_lo) = loop {
        match eval(beta_floor) {
            Ok(v) => break v,
            Err(Error::SingularSystem(_)) if beta_floor < cfg.beta_max => {
                beta_floor *= 100.0;
            }
            Err(e) => return Err(e),
        }
    };
    if pred_lo > target {
        // even (almost) undamped steps cannot reduce the linear residual to
        // the target; take the floor update and flag it
        return Ok(BetaSelection {
            beta: beta_floor,
            update: update_lo,
            achieved_ratio: pred_lo / before,
            bracket_failed: true,
        });
    }

    let mut lo = beta_floor;
    let mut hi = cfg.beta_max;
    let (mut update_hi, mut pred_hi) = eval(hi)?;
    let mut expansions = 0;
    while pred_hi < target && expansions < 8 {
        hi *= 100.0;
        let r = eval(hi)?;
        update_hi = r.0;
        pred_hi = r.1;
        expansions += 1;
    }
    if pred_hi < target {
        // fully damped step still reduces below the target; the damped limit
        // is the best-conditioned choice
        return Ok(BetaSelection {
            beta: hi,
            update: update_hi,
            achieved_ratio: pred_hi / before,
            bracket_failed: false,
        });
    }

    let mut best = (hi, update_hi, pred_hi);
    for _ in 0..200 {
        let mid = (lo.ln() * 0.5 + hi.ln() * 0.5).exp();
        let (update, pred) = eval(mid)?;
        if (pred - target).abs() <= cfg.beta_rel_tol * target {
            return Ok(BetaSelection {
                beta: mid,
                update,
                achieved_ratio: pred / before,
                bracket_failed: false,
            });
        }
        if pred > target {
            hi = mid;
            best = (mid, update, pred);
        } else {
            lo = mid;
        }
    }
    Ok(BetaSelection {
        beta: best.0,
        update: best.1,
        achieved_ratio: best.2 / before,
        bracket_failed: false,
    })
}

/// Relative error Err_k: mean over pairs of ||F_l - y_l|| / ||y_l||.
pub fn relative_error(values: &[Vec<f64>], data: &[&[f64]]) -> Result<f64> {
    let n_d = values.len();
    assert_eq!(n_d, data.len());
    let mut acc = 0.0;
    for (f, y) in values.iter().zip(data) {
        let ny = discrete_l2_norm(y);
        if ny == 0.0 {
            return Err(Error::Domain("relative error undefined for zero data".into()));
        }
        let diff: Vec<f64> = f.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
        acc += discrete_l2_norm(&diff) / ny;
    }
    Ok(acc / n_d as f64)
}

/// Per-iteration record inside one frequency block.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub beta: f64,
    pub err_after: f64,
    pub bracket_failed: bool,
    pub backtracked: bool,
}

/// Report block for one frequency.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyRecord {
    pub k: f64,
    pub iterations: usize,
    pub err_before: f64,
    pub err_after: f64,
    pub beta_history: Vec<f64>,
    pub steps: Vec<IterationRecord>,
    pub cap_hit: bool,
}

/// Full reconstruction output.
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub final_state: IterateState,
    /// state after each frequency block
    pub trajectory: Vec<IterateState>,
    pub frequencies: Vec<FrequencyRecord>,
}

struct FrequencyLinearization {
    lin: Linearization,
    err: f64,
}

fn linearize_at(
    state: &IterateState,
    physics: &Physics,
    dataset: &PhaselessDataset,
    m: usize,
    cfg: &InversionConfig,
) -> Result<FrequencyLinearization> {
    let curve = Curve::Starlike(state.curve.clone());
    let waves: Vec<_> = (0..dataset.n_pairs())
        .map(|l| dataset.wave(l, m))
        .collect::<Result<Vec<_>>>()?;
    let pairs = par_map(&waves, cfg.threads, |w| {
        linearize_pair(
            &curve,
            physics,
            state.lambda,
            cfg.order,
            w,
            dataset.n_f,
            cfg.n_q,
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let data = dataset.slice_at(m);
    let values: Vec<Vec<f64>> = pairs.iter().map(|p| p.value.clone()).collect();
    let err = relative_error(&values, &data)?;

    let n_f = dataset.n_f;
    let cols = 2 * cfg.order + 3 + usize::from(physics.is_transmission());
    let rows = pairs.len() * n_f;
    let mut jacobian = vec![0.0; rows * cols];
    let mut residual = vec![0.0; rows];
    for (l, pair) in pairs.iter().enumerate() {
        for j in 0..n_f {
            residual[l * n_f + j] = data[l][j] - pair.value[j];
        }
        for (p, col) in pair.columns.iter().enumerate() {
            for (j, v) in col.iter().enumerate() {
                jacobian[(l * n_f + j) * cols + p] = *v;
            }
        }
    }
    Ok(FrequencyLinearization {
        lin: Linearization {
            jacobian,
            rows,
            cols,
            residual,
            weight: 2.0 * std::f64::consts::PI / n_f as f64,
            penalty: penalty_diagonal(cfg.order, cfg.s, physics.is_transmission()),
        },
        err,
    })
}

/// Apply an update with radial-positivity backtracking and lambda clamping.
/// Returns the new state and whether the step was shrunk.
fn apply_update(
    state: &IterateState,
    update: &[f64],
    cfg: &InversionConfig,
    transmission: bool,
) -> (IterateState, bool) {
    let mut scale = 1.0f64;
    for _ in 0..40 {
        let mut cand = state.clone();
        cand.curve.center[0] += scale * update[0];
        cand.curve.center[1] += scale * update[1];
        let n_radial = 2 * cfg.order + 1;
        for (c, u) in cand
            .curve
            .radial
            .coeffs_mut()
            .iter_mut()
            .zip(&update[2..2 + n_radial])
        {
            *c += scale * u;
        }
        if transmission {
            cand.lambda = (state.lambda + scale * update[2 + n_radial]).max(1e-3);
        }
        if cand.curve.min_radius() >= RADIAL_FLOOR {
            return (cand, scale < 1.0);
        }
        scale *= 0.5;
    }
    (state.clone(), true)
}

/// Recursive-in-frequency Newton iteration over the dataset.
pub fn reconstruct(
    initial: &IterateState,
    physics: &Physics,
    dataset: &PhaselessDataset,
    cfg: &InversionConfig,
) -> Result<ReconstructionResult> {
    cfg.validate()?;
    dataset.validate()?;
    if physics.is_transmission() && initial.lambda <= 0.0 {
        return Err(Error::InvalidConfig(
            "transmission inversion needs a positive initial lambda".into(),
        ));
    }
    if initial.curve.radial.order() != cfg.order {
        return Err(Error::InvalidConfig(format!(
            "initial radial order {} does not match config order {}",
            initial.curve.radial.order(),
            cfg.order
        )));
    }

    let stop = cfg.stop_threshold();
    let mut state = initial.clone();
    let mut trajectory = Vec::with_capacity(dataset.ks.len());
    let mut frequencies = Vec::with_capacity(dataset.ks.len());

    for m in 0..dataset.ks.len() {
        let mut steps: Vec<IterationRecord> = Vec::new();
        let mut beta_history = Vec::new();
        let mut err_before = f64::NAN;
        let mut err_after;
        let mut iterations = 0;
        loop {
            let fl = linearize_at(&state, physics, dataset, m, cfg)?;
            if iterations == 0 {
                err_before = fl.err;
            }
            if let Some(last) = steps.last_mut() {
                if last.err_after.is_nan() {
                    last.err_after = fl.err;
                }
            }
            err_after = fl.err;
            if fl.err < stop || iterations >= cfg.max_iterations {
                break;
            }
            let sel = select_beta(&fl.lin, cfg.rho, cfg)?;
            let (next, backtracked) =
                apply_update(&state, &sel.update, cfg, physics.is_transmission());
            state = next;
            iterations += 1;
            beta_history.push(sel.beta);
            steps.push(IterationRecord {
                beta: sel.beta,
                err_after: f64::NAN, // measured at the next loop entry
                bracket_failed: sel.bracket_failed,
                backtracked,
            });
        }
        let cap_hit = iterations >= cfg.max_iterations && err_after >= stop;
        frequencies.push(FrequencyRecord {
            k: dataset.ks[m],
            iterations,
            err_before,
            err_after,
            beta_history,
            steps,
            cap_hit,
        });
        trajectory.push(state.clone());
    }
    Ok(ReconstructionResult {
        final_state: state,
        trajectory,
        frequencies,
    })
}
