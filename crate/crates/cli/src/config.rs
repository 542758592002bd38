//! Experiment configuration: one JSON document drives every subcommand.
//! Angles are given in degrees at this boundary and converted to radians
//! once, on load.

use num_complex::Complex64;
use serde::Deserialize;

use scatter2d::error::{Error, Result};
use scatter2d::geometry::{BenchmarkCurve, Curve, StarlikeCurve};
use scatter2d::inversion::{InversionConfig, IterateState};
use scatter2d::solver::BoundaryCondition;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub obstacle: ObstacleSpec,
    pub bc: BcSpec,
    /// one or two incidence angles (degrees) per direction set
    pub pairs_deg: Vec<Vec<f64>>,
    pub ks: Vec<f64>,
    #[serde(default = "default_nf")]
    pub nf: usize,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
    pub init: Option<InitSpec>,
    #[serde(default)]
    pub inversion: InversionOverrides,
    pub shifts: Option<ShiftSpec>,
    #[serde(default = "default_oracle_radius")]
    pub oracle_radius: f64,
    #[serde(default = "default_out")]
    pub out: String,
}

fn default_nf() -> usize {
    128
}

fn default_oracle_radius() -> f64 {
    1.0
}

fn default_out() -> String {
    "out".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub benchmark: Option<BenchmarkCurve>,
    pub curve: Option<StarlikeCurve>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BcSpec {
    Dirichlet,
    Neumann,
    Impedance { mu: f64 },
    Transmission {
        n_re: f64,
        #[serde(default)]
        n_im: f64,
        lambda: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub circle: Option<CircleInit>,
    pub state: Option<serde_json::Value>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

fn default_lambda() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleInit {
    pub r0: f64,
    pub center: [f64; 2],
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InversionOverrides {
    pub s: Option<f64>,
    pub m: Option<usize>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub delta: Option<f64>,
    pub max_iterations: Option<usize>,
    pub nq: Option<usize>,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub beta_rel_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub lattice: Option<LatticeSpec>,
    #[serde(default)]
    pub extra: Vec<[f64; 2]>,
    #[serde(default)]
    pub off_lattice_probe: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub n_min: i64,
    pub n_max: i64,
    pub a_values: Vec<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.pairs_deg.is_empty() {
            return Err(Error::InvalidConfig("field pairs_deg: no direction sets".into()));
        }
        for (i, p) in self.pairs_deg.iter().enumerate() {
            if p.is_empty() || p.len() > 2 {
                return Err(Error::InvalidConfig(format!(
                    "field pairs_deg[{i}]: expected 1 or 2 angles, got {}",
                    p.len()
                )));
            }
        }
        if self.ks.is_empty() || !self.ks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "field ks: frequencies must be nonempty and strictly increasing".into(),
            ));
        }
        if self.nf < 2 {
            return Err(Error::InvalidConfig(format!(
                "field nf: need at least 2 observation points, got {}",
                self.nf
            )));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::InvalidConfig(format!(
                "field delta: noise ratio must lie in [0,1), got {}",
                self.delta
            )));
        }
        if self.obstacle.benchmark.is_none() && self.obstacle.curve.is_none() {
            return Err(Error::InvalidConfig(
                "field obstacle: needs either benchmark or curve".into(),
            ));
        }
        Ok(())
    }

    pub fn curve(&self) -> Result<Curve> {
        if let Some(b) = &self.obstacle.benchmark {
            Ok(Curve::Benchmark(b.clone()))
        } else if let Some(c) = &self.obstacle.curve {
            Ok(Curve::Starlike(c.clone()))
        } else {
            Err(Error::InvalidConfig("obstacle unspecified".into()))
        }
    }

    pub fn boundary_condition(&self) -> BoundaryCondition {
        match &self.bc {
            BcSpec::Dirichlet => BoundaryCondition::Dirichlet,
            BcSpec::Neumann => BoundaryCondition::Neumann,
            BcSpec::Impedance { mu } => BoundaryCondition::Impedance { mu: *mu },
            BcSpec::Transmission { n_re, n_im, lambda } => BoundaryCondition::Transmission {
                n: Complex64::new(*n_re, *n_im),
                lambda: *lambda,
            },
        }
    }

    pub fn pair_angles_rad(&self) -> Vec<Vec<f64>> {
        self.pairs_deg
            .iter()
            .map(|p| p.iter().map(|a| a.to_radians()).collect())
            .collect()
    }

    /// Location recovery needs two direction sets with non-parallel bisector
    /// normals; single-set or single-wave configurations only pin the shape.
    pub fn location_recovery_warning(&self) -> Option<String> {
        let pairs = self.pair_angles_rad();
        let mut normals: Vec<[f64; 2]> = Vec::new();
        for p in &pairs {
            if p.len() == 2 {
                let (d1, d2) = ([p[0].cos(), p[0].sin()], [p[1].cos(), p[1].sin()]);
                let diff = [d1[0] - d2[0], d1[1] - d2[1]];
                let len = (diff[0] * diff[0] + diff[1] * diff[1]).sqrt();
                if len > 1e-12 {
                    normals.push([-diff[1] / len, diff[0] / len]);
                }
            }
        }
        let ok = normals.iter().enumerate().any(|(i, a)| {
            normals[i + 1..]
                .iter()
                .any(|b| (a[0] * b[1] - a[1] * b[0]).abs() > 1e-10)
        });
        if ok {
            None
        } else {
            Some(
                "configuration cannot pin the obstacle location: fewer than two \
                 direction sets with non-parallel bisector normals"
                    .into(),
            )
        }
    }

    pub fn inversion_config(&self, data_delta: f64, threads: usize) -> InversionConfig {
        let o = &self.inversion;
        let d = InversionConfig::default();
        InversionConfig {
            s: o.s.unwrap_or(d.s),
            order: o.m.unwrap_or(d.order),
            rho: o.rho.unwrap_or(d.rho),
            tau_stop: o.tau.unwrap_or(d.tau_stop),
            delta: o.delta.unwrap_or(data_delta),
            max_iterations: o.max_iterations.unwrap_or(d.max_iterations),
            n_q: o.nq.unwrap_or(d.n_q),
            beta_min: o.beta_min.unwrap_or(d.beta_min),
            beta_max: o.beta_max.unwrap_or(d.beta_max),
            beta_rel_tol: o.beta_rel_tol.unwrap_or(d.beta_rel_tol),
            threads,
        }
    }

    pub fn initial_state(&self, order: usize) -> Result<IterateState> {
        let init = self
            .init
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("field init: required for inversion".into()))?;
        if let Some(c) = &init.circle {
            return Ok(IterateState::new(
                StarlikeCurve::circle_with_order(c.r0, c.center, order),
                init.lambda,
            ));
        }
        if let Some(v) = &init.state {
            #[derive(Deserialize)]
            struct StateFile {
                curve: StarlikeCurve,
                #[serde(default = "default_lambda")]
                lambda: f64,
            }
            let s: StateFile = serde_json::from_value(v.clone())?;
            if s.curve.radial.order() != order {
                return Err(Error::InvalidConfig(format!(
                    "field init.state: radial order {} does not match inversion order {order}",
                    s.curve.radial.order()
                )));
            }
            return Ok(IterateState::new(s.curve, s.lambda));
        }
        Err(Error::InvalidConfig(
            "field init: needs either circle or state".into(),
        ))
    }
}
