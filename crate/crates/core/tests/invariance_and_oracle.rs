//! Cross-module checks: translation relations for the transmission problem,
//! the off-center oracle against the solver, single-incidence invariance for
//! arbitrary shifts, and the periodicity of the two-wave discrepancy along
//! the direction difference.

use num_complex::Complex64;
use scatter2d::geometry::{BenchmarkCurve, Curve};
use scatter2d::incident::PlaneWaveSuperposition;
use scatter2d::oracle::series_farfield_superposition;
use scatter2d::phaseless::check_invariance;
use scatter2d::solver::{far_field_for, BoundaryCondition, SolverConfig};

fn apple() -> Curve {
    Curve::Benchmark(BenchmarkCurve::AppleShaped)
}

#[test]
fn transmission_translation_phase_relation() {
    let bc = BoundaryCondition::Transmission {
        n: Complex64::new(0.64, 0.0),
        lambda: 1.2,
    };
    let k = 1.0;
    let d = [0.6, 0.8];
    let w = PlaneWaveSuperposition::single(k, d).unwrap();
    let l = [0.4, -0.3];
    let cfg = SolverConfig::fixed(96);
    let base = far_field_for(&apple(), &bc, &w, 48, &cfg).unwrap();
    let shifted = far_field_for(&apple().translated(l), &bc, &w, 48, &cfg).unwrap();
    let mut err = 0.0f64;
    for j in 0..48 {
        let xhat = base.observation_dir(j);
        let phase = (Complex64::i() * k * (l[0] * (d[0] - xhat[0]) + l[1] * (d[1] - xhat[1])))
            .exp();
        err = err.max((shifted.samples[j] - phase * base.samples[j]).norm());
    }
    assert!(err < 1e-8, "transmission translation relation sup err {err:e}");
}

#[test]
fn solver_matches_shifted_circle_oracle() {
    let center = [0.7, -0.4];
    let circle = Curve::Benchmark(BenchmarkCurve::Circle { r0: 1.0, center });
    let k = 2.0;
    let w = PlaneWaveSuperposition::new(k, vec![[1.0, 0.0], [0.0, 1.0]]).unwrap();
    for bc in [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Neumann,
        BoundaryCondition::Impedance { mu: 2.0 },
        BoundaryCondition::Transmission {
            n: Complex64::new(0.64, 0.0),
            lambda: 1.2,
        },
    ] {
        let far = far_field_for(&circle, &bc, &w, 48, &SolverConfig::fixed(96)).unwrap();
        let want = series_farfield_superposition(1.0, center, &bc, &w, 48).unwrap();
        let err = far.sup_diff(&want);
        assert!(err < 1e-8, "{bc:?}: shifted-circle oracle sup err {err:e}");
    }
}

#[test]
fn single_wave_invariance_holds_for_every_shift() {
    let w = PlaneWaveSuperposition::single(1.0, [1.0, 0.0]).unwrap();
    let cfg = SolverConfig::default();
    for l in [[0.37, -0.11], [1.3, 0.9], [-0.8, 0.25]] {
        let d = check_invariance(&apple(), &BoundaryCondition::Dirichlet, &w, l, 48, &cfg)
            .unwrap();
        assert!(d < 1e-7, "single-wave discrepancy {d:e} at shift {l:?}");
    }
}

#[test]
fn discrepancy_is_periodic_along_the_direction_difference() {
    // shifting any obstacle by one lattice period leaves the phaseless
    // pattern unchanged, so the discrepancy to the base obstacle repeats
    let (d1, d2) = ([-1.0, 0.0], [0.0, -1.0]);
    let k = 1.0;
    let w = PlaneWaveSuperposition::new(k, vec![d1, d2]).unwrap();
    let diff = [d1[0] - d2[0], d1[1] - d2[1]];
    let len2 = diff[0] * diff[0] + diff[1] * diff[1];
    let period = [
        2.0 * std::f64::consts::PI / (k * len2) * diff[0],
        2.0 * std::f64::consts::PI / (k * len2) * diff[1],
    ];
    let l0 = [0.37 * diff[0], 0.37 * diff[1]]; // generic off-lattice shift
    let l1 = [l0[0] + period[0], l0[1] + period[1]];
    let cfg = SolverConfig::default();
    let bc = BoundaryCondition::Dirichlet;
    let a = check_invariance(&apple(), &bc, &w, l0, 48, &cfg).unwrap();
    let b = check_invariance(&apple(), &bc, &w, l1, 48, &cfg).unwrap();
    assert!(a > 1e-3, "probe should be off-lattice, got {a:e}");
    assert!(
        (a - b).abs() < 1e-7 * a.max(1.0),
        "periodicity broken: {a:e} vs {b:e}"
    );
}
