//! Forward-solver invariants: reciprocity, spectral convergence under node
//! doubling, the low-frequency limit and the 2D optical theorem diagnostic.

use num_complex::Complex64;
use scatter2d::geometry::{BenchmarkCurve, Curve};
use scatter2d::incident::PlaneWaveSuperposition;
use scatter2d::oracle::series_farfield;
use scatter2d::solver::{far_field_for, BoundaryCondition, SolverConfig};

/// u_inf(xhat; d) = u_inf(-d; -xhat): sample incident directions on the same
/// grid as the observations so both sides are nodal values.
fn reciprocity_defect(curve: &Curve, bc: &BoundaryCondition, k: f64, n_dirs: usize) -> f64 {
    let cfg = SolverConfig {
        n_q: 96,
        n_q_max: 256,
        tol: 1e-9,
        adaptive: true,
    };
    let patterns: Vec<_> = (0..n_dirs)
        .map(|m| {
            let th = 2.0 * std::f64::consts::PI * m as f64 / n_dirs as f64;
            let w = PlaneWaveSuperposition::single(k, [th.cos(), th.sin()]).unwrap();
            far_field_for(curve, bc, &w, n_dirs, &cfg).unwrap()
        })
        .collect();
    let mut defect = 0.0f64;
    let half = n_dirs / 2;
    for m in 0..n_dirs {
        for j in 0..n_dirs {
            // u_inf(xhat_j; d_m) vs u_inf(-d_m; -xhat_j)
            let lhs = patterns[m].samples[j];
            let rhs = patterns[(j + half) % n_dirs].samples[(m + half) % n_dirs];
            defect = defect.max((lhs - rhs).norm());
        }
    }
    defect
}

#[test]
fn reciprocity_on_the_kite_at_k3() {
    let kite = Curve::Benchmark(BenchmarkCurve::KiteShaped);
    for bc in [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Neumann,
        BoundaryCondition::Transmission {
            n: Complex64::new(0.64, 0.0),
            lambda: 1.2,
        },
    ] {
        let d = reciprocity_defect(&kite, &bc, 3.0, 8);
        assert!(d < 1e-8, "reciprocity defect {d:e} for {bc:?}");
    }
}

#[test]
fn node_doubling_changes_table_curves_below_1e6_at_k11() {
    let w = PlaneWaveSuperposition::single(11.0, [1.0, 0.0]).unwrap();
    for curve in [
        Curve::Benchmark(BenchmarkCurve::Circle {
            r0: 1.0,
            center: [0.0, 0.0],
        }),
        Curve::Benchmark(BenchmarkCurve::AppleShaped),
        Curve::Benchmark(BenchmarkCurve::KiteShaped),
        Curve::Benchmark(BenchmarkCurve::RoundedTriangle),
    ] {
        let coarse = far_field_for(
            &curve,
            &BoundaryCondition::Dirichlet,
            &w,
            64,
            &SolverConfig::fixed(64),
        )
        .unwrap();
        let fine = far_field_for(
            &curve,
            &BoundaryCondition::Dirichlet,
            &w,
            64,
            &SolverConfig::fixed(128),
        )
        .unwrap();
        let change = coarse.sup_diff(&fine);
        assert!(change < 1e-6, "{curve:?}: doubling changed far field by {change:e}");
    }
}

#[test]
fn low_frequency_circle_pattern_nearly_constant() {
    let w = PlaneWaveSuperposition::single(0.01, [1.0, 0.0]).unwrap();
    let far = far_field_for(
        &Curve::Benchmark(BenchmarkCurve::Circle {
            r0: 1.0,
            center: [0.0, 0.0],
        }),
        &BoundaryCondition::Dirichlet,
        &w,
        64,
        &SolverConfig::fixed(64),
    )
    .unwrap();
    let mods: Vec<f64> = far.samples.iter().map(|v| v.norm()).collect();
    let mean = mods.iter().sum::<f64>() / mods.len() as f64;
    let spread = mods.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    assert!(spread < 0.01 * mean);
}

#[test]
fn optical_theorem_for_dirichlet_circle() {
    // energy conservation in 2D:
    //   int_{S1} |u_inf|^2 ds = -sqrt(8 pi / k) Re[e^{i pi/4} u_inf(d; d)]
    let k = 2.0;
    let n_f = 256;
    let d = [1.0, 0.0];
    let w = PlaneWaveSuperposition::single(k, d).unwrap();
    let circle = Curve::Benchmark(BenchmarkCurve::Circle {
        r0: 1.0,
        center: [0.0, 0.0],
    });
    for far in [
        far_field_for(
            &circle,
            &BoundaryCondition::Dirichlet,
            &w,
            n_f,
            &SolverConfig::fixed(96),
        )
        .unwrap(),
        series_farfield(1.0, [0.0, 0.0], &BoundaryCondition::Dirichlet, k, d, n_f).unwrap(),
    ] {
        let total: f64 = far
            .samples
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            * 2.0
            * std::f64::consts::PI
            / n_f as f64;
        let forward = far.samples[0]; // xhat_0 = d
        let rhs = -(8.0 * std::f64::consts::PI / k).sqrt()
            * ((Complex64::i() * std::f64::consts::PI / 4.0).exp() * forward).re;
        let rel = ((total - rhs) / total).abs();
        assert!(rel < 1e-6, "optical theorem defect {rel:e}");
    }
}
