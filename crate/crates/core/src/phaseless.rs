//! Phaseless far-field data |u_inf|^2, the multiplicative noise model, the
//! measured-dataset container and the translation-invariance utilities.
//!
//! With a single incident plane wave the phaseless pattern is invariant under
//! every obstacle translation. With a two-wave superposition the invariance
//! survives only on the lattice of lines
//!   l_n = a n_{d1,d2} + [2 pi n / (k |d1-d2|^2)] (d1 - d2),  a in R, n in Z,
//! where n_{d1,d2} is a unit vector orthogonal to d1 - d2. The offset
//! generator and discrepancy checker below verify both statements.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::incident::PlaneWaveSuperposition;
use crate::solver::{far_field_for, BoundaryCondition, FarFieldPattern, SolverConfig};

/// Pointwise squared modulus of a far-field pattern.
pub fn intensity(far: &FarFieldPattern) -> Vec<f64> {
    far.intensity()
}

/// Phaseless far-field measurements indexed by direction pair l and
/// frequency m; each entry holds |u_inf(xhat_j)|^2 on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaselessDataset {
    /// noise ratio the stored samples carry (0 for clean data)
    pub delta: f64,
    /// RNG seed used for the noise draw
    pub seed: u64,
    pub n_f: usize,
    /// incidence angle sets (radians), one or two angles per entry
    pub pair_angles: Vec<Vec<f64>>,
    /// strictly increasing frequency schedule
    pub ks: Vec<f64>,
    /// entries[l][m][j]
    pub entries: Vec<Vec<Vec<f64>>>,
}

impl PhaselessDataset {
    pub fn validate(&self) -> Result<()> {
        if !self.ks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "frequency schedule must be strictly increasing".into(),
            ));
        }
        if self.delta < 0.0 || self.delta >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "noise ratio must lie in [0, 1), got {}",
                self.delta
            )));
        }
        if self.entries.len() != self.pair_angles.len() {
            return Err(Error::InvalidConfig("entry/pair count mismatch".into()));
        }
        for row in &self.entries {
            if row.len() != self.ks.len() {
                return Err(Error::InvalidConfig("entry/frequency count mismatch".into()));
            }
            for block in row {
                if block.len() != self.n_f {
                    return Err(Error::InvalidConfig("entry sample count mismatch".into()));
                }
            }
        }
        Ok(())
    }

    pub fn n_pairs(&self) -> usize {
        self.pair_angles.len()
    }

    /// Incident superposition for pair l at frequency index m.
    pub fn wave(&self, l: usize, m: usize) -> Result<PlaneWaveSuperposition> {
        PlaneWaveSuperposition::from_angles(self.ks[m], &self.pair_angles[l])
    }

    /// All intensity blocks at frequency index m (one per pair).
    pub fn slice_at(&self, m: usize) -> Vec<&[f64]> {
        self.entries.iter().map(|row| row[m].as_slice()).collect()
    }
}

/// Synthesize the noise-free dataset with forward solves.
pub fn synthesize_dataset(
    curve: &Curve,
    bc: &BoundaryCondition,
    pair_angles: &[Vec<f64>],
    ks: &[f64],
    n_f: usize,
    cfg: &SolverConfig,
) -> Result<PhaselessDataset> {
    synthesize_dataset_threaded(curve, bc, pair_angles, ks, n_f, cfg, 1)
}

/// Synthesis with the (l, m) forward solves distributed over worker threads;
/// the result is identical for any thread count.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_dataset_threaded(
    curve: &Curve,
    bc: &BoundaryCondition,
    pair_angles: &[Vec<f64>],
    ks: &[f64],
    n_f: usize,
    cfg: &SolverConfig,
    threads: usize,
) -> Result<PhaselessDataset> {
    let jobs: Vec<(usize, usize)> = (0..pair_angles.len())
        .flat_map(|l| (0..ks.len()).map(move |m| (l, m)))
        .collect();
    let results = crate::util::par_map(&jobs, threads, |&(l, m)| -> Result<Vec<f64>> {
        let w = PlaneWaveSuperposition::from_angles(ks[m], &pair_angles[l])?;
        let far = far_field_for(curve, bc, &w, n_f, cfg)?;
        Ok(far.intensity())
    });
    let mut entries = vec![vec![Vec::new(); ks.len()]; pair_angles.len()];
    for ((l, m), block) in jobs.into_iter().zip(results) {
        entries[l][m] = block?;
    }
    let data = PhaselessDataset {
        delta: 0.0,
        seed: 0,
        n_f,
        pair_angles: pair_angles.to_vec(),
        ks: ks.to_vec(),
        entries,
    };
    data.validate()?;
    Ok(data)
}

/// Standard normal draw clipped to [-1, 1] by resampling, so the relative
/// perturbation bound |zeta| <= 1 is guaranteed for every realization.
fn clipped_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        // Box-Muller from two uniforms
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        let z = (-2.0 * u1.max(f64::MIN_POSITIVE).ln()).sqrt()
            * (2.0 * std::f64::consts::PI * u2).cos();
        if z.abs() <= 1.0 {
            return z;
        }
    }
}

/// Multiply every sample by (1 + delta zeta); deterministic under the seed.
pub fn add_noise(data: &PhaselessDataset, delta: f64, seed: u64) -> Result<PhaselessDataset> {
    if delta < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "noise ratio must be nonnegative, got {delta}"
        )));
    }
    if delta >= 1.0 {
        return Err(Error::InvalidConfig(format!(
            "noise ratio must be < 1 so intensities stay nonnegative, got {delta}"
        )));
    }
    let mut out = data.clone();
    out.delta = delta;
    out.seed = seed;
    if delta == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for row in &mut out.entries {
        for block in row {
            for v in block.iter_mut() {
                *v *= 1.0 + delta * clipped_normal(&mut rng);
            }
        }
    }
    Ok(out)
}

/// Translation offset on the invariance lattice of a direction pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationOffset {
    /// unit vector with n.d1 = n.d2 (counter-clockwise rotation of d1-d2)
    pub normal_dir: [f64; 2],
    pub lattice_index: i64,
    pub along: f64,
    pub offset: [f64; 2],
}

/// l = a n_{d1,d2} + [(2 pi n + tau) / (k |d1-d2|^2)] (d1 - d2).
pub fn invariance_offset(
    d1: [f64; 2],
    d2: [f64; 2],
    k: f64,
    n: i64,
    a: f64,
    tau: Option<f64>,
) -> Result<TranslationOffset> {
    let diff = [d1[0] - d2[0], d1[1] - d2[1]];
    let len2 = diff[0] * diff[0] + diff[1] * diff[1];
    if len2.sqrt() < 1e-12 {
        return Err(Error::Domain(
            "invariance offset requires distinct directions".into(),
        ));
    }
    if k <= 0.0 {
        return Err(Error::Domain(format!("wavenumber must be > 0, got {k}")));
    }
    let len = len2.sqrt();
    // counter-clockwise 90 degree rotation of the unit difference vector
    let normal_dir = [-diff[1] / len, diff[0] / len];
    let scale = (2.0 * std::f64::consts::PI * n as f64 + tau.unwrap_or(0.0)) / (k * len2);
    Ok(TranslationOffset {
        normal_dir,
        lattice_index: n,
        along: a,
        offset: [
            a * normal_dir[0] + scale * diff[0],
            a * normal_dir[1] + scale * diff[1],
        ],
    })
}

/// Sup-norm discrepancy between the phaseless patterns of the obstacle and
/// its translate: sup_j | |u_inf_l| - |u_inf| |.
pub fn check_invariance(
    curve: &Curve,
    bc: &BoundaryCondition,
    w: &PlaneWaveSuperposition,
    offset: [f64; 2],
    n_f: usize,
    cfg: &SolverConfig,
) -> Result<f64> {
    let base = far_field_for(curve, bc, w, n_f, cfg)?;
    let shifted_curve = curve.clone().translated(offset);
    let shifted = far_field_for(&shifted_curve, bc, w, n_f, cfg)?;
    let mut sup = 0.0f64;
    for (a, b) in base.samples.iter().zip(&shifted.samples) {
        sup = sup.max((b.norm() - a.norm()).abs());
    }
    Ok(sup)
}

// --- dataset file format -------------------------------------------------
//
// line 1: JSON header {"delta":..,"seed":..,"nf":..,
//                      "pairs":[{"angles_deg":[..]},..],"ks":[..]}
// following lines: CSV rows  l,m,j,intensity

#[derive(serde::Serialize, serde::Deserialize)]
struct DatasetHeader {
    delta: f64,
    seed: u64,
    nf: usize,
    pairs: Vec<PairHeader>,
    ks: Vec<f64>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PairHeader {
    angles_deg: Vec<f64>,
}

pub fn write_dataset(data: &PhaselessDataset, mut out: impl Write) -> Result<()> {
    let header = DatasetHeader {
        delta: data.delta,
        seed: data.seed,
        nf: data.n_f,
        pairs: data
            .pair_angles
            .iter()
            .map(|angles| PairHeader {
                angles_deg: angles.iter().map(|a| a.to_degrees()).collect(),
            })
            .collect(),
        ks: data.ks.clone(),
    };
    writeln!(out, "{}", serde_json::to_string(&header)?)?;
    for (l, row) in data.entries.iter().enumerate() {
        for (m, block) in row.iter().enumerate() {
            for (j, v) in block.iter().enumerate() {
                writeln!(out, "{},{},{},{}", l + 1, m + 1, j + 1, v)?;
            }
        }
    }
    Ok(())
}

pub fn read_dataset(input: impl BufRead) -> Result<PhaselessDataset> {
    let mut lines = input.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty dataset file".into()))??;
    let header: DatasetHeader = serde_json::from_str(&header_line)?;
    let n_pairs = header.pairs.len();
    let n_k = header.ks.len();
    let mut entries = vec![vec![vec![0.0f64; header.nf]; n_k]; n_pairs];
    let mut seen = vec![vec![vec![false; header.nf]; n_k]; n_pairs];
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidConfig(format!(
                "malformed dataset row: {line}"
            )));
        }
        let l: usize = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad pair index in: {line}")))?;
        let m: usize = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad frequency index in: {line}")))?;
        let j: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad sample index in: {line}")))?;
        let v: f64 = parts[3]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad intensity in: {line}")))?;
        if l == 0 || l > n_pairs || m == 0 || m > n_k || j == 0 || j > header.nf {
            return Err(Error::InvalidConfig(format!("index out of range: {line}")));
        }
        entries[l - 1][m - 1][j - 1] = v;
        seen[l - 1][m - 1][j - 1] = true;
    }
    if !seen.iter().flatten().flatten().all(|&s| s) {
        return Err(Error::InvalidConfig("dataset file is missing samples".into()));
    }
    let data = PhaselessDataset {
        delta: header.delta,
        seed: header.seed,
        n_f: header.nf,
        pair_angles: header
            .pairs
            .iter()
            .map(|p| p.angles_deg.iter().map(|a| a.to_radians()).collect())
            .collect(),
        ks: header.ks,
        entries,
    };
    data.validate()?;
    Ok(data)
}

/// Discrete L2(S^1) norm: sqrt((2 pi / n_f) sum |g_j|^2).
pub fn discrete_l2_norm(values: &[f64]) -> f64 {
    let w = 2.0 * std::f64::consts::PI / values.len() as f64;
    (values.iter().map(|v| v * v).sum::<f64>() * w).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BenchmarkCurve;
    use num_complex::Complex64;

    #[test]
    fn intensity_basics() {
        let far = FarFieldPattern::new(
            1.0,
            vec![[1.0, 0.0]],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)],
        )
        .unwrap();
        let i = intensity(&far);
        assert_eq!(i[0], 0.0);
        assert!((i[1] - 2.0).abs() < 1e-15);
    }

    fn toy_dataset() -> PhaselessDataset {
        PhaselessDataset {
            delta: 0.0,
            seed: 0,
            n_f: 4,
            pair_angles: vec![vec![0.0, 2.0], vec![1.0]],
            ks: vec![0.5, 1.0, 3.0],
            entries: vec![
                vec![vec![1.0, 2.0, 3.0, 4.0]; 3],
                vec![vec![0.5, 0.25, 4.0, 1.5]; 3],
            ],
        }
    }

    #[test]
    fn noise_is_deterministic_and_bounded() {
        let clean = toy_dataset();
        let a = add_noise(&clean, 0.05, 7).unwrap();
        let b = add_noise(&clean, 0.05, 7).unwrap();
        assert_eq!(a, b);
        let c = add_noise(&clean, 0.05, 8).unwrap();
        assert_ne!(a, c);
        // delta = 0 is the identity
        let id = add_noise(&clean, 0.0, 3).unwrap();
        assert_eq!(id.entries, clean.entries);

        // bound per block for many realizations
        for seed in 0..200 {
            let noisy = add_noise(&clean, 0.05, seed).unwrap();
            for (row_n, row_c) in noisy.entries.iter().zip(&clean.entries) {
                for (bn, bc) in row_n.iter().zip(row_c) {
                    let diff: Vec<f64> = bn.iter().zip(bc).map(|(x, y)| x - y).collect();
                    assert!(
                        discrete_l2_norm(&diff) <= 0.05 * discrete_l2_norm(bc) + 1e-15
                    );
                }
            }
        }
    }

    #[test]
    fn noise_rejects_delta_at_least_one() {
        assert!(add_noise(&toy_dataset(), 1.0, 1).is_err());
    }

    #[test]
    fn offset_lattice_values() {
        let d1 = [1.0, 0.0];
        let d2 = [0.0, 1.0];
        let o = invariance_offset(d1, d2, 1.0, 1, 0.0, None).unwrap();
        let pi = std::f64::consts::PI;
        assert!((o.offset[0] - pi).abs() < 1e-12 && (o.offset[1] + pi).abs() < 1e-12);

        let o = invariance_offset(d1, d2, 1.0, 0, 0.0, None).unwrap();
        assert!(o.offset[0].abs() < 1e-15 && o.offset[1].abs() < 1e-15);

        let o = invariance_offset(d1, d2, 1.0, 0, 1.0, None).unwrap();
        let s = 0.5f64.sqrt();
        assert!((o.offset[0] - s).abs() < 1e-14 && (o.offset[1] - s).abs() < 1e-14);
        // n.(d1 - d2) = 0
        let dot = o.normal_dir[0] * (d1[0] - d2[0]) + o.normal_dir[1] * (d1[1] - d2[1]);
        assert!(dot.abs() < 1e-14);
    }

    #[test]
    fn offset_tau_probe_shifts_along_the_difference() {
        // l_{n,tau} - l_n = [tau/(k|d1-d2|^2)](d1-d2)
        let d1 = [1.0, 0.0];
        let d2 = [0.0, 1.0];
        let k = 2.0;
        let base = invariance_offset(d1, d2, k, 1, 0.3, None).unwrap();
        let tau = 1.1;
        let probed = invariance_offset(d1, d2, k, 1, 0.3, Some(tau)).unwrap();
        let scale = tau / (k * 2.0);
        assert!((probed.offset[0] - base.offset[0] - scale * (d1[0] - d2[0])).abs() < 1e-14);
        assert!((probed.offset[1] - base.offset[1] - scale * (d1[1] - d2[1])).abs() < 1e-14);
    }

    #[test]
    fn offset_rejects_equal_directions() {
        assert!(invariance_offset([1.0, 0.0], [1.0, 0.0], 1.0, 1, 0.0, None).is_err());
    }

    #[test]
    fn zero_shift_has_zero_discrepancy() {
        let curve = Curve::Benchmark(BenchmarkCurve::AppleShaped);
        let w = PlaneWaveSuperposition::from_angles(1.0, &[std::f64::consts::PI, 1.5 * std::f64::consts::PI]).unwrap();
        let d = check_invariance(
            &curve,
            &BoundaryCondition::Dirichlet,
            &w,
            [0.0, 0.0],
            32,
            &SolverConfig::fixed(48),
        )
        .unwrap();
        assert!(d < 1e-13);
    }

    #[test]
    fn dataset_file_round_trip() {
        let data = add_noise(&toy_dataset(), 0.05, 11).unwrap();
        let mut buf = Vec::new();
        write_dataset(&data, &mut buf).unwrap();
        let back = read_dataset(std::io::BufReader::new(buf.as_slice())).unwrap();
        assert_eq!(data, back);
        // byte-identical rewrite
        let mut buf2 = Vec::new();
        write_dataset(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }
}
