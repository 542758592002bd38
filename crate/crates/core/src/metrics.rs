//! Representation-invariant comparison metrics for reconstructed boundaries:
//! region centroids, radial profiles about a reference point, relative L2
//! boundary error and Hausdorff distance between sampled curves.
//!
//! The (center, radial) split of a starlike iterate is not unique, so
//! location accuracy is judged by region centroids and shape accuracy by the
//! radial profile about a common reference point.

use crate::geometry::Curve;

/// Area centroid of the region enclosed by a closed polyline (shoelace).
pub fn polyline_centroid(points: &[[f64; 2]]) -> [f64; 2] {
    let n = points.len();
    let mut area2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        let cross = p[0] * q[1] - q[0] * p[1];
        area2 += cross;
        cx += (p[0] + q[0]) * cross;
        cy += (p[1] + q[1]) * cross;
    }
    [cx / (3.0 * area2), cy / (3.0 * area2)]
}

pub fn sample_points(curve: &Curve, n: usize) -> Vec<[f64; 2]> {
    curve
        .sample_polyline(n)
        .into_iter()
        .map(|(_, x, y)| [x, y])
        .collect()
}

/// Region centroid of a closed curve from a dense sampling.
pub fn curve_centroid(curve: &Curve, n: usize) -> [f64; 2] {
    polyline_centroid(&sample_points(curve, n))
}

/// Radius of the outermost intersection of the ray from `center` at angle
/// `theta` with the closed polyline. The segment-parameter window is widened
/// slightly so hits that land exactly on a shared vertex are not lost to
/// rounding on both adjacent segments.
fn ray_radius(points: &[[f64; 2]], center: [f64; 2], theta: f64) -> Option<f64> {
    let (s, c) = theta.sin_cos();
    let u = [c, s];
    let n = points.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let p = [points[i][0] - center[0], points[i][1] - center[1]];
        let q = [
            points[(i + 1) % n][0] - center[0],
            points[(i + 1) % n][1] - center[1],
        ];
        let d = [q[0] - p[0], q[1] - p[1]];
        // solve p + s d = t u
        let det = d[0] * u[1] - d[1] * u[0];
        if det.abs() < 1e-14 {
            continue;
        }
        let ss = (p[1] * u[0] - p[0] * u[1]) / det;
        if !(-1e-9..1.0 + 1e-9).contains(&ss) {
            continue;
        }
        let hit = [p[0] + ss * d[0], p[1] + ss * d[1]];
        let t = hit[0] * u[0] + hit[1] * u[1];
        if t > 0.0 {
            best = Some(best.map_or(t, |b: f64| b.max(t)));
        }
    }
    best
}

/// Radial profile r(theta_j) of a closed curve about a reference point on a
/// uniform angle grid. Angles whose ray-cast fails (degenerate rounding)
/// fall back to the angularly nearest sample point.
pub fn radial_profile(curve: &Curve, center: [f64; 2], n_angles: usize) -> Vec<f64> {
    let pts = sample_points(curve, 2048);
    (0..n_angles)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_angles as f64;
            ray_radius(&pts, center, theta).unwrap_or_else(|| {
                let mut best = (f64::INFINITY, 0.0);
                for p in &pts {
                    let dx = p[0] - center[0];
                    let dy = p[1] - center[1];
                    let ang = dy.atan2(dx);
                    let mut gap = (ang - theta).rem_euclid(2.0 * std::f64::consts::PI);
                    if gap > std::f64::consts::PI {
                        gap = 2.0 * std::f64::consts::PI - gap;
                    }
                    if gap < best.0 {
                        best = (gap, (dx * dx + dy * dy).sqrt());
                    }
                }
                best.1
            })
        })
        .collect()
}

/// Relative L2 distance of radial profiles about the centroid of the
/// reference curve: ||r_test - r_ref|| / ||r_ref||.
pub fn boundary_rel_l2(test: &Curve, reference: &Curve, n_angles: usize) -> f64 {
    let center = curve_centroid(reference, 2048);
    let r_test = radial_profile(test, center, n_angles);
    let r_ref = radial_profile(reference, center, n_angles);
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in r_test.iter().zip(&r_ref) {
        num += (a - b) * (a - b);
        den += b * b;
    }
    (num / den).sqrt()
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let proj = [a[0] + t * d[0], a[1] + t * d[1]];
    ((p[0] - proj[0]).powi(2) + (p[1] - proj[1]).powi(2)).sqrt()
}

fn directed_hausdorff(from: &[[f64; 2]], to: &[[f64; 2]]) -> f64 {
    let n = to.len();
    from.iter()
        .map(|&p| {
            (0..n)
                .map(|i| point_segment_distance(p, to[i], to[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two closed curves.
pub fn hausdorff_distance(a: &Curve, b: &Curve, n: usize) -> f64 {
    let pa = sample_points(a, n);
    let pb = sample_points(b, n);
    directed_hausdorff(&pa, &pb).max(directed_hausdorff(&pb, &pa))
}
