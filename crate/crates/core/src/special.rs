//! Cylindrical Bessel and Hankel functions of integer order.
//!
//! `J_n` is evaluated by Miller's backward recurrence with the
//! `J_0 + 2 sum J_{2k} = 1` normalization, which is accurate uniformly in the
//! argument range used here. `Y_0`, `Y_1` use the logarithmic power series for
//! small arguments and the Hankel asymptotic expansion beyond; higher orders
//! follow from the (stable) upward recurrence. The core routines accept
//! complex arguments so that penetrable obstacles with complex refractive
//! index reuse the same code path; the public API is real per the domain
//! contracts.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Maximum supported order.
pub const MAX_ORDER: i64 = 200;

// kept low enough that |sum|^2 in the final complex division cannot overflow
const RESCALE_THRESHOLD: f64 = 1e140;
const RESCALE_FACTOR: f64 = 1e-140;

/// J_0..J_{n_max} at a complex argument by backward recurrence.
pub(crate) fn jn_seq_c(z: Complex64, n_max: usize) -> Vec<Complex64> {
    let az = z.norm();
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if az < 1e-8 {
        // two-term series; avoids Miller start-up noise at tiny arguments
        let half = z * 0.5;
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0f64;
        for (m, slot) in out.iter_mut().enumerate() {
            if m > 0 {
                pow *= half;
                fact *= m as f64;
            }
            *slot = pow / fact * (Complex64::new(1.0, 0.0) - z * z / (4.0 * (m as f64 + 1.0)));
        }
        return out;
    }

    let nu = n_max.max(az.ceil() as usize);
    let mut start = nu + 16 + (1.5 * (40.0 * nu as f64).sqrt()) as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let two_over_z = 2.0 / z;
    let mut jp1 = Complex64::new(0.0, 0.0);
    let mut j = Complex64::new(1e-30, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for m in (1..=start).rev() {
        let jm1 = (m as f64) * two_over_z * j - jp1;
        jp1 = j;
        j = jm1;
        if m - 1 <= n_max {
            out[m - 1] = j;
        }
        if (m - 1) % 2 == 0 && m - 1 > 0 {
            sum += 2.0 * j;
        }
        if j.re.abs().max(j.im.abs()) > RESCALE_THRESHOLD {
            j *= RESCALE_FACTOR;
            jp1 *= RESCALE_FACTOR;
            sum *= RESCALE_FACTOR;
            for v in out.iter_mut() {
                *v *= RESCALE_FACTOR;
            }
        }
    }
    sum += j;
    let inv = Complex64::new(1.0, 0.0) / sum;
    for v in out.iter_mut() {
        *v *= inv;
    }
    out
}

/// Y_0 and Y_1 at a complex argument (principal branch of the logarithm).
pub(crate) fn y01_c(z: Complex64) -> (Complex64, Complex64) {
    let az = z.norm();
    if az <= 12.0 {
        let js = jn_seq_c(z, 1);
        let (j0, j1) = (js[0], js[1]);
        let lg = (z * 0.5).ln() + EULER_GAMMA;
        let q = -z * z * 0.25; // (-z^2/4)

        // Y0 = (2/pi)(ln(z/2)+g) J0 - (2/pi) sum_{k>=1} H_k q^k/(k!)^2
        let mut term = Complex64::new(1.0, 0.0);
        let mut h = 0.0f64;
        let mut s0 = Complex64::new(0.0, 0.0);
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * kf);
            h += 1.0 / kf;
            let add = h * term;
            s0 += add;
            if add.norm() < 1e-18 * s0.norm().max(1e-280) {
                break;
            }
        }
        let y0 = (2.0 / PI) * (lg * j0 - s0);

        // Y1 = (2/pi)(ln(z/2)+g) J1 - 2/(pi z)
        //      - (z/(2 pi)) sum_{k>=0} (H_k + H_{k+1}) q^k / (k!(k+1)!)
        let mut term = Complex64::new(1.0, 0.0); // q^k/(k!(k+1)!)
        let mut hk = 0.0f64;
        let mut hk1 = 1.0f64;
        let mut s1 = term * (hk + hk1);
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * (kf + 1.0));
            hk += 1.0 / kf;
            hk1 += 1.0 / (kf + 1.0);
            let add = (hk + hk1) * term;
            s1 += add;
            if add.norm() < 1e-18 * s1.norm().max(1e-280) {
                break;
            }
        }
        let y1 = (2.0 / PI) * lg * j1 - 2.0 / (PI * z) - z / (2.0 * PI) * s1;
        (y0, y1)
    } else {
        (asymptotic_y(0, z), asymptotic_y(1, z))
    }
}

/// Hankel asymptotic expansion for Y_n, |z| large, |arg z| < pi/2.
fn asymptotic_y(n: u32, z: Complex64) -> Complex64 {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut c = Complex64::new(1.0, 0.0);
    let mut p = c;
    let mut q = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for m in 1..40 {
        let mf = m as f64;
        let odd = 2.0 * mf - 1.0;
        c *= (mu - odd * odd) / (8.0 * mf) / z;
        let size = c.norm();
        if size > last {
            break; // divergent tail; truncate at the smallest term
        }
        last = size;
        match m % 4 {
            1 => q += c,
            2 => p -= c,
            3 => q -= c,
            _ => p += c,
        }
        if size < 1e-18 {
            break;
        }
    }
    let chi = z - (0.5 * n as f64 + 0.25) * PI;
    (2.0 / (PI * z)).sqrt() * (p * chi.sin() + q * chi.cos())
}

/// Y_0..Y_{n_max} by upward recurrence.
pub(crate) fn yn_seq_c(z: Complex64, n_max: usize) -> Vec<Complex64> {
    let (y0, y1) = y01_c(z);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(y0);
    if n_max >= 1 {
        out.push(y1);
    }
    let two_over_z = 2.0 / z;
    for m in 1..n_max {
        let next = (m as f64) * two_over_z * out[m] - out[m - 1];
        out.push(next);
    }
    out
}

/// H^(1)_0 and H^(1)_1 together; the hot path for kernel assembly.
pub(crate) fn h1_pair(z: Complex64) -> (Complex64, Complex64) {
    let js = jn_seq_c(z, 1);
    let (y0, y1) = y01_c(z);
    (
        js[0] + Complex64::i() * y0,
        js[1] + Complex64::i() * y1,
    )
}

fn check_order(n: i64) -> Result<()> {
    if n.abs() > MAX_ORDER {
        return Err(Error::Domain(format!(
            "order |{n}| exceeds supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Bessel function of the first kind, integer order, x >= 0.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    check_order(n)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    let (n_abs, sign) = if n < 0 {
        ((-n) as usize, if n % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        (n as usize, 1.0)
    };
    if x == 0.0 {
        return Ok(if n_abs == 0 { sign } else { 0.0 });
    }
    let seq = jn_seq_c(Complex64::new(x, 0.0), n_abs);
    Ok(sign * seq[n_abs].re)
}

/// Bessel function of the second kind, integer order, x > 0.
pub fn bessel_y(n: i64, x: f64) -> Result<f64> {
    check_order(n)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("bessel_y requires x > 0, got {x}")));
    }
    let (n_abs, sign) = if n < 0 {
        ((-n) as usize, if n % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        (n as usize, 1.0)
    };
    let seq = yn_seq_c(Complex64::new(x, 0.0), n_abs);
    Ok(sign * seq[n_abs].re)
}

/// Hankel function of the first kind: J_n(x) + i Y_n(x), x > 0.
pub fn hankel1(n: i64, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j(n, x)?, bessel_y(n, x)?))
}

/// J_n'(x) from the recurrence J_n' = (J_{n-1} - J_{n+1})/2.
pub fn bessel_j_prime(n: i64, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(-bessel_j(1, x)?);
    }
    Ok(0.5 * (bessel_j(n - 1, x)? - bessel_j(n + 1, x)?))
}

/// Y_n'(x) from the recurrence.
pub fn bessel_y_prime(n: i64, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(-bessel_y(1, x)?);
    }
    Ok(0.5 * (bessel_y(n - 1, x)? - bessel_y(n + 1, x)?))
}

/// d/dx H^(1)_n(x).
pub fn hankel1_prime(n: i64, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j_prime(n, x)?, bessel_y_prime(n, x)?))
}
