//! Far-field dump format: a one-line JSON header
//! `{"k":..,"angles_deg":[..],"bc":..,"n_f":..}` followed by CSV rows
//! `theta_j,re,im`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::{BoundaryCondition, FarFieldPattern};

#[derive(Serialize, Deserialize)]
struct FarFieldHeader {
    k: f64,
    angles_deg: Vec<f64>,
    bc: BcTag,
    n_f: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BcTag {
    Dirichlet,
    Neumann,
    Impedance { mu: f64 },
    Transmission { n_re: f64, n_im: f64, lambda: f64 },
}

impl From<&BoundaryCondition> for BcTag {
    fn from(bc: &BoundaryCondition) -> Self {
        match bc {
            BoundaryCondition::Dirichlet => BcTag::Dirichlet,
            BoundaryCondition::Neumann => BcTag::Neumann,
            BoundaryCondition::Impedance { mu } => BcTag::Impedance { mu: *mu },
            BoundaryCondition::Transmission { n, lambda } => BcTag::Transmission {
                n_re: n.re,
                n_im: n.im,
                lambda: *lambda,
            },
        }
    }
}

impl From<&BcTag> for BoundaryCondition {
    fn from(tag: &BcTag) -> Self {
        match tag {
            BcTag::Dirichlet => BoundaryCondition::Dirichlet,
            BcTag::Neumann => BoundaryCondition::Neumann,
            BcTag::Impedance { mu } => BoundaryCondition::Impedance { mu: *mu },
            BcTag::Transmission { n_re, n_im, lambda } => BoundaryCondition::Transmission {
                n: Complex64::new(*n_re, *n_im),
                lambda: *lambda,
            },
        }
    }
}

pub fn write_far_field(
    far: &FarFieldPattern,
    bc: &BoundaryCondition,
    mut out: impl Write,
) -> Result<()> {
    let header = FarFieldHeader {
        k: far.k,
        angles_deg: far
            .directions
            .iter()
            .map(|d| d[1].atan2(d[0]).to_degrees())
            .collect(),
        bc: bc.into(),
        n_f: far.n_f(),
    };
    writeln!(out, "{}", serde_json::to_string(&header)?)?;
    for (j, v) in far.samples.iter().enumerate() {
        writeln!(out, "{},{},{}", far.theta(j), v.re, v.im)?;
    }
    Ok(())
}

pub fn read_far_field(input: impl BufRead) -> Result<(FarFieldPattern, BoundaryCondition)> {
    let mut lines = input.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::InvalidConfig("empty far-field file".into()))??;
    let header: FarFieldHeader = serde_json::from_str(&header_line)?;
    let mut samples = Vec::with_capacity(header.n_f);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidConfig(format!("malformed far-field row: {line}")));
        }
        let re: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad value in: {line}")))?;
        let im: f64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad value in: {line}")))?;
        samples.push(Complex64::new(re, im));
    }
    if samples.len() != header.n_f {
        return Err(Error::InvalidConfig(format!(
            "far-field file promises {} samples, found {}",
            header.n_f,
            samples.len()
        )));
    }
    let directions = header
        .angles_deg
        .iter()
        .map(|a| {
            let r = a.to_radians();
            [r.cos(), r.sin()]
        })
        .collect();
    Ok((
        FarFieldPattern::new(header.k, directions, samples)?,
        (&header.bc).into(),
    ))
}
