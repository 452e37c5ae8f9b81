use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::lcd::{lcd_complex, lcd_real, LcdBracket, LcdQuery};
use super::levy::{levy_exact, levy_mc, LevyEstimate, ENUMERATION_CAP};
use super::vectors::{
    compressibility, delocalized_check, real_imag_correlation, CVector, CompressibilityReport,
};
use crate::ensembles::{assumption_params, AtomDistribution};
use crate::error::{Error, Result};
use crate::seed::sha256_hex;

/// What to compute for a [`StructureReport`].
#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub sparsity: f64,
    pub distance: f64,
    pub delocalization_bound: f64,
    /// Defaults to the query for the atom's q (or q = 1/2 without an atom).
    pub lcd: Option<LcdQuery>,
    pub atom: Option<AtomDistribution>,
    pub levy_radii: Vec<f64>,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            sparsity: 0.25,
            distance: 0.3,
            delocalization_bound: 2.0,
            lcd: None,
            atom: None,
            levy_radii: vec![],
            mc_samples: 100_000,
            seed: 0,
        }
    }
}

/// Every per-vector measurement, keyed by a hash of the vector's bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub schema_version: u32,
    pub vector_hash: String,
    pub n: usize,
    pub norm: f64,
    pub compressibility: CompressibilityReport,
    pub correlation: f64,
    pub delocalized_violations: usize,
    /// LCD of z/‖z‖; the one-dimensional search is used when z is real.
    pub lcd: LcdBracket,
    pub lcd_query: LcdQuery,
    pub levy: Vec<LevyEstimate>,
}

/// SHA-256 over the little-endian bits of (re, im) per coordinate.
pub fn vector_hash(z: &CVector) -> String {
    let bytes: Vec<u8> = z
        .iter()
        .flat_map(|c| {
            let mut b = c.re.to_le_bytes().to_vec();
            b.extend_from_slice(&c.im.to_le_bytes());
            b
        })
        .collect();
    sha256_hex(&bytes)
}

pub fn structure_report(z: &CVector, opts: &ReportOptions) -> Result<StructureReport> {
    let norm = z.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::domain("structure report needs a finite nonzero vector"));
    }
    let n = z.len();
    let unit = z.map(|c| c / norm);
    let query = match (&opts.lcd, &opts.atom) {
        (Some(q), _) => *q,
        (None, Some(atom)) => {
            let params = assumption_params(atom);
            LcdQuery::for_q(if params.satisfied { params.q } else { 0.5 }, n)
        }
        (None, None) => LcdQuery::for_q(0.5, n),
    };
    let lcd = if z.iter().all(|c| c.im == 0.0) {
        lcd_real(&unit.map(|c| c.re), &query)?
    } else {
        lcd_complex(&unit, &query)?
    };
    let mut levy = Vec::with_capacity(opts.levy_radii.len());
    if let Some(atom) = &opts.atom {
        let enumerable = atom
            .support_size()
            .is_some_and(|k| (k as f64).powi(n as i32) <= ENUMERATION_CAP as f64);
        for &t in &opts.levy_radii {
            levy.push(if enumerable {
                levy_exact(z, t, atom)?
            } else {
                levy_mc(z, t, atom, opts.mc_samples, opts.seed)?
            });
        }
    }
    Ok(StructureReport {
        schema_version: crate::SCHEMA_VERSION,
        vector_hash: vector_hash(z),
        n,
        norm,
        compressibility: compressibility(z, opts.sparsity, opts.distance)?,
        correlation: real_imag_correlation(&unit)?,
        delocalized_violations: delocalized_check(&z.map(|c| c * (n as f64).sqrt() / norm), opts.delocalization_bound)?,
        lcd,
        lcd_query: query,
        levy,
    })
}

/// Parses a vector from CSV text: one coordinate per line, `re` or `re,im`.
pub fn parse_vector_csv(text: &str) -> Result<CVector> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {s:?}: {e}", lineno + 1)))
        };
        let c = match fields.as_slice() {
            [re] => Complex::new(parse(re)?, 0.0),
            [re, im] => Complex::new(parse(re)?, parse(im)?),
            _ => return Err(Error::Parse(format!("line {}: expected `re` or `re,im`", lineno + 1))),
        };
        out.push(c);
    }
    Ok(CVector::from_vec(out))
}
