//! Time-dependent inputs `X : [0, T] → g`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};

/// Descriptor of one coefficient of the path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Descriptor {
    Const {
        value: f64,
    },
    /// `Σ coeffs[k] t^k`.
    Poly {
        coeffs: Vec<f64>,
    },
    /// `amplitude · cos(omega·t + phase)`.
    Sin {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Samples joined by monotone cubic interpolation.
    Table {
        t: Vec<f64>,
        v: Vec<f64>,
        #[serde(skip)]
        slopes: Vec<f64>,
    },
}

impl Descriptor {
    pub fn table(t: Vec<f64>, v: Vec<f64>) -> Result<Descriptor> {
        let mut d = Descriptor::Table { t, v, slopes: vec![] };
        d.prepare()?;
        Ok(d)
    }

    /// Validate and precompute interpolation slopes.
    fn prepare(&mut self) -> Result<()> {
        if let Descriptor::Table { t, v, slopes } = self {
            if t.len() != v.len() || t.len() < 2 {
                return Err(Error::InvalidPath("table needs matching t and v with at least 2 samples".into()));
            }
            if t.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvalidPath("table times must be strictly increasing".into()));
            }
            *slopes = pchip_slopes(t, v);
        }
        Ok(())
    }

    fn domain(&self) -> (f64, f64) {
        match self {
            Descriptor::Table { t, .. } => (t[0], t[t.len() - 1]),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Descriptor::Const { value } => *value,
            Descriptor::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Descriptor::Sin { amplitude, omega, phase } => amplitude * (omega * x + phase).cos(),
            Descriptor::Table { t, v, slopes } => hermite(t, v, slopes, x),
        }
    }
}

/// Fritsch–Carlson slopes: harmonic mean of secants, zero at extrema.
fn pchip_slopes(t: &[f64], v: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (v[k + 1] - v[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d
}

fn hermite(t: &[f64], v: &[f64], d: &[f64], x: f64) -> f64 {
    let k = match t.partition_point(|&s| s <= x) {
        0 => 0,
        p => (p - 1).min(t.len() - 2),
    };
    let h = t[k + 1] - t[k];
    let s = (x - t[k]) / h;
    let (s2, s3) = (s * s, s * s * s);
    (2.0 * s3 - 3.0 * s2 + 1.0) * v[k]
        + (s3 - 2.0 * s2 + s) * h * d[k]
        + (-2.0 * s3 + 3.0 * s2) * v[k + 1]
        + (s3 - s2) * h * d[k + 1]
}

#[derive(Clone, Debug)]
pub struct CoefficientPath {
    algebra: u64,
    dim: usize,
    horizon: f64,
    entries: Vec<(usize, Descriptor)>,
}

impl CoefficientPath {
    /// The zero path on `[0, horizon]`.
    pub fn new(alg: &LieAlgebra, horizon: f64) -> Result<CoefficientPath> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidArgument(format!("horizon must be positive, got {}", horizon)));
        }
        Ok(CoefficientPath {
            algebra: alg.id(),
            dim: alg.dim(),
            horizon,
            entries: Vec::new(),
        })
    }

    pub fn constant(alg: &LieAlgebra, coeffs: &[f64], horizon: f64) -> Result<CoefficientPath> {
        if coeffs.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: coeffs.len(),
            });
        }
        let mut p = CoefficientPath::new(alg, horizon)?;
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                p.set(i, Descriptor::Const { value: c })?;
            }
        }
        Ok(p)
    }

    /// Seeded sinusoids on every coefficient: amplitude in [-1, 1],
    /// frequency in [0.5, 3], phase in [0, 2π).
    pub fn random_sinusoidal(alg: &LieAlgebra, seed: u64, horizon: f64) -> Result<CoefficientPath> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = CoefficientPath::new(alg, horizon)?;
        for i in 0..alg.dim() {
            let amplitude = rng.gen_range(-1.0..=1.0);
            let omega = rng.gen_range(0.5..=3.0);
            let phase = rng.gen_range(0.0..TAU);
            p.set(i, Descriptor::Sin { amplitude, omega, phase })?;
        }
        Ok(p)
    }

    /// Parse a JSON object mapping basis labels to descriptors.
    pub fn from_json(alg: &LieAlgebra, value: &serde_json::Value, horizon: f64) -> Result<CoefficientPath> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidPath("input must be a JSON object keyed by basis labels".into()))?;
        let mut p = CoefficientPath::new(alg, horizon)?;
        for (label, desc) in obj {
            let i = alg
                .index_of_label(label)
                .ok_or_else(|| Error::InvalidPath(format!("unknown basis label '{}'", label)))?;
            let d: Descriptor = serde_json::from_value(desc.clone())
                .map_err(|e| Error::InvalidPath(format!("{}: {}", label, e)))?;
            p.set(i, d)?;
        }
        Ok(p)
    }

    pub fn set(&mut self, index: usize, mut desc: Descriptor) -> Result<()> {
        if index >= self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: index,
            });
        }
        desc.prepare()?;
        let (lo, hi) = desc.domain();
        if lo > 0.0 || hi < self.horizon {
            return Err(Error::InvalidPath(format!(
                "table on [{}, {}] does not cover [0, {}]",
                lo, hi, self.horizon
            )));
        }
        self.entries.retain(|(i, _)| *i != index);
        self.entries.push((index, desc));
        self.entries.sort_by_key(|(i, _)| *i);
        Ok(())
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn entries(&self) -> &[(usize, Descriptor)] {
        &self.entries
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, d) in &self.entries {
            out[*i] = d.eval(t);
        }
        out
    }

    pub fn to_json(&self, alg: &LieAlgebra) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(i, d)| (alg.label(*i).to_string(), serde_json::to_value(d).unwrap()))
            .collect();
        serde_json::Value::Object(map)
    }
}
