//! Gradings of the algebra induced by a set of marked simple nodes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::{LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Degree of each basis element under `Ht_Σ`; Cartan and center sit in degree 0.
#[derive(Clone, Debug)]
pub struct Grading {
    algebra: u64,
    sigma: Vec<usize>,
    degrees: Vec<i64>,
    depth: i64,
    slices: BTreeMap<i64, Vec<usize>>,
}

impl Grading {
    pub fn from_sigma(alg: &LieAlgebra, sigma: &[usize]) -> Result<Grading> {
        let rs = alg.root_system();
        if sigma.is_empty() {
            return Err(Error::EmptySigma);
        }
        // validates the node set
        rs.is_cominuscule(sigma)?;
        let mut sigma = sigma.to_vec();
        sigma.sort_unstable();
        let degrees: Vec<i64> = (0..alg.dim())
            .map(|i| alg.root_of(i).map_or(0, |r| rs.ht_sigma(&sigma, r)))
            .collect();
        let depth = degrees.iter().map(|d| d.abs()).max().unwrap_or(0);
        let mut slices: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &d) in degrees.iter().enumerate() {
            slices.entry(d).or_default().push(i);
        }
        Ok(Grading {
            algebra: alg.id(),
            sigma,
            degrees,
            depth,
            slices,
        })
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn is_cominuscule(&self) -> bool {
        self.depth == 1
    }

    /// Basis indices of `g_i`; empty when `|i| > depth`.
    pub fn slice(&self, i: i64) -> &[usize] {
        self.slices.get(&i).map_or(&[], |v| v.as_slice())
    }

    pub fn dim_of(&self, i: i64) -> usize {
        self.slice(i).len()
    }

    pub fn project<S: Scalar>(&self, x: &LieElement<S>, i: i64) -> Result<LieElement<S>> {
        if x.algebra_id() != self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = x.clone();
        out.coeffs = self.project_vec(&x.coeffs, |d| d == i);
        Ok(out)
    }

    pub(crate) fn project_vec<S: Scalar>(&self, x: &[S], keep: impl Fn(i64) -> bool) -> Vec<S> {
        x.iter()
            .zip(&self.degrees)
            .map(|(c, &d)| if keep(d) { c.clone() } else { S::zero() })
            .collect()
    }

    /// Reject any nonzero coefficient whose degree fails `ok`.
    pub(crate) fn check_slice<S: Scalar>(
        &self,
        alg: &LieAlgebra,
        what: &'static str,
        x: &LieElement<S>,
        expected: &str,
        ok: impl Fn(i64) -> bool,
    ) -> Result<()> {
        alg.check(x)?;
        if x.algebra_id() != self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        for (i, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() && !ok(self.degrees[i]) {
                return Err(Error::SliceViolation {
                    what,
                    label: alg.label(i).to_string(),
                    degree: self.degrees[i],
                    expected: expected.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Root vectors annotated with their degree.
    pub fn annotated(&self, alg: &LieAlgebra) -> Vec<(String, i64)> {
        (0..alg.dim())
            .filter(|&i| alg.root_of(i).is_some())
            .map(|i| (alg.label(i).to_string(), self.degrees[i]))
            .collect()
    }

    pub fn to_json(&self, alg: &LieAlgebra) -> serde_json::Value {
        let slices: BTreeMap<String, Vec<&str>> = self
            .slices
            .iter()
            .map(|(d, idx)| (d.to_string(), idx.iter().map(|&i| alg.label(i)).collect()))
            .collect();
        serde_json::json!({
            "sigma": self.sigma.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "depth": self.depth,
            "roots": self.annotated(alg).into_iter()
                .map(|(l, d)| serde_json::json!({"root": l, "degree": d}))
                .collect::<Vec<_>>(),
            "slices": slices,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NilpotencyCheck {
    pub degree: i64,
    pub power: u32,
    pub basis_elements: usize,
    pub random_samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NilpotencyReport {
    pub depth: i64,
    pub checks: Vec<NilpotencyCheck>,
}

/// Power of `ad_X` checked for `X` of degree `d` in a grading of depth `k`:
/// `ad³` on `g_{±1}` when `k = 1`; `ad⁵` on `g_{±1}` and `ad⁴` on `g_{±2}`
/// when `k = 2`. Other depths use the degree-span bound `2k/|d| + 1`.
pub fn vanishing_power(depth: i64, degree: i64) -> u32 {
    match (depth, degree.abs()) {
        (1, 1) => 3,
        (2, 1) => 5,
        (2, 2) => 4,
        (k, d) => (2 * k / d + 1) as u32,
    }
}

/// Exact check of [`vanishing_power`] for all basis elements of every
/// nonzero degree plus `samples` random integer combinations per degree.
pub fn certify_nilpotency(g: &Grading, alg: &LieAlgebra, samples: usize, seed: u64) -> Result<NilpotencyReport> {
    if g.algebra != alg.id() {
        return Err(Error::AlgebraMismatch);
    }
    let d = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for degree in (-g.depth..=g.depth).filter(|&k| k != 0) {
        let slice = g.slice(degree);
        if slice.is_empty() {
            continue;
        }
        let power = vanishing_power(g.depth, degree);
        let mut elements: Vec<(String, Vec<i64>)> = slice
            .iter()
            .map(|&i| {
                let mut v = vec![0; d];
                v[i] = 1;
                (alg.label(i).to_string(), v)
            })
            .collect();
        for s in 0..samples {
            let mut v = vec![0; d];
            for &i in slice {
                v[i] = rng.gen_range(-3..=3);
            }
            elements.push((format!("sample {}", s), v));
        }
        for (label, x) in &elements {
            if !ad_power_vanishes(alg, x, power) {
                return Err(Error::NilpotencyViolation {
                    power,
                    degree,
                    label: label.clone(),
                });
            }
        }
        checks.push(NilpotencyCheck {
            degree,
            power,
            basis_elements: slice.len(),
            random_samples: samples,
        });
    }
    Ok(NilpotencyReport {
        depth: g.depth,
        checks,
    })
}

/// `ad_x^power b_j = 0` for every basis vector, in integer arithmetic.
pub fn ad_power_vanishes(alg: &LieAlgebra, x: &[i64], power: u32) -> bool {
    let d = alg.dim();
    (0..d).all(|j| {
        let mut v = vec![0i64; d];
        v[j] = 1;
        for _ in 0..power {
            v = alg.bracket_int(x, &v);
        }
        v.iter().all(|&c| c == 0)
    })
}
