//! Numerical integration of a hierarchy and its verification.
//!
//! All factor unknowns are concatenated into one state vector and advanced
//! together by classical fixed-step RK4. The development is rebuilt in the
//! adjoint representation as an ordered product of exact exponentials and
//! compared against a plain RK4 solve of `dM/dt = ad_X M`.

mod path;

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::chevalley::{sub_vec, LieAlgebra};
use crate::error::{Error, Result};
use crate::reduction::rhs::check_leak;
use crate::reduction::{contact_raw, riccati_raw, theta_inverse, Hierarchy, Side, Stage};

pub use path::{CoefficientPath, Descriptor};

pub const DEFAULT_THRESHOLD: f64 = 1e8;

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub step: f64,
    pub horizon: f64,
    /// Sup-norm bound on the state beyond which the solve stops.
    pub threshold: f64,
}

impl SolveOptions {
    pub fn new(step: f64, horizon: f64) -> SolveOptions {
        SolveOptions {
            step,
            horizon,
            threshold: DEFAULT_THRESHOLD,
        }
    }

    /// Number of steps; the horizon must be a whole number of steps.
    fn steps(&self) -> Result<usize> {
        if !(self.step > 0.0) || !(self.horizon > 0.0) {
            return Err(Error::InvalidArgument("step and horizon must be positive".into()));
        }
        let n = (self.horizon / self.step).round();
        if (n * self.step - self.horizon).abs() > 1e-9 * self.horizon.max(1.0) || n < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "horizon {} is not a multiple of step {}",
                self.horizon, self.step
            )));
        }
        Ok(n as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Completed,
    /// State exceeded the threshold (or became non-finite) at `time` in
    /// hierarchy stage `stage`.
    Breakdown { time: f64, stage: usize },
}

/// One factor `e^{ξ}` of the product: which stage and which coordinates.
#[derive(Clone, Debug)]
pub struct Factor {
    pub stage: usize,
    pub indices: Vec<usize>,
    offset: usize,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    hierarchy: Arc<Hierarchy>,
    step: f64,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    factors: Vec<Factor>,
    status: Status,
}

fn factors_of(h: &Hierarchy) -> Vec<Factor> {
    let mut offset = 0;
    let mut out = Vec::new();
    for (s, st) in h.stages().iter().enumerate() {
        if st.is_factor() {
            let indices = h.unknowns(s).to_vec();
            let n = indices.len();
            out.push(Factor { stage: s, indices, offset });
            offset += n;
        }
    }
    out
}

impl Factor {
    fn gather(&self, full: &[f64], state: &mut [f64]) {
        for (k, &i) in self.indices.iter().enumerate() {
            state[self.offset + k] = full[i];
        }
    }

    fn scatter(&self, state: &[f64], dim: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        for (k, &i) in self.indices.iter().enumerate() {
            v[i] = state[self.offset + k];
        }
        v
    }
}

/// The concatenated triangular system.
struct System<'a> {
    h: &'a Hierarchy,
    factors: Vec<Factor>,
    lower: Vec<usize>,
    upper: Vec<usize>,
    torus: Option<usize>,
    center: Option<usize>,
    len: usize,
}

impl<'a> System<'a> {
    fn new(h: &'a Hierarchy) -> System<'a> {
        let factors = factors_of(h);
        let n_levels = h.levels().len();
        let mut lower = vec![0; n_levels];
        let mut upper = vec![0; n_levels];
        let (mut torus, mut center) = (None, None);
        for (f, fac) in factors.iter().enumerate() {
            match h.stages()[fac.stage] {
                Stage::Riccati { level } | Stage::Contact { level, side: Side::Lower } => lower[level] = f,
                Stage::Integral { level } | Stage::Contact { level, side: Side::Upper } => upper[level] = f,
                Stage::Torus { central: false, .. } => torus = Some(f),
                Stage::Torus { central: true, .. } => center = Some(f),
                Stage::LeviDescent { .. } => unreachable!(),
            }
        }
        let len = factors.iter().map(|f| f.indices.len()).sum();
        System {
            h,
            factors,
            lower,
            upper,
            torus,
            center,
            len,
        }
    }

    fn derivative(&self, x: &[f64], state: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len];
        if state.iter().any(|v| !v.is_finite()) {
            out.iter_mut().for_each(|v| *v = f64::NAN);
            return Ok(out);
        }
        let alg = self.h.algebra();
        let d = alg.dim();
        let levels = self.h.levels();

        let mut input = x.to_vec();
        for c in alg.center_indices() {
            input[c] = 0.0;
        }
        let mut ws = Vec::with_capacity(levels.len());
        let mut sources = Vec::with_capacity(levels.len());
        for (l, level) in levels.iter().enumerate() {
            let fac = &self.factors[self.lower[l]];
            let w = fac.scatter(state, d);
            let degrees = level.grading.degrees();
            let (w_dot, next, source) = if level.is_contact() {
                contact_raw(alg, degrees, &w, &input)?
            } else {
                let part = |k: i64| level.grading.project_vec(&input, |e| e == k);
                let z = part(1);
                let w_dot = riccati_raw(alg, &w, &part(-1), &part(0), &z);
                let next = sub_vec(&part(0), &alg.bracket_vec(&w, &z));
                (w_dot, next, z)
            };
            fac.gather(&w_dot, &mut out);
            ws.push(w);
            sources.push(source);
            input = next;
        }

        let h_torus = match self.torus {
            Some(f) => {
                self.factors[f].gather(&input, &mut out);
                self.factors[f].scatter(state, d)
            }
            None => vec![0.0; d],
        };

        let vs: Vec<Vec<f64>> = (0..levels.len()).map(|l| self.factors[self.upper[l]].scatter(state, d)).collect();
        for l in (0..levels.len()).rev() {
            // Ad_y^{-1} with y = e^{W_{l+1}} ⋯ e^{W_L} e^h e^{V_L} ⋯ e^{V_{l+1}}
            let mut v = sources[l].clone();
            for w in &ws[l + 1..] {
                v = alg.exp_ad_apply(&neg(w), &v)?;
            }
            v = alg.exp_ad_cartan_apply(&neg(&h_torus), &v)?;
            for vm in vs[l + 1..].iter().rev() {
                v = alg.exp_ad_apply(&neg(vm), &v)?;
            }
            check_leak(levels[l].grading.degrees(), &mut v)?;
            let v_dot = if levels[l].is_contact() {
                theta_inverse(alg, &vs[l], &v)?
            } else {
                v
            };
            self.factors[self.upper[l]].gather(&v_dot, &mut out);
        }

        if let Some(f) = self.center {
            self.factors[f].gather(x, &mut out);
        }
        Ok(out)
    }
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|c| -c).collect()
}

/// One classical RK4 step of `y' = f(t, y)`.
pub fn rk4_step<F>(f: &mut F, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let axpy = |a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect() };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(0.5 * h, &k1))?;
    let k3 = f(t + 0.5 * h, &axpy(0.5 * h, &k2))?;
    let k4 = f(t + h, &axpy(h, &k3))?;
    Ok((0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrate every stage of `h` driven by `x` on `[0, T]`.
pub fn solve(h: Arc<Hierarchy>, x: &CoefficientPath, opts: &SolveOptions) -> Result<Trajectory> {
    let n = opts.steps()?;
    let dim = h.algebra().dim();
    if x.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: x.dim() });
    }
    if x.horizon() < opts.horizon * (1.0 - 1e-12) {
        return Err(Error::InvalidPath(format!(
            "input defined on [0, {}] but horizon is {}",
            x.horizon(),
            opts.horizon
        )));
    }
    let sys = System::new(&h);
    let mut state = vec![0.0; sys.len];
    let mut times = vec![0.0];
    let mut states = vec![state.clone()];
    let mut status = Status::Completed;
    let mut f = |t: f64, y: &[f64]| sys.derivative(&x.eval(t), y);
    for k in 0..n {
        let t = k as f64 * opts.step;
        let next = rk4_step(&mut f, t, &state, opts.step)?;
        let t_next = (k + 1) as f64 * opts.step;
        if let Some(stage) = offending(&sys.factors, &next, opts.threshold) {
            status = Status::Breakdown { time: t_next, stage };
            break;
        }
        state = next;
        times.push(t_next);
        states.push(state.clone());
    }
    let factors = sys.factors.clone();
    Ok(Trajectory {
        hierarchy: h,
        step: opts.step,
        times,
        states,
        factors,
        status,
    })
}

/// Earliest stage with a non-finite or over-threshold entry. Later stages
/// are driven by earlier ones, so the first offender is the cause.
fn offending(factors: &[Factor], state: &[f64], threshold: f64) -> Option<usize> {
    factors
        .iter()
        .find(|f| {
            state[f.offset..f.offset + f.indices.len()]
                .iter()
                .any(|v| !v.is_finite() || v.abs() > threshold)
        })
        .map(|f| f.stage)
}

impl Trajectory {
    pub fn hierarchy(&self) -> &Arc<Hierarchy> {
        &self.hierarchy
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Raw concatenated state at grid point `n`.
    pub fn state(&self, n: usize) -> &[f64] {
        &self.states[n]
    }

    /// Full coefficient vector of factor `f` (0-based) at grid point `n`.
    pub fn xi(&self, n: usize, f: usize) -> Vec<f64> {
        self.factors[f].scatter(&self.states[n], self.hierarchy.algebra().dim())
    }

    fn grid_index(&self, t: f64) -> Result<usize> {
        let n = (t / self.step).round();
        if n < 0.0 || (n * self.step - t).abs() > 1e-9 * self.step {
            return Err(Error::OffGrid(t));
        }
        let n = n as usize;
        if n >= self.times.len() {
            return Err(match self.status {
                Status::Breakdown { time, .. } => Error::BeyondBreakdown { t, breakdown: time },
                Status::Completed => Error::OffGrid(t),
            });
        }
        Ok(n)
    }

    pub fn to_csv(&self) -> String {
        let alg = self.hierarchy.algebra();
        let mut out = String::from("t");
        for (f, fac) in self.factors.iter().enumerate() {
            for &i in &fac.indices {
                write!(out, ",xi{}[{}]", f + 1, alg.label(i)).unwrap();
            }
        }
        out.push('\n');
        for (t, s) in self.times.iter().zip(&self.states) {
            write!(out, "{:.6}", t).unwrap();
            for v in s {
                write!(out, ",{:.15e}", v).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let h = &self.hierarchy;
        let alg = h.algebra();
        let factors: Vec<serde_json::Value> = self
            .factors
            .iter()
            .enumerate()
            .map(|(f, fac)| {
                let values: Vec<Vec<f64>> = self
                    .states
                    .iter()
                    .map(|s| s[fac.offset..fac.offset + fac.indices.len()].to_vec())
                    .collect();
                serde_json::json!({
                    "factor": f + 1,
                    "kind": h.stages()[fac.stage].kind(),
                    "basis": fac.indices.iter().map(|&i| alg.label(i)).collect::<Vec<_>>(),
                    "values": values,
                })
            })
            .collect();
        serde_json::json!({
            "group": alg.root_system().dynkin().to_string(),
            "mode": h.mode(),
            "step": self.step,
            "status": self.status,
            "times": self.times,
            "factors": factors,
        })
    }
}

/// `Ad(e^{ξ_1} ⋯ e^{ξ_r})` at grid time `t`; the center acts trivially.
pub fn reconstruct_adjoint(tr: &Trajectory, t: f64) -> Result<DMatrix<f64>> {
    let n = tr.grid_index(t)?;
    reconstruct_at(tr, n)
}

fn reconstruct_at(tr: &Trajectory, n: usize) -> Result<DMatrix<f64>> {
    let h = &tr.hierarchy;
    let alg = h.algebra();
    let d = alg.dim();
    let mut m = DMatrix::<f64>::identity(d, d);
    for (f, fac) in tr.factors.iter().enumerate() {
        let xi = tr.xi(n, f);
        match h.stages()[fac.stage] {
            Stage::Torus { central: true, .. } => {}
            Stage::Torus { central: false, .. } => {
                let e = alg.exp_ad_cartan(&alg.element(xi)?)?;
                m *= e;
            }
            _ => m *= alg.exp_ad_nilpotent_vec(&xi)?,
        }
    }
    Ok(m)
}

/// Reference solution of `dM/dt = ad_{X(t)} M`, `M(0) = 1`, plus the
/// quadrature `∫ X` of the central coordinates.
#[derive(Clone, Debug)]
pub struct OracleTrajectory {
    pub step: f64,
    pub times: Vec<f64>,
    pub matrices: Vec<DMatrix<f64>>,
    pub center: Vec<Vec<f64>>,
}

pub fn oracle_adjoint(alg: &LieAlgebra, x: &CoefficientPath, step: f64, horizon: f64) -> Result<OracleTrajectory> {
    let n = SolveOptions::new(step, horizon).steps()?;
    let d = alg.dim();
    if x.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.dim() });
    }
    let center: Vec<usize> = alg.center_indices().collect();
    let nc = center.len();
    // state: column-major M followed by the central integrals
    let mut f = |t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let xt = x.eval(t);
        let ad = alg.ad_matrix_vec(&xt);
        let m = DMatrix::from_column_slice(d, d, &y[..d * d]);
        let mut out: Vec<f64> = (ad * m).as_slice().to_vec();
        out.extend(center.iter().map(|&c| xt[c]));
        Ok(out)
    };
    let mut y: Vec<f64> = DMatrix::<f64>::identity(d, d).as_slice().to_vec();
    y.extend(std::iter::repeat(0.0).take(nc));
    let mut out = OracleTrajectory {
        step,
        times: vec![0.0],
        matrices: vec![DMatrix::identity(d, d)],
        center: vec![vec![0.0; nc]],
    };
    for k in 0..n {
        y = rk4_step(&mut f, k as f64 * step, &y, step)?;
        out.times.push((k + 1) as f64 * step);
        out.matrices.push(DMatrix::from_column_slice(d, d, &y[..d * d]));
        out.center.push(y[d * d..].to_vec());
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub step: f64,
    /// Largest max-norm difference over the compared grid.
    pub sup_error: f64,
    pub sup_time: f64,
    /// Largest deviation of the central factor from the quadrature.
    pub center_error: f64,
    pub compared_points: usize,
    pub status: Status,
    pub errors: Vec<f64>,
}

impl ErrorReport {
    pub fn worst(&self) -> f64 {
        self.sup_error.max(self.center_error)
    }
}

/// Pointwise comparison on the common grid.
pub fn compare(tr: &Trajectory, oracle: &OracleTrajectory) -> Result<ErrorReport> {
    if (tr.step - oracle.step).abs() > 1e-15 * tr.step.max(1.0) {
        return Err(Error::GridMismatch(format!("steps {} and {}", tr.step, oracle.step)));
    }
    if tr.times.len() > oracle.times.len() {
        return Err(Error::GridMismatch(format!(
            "trajectory has {} points, oracle {}",
            tr.times.len(),
            oracle.times.len()
        )));
    }
    let d = tr.hierarchy.algebra().dim();
    if oracle.matrices[0].nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: oracle.matrices[0].nrows(),
        });
    }
    let center_factor = tr
        .factors
        .iter()
        .position(|f| matches!(tr.hierarchy.stages()[f.stage], Stage::Torus { central: true, .. }));
    let mut errors = Vec::with_capacity(tr.times.len());
    let mut center_error: f64 = 0.0;
    for n in 0..tr.times.len() {
        let m = reconstruct_at(tr, n)?;
        let e = (m - &oracle.matrices[n]).amax();
        errors.push(if e.is_nan() { f64::INFINITY } else { e });
        if let Some(f) = center_factor {
            let fac = &tr.factors[f];
            for (k, c) in oracle.center[n].iter().enumerate() {
                center_error = center_error.max((tr.states[n][fac.offset + k] - c).abs());
            }
        }
    }
    let (sup_idx, sup_error) = errors
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(p, m), (i, &e)| if e > m { (i, e) } else { (p, m) });
    Ok(ErrorReport {
        step: tr.step,
        sup_error,
        sup_time: tr.times[sup_idx],
        center_error,
        compared_points: tr.times.len(),
        status: tr.status,
        errors,
    })
}
