//! Chevalley basis with integer structure constants.
//!
//! Basis order: negative root vectors (lowest root first), the Cartan
//! generators `H_1 … H_n`, the central generators `C_1 … C_k`, then the
//! positive root vectors in ascending height. Read left to right the basis
//! is ordered by height, which keeps every `ad` of a root vector strictly
//! triangular.
//!
//! Relations:
//! * `[H_i, E_α] = ⟨α, α_i^∨⟩ E_α`
//! * `[E_α, E_{-α}] = H_α`, the coroot written over the `H_i`
//! * `[E_α, E_β] = N_{α,β} E_{α+β}`, `N_{α,β} = ±(p+1)`
//!
//! Signs: `N` on every extraspecial pair is `+(p+1)`; all other signs follow
//! from the standard identities between structure constants. The exact
//! Jacobi check in the test suite certifies the result.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::DMatrix;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem};
use crate::scalar::{inv_factorial, Scalar};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    /// Index into [`RootSystem::roots`].
    Root(usize),
    Cartan(usize),
    Center(usize),
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    id: u64,
    rs: RootSystem,
    kinds: Vec<BasisKind>,
    labels: Vec<String>,
    /// `rows[i]` lists `(j, k, c)` with a `c·b_k` term in `[b_i, b_j]`.
    rows: Vec<Vec<(usize, usize, i64)>>,
    n_neg: usize,
}

/// Coefficient vector over the basis of one algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement<S> {
    algebra: u64,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> LieElement<S> {
    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &S) -> Self {
        LieElement {
            algebra: self.algebra,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(LieElement {
            algebra: self.algebra,
            coeffs: add_vec(&self.coeffs, &other.coeffs),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(LieElement {
            algebra: self.algebra,
            coeffs: sub_vec(&self.coeffs, &other.coeffs),
        })
    }
}

pub(crate) fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub(crate) fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

impl LieAlgebra {
    /// Build the Chevalley basis and its structure table.
    pub fn new(rs: RootSystem) -> LieAlgebra {
        let n = rs.rank();
        let torus = rs.dynkin().torus;
        let roots = rs.roots().to_vec();
        let n_neg = roots.len() / 2;

        let mut kinds = Vec::new();
        let mut labels = Vec::new();
        for (ri, r) in roots.iter().enumerate().take(n_neg) {
            kinds.push(BasisKind::Root(ri));
            labels.push(root_label(r));
        }
        for i in 0..n {
            kinds.push(BasisKind::Cartan(i));
            labels.push(format!("H{}", i + 1));
        }
        for k in 0..torus {
            kinds.push(BasisKind::Center(k));
            labels.push(format!("C{}", k + 1));
        }
        for (ri, r) in roots.iter().enumerate().skip(n_neg) {
            kinds.push(BasisKind::Root(ri));
            labels.push(root_label(r));
        }
        let dim = kinds.len();
        let basis_of_root = |ri: usize| if ri < n_neg { ri } else { ri + n + torus };

        let consts = StructureConstants::compute(&rs);
        let mut rows: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); dim];
        let mut put = |i: usize, j: usize, k: usize, c: i64| {
            if c != 0 {
                rows[i].push((j, k, c));
            }
        };

        for (ri, r) in roots.iter().enumerate() {
            let bi = basis_of_root(ri);
            // Cartan action
            for h in 0..n {
                let w = rs.pairing(&r.coords, h);
                put(n_neg + h, bi, bi, w);
                put(bi, n_neg + h, bi, -w);
            }
            for (si, s) in roots.iter().enumerate() {
                let bj = basis_of_root(si);
                let sum: Vec<i64> = r.coords.iter().zip(&s.coords).map(|(a, b)| a + b).collect();
                if sum.iter().all(|&c| c == 0) {
                    // [E_α, E_{-α}] = H_α, H_α = Σ c_j (α_j,α_j)/(α,α) H_j
                    let aa = rs.inner(&r.coords, &r.coords);
                    for (j, cj) in r.coords.iter().enumerate() {
                        if *cj != 0 {
                            let num = cj * rs.gram()[j][j];
                            debug_assert_eq!(num % aa, 0);
                            put(bi, bj, n_neg + j, num / aa);
                        }
                    }
                } else if let Some(ti) = rs.root_index(&sum) {
                    put(bi, bj, basis_of_root(ti), consts.n(ri, si));
                }
            }
        }

        LieAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            rs,
            kinds,
            labels,
            rows,
            n_neg,
        }
    }

    pub fn from_spec(spec: &str) -> Result<LieAlgebra> {
        Ok(LieAlgebra::new(RootSystem::from_spec(spec)?))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, i: usize) -> BasisKind {
        self.kinds[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Root of a root-vector basis element.
    pub fn root_of(&self, i: usize) -> Option<&Root> {
        match self.kinds[i] {
            BasisKind::Root(ri) => Some(&self.rs.roots()[ri]),
            _ => None,
        }
    }

    pub fn basis_index_of_root(&self, coords: &[i64]) -> Option<usize> {
        let ri = self.rs.root_index(coords)?;
        Some(if ri < self.n_neg {
            ri
        } else {
            ri + self.rs.rank() + self.rs.dynkin().torus
        })
    }

    pub fn cartan_indices(&self) -> std::ops::Range<usize> {
        self.n_neg..self.n_neg + self.rs.rank()
    }

    pub fn center_indices(&self) -> std::ops::Range<usize> {
        let start = self.n_neg + self.rs.rank();
        start..start + self.rs.dynkin().torus
    }

    /// Nonzero structure constants of `[b_i, ·]` as `(j, k, c)`.
    pub fn row(&self, i: usize) -> &[(usize, usize, i64)] {
        &self.rows[i]
    }

    /// `[b_i, b_j]` as a sparse list.
    pub fn structure(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        self.rows[i]
            .iter()
            .filter(|(jj, _, _)| *jj == j)
            .map(|&(_, k, c)| (k, c))
            .collect()
    }

    pub fn zero<S: Scalar>(&self) -> LieElement<S> {
        LieElement {
            algebra: self.id,
            coeffs: vec![S::zero(); self.dim()],
        }
    }

    pub fn basis_element<S: Scalar>(&self, i: usize) -> LieElement<S> {
        let mut e = self.zero();
        e.coeffs[i] = S::one();
        e
    }

    pub fn element<S: Scalar>(&self, coeffs: Vec<S>) -> Result<LieElement<S>> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coeffs.len(),
            });
        }
        Ok(LieElement {
            algebra: self.id,
            coeffs,
        })
    }

    pub(crate) fn check<S>(&self, x: &LieElement<S>) -> Result<()> {
        if x.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn bracket<S: Scalar>(&self, x: &LieElement<S>, y: &LieElement<S>) -> Result<LieElement<S>> {
        self.check(x)?;
        self.check(y)?;
        Ok(LieElement {
            algebra: self.id,
            coeffs: self.bracket_vec(&x.coeffs, &y.coeffs),
        })
    }

    /// Bracket on raw coefficient slices.
    pub fn bracket_vec<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, k, c) in &self.rows[i] {
                if !y[j].is_zero() {
                    out[k] += xi.clone() * y[j].clone() * S::from_i64(c);
                }
            }
        }
        out
    }

    /// Exact integer bracket.
    pub fn bracket_int(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.dim()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for &(j, k, c) in &self.rows[i] {
                out[k] += xi * y[j] * c;
            }
        }
        out
    }

    /// Matrix of `ad_x`; column `j` is `[x, b_j]`.
    pub fn ad_matrix<S: Scalar>(&self, x: &LieElement<S>) -> Result<DMatrix<S>> {
        self.check(x)?;
        Ok(self.ad_matrix_vec(&x.coeffs))
    }

    pub(crate) fn ad_matrix_vec<S: Scalar>(&self, x: &[S]) -> DMatrix<S> {
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, S::zero());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, k, c) in &self.rows[i] {
                m[(k, j)] += xi.clone() * S::from_i64(c);
            }
        }
        m
    }

    /// `exp(ad_x)` as the finite sum `Σ ad_x^k / k!`.
    pub fn exp_ad_nilpotent<S: Scalar>(&self, x: &LieElement<S>) -> Result<DMatrix<S>> {
        self.check(x)?;
        self.exp_ad_nilpotent_vec(&x.coeffs)
    }

    pub(crate) fn exp_ad_nilpotent_vec<S: Scalar>(&self, x: &[S]) -> Result<DMatrix<S>> {
        let d = self.dim();
        let ad = self.ad_matrix_vec(x);
        let mut result = DMatrix::<S>::identity(d, d);
        let mut power = DMatrix::<S>::identity(d, d);
        for k in 1..=d {
            power = &power * &ad;
            if power.iter().all(|v| v.is_zero()) {
                return Ok(result);
            }
            let f: S = inv_factorial(k);
            result += power.map(|v| v * f.clone());
        }
        Err(Error::NotNilpotent)
    }

    /// `exp(ad_x) v`, summed until the terms vanish.
    pub fn exp_ad_apply<S: Scalar>(&self, x: &[S], v: &[S]) -> Result<Vec<S>> {
        let mut result = v.to_vec();
        let mut term = v.to_vec();
        for k in 1..=self.dim() {
            term = self.bracket_vec(x, &term);
            if term.iter().all(|t| t.is_zero()) {
                return Ok(result);
            }
            let f: S = S::from_ratio(1, k as i64);
            for (t, r) in term.iter_mut().zip(result.iter_mut()) {
                *t *= f.clone();
                *r += t.clone();
            }
        }
        Err(Error::NotNilpotent)
    }

    /// Root values `α(h)` for every basis element (0 on Cartan and center).
    fn weights(&self, h: &[f64]) -> Result<Vec<f64>> {
        let mut w = vec![0.0; self.dim()];
        for (i, hi) in h.iter().enumerate() {
            if *hi != 0.0 && matches!(self.kinds[i], BasisKind::Root(_)) {
                return Err(Error::NotCartan(i));
            }
        }
        let cartan = self.cartan_indices();
        for (i, wi) in w.iter_mut().enumerate() {
            if let Some(r) = self.root_of(i) {
                *wi = cartan
                    .clone()
                    .enumerate()
                    .map(|(node, bi)| h[bi] * self.rs.pairing(&r.coords, node) as f64)
                    .sum();
            }
        }
        Ok(w)
    }

    /// `exp(ad_h)` for `h` in the Cartan subalgebra plus center: diagonal.
    pub fn exp_ad_cartan(&self, h: &LieElement<f64>) -> Result<DMatrix<f64>> {
        self.check(h)?;
        let w = self.weights(&h.coeffs)?;
        Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            w.into_iter().map(f64::exp),
        )))
    }

    pub fn exp_ad_cartan_apply(&self, h: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let w = self.weights(h)?;
        Ok(v.iter().zip(w).map(|(vi, wi)| vi * wi.exp()).collect())
    }

    /// Copy with one structure constant doubled, for negative controls.
    ///
    /// The first bracket of two positive root vectors is altered (or
    /// `[E_θ, E_{-θ}]` when there is none, as in `A_1`).
    pub fn corrupted(&self) -> LieAlgebra {
        let mut alg = self.clone();
        alg.id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        let pos_start = self.n_neg + self.rs.rank() + self.rs.dynkin().torus;
        let target = (pos_start..self.dim())
            .flat_map(|i| self.rows[i].iter().map(move |&(j, k, _)| (i, j, k)))
            .find(|&(_, j, _)| j >= pos_start)
            .or_else(|| {
                let top = self.dim().checked_sub(1)?;
                self.rows[top].iter().find(|(j, _, _)| *j == 0).map(|&(j, k, _)| (top, j, k))
            });
        if let Some((i, j, k)) = target {
            for entry in alg.rows[i].iter_mut() {
                if entry.0 == j && entry.1 == k {
                    entry.2 *= 2;
                }
            }
            for entry in alg.rows[j].iter_mut() {
                if entry.0 == i && entry.1 == k {
                    entry.2 *= 2;
                }
            }
        }
        alg
    }

    /// All nonzero `[b_i, b_j] ∋ c·b_k` as `(i, j, k, c)`.
    pub fn structure_triples(&self) -> Vec<(usize, usize, usize, i64)> {
        let mut out: Vec<_> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, k, c)| (i, j, k, c)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn structure_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dynkin": self.rs.dynkin().to_string(),
            "dim": self.dim(),
            "basis": self.labels,
            "triples": self.structure_triples().iter().map(|&(i, j, k, c)| [i as i64, j as i64, k as i64, c]).collect::<Vec<_>>(),
        })
    }
}

/// Label for a root vector, e.g. `E[1,1,0]` or `E[-1,0]`.
pub fn root_label(r: &Root) -> String {
    let parts: Vec<String> = r.coords.iter().map(|c| c.to_string()).collect();
    format!("E[{}]", parts.join(","))
}

/// `N_{α,β}` for all root pairs, via extraspecial pairs.
struct StructureConstants<'a> {
    rs: &'a RootSystem,
    n_pos: usize,
    /// `special[(x, y)]` for positive indices `x < y`, keyed by position in
    /// [`RootSystem::positive_roots`].
    special: HashMap<(usize, usize), i64>,
}

/// A root as (index into positive roots, sign).
#[derive(Clone, Copy)]
struct Signed {
    pos: usize,
    neg: bool,
}

impl<'a> StructureConstants<'a> {
    fn compute(rs: &'a RootSystem) -> Self {
        let pos = rs.positive_roots();
        let n_pos = pos.len();
        let mut sc = StructureConstants {
            rs,
            n_pos,
            special: HashMap::new(),
        };
        let pos_index: HashMap<&[i64], usize> =
            pos.iter().enumerate().map(|(i, r)| (r.coords.as_slice(), i)).collect();

        for (rho, rr) in pos.iter().enumerate() {
            let mut pairs = Vec::new();
            for x in 0..rho {
                let diff: Vec<i64> = rr.coords.iter().zip(&pos[x].coords).map(|(a, b)| a - b).collect();
                if let Some(&y) = pos_index.get(diff.as_slice()) {
                    if x < y {
                        pairs.push((x, y));
                    }
                }
            }
            let Some(&(a, b)) = pairs.first() else { continue };
            let p = string_down(rs, &pos[b].coords, &pos[a].coords);
            let n_ab = p + 1;
            sc.special.insert((a, b), n_ab);
            let rr_norm = rs.inner(&rr.coords, &rr.coords);
            for &(g, d) in &pairs[1..] {
                let sa = Signed { pos: a, neg: false };
                let sb = Signed { pos: b, neg: false };
                let mg = Signed { pos: g, neg: true };
                let md = Signed { pos: d, neg: true };
                let mut sum = Rational64::from_integer(0);
                for (u, v, w, z) in [(sb, mg, sa, md), (mg, sa, sb, md)] {
                    let Some(s1) = sc.sum(u, v) else { continue };
                    let n1 = sc.n_signed(u, v);
                    let n2 = sc.n_signed(w, z);
                    let norm = rs.inner(&s1, &s1);
                    sum += Rational64::new(n1 * n2, norm);
                }
                let val = sum * Rational64::from_integer(rr_norm) / Rational64::from_integer(n_ab);
                assert!(val.is_integer(), "non-integral structure constant");
                sc.special.insert((g, d), val.to_integer());
            }
        }
        sc
    }

    fn coords(&self, r: Signed) -> Vec<i64> {
        let c = &self.rs.positive_roots()[r.pos].coords;
        if r.neg {
            c.iter().map(|v| -v).collect()
        } else {
            c.clone()
        }
    }

    /// Coordinates of `u + v` when it is a root.
    fn sum(&self, u: Signed, v: Signed) -> Option<Vec<i64>> {
        let s: Vec<i64> = self.coords(u).iter().zip(self.coords(v)).map(|(a, b)| a + b).collect();
        if self.rs.is_root(&s) {
            Some(s)
        } else {
            None
        }
    }

    fn signed_of(&self, coords: &[i64]) -> Signed {
        let ri = self.rs.root_index(coords).expect("root");
        let half = self.n_pos;
        if ri < half {
            Signed { pos: half - 1 - ri, neg: true }
        } else {
            Signed { pos: ri - half, neg: false }
        }
    }

    fn n_pos_pair(&self, x: usize, y: usize) -> i64 {
        if x < y {
            self.special[&(x, y)]
        } else {
            -self.special[&(y, x)]
        }
    }

    fn norm(&self, r: Signed) -> i64 {
        let c = self.coords(r);
        self.rs.inner(&c, &c)
    }

    /// `N_{u,v}`, zero when `u + v` is not a root.
    fn n_signed(&self, u: Signed, v: Signed) -> i64 {
        let Some(s) = self.sum(u, v) else { return 0 };
        let c = self.signed_of(&s);
        match (u.neg, v.neg) {
            (false, false) => self.n_pos_pair(u.pos, v.pos),
            (true, true) => -self.n_pos_pair(u.pos, v.pos),
            (true, false) => -self.n_signed(v, u),
            (false, true) => {
                let cc = self.norm(c);
                if !c.neg {
                    // N_{a,b} = -(c,c)/(a,a) N_{-b,c}
                    let n = self.n_pos_pair(v.pos, c.pos);
                    let aa = self.norm(u);
                    debug_assert_eq!((cc * n) % aa, 0);
                    -(cc * n) / aa
                } else {
                    // N_{a,b} = (c,c)/(b,b) N_{-c,a}
                    let n = self.n_pos_pair(c.pos, u.pos);
                    let bb = self.norm(v);
                    debug_assert_eq!((cc * n) % bb, 0);
                    (cc * n) / bb
                }
            }
        }
    }

    /// `N` for entries of [`RootSystem::roots`].
    fn n(&self, ri: usize, si: usize) -> i64 {
        let u = self.signed_of(&self.rs.roots()[ri].coords);
        let v = self.signed_of(&self.rs.roots()[si].coords);
        self.n_signed(u, v)
    }
}

/// Largest `p` with `beta - p·alpha` a root.
pub(crate) fn string_down(rs: &RootSystem, beta: &[i64], alpha: &[i64]) -> i64 {
    let mut p = 0;
    loop {
        let c: Vec<i64> = beta.iter().zip(alpha).map(|(b, a)| b - (p + 1) * a).collect();
        if rs.is_root(&c) {
            p += 1;
        } else {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::from_spec(s).unwrap()
    }

    #[test]
    fn sl2_relations() {
        let a = alg("A1");
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["E[-1]", "H1", "E[1]"]);
        let (f, h, e) = (0, 1, 2);
        assert_eq!(a.structure(h, e), vec![(e, 2)]);
        assert_eq!(a.structure(e, f), vec![(h, 1)]);
        assert_eq!(a.structure(h, f), vec![(f, -2)]);
        let x = a.bracket(&a.basis_element::<f64>(e), &a.basis_element(f)).unwrap();
        assert_eq!(x, a.basis_element(h));
    }

    #[test]
    fn a2_brackets() {
        let a = alg("A2");
        assert_eq!(a.dim(), 8);
        let e1 = a.basis_index_of_root(&[1, 0]).unwrap();
        let e2 = a.basis_index_of_root(&[0, 1]).unwrap();
        let e12 = a.basis_index_of_root(&[1, 1]).unwrap();
        let s = a.structure(e1, e2);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].0, e12);
        assert_eq!(s[0].1.abs(), 1);
        let h1 = a.cartan_indices().start;
        let r = a.bracket(&a.basis_element::<f64>(h1), &a.basis_element(e2)).unwrap();
        assert_eq!(r, a.basis_element::<f64>(e2).scale(&-1.0));
    }

    #[test]
    fn g2_has_constants_two_and_three() {
        let a = alg("G2");
        assert_eq!(a.dim(), 14);
        let mags: std::collections::BTreeSet<i64> = a
            .structure_triples()
            .iter()
            .filter(|&&(i, j, k, _)| {
                [i, j, k].iter().all(|&b| a.root_of(b).is_some())
            })
            .map(|t| t.3.abs())
            .collect();
        assert_eq!(mags, [1, 2, 3].into_iter().collect());
    }

    #[test]
    fn bracket_self_is_zero() {
        let a = alg("B2");
        let x = a.element((0..a.dim()).map(|i| i as f64 - 3.5).collect()).unwrap();
        assert!(a.bracket(&x, &x).unwrap().coeffs.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let a = alg("A1");
        let b = alg("A1");
        let x = a.basis_element::<f64>(0);
        let y = b.basis_element::<f64>(1);
        assert!(matches!(a.bracket(&x, &y), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn ad_of_h_is_diagonal() {
        let a = alg("A1");
        assert!(a.ad_matrix(&a.zero::<f64>()).unwrap().iter().all(|v| *v == 0.0));
        let m = a.ad_matrix(&a.basis_element::<f64>(1)).unwrap();
        assert_eq!(m, DMatrix::from_diagonal(&nalgebra::dvector![-2.0, 0.0, 2.0]));
    }

    #[test]
    fn exp_ad_nilpotent_sl2() {
        let a = alg("A1");
        let id = a.exp_ad_nilpotent(&a.zero::<BigRational>()).unwrap();
        assert_eq!(id, DMatrix::identity(3, 3));
        let t = 0.7;
        let x = a.basis_element::<f64>(2).scale(&t);
        let m = a.exp_ad_nilpotent(&x).unwrap();
        // ad_E: F -> H, H -> -2E; exp = I + ad + ad^2/2
        let expect = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, t, 1.0, 0.0, -t * t, -2.0 * t, 1.0]);
        assert!((m.clone() - expect).abs().max() < 1e-15);
        assert!((m.determinant() - 1.0).abs() < 1e-12);
        let mixed = a.element(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(a.exp_ad_nilpotent(&mixed), Err(Error::NotNilpotent)));
    }

    #[test]
    fn exp_ad_cartan_sl2() {
        let a = alg("A1");
        let s = 0.3;
        let m = a.exp_ad_cartan(&a.basis_element::<f64>(1).scale(&s)).unwrap();
        let d = nalgebra::dvector![(-2.0 * s).exp(), 1.0, (2.0 * s).exp()];
        assert!((m - DMatrix::from_diagonal(&d)).abs().max() < 1e-15);
        assert!(matches!(
            a.exp_ad_cartan(&a.basis_element::<f64>(0)),
            Err(Error::NotCartan(0))
        ));
    }

    #[test]
    fn center_is_central() {
        let a = alg("A1+T2");
        assert_eq!(a.dim(), 5);
        for c in a.center_indices() {
            assert!(a.row(c).is_empty());
            for i in 0..a.dim() {
                assert!(a.structure(i, c).is_empty());
            }
        }
    }

    #[test]
    fn corrupted_differs() {
        let a = alg("A2");
        let c = a.corrupted();
        assert_ne!(a.structure_triples(), c.structure_triples());
        let a1 = alg("A1");
        assert_ne!(a1.structure_triples(), a1.corrupted().structure_triples());
    }
}
