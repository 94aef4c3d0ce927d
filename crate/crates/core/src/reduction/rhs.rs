use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Level;
use crate::chevalley::{add_vec, sub_vec, LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::scalar::{inv_factorial, rational, Scalar};

/// Largest coefficient allowed outside the positive part after transport.
pub(crate) const LEAK_TOL: f64 = 1e-10;

/// `Z' − [W,Y] + ½[W,[W,Z]]`.
pub fn riccati_rhs<S: Scalar>(
    alg: &LieAlgebra,
    g: &Grading,
    w: &LieElement<S>,
    zp: &LieElement<S>,
    y: &LieElement<S>,
    z: &LieElement<S>,
) -> Result<LieElement<S>> {
    g.check_slice(alg, "W", w, "-1", |d| d == -1)?;
    g.check_slice(alg, "Z'", zp, "-1", |d| d == -1)?;
    g.check_slice(alg, "Y", y, "0", |d| d == 0)?;
    g.check_slice(alg, "Z", z, "1", |d| d == 1)?;
    alg.element(riccati_raw(alg, &w.coeffs, &zp.coeffs, &y.coeffs, &z.coeffs))
}

pub(crate) fn riccati_raw<S: Scalar>(alg: &LieAlgebra, w: &[S], zp: &[S], y: &[S], z: &[S]) -> Vec<S> {
    let wy = alg.bracket_vec(w, y);
    let wwz = alg.bracket_vec(w, &alg.bracket_vec(w, z));
    let half = S::from_ratio(1, 2);
    zp.iter()
        .zip(wy)
        .zip(wwz)
        .map(|((a, b), c)| a.clone() - b + half.clone() * c)
        .collect()
}

/// `Y − [W,Z]`, the input of the Levi development.
pub fn levi_input<S: Scalar>(
    alg: &LieAlgebra,
    g: &Grading,
    w: &LieElement<S>,
    y: &LieElement<S>,
    z: &LieElement<S>,
) -> Result<LieElement<S>> {
    g.check_slice(alg, "W", w, "-1", |d| d == -1)?;
    g.check_slice(alg, "Y", y, "0", |d| d == 0)?;
    g.check_slice(alg, "Z", z, "1", |d| d == 1)?;
    alg.element(sub_vec(&y.coeffs, &alg.bracket_vec(&w.coeffs, &z.coeffs)))
}

/// `Ad_y^{-1} Z` given the matrix of `Ad_y^{-1}`.
pub fn v_integrand(
    alg: &LieAlgebra,
    g: &Grading,
    ady_inv: &DMatrix<f64>,
    z: &LieElement<f64>,
) -> Result<LieElement<f64>> {
    g.check_slice(alg, "Z", z, "> 0", |d| d > 0)?;
    let d = alg.dim();
    if ady_inv.nrows() != d || ady_inv.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: ady_inv.nrows(),
        });
    }
    let v = ady_inv * nalgebra::DVector::from_column_slice(&z.coeffs);
    let mut coeffs: Vec<f64> = v.iter().copied().collect();
    check_leak(g.degrees(), &mut coeffs)?;
    alg.element(coeffs)
}

/// Fail when `v` has mass outside positive degrees; otherwise clear it.
pub(crate) fn check_leak(degrees: &[i64], v: &mut [f64]) -> Result<()> {
    for (c, &d) in v.iter_mut().zip(degrees) {
        if d <= 0 {
            if c.abs() > LEAK_TOL || c.is_nan() {
                return Err(Error::SliceLeak(c.abs()));
            }
            *c = 0.0;
        }
    }
    Ok(())
}

/// `Θ(ad_w) v` with `Θ(u) = (e^u − 1)/u`.
pub fn theta_apply<S: Scalar>(alg: &LieAlgebra, w: &[S], v: &[S]) -> Result<Vec<S>> {
    let mut out = v.to_vec();
    let mut term = v.to_vec();
    for k in 1..=alg.dim() {
        term = alg.bracket_vec(w, &term);
        if term.iter().all(|t| t.is_zero()) {
            return Ok(out);
        }
        let f: S = inv_factorial(k + 1);
        for (o, t) in out.iter_mut().zip(&term) {
            *o += f.clone() * t.clone();
        }
    }
    Err(Error::NotNilpotent)
}

/// `Θ(ad_w)^{-1} v` by the Neumann series of the unipotent operator.
pub fn theta_inverse<S: Scalar>(alg: &LieAlgebra, w: &[S], v: &[S]) -> Result<Vec<S>> {
    let mut out = v.to_vec();
    let mut term = v.to_vec();
    for _ in 0..=alg.dim() {
        // term ← −(Θ − 1) term
        let next = sub_vec(&term, &theta_apply(alg, w, &term)?);
        if next.iter().all(|t| t.is_zero()) {
            return Ok(out);
        }
        out = add_vec(&out, &next);
        term = next;
    }
    Err(Error::NotNilpotent)
}

/// Pieces of the development split along `n⁻ ⊕ l ⊕ n⁺` with `x = e^W y e^V`.
#[derive(Clone, Debug)]
pub struct ContactParts<S> {
    /// `dW/dt`.
    pub w_dot: LieElement<S>,
    /// Degree-0 input passed to the Levi.
    pub levi_input: LieElement<S>,
    /// `Ad_y (dexp_V V')`, to be transported by `Ad_y^{-1}`.
    pub upper_source: LieElement<S>,
}

/// `dW/dt` for a nilradical unknown `W` of any depth.
pub fn contact_stage_rhs<S: Scalar>(
    alg: &LieAlgebra,
    g: &Grading,
    w: &LieElement<S>,
    x: &LieElement<S>,
) -> Result<LieElement<S>> {
    Ok(contact_parts(alg, g, w, x)?.w_dot)
}

pub fn contact_parts<S: Scalar>(
    alg: &LieAlgebra,
    g: &Grading,
    w: &LieElement<S>,
    x: &LieElement<S>,
) -> Result<ContactParts<S>> {
    g.check_slice(alg, "W", w, "< 0", |d| d < 0)?;
    alg.check(x)?;
    let (w_dot, a, b) = contact_raw(alg, g.degrees(), &w.coeffs, &x.coeffs)?;
    Ok(ContactParts {
        w_dot: alg.element(w_dot)?,
        levi_input: alg.element(a)?,
        upper_source: alg.element(b)?,
    })
}

/// Returns `(dW/dt, A, B)` where `e^{-ad W} X = (n⁻ part) + A + B`.
pub(crate) fn contact_raw<S: Scalar>(
    alg: &LieAlgebra,
    degrees: &[i64],
    w: &[S],
    x: &[S],
) -> Result<(Vec<S>, Vec<S>, Vec<S>)> {
    let neg_w: Vec<S> = w.iter().map(|c| -c.clone()).collect();
    let u = alg.exp_ad_apply(&neg_w, x)?;
    let keep = |v: &[S], f: &dyn Fn(i64) -> bool| -> Vec<S> {
        v.iter()
            .zip(degrees)
            .map(|(c, &d)| if f(d) { c.clone() } else { S::zero() })
            .collect()
    };
    let a = keep(&u, &|d| d == 0);
    let b = keep(&u, &|d| d > 0);
    let back = alg.exp_ad_apply(w, &add_vec(&a, &b))?;
    let rhs = sub_vec(&keep(x, &|d| d < 0), &keep(&back, &|d| d < 0));
    let w_dot = theta_inverse(alg, w, &rhs)?;
    Ok((w_dot, a, b))
}

/// Largest residual of `Θ Θ^{-1} = Θ^{-1} Θ = 1` on random elements of the
/// level's negative and positive nilradicals, computed in exact arithmetic.
pub fn contact_self_test(alg: &LieAlgebra, level: &Level, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = alg.dim();
    let mut worst = 0.0f64;
    for part in [&level.lower, &level.upper] {
        for _ in 0..samples {
            let mut draw = || {
                let mut v = vec![rational(0, 1); d];
                for &i in part.iter() {
                    v[i] = rational(rng.gen_range(-3..=3), 1);
                }
                v
            };
            let w = draw();
            let v = draw();
            let round1 = theta_apply(alg, &w, &theta_inverse(alg, &w, &v)?)?;
            let round2 = theta_inverse(alg, &w, &theta_apply(alg, &w, &v)?)?;
            for r in [round1, round2] {
                for (a, b) in r.iter().zip(&v) {
                    let diff = (a - b).to_f64().unwrap_or(f64::INFINITY).abs();
                    worst = worst.max(diff);
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> (LieAlgebra, Grading) {
        let a = LieAlgebra::from_spec("A1").unwrap();
        let g = Grading::from_sigma(&a, &[0]).unwrap();
        (a, g)
    }

    // basis of A1 is [F, H, E]
    fn el(a: &LieAlgebra, f: f64, h: f64, e: f64) -> LieElement<f64> {
        a.element(vec![f, h, e]).unwrap()
    }

    #[test]
    fn riccati_a1() {
        let (a, g) = a1();
        let (w, y, z, zp) = (0.7, -0.3, 1.9, 0.4);
        let out = riccati_rhs(&a, &g, &el(&a, w, 0., 0.), &el(&a, zp, 0., 0.), &el(&a, 0., y, 0.), &el(&a, 0., 0., z))
            .unwrap();
        let expected = zp - 2.0 * w * y - w * w * z;
        assert!((out.coeffs[0] - expected).abs() < 1e-15);
        assert_eq!(&out.coeffs[1..], &[0.0, 0.0]);
    }

    #[test]
    fn riccati_trivial_cases() {
        let (a, g) = a1();
        let zp = el(&a, 0.4, 0., 0.);
        let out = riccati_rhs(&a, &g, &a.zero(), &zp, &el(&a, 0., 3., 0.), &el(&a, 0., 0., 2.)).unwrap();
        assert_eq!(out, zp);
        let out = riccati_rhs(&a, &g, &el(&a, 1., 0., 0.), &zp, &a.zero(), &a.zero()).unwrap();
        assert_eq!(out, zp);
    }

    #[test]
    fn slices_enforced() {
        let (a, g) = a1();
        let bad = el(&a, 0., 1., 0.);
        assert!(matches!(
            riccati_rhs(&a, &g, &bad, &a.zero(), &a.zero(), &a.zero()),
            Err(Error::SliceViolation { .. })
        ));
        assert!(levi_input(&a, &g, &a.zero(), &el(&a, 0., 0., 1.), &a.zero()).is_err());
    }

    #[test]
    fn levi_input_a1() {
        let (a, g) = a1();
        let (w, y, z) = (0.5, 0.25, 3.0);
        let out = levi_input(&a, &g, &el(&a, w, 0., 0.), &el(&a, 0., y, 0.), &el(&a, 0., 0., z)).unwrap();
        assert_eq!(out.coeffs, vec![0.0, y + w * z, 0.0]);
    }

    #[test]
    fn v_integrand_a1() {
        let (a, g) = a1();
        let s = 0.3;
        let m = a.exp_ad_cartan(&el(&a, 0., -s, 0.)).unwrap();
        let out = v_integrand(&a, &g, &m, &el(&a, 0., 0., 2.0)).unwrap();
        assert!((out.coeffs[2] - 2.0 * (-2.0 * s).exp()).abs() < 1e-15);
        let id = DMatrix::identity(3, 3);
        assert_eq!(v_integrand(&a, &g, &id, &el(&a, 0., 0., 2.0)).unwrap(), el(&a, 0., 0., 2.0));
        let leaky = a.exp_ad_nilpotent(&el(&a, 1.0, 0., 0.)).unwrap();
        assert!(matches!(v_integrand(&a, &g, &leaky, &el(&a, 0., 0., 1.0)), Err(Error::SliceLeak(_))));
    }

    #[test]
    fn contact_reduces_to_riccati() {
        let a = LieAlgebra::from_spec("A3").unwrap();
        let g = Grading::from_sigma(&a, &[1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let mut w = vec![rational(0, 1); a.dim()];
            let mut x = vec![rational(0, 1); a.dim()];
            for i in 0..a.dim() {
                x[i] = rational(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                if g.degree(i) == -1 {
                    w[i] = rational(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                }
            }
            let part = |deg: i64| g.project_vec(&x, |d| d == deg);
            let ric = riccati_raw(&a, &w, &part(-1), &part(0), &part(1));
            let (wd, lev, up) = contact_raw(&a, g.degrees(), &w, &x).unwrap();
            assert_eq!(wd, ric);
            assert_eq!(lev, sub_vec(&part(0), &a.bracket_vec(&w, &part(1))));
            assert_eq!(up, part(1));
        }
    }

    #[test]
    fn contact_zero_w_projects() {
        let a = LieAlgebra::from_spec("G2").unwrap();
        let g = Grading::from_sigma(&a, &[1]).unwrap();
        let x = a.element((0..a.dim()).map(|i| i as f64 - 3.0).collect()).unwrap();
        let out = contact_stage_rhs(&a, &g, &a.zero(), &x).unwrap();
        assert_eq!(out.coeffs, g.project_vec(&x.coeffs, |d| d < 0));
    }

    #[test]
    fn theta_roundtrip() {
        let a = LieAlgebra::from_spec("G2").unwrap();
        let g = Grading::from_sigma(&a, &[1]).unwrap();
        let w: Vec<f64> = (0..a.dim()).map(|i| if g.degree(i) < 0 { 0.3 * i as f64 } else { 0.0 }).collect();
        let v: Vec<f64> = (0..a.dim()).map(|i| if g.degree(i) < 0 { 1.0 - i as f64 } else { 0.0 }).collect();
        let back = theta_apply(&a, &w, &theta_inverse(&a, &w, &v).unwrap()).unwrap();
        for (x, y) in back.iter().zip(&v) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
