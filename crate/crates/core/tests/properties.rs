use std::sync::Arc;

use nalgebra::DMatrix;
use num_rational::BigRational;
use proptest::prelude::*;
use weinorman::reduction::{contact_stage_rhs, emit_symbolic, levi_input, riccati_rhs};
use weinorman::scalar::rational;
use weinorman::solver::reconstruct_adjoint;
use weinorman::{plan_hierarchy, CoefficientPath, Grading, LieAlgebra, Mode, SolveOptions, Status};

const GROUPS: &[&str] = &["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "A2xA1", "A1+T1"];
const COMINUSCULE: &[&str] = &["A1", "A2", "A4", "B3", "C3", "D4", "D5", "A2xA1", "A1xB2", "A2+T1"];

fn algebra(s: &str) -> Arc<LieAlgebra> {
    Arc::new(LieAlgebra::from_spec(s).unwrap())
}

fn vector(alg: &LieAlgebra, keep: impl Fn(usize) -> bool, raw: &[f64]) -> Vec<f64> {
    (0..alg.dim()).map(|i| if keep(i) { raw[i % raw.len()] } else { 0.0 }).collect()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) -> Result<(), TestCaseError> {
    for (x, y) in a.iter().zip(b) {
        prop_assert!((x - y).abs() <= tol, "{} vs {}", x, y);
    }
    Ok(())
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 7..31)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn brackets_respect_degrees(g in prop::sample::select(GROUPS), mask in 1u32..256) {
        let alg = algebra(g);
        let rank = alg.root_system().dynkin().semisimple_rank();
        let mut sigma: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
        if sigma.is_empty() {
            sigma.push((mask as usize) % rank);
        }
        let gr = Grading::from_sigma(&alg, &sigma).unwrap();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                for (k, _) in alg.structure(i, j) {
                    prop_assert_eq!(gr.degree(k), gr.degree(i) + gr.degree(j));
                }
            }
        }
    }

    #[test]
    fn exact_exponentials_invert(g in prop::sample::select(&["A2", "A3", "B2", "C3", "G2"][..]), raw in prop::collection::vec(-3i64..=3, 12)) {
        let alg = algebra(g);
        let x: Vec<BigRational> = (0..alg.dim())
            .map(|i| match alg.root_of(i) {
                Some(r) if r.is_positive() => rational(raw[i % raw.len()], 1 + (i as i64 % 3)),
                _ => rational(0, 1),
            })
            .collect();
        let neg: Vec<BigRational> = x.iter().map(|c| -c.clone()).collect();
        let a = alg.exp_ad_nilpotent(&alg.element(x).unwrap()).unwrap();
        let b = alg.exp_ad_nilpotent(&alg.element(neg).unwrap()).unwrap();
        let id = DMatrix::<BigRational>::identity(alg.dim(), alg.dim());
        prop_assert_eq!(&a * &b, id);
    }

    #[test]
    fn cartan_exponentials_multiply(g in prop::sample::select(GROUPS), r1 in coeffs(), r2 in coeffs()) {
        let alg = algebra(g);
        let cartan = |i: usize| alg.root_of(i).is_none();
        let h1 = vector(&alg, cartan, &r1);
        let h2 = vector(&alg, cartan, &r2);
        let sum: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
        let e = |h: Vec<f64>| alg.exp_ad_cartan(&alg.element(h).unwrap()).unwrap();
        let lhs = e(h1) * e(h2);
        let rhs = e(sum);
        assert_close(lhs.as_slice(), rhs.as_slice(), 1e-12 * rhs.amax().max(1.0))?;
    }

    #[test]
    fn riccati_and_levi_stay_in_their_slices(g in prop::sample::select(COMINUSCULE), raw in coeffs(), wr in coeffs()) {
        let alg = algebra(g);
        let h = plan_hierarchy(alg.clone(), Mode::Cominuscule).unwrap();
        for level in h.levels() {
            let gr = &level.grading;
            let part = |deg: i64| {
                let v = vector(&alg, |i| gr.degree(i) == deg && level.ambient.contains(&i), &raw);
                alg.element(v).unwrap()
            };
            let w = alg.element(vector(&alg, |i| level.lower.contains(&i), &wr)).unwrap();
            let dw = riccati_rhs(&alg, gr, &w, &part(-1), &part(0), &part(1)).unwrap();
            let a = levi_input(&alg, gr, &w, &part(0), &part(1)).unwrap();
            for i in 0..alg.dim() {
                if gr.degree(i) != -1 {
                    prop_assert!(dw.coeffs[i] == 0.0);
                }
                if gr.degree(i) != 0 {
                    prop_assert!(a.coeffs[i] == 0.0);
                }
            }
        }
    }

    #[test]
    fn emitted_first_stage_matches_brackets(
        (g, mode) in prop::sample::select(&[
            ("A3", Mode::Cominuscule), ("B3", Mode::Cominuscule), ("D4", Mode::Cominuscule),
            ("A2xA1", Mode::Cominuscule), ("G2", Mode::Contact), ("B3", Mode::Contact), ("C2", Mode::Contact),
        ][..]),
        raw in coeffs(),
        wr in coeffs(),
    ) {
        let alg = algebra(g);
        let h = plan_hierarchy(alg.clone(), mode).unwrap();
        let doc = emit_symbolic(&h).unwrap();
        let level = &h.levels()[0];
        let gr = &level.grading;
        let x = vector(&alg, |_| true, &raw);
        let w = vector(&alg, |i| level.lower.contains(&i), &wr);
        let direct = match mode {
            Mode::Cominuscule => {
                let part = |deg: i64| alg.element(vector(&alg, |i| gr.degree(i) == deg, &raw)).unwrap();
                riccati_rhs(&alg, gr, &alg.element(w.clone()).unwrap(), &part(-1), &part(0), &part(1)).unwrap()
            }
            Mode::Contact => contact_stage_rhs(&alg, gr, &alg.element(w.clone()).unwrap(), &alg.element(x.clone()).unwrap()).unwrap(),
        };
        let emitted = doc.stages[0].rhs.eval(alg.dim(), &w, &x);
        assert_close(&direct.coeffs, &emitted, 1e-12)?;
    }

    #[test]
    fn factor_count_within_bound(g in prop::sample::select(&[
        "A1", "A2", "A5", "B2", "B4", "C3", "C5", "D3", "D4", "D6", "E6", "E7", "A2xA1", "A1+T2", "B2xD4",
    ][..])) {
        let h = plan_hierarchy(algebra(g), Mode::Cominuscule).unwrap();
        prop_assert!(h.factor_count() <= h.factor_bound());
        let mut seen: Vec<usize> = (0..h.stages().len()).flat_map(|s| h.unknowns(s).to_vec()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..h.algebra().dim()).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reconstruction_is_unimodular(g in prop::sample::select(&["A1", "A2", "B2", "C3", "A2xA1"][..]), seed in any::<u64>()) {
        let alg = algebra(g);
        let h = Arc::new(plan_hierarchy(alg.clone(), Mode::Cominuscule).unwrap());
        let x = CoefficientPath::random_sinusoidal(&alg, seed, 0.5).unwrap();
        let tr = weinorman::solver::solve(h, &x, &SolveOptions::new(1e-2, 0.5)).unwrap();
        prop_assume!(tr.status() == Status::Completed);
        for &t in &[0.1, 0.3, 0.5] {
            let det = reconstruct_adjoint(&tr, t).unwrap().determinant();
            prop_assert!((det - 1.0).abs() < 1e-9, "det {}", det);
        }
    }
}
