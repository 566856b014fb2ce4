use std::sync::Arc;

use bihv_core::catalog::{parse_expr, parse_tree, q_asymptotic, q_laurent_coeff, Corpus};
use bihv_core::derivation::full_system;
use bihv_core::odesim::{integrate, residuals_with, ClosedFormFamily, PkEvaluator};
use bihv_core::poly::{int, Monomial};
use bihv_core::rings::Ring;
use bihv_core::{Exec, Polynomial, Rational, VarTable};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn poly_over(table: Arc<VarTable>, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = table.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), small_rational()), 0..=max_terms)
        .prop_map(move |terms| Polynomial::from_terms(&table, terms.into_iter().map(|(e, c)| (Monomial::new(e), c))))
}

fn xyz() -> Arc<VarTable> {
    VarTable::new(["x", "y", "z"]).unwrap()
}

fn full2() -> Ring {
    Ring::full(2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_over(xyz(), 3, 5), b in poly_over(xyz(), 3, 5), c in poly_over(xyz(), 3, 5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn parallel_product_matches_sequential(a in poly_over(xyz(), 4, 12), b in poly_over(xyz(), 4, 12)) {
        prop_assert_eq!(a.try_mul_with(&b, Exec::Parallel).unwrap(), a.try_mul_with(&b, Exec::Sequential).unwrap());
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly_over(xyz(), 3, 5), q in poly_over(xyz(), 2, 4)) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).divide_exact(&q).unwrap(), Some(p));
    }

    #[test]
    fn division_identity(p in poly_over(xyz(), 3, 6), q in poly_over(xyz(), 2, 3)) {
        prop_assume!(!q.is_zero());
        let (quo, rem) = p.div_rem(&q).unwrap();
        prop_assert_eq!(&(&quo * &q) + &rem, p);
    }

    #[test]
    fn primitive_part_ignores_scaling(p in poly_over(xyz(), 3, 5), c in small_rational()) {
        prop_assume!(!p.is_zero() && !c.is_zero());
        prop_assert_eq!(p.scale(&c).primitive(), p.primitive());
    }

    #[test]
    fn leibniz_rule(p in poly_over(full2().table().clone(), 2, 4), q in poly_over(full2().table().clone(), 2, 4)) {
        let d = full_system(&full2()).unwrap();
        let lhs = d.apply(&(&p * &q)).unwrap();
        let rhs = &(&d.apply(&p).unwrap() * &q) + &(&p * &d.apply(&q).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(
        p in poly_over(xyz(), 2, 4),
        q in poly_over(xyz(), 2, 4),
        img in poly_over(xyz(), 2, 3),
    ) {
        let s = |f: &Polynomial| f.substitute_var("x", &img).unwrap();
        prop_assert_eq!(s(&(&p * &q)), &s(&p) * &s(&q));
        prop_assert_eq!(s(&(&p + &q)), &s(&p) + &s(&q));
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        p in poly_over(xyz(), 3, 5),
        q in poly_over(xyz(), 3, 5),
        pt in prop::collection::vec(small_rational(), 3),
    ) {
        let at: Vec<(&str, Rational)> = ["x", "y", "z"].into_iter().zip(pt).collect();
        let e = |f: &Polynomial| f.evaluate_rational(&at).unwrap();
        prop_assert_eq!(e(&(&p * &q)), e(&p) * e(&q));
    }

    #[test]
    fn print_then_parse(p in poly_over(Ring::lambda().table().clone(), 3, 6)) {
        prop_assert_eq!(parse_expr(&p.to_string(), &Ring::lambda()).unwrap(), p);
    }

    #[test]
    fn laurent_coefficient_of_a_group(m in 1usize..=6, others in prop::collection::vec(1i64..=5, 0..=2)) {
        // the zero group has size m, every other b-value is distinct and nonzero
        let mut b = vec![Rational::zero(); m];
        let mut seen = std::collections::BTreeSet::new();
        for o in others {
            if seen.insert(o) {
                b.push(int(o));
            }
        }
        let mf = int(m as i64);
        let want = int(-2) * &mf * &mf * &mf * (&mf - int(3)) * (&mf + int(3)) * (int(2) * &mf + int(3));
        prop_assert_eq!(q_laurent_coeff(&b, 0).unwrap(), want);
    }
}

#[test]
fn corpus_trees_survive_printing() {
    let corpus = Corpus::builtin();
    for name in corpus.names() {
        for src in &corpus.entry(name).unwrap().sources {
            let printed = src.tree.to_string();
            assert_eq!(parse_tree(&printed).unwrap(), src.tree, "{}", src.file);
            assert_eq!(parse_tree(&parse_tree(&printed).unwrap().to_string()).unwrap(), src.tree);
        }
    }
}

#[test]
fn all_equal_laurent_matches_asymptotic() {
    let q = q_asymptotic();
    for m in 1..=6i64 {
        let at_m = q.evaluate_rational(&[("n1", int(m))]).unwrap();
        assert_eq!(q_laurent_coeff(&vec![int(7); m as usize], 0).unwrap(), at_m, "m = {m}");
    }
}

/// Points on closed-form families stay on the variety under the numeric flow.
#[test]
fn forward_invariance_seeded() {
    let seed = std::env::var("BIHV_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20240611u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let evals: Vec<PkEvaluator> = (1..=3).map(|n1| PkEvaluator::new(n1, 3).unwrap()).collect();
    for i in 0..20 {
        let k = [0, -1, 1][i % 3];
        let n1 = 1 + (i % 3) as u32;
        let (c_range, t0) = match k {
            0 => ((0.0, 1.0), 1.0),
            -1 => ((-1.0, 1.0), 0.0),
            _ => ((-0.3, 0.3), 0.0),
        };
        let f = ClosedFormFamily::sample(k, n1, c_range, &mut rng).unwrap();
        let y0 = f.state(t0).unwrap();
        let eval = &evals[n1 as usize - 1];
        for kk in 0..=2 {
            assert!(eval.eval(kk, &y0, k as f64).abs() < 1e-12);
        }
        let traj = integrate(&f.spec(), &y0, t0, t0 + 1.0, 1e-10).unwrap();
        let r = residuals_with(&traj, eval, 3).unwrap();
        assert!(r.max_p_all() < 1e-6, "seed {seed}, point {i}: {}", r.max_p_all());
    }
}
