//! Randomized invariants of the arithmetic, the flag combinatorics, the exact
//! classes and the theta function.

use hbar_schubert::elliptic::{theta, theta_prime_1, EllipticContext, MonomialArg, C64};
use hbar_schubert::flags::{
    act, dim_cell, enumerate_tuples, partition_to_subset, subset_to_partition, transpose, FlagShape, IndexTuple,
    Permutation,
};
use hbar_schubert::scalars::{Monomial, MultiPoly, VariableId};
use hbar_schubert::structure::lr_coefficient;
use hbar_schubert::weights::{class_tuple, gkm_check, Theory};
use num_bigint::BigInt;
use proptest::prelude::*;

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Flag shapes with at least two parts and `n ≤ 4`.
fn small_shapes() -> Vec<FlagShape> {
    (2..=4)
        .flat_map(compositions)
        .filter(|c| c.len() >= 2)
        .map(|c| FlagShape::new(c).unwrap())
        .collect()
}

fn grassmannians() -> Vec<FlagShape> {
    small_shapes().into_iter().filter(|s| s.len() == 2).collect()
}

fn shape_and_tuples(shapes: Vec<FlagShape>, count: usize) -> impl Strategy<Value = (FlagShape, Vec<IndexTuple>)> {
    prop::sample::select(shapes).prop_flat_map(move |shape| {
        let tuples = enumerate_tuples(&shape);
        (Just(shape), prop::collection::vec(prop::sample::select(tuples), count))
    })
}

const VARS: [VariableId; 4] = [VariableId::Z(1), VariableId::Z(2), VariableId::Z(3), VariableId::Hbar];

fn laurent() -> impl Strategy<Value = MultiPoly> {
    let term = (prop::array::uniform4(-2i32..=2), -4i64..=4);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|(e, c)| {
            (Monomial::from_pairs(VARS.iter().copied().zip(e)), BigInt::from(c))
        }))
    })
}

fn polynomial() -> impl Strategy<Value = MultiPoly> {
    let term = (prop::array::uniform4(0i32..=2), -4i64..=4);
    prop::collection::vec(term, 1..4).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|(e, c)| {
            (Monomial::from_pairs(VARS.iter().copied().zip(e)), BigInt::from(c))
        }))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

/// The highest power of ħ occurring anywhere in the tuple, and the
/// coefficients of that power.
fn top_hbar(values: &[MultiPoly]) -> (i32, Vec<MultiPoly>) {
    let top = values.iter().filter_map(|p| p.degree_in(VariableId::Hbar)).max().unwrap();
    (top, values.iter().map(|p| p.coefficient_of(VariableId::Hbar, top)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in laurent(), b in polynomial()) {
        prop_assume!(!b.is_zero());
        let q = (&a * &b).divide_exact(&b);
        prop_assert_eq!(q, Some(a));
    }

    #[test]
    fn substitution_is_a_ring_map(a in laurent(), b in laurent(), s in polynomial()) {
        // z2 ↦ s; only polynomial images keep negative powers meaningful, so
        // substitute into the polynomial part
        let a = a.mul_monomial(&a.monomial_content().inverse());
        let b = b.mul_monomial(&b.monomial_content().inverse());
        let sub = |p: &MultiPoly| p.substitute(&|v| (v == VariableId::Z(2)).then(|| s.clone())).unwrap();
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
    }

    #[test]
    fn canonical_text_round_trips(a in laurent()) {
        let text = a.to_string();
        let back: MultiPoly = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn tuple_text_and_transpositions((shape, ts) in shape_and_tuples(small_shapes(), 1), i in 1usize..=4, j in 1usize..=4) {
        let t = &ts[0];
        let back: IndexTuple = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, t);
        prop_assert!(dim_cell(t) <= shape.dim());
        let n = shape.n();
        prop_assume!(i < j && j <= n);
        let u = transpose(t, i, j);
        prop_assert_eq!(transpose(&u, i, j), t.clone());
        prop_assert_eq!(u.shape(), shape);
    }

    #[test]
    fn permutation_action_composes((t, a, b) in shape_and_tuples(small_shapes(), 1).prop_flat_map(|(shape, ts)| {
        (Just(ts[0].clone()), permutation(shape.n()), permutation(shape.n()))
    })) {
        // σ ↦ σ^{-1}(I) is a right action
        prop_assert_eq!(act(&a, &act(&b, &t)), act(&b.compose(&a), &t));
        prop_assert_eq!(act(&a.inverse(), &act(&a, &t)), t.clone());
    }

    #[test]
    fn gkm_condition_for_exact_classes((shape, ts) in shape_and_tuples(small_shapes(), 1), longest in any::<bool>(), k in any::<bool>()) {
        let n = shape.n();
        let sigma = if longest { Permutation::longest(n) } else { Permutation::identity(n) };
        let theory = if k { Theory::K } else { Theory::H };
        let t = class_tuple(theory, &shape, &ts[0], &sigma).unwrap();
        prop_assert!(gkm_check(&t).is_ok());
        if theory == Theory::H {
            prop_assert!(t.values.iter().all(|v| v.is_polynomial()));
        }
    }

    #[test]
    fn structure_constants_are_polynomial_and_symmetric((shape, ts) in shape_and_tuples(small_shapes(), 3), k in any::<bool>()) {
        let theory = if k { Theory::K } else { Theory::H };
        let ab = lr_coefficient(theory, &shape, &ts[0], &ts[1], &ts[2]).unwrap();
        let ba = lr_coefficient(theory, &shape, &ts[1], &ts[0], &ts[2]).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn top_hbar_part_is_the_fundamental_class((shape, ts) in shape_and_tuples(grassmannians(), 1)) {
        let id = Permutation::identity(shape.n());
        let h = class_tuple(Theory::H, &shape, &ts[0], &id).unwrap();
        let f = class_tuple(Theory::Fund, &shape, &ts[0], &id).unwrap();
        let hv: Vec<MultiPoly> = h.values.iter().map(|v| v.as_poly().unwrap().clone()).collect();
        let fv: Vec<MultiPoly> = f.values.iter().map(|v| v.as_poly().unwrap().clone()).collect();
        let (top, coeffs) = top_hbar(&hv);
        prop_assert_eq!(coeffs, fv);
        prop_assert_eq!(top as usize, dim_cell(&ts[0]));
    }

    #[test]
    fn top_hbar_part_of_structure_constants((shape, ts) in shape_and_tuples(grassmannians(), 3)) {
        let (i, j, k) = (&ts[0], &ts[1], &ts[2]);
        let h = lr_coefficient(Theory::H, &shape, i, j, k).unwrap();
        let f = lr_coefficient(Theory::Fund, &shape, i, j, k).unwrap();
        let d = dim_cell(i) as i32 + dim_cell(j) as i32 - dim_cell(k) as i32;
        if d >= 0 {
            prop_assert_eq!(h.coefficient_of(VariableId::Hbar, d), f);
        } else {
            prop_assert!(f.is_zero());
        }
    }

    #[test]
    fn grassmannian_partitions_round_trip(m in 1usize..4, extra in 1usize..4, seed in any::<u64>()) {
        let n = m + extra;
        let shape = FlagShape::grassmannian(m, n).unwrap();
        let tuples = enumerate_tuples(&shape);
        let t = &tuples[(seed % tuples.len() as u64) as usize];
        let p = subset_to_partition(t.part(1), m, n).unwrap();
        prop_assert_eq!(partition_to_subset(&p, m, n).unwrap(), t.part(1).to_vec());
        prop_assert_eq!(p.size(), shape.dim() - dim_cell(t));
        prop_assert_eq!(tuples.len() as u128, shape.multinomial());
    }

    #[test]
    fn theta_is_odd_and_truncation_stable(re in -0.5f64..0.5, im in -3.0f64..3.0, q in 0.02f64..0.3) {
        let ctx = EllipticContext::new(C64::new(q, 0.0), 40, 1e-9, 0).unwrap().with_log(VariableId::Z(1), C64::new(re, im));
        let x = MonomialArg::var(VariableId::Z(1));
        let a = theta(&x, &ctx).unwrap();
        let b = theta(&x.inv(), &ctx).unwrap();
        prop_assert!((a + b).norm() < 1e-9 * (1.0 + a.norm()));
        let wide = ctx.with_trunc(80).unwrap();
        prop_assert!((theta(&x, &wide).unwrap() - a).norm() < 1e-9);
    }

    #[test]
    fn theta_derivative_matches_a_difference_quotient(q in 0.0f64..0.3) {
        let ctx = EllipticContext::new(C64::new(q, 0.0), 40, 1e-9, 0).unwrap();
        // fourth-order central difference
        let u = 1e-2;
        let f = |t: f64| ctx.theta_log(C64::new(t, 0.0));
        let fd = (f(-2.0 * u) - f(2.0 * u) + (f(u) - f(-u)) * 8.0) / (12.0 * u);
        let exact = theta_prime_1(&ctx);
        // the O(u⁴) error term is bounded by u⁴ times the fifth derivative
        prop_assert!((fd - exact).norm() < 1e-7, "{} vs {}", fd, exact);
        // ∏(1 − q^s)² directly
        let prod: f64 = (1..=40).map(|s| (1.0 - q.powi(s)).powi(2)).product();
        prop_assert!((exact - C64::new(prod, 0.0)).norm() < 1e-12);
    }
}
