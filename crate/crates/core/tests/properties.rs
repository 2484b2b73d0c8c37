//! Property tests for the algebra invariants: word normal forms, ring
//! homomorphism of evaluation, derivative linearity and the Leibniz rule,
//! resultants vanishing on common factors, and canonical-form equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sl2trace::field::{Field, PrimeField};
use sl2trace::poly::{Poly, Var};
use sl2trace::word::{parse_word, Word};
use std::collections::BTreeMap;

fn letter_strategy() -> impl Strategy<Value = (u32, i32)> {
    (1u32..=30, prop_oneof![-3i32..=-1, 1i32..=3])
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(letter_strategy(), 0..10).prop_map(Word::from_pairs)
}

fn var_pool() -> Vec<Var> {
    vec![Var::single(1), Var::single(2), Var::pair(1, 2).unwrap()]
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..3, 3),
            -4i64..=4,
        ),
        0..5,
    )
    .prop_map(|terms| {
        let vars = var_pool();
        let mut acc = Poly::zero();
        for (exps, coeff) in terms {
            let mut term = Poly::constant_i64(coeff);
            for (v, e) in vars.iter().zip(&exps) {
                term = term.mul(&Poly::var(*v).pow(*e));
            }
            acc = acc.add(&term);
        }
        acc
    })
}

fn assignment_strategy() -> impl Strategy<Value = BTreeMap<Var, u64>> {
    prop::collection::vec(0u64..101, 3).prop_map(|vals| {
        var_pool().into_iter().zip(vals).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_then_parse_is_identity(w in word_strategy()) {
        // the grammar has no token for the identity word, which renders as "1"
        prop_assume!(!w.is_empty());
        let rendered = w.to_string();
        let parsed = parse_word(&rendered, 30).unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn concat_is_associative_with_unit(
        a in word_strategy(),
        b in word_strategy(),
        c in word_strategy(),
    ) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert_eq!(a.concat(&Word::identity()), a.clone());
        prop_assert_eq!(Word::identity().concat(&a), a);
    }

    #[test]
    fn inversion_is_an_involution(w in word_strategy()) {
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn cyclic_normal_form_is_idempotent_and_orbit_constant(
        w in word_strategy(),
        rotation in 0usize..8,
    ) {
        let nf = w.cyclic_normal_form();
        prop_assert_eq!(nf.cyclic_normal_form(), nf.clone());
        prop_assert_eq!(w.inverse().cyclic_normal_form(), nf.clone());
        let atoms = w.atoms();
        if !atoms.is_empty() {
            let k = rotation % atoms.len();
            let rotated = Word::from_pairs(
                atoms[k..].iter().chain(&atoms[..k]).map(|l| (l.gen, l.exp)),
            );
            // rotation preserves the form of the cyclically reduced core
            prop_assert_eq!(rotated.cyclic_normal_form().cyclic_normal_form(), rotated.cyclic_normal_form());
            let conj = w.concat(&w.inverse());
            prop_assert!(conj.is_empty());
        }
    }

    #[test]
    fn conjugation_preserves_normal_form(w in word_strategy(), g in word_strategy()) {
        let conj = g.concat(&w).concat(&g.inverse());
        prop_assert_eq!(conj.cyclic_normal_form(), w.cyclic_normal_form());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        p in poly_strategy(),
        q in poly_strategy(),
        asg in assignment_strategy(),
    ) {
        let f = PrimeField::new(101).unwrap();
        let pe = p.evaluate(&f, &asg).unwrap();
        let qe = q.evaluate(&f, &asg).unwrap();
        prop_assert_eq!(p.add(&q).evaluate(&f, &asg).unwrap(), f.add(&pe, &qe));
        prop_assert_eq!(p.mul(&q).evaluate(&f, &asg).unwrap(), f.mul(&pe, &qe));
    }

    #[test]
    fn derivative_is_linear_and_leibniz(p in poly_strategy(), q in poly_strategy()) {
        let v = Var::single(1);
        let sum_rule = p.add(&q).partial_derivative(&v);
        prop_assert_eq!(sum_rule, p.partial_derivative(&v).add(&q.partial_derivative(&v)));
        let product_rule = p.mul(&q).partial_derivative(&v);
        let leibniz = p
            .partial_derivative(&v)
            .mul(&q)
            .add(&p.mul(&q.partial_derivative(&v)));
        prop_assert_eq!(product_rule, leibniz);
    }

    #[test]
    fn resultant_vanishes_on_common_factor(p in poly_strategy(), q in poly_strategy()) {
        let v = Var::single(1);
        // share the factor (v - t[2])
        let common = Poly::var(v).sub(&Poly::var(Var::single(2)));
        let lhs = p.mul(&common);
        let rhs = q.mul(&common);
        if lhs.degree_in(&v) > 0 && rhs.degree_in(&v) > 0 {
            let res = lhs.resultant(&rhs, &v).unwrap();
            prop_assert!(res.is_zero());
        }
    }

    #[test]
    fn canonical_form_matches_random_evaluation(
        p in poly_strategy(),
        q in poly_strategy(),
        r in poly_strategy(),
        asg in assignment_strategy(),
    ) {
        // distributivity produces structurally identical polynomials
        let lhs = p.add(&q).mul(&r);
        let rhs = p.mul(&r).add(&q.mul(&r));
        prop_assert_eq!(&lhs, &rhs);
        // and structural equality implies equal random evaluations
        let f = PrimeField::new(101).unwrap();
        prop_assert_eq!(lhs.evaluate(&f, &asg).unwrap(), rhs.evaluate(&f, &asg).unwrap());
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        p in poly_strategy(),
        q in poly_strategy(),
        asg in assignment_strategy(),
    ) {
        let f = PrimeField::new(101).unwrap();
        let v = Var::single(1);
        let substituted = p.substitute(&v, &q).evaluate(&f, &asg).unwrap();
        let mut asg2 = asg.clone();
        asg2.insert(v, q.evaluate(&f, &asg).unwrap());
        prop_assert_eq!(substituted, p.evaluate(&f, &asg2).unwrap());
    }

    #[test]
    fn json_roundtrip(p in poly_strategy()) {
        prop_assert_eq!(Poly::from_json(&p.to_json()).unwrap(), p);
    }
}

#[test]
fn rational_coefficients_survive_json() {
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    let p = Poly::var(Var::single(1)).scale(&half);
    assert_eq!(Poly::from_json(&p.to_json()).unwrap(), p);
}
