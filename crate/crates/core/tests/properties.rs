use std::sync::Arc;

use proptest::prelude::*;

use defquant::expr::{parse_expression, parse_polynomial, Expr};
use defquant::liealg::{HeisenbergElement, LieAlgebra};
use defquant::orbit::harmonic_decompose;
use defquant::poly::{Monomial, PolyRing, Polynomial};
use defquant::scalar::{q, Rational};
use defquant::star::{MoyalR2n, StarProduct, WeylStar};
use defquant::uea::{EnvelopingElement, RewriteStrategy, Word};
use defquant::weyl::WeylContext;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Polynomials in the first three coordinates and `h`, on `ring`.
fn poly_in(ring: Arc<PolyRing>, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ring.nvars();
    let h = ring.h();
    prop::collection::vec((prop::collection::vec(0..=max_exp, 3), 0..=1u32, rational()), 0..=max_terms).prop_map(
        move |terms| {
            let mut p = Polynomial::zero(&ring);
            for (e, he, c) in terms {
                let mut m = Monomial::one(n);
                for (i, x) in e.into_iter().enumerate() {
                    m.set_exp(i, x);
                }
                m.set_exp(h, he);
                p.add_term(m, c);
            }
            p
        },
    )
}

fn su2() -> &'static LieAlgebra {
    static ALG: std::sync::OnceLock<LieAlgebra> = std::sync::OnceLock::new();
    ALG.get_or_init(LieAlgebra::su2)
}

fn su2_ctx() -> &'static Arc<WeylContext> {
    static CTX: std::sync::OnceLock<Arc<WeylContext>> = std::sync::OnceLock::new();
    CTX.get_or_init(|| Arc::new(WeylContext::new(LieAlgebra::su2())))
}

fn su2_poly() -> impl Strategy<Value = Polynomial> {
    poly_in(su2_ctx().ring().clone(), 2, 4)
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..3, 0..=4).prop_map(|v| Word::from_slice(&v))
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..20, 1i64..5).prop_map(|(n, d)| Expr::Num(q(n, d))),
        prop::sample::select(vec!["x", "y", "z", "h"]).prop_map(|v| Expr::Var(v.to_string())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in su2_poly(), g in su2_poly(), k in su2_poly()) {
        prop_assert_eq!(&(&f + &g) + &k, &f + &(&g + &k));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &k, &f * &(&g * &k));
        prop_assert_eq!(&f * &(&g + &k), &(&f * &g) + &(&f * &k));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn kirillov_is_a_poisson_bracket(f in su2_poly(), g in su2_poly(), k in su2_poly()) {
        let alg = su2();
        let b = |a: &Polynomial, c: &Polynomial| alg.kirillov_bracket(a, c);
        prop_assert_eq!(b(&f, &(&g * &k)), &(&b(&f, &g) * &k) + &(&g * &b(&f, &k)));
        prop_assert_eq!(b(&f, &g), -b(&g, &f));
        let jacobi = &(&b(&f, &b(&g, &k)) + &b(&g, &b(&k, &f))) + &b(&k, &b(&f, &g));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn truncation_is_a_ring_map_mod_h(f in su2_poly(), g in su2_poly(), k in 0u32..3) {
        prop_assert_eq!((&f + &g).truncate_h(k), &f.truncate_h(k) + &g.truncate_h(k));
        prop_assert_eq!((&f * &g).truncate_h(k), (&f.truncate_h(k) * &g.truncate_h(k)).truncate_h(k));
    }

    #[test]
    fn heisenberg_coadjoint_action(a in rational(), b in rational(), c in rational(),
                                   a2 in rational(), b2 in rational(), c2 in rational()) {
        let g1 = HeisenbergElement::new(a, b, c);
        let g2 = HeisenbergElement::new(a2, b2, c2);
        prop_assert_eq!(g1.compose(&g2).coadjoint(), &g1.coadjoint() * &g2.coadjoint());
        prop_assert_eq!(g1.compose(&g1.inverse()), HeisenbergElement::identity());
        let m = g1.coadjoint();
        // The last row fixes e', so the planes e' = const are preserved.
        prop_assert_eq!(m.row(2).to_vec(), vec![q(0, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn normal_form_is_strategy_independent(w in word(), c in rational()) {
        let uea = su2_ctx().uea();
        let alg = su2_ctx().algebra();
        let e = EnvelopingElement::word(alg, w, Polynomial::constant(su2_ctx().ring(), c));
        let left = uea.pbw_normalize_with(&e, RewriteStrategy::Leftmost);
        let right = uea.pbw_normalize_with(&e, RewriteStrategy::Rightmost);
        prop_assert!(left.is_normal());
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(uea.pbw_normalize(&left), left);
    }

    #[test]
    fn enveloping_product_is_associative(a in word(), b in word(), c in word()) {
        let uea = su2_ctx().uea();
        let alg = su2_ctx().algebra();
        let one = Polynomial::one(su2_ctx().ring());
        let el = |w: Word| uea.pbw_normalize(&EnvelopingElement::word(alg, w, one.clone()));
        let (a, b, c) = (el(a), el(b), el(c));
        prop_assert_eq!(uea.mul(&uea.mul(&a, &b), &c), uea.mul(&a, &uea.mul(&b, &c)));
    }

    #[test]
    fn star_s_is_associative(f in poly_in(su2_ctx().ring().clone(), 1, 3),
                             g in poly_in(su2_ctx().ring().clone(), 1, 3),
                             k in poly_in(su2_ctx().ring().clone(), 1, 3)) {
        let s = WeylStar::new(su2_ctx().clone());
        let left = s.star(&s.star(&f, &g).unwrap(), &k).unwrap();
        let right = s.star(&f, &s.star(&g, &k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(s.star(&f, &Polynomial::one(f.ring())).unwrap(), f);
    }

    #[test]
    fn moyal_plane_is_associative(a in rational(), b in rational(), e1 in 0u32..3, e2 in 0u32..3, e3 in 0u32..3) {
        let s = MoyalR2n::plane(None);
        let ring = s.ring().clone();
        let qv = Polynomial::var(&ring, 0);
        let pv = Polynomial::var(&ring, 1);
        let f = &qv.pow(e1).scale(&a) + &pv;
        let g = &(&qv * &pv).pow(e2) + &Polynomial::constant(&ring, b);
        let k = pv.pow(e3);
        let left = s.star(&s.star(&f, &g).unwrap(), &k).unwrap();
        let right = s.star(&f, &s.star(&g, &k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn weyl_is_linear(f in su2_poly(), g in su2_poly(), a in rational(), b in rational()) {
        let ctx = su2_ctx();
        let lhs = ctx.weyl_sym(&(&f.scale(&a) + &g.scale(&b)));
        let rhs = ctx.weyl_sym(&f).scale_rational(&a).add(&ctx.weyl_sym(&g).scale_rational(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weyl_is_triangular(alpha in prop::collection::vec(0u32..3, 3)) {
        let ctx = su2_ctx();
        let w = ctx.weyl_monomial(&alpha);
        let top = Word::pbw(&alpha);
        let one = Polynomial::one(ctx.ring());
        prop_assert_eq!(w.terms().get(&top), Some(&one));
        for (word, _) in w.terms() {
            prop_assert!(word == &top || word.len() < top.len());
        }
    }

    #[test]
    fn weyl_round_trip(f in su2_poly()) {
        let ctx = su2_ctx();
        prop_assert_eq!(ctx.weyl_inv(&ctx.weyl_sym(&f)), f);
    }

    #[test]
    fn expression_print_parse(e in expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_expression(&printed).unwrap(), e);
    }

    #[test]
    fn polynomial_print_parse(f in su2_poly()) {
        let back = parse_polynomial(&f.to_string(), f.ring(), &[]).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn harmonic_decomposition_round_trip(f in poly_in(su2_ctx().ring().clone(), 3, 4)) {
        let ring = f.ring();
        let mut p = Polynomial::zero(ring);
        for i in 0..3 {
            p = &p + &Polynomial::var(ring, i).pow(2);
        }
        let mut sum = Polynomial::zero(ring);
        for (k, fk) in harmonic_decompose(&f).unwrap() {
            prop_assert!(fk.laplacian().is_zero());
            sum = &sum + &(&p.pow(k) * &fk);
        }
        prop_assert_eq!(sum, f);
    }
}
