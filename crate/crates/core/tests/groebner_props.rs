use std::sync::Arc;

use neron_core::ideals::is_groebner_basis;
use neron_core::poly::parse_poly;
use neron_core::{Fp, Ideal, Monomial, MonomialOrder, Poly, PolyRing, Rational};
use proptest::prelude::*;

const P: u64 = 31;

fn ring() -> Arc<PolyRing<Fp>> {
    PolyRing::new(&["x", "y", "z"], P)
}

prop_compose! {
    fn small_poly()(terms in prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), 1i64..31), 1..4)) -> Poly<Fp> {
        let terms = terms
            .into_iter()
            .map(|((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), Fp::new(k, P)))
            .collect();
        Poly::from_terms(&ring(), terms)
    }
}

fn orders() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Grevlex), Just(MonomialOrder::Lex)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Every S-polynomial of the cached basis reduces to zero.
    #[test]
    fn buchberger_criterion(gens in prop::collection::vec(small_poly(), 1..4), order in orders()) {
        let i = Ideal::new(&ring(), gens).with_order(order);
        let gb = i.groebner_basis().unwrap().to_vec();
        prop_assert!(is_groebner_basis(&gb, order));
        prop_assert!(i.basis_is_groebner().unwrap());
    }

    #[test]
    fn generators_reduce_to_zero(gens in prop::collection::vec(small_poly(), 1..4)) {
        let i = Ideal::new(&ring(), gens.clone());
        for g in &gens {
            prop_assert!(i.normal_form(g).unwrap().is_zero());
        }
    }

    #[test]
    fn membership_certificates(
        gens in prop::collection::vec(small_poly(), 1..3),
        cofs in prop::collection::vec(small_poly(), 3),
    ) {
        let i = Ideal::new(&ring(), gens.clone());
        let f = gens
            .iter()
            .zip(&cofs)
            .fold(Poly::zero(&ring()), |acc, (g, c)| acc.add(&g.mul(c)));
        let cert = i.certify(&f).unwrap().expect("combination lies in the ideal");
        prop_assert_eq!(cert.evaluate(&gens), f);
    }

    #[test]
    fn saturation_is_idempotent(gens in prop::collection::vec(small_poly(), 1..3), h in small_poly()) {
        let i = Ideal::new(&ring(), gens);
        let s1 = i.saturate(&h).unwrap();
        let s2 = s1.saturate(&h).unwrap();
        prop_assert!(s1.same_as(&s2).unwrap());
        prop_assert!(s1.contains_ideal(&i).unwrap());
    }
}

#[test]
fn saturation_removes_embedded_component() {
    let r: Arc<PolyRing<Rational>> = PolyRing::new(&["x", "y"], ());
    let p = |s: &str| parse_poly(s, &r, &[]).unwrap();
    // (x^2, xy) = (x) ∩ (x^2, y); saturating by y leaves (x)
    let i = Ideal::new(&r, vec![p("x^2"), p("x*y")]);
    let s = i.saturate(&p("y")).unwrap();
    assert!(s.same_as(&Ideal::new(&r, vec![p("x")])).unwrap());
    assert!(s.saturate(&p("y")).unwrap().same_as(&s).unwrap());
}
