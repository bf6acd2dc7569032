use std::sync::Arc;

use neron_core::birlaw::{additive_law, chord_law, shifted_multiplicative_law, StrictLaw};
use neron_core::poly::{parse_poly, parse_ratfunc};
use neron_core::smoothening::{smoothen, DvrModel, Section};
use neron_core::volume::{check_invariance, normalize, ord_along, Component, ComponentOrder, VolumeForm};
use neron_core::{DvrDescriptor, DvrElem, Field, PolyRing, RatFunc, Rational, Ring};

fn ring(p: u64) -> Arc<PolyRing<DvrElem>> {
    PolyRing::new(&["x", "y"], DvrDescriptor::integers(p).unwrap())
}

fn consts(r: &Arc<PolyRing<DvrElem>>) -> Vec<(String, DvrElem)> {
    vec![("p".to_string(), DvrElem::uniformizer(*r.ctx()))]
}

fn model(r: &Arc<PolyRing<DvrElem>>, eq: &str) -> DvrModel {
    DvrModel::new("A", r, vec![parse_poly(eq, r, &consts(r)).unwrap()]).unwrap()
}

/// Charts from the elliptic examples with the Weierstrass form pulled back.
fn corpus() -> Vec<(DvrModel, VolumeForm)> {
    let mut out = Vec::new();
    for (p, eq, sec) in [
        (5u64, "y^2 - x^3 - p^2", (0i64, 5i64)),
        (7, "y^2 - x^3 - p^4", (0, 49)),
        (5, "y^2 - x^3 - x^2 - p^2", (0, 5)),
        (7, "y^2 - x^3 + x", (0, 0)),
    ] {
        let r = ring(p);
        let m = model(&r, eq);
        let zero = DvrElem::zero(r.ctx());
        let w = VolumeForm::weierstrass(&r, &zero, &zero);
        let s = Section::new(&m, vec![DvrElem::from_i64(r.ctx(), sec.0), DvrElem::from_i64(r.ctx(), sec.1)]).unwrap();
        let sm = smoothen(&m, &[s]).unwrap();
        let mut forms = vec![Some(w)];
        for node in &sm.charts[1..] {
            let parent = forms[node.parent.unwrap()].clone();
            forms.push(parent.and_then(|f| f.pullback(node).ok()));
        }
        for (node, f) in sm.charts.iter().zip(forms) {
            if let Some(f) = f {
                out.push((node.model.clone(), f));
            }
        }
    }
    out
}

#[test]
fn order_shifts_under_scaling() {
    for (m, w) in corpus() {
        let base = ord_along(&m, &Component::Whole, &w).unwrap();
        for k in -2..=2 {
            assert_eq!(ord_along(&m, &Component::Whole, &w.scale_pi(k)).unwrap(), base + k, "{m:?}");
        }
    }
}

#[test]
fn order_agrees_between_dx_and_dy() {
    for (m, w) in corpus() {
        let f = &m.equations()[0];
        // f_x dx + f_y dy = 0 on the chart
        let c = w.coefficient().clone();
        let fx = RatFunc::from(f.partial_derivative(0));
        let fy = RatFunc::from(f.partial_derivative(1));
        let dy = VolumeForm::new(c.mul(&fy).div(&fx).unwrap().neg(), 1);
        assert_eq!(
            ord_along(&m, &Component::Whole, &w).unwrap(),
            ord_along(&m, &Component::Whole, &dy).unwrap(),
            "{w} on {}",
            m.equations()[0]
        );
    }
}

#[test]
fn normalization_minimum_is_zero() {
    let samples: [&[i64]; 4] = [&[2, 3], &[0], &[-1, 0], &[4, -3, 7]];
    for s in samples {
        let orders: Vec<ComponentOrder> = s
            .iter()
            .map(|&o| ComponentOrder {
                chart: "A".into(),
                component: "(pi)".into(),
                order: o,
            })
            .collect();
        let (rho, n) = normalize(&orders).unwrap();
        assert_eq!(rho, *s.iter().min().unwrap());
        assert_eq!(n.iter().map(|o| o.order).min(), Some(0));
    }
}

fn invariant_and_twisted<F: Field>(law: &StrictLaw<F>, c: &str) {
    let r = law.variety().ring();
    let w = parse_ratfunc(c, r, &[]).unwrap();
    assert!(check_invariance(law, &w, 0).unwrap().passed, "{c}");
    let u = RatFunc::var(r, 0);
    assert!(!check_invariance(law, &w.mul(&u), 0).unwrap().passed, "x*({c})");
}

#[test]
fn invariant_forms_of_the_corpus_laws() {
    invariant_and_twisted(&shifted_multiplicative_law::<Rational>(&(), vec![]), "1/(1 + x)");
    invariant_and_twisted(&additive_law::<Rational>(&(), vec![]), "1");
    let r: Arc<PolyRing<Rational>> = PolyRing::new(&["x", "y"], ());
    let q = |n: i64| Rational::from_integer(n.into());
    let e = chord_law(&r, [q(0), q(0), q(0), q(-2), q(1)], vec![]).unwrap();
    invariant_and_twisted(&e, "1/(2*y)");
}
