use std::sync::Arc;

use neron_core::birlaw::chord_law;
use neron_core::{PolyRing, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn chord_law_on_congruent_number_curve() {
    let ring: Arc<PolyRing<Rational>> = PolyRing::new(&["x", "y"], ());
    let law = chord_law(&ring, [q(0), q(0), q(0), q(-1), q(0)], vec![]).unwrap();
    let g = law.check_graph_consistency().unwrap();
    assert!(g.passed, "{g}");
    let a = law.check_associativity().unwrap();
    assert!(a.passed, "{a}");
}
