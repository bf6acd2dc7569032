//! Polynomial ideals over a field: Gröbner bases, membership, radical
//! membership and saturation.

mod groebner;

use std::sync::{Arc, OnceLock};

pub use groebner::GroebnerConfig;
use groebner::{buchberger, reduce, GPoly};

use crate::arith::Field;
use crate::error::GroebnerError;
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing};

#[derive(Debug)]
struct Cached<F: Field> {
    basis: Vec<GPoly<F>>,
    polys: Vec<Poly<F>>,
}

/// An ideal given by generators. The reduced Gröbner basis is computed on
/// first use and cached.
#[derive(Debug)]
pub struct Ideal<F: Field> {
    ring: Arc<PolyRing<F>>,
    generators: Vec<Poly<F>>,
    order: MonomialOrder,
    config: GroebnerConfig,
    cache: OnceLock<Result<Cached<F>, GroebnerError>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(Ok(c)) = self.cache.get() {
            let _ = cache.set(Ok(Cached {
                basis: c.basis.clone(),
                polys: c.polys.clone(),
            }));
        }
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            order: self.order,
            config: self.config,
            cache,
        }
    }
}

/// Expression of a polynomial as a combination of the generators.
#[derive(Clone, Debug)]
pub struct Certificate<F: Field> {
    pub cofactors: Vec<Poly<F>>,
}

impl<F: Field> Certificate<F> {
    /// Recomputes `sum cofactors[i] * generators[i]`.
    pub fn evaluate(&self, generators: &[Poly<F>]) -> Poly<F> {
        let mut acc = Poly::zero(generators[0].ring());
        for (c, g) in self.cofactors.iter().zip(generators) {
            acc = acc.add(&c.mul(g));
        }
        acc
    }
}

fn to_gpoly<F: Field>(p: &Poly<F>, order: MonomialOrder) -> GPoly<F> {
    if order == MonomialOrder::Grevlex {
        GPoly {
            terms: p.terms().to_vec(),
        }
    } else {
        GPoly::from_terms(p.terms().to_vec(), order)
    }
}

fn from_gpoly<F: Field>(ring: &Arc<PolyRing<F>>, g: &GPoly<F>) -> Poly<F> {
    Poly::from_terms(ring, g.terms.clone())
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &Arc<PolyRing<F>>, generators: Vec<Poly<F>>) -> Self {
        let generators = generators
            .into_iter()
            .inspect(|g| {
                assert!(crate::poly::same_ring(g.ring(), ring), "generator from another ring");
            })
            .filter(|g| !g.is_zero())
            .collect();
        Ideal {
            ring: ring.clone(),
            generators,
            order: MonomialOrder::Grevlex,
            config: GroebnerConfig::default(),
            cache: OnceLock::new(),
        }
    }

    pub fn zero(ring: &Arc<PolyRing<F>>) -> Self {
        Ideal::new(ring, Vec::new())
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        if order != self.order {
            self.order = order;
            self.cache = OnceLock::new();
        }
        self
    }

    pub fn with_config(mut self, config: GroebnerConfig) -> Self {
        if config != self.config {
            self.config = config;
            self.cache = OnceLock::new();
        }
        self
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly<F>] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn config(&self) -> GroebnerConfig {
        self.config
    }

    /// The ideal generated by these generators and `extra`.
    pub fn extended(&self, extra: &[Poly<F>]) -> Self {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
            .with_order(self.order)
            .with_config(self.config)
    }

    fn cached(&self) -> Result<&Cached<F>, GroebnerError> {
        let r = self.cache.get_or_init(|| {
            let gens: Vec<GPoly<F>> = self.generators.iter().map(|g| to_gpoly(g, self.order)).collect();
            let b = buchberger(&gens, self.order, self.config, false, self.ring.nvars())?;
            let basis: Vec<GPoly<F>> = b.elems.into_iter().map(|e| e.poly).collect();
            let polys = basis.iter().map(|g| from_gpoly(&self.ring, g)).collect();
            Ok(Cached { basis, polys })
        });
        r.as_ref().map_err(|e| e.clone())
    }

    /// Reduced Gröbner basis, monic and sorted by increasing leading
    /// monomial.
    pub fn groebner_basis(&self) -> Result<&[Poly<F>], GroebnerError> {
        Ok(&self.cached()?.polys)
    }

    /// Leading monomials of the reduced basis in the ideal's order.
    pub fn leading_monomials(&self) -> Result<Vec<Monomial>, GroebnerError> {
        Ok(self.cached()?.basis.iter().map(|g| g.lm().clone()).collect())
    }

    /// Canonical remainder of `f` modulo the ideal.
    pub fn normal_form(&self, f: &Poly<F>) -> Result<Poly<F>, GroebnerError> {
        let c = self.cached()?;
        let divs: Vec<&GPoly<F>> = c.basis.iter().collect();
        let r = reduce(&to_gpoly(f, self.order), &divs, self.order, false);
        Ok(from_gpoly(&self.ring, &r.remainder))
    }

    pub fn contains(&self, f: &Poly<F>) -> Result<bool, GroebnerError> {
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool, GroebnerError> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Ideal<F>) -> Result<bool, GroebnerError> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool, GroebnerError> {
        let c = self.cached()?;
        Ok(c.basis.iter().any(|g| g.lm().is_one()))
    }

    /// Writes `f` as a combination of the generators, or `None` if `f` is
    /// not in the ideal.
    pub fn certify(&self, f: &Poly<F>) -> Result<Option<Certificate<F>>, GroebnerError> {
        let gens: Vec<GPoly<F>> = self.generators.iter().map(|g| to_gpoly(g, self.order)).collect();
        let b = buchberger(&gens, self.order, self.config, true, self.ring.nvars())?;
        let divs: Vec<&GPoly<F>> = b.elems.iter().map(|e| &e.poly).collect();
        let r = reduce(&to_gpoly(f, self.order), &divs, self.order, true);
        if !r.remainder.is_zero() {
            return Ok(None);
        }
        let mut cof = vec![Poly::zero(&self.ring); self.generators.len()];
        for (q, e) in r.quotients.unwrap().iter().zip(b.elems.iter()) {
            if q.is_zero() {
                continue;
            }
            let q = from_gpoly(&self.ring, q);
            for (slot, c) in cof.iter_mut().zip(e.cofactors.as_ref().unwrap()) {
                *slot = slot.add(&q.mul(&from_gpoly(&self.ring, c)));
            }
        }
        Ok(Some(Certificate { cofactors: cof }))
    }

    /// `f` lies in the radical iff `I + (z f - 1)` is the unit ideal.
    pub fn radical_contains(&self, f: &Poly<F>) -> Result<bool, GroebnerError> {
        if f.is_zero() {
            return Ok(true);
        }
        let z = self.ring.fresh_var("z");
        let big = self.ring.extend(&[z]);
        let n = self.ring.nvars();
        let map: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Poly<F>> = self.generators.iter().map(|g| g.embed(&big, &map)).collect();
        let zf = Poly::var(&big, n).mul(&f.embed(&big, &map));
        gens.push(zf.sub(&Poly::one(&big)));
        Ideal::new(&big, gens).with_config(self.config).is_unit()
    }

    fn with_tag(&self, h: &Poly<F>) -> (Arc<PolyRing<F>>, Vec<Poly<F>>, Poly<F>) {
        let z = self.ring.fresh_var("z");
        let mut names = vec![z];
        names.extend(self.ring.vars().iter().cloned());
        let big = self.ring.with_vars(&names);
        let n = self.ring.nvars();
        let map: Vec<usize> = (1..=n).collect();
        let gens = self.generators.iter().map(|g| g.embed(&big, &map)).collect();
        (big.clone(), gens, h.embed(&big, &map))
    }

    /// The saturation `I : h^∞`, computed by eliminating `z` from
    /// `I + (z h - 1)`.
    pub fn saturate(&self, h: &Poly<F>) -> Result<Ideal<F>, GroebnerError> {
        let (big, mut gens, hb) = self.with_tag(h);
        gens.push(Poly::var(&big, 0).mul(&hb).sub(&Poly::one(&big)));
        let elim = Ideal::new(&big, gens)
            .with_order(MonomialOrder::Elimination(1))
            .with_config(self.config);
        let n = self.ring.nvars();
        let back: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
        let kept: Vec<Poly<F>> = elim
            .groebner_basis()?
            .iter()
            .filter_map(|g| g.restrict(&self.ring, &back))
            .collect();
        Ok(Ideal::new(&self.ring, kept)
            .with_order(self.order)
            .with_config(self.config))
    }

    /// Membership of `f` in `I : h^∞` without computing the saturation:
    /// tests `f` against `I + (1 - z h)` in the enlarged ring.
    pub fn saturation_contains(&self, h: &Poly<F>, f: &Poly<F>) -> Result<bool, GroebnerError> {
        let (big, mut gens, hb) = self.with_tag(h);
        gens.push(Poly::one(&big).sub(&Poly::var(&big, 0).mul(&hb)));
        let n = self.ring.nvars();
        let map: Vec<usize> = (1..=n).collect();
        Ideal::new(&big, gens)
            .with_config(self.config)
            .contains(&f.embed(&big, &map))
    }

    /// True if every S-polynomial of the cached basis reduces to zero.
    pub fn basis_is_groebner(&self) -> Result<bool, GroebnerError> {
        let c = self.cached()?;
        Ok(groebner::satisfies_buchberger_criterion(&c.basis, self.order))
    }
}

/// Checks the Buchberger criterion for an arbitrary list of polynomials.
pub fn is_groebner_basis<F: Field>(polys: &[Poly<F>], order: MonomialOrder) -> bool {
    let g: Vec<GPoly<F>> = polys.iter().filter(|p| !p.is_zero()).map(|p| to_gpoly(p, order)).collect();
    groebner::satisfies_buchberger_criterion(&g, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp, Rational};
    use crate::poly::parse_poly;

    fn q(vars: &[&str]) -> Arc<PolyRing<Rational>> {
        PolyRing::new(vars, ())
    }

    fn ideal(r: &Arc<PolyRing<Rational>>, gens: &[&str]) -> Ideal<Rational> {
        Ideal::new(r, gens.iter().map(|s| parse_poly(s, r, &[]).unwrap()).collect())
    }

    #[test]
    fn textbook_basis() {
        let r = q(&["x", "y"]);
        let i = ideal(&r, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]);
        let gb: Vec<String> = i.groebner_basis().unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(gb, vec!["y^2 - 1/2*x", "x*y", "x^2"]);
        assert!(i.basis_is_groebner().unwrap());
    }

    #[test]
    fn lex_elimination() {
        let r = q(&["x", "y"]);
        let i = ideal(&r, &["x^2 + y^2 - 1", "x - y"]).with_order(MonomialOrder::Lex);
        let gb = i.groebner_basis().unwrap();
        assert_eq!(gb.last().unwrap().to_string(), "x - y");
        assert_eq!(gb[0].to_string(), "y^2 - 1/2");
    }

    #[test]
    fn membership_and_certificate() {
        let r = q(&["x", "y"]);
        let i = ideal(&r, &["x^2 - y", "y^2 - x"]);
        let f = parse_poly("x^4 - x", &r, &[]).unwrap();
        assert!(i.contains(&f).unwrap());
        let cert = i.certify(&f).unwrap().unwrap();
        assert_eq!(cert.evaluate(i.generators()), f);
        assert!(i.certify(&Poly::var(&r, 0)).unwrap().is_none());
    }

    #[test]
    fn radical() {
        let r = q(&["x", "y"]);
        let i = ideal(&r, &["x^3", "y^2"]);
        let f = parse_poly("x + y", &r, &[]).unwrap();
        assert!(!i.contains(&f).unwrap());
        assert!(i.radical_contains(&f).unwrap());
        assert!(!i.radical_contains(&Poly::one(&r).add(&f)).unwrap());
    }

    #[test]
    fn saturation() {
        let r = q(&["x", "y"]);
        let i = ideal(&r, &["x*y", "x^2"]);
        let x = Poly::var(&r, 0);
        let s = i.saturate(&x).unwrap();
        assert!(s.is_unit().unwrap());
        let y = Poly::var(&r, 1);
        let s = i.saturate(&y).unwrap();
        assert!(s.contains(&x).unwrap());
        assert!(i.saturation_contains(&y, &x).unwrap());
        assert!(!i.contains(&x).unwrap());
    }

    #[test]
    fn finite_field() {
        let r: Arc<PolyRing<Fp>> = PolyRing::new(&["x"], 5);
        let i = Ideal::new(&r, vec![parse_poly("x^5 - x", &r, &[]).unwrap(), parse_poly("x^2 + 1", &r, &[]).unwrap()]);
        assert_eq!(i.groebner_basis().unwrap()[0].to_string(), "x^2 + 1");
    }

    #[test]
    fn resource_cap() {
        let r = q(&["x", "y"]);
        let i = ideal(&r, &["x^3 - y", "y^3 - x"]).with_config(GroebnerConfig {
            max_basis: 500,
            max_degree: 2,
        });
        assert!(matches!(i.groebner_basis(), Err(GroebnerError::ResourceCap { .. })));
    }
}
