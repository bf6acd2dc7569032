//! Affine varieties, rational maps given on principal witness opens, and
//! the dense-open equality they are compared by.

use std::sync::Arc;

use crate::arith::Field;
use crate::error::{GroebnerError, MapError};
use crate::ideals::{GroebnerConfig, Ideal};
use crate::poly::{Poly, PolyRing, RatFunc};

/// `V(I) ∖ V(unit)` in affine space.
///
/// `irreducible` is a user assertion that `I` is prime (geometrically, for
/// products). It enables the density tests and their fast paths.
#[derive(Clone, Debug)]
pub struct AffineVariety<F: Field> {
    ideal: Ideal<F>,
    unit: Poly<F>,
    irreducible: bool,
}

impl<F: Field> AffineVariety<F> {
    pub fn new(ring: &Arc<PolyRing<F>>, equations: Vec<Poly<F>>) -> Self {
        AffineVariety {
            ideal: Ideal::new(ring, equations),
            unit: Poly::one(ring),
            irreducible: false,
        }
    }

    /// The whole affine space on the ring's variables.
    pub fn affine_space(ring: &Arc<PolyRing<F>>) -> Self {
        AffineVariety::new(ring, Vec::new()).assume_irreducible()
    }

    pub fn assume_irreducible(mut self) -> Self {
        self.irreducible = true;
        self
    }

    /// Removes `{h = 0}`.
    pub fn localized(mut self, h: &Poly<F>) -> Self {
        self.unit = self.unit.mul(h);
        self
    }

    pub fn with_config(mut self, config: GroebnerConfig) -> Self {
        self.ideal = self.ideal.with_config(config);
        self
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal<F> {
        &self.ideal
    }

    pub fn equations(&self) -> &[Poly<F>] {
        self.ideal.generators()
    }

    pub fn unit(&self) -> &Poly<F> {
        &self.unit
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn dim_ambient(&self) -> usize {
        self.ring().nvars()
    }

    /// Checks that `I` is proper.
    pub fn validate(&self) -> Result<(), MapError> {
        if self.ideal.is_unit()? {
            return Err(MapError::Invalid("defining ideal is the unit ideal".into()));
        }
        Ok(())
    }

    pub fn contains_point(&self, pt: &[F]) -> bool {
        pt.len() == self.dim_ambient()
            && self.equations().iter().all(|f| f.eval(pt).is_zero())
            && !self.unit.eval(pt).is_zero()
    }

    /// Product `X^k` with the `k` copies' variables renamed as given.
    pub fn power(&self, names: &[Vec<String>]) -> Result<AffineVariety<F>, MapError> {
        let n = self.dim_ambient();
        let mut all = Vec::new();
        for slot in names {
            if slot.len() != n {
                return Err(MapError::Mismatch(format!(
                    "slot {slot:?} has {} names, variety has {n} variables",
                    slot.len()
                )));
            }
            all.extend(slot.iter().cloned());
        }
        let ring = self.ring().with_vars(&all);
        if ring.vars().iter().enumerate().any(|(i, v)| ring.var_index(v) != Some(i)) {
            return Err(MapError::Mismatch(format!("repeated variable names in {all:?}")));
        }
        let mut eqs = Vec::new();
        let mut unit = Poly::one(&ring);
        for (k, _) in names.iter().enumerate() {
            let map: Vec<usize> = (k * n..(k + 1) * n).collect();
            eqs.extend(self.equations().iter().map(|f| f.embed(&ring, &map)));
            unit = unit.mul(&self.unit.embed(&ring, &map));
        }
        Ok(AffineVariety {
            ideal: Ideal::new(&ring, eqs).with_config(self.ideal.config()),
            unit,
            irreducible: self.irreducible,
        })
    }

    /// `h ∈ √I`. Membership in `I` short-cuts; when `I` is asserted prime
    /// non-membership is final; otherwise the Rabinowitsch test decides.
    pub fn vanishes_identically(&self, h: &Poly<F>) -> Result<bool, GroebnerError> {
        if self.ideal.contains(h)? {
            return Ok(true);
        }
        if self.irreducible {
            return Ok(false);
        }
        self.ideal.radical_contains(h)
    }

    /// Density of `{h ≠ 0}` in `X`.
    pub fn is_dense_open(&self, h: &Poly<F>) -> Result<bool, MapError> {
        if !self.irreducible {
            return Err(MapError::AssertionMissing(format!("{:?}", self.ring().vars())));
        }
        Ok(!self.vanishes_identically(h)?)
    }

    /// Whether `f` vanishes on the dense open `{h ≠ 0}`, i.e. `f ∈ I : h^∞`.
    pub fn vanishes_on(&self, h: &Poly<F>, f: &Poly<F>) -> Result<bool, GroebnerError> {
        self.vanishes_off(std::slice::from_ref(h), f)
    }

    /// As [`Self::vanishes_on`] with `h` given as a list of factors, which
    /// avoids expanding the product when `X` is irreducible.
    pub fn vanishes_off(&self, hs: &[Poly<F>], f: &Poly<F>) -> Result<bool, GroebnerError> {
        if f.is_zero() || self.ideal.contains(f)? {
            return Ok(true);
        }
        if self.irreducible {
            let mut dense = true;
            for h in hs {
                if self.ideal.contains(h)? {
                    dense = false;
                    break;
                }
            }
            if dense {
                return Ok(false);
            }
        }
        let h = hs.iter().fold(Poly::one(self.ring()), |acc, h| acc.mul(h));
        self.ideal.saturation_contains(&h, f)
    }

    /// Normal form of `f` modulo `I : h^∞`, reported for failing identities.
    pub fn residue_on(&self, h: &Poly<F>, f: &Poly<F>) -> Result<Poly<F>, GroebnerError> {
        self.residue_off(std::slice::from_ref(h), f)
    }

    fn residue_off(&self, hs: &[Poly<F>], f: &Poly<F>) -> Result<Poly<F>, GroebnerError> {
        if self.irreducible {
            return self.ideal.normal_form(f);
        }
        let h = hs.iter().fold(Poly::one(self.ring()), |acc, h| acc.mul(h));
        self.ideal.saturate(&h)?.normal_form(f)
    }

    /// Equality of two rational functions on `{h ≠ 0}`.
    pub fn functions_agree(&self, h: &Poly<F>, a: &RatFunc<F>, b: &RatFunc<F>) -> Result<bool, GroebnerError> {
        self.vanishes_on(h, &cross_difference(a, b))
    }

    /// Reduces numerator and denominator modulo `I`.
    pub fn reduce(&self, f: &RatFunc<F>) -> Result<RatFunc<F>, GroebnerError> {
        if self.equations().is_empty() {
            return Ok(f.clone());
        }
        let n = self.ideal.normal_form(f.numerator())?;
        let d = self.ideal.normal_form(f.denominator())?;
        if d.is_zero() {
            return Ok(f.clone());
        }
        Ok(RatFunc::from_parts_raw(n, d).expect("nonzero denominator"))
    }
}

pub(crate) fn cross_difference<F: Field>(a: &RatFunc<F>, b: &RatFunc<F>) -> Poly<F> {
    a.numerator()
        .mul(b.denominator())
        .sub(&b.numerator().mul(a.denominator()))
}

fn lcm_free_product<F: Field>(ring: &Arc<PolyRing<F>>, polys: impl Iterator<Item = Poly<F>>) -> Poly<F> {
    // product of the distinct non-constant factors as given
    let mut seen: Vec<Poly<F>> = Vec::new();
    for p in polys {
        if p.is_constant() || seen.contains(&p) {
            continue;
        }
        seen.push(p);
    }
    seen.iter().fold(Poly::one(ring), |acc, p| acc.mul(p))
}

/// A rational map `X ⇢ Y` with a representative defined on `{h ≠ 0} ∩ X`.
#[derive(Clone, Debug)]
pub struct RationalMap<F: Field> {
    source: Arc<AffineVariety<F>>,
    target: Arc<AffineVariety<F>>,
    coords: Vec<RatFunc<F>>,
    witness: Poly<F>,
}

impl<F: Field> RationalMap<F> {
    /// Builds a map; without an explicit witness the product of the
    /// distinct coordinate denominators is used.
    pub fn new(
        source: &Arc<AffineVariety<F>>,
        target: &Arc<AffineVariety<F>>,
        coords: Vec<RatFunc<F>>,
        witness: Option<Poly<F>>,
    ) -> Result<Self, MapError> {
        if coords.len() != target.dim_ambient() {
            return Err(MapError::Mismatch(format!(
                "{} coordinates for a target with {} variables",
                coords.len(),
                target.dim_ambient()
            )));
        }
        let ring = source.ring();
        let coords = coords
            .iter()
            .map(|c| source.reduce(c))
            .collect::<Result<Vec<_>, _>>()?;
        let witness = witness
            .unwrap_or_else(|| lcm_free_product(ring, coords.iter().map(|c| c.denominator().clone())));
        Ok(RationalMap {
            source: source.clone(),
            target: target.clone(),
            coords,
            witness,
        })
    }

    pub fn identity(x: &Arc<AffineVariety<F>>) -> Self {
        let ring = x.ring();
        let coords = (0..ring.nvars()).map(|i| RatFunc::var(ring, i)).collect();
        RationalMap {
            source: x.clone(),
            target: x.clone(),
            coords,
            witness: Poly::one(ring),
        }
    }

    pub fn source(&self) -> &Arc<AffineVariety<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AffineVariety<F>> {
        &self.target
    }

    pub fn coords(&self) -> &[RatFunc<F>] {
        &self.coords
    }

    pub fn witness(&self) -> &Poly<F> {
        &self.witness
    }

    /// Product of the distinct coordinate denominators.
    pub fn denominator_product(&self) -> Poly<F> {
        lcm_free_product(
            self.source.ring(),
            self.coords.iter().map(|c| c.denominator().clone()),
        )
    }

    /// Full validity check: denominators invertible on the witness open,
    /// target equations satisfied there, and the witness open dense.
    pub fn validate(&self) -> Result<(), MapError> {
        let src = &self.source;
        for c in &self.coords {
            if c.denominator().is_constant() {
                continue;
            }
            let with_den = src.ideal().extended(&[c.denominator().clone()]);
            if !with_den.radical_contains(&self.witness)? {
                return Err(MapError::Invalid(format!(
                    "denominator {} vanishes on the witness open",
                    c.denominator()
                )));
            }
        }
        for g in self.target.equations() {
            let pulled = RatFunc::from(g.clone()).substitute(src.ring(), &self.coords);
            if !src.vanishes_on(&self.witness, pulled.numerator())? {
                return Err(MapError::Invalid(format!("target equation {g} fails")));
            }
        }
        if !src.is_dense_open(&self.witness)? {
            return Err(MapError::EmptyWitness);
        }
        Ok(())
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &RationalMap<F>) -> Result<RationalMap<F>, MapError> {
        if !crate::poly::same_ring(f.target.ring(), self.source.ring()) {
            return Err(MapError::Mismatch("target of f is not the source of g".into()));
        }
        let src = &f.source;
        let ring = src.ring();
        let coords = self
            .coords
            .iter()
            .map(|c| src.reduce(&c.substitute(ring, &f.coords)))
            .collect::<Result<Vec<_>, _>>()?;
        let pulled = RatFunc::from(self.witness.clone()).substitute(ring, &f.coords);
        let mut witness = f.witness.mul(pulled.numerator());
        if !src.equations().is_empty() {
            witness = src.ideal().normal_form(&witness)?;
        }
        if witness.is_zero() || (src.is_irreducible() && src.vanishes_identically(&witness)?) {
            return Err(MapError::EmptyWitness);
        }
        Ok(RationalMap {
            source: src.clone(),
            target: self.target.clone(),
            coords,
            witness,
        })
    }

    /// Equality as rational maps: coordinates agree on the intersection of
    /// the witness opens.
    pub fn equal_on_dense(&self, other: &RationalMap<F>) -> Result<bool, MapError> {
        Ok(self.first_disagreement(other)?.is_none())
    }

    /// Index and residue of the first coordinate on which the maps differ.
    pub fn first_disagreement(&self, other: &RationalMap<F>) -> Result<Option<(usize, Poly<F>)>, MapError> {
        if self.coords.len() != other.coords.len() {
            return Err(MapError::Mismatch("different targets".into()));
        }
        let hs = [self.witness.clone(), other.witness.clone()];
        for (i, (a, b)) in self.coords.iter().zip(&other.coords).enumerate() {
            let diff = cross_difference(a, b);
            if !self.source.vanishes_off(&hs, &diff)? {
                let res = self.source.residue_off(&hs, &diff)?;
                return Ok(Some((i, res)));
            }
        }
        Ok(None)
    }

    /// Value at a point of the witness open.
    pub fn eval(&self, pt: &[F]) -> Result<Vec<F>, MapError> {
        if self.witness.eval(pt).is_zero() {
            return Err(MapError::PointOutsideWitness);
        }
        self.coords
            .iter()
            .map(|c| c.eval(pt).ok_or(MapError::PointOutsideWitness))
            .collect()
    }

    /// Replaces the witness (no checks).
    pub fn with_witness(mut self, h: Poly<F>) -> Self {
        self.witness = h;
        self
    }

    /// Ideal of the graph in `source × target` variables; target variables
    /// that clash with source names get a `t` suffix.
    pub fn graph_ideal(&self) -> Result<Ideal<F>, MapError> {
        let sring = self.source.ring();
        let n = sring.nvars();
        let mut names: Vec<String> = sring.vars().to_vec();
        for v in self.target.ring().vars() {
            let mut name = v.clone();
            while names.contains(&name) {
                name.push('t');
            }
            names.push(name);
        }
        let ring = sring.with_vars(&names);
        let smap: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Poly<F>> = self.source.equations().iter().map(|f| f.embed(&ring, &smap)).collect();
        for (j, c) in self.coords.iter().enumerate() {
            let y = Poly::var(&ring, n + j);
            gens.push(
                y.mul(&c.denominator().embed(&ring, &smap))
                    .sub(&c.numerator().embed(&ring, &smap)),
            );
        }
        let h = self.witness.embed(&ring, &smap);
        Ok(Ideal::new(&ring, gens)
            .with_config(self.source.ideal().config())
            .saturate(&h)?)
    }
}

/// A birational self-map (or map between two varieties) given by mutually
/// inverse representatives.
#[derive(Clone, Debug)]
pub struct BirationalRep<F: Field> {
    pub forward: RationalMap<F>,
    pub backward: RationalMap<F>,
}

impl<F: Field> BirationalRep<F> {
    pub fn new(forward: RationalMap<F>, backward: RationalMap<F>) -> Self {
        BirationalRep { forward, backward }
    }

    pub fn identity(x: &Arc<AffineVariety<F>>) -> Self {
        BirationalRep {
            forward: RationalMap::identity(x),
            backward: RationalMap::identity(x),
        }
    }

    pub fn inverse(&self) -> Self {
        BirationalRep {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BirationalRep<F>) -> Result<Self, MapError> {
        Ok(BirationalRep {
            forward: self.forward.compose(&other.forward)?,
            backward: other.backward.compose(&self.backward)?,
        })
    }

    /// Both composites are the identity on dense opens.
    pub fn validate(&self) -> Result<bool, MapError> {
        let bf = self.backward.compose(&self.forward)?;
        let fb = self.forward.compose(&self.backward)?;
        Ok(bf.equal_on_dense(&RationalMap::identity(self.forward.source()))?
            && fb.equal_on_dense(&RationalMap::identity(self.backward.source()))?)
    }

    /// Enlarges each witness to the locus where the map is defined and
    /// lands where its partner is defined.
    pub fn improve(&self) -> Result<Self, MapError> {
        Ok(BirationalRep {
            forward: improved(&self.forward, &self.backward),
            backward: improved(&self.backward, &self.forward),
        })
    }
}

fn improved<F: Field>(f: &RationalMap<F>, g: &RationalMap<F>) -> RationalMap<F> {
    let ring = f.source.ring();
    let dg = RatFunc::from(g.denominator_product()).substitute(ring, &f.coords);
    let h = f.denominator_product().mul(dg.numerator());
    f.clone().with_witness(h)
}
