//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller installation of both Buchberger criteria.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering as AtomicOrdering};

use smallvec::SmallVec;

use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::error::GroebnerError;
use crate::poly::{Monomial, MonomialOrder};

/// Resource guard for Gröbner computations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GroebnerConfig {
    pub max_basis: usize,
    pub max_degree: u32,
}

static DEFAULT_MAX_BASIS: AtomicUsize = AtomicUsize::new(500);
static DEFAULT_MAX_DEGREE: AtomicU32 = AtomicU32::new(60);

impl GroebnerConfig {
    /// Changes the caps used by every ideal built afterwards without an
    /// explicit configuration.
    pub fn set_process_default(config: GroebnerConfig) {
        DEFAULT_MAX_BASIS.store(config.max_basis, AtomicOrdering::Relaxed);
        DEFAULT_MAX_DEGREE.store(config.max_degree, AtomicOrdering::Relaxed);
    }
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_basis: DEFAULT_MAX_BASIS.load(AtomicOrdering::Relaxed),
            max_degree: DEFAULT_MAX_DEGREE.load(AtomicOrdering::Relaxed),
        }
    }
}

/// Polynomial with terms sorted decreasingly in a fixed monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GPoly<F> {
    pub terms: Vec<(Monomial, F)>,
}

impl<F: Field> GPoly<F> {
    pub fn from_terms(mut terms: Vec<(Monomial, F)>, order: MonomialOrder) -> Self {
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        GPoly { terms }
    }

    pub fn zero() -> Self {
        GPoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &F {
        &self.terms[0].1
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &F) -> Self {
        GPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    pub fn monic(&self) -> (Self, F) {
        let inv = self.lc().inv();
        (self.scale(&inv), inv)
    }

    /// `self + c * m * g`.
    pub fn add_scaled(&self, c: &F, m: &Monomial, g: &Self, order: MonomialOrder) -> Self {
        add_scaled_slice(&self.terms, c, m, &g.terms, order)
    }

    pub fn add(&self, o: &Self, order: MonomialOrder) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        let one = o.terms[0].1.div(&o.terms[0].1);
        add_scaled_slice(&self.terms, &one, &Monomial::one(o.terms[0].0.nvars()), &o.terms, order)
    }
}

fn add_scaled_slice<F: Field>(
    a: &[(Monomial, F)],
    c: &F,
    m: &Monomial,
    b: &[(Monomial, F)],
    order: MonomialOrder,
) -> GPoly<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bj: Option<(Monomial, F)> = b.first().map(|(mb, cb)| (mb.mul(m), cb.mul(c)));
    while i < a.len() {
        let Some((bm, bc)) = bj.as_ref() else { break };
        match order.cmp(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bj.take().unwrap());
                j += 1;
                bj = b.get(j).map(|(mb, cb)| (mb.mul(m), cb.mul(c)));
            }
            Ordering::Equal => {
                let s = a[i].1.add(bc);
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|(mb, cb)| (mb.mul(m), cb.mul(c)));
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    if let Some(t) = bj {
        out.push(t);
        out.extend(b[j + 1..].iter().map(|(mb, cb)| (mb.mul(m), cb.mul(c))));
    }
    GPoly { terms: out }
}

/// Optional record of each basis element as a combination of the input
/// generators.
pub(crate) type Cofactors<F> = Vec<GPoly<F>>;

#[derive(Clone, Debug)]
pub(crate) struct Element<F> {
    pub poly: GPoly<F>,
    pub cofactors: Option<Cofactors<F>>,
}

fn combine_cof<F: Field>(
    a: &Option<Cofactors<F>>,
    c: &F,
    m: &Monomial,
    b: &Option<Cofactors<F>>,
    order: MonomialOrder,
) -> Option<Cofactors<F>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.add_scaled(c, m, y, order))
                .collect(),
        ),
        _ => None,
    }
}

fn scale_cof<F: Field>(a: &Option<Cofactors<F>>, c: &F) -> Option<Cofactors<F>> {
    a.as_ref().map(|v| v.iter().map(|x| x.scale(c)).collect())
}

/// Result of reducing a polynomial against a list of divisors.
pub(crate) struct Reduction<F> {
    pub remainder: GPoly<F>,
    /// Quotient per divisor (only when requested).
    pub quotients: Option<Vec<GPoly<F>>>,
}

/// Heap entry ordered by its sort key alone.
struct Keyed(SmallVec<[i64; 12]>, Monomial);

impl PartialEq for Keyed {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}

impl Eq for Keyed {}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Keyed {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.cmp(&o.0)
    }
}

/// Full reduction of `f` by `divisors` (terms beyond the leading one are
/// reduced too). Terms are accumulated in a hash map and visited in
/// decreasing order through a heap, so each reduction step costs the size
/// of the divisor rather than of the running remainder.
pub(crate) fn reduce<F: Field>(
    f: &GPoly<F>,
    divisors: &[&GPoly<F>],
    order: MonomialOrder,
    want_quotients: bool,
) -> Reduction<F> {
    let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(f.terms.len());
    let mut heap: BinaryHeap<Keyed> = BinaryHeap::with_capacity(f.terms.len());
    for (m, c) in &f.terms {
        acc.insert(m.clone(), c.clone());
        heap.push(Keyed(order.sort_key(m), m.clone()));
    }
    let mut rem = Vec::new();
    let mut quot: Option<Vec<Vec<(Monomial, F)>>> =
        want_quotients.then(|| vec![Vec::new(); divisors.len()]);
    while let Some(Keyed(_, m)) = heap.pop() {
        let Some(c) = acc.remove(&m) else { continue };
        if c.is_zero() {
            continue;
        }
        let hit = divisors
            .iter()
            .enumerate()
            .find(|(_, g)| !g.is_zero() && g.lm().divides(&m));
        let Some((k, g)) = hit else {
            rem.push((m, c));
            continue;
        };
        let q = g.lm().quotient_of(&m);
        let coef = c.div(g.lc());
        let neg = coef.neg();
        for (gm, gc) in &g.terms[1..] {
            let tm = gm.mul(&q);
            let tc = gc.mul(&neg);
            match acc.get_mut(&tm) {
                Some(e) => e.add_assign(&tc),
                None => {
                    heap.push(Keyed(order.sort_key(&tm), tm.clone()));
                    acc.insert(tm, tc);
                }
            }
        }
        if let Some(qs) = quot.as_mut() {
            qs[k].push((q, coef));
        }
    }
    Reduction {
        remainder: GPoly { terms: rem },
        quotients: quot.map(|qs| {
            qs.into_iter()
                .map(|t| GPoly::from_terms(t, order))
                .collect()
        }),
    }
}

fn lcm_of<F: Field>(elems: &[Element<F>], i: usize, j: usize) -> Monomial {
    elems[i].poly.lm().lcm(elems[j].poly.lm())
}

/// Pair record; `lcm` cached.
#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<F> {
    elems: Vec<Element<F>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    order: MonomialOrder,
    config: GroebnerConfig,
}

impl<F: Field> State<F> {
    fn update(&mut self, h: usize) {
        let lt_h = self.elems[h].poly.lm().clone();
        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: h,
                lcm: lcm_of(&self.elems, g, h),
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let lt_g = self.elems[p.i].poly.lm();
            let disjoint = lt_g.is_coprime(&lt_h);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if disjoint || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !self.elems[p.i].poly.lm().is_coprime(&lt_h))
            .collect();
        let elems = &self.elems;
        self.pairs.retain(|p| {
            let drop = lt_h.divides(&p.lcm)
                && lcm_of(elems, p.i, h) != p.lcm
                && lcm_of(elems, p.j, h) != p.lcm;
            !drop
        });
        self.pairs.extend(e);
        self.active.retain(|&g| !lt_h.divides(elems[g].poly.lm()));
        self.active.push(h);
    }

    fn push(&mut self, e: Element<F>) -> Result<usize, GroebnerError> {
        if e.poly.degree() > self.config.max_degree {
            return Err(GroebnerError::ResourceCap {
                what: "basis element degree",
                limit: self.config.max_degree as usize,
            });
        }
        if self.active.len() + 1 > self.config.max_basis {
            return Err(GroebnerError::ResourceCap {
                what: "basis size",
                limit: self.config.max_basis,
            });
        }
        self.elems.push(e);
        Ok(self.elems.len() - 1)
    }

    fn reduce_element(&self, e: &Element<F>) -> Element<F> {
        let divs: Vec<&GPoly<F>> = self.active.iter().map(|&g| &self.elems[g].poly).collect();
        let tracking = e.cofactors.is_some();
        let r = reduce(&e.poly, &divs, self.order, tracking);
        let cofactors = if tracking {
            let mut cof = e.cofactors.clone().unwrap();
            let qs = r.quotients.unwrap();
            for (q, &g) in qs.iter().zip(self.active.iter()) {
                if q.is_zero() {
                    continue;
                }
                let gc = self.elems[g].cofactors.as_ref().unwrap();
                let minus_one = q.lc().div(q.lc()).neg();
                for (k, slot) in cof.iter_mut().enumerate() {
                    let prod = mul_gpoly(q, &gc[k], self.order);
                    *slot = slot.add(&prod.scale(&minus_one), self.order);
                }
            }
            Some(cof)
        } else {
            None
        };
        Element {
            poly: r.remainder,
            cofactors,
        }
    }
}

pub(crate) fn mul_gpoly<F: Field>(a: &GPoly<F>, b: &GPoly<F>, order: MonomialOrder) -> GPoly<F> {
    let mut acc = GPoly::zero();
    for (m, c) in &a.terms {
        acc = acc.add_scaled(c, m, b, order);
    }
    acc
}

/// Output of [`buchberger`]: reduced, monic, sorted by increasing leading
/// monomial.
pub(crate) struct Basis<F> {
    pub elems: Vec<Element<F>>,
}

pub(crate) fn buchberger<F: Field>(
    gens: &[GPoly<F>],
    order: MonomialOrder,
    config: GroebnerConfig,
    track: bool,
    nvars: usize,
) -> Result<Basis<F>, GroebnerError> {
    let ngens = gens.len();
    let mut st = State {
        elems: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        order,
        config,
    };
    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let cof = track.then(|| {
            (0..ngens)
                .map(|i| {
                    if i == k {
                        GPoly {
                            terms: vec![(Monomial::one(nvars), g.lc().div(g.lc()))],
                        }
                    } else {
                        GPoly::zero()
                    }
                })
                .collect()
        });
        let e = st.reduce_element(&Element {
            poly: g.clone(),
            cofactors: cof,
        });
        if e.poly.is_zero() {
            continue;
        }
        let (poly, inv) = e.poly.monic();
        let cofactors = scale_cof(&e.cofactors, &inv);
        let idx = st.push(Element { poly, cofactors })?;
        st.update(idx);
    }
    while !st.pairs.is_empty() {
        // normal strategy: smallest lcm, ties broken by indices
        let (best, _) = st
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                order
                    .cmp(&a.lcm, &b.lcm)
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .unwrap();
        let pair = st.pairs.swap_remove(best);
        let s = spoly(&st.elems[pair.i], &st.elems[pair.j], &pair.lcm, order);
        let h = st.reduce_element(&s);
        if h.poly.is_zero() {
            continue;
        }
        let (poly, inv) = h.poly.monic();
        let cofactors = scale_cof(&h.cofactors, &inv);
        let idx = st.push(Element { poly, cofactors })?;
        st.update(idx);
    }
    Ok(interreduce(st))
}

fn spoly<F: Field>(a: &Element<F>, b: &Element<F>, lcm: &Monomial, order: MonomialOrder) -> Element<F> {
    // both monic
    let ma = a.poly.lm().quotient_of(lcm);
    let mb = b.poly.lm().quotient_of(lcm);
    let one = a.poly.lc().clone();
    let minus_one = one.neg();
    let zero_poly = GPoly::zero();
    let left = zero_poly.add_scaled(&one, &ma, &a.poly, order);
    let poly = left.add_scaled(&minus_one, &mb, &b.poly, order);
    let cofactors = match (&a.cofactors, &b.cofactors) {
        (Some(ca), Some(_)) => {
            let zero: Option<Cofactors<F>> = Some(vec![GPoly::zero(); ca.len()]);
            let l = combine_cof(&zero, &one, &ma, &a.cofactors, order);
            combine_cof(&l, &minus_one, &mb, &b.cofactors, order)
        }
        _ => None,
    };
    Element { poly, cofactors }
}

fn interreduce<F: Field>(st: State<F>) -> Basis<F> {
    let order = st.order;
    let mut keep: Vec<Element<F>> = st.active.iter().map(|&i| st.elems[i].clone()).collect();
    keep.sort_by(|a, b| order.cmp(a.poly.lm(), b.poly.lm()));
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Element<F>> = Vec::new();
    for e in keep {
        if !minimal.iter().any(|m| m.poly.lm().divides(e.poly.lm())) {
            minimal.push(e);
        }
    }
    let mut out: Vec<Element<F>> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&GPoly<F>> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, e)| &e.poly)
            .collect();
        let e = &minimal[k];
        let head = GPoly {
            terms: vec![e.poly.terms[0].clone()],
        };
        let tail = GPoly {
            terms: e.poly.terms[1..].to_vec(),
        };
        let tracking = e.cofactors.is_some();
        let r = reduce(&tail, &others, order, tracking);
        let poly = head.add(&r.remainder, order);
        let cofactors = if tracking {
            let mut cof = e.cofactors.clone().unwrap();
            let qs = r.quotients.unwrap();
            let other_elems: Vec<&Element<F>> = minimal
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, e)| e)
                .collect();
            for (q, oe) in qs.iter().zip(other_elems) {
                if q.is_zero() {
                    continue;
                }
                let oc = oe.cofactors.as_ref().unwrap();
                let minus_one = q.lc().div(q.lc()).neg();
                for (slot, c) in cof.iter_mut().zip(oc.iter()) {
                    let prod = mul_gpoly(q, c, order);
                    *slot = slot.add(&prod.scale(&minus_one), order);
                }
            }
            Some(cof)
        } else {
            None
        };
        out.push(Element { poly, cofactors });
    }
    Basis { elems: out }
}

/// True if every S-polynomial of `basis` reduces to zero modulo `basis`.
pub(crate) fn satisfies_buchberger_criterion<F: Field>(basis: &[GPoly<F>], order: MonomialOrder) -> bool {
    let divs: Vec<&GPoly<F>> = basis.iter().collect();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let lcm = basis[i].lm().lcm(basis[j].lm());
            let a = Element {
                poly: basis[i].clone(),
                cofactors: None,
            };
            let b = Element {
                poly: basis[j].clone(),
                cofactors: None,
            };
            let s = spoly(&a, &b, &lcm, order);
            if !reduce(&s.poly, &divs, order, false).remainder.is_zero() {
                return false;
            }
        }
    }
    true
}
