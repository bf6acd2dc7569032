//! The group generated by the left translations of a strict birational
//! group law, its elements as birational self-maps, and translation charts.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::Field;
use crate::birlaw::{LawMap, StrictLaw};
use crate::error::{GroupError, MapError};
use crate::poly::RatFunc;
use crate::ratmap::{BirationalRep, RationalMap};

/// One letter `φ(a)^{±1}` of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter<F: Field> {
    pub point: Vec<F>,
    pub inverse: bool,
}

impl<F: Field> fmt::Display for Letter<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt: Vec<String> = self.point.iter().map(|c| c.to_string()).collect();
        write!(f, "phi({})", pt.join(", "))?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// An element of the group: a word in the translations together with a
/// birational representative of the corresponding self-map of `X`.
#[derive(Clone, Debug)]
pub struct GroupElement<F: Field> {
    word: Vec<Letter<F>>,
    rep: BirationalRep<F>,
    law: Arc<StrictLaw<F>>,
}

impl<F: Field> GroupElement<F> {
    pub fn word(&self) -> &[Letter<F>] {
        &self.word
    }

    pub fn rep(&self) -> &BirationalRep<F> {
        &self.rep
    }

    pub fn law(&self) -> &Arc<StrictLaw<F>> {
        &self.law
    }

    /// Value of the forward map at a point of its witness open.
    pub fn apply(&self, x: &[F]) -> Result<Vec<F>, GroupError> {
        Ok(self.rep.forward.eval(x)?)
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "e".into();
        }
        let parts: Vec<String> = self.word.iter().map(|l| l.to_string()).collect();
        parts.join(" * ")
    }
}

impl<F: Field> fmt::Display for GroupElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

/// Group operations for one law.
#[derive(Clone, Debug)]
pub struct WeilGroup<F: Field> {
    law: Arc<StrictLaw<F>>,
}

fn fmt_point<F: Field>(pt: &[F]) -> String {
    let parts: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl<F: Field> WeilGroup<F> {
    pub fn new(law: Arc<StrictLaw<F>>) -> Self {
        WeilGroup { law }
    }

    pub fn law(&self) -> &Arc<StrictLaw<F>> {
        &self.law
    }

    fn slice(&self, m: LawMap, fixed_slot: usize, a: &[F]) -> Result<RationalMap<F>, GroupError> {
        let x = self.law.variety();
        if !x.contains_point(a) {
            return Err(GroupError::NotOnVariety(fmt_point(a)));
        }
        let r = self.law.specialize(m, fixed_slot, a);
        if !x.is_dense_open(r.witness())? {
            return Err(GroupError::NonDenseSlice {
                map: m.to_string(),
                point: fmt_point(a),
            });
        }
        Ok(r)
    }

    /// Left translation `x ↦ ax` with inverse `x ↦ a⁻¹x`.
    pub fn phi(&self, a: &[F]) -> Result<GroupElement<F>, GroupError> {
        let forward = self.slice(LawMap::M12, 0, a)?;
        let backward = self.slice(LawMap::M13, 0, a)?;
        Ok(GroupElement {
            word: vec![Letter {
                point: a.to_vec(),
                inverse: false,
            }],
            rep: BirationalRep::new(forward, backward),
            law: self.law.clone(),
        })
    }

    /// Right translation `x ↦ xa` with inverse `x ↦ xa⁻¹`.
    pub fn psi(&self, a: &[F]) -> Result<BirationalRep<F>, GroupError> {
        let forward = self.slice(LawMap::M12, 1, a)?;
        let backward = self.slice(LawMap::M23, 0, a)?;
        Ok(BirationalRep::new(forward, backward))
    }

    pub fn identity(&self) -> GroupElement<F> {
        GroupElement {
            word: Vec::new(),
            rep: BirationalRep::identity(self.law.variety()),
            law: self.law.clone(),
        }
    }

    fn same_law(&self, g: &GroupElement<F>) -> Result<(), GroupError> {
        if Arc::ptr_eq(&g.law, &self.law) {
            Ok(())
        } else {
            Err(GroupError::LawMismatch)
        }
    }

    /// `gh`, acting as `g ∘ h`.
    pub fn multiply(&self, g: &GroupElement<F>, h: &GroupElement<F>) -> Result<GroupElement<F>, GroupError> {
        self.same_law(g)?;
        self.same_law(h)?;
        let mut word = g.word.clone();
        word.extend(h.word.iter().cloned());
        let rep = self.simplify(g.rep.compose(&h.rep)?, &word)?;
        Ok(GroupElement {
            word,
            rep,
            law: self.law.clone(),
        })
    }

    /// Replaces a composite by the identity or by a single translation
    /// `φ(c)` when it provably equals one. The candidate `c = g(x)·x⁻¹` is
    /// read off at a sample point, or from the generic point when it is
    /// constant modulo `I`; equality is then checked on a dense open, so
    /// the replacement is exact. Keeps degrees bounded under repeated
    /// composition.
    fn simplify(&self, rep: BirationalRep<F>, word: &[Letter<F>]) -> Result<BirationalRep<F>, GroupError> {
        let x = self.law.variety();
        if rep.forward.equal_on_dense(&RationalMap::identity(x))? {
            return Ok(BirationalRep::identity(x));
        }
        let m23 = self.law.map(LawMap::M23);
        let sampled = self
            .law
            .probes()
            .iter()
            .chain(word.iter().map(|l| &l.point))
            .find_map(|x0| {
                let y0 = rep.forward.eval(x0).ok()?;
                let args: Vec<F> = x0.iter().chain(&y0).cloned().collect();
                m23.eval(&args).ok()
            });
        let candidate = match sampled {
            Some(c) => Some(c),
            None => self.generic_quotient(&rep.forward)?,
        };
        if let Some(c) = candidate {
            if let Ok(pc) = self.phi(&c) {
                if rep.forward.equal_on_dense(&pc.rep.forward)? {
                    return Ok(pc.rep);
                }
            }
        }
        Ok(rep)
    }

    /// `g(x)·x⁻¹` at the generic point, if each coordinate reduces to a
    /// constant multiple of its denominator modulo `I`.
    fn generic_quotient(&self, g: &RationalMap<F>) -> Result<Option<Vec<F>>, GroupError> {
        let x = self.law.variety();
        let ring = x.ring();
        let vars: Vec<RatFunc<F>> = (0..ring.nvars()).map(|i| RatFunc::var(ring, i)).collect();
        let (coords, _) = self.law.apply(LawMap::M23, ring, &vars, g.coords());
        let mut out = Vec::with_capacity(coords.len());
        for c in coords {
            let n = x.ideal().normal_form(c.numerator()).map_err(MapError::from)?;
            let d = x.ideal().normal_form(c.denominator()).map_err(MapError::from)?;
            if d.is_zero() {
                return Ok(None);
            }
            let k = n.leading_coeff().div(&d.leading_coeff());
            if n != d.scale(&k) {
                return Ok(None);
            }
            out.push(k);
        }
        Ok(Some(out))
    }

    pub fn invert(&self, g: &GroupElement<F>) -> GroupElement<F> {
        let word = g
            .word
            .iter()
            .rev()
            .map(|l| Letter {
                point: l.point.clone(),
                inverse: !l.inverse,
            })
            .collect();
        GroupElement {
            word,
            rep: g.rep.inverse(),
            law: g.law.clone(),
        }
    }

    /// Evaluates a word letter by letter.
    pub fn evaluate_word(&self, word: &[Letter<F>]) -> Result<GroupElement<F>, GroupError> {
        let mut acc = self.identity();
        for l in word {
            let p = self.phi(&l.point)?;
            let p = if l.inverse { self.invert(&p) } else { p };
            acc = self.multiply(&acc, &p)?;
        }
        Ok(acc)
    }

    /// Equality of the underlying birational maps.
    pub fn equal(&self, g: &GroupElement<F>, h: &GroupElement<F>) -> Result<bool, GroupError> {
        Ok(g.rep.forward.equal_on_dense(&h.rep.forward)?)
    }

    pub fn is_identity(&self, g: &GroupElement<F>) -> Result<bool, GroupError> {
        Ok(g.rep
            .forward
            .equal_on_dense(&RationalMap::identity(self.law.variety()))?)
    }

    /// Whether `g(x) = x`. A fixed point forces `g` to be the identity;
    /// this is re-checked and a violation is an error.
    pub fn fixed_point_test(&self, g: &GroupElement<F>, x: &[F]) -> Result<bool, GroupError> {
        let fixed = g.apply(x)? == x;
        if fixed && !self.is_identity(g)? {
            return Err(GroupError::FixedPointViolation(fmt_point(x)));
        }
        Ok(fixed)
    }

    /// `φ(a)·φ(b)⁻¹`.
    pub fn delta_map(&self, a: &[F], b: &[F]) -> Result<GroupElement<F>, GroupError> {
        let pa = self.phi(a)?;
        let pb = self.phi(b)?;
        self.multiply(&pa, &self.invert(&pb))
    }

    /// The transition from the chart of `g2` to the chart of `g1`, i.e.
    /// the self-map `g1⁻¹g2`.
    pub fn chart_transition(&self, g1: &GroupElement<F>, g2: &GroupElement<F>) -> Result<BirationalRep<F>, GroupError> {
        Ok(self.multiply(&self.invert(g1), g2)?.rep)
    }

    /// Charts indexed by all positive words of length at most `bound` in
    /// the generators, deduplicated, with all transitions and the cocycle
    /// identity checked on every ordered triple.
    pub fn build_atlas(&self, generators: &[Vec<F>], bound: usize) -> Result<Atlas<F>, GroupError> {
        let gens = generators
            .iter()
            .map(|a| self.phi(a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut charts: Vec<GroupElement<F>> = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let cand = self.multiply(w, g)?;
                    let mut known = false;
                    for c in &charts {
                        if self.is_identity(&self.multiply(&self.invert(c), &cand)?)? {
                            known = true;
                            break;
                        }
                    }
                    if !known {
                        charts.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
            frontier = next;
        }
        let n = charts.len();
        let mut transitions = Vec::with_capacity(n);
        for g1 in &charts {
            let row = charts
                .iter()
                .map(|g2| self.chart_transition(g1, g2))
                .collect::<Result<Vec<_>, _>>()?;
            transitions.push(row);
        }
        let mut cocycle = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let via = transitions[i][j].compose(&transitions[j][k])?;
                    let passed = via.forward.equal_on_dense(&transitions[i][k].forward)?;
                    cocycle.push(CocycleCheck { triple: [i, j, k], passed });
                }
            }
        }
        Ok(Atlas {
            charts,
            transitions,
            cocycle,
        })
    }
}

/// Result of one cocycle identity `t(i,k) = t(i,j) ∘ t(j,k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleCheck {
    pub triple: [usize; 3],
    pub passed: bool,
}

/// Translation charts with their transitions; `transitions[i][j]` maps the
/// chart of `charts[j]` into the chart of `charts[i]`.
#[derive(Clone, Debug)]
pub struct Atlas<F: Field> {
    pub charts: Vec<GroupElement<F>>,
    pub transitions: Vec<Vec<BirationalRep<F>>>,
    pub cocycle: Vec<CocycleCheck>,
}

impl<F: Field> Atlas<F> {
    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn cocycle_holds(&self) -> bool {
        self.cocycle.iter().all(|c| c.passed)
    }

    pub fn document(&self) -> AtlasDocument {
        let map_doc = |m: &RationalMap<F>| MapDocument {
            coords: m.coords().iter().map(|c| c.to_string()).collect(),
            witness: m.witness().to_string(),
        };
        let mut transitions = Vec::new();
        for (i, row) in self.transitions.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                transitions.push(TransitionDocument {
                    from: j,
                    to: i,
                    forward: map_doc(&t.forward),
                    backward: map_doc(&t.backward),
                });
            }
        }
        AtlasDocument {
            charts: self.charts.iter().map(|c| c.word_string()).collect(),
            transitions,
            cocycle: self.cocycle.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapDocument {
    pub coords: Vec<String>,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionDocument {
    pub from: usize,
    pub to: usize,
    pub forward: MapDocument,
    pub backward: MapDocument,
}

/// Serializable form of an atlas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasDocument {
    pub charts: Vec<String>,
    pub transitions: Vec<TransitionDocument>,
    pub cocycle: Vec<CocycleCheck>,
}
