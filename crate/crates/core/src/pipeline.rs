//! End-to-end run on a Weierstrass model over a DVR: smoothening along
//! the sections, orders of the invariant differential, the minimal part,
//! and the law and atlas checks on the fibres.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::{DvrElem, FracElem, Fp};
use crate::birlaw::{chord_law, weierstrass_equation, CheckReport};
use crate::error::{MapError, SmoothError, VolumeError};
use crate::poly::PolyRing;
use crate::smoothening::{is_smooth_at, smoothen, DvrModel, LineageDocument, Section};
use crate::volume::{
    check_invariance, fibre_components, filter_non_minimal, minimal_components, normalize, ord_along, Component, ComponentOrder,
    VolumeForm,
};
use crate::weilgroup::{AtlasDocument, WeilGroup};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Smooth(#[from] SmoothError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Group(#[from] crate::error::GroupError),
}

impl PipelineError {
    pub fn is_resource_cap(&self) -> bool {
        match self {
            PipelineError::Smooth(e) => e.is_resource_cap(),
            PipelineError::Volume(e) => e.is_resource_cap(),
            PipelineError::Map(e) => e.is_resource_cap(),
            PipelineError::Group(e) => e.is_resource_cap(),
        }
    }
}

/// Input: Weierstrass coefficients over `R` and integral points.
#[derive(Clone, Debug)]
pub struct PipelineInput {
    pub ring: Arc<PolyRing<DvrElem>>,
    pub coefficients: [DvrElem; 5],
    pub sections: Vec<Vec<DvrElem>>,
    /// Word-length bound for the atlas on the generic fibre; `None` skips it.
    pub atlas_bound: Option<usize>,
    pub check_laws: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub model: Vec<String>,
    pub initial_deltas: Vec<u32>,
    #[serde(flatten)]
    pub part: MinimalPart,
    pub law_checks: Vec<CheckReport>,
    pub atlas: Option<AtlasDocument>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.law_checks.iter().all(|r| r.passed) && self.atlas.as_ref().is_none_or(|a| a.cocycle.iter().all(|c| c.passed))
    }
}

/// Charts of the smoothening that hold sections, with the orders of the
/// form along their special fibres and the minimal part.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalPart {
    pub lineage: LineageDocument,
    pub section_charts: Vec<usize>,
    pub orders: Vec<ComponentOrder>,
    pub normalization_shift: i64,
    pub normalized: Vec<ComponentOrder>,
    pub minimal: Vec<ComponentOrder>,
    pub minimal_charts: Vec<usize>,
    pub minimal_component_count: usize,
    /// Equations of the kept charts and the polynomial inverted on each.
    pub kept: Vec<KeptChart>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KeptChart {
    pub chart: usize,
    pub equations: Vec<String>,
    pub components: Vec<String>,
    pub localization: String,
}

/// Smoothens along the sections, pulls `form` back to every chart holding
/// a section, and keeps the minimal components met by the sections.
pub fn minimal_part(model: &DvrModel, sections: &[Section], form: &VolumeForm) -> Result<MinimalPart, PipelineError> {
    let sm = smoothen(model, sections)?;
    let mut section_charts: Vec<usize> = Vec::new();
    for t in &sm.sections {
        let node = &sm.charts[t.chart];
        if !is_smooth_at(&node.model, &t.section)? {
            return Err(SmoothError::Invariant(format!("section {} is not smooth after smoothening", t.section)).into());
        }
        if !section_charts.contains(&t.chart) {
            section_charts.push(t.chart);
        }
    }
    section_charts.sort_unstable();

    let mut forms: Vec<Option<VolumeForm>> = vec![None; sm.charts.len()];
    forms[0] = Some(form.clone());
    for i in 1..sm.charts.len() {
        let node = &sm.charts[i];
        let parent = node.parent.expect("non-root chart has a parent");
        if let Some(f) = forms[parent].clone() {
            forms[i] = f.pullback(node).ok();
        }
    }

    // components met by the sections, chart by chart
    let mut met: Vec<(usize, Vec<Component>)> = Vec::new();
    for &c in &section_charts {
        let comps = fibre_components(&sm.charts[c].model);
        let mut hit: Vec<Component> = Vec::new();
        for t in sm.sections.iter().filter(|t| t.chart == c) {
            let pt = t.section.specialization();
            let comp = comps
                .iter()
                .find(|q| q.contains(&pt))
                .ok_or_else(|| SmoothError::Invariant(format!("section {} misses the special fibre", t.section)))?;
            if !hit.contains(comp) {
                hit.push(comp.clone());
            }
        }
        met.push((c, hit));
    }

    let mut orders = Vec::new();
    for (c, comps) in &met {
        let node = &sm.charts[*c];
        let form = forms[*c]
            .as_ref()
            .ok_or_else(|| VolumeError::Unsupported(format!("no form on chart {}", node.model.name())))?;
        for comp in comps {
            orders.push(ComponentOrder {
                chart: format!("{c}:{}", node.model.name()),
                component: comp.to_string(),
                order: ord_along(&node.model, comp, form)?,
            });
        }
    }
    let (shift, normalized) = normalize(&orders)?;
    let minimal = minimal_components(&normalized);
    let mut k = 0;
    let mut per_chart = Vec::new();
    for (c, comps) in &met {
        let mut with_orders = Vec::new();
        for comp in comps {
            with_orders.push((comp.clone(), normalized[k].order));
            k += 1;
        }
        per_chart.push((*c, sm.charts[*c].model.clone(), with_orders));
    }
    let filtered = filter_non_minimal(
        &per_chart
            .iter()
            .map(|(_, m, o)| (m.clone(), o.clone()))
            .collect::<Vec<_>>(),
    );
    let minimal_charts: Vec<usize> = per_chart
        .iter()
        .filter(|(_, _, o)| o.iter().any(|(_, v)| *v == 0))
        .map(|(c, _, _)| *c)
        .collect();
    let kept = minimal_charts
        .iter()
        .zip(&filtered)
        .map(|(&c, k)| KeptChart {
            chart: c,
            equations: k.model.equations().iter().map(|f| f.to_string()).collect(),
            components: k.components.iter().map(|q| q.to_string()).collect(),
            localization: k.localization.to_string(),
        })
        .collect();
    Ok(MinimalPart {
        lineage: sm.document(),
        section_charts,
        orders,
        normalization_shift: shift,
        normalized,
        minimal_component_count: filtered.iter().map(|k| k.components.len()).sum(),
        minimal,
        minimal_charts,
        kept,
    })
}

pub fn run(input: &PipelineInput) -> Result<PipelineReport, PipelineError> {
    let ring = &input.ring;
    let d = *ring.ctx();
    let eq = weierstrass_equation(ring, input.coefficients.clone());
    let model = DvrModel::new("A", ring, vec![eq])?;
    let sections = input
        .sections
        .iter()
        .map(|s| Section::new(&model, s.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let initial_deltas = sections
        .iter()
        .map(|s| crate::smoothening::delta(&model, s))
        .collect::<Result<Vec<_>, _>>()?;
    let [a1, _, a3, _, _] = &input.coefficients;
    let part = minimal_part(&model, &sections, &VolumeForm::weierstrass(ring, a1, a3))?;

    let mut law_checks = Vec::new();
    let mut atlas = None;
    if input.check_laws || input.atlas_bound.is_some() {
        let kring: Arc<PolyRing<FracElem>> = PolyRing::new(ring.vars(), d);
        let kcoef = input.coefficients.clone().map(|c| c.to_frac());
        let generic = Arc::new(chord_law(&kring, kcoef, vec![])?);
        if input.check_laws {
            let sring: Arc<PolyRing<Fp>> = PolyRing::new(ring.vars(), d.prime());
            let scoef = input.coefficients.clone().map(|c| c.residue());
            let special = chord_law(&sring, scoef, vec![])?;
            let g = generic.check_all()?;
            let s = special.check_all()?;
            for (a, b) in g.into_iter().zip(s) {
                let name = a.check.clone();
                law_checks.push(CheckReport::merged(&name, &[("generic fibre", a), ("special fibre", b)]));
            }
            let kform = VolumeForm::weierstrass(ring, a1, a3)
                .coefficient()
                .map_coeffs(&kring, DvrElem::to_frac);
            law_checks.push(check_invariance(&generic, &kform, 0)?);
        }
        if let Some(bound) = input.atlas_bound {
            let group = WeilGroup::new(generic.clone());
            let gens: Vec<Vec<FracElem>> = input
                .sections
                .iter()
                .map(|s| s.iter().map(DvrElem::to_frac).collect())
                .collect();
            atlas = Some(group.build_atlas(&gens, bound)?.document());
        }
    }

    Ok(PipelineReport {
        model: model.equations().iter().map(|f| f.to_string()).collect(),
        initial_deltas,
        part,
        law_checks,
        atlas,
    })
}
