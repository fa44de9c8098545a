//! Local-global gluing of Deligne–Dynkin diagrams.
//!
//! Local Galois groups are modelled by the cyclic subgroups of a finite
//! group (see [`ChebotarevFamily`]). Each local hypothesis is an isomorphism
//! of restricted diagrams; [`glue`] builds a global one by following the
//! case analysis of the gluing argument, and [`verify_theorem`] checks the
//! result against an independent brute-force oracle.

mod campaign;
mod enumerate;
mod glue;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::deldyn::DeligneDynkinDiagram;
use crate::error::{Error, Result};
use crate::gaction::{for_each_equivariant_isom, is_equivariant_isom, ComponentMap, EquivariantDiagram};
use crate::perm::{Perm, PermGroup};

pub use campaign::{run_campaign, CampaignReport, DiagramCheck, InstanceOutcome, ProbeOutcome, ProbeSummary};
pub use enumerate::{
    component_maps, enumerate_diagrams, enumerate_instances, enumerate_probe_instances, group_catalogue, Bounds,
    CatalogueGroup, LabelledDiagram,
};
pub use glue::{
    glue, locally_same_aut, locally_same_type, verify_glue, GlueFailure, GlueOutcome, GlueResult, Place, Stage,
};

/// Two diagrams acted on by the same abstract group (generators correspond
/// label by label) and an equivariant identification of their components.
#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub d1: DeligneDynkinDiagram,
    pub d2: DeligneDynkinDiagram,
    pub f: ComponentMap,
}

impl Instance {
    pub fn new(
        label: impl Into<String>,
        d1: DeligneDynkinDiagram,
        d2: DeligneDynkinDiagram,
        f: ComponentMap,
    ) -> Result<Self> {
        let (e1, e2) = (d1.base(), d2.base());
        if e1.group().generators().len() != e2.group().generators().len() {
            return Err(Error::input("the two actions are not by the same abstract group"));
        }
        if f.len() != e1.diagram().components().len() || f.len() != e2.diagram().components().len() {
            return Err(Error::input("component map has the wrong size"));
        }
        Ok(Instance {
            label: label.into(),
            d1,
            d2,
            f,
        })
    }

    fn n1(&self) -> usize {
        self.d1.node_count()
    }

    /// The image of the abstract group acting on `Delta_1 ⊔ Delta_2`.
    pub fn joint_group(&self) -> PermGroup {
        let gens = self
            .d1
            .base()
            .group()
            .generators()
            .iter()
            .zip(self.d2.base().group().generators())
            .map(|(a, b)| a.disjoint_union(b))
            .collect();
        PermGroup::new(self.n1() + self.d2.node_count(), gens).expect("degrees agree")
    }

    /// The two halves of a joint element.
    pub fn split(&self, g: &Perm) -> (Perm, Perm) {
        let n1 = self.n1();
        (g.restrict_to(0..n1), g.restrict_to(n1..g.degree()))
    }

    /// Both diagrams with the action restricted to `<g>`, `g` joint.
    pub fn restrict(&self, g: &Perm) -> Result<(DeligneDynkinDiagram, DeligneDynkinDiagram)> {
        let (g1, g2) = self.split(g);
        let h1 = PermGroup::new(g1.degree(), vec![g1])?;
        let h2 = PermGroup::new(g2.degree(), vec![g2])?;
        Ok((
            DeligneDynkinDiagram::new(self.d1.base().restrict(&h1)?, self.d1.mu().clone()),
            DeligneDynkinDiagram::new(self.d2.base().restrict(&h2)?, self.d2.mu().clone()),
        ))
    }

    /// Both sides irreducible, symplectic and populated.
    pub fn in_hypothesis(&self) -> bool {
        [&self.d1, &self.d2]
            .iter()
            .all(|d| d.type_of().is_ok_and(|t| t.is_symplectic_populated()))
    }
}

/// One local group: the cyclic subgroup generated by `generator`.
#[derive(Clone, Debug)]
pub struct Local {
    pub generator: Perm,
    /// Element indices of the subgroup in the base group, ascending.
    pub members: Vec<usize>,
}

/// The finite stand-in for the decomposition groups at all primes: every
/// cyclic subgroup `<g>` of the base group, trivial subgroup first.
#[derive(Clone, Debug)]
pub struct ChebotarevFamily {
    base: PermGroup,
    locals: Vec<Local>,
}

impl ChebotarevFamily {
    pub fn new(base: &PermGroup) -> Self {
        let locals = base
            .cyclic_subgroups()
            .into_iter()
            .map(|(i, members)| Local {
                generator: base.element(i).clone(),
                members,
            })
            .collect();
        ChebotarevFamily {
            base: base.clone(),
            locals,
        }
    }

    pub fn base(&self) -> &PermGroup {
        &self.base
    }

    pub fn locals(&self) -> &[Local] {
        &self.locals
    }

    pub fn len(&self) -> usize {
        self.locals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locals.is_empty()
    }

    /// Index of the local equal to `<g>`.
    pub fn local_of(&self, g: &Perm) -> Option<usize> {
        let mut members = Vec::new();
        let mut p = Perm::identity(g.degree());
        loop {
            members.push(self.base.index_of(&p)?);
            p = p.then(g);
            if p.is_identity() {
                break;
            }
        }
        members.sort_unstable();
        self.locals.iter().position(|l| l.members == members)
    }

    /// Index of the first local containing the element `g`.
    pub fn local_containing(&self, g: &Perm) -> Option<usize> {
        let i = self.base.index_of(g)?;
        self.locals.iter().position(|l| l.members.binary_search(&i).is_ok())
    }
}

/// `chebotarev_family(G)`: all distinct cyclic subgroups of `G`.
pub fn chebotarev_family(g: &PermGroup) -> ChebotarevFamily {
    ChebotarevFamily::new(g)
}

/// Equivariant isomorphisms over `f` mapping `mu_1` onto `mu_2`, streamed
/// in lexicographic order.
pub fn for_each_deldyn_isom(
    d1: &DeligneDynkinDiagram,
    d2: &DeligneDynkinDiagram,
    f: &ComponentMap,
    visit: &mut dyn FnMut(&Perm) -> ControlFlow<()>,
) -> Result<()> {
    let (m1, m2) = (d1.mu(), d2.mu());
    if m1.len() != m2.len() {
        return Ok(());
    }
    for_each_equivariant_isom(
        d1.base(),
        d2.base(),
        f,
        &|v, x| m1.contains(&v) == m2.contains(&x),
        visit,
    )
}

/// Brute-force decision: the first isomorphism of Deligne–Dynkin diagrams
/// over `f`, or `None`.
pub fn decide_isom_oracle(
    d1: &DeligneDynkinDiagram,
    d2: &DeligneDynkinDiagram,
    f: &ComponentMap,
) -> Result<Option<Perm>> {
    let mut found = None;
    for_each_deldyn_isom(d1, d2, f, &mut |p| {
        found = Some(p.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Direct check of `phi in Isom_f((Delta_1, mu_1), (Delta_2, mu_2))`.
pub fn is_deldyn_isom(d1: &DeligneDynkinDiagram, d2: &DeligneDynkinDiagram, f: &ComponentMap, phi: &Perm) -> bool {
    is_equivariant_isom(d1.base(), d2.base(), f, phi) && image(phi, d1.mu()) == *d2.mu()
}

pub(crate) fn image(p: &Perm, s: &BTreeSet<usize>) -> BTreeSet<usize> {
    s.iter().map(|&v| p.apply(v)).collect()
}

/// The hypothesis family: one optional local isomorphism per member of the
/// Chebotarev family, each checked when stored.
#[derive(Clone, Debug)]
pub struct LocalWitnessSet {
    psi: Vec<Option<Perm>>,
}

impl LocalWitnessSet {
    /// Stores given witnesses after checking each against its restriction.
    pub fn new(inst: &Instance, family: &ChebotarevFamily, psi: Vec<Option<Perm>>) -> Result<Self> {
        if psi.len() != family.len() {
            return Err(Error::input(format!(
                "{} witnesses for {} local groups",
                psi.len(),
                family.len()
            )));
        }
        for (i, p) in psi.iter().enumerate() {
            if let Some(p) = p {
                let (l1, l2) = inst.restrict(&family.locals()[i].generator)?;
                if !is_deldyn_isom(&l1, &l2, &inst.f, p) {
                    return Err(Error::input(format!(
                        "witness for local {i} is not a local isomorphism"
                    )));
                }
            }
        }
        Ok(LocalWitnessSet { psi })
    }

    /// Runs the oracle on every restriction.
    pub fn compute(inst: &Instance, family: &ChebotarevFamily) -> Result<Self> {
        let psi = family
            .locals()
            .iter()
            .map(|l| {
                let (l1, l2) = inst.restrict(&l.generator)?;
                decide_isom_oracle(&l1, &l2, &inst.f)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalWitnessSet { psi })
    }

    /// Like [`LocalWitnessSet::compute`] but stops at the first missing local.
    pub fn compute_until_missing(
        inst: &Instance,
        family: &ChebotarevFamily,
    ) -> Result<std::result::Result<Self, usize>> {
        let mut psi = Vec::with_capacity(family.len());
        for (i, l) in family.locals().iter().enumerate() {
            let (l1, l2) = inst.restrict(&l.generator)?;
            match decide_isom_oracle(&l1, &l2, &inst.f)? {
                Some(p) => psi.push(Some(p)),
                None => return Ok(Err(i)),
            }
        }
        Ok(Ok(LocalWitnessSet { psi }))
    }

    pub fn get(&self, local: usize) -> Option<&Perm> {
        self.psi.get(local).and_then(Option::as_ref)
    }

    pub fn is_complete(&self) -> bool {
        self.psi.iter().all(Option::is_some)
    }

    pub fn first_missing(&self) -> Option<usize> {
        self.psi.iter().position(Option::is_none)
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }
}

/// Outcome of checking the local-global implication on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    /// Some local isomorphism is missing, so the hypothesis fails.
    Vacuous {
        missing_local: usize,
    },
    Counterexample {
        reason: String,
    },
}

/// Computes witnesses with the oracle; when all exist, glues, re-verifies,
/// and compares with the oracle's global answer.
pub fn verify_theorem(inst: &Instance, family: &ChebotarevFamily) -> Result<Verdict> {
    Ok(verify_theorem_detailed(inst, family)?.0)
}

/// [`verify_theorem`] together with the glue result on a pass.
pub fn verify_theorem_detailed(inst: &Instance, family: &ChebotarevFamily) -> Result<(Verdict, Option<GlueResult>)> {
    if !inst.in_hypothesis() {
        return Err(Error::precondition(format!(
            "instance {} is not irreducible symplectic populated on both sides",
            inst.label
        )));
    }
    let witnesses = match LocalWitnessSet::compute_until_missing(inst, family)? {
        Ok(w) => w,
        Err(missing_local) => return Ok((Verdict::Vacuous { missing_local }, None)),
    };
    let oracle = decide_isom_oracle(&inst.d1, &inst.d2, &inst.f)?;
    let glued = glue(inst, family, &witnesses)?;
    let counterexample = |reason: String| Ok((Verdict::Counterexample { reason }, None));
    match (glued, oracle) {
        (GlueOutcome::Failed(fail), Some(_)) => counterexample(format!(
            "glue failed although the oracle found a global isomorphism: {fail}"
        )),
        (GlueOutcome::Failed(fail), None) => {
            counterexample(format!("all locals exist but no global isomorphism exists: {fail}"))
        }
        (GlueOutcome::Glued(_), None) => {
            counterexample("glue returned a map but the oracle found no global isomorphism".into())
        }
        (GlueOutcome::Glued(res), Some(_)) => {
            let problems = verify_glue(inst, family, &witnesses, &res)?;
            if problems.is_empty() {
                Ok((Verdict::Pass, Some(res)))
            } else {
                counterexample(format!("glue result fails re-verification: {}", problems.join("; ")))
            }
        }
    }
}

/// Local and global existence on an instance outside the hypotheses.
pub fn probe(inst: &Instance, family: &ChebotarevFamily) -> Result<ProbeOutcome> {
    let locals_complete = LocalWitnessSet::compute_until_missing(inst, family)?.is_ok();
    let global_exists = decide_isom_oracle(&inst.d1, &inst.d2, &inst.f)?.is_some();
    Ok(ProbeOutcome {
        locals_complete,
        global_exists,
    })
}

pub(crate) fn restricted_base(e: &EquivariantDiagram, g: &Perm) -> Result<EquivariantDiagram> {
    e.restrict(&PermGroup::new(g.degree(), vec![g.clone()])?)
}

#[cfg(test)]
mod tests;
