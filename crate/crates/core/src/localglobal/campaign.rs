//! The exhaustive verification campaign over the enumerated family.

use serde::Serialize;

use super::enumerate::{pair_specs, LabelledDiagram, PairSpec};
use std::collections::BTreeMap;

use super::{
    enumerate_diagrams, locally_same_aut, locally_same_type, probe, verify_theorem_detailed, Bounds, ChebotarevFamily,
    Instance, Place, Verdict,
};
use crate::deldyn::DiagramType;
use crate::error::Result;
use crate::par::par_map;

/// Local and global existence on an out-of-hypothesis instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub locals_complete: bool,
    pub global_exists: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub label: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Glue statistics on a pass: `(type, used tau_2, realigned)`.
    #[serde(skip)]
    pub detail: Option<(DiagramType, bool, bool)>,
}

/// Per-diagram checks: the automorphism count and both local lemmas.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramCheck {
    pub label: String,
    #[serde(rename = "type")]
    pub ty: DiagramType,
    pub aut_id: usize,
    pub expected_aut_id: usize,
    pub same_type_place: Option<Place>,
    pub same_aut_place: Option<Place>,
}

impl DiagramCheck {
    pub fn ok(&self) -> bool {
        self.aut_id == self.expected_aut_id && self.same_type_place.is_some() && self.same_aut_place.is_some()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ProbeSummary {
    pub instances: usize,
    pub locals_complete: usize,
    pub global_exists: usize,
    /// Locals all exist but no global isomorphism does.
    pub local_global_failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub bounds: Bounds,
    pub diagrams: usize,
    pub in_hypothesis_diagrams: usize,
    pub aut_id_mismatches: Vec<String>,
    pub same_type_failures: Vec<String>,
    pub same_aut_failures: Vec<String>,
    pub instances: usize,
    pub pass: usize,
    pub pass_by_type: BTreeMap<String, usize>,
    /// Passes where the involution correction was needed.
    pub used_involution: usize,
    /// Passes where a global automorphism matched the witness at the place.
    pub realigned: usize,
    pub vacuous: usize,
    pub counterexamples: Vec<InstanceOutcome>,
    pub probe: Option<ProbeSummary>,
    #[serde(skip)]
    pub counterexample_instances: Vec<Instance>,
}

impl CampaignReport {
    pub fn all_ok(&self) -> bool {
        self.counterexamples.is_empty()
            && self.aut_id_mismatches.is_empty()
            && self.same_type_failures.is_empty()
            && self.same_aut_failures.is_empty()
    }
}

fn check_diagram(label: &str, d: &crate::deldyn::DeligneDynkinDiagram) -> Result<DiagramCheck> {
    let family = ChebotarevFamily::new(d.base().group());
    Ok(DiagramCheck {
        label: label.to_string(),
        ty: d.type_of()?,
        aut_id: d.aut_id()?.len(),
        expected_aut_id: d.expected_aut_id_count()?,
        same_type_place: locally_same_type(d, &family)?,
        same_aut_place: locally_same_aut(d, &family)?,
    })
}

fn check_instance(diagrams: &[LabelledDiagram], spec: &PairSpec) -> Result<(InstanceOutcome, Instance)> {
    let inst = spec.build(diagrams)?;
    let family = ChebotarevFamily::new(&inst.joint_group());
    let (verdict, res) = verify_theorem_detailed(&inst, &family)?;
    let detail = match res {
        Some(r) => Some((inst.d1.type_of()?, r.used_involution, r.realigned)),
        None => None,
    };
    Ok((
        InstanceOutcome {
            label: inst.label.clone(),
            verdict,
            detail,
        },
        inst,
    ))
}

/// Runs every check over the family within `bounds`. Results do not depend
/// on `jobs`. With `explore`, out-of-hypothesis pairs are probed as well.
pub fn run_campaign(bounds: &Bounds, jobs: usize, explore: bool) -> Result<CampaignReport> {
    let diagrams = enumerate_diagrams(bounds)?;
    let isp: Vec<_> = diagrams.iter().filter(|d| d.ty.is_symplectic_populated()).collect();
    let checks = par_map(jobs, &isp, |d| check_diagram(&d.label, &d.diagram))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut report = CampaignReport {
        bounds: bounds.clone(),
        diagrams: diagrams.len(),
        in_hypothesis_diagrams: isp.len(),
        aut_id_mismatches: Vec::new(),
        same_type_failures: Vec::new(),
        same_aut_failures: Vec::new(),
        instances: 0,
        pass: 0,
        pass_by_type: BTreeMap::new(),
        used_involution: 0,
        realigned: 0,
        vacuous: 0,
        counterexamples: Vec::new(),
        probe: None,
        counterexample_instances: Vec::new(),
    };
    for c in &checks {
        if c.aut_id != c.expected_aut_id {
            report.aut_id_mismatches.push(format!(
                "{}: {} automorphisms, expected {}",
                c.label, c.aut_id, c.expected_aut_id
            ));
        }
        if c.same_type_place.is_none() {
            report.same_type_failures.push(c.label.clone());
        }
        if c.same_aut_place.is_none() {
            report.same_aut_failures.push(c.label.clone());
        }
    }

    let specs = pair_specs(&diagrams, true);
    report.instances = specs.len();
    // keep only what the report needs so memory stays flat
    let outcomes = par_map(jobs, &specs, |spec| {
        check_instance(&diagrams, spec).map(|(o, inst)| match o.verdict {
            Verdict::Counterexample { .. } => (o, Some(inst)),
            _ => (o, None),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    for (o, inst) in outcomes {
        match o.verdict {
            Verdict::Pass => {
                report.pass += 1;
                if let Some((ty, inv, re)) = o.detail {
                    *report.pass_by_type.entry(ty.to_string()).or_default() += 1;
                    report.used_involution += usize::from(inv);
                    report.realigned += usize::from(re);
                }
            }
            Verdict::Vacuous { .. } => report.vacuous += 1,
            Verdict::Counterexample { .. } => {
                report.counterexamples.push(o);
                report.counterexample_instances.extend(inst);
            }
        }
    }

    if explore {
        let probes = pair_specs(&diagrams, false);
        let results = par_map(jobs, &probes, |spec| {
            let inst = spec.build(&diagrams)?;
            probe(&inst, &ChebotarevFamily::new(&inst.joint_group()))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let mut s = ProbeSummary {
            instances: probes.len(),
            ..Default::default()
        };
        for r in results {
            s.locals_complete += usize::from(r.locals_complete);
            s.global_exists += usize::from(r.global_exists);
            s.local_global_failures += usize::from(r.locals_complete && !r.global_exists);
        }
        report.probe = Some(s);
    }
    Ok(report)
}
