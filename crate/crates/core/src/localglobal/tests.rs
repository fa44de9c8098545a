use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use super::*;
use crate::deldyn::DiagramType;
use crate::rootsys::{DynkinDiagram, Family, SimpleType};

fn ddd(spec: &[&str], gens: &[&str], mu: &[usize]) -> DeligneDynkinDiagram {
    let types: Vec<SimpleType> = spec.iter().map(|s| s.parse().unwrap()).collect();
    let d = DynkinDiagram::build(&types);
    let n = d.node_count();
    let gens = gens.iter().map(|s| Perm::from_cycles(s, n).unwrap()).collect();
    let base = EquivariantDiagram::new(d, PermGroup::new(n, gens).unwrap()).unwrap();
    DeligneDynkinDiagram::checked(base, mu.iter().copied().collect()).unwrap()
}

fn inst(d1: DeligneDynkinDiagram, d2: DeligneDynkinDiagram) -> Instance {
    let m = d1.base().diagram().components().len();
    Instance::new("test", d1, d2, ComponentMap::identity(m)).unwrap()
}

fn small() -> Bounds {
    Bounds {
        max_order: 8,
        max_rank: 4,
        families: vec![Family::A, Family::B, Family::C, Family::D],
        max_components: 2,
    }
}

#[test]
fn family_sizes() {
    // trivial: 1; C3: trivial and C3; S3: trivial, three C2, one C3
    assert_eq!(chebotarev_family(&PermGroup::trivial(3)).len(), 1);
    let c3 = PermGroup::new(3, vec![Perm::from_cycles("(0 1 2)", 3).unwrap()]).unwrap();
    assert_eq!(chebotarev_family(&c3).len(), 2);
    let s3 = PermGroup::new(
        3,
        vec![
            Perm::from_cycles("(0 1)", 3).unwrap(),
            Perm::from_cycles("(0 1 2)", 3).unwrap(),
        ],
    )
    .unwrap();
    let fam = chebotarev_family(&s3);
    assert_eq!(fam.len(), 5);
    assert!(fam.locals()[0].generator.is_identity());
    for g in s3.elements() {
        assert!(fam.local_of(g).is_some());
        assert!(fam.local_containing(g).is_some());
    }
}

#[test]
fn oracle_examples() {
    let d = ddd(&["D4"], &["(0 2)"], &[0]);
    let f = ComponentMap::identity(1);
    assert!(decide_isom_oracle(&d, &d, &f).unwrap().unwrap().is_identity());
    let b3 = ddd(&["B3"], &[], &[0]);
    let c3 = ddd(&["C3"], &[], &[2]);
    assert_eq!(decide_isom_oracle(&b3, &c3, &f).unwrap(), None);
    // same group: mu-bar of degree 1 versus 2
    let dr = ddd(&["D4"], &["(0 2)"], &[3]);
    assert_eq!(dr.type_of().unwrap(), DiagramType::DR(4));
    assert_eq!(d.type_of().unwrap(), DiagramType::DH(4));
    assert_eq!(decide_isom_oracle(&dr, &d, &f).unwrap(), None);
}

#[test]
fn b_versus_c_is_vacuous() {
    let i = inst(ddd(&["B3"], &[], &[0]), ddd(&["C3"], &[], &[2]));
    let fam = ChebotarevFamily::new(&i.joint_group());
    assert_eq!(verify_theorem(&i, &fam).unwrap(), Verdict::Vacuous { missing_local: 0 });
}

#[test]
fn trivial_group_returns_the_local_witness() {
    let d1 = ddd(&["A3"], &[], &[0]);
    let d2 = ddd(&["A3"], &[], &[2]);
    let i = inst(d1, d2);
    let fam = ChebotarevFamily::new(&i.joint_group());
    assert_eq!(fam.len(), 1);
    let w = LocalWitnessSet::compute(&i, &fam).unwrap();
    let psi = w.get(0).unwrap().clone();
    let GlueOutcome::Glued(res) = glue(&i, &fam, &w).unwrap() else {
        panic!("glue failed")
    };
    assert_eq!(res.phi, psi);
    assert!(verify_glue(&i, &fam, &w, &res).unwrap().is_empty());
}

#[test]
fn b3_unique_map_matches_oracle() {
    let d = ddd(&["B3", "B3"], &["(0 3)(1 4)(2 5)"], &[0]);
    let d2 = ddd(&["B3", "B3"], &["(0 3)(1 4)(2 5)"], &[3]);
    let i = Instance::new("b3", d, d2, ComponentMap::new(vec![1, 0]).unwrap()).unwrap();
    let fam = ChebotarevFamily::new(&i.joint_group());
    let w = LocalWitnessSet::compute(&i, &fam).unwrap();
    assert!(w.is_complete());
    let res = glue(&i, &fam, &w).unwrap();
    let res = res.result().expect("glued");
    assert_eq!(Some(res.phi.clone()), decide_isom_oracle(&i.d1, &i.d2, &i.f).unwrap());
    assert_eq!(verify_theorem(&i, &fam).unwrap(), Verdict::Pass);
}

#[test]
fn d4h_over_c2_agrees_at_the_place() {
    let d = ddd(&["D4"], &["(0 2)"], &[0]);
    let d2 = ddd(&["D4"], &["(0 2)"], &[2]);
    let i = inst(d, d2);
    let fam = ChebotarevFamily::new(&i.joint_group());
    let w = LocalWitnessSet::compute(&i, &fam).unwrap();
    let GlueOutcome::Glued(res) = glue(&i, &fam, &w).unwrap() else {
        panic!("glue failed")
    };
    let psi = w.get(res.place.local).unwrap();
    for c in &res.place.components {
        for v in i.d1.base().diagram().component(*c).nodes.clone() {
            assert_eq!(res.phi.apply(v), psi.apply(v));
        }
    }
    assert!(verify_glue(&i, &fam, &w, &res).unwrap().is_empty());
}

#[test]
fn missing_witness_is_a_precondition_error() {
    let i = inst(ddd(&["B3"], &[], &[0]), ddd(&["C3"], &[], &[2]));
    let fam = ChebotarevFamily::new(&i.joint_group());
    let w = LocalWitnessSet::compute(&i, &fam).unwrap();
    assert!(matches!(glue(&i, &fam, &w), Err(Error::Precondition(_))));
}

#[test]
fn witnesses_are_checked_on_storage() {
    let d = ddd(&["A3"], &[], &[0]);
    let i = inst(d.clone(), d);
    let fam = ChebotarevFamily::new(&i.joint_group());
    let bad = Perm::from_cycles("(0 2)", 3).unwrap();
    assert!(LocalWitnessSet::new(&i, &fam, vec![Some(bad)]).is_err());
    assert!(LocalWitnessSet::new(&i, &fam, vec![Some(Perm::identity(3))]).is_ok());
}

#[test]
fn tampered_results_fail_reverification() {
    let d = ddd(&["A3", "A3"], &["(0 5)(1 4)(2 3)"], &[0]);
    let i = inst(d.clone(), d);
    let fam = ChebotarevFamily::new(&i.joint_group());
    let w = LocalWitnessSet::compute(&i, &fam).unwrap();
    let GlueOutcome::Glued(mut res) = glue(&i, &fam, &w).unwrap() else {
        panic!("glue failed")
    };
    res.phi = Perm::from_cycles("(0 2)", 6).unwrap();
    assert!(!verify_glue(&i, &fam, &w, &res).unwrap().is_empty());
}

#[test]
fn single_a1_family() {
    let b = Bounds {
        max_order: 1,
        max_rank: 1,
        families: vec![Family::A],
        max_components: 1,
    };
    let all = enumerate_instances(&b).unwrap();
    assert_eq!(all.len(), 1);
    assert_eq!(all[0].d1.type_of().unwrap(), DiagramType::A(1));
}

#[test]
fn triality_diagrams_are_enumerated() {
    let b = Bounds {
        max_order: 3,
        max_rank: 4,
        families: vec![Family::D],
        max_components: 1,
    };
    let diagrams = enumerate_diagrams(&b).unwrap();
    let triality = diagrams.iter().find(|d| {
        d.diagram
            .base()
            .group()
            .elements()
            .iter()
            .any(|g| g.cycles().iter().any(|c| c.len() == 3))
    });
    let t = triality.expect("a 3-cycle on the outer nodes");
    assert_eq!(t.diagram.base().diagram().node_count(), 4);
    assert!(enumerate_probe_instances(&b)
        .unwrap()
        .iter()
        .any(|i| i.label.starts_with("C3/")));
}

#[test]
fn enumeration_is_deterministic() {
    let a: Vec<String> = small_instances().iter().map(|i| i.label.clone()).collect();
    let b: Vec<String> = enumerate_instances(&small())
        .unwrap()
        .into_iter()
        .map(|i| i.label)
        .collect();
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn catalogue_groups() {
    let cat = group_catalogue(24);
    let names: BTreeSet<&str> = cat.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names.len(), cat.len());
    // every group of order at most 12: 1,1,1,2,1,2,1,5,2,2,1,5
    assert_eq!(cat.iter().filter(|g| g.group.order() <= 12).count(), 24);
    let order = |n: &str| cat.iter().find(|g| g.name == n).unwrap().group.order();
    assert_eq!(order("Q8"), 8);
    assert_eq!(order("Dic3"), 12);
    assert_eq!(order("SL(2,3)"), 24);
    assert_eq!(order("C2xA4"), 24);
    let involutions = |n: &str| {
        cat.iter()
            .find(|g| g.name == n)
            .unwrap()
            .group
            .elements()
            .iter()
            .filter(|p| p.order() == 2)
            .count()
    };
    // Q8 and SL(2,3) have a unique involution, D4 has five
    assert_eq!(involutions("Q8"), 1);
    assert_eq!(involutions("SL(2,3)"), 1);
    assert_eq!(involutions("D4"), 5);
    assert_eq!(involutions("Dic3"), 1);
}

#[test]
fn restriction_can_turn_dh_into_dr() {
    // C2 x C2 swapping two D4's and acting by (0 2) on both
    let d = ddd(&["D4", "D4"], &["(0 4)(1 5)(2 6)(3 7)", "(0 2)(4 6)"], &[0]);
    assert_eq!(d.type_of().unwrap(), DiagramType::DH(4));
    let fam = ChebotarevFamily::new(d.base().group());
    let saw_dr = fam.locals().iter().any(|l| {
        let h = PermGroup::new(8, vec![l.generator.clone()]).unwrap();
        d.local_components(&h)
            .unwrap()
            .iter()
            .any(|p| p.diagram.type_of().ok() == Some(DiagramType::DR(4)))
    });
    assert!(saw_dr);
    assert!(locally_same_type(&d, &fam).unwrap().is_some());
}

#[test]
fn conjugate_locals_carry_conjugate_witnesses() {
    let d = ddd(&["A2", "A2", "A2"], &["(0 2 4)(1 3 5)", "(0 3)(1 2)(4 5)"], &[0]);
    let i = inst(d.clone(), d);
    let joint = i.joint_group();
    let fam = ChebotarevFamily::new(&joint);
    let w = LocalWitnessSet::compute(&i, &fam).unwrap();
    for (k, l) in fam.locals().iter().enumerate() {
        let psi = w.get(k).unwrap();
        for x in joint.elements() {
            let conj = x.inverse().then(&l.generator).then(x);
            let c = fam.local_of(&conj).unwrap();
            let (x1, x2) = i.split(x);
            let moved = x1.inverse().then(psi).then(&x2);
            let (l1, l2) = i.restrict(&fam.locals()[c].generator).unwrap();
            assert!(is_deldyn_isom(&l1, &l2, &i.f, &moved));
        }
    }
    assert_eq!(verify_theorem(&i, &fam).unwrap(), Verdict::Pass);
}

#[test]
fn small_campaign_is_clean_and_job_independent() {
    let a = run_campaign(&small(), 1, true).unwrap();
    let b = run_campaign(&small(), 3, true).unwrap();
    assert!(a.all_ok(), "{:?}", a.counterexamples);
    assert!(a.pass > 0 && a.vacuous > 0);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

fn small_instances() -> &'static [Instance] {
    static ALL: OnceLock<Vec<Instance>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_instances(&small()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn glue_agrees_with_oracle(pick in 0usize..10_000) {
        let all = small_instances();
        let i = &all[pick % all.len()];
        let fam = ChebotarevFamily::new(&i.joint_group());
        let w = LocalWitnessSet::compute(i, &fam).unwrap();
        let oracle = decide_isom_oracle(&i.d1, &i.d2, &i.f).unwrap();
        if w.is_complete() {
            let out = glue(i, &fam, &w).unwrap();
            prop_assert_eq!(out.result().is_some(), oracle.is_some());
            if let Some(res) = out.result() {
                prop_assert!(verify_glue(i, &fam, &w, res).unwrap().is_empty());
                prop_assert!(is_deldyn_isom(&i.d1, &i.d2, &i.f, &res.phi));
            }
        } else {
            // a global isomorphism restricts to every local group
            prop_assert!(oracle.is_none());
        }
    }
}
