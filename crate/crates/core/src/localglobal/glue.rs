//! The gluing algorithm and its independent re-verification.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use super::{image, restricted_base, ChebotarevFamily, Instance, LocalWitnessSet};
use crate::deldyn::{DeligneDynkinDiagram, DiagramType};
use crate::error::{Error, Result};
use crate::gaction::{
    for_each_equivariant_bijection, for_each_equivariant_isom, is_equivariant_isom, ComponentMap, EquivariantDiagram,
};
use crate::perm::{Perm, PermGroup};

/// A local group together with one of its irreducible pieces, given by the
/// components of `Delta_1` it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Place {
    pub local: usize,
    pub generator: Perm,
    pub components: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GlueResult {
    pub phi: Perm,
    /// A place where `phi` agrees with the local witness.
    pub place: Place,
    /// Whether `phi` was replaced by `tau_2 ∘ phi`.
    pub used_involution: bool,
    /// Whether a global automorphism was applied to match the witness at
    /// the place.
    pub realigned: bool,
    pub log: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    SameType,
    UniqueMap,
    LocalUSets,
    USetBijection,
    Extension,
    MuAdjustment,
    Propagation,
    Place,
}

/// Where and why gluing broke down. On an in-hypothesis instance this
/// contradicts the gluing argument in the finite model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueFailure {
    pub stage: Stage,
    pub message: String,
}

impl fmt::Display for GlueFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.stage, self.message)
    }
}

#[derive(Clone, Debug)]
pub enum GlueOutcome {
    Glued(GlueResult),
    Failed(GlueFailure),
}

impl GlueOutcome {
    pub fn result(&self) -> Option<&GlueResult> {
        match self {
            GlueOutcome::Glued(r) => Some(r),
            GlueOutcome::Failed(_) => None,
        }
    }
}

enum Stop {
    Fail(GlueFailure),
    Err(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Err(e)
    }
}

type Step<T> = std::result::Result<T, Stop>;

fn fail<T>(stage: Stage, message: impl Into<String>) -> Step<T> {
    Err(Stop::Fail(GlueFailure {
        stage,
        message: message.into(),
    }))
}

fn isp_type(d: &DeligneDynkinDiagram, side: &str) -> Result<DiagramType> {
    let t = d.type_of()?;
    if t.is_symplectic_populated() {
        Ok(t)
    } else {
        Err(Error::precondition(format!("{side} diagram has type {t}")))
    }
}

fn check_family(inst: &Instance, family: &ChebotarevFamily) -> Result<()> {
    let joint = inst.joint_group();
    let base = family.base();
    if base.degree() != joint.degree() || base.order() != joint.order() || !base.contains_group(&joint) {
        return Err(Error::input("the family is not over the joint group of the instance"));
    }
    Ok(())
}

/// Builds a global isomorphism from complete local witnesses.
///
/// Stages: same type; for `B`/`C` the unique map over `f`; otherwise an
/// isomorphism of determining subsets, its extension, the involution
/// correction and propagation of `mu` along orbits; finally a place where
/// the result agrees with the local witness.
pub fn glue(inst: &Instance, family: &ChebotarevFamily, witnesses: &LocalWitnessSet) -> Result<GlueOutcome> {
    check_family(inst, family)?;
    if witnesses.len() != family.len() {
        return Err(Error::input("witness set does not match the family"));
    }
    if let Some(i) = witnesses.first_missing() {
        return Err(Error::precondition(format!("no local isomorphism at local {i}")));
    }
    let t1 = isp_type(&inst.d1, "first")?;
    let t2 = isp_type(&inst.d2, "second")?;
    let mut g = Gluer {
        inst,
        family,
        w: witnesses,
        log: Vec::new(),
        used_involution: false,
    };
    match g.run(t1, t2) {
        Ok((phi, place, realigned)) => Ok(GlueOutcome::Glued(GlueResult {
            phi,
            place,
            used_involution: g.used_involution,
            realigned,
            log: g.log,
        })),
        Err(Stop::Fail(f)) => Ok(GlueOutcome::Failed(f)),
        Err(Stop::Err(e)) => Err(e),
    }
}

struct Gluer<'a> {
    inst: &'a Instance,
    family: &'a ChebotarevFamily,
    w: &'a LocalWitnessSet,
    log: Vec<String>,
    used_involution: bool,
}

impl Gluer<'_> {
    fn d1(&self) -> &DeligneDynkinDiagram {
        &self.inst.d1
    }

    fn d2(&self) -> &DeligneDynkinDiagram {
        &self.inst.d2
    }

    fn f(&self) -> &ComponentMap {
        &self.inst.f
    }

    fn psi(&self, local: usize) -> &Perm {
        self.w.get(local).expect("witnesses are complete")
    }

    fn claim(&self, ok: bool, stage: Stage, what: impl FnOnce() -> String) -> Step<()> {
        if ok {
            Ok(())
        } else {
            fail(stage, what())
        }
    }

    /// First joint element, in group order, satisfying `pred(g1, g2)`, and
    /// the local it generates.
    fn chebotarev(&self, pred: impl Fn(&Perm, &Perm) -> bool) -> Option<(Perm, Perm, usize)> {
        self.family.base().elements().iter().find_map(|g| {
            let (g1, g2) = self.inst.split(g);
            if pred(&g1, &g2) {
                let local = self.family.local_of(g).expect("family holds every cyclic subgroup");
                Some((g1, g2, local))
            } else {
                None
            }
        })
    }

    fn run(&mut self, t1: DiagramType, t2: DiagramType) -> Step<(Perm, Place, bool)> {
        if t1 != t2 {
            return fail(Stage::SameType, format!("types {t1} and {t2} differ"));
        }
        self.log.push(format!("both diagrams have type {t1}"));
        let phi = match t1 {
            DiagramType::B(_) | DiagramType::C(_) => self.unique_map()?,
            _ => {
                let phi = self.via_u_sets(t1)?;
                self.fix_mu(t1, phi)?
            }
        };
        if image(&phi, self.d1().mu()) != *self.d2().mu() {
            return fail(Stage::MuAdjustment, "final map does not carry mu_1 onto mu_2");
        }
        self.place(phi)
    }

    fn unique_map(&mut self) -> Step<Perm> {
        let mut found = Vec::new();
        for_each_equivariant_isom(self.d1().base(), self.d2().base(), self.f(), &|_, _| true, &mut |p| {
            found.push(p.clone());
            if found.len() == 2 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if found.len() != 1 {
            return fail(
                Stage::UniqueMap,
                format!("expected exactly one equivariant map over f, found {}", found.len()),
            );
        }
        let phi = found.pop().unwrap();
        if image(&phi, self.d1().mu()) != *self.d2().mu() {
            return fail(Stage::UniqueMap, "the unique map does not carry mu_1 onto mu_2");
        }
        self.log.push(format!("unique map over f: {phi}"));
        Ok(phi)
    }

    fn via_u_sets(&mut self, t: DiagramType) -> Step<Perm> {
        let u1 = self.d1().u_set()?;
        let u2 = self.d2().u_set()?;
        let forced_by_topology = matches!(t, DiagramType::A(_)) || matches!(t, DiagramType::DR(n) if n >= 5);
        for (i, l) in self.family.locals().iter().enumerate() {
            let (g1, g2) = self.inst.split(&l.generator);
            let e1 = restricted_base(self.d1().base(), &g1)?;
            let e2 = restricted_base(self.d2().base(), &g2)?;
            if first_bijection(&e1, &u1, &e2, &u2, self.f())?.is_none() {
                return fail(Stage::LocalUSets, format!("U-sets are not isomorphic over local {i}"));
            }
            if forced_by_topology {
                let psi = self.psi(i);
                self.claim(image(psi, &u1) == u2, Stage::LocalUSets, || {
                    format!("witness at local {i} does not carry U_1 onto U_2")
                })?;
            }
        }
        if matches!(t, DiagramType::DH(n) if n >= 5) {
            self.dh_degrees(&u1, &u2)?;
        }
        self.log.push("U-sets are locally isomorphic at every local".into());

        let Some(beta) = first_bijection(self.d1().base(), &u1, self.d2().base(), &u2, self.f())? else {
            return fail(Stage::USetBijection, "no equivariant bijection U_1 -> U_2 over f");
        };
        let n = self.d1().node_count();
        let mut fixed = vec![None; n];
        for &(v, x) in &beta {
            fixed[v] = Some(x);
        }
        self.log.push(format!("U-set bijection {beta:?}"));
        let allowed = |v: usize, x: usize| match fixed[v] {
            Some(y) => x == y,
            None => !u2.contains(&x),
        };
        let mut phi = None;
        for_each_equivariant_isom(self.d1().base(), self.d2().base(), self.f(), &allowed, &mut |p| {
            phi = Some(p.clone());
            ControlFlow::Break(())
        })?;
        match phi {
            Some(p) => {
                self.log.push(format!("extended to {p}"));
                Ok(p)
            }
            None => fail(Stage::Extension, "the U-set bijection does not extend to the diagrams"),
        }
    }

    /// For `D_n^H`, `n >= 5`: the degrees of `mu-bar` agree, and a degree-2
    /// side is seen by a local group moving `alpha` to its partner.
    fn dh_degrees(&mut self, u1: &BTreeSet<usize>, u2: &BTreeSet<usize>) -> Step<()> {
        let deg1 = self.d1().base().uniform_degree(u1)?;
        let deg2 = self.d2().base().uniform_degree(u2)?;
        for (side, deg) in [(1, deg1), (2, deg2)] {
            if deg != Some(2) {
                continue;
            }
            let (da, db) = if side == 1 {
                (self.d1(), self.d2())
            } else {
                (self.d2(), self.d1())
            };
            let alpha = *da.mu().first().unwrap();
            let comp = da.base().diagram().component_of(alpha);
            let ubar = da.mu_closure();
            let beta = *ubar
                .iter()
                .find(|&&v| v != alpha && da.base().diagram().component_of(v) == comp)
                .unwrap();
            let Some((g1, g2, local)) = self.chebotarev(|g1, g2| {
                let g = if side == 1 { g1 } else { g2 };
                g.apply(alpha) == beta
            }) else {
                return fail(Stage::LocalUSets, format!("no group element moves {alpha} to {beta}"));
            };
            // psi and its inverse play symmetric roles
            let psi = if side == 1 {
                self.psi(local).clone()
            } else {
                self.psi(local).inverse()
            };
            let g_other = if side == 1 { &g2 } else { &g1 };
            let other_mu = db.mu();
            let other_bar = db.mu_closure();
            self.claim(
                other_mu.contains(&psi.apply(alpha))
                    && psi.apply(beta) == g_other.apply(psi.apply(alpha))
                    && other_bar.contains(&psi.apply(beta)),
                Stage::LocalUSets,
                || format!("local {local} does not transport the pair {{{alpha}, {beta}}} into mu-bar"),
            )?;
        }
        self.claim(deg1 == deg2, Stage::LocalUSets, || {
            format!("mu-bar has degree {deg1:?} on one side and {deg2:?} on the other")
        })
    }

    /// The unique non-trivial equivariant involution in `Aut_id(Delta)`,
    /// preserving `mu-bar` when `d4`.
    fn canonical_involution(&self, d: &DeligneDynkinDiagram, d4: bool) -> Step<Perm> {
        let keep = if d4 { d.mu_closure() } else { BTreeSet::new() };
        let id = ComponentMap::identity(d.base().diagram().components().len());
        let mut found = Vec::new();
        for_each_equivariant_isom(
            d.base(),
            d.base(),
            &id,
            &|v, x| keep.contains(&v) == keep.contains(&x),
            &mut |p| {
                if !p.is_identity() {
                    found.push(p.clone());
                }
                ControlFlow::Continue(())
            },
        )?;
        if found.len() != 1 || found[0].order() != 2 {
            return fail(
                Stage::MuAdjustment,
                format!("expected one non-trivial equivariant involution, found {}", found.len()),
            );
        }
        Ok(found.pop().unwrap())
    }

    fn fix_mu(&mut self, t: DiagramType, phi: Perm) -> Step<Perm> {
        let forced = match t {
            DiagramType::A(1) | DiagramType::DR(_) => true,
            DiagramType::A(_) => self.d1().mu_fixed_by_opposition()?,
            _ => false,
        };
        let (mu1, mu2) = (self.d1().mu().clone(), self.d2().mu().clone());
        if forced {
            self.claim(image(&phi, &mu1) == mu2, Stage::MuAdjustment, || {
                format!("topology should force phi(mu_1) = mu_2 for type {t}")
            })?;
            self.log.push("mu is matched without adjustment".into());
            return Ok(phi);
        }
        let d4 = t.is_d4();
        let tau1 = self.canonical_involution(self.d1(), d4)?;
        let tau2 = self.canonical_involution(self.d2(), d4)?;
        self.claim(phi.compose(&tau1) == tau2.compose(&phi), Stage::MuAdjustment, || {
            "phi does not intertwine the involutions".into()
        })?;
        let alpha = if d4 {
            mu1.first().copied()
        } else {
            mu1.iter().copied().find(|&a| tau1.apply(a) != a)
        };
        let Some(alpha) = alpha else {
            return fail(Stage::MuAdjustment, "every node of mu_1 is fixed by tau_1");
        };
        let mut phi = phi;
        if !mu2.contains(&phi.apply(alpha)) {
            phi = tau2.compose(&phi);
            self.used_involution = true;
            self.log
                .push(format!("replaced phi by tau_2 ∘ phi to send {alpha} into mu_2"));
        }
        for &a2 in &mu1 {
            if a2 == alpha {
                continue;
            }
            if d4 {
                self.propagate_d4(&phi, alpha, a2)?;
            } else {
                self.propagate(&phi, alpha, a2)?;
            }
        }
        Ok(phi)
    }

    /// `phi(alpha') = psi(alpha')` via a local group moving `alpha` into the
    /// component of `alpha'`, on which `phi` and `psi` then agree.
    fn propagate(&mut self, phi: &Perm, alpha: usize, a2: usize) -> Step<()> {
        let dg = self.d1().base().diagram();
        let target = dg.component_of(a2);
        let Some((g1, _, local)) = self.chebotarev(|g1, _| dg.component_of(g1.apply(alpha)) == target) else {
            return fail(
                Stage::Propagation,
                format!("no group element moves {alpha} into the component of {a2}"),
            );
        };
        let psi = self.psi(local).clone();
        self.claim(phi.apply(alpha) == psi.apply(alpha), Stage::Propagation, || {
            format!("phi and psi differ at {alpha} (local {local})")
        })?;
        let e1 = restricted_base(self.d1().base(), &g1)?;
        let lambda = piece_nodes(&e1, dg.component_of(alpha));
        self.claim(
            lambda.iter().all(|&v| phi.apply(v) == psi.apply(v)),
            Stage::Propagation,
            || format!("phi and psi differ on the piece of {alpha} at local {local}"),
        )?;
        self.claim(
            phi.apply(a2) == psi.apply(a2) && self.d2().mu().contains(&phi.apply(a2)),
            Stage::Propagation,
            || format!("phi({a2}) is not in mu_2"),
        )?;
        self.log.push(format!("mu node {a2} matched through local {local}"));
        Ok(())
    }

    fn propagate_d4(&mut self, phi: &Perm, alpha: usize, a2: usize) -> Step<()> {
        let base = self.d1().base();
        let dg = base.diagram();
        let mu2 = self.d2().mu().clone();
        if base.group().orbit(alpha).contains(&a2) {
            let Some((_, g2, local)) = self.chebotarev(|g1, _| g1.apply(alpha) == a2) else {
                return fail(Stage::Propagation, format!("no group element moves {alpha} to {a2}"));
            };
            let psi = self.psi(local).clone();
            self.claim(
                phi.apply(alpha) == psi.apply(alpha)
                    && phi.apply(a2) == g2.apply(phi.apply(alpha))
                    && psi.apply(a2) == g2.apply(psi.apply(alpha))
                    && phi.apply(a2) == psi.apply(a2)
                    && mu2.contains(&psi.apply(a2)),
                Stage::Propagation,
                || format!("same-orbit computation fails for {alpha} -> {a2} at local {local}"),
            )?;
            self.log
                .push(format!("mu node {a2} matched through local {local} (same orbit)"));
            return Ok(());
        }
        let s1 = self.d1().symplectic_set()?;
        let ubar = self.d1().mu_closure();
        let partner = |a: usize| -> Option<(usize, usize)> {
            let c = dg.component_of(a);
            let ext = dg.extremal_nodes(c);
            let s = ext.iter().copied().find(|v| s1.contains(v))?;
            let b = ext.iter().copied().find(|&v| v != a && v != s && ubar.contains(&v))?;
            Some((s, b))
        };
        let (Some((s, beta)), Some((_, beta2))) = (partner(alpha), partner(a2)) else {
            return fail(Stage::Propagation, "extremal nodes do not split as mu-bar and S");
        };
        let Some((g1, _, local)) = self.chebotarev(|g1, _| g1.apply(alpha) == beta2) else {
            return fail(Stage::Propagation, format!("no group element moves {alpha} to {beta2}"));
        };
        let psi = self.psi(local).clone();
        let steps = [
            (psi.apply(s) == phi.apply(s), "phi(s) = psi(s)"),
            (phi.apply(alpha) == psi.apply(alpha), "phi(alpha) = psi(alpha)"),
            (phi.apply(beta) == psi.apply(beta), "phi(beta) = psi(beta)"),
            (g1.apply(beta) == a2, "g beta = alpha'"),
            (phi.apply(a2) == psi.apply(a2), "phi(alpha') = psi(alpha')"),
            (mu2.contains(&psi.apply(a2)), "psi(alpha') in mu_2"),
        ];
        for (ok, what) in steps {
            self.claim(ok, Stage::Propagation, || format!("{what} fails at local {local}"))?;
        }
        self.log
            .push(format!("mu node {a2} matched through local {local} (other orbit)"));
        Ok(())
    }

    /// The first local piece whose automorphism group matches the global
    /// one; a global automorphism then aligns `phi` with the witness there.
    fn place(&mut self, phi: Perm) -> Step<(Perm, Place, bool)> {
        let global = self.d1().aut_id()?.len();
        let aut2 = self.d2().aut_id()?;
        for (i, l) in self.family.locals().iter().enumerate() {
            let (g1, _) = self.inst.split(&l.generator);
            let h = PermGroup::new(g1.degree(), vec![g1])?;
            for piece in self.d1().local_components(&h)? {
                if piece.diagram.aut_id()?.len() != global {
                    continue;
                }
                let psi = self.psi(i);
                for sigma in &aut2 {
                    let cand = sigma.compose(&phi);
                    if piece.nodes.iter().all(|&v| cand.apply(v) == psi.apply(v)) {
                        let realigned = !sigma.is_identity();
                        if realigned {
                            self.log.push(format!("realigned by the automorphism {sigma}"));
                        }
                        self.log.push(format!(
                            "agrees with the witness at local {i} on components {:?}",
                            piece.components
                        ));
                        let place = Place {
                            local: i,
                            generator: l.generator.clone(),
                            components: piece.components,
                        };
                        return Ok((cand, place, realigned));
                    }
                }
                return fail(
                    Stage::Place,
                    format!("no global automorphism aligns phi with the witness at local {i}"),
                );
            }
        }
        fail(
            Stage::Place,
            "no local piece has as many automorphisms as the global diagram",
        )
    }
}

/// Nodes of the irreducible piece containing component `c`.
fn piece_nodes(e: &EquivariantDiagram, c: usize) -> BTreeSet<usize> {
    let d = e.diagram();
    let orbit = e
        .pi0()
        .orbits
        .into_iter()
        .find(|o| o.contains(&c))
        .expect("every component lies in an orbit");
    orbit.iter().flat_map(|&k| d.component(k).nodes.clone()).collect()
}

fn first_bijection(
    e1: &EquivariantDiagram,
    s1: &BTreeSet<usize>,
    e2: &EquivariantDiagram,
    s2: &BTreeSet<usize>,
    f: &ComponentMap,
) -> Result<Option<Vec<(usize, usize)>>> {
    let mut found = None;
    for_each_equivariant_bijection(e1, s1, e2, s2, f, &mut |pairs| {
        found = Some(pairs.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Checks a glue result from scratch. Returns the list of violated
/// conditions (empty when sound).
pub fn verify_glue(
    inst: &Instance,
    family: &ChebotarevFamily,
    witnesses: &LocalWitnessSet,
    res: &GlueResult,
) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let phi = &res.phi;
    if !is_equivariant_isom(inst.d1.base(), inst.d2.base(), &inst.f, phi) {
        problems.push("phi is not an equivariant isomorphism over f".to_string());
    }
    if image(phi, inst.d1.mu()) != *inst.d2.mu() {
        problems.push("phi does not carry mu_1 onto mu_2".to_string());
    }
    let place = &res.place;
    let Some(local) = family.locals().get(place.local) else {
        problems.push(format!("place refers to missing local {}", place.local));
        return Ok(problems);
    };
    if local.generator != place.generator {
        problems.push("place generator does not match the family".to_string());
    }
    let (g1, _) = inst.split(&local.generator);
    let h = PermGroup::new(g1.degree(), vec![g1])?;
    let pieces = inst.d1.local_components(&h)?;
    let Some(piece) = pieces.iter().find(|p| p.components == place.components) else {
        problems.push(format!("components {:?} are not a local piece", place.components));
        return Ok(problems);
    };
    match witnesses.get(place.local) {
        Some(psi) => {
            if piece.nodes.iter().any(|&v| phi.apply(v) != psi.apply(v)) {
                problems.push("phi and psi differ on the reported piece".to_string());
            }
        }
        None => problems.push("no witness at the reported place".to_string()),
    }
    let local_aut = piece.diagram.aut_id()?.len();
    let global_aut = inst.d1.aut_id()?.len();
    if local_aut != global_aut {
        problems.push(format!(
            "piece has {local_aut} automorphisms but the global diagram has {global_aut}"
        ));
    }
    Ok(problems)
}

/// A place whose piece has the type of `d`, over the family of `d`'s own
/// group.
pub fn locally_same_type(d: &DeligneDynkinDiagram, family: &ChebotarevFamily) -> Result<Option<Place>> {
    let t = d.type_of()?;
    first_piece(d, family, |p| Ok(p.type_of()? == t))
}

/// A place whose piece has as many automorphisms over the identity as `d`.
pub fn locally_same_aut(d: &DeligneDynkinDiagram, family: &ChebotarevFamily) -> Result<Option<Place>> {
    let n = d.aut_id()?.len();
    first_piece(d, family, |p| Ok(p.aut_id()?.len() == n))
}

fn first_piece(
    d: &DeligneDynkinDiagram,
    family: &ChebotarevFamily,
    pred: impl Fn(&DeligneDynkinDiagram) -> Result<bool>,
) -> Result<Option<Place>> {
    for (i, l) in family.locals().iter().enumerate() {
        let h = PermGroup::new(l.generator.degree(), vec![l.generator.clone()])?;
        for piece in d.local_components(&h)? {
            if pred(&piece.diagram)? {
                return Ok(Some(Place {
                    local: i,
                    generator: l.generator.clone(),
                    components: piece.components,
                }));
            }
        }
    }
    Ok(None)
}
