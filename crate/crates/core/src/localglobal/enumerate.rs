//! Deterministic generation of test instances.
//!
//! A transitive action on `m` components is induced from a subgroup `H` of
//! index `m` and a homomorphism `H -> Aut(Delta_0)`. Diagrams are kept up to
//! isomorphism over the identity on components; pairs of diagrams over the
//! same induced component action form the instances.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{decide_isom_oracle, Instance};
use crate::deldyn::{DeligneDynkinDiagram, DiagramType};
use crate::error::Result;
use crate::gaction::{ComponentMap, EquivariantDiagram};
use crate::perm::{FiniteGroup, Perm, PermGroup};
use crate::rootsys::{diagram_automorphisms, special_nodes, DynkinDiagram, Family, SimpleType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_order: usize,
    /// Rank of each connected component.
    pub max_rank: usize,
    pub families: Vec<Family>,
    pub max_components: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_order: 24,
            max_rank: 4,
            families: vec![Family::A, Family::B, Family::C, Family::D],
            max_components: 3,
        }
    }
}

impl Bounds {
    /// Simple types within the bounds, without the coincidences
    /// `C2 = B2` and `D3 = A3`.
    pub fn simple_types(&self) -> Vec<SimpleType> {
        SimpleType::all_up_to(self.max_rank)
            .into_iter()
            .filter(|t| self.families.contains(&t.family))
            .filter(|t| !(t.family == Family::D && t.rank < 4))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CatalogueGroup {
    pub name: String,
    pub group: PermGroup,
}

fn cycles(n: usize, gens: &[&str]) -> PermGroup {
    let gens = gens
        .iter()
        .map(|s| Perm::from_cycles(s, n).expect("catalogue cycles"))
        .collect();
    PermGroup::new(n, gens).expect("catalogue degrees")
}

/// `SL(2, 3)` on the eight non-zero vectors of `F_3^2`.
fn sl23() -> PermGroup {
    let vecs: Vec<(u8, u8)> = (0..9u8).map(|i| (i / 3, i % 3)).filter(|&v| v != (0, 0)).collect();
    let act = |m: [[u8; 2]; 2]| {
        let images = vecs
            .iter()
            .map(|&(x, y)| {
                let v = ((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3);
                vecs.iter().position(|&w| w == v).unwrap()
            })
            .collect();
        Perm::from_images(images).unwrap()
    };
    PermGroup::new(8, vec![act([[1, 1], [0, 1]]), act([[0, 2], [1, 0]])]).unwrap()
}

/// Every group of order at most 12, plus `D8`, `C2 x D4`, `S4`, `SL(2,3)`
/// and `C2 x A4`; filtered by order.
pub fn group_catalogue(max_order: usize) -> Vec<CatalogueGroup> {
    let mut out: Vec<(String, PermGroup)> = Vec::new();
    for n in 1..=12 {
        out.push((format!("C{n}"), PermGroup::cyclic(n)));
    }
    out.push(("C2xC2".into(), cycles(4, &["(0 1)", "(2 3)"])));
    out.push(("S3".into(), PermGroup::dihedral(3)));
    out.push(("C2xC4".into(), cycles(6, &["(0 1)", "(2 3 4 5)"])));
    out.push(("C2xC2xC2".into(), cycles(6, &["(0 1)", "(2 3)", "(4 5)"])));
    out.push(("D4".into(), PermGroup::dihedral(4)));
    out.push(("Q8".into(), cycles(8, &["(0 1 2 3)(4 5 6 7)", "(0 4 2 6)(1 7 3 5)"])));
    out.push(("C3xC3".into(), cycles(6, &["(0 1 2)", "(3 4 5)"])));
    out.push(("D5".into(), PermGroup::dihedral(5)));
    out.push(("C2xC6".into(), cycles(7, &["(0 1)", "(2 3)", "(4 5 6)"])));
    out.push(("A4".into(), cycles(4, &["(0 1 2)", "(0 1)(2 3)"])));
    out.push(("D6".into(), PermGroup::dihedral(6)));
    out.push(("Dic3".into(), cycles(7, &["(0 1 2)", "(1 2)(3 4 5 6)"])));
    out.push(("D8".into(), PermGroup::dihedral(8)));
    out.push(("C2xD4".into(), cycles(6, &["(0 1 2 3)", "(1 3)", "(4 5)"])));
    out.push(("S4".into(), cycles(4, &["(0 1)", "(0 1 2 3)"])));
    out.push(("SL(2,3)".into(), sl23()));
    out.push(("C2xA4".into(), cycles(6, &["(0 1 2)", "(0 1)(2 3)", "(4 5)"])));
    out.sort_by_key(|(_, g)| g.order());
    out.into_iter()
        .filter(|(_, g)| g.order() <= max_order)
        .map(|(name, group)| CatalogueGroup { name, group })
        .collect()
}

/// A diagram with a stable description of how it was generated.
#[derive(Clone, Debug)]
pub struct LabelledDiagram {
    pub label: String,
    /// Diagrams with equal setup share the abstract group and the component
    /// action, so they can be paired.
    pub setup: usize,
    pub ty: DiagramType,
    pub diagram: DeligneDynkinDiagram,
}

/// Transitive component actions: a group, a subgroup and its cosets.
struct Setup {
    group_name: String,
    subgroup: usize,
    g: PermGroup,
    ft: FiniteGroup,
    /// Coset representatives, identity first.
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    h_members: Vec<usize>,
    h_gens: Vec<usize>,
}

fn setups(bounds: &Bounds) -> Vec<Setup> {
    let mut out = Vec::new();
    for cg in group_catalogue(bounds.max_order) {
        let ft = FiniteGroup::from_perm_group(cg.name.clone(), &cg.group);
        let n = ft.order();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut index = 0;
        for h in ft.all_subgroups() {
            if !n.is_multiple_of(h.len()) || n / h.len() > bounds.max_components || seen.contains(&h) {
                continue;
            }
            for x in 0..n {
                let mut conj: Vec<usize> = h.iter().map(|&y| ft.mul(ft.mul(x, y), ft.inv(x))).collect();
                conj.sort_unstable();
                seen.insert(conj);
            }
            let mut coset_of = vec![usize::MAX; n];
            let mut reps = Vec::new();
            for g in 0..n {
                if coset_of[g] == usize::MAX {
                    for &y in &h {
                        coset_of[ft.mul(g, y)] = reps.len();
                    }
                    reps.push(g);
                }
            }
            let mut h_gens = Vec::new();
            let mut span = vec![0usize];
            for &y in &h {
                if span.binary_search(&y).is_err() {
                    h_gens.push(y);
                    span = ft.generate(&h_gens);
                }
            }
            out.push(Setup {
                group_name: cg.name.clone(),
                subgroup: index,
                g: cg.group.clone(),
                ft: ft.clone(),
                reps,
                coset_of,
                h_members: h,
                h_gens,
            });
            index += 1;
        }
    }
    out
}

impl Setup {
    fn components(&self) -> usize {
        self.reps.len()
    }

    /// Every homomorphism `H -> aut`, as images indexed by element of `G`.
    fn homomorphisms(&self, aut: &PermGroup) -> Vec<Vec<Option<Perm>>> {
        let n = self.ft.order();
        let k = self.h_gens.len();
        let choices = aut.order();
        let mut out = Vec::new();
        let total = choices.pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let images: Vec<&Perm> = (0..k)
                .map(|_| {
                    let e = aut.element(c % choices);
                    c /= choices;
                    e
                })
                .collect();
            let mut t: Vec<Option<Perm>> = vec![None; n];
            t[0] = Some(Perm::identity(aut.degree()));
            let mut queue = vec![0usize];
            let mut ok = true;
            'bfs: while let Some(x) = queue.pop() {
                for (gi, &g) in self.h_gens.iter().enumerate() {
                    let y = self.ft.mul(x, g);
                    let ty = t[x].as_ref().unwrap().compose(images[gi]);
                    match &t[y] {
                        Some(p) if *p != ty => {
                            ok = false;
                            break 'bfs;
                        }
                        Some(_) => {}
                        None => {
                            t[y] = Some(ty);
                            queue.push(y);
                        }
                    }
                }
            }
            if ok {
                out.push(t);
            }
        }
        out
    }

    /// The action on `m` copies of a component induced from `t`.
    fn induced(&self, ty: SimpleType, t: &[Option<Perm>]) -> Result<EquivariantDiagram> {
        let m = self.components();
        let k = ty.rank;
        let d = DynkinDiagram::build(&vec![ty; m]);
        let gens = self
            .g
            .generators()
            .iter()
            .map(|s| {
                let si = self.g.index_of(s).expect("generator is an element");
                let mut images = vec![0; m * k];
                for (i, &r) in self.reps.iter().enumerate() {
                    let sr = self.ft.mul(si, r);
                    let j = self.coset_of[sr];
                    let h = self.ft.mul(self.ft.inv(self.reps[j]), sr);
                    let th = t[h].as_ref().expect("h lies in the subgroup");
                    for v in 0..k {
                        images[i * k + v] = j * k + th.apply(v);
                    }
                }
                Perm::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        EquivariantDiagram::new(d, PermGroup::new(m * k, gens)?)
    }
}

/// Isomorphism-invariant key used to avoid most oracle calls.
fn bucket_key(d: &DeligneDynkinDiagram, ty: DiagramType) -> (DiagramType, Vec<usize>, usize) {
    let mut orbit_sizes: Vec<usize> = d.base().group().orbits().iter().map(BTreeSet::len).collect();
    orbit_sizes.sort_unstable();
    (ty, orbit_sizes, d.mu_closure().len())
}

/// All valid diagrams within the bounds up to isomorphism over the
/// identity on components, in deterministic order.
pub fn enumerate_diagrams(bounds: &Bounds) -> Result<Vec<LabelledDiagram>> {
    let mut out = Vec::new();
    for (setup_id, s) in setups(bounds).iter().enumerate() {
        debug_assert!(s.h_members.contains(&0));
        let m = s.components();
        for ty in bounds.simple_types() {
            let d0 = DynkinDiagram::build(&[ty]);
            let aut = diagram_automorphisms(&d0).group;
            let mut reps: BTreeMap<(DiagramType, Vec<usize>, usize), Vec<DeligneDynkinDiagram>> = BTreeMap::new();
            let f = ComponentMap::identity(m);
            for (ti, t) in s.homomorphisms(&aut).iter().enumerate() {
                let base = s.induced(ty, t)?;
                let specials: Vec<Vec<usize>> = (0..m)
                    .map(|c| special_nodes(base.diagram(), c))
                    .collect::<Result<_>>()?;
                for mu in mu_choices(&specials) {
                    let d = DeligneDynkinDiagram::new(base.clone(), mu);
                    let kind = d.type_of()?;
                    let bucket = reps.entry(bucket_key(&d, kind)).or_default();
                    let mut new = true;
                    for r in bucket.iter() {
                        if decide_isom_oracle(r, &d, &f)?.is_some() {
                            new = false;
                            break;
                        }
                    }
                    if new {
                        bucket.push(d.clone());
                        let label = format!(
                            "{}/H{}/{}/T{}/mu{:?}",
                            s.group_name,
                            s.subgroup,
                            ty,
                            ti,
                            d.mu().iter().collect::<Vec<_>>()
                        );
                        out.push(LabelledDiagram {
                            label,
                            setup: setup_id,
                            ty: kind,
                            diagram: d,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// At most one special node per component, in lexicographic order of the
/// per-component choice (no node before any node).
fn mu_choices(specials: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    let mut out = vec![BTreeSet::new()];
    for s in specials {
        let mut next = Vec::with_capacity(out.len() * (s.len() + 1));
        for mu in &out {
            next.push(mu.clone());
            for &v in s {
                let mut m = mu.clone();
                m.insert(v);
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Equivariant component bijections between two diagrams of one setup.
pub fn component_maps(d1: &DeligneDynkinDiagram, d2: &DeligneDynkinDiagram) -> Vec<ComponentMap> {
    let m = d1.base().diagram().components().len();
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        let f = ComponentMap::new(p.clone()).expect("permutation");
        if f.is_equivariant(d1.base(), d2.base()) {
            out.push(f);
        }
        let Some(k) = (0..m.saturating_sub(1)).rev().find(|&k| p[k] < p[k + 1]) else {
            break;
        };
        let l = (k + 1..m).rev().find(|&l| p[l] > p[k]).unwrap();
        p.swap(k, l);
        p[k + 1..].reverse();
    }
    out
}

/// A pair of enumerated diagrams and a component map, built lazily.
#[derive(Clone, Debug)]
pub(crate) struct PairSpec {
    pub a: usize,
    pub b: usize,
    pub f: ComponentMap,
}

impl PairSpec {
    pub fn build(&self, diagrams: &[LabelledDiagram]) -> Result<Instance> {
        let (a, b) = (&diagrams[self.a], &diagrams[self.b]);
        let label = format!("{} | {} | f={:?}", a.label, b.label, self.f.images());
        Instance::new(label, a.diagram.clone(), b.diagram.clone(), self.f.clone())
    }
}

/// Instances: unordered pairs (including a diagram with itself) of
/// in-hypothesis diagrams of one setup and one simple type, over every
/// equivariant component map. Pairs of one diagram with itself under a
/// non-identity map are the twisted copies; pairs of different classes are
/// the genuinely different diagrams.
pub fn enumerate_instances(bounds: &Bounds) -> Result<Vec<Instance>> {
    let diagrams = enumerate_diagrams(bounds)?;
    pair_specs(&diagrams, true).iter().map(|p| p.build(&diagrams)).collect()
}

/// The same pairing among diagrams outside the hypotheses, over the
/// identity on components; used by the exploratory probe.
pub fn enumerate_probe_instances(bounds: &Bounds) -> Result<Vec<Instance>> {
    let diagrams = enumerate_diagrams(bounds)?;
    pair_specs(&diagrams, false)
        .iter()
        .map(|p| p.build(&diagrams))
        .collect()
}

pub(crate) fn pair_specs(diagrams: &[LabelledDiagram], in_hypothesis: bool) -> Vec<PairSpec> {
    let mut out = Vec::new();
    let pool: Vec<usize> = (0..diagrams.len())
        .filter(|&i| diagrams[i].ty.is_symplectic_populated() == in_hypothesis)
        .collect();
    let kind = |i: usize| diagrams[i].diagram.base().diagram().component(0).kind;
    for (x, &a) in pool.iter().enumerate() {
        for &b in &pool[x..] {
            if diagrams[a].setup != diagrams[b].setup || kind(a) != kind(b) {
                continue;
            }
            let maps = if in_hypothesis {
                component_maps(&diagrams[a].diagram, &diagrams[b].diagram)
            } else {
                vec![ComponentMap::identity(
                    diagrams[a].diagram.base().diagram().components().len(),
                )]
            };
            out.extend(maps.into_iter().map(|f| PairSpec { a, b, f }));
        }
    }
    out
}
