//! Finite permutation-group actions on Dynkin diagrams.
//!
//! The Galois action on a diagram always factors through a finite group; we
//! model it by a concrete [`PermGroup`] on the node identifiers. Two actions
//! are "of the same abstract group" when they are given by generator lists of
//! equal length whose entries correspond: generator `i` on one side is the
//! same group element as generator `i` on the other.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};
use crate::rootsys::DynkinDiagram;

/// A diagram with a group of diagram automorphisms acting on it.
#[derive(Clone, Debug)]
pub struct EquivariantDiagram {
    diagram: DynkinDiagram,
    group: PermGroup,
}

impl EquivariantDiagram {
    /// Every generator must preserve the Cartan matrix.
    pub fn new(diagram: DynkinDiagram, group: PermGroup) -> Result<Self> {
        if group.degree() != diagram.node_count() {
            return Err(Error::input(format!(
                "group acts on {} points but the diagram has {} nodes",
                group.degree(),
                diagram.node_count()
            )));
        }
        let c = diagram.cartan();
        let n = diagram.node_count();
        for g in group.generators() {
            let ok = (0..n).all(|i| (0..n).all(|j| c.get(g.apply(i), g.apply(j)) == c.get(i, j)));
            if !ok {
                return Err(Error::input(format!("generator {g} is not a diagram automorphism")));
            }
        }
        Ok(EquivariantDiagram { diagram, group })
    }

    pub fn trivial(diagram: DynkinDiagram) -> Self {
        let n = diagram.node_count();
        EquivariantDiagram {
            diagram,
            group: PermGroup::trivial(n),
        }
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// Orbit partition of `subset`; each part is the trace of a full orbit,
    /// ordered by smallest element.
    pub fn orbits(&self, subset: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &v in subset {
            if seen.contains(&v) {
                continue;
            }
            let orbit = self.group.orbit(v);
            let part: BTreeSet<usize> = orbit.intersection(subset).copied().collect();
            seen.extend(orbit);
            out.push(part);
        }
        out
    }

    /// Smallest group-stable superset.
    pub fn closure(&self, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
        subset.iter().flat_map(|&v| self.group.orbit(v)).collect()
    }

    pub fn is_stable(&self, subset: &BTreeSet<usize>) -> bool {
        self.group
            .generators()
            .iter()
            .all(|g| subset.iter().all(|&v| subset.contains(&g.apply(v))))
    }

    /// The permutation induced by a node permutation on components.
    pub fn component_perm(&self, g: &Perm) -> Perm {
        let d = &self.diagram;
        let images = (0..d.components().len())
            .map(|c| d.component_of(g.apply(d.component(c).nodes.start)))
            .collect();
        Perm::from_images_unchecked(images)
    }

    /// The induced action on connected components.
    pub fn pi0(&self) -> Pi0 {
        let gens = self.group.generators().iter().map(|g| self.component_perm(g)).collect();
        let group = PermGroup::new(self.diagram.components().len(), gens)
            .expect("component permutations have the right degree");
        let orbits = group.orbits();
        Pi0 {
            transitive: orbits.len() <= 1,
            orbits,
            group,
        }
    }

    /// Number of subset nodes in each component; the subset must be stable.
    pub fn degree_over_pi0(&self, subset: &BTreeSet<usize>) -> Result<Vec<usize>> {
        if !self.is_stable(subset) {
            return Err(Error::input("subset is not stable under the group"));
        }
        let mut counts = vec![0; self.diagram.components().len()];
        for &v in subset {
            self.diagram.check_node(v)?;
            counts[self.diagram.component_of(v)] += 1;
        }
        Ok(counts)
    }

    /// The degree when it is the same on every component.
    pub fn uniform_degree(&self, subset: &BTreeSet<usize>) -> Result<Option<usize>> {
        let counts = self.degree_over_pi0(subset)?;
        Ok(match counts.split_first() {
            Some((&first, rest)) if rest.iter().all(|&c| c == first) => Some(first),
            Some(_) => None,
            None => Some(0),
        })
    }

    /// Same diagram, action restricted to a subgroup.
    pub fn restrict(&self, h: &PermGroup) -> Result<EquivariantDiagram> {
        if h.degree() != self.group.degree() || !self.group.contains_group(h) {
            return Err(Error::input("not a subgroup of the acting group"));
        }
        Ok(EquivariantDiagram {
            diagram: self.diagram.clone(),
            group: h.clone(),
        })
    }
}

/// Components with the induced action.
#[derive(Clone, Debug)]
pub struct Pi0 {
    pub group: PermGroup,
    pub orbits: Vec<BTreeSet<usize>>,
    pub transitive: bool,
}

/// A bijection between the component sets of two diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentMap(Vec<usize>);

impl ComponentMap {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        Perm::from_images(images.clone()).map_err(|_| Error::input("component map is not a bijection"))?;
        Ok(ComponentMap(images))
    }

    pub fn identity(n: usize) -> Self {
        ComponentMap((0..n).collect())
    }

    pub fn apply(&self, c: usize) -> usize {
        self.0[c]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks `f(g c) = g f(c)` for corresponding generators.
    pub fn is_equivariant(&self, e1: &EquivariantDiagram, e2: &EquivariantDiagram) -> bool {
        e1.group.generators().iter().zip(e2.group.generators()).all(|(g1, g2)| {
            let p1 = e1.component_perm(g1);
            let p2 = e2.component_perm(g2);
            (0..self.0.len()).all(|c| self.0[p1.apply(c)] == p2.apply(self.0[c]))
        })
    }
}

/// Generator lists correspond label by label. A relation that holds on one
/// side only is not an error: it just leaves no equivariant bijection.
pub fn same_abstract_group(e1: &EquivariantDiagram, e2: &EquivariantDiagram) -> bool {
    e1.group.generators().len() == e2.group.generators().len()
}

/// Search state shared by the backtracking routines.
struct IsoSearch<'a> {
    e1: &'a EquivariantDiagram,
    e2: &'a EquivariantDiagram,
    f: &'a ComponentMap,
    allowed: &'a dyn Fn(usize, usize) -> bool,
    /// Nodes to be mapped; a stable subset.
    domain: Vec<bool>,
    cartan: bool,
    image: Vec<usize>,
    preimage: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl IsoSearch<'_> {
    /// Assigns `v -> x` and everything it forces along the orbit of `v`.
    /// Returns the assigned nodes, or `None` (after undoing) on conflict.
    fn assign(&mut self, v: usize, x: usize) -> Option<Vec<usize>> {
        let mut done = Vec::new();
        let mut stack = vec![(v, x)];
        let gens: Vec<(&Perm, &Perm)> = self
            .e1
            .group
            .generators()
            .iter()
            .zip(self.e2.group.generators())
            .collect();
        let d1 = &self.e1.diagram;
        let d2 = &self.e2.diagram;
        let mut ok = true;
        'outer: while let Some((u, y)) = stack.pop() {
            if self.image[u] == y {
                continue;
            }
            if self.image[u] != UNSET
                || self.preimage[y] != UNSET
                || d2.component_of(y) != self.f.apply(d1.component_of(u))
                || !(self.allowed)(u, y)
            {
                ok = false;
                break;
            }
            for (w, &z) in self.image.iter().enumerate() {
                if self.cartan
                    && z != UNSET
                    && (d1.cartan().get(u, w) != d2.cartan().get(y, z)
                        || d1.cartan().get(w, u) != d2.cartan().get(z, y))
                {
                    ok = false;
                    break 'outer;
                }
            }
            self.image[u] = y;
            self.preimage[y] = u;
            done.push(u);
            for (g1, g2) in &gens {
                stack.push((g1.apply(u), g2.apply(y)));
            }
        }
        if ok {
            Some(done)
        } else {
            self.undo(&done);
            None
        }
    }

    fn undo(&mut self, nodes: &[usize]) {
        for &u in nodes {
            self.preimage[self.image[u]] = UNSET;
            self.image[u] = UNSET;
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(v) = (0..self.image.len()).find(|&v| self.domain[v] && self.image[v] == UNSET) else {
            return visit(&self.image);
        };
        let target = self.f.apply(self.e1.diagram.component_of(v));
        for x in self.e2.diagram.component(target).nodes.clone() {
            if self.preimage[x] != UNSET {
                continue;
            }
            if let Some(done) = self.assign(v, x) {
                let flow = self.run(visit);
                self.undo(&done);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every Cartan-preserving, equivariant bijection `Delta_1 -> Delta_2`
/// inducing `f` on components and satisfying `allowed(v, phi(v))`, in
/// lexicographic order of image vectors. The visitor may stop the stream.
pub fn for_each_equivariant_isom(
    e1: &EquivariantDiagram,
    e2: &EquivariantDiagram,
    f: &ComponentMap,
    allowed: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&Perm) -> ControlFlow<()>,
) -> Result<()> {
    if !same_abstract_group(e1, e2) {
        return Err(Error::input("the two actions are not by the same abstract group"));
    }
    let (n1, n2) = (e1.diagram.node_count(), e2.diagram.node_count());
    if f.len() != e1.diagram.components().len() || f.len() != e2.diagram.components().len() {
        return Err(Error::input("component map has the wrong size"));
    }
    if n1 != n2 {
        return Ok(());
    }
    let mut search = IsoSearch {
        e1,
        e2,
        f,
        allowed,
        domain: vec![true; n1],
        cartan: true,
        image: vec![UNSET; n1],
        preimage: vec![UNSET; n2],
    };
    let _ = search.run(&mut |img| visit(&Perm::from_images_unchecked(img.to_vec())));
    Ok(())
}

/// Visits every equivariant bijection `s1 -> s2` of stable node subsets
/// lying over `f`, as `(node, image)` lists in lexicographic order. No
/// Cartan condition is imposed.
pub fn for_each_equivariant_bijection(
    e1: &EquivariantDiagram,
    s1: &BTreeSet<usize>,
    e2: &EquivariantDiagram,
    s2: &BTreeSet<usize>,
    f: &ComponentMap,
    visit: &mut dyn FnMut(&[(usize, usize)]) -> ControlFlow<()>,
) -> Result<()> {
    if !same_abstract_group(e1, e2) {
        return Err(Error::input("the two actions are not by the same abstract group"));
    }
    if !e1.is_stable(s1) || !e2.is_stable(s2) {
        return Err(Error::input("subset is not stable under the group"));
    }
    if f.len() != e1.diagram.components().len() || f.len() != e2.diagram.components().len() {
        return Err(Error::input("component map has the wrong size"));
    }
    if s1.len() != s2.len() {
        return Ok(());
    }
    let (n1, n2) = (e1.diagram.node_count(), e2.diagram.node_count());
    let mut domain = vec![false; n1];
    for &v in s1 {
        domain[v] = true;
    }
    let allowed = |_: usize, x: usize| s2.contains(&x);
    let mut search = IsoSearch {
        e1,
        e2,
        f,
        allowed: &allowed,
        domain,
        cartan: false,
        image: vec![UNSET; n1],
        preimage: vec![UNSET; n2],
    };
    let _ = search.run(&mut |img| {
        let pairs: Vec<(usize, usize)> = s1.iter().map(|&v| (v, img[v])).collect();
        visit(&pairs)
    });
    Ok(())
}

/// All equivariant isomorphisms over `f`.
pub fn equivariant_isoms(e1: &EquivariantDiagram, e2: &EquivariantDiagram, f: &ComponentMap) -> Result<Vec<Perm>> {
    let mut out = Vec::new();
    for_each_equivariant_isom(e1, e2, f, &|_, _| true, &mut |p| {
        out.push(p.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Independent check that `phi` is an equivariant isomorphism over `f`.
pub fn is_equivariant_isom(e1: &EquivariantDiagram, e2: &EquivariantDiagram, f: &ComponentMap, phi: &Perm) -> bool {
    let d1 = &e1.diagram;
    let d2 = &e2.diagram;
    let n = d1.node_count();
    if phi.degree() != n || d2.node_count() != n {
        return false;
    }
    let cartan = (0..n).all(|i| (0..n).all(|j| d1.cartan().get(i, j) == d2.cartan().get(phi.apply(i), phi.apply(j))));
    let over_f = (0..n).all(|v| d2.component_of(phi.apply(v)) == f.apply(d1.component_of(v)));
    let equivariant = e1
        .group
        .generators()
        .iter()
        .zip(e2.group.generators())
        .all(|(g1, g2)| (0..n).all(|v| phi.apply(g1.apply(v)) == g2.apply(phi.apply(v))));
    cartan && over_f && equivariant
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::SimpleType;

    fn diagram(spec: &[&str]) -> DynkinDiagram {
        let types: Vec<SimpleType> = spec.iter().map(|s| s.parse().unwrap()).collect();
        DynkinDiagram::build(&types)
    }

    fn acted(spec: &[&str], gens: &[&str]) -> EquivariantDiagram {
        let d = diagram(spec);
        let n = d.node_count();
        let gens = gens.iter().map(|s| Perm::from_cycles(s, n).unwrap()).collect();
        EquivariantDiagram::new(d, PermGroup::new(n, gens).unwrap()).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn rejects_non_automorphisms() {
        let d = diagram(&["A3"]);
        let g = PermGroup::new(3, vec![Perm::from_cycles("(0 1)", 3).unwrap()]).unwrap();
        assert!(EquivariantDiagram::new(d, g).is_err());
    }

    #[test]
    fn orbit_examples() {
        let e = EquivariantDiagram::trivial(diagram(&["A3"]));
        assert_eq!(e.orbits(&set(&[0, 2])), vec![set(&[0]), set(&[2])]);
        let e = acted(&["A1", "A1"], &["(0 1)"]);
        assert_eq!(e.orbits(&set(&[0, 1])), vec![set(&[0, 1])]);
        let e = acted(&["D4"], &["(0 2 3)"]);
        assert_eq!(e.orbits(&set(&[0, 2, 3])), vec![set(&[0, 2, 3])]);
    }

    #[test]
    fn closure_examples() {
        let e = EquivariantDiagram::trivial(diagram(&["D4"]));
        assert_eq!(e.closure(&set(&[0])), set(&[0]));
        let e = acted(&["D4"], &["(0 2 3)"]);
        assert_eq!(e.closure(&set(&[0])), set(&[0, 2, 3]));
        assert_eq!(e.closure(&set(&[])), set(&[]));
    }

    #[test]
    fn pi0_examples() {
        assert!(EquivariantDiagram::trivial(diagram(&["D4"])).pi0().transitive);
        assert!(!EquivariantDiagram::trivial(diagram(&["A2", "A2"])).pi0().transitive);
        assert!(acted(&["A2", "A2"], &["(0 2)(1 3)"]).pi0().transitive);
    }

    #[test]
    fn degree_examples() {
        let e = EquivariantDiagram::trivial(diagram(&["D4"]));
        assert_eq!(e.uniform_degree(&set(&[0])).unwrap(), Some(1));
        assert_eq!(e.uniform_degree(&set(&[0, 2])).unwrap(), Some(2));
        assert_eq!(e.uniform_degree(&set(&[0, 2, 3])).unwrap(), Some(3));
        let e = acted(&["D4"], &["(0 2 3)"]);
        assert!(e.degree_over_pi0(&set(&[0])).is_err());
    }

    #[test]
    fn restrict_examples() {
        let e = acted(&["D4"], &["(0 2 3)", "(0 2)"]);
        assert_eq!(e.group().order(), 6);
        let h = PermGroup::new(4, vec![Perm::from_cycles("(2 3)", 4).unwrap()]).unwrap();
        let r = e.restrict(&h).unwrap();
        assert_eq!(r.orbits(&set(&[0, 2, 3])), vec![set(&[0]), set(&[2, 3])]);
        assert!(e.restrict(&PermGroup::trivial(4)).unwrap().group().is_trivial());
        assert_eq!(e.restrict(e.group()).unwrap().group().order(), 6);
        let bad = acted(&["D4"], &["(0 2)"]);
        assert!(bad.restrict(&h).is_err());
    }

    #[test]
    fn isom_examples() {
        let a1 = EquivariantDiagram::trivial(diagram(&["A1"]));
        assert_eq!(
            equivariant_isoms(&a1, &a1, &ComponentMap::identity(1)).unwrap().len(),
            1
        );
        let a2 = EquivariantDiagram::trivial(diagram(&["A2"]));
        assert_eq!(
            equivariant_isoms(&a2, &a2, &ComponentMap::identity(1)).unwrap().len(),
            2
        );
        let b2 = EquivariantDiagram::trivial(diagram(&["B2"]));
        assert!(equivariant_isoms(&a2, &b2, &ComponentMap::identity(1))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn isoms_respect_the_action() {
        let e = acted(&["A3", "A3"], &["(0 3)(1 4)(2 5)"]);
        let twisted = acted(&["A3", "A3"], &["(0 5)(1 4)(2 3)"]);
        let f = ComponentMap::identity(2);
        let all = equivariant_isoms(&e, &twisted, &f).unwrap();
        assert_eq!(all.len(), 2);
        for phi in &all {
            assert!(is_equivariant_isom(&e, &twisted, &f, phi));
        }
        let other = acted(&["A3", "A3"], &["(0 3)(1 4)(2 5)", "(0 2)(3 5)"]);
        assert!(equivariant_isoms(&e, &other, &f).is_err());
    }
}
