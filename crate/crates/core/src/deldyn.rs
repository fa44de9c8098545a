//! Deligne–Dynkin diagrams `(Delta, mu)`.
//!
//! A diagram with a group action and a set `mu` of special nodes, at most
//! one per connected component. `mu` need not be stable under the group.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gaction::{for_each_equivariant_isom, ComponentMap, EquivariantDiagram};
use crate::perm::{Perm, PermGroup};
use crate::rootsys::{opposition_involution, special_nodes, symplectic_nodes, Family};

#[derive(Clone, Debug)]
pub struct DeligneDynkinDiagram {
    base: EquivariantDiagram,
    mu: BTreeSet<usize>,
}

/// Why a pair `(Delta, mu)` is not a Deligne–Dynkin diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutOfRange { node: usize },
    NotSpecial { node: usize },
    SharedComponent { node: usize, other: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { node } => write!(f, "mu node {node} is not a node of the diagram"),
            Violation::NotSpecial { node } => write!(f, "mu node {node} is not special"),
            Violation::SharedComponent { node, other } => {
                write!(f, "mu nodes {other} and {node} lie in the same component")
            }
        }
    }
}

/// The classification of an irreducible diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagramType {
    A(usize),
    B(usize),
    C(usize),
    DR(usize),
    DH(usize),
    NotSymplectic,
    NotPopulated,
}

impl DiagramType {
    pub fn is_d4(&self) -> bool {
        matches!(self, DiagramType::DR(4) | DiagramType::DH(4))
    }

    pub fn is_symplectic_populated(&self) -> bool {
        !matches!(self, DiagramType::NotSymplectic | DiagramType::NotPopulated)
    }
}

impl fmt::Display for DiagramType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramType::A(n) => write!(f, "A{n}"),
            DiagramType::B(n) => write!(f, "B{n}"),
            DiagramType::C(n) => write!(f, "C{n}"),
            DiagramType::DR(n) => write!(f, "D{n}^R"),
            DiagramType::DH(n) => write!(f, "D{n}^H"),
            DiagramType::NotSymplectic => f.write_str("NOT_SYMPLECTIC"),
            DiagramType::NotPopulated => f.write_str("NOT_POPULATED"),
        }
    }
}

impl Serialize for DiagramType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One irreducible piece after restricting the action to a subgroup.
#[derive(Clone, Debug)]
pub struct LocalComponent {
    pub diagram: DeligneDynkinDiagram,
    /// Original node of each node of the piece.
    pub nodes: Vec<usize>,
    /// Original components making up the piece, ascending.
    pub components: Vec<usize>,
}

impl DeligneDynkinDiagram {
    /// No validation; see [`DeligneDynkinDiagram::validate`].
    pub fn new(base: EquivariantDiagram, mu: BTreeSet<usize>) -> Self {
        DeligneDynkinDiagram { base, mu }
    }

    /// Constructs and validates.
    pub fn checked(base: EquivariantDiagram, mu: BTreeSet<usize>) -> Result<Self> {
        let d = Self::new(base, mu);
        d.validate().map_err(|v| Error::input(v.to_string()))?;
        Ok(d)
    }

    pub fn base(&self) -> &EquivariantDiagram {
        &self.base
    }

    pub fn mu(&self) -> &BTreeSet<usize> {
        &self.mu
    }

    pub fn node_count(&self) -> usize {
        self.base.diagram().node_count()
    }

    /// Reports the first offending `mu` node in ascending order.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let d = self.base.diagram();
        let mut owner: Vec<Option<usize>> = vec![None; d.components().len()];
        for &v in &self.mu {
            if v >= d.node_count() {
                return Err(Violation::OutOfRange { node: v });
            }
            let c = d.component_of(v);
            if !d.component(c).kind.is_finite() || !special_nodes(d, c).is_ok_and(|s| s.contains(&v)) {
                return Err(Violation::NotSpecial { node: v });
            }
            if let Some(other) = owner[c] {
                return Err(Violation::SharedComponent { node: v, other });
            }
            owner[c] = Some(v);
        }
        Ok(())
    }

    pub fn mu_closure(&self) -> BTreeSet<usize> {
        self.base.closure(&self.mu)
    }

    pub fn is_irreducible(&self) -> bool {
        !self.base.diagram().components().is_empty() && self.base.pi0().transitive
    }

    /// Node sets of the irreducible components (component orbits).
    pub fn irreducible_components(&self) -> Vec<BTreeSet<usize>> {
        let d = self.base.diagram();
        self.base
            .pi0()
            .orbits
            .iter()
            .map(|orbit| orbit.iter().flat_map(|&c| d.component(c).nodes.clone()).collect())
            .collect()
    }

    pub fn is_populated(&self) -> bool {
        self.irreducible_components()
            .iter()
            .all(|part| part.iter().any(|v| self.mu.contains(v)))
    }

    /// The `mu`-symplectic nodes of the component of each `mu` node.
    fn allowed_by_mu(&self) -> Result<Vec<Option<BTreeSet<usize>>>> {
        let d = self.base.diagram();
        let mut allowed = vec![None; d.components().len()];
        for &a in &self.mu {
            let s: BTreeSet<usize> = symplectic_nodes(d, a)?.into_iter().collect();
            allowed[d.component_of(a)] = Some(s);
        }
        Ok(allowed)
    }

    /// The maximal stable set `S` such that `S` meets every component
    /// containing some `alpha` in `mu` only in `alpha`-symplectic nodes:
    /// a node belongs to `S` exactly when its whole orbit is admissible.
    pub fn symplectic_set(&self) -> Result<BTreeSet<usize>> {
        let d = self.base.diagram();
        let allowed = self.allowed_by_mu()?;
        let admissible = |v: usize| match &allowed[d.component_of(v)] {
            Some(s) => s.contains(&v),
            None => true,
        };
        let mut out = BTreeSet::new();
        for orbit in self.base.group().orbits() {
            if orbit.iter().all(|&v| admissible(v)) {
                out.extend(orbit);
            }
        }
        Ok(out)
    }

    pub fn is_symplectic(&self) -> Result<bool> {
        let s = self.symplectic_set()?;
        Ok(self
            .irreducible_components()
            .iter()
            .all(|part| part.iter().any(|v| s.contains(v))))
    }

    fn require_irreducible(&self) -> Result<()> {
        self.validate().map_err(|v| Error::input(v.to_string()))?;
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(Error::input("diagram is not irreducible"))
        }
    }

    /// Classification of an irreducible diagram.
    pub fn type_of(&self) -> Result<DiagramType> {
        self.require_irreducible()?;
        if !self.is_populated() {
            return Ok(DiagramType::NotPopulated);
        }
        if !self.is_symplectic()? {
            return Ok(DiagramType::NotSymplectic);
        }
        let d = self.base.diagram();
        let t = d.component(0).kind.simple_type();
        let n = t.rank;
        let ty = match t.family {
            Family::A => DiagramType::A(n),
            // C2 and B2 are the same diagram
            Family::B => DiagramType::B(n),
            Family::C if n == 2 => DiagramType::B(2),
            Family::C => DiagramType::C(n),
            Family::D if n == 4 => match self.base.uniform_degree(&self.mu_closure())? {
                Some(1) => DiagramType::DR(4),
                Some(2) => DiagramType::DH(4),
                _ => DiagramType::NotSymplectic,
            },
            Family::D => {
                let at_end = |a: &usize| d.local_index(*a) == 0;
                if self.mu.iter().all(at_end) {
                    DiagramType::DR(n)
                } else if !self.mu.iter().any(at_end) {
                    DiagramType::DH(n)
                } else {
                    DiagramType::NotSymplectic
                }
            }
            Family::E | Family::F | Family::G => {
                return Err(Error::consistency(format!(
                    "symplectic diagram of exceptional type {t}"
                )))
            }
        };
        // both D cases must have S of degree 2 (real) or 1 (quaternionic)
        let expected = match ty {
            DiagramType::DR(_) => Some(2),
            DiagramType::DH(_) => Some(1),
            _ => None,
        };
        if let Some(k) = expected {
            let got = self.base.uniform_degree(&self.symplectic_set()?)?;
            if got != Some(k) {
                return Err(Error::consistency(format!(
                    "type {ty} but the symplectic set has degree {got:?}"
                )));
            }
        }
        Ok(ty)
    }

    fn require_isp(&self) -> Result<DiagramType> {
        let ty = self.type_of()?;
        match ty {
            DiagramType::NotPopulated => Err(Error::input("diagram is not populated")),
            DiagramType::NotSymplectic => Err(Error::input("diagram is not symplectic")),
            _ => Ok(ty),
        }
    }

    /// The stable subset of degree 1 or 2 over the components that
    /// determines the action. For type A this is the set of end nodes, which
    /// is `S` whenever the special node is interior.
    pub fn u_set(&self) -> Result<BTreeSet<usize>> {
        let ty = self.require_isp()?;
        let d = self.base.diagram();
        let u = match ty {
            DiagramType::A(_) => (0..d.components().len()).flat_map(|c| d.extremal_nodes(c)).collect(),
            DiagramType::B(_) | DiagramType::DR(_) => self.symplectic_set()?,
            DiagramType::C(_) | DiagramType::DH(_) => self.mu_closure(),
            _ => unreachable!(),
        };
        match self.base.uniform_degree(&u)? {
            Some(1 | 2) => Ok(u),
            other => Err(Error::consistency(format!("U-set of degree {other:?}"))),
        }
    }

    /// Every equivariant automorphism inducing the identity on components
    /// and mapping `mu` onto itself, in lexicographic order.
    pub fn aut_id(&self) -> Result<Vec<Perm>> {
        let f = ComponentMap::identity(self.base.diagram().components().len());
        let mu = &self.mu;
        let mut out = Vec::new();
        for_each_equivariant_isom(
            &self.base,
            &self.base,
            &f,
            &|v, x| mu.contains(&v) == mu.contains(&x),
            &mut |p| {
                out.push(p.clone());
                ControlFlow::Continue(())
            },
        )?;
        Ok(out)
    }

    /// The count predicted by the automorphism lemma.
    pub fn expected_aut_id_count(&self) -> Result<usize> {
        let ty = self.require_isp()?;
        Ok(match ty {
            DiagramType::DR(_) => 2,
            DiagramType::A(n) if n >= 2 && self.mu_fixed_by_opposition()? => 2,
            _ => 1,
        })
    }

    pub fn mu_fixed_by_opposition(&self) -> Result<bool> {
        let tau = opposition_involution(self.base.diagram())?;
        Ok(self.mu.iter().all(|&a| self.mu.contains(&tau.apply(a))))
    }

    /// Restricts the action to `h` and splits into irreducible pieces, each
    /// renumbered from 0 with `mu` intersected.
    pub fn local_components(&self, h: &PermGroup) -> Result<Vec<LocalComponent>> {
        let restricted = self.base.restrict(h)?;
        let pi0 = restricted.pi0();
        let d = self.base.diagram();
        let mut out = Vec::new();
        for orbit in &pi0.orbits {
            let comps: Vec<usize> = orbit.iter().copied().collect();
            let (sub, nodes) = d.sub_diagram(&comps);
            let mut back = vec![usize::MAX; d.node_count()];
            for (new, &old) in nodes.iter().enumerate() {
                back[old] = new;
            }
            let gens = h
                .generators()
                .iter()
                .map(|g| Perm::from_images_unchecked(nodes.iter().map(|&v| back[g.apply(v)]).collect()))
                .collect();
            let group = PermGroup::new(nodes.len(), gens)?;
            let base = EquivariantDiagram::new(sub, group)?;
            let mu = self
                .mu
                .iter()
                .filter(|&&v| back[v] != usize::MAX)
                .map(|&v| back[v])
                .collect();
            out.push(LocalComponent {
                diagram: DeligneDynkinDiagram::new(base, mu),
                nodes,
                components: comps,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{DynkinDiagram, SimpleType};

    fn ddd(spec: &[&str], gens: &[&str], mu: &[usize]) -> DeligneDynkinDiagram {
        let types: Vec<SimpleType> = spec.iter().map(|s| s.parse().unwrap()).collect();
        let d = DynkinDiagram::build(&types);
        let n = d.node_count();
        let gens = gens.iter().map(|s| Perm::from_cycles(s, n).unwrap()).collect();
        let base = EquivariantDiagram::new(d, PermGroup::new(n, gens).unwrap()).unwrap();
        DeligneDynkinDiagram::new(base, mu.iter().copied().collect())
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            ddd(&["D5"], &[], &[2]).validate(),
            Err(Violation::NotSpecial { node: 2 })
        );
        assert_eq!(ddd(&["D5"], &[], &[]).validate(), Ok(()));
        assert_eq!(
            ddd(&["D5"], &[], &[0, 4]).validate(),
            Err(Violation::SharedComponent { node: 4, other: 0 })
        );
        assert_eq!(
            ddd(&["A1"], &[], &[3]).validate(),
            Err(Violation::OutOfRange { node: 3 })
        );
    }

    #[test]
    fn predicates() {
        let d = ddd(&["D4"], &[], &[0]);
        assert!(d.is_irreducible() && d.is_populated());
        let d = ddd(&["D4"], &[], &[]);
        assert!(d.is_irreducible() && !d.is_populated());
        let d = ddd(&["A3", "A3"], &["(0 3)(1 4)(2 5)"], &[1]);
        assert!(d.is_irreducible() && d.is_populated());
        let d = ddd(&["A3", "A3"], &[], &[1]);
        assert!(!d.is_irreducible() && !d.is_populated());
    }

    #[test]
    fn symplectic_set_examples() {
        assert_eq!(ddd(&["D4"], &[], &[0]).symplectic_set().unwrap(), set(&[2, 3]));
        assert_eq!(ddd(&["B4"], &[], &[0]).symplectic_set().unwrap(), set(&[3]));
        assert_eq!(ddd(&["D4"], &[], &[]).symplectic_set().unwrap(), set(&[0, 1, 2, 3]));
    }

    #[test]
    fn symplectic_examples() {
        assert!(!ddd(&["D4"], &["(0 2 3)"], &[0]).is_symplectic().unwrap());
        assert!(!ddd(&["E7"], &[], &[6]).is_symplectic().unwrap());
        assert!(ddd(&["B3"], &[], &[0]).is_symplectic().unwrap());
    }

    #[test]
    fn type_examples() {
        assert_eq!(ddd(&["D4"], &[], &[0]).type_of().unwrap(), DiagramType::DR(4));
        assert_eq!(ddd(&["D4"], &["(0 2)"], &[0]).type_of().unwrap(), DiagramType::DH(4));
        assert_eq!(ddd(&["C3"], &[], &[2]).type_of().unwrap(), DiagramType::C(3));
        assert_eq!(
            ddd(&["D4"], &["(0 2 3)"], &[0]).type_of().unwrap(),
            DiagramType::NotSymplectic
        );
        assert_eq!(ddd(&["D4"], &[], &[]).type_of().unwrap(), DiagramType::NotPopulated);
        assert_eq!(ddd(&["D5"], &[], &[0]).type_of().unwrap(), DiagramType::DR(5));
        assert_eq!(ddd(&["D5"], &[], &[4]).type_of().unwrap(), DiagramType::DH(5));
        assert!(ddd(&["A2", "A2"], &[], &[0]).type_of().is_err());
        assert_eq!(DiagramType::DH(5).to_string(), "D5^H");
    }

    #[test]
    fn u_set_examples() {
        let b = ddd(&["B3"], &[], &[0]);
        assert_eq!(b.u_set().unwrap(), set(&[2]));
        let c = ddd(&["C3"], &[], &[2]);
        assert_eq!(c.u_set().unwrap(), set(&[2]));
        let a1 = ddd(&["A1"], &[], &[0]);
        assert_eq!(a1.u_set().unwrap(), set(&[0]));
        assert!(ddd(&["D4"], &[], &[]).u_set().is_err());
    }

    #[test]
    fn aut_id_examples() {
        assert_eq!(ddd(&["B3"], &[], &[0]).aut_id().unwrap().len(), 1);
        assert_eq!(ddd(&["D5"], &[], &[0]).aut_id().unwrap().len(), 2);
        assert_eq!(ddd(&["A3"], &[], &[1]).aut_id().unwrap().len(), 2);
        assert_eq!(ddd(&["A3"], &[], &[0]).aut_id().unwrap().len(), 1);
        assert_eq!(ddd(&["D4"], &["(0 2)"], &[0]).aut_id().unwrap().len(), 1);
    }

    #[test]
    fn local_component_examples() {
        let d = ddd(&["A2", "A2"], &["(0 3)(1 2)"], &[0]);
        assert_eq!(d.local_components(d.base().group()).unwrap().len(), 1);
        let pieces = d.local_components(&PermGroup::trivial(4)).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[1].nodes, vec![2, 3]);
        assert_eq!(pieces[0].diagram.mu(), &set(&[0]));
        assert!(pieces[1].diagram.mu().is_empty());
    }
}
