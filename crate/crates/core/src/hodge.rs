//! Fractional Hodge bidegrees and Deligne's construction of a weight one
//! Hodge structure from a Deligne–Dynkin diagram.
//!
//! Number fields are modelled by their sets of complex embeddings. An étale
//! algebra is a finite set of points, each carrying a bidegree; the
//! quadratic CM extension is a two-to-one cover of the components with a
//! fixed-point-free conjugation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::deldyn::{DeligneDynkinDiagram, DiagramType};
use crate::error::{Error, Result};
use crate::localglobal::{enumerate_diagrams, Bounds};
use crate::par::par_map;
use crate::rational::Rational;
use crate::rootsys::{opposition_involution, RootSystem};

pub type Bidegree = (Rational, Rational);

fn conj(b: Bidegree) -> Bidegree {
    (b.1, b.0)
}

fn add(a: Bidegree, b: Bidegree) -> Bidegree {
    (a.0 + b.0, a.1 + b.1)
}

fn int(p: i64, q: i64) -> Bidegree {
    (Rational::from_int(p), Rational::from_int(q))
}

/// A multiset of bidegrees `h^{p,q}`, as for `V (x) C = sum V^{p,q}`.
///
/// Pieces of a structure need not be conjugation symmetric; use
/// [`FractionalPreHodge::checked`] where the symmetry is required.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FractionalPreHodge {
    entries: BTreeMap<Bidegree, u64>,
}

#[derive(Serialize)]
struct Entry {
    p: Rational,
    q: Rational,
    dim: u64,
}

impl Serialize for FractionalPreHodge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(&(p, q), &dim)| Entry { p, q, dim }))
    }
}

impl fmt::Display for FractionalPreHodge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(&(p, q), &d)| format!("({p},{q})x{d}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FractionalPreHodge {
    /// Merges the entries; zero dimensions are dropped.
    pub fn new(entries: impl IntoIterator<Item = (Rational, Rational, u64)>) -> Self {
        let mut out = FractionalPreHodge::default();
        for (p, q, d) in entries {
            out.push((p, q), d);
        }
        out
    }

    /// As [`new`](Self::new), rejecting profiles with `h^{p,q} != h^{q,p}`.
    pub fn checked(entries: impl IntoIterator<Item = (Rational, Rational, u64)>) -> Result<Self> {
        let h = Self::new(entries);
        if h.is_symmetric() {
            Ok(h)
        } else {
            Err(Error::input(format!("{h} is not conjugation symmetric")))
        }
    }

    pub fn push(&mut self, b: Bidegree, dim: u64) {
        if dim > 0 {
            *self.entries.entry(b).or_default() += dim;
        }
    }

    pub fn extend(&mut self, other: &FractionalPreHodge) {
        for (&b, &d) in &other.entries {
            self.push(b, d);
        }
    }

    pub fn h(&self, p: Rational, q: Rational) -> u64 {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Bidegree, u64)> + '_ {
        self.entries.iter().map(|(&b, &d)| (b, d))
    }

    pub fn bidegrees(&self) -> BTreeSet<Bidegree> {
        self.entries.keys().copied().collect()
    }

    pub fn dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(&b, &d)| self.entries.get(&conj(b)) == Some(&d))
    }

    /// Dimension by weight `p + q`.
    pub fn weight_profile(&self) -> BTreeMap<Rational, u64> {
        let mut out = BTreeMap::new();
        for (&(p, q), &d) in &self.entries {
            *out.entry(p + q).or_default() += d;
        }
        out
    }

    pub fn is_pure(&self, weight: Rational) -> bool {
        self.entries.keys().all(|&(p, q)| p + q == weight)
    }

    /// The weight if there is exactly one.
    pub fn weight(&self) -> Option<Rational> {
        let w = self.weight_profile();
        (w.len() == 1).then(|| *w.keys().next().unwrap())
    }

    /// All bidegrees integral.
    pub fn is_classical(&self) -> bool {
        self.entries.keys().all(|(p, q)| p.is_integer() && q.is_integer())
    }

    /// Bidegrees add, dimensions multiply.
    pub fn tensor(&self, other: &FractionalPreHodge) -> FractionalPreHodge {
        let mut out = FractionalPreHodge::default();
        for (&a, &d) in &self.entries {
            for (&b, &e) in &other.entries {
                out.push(add(a, b), d * e);
            }
        }
        out
    }

    fn shifted(&self, by: Bidegree, times: u64) -> FractionalPreHodge {
        let mut out = FractionalPreHodge::default();
        for (&b, &d) in &self.entries {
            out.push(add(b, by), d * times);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtalePoint {
    /// Index of the point below, in the base set.
    pub over: usize,
    pub bidegree: Bidegree,
    pub rank: u64,
}

/// A module over an étale algebra, one point per complex embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleModule {
    pub base_len: usize,
    pub points: Vec<EtalePoint>,
    /// Complex conjugation on the points, when known.
    pub conjugation: Option<Vec<usize>>,
}

impl EtaleModule {
    pub fn new(base_len: usize, points: Vec<EtalePoint>, conjugation: Option<Vec<usize>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.over >= base_len) {
            return Err(Error::input(format!(
                "point over {} outside a base of {base_len}",
                p.over
            )));
        }
        if let Some(c) = &conjugation {
            if c.len() != points.len() || (0..c.len()).any(|i| c[i] >= c.len() || c[c[i]] != i) {
                return Err(Error::input("conjugation is not an involution of the points"));
            }
            for (i, p) in points.iter().enumerate() {
                if points[c[i]].bidegree != conj(p.bidegree) {
                    return Err(Error::input(format!(
                        "conjugation does not swap the bidegree of point {i}"
                    )));
                }
            }
        }
        Ok(EtaleModule {
            base_len,
            points,
            conjugation,
        })
    }

    /// The bidegrees of the underlying pre-Hodge structure.
    pub fn hodge(&self) -> FractionalPreHodge {
        let mut out = FractionalPreHodge::default();
        for p in &self.points {
            out.push(p.bidegree, p.rank);
        }
        out
    }
}

/// Rank one at every point: the criterion for a torus Mumford–Tate group.
pub fn cm_rank_one(m: &EtaleModule) -> bool {
    m.points.iter().all(|p| p.rank == 1)
}

/// `W (x)_X V` where `v[x]` is the piece of `V` at base point `x`.
pub fn tensor_over_etale(w: &EtaleModule, v: &[FractionalPreHodge]) -> Result<FractionalPreHodge> {
    if v.len() != w.base_len {
        return Err(Error::input(format!(
            "module over {} points tensored with {} pieces",
            w.base_len,
            v.len()
        )));
    }
    let mut out = FractionalPreHodge::default();
    for p in &w.points {
        out.extend(&v[p.over].shifted(p.bidegree, p.rank));
    }
    Ok(out)
}

/// A totally imaginary quadratic extension: two points over each component
/// with a fixed-point-free conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticCover {
    pub over: Vec<usize>,
    pub conjugation: Vec<usize>,
}

impl QuadraticCover {
    pub fn new(components: usize, over: Vec<usize>, conjugation: Vec<usize>) -> Result<Self> {
        let n = over.len();
        if conjugation.len() != n || n != 2 * components {
            return Err(Error::input("a quadratic cover has two points per component"));
        }
        for i in 0..n {
            let j = conjugation[i];
            if j >= n || j == i || conjugation[j] != i || over[j] != over[i] || over[i] >= components {
                return Err(Error::input(format!("bad conjugation at cover point {i}")));
            }
        }
        Ok(QuadraticCover { over, conjugation })
    }

    /// Points `2c` and `2c + 1` over component `c`.
    pub fn split(components: usize) -> Self {
        QuadraticCover {
            over: (0..2 * components).map(|i| i / 2).collect(),
            conjugation: (0..2 * components).map(|i| i ^ 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.over.len()
    }

    pub fn is_empty(&self) -> bool {
        self.over.is_empty()
    }
}

/// One embedding from each conjugate pair over the components missed by
/// `mu`, and nothing over the others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialCMType {
    pub phi: BTreeSet<usize>,
}

impl PartialCMType {
    pub fn new(d: &DeligneDynkinDiagram, f: &QuadraticCover, phi: BTreeSet<usize>) -> Result<Self> {
        let comps = d.base().diagram().components().len();
        if f.over.len() != 2 * comps {
            return Err(Error::input("cover does not match the diagram"));
        }
        let hit = mu_components(d);
        let mut seen = BTreeSet::new();
        for &x in &phi {
            if x >= f.len() {
                return Err(Error::input(format!("cover point {x} out of range")));
            }
            if phi.contains(&f.conjugation[x]) {
                return Err(Error::input(format!("phi contains the conjugate pair of {x}")));
            }
            let c = f.over[x];
            if hit.contains(&c) {
                return Err(Error::input(format!("phi meets component {c}, which meets mu")));
            }
            seen.insert(c);
        }
        if seen.len() + hit.len() != comps {
            return Err(Error::input("phi misses a component outside the image of mu"));
        }
        Ok(PartialCMType { phi })
    }

    /// Every valid choice, in lexicographic order of the chosen points.
    pub fn all(d: &DeligneDynkinDiagram, f: &QuadraticCover) -> Result<Vec<PartialCMType>> {
        let hit = mu_components(d);
        let comps = d.base().diagram().components().len();
        let free: Vec<usize> = (0..comps).filter(|c| !hit.contains(c)).collect();
        let mut out = Vec::new();
        for mask in 0..1u64 << free.len() {
            let mut phi = BTreeSet::new();
            for (k, &c) in free.iter().enumerate() {
                let pts: Vec<usize> = (0..f.len()).filter(|&x| f.over[x] == c).collect();
                phi.insert(pts[(mask >> k & 1) as usize]);
            }
            out.push(PartialCMType::new(d, f, phi)?);
        }
        out.sort_by(|a, b| a.phi.cmp(&b.phi));
        Ok(out)
    }
}

fn mu_components(d: &DeligneDynkinDiagram) -> BTreeSet<usize> {
    d.mu().iter().map(|&a| d.base().diagram().component_of(a)).collect()
}

/// The piece of `V` at one symplectic node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticPoint {
    pub node: usize,
    pub component: usize,
    /// The `mu` node of the component, if any.
    pub mu_node: Option<usize>,
    /// `<s, alpha>`; absent on components missed by `mu`.
    pub r: Option<Rational>,
    pub dim: u64,
    pub v: FractionalPreHodge,
    pub f_s: Bidegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeligneReport {
    #[serde(rename = "type")]
    pub ty: DiagramType,
    pub n: u64,
    pub s: Vec<usize>,
    pub points: Vec<SymplecticPoint>,
    pub cover: QuadraticCover,
    pub phi: PartialCMType,
    pub f: EtaleModule,
    pub f_s: EtaleModule,
    pub w_f: EtaleModule,
    pub v: FractionalPreHodge,
    pub w_f_hodge: FractionalPreHodge,
    pub v_prime: FractionalPreHodge,
    pub dim_v_prime: u64,
    /// Dimension of the abelian variety with `H^1 = V'`.
    pub abelian_variety_dim: u64,
}

/// Runs the construction for an irreducible symplectic populated diagram,
/// a cover `F`, a partial CM type and a multiplicity `n`.
///
/// Every stage is checked: conjugation symmetry of each structure, CM type
/// of `F`, `F_S` and `W_F`, purity of weight one of `W_F`, and type
/// `{(1,0),(0,1)}` of `V'`. A failed check is a consistency error.
pub fn deligne_construct(
    d: &DeligneDynkinDiagram,
    cover: &QuadraticCover,
    phi: &PartialCMType,
    n: u64,
) -> Result<DeligneReport> {
    let ty = d.type_of()?;
    if !ty.is_symplectic_populated() {
        return Err(Error::input(format!(
            "diagram of type {ty} is not symplectic and populated"
        )));
    }
    if n == 0 {
        return Err(Error::input("multiplicity must be positive"));
    }
    let phi = PartialCMType::new(d, cover, phi.phi.clone())?;
    let diagram = d.base().diagram();
    let comps = diagram.components().len();
    let mu_of: Vec<Option<usize>> = (0..comps)
        .map(|c| d.mu().iter().copied().find(|&a| diagram.component_of(a) == c))
        .collect();
    let s: Vec<usize> = d.symplectic_set()?.into_iter().collect();
    let tau = opposition_involution(diagram)?;

    let mut points = Vec::with_capacity(s.len());
    for &node in &s {
        let c = diagram.component_of(node);
        let t = diagram.component(c).kind.simple_type();
        let rs = RootSystem::new(&t.cartan());
        let mut lambda = vec![0i64; t.rank];
        lambda[diagram.local_index(node)] = 1;
        let dim = rs.weyl_dimension(&lambda);
        let (r, v, f_s) = match mu_of[c] {
            None => (
                None,
                FractionalPreHodge::new([(Rational::ZERO, Rational::ZERO, dim)]),
                int(0, 0),
            ),
            Some(alpha) => {
                let r = diagram.pairing(alpha, node)?;
                // the top eigenspace is the Levi representation of the same
                // highest weight
                let top = rs.levi_weyl_dimension(&lambda, diagram.local_index(alpha));
                let one = Rational::ONE;
                let v = FractionalPreHodge::new([(r, -r, top), (r - one, one - r, dim - top)]);
                (Some(r), v, (one - r, r))
            }
        };
        points.push(SymplecticPoint {
            node,
            component: c,
            mu_node: mu_of[c],
            r,
            dim,
            v,
            f_s,
        });
    }

    let f_points = (0..cover.len())
        .map(|x| EtalePoint {
            over: cover.over[x],
            bidegree: if phi.phi.contains(&x) {
                int(1, 0)
            } else if phi.phi.contains(&cover.conjugation[x]) {
                int(0, 1)
            } else {
                int(0, 0)
            },
            rank: 1,
        })
        .collect();
    let f = EtaleModule::new(comps, f_points, Some(cover.conjugation.clone()))
        .map_err(|e| Error::consistency(format!("F: {e}")))?;

    let index_in_s = |v: usize| s.binary_search(&v).expect("S is stable under opposition");
    let f_s = EtaleModule::new(
        comps,
        points
            .iter()
            .map(|p| EtalePoint {
                over: p.component,
                bidegree: p.f_s,
                rank: 1,
            })
            .collect(),
        Some(s.iter().map(|&v| index_in_s(tau.apply(v))).collect()),
    )
    .map_err(|e| Error::consistency(format!("F_S: {e}")))?;

    // W_F = F (x)_E F_S: pairs of points over the same component, lying
    // over S
    let mut w_points = Vec::new();
    let mut w_index = BTreeMap::new();
    for (k, p) in points.iter().enumerate() {
        for x in (0..cover.len()).filter(|&x| cover.over[x] == p.component) {
            w_index.insert((x, k), w_points.len());
            w_points.push(EtalePoint {
                over: k,
                bidegree: add(f.points[x].bidegree, p.f_s),
                rank: 1,
            });
        }
    }
    let mut w_conj = vec![0; w_points.len()];
    for (&(x, k), &i) in &w_index {
        let tk = index_in_s(tau.apply(points[k].node));
        w_conj[i] = w_index[&(cover.conjugation[x], tk)];
    }
    let w_f = EtaleModule::new(s.len(), w_points, Some(w_conj)).map_err(|e| Error::consistency(format!("W_F: {e}")))?;

    let pieces: Vec<FractionalPreHodge> = points
        .iter()
        .map(|p| FractionalPreHodge::new(p.v.entries().map(|(b, d)| (b.0, b.1, d * n))))
        .collect();
    let mut v = FractionalPreHodge::default();
    for piece in &pieces {
        v.extend(piece);
    }
    let v_prime = tensor_over_etale(&w_f, &pieces)?;
    let w_f_hodge = w_f.hodge();

    let mut problems = Vec::new();
    for (name, h) in [
        ("V", &v),
        ("F", &f.hodge()),
        ("F_S", &f_s.hodge()),
        ("W_F", &w_f_hodge),
        ("V'", &v_prime),
    ] {
        if !h.is_symmetric() {
            problems.push(format!("{name} = {h} is not conjugation symmetric"));
        }
    }
    for (name, m) in [("F", &f), ("F_S", &f_s), ("W_F", &w_f)] {
        if !cm_rank_one(m) {
            problems.push(format!("{name} is not of CM type"));
        }
    }
    if !w_f_hodge.is_pure(Rational::ONE) {
        problems.push(format!("W_F = {w_f_hodge} is not pure of weight 1"));
    }
    let allowed: BTreeSet<Bidegree> = [int(1, 0), int(0, 1)].into();
    if !v_prime.is_classical() || !v_prime.bidegrees().is_subset(&allowed) {
        problems.push(format!("V' = {v_prime} is not of type {{(1,0),(0,1)}}"));
    }
    let dim_v_prime = v_prime.dim();
    let expected: u64 = 2 * n * points.iter().map(|p| p.dim).sum::<u64>();
    if dim_v_prime != expected || dim_v_prime % 2 != 0 {
        problems.push(format!("dim V' = {dim_v_prime}, expected {expected}"));
    }
    if !problems.is_empty() {
        return Err(Error::consistency(problems.join("; ")));
    }
    Ok(DeligneReport {
        ty,
        n,
        s,
        points,
        cover: cover.clone(),
        phi,
        f,
        f_s,
        w_f,
        v,
        w_f_hodge,
        v_prime,
        dim_v_prime,
        abelian_variety_dim: dim_v_prime / 2,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeligneSweep {
    pub diagrams: usize,
    pub constructions: usize,
    pub failures: Vec<String>,
}

/// Runs [`deligne_construct`] with `n = 1` on every symplectic populated
/// diagram of the enumerated family, over the split cover and every valid
/// partial CM type.
pub fn deligne_sweep(bounds: &Bounds, jobs: usize) -> Result<DeligneSweep> {
    let diagrams: Vec<_> = enumerate_diagrams(bounds)?
        .into_iter()
        .filter(|d| d.ty.is_symplectic_populated())
        .collect();
    let results = par_map(jobs, &diagrams, |d| {
        let comps = d.diagram.base().diagram().components().len();
        let cover = QuadraticCover::split(comps);
        let mut count = 0;
        let mut failures = Vec::new();
        match PartialCMType::all(&d.diagram, &cover) {
            Ok(phis) => {
                for phi in phis {
                    count += 1;
                    if let Err(e) = deligne_construct(&d.diagram, &cover, &phi, 1) {
                        failures.push(format!("{} phi {:?}: {e}", d.label, phi.phi));
                    }
                }
            }
            Err(e) => failures.push(format!("{}: {e}", d.label)),
        }
        (count, failures)
    });
    let mut out = DeligneSweep {
        diagrams: diagrams.len(),
        ..Default::default()
    };
    for (c, f) in results {
        out.constructions += c;
        out.failures.extend(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaction::EquivariantDiagram;
    use crate::perm::{Perm, PermGroup};
    use crate::rational::q;
    use crate::rootsys::{DynkinDiagram, SimpleType};
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ddd(spec: &[&str], gens: &[&str], mu: &[usize]) -> DeligneDynkinDiagram {
        let types: Vec<SimpleType> = spec.iter().map(|s| s.parse().unwrap()).collect();
        let d = DynkinDiagram::build(&types);
        let n = d.node_count();
        let gens = gens.iter().map(|s| Perm::from_cycles(s, n).unwrap()).collect();
        let base = EquivariantDiagram::new(d, PermGroup::new(n, gens).unwrap()).unwrap();
        DeligneDynkinDiagram::checked(base, mu.iter().copied().collect()).unwrap()
    }

    #[test]
    fn weights_and_classicality() {
        let h = FractionalPreHodge::new([(r(1), r(0), 1), (r(0), r(1), 1)]);
        assert_eq!(h.weight(), Some(r(1)));
        assert_eq!(h.dim(), 2);
        assert!(h.is_classical());
        let z = FractionalPreHodge::new([(r(0), r(0), 5)]);
        assert_eq!(z.weight_profile(), BTreeMap::from([(r(0), 5)]));
        let half = q(1, 2);
        let mixed = FractionalPreHodge::new([(half, half, 2), (r(1), r(0), 1), (r(0), r(1), 1)]);
        assert_eq!(mixed.weight_profile(), BTreeMap::from([(r(1), 4)]));
        assert!(!mixed.is_classical());
        let frac = FractionalPreHodge::new([(half, -half, 1), (-half, half, 1)]);
        assert!(!frac.is_classical());
        assert!(FractionalPreHodge::default().is_classical());
        assert!(FractionalPreHodge::checked([(r(1), r(0), 1)]).is_err());
    }

    #[test]
    fn tensor_examples() {
        let a = FractionalPreHodge::new([(r(1), r(0), 2), (r(0), r(1), 2)]);
        let unit = FractionalPreHodge::new([(r(0), r(0), 1)]);
        assert_eq!(a.tensor(&unit), a);
        let x = FractionalPreHodge::new([(r(1), r(0), 1)]);
        let y = FractionalPreHodge::new([(r(0), r(1), 1)]);
        assert_eq!(x.tensor(&y), FractionalPreHodge::new([(r(1), r(1), 1)]));
        assert!(a.tensor(&a).is_symmetric());
    }

    #[test]
    fn etale_modules() {
        let w = EtaleModule::new(
            1,
            vec![EtalePoint {
                over: 0,
                bidegree: int(0, 0),
                rank: 1,
            }],
            None,
        )
        .unwrap();
        let v = FractionalPreHodge::new([(r(1), r(0), 3), (r(0), r(1), 3)]);
        assert_eq!(tensor_over_etale(&w, std::slice::from_ref(&v)).unwrap(), v);
        assert!(tensor_over_etale(&w, &[]).is_err());
        let empty = EtaleModule::new(0, vec![], None).unwrap();
        assert!(tensor_over_etale(&empty, &[]).unwrap().is_empty());
        assert!(cm_rank_one(&empty));
        let fat = EtaleModule::new(
            1,
            vec![EtalePoint {
                over: 0,
                bidegree: int(0, 0),
                rank: 2,
            }],
            None,
        )
        .unwrap();
        assert!(!cm_rank_one(&fat));
        // conjugation must swap bidegrees
        let bad = vec![
            EtalePoint {
                over: 0,
                bidegree: int(1, 0),
                rank: 1,
            },
            EtalePoint {
                over: 0,
                bidegree: int(1, 0),
                rank: 1,
            },
        ];
        assert!(EtaleModule::new(1, bad, Some(vec![1, 0])).is_err());
    }

    #[test]
    fn b3_worked_case() {
        // mu at the first node; S is the short node with label 1/2
        let d = ddd(&["B3"], &[], &[0]);
        let cover = QuadraticCover::split(1);
        let phis = PartialCMType::all(&d, &cover).unwrap();
        assert_eq!(phis.len(), 1);
        assert!(phis[0].phi.is_empty());
        let rep = deligne_construct(&d, &cover, &phis[0], 1).unwrap();
        assert_eq!(rep.s, vec![2]);
        let half = q(1, 2);
        assert_eq!(rep.points[0].r, Some(half));
        assert_eq!(rep.points[0].f_s, (half, half));
        assert_eq!(
            rep.points[0].v.bidegrees(),
            BTreeSet::from([(half, -half), (-half, half)])
        );
        // the spin representation splits 4 + 4
        assert_eq!(rep.points[0].dim, 8);
        assert_eq!(rep.points[0].v.h(half, -half), 4);
        assert!(rep.f.points.iter().all(|p| p.bidegree == int(0, 0)));
        assert_eq!(rep.w_f_hodge, FractionalPreHodge::new([(half, half, 2)]));
        assert_eq!(rep.v_prime, FractionalPreHodge::new([(r(1), r(0), 8), (r(0), r(1), 8)]));
        assert_eq!(rep.abelian_variety_dim, 8);
    }

    #[test]
    fn uncovered_components_take_the_cm_type() {
        // two A1's swapped, mu on one: the other is missed by mu
        let d = ddd(&["A1", "A1"], &["(0 1)"], &[0]);
        let cover = QuadraticCover::split(2);
        let phis = PartialCMType::all(&d, &cover).unwrap();
        assert_eq!(phis.len(), 2);
        for phi in &phis {
            let rep = deligne_construct(&d, &cover, phi, 2).unwrap();
            let missed = rep.points.iter().find(|p| p.component == 1).unwrap();
            assert_eq!(missed.r, None);
            assert_eq!(missed.v.bidegrees(), BTreeSet::from([int(0, 0)]));
            assert_eq!(missed.f_s, int(0, 0));
            let on_missed: BTreeSet<Bidegree> = rep
                .f
                .points
                .iter()
                .filter(|p| p.over == 1)
                .map(|p| p.bidegree)
                .collect();
            assert_eq!(on_missed, BTreeSet::from([int(1, 0), int(0, 1)]));
            assert_eq!(rep.dim_v_prime, 2 * 2 * 4);
        }
    }

    #[test]
    fn invalid_choices_are_rejected() {
        let d = ddd(&["A1", "A1"], &["(0 1)"], &[0]);
        let cover = QuadraticCover::split(2);
        let bad = PartialCMType {
            phi: BTreeSet::from([0]),
        };
        assert!(deligne_construct(&d, &cover, &bad, 1).is_err());
        assert!(PartialCMType::new(&d, &cover, BTreeSet::from([2, 3])).is_err());
        assert!(PartialCMType::new(&d, &cover, BTreeSet::new()).is_err());
        assert!(QuadraticCover::new(1, vec![0, 0], vec![0, 1]).is_err());
        let ok = PartialCMType::new(&d, &cover, BTreeSet::from([3])).unwrap();
        assert!(deligne_construct(&d, &cover, &ok, 0).is_err());
        // D4 with a triality orbit of the special node is not symplectic
        let tri = ddd(&["D4"], &["(0 2 3)"], &[0]);
        let c1 = QuadraticCover::split(1);
        assert!(deligne_construct(&tri, &c1, &PartialCMType { phi: BTreeSet::new() }, 1).is_err());
    }

    #[test]
    fn small_family_sweep() {
        let b = Bounds {
            max_order: 4,
            max_rank: 3,
            ..Bounds::default()
        };
        let sw = deligne_sweep(&b, 1).unwrap();
        assert!(sw.failures.is_empty(), "{:?}", sw.failures);
        assert!(sw.constructions >= sw.diagrams && sw.diagrams > 0);
    }

    proptest! {
        #[test]
        fn tensor_keeps_symmetry_and_adds_weights(
            a in prop::collection::vec((-4i64..4, -4i64..4, 1u64..4, 1i64..4), 0..4),
            b in prop::collection::vec((-4i64..4, -4i64..4, 1u64..4, 1i64..4), 0..4),
        ) {
            let sym = |v: &[(i64, i64, u64, i64)]| {
                FractionalPreHodge::new(v.iter().flat_map(|&(p, q_, d, den)| {
                    [(q(p, den), q(q_, den), d), (q(q_, den), q(p, den), d)]
                }))
            };
            let (x, y) = (sym(&a), sym(&b));
            let t = x.tensor(&y);
            prop_assert!(t.is_symmetric());
            prop_assert_eq!(t.dim(), x.dim() * y.dim());
            for w in t.weight_profile().keys() {
                prop_assert!(x.weight_profile().keys().any(|u| y.weight_profile().keys().any(|v| *u + *v == *w)));
            }
        }
    }
}
