//! Adjoint and hyperadjoint objects on reductive data, and Goursat's lemma
//! for finite groups.
//!
//! A representation is modelled by the datum of its image group and its
//! dimension only. Weights are not tracked; the hyperadjoint chain needs
//! nothing else.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::par_map;
use crate::perm::{FiniteGroup, Perm, PermGroup};
use crate::rootsys::{Family, RootSystem, SimpleType};

/// Dimension of the simple Lie algebra of the given type.
pub fn lie_dim(family: Family, rank: usize) -> Result<u64> {
    Ok(SimpleType::new(family, rank)?.lie_dim())
}

/// The same dimension counted from the root system of the Cartan matrix.
pub fn lie_dim_from_roots(t: SimpleType) -> u64 {
    RootSystem::new(&t.cartan()).lie_dim()
}

/// A connected reductive group up to isogeny: simple factors and the rank
/// of the central torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReductiveDatum {
    simple: Vec<SimpleType>,
    center_rank: usize,
    /// Bookkeeping only: whether the group is known to be adjoint.
    adjoint: bool,
}

impl ReductiveDatum {
    pub fn new(mut simple: Vec<SimpleType>, center_rank: usize, adjoint: bool) -> Result<Self> {
        if adjoint && center_rank > 0 {
            return Err(Error::input("an adjoint group has no central torus"));
        }
        simple.sort();
        // the trivial group counts as adjoint
        let adjoint = adjoint || (center_rank == 0 && simple.is_empty());
        Ok(ReductiveDatum {
            simple,
            center_rank,
            adjoint,
        })
    }

    pub fn trivial() -> Self {
        ReductiveDatum {
            simple: Vec::new(),
            center_rank: 0,
            adjoint: true,
        }
    }

    pub fn simple(&self) -> &[SimpleType] {
        &self.simple
    }

    pub fn center_rank(&self) -> usize {
        self.center_rank
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn is_trivial(&self) -> bool {
        self.simple.is_empty() && self.center_rank == 0
    }

    /// `dim Lie(G) = rank Z(G) + sum of the simple dimensions`.
    pub fn lie_dim(&self) -> u64 {
        self.center_rank as u64 + self.simple.iter().map(|t| t.lie_dim()).sum::<u64>()
    }

    /// The adjoint quotient `G / Z(G)`.
    pub fn adjoint_quotient(&self) -> Self {
        if self.simple.is_empty() {
            return ReductiveDatum::trivial();
        }
        ReductiveDatum {
            simple: self.simple.clone(),
            center_rank: 0,
            adjoint: true,
        }
    }
}

impl fmt::Display for ReductiveDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.simple.iter().map(|t| t.to_string()).collect();
        if self.center_rank > 0 {
            parts.push(format!("T{}", self.center_rank));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("+"))?;
        if self.adjoint && !self.simple.is_empty() {
            write!(f, " (adjoint)")?;
        }
        Ok(())
    }
}

/// Parses `A1+B2+T3`, with an optional `:ad` suffix for an adjoint group.
/// `T<k>` is a central torus of rank `k`; `1` is the trivial group.
impl FromStr for ReductiveDatum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, adjoint) = match s.strip_suffix(":ad") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut simple = Vec::new();
        let mut center = 0usize;
        for part in body.split('+').map(str::trim) {
            if part == "1" || part.is_empty() {
                continue;
            }
            if let Some(k) = part.strip_prefix('T') {
                center += k
                    .parse::<usize>()
                    .map_err(|_| Error::input(format!("bad torus rank in `{part}`")))?;
            } else {
                simple.push(part.parse()?);
            }
        }
        ReductiveDatum::new(simple, center, adjoint)
    }
}

/// An object of a semisimple Tannakian category, seen through the group it
/// generates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TannakianObject {
    pub acting: ReductiveDatum,
    pub dim: u64,
}

impl TannakianObject {
    pub fn new(acting: ReductiveDatum, dim: u64) -> Result<Self> {
        if dim == 0 && !acting.is_trivial() {
            return Err(Error::input("the zero object generates the trivial category"));
        }
        Ok(TannakianObject { acting, dim })
    }

    pub fn zero() -> Self {
        TannakianObject {
            acting: ReductiveDatum::trivial(),
            dim: 0,
        }
    }

    /// The adjoint representation of an adjoint group.
    pub fn lie_algebra(acting: &ReductiveDatum) -> Self {
        let g = acting.adjoint_quotient();
        TannakianObject {
            dim: g.lie_dim(),
            acting: g,
        }
    }
}

/// `V -> Lie(G)` where `G` is the group of `<V>`. The centre becomes trivial
/// representations, so the new group is `G^ad`.
pub fn adjoint_object(v: &TannakianObject) -> TannakianObject {
    if v.acting.is_trivial() {
        return TannakianObject::zero();
    }
    TannakianObject {
        dim: v.acting.lie_dim(),
        acting: v.acting.adjoint_quotient(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperadjointChain {
    /// `V^(0), ..., V^(index)`; the last entry is the hyperadjoint object.
    pub chain: Vec<TannakianObject>,
    /// First `i` with `V^(i) = V^(i+1)`.
    pub index: usize,
}

impl HyperadjointChain {
    pub fn object(&self) -> &TannakianObject {
        self.chain.last().expect("chain starts with V")
    }
}

/// Iterates [`adjoint_object`] until it stabilises. On reductive data this
/// happens by the second step; a longer chain is reported as an error.
pub fn hyperadjoint(v: &TannakianObject) -> Result<HyperadjointChain> {
    let mut chain = vec![v.clone()];
    loop {
        let last = chain.last().unwrap();
        let next = adjoint_object(last);
        if &next == last {
            break;
        }
        chain.push(next);
        // dimensions drop from step one on, so this bounds the loop anyway
        if chain.len() > 8 {
            break;
        }
    }
    let index = chain.len() - 1;
    if index > 2 {
        return Err(Error::consistency(format!(
            "hyperadjoint chain of {} stabilised at index {index}",
            v.acting
        )));
    }
    Ok(HyperadjointChain { chain, index })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HyperadjointSweep {
    pub data: usize,
    pub index_counts: [usize; 3],
    pub failures: Vec<String>,
}

/// Every datum with at most `max_components` simple factors of rank at most
/// `max_rank` and centre rank at most `max_center`, starting from a
/// non-adjoint faithful object of dimension one more than the Lie algebra.
/// Checks the stabilisation index and the dimension of `V^ha` against
/// root counts.
pub fn hyperadjoint_sweep(max_components: usize, max_rank: usize, max_center: usize) -> HyperadjointSweep {
    let types = SimpleType::all_up_to(max_rank);
    let root_dims: BTreeMap<SimpleType, u64> = types.iter().map(|&t| (t, lie_dim_from_roots(t))).collect();
    let mut out = HyperadjointSweep::default();
    let mut multisets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = multisets.clone();
    for _ in 0..max_components {
        let mut next = Vec::new();
        for m in &frontier {
            let from = m.last().copied().unwrap_or(0);
            for k in from..types.len() {
                let mut m2 = m.clone();
                m2.push(k);
                next.push(m2);
            }
        }
        multisets.extend(next.iter().cloned());
        frontier = next;
    }
    for m in &multisets {
        let simple: Vec<SimpleType> = m.iter().map(|&k| types[k]).collect();
        let expected: u64 = simple.iter().map(|t| root_dims[t]).sum();
        for center in 0..=max_center {
            let d = ReductiveDatum::new(simple.clone(), center, false).expect("valid datum");
            out.data += 1;
            let v = TannakianObject::new(d.clone(), d.lie_dim() + 1).expect("positive dimension");
            match hyperadjoint(&v) {
                Ok(c) => {
                    out.index_counts[c.index] += 1;
                    if c.object().dim != expected {
                        out.failures
                            .push(format!("{d}: dim V^ha = {}, roots give {expected}", c.object().dim));
                    }
                    if center == 0 && c.index > 1 {
                        out.failures.push(format!("{d}: index {} without a centre", c.index));
                    }
                }
                Err(e) => out.failures.push(e.to_string()),
            }
        }
    }
    out
}

fn multiset(v: &[SimpleType]) -> BTreeMap<SimpleType, usize> {
    let mut m = BTreeMap::new();
    for t in v {
        *m.entry(*t).or_default() += 1;
    }
    m
}

fn sub_multiset(a: &BTreeMap<SimpleType, usize>, b: &BTreeMap<SimpleType, usize>) -> bool {
    a.iter().all(|(t, k)| b.get(t).copied().unwrap_or(0) >= *k)
}

fn union(a: &[SimpleType], b: &[SimpleType]) -> BTreeMap<SimpleType, usize> {
    let mut m = multiset(a);
    for t in b {
        *m.entry(*t).or_default() += 1;
    }
    m
}

/// For `V = V1 + V2` with group `G` inside `G1 x G2`, checks that `V^ha` is
/// a summand of `V1^ha + V2^ha`: its simple factors form a sub-multiset of
/// the union and its dimension is at most the sum.
///
/// `joint` must look like a subdirect product: it contains the simple
/// factors of each side and is contained in their union.
pub fn ha_sum_summand_check(v1: &TannakianObject, v2: &TannakianObject, joint: &ReductiveDatum) -> Result<bool> {
    let j = multiset(&joint.simple);
    let u = union(&v1.acting.simple, &v2.acting.simple);
    if !sub_multiset(&j, &u)
        || !sub_multiset(&multiset(&v1.acting.simple), &j)
        || !sub_multiset(&multiset(&v2.acting.simple), &j)
        || joint.center_rank > v1.acting.center_rank + v2.acting.center_rank
    {
        return Err(Error::precondition(format!(
            "{joint} is not subdirect in {} x {}",
            v1.acting, v2.acting
        )));
    }
    let v = TannakianObject::new(joint.clone(), v1.dim + v2.dim)?;
    let ha = hyperadjoint(&v)?;
    let h1 = hyperadjoint(v1)?;
    let h2 = hyperadjoint(v2)?;
    let contained = sub_multiset(
        &multiset(&ha.object().acting.simple),
        &union(&h1.object().acting.simple, &h2.object().acting.simple),
    );
    Ok(contained && ha.object().dim <= h1.object().dim + h2.object().dim)
}

/// A subgroup of `G1 x G2` whose projections are onto.
#[derive(Clone, Debug)]
pub struct SubdirectProduct {
    g1: FiniteGroup,
    g2: FiniteGroup,
    /// Sorted pairs `(a, b)`.
    elements: Vec<(usize, usize)>,
}

impl SubdirectProduct {
    pub fn new(g1: FiniteGroup, g2: FiniteGroup, elements: Vec<(usize, usize)>) -> Result<Self> {
        let set: BTreeSet<(usize, usize)> = elements.into_iter().collect();
        let (n1, n2) = (g1.order(), g2.order());
        if set.iter().any(|&(a, b)| a >= n1 || b >= n2) {
            return Err(Error::input("element index out of range"));
        }
        if !set.contains(&(0, 0)) {
            return Err(Error::input("subset does not contain the identity"));
        }
        for &(a, b) in &set {
            for &(c, d) in &set {
                if !set.contains(&(g1.mul(a, c), g2.mul(b, d))) {
                    return Err(Error::input("subset is not closed under multiplication"));
                }
            }
        }
        let p1: BTreeSet<usize> = set.iter().map(|p| p.0).collect();
        let p2: BTreeSet<usize> = set.iter().map(|p| p.1).collect();
        if p1.len() != n1 || p2.len() != n2 {
            return Err(Error::input("a projection is not surjective"));
        }
        Ok(SubdirectProduct {
            g1,
            g2,
            elements: set.into_iter().collect(),
        })
    }

    pub fn groups(&self) -> (&FiniteGroup, &FiniteGroup) {
        (&self.g1, &self.g2)
    }

    pub fn elements(&self) -> &[(usize, usize)] {
        &self.elements
    }
}

/// The data of Goursat's lemma: normal subgroups `N1`, `N2` and an
/// isomorphism of the quotients, stored on coset indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoursatData {
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
    /// Coset index of each element of `G1` (cosets of `N1`).
    pub coset1: Vec<usize>,
    pub coset2: Vec<usize>,
    /// `iso[i]` is the coset of `N2` matched with coset `i` of `N1`.
    pub iso: Vec<usize>,
}

impl GoursatData {
    pub fn quotient_order(&self) -> usize {
        self.iso.len()
    }
}

fn cosets(g: &FiniteGroup, n: &[usize]) -> Vec<usize> {
    let mut out = vec![usize::MAX; g.order()];
    let mut next = 0;
    for a in 0..g.order() {
        if out[a] != usize::MAX {
            continue;
        }
        for &k in n {
            out[g.mul(a, k)] = next;
        }
        next += 1;
    }
    out
}

fn is_normal(g: &FiniteGroup, n: &[usize]) -> bool {
    let member: BTreeSet<usize> = n.iter().copied().collect();
    (0..g.order()).all(|x| n.iter().all(|&k| member.contains(&g.mul(g.mul(x, k), g.inv(x)))))
}

/// Computes the kernels and the quotient isomorphism, then checks that the
/// result is a well-defined isomorphism whose graph is exactly `s`.
pub fn goursat(s: &SubdirectProduct) -> Result<GoursatData> {
    let (g1, g2) = (&s.g1, &s.g2);
    let n1: Vec<usize> = s.elements.iter().filter(|p| p.1 == 0).map(|p| p.0).collect();
    let n2: Vec<usize> = s.elements.iter().filter(|p| p.0 == 0).map(|p| p.1).collect();
    let coset1 = cosets(g1, &n1);
    let coset2 = cosets(g2, &n2);
    let q = g1.order() / n1.len();
    let mut iso = vec![usize::MAX; q];
    for &(a, b) in &s.elements {
        let (i, j) = (coset1[a], coset2[b]);
        if iso[i] == usize::MAX {
            iso[i] = j;
        } else if iso[i] != j {
            return Err(Error::consistency("quotient map is not well defined"));
        }
    }
    let data = GoursatData {
        n1,
        n2,
        coset1,
        coset2,
        iso,
    };
    let problems = verify_goursat(s, &data);
    if !problems.is_empty() {
        return Err(Error::consistency(problems.join("; ")));
    }
    Ok(data)
}

/// Independent re-check of Goursat data; returns the problems found.
pub fn verify_goursat(s: &SubdirectProduct, d: &GoursatData) -> Vec<String> {
    let (g1, g2) = (&s.g1, &s.g2);
    let mut out = Vec::new();
    if !is_normal(g1, &d.n1) || !is_normal(g2, &d.n2) {
        out.push("a kernel is not normal".to_string());
    }
    let q = d.iso.len();
    if g1.order() != q * d.n1.len() || g2.order() != q * d.n2.len() {
        out.push("quotients have different orders".to_string());
    }
    let image: BTreeSet<usize> = d.iso.iter().copied().collect();
    if image.len() != q || image.iter().any(|&j| j >= q) {
        out.push("quotient map is not a bijection".to_string());
    }
    // homomorphism on representatives
    let rep = |coset: &[usize], i: usize| coset.iter().position(|&c| c == i).unwrap_or(0);
    for i in 0..q {
        for j in 0..q {
            let (a, b) = (rep(&d.coset1, i), rep(&d.coset1, j));
            let lhs = d.iso.get(d.coset1[g1.mul(a, b)]).copied();
            let (x, y) = (rep(&d.coset2, d.iso[i]), rep(&d.coset2, d.iso[j]));
            if lhs != Some(d.coset2[g2.mul(x, y)]) {
                out.push(format!("not a homomorphism on cosets {i}, {j}"));
                return out;
            }
        }
    }
    // the graph, pulled back to G1 x G2, is the input subgroup
    let mut graph = Vec::new();
    for a in 0..g1.order() {
        for b in 0..g2.order() {
            if d.iso.get(d.coset1[a]) == Some(&d.coset2[b]) {
                graph.push((a, b));
            }
        }
    }
    if graph != s.elements {
        out.push("graph reconstruction differs from the input subgroup".to_string());
    }
    out
}

/// The groups used by the exhaustive sweep: cyclic groups, dihedral groups
/// (with `C2 x C2` as the smallest), `S3` and `A4`, of order at most
/// `max_order`.
pub fn goursat_groups(max_order: usize) -> Vec<FiniteGroup> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.push(FiniteGroup::from_perm_group(format!("C{n}"), &PermGroup::cyclic(n)));
    }
    let v4 = PermGroup::new(
        4,
        vec![
            Perm::from_cycles("(0 1)", 4).unwrap(),
            Perm::from_cycles("(2 3)", 4).unwrap(),
        ],
    )
    .unwrap();
    let mut named = vec![("D2".to_string(), v4), ("S3".to_string(), PermGroup::dihedral(3))];
    for n in 4..=max_order / 2 {
        named.push((format!("D{n}"), PermGroup::dihedral(n)));
    }
    named.push((
        "A4".to_string(),
        PermGroup::new(
            4,
            vec![
                Perm::from_cycles("(0 1 2)", 4).unwrap(),
                Perm::from_cycles("(0 1)(2 3)", 4).unwrap(),
            ],
        )
        .unwrap(),
    ));
    for (name, g) in named {
        if g.order() <= max_order {
            out.push(FiniteGroup::from_perm_group(name, &g));
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoursatPairReport {
    pub g1: String,
    pub g2: String,
    pub subgroups: usize,
    pub subdirect: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoursatSweep {
    pub max_order: usize,
    pub pairs: Vec<GoursatPairReport>,
    pub subdirect: usize,
    pub failures: usize,
}

/// Subdirect subgroups of `G1 x G2`, as sorted pair lists.
pub fn subdirect_subgroups(g1: &FiniteGroup, g2: &FiniteGroup) -> (usize, Vec<Vec<(usize, usize)>>) {
    let p = g1.product(g2);
    let m = g2.order();
    let subs = p.all_subgroups();
    let total = subs.len();
    let out = subs
        .into_iter()
        .filter_map(|h| {
            let pairs: Vec<(usize, usize)> = h.iter().map(|&x| (x / m, x % m)).collect();
            let p1: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
            let p2: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
            (p1.len() == g1.order() && p2.len() == m).then_some(pairs)
        })
        .collect();
    (total, out)
}

/// Runs [`goursat`] on every subdirect subgroup of `G1 x G2` over all
/// ordered pairs from [`goursat_groups`].
pub fn goursat_sweep(max_order: usize, jobs: usize) -> GoursatSweep {
    let groups = goursat_groups(max_order);
    let pairs: Vec<(usize, usize)> = (0..groups.len())
        .flat_map(|i| (0..groups.len()).map(move |j| (i, j)))
        .collect();
    let reports = par_map(jobs, &pairs, |&(i, j)| {
        let (g1, g2) = (&groups[i], &groups[j]);
        let (total, subs) = subdirect_subgroups(g1, g2);
        let mut r = GoursatPairReport {
            g1: g1.name().to_string(),
            g2: g2.name().to_string(),
            subgroups: total,
            subdirect: subs.len(),
            failures: Vec::new(),
        };
        for (k, h) in subs.into_iter().enumerate() {
            let res = SubdirectProduct::new(g1.clone(), g2.clone(), h).and_then(|s| goursat(&s));
            if let Err(e) = res {
                r.failures.push(format!("subgroup {k}: {e}"));
            }
        }
        r
    });
    GoursatSweep {
        max_order,
        subdirect: reports.iter().map(|r| r.subdirect).sum(),
        failures: reports.iter().map(|r| r.failures.len()).sum(),
        pairs: reports,
    }
}
