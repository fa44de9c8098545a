//! Permutations, concrete permutation groups, and small finite-group
//! utilities (subgroup closure, cyclic subgroups, subgroup enumeration).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image list: `self.0[i]` is the
/// image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its image list, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::input(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        Perm(images)
    }

    /// Parses cycle notation such as `(0 1)(2 3 4)` on `degree` points.
    /// `()` or the empty string is the identity.
    pub fn from_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::input(format!("expected `(` in cycle notation `{s}`")));
            };
            let Some(end) = body.find(')') else {
                return Err(Error::input(format!("unclosed cycle in `{s}`")));
            };
            let cycle: Vec<usize> = body[..end]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::input(format!("bad point `{t}` in `{s}`")))
                })
                .collect::<Result<_>>()?;
            for &p in &cycle {
                if p >= degree {
                    return Err(Error::input(format!("point {p} out of range 0..{degree} in `{s}`")));
                }
                if seen[p] {
                    return Err(Error::input(format!("point {p} repeated in `{s}`")));
                }
                seen[p] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()];
            }
            rest = body[end + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self.then(other)` applies `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    /// Composition in the functional convention: `(a.compose(b))(x) = a(b(x))`.
    pub fn compose(&self, inner: &Perm) -> Perm {
        inner.then(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut out = Perm::identity(self.degree());
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    /// Disjoint union: `self` on `0..n`, `other` shifted onto `n..n+m`.
    pub fn disjoint_union(&self, other: &Perm) -> Perm {
        let n = self.degree();
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + n));
        Perm(v)
    }

    /// Restricts to `range`, which must be invariant; points are shifted to
    /// start at zero.
    pub fn restrict_to(&self, range: std::ops::Range<usize>) -> Perm {
        let start = range.start;
        Perm(range.map(|i| self.0[i] - start).collect())
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            if seen[i] {
                continue;
            }
            let mut cyc = vec![i];
            seen[i] = true;
            let mut j = self.0[i];
            while j != i {
                seen[j] = true;
                cyc.push(j);
                j = self.0[j];
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Cycle notation with fixed points omitted; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", body.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// A permutation group given by generators, with its elements enumerated by
/// breadth-first closure. Element 0 is always the identity and the element
/// order is deterministic (BFS over generators in the given order).
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .field("order", &self.order())
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::input(format!(
                    "generator {g} has degree {} but the group acts on {degree} points",
                    g.degree()
                )));
            }
        }
        Ok(Self::closure(degree, generators))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::closure(degree, Vec::new())
    }

    fn closure(degree: usize, generators: Vec<Perm>) -> Self {
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let h = elements[i].then(g);
                if !index.contains_key(&h) {
                    index.insert(h.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(h);
                }
            }
        }
        PermGroup {
            degree,
            generators,
            elements,
            index,
        }
    }

    /// The cyclic group of order `n` acting regularly.
    pub fn cyclic(n: usize) -> Self {
        if n <= 1 {
            return PermGroup::trivial(1);
        }
        let rot = Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("rotation");
        PermGroup::new(n, vec![rot]).expect("cyclic")
    }

    /// The symmetry group of a regular `n`-gon, of order `2n`; needs `n >= 3`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3, "dihedral group needs n >= 3");
        let rot = Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("rotation");
        let refl = Perm::from_images((0..n).map(|i| (n - i) % n).collect()).expect("reflection");
        PermGroup::new(n, vec![rot, refl]).expect("dihedral")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// True if every element of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        let mut orbit = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if orbit.insert(z) {
                    stack.push(z);
                }
            }
        }
        orbit
    }

    /// Orbits on the full point set, ordered by smallest element.
    pub fn orbits(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// All distinct cyclic subgroups, as sorted element-index sets together
    /// with the smallest-index generating element. The trivial subgroup is
    /// first.
    pub fn cyclic_subgroups(&self) -> Vec<(usize, Vec<usize>)> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        for (i, g) in self.elements.iter().enumerate() {
            let mut members = Vec::new();
            let mut p = Perm::identity(self.degree);
            loop {
                members.push(self.index[&p]);
                p = p.then(g);
                if p.is_identity() {
                    break;
                }
            }
            members.sort_unstable();
            if seen.insert(members.clone()) {
                out.push((i, members));
            }
        }
        out
    }

    /// The subgroup of elements satisfying `pred`, generated from the
    /// qualifying elements themselves. `pred` must describe a subgroup.
    pub fn subgroup_where(&self, pred: impl Fn(&Perm) -> bool) -> PermGroup {
        let gens: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| !g.is_identity() && pred(g))
            .cloned()
            .collect();
        PermGroup::closure(self.degree, minimal_generators(self.degree, gens))
    }
}

/// Greedily drops generators that are already in the span of earlier ones.
pub(crate) fn minimal_generators(degree: usize, candidates: Vec<Perm>) -> Vec<Perm> {
    let mut kept: Vec<Perm> = Vec::new();
    let mut span = PermGroup::closure(degree, Vec::new());
    for g in candidates {
        if !span.contains(&g) {
            kept.push(g);
            span = PermGroup::closure(degree, kept.clone());
        }
    }
    kept
}

impl FromStr for Perm {
    type Err = Error;

    /// Image-list syntax `[1, 0, 2]`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::input(format!("expected `[..]` image list, got `{s}`")))?;
        let images = body
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::input(format!("bad image `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }
}

/// A finite group with an explicit multiplication table, built from a
/// permutation group. Used where the group is small and many products are
/// needed (subgroup enumeration, Goursat sweeps).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<u16>>,
    inverse: Vec<u16>,
}

impl FiniteGroup {
    pub fn from_perm_group(name: impl Into<String>, g: &PermGroup) -> Self {
        let n = g.order();
        let mut table = vec![vec![0u16; n]; n];
        for (i, a) in g.elements().iter().enumerate() {
            for (j, b) in g.elements().iter().enumerate() {
                // a*b = "apply b then a"
                table[i][j] = g.index_of(&b.then(a)).expect("closed") as u16;
            }
        }
        let inverse = (0..n)
            .map(|i| table[i].iter().position(|&x| x == 0).unwrap() as u16)
            .collect();
        FiniteGroup {
            name: name.into(),
            table,
            inverse,
        }
    }

    /// Direct product with element `(a, b)` at index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let mut table = vec![vec![0u16; n * m]; n * m];
        for a in 0..n {
            for b in 0..m {
                for c in 0..n {
                    for d in 0..m {
                        table[a * m + b][c * m + d] = (self.mul(a, c) * m + other.mul(b, d)) as u16;
                    }
                }
            }
        }
        let inverse = (0..n * m)
            .map(|i| (self.inv(i / m) * m + other.inv(i % m)) as u16)
            .collect();
        FiniteGroup {
            name: format!("{} x {}", self.name, other.name),
            table,
            inverse,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Closure of a generating set, returned as a sorted element list.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Every subgroup, found by repeatedly adjoining one element to known
    /// subgroups. Subgroups are returned as sorted element lists in a
    /// deterministic order (by size, then lexicographically).
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut known: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let trivial = vec![0usize];
        known.insert(trivial.clone(), Vec::new());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            let gens = known[&h].clone();
            let mut member = vec![false; n];
            for &x in &h {
                member[x] = true;
            }
            for g in 0..n {
                if member[g] {
                    continue;
                }
                let mut ng = gens.clone();
                ng.push(g);
                let k = self.generate(&ng);
                if !known.contains_key(&k) {
                    known.insert(k.clone(), ng);
                    frontier.push(k);
                }
            }
        }
        let mut subs: Vec<Vec<usize>> = known.into_keys().collect();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        subs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles("(0 1)", n).unwrap());
            let cyc: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            gens.push(Perm::from_cycles(&format!("({})", cyc.join(" ")), n).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Perm::from_cycles("(0 2)(1 3 4)", 6).unwrap();
        assert_eq!(p.images(), &[2, 3, 0, 4, 1, 5]);
        assert_eq!(p.to_cycle_string(), "(0 2)(1 3 4)");
        assert_eq!(Perm::from_cycles("()", 3).unwrap(), Perm::identity(3));
        assert_eq!(Perm::identity(3).to_cycle_string(), "()");
        assert!(Perm::from_cycles("(0 0)", 3).is_err());
        assert!(Perm::from_cycles("(0 5)", 3).is_err());
        assert!(Perm::from_cycles("(0 1", 3).is_err());
    }

    #[test]
    fn composition_conventions() {
        let a = Perm::from_cycles("(0 1)", 3).unwrap();
        let b = Perm::from_cycles("(1 2)", 3).unwrap();
        // a after b
        let ab = a.compose(&b);
        assert_eq!(ab.apply(1), a.apply(b.apply(1)));
        assert_eq!(b.then(&a), ab);
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(Perm::from_cycles("(0 1 2)", 3).unwrap().order(), 3);
    }

    #[test]
    fn symmetric_group_orders() {
        assert_eq!(sym(1).order(), 1);
        assert_eq!(sym(3).order(), 6);
        assert_eq!(sym(4).order(), 24);
    }

    #[test]
    fn cyclic_subgroups_of_s3() {
        // trivial, three transpositions, one 3-cycle subgroup
        let cs = sym(3).cyclic_subgroups();
        assert_eq!(cs.len(), 5);
        assert_eq!(cs[0].1, vec![0]);
        let sizes: Vec<usize> = cs.iter().map(|c| c.1.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 1);
    }

    #[test]
    fn subgroups_of_s4() {
        let g = FiniteGroup::from_perm_group("S4", &sym(4));
        assert_eq!(g.all_subgroups().len(), 30);
        let c2 = FiniteGroup::from_perm_group("C2", &sym(2));
        let v4 = c2.product(&c2);
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.all_subgroups().len(), 5);
    }
}
