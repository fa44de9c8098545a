//! Special nodes, the opposition involution and the symplectic-node test.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rational::Rational;

use super::roots::RootSystem;
use super::{affine_extension, diagram_automorphisms, ComponentKind, DynkinDiagram, Family, SimpleType};

/// Rank cap of the brute-force Weyl oracle (`|W(F4)| = 1152`).
pub const ORACLE_RANK_LIMIT: usize = 4;

/// A self-inverse, component-preserving permutation of the nodes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NodeInvolution(Perm);

impl NodeInvolution {
    pub fn perm(&self) -> &Perm {
        &self.0
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0.apply(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }
}

impl Serialize for NodeInvolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.images().serialize(s)
    }
}

/// The `Aut(Delta^+)`-orbit of `alpha_0`, intersected with the component.
pub fn special_nodes(d: &DynkinDiagram, component: usize) -> Result<Vec<usize>> {
    let ext = affine_extension(d, component)?;
    let t = d.component(component).kind.simple_type();
    let local = cached(&SPECIAL, (t, 0), || {
        let orbit = diagram_automorphisms(&ext).group.orbit(0);
        orbit.into_iter().filter(|&v| v != 0).map(|v| v - 1).collect()
    });
    Ok(local.into_iter().map(|v| d.global_node(component, v)).collect())
}

type LocalCache = OnceLock<Mutex<HashMap<(SimpleType, usize), Vec<usize>>>>;

static SPECIAL: LocalCache = OnceLock::new();
static SYMPLECTIC: LocalCache = OnceLock::new();

/// Per-type results are pure functions of the type, so they are memoised.
fn cached(cache: &LocalCache, key: (SimpleType, usize), compute: impl FnOnce() -> Vec<usize>) -> Vec<usize> {
    let map = cache.get_or_init(Default::default);
    if let Some(v) = map.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = compute();
    map.lock().unwrap().insert(key, v.clone());
    v
}

/// Local image of node `i` under `-w_0`, by type.
fn opposition_local(t: SimpleType, i: usize) -> usize {
    let n = t.rank;
    match t.family {
        Family::A => n - 1 - i,
        Family::D if n % 2 == 1 && i >= n - 2 => 2 * n - 3 - i,
        Family::E if n == 6 => match i {
            0 => 5,
            5 => 0,
            2 => 4,
            4 => 2,
            _ => i,
        },
        _ => i,
    }
}

fn finite_types(d: &DynkinDiagram) -> Result<Vec<SimpleType>> {
    d.components()
        .iter()
        .enumerate()
        .map(|(c, comp)| match comp.kind {
            ComponentKind::Finite(t) => Ok(t),
            ComponentKind::Affine(_) => Err(Error::precondition(format!("component {c} is affine"))),
        })
        .collect()
}

/// Closed-form opposition involution, componentwise.
pub fn opposition_involution(d: &DynkinDiagram) -> Result<NodeInvolution> {
    let types = finite_types(d)?;
    let mut images = Vec::with_capacity(d.node_count());
    for (c, t) in types.into_iter().enumerate() {
        let start = d.component(c).nodes.start;
        images.extend((0..t.rank).map(|i| start + opposition_local(t, i)));
    }
    Ok(NodeInvolution(Perm::from_images_unchecked(images)))
}

/// `-w_0` read off from the longest Weyl element, found by enumerating the
/// Weyl group of each component on its roots.
pub fn oppinv_bruteforce_oracle(d: &DynkinDiagram) -> Result<NodeInvolution> {
    let types = finite_types(d)?;
    let rank = d.node_count();
    if rank > ORACLE_RANK_LIMIT {
        return Err(Error::RankTooLarge {
            rank,
            limit: ORACLE_RANK_LIMIT,
        });
    }
    let mut images = Vec::with_capacity(rank);
    for (c, t) in types.into_iter().enumerate() {
        let start = d.component(c).nodes.start;
        let rs = RootSystem::new(&t.cartan());
        let w0 = rs.longest_element();
        for i in 0..t.rank {
            let simple: Vec<i64> = (0..t.rank).map(|k| i64::from(k == i)).collect();
            let image = &rs.roots()[w0.apply(rs.root_index(&simple).unwrap())];
            let neg: Vec<i64> = image.iter().map(|x| -x).collect();
            let j = neg
                .iter()
                .position(|&x| x == 1)
                .filter(|_| neg.iter().sum::<i64>() == 1)
                .ok_or_else(|| Error::consistency("-w0 does not permute the simple roots"))?;
            images.push(start + j);
        }
    }
    Ok(NodeInvolution(Perm::from_images_unchecked(images)))
}

/// `<alpha, omega + tau(omega)> = 1`, for `alpha` special.
pub fn is_symplectic_node(d: &DynkinDiagram, alpha: usize, omega: usize) -> Result<bool> {
    d.check_node(alpha)?;
    d.check_node(omega)?;
    let c = d.component_of(alpha);
    if d.component_of(omega) != c {
        return Err(Error::input(format!(
            "nodes {alpha} and {omega} lie in different components"
        )));
    }
    if !special_nodes(d, c)?.contains(&alpha) {
        return Err(Error::input(format!("node {alpha} is not special")));
    }
    let tau = opposition_involution(d)?;
    let s = d.pairing(alpha, omega)? + d.pairing(alpha, tau.apply(omega))?;
    Ok(s == Rational::ONE)
}

/// All `alpha`-symplectic nodes of the component of `alpha`.
pub fn symplectic_nodes(d: &DynkinDiagram, alpha: usize) -> Result<Vec<usize>> {
    d.check_node(alpha)?;
    let c = d.component_of(alpha);
    let t = d.component(c).kind.simple_type();
    let key = (t, d.local_index(alpha));
    if let Some(v) = SYMPLECTIC.get().and_then(|m| m.lock().unwrap().get(&key).cloned()) {
        return Ok(v.into_iter().map(|w| d.global_node(c, w)).collect());
    }
    let global = d
        .component(c)
        .nodes
        .clone()
        .filter_map(|w| is_symplectic_node(d, alpha, w).map(|b| b.then_some(w)).transpose())
        .collect::<Result<Vec<_>>>()?;
    let start = d.component(c).nodes.start;
    cached(&SYMPLECTIC, key, || global.iter().map(|w| w - start).collect());
    Ok(global)
}
