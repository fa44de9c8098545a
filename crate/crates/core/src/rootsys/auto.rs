//! Diagram automorphisms and Cartan-preserving bijections by backtracking.

use crate::perm::{minimal_generators, Perm, PermGroup};

use super::{CartanMatrix, DynkinDiagram};

/// The full automorphism group of a diagram plus a small generating set.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub group: PermGroup,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn generators(&self) -> &[Perm] {
        self.group.generators()
    }
}

/// Neighbour profile used to prune candidate images: the sorted list of
/// off-diagonal `(a_ij, a_ji)` pairs.
fn signature(c: &CartanMatrix, i: usize) -> Vec<(i64, i64)> {
    let mut s: Vec<(i64, i64)> = (0..c.size())
        .filter(|&j| j != i && c.get(i, j) != 0)
        .map(|j| (c.get(i, j), c.get(j, i)))
        .collect();
    s.sort_unstable();
    s
}

/// Visits every bijection `p` with `b[p(i)][p(j)] = a[i][j]`, in
/// lexicographic order of image vectors. `allowed(i, x)` can forbid
/// individual assignments. The visitor returns `false` to stop early.
pub fn cartan_isomorphisms(
    a: &CartanMatrix,
    b: &CartanMatrix,
    allowed: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = a.size();
    if n != b.size() {
        return;
    }
    let sa: Vec<_> = (0..n).map(|i| signature(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| signature(b, i)).collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(a, b, &sa, &sb, allowed, &mut image, &mut used, 0, visit);
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &CartanMatrix,
    b: &CartanMatrix,
    sa: &[Vec<(i64, i64)>],
    sb: &[Vec<(i64, i64)>],
    allowed: &dyn Fn(usize, usize) -> bool,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    i: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = a.size();
    if i == n {
        return visit(image);
    }
    for x in 0..n {
        if used[x] || sa[i] != sb[x] || !allowed(i, x) {
            continue;
        }
        if (0..i).any(|j| a.get(i, j) != b.get(x, image[j]) || a.get(j, i) != b.get(image[j], x)) {
            continue;
        }
        image[i] = x;
        used[x] = true;
        let go_on = search(a, b, sa, sb, allowed, image, used, i + 1, visit);
        used[x] = false;
        image[i] = usize::MAX;
        if !go_on {
            return false;
        }
    }
    true
}

/// All node permutations preserving the Cartan matrix.
pub fn diagram_automorphisms(d: &DynkinDiagram) -> AutomorphismGroup {
    let c = d.cartan();
    let mut all = Vec::new();
    cartan_isomorphisms(c, c, &|_, _| true, &mut |p| {
        all.push(Perm::from_images_unchecked(p.to_vec()));
        true
    });
    let n = c.size();
    let total = all.len();
    let gens = minimal_generators(n, all.into_iter().filter(|p| !p.is_identity()).collect());
    let group = PermGroup::new(n, gens).expect("automorphisms have full degree");
    debug_assert_eq!(group.order(), total);
    AutomorphismGroup { group }
}
