//! Exact root-system core.
//!
//! # Conventions
//!
//! Cartan matrices use `a[i][j] = <alpha_i^vee, alpha_j>`, so the row of a
//! short simple root carries the `-2` (or `-3`) entry of a multiple bond.
//!
//! Nodes inside a connected component follow Bourbaki's numbering. Local
//! index `i` (zero-based) is Bourbaki node `i + 1`:
//!
//! * `A_n`: a chain `1 - 2 - ... - n`.
//! * `B_n`: chain with `n` the short end (`n-1 => n`).
//! * `C_n`: chain with `n` the long end (`n-1 <= n`).
//! * `D_n` (`n >= 4`): chain `1 - ... - (n-2)`, with the fork nodes `n-1`
//!   and `n` both attached to `n-2`.
//! * `E_n`: chain `1 - 3 - 4 - ... - n`, with `2` attached to `4`.
//! * `F_4`: `1 - 2 => 3 - 4`, with `1, 2` long.
//! * `G_2`: `1` short, `2` long.
//!
//! In an affine extension the added node `alpha_0` is local index 0 and
//! Bourbaki node `i` sits at local index `i`.
//!
//! Global node identifiers of a multi-component diagram are consecutive,
//! component by component, in the order the components were given.

mod affine;
mod auto;
mod nodes;
mod roots;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use affine::{affine_cartan_from_highest_root, affine_extension};
pub use auto::{cartan_isomorphisms, diagram_automorphisms, AutomorphismGroup};
pub use nodes::{
    is_symplectic_node, oppinv_bruteforce_oracle, opposition_involution, special_nodes, symplectic_nodes,
    NodeInvolution, ORACLE_RANK_LIMIT,
};
pub use roots::RootSystem;

/// The letter of a finite Dynkin type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];

    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(Error::input(format!("unknown Dynkin type `{other}`"))),
        }
    }
}

/// A connected finite Dynkin type such as `D4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    /// Accepts `A_n (n >= 1)`, `B_n (n >= 2)`, `C_n (n >= 2)`, `D_n (n >= 4)`,
    /// `E6..E8`, `F4`, `G2`.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::input(format!(
                "invalid rank {rank} for type {}",
                family.letter()
            )))
        }
    }

    /// Every valid type of rank at most `max_rank`, without the
    /// duplicate `C_2 = B_2`.
    pub fn all_up_to(max_rank: usize) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for family in Family::ALL {
            for rank in 1..=max_rank {
                if family == Family::C && rank == 2 {
                    continue;
                }
                if let Ok(t) = SimpleType::new(family, rank) {
                    out.push(t);
                }
            }
        }
        out
    }

    pub fn cartan(&self) -> CartanMatrix {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..n - 1 {
                    bond(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..n - 3 {
                    bond(i, i + 1);
                }
                bond(n - 3, n - 2);
                bond(n - 3, n - 1);
            }
            Family::E => {
                bond(0, 2);
                bond(1, 3);
                for i in 2..n - 1 {
                    bond(i, i + 1);
                }
            }
            Family::F => {
                bond(0, 1);
                bond(1, 2);
                bond(2, 3);
            }
            Family::G => bond(0, 1),
        }
        match self.family {
            Family::B => a[n - 1][n - 2] = -2,
            Family::C => a[n - 2][n - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        CartanMatrix { entries: a }
    }

    /// Dimension of the simple Lie algebra: number of roots plus rank.
    pub fn lie_dim(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            Family::A => n * (n + 2),
            Family::B | Family::C => n * (2 * n + 1),
            Family::D => n * (2 * n - 1),
            Family::E => match n {
                6 => 78,
                7 => 133,
                _ => 248,
            },
            Family::F => 52,
            Family::G => 14,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl fmt::Debug for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SimpleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::input("empty type string"))?;
        let family: Family = letter.to_string().parse()?;
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest
            .parse()
            .map_err(|_| Error::input(format!("bad rank in type `{s}`")))?;
        SimpleType::new(family, rank)
    }
}

impl TryFrom<String> for SimpleType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SimpleType> for String {
    fn from(t: SimpleType) -> String {
        t.to_string()
    }
}

/// A generalized Cartan matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Validates the three structural axioms (diagonal 2, non-positive
    /// off-diagonal, symmetric zero pattern).
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::input("empty Cartan matrix"));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input("Cartan matrix is not square"));
            }
            if row[i] != 2 {
                return Err(Error::input(format!("diagonal entry ({i},{i}) is not 2")));
            }
            for (j, &x) in row.iter().enumerate() {
                if i != j && (x > 0 || (x == 0) != (entries[j][i] == 0)) {
                    return Err(Error::input(format!("bad off-diagonal entry ({i},{j})")));
                }
            }
        }
        Ok(CartanMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &CartanMatrix) -> CartanMatrix {
        let (n, m) = (self.size(), other.size());
        let mut e = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            e[i][..n].copy_from_slice(&self.entries[i]);
        }
        for i in 0..m {
            e[n + i][n..].copy_from_slice(&other.entries[i]);
        }
        CartanMatrix { entries: e }
    }

    /// Positive rationals `d_i` with `d_i a_ij = d_j a_ji`; `d_i` is half the
    /// squared length of `alpha_i`, normalised so the smallest `d` in each
    /// connected component is 1. `None` if not symmetrizable.
    pub fn symmetrizer(&self) -> Option<Vec<Rational>> {
        let n = self.size();
        let mut d: Vec<Option<Rational>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Rational::ONE);
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if i == j || self.entries[i][j] == 0 {
                        continue;
                    }
                    let dj =
                        d[i].unwrap() * Rational::from_int(self.entries[i][j]) / Rational::from_int(self.entries[j][i]);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            comp.push(j);
                            stack.push(j);
                        }
                        Some(x) if x != dj => return None,
                        _ => {}
                    }
                }
            }
            let min = comp.iter().map(|&i| d[i].unwrap()).min().unwrap();
            for &i in &comp {
                d[i] = Some(d[i].unwrap() / min);
            }
        }
        Some(d.into_iter().map(Option::unwrap).collect())
    }

    /// The symmetric bilinear form `(alpha_i, alpha_j) = d_i a_ij`.
    pub fn symmetrized(&self) -> Option<Vec<Vec<Rational>>> {
        let d = self.symmetrizer()?;
        Some(
            (0..self.size())
                .map(|i| {
                    (0..self.size())
                        .map(|j| d[i] * Rational::from_int(self.entries[i][j]))
                        .collect()
                })
                .collect(),
        )
    }

    /// Finite type: symmetrizable with a positive-definite symmetrization.
    pub fn is_finite_type(&self) -> bool {
        let Some(b) = self.symmetrized() else {
            return false;
        };
        (1..=self.size()).all(|k| {
            let minor: Vec<Vec<Rational>> = b[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&minor) > Rational::ZERO
        })
    }

    pub fn rank(&self) -> usize {
        let m: Vec<Vec<Rational>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        matrix_rank(m)
    }

    pub fn corank(&self) -> usize {
        self.size() - self.rank()
    }

    /// Exact inverse, if the matrix is non-singular.
    pub fn inverse(&self) -> Option<Vec<Vec<Rational>>> {
        let n = self.size();
        let mut m: Vec<Vec<Rational>> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<Rational> = r.iter().map(|&x| Rational::from_int(x)).collect();
                row.extend((0..n).map(|j| if i == j { Rational::ONE } else { Rational::ZERO }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x = *x / p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col];
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x -= factor * y;
                    }
                }
            }
        }
        Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::ZERO;
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det = det * a[col][col];
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
        }
    }
    det
}

fn matrix_rank(mut a: Vec<Vec<Rational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col] / a[rank][col];
                for c in col..cols {
                    let v = a[rank][c];
                    a[r][c] -= factor * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// What a connected component of a diagram is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    Finite(SimpleType),
    Affine(SimpleType),
}

impl ComponentKind {
    pub fn simple_type(&self) -> SimpleType {
        match *self {
            ComponentKind::Finite(t) | ComponentKind::Affine(t) => t,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ComponentKind::Finite(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: ComponentKind,
    pub nodes: Range<usize>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.contains(&node)
    }
}

/// A Dynkin diagram: a block-diagonal Cartan matrix with typed components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    cartan: CartanMatrix,
    components: Vec<Component>,
    node_component: Vec<usize>,
}

impl DynkinDiagram {
    /// Disjoint union of finite-type components in the given order.
    pub fn build(spec: &[SimpleType]) -> Self {
        Self::from_kinds(spec.iter().map(|&t| ComponentKind::Finite(t)).collect())
    }

    /// Parses and builds from `(letter, rank)` pairs.
    pub fn build_from_pairs(spec: &[(Family, usize)]) -> Result<Self> {
        let types = spec
            .iter()
            .map(|&(f, r)| SimpleType::new(f, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::build(&types))
    }

    pub(crate) fn from_kinds(kinds: Vec<ComponentKind>) -> Self {
        let mut cartan: Option<CartanMatrix> = None;
        let mut components = Vec::new();
        let mut node_component = Vec::new();
        let mut offset = 0;
        for (ci, kind) in kinds.into_iter().enumerate() {
            let block = match kind {
                ComponentKind::Finite(t) => t.cartan(),
                ComponentKind::Affine(t) => affine::affine_cartan(t),
            };
            let n = block.size();
            components.push(Component {
                kind,
                nodes: offset..offset + n,
            });
            node_component.extend(std::iter::repeat_n(ci, n));
            offset += n;
            cartan = Some(match cartan {
                None => block,
                Some(c) => c.direct_sum(&block),
            });
        }
        DynkinDiagram {
            cartan: cartan.unwrap_or(CartanMatrix { entries: Vec::new() }),
            components,
            node_component,
        }
    }

    /// The sub-diagram on the listed components, in the listed order, with a
    /// map from new node ids to old ones.
    pub fn sub_diagram(&self, comps: &[usize]) -> (DynkinDiagram, Vec<usize>) {
        let kinds = comps.iter().map(|&c| self.components[c].kind).collect();
        let node_map = comps.iter().flat_map(|&c| self.components[c].nodes.clone()).collect();
        (DynkinDiagram::from_kinds(kinds), node_map)
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn node_count(&self) -> usize {
        self.node_component.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &Component {
        &self.components[c]
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.node_component[node]
    }

    pub fn local_index(&self, node: usize) -> usize {
        node - self.components[self.node_component[node]].nodes.start
    }

    pub fn global_node(&self, component: usize, local: usize) -> usize {
        self.components[component].nodes.start + local
    }

    pub fn component_types(&self) -> Vec<ComponentKind> {
        self.components.iter().map(|c| c.kind).collect()
    }

    pub fn is_finite_type(&self) -> bool {
        self.components.iter().all(|c| c.kind.is_finite())
    }

    /// Number of Cartan-matrix neighbours of a node.
    pub fn degree(&self, node: usize) -> usize {
        (0..self.node_count())
            .filter(|&j| j != node && self.cartan.get(node, j) != 0)
            .count()
    }

    /// Nodes of degree at most one.
    pub fn extremal_nodes(&self, component: usize) -> Vec<usize> {
        self.components[component]
            .nodes
            .clone()
            .filter(|&v| self.degree(v) <= 1)
            .collect()
    }

    fn finite_component(&self, c: usize) -> Result<SimpleType> {
        match self.components.get(c) {
            Some(Component {
                kind: ComponentKind::Finite(t),
                ..
            }) => Ok(*t),
            Some(_) => Err(Error::precondition(format!("component {c} is affine"))),
            None => Err(Error::input(format!("no component {c}"))),
        }
    }

    /// The exact inverse Cartan matrix of each component.
    pub fn cartan_inverse(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        (0..self.components.len())
            .map(|c| {
                let t = self.finite_component(c)?;
                Ok(inverse_cartan(t))
            })
            .collect()
    }

    /// `<alpha, omega>`: the fundamental coweight at `alpha` paired with the
    /// fundamental weight at `omega`, i.e. the `(alpha, omega)` entry of the
    /// inverse Cartan matrix of their component.
    pub fn pairing(&self, alpha: usize, omega: usize) -> Result<Rational> {
        self.check_node(alpha)?;
        self.check_node(omega)?;
        let c = self.component_of(alpha);
        if self.component_of(omega) != c {
            return Err(Error::input(format!(
                "nodes {alpha} and {omega} lie in different components"
            )));
        }
        let t = self.finite_component(c)?;
        Ok(inverse_cartan(t)[self.local_index(alpha)][self.local_index(omega)])
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::input(format!("node {v} out of range 0..{}", self.node_count())))
        }
    }
}

/// Inverse Cartan matrix of a connected finite type.
pub fn inverse_cartan(t: SimpleType) -> Vec<Vec<Rational>> {
    t.cartan()
        .inverse()
        .expect("finite-type Cartan matrices are invertible")
}
