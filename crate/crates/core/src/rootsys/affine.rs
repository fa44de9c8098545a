//! Untwisted affine extensions.
//!
//! The extended diagrams come from a fixed table of attachments of `alpha_0`.
//! [`affine_cartan_from_highest_root`] recomputes them from the highest root
//! and is used only to audit the table in tests.

use crate::error::{Error, Result};

use super::roots::RootSystem;
use super::{CartanMatrix, ComponentKind, DynkinDiagram, Family, SimpleType};

/// `(j, a_0j, a_j0)` with `j` a zero-based finite node.
fn attachments(t: SimpleType) -> Vec<(usize, i64, i64)> {
    let n = t.rank;
    match t.family {
        Family::A if n == 1 => vec![(0, -2, -2)],
        Family::A => vec![(0, -1, -1), (n - 1, -1, -1)],
        Family::B if n == 2 => vec![(1, -1, -2)],
        Family::B => vec![(1, -1, -1)],
        Family::C => vec![(0, -1, -2)],
        Family::D => vec![(1, -1, -1)],
        Family::E => match n {
            6 => vec![(1, -1, -1)],
            7 => vec![(0, -1, -1)],
            _ => vec![(7, -1, -1)],
        },
        Family::F => vec![(0, -1, -1)],
        Family::G => vec![(1, -1, -1)],
    }
}

/// Affine Cartan matrix with `alpha_0` at index 0.
pub(crate) fn affine_cartan(t: SimpleType) -> CartanMatrix {
    let fin = t.cartan();
    let n = t.rank;
    let mut e = vec![vec![0i64; n + 1]; n + 1];
    e[0][0] = 2;
    for i in 0..n {
        for j in 0..n {
            e[i + 1][j + 1] = fin.get(i, j);
        }
    }
    for (j, a0j, aj0) in attachments(t) {
        e[0][j + 1] = a0j;
        e[j + 1][0] = aj0;
    }
    CartanMatrix { entries: e }
}

/// The connected extended diagram of one finite component.
pub fn affine_extension(d: &DynkinDiagram, component: usize) -> Result<DynkinDiagram> {
    match d.components().get(component).map(|c| c.kind) {
        Some(ComponentKind::Finite(t)) => Ok(DynkinDiagram::from_kinds(vec![ComponentKind::Affine(t)])),
        Some(ComponentKind::Affine(_)) => Err(Error::precondition(format!("component {component} is already affine"))),
        None => Err(Error::input(format!("no component {component}"))),
    }
}

/// Affine Cartan matrix derived from the highest root `theta`:
/// `a_0j = -<theta^vee, alpha_j>` and `a_j0 = -<alpha_j^vee, theta>`.
pub fn affine_cartan_from_highest_root(t: SimpleType) -> CartanMatrix {
    let fin = t.cartan();
    let rs = RootSystem::new(&fin);
    let theta = rs.highest_root();
    let n = t.rank;
    let mut e = vec![vec![0i64; n + 1]; n + 1];
    e[0][0] = 2;
    let theta_len = rs.form(&theta, &theta);
    for j in 0..n {
        for i in 0..n {
            e[i + 1][j + 1] = fin.get(i, j);
        }
        let unit: Vec<i64> = (0..n).map(|k| i64::from(k == j)).collect();
        let a0j = -(rs.form(&theta, &unit) * crate::rational::Rational::from_int(2) / theta_len);
        assert!(a0j.is_integer());
        e[0][j + 1] = a0j.numer();
        e[j + 1][0] = -(0..n).map(|k| theta[k] * fin.get(j, k)).sum::<i64>();
    }
    CartanMatrix { entries: e }
}
