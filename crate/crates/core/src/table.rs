//! The table of connected diagrams with a special node: labels
//! `<alpha, omega>` and symplectic nodes, computed and compared with the
//! closed forms row by row.
//!
//! Nodes are numbered from 1 in this module, following Bourbaki.

use serde::Serialize;

use crate::error::Result;
use crate::rational::Rational;
use crate::rootsys::{symplectic_nodes, DynkinDiagram, Family, SimpleType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub row: String,
    #[serde(rename = "type")]
    pub ty: SimpleType,
    /// 1-based special node.
    pub special: usize,
    /// 1-based symplectic nodes, computed.
    pub symplectic: Vec<usize>,
    /// `<alpha, omega>` at every node, computed.
    pub labels: Vec<Rational>,
    /// The closed form; `None` where the table prints no number.
    pub expected_labels: Vec<Option<Rational>>,
    pub expected_symplectic: Vec<usize>,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.symplectic == self.expected_symplectic
            && self
                .labels
                .iter()
                .zip(&self.expected_labels)
                .all(|(l, e)| e.is_none_or(|e| e == *l))
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// The row's closed form: `(row name, labels, symplectic)`.
fn closed_form(t: SimpleType, special: usize) -> (String, Vec<Option<Rational>>, Vec<usize>) {
    let l = t.rank;
    let li = l as i64;
    match t.family {
        Family::A => {
            // A_{p+q-1} with the p-th node special
            let (p, q) = (special as i64, li + 1 - special as i64);
            let mut labels = vec![None; l];
            labels[0] = Some(r(q, p + q));
            labels[l - 1] = Some(r(p, p + q));
            labels[special - 1] = Some(r(p * q, p + q));
            // with p or q equal to 1 the pairings at i and n + 1 - i always
            // sum to 1, so every node is symplectic
            let s = if p == 1 || q == 1 {
                (1..=l).collect()
            } else {
                vec![1, l]
            };
            (format!("{t} (p={p}, q={q})"), labels, s)
        }
        Family::B => {
            let mut labels = vec![Some(r(1, 1)); l];
            labels[l - 1] = Some(r(1, 2));
            (t.to_string(), labels, vec![l])
        }
        Family::C => ((t.to_string()), (1..=li).map(|j| Some(r(j, 2))).collect(), vec![1]),
        Family::D if special == 1 => {
            let mut labels = vec![Some(r(1, 1)); l];
            labels[l - 2] = Some(r(1, 2));
            labels[l - 1] = Some(r(1, 2));
            (format!("{t}^R"), labels, vec![l - 1, l])
        }
        Family::D => {
            // D_{k+2}^H
            let k = li - 2;
            let mut labels: Vec<Option<Rational>> = (1..=k).map(|j| Some(r(j, 2))).collect();
            labels.push(Some(r(k, 4)));
            labels.push(Some(r(k, 4) + r(1, 2)));
            (format!("{t}^H"), labels, vec![1])
        }
        Family::E if l == 6 => {
            // Bourbaki order 1..6; the branch node 2 hangs off node 4
            let v = [r(2, 3), r(1, 1), r(4, 3), r(2, 1), r(5, 3), r(4, 3)];
            (t.to_string(), v.into_iter().map(Some).collect(), vec![])
        }
        Family::E => {
            let v = [r(1, 1), r(3, 2), r(2, 1), r(3, 1), r(5, 2), r(2, 1), r(3, 2)];
            (t.to_string(), v.into_iter().map(Some).collect(), vec![])
        }
        Family::F | Family::G => unreachable!("no special nodes"),
    }
}

/// The special nodes listed in the table for type `t`, 1-based: every node
/// of `A_n`, the first node of `B_l`, the last of `C_l`, the first node of
/// `D_l` and (for `l >= 5`) its last fork node, the end node of the long
/// arm of `E6` and `E7`.
pub fn table_specials(t: SimpleType) -> Vec<usize> {
    let l = t.rank;
    match t.family {
        Family::A => (1..=l).collect(),
        Family::B => vec![1],
        Family::C => vec![l],
        Family::D if l >= 5 => vec![1, l],
        Family::D => vec![1],
        Family::E if l < 8 => vec![l],
        _ => Vec::new(),
    }
}

pub fn table_row(t: SimpleType, special: usize) -> Result<TableRow> {
    let d = DynkinDiagram::build(&[t]);
    let alpha = special - 1;
    let labels = (0..t.rank).map(|w| d.pairing(alpha, w)).collect::<Result<Vec<_>>>()?;
    let symplectic = symplectic_nodes(&d, alpha)?.into_iter().map(|v| v + 1).collect();
    let (row, expected_labels, expected_symplectic) = closed_form(t, special);
    Ok(TableRow {
        row,
        ty: t,
        special,
        symplectic,
        labels,
        expected_labels,
        expected_symplectic,
    })
}

/// Every row up to `max_rank`, in the order A, B, C, D, E.
pub fn deligne_table(max_rank: usize) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for t in SimpleType::all_up_to(max_rank) {
        for s in table_specials(t) {
            out.push(table_row(t, s)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn t(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    #[test]
    fn c3_row() {
        let row = table_row(t("C3"), 3).unwrap();
        assert_eq!(row.labels, vec![q(1, 2), q(1, 1), q(3, 2)]);
        assert_eq!(row.symplectic, vec![1]);
        assert!(row.matches());
    }

    #[test]
    fn a_rows_hand_computed() {
        // A2 with the first node special: 2/3 and 1/3
        let row = table_row(t("A2"), 1).unwrap();
        assert_eq!(row.labels, vec![q(2, 3), q(1, 3)]);
        assert_eq!(row.symplectic, vec![1, 2]);
        let row = table_row(t("A1"), 1).unwrap();
        assert_eq!(row.labels, vec![q(1, 2)]);
        assert_eq!(row.symplectic, vec![1]);
        assert!(row.matches());
    }

    #[test]
    fn dh_row_d5() {
        // k = 3: 1/2, 1, 3/2, 3/4, 5/4
        let row = table_row(t("D5"), 5).unwrap();
        assert_eq!(row.labels, vec![q(1, 2), q(1, 1), q(3, 2), q(3, 4), q(5, 4)]);
        assert_eq!(row.symplectic, vec![1]);
        assert!(row.matches());
    }

    #[test]
    fn exceptional_rows() {
        let e6 = table_row(t("E6"), 6).unwrap();
        assert!(e6.symplectic.is_empty());
        assert!(e6.matches());
        assert!(table_row(t("E7"), 7).unwrap().matches());
        assert!(table_specials(t("E8")).is_empty());
        assert!(table_specials(t("F4")).is_empty());
        assert!(table_specials(t("G2")).is_empty());
    }

    #[test]
    fn whole_table_matches() {
        let rows = deligne_table(8).unwrap();
        // A: 36, B: 7, C: 6, D^R: 5, D^H: 4, E6, E7
        assert_eq!(rows.len(), 36 + 7 + 6 + 5 + 4 + 2);
        for row in &rows {
            assert!(row.matches(), "{row:?}");
        }
    }
}
