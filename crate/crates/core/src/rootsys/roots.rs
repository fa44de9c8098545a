//! Root enumeration by reflection closure, and the Weyl group acting on roots.

use std::collections::HashMap;

use crate::perm::{Perm, PermGroup};
use crate::rational::Rational;

use super::CartanMatrix;

/// The roots of a finite-type Cartan matrix in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanMatrix,
    sym: Vec<Rational>,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    /// Panics if the matrix is not of finite type.
    pub fn new(cartan: &CartanMatrix) -> Self {
        assert!(cartan.is_finite_type(), "root system of a non-finite Cartan matrix");
        let n = cartan.size();
        let sym = cartan.symmetrizer().expect("finite type is symmetrizable");
        let mut roots: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut index: HashMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut k = 0;
        while k < roots.len() {
            for i in 0..n {
                let r = reflect(cartan, i, &roots[k]);
                if !index.contains_key(&r) {
                    index.insert(r.clone(), roots.len());
                    roots.push(r);
                }
            }
            k += 1;
        }
        // positive roots first, by height then lexicographically
        roots.sort_by(|a, b| {
            let key = |r: &Vec<i64>| (r.iter().sum::<i64>() < 0, r.iter().sum::<i64>().abs());
            key(a).cmp(&key(b)).then_with(|| b.cmp(a))
        });
        let index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        RootSystem {
            cartan: cartan.clone(),
            sym,
            roots,
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.size()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.roots.iter().filter(|r| r.iter().all(|&c| c >= 0))
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Dimension of the Lie algebra: roots plus rank.
    pub fn lie_dim(&self) -> u64 {
        (self.roots.len() + self.rank()) as u64
    }

    /// The unique root of maximal height.
    pub fn highest_root(&self) -> Vec<i64> {
        self.positive_roots()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .expect("non-empty root system")
    }

    /// `d_i = (alpha_i, alpha_i) / 2`.
    pub fn symmetrizer(&self) -> &[Rational] {
        &self.sym
    }

    /// The invariant form on simple-root coordinates.
    pub fn form(&self, x: &[i64], y: &[i64]) -> Rational {
        let n = self.rank();
        let mut s = Rational::ZERO;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] != 0 {
                    s += Rational::from_int(x[i] * y[j] * self.cartan.get(i, j)) * self.sym[i];
                }
            }
        }
        s
    }

    /// `<lambda, beta^vee>` for `lambda` in fundamental-weight coordinates
    /// and `beta` a root in simple-root coordinates.
    fn weight_on_coroot(&self, lambda: &[Rational], beta: &[i64]) -> Rational {
        let half_len = self.form(beta, beta) / Rational::from_int(2);
        let s: Rational = (0..self.rank())
            .map(|i| Rational::from_int(beta[i]) * self.sym[i] * lambda[i])
            .sum();
        s / half_len
    }

    /// Weyl's dimension formula for the irreducible representation with
    /// dominant highest weight `lambda` (fundamental-weight coordinates),
    /// restricted to the positive roots accepted by `keep`.
    fn weyl_product(&self, lambda: &[i64], keep: impl Fn(&[i64]) -> bool) -> u64 {
        let rho: Vec<Rational> = vec![Rational::ONE; self.rank()];
        let shifted: Vec<Rational> = lambda.iter().map(|&l| Rational::from_int(l) + Rational::ONE).collect();
        let mut dim = Rational::ONE;
        for beta in self.positive_roots().filter(|b| keep(b)) {
            dim = dim * self.weight_on_coroot(&shifted, beta) / self.weight_on_coroot(&rho, beta);
        }
        assert!(dim.is_integer() && dim > Rational::ZERO);
        dim.numer() as u64
    }

    pub fn weyl_dimension(&self, lambda: &[i64]) -> u64 {
        self.weyl_product(lambda, |_| true)
    }

    /// Dimension of the irreducible representation of the Levi subalgebra
    /// obtained by deleting simple root `node`, with highest weight `lambda`.
    pub fn levi_weyl_dimension(&self, lambda: &[i64], node: usize) -> u64 {
        self.weyl_product(lambda, |b| b[node] == 0)
    }

    /// The simple reflection `s_i` as a permutation of the root list.
    pub fn reflection_perm(&self, i: usize) -> Perm {
        let images = self
            .roots
            .iter()
            .map(|r| self.index[&reflect(&self.cartan, i, r)])
            .collect();
        Perm::from_images_unchecked(images)
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    /// The Weyl group, realised on the root list by exhaustive closure.
    pub fn weyl_group(&self) -> PermGroup {
        let gens = (0..self.rank()).map(|i| self.reflection_perm(i)).collect();
        PermGroup::new(self.roots.len(), gens).expect("reflections have the right degree")
    }

    /// The longest element: the unique Weyl element sending every positive
    /// root to a negative one.
    pub fn longest_element(&self) -> Perm {
        let positive: Vec<usize> = (0..self.roots.len())
            .filter(|&k| self.roots[k].iter().all(|&c| c >= 0))
            .collect();
        let w = self.weyl_group();
        let found = w
            .elements()
            .iter()
            .filter(|g| positive.iter().all(|&k| self.roots[g.apply(k)].iter().all(|&c| c <= 0)))
            .cloned()
            .collect::<Vec<_>>();
        assert_eq!(found.len(), 1, "longest element is unique");
        found.into_iter().next().unwrap()
    }
}

/// `s_i(beta) = beta - <alpha_i^vee, beta> alpha_i`.
fn reflect(cartan: &CartanMatrix, i: usize, beta: &[i64]) -> Vec<i64> {
    let pairing: i64 = (0..beta.len()).map(|j| cartan.get(i, j) * beta[j]).sum();
    let mut r = beta.to_vec();
    r[i] -= pairing;
    r
}
