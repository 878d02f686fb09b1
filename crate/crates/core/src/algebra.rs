//! Finite-dimensional *-algebras by structure constants, and their block
//! decomposition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cocycle::Cocycle2;
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{gram_nullspace, NULL_TOL};
use crate::matrix::CMatrix;
use crate::scalar::{C64, ONE, ZERO};

/// Number of seeds tried by randomized decompositions before giving up.
pub const RETRY_BUDGET: u64 = 8;

/// Algebra with basis e_0..e_{dim-1}; `products[i * dim + j]` lists the
/// nonzero coordinates of e_i e_j, `star[i] = (j, z)` means e_i* = z e_j.
#[derive(Debug, Clone, PartialEq)]
pub struct FDAlgebra {
    dim: usize,
    labels: Vec<String>,
    products: Vec<Vec<(usize, C64)>>,
    star: Vec<(usize, C64)>,
}

impl FDAlgebra {
    /// Builds the algebra and re-verifies associativity and the star axioms within `tol`.
    pub fn new(labels: Vec<String>, products: Vec<Vec<(usize, C64)>>, star: Vec<(usize, C64)>, tol: f64) -> Result<Self> {
        let dim = labels.len();
        if products.len() != dim * dim || star.len() != dim {
            return Err(Error::Shape("structure constants do not match the basis".into()));
        }
        let a = FDAlgebra { dim, labels, products, star };
        if let Some((i, j, k, _)) = a.associativity_defect(tol) {
            return Err(Error::NotAssociative(i, j, k));
        }
        a.check_star(tol)?;
        Ok(a)
    }

    /// Skips verification; used by the mutation harness to build deliberately broken algebras.
    pub fn new_unchecked(labels: Vec<String>, products: Vec<Vec<(usize, C64)>>, star: Vec<(usize, C64)>) -> Self {
        FDAlgebra { dim: labels.len(), labels, products, star }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.products[i * self.dim + j]
    }

    pub fn star_of(&self, i: usize) -> (usize, C64) {
        self.star[i]
    }

    pub fn mul(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == ZERO {
                    continue;
                }
                for &(k, c) in self.product(i, j) {
                    out[k] += x * y * c;
                }
            }
        }
        out
    }

    pub fn star(&self, a: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, &x) in a.iter().enumerate() {
            let (j, z) = self.star[i];
            out[j] += x.conj() * z;
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        v[i] = ONE;
        v
    }

    /// Matrix of x -> e_i x.
    pub fn left_matrix(&self, i: usize) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for &(k, c) in self.product(i, j) {
                m[(k, j)] += c;
            }
        }
        m
    }

    /// Matrix of x -> x e_i.
    pub fn right_matrix(&self, i: usize) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for &(k, c) in self.product(j, i) {
                m[(k, j)] += c;
            }
        }
        m
    }

    /// Left multiplication by a general element.
    pub fn left_of(&self, a: &[C64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (i, &x) in a.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for j in 0..self.dim {
                for &(k, c) in self.product(i, j) {
                    m[(k, j)] += x * c;
                }
            }
        }
        m
    }

    /// First basis triple where (e_i e_j) e_k and e_i (e_j e_k) differ by more than `tol`.
    pub fn associativity_defect(&self, tol: f64) -> Option<(usize, usize, usize, f64)> {
        let n = self.dim;
        for i in 0..n {
            let ei = self.basis(i);
            for j in 0..n {
                let eij = self.mul(&ei, &self.basis(j));
                for k in 0..n {
                    let ek = self.basis(k);
                    let lhs = self.mul(&eij, &ek);
                    let rhs = self.mul(&ei, &self.mul(&self.basis(j), &ek));
                    let dev = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    if dev > tol {
                        return Some((i, j, k, dev));
                    }
                }
            }
        }
        None
    }

    fn product_vec(&self, i: usize, j: usize) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        for &(k, c) in self.product(i, j) {
            v[k] += c;
        }
        v
    }

    /// Largest associativity deviation over all basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let ij = self.product_vec(i, j);
                for k in 0..n {
                    let lhs = self.mul(&ij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), &self.product_vec(j, k));
                    let dev = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    worst = worst.max(dev);
                }
            }
        }
        worst
    }

    fn check_star(&self, tol: f64) -> Result<()> {
        for i in 0..self.dim {
            let ei = self.basis(i);
            let back = self.star(&self.star(&ei));
            if back.iter().zip(&ei).any(|(a, b)| (a - b).norm() > tol) {
                return Err(Error::InternalConsistency(format!("star is not involutive at basis element {i}")));
            }
            for j in 0..self.dim {
                let ej = self.basis(j);
                let lhs = self.star(&self.mul(&ei, &ej));
                let rhs = self.mul(&self.star(&ej), &self.star(&ei));
                if lhs.iter().zip(&rhs).any(|(a, b)| (a - b).norm() > tol) {
                    return Err(Error::InternalConsistency(format!("star is not an antihomomorphism at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Orthonormal basis (columns) of the center: the common null space of L_i - R_i.
    pub fn center_basis(&self) -> Result<CMatrix> {
        let n = self.dim;
        let mut gram = CMatrix::zeros(n, n);
        for i in 0..n {
            let d = &self.left_matrix(i) - &self.right_matrix(i);
            gram = &gram + &(&d.adjoint() * &d);
        }
        gram_nullspace(&gram, NULL_TOL)
    }

    pub fn center_dim(&self) -> Result<usize> {
        Ok(self.center_basis()?.cols())
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| {
            let a = self.mul(&self.basis(i), &self.basis(j));
            let b = self.mul(&self.basis(j), &self.basis(i));
            a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol)
        }))
    }

    /// Block decomposition; see [`Wedderburn`].
    pub fn wedderburn(&self, seed: u64) -> Result<Wedderburn> {
        let center = self.center_basis()?;
        let c = center.cols();
        let mut last = Error::NotSemisimpleDetected("no attempt made".into());
        for attempt in 0..RETRY_BUDGET {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
            let mut z = vec![ZERO; self.dim];
            for j in 0..c {
                let coef = C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                for (zi, v) in z.iter_mut().zip(center.column(j)) {
                    *zi += coef * v;
                }
            }
            let lz = self.left_of(&z);
            let x = &lz + &lz.adjoint();
            let e = hermitian_eigen(&x, 1e-8 * x.max_abs().max(1.0))?;
            let scale = e.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let clusters = e.clusters(1e-6 * scale);
            if clusters.len() != c {
                last = Error::NotSemisimpleDetected(format!("{} eigenvalue clusters for a {c}-dimensional center", clusters.len()));
                continue;
            }
            let mut blocks = Vec::with_capacity(c);
            for cl in &clusters {
                let m = cl.len();
                let d = (m as f64).sqrt().round() as usize;
                if d * d != m {
                    return Err(Error::NotSemisimpleDetected(format!("block of rank {m} is not a square")));
                }
                blocks.push(Block { dim: d, space: e.vectors.select_columns(cl) });
            }
            let total: usize = blocks.iter().map(|b| b.dim * b.dim).sum();
            if total != self.dim {
                return Err(Error::RoundingFailure(format!("block dimensions square-sum to {total}, algebra has {}", self.dim)));
            }
            return Ok(Wedderburn { center_dim: c, blocks, seed_used: seed.wrapping_add(attempt) });
        }
        Err(last)
    }

    /// Sorted multiset of block sizes d_i with sum d_i^2 = dim.
    pub fn wedderburn_blocks(&self, seed: u64) -> Result<Vec<usize>> {
        Ok(self.wedderburn(seed)?.dims())
    }
}

/// One simple block: its size d and an orthonormal basis of the block ideal
/// (a subspace of dimension d^2 of the algebra).
#[derive(Debug, Clone)]
pub struct Block {
    pub dim: usize,
    pub space: CMatrix,
}

#[derive(Debug, Clone)]
pub struct Wedderburn {
    pub center_dim: usize,
    pub blocks: Vec<Block>,
    pub seed_used: u64,
}

impl Wedderburn {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.blocks.iter().map(|b| b.dim).collect();
        d.sort_unstable();
        d
    }
}

/// C(G, t): e_a e_b = t(a,b) e_{ab}, e_g* = t(g,g^-1)^-1 e_{g^-1}.
pub fn build_twisted_group_algebra(group: &FiniteGroup, t: &Cocycle2) -> Result<FDAlgebra> {
    let (labels, products, star) = twisted_group_algebra_data(group, t);
    FDAlgebra::new(labels, products, star, 1e-8)
}

/// Structure data for C(G, t) without verification.
pub fn twisted_group_algebra_data(group: &FiniteGroup, t: &Cocycle2) -> (Vec<String>, Vec<Vec<(usize, C64)>>, Vec<(usize, C64)>) {
    let n = group.order();
    let labels = (0..n).map(|g| format!("e{g}")).collect();
    let products = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            vec![(group.mul(a, b), t.get(a, b))]
        })
        .collect();
    let star = (0..n).map(|g| (group.inv(g), ONE / t.get(g, group.inv(g)))).collect();
    (labels, products, star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::bicharacter_cocycle;

    #[test]
    fn untwisted_z2_is_commutative_with_two_blocks() {
        let g = FiniteGroup::cyclic(2);
        let a = build_twisted_group_algebra(&g, &Cocycle2::trivial(2)).unwrap();
        assert!(a.is_commutative(1e-12));
        assert_eq!(a.wedderburn_blocks(0).unwrap(), vec![1, 1]);
    }

    #[test]
    fn twisted_klein_is_a_single_matrix_block() {
        let g = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        let a = build_twisted_group_algebra(&g, &bicharacter_cocycle(2, 2, 1)).unwrap();
        assert!(!a.is_commutative(1e-12));
        assert_eq!(a.wedderburn_blocks(0).unwrap(), vec![2]);
        assert_eq!(a.center_dim().unwrap(), 1);
    }

    #[test]
    fn s3_blocks() {
        let g = FiniteGroup::symmetric3();
        let a = build_twisted_group_algebra(&g, &Cocycle2::trivial(6)).unwrap();
        assert_eq!(a.wedderburn_blocks(0).unwrap(), vec![1, 1, 2]);
        assert!(a.associativity_residual() < 1e-14);
    }
}
