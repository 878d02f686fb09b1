//! Linear solvers built on the Hermitian eigensolver: null spaces, intertwiner
//! spaces, spans and commutants.

use rand::Rng;

use crate::eigen::hermitian_eigen;
use crate::error::Result;
use crate::matrix::CMatrix;
use crate::scalar::{C64, ZERO};

/// Relative eigenvalue threshold separating a Gram null space from the rest.
pub const NULL_TOL: f64 = 1e-9;

/// Orthonormal basis (as columns) of the null space of a positive semidefinite Gram matrix.
pub fn gram_nullspace(gram: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let n = gram.rows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let e = hermitian_eigen(gram, 1e-8 * gram.max_abs().max(1.0))?;
    let top = e.values.last().copied().unwrap_or(0.0).max(1.0);
    let idx: Vec<usize> = (0..n).filter(|&i| e.values[i] <= rel_tol * top).collect();
    Ok(e.vectors.select_columns(&idx))
}

/// Basis of { X : X a_k = b_k X for all k }, orthonormal in the Frobenius inner product.
///
/// `domain[k]` is n x n, `codomain[k]` is m x m, solutions are m x n.
pub fn intertwiner_space(domain: &[CMatrix], codomain: &[CMatrix]) -> Result<Vec<CMatrix>> {
    assert_eq!(domain.len(), codomain.len());
    let n = domain.first().map_or(0, |a| a.rows());
    let m = codomain.first().map_or(0, |b| b.rows());
    let size = n * m;
    if size == 0 {
        return Ok(Vec::new());
    }
    let id_m = CMatrix::identity(m);
    let id_n = CMatrix::identity(n);
    let mut gram = CMatrix::zeros(size, size);
    for (a, b) in domain.iter().zip(codomain) {
        let op = &a.transpose().kron(&id_m) - &id_n.kron(b);
        gram = &gram + &(&op.adjoint() * &op);
    }
    let null = gram_nullspace(&gram, NULL_TOL)?;
    Ok((0..null.cols())
        .map(|j| CMatrix::from_vec_col_major(m, n, &null.column(j)))
        .collect())
}

/// Modified Gram-Schmidt on the columns; columns that collapse below `tol` are dropped.
pub fn orthonormalize_columns(m: &CMatrix, tol: f64) -> CMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for j in 0..m.cols() {
        let mut v = m.column(j);
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_columns(m.rows(), &basis)
}

pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        let q = orthonormalize_columns(&CMatrix::random_gaussian(n, n, rng), 1e-6);
        if q.cols() == n {
            return q;
        }
    }
}

/// Dimension of the linear span of a family of equally shaped matrices.
pub fn span_rank(mats: &[CMatrix], rel_tol: f64) -> Result<usize> {
    let k = mats.len();
    if k == 0 {
        return Ok(0);
    }
    let gram = CMatrix::from_fn(k, k, |i, j| mats[i].inner(&mats[j]));
    let e = hermitian_eigen(&gram, 1e-8 * gram.max_abs().max(1.0))?;
    let top = e.values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(0);
    }
    Ok(e.values.iter().filter(|&&v| v > rel_tol * top).count())
}

/// Dimension of the commutant of the *-algebra generated by `gens` (n x n each).
///
/// A random Hermitian element of the generated algebra is diagonalized first;
/// every commuting matrix is block diagonal in its eigenspaces, which keeps the
/// final linear system small.
pub fn commutant_dim<R: Rng>(gens: &[CMatrix], rng: &mut R, rel_tol: f64) -> Result<usize> {
    let n = match gens.first() {
        Some(g) => g.rows(),
        None => return Ok(0),
    };
    let mut family: Vec<CMatrix> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        family.push(g.clone());
        if g.hermitian_defect() > 1e-12 {
            family.push(g.adjoint());
        }
    }
    let mut x = CMatrix::zeros(n, n);
    for g in gens {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        let h = &g.scale(C64::new(re, im)) + &g.adjoint().scale(C64::new(re, -im));
        x = &x + &h;
    }
    let e = hermitian_eigen(&x, 1e-8 * x.max_abs().max(1.0))?;
    let gap = 1e-7 * x.max_abs().max(1.0);
    let clusters = e.clusters(gap);
    let v = &e.vectors;

    let unknowns: Vec<(usize, usize)> = clusters
        .iter()
        .flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b))))
        .collect();
    let size = unknowns.len();
    let mut gram = CMatrix::zeros(size, size);
    for z in &family {
        let zv = z * v;
        let k = &v.adjoint() * &zv;
        let p = &zv.adjoint() * &zv;
        let ztv = &z.adjoint() * v;
        let s = &ztv.adjoint() * &ztv;
        for (j, &(a, b)) in unknowns.iter().enumerate() {
            for (jj, &(a2, b2)) in unknowns.iter().enumerate() {
                let mut val = -(k[(a2, a)].conj() * k[(b2, b)]) - k[(a, a2)] * k[(b, b2)].conj();
                if b == b2 {
                    val += p[(a, a2)];
                }
                if a == a2 {
                    val += s[(b2, b)];
                }
                gram[(j, jj)] += val;
            }
        }
    }
    if size == 0 {
        return Ok(0);
    }
    let e = hermitian_eigen(&gram, 1e-6 * gram.max_abs().max(1.0))?;
    let top = e.values.last().copied().unwrap_or(0.0).max(1.0);
    Ok(e.values.iter().filter(|&&val| val <= rel_tol * top).count())
}

/// Component-wise residual of `x a = b x` over a family.
pub fn intertwining_residual(x: &CMatrix, domain: &[CMatrix], codomain: &[CMatrix]) -> f64 {
    domain
        .iter()
        .zip(codomain)
        .map(|(a, b)| (x * a).dist(&(b * x)))
        .fold(0.0, f64::max)
}

pub fn zero_vec(n: usize) -> Vec<C64> {
    vec![ZERO; n]
}
