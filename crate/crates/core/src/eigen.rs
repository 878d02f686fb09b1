//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `m = V diag(values) V^dagger` with values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let lam = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self.values[i], 0.0)
            } else {
                ZERO
            }
        });
        &(&self.vectors * &lam) * &self.vectors.adjoint()
    }

    /// Groups ascending eigenvalues into runs whose consecutive gaps are below `gap`.
    pub fn clusters(&self, gap: f64) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some(c) if v - self.values[*c.last().unwrap()] <= gap => c.push(i),
                _ => out.push(vec![i]),
            }
        }
        out
    }
}

pub fn hermitian_eigen(m: &CMatrix, tol: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let defect = m.hermitian_defect();
    if defect > tol {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, scale: f64) {
    let z = a[(p, q)];
    let r = z.norm();
    if r <= 1e-300 || r <= 1e-18 * scale {
        return;
    }
    let e = z / r;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = 0.5 * (2.0 * r).atan2(app - aqq);
    let (s, c) = theta.sin_cos();
    let ebar = e.conj();
    // W = diag(1, conj(e)) * [[c, -s], [s, c]]
    let w00 = C64::new(c, 0.0);
    let w01 = C64::new(-s, 0.0);
    let w10 = ebar * s;
    let w11 = ebar * c;
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * w00 + akq * w10;
        a[(k, q)] = akp * w01 + akq * w11;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = w00.conj() * apk + w10.conj() * aqk;
        a[(q, k)] = w01.conj() * apk + w11.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * w00 + vkq * w10;
        v[(k, q)] = vkp * w01 + vkq * w11;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = hermitian_eigen(&CMatrix::identity(3), 1e-9).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted_ascending() {
        let m = CMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, -1.0]]);
        let e = hermitian_eigen(&m, 1e-9).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m, 1e-9), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn random_six_by_six_seed_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = CMatrix::random_hermitian(6, &mut rng);
        let e = hermitian_eigen(&m, 1e-9).unwrap();
        assert!(e.reconstruct().dist(&m) < 1e-10);
        assert!(e.vectors.unitary_defect() < 1e-10);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let y = CMatrix::from_rows(&[
            vec![ZERO, C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), ZERO],
        ]);
        let e = hermitian_eigen(&y, 1e-12).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().dist(&y) < 1e-14);
    }

    #[test]
    fn clusters_split_on_gaps() {
        let m = CMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0 + 1e-12, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let e = hermitian_eigen(&m, 1e-9).unwrap();
        assert_eq!(e.clusters(1e-8), vec![vec![0, 1], vec![2]]);
    }
}
