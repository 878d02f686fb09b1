//! Irreducible twisted unitary representations and the dual set.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{build_twisted_group_algebra, FDAlgebra, RETRY_BUDGET};
use crate::cocycle::Cocycle2;
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{commutant_dim, intertwiner_space, NULL_TOL};
use crate::matrix::CMatrix;
use crate::scalar::{C64, ZERO};

/// Mixes a base seed with an index (block, object, sample) into an independent seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A unitary matrix per group element with U(g) U(h) = t(g,h) U(gh).
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedIrrep {
    pub dim: usize,
    pub u: Vec<CMatrix>,
}

impl TwistedIrrep {
    pub fn trivial_one_dim(order: usize) -> Self {
        TwistedIrrep { dim: 1, u: vec![CMatrix::identity(1); order] }
    }
}

/// Largest deviation of U(g)U(h) from t(g,h) U(gh).
pub fn twisted_law_residual(group: &FiniteGroup, t: &Cocycle2, u: &[CMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for a in group.elements() {
        for b in group.elements() {
            let lhs = &u[a] * &u[b];
            worst = worst.max(lhs.dist(&u[group.mul(a, b)].scale(t.get(a, b))));
        }
    }
    worst
}

/// Checks the twisted law, unitarity and (if `irreducible`) a one-dimensional commutant.
pub fn validate_representation(group: &FiniteGroup, t: &Cocycle2, u: &[CMatrix], irreducible: bool, tol: f64) -> Result<()> {
    if u.len() != group.order() {
        return Err(Error::InvalidRepresentation(format!("{} matrices for a group of order {}", u.len(), group.order())));
    }
    let res = twisted_law_residual(group, t, u);
    if res > tol {
        return Err(Error::InvalidRepresentation(format!("twisted law residual {res:e}")));
    }
    if let Some(g) = group.elements().find(|&g| u[g].unitary_defect() > tol) {
        return Err(Error::InvalidRepresentation(format!("U({g}) is not unitary")));
    }
    if irreducible {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = commutant_dim(u, &mut rng, NULL_TOL)?;
        if c != 1 {
            return Err(Error::InvalidRepresentation(format!("commutant has dimension {c}")));
        }
    }
    Ok(())
}

/// Conjugates a representation into unitary form using the averaged inner
/// product P = (1/|G|) sum_g U(g)* U(g).
pub fn unitarize(u: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let d = u[0].rows();
    let mut p = CMatrix::zeros(d, d);
    for x in u {
        p = &p + &(&x.adjoint() * x);
    }
    let p = p.scale(C64::new(1.0 / u.len() as f64, 0.0));
    let e = hermitian_eigen(&p, 1e-8 * p.max_abs().max(1.0))?;
    if e.values[0] <= 0.0 {
        return Err(Error::InvalidRepresentation("averaged inner product is not positive".into()));
    }
    let root = CMatrix::from_fn(d, d, |i, j| if i == j { C64::new(e.values[i].sqrt(), 0.0) } else { ZERO });
    let iroot = CMatrix::from_fn(d, d, |i, j| if i == j { C64::new(1.0 / e.values[i].sqrt(), 0.0) } else { ZERO });
    let s = &(&e.vectors * &root) * &e.vectors.adjoint();
    let si = &(&e.vectors * &iroot) * &e.vectors.adjoint();
    Ok(u.iter().map(|x| &(&s * x) * &si).collect())
}

/// chi(g) = tr U(g).
pub fn twisted_character(r: &TwistedIrrep) -> Vec<C64> {
    r.u.iter().map(|x| x.trace()).collect()
}

fn character_key(chi: &[C64]) -> Vec<(i64, i64)> {
    chi.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
}

/// Scales x to a unitary (given x* x = c I) and makes its largest-modulus
/// entry (first in row-major order among ties) real positive.
pub fn phase_normalize(x: &CMatrix) -> CMatrix {
    let d = x.cols().max(1);
    let norm = (x.frobenius_norm().powi(2) / d as f64).sqrt();
    let y = x.scale(C64::new(1.0 / norm, 0.0));
    let mut best = (0usize, 0.0f64);
    for (i, z) in y.data().iter().enumerate() {
        if z.norm() > best.1 * (1.0 + 1e-9) {
            best = (i, z.norm());
        }
    }
    let z = y.data()[best.0];
    y.scale(z.conj() / z.norm())
}

/// The unitary T with T U1(g) = U2(g) T, if r1 and r2 are isomorphic.
pub fn find_intertwiner(r1: &TwistedIrrep, r2: &TwistedIrrep) -> Result<Option<CMatrix>> {
    intertwiner_between(&r1.u, &r2.u)
}

/// As [`find_intertwiner`] on raw matrix families.
pub fn intertwiner_between(u1: &[CMatrix], u2: &[CMatrix]) -> Result<Option<CMatrix>> {
    if u1[0].rows() != u2[0].rows() {
        return Ok(None);
    }
    let space = intertwiner_space(u1, u2)?;
    match space.len() {
        0 => Ok(None),
        1 => Ok(Some(phase_normalize(&space[0]))),
        k => Err(Error::SchurViolation(k)),
    }
}

/// Canonically ordered representatives of the irreducible twisted unitary
/// representations, with their characters.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSet {
    pub irreps: Vec<TwistedIrrep>,
    pub characters: Vec<Vec<C64>>,
}

impl DualSet {
    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    /// Index of the class with the given character (within 1e-6), if any.
    pub fn identify(&self, chi: &[C64]) -> Option<usize> {
        self.characters
            .iter()
            .position(|c| c.iter().zip(chi).all(|(a, b)| (a - b).norm() < 1e-6))
    }
}

/// Enumerates one representative per class of irreducible t-twisted unitary representations.
pub fn enumerate_twisted_irreps(group: &FiniteGroup, t: &Cocycle2, seed: u64) -> Result<DualSet> {
    let alg = build_twisted_group_algebra(group, t)?;
    enumerate_from_algebra(group, t, &alg, seed)
}

fn enumerate_from_algebra(group: &FiniteGroup, t: &Cocycle2, alg: &FDAlgebra, seed: u64) -> Result<DualSet> {
    let n = group.order();
    let e = group.identity();
    let wed = alg.wedderburn(seed)?;
    let lefts: Vec<CMatrix> = (0..n).map(|g| alg.left_matrix(g)).collect();
    let rights: Vec<CMatrix> = (0..n).map(|g| alg.right_matrix(g)).collect();
    let mut irreps = Vec::with_capacity(wed.blocks.len());
    for (bi, block) in wed.blocks.iter().enumerate() {
        let d = block.dim;
        let mut found = None;
        for attempt in 0..RETRY_BUDGET {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, bi as u64).wrapping_add(attempt));
            let mut rw = CMatrix::zeros(n, n);
            for r in &rights {
                let c = C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                rw = &rw + &r.scale(c);
            }
            let y = &rw + &rw.adjoint();
            let ey = &(&block.space.adjoint() * &y) * &block.space;
            let eig = hermitian_eigen(&ey, 1e-8 * ey.max_abs().max(1.0))?;
            let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let clusters = eig.clusters(1e-6 * scale);
            if clusters.iter().any(|c| c.len() != d) {
                continue;
            }
            let basis = &block.space * &eig.vectors.select_columns(&clusters[0]);
            found = Some(basis);
            break;
        }
        let basis = found.ok_or(Error::DegenerateProjection(RETRY_BUDGET as usize))?;
        let bt = basis.adjoint();
        let mut u: Vec<CMatrix> = lefts.iter().map(|l| &(&bt * l) * &basis).collect();
        u = unitarize(&u)?;
        if u[e].dist(&CMatrix::identity(d)) > 1e-8 {
            return Err(Error::InvalidRepresentation("U(1) is not the identity".into()));
        }
        u[e] = CMatrix::identity(d);
        validate_representation(group, t, &u, true, 1e-8)?;
        irreps.push(TwistedIrrep { dim: d, u });
    }
    let mut keyed: Vec<(Vec<(i64, i64)>, TwistedIrrep)> =
        irreps.into_iter().map(|r| (character_key(&twisted_character(&r)), r)).collect();
    keyed.sort_by(|a, b| match a.1.dim.cmp(&b.1.dim) {
        Ordering::Equal => a.0.cmp(&b.0),
        o => o,
    });
    let irreps: Vec<TwistedIrrep> = keyed.into_iter().map(|(_, r)| r).collect();
    let characters: Vec<Vec<C64>> = irreps.iter().map(twisted_character).collect();
    for i in 0..characters.len() {
        for j in 0..i {
            if character_key(&characters[i]) == character_key(&characters[j]) {
                return Err(Error::InternalConsistency(format!("classes {j} and {i} share a character")));
            }
        }
    }
    let total: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
    if total != n {
        return Err(Error::RoundingFailure(format!("sum of squared dimensions {total} != {n}")));
    }
    Ok(DualSet { irreps, characters })
}

/// The t-twisted left regular representation L(g) e_h = t(g,h) e_{gh}.
pub fn regular_representation(group: &FiniteGroup, t: &Cocycle2) -> Vec<CMatrix> {
    let n = group.order();
    group
        .elements()
        .map(|g| {
            let mut m = CMatrix::zeros(n, n);
            for h in group.elements() {
                m[(group.mul(g, h), h)] = t.get(g, h);
            }
            m
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::bicharacter_cocycle;
    use crate::linalg::random_unitary;
    use crate::scalar::{turns, ONE};

    #[test]
    fn z3_characters_are_cube_roots() {
        let g = FiniteGroup::cyclic(3);
        let dual = enumerate_twisted_irreps(&g, &Cocycle2::trivial(3), 0).unwrap();
        assert_eq!(dual.dims(), vec![1, 1, 1]);
        for chi in &dual.characters {
            assert!((chi[1].powu(3) - ONE).norm() < 1e-9);
        }
        let values: Vec<C64> = dual.characters.iter().map(|c| c[1]).collect();
        for w in [ONE, turns(1, 3), turns(2, 3)] {
            assert!(values.iter().any(|v| (v - w).norm() < 1e-9));
        }
    }

    #[test]
    fn twisted_klein_has_one_two_dim_class() {
        let g = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        let dual = enumerate_twisted_irreps(&g, &bicharacter_cocycle(2, 2, 1), 0).unwrap();
        assert_eq!(dual.dims(), vec![2]);
        let chi = &dual.characters[0];
        assert!((chi[0] - C64::new(2.0, 0.0)).norm() < 1e-9);
        assert!(chi[1..].iter().all(|z| z.norm() < 1e-9));
    }

    #[test]
    fn trivial_group_has_unit_rep() {
        let g = FiniteGroup::trivial();
        let dual = enumerate_twisted_irreps(&g, &Cocycle2::trivial(1), 0).unwrap();
        assert_eq!(dual.irreps[0].u[0], CMatrix::identity(1));
    }

    #[test]
    fn intertwiner_recovers_conjugation() {
        let g = FiniteGroup::symmetric3();
        let dual = enumerate_twisted_irreps(&g, &Cocycle2::trivial(6), 3).unwrap();
        let r = dual.irreps.iter().find(|r| r.dim == 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = random_unitary(2, &mut rng);
        let r2 = TwistedIrrep { dim: 2, u: r.u.iter().map(|x| &(&w * x) * &w.adjoint()).collect() };
        let tmat = find_intertwiner(r, &r2).unwrap().unwrap();
        assert!(tmat.dist(&phase_normalize(&w)) < 1e-9);
        assert!(find_intertwiner(r, r).unwrap().unwrap().dist(&CMatrix::identity(2)) < 1e-9);
        assert!(find_intertwiner(&dual.irreps[0], &dual.irreps[1]).unwrap().is_none());
    }
}
