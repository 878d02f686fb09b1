//! Unit-complex 2-cocycles on finite groups (and, via a composability mask,
//! on groupoid arrow sets).

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::matrix::CMatrix;
use crate::scalar::{unit_sqrt, C64, ONE};

/// A table of unit scalars indexed by pairs of elements (row-major).
/// For groupoids only composable pairs are meaningful; the rest hold 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle2 {
    size: usize,
    values: Vec<C64>,
}

impl Cocycle2 {
    pub fn trivial(size: usize) -> Self {
        Cocycle2 { size, values: vec![ONE; size * size] }
    }

    pub fn from_values(size: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != size * size {
            return Err(Error::Shape(format!("cocycle needs {} values, got {}", size * size, values.len())));
        }
        Ok(Cocycle2 { size, values })
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let values = (0..size * size).map(|i| f(i / size, i % size)).collect();
        Cocycle2 { size, values }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.values[a * self.size + b]
    }

    pub fn set(&mut self, a: usize, b: usize, z: C64) {
        self.values[a * self.size + b] = z;
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Cocycle2) -> Cocycle2 {
        assert_eq!(self.size, other.size);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Cocycle2 { size: self.size, values }
    }

    /// Pulls a cocycle back along `map` (element of the new base -> element of self's base).
    pub fn pullback(&self, map: &[usize]) -> Cocycle2 {
        Cocycle2::from_fn(map.len(), |a, b| self.get(map[a], map[b]))
    }

    /// Restriction to a subset, reindexed by position.
    pub fn restrict(&self, elements: &[usize]) -> Cocycle2 {
        self.pullback(elements)
    }

    /// Largest pointwise distance to another table.
    pub fn dist(&self, other: &Cocycle2) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&z| z == ONE)
    }

    /// Multiplies by the coboundary (df)(a,b) = f(a) f(b) / f(ab).
    pub fn times_coboundary(&self, group: &FiniteGroup, f: &[C64]) -> Cocycle2 {
        Cocycle2::from_fn(self.size, |a, b| self.get(a, b) * f[a] * f[b] / f[group.mul(a, b)])
    }

    /// Largest deviation from the cocycle identity over all triples.
    pub fn identity_residual(&self, group: &FiniteGroup) -> f64 {
        let mut worst = 0.0f64;
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                let tab = self.get(a, b);
                for c in group.elements() {
                    let lhs = tab * self.get(ab, c);
                    let rhs = self.get(a, group.mul(b, c)) * self.get(b, c);
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }
}

/// Checks unit modulus, the cocycle identity and unital normalization
/// t(1,h) = t(h,1) = 1 on a group.
pub fn validate_cocycle(group: &FiniteGroup, t: &Cocycle2, tol: f64) -> Result<()> {
    let n = group.order();
    if t.size != n {
        return Err(Error::Shape(format!("cocycle on {} elements, group has {n}", t.size)));
    }
    for a in 0..n {
        for b in 0..n {
            if (t.get(a, b).norm() - 1.0).abs() > tol {
                return Err(Error::NotUnitModulus(a, b));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = group.mul(a, b);
            for c in 0..n {
                let lhs = t.get(a, b) * t.get(ab, c);
                let rhs = t.get(a, group.mul(b, c)) * t.get(b, c);
                let dev = (lhs - rhs).norm();
                if dev > tol {
                    return Err(Error::CocycleIdentityFails(a, b, c, dev));
                }
            }
        }
    }
    let e = group.identity();
    for h in 0..n {
        if (t.get(e, h) - ONE).norm() > tol {
            return Err(Error::NotNormalized(format!("t(1,{h})")));
        }
        if (t.get(h, e) - ONE).norm() > tol {
            return Err(Error::NotNormalized(format!("t({h},1)")));
        }
    }
    Ok(())
}

/// True if t(h, h^-1) = 1 for every h.
pub fn is_inverse_normalized(group: &FiniteGroup, t: &Cocycle2, tol: f64) -> bool {
    group.elements().all(|h| (t.get(h, group.inv(h)) - ONE).norm() <= tol)
}

/// Shifts `t` by an explicit coboundary so that t(1,h) = t(h,1) = t(h,h^-1) = 1.
/// Returns the shifted cocycle and the 1-cochain f used (t' = t * df).
pub fn normalize_cocycle(group: &FiniteGroup, t: &Cocycle2) -> (Cocycle2, Vec<C64>) {
    let e = group.identity();
    let mut f = vec![ONE; group.order()];
    let f1 = t.get(e, e).inv();
    f[e] = f1;
    for h in group.elements() {
        let hi = group.inv(h);
        if h == e || hi < h {
            continue;
        }
        if hi == h {
            f[h] = unit_sqrt(f1 / t.get(h, h));
        } else {
            f[h] = f1 / t.get(h, hi);
        }
    }
    (t.times_coboundary(group, &f), f)
}

/// Reads t off a projective representation: P(a) P(b) = t(a,b) P(ab).
pub fn cocycle_from_projective_rep(group: &FiniteGroup, p: &[CMatrix]) -> Result<Cocycle2> {
    let n = group.order();
    let mut values = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let lhs = &p[a] * &p[b];
            let rhs = &p[group.mul(a, b)];
            let ratio = lhs.inner(rhs).conj() / rhs.inner(rhs);
            if lhs.dist(&rhs.scale(ratio)) > 1e-9 {
                return Err(Error::InvalidRepresentation(format!("P({a})P({b}) is not a multiple of P(ab)")));
            }
            values.push(ratio / ratio.norm());
        }
    }
    Ok(Cocycle2 { size: n, values })
}

/// Bicharacter cocycle on Z_m x Z_n (elements a*n + b):
/// ((a1,b1),(a2,b2)) -> exp(2 pi i k a1 b2 / gcd(m,n)).
pub fn bicharacter_cocycle(m: usize, n: usize, k: i64) -> Cocycle2 {
    let g = gcd(m, n) as i64;
    Cocycle2::from_fn(m * n, |x, y| {
        let (a1, b2) = ((x / n) as i64, (y % n) as i64);
        crate::scalar::turns((k * a1 * b2).rem_euclid(g), g)
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    fn klein() -> FiniteGroup {
        FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))
    }

    #[test]
    fn trivial_cocycle_is_valid() {
        let g = FiniteGroup::symmetric3();
        validate_cocycle(&g, &Cocycle2::trivial(6), 1e-9).unwrap();
    }

    #[test]
    fn klein_sign_cocycle_is_valid_but_not_inverse_normalized() {
        let g = klein();
        let t = bicharacter_cocycle(2, 2, 1);
        validate_cocycle(&g, &t, 1e-9).unwrap();
        assert!(!is_inverse_normalized(&g, &t, 1e-9));
        let (tn, f) = normalize_cocycle(&g, &t);
        validate_cocycle(&g, &tn, 1e-9).unwrap();
        assert!(is_inverse_normalized(&g, &tn, 1e-12));
        assert!(tn.dist(&t.times_coboundary(&g, &f)) == 0.0);
    }

    #[test]
    fn modulus_two_is_rejected() {
        let g = FiniteGroup::cyclic(2);
        let mut t = Cocycle2::trivial(2);
        t.set(1, 1, C64::new(2.0, 0.0));
        assert_eq!(validate_cocycle(&g, &t, 1e-9), Err(Error::NotUnitModulus(1, 1)));
    }

    #[test]
    fn pauli_rep_gives_the_sign_class() {
        let g = klein();
        let i = C64::new(0.0, 1.0);
        let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let z = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        let y = CMatrix::from_rows(&[vec![C64::new(0.0, 0.0), -i], vec![i, C64::new(0.0, 0.0)]]);
        let p = vec![CMatrix::identity(2), z, x, y];
        let t = cocycle_from_projective_rep(&g, &p).unwrap();
        validate_cocycle(&g, &t, 1e-12).unwrap();
        assert!(is_inverse_normalized(&g, &t, 1e-12));
        assert!((t.get(1, 2) / t.get(2, 1) - C64::new(-1.0, 0.0)).norm() < 1e-12);
    }
}
