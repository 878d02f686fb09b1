//! Real-valued 1- and 2-cochains on a finite group and the averaging solver
//! for df = F.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A real cochain of degree 1 (indexed by G) or 2 (indexed by G x G, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct RealCochain {
    degree: u8,
    order: usize,
    values: Vec<f64>,
}

impl RealCochain {
    pub fn degree1(values: Vec<f64>) -> Self {
        let order = values.len();
        RealCochain { degree: 1, order, values }
    }

    pub fn degree2(order: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != order * order {
            return Err(Error::Shape(format!("2-cochain needs {} values, got {}", order * order, values.len())));
        }
        Ok(RealCochain { degree: 2, order, values })
    }

    pub fn degree2_from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let values = (0..order * order).map(|i| f(i / order, i % order)).collect();
        RealCochain { degree: 2, order, values }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, g: usize) -> f64 {
        debug_assert_eq!(self.degree, 1);
        self.values[g]
    }

    pub fn at2(&self, g: usize, h: usize) -> f64 {
        debug_assert_eq!(self.degree, 2);
        self.values[g * self.order + h]
    }

    /// (df)(g,h) = f(g) + f(h) - f(gh).
    pub fn coboundary(&self, group: &FiniteGroup) -> RealCochain {
        assert_eq!(self.degree, 1, "coboundary is defined here on 1-cochains");
        Self::degree2_from_fn(group.order(), |g, h| self.at(g) + self.at(h) - self.at(group.mul(g, h)))
    }

    /// Pulls a 2-cochain on a quotient back along `map: G -> quotient`.
    pub fn inflate(&self, map: &[usize]) -> RealCochain {
        assert_eq!(self.degree, 2);
        Self::degree2_from_fn(map.len(), |g, h| self.at2(map[g], map[h]))
    }

    /// Largest deviation of d(self) from `target`.
    pub fn coboundary_residual(&self, group: &FiniteGroup, target: &RealCochain) -> f64 {
        let df = self.coboundary(group);
        df.values.iter().zip(&target.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Checks F(x,g) + F(xg,h) = F(g,h) + F(x,gh) on every triple.
pub fn check_real_cocycle(group: &FiniteGroup, f: &RealCochain, tol: f64) -> Result<()> {
    if f.degree != 2 || f.order != group.order() {
        return Err(Error::Shape("expected a 2-cochain on the given group".into()));
    }
    let scale = f.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for x in group.elements() {
        for g in group.elements() {
            for h in group.elements() {
                let lhs = f.at2(x, g) + f.at2(group.mul(x, g), h);
                let rhs = f.at2(g, h) + f.at2(x, group.mul(g, h));
                let dev = (lhs - rhs).abs();
                if dev > tol * scale {
                    return Err(Error::NotACocycle(x, g, h, dev));
                }
            }
        }
    }
    Ok(())
}

/// Solves df = F by averaging: f(g) = (1/|G|) sum_x F(x,g).
pub fn coboundary_solve_real(group: &FiniteGroup, f: &RealCochain) -> Result<RealCochain> {
    check_real_cocycle(group, f, 1e-10)?;
    let n = group.order();
    let values = (0..n)
        .map(|g| (0..n).map(|x| f.at2(x, g)).sum::<f64>() / n as f64)
        .collect();
    Ok(RealCochain::degree1(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cocycle_gives_zero() {
        let z3 = FiniteGroup::cyclic(3);
        let f = coboundary_solve_real(&z3, &RealCochain::degree2_from_fn(3, |_, _| 0.0)).unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn z2_single_entry() {
        let z2 = FiniteGroup::cyclic(2);
        let big_f = RealCochain::degree2(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let f = coboundary_solve_real(&z2, &big_f).unwrap();
        assert_eq!(f.values(), &[0.0, 0.5]);
        assert!(f.coboundary_residual(&z2, &big_f) < 1e-15);
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let z2 = FiniteGroup::cyclic(2);
        let big_f = RealCochain::degree2(2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(coboundary_solve_real(&z2, &big_f), Err(Error::NotACocycle(..))));
    }
}
