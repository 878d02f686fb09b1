//! Twisted representations of finite groupoids: a space per object and a
//! matrix per arrow a, mapping the space at t(a) to the space at s(a), with
//! pi(a) pi(b) = c(a,b) pi(ab). Left modules of the twisted convolution algebra
//! are exactly these.

use rand::Rng;

use crate::cocycle::Cocycle2;
use crate::eigen::hermitian_eigen;
use crate::error::Result;
use crate::groupoid::FiniteGroupoid;
use crate::linalg::random_unitary;
use crate::matrix::CMatrix;
use crate::scalar::C64;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidRep {
    pub dims: Vec<usize>,
    pub mats: Vec<CMatrix>,
}

impl GroupoidRep {
    pub fn zero(g: &FiniteGroupoid) -> Self {
        GroupoidRep {
            dims: vec![0; g.n_obj()],
            mats: (0..g.n_arrows()).map(|_| CMatrix::zeros(0, 0)).collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect()
    }

    /// The representation as operators on the direct sum of all fibers.
    pub fn global_operators(&self, g: &FiniteGroupoid) -> Vec<CMatrix> {
        let n = self.total_dim();
        let off = self.offsets();
        (0..g.n_arrows())
            .map(|a| {
                let mut m = CMatrix::zeros(n, n);
                m.set_block(off[g.src(a)], off[g.tgt(a)], &self.mats[a]);
                m
            })
            .collect()
    }

    /// Conjugates fiberwise: pi'(a) = u_{s(a)} pi(a) u_{t(a)}^*.
    pub fn conjugate(&self, g: &FiniteGroupoid, u: &[CMatrix]) -> Self {
        let mats = (0..g.n_arrows())
            .map(|a| &(&u[g.src(a)] * &self.mats[a]) * &u[g.tgt(a)].adjoint())
            .collect();
        GroupoidRep { dims: self.dims.clone(), mats }
    }

    pub fn direct_sum(&self, other: &GroupoidRep) -> Self {
        GroupoidRep {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| CMatrix::direct_sum(&[a.clone(), b.clone()]))
                .collect(),
        }
    }
}

/// Largest deviation of pi(a) pi(b) from c(a,b) pi(ab) over composable pairs,
/// together with shape consistency (infinite if shapes are wrong).
pub fn twisted_residual(g: &FiniteGroupoid, c: &Cocycle2, r: &GroupoidRep) -> f64 {
    if r.mats.len() != g.n_arrows() || r.dims.len() != g.n_obj() || c.size() != g.n_arrows() {
        return f64::INFINITY;
    }
    for a in 0..g.n_arrows() {
        let m = &r.mats[a];
        if m.rows() != r.dims[g.src(a)] || m.cols() != r.dims[g.tgt(a)] {
            return f64::INFINITY;
        }
    }
    let mut worst = 0.0f64;
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            if let Some(ab) = g.compose(a, b) {
                let lhs = &r.mats[a] * &r.mats[b];
                worst = worst.max(lhs.dist(&r.mats[ab].scale(c.get(a, b))));
            }
        }
    }
    for x in 0..g.n_obj() {
        worst = worst.max(r.mats[g.unit(x)].dist(&CMatrix::identity(r.dims[x])));
    }
    worst
}

/// The left regular representation: fiber at x spanned by arrows leaving x,
/// pi(a) d_b = c(a,b) d_{ab}.
pub fn regular_rep(g: &FiniteGroupoid, c: &Cocycle2) -> GroupoidRep {
    let fibers: Vec<Vec<usize>> = (0..g.n_obj()).map(|x| g.arrows_from(x).collect()).collect();
    let pos = |x: usize, a: usize| fibers[x].iter().position(|&b| b == a).expect("arrow in fiber");
    let mats = (0..g.n_arrows())
        .map(|a| {
            let (s, t) = (g.src(a), g.tgt(a));
            let mut m = CMatrix::zeros(fibers[s].len(), fibers[t].len());
            for (j, &b) in fibers[t].iter().enumerate() {
                let ab = g.compose(a, b).expect("t(a) = s(b)");
                m[(pos(s, ab), j)] = c.get(a, b);
            }
            m
        })
        .collect();
    GroupoidRep { dims: fibers.iter().map(|f| f.len()).collect(), mats }
}

/// Right multiplication by d_e on the regular representation's fibers
/// (d_b -> c(b,e) d_{be}), as one operator on the direct sum.
pub fn regular_right_operator(g: &FiniteGroupoid, c: &Cocycle2, e: usize) -> CMatrix {
    let order: Vec<usize> = (0..g.n_obj()).flat_map(|x| g.arrows_from(x).collect::<Vec<_>>()).collect();
    let pos = |a: usize| order.iter().position(|&b| b == a).expect("arrow");
    let n = order.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, &b) in order.iter().enumerate() {
        if let Some(be) = g.compose(b, e) {
            m[(pos(be), j)] = c.get(b, e);
        }
    }
    m
}

/// A random subrepresentation of the regular representation: a random union of
/// eigenspaces of a random Hermitian element of the right action, conjugated
/// fiberwise by random unitaries. May be zero.
pub fn random_subrep<R: Rng>(g: &FiniteGroupoid, c: &Cocycle2, rng: &mut R) -> Result<GroupoidRep> {
    let reg = regular_rep(g, c);
    let mut y = CMatrix::zeros(reg.total_dim(), reg.total_dim());
    for e in 0..g.n_arrows() {
        let z = C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
        y = &y + &regular_right_operator(g, c, e).scale(z);
    }
    let y = &y + &y.adjoint();
    let off = reg.offsets();
    let mut per_fiber = Vec::with_capacity(g.n_obj());
    let mut values: Vec<f64> = Vec::new();
    for x in 0..g.n_obj() {
        let block = y.block(off[x], off[x], reg.dims[x], reg.dims[x]);
        let e = hermitian_eigen(&block, 1e-8 * block.max_abs().max(1.0))?;
        values.extend(&e.values);
        per_fiber.push(e);
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gap = 1e-6 * scale;
    let mut distinct: Vec<f64> = Vec::new();
    for v in values {
        if distinct.last().is_none_or(|&l| v - l > gap) {
            distinct.push(v);
        }
    }
    let chosen: Vec<f64> = distinct.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    let keep = |v: f64| chosen.iter().any(|&c| (c - v).abs() <= gap * 2.0);
    let bases: Vec<CMatrix> = per_fiber
        .iter()
        .map(|e| {
            let idx: Vec<usize> = (0..e.values.len()).filter(|&i| keep(e.values[i])).collect();
            e.vectors.select_columns(&idx)
        })
        .collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mats = (0..g.n_arrows())
        .map(|a| &(&bases[g.src(a)].adjoint() * &reg.mats[a]) * &bases[g.tgt(a)])
        .collect();
    let sub = GroupoidRep { dims, mats };
    let u: Vec<CMatrix> = sub.dims.iter().map(|&d| random_unitary(d, rng)).collect();
    Ok(sub.conjugate(g, &u))
}
