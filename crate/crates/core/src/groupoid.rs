//! Finite groupoids with diagrammatic composition: a·b is defined iff t(a) = s(b),
//! and then runs from s(a) to t(b).

use crate::algebra::FDAlgebra;
use crate::cocycle::Cocycle2;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::scalar::{C64, ONE};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_obj: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    comp: Vec<usize>,
    inv: Vec<usize>,
    units: Vec<usize>,
}

impl FiniteGroupoid {
    /// Validates source/target maps and a partial composition table
    /// (`comp[a][b]` defined exactly when t(a) = s(b)).
    pub fn new(n_obj: usize, src: Vec<usize>, tgt: Vec<usize>, comp: &[Vec<Option<usize>>]) -> Result<Self> {
        let n = src.len();
        let bad = |m: String| Error::InvalidGroupoid(m);
        if tgt.len() != n || comp.len() != n || comp.iter().any(|r| r.len() != n) {
            return Err(bad("arrow tables have inconsistent sizes".into()));
        }
        if src.iter().chain(&tgt).any(|&x| x >= n_obj) {
            return Err(bad("arrow endpoint out of range".into()));
        }
        let mut flat = vec![NONE; n * n];
        for a in 0..n {
            for b in 0..n {
                match (comp[a][b], tgt[a] == src[b]) {
                    (Some(c), true) => {
                        if c >= n {
                            return Err(bad(format!("composite of ({a}, {b}) out of range")));
                        }
                        if src[c] != src[a] || tgt[c] != tgt[b] {
                            return Err(bad(format!("composite of ({a}, {b}) has wrong endpoints")));
                        }
                        flat[a * n + b] = c;
                    }
                    (None, false) => {}
                    (Some(_), false) => return Err(bad(format!("({a}, {b}) composed but t({a}) != s({b})"))),
                    (None, true) => return Err(bad(format!("({a}, {b}) composable but no composite given"))),
                }
            }
        }
        let m = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                if ab == NONE {
                    continue;
                }
                for c in 0..n {
                    let bc = m(b, c);
                    if bc == NONE {
                        continue;
                    }
                    if m(ab, c) != m(a, bc) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut units = Vec::with_capacity(n_obj);
        for x in 0..n_obj {
            let u = (0..n)
                .find(|&e| {
                    src[e] == x
                        && tgt[e] == x
                        && (0..n).all(|a| (src[a] != x || m(e, a) == a) && (tgt[a] != x || m(a, e) == a))
                })
                .ok_or_else(|| bad(format!("object {x} has no unit arrow")))?;
            units.push(u);
        }
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| m(a, b) == units[src[a]] && m(b, a) == units[tgt[a]])
                .ok_or_else(|| bad(format!("arrow {a} has no inverse")))?;
            inv.push(b);
        }
        Ok(FiniteGroupoid { n_obj, src, tgt, comp: flat, inv, units })
    }

    pub fn n_obj(&self) -> usize {
        self.n_obj
    }

    pub fn n_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    #[inline]
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.comp[a * self.src.len() + b];
        (c != NONE).then_some(c)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.units[self.src[a]] == a
    }

    /// Arrows leaving object x.
    pub fn arrows_from(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_arrows()).filter(move |&a| self.src[a] == x)
    }

    pub fn composition_table(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.n_arrows();
        (0..n).map(|a| (0..n).map(|b| self.compose(a, b)).collect()).collect()
    }

    /// A group as a one-object groupoid.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let comp: Vec<Vec<Option<usize>>> = (0..n).map(|a| (0..n).map(|b| Some(g.mul(a, b))).collect()).collect();
        Self::new(1, vec![0; n], vec![0; n], &comp).expect("a group is a groupoid")
    }

    /// Pair groupoid on n objects: arrows (i, j) indexed i*n + j.
    pub fn pair(n: usize) -> Self {
        let src = (0..n * n).map(|a| a / n).collect();
        let tgt = (0..n * n).map(|a| a % n).collect();
        let comp: Vec<Vec<Option<usize>>> = (0..n * n)
            .map(|a| (0..n * n).map(|b| (a % n == b / n).then_some((a / n) * n + b % n)).collect())
            .collect();
        Self::new(n, src, tgt, &comp).expect("pair groupoid is a groupoid")
    }

    /// Only unit arrows.
    pub fn discrete(n: usize) -> Self {
        let comp: Vec<Vec<Option<usize>>> = (0..n).map(|a| (0..n).map(|b| (a == b).then_some(a)).collect()).collect();
        Self::new(n, (0..n).collect(), (0..n).collect(), &comp).expect("discrete groupoid")
    }

    /// Product with a group: arrows (a, g) indexed a*|G| + g.
    pub fn times_group(&self, g: &FiniteGroup) -> Self {
        let (n, k) = (self.n_arrows(), g.order());
        let src = (0..n * k).map(|i| self.src[i / k]).collect();
        let tgt = (0..n * k).map(|i| self.tgt[i / k]).collect();
        let comp: Vec<Vec<Option<usize>>> = (0..n * k)
            .map(|x| {
                (0..n * k)
                    .map(|y| self.compose(x / k, y / k).map(|ab| ab * k + g.mul(x % k, y % k)))
                    .collect()
            })
            .collect();
        Self::new(self.n_obj, src, tgt, &comp).expect("product groupoid")
    }

    /// Connected components as sorted object lists, ordered by least object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp_of = vec![NONE; self.n_obj];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n_obj {
            if comp_of[x] != NONE {
                continue;
            }
            let mut objs: Vec<usize> = self.arrows_from(x).map(|a| self.tgt[a]).collect();
            objs.sort_unstable();
            objs.dedup();
            for &y in &objs {
                comp_of[y] = out.len();
            }
            out.push(objs);
        }
        out
    }

    /// Loops at x, in arrow order.
    /// The full subgroupoid on `objs` (renumbered by position), with the map
    /// from new arrow indices to old ones.
    pub fn full_subgroupoid(&self, objs: &[usize]) -> Result<(FiniteGroupoid, Vec<usize>)> {
        let pos = |x: usize| objs.iter().position(|&o| o == x);
        let arrows: Vec<usize> = (0..self.n_arrows())
            .filter(|&a| pos(self.src(a)).is_some() && pos(self.tgt(a)).is_some())
            .collect();
        let new_index = |a: usize| arrows.iter().position(|&b| b == a);
        let comp: Vec<Vec<Option<usize>>> = arrows
            .iter()
            .map(|&a| arrows.iter().map(|&b| self.compose(a, b).and_then(new_index)).collect())
            .collect();
        let src = arrows.iter().map(|&a| pos(self.src(a)).expect("kept")).collect();
        let tgt = arrows.iter().map(|&a| pos(self.tgt(a)).expect("kept")).collect();
        Ok((FiniteGroupoid::new(objs.len(), src, tgt, &comp)?, arrows))
    }

    pub fn isotropy_arrows(&self, x: usize) -> Vec<usize> {
        (0..self.n_arrows()).filter(|&a| self.src[a] == x && self.tgt[a] == x).collect()
    }

    /// The vertex group at x as a group on `isotropy_arrows(x)` (reindexed by position).
    pub fn isotropy_group(&self, x: usize) -> Result<FiniteGroup> {
        let arrows = self.isotropy_arrows(x);
        let pos = |a: usize| arrows.iter().position(|&b| b == a).expect("loop");
        let table: Vec<Vec<usize>> = arrows
            .iter()
            .map(|&a| arrows.iter().map(|&b| pos(self.compose(a, b).expect("loops compose"))).collect())
            .collect();
        FiniteGroup::from_table(&table)
    }
}

/// Largest cocycle-identity deviation over composable triples.
pub fn groupoid_cocycle_residual(g: &FiniteGroupoid, c: &Cocycle2) -> f64 {
    let mut worst = 0.0f64;
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            let Some(ab) = g.compose(a, b) else { continue };
            for d in 0..g.n_arrows() {
                let Some(bd) = g.compose(b, d) else { continue };
                let lhs = c.get(a, b) * c.get(ab, d);
                let rhs = c.get(a, bd) * c.get(b, d);
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}

/// Unit modulus, cocycle identity and unit normalization on composable data.
pub fn validate_groupoid_cocycle(g: &FiniteGroupoid, c: &Cocycle2, tol: f64) -> Result<()> {
    let n = g.n_arrows();
    if c.size() != n {
        return Err(Error::Shape(format!("cocycle on {} arrows, groupoid has {n}", c.size())));
    }
    for a in 0..n {
        for b in 0..n {
            if g.compose(a, b).is_some() && (c.get(a, b).norm() - 1.0).abs() > tol {
                return Err(Error::NotUnitModulus(a, b));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = g.compose(a, b) else { continue };
            for d in 0..n {
                let Some(bd) = g.compose(b, d) else { continue };
                let dev = (c.get(a, b) * c.get(ab, d) - c.get(a, bd) * c.get(b, d)).norm();
                if dev > tol {
                    return Err(Error::CocycleIdentityFails(a, b, d, dev));
                }
            }
        }
    }
    for a in 0..n {
        let (l, r) = (g.unit(g.src(a)), g.unit(g.tgt(a)));
        if (c.get(l, a) - ONE).norm() > tol || (c.get(a, r) - ONE).norm() > tol {
            return Err(Error::NotNormalized(format!("unit arrows at arrow {a}")));
        }
    }
    Ok(())
}

/// Structure data of the twisted convolution algebra: d_a * d_b = c(a,b) d_{ab}
/// when composable and 0 otherwise; d_a* = c(a,a^-1)^-1 d_{a^-1}.
pub fn convolution_data(g: &FiniteGroupoid, c: &Cocycle2) -> (Vec<String>, Vec<Vec<(usize, C64)>>, Vec<(usize, C64)>) {
    let n = g.n_arrows();
    let labels = (0..n).map(|a| format!("d{a}")).collect();
    let products = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            g.compose(a, b).map(|ab| vec![(ab, c.get(a, b))]).unwrap_or_default()
        })
        .collect();
    let star = (0..n).map(|a| (g.inv(a), ONE / c.get(a, g.inv(a)))).collect();
    (labels, products, star)
}

pub fn build_convolution_algebra(g: &FiniteGroupoid, c: &Cocycle2) -> Result<FDAlgebra> {
    let (labels, products, star) = convolution_data(g, c);
    FDAlgebra::new(labels, products, star, 1e-8)
}

/// The action groupoid of a right action of `base` on points over objects:
/// arrows (p, q) with lambda(p) = s(q), running p -> p·q.
#[derive(Debug, Clone)]
pub struct TransformationGroupoid {
    pub groupoid: FiniteGroupoid,
    /// (point, base arrow) per arrow.
    pub arrows: Vec<(usize, usize)>,
    index: Vec<usize>,
    n_base: usize,
}

impl TransformationGroupoid {
    /// `act(p, q)` must be defined whenever lambda(p) = s(q).
    pub fn new(base: &FiniteGroupoid, lambda: &[usize], act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let nb = base.n_arrows();
        let mut arrows = Vec::new();
        let mut index = vec![NONE; lambda.len() * nb];
        for (p, &x) in lambda.iter().enumerate() {
            for q in base.arrows_from(x) {
                index[p * nb + q] = arrows.len();
                arrows.push((p, q));
            }
        }
        let n = arrows.len();
        let src: Vec<usize> = arrows.iter().map(|&(p, _)| p).collect();
        let tgt: Vec<usize> = arrows.iter().map(|&(p, q)| act(p, q)).collect();
        let comp: Vec<Vec<Option<usize>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if tgt[a] != src[b] {
                            return None;
                        }
                        let q = base.compose(arrows[a].1, arrows[b].1)?;
                        Some(index[src[a] * nb + q])
                    })
                    .collect()
            })
            .collect();
        let groupoid = FiniteGroupoid::new(lambda.len(), src, tgt, &comp)?;
        Ok(TransformationGroupoid { groupoid, arrows, index, n_base: nb })
    }

    /// Index of the arrow (p, q), if lambda(p) = s(q).
    pub fn arrow(&self, p: usize, q: usize) -> Option<usize> {
        let i = self.index[p * self.n_base + q];
        (i != NONE).then_some(i)
    }
}
