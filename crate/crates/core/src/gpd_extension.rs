//! Extensions of a finite groupoid by twisted copies of a fixed group G,
//! given in section-trivialized form (Ad, taubar).

use crate::cocycle::{validate_cocycle, Cocycle2};
use crate::error::{Error, Result};
use crate::extension::{Twisted, TwistedExtension};
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::scalar::{C64, ONE};

/// `ad_map[q]` and `ad_nu[q]` form Ad_q from the fiber at t(q) to the fiber at s(q);
/// `taubar[q1 * n + q2]` lives in the fiber at s(q1) and is read only on composable pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidExtensionSpec {
    pub base: FiniteGroupoid,
    pub g: FiniteGroup,
    pub t_obj: Vec<Cocycle2>,
    pub ad_map: Vec<Vec<usize>>,
    pub ad_nu: Vec<Vec<C64>>,
    pub taubar: Vec<(C64, usize)>,
}

impl GroupoidExtensionSpec {
    /// One-object specialization of a group extension: Ad_q = (rho_q, nu_q), taubar = (sigma, tau).
    pub fn from_group_extension(ext: &TwistedExtension) -> Self {
        let (q, g) = (&ext.spec.q, &ext.spec.g);
        let nq = q.order();
        GroupoidExtensionSpec {
            base: FiniteGroupoid::from_group(q),
            g: g.clone(),
            t_obj: vec![ext.t_g.clone()],
            ad_map: ext.spec.rho.clone(),
            ad_nu: q.elements().map(|x| g.elements().map(|y| ext.data.nu(x, y)).collect()).collect(),
            taubar: (0..nq * nq).map(|i| ext.data.taubar(i / nq, i % nq)).collect(),
        }
    }

    pub fn n_arrows(&self) -> usize {
        self.base.n_arrows()
    }

    pub fn taubar(&self, q1: usize, q2: usize) -> (C64, usize) {
        self.taubar[q1 * self.n_arrows() + q2]
    }

    /// Ad_q(z, g) = (z nu_q(g), a_q(g)).
    pub fn ad(&self, q: usize, a: (C64, usize)) -> (C64, usize) {
        (a.0 * self.ad_nu[q][a.1], self.ad_map[q][a.1])
    }

    /// The twisted fiber G_{t_x}.
    pub fn fiber(&self, x: usize) -> Twisted<'_> {
        Twisted { group: &self.g, t: &self.t_obj[x] }
    }

    /// Arrow index of (g, q) in the extension groupoid: g * |arrows| + q.
    pub fn ext_arrow(&self, g: usize, q: usize) -> usize {
        g * self.n_arrows() + q
    }

    /// The extension groupoid on section coordinates (g, q) with product
    /// (g1 a_{q1}(g2) taubar_g, q1 q2), and its cocycle
    /// nu_{q1}(g2) t_x(g1, a_{q1} g2) t_x(g1 a_{q1}(g2), taubar_g) taubar_s, x = s(q1).
    pub fn extension_groupoid(&self) -> Result<(FiniteGroupoid, Cocycle2)> {
        let (ng, nq) = (self.g.order(), self.n_arrows());
        let n = ng * nq;
        let split = |a: usize| (a / nq, a % nq);
        let mut comp = vec![vec![None; n]; n];
        let mut theta = Cocycle2::trivial(n);
        for a in 0..n {
            let (g1, q1) = split(a);
            for b in 0..n {
                let (g2, q2) = split(b);
                let Some(q12) = self.base.compose(q1, q2) else { continue };
                let fib = self.fiber(self.base.src(q1));
                let moved = self.ad(q1, (ONE, g2));
                let (z, g) = fib.mul(fib.mul((ONE, g1), moved), self.taubar(q1, q2));
                comp[a][b] = Some(self.ext_arrow(g, q12));
                theta.set(a, b, z);
            }
        }
        let src = (0..n).map(|a| self.base.src(split(a).1)).collect();
        let tgt = (0..n).map(|a| self.base.tgt(split(a).1)).collect();
        let gpd = FiniteGroupoid::new(self.base.n_obj(), src, tgt, &comp)?;
        Ok((gpd, theta))
    }
}

/// A central extension of a groupoid by S^1, presented as a groupoid with a
/// unit-complex cocycle; elements are (z, arrow).
#[derive(Debug, Clone, Copy)]
pub struct CentralGroupoid<'a> {
    pub groupoid: &'a FiniteGroupoid,
    pub cocycle: &'a Cocycle2,
}

impl CentralGroupoid<'_> {
    pub fn mul(&self, a: (C64, usize), b: (C64, usize)) -> Option<(C64, usize)> {
        let ab = self.groupoid.compose(a.1, b.1)?;
        Some((a.0 * b.0 * self.cocycle.get(a.1, b.1), ab))
    }

    pub fn inv(&self, a: (C64, usize)) -> (C64, usize) {
        let ai = self.groupoid.inv(a.1);
        (ONE / (a.0 * self.cocycle.get(a.1, ai)), ai)
    }
}

/// Reads (t_x, Ad, taubar) off an explicit extension groupoid with cocycle `theta`.
///
/// `fiber[x][g]` is the arrow of the extension groupoid representing g in the
/// kernel over object x, and `alpha[q]` a lift (phase, arrow) of each base arrow.
pub fn from_central_extension(
    base: &FiniteGroupoid,
    g: &FiniteGroup,
    ext: &FiniteGroupoid,
    theta: &Cocycle2,
    fiber: &[Vec<usize>],
    alpha: &[(C64, usize)],
) -> Result<GroupoidExtensionSpec> {
    let cg = CentralGroupoid { groupoid: ext, cocycle: theta };
    let bad = |m: String| Error::InvalidGroupoidExtension(m);
    let locate = |x: usize, arrow: usize| fiber[x].iter().position(|&f| f == arrow);
    let t_obj: Vec<Cocycle2> = (0..base.n_obj())
        .map(|x| {
            Cocycle2::from_fn(g.order(), |a, b| {
                cg.mul((ONE, fiber[x][a]), (ONE, fiber[x][b])).map_or(ONE, |z| z.0)
            })
        })
        .collect();
    for x in 0..base.n_obj() {
        for a in g.elements() {
            for b in g.elements() {
                let prod = cg.mul((ONE, fiber[x][a]), (ONE, fiber[x][b])).ok_or_else(|| bad(format!("fiber {x} not composable")))?;
                if locate(x, prod.1) != Some(g.mul(a, b)) {
                    return Err(bad(format!("fiber {x} is not a copy of G at ({a}, {b})")));
                }
            }
        }
    }
    let n = base.n_arrows();
    let mut ad_map = Vec::with_capacity(n);
    let mut ad_nu = Vec::with_capacity(n);
    for q in 0..n {
        let (s, t) = (base.src(q), base.tgt(q));
        let mut map = Vec::with_capacity(g.order());
        let mut nu = Vec::with_capacity(g.order());
        for y in g.elements() {
            let conj = cg
                .mul(alpha[q], (ONE, fiber[t][y]))
                .and_then(|v| cg.mul(v, cg.inv(alpha[q])))
                .ok_or_else(|| bad(format!("lift of arrow {q} does not conjugate fibers")))?;
            let k = locate(s, conj.1).ok_or_else(|| bad(format!("Ad at arrow {q} leaves the fiber")))?;
            map.push(k);
            nu.push(conj.0);
        }
        ad_map.push(map);
        ad_nu.push(nu);
    }
    let mut taubar = vec![(ONE, g.identity()); n * n];
    for q1 in 0..n {
        for q2 in 0..n {
            let Some(q12) = base.compose(q1, q2) else { continue };
            let v = cg
                .mul(alpha[q1], alpha[q2])
                .and_then(|v| cg.mul(v, cg.inv(alpha[q12])))
                .ok_or_else(|| bad(format!("lifts of ({q1}, {q2}) do not compose")))?;
            let k = locate(base.src(q1), v.1).ok_or_else(|| bad(format!("taubar({q1}, {q2}) leaves the fiber")))?;
            taubar[q1 * n + q2] = (v.0, k);
        }
    }
    Ok(GroupoidExtensionSpec { base: base.clone(), g: g.clone(), t_obj, ad_map, ad_nu, taubar })
}

fn close(a: (C64, usize), b: (C64, usize), tol: f64) -> bool {
    a.1 == b.1 && (a.0 - b.0).norm() <= tol
}

/// Verifies every invariant family of the extension data exhaustively.
pub fn validate_groupoid_extension(spec: &GroupoidExtensionSpec, tol: f64) -> Result<()> {
    let base = &spec.base;
    let (ng, n) = (spec.g.order(), base.n_arrows());
    let bad = |m: String| Error::InvalidGroupoidExtension(m);
    if spec.t_obj.len() != base.n_obj() || spec.ad_map.len() != n || spec.ad_nu.len() != n || spec.taubar.len() != n * n {
        return Err(bad("table sizes do not match the base groupoid".into()));
    }
    for (x, t) in spec.t_obj.iter().enumerate() {
        validate_cocycle(&spec.g, t, tol).map_err(|e| bad(format!("cocycle at object {x}: {e}")))?;
    }
    let e = spec.g.identity();
    let unit = (ONE, e);
    for q in 0..n {
        let (map, nu) = (&spec.ad_map[q], &spec.ad_nu[q]);
        if map.len() != ng || nu.len() != ng || map.iter().any(|&y| y >= ng) {
            return Err(bad(format!("Ad at arrow {q} has the wrong shape")));
        }
        let mut seen = vec![false; ng];
        for &y in map {
            seen[y] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(bad(format!("Ad at arrow {q} is not bijective")));
        }
        if let Some(y) = (0..ng).find(|&y| (nu[y].norm() - 1.0).abs() > tol) {
            return Err(bad(format!("nu at arrow {q}, element {y} is not a unit scalar")));
        }
        let (from, to) = (spec.fiber(base.tgt(q)), spec.fiber(base.src(q)));
        for a in 0..ng {
            for b in 0..ng {
                let lhs = to.mul(spec.ad(q, (ONE, a)), spec.ad(q, (ONE, b)));
                let rhs = spec.ad(q, from.mul((ONE, a), (ONE, b)));
                if !close(lhs, rhs, tol) {
                    return Err(bad(format!("Ad at arrow {q} is not a twisted homomorphism at ({a}, {b})")));
                }
            }
        }
        if base.is_unit(q) && (0..ng).any(|y| map[y] != y || (nu[y] - ONE).norm() > tol) {
            return Err(bad(format!("Ad at unit arrow {q} is not the identity")));
        }
    }
    for q in 0..n {
        let (l, r) = (base.unit(base.src(q)), base.unit(base.tgt(q)));
        if !close(spec.taubar(l, q), unit, tol) || !close(spec.taubar(q, r), unit, tol) {
            return Err(bad(format!("taubar is not normalized at arrow {q}")));
        }
    }
    for q1 in 0..n {
        for q2 in 0..n {
            let Some(q12) = base.compose(q1, q2) else { continue };
            let fib = spec.fiber(base.src(q1));
            let tb = spec.taubar(q1, q2);
            for y in 0..ng {
                let lhs = spec.ad(q1, spec.ad(q2, (ONE, y)));
                let rhs = fib.conj(tb, spec.ad(q12, (ONE, y)));
                if !close(lhs, rhs, tol) {
                    return Err(bad(format!("Ad({q1})Ad({q2}) != Ad(taubar)Ad({q1}{q2}) at element {y}")));
                }
            }
            for q3 in 0..n {
                let Some(q23) = base.compose(q2, q3) else { continue };
                let lhs = fib.mul(tb, spec.taubar(q12, q3));
                let rhs = fib.mul(spec.ad(q1, spec.taubar(q2, q3)), spec.taubar(q1, q23));
                if !close(lhs, rhs, tol) {
                    return Err(bad(format!("taubar cocycle property fails at ({q1}, {q2}, {q3})")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::ExtensionSpec;

    #[test]
    fn one_object_specialization_validates() {
        let spec = ExtensionSpec {
            g: FiniteGroup::cyclic(3),
            q: FiniteGroup::cyclic(2),
            rho: vec![vec![0, 1, 2], vec![0, 2, 1]],
            tau: vec![0; 4],
        };
        let ext = TwistedExtension::new(spec, Cocycle2::trivial(6), 1e-9).unwrap();
        let gspec = GroupoidExtensionSpec::from_group_extension(&ext);
        validate_groupoid_extension(&gspec, 1e-9).unwrap();
        let (gpd, theta) = gspec.extension_groupoid().unwrap();
        assert_eq!(gpd.composition_table(), FiniteGroupoid::from_group(&ext.h).composition_table());
        assert!(theta.is_trivial());
    }

    #[test]
    fn central_extension_route_matches_derived_data() {
        let spec = ExtensionSpec {
            g: FiniteGroup::cyclic(3),
            q: FiniteGroup::cyclic(2),
            rho: vec![vec![0, 1, 2], vec![0, 2, 1]],
            tau: vec![0; 4],
        };
        let h0 = crate::extension::build_h(&spec).unwrap();
        let f: Vec<C64> = (0..6).map(|i| C64::from_polar(1.0, if i == 0 { 0.0 } else { 0.7 * i as f64 })).collect();
        let (t, _) = crate::cocycle::normalize_cocycle(&h0, &Cocycle2::trivial(6).times_coboundary(&h0, &f));
        let ext = TwistedExtension::new(spec.clone(), t.clone(), 1e-9).unwrap();
        let direct = GroupoidExtensionSpec::from_group_extension(&ext);
        let h = FiniteGroupoid::from_group(&ext.h);
        let fiber = vec![spec.g.elements().map(|x| spec.embed(x)).collect::<Vec<_>>()];
        let alpha: Vec<(C64, usize)> = spec.q.elements().map(|x| (ONE, spec.section(x))).collect();
        let derived = from_central_extension(&direct.base, &spec.g, &h, &t, &fiber, &alpha).unwrap();
        assert_eq!(derived.ad_map, direct.ad_map);
        for (a, b) in derived.ad_nu.iter().flatten().zip(direct.ad_nu.iter().flatten()) {
            assert!((a - b).norm() < 1e-12);
        }
        for (a, b) in derived.taubar.iter().zip(&direct.taubar) {
            assert!(a.1 == b.1 && (a.0 - b.0).norm() < 1e-12);
        }
    }

    #[test]
    fn corrupted_taubar_is_rejected() {
        let spec = ExtensionSpec::direct(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
        let ext = TwistedExtension::new(spec, Cocycle2::trivial(6), 1e-9).unwrap();
        let mut gspec = GroupoidExtensionSpec::from_group_extension(&ext);
        gspec.taubar[4] = (C64::new(0.0, 1.0), 0);
        assert!(validate_groupoid_extension(&gspec, 1e-9).is_err());
    }
}
