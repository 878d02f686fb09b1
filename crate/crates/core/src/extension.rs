//! Extensions H = G x_{rho,tau} Q, the restricted cocycle on G and the
//! derived section data (sigma, nu, taubar).

use std::collections::BTreeSet;

use crate::cocycle::{validate_cocycle, Cocycle2};
use crate::error::{Error, Result};
use crate::group::{is_automorphism, FiniteGroup};
use crate::scalar::{C64, ONE};

/// Extension data of Q by G. `rho[q]` is an element map of G, `tau[q1 * |Q| + q2]` an element of G.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSpec {
    pub g: FiniteGroup,
    pub q: FiniteGroup,
    pub rho: Vec<Vec<usize>>,
    pub tau: Vec<usize>,
}

impl ExtensionSpec {
    /// Direct product G x Q.
    pub fn direct(g: FiniteGroup, q: FiniteGroup) -> Self {
        let rho = vec![g.elements().collect(); q.order()];
        let tau = vec![g.identity(); q.order() * q.order()];
        ExtensionSpec { g, q, rho, tau }
    }

    #[inline]
    pub fn rho(&self, q: usize, g: usize) -> usize {
        self.rho[q][g]
    }

    #[inline]
    pub fn tau(&self, q1: usize, q2: usize) -> usize {
        self.tau[q1 * self.q.order() + q2]
    }

    /// Index of (g, q) in H.
    #[inline]
    pub fn pair(&self, g: usize, q: usize) -> usize {
        g * self.q.order() + q
    }

    #[inline]
    pub fn split(&self, h: usize) -> (usize, usize) {
        (h / self.q.order(), h % self.q.order())
    }

    /// The section s(q) = (1, q) as an element of H.
    pub fn section(&self, q: usize) -> usize {
        self.pair(self.g.identity(), q)
    }

    /// Index of the embedded element (g, 1).
    pub fn embed(&self, g: usize) -> usize {
        self.pair(g, self.q.identity())
    }

    pub fn h_order(&self) -> usize {
        self.g.order() * self.q.order()
    }

    /// Product in H via the extension formula.
    pub fn h_mul(&self, a: usize, b: usize) -> usize {
        let (g1, q1) = self.split(a);
        let (g2, q2) = self.split(b);
        let g = self.g.mul(self.g.mul(g1, self.rho(q1, g2)), self.tau(q1, q2));
        self.pair(g, self.q.mul(q1, q2))
    }
}

/// Verifies the automorphism, composition, twisted cocycle and normalization
/// conditions on (rho, tau), in that order.
pub fn validate_extension_spec(spec: &ExtensionSpec) -> Result<()> {
    let (g, q) = (&spec.g, &spec.q);
    let (ng, nq) = (g.order(), q.order());
    if spec.rho.len() != nq || spec.tau.len() != nq * nq {
        return Err(Error::Shape("rho needs |Q| rows and tau |Q|^2 entries".into()));
    }
    if spec.tau.iter().any(|&x| x >= ng) {
        return Err(Error::Shape("tau value out of range".into()));
    }
    for qi in q.elements() {
        if !is_automorphism(g, &spec.rho[qi]) {
            return Err(Error::RhoNotAutomorphism(qi));
        }
    }
    for q1 in q.elements() {
        for q2 in q.elements() {
            let t = spec.tau(q1, q2);
            let q12 = q.mul(q1, q2);
            if g.elements().any(|x| spec.rho(q1, spec.rho(q2, x)) != g.conj(t, spec.rho(q12, x))) {
                return Err(Error::RhoCompositionFails(q1, q2));
            }
        }
    }
    for q1 in q.elements() {
        for q2 in q.elements() {
            for q3 in q.elements() {
                let lhs = g.mul(spec.tau(q1, q2), spec.tau(q.mul(q1, q2), q3));
                let rhs = g.mul(spec.rho(q1, spec.tau(q2, q3)), spec.tau(q1, q.mul(q2, q3)));
                if lhs != rhs {
                    return Err(Error::TauCocycleFails(q1, q2, q3));
                }
            }
        }
    }
    let (e, one) = (q.identity(), g.identity());
    for x in q.elements() {
        if spec.tau(e, x) != one {
            return Err(Error::NotNormalized(format!("tau(1,{x})")));
        }
        if spec.tau(x, e) != one {
            return Err(Error::NotNormalized(format!("tau({x},1)")));
        }
        if spec.tau(x, q.inv(x)) != one {
            return Err(Error::NotNormalized(format!("tau({x},{x}^-1)")));
        }
    }
    Ok(())
}

/// Multiplication table of H on pairs (g, q), lexicographically indexed.
pub fn build_h(spec: &ExtensionSpec) -> Result<FiniteGroup> {
    validate_extension_spec(spec)?;
    let n = spec.h_order();
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| spec.h_mul(a, b)).collect()).collect();
    FiniteGroup::from_table(&table)
}

/// t|_G(g, g') = t((g,1), (g',1)).
pub fn restrict_to_g(spec: &ExtensionSpec, t: &Cocycle2) -> Cocycle2 {
    let map: Vec<usize> = spec.g.elements().map(|g| spec.embed(g)).collect();
    t.pullback(&map)
}

/// Elements (z, x) of a central extension by S^1 of a group, with product
/// (z1,x1)(z2,x2) = (z1 z2 t(x1,x2), x1 x2).
#[derive(Debug, Clone, Copy)]
pub struct Twisted<'a> {
    pub group: &'a FiniteGroup,
    pub t: &'a Cocycle2,
}

impl Twisted<'_> {
    pub fn mul(&self, a: (C64, usize), b: (C64, usize)) -> (C64, usize) {
        (a.0 * b.0 * self.t.get(a.1, b.1), self.group.mul(a.1, b.1))
    }

    pub fn inv(&self, a: (C64, usize)) -> (C64, usize) {
        let xi = self.group.inv(a.1);
        // (z,x)(w,x^-1) = (z w t(x,x^-1), 1) and t(1,1) = 1
        (ONE / (a.0 * self.t.get(a.1, xi)), xi)
    }

    pub fn conj(&self, a: (C64, usize), b: (C64, usize)) -> (C64, usize) {
        self.mul(self.mul(a, b), self.inv(a))
    }
}

fn same(a: (C64, usize), b: (C64, usize), tol: f64) -> bool {
    a.1 == b.1 && (a.0 - b.0).norm() <= tol
}

/// sigma, nu and taubar = (sigma, tau) for the section s(q) = (1, q).
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedTwistData {
    pub nq: usize,
    pub ng: usize,
    pub sigma: Vec<C64>,
    pub nu: Vec<C64>,
    pub tau: Vec<usize>,
}

impl DerivedTwistData {
    pub fn sigma(&self, q1: usize, q2: usize) -> C64 {
        self.sigma[q1 * self.nq + q2]
    }

    pub fn nu(&self, q: usize, g: usize) -> C64 {
        self.nu[q * self.ng + g]
    }

    pub fn taubar(&self, q1: usize, q2: usize) -> (C64, usize) {
        (self.sigma(q1, q2), self.tau[q1 * self.nq + q2])
    }
}

/// A validated extension with its cocycle on H and derived section data.
#[derive(Debug, Clone)]
pub struct TwistedExtension {
    pub spec: ExtensionSpec,
    pub h: FiniteGroup,
    pub t: Cocycle2,
    pub t_g: Cocycle2,
    pub data: DerivedTwistData,
}

impl TwistedExtension {
    pub fn new(spec: ExtensionSpec, t: Cocycle2, tol: f64) -> Result<Self> {
        let h = build_h(&spec)?;
        validate_cocycle(&h, &t, tol)?;
        let t_g = restrict_to_g(&spec, &t);
        let data = derive_twist_data(&spec, &h, &t, tol)?;
        Ok(TwistedExtension { spec, h, t, t_g, data })
    }

    /// Skips every cocycle check; only the group data must be valid. Used to
    /// feed corrupted cocycles to the downstream checks.
    pub fn new_unchecked(spec: ExtensionSpec, t: Cocycle2) -> Result<Self> {
        let h = build_h(&spec)?;
        let t_g = restrict_to_g(&spec, &t);
        let data = derive_twist_data(&spec, &h, &t, f64::INFINITY)?;
        Ok(TwistedExtension { spec, h, t, t_g, data })
    }

    /// Ad_q(z, g) = (z nu(q,g), rho_q(g)).
    pub fn ad(&self, q: usize, a: (C64, usize)) -> (C64, usize) {
        (a.0 * self.data.nu(q, a.1), self.spec.rho(q, a.1))
    }

    pub fn g_twisted(&self) -> Twisted<'_> {
        Twisted { group: &self.spec.g, t: &self.t_g }
    }

    pub fn h_twisted(&self) -> Twisted<'_> {
        Twisted { group: &self.h, t: &self.t }
    }
}

/// Computes sigma, nu, taubar and verifies properties (1)-(3), the
/// homomorphism property of each Ad_q and the composition law of Ad.
pub fn derive_twist_data(spec: &ExtensionSpec, h: &FiniteGroup, t: &Cocycle2, tol: f64) -> Result<DerivedTwistData> {
    let (g, q) = (&spec.g, &spec.q);
    let (ng, nq) = (g.order(), q.order());
    let s = |x: usize| spec.section(x);
    for x in q.elements() {
        if (t.get(s(x), s(q.inv(x))) - ONE).norm() > tol {
            return Err(Error::NotNormalized(format!("t(s({x}), s({x}^-1))")));
        }
    }
    let mut sigma = Vec::with_capacity(nq * nq);
    for q1 in q.elements() {
        for q2 in q.elements() {
            let q12 = q.mul(q1, q2);
            let v = t.get(s(q1), s(q2)) * t.get(spec.pair(spec.tau(q1, q2), q12), s(q.inv(q12)));
            sigma.push(v);
        }
    }
    let mut nu = Vec::with_capacity(nq * ng);
    for qi in q.elements() {
        for x in g.elements() {
            let v = t.get(s(qi), spec.embed(x)) * t.get(spec.pair(spec.rho(qi, x), qi), s(q.inv(qi)));
            nu.push(v);
        }
    }
    let data = DerivedTwistData { nq, ng, sigma, nu, tau: spec.tau.clone() };
    check_twist_data(spec, h, t, &data, tol)?;
    Ok(data)
}

fn check_twist_data(spec: &ExtensionSpec, h: &FiniteGroup, t: &Cocycle2, d: &DerivedTwistData, tol: f64) -> Result<()> {
    let (g, q) = (&spec.g, &spec.q);
    let t_g = restrict_to_g(spec, t);
    let ht = Twisted { group: h, t };
    let gt = Twisted { group: g, t: &t_g };
    let fail = |what: &str, tuple: &[usize]| Error::InternalConsistency(format!("{what} fails at {tuple:?}"));
    let unit = (ONE, g.identity());
    let e = q.identity();
    for x in q.elements() {
        for (a, b) in [(e, x), (x, e), (x, q.inv(x))] {
            if !same(d.taubar(a, b), unit, tol) {
                return Err(fail("taubar normalization", &[a, b]));
            }
        }
    }
    let s = |x: usize| (ONE, spec.section(x));
    for q1 in q.elements() {
        for q2 in q.elements() {
            let (z, tg) = d.taubar(q1, q2);
            let lhs = ht.mul(s(q1), s(q2));
            let rhs = ht.mul((z, spec.embed(tg)), s(q.mul(q1, q2)));
            if !same(lhs, rhs, tol) {
                return Err(fail("s(q1)s(q2) = taubar s(q1q2)", &[q1, q2]));
            }
        }
    }
    let ad = |qi: usize, a: (C64, usize)| (a.0 * d.nu(qi, a.1), spec.rho(qi, a.1));
    for qi in q.elements() {
        for x in g.elements() {
            let lhs = ht.conj(s(qi), (ONE, spec.embed(x)));
            let rhs = ad(qi, (ONE, x));
            if !same(lhs, (rhs.0, spec.embed(rhs.1)), tol) {
                return Err(fail("Ad_q = conjugation by s(q)", &[qi, x]));
            }
            for y in g.elements() {
                let lhs = gt.mul(ad(qi, (ONE, x)), ad(qi, (ONE, y)));
                let rhs = ad(qi, gt.mul((ONE, x), (ONE, y)));
                if !same(lhs, rhs, tol) {
                    return Err(fail("Ad_q multiplicative", &[qi, x, y]));
                }
            }
        }
    }
    for q1 in q.elements() {
        for q2 in q.elements() {
            let q12 = q.mul(q1, q2);
            for q3 in q.elements() {
                let lhs = gt.mul(d.taubar(q1, q2), d.taubar(q12, q3));
                let rhs = gt.mul(ad(q1, d.taubar(q2, q3)), d.taubar(q1, q.mul(q2, q3)));
                if !same(lhs, rhs, tol) {
                    return Err(fail("taubar cocycle property", &[q1, q2, q3]));
                }
            }
            for x in g.elements() {
                let lhs = ad(q1, ad(q2, (ONE, x)));
                let rhs = gt.conj(d.taubar(q1, q2), ad(q12, (ONE, x)));
                if !same(lhs, rhs, tol) {
                    return Err(fail("nu composition law", &[q1, q2, x]));
                }
            }
        }
    }
    Ok(())
}

/// Presents H as an extension of H/N by N using a section with
/// s(1) = 1 and s(q^-1) = s(q)^-1. Returns the spec and the map
/// (g, q) -> g s(q) into H, or None if some self-inverse coset has no
/// element of order at most 2.
pub fn from_normal_subgroup(h: &FiniteGroup, n: &[usize]) -> Option<(ExtensionSpec, Vec<usize>)> {
    let nset: BTreeSet<usize> = n.iter().copied().collect();
    let mut coset_of = vec![usize::MAX; h.order()];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for x in h.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c: Vec<usize> = n.iter().map(|&m| h.mul(m, x)).collect();
        for &y in &c {
            coset_of[y] = cosets.len();
        }
        cosets.push(c);
    }
    let nq = cosets.len();
    let qt: Vec<Vec<usize>> = (0..nq)
        .map(|a| (0..nq).map(|b| coset_of[h.mul(cosets[a][0], cosets[b][0])]).collect())
        .collect();
    let q = FiniteGroup::from_table(&qt).ok()?;
    let mut sec = vec![usize::MAX; nq];
    sec[coset_of[h.identity()]] = h.identity();
    for c in 0..nq {
        if sec[c] != usize::MAX {
            continue;
        }
        let ci = q.inv(c);
        if ci == c {
            let x = *cosets[c].iter().filter(|&&x| h.mul(x, x) == h.identity()).min()?;
            sec[c] = x;
        } else {
            let x = *cosets[c].iter().min()?;
            sec[c] = x;
            sec[ci] = h.inv(x);
        }
    }
    let g = h.subgroup(n).ok()?;
    let pos = |x: usize| n.iter().position(|&m| m == x).expect("element of N");
    debug_assert!(nset.contains(&h.identity()));
    let rho: Vec<Vec<usize>> = (0..nq).map(|c| n.iter().map(|&m| pos(h.conj(sec[c], m))).collect()).collect();
    let tau: Vec<usize> = (0..nq * nq)
        .map(|i| {
            let (a, b) = (i / nq, i % nq);
            let ab = coset_of[h.mul(sec[a], sec[b])];
            pos(h.mul(h.mul(sec[a], sec[b]), h.inv(sec[ab])))
        })
        .collect();
    let spec = ExtensionSpec { g, q, rho, tau };
    let map: Vec<usize> = (0..spec.h_order())
        .map(|i| {
            let (gi, c) = spec.split(i);
            h.mul(n[gi], sec[c])
        })
        .collect();
    Some((spec, map))
}
