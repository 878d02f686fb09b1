//! The dual of a twisted extension: points are classes of irreducible twisted
//! representations of the fibers, arrows act by p -> [p o Ad_q], and the
//! intertwiners' failure to compose gives the dual cocycle c.
//!
//! Arrow q carries the dual fiber over s(q) to the dual fiber over t(q); in the
//! group case this is the right action p·q = [p o Ad_q].

use crate::cocycle::{validate_cocycle, Cocycle2};
use crate::error::{Error, Result};
use crate::extension::TwistedExtension;
use crate::gpd_extension::GroupoidExtensionSpec;
use crate::group::FiniteGroup;
use crate::groupoid::{groupoid_cocycle_residual, validate_groupoid_cocycle, TransformationGroupoid};
use crate::irreps::{enumerate_twisted_irreps, intertwiner_between, twisted_character, DualSet, TwistedIrrep};
use crate::linalg::intertwining_residual;
use crate::matrix::CMatrix;
use crate::scalar::{C64, ONE};

const NONE: usize = usize::MAX;

/// Numeric certificates collected while building the dual.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DualCertificates {
    pub intertwining_residual: f64,
    pub schur_deviation: f64,
    pub cocycle_residual: f64,
    pub modulus_residual: f64,
}

#[derive(Debug, Clone)]
pub struct DualSpace {
    pub fibers: Vec<DualSet>,
    /// (object, class index within that object's fiber)
    pub points: Vec<(usize, usize)>,
    pub lambda: Vec<usize>,
    pub n_base: usize,
    action: Vec<usize>,
    intertwiners: Vec<Option<CMatrix>>,
    pub transformation: TransformationGroupoid,
    pub c: Cocycle2,
    pub certificates: DualCertificates,
}

impl DualSpace {
    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn irrep(&self, p: usize) -> &TwistedIrrep {
        let (x, i) = self.points[p];
        &self.fibers[x].irreps[i]
    }

    pub fn dim(&self, p: usize) -> usize {
        self.irrep(p).dim
    }

    /// p·q, defined when lambda(p) = s(q).
    pub fn act(&self, p: usize, q: usize) -> Option<usize> {
        let v = self.action[p * self.n_base + q];
        (v != NONE).then_some(v)
    }

    /// T^p_q : V_p -> V_{p·q}.
    pub fn intertwiner(&self, p: usize, q: usize) -> Option<&CMatrix> {
        self.intertwiners[p * self.n_base + q].as_ref()
    }

    /// c^p(q1, q2) for composable data.
    pub fn c_at(&self, p: usize, q1: usize, q2: usize) -> Option<C64> {
        let a1 = self.transformation.arrow(p, q1)?;
        let a2 = self.transformation.arrow(self.act(p, q1)?, q2)?;
        self.transformation.groupoid.compose(a1, a2)?;
        Some(self.c.get(a1, a2))
    }
}

/// Dual sets of every fiber (same seed for each object).
pub fn fiber_duals(spec: &GroupoidExtensionSpec, seed: u64) -> Result<Vec<DualSet>> {
    let mut out: Vec<DualSet> = Vec::with_capacity(spec.t_obj.len());
    for (x, t) in spec.t_obj.iter().enumerate() {
        match (0..x).find(|&y| spec.t_obj[y] == *t) {
            Some(y) => out.push(out[y].clone()),
            None => out.push(enumerate_twisted_irreps(&spec.g, t, seed)?),
        }
    }
    Ok(out)
}

fn points_of(fibers: &[DualSet]) -> Vec<(usize, usize)> {
    fibers.iter().enumerate().flat_map(|(x, d)| (0..d.len()).map(move |i| (x, i))).collect()
}

/// g -> nu_q(g) U_p(a_q(g)), the representation p o Ad_q of the fiber at t(q).
pub fn transported(spec: &GroupoidExtensionSpec, u: &[CMatrix], q: usize) -> Vec<CMatrix> {
    spec.g
        .elements()
        .map(|y| {
            let m = &u[spec.ad_map[q][y]];
            let z = spec.ad_nu[q][y];
            if z == ONE {
                m.clone()
            } else {
                m.scale(z)
            }
        })
        .collect()
}

/// Action table indexed p * |arrows| + q, with the action axioms verified.
pub fn compute_action(spec: &GroupoidExtensionSpec, fibers: &[DualSet]) -> Result<Vec<usize>> {
    let base = &spec.base;
    let nb = base.n_arrows();
    let points = points_of(fibers);
    let offset: Vec<usize> = fibers
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.len();
            Some(o)
        })
        .collect();
    let mut action = vec![NONE; points.len() * nb];
    for (p, &(x, i)) in points.iter().enumerate() {
        for q in base.arrows_from(x) {
            if base.is_unit(q) {
                action[p * nb + q] = p;
                continue;
            }
            let r = TwistedIrrep { dim: fibers[x].irreps[i].dim, u: transported(spec, &fibers[x].irreps[i].u, q) };
            let y = base.tgt(q);
            let class = fibers[y].identify(&twisted_character(&r)).ok_or(Error::ClassNotFound { point: p, arrow: q })?;
            if fibers[y].irreps[class].dim != r.dim {
                return Err(Error::ClassNotFound { point: p, arrow: q });
            }
            action[p * nb + q] = offset[y] + class;
        }
    }
    for p in 0..points.len() {
        for q1 in base.arrows_from(points[p].0) {
            let pq1 = action[p * nb + q1];
            for q2 in base.arrows_from(base.tgt(q1)) {
                let q12 = base.compose(q1, q2).expect("composable");
                if action[pq1 * nb + q2] != action[p * nb + q12] {
                    return Err(Error::InternalConsistency(format!("action axiom fails at point {p}, arrows ({q1}, {q2})")));
                }
            }
        }
    }
    Ok(action)
}

/// Unitary, phase-normalized T^p_q with T (p o Ad_q)(g) = U_{p·q}(g) T; identity at unit arrows.
pub fn compute_intertwiners(
    spec: &GroupoidExtensionSpec,
    fibers: &[DualSet],
    action: &[usize],
    tol: f64,
) -> Result<(Vec<Option<CMatrix>>, f64)> {
    let base = &spec.base;
    let nb = base.n_arrows();
    let points = points_of(fibers);
    let mut table = vec![None; points.len() * nb];
    let mut worst = 0.0f64;
    for (p, &(x, i)) in points.iter().enumerate() {
        let rp = &fibers[x].irreps[i];
        for q in base.arrows_from(x) {
            let target = action[p * nb + q];
            let (y, j) = points[target];
            let rq = &fibers[y].irreps[j];
            let src = transported(spec, &rp.u, q);
            let t = if base.is_unit(q) || rp.dim == 1 {
                CMatrix::identity(rp.dim)
            } else {
                intertwiner_between(&src, &rq.u)?.ok_or(Error::ClassNotFound { point: p, arrow: q })?
            };
            let res = intertwining_residual(&t, &src, &rq.u).max(t.unitary_defect());
            if res > tol {
                return Err(Error::InternalConsistency(format!(
                    "intertwiner at point {p}, arrow {q} has residual {res:e}"
                )));
            }
            worst = worst.max(res);
            table[p * nb + q] = Some(t);
        }
    }
    Ok((table, worst))
}

/// c^p(q1,q2) = tr(M)/d with M = T^{p·q1}_{q2} T^p_{q1} taubar_s U_p(taubar_g) (T^p_{q1q2})*,
/// after checking that M is scalar. Returns the action groupoid, c on its arrows and the
/// largest scalar deviation.
pub fn compute_dual_cocycle(
    spec: &GroupoidExtensionSpec,
    fibers: &[DualSet],
    action: &[usize],
    intertwiners: &[Option<CMatrix>],
    tol: f64,
) -> Result<(TransformationGroupoid, Cocycle2, f64)> {
    let base = &spec.base;
    let nb = base.n_arrows();
    let points = points_of(fibers);
    let lambda: Vec<usize> = points.iter().map(|&(x, _)| x).collect();
    let tg = TransformationGroupoid::new(base, &lambda, |p, q| action[p * nb + q])?;
    let n = tg.groupoid.n_arrows();
    let mut c = Cocycle2::trivial(n);
    let mut worst = 0.0f64;
    let t_of = |p: usize, q: usize| intertwiners[p * nb + q].as_ref().expect("intertwiner");
    for a1 in 0..n {
        let (p, q1) = tg.arrows[a1];
        let (x, i) = points[p];
        let rp = &fibers[x].irreps[i];
        let d = rp.dim;
        for a2 in 0..n {
            if tg.groupoid.compose(a1, a2).is_none() {
                continue;
            }
            let (pq1, q2) = tg.arrows[a2];
            let q12 = base.compose(q1, q2).expect("composable");
            let (zs, zg) = spec.taubar(q1, q2);
            let x_mat = rp.u[zg].scale(zs);
            let step = t_of(pq1, q2) * t_of(p, q1);
            let m = &(&step * &x_mat) * &t_of(p, q12).adjoint();
            let scalar = m.trace() / d as f64;
            let dev = m.dist(&CMatrix::identity(d).scale(scalar));
            if dev >= tol {
                return Err(Error::NotScalar { point: p, q1, q2, deviation: dev });
            }
            worst = worst.max(dev);
            c.set(a1, a2, scalar);
        }
    }
    Ok((tg, c, worst))
}

/// Full dual construction with every check applied.
pub fn build_dual_space(spec: &GroupoidExtensionSpec, seed: u64, tol: f64) -> Result<DualSpace> {
    let fibers = fiber_duals(spec, seed)?;
    let action = compute_action(spec, &fibers)?;
    let (intertwiners, int_res) = compute_intertwiners(spec, &fibers, &action, tol)?;
    let (transformation, c, schur) = compute_dual_cocycle(spec, &fibers, &action, &intertwiners, tol)?;
    validate_groupoid_cocycle(&transformation.groupoid, &c, tol)?;
    let cocycle_residual = groupoid_cocycle_residual(&transformation.groupoid, &c);
    let g = &transformation.groupoid;
    let mut modulus = 0.0f64;
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            if g.compose(a, b).is_some() {
                modulus = modulus.max((c.get(a, b).norm() - 1.0).abs());
            }
        }
    }
    let points = points_of(&fibers);
    let lambda = points.iter().map(|&(x, _)| x).collect();
    Ok(DualSpace {
        fibers,
        points,
        lambda,
        n_base: spec.base.n_arrows(),
        action,
        intertwiners,
        transformation,
        c,
        certificates: DualCertificates {
            intertwining_residual: int_res,
            schur_deviation: schur,
            cocycle_residual,
            modulus_residual: modulus,
        },
    })
}

/// One orbit of the dual with its stabilizer at the basepoint and the restricted cocycle.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub points: Vec<usize>,
    pub basepoint: usize,
    /// Base arrows fixing the basepoint, in arrow order.
    pub isotropy: Vec<usize>,
    pub group: FiniteGroup,
    pub cocycle: Cocycle2,
}

/// Orbits (components of the action groupoid), basepoint = least point,
/// stabilizer Q_i and c restricted to it.
pub fn orbit_decompose(spec: &GroupoidExtensionSpec, dual: &DualSpace, tol: f64) -> Result<Vec<Orbit>> {
    let base = &spec.base;
    let mut out = Vec::new();
    for comp in dual.transformation.groupoid.components() {
        let p = comp[0];
        let x = dual.lambda[p];
        let isotropy: Vec<usize> = base.isotropy_arrows(x).into_iter().filter(|&q| dual.act(p, q) == Some(p)).collect();
        let pos = |q: usize| isotropy.iter().position(|&r| r == q).expect("stabilizer is closed");
        let table: Vec<Vec<usize>> = isotropy
            .iter()
            .map(|&a| isotropy.iter().map(|&b| pos(base.compose(a, b).expect("loops compose"))).collect())
            .collect();
        let group = FiniteGroup::from_table(&table)?;
        let cocycle = Cocycle2::from_fn(isotropy.len(), |i, j| dual.c_at(p, isotropy[i], isotropy[j]).expect("composable"));
        validate_cocycle(&group, &cocycle, tol)?;
        out.push(Orbit { points: comp, basepoint: p, isotropy, group, cocycle });
    }
    Ok(out)
}

/// The group-case dual: the action of Q on classes of G, with T, c and orbits.
#[derive(Debug, Clone)]
pub struct DualGroupoid {
    pub space: DualSpace,
    pub orbits: Vec<Orbit>,
}

impl DualGroupoid {
    pub fn points(&self) -> &DualSet {
        &self.space.fibers[0]
    }

    pub fn n_points(&self) -> usize {
        self.space.n_points()
    }

    /// p·q.
    pub fn act(&self, p: usize, q: usize) -> usize {
        self.space.act(p, q).expect("every point lies over the single object")
    }

    pub fn intertwiner(&self, p: usize, q: usize) -> &CMatrix {
        self.space.intertwiner(p, q).expect("every point lies over the single object")
    }

    pub fn c(&self, p: usize, q1: usize, q2: usize) -> C64 {
        self.space.c_at(p, q1, q2).expect("all pairs compose in a group")
    }
}

/// Builds the dual of (H, t) relative to Q.
pub fn build_dual(ext: &TwistedExtension, seed: u64, tol: f64) -> Result<DualGroupoid> {
    let spec = GroupoidExtensionSpec::from_group_extension(ext);
    let space = build_dual_space(&spec, seed, tol)?;
    let orbits = orbit_decompose(&spec, &space, tol)?;
    Ok(DualGroupoid { space, orbits })
}

/// Action table [q][p] = p·q on a given dual set.
pub fn q_action(dual: &DualSet, ext: &TwistedExtension) -> Result<Vec<Vec<usize>>> {
    let spec = GroupoidExtensionSpec::from_group_extension(ext);
    let fibers = vec![dual.clone()];
    let action = compute_action(&spec, &fibers)?;
    let nq = ext.spec.q.order();
    Ok((0..nq).map(|q| (0..dual.len()).map(|p| action[p * nq + q]).collect()).collect())
}

/// Intertwiner table [q][p] = T^p_q for a given action.
pub fn compute_intertwiner_table(dual: &DualSet, ext: &TwistedExtension, action: &[Vec<usize>], tol: f64) -> Result<Vec<Vec<CMatrix>>> {
    let spec = GroupoidExtensionSpec::from_group_extension(ext);
    let nq = ext.spec.q.order();
    let flat: Vec<usize> = (0..dual.len() * nq).map(|i| action[i % nq][i / nq]).collect();
    let (table, _) = compute_intertwiners(&spec, std::slice::from_ref(dual), &flat, tol)?;
    Ok((0..nq)
        .map(|q| (0..dual.len()).map(|p| table[p * nq + q].clone().expect("defined")).collect())
        .collect())
}

/// Dual cocycle table [p][q1][q2] = c^p(q1, q2).
pub fn compute_dual_cocycle_table(dual: &DualSet, ext: &TwistedExtension, action: &[Vec<usize>], t: &[Vec<CMatrix>], tol: f64) -> Result<Vec<Vec<Vec<C64>>>> {
    let spec = GroupoidExtensionSpec::from_group_extension(ext);
    let nq = ext.spec.q.order();
    let flat: Vec<usize> = (0..dual.len() * nq).map(|i| action[i % nq][i / nq]).collect();
    let table: Vec<Option<CMatrix>> = (0..dual.len() * nq).map(|i| Some(t[i % nq][i / nq].clone())).collect();
    let (tg, c, _) = compute_dual_cocycle(&spec, std::slice::from_ref(dual), &flat, &table, tol)?;
    Ok((0..dual.len())
        .map(|p| {
            (0..nq)
                .map(|q1| {
                    let a1 = tg.arrow(p, q1).expect("arrow");
                    let p1 = flat[p * nq + q1];
                    (0..nq).map(|q2| c.get(a1, tg.arrow(p1, q2).expect("arrow"))).collect()
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::ExtensionSpec;

    fn s3_ext() -> TwistedExtension {
        let spec = ExtensionSpec {
            g: FiniteGroup::cyclic(3),
            q: FiniteGroup::cyclic(2),
            rho: vec![vec![0, 1, 2], vec![0, 2, 1]],
            tau: vec![0; 4],
        };
        TwistedExtension::new(spec, Cocycle2::trivial(6), 1e-9).unwrap()
    }

    #[test]
    fn s3_orbits() {
        let dual = build_dual(&s3_ext(), 0, 1e-8).unwrap();
        assert_eq!(dual.n_points(), 3);
        let mut shape: Vec<(usize, usize)> = dual.orbits.iter().map(|o| (o.points.len(), o.group.order())).collect();
        shape.sort_unstable();
        assert_eq!(shape, vec![(1, 2), (2, 1)]);
        // the trivial character is fixed, the other two are swapped
        let trivial = (0..3).find(|&p| dual.points().characters[p].iter().all(|z| (z - ONE).norm() < 1e-9)).unwrap();
        assert_eq!(dual.act(trivial, 1), trivial);
    }

    #[test]
    fn direct_product_has_trivial_c() {
        let spec = ExtensionSpec::direct(FiniteGroup::cyclic(3), FiniteGroup::cyclic(2));
        let ext = TwistedExtension::new(spec, Cocycle2::trivial(6), 1e-9).unwrap();
        let dual = build_dual(&ext, 0, 1e-8).unwrap();
        assert!(dual.space.c.is_trivial());
        for p in 0..3 {
            assert_eq!(dual.act(p, 1), p);
        }
    }

    #[test]
    fn wrappers_agree_with_full_build() {
        let ext = s3_ext();
        let dual = build_dual(&ext, 0, 1e-8).unwrap();
        let action = q_action(dual.points(), &ext).unwrap();
        let t = compute_intertwiner_table(dual.points(), &ext, &action, 1e-8).unwrap();
        let c = compute_dual_cocycle_table(dual.points(), &ext, &action, &t, 1e-8).unwrap();
        for p in 0..3 {
            for q1 in 0..2 {
                assert_eq!(action[q1][p], dual.act(p, q1));
                for q2 in 0..2 {
                    assert_eq!(c[p][q1][q2], dual.c(p, q1, q2));
                }
            }
        }
    }
}
