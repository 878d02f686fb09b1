//! The functors between twisted representations of the extension groupoid
//! and c-twisted sheaves on the dual, and their round-trip isomorphisms.
//!
//! Both sides are `GroupoidRep`s: on the extension side over the section
//! coordinates (g, q) with cocycle theta, on the dual side over the
//! transformation groupoid with cocycle c.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::Cocycle2;
use crate::dual::DualSpace;
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::extension::TwistedExtension;
use crate::gpd_extension::GroupoidExtensionSpec;
use crate::groupoid::FiniteGroupoid;
use crate::linalg::intertwiner_space;
use crate::matrix::CMatrix;
use crate::rep::{random_subrep, regular_rep, twisted_residual, GroupoidRep};
use crate::scalar::{C64, ONE};

/// Largest total dimension for which the generic intertwiner fallback is tried.
const FALLBACK_LIMIT: usize = 14;

/// Everything the functors need: the extension data, its dual and the
/// extension groupoid with its cocycle.
#[derive(Debug, Clone)]
pub struct Context<'a> {
    pub spec: &'a GroupoidExtensionSpec,
    pub dual: &'a DualSpace,
    pub ext: FiniteGroupoid,
    pub theta: Cocycle2,
}

impl<'a> Context<'a> {
    pub fn new(spec: &'a GroupoidExtensionSpec, dual: &'a DualSpace) -> Result<Self> {
        let (ext, theta) = spec.extension_groupoid()?;
        Ok(Context { spec, dual, ext, theta })
    }

    pub fn dual_groupoid(&self) -> &FiniteGroupoid {
        &self.dual.transformation.groupoid
    }

    pub fn points_over(&self, x: usize) -> Vec<usize> {
        (0..self.dual.n_points()).filter(|&p| self.dual.lambda[p] == x).collect()
    }

    fn g_unit(&self) -> usize {
        self.spec.g.identity()
    }

    pub fn random_rep<R: Rng>(&self, rng: &mut R) -> Result<GroupoidRep> {
        random_subrep(&self.ext, &self.theta, rng)
    }

    pub fn random_sheaf<R: Rng>(&self, rng: &mut R) -> Result<GroupoidRep> {
        random_subrep(self.dual_groupoid(), &self.dual.c, rng)
    }
}

/// Offsets of the blocks W_p (x) V_p inside the fiber at each object.
pub(crate) fn block_layout(ctx: &Context, fiber_dims: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut offset = vec![0; ctx.dual.n_points()];
    let mut dims = vec![0; ctx.spec.base.n_obj()];
    for x in 0..dims.len() {
        for p in ctx.points_over(x) {
            offset[p] = dims[x];
            dims[x] += fiber_dims[p] * ctx.dual.dim(p);
        }
    }
    (offset, dims)
}

/// T: a sheaf W becomes the representation with fiber sum_p W_p (x) V_p over
/// each object, and (g, q) acting by W(p, q) (x) U_p(g) (T^p_q)^*.
pub fn functor_t(ctx: &Context, w: &GroupoidRep) -> GroupoidRep {
    let (offset, dims) = block_layout(ctx, &w.dims);
    let nq = ctx.spec.n_arrows();
    let mats = (0..ctx.ext.n_arrows())
        .map(|h| {
            let (g, q) = (h / nq, h % nq);
            let (x, y) = (ctx.spec.base.src(q), ctx.spec.base.tgt(q));
            let mut m = CMatrix::zeros(dims[x], dims[y]);
            for p in ctx.points_over(x) {
                let pq = ctx.dual.act(p, q).expect("action defined over s(q)");
                let a = ctx.dual.transformation.arrow(p, q).expect("arrow (p, q)");
                let t = ctx.dual.intertwiner(p, q).expect("intertwiner (p, q)");
                let v = &ctx.dual.irrep(p).u[g] * &t.adjoint();
                m.set_block(offset[p], offset[pq], &w.mats[a].kron(&v));
            }
            m
        })
        .collect();
    GroupoidRep { dims, mats }
}

/// T followed by an exhaustive check of the twisted law on the extension groupoid.
pub fn functor_t_checked(ctx: &Context, w: &GroupoidRep, tol: f64) -> Result<GroupoidRep> {
    let v = functor_t(ctx, w);
    check_multiplicative(&ctx.ext, &ctx.theta, &v, tol)?;
    Ok(v)
}

/// Names the first composable pair where pi(a) pi(b) = c(a,b) pi(ab) fails.
pub fn check_multiplicative(g: &FiniteGroupoid, c: &Cocycle2, v: &GroupoidRep, tol: f64) -> Result<()> {
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            if let Some(ab) = g.compose(a, b) {
                let dev = (&v.mats[a] * &v.mats[b]).dist(&v.mats[ab].scale(c.get(a, b)));
                if dev > tol {
                    return Err(Error::MultiplicativityFails(a, b, dev));
                }
            }
        }
    }
    Ok(())
}

/// S applied to a representation, with the Frobenius-orthonormal bases of the
/// fibers Hom^G(V_p, V_x) it was computed in.
#[derive(Debug, Clone)]
pub struct SheafImage {
    pub sheaf: GroupoidRep,
    pub bases: Vec<Vec<CMatrix>>,
}

/// S: the fiber at p is Hom^G(V_p, V_x), x = lambda(p); the arrow (p, q) sends
/// phi to pi(1, q) phi T^p_q.
pub fn functor_s(ctx: &Context, v: &GroupoidRep) -> Result<SheafImage> {
    let ng = ctx.spec.g.order();
    let mut bases = Vec::with_capacity(ctx.dual.n_points());
    for p in 0..ctx.dual.n_points() {
        let x = ctx.dual.lambda[p];
        let unit = ctx.spec.base.unit(x);
        let codomain: Vec<CMatrix> = (0..ng).map(|g| v.mats[ctx.spec.ext_arrow(g, unit)].clone()).collect();
        let domain = &ctx.dual.irrep(p).u;
        bases.push(if v.dims[x] == 0 { Vec::new() } else { intertwiner_space(domain, &codomain)? });
    }
    let dg = ctx.dual_groupoid();
    let mats = (0..dg.n_arrows())
        .map(|a| {
            let (p, q) = ctx.dual.transformation.arrows[a];
            let pq = dg.tgt(a);
            let t = ctx.dual.intertwiner(p, q).expect("intertwiner (p, q)");
            let lift = &v.mats[ctx.spec.ext_arrow(ctx.g_unit(), q)];
            let moved: Vec<CMatrix> = bases[pq].iter().map(|phi| &(lift * phi) * t).collect();
            CMatrix::from_fn(bases[p].len(), bases[pq].len(), |i, j| bases[p][i].inner(&moved[j]))
        })
        .collect();
    Ok(SheafImage { sheaf: GroupoidRep { dims: bases.iter().map(|b| b.len()).collect(), mats }, bases })
}

/// Certificate that a family of fiber maps is an isomorphism of twisted representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoCertificate {
    pub intertwining_residual: f64,
    /// Smallest singular value over all fiber maps (1 for empty fibers).
    pub min_singular: f64,
    pub canonical: bool,
}

impl IsoCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.intertwining_residual <= tol && self.min_singular >= 1e-6
    }
}

fn min_singular(maps: &[CMatrix]) -> Result<f64> {
    let mut s = 1.0f64;
    for m in maps {
        if m.rows() != m.cols() {
            return Ok(0.0);
        }
        if m.rows() == 0 {
            continue;
        }
        let e = hermitian_eigen(&(&m.adjoint() * m), 1e-12)?;
        s = s.min(e.values[0].max(0.0).sqrt());
    }
    Ok(s)
}

/// Largest deviation of phi_{s(a)} A(a) from B(a) phi_{t(a)}.
fn naturality_residual(g: &FiniteGroupoid, a: &GroupoidRep, b: &GroupoidRep, phi: &[CMatrix]) -> f64 {
    (0..g.n_arrows())
        .map(|k| (&phi[g.src(k)] * &a.mats[k]).dist(&(&b.mats[k] * &phi[g.tgt(k)])))
        .fold(0.0, f64::max)
}

/// Looks for an isomorphism A -> B by solving for intertwiners of the global
/// operators directly. Only used on small inputs.
fn solved_iso<R: Rng>(g: &FiniteGroupoid, a: &GroupoidRep, b: &GroupoidRep, rng: &mut R) -> Result<Option<IsoCertificate>> {
    if a.dims != b.dims || a.total_dim() > FALLBACK_LIMIT {
        return Ok(None);
    }
    let space = intertwiner_space(&a.global_operators(g), &b.global_operators(g))?;
    if space.is_empty() {
        return Ok(None);
    }
    let mut x = CMatrix::zeros(b.total_dim(), a.total_dim());
    for s in &space {
        let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        x = &x + &s.scale(z);
    }
    let (oa, ob) = (a.offsets(), b.offsets());
    let phi: Vec<CMatrix> = (0..g.n_obj()).map(|o| x.block(ob[o], oa[o], b.dims[o], a.dims[o])).collect();
    Ok(Some(IsoCertificate {
        intertwining_residual: naturality_residual(g, a, b, &phi),
        min_singular: min_singular(&phi)?,
        canonical: false,
    }))
}

/// Accepts the canonical map if it works, else the fallback, else reports the failure.
fn settle(
    canonical: IsoCertificate,
    fallback: impl FnOnce() -> Result<Option<IsoCertificate>>,
    tol: f64,
    what: &str,
    dims: &[usize],
) -> Result<IsoCertificate> {
    if canonical.holds(tol) {
        return Ok(canonical);
    }
    match fallback()? {
        Some(c) if c.holds(tol) => Ok(c),
        _ => Err(Error::NoIsomorphismFound(format!(
            "{what}: fiber dims {dims:?}, residual {:e}, min singular value {:e}",
            canonical.intertwining_residual, canonical.min_singular
        ))),
    }
}

/// Round trip on the representation side: T(S(V)) -> V by evaluation,
/// phi (x) v -> phi(v).
pub fn rep_roundtrip<R: Rng>(ctx: &Context, v: &GroupoidRep, tol: f64, rng: &mut R) -> Result<IsoCertificate> {
    let s = functor_s(ctx, v)?;
    let ts = functor_t(ctx, &s.sheaf);
    let ev: Vec<CMatrix> = (0..ctx.spec.base.n_obj())
        .map(|x| {
            let cols: Vec<Vec<C64>> = ctx
                .points_over(x)
                .into_iter()
                .flat_map(|p| {
                    let d = ctx.dual.dim(p);
                    s.bases[p].iter().flat_map(move |phi| (0..d).map(move |j| phi.column(j)))
                })
                .collect();
            CMatrix::from_columns(v.dims[x], &cols)
        })
        .collect();
    let cert = IsoCertificate {
        intertwining_residual: naturality_residual(&ctx.ext, &ts, v, &ev),
        min_singular: min_singular(&ev)?,
        canonical: true,
    };
    settle(cert, || solved_iso(&ctx.ext, &ts, v, rng), tol, "T(S(V)) -> V", &v.dims)
}

/// Round trip on the sheaf side: W -> S(T(W)) by coevaluation,
/// w -> (v -> w (x) v).
pub fn sheaf_roundtrip<R: Rng>(ctx: &Context, w: &GroupoidRep, tol: f64, rng: &mut R) -> Result<IsoCertificate> {
    let tw = functor_t(ctx, w);
    let st = functor_s(ctx, &tw)?;
    let (offset, _) = block_layout(ctx, &w.dims);
    let coev: Vec<CMatrix> = (0..ctx.dual.n_points())
        .map(|p| {
            let d = ctx.dual.dim(p);
            CMatrix::from_fn(st.bases[p].len(), w.dims[p], |k, i| {
                (0..d).map(|j| st.bases[p][k][(offset[p] + i * d + j, j)].conj()).sum()
            })
        })
        .collect();
    let dg = ctx.dual_groupoid();
    let cert = IsoCertificate {
        intertwining_residual: naturality_residual(dg, w, &st.sheaf, &coev),
        min_singular: min_singular(&coev)?,
        canonical: true,
    };
    settle(cert, || solved_iso(dg, w, &st.sheaf, rng), tol, "W -> S(T(W))", &w.dims)
}

/// Report for one sampled object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrip {
    pub input_residual: f64,
    pub image_residual: f64,
    pub iso: IsoCertificate,
}

impl RoundTrip {
    pub fn holds(&self, tol: f64) -> bool {
        self.input_residual <= tol && self.image_residual <= tol && self.iso.holds(tol)
    }
}

/// Applies both functors to `samples` random objects on each side and checks
/// both round trips. Returns (representation side, sheaf side).
pub fn equivalence_check<R: Rng>(
    ctx: &Context,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<(Vec<RoundTrip>, Vec<RoundTrip>)> {
    let dg = ctx.dual_groupoid();
    let mut reps = Vec::with_capacity(samples);
    let mut sheaves = Vec::with_capacity(samples);
    for _ in 0..samples {
        let v = ctx.random_rep(rng)?;
        let s = functor_s(ctx, &v)?;
        reps.push(RoundTrip {
            input_residual: twisted_residual(&ctx.ext, &ctx.theta, &v),
            image_residual: twisted_residual(dg, &ctx.dual.c, &s.sheaf),
            iso: rep_roundtrip(ctx, &v, tol, rng)?,
        });
        let w = ctx.random_sheaf(rng)?;
        sheaves.push(RoundTrip {
            input_residual: twisted_residual(dg, &ctx.dual.c, &w),
            image_residual: twisted_residual(&ctx.ext, &ctx.theta, &functor_t(ctx, &w)),
            iso: sheaf_roundtrip(ctx, &w, tol, rng)?,
        });
    }
    Ok((reps, sheaves))
}

/// Round trips on the regular objects of both sides plus `samples` random
/// objects per side, all drawn from `seed`.
pub fn sheaf_equivalence_check(ctx: &Context, samples: usize, seed: u64, tol: f64) -> Result<(Vec<RoundTrip>, Vec<RoundTrip>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dg = ctx.dual_groupoid();
    let v = regular_rep(&ctx.ext, &ctx.theta);
    let w = regular_rep(dg, &ctx.dual.c);
    let mut first_rep = vec![RoundTrip {
        input_residual: twisted_residual(&ctx.ext, &ctx.theta, &v),
        image_residual: twisted_residual(dg, &ctx.dual.c, &functor_s(ctx, &v)?.sheaf),
        iso: rep_roundtrip(ctx, &v, tol, &mut rng)?,
    }];
    let mut first_sheaf = vec![RoundTrip {
        input_residual: twisted_residual(dg, &ctx.dual.c, &w),
        image_residual: twisted_residual(&ctx.ext, &ctx.theta, &functor_t(ctx, &w)),
        iso: sheaf_roundtrip(ctx, &w, tol, &mut rng)?,
    }];
    let (reps, sheaves) = equivalence_check(ctx, samples, tol, &mut rng)?;
    first_rep.extend(reps);
    first_sheaf.extend(sheaves);
    Ok((first_rep, first_sheaf))
}

/// f(g, q) = t((g, 1), (1, q)): the gauge relating H coordinates to section
/// coordinates, pi_section(g, q) = f(g, q) pi_H(g, q).
pub fn section_gauge(ext: &TwistedExtension) -> Vec<C64> {
    let nq = ext.spec.q.order();
    (0..ext.spec.h_order())
        .map(|h| ext.t.get(ext.spec.embed(h / nq), ext.spec.section(h % nq)))
        .collect()
}

/// Converts a t-twisted representation of H (matrices indexed like H) into a
/// representation of the one-object extension groupoid.
pub fn h_rep_to_section(ext: &TwistedExtension, pi: &[CMatrix]) -> Result<GroupoidRep> {
    if pi.len() != ext.spec.h_order() {
        return Err(Error::Shape(format!("expected {} matrices, got {}", ext.spec.h_order(), pi.len())));
    }
    let f = section_gauge(ext);
    Ok(GroupoidRep {
        dims: vec![pi.first().map_or(0, |m| m.rows())],
        mats: pi.iter().zip(&f).map(|(m, z)| m.scale(*z)).collect(),
    })
}

pub fn section_to_h_rep(ext: &TwistedExtension, v: &GroupoidRep) -> Vec<CMatrix> {
    let f = section_gauge(ext);
    v.mats.iter().zip(&f).map(|(m, z)| m.scale(ONE / z)).collect()
}
