//! Morita equivalence between the twisted algebra of the extension and the
//! twisted convolution algebra of the dual, certified on an explicit bimodule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{build_twisted_group_algebra, FDAlgebra};
use crate::dual::{orbit_decompose, DualGroupoid, DualSpace};
use crate::error::{Error, Result};
use crate::extension::TwistedExtension;
use crate::functors::{block_layout, functor_t, section_gauge, Context};
use crate::gpd_extension::GroupoidExtensionSpec;
use crate::groupoid::build_convolution_algebra;
use crate::irreps::derive_seed;
use crate::linalg::{commutant_dim, span_rank};
use crate::matrix::CMatrix;
use crate::rep::regular_rep;
use crate::scalar::ONE;

/// Relative tolerance for the rank and commutant computations.
pub const RANK_TOL: f64 = 1e-7;

/// The algebra on arrows (p, q) of the dual transformation groupoid with
/// d_(p,q) d_(p q, q') = c^p(q, q') d_(p, q q').
pub fn build_dual_algebra(dual: &DualSpace) -> Result<FDAlgebra> {
    build_convolution_algebra(&dual.transformation.groupoid, &dual.c)
}

/// A bimodule given by operators for each basis element of both algebras.
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub dim: usize,
    pub left: Vec<CMatrix>,
    /// `right[e]` is x -> x·d_e, acting on column vectors.
    pub right: Vec<CMatrix>,
    pub left_residual: f64,
    pub right_residual: f64,
    pub commutation_residual: f64,
}

/// E = T(regular sheaf) = sum_p (functions on arrows out of p) (x) V_p: left
/// action of the extension groupoid through T, right action by c-twisted right
/// translation. Operators are in section coordinates.
fn section_bimodule(ctx: &Context) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let dg = ctx.dual_groupoid();
    let reg = regular_rep(dg, &ctx.dual.c);
    let e = functor_t(ctx, &reg);
    let left = e.global_operators(&ctx.ext);

    let (offset, _) = block_layout(ctx, &reg.dims);
    let obj_off = e.offsets();
    let n = e.total_dim();
    let fibers: Vec<Vec<usize>> = (0..dg.n_obj()).map(|p| dg.arrows_from(p).collect()).collect();
    let right = (0..dg.n_arrows())
        .map(|arrow| {
            let mut m = CMatrix::zeros(n, n);
            for (p, fiber) in fibers.iter().enumerate() {
                let d = ctx.dual.dim(p);
                let base = obj_off[ctx.dual.lambda[p]] + offset[p];
                for (i, &b) in fiber.iter().enumerate() {
                    let Some(be) = dg.compose(b, arrow) else { continue };
                    let k = fiber.iter().position(|&x| x == be).expect("same source");
                    let z = ctx.dual.c.get(b, arrow);
                    for j in 0..d {
                        m[(base + k * d + j, base + i * d + j)] = z;
                    }
                }
            }
            m
        })
        .collect();
    (left, right)
}

fn structure_residual(alg: &FDAlgebra, ops: &[CMatrix], i: usize, j: usize, reversed: bool) -> f64 {
    let n = ops[i].rows();
    let mut expect = CMatrix::zeros(n, n);
    for &(k, z) in alg.product(i, j) {
        expect = &expect + &ops[k].scale(z);
    }
    let got = if reversed { &ops[j] * &ops[i] } else { &ops[i] * &ops[j] };
    got.dist(&expect)
}

/// Checks both module structures and that the actions commute.
pub fn assemble_bimodule(a: &FDAlgebra, b: &FDAlgebra, left: Vec<CMatrix>, right: Vec<CMatrix>, tol: f64) -> Result<Bimodule> {
    let dim = left.first().or(right.first()).map_or(0, |m| m.rows());
    let mut res = [0.0f64; 3];
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let r = structure_residual(a, &left, i, j, false);
            if r > tol {
                return Err(Error::ModuleAxiomFails(i, j, "left".into()));
            }
            res[0] = res[0].max(r);
        }
    }
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            let r = structure_residual(b, &right, i, j, true);
            if r > tol {
                return Err(Error::ModuleAxiomFails(i, j, "right".into()));
            }
            res[1] = res[1].max(r);
        }
    }
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            let c = (l * r).dist(&(r * l));
            if c > tol {
                return Err(Error::ModuleAxiomFails(i, j, "commutation".into()));
            }
            res[2] = res[2].max(c);
        }
    }
    Ok(Bimodule { dim, left, right, left_residual: res[0], right_residual: res[1], commutation_residual: res[2] })
}

/// The bimodule between C(H, t) (basis indexed like H) and the dual algebra.
pub fn build_bimodule(ext: &TwistedExtension, dual: &DualGroupoid, tol: f64) -> Result<(FDAlgebra, FDAlgebra, Bimodule)> {
    let spec = GroupoidExtensionSpec::from_group_extension(ext);
    let ctx = Context::new(&spec, &dual.space)?;
    let (left, right) = section_bimodule(&ctx);
    let f = section_gauge(ext);
    let left = left.iter().zip(&f).map(|(m, z)| m.scale(ONE / z)).collect();
    let a = build_twisted_group_algebra(&ext.h, &ext.t)?;
    let b = build_dual_algebra(&dual.space)?;
    let e = assemble_bimodule(&a, &b, left, right, tol)?;
    Ok((a, b, e))
}

/// The bimodule between the convolution algebra of the extension groupoid and
/// the dual algebra.
pub fn build_groupoid_bimodule(ctx: &Context, tol: f64) -> Result<(FDAlgebra, FDAlgebra, Bimodule)> {
    let (left, right) = section_bimodule(ctx);
    let a = build_convolution_algebra(&ctx.ext, &ctx.theta)?;
    let b = build_dual_algebra(ctx.dual)?;
    let e = assemble_bimodule(&a, &b, left, right, tol)?;
    Ok((a, b, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoritaReport {
    pub blocks_a: Vec<usize>,
    pub blocks_b: Vec<usize>,
    pub center_a: usize,
    pub center_b: usize,
    pub k0_rank_a: usize,
    pub k0_rank_b: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub bimodule_dim: usize,
    /// rank of span{L(a)} and the dimension of the commutant of the right action
    pub left_image_rank: usize,
    pub right_commutant_dim: usize,
    pub right_image_rank: usize,
    pub left_commutant_dim: usize,
    pub module_residual: f64,
    pub verdict: bool,
}

impl MoritaReport {
    pub fn double_commutant(&self) -> bool {
        self.left_image_rank == self.right_commutant_dim
            && self.right_image_rank == self.left_commutant_dim
            && self.left_image_rank == self.dim_a
            && self.right_image_rank == self.dim_b
    }
}

pub fn verify_morita(a: &FDAlgebra, b: &FDAlgebra, e: &Bimodule, seed: u64) -> Result<MoritaReport> {
    let mut blocks_a = a.wedderburn_blocks(derive_seed(seed, 0))?;
    let mut blocks_b = b.wedderburn_blocks(derive_seed(seed, 1))?;
    blocks_a.sort_unstable();
    blocks_b.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
    let left_image_rank = span_rank(&e.left, RANK_TOL)?;
    let right_image_rank = span_rank(&e.right, RANK_TOL)?;
    let right_commutant_dim = commutant_dim(&e.right, &mut rng, RANK_TOL)?;
    let left_commutant_dim = commutant_dim(&e.left, &mut rng, RANK_TOL)?;
    let mut report = MoritaReport {
        k0_rank_a: blocks_a.len(),
        k0_rank_b: blocks_b.len(),
        blocks_a,
        blocks_b,
        center_a: a.center_dim()?,
        center_b: b.center_dim()?,
        dim_a: a.dim(),
        dim_b: b.dim(),
        bimodule_dim: e.dim,
        left_image_rank,
        right_commutant_dim,
        right_image_rank,
        left_commutant_dim,
        module_residual: e.left_residual.max(e.right_residual).max(e.commutation_residual),
        verdict: false,
    };
    report.verdict = report.k0_rank_a == report.k0_rank_b && report.center_a == report.center_b && report.double_commutant();
    Ok(report)
}

/// Full Morita check for a group extension.
pub fn morita_check(ext: &TwistedExtension, dual: &DualGroupoid, seed: u64, tol: f64) -> Result<MoritaReport> {
    let (a, b, e) = build_bimodule(ext, dual, tol)?;
    verify_morita(&a, &b, &e, seed)
}

/// Full Morita check for a groupoid extension.
pub fn groupoid_morita_check(spec: &GroupoidExtensionSpec, dual: &DualSpace, seed: u64, tol: f64) -> Result<MoritaReport> {
    let ctx = Context::new(spec, dual)?;
    let (a, b, e) = build_groupoid_bimodule(&ctx, tol)?;
    verify_morita(&a, &b, &e, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    pub total_blocks: usize,
    /// Per orbit: blocks of the orbit's convolution algebra and of C(Q_i, c_i).
    pub orbit_blocks: Vec<(usize, usize)>,
    pub verdict: bool,
}

/// Compares the dual algebra with the sum over orbits of the isotropy algebras.
pub fn quotient_reduction_check(spec: &GroupoidExtensionSpec, dual: &DualSpace, seed: u64, tol: f64) -> Result<QuotientReport> {
    let total_blocks = build_dual_algebra(dual)?.wedderburn_blocks(seed)?.len();
    let gpd = &dual.transformation.groupoid;
    let mut orbit_blocks = Vec::new();
    for (i, orbit) in orbit_decompose(spec, dual, tol)?.iter().enumerate() {
        let (sub, arrows) = gpd.full_subgroupoid(&orbit.points)?;
        let whole = build_convolution_algebra(&sub, &dual.c.restrict(&arrows))?
            .wedderburn_blocks(derive_seed(seed, 2 * i as u64 + 1))?
            .len();
        let iso = build_twisted_group_algebra(&orbit.group, &orbit.cocycle)?
            .wedderburn_blocks(derive_seed(seed, 2 * i as u64 + 2))?
            .len();
        orbit_blocks.push((whole, iso));
    }
    let sum: usize = orbit_blocks.iter().map(|&(_, b)| b).sum();
    let verdict = sum == total_blocks && orbit_blocks.iter().all(|&(a, b)| a == b);
    Ok(QuotientReport { total_blocks, orbit_blocks, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{build_dual, build_dual_space};
    use crate::fixtures;

    #[test]
    fn s3_morita() {
        let ext = fixtures::s3();
        let dual = build_dual(&ext, 0, 1e-8).unwrap();
        let r = morita_check(&ext, &dual, 0, 1e-8).unwrap();
        assert_eq!(r.blocks_a, vec![1, 1, 2]);
        assert_eq!(r.k0_rank_b, 3);
        assert_eq!(r.bimodule_dim, 6);
        assert!(r.verdict, "{r:?}");
        let spec = GroupoidExtensionSpec::from_group_extension(&ext);
        let q = quotient_reduction_check(&spec, &dual.space, 0, 1e-8).unwrap();
        assert_eq!(q.orbit_blocks, vec![(1, 1), (2, 2)]);
        assert!(q.verdict);
    }

    #[test]
    fn klein_swap_morita() {
        let ext = fixtures::klein_swap();
        let dual = build_dual(&ext, 0, 1e-8).unwrap();
        assert!(morita_check(&ext, &dual, 0, 1e-8).unwrap().verdict);
    }

    #[test]
    fn pair_groupoid_morita() {
        let spec = fixtures::pair_groupoid_z2(3).unwrap();
        let dual = build_dual_space(&spec, 0, 1e-8).unwrap();
        let r = groupoid_morita_check(&spec, &dual, 0, 1e-8).unwrap();
        assert!(r.verdict, "{r:?}");
        assert!(quotient_reduction_check(&spec, &dual, 0, 1e-8).unwrap().verdict);
    }
}
