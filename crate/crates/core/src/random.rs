//! Seeded random instances: groups from a small library presented over a
//! normal subgroup, cocycles pulled back from bicharacters, and transports
//! along pair groupoids.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{bicharacter_cocycle, normalize_cocycle, Cocycle2};
use crate::error::Result;
use crate::extension::{from_normal_subgroup, TwistedExtension};
use crate::gpd_extension::{from_central_extension, GroupoidExtensionSpec};
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::scalar::{C64, ONE};

/// Named groups used to draw random instances.
pub fn group_library() -> Vec<(&'static str, FiniteGroup)> {
    let c = FiniteGroup::cyclic;
    vec![
        ("Z2", c(2)),
        ("Z3", c(3)),
        ("Z4", c(4)),
        ("Z2xZ2", c(2).direct_product(&c(2))),
        ("Z6", c(6)),
        ("S3", FiniteGroup::symmetric3()),
        ("Z2xZ4", c(2).direct_product(&c(4))),
        ("Z2^3", c(2).direct_product(&c(2)).direct_product(&c(2))),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion8()),
        ("Z3xZ3", c(3).direct_product(&c(3))),
        ("D5", FiniteGroup::dihedral(5)),
        ("A4", FiniteGroup::alternating4()),
        ("D6", FiniteGroup::dihedral(6)),
        ("Z2xD4", c(2).direct_product(&FiniteGroup::dihedral(4))),
        ("S4", FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]])),
    ]
}

/// Greedy generating set.
pub fn generators(h: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = h.generated_subgroup(&gens);
    for x in h.elements() {
        if span.len() == h.order() {
            break;
        }
        if !span.contains(&x) {
            gens.push(x);
            span = h.generated_subgroup(&gens);
        }
    }
    gens
}

/// All homomorphisms into Z_m x Z_n (elements a*n + b), by brute force over generator images.
pub fn homomorphisms_to_abelian(h: &FiniteGroup, m: usize, n: usize) -> Vec<Vec<usize>> {
    let target = FiniteGroup::cyclic(m).direct_product(&FiniteGroup::cyclic(n));
    let gens = generators(h);
    let k = target.order();
    let mut out = Vec::new();
    let total = k.pow(gens.len() as u32);
    for code in 0..total {
        let images: Vec<usize> = (0..gens.len()).map(|i| (code / k.pow(i as u32)) % k).collect();
        let mut map = vec![usize::MAX; h.order()];
        map[h.identity()] = target.identity();
        let mut frontier = vec![h.identity()];
        while let Some(x) = frontier.pop() {
            for (g, &im) in gens.iter().zip(&images) {
                let y = h.mul(x, *g);
                if map[y] == usize::MAX {
                    map[y] = target.mul(map[x], im);
                    frontier.push(y);
                }
            }
        }
        let ok = h.elements().all(|a| h.elements().all(|b| map[h.mul(a, b)] == target.mul(map[a], map[b])));
        if ok {
            out.push(map);
        }
    }
    out
}

fn random_phase<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A normalized cocycle on h: a bicharacter pulled back along a random
/// homomorphism into a small abelian group, times a random coboundary.
pub fn random_cocycle<R: Rng>(h: &FiniteGroup, rng: &mut R) -> Cocycle2 {
    let targets = [(2usize, 2usize), (2, 4), (4, 4), (3, 3), (2, 6)];
    let (m, n) = targets[rng.gen_range(0..targets.len())];
    let homs = homomorphisms_to_abelian(h, m, n);
    let map = homs.choose(rng).expect("the trivial homomorphism exists").clone();
    let k = rng.gen_range(0..6) as i64;
    let base = bicharacter_cocycle(m, n, k).pullback(&map);
    let f: Vec<C64> = h.elements().map(|x| if x == h.identity() { ONE } else { random_phase(rng) }).collect();
    normalize_cocycle(h, &base.times_coboundary(h, &f)).0
}

/// Draws a random valid twisted extension with |G| <= max_g and |Q| <= max_q.
pub fn random_group_instance(seed: u64, max_g: usize, max_q: usize) -> TwistedExtension {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let library = group_library();
    loop {
        let (_, h) = &library[rng.gen_range(0..library.len())];
        let normals: Vec<Vec<usize>> = h
            .normal_subgroups()
            .into_iter()
            .filter(|n| n.len() <= max_g && h.order() / n.len() <= max_q)
            .collect();
        let Some(n) = normals.choose(&mut rng) else { continue };
        let Some((spec, map)) = from_normal_subgroup(h, n) else { continue };
        let t = random_cocycle(h, &mut rng).pullback(&map);
        if let Ok(ext) = TwistedExtension::new(spec, t, 1e-9) {
            return ext;
        }
    }
}

/// Transports a group instance along the pair groupoid on `n_obj` objects: the
/// extension groupoid is Pair(n) x H with cocycle t * dF for a random gauge F,
/// and the section is alpha(i,j,q) = phase * k_i s(q) k_j^-1 with random k_i in G.
pub fn pair_transport<R: Rng>(ext: &TwistedExtension, n_obj: usize, rng: &mut R) -> Result<GroupoidExtensionSpec> {
    let (h, spec) = (&ext.h, &ext.spec);
    let nh = h.order();
    let pair = FiniteGroupoid::pair(n_obj);
    let gamma = pair.times_group(h);
    let base = pair.times_group(&spec.q);
    let f: Vec<C64> = (0..gamma.n_arrows())
        .map(|a| if gamma.is_unit(a) { ONE } else { random_phase(rng) })
        .collect();
    let theta = Cocycle2::from_fn(gamma.n_arrows(), |a, b| match gamma.compose(a, b) {
        Some(ab) => ext.t.get(a % nh, b % nh) * f[a] * f[b] / f[ab],
        None => ONE,
    });
    let arrow = |i: usize, j: usize, x: usize| (i * n_obj + j) * nh + x;
    let fiber: Vec<Vec<usize>> = (0..n_obj).map(|x| spec.g.elements().map(|g| arrow(x, x, spec.embed(g))).collect()).collect();
    let k: Vec<usize> = (0..n_obj).map(|_| spec.embed(rng.gen_range(0..spec.g.order()))).collect();
    let nq = spec.q.order();
    let alpha: Vec<(C64, usize)> = (0..base.n_arrows())
        .map(|a| {
            let (pair_arrow, q) = (a / nq, a % nq);
            let (i, j) = (pair_arrow / n_obj, pair_arrow % n_obj);
            if base.is_unit(a) {
                return (ONE, arrow(i, i, h.identity()));
            }
            let x = h.mul(h.mul(k[i], spec.section(q)), h.inv(k[j]));
            (random_phase(rng), arrow(i, j, x))
        })
        .collect();
    from_central_extension(&base, &spec.g, &gamma, &theta, &fiber, &alpha)
}

/// Random groupoid instance over Pair(n) x Q with n in {1, 2}.
pub fn random_groupoid_instance(seed: u64, max_g: usize, max_q: usize) -> Result<GroupoidExtensionSpec> {
    let ext = random_group_instance(seed, max_g, max_q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(1..=2);
    pair_transport(&ext, n, &mut rng)
}
