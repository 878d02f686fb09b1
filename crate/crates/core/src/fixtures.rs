//! Named instances shipped as fixtures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{bicharacter_cocycle, cocycle_from_projective_rep, normalize_cocycle, Cocycle2};
use crate::error::Result;
use crate::extension::{build_h, ExtensionSpec, TwistedExtension};
use crate::gpd_extension::GroupoidExtensionSpec;
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::matrix::CMatrix;
use crate::random::{pair_transport, random_cocycle};
use crate::scalar::{snap_to_turns, turns, C64};

const TOL: f64 = 1e-9;

fn klein() -> FiniteGroup {
    FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))
}

/// Replaces values that are close to roots of unity of small order by exact ones.
pub fn snap(t: &Cocycle2) -> Cocycle2 {
    Cocycle2::from_fn(t.size(), |a, b| {
        let z = t.get(a, b);
        snap_to_turns(z, 24, 1e-9).map_or(z, |(p, q)| turns(p, q))
    })
}

/// Pauli matrices indexed like Z2 x Z2: (a, b) -> Z^a X^b.
fn pauli(a: usize, b: usize) -> CMatrix {
    let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let z = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
    let mut m = CMatrix::identity(2);
    if a == 1 {
        m = &m * &z;
    }
    if b == 1 {
        m = &m * &x;
    }
    m
}

/// The normalized cocycle of the Pauli projective representation of Z2 x Z2.
pub fn klein_pauli_cocycle() -> Cocycle2 {
    let g = klein();
    let p: Vec<CMatrix> = g.elements().map(|i| pauli(i / 2, i % 2)).collect();
    let t = cocycle_from_projective_rep(&g, &p).expect("Pauli matrices are projective");
    snap(&normalize_cocycle(&g, &t).0)
}

/// G = Z3, Q = Z2 acting by inversion, untwisted (H = S3).
pub fn s3() -> TwistedExtension {
    let spec = ExtensionSpec {
        g: FiniteGroup::cyclic(3),
        q: FiniteGroup::cyclic(2),
        rho: vec![vec![0, 1, 2], vec![0, 2, 1]],
        tau: vec![0; 4],
    };
    TwistedExtension::new(spec, Cocycle2::trivial(6), TOL).expect("valid fixture")
}

/// G = Z2 x Z2 with the sign bicharacter, Q trivial.
pub fn klein_twisted() -> TwistedExtension {
    let spec = ExtensionSpec::direct(klein(), FiniteGroup::trivial());
    TwistedExtension::new(spec, bicharacter_cocycle(2, 2, 1), TOL).expect("valid fixture")
}

/// G = Z2 x Z2, Q = Z2 swapping the factors (H = D4); t from P(g,q) = Pauli(g) Hadamard^q.
pub fn klein_swap() -> TwistedExtension {
    let g = klein();
    let spec = ExtensionSpec {
        g: g.clone(),
        q: FiniteGroup::cyclic(2),
        rho: vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]],
        tau: vec![0; 4],
    };
    let h = build_h(&spec).expect("valid extension");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let had = CMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]);
    let p: Vec<CMatrix> = h
        .elements()
        .map(|x| {
            let (gi, q) = spec.split(x);
            let m = pauli(gi / 2, gi % 2);
            if q == 1 {
                &m * &had
            } else {
                m
            }
        })
        .collect();
    let t = cocycle_from_projective_rep(&h, &p).expect("projective");
    let t = snap(&normalize_cocycle(&h, &t).0);
    TwistedExtension::new(spec, t, TOL).expect("valid fixture")
}

/// G trivial, Q = Z2 x Z2 with the Pauli cocycle.
pub fn g_trivial_klein() -> TwistedExtension {
    let spec = ExtensionSpec::direct(FiniteGroup::trivial(), klein());
    TwistedExtension::new(spec, klein_pauli_cocycle(), TOL).expect("valid fixture")
}

/// G trivial, Q = S3 with an exact coboundary-valued cocycle of order 3 phases.
pub fn g_trivial_s3() -> TwistedExtension {
    let q = FiniteGroup::symmetric3();
    let f: Vec<C64> = q.elements().map(|x| if x == q.identity() { turns(0, 1) } else { turns(x as i64, 3) }).collect();
    let t = snap(&normalize_cocycle(&q, &Cocycle2::trivial(6).times_coboundary(&q, &f)).0);
    let spec = ExtensionSpec::direct(FiniteGroup::trivial(), q);
    TwistedExtension::new(spec, t, TOL).expect("valid fixture")
}

/// G = Z3, Q = Z2 x Z2 with the first factor inverting (H = D6), untwisted.
pub fn d6_untwisted() -> TwistedExtension {
    let spec = d6_spec();
    let n = spec.h_order();
    TwistedExtension::new(spec, Cocycle2::trivial(n), TOL).expect("valid fixture")
}

/// As [`d6_untwisted`] with t the pullback of the Pauli cocycle t0 along H -> Q.
pub fn d6_pullback() -> TwistedExtension {
    let spec = d6_spec();
    let map: Vec<usize> = (0..spec.h_order()).map(|x| spec.split(x).1).collect();
    let t = klein_pauli_cocycle().pullback(&map);
    TwistedExtension::new(spec, t, TOL).expect("valid fixture")
}

fn d6_spec() -> ExtensionSpec {
    ExtensionSpec {
        g: FiniteGroup::cyclic(3),
        q: klein(),
        rho: vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 2, 1], vec![0, 2, 1]],
        tau: vec![0; 16],
    }
}

/// Z2 x Z2 presented over its first factor with a seeded twist.
pub fn klein_over_z2_seeded(seed: u64) -> TwistedExtension {
    let spec = ExtensionSpec::direct(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
    let h = build_h(&spec).expect("valid extension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = random_cocycle(&h, &mut rng);
    // keep the nontrivial class so the dual cocycle is not a coboundary
    if (t.get(1, 2) / t.get(2, 1) - C64::new(-1.0, 0.0)).norm() > 1e-9 {
        t = t.mul(&bicharacter_cocycle(2, 2, 1));
        t = normalize_cocycle(&h, &t).0;
    }
    TwistedExtension::new(spec, t, TOL).expect("valid fixture")
}

/// Pair groupoid on two objects times Z2, fiber Z2, seeded twist and gauge.
pub fn pair_groupoid_z2(seed: u64) -> Result<GroupoidExtensionSpec> {
    let ext = klein_over_z2_seeded(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    pair_transport(&ext, 2, &mut rng)
}

/// S3 as a one-object groupoid instance.
pub fn one_object_s3() -> GroupoidExtensionSpec {
    GroupoidExtensionSpec::from_group_extension(&s3())
}

/// G-trivial groupoid: Pair(2) x (Z2 x Z2) with the scalar twist pulled back from Q.
pub fn g_trivial_pair() -> GroupoidExtensionSpec {
    let base = FiniteGroupoid::pair(2).times_group(&klein());
    twist_by(&untwisted_over(base, FiniteGroup::trivial()), &pullback_to_pair(&klein_pauli_cocycle(), 2))
}

/// Pair(2) transport of the untwisted D6 presentation, twisted by t0 pulled back from Q.
pub fn pair_d6_pullback(seed: u64) -> Result<(GroupoidExtensionSpec, GroupoidExtensionSpec, Cocycle2)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plain = pair_transport(&d6_untwisted(), 2, &mut rng)?;
    let t0 = pullback_to_pair(&klein_pauli_cocycle(), 2);
    Ok((plain.clone(), twist_by(&plain, &t0), t0))
}

/// Pulls a cocycle on a group K back to Pair(n) x K.
pub fn pullback_to_pair(t0: &Cocycle2, n: usize) -> Cocycle2 {
    let k = t0.size();
    let map: Vec<usize> = (0..n * n * k).map(|a| a % k).collect();
    t0.pullback(&map)
}

/// Trivial extension data over `base` with fiber g and trivial cocycles.
pub fn untwisted_over(base: FiniteGroupoid, g: FiniteGroup) -> GroupoidExtensionSpec {
    let n = base.n_arrows();
    let ng = g.order();
    GroupoidExtensionSpec {
        t_obj: vec![Cocycle2::trivial(ng); base.n_obj()],
        ad_map: vec![g.elements().collect(); n],
        ad_nu: vec![vec![C64::new(1.0, 0.0); ng]; n],
        taubar: vec![(C64::new(1.0, 0.0), g.identity()); n * n],
        base,
        g,
    }
}

/// Multiplies the scalar part of taubar by a cocycle t0 on the base.
pub fn twist_by(spec: &GroupoidExtensionSpec, t0: &Cocycle2) -> GroupoidExtensionSpec {
    let n = spec.n_arrows();
    let mut out = spec.clone();
    for q1 in 0..n {
        for q2 in 0..n {
            if spec.base.compose(q1, q2).is_some() {
                let (z, g) = spec.taubar(q1, q2);
                out.taubar[q1 * n + q2] = (z * t0.get(q1, q2), g);
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub enum Fixture {
    Group(TwistedExtension),
    Groupoid(GroupoidExtensionSpec),
}

impl Fixture {
    /// The instance as groupoid data (one object for groups).
    pub fn spec(&self) -> GroupoidExtensionSpec {
        match self {
            Fixture::Group(ext) => GroupoidExtensionSpec::from_group_extension(ext),
            Fixture::Groupoid(spec) => spec.clone(),
        }
    }
}

/// Every shipped fixture, by file stem.
pub fn all() -> Result<Vec<(&'static str, Fixture)>> {
    let (plain, twisted, _) = pair_d6_pullback(5)?;
    Ok(vec![
        ("s3", Fixture::Group(s3())),
        ("klein_twisted", Fixture::Group(klein_twisted())),
        ("klein_swap", Fixture::Group(klein_swap())),
        ("klein_over_z2", Fixture::Group(klein_over_z2_seeded(7))),
        ("g_trivial_klein", Fixture::Group(g_trivial_klein())),
        ("g_trivial_s3", Fixture::Group(g_trivial_s3())),
        ("d6_untwisted", Fixture::Group(d6_untwisted())),
        ("d6_pullback", Fixture::Group(d6_pullback())),
        ("pair_z2", Fixture::Groupoid(pair_groupoid_z2(3)?)),
        ("one_object_s3", Fixture::Groupoid(one_object_s3())),
        ("g_trivial_pair", Fixture::Groupoid(g_trivial_pair())),
        ("pair_d6_untwisted", Fixture::Groupoid(plain)),
        ("pair_d6_pullback", Fixture::Groupoid(twisted)),
    ])
}
