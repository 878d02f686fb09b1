#![allow(dead_code)]

use gerbe_dual::extension::TwistedExtension;
use gerbe_dual::fixtures::{self, Fixture};
use gerbe_dual::gpd_extension::GroupoidExtensionSpec;
use gerbe_dual::random::{random_group_instance, random_groupoid_instance};

pub const RANDOM_GROUP_INSTANCES: u64 = 50;
pub const RANDOM_GROUPOID_INSTANCES: u64 = 10;

pub fn group_fixtures() -> Vec<(String, TwistedExtension)> {
    fixtures::all()
        .unwrap()
        .into_iter()
        .filter_map(|(n, f)| match f {
            Fixture::Group(e) => Some((n.to_string(), e)),
            Fixture::Groupoid(_) => None,
        })
        .collect()
}

pub fn groupoid_fixtures() -> Vec<(String, GroupoidExtensionSpec)> {
    fixtures::all()
        .unwrap()
        .into_iter()
        .filter_map(|(n, f)| match f {
            Fixture::Groupoid(s) => Some((n.to_string(), s)),
            Fixture::Group(_) => None,
        })
        .collect()
}

/// Fixtures plus seeded random instances with |G| <= 8, |Q| <= 6.
pub fn group_corpus() -> Vec<(String, TwistedExtension)> {
    let mut v = group_fixtures();
    v.extend((0..RANDOM_GROUP_INSTANCES).map(|s| (format!("random-{s}"), random_group_instance(s, 8, 6))));
    v
}

pub fn groupoid_corpus() -> Vec<(String, GroupoidExtensionSpec)> {
    let mut v = groupoid_fixtures();
    v.extend((0..RANDOM_GROUPOID_INSTANCES).map(|s| (format!("random-groupoid-{s}"), random_groupoid_instance(s, 8, 6).unwrap())));
    v
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}
