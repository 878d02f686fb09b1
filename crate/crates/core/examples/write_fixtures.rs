//! Regenerates the JSON fixtures under crates/core/fixtures.

use std::path::Path;

use gerbe_dual::fixtures::{self, Fixture};
use gerbe_dual::io::{to_json, GroupInstance, GroupoidInstance, InstanceFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, f) in fixtures::all()? {
        let doc = match &f {
            Fixture::Group(ext) => InstanceFile::Group(GroupInstance::from_extension(ext, Some(name))),
            Fixture::Groupoid(spec) => InstanceFile::Groupoid(GroupoidInstance::from_spec(spec, Some(name))),
        };
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, to_json(&doc) + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
