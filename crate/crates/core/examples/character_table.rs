//! Character table of GL_2(F_3) and its invariants.

use dlchar::chartab::character_table;
use dlchar::groups::{build_group, GroupSpec};

fn main() -> dlchar::Result<()> {
    let g = build_group(&GroupSpec::gl(2, 3)?)?;
    let t = character_table(&g)?;
    println!("{}: degrees {:?}", g.label(), t.degrees);
    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size()).collect();
    println!("class sizes {sizes:?}");
    for (i, chi) in t.irreducibles.iter().enumerate() {
        let vals: Vec<String> = chi.values().iter().map(|v| v.to_string()).collect();
        println!("χ{i}: {}", vals.join(", "));
    }
    println!("{:?}", t.check_invariants()?);
    Ok(())
}
