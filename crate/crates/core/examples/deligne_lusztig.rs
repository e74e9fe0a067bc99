//! Deligne-Lusztig characters of the nonsplit torus of SL_2(F_3) from
//! Lefschetz numbers on the twisted variety, with the certificates behind
//! one value.

use std::sync::Arc;

use dlchar::chartab::character_table;
use dlchar::dl::{dl_character_of_torus, dl_norm, dl_variety_for_torus};
use dlchar::groups::{build_group, maximal_torus, BorelChoice, GroupSpec};

fn main() -> dlchar::Result<()> {
    let g = build_group(&GroupSpec::sl(2, 3)?)?;
    let t = Arc::new(maximal_torus(&g, &[2])?);
    let table = character_table(&g)?;
    println!("torus {} of order {}", t.label(), t.order());
    for choice in [BorelChoice::Upper, BorelChoice::Lower] {
        let y = dl_variety_for_torus(t.clone(), choice)?;
        println!("{}", y.label());
        for theta in 0..t.num_characters() {
            let ch = dl_character_of_torus(&y, &t, theta)?;
            let vals: Vec<String> = ch.values().iter().map(|v| v.to_string()).collect();
            println!("  θ{theta}: [{}] norm {} = {:?}", vals.join(", "), dl_norm(&ch)?, table.decompose(&ch)?);
        }
    }
    let y = dl_variety_for_torus(t.clone(), BorelChoice::Upper)?;
    let one = g.identity();
    for &x in &t.points[..2] {
        let m = y.levi().index_of(g.element(x)).expect("torus point");
        let cert = y.lefschetz_number(one, m)?;
        println!("L(1, {:?}) = {} by {}", g.element(x).rows(), cert.value, cert.method.name());
        println!("  counts {:?}", cert.counts);
    }
    Ok(())
}
