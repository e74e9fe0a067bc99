//! Grothendieck-Springer traces on the regular semisimple locus of GL_2(F_3)
//! against Deligne-Lusztig characters, and the Springer convolution identity
//! in both of its forms.

use std::sync::Arc;

use dlchar::classfun::{borel, horocycle_convolution_check, springer_convolution_check, springer_function};
use dlchar::dl::grothspr::grothspr_weil_value;
use dlchar::dl::{dl_character_of_torus, dl_variety_for_torus};
use dlchar::groups::{build_group, maximal_torus, BorelChoice, GroupSpec};

fn main() -> dlchar::Result<()> {
    let g = build_group(&GroupSpec::gl(2, 3)?)?;
    let rss: Vec<usize> = (0..g.num_classes()).filter(|&c| g.classes()[c].is_rss).collect();
    for part in [vec![1, 1], vec![2]] {
        let t = Arc::new(maximal_torus(&g, &part)?);
        let y = dl_variety_for_torus(t.clone(), BorelChoice::Upper)?;
        let mut agree = 0;
        for theta in 0..t.num_characters() {
            let ch = dl_character_of_torus(&y, &t, theta)?;
            for &c in &rss {
                let w = grothspr_weil_value(&g, &t, theta, BorelChoice::Upper, g.classes()[c].rep_index)?;
                agree += usize::from(&w == ch.value(c));
            }
        }
        println!("{}: {agree} of {} rss values agree", t.label(), t.num_characters() * rss.len());
    }

    let s = springer_function(&g)?;
    let vals: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
    println!("Springer function: [{}]", vals.join(", "));
    let b = borel(&g)?;
    for report in [springer_convolution_check(&b)?, horocycle_convolution_check(&b)?] {
        println!(
            "{:?}: constant {:?}, {} of {} basis functions fail",
            report.form,
            report.constant.map(|c| c.to_string()),
            report.failures.len(),
            report.basis_size
        );
    }
    Ok(())
}
