//! Harish-Chandra induction from the Levi GL_1 × GL_2 of GL_3(F_2), through
//! the upper and the lower parabolic.

use dlchar::chartab::character_table;
use dlchar::classfun::{hc_induce, hc_restrict, inner_product};
use dlchar::groups::{build_group, opposite_parabolic, standard_parabolic, GroupSpec};

fn main() -> dlchar::Result<()> {
    let g = build_group(&GroupSpec::gl(3, 2)?)?;
    let upper = standard_parabolic(&g, &[1, 2])?;
    let lower = opposite_parabolic(&upper)?;
    let levi_table = character_table(&upper.levi)?;
    let table = character_table(&g)?;
    for (i, rho) in levi_table.irreducibles.iter().enumerate() {
        let a = hc_induce(&upper, rho)?;
        let b = hc_induce(&lower, rho)?;
        println!("ρ{i}: {:?}, same through both parabolics: {}", table.decompose(&a)?, a == b);
    }
    // Frobenius reciprocity against the restriction
    let chi = &table.irreducibles[3];
    let rho = &levi_table.irreducibles[0];
    let lhs = inner_product(&hc_induce(&upper, rho)?, chi)?;
    let rhs = inner_product(rho, &hc_restrict(&upper, chi)?)?;
    println!("<HC(ρ0), χ3> = {lhs}, <ρ0, *HC(χ3)> = {rhs}");
    Ok(())
}
