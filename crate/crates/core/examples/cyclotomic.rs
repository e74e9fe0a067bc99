//! Exact arithmetic in cyclotomic fields.

use dlchar::cyclo::Cyclotomic;

fn main() -> dlchar::Result<()> {
    let z3 = Cyclotomic::root_of_unity(3, 1);
    let sum = Cyclotomic::one().add(&z3).add(&z3.pow(2));
    println!("1 + ζ3 + ζ3² = {sum}");

    // Gauss sum for F_5: g² = 5
    let z5 = |j| Cyclotomic::root_of_unity(5, j);
    let g = z5(1).sub(&z5(2)).sub(&z5(3)).add(&z5(4));
    println!("g = {g}, g² = {}", g.mul(&g));

    let z12 = Cyclotomic::root_of_unity(12, 1);
    let x = z12.add(&Cyclotomic::from_fraction(1, 2));
    let inv = x.inv()?;
    println!("(ζ12 + 1/2)⁻¹ = {inv}");
    println!("check: {}", x.mul(&inv));
    println!("Galois image under ζ ↦ ζ^5: {}", z12.galois(5));
    let (re, im) = z12.to_complex();
    println!("ζ12 ≈ {re:.6} + {im:.6}i, conductor {}", z12.conductor());
    Ok(())
}
