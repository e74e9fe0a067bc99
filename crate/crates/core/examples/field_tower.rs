//! A tower F_4 ⊂ F_16 ⊂ F_256 with compatible embeddings and Frobenius.

use dlchar::fields::make_tower;

fn main() -> dlchar::Result<()> {
    let tower = make_tower(2, 2, 4)?;
    println!("q = {}, levels up to {}", tower.q(), tower.max_level());
    for level in [1, 2, 4] {
        let f = tower.level(level)?;
        println!("F_{}: modulus {:?}, generator of order {}", f.size(), f.modulus(), f.order(&f.generator()));
    }
    // the generator of F_16 embedded into F_256, then Frobenius twice
    let g2 = tower.level(2)?.generator();
    let up = tower.embed(2, 4, &g2)?;
    let back = tower.restrict(2, 4, &up)?.expect("lies in F_16");
    assert_eq!(back, g2);
    let f2 = tower.frobenius_power(4, &up, 2)?;
    let f16 = tower.level(4)?;
    println!("F^2 fixes the image of F_16: {}", f2 == up);
    println!("F^2 moves the generator of F_256: {}", tower.frobenius_power(4, &f16.generator(), 2)? != f16.generator());
    let tr = tower.trace_to_base(4, &f16.generator())?;
    println!("trace of the generator of F_256 down to F_4: {:?}", &tr.coeffs()[..2]);
    Ok(())
}
