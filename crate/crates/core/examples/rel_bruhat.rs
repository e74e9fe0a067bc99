//! Relative positions of parabolics sharing a Levi in type A3, and a
//! reduction chain for one triple.

use dlchar::weyl::{parse_type, verify_rel_bruhat_with_chains, LeviContext, RootSystem};

fn main() -> dlchar::Result<()> {
    let (t, r) = parse_type("A3")?;
    let rs = RootSystem::new(t, r)?;
    println!("{}: {} roots, |W| = {}", rs.label(), rs.num_roots(), rs.weyl_order());
    for levi in rs.standard_levis() {
        let rep = verify_rel_bruhat_with_chains(&rs, levi);
        println!(
            "  Levi with {:>2} roots: {:>2} parabolics, {} triples, longest chain {}, {}",
            rep.levi_roots,
            rep.parabolics,
            rep.triples_checked,
            rep.max_chain_length,
            if rep.passed() { "no counterexamples" } else { "FAILED" }
        );
    }
    let torus = rs.standard_levis().into_iter().next().expect("the torus is a Levi");
    let ctx = LeviContext::new(&rs, torus);
    let (a, b, c) = (0, ctx.len() - 1, 0);
    println!("d(P{a}, P{b}) = {}", ctx.distance(a, b));
    let chain = ctx.reduction_chain(a, b, c)?;
    println!("chain for ({a}, {b}, {c}): {} moves, distances {:?}", chain.effective_length(), chain.distances);
    ctx.validate_chain(&chain).map_err(dlchar::Error::Internal)?;
    Ok(())
}
