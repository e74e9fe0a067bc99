//! Runs named verification suites and prints a summary line for each.
//! Pass suite names as arguments; with none, runs the quick ones.

use dlchar::dl::verify::run_named;

fn main() -> dlchar::Result<()> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = ["indep-rational", "orthogonality", "howlett-lehrer", "double-trace", "springer-convolution-horocycle"]
            .map(String::from)
            .to_vec();
    }
    for name in names {
        let rep = run_named(&name)?;
        println!(
            "{:<32} {} ({} cases, {:.1}s)",
            rep.suite,
            if rep.passed() { "pass" } else { "FAIL" },
            rep.cases.len(),
            rep.seconds.unwrap_or(0.0)
        );
    }
    Ok(())
}
