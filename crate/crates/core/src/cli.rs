//! The `dlchar` command line.

use std::ffi::OsString;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::chartab::character_table;
use crate::classfun::{hc_induce, intertwiner_matrix};
use crate::cyclo::Cyclotomic;
use crate::dl::verify::{run_suite, SuiteArgs, COMPACT, SUITES};
use crate::dl::{dl_character_of_torus, dl_norm, dl_variety_for_torus};
use crate::error::{Error, Result};
use crate::groups::{
    cached_group, maximal_torus, opposite_parabolic, standard_parabolic, BorelChoice, Family, GroupSpec, GroupTable,
};
use crate::weyl::parse_type;

#[derive(Parser, Debug)]
#[command(name = "dlchar", version, about = "Exact character computations for small finite reductive groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON document to this file.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// GL or SL.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
}

impl GroupArgs {
    fn build(&self) -> Result<Arc<GroupTable>> {
        cached_group(&GroupSpec::new(self.family, self.n, self.q)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a group and list its conjugacy classes.
    Group(GroupArgs),
    /// Character table.
    Table {
        #[command(flatten)]
        group: GroupArgs,
        /// Print CSV instead of a summary.
        #[arg(long)]
        csv: bool,
    },
    /// Harish-Chandra induction of every irreducible of a standard Levi.
    HcInd {
        #[command(flatten)]
        group: GroupArgs,
        /// Block sizes of the Levi, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        levi: Vec<usize>,
        /// Use the opposite parabolic.
        #[arg(long)]
        lower: bool,
    },
    /// Deligne-Lusztig characters of a maximal torus.
    DlChar {
        #[command(flatten)]
        group: GroupArgs,
        /// Torus type as a partition of n, e.g. `2` or `1,1`.
        #[arg(long, value_delimiter = ',')]
        torus: Vec<usize>,
        /// Index of a single torus character; all of them if absent.
        #[arg(long)]
        theta: Option<usize>,
        /// Borel containing the torus: upper or lower.
        #[arg(long, default_value = "upper", value_parser = parse_borel)]
        borel: BorelChoice,
    },
    /// The intertwiner between a standard parabolic and its opposite.
    Intertwiner {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',')]
        levi: Vec<usize>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        /// Root system type for rel-bruhat, e.g. `A3`.
        #[arg(long = "type")]
        cartan: Option<String>,
        #[arg(long, value_delimiter = ',')]
        levi: Option<Vec<usize>>,
        /// Record wall time in the report.
        #[arg(long)]
        timing: bool,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_borel(s: &str) -> std::result::Result<BorelChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Output of one command: a summary for the terminal, the JSON document and
/// the exit status.
struct Outcome {
    summary: String,
    doc: Value,
    code: i32,
}

fn ok(summary: String, doc: Value) -> Result<Outcome> {
    Ok(Outcome { summary, doc, code: 0 })
}

/// `χ0 - 2·χ3` style text for a combination of irreducibles.
fn combination(parts: &[(usize, Cyclotomic)]) -> String {
    let mut out = String::new();
    for (j, m) in parts {
        let text = m.to_string();
        let (sign, mag) = match text.strip_prefix('-') {
            Some(rest) if m.as_rational().is_some() => ("-", rest.to_string()),
            _ => ("+", text),
        };
        if out.is_empty() {
            out.push_str(if sign == "-" { "-" } else { "" });
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag != "1" {
            let mag = if m.as_rational().is_some() { mag } else { format!("({mag})") };
            out.push_str(&format!("{mag}·"));
        }
        out.push_str(&format!("χ{j}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn group_cmd(g: &GroupArgs) -> Result<Outcome> {
    let g = g.build()?;
    let mut summary = format!("{}: |G| = {}, {} classes\n", g.label(), g.order(), g.num_classes());
    for (i, c) in g.classes().iter().enumerate() {
        summary.push_str(&format!(
            "  class {i}: size {} order {}{}\n",
            c.size(),
            c.order,
            if c.is_rss { " rss" } else { "" }
        ));
    }
    ok(summary, g.to_json())
}

fn table_cmd(g: &GroupArgs, csv: bool) -> Result<Outcome> {
    let g = g.build()?;
    let t = character_table(&g)?;
    let check = t.check_invariants()?;
    let summary = if csv {
        t.to_csv()
    } else {
        format!("{}: {} irreducibles, degrees {:?}, invariants {check:?}\n", g.label(), t.degrees.len(), t.degrees)
    };
    let mut doc = t.to_json();
    doc["invariants_hold"] = json!(check.passed());
    Ok(Outcome { summary, doc, code: if check.passed() { 0 } else { 1 } })
}

fn hc_ind_cmd(g: &GroupArgs, levi: &[usize], lower: bool) -> Result<Outcome> {
    let grp = g.build()?;
    let mut p = standard_parabolic(&grp, levi)?;
    if lower {
        p = opposite_parabolic(&p)?;
    }
    let levi_table = character_table(&p.levi)?;
    let table = character_table(&grp)?;
    let mut summary = format!("{} {}\n", grp.label(), p.label());
    let mut rows = Vec::new();
    for (i, rho) in levi_table.irreducibles.iter().enumerate() {
        let ind = hc_induce(&p, rho)?;
        let parts = table.decompose(&ind)?;
        summary.push_str(&format!("  ρ{i} ↦ {}\n", combination(&parts)));
        rows.push(json!({
            "levi_character": i,
            "values": ind.to_json(),
            "decomposition": parts.iter().map(|(j, m)| json!([j, m.to_json()])).collect::<Vec<_>>(),
        }));
    }
    ok(summary, json!({"group": grp.label(), "parabolic": p.label(), "induced": rows}))
}

fn dl_char_cmd(g: &GroupArgs, torus: &[usize], theta: Option<usize>, borel: BorelChoice) -> Result<Outcome> {
    let grp = g.build()?;
    let t = Arc::new(maximal_torus(&grp, torus)?);
    let y = dl_variety_for_torus(t.clone(), borel)?;
    let table = character_table(&grp)?;
    let thetas: Vec<usize> = match theta {
        Some(k) if k >= t.num_characters() => {
            return Err(Error::InvalidInput(format!("torus has {} characters", t.num_characters())))
        }
        Some(k) => vec![k],
        None => (0..t.num_characters()).collect(),
    };
    let mut summary = format!("{} torus {} via {}\n", grp.label(), t.label(), y.label());
    let mut rows = Vec::new();
    for k in thetas {
        let ch = dl_character_of_torus(&y, &t, k)?;
        let norm = dl_norm(&ch)?;
        let parts = table.decompose(&ch)?;
        summary.push_str(&format!("  θ{k}: norm {norm}, {}\n", combination(&parts)));
        rows.push(json!({
            "theta": k,
            "values": ch.to_json(),
            "norm": norm.to_json(),
            "decomposition": parts.iter().map(|(j, m)| json!([j, m.to_json()])).collect::<Vec<_>>(),
        }));
    }
    ok(
        summary,
        json!({"group": grp.label(), "torus": t.label(), "variety": y.label(), "convention": COMPACT, "characters": rows}),
    )
}

fn intertwiner_cmd(g: &GroupArgs, levi: &[usize]) -> Result<Outcome> {
    let grp = g.build()?;
    let p = standard_parabolic(&grp, levi)?;
    let opp = opposite_parabolic(&p)?;
    let m = intertwiner_matrix(&p, &opp)?;
    let det = m.matrix.determinant()?;
    let summary = format!(
        "{} {} → {}: {}×{} matrix, determinant {det}\n",
        grp.label(),
        p.label(),
        opp.label(),
        m.matrix.rows(),
        m.matrix.cols()
    );
    ok(
        summary,
        json!({
            "group": grp.label(),
            "source": p.label(),
            "target": opp.label(),
            "intersection_order": m.intersection_order,
            "determinant": det.to_string(),
            "matrix": m.matrix.to_json(),
        }),
    )
}

fn verify_cmd(suite: &str, args: SuiteArgs, timing: bool) -> Result<Outcome> {
    if !SUITES.contains(&suite) {
        return Err(Error::InvalidInput(format!("unknown suite {suite}; known: {}", SUITES.join(", "))));
    }
    if let Some(q) = args.q {
        GroupSpec::new(args.family.unwrap_or(Family::GL), args.n.unwrap_or(2), q)?;
    }
    let rep = run_suite(suite, &args)?;
    let mut summary = format!(
        "{}: {} cases, {} failed\n",
        rep.suite,
        rep.cases.len(),
        rep.failures().len()
    );
    for c in rep.failures() {
        summary.push_str(&format!("  FAIL {}: {}\n", c.id, c.payload));
    }
    Ok(Outcome { summary, doc: rep.to_json(timing), code: rep.exit_code() })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Group(g) => group_cmd(g),
        Command::Table { group, csv } => table_cmd(group, *csv),
        Command::HcInd { group, levi, lower } => hc_ind_cmd(group, levi, *lower),
        Command::DlChar { group, torus, theta, borel } => dl_char_cmd(group, torus, *theta, *borel),
        Command::Intertwiner { group, levi } => intertwiner_cmd(group, levi),
        Command::Verify { suite, family, n, q, cartan, levi, timing } => {
            let args = SuiteArgs {
                family: *family,
                n: *n,
                q: *q,
                cartan: cartan.as_deref().map(parse_type).transpose()?,
                composition: levi.clone(),
            };
            verify_cmd(suite, args, *timing)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            print!("{}", out.summary);
            if let Some(path) = &cli.out {
                let text = serde_json::to_string_pretty(&out.doc).expect("JSON values serialize");
                if let Err(e) = std::fs::write(path, text + "\n") {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
