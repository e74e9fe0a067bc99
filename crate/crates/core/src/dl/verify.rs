//! Verification suites. Every suite reports which character convention it
//! runs in; the identities checked are invariant under the dual transform.

use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use crate::chartab::character_table;
use crate::classfun::{
    borel, hc_induce, horocycle_convolution_check, inner_product, intertwiner_matrix, springer_convolution_check,
    ClassFunction,
};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{
    cached_group, maximal_torus, opposite_parabolic, parabolics_with_levi, standard_parabolic, BorelChoice, Family,
    GroupSpec, GroupTable, TorusData, supported_targets,
};
use crate::report::SuiteReport;
use crate::weyl::{supported_types, CartanType, verify_rel_bruhat_with_chains, RootSystem};

use super::grothspr::grothspr_weil_value;
use super::rational::RationalModel;
use super::{dl_norm, dl_variety, dl_variety_for_torus, torus_character, transfer, DLVariety};

pub const COMPACT: &str = "compact supports";

pub fn group(family: Family, n: usize, q: u64) -> Result<Arc<GroupTable>> {
    cached_group(&GroupSpec::new(family, n, q)?)
}

fn values_json(f: &ClassFunction) -> Value {
    f.to_json()
}

/// Pairwise comparison of `dl_character(ρ)` across varieties sharing a Levi.
/// `rho` may live on any table of the Levi.
pub fn verify_indep(varieties: &[DLVariety], rho: &ClassFunction) -> Result<(bool, Value)> {
    let chars = varieties
        .iter()
        .map(|y| super::dl_character(y, &transfer(rho, y.levi())?))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    let mut all = true;
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            let eq = chars[i] == chars[j];
            all &= eq;
            pairs.push(json!({"i": i, "j": j, "equal": eq}));
        }
    }
    Ok((
        all,
        json!({
            "varieties": varieties.iter().map(|y| y.label()).collect::<Vec<_>>(),
            "characters": chars.iter().map(values_json).collect::<Vec<_>>(),
            "pairs": pairs,
        }),
    ))
}

/// Rational Levi: every block ordering of the composition, every delta-basis
/// `ρ`, and agreement with Harish-Chandra induction.
pub fn indep_rational_suite(groups: &[(Family, usize, u64)], composition: &[usize]) -> SuiteReport {
    let mut rep = SuiteReport::new("indep-rational", COMPACT);
    for &(fam, n, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, n, q)?;
            let ps: Vec<Arc<_>> = parabolics_with_levi(&g, composition)?.into_iter().map(Arc::new).collect();
            let ys: Vec<DLVariety> = ps.iter().map(|p| dl_variety(p.clone())).collect();
            let levi = ys[0].levi().clone();
            let tables = ys.iter().map(|y| y.lefschetz_table(None)).collect::<Result<Vec<_>>>()?;
            for c in 0..levi.num_classes() {
                let rho = ClassFunction::delta(&levi, c);
                let id = format!("{} {:?} delta {c}", g.label(), composition);
                rep.push_result(id.clone(), (|| {
                    let chars = ys
                        .iter()
                        .zip(&tables)
                        .map(|(y, t)| y.character_from_table(t, &transfer(&rho, y.levi())?))
                        .collect::<Result<Vec<_>>>()?;
                    let equal = chars.windows(2).all(|w| w[0] == w[1]);
                    let hc = hc_induce(&ps[0], &rho)?;
                    Ok((
                        equal && chars[0] == hc,
                        json!({
                            "parabolics": ps.iter().map(|p| p.label()).collect::<Vec<_>>(),
                            "equal": equal,
                            "matches_hc_induce": chars[0] == hc,
                            "character": values_json(&chars[0]),
                        }),
                    ))
                })());
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_{n}(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

/// Characters `dl_character(θ)` for every θ of a torus through one Borel.
pub fn torus_characters(t: &Arc<TorusData>, choice: BorelChoice, classes: Option<&[usize]>) -> Result<Vec<ClassFunction>> {
    let y = dl_variety_for_torus(t.clone(), choice)?;
    let table = y.lefschetz_table(classes)?;
    (0..t.num_characters())
        .map(|theta| y.character_from_table(&table, &transfer(&torus_character(t, theta)?, y.levi())?))
        .collect()
}

/// Nonsplit torus of `SL_2(F_q)`: both twisted Borels, every θ.
pub fn indep_twisted_suite(groups: &[(Family, u64)]) -> SuiteReport {
    let mut rep = SuiteReport::new("indep-twisted", COMPACT);
    for &(fam, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, 2, q)?;
            let t = Arc::new(maximal_torus(&g, &[2])?);
            let up = torus_characters(&t, BorelChoice::Upper, None)?;
            let low = torus_characters(&t, BorelChoice::Lower, None)?;
            for theta in 0..t.num_characters() {
                rep.push(
                    format!("{} theta {theta}", g.label()),
                    up[theta] == low[theta],
                    json!({"upper": values_json(&up[theta]), "lower": values_json(&low[theta])}),
                );
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_2(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

/// All (torus, θ) characters of a rank-one group through the upper Borel.
pub struct TorusFamily {
    pub tori: Vec<Arc<TorusData>>,
    /// `(torus index, θ, character)`.
    pub characters: Vec<(usize, usize, ClassFunction)>,
}

pub fn torus_family(g: &Arc<GroupTable>) -> Result<TorusFamily> {
    let mut tori = Vec::new();
    let mut characters = Vec::new();
    for part in [vec![1, 1], vec![2]] {
        let t = Arc::new(maximal_torus(g, &part)?);
        for (theta, ch) in torus_characters(&t, BorelChoice::Upper, None)?.into_iter().enumerate() {
            characters.push((tori.len(), theta, ch));
        }
        tori.push(t);
    }
    Ok(TorusFamily { tori, characters })
}

/// Whether θ₁⁻¹ is W-conjugate to θ₂ (always false across different tori).
fn orthogonality_excluded(fam: &TorusFamily, (t1, th1): (usize, usize), (t2, th2): (usize, usize)) -> bool {
    if t1 != t2 {
        return false;
    }
    let t = &fam.tori[t1];
    let inv = t.inverse_character(th1);
    t.weyl_orbit_characters().iter().any(|o| o.contains(&inv) && o.contains(&th2))
}

pub fn orthogonality_suite(groups: &[(Family, u64)]) -> SuiteReport {
    let mut rep = SuiteReport::new("orthogonality", COMPACT);
    for &(fam, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, 2, q)?;
            let family = torus_family(&g)?;
            let cs = &family.characters;
            for i in 0..cs.len() {
                for j in i..cs.len() {
                    let (t1, th1, ch1) = &cs[i];
                    let (t2, th2, ch2) = &cs[j];
                    let value = inner_product(ch1, ch2)?;
                    let excluded = orthogonality_excluded(&family, (*t1, *th1), (*t2, *th2));
                    rep.push(
                        format!("{} T{} theta {} x T{} theta {}", g.label(), family.tori[*t1].label(), th1, family.tori[*t2].label(), th2),
                        excluded || value.is_zero(),
                        json!({"pairing": value.to_json(), "zero_asserted": !excluded}),
                    );
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_2(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

/// `grothspr_weil_value = dl_character` at every rss class, both Borels,
/// every torus and θ.
pub fn springer_chars_suite(groups: &[(Family, u64)]) -> SuiteReport {
    let mut rep = SuiteReport::new("springer-chars", COMPACT);
    for &(fam, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, 2, q)?;
            let rss: Vec<usize> = (0..g.num_classes()).filter(|&c| g.classes()[c].is_rss).collect();
            for part in [vec![1, 1], vec![2]] {
                let t = Arc::new(maximal_torus(&g, &part)?);
                for choice in [BorelChoice::Upper, BorelChoice::Lower] {
                    let chars = torus_characters(&t, choice, Some(&rss))?;
                    for (theta, ch) in chars.iter().enumerate() {
                        let mut ok = true;
                        let mut rows = Vec::new();
                        for &c in &rss {
                            let x = g.classes()[c].rep_index;
                            let w = grothspr_weil_value(&g, &t, theta, choice, x)?;
                            ok &= &w == ch.value(c);
                            rows.push(json!({"class": c, "grothspr": w.to_json(), "dl": ch.value(c).to_json()}));
                        }
                        rep.push(
                            format!("{} {} {:?} theta {theta}", g.label(), t.label(), choice),
                            ok,
                            json!({ "rss_classes": rows }),
                        );
                    }
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_2(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

/// Norms equal Weyl stabilizer orders; every character is a virtual
/// character of the table; values are class functions on sampled members.
pub fn properties_suite(groups: &[(Family, u64)]) -> SuiteReport {
    let mut rep = SuiteReport::new("properties", COMPACT);
    for &(fam, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, 2, q)?;
            let table = character_table(&g)?;
            let family = torus_family(&g)?;
            for (ti, theta, ch) in &family.characters {
                let t = &family.tori[*ti];
                let id = format!("{} {} theta {theta}", g.label(), t.label());
                let norm = dl_norm(ch)?;
                let stab = t.weyl_stabilizer_size(*theta) as i64;
                rep.push(
                    format!("{id} norm"),
                    norm == Cyclotomic::from_int(stab),
                    json!({"norm": norm.to_json(), "stabilizer": stab}),
                );
                let mult = table.decompose(ch)?;
                let integral = mult.iter().all(|(_, m)| m.as_integer().is_some());
                rep.push(
                    format!("{id} integrality"),
                    integral,
                    json!({"multiplicities": mult.iter().map(|(i, m)| json!([i, m.to_json()])).collect::<Vec<_>>()}),
                );
            }
            // class-function check on every member for the first character of each torus
            for (ti, t) in family.tori.iter().enumerate() {
                let y = dl_variety_for_torus(t.clone(), BorelChoice::Upper)?;
                let theta = (t.num_characters() > 1) as usize;
                let rho = transfer(&torus_character(t, theta)?, y.levi())?;
                let ch = &family.characters.iter().find(|(i, th, _)| *i == ti && *th == theta).unwrap().2;
                let ok = y.check_class_function(&rho, ch, usize::MAX)?;
                rep.push(format!("{} {} theta {theta} class function", g.label(), t.label()), ok, json!({}));
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_2(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

/// The shortcut and the exponential fit agree on every semisimple pair.
pub fn two_oracle_suite(groups: &[(Family, u64)]) -> SuiteReport {
    let mut rep = SuiteReport::new("two-oracle", COMPACT);
    for &(fam, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, 2, q)?;
            let p = g.tower().characteristic() as u64;
            let t = Arc::new(maximal_torus(&g, &[2])?);
            for choice in [BorelChoice::Upper, BorelChoice::Lower] {
                let DLVariety::Twisted(v) = dl_variety_for_torus(t.clone(), choice)? else {
                    return Err(Error::Internal("nonsplit torus gave a rational variety".into()));
                };
                let mut checked = 0;
                let mut mismatches = Vec::new();
                for class in g.classes().iter().filter(|c| c.order % p != 0) {
                    for pos in 0..t.points.len() {
                        if let Some((short, cert)) = v.two_oracles(class.rep_index, pos)? {
                            checked += 1;
                            if short != cert.value || !cert.residuals_vanish() {
                                mismatches.push(json!({"shortcut": short.to_json(), "certificate": cert.to_json()}));
                            }
                        }
                    }
                }
                rep.push(
                    format!("{} {:?}", g.label(), choice),
                    checked > 0 && mismatches.is_empty(),
                    json!({"pairs_checked": checked, "mismatches": mismatches}),
                );
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_2(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Traces of `g` on the `ρ`-part of `C[G/N]` against `hc_induce(ρ)`, for every
/// standard Levi and every irreducible `ρ`.
pub fn double_trace_suite(groups: &[(Family, usize, u64)]) -> SuiteReport {
    let mut rep = SuiteReport::new("double-trace", COMPACT);
    for &(fam, n, q) in groups {
        let r = (|| -> Result<()> {
            let g = group(fam, n, q)?;
            for comp in compositions(n) {
                let p = Arc::new(standard_parabolic(&g, &comp)?);
                let model = RationalModel::new(p.clone());
                let levi = p.levi.clone();
                let table = character_table(&levi)?;
                // Tr(L_g R_m) on C[G/N], by acting on cosets
                let traces: Vec<Vec<i64>> = g
                    .classes()
                    .iter()
                    .map(|c| (0..levi.order() as u32).map(|m| model.fixed_points_direct(c.rep_index, m) as i64).collect())
                    .collect();
                for (i, rho) in table.irreducibles.iter().enumerate() {
                    let side_a = (0..g.num_classes())
                        .map(|c| {
                            let mut acc = Cyclotomic::zero();
                            for (m, &k) in traces[c].iter().enumerate() {
                                if k != 0 {
                                    acc = acc.add(&rho.at(m as u32).scale_int(k));
                                }
                            }
                            acc.div_int(levi.order() as i64)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let side_a = ClassFunction::new(&g, side_a)?;
                    let side_b = hc_induce(&p, rho)?;
                    rep.push(
                        format!("{} {:?} rho {i}", g.label(), comp),
                        side_a == side_b,
                        json!({"trace": values_json(&side_a), "hc_induce": values_json(&side_b)}),
                    );
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            rep.push(format!("{}_{n}(F_{q})", fam.name()), false, json!({"error": e.to_string()}));
        }
    }
    rep
}

/// Character-table invariants for every supported group.
pub fn tables_suite(specs: &[GroupSpec]) -> SuiteReport {
    let mut rep = SuiteReport::new("tables", "irreducible characters");
    for spec in specs {
        rep.push_result(spec.label(), (|| {
            let g = cached_group(spec)?;
            let check = character_table(&g)?.check_invariants()?;
            Ok((check.passed(), json!({"classes": g.num_classes(), "order": g.order(), "check": format!("{check:?}")})))
        })());
    }
    rep
}

/// `det intertwiner_matrix(P, P⁻) ≠ 0`.
pub fn howlett_lehrer_suite(cases: &[(Family, usize, u64, Vec<usize>)]) -> SuiteReport {
    let mut rep = SuiteReport::new("howlett-lehrer", "functions on G/N");
    for (fam, n, q, comp) in cases {
        let id = format!("{}_{n}(F_{q}) {comp:?}", fam.name());
        rep.push_result(id, (|| {
            let g = group(*fam, *n, *q)?;
            let p = standard_parabolic(&g, comp)?;
            let opp = opposite_parabolic(&p)?;
            let m = intertwiner_matrix(&p, &opp)?;
            let det = m.matrix.determinant()?;
            Ok((!num_traits::Zero::is_zero(&det), json!({"size": m.matrix.rows(), "determinant": det.to_string()})))
        })());
    }
    rep
}

pub fn rel_bruhat_suite(types: &[(CartanType, usize)]) -> SuiteReport {
    let mut rep = SuiteReport::new("rel-bruhat", "combinatorial");
    for &(t, r) in types {
        match RootSystem::new(t, r) {
            Ok(rs) => {
                for (j, levi) in rs.standard_levis().into_iter().enumerate() {
                    let report = verify_rel_bruhat_with_chains(&rs, levi);
                    let id = format!("{} levi {j} ({} roots)", rs.label(), report.levi_roots);
                    rep.push(id, report.passed(), report.to_json());
                }
            }
            Err(e) => rep.push(format!("{t:?}{r}"), false, json!({"error": e.to_string()})),
        }
    }
    rep
}

/// Both forms of the convolution identity; the suite status follows the
/// literal induction–restriction form.
pub fn springer_convolution_suite(groups: &[(Family, u64)]) -> (SuiteReport, SuiteReport) {
    let mut literal = SuiteReport::new("springer-convolution", "delta basis");
    let mut horocycle = SuiteReport::new("springer-convolution-horocycle", "delta basis");
    for &(fam, q) in groups {
        let id = format!("{}_2(F_{q})", fam.name());
        let b = group(fam, 2, q).and_then(|g| borel(&g));
        match b {
            Ok(b) => {
                literal.push_result(id.clone(), springer_convolution_check(&b).map(|r| (r.passed(), r.to_json())));
                horocycle.push_result(id, horocycle_convolution_check(&b).map(|r| (r.passed(), r.to_json())));
            }
            Err(e) => {
                literal.push(id.clone(), false, json!({"error": e.to_string()}));
                horocycle.push(id, false, json!({"error": e.to_string()}));
            }
        }
    }
    (literal, horocycle)
}

/// Runs a suite by its CLI name with the default parameters of the
/// acceptance criteria.
/// Optional overrides for a suite's default inputs.
#[derive(Clone, Debug, Default)]
pub struct SuiteArgs {
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub q: Option<u64>,
    pub cartan: Option<(CartanType, usize)>,
    pub composition: Option<Vec<usize>>,
}

impl SuiteArgs {
    fn any_group(&self) -> bool {
        self.family.is_some() || self.n.is_some() || self.q.is_some()
    }

    /// `(family, n, q)` with unset fields taken from `default`.
    fn full(&self, default: (Family, usize, u64)) -> (Family, usize, u64) {
        (
            self.family.unwrap_or(default.0),
            self.n.unwrap_or(default.1),
            self.q.unwrap_or(default.2),
        )
    }

    /// For suites that only run on rank-one groups.
    fn rank_one(&self, default: &[(Family, u64)]) -> Result<Vec<(Family, u64)>> {
        if !self.any_group() {
            return Ok(default.to_vec());
        }
        if self.n.is_some_and(|n| n != 2) {
            return Err(Error::InvalidInput("this suite runs on SL_2 and GL_2 only".into()));
        }
        let q = self.q.ok_or_else(|| Error::InvalidInput("--q is required".into()))?;
        Ok(match self.family {
            Some(f) => vec![(f, q)],
            None => vec![(Family::SL, q), (Family::GL, q)],
        })
    }

    fn groups(&self, default: &[(Family, usize, u64)]) -> Vec<(Family, usize, u64)> {
        if !self.any_group() {
            return default.to_vec();
        }
        vec![self.full(default[0])]
    }
}

pub fn run_named(name: &str) -> Result<SuiteReport> {
    run_suite(name, &SuiteArgs::default())
}

pub fn run_suite(name: &str, args: &SuiteArgs) -> Result<SuiteReport> {
    use Family::{GL, SL};
    let start = Instant::now();
    let rep = match name {
        "indep-rational" => {
            let groups = args.groups(&[(GL, 3, 2), (GL, 3, 3)]);
            let comp = args.composition.clone().unwrap_or_else(|| {
                let n = groups[0].1;
                if n == 1 { vec![1] } else { vec![1, n - 1] }
            });
            indep_rational_suite(&groups, &comp)
        }
        "indep-twisted" => indep_twisted_suite(&args.rank_one(&[(SL, 2), (SL, 3), (SL, 5)])?),
        "orthogonality" => orthogonality_suite(&args.rank_one(&[(SL, 3), (GL, 3)])?),
        "springer-chars" => springer_chars_suite(&args.rank_one(&[(GL, 3), (GL, 4), (GL, 5)])?),
        "howlett-lehrer" => {
            let cases = if args.any_group() {
                let (f, n, q) = args.full((GL, 2, 2));
                let comp = args.composition.clone().unwrap_or_else(|| vec![1; n]);
                vec![(f, n, q, comp)]
            } else {
                default_howlett_lehrer()
            };
            howlett_lehrer_suite(&cases)
        }
        "rel-bruhat" => match args.cartan {
            Some(t) => rel_bruhat_suite(&[t]),
            None => rel_bruhat_suite(&supported_types()),
        },
        "springer-convolution" => springer_convolution_suite(&args.rank_one(&[(SL, 3), (SL, 5), (GL, 3)])?).0,
        "springer-convolution-horocycle" => {
            springer_convolution_suite(&args.rank_one(&[(SL, 3), (SL, 5), (GL, 3)])?).1
        }
        "double-trace" => double_trace_suite(&args.groups(&[(GL, 3, 2), (GL, 2, 3)])),
        "properties" => properties_suite(&args.rank_one(&RANK_ONE)?),
        "two-oracle" => two_oracle_suite(&args.rank_one(&RANK_ONE)?),
        "tables" => {
            if args.any_group() {
                let (f, n, q) = args.full((GL, 2, 2));
                tables_suite(&[GroupSpec::new(f, n, q)?])
            } else {
                tables_suite(&supported_targets())
            }
        }
        _ => return Err(Error::InvalidInput(format!("unknown suite {name}"))),
    };
    Ok(rep.timed(start))
}

pub const SUITES: &[&str] = &[
    "indep-rational",
    "indep-twisted",
    "orthogonality",
    "springer-chars",
    "howlett-lehrer",
    "rel-bruhat",
    "springer-convolution",
    "springer-convolution-horocycle",
    "double-trace",
    "properties",
    "two-oracle",
    "tables",
];

/// `SL_2(F_q)` and `GL_2(F_q)` for `q ≤ 5`.
pub const RANK_ONE: [(Family, u64); 8] = [
    (Family::SL, 2),
    (Family::SL, 3),
    (Family::SL, 4),
    (Family::SL, 5),
    (Family::GL, 2),
    (Family::GL, 3),
    (Family::GL, 4),
    (Family::GL, 5),
];

pub fn default_howlett_lehrer() -> Vec<(Family, usize, u64, Vec<usize>)> {
    let mut v = Vec::new();
    for q in [2, 3, 4, 5] {
        v.push((Family::SL, 2, q, vec![1, 1]));
    }
    for q in [2, 3, 4] {
        v.push((Family::GL, 2, q, vec![1, 1]));
    }
    v.push((Family::GL, 3, 2, vec![1, 2]));
    v
}
