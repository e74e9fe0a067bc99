use std::sync::Arc;

use dlchar::chartab::character_table;
use dlchar::cyclo::Cyclotomic;
use dlchar::dl::vector::{VectorModel, DEFAULT_N_MAX};
use dlchar::dl::{dl_character_of_torus, dl_norm, dl_variety, dl_variety_for_torus, DLVariety};
use dlchar::groups::{
    cached_group, maximal_torus, standard_parabolic, twisted_parabolic_datum, BorelChoice, GroupSpec, GroupTable,
    TorusData,
};
use proptest::prelude::*;

fn group(spec: GroupSpec) -> Arc<GroupTable> {
    cached_group(&spec).unwrap()
}

fn torus(g: &Arc<GroupTable>, partition: &[usize]) -> Arc<TorusData> {
    Arc::new(maximal_torus(g, partition).unwrap())
}

/// Closed-form value of a rank-one DL character at an element:
/// `θ(z)·Q(u)` on `zu` with `z` central, and the sum of `θ` over the torus
/// points conjugate to `x` when `x` is regular semisimple.
fn formula(g: &GroupTable, t: &TorusData, theta: usize, x: u32) -> Cyclotomic {
    let q = g.q() as i64;
    let p = g.fq().characteristic() as u64;
    let split = t.partition == [1, 1];
    let green_at_one = if split { 1 + q } else { 1 - q };
    let c = g.class_of(x);
    let theta_at = |y: u32| t.character_value(theta, t.position_of(y).expect("central elements lie in T"));
    if g.classes()[c].size() == 1 {
        return theta_at(x).scale_int(green_at_one);
    }
    let ord = g.element_order(x);
    if ord % p == 0 {
        // x = zu with u a nontrivial unipotent of order p
        let r = ord / p;
        let e = (1..=r).map(|k| k * p).find(|e| e % r == 1 % r).unwrap();
        return theta_at(g.pow(x, e));
    }
    t.points
        .iter()
        .enumerate()
        .filter(|&(_, &y)| g.class_of(y) == c)
        .fold(Cyclotomic::zero(), |acc, (pos, _)| acc.add(&t.character_value(theta, pos)))
}

fn check_formula(spec: GroupSpec, partition: &[usize], choice: BorelChoice) {
    let g = group(spec);
    let t = torus(&g, partition);
    let y = dl_variety_for_torus(t.clone(), choice).unwrap();
    for theta in 0..t.num_characters() {
        let ch = dl_character_of_torus(&y, &t, theta).unwrap();
        for (c, class) in g.classes().iter().enumerate() {
            let expected = formula(&g, &t, theta, class.rep_index);
            assert_eq!(ch.value(c), &expected, "{} {} θ{theta} class {c}", g.label(), y.label());
        }
    }
}

#[test]
fn nonsplit_sl2_matches_character_formula() {
    for q in [2, 3, 4, 5] {
        for choice in [BorelChoice::Upper, BorelChoice::Lower] {
            check_formula(GroupSpec::sl(2, q).unwrap(), &[2], choice);
        }
    }
}

#[test]
fn nonsplit_gl2_matches_character_formula() {
    for q in [2, 3, 4] {
        check_formula(GroupSpec::gl(2, q).unwrap(), &[2], BorelChoice::Upper);
    }
}

#[test]
fn split_rank_one_matches_character_formula() {
    for q in [2, 3, 4, 5] {
        check_formula(GroupSpec::gl(2, q).unwrap(), &[1, 1], BorelChoice::Upper);
        check_formula(GroupSpec::gl(2, q).unwrap(), &[1, 1], BorelChoice::Lower);
    }
}

fn vector_model(spec: GroupSpec) -> VectorModel {
    let g = group(spec);
    let t = torus(&g, &[2]);
    let datum = twisted_parabolic_datum(&t, BorelChoice::Upper).unwrap();
    VectorModel::new(t, datum, DEFAULT_N_MAX).unwrap()
}

#[test]
fn drinfeld_curve_point_counts() {
    // x y^q - x^q y = 1 has no points over F_q and q^3 - q over F_{q^2}
    for q in [2u64, 3] {
        let y = vector_model(GroupSpec::sl(2, q).unwrap());
        assert_eq!(y.points(1).unwrap().len(), 0);
        let n2 = y.points(2).unwrap().len() as u64;
        assert_eq!(n2, q * q * q - q);
        assert!(y.check_actions(2, 1).unwrap());
        // G acts freely on the F_{q^2}-points
        assert_eq!(y.free_orbit_count(2).unwrap(), Some((n2 / y.group.order()) as usize));
    }
}

#[test]
fn trivial_theta_is_one_minus_steinberg() {
    for spec in [GroupSpec::sl(2, 3).unwrap(), GroupSpec::gl(2, 3).unwrap(), GroupSpec::sl(2, 4).unwrap()] {
        let g = group(spec);
        let t = torus(&g, &[2]);
        let y = dl_variety_for_torus(t.clone(), BorelChoice::Upper).unwrap();
        let ch = dl_character_of_torus(&y, &t, 0).unwrap();
        let q = g.q() as i64;
        assert_eq!(ch.value(g.identity_class()), &Cyclotomic::from_int(1 - q));
        let table = character_table(&g).unwrap();
        let parts = table.decompose(&ch).unwrap();
        let degrees: Vec<(u64, Cyclotomic)> = parts.iter().map(|(j, m)| (table.degrees[*j], m.clone())).collect();
        assert_eq!(degrees, vec![(1, Cyclotomic::from_int(1)), (q as u64, Cyclotomic::from_int(-1))]);
    }
}

#[test]
fn norms_count_weyl_stabilizers() {
    let g = group(GroupSpec::sl(2, 5).unwrap());
    let t = torus(&g, &[2]);
    let y = dl_variety_for_torus(t.clone(), BorelChoice::Upper).unwrap();
    for theta in 0..t.num_characters() {
        let ch = dl_character_of_torus(&y, &t, theta).unwrap();
        let fixed = t.weyl_stabilizer_size(theta) as i64;
        assert_eq!(dl_norm(&ch).unwrap(), Cyclotomic::from_int(fixed));
    }
}

#[test]
fn rational_model_counts_match_direct_enumeration() {
    let g = group(GroupSpec::gl(3, 2).unwrap());
    let p = Arc::new(standard_parabolic(&g, &[1, 2]).unwrap());
    let y = dl_variety(p.clone());
    let DLVariety::Rational(model) = &y else { panic!("rational parabolic") };
    for class in g.classes() {
        let hist = model.fixed_histogram(class.rep_index);
        for m in 0..p.levi.order() as u32 {
            assert_eq!(hist[m as usize], model.fixed_points_direct(class.rep_index, m));
        }
    }
}

fn linearity_case() -> (DLVariety, Arc<GroupTable>) {
    let g = group(GroupSpec::gl(3, 2).unwrap());
    let p = standard_parabolic(&g, &[1, 2]).unwrap();
    let levi = p.levi.clone();
    (dl_variety(Arc::new(p)), levi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dl_character_is_linear(a in -3i64..4, b in -3i64..4, i in 0usize..3, j in 0usize..3) {
        let (y, levi) = linearity_case();
        let table = character_table(&levi).unwrap();
        let (r1, r2) = (&table.irreducibles[i], &table.irreducibles[j]);
        let combo = r1.scale_int(a).add(&r2.scale_int(b)).unwrap();
        let lhs = dlchar::dl::dl_character(&y, &combo).unwrap();
        let rhs = dlchar::dl::dl_character(&y, r1).unwrap().scale_int(a)
            .add(&dlchar::dl::dl_character(&y, r2).unwrap().scale_int(b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nonsplit_values_are_galois_stable(theta in 0usize..6, k in prop::sample::select(vec![1i64, 5, 7, 11])) {
        // R(θ^k) is the Galois conjugate of R(θ) under ζ ↦ ζ^k
        let g = group(GroupSpec::sl(2, 5).unwrap());
        let t = torus(&g, &[2]);
        let y = dl_variety_for_torus(t.clone(), BorelChoice::Upper).unwrap();
        let n = t.num_characters();
        let power = (theta * k as usize) % n;
        let lhs = dl_character_of_torus(&y, &t, power).unwrap();
        let rhs = dl_character_of_torus(&y, &t, theta).unwrap().galois(k);
        prop_assert_eq!(lhs, rhs);
    }
}
