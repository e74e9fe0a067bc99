use dlchar::weyl::{
    supported_types, verify_borel_length_additivity, verify_rel_bruhat_with_chains, CartanType, LeviContext,
    RootSystem,
};

#[test]
fn positions_and_chains_all_types_all_levis() {
    for (t, r) in supported_types() {
        let rs = RootSystem::new(t, r).unwrap();
        for levi in rs.standard_levis() {
            let rep = verify_rel_bruhat_with_chains(&rs, levi);
            assert!(rep.passed(), "{}", rep.to_json());
            let k = rep.parabolics as u64;
            assert_eq!(rep.chains_checked, k * k * k);
        }
    }
}

#[test]
fn borel_add_up_matches_length_additivity() {
    for (t, r) in supported_types() {
        let rs = RootSystem::new(t, r).unwrap();
        let (checked, failures) = verify_borel_length_additivity(&rs);
        assert_eq!(checked, (rs.weyl_order() as u64).pow(3));
        assert_eq!(failures, 0, "{}", rs.label());
    }
}

#[test]
fn parabolic_counts_match_weyl_orders() {
    // Borels containing T are a W-torsor
    for (t, r) in supported_types() {
        let rs = RootSystem::new(t, r).unwrap();
        assert_eq!(rs.parabolics_with_levi(&rs.standard_levi(0)).len(), rs.weyl_order());
        // the whole group is the only parabolic with Levi Φ
        let full = rs.standard_levi((1 << r) - 1);
        assert_eq!(rs.parabolics_with_levi(&full).len(), 1);
    }
}

#[test]
fn d4_chain_distances_decrease() {
    let rs = RootSystem::new(CartanType::D, 4).unwrap();
    let ctx = LeviContext::new(&rs, rs.standard_levi(0));
    let far = (0..ctx.len()).max_by_key(|&b| ctx.distance(0, b)).unwrap();
    assert_eq!(ctx.distance(0, far), 12);
    let c = ctx.reduction_chain(0, far, 1).unwrap();
    ctx.validate_chain(&c).unwrap();
    assert_eq!(c.distances[0], 12);
}
