use proptest::prelude::*;

mod common;
use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(RELATION_CASES))]

    #[test]
    fn composition_is_associative_and_distributes(rs in relations(3)) {
        composition_laws(rs)?;
    }

    #[test]
    fn closures_are_least_and_idempotent(r in relation(8)) {
        closure_laws(r)?;
    }

    #[test]
    fn cycles_are_genuine(r in relation(8)) {
        cycle_laws(r)?;
    }
}

#[test]
fn mode_order_is_a_partial_order() {
    mode_order_is_partial().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(PARSER_CASES))]

    #[test]
    fn print_then_parse_is_identity(p in program()) {
        round_trip(p)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(EXECUTION_CASES))]

    #[test]
    fn witnesses_verify(p in small_program()) {
        witnesses_are_genuine(p)?;
    }

    #[test]
    fn dfs_bfs_and_product_agree(p in small_program()) {
        search_order_does_not_matter(p)?;
    }

    #[test]
    fn rf_and_mo_are_well_formed(p in small_program()) {
        candidates_are_well_formed(p)?;
    }

    #[test]
    fn raising_a_mode_is_monotone(p in small_program(), pick in any::<prop::sample::Index>()) {
        strengthening_is_monotone(p, pick)?;
    }
}
