//! Cross-cutting monomiality properties: the implication chain, the
//! solvability red flag, closure under quotients and products, and public
//! witness replay.

use std::sync::Arc;

use wreathcheck_core::catalog::catalog;
use wreathcheck_core::group::{direct_product, is_solvable, quotient, FiniteGroup};
use wreathcheck_core::lattice::normal_subgroups;
use wreathcheck_core::monomial::{
    verify_monomial_witness, verify_separation_witness, Classification, SearchContext,
    SearchLimits,
};

fn classify(g: &Arc<FiniteGroup>) -> Classification {
    SearchContext::build(g, &SearchLimits::default())
        .unwrap()
        .classify()
        .unwrap()
}

fn assert_monotone(c: &Classification, label: &str) {
    assert!(!c.monomial || c.quasi_monomial, "{label}");
    assert!(!c.quasi_monomial || c.almost_monomial, "{label}");
    assert!(!c.normally_almost_monomial || c.almost_monomial, "{label}");
}

#[test]
fn implication_chain_and_solvability_red_flag() {
    let mut names = wreathcheck_core::catalog::standard_small_names();
    names.extend(["A5", "S5"]);
    for name in names {
        let g = catalog(name).unwrap();
        let c = classify(&g);
        assert_monotone(&c, name);
        // a group classified monomial must be solvable (red flag, not proof)
        if c.monomial {
            assert!(is_solvable(&g), "{name} classified monomial but unsolvable");
        }
        // nonsolvable groups can never classify monomial
        if !is_solvable(&g) {
            assert!(!c.monomial, "{name}");
        }
        c.validate().unwrap();
    }
}

#[test]
fn quotients_of_almost_monomial_groups_stay_almost_monomial() {
    for name in ["S4", "SL(2,3)", "D12", "Q8", "A4"] {
        let g = catalog(name).unwrap();
        assert!(classify(&g).almost_monomial, "{name}");
        for n in normal_subgroups(&g, 100_000).unwrap() {
            let (q, _) = quotient(&g, &n).unwrap();
            let c = classify(&q);
            assert!(c.almost_monomial, "{name} / N of order {}", n.len());
        }
    }
}

#[test]
fn product_law_small_pairs() {
    for (a, b) in [("S3", "C2"), ("Q8", "C3"), ("S3", "S3"), ("C4", "C6")] {
        let ga = catalog(a).unwrap();
        let gb = catalog(b).unwrap();
        let p = direct_product(&ga, &gb, 20_000).unwrap();
        let ca = classify(&ga);
        let cb = classify(&gb);
        let cp = classify(&p.group);
        assert_eq!(
            cp.almost_monomial,
            ca.almost_monomial && cb.almost_monomial,
            "{a} x {b}"
        );
        assert_monotone(&cp, "product");
    }
}

#[test]
fn witnesses_survive_public_replay() {
    let g = catalog("S4").unwrap();
    let ctx = SearchContext::build(&g, &SearchLimits::default()).unwrap();
    let c = ctx.classify().unwrap();
    for (i, w) in c.monomial_witnesses.iter().enumerate() {
        let w = w.as_ref().unwrap();
        assert!(verify_monomial_witness(&g, ctx.table(), i, w).unwrap());
    }
    for o in &c.separations {
        let w = o.witness.as_ref().unwrap();
        assert!(verify_separation_witness(&g, ctx.table(), w).unwrap());
    }
    // a tampered witness must not verify
    let mut bad = c.monomial_witnesses[0].clone().unwrap();
    bad.d += 1;
    assert!(!verify_monomial_witness(&g, ctx.table(), 0, &bad).unwrap());
}

#[test]
fn factor_monomiality_hypothesis_fails_over_sl23() {
    // SL(2,3) has non-monomial degree-2 irreducibles, so the wreath square
    // fails the factor-monomiality hypothesis (and the conclusion is not
    // evaluated); the quasi-monomial base premise is false anyway
    let sl = catalog("SL(2,3)").unwrap();
    let limits = SearchLimits::default();
    let w = wreathcheck_core::wreath::WreathGroup::build(&sl, 2, limits.order_limit).unwrap();
    let analysis = wreathcheck_core::wreath::WreathAnalysis::analyze(w).unwrap();
    assert_eq!(analysis.wreath.group().order(), 1152);
    assert_eq!(analysis.table.len(), 35);
    let ctx_a = SearchContext::build(&sl, &limits).unwrap();
    let report = wreathcheck_core::monomial::check_factor_monomiality_hypothesis(&analysis, &ctx_a, || {
        panic!("conclusion must not be evaluated when the hypothesis fails")
    })
    .unwrap();
    assert!(!report.overall);
    assert!(report.conclusion.is_none());
    // exactly the cases over the degree-2 factors lack witnesses
    for case in &report.cases {
        let phi = case.phi_index.unwrap();
        let degree = ctx_a.table().degrees()[phi];
        assert_eq!(case.found, degree != 2, "phi degree {degree}");
    }
    report.validate().unwrap();
}

#[test]
fn budget_propagates_through_context() {
    let g = catalog("S4").unwrap();
    let limits = SearchLimits {
        subgroup_limit: 3,
        order_limit: 20_000,
    };
    assert!(matches!(
        SearchContext::build(&g, &limits),
        Err(wreathcheck_core::Error::SearchBudgetExceeded { limit: 3 })
    ));
}
