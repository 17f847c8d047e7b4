//! Structural properties of the group layer: products, quotients, derived
//! series, and the group file format.

use std::sync::Arc;

use wreathcheck_core::catalog::catalog;
use wreathcheck_core::group::{
    derived_series, derived_subgroup, direct_product, is_solvable, quotient, GroupFile, Subgroup,
};
use wreathcheck_core::lattice::normal_subgroups;

#[test]
fn class_counts_multiply_in_products() {
    for (a, b) in [("S3", "C2"), ("S3", "S3"), ("Q8", "C3"), ("D10", "C2")] {
        let ga = catalog(a).unwrap();
        let gb = catalog(b).unwrap();
        let p = direct_product(&ga, &gb, 20_000).unwrap();
        assert_eq!(
            p.group.class_count(),
            ga.class_count() * gb.class_count(),
            "{a} x {b}"
        );
        assert_eq!(p.group.order(), ga.order() * gb.order());
        assert!(p.embed_left.verify());
        assert!(p.embed_right.verify());
        // embedded images commute elementwise
        for x in 0..ga.order() as u32 {
            for y in 0..gb.order() as u32 {
                let l = p.embed_left.apply(x);
                let r = p.embed_right.apply(y);
                assert_eq!(p.group.mul(l, r), p.group.mul(r, l));
            }
        }
    }
}

#[test]
fn quotient_projections_are_homomorphisms() {
    for name in ["S4", "SL(2,3)", "D12", "Q8"] {
        let g = catalog(name).unwrap();
        for n in normal_subgroups(&g, 100_000).unwrap() {
            let (q, proj) = quotient(&g, &n).unwrap();
            assert!(proj.verify(), "{name} / N of order {}", n.len());
            assert_eq!(q.order(), g.order() / n.len());
        }
    }
}

#[test]
fn derived_series_shrinks_until_stable() {
    for name in ["S3", "S4", "SL(2,3)", "Q8", "D12", "C12"] {
        let g = catalog(name).unwrap();
        let series = derived_series(&g);
        for w in series.windows(2) {
            assert!(w[1].len() < w[0].len());
        }
        assert!(is_solvable(&g), "{name}");
    }
}

#[test]
fn symmetric_five_is_not_solvable() {
    let s5 = catalog("S5").unwrap();
    assert!(!is_solvable(&s5));
    let series = derived_series(&s5);
    // S5 -> A5 and A5 is perfect
    let sizes: Vec<usize> = series.iter().map(Subgroup::len).collect();
    assert_eq!(sizes, vec![120, 60]);
    assert_eq!(derived_subgroup(&catalog("A5").unwrap()).len(), 60);
}

#[test]
fn conjugation_preserves_subgroup_size() {
    let g = catalog("S4").unwrap();
    let h = Subgroup::generated_by(&g, &[1, 9]);
    for x in 0..g.order() as u32 {
        assert_eq!(h.conjugate_by(x).len(), h.len());
    }
}

#[test]
fn group_files_build_and_round_trip() {
    let cases = [
        r#"{"cayley":[[0,1],[1,0]]}"#,
        r#"{"permutation_generators":[[1,0,2],[1,2,0]],"name":"S3"}"#,
        r#"{"permutation_generators":[[1,2,3,4,0],[0,4,3,2,1]],"name":"D10"}"#,
    ];
    for text in cases {
        let file = GroupFile::parse(text).unwrap();
        assert_eq!(file.to_json(), text, "byte-exact round trip");
        let g = file.build(20_000).unwrap();
        assert!(g.order() >= 2);
    }
    for bad in [
        r#"{}"#,
        r#"{"cayley":[[0,1],[1,0]],"permutation_generators":[[0]]}"#,
        r#"{"cayley":[[0,7],[1,0]]}"#,
        r#"{"cayley":[[1,1],[1,1]]}"#,
    ] {
        let outcome = GroupFile::parse(bad).and_then(|f| f.build(20_000));
        assert!(outcome.is_err(), "{bad}");
    }
}

#[test]
fn exponent_divides_order_everywhere() {
    for name in wreathcheck_core::catalog::standard_small_names() {
        let g = catalog(name).unwrap();
        assert_eq!(g.order() % g.exponent(), 0, "{name}");
        for x in 0..g.order() as u32 {
            assert_eq!(g.power(x, g.exponent()), 0, "{name} element {x}");
        }
        let total: usize = g.class_sizes().iter().sum();
        assert_eq!(total, g.order());
        assert!(Arc::strong_count(&g) >= 1);
    }
}
