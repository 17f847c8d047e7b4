//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Everything is exact arithmetic except the explicitly
//! numeric oracle comparison (1e-6) and the wall-clock budgets.
//!
//! Run with `cargo test -p wreathcheck --test acceptance -- --nocapture`.

use std::sync::{Arc, LazyLock};
use std::time::Instant;

use wreathcheck::{execute, Cli, Command};
use wreathcheck_core::catalog::{catalog, standard_small_names};
use wreathcheck_core::chartab::{
    character_table, inner_product, outer_product, restrict, ClassFunction,
};
use wreathcheck_core::cyclo::{Accumulator, Cyclotomic};
use wreathcheck_core::group::{direct_product, quotient, FiniteGroup};
use wreathcheck_core::lattice::normal_subgroups;
use wreathcheck_core::monomial::{
    check_factor_monomiality_hypothesis, check_main_hypothesis, compose_quasi_witness, counterexample_search,
    Classification, SearchContext, SearchLimits, WitnessMode,
};
use wreathcheck_core::oracle;
use wreathcheck_core::report::AnalyzeReport;
use wreathcheck_core::wreath::{WreathAnalysis, WreathGroup};

const LIMITS: SearchLimits = SearchLimits {
    subgroup_limit: 100_000,
    order_limit: 20_000,
};

fn cli(command: Command) -> Cli {
    Cli {
        command,
        json: true,
        output: None,
        subgroup_limit: LIMITS.subgroup_limit,
        order_limit: LIMITS.order_limit,
        timings: false,
    }
}

fn classify(g: &Arc<FiniteGroup>) -> Classification {
    SearchContext::build(g, &LIMITS).unwrap().classify().unwrap()
}

/// All wreath products exercised by criteria 6-8, built once.
static WREATHS: LazyLock<Vec<(&'static str, usize, WreathAnalysis)>> = LazyLock::new(|| {
    let mut out = Vec::new();
    for a in ["C2", "C3", "S3", "D10"] {
        for p in [2usize, 3] {
            let base = catalog(a).unwrap();
            let w = WreathGroup::build(&base, p, LIMITS.order_limit).unwrap();
            out.push((a, p, WreathAnalysis::analyze(w).unwrap()));
        }
    }
    out
});

fn wreath_analysis(a: &str, p: usize) -> &'static WreathAnalysis {
    WREATHS
        .iter()
        .find(|(name, copies, _)| *name == a && *copies == p)
        .map(|(_, _, w)| w)
        .unwrap()
}

static D10_W_CTX: LazyLock<SearchContext> = LazyLock::new(|| {
    let analysis = wreath_analysis("D10", 2);
    SearchContext::from_table(analysis.table.clone(), &LIMITS).unwrap()
});

static D10_W_CLASSIFICATION: LazyLock<Classification> =
    LazyLock::new(|| D10_W_CTX.classify().unwrap());

#[test]
fn criterion_01_sl23_paper_instance() {
    let start = Instant::now();
    let (text, code) = execute(&cli(Command::Analyze {
        group: "SL(2,3)".into(),
    }))
    .unwrap();
    assert_eq!(code, 0);
    let report: AnalyzeReport = serde_json::from_str(&text).unwrap();
    report.validate().unwrap();
    let c = &report.classification;
    assert!(!c.monomial, "SL(2,3) must not classify monomial");
    assert!(!c.quasi_monomial, "SL(2,3) must not classify quasi-monomial");
    assert!(c.almost_monomial, "SL(2,3) must classify almost monomial");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "budget exceeded: {elapsed:?}");
    println!(
        "criterion 01: PASS - SL(2,3): monomial=false quasi=false almost=true ({elapsed:?})"
    );
}

#[test]
fn criterion_02_d10_wreath_paper_instance() {
    let start = Instant::now();
    let d10 = catalog("D10").unwrap();
    let c_base = classify(&d10);
    assert!(c_base.normally_almost_monomial, "D10 is normally almost monomial");

    let analysis = wreath_analysis("D10", 2);
    assert_eq!(analysis.wreath.group().order(), 200);
    let c_w = &*D10_W_CLASSIFICATION;
    assert!(
        !c_w.normally_almost_monomial,
        "D10 wr C2 must NOT be normally almost monomial"
    );
    assert!(c_w.almost_monomial, "D10 wr C2 must be almost monomial");
    // exhaustive NONE: some pair has no normal separation at all
    assert!(c_w.normal_separations.iter().any(|o| o.witness.is_none()));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "budget exceeded: {elapsed:?}");
    println!(
        "criterion 02: PASS - D10 normally almost; D10 wr C2 almost but not normally ({elapsed:?})"
    );
}

#[test]
fn criterion_03_symmetric_groups_almost_monomial() {
    let start = Instant::now();
    for name in ["S3", "S4", "S5"] {
        let g = catalog(name).unwrap();
        let c = classify(&g);
        assert!(c.almost_monomial, "{name}");
        let r = g.class_count();
        assert_eq!(c.separations.len(), r * (r - 1), "{name} full matrix");
        assert!(
            c.separations.iter().all(|o| o.witness.is_some()),
            "{name}: a pair is missing its separation witness"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1800, "budget exceeded: {elapsed:?}");
    println!("criterion 03: PASS - S3, S4, S5 almost monomial with full witness matrices ({elapsed:?})");
}

#[test]
fn criterion_04_quotient_and_product_closure() {
    let start = Instant::now();
    let battery: Vec<(&str, Arc<FiniteGroup>)> = standard_small_names()
        .into_iter()
        .map(|n| (n, catalog(n).unwrap()))
        .collect();
    let almost: Vec<bool> = battery
        .iter()
        .map(|(name, g)| {
            assert!(g.order() <= 24);
            let c = classify(g);
            assert!(c.almost_monomial, "{name} itself");
            c.almost_monomial
        })
        .collect();

    // quotient closure
    let mut quotient_tasks: Vec<(String, Arc<FiniteGroup>)> = Vec::new();
    for (name, g) in &battery {
        for n in normal_subgroups(g, LIMITS.subgroup_limit).unwrap() {
            let (q, _) = quotient(g, &n).unwrap();
            quotient_tasks.push((format!("{name} / N of order {}", n.len()), q));
        }
    }

    // product law in both directions
    let mut pair_tasks: Vec<(String, Arc<FiniteGroup>, bool)> = Vec::new();
    for i in 0..battery.len() {
        for j in i..battery.len() {
            let (na, ga) = &battery[i];
            let (nb, gb) = &battery[j];
            if ga.order() * gb.order() > 48 {
                continue;
            }
            let p = direct_product(ga, gb, LIMITS.order_limit).unwrap();
            pair_tasks.push((format!("{na} x {nb}"), p.group, almost[i] && almost[j]));
        }
    }

    let quotients = quotient_tasks.len();
    let pairs = pair_tasks.len();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let total = quotients + pairs;
    std::thread::scope(|scope| {
        for _ in 0..std::thread::available_parallelism().map_or(4, |n| n.get()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if k >= total {
                    return;
                }
                if k < quotients {
                    let (label, q) = &quotient_tasks[k];
                    assert!(classify(q).almost_monomial, "{label}");
                } else {
                    let (label, prod, expected) = &pair_tasks[k - quotients];
                    assert_eq!(classify(prod).almost_monomial, *expected, "{label}");
                }
            });
        }
    });
    assert!(quotients >= 40 && pairs >= 30);
    let elapsed = start.elapsed();
    println!(
        "criterion 04: PASS - {quotients} quotients and {pairs} products closed ({elapsed:?})"
    );
}

#[test]
fn criterion_05_product_witness_composition() {
    let start = Instant::now();
    let s3 = catalog("S3").unwrap();
    let ctx = SearchContext::build(&s3, &LIMITS).unwrap();
    let prod = direct_product(&s3, &s3, LIMITS.order_limit).unwrap();
    let table_p = character_table(&prod.group).unwrap();
    for i in 0..ctx.table().len() {
        for j in 0..ctx.table().len() {
            let w1 = ctx.monomial_witness(i, WitnessMode::Quasi).unwrap();
            let w2 = ctx.monomial_witness(j, WitnessMode::Quasi).unwrap();
            let composed = compose_quasi_witness(&prod, &ctx, &w1, &ctx, &w2).unwrap();
            let chi12 = outer_product(ctx.table().irreducible(i), ctx.table().irreducible(j), &prod);
            assert!(
                composed.verifies_against(&chi12),
                "composed witness for pair ({i},{j}) failed replay"
            );
            assert!(table_p.index_of(&chi12).is_some());
        }
    }
    // and the product certifies quasi-monomial as a whole
    let c = classify(&prod.group);
    assert!(c.quasi_monomial);
    let elapsed = start.elapsed();
    println!("criterion 05: PASS - 9 composed witnesses replay on S3 x S3, product quasi-monomial ({elapsed:?})");
}

#[test]
fn criterion_06_clifford_dichotomy_census() {
    let start = Instant::now();
    for (a, p, analysis) in WREATHS.iter() {
        // analyze() already fails on any dichotomy violation; check censuses
        let census = analysis.census();
        assert_eq!(
            census.irr_count,
            census.full_orbits + p * census.fixed_labels,
            "{a} wr C{p}"
        );
        assert_eq!(census.case_induced, census.full_orbits, "{a} wr C{p}");
        assert_eq!(census.case_extension, p * census.fixed_labels, "{a} wr C{p}");
        let actual: usize = analysis.table.degrees().iter().map(|d| d * d).sum();
        assert_eq!(census.predicted_degree_square_sum, actual);
        assert_eq!(actual, analysis.wreath.group().order());
    }
    // the order-200 instance: 4 fixed labels giving 2 extensions each and
    // 6 full orbits giving one induced character each, 14 in total
    let d10_census = wreath_analysis("D10", 2).census();
    assert_eq!(
        (d10_census.fixed_labels, d10_census.full_orbits, d10_census.irr_count),
        (4, 6, 14)
    );
    let elapsed = start.elapsed();
    println!(
        "criterion 06: PASS - dichotomy and census identity on {} wreath products ({elapsed:?})",
        WREATHS.len()
    );
}

#[test]
fn criterion_07_top_restriction_identity() {
    let start = Instant::now();
    let mut fibers = 0;
    for (a, p, analysis) in WREATHS.iter() {
        let top = analysis.wreath.top_subgroup().unwrap();
        let rho = ClassFunction::regular(&top.group);
        for (label, _) in analysis.base_irreducibles() {
            if !label.is_diagonal() {
                continue;
            }
            let fiber = analysis.gallagher_fiber(label).unwrap();
            let degree = analysis.table.degrees()[fiber[0]] as u64;
            let mut sum: Option<ClassFunction> = None;
            for &i in &fiber {
                let res = restrict(analysis.table.irreducible(i), &top).unwrap();
                sum = Some(match sum {
                    None => res,
                    Some(s) => s.add(&res),
                });
            }
            assert_eq!(sum.unwrap(), rho.scaled(degree), "{a} wr C{p} {label}");
            fibers += 1;
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 07: PASS - T-restriction identity on {fibers} fibers ({elapsed:?})");
}

#[test]
fn criterion_08_gallagher_fibers() {
    let start = Instant::now();
    let mut fibers = 0;
    for (a, p, analysis) in WREATHS.iter() {
        let betas = analysis.wreath.outer_linear_characters();
        for (label, theta) in analysis.base_irreducibles() {
            if !label.is_diagonal() {
                continue;
            }
            let fiber = analysis.gallagher_fiber(label).unwrap();
            assert_eq!(fiber.len(), *p, "{a} wr C{p} {label}");
            // pairwise distinct, beta-translates of any single member
            let first = analysis.table.irreducible(fiber[0]);
            let mut translated: Vec<usize> = betas
                .iter()
                .map(|b| analysis.table.index_of(&b.pointwise_mul(first)).unwrap())
                .collect();
            translated.sort_unstable();
            assert_eq!(translated, fiber, "{a} wr C{p} {label}");
            // the fiber sums to theta^W
            let induced = wreathcheck_core::chartab::induce(
                theta,
                analysis.wreath.base(),
                analysis.wreath.group(),
            )
            .unwrap();
            let mut sum: Option<ClassFunction> = None;
            for &i in &fiber {
                let chi = analysis.table.irreducible(i).clone();
                sum = Some(match sum {
                    None => chi,
                    Some(s) => s.add(&chi),
                });
            }
            assert_eq!(sum.unwrap(), induced, "{a} wr C{p} {label}");
            fibers += 1;
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 08: PASS - Gallagher fibers verified on {fibers} labels ({elapsed:?})");
}

#[test]
fn criterion_09_character_table_core() {
    let start = Instant::now();
    let mut names = standard_small_names();
    names.extend(["S5", "A5", "D16", "D20", "C30"]);
    for name in &names {
        let g = catalog(name).unwrap();
        assert!(g.order() <= 200);
        let t = character_table(&g).unwrap();
        let r = t.len();
        let one = num_rational::BigRational::from_integer(1.into());
        let zero = num_rational::BigRational::from_integer(0.into());
        for i in 0..r {
            for j in 0..r {
                let ip = inner_product(t.irreducible(i), t.irreducible(j)).unwrap();
                assert_eq!(ip, if i == j { one.clone() } else { zero.clone() }, "{name}");
            }
        }
        for i in 0..r {
            for j in 0..r {
                let mut acc = Accumulator::new();
                for chi in t.irreducibles() {
                    acc.add_mul_conj(chi.value_on_class(i), chi.value_on_class(j), &one);
                }
                let expected = if i == j {
                    Cyclotomic::from_integer((g.order() / g.class_sizes()[i]) as i64)
                } else {
                    Cyclotomic::zero()
                };
                assert_eq!(acc.finish(), expected, "{name} columns {i},{j}");
            }
        }
        assert_eq!(t.degrees().iter().map(|d| d * d).sum::<usize>(), g.order());
    }
    // Frobenius reciprocity sweep and float-oracle agreement at orders <= 24
    let mut reciprocity_checks = 0;
    for name in standard_small_names() {
        let g = catalog(name).unwrap();
        let t = character_table(&g).unwrap();
        for class in wreathcheck_core::lattice::subgroup_classes(&g, LIMITS.subgroup_limit).unwrap()
        {
            let emb = class.representative.as_group().unwrap();
            for lam in wreathcheck_core::chartab::linear_characters(&emb).unwrap() {
                let ind = wreathcheck_core::chartab::induce(&lam, &emb, &g).unwrap();
                for chi in t.irreducibles() {
                    let lhs = inner_product(&ind, chi).unwrap();
                    let rhs = inner_product(&lam, &restrict(chi, &emb).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{name}");
                    reciprocity_checks += 1;
                }
            }
        }
        // numeric cross-check against the eigendecomposition oracle
        let float = oracle::float_character_table(&g);
        let mut used = vec![false; float.len()];
        for chi in t.irreducibles() {
            let row: Vec<_> = chi.values().iter().map(Cyclotomic::to_complex).collect();
            let (best, dist) = float
                .iter()
                .enumerate()
                .map(|(k, f)| {
                    let d = f
                        .iter()
                        .zip(&row)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0f64, f64::max);
                    (k, d)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < 1e-6, "{name}: {dist}");
            assert!(!used[best]);
            used[best] = true;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 09: PASS - orthogonality on {} groups, {reciprocity_checks} reciprocity checks, float oracle within 1e-6 ({elapsed:?})",
        names.len()
    );
}

#[test]
fn criterion_10_hypothesis_checkers_and_search() {
    let start = Instant::now();
    // separation hypothesis on D10 wr C2
    let analysis = wreath_analysis("D10", 2);
    let d10 = catalog("D10").unwrap();
    let ctx_a = SearchContext::build(&d10, &LIMITS).unwrap();
    let main_report = check_main_hypothesis(analysis, &ctx_a, &D10_W_CTX).unwrap();
    main_report.validate().unwrap();
    assert!(main_report.overall, "main hypothesis holds on D10 wr C2");
    let conc = main_report.conclusion.as_ref().unwrap();
    assert!(conc.premise_holds && conc.conclusion_holds == Some(true) && conc.consistent);

    // factor-monomiality hypothesis on S3 wr C2
    let s3_analysis = wreath_analysis("S3", 2);
    let s3 = catalog("S3").unwrap();
    let ctx_s3 = SearchContext::build(&s3, &LIMITS).unwrap();
    let factor_report = check_factor_monomiality_hypothesis(s3_analysis, &ctx_s3, || {
        SearchContext::from_table(s3_analysis.table.clone(), &LIMITS)
    })
    .unwrap();
    factor_report.validate().unwrap();
    assert!(factor_report.overall, "factor-monomiality hypothesis holds on S3 wr C2");
    let conc = factor_report.conclusion.as_ref().unwrap();
    assert!(conc.premise_holds && conc.conclusion_holds == Some(true) && conc.consistent);

    // library-level survey, then the CLI exit code
    let bases: Vec<(String, Arc<FiniteGroup>)> = ["C2", "C3", "C4", "S3", "D10"]
        .iter()
        .map(|n| (n.to_string(), catalog(n).unwrap()))
        .collect();
    let survey = counterexample_search(&bases, &[2], &LIMITS).unwrap();
    assert!(!survey.counterexample_found);
    assert!(survey.entries.iter().all(|e| e.w_almost_monomial == Some(true)));

    let (_, code) = execute(&cli(Command::Search {
        catalog: vec!["C2".into(), "C3".into(), "C4".into(), "S3".into(), "D10".into()],
        primes: vec![2],
    }))
    .unwrap();
    assert_eq!(code, 0, "search exits 0 when no counterexample is found");
    let elapsed = start.elapsed();
    println!("criterion 10: PASS - hypothesis checkers hold, survey clean, exit 0 ({elapsed:?})");
}
