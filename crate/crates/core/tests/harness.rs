use transversal::families::{certify, classify, ExtremalTag};
use transversal::harness::{
    sample_collection, threshold_scan, threshold_scan_with, verify_families, verify_families_with, verify_theorem1,
    verify_theorem1_with, RunConfig, Theorem1Mode, VerificationReport, SAMPLING_MODEL,
};
use transversal::solver::{find_transversal_hamilton_cycle, find_transversal_hamilton_path, permutation_oracle};
use transversal::tgc::parse_tgc;
use transversal::{Graph, WalkKind};

fn sample(count: usize, seed: u64) -> Theorem1Mode {
    Theorem1Mode::Sample {
        count,
        seed,
        min_degree: None,
    }
}

fn well_formed(r: &VerificationReport) {
    assert!(r.failures.len() <= r.checked);
    for f in &r.failures {
        parse_tgc(&f.tgc).unwrap();
    }
}

#[test]
fn sample_examples() {
    let c = sample_collection(4, 3, 2, 7).unwrap();
    assert!(c.min_degree().unwrap() >= 2);
    assert!(sample_collection(6, 6, 5, 1234)
        .unwrap()
        .graphs()
        .iter()
        .all(|g| *g == Graph::complete(6)));
    assert_eq!(
        sample_collection(9, 8, 3, 5).unwrap(),
        sample_collection(9, 8, 3, 5).unwrap()
    );
    assert_ne!(
        sample_collection(9, 8, 3, 5).unwrap(),
        sample_collection(9, 8, 3, 6).unwrap()
    );
    assert!(sample_collection(5, 2, 5, 0).is_err());
}

#[test]
fn theorem1_exhaustive_at_four() {
    let r = verify_theorem1(4, Theorem1Mode::Exhaustive).unwrap();
    assert_eq!((r.checked, r.skipped, r.failures.len()), (1000, 0, 0));
    assert!(verify_theorem1(5, Theorem1Mode::Exhaustive).is_err());
}

#[test]
fn theorem1_sampled_at_seven() {
    let r = verify_theorem1(7, sample(2000, 42)).unwrap();
    well_formed(&r);
    assert_eq!((r.checked, r.failures.len()), (2000, 0));
    assert_eq!(r.parameters.model.as_deref(), Some(SAMPLING_MODEL));
    assert!(verify_theorem1(11, sample(1, 0)).is_err());
}

#[test]
fn theorem1_below_the_hypothesis_is_skipped() {
    let r = verify_theorem1(
        5,
        Theorem1Mode::Sample {
            count: 200,
            seed: 1,
            min_degree: Some(1),
        },
    )
    .unwrap();
    assert!(r.skipped > 0);
    assert_eq!(r.checked + r.skipped, 200);
    assert!(r.failures.is_empty());
}

#[test]
fn families_pass_with_their_control_group() {
    let odd = verify_families(&[5, 7], WalkKind::Cycle).unwrap();
    assert!(odd.passed());
    assert!(odd.families.iter().all(|f| f.passed && !f.solver_present));

    let even = verify_families(&[6, 8], WalkKind::Cycle).unwrap();
    assert!(even.passed(), "{:#?}", even.failures);
    for shape in ["no-r2m-fig1a", "no-r2m-fig1b"] {
        assert_eq!(even.families.iter().filter(|f| f.family == shape).count(), 2);
    }
    let controls: Vec<_> = even.families.iter().filter(|f| f.expect_present).collect();
    assert_eq!(controls.len(), 3 + 4);
    assert!(controls.iter().all(|f| f.solver_present));

    let paths = verify_families(&[6, 7], WalkKind::Path).unwrap();
    assert!(paths.passed());
    assert_eq!(paths.checked, 4);
    assert!(verify_families(&[13], WalkKind::Cycle).is_err());
}

#[test]
fn threshold_anomalies_are_confirmed_by_the_oracle() {
    let r = threshold_scan(8, 42, 5000).unwrap();
    well_formed(&r);
    assert_eq!(r.checked, 5000);
    assert!(r.failures.is_empty());
    let tally = |k: &str| r.tallies[k];
    assert_eq!(tally("present") + tally("absent-classified") + tally("anomaly"), 5000);
    assert_eq!(tally("anomaly"), r.anomalies.len());
    for a in &r.anomalies {
        assert_eq!(a.oracle_confirms_absence, Some(true));
        let c = parse_tgc(&a.tgc).unwrap();
        assert!(permutation_oracle(&c, WalkKind::Cycle).unwrap().is_none());
    }
}

#[test]
fn recorded_instances_reproduce_their_verdicts() {
    // At n = 4 the classifier has no families beyond the parity one, so
    // sparse samples produce anomalies.
    let r = threshold_scan(4, 1, 100).unwrap();
    assert_eq!(r.checked, 100);
    assert!(!r.anomalies.is_empty());
    for a in &r.anomalies {
        let c = parse_tgc(&a.tgc).unwrap();
        assert!(find_transversal_hamilton_cycle(&c).unwrap().is_none());
        assert!(certify(&c).is_none());
        assert_eq!(a.oracle_confirms_absence, Some(true));
    }
    let classified = threshold_scan(6, 3, 3000).unwrap();
    assert!(classified.passed());
    let empty = threshold_scan(9, 7, 0).unwrap();
    assert_eq!((empty.checked, empty.failures.len()), (0, 0));
    assert!(threshold_scan(11, 0, 1).is_err());
}

#[test]
fn reports_are_reproducible() {
    let runs = [
        || verify_theorem1(6, sample(300, 9)).unwrap(),
        || verify_families(&[6, 7], WalkKind::Cycle).unwrap(),
        || threshold_scan(5, 11, 300).unwrap(),
    ];
    for run in runs {
        let (a, b) = (run().without_elapsed(), run().without_elapsed());
        assert_eq!(a.to_json(), b.to_json());
    }
}

#[test]
fn sharding_matches_sequential_runs() {
    let seq = RunConfig::sequential();
    let wide = RunConfig { threads: 4 };
    let t1 = |cfg| verify_theorem1_with(7, sample(400, 3), cfg).unwrap().without_elapsed();
    assert_eq!(t1(&seq), t1(&wide));
    let fam = |cfg| {
        verify_families_with(&[5, 6, 7, 8], WalkKind::Cycle, cfg)
            .unwrap()
            .without_elapsed()
    };
    assert_eq!(fam(&seq), fam(&wide));
    let th = |cfg| threshold_scan_with(4, 5, 400, cfg).unwrap().without_elapsed();
    assert_eq!(th(&seq), th(&wide));
}

#[test]
fn report_keys_come_in_a_fixed_order() {
    let json = verify_theorem1(4, Theorem1Mode::Exhaustive).unwrap().to_json();
    let keys = [
        "\"campaign\"",
        "\"parameters\"",
        "\"checked\"",
        "\"skipped\"",
        "\"failures\"",
        "\"families\"",
        "\"tallies\"",
        "\"anomalies\"",
        "\"elapsed_ms\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sampled_theorem1_paths_exist_at_every_size() {
    for n in 2..=10 {
        let r = verify_theorem1(n, sample(100, n as u64)).unwrap();
        assert_eq!((r.checked, r.failures.len()), (100, 0), "n = {n}");
    }
    // A sampled instance is also directly solvable through the API.
    let c = sample_collection(10, 9, 5, 3).unwrap();
    assert!(find_transversal_hamilton_path(&c).unwrap().is_some());
    assert_eq!(classify(&c).tag, ExtremalTag::Unknown);
}
