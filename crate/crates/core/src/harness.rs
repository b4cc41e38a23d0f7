//! Verification campaigns and seeded sampling.
//!
//! Campaigns fan instance checks out to a rayon pool and reassemble the
//! results in instance order, so a report depends only on its parameters
//! (apart from `elapsed_ms`).

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::constructive_hamilton_path;
use crate::error::{Error, Result};
use crate::families::{
    certify_no_thc, classify, family_degree_bound, generate_family, generate_h_s_t, ExtremalTag, FamilyParams,
};
use crate::graph::{Graph, GraphCollection, MAX_COLORS, MAX_VERTICES};
use crate::solver::{
    find_transversal_hamilton_cycle, find_transversal_hamilton_path, permutation_oracle, WalkKind, ORACLE_MAX_N,
};
use crate::tgc::serialize_tgc;

/// Name of the random model recorded in reports.
pub const SAMPLING_MODEL: &str = "gnp-half-with-degree-repair";

pub const SAMPLE_MAX_N: usize = 10;
pub const FAMILIES_MAX_N: usize = 12;

/// `m` graphs, each `G(n, 1/2)` followed by repair: while some vertex has
/// degree below `min_deg`, the lowest such vertex gains a uniformly random
/// missing edge.
pub fn sample_collection(n: usize, m: usize, min_deg: usize, seed: u64) -> Result<GraphCollection> {
    sample_with(n, m, min_deg, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Instance `index` of a campaign seeded with `seed`; each index draws from
/// its own ChaCha stream.
pub fn sample_instance(n: usize, m: usize, min_deg: usize, seed: u64, index: usize) -> Result<GraphCollection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    sample_with(n, m, min_deg, &mut rng)
}

fn sample_with(n: usize, m: usize, min_deg: usize, rng: &mut ChaCha8Rng) -> Result<GraphCollection> {
    if n > MAX_VERTICES || m > MAX_COLORS {
        return Err(Error::TooLarge {
            what: "sample dimensions",
            limit: MAX_VERTICES,
        });
    }
    if min_deg > 0 && min_deg >= n {
        return Err(Error::pre(format!(
            "minimum degree {min_deg} is infeasible on {n} vertices"
        )));
    }
    let graphs = (0..m)
        .map(|_| {
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            while let Some(u) = (0..n).find(|&u| g.degree(u) < min_deg) {
                let missing: Vec<usize> = (0..n).filter(|&v| v != u && !g.has_edge(u, v)).collect();
                g.add_edge(u, missing[rng.gen_range(0..missing.len())]);
            }
            g
        })
        .collect();
    GraphCollection::new(n, graphs)
}

/// Worker pool size; `0` uses rayon's default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub threads: usize,
}

impl RunConfig {
    pub fn sequential() -> Self {
        RunConfig { threads: 1 }
    }

    fn run<T: Send>(&self, jobs: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::pre(format!("worker pool: {e}")))?;
        Ok(pool.install(|| (0..jobs).into_par_iter().map(&f).collect()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub n: Vec<usize>,
    pub mode: String,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub min_degree: Option<usize>,
    pub target: Option<String>,
    pub model: Option<String>,
}

/// Instance whose verdict contradicts the checked claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub index: usize,
    pub n: usize,
    pub reason: String,
    pub tgc: String,
}

/// Absent collection that the classifier could not place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Anomaly {
    pub index: usize,
    /// Whether the permutation oracle also finds no cycle; `None` above its
    /// size bound.
    pub oracle_confirms_absence: Option<bool>,
    pub tgc: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyOutcome {
    pub family: String,
    pub n: usize,
    pub min_degree: usize,
    pub degree_bound: usize,
    pub classified_as: String,
    pub certified: bool,
    /// Verdict the family should get: `false` for obstructed families,
    /// `true` for control collections.
    pub expect_present: bool,
    pub solver_present: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub parameters: Parameters,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
    pub families: Vec<FamilyOutcome>,
    pub tallies: BTreeMap<String, usize>,
    pub anomalies: Vec<Anomaly>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with `elapsed_ms` zeroed, for reproducibility checks.
    pub fn without_elapsed(&self) -> Self {
        VerificationReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem1Mode {
    /// Every ordered triple of 4-vertex graphs with minimum degree 2.
    Exhaustive,
    /// Seeded samples repaired to `min_degree`, which defaults to the
    /// hypothesis `ceil((n - 1) / 2)`.
    Sample {
        count: usize,
        seed: u64,
        min_degree: Option<usize>,
    },
}

enum Outcome {
    Skipped,
    Passed,
    Failed(Failure),
}

/// Checks that every collection of `n - 1` graphs with minimum degree at
/// least `ceil((n - 1) / 2)` has a transversal Hamilton path, found both by
/// the exhaustive solver and by the constructive pipeline.
pub fn verify_theorem1(n: usize, mode: Theorem1Mode) -> Result<VerificationReport> {
    verify_theorem1_with(n, mode, &RunConfig::default())
}

pub fn verify_theorem1_with(n: usize, mode: Theorem1Mode, run: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let hypothesis = (n.saturating_sub(1)).div_ceil(2);
    let (instances, parameters): (Vec<GraphCollection>, Parameters) = match mode {
        Theorem1Mode::Exhaustive => {
            if n != 4 {
                return Err(Error::pre("exhaustive mode is only defined at n = 4"));
            }
            let pool = graphs_with_min_degree(4, 2);
            let mut all = Vec::with_capacity(pool.len().pow(3));
            for a in &pool {
                for b in &pool {
                    for c in &pool {
                        all.push(GraphCollection::new(4, vec![a.clone(), b.clone(), c.clone()])?);
                    }
                }
            }
            let p = Parameters {
                n: vec![n],
                mode: "exhaustive".into(),
                seed: None,
                count: Some(all.len()),
                min_degree: Some(2),
                target: Some("hamilton-path".into()),
                model: None,
            };
            (all, p)
        }
        Theorem1Mode::Sample {
            count,
            seed,
            min_degree,
        } => {
            if !(2..=SAMPLE_MAX_N).contains(&n) {
                return Err(Error::pre(format!("sample mode needs 2 <= n <= {SAMPLE_MAX_N}")));
            }
            let d = min_degree.unwrap_or(hypothesis);
            let all = run
                .run(count, |i| sample_instance(n, n - 1, d, seed, i))?
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let p = Parameters {
                n: vec![n],
                mode: "sample".into(),
                seed: Some(seed),
                count: Some(count),
                min_degree: Some(d),
                target: Some("hamilton-path".into()),
                model: Some(SAMPLING_MODEL.into()),
            };
            (all, p)
        }
    };

    let outcomes = run.run(instances.len(), |i| {
        let c = &instances[i];
        if c.min_degree().unwrap_or(0) < hypothesis {
            return Outcome::Skipped;
        }
        let fail = |reason: &str| {
            Outcome::Failed(Failure {
                index: i,
                n,
                reason: reason.into(),
                tgc: serialize_tgc(c),
            })
        };
        match (find_transversal_hamilton_path(c), constructive_hamilton_path(c)) {
            (Ok(Some(_)), Ok(Some(w))) if w.is_transversal_in(c) => Outcome::Passed,
            (Ok(None), _) => fail("solver found no transversal Hamilton path"),
            (_, Ok(None)) => fail("constructive pipeline found no transversal Hamilton path"),
            (Ok(Some(_)), Ok(Some(_))) => fail("constructive pipeline returned an invalid path"),
            (Err(e), _) | (_, Err(e)) => fail(&e.to_string()),
        }
    })?;
    Ok(assemble("theorem1", parameters, outcomes, start))
}

fn assemble(campaign: &str, parameters: Parameters, outcomes: Vec<Outcome>, start: Instant) -> VerificationReport {
    let mut report = empty_report(campaign, parameters);
    for o in outcomes {
        match o {
            Outcome::Skipped => report.skipped += 1,
            Outcome::Passed => report.checked += 1,
            Outcome::Failed(f) => {
                report.checked += 1;
                report.failures.push(f);
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

fn empty_report(campaign: &str, parameters: Parameters) -> VerificationReport {
    VerificationReport {
        campaign: campaign.into(),
        parameters,
        checked: 0,
        skipped: 0,
        failures: Vec::new(),
        families: Vec::new(),
        tallies: BTreeMap::new(),
        anomalies: Vec::new(),
        elapsed_ms: 0,
    }
}

/// All labeled graphs on `n <= 6` vertices with minimum degree at least `d`,
/// in order of their edge bitmask.
pub fn graphs_with_min_degree(n: usize, d: usize) -> Vec<Graph> {
    assert!(n <= 6, "edge-subset enumeration is limited to 6 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            let mut g = Graph::empty(n);
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            g
        })
        .filter(|g| g.min_degree() >= d)
        .collect()
}

/// Generates every family at each `n`, checks its degree bound, its
/// certificate and solver absence. For cycles at even `n`, also runs the
/// control collections `H_{n-t}^t` with even `t >= 2`, which must have a
/// transversal Hamilton cycle.
pub fn verify_families(n_list: &[usize], target: WalkKind) -> Result<VerificationReport> {
    verify_families_with(n_list, target, &RunConfig::default())
}

pub fn verify_families_with(n_list: &[usize], target: WalkKind, run: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    if let Some(&n) = n_list.iter().find(|&&n| n > FAMILIES_MAX_N) {
        return Err(Error::pre(format!("n = {n} exceeds {FAMILIES_MAX_N}")));
    }
    enum Job {
        Family(ExtremalTag, usize),
        Control(usize, usize),
    }
    let mut jobs = Vec::new();
    for &n in n_list {
        jobs.extend(ExtremalTag::all_for(n, target).into_iter().map(|t| Job::Family(t, n)));
        if target == WalkKind::Cycle && n % 2 == 0 && n >= 4 {
            jobs.extend((2..=n).step_by(2).map(|t| Job::Control(n, t)));
        }
    }
    let present = |c: &GraphCollection| match target {
        WalkKind::Cycle => find_transversal_hamilton_cycle(c).map(|w| w.is_some()),
        WalkKind::Path => find_transversal_hamilton_path(c).map(|w| w.is_some()),
    };
    let results = run.run(jobs.len(), |i| -> Result<(FamilyOutcome, GraphCollection)> {
        let (name, n, c, bound, expect_present) = match jobs[i] {
            Job::Family(tag, n) => (
                tag.to_string(),
                n,
                generate_family(tag, n, FamilyParams::default())?,
                family_degree_bound(tag, n),
                false,
            ),
            Job::Control(n, t) => (
                format!("hst-control(t={t})"),
                n,
                generate_h_s_t(n, n - t, t)?,
                n.div_ceil(2) - 1,
                true,
            ),
        };
        let cls = classify(&c);
        let certified = !expect_present
            && certify_no_thc(&c, &cls)
                .ok()
                .flatten()
                .is_some_and(|cert| cert.verify(&c));
        let min_degree = c.min_degree()?;
        let solver_present = present(&c)?;
        let passed = min_degree >= bound
            && solver_present == expect_present
            && (expect_present || (certified && cls.tag.to_string() == name));
        let outcome = FamilyOutcome {
            family: name,
            n,
            min_degree,
            degree_bound: bound,
            classified_as: cls.tag.to_string(),
            certified,
            expect_present,
            solver_present,
            passed,
        };
        Ok((outcome, c))
    })?;

    let parameters = Parameters {
        n: n_list.to_vec(),
        mode: "families".into(),
        seed: None,
        count: None,
        min_degree: None,
        target: Some(target_name(target).into()),
        model: None,
    };
    let mut report = empty_report("families", parameters);
    for (i, r) in results.into_iter().enumerate() {
        let (outcome, c) = r?;
        report.checked += 1;
        if !outcome.passed {
            report.failures.push(Failure {
                index: i,
                n: outcome.n,
                reason: format!("{} failed its check", outcome.family),
                tgc: serialize_tgc(&c),
            });
        }
        report.families.push(outcome);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn target_name(kind: WalkKind) -> &'static str {
    match kind {
        WalkKind::Cycle => "hamilton-cycle",
        WalkKind::Path => "hamilton-path",
    }
}

/// Samples `count` collections of `n` graphs at minimum degree
/// `ceil(n/2 - 1)` and tallies: transversal Hamilton cycle present, absent
/// with a verified family certificate, or absent and unclassified (an
/// anomaly). Anomalies are re-checked with the permutation oracle when
/// `n` allows; an oracle that finds a cycle is a failure.
pub fn threshold_scan(n: usize, seed: u64, count: usize) -> Result<VerificationReport> {
    threshold_scan_with(n, seed, count, &RunConfig::default())
}

pub fn threshold_scan_with(n: usize, seed: u64, count: usize, run: &RunConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    if !(3..=SAMPLE_MAX_N).contains(&n) {
        return Err(Error::pre(format!("threshold scan needs 3 <= n <= {SAMPLE_MAX_N}")));
    }
    let d = n.div_ceil(2) - 1;
    enum Verdict {
        Present,
        Classified(String),
        Anomaly(Anomaly),
        Failed(Failure),
    }
    let verdicts = run.run(count, |i| -> Result<Verdict> {
        let c = sample_instance(n, n, d, seed, i)?;
        if find_transversal_hamilton_cycle(&c)?.is_some() {
            return Ok(Verdict::Present);
        }
        let cls = classify(&c);
        if let Ok(Some(cert)) = certify_no_thc(&c, &cls) {
            return Ok(Verdict::Classified(cert.class.tag.name().into()));
        }
        let oracle = if n <= ORACLE_MAX_N {
            Some(permutation_oracle(&c, WalkKind::Cycle)?.is_none())
        } else {
            None
        };
        if oracle == Some(false) {
            return Ok(Verdict::Failed(Failure {
                index: i,
                n,
                reason: "solver missed a cycle the oracle found".into(),
                tgc: serialize_tgc(&c),
            }));
        }
        Ok(Verdict::Anomaly(Anomaly {
            index: i,
            oracle_confirms_absence: oracle,
            tgc: serialize_tgc(&c),
        }))
    })?;

    let parameters = Parameters {
        n: vec![n],
        mode: "sample".into(),
        seed: Some(seed),
        count: Some(count),
        min_degree: Some(d),
        target: Some("hamilton-cycle".into()),
        model: Some(SAMPLING_MODEL.into()),
    };
    let mut report = empty_report("threshold", parameters);
    for key in ["present", "absent-classified", "anomaly"] {
        report.tallies.insert(key.into(), 0);
    }
    let bump = |report: &mut VerificationReport, key: &str| *report.tallies.entry(key.into()).or_insert(0) += 1;
    for v in verdicts {
        report.checked += 1;
        match v? {
            Verdict::Present => bump(&mut report, "present"),
            Verdict::Classified(tag) => {
                bump(&mut report, "absent-classified");
                bump(&mut report, &format!("family:{tag}"));
            }
            Verdict::Anomaly(a) => {
                bump(&mut report, "anomaly");
                report.anomalies.push(a);
            }
            Verdict::Failed(f) => report.failures.push(f),
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
