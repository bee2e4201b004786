//! End-to-end verification of one bundle document.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cartanlab::{self, GridModel, WeightFunction};
use crate::convalg::{kernel_equals_ideal, verify_reduced_iso, UnitExpectation};
use crate::doc::{BundleDoc, DocError};
use crate::germgpd::{map_s_to_os_injective, GermGroupoid};
use crate::linebundle::{LineBundle, RefPolicy, Twist};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOptions {
    pub seed: u64,
    pub gelfand_samples: usize,
    pub iso_samples: usize,
    pub expectation_samples: usize,
    /// Grid size and weight for the non-Hausdorff example's expectation.
    pub grid_n: usize,
    pub weight: String,
    pub require_hausdorff: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            gelfand_samples: 100,
            iso_samples: 200,
            expectation_samples: 100,
            grid_n: 101,
            weight: "1-x/2".into(),
            require_hausdorff: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub name: String,
    pub verdict: Verdict,
    /// A failing informational stage does not fail the pipeline.
    pub informational: bool,
    pub witnesses: Vec<Value>,
    pub details: Value,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub report_version: u32,
    /// SHA-256 of each input document.
    pub inputs: BTreeMap<String, String>,
    pub options: PipelineOptions,
    pub stages: Vec<StageReport>,
    /// The structural failure that ended the run early.
    pub stopped_at: Option<String>,
    pub passed: bool,
}

impl PipelineReport {
    pub fn stage(&self, name: &str) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for s in &mut r.stages {
            s.timings.ms = 0.0;
        }
        r
    }
}

pub fn digest(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

struct Run {
    stages: Vec<StageReport>,
    clock: Instant,
}

impl Run {
    fn push(&mut self, name: &str, pass: bool, informational: bool, witnesses: Vec<Value>, details: Value) {
        let mut witnesses = witnesses;
        if !pass && witnesses.is_empty() {
            witnesses.push(details.clone());
        }
        self.stages.push(StageReport {
            name: name.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            informational,
            witnesses,
            details,
            timings: Timings {
                ms: self.clock.elapsed().as_secs_f64() * 1e3,
            },
        });
        self.clock = Instant::now();
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn some(v: Option<impl Serialize>) -> Vec<Value> {
    v.into_iter().map(to_value).collect()
}

/// Parses `text` and runs validate, germs, hausdorff, linebundle, gelfand,
/// then kernel and reduced-iso for discrete actions, and an expectation
/// stage where one applies. Only malformed input is an error; everything
/// else is reported.
pub fn run_pipeline(name: &str, text: &str, opts: &PipelineOptions) -> Result<PipelineReport, DocError> {
    let doc = BundleDoc::parse(text)?;
    let mut run = Run {
        stages: Vec::new(),
        clock: Instant::now(),
    };
    let stopped_at = stages(&doc, opts, &mut run)?;
    let passed = run
        .stages
        .iter()
        .all(|s| s.verdict == Verdict::Pass || s.informational);
    Ok(PipelineReport {
        report_version: REPORT_VERSION,
        inputs: [(name.to_string(), digest(text))].into(),
        options: opts.clone(),
        stages: run.stages,
        stopped_at,
        passed,
    })
}

fn stages(doc: &BundleDoc, opts: &PipelineOptions, run: &mut Run) -> Result<Option<String>, DocError> {
    let b = match doc.bundle() {
        Ok(b) => b,
        Err(e) if e.is_input_error() => return Err(e),
        Err(e) => {
            run.push("validate", false, false, vec![to_value(&e)], json!({ "error": e.to_string() }));
            return Ok(Some("validate".into()));
        }
    };
    let axioms = b.validate_axioms_with(opts.seed, 32);
    let saturation = b.saturation();
    let semi_abelian = b.semi_abelian_witness();
    let ok = axioms.passed && saturation.saturated && semi_abelian.is_none();
    let mut w = some(axioms.violation.as_ref());
    w.extend(some(saturation.witness.map(|(s, t, x)| json!({ "unsaturated": [s, t, x] }))));
    w.extend(some(semi_abelian.map(|(s, t, x)| json!({ "noncommuting": [s, t, x] }))));
    run.push(
        "validate",
        ok,
        false,
        w,
        json!({
            "kind": b.kind(),
            "semigroup_size": b.semigroup().len(),
            "points": b.npoints(),
            "axioms": axioms,
            "saturation": saturation,
            "semi_abelian": semi_abelian.is_none(),
        }),
    );
    if !ok {
        return Ok(Some("validate".into()));
    }

    let g = GermGroupoid::build(b.topological_action());
    let inj = map_s_to_os_injective(&b);
    run.push(
        "germs",
        !inj.fatal,
        false,
        some(inj.witness.as_ref().filter(|_| inj.fatal)),
        json!({
            "germs": g.len(),
            "units": g.unit_cells().len(),
            "cells": g.cells().len(),
            "empty_groupoid": g.is_empty(),
            "injectivity": inj,
        }),
    );

    let h = g.hausdorff();
    run.push(
        "hausdorff",
        h.hausdorff,
        !opts.require_hausdorff,
        some(h.witness.as_ref()),
        to_value(&h),
    );

    let l = match LineBundle::build(&b, RefPolicy::First) {
        Ok(l) => l,
        Err(e) => {
            run.push("linebundle", false, false, vec![json!(e.to_string())], json!({ "error": e.to_string() }));
            return Ok(Some("linebundle".into()));
        }
    };
    let axioms = l.validate();
    let twist = Twist::from_line_bundle(&l).verify(&l);
    let twist_ok = twist.unimodular && twist.associative && twist.free && twist.exact;
    let mut w = some(axioms.failure.as_ref());
    w.extend(some(twist.witness.as_ref().filter(|_| !twist_ok)));
    run.push(
        "linebundle",
        axioms.passed && twist_ok,
        false,
        w,
        json!({ "germs": l.len(), "axioms": axioms, "twist": twist }),
    );

    let gel = l.verify_gelfand_iso(&b, opts.gelfand_samples, opts.seed);
    run.push("gelfand", gel.passed, false, some(gel.failure.as_ref()), to_value(&gel));

    if b.symbolic_action().is_none() {
        match kernel_equals_ideal(&b, &l) {
            Ok(k) => run.push("kernel", k.passed, false, some(k.witness.as_ref()), to_value(&k)),
            Err(e) => run.push("kernel", false, false, vec![json!(e.to_string())], json!({ "error": e.to_string() })),
        }
        match verify_reduced_iso(&b, &l, opts.iso_samples, opts.seed) {
            Ok(r) => run.push("reduced-iso", r.passed, false, some(r.failure.as_ref()), to_value(&r)),
            Err(e) => run.push("reduced-iso", false, false, vec![json!(e.to_string())], json!({ "error": e.to_string() })),
        }
    }

    if h.hausdorff {
        let e = UnitExpectation::new(&b, &l).expect("groupoid is Hausdorff");
        let r = e.verify(opts.expectation_samples, opts.seed);
        run.push("expectation", r.passed, false, some(r.witness.as_ref()), to_value(&r));
    } else if cartanlab::is_interval_action(b.topological_action()) {
        let suite = GridModel::new(opts.grid_n).and_then(|gm| {
            let p = WeightFunction::parse(&opts.weight)?;
            cartanlab::verify_conditional_expectation(&gm, &p, &opts.weight, opts.expectation_samples, opts.seed)
        });
        match suite {
            Ok(s) => run.push("expectation", s.passed, false, some(s.witness.as_ref()), to_value(&s)),
            Err(e) => run.push("expectation", false, false, vec![json!(e.to_string())], json!({ "error": e.to_string() })),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{named_fixture, seeded_random_fixture};
    use crate::fixtures::RandomParams;

    fn run(name: &str) -> PipelineReport {
        let text = named_fixture(name).unwrap().to_json();
        run_pipeline(name, &text, &PipelineOptions::default()).unwrap()
    }

    fn names(r: &PipelineReport) -> Vec<&str> {
        r.stages.iter().map(|s| s.name.as_str()).collect()
    }

    #[test]
    fn zero_bundle_passes_with_empty_groupoid() {
        let r = run("zero-bundle");
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.stage("germs").unwrap().details["empty_groupoid"], json!(true));
        assert_eq!(r.stage("germs").unwrap().details["germs"], json!(0));
    }

    #[test]
    fn interval_example_fails_hausdorff_informationally() {
        let r = run("interval-example");
        assert!(r.passed, "{r:#?}");
        let h = r.stage("hausdorff").unwrap();
        assert_eq!(h.verdict, Verdict::Fail);
        assert!(h.informational);
        assert_eq!(h.witnesses, vec![json!([["1", "0"], ["σ", "0"]])]);
        assert_eq!(r.stage("expectation").unwrap().verdict, Verdict::Pass);
        assert_eq!(names(&r), ["validate", "germs", "hausdorff", "linebundle", "gelfand", "expectation"]);

        let strict = PipelineOptions {
            require_hausdorff: true,
            ..Default::default()
        };
        let text = named_fixture("interval-example").unwrap().to_json();
        assert!(!run_pipeline("interval-example", &text, &strict).unwrap().passed);
    }

    #[test]
    fn flip_passes_every_stage() {
        let r = run("z2-flip");
        assert!(r.passed);
        assert_eq!(
            names(&r),
            ["validate", "germs", "hausdorff", "linebundle", "gelfand", "kernel", "reduced-iso", "expectation"]
        );
        assert!(r.stages.iter().all(|s| s.verdict == Verdict::Pass));
        assert!(r.inputs["z2-flip"].starts_with("sha256:"));
    }

    #[test]
    fn groupoid_documents_run_the_discrete_stages() {
        let r = run("z4-groupoid");
        assert!(r.passed, "{r:#?}");
        assert!(r.stage("reduced-iso").is_some());
    }

    #[test]
    fn reports_are_stable_modulo_timings() {
        let text = seeded_random_fixture(3, &RandomParams::acceptance()).unwrap().to_json();
        let opts = PipelineOptions::default();
        let a = run_pipeline("r", &text, &opts).unwrap();
        let b = run_pipeline("r", &text, &opts).unwrap();
        assert!(a.passed);
        assert_eq!(a.without_timings(), b.without_timings());
    }

    #[test]
    fn invalid_cocycles_stop_at_validate() {
        let text = named_fixture("z2-flip")
            .unwrap()
            .to_json()
            .replacen("\"kind\": \"twisted_action\",", "\"kind\": \"twisted_action\", \"omega\": {\"(g1,g1)\": [2.0, 0.0]},", 1);
        let r = run_pipeline("bad", &text, &PipelineOptions::default()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.stopped_at.as_deref(), Some("validate"));
        assert!(!r.stages[0].witnesses.is_empty());
        assert!(run_pipeline("bad", "{", &PipelineOptions::default()).is_err());
    }

    #[test]
    fn seed_zero_two_points_is_accepted() {
        let p = RandomParams {
            max_points: 2,
            ..RandomParams::small()
        };
        let text = seeded_random_fixture(0, &p).unwrap().to_json();
        assert!(run_pipeline("seed0", &text, &PipelineOptions::default()).unwrap().passed);
    }
}
