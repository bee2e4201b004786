use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use germlab_core::cartanlab::{self, GridModel, WeightFunction};
use germlab_core::convalg::{psi_map, reduced_norm, verify_reduced_iso};
use germlab_core::doc::{self, BundleDoc, DocError, ElementsDoc, NAMED_FIXTURES};
use germlab_core::fixtures::RandomParams;
use germlab_core::linebundle::round_trip;
use germlab_core::pipeline::{digest, run_pipeline, PipelineOptions, REPORT_VERSION};
use germlab_core::{FellBundle, GermGroupoid, LineBundle, RefPolicy};

/// Germ groupoids, line bundles and reduced algebras of finite Fell bundles.
#[derive(Parser)]
#[command(name = "germlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verification stage on a bundle document.
    Validate {
        bundle: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the germ table.
    Germs { bundle: PathBuf },
    /// Check Hausdorffness of the germ groupoid.
    Hausdorff {
        bundle: PathBuf,
        /// Exit with status 1 when the groupoid is not Hausdorff.
        #[arg(long)]
        require_hausdorff: bool,
    },
    /// Print references and structure constants of the line bundle.
    Linebundle { bundle: PathBuf },
    /// Reduced norms of elements of the convolution algebra.
    Norms {
        bundle: PathBuf,
        #[arg(long)]
        elements: PathBuf,
    },
    /// Check the Gelfand and reduced isomorphisms.
    VerifyIso {
        bundle: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rebuild a twisted groupoid from its section bundle and compare.
    RoundTrip { groupoid: PathBuf },
    /// Check the conditional expectation of the non-Hausdorff example.
    CartanExample {
        #[arg(long, default_value_t = 101)]
        n: usize,
        /// Piecewise-affine weight, e.g. "1-x/2" or "1 on [0,0]; 1/2 on (0,1]".
        #[arg(long, default_value = "1-x/2")]
        p: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a seeded random or named fixture document.
    GenFixture {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One of the built-in fixtures instead of a random one.
        #[arg(long)]
        named: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_elements: usize,
        #[arg(long, default_value_t = 16)]
        max_points: usize,
        #[arg(long, default_value_t = 4)]
        max_group: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    require_hausdorff: bool,
    #[arg(long, default_value_t = 100)]
    gelfand_samples: usize,
    #[arg(long, default_value_t = 200)]
    iso_samples: usize,
    #[arg(long, default_value_t = 101)]
    grid_n: usize,
    #[arg(long, default_value = "1-x/2")]
    weight: String,
}

/// An input problem (exit 2) as opposed to a verification failure.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Outcome = std::result::Result<bool, InputError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(report: Value) {
    write_stdout(&(serde_json::to_string_pretty(&report).expect("json") + "\n"));
}

fn input(e: DocError, path: &Path) -> InputError {
    InputError(anyhow!("{}: {e}", path.display()))
}

/// Loads a bundle; invalid mathematics is reported and yields `Err(None)`.
fn load_bundle(path: &Path) -> std::result::Result<(String, FellBundle), Option<InputError>> {
    let text = read(path).map_err(|e| Some(InputError(e)))?;
    let doc = BundleDoc::parse(&text).map_err(|e| Some(input(e, path)))?;
    match doc.bundle() {
        Ok(b) => Ok((text, b)),
        Err(e) if e.is_input_error() => Err(Some(input(e, path))),
        Err(e) => {
            emit(json!({ "report_version": REPORT_VERSION, "input": digest(&text), "passed": false, "error": e }));
            Err(None)
        }
    }
}

macro_rules! bundle {
    ($path:expr) => {
        match load_bundle($path) {
            Ok(v) => v,
            Err(Some(e)) => return Err(e),
            Err(None) => return Ok(false),
        }
    };
}

fn c(z: germlab_core::linalg::C64) -> Value {
    json!([z.re, z.im])
}

fn line_bundle(b: &FellBundle) -> std::result::Result<LineBundle, Value> {
    LineBundle::build(b, RefPolicy::First).map_err(|e| json!(e.to_string()))
}

fn germs(path: &Path) -> Outcome {
    let (text, b) = bundle!(path);
    let g = GermGroupoid::build(b.topological_action());
    let table: Vec<Value> = (0..g.len())
        .map(|p| {
            json!({
                "germ": g.germ_ref(p),
                "source": g.cell_label(g.source(p)),
                "range": g.cell_label(g.range(p)),
                "inverse": g.germ_ref(g.inverse(p)),
                "unit": g.is_unit(p),
            })
        })
        .collect();
    emit(json!({
        "report_version": REPORT_VERSION,
        "input": digest(&text),
        "cells": (0..g.cells().len()).map(|c| g.cell_label(c)).collect::<Vec<_>>(),
        "germs": table,
        "families": g.families(),
    }));
    Ok(true)
}

fn hausdorff(path: &Path, require: bool) -> Outcome {
    let (text, b) = bundle!(path);
    let h = GermGroupoid::build(b.topological_action()).hausdorff();
    emit(json!({
        "report_version": REPORT_VERSION,
        "input": digest(&text),
        "verdict": if h.hausdorff { "PASS" } else { "FAIL" },
        "hausdorff": h.hausdorff,
        "witness": h.witness,
        "non_separated": h.non_separated,
    }));
    Ok(h.hausdorff || !require)
}

fn linebundle(path: &Path) -> Outcome {
    let (text, b) = bundle!(path);
    let l = match line_bundle(&b) {
        Ok(l) => l,
        Err(e) => {
            emit(json!({ "report_version": REPORT_VERSION, "input": digest(&text), "passed": false, "error": e }));
            return Ok(false);
        }
    };
    let g = l.groupoid();
    let sg = b.semigroup();
    let references: Vec<Value> = (0..l.len())
        .map(|p| {
            let r = l.reference(p);
            json!({
                "germ": g.germ_ref(p),
                "element": sg.label(r.s),
                "value": c(b.value(r, g.germ(p).cell)),
                "norm": l.ref_norm(p),
            })
        })
        .collect();
    let mulc: Vec<Value> = l
        .composable()
        .iter()
        .map(|&(p, q, pq)| json!([g.germ_ref(p), g.germ_ref(q), g.germ_ref(pq), c(l.mulc(p, q).expect("composable"))]))
        .collect();
    let starc: Vec<Value> = (0..l.len()).map(|p| json!([g.germ_ref(p), c(l.starc(p))])).collect();
    let axioms = l.validate();
    emit(json!({
        "report_version": REPORT_VERSION,
        "input": digest(&text),
        "references": references,
        "mulc": mulc,
        "starc": starc,
        "axioms": axioms,
    }));
    Ok(axioms.passed)
}

fn norms(path: &Path, elements: &Path) -> Outcome {
    let (text, b) = bundle!(path);
    let etext = read(elements)?;
    let els = ElementsDoc::parse(&etext)
        .and_then(|d| d.build(&b))
        .map_err(|e| input(e, elements))?;
    let l = match line_bundle(&b) {
        Ok(l) => l,
        Err(e) => {
            emit(json!({ "report_version": REPORT_VERSION, "input": digest(&text), "passed": false, "error": e }));
            return Ok(false);
        }
    };
    let out: Vec<Value> = els
        .iter()
        .map(|(name, el)| {
            let r = reduced_norm(&l, &psi_map(&b, &l, el));
            let per_unit: serde_json::Map<String, Value> = r.per_unit.into_iter().map(|(x, v)| (x, json!(v))).collect();
            json!({ "element": name, "reduced_norm": r.norm, "per_unit": per_unit })
        })
        .collect();
    emit(json!({
        "report_version": REPORT_VERSION,
        "inputs": { "bundle": digest(&text), "elements": digest(&etext) },
        "norms": out,
    }));
    Ok(true)
}

fn verify_iso(path: &Path, samples: usize, seed: u64) -> Outcome {
    let (text, b) = bundle!(path);
    let l = match line_bundle(&b) {
        Ok(l) => l,
        Err(e) => {
            emit(json!({ "report_version": REPORT_VERSION, "input": digest(&text), "passed": false, "error": e }));
            return Ok(false);
        }
    };
    let gelfand = l.verify_gelfand_iso(&b, samples, seed);
    let reduced = verify_reduced_iso(&b, &l, samples, seed);
    let passed = gelfand.passed && reduced.as_ref().is_ok_and(|r| r.passed);
    emit(json!({
        "report_version": REPORT_VERSION,
        "input": digest(&text),
        "passed": passed,
        "gelfand": gelfand,
        "reduced": match &reduced {
            Ok(r) => json!(r),
            Err(e) => json!({ "passed": false, "error": e.to_string() }),
        },
    }));
    Ok(passed)
}

fn round_trip_cmd(path: &Path) -> Outcome {
    let text = read(path)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let doc = BundleDoc::parse(&text).map_err(|e| input(e, path))?;
    let t = match doc.twisted_groupoid(&name) {
        Ok(t) => t,
        Err(e) if e.is_input_error() => return Err(input(e, path)),
        Err(e) => {
            emit(json!({ "report_version": REPORT_VERSION, "input": digest(&text), "passed": false, "error": e }));
            return Ok(false);
        }
    };
    let (report, passed) = match round_trip(&t) {
        Ok(r) => (json!(r), r.passed),
        Err(e) => (json!({ "passed": false, "error": e.to_string() }), false),
    };
    emit(json!({ "report_version": REPORT_VERSION, "input": digest(&text), "round_trip": report }));
    Ok(passed)
}

fn cartan_example(n: usize, p: &str, samples: usize, seed: u64) -> Outcome {
    let gm = GridModel::new(n)?;
    let weight = WeightFunction::parse(p)?;
    let ex = cartanlab::build_interval_example(n);
    let h = ex.groupoid.hausdorff();
    let embeddings = cartanlab::verify_embeddings(&gm, &ex, samples, seed);
    let suite = cartanlab::verify_conditional_expectation(&gm, &weight, p, samples, seed)?;
    let passed = embeddings.passed && suite.passed;
    emit(json!({
        "report_version": REPORT_VERSION,
        "passed": passed,
        "hausdorff": h,
        "embeddings": embeddings,
        "expectation": suite,
    }));
    Ok(passed)
}

fn gen_fixture(
    seed: u64,
    named: Option<&str>,
    params: RandomParams,
    out: Option<&Path>,
) -> Outcome {
    let doc = match named {
        Some(name) => doc::named_fixture(name)
            .ok_or_else(|| anyhow!("unknown fixture `{name}`; expected one of {}", NAMED_FIXTURES.join(", ")))?,
        None => doc::seeded_random_fixture(seed, &params)?,
    };
    let text = doc.to_json();
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => write_stdout(&text),
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { bundle, run } => {
            let text = read(&bundle)?;
            let opts = PipelineOptions {
                seed: run.seed,
                gelfand_samples: run.gelfand_samples,
                iso_samples: run.iso_samples,
                grid_n: run.grid_n,
                weight: run.weight,
                require_hausdorff: run.require_hausdorff,
                ..Default::default()
            };
            let name = bundle.display().to_string();
            let report = run_pipeline(&name, &text, &opts).map_err(|e| input(e, &bundle))?;
            emit(serde_json::to_value(&report)?);
            Ok(report.passed)
        }
        Command::Germs { bundle } => germs(&bundle),
        Command::Hausdorff {
            bundle,
            require_hausdorff,
        } => hausdorff(&bundle, require_hausdorff),
        Command::Linebundle { bundle } => linebundle(&bundle),
        Command::Norms { bundle, elements } => norms(&bundle, &elements),
        Command::VerifyIso { bundle, samples, seed } => verify_iso(&bundle, samples, seed),
        Command::RoundTrip { groupoid } => round_trip_cmd(&groupoid),
        Command::CartanExample { n, p, samples, seed } => cartan_example(n, &p, samples, seed),
        Command::GenFixture {
            seed,
            named,
            max_elements,
            max_points,
            max_group,
            out,
        } => gen_fixture(
            seed,
            named.as_deref(),
            RandomParams {
                max_points,
                max_group,
                max_elements,
            },
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("germlab: {e:#}");
            ExitCode::from(2)
        }
    }
}
