//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use germlab_core::cartanlab::{verify_conditional_expectation, GridModel, WeightFunction};
use germlab_core::convalg::{kernel_equals_ideal, reduced_algebra_structure, verify_reduced_iso, CcAlgebra};
use germlab_core::fellbundle::{compile_groupoid, Axiom, BundleError};
use germlab_core::fixtures::{self, RandomParams};
use germlab_core::germgpd::{map_s_to_os_injective, GermRef};
use germlab_core::linalg::{circle, C64};
use germlab_core::linebundle::{round_trip, Twist};
use germlab_core::{FellBundle, GermGroupoid, LineBundle, RefPolicy};

const GELFAND_TOL: f64 = 1e-12;
const COEFFICIENT_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-9;
const EXPECTATION_TOL: f64 = 1e-12;

type Verdict = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture_set(n: u64) -> Vec<(String, FellBundle)> {
    let mut v = vec![
        ("z2-flip".to_string(), fixtures::z2_flip()),
        ("semilattice".to_string(), fixtures::semilattice()),
    ];
    let p = RandomParams::acceptance();
    v.extend((0..n).map(|seed| (format!("random-{seed}"), fixtures::random_bundle(seed, &p))));
    v
}

fn line(b: &FellBundle, name: &str) -> Result<LineBundle, String> {
    LineBundle::build(b, RefPolicy::First).map_err(|e| format!("{name}: {e}"))
}

fn hausdorff_witness() -> Verdict {
    let clock = Instant::now();
    let g = GermGroupoid::build(&fixtures::interval_action());
    let h = g.hausdorff();
    let elapsed = clock.elapsed();
    let expected = (GermRef("1".into(), "0".into()), GermRef("σ".into(), "0".into()));
    check!(!h.hausdorff, "groupoid reported Hausdorff");
    check!(h.witness.as_ref() == Some(&expected), "witness {:?}", h.witness);
    let orbit: BTreeSet<(String, String)> = h
        .non_separated
        .iter()
        .map(|(a, b)| {
            let (a, b) = (a.0.clone(), b.0.clone());
            if a <= b { (a, b) } else { (b, a) }
        })
        .collect();
    check!(orbit.len() == 1, "non-separated pairs {:?}", h.non_separated);
    check!(
        h.non_separated.iter().all(|(a, b)| a.1 == "0" && b.1 == "0"),
        "non-separated pair away from 0: {:?}",
        h.non_separated
    );
    check!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    Ok(format!("witness ([1,0],[σ,0]), {} germs, {:.1} ms", g.len(), elapsed.as_secs_f64() * 1e3))
}

fn conditional_expectation() -> Verdict {
    let clock = Instant::now();
    let gm = GridModel::new(101).map_err(|e| e.to_string())?;
    let p = WeightFunction::parse("1-x/2").map_err(|e| e.to_string())?;
    let s = verify_conditional_expectation(&gm, &p, "1-x/2", 100, 0).map_err(|e| e.to_string())?;
    check!(s.idempotent, "E not idempotent: {:?}", s.witness);
    check!(s.contractive && s.positive && s.bimodular, "E fails at {EXPECTATION_TOL:e}: {:?}", s.witness);
    check!(s.faithful && s.random_samples == 100, "E not faithful: {:?}", s.witness);
    check!(s.passed, "suite failed: {:?}", s.witness);
    let one = WeightFunction::parse("1").map_err(|e| e.to_string())?;
    let t = verify_conditional_expectation(&gm, &one, "1", 100, 0).map_err(|e| e.to_string())?;
    check!(!t.faithful, "p = 1 reported faithful");
    let witness = t.witness.unwrap_or_default();
    check!(witness.contains("upper level"), "p = 1 witness {witness:?}");
    let elapsed = clock.elapsed();
    check!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    Ok(format!("n = 101, p = 1 fails: {witness}, {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn gelfand() -> Verdict {
    let clock = Instant::now();
    let set = fixture_set(50);
    let mut checks = 0;
    for (name, b) in &set {
        let l = line(b, name)?;
        let r = l.verify_gelfand_iso(b, 100, 0);
        check!(r.passed, "{name}: {:?}", r.failure);
        checks += r.checks;
    }
    let elapsed = clock.elapsed();
    check!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    Ok(format!(
        "{} fixtures, {checks} checks at {GELFAND_TOL:e}, {:.2} s",
        set.len(),
        elapsed.as_secs_f64()
    ))
}

fn reduced_iso() -> Verdict {
    let set = fixture_set(50);
    let (mut coeff, mut norm) = (0.0f64, 0.0f64);
    for (name, b) in &set {
        let l = line(b, name)?;
        let r = verify_reduced_iso(b, &l, 200, 0).map_err(|e| format!("{name}: {e}"))?;
        check!(r.passed, "{name}: {:?}", r.failure);
        check!(r.norm_samples == 200, "{name}: {} norm samples", r.norm_samples);
        check!(r.max_coefficient_error <= COEFFICIENT_TOL, "{name}: coefficient error {:e}", r.max_coefficient_error);
        check!(r.max_norm_error <= NORM_TOL, "{name}: norm error {:e}", r.max_norm_error);
        coeff = coeff.max(r.max_coefficient_error);
        norm = norm.max(r.max_norm_error);
    }
    let flip = fixtures::z2_flip();
    let s = reduced_algebra_structure(&line(&flip, "z2-flip")?);
    check!(s.dim == 4 && s.center_dim == 1, "flip reduced algebra {s:?}");
    Ok(format!(
        "{} fixtures, max coefficient error {coeff:.1e}, max norm error {norm:.1e}, flip dim 4 center 1",
        set.len()
    ))
}

fn kernel() -> Verdict {
    let mut set = fixture_set(25);
    set.swap(0, 1);
    let mut semilattice_kernel = None;
    for (name, b) in &set {
        let l = line(b, name)?;
        let r = kernel_equals_ideal(b, &l).map_err(|e| format!("{name}: {e}"))?;
        check!(r.passed, "{name}: {r:?}");
        check!(r.dim_kernel == r.dim_ideal, "{name}: dim ker {} vs ideal {}", r.dim_kernel, r.dim_ideal);
        if name == "semilattice" {
            semilattice_kernel = Some(r.dim_kernel);
        }
    }
    check!(semilattice_kernel == Some(1), "semilattice dim ker {semilattice_kernel:?}");
    Ok(format!("{} fixtures, semilattice dim ker = 1", set.len()))
}

fn round_trips() -> Verdict {
    let fixtures = fixtures::twisted_groupoids();
    check!(fixtures.len() == 10, "{} fixtures", fixtures.len());
    for t in &fixtures {
        let r = round_trip(t).map_err(|e| format!("{}: {e}", t.name))?;
        check!(r.passed, "{}: {:?}", t.name, r.witness);
        check!(r.germs == r.arrows, "{}: {} germs for {} arrows", t.name, r.germs, r.arrows);
        check!(r.equivariant && r.diagram_commutes, "{}: equivariance or diagram", t.name);
    }
    let z4 = fixtures.iter().find(|t| t.name == "z4-twisted").ok_or("no Z/4 fixture")?;
    let b = compile_groupoid(&z4.groupoid, &z4.cocycle, &z4.bissections)
        .map_err(|e| e.to_string())?
        .bundle;
    let l = line(&b, "z4-twisted")?;
    check!(!Twist::from_line_bundle(&l).verify(&l).trivial, "Z/4 twist came back trivial");
    Ok("10 twisted groupoids, Z/4 cocycle transported".into())
}

/// `ω(r,s)(θ_t x)·ω(rs,t)(x) = ω(s,t)(x)·ω(r,st)(x)` at one point.
fn cocycle_defect(b: &FellBundle, r: usize, s: usize, t: usize, x: usize) -> Option<f64> {
    let sg = b.semigroup();
    let (rs, st) = (sg.mul(r, s), sg.mul(s, t));
    let tx = b.theta_at(t, x)?;
    b.theta_at(st, x)?;
    b.theta_at(sg.mul(rs, t), x)?;
    let lhs = b.omega(r, s, tx) * b.omega(rs, t, x);
    let rhs = b.omega(s, t, x) * b.omega(r, st, x);
    Some((lhs - rhs).norm())
}

/// `(δ_s δ_t)* = δ_t* δ_s*` at `θ_{st} x`, from the raw cocycle values.
fn involution_defect(b: &FellBundle, s: usize, t: usize, x: usize) -> Option<f64> {
    let sg = b.semigroup();
    let st = sg.mul(s, t);
    let tx = b.theta_at(t, x)?;
    let y = b.theta_at(s, tx)?;
    let (ss, ts) = (sg.star(s), sg.star(t));
    let lhs = (b.omega(s, t, x) * b.omega(sg.star(st), st, x)).conj();
    let rhs = (b.omega(ts, t, x) * b.omega(ss, s, tx)).conj() * b.omega(ts, ss, y);
    Some((lhs - rhs).norm())
}

/// `δ_s** = δ_s` at `x`.
fn double_star_defect(b: &FellBundle, s: usize, x: usize) -> Option<f64> {
    let ss = b.semigroup().star(s);
    let y = b.theta_at(s, x)?;
    Some((b.omega(ss, s, x) - b.omega(s, ss, y)).norm())
}

fn violates_cocycle(b: &FellBundle) -> bool {
    let n = b.semigroup().len();
    (0..n).any(|r| {
        (0..n).any(|s| (0..n).any(|t| (0..b.npoints()).any(|x| cocycle_defect(b, r, s, t, x).is_some_and(|d| d > 1e-12))))
    })
}

fn pool(rng: &mut impl Rng) -> FellBundle {
    match rng.random_range(0..4) {
        0 => fixtures::z2_flip(),
        1 => fixtures::z4_cocycle(),
        2 => fixtures::semilattice(),
        _ => fixtures::random_bundle(rng.random_range(0..1000), &RandomParams::acceptance()),
    }
}

fn phase(rng: &mut impl Rng) -> C64 {
    circle(rng.random_range(0.05..0.95))
}

enum Mutation {
    Associativity,
    Denormalization,
    InclusionScale,
}

/// One rejected mutation: the validator and its witness.
fn mutate(seed: u64, kind: &Mutation) -> Result<Option<String>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let b = pool(&mut rng);
        let sg = b.semigroup().clone();
        let n = sg.len();
        match kind {
            Mutation::Associativity => {
                let (s, t) = (rng.random_range(0..n), rng.random_range(0..n));
                if sg.is_idempotent(s) || sg.is_idempotent(t) {
                    continue;
                }
                let pts: Vec<usize> = b.points_of(sg.mul(s, t)).collect();
                if pts.is_empty() {
                    continue;
                }
                let x = pts[rng.random_range(0..pts.len())];
                let m = b.clone().with_omega_entry(s, t, x, b.omega(s, t, x) * phase(&mut rng));
                if !violates_cocycle(&m) {
                    continue;
                }
                let report = m.validate_axioms_with(seed, 2);
                let v = report.violation.ok_or(format!("seed {seed}: cocycle break at ({s},{t},{x}) accepted"))?;
                let replay = match (&v.axiom, &v.elements[..]) {
                    (Axiom::Associativity, &[r, s2, t2]) => {
                        (0..m.npoints()).any(|z| cocycle_defect(&m, r, s2, t2, z).is_some_and(|d| d > 1e-12))
                    }
                    (Axiom::Involution, &[s2]) => {
                        (0..m.npoints()).any(|z| double_star_defect(&m, s2, z).is_some_and(|d| d > 1e-12))
                    }
                    (Axiom::Involution, &[s2, t2]) => {
                        (0..m.npoints()).any(|z| involution_defect(&m, s2, t2, z).is_some_and(|d| d > 1e-12))
                    }
                    _ => false,
                };
                if !replay {
                    return Err(format!("seed {seed}: witness {v:?} does not replay"));
                }
                let direct = germlab_core::FellBundle::twisted_action(m.action().clone(), |a, c, z| m.omega(a, c, z), 1);
                if !matches!(direct, Err(BundleError::CocycleNotAssociative { .. }) | Err(BundleError::CocycleNotNormalized { .. })) {
                    return Err(format!("seed {seed}: presentation check accepted the broken cocycle"));
                }
                return Ok(Some(format!("{:?}", v.axiom)));
            }
            Mutation::Denormalization => {
                let idem = sg.idempotents();
                let e = idem[rng.random_range(0..idem.len())];
                let t = rng.random_range(0..n);
                let (s, t) = if rng.random_bool(0.5) { (e, t) } else { (t, e) };
                let pts: Vec<usize> = b.points_of(sg.mul(s, t)).collect();
                if pts.is_empty() {
                    continue;
                }
                let x = pts[rng.random_range(0..pts.len())];
                let w = b.omega(s, t, x) * phase(&mut rng);
                let omega = |a: usize, c: usize, z: usize| if (a, c, z) == (s, t, x) { w } else { b.omega(a, c, z) };
                return match germlab_core::FellBundle::twisted_action(b.action().clone(), omega, 1) {
                    Err(BundleError::CocycleNotNormalized { s: ws, t: wt, x: wx }) => {
                        let replay = (sg.is_idempotent(ws) || sg.is_idempotent(wt)) && (omega(ws, wt, wx) - C64::new(1.0, 0.0)).norm() > 1e-12;
                        if replay {
                            Ok(Some("Normalization".into()))
                        } else {
                            Err(format!("seed {seed}: witness ({ws},{wt},{wx}) does not replay"))
                        }
                    }
                    Err(e) => Err(format!("seed {seed}: unexpected rejection {e}")),
                    Ok(_) => Err(format!("seed {seed}: denormalized cocycle accepted")),
                };
            }
            Mutation::InclusionScale => {
                let below: Vec<(usize, usize)> = (0..n)
                    .flat_map(|s| (0..n).map(move |t| (s, t)))
                    .filter(|&(s, t)| s != t && sg.leq(s, t) && b.support(s).next().is_some())
                    .collect();
                if below.is_empty() {
                    continue;
                }
                let (s, t) = below[rng.random_range(0..below.len())];
                let c = if rng.random_bool(0.5) {
                    phase(&mut rng)
                } else {
                    C64::new(rng.random_range(1.1..3.0), 0.0)
                };
                let m = b.with_inclusion_scale(t, s, c);
                let v = m
                    .validate_axioms_with(seed, 2)
                    .violation
                    .ok_or(format!("seed {seed}: inclusion rescaling of ({t},{s}) by {c} accepted"))?;
                if v.elements.is_empty() {
                    return Err(format!("seed {seed}: witness without elements"));
                }
                return Ok(Some(format!("{:?}", v.axiom)));
            }
        }
    }
    Ok(None)
}

fn mutations() -> Verdict {
    let mut rejected = std::collections::BTreeMap::<String, usize>::new();
    let mut total = 0;
    for seed in 0..200u64 {
        let kind = match seed % 3 {
            0 => Mutation::Associativity,
            1 => Mutation::Denormalization,
            _ => Mutation::InclusionScale,
        };
        let axiom = mutate(seed, &kind)?.ok_or(format!("seed {seed}: no applicable mutation"))?;
        *rejected.entry(axiom).or_default() += 1;
        total += 1;
    }
    check!(total == 200, "{total} mutations");
    Ok(format!("200 mutations rejected, 0 false accepts: {rejected:?}"))
}

fn degenerate() -> Verdict {
    let zero = fixtures::zero_bundle();
    let g = GermGroupoid::build(zero.topological_action());
    check!(g.is_empty(), "zero bundle has {} germs", g.len());
    let l = line(&zero, "zero-bundle")?;
    check!(l.is_empty(), "zero bundle line bundle has {} germs", l.len());
    let twist = Twist::from_line_bundle(&l).verify(&l);
    check!(twist.germs == 0, "zero twist has {} germs", twist.germs);
    let cc = CcAlgebra::new(&zero).map_err(|e| e.to_string())?;
    check!(cc.dim() == 0, "C_c(A) has dimension {}", cc.dim());
    let red = reduced_algebra_structure(&l);
    check!(red.dim == 0, "reduced algebra has dimension {}", red.dim);
    let inj = map_s_to_os_injective(&zero);
    check!(zero.semigroup().len() >= 2 && !inj.injective, "s ↦ O_s injective on the zero bundle");
    check!(!inj.fatal && !inj.hypotheses_hold, "zero bundle hypotheses {inj:?}");
    let mut notes = vec![format!(
        "zero: continuous={:?} semi_faithful={} A_0=0:{:?}",
        inj.continuous, inj.semi_faithful, inj.zero_fiber_trivial
    )];
    for (name, b) in [
        ("semilattice", fixtures::semilattice()),
        ("z2-flip", fixtures::z2_flip()),
        ("z4-cocycle", fixtures::z4_cocycle()),
    ] {
        let r = map_s_to_os_injective(&b);
        check!(r.injective, "{name}: s ↦ O_s not injective, {:?}", r.witness);
        check!(!r.fatal, "{name}: {r:?}");
        notes.push(format!(
            "{name}: continuous={:?} semi_faithful={} hypotheses={}",
            r.continuous, r.semi_faithful, r.hypotheses_hold
        ));
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("non-Hausdorff witness of the interval example", hausdorff_witness),
        ("conditional expectation on the grid", conditional_expectation),
        ("Gelfand isomorphism", gelfand),
        ("reduced isomorphism", reduced_iso),
        ("full-algebra kernel", kernel),
        ("twisted groupoid round trip", round_trips),
        ("axiom validators reject mutations", mutations),
        ("degenerate cases", degenerate),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
