//! JSON documents: bundle presentations, element lists and seeded fixtures.
//!
//! ```json
//! {"kind": "twisted_action",
//!  "semigroup": {"elements": [...], "mul": [[...]], "zero": "0"},
//!  "action": {"space": {"kind": "discrete", "points": [...]},
//!             "theta": {"s": {"x": "y"}}},
//!  "omega": {"(s,t)": "1/4"}}
//!
//! {"kind": "groupoid_line_bundle",
//!  "groupoid": {"objects": [...], "arrows": [...], "products": [...]},
//!  "cocycle": {"(a,b)": [0.0, 1.0]},
//!  "subsemigroup": [["a", "b"], ...]}
//! ```
//!
//! Circle values are either a rational number of turns (`"k/n"`) or a pair
//! `[re, im]`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convalg::BundleAlgebraElement;
use crate::fellbundle::{build_bundle, BundleError, FellBundle, OmegaSpec, Presentation};
use crate::fixtures::{self, RandomParams, TwistedGroupoid};
use crate::germgpd::{FiniteGroupoid, GroupoidCocycle, GroupoidDoc};
use crate::invsgp::{InverseSemigroup, SemigroupDoc};
use crate::linalg::{circle, C64};
use crate::spaces::{parse_q, Action, HomeoDoc, Point, Space, SpaceDoc};

/// Sample count per interval component when a document does not set one.
pub const DEFAULT_SAMPLES: usize = 21;

/// Size limits of [`seeded_random_fixture`].
pub const MAX_FIXTURE_ELEMENTS: usize = 16;
pub const MAX_FIXTURE_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DocErrorKind {
    /// Malformed JSON, unknown labels or numbers that do not parse.
    Syntax,
    /// The semigroup table is not an inverse semigroup.
    Semigroup,
    /// The space or action is inconsistent.
    Action,
    /// The twist, cocycle or bissections are invalid.
    Bundle,
    /// Requested sizes exceed the fixture limits.
    Limits,
}

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[error("{location}: {message}")]
pub struct DocError {
    pub kind: DocErrorKind,
    pub location: String,
    pub message: String,
}

impl DocError {
    fn new(kind: DocErrorKind, location: impl Into<String>, message: impl ToString) -> Self {
        Self {
            kind,
            location: location.into(),
            message: message.to_string(),
        }
    }

    fn syntax(location: impl Into<String>, message: impl ToString) -> Self {
        Self::new(DocErrorKind::Syntax, location, message)
    }

    /// Errors in the shape of the input rather than in its mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self.kind, DocErrorKind::Syntax | DocErrorKind::Limits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CircleDoc {
    Turns(String),
    Pair([f64; 2]),
}

impl CircleDoc {
    pub fn value(&self) -> Option<C64> {
        match self {
            CircleDoc::Pair([re, im]) => Some(C64::new(*re, *im)),
            CircleDoc::Turns(s) => {
                let t = parse_q(s)?;
                let frac = &t - t.floor();
                let quarter = [(0, 1), (1, 4), (1, 2), (3, 4)]
                    .iter()
                    .position(|&(n, d)| frac == crate::spaces::q(n, d));
                Some(match quarter {
                    Some(0) => C64::new(1.0, 0.0),
                    Some(1) => C64::new(0.0, 1.0),
                    Some(2) => C64::new(-1.0, 0.0),
                    Some(3) => C64::new(0.0, -1.0),
                    _ => circle(crate::spaces::q_to_f64(&frac)),
                })
            }
        }
    }

    pub fn from_value(z: C64) -> Self {
        let exact = [(1.0, 0.0, "0"), (0.0, 1.0, "1/4"), (-1.0, 0.0, "1/2"), (0.0, -1.0, "3/4")];
        match exact.iter().find(|(re, im, _)| z.re == *re && z.im == *im) {
            Some((_, _, t)) => CircleDoc::Turns((*t).into()),
            None => CircleDoc::Pair([z.re, z.im]),
        }
    }
}

/// An `ω(s,t)` entry: one value, or one value per point (discrete only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaDoc {
    Constant(CircleDoc),
    PerPoint(BTreeMap<String, CircleDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub space: SpaceDoc,
    /// `θ_s` keyed by element label; missing elements act as the empty map.
    pub theta: BTreeMap<String, HomeoDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BundleDoc {
    TwistedAction {
        semigroup: SemigroupDoc,
        action: ActionDoc,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        omega: BTreeMap<String, OmegaDoc>,
        /// Points per component for interval spaces.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<usize>,
    },
    GroupoidLineBundle {
        groupoid: GroupoidDoc,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        cocycle: BTreeMap<String, CircleDoc>,
        subsemigroup: Vec<Vec<String>>,
    },
}

fn pair_key(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Splits `"(a,b)"` at the first comma leaving two known labels, so labels
/// may themselves contain commas.
fn split_pair<'k>(key: &'k str, known: impl Fn(&str) -> bool) -> Option<(&'k str, &'k str)> {
    let inner = key.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner
        .match_indices(',')
        .map(|(i, _)| (inner[..i].trim(), inner[i + 1..].trim()))
        .find(|(a, b)| known(a) && known(b))
}

fn syntax_error(e: serde_json::Error) -> DocError {
    let location = if e.line() == 0 {
        "document".to_string()
    } else {
        format!("line {} column {}", e.line(), e.column())
    };
    DocError::syntax(location, e)
}

fn circle_value(c: &CircleDoc, location: &str) -> Result<C64, DocError> {
    c.value().ok_or_else(|| DocError::syntax(location, "expected \"k/n\" turns or [re, im]"))
}

impl BundleDoc {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(syntax_error)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn presentation(&self) -> Result<Presentation, DocError> {
        match self {
            BundleDoc::TwistedAction {
                semigroup,
                action,
                omega,
                samples,
            } => {
                let sg = InverseSemigroup::from_doc(semigroup)
                    .map_err(|e| DocError::new(DocErrorKind::Semigroup, "semigroup", e))?;
                let space = action
                    .space
                    .build()
                    .map_err(|e| DocError::new(DocErrorKind::Action, "action.space", e))?;
                for label in action.theta.keys() {
                    if sg.index_of(label).is_none() {
                        return Err(DocError::syntax(format!("action.theta.{label}"), "unknown element"));
                    }
                }
                let mut theta = Vec::with_capacity(sg.len());
                for s in sg.elements() {
                    let label = sg.label(s);
                    let f = match action.theta.get(label) {
                        Some(h) => h
                            .build(&space)
                            .map_err(|e| DocError::new(DocErrorKind::Action, format!("action.theta.{label}"), e))?,
                        None => crate::spaces::PartialHomeo::empty_like(&space),
                    };
                    theta.push(f);
                }
                let action = Action::new(sg, space, theta)
                    .map_err(|e| DocError::new(DocErrorKind::Action, "action", e))?;
                let omega = omega_spec(&action, omega)?;
                Ok(Presentation::TwistedAction {
                    action,
                    omega,
                    samples: samples.unwrap_or(DEFAULT_SAMPLES),
                })
            }
            BundleDoc::GroupoidLineBundle {
                groupoid,
                cocycle,
                subsemigroup,
            } => {
                let g = FiniteGroupoid::from_doc(groupoid)
                    .map_err(|e| DocError::new(DocErrorKind::Bundle, "groupoid", e))?;
                let arrow = |name: &str, loc: &str| {
                    g.arrow_index(name)
                        .ok_or_else(|| DocError::syntax(loc, format!("unknown arrow `{name}`")))
                };
                let mut sigma = GroupoidCocycle::trivial();
                for (key, v) in cocycle {
                    let loc = format!("cocycle.{key}");
                    let (a, b) = split_pair(key, |n| g.arrow_index(n).is_some())
                        .ok_or_else(|| DocError::syntax(&loc, "expected \"(a,b)\" with known arrows"))?;
                    sigma.set(arrow(a, &loc)?, arrow(b, &loc)?, circle_value(v, &loc)?);
                }
                let mut bissections = Vec::with_capacity(subsemigroup.len());
                for (i, names) in subsemigroup.iter().enumerate() {
                    let loc = format!("subsemigroup[{i}]");
                    bissections.push(names.iter().map(|n| arrow(n, &loc)).collect::<Result<BTreeSet<_>, _>>()?);
                }
                Ok(Presentation::GroupoidLineBundle {
                    groupoid: g,
                    cocycle: sigma,
                    bissections,
                })
            }
        }
    }

    pub fn bundle(&self) -> Result<FellBundle, DocError> {
        let p = self.presentation()?;
        build_bundle(&p).map_err(|e| {
            let kind = match e {
                BundleError::Action(_) => DocErrorKind::Action,
                _ => DocErrorKind::Bundle,
            };
            DocError::new(kind, "bundle", e)
        })
    }

    pub fn from_presentation(p: &Presentation) -> Self {
        match p {
            Presentation::TwistedAction { action, omega, samples } => {
                Self::from_twisted_action(action, omega, (!action.space().is_discrete()).then_some(*samples))
            }
            Presentation::GroupoidLineBundle {
                groupoid,
                cocycle,
                bissections,
            } => Self::from_groupoid(groupoid, cocycle, bissections),
        }
    }

    pub fn from_twisted_action(action: &Action, omega: &OmegaSpec, samples: Option<usize>) -> Self {
        let sg = action.semigroup();
        let space = action.space();
        let theta = sg
            .elements()
            .map(|s| (sg.label(s).to_string(), HomeoDoc::from_homeo(action.theta(s), space)))
            .collect();
        let key = |s: usize, t: usize| pair_key(sg.label(s), sg.label(t));
        let omega = match omega {
            OmegaSpec::Trivial => BTreeMap::new(),
            OmegaSpec::Constant(m) => m
                .iter()
                .map(|(&(s, t), &v)| (key(s, t), OmegaDoc::Constant(CircleDoc::from_value(v))))
                .collect(),
            OmegaSpec::PerPoint(m) => m
                .iter()
                .map(|(&(s, t), vals)| {
                    let vals = vals
                        .iter()
                        .map(|(&x, &v)| (space.fmt_point(&Point::Discrete(x)), CircleDoc::from_value(v)))
                        .collect();
                    (key(s, t), OmegaDoc::PerPoint(vals))
                })
                .collect(),
        };
        BundleDoc::TwistedAction {
            semigroup: sg.to_doc(),
            action: ActionDoc {
                space: SpaceDoc::from_space(space),
                theta,
            },
            omega,
            samples,
        }
    }

    pub fn from_groupoid(g: &FiniteGroupoid, sigma: &GroupoidCocycle, bissections: &[BTreeSet<usize>]) -> Self {
        let name = |a: usize| g.arrow_names()[a].clone();
        BundleDoc::GroupoidLineBundle {
            groupoid: g.to_doc(),
            cocycle: sigma
                .entries()
                .filter(|(_, v)| *v != C64::new(1.0, 0.0))
                .map(|((a, b), v)| (pair_key(&name(a), &name(b)), CircleDoc::from_value(v)))
                .collect(),
            subsemigroup: bissections.iter().map(|u| u.iter().map(|&a| name(a)).collect()).collect(),
        }
    }

    pub fn from_twisted_groupoid(t: &TwistedGroupoid) -> Self {
        Self::from_groupoid(&t.groupoid, &t.cocycle, &t.bissections)
    }

    /// The twisted groupoid of a `groupoid_line_bundle` document.
    pub fn twisted_groupoid(&self, name: &str) -> Result<TwistedGroupoid, DocError> {
        match self.presentation()? {
            Presentation::GroupoidLineBundle {
                groupoid,
                cocycle,
                bissections,
            } => Ok(TwistedGroupoid {
                name: name.into(),
                groupoid,
                cocycle,
                bissections,
            }),
            _ => Err(DocError::syntax("kind", "expected a groupoid_line_bundle document")),
        }
    }
}

fn omega_spec(action: &Action, omega: &BTreeMap<String, OmegaDoc>) -> Result<OmegaSpec, DocError> {
    if omega.is_empty() {
        return Ok(OmegaSpec::Trivial);
    }
    let sg = action.semigroup();
    let space = action.space();
    let mut constant = BTreeMap::new();
    let mut per_point: BTreeMap<(usize, usize), BTreeMap<usize, C64>> = BTreeMap::new();
    for (key, entry) in omega {
        let loc = format!("omega.{key}");
        let (s, t) = split_pair(key, |l| sg.index_of(l).is_some())
            .ok_or_else(|| DocError::syntax(&loc, "expected \"(s,t)\" with known elements"))?;
        let st = (sg.index_of(s).expect("known"), sg.index_of(t).expect("known"));
        match entry {
            OmegaDoc::Constant(c) => {
                constant.insert(st, circle_value(c, &loc)?);
            }
            OmegaDoc::PerPoint(vals) => {
                if !space.is_discrete() {
                    return Err(DocError::syntax(&loc, "interval twists must be constant in the point"));
                }
                let m = per_point.entry(st).or_default();
                for (p, c) in vals {
                    let x = space
                        .point_index(p)
                        .ok_or_else(|| DocError::syntax(&loc, format!("unknown point `{p}`")))?;
                    m.insert(x, circle_value(c, &format!("{loc}.{p}"))?);
                }
            }
        }
    }
    if per_point.is_empty() {
        return Ok(OmegaSpec::Constant(constant));
    }
    // constant entries become per-point entries on every point
    let npoints = match space {
        Space::Discrete { points } => points.len(),
        Space::Interval { .. } => 0,
    };
    for (st, v) in constant {
        per_point.entry(st).or_insert_with(|| (0..npoints).map(|x| (x, v)).collect());
    }
    Ok(OmegaSpec::PerPoint(per_point))
}

/// A seeded twisted action of a Clifford semigroup `Z/k × L` on at most
/// `max_points` points. Output is a function of `(seed, params)` alone.
pub fn seeded_random_fixture(seed: u64, params: &RandomParams) -> Result<BundleDoc, DocError> {
    if params.max_elements > MAX_FIXTURE_ELEMENTS || params.max_points > MAX_FIXTURE_POINTS {
        return Err(DocError::new(
            DocErrorKind::Limits,
            "params",
            format!("at most {MAX_FIXTURE_ELEMENTS} elements and {MAX_FIXTURE_POINTS} points"),
        ));
    }
    if params.max_elements == 0 || params.max_points == 0 || params.max_group == 0 {
        return Err(DocError::new(DocErrorKind::Limits, "params", "sizes must be positive"));
    }
    Ok(BundleDoc::from_presentation(&fixtures::random_presentation(seed, params)))
}

/// Names accepted by [`named_fixture`].
pub const NAMED_FIXTURES: &[&str] = &[
    "z2-flip",
    "semilattice",
    "zero-bundle",
    "interval-example",
    "z4-cocycle",
    "z4-groupoid",
];

pub fn named_fixture(name: &str) -> Option<BundleDoc> {
    let trivial = |b: FellBundle| BundleDoc::from_twisted_action(b.action(), &OmegaSpec::Trivial, None);
    Some(match name {
        "z2-flip" => trivial(fixtures::z2_flip()),
        "semilattice" => trivial(fixtures::semilattice()),
        "zero-bundle" => trivial(fixtures::zero_bundle()),
        "interval-example" => BundleDoc::from_twisted_action(&fixtures::interval_action(), &OmegaSpec::Trivial, Some(DEFAULT_SAMPLES)),
        "z4-cocycle" => {
            let (action, omega) = fixtures::z4_cocycle_action();
            let table = (0..4)
                .flat_map(|s| (0..4).map(move |t| (s, t)))
                .filter(|&(s, t)| omega[s][t] != C64::new(1.0, 0.0))
                .map(|(s, t)| ((s, t), omega[s][t]))
                .collect();
            BundleDoc::from_twisted_action(&action, &OmegaSpec::Constant(table), None)
        }
        "z4-groupoid" => {
            let (g, sigma) = fixtures::z4_groupoid();
            let singletons: Vec<BTreeSet<usize>> = (0..g.len()).map(|a| [a].into()).collect();
            BundleDoc::from_groupoid(&g, &sigma, &singletons)
        }
        _ => return None,
    })
}

/// One term `value·δ_x ∈ A_s` of an element of `C_c(A)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub s: String,
    pub x: String,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub name: String,
    pub terms: Vec<TermDoc>,
}

/// `{"elements": [{"name": ..., "terms": [{"s", "x", "value": [re, im]}]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementsDoc {
    pub elements: Vec<ElementDoc>,
}

impl ElementsDoc {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(syntax_error)
    }

    pub fn build(&self, b: &FellBundle) -> Result<Vec<(String, BundleAlgebraElement)>, DocError> {
        let sg = b.semigroup();
        let mut out = Vec::with_capacity(self.elements.len());
        for (i, el) in self.elements.iter().enumerate() {
            let mut acc = BundleAlgebraElement::default();
            for (j, t) in el.terms.iter().enumerate() {
                let loc = format!("elements[{i}].terms[{j}]");
                let s = sg
                    .index_of(&t.s)
                    .ok_or_else(|| DocError::syntax(&loc, format!("unknown element `{}`", t.s)))?;
                let x = (0..b.npoints())
                    .find(|&x| b.point_label(x) == t.x)
                    .ok_or_else(|| DocError::syntax(&loc, format!("unknown point `{}`", t.x)))?;
                if !b.in_support(s, x) {
                    return Err(DocError::syntax(&loc, format!("`{}` is not in the support of A_{}", t.x, t.s)));
                }
                let term = b.scale(&b.delta(s, x, 0), C64::new(t.value[0], t.value[1]));
                let sum = match acc.terms.remove(&s) {
                    Some(prev) => b.add(&prev, &term).expect("same fiber"),
                    None => term,
                };
                acc.terms.insert(s, sum);
            }
            out.push((el.name.clone(), acc));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_fixtures_rebuild_their_bundles() {
        for &name in NAMED_FIXTURES {
            let doc = named_fixture(name).unwrap();
            let again = BundleDoc::parse(&doc.to_json()).unwrap();
            assert_eq!(doc, again, "{name}");
            let b = again.bundle().unwrap();
            assert!(b.validate_axioms().passed, "{name}");
        }
        let b = named_fixture("interval-example").unwrap().bundle().unwrap();
        assert_eq!(b.npoints(), fixtures::interval_s5(DEFAULT_SAMPLES).npoints());
        let z4 = named_fixture("z4-cocycle").unwrap().bundle().unwrap();
        assert_eq!(z4.omega(1, 2, 0), fixtures::z4_cocycle().omega(1, 2, 0));
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(CircleDoc::Turns("1/4".into()).value(), Some(C64::new(0.0, 1.0)));
        assert_eq!(CircleDoc::Turns("-1/2".into()).value(), Some(C64::new(-1.0, 0.0)));
        assert_eq!(CircleDoc::Turns("7/4".into()).value(), Some(C64::new(0.0, -1.0)));
        let z = CircleDoc::Turns("1/3".into()).value().unwrap();
        assert!((z - circle(1.0 / 3.0)).norm() < 1e-15);
        assert_eq!(CircleDoc::from_value(C64::new(0.0, 1.0)), CircleDoc::Turns("1/4".into()));
        assert!(CircleDoc::Turns("x".into()).value().is_none());
    }

    #[test]
    fn syntax_errors_carry_locations() {
        let e = BundleDoc::parse("{\"kind\": \"twisted_action\",\n \"semigroup\" 3}").unwrap_err();
        assert_eq!(e.kind, DocErrorKind::Syntax);
        assert!(e.location.starts_with("line 2"), "{}", e.location);
        let e = BundleDoc::parse("{\"kind\": \"twisted_action\", \"semigroup\": 3}").unwrap_err();
        assert_eq!(e.kind, DocErrorKind::Syntax);
        let mut doc = named_fixture("z2-flip").unwrap();
        if let BundleDoc::TwistedAction { omega, .. } = &mut doc {
            omega.insert("(g0,nope)".into(), OmegaDoc::Constant(CircleDoc::Turns("0".into())));
        }
        let e = doc.presentation().unwrap_err();
        assert_eq!(e.location, "omega.(g0,nope)");
        assert!(e.is_input_error());
    }

    #[test]
    fn bad_tables_and_cocycles_are_not_input_errors() {
        let mut doc = named_fixture("z2-flip").unwrap();
        if let BundleDoc::TwistedAction { semigroup, .. } = &mut doc {
            semigroup.mul = vec![vec![0, 0], vec![1, 1]];
        }
        assert_eq!(doc.presentation().unwrap_err().kind, DocErrorKind::Semigroup);
        let mut doc = named_fixture("z2-flip").unwrap();
        if let BundleDoc::TwistedAction { omega, .. } = &mut doc {
            omega.insert("(g0,g1)".into(), OmegaDoc::Constant(CircleDoc::Turns("1/2".into())));
        }
        let e = doc.bundle().unwrap_err();
        assert_eq!(e.kind, DocErrorKind::Bundle);
        assert!(!e.is_input_error());
    }

    #[test]
    fn random_fixtures_are_reproducible() {
        let p = RandomParams::largest();
        let a = seeded_random_fixture(7, &p).unwrap().to_json();
        let b = seeded_random_fixture(7, &p).unwrap().to_json();
        assert_eq!(a, b);
        assert_ne!(a, seeded_random_fixture(8, &p).unwrap().to_json());
        let too_big = RandomParams {
            max_points: 33,
            ..p
        };
        assert_eq!(seeded_random_fixture(0, &too_big).unwrap_err().kind, DocErrorKind::Limits);
    }

    #[test]
    fn random_fixtures_validate() {
        let p = RandomParams::largest();
        for seed in 0..1000 {
            let doc = seeded_random_fixture(seed, &p).unwrap();
            let b = BundleDoc::parse(&doc.to_json()).unwrap().bundle().unwrap();
            assert!(b.semigroup().len() <= MAX_FIXTURE_ELEMENTS && b.npoints() <= MAX_FIXTURE_POINTS);
            if seed % 50 == 0 {
                assert!(b.validate_axioms().passed, "seed {seed}");
            }
        }
    }

    #[test]
    fn random_omega_survives_serialization() {
        let p = RandomParams::small();
        for seed in 0..20 {
            let direct = fixtures::random_bundle(seed, &p);
            let parsed = seeded_random_fixture(seed, &p).unwrap().bundle().unwrap();
            let sg = direct.semigroup();
            for s in sg.elements() {
                for t in sg.elements() {
                    for x in direct.points_of(sg.mul(s, t)) {
                        assert_eq!(direct.omega(s, t, x), parsed.omega(s, t, x));
                    }
                }
            }
        }
    }

    #[test]
    fn groupoid_documents_round_trip() {
        for t in fixtures::twisted_groupoids() {
            let doc = BundleDoc::from_twisted_groupoid(&t);
            let back = BundleDoc::parse(&doc.to_json()).unwrap().twisted_groupoid(&t.name).unwrap();
            assert_eq!(back.bissections, t.bissections);
            for (a, b, _) in t.groupoid.composable() {
                assert_eq!(back.cocycle.get(a, b), t.cocycle.get(a, b));
            }
        }
    }

    #[test]
    fn elements_build_point_masses() {
        let b = fixtures::z2_flip();
        let doc = ElementsDoc::parse(
            r#"{"elements": [{"name": "a", "terms": [{"s": "g1", "x": "x", "value": [2, 0]}, {"s": "g1", "x": "x", "value": [1, 1]}]}]}"#,
        )
        .unwrap();
        let els = doc.build(&b).unwrap();
        let a = &els[0].1.terms[&1];
        assert_eq!(b.value(a, 0), C64::new(3.0, 1.0));
        let bad = ElementsDoc::parse(r#"{"elements": [{"name": "a", "terms": [{"s": "g1", "x": "z", "value": [1, 0]}]}]}"#).unwrap();
        assert_eq!(bad.build(&b).unwrap_err().location, "elements[0].terms[0]");
    }
}
