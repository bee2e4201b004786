//! Input presentations of Fell bundles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{BundleError, FellBundle, PresentationKind};
use crate::germgpd::{check_wide, FiniteGroupoid, GroupoidCocycle, WideFailure};
use crate::invsgp::{Elem, InverseSemigroup};
use crate::linalg::{C64, ONE};
use crate::spaces::{Action, PartialHomeo, Space};

/// Twist of a twisted action; absent entries are `1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum OmegaSpec {
    #[default]
    Trivial,
    /// `ω(s,t)` constant in the point.
    Constant(BTreeMap<(Elem, Elem), C64>),
    /// `ω(s,t)(x)` per coordinate point.
    PerPoint(BTreeMap<(Elem, Elem), BTreeMap<usize, C64>>),
}

impl OmegaSpec {
    pub fn value(&self, s: Elem, t: Elem, x: usize) -> C64 {
        match self {
            OmegaSpec::Trivial => ONE,
            OmegaSpec::Constant(m) => m.get(&(s, t)).copied().unwrap_or(ONE),
            OmegaSpec::PerPoint(m) => m.get(&(s, t)).and_then(|p| p.get(&x)).copied().unwrap_or(ONE),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Presentation {
    /// An action with a twist; interval actions are sampled with `samples`
    /// points per component.
    TwistedAction {
        action: Action,
        omega: OmegaSpec,
        samples: usize,
    },
    /// Sections of the line bundle of `(groupoid, cocycle)` over the inverse
    /// semigroup generated by `bissections` (sets of arrow indices).
    GroupoidLineBundle {
        groupoid: FiniteGroupoid,
        cocycle: GroupoidCocycle,
        bissections: Vec<BTreeSet<usize>>,
    },
}

/// A groupoid presentation compiled to a twisted action on the objects.
#[derive(Debug, Clone)]
pub struct CompiledGroupoid {
    pub bundle: FellBundle,
    /// Arrow set of each semigroup element.
    pub sets: Vec<BTreeSet<usize>>,
}

impl CompiledGroupoid {
    /// The arrow of bissection `s` with source `object`.
    pub fn arrow_from(&self, groupoid: &FiniteGroupoid, s: Elem, object: usize) -> Option<usize> {
        self.sets[s].iter().copied().find(|&g| groupoid.source(g) == object)
    }
}

pub fn build_bundle(p: &Presentation) -> Result<FellBundle, BundleError> {
    match p {
        Presentation::TwistedAction { action, omega, samples } => match action.space() {
            Space::Discrete { .. } => FellBundle::twisted_action(action.clone(), |s, t, x| omega.value(s, t, x), 1),
            Space::Interval { .. } => {
                if matches!(omega, OmegaSpec::PerPoint(_)) {
                    return Err(BundleError::Presentation("interval twists must be constant in the point".into()));
                }
                FellBundle::sampled(action.clone(), |s, t| omega.value(s, t, 0), *samples)
            }
        },
        Presentation::GroupoidLineBundle {
            groupoid,
            cocycle,
            bissections,
        } => Ok(compile_groupoid(groupoid, cocycle, bissections)?.bundle),
    }
}

const MAX_BISSECTIONS: usize = 4096;

/// Closes `bissections` under products and inverses, checks wideness, and
/// realizes the section bundle `{C₀(L_U)}` as a twisted action on the
/// objects with `ω(U,V)(y) = σ(γ₁,γ₂)`, `γ₂ ∈ V` from `y`, `γ₁ ∈ U` from
/// `r(γ₂)`.
pub fn compile_groupoid(
    g: &FiniteGroupoid,
    sigma: &GroupoidCocycle,
    bissections: &[BTreeSet<usize>],
) -> Result<CompiledGroupoid, BundleError> {
    sigma
        .validate(g, super::TOL)
        .map_err(|e| BundleError::Presentation(e.to_string()))?;
    let name = |a: usize| g.arrow_names()[a].clone();
    for (i, u) in bissections.iter().enumerate() {
        if u.iter().any(|&a| a >= g.len()) {
            return Err(BundleError::Presentation(format!("bissection {i} names an unknown arrow")));
        }
        if !g.is_bissection(u) {
            return Err(BundleError::Presentation(format!("member {i} is not a bissection")));
        }
    }
    let mut sets: Vec<BTreeSet<usize>> = Vec::new();
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut push = |s: BTreeSet<usize>, sets: &mut Vec<BTreeSet<usize>>| -> Result<usize, BundleError> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if sets.len() == MAX_BISSECTIONS {
            return Err(BundleError::Presentation("generated inverse semigroup is too large".into()));
        }
        index.insert(s.clone(), sets.len());
        sets.push(s);
        Ok(sets.len() - 1)
    };
    for u in bissections {
        push(u.clone(), &mut sets)?;
    }
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    let mut k = 0;
    while k < sets.len() {
        let u = sets[k].clone();
        push(g.set_inverse(&u), &mut sets)?;
        for j in 0..=k {
            let v = sets[j].clone();
            let uv = push(g.set_product(&u, &v), &mut sets)?;
            table.insert((k, j), uv);
            let vu = push(g.set_product(&v, &u), &mut sets)?;
            table.insert((j, k), vu);
        }
        k += 1;
    }
    let order: Vec<usize> = (0..g.len()).collect();
    check_wide(&sets, &order, |a| g.source(a), |a| g.range(a)).map_err(|f| {
        BundleError::SubsemigroupNotWide(match f {
            WideFailure::NotABissection { member, .. } => format!("member {member} is not a bissection"),
            WideFailure::NotCovered { arrow } => format!("arrow {} is not covered", name(arrow)),
            WideFailure::NoInterpolation { u, v, arrow } => {
                format!("no member interpolates B{u} ∩ B{v} at {}", name(arrow))
            }
        })
    })?;
    let n = sets.len();
    let labels: Vec<String> = (0..n).map(|i| format!("B{i}")).collect();
    let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| table[&(a, b)]).collect()).collect();
    let zero = sets.iter().position(BTreeSet::is_empty).map(|i| labels[i].clone());
    let sg = InverseSemigroup::from_table(labels, mul, zero.as_deref())
        .map_err(|e| BundleError::Presentation(format!("bissections do not form an inverse semigroup: {e}")))?;
    let space = Space::Discrete {
        points: g.objects().to_vec(),
    };
    let theta = sets
        .iter()
        .map(|u| PartialHomeo::Discrete(u.iter().map(|&a| (g.source(a), g.range(a))).collect()))
        .collect();
    let action = Action::new(sg, space, theta)?;
    let from = |s: usize, y: usize| sets[s].iter().copied().find(|&a| g.source(a) == y);
    let mut bundle = FellBundle::twisted_action(
        action,
        |u, v, y| {
            let g2 = from(v, y).expect("y ∈ dom(UV) ⊆ dom V");
            let g1 = from(u, g.range(g2)).expect("r(γ₂) ∈ dom U");
            sigma.get(g1, g2)
        },
        1,
    )?;
    bundle.set_kind(PresentationKind::GroupoidLineBundle);
    Ok(CompiledGroupoid { bundle, sets })
}
