//! Base spaces, open sets, partial homeomorphisms and inverse-semigroup
//! actions.
//!
//! Two kinds of space are supported: finite discrete spaces and finite
//! disjoint unions of closed rational intervals. Interval arithmetic is exact.

pub mod affine;
pub mod interval;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invsgp::{Elem, InverseSemigroup};
pub use affine::{AffineError, AffinePiece, PiecewiseAffine};
pub use interval::{fmt_q, parse_interval, parse_q, q, q_to_f64, qi, Interval, IntervalSet, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    Discrete { points: Vec<String> },
    /// Pairwise disjoint closed intervals, sorted.
    Interval { components: Vec<Interval> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Discrete(usize),
    Real(Q),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OpenSet {
    Discrete(BTreeSet<usize>),
    Interval(IntervalSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PartialHomeo {
    Discrete(BTreeMap<usize, usize>),
    Interval(PiecewiseAffine),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("interval components must be closed, sorted and disjoint (component {0})")]
    BadComponents(usize),
    #[error("duplicate point label `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("bad rational or interval `{0}`")]
    BadNumber(String),
    #[error("set {0} is not open in the space")]
    NotOpen(String),
    #[error("map is not injective: {0}")]
    NotInjective(String),
    #[error("piecewise map: {0}")]
    Affine(String),
    #[error("object kind does not match the space")]
    KindMismatch,
}

impl Space {
    pub fn discrete(points: &[&str]) -> Self {
        Space::Discrete {
            points: points.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn empty() -> Self {
        Space::Discrete { points: Vec::new() }
    }

    pub fn interval(components: Vec<Interval>) -> Result<Self, SpaceError> {
        for (i, c) in components.iter().enumerate() {
            if !c.lo_closed || !c.hi_closed {
                return Err(SpaceError::BadComponents(i));
            }
            if i > 0 && components[i - 1].hi >= c.lo {
                return Err(SpaceError::BadComponents(i));
            }
        }
        Ok(Space::Interval { components })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Space::Discrete { .. })
    }

    pub fn whole(&self) -> OpenSet {
        match self {
            Space::Discrete { points } => OpenSet::Discrete((0..points.len()).collect()),
            Space::Interval { components } => {
                OpenSet::Interval(IntervalSet::from_intervals(components.iter().cloned()))
            }
        }
    }

    pub fn empty_set(&self) -> OpenSet {
        match self {
            Space::Discrete { .. } => OpenSet::Discrete(BTreeSet::new()),
            Space::Interval { .. } => OpenSet::Interval(IntervalSet::empty()),
        }
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        match self {
            Space::Discrete { points } => points.iter().position(|p| p == label),
            Space::Interval { .. } => None,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Space::Discrete { points }, Point::Discrete(i)) => *i < points.len(),
            (Space::Interval { components }, Point::Real(x)) => components.iter().any(|c| c.contains(x)),
            _ => false,
        }
    }

    /// Relative openness: every closed endpoint of `u` must be a closed
    /// endpoint of the component containing it.
    pub fn is_open(&self, u: &OpenSet) -> bool {
        match (self, u) {
            (Space::Discrete { points }, OpenSet::Discrete(s)) => s.iter().all(|&i| i < points.len()),
            (Space::Interval { components }, OpenSet::Interval(s)) => s.parts().iter().all(|p| {
                components.iter().any(|c| {
                    c.contains(&p.lo)
                        && c.contains(&p.hi)
                        && (!p.lo_closed || p.lo == c.lo)
                        && (!p.hi_closed || p.hi == c.hi)
                })
            }),
            _ => false,
        }
    }

    /// Closure of an open set. Discrete sets are already closed; interval
    /// pieces close up inside their component.
    pub fn closure(&self, u: &OpenSet) -> OpenSet {
        match u {
            OpenSet::Discrete(_) => u.clone(),
            OpenSet::Interval(s) => OpenSet::Interval(s.closure()),
        }
    }

    pub fn fmt_point(&self, p: &Point) -> String {
        match (self, p) {
            (Space::Discrete { points }, Point::Discrete(i)) => {
                points.get(*i).cloned().unwrap_or_else(|| format!("#{i}"))
            }
            (_, Point::Real(x)) => fmt_q(x),
            (_, Point::Discrete(i)) => format!("#{i}"),
        }
    }

    pub fn fmt_set(&self, u: &OpenSet) -> String {
        match u {
            OpenSet::Discrete(s) => {
                let labels: Vec<String> = s.iter().map(|&i| self.fmt_point(&Point::Discrete(i))).collect();
                format!("{{{}}}", labels.join(","))
            }
            OpenSet::Interval(s) => s.to_string(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Discrete(i) => write!(f, "#{i}"),
            Point::Real(x) => write!(f, "{}", fmt_q(x)),
        }
    }
}

impl OpenSet {
    pub fn is_empty(&self) -> bool {
        match self {
            OpenSet::Discrete(s) => s.is_empty(),
            OpenSet::Interval(s) => s.is_empty(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (OpenSet::Discrete(s), Point::Discrete(i)) => s.contains(i),
            (OpenSet::Interval(s), Point::Real(x)) => s.contains(x),
            _ => false,
        }
    }

    fn zip(&self, other: &OpenSet, d: impl Fn(&BTreeSet<usize>, &BTreeSet<usize>) -> BTreeSet<usize>, i: impl Fn(&IntervalSet, &IntervalSet) -> IntervalSet) -> OpenSet {
        match (self, other) {
            (OpenSet::Discrete(a), OpenSet::Discrete(b)) => OpenSet::Discrete(d(a, b)),
            (OpenSet::Interval(a), OpenSet::Interval(b)) => OpenSet::Interval(i(a, b)),
            _ => panic!("open sets of different kinds"),
        }
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        self.zip(other, |a, b| a | b, IntervalSet::union)
    }

    pub fn intersect(&self, other: &OpenSet) -> OpenSet {
        self.zip(other, |a, b| a & b, IntervalSet::intersect)
    }

    pub fn difference(&self, other: &OpenSet) -> OpenSet {
        self.zip(other, |a, b| a - b, IntervalSet::difference)
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn sample(&self) -> Option<Point> {
        match self {
            OpenSet::Discrete(s) => s.iter().next().map(|&i| Point::Discrete(i)),
            OpenSet::Interval(s) => s.sample().map(Point::Real),
        }
    }
}

impl PartialHomeo {
    pub fn empty_like(space: &Space) -> Self {
        match space {
            Space::Discrete { .. } => PartialHomeo::Discrete(BTreeMap::new()),
            Space::Interval { .. } => PartialHomeo::Interval(PiecewiseAffine::empty()),
        }
    }

    pub fn identity(on: &OpenSet) -> Self {
        match on {
            OpenSet::Discrete(s) => PartialHomeo::Discrete(s.iter().map(|&i| (i, i)).collect()),
            OpenSet::Interval(s) => PartialHomeo::Interval(PiecewiseAffine::identity(s)),
        }
    }

    /// A discrete partial bijection; fails if two points share an image.
    pub fn discrete(map: BTreeMap<usize, usize>) -> Result<Self, SpaceError> {
        let mut seen = BTreeSet::new();
        for (x, y) in &map {
            if !seen.insert(*y) {
                return Err(SpaceError::NotInjective(format!("two points map to #{y} (one is #{x})")));
            }
        }
        Ok(PartialHomeo::Discrete(map))
    }

    pub fn domain(&self) -> OpenSet {
        match self {
            PartialHomeo::Discrete(m) => OpenSet::Discrete(m.keys().copied().collect()),
            PartialHomeo::Interval(f) => OpenSet::Interval(f.domain()),
        }
    }

    pub fn range(&self) -> OpenSet {
        match self {
            PartialHomeo::Discrete(m) => OpenSet::Discrete(m.values().copied().collect()),
            PartialHomeo::Interval(f) => OpenSet::Interval(f.range()),
        }
    }

    pub fn apply(&self, p: &Point) -> Option<Point> {
        match (self, p) {
            (PartialHomeo::Discrete(m), Point::Discrete(i)) => m.get(i).map(|&j| Point::Discrete(j)),
            (PartialHomeo::Interval(f), Point::Real(x)) => f.apply(x).map(Point::Real),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            PartialHomeo::Discrete(m) => PartialHomeo::Discrete(m.iter().map(|(&a, &b)| (b, a)).collect()),
            PartialHomeo::Interval(f) => PartialHomeo::Interval(f.inverse()),
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &PartialHomeo) -> Self {
        match (self, g) {
            (PartialHomeo::Discrete(f), PartialHomeo::Discrete(g)) => PartialHomeo::Discrete(
                g.iter()
                    .filter_map(|(&x, y)| f.get(y).map(|&z| (x, z)))
                    .collect(),
            ),
            (PartialHomeo::Interval(f), PartialHomeo::Interval(g)) => PartialHomeo::Interval(f.compose(g)),
            _ => panic!("partial homeomorphisms of different kinds"),
        }
    }

    pub fn restrict(&self, to: &OpenSet) -> Self {
        match (self, to) {
            (PartialHomeo::Discrete(m), OpenSet::Discrete(s)) => {
                PartialHomeo::Discrete(m.iter().filter(|(x, _)| s.contains(x)).map(|(&a, &b)| (a, b)).collect())
            }
            (PartialHomeo::Interval(f), OpenSet::Interval(s)) => PartialHomeo::Interval(f.restrict(s)),
            _ => panic!("restriction to a set of a different kind"),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            PartialHomeo::Discrete(m) => m.iter().all(|(a, b)| a == b),
            PartialHomeo::Interval(f) => f.is_identity(),
        }
    }

    /// A point witnessing `self != other` as partial maps.
    pub fn disagreement(&self, other: &PartialHomeo) -> Option<Point> {
        match (self, other) {
            (PartialHomeo::Discrete(a), PartialHomeo::Discrete(b)) => a
                .keys()
                .chain(b.keys())
                .find(|x| a.get(x) != b.get(x))
                .map(|&x| Point::Discrete(x)),
            (PartialHomeo::Interval(a), PartialHomeo::Interval(b)) => a.disagreement(b).map(Point::Real),
            _ => panic!("partial homeomorphisms of different kinds"),
        }
    }

    /// A domain point on which the map is not the identity.
    fn moved_point(&self) -> Option<Point> {
        match self {
            PartialHomeo::Discrete(m) => m.iter().find(|(a, b)| a != b).map(|(&a, _)| Point::Discrete(a)),
            PartialHomeo::Interval(f) => f
                .disagreement(&PiecewiseAffine::identity(&f.domain()))
                .map(Point::Real),
        }
    }

    fn kind_matches(&self, space: &Space) -> bool {
        matches!(
            (self, space),
            (PartialHomeo::Discrete(_), Space::Discrete { .. }) | (PartialHomeo::Interval(_), Space::Interval { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("expected {expected} maps, one per semigroup element")]
    WrongLength { expected: usize },
    #[error("theta({s}) is not a partial homeomorphism of the space: {detail}")]
    NotPartialHomeo { s: Elem, detail: String },
    #[error("dom/range of theta({s}) do not match the source/range idempotents")]
    DomainMismatch { s: Elem },
    #[error("theta({e}) is not the identity at {x}")]
    IdempotentNotIdentity { e: Elem, x: Point },
    #[error("theta({s})∘theta({t}) != theta({s}{t}) at {x}")]
    NotHomomorphism { s: Elem, t: Elem, x: Point },
    #[error("theta({s}*) is not the inverse of theta({s}) at {x}")]
    NotInverse { s: Elem, x: Point },
}

/// A validated action of a finite inverse semigroup by partial
/// homeomorphisms. `U_e` is the domain of `theta(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    semigroup: InverseSemigroup,
    space: Space,
    theta: Vec<PartialHomeo>,
}

impl Action {
    /// Exhaustively checks the action axioms over all elements and pairs.
    pub fn new(semigroup: InverseSemigroup, space: Space, theta: Vec<PartialHomeo>) -> Result<Self, ActionError> {
        let n = semigroup.len();
        if theta.len() != n {
            return Err(ActionError::WrongLength { expected: n });
        }
        for (s, f) in theta.iter().enumerate() {
            if !f.kind_matches(&space) {
                return Err(ActionError::NotPartialHomeo {
                    s,
                    detail: "map kind differs from space kind".into(),
                });
            }
            for set in [f.domain(), f.range()] {
                if !space.is_open(&set) {
                    return Err(ActionError::NotPartialHomeo {
                        s,
                        detail: format!("{} is not an open subset", space.fmt_set(&set)),
                    });
                }
            }
            if let PartialHomeo::Discrete(m) = f {
                if m.values().collect::<BTreeSet<_>>().len() != m.len() {
                    return Err(ActionError::NotPartialHomeo {
                        s,
                        detail: "not injective".into(),
                    });
                }
            }
        }
        for &e in semigroup.idempotents() {
            if let Some(x) = theta[e].moved_point() {
                return Err(ActionError::IdempotentNotIdentity { e, x });
            }
        }
        for s in semigroup.elements() {
            let src = theta[semigroup.source_idem(s)].domain();
            let rng = theta[semigroup.range_idem(s)].domain();
            if theta[s].domain() != src || theta[s].range() != rng {
                return Err(ActionError::DomainMismatch { s });
            }
            if let Some(x) = theta[semigroup.star(s)].disagreement(&theta[s].inverse()) {
                return Err(ActionError::NotInverse { s, x });
            }
        }
        for s in semigroup.elements() {
            for t in semigroup.elements() {
                let composed = theta[s].compose(&theta[t]);
                if let Some(x) = composed.disagreement(&theta[semigroup.mul(s, t)]) {
                    return Err(ActionError::NotHomomorphism { s, t, x });
                }
            }
        }
        Ok(Self { semigroup, space, theta })
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn theta(&self, s: Elem) -> &PartialHomeo {
        &self.theta[s]
    }

    pub fn thetas(&self) -> &[PartialHomeo] {
        &self.theta
    }

    /// `U_{s*s}`, the domain of `theta(s)`.
    pub fn dom(&self, s: Elem) -> OpenSet {
        self.theta[s].domain()
    }

    /// Restriction to an invariant open subset, viewed as a new space.
    /// Only interval actions restricted to a union of whole components are
    /// supported, which is what makes the restriction again an action.
    pub fn restrict_to_components(&self, keep: &[Interval]) -> Result<Self, ActionError> {
        let space = match &self.space {
            Space::Interval { .. } => Space::Interval { components: keep.to_vec() },
            Space::Discrete { .. } => panic!("component restriction is for interval spaces"),
        };
        let set = OpenSet::Interval(IntervalSet::from_intervals(keep.iter().cloned()));
        let theta = self
            .theta
            .iter()
            .map(|f| f.restrict(&set).inverse().restrict(&set).inverse())
            .collect();
        Action::new(self.semigroup.clone(), space, theta)
    }
}

/// JSON form of a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceDoc {
    Discrete { points: Vec<String> },
    Interval { components: Vec<(String, String)> },
}

/// JSON form of one affine piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub dom: String,
    #[serde(default = "one_string")]
    pub slope: String,
    #[serde(default = "zero_string")]
    pub offset: String,
}

fn one_string() -> String {
    "1".into()
}

fn zero_string() -> String {
    "0".into()
}

/// JSON form of a partial homeomorphism: a label map for discrete spaces,
/// a list of affine pieces for interval spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomeoDoc {
    Discrete(BTreeMap<String, String>),
    Interval(Vec<PieceDoc>),
}

impl SpaceDoc {
    pub fn build(&self) -> Result<Space, SpaceError> {
        match self {
            SpaceDoc::Discrete { points } => {
                for (i, p) in points.iter().enumerate() {
                    if points[..i].contains(p) {
                        return Err(SpaceError::DuplicatePoint(p.clone()));
                    }
                }
                Ok(Space::Discrete { points: points.clone() })
            }
            SpaceDoc::Interval { components } => {
                let mut parts = Vec::new();
                for (a, b) in components {
                    let lo = parse_q(a).ok_or_else(|| SpaceError::BadNumber(a.clone()))?;
                    let hi = parse_q(b).ok_or_else(|| SpaceError::BadNumber(b.clone()))?;
                    parts.push(Interval::closed(lo, hi).ok_or_else(|| SpaceError::BadNumber(format!("[{a},{b}]")))?);
                }
                Space::interval(parts)
            }
        }
    }

    pub fn from_space(space: &Space) -> Self {
        match space {
            Space::Discrete { points } => SpaceDoc::Discrete { points: points.clone() },
            Space::Interval { components } => SpaceDoc::Interval {
                components: components.iter().map(|c| (fmt_q(&c.lo), fmt_q(&c.hi))).collect(),
            },
        }
    }
}

impl HomeoDoc {
    pub fn build(&self, space: &Space) -> Result<PartialHomeo, SpaceError> {
        match (self, space) {
            (HomeoDoc::Discrete(m), Space::Discrete { .. }) => {
                let mut map = BTreeMap::new();
                for (a, b) in m {
                    let x = space.point_index(a).ok_or_else(|| SpaceError::UnknownPoint(a.clone()))?;
                    let y = space.point_index(b).ok_or_else(|| SpaceError::UnknownPoint(b.clone()))?;
                    map.insert(x, y);
                }
                PartialHomeo::discrete(map)
            }
            (HomeoDoc::Interval(pieces), Space::Interval { .. }) => {
                let mut out = Vec::new();
                for p in pieces {
                    let bad = |s: &str| SpaceError::BadNumber(s.to_string());
                    out.push(AffinePiece {
                        dom: parse_interval(&p.dom).ok_or_else(|| bad(&p.dom))?,
                        slope: parse_q(&p.slope).ok_or_else(|| bad(&p.slope))?,
                        offset: parse_q(&p.offset).ok_or_else(|| bad(&p.offset))?,
                    });
                }
                PiecewiseAffine::new(out)
                    .map(PartialHomeo::Interval)
                    .map_err(|e| SpaceError::Affine(e.to_string()))
            }
            // an empty JSON map or list is ambiguous between the two kinds
            (HomeoDoc::Discrete(m), Space::Interval { .. }) if m.is_empty() => {
                Ok(PartialHomeo::Interval(PiecewiseAffine::empty()))
            }
            (HomeoDoc::Interval(p), Space::Discrete { .. }) if p.is_empty() => Ok(PartialHomeo::Discrete(BTreeMap::new())),
            _ => Err(SpaceError::KindMismatch),
        }
    }

    pub fn from_homeo(f: &PartialHomeo, space: &Space) -> Self {
        match f {
            PartialHomeo::Discrete(m) => HomeoDoc::Discrete(
                m.iter()
                    .map(|(&a, &b)| (space.fmt_point(&Point::Discrete(a)), space.fmt_point(&Point::Discrete(b))))
                    .collect(),
            ),
            PartialHomeo::Interval(f) => HomeoDoc::Interval(
                f.pieces()
                    .iter()
                    .map(|p| PieceDoc {
                        dom: p.dom.to_string(),
                        slope: fmt_q(&p.slope),
                        offset: fmt_q(&p.offset),
                    })
                    .collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> Interval {
        parse_interval(s).unwrap()
    }

    fn s5_semigroup() -> InverseSemigroup {
        InverseSemigroup::from_table(
            vec!["e".into(), "1".into(), "sigma".into()],
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]],
            None,
        )
        .unwrap()
    }

    fn s5_action() -> Result<Action, ActionError> {
        let space = Space::interval(vec![iv("[-1,1]")]).unwrap();
        let ue = IntervalSet::single(iv("[-1,0)"));
        let all = IntervalSet::single(iv("[-1,1]"));
        let theta = vec![
            PartialHomeo::Interval(PiecewiseAffine::identity(&ue)),
            PartialHomeo::Interval(PiecewiseAffine::identity(&all)),
            PartialHomeo::Interval(PiecewiseAffine::identity(&all)),
        ];
        Action::new(s5_semigroup(), space, theta)
    }

    fn swap() -> PartialHomeo {
        PartialHomeo::discrete([(0, 1), (1, 0)].into()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let d = Space::discrete(&["x0", "x1"]);
        let u = OpenSet::Discrete([0].into());
        assert_eq!(d.closure(&u), u);
        let i = Space::interval(vec![iv("[-1,1]")]).unwrap();
        let u = OpenSet::Interval(IntervalSet::single(iv("[-1,0)")));
        assert_eq!(i.closure(&u), OpenSet::Interval(IntervalSet::single(iv("[-1,0]"))));
        let u = OpenSet::Interval(IntervalSet::from_intervals([iv("(0,1/2)"), iv("(1/2,1)")]));
        assert_eq!(i.closure(&u), OpenSet::Interval(IntervalSet::single(iv("[0,1]"))));
    }

    #[test]
    fn openness_is_relative_to_components() {
        let i = Space::interval(vec![iv("[-1,1]"), iv("[2,2]")]).unwrap();
        let ok = |s: &[&str]| i.is_open(&OpenSet::Interval(IntervalSet::from_intervals(s.iter().map(|x| iv(x)))));
        assert!(ok(&["[-1,0)"]));
        assert!(ok(&["[2,2]"]));
        assert!(ok(&["(0,1]"]));
        assert!(!ok(&["[0,1/2)"]));
        assert!(!ok(&["(0,3/2)"]));
    }

    #[test]
    fn compose_examples() {
        let u = OpenSet::Interval(IntervalSet::single(iv("(0,1)")));
        let id = PartialHomeo::identity(&u);
        assert_eq!(id.compose(&id), id);
        let sw = swap();
        assert_eq!(sw.compose(&sw), PartialHomeo::identity(&OpenSet::Discrete([0, 1].into())));
        let f = PartialHomeo::identity(&OpenSet::Discrete([0].into()));
        let g = PartialHomeo::discrete([(0, 1)].into()).unwrap();
        assert_eq!(f.compose(&g), PartialHomeo::Discrete(BTreeMap::new()));
    }

    #[test]
    fn interval_action_is_valid() {
        let a = s5_action().unwrap();
        assert_eq!(a.dom(0), OpenSet::Interval(IntervalSet::single(iv("[-1,0)"))));
        let half = a.restrict_to_components(&[iv("[1/4,1]")]).unwrap();
        assert!(half.dom(0).is_empty());
    }

    #[test]
    fn flip_action_and_inconsistent_variant() {
        let sg = InverseSemigroup::cyclic_group(2);
        let space = Space::discrete(&["x", "y"]);
        let id = PartialHomeo::identity(&space.whole());
        assert!(Action::new(sg.clone(), space.clone(), vec![id.clone(), swap()]).is_ok());
        // theta(g) = id is consistent on its own; declaring theta(g∘g) = swap is not
        let err = Action::new(sg, space, vec![swap(), id]).unwrap_err();
        assert!(matches!(
            err,
            ActionError::IdempotentNotIdentity { .. } | ActionError::NotHomomorphism { .. }
        ));
    }

    #[test]
    fn non_homomorphism_carries_checkable_point() {
        // Z/2 acting on [-1,1] by reflection, with the product table broken by
        // declaring theta(g) = identity on half the space.
        let sg = InverseSemigroup::cyclic_group(3);
        let space = Space::interval(vec![iv("[-1,1]")]).unwrap();
        let refl = PartialHomeo::Interval(
            PiecewiseAffine::new(vec![AffinePiece {
                dom: iv("[-1,1]"),
                slope: qi(-1),
                offset: qi(0),
            }])
            .unwrap(),
        );
        let id = PartialHomeo::identity(&space.whole());
        let err = Action::new(sg.clone(), space, vec![id, refl.clone(), refl.clone()]).unwrap_err();
        match err {
            ActionError::NotInverse { s, x } | ActionError::NotHomomorphism { s, x, .. } => {
                assert!(s < 3);
                assert!(matches!(x, Point::Real(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn docs_round_trip() {
        let doc = SpaceDoc::Interval {
            components: vec![("-1".into(), "1".into())],
        };
        let space = doc.build().unwrap();
        assert_eq!(SpaceDoc::from_space(&space), doc);
        let h = HomeoDoc::Interval(vec![PieceDoc {
            dom: "[-1,0)".into(),
            slope: "1".into(),
            offset: "0".into(),
        }]);
        let f = h.build(&space).unwrap();
        assert_eq!(HomeoDoc::from_homeo(&f, &space), h);
        assert!(matches!(
            HomeoDoc::Discrete([("x".to_string(), "y".to_string())].into()).build(&space),
            Err(SpaceError::KindMismatch)
        ));
    }
}
