//! The groupoid of germs of an inverse-semigroup action.
//!
//! Germs `[s,x]` are materialized over *cells*: the points of a discrete
//! space, or, for interval spaces, the points and open gaps of a finite
//! `θ`-invariant set of breakpoints. Every `θ_s` maps cells onto cells and
//! every `U_e` is a union of cells, so germ identity, composition and
//! inversion are finite tables indexed by `(s, cell)`.

mod finite;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fellbundle::FellBundle;
use crate::invsgp::{Elem, InverseSemigroup};
use crate::spaces::{fmt_q, Action, Interval, IntervalSet, OpenSet, PartialHomeo, Point, Space, Q};

pub use finite::{
    check_wide, ArrowDoc, CocycleError, FiniteGroupoid, GroupoidCocycle, GroupoidDoc, GroupoidError, WideFailure,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("basic open for {s} is not contained in the domain of its element")]
    OutsideDomain { s: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    /// A point of a discrete space.
    Point(usize),
    /// A breakpoint of an interval space.
    Real(Q),
    /// An open gap between consecutive breakpoints.
    Open(Interval),
}

impl Cell {
    /// A point of the cell; the midpoint for open cells.
    pub fn sample(&self) -> Point {
        match self {
            Cell::Point(i) => Point::Discrete(*i),
            Cell::Real(x) => Point::Real(x.clone()),
            Cell::Open(i) => Point::Real(i.sample()),
        }
    }

    pub fn is_open(&self) -> bool {
        matches!(self, Cell::Open(_))
    }

    fn as_set(&self) -> OpenSet {
        match self {
            Cell::Point(i) => OpenSet::Discrete([*i].into()),
            Cell::Real(x) => OpenSet::Interval(IntervalSet::single(Interval::point(x.clone()))),
            Cell::Open(i) => OpenSet::Interval(IntervalSet::single(i.clone())),
        }
    }
}

/// A germ `[s, cell]` with `s` the least equivalent element in input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Germ {
    pub s: Elem,
    pub cell: usize,
}

/// Printable germ: element label and a point label (an interior sample for
/// open cells).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GermRef(pub String, pub String);

impl fmt::Display for GermRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.0, self.1)
    }
}

/// `O(s, U) = {[s,x] : x ∈ U}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicOpen {
    pub s: Elem,
    pub u: OpenSet,
}

/// All germs with a given representative, `{[s,x] : x ∈ set}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GermFamily {
    pub s: String,
    pub set: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HausdorffReport {
    pub hausdorff: bool,
    pub witness: Option<(GermRef, GermRef)>,
    pub non_separated: Vec<(GermRef, GermRef)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WideReport {
    pub wide: bool,
    pub failure: Option<WideFailure>,
    /// Germs named by the failure, in the order of its fields.
    pub witness: Vec<GermRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub injective: bool,
    pub witness: Option<(String, String)>,
    /// `None` when the semigroup has no zero.
    pub continuous: Option<bool>,
    pub semi_faithful: bool,
    /// `A_0 = {0}`; `None` when the semigroup has no zero.
    pub zero_fiber_trivial: Option<bool>,
    pub hypotheses_hold: bool,
    /// Hypotheses hold but the map is not injective.
    pub fatal: bool,
}

#[derive(Debug, Clone)]
pub struct GermGroupoid {
    action: Action,
    cells: Vec<Cell>,
    cell_theta: Vec<Vec<Option<usize>>>,
    germs: Vec<Germ>,
    class: HashMap<(Elem, usize), usize>,
    range: Vec<usize>,
    inverse: Vec<usize>,
    unit_at: Vec<Option<usize>>,
    by_source: Vec<Vec<usize>>,
}

fn interval_cells(action: &Action, extra: &[Q]) -> Vec<Cell> {
    let Space::Interval { components } = action.space() else {
        unreachable!("interval cells on a discrete space")
    };
    let inside = |x: &Q| components.iter().any(|c| c.contains(x));
    let mut pts: BTreeSet<Q> = components.iter().flat_map(|c| [c.lo.clone(), c.hi.clone()]).collect();
    for f in action.thetas() {
        if let PartialHomeo::Interval(pa) = f {
            pts.extend(pa.breakpoints().into_iter().filter(|x| inside(x)));
        }
    }
    pts.extend(extra.iter().filter(|x| inside(x)).cloned());
    // orbits under a finite semigroup: one pass closes the set
    let base: Vec<Q> = pts.iter().cloned().collect();
    for f in action.thetas() {
        for x in &base {
            if let Some(Point::Real(y)) = f.apply(&Point::Real(x.clone())) {
                pts.insert(y);
            }
        }
    }
    let mut cells = Vec::new();
    for c in components {
        let local: Vec<&Q> = pts.iter().filter(|x| c.contains(x)).collect();
        for (i, x) in local.iter().enumerate() {
            cells.push(Cell::Real((*x).clone()));
            if let Some(next) = local.get(i + 1) {
                cells.push(Cell::Open(Interval::open((*x).clone(), (*next).clone()).expect("sorted breakpoints")));
            }
        }
    }
    cells
}

impl GermGroupoid {
    pub fn build(action: &Action) -> Self {
        Self::build_refined(action, &[])
    }

    /// Like [`GermGroupoid::build`], with additional interval breakpoints.
    pub fn build_refined(action: &Action, extra: &[Q]) -> Self {
        let cells = match action.space() {
            Space::Discrete { points } => (0..points.len()).map(Cell::Point).collect(),
            Space::Interval { .. } => interval_cells(action, extra),
        };
        let sg = action.semigroup();
        let locate = |p: &Point| -> Option<usize> {
            match p {
                Point::Discrete(i) => Some(*i),
                Point::Real(x) => cells.iter().position(|c| match c {
                    Cell::Real(y) => x == y,
                    Cell::Open(i) => i.contains(x),
                    Cell::Point(_) => false,
                }),
            }
        };
        let cell_theta: Vec<Vec<Option<usize>>> = sg
            .elements()
            .map(|s| {
                cells
                    .iter()
                    .map(|c| action.theta(s).apply(&c.sample()).and_then(|p| locate(&p)))
                    .collect()
            })
            .collect();
        let idems = sg.idempotents().to_vec();
        let equal = |s: Elem, t: Elem, c: usize| {
            idems
                .iter()
                .any(|&e| cell_theta[e][c].is_some() && sg.mul(s, e) == sg.mul(t, e))
        };
        let mut germs = Vec::new();
        let mut class = HashMap::new();
        for c in 0..cells.len() {
            let mut reps: Vec<(Elem, usize)> = Vec::new();
            for s in sg.elements().filter(|&s| cell_theta[s][c].is_some()) {
                let id = match reps.iter().find(|&&(t, _)| equal(s, t, c)) {
                    Some(&(_, id)) => id,
                    None => {
                        germs.push(Germ { s, cell: c });
                        reps.push((s, germs.len() - 1));
                        germs.len() - 1
                    }
                };
                class.insert((s, c), id);
            }
        }
        let range: Vec<usize> = germs
            .iter()
            .map(|g| cell_theta[g.s][g.cell].expect("germ cell lies in the domain"))
            .collect();
        let inverse = germs
            .iter()
            .zip(&range)
            .map(|(g, &r)| class[&(sg.star(g.s), r)])
            .collect();
        let unit_at = (0..cells.len())
            .map(|c| idems.iter().find(|&&e| cell_theta[e][c].is_some()).map(|&e| class[&(e, c)]))
            .collect();
        let mut by_source = vec![Vec::new(); cells.len()];
        for (i, g) in germs.iter().enumerate() {
            by_source[g.cell].push(i);
        }
        Self {
            action: action.clone(),
            cells,
            cell_theta,
            germs,
            class,
            range,
            inverse,
            unit_at,
            by_source,
        }
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        self.action.semigroup()
    }

    pub fn space(&self) -> &Space {
        self.action.space()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_label(&self, c: usize) -> String {
        match &self.cells[c] {
            Cell::Point(i) => self.space().fmt_point(&Point::Discrete(*i)),
            Cell::Real(x) => fmt_q(x),
            Cell::Open(i) => i.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.germs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.germs.is_empty()
    }

    pub fn germs(&self) -> &[Germ] {
        &self.germs
    }

    pub fn germ(&self, g: usize) -> Germ {
        self.germs[g]
    }

    /// The germ `[s, cell]`, if `cell ⊆ dom θ_s`.
    pub fn germ_of(&self, s: Elem, cell: usize) -> Option<usize> {
        self.class.get(&(s, cell)).copied()
    }

    /// The germ `[s, x]` at an arbitrary point.
    pub fn germ_at(&self, s: Elem, x: &Point) -> Option<usize> {
        let c = self.locate(x)?;
        self.germ_of(s, c)
    }

    pub fn locate(&self, x: &Point) -> Option<usize> {
        match x {
            Point::Discrete(i) => (*i < self.cells.len()).then_some(*i),
            Point::Real(q) => self.cells.iter().position(|c| match c {
                Cell::Real(y) => q == y,
                Cell::Open(i) => i.contains(q),
                Cell::Point(_) => false,
            }),
        }
    }

    /// `θ_s` on cells.
    pub fn cell_theta(&self, s: Elem, cell: usize) -> Option<usize> {
        self.cell_theta[s][cell]
    }

    pub fn source(&self, g: usize) -> usize {
        self.germs[g].cell
    }

    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// `[s,θ_t(y)]·[t,y] = [st,y]`.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        if self.source(g) != self.range(h) {
            return None;
        }
        let st = self.semigroup().mul(self.germs[g].s, self.germs[h].s);
        Some(self.class[&(st, self.germs[h].cell)])
    }

    /// The unit germ over a cell, if the cell lies in some `U_e`.
    pub fn unit_at(&self, cell: usize) -> Option<usize> {
        self.unit_at[cell]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit_at[self.source(g)] == Some(g)
    }

    /// Cells carrying a unit, i.e. the unit space.
    pub fn unit_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.unit_at[c].is_some()).collect()
    }

    /// The source fiber `G_x` over a cell.
    pub fn from_cell(&self, cell: usize) -> &[usize] {
        &self.by_source[cell]
    }

    /// All composable pairs `(g, h, gh)`.
    pub fn composable(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for h in 0..self.len() {
            for &g in &self.by_source[self.range[h]] {
                out.push((g, h, self.compose(g, h).expect("composable")));
            }
        }
        out
    }

    pub fn germ_ref(&self, g: usize) -> GermRef {
        let germ = self.germs[g];
        let label = self.semigroup().label(germ.s).to_string();
        GermRef(label, self.space().fmt_point(&self.cells[germ.cell].sample()))
    }

    /// Germs grouped by representative, with the union of their cells.
    pub fn families(&self) -> Vec<GermFamily> {
        let mut by_rep: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
        for g in &self.germs {
            by_rep.entry(g.s).or_default().push(g.cell);
        }
        by_rep
            .into_iter()
            .map(|(s, cells)| {
                let set = cells
                    .iter()
                    .map(|&c| self.cells[c].as_set())
                    .reduce(|a, b| a.union(&b))
                    .expect("nonempty family");
                GermFamily {
                    s: self.semigroup().label(s).to_string(),
                    set: self.space().fmt_set(&set),
                }
            })
            .collect()
    }

    /// Non-separated pairs: distinct `[s,x], [t,x]` with
    /// `x ∈ closure(∪{U_e ∩ dom s ∩ dom t : se = te})`. Only breakpoint cells
    /// can carry such `x`: on an open cell the germ pattern is locally
    /// constant.
    pub fn hausdorff(&self) -> HausdorffReport {
        let sg = self.semigroup();
        let act = &self.action;
        let mut pairs = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.is_open() {
                continue;
            }
            let x = cell.sample();
            let here = &self.by_source[c];
            for (i, &g) in here.iter().enumerate() {
                for &h in &here[i + 1..] {
                    let (s, t) = (self.germs[g].s, self.germs[h].s);
                    let both = act.dom(s).intersect(&act.dom(t));
                    let agree = sg
                        .idempotents()
                        .iter()
                        .filter(|&&e| sg.mul(s, e) == sg.mul(t, e))
                        .fold(self.space().empty_set(), |acc, &e| acc.union(&act.dom(e).intersect(&both)));
                    if self.space().closure(&agree).contains(&x) {
                        pairs.push((self.germ_ref(g), self.germ_ref(h)));
                    }
                }
            }
        }
        HausdorffReport {
            hausdorff: pairs.is_empty(),
            witness: pairs.first().cloned(),
            non_separated: pairs,
        }
    }

    /// `O_s = O(s, U_{s*s})`.
    pub fn bissection_os(&self, s: Elem) -> BasicOpen {
        BasicOpen {
            s,
            u: self.action.dom(s),
        }
    }

    pub fn os_germs(&self, s: Elem) -> BTreeSet<usize> {
        (0..self.cells.len()).filter_map(|c| self.germ_of(s, c)).collect()
    }

    /// Germs of a basic open; `None` when `u` cuts through a cell (refine
    /// the groupoid with the endpoints of `u` first).
    pub fn basic_open_germs(&self, b: &BasicOpen) -> Result<Option<BTreeSet<usize>>, GermError> {
        if !b.u.is_subset(&self.action.dom(b.s)) {
            return Err(GermError::OutsideDomain {
                s: self.semigroup().label(b.s).to_string(),
            });
        }
        let mut out = BTreeSet::new();
        for (c, cell) in self.cells.iter().enumerate() {
            let set = cell.as_set();
            if set.is_subset(&b.u) {
                out.insert(self.germ_of(b.s, c).expect("cell inside the domain"));
            } else if !set.intersect(&b.u).is_empty() {
                return Ok(None);
            }
        }
        Ok(Some(out))
    }

    pub fn set_product(&self, u: &BTreeSet<usize>, v: &BTreeSet<usize>) -> BTreeSet<usize> {
        u.iter()
            .flat_map(|&g| v.iter().filter_map(move |&h| self.compose(g, h)))
            .collect()
    }

    pub fn set_inverse(&self, u: &BTreeSet<usize>) -> BTreeSet<usize> {
        u.iter().map(|&g| self.inverse[g]).collect()
    }

    /// First `(s, t)` with `O_s·O_t ≠ O_st`, or `(s, s*)` with
    /// `O_s⁻¹ ≠ O_{s*}`.
    pub fn bissection_identity_witness(&self) -> Option<(Elem, Elem)> {
        let sg = self.semigroup();
        let os: Vec<BTreeSet<usize>> = sg.elements().map(|s| self.os_germs(s)).collect();
        for s in sg.elements() {
            if self.set_inverse(&os[s]) != os[sg.star(s)] {
                return Some((s, sg.star(s)));
            }
            for t in sg.elements() {
                if self.set_product(&os[s], &os[t]) != os[sg.mul(s, t)] {
                    return Some((s, t));
                }
            }
        }
        None
    }

    /// Covering and interpolation for a family of basic opens, refining the
    /// cells to the family's endpoints when needed.
    pub fn is_wide(&self, family: &[BasicOpen]) -> Result<WideReport, GermError> {
        let mut sets = Vec::with_capacity(family.len());
        for b in family {
            match self.basic_open_germs(b)? {
                Some(s) => sets.push(s),
                None => {
                    let extra: Vec<Q> = family
                        .iter()
                        .flat_map(|b| match &b.u {
                            OpenSet::Interval(s) => s.endpoints(),
                            OpenSet::Discrete(_) => Vec::new(),
                        })
                        .collect();
                    return GermGroupoid::build_refined(&self.action, &extra).is_wide(family);
                }
            }
        }
        // open cells first: their witnesses are interior points
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&g| (!self.cells[self.source(g)].is_open(), g));
        let result = check_wide(&sets, &order, |g| self.source(g), |g| self.range(g));
        let witness = match &result {
            Ok(()) => Vec::new(),
            Err(WideFailure::NotABissection { arrows: (a, b), .. }) => vec![self.germ_ref(*a), self.germ_ref(*b)],
            Err(WideFailure::NotCovered { arrow }) | Err(WideFailure::NoInterpolation { arrow, .. }) => {
                vec![self.germ_ref(*arrow)]
            }
        };
        Ok(WideReport {
            wide: result.is_ok(),
            failure: result.err(),
            witness,
        })
    }
}

/// Germ equality `[s,x] = [t,x]`: some idempotent `e` with `x ∈ U_e` and
/// `se = te`, for `x ∈ dom θ_s ∩ dom θ_t`.
pub fn germ_equal(act: &Action, s: Elem, t: Elem, x: &Point) -> bool {
    let sg = act.semigroup();
    act.dom(s).contains(x)
        && act.dom(t).contains(x)
        && sg
            .idempotents()
            .iter()
            .any(|&e| act.dom(e).contains(x) && sg.mul(s, e) == sg.mul(t, e))
}

/// Injectivity of `s ↦ O_s` for the germ groupoid of a bundle's action,
/// together with the hypotheses of the injectivity criterion (continuity
/// of `S` and semi-faithfulness).
pub fn map_s_to_os_injective(b: &FellBundle) -> InjectivityReport {
    let act = b.topological_action();
    let g = GermGroupoid::build(act);
    let sg = act.semigroup();
    let os: Vec<BTreeSet<usize>> = sg.elements().map(|s| g.os_germs(s)).collect();
    let mut witness = None;
    'outer: for s in sg.elements() {
        for t in s + 1..sg.len() {
            if os[s] == os[t] {
                witness = Some((sg.label(s).to_string(), sg.label(t).to_string()));
                break 'outer;
            }
        }
    }
    let continuous = sg.is_continuous().ok().map(|r| r.continuous);
    let idems = sg.idempotents();
    let doms: Vec<OpenSet> = idems.iter().map(|&e| act.dom(e)).collect();
    let distinct = (0..doms.len()).all(|i| (i + 1..doms.len()).all(|j| doms[i] != doms[j]));
    let empty_only_zero = idems
        .iter()
        .zip(&doms)
        .all(|(&e, d)| !d.is_empty() || sg.zero() == Some(e));
    let semi_faithful = distinct && empty_only_zero;
    let zero_fiber_trivial = sg.zero().map(|z| b.dim(z) == 0);
    let hypotheses_hold = continuous == Some(true) && semi_faithful;
    let injective = witness.is_none();
    InjectivityReport {
        injective,
        witness,
        continuous,
        semi_faithful,
        zero_fiber_trivial,
        hypotheses_hold,
        fatal: hypotheses_hold && !injective,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::spaces::{parse_interval, q, qi};
    use proptest::prelude::*;

    fn interval() -> GermGroupoid {
        GermGroupoid::build(&fixtures::interval_action())
    }

    fn real(x: Q) -> Point {
        Point::Real(x)
    }

    #[test]
    fn germ_equality_in_the_interval_action() {
        let act = fixtures::interval_action();
        assert!(germ_equal(&act, 1, 2, &real(q(-1, 2))));
        assert!(!germ_equal(&act, 1, 2, &real(q(1, 2))));
        assert!(germ_equal(&act, 2, 2, &real(q(1, 2))));
        assert!(!germ_equal(&act, 1, 2, &real(qi(0))));
    }

    #[test]
    fn interval_germ_families() {
        let g = interval();
        let fams = g.families();
        let want = [("e", "[-1,0)"), ("1", "[0,1]"), ("σ", "[0,1]")];
        assert_eq!(fams.len(), 3);
        for (f, (s, set)) in fams.iter().zip(want) {
            assert_eq!((f.s.as_str(), f.set.as_str()), (s, set));
        }
        // [σ,x]·[σ,x] = [1,x] on [0,1]
        for x in [qi(0), q(1, 2), qi(1)] {
            let sx = g.germ_at(2, &real(x.clone())).unwrap();
            assert_eq!(g.compose(sx, sx), g.germ_at(1, &real(x)));
        }
    }

    #[test]
    fn interval_is_not_hausdorff_only_at_the_origin() {
        let r = interval().hausdorff();
        assert!(!r.hausdorff);
        let w = (GermRef("1".into(), "0".into()), GermRef("σ".into(), "0".into()));
        assert_eq!(r.witness, Some(w.clone()));
        assert_eq!(r.non_separated, vec![w]);
    }

    #[test]
    fn interval_restricted_to_right_part_is_hausdorff() {
        let act = fixtures::interval_action()
            .restrict_to_components(&[parse_interval("[1/4,1]").unwrap()])
            .unwrap();
        assert!(GermGroupoid::build(&act).hausdorff().hausdorff);
    }

    #[test]
    fn discrete_fixtures() {
        let g = GermGroupoid::build(fixtures::z2_flip().action());
        assert_eq!(g.len(), 4);
        assert_eq!(g.unit_cells().len(), 2);
        assert!(g.hausdorff().hausdorff);
        let g = GermGroupoid::build(fixtures::semilattice().action());
        assert_eq!(g.len(), 2);
        assert!((0..2).all(|x| g.is_unit(x)));
        let g = GermGroupoid::build(fixtures::zero_bundle().action());
        assert!(g.is_empty());
        assert!(g.os_germs(0).is_empty() && g.os_germs(1).is_empty());
    }

    #[test]
    fn bissections_of_the_interval_groupoid() {
        let g = interval();
        let oe = g.os_germs(0);
        assert!(oe.iter().all(|&x| g.is_unit(x)));
        assert_eq!(g.bissection_os(0).u, OpenSet::Interval(IntervalSet::single(parse_interval("[-1,0)").unwrap())));
        assert_eq!(g.bissection_identity_witness(), None);
        let all: Vec<BasicOpen> = (0..3).map(|s| g.bissection_os(s)).collect();
        assert!(g.is_wide(&all).unwrap().wide);
        let missing = &all[..2];
        let r = g.is_wide(missing).unwrap();
        assert!(!r.wide);
        assert_eq!(r.witness, vec![GermRef("σ".into(), "1/2".into())]);
    }

    #[test]
    fn wideness_refines_cells() {
        let g = interval();
        let split = |s, i: &str| BasicOpen {
            s,
            u: OpenSet::Interval(IntervalSet::single(parse_interval(i).unwrap())),
        };
        let mut fam: Vec<BasicOpen> = (0..3).map(|s| g.bissection_os(s)).collect();
        fam.push(split(2, "(0,1/3)"));
        // (0,1/3) ∩ O_σ = (0,1/3), itself a member: still wide
        assert!(g.is_wide(&fam).unwrap().wide);
        assert!(matches!(g.basic_open_germs(&split(0, "(0,1)")), Err(GermError::OutsideDomain { .. })));
    }

    #[test]
    fn injectivity_reports() {
        let r = map_s_to_os_injective(&fixtures::zero_bundle());
        assert!(!r.injective && !r.fatal && !r.semi_faithful);
        let r = map_s_to_os_injective(&fixtures::semilattice());
        assert!(r.injective && r.hypotheses_hold && r.continuous == Some(true));
        assert_eq!(r.zero_fiber_trivial, Some(false));
        let r = map_s_to_os_injective(&fixtures::z2_flip());
        assert!(r.injective && r.continuous.is_none() && r.semi_faithful);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn groupoid_axioms_on_random_fixtures(seed in 0u64..1000) {
            let b = fixtures::random_bundle(seed, &fixtures::RandomParams::small());
            let g = GermGroupoid::build(b.action());
            prop_assert!(g.hausdorff().hausdorff);
            for x in 0..g.len() {
                prop_assert_eq!(g.inverse(g.inverse(x)), x);
                prop_assert_eq!(g.range(g.inverse(x)), g.source(x));
                let u = g.unit_at(g.source(x)).unwrap();
                prop_assert_eq!(g.compose(x, u), Some(x));
                prop_assert!(g.is_unit(g.compose(g.inverse(x), x).unwrap()));
            }
            for (a, c, ac) in g.composable() {
                for &d in g.composable().iter().filter(|p| p.0 == c).map(|p| &p.1) {
                    let cd = g.compose(c, d).unwrap();
                    prop_assert_eq!(g.compose(ac, d), g.compose(a, cd));
                }
            }
            prop_assert_eq!(g.bissection_identity_witness(), None);
            // units biject with the points of ∪U_e; source on O_s realizes θ_s
            let sg = g.semigroup();
            for s in sg.elements() {
                let os = g.os_germs(s);
                let srcs: BTreeSet<usize> = os.iter().map(|&x| g.source(x)).collect();
                prop_assert_eq!(srcs.len(), os.len());
                for &x in &os {
                    prop_assert_eq!(Some(g.range(x)), b.theta_at(s, g.source(x)));
                }
            }
            let all: Vec<BasicOpen> = sg.elements().map(|s| g.bissection_os(s)).collect();
            prop_assert!(g.is_wide(&all).unwrap().wide);
        }
    }
}
