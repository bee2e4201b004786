//! Semi-abelian Fell bundles over finite inverse semigroups in
//! source-trivialized coordinates.
//!
//! A fiber `A_s` is a space of `b×b`-matrix valued functions on the
//! coordinate points of `U_{s*s}` (`b = 1` for every bundle that is meant to
//! be semi-abelian). With `θ` the coordinate action and `ω` the twist,
//!
//! ```text
//! (a·b)(x)      = a(θ_t x) · b(x) · ω(s,t)(x)        x ∈ U_{(st)*(st)}
//! a*(θ_s x)     = a(x)† · conj(ω(s*,s)(x))           x ∈ U_{s*s}
//! j_{t,s}(a)    = a, extended by zero
//! ```
//!
//! Bundles over interval spaces are sampled onto a finite invariant point
//! set; the exact interval action is kept alongside for topological queries.

mod axioms;
mod present;
mod theta;

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::invsgp::{Elem, InverseSemigroup};
use crate::linalg::{op_norm, CMat, C64, ONE, ZERO};
use crate::spaces::{fmt_q, Action, ActionError, OpenSet, PartialHomeo, Point, Space, Q};

pub use axioms::{Axiom, AxiomReport, AxiomViolation, SaturationReport};
pub use present::{build_bundle, compile_groupoid, CompiledGroupoid, OmegaSpec, Presentation};

/// Tolerance for cocycle checks and grid-model comparisons.
pub const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BundleError {
    #[error("the coordinate action must live on a discrete space")]
    NotDiscrete,
    #[error("cocycle value at ({s},{t}) point {x} is not unimodular")]
    CocycleNotUnimodular { s: Elem, t: Elem, x: usize },
    #[error("cocycle is not normalized at ({s},{t}) point {x}")]
    CocycleNotNormalized { s: Elem, t: Elem, x: usize },
    #[error("cocycle identity fails at ({r},{s},{t}) point {x}")]
    CocycleNotAssociative { r: Elem, s: Elem, t: Elem, x: usize },
    #[error("subsemigroup of bissections is not wide: {0}")]
    SubsemigroupNotWide(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("bundle is not semi-abelian")]
    NotSemiAbelian,
    #[error("no solution for theta at point {x}")]
    NoSolution { x: usize },
    #[error("elements {a1} and {a2} of A_{s} disagree on theta at point {x}")]
    GluingConflict { s: Elem, a1: usize, a2: usize, x: usize },
    #[error("point {x} of U_(s*s) for s={s} is not covered by any dom(a)")]
    NotSaturated { s: Elem, x: usize },
    #[error("fiber elements live over different semigroup elements ({0} vs {1})")]
    FiberMismatch(Elem, Elem),
    #[error("{s} is not below {t}")]
    NotBelow { s: Elem, t: Elem },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationKind {
    TwistedAction,
    GroupoidLineBundle,
}

/// An element of the fiber `A_s`: one `b×b` block per coordinate point,
/// zero off the support of the fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberElement {
    pub s: Elem,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone)]
pub struct FellBundle {
    action: Action,
    symbolic: Option<Action>,
    coords: Vec<Point>,
    block: usize,
    theta: Vec<Vec<Option<usize>>>,
    omega: Vec<Vec<C64>>,
    support: Vec<Vec<bool>>,
    incl_scale: Vec<C64>,
    zero_tol: f64,
    kind: PresentationKind,
}

impl FellBundle {
    /// A twisted-action bundle over a discrete action. `omega(s, t, x)` is
    /// queried for `x ∈ U_{(st)*(st)}`.
    pub fn twisted_action(
        action: Action,
        omega: impl Fn(Elem, Elem, usize) -> C64,
        block: usize,
    ) -> Result<Self, BundleError> {
        let b = Self::unchecked(action, omega, block)?;
        b.check_cocycle()?;
        Ok(b)
    }

    pub(crate) fn unchecked(
        action: Action,
        omega: impl Fn(Elem, Elem, usize) -> C64,
        block: usize,
    ) -> Result<Self, BundleError> {
        let npts = match action.space() {
            Space::Discrete { points } => points.len(),
            Space::Interval { .. } => return Err(BundleError::NotDiscrete),
        };
        let sg = action.semigroup();
        let n = sg.len();
        let theta: Vec<Vec<Option<usize>>> = (0..n)
            .map(|s| {
                (0..npts)
                    .map(|x| match action.theta(s).apply(&Point::Discrete(x)) {
                        Some(Point::Discrete(y)) => Some(y),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let mut om = vec![vec![ONE; npts]; n * n];
        for s in 0..n {
            for t in 0..n {
                let st = sg.mul(s, t);
                for x in 0..npts {
                    if theta[st][x].is_some() {
                        om[s * n + t][x] = omega(s, t, x);
                    }
                }
            }
        }
        let support = (0..n).map(|s| theta[s].iter().map(Option::is_some).collect()).collect();
        Ok(Self {
            coords: (0..npts).map(Point::Discrete).collect(),
            action,
            symbolic: None,
            block: block.max(1),
            theta,
            omega: om,
            support,
            incl_scale: vec![ONE; n * n],
            zero_tol: 0.0,
            kind: PresentationKind::TwistedAction,
        })
    }

    /// Samples a bundle over an interval action onto an invariant finite
    /// point set: `samples` equally spaced points per component, every
    /// breakpoint of the action, closed under all `θ_s`.
    pub fn sampled(
        symbolic: Action,
        omega: impl Fn(Elem, Elem) -> C64,
        samples: usize,
    ) -> Result<Self, BundleError> {
        let Space::Interval { components } = symbolic.space() else {
            return Err(BundleError::Presentation("sampling needs an interval space".into()));
        };
        let mut pts: BTreeSet<Q> = BTreeSet::new();
        for c in components {
            if c.is_degenerate() || samples < 2 {
                pts.insert(c.lo.clone());
                continue;
            }
            let m = (samples - 1) as i64;
            for k in 0..=m {
                pts.insert(&c.lo + (&c.hi - &c.lo) * crate::spaces::q(k, m));
            }
        }
        for f in symbolic.thetas() {
            if let PartialHomeo::Interval(pa) = f {
                for b in pa.breakpoints() {
                    if symbolic.space().contains(&Point::Real(b.clone())) {
                        pts.insert(b);
                    }
                }
            }
        }
        loop {
            let mut grew = false;
            let current: Vec<Q> = pts.iter().cloned().collect();
            for f in symbolic.thetas() {
                for x in &current {
                    if let Some(Point::Real(y)) = f.apply(&Point::Real(x.clone())) {
                        grew |= pts.insert(y);
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let pts: Vec<Q> = pts.into_iter().collect();
        let space = Space::Discrete {
            points: pts.iter().map(fmt_q).collect(),
        };
        let index = |y: &Q| pts.binary_search(y).ok();
        let theta = symbolic
            .thetas()
            .iter()
            .map(|f| {
                let map = pts
                    .iter()
                    .enumerate()
                    .filter_map(|(i, x)| match f.apply(&Point::Real(x.clone())) {
                        Some(Point::Real(y)) => index(&y).map(|j| (i, j)),
                        _ => None,
                    })
                    .collect();
                PartialHomeo::Discrete(map)
            })
            .collect();
        let action = Action::new(symbolic.semigroup().clone(), space, theta)?;
        let mut b = Self::twisted_action(action, |s, t, _| omega(s, t), 1)?;
        b.coords = pts.into_iter().map(Point::Real).collect();
        b.symbolic = Some(symbolic);
        b.zero_tol = TOL;
        Ok(b)
    }

    /// The zero bundle over `sg`: every fiber is `{0}` (empty base space).
    pub fn zero_bundle(sg: InverseSemigroup) -> Self {
        let n = sg.len();
        let theta = vec![PartialHomeo::Discrete(Default::default()); n];
        let action = Action::new(sg, Space::empty(), theta).expect("empty action is valid");
        Self::twisted_action(action, |_, _, _| ONE, 1).expect("empty cocycle is valid")
    }

    fn check_cocycle(&self) -> Result<(), BundleError> {
        let sg = self.semigroup();
        let n = sg.len();
        for s in 0..n {
            for t in 0..n {
                let st = sg.mul(s, t);
                for x in self.points_of(st) {
                    let w = self.omega(s, t, x);
                    if (w.norm() - 1.0).abs() > TOL {
                        return Err(BundleError::CocycleNotUnimodular { s, t, x });
                    }
                    if (sg.is_idempotent(s) || sg.is_idempotent(t)) && (w - ONE).norm() > TOL {
                        return Err(BundleError::CocycleNotNormalized { s, t, x });
                    }
                }
            }
        }
        for r in 0..n {
            for s in 0..n {
                let rs = sg.mul(r, s);
                for t in 0..n {
                    let st = sg.mul(s, t);
                    let rst = sg.mul(rs, t);
                    for x in self.points_of(rst) {
                        let tx = self.theta[t][x].expect("x in dom(rst) lies in dom(t)");
                        let lhs = self.omega(r, s, tx) * self.omega(rs, t, x);
                        let rhs = self.omega(s, t, x) * self.omega(r, st, x);
                        if (lhs - rhs).norm() > TOL {
                            return Err(BundleError::CocycleNotAssociative { r, s, t, x });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        self.action.semigroup()
    }

    /// The action on coordinate points.
    pub fn action(&self) -> &Action {
        &self.action
    }

    /// The exact interval action, for sampled bundles.
    pub fn symbolic_action(&self) -> Option<&Action> {
        self.symbolic.as_ref()
    }

    /// Action used for topology: the exact one when present.
    pub fn topological_action(&self) -> &Action {
        self.symbolic.as_ref().unwrap_or(&self.action)
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn npoints(&self) -> usize {
        self.coords.len()
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub(crate) fn set_kind(&mut self, kind: PresentationKind) {
        self.kind = kind;
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn point_label(&self, x: usize) -> String {
        self.action.space().fmt_point(&Point::Discrete(x))
    }

    /// `θ_s(x)` in coordinates.
    pub fn theta_at(&self, s: Elem, x: usize) -> Option<usize> {
        self.theta[s][x]
    }

    pub fn omega(&self, s: Elem, t: Elem, x: usize) -> C64 {
        self.omega[s * self.semigroup().len() + t][x]
    }

    /// Coordinate points of `U_{s*s}`.
    pub fn points_of(&self, s: Elem) -> impl Iterator<Item = usize> + '_ {
        self.theta[s]
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|_| x))
    }

    /// Points on which `A_s` may be nonzero.
    pub fn support(&self, s: Elem) -> impl Iterator<Item = usize> + '_ {
        self.support[s].iter().enumerate().filter_map(|(x, &b)| b.then_some(x))
    }

    pub fn in_support(&self, s: Elem, x: usize) -> bool {
        self.support[s][x]
    }

    pub fn inclusion_scale(&self, t: Elem, s: Elem) -> C64 {
        self.incl_scale[t * self.semigroup().len() + s]
    }

    /// Replaces one cocycle value without any validation.
    pub fn with_omega_entry(mut self, s: Elem, t: Elem, x: usize, value: C64) -> Self {
        let n = self.semigroup().len();
        self.omega[s * n + t][x] = value;
        self
    }

    /// Rescales the inclusion `j_{t,s}` without any validation.
    pub fn with_inclusion_scale(mut self, t: Elem, s: Elem, c: C64) -> Self {
        let n = self.semigroup().len();
        self.incl_scale[t * n + s] = c;
        self
    }

    /// Shrinks `A_s` to functions vanishing at `x`, without validation.
    pub fn with_fiber_truncated(mut self, s: Elem, x: usize) -> Self {
        self.support[s][x] = false;
        self
    }

    // ---- fiber arithmetic ----

    fn bb(&self) -> usize {
        self.block * self.block
    }

    pub fn zero(&self, s: Elem) -> FiberElement {
        FiberElement {
            s,
            values: vec![ZERO; self.npoints() * self.bb()],
        }
    }

    pub fn dim(&self, s: Elem) -> usize {
        self.support(s).count() * self.bb()
    }

    /// Block of `a` at point `x`.
    pub fn at<'a>(&self, a: &'a FiberElement, x: usize) -> &'a [C64] {
        let bb = self.bb();
        &a.values[x * bb..(x + 1) * bb]
    }

    /// Scalar value of a `b = 1` element at `x`.
    pub fn value(&self, a: &FiberElement, x: usize) -> C64 {
        a.values[x * self.bb()]
    }

    /// Matrix-unit basis of `A_s`: one element per support point and block
    /// entry, ordered by point then entry.
    pub fn basis(&self, s: Elem) -> Vec<FiberElement> {
        let bb = self.bb();
        let mut out = Vec::new();
        for x in self.support(s) {
            for k in 0..bb {
                let mut a = self.zero(s);
                a.values[x * bb + k] = ONE;
                out.push(a);
            }
        }
        out
    }

    /// Basis element `δ_x ⊗ E_k` of `A_s`.
    pub fn delta(&self, s: Elem, x: usize, k: usize) -> FiberElement {
        let mut a = self.zero(s);
        a.values[x * self.bb() + k] = ONE;
        a
    }

    pub fn random_element(&self, s: Elem, rng: &mut impl Rng) -> FiberElement {
        let bb = self.bb();
        let mut a = self.zero(s);
        for x in self.support(s).collect::<Vec<_>>() {
            for k in 0..bb {
                a.values[x * bb + k] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        a
    }

    pub fn mul(&self, a: &FiberElement, b: &FiberElement) -> FiberElement {
        let sg = self.semigroup();
        let (s, t) = (a.s, b.s);
        let st = sg.mul(s, t);
        let mut out = self.zero(st);
        let bs = self.block;
        let bb = self.bb();
        for x in 0..self.npoints() {
            if self.theta[st][x].is_none() {
                continue;
            }
            let tx = self.theta[t][x].expect("dom(st) ⊆ dom(t)");
            let w = self.omega(s, t, x);
            let (ab, bbk) = (self.at(a, tx), self.at(b, x));
            let dst = &mut out.values[x * bb..(x + 1) * bb];
            for i in 0..bs {
                for j in 0..bs {
                    let mut acc = ZERO;
                    for k in 0..bs {
                        acc += ab[i * bs + k] * bbk[k * bs + j];
                    }
                    dst[i * bs + j] = acc * w;
                }
            }
        }
        out
    }

    pub fn star(&self, a: &FiberElement) -> FiberElement {
        let sg = self.semigroup();
        let s = a.s;
        let ss = sg.star(s);
        let mut out = self.zero(ss);
        let bs = self.block;
        let bb = self.bb();
        for x in 0..self.npoints() {
            let Some(y) = self.theta[s][x] else { continue };
            let w = self.omega(ss, s, x).conj();
            let src = self.at(a, x);
            let dst = &mut out.values[y * bb..(y + 1) * bb];
            for i in 0..bs {
                for j in 0..bs {
                    dst[i * bs + j] = src[j * bs + i].conj() * w;
                }
            }
        }
        out
    }

    /// `j_{t,s}(a)` for `s ≤ t`.
    pub fn incl(&self, t: Elem, a: &FiberElement) -> Result<FiberElement, BundleError> {
        let s = a.s;
        if !self.semigroup().leq(s, t) {
            return Err(BundleError::NotBelow { s, t });
        }
        let c = self.inclusion_scale(t, s);
        Ok(FiberElement {
            s: t,
            values: a.values.iter().map(|v| v * c).collect(),
        })
    }

    pub fn add(&self, a: &FiberElement, b: &FiberElement) -> Result<FiberElement, BundleError> {
        if a.s != b.s {
            return Err(BundleError::FiberMismatch(a.s, b.s));
        }
        Ok(FiberElement {
            s: a.s,
            values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn scale(&self, a: &FiberElement, c: C64) -> FiberElement {
        FiberElement {
            s: a.s,
            values: a.values.iter().map(|v| v * c).collect(),
        }
    }

    fn block_norm(&self, blk: &[C64]) -> f64 {
        if self.block == 1 {
            blk[0].norm()
        } else {
            op_norm(&CMat::from_row_slice(self.block, self.block, blk))
        }
    }

    /// `sup_x ‖a(x)‖`.
    pub fn norm(&self, a: &FiberElement) -> f64 {
        (0..self.npoints())
            .map(|x| self.block_norm(self.at(a, x)))
            .fold(0.0, f64::max)
    }

    /// `(a*a)(x)` as a scalar (its largest eigenvalue for matrix blocks).
    pub fn aa_at(&self, a: &FiberElement, x: usize) -> f64 {
        let n = self.block_norm(self.at(a, x));
        n * n
    }

    /// `dom(a) = {x : (a*a)(x) > 0}`.
    pub fn dom_of(&self, a: &FiberElement) -> Vec<usize> {
        (0..self.npoints()).filter(|&x| self.aa_at(a, x) > self.zero_tol).collect()
    }

    pub fn is_zero(&self, a: &FiberElement) -> bool {
        a.values.iter().all(|v| v.norm() <= self.zero_tol)
    }

    /// `a ≡_x a2`, i.e. `((a−a2)*(a−a2))(x) = 0`.
    pub fn eqx(&self, a: &FiberElement, a2: &FiberElement, x: usize) -> Result<bool, BundleError> {
        let d = self.add(a, &self.scale(a2, -ONE))?;
        let dd = self.mul(&self.star(&d), &d);
        Ok(self.block_norm(self.at(&dd, x)) <= self.zero_tol)
    }

    /// Coordinate open set of a fiber element's domain.
    pub fn dom_set(&self, a: &FiberElement) -> OpenSet {
        OpenSet::Discrete(self.dom_of(a).into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn flip_fibers_are_two_dimensional() {
        let b = fixtures::z2_flip();
        assert_eq!(b.dim(0), 2);
        assert_eq!(b.dim(1), 2);
    }

    #[test]
    fn product_and_star_formulas() {
        let b = fixtures::z2_flip();
        let g = 1;
        let a = b.delta(g, 0, 0);
        // δ_x in A_g is carried to θ_g(x) = y by the involution
        let a_star = b.star(&a);
        assert_eq!(b.value(&a_star, 1), ONE);
        let aa = b.mul(&a_star, &a);
        assert_eq!(aa.s, 0);
        assert_eq!(b.value(&aa, 0), ONE);
        assert_eq!(b.value(&aa, 1), ZERO);
    }

    #[test]
    fn eqx_examples() {
        let b = fixtures::z2_flip();
        let a = b.delta(1, 0, 0);
        assert!(b.eqx(&a, &a, 0).unwrap());
        // differ only at y: still equal at x
        let a2 = b.add(&a, &b.delta(1, 1, 0)).unwrap();
        assert!(b.eqx(&a, &a2, 0).unwrap());
        // (a−a2)*(a−a2)(x) = 4
        let far = b.scale(&a, C64::new(3.0, 0.0));
        assert!(!b.eqx(&far, &b.scale(&a, -ONE), 0).unwrap());
        assert!(matches!(b.eqx(&a, &b.delta(0, 0, 0), 0), Err(BundleError::FiberMismatch(1, 0))));
    }

    #[test]
    fn interval_bundle_samples_the_origin() {
        let b = fixtures::interval_s5(101);
        assert_eq!(b.npoints(), 101);
        assert!(b.coords().contains(&Point::Real(crate::spaces::qi(0))));
        // A_e lives on [-1,0)
        assert_eq!(b.dim(0), 50);
        assert_eq!(b.dim(1), 101);
    }

    #[test]
    fn rejects_bad_cocycles() {
        let (action, _) = fixtures::z4_cocycle_action();
        let err = FellBundle::twisted_action(action.clone(), |_, _, _| C64::new(2.0, 0.0), 1).unwrap_err();
        assert!(matches!(err, BundleError::CocycleNotUnimodular { .. }));
        let err = FellBundle::twisted_action(action.clone(), |_, _, _| C64::new(0.0, 1.0), 1).unwrap_err();
        assert!(matches!(err, BundleError::CocycleNotNormalized { .. }));
        // i on the single pair (g1,g1) and 1 elsewhere is not a cocycle
        let err = FellBundle::twisted_action(action, |s, t, _| if s == 1 && t == 1 { C64::new(0.0, 1.0) } else { ONE }, 1)
            .unwrap_err();
        assert!(matches!(err, BundleError::CocycleNotAssociative { .. }));
    }
}
