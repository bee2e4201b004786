//! The Fell line bundle `L` of a semi-abelian saturated bundle.
//!
//! Each fiber `L_γ` is one-dimensional. It is stored as a coefficient
//! against a reference element `ref(γ) ∈ A_s` for `γ = [s,x]`, with
//! `(ref*ref)(x) > 0`. The coefficient of another representative `b ∈ A_t`
//! of the same germ is
//!
//! ```text
//! λ = ((ref·d)*(b·d))(x) / ((ref·d)*(ref·d))(x)
//! ```
//!
//! for any `d ∈ A_e` with `d(x) > 0` and `s·e = t·e`.

mod roundtrip;
mod section;
mod twist;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fellbundle::{FellBundle, FiberElement};
use crate::germgpd::{GermGroupoid, GermRef};
use crate::linalg::{circle, C64, ONE};

pub use roundtrip::{round_trip, RoundTripError, RoundTripReport};
pub use section::{GelfandCheck, GelfandFailure, GelfandReport, Section};
pub use twist::{triple_class, triples_equivalent, triples_equivalent_left, Twist, TwistElement, TwistReport};

const WELL_DEFINED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LineError {
    #[error("no reference element for germ {0}")]
    NoReference(GermRef),
    #[error("structure constant of ({0}, {1}) depends on the representatives")]
    WellDefinednessViolation(GermRef, GermRef),
}

/// How a reference element is picked in each fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RefPolicy {
    /// `δ_x` in the fiber of the least representative.
    First,
    /// `δ_x` in the fiber of the greatest representative.
    Last,
    /// `u·δ_x` in the fiber of the least representative, with a seeded
    /// unimodular `u` (and `u = 1` on units).
    Gauged(u64),
}

/// `λ·ref(germ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineElement {
    pub germ: usize,
    pub lambda: C64,
}

#[derive(Debug, Clone)]
pub struct LineBundle {
    groupoid: GermGroupoid,
    policy: RefPolicy,
    refs: Vec<FiberElement>,
    ref_norm: Vec<f64>,
    pairs: Vec<(usize, usize, usize)>,
    mulc: HashMap<(usize, usize), C64>,
    starc: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineAxiomReport {
    pub passed: bool,
    pub checks: usize,
    /// Name of the failed identity and the germs involved.
    pub failure: Option<(String, Vec<GermRef>)>,
}

impl LineBundle {
    /// Builds `L` over the germ groupoid of the bundle's coordinate action.
    pub fn build(b: &FellBundle, policy: RefPolicy) -> Result<Self, LineError> {
        Self::with_groupoid(b, GermGroupoid::build(b.action()), policy)
    }

    pub fn with_groupoid(b: &FellBundle, g: GermGroupoid, policy: RefPolicy) -> Result<Self, LineError> {
        let sg = b.semigroup();
        let mut rng = ChaCha8Rng::seed_from_u64(match policy {
            RefPolicy::Gauged(seed) => seed,
            _ => 0,
        });
        let mut refs = Vec::with_capacity(g.len());
        let mut ref_norm = Vec::with_capacity(g.len());
        for id in 0..g.len() {
            let germ = g.germ(id);
            let x = germ.cell;
            let reps: Vec<usize> = sg
                .elements()
                .filter(|&t| g.germ_of(t, x) == Some(id) && b.in_support(t, x))
                .collect();
            let t = match policy {
                RefPolicy::Last => reps.last(),
                _ => reps.first(),
            }
            .copied()
            .ok_or_else(|| LineError::NoReference(g.germ_ref(id)))?;
            let mut r = b.delta(t, x, 0);
            if let RefPolicy::Gauged(_) = policy {
                let u = circle(rng.random_range(0.0..1.0));
                if !g.is_unit(id) {
                    r = b.scale(&r, u);
                }
            }
            let n = b.aa_at(&r, x).sqrt();
            if n <= b.zero_tol() {
                return Err(LineError::NoReference(g.germ_ref(id)));
            }
            refs.push(r);
            ref_norm.push(n);
        }
        let mut l = Self {
            pairs: g.composable(),
            groupoid: g,
            policy,
            refs,
            ref_norm,
            mulc: HashMap::new(),
            starc: Vec::new(),
        };
        let mut mulc = HashMap::with_capacity(l.pairs.len());
        for &(p, q, pq) in &l.pairs {
            let prod = b.mul(&l.refs[p], &l.refs[q]);
            mulc.insert((p, q), l.coeff(b, pq, &prod).expect("products represent the product germ"));
        }
        l.mulc = mulc;
        l.starc = (0..l.groupoid.len())
            .map(|p| {
                l.coeff(b, l.groupoid.inverse(p), &b.star(&l.refs[p]))
                    .expect("adjoints represent the inverse germ")
            })
            .collect();
        l.check_well_defined(b)?;
        Ok(l)
    }

    /// Recomputes each constant from an alternative representative where
    /// one exists (the last element in input order).
    fn check_well_defined(&self, b: &FellBundle) -> Result<(), LineError> {
        let g = &self.groupoid;
        let sg = b.semigroup();
        let alt: Vec<Option<(FiberElement, C64)>> = (0..g.len())
            .map(|id| {
                let x = g.germ(id).cell;
                let t = sg
                    .elements()
                    .rev()
                    .find(|&t| t != self.refs[id].s && g.germ_of(t, x) == Some(id) && b.in_support(t, x))?;
                let a = b.delta(t, x, 0);
                let alpha = self.coeff(b, id, &a)?;
                Some((a, alpha))
            })
            .collect();
        for &(p, q, pq) in &self.pairs {
            if alt[p].is_none() && alt[q].is_none() {
                continue;
            }
            let (ap, cp) = alt[p].clone().unwrap_or((self.refs[p].clone(), ONE));
            let (aq, cq) = alt[q].clone().unwrap_or((self.refs[q].clone(), ONE));
            let c = self.coeff(b, pq, &b.mul(&ap, &aq)).map(|c| c / (cp * cq));
            if c.is_none_or(|c| (c - self.mulc[&(p, q)]).norm() > WELL_DEFINED_TOL) {
                return Err(LineError::WellDefinednessViolation(g.germ_ref(p), g.germ_ref(q)));
            }
        }
        Ok(())
    }

    /// Coefficient of `a ∈ A_t` in the fiber over `germ`, or `None` when
    /// `[t, x]` is a different germ.
    pub fn coeff(&self, b: &FellBundle, germ: usize, a: &FiberElement) -> Option<C64> {
        let x = self.groupoid.germ(germ).cell;
        if self.groupoid.germ_of(a.s, x) != Some(germ) {
            return None;
        }
        let r = &self.refs[germ];
        let sg = b.semigroup();
        let e = sg
            .idempotents()
            .iter()
            .copied()
            .find(|&e| b.in_support(e, x) && sg.mul(r.s, e) == sg.mul(a.s, e))?;
        let d = b.delta(e, x, 0);
        let p = b.mul(r, &d);
        let q = b.mul(a, &d);
        let ps = b.star(&p);
        let num = b.value(&b.mul(&ps, &q), x);
        let den = b.value(&b.mul(&ps, &p), x);
        Some(num / den)
    }

    pub fn groupoid(&self) -> &GermGroupoid {
        &self.groupoid
    }

    pub fn policy(&self) -> RefPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.groupoid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groupoid.is_empty()
    }

    pub fn reference(&self, germ: usize) -> &FiberElement {
        &self.refs[germ]
    }

    /// `‖ref(γ)‖ = sqrt((ref*ref)(x))`.
    pub fn ref_norm(&self, germ: usize) -> f64 {
        self.ref_norm[germ]
    }

    pub fn composable(&self) -> &[(usize, usize, usize)] {
        &self.pairs
    }

    /// `ref(γ₁)·ref(γ₂) = mulc(γ₁,γ₂)·ref(γ₁γ₂)`.
    pub fn mulc(&self, g1: usize, g2: usize) -> Option<C64> {
        self.mulc.get(&(g1, g2)).copied()
    }

    /// `ref(γ)* = starc(γ)·ref(γ⁻¹)`.
    pub fn starc(&self, g: usize) -> C64 {
        self.starc[g]
    }

    pub fn element(&self, germ: usize, lambda: C64) -> LineElement {
        LineElement { germ, lambda }
    }

    pub fn line_norm(&self, v: &LineElement) -> f64 {
        v.lambda.norm() * self.ref_norm[v.germ]
    }

    pub fn mul(&self, v: &LineElement, w: &LineElement) -> Option<LineElement> {
        let c = self.mulc(v.germ, w.germ)?;
        let germ = self.groupoid.compose(v.germ, w.germ)?;
        Some(LineElement {
            germ,
            lambda: v.lambda * w.lambda * c,
        })
    }

    pub fn star(&self, v: &LineElement) -> LineElement {
        LineElement {
            germ: self.groupoid.inverse(v.germ),
            lambda: v.lambda.conj() * self.starc[v.germ],
        }
    }

    /// Fell line bundle identities on the structure constants.
    pub fn validate(&self) -> LineAxiomReport {
        let g = &self.groupoid;
        let tol = 1e-12;
        let mut checks = 0;
        let fail = |name: &str, germs: &[usize]| LineAxiomReport {
            passed: false,
            checks: 0,
            failure: Some((name.to_string(), germs.iter().map(|&x| g.germ_ref(x)).collect())),
        };
        for &(p, q, pq) in &self.pairs {
            checks += 1;
            let lhs = self.mulc[&(p, q)].norm() * self.ref_norm[pq];
            if (lhs - self.ref_norm[p] * self.ref_norm[q]).abs() > tol * (1.0 + lhs) {
                return fail("norm multiplicativity", &[p, q]);
            }
            // (vw)* = w*v*
            let inv = |x| g.inverse(x);
            let left = self.mulc[&(p, q)].conj() * self.starc[pq];
            let right = self.starc[q] * self.starc[p] * self.mulc[&(inv(q), inv(p))];
            if (left - right).norm() > tol {
                return fail("involution anti-multiplicative", &[p, q]);
            }
        }
        for &(p, q, pq) in &self.pairs {
            for &(_, r, qr) in self.pairs.iter().filter(|t| t.0 == q) {
                checks += 1;
                let pq_r = self.mulc[&(pq, r)];
                let p_qr = self.mulc[&(p, qr)];
                if (self.mulc[&(p, q)] * pq_r - self.mulc[&(q, r)] * p_qr).norm() > tol {
                    return fail("associativity", &[p, q, r]);
                }
            }
        }
        for p in 0..g.len() {
            checks += 1;
            let ip = g.inverse(p);
            if (self.starc[p].conj() * self.starc[ip] - ONE).norm() > tol {
                return fail("involution", &[p]);
            }
            // v*v = starc(γ)·mulc(γ⁻¹,γ)·ref(unit), a positive multiple
            let vv = self.starc[p] * self.mulc[&(ip, p)];
            let unit = g.unit_at(g.germ(p).cell).expect("germ source is a unit");
            let n2 = self.ref_norm[p] * self.ref_norm[p];
            if vv.im.abs() > tol * (1.0 + n2) || (vv.re * self.ref_norm[unit] - n2).abs() > tol * (1.0 + n2) {
                return fail("C*-identity", &[p]);
            }
        }
        LineAxiomReport {
            passed: true,
            checks,
            failure: None,
        }
    }

    /// `c(γ)` with `other.ref(γ) = c(γ)·self.ref(γ)`; the constants of the
    /// two line bundles then differ by the coboundary of `c`.
    pub fn gauge_to(&self, b: &FellBundle, other: &LineBundle) -> Vec<C64> {
        (0..self.len())
            .map(|g| self.coeff(b, g, other.reference(g)).expect("same groupoid"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn untwisted_flip_has_trivial_constants() {
        let b = fixtures::z2_flip();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        assert_eq!(l.len(), 4);
        for &(p, q, _) in l.composable() {
            assert_eq!(l.mulc(p, q), Some(ONE));
        }
        assert!((0..4).all(|g| l.starc(g) == ONE));
        assert!(l.validate().passed);
    }

    #[test]
    fn coefficient_of_a_multiple() {
        let b = fixtures::z2_flip();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        let g = l.groupoid().germ_of(1, 0).unwrap();
        let two = b.scale(l.reference(g), C64::new(2.0, 0.0));
        assert_eq!(l.coeff(&b, g, &two), Some(C64::new(2.0, 0.0)));
        assert_eq!(l.coeff(&b, l.groupoid().germ_of(0, 0).unwrap(), &two), None);
    }

    #[test]
    fn z4_constants_reproduce_the_cocycle() {
        let b = fixtures::z4_cocycle();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        let (_, omega) = fixtures::z4_cocycle_action();
        let g = l.groupoid();
        let i = C64::new(0.0, 1.0);
        let g1 = g.germ_of(1, 0).unwrap();
        let g2 = g.germ_of(2, 0).unwrap();
        assert!((l.mulc(g1, g1).unwrap() - i).norm() < 1e-15);
        assert!((l.mulc(g1, g2).unwrap() - i).norm() < 1e-15);
        for a in 0..4 {
            for c in 0..4 {
                let m = l.mulc(g.germ_of(a, 0).unwrap(), g.germ_of(c, 0).unwrap()).unwrap();
                assert!((m - omega[a][c]).norm() < 1e-15);
            }
        }
        assert!(l.validate().passed);
    }

    #[test]
    fn line_norms() {
        let b = fixtures::z2_flip();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        assert_eq!(l.line_norm(&l.element(1, C64::new(2.0, 0.0))), 2.0);
        assert_eq!(l.line_norm(&l.element(1, C64::new(0.0, 0.0))), 0.0);
    }

    #[test]
    fn zero_bundle_gives_empty_line_bundle() {
        let b = fixtures::zero_bundle();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        assert!(l.is_empty());
        assert!(l.validate().passed);
    }

    #[test]
    fn truncated_fiber_has_no_reference() {
        let b = fixtures::z2_flip().with_fiber_truncated(1, 0).with_fiber_truncated(1, 1);
        assert!(matches!(LineBundle::build(&b, RefPolicy::First), Err(LineError::NoReference(_))));
    }

    #[test]
    fn interval_bundle_germs_share_fibers() {
        let b = fixtures::interval_s5(21);
        let first = LineBundle::build(&b, RefPolicy::First).unwrap();
        let last = LineBundle::build(&b, RefPolicy::Last).unwrap();
        assert!(first.validate().passed && last.validate().passed);
        // at x < 0 the germ of σ is represented in A_e, A_1 and A_σ
        let x = 0;
        let g = first.groupoid().germ_of(2, x).unwrap();
        assert_eq!(first.reference(g).s, 0);
        assert_eq!(last.reference(g).s, 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn constants_change_by_a_coboundary(seed in 0u64..1000) {
            let b = fixtures::random_bundle(seed, &fixtures::RandomParams::small());
            let l1 = LineBundle::build(&b, RefPolicy::First).unwrap();
            let l2 = LineBundle::build(&b, RefPolicy::Gauged(seed)).unwrap();
            let l3 = LineBundle::build(&b, RefPolicy::Last).unwrap();
            prop_assert!(l1.validate().passed);
            prop_assert!(l2.validate().passed);
            for l in [&l2, &l3] {
                let c = l1.gauge_to(&b, l);
                for &(p, q, pq) in l1.composable() {
                    let expected = l1.mulc(p, q).unwrap() * c[p] * c[q] / c[pq];
                    prop_assert!((l.mulc(p, q).unwrap() - expected).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn norms_are_multiplicative(seed in 0u64..1000) {
            let b = fixtures::random_bundle(seed, &fixtures::RandomParams::small());
            let l = LineBundle::build(&b, RefPolicy::Gauged(seed)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for &(p, q, _) in l.composable() {
                let v = l.element(p, C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
                let w = l.element(q, C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
                let vw = l.mul(&v, &w).unwrap();
                prop_assert!((l.line_norm(&vw) - l.line_norm(&v) * l.line_norm(&w)).abs() < 1e-12);
                prop_assert!((l.line_norm(&l.star(&v)) - l.line_norm(&v)).abs() < 1e-12);
            }
        }
    }
}
