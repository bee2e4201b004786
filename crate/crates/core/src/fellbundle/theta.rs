//! Recovering the canonical action `θ` from the bundle's algebra.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BundleError, FellBundle, FiberElement};
use crate::invsgp::Elem;
use crate::linalg::vec_max_diff;
use crate::spaces::{Action, PartialHomeo};

impl FellBundle {
    /// The unique partial map with `(a*ba)(x) = (a*a)(x)·b(θ_a(x))` for all
    /// `b ∈ A_{ss*}`, found by testing against indicator functions.
    pub fn theta_from_element(&self, a: &FiberElement) -> Result<PartialHomeo, BundleError> {
        // scalar fibers always commute pointwise; matrix fibers never do
        if self.block != 1 {
            return Err(BundleError::NotSemiAbelian);
        }
        let sg = self.semigroup();
        let s = a.s;
        let astar = self.star(a);
        let aa = self.mul(&astar, a);
        let range_idem = sg.range_idem(s);
        let tests: Vec<(usize, FiberElement)> = self
            .support(range_idem)
            .map(|y| (y, self.delta(range_idem, y, 0)))
            .collect();
        let sandwiches: Vec<FiberElement> = tests
            .iter()
            .map(|(_, b)| self.mul(&astar, &self.mul(b, a)))
            .collect();
        let tol = self.zero_tol.max(1e-12);
        let mut map = BTreeMap::new();
        for x in self.dom_of(a) {
            let aax = self.value(&aa, x);
            let scale = 1.0 + aax.norm();
            let fits = |y: usize| {
                tests.iter().zip(&sandwiches).all(|((ty, _), sw)| {
                    let by = if *ty == y { aax } else { crate::linalg::ZERO };
                    (self.value(sw, x) - by).norm() <= tol * scale
                })
            };
            let found: Vec<usize> = tests.iter().map(|(y, _)| *y).filter(|&y| fits(y)).collect();
            match found.as_slice() {
                [y] => {
                    map.insert(x, *y);
                }
                _ => return Err(BundleError::NoSolution { x }),
            }
        }
        Ok(PartialHomeo::Discrete(map))
    }

    /// `θ_s` glued from `θ_a` over the basis of `A_s` and a few seeded random
    /// elements; overlapping pieces must agree and every point of `U_{s*s}`
    /// (as seen by the fiber over `s*s`) must be covered.
    pub fn theta_s(&self, s: Elem) -> Result<PartialHomeo, BundleError> {
        let sg = self.semigroup();
        let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
        let mut elems = self.basis(s);
        elems.extend((0..2).map(|_| self.random_element(s, &mut rng)));
        let mut glued: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for (i, a) in elems.iter().enumerate() {
            let PartialHomeo::Discrete(m) = self.theta_from_element(a)? else {
                unreachable!("coordinate maps are discrete")
            };
            for (x, y) in m {
                match glued.get(&x) {
                    Some(&(j, y0)) if y0 != y => {
                        return Err(BundleError::GluingConflict { s, a1: j, a2: i, x });
                    }
                    Some(_) => {}
                    None => {
                        glued.insert(x, (i, y));
                    }
                }
            }
        }
        let src = sg.source_idem(s);
        for e in self.basis(src) {
            for x in self.dom_of(&e) {
                if !glued.contains_key(&x) {
                    return Err(BundleError::NotSaturated { s, x });
                }
            }
        }
        Ok(PartialHomeo::Discrete(glued.into_iter().map(|(x, (_, y))| (x, y)).collect()))
    }

    /// The action `s ↦ θ_s` recovered from the algebra, validated as an
    /// action on the coordinate space.
    pub fn canonical_action(&self) -> Result<Action, BundleError> {
        let sg = self.semigroup();
        let thetas = sg.elements().map(|s| self.theta_s(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Action::new(sg.clone(), self.action.space().clone(), thetas)?)
    }

    /// Checks `a·d = (d∘θ_s⁻¹)·a` for basis `a ∈ A_s`, `d ∈ A_{s*s}`;
    /// returns the first offending `(s, point)`.
    pub fn transport_identity_witness(&self) -> Option<(Elem, usize)> {
        if self.block != 1 {
            return None;
        }
        let sg = self.semigroup();
        for s in sg.elements() {
            let (src, rng) = (sg.source_idem(s), sg.range_idem(s));
            for a in self.basis(s) {
                for d in self.basis(src) {
                    let lhs = self.mul(&a, &d);
                    let mut moved = self.zero(rng);
                    for x in self.support(src).collect::<Vec<_>>() {
                        if let Some(y) = self.theta[s][x] {
                            moved.values[y] = self.value(&d, x);
                        }
                    }
                    let rhs = self.mul(&moved, &a);
                    if let Some(x) = (0..self.npoints()).find(|&x| vec_max_diff(self.at(&lhs, x), self.at(&rhs, x)) > 1e-12) {
                        return Some((s, x));
                    }
                }
            }
        }
        None
    }
}
