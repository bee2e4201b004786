//! Regular representations `π_x` on `ℓ²(G_x)`, the states `φ_x`, reduced
//! norms and the restriction expectation onto the unit space.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ConvError, Section};
use crate::fellbundle::FellBundle;
use crate::germgpd::{GermGroupoid, GermRef};
use crate::linalg::{op_norm, CMat, C64, ONE, ZERO};
use crate::linebundle::LineBundle;

/// `π_x` in the orthonormal basis `ref(γ)/‖ref(γ)‖`, `γ ∈ G_x`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub unit: usize,
    pub basis: Vec<usize>,
    pos: HashMap<usize, usize>,
}

pub fn regular_rep(l: &LineBundle, cell: usize) -> Representation {
    let basis = l.groupoid().from_cell(cell).to_vec();
    let pos = basis.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    Representation { unit: cell, basis, pos }
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, germ: usize) -> Option<usize> {
        self.pos.get(&germ).copied()
    }

    /// `π_x(ξ)δ_γ = Σ ξ(γ₁) δ_γ₁γ`.
    pub fn matrix(&self, l: &LineBundle, xi: &Section) -> CMat {
        let g = l.groupoid();
        let mut m = CMat::zeros(self.dim(), self.dim());
        for (j, &h) in self.basis.iter().enumerate() {
            for &p in g.from_cell(g.range(h)) {
                let c = xi.coeffs[p];
                if c == ZERO {
                    continue;
                }
                let ph = g.compose(p, h).expect("composable");
                let i = self.pos[&ph];
                m[(i, j)] += c * l.mulc(p, h).expect("composable") * l.ref_norm(ph) / l.ref_norm(h);
            }
        }
        m
    }

    /// The vector `δ_x` of the unit germ, if the cell is a unit.
    pub fn cyclic_vector(&self, l: &LineBundle) -> Option<usize> {
        self.position(l.groupoid().unit_at(self.unit)?)
    }
}

/// `φ_x(ξ) = ⟨π_x(ξ)δ_x, δ_x⟩`.
pub fn state_phi_x(l: &LineBundle, cell: usize, xi: &Section) -> C64 {
    let rep = regular_rep(l, cell);
    match rep.cyclic_vector(l) {
        Some(u) => rep.matrix(l, xi)[(u, u)],
        None => ZERO,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedNorm {
    pub norm: f64,
    pub per_unit: Vec<(String, f64)>,
}

/// `sup_x ‖π_x(ξ)‖` over the unit cells.
pub fn reduced_norm(l: &LineBundle, xi: &Section) -> ReducedNorm {
    let g = l.groupoid();
    let per_unit: Vec<(String, f64)> = g
        .unit_cells()
        .into_iter()
        .map(|x| {
            let rep = regular_rep(l, x);
            (g.cell_label(x), op_norm(&rep.matrix(l, xi)))
        })
        .collect();
    ReducedNorm {
        norm: per_unit.iter().map(|p| p.1).fold(0.0, f64::max),
        per_unit,
    }
}

/// Restriction of sections to the unit germs, defined when the germ
/// groupoid of the bundle's (exact) action is Hausdorff.
#[derive(Debug, Clone)]
pub struct UnitExpectation<'a> {
    l: &'a LineBundle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub passed: bool,
    pub idempotent: bool,
    pub contractive: bool,
    pub positive: bool,
    pub faithful: bool,
    pub bimodular: bool,
    pub witness: Option<Vec<GermRef>>,
}

impl<'a> UnitExpectation<'a> {
    pub fn new(b: &FellBundle, l: &'a LineBundle) -> Result<Self, ConvError> {
        if !GermGroupoid::build(b.topological_action()).hausdorff().hausdorff {
            return Err(ConvError::NotHausdorff);
        }
        Ok(Self { l })
    }

    pub fn apply(&self, xi: &Section) -> Section {
        let g = self.l.groupoid();
        Section {
            coeffs: (0..self.l.len())
                .map(|p| if g.is_unit(p) { xi.coeffs[p] } else { ZERO })
                .collect(),
        }
    }

    pub fn verify(&self, samples: usize, seed: u64) -> ExpectationReport {
        let l = self.l;
        let g = l.groupoid();
        let n = l.len();
        let tol = 1e-12;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = ExpectationReport {
            passed: false,
            idempotent: true,
            contractive: true,
            positive: true,
            faithful: true,
            bimodular: true,
            witness: None,
        };
        let random = |rng: &mut ChaCha8Rng, units_only: bool| Section {
            coeffs: (0..n)
                .map(|p| {
                    if units_only && !g.is_unit(p) {
                        ZERO
                    } else {
                        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    }
                })
                .collect(),
        };
        let close = |a: &Section, b: &Section| a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| (x - y).norm() <= tol);
        let mut tests: Vec<Section> = (0..n).map(|p| Section::point(n, p, ONE)).collect();
        tests.extend((0..samples).map(|_| random(&mut rng, false)));
        for xi in &tests {
            let e = self.apply(xi);
            r.idempotent &= self.apply(&e) == e;
            r.contractive &= reduced_norm(l, &e).norm <= reduced_norm(l, xi).norm + 1e-10;
            let pos = self.apply(&l.convolve(&l.involution(xi), xi));
            let mut all_zero = true;
            for p in (0..n).filter(|&p| g.is_unit(p)) {
                let v = pos.coeffs[p];
                if v.im.abs() > tol || v.re < -tol {
                    r.positive = false;
                    r.witness.get_or_insert_with(|| vec![g.germ_ref(p)]);
                }
                all_zero &= v.norm() <= tol;
            }
            if all_zero && xi.support().next().is_some() {
                r.faithful = false;
                r.witness.get_or_insert_with(|| xi.support().map(|p| g.germ_ref(p)).collect());
            }
            let (f, h) = (random(&mut rng, true), random(&mut rng, true));
            let lhs = self.apply(&l.convolve(&l.convolve(&f, xi), &h));
            let rhs = l.convolve(&l.convolve(&f, &e), &h);
            r.bimodular &= close(&lhs, &rhs);
        }
        r.passed = r.idempotent && r.contractive && r.positive && r.faithful && r.bimodular;
        r
    }
}
